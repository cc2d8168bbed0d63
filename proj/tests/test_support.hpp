#pragma once

#include <complex>
#include <random>
#include <vector>

#include "cqtraj/model.hpp"
#include "cqtraj/velocity.hpp"

namespace cqtraj::test {

/// Uniform sample from the closed disk |z| <= radius.
inline Complex sample_disk(std::mt19937& rng, double radius) {
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    while (true) {
        const Complex z{unit(rng), unit(rng)};
        if (std::abs(z) <= 1.0) return radius * z;
    }
}

/// Uniform sample from [-radius, radius] on the real axis.
inline double sample_interval(std::mt19937& rng, double radius) {
    std::uniform_real_distribution<double> unit(-radius, radius);
    return unit(rng);
}

/// Complex points inside |x| <= radius that stay clear of wavefunction nodes.
/// `margin` is the node-exclusion size in units of the model length scale.
inline std::vector<Complex> sample_off_nodes(const ModelSpec& model, const Units& units,
                                             std::mt19937& rng, int count, double radius,
                                             double t, double margin = 1e-3) {
    std::vector<Complex> out;
    out.reserve(static_cast<std::size_t>(count));
    while (static_cast<int>(out.size()) < count) {
        const Complex x = sample_disk(rng, radius);
        if (!near_node(model, units, x, t, margin)) out.push_back(x);
    }
    return out;
}

/// Real points inside [-radius, radius] clear of nodes, same margin convention.
inline std::vector<double> sample_real_off_nodes(const ModelSpec& model, const Units& units,
                                                 std::mt19937& rng, int count, double radius,
                                                 double t, double margin = 1e-3) {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(count));
    while (static_cast<int>(out.size()) < count) {
        const double x = sample_interval(rng, radius);
        if (!near_node(model, units, Complex{x, 0.0}, t, margin)) out.push_back(x);
    }
    return out;
}

}  // namespace cqtraj::test
