#pragma once

namespace cqtraj {

// Nondimensional defaults: hbar = mass = 1.
struct Units {
    double hbar = 1.0;
    double mass = 1.0;
};

}  // namespace cqtraj
