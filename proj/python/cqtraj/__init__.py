"""Complex quantum trajectories: wavefunctions, velocity fields, orbits, action."""

from cqtraj._core import *  # noqa: F401,F403
from cqtraj._core import __version__  # noqa: F401
