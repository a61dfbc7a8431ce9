"""Two-link planar elbow manipulator: rigid-body dynamics, three tracking
controllers with constant-disturbance rejection, fixed-step closed-loop
simulation and runtime stability certificates."""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
