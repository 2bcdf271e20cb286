"""Exception types raised by the simulator"""


class SimulationError(Exception):
    """Base class for all simulator failures"""


class ConfigError(SimulationError, ValueError):
    """Invalid physical configuration; the message names the offending field"""

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")


class ProtocolError(SimulationError, ValueError):
    """Invalid clap protocol (empty axis list, bad axis, bad trial count)"""


class AngleRangeError(SimulationError, ValueError):
    """Angle outside its admissible range"""


class NodeRegionError(SimulationError):
    """Particle sits where the density is numerically zero"""


class NonConvergedError(SimulationError):
    """RK4 step-halving self-check failed"""


class PacketsNotSeparatedError(SimulationError):
    """Spinor lobes overlap at the screen, so impact classification is meaningless"""


class GridTooCoarseError(SimulationError, ValueError):
    """Grid does not resolve the initial wavepacket"""


class UnstableStepError(SimulationError, ValueError):
    """Time step violates the split-operator step bound"""


class BoundaryLeakError(SimulationError):
    """Probability mass reached the periodic box margin"""


class TimeGridMismatchError(SimulationError, ValueError):
    """Trajectories do not share sample times"""


class SparseSamplingError(SimulationError, ValueError):
    """Consecutive trajectory samples are too far apart to scan for crossings"""
