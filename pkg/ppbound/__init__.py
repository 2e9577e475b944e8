"""ppbound - rational preperiodic points and explicit bounds for polynomials over Q."""

__version__ = "0.1.0"
