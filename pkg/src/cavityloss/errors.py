"""Exception hierarchy. Each class carries the CLI exit code it maps to."""


class SimulationError(Exception):
    exit_code = 1


class ConfigError(SimulationError, ValueError):
    """Bad scenario input: parse failure, unknown key, invariant violation."""

    exit_code = 2


class NumericalError(SimulationError, RuntimeError):
    """A quadrature or root solve did not converge."""

    exit_code = 3


class DegenerateStateError(SimulationError, ValueError):
    """The physics has no answer, e.g. every pair is decoupled from the cavity."""

    exit_code = 4
