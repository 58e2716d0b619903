"""Exception hierarchy shared by the library and the command line front end."""


class MWISRError(Exception):
    """Base class for every error raised by this package."""


class ParameterError(MWISRError, ValueError):
    """A numeric parameter (delta, epsilon, k, grid cap) is out of range."""


class InputError(MWISRError, ValueError):
    """The rectangle family violates a structural precondition."""


class ContractError(MWISRError, ValueError):
    """A caller broke the documented precondition of a routine."""


class ResourceError(MWISRError, RuntimeError):
    """A configured cap (enumeration size, oracle size) would be exceeded."""


class InvariantError(MWISRError, AssertionError):
    """An internal invariant failed; this always indicates a bug."""
