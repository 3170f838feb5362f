"""Exception types shared across the package."""


class UsageError(ValueError):
    """Caller supplied an argument outside its documented domain."""


class ChannelIntegrityError(RuntimeError):
    """A channel produced an output that is not a valid density matrix.

    This points at a broken Kraus set rather than bad input.
    """


class NoTransitionError(RuntimeError):
    """Concurrence does not change sign across the requested bracket."""
