"""Exception types raised by the simulation library."""


class DegenerateChannelError(ValueError):
    """A single-path channel has a deterministic envelope and no density."""


class PacketNotFoundError(RuntimeError):
    """The chirp correlation peak did not clear the detection threshold."""


class InvalidFrameError(ValueError):
    """A received frame cannot be used for channel estimation."""
