from typing import Optional


class ProximalVortexError(Exception):
    """Base class for every error raised by the package."""


class MalformedSubsetError(ProximalVortexError, ValueError):
    pass


class NoProbeError(ProximalVortexError, ValueError):
    pass


class CapExceededError(ProximalVortexError, ValueError):
    def __init__(self, n: int, cap: int, what: str = "exhaustive enumeration"):
        super().__init__(f"{what} refused: ground set of {n} points exceeds cap {cap}")
        self.n = n
        self.cap = cap


class LengthMismatchError(ProximalVortexError, ValueError):
    pass


class UnregisteredSpaceError(ProximalVortexError, ValueError):
    pass


class GroupTableError(ProximalVortexError, ValueError):
    pass


class VortexRejected(ProximalVortexError, ValueError):
    """
    Raised by ``build_vortex`` when a PlanarVortex invariant is violated.

    ``tag`` is one of NOT_NESTED, NOT_SIMPLE, DISCONNECTED, DEGENERATE,
    UNDECLARED_VERTEX, BAD_BRIDGE.
    """

    def __init__(self, tag: str, detail: str):
        super().__init__(f"{tag}: {detail}")
        self.tag = tag
        self.detail = detail


class WorkspaceError(ProximalVortexError, ValueError):
    """
    A workspace file failed to parse or validate.

    ``path`` is a dotted location inside the JSON document
    (e.g. ``spaces.S.edges[2]``); ``line``/``column`` are set for
    syntax errors.
    """

    def __init__(
        self,
        path: str,
        message: str,
        *,
        line: Optional[int] = None,
        column: Optional[int] = None,
    ):
        where = path or "<root>"
        if line is not None:
            where = f"line {line}, column {column}"
        super().__init__(f"{where}: {message}")
        self.path = path
        self.message = message
        self.line = line
        self.column = column
