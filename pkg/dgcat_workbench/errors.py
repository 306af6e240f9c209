"""Exception hierarchy shared by every module of the workbench."""

from __future__ import annotations


class WorkbenchError(Exception):
    """Base class for all errors raised by the workbench."""


class DimensionMismatchError(WorkbenchError, ValueError):
    """Matrix or vector shapes do not fit together."""


class ValidationError(WorkbenchError):
    """A structure violates one of its axioms.

    *axiom* names the violated law and *location* pins down where it
    failed (objects, degrees, basis indices).
    """

    def __init__(self, axiom: str, message: str, location: dict | None = None) -> None:
        super().__init__(f"{axiom}: {message}")
        self.axiom = axiom
        self.location = dict(location or {})


class UnknownObjectError(WorkbenchError, KeyError):
    """An object identifier is not part of the category."""


class NotClosedError(WorkbenchError):
    """A map that has to commute with differentials does not."""


class NotQuasiIsomorphismError(WorkbenchError):
    """A homotopy inverse was requested for a map that is not a qis."""


class UncertifiedResolutionError(WorkbenchError):
    """A derived operation was handed a bar resolution that is not certified."""


class WorkspaceFormatError(WorkbenchError):
    """The workspace JSON is malformed; *path* locates the offending entry."""

    def __init__(self, path: str, message: str) -> None:
        super().__init__(f"{path}: {message}")
        self.path = path
