"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class GLSError(Exception):
    """Base class for all package errors."""


class InputError(GLSError):
    """Malformed or inadmissible input (CLI exit code 2)."""


class IndistinguishableAtTruncation(InputError):
    """Two series agree on every known term."""


class TruncationTooShort(InputError):
    """A series does not carry enough terms for the requested computation."""


class NotASingularityScheme(InputError):
    """The operation needs T* to be exactly the essential tree."""


class LNotSmooth(InputError):
    """The germ passed as a line is singular at the centre."""


class BranchNotSmooth(InputError):
    """The chosen branch must be smooth."""


class MNotAdmissible(InputError):
    """The requested subtree M is not between T* meet L and T* meet Q."""


class QIsCentre(InputError):
    """Extension requested at the centre."""


class QNotOnL(InputError):
    """The requested point is not in T* meet L."""


class PaperInvariantViolation(GLSError):
    """An inequality that the certification procedure guarantees has failed."""

    def __init__(self, message: str, step: int | None = None) -> None:
        super().__init__(message)
        self.step = step


class ReplayMismatch(GLSError):
    """Replaying a certificate diverged from its recorded trace."""

    def __init__(self, message: str, step: int) -> None:
        super().__init__(f"step {step}: {message}")
        self.step = step


class Refusal(GLSError):
    """Strict certification declined because the entry inequality fails."""

    def __init__(self, reason: str, lhs: str = "", rhs: str = "") -> None:
        super().__init__(f"{reason}: {lhs} vs {rhs}")
        self.reason = reason
        self.lhs = lhs
        self.rhs = rhs
