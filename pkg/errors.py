"""
Exception hierarchy shared by every module of the curvature toolkit
"""


class LieCurvError(Exception):
    """Base class for all toolkit errors"""


class InvalidInputError(LieCurvError, ValueError):
    """Raised when user-supplied data cannot be processed (bad type, bad spec, bad plane...)"""


class ExactnessError(LieCurvError, ArithmeticError):
    """Raised when an exact-mode operation would need a sum of incommensurable square roots"""

    def __init__(self, message: str = ""):
        hint = "re-evaluate in floating mode"
        super().__init__(f"{message} ({hint})" if message else hint)


class ConsistencyError(LieCurvError, RuntimeError):
    """Raised when an internal invariant breaks. Always an implementation bug, never bad input"""
