"""Exception hierarchy.

Every error carries a machine-readable ``reason`` so the CLI can emit
structured reports and map each family onto an exit code.
"""


class BindmodError(Exception):
    """Base class for all errors raised by the package."""

    reason = "Error"
    exit_code = 4

    def __init__(self, message="", **details):
        super().__init__(message or self.reason)
        self.details = details

    def to_dict(self):
        out = {"reason": self.reason, "message": str(self)}
        if self.details:
            out["details"] = {k: _jsonable(v) for k, v in sorted(self.details.items())}
        return out


def _jsonable(v):
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, (int, str, bool)) or v is None:
        return v
    return str(v)


class ParseError(BindmodError):
    reason = "ParseError"
    exit_code = 2


class ValidationError(BindmodError):
    """Structural violation of the input problem; ``reason`` names which."""

    exit_code = 2

    def __init__(self, reason, message="", **details):
        self.reason = reason
        super().__init__(message or reason, **details)


class NotSublattice(BindmodError):
    reason = "NotSublattice"


class ResourceLimit(BindmodError):
    reason = "ResourceLimit"
    exit_code = 3


class AssumptionViolated(BindmodError):
    reason = "AssumptionViolated"
    exit_code = 3


class NotHolonomic(AssumptionViolated):
    reason = "NotHolonomic"


class SpecializationUnstable(AssumptionViolated):
    reason = "SpecializationUnstable"


class NotArtinian(ValidationError):
    def __init__(self, message="", **details):
        super().__init__("NotArtinian", message, **details)


class CapExceeded(ResourceLimit):
    reason = "CapExceeded"


class PochhammerPole(AssumptionViolated):
    reason = "PochhammerPole"


class UnsupportedRank(AssumptionViolated):
    reason = "UnsupportedRank"


class TruncationTooSmall(ResourceLimit):
    reason = "TruncationTooSmall"


class DegenerateInput(AssumptionViolated):
    reason = "DegenerateInput"
