"""Exception hierarchy.

Every error carries a short ``code`` used by the command-line front end as a
machine-parseable prefix and to pick an exit status.
"""


class MobiusError(Exception):
    code = "error"
    exit_status = 1


class FormatError(MobiusError, ValueError):
    code = "parse-error"
    exit_status = 3


class ElementNotInFrame(MobiusError, KeyError):
    code = "element-not-in-frame"
    exit_status = 3

    def __str__(self):
        # KeyError.__str__ would repr() the message
        return str(self.args[0]) if self.args else ""


class DuplicateMember(MobiusError, ValueError):
    code = "duplicate-member"
    exit_status = 3


class DimensionMismatch(MobiusError, ValueError):
    code = "dimension-mismatch"
    exit_status = 3


class SetMismatch(MobiusError, ValueError):
    """Two graphs do not queue (target of one is not the source of the next)."""

    code = "set-mismatch"
    exit_status = 3


class FrameMismatch(MobiusError, ValueError):
    code = "frame-mismatch"
    exit_status = 6


class NotAPartialOrder(MobiusError, ValueError):
    code = "not-a-partial-order"
    exit_status = 8

    def __init__(self, axiom: str, detail: str = ""):
        self.axiom = axiom
        msg = f"relation is not {axiom}"
        super().__init__(f"{msg}: {detail}" if detail else msg)


class CapacityExceeded(MobiusError, ValueError):
    code = "capacity-exceeded"
    exit_status = 5


class UnsupportedConversion(MobiusError, ValueError):
    code = "unsupported-conversion"
    exit_status = 4


class InvalidBBA(MobiusError, ValueError):
    code = "invalid-bba"
    exit_status = 3


class TotalConflict(MobiusError, ArithmeticError):
    code = "total-conflict"
    exit_status = 7
