"""Exception hierarchy shared by the library and the `opkit` command.

Every error carries an `exit_code` so the management command can map it
onto the process status without a lookup table:

- 1: a law was violated (the input is well formed but wrong);
- 2: malformed input, typing errors, refused variants, cap overflows;
- 3: a truncated computation did not stabilize.

Law *checks* never raise for violations; they return a `CheckReport`
(see `opkit.fincat`). These exceptions are for operations whose
preconditions fail.
"""

from typing import List, Optional


class OpkitError(Exception):
    exit_code = 2


class MalformedInput(OpkitError):
    exit_code = 2


class DiagramSyntaxError(MalformedInput):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class DiagramTypeError(MalformedInput):
    pass


class VariantError(MalformedInput):
    pass


class BoundaryMismatch(MalformedInput):
    pass


class ValidationFailed(MalformedInput):
    def __init__(self, message: str, violations: Optional[List[str]] = None):
        self.violations = list(violations or [])
        detail = f": {self.violations[0]}" if self.violations else ""
        more = f" (+{len(self.violations) - 1} more)" if len(self.violations) > 1 else ""
        super().__init__(f"{message}{detail}{more}")


class CapExceeded(OpkitError):
    exit_code = 2

    def __init__(self, what: str, size: int, cap: int):
        super().__init__(f"{what}: {size} raw elements exceeds the cap of {cap} (set OPKIT_CAP to raise it)")
        self.size = size
        self.cap = cap


class NonStabilization(OpkitError):
    exit_code = 3


class UnboundedRange(NonStabilization):
    pass


class TruncationError(NonStabilization):
    pass


class CoherenceError(OpkitError):
    """An induced action is not well defined on a coend class."""
    exit_code = 1


class LawViolation(OpkitError):
    exit_code = 1

    def __init__(self, message: str, report=None):
        super().__init__(message)
        self.report = report
