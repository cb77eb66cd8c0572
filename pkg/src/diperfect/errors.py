class DiperfectError(Exception):
    pass


class PreconditionError(DiperfectError, ValueError):
    """An operation was called on input outside its contract."""


class SizeBoundError(PreconditionError):
    pass


class InvariantBreach(DiperfectError, RuntimeError):
    """A structural fact the construction relies on did not hold at runtime.

    ``rule`` names the step that relied on it, so a breach can be traced
    back to the place in the construction where it surfaced.
    """

    def __init__(self, rule, message):
        super().__init__(f"[{rule}] {message}")
        self.rule = rule
