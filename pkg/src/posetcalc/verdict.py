"""Three-valued verdicts with replayable witnesses."""

from __future__ import annotations

YES = "yes"
NO = "no"
UNKNOWN = "unknown"


class Verdict:
    """yes / no / unknown, with an optional explanation payload.

    yes/no verdicts carry a witness wherever one exists; unknown appears only
    where the decision procedure is documented as partial (sphere and ball
    recognition away from low dimensions, and budget-limited searches).
    """

    __slots__ = ("value", "witness")

    def __init__(self, value, witness=None):
        if value not in (YES, NO, UNKNOWN):
            raise ValueError("bad verdict value: %r" % (value,))
        self.value = value
        self.witness = witness

    @classmethod
    def yes(cls, witness=None):
        return cls(YES, witness)

    @classmethod
    def no(cls, witness=None):
        return cls(NO, witness)

    @classmethod
    def unknown(cls, witness=None):
        return cls(UNKNOWN, witness)

    @property
    def is_yes(self):
        return self.value == YES

    @property
    def is_no(self):
        return self.value == NO

    @property
    def is_unknown(self):
        return self.value == UNKNOWN

    def __eq__(self, other):
        if isinstance(other, str):
            return self.value == other
        return isinstance(other, Verdict) and self.value == other.value

    def __hash__(self):
        return hash(self.value)

    def __repr__(self):
        if self.witness is None:
            return "Verdict(%s)" % self.value
        return "Verdict(%s, %r)" % (self.value, self.witness)


def verdict_all(verdicts):
    """Conjunction with unknown propagation: no beats unknown beats yes."""
    out = Verdict.yes()
    for v in verdicts:
        if v.is_no:
            return v
        if v.is_unknown:
            out = v
    return out
