"""Exception hierarchy.

Input problems (bad files, bad ratings, incomplete rows) derive from
:class:`InputError`; model-level failures (no admissible parameters, negative
atoms) derive from :class:`ModelError`.  The CLI maps the former to exit
code 2.
"""

from __future__ import annotations


class FockConceptsError(Exception):
    """Base class for all errors raised by this package."""


class InputError(FockConceptsError, ValueError):
    pass


class EmptyInput(InputError):
    pass


class InvalidRating(InputError):
    def __init__(self, value, message: str | None = None):
        self.value = value
        super().__init__(message or f"rating {value!r} is not one of -3..+3")


class MalformedLine(InputError):
    def __init__(self, line_no: int, reason: str = "malformed line"):
        self.line_no = line_no
        self.reason = reason
        super().__init__(f"line {line_no}: {reason}")


class UnknownLabel(MalformedLine):
    def __init__(self, label: str, line_no: int = 0):
        self.label = label
        super().__init__(line_no, f"unknown concept label {label!r}")


class OutOfRangeValue(MalformedLine, InvalidRating):
    def __init__(self, value, line_no: int = 0):
        self.value = value
        MalformedLine.__init__(self, line_no, f"rating {value!r} outside -3..+3")


class MissingCombination(InputError):
    pass


class KeyMismatch(InputError):
    def __init__(self, unmatched):
        self.unmatched = list(unmatched)
        shown = ", ".join("/".join(map(str, key)) for key in self.unmatched[:10])
        more = "" if len(self.unmatched) <= 10 else f" (+{len(self.unmatched) - 10} more)"
        super().__init__(f"unmatched rows: {shown}{more}")


class ModelError(FockConceptsError):
    pass


class NegativeAtom(ModelError):
    """An atom of the constructed 4-point measure came out negative."""

    def __init__(self, index: int, value: float):
        self.index = index
        self.value = value
        super().__init__(f"atom {{{index}}} has negative measure {value:.6g}")


class Infeasible(ModelError):
    """No interference angle (or sector weighting) reproduces the target."""

    def __init__(self, message: str, cos_required: float | None = None,
                 bounds: tuple[float, float] | None = None):
        self.cos_required = cos_required
        self.bounds = bounds
        super().__init__(message)


class DegenerateMismatch(ModelError):
    """The interference term vanishes and the remaining value misses the target."""

    def __init__(self, value: float, target: float):
        self.value = value
        self.target = target
        super().__init__(
            f"interference vanishes (a=1 or b=1); model value {value:.6g} != target {target:.6g}"
        )


class DegenerateAngleRequired(ModelError):
    pass


class NonOrthogonalInputs(ModelError):
    pass
