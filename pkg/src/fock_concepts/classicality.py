"""Classicality diagnostics and Kolmogorovian representability.

For one exemplar x with weights mu(A), mu(B) and mu(A and B), a classical
(Kolmogorovian) model exists iff

    Ineq01   0 <= mu(A and B) <= mu(A) <= 1
    Ineq02   0 <= mu(A and B) <= mu(B) <= 1
    Ineq03   mu(A) + mu(B) - mu(A and B) <= 1

and then the four-point space Omega = {1, 2, 3, 4} with E_A = {1, 2},
E_B = {1, 3} and atoms

    p1 = mu(A and B)          p2 = mu(A) - mu(A and B)
    p3 = mu(B) - mu(A and B)  p4 = 1 - mu(A) - mu(B) + mu(A and B)

realises the data.  For "A and not B" the same holds with mu(not B) in place
of mu(B) (Ineq04-Ineq06), plus the negation identity Eq07:
mu(B) + mu(not B) = 1, so that the complement of E_notB carries mu(B).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.optimize import nnls

from .errors import NegativeAtom

# Slack on the theorem inequalities so that float rounding of exact rational
# data (multiples of 1/160) does not flip boundary cases.
INEQ_TOL = 1e-12
# Default tolerance on the negation identity 1 - mu(B) - mu(not B) = 0.
EQ07_TOL = 1e-9
# Residual below which the independent oracle declares a measure found.
ORACLE_TOL = 1e-9


class Condition(str, Enum):
    INEQ01 = "Ineq01"
    INEQ02 = "Ineq02"
    INEQ03 = "Ineq03"
    INEQ04 = "Ineq04"
    INEQ05 = "Ineq05"
    INEQ06 = "Ineq06"
    EQ07 = "Eq07"


@dataclass(frozen=True, slots=True)
class ConjunctionDiagnostics:
    delta: float
    k: float
    doub: float

    @property
    def overextended(self) -> bool:
        return self.delta > 0

    @property
    def double_overextended(self) -> bool:
        """Combined weight exceeds both marginals (Doub < 0)."""
        return self.doub < 0


@dataclass(frozen=True, slots=True)
class NegationDiagnostics:
    delta: float
    k: float
    doub: float
    l: float  # noqa: E741

    @property
    def overextended(self) -> bool:
        return self.delta > 0

    @property
    def double_overextended(self) -> bool:
        return self.doub < 0


@dataclass(frozen=True, slots=True)
class KolmogorovAtoms:
    p1: float
    p2: float
    p3: float
    p4: float

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.p1, self.p2, self.p3, self.p4)

    @property
    def total(self) -> float:
        return self.p1 + self.p2 + self.p3 + self.p4

    @property
    def first_event(self) -> float:
        """P({1, 2}), the measure of E_A."""
        return self.p1 + self.p2

    @property
    def second_event(self) -> float:
        """P({1, 3}), the measure of E_B (or E_notB)."""
        return self.p1 + self.p3


@dataclass(frozen=True, slots=True)
class ClassicalityVerdict:
    violated: frozenset[Condition]
    atoms: KolmogorovAtoms | None

    def __post_init__(self):
        object.__setattr__(self, "violated", frozenset(self.violated))
        if self.violated and self.atoms is not None:
            raise ValueError("atoms are only defined for representable data")
        if not self.violated and self.atoms is None:
            raise ValueError("representable verdict requires atoms")

    @property
    def representable(self) -> bool:
        return not self.violated

    def violated_names(self) -> list[str]:
        """Violated conditions in canonical order."""
        return [c.value for c in Condition if c in self.violated]


# ---------------------------------------------------------------------------
# Diagnostics
# ---------------------------------------------------------------------------


def conjunction_diagnostics(mu_a: float, mu_b: float, mu_and: float) -> ConjunctionDiagnostics:
    """Delta (minimum-rule deviation), k (Kolmogorov factor) and Doub."""
    return ConjunctionDiagnostics(
        delta=mu_and - min(mu_a, mu_b),
        k=1.0 - mu_a - mu_b + mu_and,
        doub=max(mu_a, mu_b) - mu_and,
    )


def negation_diagnostics(mu_a: float, mu_b: float, mu_not_b: float,
                         mu_and_not: float) -> NegationDiagnostics:
    """Diagnostics of "A and not B" plus the negation identity l = 1 - mu(B) - mu(not B)."""
    c = conjunction_diagnostics(mu_a, mu_not_b, mu_and_not)
    return NegationDiagnostics(delta=c.delta, k=c.k, doub=c.doub, l=1.0 - mu_b - mu_not_b)


# ---------------------------------------------------------------------------
# Constructive measures
# ---------------------------------------------------------------------------


def _atoms(mu_a: float, mu_second: float, mu_and: float, tol: float) -> KolmogorovAtoms:
    values = (
        mu_and,
        mu_a - mu_and,
        mu_second - mu_and,
        1.0 - mu_a - mu_second + mu_and,
    )
    for i, p in enumerate(values, start=1):
        if p < -tol:
            raise NegativeAtom(i, p)
    return KolmogorovAtoms(*values)


def construct_atoms_conjunction(mu_a: float, mu_b: float, mu_and: float,
                                tol: float = INEQ_TOL) -> KolmogorovAtoms:
    """Four-atom measure reproducing mu(A), mu(B), mu(A and B).

    Raises :class:`NegativeAtom` (1-based index) if any atom is below ``-tol``.
    """
    return _atoms(mu_a, mu_b, mu_and, tol)


def construct_atoms_negation(mu_a: float, mu_not_b: float, mu_and_not: float,
                             tol: float = INEQ_TOL) -> KolmogorovAtoms:
    """Four-atom measure with E_notB = {1, 3}; P({2, 4}) then plays mu(B)."""
    return _atoms(mu_a, mu_not_b, mu_and_not, tol)


# ---------------------------------------------------------------------------
# Theorem checks
# ---------------------------------------------------------------------------


def _inequalities(mu_a: float, mu_second: float, mu_and: float,
                  names: tuple[Condition, Condition, Condition], tol: float) -> set[Condition]:
    first, second, third = names
    violated = set()

    def in_unit(v):
        return -tol <= v <= 1.0 + tol

    if not (in_unit(mu_a) and in_unit(mu_and) and -tol <= mu_and and mu_and <= mu_a + tol):
        violated.add(first)
    if not (in_unit(mu_second) and in_unit(mu_and) and -tol <= mu_and and mu_and <= mu_second + tol):
        violated.add(second)
    if mu_a + mu_second - mu_and > 1.0 + tol:
        violated.add(third)
    return violated


def check_theorem1(mu_a: float, mu_b: float, mu_and: float,
                   tol: float = INEQ_TOL) -> ClassicalityVerdict:
    """Kolmogorovian representability of (mu(A), mu(B), mu(A and B))."""
    violated = _inequalities(mu_a, mu_b, mu_and,
                             (Condition.INEQ01, Condition.INEQ02, Condition.INEQ03), tol)
    atoms = None if violated else construct_atoms_conjunction(mu_a, mu_b, mu_and, tol)
    return ClassicalityVerdict(frozenset(violated), atoms)


def check_theorem2(mu_a: float, mu_b: float, mu_not_b: float, mu_and_not: float,
                   tol_eq: float = EQ07_TOL, tol: float = INEQ_TOL) -> ClassicalityVerdict:
    """Kolmogorovian representability of mu(A), mu(B), mu(not B), mu(A and not B).

    The negation identity is tested as ``|1 - mu_b - mu_not_b| <= tol_eq``.
    """
    violated = _inequalities(mu_a, mu_not_b, mu_and_not,
                             (Condition.INEQ04, Condition.INEQ05, Condition.INEQ06), tol)
    if not (-tol <= mu_b <= 1.0 + tol) or abs(1.0 - mu_b - mu_not_b) > tol_eq:
        violated.add(Condition.EQ07)
    atoms = None if violated else construct_atoms_negation(mu_a, mu_not_b, mu_and_not, tol)
    return ClassicalityVerdict(frozenset(violated), atoms)


# ---------------------------------------------------------------------------
# Independent oracle
# ---------------------------------------------------------------------------

# Atoms of Omega listed by (member of first event, member of second event).
_MEMBERSHIP = list(itertools.product((True, False), repeat=2))


def feasibility_oracle(mu_a: float, mu_second: float, mu_and: float,
                       mu_complement: float | None = None, tol: float = ORACLE_TOL) -> bool:
    """Search for a probability measure on the four Venn cells of two events.

    Solves the non-negative least-squares problem ``min ||P p - w||`` with
    ``p >= 0`` over the cells, whose rows impose total mass 1, P(E1) = mu_a,
    P(E2) = mu_second and P(E1 and E2) = mu_and.  If ``mu_complement`` is
    given it also imposes P(not E2) = mu_complement (the role of mu(B) when
    E2 is the event "not B").  Feasible iff the residual is at most ``tol``.

    This does not use the closed-form inequalities; it exists to cross-check
    :func:`check_theorem1` and :func:`check_theorem2`.
    """
    rows = [
        [1.0 for _ in _MEMBERSHIP],
        [float(in1) for in1, _ in _MEMBERSHIP],
        [float(in2) for _, in2 in _MEMBERSHIP],
        [float(in1 and in2) for in1, in2 in _MEMBERSHIP],
    ]
    rhs = [1.0, mu_a, mu_second, mu_and]
    if mu_complement is not None:
        rows.append([float(not in2) for _, in2 in _MEMBERSHIP])
        rhs.append(mu_complement)
    _, residual = nnls(np.array(rows), np.array(rhs, dtype=float))
    return bool(residual <= tol)
