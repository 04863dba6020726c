"""Two-sector Fock-space model of concept combination.

An exemplar x is represented in F = C^3 (+) (C^3 (x) C^3).  Sector 1 holds the
superposition (|A> + |B>)/sqrt(2) of two orthogonal concept vectors; sector 2
holds the product |A> (x) |B>.  With sector weights m^2 + n^2 = 1 the
predicted membership of "A and B" is

    m^2 mu_A mu_B + n^2 ((mu_A + mu_B)/2 + sqrt(1-a) sqrt(1-b) cos(theta))

and of "A or B" the same with the sector-2 value mu_A + mu_B - mu_A mu_B.
The regime parameters (a, b) are (mu_A, mu_B) when mu_A + mu_B > 1 and
(1 - mu_A, 1 - mu_B) otherwise, which keeps every vector component real up to
one global phase on |B>.

Angles are in degrees; ``None`` stands for an arbitrary angle, admissible
only when the interference amplitude vanishes (a = 1 or b = 1).
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.linalg import block_diag

from .errors import (
    DegenerateAngleRequired,
    DegenerateMismatch,
    Infeasible,
    ModelError,
    NonOrthogonalInputs,
)

# Sector weights must satisfy m^2 + n^2 = 1 to this precision.
WEIGHT_SUM_TOL = 1e-12
# Slack when comparing a required cosine with [-1, 1] and targets with bounds.
COS_TOL = 1e-12
# How close the interference-free value must be to the target in degenerate cases.
DEGENERATE_TOL = 1e-9
# Orthogonality / unit-norm tolerance for concept vectors.
VECTOR_TOL = 1e-12
# Evaluations outside [0, 1] by more than this are reported as errors.
RANGE_TOL = 1e-9


class ModelRangeError(ModelError):
    pass


class Regime(str, Enum):
    SUM_LE_1 = "SumLE1"
    SUM_GT_1 = "SumGT1"


class Connective(str, Enum):
    CONJUNCTION = "conjunction"
    DISJUNCTION = "disjunction"


class Strategy(str, Enum):
    """How the sector weight m^2 is chosen when fitting a row."""

    TABLE = "table"
    BALANCED_THETA = "balanced-theta"
    FIXED_M2 = "fixed-m2"


@dataclass(frozen=True, slots=True)
class RegimeParams:
    """Regime and (a, b).

    ``comp_a = 1 - a``, ``comp_b = 1 - b`` and ``excess = a + b - 1`` are kept
    alongside; :func:`regime_params` computes them directly from the weights,
    avoiding cancellation when a or b is close to 0 or 1.
    """

    regime: Regime
    a: float
    b: float
    comp_a: float | None = None
    comp_b: float | None = None
    excess: float | None = None

    def __post_init__(self):
        if self.comp_a is None:
            object.__setattr__(self, "comp_a", 1.0 - self.a)
        if self.comp_b is None:
            object.__setattr__(self, "comp_b", 1.0 - self.b)
        if self.excess is None:
            object.__setattr__(self, "excess", self.a + self.b - 1.0)

    @property
    def amplitude(self) -> float:
        """sqrt(1-a) sqrt(1-b), the maximal size of the interference term."""
        return math.sqrt(max(0.0, self.comp_a)) * math.sqrt(max(0.0, self.comp_b))

    @property
    def degenerate(self) -> bool:
        """True when the interference term vanishes for every angle."""
        return self.comp_a <= 0.0 or self.comp_b <= 0.0


@dataclass(frozen=True, slots=True)
class FockParameters:
    m2: float
    n2: float
    theta_deg: float | None

    def __post_init__(self):
        if not (0.0 <= self.m2 <= 1.0 and 0.0 <= self.n2 <= 1.0):
            raise ValueError(f"sector weights m2={self.m2}, n2={self.n2} outside [0, 1]")
        if abs(self.m2 + self.n2 - 1.0) > WEIGHT_SUM_TOL:
            raise ValueError(f"m2 + n2 = {self.m2 + self.n2} != 1")
        if self.theta_deg is not None and not (0.0 <= self.theta_deg <= 180.0):
            raise ValueError(f"theta {self.theta_deg} outside [0, 180] degrees")

    @classmethod
    def from_m2(cls, m2: float, theta_deg: float | None) -> FockParameters:
        return cls(float(m2), 1.0 - float(m2), None if theta_deg is None else float(theta_deg))

    @property
    def arbitrary_angle(self) -> bool:
        return self.theta_deg is None


def _cos_deg(theta_deg: float) -> float:
    # Exact values at multiples of 90 degrees keep trivial cases exact.
    q, r = divmod(theta_deg, 90.0)
    if r == 0.0:
        return (1.0, 0.0, -1.0, 0.0)[int(q) % 4]
    return math.cos(math.radians(theta_deg))


# ---------------------------------------------------------------------------
# Scalar model
# ---------------------------------------------------------------------------


def regime_params(mu_a: float, mu_second: float) -> RegimeParams:
    """Regime and (a, b); a sum of exactly 1 belongs to ``SumLE1``.

    The regime is decided on mu_a + mu_second - 1 computed without
    cancellation, which a rounded floating-point sum can get wrong near the
    diagonal.
    """
    # mu_a + mu_second - 1, subtracting from whichever complement is exact
    # (1 - x is exact for x >= 0.5) so the error stays relative to the result.
    if mu_a >= mu_second:
        gap = mu_second - (1.0 - mu_a)
    else:
        gap = mu_a - (1.0 - mu_second)
    # Decimal data such as 0.3625 + 0.6375 sums to 1 only up to rounding of
    # the inputs; a gap of a few ulps relative to the smallest of the four
    # weights is treated as the boundary (which belongs to SumLE1).
    scale = min(mu_a, mu_second, 1.0 - mu_a, 1.0 - mu_second)
    band = 4.0 * sys.float_info.epsilon * scale
    if gap <= band:
        return RegimeParams(Regime.SUM_LE_1, 1.0 - mu_a, 1.0 - mu_second,
                            comp_a=mu_a, comp_b=mu_second, excess=0.0 if gap >= -band else -gap)
    return RegimeParams(Regime.SUM_GT_1, mu_a, mu_second,
                        comp_a=1.0 - mu_a, comp_b=1.0 - mu_second, excess=max(0.0, gap))


def interference_term(rp: RegimeParams, theta_deg: float | None) -> float:
    """sqrt(1-a) sqrt(1-b) cos(theta); zero whenever a = 1 or b = 1."""
    if rp.degenerate:
        return 0.0
    if theta_deg is None:
        raise DegenerateAngleRequired(
            f"an angle is required when a={rp.a:.6g} and b={rp.b:.6g} are both below 1"
        )
    return rp.amplitude * _cos_deg(theta_deg)


def sector2_value(mu_a: float, mu_second: float,
                  connective: Connective = Connective.CONJUNCTION) -> float:
    """Product-rule value of the tensor-product sector."""
    if Connective(connective) is Connective.CONJUNCTION:
        return mu_a * mu_second
    return mu_a + mu_second - mu_a * mu_second


def _evaluate(mu_a, mu_second, params: FockParameters, connective) -> float:
    rp = regime_params(mu_a, mu_second)
    avg = 0.5 * (mu_a + mu_second)
    value = (params.m2 * sector2_value(mu_a, mu_second, connective)
             + params.n2 * (avg + interference_term(rp, params.theta_deg)))
    if not (-RANGE_TOL <= value <= 1.0 + RANGE_TOL):
        raise ModelRangeError(f"model value {value!r} outside [0, 1]")
    return value


def eval_conjunction(mu_a: float, mu_second: float, params: FockParameters) -> float:
    """Predicted weight of "A and B" (or "A and not B" with mu_second = mu(not B))."""
    return _evaluate(mu_a, mu_second, params, Connective.CONJUNCTION)


def eval_disjunction(mu_a: float, mu_b: float, params: FockParameters) -> float:
    """Predicted weight of "A or B"."""
    return _evaluate(mu_a, mu_b, params, Connective.DISJUNCTION)


def evaluate(mu_a: float, mu_second: float, params: FockParameters,
             connective: Connective = Connective.CONJUNCTION) -> float:
    return _evaluate(mu_a, mu_second, params, Connective(connective))


def required_cosine(mu_a: float, mu_second: float, mu_target: float, m2: float,
                    connective: Connective = Connective.CONJUNCTION) -> float:
    """cos(theta) needed to reach ``mu_target`` at sector weight ``m2``.

    Exact inverse of the forward model:
    ``[(mu_target - m2 S2) / n2 - (mu_A + mu_second)/2] / (sqrt(1-a) sqrt(1-b))``.
    """
    rp = regime_params(mu_a, mu_second)
    n2 = 1.0 - m2
    if rp.degenerate:
        raise DegenerateAngleRequired("no angle dependence when a = 1 or b = 1")
    if n2 <= 0.0:
        raise DegenerateAngleRequired("no angle dependence when n2 = 0")
    s2 = sector2_value(mu_a, mu_second, connective)
    avg = 0.5 * (mu_a + mu_second)
    return ((mu_target - m2 * s2) / n2 - avg) / rp.amplitude


def attainable_range(mu_a: float, mu_second: float,
                     connective: Connective = Connective.CONJUNCTION,
                     m2: float | None = None) -> tuple[float, float]:
    """Interval of model values over all angles (and over all m2 if ``m2`` is None)."""
    rp = regime_params(mu_a, mu_second)
    s2 = sector2_value(mu_a, mu_second, connective)
    avg = 0.5 * (mu_a + mu_second)
    amp = 0.0 if rp.degenerate else rp.amplitude
    if m2 is None:
        return (min(s2, avg - amp), max(s2, avg + amp))
    n2 = 1.0 - m2
    return (m2 * s2 + n2 * (avg - amp), m2 * s2 + n2 * (avg + amp))


def solve_theta(mu_a: float, mu_second: float, mu_target: float, m2: float,
                connective: Connective = Connective.CONJUNCTION,
                degenerate_tol: float = DEGENERATE_TOL) -> float | None:
    """Interference angle reproducing ``mu_target`` at sector weight ``m2``.

    Returns ``None`` (arbitrary angle) when a = 1 or b = 1 and the
    interference-free value already matches the target.  With m2 = 1 the
    angle has no effect either; 90 degrees is returned on a match.

    Raises :class:`Infeasible` when the required cosine lies outside
    [-1, 1] and :class:`DegenerateMismatch` when there is no angle dependence
    and the fixed value misses the target.
    """
    if not (0.0 <= m2 <= 1.0):
        raise ValueError(f"m2={m2} outside [0, 1]")
    connective = Connective(connective)
    rp = regime_params(mu_a, mu_second)
    if rp.degenerate or m2 == 1.0:
        value = m2 * sector2_value(mu_a, mu_second, connective) + (1.0 - m2) * 0.5 * (mu_a + mu_second)
        if abs(value - mu_target) > degenerate_tol:
            raise DegenerateMismatch(value, mu_target)
        return None if rp.degenerate else 90.0
    c = required_cosine(mu_a, mu_second, mu_target, m2, connective)
    if abs(c) > 1.0 + COS_TOL:
        lo, hi = attainable_range(mu_a, mu_second, connective, m2)
        raise Infeasible(
            f"target {mu_target:.6g} outside attainable [{lo:.6g}, {hi:.6g}] at m2={m2:.6g} "
            f"(required cos(theta) = {c:.6g})",
            cos_required=c, bounds=(lo, hi),
        )
    return math.degrees(math.acos(min(1.0, max(-1.0, c))))


def fit_parameters(mu_a: float, mu_second: float, mu_target: float,
                   strategy: Strategy = Strategy.BALANCED_THETA, m2: float | None = None,
                   connective: Connective = Connective.CONJUNCTION,
                   degenerate_tol: float = DEGENERATE_TOL) -> FockParameters:
    """Choose (m2, theta) reproducing ``mu_target``.

    ``table`` and ``fixed-m2`` solve for theta at the given ``m2``.
    ``balanced-theta`` takes theta = 90 degrees and solves the linear
    equation for m2 when the target lies between the sector-2 value and the
    sector-1 average; otherwise it takes m2 = 0, which is where the required
    angle is closest to 90 degrees.
    """
    strategy = Strategy(strategy)
    connective = Connective(connective)
    if strategy in (Strategy.TABLE, Strategy.FIXED_M2):
        if m2 is None:
            raise ValueError(f"strategy {strategy.value} needs m2")
        theta = solve_theta(mu_a, mu_second, mu_target, m2, connective, degenerate_tol)
        return FockParameters.from_m2(m2, theta)

    lo, hi = attainable_range(mu_a, mu_second, connective)
    if not (lo - COS_TOL <= mu_target <= hi + COS_TOL):
        raise Infeasible(
            f"target {mu_target:.6g} outside attainable [{lo:.6g}, {hi:.6g}] for any m2, theta",
            bounds=(lo, hi),
        )
    rp = regime_params(mu_a, mu_second)
    s2 = sector2_value(mu_a, mu_second, connective)
    avg = 0.5 * (mu_a + mu_second)
    theta_mid = None if rp.degenerate else 90.0
    if min(s2, avg) <= mu_target <= max(s2, avg):
        m2_star = 0.0 if avg == s2 else (avg - mu_target) / (avg - s2)
        return FockParameters.from_m2(min(1.0, max(0.0, m2_star)), theta_mid)
    if rp.degenerate:
        # Only reachable within COS_TOL of an endpoint.
        return FockParameters.from_m2(0.0 if abs(mu_target - avg) <= abs(mu_target - s2) else 1.0,
                                      None)
    theta = solve_theta(mu_a, mu_second, mu_target, 0.0, connective, degenerate_tol)
    return FockParameters.from_m2(0.0, theta)


# ---------------------------------------------------------------------------
# Vectors, projectors and states
# ---------------------------------------------------------------------------


def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.asarray(array)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class ConceptVectorPair:
    vec_a: np.ndarray
    vec_b: np.ndarray
    regime: RegimeParams
    phase_deg: float

    @property
    def stripped_vec_b(self) -> np.ndarray:
        """|B> with its global phase removed (real components)."""
        return (self.vec_b * np.exp(-1j * math.radians(self.phase_deg))).real

    def overlap(self) -> complex:
        return complex(np.vdot(self.vec_a, self.vec_b))


def vector_phase(rp: RegimeParams, theta_deg: float | None) -> float:
    """Global phase of |B>, in degrees: theta above the diagonal, 180 - theta below."""
    if theta_deg is None:
        return 0.0
    return theta_deg if rp.regime is Regime.SUM_GT_1 else 180.0 - theta_deg


def build_vectors(rp: RegimeParams, theta_deg: float | None) -> ConceptVectorPair:
    """Orthonormal C^3 representatives of A and B relative to the exemplar.

    ``theta_deg=None`` (arbitrary angle) puts no phase on |B>; in that case
    the interference term vanishes and the phase is immaterial.
    """
    a = rp.a
    ca, cb, excess = max(0.0, rp.comp_a), max(0.0, rp.comp_b), max(0.0, rp.excess)
    vec_a = np.array([math.sqrt(a), 0.0, math.sqrt(ca)], dtype=complex)
    phase = vector_phase(rp, theta_deg)
    if a == 0.0:
        real_b = np.array([0.0, 1.0, 0.0])
    else:
        real_b = np.array([math.sqrt(ca * cb / a), math.sqrt(excess / a), -math.sqrt(cb)])
    vec_b = np.exp(1j * math.radians(phase)) * real_b
    return ConceptVectorPair(_frozen(vec_a), _frozen(vec_b), rp, phase)


@dataclass(frozen=True, eq=False)
class Projector:
    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.shape != (3, 3):
            raise ValueError("projector must be 3x3")
        if not np.allclose(m, m.conj().T, rtol=0.0, atol=1e-12):
            raise ValueError("projector is not Hermitian")
        if not np.allclose(m @ m, m, rtol=0.0, atol=1e-12):
            raise ValueError("projector is not idempotent")
        object.__setattr__(self, "matrix", _frozen(m))

    def expectation(self, vec: np.ndarray) -> float:
        """<v|M|v> = ||M v||^2."""
        return float(np.vdot(vec, self.matrix @ vec).real)


def projector_for_regime(regime: Regime | RegimeParams) -> Projector:
    """diag(1, 1, 0) above the diagonal mu_A + mu_second = 1, diag(0, 0, 1) on or below it."""
    if isinstance(regime, RegimeParams):
        regime = regime.regime
    diag = (1.0, 1.0, 0.0) if Regime(regime) is Regime.SUM_GT_1 else (0.0, 0.0, 1.0)
    return Projector(np.diag(np.array(diag, dtype=complex)))


@dataclass(frozen=True, eq=False)
class FockState:
    """State m e^{i lambda} |A>(x)|B> (+) n e^{i nu} (|A>+|B>)/sqrt(2); phases in radians."""

    sector1: np.ndarray
    sector2: tuple[np.ndarray, np.ndarray]
    m: float
    n: float
    phase_lambda: float = 0.0
    phase_nu: float = 0.0

    def vector(self) -> np.ndarray:
        """The 12-component vector in C^3 (+) (C^3 (x) C^3)."""
        first = self.n * np.exp(1j * self.phase_nu) * self.sector1
        second = self.m * np.exp(1j * self.phase_lambda) * np.kron(*self.sector2)
        return np.concatenate([first, second])


def assemble_fock_state(pair: ConceptVectorPair, params: FockParameters,
                        phase_lambda: float = 0.0, phase_nu: float = 0.0) -> FockState:
    a, b = pair.vec_a, pair.vec_b
    if abs(np.vdot(a, b)) > VECTOR_TOL:
        raise NonOrthogonalInputs(f"<A|B> = {np.vdot(a, b):.3g}")
    for name, v in (("A", a), ("B", b)):
        if abs(np.linalg.norm(v) - 1.0) > VECTOR_TOL:
            raise NonOrthogonalInputs(f"|{name}> is not unit norm")
    sector1 = _frozen((a + b) / math.sqrt(2.0))
    return FockState(sector1, (a, b), math.sqrt(params.m2), math.sqrt(params.n2),
                     float(phase_lambda), float(phase_nu))


def fock_operator(m_proj: Projector, connective: Connective = Connective.CONJUNCTION) -> np.ndarray:
    """12x12 operator M (+) (M(x)M) for "and", M (+) (M(x)1 + 1(x)M - M(x)M) for "or"."""
    m = m_proj.matrix
    eye = np.eye(3, dtype=complex)
    if Connective(connective) is Connective.CONJUNCTION:
        second = np.kron(m, m)
    else:
        second = np.kron(m, eye) + np.kron(eye, m) - np.kron(m, m)
    return block_diag(m, second)


def evaluate_fock(state: FockState, m_proj: Projector,
                  connective: Connective = Connective.CONJUNCTION) -> float:
    """Born-rule value <psi|O|psi> of the conjunction or disjunction operator."""
    psi = state.vector()
    return float(np.vdot(psi, fock_operator(m_proj, connective) @ psi).real)
