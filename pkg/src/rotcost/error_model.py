"""Closed-form error relations for |psi_k> distillation on the surface code.

Everything here is a pure function of its arguments. Probabilities outside
their domain raise ``ValueError``; nothing is clamped.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import mpmath

from .exceptions import ModelRangeError

K_MAX = 16
D_MAX = 199


def _odd_distances(d_max):
    return tuple(range(3, d_max + 1, 2))


@dataclass(frozen=True)
class PhysicalParams:
    """Physical gate error rate plus the code distances a plan may use."""

    p_g: float
    d_max: int = D_MAX
    allowed_distances: tuple[int, ...] = field(default=())

    def __post_init__(self):
        if not 0.0 < self.p_g < 0.02:
            raise ValueError(f"p_g must lie in (0, 0.02), got {self.p_g!r}")
        if self.d_max < 3:
            raise ValueError("d_max must be at least 3")
        if not self.allowed_distances:
            object.__setattr__(self, "allowed_distances", _odd_distances(self.d_max))
        ds = tuple(int(d) for d in self.allowed_distances)
        if any(d < 3 for d in ds) or any(b <= a for a, b in zip(ds, ds[1:])):
            raise ValueError("allowed_distances must be strictly increasing and >= 3")
        object.__setattr__(self, "allowed_distances", tuple(d for d in ds if d <= self.d_max))

    @classmethod
    def with_even_distances(cls, p_g, d_max=D_MAX):
        return cls(p_g, d_max, tuple(range(3, d_max + 1)))


def _check_k(k):
    if not 1 <= k <= K_MAX:
        raise ValueError(f"k must lie in 1..{K_MAX}, got {k!r}")


def _check_prob(p, upper=0.5, closed=False):
    ok = 0.0 <= p <= upper if closed else 0.0 <= p < upper
    if not ok:
        raise ValueError(f"probability {p!r} outside [0, {upper}{']' if closed else ')'}")


def a_k(k: int) -> int:
    """Number of weight-3 error patterns that corrupt a distilled |psi_k>."""
    if k < 1:
        raise ValueError("k must be >= 1")
    num = 1 - 3 * 2 ** (k + 1) + 2 ** (2 * k + 3)
    q, r = divmod(num, 3)
    assert r == 0
    return q


def n_inputs(k: int) -> int:
    if k < 1:
        raise ValueError("k must be >= 1")
    return 2 ** (k + 2) - 1


def p_out_cubic(p_s: float, k: int) -> float:
    _check_prob(p_s)
    return a_k(k) * p_s**3


def p_out_exact(p_s: float, k: int) -> float:
    """Output error of one ideal distillation round, without truncation.

    The numerator cancels catastrophically at small ``p_s`` (the result is
    ~A_k p_s^3 while each term is ~1), so the evaluation runs in mpmath with
    enough digits to resolve the cube.
    """
    _check_prob(p_s)
    _check_k(k)
    if p_s == 0:
        return 0.0
    digits = 30 + int(3 * max(0.0, -math.log10(p_s)))
    with mpmath.workdps(digits):
        p = mpmath.mpf(p_s)
        q = 1 - 2 * p
        n = 2 ** (k + 2) - 1
        half = 2 ** (k + 1)
        num = 1 - q ** (half - 1) * (2 * p * n + q**half)
        den = 2 * (1 + n * q**half)
        return float(num / den)


def _pow_one_minus(x, e):
    # (1 - x)**e for large integer e without underflow surprises
    if x == 1.0:
        return 0.0
    return math.exp(e * math.log1p(-x))


def success_prob_exact(p_s: float, k: int) -> float:
    _check_prob(p_s, closed=True)
    _check_k(k)
    n = 2 ** (k + 2) - 1
    return (1 + n * _pow_one_minus(2 * p_s, 2 ** (k + 1))) / 2 ** (k + 2)


def success_prob_floor(p_s: float, k: int) -> float:
    """Probability that none of the n_inputs(k) transversal rotations fails."""
    _check_prob(p_s, upper=1.0)
    return _pow_one_minus(p_s, n_inputs(k))


def p_s_effective(p_in: float, k: int) -> float:
    """Error of a Z_k implemented with its probabilistic Z_{k-1}, ..., Z_1 fixes."""
    if p_in < 0:
        raise ValueError("p_in must be non-negative")
    return 2 * (1 - 2.0**-k) * p_in


def pin_required(p_out: float, k: int, epsilon: float) -> float:
    """Per-state input error that yields ``p_out`` after one round with overhead ``epsilon``."""
    if p_out <= 0:
        raise ValueError("p_out must be positive")
    if epsilon < 0:
        raise ValueError("epsilon must be non-negative")
    return (p_out / ((1 + epsilon) * a_k(k))) ** (1.0 / 3.0) / (2 * (1 - 2.0**-k))


def p_out_with_overhead(p_in: float, k: int, epsilon: float) -> float:
    return (1 + epsilon) * p_out_cubic(p_s_effective(p_in, k), k)


def _check_threshold(p_g):
    if p_g < 0:
        raise ValueError("p_g must be non-negative")
    if 50 * p_g > 1:
        raise ModelRangeError(f"p_g={p_g!r} is above the surface-code threshold of the fit")


def logical_error_square(d: int, p_g: float) -> float:
    """Per-round logical error of a d x d surface-code patch (fitted)."""
    if d < 3:
        raise ValueError("distance must be >= 3")
    _check_threshold(p_g)
    return 0.25 * (50 * p_g) ** ((d + 1) / 2)


def plumbing_failure(d: int, p_g: float) -> float:
    """Upper bound on the logical failure of one plumbing piece."""
    # 2 defect types x 3 error classes x 5d/4 rounds x p_L
    if d < 3:
        raise ValueError("distance must be >= 3")
    _check_threshold(p_g)
    return 2 * d * (50 * p_g) ** ((d + 1) / 2)


def qubit_rounds_per_plumbing(d: int) -> float:
    if d < 3:
        raise ValueError("distance must be >= 3")
    return 125 * d**3 / 16


def injection_error(p_g: float) -> float:
    if p_g < 0:
        raise ValueError("p_g must be non-negative")
    return 10 * p_g


def distillation_threshold(k: int, equal_errors: bool = True) -> float:
    """Input error at which one distillation round stops helping (epsilon = 0).

    With ``equal_errors`` the threshold is on the per-state error ``p_in``
    shared by the Z_k rotation and its corrective cascade; otherwise it is
    on the effective rotation error ``p_s`` itself.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if equal_errors:
        return (a_k(k) * (2 * (1 - 2.0**-k)) ** 3) ** -0.5
    return a_k(k) ** -0.5
