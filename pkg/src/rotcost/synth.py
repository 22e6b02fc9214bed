"""Clifford+T synthesis and approximation of Z_k rotations.

Words are strings over ``H T S X Y Z W`` (``W`` is the global phase
omega) and denote the matrix product read left to right. Every Clifford+T
operator has a unique Matsumoto-Amano normal form
``(T | -) (HT | SHT)* C`` with ``C`` one of 24 Cliffords modulo phase, so
enumerating normal forms visits each operator exactly once.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

import mpmath
import numpy as np

from .exceptions import InsufficientData, NotUnitary, ResourceLimit, SynthesisError
from .ring import GATES, IDENTITY, ExactUnitary, word_unitary

DELTA_DPS = 40
N_MAX_LIMIT = 28
DEFAULT_CEILING = 3 * 2 ** (N_MAX_LIMIT - 1) * 24
SYLLABLES = ("HT", "SHT")


def _clifford_table():
    # 24 single-qubit Cliffords modulo phase, by breadth-first search over H and S
    words = [""]
    mats = [IDENTITY]
    seen = {IDENTITY.phase_key(): 0}
    queue = deque([0])
    while queue:
        i = queue.popleft()
        for g in "HS":
            u = mats[i] @ GATES[g]
            key = u.phase_key()
            if key not in seen:
                seen[key] = len(words)
                words.append(words[i] + g)
                mats.append(u)
                queue.append(len(words) - 1)
    assert len(words) == 24
    return tuple(words), tuple(mats), seen


CLIFFORD_WORDS, CLIFFORD_MATS, _CLIFFORD_INDEX = _clifford_table()


def clifford_index(u: ExactUnitary):
    """Index of ``u`` in the Clifford table, or None if ``u`` is not Clifford."""
    return _CLIFFORD_INDEX.get(u.phase_key())


@dataclass(frozen=True)
class MAWord:
    leading_t: bool
    syllables: tuple[int, ...]  # 0 = HT, 1 = SHT
    tail: int = 0

    def __post_init__(self):
        if not 0 <= self.tail < 24:
            raise ValueError("tail must index one of the 24 Cliffords")
        if any(s not in (0, 1) for s in self.syllables):
            raise ValueError("syllables must be 0 (HT) or 1 (SHT)")

    @property
    def t_count(self):
        return len(self.syllables) + int(self.leading_t)

    def __str__(self):
        head = "T" if self.leading_t else ""
        return head + "".join(SYLLABLES[s] for s in self.syllables) + CLIFFORD_WORDS[self.tail]


def ma_to_unitary(word: MAWord) -> ExactUnitary:
    u = GATES["T"] if word.leading_t else IDENTITY
    for s in word.syllables:
        u = u @ _SYLLABLE_MATS[s]
    return u @ CLIFFORD_MATS[word.tail]


_SYLLABLE_MATS = (word_unitary("HT"), word_unitary("SHT"))
_PEEL = (
    ("HT", word_unitary("HT").dagger()),
    ("SHT", word_unitary("SHT").dagger()),
    ("T", GATES["T"].dagger()),
)


def exact_synthesize(u: ExactUnitary) -> str:
    """T-optimal word equal to ``u`` exactly, global phase included.

    Syllables are peeled off the left while each peel lowers the Bloch-sphere
    denominator exponent, which for Clifford+T operators equals the T-count.
    """
    if not u.is_unitary():
        raise NotUnitary("matrix is not unitary over the ring")
    out = []
    cur = u
    m = cur.bloch_lde()
    while m > 0:
        for name, inv in _PEEL:
            cand = inv @ cur
            if cand.bloch_lde() == m - 1:
                out.append(name)
                cur = cand
                m -= 1
                break
        else:
            raise SynthesisError(f"no syllable lowers the denominator exponent {m}")
    idx = clifford_index(cur)
    if idx is None:
        raise SynthesisError("residual operator is not a Clifford")
    shift = cur.phase_offset(CLIFFORD_MATS[idx])
    if shift is None:
        raise SynthesisError("residual phase is not a power of omega")
    return "".join(out) + CLIFFORD_WORDS[idx] + "W" * shift


def to_normal_form(u: ExactUnitary) -> MAWord:
    """Matsumoto-Amano normal form of ``u`` (modulo global phase)."""
    word = exact_synthesize(u)
    syl = []
    leading = False
    i = 0
    while word.startswith("T", i) or word.startswith("HT", i) or word.startswith("SHT", i):
        if word.startswith("T", i):
            if i != 0:
                break
            leading = True
            i += 1
        elif word.startswith("HT", i):
            syl.append(0)
            i += 2
        else:
            syl.append(1)
            i += 3
    tail = clifford_index(word_unitary(word[i:]))
    nf = MAWord(leading, tuple(syl), tail)
    assert ma_to_unitary(nf).equal_up_to_phase(u)
    return nf


# precision metric


def zk_target(k: int):
    """Z_k = diag(1, exp(i*pi/2**k)) at the working precision."""
    with mpmath.workdps(DELTA_DPS):
        return mpmath.matrix([[1, 0], [0, mpmath.expjpi(mpmath.mpf(1) / 2**k)]])


def _as_mp(u):
    if isinstance(u, ExactUnitary):
        return u.to_mpmath()
    if isinstance(u, str):
        return word_unitary(u).to_mpmath()
    if isinstance(u, mpmath.matrix):
        return u
    a = np.asarray(u, dtype=complex)
    return mpmath.matrix(a.tolist())


def _trace_adj(u, ua):
    return (u[0, 0].conjugate() * ua[0, 0] + u[1, 0].conjugate() * ua[1, 0]
            + u[0, 1].conjugate() * ua[0, 1] + u[1, 1].conjugate() * ua[1, 1])


def delta(u, ua) -> float:
    """``sqrt((2 - |tr(u^dagger ua)|) / 2)``; global phases cancel."""
    with mpmath.workdps(DELTA_DPS):
        u, ua = _as_mp(u), _as_mp(ua)
        t2 = abs(_trace_adj(u, ua)) ** 2
        gap = 4 - t2  # 2 - |t| == (4 - |t|^2)/(2 + |t|) without cancellation
        noise = mpmath.mpf(10) ** (5 - DELTA_DPS)
        if gap < -noise:
            raise NotUnitary("|tr(u^dagger ua)| exceeds 2")
        if gap <= noise:
            return 0.0
        return float(mpmath.sqrt(gap / (2 + mpmath.sqrt(t2)) / 2))


def error_prob(u, ua) -> float:
    """Infidelity ``1 - |<+| u^dagger ua |+>|^2`` seen by a teleported |+> state."""
    with mpmath.workdps(DELTA_DPS):
        u, ua = _as_mp(u), _as_mp(ua)
        m = u.H * ua
        amp = (m[0, 0] + m[0, 1] + m[1, 0] + m[1, 1]) / 2
        return float(1 - abs(amp) ** 2)


def error_prob_approx(u, ua) -> float:
    return 2 * delta(u, ua) ** 2


# enumeration


@dataclass(frozen=True)
class ApproxCandidate:
    k_target: int
    t_count: int
    word: MAWord
    delta: float


@dataclass(frozen=True)
class TCountModel:
    """T-count needed to reach precision ``delta``: ``a*log2(1/delta) + b``.

    Only trusted above ``n_exact_max``, where enumerated data is absent.
    """

    a: float
    b: float
    n_exact_max: int = 0

    def __post_init__(self):
        if not self.a > 0:
            raise ValueError("T-count model slope must be positive")

    def t_count(self, delta: float) -> int:
        return max(1, math.ceil(self.a * math.log2(1 / delta) + self.b - 1e-9))


CALIBRATED_MODEL = TCountModel(3.5, 0.0, 0)


def candidate_count(n: int) -> int:
    """Normal forms with T-count exactly ``n``, taken modulo phase."""
    return 24 if n == 0 else 3 * 2 ** (n - 1) * 24


_F_SYL = np.array([_SYLLABLE_MATS[0].to_numpy(), _SYLLABLE_MATS[1].to_numpy()])
_F_CLIFF = np.array([c.to_numpy() for c in CLIFFORD_MATS])
_F_T = GATES["T"].to_numpy()


def _products(start, m):
    # all start @ S_1 ... S_m; bit i of the index selects syllable i+1
    p = start[None]
    for _ in range(m):
        p = np.concatenate([p @ _F_SYL[0], p @ _F_SYL[1]])
    return p


def _scan(target_dag, leading_t, m, suffix_len=10, block_elems=1 << 22, near=1e-12, keep=16):
    """Best |tr| over skeletons with ``m`` syllables, and the near-optimal index list."""
    ms = min(m, suffix_len)
    mp = m - ms
    start = _F_T if leading_t else np.eye(2, dtype=complex)
    prefixes = target_dag @ _products(start, mp)
    bc = (_products(np.eye(2, dtype=complex), ms)[:, None] @ _F_CLIFF[None]).reshape(-1, 2, 2)
    # tr(X @ Y) = X00 Y00 + X01 Y10 + X10 Y01 + X11 Y11
    q = np.stack([bc[:, 0, 0], bc[:, 1, 0], bc[:, 0, 1], bc[:, 1, 1]])
    x = prefixes.reshape(-1, 4)
    ncols = q.shape[1]
    rows = max(1, block_elems // ncols)
    best = -1.0
    hits = []
    for lo in range(0, x.shape[0], rows):
        s = np.abs(x[lo:lo + rows] @ q)
        top = float(s.max())
        if top > best + near:
            best = top
            hits = []
        if top >= best - near:
            r, c = np.nonzero(s >= best - near)
            hits.extend(((lo + int(i)) , int(j)) for i, j in zip(r[:keep], c[:keep]))
            hits = hits[:keep]
    words = []
    for pi, col in hits:
        si, tail = divmod(col, 24)
        syl = tuple((pi >> i) & 1 for i in range(mp)) + tuple((si >> i) & 1 for i in range(ms))
        words.append(MAWord(leading_t, syl, tail))
    return best, words


def best_by_tcount(k_target: int, n_max: int, ceiling: int = DEFAULT_CEILING):
    """Closest normal form to Z_k at each exact T-count ``0..n_max``."""
    if n_max < 0:
        raise ValueError("n_max must be non-negative")
    if n_max > N_MAX_LIMIT or candidate_count(n_max) > ceiling:
        raise ResourceLimit(
            f"n_max={n_max} needs {candidate_count(n_max)} candidates at the top T-count "
            f"(ceiling {ceiling})"
        )
    target = zk_target(k_target)
    target_dag = np.array(target.tolist(), dtype=complex).conj().T
    out = {}
    for n in range(n_max + 1):
        words = []
        if n == 0:
            words = [MAWord(False, (), t) for t in range(24)]
        else:
            b1, w1 = _scan(target_dag, True, n - 1)
            b0, w0 = _scan(target_dag, False, n)
            if b1 > b0 + 1e-12:
                words = w1
            elif b0 > b1 + 1e-12:
                words = w0
            else:
                words = w1 + w0
        mats = [ma_to_unitary(w) for w in words]
        keys = {m.phase_key() for m in mats}
        assert len(keys) == len(mats), "duplicate normal forms"
        scored = [(delta(target, m), i) for i, m in enumerate(mats)]
        d, i = min(scored)
        out[n] = ApproxCandidate(k_target, n, words[i], d)
    return out


def pareto_front(cands: Iterable[ApproxCandidate]):
    front = []
    for c in sorted(cands, key=lambda c: (c.t_count, c.delta)):
        if not front or c.delta < front[-1].delta:
            front.append(c)
    return front


def enumerate_best(k_target: int, n_max: int, ceiling: int = DEFAULT_CEILING):
    """Pareto-optimal (T-count, delta) approximations of Z_k up to ``n_max`` T gates."""
    return pareto_front(best_by_tcount(k_target, n_max, ceiling).values())


def fit_tcount_model(candidates: Sequence[ApproxCandidate]) -> TCountModel:
    """Least-squares ``n ~ a*log2(1/delta) + b`` over the Pareto front of ``candidates``."""
    pts = [c for c in pareto_front(candidates) if c.delta > 0]
    if len(pts) < 8:
        raise InsufficientData(f"need at least 8 Pareto points with delta > 0, got {len(pts)}")
    x = np.array([math.log2(1 / c.delta) for c in pts])
    if x.max() - x.min() < 3:
        raise InsufficientData("Pareto points span fewer than 3 halvings of delta")
    y = np.array([c.t_count for c in pts], dtype=float)
    a, b = np.polyfit(x, y, 1)
    return TCountModel(float(a), float(b), max(c.t_count for c in pts))
