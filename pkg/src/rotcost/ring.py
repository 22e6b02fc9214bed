"""Exact arithmetic in Z[omega], omega = exp(i*pi/4), and 2x2 matrices over Z[1/sqrt2, i].

An ``OmegaInt`` is ``a + b*w + c*w**2 + d*w**3`` with integer coefficients
and ``w**4 = -1``. Matrix entries share one denominator ``sqrt2**sde``.
"""

from __future__ import annotations

from dataclasses import dataclass

import mpmath


class OmegaInt:
    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a=0, b=0, c=0, d=0):
        self.a, self.b, self.c, self.d = a, b, c, d

    @property
    def coef(self):
        return (self.a, self.b, self.c, self.d)

    def __repr__(self):
        return f"OmegaInt({self.a}, {self.b}, {self.c}, {self.d})"

    def __eq__(self, other):
        if isinstance(other, int):
            other = OmegaInt(other)
        if not isinstance(other, OmegaInt):
            return NotImplemented
        return self.coef == other.coef

    def __hash__(self):
        return hash(self.coef)

    def __bool__(self):
        return bool(self.a or self.b or self.c or self.d)

    def __add__(self, o):
        if isinstance(o, int):
            return OmegaInt(self.a + o, self.b, self.c, self.d)
        return OmegaInt(self.a + o.a, self.b + o.b, self.c + o.c, self.d + o.d)

    __radd__ = __add__

    def __neg__(self):
        return OmegaInt(-self.a, -self.b, -self.c, -self.d)

    def __sub__(self, o):
        if isinstance(o, int):
            o = OmegaInt(o)
        return OmegaInt(self.a - o.a, self.b - o.b, self.c - o.c, self.d - o.d)

    def __mul__(self, o):
        if isinstance(o, int):
            return OmegaInt(self.a * o, self.b * o, self.c * o, self.d * o)
        a, b, c, d = self.a, self.b, self.c, self.d
        e, f, g, h = o.a, o.b, o.c, o.d
        return OmegaInt(
            a * e - b * h - c * g - d * f,
            a * f + b * e - c * h - d * g,
            a * g + b * f + c * e - d * h,
            a * h + b * g + c * f + d * e,
        )

    __rmul__ = __mul__

    def conj(self):
        return OmegaInt(self.a, -self.d, -self.c, -self.b)

    def omega_power(self, n):
        """``self * w**n``."""
        x = self
        for _ in range(n % 8):
            x = OmegaInt(-x.d, x.a, x.b, x.c)
        return x

    def sqrt2_divisible(self):
        return (self.a - self.c) % 2 == 0 and (self.b - self.d) % 2 == 0

    def div_sqrt2(self):
        a, b, c, d = self.a, self.b, self.c, self.d
        if (a - c) % 2 or (b - d) % 2:
            raise ValueError(f"{self!r} is not divisible by sqrt(2)")
        # x * (w - w**3) / 2
        return OmegaInt((b - d) // 2, (a + c) // 2, (b + d) // 2, (c - a) // 2)

    def real_parts(self):
        """``(p, q)`` with self == p + q*sqrt2, for a real element."""
        if self.c != 0 or self.b != -self.d:
            raise ValueError(f"{self!r} is not real")
        return self.a, self.b

    def to_mpc(self):
        r = mpmath.sqrt(2) / 2
        return mpmath.mpc(self.a + (self.b - self.d) * r, self.c + (self.b + self.d) * r)

    def to_complex(self):
        r = 0.7071067811865476
        return complex(self.a + (self.b - self.d) * r, self.c + (self.b + self.d) * r)


ZERO = OmegaInt()
ONE = OmegaInt(1)
OMEGA = OmegaInt(0, 1)
I = OmegaInt(0, 0, 1)
SQRT2 = OmegaInt(0, 1, 0, -1)


def ring_add(x: OmegaInt, y: OmegaInt) -> OmegaInt:
    return x + y


def ring_mul(x: OmegaInt, y: OmegaInt) -> OmegaInt:
    return x * y


def ring_conj(x: OmegaInt) -> OmegaInt:
    return x.conj()


def sqrt2_valuation_real(p, q):
    """Largest v with sqrt2**v dividing p + q*sqrt2 (None for zero)."""
    if p == 0 and q == 0:
        return None
    v = 0
    while p % 2 == 0:
        # (p + q*sqrt2) / sqrt2 = q + (p/2)*sqrt2
        p, q = q, p // 2
        v += 1
    return v


@dataclass(frozen=True)
class RingScalar:
    """``num / sqrt2**sde``, kept with the smallest possible ``sde``."""

    num: OmegaInt
    sde: int = 0

    def __post_init__(self):
        num, sde = self.num, self.sde
        if not num:
            sde = 0
        while sde > 0 and num.sqrt2_divisible():
            num, sde = num.div_sqrt2(), sde - 1
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "sde", sde)

    def __mul__(self, o):
        return RingScalar(self.num * o.num, self.sde + o.sde)

    def __add__(self, o):
        s = max(self.sde, o.sde)
        return RingScalar(_scale(self.num, s - self.sde) + _scale(o.num, s - o.sde), s)

    def conj(self):
        return RingScalar(self.num.conj(), self.sde)

    def to_mpc(self):
        return self.num.to_mpc() / mpmath.sqrt(2) ** self.sde


def _scale(x, n):
    # x * sqrt2**n
    for _ in range(n):
        x = x * SQRT2
    return x


class ExactUnitary:
    """2x2 matrix ``[[u00, u01], [u10, u11]] / sqrt2**sde`` over Z[omega].

    Construction does not check unitarity; call :meth:`is_unitary`.
    """

    __slots__ = ("entries", "sde")

    def __init__(self, entries, sde=0):
        entries = tuple(entries)
        while sde > 0 and all(e.sqrt2_divisible() for e in entries):
            entries = tuple(e.div_sqrt2() for e in entries)
            sde -= 1
        self.entries = entries
        self.sde = sde

    @classmethod
    def from_ints(cls, rows, sde=0):
        """Build from nested coefficient 4-tuples ``rows[i][j] = (a, b, c, d)``."""
        return cls([OmegaInt(*rows[i][j]) for i in (0, 1) for j in (0, 1)], sde)

    def __repr__(self):
        return f"ExactUnitary({list(self.entries)}, sde={self.sde})"

    def __matmul__(self, o):
        a, b, c, d = self.entries
        e, f, g, h = o.entries
        return ExactUnitary(
            (a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h),
            self.sde + o.sde,
        )

    def __eq__(self, o):
        return isinstance(o, ExactUnitary) and self.sde == o.sde and self.entries == o.entries

    def __hash__(self):
        return hash((self.entries, self.sde))

    def dagger(self):
        a, b, c, d = self.entries
        return ExactUnitary((a.conj(), c.conj(), b.conj(), d.conj()), self.sde)

    def omega_power(self, n):
        return ExactUnitary(tuple(e.omega_power(n) for e in self.entries), self.sde)

    def entry(self, i, j):
        return RingScalar(self.entries[2 * i + j], self.sde)

    def is_unitary(self):
        p = self.dagger() @ self
        return p.sde == 0 and p.entries == (ONE, ZERO, ZERO, ONE)

    def determinant(self):
        a, b, c, d = self.entries
        return RingScalar(a * d - b * c, 2 * self.sde)

    @property
    def phase(self):
        """``m`` with det == w**m; only defined for ring unitaries."""
        det = self.determinant()
        if det.sde == 0:
            for m in range(8):
                if det.num == ONE.omega_power(m):
                    return m
        raise ValueError("determinant is not a power of omega")

    def phase_key(self):
        """Hashable key equal for matrices that differ by a power of omega."""
        best = None
        for n in range(8):
            key = tuple(c for e in self.omega_power(n).entries for c in e.coef)
            if best is None or key < best:
                best = key
        return (self.sde, best)

    def equal_up_to_phase(self, o):
        return self.phase_key() == o.phase_key()

    def phase_offset(self, o):
        """``n`` with ``self == o * w**n``, or None."""
        for n in range(8):
            if o.omega_power(n) == self:
                return n
        return None

    def to_numpy(self):
        import numpy as np

        s = 2.0 ** (-self.sde / 2)
        return np.array([e.to_complex() for e in self.entries]).reshape(2, 2) * s

    def to_mpmath(self):
        s = mpmath.sqrt(2) ** (-self.sde)
        return mpmath.matrix([[e.to_mpc() * s for e in self.entries[:2]],
                              [e.to_mpc() * s for e in self.entries[2:]]])

    def bloch_lde(self):
        """Least sqrt2-denominator exponent of the SO(3) image of this matrix.

        For a Clifford+T unitary this equals its minimal T-count.
        """
        a, b, c, d = self.entries
        ac, bc_, cc, dc = a.conj(), b.conj(), c.conj(), d.conj()
        nums = []
        # M_j = N sigma_j N^dagger is Hermitian and traceless, so its
        # top row (m00, m01) determines it.
        for n00, n01 in (
            (a * bc_ + b * ac, a * dc + b * cc),           # sigma_x
            ((b * ac - a * bc_) * I, (b * cc - a * dc) * I),  # sigma_y
            (a * ac - b * bc_, a * cc - b * dc),           # sigma_z
        ):
            nums.append(n01 + n01.conj())               # x row: 2 Re(m01)
            nums.append((n01 - n01.conj()) * I)         # y row: -2 Im(m01)
            nums.append(n00 * 2)                        # z row: 2 m00
        # every numerator sits over sqrt2**(2*sde + 2)
        den = 2 * self.sde + 2
        lde = 0
        for x in nums:
            v = sqrt2_valuation_real(*x.real_parts())
            if v is not None:
                lde = max(lde, den - v)
        return lde


def _diag(x, y):
    return ExactUnitary((x, ZERO, ZERO, y))


GATES = {
    "I": _diag(ONE, ONE),
    "H": ExactUnitary((ONE, ONE, ONE, -ONE), 1),
    "T": _diag(ONE, OMEGA),
    "S": _diag(ONE, I),
    "X": ExactUnitary((ZERO, ONE, ONE, ZERO)),
    "Y": ExactUnitary((ZERO, -I, I, ZERO)),
    "Z": _diag(ONE, -ONE),
    "W": _diag(OMEGA, OMEGA),
}
GATES["Td"] = GATES["T"].dagger()
GATES["Sd"] = GATES["S"].dagger()

IDENTITY = GATES["I"]


def word_unitary(word: str) -> ExactUnitary:
    """Matrix product of ``word`` read left to right (rightmost gate acts first)."""
    u = IDENTITY
    for ch in word:
        try:
            g = GATES[ch]
        except KeyError:
            raise ValueError(f"unknown gate {ch!r} in word {word!r}") from None
        u = u @ g
    return u


def t_count_of_word(word: str) -> int:
    return word.count("T")
