"""Truncated arithmetic in Z_p, exact valuation values, and Lucas binomials.

Elements of Z_p are stored as a residue modulo p**N.  Zero at precision is
never confused with an exact zero: :func:`vp` reports it as a lower bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple, Optional, Union

import numpy as np


class PAdicError(ArithmeticError):
    pass


class NotAUnit(PAdicError):
    pass


class InsufficientPrecision(PAdicError):
    pass


class IndeterminateComparison(PAdicError):
    """A comparison between bounded values could go either way."""


# ---------------------------------------------------------------------------
# Valuation values
# ---------------------------------------------------------------------------

EXACT, AT_LEAST, ABOVE = "", ">=", ">"


@dataclass(frozen=True)
class ValueQ:
    """A non-negative rational valuation value, infinity, or a lower bound.

    ``q is None`` encodes infinity.  ``bound`` is ``""`` for an exact value,
    ``">="`` when only ``value >= q`` is known and ``">"`` when only
    ``value > q`` is known (truncation horizons).
    """

    q: Optional[Fraction]
    bound: str = EXACT

    def __post_init__(self):
        if self.q is not None and not isinstance(self.q, Fraction):
            object.__setattr__(self, "q", Fraction(self.q))
        if self.bound not in (EXACT, AT_LEAST, ABOVE):
            raise ValueError(f"bad bound flag {self.bound!r}")
        if self.q is None and self.bound:
            object.__setattr__(self, "bound", EXACT)

    @classmethod
    def of(cls, x) -> "ValueQ":
        if isinstance(x, ValueQ):
            return x
        return cls(Fraction(x))

    @property
    def is_inf(self) -> bool:
        return self.q is None

    @property
    def exact(self) -> bool:
        return self.bound == EXACT

    # interval view: [lo, hi] with lo possibly open
    def _lo(self):
        return math.inf if self.q is None else self.q

    def _hi(self):
        if self.q is None or self.bound:
            return math.inf
        return self.q

    def __add__(self, other) -> "ValueQ":
        other = ValueQ.of(other)
        if self.is_inf or other.is_inf:
            return INFINITY
        flags = {self.bound, other.bound}
        bound = ABOVE if ABOVE in flags else (AT_LEAST if AT_LEAST in flags else EXACT)
        return ValueQ(self.q + other.q, bound)

    __radd__ = __add__

    def _decide(self, verdict: Optional[bool], op: str, other) -> bool:
        if verdict is None:
            raise IndeterminateComparison(f"{self} {op} {other}")
        return verdict

    def __lt__(self, other):
        return self._decide(gt(ValueQ.of(other), self), "<", other)

    def __le__(self, other):
        return self._decide(ge(ValueQ.of(other), self), "<=", other)

    def __gt__(self, other):
        return self._decide(gt(self, ValueQ.of(other)), ">", other)

    def __ge__(self, other):
        return self._decide(ge(self, ValueQ.of(other)), ">=", other)

    def __str__(self):
        if self.q is None:
            return "inf"
        return f"{self.bound} {self.q}" if self.bound else str(self.q)

    def to_json(self):
        return str(self)


INFINITY = ValueQ(None)


def gt(a: ValueQ, b: ValueQ) -> Optional[bool]:
    """Decide ``a > b``; None when the bounds do not determine it."""
    if a.is_inf and b.is_inf:
        return False
    a_lo, b_hi = a._lo(), b._hi()
    if a_lo > b_hi or (a_lo == b_hi and a.bound == ABOVE and b_hi != math.inf):
        return True
    if a._hi() <= b._lo():
        return False
    return None


def ge(a: ValueQ, b: ValueQ) -> Optional[bool]:
    """Decide ``a >= b``; None when undetermined."""
    if a._lo() >= b._hi():
        return True
    a_hi, b_lo = a._hi(), b._lo()
    if a_hi < b_lo or (a_hi == b_lo and b.bound == ABOVE and a_hi != math.inf):
        return False
    return None


def veq(a: ValueQ, b: ValueQ) -> Optional[bool]:
    """Decide ``a == b`` as numbers."""
    if a.exact and b.exact:
        return a.q == b.q
    if gt(a, b) or gt(b, a):
        return False
    return None


def vmin(*values: ValueQ) -> ValueQ:
    """Minimum of values, keeping track of what is actually known."""
    values = [ValueQ.of(v) for v in values]
    if not values:
        return INFINITY
    lo = min(v._lo() for v in values)
    if lo == math.inf:
        return INFINITY
    hi = min(v._hi() for v in values)
    attaining = [v for v in values if v._lo() == lo]
    if hi == lo and any(v.exact for v in attaining):
        return ValueQ(lo)
    if all(v.bound == ABOVE for v in attaining):
        return ValueQ(lo, ABOVE)
    return ValueQ(lo, AT_LEAST)


# ---------------------------------------------------------------------------
# PAdicInt
# ---------------------------------------------------------------------------


class BoundedVal(NamedTuple):
    """Result of :func:`vp`: ``value`` is exact unless ``exact`` is False,
    in which case only ``vp >= value`` (the precision) is known."""

    value: int
    exact: bool

    def __str__(self):
        return str(self.value) if self.exact else f">= {self.value}"


@dataclass(frozen=True)
class PAdicInt:
    p: int
    N: int
    r: int

    def __post_init__(self):
        if self.p < 2 or self.N < 1:
            raise ValueError("need p >= 2 and N >= 1")
        object.__setattr__(self, "r", self.r % self.p ** self.N)

    @property
    def modulus(self) -> int:
        return self.p ** self.N

    def _coerce(self, other) -> "PAdicInt":
        if isinstance(other, PAdicInt):
            if other.p != self.p:
                raise ValueError("mixed primes")
            return other
        if isinstance(other, int):
            return PAdicInt(self.p, self.N, other)
        return NotImplemented

    def _combine(self, other, op):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        N = min(self.N, other.N)
        return PAdicInt(self.p, N, op(self.r, other.r))

    def __add__(self, other):
        return self._combine(other, lambda a, b: a + b)

    __radd__ = __add__

    def __sub__(self, other):
        return self._combine(other, lambda a, b: a - b)

    def __rsub__(self, other):
        return self._combine(other, lambda a, b: b - a)

    def __mul__(self, other):
        return self._combine(other, lambda a, b: a * b)

    __rmul__ = __mul__

    def __neg__(self):
        return PAdicInt(self.p, self.N, -self.r)

    def __int__(self):
        return self.r

    def is_zero(self) -> bool:
        return self.r == 0

    def signed(self) -> int:
        """Representative in (-p^N/2, p^N/2], handy for display."""
        m = self.modulus
        return self.r - m if self.r > m // 2 else self.r

    def digits(self) -> list[int]:
        return base_p_digits(self.r, self.p, self.N)

    def vp(self) -> BoundedVal:
        return vp(self)

    def __repr__(self):
        return f"PAdicInt({self.p}, {self.N}, {self.r})"

    def __str__(self):
        return f"{self.signed()} + O({self.p}^{self.N})"


def base_p_digits(r: int, p: int, ndigits: int) -> list[int]:
    out = []
    for _ in range(ndigits):
        r, d = divmod(r, p)
        out.append(d)
    return out


def vp_int(r: int, p: int) -> int:
    """Exact p-adic valuation of a nonzero integer."""
    if r == 0:
        raise ValueError("vp of 0")
    k = 0
    while r % p == 0:
        r //= p
        k += 1
    return k


def vp(a: PAdicInt) -> BoundedVal:
    if a.r == 0:
        return BoundedVal(a.N, False)
    return BoundedVal(vp_int(a.r, a.p), True)


def unit_inverse(a: PAdicInt) -> PAdicInt:
    if a.r % a.p == 0:
        raise NotAUnit(f"{a!r} is not a unit")
    return PAdicInt(a.p, a.N, pow(a.r, -1, a.modulus))


@lru_cache(maxsize=None)
def _small_binom(p: int) -> tuple:
    return tuple(tuple(math.comb(i, j) % p for j in range(p)) for i in range(p))


@lru_cache(maxsize=1 << 16)
def _lucas(r: int, p: int, N: int, n: int) -> int:
    table = _small_binom(p)
    out = 1
    while n:
        r, bi = divmod(r, p)
        n, ni = divmod(n, p)
        out = out * table[bi][ni] % p
        if not out:
            return 0
    return out


def binom_mod_p(b: Union[PAdicInt, int], n: int, p: Optional[int] = None,
                N: Optional[int] = None) -> int:
    """C(b, n) mod p by Lucas' theorem.

    ``b`` may be a PAdicInt, or a plain int together with ``p`` (and an
    optional precision ``N``; a non-negative int is otherwise exact).
    """
    if isinstance(b, PAdicInt):
        p, N, r = b.p, b.N, b.r
    else:
        if p is None:
            raise TypeError("prime required for integer b")
        if N is None:
            if b < 0:
                raise ValueError("negative integer b needs a precision")
            N = max(1, len(base_p_digits_all(max(b, n), p)))
        r = b % p ** N
    if n < 0:
        raise ValueError("n must be non-negative")
    if n >= p ** N:
        raise InsufficientPrecision(f"n={n} needs more than {N} base-{p} digits of b")
    return _lucas(r, p, N, n)


def base_p_digits_all(r: int, p: int) -> list[int]:
    out = []
    while r:
        r, d = divmod(r, p)
        out.append(d)
    return out or [0]


def min_nonzero_binom(b: PAdicInt) -> int:
    """Least positive n with C(b, n) a unit mod p, namely p**vp(b)."""
    k = vp(b)
    if not k.exact:
        raise InsufficientPrecision("b vanishes at the working precision")
    return b.p ** k.value


def lucas_table(p: int, bmax: int, nmax: int) -> np.ndarray:
    """Array T[b, n] = C(b, n) mod p for 0 <= b < bmax, 0 <= n < nmax."""
    small = np.array(_small_binom(p), dtype=np.int64)
    b = np.arange(bmax, dtype=np.int64)
    n = np.arange(nmax, dtype=np.int64)
    out = np.ones((bmax, nmax), dtype=np.int64)
    while (b > 0).any() or (n > 0).any():
        out = out * small[(b % p)[:, None], (n % p)[None, :]] % p
        b //= p
        n //= p
    return out


# ---------------------------------------------------------------------------
# Matrices over Z/p^N
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MatrixZp:
    p: int
    N: int
    rows: tuple

    def __post_init__(self):
        m = self.p ** self.N
        rows = tuple(tuple(int(v) % m for v in row) for row in self.rows)
        if any(len(r) != len(rows) for r in rows):
            raise ValueError("matrix must be square")
        object.__setattr__(self, "rows", rows)

    @classmethod
    def identity(cls, p, N, d):
        return cls(p, N, tuple(tuple(int(i == j) for j in range(d)) for i in range(d)))

    @property
    def dim(self) -> int:
        return len(self.rows)

    def __getitem__(self, ij) -> PAdicInt:
        i, j = ij
        return PAdicInt(self.p, self.N, self.rows[i][j])

    def __matmul__(self, other: "MatrixZp") -> "MatrixZp":
        N = min(self.N, other.N)
        d = self.dim
        rows = [[sum(self.rows[i][k] * other.rows[k][j] for k in range(d))
                 for j in range(d)] for i in range(d)]
        return MatrixZp(self.p, N, rows)

    def __sub__(self, other: "MatrixZp") -> "MatrixZp":
        N = min(self.N, other.N)
        return MatrixZp(self.p, N, [[a - b for a, b in zip(r, s)]
                                    for r, s in zip(self.rows, other.rows)])

    def det_mod_p(self) -> int:
        return _det_mod(self.rows, self.p)

    def is_invertible(self) -> bool:
        return self.det_mod_p() != 0

    def is_identity(self) -> bool:
        return self == MatrixZp.identity(self.p, self.N, self.dim)

    def signed_rows(self):
        m = self.p ** self.N
        return [[v - m if v > m // 2 else v for v in row] for row in self.rows]

    def __str__(self):
        return "[" + "; ".join(" ".join(str(v) for v in r) for r in self.signed_rows()) + "]"


def _det_mod(rows, p) -> int:
    a = [[v % p for v in r] for r in rows]
    d = len(a)
    det = 1
    for c in range(d):
        piv = next((r for r in range(c, d) if a[r][c]), None)
        if piv is None:
            return 0
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            det = -det
        det = det * a[c][c] % p
        inv = pow(a[c][c], -1, p)
        for r in range(c + 1, d):
            f = a[r][c] * inv % p
            if f:
                a[r] = [(x - f * y) % p for x, y in zip(a[r], a[c])]
    return det % p
