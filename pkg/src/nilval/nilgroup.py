"""Nilpotent p-valuable groups in Mal'cev coordinates.

A group is given by an ordered basis g_1..g_n and structure constants: for
i < j the commutator [g_i, g_j] = g_i^-1 g_j^-1 g_i g_j as a normal-form word
in g_{j+1}..g_n.  An element is the ordered product g_1^l_1 ... g_n^l_n with
exponents in Z_p, stored as residues mod p^N.

Multiplication has two independent routes:

* collection: a letter-by-letter collector driven only by the structure
  constants.  It is exact but slow, so it is only used on small integer
  exponents to fit the multiplication (Hall) polynomials by Newton
  interpolation.  The fitted polynomials are what :func:`collect_mul` uses.
* a faithful unipotent matrix representation, used as an oracle.
"""

from __future__ import annotations

import itertools
import json
import math
import random
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Optional, Sequence, Union

from .padic import PAdicInt, base_p_digits

#: When true every product is cross-checked against the matrix oracle.
ORACLE_CHECKS = False


class GroupError(ValueError):
    pass


class SpecMismatch(GroupError):
    pass


class InconsistentSpec(GroupError):
    pass


def gbinom(x: int, k: int) -> int:
    """Generalised binomial C(x, k) for any integer x."""
    if k < 0:
        return 0
    if 0 <= x:
        return math.comb(x, k)
    num = 1
    for i in range(k):
        num *= x - i
    return num // math.factorial(k)


def _sgn(e: int) -> int:
    return 1 if e > 0 else -1


# ---------------------------------------------------------------------------
# integer matrices (oracle)
# ---------------------------------------------------------------------------


def _mat_mul(a, b, mod=None):
    d = len(a)
    out = [[sum(a[i][k] * b[k][j] for k in range(d)) for j in range(d)] for i in range(d)]
    if mod is not None:
        out = [[v % mod for v in row] for row in out]
    return out


def _mat_identity(d):
    return [[int(i == j) for j in range(d)] for i in range(d)]


def _mat_reduce(a, mod):
    return [[v % mod for v in row] for row in a]


class _UnipotentPowers:
    """Exact integer powers A^s = sum_j C(s, j) (A - I)^j of a unipotent A."""

    def __init__(self, a):
        d = len(a)
        nil = [[a[i][j] - (i == j) for j in range(d)] for i in range(d)]
        if any(nil[i][j] for i in range(d) for j in range(d) if j <= i):
            raise InconsistentSpec("oracle matrices must be upper unitriangular")
        self.powers = [_mat_identity(d)]
        cur = _mat_identity(d)
        for _ in range(d - 1):
            cur = _mat_mul(cur, nil)
            if not any(any(row) for row in cur):
                break
            self.powers.append(cur)

    def __call__(self, s: int):
        d = len(self.powers[0])
        out = [[0] * d for _ in range(d)]
        for j, pw in enumerate(self.powers):
            c = gbinom(s, j)
            if c:
                for r in range(d):
                    for col in range(d):
                        out[r][col] += c * pw[r][col]
        return out


# ---------------------------------------------------------------------------
# GroupSpec
# ---------------------------------------------------------------------------


class GroupSpec:
    """A nilpotent group presentation on an ordered (Mal'cev) basis.

    ``commutators`` maps index pairs ``(i, j)`` with ``i < j`` (0-based) or
    name pairs to the normal-form coordinate vector of ``[g_i, g_j]``;
    missing pairs commute.  ``l`` and ``m`` are the sizes of the basis heads
    outside L and outside the centre Z respectively, so g_{l+1}..g_n span L
    and g_{m+1}..g_n span Z (1-based, as in the usual notation).
    """

    def __init__(self, p: int, names: Sequence[str], commutators=None,
                 l: Optional[int] = None, m: Optional[int] = None,
                 matrices=None, *, label: str = "", check: bool = True):
        if p < 2 or any(p % q == 0 for q in range(2, int(p ** 0.5) + 1)):
            raise GroupError(f"p={p} is not prime")
        self.p = p
        self.names = tuple(names)
        self.n = n = len(self.names)
        if n < 1 or len(set(self.names)) != n:
            raise GroupError("need at least one generator, names distinct")
        self.label = label or "group"
        self.l, self.m = l, m
        self.comm = {}
        for key, word in (commutators or {}).items():
            i, j = (self.names.index(k) if isinstance(k, str) else int(k) for k in key)
            word = tuple(int(v) for v in word)
            if len(word) != n:
                raise GroupError(f"commutator word for {key} has wrong length")
            if i == j:
                raise GroupError("commutator of a generator with itself")
            if i > j:
                raise GroupError("give commutators with i < j")
            if any(word[k] for k in range(j + 1)):
                raise InconsistentSpec(
                    f"[{self.names[i]},{self.names[j]}] must lie in later generators")
            if any(word):
                self.comm[(i, j)] = word
        self.matrices = None if matrices is None else [
            [[int(v) for v in row] for row in mat] for mat in matrices]
        if self.matrices is not None and len(self.matrices) != n:
            raise GroupError("one oracle matrix per generator")
        self._check_chain()
        self.weights = self._weights()
        self.definitions = self._definitions()
        self._phi_cache = {}
        self._fit_products()
        self._pow_oracle = (None if self.matrices is None
                            else [_UnipotentPowers(a) for a in self.matrices])
        self._quotients = {}
        if check:
            self.validate()

    # -- structure ---------------------------------------------------------

    def commutator_word(self, i: int, j: int) -> tuple:
        """[g_i, g_j] for i < j as an integer coordinate vector."""
        return self.comm.get((i, j), (0,) * self.n)

    def _check_chain(self):
        n, l, m = self.n, self.l, self.m
        if l is None and m is None:
            return
        if l is None or m is None or not (1 <= l <= m < n):
            raise InconsistentSpec("need 1 <= l <= m < n for the chain Z <= L < H")
        for (i, j), word in self.comm.items():
            if any(word[k] for k in range(l)):
                raise InconsistentSpec("L must contain every commutator")
            if j >= m and any(word):
                raise InconsistentSpec(f"{self.names[j]} is declared central but is not")

    def _weights(self) -> tuple:
        wt = [1] * self.n
        for k in range(self.n):
            for (i, j), word in self.comm.items():
                if word[k]:
                    wt[k] = max(wt[k], wt[i] + wt[j])
        return tuple(wt)

    def _definitions(self) -> dict:
        """Generators that are literally a commutator of earlier ones."""
        defs = {}
        for (i, j), word in sorted(self.comm.items()):
            nz = [k for k, v in enumerate(word) if v]
            if len(nz) == 1 and word[nz[0]] == 1 and nz[0] not in defs:
                defs[nz[0]] = (i, j)
        return defs

    @property
    def free_indices(self) -> tuple:
        """Indices whose automorphism images must be supplied explicitly."""
        return tuple(k for k in range(self.n) if k not in self.definitions)

    def is_abelian(self) -> bool:
        return not self.comm

    # -- letter collector (exact, small exponents only) ---------------------

    def _rmul_letter(self, r: list, i: int, eps: int) -> list:
        n = self.n
        out = list(r[:i]) + [r[i] + eps] + [0] * (n - i - 1)
        conj = [0] * n
        for j in range(i + 1, n):
            if r[j]:
                conj = self._mul_pow_exact(conj, self._phi(i, eps, j), r[j])
        out[i + 1:] = conj[i + 1:]
        return out

    def _mul_letters(self, c: list, w: Sequence[int]) -> list:
        for k, e in enumerate(w):
            for _ in range(abs(e)):
                c = self._rmul_letter(c, k, _sgn(e))
        return c

    def _inv_exact(self, w: Sequence[int]) -> list:
        c = [0] * self.n
        for k in reversed(range(self.n)):
            for _ in range(abs(w[k])):
                c = self._rmul_letter(c, k, -_sgn(w[k]))
        return c

    def _mul_pow_exact(self, c: list, w: Sequence[int], e: int) -> list:
        if e < 0:
            w, e = self._inv_exact(w), -e
        for _ in range(e):
            c = self._mul_letters(c, w)
        return c

    def _phi(self, i: int, eps: int, j: int) -> list:
        """g_i^-eps g_j g_i^eps for j > i, via the structure constants."""
        key = (i, eps, j)
        if key not in self._phi_cache:
            ej = [0] * self.n
            ej[j] = 1
            cij = self.commutator_word(i, j)
            if eps == 1:
                # g_i^-1 g_j g_i = g_j [g_j, g_i] = g_j [g_i, g_j]^-1
                res = self._mul_letters(ej, self._inv_exact(cij))
            else:
                # g_i g_j g_i^-1 = g_j (g_i [g_i, g_j] g_i^-1)
                conj = [0] * self.n
                for k in range(j + 1, self.n):
                    if cij[k]:
                        conj = self._mul_pow_exact(conj, self._phi(i, -1, k), cij[k])
                res = self._mul_letters(ej, conj)
            self._phi_cache[key] = res
        return self._phi_cache[key]

    def collect(self, lam: Sequence[int], mu: Sequence[int]) -> tuple:
        """Exact normal form of g^lam g^mu by letter collection."""
        return tuple(self._mul_letters(list(lam), mu))

    # -- Hall polynomials ---------------------------------------------------

    def _fit_products(self):
        n = self.n
        vw = self.weights + self.weights
        cache = {}

        def product_at(point):
            if point not in cache:
                cache[point] = self.collect(point[:n], point[n:])
            return cache[point]

        self._hall = []
        for k in range(n):
            variables = [v for v in range(2 * n) if v % n <= k]
            terms = []
            for a in _weighted_indices(variables, vw, self.weights[k]):
                total = 0
                subs = [range(e + 1) for _, e in a]
                for b in itertools.product(*subs):
                    point = [0] * (2 * n)
                    sign, mult = 1, 1
                    for (v, e), bv in zip(a, b):
                        point[v] = bv
                        mult *= math.comb(e, bv)
                        if (e - bv) % 2:
                            sign = -sign
                    total += sign * mult * product_at(tuple(point))[k]
                if total:
                    terms.append((total, a))
            self._hall.append(terms)
        self._hall_degree = max(self.weights)

    def _mul_exact(self, lam: Sequence[int], mu: Sequence[int]) -> tuple:
        xs = tuple(lam) + tuple(mu)
        binoms = {}
        out = []
        for terms in self._hall:
            acc = 0
            for coeff, a in terms:
                prod = coeff
                for v, e in a:
                    key = (v, e)
                    if key not in binoms:
                        binoms[key] = gbinom(xs[v], e)
                    prod *= binoms[key]
                    if not prod:
                        break
                acc += prod
            out.append(acc)
        return tuple(out)

    # -- oracle -------------------------------------------------------------

    def matrix_of(self, coords: Sequence[int], mod: Optional[int] = None):
        """Oracle matrix of g^coords; exact over Z when ``mod`` is None."""
        if self._pow_oracle is None:
            raise GroupError(f"{self.label} has no matrix oracle")
        d = len(self.matrices[0])
        out = _mat_identity(d)
        for k, s in enumerate(coords):
            if s:
                out = _mat_mul(out, self._pow_oracle[k](s), mod)
        return out if mod is None else _mat_reduce(out, mod)

    def validate(self, trials: int = 40, seed: int = 0):
        """Cross-check structure constants, Hall polynomials and the oracle."""
        n = self.n
        rng = random.Random(seed)
        if self.matrices is not None:
            for i in range(n):
                for j in range(i + 1, n):
                    a_inv, b_inv = self.matrix_of(_unit(n, i, -1)), self.matrix_of(_unit(n, j, -1))
                    lhs = _mat_mul(_mat_mul(a_inv, b_inv), _mat_mul(self.matrices[i], self.matrices[j]))
                    if lhs != self.matrix_of(self.commutator_word(i, j)):
                        raise InconsistentSpec(
                            f"structure constant [{self.names[i]},{self.names[j]}] "
                            "disagrees with the matrix representation")
        for _ in range(trials):
            lam = [rng.randint(-4, 4) for _ in range(n)]
            mu = [rng.randint(-4, 4) for _ in range(n)]
            fast = self._mul_exact(lam, mu)
            if fast != self.collect(lam, mu):
                raise InconsistentSpec("multiplication polynomials failed to fit; "
                                       "is the presentation consistent?")
            if self.matrices is not None:
                if self.matrix_of(fast) != _mat_mul(self.matrix_of(lam), self.matrix_of(mu)):
                    raise InconsistentSpec("collection disagrees with the matrix oracle")
        return True

    # -- elements -----------------------------------------------------------

    def element(self, coords: Iterable, N: int) -> "GroupElement":
        coords = tuple(int(c) for c in coords)
        if len(coords) != self.n:
            raise SpecMismatch(f"expected {self.n} coordinates")
        mod = self.p ** N
        return GroupElement(self, tuple(c % mod for c in coords), N)

    def identity(self, N: int) -> "GroupElement":
        return GroupElement(self, (0,) * self.n, N)

    def generator(self, i: Union[int, str], N: int) -> "GroupElement":
        if isinstance(i, str):
            i = self.names.index(i)
        return self.element(_unit(self.n, i, 1), N)

    def generators(self, N: int) -> list:
        return [self.generator(i, N) for i in range(self.n)]

    def random_element(self, rng: random.Random, N: int, spread: bool = True,
                       support: Optional[Sequence[int]] = None) -> "GroupElement":
        """Random element; with ``spread`` the coordinate valuations are
        roughly uniform on 0..N rather than almost always 0."""
        mod = self.p ** N
        coords = []
        for k in range(self.n):
            if support is not None and k not in support:
                coords.append(0)
            elif spread:
                coords.append(_unit_times_pk(rng, self.p, rng.randint(0, N), N))
            else:
                coords.append(rng.randrange(mod))
        return GroupElement(self, tuple(coords), N)

    # -- quotients ----------------------------------------------------------

    def resolve_subgroup(self, which) -> int:
        """Number of leading basis elements kept modulo the subgroup."""
        if which in ("L", "l"):
            if self.l is None:
                raise GroupError(f"{self.label} has no distinguished L")
            return self.l
        if which in ("Z", "z"):
            if self.m is None:
                raise GroupError(f"{self.label} has no distinguished centre")
            return self.m
        if which in (None, "1", "trivial"):
            return self.n
        k = int(which)
        if not 0 <= k <= self.n:
            raise GroupError("subgroup index out of range")
        return k

    def quotient(self, which) -> "GroupSpec":
        """The quotient by the span of g_{k+1}..g_n, on the first k generators."""
        k = self.resolve_subgroup(which)
        if k == self.n:
            return self
        if k not in self._quotients:
            comm = {(i, j): w[:k] for (i, j), w in self.comm.items() if j < k and any(w[:k])}
            self._quotients[k] = GroupSpec(
                self.p, self.names[:k], comm, label=f"{self.label}/<{','.join(self.names[k:])}>",
                check=False)
        return self._quotients[k]

    # -- serialisation ------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "p": self.p,
            "generators": list(self.names),
            "commutators": [
                {"pair": [self.names[i], self.names[j]], "word": list(w)}
                for (i, j), w in sorted(self.comm.items())],
            "l": self.l,
            "m": self.m,
            "matrices": self.matrices,
        }

    @classmethod
    def from_dict(cls, doc: dict, check: bool = True) -> "GroupSpec":
        try:
            comm = {tuple(c["pair"]): c["word"] for c in doc.get("commutators", [])}
            return cls(int(doc["p"]), doc["generators"], comm, doc.get("l"), doc.get("m"),
                       doc.get("matrices"), label=doc.get("label", ""), check=check)
        except (KeyError, TypeError) as exc:
            raise GroupError(f"malformed group document: {exc}") from exc

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def loads(cls, text: str) -> "GroupSpec":
        return cls.from_dict(json.loads(text))

    @classmethod
    def load(cls, path) -> "GroupSpec":
        with open(path) as fh:
            return cls.loads(fh.read())

    def __repr__(self):
        return f"GroupSpec({self.label!r}, p={self.p}, n={self.n})"


def _unit(n, i, v):
    out = [0] * n
    out[i] = v
    return out


def _unit_times_pk(rng, p, k, N):
    if k >= N:
        return 0
    u = rng.randrange(1, p ** (N - k))
    while u % p == 0:
        u = rng.randrange(1, p ** (N - k))
    return u * p ** k


def _weighted_indices(variables, vw, budget):
    """Multi-indices (as (var, exp) tuples with exp > 0) of weighted degree <= budget."""
    out = []

    def rec(pos, left, acc):
        if pos == len(variables):
            out.append(tuple(acc))
            return
        v = variables[pos]
        rec(pos + 1, left, acc)
        e = 1
        while e * vw[v] <= left:
            rec(pos + 1, left - e * vw[v], acc + [(v, e)])
            e += 1

    rec(0, budget, [])
    return out


# ---------------------------------------------------------------------------
# elements
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class GroupElement:
    spec: GroupSpec
    coords: tuple
    N: int

    def _check(self, other: "GroupElement"):
        if not isinstance(other, GroupElement) or other.spec is not self.spec:
            raise SpecMismatch("elements belong to different groups")

    @property
    def p(self) -> int:
        return self.spec.p

    @property
    def padic_coords(self) -> tuple:
        return tuple(PAdicInt(self.spec.p, self.N, c) for c in self.coords)

    def is_identity(self) -> bool:
        return not any(self.coords)

    def __eq__(self, other):
        if not isinstance(other, GroupElement) or other.spec is not self.spec:
            return NotImplemented
        mod = self.spec.p ** min(self.N, other.N)
        return all((a - b) % mod == 0 for a, b in zip(self.coords, other.coords))

    def __hash__(self):
        return hash((id(self.spec), self.coords, self.N))

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        return collect_mul(self, other)

    def __pow__(self, s) -> "GroupElement":
        return zp_power(self, s)

    def inverse(self) -> "GroupElement":
        return inverse(self)

    def signed(self) -> tuple:
        mod = self.spec.p ** self.N
        return tuple(c - mod if c > mod // 2 else c for c in self.coords)

    def __repr__(self):
        return f"<{self.spec.label} {self.signed()} mod {self.spec.p}^{self.N}>"


def collect_mul(a: GroupElement, b: GroupElement) -> GroupElement:
    a._check(b)
    spec = a.spec
    N = min(a.N, b.N)
    mod = spec.p ** N
    out = tuple(c % mod for c in spec._mul_exact(a.coords, b.coords))
    if ORACLE_CHECKS and spec.matrices is not None:
        lhs = spec.matrix_of(out, mod)
        rhs = _mat_mul(spec.matrix_of(a.coords, mod), spec.matrix_of(b.coords, mod), mod)
        if lhs != rhs:
            raise InconsistentSpec(f"oracle mismatch multiplying {a} by {b}")
    return GroupElement(spec, out, N)


def inverse(a: GroupElement) -> GroupElement:
    out = a.spec.identity(a.N)
    for k in reversed(range(a.spec.n)):
        if a.coords[k]:
            out = out * GroupElement(a.spec, tuple(_unit(a.spec.n, k, -a.coords[k] % a.spec.p ** a.N)),
                                     a.N)
    return out


def _pow_int(a: GroupElement, e: int) -> GroupElement:
    if e < 0:
        return _pow_int(inverse(a), -e)
    out, base = a.spec.identity(a.N), a
    while e:
        if e & 1:
            out = out * base
        e >>= 1
        if e:
            base = base * base
    return out


def zp_power(a: GroupElement, s: Union[int, PAdicInt]) -> GroupElement:
    """a^s.  Plain ints are exact integer powers; a PAdicInt exponent is
    expanded in base p at the working precision, a^s = prod (a^{p^k})^{s_k}."""
    if isinstance(s, int):
        return _pow_int(a, s)
    if s.p != a.spec.p:
        raise SpecMismatch("exponent prime differs from group prime")
    N = min(a.N, s.N)
    if N < a.N:
        a = GroupElement(a.spec, tuple(c % a.spec.p ** N for c in a.coords), N)
    out, power = a.spec.identity(N), a
    for k, digit in enumerate(base_p_digits(s.r, s.p, N)):
        if digit:
            out = out * _pow_int(power, digit)
        if k < N - 1:
            power = _pow_int(power, s.p)
    return out


def commutator(a: GroupElement, b: GroupElement) -> GroupElement:
    """[a, b] = a^-1 b^-1 a b."""
    a._check(b)
    return inverse(a) * inverse(b) * a * b


def coords_mod(a: GroupElement, subgroup) -> tuple:
    """Coordinates of a modulo L or Z (the adapted basis makes this a truncation)."""
    k = a.spec.resolve_subgroup(subgroup)
    return a.padic_coords[:k]


def project(a: GroupElement, subgroup) -> GroupElement:
    """Image of a in the quotient group."""
    q = a.spec.quotient(subgroup)
    if q is a.spec:
        return a
    return GroupElement(q, a.coords[:q.n], a.N)


# ---------------------------------------------------------------------------
# built-in catalogue
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def heisenberg(p: int) -> GroupSpec:
    """Z_p-Heisenberg group <x, y, z | [x,y] = z, z central>."""
    mats = [
        [[1, 1, 0], [0, 1, 0], [0, 0, 1]],
        [[1, 0, 0], [0, 1, 1], [0, 0, 1]],
        [[1, 0, 1], [0, 1, 0], [0, 0, 1]],
    ]
    return GroupSpec(p, ("x", "y", "z"), {("x", "y"): (0, 0, 1)}, l=2, m=2,
                     matrices=mats, label=f"Heisenberg({p})")


@lru_cache(maxsize=None)
def unipotent(d: int, p: int) -> GroupSpec:
    """Upper unitriangular d x d matrices over Z_p on the elementary basis.

    Basis elements I + E_ij are ordered by superdiagonal level, then row.
    Structure constants are the Steinberg relations.
    """
    if d < 2:
        raise GroupError("need d >= 2")
    pairs = [(i, i + lev) for lev in range(1, d) for i in range(d - lev)]
    n = len(pairs)
    index = {pr: k for k, pr in enumerate(pairs)}
    comm = {}
    for a in range(n):
        for b in range(a + 1, n):
            (i, j), (k, l) = pairs[a], pairs[b]
            word = [0] * n
            if j == k:
                word[index[(i, l)]] = 1
            elif l == i:
                word[index[(k, j)]] = -1
            if any(word):
                comm[(a, b)] = word
    mats = []
    for (i, j) in pairs:
        mat = _mat_identity(d)
        mat[i][j] = 1
        mats.append(mat)
    names = [f"e{i + 1}{j + 1}" for i, j in pairs]
    l = d - 1
    m = n - 1 if d >= 3 else None
    if d == 2:
        return GroupSpec(p, names, comm, matrices=mats, label=f"U_2({p})")
    return GroupSpec(p, names, comm, l=l, m=m, matrices=mats, label=f"U_{d}({p})")


@lru_cache(maxsize=None)
def abelian(p: int, d: int) -> GroupSpec:
    """Free abelian Z_p^d, with a (d+1)-dimensional unipotent oracle."""
    mats = []
    for i in range(d):
        mat = _mat_identity(d + 1)
        mat[0][i + 1] = 1
        mats.append(mat)
    return GroupSpec(p, [f"a{i + 1}" for i in range(d)], {}, matrices=mats,
                     label=f"Z_{p}^{d}")


CATALOGUE = {
    "heisenberg": lambda p: heisenberg(p),
    "U3": lambda p: unipotent(3, p),
    "U4": lambda p: unipotent(4, p),
}
