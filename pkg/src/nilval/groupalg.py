"""The group algebra k[H] at desk scale.

Two representations live side by side.  :class:`AlgebraElement` is exact:
a finite k-combination of group elements, multiplied with the collector.
:class:`BSeries` is the truncated expansion in ordered monomials
b^alpha = b_1^{a_1} ... b_n^{a_n}, b_i = g_i - 1, keeping only monomials of
weight <alpha, omega(g)> <= D.  Valuations are read off the truncated side.
"""

from __future__ import annotations

import itertools
import json
from fractions import Fraction
from typing import Callable, Optional, Sequence

from .nilgroup import GroupElement, GroupSpec, SpecMismatch, inverse
from .padic import ABOVE, INFINITY, InsufficientPrecision, ValueQ, _lucas, vmin
from .pval import PValuation


class AlgebraError(ValueError):
    pass


class ValueBeyondCutoff(AlgebraError):
    pass


# ---------------------------------------------------------------------------
# coefficient fields
# ---------------------------------------------------------------------------


class FiniteField:
    """F_p, or F_{p^r} = F_p[X]/(modulus).

    Elements are ints: the residue itself for F_p, and the base-p packing
    sum c_k p^k of the polynomial sum c_k X^k otherwise, so the prime field
    sits inside as the constants.  ``modulus`` lists the coefficients of a
    monic irreducible polynomial from the constant term up.
    """

    def __init__(self, p: int, modulus: Optional[Sequence[int]] = None):
        self.p = p
        if modulus is None:
            self.modulus, self.r = None, 1
        else:
            mod = [int(c) % p for c in modulus]
            if len(mod) < 2 or mod[-1] != 1:
                raise AlgebraError("modulus must be monic of degree >= 1")
            self.modulus, self.r = tuple(mod), len(mod) - 1
        self.size = p ** self.r
        if self.r > 1 and not self._irreducible():
            raise AlgebraError(f"{list(self.modulus)} is reducible over F_{p}")

    def _irreducible(self) -> bool:
        # no nonzero element of the quotient ring is a zero divisor
        for a in range(1, self.size):
            if all(self.mul(a, b) != 1 for b in range(1, self.size)):
                return False
        return True

    def _unpack(self, a: int) -> list:
        out = []
        for _ in range(self.r):
            a, d = divmod(a, self.p)
            out.append(d)
        return out

    def _pack(self, cs) -> int:
        return sum(c * self.p ** k for k, c in enumerate(cs))

    def embed(self, c: int) -> int:
        return c % self.p

    def add(self, a: int, b: int) -> int:
        if self.r == 1:
            return (a + b) % self.p
        return self._pack([(x + y) % self.p for x, y in zip(self._unpack(a), self._unpack(b))])

    def neg(self, a: int) -> int:
        if self.r == 1:
            return -a % self.p
        return self._pack([-x % self.p for x in self._unpack(a)])

    def mul(self, a: int, b: int) -> int:
        if self.r == 1:
            return a * b % self.p
        x, y = self._unpack(a), self._unpack(b)
        prod = [0] * (2 * self.r - 1)
        for i, xi in enumerate(x):
            if xi:
                for j, yj in enumerate(y):
                    prod[i + j] += xi * yj
        for k in range(len(prod) - 1, self.r - 1, -1):
            c = prod[k] % self.p
            if c:
                for i, mi in enumerate(self.modulus[:-1]):
                    prod[k - self.r + i] -= c * mi
            prod[k] = 0
        return self._pack([c % self.p for c in prod[:self.r]])

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("zero has no inverse")
        if self.r == 1:
            return pow(a, -1, self.p)
        return next(b for b in range(1, self.size) if self.mul(a, b) == 1)

    def __eq__(self, other):
        return isinstance(other, FiniteField) and (self.p, self.modulus) == (other.p, other.modulus)

    def __hash__(self):
        return hash((self.p, self.modulus))

    def __repr__(self):
        return f"F_{self.p}" if self.r == 1 else f"F_{self.p}^{self.r}{list(self.modulus)}"


# ---------------------------------------------------------------------------
# exact elements
# ---------------------------------------------------------------------------


class AlgebraElement:
    """sum_g a_g g with a_g in k; terms maps coordinate tuples to coefficients."""

    __slots__ = ("spec", "N", "field", "terms")

    def __init__(self, spec: GroupSpec, N: int, terms=None, field: Optional[FiniteField] = None):
        self.spec, self.N = spec, N
        self.field = field or FiniteField(spec.p)
        if self.field.p != spec.p:
            raise AlgebraError("coefficient field characteristic differs from the group prime")
        mod = spec.p ** N
        clean = {}
        for coords, c in (terms or {}).items():
            key = tuple(int(v) % mod for v in coords)
            clean[key] = self.field.add(clean.get(key, 0), c)
        self.terms = {k: v for k, v in clean.items() if v}

    # constructors
    @classmethod
    def zero(cls, spec, N, field=None):
        return cls(spec, N, {}, field)

    @classmethod
    def one(cls, spec, N, field=None):
        return cls(spec, N, {(0,) * spec.n: 1}, field)

    @classmethod
    def group(cls, g: GroupElement, coeff: int = 1, field=None):
        return cls(g.spec, g.N, {g.coords: coeff}, field)

    @classmethod
    def b(cls, spec, i: int, N: int, field=None):
        """b_i = g_i - 1."""
        e = [0] * spec.n
        e[i] = 1
        return cls(spec, N, {tuple(e): 1, (0,) * spec.n: spec.p - 1}, field)

    def _like(self, terms):
        return AlgebraElement(self.spec, self.N, terms, self.field)

    def _coerce(self, other):
        if isinstance(other, AlgebraElement):
            if other.spec is not self.spec:
                raise SpecMismatch("algebra elements over different groups")
            if other.field != self.field:
                raise AlgebraError("different coefficient fields")
            if other.N != self.N:
                N = min(self.N, other.N)
                return self.truncate(N), other.truncate(N)
            return self, other
        if isinstance(other, GroupElement):
            return self._coerce(AlgebraElement.group(other, field=self.field))
        if isinstance(other, int):
            return self._coerce(self._like({(0,) * self.spec.n: self.field.embed(other)}))
        return NotImplemented

    def truncate(self, N: int) -> "AlgebraElement":
        return AlgebraElement(self.spec, N, self.terms, self.field) if N < self.N else self

    def __add__(self, other):
        pair = self._coerce(other)
        if pair is NotImplemented:
            return pair
        a, b = pair
        out = dict(a.terms)
        for k, v in b.terms.items():
            out[k] = a.field.add(out.get(k, 0), v)
        return a._like(out)

    __radd__ = __add__

    def __neg__(self):
        return self._like({k: self.field.neg(v) for k, v in self.terms.items()})

    def __sub__(self, other):
        pair = self._coerce(other)
        if pair is NotImplemented:
            return pair
        a, b = pair
        return a + (-b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            c = self.field.embed(other)
            return self._like({k: self.field.mul(v, c) for k, v in self.terms.items()})
        pair = self._coerce(other)
        if pair is NotImplemented:
            return pair
        a, b = pair
        spec, N, F = a.spec, a.N, a.field
        mod = spec.p ** N
        out = {}
        for ga, ca in a.terms.items():
            for gb, cb in b.terms.items():
                g = tuple(c % mod for c in spec._mul_exact(ga, gb))
                out[g] = F.add(out.get(g, 0), F.mul(ca, cb))
        return a._like(out)

    def __rmul__(self, other):
        if isinstance(other, int):
            return self * other
        pair = self._coerce(other)
        if pair is NotImplemented:
            return pair
        return pair[1] * pair[0]

    def __pow__(self, e: int):
        if e < 0:
            raise AlgebraError("negative powers are not defined in general")
        out, base = AlgebraElement.one(self.spec, self.N, self.field), self
        while e:
            if e & 1:
                out = out * base
            e >>= 1
            if e:
                base = base * base
        return out

    def __eq__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return (self.spec is other.spec and self.N == other.N and self.field == other.field
                and self.terms == other.terms)

    def __hash__(self):
        return hash((id(self.spec), self.N, frozenset(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    def map_group(self, fn: Callable[[GroupElement], GroupElement]) -> "AlgebraElement":
        """k-linear extension of a map on group elements."""
        out = {}
        for g, c in self.terms.items():
            img = fn(GroupElement(self.spec, g, self.N))
            out[img.coords] = self.field.add(out.get(img.coords, 0), c)
        return AlgebraElement(self.spec, min(self.N, img.N) if self.terms else self.N, out,
                              self.field)

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = [f"{c}*{GroupElement(self.spec, g, self.N).signed()}"
                 for g, c in sorted(self.terms.items())]
        return " + ".join(parts)

    # serialisation
    def to_dict(self) -> dict:
        return {
            "kind": "group-basis",
            "p": self.spec.p,
            "precision": self.N,
            "modulus": None if self.field.modulus is None else list(self.field.modulus),
            "group": self.spec.label,
            "terms": [[list(g), c] for g, c in sorted(self.terms.items())],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def loads(cls, text: str, spec: GroupSpec) -> "AlgebraElement":
        doc = json.loads(text)
        if doc.get("kind") != "group-basis" or doc["p"] != spec.p:
            raise AlgebraError("not a group-basis element for this group")
        field = FiniteField(spec.p, doc.get("modulus"))
        return cls(spec, doc["precision"], {tuple(g): c for g, c in doc["terms"]}, field)


def alg_mul(x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    return x * y


# ---------------------------------------------------------------------------
# truncated b-series
# ---------------------------------------------------------------------------


class BSeries:
    """Truncated sum of ordered monomials b^alpha with weight <= cutoff."""

    __slots__ = ("ctx", "terms")

    def __init__(self, ctx: "ExpansionContext", terms=None):
        self.ctx = ctx
        F = ctx.field
        clean = {}
        for a, c in (terms or {}).items():
            a = tuple(a)
            if ctx.weight(a) <= ctx.D:
                clean[a] = F.add(clean.get(a, 0), c)
        self.terms = {a: c for a, c in clean.items() if c}

    @property
    def cutoff(self) -> Fraction:
        return self.ctx.D

    def _check(self, other):
        if not isinstance(other, BSeries) or other.ctx is not self.ctx:
            raise AlgebraError("series built in different expansion contexts")

    def __add__(self, other):
        self._check(other)
        out = dict(self.terms)
        for a, c in other.terms.items():
            out[a] = self.ctx.field.add(out.get(a, 0), c)
        return BSeries(self.ctx, out)

    def __neg__(self):
        return BSeries(self.ctx, {a: self.ctx.field.neg(c) for a, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        self._check(other)
        return self.ctx.series_mul(self, other)

    def __eq__(self, other):
        if not isinstance(other, BSeries):
            return NotImplemented
        return self.ctx is other.ctx and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def valuation(self) -> ValueQ:
        if not self.terms:
            return ValueQ(self.ctx.D, ABOVE)
        return ValueQ(min(self.ctx.weight(a) for a in self.terms))

    def leading(self) -> dict:
        v = self.valuation()
        if not v.exact:
            raise ValueBeyondCutoff(f"no monomial of weight <= {self.ctx.D}")
        return {a: c for a, c in sorted(self.terms.items()) if self.ctx.weight(a) == v.q}

    def __repr__(self):
        if not self.terms:
            return f"O(>{self.ctx.D})"
        names = self.ctx.spec.names
        parts = []
        for a, c in sorted(self.terms.items(), key=lambda t: (self.ctx.weight(t[0]), t[0])):
            mono = "*".join(f"b_{names[i]}" + (f"^{e}" if e > 1 else "")
                            for i, e in enumerate(a) if e) or "1"
            parts.append(mono if c == 1 else f"{c}*{mono}")
        return " + ".join(parts)

    def to_dict(self) -> dict:
        return {
            "kind": "b-series",
            "p": self.ctx.spec.p,
            "precision": self.ctx.N,
            "cutoff": str(self.ctx.D),
            "weights": [str(t) for t in self.ctx.weights],
            "modulus": None if self.ctx.field.modulus is None else list(self.ctx.field.modulus),
            "terms": [[list(a), c] for a, c in sorted(self.terms.items())],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def loads(cls, text: str, spec: GroupSpec) -> "BSeries":
        doc = json.loads(text)
        if doc.get("kind") != "b-series" or doc["p"] != spec.p:
            raise AlgebraError("not a b-series for this group")
        ctx = ExpansionContext.get(spec, [Fraction(t) for t in doc["weights"]],
                                   Fraction(doc["cutoff"]), doc["precision"],
                                   FiniteField(spec.p, doc.get("modulus")))
        return cls(ctx, {tuple(a): c for a, c in doc["terms"]})


class ExpansionContext:
    """Cached expansion machinery for one (group, weights, cutoff, precision, field)."""

    _registry: dict = {}

    def __init__(self, spec: GroupSpec, weights, D, N: int, field: FiniteField):
        self.spec, self.N, self.field = spec, N, field
        self.weights = tuple(Fraction(t) for t in weights)
        self.D = Fraction(D)
        self._letter_cache = {}
        self._mono_cache = {}
        self._h_cache = {}
        self.exponent_caps = tuple(int(self.D / t) for t in self.weights)
        for cap in self.exponent_caps:
            if cap >= spec.p ** N:
                raise InsufficientPrecision(
                    f"cutoff {self.D} needs binomials C(lam, n) with n >= p^{N}")

    @classmethod
    def get(cls, spec, weights, D, N, field=None) -> "ExpansionContext":
        field = field or FiniteField(spec.p)
        key = (id(spec), tuple(Fraction(t) for t in weights), Fraction(D), N, field)
        ctx = cls._registry.get(key)
        if ctx is None or ctx.spec is not spec:
            ctx = cls._registry[key] = cls(spec, weights, D, N, field)
        return ctx

    def weight(self, alpha) -> Fraction:
        return sum((a * t for a, t in zip(alpha, self.weights) if a), Fraction(0))

    # -- expansion of group elements ---------------------------------------

    def _coordinate_terms(self, i: int, lam: int) -> list:
        p, N = self.spec.p, self.N
        return [(e, c) for e in range(self.exponent_caps[i] + 1)
                if (c := _lucas(lam, p, N, e))]

    def expand_group(self, coords: Sequence[int]) -> dict:
        """prod_i (1 + b_i)^{lam_i} truncated at weight D, as {alpha: coeff mod p}."""
        return _expand_group(self, tuple(coords))

    def expand(self, x: AlgebraElement) -> BSeries:
        if x.spec is not self.spec:
            raise SpecMismatch("element over a different group")
        if x.N < self.N:
            raise InsufficientPrecision("element known to lower precision than the context")
        F = self.field
        mod = self.spec.p ** self.N
        out = {}
        for g, c in x.terms.items():
            for a, e in self.expand_group(tuple(v % mod for v in g)).items():
                out[a] = F.add(out.get(a, 0), F.mul(c, e))
        return BSeries(self, out)

    # -- multiplication of ordered monomials -------------------------------

    def _h_minus_one(self, i: int, j: int) -> dict:
        """Expansion of [g_i, g_j] - 1 for i > j (so g_i g_j = g_j g_i [g_i, g_j])."""
        key = (i, j)
        if key not in self._h_cache:
            spec = self.spec
            word = spec.commutator_word(j, i)
            h = inverse(GroupElement(spec, tuple(v % spec.p ** self.N for v in word), self.N))
            series = dict(self.expand_group(h.coords))
            zero = (0,) * spec.n
            series[zero] = self.field.add(series.get(zero, 0), self.field.neg(1))
            self._h_cache[key] = {a: c for a, c in series.items() if c}
        return self._h_cache[key]

    def _add_into(self, acc: dict, series: dict, scale: int = 1):
        F = self.field
        for a, c in series.items():
            v = F.add(acc.get(a, 0), F.mul(c, scale) if scale != 1 else c)
            if v:
                acc[a] = v
            else:
                acc.pop(a, None)

    def letter_mul(self, i: int, beta: tuple) -> dict:
        """b_i * b^beta in ordered monomials, truncated."""
        key = (i, beta)
        cached = self._letter_cache.get(key)
        if cached is not None:
            return cached
        w = self.weights[i] + self.weight(beta)
        if w > self.D:
            out = {}
        else:
            j = next((k for k, e in enumerate(beta) if e), self.spec.n)
            if j >= i:
                a = list(beta)
                a[i] += 1
                out = {tuple(a): 1}
            else:
                rest = list(beta)
                rest[j] -= 1
                rest = tuple(rest)
                out = {}
                # b_i b_j = b_j b_i + (1 + b_j)(1 + b_i)(h - 1),  h = [g_i, g_j]
                for a, c in self.letter_mul(i, rest).items():
                    a2 = list(a)
                    a2[j] += 1
                    self._add_into(out, {tuple(a2): c})
                h1 = self._h_minus_one(i, j)
                t = {}
                for a, c in h1.items():
                    self._add_into(t, self.mono_mul(a, rest), c)
                u = dict(t)
                self._add_into(u, self.series_letter_mul(i, t))
                self._add_into(out, u)
                self._add_into(out, self.series_letter_mul(j, u))
        out = {a: c for a, c in out.items() if self.weight(a) <= self.D}
        self._letter_cache[key] = out
        return out

    def series_letter_mul(self, i: int, series: dict) -> dict:
        out = {}
        for a, c in series.items():
            self._add_into(out, self.letter_mul(i, a), c)
        return out

    def mono_mul(self, alpha: tuple, beta: tuple) -> dict:
        key = (alpha, beta)
        cached = self._mono_cache.get(key)
        if cached is not None:
            return cached
        if self.weight(alpha) + self.weight(beta) > self.D:
            out = {}
        else:
            out = {beta: 1}
            for i in reversed(range(self.spec.n)):
                for _ in range(alpha[i]):
                    out = self.series_letter_mul(i, out)
        self._mono_cache[key] = out
        return out

    def series_mul(self, x: BSeries, y: BSeries) -> BSeries:
        F = self.field
        out = {}
        for a, ca in x.terms.items():
            for b, cb in y.terms.items():
                self._add_into(out, self.mono_mul(a, b), F.mul(ca, cb))
        return BSeries(self, out)


def _expand_group(ctx: ExpansionContext, coords: tuple) -> dict:
    partial = {(): (Fraction(0), 1)}
    for i, lam in enumerate(coords):
        options = ctx._coordinate_terms(i, lam)
        t = ctx.weights[i]
        nxt = {}
        for a, (w, c) in partial.items():
            for e, ce in options:
                w2 = w + e * t
                if w2 > ctx.D:
                    break
                nxt[a + (e,)] = (w2, c * ce % ctx.spec.p)
        partial = nxt
    return {a: ctx.field.embed(c) for a, (_, c) in partial.items()}


def _context(omega: PValuation, D, N: int, field=None) -> ExpansionContext:
    if not omega.is_certified:
        raise AlgebraError(f"{omega.label} needs a diagonal certificate for b-expansions")
    return ExpansionContext.get(omega.spec, omega.certificate, D, N, field)


def default_cutoff(omega: PValuation) -> Fraction:
    return 6 * max(omega.certificate)


def expand_b_form(x: AlgebraElement, omega: PValuation, D=None) -> BSeries:
    D = default_cutoff(omega) if D is None else D
    return _context(omega, D, x.N, x.field).expand(x)


def w_value(x: AlgebraElement, omega: PValuation, D=None) -> ValueQ:
    """Least weight of a monomial in the b-expansion; ``> D`` if none survives."""
    return expand_b_form(x, omega, D).valuation()


# ---------------------------------------------------------------------------
# standard form over the centre and the filtration f
# ---------------------------------------------------------------------------


class StandardForm:
    """x = sum_gamma r_gamma c^gamma with r_gamma in kZ (group-basis form).

    Only gamma with c-weight <= cutoff are kept; ``cutoff`` None means every
    gamma allowed by the coordinate residues (finite but possibly large).
    """

    def __init__(self, spec: GroupSpec, head: int, entries: dict, cutoff, weights):
        self.spec, self.head = spec, head
        self.entries = entries
        self.cutoff = cutoff
        self.weights = weights

    def c_weight(self, gamma) -> Fraction:
        return sum((g * t for g, t in zip(gamma, self.weights)), Fraction(0))

    def __repr__(self):
        return "StandardForm(" + ", ".join(f"{g}: {r!r}" for g, r in sorted(self.entries.items())) + ")"


def standard_form(x: AlgebraElement, omega: Optional[PValuation] = None, cutoff=None) -> StandardForm:
    spec = x.spec
    if spec.m is None:
        raise AlgebraError(f"{spec.label} has no distinguished centre")
    m, N, p, F = spec.m, x.N, spec.p, x.field
    weights = tuple(omega.certificate[:m]) if omega is not None else (Fraction(1),) * m
    if cutoff is not None:
        cutoff = Fraction(cutoff)
    entries = {}
    for g, c in x.terms.items():
        head, tail = g[:m], (0,) * m + tuple(g[m:])
        per_coord = []
        for i, lam in enumerate(head):
            cap = lam if cutoff is None else min(lam, int(cutoff / weights[i]))
            per_coord.append([(e, v) for e in range(cap + 1) if (v := _lucas(lam, p, N, e))])
        for combo in itertools.product(*per_coord):
            gamma = tuple(e for e, _ in combo)
            if cutoff is not None and sum(e * t for e, t in zip(gamma, weights)) > cutoff:
                continue
            coeff = c
            for _, v in combo:
                coeff = F.mul(coeff, F.embed(v))
            if coeff:
                r = entries.setdefault(gamma, {})
                r[tail] = F.add(r.get(tail, 0), coeff)
    out = {}
    for gamma, r in entries.items():
        elt = AlgebraElement(spec, N, r, F)
        if not elt.is_zero():
            out[gamma] = elt
    return StandardForm(spec, m, out, cutoff, weights)


def centre_valuation(omega: PValuation, D) -> Callable:
    """v = w restricted to kZ, as a function (element, cutoff) -> ValueQ."""

    def v(r: AlgebraElement, cutoff=D) -> ValueQ:
        return w_value(r, omega, cutoff)

    v.label = "w|kZ"
    return v


def f_value(x: AlgebraElement, omega: PValuation, D=None, family: Optional[Sequence] = None
            ) -> ValueQ:
    """f(x) = min_i min_gamma (v_i(r_gamma) + w(c^gamma)) over the standard form."""
    D = Fraction(default_cutoff(omega) if D is None else D)
    family = family or [centre_valuation(omega, D)]
    sf = standard_form(x, omega, cutoff=D)
    values = []
    for gamma, r in sf.entries.items():
        cw = sf.c_weight(gamma)
        for v in family:
            values.append(v(r, D - cw) + cw)
    best = vmin(*values) if values else INFINITY
    if best.is_inf or not best.exact or best.q > D:
        # nothing at or below D survives; dropped gammas lie above D as well
        return ValueQ(D, ABOVE)
    return best


def graded_symbol_alg(x: AlgebraElement, omega: PValuation, filtration: str = "w", D=None) -> dict:
    """Minimal-weight slice {alpha: coeff} of the b-expansion of x."""
    D = Fraction(default_cutoff(omega) if D is None else D)
    if filtration == "w":
        return expand_b_form(x, omega, D).leading()
    if filtration == "f":
        level = f_value(x, omega, D)
        if not level.exact:
            raise ValueBeyondCutoff(f"f(x) {level}")
        m = x.spec.m
        sf = standard_form(x, omega, cutoff=D)
        out = {}
        for gamma, r in sf.entries.items():
            cw = sf.c_weight(gamma)
            if cw > level.q:
                continue
            for a, c in expand_b_form(r, omega, level.q - cw).terms.items():
                full = tuple(gamma) + tuple(a[m:])
                if sum(e * t for e, t in zip(full, omega.certificate)) == level.q:
                    out[full] = c
        return dict(sorted(out.items()))
    raise AlgebraError(f"unknown filtration {filtration!r}")
