"""Automorphisms of nilpotent groups given by generator images.

An automorphism is stored as the images sigma(g_1), ..., sigma(g_n); a
general element g^lam maps to the ordered product of sigma(g_i)^{lam_i}.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .groupalg import AlgebraElement, f_value
from .nilgroup import (GroupElement, GroupSpec, commutator, inverse, zp_power)
from .padic import INFINITY, MatrixZp, ValueQ, gt
from .pval import PValuation


class AutomorphismError(ValueError):
    pass


class RelationViolation(AutomorphismError):
    pass


class NotBijective(AutomorphismError):
    pass


class SubgroupNotPreserved(AutomorphismError):
    pass


def _inv_mod(rows, p: int, N: int):
    """Inverse of an integer matrix over Z/p^N (raises NotBijective)."""
    mod = p ** N
    d = len(rows)
    a = [[v % mod for v in r] + [int(i == j) for j in range(d)] for i, r in enumerate(rows)]
    for c in range(d):
        piv = next((r for r in range(c, d) if a[r][c] % p), None)
        if piv is None:
            raise NotBijective("coordinate map is singular mod p")
        a[c], a[piv] = a[piv], a[c]
        inv = pow(a[c][c], -1, mod)
        a[c] = [v * inv % mod for v in a[c]]
        for r in range(d):
            if r != c and a[r][c]:
                f = a[r][c]
                a[r] = [(x - f * y) % mod for x, y in zip(a[r], a[c])]
    return [row[d:] for row in a]


class Automorphism:
    """A validated automorphism; call it on GroupElements."""

    def __init__(self, spec: GroupSpec, images: Sequence[GroupElement], order: Optional[int] = None,
                 label: str = "sigma"):
        self.spec = spec
        self.images = tuple(images)
        self.N = min(g.N for g in self.images)
        self.order = order
        self.label = label
        self._inverse = None

    def __call__(self, x: GroupElement) -> GroupElement:
        if x.spec is not self.spec:
            raise AutomorphismError("element of a different group")
        N = min(x.N, self.N)
        out = self.spec.identity(N)
        for img, lam in zip(self.images, x.coords):
            if lam:
                out = out * zp_power(img, lam)
        return out

    def coordinate_matrix(self) -> list:
        """n x n integer matrix whose column j is sigma(g_j)."""
        n = self.spec.n
        return [[self.images[j].coords[i] for j in range(n)] for i in range(n)]

    def is_identity(self) -> bool:
        return all(img == g for img, g in zip(self.images, self.spec.generators(self.N)))

    def __eq__(self, other):
        if not isinstance(other, Automorphism) or other.spec is not self.spec:
            return NotImplemented
        return all(a == b for a, b in zip(self.images, other.images))

    def __hash__(self):
        return hash((id(self.spec), tuple(g.coords for g in self.images)))

    def __mul__(self, other: "Automorphism") -> "Automorphism":
        return compose(self, other)

    def __pow__(self, k: int) -> "Automorphism":
        return power(self, k)

    def inverse(self) -> "Automorphism":
        if self._inverse is None:
            self._inverse = _solve_inverse(self)
            self._inverse._inverse = self
        return self._inverse

    def with_order(self, k: int) -> "Automorphism":
        """Declare finite order k after verifying sigma^k = 1 at precision."""
        if k < 1 or not power(self, k).is_identity():
            raise AutomorphismError(f"{self.label} does not have order dividing {k}")
        out = Automorphism(self.spec, self.images, k, self.label)
        out._inverse = self._inverse
        return out

    def signed_images(self) -> list:
        return [list(g.signed()) for g in self.images]

    def to_dict(self) -> dict:
        return {"group": self.spec.label, "precision": self.N, "order": self.order,
                "images": [list(g.coords) for g in self.images]}

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def loads(cls, text: str, spec: GroupSpec) -> "Automorphism":
        doc = json.loads(text)
        images = [spec.element(c, doc["precision"]) for c in doc["images"]]
        sigma = make_automorphism(spec, images)
        return sigma.with_order(doc["order"]) if doc.get("order") else sigma

    def __repr__(self):
        return f"Automorphism({self.label}: {self.signed_images()})"


# ---------------------------------------------------------------------------
# construction and validation
# ---------------------------------------------------------------------------


def _word_image(images, word, N):
    spec = images[0].spec
    out = spec.identity(N)
    for k, e in enumerate(word):
        if e:
            out = out * zp_power(images[k], e)
    return out


def validate_images(spec: GroupSpec, images: Sequence[GroupElement]):
    n, N = spec.n, min(g.N for g in images)
    if len(images) != n:
        raise AutomorphismError(f"need {n} images")
    mod = spec.p ** N
    for i in range(n):
        for j in range(i + 1, n):
            lhs = commutator(images[i], images[j])
            rhs = _word_image(images, spec.commutator_word(i, j), N)
            if lhs != rhs:
                raise RelationViolation(
                    f"[sigma({spec.names[i]}), sigma({spec.names[j]})] != sigma([{spec.names[i]},"
                    f"{spec.names[j]}])")
            if spec.matrices is not None:
                a, b = spec.matrix_of(images[i].coords, mod), spec.matrix_of(images[j].coords, mod)
                ai, bi = (spec.matrix_of(inverse(g).coords, mod) for g in (images[i], images[j]))
                prod = _mat_mul_mod(_mat_mul_mod(ai, bi, mod), _mat_mul_mod(a, b, mod), mod)
                if prod != spec.matrix_of(rhs.coords, mod):
                    raise RelationViolation("matrix oracle rejects the images")
    rows = [[images[j].coords[i] for j in range(n)] for i in range(n)]
    if MatrixZp(spec.p, 1, rows).det_mod_p() == 0:
        raise NotBijective("images do not give a bijection mod p")
    for name, k in (("L", spec.l), ("Z", spec.m)):
        if k is None:
            continue
        for j in range(k, n):
            if any(images[j].coords[:k]):
                raise SubgroupNotPreserved(f"sigma({spec.names[j]}) leaves {name}")


def _mat_mul_mod(a, b, mod):
    d = len(a)
    return [[sum(a[i][k] * b[k][j] for k in range(d)) % mod for j in range(d)] for i in range(d)]


def make_automorphism(spec: GroupSpec, images: Sequence, N: Optional[int] = None,
                      label: str = "sigma", order: Optional[int] = None) -> Automorphism:
    """Validated automorphism from one image per generator (GroupElements or coordinate lists)."""
    imgs = []
    for img in images:
        if isinstance(img, GroupElement):
            imgs.append(img)
        else:
            if N is None:
                raise AutomorphismError("precision required for coordinate images")
            imgs.append(spec.element(img, N))
    validate_images(spec, imgs)
    sigma = Automorphism(spec, imgs, None, label)
    return sigma.with_order(order) if order else sigma


def from_free_images(spec: GroupSpec, free: dict, N: int, label: str = "sigma") -> Automorphism:
    """Extend images of the free generators; defined generators g_k = [g_i, g_j]
    go to [sigma(g_i), sigma(g_j)]."""
    images = [None] * spec.n
    for k, img in free.items():
        k = spec.names.index(k) if isinstance(k, str) else k
        images[k] = img if isinstance(img, GroupElement) else spec.element(img, N)
    for k in range(spec.n):
        if images[k] is None:
            if k not in spec.definitions:
                raise AutomorphismError(f"no image given for free generator {spec.names[k]}")
            i, j = spec.definitions[k]
            if images[i] is None or images[j] is None:
                raise AutomorphismError(f"{spec.names[k]} is defined before its factors")
            images[k] = commutator(images[i], images[j])
    return make_automorphism(spec, images, label=label)


def identity(spec: GroupSpec, N: int) -> Automorphism:
    sigma = Automorphism(spec, spec.generators(N), 1, "id")
    sigma._inverse = sigma
    return sigma


def inner(h: GroupElement) -> Automorphism:
    """Conjugation x -> h^-1 x h."""
    hi = inverse(h)
    sigma = make_automorphism(h.spec, [hi * g * h for g in h.spec.generators(h.N)],
                              label=f"inn{h.signed()}")
    sigma._inverse = Automorphism(h.spec, [h * g * hi for g in h.spec.generators(h.N)],
                                  label=f"inn{hi.signed()}")
    sigma._inverse._inverse = sigma
    return sigma


def rescale(spec: GroupSpec, units: dict, N: int) -> Automorphism:
    """g_i -> g_i^{u_i} on free generators (others follow)."""
    p = spec.p
    free = {}
    for k in spec.free_indices:
        u = units.get(k, 1) % p ** N
        if u % p == 0:
            raise NotBijective("rescaling exponents must be units")
        free[k] = zp_power(spec.generator(k, N), u)
    return from_free_images(spec, free, N, label=f"rescale{dict(sorted(units.items()))}")


def elementary(spec: GroupSpec, i: int, j: int, s: int, N: int) -> Automorphism:
    """g_i -> g_i g_j^s on a free generator g_i (others fixed or derived)."""
    if i not in spec.free_indices or i == j:
        raise AutomorphismError("elementary maps move a free generator by another generator")
    free = {k: spec.generator(k, N) for k in spec.free_indices}
    free[i] = spec.generator(i, N) * zp_power(spec.generator(j, N), s)
    return from_free_images(spec, free, N, label=f"elem({spec.names[i]},{spec.names[j]},{s})")


def compose(sigma: Automorphism, tau: Automorphism) -> Automorphism:
    """sigma o tau."""
    if sigma.spec is not tau.spec:
        raise AutomorphismError("different groups")
    out = Automorphism(sigma.spec, [sigma(g) for g in tau.images], label=f"{sigma.label}*{tau.label}")
    if sigma._inverse is not None and tau._inverse is not None:
        out._inverse = Automorphism(sigma.spec, [tau._inverse(g) for g in sigma._inverse.images],
                                    label=f"({sigma.label}*{tau.label})^-1")
        out._inverse._inverse = out
    return out


def power(sigma: Automorphism, k: int) -> Automorphism:
    if k < 0:
        return power(sigma.inverse(), -k)
    out = identity(sigma.spec, sigma.N)
    base = sigma
    while k:
        if k & 1:
            out = compose(out, base)
        k >>= 1
        if k:
            base = compose(base, base)
    return out


def _solve_inverse(sigma: Automorphism) -> Automorphism:
    """Solve sigma(y_k) = g_k by linearised fixed-point iteration."""
    spec, N, p = sigma.spec, sigma.N, sigma.spec.p
    lin = _inv_mod(sigma.coordinate_matrix(), p, N)
    mod = p ** N

    def correct(err: GroupElement) -> GroupElement:
        return spec.element([sum(lin[i][j] * err.coords[j] for j in range(spec.n)) % mod
                             for i in range(spec.n)], N)

    images = []
    for g in spec.generators(N):
        y = correct(g)
        for _ in range(4 * N * spec.n + 4):
            err = inverse(sigma(y)) * g
            if err.is_identity():
                break
            y = y * correct(err)
        else:
            raise AutomorphismError("inverse iteration did not converge")
        images.append(y)
    return Automorphism(spec, images, sigma.order, f"{sigma.label}^-1")


# ---------------------------------------------------------------------------
# the induced action on H/L and the hypothesis checkers
# ---------------------------------------------------------------------------


def apply_to_algebra(sigma: Automorphism, x: AlgebraElement) -> AlgebraElement:
    return x.map_group(sigma)


def induced_matrix(sigma: Automorphism, subgroup="L") -> MatrixZp:
    """Column j holds the coordinates of sigma(g_j) modulo the subgroup."""
    spec = sigma.spec
    k = spec.resolve_subgroup(subgroup)
    for j in range(k, spec.n):
        if any(sigma.images[j].coords[:k]):
            raise SubgroupNotPreserved(f"sigma({spec.names[j]}) leaves the subgroup")
    rows = [[sigma.images[j].coords[i] for j in range(k)] for i in range(k)]
    return MatrixZp(spec.p, sigma.N, rows)


def in_gamma1(M: MatrixZp) -> bool:
    """M = I mod p."""
    if M.N < 1:
        raise AutomorphismError("precision must be at least 1")
    return all((v - int(i == j)) % M.p == 0 for i, row in enumerate(M.rows) for j, v in enumerate(row))


@dataclass
class ElementCheck:
    element: GroupElement
    base: ValueQ
    moved: ValueQ
    verdict: bool
    note: str = ""

    def to_dict(self) -> dict:
        return {"element": list(self.element.signed()), "base": str(self.base),
                "moved": str(self.moved), "verdict": self.verdict, "note": self.note}


@dataclass
class CheckReport:
    name: str
    checks: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.verdict for c in self.checks)

    def __bool__(self):
        return self.passed

    def to_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "checks": [c.to_dict() for c in self.checks]}


def check_moves_up(sigma: Automorphism, omega: PValuation, elements=None) -> CheckReport:
    """Does sigma preserve leading parts: omega(sigma(x) x^-1) > omega(x)?"""
    spec = sigma.spec
    if elements is None:
        k = spec.resolve_subgroup("L") if spec.l is not None else spec.n
        elements = spec.generators(sigma.N)[:k]
    rep = CheckReport("omega(sigma(x) x^-1) > omega(x)")
    for x in elements:
        d = sigma(x) * inverse(x)
        base = omega(x)
        moved = INFINITY if d.is_identity() else omega(d)
        verdict = gt(moved, base)
        note = ""
        if verdict is None:
            verdict, note = False, "undetermined at precision"
        rep.checks.append(ElementCheck(x, base, moved, verdict, note))
    return rep


# name used by the operation catalogue
check_condition_1_1 = check_moves_up


def strictly_above(moved: ValueQ, base: ValueQ, D) -> tuple:
    """Strict increase with the cutoff rule: a '> D' value only beats an
    exact finite base at most D - 1."""
    D = Fraction(D)
    if moved.exact and not moved.is_inf:
        return moved.q > base.q if base.exact else False, ""
    if base.exact and not base.is_inf and base.q <= D - 1:
        return True, ""
    return False, "inconclusive at cutoff"


def check_f_increase(sigma: Automorphism, omega: PValuation, D=None, indices=None,
                     family=None) -> CheckReport:
    """f(sigma(b_i) - b_i) > f(b_i) for the given indices (default 1..l)."""
    spec = sigma.spec
    D = Fraction(6 * max(omega.certificate) if D is None else D)
    if indices is None:
        indices = range(spec.resolve_subgroup("L") if spec.l is not None else spec.n)
    rep = CheckReport("f-increase")
    for i in indices:
        b = AlgebraElement.b(spec, i, sigma.N)
        base = f_value(b, omega, D, family)
        moved = f_value(apply_to_algebra(sigma, b) - b, omega, D, family)
        verdict, note = strictly_above(moved, base, D)
        rep.checks.append(ElementCheck(spec.generator(i, sigma.N), base, moved, verdict, note))
    return rep


# ---------------------------------------------------------------------------
# samplers
# ---------------------------------------------------------------------------


def _random_unit(rng, p, N, congruent):
    while True:
        u = rng.randrange(p ** N)
        if congruent:
            u = 1 + p * (u // p)
        if u % p:
            return u


def random_automorphism(spec: GroupSpec, rng: random.Random, N: int, steps: int = 3,
                        congruent: bool = False, max_tries: int = 200) -> Automorphism:
    """Compose random inner, rescaling and elementary maps.

    With ``congruent`` the rescalings are 1 mod p and elementary shifts are
    multiples of p, so the result acts trivially mod p on H/L.  Invalid
    candidates are rejected.
    """
    p = spec.p
    sigma = identity(spec, N)
    made = 0
    tries = 0
    while made < steps:
        tries += 1
        if tries > max_tries:
            raise AutomorphismError("could not sample a valid automorphism")
        kind = rng.choice(("inner", "rescale", "elementary"))
        try:
            if kind == "inner":
                step = inner(spec.random_element(rng, N))
            elif kind == "rescale":
                units = {k: _random_unit(rng, p, N, congruent) for k in spec.free_indices}
                step = rescale(spec, units, N)
                step._inverse = rescale(spec, {k: pow(u, -1, p ** N) for k, u in units.items()}, N)
            else:
                i = rng.choice(spec.free_indices)
                j = rng.choice([k for k in range(spec.n) if k != i])
                s = rng.randrange(p ** N)
                if congruent:
                    s = p * (s // p)
                step = elementary(spec, i, j, s, N)
        except AutomorphismError:
            continue
        sigma = compose(step, sigma)
        made += 1
    sigma.label = "random"
    return sigma


# finite-order 2x2 integer matrices (columns are images of x, y)
FINITE_ORDER_GL2 = (
    ((1, 0), (0, 1), 1),
    ((-1, 0), (0, -1), 2),
    ((1, 0), (0, -1), 2),
    ((0, 1), (1, 0), 2),
    ((0, 1), (-1, 0), 4),
    ((0, 1), (-1, -1), 3),
    ((0, -1), (1, 1), 6),
)


def heisenberg_lift(spec: GroupSpec, a, b, c, d, N: int, order: Optional[int] = None,
                    tails: Sequence[int] = (0, 0)) -> Automorphism:
    """x -> x^a y^c z^e, y -> x^b y^d z^f on a Heisenberg-type spec (x, y, z)."""
    x, y, z = spec.generators(N)
    e, f = tails
    img_x = zp_power(x, a % spec.p ** N) * zp_power(y, c % spec.p ** N) * zp_power(z, e % spec.p ** N)
    img_y = zp_power(x, b % spec.p ** N) * zp_power(y, d % spec.p ** N) * zp_power(z, f % spec.p ** N)
    sigma = from_free_images(spec, {0: img_x, 1: img_y}, N, label=f"lift[{a},{b};{c},{d}]")
    return sigma.with_order(order) if order else sigma


def finite_order_heisenberg(spec: GroupSpec, rng: random.Random, N: int, count: int,
                            conjugate_steps: int = 2) -> list:
    """Finite-order automorphisms: lifts of finite-order GL_2(Z) matrices,
    conjugated by random automorphisms."""
    lifts = []
    for (a, c), (b, d), k in FINITE_ORDER_GL2:
        for tails in ((0, 0), (1, 0), (0, 1), (1, 1), (-1, 0), (0, -1)):
            try:
                lifts.append(heisenberg_lift(spec, a, b, c, d, N, order=k, tails=tails))
                break
            except AutomorphismError:
                continue
    out = []
    while len(out) < count:
        base = rng.choice(lifts)
        tau = random_automorphism(spec, rng, N, steps=conjugate_steps)
        sigma = compose(compose(tau, base), tau.inverse())
        sigma = sigma.with_order(base.order)
        sigma.label = f"conj({base.label})"
        out.append(sigma)
    return out
