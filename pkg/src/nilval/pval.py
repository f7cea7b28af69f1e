"""p-valuations on nilpotent groups as evaluable objects.

A :class:`PValuation` wraps a pointwise evaluator.  When a construction is
known to keep the standard basis an ordered basis, the valuation also
carries a diagonal certificate: the basis values t_1..t_n, from which
omega(g^lam) = min_i (t_i + vp(lam_i)).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

from .nilgroup import GroupElement, GroupSpec, commutator, inverse, project, zp_power
from .padic import (AT_LEAST, INFINITY, ValueQ, ge, gt, veq, vmin, vp_int)


class PValuationError(ValueError):
    pass


class InvalidT(PValuationError):
    pass


class NoCertificate(PValuationError):
    pass


class IdentityElement(PValuationError):
    pass


def _frac(t) -> Fraction:
    return t if isinstance(t, Fraction) else Fraction(t)


class PValuation:
    """A map G -> Q_{>=0} u {inf}.

    ``evaluator`` receives a :class:`GroupElement` of ``spec``.  ``horizon``
    maps a precision N to a lower bound for omega on elements that are
    trivial modulo p^N; it is used when a derived element vanishes at the
    working precision.
    """

    def __init__(self, spec: GroupSpec, evaluator: Callable, certificate=None,
                 label: str = "", horizon: Optional[Callable[[int], ValueQ]] = None):
        self.spec = spec
        self._evaluator = evaluator
        self.certificate = None if certificate is None else tuple(_frac(t) for t in certificate)
        if self.certificate is not None and len(self.certificate) != spec.n:
            raise PValuationError("certificate needs one value per basis element")
        self.label = label or "omega"
        self._horizon = horizon

    @classmethod
    def diagonal(cls, spec: GroupSpec, values: Sequence, label: str = "") -> "PValuation":
        values = tuple(_frac(t) for t in values)
        if len(values) != spec.n:
            raise PValuationError("one value per basis element")
        p = spec.p

        def evaluate(x: GroupElement) -> ValueQ:
            if x.is_identity():
                return INFINITY
            return vmin(*(ValueQ(t + vp_int(c, p)) if c else ValueQ(t + x.N, AT_LEAST)
                          for t, c in zip(values, x.coords)))

        lo = min(values)
        return cls(spec, evaluate, values,
                   label or "diag(" + ", ".join(str(v) for v in values) + ")",
                   horizon=lambda N: ValueQ(lo + N, AT_LEAST))

    def __call__(self, x: GroupElement) -> ValueQ:
        if x.spec is not self.spec:
            raise PValuationError(f"{self.label} lives on {self.spec.label}, not {x.spec.label}")
        return self._evaluator(x)

    def horizon(self, N: int) -> Optional[ValueQ]:
        return None if self._horizon is None else self._horizon(N)

    def value_of_derived(self, x: GroupElement) -> Optional[ValueQ]:
        """Like calling, but an element that vanishes at precision gets the
        horizon bound instead of infinity (None if no horizon is known)."""
        if x.is_identity():
            return self.horizon(x.N)
        return self(x)

    @property
    def is_certified(self) -> bool:
        return self.certificate is not None

    def __repr__(self):
        return f"PValuation({self.label} on {self.spec.label})"


def evaluate(omega: PValuation, x: GroupElement) -> ValueQ:
    return omega(x)


# ---------------------------------------------------------------------------
# constructions
# ---------------------------------------------------------------------------


def tp_filtration(t, spec: GroupSpec) -> PValuation:
    """The (t,p)-filtration on a free abelian group: t + n on A^{p^n} \\ A^{p^{n+1}}."""
    t = _frac(t)
    if not spec.is_abelian():
        raise PValuationError(f"{spec.label} is not abelian")
    if t <= Fraction(1, spec.p - 1):
        raise InvalidT(f"t = {t} must exceed 1/(p-1) = {Fraction(1, spec.p - 1)}")
    return PValuation.diagonal(spec, [t] * spec.n, label=f"({t},{spec.p})-filtration")


def quotient_pval(omega: PValuation, subgroup, search_sample: Optional[Sequence] = None
                  ) -> PValuation:
    """The quotient p-valuation Omega(gK) = sup_k omega(gk) on G/K.

    With a diagonal certificate (basis adapted to K) the supremum is attained
    by dropping the K-coordinates.  Without one, ``search_sample`` (elements
    of K) enables a brute-force supremum over the sample; for testing only.
    """
    spec = omega.spec
    k = spec.resolve_subgroup(subgroup)
    if k == spec.n:
        return omega
    q = spec.quotient(k)
    if omega.is_certified:
        return PValuation.diagonal(q, omega.certificate[:k], label=f"quotient of {omega.label}")
    if search_sample is None:
        raise NoCertificate(f"{omega.label} has no diagonal certificate")
    kernel = [s for s in search_sample if not any(s.coords[:k])]

    def evaluate(xq: GroupElement) -> ValueQ:
        if xq.is_identity():
            return INFINITY
        lift = GroupElement(spec, xq.coords + (0,) * (spec.n - k), xq.N)
        return vmax(omega(lift), *(omega(lift * s) for s in kernel))

    return PValuation(q, evaluate, label=f"quotient of {omega.label} (search)",
                      horizon=omega._horizon)


def vmax(*values: ValueQ) -> ValueQ:
    best = values[0]
    for v in values[1:]:
        if v.is_inf:
            return v
        if gt(v, best) or (v._lo() > best._lo()):
            best = v
    return best


def inf_lift(alpha: PValuation, beta_bar: PValuation, subgroup) -> PValuation:
    """omega = inf(alpha, beta), beta = beta_bar o (G -> G/N).

    When alpha is certified and beta_bar is diagonal on the quotient basis,
    the standard basis stays an ordered basis, so the result is certified
    with values min(alpha_i, beta_i) on the head and alpha_i on N.
    """
    spec = alpha.spec
    k = spec.resolve_subgroup(subgroup)
    q = spec.quotient(k)
    if beta_bar.spec is not q:
        raise PValuationError(f"beta_bar must live on {q.label}")

    def beta(x: GroupElement) -> ValueQ:
        xq = project(x, k)
        if xq.is_identity():
            # exactly in N unless the head only vanishes at precision
            bound = beta_bar.horizon(x.N)
            return INFINITY if bound is None else bound
        return beta_bar(xq)

    def evaluate(x: GroupElement) -> ValueQ:
        if x.is_identity():
            return INFINITY
        return vmin(alpha(x), beta(x))

    cert = None
    if alpha.is_certified and beta_bar.is_certified:
        cert = [min(a, b) for a, b in zip(alpha.certificate[:k], beta_bar.certificate)]
        cert += list(alpha.certificate[k:])
    horizon = None
    if alpha._horizon is not None and beta_bar._horizon is not None:
        def horizon(N):
            return vmin(alpha.horizon(N), beta_bar.horizon(N))
    return PValuation(spec, evaluate, cert, label=f"inf({alpha.label}, {beta_bar.label})",
                      horizon=horizon)


def act(sigma, omega: PValuation) -> PValuation:
    """x -> omega(sigma(x)); no certificate in general."""
    if sigma.spec is not omega.spec:
        raise PValuationError("automorphism and valuation live on different groups")

    def evaluate(x: GroupElement) -> ValueQ:
        if x.is_identity():
            return INFINITY
        return omega(sigma(x))

    return PValuation(omega.spec, evaluate, label=f"{getattr(sigma, 'label', 'sigma')}.{omega.label}",
                      horizon=omega._horizon)


def default_sample(spec: GroupSpec, N: int, count: int = 64, seed: int = 0) -> list:
    rng = random.Random(seed)
    out = spec.generators(N)
    out += [spec.random_element(rng, N) for _ in range(count)]
    return out


def agree_on(a: PValuation, b: PValuation, sample: Sequence[GroupElement]) -> bool:
    return all(a(x) == b(x) for x in sample)


def orbit_inf(omega: PValuation, group: Sequence, sample: Optional[Sequence] = None,
              N: int = 6) -> PValuation:
    """omega'(x) = min over sigma in F of omega(sigma(x)).

    Orbit members agreeing with an earlier one on ``sample`` are dropped; if
    the orbit collapses to omega itself, omega is returned unchanged
    (certificate included).
    """
    if sample is None:
        sample = default_sample(omega.spec, N)
    members = [omega]
    for sigma in group:
        cand = act(sigma, omega)
        if not any(agree_on(cand, m, sample) for m in members):
            members.append(cand)
    if len(members) == 1:
        return omega

    def evaluate(x: GroupElement) -> ValueQ:
        if x.is_identity():
            return INFINITY
        return vmin(*(m(x) for m in members))

    return PValuation(omega.spec, evaluate, label=f"orbit-inf of {omega.label} ({len(members)} distinct)",
                      horizon=omega._horizon)


def nice_omega(alpha: PValuation, t=None, subgroup="L") -> PValuation:
    """A p-valuation with property (omega_L), built as inf(alpha, beta) with
    beta_bar the (t,p)-filtration on G/L.

    By default t = min_i alpha(g_i).  If that minimum is attained on L the
    strict inequality would fail, so t is then taken halfway between 1/(p-1)
    and the least value on L.
    """
    if not alpha.is_certified:
        raise NoCertificate("alpha needs a diagonal certificate")
    spec = alpha.spec
    k = spec.resolve_subgroup(subgroup)
    cert = alpha.certificate
    if t is None:
        t = min(cert)
        tail = cert[k:]
        if tail and t >= min(tail):
            t = (Fraction(1, spec.p - 1) + min(tail)) / 2
    beta_bar = tp_filtration(t, spec.quotient(k))
    return inf_lift(alpha, beta_bar, k)


# ---------------------------------------------------------------------------
# checks
# ---------------------------------------------------------------------------

AXIOMS = ("subadditive", "commutator", "finite", "lower-bound", "power")


@dataclass
class AxiomReport:
    valuation: str
    pairs: int = 0
    checked: dict = field(default_factory=lambda: {a: 0 for a in AXIOMS})
    inconclusive: dict = field(default_factory=lambda: {a: 0 for a in AXIOMS})
    violations: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations

    @property
    def first_violation(self):
        return self.violations[0] if self.violations else None

    def tally(self, axiom: str, verdict: Optional[bool], detail):
        if verdict is None:
            self.inconclusive[axiom] += 1
            return
        self.checked[axiom] += 1
        if not verdict:
            self.violations.append((axiom,) + tuple(detail))

    def summary(self) -> dict:
        return {
            "valuation": self.valuation,
            "pairs": self.pairs,
            "checked": dict(self.checked),
            "inconclusive": dict(self.inconclusive),
            "violations": len(self.violations),
            "first_violation": None if not self.violations else
            [str(v) if not isinstance(v, GroupElement) else list(v.signed())
             for v in self.violations[0]],
        }


def check_axioms(omega: PValuation, pairs: Sequence) -> AxiomReport:
    """Check the five p-valuation axioms on every sampled pair (x, y)."""
    spec = omega.spec
    p = spec.p
    floor = ValueQ(Fraction(1, p - 1))
    rep = AxiomReport(omega.label)
    for x, y in pairs:
        rep.pairs += 1
        wx, wy = omega(x), omega(y)
        xy = x * inverse(y)
        wxy = INFINITY if x == y else omega.value_of_derived(xy)
        rep.tally("subadditive", None if wxy is None else ge(wxy, vmin(wx, wy)), (x, y))
        c = commutator(x, y)
        wc = INFINITY if (x.is_identity() or y.is_identity() or x == y) else omega.value_of_derived(c)
        rep.tally("commutator", None if wc is None else ge(wc, wx + wy), (x, y))
        for z, wz in ((x, wx), (y, wy)):
            if z.is_identity():
                continue
            rep.tally("finite", not wz.is_inf, (z,))
            rep.tally("lower-bound", gt(wz, floor), (z,))
            wp = omega.value_of_derived(zp_power(z, p))
            rep.tally("power", None if wp is None else veq(wp, wz + 1), (z,))
    return rep


def sample_pairs(spec: GroupSpec, rng: random.Random, N: int, count: int) -> list:
    gens = spec.generators(N)
    pairs = [(spec.identity(N), spec.identity(N))]
    pairs += [(a, b) for a in gens for b in gens][: max(0, count // 10)]
    while len(pairs) < count:
        pairs.append((spec.random_element(rng, N), spec.random_element(rng, N)))
    return pairs[:count]


def check_omega_L(omega: PValuation, spec: Optional[GroupSpec] = None, subgroup="L") -> bool:
    """(omega_L): equal head values, all strictly below the values on L."""
    spec = spec or omega.spec
    if not omega.is_certified:
        raise NoCertificate(f"{omega.label} has no diagonal certificate")
    k = spec.resolve_subgroup(subgroup)
    head, tail = omega.certificate[:k], omega.certificate[k:]
    return len(set(head)) == 1 and all(head[0] < t for t in tail)


@dataclass(frozen=True, eq=False)
class GradedGroupSymbol:
    """Principal symbol x G_{mu+} in G_mu / G_{mu+}, mu = omega(x)."""

    omega: PValuation
    level: ValueQ
    rep: GroupElement

    def __eq__(self, other):
        if not isinstance(other, GradedGroupSymbol) or other.omega is not self.omega:
            return NotImplemented
        if veq(self.level, other.level) is not True:
            return False
        diff = self.rep * inverse(other.rep)
        if diff.is_identity():
            return True
        verdict = gt(self.omega(diff), self.level)
        if verdict is None:
            raise PValuationError("symbol comparison undetermined at this precision")
        return verdict

    def __hash__(self):
        return hash((id(self.omega), self.level))


def graded_symbol_group(omega: PValuation, x: GroupElement) -> GradedGroupSymbol:
    if x.is_identity():
        raise IdentityElement("the identity has no principal symbol")
    return GradedGroupSymbol(omega, omega(x), x)
