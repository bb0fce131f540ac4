"""Adding-defect map on localized zastava coordinates, restriction of
monopole operators along closed embeddings of zastava spaces and slices, and
the symbolic verification of the two compatibility statements.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .multipoly import (
    GKLOElement,
    MPoly,
    PartialSymPoly,
    RatFunc,
    U_KIND,
    W_KIND,
    ratfunc_sum,
    sweedler,
    tilde,
    uv,
    wv,
)
from .quiver import DimData, mat_vec
from .gklo import GKLOContext, chevalley, fmo, fmo_minus, fmo_plus


@dataclass(frozen=True)
class DefectSplit:
    v: tuple
    v_prime: tuple

    def __post_init__(self):
        if len(self.v) != len(self.v_prime):
            raise ValueError("v and v' must have the same length")
        if any(not 0 <= vp <= vi for vp, vi in zip(self.v_prime, self.v)):
            raise ValueError("need 0 <= v' <= v componentwise")

    @property
    def v_doubleprime(self):
        return tuple(vi - vp for vi, vp in zip(self.v, self.v_prime))

    @staticmethod
    def make(v, v_prime) -> "DefectSplit":
        return DefectSplit(tuple(v), tuple(v_prime))


def phi_u_image(ctx: GKLOContext, split: DefectSplit, i: int, r: int):
    """Image of u_{i,r}: zero on the defect slots, otherwise the ratio of the
    tail-difference products times u_{i,r}."""
    if r > split.v_prime[i]:
        return None
    num = MPoly.one()
    for s in range(split.v_prime[i] + 1, split.v[i] + 1):
        num = num * (MPoly.var(wv(i, r)) - MPoly.var(wv(i, s)))
    den = MPoly.one()
    for a in ctx.quiver.out_edges(i):
        t = a[1]
        for tt in range(split.v_prime[t] + 1, split.v[t] + 1):
            den = den * (MPoly.var(wv(t, tt)) - MPoly.var(wv(i, r)))
    return RatFunc.make(num * MPoly.var(uv(i, r)), den)


def phi(ctx: GKLOContext, split: DefectSplit, e) -> GKLOElement:
    """Adding-defect substitution.  Requires non-negative u-exponents (some
    u's are sent to zero); a term containing a killed u is dropped wholesale
    before any normalization."""
    value = e.value if isinstance(e, GKLOElement) else e
    if split.v != ctx.v:
        raise ValueError("split does not match the context")
    for mon in value.num.terms:
        for var, exp in mon:
            if var[0] == U_KIND and exp < 0:
                raise ValueError("adding-defect map needs non-negative u-exponents")
    mapping = {}
    for i, vi in enumerate(split.v):
        for r in range(1, vi + 1):
            mapping[uv(i, r)] = phi_u_image(ctx, split, i, r)
    return GKLOElement.make(value.subs_u(mapping), "defect_loc")


def phi_fmo_terms(ctx: GKLOContext, split: DefectSplit, m, f: PartialSymPoly,
                  with_u: bool = True):
    """phi applied to the defining sum of M^+_m(f) term by term: subsets
    meeting the defect slots are dropped wholesale (their u is sent to zero),
    the survivors pick up the substitution's tail factors.  Yields
    (subset, numerator, factored-denominator) triples."""
    from .multipoly import diff_key
    from .gklo import fmo_plus_terms

    m = tuple(m)
    if not any(m):
        yield tuple(() for _ in split.v), f.value, {}
        return
    if any(mi > vp for mi, vp in zip(m, split.v_prime)):
        return
    for gamma, num, dfac in fmo_plus_terms(ctx, m, f, head=split.v_prime,
                                           with_u=with_u):
        dfac = dict(dfac)
        for i, g in enumerate(gamma):
            for r in g:
                for s in range(split.v_prime[i] + 1, split.v[i] + 1):
                    num = num * (MPoly.var(wv(i, r)) - MPoly.var(wv(i, s)))
                for a in ctx.quiver.out_edges(i):
                    t = a[1]
                    for tt in range(split.v_prime[t] + 1, split.v[t] + 1):
                        key, sg = diff_key(wv(t, tt), wv(i, r))
                        dfac[key] = dfac.get(key, 0) + 1
                        if sg < 0:
                            num = -num
        yield gamma, num, dfac


def phi_fmo_plus(ctx: GKLOContext, split: DefectSplit, m, f: PartialSymPoly) -> RatFunc:
    """phi of M^+_m(f), computed termwise; agrees with phi applied to the
    normalized operator."""
    return ratfunc_sum(
        (num, dfac) for _, num, dfac in phi_fmo_terms(ctx, split, m, f))


def defect_L_poly(split: DefectSplit, i: int) -> MPoly:
    """The monic tail factor prod_{r > v'_i} (z - w_{i,r})."""
    from .multipoly import ZVAR

    out = MPoly.one()
    for r in range(split.v_prime[i] + 1, split.v[i] + 1):
        out = out * (MPoly.var(ZVAR) - MPoly.var(wv(i, r)))
    return out


@dataclass(frozen=True)
class VerifyReport:
    holds: bool
    lhs: RatFunc
    rhs: RatFunc


def verify_adding_defect_theorem(ctx: GKLOContext, split: DefectSplit, m, f) -> VerifyReport:
    """Check phi(M^+_m(f)) against the Sweedler-decomposed right-hand side
    sum of M^+_m(f^(1)) * f^(2) over the smaller ring (zero when m > v').

    Distinct surviving subsets carry distinct u-monomials, so the identity
    decomposes subset by subset; each piece is an exact polynomial identity
    over its own denominators.  The reduced sides are only materialized for
    the report."""
    from .multipoly import terms_sum_to_zero
    from .gklo import fmo_plus_terms

    m = tuple(m)
    if not isinstance(f, PartialSymPoly):
        f = PartialSymPoly.make(f, m, ctx.v)
    groups = {}
    for gamma, num, dfac in phi_fmo_terms(ctx, split, m, f, with_u=False):
        groups.setdefault(gamma, []).append((num, dfac))
    if any(mi > vp for mi, vp in zip(m, split.v_prime)):
        rhs = RatFunc.zero()
    else:
        sub_ctx = GKLOContext(ctx.quiver, DimData.make(ctx.w, split.v_prime))
        rhs = RatFunc.zero()
        for f1, f2 in sweedler(f, split.v_prime):
            part = fmo_plus(sub_ctx, m, f1).value
            rhs = rhs + part * f2
            for gamma, num, dfac in fmo_plus_terms(sub_ctx, m, f1, with_u=False):
                groups.setdefault(gamma, []).append((-num * f2, dfac))
    holds = all(terms_sum_to_zero(items) for items in groups.values())
    lhs = rhs if holds else phi_fmo_plus(ctx, split, m, f)
    return VerifyReport(holds, lhs, rhs)


def slice_target_context(ctx: GKLOContext, v_prime) -> GKLOContext:
    """Context of the smaller slice: same quiver, v', and framing
    w' = w - C v'' (the lower coweight is unchanged); w' must be dominant."""
    split = DefectSplit.make(ctx.v, v_prime)
    C = ctx.cartan
    w_prime = tuple(wi - x for wi, x in zip(ctx.w, mat_vec(C, split.v_doubleprime)))
    if any(x < 0 for x in w_prime):
        raise ValueError("target framing w - C v'' is not dominant")
    return GKLOContext(ctx.quiver, DimData.make(w_prime, split.v_prime))


def restrict_fmo_slice(ctx: GKLOContext, v_prime, m, f, sign: str) -> GKLOElement:
    """Image of M^sign_m(f) under restriction to the smaller slice:
    M^sign_m(tilde f) in the v' context, or zero when m > v'."""
    m = tuple(m)
    if not isinstance(f, PartialSymPoly):
        f = PartialSymPoly.make(f, m, ctx.v)
    tag = "zastava_loc" if sign == "+" else "slice_loc"
    if any(mi > vp for mi, vp in zip(m, v_prime)):
        return GKLOElement.make(RatFunc.zero(), tag)
    target = slice_target_context(ctx, v_prime)
    return fmo(target, m, tilde(f, v_prime), sign)


def _tail_zero_term(num: MPoly, dfac: dict, split: DefectSplit):
    """Specialize one (numerator, factored denominator) pair at the divisor
    supported at zero: tail w-variables vanish, so factors x_a - x_b with a
    tail slot collapse to single-variable factors (with a sign)."""
    def is_tail(var):
        kind, i, r = var
        return kind == W_KIND and r > split.v_prime[i]

    tail = [wv(i, r) for i, (vp, vi) in enumerate(zip(split.v_prime, split.v))
            for r in range(vp + 1, vi + 1)]
    num = num.subs_zero(tail)
    if num.is_zero():
        return None
    out = {}
    for cand, mult in dfac.items():
        if cand[0] == "var":
            if is_tail(cand[1]):
                raise ZeroDivisionError("denominator vanishes at the zero divisor")
            out[cand] = out.get(cand, 0) + mult
            continue
        a, b = cand[1], cand[2]
        ta, tb = is_tail(a), is_tail(b)
        if ta and tb:
            raise ZeroDivisionError("denominator vanishes at the zero divisor")
        if tb:
            key = ("var", a)
        elif ta:
            key = ("var", b)
            if mult % 2:
                num = -num
        else:
            key = cand
        out[key] = out.get(key, 0) + mult
    return num, out


@lru_cache(maxsize=65536)
def _plus_restriction_route(quiver, v, v_prime, m, f: PartialSymPoly):
    """Framing-independent positive-side comparison: the tail-at-zero defect
    route against the direct truncated operator, decomposed per subset.
    Returns (holds, route)."""
    from .multipoly import terms_sum_to_zero
    from .gklo import fmo_plus, fmo_plus_terms

    ctx = GKLOContext(quiver, DimData.make((0,) * quiver.n, v))
    split = DefectSplit.make(v, v_prime)
    groups = {}
    for gamma, num, dfac in phi_fmo_terms(ctx, split, m, f, with_u=False):
        t = _tail_zero_term(num, dfac, split)
        if t is not None:
            groups.setdefault(gamma, []).append(t)
    if any(mi > vp for mi, vp in zip(m, v_prime)):
        plus_rhs = RatFunc.zero()
    else:
        sub_ctx = GKLOContext(quiver, DimData.make((0,) * quiver.n, v_prime))
        ft = tilde(f, v_prime)
        plus_rhs = fmo_plus(sub_ctx, m, ft).value
        if any(m):
            for gamma, num, dfac in fmo_plus_terms(sub_ctx, m, ft, with_u=False):
                groups.setdefault(gamma, []).append((-num, dfac))
        else:
            groups.setdefault(tuple(() for _ in v), []).append(
                (-ft.value, {}))
    holds = all(terms_sum_to_zero(items) for items in groups.values())
    if not holds:
        lhs_terms = []
        for gamma, num, dfac in phi_fmo_terms(ctx, split, m, f):
            t = _tail_zero_term(num, dfac, split)
            if t is not None:
                lhs_terms.append(t)
        return False, ratfunc_sum(lhs_terms)
    return True, plus_rhs


def verify_restriction(ctx: GKLOContext, v_prime, m, f, sign: str) -> VerifyReport:
    """Independent route to the slice restriction: the defect substitution
    specialized at the tail-at-zero divisor (composed with the involution for
    the negative operators), compared against restrict_fmo_slice."""
    m = tuple(m)
    v_prime = tuple(v_prime)
    if not isinstance(f, PartialSymPoly):
        f = PartialSymPoly.make(f, m, ctx.v)
    target = slice_target_context(ctx, v_prime)
    plus_holds, plus_route = _plus_restriction_route(
        ctx.quiver, ctx.v, v_prime, m, f)

    if sign == "+":
        return VerifyReport(plus_holds, plus_route,
                            restrict_fmo_slice(ctx, v_prime, m, f, "+").value)

    # negative side along the involution route
    rhs = restrict_fmo_slice(ctx, v_prime, m, f, "-").value
    if any(mi > vp for mi, vp in zip(m, v_prime)):
        return VerifyReport(plus_holds and rhs.is_zero(), RatFunc.zero(), rhs)
    if plus_holds:
        from .gklo import involution_fmo_report
        rep = involution_fmo_report(target, m, tilde(f, v_prime))
        return VerifyReport(rep.swaps and rep.minus == rhs, rep.image, rhs)
    lhs = chevalley(target, GKLOElement.make(plus_route, "slice_loc_loc")).value
    return VerifyReport(False, lhs, rhs)
