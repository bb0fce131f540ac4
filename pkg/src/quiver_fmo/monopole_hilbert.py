"""Monopole-formula machinery: the degree function on torus coweights,
stabilizer Poincare factors, the truncated Hilbert series of the graded
coordinate ring, the good/ugly/bad classifier, and operator degrees.

Degrees follow the doubled cohomological convention throughout: the series
variable exponent is the cohomological degree, a polynomial dressing of
polynomial degree d sits in degree 2d.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .quiver import DimData, dot, mat_vec, two_delta_minuscule
from .gklo import GKLOContext


class BadTheoryError(ValueError):
    """The grading is unbounded below; there is no Hilbert series."""


class EnumerationBudgetError(RuntimeError):
    """The certified enumeration would exceed the point budget."""


# ---------------------------------------------------------------------------
# truncated integer power series


@dataclass(frozen=True)
class TruncSeries:
    """Power series in t truncated at order D inclusive; exact integers."""

    coeffs: tuple
    order: int

    @staticmethod
    def make(coeffs, order) -> "TruncSeries":
        cs = list(coeffs)[: order + 1]
        cs += [0] * (order + 1 - len(cs))
        return TruncSeries(tuple(cs), order)

    @staticmethod
    def zero(order) -> "TruncSeries":
        return TruncSeries.make([], order)

    @staticmethod
    def one(order) -> "TruncSeries":
        return TruncSeries.make([1], order)

    def __add__(self, other: "TruncSeries") -> "TruncSeries":
        if self.order != other.order:
            raise ValueError("order mismatch")
        return TruncSeries(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)),
                           self.order)

    def __mul__(self, other: "TruncSeries") -> "TruncSeries":
        if self.order != other.order:
            raise ValueError("order mismatch")
        out = [0] * (self.order + 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                if i + j > self.order:
                    break
                out[i + j] += a * b
        return TruncSeries(tuple(out), self.order)

    def shift(self, k: int) -> "TruncSeries":
        """Multiply by t^k."""
        out = [0] * (self.order + 1)
        for i, a in enumerate(self.coeffs):
            if i + k <= self.order:
                out[i + k] = a
        return TruncSeries(tuple(out), self.order)

    def pad_to(self, order: int) -> "TruncSeries":
        return TruncSeries.make(self.coeffs, order)


def geometric(k: int, order: int) -> TruncSeries:
    """Expansion of 1/(1 - t^k)."""
    out = [0] * (order + 1)
    j = 0
    while j <= order:
        out[j] = 1
        j += k
    return TruncSeries(tuple(out), order)


# ---------------------------------------------------------------------------
# degrees


def two_delta_general(ctx: GKLOContext, gamma) -> int:
    """Doubled monopole degree of an arbitrary torus coweight: minus twice the
    root pairings plus the matter weight pairings, all in absolute value."""
    v, w = ctx.v, ctx.w
    gamma = tuple(tuple(t) for t in gamma)
    if any(len(t) != vi for t, vi in zip(gamma, v)):
        raise ValueError("coweight shape does not match v")
    total = 0
    for i, tup in enumerate(gamma):
        for r in range(len(tup)):
            for s in range(r + 1, len(tup)):
                total -= 2 * abs(tup[r] - tup[s])
        total += w[i] * sum(abs(x) for x in tup)
    for (s, t) in ctx.quiver.edges:
        for a in gamma[s]:
            for b in gamma[t]:
                total += abs(b - a)
    return total


def fmo_degree(ctx: GKLOContext, m, dressing_degree: int = 0) -> int:
    """Degree of a dressed monopole operator at +-omega_m; dressing_degree is
    the cohomological (doubled) degree of the dressing."""
    if dressing_degree < 0:
        raise ValueError("dressing degree must be non-negative")
    return two_delta_minuscule(ctx.dims, ctx.cartan, m) + dressing_degree


# ---------------------------------------------------------------------------
# classification


@dataclass(frozen=True)
class TheoryClass:
    kind: str  # "good" | "ugly" | "bad"
    min_degree: int | None
    witness: tuple | None

    @property
    def conical(self) -> bool:
        return self.kind in ("good", "ugly")


def classify_theory(ctx: GKLOContext) -> TheoryClass:
    """Minimum of the doubled degree over the monopole generators: good if
    >= 2, ugly if exactly 1, bad if <= 0.  v = 0 counts as good (no
    generators besides the Casimirs)."""
    best = None
    witness = None
    for m in itertools.product(*(range(vi + 1) for vi in ctx.v)):
        if not any(m):
            continue
        val = two_delta_minuscule(ctx.dims, ctx.cartan, m)
        if best is None or val < best:
            best, witness = val, m
    if best is None:
        return TheoryClass("good", None, None)
    if best >= 2:
        return TheoryClass("good", best, witness)
    if best == 1:
        return TheoryClass("ugly", best, witness)
    return TheoryClass("bad", best, witness)


def degree_lower_bound(ctx: GKLOContext) -> Fraction:
    """Certified constant c with 2*Delta(gamma) >= c * sum|gamma| over the
    dominant cone.

    The degree function is positively homogeneous and piecewise linear; on
    the simplex section of the dominant cone its minimum sits at a vertex of
    the linearity subdivision, and every such vertex is proportional to a
    0/1 coweight, i.e. to some omega_m with 0 < m <= v.  The bound is
    therefore the minimum of 2*Delta(omega_m)/|m| over the box, and it is
    tight.
    """
    best = None
    for m in itertools.product(*(range(vi + 1) for vi in ctx.v)):
        if not any(m):
            continue
        val = Fraction(two_delta_minuscule(ctx.dims, ctx.cartan, m), sum(m))
        if best is None or val < best:
            best = val
    return best if best is not None else Fraction(1)


# ---------------------------------------------------------------------------
# dominant coweight enumeration by shells


@lru_cache(maxsize=None)
def _decreasing_tuples(length: int, norm: int):
    """Weakly decreasing integer tuples with given L1 norm."""
    if length == 0:
        return (() ,) if norm == 0 else ()
    out = []
    for first in range(-norm, norm + 1):
        rest_norm = norm - abs(first)
        if rest_norm < 0:
            continue
        for rest in _decreasing_tuples(length - 1, rest_norm):
            if rest and rest[0] > first:
                continue
            out.append((first,) + rest)
    return tuple(out)


def dominant_shell(v, norm: int):
    """Dominant coweights (weakly decreasing per vertex) of total L1 norm."""
    per_vertex_norms = _compositions(norm, len(v))
    out = []
    for split in per_vertex_norms:
        choices = [_decreasing_tuples(vi, n) for vi, n in zip(v, split)]
        out.extend(itertools.product(*choices))
    return out


def _compositions(total, parts):
    if parts == 0:
        return [()] if total == 0 else []
    out = []
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            out.append((first,) + rest)
    return out


def stabilizer_poincare(gamma, order: int) -> TruncSeries:
    """Product over equal-entry blocks of prod_{d=1}^{k} 1/(1 - t^{2d})."""
    out = TruncSeries.one(order)
    for tup in gamma:
        if list(tup) != sorted(tup, reverse=True):
            raise ValueError("coweight must be in dominant (sorted) form")
        for _, grp in itertools.groupby(tup):
            k = len(list(grp))
            for d in range(1, k + 1):
                out = out * geometric(2 * d, order)
    return out


DEFAULT_POINT_BUDGET = 2_000_000


def hilbert_series(ctx: GKLOContext, order: int,
                   point_budget: int = DEFAULT_POINT_BUDGET) -> TruncSeries:
    """Truncated monopole-formula Hilbert series: sum over dominant coweights
    of t^(2 Delta) times the stabilizer Poincare factor.

    Refuses bad theories; the shell enumeration is certified complete via
    degree_lower_bound, and errors out rather than emit uncertified
    coefficients when the budget is exceeded.
    """
    cls = classify_theory(ctx)
    if cls.kind == "bad":
        raise BadTheoryError(
            "degree %d at m=%r: the grading is not bounded below"
            % (cls.min_degree, cls.witness))
    if not any(ctx.v):
        return TruncSeries.one(order)
    c = degree_lower_bound(ctx)
    max_norm = int(Fraction(order) / c)
    total = TruncSeries.zero(order)
    seen = 0
    for norm in range(max_norm + 1):
        for gamma in dominant_shell(ctx.v, norm):
            seen += 1
            if seen > point_budget:
                raise EnumerationBudgetError(
                    "more than %d shell points needed up to norm %d"
                    % (point_budget, max_norm))
            deg = two_delta_general(ctx, gamma)
            if deg > order:
                continue
            total = total + stabilizer_poincare(gamma, order).shift(deg)
    return total
