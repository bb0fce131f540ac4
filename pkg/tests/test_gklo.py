"""Generating-function images, dressed monopole operators, the determinant
identity, the Chevalley involution, and orientation changes."""

import itertools
import random
from fractions import Fraction

import pytest

from quiver_fmo.multipoly import (
    MPoly,
    PartialSymPoly,
    RatFunc,
    ZVAR,
    check_symmetric,
    poly_text,
    uv,
    wv,
)
from quiver_fmo.quiver import a1_quiver, a2_quiver, affine_sl2_quiver
from quiver_fmo.gklo import (
    chevalley,
    d_identity_check,
    dressing_basis,
    fmo_minus,
    fmo_plus,
    fmo_sign,
    make_context,
    orientation_flip_sign,
    p_image,
    p_minus_image,
    q_image,
)

W11, W12 = MPoly.var(wv(0, 1)), MPoly.var(wv(0, 2))
U11, U12 = MPoly.var(uv(0, 1)), MPoly.var(uv(0, 2))
Z = MPoly.var(ZVAR)


def eval_mpoly(p, point):
    total = Fraction(0)
    for mon, c in p.terms.items():
        term = Fraction(c)
        for var, e in mon:
            term *= Fraction(point[var]) ** e
        total += term
    return total


def eval_ratfunc(f, point):
    return eval_mpoly(f.num, point) / eval_mpoly(f.den, point)


# ---------------------------------------------------------------------------
# generating functions


def test_q_image():
    ctx = make_context(a1_quiver(), (2,), (2,))
    assert q_image(ctx, 0) == (Z - W11) * (Z - W12)
    ctx0 = make_context(a1_quiver(), (2,), (0,))
    assert q_image(ctx0, 0) == MPoly.one()


def test_q_image_vieta():
    ctx = make_context(a1_quiver(), (0,), (3,))
    q = q_image(ctx, 0)
    # coefficient of z^{v-1} is minus the sum of the roots
    from quiver_fmo.multipoly import as_univar
    coeffs = as_univar(q, ZVAR)
    assert coeffs[2] == -(W11 + W12 + MPoly.var(wv(0, 3)))


def test_p_image_a1():
    ctx = make_context(a1_quiver(), (2,), (2,))
    expected = RatFunc.make((Z - W12) * U11 - (Z - W11) * U12, W11 - W12)
    assert p_image(ctx, 0).value == expected


def test_p_image_single_slot_no_out_edges():
    ctx = make_context(a2_quiver(), (0, 0), (1, 1))
    # vertex 1 has no outgoing edge
    assert p_image(ctx, 1).value == RatFunc.make(MPoly.var(uv(1, 1)))


def test_p_is_dressed_fmo():
    for quiver, w, v in [(a1_quiver(), (2,), (2,)), (a2_quiver(), (1, 1), (2, 1)),
                         (affine_sl2_quiver(), (1, 0), (2, 1))]:
        ctx = make_context(quiver, w, v)
        for i in range(quiver.n):
            dress = MPoly.one()
            for r in range(2, v[i] + 1):
                dress = dress * (Z - MPoly.var(wv(i, r)))
            e_i = tuple(1 if j == i else 0 for j in range(quiver.n))
            if v[i] == 0:
                continue
            f = PartialSymPoly.make(dress, e_i, v)
            assert fmo_plus(ctx, e_i, f).value == p_image(ctx, i).value, (w, v, i)
            assert fmo_minus(ctx, e_i, f).value == p_minus_image(ctx, i).value, (w, v, i)


def test_p_minus_single():
    ctx = make_context(a1_quiver(), (3,), (1,))
    assert p_minus_image(ctx, 0).value == RatFunc.make(-W11 ** 3 * MPoly.var(uv(0, 1), -1))


def test_p_minus_empty():
    ctx = make_context(a1_quiver(), (2,), (0,))
    assert p_minus_image(ctx, 0).value.is_zero()


def test_q_is_fmo_at_zero():
    ctx = make_context(a1_quiver(), (2,), (2,))
    dress = PartialSymPoly.make((Z - W11) * (Z - W12), (0,), (2,))
    assert fmo_plus(ctx, (0,), dress).value == RatFunc.from_poly(q_image(ctx, 0))
    assert fmo_minus(ctx, (0,), dress).value == RatFunc.from_poly(q_image(ctx, 0))


# ---------------------------------------------------------------------------
# monopole operators


def test_fmo_plus_examples():
    ctx = make_context(a1_quiver(), (2,), (2,))
    f = PartialSymPoly.make(W11 + W12, (0,), (2,))
    assert fmo_plus(ctx, (0,), f).value == RatFunc.from_poly(W11 + W12)
    assert fmo_plus(ctx, (1,), MPoly.one()).value == RatFunc.make(U11 - U12, W11 - W12)


def test_fmo_minus_examples():
    ctx1 = make_context(a1_quiver(), (3,), (1,))
    assert fmo_minus(ctx1, (1,), MPoly.one()).value == \
        RatFunc.make(-W11 ** 3 * MPoly.var(uv(0, 1), -1))
    ctx = make_context(a1_quiver(), (2,), (2,))
    # hand expansion of the two-subset sum; the overall sign (-1)^{m.v} = +1
    expected = RatFunc.make(W11 ** 2 * MPoly.var(uv(0, 1), -1), W12 - W11) \
        + RatFunc.make(W12 ** 2 * MPoly.var(uv(0, 2), -1), W11 - W12)
    assert fmo_minus(ctx, (1,), MPoly.one()).value == expected


def test_fmo_m_out_of_range():
    ctx = make_context(a1_quiver(), (2,), (1,))
    with pytest.raises(ValueError):
        fmo_plus(ctx, (2,), MPoly.one())
    with pytest.raises(ValueError):
        fmo_minus(ctx, (-1,), MPoly.one())


def test_fmo_rejects_non_symmetric_dressing():
    ctx = make_context(a1_quiver(), (2,), (2,))
    with pytest.raises(ValueError):
        fmo_plus(ctx, (0,), W11)


def test_lambda0_linearity():
    # fully symmetric factors pull out of both operator families
    for quiver, w, v in [(a1_quiver(), (2,), (2,)), (affine_sl2_quiver(), (1, 1), (1, 2))]:
        ctx = make_context(quiver, w, v)
        sym = MPoly.one()
        for i, vi in enumerate(v):
            for r in range(1, vi + 1):
                sym = sym * MPoly.var(wv(i, r))
        for m in itertools.product(*(range(vi + 1) for vi in v)):
            g = dressing_basis(v, m, 1)[-1]
            prod = PartialSymPoly.make(sym * g.value, m, v)
            for op in (fmo_plus, fmo_minus):
                assert op(ctx, m, prod).value == \
                    RatFunc.from_poly(sym) * op(ctx, m, g).value


def test_fmo_invariance_small_grid():
    for quiver, w, v in [(a1_quiver(), (1,), (3,)), (a2_quiver(), (1, 1), (2, 2)),
                         (affine_sl2_quiver(), (2, 0), (2, 1))]:
        ctx = make_context(quiver, w, v)
        for m in itertools.product(*(range(vi + 1) for vi in v)):
            for f in dressing_basis(v, m, 2)[:6]:
                assert check_symmetric(fmo_plus(ctx, m, f), v), (w, v, m)
                assert check_symmetric(fmo_minus(ctx, m, f), v), (w, v, m)


def test_fmo_sign_parity():
    ctx = make_context(affine_sl2_quiver(), (0, 0), (2, 3))
    # sum m_i v_i + sum over edges m_s v_t, mod 2
    assert fmo_sign(ctx, (1, 0)) == (2 + 2 * 3) % 2
    assert fmo_sign(ctx, (1, 1)) == (2 + 3 + 2 * 3) % 2


# ---------------------------------------------------------------------------
# determinant identity


def test_d_identity_a1():
    ctx = make_context(a1_quiver(), (2,), (1,))
    rep = d_identity_check(ctx, 0)
    assert rep.holds
    assert rep.d == RatFunc.from_poly(Z + W11)


def test_d_identity_empty_vertex():
    ctx = make_context(a2_quiver(), (1, 1), (0, 2))
    rep = d_identity_check(ctx, 0)
    assert rep.holds  # Q_0 = 1, nothing to divide


def test_d_identity_a2_with_point_check():
    ctx = make_context(a2_quiver(), (1, 1), (1, 1))
    rep = d_identity_check(ctx, 0)
    assert rep.holds
    # independent check: evaluate both sides of D*Q = P+P- + z^w * (neighbors)
    rng = random.Random(7)
    varset = set(rep.d.num.variables()) | set(rep.d.den.variables())
    varset |= {wv(0, 1), wv(1, 1), uv(0, 1), uv(1, 1), ZVAR}
    P = p_image(ctx, 0).value
    Pm = p_minus_image(ctx, 0).value
    Q0 = q_image(ctx, 0)
    Q1 = q_image(ctx, 1)
    for _ in range(20):
        pt = {var: Fraction(rng.randint(1, 40), rng.randint(1, 7)) for var in varset}
        lhs = eval_ratfunc(rep.d, pt) * eval_mpoly(Q0, pt)
        rhs = eval_ratfunc(P, pt) * eval_ratfunc(Pm, pt) \
            + Fraction(pt[ZVAR]) * eval_mpoly(Q1, pt)
        assert lhs == rhs


def test_d_identity_suite():
    cases = [(a1_quiver(), (2,), (2,)), (a2_quiver(), (2, 1), (2, 1)),
             (affine_sl2_quiver(), (1, 0), (2, 2)), (affine_sl2_quiver(), (2, 0), (1, 1))]
    for quiver, w, v in cases:
        ctx = make_context(quiver, w, v)
        for i in range(quiver.n):
            assert d_identity_check(ctx, i).holds, (w, v, i)


# ---------------------------------------------------------------------------
# Chevalley involution


def test_chevalley_a1_single():
    ctx = make_context(a1_quiver(), (3,), (1,))
    e = fmo_plus(ctx, (1,), MPoly.one())
    img = chevalley(ctx, e)
    assert img.value == RatFunc.make(-W11 ** 3 * MPoly.var(uv(0, 1), -1))


def test_chevalley_involutive_and_swaps_fmos():
    cases = [(a1_quiver(), (2,), (2,)), (a2_quiver(), (1, 1), (1, 1)),
             (affine_sl2_quiver(), (2, 0), (2, 1))]
    for quiver, w, v in cases:
        ctx = make_context(quiver, w, v)
        for m in itertools.product(*(range(vi + 1) for vi in v)):
            for f in dressing_basis(v, m, 1):
                plus = fmo_plus(ctx, m, f)
                minus = fmo_minus(ctx, m, f)
                img = chevalley(ctx, plus)
                assert img.value == minus.value, (w, v, m, poly_text(f.value))
                assert chevalley(ctx, img).value == plus.value


# ---------------------------------------------------------------------------
# orientation change


def test_orientation_examples():
    ctx = make_context(a2_quiver(), (1, 1), (1, 1))
    rep = orientation_flip_sign(ctx, 0, (1, 0))
    assert rep.sign == 1 and rep.matches
    rep = orientation_flip_sign(ctx, 0, (0, 1))
    assert rep.sign == -1 and rep.matches
    rep = orientation_flip_sign(ctx, 0, (0, 0))
    assert rep.sign == 1 and rep.matches


def test_orientation_sweep():
    for quiver, w, v in [(a2_quiver(), (1, 1), (2, 2)),
                         (affine_sl2_quiver(), (1, 1), (2, 1))]:
        ctx = make_context(quiver, w, v)
        for k in range(len(quiver.edges)):
            for m in itertools.product(*(range(vi + 1) for vi in v)):
                rep = orientation_flip_sign(ctx, k, m)
                s, t = quiver.edges[k]
                assert rep.sign == (-1) ** (m[t] * (v[s] - m[s]))
                assert rep.matches, (w, v, k, m)
