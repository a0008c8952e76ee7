"""Kernel tests: exact arithmetic, normalization, evaluation, grading."""

import json
import random

import pytest
from hypothesis import given, settings, strategies as st

from bigphase import (ANY_DEGREE, NON_HOMOGENEOUS, QQ, Context, Expression,
                      MissingAssignment, PoleHit, TauLevelOverflow,
                      from_tree, random_point)


def test_additive_inverse(ctx2):
    assert (ctx2.u(1) + (-ctx2.u(1))).is_zero()


def test_sqrt_metric_square(ctx2):
    prod = ctx2.s(1) * ctx2.s(1)
    assert prod.equals(ctx2.g(1))
    assert prod.render() == "s1^2"


def test_pole_sign_normalization(ctx2):
    a = ctx2.one().div_u_diff(1, 2)
    b = ctx2.one().div_u_diff(2, 1)
    assert (a + b).is_zero()


def test_distinct_generators_differ(ctx2):
    assert not ctx2.u(1).equals(ctx2.u(2))


def test_r_stored_symmetric(ctx2):
    assert ctx2.r(2, 1).equals(ctx2.r(1, 2))


def test_normalization_cancels_exact_divisor(ctx2):
    e = (ctx2.u_diff(1, 2) * ctx2.r(1, 2)).div_u_diff(1, 2)
    assert e.equals(ctx2.r(1, 2))
    assert e.den == ()


def test_normalization_idempotent(ctx2):
    e = (ctx2.u(1) * ctx2.r(1, 1) + ctx2.r(1, 2)).div_u_diff(2, 1)
    renorm = Expression(ctx2, dict(e.num), dict(e.den), _normalized=False)
    assert renorm == e


def test_delta_degree_tracking(ctx2):
    e = ctx2.r(1, 2).div_u_diff(1, 2).div_u_diff(1, 2)
    assert e.delta_degree(1, 2) == 2
    assert e.delta_degree(2, 1) == 2
    assert e.max_pole_order() == 2


def test_evaluate_direct_substitution(ctx1):
    e = ctx1.u(1) * ctx1.s(1, -2)
    assert e.evaluate({("u", 1): 2, ("s", 1): 3}) == QQ(2, 9)


def test_evaluate_pole_hit(ctx2):
    e = ctx2.r(1, 2).div_u_diff(1, 2)
    point = {("u", 1): 1, ("u", 2): 1, ("r", 1, 2): 5}
    with pytest.raises(PoleHit):
        e.evaluate(point)


def test_evaluate_missing_assignment(ctx2):
    with pytest.raises(MissingAssignment):
        (ctx2.u(1) * ctx2.r(1, 2)).evaluate({("u", 1): 1})


def test_degree_examples(ctx2):
    assert ctx2.r(1, 2).degree() == 1
    assert (ctx2.u(1) * ctx2.r(1, 1) ** 2).degree() == 1
    assert ctx2.zero().degree() == ANY_DEGREE
    assert (ctx2.u(1) + ctx2.r(1, 2)).degree() == NON_HOMOGENEOUS
    assert ctx2.t(3, 1).degree() == 3
    assert ctx2.r(1, 2).div_u_diff(1, 2).degree() == 2


def test_zero_is_homogeneous_of_anything(ctx2):
    assert ctx2.zero().is_homogeneous_of(7)
    assert ctx2.zero().is_homogeneous_of(-3)


def test_pow(ctx2):
    e = ctx2.u(1) + ctx2.s(2)
    assert (e ** 3).equals(e * e * e)
    assert (e ** 0).equals(ctx2.one())
    with pytest.raises(ValueError):
        e ** -1


def test_scalar_ops(ctx2):
    e = ctx2.r(1, 2)
    assert (3 * e - e - e - e).is_zero()
    assert (e / 2).equals(QQ(1, 2) * e)
    assert (1 - e + e - 1).is_zero()


def test_context_validation():
    with pytest.raises(ValueError):
        Context(0)
    with pytest.raises(ValueError):
        Context(5)
    with pytest.raises(ValueError):
        Context(2, max_tau_level=1)


def test_tau_level_cap():
    ctx = Context(2, max_tau_level=3)
    ctx.t(3, 1)
    with pytest.raises(TauLevelOverflow):
        ctx.t(4, 1)


def test_negative_exponent_only_on_s(ctx2):
    ctx2.s(1, -3)
    with pytest.raises(ValueError):
        ctx2.monomial({("u", 1): -1})


def test_mixing_contexts_raises(ctx1, ctx2):
    with pytest.raises(ValueError):
        ctx1.u(1) + ctx2.u(1)


def test_select(ctx2):
    e = ctx2.t(2, 1) * ctx2.u(1) + ctx2.r(1, 2)
    assert e.select(("t", 2, 1)).equals(ctx2.t(2, 1) * ctx2.u(1))
    assert e.select(("t", 2, 2)).is_zero()


def test_select_renormalizes(ctx2):
    # the selected part alone shares the pole factor; it must cancel
    e = (ctx2.u_diff(1, 2) * ctx2.t(2, 1) + ctx2.r(1, 2)).div_u_diff(1, 2)
    part = e.select(("t", 2, 1))
    assert part.equals(ctx2.t(2, 1))
    assert part.den == ()


def test_render_deterministic(ctx2):
    e = ctx2.u(2) * ctx2.r(1, 2) - ctx2.s(1, -1) * ctx2.s(2)
    assert e.render() == e.render()
    f = ctx2.r(1, 2) * ctx2.u(2) - ctx2.s(2) * ctx2.s(1, -1)
    assert e.render() == f.render()


def test_tree_roundtrip(ctx2):
    e = (ctx2.u(1) * ctx2.r(1, 2) ** 2 - QQ(5, 3) * ctx2.t(2, 2)
         * ctx2.s(1, -2)).div_u_diff(2, 1)
    tree = json.loads(json.dumps(e.to_tree()))
    assert from_tree(ctx2, tree).equals(e)


def test_tree_roundtrip_zero(ctx2):
    assert from_tree(ctx2, ctx2.zero().to_tree()).is_zero()


# -- randomized algebra laws ---------------------------------------------------

_CTX = Context(2, max_tau_level=4)
_ATOMS = [_CTX.u(1), _CTX.u(2), _CTX.s(1), _CTX.s(2, -1), _CTX.r(1, 2),
          _CTX.r(1, 1), _CTX.t(2, 1), _CTX.one(), _CTX.const(QQ(-3, 7))]


@st.composite
def small_expressions(draw):
    n_terms = draw(st.integers(1, 3))
    total = _CTX.zero()
    for _ in range(n_terms):
        coeff = QQ(draw(st.integers(-6, 6)), draw(st.integers(1, 5)))
        term = _CTX.const(coeff)
        for idx in draw(st.lists(st.integers(0, len(_ATOMS) - 1),
                                 max_size=3)):
            term = term * _ATOMS[idx]
        total = total + term
    if draw(st.booleans()):
        total = total.div_u_diff(1, 2)
    return total


@settings(max_examples=60, deadline=None)
@given(small_expressions(), small_expressions(), small_expressions())
def test_ring_axioms(a, b, c):
    assert ((a + b) + c).equals(a + (b + c))
    assert (a * (b + c)).equals(a * b + a * c)
    assert (a * b).equals(b * a)
    assert (a - a).is_zero()


@settings(max_examples=40, deadline=None)
@given(small_expressions(), small_expressions(), st.integers(0, 2 ** 30))
def test_evaluate_is_ring_morphism(a, b, seed):
    rng = random.Random(seed)
    point = random_point(_CTX, rng)
    try:
        va, vb = a.evaluate(point), b.evaluate(point)
    except PoleHit:
        return
    assert (a * b).evaluate(point) == va * vb
    assert (a + b).evaluate(point) == va + vb


def test_equal_expressions_agree_at_1000_points():
    # a nontrivial pair equal as expressions, compared pointwise
    from bigphase.derivation import theta
    ctx = Context(2)
    lhs = theta(ctx, 1, 2) + theta(ctx, 2, 1)
    rhs = -ctx.sum(ctx.r(1, k) * ctx.r(2, k) for k in (1, 2))
    assert lhs.equals(rhs)
    rng = random.Random(1152)
    done = 0
    while done < 1000:
        point = random_point(ctx, rng)
        try:
            va, vb = lhs.evaluate(point), rhs.evaluate(point)
        except PoleHit:
            continue
        assert va == vb
        done += 1


@settings(max_examples=40, deadline=None)
@given(small_expressions(), st.integers(0, 2 ** 30))
def test_equal_expressions_evaluate_equal(a, seed):
    b = a + _CTX.u(1) - _CTX.u(1)  # same value, different build path
    assert a.equals(b)
    rng = random.Random(seed)
    for _ in range(5):
        point = random_point(_CTX, rng)
        try:
            assert a.evaluate(point) == b.evaluate(point)
        except PoleHit:
            continue
