"""Derivation-layer tests: idempotent derivatives, pole quantities, the
T(Euler) and Virasoro actions."""

import itertools

import pytest

from bigphase import BadIndexPair, Context, QQ, TauLevelOverflow
from bigphase.derivation import (derive, lam, omega, special, t_euler, theta,
                                 v, virasoro, _s_ratio, _ss)


def test_derive_canonical_coordinates(ctx2):
    assert derive(1, ctx2.u(1)).equals(ctx2.one())
    assert derive(2, ctx2.u(1)).is_zero()


def test_derive_sqrt_metric(ctx2):
    assert derive(2, ctx2.s(1)).equals(ctx2.r(1, 2) * ctx2.s(2))
    assert derive(1, ctx2.s(1)).equals(ctx2.r(1, 1) * ctx2.s(1))
    # metric rule g' = 2 r s s follows
    assert derive(2, ctx2.g(1)).equals(2 * ctx2.r(1, 2)
                                       * ctx2.s(1) * ctx2.s(2))


def test_derive_rotation_coefficient_n1(ctx1):
    got = derive(1, ctx1.r(1, 1))
    want = -(ctx1.r(1, 1) ** 2) + ctx1.t(2, 1) * ctx1.g(1, -1)
    assert got.equals(want)


def test_derive_rotation_distinct(ctx3):
    # all-distinct indices: plain product rule value
    assert derive(3, ctx3.r(1, 2)).equals(ctx3.r(1, 3) * ctx3.r(2, 3))


def test_string_pairing_derivative_consistency(ctx2):
    # the closed level-1 string pairing must obey the same derivative rule
    # that drives the t-generators
    for i, j in itertools.product((1, 2), repeat=2):
        closed = ctx2.sum(ctx2.r(i, k) * _ss(ctx2, i, k) for k in (1, 2))
        rhs = (ctx2.r(i, j) * (_s_ratio(ctx2, i, j)
                               * ctx2.sum(ctx2.r(j, k) * _ss(ctx2, j, k)
                                          for k in (1, 2))
                               + _s_ratio(ctx2, j, i) * closed))
        if i == j:
            rhs = rhs + ctx2.t(2, i) - ctx2.sum(
                ctx2.r(i, m) * _s_ratio(ctx2, i, m)
                * ctx2.sum(ctx2.r(m, k) * _ss(ctx2, m, k) for k in (1, 2))
                for m in (1, 2))
        assert derive(j, closed).equals(rhs), (i, j)


@pytest.mark.parametrize("n", [2, 3])
def test_idempotent_derivatives_commute(n):
    ctx = Context(n, max_tau_level=6)
    R = range(1, n + 1)
    gens = [ctx.u(k) for k in R] + [ctx.s(k) for k in R]
    gens += [ctx.r(k, l) for k in R for l in R if k <= l]
    gens += [ctx.t(2, k) for k in R]
    for i, j in itertools.combinations(R, 2):
        for gen in gens:
            assert derive(i, derive(j, gen)).equals(
                derive(j, derive(i, gen))), (i, j, gen.render())


def test_v_diagonal_vanishes(ctx2):
    assert v(ctx2, 1, 1).is_zero()
    assert (v(ctx2, 1, 2) + v(ctx2, 2, 1)).is_zero()


def test_theta_explicit_n2(ctx2):
    # (r12 + r11 v21 + r12 v22) / (u2 - u1), with v22 = 0
    num = ctx2.r(1, 2) + ctx2.u_diff(1, 2) * ctx2.r(1, 1) * ctx2.r(1, 2)
    assert theta(ctx2, 1, 2).equals(num.div_u_diff(2, 1))


def test_special_dispatch_and_errors(ctx2):
    assert special(ctx2, "v", 1, 1).is_zero()
    assert special(ctx2, "theta", 1, 2).equals(theta(ctx2, 1, 2))
    for kind in ("theta", "omega", "lambda"):
        with pytest.raises(BadIndexPair):
            special(ctx2, kind, 2, 2)
    with pytest.raises(ValueError):
        special(ctx2, "xi", 1, 2)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_theta_symmetry_relation(n):
    ctx = Context(n)
    R = range(1, n + 1)
    for i, j in itertools.combinations(R, 2):
        lhs = theta(ctx, i, j) + theta(ctx, j, i)
        assert lhs.equals(-ctx.sum(ctx.r(i, k) * ctx.r(j, k) for k in R))


@pytest.mark.parametrize("n", [2, 3, 4])
def test_omega_lambda_symmetry(n):
    ctx = Context(n)
    R = range(1, n + 1)
    for i, j in itertools.combinations(R, 2):
        assert omega(ctx, i, j).equals(omega(ctx, j, i))
        rhs = ctx.sum(theta(ctx, i, k) * theta(ctx, j, k)
                      for k in R if k != i and k != j)
        assert (lam(ctx, i, j) + lam(ctx, j, i)).equals(rhs)


@pytest.mark.parametrize("n", [2, 3])
def test_theta_derivative_law(n):
    ctx = Context(n)
    for i, j in itertools.permutations(range(1, n + 1), 2):
        lhs = derive(j, theta(ctx, i, j))
        rhs = ((ctx.r(j, j) - _s_ratio(ctx, j, i) * ctx.r(i, j))
               * theta(ctx, i, j) - omega(ctx, i, j))
        assert lhs.equals(rhs), (i, j)


@pytest.mark.parametrize("n", [2, 3])
def test_omega_derivative_law_corrected(n):
    ctx = Context(n)
    R = range(1, n + 1)
    for i, j in itertools.permutations(R, 2):
        r2 = ctx.sum(ctx.r(i, k) ** 2 for k in R)
        tails = (_s_ratio(ctx, i, j) * theta(ctx, i, j)
                 + ctx.sum(_s_ratio(ctx, k, i) * theta(ctx, k, i)
                           for k in R if k != i))
        rhs = (theta(ctx, j, i)
               * (-r2 + ctx.t(2, i) * ctx.g(i, -1) + tails)
               + lam(ctx, i, j))
        got = derive(i, omega(ctx, i, j))
        assert got.equals(rhs), (i, j)
        # the near-miss bracket with +sum r^2 and no string-pairing term
        # misses by exactly theta(j,i)*(t2/g - 2 sum r^2)
        near = theta(ctx, j, i) * (r2 + tails) + lam(ctx, i, j)
        residual = theta(ctx, j, i) * (ctx.t(2, i) * ctx.g(i, -1) - 2 * r2)
        assert (got - near).equals(residual), (i, j)


@pytest.mark.parametrize("n", [2, 3])
def test_lambda_pole_taming(n):
    ctx = Context(n)
    for i, j in itertools.permutations(range(1, n + 1), 2):
        tamed = ctx.u_diff(i, j) * lam(ctx, j, i)
        assert tamed.delta_degree(i, j) <= 2


def test_pole_orders_of_derived_quantities(ctx3):
    assert theta(ctx3, 1, 2).delta_degree(1, 2) <= 1
    assert omega(ctx3, 1, 2).delta_degree(1, 2) <= 2
    assert lam(ctx3, 1, 2).delta_degree(1, 2) <= 3


def test_t_euler_generator_rules(ctx2):
    assert t_euler(ctx2.u(1)).is_zero()
    assert t_euler(ctx2.s(1)).equals(-(ctx2.u(1) * ctx2.s(1)))
    assert t_euler(ctx2.t(2, 1)).equals(-(ctx2.u(1) * ctx2.t(2, 1)))
    assert t_euler(ctx2.r(1, 2)).is_zero()
    want = ctx2.sum(ctx2.u(k) * ctx2.r(1, k) * _s_ratio(ctx2, k, 1)
                    for k in (1, 2))
    assert t_euler(ctx2.r(1, 1)).equals(want)


def test_t_euler_kills_pole_factors(ctx2):
    assert t_euler(ctx2.one().div_u_diff(1, 2)).is_zero()


def test_virasoro_simple_forms(ctx2):
    R = range(1, 3)
    for i in R:
        assert virasoro(1, ctx2.u(i)).equals(-(ctx2.u(i) ** 2))
        assert virasoro(1, ctx2.g(i)).equals(6 * ctx2.u(i) * ctx2.g(i))
        for j in R:
            rhs = ((ctx2.u(i) + ctx2.u(j)) * ctx2.r(i, j)
                   - ctx2.sum(v(ctx2, i, k) * v(ctx2, j, k) for k in R))
            if i == j:
                rhs = rhs + ctx2.rational(15, 4)
            assert virasoro(1, ctx2.r(i, j)).equals(rhs)


def test_virasoro_string_kills_everything_but_u(ctx2):
    assert virasoro(-1, ctx2.u(1)).equals(-ctx2.one())
    for gen in (ctx2.s(1), ctx2.r(1, 1), ctx2.r(1, 2), ctx2.t(2, 2)):
        assert virasoro(-1, gen).is_zero()


def test_virasoro_level_two_string_action(ctx2):
    R = range(1, 3)
    for i in R:
        rhs = (10 * ctx2.u(i) * ctx2.t(2, i)
               + QQ(35, 4) * ctx2.sum(ctx2.r(i, j) * _ss(ctx2, i, j)
                                      for j in R)
               + 6 * ctx2.sum(v(ctx2, i, j) * ctx2.r(j, k) * _ss(ctx2, i, k)
                              for j in R for k in R)
               + ctx2.sum(v(ctx2, i, j) * v(ctx2, j, k) * ctx2.r(k, l)
                          * _ss(ctx2, i, l)
                          for j in R for k in R for l in R))
        assert virasoro(1, ctx2.t(2, i)).equals(rhs)


def test_virasoro_level_three_combination(ctx2):
    R = range(1, 3)
    for i in R:
        lhs = virasoro(1, ctx2.t(3, i) * ctx2.g(i, -2))
        def w(a, b):
            if a == b:
                return ctx2.g(a, -2)
            return ctx2.monomial({("s", a): -3, ("s", b): -1})
        rhs = (QQ(63, 4) * ctx2.t(2, i) * ctx2.g(i, -2)
               + 8 * ctx2.sum(v(ctx2, i, j) * w(i, j) * ctx2.t(2, j)
                              for j in R)
               + ctx2.sum(v(ctx2, i, j) * v(ctx2, j, k) * w(i, k)
                          * ctx2.t(2, k) for j in R for k in R))
        assert lhs.equals(rhs)


def test_virasoro_bracket_relation(ctx2):
    gens = [ctx2.u(1), ctx2.s(2), ctx2.r(1, 1), ctx2.r(1, 2), ctx2.t(2, 1)]
    for m, k in [(1, 0), (2, 0), (2, 1), (1, -1), (3, 1)]:
        for gen in gens:
            lhs = (virasoro(m, virasoro(k, gen))
                   - virasoro(k, virasoro(m, gen)))
            assert lhs.equals((m - k) * virasoro(m + k, gen)), (m, k)


def test_degree_bookkeeping(ctx3):
    e = theta(ctx3, 1, 2)
    assert derive(3, e).degree() == 3
    assert t_euler(e).degree() == 1
    assert virasoro(0, e).degree() == 2
    assert virasoro(2, e).degree() == 0
    assert virasoro(-1, omega(ctx3, 1, 2)).degree() in (4, "any")


def test_tau_overflow_paths():
    ctx = Context(2, max_tau_level=2)
    with pytest.raises(TauLevelOverflow):
        derive(1, ctx.t(2, 1))
    with pytest.raises(TauLevelOverflow):
        virasoro(1, ctx.t(2, 1))
    # derivations not touching t-symbols still work at the cap
    assert derive(2, ctx.u(1)).is_zero()


def test_derive_index_range(ctx2):
    with pytest.raises(ValueError):
        derive(3, ctx2.u(1))
