"""Genus-2 assembly tests, anchored to the independent N=1 oracle and the
frozen closed forms."""

import pytest

from bigphase import Context, QQ, TauLevelOverflow
from bigphase.derivation import pairing, t_euler, virasoro
from bigphase.genus2 import (a1_of, b_diag, c_coeff, d_coeff, f2,
                             l1_constraint_split, l1_f2_closed, prediction)

import n1_oracle as oracle


# -- N=1 oracle comparisons -----------------------------------------------------

def test_b_diag_matches_oracle(ctx1):
    got = oracle.engine_to_sympy(b_diag(ctx1, 1))
    assert (got - oracle.b_diag()).expand() == 0


def test_b_diag_n1_frozen_regression(ctx1):
    g, r = ctx1.g, ctx1.r(1, 1)
    t2, t3, t4 = ctx1.t(2, 1), ctx1.t(3, 1), ctx1.t(4, 1)
    want = (QQ(29, 2880) * t2 ** 2 * g(1, -3)
            - QQ(1, 576) * t4 * g(1, -2)
            + QQ(29, 2880) * r * t3 * g(1, -2)
            - QQ(7, 240) * r ** 2 * t2 * g(1, -2))
    assert b_diag(ctx1, 1).equals(want)


def test_f2_assembled_matches_oracle(ctx1):
    got = oracle.engine_to_sympy(f2(ctx1, "assembled"))
    assert (got - oracle.f2()).expand() == 0


def test_a1_matches_oracle(ctx1):
    for which, w in (("tauS", oracle.string_pairing),
                     ("tau2L0", oracle.l0_pairing)):
        base = 1 if which == "tauS" else 2
        got = oracle.engine_to_sympy(a1_of(ctx1, which))
        want = oracle.a1(w(base), w(base + 1), w(base + 2))
        assert (got - want).expand() == 0, which


# -- frozen N=1 closed forms ------------------------------------------------------

def test_f2_rotation_n1_frozen(ctx1):
    g, r = ctx1.g, ctx1.r(1, 1)
    want = (-5 * ctx1.t(3, 1) * g(1, -2) + 29 * r * ctx1.t(2, 1) * g(1, -2)
            - 28 * r ** 3 * g(1, -1)) / 5760
    assert f2(ctx1, "rotation").equals(want)


def test_l1_f2_n1_frozen(ctx1):
    g, r = ctx1.g, ctx1.r(1, 1)
    want = (6 * ctx1.t(2, 1) * g(1, -2)
            - QQ(49, 4) * r ** 2 * g(1, -1)) / 1152
    assert l1_f2_closed(ctx1).equals(want)


def test_prediction_n1_frozen(ctx1):
    g, r = ctx1.g, ctx1.r(1, 1)
    want = (24 * ctx1.t(2, 1) * g(1, -1) - 49 * r ** 2) * g(1, -1) / 4608
    assert prediction(ctx1, "rotation").equals(want)
    assert prediction(ctx1, "gstar").equals(want)


# -- structural claims -------------------------------------------------------------

def test_b_diag_t4_coefficient(ctx1, ctx2):
    for ctx in (ctx1, ctx2):
        for i in range(1, ctx.n + 1):
            part = b_diag(ctx, i).select(("t", 4, i))
            want = -(QQ(1, 576) * ctx.t(4, i) * ctx.g(i, -2))
            assert part.equals(want), i


def test_b_diag_degree(ctx2):
    for i in (1, 2):
        assert b_diag(ctx2, i).is_homogeneous_of(4)


def test_a1_tau2_group_coefficient(ctx2):
    # the <tau^2 W, E_i> group of A1 carries 1/(1152 g_i^2): for W = tau_-(S)
    # that is the only source of t3
    val = a1_of(ctx2, "tauS")
    for i in (1, 2):
        part = val.select(("t", 3, i))
        assert part.equals(QQ(1, 1152) * ctx2.t(3, i) * ctx2.g(i, -2))


def test_a1_degree(ctx2):
    assert a1_of(ctx2, "tauS").is_homogeneous_of(3)


def test_f2_structure(ctx2):
    val = f2(ctx2, "rotation")
    assert val.is_homogeneous_of(3)
    assert val.t_levels() <= {2, 3}
    assert val.max_pole_order() <= 2
    l1 = l1_f2_closed(ctx2)
    assert l1.is_homogeneous_of(2)
    assert l1.t_levels() <= {2}
    assert l1.max_pole_order() <= 1


def test_l1_f2_t2_group_coefficient(ctx2):
    # the t2 content of L_1 f2 is exactly (6 + 24 sum_j v_ij^2)/(1152 g_i^2)
    from bigphase.derivation import v
    val = l1_f2_closed(ctx2)
    for i in (1, 2):
        part = val.select(("t", 2, i))
        want = (ctx2.t(2, i) * ctx2.g(i, -2)
                * (6 + 24 * ctx2.sum(v(ctx2, i, j) ** 2
                                     for j in (1, 2)))) / 1152
        assert part.equals(want), i


def test_t4_cancellation_in_f2(ctx2):
    val = f2(ctx2, "assembled")
    for i in (1, 2):
        assert val.select(("t", 4, i)).is_zero()


# -- route equalities ---------------------------------------------------------------

@pytest.mark.parametrize("n", [1, 2])
def test_f2_equivalence(n):
    ctx = Context(n, max_tau_level=6)
    assert f2(ctx, "assembled").equals(f2(ctx, "rotation"))


@pytest.mark.parametrize("n", [1, 2])
def test_l1_consistency(n):
    ctx = Context(n, max_tau_level=6)
    assert virasoro(1, f2(ctx, "rotation")).equals(l1_f2_closed(ctx))


@pytest.mark.parametrize("n", [1, 2])
def test_virasoro_main(n):
    ctx = Context(n, max_tau_level=6)
    assert l1_f2_closed(ctx).equals(prediction(ctx, "rotation"))


@pytest.mark.parametrize("n", [1, 2])
def test_prediction_paths(n):
    ctx = Context(n, max_tau_level=6)
    assert prediction(ctx, "gstar").equals(prediction(ctx, "rotation"))


@pytest.mark.parametrize("n", [1, 2])
def test_split_route(n):
    ctx = Context(n, max_tau_level=6)
    part_a, part_b = l1_constraint_split(ctx)
    total = part_a + part_b
    assert total.equals(l1_f2_closed(ctx))
    for lvl in (3, 4):
        for i in range(1, n + 1):
            assert total.select(("t", lvl, i)).is_zero(), (lvl, i)
    assert part_a.is_homogeneous_of(2)
    assert part_b.is_homogeneous_of(2)
    # individually both parts do carry levels 3 and 4
    assert part_a.t_levels() == {2, 3, 4}
    assert part_b.t_levels() == {2, 3, 4}


@pytest.mark.parametrize("n", [1, 2])
def test_split_parts_match_operator_definitions(n):
    ctx = Context(n, max_tau_level=6)
    part_a, part_b = l1_constraint_split(ctx)
    def_a = a1_of(ctx, "tau2L1") - t_euler(
        a1_of(ctx, "tau2L0") + QQ(3, 2) * a1_of(ctx, "tauS"))
    assert part_a.equals(def_a)
    def_b = ctx.sum(ctx.u(i) * t_euler(b_diag(ctx, i))
                    - ctx.u(i) ** 2 * b_diag(ctx, i)
                    for i in range(1, n + 1)) / 2
    assert part_b.equals(def_b)


# -- split coefficients vs their definitions -------------------------------------------

@pytest.mark.parametrize("n", [1, 2])
def test_c_d_coefficients_from_definitions(n):
    ctx = Context(n, max_tau_level=6)
    R = range(1, n + 1)
    for i in R:
        for k in (2, 3):
            got = d_coeff(ctx, i, k)
            want = ctx.g(i, -1) * (pairing(ctx, ("L", 0), k, i)
                                   + QQ(3, 2) * pairing(ctx, "S", k - 1, i))
            assert got.equals(want), ("d", i, k)
        for j in R:
            for k in (2, 3, 4):
                got = c_coeff(ctx, i, j, k)
                shift = ctx.u(i) + 2 * ctx.u(j)
                want = ctx.g(i, -1) * (
                    pairing(ctx, ("L", 1), k, i)
                    - shift * (pairing(ctx, ("L", 0), k, i)
                               + QQ(3, 2) * pairing(ctx, "S", k - 1, i)))
                assert got.equals(want), ("c", i, j, k)


def test_c_d_degrees(ctx2):
    for k in (2, 3, 4):
        assert c_coeff(ctx2, 1, 2, k).is_homogeneous_of(k - 2)
    for k in (2, 3):
        assert d_coeff(ctx2, 1, k).is_homogeneous_of(k - 1)


# -- tau-level preconditions ------------------------------------------------------------

def test_genus2_requires_tau_headroom():
    shallow = Context(1, max_tau_level=4)
    with pytest.raises(TauLevelOverflow):
        b_diag(shallow, 1)
    with pytest.raises(TauLevelOverflow):
        a1_of(shallow, "tau2L0")
    with pytest.raises(TauLevelOverflow):
        f2(shallow, "assembled")
    with pytest.raises(TauLevelOverflow):
        l1_constraint_split(shallow)
    # the rotation route only needs level 3
    assert f2(shallow, "rotation").is_homogeneous_of(3)


def test_route_argument_validation(ctx1):
    with pytest.raises(ValueError):
        f2(ctx1, "direct")
    with pytest.raises(ValueError):
        prediction(ctx1, "idempotent")
    with pytest.raises(ValueError):
        a1_of(ctx1, "tau3L2")
