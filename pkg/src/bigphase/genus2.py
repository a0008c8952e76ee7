"""Genus-2 assembly: the B and A1 tensors, both routes to the genus-2
potential, the L1 constraint and its two predictions, and the split of the
constraint into A1- and B-tensor contributions.

Every quantity here has two independent construction paths somewhere in the
registry: the potential is assembled from genus-0/1 data and also written as
a direct closed form; the constraint prediction comes via the grading
operator and via rotation coefficients; the L1 action on the potential is
computed by the derivation engine and as a closed form; and the same value
is split into tensor contributions built from tau-pairing coefficients.
Agreement of all routes at concrete dimension is the point of the package.
"""

from __future__ import annotations

from .correlators import phi, z
from .derivation import (_idx, gstar_row, omega, pairing_string, theta,
                         v)
from .errors import TauLevelOverflow
from .expr import Context, Expression, QQ


def _inv_ss(ctx: Context, i: int, j: int) -> Expression:
    """1 / sqrt(g_i g_j)."""
    if i == j:
        return ctx.g(i, -1)
    return ctx.monomial({("s", i): -1, ("s", j): -1})


def _s_over_g(ctx: Context, a: int, b: int) -> Expression:
    """sqrt(g_a / g_b) / g_b = s_a / s_b**3."""
    if a == b:
        return ctx.g(a, -1)
    return ctx.monomial({("s", a): 1, ("s", b): -3})


def _require_tau(ctx: Context, needed: int, what: str) -> None:
    if ctx.max_tau_level < needed:
        raise TauLevelOverflow(
            f"{what} needs max_tau_level >= {needed}, "
            f"context has {ctx.max_tau_level}")


def _cached(ctx: Context, key, build) -> Expression:
    cache = ctx.cache("genus2")
    got = cache.get(key)
    if got is None:
        got = cache.setdefault(key, build())
    return got


# -- B tensor on a triple idempotent ------------------------------------------

def b_diag(ctx: Context, i: int) -> Expression:
    """B(E_i, E_i, E_i): the genus-0/1 combination from the genus-2
    equation of Belorousski-Pandharipande type, degree 4."""
    _require_tau(ctx, 5, "b_diag")
    return _cached(ctx, ("b_diag", i), lambda: _b_diag(ctx, i))


def _b_diag(ctx: Context, i: int) -> Expression:
    R = _idx(ctx)
    parts = []
    for j in R:
        for k in R:
            w = ctx.g(j, -1) * ctx.g(k, -1)
            parts.append(w * (
                QQ(1, 5) * z(ctx, i, i, i, j, k) * phi(ctx, j) * phi(ctx, k)
                - QQ(6, 5) * z(ctx, i, i, i, j) * phi(ctx, j, k) * phi(ctx, k)
                - QQ(6, 5) * z(ctx, i, i, j, k) * phi(ctx, j) * phi(ctx, i, k)))
            parts.append(w * (
                QQ(1, 120) * z(ctx, i, i, i, j, j, k) * phi(ctx, k)
                + QQ(1, 10) * z(ctx, i, i, i, j, k) * phi(ctx, j, k)
                - QQ(1, 20) * z(ctx, i, i, i, j) * phi(ctx, j, k, k)
                - QQ(3, 40) * z(ctx, i, i, j, j, k) * phi(ctx, i, k)
                + QQ(3, 40) * z(ctx, i, j, j, k) * phi(ctx, i, i, k)
                - QQ(3, 10) * z(ctx, i, i, j, k) * phi(ctx, i, j, k)))
    for j in R:
        sign = 1 - 2 * (i == j)
        parts.append(ctx.g(j, -1) * (
            QQ(9 * sign, 5) * phi(ctx, i, j) ** 2
            - QQ(6 * sign, 5) * phi(ctx, i, i, j) * phi(ctx, j)))
        parts.append(-(ctx.g(j, -1) * (
            QQ(1, 120) * phi(ctx, i, i, i, j)
            + QQ(sign, 20) * phi(ctx, i, i, j, j))))
    return ctx.sum(parts)


# -- A1 tensor ------------------------------------------------------------------

def a1_from_vectors(ctx: Context, w0, w1, w2) -> Expression:
    """A1 applied to a vector field given by its pairing coefficients.

    w0[i], w1[i], w2[i] are <tau_-^l W, E_i> for l = 0, 1, 2 (python lists
    indexed from 0).
    """
    R = _idx(ctx)
    parts = []
    for i in R:
        bracket0 = [ctx.g(i, -1) * (QQ(7, 10) * phi(ctx, i) ** 2
                                    + QQ(1, 10) * phi(ctx, i, i))]
        for j in R:
            bracket0.append(-(QQ(1, 240) * ctx.g(j, -1) * phi(ctx, i, j)))
            for k in R:
                w = ctx.g(j, -1) * ctx.g(k, -1)
                bracket0.append(w * (QQ(13, 240) * z(ctx, i, j, j, k)
                                     * phi(ctx, k)
                                     + QQ(1, 960) * z(ctx, i, j, j, k, k)))
        parts.append(w0[i - 1] * ctx.g(i, -1) * ctx.sum(bracket0))
        bracket1 = [QQ(1, 20) * ctx.g(i, -1) * phi(ctx, i)]
        for j in R:
            bracket1.append(QQ(1, 480) * ctx.g(i, -1) * ctx.g(j, -1)
                            * z(ctx, i, i, j, j))
            for k in R:
                bracket1.append(QQ(1, 1152) * ctx.g(j, -1) * ctx.g(k, -1)
                                * z(ctx, i, j, k, k))
        parts.append(w1[i - 1] * ctx.g(i, -1) * ctx.sum(bracket1))
        parts.append(QQ(1, 1152) * w2[i - 1] * ctx.g(i, -2))
    return ctx.sum(parts)


_A1_ARGS = {
    "tauS": ("S", 1),
    "tau2L0": (("L", 0), 2),
    "tau2L1": (("L", 1), 2),
}


def a1_of(ctx: Context, which: str) -> Expression:
    """A1 on tau_-(S), tau_-^2(L_0) or tau_-^2(L_1)."""
    try:
        field, base = _A1_ARGS[which]
    except KeyError:
        raise ValueError(f"unknown A1 argument {which!r}") from None
    _require_tau(ctx, 5, f"a1_of({which})")

    def build() -> Expression:
        from .derivation import pairing
        vecs = [[pairing(ctx, field, base + lvl, i) for i in _idx(ctx)]
                for lvl in (0, 1, 2)]
        return a1_from_vectors(ctx, *vecs)

    return _cached(ctx, ("a1", which), build)


# -- the genus-2 potential, two routes ------------------------------------------

def f2(ctx: Context, route: str = "rotation") -> Expression:
    """Genus-2 potential, degree 3.

    route="assembled": 1/2 A1(tau_-(S)) + 1/3 A1(tau_-^2(L_0))
                       - 1/6 sum_i u_i B(E_i,E_i,E_i), built from the
                       genus-0/1 correlator ladder.
    route="rotation":  the direct closed form in rotation-coefficient data
                       (t-levels 2 and 3 only, pole order at most 2).
    """
    if route == "assembled":
        _require_tau(ctx, 5, "f2(assembled)")
        return _cached(ctx, ("f2", "assembled"), lambda: (
            a1_of(ctx, "tauS") / 2 + a1_of(ctx, "tau2L0") / 3
            - ctx.sum(ctx.u(i) * b_diag(ctx, i) for i in _idx(ctx)) / 6))
    if route == "rotation":
        _require_tau(ctx, 3, "f2(rotation)")
        return _cached(ctx, ("f2", "rotation"), lambda: _f2_rotation(ctx))
    raise ValueError(f"unknown f2 route {route!r}")


def _f2_rotation(ctx: Context) -> Expression:
    R = _idx(ctx)
    parts = []
    for i in R:
        parts.append(-5 * ctx.t(3, i) * ctx.g(i, -2))
        for j in R:
            if j != i:
                parts.append(5 * omega(ctx, i, j)
                             * (_s_over_g(ctx, i, j)
                                - _inv_ss(ctx, i, j)))
    for i in R:
        bracket = [24 * ctx.r(i, i) * ctx.g(i, -1)]
        for j in R:
            bracket.append(5 * ctx.r(i, j)
                           * _s_over_g(ctx, i, j)
                           if j != i else
                           5 * ctx.r(i, i) * ctx.g(i, -1))
            bracket.append(144 * ctx.r(i, j) * v(ctx, i, j) * ctx.g(i, -1))
        parts.append(ctx.t(2, i) * ctx.g(i, -1) * ctx.sum(bracket))
    for i in R:
        for j in R:
            if j == i:
                continue
            sji3 = _s_over_g(ctx, j, i)
            bracket = [-24 * ctx.r(i, i) * sji3,
                       200 * ctx.r(i, j) * ctx.g(j, -1)]
            for k in R:
                bracket.append(ctx.r(i, k) * v(ctx, i, k)
                               * (120 * _inv_ss(ctx, i, j) - 144 * sji3))
                bracket.append(ctx.r(j, k) * v(ctx, i, k)
                               * (85 * ctx.g(i, -1) + 45 * ctx.g(j, -1)))
            parts.append(theta(ctx, i, j) * ctx.sum(bracket))
    for i in R:
        parts.append(-576 * ctx.r(i, i) ** 3 * ctx.g(i, -1))
        parts.append(-576 * ctx.g(i, -1)
                     * ctx.sum(ctx.r(i, j) * v(ctx, i, j) for j in R) ** 3)
        for j in R:
            parts.append(480 * ctx.r(i, j) ** 3 * _inv_ss(ctx, i, j)
                         - 23 * ctx.r(i, i) * ctx.r(i, j) ** 2 * ctx.g(i, -1)
                         - 1728 * ctx.r(i, i) ** 2 * ctx.r(i, j)
                         * v(ctx, i, j) * ctx.g(i, -1))
            for k in R:
                parts.append(
                    -24 * ctx.r(i, i) * ctx.r(i, k) * ctx.r(j, k)
                    * _s_over_g(ctx, j, i)
                    + 115 * ctx.r(i, j) * ctx.r(i, k) * ctx.r(j, k)
                    * ctx.g(i, -1)
                    + 1452 * ctx.r(i, k) ** 2 * ctx.r(i, j) * v(ctx, i, j)
                    * ctx.g(i, -1)
                    - 1728 * ctx.r(i, i) * ctx.r(i, j) * v(ctx, i, j)
                    * ctx.r(i, k) * v(ctx, i, k) * ctx.g(i, -1))
                for l in R:
                    parts.append(
                        120 * ctx.r(i, k) * ctx.r(j, k) * ctx.r(i, l)
                        * v(ctx, i, l) * _inv_ss(ctx, i, j)
                        - 144 * ctx.r(i, j) * ctx.r(i, l) * ctx.r(j, k)
                        * v(ctx, j, k) * _s_over_g(ctx, l, j)
                        - 40 * ctx.r(i, k) * ctx.r(j, k) * ctx.r(i, l)
                        * v(ctx, j, l) * ctx.g(i, -1)
                        + 720 * ctx.r(i, j) * ctx.r(i, k) * v(ctx, i, k)
                        * ctx.r(j, l) * v(ctx, j, l) * _inv_ss(ctx, i, j))
    return ctx.sum(parts) / 5760


# -- L1 of the potential, closed form --------------------------------------------

def l1_f2_closed(ctx: Context) -> Expression:
    """Closed form of the L_1 action on the genus-2 potential, degree 2.

    Contains t-level 2 only and no pole of order above 1.
    """
    return _cached(ctx, ("l1f2",), lambda: _l1_f2_closed(ctx))


def _l1_f2_closed(ctx: Context) -> Expression:
    R = _idx(ctx)
    parts = []
    for i in R:
        parts.append(ctx.t(2, i) * ctx.g(i, -2)
                     * (6 + 24 * ctx.sum(v(ctx, i, j) ** 2 for j in R)))
        for j in R:
            if j == i:
                continue
            sij3 = _s_over_g(ctx, i, j)
            parts.append(theta(ctx, i, j) * (
                6 * sij3
                + 48 * ctx.g(i, -1) * ctx.sum(v(ctx, i, k) * v(ctx, j, k)
                                              for k in R)
                + 24 * _inv_ss(ctx, i, j) * ctx.sum(v(ctx, i, k) ** 2
                                                    for k in R)
                + 24 * sij3 * ctx.sum(v(ctx, j, k) ** 2 for k in R)))
    for i in R:
        parts.append(-72 * ctx.r(i, i) ** 2 * ctx.g(i, -1))
        for j in R:
            parts.append(57 * ctx.r(i, j) ** 2 * ctx.g(i, -1)
                         - 144 * ctx.r(i, i) * ctx.r(i, j) * v(ctx, i, j)
                         * ctx.g(i, -1))
            for k in R:
                parts.append(
                    QQ(11, 4) * ctx.r(i, j) * ctx.r(i, k) * _inv_ss(ctx, j, k)
                    + 66 * ctx.r(i, j) * ctx.r(i, k) * v(ctx, i, k)
                    * _inv_ss(ctx, i, j)
                    - 36 * ctx.r(i, j) * v(ctx, i, j) * ctx.r(i, k)
                    * v(ctx, i, k) * ctx.g(i, -1)
                    - 288 * ctx.r(j, k) ** 2 * v(ctx, i, j) * v(ctx, i, k)
                    * _inv_ss(ctx, j, k)
                    + 240 * ctx.r(j, k) ** 2 * v(ctx, i, j) ** 2
                    * ctx.g(j, -1))
                for l in R:
                    parts.append(
                        -24 * ctx.r(j, l) * ctx.r(k, l) * v(ctx, i, j)
                        * v(ctx, i, k) * ctx.g(l, -1)
                        + 24 * ctx.r(j, k) * ctx.r(k, l) * v(ctx, i, j) ** 2
                        * _inv_ss(ctx, j, l)
                        - 576 * ctx.r(j, k) * ctx.r(k, l) * v(ctx, k, l)
                        * v(ctx, i, j) * v(ctx, i, k) * ctx.g(k, -1)
                        + 288 * ctx.r(j, k) * ctx.r(k, l) * v(ctx, k, l)
                        * v(ctx, i, j) ** 2 * _inv_ss(ctx, j, k))
                    for p in R:
                        parts.append(
                            -(ctx.r(j, p) * ctx.r(k, l) * v(ctx, i, j)
                              * v(ctx, i, k) * _inv_ss(ctx, l, p))
                            - 24 * ctx.r(j, p) * ctx.r(k, l) * v(ctx, k, l)
                            * v(ctx, i, j) * v(ctx, i, k) * _inv_ss(ctx, k, p)
                            - 144 * ctx.r(j, p) * v(ctx, j, p) * ctx.r(k, l)
                            * v(ctx, k, l) * v(ctx, i, j) * v(ctx, i, k)
                            * _inv_ss(ctx, j, k))
    return ctx.sum(parts) / 1152


# -- the constraint prediction, two routes ----------------------------------------

def prediction(ctx: Context, route: str = "rotation") -> Expression:
    """Right-hand side the genus-2 L_1 constraint must equal, degree 2.

    route="gstar":    expand the genus-1 pair over the grading operator rows.
    route="rotation": the same after the antisymmetric part is dropped.
    """
    if route not in ("rotation", "gstar"):
        raise ValueError(f"unknown prediction route {route!r}")
    return _cached(ctx, ("prediction", route),
                   lambda: _prediction(ctx, route))


def _prediction(ctx: Context, route: str) -> Expression:
    R = _idx(ctx)
    parts = []
    if route == "gstar":
        for i in R:
            row = gstar_row(ctx, i)
            pair = ctx.sum(row[a - 1] * row[b - 1] * phi(ctx, a, b)
                           for a in R for b in R)
            single = ctx.sum(row[a - 1] * phi(ctx, a) for a in R)
            parts.append(ctx.g(i, -1) * (pair + single ** 2))
    else:
        for i in R:
            bracket = [QQ(1, 4) * (phi(ctx, i, i) + phi(ctx, i) ** 2)]
            for j in R:
                for k in R:
                    bracket.append(v(ctx, i, j) * v(ctx, i, k) * ctx.g(i)
                                   * _inv_ss(ctx, j, k)
                                   * (phi(ctx, j, k)
                                      + phi(ctx, j) * phi(ctx, k)))
            parts.append(ctx.g(i, -1) * ctx.sum(bracket))
    return ctx.sum(parts) / -2


# -- split of the constraint into A1- and B-contributions ---------------------------

def c_coeff(ctx: Context, i: int, j: int, k: int) -> Expression:
    """Tau-pairing coefficient c_{ij;k} entering the A1 contribution."""
    cache = ctx.cache("c_coeff")
    got = cache.get((i, j, k))
    if got is not None:
        return got
    R = _idx(ctx)
    ts = lambda lvl, a: pairing_string(ctx, lvl, a)
    ui, uj = ctx.u(i), ctx.u(j)
    out = (2 * ui * uj * ts(k, i) * ctx.g(i, -1)
           - ((k + 2) * ui + 2 * (1 - k) * uj) * ts(k - 1, i) * ctx.g(i, -1)
           + ctx.sum((ctx.u(p) - 2 * uj) * (ui - ctx.u(p)) * ctx.r(i, p)
                     * _inv_ss(ctx, i, p) * ts(k - 1, p) for p in R)
           + QQ(1 - 4 * k * k, 4) * ts(k - 2, i) * ctx.g(i, -1)
           + 2 * k * ctx.sum((ui - ctx.u(p)) * ctx.r(i, p)
                             * _inv_ss(ctx, i, p) * ts(k - 2, p) for p in R)
           - ctx.sum((ui - ctx.u(p)) * (ctx.u(p) - ctx.u(q)) * ctx.r(i, p)
                     * ctx.r(p, q) * _inv_ss(ctx, i, q) * ts(k - 2, q)
                     for p in R for q in R))
    return cache.setdefault((i, j, k), out)


def d_coeff(ctx: Context, i: int, k: int) -> Expression:
    """Tau-pairing coefficient d_{i;k} entering the A1 contribution."""
    cache = ctx.cache("d_coeff")
    got = cache.get((i, k))
    if got is not None:
        return got
    ts = lambda lvl, a: pairing_string(ctx, lvl, a)
    out = (-(ctx.u(i) * ts(k, i) * ctx.g(i, -1))
           + (1 - k) * ts(k - 1, i) * ctx.g(i, -1)
           - ctx.sum((ctx.u(p) - ctx.u(i)) * ctx.r(i, p) * _inv_ss(ctx, i, p)
                     * ts(k - 1, p) for p in _idx(ctx)))
    return cache.setdefault((i, k), out)


def l1_constraint_split(ctx: Context) -> tuple[Expression, Expression]:
    """The constraint value as (A1 contribution, B contribution).

    Their sum equals the L_1 action on the genus-2 potential; individually
    both contain t-levels 3 and 4, which cancel in the sum.
    """
    _require_tau(ctx, 5, "l1_constraint_split")
    part_a = _cached(ctx, ("split", "a"), lambda: _split_a1(ctx))
    part_b = _cached(ctx, ("split", "b"), lambda: _split_b(ctx) / 2)
    return part_a, part_b


def _split_a1(ctx: Context) -> Expression:
    R = _idx(ctx)
    u, gi = ctx.u, lambda a: ctx.g(a, -1)
    parts = []
    for i in R:
        parts.append(QQ(7, 10) * gi(i) * c_coeff(ctx, i, i, 2)
                     * phi(ctx, i) ** 2)
        parts.append(QQ(1, 10) * gi(i) * c_coeff(ctx, i, i, 2)
                     * phi(ctx, i, i))
        for j in R:
            parts.append(-(QQ(1, 240) * gi(j) * c_coeff(ctx, i, j, 2)
                           * phi(ctx, i, j)))
    for i in R:
        bracket = [QQ(1, 20) * gi(i) * c_coeff(ctx, i, i, 3)]
        for j in R:
            for k in R:
                bracket.append(QQ(13, 240) * gi(i) * gi(j)
                               * c_coeff(ctx, k, i, 2) * z(ctx, i, j, j, k))
                bracket.append(-(QQ(7, 120) * u(j) * gi(i) * gi(k)
                                 * d_coeff(ctx, i, 2) * z(ctx, i, j, k, k)))
                bracket.append(-(QQ(1, 10) * u(j) * gi(i) * gi(k)
                                 * d_coeff(ctx, k, 2) * z(ctx, i, j, k, k)))
                for p in R:
                    bracket.append(-(QQ(1, 20) * u(p) * gi(i) * gi(j)
                                     * d_coeff(ctx, k, 2)
                                     * z(ctx, i, j, k, p)))
        parts.append(phi(ctx, i) * ctx.sum(bracket))
    for i in R:
        parts.append(QQ(1, 1152) * gi(i) * c_coeff(ctx, i, i, 4))
        for j in R:
            parts.append(QQ(1, 480) * gi(i) * gi(j) * c_coeff(ctx, i, i, 3)
                         * z(ctx, i, i, j, j))
            for k in R:
                parts.append(QQ(1, 1152) * gi(j) * gi(k)
                             * c_coeff(ctx, i, j, 3) * z(ctx, i, j, k, k))
                parts.append(QQ(1, 960) * gi(j) * gi(k)
                             * c_coeff(ctx, i, j, 2) * z(ctx, i, j, j, k, k))
    for i in R:
        bracket3 = []
        bracket2 = []
        for j in R:
            for k in R:
                bracket3.append(QQ(1, 480)
                                * (u(j) * gi(i) * gi(k) * z(ctx, i, j, k, k)
                                   + u(k) * gi(i) * gi(j)
                                   * z(ctx, i, i, j, k)))
                bracket2.append(QQ(1, 240) * u(j) * gi(i) * gi(k)
                                * z(ctx, i, i, j, k, k))
                for p in R:
                    bracket3.append(QQ(1, 1152) * u(p) * gi(j) * gi(k)
                                    * z(ctx, i, j, k, p))
                    bracket2.append(QQ(1, 1152) * u(p) * gi(j) * gi(k)
                                    * z(ctx, i, j, k, k, p))
                    for q in R:
                        bracket2.append(
                            QQ(1, 480) * u(p) * gi(j) * gi(k) * gi(q)
                            * (QQ(19, 12) * z(ctx, i, j, j, k)
                               * z(ctx, k, p, q, q)
                               + z(ctx, i, j, p, q) * z(ctx, j, k, k, q)))
        parts.append(-(d_coeff(ctx, i, 3) * ctx.sum(bracket3)))
        parts.append(-(d_coeff(ctx, i, 2) * ctx.sum(bracket2)))
    return ctx.sum(parts)


def _split_b(ctx: Context) -> Expression:
    """Twice the B-tensor contribution to the constraint."""
    R = _idx(ctx)
    u, gi = ctx.u, lambda a: ctx.g(a, -1)
    parts = []
    for i in R:
        for j in R:
            for k in R:
                parts.append(QQ(1, 240) * u(i) * u(j) * gi(j) * gi(k)
                             * z(ctx, i, j, j, j, j, k, k))
                for p in R:
                    parts.append(u(i) * u(p) * gi(j) * gi(k)
                                 * (-(QQ(1, 480)
                                      * z(ctx, i, i, j, j, k, k, p))
                                    - QQ(1, 2880)
                                    * z(ctx, i, i, i, j, k, k, p)))
                    for q in R:
                        parts.append(
                            u(i) * u(p) * gi(j) * gi(k) * gi(q)
                            * (QQ(1, 2880) * z(ctx, i, i, i, j, j, k)
                               * z(ctx, k, p, q, q)
                               - QQ(1, 480) * z(ctx, i, i, i, j)
                               * z(ctx, j, k, k, p, q, q)
                               + QQ(1, 320) * z(ctx, i, j, j, k)
                               * z(ctx, i, i, k, p, q, q)
                               - QQ(1, 80) * z(ctx, i, i, j, k)
                               * z(ctx, i, j, k, p, q, q)
                               + QQ(1, 240) * z(ctx, i, i, i, j, k)
                               * z(ctx, j, k, p, q, q)
                               - QQ(1, 320) * z(ctx, i, i, j, j, k)
                               * z(ctx, i, k, p, q, q)))
    for i in R:
        bracket = []
        for j in R:
            for k in R:
                bracket.append(
                    QQ(1, 10) * u(i) * u(j) * gi(i) * gi(k)
                    * z(ctx, i, i, i, j, k, k)
                    + QQ(1, 10) * u(j) * u(k) * gi(i) * gi(k)
                    * z(ctx, i, j, k, k, k, k)
                    + QQ(1, 120) * u(k) * (2 * u(i) + 2 * u(j) - 3 * u(k))
                    * gi(i) * gi(j) * z(ctx, i, j, j, k, k, k))
                for p in R:
                    bracket.append(-(u(k) * u(p) * gi(i) * gi(j)
                                     * (QQ(11, 120)
                                        * z(ctx, i, j, j, k, k, p)
                                        + QQ(1, 120)
                                        * z(ctx, i, j, k, k, k, p))))
                    for q in R:
                        bracket.append(
                            u(p) * u(q) * gi(i) * gi(j) * gi(k)
                            * (QQ(1, 40) * z(ctx, i, j, q, q, q)
                               * z(ctx, j, k, k, p)
                               - QQ(11, 120) * z(ctx, i, j, k, k, p)
                               * z(ctx, j, q, q, q)
                               - QQ(1, 24) * z(ctx, i, k, q, q)
                               * z(ctx, j, j, k, p, q)
                               + QQ(7, 60) * z(ctx, i, j, k, p)
                               * z(ctx, j, k, q, q, q)
                               + QQ(1, 60) * z(ctx, i, j, k, q, q)
                               * z(ctx, j, k, p, q)
                               - QQ(1, 15) * z(ctx, i, k, p, q)
                               * z(ctx, j, j, k, q, q)
                               - QQ(17, 60) * z(ctx, i, j, k, p, q)
                               * z(ctx, j, k, q, q)
                               + QQ(3, 40) * z(ctx, i, k, p, q, q)
                               * z(ctx, j, j, k, q)))
        parts.append(phi(ctx, i) * ctx.sum(bracket))
    for i in R:
        parts.append(-(phi(ctx, i, i) * ctx.sum(
            QQ(3, 10) * u(i) * u(j) * gi(i) * gi(k) * z(ctx, i, i, j, k, k)
            for j in R for k in R)))
    for i in R:
        for j in R:
            bracket = []
            for k in R:
                bracket.append(
                    QQ(2, 5) * u(i) * u(k) * gi(i) * gi(j)
                    * z(ctx, i, i, i, j, k)
                    + QQ(1, 10) * u(k) * (2 * u(i) + 2 * u(j) - 3 * u(k))
                    * gi(i) * gi(j) * z(ctx, i, j, k, k, k)
                    - QQ(3, 40) * u(i) * (2 * u(j) + 2 * u(k) - 3 * u(i))
                    * gi(j) * gi(k) * z(ctx, i, i, j, k, k))
                for p in R:
                    bracket.append(
                        -(QQ(1, 40) * u(i) * u(p) * gi(j) * gi(k)
                          * (z(ctx, i, j, k, k, p) + z(ctx, i, i, j, k, p)))
                        - QQ(1, 120) * u(k) * u(p) * gi(i) * gi(j)
                        * z(ctx, i, k, k, k, p))
                    for q in R:
                        bracket.append(
                            QQ(1, 40) * u(p) * u(q) * gi(i) * gi(j) * gi(k)
                            * (-4 * z(ctx, i, k, k, p) * z(ctx, j, q, q, q)
                               - 16 * z(ctx, i, k, p, q) * z(ctx, j, k, q, q)
                               + 3 * z(ctx, i, p, q, q) * z(ctx, j, k, k, q))
                            + QQ(1, 40) * u(i) * u(p) * gi(j) * gi(k) * gi(q)
                            * (-5 * z(ctx, i, i, j, k) * z(ctx, k, p, q, q)
                               - 18 * z(ctx, i, i, k, q) * z(ctx, j, k, p, q)
                               + 6 * z(ctx, i, k, q, q) * z(ctx, i, j, k, p)))
            parts.append(phi(ctx, i, j) * ctx.sum(bracket))
    for i in R:
        parts.append(phi(ctx, i, i, i) * ctx.sum(
            QQ(1, 10) * u(i) * u(j) * gi(i) * gi(k) * z(ctx, i, j, k, k)
            for j in R for k in R))
    for i in R:
        for j in R:
            bracket = []
            for k in R:
                bracket.append(
                    QQ(3, 5) * u(i) * u(k) * gi(i) * gi(j) * z(ctx, i, i, j, k)
                    - QQ(1, 20) * u(k) * (2 * u(i) + 2 * u(j) - 3 * u(k))
                    * gi(i) * gi(j) * z(ctx, j, k, k, k)
                    + QQ(3, 40) * u(i) * (2 * u(j) - u(i)) * gi(j) * gi(k)
                    * z(ctx, i, j, k, k))
                for p in R:
                    bracket.append(
                        -(QQ(1, 10) * (u(i) * u(p) * gi(j) * gi(k)
                                       + u(k) * u(p) * gi(i) * gi(j))
                          * z(ctx, j, k, k, p))
                        + QQ(1, 20) * u(i) * u(p) * gi(j) * gi(k)
                        * z(ctx, i, j, k, p))
            parts.append(phi(ctx, i, i, j) * ctx.sum(bracket))
    for i in R:
        for j in R:
            for k in R:
                bracket = [-(QQ(3, 10) * u(i)
                             * (2 * u(j) + 2 * u(k) - 3 * u(i))
                             * gi(j) * gi(k) * z(ctx, i, i, j, k))]
                for p in R:
                    bracket.append(-(u(i) * u(p) * gi(j) * gi(k)
                                     * (QQ(1, 40) * z(ctx, i, i, k, p)
                                        + QQ(1, 2) * z(ctx, i, j, k, p))))
                parts.append(phi(ctx, i, j, k) * ctx.sum(bracket))
    for i in R:
        parts.append(QQ(1, 10) * phi(ctx, i, i, i, i) * u(i) ** 2 * gi(i))
        for j in R:
            parts.append(-((QQ(1, 120) * phi(ctx, i, i, i, j)
                            + QQ(1, 20) * phi(ctx, i, i, j, j))
                           * u(i) * (2 * u(j) - u(i)) * gi(j)))
    for i in R:
        for j in R:
            bracket = []
            for k in R:
                bracket.append(
                    QQ(12, 5) * u(i) * u(k) * gi(i) * gi(j)
                    * z(ctx, i, i, i, j, k)
                    + QQ(1, 5) * u(k) * (2 * u(i) + 2 * u(j) - 3 * u(k))
                    * gi(i) * gi(j) * z(ctx, i, j, k, k, k))
                for p in R:
                    bracket.append(-(u(k) * u(p) * gi(i) * gi(j)
                                     * z(ctx, i, j, k, k, p)))
                    for q in R:
                        bracket.append(-(u(p) * u(q) * gi(i) * gi(j) * gi(k)
                                         * (QQ(4, 5) * z(ctx, i, k, p, q)
                                            * z(ctx, j, k, q, q)
                                            + z(ctx, i, j, k, p)
                                            * z(ctx, k, q, q, q))))
            parts.append(phi(ctx, i) * phi(ctx, j) * ctx.sum(bracket))
    for i in R:
        for j in R:
            parts.append(-(phi(ctx, i) * phi(ctx, j, j) * ctx.sum(
                QQ(36, 5) * u(j) * u(k) * gi(i) * gi(j) * z(ctx, i, j, j, k)
                for k in R)))
            bracket = []
            for k in R:
                bracket.append(
                    QQ(36, 5) * u(i) * u(k) * gi(i) * gi(j)
                    * z(ctx, i, i, j, k)
                    - QQ(6, 5) * u(k) * (2 * u(i) + 2 * u(j) - 3 * u(k))
                    * gi(i) * gi(j) * z(ctx, j, k, k, k))
                for p in R:
                    bracket.append(-(QQ(12, 5) * u(k) * u(p) * gi(i) * gi(j)
                                     * z(ctx, j, k, k, p)))
            parts.append(phi(ctx, i) * phi(ctx, i, j) * ctx.sum(bracket))
            for k in R:
                parts.append(-(phi(ctx, i) * phi(ctx, j, k) * QQ(6, 5)
                               * u(j) * (2 * u(i) + 2 * u(k) - 3 * u(j))
                               * gi(i) * gi(k) * z(ctx, i, j, j, k)))
    for i in R:
        parts.append(QQ(12, 5) * phi(ctx, i) * phi(ctx, i, i, i)
                     * u(i) ** 2 * gi(i))
        parts.append(-(QQ(18, 5) * phi(ctx, i, i) ** 2 * u(i) ** 2 * gi(i)))
        for j in R:
            parts.append(-(QQ(6, 5) * phi(ctx, i) * phi(ctx, i, j, j)
                           * u(j) * (2 * u(i) - u(j)) * gi(i)))
            parts.append(QQ(9, 5) * phi(ctx, i, j) ** 2
                         * u(i) * (2 * u(j) - u(i)) * gi(j))
    return ctx.sum(parts)
