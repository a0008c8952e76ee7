"""Genus-0 and genus-1 correlation functions of idempotent insertions.

z(i_1..i_k)   genus-0 k-point function, 4 <= k <= 7, degree k - 3
phi(i_1..i_k) genus-1 k-point function, 1 <= k <= 4, degree k

Base cases are closed forms (the 4-point z table and the 1-point phi); higher
arities are raised one index at a time: the (k+1)-point function is the
derivative of the k-point function along the appended idempotent minus the
connection corrections.  The raising step always appends the LAST index of
the requested tuple, and results are cached on the exact tuple — permutation
symmetry is a verified theorem here, never an assumption.

t_euler_on_correlator computes the action of T(Euler-bar) on a correlator by
the closed combinatorial formula (contraction sums over index subsets); path
equality with the derivation-rule route t_euler(correlator(...)) is one of
the registry identities.
"""

from __future__ import annotations

from itertools import combinations

from .derivation import _idx, _s_ratio, _ss, derive, theta, v
from .errors import ArityUnsupported
from .expr import Context, Expression, QQ

Z_ARITY = (4, 7)
PHI_ARITY = (1, 4)


def _z4(ctx: Context, idx: tuple[int, ...]) -> Expression:
    """4-point genus-0 table: -g_i r_ii / +-sqrt(g_i g_j) r_ij / 0."""
    counts: dict[int, int] = {}
    for i in idx:
        counts[i] = counts.get(i, 0) + 1
    if len(counts) == 1:
        i = idx[0]
        return -(ctx.g(i) * ctx.r(i, i))
    if len(counts) == 2:
        (a, ca), (b, cb) = sorted(counts.items())
        if {ca, cb} == {1, 3}:
            return -(_ss(ctx, a, b) * ctx.r(a, b))
        return _ss(ctx, a, b) * ctx.r(a, b)  # 2+2 pattern
    return ctx.zero()


def _phi1(ctx: Context, i: int) -> Expression:
    return (-12 * ctx.sum(ctx.r(i, j) * v(ctx, i, j) for j in _idx(ctx))
            - ctx.sum(_s_ratio(ctx, i, j) * ctx.r(i, j)
                      for j in _idx(ctx))) / 24


def _raise_once(ctx: Context, genus: int, head: tuple[int, ...],
                c: int) -> Expression:
    """One raising step: append idempotent c to the head tuple."""
    base = correlator(ctx, genus, head)
    parts = [derive(c, base)]
    for pos, a in enumerate(head):
        parts.append(-(ctx.r(a, c) * _s_ratio(ctx, c, a)) * base)
        swapped = head[:pos] + (c,) + head[pos + 1:]
        parts.append(-(ctx.r(a, c) * _s_ratio(ctx, a, c))
                     * correlator(ctx, genus, swapped))
        if a == c:
            parts.append(ctx.sum(
                ctx.r(p, c) * _s_ratio(ctx, c, p)
                * correlator(ctx, genus, head[:pos] + (p,) + head[pos + 1:])
                for p in _idx(ctx)))
    return ctx.sum(parts)


def _check_arity(genus: int, k: int) -> None:
    if genus == 0:
        lo, hi = Z_ARITY
    elif genus == 1:
        lo, hi = PHI_ARITY
    else:
        raise ArityUnsupported(f"genus {genus} correlators not supported")
    if not lo <= k <= hi:
        raise ArityUnsupported(
            f"genus-{genus} correlator arity {k} outside {lo}..{hi}")


def correlator(ctx: Context, genus: int, indices) -> Expression:
    """Exact genus-0/1 correlator of the given idempotent insertions."""
    idx = tuple(indices)
    _check_arity(genus, len(idx))
    for i in idx:
        if not 1 <= i <= ctx.n:
            raise ValueError(f"idempotent index {i} out of range 1..{ctx.n}")
    cache = ctx.cache("corr")
    got = cache.get((genus, idx))
    if got is not None:
        return got
    if genus == 0 and len(idx) == 4:
        out = _z4(ctx, idx)
    elif genus == 1 and len(idx) == 1:
        out = _phi1(ctx, idx[0])
    else:
        out = _raise_once(ctx, genus, idx[:-1], idx[-1])
    return cache.setdefault((genus, idx), out)


def z(ctx: Context, *indices: int) -> Expression:
    return correlator(ctx, 0, indices)


def phi(ctx: Context, *indices: int) -> Expression:
    return correlator(ctx, 1, indices)


def phi_closed(ctx: Context, indices) -> Expression:
    """Closed forms for the 1- and 2-point genus-1 functions.

    Independent of the raising recursion; agreement with correlator(1, ...)
    is a registry identity.
    """
    idx = tuple(indices)
    if len(idx) == 1:
        return _phi1(ctx, idx[0])
    if len(idx) != 2:
        raise ArityUnsupported("closed genus-1 forms exist for arity 1 and 2")
    i, j = idx
    R = _idx(ctx)
    if i == j:
        out = (12 * ctx.r(i, i) ** 2 - ctx.t(2, i) * ctx.g(i, -1)
               + ctx.sum(ctx.r(i, k) ** 2 * (ctx.g(i) * ctx.g(k, -1) - 10)
                         + 24 * ctx.r(i, i) * ctx.r(i, k) * v(ctx, i, k)
                         for k in R)
               - ctx.sum(12 * ctx.r(i, k) * ctx.r(k, l) * v(ctx, k, l)
                         * _s_ratio(ctx, i, k)
                         + ctx.r(i, k) * ctx.r(k, l) * _s_ratio(ctx, i, l)
                         for k in R for l in R)
               - ctx.sum(theta(ctx, i, k) * _s_ratio(ctx, i, k)
                         + theta(ctx, k, i) * _s_ratio(ctx, k, i)
                         for k in R if k != i))
    else:
        out = (12 * ctx.r(i, j) ** 2
               + ctx.sum(ctx.r(i, k) * ctx.r(j, k) * _ss(ctx, i, j)
                         * ctx.g(k, -1)
                         + 12 * ctx.r(i, j) * ctx.r(i, k) * v(ctx, i, k)
                         * _s_ratio(ctx, j, i)
                         + 12 * ctx.r(i, j) * ctx.r(j, k) * v(ctx, j, k)
                         * _s_ratio(ctx, i, j)
                         for k in R)
               - theta(ctx, i, j) * _s_ratio(ctx, j, i)
               - theta(ctx, j, i) * _s_ratio(ctx, i, j))
    return out / 24


def t_euler_on_correlator(ctx: Context, genus: int, indices) -> Expression:
    """T(Euler-bar) acting on a correlator via the combinatorial formula.

    Genus 0: contraction over subsets of the first k of k+2 indices, plus a
    coincidence term for the last pair and the -(u+u) z term.  Genus 1:
    contraction over subsets of all indices plus the 1/24 genus-0 tail.
    Must equal t_euler(correlator(genus, indices)).
    """
    idx = tuple(indices)
    _check_arity(genus, len(idx))
    R = _idx(ctx)
    parts: list[Expression] = []
    if genus == 0:
        k = len(idx) - 2
        tail = idx[k:]
        if tail[0] == tail[1]:
            parts.append(ctx.sum(ctx.u(p) * z(ctx, p, *idx[:k + 1])
                                 for p in R))
        parts.append(-((ctx.u(tail[0]) + ctx.u(tail[1])) * z(ctx, *idx)))
        for m in range(2, k):
            for subset in combinations(range(k), m):
                chosen = tuple(idx[p] for p in subset)
                rest = tuple(idx[p] for p in range(len(idx))
                             if p not in subset)
                parts.append(ctx.sum(
                    ctx.u(p) * ctx.g(q, -1)
                    * z(ctx, p, *chosen, q) * z(ctx, q, *rest)
                    for p in R for q in R))
    else:
        k = len(idx)
        parts.append(QQ(1, 24) * ctx.sum(
            ctx.u(p) * ctx.g(q, -1) * z(ctx, p, *idx, q, q)
            for p in R for q in R))
        for m in range(2, k + 1):
            for subset in combinations(range(k), m):
                chosen = tuple(idx[p] for p in subset)
                rest = tuple(idx[p] for p in range(k) if p not in subset)
                parts.append(ctx.sum(
                    ctx.u(p) * ctx.g(q, -1)
                    * z(ctx, p, *chosen, q) * phi(ctx, q, *rest)
                    for p in R for q in R))
    return ctx.sum(parts)
