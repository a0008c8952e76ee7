"""Exact arithmetic kernel for the generator algebra.

Every scalar quantity of the calculus lives in the ring

    Q[u_1..u_n, s_1^{+-1}..s_n^{+-1}, r_ij (i<=j), t_{k,i} (2<=k<=cap)]

localized at the pairwise differences u_i - u_j.  Expressions are stored as a
sparse polynomial numerator over a restricted denominator: a product of
factors Delta_ij = u_i - u_j (i < j) with positive multiplicities.  This is
the only denominator class the calculus ever produces, so no general
multivariate gcd is needed; normalization is trial division of the numerator
by each denominator factor.

Representation:

    Mono  = dense tuple of integer exponents, one slot per generator
    Poly  = dict {Mono: coefficient}, no zero coefficients stored
    Den   = tuple of ((i, j), mult) with i < j, sorted, mult >= 1

Coefficients are exact rationals (gmpy2.mpq when available, else Fraction).
Generator symbols are addressed by small tuples:

    ("u", i)     canonical coordinate, degree -1
    ("s", i)     sqrt of the metric coefficient g_i = s_i**2, degree 0;
                 the only generator allowed negative exponents
    ("r", i, j)  rotation coefficient, stored with i <= j, degree 1
    ("t", k, i)  level-k string pairing, k >= 2, degree k

Expressions are immutable values; all operations are pure, so they are safe
to share between threads.
"""

from __future__ import annotations

import random
import threading
from typing import Iterable, Mapping

from .errors import MissingAssignment, PoleHit, TauLevelOverflow

try:
    from gmpy2 import mpq as QQ
except ImportError:  # pragma: no cover - gmpy2 present in normal installs
    from fractions import Fraction as QQ

Q0 = QQ(0)
Q1 = QQ(1)

Symbol = tuple
Mono = tuple
Poly = dict
Den = tuple

#: degree(0) — homogeneous of every degree at once
ANY_DEGREE = "any"
#: terms of differing degree
NON_HOMOGENEOUS = "non-homogeneous"


def _as_coeff(value) -> QQ:
    if isinstance(value, QQ):
        return value
    return QQ(value)


class Context:
    """Fixed generator universe: dimension n and the t-level cap.

    All expressions built under a context share its generator table; mixing
    contexts in one operation is a usage error and raises ValueError.
    """

    def __init__(self, n: int, max_tau_level: int = 6):
        if not 1 <= n <= 4:
            raise ValueError(f"dimension n={n} unsupported (need 1 <= n <= 4)")
        if max_tau_level < 2:
            raise ValueError("max_tau_level must be >= 2")
        self.n = n
        self.max_tau_level = max_tau_level

        symbols: list[Symbol] = []
        symbols += [("u", i) for i in range(1, n + 1)]
        symbols += [("s", i) for i in range(1, n + 1)]
        symbols += [("r", i, j) for i in range(1, n + 1) for j in range(i, n + 1)]
        symbols += [("t", k, i) for k in range(2, max_tau_level + 1)
                    for i in range(1, n + 1)]
        self.symbols: tuple[Symbol, ...] = tuple(symbols)
        self._index: dict[Symbol, int] = {s: g for g, s in enumerate(symbols)}
        self.num_gens = len(symbols)
        self._zero_mono: Mono = (0,) * self.num_gens

        def gdeg(sym: Symbol) -> int:
            kind = sym[0]
            if kind == "u":
                return -1
            if kind == "s":
                return 0
            if kind == "r":
                return 1
            return sym[1]  # t-level k

        self.gen_degrees: tuple[int, ...] = tuple(gdeg(s) for s in symbols)
        self._u_gid: tuple[int, ...] = tuple(self._index[("u", i)]
                                             for i in range(1, n + 1))
        # shared caches (filled by the derivation/correlator layers); guarded
        # by cache_lock only for compound fills, plain dict ops are atomic
        self.cache_lock = threading.Lock()
        self.caches: dict[str, dict] = {}

    # -- symbol lookup ----------------------------------------------------

    def gid(self, sym: Symbol) -> int:
        kind = sym[0]
        if kind == "r" and sym[1] > sym[2]:
            sym = ("r", sym[2], sym[1])
        g = self._index.get(sym)
        if g is None:
            if kind == "t" and sym[1] > self.max_tau_level:
                raise TauLevelOverflow(
                    f"t-level {sym[1]} exceeds cap {self.max_tau_level}")
            raise ValueError(f"unknown generator {sym!r} for n={self.n}")
        return g

    def cache(self, name: str) -> dict:
        try:
            return self.caches[name]
        except KeyError:
            with self.cache_lock:
                return self.caches.setdefault(name, {})

    # -- expression constructors ------------------------------------------

    def zero(self) -> "Expression":
        return Expression(self, {}, ())

    def const(self, value) -> "Expression":
        c = _as_coeff(value)
        if not c:
            return self.zero()
        return Expression(self, {self._zero_mono: c}, ())

    def one(self) -> "Expression":
        return self.const(1)

    def rational(self, p, q=1) -> "Expression":
        return self.const(QQ(p, q))

    def monomial(self, powers: Mapping[Symbol, int], coeff=1) -> "Expression":
        c = _as_coeff(coeff)
        if not c:
            return self.zero()
        m = [0] * self.num_gens
        for sym, e in powers.items():
            if e == 0:
                continue
            if e < 0 and sym[0] != "s":
                raise ValueError(f"negative exponent on non-invertible {sym!r}")
            m[self.gid(sym)] += e
        return Expression(self, {tuple(m): c}, ())

    def u(self, i: int) -> "Expression":
        return self.monomial({("u", i): 1})

    def s(self, i: int, exp: int = 1) -> "Expression":
        return self.monomial({("s", i): exp})

    def g(self, i: int, exp: int = 1) -> "Expression":
        """Metric coefficient g_i = s_i**2, any integer power."""
        return self.monomial({("s", i): 2 * exp})

    def r(self, i: int, j: int) -> "Expression":
        return self.monomial({("r", i, j): 1})

    def t(self, k: int, i: int) -> "Expression":
        if k > self.max_tau_level:
            raise TauLevelOverflow(
                f"t-level {k} exceeds cap {self.max_tau_level}")
        if k < 2:
            raise ValueError("t-generators exist only for level >= 2")
        return self.monomial({("t", k, i): 1})

    def u_diff(self, i: int, j: int) -> "Expression":
        """u_i - u_j as a polynomial expression."""
        return self.u(i) - self.u(j)

    def sum(self, terms: Iterable["Expression"]) -> "Expression":
        """Sum of many expressions, grouping by denominator first.

        Equivalent to repeated addition but avoids quadratic re-normalization
        in the long generator sums the calculus is full of.
        """
        by_den: dict[Den, Poly] = {}
        for e in terms:
            if e.ctx is not self:
                raise ValueError("mixing expressions from different contexts")
            if not e.num:
                continue
            acc = by_den.get(e.den)
            if acc is None:
                by_den[e.den] = dict(e.num)
            else:
                _padd_into(acc, e.num)
        total = self.zero()
        for den, num in by_den.items():
            num = {m: c for m, c in num.items() if c}
            total = total + Expression(self, num, den, _normalized=False)
        return total

    def __repr__(self) -> str:
        return f"Context(n={self.n}, max_tau_level={self.max_tau_level})"


# -- polynomial helpers (dense-exponent monomials) -------------------------

def _padd_into(acc: Poly, other: Poly) -> None:
    get = acc.get
    for m, c in other.items():
        prev = get(m)
        if prev is None:
            acc[m] = c
        else:
            tot = prev + c
            if tot:
                acc[m] = tot
            else:
                del acc[m]


def _pmul(a: Poly, b: Poly) -> Poly:
    if not a or not b:
        return {}
    if len(a) > len(b):
        a, b = b, a
    out: Poly = {}
    get = out.get
    for ma, ca in a.items():
        for mb, cb in b.items():
            m = tuple(map(int.__add__, ma, mb))
            prev = get(m)
            if prev is None:
                out[m] = ca * cb
            else:
                tot = prev + ca * cb
                if tot:
                    out[m] = tot
                else:
                    del out[m]
    return out


def _pscale(a: Poly, c) -> Poly:
    if not c:
        return {}
    return {m: v * c for m, v in a.items()}


def _pmul_delta(ctx: Context, a: Poly, i: int, j: int) -> Poly:
    """Multiply by (u_i - u_j)."""
    ui = ctx._u_gid[i - 1]
    uj = ctx._u_gid[j - 1]
    out: Poly = {}
    get = out.get
    for m, c in a.items():
        for slot, sign in ((ui, c), (uj, -c)):
            m2 = m[:slot] + (m[slot] + 1,) + m[slot + 1:]
            prev = get(m2)
            if prev is None:
                out[m2] = sign
            else:
                tot = prev + sign
                if tot:
                    out[m2] = tot
                else:
                    del out[m2]
    return out


def _subst_u_vanishes(ctx: Context, num: Poly, i: int, j: int) -> bool:
    """True iff num becomes 0 under u_i -> u_j (iff Delta_ij divides num).

    Two-pass with early exit: terms carrying u_i are folded into an
    accumulator first, then every u_i-free term must cancel against it
    exactly — the first one that does not settles the (common) negative
    answer without touching the rest.
    """
    ui = ctx._u_gid[i - 1]
    uj = ctx._u_gid[j - 1]
    folded: Poly = {}
    plain: list = []
    get = folded.get
    for m, c in num.items():
        e = m[ui]
        if e:
            lm = list(m)
            lm[ui] = 0
            lm[uj] += e
            m2 = tuple(lm)
            prev = get(m2)
            if prev is None:
                folded[m2] = c
            else:
                tot = prev + c
                if tot:
                    folded[m2] = tot
                else:
                    del folded[m2]
        else:
            plain.append((m, c))
    if not folded:
        return not num
    for m, c in plain:
        prev = folded.get(m)
        if prev is None or prev != -c:
            return False
        del folded[m]
    return not folded


def _div_delta_exact(ctx: Context, num: Poly, i: int, j: int) -> Poly:
    """Exact quotient num / (u_i - u_j); caller guarantees divisibility.

    Synthetic division in the variable u_i over the remaining generators:
    the remainder is num at u_i = u_j, which the divisibility pre-check has
    already certified to vanish.
    """
    ui = ctx._u_gid[i - 1]
    uj = ctx._u_gid[j - 1]
    buckets: dict[int, Poly] = {}
    for m, c in num.items():
        d = m[ui]
        m0 = m[:ui] + (0,) + m[ui + 1:]
        buckets.setdefault(d, {})[m0] = c
    top = max(buckets)

    def shift_uj(p: Poly) -> Poly:
        return {m[:uj] + (m[uj] + 1,) + m[uj + 1:]: c for m, c in p.items()}

    out: Poly = {}

    def emit(p: Poly, d: int) -> None:
        if d == 0:
            for m, c in p.items():
                out[m] = c
        else:
            for m, c in p.items():
                out[m[:ui] + (d,) + m[ui + 1:]] = c

    q = buckets.get(top, {})
    emit(q, top - 1)
    for d in range(top - 1, 0, -1):
        nxt = dict(buckets.get(d, {}))
        _padd_into(nxt, shift_uj(q))
        emit(nxt, d - 1)
        q = nxt
    rem = dict(buckets.get(0, {}))
    _padd_into(rem, shift_uj(q))
    if rem:
        raise ArithmeticError("inexact division by u-difference")
    return out


def _normalize(ctx: Context, num: Poly, den: dict) -> tuple[Poly, Den]:
    if not num:
        return {}, ()
    for pair in list(den):
        i, j = pair
        mult = den[pair]
        while mult > 0 and _subst_u_vanishes(ctx, num, i, j):
            num = _div_delta_exact(ctx, num, i, j)
            mult -= 1
        if mult == 0:
            del den[pair]
        else:
            den[pair] = mult
    return num, tuple(sorted(den.items()))


class Expression:
    """Immutable exact rational function: Poly numerator / Delta denominator."""

    __slots__ = ("ctx", "num", "den")

    def __init__(self, ctx: Context, num: Poly, den, _normalized: bool = True):
        if not _normalized or not isinstance(den, tuple):
            num, den = _normalize(ctx, num, dict(den))
        elif not num:
            den = ()
        object.__setattr__(self, "ctx", ctx)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, *_):
        raise AttributeError("Expression is immutable")

    # -- basics ------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.num

    def term_count(self) -> int:
        return len(self.num)

    def equals(self, other: "Expression") -> bool:
        return (self - other).is_zero()

    def delta_degree(self, i: int, j: int) -> int:
        """Post-normalization multiplicity of (u_i - u_j) in the denominator."""
        if i > j:
            i, j = j, i
        for pair, mult in self.den:
            if pair == (i, j):
                return mult
        return 0

    def max_pole_order(self) -> int:
        return max((m for _, m in self.den), default=0)

    def t_levels(self) -> set[int]:
        """Set of t-generator levels actually present."""
        ctx = self.ctx
        levels: set[int] = set()
        for m in self.num:
            for g, e in enumerate(m):
                if e and ctx.symbols[g][0] == "t":
                    levels.add(ctx.symbols[g][1])
        return levels

    def select(self, sym: Symbol) -> "Expression":
        """Sub-expression of the terms containing the given generator."""
        g = self.ctx.gid(sym)
        num = {m: c for m, c in self.num.items() if m[g]}
        # a subset of terms can share a pole factor the whole did not
        return Expression(self.ctx, num, dict(self.den), _normalized=False)

    def generators(self) -> set[Symbol]:
        ctx = self.ctx
        used: set[Symbol] = set()
        for m in self.num:
            for g, e in enumerate(m):
                if e:
                    used.add(ctx.symbols[g])
        for (i, j), _ in self.den:
            used.add(("u", i))
            used.add(("u", j))
        return used

    # -- arithmetic ---------------------------------------------------------

    def _check(self, other) -> "Expression":
        if isinstance(other, Expression):
            if other.ctx is not self.ctx:
                raise ValueError("mixing expressions from different contexts")
            return other
        return self.ctx.const(other)

    def __add__(self, other) -> "Expression":
        other = self._check(other)
        ctx = self.ctx
        if self.den == other.den:
            num = dict(self.num)
            _padd_into(num, other.num)
            return Expression(ctx, num, dict(self.den), _normalized=False)
        da = dict(self.den)
        db = dict(other.den)
        lcm = {p: max(da.get(p, 0), db.get(p, 0)) for p in set(da) | set(db)}
        na = self.num
        for p, m in lcm.items():
            for _ in range(m - da.get(p, 0)):
                na = _pmul_delta(ctx, na, p[0], p[1])
        nb = other.num
        for p, m in lcm.items():
            for _ in range(m - db.get(p, 0)):
                nb = _pmul_delta(ctx, nb, p[0], p[1])
        num = dict(na)
        _padd_into(num, nb)
        return Expression(ctx, num, lcm, _normalized=False)

    def __radd__(self, other) -> "Expression":
        return self.__add__(other)

    def __neg__(self) -> "Expression":
        return Expression(self.ctx, {m: -c for m, c in self.num.items()},
                          self.den)

    def __sub__(self, other) -> "Expression":
        other = self._check(other)
        return self.__add__(-other)

    def __rsub__(self, other) -> "Expression":
        return (-self).__add__(other)

    def __mul__(self, other) -> "Expression":
        if not isinstance(other, Expression):
            c = _as_coeff(other)
            if not c:
                return self.ctx.zero()
            return Expression(self.ctx, _pscale(self.num, c), self.den)
        other = self._check(other)
        den = dict(self.den)
        for p, m in other.den:
            den[p] = den.get(p, 0) + m
        num = _pmul(self.num, other.num)
        return Expression(self.ctx, num, den, _normalized=False)

    def __rmul__(self, other) -> "Expression":
        return self.__mul__(other)

    def __truediv__(self, other) -> "Expression":
        """Division by an exact rational constant only."""
        c = _as_coeff(other)
        if not c:
            raise ZeroDivisionError("division by zero constant")
        return self.__mul__(Q1 / c)

    def __pow__(self, e: int) -> "Expression":
        if not isinstance(e, int) or e < 0:
            raise ValueError("only non-negative integer powers")
        out = self.ctx.one()
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base if e > 1 else base
            e >>= 1
        return out

    def div_u_diff(self, i: int, j: int) -> "Expression":
        """Exact division by (u_i - u_j), i != j; stays in the Delta class."""
        if i == j:
            raise ZeroDivisionError("u_i - u_i is zero")
        num = self.num
        if i > j:
            i, j = j, i
            num = {m: -c for m, c in num.items()}
        den = dict(self.den)
        den[(i, j)] = den.get((i, j), 0) + 1
        return Expression(self.ctx, dict(num), den, _normalized=False)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Expression):
            return NotImplemented
        return (self.ctx is other.ctx and self.num == other.num
                and self.den == other.den)

    def __hash__(self):
        raise TypeError("Expression is not hashable")

    # -- queries -------------------------------------------------------------

    def degree(self):
        """Common grading degree of all terms.

        deg u = -1, deg s = 0, deg r = 1, deg t_{k,.} = k; every denominator
        Delta factor adds +1.  Returns ANY_DEGREE for the zero expression and
        NON_HOMOGENEOUS when terms disagree.
        """
        if not self.num:
            return ANY_DEGREE
        gd = self.ctx.gen_degrees
        den_shift = sum(m for _, m in self.den)
        deg = None
        for mono in self.num:
            d = den_shift
            for g, e in enumerate(mono):
                if e:
                    d += e * gd[g]
            if deg is None:
                deg = d
            elif d != deg:
                return NON_HOMOGENEOUS
        return deg

    def is_homogeneous_of(self, d: int) -> bool:
        deg = self.degree()
        return deg == ANY_DEGREE or deg == d

    def evaluate(self, point: Mapping[Symbol, object]) -> QQ:
        """Exact value at a point assigning rationals to generators.

        Raises PoleHit when a denominator factor vanishes and
        MissingAssignment when a needed generator has no value.
        """
        ctx = self.ctx
        vals: dict[int, QQ] = {}

        def val(g: int) -> QQ:
            v = vals.get(g)
            if v is None:
                sym = ctx.symbols[g]
                if sym not in point:
                    raise MissingAssignment(f"no value for {sym!r}")
                v = _as_coeff(point[sym])
                vals[g] = v
            return v

        den_val = Q1
        for (i, j), mult in self.den:
            d = val(ctx.gid(("u", i))) - val(ctx.gid(("u", j)))
            if not d:
                raise PoleHit(f"u_{i} - u_{j} = 0 at evaluation point")
            den_val *= d ** mult
        total = Q0
        for mono, coeff in self.num.items():
            term = coeff
            for g, e in enumerate(mono):
                if e:
                    term *= val(g) ** e
            total += term
        return total / den_val

    # -- rendering -----------------------------------------------------------

    def _sorted_terms(self) -> list[tuple[Mono, QQ]]:
        return sorted(self.num.items(), key=lambda kv: kv[0])

    def render(self) -> str:
        """Canonical deterministic text form."""
        if not self.num:
            return "0"
        names = [_sym_name(s) for s in self.ctx.symbols]
        parts: list[str] = []
        for mono, coeff in self._sorted_terms():
            factors = []
            for g, e in enumerate(mono):
                if not e:
                    continue
                factors.append(names[g] if e == 1 else f"{names[g]}^{e}")
            body = "*".join(factors)
            if not body:
                term = str(coeff)
            elif coeff == 1:
                term = body
            elif coeff == -1:
                term = f"-{body}"
            else:
                term = f"{coeff}*{body}"
            parts.append(term)
        num_str = parts[0]
        for term in parts[1:]:
            num_str += f" - {term[1:]}" if term.startswith("-") else f" + {term}"
        if not self.den:
            return num_str
        dfs = []
        for (i, j), mult in self.den:
            base = f"(u{i}-u{j})"
            dfs.append(base if mult == 1 else f"{base}^{mult}")
        return f"({num_str}) / ({'*'.join(dfs)})"

    def to_tree(self) -> dict:
        """Structured rendering: coefficient / generator-exponent list / denominator."""
        terms = []
        for mono, coeff in self._sorted_terms():
            gens = [list(self.ctx.symbols[g]) + [e]
                    for g, e in enumerate(mono) if e]
            terms.append({"coeff": str(coeff), "gens": gens})
        return {
            "n": self.ctx.n,
            "terms": terms,
            "den": [[i, j, mult] for (i, j), mult in self.den],
        }

    def __repr__(self) -> str:
        text = self.render()
        if len(text) > 120:
            text = text[:117] + "..."
        return f"<Expression {text}>"


def _sym_name(sym: Symbol) -> str:
    kind = sym[0]
    if kind == "u" or kind == "s":
        return f"{kind}{sym[1]}"
    if kind == "r":
        return f"r{sym[1]}{sym[2]}"
    return f"t{sym[1]}_{sym[2]}"


def from_tree(ctx: Context, tree: dict) -> Expression:
    """Parse the structured rendering back into an Expression."""
    if tree.get("n") != ctx.n:
        raise ValueError("tree was rendered under a different dimension")
    total = ctx.zero()
    for term in tree.get("terms", []):
        powers = {}
        for entry in term["gens"]:
            sym = tuple(entry[:-1])
            powers[sym] = entry[-1]
        total = total + ctx.monomial(powers, QQ(term["coeff"]))
    out = total
    for i, j, mult in tree.get("den", []):
        for _ in range(mult):
            out = out.div_u_diff(i, j)
    return out


def random_point(ctx: Context, rng: random.Random,
                 span: int = 40) -> dict[Symbol, QQ]:
    """Random admissible evaluation point: distinct u_i, nonzero s_i."""
    us: list[QQ] = []
    while len(us) < ctx.n:
        cand = QQ(rng.randint(-span, span), rng.randint(1, 7))
        if all(cand != v for v in us):
            us.append(cand)
    point: dict[Symbol, QQ] = {}
    for i in range(1, ctx.n + 1):
        point[("u", i)] = us[i - 1]
        s = Q0
        while not s:
            s = QQ(rng.randint(-span, span), rng.randint(1, 7))
        point[("s", i)] = s
    for sym in ctx.symbols:
        if sym[0] in ("r", "t"):
            point[sym] = QQ(rng.randint(-span, span), rng.randint(1, 7))
    return point
