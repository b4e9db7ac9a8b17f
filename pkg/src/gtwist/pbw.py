"""Exact arithmetic in the universal enveloping algebra, PBW normal form.

Monomials are exponent tuples over a fixed generator order: the f-block
first (configurable root order inside the block), then the Cartan block,
then the e-block in the canonical root order.  Straightening is done by a
memoized single-generator right multiplication; coefficients are exact
rationals throughout.
"""

from __future__ import annotations

from fractions import Fraction as Q

from .linalg import solve
from .roots import Weight


class PBWContext:
    """Straightening engine for U(g) with a fixed block order f < h < e."""

    def __init__(self, cb, f_order=None):
        self.cb = cb
        rs = cb.rs
        self.rs = rs
        n = rs.n_positive()
        if f_order is None:
            f_order = list(range(n))
        if sorted(f_order) != list(range(n)):
            raise ValueError("f_order must be a permutation of the positive roots")
        self.f_order = tuple(f_order)
        self.gens = (
            [("f", k) for k in f_order]
            + [("h", i) for i in range(rs.rank)]
            + [("e", k) for k in range(n)]
        )
        self.pos = {g: i for i, g in enumerate(self.gens)}
        self.nslots = len(self.gens)
        self.unit = (0,) * self.nslots
        self._rmul_cache = {}

    # -- monomial helpers ---------------------------------------------------

    def gen_monomial(self, g):
        m = [0] * self.nslots
        m[self.pos[g]] = 1
        return tuple(m)

    def expand(self, m):
        out = []
        for i, k in enumerate(m):
            out.extend([self.gens[i]] * k)
        return out

    def monomial_weight(self, m):
        acc = [Q(0)] * self.rs.rank
        for i, k in enumerate(m):
            if k:
                w = self.cb.key_weight(self.gens[i])
                for j, c in enumerate(w.coords):
                    acc[j] += k * c
        return Weight(tuple(acc))

    # -- straightening ------------------------------------------------------

    def rmul1(self, m, g):
        """Normal form of (monomial m) * (generator g) as {monomial: coeff}."""
        key = (m, g)
        hit = self._rmul_cache.get(key)
        if hit is not None:
            return hit
        pg = self.pos[g]
        last = -1
        for i in range(self.nslots - 1, -1, -1):
            if m[i]:
                last = i
                break
        if last <= pg:
            mm = list(m)
            mm[pg] += 1
            out = {tuple(mm): Q(1)}
            self._rmul_cache[key] = out
            return out
        # peel the rightmost generator x: m = m' x, then m g = (m' g) x + m' [x, g]
        x = self.gens[last]
        mp = list(m)
        mp[last] -= 1
        mp = tuple(mp)
        out = {}
        for mono, c in self.rmul1(mp, g).items():
            for mono2, c2 in self.rmul1(mono, x).items():
                _acc(out, mono2, c * c2)
        for z, cz in self.cb.bracket(x, g).items():
            for mono, c in self.rmul1(mp, z).items():
                _acc(out, mono, cz * c)
        out = {k: v for k, v in out.items() if v != 0}
        self._rmul_cache[key] = out
        return out

    def mul(self, a, b):
        """Product of two elements given as {monomial: coeff} dicts."""
        out = {}
        for mb, cb0 in b.items():
            word = self.expand(mb)
            for ma, ca in a.items():
                cur = {ma: ca * cb0}
                for g in word:
                    nxt = {}
                    for mono, c in cur.items():
                        for mono2, c2 in self.rmul1(mono, g).items():
                            _acc(nxt, mono2, c * c2)
                    cur = nxt
                for mono, c in cur.items():
                    _acc(out, mono, c)
        return {k: v for k, v in out.items() if v != 0}

    def elem(self, g, coeff=1):
        return {self.gen_monomial(g): Q(coeff)}

    def from_g(self, d):
        """Element of U(g) from a Lie-algebra vector {genkey: coeff}."""
        out = {}
        for g, c in d.items():
            _acc(out, self.gen_monomial(g), Q(c))
        return out

    def ad(self, x_elem, a):
        return sub(self.mul(x_elem, a), self.mul(a, x_elem))


def _acc(d, k, c):
    nv = d.get(k, Q(0)) + c
    if nv == 0:
        d.pop(k, None)
    else:
        d[k] = nv


def add(a, b):
    out = dict(a)
    for k, c in b.items():
        _acc(out, k, c)
    return out


def sub(a, b):
    out = dict(a)
    for k, c in b.items():
        _acc(out, k, -c)
    return out


def scale(a, c):
    c = Q(c)
    if c == 0:
        return {}
    return {k: c * v for k, v in a.items()}


def multiply(ctx, a, b):
    """PBW normal-form product."""
    return ctx.mul(a, b)


def adjoint_power(ctx, x_key, k, a):
    """ad(x)^k applied to an element, exact."""
    x = ctx.elem(x_key)
    cur = dict(a)
    for _ in range(k):
        cur = ctx.ad(x, cur)
    return cur


def ad_nilpotence_order(ctx, x_key, a, bound=60):
    """Smallest k with ad(x)^k(a) = 0; raises if the bound is exceeded."""
    x = ctx.elem(x_key)
    cur = dict(a)
    for k in range(bound + 1):
        if not cur:
            return k
        cur = ctx.ad(x, cur)
    raise AssertionError("ad-nilpotence bound exceeded")


def coroot_elem(ctx, alpha_idx):
    """h_alpha expanded over the simple Cartan generators."""
    return ctx.from_g(
        {("h", i): c for i, c in enumerate(ctx.rs.coroot_coeffs(alpha_idx)) if c}
    )


def casimir_alpha(ctx, alpha_idx):
    """e f + f e + h^2/2 for the sl(2) triple of a positive root."""
    e = ctx.elem(("e", alpha_idx))
    f = ctx.elem(("f", alpha_idx))
    h = coroot_elem(ctx, alpha_idx)
    out = add(ctx.mul(e, f), ctx.mul(f, e))
    return add(out, scale(ctx.mul(h, h), Q(1, 2)))


def killing_form(cb):
    """Killing pairings: (kappa(e_g, f_g) per root, kappa on the Cartan)."""
    keys = cb.keys
    idx = {g: i for i, g in enumerate(keys)}
    dim = len(keys)
    mats = {}
    for g in keys:
        m = [[Q(0)] * dim for _ in range(dim)]
        for j, z in enumerate(keys):
            for k, c in cb.bracket(g, z).items():
                m[idx[k]][j] += c
        mats[g] = m

    def trace_prod(a, b):
        return sum(sum(a[i][t] * b[t][i] for t in range(dim)) for i in range(dim))

    rs = cb.rs
    ef = [trace_prod(mats[("e", k)], mats[("f", k)]) for k in range(rs.n_positive())]
    hh = [
        [trace_prod(mats[("h", i)], mats[("h", j)]) for j in range(rs.rank)]
        for i in range(rs.rank)
    ]
    return ef, hh


def casimir_g(ctx):
    """Quadratic Casimir from the Killing-dual basis; central in U(g)."""
    rs = ctx.rs
    ef, hh = killing_form(ctx.cb)
    out = {}
    for k in range(rs.n_positive()):
        e = ctx.elem(("e", k))
        f = ctx.elem(("f", k))
        term = add(ctx.mul(e, f), ctx.mul(f, e))
        out = add(out, scale(term, 1 / ef[k]))
    # inverse of the Cartan block, column by column
    r = rs.rank
    for j in range(r):
        rhs = [Q(1) if i == j else Q(0) for i in range(r)]
        col = solve([list(row) for row in hh], rhs)
        hj = ctx.elem(("h", j))
        for i in range(r):
            if col[i] != 0:
                hi = ctx.elem(("h", i))
                out = add(out, scale(ctx.mul(hi, hj), col[i]))
    return {k: v for k, v in out.items() if v != 0}


def evaluate_on_highest_weight(ctx, z, hw):
    """Scalar by which z acts on a highest-weight vector of weight hw.

    Only valid for elements whose normal form has no unbalanced blocks:
    monomials with a nonzero e-block are annihilated, monomials with a
    nonzero f-block but empty e-block are rejected.
    """
    rs = ctx.rs
    n = rs.n_positive()
    acc = Q(0)
    for m, c in z.items():
        if any(m[n + rs.rank + k] for k in range(n)):
            continue
        if any(m[k] for k in range(n)):
            raise ValueError("element does not act by a scalar on the vector")
        term = c
        for i in range(rs.rank):
            k = m[n + i]
            if k:
                term *= rs.pairing(hw, rs.simple_indices()[i]) ** k
        acc += term
    return acc


def central_character(ctx, z, mu):
    """chi_mu(z): action of z on a highest-weight vector of weight mu - rho."""
    return evaluate_on_highest_weight(ctx, z, mu - ctx.rs.rho)


def casimir_alpha_character(rs, mu, alpha_idx):
    """Closed form chi_mu(Cas_alpha) = (mu(h_alpha)^2 - 1) / 2.

    Certified against the highest-weight-action oracle in the test suite.
    """
    v = rs.pairing(mu, alpha_idx)
    return (v * v - 1) / 2


def pretty(ctx, a):
    """Debug printer for elements."""
    if not a:
        return "0"
    parts = []
    for m in sorted(a.keys()):
        c = a[m]
        factors = []
        for i, k in enumerate(m):
            if k:
                kind, idx = ctx.gens[i]
                name = f"{kind}{idx}" if kind != "h" else f"h{idx}"
                factors.append(name if k == 1 else f"{name}^{k}")
        mono = "·".join(factors) if factors else "1"
        parts.append(f"({c})·{mono}")
    return " + ".join(parts)
