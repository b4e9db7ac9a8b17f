"""Simple finite-dimensional modules over a standard parabolic.

F_lambda is built as the quotient of a (truncated) Verma module of the Levi
factor by the submodule generated by the singular vectors f_i^{lambda(h_i)+1}
applied to the highest-weight vector, one for each simple root in Sigma.
The nilradical acts as zero by construction.  The truncation depth grows
until the quotient closes strictly inside it; the dimension is cross-checked
against the Weyl dimension formula in the test suite.
"""

from __future__ import annotations

from fractions import Fraction as Q
from itertools import product

from . import pbw
from .linalg import ReducedSpan
from .roots import Weight, is_p_dominant


class NotDominantError(ValueError):
    pass


class InducingModule:
    """Basis, weights and p-action matrices of F_lambda."""

    def __init__(self, rs, p, lam, dim, monos, weights, cols):
        self.rs = rs
        self.p = p
        self.lam = lam
        self.dim = dim
        self.basis_monos = monos
        self.weights = weights
        self._cols = cols

    def act_key(self, genkey, vec):
        """Action of a p-generator on {index: coeff}; raises off p."""
        kind, idx = genkey
        if kind == "h":
            out = {}
            for j, c in vec.items():
                val = self.rs.pairing(self.weights[j], self.rs.simple_indices()[idx])
                if val != 0:
                    out[j] = c * val
            return out
        if kind == "e" and idx not in set(self.p.delta_l):
            return {}
        if kind == "f" and idx not in set(self.p.delta_l):
            raise ValueError("lowering generator outside p")
        cols = self._cols[genkey]
        out = {}
        for j, c in vec.items():
            for i, v in cols[j].items():
                nv = out.get(i, Q(0)) + c * v
                if nv == 0:
                    out.pop(i, None)
                else:
                    out[i] = nv
        return out

    def act_coroot(self, root_idx, vec):
        """Diagonal action of h_gamma for an arbitrary positive root."""
        out = {}
        for j, c in vec.items():
            val = self.rs.pairing(self.weights[j], root_idx)
            if val != 0:
                out[j] = c * val
        return out


def _levi_monomials(ctx, slots, depth):
    """Exponent tuples over the given f-slots with total degree <= depth."""
    out = []

    def rec(i, remaining, cur):
        if i == len(slots):
            m = [0] * ctx.nslots
            for s, e in zip(slots, cur):
                m[s] = e
            out.append(tuple(m))
            return
        for e in range(remaining + 1):
            rec(i + 1, remaining - e, cur + [e])

    rec(0, depth, [])
    return out


def _evaluate_on_hw(ctx, elem, lam):
    """Project u·v_hw to the f-monomial span: kill e-terms, evaluate h-terms."""
    rs = ctx.rs
    n = rs.n_positive()
    out = {}
    for m, c in elem.items():
        if any(m[n + rs.rank + k] for k in range(n)):
            continue
        coeff = c
        for i in range(rs.rank):
            k = m[n + i]
            if k:
                coeff *= rs.pairing(lam, rs.simple_indices()[i]) ** k
        if coeff == 0:
            continue
        fm = m[:n] + (0,) * (rs.rank + n)
        nv = out.get(fm, Q(0)) + coeff
        if nv == 0:
            out.pop(fm, None)
        else:
            out[fm] = nv
    return out


def build_inducing_module(cb, p, lam, ctx=None):
    """Simple p-module with highest weight lam (lam must be p-dominant)."""
    rs = cb.rs
    if not is_p_dominant(rs, lam, p):
        raise NotDominantError("highest weight is not dominant integral on Sigma")
    if ctx is None:
        ctx = pbw.PBWContext(cb)
    if not p.sigma:
        return InducingModule(rs, p, lam, 1, [ctx.unit], [lam], {})

    simple_idxs = rs.simple_indices()
    sig_roots = [simple_idxs[i] for i in sorted(p.sigma)]
    marks = {r: int(rs.pairing(lam, r)) for r in sig_roots}
    slots = [ctx.pos[("f", g)] for g in p.delta_l]

    depth = sum(marks.values()) * max(1, len(p.delta_l)) + 3
    for _ in range(8):
        result = _try_build(cb, ctx, p, lam, sig_roots, marks, slots, depth)
        if result is not None:
            return result
        depth += depth // 2 + 2
    raise AssertionError("inducing module did not close within the depth cap")


def _try_build(cb, ctx, p, lam, sig_roots, marks, slots, depth):
    rs = cb.rs
    monos = _levi_monomials(ctx, slots, depth)
    monoset = set(monos)

    def truncate(elem):
        return {m: c for m, c in elem.items() if m in monoset}

    span = ReducedSpan()
    work = []
    for r in sig_roots:
        m = [0] * ctx.nslots
        m[ctx.pos[("f", r)]] = marks[r] + 1
        work.append({tuple(m): Q(1)})
    while work:
        vec = work.pop()
        vec = truncate(vec)
        if not vec or not span.add(vec):
            continue
        for r in sig_roots:
            fe = ctx.elem(("f", r))
            nxt = truncate(ctx.mul(fe, vec))
            if nxt:
                work.append(nxt)

    pivots = set(span.rows.keys())
    basis = [m for m in monos if m not in pivots]
    if not basis:
        return None
    maxdeg = max(sum(m) for m in basis)
    if maxdeg > depth - 2:
        return None
    basis.sort(key=lambda m: (sum(m), m))
    index = {m: j for j, m in enumerate(basis)}

    def qcoord(elem):
        red = span.reduce(elem)
        out = {}
        for m, c in red.items():
            j = index.get(m)
            if j is None:
                raise AssertionError("module does not close in the truncation")
            out[j] = c
        return out

    weights = []
    for m in basis:
        w = lam
        for s, g in zip(slots, p.delta_l):
            if m[s]:
                w = w - rs.root_weight(g).scale(m[s])
        weights.append(w)

    cols = {}
    for g_idx in p.delta_l:
        for kind in ("e", "f"):
            key = (kind, g_idx)
            colj = []
            for m in basis:
                z = ctx.mul(ctx.elem(key), {m: Q(1)})
                z = _evaluate_on_hw(ctx, z, lam)
                colj.append(qcoord(z))
            cols[key] = colj
    return InducingModule(rs, p, lam, len(basis), basis, weights, cols)


def weyl_dimension(rs, delta_l, lam):
    """Weyl dimension formula for the Levi factor, exact rationals."""
    if not delta_l:
        return 1
    two_rho_l = [0] * rs.rank
    for k in delta_l:
        for i, m in enumerate(rs.positive_roots[k]):
            two_rho_l[i] += m
    rho_l = Weight(tuple(Q(x, 2) for x in two_rho_l))
    out = Q(1)
    for k in delta_l:
        g = rs.root_weight(k)
        out *= rs.inner(lam + rho_l, g) / rs.inner(rho_l, g)
    if out.denominator != 1:
        raise AssertionError("Weyl dimension is not an integer")
    return int(out)
