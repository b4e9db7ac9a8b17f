"""Generalized Verma modules and their twists on explicit bases.

A module vector is a sparse rational combination of basis tensors (a, j)
where a is an exponent vector over the nilradical roots and j indexes the
inducing module.  In VERMA mode the tensor is  prod f_g^{a_g} (x) v_j; in
TWISTED mode it is  f_a^{-a_a-1} prod_{g != a} f_g^{a_g} (x) v_j, with the
product over the remaining nilradical roots in the canonical root order.

Actions are exact: commuting a generator past f_alpha^{-n} uses the closed
binomial rewriting, terms whose f_alpha exponent becomes nonnegative are
dropped (they lie in the untwisted part, hence vanish in the quotient), and
the parabolic tail acts through the inducing-module matrices.  Truncation
boxes appear only when enumerating weight spaces for matrix analyses.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction as Q
from itertools import product

from . import pbw
from .lattice import mu_weight
from .levi import build_inducing_module
from .linalg import SparseSpan, mat_mul, nullspace, rank
from .ore import binom_rat
from .roots import Weight, compute_phi_alpha

VERMA = "VERMA"
TWISTED = "TWISTED"

REACH = 2  # conservative exponent drift of a single generator action


class ModuleContext:
    """One module M_p(lambda) or W_p(lambda, alpha) with its PBW engine."""

    def __init__(self, cb, p, lam, alpha_idx=None):
        self.cb = cb
        self.rs = cb.rs
        self.p = p
        self.lam = lam
        self.alpha = alpha_idx
        self.mode = VERMA if alpha_idx is None else TWISTED
        if alpha_idx is not None and alpha_idx not in p.delta_u:
            raise ValueError("twisting root must lie in the nilradical")
        if self.mode == TWISTED:
            u_order = [alpha_idx] + [k for k in p.delta_u if k != alpha_idx]
        else:
            u_order = list(p.delta_u)
        self.u_order = tuple(u_order)
        self.nu = len(u_order)
        f_order = list(u_order) + list(p.delta_l)
        self.ctx = pbw.PBWContext(cb, f_order=f_order)
        self.F = build_inducing_module(cb, p, lam, ctx=pbw.PBWContext(cb))
        self._u_slots = [self.ctx.pos[("f", g)] for g in u_order]
        self._l_slots = [self.ctx.pos[("f", g)] for g in p.delta_l]
        self._act_cache = {}
        self._delta_u_set = set(p.delta_u)

    # -- tensors ------------------------------------------------------------

    def tensor_weight(self, a, j):
        w = self.F.weights[j]
        if self.mode == VERMA:
            for pos, g in enumerate(self.u_order):
                if a[pos]:
                    w = w - self.rs.root_weight(g).scale(a[pos])
            return w
        acc = w + self.rs.root_weight(self.alpha).scale(a[0] + 1)
        for pos in range(1, self.nu):
            if a[pos]:
                acc = acc - self.rs.root_weight(self.u_order[pos]).scale(a[pos])
        return acc

    def to_delta_u_exponents(self, a):
        """Exponents re-indexed by the canonical order of the nilradical roots."""
        by_root = {g: a[pos] for pos, g in enumerate(self.u_order)}
        return tuple(by_root[g] for g in self.p.delta_u)

    def tensor_weight_via_lattice(self, a, j):
        """Cross-module route: the weight map from the lattice module."""
        if self.mode != TWISTED:
            raise ValueError("lattice weight map applies to twisted tensors")
        return self.F.weights[j] + mu_weight(
            self.rs, self.p, self.to_delta_u_exponents(a), self.alpha
        )

    def _u_monomial(self, exps):
        m = [0] * self.ctx.nslots
        for slot, e in zip(self._u_slots, exps):
            m[slot] = e
        return tuple(m)

    # -- action of a single Chevalley generator ------------------------------

    def _apply_tail(self, mono, j):
        """Act by the (f_l, h, e) tail of a normal monomial on v_j."""
        rs = self.rs
        n = rs.n_positive()
        vec = {j: Q(1)}
        for k in range(n - 1, -1, -1):
            slot = n + rs.rank + k
            e = mono[slot]
            if not e:
                continue
            if k in self._delta_u_set:
                return {}
            for _ in range(e):
                vec = self.F.act_key(("e", k), vec)
                if not vec:
                    return {}
        for i in range(rs.rank - 1, -1, -1):
            e = mono[n + i]
            if not e:
                continue
            for _ in range(e):
                vec = self.F.act_key(("h", i), vec)
                if not vec:
                    return {}
        for slot in reversed(self._l_slots):
            e = mono[slot]
            if not e:
                continue
            key = self.ctx.gens[slot]
            for _ in range(e):
                vec = self.F.act_key(key, vec)
                if not vec:
                    return {}
        return vec

    def _collect(self, z, out, coeff):
        for m, cm in z.items():
            tail = self._apply_tail(m, self._tail_j)
            if not tail:
                continue
            a_new = tuple(m[slot] for slot in self._u_slots)
            for i, cv in tail.items():
                key = (a_new, i)
                nv = out.get(key, Q(0)) + coeff * cm * cv
                if nv == 0:
                    out.pop(key, None)
                else:
                    out[key] = nv

    def _act_tensor(self, genkey, a, j):
        cached = self._act_cache.get((genkey, a, j))
        if cached is not None:
            return cached
        out = {}
        self._tail_j = j
        if self.mode == VERMA:
            z = self.ctx.mul(self.ctx.elem(genkey), {self._u_monomial(a): Q(1)})
            self._collect(z, out, Q(1))
        else:
            npow = a[0] + 1
            rest = self._u_monomial((0,) + a[1:])
            y = {genkey: Q(1)}
            k = 0
            while y:
                c = binom_rat(npow, k)
                staging = {}
                for gk, cg in y.items():
                    z = self.ctx.mul(self.ctx.elem(gk), {rest: Q(1)})
                    self._collect(z, staging, cg)
                for (a_new, i), cv in staging.items():
                    shift = npow + k - a_new[0]
                    if shift <= 0:
                        continue  # f_alpha exponent >= 0: lies in U(ubar)(x)F, zero
                    key = ((shift - 1,) + a_new[1:], i)
                    nv = out.get(key, Q(0)) + c * cv
                    if nv == 0:
                        out.pop(key, None)
                    else:
                        out[key] = nv
                y = {
                    kk: vv
                    for kk, vv in self.cb.bracket_elem(
                        {("f", self.alpha): 1}, y
                    ).items()
                    if vv != 0
                }
                k += 1
                if k > 120:
                    raise AssertionError("ad-nilpotence bound exceeded in action")
        out = {kk: vv for kk, vv in out.items() if vv != 0}
        self._act_cache[(genkey, a, j)] = out
        return out

    def act(self, genkey, vec):
        out = {}
        for (a, j), c in vec.items():
            for key, v in self._act_tensor(genkey, a, j).items():
                nv = out.get(key, Q(0)) + c * v
                if nv == 0:
                    out.pop(key, None)
                else:
                    out[key] = nv
        return out

    def act_g_vector(self, gvec, vec):
        out = {}
        for gk, cg in gvec.items():
            for key, v in self.act(gk, vec).items():
                nv = out.get(key, Q(0)) + Q(cg) * v
                if nv == 0:
                    out.pop(key, None)
                else:
                    out[key] = nv
        return out

    def act_element(self, elem, vec):
        """Action of a PBW element of this context's engine."""
        out = {}
        for mono, c in elem.items():
            cur = dict(vec)
            for g in reversed(self.ctx.expand(mono)):
                cur = self.act(g, cur)
                if not cur:
                    break
            for key, v in cur.items():
                nv = out.get(key, Q(0)) + c * v
                if nv == 0:
                    out.pop(key, None)
                else:
                    out[key] = nv
        return out

    def generator_keys(self):
        rs = self.rs
        return (
            [("e", k) for k in range(rs.n_positive())]
            + [("h", i) for i in range(rs.rank)]
            + [("f", k) for k in range(rs.n_positive())]
        )

    # -- weight-space enumeration -------------------------------------------

    def weight_space_basis(self, mu, cutoff):
        out = []
        for a in product(range(cutoff + 1), repeat=self.nu):
            for j in range(self.F.dim):
                if self.tensor_weight(a, j) == mu:
                    out.append((a, j))
        out.sort()
        return out

    def interior_tensors(self, cutoff, reach=REACH):
        hi = cutoff - reach
        out = []
        for a in product(range(hi + 1), repeat=self.nu):
            for j in range(self.F.dim):
                out.append((a, j))
        return out


def unit_tensor(mctx, j=0):
    return {((0,) * mctx.nu, j): Q(1)}


def matrix_of(mctx, genkey, src_basis, dst_basis):
    """Exact matrix of one generator between enumerated tensor lists."""
    idx = {t: i for i, t in enumerate(dst_basis)}
    cols = []
    for t in src_basis:
        img = mctx._act_tensor(genkey, *t)
        col = {}
        for key, v in img.items():
            i = idx.get(key)
            if i is None:
                raise AssertionError("action leaves the enumerated box")
            col[i] = v
        cols.append(col)
    rows = [[Q(0)] * len(src_basis) for _ in range(len(dst_basis))]
    for jcol, col in enumerate(cols):
        for i, v in col.items():
            rows[i][jcol] = v
    return rows


# -- filtration by powers of f_alpha ----------------------------------------


def f_filtration(mctx, mu, cutoff, nmax=None):
    """Dimensions [dim F_1, dim F_2, ...] with F_n = ker f_alpha^n on the box.

    Returns (dims, stable) where stable reports that the last two steps agree
    strictly inside the cutoff; non-stabilized output signals a too-small box.
    """
    if mctx.mode != TWISTED:
        raise ValueError("filtration needs a twisted module")
    alpha_w = mctx.rs.root_weight(mctx.alpha)
    if nmax is None:
        nmax = cutoff + 2
    bases = []
    w = mu
    for t in range(nmax + 1):
        bases.append(mctx.weight_space_basis(w, cutoff))
        w = w - alpha_w
    fkey = ("f", mctx.alpha)
    mats = [matrix_of(mctx, fkey, bases[t], bases[t + 1]) for t in range(nmax)]
    dims = []
    prod_mat = None
    for n in range(1, nmax + 1):
        prod_mat = mats[n - 1] if prod_mat is None else mat_mul(mats[n - 1], prod_mat)
        dims.append(len(nullspace(prod_mat, cols=len(bases[0]))))
    stable = len(dims) >= 2 and dims[-1] == dims[-2]
    return dims, stable, bases[0]


# -- Gamma_alpha decomposition ----------------------------------------------


@dataclass
class GTCharacter:
    casimir_value: Q
    multiplicity: int
    jordan_size: int


@dataclass
class GTSlice:
    weight: Weight
    characters: list
    filtration: list
    stable: bool

    def to_dict(self):
        return {
            "weight": [str(c) for c in self.weight.coords],
            "characters": [
                {
                    "casimir_value": str(ch.casimir_value),
                    "multiplicity": ch.multiplicity,
                    "jordan_size": ch.jordan_size,
                }
                for ch in self.characters
            ],
            "filtration": list(self.filtration),
        }


def _chi_value(c, n):
    """chi(Cas_alpha) of the character attached to level n at weight pairing c."""
    t = c - 1 - 2 * n
    return (t * t - 1) / 2


def casimir_alpha_tensor_action(mctx, vec):
    """Cas_alpha = e f + f e + h^2/2 applied through single-generator actions."""
    al = mctx.alpha
    e, f = ("e", al), ("f", al)
    out = {}
    for key, v in mctx.act(e, mctx.act(f, vec)).items():
        out[key] = out.get(key, Q(0)) + v
    for key, v in mctx.act(f, mctx.act(e, vec)).items():
        out[key] = out.get(key, Q(0)) + v
    hvec = {("h", i): c for i, c in enumerate(mctx.rs.coroot_coeffs(al)) if c}
    for key, v in mctx.act_g_vector(hvec, mctx.act_g_vector(hvec, vec)).items():
        out[key] = out.get(key, Q(0)) + Q(1, 2) * v
    return {k: v for k, v in out.items() if v != 0}


def gamma_decomposition(mctx, mu, cutoff, max_level=None):
    """Characters at one weight: filtration-formula multiplicities against
    generalized eigenspaces of the exact Cas_alpha matrix; disagreement raises.

    Characters are reported for filtration levels strictly below max_level
    (default cutoff - REACH); a character whose paired level falls outside
    that window is skipped rather than reported with a clipped multiplicity.
    """
    dims, stable, basis0 = f_filtration(mctx, mu, cutoff)
    if not stable:
        raise AssertionError("filtration not stabilized; enlarge the cutoff")
    if max_level is None:
        max_level = max(1, cutoff - REACH)
    c = mctx.rs.pairing(mu, mctx.alpha)
    fdims = [0] + dims
    graded = [fdims[n + 1] - fdims[n] for n in range(len(dims))]

    def graded_dim(n):
        if n < 0 or n >= len(graded):
            return 0
        return graded[n]

    # structural cross-check: the kernel of f^n is the stratum a_alpha <= n-1
    for n in range(1, min(len(dims), max_level) + 1):
        stratum = sum(1 for t in basis0 if t[0][0] <= n - 1)
        if stratum != fdims[n]:
            raise AssertionError("kernel does not match the exponent stratification")

    sub = [t for t in basis0 if t[0][0] <= max_level - 1]
    idx = {t: i for i, t in enumerate(sub)}
    d = len(sub)
    cas = [[Q(0)] * d for _ in range(d)]
    for jcol, t in enumerate(sub):
        img = casimir_alpha_tensor_action(mctx, {t: Q(1)})
        for key, v in img.items():
            i = idx.get(key)
            if i is None:
                raise AssertionError("Casimir action leaves the kernel stratum")
            cas[i][jcol] = v

    def partner_of(n):
        partner = c - n - 1
        if partner.denominator == 1:
            pn = int(partner)
            if pn >= 0 and pn != n:
                return pn
        return None

    chi_of_level = {}
    for n in range(max_level):
        chi_of_level.setdefault(_chi_value(c, n), []).append(n)

    characters = []
    accounted = 0
    skipped = 0
    for chi in sorted(chi_of_level.keys()):
        n = chi_of_level[chi][0]
        pn = partner_of(n)
        if pn is not None and pn >= max_level:
            skipped += graded_dim(n)
            continue
        mult = graded_dim(n) + (graded_dim(pn) if pn is not None else 0)
        shifted = [[cas[i][j] - (chi if i == j else 0) for j in range(d)] for i in range(d)]
        sq = mat_mul(shifted, shifted)
        cub = mat_mul(sq, shifted)
        n1 = d - rank(shifted)
        n2 = d - rank(sq)
        n3 = d - rank(cub)
        if n2 != n3:
            raise AssertionError("Jordan block of size > 2 detected")
        if n2 != mult:
            raise AssertionError(
                f"multiplicity mismatch at chi={chi}: filtration {mult}, eigenspace {n2}"
            )
        jordan = 1 if n1 == n2 else 2
        if mult:
            characters.append(GTCharacter(chi, mult, jordan))
            accounted += mult
    if accounted + skipped != d:
        raise AssertionError("generalized eigenspaces do not exhaust the subspace")
    return GTSlice(mu, characters, dims, stable)


def casimir_product_annihilates(mctx, mu, cutoff, n):
    """Exact check: prod_{k<n} (Cas - chi_k) kills the n-th kernel stratum."""
    c = mctx.rs.pairing(mu, mctx.alpha)
    basis = mctx.weight_space_basis(mu, cutoff)
    sub = [t for t in basis if t[0][0] <= n - 1]
    for t in sub:
        vec = {t: Q(1)}
        for k in range(n):
            chi = _chi_value(c, k)
            nxt = casimir_alpha_tensor_action(mctx, vec)
            for key, v in vec.items():
                nxt[key] = nxt.get(key, Q(0)) - chi * v
            vec = {kk: vv for kk, vv in nxt.items() if vv != 0}
        if vec:
            return False
    return True


# -- cyclicity, nilpotence, central character --------------------------------


def check_cyclicity(mctx, cutoff, max_sweeps=40, reach=REACH):
    """Breadth-first span from u_0 (x) F; reports interior coverage."""
    span = SparseSpan()
    frontier = []
    for j in range(mctx.F.dim):
        v = unit_tensor(mctx, j)
        if span.add(v):
            frontier.append(v)
    targets = mctx.interior_tensors(cutoff, reach)
    missing = set(targets)
    profile = []

    def in_box(vec):
        return all(all(e <= cutoff for e in a) for (a, _j) in vec)

    def update_missing():
        done = [t for t in missing if span.contains({t: Q(1)})]
        for t in done:
            missing.discard(t)

    update_missing()
    profile.append(len(targets) - len(missing))
    gens = mctx.generator_keys()
    for _ in range(max_sweeps):
        new_frontier = []
        for v in frontier:
            for g in gens:
                w = mctx.act(g, v)
                if not w or not in_box(w):
                    continue
                if span.add(w):
                    new_frontier.append(w)
        frontier = new_frontier
        update_missing()
        profile.append(len(targets) - len(missing))
        if not missing or not frontier:
            break
    return not missing, profile


def t_alpha_minus_keys(mctx):
    """Root vectors spanning the negatively-twisted nilpotent subalgebra."""
    phi = compute_phi_alpha(mctx.rs, mctx.alpha)
    return [("f", mctx.alpha)] + [("e", g) for g in sorted(phi)]


def check_local_nilpotence(mctx, samples, bound):
    """Each region generator kills each sample within `bound` applications."""
    results = {}
    for g in t_alpha_minus_keys(mctx):
        worst = 0
        for t in samples:
            vec = {t: Q(1)}
            steps = 0
            while vec:
                vec = mctx.act(g, vec)
                steps += 1
                if steps > bound:
                    return False, results
            worst = max(worst, steps)
        results[g] = worst
    return True, results


def check_central_character(mctx, samples, cas_elem=None):
    """Cas_g acts by chi_{lambda+rho} on every sample, exactly."""
    if cas_elem is None:
        cas_elem = pbw.casimir_g(mctx.ctx)
    scalar = pbw.central_character(mctx.ctx, cas_elem, mctx.lam + mctx.rs.rho)
    for t in samples:
        vec = {t: Q(1)}
        got = mctx.act_element(cas_elem, vec)
        want = {t: scalar} if scalar != 0 else {}
        if got != want:
            return False, scalar
    return True, scalar


def h0_kernel(mctx, mu, cutoff):
    """dim ker f_alpha on the twisted weight space, with the untwisted twin.

    The twin computes dim (M/f_alpha M) at the weight shifted down by alpha
    in a fresh VERMA context; the two dimensions must agree.
    """
    if mctx.mode != TWISTED:
        raise ValueError("kernel dimension needs a twisted module")
    rs = mctx.rs
    alpha_w = rs.root_weight(mctx.alpha)
    basis = mctx.weight_space_basis(mu, cutoff)
    lower = mctx.weight_space_basis(mu - alpha_w, cutoff)
    mat = matrix_of(mctx, ("f", mctx.alpha), basis, lower)
    dim_ker = len(nullspace(mat, cols=len(basis)))

    vctx = ModuleContext(mctx.cb, mctx.p, mctx.lam)
    nu_w = mu - alpha_w
    tgt = vctx.weight_space_basis(nu_w, cutoff + 2)
    src = vctx.weight_space_basis(nu_w + alpha_w, cutoff + 1)
    if any(any(e > cutoff for e in a) for (a, _j) in tgt):
        raise AssertionError("quotient weight space touches the box boundary")
    fmat = matrix_of(vctx, ("f", mctx.alpha), src, tgt)
    dim_quot = len(tgt) - rank(fmat)
    if dim_ker != dim_quot:
        raise AssertionError("kernel/cokernel dimensions disagree")
    return dim_ker


def commutator_residual(mctx, x, y, tensor):
    """act(x, act(y, w)) - act(y, act(x, w)) - act([x, y], w); {} when exact."""
    w = {tensor: Q(1)}
    lhs = mctx.act(x, mctx.act(y, w))
    for key, v in mctx.act(y, mctx.act(x, w)).items():
        nv = lhs.get(key, Q(0)) - v
        if nv == 0:
            lhs.pop(key, None)
        else:
            lhs[key] = nv
    for key, v in mctx.act_g_vector(mctx.cb.bracket(x, y), w).items():
        nv = lhs.get(key, Q(0)) - v
        if nv == 0:
            lhs.pop(key, None)
        else:
            lhs[key] = nv
    return lhs
