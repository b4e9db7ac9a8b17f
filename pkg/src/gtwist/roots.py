"""Root systems, Chevalley bases and parabolic decompositions, all exact.

Supported types: A1-A4, B2-B4, C2-C4, D3-D4, G2, F4.  Positive roots are
stored as integer coordinate tuples over the simple roots and ordered by
(height, lexicographic); that order is the canonical one used everywhere
downstream (PBW blocks, exponent vectors, reports).

The Chevalley basis is built from a bimultiplicative sign cocycle on the
root lattice for the simply-laced types, and by folding a simply-laced
parent along a diagram automorphism for B, C, G2 and F4 (C_n from A_{2n-1},
B_n from D_{n+1}, G2 from D4 triality, F4 from E6).  Validity is certified
by structural checks, not by matching any external table: every [e_g, f_g]
equals the coroot h_g, the Jacobi identity holds on all basis triples, and
all structure constants are integers.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction as Q
from itertools import combinations


SUPPORTED = {
    ("A", 1), ("A", 2), ("A", 3), ("A", 4),
    ("B", 2), ("B", 3), ("B", 4),
    ("C", 2), ("C", 3), ("C", 4),
    ("D", 3), ("D", 4),
    ("G", 2), ("F", 4),
}


class UnsupportedTypeError(ValueError):
    pass


def _chain_edges(rank):
    return [(i, i + 1) for i in range(rank - 1)]


def dynkin_edges(series, rank):
    """Undirected Dynkin diagram edges with multiplicities (i, j, n_ij).

    n_ij is the number of bonds; for n_ij > 1 the arrow points from i to j
    (i long, j short), encoded by convention in the Cartan matrix below.
    """
    if series in ("A",):
        return [(i, j, 1) for i, j in _chain_edges(rank)]
    if series == "B":
        edges = [(i, j, 1) for i, j in _chain_edges(rank - 1)]
        edges.append((rank - 2, rank - 1, 2))
        return edges
    if series == "C":
        edges = [(i, j, 1) for i, j in _chain_edges(rank - 1)]
        edges.append((rank - 1, rank - 2, 2))
        return edges
    if series == "D":
        edges = [(i, j, 1) for i, j in _chain_edges(rank - 1)]
        edges.append((rank - 3, rank - 1, 1))
        return edges
    if series == "G":
        return [(1, 0, 3)]
    if series == "F":
        return [(0, 1, 1), (1, 2, 2), (2, 3, 1)]
    if series == "E":
        return [(0, 2, 1), (2, 3, 1), (3, 4, 1), (4, 5, 1), (1, 3, 1)]
    raise UnsupportedTypeError(series)


def cartan_matrix(series, rank):
    """Cartan matrix A[i][j] = <alpha_j, alpha_i^vee>."""
    a = [[2 if i == j else 0 for j in range(rank)] for i in range(rank)]
    for i, j, mult in dynkin_edges(series, rank):
        # (i, j, m) with m > 1 means alpha_i long, alpha_j short:
        # <alpha_j, alpha_i^vee> = -1, <alpha_i, alpha_j^vee> = -m.
        a[i][j] = -1
        a[j][i] = -mult if mult > 1 else -1
    return tuple(tuple(row) for row in a)


def _enumerate_positive_roots(cartan):
    """All positive roots as coordinate tuples, built height by height."""
    rank = len(cartan)
    simples = [tuple(1 if k == i else 0 for k in range(rank)) for i in range(rank)]
    known = set(simples)
    by_height = {1: list(simples)}
    h = 1
    while by_height.get(h):
        nxt = []
        for gamma in by_height[h]:
            for i in range(rank):
                # root string: gamma + alpha_i is a root iff p - <gamma, a_i^vee> > 0
                p = 0
                cur = list(gamma)
                while True:
                    cur[i] -= 1
                    t = tuple(cur)
                    if all(x == 0 for x in t):
                        break
                    if t in known:
                        p += 1
                    else:
                        break
                pairing = sum(gamma[j] * cartan[i][j] for j in range(rank))
                if p - pairing > 0:
                    new = tuple(gamma[k] + (1 if k == i else 0) for k in range(rank))
                    if new not in known:
                        known.add(new)
                        nxt.append(new)
        h += 1
        if nxt:
            by_height[h] = sorted(set(nxt))
    roots = sorted(known, key=lambda g: (sum(g), g))
    return tuple(roots)


def _symmetrizer(cartan):
    """Minimal positive integers d with d_i a_ij = d_j a_ji."""
    rank = len(cartan)
    d = [None] * rank
    for start in range(rank):
        if d[start] is not None:
            continue
        d[start] = Q(1)
        stack = [start]
        while stack:
            i = stack.pop()
            for j in range(rank):
                if i != j and cartan[i][j] != 0 and d[j] is None:
                    d[j] = d[i] * Q(cartan[i][j], cartan[j][i])
                    stack.append(j)
    lcm_den = 1
    for x in d:
        lcm_den = lcm_den * x.denominator // _gcd(lcm_den, x.denominator)
    d = [x * lcm_den for x in d]
    g = 0
    for x in d:
        g = _gcd(g, x.numerator)
    return tuple(int(x / g) for x in d)


def _gcd(a, b):
    a, b = abs(int(a)), abs(int(b))
    while b:
        a, b = b, a % b
    return a


@dataclass(frozen=True)
class Weight:
    """Rational weight in simple-root coordinates."""

    coords: tuple

    def __add__(self, other):
        return Weight(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other):
        return Weight(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def scale(self, c):
        c = Q(c)
        return Weight(tuple(c * a for a in self.coords))

    def is_zero(self):
        return all(a == 0 for a in self.coords)


class RootSystem:
    """Root-system data for one simple type: roots, pairings, orderings."""

    _INTERNAL = {("A", 5), ("A", 7), ("D", 5), ("E", 6)}

    def __init__(self, series, rank):
        key = (series, rank)
        if key not in SUPPORTED and key not in self._INTERNAL:
            raise UnsupportedTypeError(f"unsupported type {series}{rank}")
        self.series = series
        self.rank = rank
        self.cartan = cartan_matrix(series, rank)
        self.d = _symmetrizer(self.cartan)
        # Gram matrix (alpha_i, alpha_j); (alpha_i, alpha_i) = 2 d_i.
        self.gram = tuple(
            tuple(Q(self.d[i] * self.cartan[i][j]) for j in range(rank))
            for i in range(rank)
        )
        self.positive_roots = _enumerate_positive_roots(self.cartan)
        self.root_index = {g: k for k, g in enumerate(self.positive_roots)}
        self.heights = tuple(sum(g) for g in self.positive_roots)
        two_rho = [0] * rank
        for g in self.positive_roots:
            for i in range(rank):
                two_rho[i] += g[i]
        self.rho = Weight(tuple(Q(x, 2) for x in two_rho))

    # -- basic coordinates ------------------------------------------------

    def n_positive(self):
        return len(self.positive_roots)

    def simple_indices(self):
        return [self.root_index[tuple(1 if k == i else 0 for k in range(self.rank))]
                for i in range(self.rank)]

    def simple_root_weight(self, i):
        return Weight(tuple(Q(1) if k == i else Q(0) for k in range(self.rank)))

    def root_weight(self, idx):
        return Weight(tuple(Q(c) for c in self.positive_roots[idx]))

    def highest_root_index(self):
        return len(self.positive_roots) - 1

    def is_simple_root(self, idx):
        return self.heights[idx] == 1

    # -- bilinear form and coroots ----------------------------------------

    def inner(self, w1, w2):
        acc = Q(0)
        for i, a in enumerate(w1.coords):
            if a == 0:
                continue
            for j, b in enumerate(w2.coords):
                if b != 0:
                    acc += a * b * self.gram[i][j]
        return acc

    def root_norm2(self, idx):
        w = self.root_weight(idx)
        return self.inner(w, w)

    def pairing(self, weight, root_idx):
        """weight(h_gamma) = 2 (weight, gamma) / (gamma, gamma)."""
        g = self.root_weight(root_idx)
        return 2 * self.inner(weight, g) / self.inner(g, g)

    def coroot_coeffs(self, idx):
        """h_gamma = sum_i c_i h_i over simple coroots; the c_i are integers."""
        g = self.positive_roots[idx]
        dg = self.root_norm2(idx) / 2
        out = []
        for i in range(self.rank):
            c = Q(g[i]) * self.d[i] / dg
            if c.denominator != 1:
                raise AssertionError("non-integral coroot expansion")
            out.append(int(c))
        return tuple(out)

    def weight_from_pairings(self, values):
        """Weight with prescribed values on the simple coroots (exact)."""
        from .linalg import solve

        mat = [[Q(self.cartan[i][j]) for j in range(self.rank)] for i in range(self.rank)]
        sol = solve(mat, [Q(v) for v in values])
        return Weight(tuple(sol))

    def sum_roots(self, ia, ib):
        """Index of gamma_a + gamma_b if it is a positive root, else None."""
        s = tuple(x + y for x, y in zip(self.positive_roots[ia], self.positive_roots[ib]))
        return self.root_index.get(s)

    def is_positive_coords(self, coords):
        return tuple(coords) in self.root_index

    def describe_root(self, idx):
        return "+".join(
            f"{m}a{i + 1}" if m != 1 else f"a{i + 1}"
            for i, m in enumerate(self.positive_roots[idx]) if m
        )


def build_root_system(series, rank):
    key = (series.upper(), int(rank))
    if key not in SUPPORTED:
        raise UnsupportedTypeError(f"unsupported type {series}{rank}")
    return RootSystem(*key)


# -- Chevalley basis -------------------------------------------------------


class ChevalleyBasis:
    """Basis {e_g, f_g (g positive), h_i (i simple)} with integer brackets.

    Generator keys: ('e', root_idx), ('f', root_idx), ('h', simple_idx).
    table[(g1, g2)] maps basis keys to integer coefficients of [g1, g2].
    """

    def __init__(self, rs, table):
        self.rs = rs
        self.table = table
        self.keys = (
            [("e", k) for k in range(rs.n_positive())]
            + [("h", i) for i in range(rs.rank)]
            + [("f", k) for k in range(rs.n_positive())]
        )

    def bracket(self, g1, g2):
        out = self.table.get((g1, g2))
        if out is not None:
            return out
        rev = self.table.get((g2, g1))
        if rev is not None:
            return {k: -c for k, c in rev.items()}
        return {}

    def bracket_elem(self, d1, d2):
        """Bracket of two g-elements given as {key: coeff} dicts."""
        out = {}
        for g1, c1 in d1.items():
            for g2, c2 in d2.items():
                for k, c in self.bracket(g1, g2).items():
                    nv = out.get(k, 0) + c1 * c2 * c
                    if nv == 0:
                        out.pop(k, None)
                    else:
                        out[k] = nv
        return out

    def key_weight(self, g):
        kind, idx = g
        if kind == "h":
            return Weight(tuple(Q(0) for _ in range(self.rs.rank)))
        w = self.rs.root_weight(idx)
        return w if kind == "e" else w.scale(-1)

    def jacobi_residual(self, a, b, c):
        acc = {}
        for x, y, z in ((a, b, c), (b, c, a), (c, a, b)):
            inner = self.bracket(x, y)
            for k, co in self.bracket_elem(inner, {z: 1}).items():
                nv = acc.get(k, 0) + co
                if nv == 0:
                    acc.pop(k, None)
                else:
                    acc[k] = nv
        return acc

    def check_jacobi_all(self):
        """Exhaustive Jacobi check; returns the number of triples tested."""
        n = 0
        for a, b, c in combinations(self.keys, 3):
            if self.jacobi_residual(a, b, c):
                raise AssertionError(f"Jacobi fails on {a}, {b}, {c}")
            n += 1
        return n

    def to_json(self):
        keys = [list(k) for k in self.keys]
        kid = {tuple(k): i for i, k in enumerate(keys)}
        brackets = []
        for (g1, g2), val in sorted(self.table.items(), key=lambda t: (kid[t[0][0]], kid[t[0][1]])):
            entry = sorted((kid[k], int(c)) for k, c in val.items())
            brackets.append([kid[g1], kid[g2], entry])
        doc = {
            "type": f"{self.rs.series}{self.rs.rank}",
            "positive_roots": [list(g) for g in self.rs.positive_roots],
            "cartan": [list(r) for r in self.rs.cartan],
            "keys": keys,
            "brackets": brackets,
        }
        return json.dumps(doc, sort_keys=True, indent=1)


def _orientation(series, rank):
    """sigma-invariant edge orientation used by the sign cocycle."""
    if series == "A":
        # orient toward the middle node so the chain flip preserves arrows
        out = set()
        for i in range(rank - 1):
            out.add((i, i + 1) if i <= rank - 2 - i else (i + 1, i))
        return out
    if series == "D":
        out = {(i, i + 1) for i in range(rank - 2)}
        out.add((rank - 3, rank - 1))
        return out
    if series == "D4G":  # D4 oriented outer -> center for the triality fold
        return {(0, 1), (2, 1), (3, 1)}
    if series == "E":
        return {(0, 2), (2, 3), (5, 4), (4, 3), (1, 3)}
    raise UnsupportedTypeError(series)


class _SignCocycle:
    """Bimultiplicative sign on the root lattice from an oriented diagram."""

    def __init__(self, rank, oriented_edges):
        self.rank = rank
        self.flag = [[False] * rank for _ in range(rank)]
        for i in range(rank):
            self.flag[i][i] = True
        for i, j in oriented_edges:
            self.flag[i][j] = True

    def eps(self, a, b):
        s = 0
        for i in range(self.rank):
            if a[i] == 0:
                continue
            row = self.flag[i]
            for j in range(self.rank):
                if b[j] != 0 and row[j]:
                    s += a[i] * b[j]
        return -1 if s % 2 else 1


def _neg(t):
    return tuple(-x for x in t)


def _vec_add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _simply_laced_x_bracket(rootset, eps, a, b):
    """Bracket [x_a, x_b] in parent coordinates: dict with 'x'/'ph' keys."""
    s = _vec_add(a, b)
    if all(v == 0 for v in s):
        sign = eps.eps(a, _neg(a))
        out = {}
        for i, c in enumerate(a):
            if c:
                out[("ph", i)] = sign * c
        return out
    if s in rootset:
        return {("x", s): eps.eps(a, b)}
    return {}


def _parent_bracket(rootset, eps, cartan, k1, k2):
    """Bracket of parent basis keys ('x', tuple) / ('ph', i)."""
    t1, t2 = k1[0], k2[0]
    if t1 == "ph" and t2 == "ph":
        return {}
    if t1 == "ph":
        i = k1[1]
        a = k2[1]
        pair = sum(a[j] * cartan[i][j] for j in range(len(cartan)))
        return {k2: pair} if pair else {}
    if t2 == "ph":
        out = _parent_bracket(rootset, eps, cartan, k2, k1)
        return {k: -c for k, c in out.items()}
    return _simply_laced_x_bracket(rootset, eps, k1[1], k2[1])


def _fold_spec(series, rank):
    """(parent series key, parent rank, node permutation sigma)."""
    if series in ("A", "D"):
        return series, rank, tuple(range(rank))
    if series == "C":
        pr = 2 * rank - 1
        return "A", pr, tuple(pr - 1 - i for i in range(pr))
    if series == "B":
        pr = rank + 1
        sigma = list(range(pr))
        sigma[pr - 2], sigma[pr - 1] = pr - 1, pr - 2
        return "D", pr, tuple(sigma)
    if series == "G":
        return "D4G", 4, (2, 1, 3, 0)  # triality 0 -> 2 -> 3 -> 0, center 1 fixed
    if series == "F":
        return "E", 6, (5, 1, 4, 3, 2, 0)  # flip 0<->5, 2<->4
    raise UnsupportedTypeError(series)


def build_chevalley_basis(rs):
    """Chevalley basis via the sign cocycle, folded for non-simply-laced types."""
    pseries, prank, sigma = _fold_spec(rs.series, rs.rank)
    base_series = "D" if pseries == "D4G" else pseries
    pcartan = cartan_matrix(base_series, prank)
    ppos = _enumerate_positive_roots(pcartan)
    prootset = set(ppos) | {_neg(g) for g in ppos}
    eps = _SignCocycle(prank, _orientation(pseries, prank))

    def sig_vec(t):
        out = [0] * prank
        for i, c in enumerate(t):
            out[sigma[i]] = c
        return tuple(out)

    # sigma must preserve the parent diagram and the orientation signs
    for i in range(prank):
        for j in range(prank):
            if pcartan[i][j] != pcartan[sigma[i]][sigma[j]]:
                raise AssertionError("fold permutation is not a diagram automorphism")
            if eps.flag[i][j] != eps.flag[sigma[i]][sigma[j]]:
                raise AssertionError("orientation is not sigma-invariant")

    # orbits of parent positive roots
    orbits = []
    seen = set()
    for g in ppos:
        if g in seen:
            continue
        orb = []
        cur = g
        while cur not in seen:
            seen.add(cur)
            orb.append(cur)
            cur = sig_vec(cur)
        orbits.append(tuple(sorted(orb)))

    # node orbits give the folded simple coroots
    node_orbits = []
    nseen = set()
    for i in range(prank):
        if i in nseen:
            continue
        orb = []
        cur = i
        while cur not in nseen:
            nseen.add(cur)
            orb.append(cur)
            cur = sigma[cur]
        node_orbits.append(tuple(sorted(orb)))
    node_orbits.sort()
    if rs.series == "C":
        # orbit order {0,2n-2}, ..., {n-1}: ascending by min element matches C labels
        node_orbits.sort(key=min)
    if rs.series == "F":
        # folded chain is {1} - {3} - {2,4} - {0,5}
        node_orbits = [(1,), (3,), (2, 4), (0, 5)]
    if rs.series == "G":
        node_orbits = [(0, 2, 3), (1,)]
    if rs.series == "B":
        node_orbits = [tuple([i]) for i in range(prank - 2)] + [(prank - 2, prank - 1)]

    from .linalg import solve

    def folded_coords(prep):
        """Coordinates of the folded root that a parent orbit restricts to."""
        vals = []
        for orb in node_orbits:
            vals.append(Q(sum(sum(prep[l] * pcartan[j][l] for l in range(prank)) for j in orb)))
        mat = [[Q(rs.cartan[i][k]) for k in range(rs.rank)] for i in range(rs.rank)]
        sol = solve(mat, vals)
        coords = []
        for v in sol:
            if v.denominator != 1:
                raise AssertionError("orbit does not restrict to a lattice point")
            coords.append(int(v))
        return tuple(coords)

    orbit_of_root = {}
    for orb in orbits:
        c = folded_coords(orb[0])
        if c not in rs.root_index:
            raise AssertionError("orbit does not match a folded positive root")
        if c in orbit_of_root:
            raise AssertionError("two orbits fold to the same root")
        orbit_of_root[c] = orb
    if len(orbit_of_root) != rs.n_positive():
        raise AssertionError("orbit/root mismatch after folding")

    # folded basis elements in parent coordinates
    def gen_vec(key):
        kind, idx = key
        if kind == "h":
            return {("ph", j): 1 for j in node_orbits[idx]}
        orb = orbit_of_root[rs.positive_roots[idx]]
        if kind == "e":
            return {("x", b): 1 for b in orb}
        return {("x", _neg(b)): -1 for b in orb}

    def pbracket_elem(d1, d2):
        out = {}
        for k1, c1 in d1.items():
            for k2, c2 in d2.items():
                for k, c in _parent_bracket(prootset, eps, pcartan, k1, k2).items():
                    nv = out.get(k, 0) + c1 * c2 * c
                    if nv == 0:
                        out.pop(k, None)
                    else:
                        out[k] = nv
        return out

    # expansion of a sigma-fixed parent vector over the folded basis
    neg_index = {}
    pos_index = {}
    for coords, orb in orbit_of_root.items():
        ridx = rs.root_index[coords]
        for b in orb:
            pos_index[b] = (ridx, orb)
            neg_index[_neg(b)] = (ridx, orb)
    node_orbit_of = {}
    for oi, orb in enumerate(node_orbits):
        for j in orb:
            node_orbit_of[j] = (oi, orb)

    def expand(vec):
        out = {}
        done = set()
        for k, c in vec.items():
            if k in done:
                continue
            if k[0] == "ph":
                oi, orb = node_orbit_of[k[1]]
                for j in orb:
                    if vec.get(("ph", j), 0) != c:
                        raise AssertionError("folded bracket not sigma-symmetric")
                    done.add(("ph", j))
                out[("h", oi)] = c
            else:
                t = k[1]
                if t in pos_index:
                    ridx, orb = pos_index[t]
                    for b in orb:
                        if vec.get(("x", b), 0) != c:
                            raise AssertionError("folded bracket not sigma-symmetric")
                        done.add(("x", b))
                    out[("e", ridx)] = c
                else:
                    ridx, orb = neg_index[t]
                    for b in orb:
                        if vec.get(("x", _neg(b)), 0) != c:
                            raise AssertionError("folded bracket not sigma-symmetric")
                        done.add(("x", _neg(b)))
                    out[("f", ridx)] = -c
        return out

    keys = (
        [("e", k) for k in range(rs.n_positive())]
        + [("h", i) for i in range(rs.rank)]
        + [("f", k) for k in range(rs.n_positive())]
    )
    table = {}
    for i, g1 in enumerate(keys):
        v1 = gen_vec(g1)
        for g2 in keys[i + 1:]:
            val = expand(pbracket_elem(v1, gen_vec(g2)))
            if val:
                table[(g1, g2)] = val

    cb = ChevalleyBasis(rs, table)
    # structural certification: [e_g, f_g] = h_g for every positive root
    for k in range(rs.n_positive()):
        got = cb.bracket(("e", k), ("f", k))
        want = {("h", i): c for i, c in enumerate(rs.coroot_coeffs(k)) if c}
        if got != want:
            raise AssertionError(f"[e, f] != coroot at root {k}")
    return cb


# -- parabolic data ---------------------------------------------------------


@dataclass(frozen=True)
class ParabolicData:
    """Standard parabolic given by a set Sigma of simple-root indices."""

    rs: RootSystem
    sigma: frozenset
    delta_u: tuple
    delta_l: tuple
    rho_u: Weight

    def is_levi_root(self, idx):
        return idx in set(self.delta_l)


def build_parabolic(rs, sigma):
    sigma = frozenset(int(i) for i in sigma)
    for i in sigma:
        if not 0 <= i < rs.rank:
            raise ValueError(f"simple-root index {i} out of range")
    delta_l = []
    delta_u = []
    for k, g in enumerate(rs.positive_roots):
        if all((m == 0 or i in sigma) for i, m in enumerate(g)):
            delta_l.append(k)
        else:
            delta_u.append(k)
    two_rho_u = [0] * rs.rank
    for k in delta_u:
        for i, m in enumerate(rs.positive_roots[k]):
            two_rho_u[i] += m
    rho_u = Weight(tuple(Q(x, 2) for x in two_rho_u))
    return ParabolicData(rs, sigma, tuple(delta_u), tuple(delta_l), rho_u)


def is_p_dominant(rs, lam, p):
    """lambda(h_a) a nonnegative integer for every simple a in Sigma."""
    for i in sorted(p.sigma):
        v = rs.pairing(lam, rs.simple_indices()[i])
        if v.denominator != 1 or v < 0:
            return False
    return True


def compute_phi_alpha(rs, alpha_idx):
    """Roots g != +-a whose whole a-string through g lies in the positive part."""
    if not 0 <= alpha_idx < rs.n_positive():
        raise ValueError("alpha is not a positive root")
    alpha = rs.positive_roots[alpha_idx]
    allroots = set(rs.positive_roots) | {_neg(g) for g in rs.positive_roots}
    out = set()
    for k, g in enumerate(rs.positive_roots):
        if k == alpha_idx:
            continue
        ok = True
        for j in range(-6, 7):
            s = tuple(x + j * y for x, y in zip(g, alpha))
            if s in allroots and s not in rs.root_index:
                ok = False
                break
        if ok:
            out.add(k)
    return frozenset(out)
