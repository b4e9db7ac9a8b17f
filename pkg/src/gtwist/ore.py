"""Ore localization of U(g) at the powers of a single lowering generator.

A LocalElement is a finite sum  sum_n f_a^{-n} u_n  with u_n in U(g);
canonical form pulls every stray power of f_a out of u_n for n > 0.  The
underlying PBW context must order the f-block with the localized root
first, so absorbing f_a powers is a shift of the leading exponent slot.
"""

from __future__ import annotations

from fractions import Fraction as Q

from . import pbw


def binom_rat(nu, k):
    """Binomial C(nu + k - 1, k) for rational nu, as an exact rational."""
    nu = Q(nu)
    out = Q(1)
    for j in range(k):
        out *= (nu + k - 1 - j) / (j + 1)
    return out


class OreContext:
    """Localization data: a PBW context whose f-block starts with alpha."""

    def __init__(self, cb, alpha_idx):
        rs = cb.rs
        order = [alpha_idx] + [k for k in range(rs.n_positive()) if k != alpha_idx]
        self.ctx = pbw.PBWContext(cb, f_order=order)
        self.alpha = alpha_idx
        self.f_key = ("f", alpha_idx)

    def ad_f(self, u):
        return self.ctx.ad(self.ctx.elem(self.f_key), u)


class LocalElement:
    """Finite sum of f_alpha^{-n} u_n in canonical form."""

    def __init__(self, ore, terms=None):
        self.ore = ore
        self.terms = {}
        if terms:
            for n, u in terms.items():
                for m, c in u.items():
                    self._push(n, m, c)
        self._prune()

    def _push(self, n, mono, coeff):
        # absorb the f_alpha exponent of the monomial into the prefix power
        b = mono[0]
        if n > 0 and b > 0:
            mm = (0,) + mono[1:]
            if b >= n:
                mono = (b - n,) + mono[1:]
                n = 0
            else:
                mono = mm
                n = n - b
        bucket = self.terms.setdefault(n, {})
        nv = bucket.get(mono, Q(0)) + coeff
        if nv == 0:
            bucket.pop(mono, None)
        else:
            bucket[mono] = nv

    def _prune(self):
        self.terms = {n: u for n, u in self.terms.items() if u}

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        return self.ore is other.ore and self.terms == other.terms

    def __add__(self, other):
        out = LocalElement(self.ore, self.terms)
        for n, u in other.terms.items():
            for m, c in u.items():
                out._push(n, m, c)
        out._prune()
        return out

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        c = Q(c)
        return LocalElement(
            self.ore, {n: {m: c * v for m, v in u.items()} for n, u in self.terms.items()}
        )

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for n in sorted(self.terms):
            body = pbw.pretty(self.ore.ctx, self.terms[n])
            bits.append(f"f^-{n}·[{body}]" if n else f"[{body}]")
        return " + ".join(bits)


def lift(ore, u):
    """U(g) element as a LocalElement."""
    return LocalElement(ore, {0: dict(u)})


def f_inverse_power(ore, n):
    """f_alpha^{-n}."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    return LocalElement(ore, {n: {ore.ctx.unit: Q(1)}})


def left_commute(ore, a, n):
    """Canonical form of a · f_alpha^{-n} via the closed binomial rewriting.

    a f^{-n} = f^{-n} sum_k C(n+k-1, k) f^{-k} ad(f)^k(a); the sum is finite
    by local ad-nilpotence of f_alpha.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    terms = {}
    cur = dict(a)
    k = 0
    while cur:
        c = binom_rat(n, k)
        if c != 0:
            terms.setdefault(n + k, {})
            for m, v in cur.items():
                bucket = terms[n + k]
                nv = bucket.get(m, Q(0)) + c * v
                if nv == 0:
                    bucket.pop(m, None)
                else:
                    bucket[m] = nv
        cur = ore.ad_f(cur)
        k += 1
        if k > 200:
            raise AssertionError("ad-nilpotence bound exceeded in left_commute")
    return LocalElement(ore, terms)


def _move_past_inverses(ore, u, n):
    """u · f^{-n} as {power j: element} by n single-step rewritings.

    Deliberately independent of the closed binomial formula: iterates
    u f^{-1} = f^{-1} sum_k f^{-k} ad(f)^k(u) one inverse at a time.
    """
    cur = {0: dict(u)}
    for _ in range(n):
        nxt = {}
        for j, w in cur.items():
            body = dict(w)
            k = 0
            while body:
                dest = nxt.setdefault(j + 1 + k, {})
                for m, v in body.items():
                    nv = dest.get(m, Q(0)) + v
                    if nv == 0:
                        dest.pop(m, None)
                    else:
                        dest[m] = nv
                body = ore.ad_f(body)
                k += 1
                if k > 200:
                    raise AssertionError("ad-nilpotence bound exceeded")
        cur = {j: w for j, w in nxt.items() if w}
    return cur


def multiply_local(a, b):
    """Product of localized elements (same localization)."""
    if a.ore is not b.ore:
        raise ValueError("localization tag mismatch")
    ore = a.ore
    out = LocalElement(ore)
    for m, u in a.terms.items():
        for n, v in b.terms.items():
            moved = _move_past_inverses(ore, u, n)
            for j, w in moved.items():
                prod = ore.ctx.mul(w, v)
                for mono, c in prod.items():
                    out._push(m + j, mono, c)
    out._prune()
    return out


def theta(ore, nu, r):
    """Conjugation automorphism theta^nu = f^nu (.) f^-nu on a LocalElement.

    theta^nu(r) = sum_k C(nu+k-1, k) f^{-k} ad(f)^k(r); fixes f_alpha powers.
    """
    out = LocalElement(ore)
    for n, u in r.terms.items():
        cur = dict(u)
        k = 0
        while cur:
            c = binom_rat(nu, k)
            if c != 0:
                for m, v in cur.items():
                    out._push(n + k, m, c * v)
            cur = ore.ad_f(cur)
            k += 1
            if k > 200:
                raise AssertionError("ad-nilpotence bound exceeded in theta")
    out._prune()
    return out
