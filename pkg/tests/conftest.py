from fractions import Fraction as Q

import pytest

from gtwist import modules
from gtwist.roots import build_chevalley_basis, build_parabolic, build_root_system

_CACHE = {}


def algebra(series, rank):
    key = (series, rank)
    if key not in _CACHE:
        rs = build_root_system(series, rank)
        _CACHE[key] = (rs, build_chevalley_basis(rs))
    return _CACHE[key]


_CTX_CACHE = {}


def module_ctx(series, rank, sigma, lam_pairings, alpha="highest"):
    """Cached ModuleContext; alpha is 'highest', None (untwisted) or coords."""
    key = (series, rank, tuple(sigma), tuple(map(str, lam_pairings)), alpha)
    if key not in _CTX_CACHE:
        rs, cb = algebra(series, rank)
        p = build_parabolic(rs, sigma)
        lam = rs.weight_from_pairings([Q(x) for x in lam_pairings])
        if alpha is None:
            aidx = None
        elif alpha == "highest":
            aidx = rs.highest_root_index()
        else:
            aidx = rs.root_index[tuple(alpha)]
        _CTX_CACHE[key] = modules.ModuleContext(cb, p, lam, alpha_idx=aidx)
    return _CTX_CACHE[key]


@pytest.fixture(scope="session")
def a1():
    return algebra("A", 1)


@pytest.fixture(scope="session")
def a2():
    return algebra("A", 2)


@pytest.fixture(scope="session")
def a3():
    return algebra("A", 3)


@pytest.fixture(scope="session")
def c2():
    return algebra("C", 2)
