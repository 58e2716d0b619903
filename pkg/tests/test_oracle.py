import random
from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from shrink_mwisr.errors import ContractError, ResourceError
from shrink_mwisr.geom import Rect, is_independent, total_weight
from shrink_mwisr.oracle import (OracleConfig, _adjacency, mwis_bnb, mwis_exhaustive, mwis_k,
                                 opt_exact, opt_exhaustive, opt_k_exact)


def family_from(rows):
    return [Rect(i, x1, y1, x2, y2, w) for i, x1, y1, x2, y2, w in rows]


def random_family(rng, n, C=30, size=10, wmax=9):
    out = []
    for i in range(n):
        x, y = rng.randint(0, C), rng.randint(0, C)
        out.append(Rect(i, x, y, x + rng.randint(1, size), y + rng.randint(1, size),
                        rng.randint(0, wmax)))
    return out


def test_empty():
    assert opt_exact([]) == (0, [])
    assert opt_k_exact([], 3) == (0, [])


def test_triangle_takes_heaviest():
    fam = [Rect(i, 0, 0, 3 + i, 3, i + 1) for i in range(3)]
    val, sol = opt_exact(fam)
    assert val == 3 and [r.id for r in sol] == [2]


def test_k_zero_and_one():
    fam = [Rect(0, 0, 0, 1, 1, 4), Rect(1, 5, 5, 6, 6, 7)]
    assert opt_k_exact(fam, 0) == (0, [])
    val, sol = opt_k_exact(fam, 1)
    assert val == 7 and sol[0].id == 1


def test_zero_weight_members_left_out():
    fam = [Rect(0, 0, 0, 1, 1, 0), Rect(1, 5, 5, 6, 6, 2)]
    assert [r.id for r in opt_exact(fam)[1]] == [1]


def test_tie_goes_to_smallest_ids():
    # {0, 3} and {1, 2} both weigh 4
    fam = [Rect(0, 0, 0, 2, 2, 2), Rect(1, 1, 0, 3, 2, 2),
           Rect(2, 4, 0, 6, 2, 2), Rect(3, 2, 0, 5, 2, 2)]
    val, sol = opt_exact(fam)
    assert val == 4 and [r.id for r in sol] == [0, 2]
    assert [r.id for r in opt_exhaustive(fam)[1]] == [0, 2]
    assert [r.id for r in opt_k_exact(fam, 2)[1]] == [0, 2]


def test_fractional_weights():
    fam = [Rect(0, 0, 0, 1, 1, F(1, 2)), Rect(1, 2, 2, 3, 3, F(1, 3))]
    assert opt_exact(fam)[0] == F(5, 6)


def test_caps():
    fam = [Rect(i, 3 * i, 0, 3 * i + 1, 1) for i in range(5)]
    with pytest.raises(ResourceError):
        opt_exact(fam, OracleConfig(max_n=4))
    with pytest.raises(ResourceError):
        opt_k_exact(fam, 3, OracleConfig(max_n=4, max_k=2))
    assert opt_k_exact(fam, 2, OracleConfig(max_n=4, max_k=2))[0] == 2
    with pytest.raises(ResourceError):
        opt_exhaustive(fam, limit=4)
    with pytest.raises(ContractError):
        opt_k_exact(fam, -1)
    with pytest.raises(ContractError):
        OracleConfig(max_n=0)


def test_frozen_optima(frozen):
    for case in frozen["rect_cases"]:
        fam = family_from(case["rects"])
        val, sol = opt_exact(fam)
        assert val == case["opt"]
        assert total_weight(sol) == val and is_independent(sol)
        for k, want in zip((1, 2, 3), case["opt_k"]):
            vk, sk = opt_k_exact(fam, k)
            assert vk == want and len(sk) <= k and is_independent(sk)


@pytest.mark.parametrize("seed", range(40))
def test_matches_exhaustive_scan(seed):
    rng = random.Random(seed)
    fam = random_family(rng, 12)
    assert opt_exact(fam) == opt_exhaustive(fam)
    k = rng.randint(1, 4)
    assert opt_k_exact(fam, k) == opt_exhaustive(fam, k)


@given(st.integers(0, 10**6), st.integers(0, 14))
def test_slack_budget_equals_unbudgeted(seed, n):
    fam = random_family(random.Random(seed), n)
    assert opt_k_exact(fam, n)[0] == opt_exact(fam)[0]
    # mwis_k itself, not the bnb shortcut
    adj = _adjacency(fam)
    w = [r.weight for r in fam]
    assert mwis_k(w, adj, list(range(n)), n)[0] == mwis_bnb(w, adj, list(range(n)))[0]


@given(st.integers(0, 10**6))
def test_budget_monotone(seed):
    fam = random_family(random.Random(seed), 10)
    vals = [opt_k_exact(fam, k)[0] for k in range(5)]
    assert vals == sorted(vals)


def test_graph_level_solvers_agree_on_cycle():
    # 5-cycle with weights 1..5
    n = 5
    adj = [(1 << ((i + 1) % n)) | (1 << ((i - 1) % n)) for i in range(n)]
    w = [F(i + 1) for i in range(n)]
    keys = list(range(n))
    want = mwis_exhaustive(w, adj, keys)
    assert want == (8, [2, 4])
    assert mwis_bnb(w, adj, keys) == want
    assert mwis_k(w, adj, keys, 2) == want
    assert mwis_k(w, adj, keys, 1) == (5, [4])
