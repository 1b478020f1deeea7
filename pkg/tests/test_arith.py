"""Integer arithmetic helpers: factorization and part extraction."""
import math

from hypothesis import given, settings
from hypothesis import strategies as st

from bbsl2.arith import coprime_part, factorint, is_prime, odd_part, p_part


def _trial_division(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def test_factorint_frozen_group_orders():
    # |GL2(13)| and the global exponents the pipelines factor routinely
    assert factorint(2184) == {2: 3, 3: 1, 7: 1, 13: 1}
    assert factorint(26208) == {2: 5, 3: 2, 7: 1, 13: 1}
    assert factorint(240) == {2: 4, 3: 1, 5: 1}
    assert factorint(28560) == {2: 4, 3: 1, 5: 1, 7: 1, 17: 1}


@given(st.integers(min_value=2, max_value=10**12))
@settings(max_examples=150, deadline=None)
def test_factorint_matches_trial_division_and_rebuilds(n):
    f = factorint(n)
    assert math.prod(p**e for p, e in f.items()) == n
    assert all(is_prime(p) for p in f)
    if n < 10**6:
        assert f == _trial_division(n)


@given(st.integers(min_value=2, max_value=200_000))
@settings(max_examples=200, deadline=None)
def test_is_prime_matches_trial_division(n):
    assert is_prime(n) == (_trial_division(n) == {n: 1})


@given(st.integers(min_value=1, max_value=10**9), st.sampled_from([2, 3, 5, 13]))
@settings(max_examples=150, deadline=None)
def test_part_decomposition(n, p):
    pp, cp = p_part(n, p), coprime_part(n, p)
    assert pp * cp == n
    assert cp % p != 0
    while pp % p == 0:  # pp must be a pure power of p
        pp //= p
    assert pp == 1


def test_odd_part():
    assert odd_part(96) == 3
    assert odd_part(13) == 13
    assert odd_part(1) == 1
