import json

import pytest
from hypothesis import given, settings, strategies as st

import qfb

nonzero = st.integers(min_value=-2000, max_value=2000).filter(lambda v: v != 0)


def primes_of(n):
    n, ps, p = abs(n), {2}, 2
    while p * p <= n:
        while n % p == 0:
            ps.add(p)
            n //= p
        p += 1
    if n > 1:
        ps.add(n)
    return ps


@settings(max_examples=60, deadline=None)
@given(nonzero, nonzero)
def test_hilbert_product_formula(a, b):
    prod = qfb.hilbert(str(a), str(b), 0)
    for p in primes_of(a) | primes_of(b):
        prod *= qfb.hilbert(str(a), str(b), p)
    assert prod == 1


@settings(max_examples=40, deadline=None)
@given(nonzero, nonzero, nonzero, st.sampled_from([0, 2, 3, 5, 7]))
def test_hilbert_bimultiplicative(a, b, c, p):
    assert qfb.hilbert(str(a), str(b * c), p) == qfb.hilbert(str(a), str(b), p) * qfb.hilbert(str(a), str(c), p)


def test_classify_branches():
    assert qfb.classify("Q", "<1,1,1,1,1,1,1,1>")["branch"] == "GP3"
    assert qfb.classify("Q", "<1,1,1,1,1,1,3,3>")["branch"] == "pfister-multiple"
    r = qfb.classify("R((x))((y))", "<1,1,1,1,1,-x,-y,x*y>")
    assert r["branch"] == "transfer-needed"
    assert r["index"] == 4


def test_transfer_and_index():
    assert qfb.transfer("Q(sqrt 2)", "<1>") == "<2, 4>"
    assert qfb.index("R((x))((y))", "(-1,-1) + (x,y)") == 4
    assert qfb.index("Q", "(-1,-1)") == 2


def test_construct_round_trip():
    r = qfb.construct("R((x))((y))", "<1,1,1,1,1,-x,-y,x*y>")
    assert r["verified"]
    assert "x" in r["ext"]


def test_errors():
    with pytest.raises(qfb.QfbError, match="Parse"):
        qfb.classify("Q", "<1,,2>")
    with pytest.raises(ValueError):
        qfb.transfer("Q", "<1>")


def test_cli_selftest_is_reproducible():
    a = qfb.run_cli(["selftest", "--seed", "0"])
    b = qfb.run_cli(["selftest", "--seed", "0"])
    assert a[0] == 0
    assert a[1] == b[1]
    assert json.loads(a[1])["schema"] == 1
