"""Roots and rational powers driven by cosine search."""

import random
from decimal import Decimal

import pytest

from geocalc import (DEFAULT_POLICY, DomainError, EvenRootOfNegative,
                     RootQuery, TraceRecorder, normalize, nth_root,
                     oracle_eval, power, rational_power, rel_diff,
                     solve_cos_power)

POL = DEFAULT_POLICY
ORACLE_CTX = POL.oracle_ctx()


def rel(got, want) -> Decimal:
    return rel_diff(got.value(), want.value(), ORACLE_CTX)


def test_exact_roots():
    for text, n, want in [("4", 2, "2"), ("27", 3, "3"), ("0.25", 2, "0.5"),
                          ("1024", 10, "2")]:
        got = nth_root(RootQuery(normalize(text), n), POL)
        assert rel_diff(got.value(), Decimal(want),
                        ORACLE_CTX) <= Decimal("1e-25")


def test_root_of_negative_radicand():
    got = nth_root(RootQuery(normalize("-8"), 3), POL)
    assert got.sign == -1
    assert rel_diff(got.value(), Decimal(-2), ORACLE_CTX) <= Decimal("1e-25")
    with pytest.raises(EvenRootOfNegative):
        nth_root(RootQuery(normalize("-4"), 2), POL)


def test_root_index_one_is_identity():
    x = normalize("0.37e5")
    assert nth_root(RootQuery(x, 1), POL) == x


def test_root_index_must_be_positive():
    with pytest.raises(DomainError):
        nth_root(RootQuery(normalize("2"), 0), POL)
    with pytest.raises(DomainError):
        nth_root(RootQuery(normalize("2"), -3), POL)


def test_sixth_root_worked_value():
    # frozen from a 60-digit reference computation
    want = Decimal("13469.5566088142231314550250910414987657")
    got = nth_root(RootQuery(normalize("0.5972e25"), 6), POL)
    assert rel_diff(got.value(), want, ORACLE_CTX) <= Decimal("1e-20")


def test_root_exponent_residue_paths():
    # exponent not divisible by the index exercises the residue factor
    for text, n in [("1e7", 3), ("2.5e11", 5), ("0.004", 7), ("3.1e-8", 4)]:
        x = normalize(text)
        got = nth_root(RootQuery(x, n), POL)
        want = oracle_eval("root", (x, n), POL)
        assert rel(got, want) <= Decimal("1e-20")


def test_root_trace_ends_with_cosine_measure():
    rec = TraceRecorder()
    nth_root(RootQuery(normalize("0.5972e25"), 6), POL, recorder=rec)
    kinds = [s.kind for s in rec.steps]
    assert "rotate-hypotenuse" in kinds
    assert rec.steps[-1].kind == "measure-length"
    assert rec.steps[-1].get("segment") == "cosine"


def test_solve_cos_power_matches_oracle():
    target = Decimal("0.4")
    c = solve_cos_power(5, target, POL.ctx(), POL.rel_tol)
    want = ORACLE_CTX.power(target, ORACLE_CTX.divide(Decimal(1), Decimal(5)))
    assert rel_diff(c, want, ORACLE_CTX) <= Decimal("1e-25")


def test_rational_power_strategies_agree():
    cases = [("0.5972e25", 19, 7), ("2", 3, 2), ("81.274", -2, 3),
             ("0.004", 5, 4)]
    for text, m, n in cases:
        x = normalize(text)
        a = rational_power(x, m, n, POL, strategy="compose")
        b = rational_power(x, m, n, POL, strategy="split")
        assert rel_diff(a.value(), b.value(), ORACLE_CTX) <= Decimal("1e-10")
        want = oracle_eval("powfrac", (x, m, n), POL)
        assert rel(a, want) <= Decimal("1e-10")


def test_rational_power_worked_value():
    # frozen from a 60-digit reference computation
    want = Decimal("1.77610250174044150690047146817516100989822980612e67")
    got = rational_power(normalize("0.5972e25"), 19, 7, POL)
    assert rel_diff(got.value(), want, ORACLE_CTX) <= Decimal("1e-15")


def test_rational_power_reductions():
    x = normalize("7.3")
    whole = rational_power(x, 6, 3, POL)
    assert rel(whole, power(x, 2, POL)) <= Decimal("1e-20")
    half = rational_power(x, 2, 4, POL)
    root2 = nth_root(RootQuery(x, 2), POL)
    assert rel(half, root2) <= Decimal("1e-15")


def test_rational_power_negative_exponent():
    x = normalize("2")
    got = rational_power(x, -3, 2, POL)
    want = oracle_eval("powfrac", (x, -3, 2), POL)
    assert rel(got, want) <= Decimal("1e-10")


def test_rational_power_domain_errors():
    with pytest.raises(EvenRootOfNegative):
        rational_power(normalize("-2"), 1, 2, POL)
    with pytest.raises(DomainError):
        rational_power(normalize("2"), 1, 0, POL)


def test_root_power_round_trip_seeded():
    rng = random.Random(606)
    for _ in range(60):
        x = normalize(f"0.{rng.randint(10**8, 10**9 - 1)}e{rng.randint(-5, 5)}")
        n = rng.randint(2, 9)
        y = power(x, n, POL)
        back = nth_root(RootQuery(y, n), POL)
        assert rel(back, x) <= Decimal("1e-10")
