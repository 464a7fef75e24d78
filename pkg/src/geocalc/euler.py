"""Euler's number from a cascade, and logarithms built on it.

A cascade with cos C = n/(n+1) and unit perpendicular has depth-n length
(n/(n+1))**n = 1/(1+1/n)**n, so its reciprocal walks the classic
compound-interest approach to e from below.  Natural logs are exponent
recoveries against that internal base; antilog runs the recovery
backwards through a rational power.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction
from functools import lru_cache

from .cascade import _mantissa_power, multiply, power, reciprocal
from .errors import DomainError
from .exponents import (DEFAULT_MAX_DEPTH, evaluate_cf,
                        recover_rational_exponent)
from .numcore import DEFAULT_POLICY, PrecisionPolicy, SignedScaled
from .roots import rational_power

_ONE = Decimal(1)

# e to 40 digits, for the analytic error bound only
_E_REF = Decimal("2.718281828459045235360287471352662497757")

INTERNAL_E_STEPS = 10 ** 8
_CONVERGENT_DEN_CAP = 10 ** 9


@dataclass(frozen=True)
class EulerApprox:
    """One rung of the (1+1/n)**n ladder with its error bound."""

    n_steps: int
    value: Decimal
    error_bound: Decimal

    def __post_init__(self):
        if self.n_steps < 1:
            raise DomainError("n_steps must be at least 1")
        if not self.value < _E_REF:
            raise DomainError("approximation must stay below e")


def approximate_e(n_steps: int,
                  policy: PrecisionPolicy = DEFAULT_POLICY) -> EulerApprox:
    """(1 + 1/n)**n via the cascade with cos C = n/(n+1)."""
    if n_steps < 1:
        raise DomainError("n_steps must be at least 1")
    ctx = policy.ctx()
    n = Decimal(n_steps)
    cos_c = ctx.divide(n, ctx.add(n, _ONE))
    p_n = _mantissa_power(cos_c, n_steps, ctx, None)
    value = ctx.divide(_ONE, p_n)
    bound = ctx.divide(_E_REF, 2 * n)
    return EulerApprox(n_steps=n_steps, value=value, error_bound=bound)


@lru_cache(maxsize=8)
def internal_e(policy: PrecisionPolicy = DEFAULT_POLICY) -> SignedScaled:
    """The package's own Euler base (1 + 1e-8)**1e8, built once per policy."""
    return SignedScaled.from_decimal(
        approximate_e(INTERNAL_E_STEPS, policy).value)


def natural_log(a: SignedScaled, depth: int = DEFAULT_MAX_DEPTH,
                policy: PrecisionPolicy = DEFAULT_POLICY) -> Decimal:
    """ln(a) relative to the internal Euler base (bias below 2e-8).

    Returns a plain Decimal: a logarithm, unlike a cascade length, can
    legitimately be zero.
    """
    if a.sign < 0:
        raise DomainError("logarithm of a negative value")
    if a.is_unit:
        return Decimal(0)
    if a.value() < 1:
        inv = reciprocal(a, policy=policy)
        return natural_log(inv, depth=depth, policy=policy).copy_negate()
    e = internal_e(policy)
    cf = recover_rational_exponent(e, a, max_depth=depth, policy=policy,
                                   max_term=10 ** 12)
    val = evaluate_cf(cf)
    if val == 0:
        raise DomainError("log recovery truncated to zero")
    ctx = policy.ctx()
    return ctx.divide(Decimal(val.numerator), Decimal(val.denominator))


def antilog(t, policy: PrecisionPolicy = DEFAULT_POLICY) -> SignedScaled:
    """exp(t) for a Decimal or SignedScaled exponent, via the internal base."""
    td = t.value() if isinstance(t, SignedScaled) else Decimal(t)
    if td == 0:
        return SignedScaled(1, Decimal("0.1"), 1)
    if td < 0:
        pos = antilog(td.copy_negate(), policy=policy)
        return reciprocal(pos, policy=policy)
    e = internal_e(policy)
    ctx = policy.ctx()
    whole = int(td)
    frac = ctx.subtract(td, Decimal(whole))
    if frac == 0:
        return power(e, whole, policy=policy)
    # cap the convergent denominator so the root index stays tractable;
    # the replacement error is below 1e-9 relative
    approx = Fraction(frac).limit_denominator(_CONVERGENT_DEN_CAP)
    part = rational_power(e, approx.numerator, approx.denominator,
                          policy=policy, strategy="split",
                          max_abs_exponent=_CONVERGENT_DEN_CAP)
    if whole == 0:
        return part
    return multiply(power(e, whole, policy=policy), part, policy=policy)
