"""Roots and rational powers by angle search.

An nth root is the cascade run in reverse: find the apex cosine whose
depth-n perpendicular equals the radicand mantissa.  The objective
cos**n C is monotone on (0, 1), so a bracketed bisection suffices.  The
radicand's exponent splits as E = n*k + r; the 10**(r/n) residue is
itself a root search on 10**-r.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import Context, Decimal

from .cascade import _mantissa_power, divide, multiply, power
from .errors import DomainError, EvenRootOfNegative
from .numcore import (DEFAULT_POLICY, PrecisionPolicy, SignedScaled,
                      oracle_eval, renormalized)
from .trace import TraceRecorder

_ONE = Decimal(1)
_TWO = Decimal(2)
_TENTH = Decimal("0.1")

_SEARCH_CAP = 200


@dataclass(frozen=True)
class RootQuery:
    """Radicand and index, optionally with the radicand given as l/m."""

    radicand: SignedScaled
    index: int
    numerator_form: tuple[SignedScaled, SignedScaled] | None = None

    def __post_init__(self):
        if self.index < 1:
            raise DomainError("root index must be at least 1")
        sign = (self.numerator_form[0].sign * self.numerator_form[1].sign
                if self.numerator_form else self.radicand.sign)
        if sign < 0 and self.index % 2 == 0:
            raise EvenRootOfNegative(
                f"index {self.index} root of a negative radicand")


def solve_cos_power(n: int, target: Decimal, ctx: Context, rel_tol: Decimal,
                    recorder: TraceRecorder | None = None,
                    watch=None) -> Decimal:
    """Cosine c with c**n == target, 0 < target < 1, by bisection.

    `watch`, when given, sees (lo, hi, f_lo, f_hi) each iteration; the
    bracket always satisfies f(hi) >= target >= f(lo).
    """
    if not (0 < target < 1):
        raise DomainError("bisection target must be in (0, 1)")
    lo = Decimal("1e-15")
    hi = _ONE - Decimal("1e-15")
    nn = Decimal(n)
    c = None
    for i in range(_SEARCH_CAP):
        if watch is not None:
            watch(lo, hi, ctx.power(lo, nn), ctx.power(hi, nn))
        c = ctx.divide(ctx.add(lo, hi), _TWO)
        p = ctx.power(c, nn)
        if recorder is not None and i < 4:
            recorder.rotate("C", c, i)
        err = ctx.subtract(p, target)
        if err.copy_abs() <= rel_tol * target:
            break
        if p > target:
            hi = c
        else:
            lo = c
        if ctx.subtract(hi, lo) <= rel_tol * lo:
            c = ctx.divide(ctx.add(lo, hi), _TWO)
            break
    return c


def nth_root(query: RootQuery,
             policy: PrecisionPolicy = DEFAULT_POLICY,
             backend: str = "construction",
             recorder: TraceRecorder | None = None) -> SignedScaled:
    """Principal nth root (negative radicand allowed for odd n)."""
    x = query.radicand
    if query.numerator_form is not None:
        l, m = query.numerator_form
        x = divide(l, m, policy=policy, backend=backend, recorder=recorder)
    n = query.index
    if n == 1:
        return x
    sign = x.sign
    if backend == "oracle":
        return oracle_eval("root", (x, n), policy)
    if x.magnitude().is_unit:
        return x  # |x| == 1: the root is x itself for any valid index
    ctx = policy.ctx()
    r = x.exponent % n
    k = (x.exponent - r) // n
    c_m = solve_cos_power(n, x.mantissa, ctx, policy.rel_tol, recorder)
    if recorder is not None:
        # verification cascade at the accepted angle
        _mantissa_power(c_m, n, ctx, recorder)
        recorder.measure("cosine", c_m)
    if r:
        # 10**(r/n) = 1 / (10**-r)**(1/n)
        c_r = solve_cos_power(n, Decimal(1).scaleb(-r), ctx,
                              policy.rel_tol, None)
        mant = ctx.divide(c_m, c_r)
    else:
        mant = c_m
    result = renormalized(sign, mant, k)
    _assert_root_between(x, result)
    return result


def _assert_root_between(x: SignedScaled, root: SignedScaled):
    """A root of |x| != 1 lies strictly between |x| and 1."""
    xm = x.value().copy_abs()
    rm = root.value().copy_abs()
    lo, hi = (xm, _ONE) if xm < 1 else (_ONE, xm)
    if not (lo < rm < hi):
        raise DomainError("root escaped the monotonicity interval")


def rational_power(x: SignedScaled, m: int, n: int,
                   policy: PrecisionPolicy = DEFAULT_POLICY,
                   backend: str = "construction",
                   recorder: TraceRecorder | None = None,
                   strategy: str = "compose",
                   max_abs_exponent: int | None = None) -> SignedScaled:
    """x**(m/n) with n >= 1; negative x requires odd n."""
    if n < 1:
        raise DomainError("fractional power denominator must be positive")
    if x.sign < 0 and n % 2 == 0:
        raise EvenRootOfNegative(f"denominator {n} with a negative base")
    if m == 0:
        return SignedScaled(1, _TENTH, 1)
    if backend == "oracle":
        return oracle_eval("powfrac", (x, m, n), policy)
    cap = {} if max_abs_exponent is None else {"max_abs_exponent": max_abs_exponent}
    if strategy == "compose":
        y = power(x, m, policy=policy, backend=backend, recorder=recorder,
                  **cap)
        return nth_root(RootQuery(y, n), policy=policy, backend=backend,
                        recorder=recorder)
    if strategy == "split":
        # m/n = m1 + m2/n with 0 <= m2 < n, so only a sub-unit root is
        # raised to a power below the index
        m1, m2 = divmod(m, n)
        root = (nth_root(RootQuery(x, n), policy=policy, backend=backend,
                         recorder=recorder) if m2 else None)
        frac = (power(root, m2, policy=policy, backend=backend,
                      recorder=recorder, **cap) if m2 and m2 != 1 else root)
        whole = (power(x, m1, policy=policy, backend=backend,
                       recorder=recorder, **cap) if m1 else None)
        if whole is None:
            return frac
        if frac is None:
            return whole
        return multiply(whole, frac, policy=policy, backend=backend,
                        recorder=recorder)
    raise DomainError(f"unknown strategy {strategy!r}")
