"""Exponent recovery: which power of x gives a?

Integer exponents come from stepping a cascade until it meets the
target.  Rational exponents m/n come from the Euclidean idea applied to
exponents: find the largest N with x**N still short of a, divide out,
and recurse on the residual with the roles of base and target swapped.
The partial quotients form a continued fraction for m/n.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import Context, Decimal
from fractions import Fraction

from .errors import DomainError, NoIntegerExponent
from .numcore import DEFAULT_POLICY, PrecisionPolicy, SignedScaled

_ONE = Decimal(1)

MAX_TERM = 10 ** 6
DEFAULT_MATCH_TOL = Decimal("1e-9")
DEFAULT_CF_TOL = Decimal("1e-12")
DEFAULT_MAX_DEPTH = 16


@dataclass(frozen=True)
class ContinuedFraction:
    """Partial quotients [N; N1, N2, ...] plus a termination flag.

    `terminated` means the recursion closed exactly (residual hit 1
    within tolerance); otherwise the listing is a truncation.
    """

    terms: tuple[int, ...]
    terminated: bool

    def __post_init__(self):
        if not self.terms:
            raise DomainError("a continued fraction needs at least one term")
        if self.terms[0] < 0:
            raise DomainError("leading term must be >= 0")
        if any(t < 1 for t in self.terms[1:]):
            raise DomainError("terms after the first must be >= 1")

    def to_text(self) -> str:
        head = str(self.terms[0])
        if len(self.terms) == 1:
            return f"[{head}]"
        return f"[{head}; " + ", ".join(str(t) for t in self.terms[1:]) + "]"

    @classmethod
    def from_text(cls, text: str, terminated: bool = True) -> "ContinuedFraction":
        s = text.strip()
        if not (s.startswith("[") and s.endswith("]")):
            raise DomainError(f"not a continued fraction literal: {text!r}")
        body = s[1:-1].replace(";", ",")
        terms = tuple(int(t) for t in body.split(","))
        return cls(terms, terminated)


def evaluate_cf(cf: ContinuedFraction) -> Fraction:
    """Exact value by back-substitution from the last term."""
    num, den = cf.terms[-1], 1
    for t in reversed(cf.terms[:-1]):
        num, den = t * num + den, num
    return Fraction(num, den)


def _floor_exponent(u: Decimal, v: Decimal, ctx: Context, fuzz: Decimal,
                    cap: int) -> int | None:
    """Largest N >= 0 with u**N >= v, for 0 < u < 1 and 0 < v <= 1.

    Comparisons carry a relative fuzz so an exact boundary is treated as
    a hit.  Returns None when N would exceed `cap`.
    """
    vt = ctx.multiply(v, ctx.subtract(_ONE, fuzz))

    def reaches(n: int) -> bool:
        # u**n >= v, fuzzed
        return ctx.power(u, Decimal(n)) >= vt

    if not reaches(1):
        return 0
    hi = 1
    while reaches(hi * 2):
        hi *= 2
        if hi > cap:
            return None
    lo = hi  # reaches(lo) holds, reaches(hi*2) fails
    hi = hi * 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if reaches(mid):
            lo = mid
        else:
            hi = mid
    return lo if lo <= cap else None


def solve_integer_exponent(x: SignedScaled, a: SignedScaled, max_n: int,
                           policy: PrecisionPolicy = DEFAULT_POLICY,
                           match_tol: Decimal = DEFAULT_MATCH_TOL) -> int:
    """Integer n in [1, max_n] with x**n == a to `match_tol`, else error."""
    if max_n < 1:
        raise DomainError("max_n must be at least 1")
    ctx = policy.oracle_ctx()
    xd, ad = x.value().copy_abs(), a.value().copy_abs()
    if xd == 1:
        raise DomainError("base magnitude 1 cannot reach a target")
    # orient both below 1 so the cascade length shrinks with n
    if xd > 1:
        u, v = ctx.divide(_ONE, xd), ctx.divide(_ONE, ad)
    else:
        u, v = xd, ad
    if not (0 < v <= 1):
        raise NoIntegerExponent(
            "target is on the wrong side of 1 for this base")
    fuzz = Decimal(1).scaleb(20 - policy.oracle_digits)
    floor_n = _floor_exponent(u, v, ctx, fuzz, max(max_n * 2, 8))
    candidates = []
    if floor_n is not None:
        candidates = [n for n in (floor_n, floor_n + 1) if 1 <= n <= max_n]
    for n in candidates:
        p = ctx.power(u, Decimal(n))
        if ctx.subtract(p, v).copy_abs() <= match_tol * v:
            if x.sign < 0:
                want = -1 if n % 2 else 1
                if a.sign != want:
                    continue
            elif a.sign < 0:
                continue
            return n
    raise NoIntegerExponent(
        f"no exponent in [1, {max_n}] matches within {match_tol}")


def recover_rational_exponent(x: SignedScaled, a: SignedScaled,
                              max_depth: int = DEFAULT_MAX_DEPTH,
                              cf_tol: Decimal = DEFAULT_CF_TOL,
                              policy: PrecisionPolicy = DEFAULT_POLICY,
                              max_term: int = MAX_TERM) -> ContinuedFraction:
    """Continued fraction of the exponent t with x**t == a.

    Requires x and a on the same side of 1 (positive exponent).  When
    the exponent is below 1 the roles swap once up front and the listing
    starts with a 0 term.
    """
    if max_depth < 1:
        raise DomainError("max_depth must be at least 1")
    ctx = policy.oracle_ctx()
    xd, ad = x.value(), a.value()
    if xd <= 0 or ad <= 0:
        raise DomainError("exponent recovery needs positive values")
    if xd == 1 or ad == 1:
        raise DomainError("exponent recovery is degenerate at 1")
    if (xd > 1) != (ad > 1):
        raise DomainError("base and target must sit on the same side of 1")
    if xd > 1:
        u, v = ctx.divide(_ONE, xd), ctx.divide(_ONE, ad)
    else:
        u, v = xd, ad
    fuzz = Decimal(1).scaleb(20 - policy.oracle_digits)
    terms: list[int] = []
    if v > u:
        # exponent below 1: recover its reciprocal after a leading zero
        terms.append(0)
        u, v = v, u
    terminated = False
    while len(terms) < max_depth:
        n = _floor_exponent(u, v, ctx, fuzz, max_term)
        if n is None:
            break
        if n == 0:
            raise DomainError("internal: residual ordering violated")
        terms.append(n)
        w = ctx.divide(v, ctx.power(u, Decimal(n)))
        if w > 1:  # fuzzed boundary: clamp
            w = _ONE
        if ctx.subtract(w, _ONE).copy_abs() <= cf_tol:
            terminated = True
            break
        # residual stays between the old base and 1
        if w < ctx.multiply(u, ctx.subtract(_ONE, fuzz)):
            raise DomainError("internal: residual left its interval")
        u, v = w, u
    if terminated and len(terms) > 1 and terms[-1] == 1:
        # canonical form: fold a trailing 1 into the previous term
        terms[-2] += 1
        terms.pop()
    return ContinuedFraction(tuple(terms), terminated)


def recover_exponent_via_logs(x: SignedScaled, a: SignedScaled,
                              depth: int = DEFAULT_MAX_DEPTH,
                              policy: PrecisionPolicy = DEFAULT_POLICY
                              ) -> tuple[ContinuedFraction, ContinuedFraction,
                                         SignedScaled]:
    """log_x(a) as a ratio of two natural-log recoveries to a common base.

    Both logarithms run against the internally constructed Euler base, so
    the base bias cancels in the ratio.
    """
    from .euler import internal_e  # local import: euler builds on cascades

    e = internal_e(policy)
    p_cf = recover_rational_exponent(e, a, max_depth=depth, policy=policy)
    q_cf = recover_rational_exponent(e, x, max_depth=depth, policy=policy)
    p = evaluate_cf(p_cf)
    q = evaluate_cf(q_cf)
    if q == 0:
        raise DomainError("log of the base truncated to zero")
    ctx = policy.ctx()
    ratio = ctx.divide(Decimal(p.numerator) * Decimal(q.denominator),
                       Decimal(p.denominator) * Decimal(q.numerator))
    return p_cf, q_cf, SignedScaled.from_decimal(ratio)
