"""Scaled decimal numbers and the high-precision reference evaluator.

Every quantity in the engine is a sign/mantissa/exponent triple with the
mantissa in [0.1, 1), so that any mantissa can act as the cosine of an
acute angle.  Exponent bookkeeping is exact integer arithmetic; only
mantissa arithmetic rounds, and always under an explicit context.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from decimal import Context, Decimal, ROUND_HALF_EVEN

from .errors import DomainError, ParseError, SignMismatch, ZeroNotRepresentable

_NUMBER_RE = re.compile(r"[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?\Z")

# Wide exponent window: cascades reach 10**k exponents far past the
# default context limits without ever denormalizing.
_EMAX = 10 ** 17

_ONE = Decimal(1)
_TENTH = Decimal("0.1")


def shift10(d: Decimal, k: int) -> Decimal:
    """Multiply a Decimal by 10**k exactly, by exponent surgery."""
    sign, digits, exp = d.as_tuple()
    return Decimal((sign, digits, exp + k))


@dataclass(frozen=True)
class PrecisionPolicy:
    """Working and reference precisions plus the default tolerance.

    rel_tol defaults to 10**(1 - working_digits): one unit in the last
    working mantissa place, relative.
    """

    working_digits: int = 30
    oracle_digits: int = 60
    rel_tol: Decimal | None = None

    def __post_init__(self):
        if self.working_digits < 15:
            raise DomainError("working_digits must be at least 15")
        if self.oracle_digits < 2 * self.working_digits:
            raise DomainError("oracle_digits must be at least twice working_digits")
        if self.rel_tol is None:
            object.__setattr__(
                self, "rel_tol", Decimal(1).scaleb(1 - self.working_digits)
            )
        elif not (0 < self.rel_tol < 1):
            raise DomainError("rel_tol must be in (0, 1)")

    def ctx(self) -> Context:
        return Context(prec=self.working_digits, rounding=ROUND_HALF_EVEN,
                       Emin=-_EMAX, Emax=_EMAX)

    def oracle_ctx(self) -> Context:
        return Context(prec=self.oracle_digits, rounding=ROUND_HALF_EVEN,
                       Emin=-_EMAX, Emax=_EMAX)


DEFAULT_POLICY = PrecisionPolicy()


@dataclass(frozen=True)
class SignedScaled:
    """A nonzero decimal number sign * mantissa * 10**exponent."""

    sign: int
    mantissa: Decimal
    exponent: int

    def __post_init__(self):
        if self.sign not in (-1, 1):
            raise DomainError("sign must be -1 or +1")
        if not isinstance(self.mantissa, Decimal):
            raise DomainError("mantissa must be a Decimal")
        if not (_TENTH <= self.mantissa < _ONE):
            raise DomainError("mantissa must lie in [0.1, 1)")

    def value(self) -> Decimal:
        """Exact Decimal value (no rounding: pure exponent shift)."""
        # copy_negate, not unary minus: minus rounds via the thread context
        v = shift10(self.mantissa, self.exponent)
        return v.copy_negate() if self.sign < 0 else v

    def magnitude(self) -> "SignedScaled":
        return SignedScaled(1, self.mantissa, self.exponent)

    def with_sign(self, sign: int) -> "SignedScaled":
        return SignedScaled(sign, self.mantissa, self.exponent)

    @property
    def is_unit(self) -> bool:
        """True when the magnitude is exactly 1."""
        return self.exponent == 1 and self.mantissa == _TENTH

    @property
    def is_power_of_ten(self) -> bool:
        return self.mantissa == _TENTH

    @classmethod
    def from_decimal(cls, d: Decimal) -> "SignedScaled":
        if not d.is_finite():
            raise DomainError("value must be finite")
        if d == 0:
            raise ZeroNotRepresentable("zero cannot be scaled")
        exponent = d.adjusted() + 1
        mantissa = shift10(d.copy_abs(), -exponent)
        return cls(-1 if d < 0 else 1, mantissa, exponent)


def renormalized(sign: int, mantissa: Decimal, exponent: int) -> SignedScaled:
    """Rebuild a SignedScaled from a raw positive mantissa of any size."""
    if mantissa <= 0:
        raise DomainError("mantissa must be positive")
    shift = mantissa.adjusted() + 1
    return SignedScaled(sign, shift10(mantissa, -shift), exponent + shift)


def normalize(text: str) -> SignedScaled:
    """Parse a plain or scientific decimal literal into scaled form."""
    s = text.strip()
    if not _NUMBER_RE.fullmatch(s):
        raise ParseError(f"not a decimal literal: {text!r}")
    d = Decimal(s)
    if d == 0:
        raise ZeroNotRepresentable("zero cannot be scaled")
    return SignedScaled.from_decimal(d)


def to_text(v: SignedScaled, digits: int) -> str:
    """Render as d.ddd...e<k>, round-half-even to `digits` significant digits."""
    if digits < 1:
        raise DomainError("digits must be at least 1")
    q = v.mantissa.quantize(Decimal(1).scaleb(-digits), rounding=ROUND_HALF_EVEN)
    exponent = v.exponent
    if q == _ONE:
        # 0.9999... rounded up a decade
        q = _TENTH
        exponent += 1
    digits_str = str(int(shift10(q, digits)))  # integer string, `digits` long
    head, tail = digits_str[0], digits_str[1:]
    body = f"{head}.{tail}" if tail else head
    sign = "-" if v.sign < 0 else ""
    return f"{sign}{body}e{exponent - 1}"


def _as_decimal(x) -> Decimal:
    return x.value() if isinstance(x, SignedScaled) else Decimal(x)


def oracle_eval(op: str, args: tuple, policy: PrecisionPolicy = DEFAULT_POLICY) -> SignedScaled:
    """Reference evaluation at oracle precision, bypassing all geometry."""
    ctx = policy.oracle_ctx()
    if op == "pow":
        x, n = args
        xd = _as_decimal(x)
        n = int(n)
        if xd == 0:
            raise ZeroNotRepresentable("zero base")
        r = ctx.power(xd.copy_abs(), Decimal(n))
        if xd < 0 and n % 2:
            r = r.copy_negate()
    elif op == "recip":
        (x,) = args
        r = ctx.divide(_ONE, _as_decimal(x))
    elif op == "mul":
        a, b = args
        r = ctx.multiply(_as_decimal(a), _as_decimal(b))
    elif op == "div":
        a, b = args
        r = ctx.divide(_as_decimal(a), _as_decimal(b))
    elif op == "gmean":
        a, b = args
        ad, bd = _as_decimal(a), _as_decimal(b)
        if (ad < 0) != (bd < 0):
            raise SignMismatch("geometric mean needs matching signs")
        r = ctx.sqrt(ctx.multiply(ad.copy_abs(), bd.copy_abs()))
        if ad < 0:
            r = r.copy_negate()
    elif op == "root":
        x, n = args
        xd = _as_decimal(x)
        n = int(n)
        if n < 1:
            raise DomainError("root index must be positive")
        if xd < 0 and n % 2 == 0:
            raise DomainError("even root of a negative radicand")
        r = ctx.power(xd.copy_abs(), ctx.divide(_ONE, Decimal(n)))
        if xd < 0:
            r = r.copy_negate()
    elif op == "powfrac":
        x, m, n = args
        xd = _as_decimal(x)
        m, n = int(m), int(n)
        if n < 1:
            raise DomainError("denominator must be positive")
        if xd < 0 and n % 2 == 0:
            raise DomainError("even root of a negative radicand")
        if m == 0:
            return SignedScaled(1, _TENTH, 1)
        r = ctx.power(xd.copy_abs(), ctx.divide(Decimal(m), Decimal(n)))
        if xd < 0 and m % 2:
            r = r.copy_negate()
    elif op == "ln":
        (a,) = args
        ad = _as_decimal(a)
        if ad <= 0:
            raise DomainError("ln needs a positive argument")
        r = ctx.ln(ad)
    elif op == "exp":
        (t,) = args
        r = ctx.exp(_as_decimal(t))
    else:
        raise DomainError(f"unknown oracle op: {op!r}")
    if r == 0:
        raise ZeroNotRepresentable(f"oracle {op} produced zero")
    return SignedScaled.from_decimal(r)


def rel_diff(a: Decimal, b: Decimal, ctx: Context | None = None) -> Decimal:
    """|a - b| / |b| under an oracle-sized default context."""
    if ctx is None:
        ctx = DEFAULT_POLICY.oracle_ctx()
    return ctx.divide(ctx.subtract(a, b).copy_abs(), b.copy_abs())
