"""Perpendicular cascades inside a right triangle.

Dropping a perpendicular from the right-angle vertex of a right triangle
onto the hypotenuse, then another from its foot onto the base, and so on,
scales each successive segment by cos C.  With the working mantissa cast
as that cosine, repeated perpendiculars multiply; run backwards (unit
perpendicular, mantissa as a shorter segment) they divide; bisecting the
apex angle takes geometric means.  Exponents ride along as exact integer
bookkeeping.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import Context, Decimal

from .errors import (DegenerateAngle, DomainError, ExponentOverflow,
                     SignMismatch)
from .numcore import (DEFAULT_POLICY, PrecisionPolicy, SignedScaled,
                      oracle_eval, renormalized, shift10)
from .trace import TraceRecorder, foot_label

_ONE = Decimal(1)
_TWO = Decimal(2)
_TENTH = Decimal("0.1")

# Past this depth a cascade is run as repeated squaring instead of one
# multiplication per perpendicular.
VIRTUAL_DEPTH = 10 ** 4

MAX_ABS_EXPONENT = 10 ** 6
EXPONENT_BOUND = 10 ** 9

_BISECT_CAP = 200


def _check_cosine(cos_c: Decimal):
    if not (0 < cos_c < 1):
        raise DegenerateAngle(f"cosine {cos_c} leaves no acute angle")


@dataclass(frozen=True)
class Construction:
    """An assembled triangle: apex cosine, first perpendicular, depth."""

    cos_c: Decimal
    perpendicular: Decimal
    depth: int
    backend: str = "construction"

    def __post_init__(self):
        _check_cosine(self.cos_c)
        if self.perpendicular <= 0:
            raise DomainError("perpendicular length must be positive")
        if self.depth < 1:
            raise DomainError("depth must be at least 1")
        if self.backend not in ("construction", "oracle"):
            raise DomainError(f"unknown backend {self.backend!r}")


@dataclass(frozen=True)
class Cascade:
    """Lengths p_1..p_depth produced by a construction."""

    construction: Construction
    lengths: tuple[Decimal, ...]

    def validate(self, policy: PrecisionPolicy = DEFAULT_POLICY) -> bool:
        """Check p_{i+1}/p_i == cos C and p_1^2 == AB * p_2 within tolerance."""
        ctx = policy.oracle_ctx()
        c = self.construction
        tol = policy.rel_tol * 10  # one guard digit over working rounding
        prev = c.perpendicular
        for p in self.lengths:
            ratio = ctx.divide(p, prev)
            if ctx.subtract(ratio, c.cos_c).copy_abs() > tol * c.cos_c:
                return False
            prev = p
        if len(self.lengths) >= 2:
            lhs = ctx.multiply(self.lengths[0], self.lengths[0])
            rhs = ctx.multiply(c.perpendicular, self.lengths[1])
            if ctx.subtract(lhs, rhs).copy_abs() > tol * rhs:
                return False
        return True


def build_cascade(construction: Construction,
                  policy: PrecisionPolicy = DEFAULT_POLICY,
                  recorder: TraceRecorder | None = None) -> Cascade:
    """Drop `depth` successive perpendiculars and record each length."""
    ctx = policy.ctx()
    c = construction
    if recorder is not None:
        recorder.angle(c.cos_c)
    lengths = []
    prev, prev_label = c.perpendicular, "B"
    onto_hyp = True
    for i in range(1, c.depth + 1):
        p = ctx.multiply(prev, c.cos_c)
        lengths.append(p)
        if recorder is not None:
            foot = foot_label(i)
            recorder.drop(prev_label, "CA" if onto_hyp else "CX", foot, p)
            prev_label = foot
        prev = p
        onto_hyp = not onto_hyp
    if recorder is not None:
        recorder.measure(f"{prev_label}-perpendicular", lengths[-1])
    return Cascade(construction=c, lengths=tuple(lengths))


def _mantissa_power(m: Decimal, n: int, ctx: Context,
                    recorder: TraceRecorder | None) -> Decimal:
    """m**n for 0 < m < 1, literal cascade up to VIRTUAL_DEPTH steps."""
    if n <= VIRTUAL_DEPTH:
        if recorder is not None:
            recorder.angle(m)
        prev, prev_label, onto_hyp = _ONE, "B", True
        for i in range(1, n + 1):
            prev = ctx.multiply(prev, m)
            if recorder is not None:
                foot = foot_label(i)
                recorder.drop(prev_label, "CA" if onto_hyp else "CX", foot, prev)
                prev_label = foot
                onto_hyp = not onto_hyp
        if recorder is not None:
            recorder.measure(f"{prev_label}-perpendicular", prev)
        return prev
    # virtual cascade: repeated squaring, same value to working rounding
    if recorder is not None:
        recorder.angle(m)
        recorder.measure("virtual-cascade", Decimal(n))
    return ctx.power(m, Decimal(n))


def power(x: SignedScaled, n: int,
          policy: PrecisionPolicy = DEFAULT_POLICY,
          backend: str = "construction",
          recorder: TraceRecorder | None = None,
          max_abs_exponent: int = MAX_ABS_EXPONENT) -> SignedScaled:
    """x**n for integer n != 0 via a depth-|n| cascade."""
    if n == 0:
        raise DomainError("exponent must be nonzero")
    if abs(n) > max_abs_exponent:
        raise DomainError(f"|exponent| above cap {max_abs_exponent}")
    # cheap estimate first, so a hopeless request fails before any
    # cascade work; the exact exponent is re-checked on the result
    est = abs(n) * abs(x.exponent - 1 + math.log10(float(shift10(x.mantissa, 1))))
    if est > EXPONENT_BOUND * 1.01:
        raise ExponentOverflow("result exponent out of range")
    if n < 0:
        inv = reciprocal(x, policy=policy, backend=backend, recorder=recorder)
        return power(inv, -n, policy=policy, backend=backend,
                     recorder=recorder, max_abs_exponent=max_abs_exponent)
    sign = -1 if (x.sign < 0 and n % 2) else 1
    if backend == "oracle":
        return oracle_eval("pow", (x, n), policy).magnitude().with_sign(sign)
    if x.is_power_of_ten:
        # exact decade: 0.1**n needs no geometry
        result = SignedScaled(sign, _TENTH, (x.exponent - 1) * n + 1)
    else:
        ctx = policy.ctx()
        mant = _mantissa_power(x.mantissa, n, ctx, recorder)
        result = renormalized(sign, mant, x.exponent * n)
    if abs(result.exponent) > EXPONENT_BOUND:
        raise ExponentOverflow("result exponent out of range")
    return result


def reciprocal(x: SignedScaled,
               policy: PrecisionPolicy = DEFAULT_POLICY,
               backend: str = "construction",
               recorder: TraceRecorder | None = None,
               method: str = "angle") -> SignedScaled:
    """1/x.  Both methods set a cosine of 1/R with R = 10*mantissa in (1,10)."""
    if backend == "oracle":
        return oracle_eval("recip", (x,), policy)
    if x.is_power_of_ten:
        return SignedScaled(x.sign, _TENTH, 2 - x.exponent)
    ctx = policy.ctx()
    hyp = shift10(x.mantissa, 1)  # in (1, 10)
    if method == "angle":
        cos_c = ctx.divide(_ONE, hyp)
        _check_cosine(cos_c)
        if recorder is not None:
            recorder.angle(cos_c)
            recorder.drop("B", "CA", "D", cos_c)
            recorder.measure("BD", cos_c)
        mant = cos_c
    elif method == "unit-perpendicular":
        # fix p2 = mantissa/10; then cos C = p2, p1 = 1 exactly, and
        # p1*p1 == AB*p2 recovers AB = 1/p2
        p2 = shift10(x.mantissa, -1)
        ab = ctx.divide(_ONE, p2)
        if recorder is not None:
            recorder.angle(p2)
            recorder.drop("B", "CA", "D", _ONE)
            recorder.drop("D", "CX", "E", p2)
            recorder.measure("AB", ab)
        return renormalized(x.sign, ab, -1 - x.exponent)
    else:
        raise DomainError(f"unknown reciprocal method {method!r}")
    return renormalized(x.sign, mant, 1 - x.exponent)


def _parity_adjust(a: SignedScaled, b: SignedScaled):
    """Return mantissas and a common half-exponent with even exponent sum.

    When the exponent sum is odd the operand with the larger exponent is
    rewritten a decade down, putting its mantissa in [0.01, 0.1).
    """
    m1, k1 = a.mantissa, a.exponent
    m2, k2 = b.mantissa, b.exponent
    if (k1 + k2) % 2:
        if k1 >= k2:
            m1, k1 = shift10(m1, -1), k1 + 1
        else:
            m2, k2 = shift10(m2, -1), k2 + 1
    return m1, m2, (k1 + k2) // 2


def geometric_mean(a: SignedScaled, b: SignedScaled,
                   policy: PrecisionPolicy = DEFAULT_POLICY,
                   backend: str = "construction",
                   recorder: TraceRecorder | None = None,
                   method: str = "bisect") -> SignedScaled:
    """sqrt(a*b); both operands negative gives the negative mean."""
    if a.sign != b.sign:
        raise SignMismatch("geometric mean needs matching signs")
    sign = a.sign
    if backend == "oracle":
        return oracle_eval("gmean", (a, b), policy)
    m1, m2, half = _parity_adjust(a, b)
    if m1 == m2:
        # equal mantissas: the mean is the operand scale itself
        return renormalized(sign, m1, half)
    ctx = policy.ctx()
    big, small = (m1, m2) if m1 > m2 else (m2, m1)
    if method == "bisect":
        # p2 = AB*cos(2C): halve that angle, BD = AB*cos(C)
        cos_full = ctx.divide(ctx.subtract(ctx.multiply(_TWO, small), big), big)
        cos_half = ctx.sqrt(ctx.divide(ctx.add(_ONE, cos_full), _TWO))
        _check_cosine(cos_half)
        bd = ctx.multiply(big, cos_half)
        if recorder is not None:
            recorder.angle(cos_full, vertex="C")
            recorder.bisect("C", cos_full, cos_half)
            recorder.drop("B", "CY", "D", bd)
            recorder.drop("D", "CX", "E", small)
            recorder.measure("BD", bd)
    elif method == "rotate":
        bd = _rotate_to_mean(big, small, ctx, policy.rel_tol, recorder)
    else:
        raise DomainError(f"unknown geometric mean method {method!r}")
    return renormalized(sign, bd, half)


def _rotate_to_mean(big: Decimal, small: Decimal, ctx: Context,
                    rel_tol: Decimal,
                    recorder: TraceRecorder | None) -> Decimal:
    """Search the apex cosine until the implied hypotenuse cut equals `big`.

    With DE fixed at `small`, a trial cosine c puts the enclosing
    perpendicular at small/c**2; the bracket is monotone decreasing in c.
    Both operands here share a decade, so the solution cosine is interior.
    """
    lo = Decimal("1e-15")
    hi = _ONE - Decimal("1e-15")
    target = big
    c = None
    for i in range(_BISECT_CAP):
        c = ctx.divide(ctx.add(lo, hi), _TWO)
        ab = ctx.divide(small, ctx.multiply(c, c))
        if recorder is not None and i < 4:
            recorder.rotate("D", c, i)
        err = ctx.subtract(ab, target)
        if err.copy_abs() <= rel_tol * target:
            break
        if ab > target:
            lo = c  # hypotenuse cut too long: open the angle
        else:
            hi = c
    bd = ctx.divide(small, c)
    if recorder is not None:
        recorder.measure("BD", bd)
    return bd


def multiply(a: SignedScaled, b: SignedScaled,
             policy: PrecisionPolicy = DEFAULT_POLICY,
             backend: str = "construction",
             recorder: TraceRecorder | None = None) -> SignedScaled:
    """a*b: square of the geometric mean of the magnitudes."""
    sign = a.sign * b.sign
    if backend == "oracle":
        return oracle_eval("mul", (a, b), policy)
    gm = geometric_mean(a.magnitude(), b.magnitude(), policy=policy,
                        backend=backend, recorder=recorder)
    sq = power(gm, 2, policy=policy, backend=backend, recorder=recorder)
    return sq.with_sign(sign)


def divide(num: SignedScaled, den: SignedScaled,
           policy: PrecisionPolicy = DEFAULT_POLICY,
           backend: str = "construction",
           recorder: TraceRecorder | None = None,
           method: str = "hypotenuse") -> SignedScaled:
    """num/den via a unit-base triangle whose hypotenuse is the denominator."""
    sign = num.sign * den.sign
    if backend == "oracle":
        return oracle_eval("div", (num, den), policy)
    ctx = policy.ctx()
    if den.is_power_of_ten:
        return SignedScaled(sign, num.mantissa,
                            num.exponent - den.exponent + 1)
    if method == "hypotenuse":
        # denominator a decade up is the hypotenuse of a unit-base angle
        hyp = shift10(den.mantissa, 1)  # in (1, 10)
        cos_c = ctx.divide(_ONE, hyp)
        _check_cosine(cos_c)
        bd = ctx.multiply(num.mantissa, cos_c)
        if recorder is not None:
            recorder.angle(cos_c)
            recorder.drop("B", "CA", "D", bd)
            recorder.measure("BD", bd)
        exponent = num.exponent - (den.exponent - 1)
    elif method == "similar-triangles":
        # scale the numerator below the denominator, read the cosine
        p, drop_shift = num.mantissa, 0
        if p >= den.mantissa:
            p, drop_shift = shift10(p, -1), 1
        cos_c = ctx.divide(p, den.mantissa)
        _check_cosine(cos_c)
        if recorder is not None:
            recorder.angle(cos_c)
            recorder.drop("B", "CA", "D", p)
            recorder.measure("cosine", cos_c)
        bd = cos_c
        exponent = num.exponent - den.exponent + drop_shift
    else:
        raise DomainError(f"unknown division method {method!r}")
    return renormalized(sign, bd, exponent)
