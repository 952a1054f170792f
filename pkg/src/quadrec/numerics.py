"""Arithmetic substrate: exact rationals, tracked-precision reals, C-polynomials.

Three kinds of numbers appear throughout the package:

* exact rationals (``fractions.Fraction``), used whenever a quantity is a
  ratio of integers by construction -- recurrence parameters, orbit values
  for small step counts, series coefficients;
* ``PrecReal``, a decimal floating-point value that carries its working
  precision with it.  Every operation rounds at the precision of its result
  (the minimum of the operand precisions), so a single operation contributes
  relative error at most ``10**(2 - P)`` at precision ``P``;
* ``CPoly``, a dense polynomial in one formal symbol ``C`` with exact
  rational coefficients.  The asymptotic-series engine keeps every derived
  coefficient as a ``CPoly`` so that nothing is rounded before a caller asks
  for digits.

The module also owns the Euler--Mascheroni constant (110 verified digits)
and the double-run confirmation helper used before any digits are reported:
a computation is repeated with 20 extra guard digits and the two results
must agree to the requested width, otherwise ``PrecisionError`` is raised.
"""

from __future__ import annotations

import decimal
from decimal import Context, Decimal
from fractions import Fraction
from typing import Callable, Iterable, Union

from .errors import DomainError, PrecisionError, RefusalError

BigRational = Fraction

#: Guard digits added on top of the requested digit count for working
#: precision, and again for the confirmation rerun.
GUARD_DIGITS = 20

#: First 110 decimal digits of the Euler--Mascheroni constant.  The trailing
#: digits are truncated, not rounded, so every digit shown is exact.
_EULER_GAMMA_110 = (
    "0."
    "5772156649015328606065120900824024310421593359399235988057672348848677"
    "2677766467093694706329174674951463144724"
)

_GAMMA_MAX_PRECISION = 105

Scalar = Union[int, Fraction, Decimal]


def parse_rational(text: str) -> Fraction:
    """Parse ``"2/5"``, ``"0.4"`` or ``"3"`` into an exact rational."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise DomainError(f"not a rational number: {text!r}") from exc


def euler_gamma(precision: int) -> "PrecReal":
    """Euler--Mascheroni constant rounded to ``precision`` decimal digits.

    Only the embedded 110-digit value is available; requests beyond
    ``precision = 105`` are refused rather than served with unverified
    digits.
    """
    if precision < 1:
        raise DomainError("precision must be at least 1")
    if precision > _GAMMA_MAX_PRECISION:
        raise RefusalError(
            f"euler_gamma is tabulated to {_GAMMA_MAX_PRECISION} digits; "
            f"{precision} requested"
        )
    return PrecReal(_EULER_GAMMA_110, precision)


class PrecReal:
    """A real number bundled with its decimal working precision.

    Instances are immutable by convention: no method mutates ``value`` or
    ``precision`` after construction.  Binary operations take the *minimum*
    of the two precisions, so precision can only be lost explicitly, never
    gained by accident.
    """

    __slots__ = ("value", "precision")

    def __init__(self, value, precision: int | None = None):
        if isinstance(value, PrecReal):
            if precision is None:
                precision = value.precision
            value = value.value
        if precision is None:
            raise DomainError("precision is required")
        if not isinstance(precision, int) or precision < 1:
            raise DomainError(f"precision must be a positive integer, got {precision!r}")
        ctx = Context(prec=precision)
        if isinstance(value, Fraction):
            dec = ctx.divide(Decimal(value.numerator), Decimal(value.denominator))
        elif isinstance(value, (int, str, Decimal)):
            dec = ctx.plus(Decimal(value))
        else:
            raise DomainError(f"cannot build PrecReal from {type(value).__name__}")
        self.value = dec
        self.precision = precision

    # -- construction helpers -------------------------------------------------

    def _coerce(self, other) -> "PrecReal":
        if isinstance(other, PrecReal):
            return other
        if isinstance(other, (int, Fraction, Decimal)):
            return PrecReal(other, self.precision)
        return NotImplemented  # type: ignore[return-value]

    # -- arithmetic ------------------------------------------------------------

    def _binary(self, other, op: str):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        prec = min(self.precision, other.precision)
        ctx = Context(prec=prec)
        result = getattr(ctx, op)(self.value, other.value)
        return PrecReal(result, prec)

    def __add__(self, other):
        return self._binary(other, "add")

    def __radd__(self, other):
        return self._binary(other, "add")

    def __sub__(self, other):
        return self._binary(other, "subtract")

    def __rsub__(self, other):
        coerced = self._coerce(other)
        if coerced is NotImplemented:
            return NotImplemented
        return coerced._binary(self, "subtract")

    def __mul__(self, other):
        return self._binary(other, "multiply")

    def __rmul__(self, other):
        return self._binary(other, "multiply")

    def __truediv__(self, other):
        return self._binary(other, "divide")

    def __rtruediv__(self, other):
        coerced = self._coerce(other)
        if coerced is NotImplemented:
            return NotImplemented
        return coerced._binary(self, "divide")

    def __pow__(self, exponent):
        if not isinstance(exponent, int):
            return NotImplemented
        ctx = Context(prec=self.precision)
        return PrecReal(ctx.power(self.value, Decimal(exponent)), self.precision)

    def __neg__(self):
        return PrecReal(-self.value, self.precision)

    def __abs__(self):
        return PrecReal(abs(self.value), self.precision)

    def ln(self) -> "PrecReal":
        if self.value <= 0:
            raise DomainError("ln requires a positive argument")
        ctx = Context(prec=self.precision)
        return PrecReal(ctx.ln(self.value), self.precision)

    def exp(self) -> "PrecReal":
        ctx = Context(prec=self.precision)
        return PrecReal(ctx.exp(self.value), self.precision)

    # -- comparisons (at the lower of the two precisions) -----------------------

    def _compared(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return None
        prec = min(self.precision, other.precision)
        ctx = Context(prec=prec)
        return ctx.plus(self.value), ctx.plus(other.value)

    def __eq__(self, other):
        pair = self._compared(other)
        if pair is None:
            return NotImplemented
        return pair[0] == pair[1]

    def __lt__(self, other):
        pair = self._compared(other)
        if pair is None:
            return NotImplemented
        return pair[0] < pair[1]

    def __le__(self, other):
        pair = self._compared(other)
        if pair is None:
            return NotImplemented
        return pair[0] <= pair[1]

    def __gt__(self, other):
        pair = self._compared(other)
        if pair is None:
            return NotImplemented
        return pair[0] > pair[1]

    def __ge__(self, other):
        pair = self._compared(other)
        if pair is None:
            return NotImplemented
        return pair[0] >= pair[1]

    def __hash__(self):
        return hash(self.value)

    # -- rendering ---------------------------------------------------------------

    def digit_string(self, digits: int, rounding: str = decimal.ROUND_HALF_EVEN) -> str:
        """Fixed-point rendering with exactly ``digits`` decimal places.

        The default rounding is banker's rounding; pass
        ``decimal.ROUND_DOWN`` to truncate instead (the convention used for
        convergence-rate constants, whose published digits are truncations).
        """
        if digits < 1:
            raise DomainError("digits must be at least 1")
        quantum = Decimal(1).scaleb(-digits)
        ctx = Context(prec=self.precision + digits + 10)
        return format(self.value.quantize(quantum, rounding=rounding, context=ctx), "f")

    def __str__(self):
        return str(self.value)

    def __format__(self, spec):
        return format(self.value, spec)

    def __repr__(self):
        return f"PrecReal({str(self.value)!r}, precision={self.precision})"


def confirmed_value(
    compute: Callable[[int], PrecReal], digits: int, precision: int
) -> PrecReal:
    """Run ``compute`` at ``precision`` and ``precision + 20`` and compare.

    The two results must agree to within one unit in the ``digits``-th
    decimal place; the higher-precision result is returned.  Disagreement
    raises ``PrecisionError`` -- no value is ever reported on the strength
    of a single run.
    """
    first = compute(precision)
    second = compute(precision + GUARD_DIGITS)
    gap = abs(first.value - second.value)
    if gap > Decimal(1).scaleb(-digits):
        raise PrecisionError(
            f"reruns at precisions {precision} and {precision + GUARD_DIGITS} "
            f"disagree beyond 10^-{digits} (gap {gap:E})"
        )
    return second


class CPoly:
    """Dense polynomial in the formal constant ``C`` over the rationals.

    Coefficients are stored in ascending order of the power of ``C`` and
    normalised (no trailing zeros), so equality of tuples is equality of
    polynomials.  Instances are immutable and hashable.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Scalar] = ()):
        items = [Fraction(c) for c in coeffs]
        while items and items[-1] == 0:
            items.pop()
        object.__setattr__(self, "coeffs", tuple(items))

    def __setattr__(self, name, value):
        raise AttributeError("CPoly instances are immutable")

    @classmethod
    def constant(cls, value: Scalar) -> "CPoly":
        return cls((Fraction(value),))

    @classmethod
    def variable(cls) -> "CPoly":
        """The polynomial ``C`` itself."""
        return cls((0, 1))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = CPoly.constant(other)
        if not isinstance(other, CPoly):
            return NotImplemented
        n = max(len(self.coeffs), len(other.coeffs))
        a = list(self.coeffs) + [Fraction(0)] * (n - len(self.coeffs))
        b = list(other.coeffs) + [Fraction(0)] * (n - len(other.coeffs))
        return CPoly(x + y for x, y in zip(a, b))

    __radd__ = __add__

    def __neg__(self):
        return CPoly(-c for c in self.coeffs)

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = CPoly.constant(other)
        if not isinstance(other, CPoly):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return CPoly(c * other for c in self.coeffs)
        if not isinstance(other, CPoly):
            return NotImplemented
        if self.is_zero or other.is_zero:
            return CPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return CPoly(out)

    __rmul__ = __mul__

    def __pow__(self, exponent):
        if not isinstance(exponent, int) or exponent < 0:
            return NotImplemented
        out = CPoly.constant(1)
        for _ in range(exponent):
            out = out * self
        return out

    def __truediv__(self, scalar):
        if not isinstance(scalar, (int, Fraction)):
            return NotImplemented
        return CPoly(c / Fraction(scalar) for c in self.coeffs)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = CPoly.constant(other)
        if not isinstance(other, CPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def derivative(self) -> "CPoly":
        return CPoly(k * c for k, c in enumerate(self.coeffs) if k >= 1)

    def __call__(self, x):
        """Evaluate by Horner's rule; exact for ``Fraction``, rounded for
        ``PrecReal`` (one rounding per step)."""
        if isinstance(x, PrecReal):
            acc = PrecReal(0, x.precision)
            for c in reversed(self.coeffs):
                acc = acc * x + c
            return acc
        x = Fraction(x)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def coeff_strings(self) -> list[str]:
        """Ascending coefficient strings, e.g. ``["-5", "3"]`` for 3*C - 5."""
        return [str(c) for c in self.coeffs]

    def format_str(self) -> str:
        """Human-readable form in descending powers, e.g. ``"3*C - 5"``."""
        if self.is_zero:
            return "0"
        parts: list[str] = []
        for power in range(self.degree, -1, -1):
            c = self.coeffs[power]
            if c == 0:
                continue
            mag = abs(c)
            if power == 0:
                body = str(mag)
            else:
                var = "C" if power == 1 else f"C^{power}"
                body = var if mag == 1 else f"{mag}*{var}"
            if not parts:
                parts.append(body if c > 0 else f"-{body}")
            else:
                parts.append(f"+ {body}" if c > 0 else f"- {body}")
        return " ".join(parts)

    def __repr__(self):
        return f"CPoly({self.format_str()})"
