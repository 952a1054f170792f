"""Tail sums of the boundary logistic orbit and the bootstrap identity.

With alpha_0 = 1/2 and alpha_k = alpha_{k-1}(1 - alpha_{k-1}) define

    s_m = sum_{k>=0} alpha_k**m          (m >= 2, convergent),
    s_1 = alpha_0 + sum_{k>=1} (alpha_k - 1/k)   (regularized; the raw sum
                                                  diverges like the harmonic
                                                  series).

Two of these are special.  s_2 telescopes exactly: the recurrence gives
alpha_{k+1} = alpha_k - alpha_k**2, so sum_{k<=n} alpha_k**2 = 1/2 -
alpha_{n+1} and s_2 = 1/2.  And the whole family enters the bootstrap
identity

    c = 2 + gamma + s_1 + sum_{m>=2} s_m,

where c = C/2 is the critical tail constant (see ``critical``) and gamma is
Euler's constant.  The m-indexed sum is resummed algebraically before any
numerics: sum_{m>=2} s_m = sum_k alpha_k**2/(1 - alpha_k), removing one
limit process.

Numerically every sum here is "direct part + accelerated tail".  The orbit
is streamed to depth N; the remainder sum_{k>N} f(k) is replaced by the
Euler--Maclaurin estimate  integral_a^inf f + f(a)/2 - f'(a)/12  at
a = N + 1, where f is the summand's asymptotic model: the first three
terms of the alpha expansion (coefficients from the solved series table at
the numeric critical constant), raised to the appropriate power.
Integrals of ln(x)**j / x**i reduce exactly by integration by parts, so
the tail is evaluated in closed form.  The first *omitted* corrections --
the next series level and the next Euler--Maclaurin term -- provide the
reported ``error_estimate`` (with a safety factor of 10), and N grows by
factors of 10 until that estimate drops below 10**-(D+2) of the running
total.  The fixed three-term tail caps the certifiable digits: D <= 15 for
the power sums and D <= 8 for the regularized sum.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import Context, Decimal
from fractions import Fraction
from functools import lru_cache

from .critical import estimate_constant
from .errors import DomainError, PrecisionError, RefusalError
from .numerics import GUARD_DIGITS, CPoly, PrecReal, euler_gamma
from .recurrence import EXACT_STEP_CAP, logistic_decimals, logistic_iterate
from .series_engine import solve_coefficients

#: Depth schedule for adaptive direct summation.
_CHECKPOINTS = (10**3, 10**4, 10**5, 10**6, 10**7)

#: Digit caps imposed by the fixed three-term tail model.
MAX_DIGITS_POWER = 15
MAX_DIGITS_S1 = 8
MAX_DIGITS_BOOTSTRAP = 6

#: The summand model keeps three series levels; one more feeds the error
#: estimate.
_MODEL_LEVELS = 4

Model = dict[tuple[int, int], Decimal]  # (i, j) -> coefficient of ln(x)**j / x**i


@dataclass(frozen=True)
class SumResult:
    """A computed sum with its direct/tail split and error evidence."""

    m: int
    value: PrecReal
    terms_summed: int
    tail_correction: PrecReal
    error_estimate: PrecReal


@dataclass(frozen=True)
class S2Witness:
    """Exact verification data for sum_{k<=n} alpha_k^2 = 1/2 - alpha_{n+1}."""

    n: int
    partial: Fraction
    complement: Fraction
    holds: bool


@dataclass(frozen=True)
class BootstrapReport:
    """Both sides of c = 2 + gamma + s_1 + sum_{m>=2} s_m, and their gap."""

    digits: int
    c: PrecReal
    gamma: PrecReal
    s1: PrecReal
    sum_m_ge_2: PrecReal
    formula_value: PrecReal
    residual: PrecReal


# ---------------------------------------------------------------------------
# summand models: dictionaries of decimal coefficients over ln(x)**j / x**i
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _tail_table():
    return solve_coefficients(6)


@lru_cache(maxsize=8)
def _default_c(precision: int) -> PrecReal:
    """A fresh moderate-depth estimate of the critical constant.

    Depth 10**5 at order 6 carries a truncation bound near 10**-18, far
    beyond what any supported digit request needs.
    """
    return estimate_constant(10**5, 6, max(40, precision), table=_tail_table()).C


def _poly_at(poly: CPoly, c_dec: Decimal, ctx: Context) -> Decimal:
    acc = Decimal(0)
    for coeff in reversed(poly.coeffs):
        term = ctx.divide(Decimal(coeff.numerator), Decimal(coeff.denominator))
        acc = ctx.fma(acc, c_dec, term)
    return acc


def _alpha_model(c_dec: Decimal, ctx: Context, levels: int = _MODEL_LEVELS) -> Model:
    """alpha_k ~ sum over 1 <= i <= levels of -c[i][j]/2 * ln(k)**j / k**i."""
    table = _tail_table()
    model: Model = {}
    for (i, j), poly in table.entries.items():
        if i > levels or poly.is_zero:
            continue
        value = _poly_at(poly, c_dec, ctx)
        model[(i, j)] = ctx.divide(-value, Decimal(2))
    return model


def _model_mul(a: Model, b: Model, max_level: int, ctx: Context) -> Model:
    out: Model = {}
    for (i1, j1), c1 in a.items():
        for (i2, j2), c2 in b.items():
            if i1 + i2 > max_level:
                continue
            key = (i1 + i2, j1 + j2)
            out[key] = ctx.add(out.get(key, Decimal(0)), ctx.multiply(c1, c2))
    return out


def _model_pow(base: Model, m: int, max_level: int, ctx: Context) -> Model:
    out: Model = {(0, 0): Decimal(1)}
    for _ in range(m):
        out = _model_mul(out, base, max_level, ctx)
    return out


def _split_levels(model: Model, keep_through: int) -> tuple[Model, Model]:
    """(terms with level <= keep_through, terms at level keep_through + 1)."""
    kept = {k: v for k, v in model.items() if k[0] <= keep_through}
    omitted = {k: v for k, v in model.items() if k[0] == keep_through + 1}
    return kept, omitted


def _model_eval(model: Model, x: Decimal, ctx: Context) -> Decimal:
    ln_x = ctx.ln(x)
    total = Decimal(0)
    for (i, j), coeff in model.items():
        term = ctx.divide(coeff, ctx.power(x, Decimal(i)))
        if j:
            term = ctx.multiply(term, ctx.power(ln_x, Decimal(j)))
        total = ctx.add(total, term)
    return total


def _model_derivative(model: Model, ctx: Context) -> Model:
    # d/dx [ln^j x / x^i] = j ln^{j-1} x / x^{i+1} - i ln^j x / x^{i+1}
    out: Model = {}
    for (i, j), coeff in model.items():
        if j:
            key = (i + 1, j - 1)
            out[key] = ctx.add(out.get(key, Decimal(0)), ctx.multiply(coeff, Decimal(j)))
        key = (i + 1, j)
        out[key] = ctx.add(out.get(key, Decimal(0)), ctx.multiply(coeff, Decimal(-i)))
    return out


def _model_tail_integral(model: Model, a: Decimal, ctx: Context) -> Decimal:
    """integral_a^inf of the model, exactly by parts (needs every i >= 2)."""
    ln_a = ctx.ln(a)
    total = Decimal(0)
    for (i, j), coeff in model.items():
        if i < 2:
            raise DomainError("tail integral requires decay faster than 1/x")
        base = ctx.divide(
            Decimal(1), ctx.multiply(Decimal(i - 1), ctx.power(a, Decimal(i - 1)))
        )
        # I_t = ln(a)^t * base + t/(i-1) * I_{t-1},  I_0 = base
        integral = base
        for t in range(1, j + 1):
            integral = ctx.add(
                ctx.multiply(ctx.power(ln_a, Decimal(t)), base),
                ctx.multiply(ctx.divide(Decimal(t), Decimal(i - 1)), integral),
            )
        total = ctx.add(total, ctx.multiply(coeff, integral))
    return total


def _em_tail(model: Model, a: Decimal, ctx: Context) -> Decimal:
    """sum_{k>=a} f(k) ~ integral_a^inf f + f(a)/2 - f'(a)/12."""
    integral = _model_tail_integral(model, a, ctx)
    half = ctx.divide(_model_eval(model, a, ctx), Decimal(2))
    deriv = _model_derivative(model, ctx)
    twelfth = ctx.divide(_model_eval(deriv, a, ctx), Decimal(12))
    return ctx.subtract(ctx.add(integral, half), twelfth)


def _error_estimate(value_model: Model, omitted_model: Model, a: Decimal, ctx: Context) -> Decimal:
    """Safety-scaled size of the first omitted corrections.

    Two truncations happened: the summand model dropped its next series
    level, and Euler--Maclaurin dropped the f'''(a)/720 term.  Both are
    evaluated and inflated by 10.
    """
    omitted_integral = abs(_model_tail_integral(omitted_model, a, ctx)) if omitted_model else Decimal(0)
    third = value_model
    for _ in range(3):
        third = _model_derivative(third, ctx)
    em_term = ctx.divide(abs(_model_eval(third, a, ctx)), Decimal(720))
    return ctx.multiply(Decimal(10), ctx.add(omitted_integral, em_term))


# ---------------------------------------------------------------------------
# the shared direct + tail runner
# ---------------------------------------------------------------------------


def _run_sum(term, models, digits: int, precision: int, depth: int | None):
    """Stream the orbit, add the tail model, stop when certifiably accurate.

    ``term(ctx, k, alpha) -> Decimal`` is the direct summand; ``models(ctx,
    c_dec) -> (value_model, omitted_model)`` builds the tail.  Returns
    ``(total, depth_used, tail, error)`` as raw decimals at ``precision``.
    """
    ctx = Context(prec=precision)
    c_dec = PrecReal(_default_c(precision), precision).value
    value_model, omitted_model = models(ctx, c_dec)
    tolerance = Decimal(1).scaleb(-(digits + 2))
    stream = logistic_decimals(precision)
    partial = Decimal(0)
    k = 0
    # an explicit depth bypasses the adaptive schedule entirely
    schedule = list(_CHECKPOINTS) if depth is None else [depth]
    for n in schedule:
        while k <= n:
            partial = ctx.add(partial, term(ctx, k, next(stream)))
            k += 1
        a = Decimal(n + 1)
        tail = _em_tail(value_model, a, ctx)
        error = _error_estimate(value_model, omitted_model, a, ctx)
        total = ctx.add(partial, tail)
        if depth is not None and n == depth:
            return total, n, tail, error
        if error <= ctx.multiply(tolerance, abs(total)):
            return total, n, tail, error
    raise RefusalError(
        f"no depth up to {_CHECKPOINTS[-1]} brings the tail error below "
        f"10^-{digits + 2} of the sum; request fewer digits"
    )


def _ladder_sum(term, models, m: int, digits: int, depth: int | None) -> SumResult:
    """Run ``_run_sum`` at D+20 digits, confirm at D+40, report the better run."""
    working = digits + GUARD_DIGITS
    lo_total, n_used, _lo_tail, _lo_err = _run_sum(term, models, digits, working, depth)
    hi_total, _n2, hi_tail, hi_err = _run_sum(term, models, digits, working + GUARD_DIGITS, n_used)
    if abs(lo_total - hi_total) > Decimal(1).scaleb(-digits):
        raise PrecisionError(
            f"reruns at precisions {working} and {working + GUARD_DIGITS} disagree "
            f"beyond 10^-{digits}"
        )
    hi = working + GUARD_DIGITS
    return SumResult(
        m=m,
        value=PrecReal(hi_total, hi),
        terms_summed=n_used + 1,
        tail_correction=PrecReal(hi_tail, hi),
        error_estimate=PrecReal(hi_err, hi),
    )


def _pow_int(ctx: Context, a: Decimal, m: int) -> Decimal:
    out = a
    for _ in range(m - 1):
        out = ctx.multiply(out, a)
    return out


# ---------------------------------------------------------------------------
# public operations
# ---------------------------------------------------------------------------


def s2_identity_check(n: int, *, cap: int = EXACT_STEP_CAP) -> S2Witness:
    """Exact witness that sum_{k<=n} alpha_k^2 equals 1/2 - alpha_{n+1}.

    Pure rational arithmetic end to end; ``holds`` is exact equality, not a
    tolerance check.
    """
    orbit = logistic_iterate(n + 1, cap=cap + 1)
    partial = sum((a * a for a in orbit[: n + 1]), Fraction(0))
    complement = Fraction(1, 2) - orbit[n + 1]
    return S2Witness(n=n, partial=partial, complement=complement, holds=partial == complement)


def power_sum(m: int, digits: int, *, depth: int | None = None) -> SumResult:
    """s_m = sum alpha_k^m for m >= 2, certified to ``digits`` places.

    ``depth`` overrides the adaptive direct-summation cutoff (diagnostics
    and self-consistency tests); the accuracy contract then degrades to
    whatever the reported error_estimate says.
    """
    if m < 2:
        raise DomainError("power sums need m >= 2; the m = 1 sum only exists regularized")
    if digits < 1:
        raise DomainError("digits must be positive")
    if digits > MAX_DIGITS_POWER:
        raise RefusalError(
            f"the three-term tail model certifies at most {MAX_DIGITS_POWER} digits "
            f"for power sums, got {digits}"
        )

    def term(ctx, k, alpha):
        return _pow_int(ctx, alpha, m)

    def models(ctx, c_dec):
        base = _alpha_model(c_dec, ctx)
        full = _model_pow(base, m, m + 3, ctx)
        return _split_levels(full, m + 2)

    return _ladder_sum(term, models, m, digits, depth)


def regularized_s1(digits: int, *, depth: int | None = None) -> SumResult:
    """s_1 = alpha_0 + sum_{k>=1} (alpha_k - 1/k), certified to ``digits``.

    The summand decays like -ln(k)/k^2, so the direct part needs deep
    cutoffs; the series model (whose 1/k level cancels exactly against the
    regularizer) accelerates it to the supported 8 digits.
    """
    if digits < 1:
        raise DomainError("digits must be positive")
    if digits > MAX_DIGITS_S1:
        raise RefusalError(
            f"the three-term tail model certifies at most {MAX_DIGITS_S1} digits "
            f"for the regularized sum, got {digits}"
        )

    one = Decimal(1)

    def term(ctx, k, alpha):
        if k == 0:
            return alpha
        return ctx.subtract(alpha, ctx.divide(one, Decimal(k)))

    def models(ctx, c_dec):
        base = _alpha_model(c_dec, ctx)
        base.pop((1, 0), None)  # cancelled exactly by the 1/k regularizer
        return _split_levels(base, 3)

    return _ladder_sum(term, models, 1, digits, depth)


def sum_of_power_sums(digits: int, *, depth: int | None = None) -> SumResult:
    """sum_{m>=2} s_m, resummed as the single sum over k of a_k^2/(1-a_k).

    Interchanging the two summations turns the m-family into a geometric
    column sum, so one orbit pass covers every power at once.  Reported
    with ``m = 0`` as the family marker.
    """
    if digits < 1:
        raise DomainError("digits must be positive")
    if digits > MAX_DIGITS_POWER:
        raise RefusalError(
            f"the three-term tail model certifies at most {MAX_DIGITS_POWER} digits, "
            f"got {digits}"
        )

    one = Decimal(1)

    def term(ctx, k, alpha):
        return ctx.divide(ctx.multiply(alpha, alpha), ctx.subtract(one, alpha))

    def models(ctx, c_dec):
        base = _alpha_model(c_dec, ctx)
        # alpha^2/(1-alpha) = alpha^2 * (1 + alpha + alpha^2 + alpha^3 + ...)
        geometric: Model = {(0, 0): Decimal(1)}
        power: Model = {(0, 0): Decimal(1)}
        for _ in range(3):
            power = _model_mul(power, base, 3, ctx)
            for key, value in power.items():
                geometric[key] = ctx.add(geometric.get(key, Decimal(0)), value)
        square = _model_mul(base, base, 5, ctx)
        full = _model_mul(square, geometric, 5, ctx)
        return _split_levels(full, 4)

    return _ladder_sum(term, models, 0, digits, depth)


def bootstrap_check(digits: int) -> BootstrapReport:
    """Evaluate both sides of c = 2 + gamma + s_1 + sum_{m>=2} s_m.

    The left side is the critical-module constant c = C/2; the right side
    is assembled entirely from orbit sums.  The residual is limited by the
    8-digit cap on s_1, so requests beyond 6 digits are refused.
    """
    if digits < 1:
        raise DomainError("digits must be positive")
    if digits > MAX_DIGITS_BOOTSTRAP:
        raise RefusalError(
            f"the bootstrap residual is certified to at most {MAX_DIGITS_BOOTSTRAP} "
            f"digits (s_1 caps it), got {digits}"
        )
    precision = digits + 2 * GUARD_DIGITS
    c_half = PrecReal(_default_c(precision), precision) / 2
    gamma = euler_gamma(precision)
    s1 = regularized_s1(MAX_DIGITS_S1)
    tail_family = sum_of_power_sums(10)
    formula = 2 + gamma + PrecReal(s1.value, precision) + PrecReal(tail_family.value, precision)
    residual = c_half - formula
    return BootstrapReport(
        digits=digits,
        c=c_half,
        gamma=gamma,
        s1=s1.value,
        sum_m_ge_2=tail_family.value,
        formula_value=formula,
        residual=residual,
    )


def harmonic_divergence_diagnostic(n: int, precision: int) -> tuple[PrecReal, PrecReal]:
    """(sum_{k<=n} alpha_k, ln n + gamma + s_1): the divergence pattern.

    The partial sums of the logistic orbit drift like the harmonic series;
    their gap to the reference tends to 0 (empirically like ln(n)/n).
    """
    if n < 100:
        raise DomainError("the diagnostic needs n >= 100")
    ctx = Context(prec=precision)
    stream = logistic_decimals(precision)
    partial = Decimal(0)
    for _ in range(n + 1):
        partial = ctx.add(partial, next(stream))
    s1 = regularized_s1(MAX_DIGITS_S1)
    reference = (
        PrecReal(ctx.ln(Decimal(n)), precision)
        + euler_gamma(precision)
        + PrecReal(s1.value, precision)
    )
    return PrecReal(partial, precision), reference
