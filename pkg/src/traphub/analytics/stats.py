"""Statistical primitives: ANOVA, two-sample t-test, Pearson correlation.

p-values come from the regularized incomplete beta function, evaluated with
a continued fraction (modified Lentz) to relative error <= 1e-10, so no
statistical tables or external stats library are needed at runtime.
"""

from __future__ import annotations

import math
from collections.abc import Sequence

from ..errors import DegenerateGroups, TooFewGroups, TooShort, ZeroVariance
from ..model import StatTestKind, StatTestResult

__all__ = [
    "anova",
    "t_test",
    "pearson",
    "pearson_test",
    "regularized_incomplete_beta",
    "f_sf",
    "t_sf_two_sided",
    "sample_std",
    "quantile",
    "moving_average",
]

_EPS = 1e-14
_FPMIN = 1e-300
_MAX_ITER = 300


def _beta_cf(a: float, b: float, x: float) -> float:
    """Continued fraction for the incomplete beta (modified Lentz)."""
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _FPMIN:
        d = _FPMIN
    d = 1.0 / d
    h = d
    for m in range(1, _MAX_ITER + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _FPMIN:
            d = _FPMIN
        c = 1.0 + aa / c
        if abs(c) < _FPMIN:
            c = _FPMIN
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _FPMIN:
            d = _FPMIN
        c = 1.0 + aa / c
        if abs(c) < _FPMIN:
            c = _FPMIN
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            return h
    raise ArithmeticError(f"incomplete beta did not converge for a={a}, b={b}, x={x}")


def regularized_incomplete_beta(a: float, b: float, x: float) -> float:
    """I_x(a, b) for a, b > 0 and x in [0, 1]."""
    if not (a > 0 and b > 0):
        raise ValueError("shape parameters must be positive")
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return 1.0
    ln_front = (
        a * math.log(x)
        + b * math.log1p(-x)
        - (math.lgamma(a) + math.lgamma(b) - math.lgamma(a + b))
    )
    front = math.exp(ln_front)
    # the continued fraction converges fast only on one side of the mean
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _beta_cf(a, b, x) / a
    return 1.0 - front * _beta_cf(b, a, 1.0 - x) / b


def f_sf(f_value: float, df_num: int, df_den: int) -> float:
    """Upper tail of the F distribution: P(F >= f_value)."""
    if f_value <= 0.0:
        return 1.0
    x = df_den / (df_den + df_num * f_value)
    return regularized_incomplete_beta(df_den / 2.0, df_num / 2.0, x)


def t_sf_two_sided(t_value: float, df: int) -> float:
    """Two-sided p for Student's t: P(|T| >= |t_value|)."""
    if t_value == 0.0:
        return 1.0
    x = df / (df + t_value * t_value)
    return regularized_incomplete_beta(df / 2.0, 0.5, x)


def _mean(values: Sequence[float]) -> float:
    return sum(values) / len(values)


def sample_std(values: Sequence[float]) -> float:
    """n-1 standard deviation; requires len >= 2."""
    n = len(values)
    if n < 2:
        raise TooShort(f"sample std needs >= 2 values, got {n}")
    m = _mean(values)
    return math.sqrt(sum((v - m) ** 2 for v in values) / (n - 1))


def anova(groups: Sequence[Sequence[float]]) -> StatTestResult:
    """One-way ANOVA over >= 2 groups of >= 2 values each.

    F = MS_between / MS_within with df (k-1, N-k). A zero within-group mean
    square is reported as DegenerateGroups rather than an infinite F.
    """
    k = len(groups)
    if k < 2:
        raise TooFewGroups(f"ANOVA needs >= 2 groups, got {k}")
    for i, g in enumerate(groups):
        if len(g) < 2:
            raise TooFewGroups(f"ANOVA group {i} has {len(g)} values, needs >= 2")
    n_total = sum(len(g) for g in groups)
    grand = sum(sum(g) for g in groups) / n_total
    means = [_mean(g) for g in groups]
    ss_between = sum(len(g) * (m - grand) ** 2 for g, m in zip(groups, means))
    ss_within = sum(sum((v - m) ** 2 for v in g) for g, m in zip(groups, means))
    df_between = k - 1
    df_within = n_total - k
    if ss_within == 0.0:
        raise DegenerateGroups("zero within-group variance, F undefined")
    f_value = (ss_between / df_between) / (ss_within / df_within)
    return StatTestResult(
        statistic=f_value,
        df=(df_between, df_within),
        p_value=f_sf(f_value, df_between, df_within),
        kind=StatTestKind.ANOVA_F,
    )


def t_test(a: Sequence[float], b: Sequence[float]) -> StatTestResult:
    """Pooled-variance two-sided two-sample t-test, df = n_a + n_b - 2."""
    n_a, n_b = len(a), len(b)
    if n_a < 2 or n_b < 2:
        raise TooShort(f"t-test needs >= 2 values per sample, got {n_a} and {n_b}")
    m_a, m_b = _mean(a), _mean(b)
    df = n_a + n_b - 2
    pooled_var = (
        sum((v - m_a) ** 2 for v in a) + sum((v - m_b) ** 2 for v in b)
    ) / df
    if pooled_var == 0.0:
        if m_a == m_b:
            return StatTestResult(0.0, (df,), 1.0, StatTestKind.TWO_SAMPLE_T)
        raise ZeroVariance("both samples constant but unequal, t undefined")
    t_value = (m_a - m_b) / math.sqrt(pooled_var * (1.0 / n_a + 1.0 / n_b))
    return StatTestResult(
        statistic=t_value,
        df=(df,),
        p_value=t_sf_two_sided(t_value, df),
        kind=StatTestKind.TWO_SAMPLE_T,
    )


def _complete_pairs(
    x: Sequence[float | None], y: Sequence[float | None]
) -> tuple[list[float], list[float]]:
    xs, ys = [], []
    for xv, yv in zip(x, y):
        if xv is None or yv is None:
            continue
        if xv != xv or yv != yv:  # NaN
            continue
        xs.append(float(xv))
        ys.append(float(yv))
    return xs, ys


def pearson(x: Sequence[float | None], y: Sequence[float | None]) -> float:
    """Pearson r over pairwise-complete observations; r clamped to [-1, 1]."""
    if len(x) != len(y):
        raise TooShort(f"series lengths differ: {len(x)} vs {len(y)}")
    xs, ys = _complete_pairs(x, y)
    n = len(xs)
    if n < 2:
        raise TooShort(f"Pearson needs >= 2 complete pairs, got {n}")
    m_x, m_y = _mean(xs), _mean(ys)
    ss_x = sum((v - m_x) ** 2 for v in xs)
    ss_y = sum((v - m_y) ** 2 for v in ys)
    if ss_x == 0.0 or ss_y == 0.0:
        raise ZeroVariance("a series with zero variance has no correlation")
    cov = sum((a - m_x) * (b - m_y) for a, b in zip(xs, ys))
    return max(-1.0, min(1.0, cov / math.sqrt(ss_x * ss_y)))


def pearson_test(x: Sequence[float | None], y: Sequence[float | None]) -> StatTestResult:
    """Pearson r with its two-sided significance via the t transform (df = n-2)."""
    xs, ys = _complete_pairs(x, y)
    r = pearson(x, y)
    n = len(xs)
    if n < 3 or abs(r) == 1.0:
        p = 0.0 if abs(r) == 1.0 else 1.0
    else:
        t_value = r * math.sqrt((n - 2) / (1.0 - r * r))
        p = t_sf_two_sided(t_value, n - 2)
    return StatTestResult(statistic=r, df=(n - 2,), p_value=p, kind=StatTestKind.PEARSON_R)


def quantile(values: Sequence[float], q: float) -> float:
    """Linear-interpolation quantile over the sorted values (inclusive method)."""
    if not values:
        raise TooShort("quantile of empty sequence")
    if not (0.0 <= q <= 1.0):
        raise ValueError(f"q must be in [0, 1], got {q}")
    ordered = sorted(values)
    pos = (len(ordered) - 1) * q
    lower = math.floor(pos)
    frac = pos - lower
    if frac == 0.0:
        return float(ordered[lower])
    return ordered[lower] + (ordered[lower + 1] - ordered[lower]) * frac


def moving_average(values: Sequence[float], window: int) -> list[float | None]:
    """Trailing moving average; None until the first full window."""
    if window < 1:
        raise ValueError(f"window must be >= 1, got {window}")
    out: list[float | None] = []
    acc = 0.0
    for i, v in enumerate(values):
        acc += v
        if i >= window:
            acc -= values[i - window]
        out.append(acc / window if i >= window - 1 else None)
    return out
