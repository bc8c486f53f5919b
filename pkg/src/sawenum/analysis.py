"""Series analysis: differential approximants, asymptotic fits, ratios.

A differential approximant represents a truncated series F(x) as a solution
of an inhomogeneous linear ODE

    sum_{i=0..K} Q_i(x) (x d/dx)^i F(x) = P(x),

whose polynomial coefficients are fitted exactly (rational arithmetic) to the
highest available series coefficients.  Singularities of F are estimated by
the roots of Q_K; the critical exponent at a root x* of multiplicity one is

    lambda = Q_{K-1}(x*) / (x* Q_K'(x*)) - K + 1.

Amplitude fits solve for the leading amplitudes of the standard asymptotic
form with analytic and half-integer correction terms plus an antiferromagnetic
(alternating) background term.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath

#: (leading exponent, alternating-term exponent) of the coefficient
#: asymptotics for each quantity: count c_n, then the three metric series.
MODEL_EXPONENTS = {
    "count": (Fraction(11, 32), Fraction(-3, 2)),
    "r2e": (Fraction(59, 32), Fraction(-3, 2)),
    "r2m": (Fraction(91, 32), Fraction(1)),
    "r2g": (Fraction(123, 32), Fraction(2)),
}


class AnalysisError(ValueError):
    """Defective approximant or unsolvable fit."""


@dataclass(frozen=True)
class DASpec:
    """Shape of one differential approximant.

    ``qdegrees[i]`` is the degree of Q_i (i = 0..K); ``pdegree`` is the degree
    of the inhomogeneous polynomial P, or -1 for a homogeneous approximant.
    """

    qdegrees: tuple[int, ...]
    pdegree: int = -1

    @property
    def order(self) -> int:
        return len(self.qdegrees) - 1

    @property
    def unknowns(self) -> int:
        # q_{K,0} is fixed to 1 by normalization
        return sum(d + 1 for d in self.qdegrees) - 1 + (self.pdegree + 1)


@dataclass(frozen=True)
class SingularityEstimate:
    """Physical-singularity estimate from one approximant."""

    x: float
    exponent: float
    spec: DASpec
    last_n: int  # index of the highest series coefficient used


def _solve_exact(matrix: list[list[Fraction]], rhs: list[Fraction]):
    """Gaussian elimination over the rationals; None for inconsistent systems.

    Rank-deficient but consistent systems (the series satisfies a smaller
    exact ODE, so the fit has spare freedom) get the particular solution with
    every free variable set to zero.
    """
    n = len(matrix)
    a = [row[:] + [rhs[i]] for i, row in enumerate(matrix)]
    pivots: dict[int, int] = {}  # column -> pivot row
    prow = 0
    for col in range(n):
        pivot = next((r for r in range(prow, n) if a[r][col]), None)
        if pivot is None:
            continue  # free column
        a[prow], a[pivot] = a[pivot], a[prow]
        inv = 1 / a[prow][col]
        a[prow] = [v * inv for v in a[prow]]
        for r in range(n):
            if r != prow and a[r][col]:
                f = a[r][col]
                a[r] = [v - f * w for v, w in zip(a[r], a[prow])]
        pivots[col] = prow
        prow += 1
    for r in range(prow, n):
        if a[r][n]:
            return None  # inconsistent
    sol = [Fraction(0)] * n
    for col, r in pivots.items():
        sol[col] = a[r][n]
    return sol


def differential_approximant(coeffs, spec: DASpec, last_n: int | None = None):
    """Fit the ODE to the series; returns (q_polys, p_poly) as Fractions.

    ``coeffs`` are the series coefficients c_0..c_N (ints or Fractions); the
    ``spec.unknowns`` equations match the coefficients of x^m for the highest
    usable m ending at ``last_n`` (default: the last coefficient).
    """
    if last_n is None:
        last_n = len(coeffs) - 1
    if last_n >= len(coeffs):
        raise AnalysisError(f"series has no coefficient {last_n}")
    k = spec.order
    n_eq = spec.unknowns
    if last_n + 1 < n_eq:
        raise AnalysisError(
            f"need {n_eq} coefficients, have {last_n + 1}"
        )
    ms = range(last_n - n_eq + 1, last_n + 1)

    # unknown layout: q_{i,j} for all (i, j) except (K, 0), then p_0..p_M
    cols: list[tuple[int, int]] = []
    for i, d in enumerate(spec.qdegrees):
        for j in range(d + 1):
            if not (i == k and j == 0):
                cols.append((i, j))
    npq = len(cols)

    matrix = []
    rhs = []
    for m in ms:
        row = [Fraction(0)] * n_eq
        for idx, (i, j) in enumerate(cols):
            if 0 <= m - j < len(coeffs):
                row[idx] = Fraction((m - j) ** i) * coeffs[m - j]
        if 0 <= m <= spec.pdegree:
            row[npq + m] = Fraction(-1)
        matrix.append(row)
        # normalized term q_{K,0} = 1 moved to the right-hand side
        rhs.append(-Fraction(m**k) * coeffs[m])
    sol = _solve_exact(matrix, rhs)
    if sol is None:
        raise AnalysisError("singular fitting system (defective approximant)")

    q_polys = []
    pos = 0
    for i, d in enumerate(spec.qdegrees):
        poly = []
        for j in range(d + 1):
            if i == k and j == 0:
                poly.append(Fraction(1))
            else:
                poly.append(sol[pos])
                pos += 1
        q_polys.append(poly)
    p_poly = list(sol[npq:]) if spec.pdegree >= 0 else []
    return q_polys, p_poly


def _poly_eval(poly, x):
    acc = mpmath.mpf(0)
    for c in reversed(poly):
        acc = acc * x + mpmath.mpf(c.numerator) / c.denominator
    return acc


def _poly_derivative(poly):
    return [c * j for j, c in enumerate(poly)][1:]


def singularity_estimate(
    coeffs,
    spec: DASpec,
    last_n: int | None = None,
    dps: int = 30,
) -> SingularityEstimate:
    """Physical singularity (smallest positive real root of Q_K) and exponent.

    Raises AnalysisError for defective approximants: singular fit, no positive
    real root, or a root of Q_K shared with Q_{K-1} (non-simple behaviour).
    """
    if last_n is None:
        last_n = len(coeffs) - 1
    q_polys, _ = differential_approximant(coeffs, spec, last_n)
    k = spec.order
    with mpmath.workdps(dps):
        qk = [mpmath.mpf(c.numerator) / c.denominator for c in q_polys[k]]
        while qk and qk[-1] == 0:
            qk.pop()
        if len(qk) < 2:
            raise AnalysisError("Q_K is constant; no singularity")
        try:
            roots = mpmath.polyroots(list(reversed(qk)), maxsteps=200,
                                     extraprec=80)
        except mpmath.libmp.NoConvergence as exc:
            raise AnalysisError("root finding did not converge") from exc
        real_tol = mpmath.mpf(10) ** (-dps // 2)
        positive = [
            r.real for r in roots
            if abs(r.imag) < real_tol * max(1, abs(r)) and r.real > 0
        ]
        if not positive:
            raise AnalysisError("no positive real root of Q_K")
        x_star = min(positive)
        dqk = _poly_derivative(q_polys[k])
        denom = x_star * _poly_eval(dqk, x_star)
        if denom == 0:
            raise AnalysisError("multiple root of Q_K")
        lam = _poly_eval(q_polys[k - 1], x_star) / denom - k + 1
        return SingularityEstimate(float(x_star), float(lam), spec, last_n)


def balanced_spec(order: int, pdegree: int, n_terms: int) -> DASpec:
    """The [d, d, ..., d; pdegree] spec using as close to n_terms coefficients
    as possible with equal Q degrees."""
    d = (n_terms - (pdegree + 1) - order) // (order + 1)
    if d < 1:
        raise AnalysisError("too few terms for this approximant shape")
    return DASpec(tuple([d] * (order + 1)), pdegree)


def da_scan(
    coeffs,
    orders=(2, 3),
    pdegrees=(0, 2, 4, 6, 8, 10),
    min_last_n: int | None = None,
    dps: int = 30,
) -> list[SingularityEstimate]:
    """All non-defective balanced approximants ending at each usable series
    coefficient >= min_last_n (default: use at least 3/4 of the series)."""
    n_max = len(coeffs) - 1
    if min_last_n is None:
        min_last_n = (3 * n_max) // 4
    out = []
    for last_n in range(min_last_n, n_max + 1):
        for order in orders:
            for pdeg in pdegrees:
                try:
                    spec = balanced_spec(order, pdeg, last_n + 1)
                    out.append(
                        singularity_estimate(coeffs, spec, last_n, dps)
                    )
                except AnalysisError:
                    continue
    return out


def summarize_estimates(estimates) -> tuple[float, float, float, float]:
    """(mean x, std x, mean exponent, std exponent) over the estimates."""
    if not estimates:
        raise AnalysisError("no estimates to summarize")
    xs = [e.x for e in estimates]
    ls = [e.exponent for e in estimates]

    def stats(v):
        mean = sum(v) / len(v)
        var = sum((u - mean) ** 2 for u in v) / len(v)
        return mean, math.sqrt(var)

    mx, sx = stats(xs)
    ml, sl = stats(ls)
    return mx, sx, ml, sl


@dataclass
class AmplitudeFit:
    """Solution of a square asymptotic fit ending at coefficient ``last_n``.

    ``a`` are the amplitudes of the leading (mu^n n^e1) part with term powers
    n^0, 1/n, 1/n^{3/2}, 1/n^2, 1/n^{5/2}, ...; ``b`` those of the alternating
    ((-1)^n mu^n n^e2) part with powers n^0, 1/n, 1/n^2, ...
    """

    a: list[float]
    b: list[float]
    e1: float
    e2: float
    mu: float
    last_n: int

    @property
    def leading(self) -> float:
        return self.a[0]


def _a_power(i: int) -> Fraction:
    # 0, -1, -3/2, -2, -5/2, ...: analytic plus half-integer corrections
    return Fraction(0) if i == 0 else -Fraction(i + 1, 2)


def amplitude_fit(
    coeffs,
    mu: float,
    e1,
    e2,
    k: int,
    m: int,
    last_n: int | None = None,
    dps: int = 40,
) -> AmplitudeFit:
    """Fit ``k`` leading-part and ``m`` alternating-part amplitudes.

    Solves the square linear system matching c_n exactly at the ``k + m``
    indices ending at ``last_n``; precision ``dps`` covers the wild dynamic
    range of mu^n.
    """
    if last_n is None:
        last_n = len(coeffs) - 1
    if k < 1 or m < 0:
        raise AnalysisError("need k >= 1 and m >= 0")
    size = k + m
    if last_n + 1 < size or last_n - size + 1 < 1:
        raise AnalysisError("not enough coefficients for this fit")
    with mpmath.workdps(dps):
        mu_ = mpmath.mpf(mu)
        e1_ = mpmath.mpf(e1.numerator) / e1.denominator \
            if isinstance(e1, Fraction) else mpmath.mpf(e1)
        e2_ = mpmath.mpf(e2.numerator) / e2.denominator \
            if isinstance(e2, Fraction) else mpmath.mpf(e2)
        rows = []
        rhs = []
        for n in range(last_n - size + 1, last_n + 1):
            nn = mpmath.mpf(n)
            sign = -1 if n % 2 else 1
            row = [
                nn ** (mpmath.mpf(_a_power(i).numerator)
                       / _a_power(i).denominator)
                for i in range(k)
            ]
            row += [sign * nn ** (e2_ - e1_ - j) for j in range(m)]
            rows.append(row)
            rhs.append(mpmath.mpf(coeffs[n]) / (mu_**n * nn**e1_))
        try:
            sol = mpmath.lu_solve(mpmath.matrix(rows), mpmath.matrix(rhs))
        except ZeroDivisionError as exc:
            raise AnalysisError("singular amplitude fit") from exc
        vals = [float(v) for v in sol]
    return AmplitudeFit(vals[:k], vals[k:], float(e1_), float(e2_),
                        float(mu), last_n)


def amplitude_trajectory(coeffs, mu, e1, e2, k, m, first_last_n=None):
    """AmplitudeFit at every usable ``last_n``; for plotting a_0 versus 1/n."""
    n_max = len(coeffs) - 1
    if first_last_n is None:
        first_last_n = max(k + m + 1, (2 * n_max) // 3)
    fits = []
    for last_n in range(first_last_n, n_max + 1):
        try:
            fits.append(amplitude_fit(coeffs, mu, e1, e2, k, m, last_n))
        except AnalysisError:
            continue
    return fits


@dataclass(frozen=True)
class RatioReport:
    """Universal amplitude ratios from the four critical amplitudes."""

    d_over_c: float
    e_over_c: float
    f: float  # predicted to vanish


def universal_ratios(c: float, d: float, e: float) -> RatioReport:
    """F = (246/91) D/C - 2 E/C + 1/2 from the three metric amplitudes.

    Raw asymptotic fits of the metric series yield the products AC, AD and AE
    with the walk-count amplitude A; divide those by A before calling."""
    doc = d / c
    eoc = e / c
    return RatioReport(doc, eoc, (246.0 / 91.0) * doc - 2.0 * eoc + 0.5)


def da_report_rows(estimates):
    """CSV rows (order, pdegree, last_n, x, exponent) for a scan result."""
    return [
        (e.spec.order, e.spec.pdegree, e.last_n, repr(e.x), repr(e.exponent))
        for e in estimates
    ]


def amplitude_report_rows(fits):
    """CSV rows (inv_n, a0_estimate) for an amplitude trajectory."""
    return [(repr(1.0 / f.last_n), repr(f.leading)) for f in fits]
