"""Double-precision building blocks for basic (Heine) hypergeometric series.

q-Pochhammer symbols, series coefficients and point evaluation of
Phi[a,b;c;q,z], the classical Gauss series F(a,b;c;z) used for q->1 limit
checks, the q-difference operator, Jackson's q-Gamma function, and a
four-way identity residual report.

All evaluators are pure functions; nothing here holds mutable state.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Tuple, Union

import numpy as np

from .errors import DenominatorZero, DomainError, NoConvergence

INFINITY = math.inf

DEFAULT_TOL = 1e-12
MAX_TERMS = 100_000

# |a| q^k below this leaves an infinite product fixed at double precision
_INF_PRODUCT_EPS = 1e-17
# the relative-term stopping rule must fire this many times in a row
_CONSECUTIVE_SMALL = 3
# verify_identities switches to extended precision once any series'
# absolute-term sum, weighted by the identity prefactor it meets, exceeds
# this; beyond it double cancellation error would swamp residuals near 1e-13
_ESCALATE_SCALE = 100.0


@dataclass(frozen=True)
class ParamSet:
    """Real parameter tuple (a, b, c, q) with 0 < q < 1.

    c may not equal q^{-m} for any integer m >= 0: such values zero out a
    factor (1 - c q^m) in every series denominator.
    """

    a: float
    b: float
    c: float
    q: float

    def __post_init__(self):
        if not 0.0 < self.q < 1.0:
            raise DomainError(f"q must lie in (0,1), got {self.q}")
        if self.c > 0.0:
            if self.c >= 1.0:
                m = round(math.log(1.0 / self.c) / math.log(self.q)) if self.c > 1.0 else 0
                if m >= 0 and abs(self.c * self.q**m - 1.0) < 1e-14:
                    raise DomainError(
                        f"c={self.c} equals q^-{m}; denominator (1-c q^{m}) vanishes"
                    )

    def shifted(self, *, a=None, b=None, c=None):
        """Copy with some of a, b, c replaced (q never changes)."""
        return ParamSet(
            self.a if a is None else a,
            self.b if b is None else b,
            self.c if c is None else c,
            self.q,
        )


@dataclass(frozen=True)
class EvalResult:
    """A point value together with the work done and a tail-error estimate."""

    value: complex
    terms_used: int
    est_error: float


@dataclass(frozen=True, eq=False)
class PowerSeries:
    """Finite coefficient list A_0..A_N of a function analytic at 0."""

    coeffs: np.ndarray

    @property
    def truncation_order(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, z: complex) -> complex:
        acc = 0j
        for c in self.coeffs[::-1]:
            acc = acc * z + c
        return acc


def q_pochhammer(a: complex, q: float, n: Union[int, float]) -> complex:
    """(a;q)_n = prod_{k=0}^{n-1} (1 - a q^k); n may be INFINITY.

    The infinite product is truncated once |a| q^k drops below the level
    where further factors cannot move a double.
    """
    if not 0.0 < q < 1.0:
        raise DomainError(f"q must lie in (0,1), got {q}")
    if n == INFINITY:
        if a == 0:
            return 1.0
        k_max = max(1, int(math.log(_INF_PRODUCT_EPS / abs(a)) / math.log(q)) + 2)
        factors = 1.0 - a * geometric_powers(q, k_max)
    else:
        if n < 0 or n != int(n):
            raise DomainError(f"n must be a nonnegative integer or INFINITY, got {n}")
        n = int(n)
        if n == 0:
            return 1.0
        factors = 1.0 - a * geometric_powers(q, n)
    prod = factors.prod()
    return complex(prod) if np.iscomplexobj(factors) else float(prod)


def geometric_powers(x: float, count: int) -> np.ndarray:
    """[1, x, x^2, ..., x^(count-1)] by cumulative product."""
    if count <= 0:
        return np.ones(0)
    return np.concatenate([[1.0], np.cumprod(np.full(count - 1, x))])


@lru_cache(maxsize=256)
def _heine_coeffs_cached(p: ParamSet, N: int) -> np.ndarray:
    qn = geometric_powers(p.q, N)
    den = (1.0 - p.c * qn) * (1.0 - p.q * qn)
    if np.any(den == 0.0):
        raise DenominatorZero(f"(1 - c q^n) vanished for p={p}")
    ratios = (1.0 - p.a * qn) * (1.0 - p.b * qn) / den
    out = np.concatenate([[1.0], np.cumprod(ratios)])
    out.setflags(write=False)
    return out


def heine_coeffs(p: ParamSet, N: int) -> PowerSeries:
    """Coefficients (a;q)_n (b;q)_n / ((c;q)_n (q;q)_n) for n = 0..N.

    Built by the multiplicative recurrence, vectorised as a cumulative
    product; raises DenominatorZero if any factor (1 - c q^n) vanishes.
    The returned coefficient array is cached and read-only.
    """
    if N < 0:
        raise DomainError(f"N must be >= 0, got {N}")
    if N == 0:
        return PowerSeries(np.ones(1))
    return PowerSeries(_heine_coeffs_cached(p, N))


def _sum_with_stopping(term_ratio: Callable[[int], complex], z: complex,
                       tol: float) -> Tuple[EvalResult, float]:
    """Kahan-compensated sum of t_0=1, t_{n+1} = t_n * term_ratio(n) * z.

    Stops once |t_n| < tol |sum| holds _CONSECUTIVE_SMALL times in a row;
    the error estimate is the geometric tail bound from the last term.
    Also returns sum |t_n|, the summation's cancellation scale.
    """
    s = 1.0 + 0.0j
    comp = 0.0j
    term = 1.0 + 0.0j
    small_run = 0
    prev_abs = 1.0
    abs_sum = 1.0
    for n in range(1, MAX_TERMS + 1):
        term = term * term_ratio(n - 1) * z
        y = term - comp
        t = s + y
        comp = (t - s) - y
        s = t
        t_abs = abs(term)
        abs_sum += t_abs
        if t_abs < tol * abs(s):
            small_run += 1
            if small_run >= _CONSECUTIVE_SMALL:
                ratio_obs = t_abs / prev_abs if prev_abs > 0.0 else abs(z)
                rho = min(0.9995, max(abs(z), ratio_obs))
                res = EvalResult(complex(s), n + 1, t_abs * rho / (1.0 - rho))
                return res, abs_sum
        else:
            small_run = 0
        prev_abs = t_abs if t_abs > 0.0 else prev_abs
    raise NoConvergence(f"series did not settle within {MAX_TERMS} terms")


def _heine_phi_scaled(p: ParamSet, z: complex, tol: float) -> Tuple[EvalResult, float]:
    if abs(z) >= 1.0:
        raise DomainError(f"Heine series requires |z| < 1, got |z|={abs(z)}")
    if tol <= 0.0:
        raise DomainError("tol must be positive")
    if z == 0:
        return EvalResult(1.0 + 0.0j, 1, 0.0), 1.0
    a, b, c, q = p.a, p.b, p.c, p.q

    def ratio(n):
        qn = q**n
        den = (1.0 - c * qn) * (1.0 - q * qn)
        if den == 0.0:
            raise DenominatorZero(f"(1 - c q^{n}) vanished for p={p}")
        return (1.0 - a * qn) * (1.0 - b * qn) / den

    return _sum_with_stopping(ratio, z, tol)


def heine_phi(p: ParamSet, z: complex, tol: float = DEFAULT_TOL) -> EvalResult:
    """Phi[a,b;c;q,z] by direct summation, |z| < 1."""
    return _heine_phi_scaled(p, z, tol)[0]


def gauss_f(a: float, b: float, c: float, z: complex,
            tol: float = DEFAULT_TOL) -> EvalResult:
    """Gauss hypergeometric series F(a,b;c;z), |z| < 1.

    Terminating cases (a or b a nonpositive integer) stop at the zero
    Pochhammer factor.
    """
    if abs(z) >= 1.0:
        raise DomainError(f"Gauss series requires |z| < 1, got |z|={abs(z)}")
    if c <= 0.0 and c == int(c):
        raise DomainError(f"c must not be a nonpositive integer, got {c}")
    if tol <= 0.0:
        raise DomainError("tol must be positive")
    if z == 0:
        return EvalResult(1.0 + 0.0j, 1, 0.0)

    def ratio(n):
        return (a + n) * (b + n) / ((c + n) * (1.0 + n))

    return _sum_with_stopping(ratio, z, tol)[0]


def gauss_coeffs(a: float, b: float, c: float, N: int) -> PowerSeries:
    """Coefficients (a)_n (b)_n / ((c)_n n!) for n = 0..N."""
    if c <= 0.0 and c == int(c):
        raise DomainError(f"c must not be a nonpositive integer, got {c}")
    if N == 0:
        return PowerSeries(np.ones(1))
    n = np.arange(N)
    ratios = (a + n) * (b + n) / ((c + n) * (1.0 + n))
    return PowerSeries(np.concatenate([[1.0], np.cumprod(ratios)]))


def q_diff(f: Union[PowerSeries, Callable[[complex], complex]], q: float,
           z: complex) -> complex:
    """q-difference operator (f(z) - f(qz)) / (z (1-q)); f'(0) at z = 0.

    At z = 0 a PowerSeries yields its exact first coefficient; a plain
    callable is approximated by a Richardson-extrapolated quotient at a
    small radius.
    """
    if not 0.0 < q < 1.0:
        raise DomainError(f"q must lie in (0,1), got {q}")
    if isinstance(f, PowerSeries):
        if z == 0:
            return complex(f.coeffs[1]) if len(f.coeffs) > 1 else 0.0j
        return (f(z) - f(q * z)) / (z * (1.0 - q))
    if z == 0:
        h = 1e-5
        d1 = (f(h) - f(q * h)) / (h * (1.0 - q))
        d2 = (f(h / 2) - f(q * h / 2)) / ((h / 2) * (1.0 - q))
        return 2.0 * d2 - d1
    return (f(z) - f(q * z)) / (z * (1.0 - q))


def q_gamma(x: float, q: float) -> float:
    """Jackson's q-Gamma: (q;q)_inf (1-q)^(1-x) / (q^x;q)_inf, x > 0."""
    if x <= 0.0:
        raise DomainError(f"q_gamma requires x > 0, got {x}")
    if not 0.0 < q < 1.0:
        raise DomainError(f"q must lie in (0,1), got {q}")
    num = q_pochhammer(q, q, INFINITY)
    den = q_pochhammer(q**x, q, INFINITY)
    return float(num / den * (1.0 - q) ** (1.0 - x))


def log_q(u: float, q: float) -> float:
    """log base q, defined for u > 0."""
    if u <= 0.0:
        raise DomainError(f"log_q requires u > 0, got {u}")
    if not 0.0 < q < 1.0:
        raise DomainError(f"q must lie in (0,1), got {q}")
    return math.log(u) / math.log(q)


IDENTITY_NAMES = ("L2.1a", "L2.1b-first", "L2.1b-second", "Dq-relation")


def _identity_residuals(values, a, b, c, q, z):
    """Residuals of the four contiguous relations from precomputed values.

    values = (Phi[a,b;c](z), Phi[a,bq;cq](z), Phi[aq,bq;cq^2](z),
              Phi[aq,b;c](z), Phi[aq,bq;cq](z), Phi[a,b;c](qz)).
    Works for doubles and for mpmath numbers alike.
    """
    f0, f_bq_cq, f_up2, f_aq, f_up1, f0_qz = values
    one = f0 / f0 if f0 != 0 else 1.0
    r_a = f0 - f_bq_cq - ((1 - a) * (c - b) / ((1 - c) * (1 - c * q))) * z * f_up2
    r_b1 = f_aq - f0 - (a * (1 - b) / (1 - c)) * z * f_up1
    r_b2 = f_aq - f0 - (a / (1 - a)) * (f0 - f0_qz)
    if z == 0:
        r_dq = 0 * one
    else:
        dq = (f0 - f0_qz) / (z * (1 - q))
        r_dq = z * dq - ((1 - a) * (1 - b) / ((1 - c) * (1 - q))) * z * f_up1
    return r_a, r_b1, r_b2, r_dq


def _identity_residuals_mp(a, b, c, q, z, dps):
    """The four residuals recomputed with mpmath at dps digits."""
    import mpmath

    with mpmath.workdps(dps):
        aa, bb, cc, qq = (mpmath.mpf(x) for x in (a, b, c, q))
        zz = mpmath.mpmathify(z)

        def phi(a1, b1, c1, zv):
            return mpmath.qhyper([a1, b1], [c1], qq, zv)

        values = (
            phi(aa, bb, cc, zz),
            phi(aa, bb * qq, cc * qq, zz),
            phi(aa * qq, bb * qq, cc * qq**2, zz),
            phi(aa * qq, bb, cc, zz),
            phi(aa * qq, bb * qq, cc * qq, zz),
            phi(aa, bb, cc, qq * zz),
        )
        return _identity_residuals(values, aa, bb, cc, qq, zz)


def verify_identities(p: ParamSet, z: complex, tol: float = DEFAULT_TOL) -> dict:
    """Absolute residuals of the contiguous-parameter identities at (p, z).

    Keys: "L2.1a", "L2.1b-first", "L2.1b-second", "Dq-relation".  When the
    series values are large enough that double-precision cancellation
    would swamp the residuals, the values are recomputed in extended
    precision so the report reflects the identities, not roundoff.
    """
    if abs(z) >= 1.0:
        raise DomainError(f"identities require |z| < 1, got |z|={abs(z)}")
    a, b, c, q = p.a, p.b, p.c, p.q
    if a == 1.0:
        raise DomainError("identity (b) second form requires a != 1")
    tight = min(tol, 1e-14)
    pairs = [
        _heine_phi_scaled(p, z, tight),
        _heine_phi_scaled(p.shifted(b=b * q, c=c * q), z, tight),
        _heine_phi_scaled(p.shifted(a=a * q, b=b * q, c=c * q**2), z, tight),
        _heine_phi_scaled(p.shifted(a=a * q), z, tight),
        _heine_phi_scaled(p.shifted(a=a * q, b=b * q, c=c * q), z, tight),
        _heine_phi_scaled(p, q * z, tight),
    ]
    az = abs(z)
    pref_a = abs((1 - a) * (c - b) / ((1 - c) * (1 - c * q))) * az
    pref_b1 = abs(a * (1 - b) / (1 - c)) * az
    pref_b2 = abs(a / (1 - a))
    pref_dq = abs((1 - a) * (1 - b) / ((1 - c) * (1 - q))) * az
    sums = [s for _, s in pairs]
    scale = max(
        sums[0] * max(1.0, pref_b2), sums[1], sums[2] * max(1.0, pref_a),
        sums[3], sums[4] * max(1.0, pref_b1, pref_dq),
        sums[5] * max(1.0, pref_b2),
    )
    if scale > _ESCALATE_SCALE:
        dps = 25 + max(0, int(math.log10(scale)))
        residuals = _identity_residuals_mp(a, b, c, q, z, dps)
    else:
        values = tuple(res.value for res, _ in pairs)
        residuals = _identity_residuals(values, a, b, c, q, complex(z))
    return {name: float(abs(r)) for name, r in zip(IDENTITY_NAMES, residuals)}


# ---------------------------------------------------------------------------
# truncated power-series arithmetic (used for moment extraction)

def series_mul(a: np.ndarray, b: np.ndarray, N: int) -> np.ndarray:
    """Coefficients of a*b truncated at order N."""
    out = np.convolve(a[: N + 1], b[: N + 1])[: N + 1]
    if len(out) < N + 1:
        out = np.pad(out, (0, N + 1 - len(out)))
    return out


def series_reciprocal(b: np.ndarray, N: int) -> np.ndarray:
    """Coefficients of 1/b truncated at order N; requires b[0] != 0."""
    if b[0] == 0:
        raise DomainError("series reciprocal requires a nonzero constant term")
    out = np.zeros(N + 1, dtype=np.result_type(b.dtype, float))
    out[0] = 1.0 / b[0]
    bn = b[: N + 1]
    for n in range(1, N + 1):
        k = min(n, len(bn) - 1)
        acc = np.dot(bn[1 : k + 1], out[n - 1 :: -1][:k])
        out[n] = -acc / bn[0]
    return out


def series_div(a: np.ndarray, b: np.ndarray, N: int) -> np.ndarray:
    """Coefficients of a/b truncated at order N via the standard recurrence."""
    if b[0] == 0:
        raise DomainError("series division requires a nonzero denominator constant term")
    out = np.zeros(N + 1, dtype=np.result_type(a.dtype, b.dtype, float))
    an = np.pad(a[: N + 1], (0, max(0, N + 1 - len(a))))
    bn = np.pad(b[: N + 1], (0, max(0, N + 1 - len(b))))
    for n in range(N + 1):
        acc = an[n] - np.dot(bn[1 : n + 1], out[n - 1 :: -1][:n]) if n else an[0]
        out[n] = acc / bn[0]
    return out
