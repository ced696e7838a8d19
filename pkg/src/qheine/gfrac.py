"""Continued-fraction (g-fraction) machinery for shifted-parameter ratios.

Three ratios of Heine series with shifted parameters admit explicit
continued fractions whose coefficients have closed forms.  Rewritten as
g-fractions 1/(1 - p_1 z/(1 - p_2 z/(1 - ...))) with p_k = (1-g_k')g_{k+1}'
for a sequence g' in [0,1], they are exactly Stieltjes transforms
int_0^1 dmu(t)/(1-tz) of probability-like measures on [0,1], so their
Taylor coefficients form totally monotone (Hausdorff) moment sequences.
This module builds the coefficient sequences, evaluates the fractions by
backward recurrence, extracts moment sequences by series division, and
tests total monotonicity.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional, Tuple, Union

import numpy as np

from .errors import (
    CutError,
    DegenerateParameter,
    DenominatorZero,
    DomainError,
    InconsistentCoefficients,
    NoConvergence,
)
from .qcore import EvalResult, ParamSet, heine_phi, series_reciprocal

_SERIES_FRACTION_SPLIT = 0.9
_CUT_EPS = 1e-12
_CROSSCHECK_TOL = 1e-13
_MAX_DEPTH = 1 << 16
MAX_MOMENT_ORDER = 40


class RatioVariant(enum.Enum):
    """Which shifted ratio a fraction or moment sequence belongs to.

    SHIFT_BC: Phi[a,bq;cq;q,z] / Phi[a,b;c;q,z]
    SHIFT_A:  Phi[aq,b;c;q,z] / Phi[a,b;c;q,z]
    SHIFT_ALL: Phi[aq,bq;cq;q,z] / Phi[a,b;c;q,z]
    """

    SHIFT_BC = "shift_bc"
    SHIFT_A = "shift_a"
    SHIFT_ALL = "shift_all"


@dataclass(frozen=True, eq=False)
class GFraction:
    """A g-fraction: coefficient sequence plus derived partial numerators.

    g holds the closed-form sequence g_0..g_N (g_0 is a placeholder 0 for
    SHIFT_BC, whose fraction starts at (1-g_1)g_2; it is 1-a for SHIFT_A).
    partial_numerators[k] is the (k+1)-th z-coefficient p_{k+1} of
    1/(1 - p_1 z/(1 - p_2 z/(1 - ...))).  argument_scale is 1 for the
    qz-normalised SHIFT_BC form and for SHIFT_A; the plain-z SHIFT_BC form
    carries 1/q, recording its z -> z/q rescaling (cut moves to [q, inf)).
    """

    variant: RatioVariant
    params: ParamSet
    g: np.ndarray
    partial_numerators: np.ndarray
    argument_scale: float = 1.0


@dataclass(frozen=True, eq=False)
class MomentSequence:
    """Taylor coefficients m_0..m_N of a moment-normalised ratio."""

    m: np.ndarray


@dataclass(frozen=True)
class HypothesisReport:
    passed: bool
    violations: Tuple[str, ...]


@dataclass(frozen=True)
class MonotoneReport:
    passed: bool
    first_violation: Optional[Tuple[int, int]]


def hypothesis_check(variant: RatioVariant, p: ParamSet) -> HypothesisReport:
    """Evaluate the sufficient parameter conditions for the given variant.

    SHIFT_BC requires 0 <= q(b-c) <= 1-cq and 0 < a-c <= 1-c; SHIFT_A and
    SHIFT_ALL require 0 <= 1-aq <= 1-cq and 0 < 1-b <= 1-c.  Every violated
    inequality is reported by name.
    """
    a, b, c, q = p.a, p.b, p.c, p.q
    violations = []
    if variant is RatioVariant.SHIFT_BC:
        if not q * (b - c) >= 0.0:
            violations.append("q(b-c)>=0")
        if not q * (b - c) <= 1.0 - c * q:
            violations.append("q(b-c)<=1-cq")
        if not a - c > 0.0:
            violations.append("a-c>0")
        if not a - c <= 1.0 - c:
            violations.append("a-c<=1-c")
    else:
        if not 1.0 - a * q >= 0.0:
            violations.append("1-aq>=0")
        if not 1.0 - a * q <= 1.0 - c * q:
            violations.append("1-aq<=1-cq")
        if not 1.0 - b > 0.0:
            violations.append("1-b>0")
        if not 1.0 - b <= 1.0 - c:
            violations.append("1-b<=1-c")
    return HypothesisReport(not violations, tuple(violations))


def _check_denominators(den: np.ndarray, p: ParamSet):
    if np.any(den == 0.0):
        raise DenominatorZero(f"(1 - c q^m) vanished for p={p}")


def raw_cfrac_coeffs(variant: RatioVariant, p: ParamSet, N: int) -> np.ndarray:
    """Closed-form continued-fraction coefficients, entry i holding k = i+1.

    SHIFT_BC yields the alternating d_k of the 1/(1+ d_1 z/(1+ ...)) form;
    SHIFT_A (and SHIFT_ALL, which shares its fraction) yields the c_k of
    the inner tail of the 1/(1- ...) form.  No hypothesis is required:
    these are pure formula evaluations.
    """
    if N < 1:
        raise DomainError(f"N must be >= 1, got {N}")
    a, b, c, q = p.a, p.b, p.c, p.q
    k = np.arange(1, N + 1)
    odd = k % 2 == 1
    n = np.where(odd, (k - 1) // 2, k // 2)
    qn = q**n.astype(float)
    q2n = qn * qn
    if variant is RatioVariant.SHIFT_BC:
        num = np.where(odd, qn * (1.0 - a * qn) * (c * qn - b),
                       (qn / q) * (1.0 - b * qn) * (c * qn - a))
        den = np.where(odd, (1.0 - c * q2n) * (1.0 - c * q2n * q),
                       (1.0 - c * q2n / q) * (1.0 - c * q2n))
    else:
        num = np.where(odd, qn * (1.0 - a * qn * q) * (b - c * qn),
                       qn * (1.0 - b * qn) * (a - c * qn / q))
        den = np.where(odd, (1.0 - c * q2n) * (1.0 - c * q2n * q),
                       (1.0 - c * q2n / q) * (1.0 - c * q2n))
    _check_denominators(den, p)
    return num / den


def gfraction_coeffs(variant: RatioVariant, p: ParamSet, N: int,
                     argument: str = "qz") -> GFraction:
    """Closed-form g-sequence and partial numerators up to index N.

    SHIFT_BC: g_{2n+1} = q^n (a - c q^n)/(1 - c q^{2n}) for n >= 0 and
    g_{2n} = q^n (b - c q^{n-1})/(1 - c q^{2n-1}) for n >= 1, with g_0
    stored as 0 (the fraction starts at (1-g_1)g_2, so p_k = (1-g_k)g_{k+1}).
    SHIFT_A: g_0 = 1-a, g_{2n} = (1-a q^n)/(1-c q^{2n-1}) for n >= 1,
    g_{2n+1} = (1-b q^n)/(1-c q^{2n}) for n >= 0, and p_k = (1-g_{k-1})g_k.
    SHIFT_ALL shares SHIFT_A's fraction (its ratio is an affine transform
    of the SHIFT_A one).

    The partial numerators are cross-checked against raw_cfrac_coeffs;
    disagreement raises InconsistentCoefficients.  argument="z" selects
    the plain-z SHIFT_BC form (argument_scale 1/q, cut on [q, inf)); the
    default "qz" is the normalised form with cut on [1, inf).
    """
    if N < 2:
        raise DomainError(f"N must be >= 2, got {N}")
    if argument not in ("qz", "z"):
        raise DomainError(f"argument must be 'qz' or 'z', got {argument!r}")
    a, b, c, q = p.a, p.b, p.c, p.q
    i = np.arange(N + 1)
    odd = i % 2 == 1
    n = np.where(odd, (i - 1) // 2, i // 2)
    qn = q**n.astype(float)
    q2n = qn * qn
    if variant is RatioVariant.SHIFT_BC:
        num = np.where(odd, qn * (a - c * qn), qn * (b - c * qn / q))
        den = np.where(odd, 1.0 - c * q2n, 1.0 - c * q2n / q)
        den[0] = 1.0
        _check_denominators(den, p)
        g = num / den
        g[0] = 0.0
        partial = (1.0 - g[1:-1]) * g[2:]
        expected = -q * raw_cfrac_coeffs(variant, p, N - 1)
    else:
        num = np.where(odd, 1.0 - b * qn, 1.0 - a * qn)
        den = np.where(odd, 1.0 - c * q2n, 1.0 - c * q2n / q)
        den[0] = 1.0
        _check_denominators(den, p)
        g = num / den
        g[0] = 1.0 - a
        partial = (1.0 - g[:-1]) * g[1:]
        expected = np.concatenate([[a * (1.0 - b) / (1.0 - c)],
                                   raw_cfrac_coeffs(RatioVariant.SHIFT_A, p, N - 1)])
    scale = 1.0 if argument == "qz" or variant is not RatioVariant.SHIFT_BC else 1.0 / q
    err = np.max(np.abs(partial - expected) / np.maximum(1.0, np.abs(expected)))
    if err > _CROSSCHECK_TOL:
        raise InconsistentCoefficients(
            f"g-fraction numerators disagree with raw coefficients by {err:.3e}"
        )
    return GFraction(variant, p, g, partial, scale)


def gfraction_eval(gf: GFraction, z: complex, tol: float = 1e-13) -> EvalResult:
    """Evaluate 1/(1 - p_1 w/(1 - p_2 w/...)) at w = argument_scale * z.

    Backward recurrence from depth D with tail 1, doubling D from 32 until
    two successive depths agree within tol.  Points on the cut (w real,
    >= 1 within 1e-12) raise CutError; running out of depth (2^16 or the
    stored coefficient count) raises NoConvergence.
    """
    w = complex(z) * gf.argument_scale
    if abs(w.imag) < _CUT_EPS and w.real >= 1.0 - _CUT_EPS:
        raise CutError(f"z={z} lies on the fraction's cut")
    if w == 0:
        return EvalResult(1.0 + 0.0j, 1, 0.0)
    p = gf.partial_numerators

    def backward(d):
        t = 1.0 + 0.0j
        for k in range(d - 1, -1, -1):
            t = 1.0 - p[k] * w / t
            if t == 0:
                t = 1e-300
        return 1.0 / t

    limit = min(len(p), _MAX_DEPTH)
    depths = [max(1, min(32, limit) // 2)] if limit <= 32 else []
    d = 32
    while d < limit:
        depths.append(d)
        d *= 2
    depths.append(limit)
    prev = None
    for d in depths:
        value = backward(d)
        if prev is not None and abs(value - prev) <= tol * max(1.0, abs(value)):
            return EvalResult(value, d, abs(value - prev))
        prev = value
    raise NoConvergence(f"fraction not settled at depth {depths[-1]}")


def gfraction_series(gf: GFraction, N: int) -> np.ndarray:
    """Taylor coefficients (in z) of the fraction, by expanding the recurrence.

    Works from depth N+1 with tail 1, applying T -> 1/(1 - p_k z T) on
    truncated series; exact to order N.  The argument_scale is applied, so
    the result expands the same function gfraction_eval evaluates.
    """
    coeffs = np.zeros(N + 1)
    coeffs[0] = 1.0
    depth = min(N + 1, len(gf.partial_numerators))
    for k in range(depth - 1, -1, -1):
        shifted = np.concatenate([[0.0], coeffs[:N]]) * gf.partial_numerators[k]
        coeffs = series_reciprocal(np.concatenate([[1.0], -shifted[1:]]), N)
    if gf.argument_scale != 1.0:
        coeffs = coeffs * gf.argument_scale ** np.arange(N + 1)
    return coeffs


def _phi_ratio_series(num_p: ParamSet, den_p: ParamSet, z: complex) -> complex:
    tol = 1e-14
    return heine_phi(num_p, z, tol).value / heine_phi(den_p, z, tol).value


def ratio_eval(variant: RatioVariant, p: ParamSet, z: complex) -> complex:
    """The full shifted ratio z*Phi[...]/Phi[a,b;c;q,z] at a point.

    Uses direct series for |z| < 0.9 and the g-fraction beyond; the two
    routes agree on the overlap.  SHIFT_ALL is realised through SHIFT_A
    and the contiguous identity
    z Phi[aq,bq;cq] / Phi[a,b;c] = ((1-c)/(a(1-b))) (Phi[aq,b;c]/Phi[a,b;c] - 1),
    so it requires a != 0 and b != 1.
    """
    z = complex(z)
    a, b, c, q = p.a, p.b, p.c, p.q
    if variant is RatioVariant.SHIFT_ALL and (a == 0.0 or b == 1.0):
        raise DegenerateParameter(
            "SHIFT_ALL needs a != 0 and b != 1; the identity route divides by a(1-b)"
        )
    if z == 0:
        return 0.0 + 0.0j
    use_series = abs(z) < _SERIES_FRACTION_SPLIT
    if variant is RatioVariant.SHIFT_BC:
        if use_series:
            return z * _phi_ratio_series(p.shifted(b=b * q, c=c * q), p, z)
        gf = gfraction_coeffs(variant, p, 512, argument="z")
        return z * gfraction_eval(gf, z).value
    if use_series:
        base = _phi_ratio_series(p.shifted(a=a * q), p, z)
    else:
        gf = gfraction_coeffs(RatioVariant.SHIFT_A, p, 512)
        base = gfraction_eval(gf, z).value
    if variant is RatioVariant.SHIFT_A:
        return z * base
    return (1.0 - c) / (a * (1.0 - b)) * (base - 1.0)


def _mp_heine_coeffs(a, b, c, q, N, scale=None):
    """Series coefficients (optionally of Phi at scale*z) in mpmath floats."""
    import mpmath

    one = mpmath.mpf(1)
    out = [one]
    acc = one
    qn = one
    for n in range(N):
        den = (1 - c * qn) * (1 - q * qn)
        if den == 0:
            raise DenominatorZero(f"(1 - c q^{n}) vanished")
        acc = acc * (1 - a * qn) * (1 - b * qn) / den
        qn *= q
        out.append(acc)
    if scale is not None:
        spow = one
        for n in range(1, N + 1):
            spow *= scale
            out[n] *= spow
    return out


def ratio_moments(variant: RatioVariant, p: ParamSet, N: int) -> MomentSequence:
    """Taylor coefficients m_0..m_N of the moment-normalised ratio.

    SHIFT_BC uses the qz-form Phi[a,bq;cq;q,qz]/Phi[a,b;c;q,qz]; SHIFT_A
    and SHIFT_ALL use the plain-z forms.  m_0 = 1 always.  The series
    division runs in extended precision: finite-difference tests amplify
    coefficient noise by ~2^N, which double division cannot survive when
    the series coefficients are large.  N <= 40 caps the extraction order.
    """
    if not 0 <= N <= MAX_MOMENT_ORDER:
        raise DomainError(f"N must lie in [0, {MAX_MOMENT_ORDER}], got {N}")
    import mpmath

    with mpmath.workdps(40):
        a, b, c, q = (mpmath.mpf(x) for x in (p.a, p.b, p.c, p.q))
        if variant is RatioVariant.SHIFT_BC:
            num = _mp_heine_coeffs(a, b * q, c * q, q, N, scale=q)
            den = _mp_heine_coeffs(a, b, c, q, N, scale=q)
        elif variant is RatioVariant.SHIFT_A:
            num = _mp_heine_coeffs(a * q, b, c, q, N)
            den = _mp_heine_coeffs(a, b, c, q, N)
        else:
            num = _mp_heine_coeffs(a * q, b * q, c * q, q, N)
            den = _mp_heine_coeffs(a, b, c, q, N)
        m = [num[0] / den[0]]
        for n in range(1, N + 1):
            acc = num[n]
            for k in range(1, n + 1):
                acc -= den[k] * m[n - k]
            m.append(acc / den[0])
    return MomentSequence(np.array([float(x) for x in m]))


def totally_monotone_check(m: Union[MomentSequence, np.ndarray],
                           tol: float = 1e-9) -> MonotoneReport:
    """Hausdorff's criterion: (-1)^j (Delta^j m)_k >= -tol for j + k <= N.

    Delta is the forward difference in k.  Returns the first violating
    (j, k) scanning difference order j outward, None when all pass.
    """
    seq = np.asarray(m.m if isinstance(m, MomentSequence) else m, dtype=float)
    row = seq.copy()
    sign = 1.0
    for j in range(len(seq)):
        bad = np.nonzero(sign * row < -tol)[0]
        if len(bad):
            return MonotoneReport(False, (j, int(bad[0])))
        row = np.diff(row)
        sign = -sign
    return MonotoneReport(True, None)
