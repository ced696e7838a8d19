"""Numerical geometry checks: q-close-to-convexity and boundary convexity.

Contains the coefficient-sequence criterion (threshold T1 and the B_n
chain), direct sampling of the q-close-to-convexity inequality
|g(z) + f(qz) - f(z)| <= |g(z)| against g(z) = z/(1-z), and sign-change
tests on sampled boundary curves for convexity in the direction of the
imaginary axis and for full convexity.

Curves are images of circles |z| = r under maps of the form
z * N(z)/D(z) with N, D given by series coefficients.  Sampling folds the
coefficients modulo the sample count and applies one inverse FFT, which is
exact for uniformly spaced angles and fast enough for dense sweeps.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import CutError, DegenerateCurve, DomainError
from .qcore import ParamSet, gauss_coeffs, geometric_powers, heine_coeffs, log_q, q_gamma

_ADAPTIVE_TOL = 1e-13
_MAX_COEFFS = 1 << 20
_KQ_SLACK = 1e-10
_BN_SLACK = 1e-13


# ---------------------------------------------------------------------------
# series-on-circle machinery

def _adaptive_coeffs(coeff_fn: Callable[[int], np.ndarray], r: float) -> np.ndarray:
    """Enough coefficients that the geometric tail at radius r is negligible."""
    N = min(_MAX_COEFFS, max(256, int(33.0 / max(1e-5, -math.log(r))) + 64))
    while True:
        c = coeff_fn(N)
        weighted = np.abs(c) * geometric_powers(r, len(c))
        scale = max(1.0, float(weighted.sum()))
        tail = float(weighted[-8:].max()) * r / (1.0 - r)
        if tail <= _ADAPTIVE_TOL * scale or N >= _MAX_COEFFS:
            return c
        N *= 2


def _eval_on_rings(coeffs: np.ndarray, radii: np.ndarray, M: int) -> np.ndarray:
    """sum_n c_n (r_j e^{2 pi i k/M})^n for every radius, shape (len(radii), M).

    Folds the coefficients modulo M: the residue-m fold at radius r is
    r^m * P_m(r^M) with P_m the polynomial of every M-th coefficient, so
    one matrix product against the r^M power table evaluates all folds,
    and one batched inverse FFT turns folds into uniform-angle samples.
    """
    coeffs = np.asarray(coeffs, dtype=float)
    radii = np.asarray(radii, dtype=float)
    pad = (-len(coeffs)) % M
    if pad:
        coeffs = np.concatenate([coeffs, np.zeros(pad)])
    C = coeffs.reshape(-1, M).T  # (M, T)
    s = radii**M
    S = np.vander(s, C.shape[1], increasing=True).T  # (T, R)
    F = (C @ S) * np.vander(radii, M, increasing=True).T  # folded, (M, R)
    return (np.fft.ifft(F, axis=0) * M).T


def _circle_eval(coeffs: np.ndarray, r: float, M: int) -> np.ndarray:
    """sum_n c_n (r e^{2 pi i k/M})^n for k = 0..M-1 via fold + inverse FFT."""
    return _eval_on_rings(coeffs, np.array([r]), M)[0]


@dataclass(frozen=True, eq=False)
class CurveMap:
    """A map z * N(z)/D(z); num and den produce series coefficients up to N."""

    label: str
    num: Callable[[int], np.ndarray]
    den: Callable[[int], np.ndarray]
    z_prefactor: bool = True

    def sample_circle(self, r: float, M: int) -> np.ndarray:
        cn = _adaptive_coeffs(self.num, r)
        cd = _adaptive_coeffs(self.den, r)
        w = _circle_eval(cn, r, M) / _circle_eval(cd, r, M)
        if self.z_prefactor:
            w = w * (r * np.exp(2j * np.pi * np.arange(M) / M))
        bad = np.nonzero(~np.isfinite(w))[0]
        if len(bad):
            raise CutError(f"{self.label}: non-finite curve sample at index {bad[0]}")
        return w

    def __call__(self, z: complex) -> complex:
        z = complex(z)
        cn = _adaptive_coeffs(self.num, max(abs(z), 1e-6))
        cd = _adaptive_coeffs(self.den, max(abs(z), 1e-6))
        num = 0j
        for c in cn[::-1]:
            num = num * z + c
        den = 0j
        for c in cd[::-1]:
            den = den * z + c
        w = num / den
        return w * z if self.z_prefactor else w


def _ones(N: int) -> np.ndarray:
    return np.ones(1)


def _scaled(coeff_fn, s: float):
    if s == 1.0:
        return coeff_fn
    return lambda N: coeff_fn(N) * geometric_powers(s, N + 1)


def map_shift_bc(p: ParamSet, normalized: bool = False) -> CurveMap:
    """z Phi[a,bq;cq;q,sz]/Phi[a,b;c;q,sz]; s = q for the normalised form.

    The normalised (s = q) form is the one whose image is guaranteed convex
    in the imaginary direction under the SHIFT_BC hypotheses; the plain
    form has its cut on [q, inf) and is offered for visual comparison.
    """
    s = p.q if normalized else 1.0
    shifted = p.shifted(b=p.b * p.q, c=p.c * p.q)
    return CurveMap(
        "shift_bc_qz" if normalized else "shift_bc",
        _scaled(lambda N: heine_coeffs(shifted, N).coeffs, s),
        _scaled(lambda N: heine_coeffs(p, N).coeffs, s),
    )


def map_shift_a(p: ParamSet) -> CurveMap:
    """z Phi[aq,b;c;q,z]/Phi[a,b;c;q,z]."""
    shifted = p.shifted(a=p.a * p.q)
    return CurveMap("shift_a",
                    lambda N: heine_coeffs(shifted, N).coeffs,
                    lambda N: heine_coeffs(p, N).coeffs)


def map_shift_all(p: ParamSet) -> CurveMap:
    """z Phi[aq,bq;cq;q,z]/Phi[a,b;c;q,z]."""
    shifted = p.shifted(a=p.a * p.q, b=p.b * p.q, c=p.c * p.q)
    return CurveMap("shift_all",
                    lambda N: heine_coeffs(shifted, N).coeffs,
                    lambda N: heine_coeffs(p, N).coeffs)


def map_zphi(p: ParamSet) -> CurveMap:
    """z Phi[a,b;c;q,z], the function whose q-close-to-convexity is tested."""
    return CurveMap("zphi", lambda N: heine_coeffs(p, N).coeffs, _ones)


def map_gauss_ratio(a: float, b: float, c: float) -> CurveMap:
    """z F(a+1,b;c;z)/F(a,b;c;z), the classical analogue (and its a = -1
    degenerate case z F(0,b;c;z)/F(-1,b;c;z), whose image approaches the
    unit disk as c grows)."""
    return CurveMap("gauss_ratio",
                    lambda N: gauss_coeffs(a + 1.0, b, c, N).coeffs,
                    lambda N: gauss_coeffs(a, b, c, N).coeffs)


def identity_map() -> CurveMap:
    return CurveMap("identity", _ones, _ones)


# ---------------------------------------------------------------------------
# coefficient-sequence criterion

class SequenceVerdict(enum.Enum):
    DECREASING_01 = "decreasing_01"
    INCREASING_12 = "increasing_12"
    NEITHER = "neither"


class KqRoute(enum.Enum):
    T1 = "t1"
    C_EQ_AB = "c_eq_ab"
    NONE = "none"


@dataclass(frozen=True, eq=False)
class SequenceClass:
    verdict: SequenceVerdict
    B: np.ndarray
    limit_estimate: Optional[float]


@dataclass(frozen=True)
class KqConditionReport:
    route: KqRoute
    passed: bool
    details: dict


@dataclass(frozen=True)
class KqReport:
    max_ratio: float
    worst_z: complex
    passed: bool


@dataclass(frozen=True)
class ConvexityReport:
    passed: bool
    sign_changes: int


@dataclass(frozen=True)
class KqGrid:
    """Polar sampling grid: radii clustered toward r_max, uniform angles."""

    n_radii: int = 64
    n_angles: int = 64
    r_max: float = 0.99


def t1_threshold(a: float, b: float, q: float) -> float:
    """min{ab, ab + E/(2(1-q)), ab + E/(1-q) + F/(1-q)} with
    E = aq + bq - q - 2ab + ab/q and F = a + b - q - ab/q.

    Note the threshold is the minimum of the three expressions; the
    classical (q -> 1) analogue of this criterion uses a maximum.
    """
    if not 0.0 < q < 1.0:
        raise DomainError(f"q must lie in (0,1), got {q}")
    ab = a * b
    e = a * q + b * q - q - 2.0 * ab + ab / q
    f = a + b - q - ab / q
    return min(ab, ab + e / (2.0 * (1.0 - q)), ab + e / (1.0 - q) + f / (1.0 - q))


def kq_conditions_check(p: ParamSet) -> KqConditionReport:
    """Which sufficient route (if any) puts z Phi[a,b;c;q,.] in the
    q-close-to-convex class: c <= T1(a,b), or c = ab with three extra
    conditions involving a q-Gamma ratio."""
    a, b, c, q = p.a, p.b, p.c, p.q
    t1 = t1_threshold(a, b, q)
    details = {"T1": t1, "c<=T1": bool(c <= t1)}
    if c <= t1:
        return KqConditionReport(KqRoute.T1, True, details)
    if abs(c - a * b) <= 1e-14:
        if not (0.0 < a < 1.0 and 0.0 < b < 1.0):
            raise DomainError("c = ab route needs a, b, ab in (0,1) for log_q")
        # cross-multiplied form of ab >= (aq+bq-q)/(2-1/q): the quotient is
        # singular at q = 1/2 and sign-flipped below it
        cond1 = a * q + b * q - q <= a * b * (2.0 - 1.0 / q)
        cond2 = a * q + b * q + a + b - 2.0 * q <= 2.0 * a * b
        gamma_ratio = q_gamma(log_q(a * b, q), q) / (
            q_gamma(log_q(a, q), q) * q_gamma(log_q(b, q), q))
        cond3 = gamma_ratio <= 2.0
        details.update({
            "aq+bq-q<=ab(2-1/q)": bool(cond1),
            "aq+bq+a+b-2q<=2ab": bool(cond2),
            "gamma_q_ratio": gamma_ratio,
            "gamma_q_ratio<=2": bool(cond3),
        })
        if cond1 and cond2 and cond3:
            return KqConditionReport(KqRoute.C_EQ_AB, True, details)
    return KqConditionReport(KqRoute.NONE, False, details)


def bn_sequence(p: ParamSet, N: int) -> SequenceClass:
    """The sequence B_n = A_n (1-q^n)/(1-q) for f(z) = z Phi[a,b;c;q,z].

    A_1 = 1 and A_n for n >= 2 is the (n-1)-th series coefficient of Phi.
    Verdict DECREASING_01 when 1 >= B_2 >= ... >= B_N >= 0, INCREASING_12
    when 1 <= B_2 <= ... <= B_N <= 2 (both with 1e-13 slack since the
    chains are non-strict), else NEITHER.  B_1 = 1 exactly.
    """
    if N < 2:
        raise DomainError(f"N must be >= 2, got {N}")
    A = heine_coeffs(p, N - 1).coeffs
    n = np.arange(1, N + 1)
    B = A * (1.0 - p.q**n) / (1.0 - p.q)
    tail = B[1:]
    steps = np.diff(tail)
    if np.all(steps <= _BN_SLACK) and tail[0] <= 1.0 + _BN_SLACK and tail[-1] >= -_BN_SLACK:
        verdict = SequenceVerdict.DECREASING_01
    elif np.all(steps >= -_BN_SLACK) and tail[0] >= 1.0 - _BN_SLACK and tail[-1] <= 2.0 + _BN_SLACK:
        verdict = SequenceVerdict.INCREASING_12
    else:
        verdict = SequenceVerdict.NEITHER
    limit = float(B[-1]) if abs(B[-1] - B[-2]) < 1e-10 else None
    return SequenceClass(verdict, B, limit)


def kq_membership_test(p: ParamSet, grid: KqGrid = KqGrid()) -> KqReport:
    """Sampled q-close-to-convexity ratio for f(z) = z Phi[a,b;c;q,z].

    Maximises |g(z) + f(qz) - f(z)| / |g(z)| over the polar grid with
    g(z) = z/(1-z); passes when the maximum is at most 1 + 1e-10.  The
    point z = 0 is excluded (there the criterion degenerates to the
    normalisation f'(0) = 1).
    """
    coeffs = _adaptive_coeffs(lambda N: heine_coeffs(p, N).coeffs, grid.r_max)
    radii = grid.r_max * np.sin(np.pi * (np.arange(grid.n_radii) + 1.0)
                                / (2.0 * grid.n_radii))
    angles = np.exp(2j * np.pi * np.arange(grid.n_angles) / grid.n_angles)
    phi = _eval_on_rings(coeffs, np.concatenate([radii, p.q * radii]),
                         grid.n_angles)
    zs = radii[:, None] * angles[None, :]
    fz = zs * phi[: grid.n_radii]
    fqz = p.q * zs * phi[grid.n_radii :]
    g = zs / (1.0 - zs)
    ratio = np.abs(g + fqz - fz) / np.abs(g)
    k = int(np.argmax(ratio))
    worst = complex(zs.ravel()[k])
    max_ratio = float(ratio.ravel()[k])
    return KqReport(max_ratio, worst, max_ratio <= 1.0 + _KQ_SLACK)


# ---------------------------------------------------------------------------
# boundary curves

@dataclass(frozen=True, eq=False)
class BoundaryCurve:
    """Ordered samples w_k = F(r e^{2 pi i k/M}) of a circle image."""

    r: float
    samples: np.ndarray

    @property
    def M(self) -> int:
        return len(self.samples)


def boundary_curve(curve_map: CurveMap, r: float, M: int) -> BoundaryCurve:
    """Sample the image of |z| = r at M uniformly spaced angles."""
    if not 0.0 < r < 1.0:
        raise DomainError(f"r must lie in (0,1), got {r}")
    if M < 256:
        raise DomainError(f"M must be >= 256, got {M}")
    return BoundaryCurve(r, curve_map.sample_circle(r, M))


def _cyclic_sign_changes(values: np.ndarray, floor: float) -> int:
    keep = np.abs(values) >= floor
    s = np.sign(values[keep])
    if s.size == 0:
        raise DegenerateCurve("all differences below tolerance")
    return int(np.sum(s != np.roll(s, 1)))


def vertical_convexity_check(curve: BoundaryCurve, tol: float = 1e-9) -> ConvexityReport:
    """Convexity in the direction of the imaginary axis, read off the boundary.

    Counts cyclic sign changes of the differences of Re w_k, merging
    differences below tol * curve diameter.  A Jordan curve bounds a
    vertically convex domain exactly when Re w has one maximum and one
    minimum, i.e. exactly 2 sign changes.
    """
    w = curve.samples
    diam = float(np.hypot(np.ptp(w.real), np.ptp(w.imag)))
    if diam == 0.0:
        raise DegenerateCurve("curve has zero diameter")
    d = np.roll(w.real, -1) - w.real
    changes = _cyclic_sign_changes(d, tol * diam)
    return ConvexityReport(changes == 2, changes)


def full_convexity_check(curve: BoundaryCurve, tol: float = 1e-9) -> ConvexityReport:
    """Full convexity via the discrete cross product of successive edges.

    Zero sign changes of (w_{k+1}-w_k) x (w_{k+2}-w_{k+1}) means the
    sampled curve never changes turning direction, i.e. is convex.
    """
    w = curve.samples
    u = np.roll(w, -1) - w
    v = np.roll(u, -1)
    cross = u.real * v.imag - u.imag * v.real
    mx = float(np.abs(cross).max())
    if mx == 0.0:
        raise DegenerateCurve("curve has no turning; cross products all vanish")
    changes = _cyclic_sign_changes(cross, tol * mx)
    return ConvexityReport(changes == 0, changes)
