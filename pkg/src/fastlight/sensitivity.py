"""Closed-form beat-note enhancement near critically anomalous dispersion.

First order: the beat is the dispersionless beat times xi = n0 / n_g.
Second order: the self-consistent quadratic gives

    eta = | +-2 xi / (1 +- sqrt(1 + Q xi^2)) |,   Q = f * n'' * omega0^2,

which saturates at 2 / sqrt(|Q|) as n_g -> 0. Internally eta is evaluated in
terms of the ratio r = n_g / n0 = 1 / xi, where both branches have forms that
stay finite and well conditioned through r = 0.
"""

from dataclasses import dataclass, asdict
import math
import warnings

import numpy as np

from .errors import CadSingularity, ComplexRoot, ZeroQ

CAD_GUARD = 1e-3
Q_WARN = 1e-3
CURVE_EXCLUSION = 1e-12


@dataclass(frozen=True)
class EnhancementReport:
    xi: float
    n_tilde: float
    Q: float
    f_frac: float
    n_dd: float
    eta: float
    eta_max: float
    beat_first_order: float
    beat_second_order: float
    beat_oracle: float

    def as_dict(self):
        return asdict(self)

    def invariant_violations(self, rtol=1e-12):
        """Names of violated report invariants (empty when consistent)."""
        bad = []
        if math.isfinite(self.xi) and abs(self.xi * (1 + self.n_tilde) - 1) > rtol * max(1.0, abs(self.xi)):
            bad.append("xi*(1+n_tilde)=1")
        if self.Q != 0 and math.isfinite(self.eta) and abs(self.eta) > self.eta_max * (1 + 1e-9):
            bad.append("|eta|<=eta_max")
        return bad


def first_order_beat(beat0, n0, omega0, dn_domega):
    """First-order beat: (beat0 * n0 / n_g, xi).

    Raises CadSingularity when |n_g| <= 1e-3 n0, where the second-order
    closure must be used instead.
    """
    n_g = n0 + omega0 * dn_domega
    if abs(n_g) <= CAD_GUARD * abs(n0):
        raise CadSingularity(f"|n_g| = {abs(n_g):.3e} <= {CAD_GUARD:g} * n0; use second_order_beat")
    xi = n0 / n_g
    return beat0 * xi, xi


def q_factor(f_frac, n_dd, omega0):
    """Second-order dispersion parameter Q = f * n'' * omega0^2 (signed)."""
    if not f_frac > 0:
        raise ValueError(f"f_frac must be > 0, got {f_frac!r}")
    q = f_frac * n_dd * omega0**2
    if abs(q) > Q_WARN:
        warnings.warn(f"|Q| = {abs(q):.3e} exceeds {Q_WARN:g}; the quadratic closure assumes |Q| << 1")
    return q


def resonance_q(f_frac, n_tilde, n_dd, omega0):
    """Q that reproduces the exact resonance condition to second order.

    Expanding n(omega) * omega about omega0 keeps a 2 n' term that the
    closed form drops; the exact quadratic has Q = -4 f n~ - 2 f n'' omega0^2.
    Diagnostic only, reported next to the closed-form Q.
    """
    return -4.0 * f_frac * n_tilde - 2.0 * f_frac * n_dd * omega0**2


def _eta_from_ratio(r, Q, branch):
    disc = r * r + Q
    if disc < 0:
        raise ComplexRoot(f"1 + Q xi^2 < 0 (Q = {Q:.3e}, n_g/n0 = {r:.3e})")
    root = math.sqrt(disc)
    if branch == "upper":
        denom = abs(r) + root
        return 2.0 / denom if denom > 0 else math.inf
    if branch == "lower":
        if Q == 0:
            return math.inf
        return 2.0 * (abs(r) + root) / abs(Q)
    raise ValueError(f"branch must be 'upper' or 'lower', got {branch!r}")


def _branch_sign(xi, Q, branch):
    # sign of 2 xi / (1 -+ sqrt(1 + Q xi^2)) relative to beat0
    s = math.copysign(1.0, xi)
    if branch == "lower" and Q > 0:
        s = -s
    return s


def second_order_beat(beat0, xi, Q, branch="upper"):
    """Second-order beat and enhancement: (beat, eta).

    ``upper`` is the root continuous with the first-order result; ``lower``
    is the second root of the same quadratic. ``xi`` may be infinite (n_g = 0).
    """
    r = 0.0 if math.isinf(xi) else 1.0 / xi
    if not math.isinf(xi) and xi != 0 and 1 + Q * xi * xi < 0:
        raise ComplexRoot(f"1 + Q xi^2 = {1 + Q * xi * xi:.3e} < 0")
    if branch == "upper" and math.isfinite(xi) and abs(Q * xi * xi) <= 1:
        eta = _eta_upper_small(xi, Q)
    else:
        eta = _eta_from_ratio(r, Q, branch)
    return beat0 * eta * _branch_sign(xi, Q, branch), eta


def _eta_upper_small(xi, Q):
    # |xi| * 2 / (1 + sqrt(1 + x)) written as |xi| - |xi| d, d = s / (2 + s),
    # s = sqrt(1 + x) - 1; corrections below resolution round back to |xi|
    a = abs(xi)
    s = math.expm1(0.5 * math.log1p(Q * xi * xi))
    return a - a * (s / (2.0 + s))


def eta_max(Q):
    """Saturation bound 2 / sqrt(|Q|); raises ZeroQ for Q = 0."""
    if Q == 0:
        raise ZeroQ("Q = 0: the enhancement is unbounded")
    return 2.0 / math.sqrt(abs(Q))


@dataclass(frozen=True)
class CurvePoint:
    ng_over_n0: float
    eta: float
    branch: str
    flag: str = ""


def _curve_abscissae(lo, hi, num, scale):
    if scale == "linear":
        r = np.linspace(lo, hi, num)
        return r[np.abs(r) >= CURVE_EXCLUSION]
    if scale != "log":
        raise ValueError(f"scale must be 'log' or 'linear', got {scale!r}")
    if lo > 0 or hi < 0:
        a, b = sorted((abs(lo), abs(hi)))
        a = max(a, CURVE_EXCLUSION)
        mags = np.geomspace(a, b, num)
        return mags if lo > 0 else -mags[::-1]
    # the range straddles zero: split samples by decades on each side
    decades = [max(math.log10(max(abs(x), CURVE_EXCLUSION) / CURVE_EXCLUSION), 0.0) for x in (lo, hi)]
    total = sum(decades) or 1.0
    n_neg = int(round(num * decades[0] / total)) if lo < 0 else 0
    n_pos = num - n_neg if hi > 0 else 0
    neg = -np.geomspace(abs(lo), CURVE_EXCLUSION, n_neg) if n_neg else np.empty(0)
    pos = np.geomspace(CURVE_EXCLUSION, hi, n_pos) if n_pos else np.empty(0)
    return np.concatenate([neg, pos])


def figure3_curve(Q, ng_over_n0_range=(-1.0, 1.0), num_samples=2001, scale="log", negative_branch="upper"):
    """Enhancement eta against n_g / n0.

    Samples with |n_g / n0| < 1e-12 are excluded. The default log scale
    spaces samples by decade in |n_g / n0| so the plateau near CAD is
    resolved. Positive n_g uses the upper branch; for negative n_g the branch
    is ``negative_branch`` (the upper, physically continuous root by default).
    Samples without a real solution are returned with ``eta = nan`` and a flag.
    """
    lo, hi = ng_over_n0_range
    if not lo < hi:
        raise ValueError("ng_over_n0_range must be increasing")
    points = []
    for r in _curve_abscissae(lo, hi, num_samples, scale):
        branch = "upper" if r >= 0 else negative_branch
        try:
            eta = _eta_from_ratio(float(r), Q, branch)
            points.append(CurvePoint(float(r), eta, branch))
        except ComplexRoot as exc:
            points.append(CurvePoint(float(r), math.nan, branch, f"ComplexRoot: {exc}"))
    return points
