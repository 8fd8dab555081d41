"""Bi-frequency pumped Raman gain doublet.

The probe susceptibility is the sum of two Lorentzian gain lines of equal
width ``gamma`` centred at ``omega_res1`` and ``omega_res1 - pump_separation``::

    chi(w) = A * [ W1**2 / (w - w1 + i*gamma) + W2**2 / (w - w1 + sep + i*gamma) ]

With this sign convention Im(chi) < 0 everywhere (gain). The index is taken in
the dilute limit, n = 1 + Re(chi)/2, and the anomalous dispersion between the
two lines is what the interferometer exploits.

Most functions accept either absolute angular frequencies ``omega`` or the
two-photon detuning ``delta = omega - omega_res1``. The detuned forms avoid
rounding ``omega`` (~1e15 rad/s) and should be preferred for anything that
differences nearby frequencies.
"""

from dataclasses import dataclass, replace
import math

import numpy as np

from .errors import DiluteRegimeViolation, NotBracketed, ParameterError, SlopeSignMismatch

C_LIGHT = 299_792_458.0
HBAR = 1.054_571_817e-34
EPSILON_0 = 8.854_187_8128e-12

DILUTE_LIMIT = 1e-2
TUNE_RTOL = 1e-9
SEPARATION_BRACKET = (2.01, 1e3)  # in units of gamma


@dataclass(frozen=True)
class RamanMediumParams:
    """Pump and medium parameters of the gain doublet.

    ``coupling_A`` lumps the prefactor N|d32|^2 / (4 pi hbar eps0 Delta0^2) and
    carries units of s/rad so that chi is dimensionless; all frequencies are
    angular (rad/s).
    """

    coupling_A: float
    omega1_rabi: float
    omega2_rabi: float
    omega_res1: float
    pump_separation: float
    gamma: float

    def __post_init__(self):
        for key in ("coupling_A", "gamma", "pump_separation", "omega_res1"):
            value = getattr(self, key)
            if not (math.isfinite(value) and value > 0):
                raise ParameterError(f"medium.{key}", f"must be finite and > 0, got {value!r}")
        for key in ("omega1_rabi", "omega2_rabi"):
            value = getattr(self, key)
            if not (math.isfinite(value) and value >= 0):
                raise ParameterError(f"medium.{key}", f"must be finite and >= 0, got {value!r}")
        if self.omega1_rabi == 0 and self.omega2_rabi == 0:
            raise ParameterError("medium.omega1_rabi", "both Rabi frequencies are zero")

    @property
    def center(self):
        """Geometric midpoint of the doublet, omega_res1 - separation/2."""
        return self.omega_res1 - 0.5 * self.pump_separation

    @property
    def center_detuning(self):
        return -0.5 * self.pump_separation

    def _lines(self):
        # (strength A*Omega^2, detuning offset of the line relative to omega_res1)
        return (
            (self.coupling_A * self.omega1_rabi**2, 0.0),
            (self.coupling_A * self.omega2_rabi**2, -self.pump_separation),
        )


@dataclass(frozen=True)
class DispersionSample:
    omega: float
    chi_re: float
    chi_im: float
    n: float
    gain: float
    dn_domega: float
    d2n_domega2: float
    n_g: float


def coupling_from_si(number_density, dipole_moment, detuning):
    """Collapse N |d32|^2 / (4 pi hbar eps0 Delta0^2) into ``coupling_A``.

    ``number_density`` in m^-3, ``dipole_moment`` in C m, ``detuning`` (Delta0)
    in rad/s. Returns seconds per radian.
    """
    return number_density * dipole_moment**2 / (4 * math.pi * HBAR * EPSILON_0 * detuning**2)


def susceptibility_detuned(delta, p):
    """chi as a function of the two-photon detuning ``delta = omega - omega_res1``."""
    delta = np.asarray(delta, dtype=float)
    chi = np.zeros(delta.shape, dtype=complex)
    for strength, offset in p._lines():
        chi = chi + strength / ((delta - offset) + 1j * p.gamma)
    return chi[()] if chi.ndim == 0 else chi


def susceptibility(omega, p):
    """Complex susceptibility at angular frequency ``omega``."""
    return susceptibility_detuned(np.asarray(omega, dtype=float) - p.omega_res1, p)


def check_dilute(chi):
    magnitude = np.max(np.abs(chi))
    if magnitude >= DILUTE_LIMIT:
        raise DiluteRegimeViolation(
            f"|chi| = {magnitude:.3e} >= {DILUTE_LIMIT:g}; n = 1 + Re(chi)/2 is not trustworthy"
        )


def index_excess_detuned(delta, p, check_dilute_regime=True):
    """n - 1 at two-photon detuning ``delta``."""
    chi = susceptibility_detuned(delta, p)
    if check_dilute_regime:
        check_dilute(chi)
    return 0.5 * np.real(chi)


def refractive_index(omega, p, check_dilute_regime=True):
    """n(omega) = 1 + Re(chi)/2."""
    delta = np.asarray(omega, dtype=float) - p.omega_res1
    return 1.0 + index_excess_detuned(delta, p, check_dilute_regime)


def gain_coefficient(omega, p, check_dilute_regime=True):
    """Intensity gain coefficient g = -(omega/c) Im(chi), in 1/m."""
    omega = np.asarray(omega, dtype=float)
    chi = susceptibility(omega, p)
    if check_dilute_regime:
        check_dilute(chi)
    return -(omega / C_LIGHT) * np.imag(chi)


def dispersion_derivatives_detuned(delta, p, check_dilute_regime=True):
    """Analytic (dn/domega, d2n/domega2) at two-photon detuning ``delta``.

    For each line with z = delta - offset + i*gamma the index contribution is
    Re(S/z)/2, so the derivatives are Re(-S/z^2)/2 and Re(2S/z^3)/2.
    """
    delta = np.asarray(delta, dtype=float)
    if check_dilute_regime:
        check_dilute(susceptibility_detuned(delta, p))
    d1 = np.zeros(delta.shape)
    d2 = np.zeros(delta.shape)
    for strength, offset in p._lines():
        z = (delta - offset) + 1j * p.gamma
        inv = 1.0 / z
        d1 = d1 - 0.5 * np.real(strength * inv * inv)
        d2 = d2 + np.real(strength * inv * inv * inv)
    if d1.ndim == 0:
        return float(d1), float(d2)
    return d1, d2


def dispersion_derivatives(omega, p, check_dilute_regime=True):
    """Analytic (dn/domega [s/rad], d2n/domega2 [s^2/rad^2])."""
    delta = np.asarray(omega, dtype=float) - p.omega_res1
    return dispersion_derivatives_detuned(delta, p, check_dilute_regime)


def group_index(omega, p, check_dilute_regime=True):
    """n_g = n + omega * dn/domega."""
    n = refractive_index(omega, p, check_dilute_regime)
    dn, _ = dispersion_derivatives(omega, p, check_dilute_regime)
    return n + np.asarray(omega, dtype=float) * dn


def index_shift(p, delta0, x):
    """n(w1 + delta0 + x) - n(w1 + delta0) without cancellation.

    Uses 1/(d + x + i g) - 1/(d + i g) = -x / ((d + x + i g)(d + i g)), which
    keeps full relative precision for offsets ``x`` far below ``delta0``.
    """
    x = np.asarray(x, dtype=float)
    shift = np.zeros(x.shape)
    for strength, offset in p._lines():
        z0 = (delta0 - offset) + 1j * p.gamma
        z1 = (delta0 - offset + x) + 1j * p.gamma
        shift = shift - 0.5 * np.real(strength * x / (z1 * z0))
    return float(shift) if shift.ndim == 0 else shift


def sample(omega, p, check_dilute_regime=True):
    """Evaluate every dispersion quantity at one frequency."""
    omega = float(omega)
    delta = omega - p.omega_res1
    return sample_detuned(delta, p, omega=omega, check_dilute_regime=check_dilute_regime)


def sample_detuned(delta, p, omega=None, check_dilute_regime=True):
    omega = p.omega_res1 + delta if omega is None else omega
    chi = complex(susceptibility_detuned(delta, p))
    if check_dilute_regime:
        check_dilute(chi)
    n = 1.0 + 0.5 * chi.real
    dn, d2n = dispersion_derivatives_detuned(delta, p, check_dilute_regime=False)
    return DispersionSample(
        omega=omega,
        chi_re=chi.real,
        chi_im=chi.imag,
        n=n,
        gain=-(omega / C_LIGHT) * chi.imag,
        dn_domega=dn,
        d2n_domega2=d2n,
        n_g=n + omega * dn,
    )


def center_slope(p):
    """dn/domega at the doublet midpoint."""
    return dispersion_derivatives_detuned(p.center_detuning, p)[0]


def tune_to_cad(p, target_slope, knob="separation"):
    """Return parameters whose centre slope dn/domega equals ``target_slope``.

    ``knob="rabi_scale"`` rescales both (equal) Rabi frequencies analytically,
    since chi is proportional to Omega^2. ``knob="separation"`` scans the pump
    separation over [2.01, 1000] gamma for sign changes of slope - target and
    bisects the bracket nearest the current separation.
    """
    if not (math.isfinite(target_slope) and target_slope < 0):
        raise ParameterError("cad_target_slope", f"must be negative, got {target_slope!r}")
    current = center_slope(p)
    if abs(current - target_slope) <= TUNE_RTOL * abs(target_slope):
        return p
    if knob == "rabi_scale":
        tuned = _tune_rabi(p, current, target_slope)
    elif knob == "separation":
        tuned = _tune_separation(p, target_slope)
    else:
        raise ParameterError("cad_knob", f"unknown knob {knob!r}")
    achieved = center_slope(tuned)
    if abs(achieved - target_slope) > TUNE_RTOL * abs(target_slope):
        raise NotBracketed(
            f"tuning reached slope {achieved:.6e}, target {target_slope:.6e} (rtol {TUNE_RTOL:g})"
        )
    return tuned


def _tune_rabi(p, current, target):
    if p.omega1_rabi != p.omega2_rabi:
        raise ParameterError("medium.omega2_rabi", "rabi_scale tuning requires equal Rabi frequencies")
    if current >= 0:
        raise SlopeSignMismatch(
            f"centre slope {current:.3e} is not anomalous; scaling the pumps cannot make it negative"
        )
    scale = math.sqrt(target / current)
    return replace(p, omega1_rabi=p.omega1_rabi * scale, omega2_rabi=p.omega2_rabi * scale)


def _slope_at_separation(p, separation):
    return center_slope(replace(p, pump_separation=separation))


def _center_slopes(p, separations):
    """Centre dn/domega for an array of pump separations, vectorised."""
    half = 0.5 * np.asarray(separations, dtype=float)
    s1 = p.coupling_A * p.omega1_rabi**2
    s2 = p.coupling_A * p.omega2_rabi**2
    z1 = -half + 1j * p.gamma
    z2 = half + 1j * p.gamma
    return -0.5 * np.real(s1 / (z1 * z1) + s2 / (z2 * z2))


def _tune_separation(p, target, grid_points=4001):
    lo, hi = (f * p.gamma for f in SEPARATION_BRACKET)
    grid = np.geomspace(lo, hi, grid_points)
    residual = _center_slopes(p, grid) - target
    crossings = np.nonzero(np.sign(residual[:-1]) * np.sign(residual[1:]) <= 0)[0]
    if crossings.size == 0:
        raise NotBracketed(
            f"no pump separation in [{lo:.4e}, {hi:.4e}] rad/s gives centre slope {target:.4e}"
        )
    # nearest bracket to the current separation, measured in log space
    mid = np.sqrt(grid[crossings] * grid[crossings + 1])
    k = crossings[np.argmin(np.abs(np.log(mid / p.pump_separation)))]
    a, b = grid[k], grid[k + 1]
    fa = residual[k]
    for _ in range(200):
        m = 0.5 * (a + b)
        if m in (a, b):
            break
        fm = _slope_at_separation(p, m) - target
        if abs(fm) <= 1e-3 * TUNE_RTOL * abs(target):
            a = b = m
            break
        if np.sign(fm) == np.sign(fa):
            a, fa = m, fm
        else:
            b = m
    return replace(p, pump_separation=float(0.5 * (a + b)))
