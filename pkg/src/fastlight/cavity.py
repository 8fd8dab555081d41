"""Dual-chamber Fabry-Perot resonator sharing one mirror pair.

A chamber with index n(omega) resonates where n(omega) * omega * L = m * pi * c.
Both chambers share L and m; the test chamber additionally carries the
frequency-independent index offset sigma * delta_S. The beat note is
``omega_reference - omega_test``, positive for sigma * delta_S > 0.

The resonance condition is solved in the detuning x = omega - omega0 so that
beat notes many orders of magnitude below omega0 keep full precision.
"""

from dataclasses import dataclass, replace
import math

from .errors import ParameterError, SmallnessViolation
from .medium import C_LIGHT
from .roots import bisect_secant

SMALLNESS_LIMIT = 1e-2
MODE_CONSISTENCY_RTOL = 1e-6
BRACKET_LINEWIDTHS = 1e3


@dataclass(frozen=True)
class CavityConfig:
    length_L: float
    mode_index: int
    linewidth_hz: float
    n0: float
    omega0: float

    def __post_init__(self):
        for key in ("length_L", "linewidth_hz", "n0", "omega0"):
            value = getattr(self, key)
            if not (math.isfinite(value) and value > 0):
                raise ParameterError(f"cavity.{key}", f"must be finite and > 0, got {value!r}")
        if int(self.mode_index) != self.mode_index or self.mode_index < 1:
            raise ParameterError("cavity.mode_index", f"must be a positive integer, got {self.mode_index!r}")
        object.__setattr__(self, "mode_index", int(self.mode_index))
        mismatch = abs(self.n0 * self.omega0 * self.length_L - self.resonance_product) / self.resonance_product
        if mismatch >= MODE_CONSISTENCY_RTOL:
            raise ParameterError(
                "cavity.mode_index",
                f"n0*omega0*L differs from m*pi*c by {mismatch:.2e} (relative); "
                f"mode {self.mode_index} does not match the carrier",
            )

    @property
    def resonance_product(self):
        """m * pi * c, the optical path-frequency product every resonance satisfies."""
        return self.mode_index * math.pi * C_LIGHT

    @property
    def bracket_halfwidth(self):
        """Search half-width W = 1e3 * 2 pi * linewidth, in rad/s."""
        return BRACKET_LINEWIDTHS * 2 * math.pi * self.linewidth_hz


@dataclass(frozen=True)
class PerturbationModel:
    sigma: float
    delta_S: float

    def __post_init__(self):
        for key in ("sigma", "delta_S"):
            if not math.isfinite(getattr(self, key)):
                raise ParameterError(f"perturbation.{key}", "must be finite")

    @property
    def index_offset(self):
        return self.sigma * self.delta_S


def check_smallness(n0, pert):
    ratio = pert.index_offset / n0
    if abs(ratio) >= SMALLNESS_LIMIT:
        raise SmallnessViolation(
            f"|sigma*delta_S/n0| = {abs(ratio):.3e} >= {SMALLNESS_LIMIT:g}; fractional-shift formulas invalid"
        )
    return ratio


def perturbed_base_index(n0, pert):
    """Test-chamber base index n' = n0 + sigma * delta_S."""
    check_smallness(n0, pert)
    return n0 + pert.index_offset


def dispersionless_beat(cav, pert):
    """Beat note without dispersion, omega0 * sigma * delta_S / n0 (rad/s)."""
    return cav.omega0 * check_smallness(cav.n0, pert)


def locked(cav, omega, n):
    """Cavity re-centred so that the reference resonance sits exactly at ``omega``.

    Models the mirror-spacing trim that places mode ``m`` on the operating
    point; only L, omega0 and n0 change.
    """
    return replace(cav, omega0=omega, n0=n, length_L=cav.resonance_product / (n * omega))


def resonance_residual(excess_fn, cav):
    """G(x) = (n0 + e(x)) (omega0 + x) - m pi c / L, arranged to avoid cancellation.

    ``excess_fn(x)`` returns n(omega0 + x) - n0.
    """
    mismatch = cav.resonance_product / cav.length_L - cav.n0 * cav.omega0

    def residual(x):
        return cav.n0 * x + excess_fn(x) * (cav.omega0 + x) - mismatch

    return residual


def resonance_detuning(excess_fn, cav, bracket=None, full_result=False):
    """Root x* of the resonance condition, as a detuning from ``cav.omega0``.

    ``bracket`` defaults to [-W, W]; raises NotBracketed if the residual does
    not change sign there.
    """
    if bracket is None:
        w = cav.bracket_halfwidth
        bracket = (-w, w)
    result = bisect_secant(resonance_residual(excess_fn, cav), *bracket)
    return result if full_result else result.root


def resonance_solve(index_fn, cav, bracket=None):
    """Resonant angular frequency of a chamber with index ``index_fn(omega)``.

    ``bracket``, if given, is in absolute angular frequency.
    """
    if bracket is not None:
        bracket = (bracket[0] - cav.omega0, bracket[1] - cav.omega0)
    x = resonance_detuning(lambda x: index_fn(cav.omega0 + x) - cav.n0, cav, bracket)
    return cav.omega0 + x


def chamber_beat(reference_excess, cav, pert, bracket=None):
    """Exact beat omega_ref - omega_test for two chambers sharing the mirrors.

    ``reference_excess(x)`` is the reference chamber's n(omega0 + x) - n0; the
    test chamber sees the same profile offset by sigma * delta_S.
    """
    check_smallness(cav.n0, pert)
    offset = pert.index_offset
    x_ref = resonance_detuning(reference_excess, cav, bracket)
    x_test = resonance_detuning(lambda x: reference_excess(x) + offset, cav, bracket)
    return x_ref - x_test
