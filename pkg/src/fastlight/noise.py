"""Shot-noise floor of the heterodyne beat and the resulting sensing uncertainty."""

from dataclasses import dataclass
import math
from typing import NamedTuple, Optional

from .errors import ParameterError, ZeroSigma


@dataclass(frozen=True)
class DetectionParams:
    photon_rate: float
    quantum_eff: float
    cavity_linewidth_hz: float
    integration_time_s: float

    def __post_init__(self):
        for key in ("photon_rate", "quantum_eff", "cavity_linewidth_hz", "integration_time_s"):
            value = getattr(self, key)
            if not (math.isfinite(value) and value > 0):
                raise ParameterError(f"detection.{key}", f"must be finite and > 0, got {value!r}")
        if self.quantum_eff > 1:
            raise ParameterError("detection.quantum_eff", f"must be <= 1, got {self.quantum_eff!r}")


class SensingUncertainty(NamedTuple):
    literal: float
    enhanced: Optional[float]


def beat_uncertainty(d):
    """delta_f = linewidth / sqrt(N_ph * eta_D * tau), in Hz."""
    return d.cavity_linewidth_hz / math.sqrt(d.photon_rate * d.quantum_eff * d.integration_time_s)


def sensing_uncertainty(delta_f, n0, sigma, enhancement=None):
    """delta_S = 2 pi delta_f n0 / sigma, exactly as the shot-noise formula reads.

    If a dimensionless ``enhancement`` is supplied the literal value divided by
    it is reported next to the literal one; the literal value is never replaced.
    """
    if sigma == 0:
        raise ZeroSigma("sigma = 0: delta_S is undefined")
    literal = 2 * math.pi * delta_f * n0 / sigma
    enhanced = None if enhancement is None else literal / enhancement
    return SensingUncertainty(literal, enhanced)
