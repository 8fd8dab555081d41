"""Exception hierarchy shared by every stage of the simulator."""


class FastLightError(Exception):
    """Base class for all simulator errors."""


class ParameterError(FastLightError, ValueError):
    """A parameter violates its declared invariant.

    ``key`` names the offending field so front ends can point at it.
    """

    def __init__(self, key, message):
        super().__init__(f"{key}: {message}")
        self.key = key


class ConfigError(ParameterError):
    """Malformed or unknown configuration input."""


class DiluteRegimeViolation(FastLightError):
    """|chi| is too large for the linearized index n = 1 + Re(chi)/2."""


class NotBracketed(FastLightError):
    """A bracketing search found no sign change."""


class SlopeSignMismatch(FastLightError):
    """Rabi scaling cannot change the sign of the dispersion slope."""


class SmallnessViolation(FastLightError):
    """The test-chamber index perturbation is not small compared to n0."""


class CadSingularity(FastLightError):
    """Group index too close to zero for the first-order beat formula."""


class ComplexRoot(FastLightError):
    """1 + Q xi^2 < 0: the quadratic closure has no real solution."""


class ZeroQ(FastLightError):
    """Q = 0, so the enhancement bound is unbounded."""


class ZeroSigma(FastLightError):
    """sigma = 0, so the perturbation is unobservable."""


class PipelineError(FastLightError):
    """A component error labelled with the pipeline stage that raised it."""

    def __init__(self, stage, cause):
        super().__init__(f"[{stage}] {type(cause).__name__}: {cause}")
        self.stage = stage
        self.cause = cause


# Errors that the CLI reports as numeric failures (exit code 3).
NUMERIC_ERRORS = (
    DiluteRegimeViolation,
    NotBracketed,
    ComplexRoot,
    SlopeSignMismatch,
    CadSingularity,
    ZeroQ,
)
