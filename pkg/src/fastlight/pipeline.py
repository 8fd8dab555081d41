"""End-to-end scenarios: medium -> cavity -> enhancement -> noise, plus sweeps.

The operating point is the doublet centre (optionally offset by
``probe_offset``) of the possibly tuned medium. The cavity is locked there:
the reference resonance is placed exactly on the operating point by trimming
L, which is what the per-chamber feedback loops achieve in practice.
"""

from concurrent.futures import ProcessPoolExecutor
from contextlib import contextmanager
from dataclasses import dataclass, fields, replace
import math

import numpy as np

from . import cavity as cav_mod
from . import medium as med
from .errors import CadSingularity, FastLightError, PipelineError
from .noise import beat_uncertainty, sensing_uncertainty
from .sensitivity import (
    EnhancementReport,
    eta_max,
    figure3_curve,
    first_order_beat,
    q_factor,
    resonance_q,
    second_order_beat,
)
from .tables import ResultTable

BAND_SAMPLES = 1001


@dataclass(frozen=True)
class ScenarioReport(EnhancementReport):
    """EnhancementReport plus the operating point, noise floor and tuned pumps.

    ``n`` is the medium index at the operating point; ``n0`` is the same value
    as seen by the locked cavity.
    """

    omega: float
    n0: float
    n: float
    chi_re: float
    chi_im: float
    gain: float
    dn_domega: float
    d2n_domega2: float
    n_g: float
    beat0: float
    q_resonance: float
    delta_f: float
    delta_S: float
    delta_S_enhanced: float
    pump_separation: float
    omega1_rabi: float
    omega2_rabi: float
    notes: tuple = ()


REPORT_FIELDS = tuple(f.name for f in fields(ScenarioReport) if f.name != "notes")


@contextmanager
def stage(name):
    """Re-raise component errors as PipelineError labelled with ``name``."""
    try:
        yield
    except PipelineError:
        raise
    except FastLightError as exc:
        raise PipelineError(name, exc) from exc


def band_second_dispersion(p, center, bandwidth_hz, samples=BAND_SAMPLES):
    """max |d2n/domega2| over center +- (2 pi bandwidth_hz)/2, analytic, on a uniform grid."""
    if samples < 1000:
        raise ValueError("need at least 1000 samples")
    half = math.pi * bandwidth_hz
    delta = (center - p.omega_res1) + np.linspace(-half, half, samples)
    return float(np.max(np.abs(med.dispersion_derivatives_detuned(delta, p)[1])))


def operating_point(cfg):
    """(medium, detuning) after optional CAD tuning."""
    medium = cfg.medium
    if cfg.tunes:
        with stage("tune"):
            medium = med.tune_to_cad(medium, cfg.cad_target_slope, cfg.cad_knob)
    return medium, medium.center_detuning + cfg.probe_offset


def run_scenario(cfg):
    """Evaluate one configuration into a ScenarioReport.

    A CadSingularity of the first-order formula is not fatal: that estimate
    becomes NaN and a note is attached. Every other component error is raised
    as a PipelineError naming its stage.
    """
    notes = []
    medium, delta = operating_point(cfg)
    omega = medium.omega_res1 + delta
    with stage("medium"):
        s = med.sample_detuned(delta, medium, omega=omega)
    n0 = s.n
    dn, d2n = (0.0, 0.0) if cfg.flat_index else (s.dn_domega, s.d2n_domega2)
    n_g = n0 + omega * dn

    with stage("cavity"):
        cav = cav_mod.locked(cfg.cavity, omega, n0)
        beat0 = cav_mod.dispersionless_beat(cav, cfg.perturbation)

    try:
        beat1, xi = first_order_beat(beat0, n0, omega, dn)
    except CadSingularity as exc:
        notes.append(f"first_order: CadSingularity: {exc}")
        beat1 = math.nan
        xi = n0 / n_g if n_g != 0 else math.inf
    n_tilde = omega * dn / n0

    with stage("band"):
        n_dd = 0.0 if cfg.flat_index else band_second_dispersion(medium, omega, cfg.bandwidth_hz) / n0
    f_frac = 2 * math.pi * cfg.bandwidth_hz / omega if cfg.f_mode == "bandwidth" else abs(beat0) / omega
    Q = q_factor(f_frac, n_dd, omega) if f_frac > 0 else 0.0

    with stage("second_order"):
        beat2, eta = second_order_beat(beat0, xi, Q, "upper")
    bound = eta_max(Q) if Q != 0 else math.inf

    with stage("oracle"):
        if cfg.flat_index:
            def excess(x):
                return 0.0
        else:
            def excess(x):
                return med.index_shift(medium, delta, x)
        beat_oracle = cav_mod.chamber_beat(excess, cav, cfg.perturbation)

    with stage("noise"):
        delta_f = beat_uncertainty(cfg.detection)
        sens = sensing_uncertainty(delta_f, n0, cfg.perturbation.sigma, eta)

    return ScenarioReport(
        xi=xi,
        n_tilde=n_tilde,
        Q=Q,
        f_frac=f_frac,
        n_dd=n_dd,
        eta=eta,
        eta_max=bound,
        beat_first_order=beat1,
        beat_second_order=beat2,
        beat_oracle=beat_oracle,
        omega=omega,
        n0=n0,
        n=s.n,
        chi_re=s.chi_re,
        chi_im=s.chi_im,
        gain=s.gain,
        dn_domega=dn,
        d2n_domega2=d2n,
        n_g=n_g,
        beat0=beat0,
        q_resonance=resonance_q(beat0 / omega, n_tilde, d2n / n0, omega),
        delta_f=delta_f,
        delta_S=sens.literal,
        delta_S_enhanced=sens.enhanced,
        pump_separation=medium.pump_separation,
        omega1_rabi=medium.omega1_rabi,
        omega2_rabi=medium.omega2_rabi,
        notes=tuple(notes),
    )


def _sweep_row(args):
    cfg, outputs = args
    try:
        report = run_scenario(cfg)
    except PipelineError as exc:
        return None, f"{exc.stage}: {type(exc.cause).__name__}: {exc.cause}"
    values = [getattr(report, name) for name in outputs]
    bad = [name for name, v in zip(outputs, values) if not math.isfinite(v)]
    if bad:
        why = "; ".join(report.notes) or "non-finite output"
        return None, f"non-finite {','.join(bad)}: {why}"
    return values, None


def run_sweep(spec, jobs=1):
    """Tabulate ``spec.outputs`` for every axis value, in axis order.

    Rows that fail, or produce non-finite outputs, go to the flagged section.
    Any ``jobs`` value gives identical output.
    """
    for name in spec.outputs:
        if name not in REPORT_FIELDS:
            raise ValueError(f"unknown report field {name!r}")
    tasks = []
    for value in spec.values:
        try:
            tasks.append((spec.base.with_value(spec.axis, value), spec.outputs))
        except FastLightError as exc:
            tasks.append((exc, spec.outputs))

    def evaluate(items):
        if jobs > 1:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                return list(pool.map(_sweep_row, items, chunksize=max(1, len(items) // (4 * jobs))))
        return [_sweep_row(item) for item in items]

    valid = [t for t in tasks if not isinstance(t[0], Exception)]
    results = iter(evaluate(valid))
    rows, flagged = [], []
    for value, task in zip(spec.values, tasks):
        if isinstance(task[0], Exception):
            flagged.append((value, f"config: {type(task[0]).__name__}: {task[0]}"))
            continue
        row, error = next(results)
        if error is None:
            rows.append((value, *row))
        else:
            flagged.append((value, error))
    return ResultTable(
        columns=(spec.axis, *spec.outputs),
        rows=tuple(rows),
        flagged=tuple(flagged),
        provenance={"config_hash": spec.digest(), "axis": spec.axis},
    )


def dispersion_profile(cfg, span=5.0, points=1001):
    """Dispersion quantities over centre +- span * separation of the (tuned) medium."""
    medium, _ = operating_point(cfg)
    delta = medium.center_detuning + np.linspace(-span, span, points) * medium.pump_separation
    chi = med.susceptibility_detuned(delta, medium)
    dn, d2n = med.dispersion_derivatives_detuned(delta, medium, check_dilute_regime=False)
    omega = medium.omega_res1 + delta
    n = 1.0 + 0.5 * chi.real
    data = np.column_stack([omega, delta - medium.center_detuning, chi.real, chi.imag, n,
                            -(omega / med.C_LIGHT) * chi.imag, dn, d2n, n + omega * dn])
    dilute = np.abs(chi) < med.DILUTE_LIMIT
    flagged = [(d, f"DiluteRegimeViolation: |chi| = {abs(c):.3e}")
               for d, c, ok in zip(data[:, 1], chi, dilute) if not ok]
    return ResultTable(
        columns=("omega", "detuning", "chi_re", "chi_im", "n", "gain", "dn_domega", "d2n_domega2", "n_g"),
        rows=tuple(map(tuple, data[dilute])),
        flagged=tuple(flagged),
        provenance={"config_hash": cfg.digest(), "pump_separation": repr(medium.pump_separation)},
    )


def figure3_table(cfg, ng_range=(-1.0, 1.0), samples=2001, scale="log", negative_branch="upper"):
    """eta against n_g / n0 for the scenario's Q."""
    report = run_scenario(cfg)
    curve = figure3_curve(report.Q, ng_range, samples, scale, negative_branch)
    rows = [(p.ng_over_n0, p.eta) for p in curve if not p.flag]
    flagged = [(p.ng_over_n0, p.flag) for p in curve if p.flag]
    return ResultTable(
        columns=("ng_over_n0", "eta"),
        rows=tuple(rows),
        flagged=tuple(flagged),
        provenance={
            "config_hash": cfg.digest(),
            "Q": repr(report.Q),
            "eta_max": repr(report.eta_max),
            "negative_branch": negative_branch,
        },
    )


def tuned_medium_table(cfg, target_slope, knob):
    medium = med.tune_to_cad(cfg.medium, target_slope, knob)
    s = med.sample_detuned(medium.center_detuning, medium, omega=medium.center)
    band = band_second_dispersion(medium, medium.center, cfg.bandwidth_hz)
    names = [f.name for f in fields(medium)]
    return ResultTable(
        columns=(*names, "center_omega", "center_slope", "center_n_g", "band_d2n_domega2"),
        rows=((*(getattr(medium, k) for k in names), medium.center, s.dn_domega, s.n_g, band),),
        provenance={"config_hash": cfg.digest(), "target_slope": repr(target_slope), "knob": knob},
    )


def with_medium(cfg, medium):
    return replace(cfg, medium=medium)
