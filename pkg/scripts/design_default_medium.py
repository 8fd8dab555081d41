"""Derive the shipped default Raman medium.

Only three target numbers pin the medium: the centre slope (-3.1e-16 s/rad),
the 1 MHz-band second dispersion (4.1e-38 s^2/rad^2) and eta_max = 8.0e7.

For two equal lines at +-u*gamma from the centre the slope is
A*W^2*g(u)/gamma^2 with g(u) = (1-u^2)/(1+u^2)^2, and the third derivative is
proportional to g''(u), which vanishes at u* = 1 + sqrt(2). The band maximum
of |d2n/dw2| over +-pi*1e6 rad/s is roughly |n'''| * pi*1e6, so the quoted
second dispersion requires u just above u* with a very broad line. The
linewidth is chosen as large as the dilute limit comfortably allows.

Run:  python scripts/design_default_medium.py
"""

from dataclasses import replace
import math

import numpy as np
from scipy.optimize import brentq

from fastlight.medium import RamanMediumParams, dispersion_derivatives_detuned, tune_to_cad, susceptibility_detuned

OMEGA0 = 2.43e15
SLOPE = -3.1e-16
N_DD_TARGET = 4.1e-38
BAND_HALF = math.pi * 1e6
GAMMA = 2 * math.pi * 2e11
RABI = 2 * math.pi * 1e9


def g(u):
    return (1 - u * u) / (1 + u * u) ** 2


def band_max(p):
    x = np.linspace(-BAND_HALF, BAND_HALF, 100_001)
    return np.abs(dispersion_derivatives_detuned(p.center_detuning + x, p)[1]).max()


def medium_for(u):
    sep = 2 * u * GAMMA
    coupling = SLOPE * GAMMA**2 / g(u) / RABI**2
    return RamanMediumParams(coupling, RABI, RABI, OMEGA0 + sep / 2, sep, GAMMA)


def main():
    u_star = 1 + math.sqrt(2)
    du = brentq(lambda d: band_max(medium_for(u_star + d)) - N_DD_TARGET, 1e-7, 1e-3, xtol=1e-14)
    exact = medium_for(u_star + du)
    coupling = float(f"{exact.coupling_A:.9e}")
    separation = float(f"{exact.pump_separation:.6e}")
    shipped = replace(exact, coupling_A=coupling, pump_separation=separation,
                      omega_res1=OMEGA0 + separation / 2)
    tuned = tune_to_cad(shipped, SLOPE, "separation")
    peak = abs(susceptibility_detuned(0.0, tuned))
    print(f"u* + du          = {u_star + du:.12f}")
    print(f"coupling_A       = {coupling!r}")
    print(f"pump_separation  = {separation!r}  (nominal, before tuning)")
    print(f"omega_res1       = {shipped.omega_res1!r}")
    print(f"gamma            = {GAMMA!r}")
    print(f"rabi             = {RABI!r}")
    print(f"tuned separation = {tuned.pump_separation!r}")
    print(f"tuned band n''   = {band_max(tuned):.6e}   target {N_DD_TARGET:.2e}")
    print(f"peak |chi|       = {peak:.3e}")


if __name__ == "__main__":
    main()
