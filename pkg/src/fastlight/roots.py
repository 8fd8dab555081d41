"""Bracketed scalar root finding: bisection with secant (Illinois) refinement."""

from dataclasses import dataclass, field

import numpy as np

from .errors import NotBracketed

_EPS = np.finfo(float).eps


@dataclass
class RootResult:
    root: float
    iterations: int
    widths: list = field(default_factory=list)


def _key(x):
    """Integer key, monotone in x, counting representable doubles from 0."""
    bits = int(np.float64(abs(x)).view(np.int64))
    return bits if x >= 0 else -bits


def _from_key(k):
    x = float(np.int64(abs(k)).view(np.float64))
    return x if k >= 0 else -x


def _lattice_midpoint(a, b):
    # halves the number of doubles in [a, b], so at most ~64 steps reach any root
    return _from_key((_key(a) + _key(b)) // 2)


def bisect_secant(f, a, b, maxiter=400):
    """Find a sign change of ``f`` inside [a, b] to full double precision.

    Each step tries a false-position point with the Illinois down-weighting;
    when a step fails to halve the bracket the next one bisects the bracket
    on the floating-point lattice, so tiny roots in wide brackets are still
    reached quickly. The bracket never grows, so ``widths`` is non-increasing.
    """
    a, b = float(a), float(b)
    if a > b:
        a, b = b, a
    fa, fb = f(a), f(b)
    if fa == 0:
        return RootResult(a, 0, [0.0])
    if fb == 0:
        return RootResult(b, 0, [0.0])
    if np.sign(fa) == np.sign(fb):
        raise NotBracketed(f"no sign change on [{a!r}, {b!r}]: f(a)={fa:.3e}, f(b)={fb:.3e}")

    # wa, wb are the Illinois-weighted values; fa, fb stay the true ones
    wa, wb = fa, fb
    widths = [b - a]
    side = 0
    use_bisection = False
    it = 0
    while it < maxiter:
        it += 1
        if use_bisection:
            x = _lattice_midpoint(a, b)
        else:
            x = b - wb * (b - a) / (wb - wa)
            if not (a < x < b):
                x = _lattice_midpoint(a, b)
        if x <= a or x >= b:
            break
        fx = f(x)
        if fx == 0:
            widths.append(0.0)
            return RootResult(x, it, widths)
        if np.sign(fx) == np.sign(fa):
            a, fa, wa = x, fx, fx
            if side == -1:
                wb *= 0.5
            side = -1
        else:
            b, fb, wb = x, fx, fx
            if side == 1:
                wa *= 0.5
            side = 1
        width = b - a
        use_bisection = width > 0.5 * widths[-1]
        widths.append(width)
        if width <= 2 * _EPS * max(abs(a), abs(b)):
            break
    root = a if abs(fa) <= abs(fb) else b
    return RootResult(root, it, widths)
