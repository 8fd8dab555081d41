"""Independent high-precision reference values, frozen into tests/golden.py.

Deliberately does not import fastlight: every quantity is rebuilt from the
formulas with mpmath at 50 digits. Run and paste the printed block:

    python3 scripts/oracle_golden.py > tests/golden.py
"""

import mpmath as mp

mp.mp.dps = 50
PI = mp.pi

# small reference set: A = 1e-9, Rabi = 2 pi 1 MHz, separation = 2 pi 4 MHz, gamma = 2 pi 0.5 MHz
REF = dict(A=mp.mpf("1e-9"), W1=2 * PI * mp.mpf("1e6"), W2=2 * PI * mp.mpf("1e6"),
           w1=mp.mpf("2.43e15"), sep=2 * PI * mp.mpf("4e6"), g=2 * PI * mp.mpf("5e5"))

# shipped default medium, nominal separation before tuning
DEF = dict(A=mp.mpf("1.197495233e-10"), W1=mp.mpf("6283185307.179586"), W2=mp.mpf("6283185307.179586"),
           w1=mp.mpf("2433033905000000.0"), sep=mp.mpf("6067810000000.0"), g=mp.mpf("1256637061435.9172"))

C = mp.mpf(299792458)


def chi(w, p):
    d = w - p["w1"]
    return p["A"] * (p["W1"] ** 2 / (d + 1j * p["g"]) + p["W2"] ** 2 / (d + p["sep"] + 1j * p["g"]))


def index(w, p):
    return 1 + mp.re(chi(w, p)) / 2


def slope(p, sep=None):
    q = dict(p, sep=p["sep"] if sep is None else sep)
    centre = q["w1"] - q["sep"] / 2
    return mp.diff(lambda w: index(w, q), centre)


def d2n(w, p):
    return mp.diff(lambda x: index(x, p), w, 2)


def bisect(f, a, b, tol):
    fa = f(a)
    while b - a > tol * abs(b):
        m = (a + b) / 2
        fm = f(m)
        if mp.sign(fm) == mp.sign(fa):
            a, fa = m, fm
        else:
            b = m
    return (a + b) / 2


def main():
    out = {}
    p = REF
    out["REF_OMEGA_RES1"] = p["w1"]
    z = chi(p["w1"] - p["sep"] / 4, p)
    out["REF_CHI_QUARTER_RE"] = mp.re(z)
    out["REF_CHI_QUARTER_IM"] = mp.im(z)
    out["REF_N_CENTER"] = index(p["w1"] - p["sep"] / 2, p)
    out["REF_GAIN_AT_RES1"] = -(p["w1"] / C) * mp.im(chi(p["w1"], p))
    out["REF_ABS_CHI_AT_RES1"] = abs(chi(p["w1"], p))

    # CAD tuning by separation: dense slope table over [2.01, 1000] gamma, bisect nearest bracket
    target = mp.mpf("-3.1e-16")
    g = DEF["g"]
    grid = [g * mp.mpf("2.01") * (mp.mpf(1000) / mp.mpf("2.01")) ** (mp.mpf(k) / 20000) for k in range(20001)]

    def resid(s):
        q = dict(DEF, sep=s)
        h = q["sep"] / 2
        z1 = -h + 1j * g
        z2 = h + 1j * g
        return -mp.re(q["A"] * q["W1"] ** 2 / z1 ** 2 + q["A"] * q["W2"] ** 2 / z2 ** 2) / 2 - target

    vals = [resid(s) for s in grid]
    brackets = [k for k in range(len(grid) - 1) if mp.sign(vals[k]) != mp.sign(vals[k + 1])]
    k = min(brackets, key=lambda k: abs(mp.log(grid[k] / DEF["sep"])))
    tuned_sep = bisect(resid, grid[k], grid[k + 1], mp.mpf("1e-30"))
    out["DEF_TUNED_SEPARATION"] = tuned_sep
    out["DEF_SEPARATION_ROOTS"] = len(brackets)
    tuned = dict(DEF, sep=tuned_sep)
    out["DEF_TUNED_SLOPE_CHECK"] = slope(tuned)

    # 1 MHz band maximum of |d2n/dw2|, 1e5 points, closed form derivative at high precision
    centre = tuned["w1"] - tuned_sep / 2
    half = PI * mp.mpf("1e6")

    def d2(w):
        d = w - tuned["w1"]
        s = 0
        for strength, off in ((tuned["A"] * tuned["W1"] ** 2, 0), (tuned["A"] * tuned["W2"] ** 2, -tuned_sep)):
            zz = d - off + 1j * g
            s += mp.re(strength / zz ** 3)
        return s

    n_pts = 100000
    band = max(abs(d2(centre - half + 2 * half * j / (n_pts - 1))) for j in range(0, n_pts, 1))
    out["DEF_BAND_D2N"] = band
    out["DEF_BAND_D2N_FD_CHECK"] = abs(d2n(centre + half, tuned))

    # headline arithmetic
    w0 = mp.mpf("2.43e15")
    f = 2 * PI * mp.mpf("1e6") / w0
    Q = f * mp.mpf("4.1e-38") * w0 ** 2
    out["HEADLINE_Q"] = Q
    out["HEADLINE_ETA_MAX"] = 2 / mp.sqrt(Q)
    out["CARRIER_FROM_INVERSION"] = 4 / (mp.mpf("8.0e7") ** 2 * 2 * PI * mp.mpf("1e6") * mp.mpf("4.1e-38"))
    q61 = mp.mpf("6.1e-16")
    xi = mp.mpf("1e9")
    out["ETA_Q61_XI1E9"] = abs(2 * xi / (1 + mp.sqrt(1 + q61 * xi ** 2)))
    out["ETA_MAX_Q61"] = 2 / mp.sqrt(q61)
    out["GROUP_INDEX_EXAMPLE"] = 1 + w0 * mp.mpf("-3.1e-16")
    out["DELTA_F_WORKED"] = mp.mpf("1e5") / mp.sqrt(mp.mpf("1e15") * mp.mpf("0.8") * 1)

    print('"""Frozen reference values from scripts/oracle_golden.py (mpmath, 50 digits)."""\n')
    for key, value in out.items():
        text = repr(int(value)) if isinstance(value, int) else mp.nstr(value, 20)
        print(f"{key} = {text}")


if __name__ == "__main__":
    main()
