"""Regenerate the frozen reference tables in tests/data with mpmath."""

import json
import os

import mpmath as mp

mp.mp.dps = 50
HERE = os.path.dirname(os.path.abspath(__file__))
OUT = os.path.join(HERE, "..", "tests", "data")


def ml(alpha, z):
    alpha = mp.mpf(alpha)
    z = mp.mpc(z)
    s = mp.mpf(0)
    k = 0
    while True:
        term = z ** k / mp.gamma(1 + alpha * k)
        s += term
        if k > 10 and abs(term) < mp.mpf(10) ** -45 * max(1, abs(s)):
            return s
        k += 1


def main():
    xs = [mp.mpf(10) ** (mp.mpf(-3) + mp.mpf(i) * (mp.log10(170) + 3) / 49) for i in range(50)]
    gamma_rows = [{"x": float(x), "gamma": mp.nstr(mp.gamma(mp.mpf(float(x))), 30)} for x in xs]
    with open(os.path.join(OUT, "gamma_reference.json"), "w") as fh:
        json.dump(gamma_rows, fh, indent=1)

    cases = []
    for alpha in (0.3, 0.5, 0.6, 0.8, 0.9, 1.0):
        for z in (0.5, 1.0, -1.0, 2.0, -3.0, 1j, -2j, 1 + 1j, -1.5 + 0.5j, 3.0, -5.0, 4j, 10.0):
            v = ml(alpha, z)
            cases.append({"alpha": alpha, "z_re": complex(z).real, "z_im": complex(z).imag,
                          "re": mp.nstr(v.real, 30), "im": mp.nstr(v.imag, 30)})
    with open(os.path.join(OUT, "ml_reference.json"), "w") as fh:
        json.dump(cases, fh, indent=1)

    # exact arguments used by the acceptance suite, keyed by their rational form
    args = {"4/3": mp.mpf(4) / 3, "5/3": mp.mpf(5) / 3, "7/3": mp.mpf(7) / 3,
            "8/3": mp.mpf(8) / 3}
    for alpha in ("0.3", "0.4", "0.5", "0.8"):
        args[f"1+{alpha}"] = 1 + mp.mpf(alpha)
        args[f"1+2*{alpha}"] = 1 + 2 * mp.mpf(alpha)
    special = {
        "gamma": {key: mp.nstr(mp.gamma(x), 30) for key, x in args.items()},
        "ml_half_at_one": mp.nstr(ml(mp.mpf(1) / 2, 1).real, 30),
    }
    with open(os.path.join(OUT, "acceptance_reference.json"), "w") as fh:
        json.dump(special, fh, indent=1)


if __name__ == "__main__":
    main()
