#!/usr/bin/env python3
"""Recompute the calibrated constants in src/padicweights/data/constants.json.

Generic thresholds are 1.5x the largest piece ratio |rho| Q / sqrt(UV) seen on
non-atypical ramified omega; the other constants are 1.5x (or 2x) the largest
observed normalized quantity. Prints the new JSON; ``--write`` replaces the file.
"""

import argparse
import json
import math
from pathlib import Path

from padicweights.characters import MultChar, characters_of_conductor
from padicweights.constants import _raw
from padicweights.degenerate import n_alpha_weightnorm
from padicweights.dualweight import dual_weight
from padicweights.scans import atypical_scan, ratio_scaling

SCANS = {3: (2, 3, 4), 5: (2, 3, 4), 7: (2, 3), 13: (2, 3)}


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--write", action="store_true")
    args = ap.parse_args()

    data = _raw()
    generic, atyp, unram = {}, 0.0, 0.0
    for p, ns in SCANS.items():
        g = 0.0
        for n in ns:
            chi = characters_of_conductor(p, n)[0]
            for r in atypical_scan(chi, workers=args.workers):
                if r["atypical"]:
                    atyp = max(atyp, ratio_scaling(r, p, n))
                else:
                    g = max(g, r["max_ratio"])
            for theta in (0.0, 0.25, 0.5):
                unram = max(unram, abs(dual_weight(chi, MultChar.unramified(p, theta)).value))
        generic[str(p)] = round(1.5 * g, 3)
        print(f"p={p}: generic max ratio {g:.4f}")
    dstar = 0.0
    for p in (3, 5, 7):
        for n in (1, 2, 3):
            chi = characters_of_conductor(p, n)[0]
            sup = n_alpha_weightnorm(chi, 0.1, 5).sup_estimate
            # sup <= C Q^(k alpha) with C = dstar_const; solve for the exponent k
            dstar = max(dstar, math.log(max(sup / data["dstar_const"], 1.0)) / (0.1 * math.log(p**n)))
    data["generic_threshold"] = generic
    data["generic_threshold_default"] = max(generic.values())
    data["generic_const"] = max(generic.values())
    data["atypical_const"] = round(1.5 * atyp, 3)
    data["unramified_const"] = round(2 * unram + 1e-3, 4)
    data["dstar_exponent"] = max(round(2 * dstar, 2), 1.0)
    text = json.dumps(data, indent=2) + "\n"
    print(text)
    if args.write:
        Path(__file__).resolve().parents[1].joinpath("src/padicweights/data/constants.json").write_text(text)


if __name__ == "__main__":
    main()
