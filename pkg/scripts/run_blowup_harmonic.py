#!/usr/bin/env python3
"""Near-critical sweep in the truncated harmonic well and the scaling-law fit.

Writes report to blowup_harmonic/ and prints the fitted exponent against the
predicted 1/(p+2) = 1/4.  Takes a few minutes at n=512.
"""

import json
import pathlib
import sys
import tempfile

from gp2d.cli import run
from gp2d.soliton import profile_to_dict, solve_townes

CONFIG = """\
potential = power_well h0=1 p=2 rcut=8
L = 16
n = 512
a_schedule = geom:0.05,0.65,7
tol = 3e-6
max_iters = 40000
out_dir = blowup_harmonic
"""


def main():
    out_dir = pathlib.Path("blowup_harmonic")
    with tempfile.TemporaryDirectory() as tmp:
        cfg = pathlib.Path(tmp) / "sweep.cfg"
        cfg.write_text(CONFIG)
        prof = pathlib.Path(tmp) / "profile.json"
        profile = solve_townes(tol=1e-12)
        prof.write_text(json.dumps(profile_to_dict(profile)))
        code = run(["blowup", "--config", str(cfg), "--profile", str(prof)])
    if code != 0:
        return code
    fit = json.loads((out_dir / "fit.json").read_text())
    print(f"fitted exponent    {fit['exponent']:.4f}  (predicted {fit['predicted_exponent']:.4f})")
    print(f"fitted prefactor   {fit['prefactor']:.4f}  (predicted {fit['predicted_prefactor']:.4f})")
    return 0


if __name__ == "__main__":
    sys.exit(main())
