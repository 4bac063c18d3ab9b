"""Produce the full CSV set for every named experiment recipe.

Writes to demos/out/ by default (pass a directory to override). The
packaged scenario runs 10^6 trials per grid point; pass a trial count as
a second argument for a quicker pass, e.g.

    python3 demos/render_all_recipes.py demos/out 20000
"""

import sys
import time
from dataclasses import replace
from pathlib import Path

from star_thz_perf import default_scenario, run_recipe
from star_thz_perf.cli_runner import _RECIPES

out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).parent / "out"
sc = default_scenario()
if len(sys.argv) > 2:
    sc = replace(sc, mc_trials=int(sys.argv[2]))

for name in _RECIPES:
    t0 = time.perf_counter()
    paths = run_recipe(name, sc, out)
    print(f"{name:8s} {time.perf_counter() - t0:6.1f} s  {paths[0]}")
