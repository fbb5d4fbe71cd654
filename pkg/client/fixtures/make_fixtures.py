"""Regenerate the client test fixtures from the primary package.

Writes curve.csv (a seeded 400-epoch synthetic session) and
decisions.json (the batch evaluator's decision on every prefix, which a
correct sidecar session must reproduce epoch by epoch).

Run from this directory: python3 make_fixtures.py
"""

import json
from pathlib import Path

from asws import AswsConfig, AswsMonitor
from asws.harness import synth_curve

HERE = Path(__file__).parent

CONFIG = {
    "gamma": 0.2, "clip": 15, "n": 19, "slack": 20,
    "slack_prop": 0.5, "alpha": 0.97,
}

curve = synth_curve(asymptote=0.9, time_constant=20.0, noise_sd=1e-3, length=400, seed=42)

with (HERE / "curve.csv").open("w") as fh:
    fh.write("epoch,test_acc\n")
    for epoch, value in enumerate(curve):
        fh.write(f"{epoch},{value!r}\n")

# the streaming monitor is proven prefix-equivalent to the batch evaluator,
# so replaying it yields exactly the per-prefix batch decisions
monitor = AswsMonitor(AswsConfig(**CONFIG))
decisions = []
for value in curve:
    d = monitor.update(value)
    if d is None:
        decisions.append({"stop": False, "votes": 0,
                          "shapiro_p": None, "ttest_p": None,
                          "reason": "insufficient_data"})
    else:
        last = d.window_results[-1]
        decisions.append({"stop": d.stop, "votes": d.votes,
                          "shapiro_p": last.shapiro_p, "ttest_p": last.ttest_p,
                          "reason": None})

(HERE / "decisions.json").write_text(json.dumps({
    "config": CONFIG,
    "decisions": decisions,
}, indent=None))
print(f"wrote {len(curve)} epochs and {len(decisions)} expected decisions")
