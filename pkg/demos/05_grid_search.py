"""Hyperparameter sweep over a small synthetic corpus.

Evaluates the full published lattice (8 gammas x 8 window sizes x 12
slack proportions = 768 points), keeps configurations within 0.5% of the
performance baseline's accuracy, and picks the earliest stopper.
"""

import time

from asws.harness import SweepSpec, grid_search, heuristic_grid_search, synth_sessions

sessions = synth_sessions(runs=10, length=200, asymptote=0.9, time_constant=20.0, noise_sd=1e-3)
spec = SweepSpec()  # published grids, accuracy_slack=0.005
print(f"sweeping {spec.size} configurations over {len(sessions)} recorded runs...")

t0 = time.time()
best, lattice = grid_search(sessions, spec, slack=20, alpha=0.97, workers=1)
print(f"done in {time.time() - t0:.1f}s")
print(f"best: gamma={best.gamma:.4f} n={best.n} slack_prop={best.slack_prop:.3f}")

by_epoch = sorted(lattice, key=lambda p: p.mean_stop_epoch)
print("\nfive earliest stoppers (accuracy constraint not yet applied):")
for p in by_epoch[:5]:
    print(f"  gamma={p.config.gamma:.4f} n={p.config.n:2d} slack_prop={p.config.slack_prop:.3f}"
          f"  epoch={p.mean_stop_epoch:6.1f}  acc={p.mean_best_accuracy:.5f}")

never = sum(p.never_fired for p in lattice)
print(f"\n(run, config) pairs that never fired: {never}")

best_heur, _ = heuristic_grid_search(sessions, "avg_diff")
print(f"\nbest average-difference heuristic by mean accuracy: "
      f"window={best_heur.window} min_delta={best_heur.min_delta:.3f}")
