"""Stopping decisions: the windowed two-test rule vs the four heuristics.

Replays a synthetic training curve through every criterion and prints
where each one would have stopped and what accuracy it would have kept.
"""

from asws import (
    AswsConfig,
    AswsMonitor,
    asws_evaluate,
    avg_diff_stopping,
    best_accuracy_before,
    min_diff_stopping,
    patience_stopping,
    performance_stopping,
    stopping_epoch,
)
from asws.harness import synth_curve

curve = synth_curve(asymptote=0.9, time_constant=12.0, noise_sd=1.5e-3, length=400, seed=11)
config = AswsConfig(gamma=0.2, clip=15, n=19, slack=20, slack_prop=0.5, alpha=0.97)

decision = asws_evaluate(curve, config)
print(f"whole-curve verdict at epoch 399: stop={decision.stop} "
      f"votes={decision.votes}/{len(decision.window_results)} (need > {decision.required})")

criteria = {
    "windowed two-test": config,
    "performance (K=60)": performance_stopping(60),
    "patience (3)": patience_stopping(3),
    "min-diff (27, 0.013)": min_diff_stopping(27, 0.013),
    "avg-diff (150, 0.001)": avg_diff_stopping(150, 0.001),
}

print(f"\n{'criterion':22s} {'stop epoch':>10s} {'best acc before':>16s}")
for name, criterion in criteria.items():
    epoch = stopping_epoch(curve, criterion)
    if epoch is None:
        print(f"{name:22s} {'never':>10s} {best_accuracy_before(curve, len(curve)):>16.5f}")
    else:
        print(f"{name:22s} {epoch:>10d} {best_accuracy_before(curve, epoch):>16.5f}")

# the streaming monitor sees the same curve one epoch at a time and fires
# at exactly the epoch the prefix scan reports
monitor = AswsMonitor(config)
for epoch, acc in enumerate(curve):
    d = monitor.update(acc)
    if d is not None and d.stop:
        print(f"\nstreaming monitor fired at epoch {epoch} "
              f"with {d.votes} votes; latest window p-values "
              f"shapiro={d.window_results[-1].shapiro_p:.3f} "
              f"ttest={d.window_results[-1].ttest_p:.3f}")
        break
