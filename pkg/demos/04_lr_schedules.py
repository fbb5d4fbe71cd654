"""Learning-rate schedules: test-driven drops vs step / plateau / cyclic.

Runs the adaptive schedule over a plateauing curve and prints its drop
timeline next to the comparator schedules' closed-form rates.
"""

import numpy as np

from asws import AswsConfig, MetricSeries
from asws.harness import synth_curve
from asws.scheduler import (
    AswsLrScheduler,
    comparator_lr,
    cyclic_schedule,
    plateau_schedule,
    step_schedule,
)

curve = synth_curve(asymptote=0.9, time_constant=10.0, noise_sd=1e-3, length=200, seed=3)
config = AswsConfig(gamma=0.60, clip=15, n=17, slack=20, slack_prop=0.35, alpha=0.97)

scheduler = AswsLrScheduler(config, initial_lr=0.1, forced_epochs=5)
print("adaptive schedule (drop 10x on fire, then hold 5 epochs):")
for epoch, acc in enumerate(curve):
    before = scheduler.current_lr
    lr = scheduler.step(acc)
    if lr != before:
        print(f"  epoch {epoch:3d}: {before:.0e} -> {lr:.0e}")
print(f"  final lr {scheduler.current_lr:.0e} after {scheduler.state.drops_taken} drops")

print("\nstep schedule (gamma=0.5 every 50 epochs, from 0.25):")
for epoch in (0, 50, 100, 150):
    print(f"  epoch {epoch:3d}: {comparator_lr(step_schedule(), epoch):.4f}")

print("\nreduce-on-plateau (gamma=0.1, patience=20, from 0.25) on a flat curve:")
flat = MetricSeries(np.full(100, 0.5))
for epoch in (0, 19, 20, 40, 60):
    print(f"  epoch {epoch:3d}: {comparator_lr(plateau_schedule(), epoch, flat):.4g}")

print("\ncyclic triangular2 (0.01..0.026, half-cycle 30): peaks halve per cycle")
cyc = cyclic_schedule(min_lr=0.01, max_lr=0.026, step_size=30)
for it in (0, 30, 60, 90, 150, 210):
    print(f"  iteration {it:3d}: {comparator_lr(cyc, it):.5f}")
