"""Driving the sidecar process over its line protocol, like a training loop.

Spawns `asws serve`, configures it with the adaptive LR schedule, streams
a synthetic curve epoch by epoch, and prints the decisions that come back.
"""

import json
import subprocess
import sys

from asws.harness import synth_curve

proc = subprocess.Popen(
    [sys.executable, "-m", "asws", "serve"],
    stdin=subprocess.PIPE, stdout=subprocess.PIPE, text=True, bufsize=1,
)


def rpc(message):
    proc.stdin.write(json.dumps(message) + "\n")
    proc.stdin.flush()
    return json.loads(proc.stdout.readline())


ack = rpc({
    "type": "configure", "gamma": 0.2, "clip": 15, "n": 19, "slack": 20,
    "slack_prop": 0.5, "alpha": 0.97,
    "scheduler": {"initial_lr": 0.1, "forced_epochs": 5},
})
print("configured:", ack["config"]["n"], "epoch windows, alpha", ack["config"]["alpha"])

curve = synth_curve(asymptote=0.9, time_constant=10.0, noise_sd=1e-3, length=120, seed=5)
for epoch, acc in enumerate(curve):
    decision = rpc({"type": "report", "epoch": epoch, "test_acc": acc})
    if decision["stop"]:
        print(f"epoch {epoch:3d}: rate dropped to {decision['lr']:.0e} "
              f"(votes {decision['votes']}, shapiro_p {decision['shapiro_p']:.3f})")
    elif epoch % 30 == 0:
        reason = decision["reason"] or "evaluated"
        print(f"epoch {epoch:3d}: lr {decision['lr']:.0e} votes {decision['votes']} ({reason})")

print("final:", rpc({"type": "query"}))
assert rpc({"type": "shutdown"})["type"] == "ack"
print("sidecar exit code:", proc.wait())
