"""Line-protocol sidecar: a stopping/LR oracle for external training loops.

One JSON record per newline-terminated line, one reply per request, in
order. Inbound record types: configure, report, query, reset, shutdown.
Outbound: ack, decision, error. Field names on the wire: type, epoch,
test_acc, stop, lr, votes, shapiro_p, ttest_p, reason.

A session must start with `configure`, which echoes the effective
configuration back in the ack. Each `report` carries a strictly increasing
epoch plus that epoch's test accuracy and returns a `decision` over every
accuracy reported so far. With a `scheduler` object in the configure
payload the sidecar also runs the adaptive learning-rate schedule; the
decision's `lr` is then the rate to use next, and `stop` marks the epochs
where the schedule dropped the rate. Errors reply with reason
`not_configured`, `epoch_order`, or `parse`; the session keeps serving
after any error.
"""

import json
import math
import os
import socket
from typing import Optional, TextIO

from .stopping import AswsConfig, AswsMonitor, StopDecision
from .scheduler import AswsLrScheduler
from .errors import InvalidConfig

_CONFIG_FIELDS = ("gamma", "clip", "n", "slack", "slack_prop", "alpha", "use_shapiro", "use_ttest")


def _config_payload(config: AswsConfig) -> dict:
    return {name: getattr(config, name) for name in _CONFIG_FIELDS}


def _decision_payload(
    epoch: Optional[int],
    decision: Optional[StopDecision],
    lr: Optional[float],
    stop_override: Optional[bool] = None,
) -> dict:
    if decision is None:
        return {
            "type": "decision", "epoch": epoch, "stop": False, "lr": lr,
            "votes": 0, "shapiro_p": None, "ttest_p": None,
            "reason": "insufficient_data",
        }
    last = decision.window_results[-1] if decision.window_results else None
    return {
        "type": "decision",
        "epoch": epoch,
        "stop": decision.stop if stop_override is None else stop_override,
        "lr": lr,
        "votes": decision.votes,
        "shapiro_p": None if last is None else last.shapiro_p,
        "ttest_p": None if last is None else last.ttest_p,
        "reason": None,
    }


class SidecarSession:
    """Protocol state machine; one instance per connection."""

    def __init__(self, default_config: Optional[AswsConfig] = None):
        self._defaults = default_config or AswsConfig()
        self._config: Optional[AswsConfig] = None
        self._monitor: Optional[AswsMonitor] = None
        self._scheduler: Optional[AswsLrScheduler] = None
        self._last_epoch: Optional[int] = None
        self._last_decision: Optional[dict] = None
        self.done = False

    # -- message handling -------------------------------------------------

    def handle_line(self, line: str) -> dict:
        line = line.strip()
        try:
            message = json.loads(line)
        except json.JSONDecodeError as exc:
            return self._error("parse", f"invalid JSON: {exc.msg}")
        if not isinstance(message, dict) or "type" not in message:
            return self._error("parse", "expected an object with a 'type' field")
        kind = message["type"]
        if kind == "configure":
            return self._configure(message)
        if kind == "report":
            return self._report(message)
        if kind == "query":
            return self._query()
        if kind == "reset":
            return self._reset()
        if kind == "shutdown":
            self.done = True
            return {"type": "ack", "reason": None}
        return self._error("parse", f"unknown message type {kind!r}")

    def _error(self, reason: str, detail: str) -> dict:
        return {"type": "error", "reason": reason, "detail": detail}

    def _configure(self, message: dict) -> dict:
        overrides = {k: message[k] for k in _CONFIG_FIELDS if k in message}
        try:
            config = AswsConfig(**{**_config_payload(self._defaults), **overrides})
        except (InvalidConfig, TypeError) as exc:
            return self._error("parse", f"bad configuration: {exc}")
        scheduler_opts = message.get("scheduler")
        scheduler = None
        if scheduler_opts is not None:
            if not isinstance(scheduler_opts, dict):
                return self._error("parse", "'scheduler' must be an object")
            try:
                scheduler = AswsLrScheduler(
                    config,
                    initial_lr=float(scheduler_opts.get("initial_lr", 0.1)),
                    forced_epochs=int(scheduler_opts.get("forced_epochs", 5)),
                )
            except (InvalidConfig, ValueError, TypeError) as exc:
                return self._error("parse", f"bad scheduler options: {exc}")
        self._config = config
        self._monitor = AswsMonitor(config)
        self._scheduler = scheduler
        self._last_epoch = None
        self._last_decision = None
        ack = {"type": "ack", "reason": None, "config": _config_payload(config)}
        if scheduler is not None:
            ack["scheduler"] = {
                "initial_lr": scheduler.state.initial_lr,
                "forced_epochs": scheduler.state.forced_epochs,
            }
        return ack

    def _report(self, message: dict) -> dict:
        if self._config is None:
            return self._error("not_configured", "send configure before report")
        epoch = message.get("epoch")
        acc = message.get("test_acc")
        if not isinstance(epoch, int) or isinstance(epoch, bool):
            return self._error("parse", "'epoch' must be an integer")
        if not isinstance(acc, (int, float)) or isinstance(acc, bool) or not math.isfinite(acc):
            return self._error("parse", "'test_acc' must be a finite number")
        if self._last_epoch is not None and epoch <= self._last_epoch:
            return self._error(
                "epoch_order",
                f"epoch {epoch} is not greater than the last reported {self._last_epoch}",
            )
        self._last_epoch = epoch

        if self._scheduler is not None:
            self._scheduler.step(float(acc))
            reply = _decision_payload(
                epoch,
                self._scheduler.last_decision,
                self._scheduler.current_lr,
                stop_override=self._scheduler.last_drop,
            )
        else:
            decision = self._monitor.update(float(acc))
            reply = _decision_payload(epoch, decision, None)
        self._last_decision = reply
        return reply

    def _query(self) -> dict:
        if self._config is None:
            return self._error("not_configured", "send configure before query")
        if self._last_decision is None:
            lr = self._scheduler.current_lr if self._scheduler is not None else None
            return _decision_payload(None, None, lr)
        return self._last_decision

    def _reset(self) -> dict:
        if self._config is None:
            return self._error("not_configured", "send configure before reset")
        self._monitor = AswsMonitor(self._config)
        if self._scheduler is not None:
            self._scheduler = AswsLrScheduler(
                self._config,
                initial_lr=self._scheduler.state.initial_lr,
                forced_epochs=self._scheduler.state.forced_epochs,
            )
        self._last_epoch = None
        self._last_decision = None
        return {"type": "ack", "reason": None}


def serve(
    infile: TextIO, outfile: TextIO, default_config: Optional[AswsConfig] = None
) -> int:
    """Serve one session over a line stream pair; returns the exit code.

    Terminates cleanly on a shutdown message or on transport closure.
    """
    session = SidecarSession(default_config)
    try:
        for line in infile:
            if not line.strip():
                continue
            reply = session.handle_line(line)
            outfile.write(json.dumps(reply) + "\n")
            outfile.flush()
            if session.done:
                break
    except (BrokenPipeError, OSError):
        return 1
    return 0


def serve_unix_socket(path: str, default_config: Optional[AswsConfig] = None) -> int:
    """Accept one connection on a unix socket and serve it with the same framing."""
    if os.path.exists(path):
        os.unlink(path)
    listener = socket.socket(socket.AF_UNIX, socket.SOCK_STREAM)
    try:
        listener.bind(path)
        listener.listen(1)
        conn, _ = listener.accept()
        with conn:
            infile = conn.makefile("r", encoding="utf-8")
            outfile = conn.makefile("w", encoding="utf-8")
            return serve(infile, outfile, default_config)
    except OSError:
        return 1
    finally:
        listener.close()
        if os.path.exists(path):
            os.unlink(path)
