/**
 * Minimal epoch-end callback adapter for training loops.
 *
 * Duck-typed after the common `onEpochEnd(epoch, logs)` hook shape; no
 * framework dependency. The accuracy is read from `test_acc`, `val_acc`,
 * or `acc` when logs are an object, or taken directly when a number.
 */
import type { MonitorHandle } from './monitor.js';
import type { Decision } from './protocol.js';

export interface EpochLogs {
  test_acc?: number;
  val_acc?: number;
  acc?: number;
  [metric: string]: number | undefined;
}

export interface EpochEndCallback {
  onEpochEnd(epoch: number, logs: number | EpochLogs): Promise<Decision>;
  /** Latest decision, for loops that poll instead of awaiting. */
  readonly lastDecision: Decision | null;
}

function pickAccuracy(logs: number | EpochLogs): number {
  if (typeof logs === 'number') {
    return logs;
  }
  const value = logs.test_acc ?? logs.val_acc ?? logs.acc;
  if (value === undefined) {
    throw new Error('epoch logs carry no test_acc / val_acc / acc metric');
  }
  return value;
}

/** Wrap a monitor handle as an epoch-end hook. */
export function createEpochEndCallback(handle: MonitorHandle): EpochEndCallback {
  return {
    async onEpochEnd(epoch: number, logs: number | EpochLogs): Promise<Decision> {
      return handle.report(epoch, pickAccuracy(logs));
    },
    get lastDecision(): Decision | null {
      return handle.lastDecision;
    },
  };
}
