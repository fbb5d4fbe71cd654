/** Wire types of the sidecar's line protocol. One JSON record per line. */

/** Stopping-rule configuration accepted by the sidecar's configure message. */
export interface MonitorConfig {
  gamma?: number;
  clip?: number;
  n?: number;
  slack?: number;
  slack_prop?: number;
  alpha?: number;
  use_shapiro?: boolean;
  use_ttest?: boolean;
  /** Enable the adaptive learning-rate schedule. */
  scheduler?: {
    initial_lr?: number;
    forced_epochs?: number;
  };
}

/** Per-epoch verdict returned for every report. */
export interface Decision {
  type: 'decision';
  epoch: number | null;
  stop: boolean;
  /** Learning rate to use next; null when scheduling is disabled. */
  lr: number | null;
  votes: number;
  shapiro_p: number | null;
  ttest_p: number | null;
  reason: 'insufficient_data' | null;
}

export interface Ack {
  type: 'ack';
  reason: null;
  config?: Record<string, unknown>;
  scheduler?: Record<string, unknown>;
}

export interface ProtocolErrorReply {
  type: 'error';
  reason: 'not_configured' | 'epoch_order' | 'parse';
  detail: string;
}

export type Reply = Decision | Ack | ProtocolErrorReply;

/** Raised when the sidecar answers a request with an error record. */
export class SidecarError extends Error {
  readonly reason: string;

  constructor(reason: string, detail: string) {
    super(`sidecar error (${reason}): ${detail}`);
    this.name = 'SidecarError';
    this.reason = reason;
  }
}
