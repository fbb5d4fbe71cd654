/**
 * Spawns the stopping/LR sidecar and exposes it as a per-epoch monitor.
 *
 * One handle owns one sidecar process and one protocol session. Requests
 * are strictly sequential: issuing a second request while one is in
 * flight is a usage error and rejects immediately. Closing the handle
 * always terminates the child process.
 */
import { spawn } from 'node:child_process';
import type { ChildProcess } from 'node:child_process';

import { createLineParser } from './lineParser.js';
import { Ack, Decision, MonitorConfig, Reply, SidecarError } from './protocol.js';

/** Options controlling how the sidecar process is launched. */
export interface MonitorOptions {
  /** Sidecar command line; defaults to ["python3", "-m", "asws", "serve"]. */
  command?: readonly string[];
  /** Grace period in ms before a closing handle SIGKILLs the child. */
  shutdownTimeoutMs?: number;
}

const DEFAULT_COMMAND = ['python3', '-m', 'asws', 'serve'] as const;

interface Pending {
  resolve: (reply: Reply) => void;
  reject: (err: Error) => void;
}

export class MonitorHandle {
  private readonly child: ChildProcess;
  private readonly shutdownTimeoutMs: number;
  private pending: Pending | null = null;
  private exitCode: number | null = null;
  private exited: Promise<number | null>;
  private lastEpoch: number | null = null;
  private closed = false;

  /** Configuration echoed back by the sidecar's ack. */
  config: Record<string, unknown> = {};
  /** Most recent decision received over the wire. */
  lastDecision: Decision | null = null;

  private constructor(child: ChildProcess, shutdownTimeoutMs: number) {
    this.child = child;
    this.shutdownTimeoutMs = shutdownTimeoutMs;
    const parse = createLineParser((line) => this.onLine(line));
    child.stdout?.on('data', parse);
    this.exited = new Promise((resolve) => {
      child.on('exit', (code) => {
        this.exitCode = code;
        this.pending?.reject(new Error('sidecar exited while a request was in flight'));
        this.pending = null;
        resolve(code);
      });
    });
  }

  get pid(): number | undefined {
    return this.child.pid;
  }

  /** True once the child process has exited. */
  get terminated(): boolean {
    return this.exitCode !== null || this.child.exitCode !== null;
  }

  private onLine(line: string): void {
    const pending = this.pending;
    if (!pending) {
      return; // unsolicited output; the sidecar never initiates messages
    }
    this.pending = null;
    try {
      pending.resolve(JSON.parse(line) as Reply);
    } catch {
      pending.reject(new Error(`sidecar wrote an unparsable line: ${line}`));
    }
  }

  private request(message: Record<string, unknown>): Promise<Reply> {
    if (this.closed || this.terminated) {
      return Promise.reject(new Error('monitor handle is closed'));
    }
    if (this.pending) {
      return Promise.reject(
        new Error('one request at a time: a previous call is still in flight')
      );
    }
    return new Promise<Reply>((resolve, reject) => {
      this.pending = { resolve, reject };
      this.child.stdin?.write(JSON.stringify(message) + '\n', (err) => {
        if (err && this.pending) {
          this.pending = null;
          reject(err);
        }
      });
    });
  }

  private static async spawnAndConfigure(
    config: MonitorConfig,
    options: MonitorOptions
  ): Promise<MonitorHandle> {
    const command = options.command ?? DEFAULT_COMMAND;
    const child = spawn(command[0], command.slice(1), {
      stdio: ['pipe', 'pipe', 'inherit'],
    });
    const handle = new MonitorHandle(child, options.shutdownTimeoutMs ?? 5000);

    await new Promise<void>((resolve, reject) => {
      child.once('spawn', () => resolve());
      child.once('error', (err) => reject(new Error(`failed to launch sidecar: ${err.message}`)));
    });

    let reply: Reply;
    try {
      reply = await handle.request({ type: 'configure', ...config });
    } catch (err) {
      await handle.close();
      throw err;
    }
    if (reply.type === 'error') {
      await handle.close();
      throw new SidecarError(reply.reason, reply.detail);
    }
    handle.config = (reply as Ack).config ?? {};
    return handle;
  }

  /**
   * Report one epoch's test accuracy; resolves with the sidecar's decision.
   * Epochs must be strictly increasing over the life of the session.
   */
  async report(epoch: number, testAcc: number): Promise<Decision> {
    if (!Number.isInteger(epoch)) {
      throw new Error('epoch must be an integer');
    }
    if (this.lastEpoch !== null && epoch <= this.lastEpoch) {
      throw new Error(
        `epochs must be strictly increasing: got ${epoch} after ${this.lastEpoch}`
      );
    }
    const reply = await this.request({ type: 'report', epoch, test_acc: testAcc });
    if (reply.type === 'error') {
      throw new SidecarError(reply.reason, reply.detail);
    }
    this.lastEpoch = epoch;
    this.lastDecision = reply as Decision;
    return this.lastDecision;
  }

  /** Re-fetch the latest decision without reporting new data. */
  async query(): Promise<Decision> {
    const reply = await this.request({ type: 'query' });
    if (reply.type === 'error') {
      throw new SidecarError(reply.reason, reply.detail);
    }
    return reply as Decision;
  }

  /** Clear the recorded series and scheduler state, keeping the config. */
  async reset(): Promise<void> {
    const reply = await this.request({ type: 'reset' });
    if (reply.type === 'error') {
      throw new SidecarError(reply.reason, reply.detail);
    }
    this.lastEpoch = null;
    this.lastDecision = null;
  }

  /**
   * Shut the sidecar down and wait for it to exit. Escalates to SIGKILL
   * after the grace period so no orphan is ever left behind.
   */
  async close(): Promise<number | null> {
    if (this.closed) {
      return this.exited;
    }
    this.closed = true;
    if (!this.terminated) {
      try {
        this.pending = null;
        this.child.stdin?.write(JSON.stringify({ type: 'shutdown' }) + '\n');
        this.child.stdin?.end();
      } catch {
        // stdin already gone; fall through to the kill path
      }
      const killTimer = setTimeout(() => {
        if (!this.terminated) {
          this.child.kill('SIGKILL');
        }
      }, this.shutdownTimeoutMs);
      await this.exited;
      clearTimeout(killTimer);
    }
    return this.exitCode;
  }

  static open(config: MonitorConfig = {}, options: MonitorOptions = {}): Promise<MonitorHandle> {
    return MonitorHandle.spawnAndConfigure(config, options);
  }
}

/** Spawn and configure a sidecar; resolves once the config is acknowledged. */
export function openMonitor(
  config: MonitorConfig = {},
  options: MonitorOptions = {}
): Promise<MonitorHandle> {
  return MonitorHandle.open(config, options);
}
