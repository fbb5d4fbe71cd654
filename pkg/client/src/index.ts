export { createLineParser } from './lineParser.js';
export { MonitorHandle, openMonitor } from './monitor.js';
export type { MonitorOptions } from './monitor.js';
export { createEpochEndCallback } from './callback.js';
export type { EpochEndCallback, EpochLogs } from './callback.js';
export { SidecarError } from './protocol.js';
export type { Ack, Decision, MonitorConfig, ProtocolErrorReply, Reply } from './protocol.js';
