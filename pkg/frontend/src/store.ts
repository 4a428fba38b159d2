// Latest-snapshot view state. Every topic keeps only its newest sample;
// the render loop reads whatever is current when the frame draws, so a
// slow tab never builds a backlog of stale frames.

import {
  CloudMsg,
  Envelope,
  FrameError,
  JointStateMsg,
  TwinStateMsg,
  decodeCloud,
  decodeEvent,
  decodeJointState,
  decodeTwinState,
} from "./wire";

export interface ClockSample {
  t: number;
  phase: string;
  remaining: number;
}

export interface WorldEvent {
  t: number;
  type: string;
  detail: Record<string, any>;
}

export interface Warning {
  text: string;
  untilMs: number;
}

const WARNING_MS = 3000;
const EVENT_LOG_CAP = 8;

export class ViewState {
  cloud: CloudMsg | null = null;
  cloudSeq = 0; // bumps per accepted cloud; the renderer uploads on change
  twin: TwinStateMsg | null = null;
  plan: JointStateMsg | null = null;
  geometry: Record<string, any> | null = null;
  clock: ClockSample | null = null;
  towers = 0;
  recentEvents: WorldEvent[] = [];
  warning: Warning | null = null;
  badFrames = 0;
  lastServerNs = 0;
  private cloudTimes: number[] = [];

  handleEnvelope(env: Envelope, nowMs: number = performance.now()): void {
    try {
      this.dispatch(env, nowMs);
    } catch (e) {
      if (e instanceof FrameError) {
        this.badFrames++;
        return;
      }
      throw e;
    }
    if (env.timestampNs > this.lastServerNs) this.lastServerNs = env.timestampNs;
  }

  private dispatch(env: Envelope, nowMs: number): void {
    switch (env.topic) {
      case "/cloud/fused":
        this.cloud = decodeCloud(env.payload);
        this.cloudSeq++;
        this.cloudTimes.push(nowMs);
        while (this.cloudTimes.length && this.cloudTimes[0] <= nowMs - 2000) {
          this.cloudTimes.shift();
        }
        break;
      case "/twin/state":
        this.twin = decodeTwinState(env.payload);
        break;
      case "/plan/joint_states":
        this.plan = decodeJointState(env.payload);
        break;
      case "/world/geometry": {
        const snap = decodeEvent(env.payload);
        this.geometry = snap;
        if (typeof snap.towers === "number") this.towers = snap.towers;
        break;
      }
      case "/session/clock": {
        const s = decodeEvent(env.payload);
        this.clock = { t: s.t, phase: s.phase, remaining: s.remaining };
        break;
      }
      case "/world/events":
        this.handleEvent(decodeEvent(env.payload) as WorldEvent, nowMs);
        break;
      default:
        break; // unsubscribed topic, nothing to show
    }
  }

  private handleEvent(ev: WorldEvent, nowMs: number): void {
    this.recentEvents.push(ev);
    if (this.recentEvents.length > EVENT_LOG_CAP) this.recentEvents.shift();
    switch (ev.type) {
      case "tower_complete":
        this.towers++;
        break;
      case "goal_rejected":
        this.warning = {
          text: `goal rejected: ${ev.detail?.reason ?? "unknown"}`,
          untilMs: nowMs + WARNING_MS,
        };
        break;
      case "fault":
        this.warning = {
          text: `fault: ${ev.detail?.kind ?? ev.detail?.warning ?? "unknown"}`,
          untilMs: nowMs + WARNING_MS,
        };
        break;
      default:
        break;
    }
  }

  get faulted(): boolean {
    return this.twin?.stateName === "FAULT";
  }

  activeWarning(nowMs: number = performance.now()): string | null {
    if (this.warning && nowMs < this.warning.untilMs) return this.warning.text;
    return null;
  }

  /** Cloud updates per second over the trailing window. */
  cloudRate(nowMs: number = performance.now()): number {
    return this.cloudTimes.filter((t) => t > nowMs - 1000).length;
  }
}
