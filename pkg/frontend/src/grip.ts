// Virtual gripper control. Grabbing the gizmo engages tracking on the
// server; dragging streams pose goals; releasing freezes the robot where
// it is. Goals are coalesced (only the newest pending pose is sent) and
// hard-capped at 30 Hz over any sliding one-second window.

import {
  Envelope,
  GRIPPER_CLOSE,
  GRIPPER_GRAB,
  GRIPPER_OPEN,
  GRIPPER_RELEASE,
  PoseMsg,
  SCHEMA_GRIPPER_CMD,
  SCHEMA_POSE,
  encodeGripperCmd,
  encodePose,
} from "./wire";

export const GOAL_TOPIC = "/gripper/goal";
export const CMD_TOPIC = "/gripper/cmd";
export const MAX_GOAL_HZ = 30;

export type GripMode = "free" | "grabbed";

export interface GripOptions {
  nowMs?: () => number;
  clockNs?: () => number; // timestamp stamped onto outgoing frames
}

export class GripControl {
  mode: GripMode = "free";
  goalsSent = 0;
  private pending: PoseMsg | null = null;
  private sendTimes: number[] = [];
  private readonly send: (env: Envelope) => void;
  private readonly nowMs: () => number;
  private readonly clockNs: () => number;

  constructor(send: (env: Envelope) => void, opts: GripOptions = {}) {
    this.send = send;
    this.nowMs = opts.nowMs ?? (() => performance.now());
    this.clockNs = opts.clockNs ?? (() => 0);
  }

  grab(): void {
    if (this.mode === "grabbed") return;
    this.mode = "grabbed";
    this.sendCmd(GRIPPER_GRAB);
  }

  release(): void {
    if (this.mode === "free") return;
    this.mode = "free";
    this.pending = null; // nothing may trail out after release
    this.sendCmd(GRIPPER_RELEASE);
  }

  /** Queue a goal pose; ignored unless grabbed. Sends now if the cap allows. */
  drag(pose: PoseMsg): void {
    if (this.mode !== "grabbed") return;
    this.pending = pose;
    this.flush();
  }

  open(): void {
    // opening 0 means "server default"
    this.sendCmd(GRIPPER_OPEN);
  }

  close(): void {
    this.sendCmd(GRIPPER_CLOSE);
  }

  /** Drain the pending goal if the rate window has room. Call every frame. */
  flush(): void {
    if (this.mode !== "grabbed" || this.pending === null) return;
    const now = this.nowMs();
    // sends exactly one second old still count, so a closed 1 s window
    // can never catch 31 goals
    while (this.sendTimes.length && this.sendTimes[0] < now - 1000) {
      this.sendTimes.shift();
    }
    if (this.sendTimes.length >= MAX_GOAL_HZ) return;
    this.sendTimes.push(now);
    this.send({
      topic: GOAL_TOPIC,
      schemaId: SCHEMA_POSE,
      timestampNs: this.clockNs(),
      payload: encodePose(this.pending),
    });
    this.pending = null;
    this.goalsSent++;
  }

  private sendCmd(kind: number): void {
    this.send({
      topic: CMD_TOPIC,
      schemaId: SCHEMA_GRIPPER_CMD,
      timestampNs: this.clockNs(),
      payload: encodeGripperCmd(kind),
    });
  }
}
