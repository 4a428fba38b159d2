// Joint chain walk for drawing the robot from a joint-state message.
// The arm description files are the same ones the server loads; only the
// joint count arrives over the wire, so the table is keyed by it.

import arm6 from "../../src/twindesk/kinematics/arms/arm6.json";
import arm7 from "../../src/twindesk/kinematics/arms/arm7.json";

export interface ArmTransform {
  xyz: number[];
  quat: number[]; // w, x, y, z
}

export interface ArmJoint {
  axis: number[];
  origin: ArmTransform;
  limits: number[];
  vel_limit: number;
}

export interface ArmDescription {
  name: string;
  joints: ArmJoint[];
  tool_offset: ArmTransform;
}

const ARMS: ArmDescription[] = [arm6, arm7];

export function armForJointCount(n: number): ArmDescription | null {
  return ARMS.find((a) => a.joints.length === n) ?? null;
}

type Mat3 = number[]; // row-major, 9 entries

const IDENTITY: Mat3 = [1, 0, 0, 0, 1, 0, 0, 0, 1];

function matMul(a: Mat3, b: Mat3): Mat3 {
  const out = new Array(9);
  for (let r = 0; r < 3; r++) {
    for (let c = 0; c < 3; c++) {
      out[3 * r + c] =
        a[3 * r] * b[c] + a[3 * r + 1] * b[3 + c] + a[3 * r + 2] * b[6 + c];
    }
  }
  return out;
}

function matVec(m: Mat3, v: number[]): number[] {
  return [
    m[0] * v[0] + m[1] * v[1] + m[2] * v[2],
    m[3] * v[0] + m[4] * v[1] + m[5] * v[2],
    m[6] * v[0] + m[7] * v[1] + m[8] * v[2],
  ];
}

function quatToMat(q: number[]): Mat3 {
  const [w, x, y, z] = q;
  return [
    1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y),
    2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x),
    2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y),
  ];
}

function axisAngleToMat(axis: number[], angle: number): Mat3 {
  const [x, y, z] = axis;
  const c = Math.cos(angle);
  const s = Math.sin(angle);
  const t = 1 - c;
  return [
    t * x * x + c, t * x * y - s * z, t * x * z + s * y,
    t * x * y + s * z, t * y * y + c, t * y * z - s * x,
    t * x * z - s * y, t * y * z + s * x, t * z * z + c,
  ];
}

/**
 * World-frame polyline through the arm: base, each joint pivot, tool tip.
 * Each joint applies its fixed origin transform, then rotates about its
 * axis by the commanded angle.
 */
export function linkPoints(arm: ArmDescription, q: ArrayLike<number>): number[][] {
  let p = [0, 0, 0];
  let r = IDENTITY;
  const points: number[][] = [[0, 0, 0]];
  for (let i = 0; i < arm.joints.length; i++) {
    const j = arm.joints[i];
    const step = matVec(r, j.origin.xyz);
    p = [p[0] + step[0], p[1] + step[1], p[2] + step[2]];
    r = matMul(r, quatToMat(j.origin.quat));
    points.push([p[0], p[1], p[2]]);
    r = matMul(r, axisAngleToMat(j.axis, Number(q[i]) || 0));
  }
  const tip = matVec(r, arm.tool_offset.xyz);
  points.push([p[0] + tip[0], p[1] + tip[1], p[2] + tip[2]]);
  return points;
}
