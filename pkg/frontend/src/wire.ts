// Binary wire format shared with the desk server. Everything is
// little-endian. Frame layout:
//
//   magic "IMTW" | version u8 = 1 | topic_len u16 | topic utf-8
//   | schema_id u8 | timestamp_ns u64 | payload_len u32 | payload
//
// Fixed overhead is 20 bytes. Schema payloads are decoded by the
// per-schema functions below; the byte layouts must stay bit-identical
// to the server codecs (the golden-frame tests hold both sides to the
// same fixture files).

export class FrameError extends Error {}

export const MAGIC = "IMTW";
export const VERSION = 1;

export const SCHEMA_POSE = 1;
export const SCHEMA_JOINT_STATE = 2;
export const SCHEMA_POINT_CLOUD = 3;
export const SCHEMA_EVENT = 4;
export const SCHEMA_DEPTH_FRAME = 5;
export const SCHEMA_COLOR_FRAME = 6;
export const SCHEMA_GRIPPER_CMD = 7;
export const SCHEMA_TWIN_STATE = 8;

export const GRIPPER_RELEASE = 0;
export const GRIPPER_GRAB = 1;
export const GRIPPER_OPEN = 2;
export const GRIPPER_CLOSE = 3;

export const TWIN_STATE_NAMES = ["IDLE", "TRACKING", "HOLDING", "FAULT"] as const;

export interface Envelope {
  topic: string;
  schemaId: number;
  timestampNs: number; // safe below 2^53 ns of sim time (~104 days)
  payload: Uint8Array;
}

export interface PoseMsg {
  position: [number, number, number];
  orientation: [number, number, number, number]; // w, x, y, z
}

export interface JointStateMsg {
  positions: Float64Array;
  velocities: Float64Array;
}

export interface CloudMsg {
  count: number;
  xyz: Float32Array; // 3 * count
  rgb: Uint8Array; // 3 * count
}

export interface ImageMsg<T> {
  width: number;
  height: number;
  data: T;
}

export interface GripperCmdMsg {
  kind: number;
  opening: number;
}

export interface TwinStateMsg {
  state: number;
  stateName: string;
  joints: JointStateMsg;
  pose: PoseMsg;
}

const utf8enc = new TextEncoder();
const utf8dec = new TextDecoder("utf-8", { fatal: true });

function view(b: Uint8Array): DataView {
  return new DataView(b.buffer, b.byteOffset, b.byteLength);
}

// ---------------------------------------------------------------- frames

export function encodeFrame(env: Envelope): Uint8Array {
  const topic = utf8enc.encode(env.topic);
  if (topic.length === 0) throw new FrameError("empty topic");
  if (topic.length > 255) throw new FrameError(`topic too long (${topic.length} bytes)`);
  if (env.schemaId < 1 || env.schemaId > 8) {
    throw new FrameError(`unknown schema_id ${env.schemaId}`);
  }
  if (!(env.timestampNs >= 0)) {
    throw new FrameError(`timestamp out of range: ${env.timestampNs}`);
  }
  const out = new Uint8Array(20 + topic.length + env.payload.length);
  const dv = view(out);
  out[0] = 0x49; // I
  out[1] = 0x4d; // M
  out[2] = 0x54; // T
  out[3] = 0x57; // W
  out[4] = VERSION;
  dv.setUint16(5, topic.length, true);
  out.set(topic, 7);
  let off = 7 + topic.length;
  out[off] = env.schemaId;
  dv.setBigUint64(off + 1, BigInt(Math.trunc(env.timestampNs)), true);
  dv.setUint32(off + 9, env.payload.length, true);
  out.set(env.payload, off + 13);
  return out;
}

/** Parse exactly one frame from the front of the buffer. */
export function decodeFrame(b: Uint8Array): { env: Envelope; rest: Uint8Array } {
  if (b.length < 7) throw new FrameError(`truncated frame: ${b.length} bytes`);
  const dv = view(b);
  if (b[0] !== 0x49 || b[1] !== 0x4d || b[2] !== 0x54 || b[3] !== 0x57) {
    throw new FrameError("bad magic");
  }
  if (b[4] !== VERSION) throw new FrameError(`unsupported frame version ${b[4]}`);
  const topicLen = dv.getUint16(5, true);
  if (b.length < 7 + topicLen + 13) {
    throw new FrameError("truncated frame: header overruns buffer");
  }
  let topic: string;
  try {
    topic = utf8dec.decode(b.subarray(7, 7 + topicLen));
  } catch {
    throw new FrameError("topic is not valid UTF-8");
  }
  let off = 7 + topicLen;
  const schemaId = b[off];
  if (schemaId < 1 || schemaId > 8) throw new FrameError(`unknown schema_id ${schemaId}`);
  const timestampNs = Number(dv.getBigUint64(off + 1, true));
  const payloadLen = dv.getUint32(off + 9, true);
  off += 13;
  if (b.length < off + payloadLen) {
    throw new FrameError(
      `truncated frame: declared payload ${payloadLen} bytes, ${b.length - off} available`,
    );
  }
  const payload = b.slice(off, off + payloadLen);
  return {
    env: { topic, schemaId, timestampNs, payload },
    rest: b.subarray(off + payloadLen),
  };
}

// ---------------------------------------------------------------- schema 1

export function encodePose(p: PoseMsg): Uint8Array {
  const out = new Uint8Array(56);
  const dv = view(out);
  const v = [...p.position, ...p.orientation];
  for (let i = 0; i < 7; i++) dv.setFloat64(8 * i, v[i], true);
  return out;
}

export function decodePose(b: Uint8Array): PoseMsg {
  if (b.length !== 56) throw new FrameError(`pose payload must be 56 bytes, got ${b.length}`);
  const dv = view(b);
  const v: number[] = [];
  for (let i = 0; i < 7; i++) v.push(dv.getFloat64(8 * i, true));
  return {
    position: [v[0], v[1], v[2]],
    orientation: [v[3], v[4], v[5], v[6]],
  };
}

// ---------------------------------------------------------------- schema 2

function decodeJointStatePrefix(b: Uint8Array): { js: JointStateMsg; rest: Uint8Array } {
  if (b.length < 1) throw new FrameError("empty joint state payload");
  const n = b[0];
  const need = 1 + 16 * n;
  if (b.length < need) {
    throw new FrameError(`joint state truncated: need ${need} bytes, got ${b.length}`);
  }
  const dv = view(b);
  const positions = new Float64Array(n);
  const velocities = new Float64Array(n);
  for (let i = 0; i < n; i++) {
    positions[i] = dv.getFloat64(1 + 8 * i, true);
    velocities[i] = dv.getFloat64(1 + 8 * n + 8 * i, true);
  }
  return { js: { positions, velocities }, rest: b.subarray(need) };
}

export function decodeJointState(b: Uint8Array): JointStateMsg {
  const { js, rest } = decodeJointStatePrefix(b);
  if (rest.length) throw new FrameError(`${rest.length} trailing bytes after joint state`);
  return js;
}

// ---------------------------------------------------------------- schema 3

const POINT_BYTES = 16; // 3 f32 xyz | 3 u8 rgb | 1 pad

export function decodeCloud(b: Uint8Array): CloudMsg {
  if (b.length < 4) throw new FrameError("point cloud payload shorter than its count field");
  const count = view(b).getUint32(0, true);
  const need = 4 + count * POINT_BYTES;
  if (b.length < need) {
    const have = Math.floor((b.length - 4) / POINT_BYTES);
    throw new FrameError(`point cloud declares ${count} points but carries ${have}`);
  }
  if (b.length > need) {
    throw new FrameError(`${b.length - need} trailing bytes after point cloud`);
  }
  // records copied to an aligned buffer, then the floats read with a
  // stride-4 view; little-endian hosts assumed like everywhere else
  const body = b.slice(4);
  const f = new Float32Array(body.buffer, 0, count * 4);
  const xyz = new Float32Array(count * 3);
  const rgb = new Uint8Array(count * 3);
  for (let k = 0; k < count; k++) {
    xyz[3 * k] = f[4 * k];
    xyz[3 * k + 1] = f[4 * k + 1];
    xyz[3 * k + 2] = f[4 * k + 2];
    rgb[3 * k] = body[16 * k + 12];
    rgb[3 * k + 1] = body[16 * k + 13];
    rgb[3 * k + 2] = body[16 * k + 14];
  }
  return { count, xyz, rgb };
}

// ---------------------------------------------------------------- schema 4

export function decodeEvent(b: Uint8Array): Record<string, any> {
  let obj: any;
  try {
    obj = JSON.parse(utf8dec.decode(b));
  } catch (e) {
    throw new FrameError(`event payload is not JSON: ${e}`);
  }
  if (obj === null || typeof obj !== "object" || Array.isArray(obj)) {
    throw new FrameError("event payload must be a JSON object");
  }
  return obj;
}

// ---------------------------------------------------------------- schemas 5/6

export function decodeDepth(b: Uint8Array): ImageMsg<Uint16Array> {
  if (b.length < 4) throw new FrameError("depth payload shorter than its header");
  const dv = view(b);
  const width = dv.getUint16(0, true);
  const height = dv.getUint16(2, true);
  if (b.length !== 4 + 2 * width * height) {
    throw new FrameError(`depth payload size mismatch for ${width}x${height}`);
  }
  const body = b.slice(4);
  return { width, height, data: new Uint16Array(body.buffer, 0, width * height) };
}

export function decodeColor(b: Uint8Array): ImageMsg<Uint8Array> {
  if (b.length < 4) throw new FrameError("color payload shorter than its header");
  const dv = view(b);
  const width = dv.getUint16(0, true);
  const height = dv.getUint16(2, true);
  if (b.length !== 4 + 3 * width * height) {
    throw new FrameError(`color payload size mismatch for ${width}x${height}`);
  }
  return { width, height, data: b.slice(4) };
}

// ---------------------------------------------------------------- schema 7

export function encodeGripperCmd(kind: number, opening = 0): Uint8Array {
  if (kind < 0 || kind > 3) throw new FrameError(`unknown gripper command kind ${kind}`);
  const out = new Uint8Array(5);
  out[0] = kind;
  view(out).setFloat32(1, opening, true);
  return out;
}

export function decodeGripperCmd(b: Uint8Array): GripperCmdMsg {
  if (b.length !== 5) throw new FrameError("gripper command payload must be 5 bytes");
  const kind = b[0];
  if (kind > 3) throw new FrameError(`unknown gripper command kind ${kind}`);
  return { kind, opening: view(b).getFloat32(1, true) };
}

// ---------------------------------------------------------------- schema 8

export function decodeTwinState(b: Uint8Array): TwinStateMsg {
  if (b.length < 1) throw new FrameError("empty twin state payload");
  const state = b[0];
  if (state >= TWIN_STATE_NAMES.length) {
    throw new FrameError(`twin state enum out of range: ${state}`);
  }
  const { js, rest } = decodeJointStatePrefix(b.subarray(1));
  return { state, stateName: TWIN_STATE_NAMES[state], joints: js, pose: decodePose(rest) };
}
