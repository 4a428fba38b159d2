// WebSocket client for the bus bridge. Text frames are control messages
// ({"op":"sub"|"unsub","topic":...}); binary frames are wire envelopes in
// both directions. Reconnects with backoff and resubscribes, so a server
// restart only costs the operator an offline banner.

import { Envelope, FrameError, decodeFrame, encodeFrame } from "./wire";

export interface SocketLike {
  binaryType: string;
  readyState: number;
  onopen: ((ev?: unknown) => void) | null;
  onclose: ((ev?: unknown) => void) | null;
  onerror: ((ev?: unknown) => void) | null;
  onmessage: ((ev: { data: unknown }) => void) | null;
  send(data: string | Uint8Array): void;
  close(): void;
}

export interface ClientOptions {
  socketFactory?: (url: string) => SocketLike;
  onStatus?: (connected: boolean) => void;
  onEnvelope?: (env: Envelope) => void;
  reconnectMs?: number;
}

const OPEN = 1;

export class BridgeClient {
  droppedFrames = 0;
  private readonly url: string;
  private readonly factory: (url: string) => SocketLike;
  private readonly onStatus: (connected: boolean) => void;
  private readonly onEnvelope: (env: Envelope) => void;
  private readonly baseDelay: number;
  private delay: number;
  private topics = new Set<string>();
  private socket: SocketLike | null = null;
  private timer: ReturnType<typeof setTimeout> | null = null;
  private stopped = false;

  constructor(url: string, opts: ClientOptions = {}) {
    this.url = url;
    this.factory = opts.socketFactory ?? ((u) => new WebSocket(u) as unknown as SocketLike);
    this.onStatus = opts.onStatus ?? (() => {});
    this.onEnvelope = opts.onEnvelope ?? (() => {});
    this.baseDelay = opts.reconnectMs ?? 500;
    this.delay = this.baseDelay;
  }

  get connected(): boolean {
    return this.socket !== null && this.socket.readyState === OPEN;
  }

  connect(): void {
    if (this.stopped) return;
    const sock = this.factory(this.url);
    sock.binaryType = "arraybuffer";
    this.socket = sock;
    sock.onopen = () => {
      this.delay = this.baseDelay;
      this.onStatus(true);
      for (const topic of this.topics) {
        sock.send(JSON.stringify({ op: "sub", topic }));
      }
    };
    sock.onmessage = (ev) => this.handleMessage(ev.data);
    sock.onerror = () => {};
    sock.onclose = () => {
      if (this.socket !== sock) return;
      this.socket = null;
      this.onStatus(false);
      this.scheduleReconnect();
    };
  }

  close(): void {
    this.stopped = true;
    if (this.timer !== null) clearTimeout(this.timer);
    this.socket?.close();
    this.socket = null;
  }

  subscribe(topic: string): void {
    if (this.topics.has(topic)) return;
    this.topics.add(topic);
    if (this.connected) this.socket!.send(JSON.stringify({ op: "sub", topic }));
  }

  unsubscribe(topic: string): void {
    if (!this.topics.delete(topic)) return;
    if (this.connected) this.socket!.send(JSON.stringify({ op: "unsub", topic }));
  }

  /** Publish one envelope; silently dropped while offline. */
  sendFrame(env: Envelope): boolean {
    if (!this.connected) return false;
    this.socket!.send(encodeFrame(env));
    return true;
  }

  private scheduleReconnect(): void {
    if (this.stopped) return;
    this.timer = setTimeout(() => this.connect(), this.delay);
    this.delay = Math.min(this.delay * 2, 5000);
  }

  private handleMessage(data: unknown): void {
    if (typeof data === "string") return; // the server sends no text frames
    let buf: Uint8Array;
    if (data instanceof ArrayBuffer) buf = new Uint8Array(data);
    else if (data instanceof Uint8Array) buf = data;
    else {
      this.droppedFrames++;
      return;
    }
    // a message normally carries exactly one frame, but the format is
    // self-delimiting so concatenations decode too
    while (buf.length > 0) {
      try {
        const { env, rest } = decodeFrame(buf);
        this.onEnvelope(env);
        buf = rest;
      } catch (e) {
        if (e instanceof FrameError) {
          this.droppedFrames++;
          return;
        }
        throw e;
      }
    }
  }
}
