// DOM overlay: connection status, session phase and timer, tower count,
// cloud stream rate, gripper mode, and the warning banner.

import { GripControl } from "./grip";
import { BridgeClient } from "./client";
import { ViewState } from "./store";

export function formatTimer(remaining: number): string {
  const s = Math.max(0, Math.floor(remaining));
  const m = Math.floor(s / 60);
  return `${m}:${String(s % 60).padStart(2, "0")}`;
}

export function bannerText(
  connected: boolean,
  faulted: boolean,
  warning: string | null,
): string | null {
  if (!connected) return "offline, retrying...";
  if (faulted) return "twin fault: robot halted";
  return warning;
}

export class Hud {
  private readonly el: Record<string, HTMLElement>;

  constructor(doc: Document) {
    this.el = {};
    for (const id of ["status", "phase", "towers", "cloud", "mode", "drops", "banner", "events"]) {
      const node = doc.getElementById(id);
      if (!node) throw new Error(`missing hud element #${id}`);
      this.el[id] = node;
    }
  }

  update(
    store: ViewState,
    client: BridgeClient,
    grip: GripControl,
    fps: number,
    degraded: boolean,
    nowMs: number = performance.now(),
  ): void {
    const connected = client.connected;
    this.el.status.textContent = connected ? "LIVE" : "OFFLINE";
    this.el.status.className = connected ? "ok" : "bad";

    if (store.clock) {
      this.el.phase.textContent = `${store.clock.phase} ${formatTimer(store.clock.remaining)}`;
    } else {
      this.el.phase.textContent = "--";
    }

    this.el.towers.textContent = `towers ${store.towers}`;
    const pts = store.cloud ? store.cloud.count : 0;
    this.el.cloud.textContent =
      `cloud ${store.cloudRate(nowMs)}/s, ${pts} pts, ${Math.round(fps)} fps` +
      (degraded ? " (decimated)" : "");
    this.el.mode.textContent = store.faulted ? "FAULT" : grip.mode.toUpperCase();
    this.el.mode.className = store.faulted ? "bad" : grip.mode === "grabbed" ? "ok" : "";

    const drops = client.droppedFrames + store.badFrames;
    this.el.drops.textContent = drops ? `dropped frames: ${drops}` : "";

    const banner = bannerText(connected, store.faulted, store.activeWarning(nowMs));
    this.el.banner.textContent = banner ?? "";
    this.el.banner.style.display = banner ? "block" : "none";

    this.el.events.textContent = store.recentEvents
      .slice(-4)
      .map((ev) => `${ev.t.toFixed(1)}s ${ev.type}`)
      .join("\n");
  }
}
