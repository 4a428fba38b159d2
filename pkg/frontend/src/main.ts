import { BridgeClient } from "./client";
import { GripControl } from "./grip";
import { Hud } from "./hud";
import { SceneView } from "./scene3d";
import { ViewState } from "./store";

const TOPICS = [
  "/cloud/fused",
  "/twin/state",
  "/plan/joint_states",
  "/world/geometry",
  "/world/events",
  "/session/clock",
];

// served by the bridge itself under /ui, so the socket normally lives on
// the same host:port; ?server=ws://... overrides for the dev server
const params = new URLSearchParams(location.search);
const url = params.get("server") ?? `ws://${location.host}/`;

const store = new ViewState();
const client = new BridgeClient(url, {
  onEnvelope: (env) => store.handleEnvelope(env),
});
const grip = new GripControl((env) => client.sendFrame(env), {
  clockNs: () => store.lastServerNs,
});

for (const topic of TOPICS) client.subscribe(topic);
client.connect();

const canvas = document.getElementById("view") as HTMLCanvasElement;
const view = new SceneView(canvas, store, grip);
const hud = new Hud(document);

let lastHudMs = 0;
view.start((nowMs) => {
  if (nowMs - lastHudMs < 150) return;
  lastHudMs = nowMs;
  hud.update(store, client, grip, view.fps, view.degraded, nowMs);
});
