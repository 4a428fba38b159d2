// three.js view: fused point cloud, robot links, cubes, table, and the
// draggable virtual gripper gizmo. World frame is z-up with the arm base
// at the origin, matching the server.

import * as THREE from "three";
import { OrbitControls } from "three/addons/controls/OrbitControls.js";
import { TransformControls } from "three/addons/controls/TransformControls.js";

import { armForJointCount, linkPoints } from "./arms";
import { GripControl } from "./grip";
import { ViewState } from "./store";
import { PoseMsg } from "./wire";

// tool points straight down; translation is the only degree the gizmo moves
const DOWN_QUAT: [number, number, number, number] = [0, 0, 1, 0];

const ROBOT_COLOR = 0x6fa8ff;
const PLAN_COLOR = 0x4fe3a0;
const FAULT_COLOR = 0xff4040;
const DEGRADED_FPS = 20;
const MAX_CHAIN_POINTS = 16;

function quatToThree(q: ArrayLike<number>): THREE.Quaternion {
  // wire order is w,x,y,z; three wants x,y,z,w
  return new THREE.Quaternion(q[1], q[2], q[3], q[0]);
}

class ChainView {
  readonly group = new THREE.Group();
  private readonly line: THREE.Line;
  private readonly joints: THREE.Mesh[] = [];
  private readonly positions: THREE.BufferAttribute;
  private readonly lineMat: THREE.LineBasicMaterial;
  private readonly jointMat: THREE.MeshStandardMaterial;

  constructor(color: number, ghost: boolean) {
    this.positions = new THREE.BufferAttribute(new Float32Array(MAX_CHAIN_POINTS * 3), 3);
    this.positions.setUsage(THREE.DynamicDrawUsage);
    const geom = new THREE.BufferGeometry();
    geom.setAttribute("position", this.positions);
    geom.setDrawRange(0, 0);
    this.lineMat = new THREE.LineBasicMaterial({
      color,
      transparent: ghost,
      opacity: ghost ? 0.45 : 1.0,
    });
    this.line = new THREE.Line(geom, this.lineMat);
    this.line.frustumCulled = false;
    this.group.add(this.line);
    this.jointMat = new THREE.MeshStandardMaterial({
      color,
      transparent: ghost,
      opacity: ghost ? 0.45 : 1.0,
    });
    for (let i = 0; i < MAX_CHAIN_POINTS; i++) {
      const m = new THREE.Mesh(new THREE.SphereGeometry(ghost ? 0.008 : 0.012, 12, 8), this.jointMat);
      m.visible = false;
      this.group.add(m);
      this.joints.push(m);
    }
  }

  setColor(color: number): void {
    this.lineMat.color.setHex(color);
    this.jointMat.color.setHex(color);
  }

  update(q: ArrayLike<number>): void {
    const arm = armForJointCount(q.length);
    if (!arm) {
      this.group.visible = false;
      return;
    }
    this.group.visible = true;
    const pts = linkPoints(arm, q);
    for (let i = 0; i < pts.length; i++) {
      this.positions.setXYZ(i, pts[i][0], pts[i][1], pts[i][2]);
      this.joints[i].position.set(pts[i][0], pts[i][1], pts[i][2]);
      this.joints[i].visible = true;
    }
    for (let i = pts.length; i < MAX_CHAIN_POINTS; i++) this.joints[i].visible = false;
    this.positions.needsUpdate = true;
    (this.line.geometry as THREE.BufferGeometry).setDrawRange(0, pts.length);
  }
}

export class SceneView {
  fps = 60;
  degraded = false;
  showPlan = false;

  private readonly store: ViewState;
  private readonly grip: GripControl;
  private readonly renderer: THREE.WebGLRenderer;
  private readonly scene = new THREE.Scene();
  private readonly camera: THREE.PerspectiveCamera;
  private readonly orbit: OrbitControls;
  private readonly transform: TransformControls;

  private readonly cloudPoints: THREE.Points;
  private cloudCapacity = 0;
  private cloudPos!: THREE.BufferAttribute;
  private cloudCol!: THREE.BufferAttribute;
  private uploadedSeq = -1;
  private uploadedStride = 1;

  private readonly robot: ChainView;
  private readonly plan: ChainView;
  private readonly cubes = new Map<string, THREE.Mesh>();
  private readonly cubeMats = new Map<string, THREE.MeshStandardMaterial>();
  private readonly gizmo = new THREE.Group();
  private tableBuilt = false;
  private lastFrameMs = 0;

  constructor(canvas: HTMLCanvasElement, store: ViewState, grip: GripControl) {
    this.store = store;
    this.grip = grip;

    this.renderer = new THREE.WebGLRenderer({ canvas, antialias: true });
    this.renderer.setPixelRatio(window.devicePixelRatio);
    this.renderer.setSize(window.innerWidth, window.innerHeight);
    this.scene.background = new THREE.Color(0x10141c);

    this.camera = new THREE.PerspectiveCamera(
      55,
      window.innerWidth / window.innerHeight,
      0.01,
      50,
    );
    this.camera.up.set(0, 0, 1);
    this.camera.position.set(1.1, -0.9, 0.8);

    this.orbit = new OrbitControls(this.camera, this.renderer.domElement);
    this.orbit.target.set(0.38, 0, 0.1);
    this.orbit.enableDamping = true;
    this.orbit.update();

    this.scene.add(new THREE.AmbientLight(0xffffff, 0.7));
    const sun = new THREE.DirectionalLight(0xffffff, 1.2);
    sun.position.set(0.5, -1, 2);
    this.scene.add(sun);

    // point cloud, resized on demand
    const cloudGeom = new THREE.BufferGeometry();
    this.ensureCloudCapacity(cloudGeom, 4096);
    cloudGeom.setDrawRange(0, 0);
    this.cloudPoints = new THREE.Points(
      cloudGeom,
      new THREE.PointsMaterial({ size: 0.004, vertexColors: true }),
    );
    this.cloudPoints.frustumCulled = false;
    this.scene.add(this.cloudPoints);

    this.robot = new ChainView(ROBOT_COLOR, false);
    this.scene.add(this.robot.group);
    this.plan = new ChainView(PLAN_COLOR, true);
    this.plan.group.visible = false;
    this.scene.add(this.plan.group);

    // the virtual gripper the operator drags
    this.gizmo.add(new THREE.AxesHelper(0.07));
    const palm = new THREE.Mesh(
      new THREE.BoxGeometry(0.07, 0.025, 0.03),
      new THREE.MeshStandardMaterial({ color: 0xffc04d, transparent: true, opacity: 0.85 }),
    );
    this.gizmo.add(palm);
    this.gizmo.position.set(0.38, 0, 0.25);
    this.gizmo.quaternion.copy(quatToThree(DOWN_QUAT));
    this.scene.add(this.gizmo);

    this.transform = new TransformControls(this.camera, this.renderer.domElement);
    this.transform.setMode("translate");
    this.transform.setSize(0.7);
    this.transform.attach(this.gizmo);
    this.scene.add(this.transform.getHelper());
    this.transform.addEventListener("mouseDown", () => {
      this.orbit.enabled = false;
      this.grip.grab();
    });
    this.transform.addEventListener("objectChange", () => {
      this.grip.drag(this.gizmoPose());
    });
    this.transform.addEventListener("mouseUp", () => {
      this.orbit.enabled = true;
      this.grip.release();
    });

    window.addEventListener("resize", () => {
      this.camera.aspect = window.innerWidth / window.innerHeight;
      this.camera.updateProjectionMatrix();
      this.renderer.setSize(window.innerWidth, window.innerHeight);
    });
    window.addEventListener("keydown", (ev) => this.onKey(ev));
  }

  start(onFrame?: (nowMs: number) => void): void {
    const loop = (nowMs: number) => {
      this.frame(nowMs);
      if (onFrame) onFrame(nowMs);
      requestAnimationFrame(loop);
    };
    requestAnimationFrame(loop);
  }

  gizmoPose(): PoseMsg {
    const p = this.gizmo.position;
    return { position: [p.x, p.y, p.z], orientation: [...DOWN_QUAT] };
  }

  private onKey(ev: KeyboardEvent): void {
    switch (ev.key) {
      case "q":
      case "e": {
        // keyboard height control; streams only while grabbed
        this.gizmo.position.z += ev.key === "e" ? 0.01 : -0.01;
        this.grip.drag(this.gizmoPose());
        break;
      }
      case "g":
        if (this.grip.mode === "free") this.grip.grab();
        else this.grip.release();
        break;
      case "o":
        this.grip.open();
        break;
      case "c":
        this.grip.close();
        break;
      case "p":
        this.showPlan = !this.showPlan;
        break;
      case "r": {
        const tp = this.store.twin?.pose;
        if (tp && this.grip.mode === "free") {
          this.gizmo.position.set(tp.position[0], tp.position[1], tp.position[2]);
        }
        break;
      }
    }
  }

  // ------------------------------------------------------------- frame

  private frame(nowMs: number): void {
    if (this.lastFrameMs > 0) {
      const dt = nowMs - this.lastFrameMs;
      if (dt > 0) this.fps = 0.9 * this.fps + 0.1 * (1000 / dt);
    }
    this.lastFrameMs = nowMs;
    this.degraded = this.fps < DEGRADED_FPS;

    this.grip.flush();
    this.uploadCloudIfNew();
    this.updateRobot();
    this.updateWorld();
    this.updateGizmo();
    this.orbit.update();
    this.renderer.render(this.scene, this.camera);
  }

  private ensureCloudCapacity(geom: THREE.BufferGeometry, count: number): void {
    if (count <= this.cloudCapacity) return;
    let cap = Math.max(4096, this.cloudCapacity);
    while (cap < count) cap *= 2;
    this.cloudCapacity = cap;
    this.cloudPos = new THREE.BufferAttribute(new Float32Array(cap * 3), 3);
    this.cloudPos.setUsage(THREE.DynamicDrawUsage);
    this.cloudCol = new THREE.BufferAttribute(new Float32Array(cap * 3), 3);
    this.cloudCol.setUsage(THREE.DynamicDrawUsage);
    geom.setAttribute("position", this.cloudPos);
    geom.setAttribute("color", this.cloudCol);
  }

  private uploadCloudIfNew(): void {
    const cloud = this.store.cloud;
    if (!cloud) return;
    const stride = this.degraded ? 2 : 1;
    if (this.store.cloudSeq === this.uploadedSeq && stride === this.uploadedStride) return;
    this.uploadedSeq = this.store.cloudSeq;
    this.uploadedStride = stride;

    const geom = this.cloudPoints.geometry as THREE.BufferGeometry;
    const n = Math.ceil(cloud.count / stride);
    this.ensureCloudCapacity(geom, n);
    const pos = this.cloudPos.array as Float32Array;
    const col = this.cloudCol.array as Float32Array;
    for (let i = 0, k = 0; k < cloud.count; i++, k += stride) {
      pos[3 * i] = cloud.xyz[3 * k];
      pos[3 * i + 1] = cloud.xyz[3 * k + 1];
      pos[3 * i + 2] = cloud.xyz[3 * k + 2];
      col[3 * i] = cloud.rgb[3 * k] / 255;
      col[3 * i + 1] = cloud.rgb[3 * k + 1] / 255;
      col[3 * i + 2] = cloud.rgb[3 * k + 2] / 255;
    }
    this.cloudPos.needsUpdate = true;
    this.cloudCol.needsUpdate = true;
    geom.setDrawRange(0, n);
  }

  private updateRobot(): void {
    const twin = this.store.twin;
    if (!twin) return;
    this.robot.update(twin.joints.positions);
    this.robot.setColor(this.store.faulted ? FAULT_COLOR : ROBOT_COLOR);
    this.plan.group.visible = this.showPlan && this.store.plan !== null;
    if (this.showPlan && this.store.plan) this.plan.update(this.store.plan.positions);
  }

  private updateWorld(): void {
    const geo = this.store.geometry;
    if (!geo) return;
    if (!this.tableBuilt) this.buildTable(geo);

    const size = geo.cube_size ?? 0.04;
    const seen = new Set<string>();
    for (const c of geo.cubes ?? []) {
      seen.add(c.id);
      let mesh = this.cubes.get(c.id);
      if (!mesh) {
        const mat = new THREE.MeshStandardMaterial({
          color: 0xcccccc,
          transparent: true,
          opacity: 0.5,
        });
        mesh = new THREE.Mesh(new THREE.BoxGeometry(size, size, size), mat);
        this.cubes.set(c.id, mesh);
        this.cubeMats.set(c.id, mat);
        this.scene.add(mesh);
      }
      mesh.position.set(c.pos[0], c.pos[1], c.pos[2]);
      mesh.quaternion.copy(quatToThree(c.quat));
      this.cubeMats.get(c.id)!.emissive.setHex(c.attached ? 0x885511 : 0x000000);
    }
    for (const [id, mesh] of this.cubes) {
      mesh.visible = seen.has(id);
    }
  }

  private buildTable(geo: Record<string, any>): void {
    this.tableBuilt = true;
    const [w, h] = geo.table_size ?? [1, 1];
    const [cx, cy] = geo.table_center ?? [0.38, 0];
    const z = geo.table_height ?? 0;

    const top = new THREE.Mesh(
      new THREE.PlaneGeometry(w, h),
      new THREE.MeshStandardMaterial({ color: 0x1a2230 }),
    );
    top.position.set(cx, cy, z - 0.002);
    this.scene.add(top);

    const grid = new THREE.GridHelper(Math.max(w, h), 20, 0x334, 0x223);
    grid.rotation.x = Math.PI / 2; // GridHelper spans xz; the table is xy
    grid.position.set(cx, cy, z - 0.001);
    this.scene.add(grid);

    if (geo.target) {
      const ring = new THREE.Mesh(
        new THREE.RingGeometry(0.045, 0.06, 48),
        new THREE.MeshBasicMaterial({ color: 0x3aa0ff, side: THREE.DoubleSide }),
      );
      ring.position.set(geo.target[0], geo.target[1], z + 0.001);
      this.scene.add(ring);
    }
  }

  private updateGizmo(): void {
    // while free the gizmo shadows the twin so the next grab starts
    // where the robot actually is
    if (this.grip.mode !== "free" || this.transform.dragging) return;
    const tp = this.store.twin?.pose;
    if (!tp) return;
    this.gizmo.position.lerp(
      new THREE.Vector3(tp.position[0], tp.position[1], tp.position[2]),
      0.15,
    );
  }
}
