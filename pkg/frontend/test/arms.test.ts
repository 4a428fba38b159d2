// The chain walk used to draw the robot. With all joints at zero the
// rotations are identity, so the tool lands on the componentwise sum of
// the translations; rotating the first (z-axis) joint spins that sum.

import { describe, expect, it } from "vitest";

import { armForJointCount, linkPoints } from "../src/arms";

describe("arm chain walk", () => {
  it("has a table entry per wire joint count", () => {
    expect(armForJointCount(6)?.name).toBe("arm6");
    expect(armForJointCount(7)?.name).toBe("arm7");
    expect(armForJointCount(5)).toBeNull();
  });

  for (const n of [6, 7]) {
    it(`arm${n}: zero config reaches the summed translations`, () => {
      const arm = armForJointCount(n)!;
      const pts = linkPoints(arm, new Array(n).fill(0));
      expect(pts.length).toBe(n + 2); // base, each pivot, tool tip
      const sum = [0, 0, 0];
      for (const j of arm.joints) {
        for (let k = 0; k < 3; k++) sum[k] += j.origin.xyz[k];
      }
      for (let k = 0; k < 3; k++) sum[k] += arm.tool_offset.xyz[k];
      const tip = pts[pts.length - 1];
      for (let k = 0; k < 3; k++) expect(tip[k]).toBeCloseTo(sum[k], 12);
    });
  }

  it("rotating the base z joint by 90 degrees maps (x, y) to (-y, x)", () => {
    const arm = armForJointCount(6)!;
    const zero = linkPoints(arm, [0, 0, 0, 0, 0, 0]);
    const spun = linkPoints(arm, [Math.PI / 2, 0, 0, 0, 0, 0]);
    const tip0 = zero[zero.length - 1];
    const tip1 = spun[spun.length - 1];
    // the first pivot sits before the joint rotation, so only points past
    // it move; the base origin offset stays put
    const base = arm.joints[0].origin.xyz;
    const rel0 = [tip0[0] - base[0], tip0[1] - base[1]];
    expect(tip1[0] - base[0]).toBeCloseTo(-rel0[1], 12);
    expect(tip1[1] - base[1]).toBeCloseTo(rel0[0], 12);
    expect(tip1[2]).toBeCloseTo(tip0[2], 12);
  });
});
