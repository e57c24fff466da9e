import type { GraspDict, Intrinsics } from "./types.js";

/** Pinhole projection of a camera-frame point to pixel coordinates. */
export function projectPoint(
  point: readonly [number, number, number],
  intr: Intrinsics,
): { u: number; v: number } {
  const [x, y, z] = point;
  if (z <= 0) {
    throw new Error("point behind the camera");
  }
  return { u: (intr.fx * x) / z + intr.cx, v: (intr.fy * y) / z + intr.cy };
}

/** Pixel distance between the locally projected grasp center and the pixel
 * the server echoed alongside the grasp. */
export function projectionErrorPx(grasp: GraspDict, intr: Intrinsics): number {
  const local = projectPoint(grasp.translation, intr);
  const [eu, ev] = grasp.projected_pixel;
  return Math.hypot(local.u - eu, local.v - ev);
}

/** Closing-axis segment of a grasp in pixel space: the two jaw tips projected
 * through the intrinsics. Display geometry only. */
export function closingSegmentPx(
  grasp: GraspDict,
  intr: Intrinsics,
): { a: { u: number; v: number }; b: { u: number; v: number } } {
  const r = grasp.rotation; // row-major
  const closing: [number, number, number] = [r[0], r[3], r[6]];
  const half = grasp.width / 2;
  const t = grasp.translation;
  const pa: [number, number, number] = [
    t[0] - half * closing[0],
    t[1] - half * closing[1],
    t[2] - half * closing[2],
  ];
  const pb: [number, number, number] = [
    t[0] + half * closing[0],
    t[1] + half * closing[1],
    t[2] + half * closing[2],
  ];
  return { a: projectPoint(pa, intr), b: projectPoint(pb, intr) };
}
