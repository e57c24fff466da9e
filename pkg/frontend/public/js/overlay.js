import { closingSegmentPx, projectPoint } from "./projection.js";
export const TARGET_FILL = "rgba(80, 180, 255, 0.35)";
export const RING_FILL = "rgba(255, 190, 60, 0.30)";
export const MARKER_STROKE = "rgba(120, 240, 120, 0.9)";
export const TOP_STROKE = "rgba(255, 60, 60, 1.0)";
/** Tint the white pixels of a mask PNG onto the overlay canvas. */
export function drawMaskTint(ctx, mask, width, height, fill) {
    const scratch = ctx.canvas.ownerDocument.createElement("canvas");
    scratch.width = width;
    scratch.height = height;
    const sctx = scratch.getContext("2d");
    sctx.drawImage(mask, 0, 0);
    sctx.globalCompositeOperation = "source-in";
    sctx.fillStyle = fill;
    sctx.fillRect(0, 0, width, height);
    ctx.drawImage(scratch, 0, 0);
}
/** Grasp markers: closing segment plus a center dot; the first entry is the
 * ranked winner and gets the highlight colour. */
export function drawGraspMarkers(ctx, grasps, intr) {
    grasps
        .slice()
        .reverse()
        .forEach((grasp, reversedIndex) => {
        const isTop = reversedIndex === grasps.length - 1;
        const { a, b } = closingSegmentPx(grasp, intr);
        const center = projectPoint(grasp.translation, intr);
        ctx.strokeStyle = isTop ? TOP_STROKE : MARKER_STROKE;
        ctx.lineWidth = isTop ? 2.5 : 1.0;
        ctx.beginPath();
        ctx.moveTo(a.u, a.v);
        ctx.lineTo(b.u, b.v);
        ctx.stroke();
        ctx.beginPath();
        ctx.arc(center.u, center.v, isTop ? 4 : 2, 0, 2 * Math.PI);
        ctx.stroke();
    });
}
