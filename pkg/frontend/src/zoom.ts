// SVG viewBox zoom/pan math. Pure functions so behavior is unit-testable;
// the DOM layer just writes the resulting viewBox string back to the
// element. Zoom never leaves the full chart area and never exceeds
// MAX_MAGNIFICATION; tabs are switched only via the tab bar, never by
// gesturing on the chart canvas.

export interface ViewBox {
    x: number;
    y: number;
    w: number;
    h: number;
}

export const MAX_MAGNIFICATION = 32;

export function parseViewBox(attr: string): ViewBox {
    const [x, y, w, h] = attr.trim().split(/[\s,]+/).map(Number);
    return { x, y, w, h };
}

export function viewBoxAttr(vb: ViewBox): string {
    return `${vb.x} ${vb.y} ${vb.w} ${vb.h}`;
}

function clamp(vb: ViewBox, full: ViewBox): ViewBox {
    const w = Math.min(vb.w, full.w);
    const h = Math.min(vb.h, full.h);
    const x = Math.min(Math.max(vb.x, full.x), full.x + full.w - w);
    const y = Math.min(Math.max(vb.y, full.y), full.y + full.h - h);
    return { x, y, w, h };
}

/**
 * Zoom by `factor` (>1 zooms in) keeping the point (cx, cy) — in current
 * viewBox units — fixed on screen. Clamped to the full extent on the way
 * out and to MAX_MAGNIFICATION on the way in.
 */
export function zoomAt(vb: ViewBox, full: ViewBox, factor: number, cx: number, cy: number): ViewBox {
    const minW = full.w / MAX_MAGNIFICATION;
    const minH = full.h / MAX_MAGNIFICATION;
    const w = Math.min(Math.max(vb.w / factor, minW), full.w);
    const h = Math.min(Math.max(vb.h / factor, minH), full.h);
    const fx = (cx - vb.x) / vb.w;
    const fy = (cy - vb.y) / vb.h;
    return clamp({ x: cx - fx * w, y: cy - fy * h, w, h }, full);
}

/** Pan by screen-fraction deltas; clamped at the chart edges. */
export function pan(vb: ViewBox, full: ViewBox, dxFrac: number, dyFrac: number): ViewBox {
    return clamp({ x: vb.x + dxFrac * vb.w, y: vb.y + dyFrac * vb.h, w: vb.w, h: vb.h }, full);
}

export function reset(full: ViewBox): ViewBox {
    return { ...full };
}

export function magnification(vb: ViewBox, full: ViewBox): number {
    return full.w / vb.w;
}

/** On-screen pixel distance of a user-unit span at the current zoom. */
export function screenDistance(unitSpan: number, vb: ViewBox, elementWidthPx: number): number {
    return (unitSpan / vb.w) * elementWidthPx;
}
