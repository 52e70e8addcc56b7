// Linear pixel <-> seconds mapping over the rendered waveform width.
// The two directions invert each other within one pixel of rounding.

export class TimeScale {
    constructor(
        public readonly durationSec: number,
        public readonly widthPx: number,
    ) {
        if (durationSec <= 0 || widthPx <= 0) {
            throw new Error(`degenerate scale: ${durationSec}s over ${widthPx}px`);
        }
    }

    secondsToPixel(sec: number): number {
        const clamped = Math.min(Math.max(sec, 0), this.durationSec);
        return Math.round((clamped / this.durationSec) * this.widthPx);
    }

    pixelToSeconds(px: number): number {
        const clamped = Math.min(Math.max(px, 0), this.widthPx);
        return (clamped / this.widthPx) * this.durationSec;
    }

    /** Seconds covered by one pixel; the rounding tolerance everywhere. */
    secondsPerPixel(): number {
        return this.durationSec / this.widthPx;
    }
}

export type DragRange = { beginSec: number; endSec: number } | null;

/**
 * Convert a drag gesture (pixel positions in either direction) into an
 * interval creation request. Zero-width drags produce nothing.
 */
export const dragToRange = (scale: TimeScale, fromPx: number, toPx: number): DragRange => {
    const lo = Math.min(fromPx, toPx);
    const hi = Math.max(fromPx, toPx);
    if (hi - lo < 1) {
        return null;
    }
    return {
        beginSec: scale.pixelToSeconds(lo),
        endSec: scale.pixelToSeconds(hi),
    };
};
