// Canvas waveform with drag-to-create interval bands.

import { TimeScale, dragToRange } from './mapping.js';
import type { Band } from './state.js';
import type { PeakPair } from './types.js';

export const drawWaveform = (
    canvas: HTMLCanvasElement,
    peaks: PeakPair[],
    bands: Band[],
): void => {
    const ctx = canvas.getContext('2d');
    if (!ctx) {
        return;
    }
    const { width, height } = canvas;
    ctx.clearRect(0, 0, width, height);

    ctx.fillStyle = '#1e2430';
    ctx.fillRect(0, 0, width, height);

    for (const band of bands) {
        ctx.fillStyle = band.color + (band.selected ? 'aa' : '55');
        ctx.fillRect(band.leftPx, 0, band.widthPx, height);
    }

    ctx.fillStyle = '#9fb4d8';
    const mid = height / 2;
    const columns = Math.min(peaks.length, width);
    for (let x = 0; x < columns; x++) {
        const peak = peaks[Math.floor((x / width) * peaks.length)];
        if (!peak) {
            continue;
        }
        const [lo, hi] = peak;
        const top = mid - hi * mid;
        const bottom = mid - lo * mid;
        ctx.fillRect(x, top, 1, Math.max(bottom - top, 1));
    }
};

/**
 * Wire mouse drag gestures on the waveform into interval creation.
 * The pixel range converts through the shared TimeScale; zero-width
 * clicks fire nothing.
 */
export const attachDragCreate = (
    element: HTMLElement,
    getScale: () => TimeScale | null,
    onRange: (beginSec: number, endSec: number) => void,
    onPreview?: (fromPx: number, toPx: number) => void,
): void => {
    let anchor: number | null = null;

    const localX = (event: MouseEvent): number => {
        const rect = element.getBoundingClientRect();
        return event.clientX - rect.left;
    };

    element.addEventListener('mousedown', (event) => {
        if (getScale()) {
            anchor = localX(event);
        }
    });
    element.addEventListener('mousemove', (event) => {
        if (anchor !== null && onPreview) {
            onPreview(anchor, localX(event));
        }
    });
    const finish = (event: MouseEvent) => {
        if (anchor === null) {
            return;
        }
        const scale = getScale();
        const range = scale ? dragToRange(scale, anchor, localX(event)) : null;
        anchor = null;
        if (range) {
            onRange(range.beginSec, range.endSec);
        }
    };
    element.addEventListener('mouseup', finish);
    element.addEventListener('mouseleave', (event) => {
        if (anchor !== null) {
            finish(event);
        }
    });
};
