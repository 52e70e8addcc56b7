// Pure view-state helpers: interval bands over the waveform, START/END slot
// contents, and frame-strip thumbnail decimation.

import { TimeScale } from './mapping.js';
import type { IntervalDto, SpecDto } from './types.js';

// Colored bands cycle a fixed palette in timeline order.
export const BAND_PALETTE = [
    '#8e7cc3', '#e06c9f', '#6aa84f', '#e69138',
    '#3d85c6', '#cc4125', '#45818e', '#a64d79',
] as const;

export type Band = {
    id: string;
    leftPx: number;
    widthPx: number;
    color: string;
    selected: boolean;
};

export const bandsFor = (
    intervals: IntervalDto[],
    scale: TimeScale,
    selectedId: string | null,
): Band[] =>
    intervals.map((interval, index) => {
        const left = scale.secondsToPixel(interval.begin_sec);
        const right = scale.secondsToPixel(interval.end_sec);
        return {
            id: interval.id,
            leftPx: left,
            widthPx: Math.max(right - left, 1),
            color: BAND_PALETTE[index % BAND_PALETTE.length]!,
            selected: interval.id === selectedId,
        };
    });

// --------------------------------------------------------------------------
// START / END slots
// --------------------------------------------------------------------------

/** Payload carried by a dragged image (set on dragstart, read on drop). */
export type DragPayload = {
    prompt: string;
    seed: number | null;
    image_ref: string;
};

export type SlotState = {
    which: 'start' | 'end';
    spec: SpecDto | null;
    imageRef: string | null;
};

export const emptySlot = (which: 'start' | 'end'): SlotState => ({
    which,
    spec: null,
    imageRef: null,
});

/**
 * Fill a slot from a dropped image. Drops without complete metadata are
 * rejected client-side (null) so a slot always shows the prompt and seed
 * that travelled with the image.
 */
export const dropIntoSlot = (slot: SlotState, payload: unknown): SlotState | null => {
    if (typeof payload !== 'object' || payload === null) {
        return null;
    }
    const candidate = payload as Partial<DragPayload>;
    if (typeof candidate.prompt !== 'string' || !candidate.prompt.trim()) {
        return null;
    }
    if (candidate.seed === undefined || typeof candidate.image_ref !== 'string') {
        return null;
    }
    return {
        which: slot.which,
        spec: {
            prompt: candidate.prompt,
            seed: candidate.seed,
            width: 0, // server substitutes the project frame size
            height: 0,
        },
        imageRef: candidate.image_ref,
    };
};

export const parseDragData = (raw: string): unknown => {
    try {
        return JSON.parse(raw);
    } catch {
        return null;
    }
};

// --------------------------------------------------------------------------
// frame strips
// --------------------------------------------------------------------------

export const MAX_STRIP_THUMBNAILS = 48;

/**
 * Indices of the frames shown in a track strip. Strips at or under the cap
 * show every frame; longer ones show every k-th frame (first frame always
 * included) to bound DOM size.
 */
export const thumbnailIndices = (frameCount: number, cap: number = MAX_STRIP_THUMBNAILS): number[] => {
    if (frameCount <= 0) {
        return [];
    }
    if (frameCount <= cap) {
        return Array.from({ length: frameCount }, (_, i) => i);
    }
    const stride = Math.ceil(frameCount / cap);
    const indices: number[] = [];
    for (let i = 0; i < frameCount; i += stride) {
        indices.push(i);
    }
    return indices;
};

// --------------------------------------------------------------------------
// prompt textbox helpers (style keyword clicks append to the prompt)
// --------------------------------------------------------------------------

export const appendKeyword = (promptText: string, keyword: string): string => {
    const trimmed = promptText.trim().replace(/,\s*$/, '');
    if (!trimmed) {
        return keyword;
    }
    const phrases = trimmed.split(',').map((p) => p.trim().toLowerCase());
    if (phrases.includes(keyword.toLowerCase())) {
        return trimmed;
    }
    return `${trimmed}, ${keyword}`;
};
