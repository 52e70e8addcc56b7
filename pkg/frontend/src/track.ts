// Track-area frame strips and the stitched-video preview.

import type { ApiClient } from './api.js';
import { thumbnailIndices } from './state.js';
import type { RenderedFrame } from './types.js';

export type Thumbnail = { index: number; url: string };

/**
 * Thumbnails for a rendered interval's strip. The count equals the frame
 * count up to the cap; beyond it every k-th frame is shown.
 */
export const stripThumbnails = (api: ApiClient, frames: RenderedFrame[]): Thumbnail[] => {
    const byIndex = new Map(frames.map((f) => [f.index, f]));
    return thumbnailIndices(frames.length)
        .map((index) => {
            const frame = byIndex.get(index);
            return frame ? { index, url: api.artifactUrl(frame.image_ref) } : null;
        })
        .filter((t): t is Thumbnail => t !== null);
};

/** Minimal surface of <video> the preview needs (mockable in tests). */
export type VideoSurface = {
    src: string;
    load(): void;
    play(): Promise<void> | void;
};

/** Point the video element at the stitched file and start playback. */
export const showStitchPreview = async (video: VideoSurface, url: string): Promise<void> => {
    video.src = url;
    video.load();
    try {
        await video.play();
    } catch {
        // autoplay may be blocked; the file is loaded and ready either way
    }
};
