// Page wiring: waveform + intervals up top, brainstorming and generation
// panels below, track strips and the stitched-video preview on the right.
// Every number displayed here came out of an API response.

import { ApiClient, ApiError } from './api.js';
import { TimeScale } from './mapping.js';
import { attachDragCreate, drawWaveform } from './waveform.js';
import { DRAG_MIME, attachSlot, makeDraggable } from './slots.js';
import { showStitchPreview, stripThumbnails } from './track.js';
import { appendKeyword, bandsFor } from './state.js';
import type { SlotState } from './state.js';
import type { GeneratedImage, IntervalDto, PeakPair } from './types.js';

const api = new ApiClient('');

const el = <T extends HTMLElement>(id: string): T => {
    const node = document.getElementById(id);
    if (!node) {
        throw new Error(`missing #${id}`);
    }
    return node as T;
};

let scale: TimeScale | null = null;
let peaks: PeakPair[] = [];
let intervals: IntervalDto[] = [];
let selectedId: string | null = null;

const canvas = () => el<HTMLCanvasElement>('waveform');
const status = (text: string, isError = false) => {
    const box = el<HTMLDivElement>('status');
    box.textContent = text;
    box.className = isError ? 'status error' : 'status';
};

const describe = (err: unknown): string =>
    err instanceof ApiError ? `${err.code}: ${err.message}` : String(err);

// --------------------------------------------------------------------------
// waveform + intervals
// --------------------------------------------------------------------------

const redraw = () => {
    if (!scale) {
        return;
    }
    drawWaveform(canvas(), peaks, bandsFor(intervals, scale, selectedId));
};

const refreshIntervals = async () => {
    intervals = (await api.listIntervals()).intervals;
    const list = el<HTMLUListElement>('interval-list');
    list.replaceChildren();
    for (const interval of intervals) {
        const item = document.createElement('li');
        const label = document.createElement('span');
        label.textContent =
            `${interval.id}  ${interval.begin_sec.toFixed(2)}s .. ${interval.end_sec.toFixed(2)}s` +
            `  (${interval.frame_count} frames, ${interval.state})`;
        item.appendChild(label);
        item.classList.toggle('selected', interval.id === selectedId);
        item.addEventListener('click', () => {
            selectedId = interval.id;
            fillTimestampBoxes(interval);
            refreshSlots(interval);
            redraw();
            refreshIntervals();
        });
        const del = document.createElement('button');
        del.textContent = 'delete';
        del.addEventListener('click', async (event) => {
            event.stopPropagation();
            await api.deleteInterval(interval.id);
            if (selectedId === interval.id) {
                selectedId = null;
            }
            await refreshIntervals();
            redraw();
        });
        item.appendChild(del);
        list.appendChild(item);
    }
    redraw();
};

const fillTimestampBoxes = (interval: IntervalDto) => {
    el<HTMLInputElement>('begin-box').value = interval.begin_sec.toFixed(3);
    el<HTMLInputElement>('end-box').value = interval.end_sec.toFixed(3);
};

const refreshSlots = (interval: IntervalDto) => {
    for (const which of ['start', 'end'] as const) {
        const spec = interval[which];
        el<HTMLDivElement>(`${which}-meta`).textContent = spec
            ? `${spec.prompt}  [seed ${spec.seed ?? '?'}]`
            : 'drop an image here';
        const img = el<HTMLImageElement>(`${which}-image`);
        img.style.visibility = spec ? 'visible' : 'hidden';
    }
};

// --------------------------------------------------------------------------
// upload
// --------------------------------------------------------------------------

el<HTMLInputElement>('audio-file').addEventListener('change', async (event) => {
    const input = event.target as HTMLInputElement;
    const file = input.files?.[0];
    if (!file) {
        return;
    }
    try {
        const info = await api.uploadAudio(await file.arrayBuffer());
        scale = new TimeScale(info.duration_sec, canvas().width);
        peaks = (await api.getPeaks(canvas().width)).peaks;
        selectedId = null;
        await refreshIntervals();
        status(`loaded ${info.duration_sec.toFixed(2)}s at ${info.sample_rate} Hz`);
    } catch (err) {
        status(describe(err), true);
    }
});

attachDragCreate(
    canvas(),
    () => scale,
    async (beginSec, endSec) => {
        try {
            const interval = await api.createInterval(beginSec, endSec);
            selectedId = interval.id;
            fillTimestampBoxes(interval);
            await refreshIntervals();
            status(`created ${interval.id}`);
        } catch (err) {
            status(describe(err), true); // Overlap / OutOfRange shown inline
        }
    },
);

el<HTMLButtonElement>('apply-timestamps').addEventListener('click', async () => {
    if (!selectedId) {
        return;
    }
    try {
        const interval = await api.editInterval(
            selectedId,
            parseFloat(el<HTMLInputElement>('begin-box').value),
            parseFloat(el<HTMLInputElement>('end-box').value),
        );
        await refreshIntervals();
        status(`updated ${interval.id}`);
    } catch (err) {
        status(describe(err), true);
    }
});

// --------------------------------------------------------------------------
// brainstorming
// --------------------------------------------------------------------------

el<HTMLButtonElement>('brainstorm-button').addEventListener('click', async () => {
    const description = el<HTMLInputElement>('description-box').value;
    try {
        const result = await api.brainstorm(description);
        const subjects = el<HTMLDivElement>('subject-suggestions');
        subjects.replaceChildren();
        for (const subject of result.subjects) {
            const chip = document.createElement('button');
            chip.textContent = subject;
            chip.addEventListener('click', () => {
                el<HTMLTextAreaElement>('prompt-box').value = subject;
            });
            subjects.appendChild(chip);
        }
        const styles = el<HTMLDivElement>('style-suggestions');
        styles.replaceChildren();
        for (const keyword of result.styles) {
            const chip = document.createElement('button');
            chip.textContent = keyword;
            chip.addEventListener('click', () => {
                const box = el<HTMLTextAreaElement>('prompt-box');
                box.value = appendKeyword(box.value, keyword);
            });
            styles.appendChild(chip);
        }
    } catch (err) {
        status(describe(err), true);
    }
});

// --------------------------------------------------------------------------
// generation history grid
// --------------------------------------------------------------------------

const addToHistory = (images: GeneratedImage[]) => {
    const grid = el<HTMLDivElement>('history-grid');
    for (const image of images) {
        const img = document.createElement('img');
        img.src = api.artifactUrl(image.image_ref);
        img.title = `${image.spec.prompt} [seed ${image.spec.seed}]`;
        makeDraggable(img, {
            prompt: image.spec.prompt,
            seed: image.spec.seed,
            image_ref: image.image_ref,
        });
        grid.prepend(img);
    }
};

const runGenerationJob = async (jobId: string, label: string) => {
    status(`${label}...`);
    const job = await api.pollJob(jobId);
    if (job.status === 'failed') {
        status(`${label} failed: ${job.error}`, true);
        return;
    }
    addToHistory(job.result?.images ?? []);
    status(`${label} done`);
};

el<HTMLButtonElement>('preview-button').addEventListener('click', async () => {
    const prompt = el<HTMLTextAreaElement>('prompt-box').value;
    const seedText = el<HTMLInputElement>('seed-box').value.trim();
    try {
        const { job_id } = await api.preview(prompt, seedText ? parseInt(seedText, 10) : null);
        await runGenerationJob(job_id, 'preview');
    } catch (err) {
        status(describe(err), true);
    }
});

el<HTMLButtonElement>('variation-button').addEventListener('click', async () => {
    const prompt = el<HTMLTextAreaElement>('prompt-box').value;
    const seedText = el<HTMLInputElement>('seed-box').value.trim();
    if (!seedText) {
        status('variations need a concrete seed', true);
        return;
    }
    try {
        const { job_id } = await api.variations(prompt, parseInt(seedText, 10));
        await runGenerationJob(job_id, 'variations');
    } catch (err) {
        status(describe(err), true);
    }
});

// --------------------------------------------------------------------------
// START / END slots
// --------------------------------------------------------------------------

const onSlotFilled = (slot: SlotState) => {
    if (!selectedId || !slot.spec) {
        status('select an interval first', true);
        return;
    }
    api
        .setEndpoint(selectedId, slot.which, { prompt: slot.spec.prompt, seed: slot.spec.seed })
        .then(async (interval) => {
            refreshSlots(interval);
            if (slot.imageRef) {
                el<HTMLImageElement>(`${slot.which}-image`).src = api.artifactUrl(slot.imageRef);
            }
            await refreshIntervals(); // a generated interval reverts to draft
        })
        .catch((err) => status(describe(err), true));
};

attachSlot(el('start-slot'), 'start', onSlotFilled);
attachSlot(el('end-slot'), 'end', onSlotFilled);

// --------------------------------------------------------------------------
// render + stitch
// --------------------------------------------------------------------------

el<HTMLButtonElement>('render-button').addEventListener('click', async () => {
    if (!selectedId) {
        return;
    }
    try {
        const { job_id } = await api.renderInterval(selectedId);
        status('rendering...');
        const job = await api.pollJob(job_id);
        if (job.status === 'failed') {
            status(`render failed: ${job.error}`, true);
            return;
        }
        const frames = job.result?.frames ?? [];
        const strip = document.createElement('div');
        strip.className = 'strip';
        strip.dataset['interval'] = job.result?.interval_id ?? '';
        for (const thumb of stripThumbnails(api, frames)) {
            const img = document.createElement('img');
            img.src = thumb.url;
            img.title = `frame ${thumb.index}`;
            strip.appendChild(img);
        }
        el<HTMLDivElement>('track-area').appendChild(strip);
        await refreshIntervals();
        status(`rendered ${frames.length} frames`);
    } catch (err) {
        status(describe(err), true);
    }
});

el<HTMLButtonElement>('stitch-button').addEventListener('click', async () => {
    try {
        const { job_id } = await api.stitch();
        status('stitching...');
        const job = await api.pollJob(job_id);
        if (job.status === 'failed') {
            status(`stitch failed: ${job.error}`, true);
            return;
        }
        status(`stitched ${job.result?.frame_count ?? 0} frames`);
        if (job.result?.video) {
            await showStitchPreview(el<HTMLVideoElement>('video-area'), api.videoUrl());
        }
    } catch (err) {
        status(describe(err), true);
    }
});

export { DRAG_MIME };
