// Wire types mirroring the engine's HTTP API responses.

export type SpecDto = {
    prompt: string;
    seed: number | null;
    width: number;
    height: number;
};

export type IntervalDto = {
    id: string;
    begin_sec: number;
    end_sec: number;
    state: 'draft' | 'generated';
    start: SpecDto | null;
    end: SpecDto | null;
    frame_count: number;
};

export type PeakPair = [number, number];

export type AudioInfo = {
    duration_sec: number;
    sample_rate: number;
};

export type GeneratedImage = {
    image_ref: string;
    spec: SpecDto;
};

export type RenderedFrame = {
    index: number;
    weight: number;
    image_ref: string;
};

export type JobStatus = 'queued' | 'running' | 'done' | 'failed';

export type JobDto = {
    id: string;
    kind: string;
    status: JobStatus;
    result?: {
        images?: GeneratedImage[];
        frames?: RenderedFrame[];
        frame_count?: number;
        interval_id?: string;
        orphaned?: boolean;
        video?: boolean;
        intervals?: { id: string; first_frame: number; last_frame: number }[];
    };
    error?: string;
};

export type BrainstormDto = {
    subjects: string[];
    styles: string[];
};

export type ApiErrorBody = {
    error: { code: string; message: string };
};
