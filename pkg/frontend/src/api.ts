// Typed client for the engine's HTTP API. All business numbers (durations,
// frame counts, classifications) come from these responses; the UI never
// recomputes them.

import type {
    AudioInfo,
    ApiErrorBody,
    BrainstormDto,
    IntervalDto,
    JobDto,
    PeakPair,
    SpecDto,
} from './types.js';

export const DEFAULT_POLL_INTERVAL_MS = 1000;

export class ApiError extends Error {
    constructor(
        public readonly status: number,
        public readonly code: string,
        message: string,
    ) {
        super(message);
    }
}

type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;
type SleepLike = (ms: number) => Promise<void>;

const realSleep: SleepLike = (ms) => new Promise((resolve) => setTimeout(resolve, ms));

export class ApiClient {
    private readonly fetchFn: FetchLike;
    private readonly sleep: SleepLike;

    constructor(
        public readonly baseUrl: string = '',
        options: { fetchFn?: FetchLike; sleep?: SleepLike } = {},
    ) {
        this.fetchFn = options.fetchFn ?? ((url, init) => fetch(url, init));
        this.sleep = options.sleep ?? realSleep;
    }

    private async request<T>(path: string, init?: RequestInit): Promise<T> {
        const resp = await this.fetchFn(`${this.baseUrl}${path}`, init);
        if (!resp.ok) {
            let code = `HTTP ${resp.status}`;
            let message = resp.statusText;
            try {
                const body = (await resp.json()) as ApiErrorBody | { detail?: string };
                if ('error' in body && body.error) {
                    code = body.error.code;
                    message = body.error.message;
                } else if ('detail' in body && body.detail) {
                    message = String(body.detail);
                }
            } catch {
                // non-JSON error body; keep the status text
            }
            throw new ApiError(resp.status, code, message);
        }
        if (resp.status === 204) {
            return undefined as T;
        }
        return (await resp.json()) as T;
    }

    private json<T>(path: string, method: string, body: unknown): Promise<T> {
        return this.request<T>(path, {
            method,
            headers: { 'Content-Type': 'application/json' },
            body: JSON.stringify(body),
        });
    }

    uploadAudio(data: Blob | ArrayBuffer): Promise<AudioInfo> {
        return this.request<AudioInfo>('/audio', { method: 'POST', body: data as BodyInit });
    }

    getPeaks(buckets: number): Promise<{ peaks: PeakPair[] }> {
        return this.request(`/peaks?buckets=${buckets}`);
    }

    listIntervals(): Promise<{ intervals: IntervalDto[] }> {
        return this.request('/intervals');
    }

    createInterval(beginSec: number, endSec: number): Promise<IntervalDto> {
        return this.json('/intervals', 'POST', { begin_sec: beginSec, end_sec: endSec });
    }

    editInterval(id: string, beginSec: number, endSec: number): Promise<IntervalDto> {
        return this.json(`/intervals/${id}`, 'PATCH', { begin_sec: beginSec, end_sec: endSec });
    }

    deleteInterval(id: string): Promise<void> {
        return this.request(`/intervals/${id}`, { method: 'DELETE' });
    }

    setEndpoint(id: string, which: 'start' | 'end', spec: Partial<SpecDto> & { prompt: string }): Promise<IntervalDto> {
        return this.json(`/intervals/${id}/endpoint`, 'POST', { which, spec });
    }

    preview(prompt: string, seed?: number | null): Promise<{ job_id: string }> {
        return this.json('/preview', 'POST', seed == null ? { prompt } : { prompt, seed });
    }

    variations(prompt: string, seed: number): Promise<{ job_id: string }> {
        return this.json('/variations', 'POST', { prompt, seed });
    }

    brainstorm(description: string): Promise<BrainstormDto> {
        return this.json('/brainstorm', 'POST', { description });
    }

    renderInterval(id: string): Promise<{ job_id: string }> {
        return this.request(`/intervals/${id}/render`, { method: 'POST' });
    }

    stitch(): Promise<{ job_id: string }> {
        return this.request('/stitch', { method: 'POST' });
    }

    getJob(jobId: string): Promise<JobDto> {
        return this.request(`/jobs/${jobId}`);
    }

    artifactUrl(digest: string): string {
        return `${this.baseUrl}/artifacts/${digest}`;
    }

    videoUrl(): string {
        return `${this.baseUrl}/video`;
    }

    /** Poll a job at a fixed cadence until it settles (done or failed). */
    async pollJob(
        jobId: string,
        options: { intervalMs?: number; onUpdate?: (job: JobDto) => void } = {},
    ): Promise<JobDto> {
        const intervalMs = options.intervalMs ?? DEFAULT_POLL_INTERVAL_MS;
        for (;;) {
            const job = await this.getJob(jobId);
            options.onUpdate?.(job);
            if (job.status === 'done' || job.status === 'failed') {
                return job;
            }
            await this.sleep(intervalMs);
        }
    }
}
