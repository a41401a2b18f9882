/* tslint:disable */
/* eslint-disable */

/**
 * A translated frame pair and the motion field estimated between them.
 */
export class MotionView {
    free(): void;
    [Symbol.dispose](): void;
    cols(): number;
    current(): Uint8Array;
    /**
     * Blocks whose vector equals the true displacement.
     */
    exact_blocks(): number;
    constructor(size: number, dx: number, dy: number, seed: number);
    psnr_full_search(): number;
    psnr_mean_search(): number;
    reference(): Uint8Array;
    rows(): number;
    size(): number;
    /**
     * Interleaved `dx, dy` per block, row-major.
     */
    vectors(): Int32Array;
}

/**
 * Watermark every frame, encode, decode, and score each decoded frame.
 */
export class PipelineView {
    free(): void;
    [Symbol.dispose](): void;
    decoded_frame(index: number): Uint8Array;
    frame_count(): number;
    mse(): Float64Array;
    constructor(size: number, frames: number, dx: number, dy: number, gop: number, seed: number);
    /**
     * `I` / `P` per frame.
     */
    pattern(): string;
    /**
     * Per-frame PSNR in dB; `Infinity` for exact frames.
     */
    psnr(): Float64Array;
    raw_bytes(): number;
    size(): number;
    stream_bytes(): number;
    /**
     * `NaN` where the recovered watermark is flat.
     */
    wm_correlation(): Float64Array;
    wm_ssim(): Float64Array;
}

/**
 * Cover frame, stego frame and the watermark read back from it.
 */
export class WatermarkView {
    free(): void;
    [Symbol.dispose](): void;
    changed_pixels(): number;
    correlation(): number;
    cover(): Uint8Array;
    /**
     * `|stego − cover|` stretched to full range for display.
     */
    difference(): Uint8Array;
    mark(): Uint8Array;
    constructor(size: number, seed: number, wm_width: number, wm_height: number, kind: number);
    recovered(): Uint8Array;
    size(): number;
    ssim(): number;
    stego(): Uint8Array;
    wm_height(): number;
    wm_width(): number;
}

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_motionview_free: (a: number, b: number) => void;
    readonly __wbg_pipelineview_free: (a: number, b: number) => void;
    readonly __wbg_watermarkview_free: (a: number, b: number) => void;
    readonly motionview_cols: (a: number) => number;
    readonly motionview_current: (a: number) => [number, number];
    readonly motionview_exact_blocks: (a: number) => number;
    readonly motionview_new: (a: number, b: number, c: number, d: number) => [number, number, number];
    readonly motionview_psnr_full_search: (a: number) => number;
    readonly motionview_psnr_mean_search: (a: number) => number;
    readonly motionview_reference: (a: number) => [number, number];
    readonly motionview_rows: (a: number) => number;
    readonly motionview_size: (a: number) => number;
    readonly motionview_vectors: (a: number) => [number, number];
    readonly pipelineview_decoded_frame: (a: number, b: number) => [number, number];
    readonly pipelineview_frame_count: (a: number) => number;
    readonly pipelineview_mse: (a: number) => [number, number];
    readonly pipelineview_new: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number];
    readonly pipelineview_pattern: (a: number) => [number, number];
    readonly pipelineview_psnr: (a: number) => [number, number];
    readonly pipelineview_raw_bytes: (a: number) => number;
    readonly pipelineview_size: (a: number) => number;
    readonly pipelineview_stream_bytes: (a: number) => number;
    readonly pipelineview_wm_correlation: (a: number) => [number, number];
    readonly pipelineview_wm_ssim: (a: number) => [number, number];
    readonly watermarkview_changed_pixels: (a: number) => number;
    readonly watermarkview_correlation: (a: number) => number;
    readonly watermarkview_cover: (a: number) => [number, number];
    readonly watermarkview_difference: (a: number) => [number, number];
    readonly watermarkview_mark: (a: number) => [number, number];
    readonly watermarkview_new: (a: number, b: number, c: number, d: number, e: number) => [number, number, number];
    readonly watermarkview_recovered: (a: number) => [number, number];
    readonly watermarkview_size: (a: number) => number;
    readonly watermarkview_ssim: (a: number) => number;
    readonly watermarkview_stego: (a: number) => [number, number];
    readonly watermarkview_wm_height: (a: number) => number;
    readonly watermarkview_wm_width: (a: number) => number;
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_start: () => void;
}

export type SyncInitInput = BufferSource | WebAssembly.Module;

/**
 * Instantiates the given `module`, which can either be bytes or
 * a precompiled `WebAssembly.Module`.
 *
 * @param {{ module: SyncInitInput }} module - Passing `SyncInitInput` directly is deprecated.
 *
 * @returns {InitOutput}
 */
export function initSync(module: { module: SyncInitInput } | SyncInitInput): InitOutput;

/**
 * If `module_or_path` is {RequestInfo} or {URL}, makes a request and
 * for everything else, calls `WebAssembly.instantiate` directly.
 *
 * @param {{ module_or_path: InitInput | Promise<InitInput> }} module_or_path - Passing `InitInput` directly is deprecated.
 *
 * @returns {Promise<InitOutput>}
 */
export default function __wbg_init (module_or_path?: { module_or_path: InitInput | Promise<InitInput> } | InitInput | Promise<InitInput>): Promise<InitOutput>;
