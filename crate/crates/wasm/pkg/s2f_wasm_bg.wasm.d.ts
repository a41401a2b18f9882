/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_motionview_free: (a: number, b: number) => void;
export const __wbg_pipelineview_free: (a: number, b: number) => void;
export const __wbg_watermarkview_free: (a: number, b: number) => void;
export const motionview_cols: (a: number) => number;
export const motionview_current: (a: number) => [number, number];
export const motionview_exact_blocks: (a: number) => number;
export const motionview_new: (a: number, b: number, c: number, d: number) => [number, number, number];
export const motionview_psnr_full_search: (a: number) => number;
export const motionview_psnr_mean_search: (a: number) => number;
export const motionview_reference: (a: number) => [number, number];
export const motionview_rows: (a: number) => number;
export const motionview_size: (a: number) => number;
export const motionview_vectors: (a: number) => [number, number];
export const pipelineview_decoded_frame: (a: number, b: number) => [number, number];
export const pipelineview_frame_count: (a: number) => number;
export const pipelineview_mse: (a: number) => [number, number];
export const pipelineview_new: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number];
export const pipelineview_pattern: (a: number) => [number, number];
export const pipelineview_psnr: (a: number) => [number, number];
export const pipelineview_raw_bytes: (a: number) => number;
export const pipelineview_size: (a: number) => number;
export const pipelineview_stream_bytes: (a: number) => number;
export const pipelineview_wm_correlation: (a: number) => [number, number];
export const pipelineview_wm_ssim: (a: number) => [number, number];
export const watermarkview_changed_pixels: (a: number) => number;
export const watermarkview_correlation: (a: number) => number;
export const watermarkview_cover: (a: number) => [number, number];
export const watermarkview_difference: (a: number) => [number, number];
export const watermarkview_mark: (a: number) => [number, number];
export const watermarkview_new: (a: number, b: number, c: number, d: number, e: number) => [number, number, number];
export const watermarkview_recovered: (a: number) => [number, number];
export const watermarkview_size: (a: number) => number;
export const watermarkview_ssim: (a: number) => number;
export const watermarkview_stego: (a: number) => [number, number];
export const watermarkview_wm_height: (a: number) => number;
export const watermarkview_wm_width: (a: number) => number;
export const __wbindgen_externrefs: WebAssembly.Table;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_start: () => void;
