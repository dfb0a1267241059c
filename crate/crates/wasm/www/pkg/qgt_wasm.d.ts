/* tslint:disable */
/* eslint-disable */

/**
 * Paramagnet Bures metric against temperature at polar angle `theta`.
 *
 * Rows of `[T, g_thth, g_phph, closed-form g_thth]`, `count` rows on a
 * logarithmic grid from `t_min` to `t_max`.
 */
export function paramagnet_curve(theta: number, omega0: number, t_min: number, t_max: number, count: number): Float64Array;

/**
 * Two-band Bures metric at one momentum against temperature, with the
 * ground-state metric it approaches.
 *
 * The first three entries are the ground-state `[g_xx, g_yy, g_xy]`; then
 * rows of `[T, g_xx, g_yy, g_xy]` on a logarithmic grid.
 */
export function twoband_sweep(kx: number, ky: number, mu: number, t_min: number, t_max: number, count: number): Float64Array;

/**
 * Two-band Bures metric on an `n x n` Brillouin-zone grid over `[-pi, pi)`.
 *
 * Row-major over `(kx, ky)` with `kx` slowest; each cell holds
 * `[g_xx, g_yy, g_xy]`. Points that fail (rank-deficient states at very low
 * temperature) are NaN.
 */
export function twoband_zone(mu: number, temperature: number, n: number): Float64Array;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly paramagnet_curve: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
    readonly twoband_sweep: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number, number];
    readonly twoband_zone: (a: number, b: number, c: number) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
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
