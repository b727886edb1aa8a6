/* tslint:disable */
/* eslint-disable */

export class BubbleNumbers {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    energy: number;
    mass: number;
    /**
     * `S^{n/2}`
     */
    target: number;
}

export class WellRun {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    el_residual: number;
    iterations: number;
    s_a: number;
    sobolev: number;
    /**
     * Normalized minimizer at `radii`.
     */
    readonly profile: Float64Array;
    readonly radii: Float64Array;
    readonly status: string;
    readonly trajectory: Float64Array;
}

export function bubble_numbers(n: number, eps: number, lambda: number, cutoff: number): BubbleNumbers;

/**
 * Radial bubble profile on `samples` points of `[0, radius]`, cut at `cutoff` when positive.
 */
export function bubble_profile(n: number, eps: number, cutoff: number, radius: number, samples: number): Float64Array;

/**
 * Minimizes the quotient on the unit ball with a well of `depth` and `radius`,
 * starting from a cut bubble of width `eps`.
 */
export function minimize_well(n: number, nodes: number, depth: number, radius: number, eps: number): WellRun;

/**
 * `‖f‖_{p,d}` of the step function taking `values[i]` on a set of measure `widths[i]`.
 * A non-finite `d` selects the weak space.
 */
export function step_lorentz_norm(values: Float64Array, widths: Float64Array, p: number, d: number): number;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_bubblenumbers_free: (a: number, b: number) => void;
    readonly __wbg_get_bubblenumbers_energy: (a: number) => number;
    readonly __wbg_get_bubblenumbers_mass: (a: number) => number;
    readonly __wbg_get_bubblenumbers_target: (a: number) => number;
    readonly __wbg_get_wellrun_el_residual: (a: number) => number;
    readonly __wbg_get_wellrun_iterations: (a: number) => number;
    readonly __wbg_get_wellrun_s_a: (a: number) => number;
    readonly __wbg_get_wellrun_sobolev: (a: number) => number;
    readonly __wbg_set_bubblenumbers_energy: (a: number, b: number) => void;
    readonly __wbg_set_bubblenumbers_mass: (a: number, b: number) => void;
    readonly __wbg_set_bubblenumbers_target: (a: number, b: number) => void;
    readonly __wbg_set_wellrun_el_residual: (a: number, b: number) => void;
    readonly __wbg_set_wellrun_iterations: (a: number, b: number) => void;
    readonly __wbg_set_wellrun_s_a: (a: number, b: number) => void;
    readonly __wbg_set_wellrun_sobolev: (a: number, b: number) => void;
    readonly __wbg_wellrun_free: (a: number, b: number) => void;
    readonly bubble_numbers: (a: number, b: number, c: number, d: number) => [number, number, number];
    readonly bubble_profile: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
    readonly minimize_well: (a: number, b: number, c: number, d: number, e: number) => [number, number, number];
    readonly step_lorentz_norm: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number];
    readonly wellrun_profile: (a: number) => [number, number];
    readonly wellrun_radii: (a: number) => [number, number];
    readonly wellrun_status: (a: number) => [number, number];
    readonly wellrun_trajectory: (a: number) => [number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
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
