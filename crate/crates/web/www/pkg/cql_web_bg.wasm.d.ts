/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_bubblenumbers_free: (a: number, b: number) => void;
export const __wbg_get_bubblenumbers_energy: (a: number) => number;
export const __wbg_get_bubblenumbers_mass: (a: number) => number;
export const __wbg_get_bubblenumbers_target: (a: number) => number;
export const __wbg_get_wellrun_el_residual: (a: number) => number;
export const __wbg_get_wellrun_iterations: (a: number) => number;
export const __wbg_get_wellrun_s_a: (a: number) => number;
export const __wbg_get_wellrun_sobolev: (a: number) => number;
export const __wbg_set_bubblenumbers_energy: (a: number, b: number) => void;
export const __wbg_set_bubblenumbers_mass: (a: number, b: number) => void;
export const __wbg_set_bubblenumbers_target: (a: number, b: number) => void;
export const __wbg_set_wellrun_el_residual: (a: number, b: number) => void;
export const __wbg_set_wellrun_iterations: (a: number, b: number) => void;
export const __wbg_set_wellrun_s_a: (a: number, b: number) => void;
export const __wbg_set_wellrun_sobolev: (a: number, b: number) => void;
export const __wbg_wellrun_free: (a: number, b: number) => void;
export const bubble_numbers: (a: number, b: number, c: number, d: number) => [number, number, number];
export const bubble_profile: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
export const minimize_well: (a: number, b: number, c: number, d: number, e: number) => [number, number, number];
export const step_lorentz_norm: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number];
export const wellrun_profile: (a: number) => [number, number];
export const wellrun_radii: (a: number) => [number, number];
export const wellrun_status: (a: number) => [number, number];
export const wellrun_trajectory: (a: number) => [number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __wbindgen_start: () => void;
