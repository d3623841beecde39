/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const massey: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number) => [number, number];
export const model_source: (a: number, b: number) => [number, number];
export const models: () => [number, number];
export const transfer: (a: number, b: number, c: number) => [number, number];
export const validate: (a: number, b: number) => [number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_start: () => void;
