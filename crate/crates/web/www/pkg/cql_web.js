/* @ts-self-types="./cql_web.d.ts" */

export class BubbleNumbers {
    static __wrap(ptr) {
        const obj = Object.create(BubbleNumbers.prototype);
        obj.__wbg_ptr = ptr;
        BubbleNumbersFinalization.register(obj, obj.__wbg_ptr, obj);
        return obj;
    }
    __destroy_into_raw() {
        const ptr = this.__wbg_ptr;
        this.__wbg_ptr = 0;
        BubbleNumbersFinalization.unregister(this);
        return ptr;
    }
    free() {
        const ptr = this.__destroy_into_raw();
        wasm.__wbg_bubblenumbers_free(ptr, 0);
    }
    /**
     * @returns {number}
     */
    get energy() {
        const ret = wasm.__wbg_get_bubblenumbers_energy(this.__wbg_ptr);
        return ret;
    }
    /**
     * @returns {number}
     */
    get mass() {
        const ret = wasm.__wbg_get_bubblenumbers_mass(this.__wbg_ptr);
        return ret;
    }
    /**
     * `S^{n/2}`
     * @returns {number}
     */
    get target() {
        const ret = wasm.__wbg_get_bubblenumbers_target(this.__wbg_ptr);
        return ret;
    }
    /**
     * @param {number} arg0
     */
    set energy(arg0) {
        wasm.__wbg_set_bubblenumbers_energy(this.__wbg_ptr, arg0);
    }
    /**
     * @param {number} arg0
     */
    set mass(arg0) {
        wasm.__wbg_set_bubblenumbers_mass(this.__wbg_ptr, arg0);
    }
    /**
     * `S^{n/2}`
     * @param {number} arg0
     */
    set target(arg0) {
        wasm.__wbg_set_bubblenumbers_target(this.__wbg_ptr, arg0);
    }
}
if (Symbol.dispose) BubbleNumbers.prototype[Symbol.dispose] = BubbleNumbers.prototype.free;

export class WellRun {
    static __wrap(ptr) {
        const obj = Object.create(WellRun.prototype);
        obj.__wbg_ptr = ptr;
        WellRunFinalization.register(obj, obj.__wbg_ptr, obj);
        return obj;
    }
    __destroy_into_raw() {
        const ptr = this.__wbg_ptr;
        this.__wbg_ptr = 0;
        WellRunFinalization.unregister(this);
        return ptr;
    }
    free() {
        const ptr = this.__destroy_into_raw();
        wasm.__wbg_wellrun_free(ptr, 0);
    }
    /**
     * @returns {number}
     */
    get el_residual() {
        const ret = wasm.__wbg_get_wellrun_el_residual(this.__wbg_ptr);
        return ret;
    }
    /**
     * @returns {number}
     */
    get iterations() {
        const ret = wasm.__wbg_get_wellrun_iterations(this.__wbg_ptr);
        return ret >>> 0;
    }
    /**
     * @returns {number}
     */
    get s_a() {
        const ret = wasm.__wbg_get_wellrun_s_a(this.__wbg_ptr);
        return ret;
    }
    /**
     * @returns {number}
     */
    get sobolev() {
        const ret = wasm.__wbg_get_wellrun_sobolev(this.__wbg_ptr);
        return ret;
    }
    /**
     * @param {number} arg0
     */
    set el_residual(arg0) {
        wasm.__wbg_set_wellrun_el_residual(this.__wbg_ptr, arg0);
    }
    /**
     * @param {number} arg0
     */
    set iterations(arg0) {
        wasm.__wbg_set_wellrun_iterations(this.__wbg_ptr, arg0);
    }
    /**
     * @param {number} arg0
     */
    set s_a(arg0) {
        wasm.__wbg_set_wellrun_s_a(this.__wbg_ptr, arg0);
    }
    /**
     * @param {number} arg0
     */
    set sobolev(arg0) {
        wasm.__wbg_set_wellrun_sobolev(this.__wbg_ptr, arg0);
    }
    /**
     * Normalized minimizer at `radii`.
     * @returns {Float64Array}
     */
    get profile() {
        const ret = wasm.wellrun_profile(this.__wbg_ptr);
        var v1 = getArrayF64FromWasm0(ret[0], ret[1]).slice();
        wasm.__wbindgen_free(ret[0], ret[1] * 8, 8);
        return v1;
    }
    /**
     * @returns {Float64Array}
     */
    get radii() {
        const ret = wasm.wellrun_radii(this.__wbg_ptr);
        var v1 = getArrayF64FromWasm0(ret[0], ret[1]).slice();
        wasm.__wbindgen_free(ret[0], ret[1] * 8, 8);
        return v1;
    }
    /**
     * @returns {string}
     */
    get status() {
        let deferred1_0;
        let deferred1_1;
        try {
            const ret = wasm.wellrun_status(this.__wbg_ptr);
            deferred1_0 = ret[0];
            deferred1_1 = ret[1];
            return getStringFromWasm0(ret[0], ret[1]);
        } finally {
            wasm.__wbindgen_free(deferred1_0, deferred1_1, 1);
        }
    }
    /**
     * @returns {Float64Array}
     */
    get trajectory() {
        const ret = wasm.wellrun_trajectory(this.__wbg_ptr);
        var v1 = getArrayF64FromWasm0(ret[0], ret[1]).slice();
        wasm.__wbindgen_free(ret[0], ret[1] * 8, 8);
        return v1;
    }
}
if (Symbol.dispose) WellRun.prototype[Symbol.dispose] = WellRun.prototype.free;

/**
 * @param {number} n
 * @param {number} eps
 * @param {number} lambda
 * @param {number} cutoff
 * @returns {BubbleNumbers}
 */
export function bubble_numbers(n, eps, lambda, cutoff) {
    const ret = wasm.bubble_numbers(n, eps, lambda, cutoff);
    if (ret[2]) {
        throw takeFromExternrefTable0(ret[1]);
    }
    return BubbleNumbers.__wrap(ret[0]);
}

/**
 * Radial bubble profile on `samples` points of `[0, radius]`, cut at `cutoff` when positive.
 * @param {number} n
 * @param {number} eps
 * @param {number} cutoff
 * @param {number} radius
 * @param {number} samples
 * @returns {Float64Array}
 */
export function bubble_profile(n, eps, cutoff, radius, samples) {
    const ret = wasm.bubble_profile(n, eps, cutoff, radius, samples);
    if (ret[3]) {
        throw takeFromExternrefTable0(ret[2]);
    }
    var v1 = getArrayF64FromWasm0(ret[0], ret[1]).slice();
    wasm.__wbindgen_free(ret[0], ret[1] * 8, 8);
    return v1;
}

/**
 * Minimizes the quotient on the unit ball with a well of `depth` and `radius`,
 * starting from a cut bubble of width `eps`.
 * @param {number} n
 * @param {number} nodes
 * @param {number} depth
 * @param {number} radius
 * @param {number} eps
 * @returns {WellRun}
 */
export function minimize_well(n, nodes, depth, radius, eps) {
    const ret = wasm.minimize_well(n, nodes, depth, radius, eps);
    if (ret[2]) {
        throw takeFromExternrefTable0(ret[1]);
    }
    return WellRun.__wrap(ret[0]);
}

/**
 * `‖f‖_{p,d}` of the step function taking `values[i]` on a set of measure `widths[i]`.
 * A non-finite `d` selects the weak space.
 * @param {Float64Array} values
 * @param {Float64Array} widths
 * @param {number} p
 * @param {number} d
 * @returns {number}
 */
export function step_lorentz_norm(values, widths, p, d) {
    const ptr0 = passArrayF64ToWasm0(values, wasm.__wbindgen_malloc);
    const len0 = WASM_VECTOR_LEN;
    const ptr1 = passArrayF64ToWasm0(widths, wasm.__wbindgen_malloc);
    const len1 = WASM_VECTOR_LEN;
    const ret = wasm.step_lorentz_norm(ptr0, len0, ptr1, len1, p, d);
    if (ret[2]) {
        throw takeFromExternrefTable0(ret[1]);
    }
    return ret[0];
}
function __wbg_get_imports() {
    const import0 = {
        __proto__: null,
        __wbg_Error_30c8987f7c2ed4e2: function(arg0, arg1) {
            const ret = Error(getStringFromWasm0(arg0, arg1));
            return ret;
        },
        __wbg___wbindgen_throw_41e9ee4f547fc59a: function(arg0, arg1) {
            throw new Error(getStringFromWasm0(arg0, arg1));
        },
        __wbindgen_init_externref_table: function() {
            const table = wasm.__wbindgen_externrefs;
            const offset = table.grow(4);
            table.set(0, undefined);
            table.set(offset + 0, undefined);
            table.set(offset + 1, null);
            table.set(offset + 2, true);
            table.set(offset + 3, false);
        },
    };
    return {
        __proto__: null,
        "./cql_web_bg.js": import0,
    };
}

const BubbleNumbersFinalization = (typeof FinalizationRegistry === 'undefined')
    ? { register: () => {}, unregister: () => {} }
    : new FinalizationRegistry(ptr => wasm.__wbg_bubblenumbers_free(ptr, 1));
const WellRunFinalization = (typeof FinalizationRegistry === 'undefined')
    ? { register: () => {}, unregister: () => {} }
    : new FinalizationRegistry(ptr => wasm.__wbg_wellrun_free(ptr, 1));

function getArrayF64FromWasm0(ptr, len) {
    ptr = ptr >>> 0;
    return getFloat64ArrayMemory0().subarray(ptr / 8, ptr / 8 + len);
}

let cachedFloat64ArrayMemory0 = null;
function getFloat64ArrayMemory0() {
    if (cachedFloat64ArrayMemory0 === null || cachedFloat64ArrayMemory0.byteLength === 0) {
        cachedFloat64ArrayMemory0 = new Float64Array(wasm.memory.buffer);
    }
    return cachedFloat64ArrayMemory0;
}

function getStringFromWasm0(ptr, len) {
    return decodeText(ptr >>> 0, len);
}

let cachedUint8ArrayMemory0 = null;
function getUint8ArrayMemory0() {
    if (cachedUint8ArrayMemory0 === null || cachedUint8ArrayMemory0.byteLength === 0) {
        cachedUint8ArrayMemory0 = new Uint8Array(wasm.memory.buffer);
    }
    return cachedUint8ArrayMemory0;
}

function passArrayF64ToWasm0(arg, malloc) {
    const ptr = malloc(arg.length * 8, 8) >>> 0;
    getFloat64ArrayMemory0().set(arg, ptr / 8);
    WASM_VECTOR_LEN = arg.length;
    return ptr;
}

function takeFromExternrefTable0(idx) {
    const value = wasm.__wbindgen_externrefs.get(idx);
    wasm.__externref_table_dealloc(idx);
    return value;
}

let cachedTextDecoder = new TextDecoder('utf-8', { ignoreBOM: true, fatal: true });
cachedTextDecoder.decode();
const MAX_SAFARI_DECODE_BYTES = 2146435072;
let numBytesDecoded = 0;
function decodeText(ptr, len) {
    numBytesDecoded += len;
    if (numBytesDecoded >= MAX_SAFARI_DECODE_BYTES) {
        cachedTextDecoder = new TextDecoder('utf-8', { ignoreBOM: true, fatal: true });
        cachedTextDecoder.decode();
        numBytesDecoded = len;
    }
    return cachedTextDecoder.decode(getUint8ArrayMemory0().subarray(ptr, ptr + len));
}

let WASM_VECTOR_LEN = 0;

let wasmModule, wasmInstance, wasm;
function __wbg_finalize_init(instance, module) {
    wasmInstance = instance;
    wasm = instance.exports;
    wasmModule = module;
    cachedFloat64ArrayMemory0 = null;
    cachedUint8ArrayMemory0 = null;
    wasm.__wbindgen_start();
    return wasm;
}

async function __wbg_load(module, imports) {
    if (typeof Response === 'function' && module instanceof Response) {
        if (!module.ok) {
            throw new Error(`failed to fetch Wasm: ${module.status} ${module.statusText} fetching '${module.url}'`);
        }

        if (typeof WebAssembly.instantiateStreaming === 'function') {
            try {
                return await WebAssembly.instantiateStreaming(module, imports);
            } catch (e) {
                const validResponse = expectedResponseType(module.type);

                if (validResponse && module.headers.get('Content-Type') !== 'application/wasm') {
                    console.warn("`WebAssembly.instantiateStreaming` failed because your server does not serve Wasm with `application/wasm` MIME type. Falling back to `WebAssembly.instantiate` which is slower. Original error:\n", e);

                } else { throw e; }
            }
        }

        const bytes = await module.arrayBuffer();
        return await WebAssembly.instantiate(bytes, imports);
    } else {
        const instance = await WebAssembly.instantiate(module, imports);

        if (instance instanceof WebAssembly.Instance) {
            return { instance, module };
        } else {
            return instance;
        }
    }

    function expectedResponseType(type) {
        switch (type) {
            case 'basic': case 'cors': case 'default': return true;
        }
        return false;
    }
}

function initSync(module) {
    if (wasm !== undefined) return wasm;


    if (module !== undefined) {
        if (Object.getPrototypeOf(module) === Object.prototype) {
            ({module} = module)
        } else {
            console.warn('using deprecated parameters for `initSync()`; pass a single object instead')
        }
    }

    const imports = __wbg_get_imports();
    if (!(module instanceof WebAssembly.Module)) {
        module = new WebAssembly.Module(module);
    }
    const instance = new WebAssembly.Instance(module, imports);
    return __wbg_finalize_init(instance, module);
}

async function __wbg_init(module_or_path) {
    if (wasm !== undefined) return wasm;


    if (module_or_path !== undefined) {
        if (Object.getPrototypeOf(module_or_path) === Object.prototype) {
            ({module_or_path} = module_or_path)
        } else {
            console.warn('using deprecated parameters for the initialization function; pass a single object instead')
        }
    }

    if (module_or_path === undefined) {
        module_or_path = new URL('cql_web_bg.wasm', import.meta.url);
    }
    const imports = __wbg_get_imports();

    if (typeof module_or_path === 'string' || (typeof Request === 'function' && module_or_path instanceof Request) || (typeof URL === 'function' && module_or_path instanceof URL)) {
        module_or_path = fetch(module_or_path);
    }

    const { instance, module } = await __wbg_load(await module_or_path, imports);

    return __wbg_finalize_init(instance, module);
}

export { initSync, __wbg_init as default };
