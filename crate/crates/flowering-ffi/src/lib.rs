//! C ABI over the proving pipeline: opaque instance handles, byte
//! buffers, and integer status codes. The matching header lives in
//! `include/flowering.h`.
//!
//! Conventions:
//! * Every function returns a `FLW_*` status; out-values go through
//!   pointers. `FLW_REJECT` is a verification verdict, not an error.
//! * Buffers returned by the library are owned by the library and must
//!   be released with `flw_buffer_free`.
//! * Handles are created by `flw_instance_*` and released with
//!   `flw_instance_free`. A null handle or pointer yields
//!   `FLW_BAD_ARGUMENT`.

use flowering::code::GraphCode;
use flowering::field::PrimeField;
use flowering::group::{
    build_blossoming, build_cayley, AlternatingGroup, BooleanVectorGroup, GeneratorSet,
};
use flowering::io::{parse_word, write_word};
use flowering::lps::lps_graph;
use flowering::protocol::{
    prove, simulate_soundness, verify, AdversaryStrategy, ProtocolError, ProtocolParams,
};
use flowering::rim::EdgeWord;
use flowering::wire::{deserialize_proof, serialize_proof};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use std::os::raw::c_char;

pub const FLW_OK: i32 = 0;
pub const FLW_REJECT: i32 = 1;
pub const FLW_BAD_ARGUMENT: i32 = 2;
pub const FLW_MALFORMED: i32 = 3;
pub const FLW_INTERNAL: i32 = 4;

/// Opaque protocol instance: graph family, cut schedule, and parameters.
pub struct FlwInstance {
    params: ProtocolParams,
    code: GraphCode,
}

/// Opaque byte buffer owned by the library.
pub struct FlwBuffer {
    data: Vec<u8>,
}

fn make_instance(
    build: impl FnOnce() -> Result<ProtocolParams, String>,
) -> Result<Box<FlwInstance>, i32> {
    let params = build().map_err(|_| FLW_BAD_ARGUMENT)?;
    let code = GraphCode::new(params.blossoming.base.clone(), params.base_code.clone())
        .map_err(|_| FLW_INTERNAL)?;
    Ok(Box::new(FlwInstance { params, code }))
}

fn params_for<GBuild>(
    cayley_build: GBuild,
    modulus: u64,
    k: u32,
    reps: u32,
    edges_per_check: u32,
) -> Result<ProtocolParams, String>
where
    GBuild: FnOnce() -> Result<flowering::group::BlossomingSequence, String>,
{
    let blossoming = cayley_build()?;
    let field = PrimeField::new(modulus).map_err(|e| e.to_string())?;
    ProtocolParams::new(blossoming, field, k as usize, reps as usize, edges_per_check as usize)
        .map_err(|e| e.to_string())
}

unsafe fn write_handle<T>(out: *mut *mut T, value: Box<T>) -> i32 {
    if out.is_null() {
        return FLW_BAD_ARGUMENT;
    }
    unsafe { *out = Box::into_raw(value) };
    FLW_OK
}

/// Instance over the 12-vertex alternating-group graph with its
/// three-round reference schedule.
///
/// # Safety
/// `out` must be a valid pointer to a handle slot.
#[no_mangle]
pub unsafe extern "C" fn flw_instance_new_a4(
    modulus: u64,
    k: u32,
    reps: u32,
    edges_per_check: u32,
    out: *mut *mut FlwInstance,
) -> i32 {
    match make_instance(|| {
        params_for(
            || {
                let (group, base) = AlternatingGroup::a4_base();
                let gens = GeneratorSet::new(&group, base).map_err(|e| e.to_string())?;
                let cayley = build_cayley(group, gens).map_err(|e| e.to_string())?;
                build_blossoming(&cayley, Some(vec![0, 1, 0])).map_err(|e| e.to_string())
            },
            modulus,
            k,
            reps,
            edges_per_check,
        )
    }) {
        Ok(handle) => unsafe { write_handle(out, handle) },
        Err(code) => code,
    }
}

/// Instance over the rank-`rank` boolean-vector group with the halving
/// schedule.
///
/// # Safety
/// `out` must be a valid pointer to a handle slot.
#[no_mangle]
pub unsafe extern "C" fn flw_instance_new_z2r(
    rank: u32,
    modulus: u64,
    k: u32,
    reps: u32,
    edges_per_check: u32,
    out: *mut *mut FlwInstance,
) -> i32 {
    if !(1..=20).contains(&rank) {
        return FLW_BAD_ARGUMENT;
    }
    match make_instance(|| {
        params_for(
            || {
                let group = BooleanVectorGroup::new(rank as usize);
                let basis = group.standard_basis();
                let gens = GeneratorSet::new(&group, basis).map_err(|e| e.to_string())?;
                let cayley = build_cayley(group, gens).map_err(|e| e.to_string())?;
                build_blossoming(&cayley, Some((0..rank as usize).collect()))
                    .map_err(|e| e.to_string())
            },
            modulus,
            k,
            reps,
            edges_per_check,
        )
    }) {
        Ok(handle) => unsafe { write_handle(out, handle) },
        Err(code) => code,
    }
}

/// Instance over the (p+1)-regular Ramanujan graph with the round-robin
/// schedule.
///
/// # Safety
/// `out` must be a valid pointer to a handle slot.
#[no_mangle]
pub unsafe extern "C" fn flw_instance_new_lps(
    p: u64,
    q: u64,
    modulus: u64,
    k: u32,
    reps: u32,
    edges_per_check: u32,
    out: *mut *mut FlwInstance,
) -> i32 {
    match make_instance(|| {
        params_for(
            || {
                let inst = lps_graph(p, q).map_err(|e| e.to_string())?;
                build_blossoming(&inst.cayley, None).map_err(|e| e.to_string())
            },
            modulus,
            k,
            reps,
            edges_per_check,
        )
    }) {
        Ok(handle) => unsafe { write_handle(out, handle) },
        Err(code) => code,
    }
}

/// # Safety
/// `inst` must be a handle from `flw_instance_new_*` or null.
#[no_mangle]
pub unsafe extern "C" fn flw_instance_free(inst: *mut FlwInstance) {
    if !inst.is_null() {
        drop(unsafe { Box::from_raw(inst) });
    }
}

/// Number of edges of the base graph (the code length).
///
/// # Safety
/// Pointers must be valid or null.
#[no_mangle]
pub unsafe extern "C" fn flw_instance_edge_count(inst: *const FlwInstance, out: *mut u64) -> i32 {
    if inst.is_null() || out.is_null() {
        return FLW_BAD_ARGUMENT;
    }
    unsafe { *out = (*inst).params.blossoming.base.edge_count() as u64 };
    FLW_OK
}

/// Round count of the cut schedule.
///
/// # Safety
/// Pointers must be valid or null.
#[no_mangle]
pub unsafe extern "C" fn flw_instance_rounds(inst: *const FlwInstance, out: *mut u64) -> i32 {
    if inst.is_null() || out.is_null() {
        return FLW_BAD_ARGUMENT;
    }
    unsafe { *out = (*inst).params.rounds() as u64 };
    FLW_OK
}

/// # Safety
/// `buf` must be a buffer returned by this library or null.
#[no_mangle]
pub unsafe extern "C" fn flw_buffer_free(buf: *mut FlwBuffer) {
    if !buf.is_null() {
        drop(unsafe { Box::from_raw(buf) });
    }
}

/// # Safety
/// `buf` must be a live buffer handle.
#[no_mangle]
pub unsafe extern "C" fn flw_buffer_data(buf: *const FlwBuffer) -> *const u8 {
    if buf.is_null() {
        return std::ptr::null();
    }
    unsafe { (*buf).data.as_ptr() }
}

/// # Safety
/// `buf` must be a live buffer handle.
#[no_mangle]
pub unsafe extern "C" fn flw_buffer_len(buf: *const FlwBuffer) -> usize {
    if buf.is_null() {
        return 0;
    }
    unsafe { (*buf).data.len() }
}

/// Samples a uniformly random codeword, serialized in the word file
/// format.
///
/// # Safety
/// `inst` must be a live handle; `out` a valid slot.
#[no_mangle]
pub unsafe extern "C" fn flw_sample_codeword(
    inst: *mut FlwInstance,
    seed: u64,
    out: *mut *mut FlwBuffer,
) -> i32 {
    if inst.is_null() || out.is_null() {
        return FLW_BAD_ARGUMENT;
    }
    let inst = unsafe { &mut *inst };
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let word = inst.code.sample_codeword(&mut rng);
    let bytes = write_word(&inst.params.field, &word);
    unsafe { write_handle(out, Box::new(FlwBuffer { data: bytes })) }
}

/// Proves a word (in word file format) and returns the proof bytes.
///
/// # Safety
/// `word` must point at `word_len` readable bytes; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn flw_prove(
    inst: *const FlwInstance,
    word: *const u8,
    word_len: usize,
    out: *mut *mut FlwBuffer,
) -> i32 {
    if inst.is_null() || word.is_null() || out.is_null() {
        return FLW_BAD_ARGUMENT;
    }
    let inst = unsafe { &*inst };
    let bytes = unsafe { std::slice::from_raw_parts(word, word_len) };
    let (field, values) = match parse_word(bytes) {
        Ok(x) => x,
        Err(_) => return FLW_MALFORMED,
    };
    if field.modulus() != inst.params.field.modulus() {
        return FLW_BAD_ARGUMENT;
    }
    let f0 = match EdgeWord::from_values(&inst.params.blossoming.base, values) {
        Ok(w) => w,
        Err(_) => return FLW_MALFORMED,
    };
    match prove(&inst.params, &f0) {
        Ok((proof, _)) => {
            unsafe { write_handle(out, Box::new(FlwBuffer { data: serialize_proof(&proof) })) }
        }
        Err(_) => FLW_INTERNAL,
    }
}

/// Verifies proof bytes: `FLW_OK` on accept, `FLW_REJECT` on reject,
/// `FLW_MALFORMED` when the bytes do not parse against the instance.
///
/// # Safety
/// `proof` must point at `proof_len` readable bytes.
#[no_mangle]
pub unsafe extern "C" fn flw_verify(
    inst: *const FlwInstance,
    proof: *const u8,
    proof_len: usize,
) -> i32 {
    if inst.is_null() || proof.is_null() {
        return FLW_BAD_ARGUMENT;
    }
    let inst = unsafe { &*inst };
    let bytes = unsafe { std::slice::from_raw_parts(proof, proof_len) };
    let parsed = match deserialize_proof(bytes) {
        Ok(p) => p,
        Err(_) => return FLW_MALFORMED,
    };
    match verify(&inst.params, &parsed, None) {
        Ok(v) if v.accepted => FLW_OK,
        Ok(_) => FLW_REJECT,
        Err(ProtocolError::MalformedProof(_)) => FLW_MALFORMED,
        Err(_) => FLW_INTERNAL,
    }
}

/// Interactive-mode acceptance estimate; `strategy` 0 folds honestly,
/// 1 swaps in fresh codewords.
///
/// # Safety
/// `word` must point at `word_len` readable bytes; out pointers valid.
#[no_mangle]
pub unsafe extern "C" fn flw_simulate(
    inst: *const FlwInstance,
    word: *const u8,
    word_len: usize,
    strategy: i32,
    trials: u64,
    seed: u64,
    out_rate: *mut f64,
    out_halfwidth: *mut f64,
) -> i32 {
    if inst.is_null() || word.is_null() || out_rate.is_null() || out_halfwidth.is_null() {
        return FLW_BAD_ARGUMENT;
    }
    let strategy = match strategy {
        0 => AdversaryStrategy::HonestFold,
        1 => AdversaryStrategy::FixedCodeword,
        _ => return FLW_BAD_ARGUMENT,
    };
    let inst = unsafe { &*inst };
    let bytes = unsafe { std::slice::from_raw_parts(word, word_len) };
    let (field, values) = match parse_word(bytes) {
        Ok(x) => x,
        Err(_) => return FLW_MALFORMED,
    };
    if field.modulus() != inst.params.field.modulus() {
        return FLW_BAD_ARGUMENT;
    }
    let f0 = match EdgeWord::from_values(&inst.params.blossoming.base, values) {
        Ok(w) => w,
        Err(_) => return FLW_MALFORMED,
    };
    match simulate_soundness(&inst.params, &f0, strategy, trials, seed) {
        Ok(est) => {
            unsafe {
                *out_rate = est.rate;
                *out_halfwidth = est.wilson99_halfwidth;
            }
            FLW_OK
        }
        Err(_) => FLW_INTERNAL,
    }
}

/// Library version as a static C string.
#[no_mangle]
pub extern "C" fn flw_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}
