//! C interface to `lowcross`.
//!
//! Set systems and partitions cross the boundary as opaque handles that the
//! caller releases with the matching `*_free` function. Every fallible call
//! returns an [`LcStatus`]; on failure [`lc_last_error_message`] describes
//! the error until the next failing call on the same thread.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::ptr;
use std::slice;

use lowcross::evaluation::{error_factor, eps_approx_from_partition, uniform_sample};
use lowcross::generators::{
    gen_circle_disks, gen_graph_neighborhood, gen_grid, gen_powerlaw_graph, gen_projective_plane,
    gen_random_halfspaces,
};
use lowcross::io::{read_partition_file, read_setsystem_file, write_partition_file, write_setsystem_file};
use lowcross::partitioner::run_partition;
use lowcross::{crossing_number, validate_partition, Algorithm, Error, Partition, PartitionParams, PotentialMode, SetSystem};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Parse = 3,
    State = 4,
    Io = 5,
    Config = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LcAlgorithm {
    Greedy = 0,
    MinWeight = 1,
    PartAtOnce = 2,
}

/// Parameters of [`lc_partition_run`]. Zero `w` or `threads` selects the
/// library default.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct LcPartitionOptions {
    pub t: usize,
    pub d: f64,
    pub algorithm: LcAlgorithm,
    pub seed: u64,
    pub w: usize,
    pub threads: usize,
    /// Nonzero selects the theoretical (part-index scaled) potential.
    pub theoretical: u8,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct LcRunSummary {
    pub kappa: u32,
    pub violations_practical: u64,
    pub violations_theoretical: u64,
    pub runtime_ms: f64,
}

/// Opaque set system handle.
pub struct LcSetSystem(SetSystem);

/// Opaque partition handle.
pub struct LcPartition(Partition);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let msg = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

struct Failure(LcStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Argument(_) => LcStatus::InvalidArgument,
            Error::Parse { .. } => LcStatus::Parse,
            Error::State(_) => LcStatus::State,
            Error::Config(_) => LcStatus::Config,
            Error::Io(_) => LcStatus::Io,
        };
        Failure(status, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(LcStatus::NullPointer, format!("{what} is null"))
}

fn invalid(msg: impl Into<String>) -> Failure {
    Failure(LcStatus::InvalidArgument, msg.into())
}

fn guard(body: impl FnOnce() -> Result<(), Failure>) -> LcStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => LcStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(panic) => {
            let msg = panic
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| panic.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("panic: {msg}"));
            LcStatus::Panic
        }
    }
}

unsafe fn borrow<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn write_out<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

unsafe fn path_arg(path: *const c_char) -> Result<PathBuf, Failure> {
    if path.is_null() {
        return Err(null("path"));
    }
    let s = CStr::from_ptr(path).to_str().map_err(|_| invalid("path is not valid UTF-8"))?;
    Ok(PathBuf::from(s))
}

/// Checks `out` before running `make`, then hands over the new handle.
unsafe fn emit_system(
    out: *mut *mut LcSetSystem,
    make: impl FnOnce() -> Result<SetSystem, Failure>,
) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("out"));
    }
    let system = make()?;
    write_out(out, Box::into_raw(Box::new(LcSetSystem(system))), "out")
}

unsafe fn emit_partition(
    out: *mut *mut LcPartition,
    make: impl FnOnce() -> Result<Partition, Failure>,
) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("out"));
    }
    let partition = make()?;
    write_out(out, Box::into_raw(Box::new(LcPartition(partition))), "out")
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn lc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failed call on this thread, or null. The pointer is
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn lc_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Builds a set system from compressed rows: range `f` holds
/// `indices[offsets[f] .. offsets[f + 1]]`. `offsets` has `m + 1` entries.
#[no_mangle]
pub unsafe extern "C" fn lc_setsystem_from_csr(
    n: usize,
    m: usize,
    offsets: *const usize,
    indices: *const usize,
    out: *mut *mut LcSetSystem,
) -> LcStatus {
    guard(|| {
        if offsets.is_null() {
            return Err(null("offsets"));
        }
        let offsets = slice::from_raw_parts(offsets, m + 1);
        if offsets[0] != 0 || offsets.windows(2).any(|w| w[0] > w[1]) {
            return Err(invalid("offsets must start at 0 and be nondecreasing"));
        }
        let total = offsets[m];
        let indices: &[usize] = if total == 0 {
            &[]
        } else if indices.is_null() {
            return Err(null("indices"));
        } else {
            slice::from_raw_parts(indices, total)
        };
        let ranges = offsets.windows(2).map(|w| indices[w[0]..w[1]].iter().copied());
        emit_system(out, || Ok(SetSystem::new(n, ranges)?))
    })
}

#[no_mangle]
pub unsafe extern "C" fn lc_setsystem_read_file(path: *const c_char, out: *mut *mut LcSetSystem) -> LcStatus {
    guard(|| emit_system(out, || Ok(read_setsystem_file(path_arg(path)?)?)))
}

#[no_mangle]
pub unsafe extern "C" fn lc_setsystem_write_file(system: *const LcSetSystem, path: *const c_char) -> LcStatus {
    guard(|| Ok(write_setsystem_file(&borrow(system, "system")?.0, path_arg(path)?)?))
}

#[no_mangle]
pub unsafe extern "C" fn lc_gen_grid(n: usize, d: usize, seed: u64, out: *mut *mut LcSetSystem) -> LcStatus {
    guard(|| emit_system(out, || Ok(gen_grid(n, d, seed)?)))
}

#[no_mangle]
pub unsafe extern "C" fn lc_gen_random_halfspaces(
    n: usize,
    d: usize,
    m: usize,
    seed: u64,
    out: *mut *mut LcSetSystem,
) -> LcStatus {
    guard(|| emit_system(out, || Ok(gen_random_halfspaces(n, d, m, seed)?)))
}

/// Radius-`r` neighborhoods of a seeded power-law random graph.
#[no_mangle]
pub unsafe extern "C" fn lc_gen_powerlaw(n: usize, beta: f64, r: u32, seed: u64, out: *mut *mut LcSetSystem) -> LcStatus {
    guard(|| emit_system(out, || Ok(gen_graph_neighborhood(&gen_powerlaw_graph(n, beta, seed)?, r)?)))
}

#[no_mangle]
pub unsafe extern "C" fn lc_gen_projective_plane(order: u64, out: *mut *mut LcSetSystem) -> LcStatus {
    guard(|| emit_system(out, || Ok(gen_projective_plane(order)?)))
}

#[no_mangle]
pub unsafe extern "C" fn lc_gen_circle_disks(
    n: usize,
    circles: usize,
    m: usize,
    seed: u64,
    out: *mut *mut LcSetSystem,
) -> LcStatus {
    guard(|| emit_system(out, || Ok(gen_circle_disks(n, circles, m, seed)?)))
}

/// Element count, or 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn lc_setsystem_n(system: *const LcSetSystem) -> usize {
    system.as_ref().map_or(0, |s| s.0.n())
}

/// Range count, or 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn lc_setsystem_m(system: *const LcSetSystem) -> usize {
    system.as_ref().map_or(0, |s| s.0.m())
}

#[no_mangle]
pub unsafe extern "C" fn lc_setsystem_free(system: *mut LcSetSystem) {
    if !system.is_null() {
        drop(Box::from_raw(system));
    }
}

/// Partitions `system`. `summary` may be null.
#[no_mangle]
pub unsafe extern "C" fn lc_partition_run(
    system: *const LcSetSystem,
    options: *const LcPartitionOptions,
    out: *mut *mut LcPartition,
    summary: *mut LcRunSummary,
) -> LcStatus {
    guard(|| {
        let system = &borrow(system, "system")?.0;
        let o = *borrow(options, "options")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let algorithm = match o.algorithm {
            LcAlgorithm::Greedy => Algorithm::Greedy,
            LcAlgorithm::MinWeight => Algorithm::MinWeight,
            LcAlgorithm::PartAtOnce => Algorithm::PartAtOnce,
        };
        let mode = if o.theoretical != 0 { PotentialMode::Theoretical } else { PotentialMode::Practical };
        let mut params = PartitionParams::new(o.t, o.d, algorithm, o.seed)?.with_mode(mode);
        if o.w != 0 {
            params = params.with_w(o.w);
        }
        if o.threads != 0 {
            params = params.with_threads(o.threads);
        }
        let run = run_partition(system, &params)?;
        if !summary.is_null() {
            let r = &run.report;
            summary.write(LcRunSummary {
                kappa: r.kappa,
                violations_practical: r.total_violations_practical(),
                violations_theoretical: r.total_violations_theoretical(),
                runtime_ms: r.runtime.as_secs_f64() * 1e3,
            });
        }
        write_out(out, Box::into_raw(Box::new(LcPartition(run.partition))), "out")
    })
}

/// Wraps an assignment of `n` elements to part ids in `[0, t)`.
#[no_mangle]
pub unsafe extern "C" fn lc_partition_from_assignment(
    n: usize,
    part_of: *const u32,
    t: usize,
    out: *mut *mut LcPartition,
) -> LcStatus {
    guard(|| {
        emit_partition(out, || {
            let ids = if n == 0 {
                Vec::new()
            } else if part_of.is_null() {
                return Err(null("part_of"));
            } else {
                slice::from_raw_parts(part_of, n).to_vec()
            };
            Ok(Partition::new(ids, t)?)
        })
    })
}

#[no_mangle]
pub unsafe extern "C" fn lc_partition_read_file(path: *const c_char, out: *mut *mut LcPartition) -> LcStatus {
    guard(|| emit_partition(out, || Ok(read_partition_file(path_arg(path)?)?)))
}

#[no_mangle]
pub unsafe extern "C" fn lc_partition_write_file(partition: *const LcPartition, path: *const c_char) -> LcStatus {
    guard(|| Ok(write_partition_file(&borrow(partition, "partition")?.0, path_arg(path)?)?))
}

#[no_mangle]
pub unsafe extern "C" fn lc_partition_n(partition: *const LcPartition) -> usize {
    partition.as_ref().map_or(0, |p| p.0.n())
}

#[no_mangle]
pub unsafe extern "C" fn lc_partition_t(partition: *const LcPartition) -> usize {
    partition.as_ref().map_or(0, |p| p.0.t())
}

/// Copies the part id of every element into `buf`, which must hold at
/// least `lc_partition_n` entries.
#[no_mangle]
pub unsafe extern "C" fn lc_partition_assignment(partition: *const LcPartition, buf: *mut u32, len: usize) -> LcStatus {
    guard(|| {
        let ids = borrow(partition, "partition")?.0.assignment();
        if len < ids.len() {
            return Err(invalid(format!("buffer holds {len} entries, need {}", ids.len())));
        }
        if ids.is_empty() {
            return Ok(());
        }
        if buf.is_null() {
            return Err(null("buf"));
        }
        ptr::copy_nonoverlapping(ids.as_ptr(), buf, ids.len());
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn lc_partition_free(partition: *mut LcPartition) {
    if !partition.is_null() {
        drop(Box::from_raw(partition));
    }
}

#[no_mangle]
pub unsafe extern "C" fn lc_crossing_number(
    system: *const LcSetSystem,
    partition: *const LcPartition,
    kappa: *mut u32,
) -> LcStatus {
    guard(|| {
        let report = crossing_number(&borrow(system, "system")?.0, &borrow(partition, "partition")?.0)?;
        write_out(kappa, report.kappa, "kappa")
    })
}

/// Stores the number of violated partition conditions; 0 means valid.
#[no_mangle]
pub unsafe extern "C" fn lc_validate_partition(
    system: *const LcSetSystem,
    partition: *const LcPartition,
    violations: *mut usize,
) -> LcStatus {
    guard(|| {
        let found = validate_partition(&borrow(system, "system")?.0, &borrow(partition, "partition")?.0);
        write_out(violations, found.len(), "violations")
    })
}

#[no_mangle]
pub unsafe extern "C" fn lc_error_factor(
    system: *const LcSetSystem,
    elements: *const usize,
    len: usize,
    epsilon: *mut f64,
) -> LcStatus {
    guard(|| {
        let system = &borrow(system, "system")?.0;
        let sample: &[usize] = if len == 0 {
            &[]
        } else if elements.is_null() {
            return Err(null("elements"));
        } else {
            slice::from_raw_parts(elements, len)
        };
        write_out(epsilon, error_factor(system, sample)?, "epsilon")
    })
}

/// Error factor of one uniformly chosen element per part.
#[no_mangle]
pub unsafe extern "C" fn lc_eps_approx_from_partition(
    system: *const LcSetSystem,
    partition: *const LcPartition,
    seed: u64,
    epsilon: *mut f64,
) -> LcStatus {
    guard(|| {
        let sample = eps_approx_from_partition(&borrow(system, "system")?.0, &borrow(partition, "partition")?.0, seed)?;
        write_out(epsilon, sample.epsilon, "epsilon")
    })
}

/// Error factor of `size` elements drawn uniformly without replacement.
#[no_mangle]
pub unsafe extern "C" fn lc_uniform_sample_epsilon(
    system: *const LcSetSystem,
    size: usize,
    seed: u64,
    epsilon: *mut f64,
) -> LcStatus {
    guard(|| write_out(epsilon, uniform_sample(&borrow(system, "system")?.0, size, seed)?.epsilon, "epsilon"))
}
