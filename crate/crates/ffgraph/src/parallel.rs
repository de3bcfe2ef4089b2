//! Data-parallel helpers with a sequential fallback.
//!
//! With the default `parallel` feature the hot loops fan out over rayon;
//! without it they run sequentially. Both paths perform the identical
//! per-element arithmetic in the identical order, so results are
//! bit-for-bit the same and all reductions stay single-owner.

/// One metric step is worth fanning out only past this edge count; below it
/// rayon overhead dominates the `O(m)` gather.
#[cfg(feature = "parallel")]
const STEP_PAR_MIN_EDGES: usize = 100_000;

#[cfg(feature = "parallel")]
pub(crate) fn parallelize_step(edge_count: usize) -> bool {
    edge_count >= STEP_PAR_MIN_EDGES && rayon::current_num_threads() > 1
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn parallelize_step(_edge_count: usize) -> bool {
    false
}

/// Writes `f(i)` into `out[i]` for every index, optionally in parallel.
pub(crate) fn fill_indexed<F>(out: &mut [f64], parallel: bool, f: F)
where
    F: Fn(usize) -> f64 + Sync,
{
    #[cfg(feature = "parallel")]
    if parallel {
        use rayon::prelude::*;
        out.par_iter_mut().enumerate().for_each(|(i, slot)| *slot = f(i));
        return;
    }
    let _ = parallel;
    for (i, slot) in out.iter_mut().enumerate() {
        *slot = f(i);
    }
}

/// Runs `f(chunk_index, chunk)` over consecutive chunks, optionally in parallel.
pub(crate) fn for_each_chunk_mut<T, F>(data: &mut [T], chunk_len: usize, parallel: bool, f: F)
where
    T: Send,
    F: Fn(usize, &mut [T]) + Sync,
{
    #[cfg(feature = "parallel")]
    if parallel {
        use rayon::prelude::*;
        data.par_chunks_mut(chunk_len).enumerate().for_each(|(i, chunk)| f(i, chunk));
        return;
    }
    let _ = parallel;
    for (i, chunk) in data.chunks_mut(chunk_len).enumerate() {
        f(i, chunk);
    }
}

/// `items.map(f).collect()` preserving input order, in parallel when enabled.
pub(crate) fn map_collect<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        items.into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.into_iter().map(f).collect()
    }
}

/// Parallel map over an index range, order-preserving.
pub(crate) fn map_range<U, F>(len: usize, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(usize) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..len).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..len).map(f).collect()
    }
}
