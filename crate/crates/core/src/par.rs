//! Data-parallel helpers.
//!
//! With the `parallel` feature (on by default) the helpers dispatch to rayon;
//! without it, or after `set_parallel(false)`, they run sequentially. Results
//! are identical either way: every reduction here is an exact sum, and callers
//! sort before emitting anything order-dependent.

use std::sync::atomic::{AtomicBool, Ordering};

static ENABLED: AtomicBool = AtomicBool::new(true);

/// Work below this many items is not worth splitting.
pub const MIN_PARALLEL_LEN: usize = 16;

/// Runtime switch, mainly for benchmarking the two paths against each other.
/// Has no effect when the crate is built without `parallel`.
pub fn set_parallel(on: bool) {
    ENABLED.store(on, Ordering::Relaxed);
}

/// True when the rayon path is compiled in, switched on, and has more than
/// one worker thread to use.
pub fn is_parallel() -> bool {
    #[cfg(feature = "parallel")]
    {
        ENABLED.load(Ordering::Relaxed) && rayon::current_num_threads() > 1
    }
    #[cfg(not(feature = "parallel"))]
    {
        false
    }
}

/// Ordered map over a slice.
pub fn map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if is_parallel() && items.len() > 1 {
        use rayon::prelude::*;
        return items.par_iter().map(f).collect();
    }
    items.iter().map(f).collect()
}

/// Fold each chunk of `items` into a fresh state and merge the states.
pub fn fold_reduce<T, S, I, F, M>(items: &[T], init: I, fold: F, merge: M) -> S
where
    T: Sync,
    S: Send,
    I: Fn() -> S + Sync + Send,
    F: Fn(S, &T) -> S + Sync + Send,
    M: Fn(S, S) -> S + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if is_parallel() && items.len() >= MIN_PARALLEL_LEN {
        use rayon::prelude::*;
        return items
            .par_iter()
            .fold(&init, &fold)
            .reduce(&init, &merge);
    }
    let _ = &merge;
    items.iter().fold(init(), fold)
}

pub fn join<A, B, RA, RB>(a: A, b: B) -> (RA, RB)
where
    A: FnOnce() -> RA + Send,
    B: FnOnce() -> RB + Send,
    RA: Send,
    RB: Send,
{
    #[cfg(feature = "parallel")]
    if is_parallel() {
        return rayon::join(a, b);
    }
    (a(), b())
}
