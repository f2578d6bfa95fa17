//! Shared plumbing: a deterministic fork-join helper.

use std::sync::atomic::{AtomicUsize, Ordering};

/// Number of workers to use: an explicit request, else the
/// `COMPOUND_RENDER_THREADS` environment variable, else the machine's
/// parallelism.
pub fn worker_count(requested: Option<usize>) -> usize {
    if let Some(n) = requested {
        return n.max(1);
    }
    if let Ok(v) = std::env::var("COMPOUND_RENDER_THREADS") {
        if let Ok(n) = v.trim().parse::<usize>() {
            return n.max(1);
        }
    }
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

/// Maps `f` over `0..n` on `workers` threads and collects the results in
/// index order. Work is pulled from a shared counter, so scheduling varies,
/// but the output only depends on `f` and `n`.
pub fn parallel_map<T, F>(n: usize, workers: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync,
{
    let workers = workers.max(1).min(n.max(1));
    if workers <= 1 || n <= 1 {
        return (0..n).map(f).collect();
    }
    let mut slots: Vec<Option<T>> = (0..n).map(|_| None).collect();
    let next = AtomicUsize::new(0);
    let slot_ptr = SendPtr(slots.as_mut_ptr());
    std::thread::scope(|scope| {
        for _ in 0..workers {
            let f = &f;
            let next = &next;
            let slot_ptr = &slot_ptr;
            scope.spawn(move || loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= n {
                    break;
                }
                let value = f(i);
                // Each index is claimed exactly once, so the write is unique.
                unsafe { *slot_ptr.0.add(i) = Some(value) };
            });
        }
    });
    slots.into_iter().map(|s| s.expect("worker filled every slot")).collect()
}

struct SendPtr<T>(*mut T);
unsafe impl<T: Send> Sync for SendPtr<T> {}
unsafe impl<T: Send> Send for SendPtr<T> {}
