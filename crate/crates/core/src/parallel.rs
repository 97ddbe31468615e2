//! Deterministic work distribution over scoped threads.
//!
//! Results are returned in input order no matter how items are scheduled,
//! so parallelism never changes outputs. The pool size is capped by the
//! `CONVEXCHECK_THREADS` environment variable.

use std::sync::atomic::{AtomicUsize, Ordering};

/// Number of worker threads to use.
pub fn thread_count() -> usize {
    if let Ok(v) = std::env::var("CONVEXCHECK_THREADS") {
        if let Ok(n) = v.trim().parse::<usize>() {
            return n.max(1);
        }
    }
    std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
}

/// Applies `f` to every item, in parallel when the batch is large enough.
///
/// Output order matches input order. Small batches run inline: the work
/// per item in this crate is far below thread spawn cost at that scale.
pub fn parallel_map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync,
{
    let threads = thread_count().min(items.len().max(1));
    if threads <= 1 || items.len() < 32 {
        return items.iter().map(&f).collect();
    }
    let next = AtomicUsize::new(0);
    let mut slots: Vec<Option<R>> = Vec::with_capacity(items.len());
    slots.resize_with(items.len(), || None);
    let slots_ptr = SendPtr(slots.as_mut_ptr());
    std::thread::scope(|scope| {
        for _ in 0..threads {
            let next = &next;
            let f = &f;
            let slots_ptr = &slots_ptr;
            scope.spawn(move || loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= items.len() {
                    break;
                }
                let out = f(&items[i]);
                // Each index is claimed by exactly one worker.
                unsafe { *slots_ptr.0.add(i) = Some(out) };
            });
        }
    });
    slots.into_iter().map(|s| s.expect("slot filled")).collect()
}

struct SendPtr<R>(*mut Option<R>);
unsafe impl<R: Send> Sync for SendPtr<R> {}
