//! Data-parallel helpers. With the `parallel` feature they run on rayon unless the
//! calling thread has switched to sequential mode; without it they are plain loops.
//! Results never depend on the mode: searches return the first hit in index order.

use std::cell::Cell;

thread_local! {
    static SEQUENTIAL: Cell<bool> = const { Cell::new(false) };
}

/// Runs `f` with parallel helpers disabled on this thread.
pub fn sequential<R>(f: impl FnOnce() -> R) -> R {
    let prev = SEQUENTIAL.with(|c| c.replace(true));
    let out = f();
    SEQUENTIAL.with(|c| c.set(prev));
    out
}

pub fn is_parallel() -> bool {
    cfg!(feature = "parallel") && !SEQUENTIAL.with(Cell::get)
}

/// `items.iter().map(f).collect()`, possibly in parallel.
pub fn map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if is_parallel() {
        use rayon::prelude::*;
        return items.par_iter().map(f).collect();
    }
    items.iter().map(f).collect()
}

/// First `Some` in index order.
pub fn find_map_first<T, R, F>(items: &[T], f: F) -> Option<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> Option<R> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if is_parallel() {
        use rayon::prelude::*;
        return items.par_iter().find_map_first(f);
    }
    items.iter().find_map(f)
}

/// Applies `f` to each index in `0..n`, possibly in parallel.
pub fn map_range<R, F>(n: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    let idx: Vec<usize> = (0..n).collect();
    map(&idx, |&i| f(i))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_hit_is_deterministic() {
        let v: Vec<u32> = (0..1000).collect();
        let hit = find_map_first(&v, |&x| (x % 97 == 96).then_some(x));
        assert_eq!(hit, Some(96));
        assert_eq!(sequential(|| find_map_first(&v, |&x| (x % 97 == 96).then_some(x))), Some(96));
        assert!(!sequential(is_parallel));
    }

    #[test]
    fn map_preserves_order() {
        assert_eq!(map_range(5, |i| i * i), vec![0, 1, 4, 9, 16]);
    }
}
