//! Order-preserving map over independent work items.
//!
//! With the `parallel` feature the items run on a rayon pool, otherwise in
//! sequence. Results come back in input order either way.

/// `threads = None` uses the global pool; `Some(1)` forces sequential work.
#[cfg(feature = "parallel")]
pub fn par_map<T, R, F>(items: &[T], threads: Option<usize>, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    use rayon::prelude::*;
    match threads {
        Some(1) => items.iter().map(f).collect(),
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| items.par_iter().map(&f).collect()),
            Err(_) => items.par_iter().map(f).collect(),
        },
        None => items.par_iter().map(f).collect(),
    }
}

#[cfg(not(feature = "parallel"))]
pub fn par_map<T, R, F>(items: &[T], _threads: Option<usize>, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    items.iter().map(f).collect()
}

pub fn is_parallel() -> bool {
    cfg!(feature = "parallel")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keeps_order() {
        let xs: Vec<u64> = (0..1000).collect();
        let sq = par_map(&xs, None, |x| x * x);
        assert_eq!(sq, xs.iter().map(|x| x * x).collect::<Vec<_>>());
        assert_eq!(par_map(&xs, Some(3), |x| x + 1)[999], 1000);
        assert_eq!(par_map(&xs, Some(1), |x| x + 1)[0], 1);
    }
}
