//! Order-preserving map over independent work items, parallel when the
//! `parallel` feature is on, plain iteration otherwise.  Results always come
//! back in input order, so downstream reports are identical either way.

#[cfg(feature = "parallel")]
pub fn ordered_map<T, U, F>(items: Vec<T>, workers: Option<usize>, f: F) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> U + Send + Sync,
{
    use rayon::prelude::*;
    match workers {
        Some(w) if w >= 1 => {
            match rayon::ThreadPoolBuilder::new().num_threads(w).build() {
                Ok(pool) => pool.install(|| items.into_par_iter().map(&f).collect()),
                // Pool creation can fail under resource limits; the global
                // pool gives the same answers.
                Err(_) => items.into_par_iter().map(&f).collect(),
            }
        }
        _ => items.into_par_iter().map(&f).collect(),
    }
}

#[cfg(not(feature = "parallel"))]
pub fn ordered_map<T, U, F>(items: Vec<T>, _workers: Option<usize>, f: F) -> Vec<U>
where
    F: Fn(T) -> U,
{
    items.into_iter().map(f).collect()
}
