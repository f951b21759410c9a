//! Execution strategy for the data-parallel enumerations.
//!
//! With the `parallel` feature (on by default) [`Execution::Parallel`] fans work
//! out over the rayon pool; without it, it silently runs sequentially. Every
//! reduction here is order-independent, so both strategies give bit-identical
//! results.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

impl Execution {
    /// Whether this build can actually run in parallel.
    pub fn parallel_available() -> bool {
        cfg!(feature = "parallel")
    }
}

/// Running best for an argmax with ties broken towards the smallest key.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Best {
    pub value: f64,
    pub key: u64,
}

impl Best {
    pub const NONE: Best = Best {
        value: f64::NEG_INFINITY,
        key: u64::MAX,
    };

    #[inline]
    pub fn combine(self, other: Best) -> Best {
        match self.value.total_cmp(&other.value) {
            std::cmp::Ordering::Greater => self,
            std::cmp::Ordering::Less => other,
            std::cmp::Ordering::Equal => {
                if self.key <= other.key {
                    self
                } else {
                    other
                }
            }
        }
    }
}

/// `max_{key in 0..count} eval(key)`, smallest key on ties.
pub fn argmax<F>(count: u64, exec: Execution, eval: F) -> Best
where
    F: Fn(u64) -> f64 + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => (0..count)
            .into_par_iter()
            .map(|key| Best { value: eval(key), key })
            .reduce(|| Best::NONE, Best::combine),
        _ => (0..count).map(|key| Best { value: eval(key), key }).fold(Best::NONE, Best::combine),
    }
}

/// Order-preserving map over `0..count`.
pub fn map_indices<T, F>(count: usize, exec: Execution, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => (0..count).into_par_iter().map(f).collect(),
        _ => (0..count).map(f).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ties_go_to_smallest_key() {
        let f = |k: u64| if k % 3 == 1 { 5.0 } else { k as f64 * 0.001 };
        for exec in [Execution::Sequential, Execution::Parallel] {
            let best = argmax(1000, exec, f);
            assert_eq!(best.key, 1);
            assert_eq!(best.value, 5.0);
        }
    }

    #[test]
    fn strategies_agree() {
        let f = |k: u64| ((k as f64) * 0.37).sin();
        assert_eq!(argmax(5000, Execution::Sequential, f), argmax(5000, Execution::Parallel, f));
        let seq = map_indices(100, Execution::Sequential, |i| i * i);
        let par = map_indices(100, Execution::Parallel, |i| i * i);
        assert_eq!(seq, par);
    }
}
