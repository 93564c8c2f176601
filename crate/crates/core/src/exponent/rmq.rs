//! Sparse-table range-maximum queries over a fixed sample array.
//!
//! Build is O(n log n); each query is two lookups. Rebuilt once per
//! functional iterate, which keeps 50 iterations over 2^17 samples cheap.

pub(crate) struct SparseTableMax {
    len: usize,
    /// levels[p][i] = max of samples[i .. i + 2^p]
    levels: Vec<Vec<f64>>,
}

impl SparseTableMax {
    pub(crate) fn new(samples: &[f64]) -> Self {
        let len = samples.len();
        assert!(len > 0);
        let height = usize::BITS - len.leading_zeros(); // floor(log2(len)) + 1
        let mut levels = Vec::with_capacity(height as usize);
        levels.push(samples.to_vec());
        for p in 1..height as usize {
            let half = 1usize << (p - 1);
            let prev = &levels[p - 1];
            if prev.len() <= half {
                break;
            }
            let row: Vec<f64> = (0..prev.len() - half)
                .map(|i| prev[i].max(prev[i + half]))
                .collect();
            levels.push(row);
        }
        Self { len, levels }
    }

    /// Maximum of `samples[i..=j]`; requires `i <= j < len`.
    pub(crate) fn max_in(&self, i: usize, j: usize) -> f64 {
        debug_assert!(i <= j && j < self.len);
        let k = (usize::BITS - 1 - (j - i + 1).leading_zeros()) as usize; // floor(log2(width))
        let row = &self.levels[k];
        row[i].max(row[j + 1 - (1usize << k)])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn matches_naive_scan() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let samples: Vec<f64> = (0..513).map(|_| rng.gen::<f64>()).collect();
        let table = SparseTableMax::new(&samples);
        for _ in 0..2000 {
            let i = rng.gen_range(0..samples.len());
            let j = rng.gen_range(i..samples.len());
            let naive = samples[i..=j].iter().cloned().fold(f64::MIN, f64::max);
            assert_eq!(table.max_in(i, j), naive);
        }
    }

    #[test]
    fn single_element() {
        let table = SparseTableMax::new(&[3.5]);
        assert_eq!(table.max_in(0, 0), 3.5);
    }
}
