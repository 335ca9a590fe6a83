use rand::seq::index;
use rand_distr::{Binomial, Distribution};

use super::target_set::{Provenance, TargetSet};
use crate::error::{Error, Result};
use crate::seeding::{derive, stream_rng, tag};

/// Largest dimension for which sets are enumerated explicitly.
pub const EXPLICIT_MAX_DIM: u32 = 36;

/// Largest explicit set that will be materialized.
pub const MAX_SET_SIZE: u64 = 1 << 28;

fn check_dim(n: u32) -> Result<()> {
    if n == 0 {
        return Err(Error::domain("dimension must be positive"));
    }
    if n > EXPLICIT_MAX_DIM {
        return Err(Error::resource(
            format!("explicit set in dimension {n}"),
            1u128 << n,
            1u128 << EXPLICIT_MAX_DIM,
        ));
    }
    Ok(())
}

fn subset(n: u32, size: u64, seed: u64, stream_tag: u64) -> Result<Vec<u64>> {
    if size > MAX_SET_SIZE {
        return Err(Error::resource("explicit set size", size as u128, MAX_SET_SIZE as u128));
    }
    let mut rng = stream_rng(derive(seed, stream_tag), 1);
    let total = 1usize << n;
    Ok(index::sample(&mut rng, total, size as usize)
        .into_iter()
        .map(|i| i as u64)
        .collect())
}

/// Each vertex included independently with probability `rho`.
///
/// Drawn as `|A| ~ Binomial(2^n, rho)` followed by a uniform subset of
/// that size, which has the same law as independent inclusion.
pub fn percolation_cloud(n: u32, rho: f64, seed: u64) -> Result<TargetSet> {
    check_dim(n)?;
    if !(0.0..=1.0).contains(&rho) {
        return Err(Error::domain(format!("density {rho} outside [0, 1]")));
    }
    let mut rng = stream_rng(derive(seed, tag::PERCOLATION), 0);
    let size = Binomial::new(1u64 << n, rho)
        .map_err(|e| Error::domain(e.to_string()))?
        .sample(&mut rng);
    let bits = subset(n, size, seed, tag::PERCOLATION)?;
    TargetSet::from_bits(n, bits, Provenance::Percolation { rho, seed })
}

/// A uniformly random `size`-subset of the hypercube.
pub fn sample_without_replacement(n: u32, size: u64, seed: u64) -> Result<TargetSet> {
    check_dim(n)?;
    if size == 0 || size > 1u64 << n {
        return Err(Error::domain(format!("sample size {size} outside 1..=2^{n}")));
    }
    let bits = subset(n, size, seed, tag::SAMPLING)?;
    TargetSet::from_bits(n, bits, Provenance::Sampled { size, seed })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn percolation_extremes() {
        assert!(percolation_cloud(10, 0.0, 1).unwrap().is_empty());
        assert_eq!(percolation_cloud(10, 1.0, 1).unwrap().len(), 1024);
        assert!(percolation_cloud(10, 1.5, 1).is_err());
        assert!(matches!(percolation_cloud(37, 0.1, 1), Err(Error::Resource { .. })));
    }

    #[test]
    fn percolation_size_concentrates() {
        let n = 20;
        let rho = 2f64.powi(-n) * 1024.0;
        let sigma = (2f64.powi(n) * rho * (1.0 - rho)).sqrt();
        for seed in 0..20 {
            let a = percolation_cloud(n as u32, rho, seed).unwrap();
            assert!((a.len() as f64 - 1024.0).abs() <= 5.0 * sigma);
        }
    }

    #[test]
    fn generation_is_deterministic() {
        let a = percolation_cloud(16, 0.01, 9).unwrap();
        let b = percolation_cloud(16, 0.01, 9).unwrap();
        assert_eq!(a.members(), b.members());
        let c = sample_without_replacement(16, 100, 9).unwrap();
        assert_eq!(c.members(), sample_without_replacement(16, 100, 9).unwrap().members());
        assert_ne!(c.members(), sample_without_replacement(16, 100, 10).unwrap().members());
    }

    #[test]
    fn sampling_sizes() {
        assert_eq!(sample_without_replacement(6, 64, 3).unwrap().len(), 64);
        assert_eq!(sample_without_replacement(12, 500, 3).unwrap().len(), 500);
        assert!(sample_without_replacement(6, 65, 3).is_err());
        assert!(sample_without_replacement(6, 0, 3).is_err());
    }

    #[test]
    fn single_draw_is_uniform() {
        let n = 8;
        let draws = 100_000u64;
        let mut counts = vec![0u64; 256];
        for seed in 0..draws {
            let s = sample_without_replacement(n, 1, seed).unwrap();
            counts[s.members()[0].bits() as usize] += 1;
        }
        let p = 1.0 / 256.0;
        let sigma = (draws as f64 * p * (1.0 - p)).sqrt();
        for c in counts {
            assert!((c as f64 - draws as f64 * p).abs() <= 5.0 * sigma);
        }
    }
}
