//! Monte Carlo hitting times of the simple random walk and their
//! Kolmogorov-Smirnov distance to the exponential law.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::random_sets::TargetSet;
use crate::seeding::{derive, stream_rng, tag};
use crate::vertex::Vertex;

/// Default censoring cap in units of `m`.
pub const DEFAULT_CAP_FACTOR: f64 = 50.0;

/// Censored mass above which a KS statistic is flagged.
pub const CENSORED_FLAG_FRACTION: f64 = 0.01;

/// Sample of hitting times `H(B \ {x})`, normalized by `m` on access.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HittingEmpirical {
    pub m: f64,
    pub seed: u64,
    pub cap: u64,
    /// Hitting step per trial; `cap` for censored trials.
    pub steps: Vec<u64>,
    pub censored: Vec<bool>,
}

impl HittingEmpirical {
    pub fn trials(&self) -> usize {
        self.steps.len()
    }

    /// Normalized times `H / m`; censored trials report `cap / m`.
    pub fn samples(&self) -> impl Iterator<Item = f64> + '_ {
        self.steps.iter().map(move |&s| s as f64 / self.m)
    }

    pub fn censored_count(&self) -> usize {
        self.censored.iter().filter(|&&c| c).count()
    }

    pub fn censored_fraction(&self) -> f64 {
        if self.steps.is_empty() {
            0.0
        } else {
            self.censored_count() as f64 / self.trials() as f64
        }
    }

    /// `#{H/m >= a} / trials`. Exact for `a m <= cap`.
    pub fn survival(&self, a: f64) -> f64 {
        if self.steps.is_empty() {
            return f64::NAN;
        }
        let threshold = a * self.m;
        let hits = self
            .steps
            .iter()
            .zip(&self.censored)
            .filter(|(&s, &c)| c || s as f64 >= threshold)
            .count();
        hits as f64 / self.trials() as f64
    }
}

/// Runs `trials` walks from `x` until they enter `B \ {x}`, censored after `cap` steps.
///
/// Trial `i` draws from its own stream, so the sample does not depend on
/// the thread count.
pub fn simulate_hitting(
    target: &TargetSet,
    x: Vertex,
    m: f64,
    trials: usize,
    seed: u64,
    cap: Option<u64>,
) -> Result<HittingEmpirical> {
    let n = target.dim();
    if x.dim() != n {
        return Err(Error::domain("start vertex dimension differs from the set"));
    }
    if target.len_excluding(x) == 0 {
        return Err(Error::domain("effective target B \\ {x} is empty"));
    }
    if !(m > 0.0) || !m.is_finite() {
        return Err(Error::domain(format!("time scale must be positive, got {m}")));
    }
    let cap = cap.unwrap_or_else(|| (DEFAULT_CAP_FACTOR * m).ceil() as u64);
    let key = derive(derive(seed, tag::WALK), x.bits());
    let start = x.bits();
    let results: Vec<(u64, bool)> = (0..trials as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(key, i);
            let mut bits = start;
            for t in 1..=cap {
                bits ^= 1u64 << rng.random_range(0..n);
                if bits != start && target.contains_bits(bits) {
                    return (t, false);
                }
            }
            (cap, true)
        })
        .collect();
    let (steps, censored) = results.into_iter().unzip();
    Ok(HittingEmpirical {
        m,
        seed,
        cap,
        steps,
        censored,
    })
}

/// Kolmogorov-Smirnov comparison with `Exp(1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KsResult {
    /// `sup_a |S_hat(a) - e^{-a}|` over `0 <= a <= cap/m`.
    pub statistic: f64,
    pub censored_fraction: f64,
    /// More than 1% of trials were censored.
    pub flagged: bool,
}

/// Exact KS distance between the empirical survival function and `e^{-a}`.
///
/// `S_hat` is a left-continuous step function, so the supremum is attained
/// at, or approached next to, the distinct sample values.
pub fn ks_to_exponential(e: &HittingEmpirical) -> Result<KsResult> {
    if e.steps.is_empty() {
        return Err(Error::domain("empty sample"));
    }
    let total = e.trials() as f64;
    let mut values: Vec<f64> = e
        .steps
        .iter()
        .zip(&e.censored)
        .filter(|(_, &c)| !c)
        .map(|(&s, _)| s as f64 / e.m)
        .collect();
    values.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let statistic = ks_sorted(&values, total, e.censored_count() as f64, e.cap as f64 / e.m);
    let censored_fraction = e.censored_fraction();
    Ok(KsResult {
        statistic,
        censored_fraction,
        flagged: censored_fraction > CENSORED_FLAG_FRACTION,
    })
}

/// KS statistic for sorted uncensored values, `censored` values known to exceed `horizon`.
fn ks_sorted(values: &[f64], total: f64, censored: f64, horizon: f64) -> f64 {
    let mut sup: f64 = 0.0;
    // Number of samples >= the current value, censored ones included.
    let mut at_least = total;
    let mut prev: f64 = 0.0;
    let mut i = 0;
    while i < values.len() {
        let v = values[i];
        let mut j = i;
        while j < values.len() && values[j] == v {
            j += 1;
        }
        // On (prev, v] the empirical survival is at_least / total.
        let s = at_least / total;
        sup = sup.max((s - (-v).exp()).abs()).max((s - (-prev).exp()).abs());
        at_least -= (j - i) as f64;
        prev = v;
        i = j;
    }
    // Beyond the last value only censored mass remains.
    let s = censored / total;
    let end = if censored > 0.0 { horizon } else { f64::INFINITY };
    sup = sup.max((s - (-prev).exp()).abs());
    if end.is_finite() {
        sup = sup.max((s - (-end).exp()).abs());
    }
    sup
}

/// Dvoretzky-Kiefer-Wolfowitz half-width at confidence `1 - delta`.
pub fn dkw_band(trials: usize, delta: f64) -> f64 {
    ((2.0 / delta).ln() / (2.0 * trials as f64)).sqrt()
}

/// One row of the plot-ready survival curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvePoint {
    pub a: f64,
    pub empirical_survival: f64,
    pub exp_a: f64,
    /// Largest deviation seen on the grid up to and including `a`.
    pub ks_running: f64,
}

/// Empirical survival against `e^{-a}` on `a = 0, step, ..., a_max`.
pub fn survival_curve(e: &HittingEmpirical, step: f64, a_max: f64) -> Vec<CurvePoint> {
    let points = (a_max / step).round() as usize;
    let mut running: f64 = 0.0;
    (0..=points)
        .map(|i| {
            let a = i as f64 * step;
            let s = e.survival(a);
            let exp_a = (-a).exp();
            running = running.max((s - exp_a).abs());
            CurvePoint {
                a,
                empirical_survival: s,
                exp_a,
                ks_running: running,
            }
        })
        .collect()
}

/// `count` seeded uniform start vertices.
pub fn sample_starts(n: u32, count: usize, seed: u64) -> Result<Vec<Vertex>> {
    let mut rng = stream_rng(derive(seed, tag::START_VERTICES), 0);
    let mask = crate::vertex::low_mask(n);
    (0..count)
        .map(|_| Vertex::new(n, rng.random::<u64>() & mask))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_hitting::{full_survival, lumped_survival};
    use crate::random_sets::{sample_without_replacement, Provenance};
    use rand_distr::{Distribution, Exp1};

    fn empirical_from(values: &[f64]) -> HittingEmpirical {
        // m = 1e6 makes steps/m reproduce the values to 1e-6.
        let m = 1e6;
        HittingEmpirical {
            m,
            seed: 0,
            cap: u64::MAX,
            steps: values.iter().map(|v| (v * m).round() as u64).collect(),
            censored: vec![false; values.len()],
        }
    }

    #[test]
    fn ks_of_exponential_sample_is_small() {
        let mut rng = stream_rng(99, 0);
        let trials = 100_000;
        let values: Vec<f64> = (0..trials).map(|_| Exp1.sample(&mut rng)).collect();
        let ks = ks_to_exponential(&empirical_from(&values)).unwrap();
        assert!(ks.statistic <= 1.63 / (trials as f64).sqrt(), "{}", ks.statistic);
        assert!(!ks.flagged);
    }

    #[test]
    fn ks_degenerate_and_empty() {
        let ks = ks_to_exponential(&empirical_from(&[0.0; 10])).unwrap();
        assert!((ks.statistic - 1.0).abs() < 1e-12);
        assert!(ks_to_exponential(&empirical_from(&[])).is_err());
    }

    #[test]
    fn ks_matches_brute_force_grid() {
        let values = [0.1, 0.1, 0.4, 1.3, 2.0, 2.0, 2.0, 5.5];
        let e = empirical_from(&values);
        let ks = ks_to_exponential(&e).unwrap().statistic;
        let mut brute: f64 = 0.0;
        for i in 0..=200_000 {
            let a = i as f64 * 1e-4;
            brute = brute.max((e.survival(a) - (-a).exp()).abs());
        }
        assert!(ks >= brute - 1e-12 && ks - brute < 1e-3, "ks={ks} brute={brute}");
    }

    #[test]
    fn empty_effective_target_is_an_error() {
        let set = TargetSet::from_bits(6, [5], Provenance::Explicit).unwrap();
        let x = Vertex::new(6, 5).unwrap();
        assert!(matches!(simulate_hitting(&set, x, 10.0, 10, 1, None), Err(Error::Domain(_))));
    }

    #[test]
    fn simulation_is_deterministic_across_thread_counts() {
        let set = sample_without_replacement(10, 8, 4).unwrap();
        let x = Vertex::origin(10);
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| simulate_hitting(&set, x, 128.0, 2000, 17, None).unwrap())
        };
        assert_eq!(run(1), run(3));
        let other = simulate_hitting(&set, x, 128.0, 2000, 18, None).unwrap();
        assert_ne!(run(1).steps, other.steps);
    }

    #[test]
    fn survival_is_monotone_and_starts_at_one() {
        let set = sample_without_replacement(8, 4, 2).unwrap();
        let e = simulate_hitting(&set, Vertex::origin(8), 64.0, 3000, 5, None).unwrap();
        assert_eq!(e.survival(0.0), 1.0);
        let mut last = 1.0;
        for i in 0..100 {
            let s = e.survival(i as f64 * 0.1);
            assert!(s <= last);
            last = s;
        }
    }

    #[test]
    fn censoring_is_recorded() {
        let set = TargetSet::from_bits(16, [0xffff], Provenance::Explicit).unwrap();
        let e = simulate_hitting(&set, Vertex::origin(16), 1000.0, 200, 3, Some(5)).unwrap();
        assert_eq!(e.censored_count(), 200);
        let ks = ks_to_exponential(&e).unwrap();
        assert!(ks.flagged);
    }

    #[test]
    fn empirical_matches_lumped_oracle() {
        let n = 10;
        let set = TargetSet::from_bits(n, [0], Provenance::Explicit).unwrap();
        let x = Vertex::at_distance(n, 10).unwrap();
        let m = 1024.0;
        let trials = 20_000;
        let e = simulate_hitting(&set, x, m, trials, 7, None).unwrap();
        let exact = lumped_survival(n, 10, 4 * 1024).unwrap();
        let tol = 3.0 / (trials as f64).sqrt();
        for i in 0..=40 {
            let a = i as f64 * 0.1;
            let want = exact.at_scaled(a, m).unwrap();
            assert!((e.survival(a) - want).abs() <= tol, "a={a}");
        }
    }

    #[test]
    fn empirical_within_dkw_band_of_full_oracle() {
        let n = 9;
        let set = sample_without_replacement(n, 6, 12).unwrap();
        let x = Vertex::new(n, 0x1a5).unwrap();
        let m = 512.0 / 6.0;
        let trials = 20_000;
        let e = simulate_hitting(&set, x, m, trials, 8, None).unwrap();
        let exact = full_survival(&set, x, 6 * 86).unwrap();
        let band = dkw_band(trials, 1e-3);
        for i in 0..=50 {
            let a = i as f64 * 0.1;
            let want = exact.at_scaled(a, m).unwrap();
            assert!((e.survival(a) - want).abs() <= band, "a={a}");
        }
    }

    #[test]
    fn curve_rows() {
        let set = sample_without_replacement(8, 4, 2).unwrap();
        let e = simulate_hitting(&set, Vertex::origin(8), 64.0, 1000, 5, None).unwrap();
        let rows = survival_curve(&e, 0.5, 3.0);
        assert_eq!(rows.len(), 7);
        assert_eq!(rows[0].empirical_survival, 1.0);
        assert!(rows.windows(2).all(|w| w[1].ks_running >= w[0].ks_running));
    }

    #[test]
    fn starts_are_seeded() {
        let a = sample_starts(20, 32, 1).unwrap();
        assert_eq!(a, sample_starts(20, 32, 1).unwrap());
        assert_ne!(a, sample_starts(20, 32, 2).unwrap());
        assert!(a.iter().all(|v| v.dim() == 20));
    }
}
