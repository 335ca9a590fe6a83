//! Random Hopping Time dynamics of the Random Energy Model.
//!
//! The continuous-time process `X_n` is the simple random walk `Y_n` run on
//! the clock `S_n(k) = sum_{i<k} e_i exp(beta sqrt(n) E_{Y_n(i)})`, with
//! `X_n(t) = Y_n(max{k : S_n(k) <= t})`. Time is measured on that clock,
//! for both `S_n` and `t_w`.

use std::collections::HashMap;
use std::f64::consts::{LN_2, PI};

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::seeding::{derive, stream_rng, tag};
use crate::vertex::Vertex;

/// Fraction of walks allowed to run out of budget before an estimate is flagged.
pub const EXHAUSTED_FLAG_FRACTION: f64 = 0.05;

/// Default per-walk step budget for the two-point function.
pub const DEFAULT_STEP_BUDGET: u64 = 10_000_000;

/// `beta_c = sqrt(2 ln 2)`.
pub fn beta_c() -> f64 {
    (2.0 * LN_2).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RemConfig {
    pub n: u32,
    pub beta: f64,
    pub alpha: f64,
    pub theta: f64,
}

impl RemConfig {
    pub fn new(n: u32, alpha: f64, beta: f64, theta: f64) -> Result<Self> {
        if n == 0 || n > crate::vertex::MAX_DIM {
            return Err(Error::domain(format!("dimension must be in 1..=64, got {n}")));
        }
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::domain(format!("alpha must lie in (0,1), got {alpha}")));
        }
        if !(beta >= 0.0) || !beta.is_finite() {
            return Err(Error::domain(format!("beta must be finite and >= 0, got {beta}")));
        }
        if !(theta > 0.0) || !theta.is_finite() {
            return Err(Error::domain(format!("theta must be positive, got {theta}")));
        }
        Ok(Self { n, beta, alpha, theta })
    }

    /// Sets `beta` so that `alpha beta / beta_c = ratio`.
    pub fn from_beta_ratio(n: u32, alpha: f64, ratio: f64, theta: f64) -> Result<Self> {
        if !(ratio >= 0.0) {
            return Err(Error::domain(format!("beta ratio must be >= 0, got {ratio}")));
        }
        Self::new(n, alpha, ratio * beta_c() / alpha, theta)
    }

    pub fn with_theta(self, theta: f64) -> Result<Self> {
        Self::new(self.n, self.alpha, self.beta, theta)
    }

    pub fn beta_c(&self) -> f64 {
        beta_c()
    }

    /// `0 < alpha beta < beta_c`.
    pub fn regime_valid(&self) -> bool {
        let ab = self.alpha * self.beta;
        ab > 0.0 && ab < beta_c()
    }

    /// `beta sqrt(n)`, the energy-to-log-holding-time factor.
    pub fn energy_scale(&self) -> f64 {
        self.beta * (self.n as f64).sqrt()
    }

    /// `t_w(n) = (alpha beta sqrt(2 pi n))^{-1/alpha} exp(alpha beta^2 n)`.
    pub fn t_w(&self) -> f64 {
        self.ln_t_w().exp()
    }

    pub fn ln_t_w(&self) -> f64 {
        let n = self.n as f64;
        let ab = self.alpha * self.beta;
        -(ab * (2.0 * PI * n).sqrt()).ln() / self.alpha + self.alpha * self.beta * self.beta * n
    }

    /// `r(n) = exp(alpha^2 beta^2 n / 2)`.
    pub fn r(&self) -> f64 {
        let ab = self.alpha * self.beta;
        (ab * ab * self.n as f64 / 2.0).exp()
    }
}

/// A disorder realization `E`, drawn lazily per vertex and cached.
///
/// `E_x` depends only on the disorder key and `x`, so independent walks
/// over the same key see the same landscape.
#[derive(Debug, Clone)]
pub struct Disorder {
    source: EnergySource,
    cache: HashMap<u64, f64>,
}

#[derive(Debug, Clone, Copy)]
enum EnergySource {
    Gaussian { key: u64 },
    Constant(f64),
}

impl Disorder {
    /// I.i.d. standard normal energies keyed by `seed`.
    pub fn gaussian(seed: u64) -> Self {
        Self {
            source: EnergySource::Gaussian {
                key: derive(seed, tag::DISORDER),
            },
            cache: HashMap::new(),
        }
    }

    /// Every energy equal to `e`.
    pub fn constant(e: f64) -> Self {
        Self {
            source: EnergySource::Constant(e),
            cache: HashMap::new(),
        }
    }

    pub fn energy(&mut self, v: Vertex) -> f64 {
        match self.source {
            EnergySource::Constant(e) => e,
            EnergySource::Gaussian { key } => *self
                .cache
                .entry(v.bits())
                .or_insert_with(|| StandardNormal.sample(&mut stream_rng(key, v.bits()))),
        }
    }

    /// Number of distinct vertices whose energy has been drawn.
    pub fn visited(&self) -> usize {
        self.cache.len()
    }

    pub fn energies(&self) -> &HashMap<u64, f64> {
        &self.cache
    }
}

/// One simulated clock: `jump_times[k] = S_n(k)` and `walk[k] = Y_n(k)` for `k = 0..=K`.
#[derive(Debug, Clone)]
pub struct ClockTrajectory {
    pub jump_times: Vec<f64>,
    pub walk: Vec<Vertex>,
    /// Energies of the visited vertices, keyed by vertex bits.
    pub energies: HashMap<u64, f64>,
}

impl ClockTrajectory {
    pub fn steps(&self) -> usize {
        self.walk.len() - 1
    }

    pub fn horizon(&self) -> f64 {
        *self.jump_times.last().unwrap()
    }
}

fn walk_rng(seed: u64, disorder_index: u64, walk_index: u64) -> ChaCha8Rng {
    stream_rng(derive(derive(seed, tag::REM_WALK), disorder_index), walk_index)
}

fn disorder_seed(seed: u64, disorder_index: u64) -> u64 {
    derive(seed, disorder_index)
}

/// Simulates `K` steps of `Y_n` from the origin and the clock `S_n(0..=K)`
/// for the disorder realization keyed by `seed`.
pub fn clock_process(cfg: &RemConfig, k: usize, seed: u64) -> Result<ClockTrajectory> {
    let mut disorder = Disorder::gaussian(disorder_seed(seed, 0));
    clock_process_in(cfg, k, &mut disorder, &mut walk_rng(seed, 0, 0))
}

/// [`clock_process`] over a caller-supplied disorder and walk RNG.
pub fn clock_process_in(
    cfg: &RemConfig,
    k: usize,
    disorder: &mut Disorder,
    rng: &mut ChaCha8Rng,
) -> Result<ClockTrajectory> {
    if k == 0 {
        return Err(Error::domain("clock needs K >= 1"));
    }
    let scale = cfg.energy_scale();
    let mut y = Vertex::origin(cfg.n);
    let mut walk = Vec::with_capacity(k + 1);
    let mut jump_times = Vec::with_capacity(k + 1);
    let mut s = 0.0;
    walk.push(y);
    jump_times.push(s);
    for _ in 0..k {
        let e: f64 = Exp1.sample(rng);
        s += e * (scale * disorder.energy(y)).exp();
        y = y.step(rng.random_range(0..cfg.n));
        walk.push(y);
        jump_times.push(s);
    }
    let energies = disorder.energies().clone();
    Ok(ClockTrajectory {
        jump_times,
        walk,
        energies,
    })
}

/// `X_n(t) = Y_n(max{k : S_n(k) <= t})`.
pub fn position_at(traj: &ClockTrajectory, t: f64) -> Result<Vertex> {
    if !(t >= 0.0) {
        return Err(Error::domain(format!("time must be >= 0, got {t}")));
    }
    if t > traj.horizon() {
        return Err(Error::domain(format!(
            "time {t} is beyond the simulated horizon {}",
            traj.horizon()
        )));
    }
    let k = traj.jump_times.partition_point(|&s| s <= t) - 1;
    Ok(traj.walk[k])
}

/// Outcome of one walk for the two-point function.
#[derive(Debug, Clone, Copy, PartialEq)]
enum WalkOutcome {
    Done,
    Exhausted,
}

/// Runs one walk until its clock passes every `(1+theta) t_w` and records
/// coincidences in `same`.
fn two_point_walk(
    cfg: &RemConfig,
    thetas: &[f64],
    disorder: &mut Disorder,
    rng: &mut ChaCha8Rng,
    budget: u64,
    same: &mut [bool],
) -> WalkOutcome {
    let t_w = cfg.t_w();
    let scale = cfg.energy_scale();
    // Checkpoints t_w, (1+theta_j) t_w, sorted ascending.
    let mut order: Vec<usize> = (0..thetas.len()).collect();
    order.sort_by(|&a, &b| thetas[a].partial_cmp(&thetas[b]).unwrap());
    let mut y = Vertex::origin(cfg.n);
    let mut s = 0.0;
    let mut at_t_w: Option<Vertex> = None;
    let mut next = 0;
    for _ in 0..budget {
        let e: f64 = Exp1.sample(rng);
        let s_next = s + e * (scale * disorder.energy(y)).exp();
        // X equals y on [s, s_next).
        if at_t_w.is_none() && s_next > t_w {
            at_t_w = Some(y);
        }
        if let Some(base) = at_t_w {
            while next < order.len() && s_next > (1.0 + thetas[order[next]]) * t_w {
                same[order[next]] = y == base;
                next += 1;
            }
            if next == order.len() {
                return WalkOutcome::Done;
            }
        }
        s = s_next;
        y = y.step(rng.random_range(0..cfg.n));
    }
    WalkOutcome::Exhausted
}

/// Monte Carlo estimate of `R_n(t_w, (1+theta) t_w)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AgingEstimate {
    pub theta: f64,
    pub estimate: f64,
    /// Standard error across disorder realizations (across walks when quenched).
    pub stderr: f64,
    /// Standard deviation of the per-disorder estimates.
    pub disorder_spread: f64,
    /// `Asl_alpha(1/(1+theta))`.
    pub target: f64,
    pub exhausted_fraction: f64,
    pub flagged: bool,
    pub regime_valid: bool,
    pub disorder: usize,
    pub walks: usize,
    pub quenched: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoPointOptions {
    /// Number of disorder realizations; ignored when `quenched`.
    pub disorder: usize,
    /// Walks per disorder realization.
    pub walks: usize,
    pub seed: u64,
    /// Keep one disorder realization (index 0) instead of averaging.
    pub quenched: bool,
    pub step_budget: u64,
}

impl TwoPointOptions {
    pub fn new(disorder: usize, walks: usize, seed: u64) -> Self {
        Self {
            disorder,
            walks,
            seed,
            quenched: false,
            step_budget: DEFAULT_STEP_BUDGET,
        }
    }
}

/// `R_n` at one `theta = cfg.theta`.
pub fn two_point(cfg: &RemConfig, opts: &TwoPointOptions) -> Result<AgingEstimate> {
    Ok(two_point_thetas(cfg, &[cfg.theta], opts)?.remove(0))
}

/// `R_n` at several `theta`, all read off the same walks.
pub fn two_point_thetas(cfg: &RemConfig, thetas: &[f64], opts: &TwoPointOptions) -> Result<Vec<AgingEstimate>> {
    if thetas.is_empty() {
        return Err(Error::domain("no theta values"));
    }
    for &theta in thetas {
        cfg.with_theta(theta)?;
    }
    let disorder_count = if opts.quenched { 1 } else { opts.disorder };
    if disorder_count == 0 || opts.walks == 0 {
        return Err(Error::domain("disorder and walk counts must be positive"));
    }
    // Per disorder realization: coincidence counts per theta, completed and exhausted walks.
    let per_disorder: Vec<(Vec<u64>, u64, u64)> = (0..disorder_count as u64)
        .into_par_iter()
        .map(|d| {
            let mut disorder = Disorder::gaussian(disorder_seed(opts.seed, d));
            let mut counts = vec![0u64; thetas.len()];
            let mut done = 0;
            let mut exhausted = 0;
            let mut same = vec![false; thetas.len()];
            for w in 0..opts.walks as u64 {
                let mut rng = walk_rng(opts.seed, d, w);
                match two_point_walk(cfg, thetas, &mut disorder, &mut rng, opts.step_budget, &mut same) {
                    WalkOutcome::Done => {
                        done += 1;
                        for (c, &s) in counts.iter_mut().zip(&same) {
                            *c += s as u64;
                        }
                    }
                    WalkOutcome::Exhausted => exhausted += 1,
                }
            }
            (counts, done, exhausted)
        })
        .collect();

    let total_walks = (disorder_count * opts.walks) as f64;
    let exhausted: u64 = per_disorder.iter().map(|p| p.2).sum();
    let exhausted_fraction = exhausted as f64 / total_walks;
    let mut out = Vec::with_capacity(thetas.len());
    for (j, &theta) in thetas.iter().enumerate() {
        let hits: u64 = per_disorder.iter().map(|p| p.0[j]).sum();
        let done: u64 = per_disorder.iter().map(|p| p.1).sum();
        let estimate = if done == 0 { f64::NAN } else { hits as f64 / done as f64 };
        let (stderr, disorder_spread) = if opts.quenched || disorder_count == 1 {
            let p = estimate;
            ((p * (1.0 - p) / done.max(1) as f64).sqrt(), 0.0)
        } else {
            let means: Vec<f64> = per_disorder
                .iter()
                .filter(|p| p.1 > 0)
                .map(|p| p.0[j] as f64 / p.1 as f64)
                .collect();
            let k = means.len() as f64;
            let mean = means.iter().sum::<f64>() / k;
            let var = means.iter().map(|m| (m - mean).powi(2)).sum::<f64>() / (k - 1.0).max(1.0);
            ((var / k).sqrt(), var.sqrt())
        };
        out.push(AgingEstimate {
            theta,
            estimate,
            stderr,
            disorder_spread,
            target: asl(cfg.alpha, 1.0 / (1.0 + theta))?,
            exhausted_fraction,
            flagged: exhausted_fraction > EXHAUSTED_FLAG_FRACTION,
            regime_valid: cfg.regime_valid(),
            disorder: disorder_count,
            walks: opts.walks,
            quenched: opts.quenched,
        });
    }
    Ok(out)
}

/// Generalised arcsine law `Asl_alpha(z) = I_z(alpha, 1 - alpha)`.
pub fn asl(alpha: f64, z: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::domain(format!("alpha must lie in (0,1), got {alpha}")));
    }
    if !(0.0..=1.0).contains(&z) {
        return Err(Error::domain(format!("z must lie in [0,1], got {z}")));
    }
    statrs::function::beta::checked_beta_reg(alpha, 1.0 - alpha, z).map_err(|e| Error::domain(e.to_string()))
}

/// Empirical tail of `S_n(floor(r(n))) / t_w(n)` and its log-log slope.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClockTail {
    /// Sorted samples of `S_n(floor(r(n))) / t_w(n)`.
    pub ratios: Vec<f64>,
    /// `(u, P[ratio > u])` on a log grid over the fitting window.
    pub tail: Vec<(f64, f64)>,
    /// Least-squares slope of `ln P[ratio > u]` against `ln u`; NaN with fewer than two usable points.
    pub slope: f64,
}

/// Samples the rescaled clock over `disorder x walks` pairs and fits the tail on `[u_lo, u_hi]`.
pub fn clock_tail(cfg: &RemConfig, opts: &TwoPointOptions, u_lo: f64, u_hi: f64, points: usize) -> Result<ClockTail> {
    if !(u_lo > 0.0 && u_hi > u_lo) || points < 2 {
        return Err(Error::domain("tail window needs 0 < u_lo < u_hi and at least two points"));
    }
    let disorder_count = if opts.quenched { 1 } else { opts.disorder };
    if disorder_count == 0 || opts.walks == 0 {
        return Err(Error::domain("disorder and walk counts must be positive"));
    }
    let k = (cfg.r().floor() as usize).max(1);
    let t_w = cfg.t_w();
    let mut ratios: Vec<f64> = (0..disorder_count as u64)
        .into_par_iter()
        .flat_map_iter(|d| {
            let mut disorder = Disorder::gaussian(disorder_seed(opts.seed, d));
            (0..opts.walks as u64)
                .map(|w| {
                    let mut rng = walk_rng(opts.seed, d, w);
                    let traj = clock_process_in(cfg, k, &mut disorder, &mut rng).expect("k >= 1");
                    traj.horizon() / t_w
                })
                .collect::<Vec<_>>()
        })
        .collect();
    ratios.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let total = ratios.len() as f64;
    let tail: Vec<(f64, f64)> = (0..points)
        .map(|i| {
            let u = u_lo * (u_hi / u_lo).powf(i as f64 / (points - 1) as f64);
            let above = ratios.len() - ratios.partition_point(|&r| r <= u);
            (u, above as f64 / total)
        })
        .collect();
    let usable: Vec<(f64, f64)> = tail.iter().filter(|p| p.1 > 0.0).map(|&(u, p)| (u.ln(), p.ln())).collect();
    let slope = if usable.len() < 2 {
        f64::NAN
    } else {
        let len = usable.len() as f64;
        let mx = usable.iter().map(|p| p.0).sum::<f64>() / len;
        let my = usable.iter().map(|p| p.1).sum::<f64>() / len;
        let sxy: f64 = usable.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let sxx: f64 = usable.iter().map(|p| (p.0 - mx).powi(2)).sum();
        sxy / sxx
    };
    Ok(ClockTail { ratios, tail, slope })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(n: u32, ratio: f64) -> RemConfig {
        RemConfig::from_beta_ratio(n, 0.5, ratio, 1.0).unwrap()
    }

    #[test]
    fn scales_at_n20() {
        let c = cfg(20, 0.5);
        assert!((c.alpha * c.beta / c.beta_c() - 0.5).abs() < 1e-12);
        assert!(c.regime_valid());
        let ab = c.alpha * c.beta;
        let want = (ab * (2.0 * PI * 20.0).sqrt()).powf(-1.0 / c.alpha) * (c.alpha * c.beta * c.beta * 20.0).exp();
        assert!((c.t_w() / want - 1.0).abs() < 1e-12);
        assert!((c.r() - (ab * ab * 10.0).exp()).abs() < 1e-9);
        assert!(!cfg(20, 1.0).regime_valid());
        assert!(!RemConfig::new(20, 0.5, 0.0, 1.0).unwrap().regime_valid());
    }

    #[test]
    fn config_validation() {
        assert!(RemConfig::new(20, 0.0, 1.0, 1.0).is_err());
        assert!(RemConfig::new(20, 1.0, 1.0, 1.0).is_err());
        assert!(RemConfig::new(20, 0.5, -1.0, 1.0).is_err());
        assert!(RemConfig::new(20, 0.5, 1.0, 0.0).is_err());
        assert!(RemConfig::new(0, 0.5, 1.0, 1.0).is_err());
    }

    #[test]
    fn clock_starts_at_zero_and_increases() {
        let traj = clock_process(&cfg(16, 0.5), 500, 3).unwrap();
        assert_eq!(traj.jump_times[0], 0.0);
        assert!(traj.jump_times.windows(2).all(|w| w[1] > w[0]));
        assert_eq!(traj.walk.len(), 501);
        assert!(traj.walk.windows(2).all(|w| w[0].distance(w[1]) == 1));
        assert!(clock_process(&cfg(16, 0.5), 0, 3).is_err());
    }

    #[test]
    fn energies_are_quenched() {
        let mut a = Disorder::gaussian(9);
        let mut b = Disorder::gaussian(9);
        let v = Vertex::new(20, 12345).unwrap();
        let e = a.energy(v);
        assert_eq!(e, a.energy(v));
        assert_eq!(e, b.energy(v));
        assert_ne!(e, Disorder::gaussian(10).energy(v));
        assert_eq!(a.visited(), 1);
    }

    #[test]
    fn energies_look_standard_normal() {
        let mut d = Disorder::gaussian(1);
        let n = 20_000;
        let xs: Vec<f64> = (0..n).map(|i| d.energy(Vertex::new(20, i).unwrap())).collect();
        let mean = xs.iter().sum::<f64>() / n as f64;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n as f64;
        assert!(mean.abs() < 5.0 / (n as f64).sqrt());
        assert!((var - 1.0).abs() < 5.0 * (2.0 / n as f64).sqrt());
    }

    #[test]
    fn zero_temperature_clock_has_mean_k() {
        let c = RemConfig::new(20, 0.5, 0.0, 1.0).unwrap();
        let k = 100_000;
        let traj = clock_process(&c, k, 4).unwrap();
        let z = (traj.horizon() - k as f64) / (k as f64).sqrt();
        assert!(z.abs() < 5.0, "z = {z}");
    }

    #[test]
    fn zero_energy_clock_is_unit_rate() {
        let c = cfg(20, 0.5);
        let k = 100_000;
        let mut disorder = Disorder::constant(0.0);
        let traj = clock_process_in(&c, k, &mut disorder, &mut walk_rng(5, 0, 0)).unwrap();
        let z = (traj.horizon() / k as f64 - 1.0) * (k as f64).sqrt();
        assert!(z.abs() < 5.0, "z = {z}");
    }

    #[test]
    fn position_is_right_continuous() {
        let traj = clock_process(&cfg(12, 0.5), 50, 8).unwrap();
        assert_eq!(position_at(&traj, 0.0).unwrap(), traj.walk[0]);
        let s1 = traj.jump_times[1];
        assert_eq!(position_at(&traj, s1 * (1.0 - 1e-12)).unwrap(), traj.walk[0]);
        for k in 1..=50 {
            assert_eq!(position_at(&traj, traj.jump_times[k]).unwrap(), traj.walk[k]);
        }
        assert!(position_at(&traj, traj.horizon() * 1.01).is_err());
        assert!(position_at(&traj, -1.0).is_err());
    }

    #[test]
    fn asl_values() {
        assert_eq!(asl(0.3, 0.0).unwrap(), 0.0);
        assert!((asl(0.3, 1.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((asl(0.5, 0.5).unwrap() - 0.5).abs() < 1e-12);
        assert!((asl(0.5, 0.75).unwrap() - 2.0 / 3.0).abs() < 1e-12);
        assert!(asl(1.0, 0.5).is_err());
        assert!(asl(0.5, 1.5).is_err());
    }

    #[test]
    fn asl_is_increasing_and_reflects() {
        for &alpha in &[0.2, 0.5, 0.8] {
            let mut last = -1.0;
            for i in 0..=200 {
                let z = i as f64 / 200.0;
                let v = asl(alpha, z).unwrap();
                assert!(v > last || i == 0);
                last = v;
                assert!((v + asl(1.0 - alpha, 1.0 - z).unwrap() - 1.0).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn two_point_is_a_probability_and_deterministic() {
        let c = cfg(12, 0.5);
        let opts = TwoPointOptions::new(50, 4, 11);
        let a = two_point_thetas(&c, &[0.5, 1.0, 1000.0], &opts).unwrap();
        for e in &a {
            assert!((0.0..=1.0).contains(&e.estimate));
            assert!(!e.flagged);
        }
        assert_eq!(a, two_point_thetas(&c, &[0.5, 1.0, 1000.0], &opts).unwrap());
        assert!(a[2].estimate <= a[0].estimate);
    }

    #[test]
    fn two_point_stable_under_more_walks() {
        let c = cfg(12, 0.5);
        let small = two_point(&c, &TwoPointOptions::new(200, 2, 21)).unwrap();
        let large = two_point(&c, &TwoPointOptions::new(200, 4, 21)).unwrap();
        let se = (small.stderr.powi(2) + large.stderr.powi(2)).sqrt();
        assert!((small.estimate - large.estimate).abs() <= 2.0 * se.max(1e-3) + 0.05);
    }

    #[test]
    fn exhausted_budget_is_flagged() {
        let c = cfg(16, 0.5);
        let mut opts = TwoPointOptions::new(10, 2, 1);
        opts.step_budget = 1;
        let e = two_point(&c, &opts).unwrap();
        assert!(e.flagged);
        assert!(e.exhausted_fraction > 0.5);
    }

    #[test]
    fn quenched_uses_one_realization() {
        let c = cfg(12, 0.5);
        let mut opts = TwoPointOptions::new(99, 100, 2);
        opts.quenched = true;
        let e = two_point(&c, &opts).unwrap();
        assert_eq!(e.disorder, 1);
        assert!(e.quenched);
    }

    #[test]
    fn clock_tail_has_sorted_samples() {
        let c = cfg(14, 0.5);
        let t = clock_tail(&c, &TwoPointOptions::new(100, 2, 3), 1.0, 10.0, 6).unwrap();
        assert_eq!(t.ratios.len(), 200);
        assert!(t.ratios.windows(2).all(|w| w[0] <= w[1]));
        assert!(t.tail.windows(2).all(|w| w[1].1 <= w[0].1));
    }
}
