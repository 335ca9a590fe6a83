use serde::{Deserialize, Serialize};

use super::geometry::{volume_stats, StatsMode, VolumeStats};
use super::target_set::TargetSet;
use crate::combinatorics::{find_g_in, log_binom_unchecked, GThreshold, XiTable};
use crate::error::{Error, Result};

/// Finite-`n` tolerances standing in for the asymptotic conditions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    /// Allowed `|size_ratio - 1|`.
    pub size: f64,
    /// Allowed `xi_n(g) 2^n / m`.
    pub xi_gap: f64,
    /// Allowed `sum_{k<g} v_n(k) xi_n(k)`.
    pub vsum: f64,
    /// Allowed `V_n(g-1) / |B|`.
    pub vbig: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds {
            size: 0.2,
            xi_gap: 0.2,
            vsum: 0.2,
            vbig: 0.2,
        }
    }
}

/// Pass/fail per hypothesis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Verdicts {
    pub size: bool,
    pub xi_gap: bool,
    pub vsum: bool,
    pub vbig: bool,
}

impl Verdicts {
    pub fn all(&self) -> bool {
        self.size && self.xi_gap && self.vsum && self.vbig
    }
}

/// Numeric evaluation of the hypotheses of the exponential-limit theorem for one set.
#[derive(Debug, Clone, Serialize)]
pub struct ConditionReport {
    pub n: u32,
    pub m: f64,
    pub set_size: usize,
    /// `|B| m / 2^n`.
    pub size_ratio: f64,
    pub g: GThreshold,
    /// `xi_n(g) 2^n / m`.
    pub xi_gap: Option<f64>,
    /// `sum_{k=1}^{g-1} v_n(k) xi_n(k)`.
    pub vsum: Option<f64>,
    /// `V_n(g-1) / |B|`.
    pub vbig_ratio: Option<f64>,
    /// The maxima over centers were exact rather than sampled lower bounds.
    pub exact_stats: bool,
    pub thresholds: Thresholds,
    pub verdicts: Verdicts,
}

impl ConditionReport {
    pub fn passes(&self) -> bool {
        self.verdicts.all()
    }
}

/// Time scale choice for [`check_conditions`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum TimeScale {
    Fixed(f64),
    /// `m = 2^n / |B|`.
    Auto,
}

impl TimeScale {
    pub fn resolve(self, target: &TargetSet) -> Result<f64> {
        match self {
            TimeScale::Fixed(m) if m > 0.0 && m.is_finite() => Ok(m),
            TimeScale::Fixed(m) => Err(Error::domain(format!("time scale must be positive, got {m}"))),
            TimeScale::Auto if target.is_empty() => Err(Error::domain("automatic time scale needs a nonempty set")),
            TimeScale::Auto => Ok(2f64.powi(target.dim() as i32) / target.len() as f64),
        }
    }
}

pub(crate) fn judge(
    n: u32,
    m: f64,
    set_size: usize,
    table: &XiTable,
    stats: &VolumeStats,
    thresholds: Thresholds,
) -> ConditionReport {
    let scale = 2f64.powi(n as i32);
    let size_ratio = set_size as f64 * m / scale;
    let g = find_g_in(table, m);
    let (xi_gap, vsum, vbig_ratio) = match g.g {
        Some(gv) => {
            let xi_gap = table.value(gv) * scale / m;
            let vsum: f64 = (1..gv)
                .map(|k| stats.v[k as usize] as f64 * table.value(k))
                .sum();
            let vbig = stats.big_v[(gv - 1) as usize] as f64 / set_size as f64;
            (Some(xi_gap), Some(vsum), Some(vbig))
        }
        None => (None, None, None),
    };
    let within = |value: Option<f64>, thr: f64| value.is_some_and(|v| v <= thr);
    let verdicts = Verdicts {
        size: (size_ratio - 1.0).abs() <= thresholds.size,
        xi_gap: within(xi_gap, thresholds.xi_gap),
        vsum: within(vsum, thresholds.vsum),
        vbig: within(vbig_ratio, thresholds.vbig),
    };
    ConditionReport {
        n,
        m,
        set_size,
        size_ratio,
        g,
        xi_gap,
        vsum,
        vbig_ratio,
        exact_stats: !stats.is_lower_bound,
        thresholds,
        verdicts,
    }
}

/// Evaluates set size, the `g` threshold, and both volume conditions.
pub fn check_conditions(
    target: &TargetSet,
    m: TimeScale,
    thresholds: Thresholds,
    mode: StatsMode,
) -> Result<ConditionReport> {
    if target.is_empty() {
        return Err(Error::domain("condition check needs a nonempty set"));
    }
    let m = m.resolve(target)?;
    let table = XiTable::new(target.dim())?;
    let stats = volume_stats(target, mode)?;
    Ok(judge(target.dim(), m, target.len(), &table, &stats, thresholds))
}

/// Ratio `v_n(k) / (C(n,k) rho + f_n(k))` for `k = 1..=kmax`, where
/// `f_n(1) = n / ln(1/rho)` and `f_n(k) = n` for `k > 1`.
pub fn cloud_constants(stats: &VolumeStats, rho: f64, kmax: u32) -> Result<Vec<f64>> {
    if !(rho > 0.0 && rho < 1.0) {
        return Err(Error::domain(format!("density {rho} outside (0, 1)")));
    }
    let n = (stats.v.len() - 1) as u32;
    let kmax = kmax.min(n);
    Ok((1..=kmax)
        .map(|k| {
            let nf = n as f64;
            let f = if k == 1 { nf / (1.0 / rho).ln() } else { nf };
            let bound = (log_binom_unchecked(n, k) + rho.ln()).exp() + f;
            stats.v[k as usize] as f64 / bound
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random_sets::{percolation_cloud, Provenance};

    #[test]
    fn single_point_at_full_scale_passes() {
        let n = 16;
        let set = TargetSet::from_bits(n, [0], Provenance::Explicit).unwrap();
        let r = check_conditions(
            &set,
            TimeScale::Fixed(2f64.powi(16)),
            Thresholds::default(),
            StatsMode::Exact,
        )
        .unwrap();
        assert_eq!(r.size_ratio, 1.0);
        assert!(r.exact_stats);
        assert!(r.verdicts.size && r.verdicts.xi_gap && r.verdicts.vsum, "{r:?}");
        // A singleton is its own ball at every radius, so V_n(g-1)/|B| = 1.
        assert_eq!(r.vbig_ratio, Some(1.0));
        assert!(!r.verdicts.vbig);
    }

    #[test]
    fn full_cube_violates_size() {
        let set = TargetSet::from_bits(8, 0..256, Provenance::Explicit).unwrap();
        let r = check_conditions(&set, TimeScale::Fixed(64.0), Thresholds::default(), StatsMode::Exact).unwrap();
        assert_eq!(r.size_ratio, 64.0);
        assert!(!r.verdicts.size);
        assert!(!r.passes());
    }

    #[test]
    fn automatic_scale_matches_set_size() {
        let set = percolation_cloud(12, 0.01, 2).unwrap();
        let m = TimeScale::Auto.resolve(&set).unwrap();
        assert!((m * set.len() as f64 - 4096.0).abs() < 1e-9);
        assert!(TimeScale::Fixed(-1.0).resolve(&set).is_err());
    }

    #[test]
    fn verdicts_follow_thresholds() {
        let set = percolation_cloud(14, 0.002, 8).unwrap();
        let strict = Thresholds { size: 0.0, xi_gap: 0.0, vsum: 0.0, vbig: 0.0 };
        let loose = Thresholds { size: 1e9, xi_gap: 1e9, vsum: 1e9, vbig: 1e9 };
        let a = check_conditions(&set, TimeScale::Auto, strict, StatsMode::Exact).unwrap();
        let b = check_conditions(&set, TimeScale::Auto, loose, StatsMode::Exact).unwrap();
        assert_eq!(a.size_ratio, b.size_ratio);
        assert!(b.passes());
        assert!(!a.verdicts.xi_gap);
    }

    #[test]
    fn empty_set_rejected() {
        let set = TargetSet::from_bits(8, [], Provenance::Explicit).unwrap();
        assert!(check_conditions(&set, TimeScale::Fixed(1.0), Thresholds::default(), StatsMode::Exact).is_err());
    }
}
