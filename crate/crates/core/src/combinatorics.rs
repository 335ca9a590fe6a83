//! Binomial coefficients, the hitting-correction function `xi`, and the
//! distance threshold `g`.
//!
//! `xi_n(k)` is, up to `1 + o(1)`, the probability that the walk started
//! at distance `k` from a point hits it before equilibrating. It is
//! evaluated three ways:
//!
//! * [`xi`] / [`XiTable`]: floating point, entirely in the log domain,
//!   usable up to a few thousand dimensions;
//! * [`xi_exact`]: exact rational, direct sum over `C(n, k+j) / j`;
//! * [`xi_second_form`]: exact rational, the rearranged sum over
//!   `C(n-k, j) / (j C(k+j, j))`, in which monotonicity in `k` is visible.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

/// Largest `n` for which [`XiTable`] also stores exact rational values.
pub const EXACT_CUTOFF: u32 = 30;

fn check_k(n: u32, k: u32) -> Result<()> {
    if k > n {
        Err(Error::domain(format!("k = {k} exceeds n = {n}")))
    } else {
        Ok(())
    }
}

/// `C(n, k)` as an exact big integer.
pub fn binom_exact(n: u32, k: u32) -> Result<BigUint> {
    check_k(n, k)?;
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 1..=k {
        acc *= n - k + i;
        acc /= i;
    }
    Ok(acc)
}

/// Natural log of a positive big integer, accurate to double precision.
pub fn ln_biguint(x: &BigUint) -> f64 {
    assert!(!x.is_zero(), "log of zero");
    let bits = x.bits();
    if bits <= 64 {
        return (x.to_u64().unwrap() as f64).ln();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_u64().unwrap();
    (top as f64).ln() + shift as f64 * std::f64::consts::LN_2
}

/// `ln C(n, k)`.
///
/// Short products are summed term by term; otherwise log-gamma is used.
pub fn log_binom(n: u32, k: u32) -> Result<f64> {
    check_k(n, k)?;
    Ok(log_binom_unchecked(n, k))
}

pub(crate) fn log_binom_unchecked(n: u32, k: u32) -> f64 {
    let k = k.min(n - k);
    if k == 0 {
        return 0.0;
    }
    if k <= 32 {
        let mut s = 0.0;
        for i in 1..=k {
            s += ((n - k + i) as f64 / i as f64).ln();
        }
        return s;
    }
    let (n, k) = (n as f64, k as f64);
    libm::lgamma(n + 1.0) - libm::lgamma(k + 1.0) - libm::lgamma(n - k + 1.0)
}

/// Numerically stable `ln(sum(exp(terms)))`.
pub(crate) fn log_sum_exp(terms: &[f64]) -> f64 {
    let max = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    max + terms.iter().map(|t| (t - max).exp()).sum::<f64>().ln()
}

/// `ln xi_n(k)` from a precomputed row of `ln C(n, .)`; `-inf` at `k = n`.
fn ln_xi_from_row(n: u32, k: u32, ln_row: &[f64], scratch: &mut Vec<f64>) -> f64 {
    if k == n {
        return f64::NEG_INFINITY;
    }
    scratch.clear();
    scratch.extend((1..=n - k).map(|j| ln_row[(k + j) as usize] - (j as f64).ln()));
    let nf = n as f64;
    -nf * std::f64::consts::LN_2 + (nf / 2.0).ln() - ln_row[k as usize] + log_sum_exp(scratch)
}

fn ln_binom_row(n: u32) -> Vec<f64> {
    (0..=n).map(|k| log_binom_unchecked(n, k)).collect()
}

/// `xi_n(k)` in floating point.
pub fn xi(n: u32, k: u32) -> Result<f64> {
    check_k(n, k)?;
    let row = ln_binom_row(n);
    Ok(ln_xi_from_row(n, k, &row, &mut Vec::new()).exp())
}

/// `xi_n(k)` as an exact rational, by the defining sum.
pub fn xi_exact(n: u32, k: u32) -> Result<BigRational> {
    check_k(n, k)?;
    let mut sum = BigRational::zero();
    for j in 1..=n - k {
        sum += BigRational::new(binom_exact(n, k + j)?.into(), BigUint::from(j).into());
    }
    let prefactor = BigRational::new(
        BigUint::from(n).into(),
        (BigUint::from(2u32) * (BigUint::one() << n) * binom_exact(n, k)?).into(),
    );
    Ok(prefactor * sum)
}

/// `xi_n(k)` as an exact rational, by the rearranged sum.
pub fn xi_second_form(n: u32, k: u32) -> Result<BigRational> {
    check_k(n, k)?;
    let mut sum = BigRational::zero();
    for j in 1..=n - k {
        sum += BigRational::new(
            binom_exact(n - k, j)?.into(),
            (binom_exact(k + j, j)? * j).into(),
        );
    }
    let prefactor = BigRational::new(
        BigUint::from(n).into(),
        (BigUint::from(2u32) << n).into(),
    );
    Ok(prefactor * sum)
}

/// Converts a positive rational to `f64` without intermediate overflow.
pub fn rational_to_f64(r: &BigRational) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    let num = r.numer().magnitude();
    let den = r.denom().magnitude();
    let sign = if r.numer().sign() == num_bigint::Sign::Minus {
        -1.0
    } else {
        1.0
    };
    sign * (ln_biguint(num) - ln_biguint(den)).exp()
}

/// Table of `xi_n(0..=n)` for one dimension.
#[derive(Debug, Clone)]
pub struct XiTable {
    n: u32,
    ln_values: Vec<f64>,
    ln_binoms: Vec<f64>,
    exact: Option<Vec<BigRational>>,
}

impl XiTable {
    /// Builds the float table, plus exact rationals when `n <= EXACT_CUTOFF`.
    pub fn new(n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("dimension must be positive"));
        }
        let ln_binoms = ln_binom_row(n);
        let mut scratch = Vec::with_capacity(n as usize);
        let ln_values = (0..=n)
            .map(|k| ln_xi_from_row(n, k, &ln_binoms, &mut scratch))
            .collect();
        let exact = if n <= EXACT_CUTOFF {
            Some((0..=n).map(|k| xi_exact(n, k)).collect::<Result<_>>()?)
        } else {
            None
        };
        Ok(XiTable {
            n,
            ln_values,
            ln_binoms,
            exact,
        })
    }

    pub fn dim(&self) -> u32 {
        self.n
    }

    /// `xi_n(k)`.
    pub fn value(&self, k: u32) -> f64 {
        self.ln_values[k as usize].exp()
    }

    /// `ln xi_n(k)`; `-inf` for `k = n`.
    pub fn ln_value(&self, k: u32) -> f64 {
        self.ln_values[k as usize]
    }

    pub fn values(&self) -> Vec<f64> {
        (0..=self.n).map(|k| self.value(k)).collect()
    }

    /// `xi_n(k) * C(n, k)`, which tends to one for fixed `k`.
    pub fn times_binom(&self, k: u32) -> f64 {
        (self.ln_values[k as usize] + self.ln_binoms[k as usize]).exp()
    }

    pub fn exact(&self, k: u32) -> Option<&BigRational> {
        self.exact.as_ref().map(|v| &v[k as usize])
    }

    pub fn has_exact(&self) -> bool {
        self.exact.is_some()
    }

    /// Whether `xi` is strictly decreasing on `0..=n`.
    pub fn is_strictly_decreasing(&self) -> bool {
        self.ln_values.windows(2).all(|w| w[0] > w[1])
    }

    /// Whether `xi_n(k) C(n,k) >= 1/2` for all `k < n/2`.
    ///
    /// At `k = n/2` the bound holds for every `n >= 3` but not for `n = 2`,
    /// where `xi_2(1) C(2,1) = 1/4`.
    pub fn satisfies_lower_bound(&self) -> bool {
        (0..self.n.div_ceil(2)).all(|k| self.times_binom(k) >= 0.5)
    }

    /// `max_k xi_n(k) C(n,k) / (sqrt(n) ln n)` over `k >= 1`.
    pub fn upper_bound_ratio(&self) -> f64 {
        let nf = self.n as f64;
        let scale = nf.sqrt() * nf.ln();
        (1..=self.n)
            .map(|k| self.times_binom(k) / scale)
            .fold(0.0, f64::max)
    }
}

/// Result of the search for the distance threshold `g(n)`.
#[derive(Debug, Clone, Serialize)]
pub struct GThreshold {
    pub n: u32,
    pub m: f64,
    pub m_prime: f64,
    /// Minimal `k >= 1` with `xi_n(k) <= 2^-n m'`, if one exists in `1..=n/2`.
    pub g: Option<u32>,
    pub xi_at_g: Option<f64>,
    /// `n/2 - g`, reported because its growth cannot be checked at finite `n`.
    pub half_gap: Option<f64>,
}

impl GThreshold {
    pub fn feasible(&self) -> bool {
        self.g.is_some()
    }
}

/// Auxiliary scale `m' = sqrt(m n ln n)`, the geometric mean of `m` and `n ln n`.
pub fn m_prime(n: u32, m: f64) -> f64 {
    let nf = n as f64;
    (m * nf * nf.ln()).max(0.0).sqrt()
}

/// Finds the minimal `g` in `1..=n/2` with `xi_n(g) <= 2^-n m'`.
pub fn find_g(n: u32, m: f64) -> Result<GThreshold> {
    let table = XiTable::new(n)?;
    Ok(find_g_in(&table, m))
}

/// [`find_g`] against an existing table.
pub fn find_g_in(table: &XiTable, m: f64) -> GThreshold {
    let n = table.dim();
    let mp = m_prime(n, m);
    let ln_threshold = mp.ln() - n as f64 * std::f64::consts::LN_2;
    let g = (1..=n / 2).find(|&k| table.ln_value(k) <= ln_threshold);
    GThreshold {
        n,
        m,
        m_prime: mp,
        g,
        xi_at_g: g.map(|k| table.value(k)),
        half_gap: g.map(|k| n as f64 / 2.0 - k as f64),
    }
}

/// Gaussian approximation of `C(n, n/2 + i)`, kept in log form.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct GaussianBinom {
    pub ln_value: f64,
    /// `|i| <= n^{7/12}`, the window in which the approximation is used.
    pub in_regime: bool,
}

/// `sqrt(2/pi) n^{-1/2} 2^n exp(-2 i^2 / n)`.
pub fn binom_gaussian_approx(n: u32, i: i64) -> Result<GaussianBinom> {
    let nf = n as f64;
    if n == 0 || (i.unsigned_abs() as f64) > nf / 2.0 {
        return Err(Error::domain(format!("|i| = {} exceeds n/2 for n = {n}", i.abs())));
    }
    let fi = i as f64;
    let ln_value = 0.5 * (2.0 / std::f64::consts::PI).ln() - 0.5 * nf.ln()
        + nf * std::f64::consts::LN_2
        - 2.0 * fi * fi / nf;
    Ok(GaussianBinom {
        ln_value,
        in_regime: fi.abs() <= nf.powf(7.0 / 12.0),
    })
}

/// Ratio of the Gaussian approximation to the exact `C(n, n/2 + i)`; `n` even.
pub fn binom_gaussian_ratio(n: u32, i: i64) -> Result<f64> {
    if !n.is_multiple_of(2) {
        return Err(Error::domain("ratio requires even n"));
    }
    let approx = binom_gaussian_approx(n, i)?;
    let k = (n / 2) as i64 + i;
    let exact = binom_exact(n, k as u32)?;
    Ok((approx.ln_value - ln_biguint(&exact)).exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(p: i64, q: i64) -> BigRational {
        BigRational::new(p.into(), q.into())
    }

    /// Pascal's triangle, independent of the multiplicative formula.
    fn pascal(n: usize) -> Vec<Vec<u128>> {
        let mut rows = vec![vec![1u128]];
        for i in 1..=n {
            let prev = &rows[i - 1];
            let mut row = vec![1u128; i + 1];
            for k in 1..i {
                row[k] = prev[k - 1] + prev[k];
            }
            rows.push(row);
        }
        rows
    }

    #[test]
    fn binom_exact_matches_pascal() {
        assert_eq!(binom_exact(5, 0).unwrap(), BigUint::from(1u32));
        assert_eq!(binom_exact(5, 5).unwrap(), BigUint::from(1u32));
        assert_eq!(binom_exact(10, 3).unwrap(), BigUint::from(120u32));
        let tri = pascal(60);
        for n in 0..=60u32 {
            for k in 0..=n {
                assert_eq!(
                    binom_exact(n, k).unwrap(),
                    BigUint::from(tri[n as usize][k as usize])
                );
            }
        }
        assert!(binom_exact(3, 4).is_err());
    }

    #[test]
    fn log_binom_small_and_large() {
        assert!((log_binom(4, 2).unwrap() - 6f64.ln()).abs() < 1e-15);
        assert_eq!(log_binom(17, 0).unwrap(), 0.0);
        assert!(log_binom(3, 4).is_err());
        let exact = ln_biguint(&binom_exact(1000, 500).unwrap());
        let approx = log_binom(1000, 500).unwrap();
        assert!(((approx - exact) / exact).abs() < 1e-10);
    }

    #[test]
    fn log_binom_relative_accuracy() {
        for n in [1u32, 7, 40, 129, 600, 1500] {
            for k in 0..=n {
                let exact = ln_biguint(&binom_exact(n, k).unwrap());
                let got = log_binom(n, k).unwrap();
                if exact == 0.0 {
                    assert_eq!(got, 0.0);
                } else {
                    assert!(((got - exact) / exact).abs() <= 1e-12, "n={n} k={k}");
                }
            }
        }
    }

    #[test]
    fn xi_hand_values() {
        assert_eq!(xi(2, 2).unwrap(), 0.0);
        assert_eq!(xi_exact(2, 2).unwrap(), rat(0, 1));
        assert_eq!(xi_exact(2, 1).unwrap(), rat(1, 8));
        assert!((xi(2, 1).unwrap() - 0.125).abs() < 1e-15);
        assert_eq!(xi_exact(4, 1).unwrap(), rat(25, 96));
        assert_eq!(xi_second_form(4, 1).unwrap(), rat(25, 96));
        assert_eq!(xi_second_form(2, 2).unwrap(), rat(0, 1));
        assert!(xi(3, 4).is_err());
        assert!(xi_exact(3, 4).is_err());
        assert!(xi_second_form(3, 4).is_err());
    }

    #[test]
    fn forms_agree_exactly() {
        for n in 1..=30 {
            for k in 0..=n {
                assert_eq!(xi_exact(n, k).unwrap(), xi_second_form(n, k).unwrap());
            }
        }
    }

    #[test]
    fn table_float_matches_exact() {
        for n in 1..=EXACT_CUTOFF {
            let t = XiTable::new(n).unwrap();
            assert!(t.has_exact());
            assert_eq!(t.value(n), 0.0);
            for k in 0..n {
                let e = rational_to_f64(t.exact(k).unwrap());
                assert!(((t.value(k) - e) / e).abs() <= 1e-12, "n={n} k={k}");
            }
        }
        assert!(!XiTable::new(EXACT_CUTOFF + 1).unwrap().has_exact());
    }

    #[test]
    fn table_properties_hold() {
        for n in (2..=200).chain([500, 1000, 2000]) {
            let t = XiTable::new(n).unwrap();
            assert!(t.is_strictly_decreasing(), "monotonicity fails at n={n}");
            assert!(t.satisfies_lower_bound(), "lower bound fails at n={n}");
        }
        for n in (4..=200).step_by(2) {
            assert!(XiTable::new(n).unwrap().times_binom(n / 2) >= 0.5, "n={n}");
        }
        assert_eq!(xi_exact(2, 1).unwrap() * BigRational::from_integer(2.into()), rat(1, 4));
        let t = XiTable::new(2000).unwrap();
        for k in 0..=3 {
            assert!((t.times_binom(k) - 1.0).abs() <= 0.05, "k={k}");
        }
    }

    #[test]
    fn upper_bound_ratio_non_increasing() {
        let r: Vec<f64> = [10, 100, 1000]
            .iter()
            .map(|&n| XiTable::new(n).unwrap().upper_bound_ratio())
            .collect();
        assert!(r[0] >= r[1] && r[1] >= r[2], "{r:?}");
    }

    #[test]
    fn find_g_matches_linear_scan() {
        for n in [8u32, 12, 16, 24, 40] {
            let m = 2f64.powi(n as i32);
            let res = find_g(n, m).unwrap();
            let thr = m_prime(n, m) / m;
            let scan = (1..=n / 2).find(|&k| xi(n, k).unwrap() <= thr);
            assert_eq!(res.g, scan, "n={n}");
            let g = res.g.unwrap();
            assert!(g <= n / 2);
            assert!(res.xi_at_g.unwrap() <= res.m_prime / m);
        }
        let g12 = find_g(12, 4096.0).unwrap();
        let thr = g12.m_prime / 4096.0;
        let g = g12.g.unwrap();
        assert!(xi(12, g).unwrap() <= thr);
        assert!(xi(12, g - 1).unwrap() > thr || g == 1);
    }

    #[test]
    fn find_g_infeasible_when_m_tiny() {
        let res = find_g(20, 1e-3).unwrap();
        assert!(!res.feasible());
        assert!(res.xi_at_g.is_none());
    }

    #[test]
    fn gaussian_ratio_diagnostic() {
        let r100 = binom_gaussian_ratio(100, 0).unwrap();
        let r10k = binom_gaussian_ratio(10_000, 0).unwrap();
        assert!((r10k - 1.0).abs() < (r100 - 1.0).abs());
        assert!((binom_gaussian_ratio(100, 5).unwrap() - 1.0).abs() < 0.1);
        let edge = binom_gaussian_approx(100, 50).unwrap();
        assert!(!edge.in_regime);
        assert!(binom_gaussian_approx(100, 51).is_err());
    }
}
