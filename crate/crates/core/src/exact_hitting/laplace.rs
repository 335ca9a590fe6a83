//! Laplace transform of the hitting time of a single point.
//!
//! Three routes to `E_{z_k} exp(-(s/m) H(0))`:
//!
//! * [`laplace_formula`]: the Fourier expression with its inner
//!   alternating sum replaced by a Beta integral, so every term is
//!   positive and can be summed in the log domain;
//! * [`lumped_laplace`]: the distance-to-target birth-death chain solved
//!   as a tridiagonal system;
//! * [`laplace_alternating_exact`] / [`beta_product_exact`]: both sides of
//!   the Beta-integral identity in exact rationals.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::combinatorics::{log_binom_unchecked, log_sum_exp};
use crate::error::{Error, Result};

/// Parameters of one Laplace-transform evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaplaceQuery {
    pub n: u32,
    /// Distance of the start from the target.
    pub k: u32,
    pub s: f64,
    pub m: f64,
    /// `(n/2)(e^{s/m} - 1)`.
    pub epsilon: f64,
    /// `e^{-s/m}`.
    pub lambda: f64,
}

impl LaplaceQuery {
    pub fn new(n: u32, k: u32, s: f64, m: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("dimension must be positive"));
        }
        if k > n {
            return Err(Error::domain(format!("k = {k} exceeds n = {n}")));
        }
        if !(s > 0.0) || !s.is_finite() {
            return Err(Error::domain(format!("s must be positive and finite, got {s}")));
        }
        if !(m > 0.0) || !m.is_finite() {
            return Err(Error::domain(format!("m must be positive and finite, got {m}")));
        }
        let r = s / m;
        Ok(LaplaceQuery {
            n,
            k,
            s,
            m,
            epsilon: n as f64 / 2.0 * r.exp_m1(),
            lambda: (-r).exp(),
        })
    }
}

/// `ln[C(n-k, j) Gamma(1+k) Gamma(j+eps) / Gamma(1+k+j+eps)]`, summed over `j`.
///
/// The common factor `n e^{s/m} / 2` is omitted; it cancels in the ratio.
fn ln_gamma_sum(n: u32, k: u32, eps: f64) -> f64 {
    let lg_k = libm::lgamma(1.0 + k as f64);
    let terms: Vec<f64> = (0..=n - k)
        .map(|j| {
            let jf = j as f64;
            log_binom_unchecked(n - k, j) + lg_k + libm::lgamma(jf + eps)
                - libm::lgamma(1.0 + k as f64 + jf + eps)
        })
        .collect();
    log_sum_exp(&terms)
}

/// `E_{z_k} exp(-(s/m) H(0))` from the positive-term Gamma form.
pub fn laplace_formula(q: &LaplaceQuery) -> f64 {
    if q.k == 0 {
        return 1.0;
    }
    (ln_gamma_sum(q.n, q.k, q.epsilon) - ln_gamma_sum(q.n, 0, q.epsilon)).exp()
}

/// `E_{z_k} exp(-(s/m) H(0))` by solving the lumped birth-death chain.
///
/// Solves `phi(0) = 1`, `phi(d) = lambda [(d/n) phi(d-1) + ((n-d)/n) phi(d+1)]`,
/// `phi(n) = lambda phi(n-1)` by eliminating from `d = n` downward, which
/// writes `phi(d) = r_d phi(d-1)` with every `r_d` in `(0, 1)`.
pub fn lumped_laplace(n: u32, k: u32, s: f64, m: f64) -> Result<f64> {
    LaplaceQuery::new(n, k, s, m)?;
    Ok(lumped_laplace_all(n, s / m)[k as usize])
}

/// `phi(0..=n)` for the lumped chain at discount `lambda = e^{-rate}`.
///
/// Works with the complements `q_d = 1 - r_d` and `mu = 1 - lambda`, whose
/// recursion has only positive terms, so `rate` far below machine epsilon
/// is still resolved.
pub fn lumped_laplace_all(n: u32, rate: f64) -> Vec<f64> {
    let nf = n as f64;
    let mu = -(-rate).exp_m1();
    let mut q = vec![0.0; n as usize + 1];
    q[n as usize] = mu;
    for d in (1..n).rev() {
        let down = d as f64 / nf;
        let up = 1.0 - down;
        let next = q[d as usize + 1];
        let carried = up * (mu + next - mu * next);
        q[d as usize] = (carried + mu * down) / (down + carried);
    }
    let mut ln_phi = 0.0;
    let mut phi = vec![1.0; n as usize + 1];
    for d in 1..=n as usize {
        ln_phi += (-q[d]).ln_1p();
        phi[d] = ln_phi.exp();
    }
    phi
}

/// `2^-n m / s + xi_n(k)`, the leading-order approximation of the transform.
pub fn laplace_approximation(n: u32, s: f64, m: f64, xi_k: f64) -> f64 {
    ((m / s).ln() - n as f64 * std::f64::consts::LN_2).exp() + xi_k
}

fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

fn check_exact_args(n: u32, k: u32, j: u32, lambda: &BigRational) -> Result<()> {
    if n == 0 {
        return Err(Error::domain("dimension must be positive"));
    }
    if k + j > n {
        return Err(Error::domain(format!("k + j = {} exceeds n = {n}", k + j)));
    }
    if *lambda <= BigRational::zero() || *lambda >= BigRational::one() {
        return Err(Error::domain(format!("lambda = {lambda} outside (0, 1)")));
    }
    Ok(())
}

/// `sum_{i=0}^{k} (-1)^i C(k,i) / (1 - lambda (1 - 2(i+j)/n))`, exactly.
pub fn laplace_alternating_exact(n: u32, k: u32, j: u32, lambda: &BigRational) -> Result<BigRational> {
    check_exact_args(n, k, j, lambda)?;
    let one = BigRational::one();
    let mut sum = BigRational::zero();
    let mut binom = BigInt::one();
    for i in 0..=k {
        let arg = one.clone() - rational(2 * (i + j) as i64, n as i64);
        let denom = one.clone() - lambda * arg;
        if denom.is_zero() {
            return Err(Error::domain(format!("term i = {i} has a vanishing denominator")));
        }
        let term = BigRational::from_integer(binom.clone()) / denom;
        if i % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
        binom = binom * BigInt::from(k - i) / BigInt::from(i + 1);
    }
    Ok(sum)
}

/// `(n / (2 lambda)) k! / prod_{t=0}^{k} (j + eps + t)` with `eps = (n/2)(1/lambda - 1)`.
pub fn beta_product_exact(n: u32, k: u32, j: u32, lambda: &BigRational) -> Result<BigRational> {
    check_exact_args(n, k, j, lambda)?;
    let half_n = rational(n as i64, 2);
    let eps = half_n.clone() * (lambda.recip() - BigRational::one());
    let mut value = half_n / lambda;
    for t in 1..=k {
        value *= BigRational::from_integer(BigInt::from(t));
    }
    for t in 0..=k {
        value /= eps.clone() + BigRational::from_integer(BigInt::from(j + t));
    }
    Ok(value)
}
