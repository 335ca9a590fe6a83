//! Sums over ordered tuples of distinct target points of the probability
//! that all of them are visited before time `a m`.

use rayon::prelude::*;

use super::kernel::walk_step;
use super::survival::HORIZON_BUDGET;
use crate::error::{Error, Result};
use crate::random_sets::TargetSet;
use crate::vertex::Vertex;

pub const MAX_ORDER: u32 = 3;
pub const MAX_DIM: u32 = 12;

/// `P_x[H(y_j) < horizon for every j]` by dynamic programming over
/// `(vertex, subset of ys already visited)`.
pub fn joint_hit_probability(n: u32, x: Vertex, ys: &[Vertex], horizon: u64) -> f64 {
    if horizon == 0 {
        return 0.0;
    }
    let size = 1usize << n;
    let masks = 1usize << ys.len();
    let full = masks - 1;
    let mut initial = 0usize;
    for (j, y) in ys.iter().enumerate() {
        if *y == x {
            initial |= 1 << j;
        }
    }
    let mut p = vec![vec![0.0; size]; masks];
    let mut next = vec![vec![0.0; size]; masks];
    p[initial][x.bits() as usize] = 1.0;
    // Visits at times 0..=horizon-1, i.e. horizon-1 steps.
    for _ in 1..horizon {
        for mask in 0..masks {
            walk_step(&p[mask], &mut next[mask], n);
        }
        for mask in 0..full {
            for (j, y) in ys.iter().enumerate() {
                if mask & (1 << j) != 0 {
                    continue;
                }
                let at = y.bits() as usize;
                let mass = std::mem::take(&mut next[mask][at]);
                next[mask | (1 << j)][at] += mass;
            }
        }
        std::mem::swap(&mut p, &mut next);
    }
    p[full].iter().sum()
}

/// `sum' over distinct y_1..y_i in B \ {x}` of `P_x[H(y_j) < a m for all j]`.
///
/// The joint probability is symmetric in the tuple, so the ordered sum is
/// `i!` times the sum over `i`-subsets.
pub fn inclusion_exclusion_sum(target: &TargetSet, x: Vertex, order: u32, a: f64, m: f64) -> Result<f64> {
    let n = target.dim();
    if order == 0 {
        return Err(Error::domain("inclusion-exclusion order must be at least 1"));
    }
    if order > MAX_ORDER {
        return Err(Error::resource(
            format!("inclusion-exclusion order {order}"),
            order as u128,
            MAX_ORDER as u128,
        ));
    }
    if n > MAX_DIM {
        return Err(Error::resource(
            format!("inclusion-exclusion in dimension {n}"),
            n as u128,
            MAX_DIM as u128,
        ));
    }
    if !(a >= 0.0) || !(m > 0.0) {
        return Err(Error::domain(format!("need a >= 0 and m > 0, got a={a}, m={m}")));
    }
    let horizon = (a * m).ceil() as u64;
    let states = (1u128 << n) << order;
    if states * horizon as u128 > HORIZON_BUDGET {
        return Err(Error::resource(
            "inclusion-exclusion horizon",
            states * horizon as u128,
            HORIZON_BUDGET,
        ));
    }
    let ys: Vec<Vertex> = target.members().iter().copied().filter(|&y| y != x).collect();
    let subsets = k_subsets(ys.len(), order as usize);
    let probs: Vec<f64> = subsets
        .par_iter()
        .map(|idx| {
            let chosen: Vec<Vertex> = idx.iter().map(|&i| ys[i]).collect();
            joint_hit_probability(n, x, &chosen, horizon)
        })
        .collect();
    let factorial: f64 = (1..=order).map(f64::from).product();
    Ok(factorial * probs.iter().sum::<f64>())
}

fn k_subsets(len: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, len: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..len {
            cur.push(i);
            rec(i + 1, len, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, len, k, &mut Vec::with_capacity(k), &mut out);
    out
}
