//! Dense transition operator of the simple random walk on `{0,1}^n`.

/// `dst = P src`, where `P` flips one uniformly chosen coordinate.
///
/// `src` and `dst` have length `2^n`. Each coordinate contributes a
/// block swap, which keeps the inner loops as contiguous slice adds.
pub(crate) fn walk_step(src: &[f64], dst: &mut [f64], n: u32) {
    debug_assert_eq!(src.len(), 1usize << n);
    debug_assert_eq!(dst.len(), src.len());
    dst.fill(0.0);
    for i in 0..n {
        let b = 1usize << i;
        for (d, s) in dst.chunks_exact_mut(2 * b).zip(src.chunks_exact(2 * b)) {
            let (d_lo, d_hi) = d.split_at_mut(b);
            let (s_lo, s_hi) = s.split_at(b);
            for (x, y) in d_lo.iter_mut().zip(s_hi) {
                *x += y;
            }
            for (x, y) in d_hi.iter_mut().zip(s_lo) {
                *x += y;
            }
        }
    }
    let inv = 1.0 / n as f64;
    dst.iter_mut().for_each(|x| *x *= inv);
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_naive_neighbor_average() {
        let n = 5u32;
        let src: Vec<f64> = (0..32).map(|i| (i * i % 7) as f64).collect();
        let mut dst = vec![0.0; 32];
        walk_step(&src, &mut dst, n);
        for x in 0..32usize {
            let naive: f64 = (0..n).map(|i| src[x ^ (1 << i)]).sum::<f64>() / n as f64;
            assert!((dst[x] - naive).abs() < 1e-12);
        }
    }

    #[test]
    fn preserves_mass() {
        let mut src = vec![0.0; 1 << 8];
        src[17] = 1.0;
        let mut dst = vec![0.0; 1 << 8];
        walk_step(&src, &mut dst, 8);
        assert!((dst.iter().sum::<f64>() - 1.0).abs() < 1e-15);
        assert_eq!(dst.iter().filter(|&&p| p > 0.0).count(), 8);
    }
}
