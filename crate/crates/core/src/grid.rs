use crate::error::{Error, Result};

/// Uniform grid of `n` points on `[lo, hi]`, both ends included.
///
/// Points are generated from the nearer endpoint so a grid symmetric about
/// zero is symmetric bit-for-bit.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Result<Vec<f64>> {
    if !(lo.is_finite() && hi.is_finite()) {
        return Err(Error::InvalidGrid(format!("non-finite bounds [{lo}, {hi}]")));
    }
    if lo >= hi {
        return Err(Error::InvalidGrid(format!("lower bound {lo} must be below upper bound {hi}")));
    }
    if n < 2 {
        return Err(Error::InvalidGrid(format!("need at least 2 points, got {n}")));
    }
    let last = (n - 1) as f64;
    Ok((0..n)
        .map(|i| {
            let j = (n - 1 - i) as f64;
            if 2 * i < n {
                lo + (hi - lo) * (i as f64 / last)
            } else {
                hi - (hi - lo) * (j / last)
            }
        })
        .collect())
}
