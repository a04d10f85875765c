//! Detectability limits for the two benchmark problems.

use crate::error::{Error, Result};

/// SBM-vs-ER detection limit at matched density: `δ_crit = 2 √(p / n)`.
pub fn delta_crit(p: f64, n: usize) -> Result<f64> {
    if !(p.is_finite() && p > 0.0) || n == 0 {
        return Err(Error::InvalidParameter("delta_crit needs p > 0 and n > 0"));
    }
    Ok(2.0 * libm::sqrt(p / n as f64))
}

/// Planted-clique detection limit in units of `√n`: `β_crit = √(p / (1 − p))`.
pub fn beta_crit(p: f64) -> Result<f64> {
    if !(p.is_finite() && p > 0.0 && p < 1.0) {
        return Err(Error::InvalidParameter("beta_crit needs 0 < p < 1"));
    }
    Ok(libm::sqrt(p / (1.0 - p)))
}

/// `β = k / √n`.
pub fn beta_of(k: usize, n: usize) -> f64 {
    k as f64 / libm::sqrt(n as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn delta_values() {
        assert!((delta_crit(0.05, 1000).unwrap() - 0.014_142_135_623_730_95).abs() < 1e-15);
        assert_eq!(delta_crit(1.0, 4).unwrap(), 1.0);
        assert!((delta_crit(0.25, 1000).unwrap() - 0.031_622_776_601_683_79).abs() < 1e-15);
        assert!(delta_crit(0.0, 10).is_err());
        assert!(delta_crit(0.5, 0).is_err());
    }

    #[test]
    fn beta_values() {
        assert_eq!(beta_crit(0.5).unwrap(), 1.0);
        assert!((beta_crit(0.2).unwrap() - 0.5).abs() < 1e-15);
        assert!((beta_crit(0.8).unwrap() - 2.0).abs() < 1e-15);
        assert!(beta_crit(0.0).is_err() && beta_crit(1.0).is_err());
        assert!((beta_of(64, 1000) - 2.024).abs() < 5e-4);
    }
}
