use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which weight budget gates the growth of a part.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PotentialMode {
    /// The same budget for every part.
    #[default]
    Practical,
    /// The budget of the `i`-th part is `i` times the practical one.
    Theoretical,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PotentialConfig {
    /// Hereditary exponent: subsets of the ground set are assumed to admit
    /// `(s, s^{1-1/d})` partitions.
    pub d: f64,
    pub mode: PotentialMode,
    pub t: usize,
}

impl PotentialConfig {
    pub fn new(d: f64, mode: PotentialMode, t: usize) -> Result<Self> {
        if !d.is_finite() || d < 1.0 {
            return Err(Error::arg(format!("potential exponent d must be finite and >= 1, got {d}")));
        }
        Ok(PotentialConfig { d, mode, t })
    }
}

/// Weight budget for a prefix of `k` elements of part `part_index` (1-based).
///
/// The practical budget is `2 k^{1/d} Σπ / n0^{1/d}`, where `n0` is the
/// number of elements still unassigned when the part was started. The
/// theoretical budget scales it by the part index.
pub fn potential_threshold(k: usize, cfg: &PotentialConfig, sum_pi: f64, n0: usize, part_index: usize) -> f64 {
    debug_assert!(k >= 1 && n0 >= k);
    let practical = 2.0 * (k as f64 / n0 as f64).powf(1.0 / cfg.d) * sum_pi;
    match cfg.mode {
        PotentialMode::Practical => practical,
        PotentialMode::Theoretical => part_index as f64 * practical,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(d: f64, mode: PotentialMode) -> PotentialConfig {
        PotentialConfig::new(d, mode, 4).unwrap()
    }

    #[test]
    fn full_prefix_is_twice_the_weight() {
        let c = cfg(3.0, PotentialMode::Practical);
        assert_eq!(potential_threshold(40, &c, 7.5, 40, 3), 15.0);
    }

    #[test]
    fn quarter_prefix_in_the_plane() {
        let c = cfg(2.0, PotentialMode::Practical);
        assert!((potential_threshold(25, &c, 10.0, 100, 1) - 10.0).abs() < 1e-12);
    }

    #[test]
    fn theoretical_scales_with_part_index() {
        let p = cfg(2.0, PotentialMode::Practical);
        let t = cfg(2.0, PotentialMode::Theoretical);
        assert_eq!(potential_threshold(5, &p, 3.0, 50, 1), potential_threshold(5, &t, 3.0, 50, 1));
        let ratio = potential_threshold(5, &t, 3.0, 50, 4) / potential_threshold(5, &p, 3.0, 50, 4);
        assert!((ratio - 4.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_small_d() {
        assert!(PotentialConfig::new(0.5, PotentialMode::Practical, 2).is_err());
        assert!(PotentialConfig::new(f64::NAN, PotentialMode::Practical, 2).is_err());
    }
}
