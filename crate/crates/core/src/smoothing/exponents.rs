use crate::error::{Error, Result};
use crate::evolution::System;

/// Supremal smoothing exponents: the Schrödinger part gains up to `alpha_max`
/// derivatives and the wave part up to `beta_max` (both open thresholds).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmoothingExponents {
    pub alpha_max: f64,
    pub beta_max: f64,
}

fn require(ok: bool, what: &str, d: usize, s: f64, r: f64) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Admissibility(format!(
            "requires {what} (d = {d}, s = {s}, r = {r})"
        )))
    }
}

/// Smoothing exponents for data in `H^s × H^r`, or the first violated hypothesis.
pub fn smoothing_exponents(system: System, d: usize, s: f64, r: f64) -> Result<SmoothingExponents> {
    if !(s.is_finite() && r.is_finite()) {
        return Err(Error::Admissibility("s and r must be finite".into()));
    }
    let df = d as f64;
    match (system, d) {
        (_, 0 | 1) | (_, 5..) => {
            return Err(Error::Admissibility(format!(
                "smoothing exponents are stated for d in 2..=4, got d = {d}"
            )))
        }
        (System::Zakharov, 2 | 3) => {
            require(r >= -0.5, "r >= -1/2", d, s, r)?;
            require(2.0 * s - r >= 0.5, "2s - r >= 1/2", d, s, r)?;
            require(r < s, "r < s", d, s, r)?;
            require(s < r + 1.0, "s < r + 1", d, s, r)?;
        }
        (System::Kgs, 2 | 3) => {
            require(s > -0.25, "s > -1/4", d, s, r)?;
            require(r > -0.5, "r > -1/2", d, s, r)?;
            require(2.0 * s - r >= -1.5, "2s - r >= -3/2", d, s, r)?;
            require(r - 2.0 < s, "r - 2 < s", d, s, r)?;
            require(s < r + 1.0, "s < r + 1", d, s, r)?;
        }
        (System::Zakharov, _) => {
            require(r > (df - 4.0) / 4.0, "r > (d-4)/4", d, s, r)?;
            require(2.0 * s - r > (df - 2.0) / 2.0, "2s - r > (d-2)/2", d, s, r)?;
            require(r <= s, "r <= s", d, s, r)?;
            require(s <= r + 1.0, "s <= r + 1", d, s, r)?;
        }
        (System::Kgs, _) => {
            require(r > (df - 4.0) / 4.0, "r > (d-4)/4", d, s, r)?;
            require(2.0 * s - r > (df - 6.0) / 2.0, "2s - r > (d-6)/2", d, s, r)?;
            require(r - 2.0 <= s, "r - 2 <= s", d, s, r)?;
            require(s <= r + 1.0, "s <= r + 1", d, s, r)?;
        }
    }
    let alpha_max = 0.5f64.min(r - s + 1.0).min(r + 2.0 - df / 2.0);
    let beta_max = match (system, d) {
        (System::Zakharov, 2 | 3) => (2.0 * s - r - 0.5).min(s - r),
        (System::Kgs, 2 | 3) => (2.0 * s - r + 1.5).min(s - r + 2.0),
        (System::Zakharov, _) => (2.0 * s - r - (df - 2.0) / 2.0).min(s - r),
        (System::Kgs, _) => (2.0 * s - r - (df - 6.0) / 2.0).min(s - r + 2.0),
    };
    Ok(SmoothingExponents { alpha_max, beta_max })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kgs_three_dimensional_l2() {
        let e = smoothing_exponents(System::Kgs, 3, 0.0, 0.0).unwrap();
        assert_eq!(e.alpha_max, 0.5);
        assert_eq!(e.beta_max, 1.5);
    }

    #[test]
    fn violation_names_inequality() {
        let err = smoothing_exponents(System::Kgs, 2, -1.0, 0.0).unwrap_err();
        assert!(err.to_string().contains("s > -1/4"), "{err}");
        let err = smoothing_exponents(System::Zakharov, 2, 0.0, 0.0).unwrap_err();
        assert!(err.to_string().contains("2s - r >= 1/2"), "{err}");
    }

    #[test]
    fn dimension_one_rejected() {
        assert!(smoothing_exponents(System::Kgs, 1, 0.0, 0.0).is_err());
    }
}
