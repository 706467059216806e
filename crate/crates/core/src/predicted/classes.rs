use crate::error::{Error, Result};

/// Relative tolerance for comparisons against `e^x` class boundaries and
/// `q_j` thresholds.
pub const CLASS_TOLERANCE: f64 = 1e-12;

/// Geometric length classes driven by a predicted average load: class `j`
/// holds lengths in `[B_j, B_{j+1})` with `B_j = exp(sum_{i<j} eps_i)` and
/// `eps_i = min{1, i / v_avg}`.
#[derive(Debug, Clone, PartialEq)]
pub struct LengthClasses {
    v_avg: f64,
}

impl LengthClasses {
    pub fn new(v_avg: f64) -> Result<Self> {
        if !(v_avg >= 0.0 && v_avg.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "average load prediction must be non-negative, got {v_avg}"
            )));
        }
        Ok(LengthClasses { v_avg })
    }

    pub fn v_avg(&self) -> f64 {
        self.v_avg
    }

    pub fn epsilon(&self, j: usize) -> f64 {
        (j as f64 / self.v_avg).min(1.0)
    }

    /// `q_j = min{1, sqrt(v_avg / j)}`.
    pub fn threshold(&self, j: usize) -> f64 {
        (self.v_avg / j as f64).sqrt().min(1.0)
    }

    /// `sum_{i<j} eps_i`.
    pub fn exponent_before(&self, j: usize) -> f64 {
        (1..j).map(|i| self.epsilon(i)).sum()
    }

    /// Lower boundary `B_j` of class `j`.
    pub fn lower(&self, j: usize) -> f64 {
        self.exponent_before(j).exp()
    }

    /// Class of a (predicted) length `>= 1`.
    pub fn classify(&self, length: f64) -> Result<usize> {
        if !(length >= 1.0 - CLASS_TOLERANCE) || !length.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "predicted length must be at least 1, got {length}"
            )));
        }
        let mut j = 1;
        let mut exponent = 0.0;
        loop {
            exponent += self.epsilon(j);
            let upper = exponent.exp();
            if length < upper * (1.0 - CLASS_TOLERANCE) {
                return Ok(j);
            }
            j += 1;
        }
    }
}

/// Class index of `predicted_length` under average load `v_avg`.
pub fn classify(predicted_length: f64, v_avg: f64) -> Result<usize> {
    LengthClasses::new(v_avg)?.classify(predicted_length)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn length_one_is_class_one() {
        for v in [0.1, 1.0, 4.0, 1000.0] {
            assert_eq!(classify(1.0, v).unwrap(), 1);
        }
    }

    #[test]
    fn boundaries_for_average_four() {
        let c = LengthClasses::new(4.0).unwrap();
        let eps: Vec<f64> = (1..=6).map(|j| c.epsilon(j)).collect();
        assert_eq!(eps, vec![0.25, 0.5, 0.75, 1.0, 1.0, 1.0]);
        assert!((c.lower(2) - 0.25f64.exp()).abs() < 1e-12);
        assert!((c.lower(3) - 0.75f64.exp()).abs() < 1e-12);
        assert_eq!(c.classify(2.0).unwrap(), 2);
        assert_eq!(c.classify(1.28).unwrap(), 1);
        assert_eq!(c.classify(2.2).unwrap(), 3);
        assert_eq!(c.threshold(1), 1.0);
        assert!((c.threshold(8) - 0.5f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn classes_tile_without_gaps() {
        let c = LengthClasses::new(2.5).unwrap();
        let mut prev = 1;
        let mut len = 1.0;
        while len < 500.0 {
            let j = c.classify(len).unwrap();
            assert!(j == prev || j == prev + 1);
            assert!(c.lower(j) <= len * (1.0 + 1e-9));
            prev = j;
            len *= 1.01;
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(classify(0.5, 4.0).is_err());
        assert!(classify(2.0, -1.0).is_err());
        assert!(classify(2.0, f64::NAN).is_err());
        // A zero prediction makes every class one e-fold wide.
        assert_eq!(classify(2.0, 0.0).unwrap(), 1);
        assert_eq!(classify(3.0, 0.0).unwrap(), 2);
    }
}
