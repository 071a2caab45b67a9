//! Distortion curves as a function of processing time.
//!
//! Two shapes are supported, both strictly decreasing on `[0, c_max]`:
//!
//! ```text
//! Exponential:    D(c) = a * (exp(-b c) - d)
//! InverseLinear:  D(c) = a / (b c + d)
//! ```
//!
//! A constant distortion budget `beta` is turned into a lower bound on the
//! processing time with [`DistortionSpec::min_processing_for`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative slack accepted on `d <= exp(-b c_max)`, so that presets whose
/// zero-distortion point sits exactly at `c_max` validate despite rounding.
const FLOOR_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DistortionKind {
    Exponential,
    #[serde(alias = "inverse-linear")]
    InverseLinear,
}

/// A parametrized, strictly decreasing distortion curve with its validity domain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DistortionSpec {
    pub kind: DistortionKind,
    pub a: f64,
    pub b: f64,
    pub d: f64,
    pub c_max: f64,
}

impl DistortionSpec {
    pub fn new(kind: DistortionKind, a: f64, b: f64, d: f64, c_max: f64) -> Result<Self> {
        let spec = Self {
            kind,
            a,
            b,
            d,
            c_max,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn exponential(a: f64, b: f64, d: f64, c_max: f64) -> Result<Self> {
        Self::new(DistortionKind::Exponential, a, b, d, c_max)
    }

    pub fn inverse_linear(a: f64, b: f64, d: f64, c_max: f64) -> Result<Self> {
        Self::new(DistortionKind::InverseLinear, a, b, d, c_max)
    }

    /// Exponential curve normalized to `D(0) = 1`, `D(4) = 0`.
    pub fn unit_exponential() -> Self {
        let d = (-1.0f64).exp();
        Self {
            kind: DistortionKind::Exponential,
            a: 1.0 / (1.0 - d),
            b: 0.25,
            d,
            c_max: 4.0,
        }
    }

    /// Exponential curve used for the age/distortion trade-off sweep.
    ///
    /// `d = exp(-3)` with `b = 1.2` puts the zero-distortion point at `c = 2.5`,
    /// which is taken as `c_max`.
    pub fn tradeoff_preset() -> Self {
        let d = (-3.0f64).exp();
        Self {
            kind: DistortionKind::Exponential,
            a: 8.0 / (1.0 - d),
            b: 1.2,
            d,
            c_max: 2.5,
        }
    }

    /// Checks the parameter invariants. Deserialized specs should be run through this.
    pub fn validate(&self) -> Result<()> {
        let finite = [self.a, self.b, self.d, self.c_max]
            .iter()
            .all(|v| v.is_finite());
        if !finite {
            return Err(Error::Domain("distortion parameters must be finite".into()));
        }
        if self.a <= 0.0 || self.b <= 0.0 || self.c_max <= 0.0 {
            return Err(Error::Domain(format!(
                "distortion requires a > 0, b > 0, c_max > 0 (got a = {}, b = {}, c_max = {})",
                self.a, self.b, self.c_max
            )));
        }
        if self.d < 0.0 {
            return Err(Error::Domain(format!(
                "distortion offset d = {} is negative",
                self.d
            )));
        }
        match self.kind {
            DistortionKind::Exponential => {
                let floor = (-self.b * self.c_max).exp();
                if self.d > floor * (1.0 + FLOOR_SLACK) {
                    return Err(Error::Domain(format!(
                        "exponential distortion needs d <= exp(-b c_max) = {floor} (got d = {})",
                        self.d
                    )));
                }
            }
            DistortionKind::InverseLinear => {
                if self.d == 0.0 {
                    return Err(Error::Domain(
                        "inverse-linear distortion needs d > 0 to be finite at c = 0".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    /// Distortion reached after processing for `c` time units.
    pub fn eval(&self, c: f64) -> Result<f64> {
        if !(0.0..=self.c_max).contains(&c) {
            return Err(Error::Domain(format!(
                "processing time {c} outside [0, {}]",
                self.c_max
            )));
        }
        Ok(self.value_at(c))
    }

    fn value_at(&self, c: f64) -> f64 {
        match self.kind {
            // Clamped: the floor check admits d a hair above exp(-b c_max).
            DistortionKind::Exponential => (self.a * ((-self.b * c).exp() - self.d)).max(0.0),
            DistortionKind::InverseLinear => self.a / (self.b * c + self.d),
        }
    }

    /// Largest distortion on the domain, reached at `c = 0`.
    pub fn max_distortion(&self) -> f64 {
        self.value_at(0.0)
    }

    /// Smallest distortion on the domain, reached at `c = c_max`.
    pub fn min_distortion(&self) -> f64 {
        self.value_at(self.c_max)
    }

    /// Smallest processing time whose distortion does not exceed `beta`.
    pub fn min_processing_for(&self, beta: f64) -> Result<f64> {
        if !(beta >= 0.0) || !beta.is_finite() {
            return Err(Error::Domain(format!(
                "distortion budget must be >= 0, got {beta}"
            )));
        }
        let floor = self.min_distortion();
        if beta < floor {
            return Err(Error::InfeasibleDistortion { beta, floor });
        }
        if beta >= self.max_distortion() {
            return Ok(0.0);
        }
        let c = match self.kind {
            DistortionKind::Exponential => -(beta / self.a + self.d).ln() / self.b,
            DistortionKind::InverseLinear => (self.a / beta - self.d) / self.b,
        };
        Ok(c.clamp(0.0, self.c_max))
    }
}

/// Distortion curve of a linear estimator fusing unit-time sensor reads.
///
/// Each read observes `X + noise` with noise variance `sigma_sq`; `X` has mean
/// `mu_x` and variance `sigma_x_sq`. Using `c` reads the minimum mean squared
/// error is `sigma_sq / (c + sigma_sq / (mu_x^2 + sigma_x_sq))`.
pub fn sensor_fusion_spec(
    sigma_sq: f64,
    mu_x: f64,
    sigma_x_sq: f64,
    m_sensors: u32,
) -> Result<DistortionSpec> {
    if !(sigma_sq > 0.0) || !(sigma_x_sq > 0.0) || !mu_x.is_finite() {
        return Err(Error::Domain(format!(
            "sensor fusion needs positive variances (sigma^2 = {sigma_sq}, sigma_x^2 = {sigma_x_sq})"
        )));
    }
    if m_sensors == 0 {
        return Err(Error::Domain(
            "sensor fusion needs at least one sensor".into(),
        ));
    }
    let second_moment = mu_x * mu_x + sigma_x_sq;
    DistortionSpec::inverse_linear(
        sigma_sq,
        1.0,
        sigma_sq / second_moment,
        f64::from(m_sensors),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use nalgebra::{DMatrix, DVector};

    /// Smallest c with D(c) <= beta, by bisection on the monotone curve.
    fn bisect_min_processing(spec: &DistortionSpec, beta: f64) -> f64 {
        if spec.eval(0.0).unwrap() <= beta {
            return 0.0;
        }
        let (mut lo, mut hi) = (0.0, spec.c_max);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if spec.eval(mid).unwrap() <= beta {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        hi
    }

    /// E[(w.Y - X)^2] minimized over w via the normal equations, with
    /// Y_j = X + N_j for `reads` independent reads.
    fn linear_estimator_mse(sigma_sq: f64, mu_x: f64, sigma_x_sq: f64, reads: usize) -> f64 {
        let m2 = mu_x * mu_x + sigma_x_sq;
        let gram = DMatrix::from_fn(reads, reads, |i, j| if i == j { m2 + sigma_sq } else { m2 });
        let cross = DVector::from_element(reads, m2);
        let w = gram.clone().lu().solve(&cross).unwrap();
        // E[(w.Y - X)^2] = w' G w - 2 w' r + E[X^2]
        (w.transpose() * &gram * &w)[(0, 0)] - 2.0 * w.dot(&cross) + m2
    }

    #[test]
    fn unit_exponential_endpoints() {
        let spec = DistortionSpec::unit_exponential();
        assert_abs_diff_eq!(spec.eval(0.0).unwrap(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(spec.eval(4.0).unwrap(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn inverse_linear_at_zero() {
        let spec = DistortionSpec::inverse_linear(1.0, 1.0, 1.0, 10.0).unwrap();
        assert_eq!(spec.eval(0.0).unwrap(), 1.0);
    }

    #[test]
    fn eval_rejects_out_of_domain() {
        let spec = DistortionSpec::unit_exponential();
        assert!(matches!(spec.eval(-0.1), Err(Error::Domain(_))));
        assert!(matches!(spec.eval(4.1), Err(Error::Domain(_))));
    }

    #[test]
    fn min_processing_examples() {
        let spec = DistortionSpec::unit_exponential();
        assert_eq!(spec.min_processing_for(1.0).unwrap(), 0.0);

        let beta = spec.eval(2.5).unwrap();
        let oracle = bisect_min_processing(&spec, beta);
        assert_abs_diff_eq!(oracle, 2.5, epsilon = 1e-9);
        assert_abs_diff_eq!(
            spec.min_processing_for(beta).unwrap(),
            oracle,
            epsilon = 1e-9
        );

        let lin = DistortionSpec::inverse_linear(1.0, 1.0, 1.0, 10.0).unwrap();
        let oracle = bisect_min_processing(&lin, 0.25);
        assert_abs_diff_eq!(oracle, 3.0, epsilon = 1e-9);
        assert_abs_diff_eq!(lin.min_processing_for(0.25).unwrap(), 3.0, epsilon = 1e-12);
    }

    #[test]
    fn budget_below_floor_is_infeasible() {
        let lin = DistortionSpec::inverse_linear(1.0, 1.0, 1.0, 10.0).unwrap();
        // floor is 1/11
        assert!(matches!(
            lin.min_processing_for(0.05),
            Err(Error::InfeasibleDistortion { .. })
        ));
        assert!(matches!(
            lin.min_processing_for(0.0),
            Err(Error::InfeasibleDistortion { .. })
        ));
        assert!(matches!(
            lin.min_processing_for(-1.0),
            Err(Error::Domain(_))
        ));
        // a curve reaching zero at c_max admits a zero budget
        let tradeoff = DistortionSpec::tradeoff_preset();
        assert_abs_diff_eq!(
            tradeoff.min_processing_for(0.0).unwrap(),
            2.5,
            epsilon = 1e-12
        );
    }

    #[test]
    fn invalid_specs_rejected() {
        assert!(DistortionSpec::exponential(1.0, 1.0, 0.5, 1.0).is_err());
        assert!(DistortionSpec::inverse_linear(1.0, 1.0, 0.0, 1.0).is_err());
        assert!(DistortionSpec::inverse_linear(-1.0, 1.0, 1.0, 1.0).is_err());
        assert!(DistortionSpec::exponential(1.0, 0.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn presets_validate() {
        DistortionSpec::unit_exponential().validate().unwrap();
        let preset = DistortionSpec::tradeoff_preset();
        preset.validate().unwrap();
        assert_abs_diff_eq!(preset.eval(2.5).unwrap(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn sensor_fusion_substitution() {
        let spec = sensor_fusion_spec(1.0, 0.0, 1.0, 10).unwrap();
        assert_eq!(spec.kind, DistortionKind::InverseLinear);
        assert_eq!((spec.a, spec.b, spec.d, spec.c_max), (1.0, 1.0, 1.0, 10.0));
        assert_eq!(sensor_fusion_spec(2.0, 1.0, 1.0, 5).unwrap().d, 1.0);
        assert!(sensor_fusion_spec(0.0, 0.0, 1.0, 5).is_err());
        assert!(sensor_fusion_spec(1.0, 0.0, -1.0, 5).is_err());
        assert!(sensor_fusion_spec(1.0, 0.0, 1.0, 0).is_err());
    }

    #[test]
    fn sensor_fusion_matches_estimator_mse() {
        let spec = sensor_fusion_spec(1.0, 0.0, 1.0, 10).unwrap();
        assert_abs_diff_eq!(spec.eval(1.0).unwrap(), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(linear_estimator_mse(1.0, 0.0, 1.0, 1), 0.5, epsilon = 1e-12);

        for &(sigma_sq, mu, sx) in &[(1.0, 0.0, 1.0), (2.0, 1.0, 1.0), (0.3, -2.0, 0.7)] {
            let spec = sensor_fusion_spec(sigma_sq, mu, sx, 8).unwrap();
            for reads in 1..=3 {
                let direct = linear_estimator_mse(sigma_sq, mu, sx, reads);
                assert_abs_diff_eq!(spec.eval(reads as f64).unwrap(), direct, epsilon = 1e-12);
            }
        }
    }
}
