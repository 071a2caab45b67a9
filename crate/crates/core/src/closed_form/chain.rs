//! Schedules parametrized by a single free interval.
//!
//! When all but one degree of freedom is pinned by tight constraints, every
//! interval is an affine function `y_i = offset_i + slope_i * eta` of the first
//! interval. The objective restricted to that line is a one-dimensional convex
//! quadratic, assembled here term by term rather than from an expanded formula.

#[derive(Debug, Clone)]
pub(crate) struct AffineChain {
    offset: Vec<f64>,
    slope: Vec<f64>,
}

/// `offset + slope * eta >= 0`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct AffineBound {
    pub offset: f64,
    pub slope: f64,
}

impl AffineChain {
    /// Chain with `y_1 = eta`, `y_i = shift + factor * y_{i-1}` for `i = 2..N`,
    /// and `y_{N+1} = horizon - sum_{i<=N} y_i`.
    pub fn recurrence(updates: usize, horizon: f64, shift: f64, factor: f64) -> Self {
        let mut offset = Vec::with_capacity(updates + 1);
        let mut slope = Vec::with_capacity(updates + 1);
        offset.push(0.0);
        slope.push(1.0);
        for i in 1..updates {
            offset.push(shift + factor * offset[i - 1]);
            slope.push(factor * slope[i - 1]);
        }
        let sum_offset: f64 = offset.iter().sum();
        let sum_slope: f64 = slope.iter().sum();
        offset.push(horizon - sum_offset);
        slope.push(-sum_slope);
        Self { offset, slope }
    }

    pub fn len(&self) -> usize {
        self.offset.len()
    }

    pub fn term(&self, i: usize) -> AffineBound {
        AffineBound {
            offset: self.offset[i],
            slope: self.slope[i],
        }
    }

    /// Minimizer of `sum_i quad_i * y_i^2 + lin_i * y_i` along the chain.
    pub fn argmin(&self, quad: &[f64], lin: &[f64]) -> f64 {
        let mut second = 0.0;
        let mut first = 0.0;
        for i in 0..self.len() {
            let (p, q) = (self.offset[i], self.slope[i]);
            second += quad[i] * q * q;
            first += 2.0 * quad[i] * p * q + lin[i] * q;
        }
        -first / (2.0 * second)
    }
}

/// Interval of `eta` satisfying every bound, or `None` when empty.
/// Range of `eta` satisfying every bound to within `slack`. A range that is
/// empty by no more than `slack` collapses to its upper end.
pub(crate) fn feasible_interval(bounds: &[AffineBound], slack: f64) -> Option<(f64, f64)> {
    let mut lo = f64::NEG_INFINITY;
    let mut hi = f64::INFINITY;
    for b in bounds {
        if b.slope > 0.0 {
            lo = lo.max(-b.offset / b.slope);
        } else if b.slope < 0.0 {
            hi = hi.min(b.offset / -b.slope);
        } else if b.offset < -slack {
            return None;
        }
    }
    (lo <= hi + slack).then_some((lo.min(hi), hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometric_chain_offsets_and_slopes() {
        let chain = AffineChain::recurrence(3, 10.0, 0.0, 1.5);
        let slopes: Vec<f64> = (0..4).map(|i| chain.term(i).slope).collect();
        assert_eq!(slopes, vec![1.0, 1.5, 2.25, -4.75]);
        assert_eq!(chain.term(3).offset, 10.0);
    }

    #[test]
    fn argmin_of_simple_quadratic() {
        // y_1 = eta, y_2 = 4 - eta; minimize y_1^2 + y_2^2 -> eta = 2
        let chain = AffineChain::recurrence(1, 4.0, 0.0, 0.0);
        assert!((chain.argmin(&[1.0, 1.0], &[0.0, 0.0]) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn interval_intersection() {
        let bounds = [
            AffineBound {
                offset: 0.0,
                slope: 1.0,
            },
            AffineBound {
                offset: 3.0,
                slope: -1.0,
            },
        ];
        assert_eq!(feasible_interval(&bounds, 0.0), Some((0.0, 3.0)));
        let empty = [
            AffineBound {
                offset: -2.0,
                slope: 1.0,
            },
            AffineBound {
                offset: 1.0,
                slope: -1.0,
            },
        ];
        assert_eq!(feasible_interval(&empty, 0.0), None);
        assert_eq!(
            feasible_interval(
                &[AffineBound {
                    offset: -1.0,
                    slope: 0.0
                }],
                0.0
            ),
            None
        );
    }
}
