use super::{is_fractional, RoundingError};
use rand::Rng;

/// The two end points of the segment `x_i + x_j = const` inside the unit square,
/// and the probability of moving to `up` that keeps both marginals.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PairCorners {
    /// `(x_i + α, x_j − α)` with `α = min(1 − x_i, x_j)`.
    pub up: (f64, f64),
    /// `(x_i − β, x_j + β)` with `β = min(x_i, 1 − x_j)`.
    pub down: (f64, f64),
    /// `β / (α + β)`.
    pub p_up: f64,
}

pub fn pair_corners(xi: f64, xj: f64) -> Result<PairCorners, RoundingError> {
    if !(is_fractional(xi) && is_fractional(xj)) {
        return Err(RoundingError::DegeneratePair(xi, xj));
    }
    let alpha = (1.0 - xi).min(xj);
    let beta = xi.min(1.0 - xj);
    // Whichever coordinate hits the boundary is written exactly.
    let up = if 1.0 - xi <= xj { (1.0, xj - alpha) } else { (xi + xj, 0.0) };
    let down = if xi <= 1.0 - xj { (0.0, xj + beta) } else { (xi - beta, 1.0) };
    Ok(PairCorners {
        up,
        down,
        p_up: beta / (alpha + beta),
    })
}

/// Moves a fractional pair to one of its corners so that the sum is kept, at
/// least one entry becomes integral, and both expectations are unchanged.
pub fn pair_round<R: Rng + ?Sized>(xi: f64, xj: f64, rng: &mut R) -> Result<(f64, f64), RoundingError> {
    let c = pair_corners(xi, xj)?;
    Ok(if rng.gen::<f64>() < c.p_up { c.up } else { c.down })
}

/// Independent randomized rounding: bit `i` is 1 with probability `values[i]`.
pub fn round_independent<R: Rng + ?Sized>(values: &[f64], rng: &mut R) -> Vec<u8> {
    values
        .iter()
        .map(|&v| {
            if v <= 0.0 {
                0
            } else if v >= 1.0 {
                1
            } else {
                u8::from(rng.gen::<f64>() < v)
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::rng_from_seed;

    #[test]
    fn corners_of_worked_examples() {
        // α = 0.7, β = 0.1: up with probability 0.1 / 0.8.
        let c = pair_corners(0.3, 0.9).unwrap();
        assert_eq!(c.up.0, 1.0);
        assert!((c.up.1 - 0.2).abs() < 1e-12);
        assert!((c.down.0 - 0.2).abs() < 1e-12);
        assert_eq!(c.down.1, 1.0);
        assert!((c.p_up - 0.125).abs() < 1e-12);

        let c = pair_corners(0.25, 0.75).unwrap();
        assert_eq!(c.up, (1.0, 0.0));
        assert_eq!(c.down, (0.0, 1.0));
        assert!((c.p_up - 0.25).abs() < 1e-12);

        let c = pair_corners(0.5, 0.5).unwrap();
        assert_eq!((c.up, c.down, c.p_up), ((1.0, 0.0), (0.0, 1.0), 0.5));
    }

    #[test]
    fn rejects_integral_inputs() {
        assert!(pair_round(0.0, 0.5, &mut rng_from_seed(1)).is_err());
        assert!(pair_round(0.5, 1.0, &mut rng_from_seed(1)).is_err());
    }

    #[test]
    fn empirical_frequency_matches_probability() {
        let mut rng = rng_from_seed(5);
        let trials = 100_000;
        let ups = (0..trials)
            .filter(|_| pair_round(0.3, 0.9, &mut rng).unwrap().0 == 1.0)
            .count();
        let p = ups as f64 / trials as f64;
        let se = (0.125f64 * 0.875 / trials as f64).sqrt();
        assert!((p - 0.125).abs() < 4.0 * se, "p = {p}");
    }

    #[test]
    fn independent_extremes() {
        let mut rng = rng_from_seed(2);
        assert_eq!(round_independent(&[0.0; 5], &mut rng), vec![0; 5]);
        assert_eq!(round_independent(&[1.0; 5], &mut rng), vec![1; 5]);
    }

    #[test]
    fn independent_sum_is_binomial() {
        let mut rng = rng_from_seed(3);
        let trials = 100_000;
        let total: usize = (0..trials)
            .map(|_| round_independent(&[0.5; 20], &mut rng).iter().map(|&b| b as usize).sum::<usize>())
            .sum();
        let mean = total as f64 / trials as f64;
        // Binomial(20, 1/2): standard error of the mean is sqrt(5 / N) ≈ 0.007.
        assert!((mean - 10.0).abs() < 0.1, "mean = {mean}");
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn sum_is_conserved(xi in 0.001f64..0.999, xj in 0.001f64..0.999, seed: u64) {
                let (a, b) = pair_round(xi, xj, &mut rng_from_seed(seed)).unwrap();
                prop_assert!((a + b - xi - xj).abs() <= 1e-12);
                prop_assert!(a == 0.0 || a == 1.0 || b == 0.0 || b == 1.0);
                prop_assert!((0.0..=1.0).contains(&a) && (0.0..=1.0).contains(&b));
            }

            #[test]
            fn corners_keep_marginals(xi in 0.001f64..0.999, xj in 0.001f64..0.999) {
                let c = pair_corners(xi, xj).unwrap();
                let ei = c.p_up * c.up.0 + (1.0 - c.p_up) * c.down.0;
                let ej = c.p_up * c.up.1 + (1.0 - c.p_up) * c.down.1;
                prop_assert!((ei - xi).abs() < 1e-12);
                prop_assert!((ej - xj).abs() < 1e-12);
            }
        }
    }
}
