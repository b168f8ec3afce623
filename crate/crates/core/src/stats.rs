//! Series statistics: mean, the self-calibrating recurrence threshold and
//! polynomial trend lines.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::solve_symmetric;
use crate::scalar::Scalar;
use crate::series::TimeSeries;

/// Arithmetic mean of a nonempty slice.
///
/// Accumulates deviations from the first element, so a constant slice
/// returns that constant exactly.
pub fn mean_of<T: Scalar>(values: &[T]) -> T {
    assert!(!values.is_empty(), "mean of an empty slice");
    let pivot = values[0];
    let shifted: T = values.iter().map(|&v| v - pivot).sum();
    pivot + shifted / T::of_usize(values.len())
}

/// Population RMS deviation `sqrt((1/N) * sum (x_i - mean)^2)` of a nonempty slice.
///
/// Two passes with the usual correction term for the rounding error left in
/// the mean. Zero exactly when all values are equal.
pub fn threshold_of<T: Scalar>(values: &[T]) -> T {
    let n = T::of_usize(values.len());
    let m = mean_of(values);
    let (sq, lin) = values.iter().fold((T::zero(), T::zero()), |(sq, lin), &v| {
        let d = v - m;
        (sq + d * d, lin + d)
    });
    let var = (sq - lin * lin / n) / n;
    var.max(T::zero()).sqrt()
}

pub fn mean<T: Scalar>(series: &TimeSeries<T>) -> T {
    mean_of(series.values())
}

/// Recurrence threshold: the population standard deviation of the series.
pub fn threshold<T: Scalar>(series: &TimeSeries<T>) -> T {
    threshold_of(series.values())
}

/// Polynomial trend in the observation index.
///
/// Evaluates to `sum_k coefficients[k] * (i - origin_index)^k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrendModel<T> {
    pub degree: usize,
    pub coefficients: Vec<T>,
    pub origin_index: i64,
}

impl<T: Scalar> TrendModel<T> {
    pub fn new(coefficients: Vec<T>, origin_index: i64) -> Result<Self> {
        if coefficients.is_empty() || coefficients.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidParameter(
                "trend needs at least one finite coefficient".into(),
            ));
        }
        Ok(Self {
            degree: coefficients.len() - 1,
            coefficients,
            origin_index,
        })
    }

    pub fn zero(degree: usize) -> Self {
        Self {
            degree,
            coefficients: vec![T::zero(); degree + 1],
            origin_index: 0,
        }
    }

    pub fn evaluate(&self, index: i64) -> T {
        let t = T::of((index - self.origin_index) as f64);
        self.coefficients
            .iter()
            .rev()
            .fold(T::zero(), |acc, &c| acc * t + c)
    }
}

/// Ordinary least-squares polynomial trend of degree 1 or 2 on indices `0..N`.
///
/// The fit is solved on indices centered at `(N-1)/2` and the coefficients
/// are then re-expanded about index 0, so the returned model has
/// `origin_index == 0`.
pub fn fit_trend<T: Scalar>(series: &TimeSeries<T>, degree: usize) -> Result<TrendModel<T>> {
    if !(1..=2).contains(&degree) {
        return Err(Error::InvalidParameter(format!(
            "trend degree must be 1 or 2, got {degree}"
        )));
    }
    let n = series.len();
    if n <= degree {
        return Err(Error::SingularFit);
    }
    let k = degree + 1;
    let center = T::of((n as f64 - 1.0) / 2.0);

    // Normal equations in the centered regressor u = i - center.
    let mut gram = vec![T::zero(); k * k];
    let mut rhs = vec![T::zero(); k];
    let mut powers = vec![T::zero(); k];
    for (i, &y) in series.values().iter().enumerate() {
        let u = T::of_usize(i) - center;
        powers[0] = T::one();
        for p in 1..k {
            powers[p] = powers[p - 1] * u;
        }
        for r in 0..k {
            rhs[r] = rhs[r] + powers[r] * y;
            for c in 0..k {
                gram[r * k + c] = gram[r * k + c] + powers[r] * powers[c];
            }
        }
    }
    let centered = solve_symmetric(&mut gram, &mut rhs, k).ok_or(Error::SingularFit)?;

    // sum_p a_p (t - c)^p  =  sum_q b_q t^q  with  b_q = sum_{p>=q} a_p C(p,q) (-c)^(p-q)
    let mut coefficients = vec![T::zero(); k];
    for (p, &a) in centered.iter().enumerate() {
        let mut binom = T::one();
        for q in (0..=p).rev() {
            let shift = (-center).powi((p - q) as i32);
            coefficients[q] = coefficients[q] + a * binom * shift;
            // C(p, q-1) = C(p, q) * q / (p - q + 1)
            binom = binom * T::of_usize(q) / T::of_usize(p - q + 1);
        }
    }
    TrendModel::new(coefficients, 0).map_err(|_| Error::SingularFit)
}

/// Subtracts the trend value at each observation index.
pub fn detrend<T: Scalar>(series: &TimeSeries<T>, trend: &TrendModel<T>) -> Result<TimeSeries<T>> {
    let values = series
        .values()
        .iter()
        .enumerate()
        .map(|(i, &x)| x - trend.evaluate(i as i64))
        .collect();
    series.with_values(values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use chrono::NaiveDate;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn series(values: &[f64]) -> TimeSeries<f64> {
        TimeSeries::from_values(
            NaiveDate::from_ymd_opt(2010, 7, 1).unwrap(),
            values.to_vec(),
            "x",
        )
        .unwrap()
    }

    // Straightforward two-pass population standard deviation.
    fn two_pass_std(x: &[f64]) -> f64 {
        let n = x.len() as f64;
        let mut total = 0.0;
        for v in x {
            total += v;
        }
        let m = total / n;
        let mut ss = 0.0;
        for v in x {
            ss += (v - m) * (v - m);
        }
        (ss / n).sqrt()
    }

    #[test]
    fn mean_examples() {
        assert_eq!(mean(&series(&[1.0, 2.0, 3.0])), 2.0);
        assert_eq!(mean(&series(&[5.0])), 5.0);
        assert_eq!(mean(&series(&[0.0, 2.0])), 1.0);
        assert_eq!(mean_of(&[0.1, 0.1, 0.1]), 0.1);
    }

    #[test]
    fn threshold_examples() {
        assert_eq!(threshold(&series(&[5.0, 5.0, 5.0])), 0.0);
        assert_eq!(threshold(&series(&[0.1, 0.1, 0.1, 0.1, 0.1])), 0.0);
        assert_relative_eq!(
            threshold(&series(&[1.0, 2.0, 3.0])),
            (2.0f64 / 3.0).sqrt(),
            max_relative = 1e-15
        );
        assert_eq!(threshold(&series(&[0.0, 2.0])), 1.0);
        assert_relative_eq!(threshold(&series(&[1.0, 2.0, 3.0])), 0.816497, epsilon = 1e-6);
    }

    #[test]
    fn threshold_matches_two_pass_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let n = rng.random_range(2..=512);
            let level: f64 = rng.random_range(-100.0..100.0);
            let x: Vec<f64> = (0..n).map(|_| level + rng.random_range(-1.0..1.0)).collect();
            assert_relative_eq!(threshold_of(&x), two_pass_std(&x), max_relative = 1e-12);
        }
    }

    #[test]
    fn threshold_f32() {
        let x = [1.0f32, 2.0, 3.0];
        assert!((threshold_of(&x) - (2.0f32 / 3.0).sqrt()).abs() < 1e-6);
    }

    #[test]
    fn trend_examples() {
        let t = fit_trend(&series(&[5.0, 5.0, 5.0]), 1).unwrap();
        assert_eq!(t.coefficients, vec![5.0, 0.0]);
        assert_eq!(t.origin_index, 0);

        let t = fit_trend(&series(&[1.0, 2.0, 3.0]), 1).unwrap();
        assert_relative_eq!(t.coefficients[0], 1.0, epsilon = 1e-12);
        assert_relative_eq!(t.coefficients[1], 1.0, epsilon = 1e-12);

        let squares: Vec<f64> = (0..5).map(|i| (i * i) as f64).collect();
        let t = fit_trend(&series(&squares), 2).unwrap();
        for (got, want) in t.coefficients.iter().zip([0.0, 0.0, 1.0]) {
            assert!((got - want).abs() < 1e-9, "{:?}", t.coefficients);
        }
    }

    #[test]
    fn trend_errors() {
        assert_eq!(fit_trend(&series(&[1.0]), 1).unwrap_err(), Error::SingularFit);
        assert_eq!(fit_trend(&series(&[1.0, 2.0]), 2).unwrap_err(), Error::SingularFit);
        assert!(matches!(
            fit_trend(&series(&[1.0, 2.0, 3.0]), 3),
            Err(Error::InvalidParameter(_))
        ));
        assert!(matches!(
            fit_trend(&series(&[1.0, 2.0, 3.0]), 0),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn detrend_examples() {
        let s = series(&[1.0, 2.0, 3.0]);
        let line = TrendModel::new(vec![1.0, 1.0], 0).unwrap();
        assert_eq!(detrend(&s, &line).unwrap().values(), &[0.0, 0.0, 0.0]);
        assert_eq!(detrend(&s, &TrendModel::zero(1)).unwrap(), s);
        let c = series(&[5.0, 5.0, 5.0]);
        let flat = TrendModel::new(vec![5.0, 0.0], 0).unwrap();
        assert_eq!(detrend(&c, &flat).unwrap().values(), &[0.0, 0.0, 0.0]);
    }

    #[test]
    fn trend_with_offset_origin() {
        let t = TrendModel::new(vec![1.0, 2.0], 10).unwrap();
        assert_eq!(t.evaluate(10), 1.0);
        assert_eq!(t.evaluate(12), 5.0);
    }

    proptest! {
        #[test]
        fn threshold_translation_invariant(
            x in prop::collection::vec(-10.0f64..10.0, 2..200),
            c in -50.0f64..50.0,
        ) {
            let shifted: Vec<f64> = x.iter().map(|v| v + c).collect();
            let (a, b) = (threshold_of(&x), threshold_of(&shifted));
            prop_assume!(a > 0.1);
            prop_assert!((a - b).abs() <= 1e-12 * a, "{a} vs {b}");
        }

        #[test]
        fn threshold_scale_equivariant(
            x in prop::collection::vec(-10.0f64..10.0, 1..200),
            a in -8.0f64..8.0,
        ) {
            let scaled: Vec<f64> = x.iter().map(|v| v * a).collect();
            let want = a.abs() * threshold_of(&x);
            let got = threshold_of(&scaled);
            prop_assert!((got - want).abs() <= 1e-12 * want.max(f64::MIN_POSITIVE) + 1e-300);
        }

        #[test]
        fn trend_residuals_satisfy_normal_equations(
            x in prop::collection::vec(-100.0f64..100.0, 3..400),
            degree in 1usize..=2,
        ) {
            let s = series(&x);
            let trend = fit_trend(&s, degree).unwrap();
            let r = detrend(&s, &trend).unwrap();
            let n = x.len() as f64;
            let scale = x.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1.0);
            let tol = 1e-8 * n * scale;
            let sum: f64 = r.values().iter().sum();
            let moment: f64 = r.values().iter().enumerate().map(|(i, v)| i as f64 * v).sum();
            prop_assert!(sum.abs() <= tol, "sum {sum}");
            prop_assert!(moment.abs() <= tol, "moment {moment}");
        }
    }
}
