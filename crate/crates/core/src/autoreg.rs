//! AR(p) models: conditional least-squares fitting, recursive forecasting,
//! impulse responses and seeded simulation.
//!
//! The model is `X_i = c + sum_{j=1..p} rho_j * X_{i-j} + e_i` with white
//! noise `e_i` of standard deviation `noise_std`.

use chrono::NaiveDate;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::solve_symmetric;
use crate::scalar::Scalar;
use crate::series::TimeSeries;
use crate::stats::{detrend, fit_trend, mean_of, TrendModel};

/// First date of series produced by [`simulate`].
pub const SIMULATION_START: NaiveDate = match NaiveDate::from_ymd_opt(2000, 1, 1) {
    Some(d) => d,
    None => panic!("valid date"),
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ArModelRepr<T>", bound = "T: Scalar")]
pub struct ArModel<T> {
    pub c: T,
    pub rho: Vec<T>,
    pub p: usize,
    pub noise_std: T,
}

#[derive(Deserialize)]
#[serde(bound = "T: Scalar")]
struct ArModelRepr<T> {
    c: T,
    rho: Vec<T>,
    p: Option<usize>,
    noise_std: T,
}

impl<T: Scalar> TryFrom<ArModelRepr<T>> for ArModel<T> {
    type Error = Error;

    fn try_from(raw: ArModelRepr<T>) -> Result<Self> {
        if let Some(p) = raw.p {
            if p != raw.rho.len() {
                return Err(Error::InvalidParameter(format!(
                    "p = {p} but rho has {} coefficients",
                    raw.rho.len()
                )));
            }
        }
        ArModel::new(raw.c, raw.rho, raw.noise_std)
    }
}

impl<T: Scalar> ArModel<T> {
    pub fn new(c: T, rho: Vec<T>, noise_std: T) -> Result<Self> {
        if rho.is_empty() {
            return Err(Error::InvalidParameter("AR order must be at least 1".into()));
        }
        if !c.is_finite() || rho.iter().any(|r| !r.is_finite()) || !noise_std.is_finite() {
            return Err(Error::InvalidParameter("AR parameters must be finite".into()));
        }
        if noise_std < T::zero() {
            return Err(Error::InvalidParameter("noise_std must be nonnegative".into()));
        }
        Ok(Self {
            c,
            p: rho.len(),
            rho,
            noise_std,
        })
    }

    pub fn order(&self) -> usize {
        self.p
    }

    /// Whether every root of the characteristic polynomial lies inside the
    /// unit circle.
    ///
    /// Runs the step-down (reverse Levinson) recursion: the process is
    /// stationary iff every reflection coefficient has magnitude below one.
    pub fn is_stationary(&self) -> bool {
        let mut phi = self.rho.clone();
        while let Some(&k) = phi.last() {
            if k.abs() >= T::one() {
                return false;
            }
            let m = phi.len();
            let denom = T::one() - k * k;
            let lower: Vec<T> = (0..m - 1)
                .map(|j| (phi[j] + k * phi[m - 2 - j]) / denom)
                .collect();
            phi = lower;
        }
        true
    }

    /// Right-hand side of the model with zero noise, given the most recent
    /// `p` values in chronological order.
    fn step(&self, recent: &[T]) -> T {
        let n = recent.len();
        let mut acc = self.c;
        for (j, &r) in self.rho.iter().enumerate() {
            acc = acc + r * recent[n - 1 - j];
        }
        acc
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForecastResult<T> {
    pub horizon: usize,
    pub predictions: Vec<T>,
    /// True when predictions past the first step are built on earlier predictions.
    pub is_iterated: bool,
    /// Noise scale of the fitted model, for callers forming their own bands.
    pub noise_std: T,
}

/// Conditional OLS fit of an AR(p) model.
///
/// Regresses `X_i` on `1, X_{i-1}, ..., X_{i-p}` for `i = p..N`. The system is
/// solved on mean-centered regressors, then the intercept is recovered from
/// the means. `noise_std` is the RMS of the in-sample residuals.
pub fn fit_ar<T: Scalar>(series: &TimeSeries<T>, p: usize) -> Result<ArModel<T>> {
    if p == 0 {
        return Err(Error::InvalidParameter("AR order must be at least 1".into()));
    }
    let x = series.values();
    let n = x.len();
    if n < p + 2 {
        return Err(Error::InsufficientData {
            needed: p + 2,
            got: n,
        });
    }
    let rows = n - p;
    let target = &x[p..];
    // Column j (0-based) holds lag j+1.
    let lag = |j: usize| &x[p - 1 - j..n - 1 - j];

    let target_mean = mean_of(target);
    let lag_means: Vec<T> = (0..p).map(|j| mean_of(lag(j))).collect();

    let mut gram = vec![T::zero(); p * p];
    let mut rhs = vec![T::zero(); p];
    let mut centered = vec![T::zero(); p];
    for (i, &t) in target.iter().enumerate() {
        for j in 0..p {
            centered[j] = lag(j)[i] - lag_means[j];
        }
        let y = t - target_mean;
        for a in 0..p {
            rhs[a] = rhs[a] + centered[a] * y;
            for b in 0..p {
                gram[a * p + b] = gram[a * p + b] + centered[a] * centered[b];
            }
        }
    }
    let rho = solve_symmetric(&mut gram, &mut rhs, p).ok_or(Error::DegenerateSeries)?;
    let c = rho
        .iter()
        .zip(&lag_means)
        .fold(target_mean, |acc, (&r, &m)| acc - r * m);

    let mut sse = T::zero();
    for (i, &t) in target.iter().enumerate() {
        let mut fitted = c;
        for (j, &r) in rho.iter().enumerate() {
            fitted = fitted + r * lag(j)[i];
        }
        let e = t - fitted;
        sse = sse + e * e;
    }
    let noise_std = (sse / T::of_usize(rows)).sqrt();
    ArModel::new(c, rho, noise_std).map_err(|_| Error::DegenerateSeries)
}

/// Point forecast with the noise term set to zero.
///
/// Step `k` uses the last `p` values of `history` extended by predictions
/// `0..k`, so chaining single-step calls reproduces a multi-step call exactly.
pub fn forecast<T: Scalar>(
    model: &ArModel<T>,
    history: &[T],
    horizon: usize,
) -> Result<ForecastResult<T>> {
    let p = model.order();
    if history.len() < p {
        return Err(Error::InsufficientHistory {
            needed: p,
            got: history.len(),
        });
    }
    if horizon == 0 {
        return Err(Error::InvalidParameter("horizon must be at least 1".into()));
    }
    let mut window: Vec<T> = history[history.len() - p..].to_vec();
    window.reserve(horizon);
    let mut predictions = Vec::with_capacity(horizon);
    for _ in 0..horizon {
        let next = model.step(&window);
        predictions.push(next);
        window.push(next);
    }
    Ok(ForecastResult {
        horizon,
        predictions,
        is_iterated: horizon > 1,
        noise_std: model.noise_std,
    })
}

/// Response at lag `k` to a unit shock at lag 0: `psi_0 = 1`,
/// `psi_k = sum_{j=1..min(k,p)} rho_j * psi_{k-j}`.
pub fn impulse_response<T: Scalar>(model: &ArModel<T>, k: usize) -> T {
    impulse_responses(model, k)[k]
}

/// `psi_0..=psi_max_lag`.
pub fn impulse_responses<T: Scalar>(model: &ArModel<T>, max_lag: usize) -> Vec<T> {
    let mut psi = Vec::with_capacity(max_lag + 1);
    psi.push(T::one());
    for k in 1..=max_lag {
        let mut acc = T::zero();
        for (j, &r) in model.rho.iter().enumerate().take(k) {
            acc = acc + r * psi[k - 1 - j];
        }
        psi.push(acc);
    }
    psi
}

/// Draws `n` values from the model, starting from `initial`.
///
/// Noise is i.i.d. Gaussian with standard deviation `noise_std`, generated by
/// ChaCha8 seeded with `seed`. Dates are consecutive days from
/// [`SIMULATION_START`].
pub fn simulate<T: Scalar>(
    model: &ArModel<T>,
    n: usize,
    seed: u64,
    initial: &[T],
) -> Result<TimeSeries<T>> {
    let p = model.order();
    if initial.len() != p {
        return Err(Error::InvalidParameter(format!(
            "simulation needs {p} initial values, got {}",
            initial.len()
        )));
    }
    if n < p {
        return Err(Error::InvalidParameter(format!(
            "cannot simulate {n} values for an order-{p} model"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut values = Vec::with_capacity(n);
    values.extend_from_slice(initial);
    while values.len() < n {
        let z: f64 = StandardNormal.sample(&mut rng);
        let next = model.step(&values[values.len() - p..]) + model.noise_std * T::of(z);
        values.push(next);
    }
    TimeSeries::from_values(SIMULATION_START, values, "simulated")
}

/// Trend plus AR(p) residual model, as fitted by [`fit_trend_ar`].
#[derive(Debug, Clone, PartialEq)]
pub struct TrendArFit<T> {
    pub trend: TrendModel<T>,
    pub ar: ArModel<T>,
    pub residuals: TimeSeries<T>,
}

impl<T: Scalar> TrendArFit<T> {
    pub fn forecast(&self, horizon: usize) -> Result<ForecastResult<T>> {
        let n = self.residuals.len() as i64;
        let mut result = forecast(&self.ar, self.residuals.values(), horizon)?;
        for (k, pred) in result.predictions.iter_mut().enumerate() {
            *pred = *pred + self.trend.evaluate(n + k as i64);
        }
        Ok(result)
    }
}

/// Fits a polynomial trend, then an AR(p) model on the detrended residuals.
pub fn fit_trend_ar<T: Scalar>(
    series: &TimeSeries<T>,
    degree: usize,
    p: usize,
) -> Result<TrendArFit<T>> {
    let trend = fit_trend(series, degree)?;
    let residuals = detrend(series, &trend)?;
    let scale = series
        .values()
        .iter()
        .fold(T::zero(), |m, v| m.max(v.abs()));
    let spread = residuals
        .values()
        .iter()
        .fold(T::zero(), |m, v| m.max(v.abs()));
    // Residuals at rounding level carry no autoregressive signal.
    if spread <= T::of(64.0) * T::epsilon() * scale {
        return Err(Error::DegenerateSeries);
    }
    let ar = fit_ar(&residuals, p)?;
    Ok(TrendArFit {
        trend,
        ar,
        residuals,
    })
}

/// Trend extrapolation at indices `N..N+horizon` plus the AR forecast of the
/// detrended residuals.
pub fn forecast_with_trend<T: Scalar>(
    series: &TimeSeries<T>,
    degree: usize,
    p: usize,
    horizon: usize,
) -> Result<ForecastResult<T>> {
    fit_trend_ar(series, degree, p)?.forecast(horizon)
}
