//! Delay embedding, Euclidean distance matrices, binary recurrence matrices
//! and two-series overlays.

use std::fmt::Write as _;

use chrono::NaiveDate;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::series::{format_sig17, TimeSeries};
use crate::stats::threshold_of;

/// Delay-embedding parameters, both in observation-index units.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbeddingConfig {
    pub dimension: usize,
    pub delay: usize,
}

impl Default for EmbeddingConfig {
    fn default() -> Self {
        Self {
            dimension: 1,
            delay: 1,
        }
    }
}

impl EmbeddingConfig {
    pub fn new(dimension: usize, delay: usize) -> Result<Self> {
        if dimension < 1 || delay < 1 {
            return Err(Error::InvalidParameter(format!(
                "embedding dimension and delay must be at least 1, got m={dimension} tau={delay}"
            )));
        }
        Ok(Self { dimension, delay })
    }

    /// Index span covered by one state: `(m - 1) * tau`.
    pub fn span(&self) -> usize {
        (self.dimension - 1) * self.delay
    }

    /// Number of states `N - (m - 1) * tau`, if at least one fits.
    pub fn embedded_len(&self, n: usize) -> Option<usize> {
        n.checked_sub(self.span()).filter(|&m| m >= 1)
    }
}

/// Sequence of embedded states stored contiguously, `dimension` values each.
#[derive(Debug, Clone, PartialEq)]
pub struct StateSpace<T> {
    config: EmbeddingConfig,
    coords: Vec<T>,
}

impl<T: Scalar> StateSpace<T> {
    pub fn len(&self) -> usize {
        self.coords.len() / self.config.dimension
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn dimension(&self) -> usize {
        self.config.dimension
    }

    pub fn config(&self) -> EmbeddingConfig {
        self.config
    }

    pub fn state(&self, i: usize) -> &[T] {
        let m = self.config.dimension;
        &self.coords[i * m..(i + 1) * m]
    }

    pub fn states(&self) -> impl Iterator<Item = &[T]> {
        self.coords.chunks_exact(self.config.dimension)
    }
}

/// State `i` is `(x_i, x_{i+tau}, ..., x_{i+(m-1)tau})`.
pub fn embed_values<T: Scalar>(values: &[T], config: EmbeddingConfig) -> Result<StateSpace<T>> {
    let m = config.embedded_len(values.len()).ok_or(Error::SeriesTooShort {
        len: values.len(),
        dimension: config.dimension,
        delay: config.delay,
    })?;
    let mut coords = Vec::with_capacity(m * config.dimension);
    for i in 0..m {
        for k in 0..config.dimension {
            coords.push(values[i + k * config.delay]);
        }
    }
    Ok(StateSpace { config, coords })
}

pub fn embed<T: Scalar>(series: &TimeSeries<T>, config: EmbeddingConfig) -> Result<StateSpace<T>> {
    embed_values(series.values(), config)
}

/// Date attached to each state: the date of its last coordinate, i.e. the
/// series dates offset by `(m - 1) * tau`.
pub fn state_dates<T: Scalar>(
    series: &TimeSeries<T>,
    config: EmbeddingConfig,
) -> Result<Vec<NaiveDate>> {
    let n = series.len();
    config.embedded_len(n).ok_or(Error::SeriesTooShort {
        len: n,
        dimension: config.dimension,
        delay: config.delay,
    })?;
    Ok(series.dates()[config.span()..].to_vec())
}

/// Dense symmetric matrix of pairwise Euclidean distances, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix<T> {
    size: usize,
    entries: Vec<T>,
}

impl<T: Scalar> DistanceMatrix<T> {
    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.entries[i * self.size + j]
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.entries[i * self.size..(i + 1) * self.size]
    }

    pub fn entries(&self) -> &[T] {
        &self.entries
    }

    pub fn max(&self) -> T {
        self.entries.iter().copied().fold(T::zero(), T::max)
    }

    /// Comma-separated rows, row 0 first, 17 significant digits per entry.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for i in 0..self.size {
            for (j, v) in self.row(i).iter().enumerate() {
                if j > 0 {
                    out.push(',');
                }
                out.push_str(&format_sig17(v.to_f64_lossy()));
            }
            out.push('\n');
        }
        out
    }
}

#[inline]
fn euclidean<T: Scalar>(a: &[T], b: &[T]) -> T {
    if a.len() == 1 {
        return (a[0] - b[0]).abs();
    }
    a.iter()
        .zip(b)
        .map(|(&x, &y)| (x - y) * (x - y))
        .fold(T::zero(), |acc, d| acc + d)
        .sqrt()
}

/// All pairwise Euclidean distances between states.
///
/// Rows are computed in parallel. Each entry depends only on its two states
/// and `(x - y)^2 == (y - x)^2` holds exactly, so the result is symmetric and
/// identical to the sequential double loop.
pub fn distance_matrix<T: Scalar>(states: &StateSpace<T>) -> DistanceMatrix<T> {
    let size = states.len();
    let mut entries = vec![T::zero(); size * size];
    entries
        .par_chunks_mut(size.max(1))
        .enumerate()
        .for_each(|(i, row)| {
            let si = states.state(i);
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = euclidean(si, states.state(j));
            }
        });
    DistanceMatrix { size, entries }
}

/// Square bit matrix, one packed run of `u64` words per row.
#[derive(Debug, Clone, PartialEq, Eq)]
struct BitMatrix {
    size: usize,
    words_per_row: usize,
    words: Vec<u64>,
}

impl BitMatrix {
    fn from_fn(size: usize, f: impl Fn(usize, usize) -> bool + Sync) -> Self {
        let words_per_row = size.div_ceil(64);
        let mut words = vec![0u64; size * words_per_row];
        if words_per_row > 0 {
            words
                .par_chunks_mut(words_per_row)
                .enumerate()
                .for_each(|(i, row)| {
                    for j in 0..size {
                        if f(i, j) {
                            row[j / 64] |= 1 << (j % 64);
                        }
                    }
                });
        }
        Self {
            size,
            words_per_row,
            words,
        }
    }

    #[inline]
    fn get(&self, i: usize, j: usize) -> bool {
        (self.words[i * self.words_per_row + j / 64] >> (j % 64)) & 1 == 1
    }

    fn count_ones(&self) -> u64 {
        self.words.iter().map(|w| u64::from(w.count_ones())).sum()
    }
}

/// Threshold that produced a [`RecurrenceMatrix`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum ThresholdKind<T> {
    /// One cutoff for every cell.
    Global { value: T },
    /// Per-state cutoffs; cell `(i, j)` uses `min(per_state[i], per_state[j])`.
    Local { window: usize, per_state: Vec<T> },
    /// Built directly from bits, no threshold involved.
    Explicit,
}

/// Binary recurrence matrix; bit `(i, j)` is set when states `i` and `j` recur.
#[derive(Debug, Clone, PartialEq)]
pub struct RecurrenceMatrix<T> {
    bits: BitMatrix,
    threshold: ThresholdKind<T>,
}

impl<T: Scalar> RecurrenceMatrix<T> {
    /// Matrix with bit `(i, j)` = `f(i, j)`. Symmetry is the caller's business.
    pub fn from_fn(size: usize, f: impl Fn(usize, usize) -> bool + Sync) -> Self {
        Self {
            bits: BitMatrix::from_fn(size, f),
            threshold: ThresholdKind::Explicit,
        }
    }

    pub fn size(&self) -> usize {
        self.bits.size
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.bits.get(i, j)
    }

    pub fn threshold(&self) -> &ThresholdKind<T> {
        &self.threshold
    }

    /// The single cutoff used, when there was one.
    pub fn threshold_used(&self) -> Option<T> {
        match self.threshold {
            ThresholdKind::Global { value } => Some(value),
            _ => None,
        }
    }

    pub fn count_ones(&self) -> u64 {
        self.bits.count_ones()
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.size();
        (0..n).all(|i| (i + 1..n).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// One line per row of `0`/`1` characters; row 0 is the earliest state.
    pub fn to_text_grid(&self) -> String {
        let n = self.size();
        let mut out = String::with_capacity(n * (n + 1));
        for i in 0..n {
            for j in 0..n {
                out.push(if self.get(i, j) { '1' } else { '0' });
            }
            out.push('\n');
        }
        out
    }
}

/// `bits[i][j] = 1` iff `distance(i, j) <= threshold`.
///
/// Equality counts as recurrence, so the diagonal is always set.
pub fn binary_rp<T: Scalar>(distances: &DistanceMatrix<T>, threshold: T) -> Result<RecurrenceMatrix<T>> {
    if threshold.is_nan() || threshold < T::zero() {
        return Err(Error::NegativeThreshold(threshold.to_f64_lossy()));
    }
    Ok(RecurrenceMatrix {
        bits: BitMatrix::from_fn(distances.size(), |i, j| distances.get(i, j) <= threshold),
        threshold: ThresholdKind::Global { value: threshold },
    })
}

/// Recurrence with per-state cutoffs: `distance(i, j) <= min(t_i, t_j)`.
pub fn binary_rp_local<T: Scalar>(
    distances: &DistanceMatrix<T>,
    per_state: Vec<T>,
    window: usize,
) -> Result<RecurrenceMatrix<T>> {
    if per_state.len() != distances.size() {
        return Err(Error::SizeMismatch {
            left: distances.size(),
            right: per_state.len(),
        });
    }
    if let Some(&bad) = per_state.iter().find(|t| t.is_nan() || **t < T::zero()) {
        return Err(Error::NegativeThreshold(bad.to_f64_lossy()));
    }
    let bits = BitMatrix::from_fn(distances.size(), |i, j| {
        distances.get(i, j) <= per_state[i].min(per_state[j])
    });
    Ok(RecurrenceMatrix {
        bits,
        threshold: ThresholdKind::Local { window, per_state },
    })
}

/// Population standard deviation over a centered window of length `window`
/// around every index, shifted inward at the series ends so each window
/// holds exactly `window` observations.
pub fn local_thresholds<T: Scalar>(values: &[T], window: usize) -> Result<Vec<T>> {
    let n = values.len();
    if window == 0 || window > n {
        return Err(Error::WindowTooLarge { window, size: n });
    }
    Ok((0..n)
        .map(|t| {
            let start = t.saturating_sub(window / 2).min(n - window);
            threshold_of(&values[start..start + window])
        })
        .collect())
}

/// How the recurrence cutoff is chosen by [`recurrence_plot`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "mode")]
pub enum ThresholdMode {
    /// Standard deviation of the whole series.
    Global,
    /// Standard deviation over a sliding window of the series.
    Local { window: usize },
}

impl ThresholdMode {
    /// `0` selects the global threshold.
    pub fn from_window(window: usize) -> Self {
        if window == 0 {
            ThresholdMode::Global
        } else {
            ThresholdMode::Local { window }
        }
    }
}

/// Embedding, distances and binary matrix for one series.
#[derive(Debug, Clone)]
pub struct RecurrencePlot<T> {
    pub states: StateSpace<T>,
    pub distances: DistanceMatrix<T>,
    pub matrix: RecurrenceMatrix<T>,
    pub dates: Vec<NaiveDate>,
}

/// Series to binary recurrence matrix.
///
/// The threshold is always computed on the scalar series; with an embedding,
/// state `i` takes the local threshold of its last coordinate.
pub fn recurrence_plot<T: Scalar>(
    series: &TimeSeries<T>,
    config: EmbeddingConfig,
    mode: ThresholdMode,
) -> Result<RecurrencePlot<T>> {
    let states = embed(series, config)?;
    let dates = state_dates(series, config)?;
    let distances = distance_matrix(&states);
    let matrix = match mode {
        ThresholdMode::Global => binary_rp(&distances, threshold_of(series.values()))?,
        ThresholdMode::Local { window } => {
            let local = local_thresholds(series.values(), window)?;
            binary_rp_local(&distances, local[config.span()..].to_vec(), window)?
        }
    };
    Ok(RecurrencePlot {
        states,
        distances,
        matrix,
        dates,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OverlayCell {
    Neither,
    OnlyA,
    OnlyB,
    Both,
}

impl OverlayCell {
    fn classify(a: bool, b: bool) -> Self {
        match (a, b) {
            (true, true) => OverlayCell::Both,
            (true, false) => OverlayCell::OnlyA,
            (false, true) => OverlayCell::OnlyB,
            (false, false) => OverlayCell::Neither,
        }
    }

    pub fn swapped(self) -> Self {
        match self {
            OverlayCell::OnlyA => OverlayCell::OnlyB,
            OverlayCell::OnlyB => OverlayCell::OnlyA,
            other => other,
        }
    }
}

/// Cellwise combination of two recurrence matrices of equal size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OverlayMatrix {
    size: usize,
    cells: Vec<OverlayCell>,
}

impl OverlayMatrix {
    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> OverlayCell {
        self.cells[i * self.size + j]
    }

    pub fn cells(&self) -> &[OverlayCell] {
        &self.cells
    }
}

pub fn overlay<T: Scalar>(a: &RecurrenceMatrix<T>, b: &RecurrenceMatrix<T>) -> Result<OverlayMatrix> {
    if a.size() != b.size() {
        return Err(Error::SizeMismatch {
            left: a.size(),
            right: b.size(),
        });
    }
    let size = a.size();
    let mut cells = Vec::with_capacity(size * size);
    for i in 0..size {
        for j in 0..size {
            cells.push(OverlayCell::classify(a.get(i, j), b.get(i, j)));
        }
    }
    Ok(OverlayMatrix { size, cells })
}

/// Fraction of set cells over all `M^2` cells.
pub fn recurrence_rate<T: Scalar>(rp: &RecurrenceMatrix<T>) -> f64 {
    let n = rp.size() as f64;
    if n == 0.0 {
        return 0.0;
    }
    rp.count_ones() as f64 / (n * n)
}

/// Debug rendering for small matrices.
impl<T: Scalar> std::fmt::Display for RecurrenceMatrix<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut s = String::new();
        for i in (0..self.size()).rev() {
            for j in 0..self.size() {
                let _ = write!(s, "{}", if self.get(j, i) { '#' } else { '.' });
            }
            s.push('\n');
        }
        f.write_str(&s)
    }
}
