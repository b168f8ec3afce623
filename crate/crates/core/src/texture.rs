//! Texture profiles and texture-transition detection on binary recurrence
//! matrices.
//!
//! A transition at index `j` is a place where the epoch just before `j` and
//! the epoch just after it each recur internally but do not recur into each
//! other. With `A = [j-w, j)` and `B = [j, j+w)` the score is
//!
//! ```text
//! s(j) = mean(rp[A x A]) + mean(rp[B x B]) - 2 * mean(rp[A x B])
//! ```
//!
//! which is 0 for homogeneous texture and 2 for two fully recurrent epochs
//! with no cross recurrence.

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::recurrence::RecurrenceMatrix;
use crate::scalar::Scalar;

/// Summed-area table over the bits of a recurrence matrix.
struct BlockCounts {
    stride: usize,
    table: Vec<u32>,
}

impl BlockCounts {
    fn new<T: Scalar>(rp: &RecurrenceMatrix<T>) -> Self {
        let n = rp.size();
        let stride = n + 1;
        let mut table = vec![0u32; stride * stride];
        for i in 0..n {
            let mut row_sum = 0u32;
            for j in 0..n {
                row_sum += u32::from(rp.get(i, j));
                table[(i + 1) * stride + j + 1] = table[i * stride + j + 1] + row_sum;
            }
        }
        Self { stride, table }
    }

    /// Set bits in rows `r0..r1`, columns `c0..c1`.
    fn count(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> i64 {
        let at = |r: usize, c: usize| i64::from(self.table[r * self.stride + c]);
        at(r1, c1) - at(r0, c1) - at(r1, c0) + at(r0, c0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TextureProfile {
    pub window: usize,
    pub densities: Vec<f64>,
}

/// `densities[j]` is the fraction of set bits in rows `max(0, j-w+1)..=j`
/// across all columns.
pub fn column_density<T: Scalar>(rp: &RecurrenceMatrix<T>, window: usize) -> Result<TextureProfile> {
    let n = rp.size();
    if window < 1 || window > n {
        return Err(Error::WindowTooLarge { window, size: n });
    }
    let row_counts: Vec<u64> = (0..n)
        .map(|i| (0..n).filter(|&j| rp.get(i, j)).count() as u64)
        .collect();
    let mut densities = Vec::with_capacity(n);
    let mut running = 0u64;
    for j in 0..n {
        running += row_counts[j];
        if j >= window {
            running -= row_counts[j - window];
        }
        let rows = (j + 1).min(window) as f64;
        densities.push(running as f64 / (rows * n as f64));
    }
    Ok(TextureProfile { window, densities })
}

/// Block-dissimilarity score at each candidate index `w..M-w`.
///
/// Entry `k` of the result belongs to index `w + k`.
pub fn transition_scores<T: Scalar>(rp: &RecurrenceMatrix<T>, window: usize) -> Result<Vec<f64>> {
    let n = rp.size();
    if window < 1 || 2 * window > n {
        return Err(Error::WindowTooLarge { window, size: n });
    }
    let counts = BlockCounts::new(rp);
    let w = window;
    let area = (w * w) as f64;
    Ok((w..n - w)
        .map(|j| {
            let before = counts.count(j - w, j, j - w, j);
            let after = counts.count(j, j + w, j, j + w);
            let cross = counts.count(j - w, j, j, j + w);
            (before + after - 2 * cross) as f64 / area
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransitionParams {
    pub window: usize,
    pub score_threshold: f64,
    pub min_separation: usize,
}

impl Default for TransitionParams {
    fn default() -> Self {
        Self {
            window: 30,
            score_threshold: 0.5,
            min_separation: 30,
        }
    }
}

impl TransitionParams {
    /// Parameters with `min_separation` defaulting to `window`.
    pub fn with_window(window: usize, score_threshold: f64) -> Self {
        Self {
            window,
            score_threshold,
            min_separation: window,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Transition {
    pub index: usize,
    pub date: NaiveDate,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransitionReport {
    /// Sorted by score descending, ties by lower index.
    pub transitions: Vec<Transition>,
    pub params: TransitionParams,
}

impl TransitionReport {
    pub fn top(&self) -> Option<&Transition> {
        self.transitions.first()
    }

    /// Fixed-width table for terminals.
    pub fn to_table(&self) -> String {
        let mut out = format!("{:>4}  {:>8}  {:<10}  {:>8}\n", "rank", "index", "date", "score");
        for (rank, t) in self.transitions.iter().enumerate() {
            out.push_str(&format!(
                "{:>4}  {:>8}  {:<10}  {:>8.4}\n",
                rank + 1,
                t.index,
                t.date,
                t.score
            ));
        }
        if self.transitions.is_empty() {
            out.push_str("(no transitions above threshold)\n");
        }
        out
    }
}

/// Reports local maxima of the block score above `score_threshold`, picked
/// greedily by score with `min_separation` suppression.
///
/// `dates[i]` is the date of state `i` and must cover every row of `rp`.
pub fn detect_transitions<T: Scalar>(
    rp: &RecurrenceMatrix<T>,
    dates: &[NaiveDate],
    params: TransitionParams,
) -> Result<TransitionReport> {
    if dates.len() != rp.size() {
        return Err(Error::SizeMismatch {
            left: rp.size(),
            right: dates.len(),
        });
    }
    if params.score_threshold.is_nan() || params.score_threshold < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "score_threshold must be nonnegative, got {}",
            params.score_threshold
        )));
    }
    if params.min_separation < 1 {
        return Err(Error::InvalidParameter("min_separation must be at least 1".into()));
    }
    let w = params.window;
    let scores = transition_scores(rp, w)?;

    let mut candidates: Vec<(usize, f64)> = (0..scores.len())
        .filter(|&k| {
            let s = scores[k];
            let left = k == 0 || s >= scores[k - 1];
            let right = k + 1 == scores.len() || s >= scores[k + 1];
            left && right && s > params.score_threshold
        })
        .map(|k| (k + w, scores[k]))
        .collect();
    candidates.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));

    let mut accepted: Vec<(usize, f64)> = Vec::new();
    for (index, score) in candidates {
        if accepted
            .iter()
            .all(|&(other, _)| index.abs_diff(other) >= params.min_separation)
        {
            accepted.push((index, score));
        }
    }
    Ok(TransitionReport {
        transitions: accepted
            .into_iter()
            .map(|(index, score)| Transition {
                index,
                date: dates[index],
                score,
            })
            .collect(),
        params,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::autoreg::{simulate, ArModel};
    use crate::recurrence::{recurrence_plot, EmbeddingConfig, ThresholdMode};
    use crate::series::TimeSeries;
    use proptest::prelude::*;

    type Rp = RecurrenceMatrix<f64>;

    fn dates(n: usize) -> Vec<NaiveDate> {
        NaiveDate::from_ymd_opt(2010, 7, 1).unwrap().iter_days().take(n).collect()
    }

    fn two_blocks(n: usize, split: usize) -> Rp {
        Rp::from_fn(n, |i, j| (i < split) == (j < split))
    }

    // Score straight from the definition, one cell at a time.
    fn brute_score(rp: &Rp, j: usize, w: usize) -> f64 {
        let mean = |r: std::ops::Range<usize>, c: std::ops::Range<usize>| {
            let mut hits = 0usize;
            for a in r.clone() {
                for b in c.clone() {
                    hits += rp.get(a, b) as usize;
                }
            }
            hits as f64 / (w * w) as f64
        };
        mean(j - w..j, j - w..j) + mean(j..j + w, j..j + w) - 2.0 * mean(j - w..j, j..j + w)
    }

    #[test]
    fn density_examples() {
        let ones = Rp::from_fn(10, |_, _| true);
        assert!(column_density(&ones, 3).unwrap().densities.iter().all(|&d| d == 1.0));
        let id = Rp::from_fn(8, |i, j| i == j);
        assert!(column_density(&id, 1).unwrap().densities.iter().all(|&d| d == 1.0 / 8.0));
        let blocks = two_blocks(8, 4);
        assert!(column_density(&blocks, 1).unwrap().densities.iter().all(|&d| d == 0.5));
        assert_eq!(
            column_density(&blocks, 9).unwrap_err(),
            Error::WindowTooLarge { window: 9, size: 8 }
        );
        assert!(column_density(&blocks, 0).is_err());
    }

    #[test]
    fn density_partial_windows() {
        // Rows 0..3 hold 1, 2, 3 set bits in a 4x4 lower-triangular pattern.
        let tri = Rp::from_fn(4, |i, j| j <= i);
        let p = column_density(&tri, 2).unwrap();
        assert_eq!(p.densities, vec![1.0 / 4.0, 3.0 / 8.0, 5.0 / 8.0, 7.0 / 8.0]);
    }

    #[test]
    fn homogeneous_matrices_score_zero() {
        for rp in [Rp::from_fn(40, |_, _| true), Rp::from_fn(40, |_, _| false)] {
            assert!(transition_scores(&rp, 5).unwrap().iter().all(|&s| s == 0.0));
        }
        let report = detect_transitions(&Rp::from_fn(40, |_, _| true), &dates(40), TransitionParams::with_window(5, 0.5)).unwrap();
        assert!(report.transitions.is_empty());
    }

    #[test]
    fn perfect_split_scores_two() {
        let rp = two_blocks(60, 25);
        let w = 10;
        let scores = transition_scores(&rp, w).unwrap();
        assert_eq!(scores[25 - w], 2.0);
        assert!(scores.iter().all(|&s| s <= 2.0));
        let report = detect_transitions(&rp, &dates(60), TransitionParams::with_window(w, 0.5)).unwrap();
        assert_eq!(report.transitions.len(), 1);
        let top = report.top().unwrap();
        assert_eq!((top.index, top.score), (25, 2.0));
        assert_eq!(top.date, dates(60)[25]);
    }

    #[test]
    fn detection_errors() {
        let rp = two_blocks(10, 5);
        assert!(matches!(
            detect_transitions(&rp, &dates(10), TransitionParams::with_window(6, 0.5)),
            Err(Error::WindowTooLarge { .. })
        ));
        assert!(matches!(
            detect_transitions(&rp, &dates(9), TransitionParams::with_window(2, 0.5)),
            Err(Error::SizeMismatch { .. })
        ));
        let mut p = TransitionParams::with_window(2, 0.5);
        p.min_separation = 0;
        assert!(detect_transitions(&rp, &dates(10), p).is_err());
        assert!(detect_transitions(&rp, &dates(10), TransitionParams::with_window(2, -1.0)).is_err());
    }

    #[test]
    fn regime_change_is_found() {
        let w = 30;
        let lvl1 = ArModel::new(0.1, vec![0.9], 0.05).unwrap();
        let lvl2 = ArModel::new(0.2, vec![0.9], 0.05).unwrap();
        for seed in 0..5u64 {
            let a = simulate(&lvl1, 500, seed, &[1.0]).unwrap();
            let b = simulate(&lvl2, 500, seed + 1000, &[2.0]).unwrap();
            let values: Vec<f64> = a.values().iter().chain(b.values()).copied().collect();
            let s = TimeSeries::from_values(dates(1)[0], values, "x").unwrap();
            let p = recurrence_plot(&s, EmbeddingConfig::default(), ThresholdMode::Global).unwrap();
            let report = detect_transitions(&p.matrix, &p.dates, TransitionParams::with_window(w, 0.5)).unwrap();
            let top = report.top().expect("a transition");
            assert!(top.index.abs_diff(500) <= w, "seed {seed}: {top:?}");
        }
    }

    #[test]
    fn white_noise_has_no_transition() {
        let white = ArModel::new(0.0, vec![0.0], 1.0).unwrap();
        for seed in 0..20u64 {
            let s = simulate(&white, 1000, seed, &[0.0]).unwrap();
            let p = recurrence_plot(&s, EmbeddingConfig::default(), ThresholdMode::Global).unwrap();
            let scores = transition_scores(&p.matrix, 50).unwrap();
            let max = scores.iter().copied().fold(f64::MIN, f64::max);
            assert!(max < 0.5, "seed {seed}: {max}");
        }
    }

    fn arb_symmetric() -> impl Strategy<Value = Rp> {
        (6usize..40).prop_flat_map(|n| {
            prop::collection::vec(any::<bool>(), n * n).prop_map(move |bits| {
                Rp::from_fn(n, |i, j| i == j || bits[i.min(j) * n + i.max(j)])
            })
        })
    }

    proptest! {
        #[test]
        fn scores_match_definition(rp in arb_symmetric(), w in 1usize..4) {
            let n = rp.size();
            prop_assume!(2 * w <= n);
            let scores = transition_scores(&rp, w).unwrap();
            prop_assert_eq!(scores.len(), n - 2 * w);
            for (k, &s) in scores.iter().enumerate() {
                prop_assert!((-2.0..=2.0).contains(&s));
                prop_assert!((s - brute_score(&rp, k + w, w)).abs() < 1e-12);
            }
        }

        #[test]
        fn reports_are_separated_and_deterministic(rp in arb_symmetric(), w in 1usize..4, sep in 1usize..6, thr in 0.0f64..1.0) {
            let n = rp.size();
            prop_assume!(2 * w <= n);
            let params = TransitionParams { window: w, score_threshold: thr, min_separation: sep };
            let a = detect_transitions(&rp, &dates(n), params).unwrap();
            let b = detect_transitions(&rp, &dates(n), params).unwrap();
            prop_assert_eq!(&a, &b);
            for (x, t) in a.transitions.iter().enumerate() {
                prop_assert!(t.index >= w && t.index < n - w);
                prop_assert!(t.score > thr);
                for u in &a.transitions[x + 1..] {
                    prop_assert!(t.index.abs_diff(u.index) >= sep);
                    prop_assert!(t.score > u.score || (t.score == u.score && t.index < u.index));
                }
            }
        }
    }
}
