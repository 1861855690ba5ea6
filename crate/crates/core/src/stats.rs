//! Paired Wilcoxon signed-rank test and sample summaries.

use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::error::{Error, Result};

/// Largest number of non-zero differences handled by the exact null
/// distribution.
pub const EXACT_LIMIT: usize = 25;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Exact,
    NormalApprox,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TestResult {
    /// `min(W+, W-)` over the non-zero differences.
    pub statistic: f64,
    /// Two-sided p-value.
    pub p_value: f64,
    /// Number of non-zero differences.
    pub n_effective: usize,
    pub method: Method,
}

/// Ranks of `|d|` doubled so that midranks stay integral, with the sizes of
/// the tie groups.
fn doubled_ranks(d: &[f64]) -> (Vec<u64>, Vec<usize>) {
    let mut order: Vec<usize> = (0..d.len()).collect();
    order.sort_by(|&i, &j| d[i].abs().total_cmp(&d[j].abs()));
    let mut ranks = vec![0u64; d.len()];
    let mut ties = Vec::new();
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && d[order[end]].abs() == d[order[start]].abs() {
            end += 1;
        }
        // Ranks start+1..=end share their mean; doubled that is start+1+end.
        let r2 = (start + 1 + end) as u64;
        for &i in &order[start..end] {
            ranks[i] = r2;
        }
        ties.push(end - start);
        start = end;
    }
    (ranks, ties)
}

/// Number of sign assignments giving each doubled positive-rank sum.
fn null_counts(ranks: &[u64]) -> Vec<u64> {
    let total: u64 = ranks.iter().sum();
    let mut counts = vec![0u64; total as usize + 1];
    counts[0] = 1;
    let mut reach = 0usize;
    for &r in ranks {
        let r = r as usize;
        for s in (0..=reach).rev() {
            if counts[s] != 0 {
                counts[s + r] += counts[s];
            }
        }
        reach += r;
    }
    counts
}

/// Two-sided exact p-value for the doubled positive-rank sum `w2`.
fn exact_p_value(ranks: &[u64], w2: u64) -> f64 {
    let counts = null_counts(ranks);
    let w2 = w2 as usize;
    let lower: u64 = counts[..=w2].iter().sum();
    let upper: u64 = counts[w2..].iter().sum();
    let total = 2f64.powi(ranks.len() as i32);
    (2.0 * lower.min(upper) as f64 / total).min(1.0)
}

/// Largest number of non-zero differences the exact path accepts when
/// forced; the permutation counts are held in `u64`.
pub const EXACT_MAX: usize = 62;

/// Paired two-sided Wilcoxon signed-rank test of `a` against `b`.
///
/// Zero differences are dropped and tied magnitudes receive midranks. Up to
/// [`EXACT_LIMIT`] non-zero differences the p-value comes from the exact
/// permutation distribution given the tie pattern; above it from the normal
/// approximation with tie-corrected variance and continuity correction.
/// When every difference is zero the result is `p = 1` with statistic 0.
pub fn wilcoxon_signed_rank(a: &[f64], b: &[f64]) -> Result<TestResult> {
    wilcoxon_signed_rank_with(a, b, None)
}

/// [`wilcoxon_signed_rank`] with the p-value method forced when `method`
/// is given. The exact method accepts at most [`EXACT_MAX`] non-zero
/// differences.
pub fn wilcoxon_signed_rank_with(a: &[f64], b: &[f64], method: Option<Method>) -> Result<TestResult> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch(a.len(), b.len()));
    }
    if let Some(x) = a.iter().chain(b).find(|x| !x.is_finite()) {
        return Err(Error::InvalidArgument(format!("samples must be finite, got {x}")));
    }
    let d: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).filter(|&x| x != 0.0).collect();
    let n = d.len();
    if n == 0 && !a.is_empty() {
        return Ok(TestResult {
            statistic: 0.0,
            p_value: 1.0,
            n_effective: 0,
            method: Method::Exact,
        });
    }
    if n < 5 {
        return Err(Error::TooFewPairs(n));
    }
    let method = method.unwrap_or(if n <= EXACT_LIMIT {
        Method::Exact
    } else {
        Method::NormalApprox
    });
    if method == Method::Exact && n > EXACT_MAX {
        return Err(Error::InvalidArgument(format!(
            "exact p-values need at most {EXACT_MAX} non-zero differences, got {n}"
        )));
    }
    let (ranks, ties) = doubled_ranks(&d);
    let w2_plus: u64 = ranks.iter().zip(&d).filter(|(_, &x)| x > 0.0).map(|(r, _)| r).sum();
    let total2 = (n * (n + 1)) as u64;
    let statistic = w2_plus.min(total2 - w2_plus) as f64 / 2.0;

    let p_value = match method {
        Method::Exact => exact_p_value(&ranks, w2_plus),
        Method::NormalApprox => {
            let nf = n as f64;
            let mean = nf * (nf + 1.0) / 4.0;
            let tie_term: f64 = ties.iter().map(|&t| (t * t * t - t) as f64).sum::<f64>() / 48.0;
            let variance = nf * (nf + 1.0) * (2.0 * nf + 1.0) / 24.0 - tie_term;
            let z = ((w2_plus as f64 / 2.0 - mean).abs() - 0.5).max(0.0) / variance.sqrt();
            libm::erfc(z / std::f64::consts::SQRT_2).min(1.0)
        }
    };
    Ok(TestResult {
        statistic,
        p_value,
        n_effective: n,
        method,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Summary {
    pub mean: f64,
    /// Sample standard deviation (`n - 1` denominator; 0 when `n = 1`).
    pub std: f64,
    pub stderr: f64,
    pub ci95_low: f64,
    pub ci95_high: f64,
    pub n: usize,
}

/// Mean, spread and Student-t 95% confidence interval. A single
/// observation gives zero spread and a degenerate interval.
pub fn summarize(samples: &[f64]) -> Result<Summary> {
    let n = samples.len();
    if n == 0 {
        return Err(Error::EmptySample);
    }
    let nf = n as f64;
    let mean = samples.iter().sum::<f64>() / nf;
    if n == 1 {
        return Ok(Summary {
            mean,
            std: 0.0,
            stderr: 0.0,
            ci95_low: mean,
            ci95_high: mean,
            n,
        });
    }
    let var = samples.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (nf - 1.0);
    let std = var.sqrt();
    let stderr = std / nf.sqrt();
    let t = StudentsT::new(0.0, 1.0, nf - 1.0)
        .expect("positive degrees of freedom")
        .inverse_cdf(0.975);
    Ok(Summary {
        mean,
        std,
        stderr,
        ci95_low: mean - t * stderr,
        ci95_high: mean + t * stderr,
        n,
    })
}
