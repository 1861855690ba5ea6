//! Interpolation error of linear predictors on an infinite grid.
//!
//! Data follow a stationary process with spectral density `F`; the predictor
//! is the best linear interpolator for density `F'`, whose transfer function
//! is `K̂'(ω) = F'(ω) / Σ_k F'(ω + k/h)`. Averaged over one grid cell its
//! mean squared error is
//!
//! ```text
//! σ² = ∫_ℝ F(ω) [ (1 - K̂'(ω))² + Σ_{k≠0} K̂'(ω + k/h)² ] dω.
//! ```
//!
//! When `F' = F` this collapses to `∫ F(ω) A(ω) dω` with the aliasing
//! fraction `A = 1 - K̂`, the error of the optimal predictor. For `F' ≠ F`
//! the aliasing-ratio functional `∫ F A'` is a different quantity: it is
//! not bounded below by the optimal error, and [`aliasing_ratio_error`]
//! exposes it separately.
//!
//! Both functionals are integrated after folding the line onto the
//! principal cell `|ω| ≤ 1/(2h)`, where the integrands are bounded, smooth
//! and built from alias sums without cancelling the dominant central
//! terms. On a two-dimensional grid the tensor-product densities factorize
//! and the error follows from one-dimensional cell integrals.

pub mod quadrature;

use std::cell::RefCell;
use std::f64::consts::PI;

pub use quadrature::{Integral, QuadratureSpec};

use crate::error::{Error, Result};
use crate::spectral::{cell_terms, transfer_pair, CellTerms, CovarianceModel, GridDesign};

/// Below this relative gap between `θ` and `θ'` the removable singularity in
/// the exponential closed form is evaluated by its series.
pub const SINGULARITY_EPS: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct ErrorQuery {
    pub true_model: CovarianceModel,
    pub used_model: CovarianceModel,
    pub design: GridDesign,
    pub quadrature: QuadratureSpec,
}

impl ErrorQuery {
    pub fn evaluate(&self) -> Result<f64> {
        misspec_error(&self.true_model, &self.used_model, &self.design, &self.quadrature)
    }
}

/// `K̂(ω) = F'(ω) / Σ_k F'(ω + k/h)`.
pub fn transfer_function(used_model: &CovarianceModel, omega: f64, h: f64) -> Result<f64> {
    Ok(transfer_pair(used_model, omega, h, crate::spectral::DEFAULT_SUM_TOLERANCE)?.0)
}

/// Error of the optimal predictor, `σ²(f̃, F)`.
pub fn matched_error(model: &CovarianceModel, design: &GridDesign, quad: &QuadratureSpec) -> Result<f64> {
    misspec_error(model, model, design, quad)
}

/// Error when data follow `true_model` but the predictor is built from
/// `used_model`, `σ²_H(f̃_θ', F)`. Never below the matched error of
/// `true_model`.
pub fn misspec_error(
    true_model: &CovarianceModel,
    used_model: &CovarianceModel,
    design: &GridDesign,
    quad: &QuadratureSpec,
) -> Result<f64> {
    check_query(true_model, used_model, quad)?;
    match design.steps() {
        [h] => cell_integral(true_model, used_model, *h, quad, CellTerms::misspec_integrand),
        [h1, h2] => {
            let axis = |h: f64| -> Result<(f64, f64)> {
                let error = cell_integral(true_model, used_model, h, quad, CellTerms::misspec_integrand)?;
                let ratio = cell_integral(true_model, used_model, h, quad, CellTerms::ratio_integrand)?;
                Ok((error, ratio))
            };
            let (e1, d1) = axis(*h1)?;
            let (e2, d2) = axis(*h2)?;
            let m = true_model.spectral_mass();
            Ok(combine_axes(m, (e1, d1), (e2, d2)))
        }
        _ => Err(bad_dimension(design)),
    }
}

/// The aliasing-ratio functional `∫ F(ω) A'(ω) dω` with
/// `A' = 1 - K̂'`. Equals [`misspec_error`] when both models coincide.
pub fn aliasing_ratio_error(
    true_model: &CovarianceModel,
    used_model: &CovarianceModel,
    design: &GridDesign,
    quad: &QuadratureSpec,
) -> Result<f64> {
    check_query(true_model, used_model, quad)?;
    match design.steps() {
        [h] => cell_integral(true_model, used_model, *h, quad, CellTerms::ratio_integrand),
        [h1, h2] => {
            let d1 = cell_integral(true_model, used_model, *h1, quad, CellTerms::ratio_integrand)?;
            let d2 = cell_integral(true_model, used_model, *h2, quad, CellTerms::ratio_integrand)?;
            let m = true_model.spectral_mass();
            Ok(d1 * m + m * d2 - d1 * d2)
        }
        _ => Err(bad_dimension(design)),
    }
}

/// Two-dimensional error from per-axis `(error, ratio functional)` pairs.
///
/// Per axis write `C = M - D` for `∫ F K̂'` and `E = σ² - D` for
/// `∫ S_F Σ p² - ∫ F K̂'`; the product-grid error
/// `M² + I₁I₂ - 2C₁C₂` (with `I = C + E`) regroups into the sum below,
/// whose only possibly negative pieces are the `E` terms.
fn combine_axes(m: f64, (e1, d1): (f64, f64), (e2, d2): (f64, f64)) -> f64 {
    let (c1, c2) = (m - d1, m - d2);
    let (x1, x2) = (e1 - d1, e2 - d2);
    d1 * m + m * d2 - d1 * d2 + c1 * x2 + x1 * c2 + x1 * x2
}

fn check_query(true_model: &CovarianceModel, used_model: &CovarianceModel, quad: &QuadratureSpec) -> Result<()> {
    if true_model.profile() != used_model.profile() {
        return Err(Error::InvalidArgument(format!(
            "models use different profiles ({} vs {})",
            true_model.profile(),
            used_model.profile()
        )));
    }
    quad.validate()
}

fn bad_dimension(design: &GridDesign) -> Error {
    Error::InvalidDesign(format!("dimension must be 1 or 2, got {}", design.dimension()))
}

/// Relative accuracy requested from the aliased sums inside the integrand.
fn sum_tolerance(quad: &QuadratureSpec) -> f64 {
    (quad.relative_tolerance * 1e-2).clamp(1e-13, 1e-8)
}

/// `2 ∫_0^{1/(2h)} g(terms(w)) dw` for an even cell integrand `g`.
fn cell_integral(
    true_model: &CovarianceModel,
    used_model: &CovarianceModel,
    h: f64,
    quad: &QuadratureSpec,
    g: fn(&CellTerms) -> f64,
) -> Result<f64> {
    if !(h.is_finite() && h > 0.0) {
        return Err(Error::InvalidDesign(format!("step must be positive, got {h}")));
    }
    let tol = sum_tolerance(quad);
    let failure: RefCell<Option<Error>> = RefCell::new(None);
    let integrand = |w: f64| -> f64 {
        match cell_terms(true_model, used_model, w, h, tol) {
            Ok(c) => g(&c),
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                f64::NAN
            }
        }
    };

    let edge = 0.5 / h;
    let breaks = cell_breaks(edge, &[true_model.theta(), used_model.theta()]);
    let result = quadrature::integrate_partition(integrand, &breaks, quad);
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    Ok(2.0 * result?.value)
}

/// Break points on `[0, edge]` refined geometrically towards the origin
/// around the spectral scales of the two models.
fn cell_breaks(edge: f64, scales: &[f64]) -> Vec<f64> {
    let mut breaks = vec![0.0, edge];
    for &s in scales {
        let mut x = s * 8.0;
        for _ in 0..24 {
            if x < edge {
                breaks.push(x);
            }
            x *= 0.25;
        }
    }
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    breaks
}

/// Smoothness budget `L` and grid steps for the minimax error.
#[derive(Debug, Clone, PartialEq)]
pub struct MinimaxQuery {
    budget: f64,
    steps: Vec<f64>,
}

impl MinimaxQuery {
    pub fn new(budget: f64, steps: &[f64]) -> Result<Self> {
        if !(budget.is_finite() && budget > 0.0) {
            return Err(Error::InvalidArgument(format!("budget must be positive, got {budget}")));
        }
        if steps.is_empty() || steps.iter().any(|h| !(h.is_finite() && *h > 0.0)) {
            return Err(Error::InvalidArgument(
                "steps must be nonempty and positive".to_string(),
            ));
        }
        Ok(Self {
            budget,
            steps: steps.to_vec(),
        })
    }

    pub fn budget(&self) -> f64 {
        self.budget
    }

    pub fn steps(&self) -> &[f64] {
        &self.steps
    }
}

/// `R^H(L) = L / (2π²) · max_i h_i²`.
pub fn minimax_error(query: &MinimaxQuery) -> f64 {
    let h = query.steps.iter().copied().fold(0.0, f64::max);
    query.budget / (2.0 * PI * PI) * h * h
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("{name} must be positive, got {v}")))
    }
}

/// Leading term `(2/3)π²θh` of the exponential-density error as `θh → 0`.
pub fn exponential_error_asymptotic(theta: f64, h: f64) -> Result<f64> {
    check_positive("theta", theta)?;
    check_positive("h", h)?;
    Ok(2.0 / 3.0 * PI * PI * theta * h)
}

/// `(θ e^{-2πhθ'} - θ' e^{-2πhθ}) / (θ - θ')`, continuous at `θ = θ'`.
pub fn removable_ratio(theta: f64, theta_prime: f64, h: f64) -> f64 {
    let t = 2.0 * PI * h;
    let delta = theta_prime - theta;
    if delta.abs() < SINGULARITY_EPS * theta.max(theta_prime) {
        // e^{-tθ} (1 + θ (1 - e^{-tδ}) / δ), expanded to second order in δ.
        let series = t - t * t * delta / 2.0 + t.powi(3) * delta * delta / 6.0;
        (-t * theta).exp() * (1.0 + theta * series)
    } else {
        (theta * (-t * theta_prime).exp() - theta_prime * (-t * theta).exp()) / (theta - theta_prime)
    }
}

/// `1 - removable_ratio(θ, θ', h)` without cancellation.
///
/// Writing `q(x) = (1 - e^{-x})/x`, the quantity equals
/// `-t²θθ' q[tθ, tθ']` where `q[·,·]` is the first divided difference.
pub fn one_minus_removable_ratio(theta: f64, theta_prime: f64, h: f64) -> f64 {
    let t = 2.0 * PI * h;
    -t * t * theta * theta_prime * divided_difference_q(t * theta, t * theta_prime)
}

/// First divided difference of `q(x) = (1 - e^{-x})/x` on `x1, x2 ≥ 0`.
fn divided_difference_q(x1: f64, x2: f64) -> f64 {
    let (lo, hi) = if x1 <= x2 { (x1, x2) } else { (x2, x1) };
    if hi <= 1.0 {
        // q(x) = Σ_{n≥0} (-x)^n / (n+1)!, and (hi^n - lo^n)/(hi - lo) is the
        // complete homogeneous polynomial of degree n-1.
        let mut sum = 0.0_f64;
        let mut homogeneous = 1.0_f64; // degree 0
        let mut lo_pow = 1.0;
        let mut factorial = 2.0; // (n+1)! for n = 1
        let mut sign = -1.0_f64;
        for n in 1..40 {
            let term = sign * homogeneous / factorial;
            sum += term;
            if term.abs() < 1e-18 * sum.abs() {
                break;
            }
            lo_pow *= lo;
            homogeneous = hi * homogeneous + lo_pow;
            factorial *= (n + 2) as f64;
            sign = -sign;
        }
        return sum;
    }
    let d = hi - lo;
    // expm1(-d)/d, → -1 as d → 0.
    let e = if d > 1e-8 {
        (-d).exp_m1() / d
    } else {
        -1.0 + d / 2.0 - d * d / 6.0
    };
    -(-(-lo).exp_m1() + lo * (-lo).exp() * e) / (lo * hi)
}

/// Closed-form aliasing-ratio functional `∫ F_θ A_θ'` for printed
/// exponential densities `θ/(θ²+ω²)` with aliases at `k/h`.
///
/// Assembled from the three whole-line integrals
/// `∫F_θ = π`, `∫F_θF_θ' = π/(θ+θ')` and
/// `∫F_θF_θ' sin²(πhω) = π/(2(θ+θ')) (1 - g)` with `g` the
/// [`removable_ratio`], and the coth form of the aliased sum:
///
/// ```text
/// D = π - [1 + (1 - g) / (2 sinh²(πθ'h))] · tanh(πθ'h) / ((θ + θ') h)
/// ```
pub fn exponential_ratio_closed(theta: f64, theta_prime: f64, h: f64) -> Result<f64> {
    check_positive("theta", theta)?;
    check_positive("theta_prime", theta_prime)?;
    check_positive("h", h)?;
    Ok(PI - ratio_complement(theta, theta_prime, h))
}

/// `∫ F_θ K̂_θ'`, the part of the ratio functional subtracted from `π`.
fn ratio_complement(theta: f64, theta_prime: f64, h: f64) -> f64 {
    let b = PI * theta_prime * h;
    let one_minus_g = one_minus_removable_ratio(theta, theta_prime, h);
    let sinh = b.sinh();
    let bracket = 1.0 + one_minus_g / (2.0 * sinh * sinh);
    bracket * b.tanh() / ((theta + theta_prime) * h)
}

/// `sinh b - b cosh b`, accurate for small `b`.
fn sinh_minus_b_cosh(b: f64) -> f64 {
    if b.abs() < 0.5 {
        // -Σ_{n≥1} 2n b^{2n+1} / (2n+1)!
        let b2 = b * b;
        let mut power = b * b2;
        let mut factorial = 6.0;
        let mut sum = 0.0;
        for n in 1..20 {
            let term = 2.0 * n as f64 * power / factorial;
            sum += term;
            if term < 1e-17 * sum {
                break;
            }
            power *= b2;
            factorial *= ((2 * n + 2) * (2 * n + 3)) as f64;
        }
        -sum
    } else {
        b.sinh() - b * b.cosh()
    }
}

/// Closed-form error of the exponential predictor with parameter `θ'` on
/// data with parameter `θ`, printed densities, aliases at `k/h`.
///
/// Expanding the squares, the error is `π - 2∫F K̂' + ∫ S_F Σ_k p_k²`. The
/// middle term is the complement of [`exponential_ratio_closed`]. In the
/// last one every alias sum is a rational function of `cos 2πωh`
/// (`Σ F'_k²` is a `θ'`-derivative of the coth sum), and the cell integral
/// evaluates to
///
/// ```text
/// [α sinh a + α (cosh b - cosh a) + b sinh² b] / (2θ'h sinh² b),
/// a = 2πθh, b = 2πθ'h, α = sinh b - b cosh b.
/// ```
pub fn exponential_misspec_closed(theta: f64, theta_prime: f64, h: f64) -> Result<f64> {
    check_positive("theta", theta)?;
    check_positive("theta_prime", theta_prime)?;
    check_positive("h", h)?;
    let a = 2.0 * PI * theta * h;
    let b = 2.0 * PI * theta_prime * h;
    let (sa, sb) = (a.sinh(), b.sinh());
    let alpha = sinh_minus_b_cosh(b);
    let cosh_gap = 2.0 * (0.5 * (b + a)).sinh() * (0.5 * (b - a)).sinh();
    let squares = (alpha * sa + alpha * cosh_gap + b * sb * sb) / (2.0 * theta_prime * h * sb * sb);
    Ok(PI - 2.0 * ratio_complement(theta, theta_prime, h) + squares)
}

/// The three component integrals of the exponential closed form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentialComponents {
    /// `∫ θ/(θ²+ω²) dω`
    pub density: f64,
    /// `∫ θθ'/((θ²+ω²)(θ'²+ω²)) dω`
    pub cross: f64,
    /// `∫ θθ' sin²(πωh)/((θ²+ω²)(θ'²+ω²)) dω`
    pub cross_sin2: f64,
}

pub fn exponential_components(theta: f64, theta_prime: f64, h: f64) -> Result<ExponentialComponents> {
    check_positive("theta", theta)?;
    check_positive("theta_prime", theta_prime)?;
    check_positive("h", h)?;
    let cross = PI / (theta + theta_prime);
    Ok(ExponentialComponents {
        density: PI,
        cross,
        cross_sin2: 0.5 * cross * one_minus_removable_ratio(theta, theta_prime, h),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeBounds {
    pub lower: f64,
    pub upper: f64,
}

/// `(4/3) h√θ e^{-1/(8h²θ)} ≤ σ² ≤ 7 h√θ e^{-1/(8h²θ)}` for the printed
/// squared-exponential density, valid as `θh² → 0`.
pub fn se_error_bounds(theta: f64, h: f64) -> Result<SeBounds> {
    check_positive("theta", theta)?;
    check_positive("h", h)?;
    let core = h * theta.sqrt() * (-1.0 / (8.0 * h * h * theta)).exp();
    Ok(SeBounds {
        lower: 4.0 / 3.0 * core,
        upper: 7.0 * core,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{Family, Profile};
    use approx::assert_relative_eq;

    fn exp_verbatim(theta: f64) -> CovarianceModel {
        CovarianceModel::new(Family::Exponential, theta, Profile::PaperVerbatim).unwrap()
    }

    fn tight() -> QuadratureSpec {
        QuadratureSpec::with_tolerances(1e-11, 1e-300)
    }

    #[test]
    fn transfer_function_values() {
        let m = exp_verbatim(1.0);
        assert_relative_eq!(transfer_function(&m, 0.0, 1e-6).unwrap(), 1.0, epsilon = 1e-10);
        assert_relative_eq!(
            transfer_function(&m, 0.0, 1.0).unwrap(),
            PI.tanh() / PI,
            max_relative = 1e-11
        );
        assert_relative_eq!(transfer_function(&m, 0.0, 1.0).unwrap(), 0.31712, epsilon = 1e-5);
    }

    #[test]
    fn minimax_examples() {
        let q = MinimaxQuery::new(2.0 * PI * PI, &[0.5, 1.0, 0.25]).unwrap();
        assert_relative_eq!(minimax_error(&q), 1.0, max_relative = 1e-15);
        let q = MinimaxQuery::new(1.0, &[0.1, 0.2]).unwrap();
        assert_relative_eq!(minimax_error(&q), 0.04 / (2.0 * PI * PI), max_relative = 1e-15);
        assert_relative_eq!(minimax_error(&q), 2.0264e-3, max_relative = 1e-4);
        assert!(MinimaxQuery::new(0.0, &[0.1]).is_err());
        assert!(MinimaxQuery::new(1.0, &[]).is_err());
    }

    #[test]
    fn asymptotic_value() {
        assert_relative_eq!(
            exponential_error_asymptotic(0.1, 0.01).unwrap(),
            6.5797e-3,
            max_relative = 1e-4
        );
        assert!(exponential_error_asymptotic(-1.0, 0.01).is_err());
    }

    #[test]
    fn se_bounds_values() {
        let b = se_error_bounds(1.0, 0.15).unwrap();
        assert_relative_eq!(b.lower, 7.732e-4, max_relative = 1e-3);
        assert_relative_eq!(b.upper, 4.059e-3, max_relative = 1e-3);
        assert_relative_eq!(b.lower / b.upper, 4.0 / 21.0, max_relative = 1e-15);
    }

    #[test]
    fn removable_singularity_is_continuous() {
        let h = 0.01;
        let at = removable_ratio(1.0, 1.0, h);
        let near = removable_ratio(1.0, 1.0 + 1e-4, h);
        assert_relative_eq!(at, near, max_relative = 1e-5);
        // Series branch against the direct branch just outside ε.
        let inside = removable_ratio(1.0, 1.0 + 0.9e-6, h);
        let outside = removable_ratio(1.0, 1.0 + 1.1e-6, h);
        assert_relative_eq!(inside, outside, max_relative = 1e-9);
        assert_relative_eq!(one_minus_removable_ratio(1.0, 1.0, h), 1.0 - at, max_relative = 1e-10);
        assert_relative_eq!(
            one_minus_removable_ratio(0.3, 20.0, h),
            1.0 - removable_ratio(0.3, 20.0, h),
            max_relative = 1e-12
        );
    }

    #[test]
    fn divided_difference_branches_agree() {
        for (a, b) in [(0.2, 0.9), (0.99, 1.01), (0.5, 0.5), (1.0, 1.0)] {
            let q = |x: f64| -(-x).exp_m1() / x;
            let dd = divided_difference_q(a, b);
            if a != b {
                assert_relative_eq!(dd, (q(b) - q(a)) / (b - a), max_relative = 1e-8);
            } else {
                let qp = ((-a).exp() * (1.0 + a) - 1.0) / (a * a);
                assert_relative_eq!(dd, qp, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn closed_forms_match_quadrature() {
        for (t, tp, h) in [(1.0, 1.0, 0.01), (0.1, 1.0, 0.004), (2.0, 0.5, 0.3), (0.1, 10.0, 0.01)] {
            let design = GridDesign::infinite(&[h]).unwrap();
            let (tm, um) = (exp_verbatim(t), exp_verbatim(tp));
            let closed = exponential_misspec_closed(t, tp, h).unwrap();
            let quad = misspec_error(&tm, &um, &design, &tight()).unwrap();
            assert_relative_eq!(closed, quad, max_relative = 1e-8);
            let closed = exponential_ratio_closed(t, tp, h).unwrap();
            let quad = aliasing_ratio_error(&tm, &um, &design, &tight()).unwrap();
            assert_relative_eq!(closed, quad, max_relative = 1e-8);
        }
    }

    #[test]
    fn small_argument_series() {
        for b in [1e-4_f64, 0.1, 0.49, 0.51] {
            let direct = b.sinh() - b * b.cosh();
            let tol = if b < 0.01 { 1e-4 } else { 1e-12 };
            assert_relative_eq!(sinh_minus_b_cosh(b), direct, max_relative = tol);
        }
        assert_relative_eq!(sinh_minus_b_cosh(1e-4), -1e-12 / 3.0, max_relative = 1e-8);
    }

    #[test]
    fn ratio_functional_is_not_an_error_bound() {
        // A much rougher used density lowers the ratio functional below the
        // optimal error while the true error stays above it.
        let (t, h) = (1.0, 0.1);
        let matched = exponential_misspec_closed(t, t, h).unwrap();
        assert!(exponential_ratio_closed(t, 0.01, h).unwrap() < matched);
        assert!(exponential_misspec_closed(t, 0.01, h).unwrap() > matched);
        assert_relative_eq!(
            exponential_ratio_closed(t, t, h).unwrap(),
            matched,
            max_relative = 1e-12
        );
    }

    #[test]
    fn small_step_regime() {
        let (t, h) = (0.1, 1e-3);
        let design = GridDesign::infinite(&[h]).unwrap();
        let q = matched_error(&exp_verbatim(t), &design, &QuadratureSpec::default()).unwrap();
        let ratio = q / exponential_error_asymptotic(t, h).unwrap();
        assert!((ratio - 1.0).abs() < 0.02, "ratio {ratio}");
    }

    #[test]
    fn two_dimensional_error_matches_axis_product() {
        let m = exp_verbatim(1.0);
        let quad = tight();
        let e1 = matched_error(&m, &GridDesign::infinite(&[0.1]).unwrap(), &quad).unwrap();
        let e2 = matched_error(&m, &GridDesign::infinite(&[0.1, 0.1]).unwrap(), &quad).unwrap();
        // σ²₂ = 2πσ²₁ - σ²₁² when both axes match.
        assert_relative_eq!(e2, 2.0 * PI * e1 - e1 * e1, max_relative = 1e-12);
        assert!(e2 > e1);
    }

    #[test]
    fn two_dimensional_misspec_dominates() {
        let design = GridDesign::infinite(&[0.1, 0.2]).unwrap();
        let quad = tight();
        let t = exp_verbatim(1.0);
        let matched = matched_error(&t, &design, &quad).unwrap();
        for tp in [0.01, 0.3, 5.0] {
            let e = misspec_error(&t, &exp_verbatim(tp), &design, &quad).unwrap();
            assert!(e > matched, "θ'={tp}: {e} vs {matched}");
        }
    }

    #[test]
    fn rejects_mixed_profiles() {
        let a = exp_verbatim(1.0);
        let b = CovarianceModel::new(Family::Exponential, 1.0, Profile::Consistent).unwrap();
        let d = GridDesign::infinite(&[0.1]).unwrap();
        assert!(misspec_error(&a, &b, &d, &QuadratureSpec::default()).is_err());
    }
}
