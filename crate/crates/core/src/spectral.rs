//! Covariance families, their spectral densities, and aliased spectral sums
//! over regular grids.
//!
//! Two profiles are supported. [`Profile::PaperVerbatim`] uses the printed
//! densities `θ/(θ²+ω²)` (exponential) and `θ^{-1/2} exp(-ω²/(2θ))` (squared
//! exponential) with aliases at `k/h`; the Matérn densities, which have no
//! printed form, use the angular transform `F(ω) = (1/2π)∫R(x)e^{-iωx}dx`.
//! [`Profile::Consistent`] uses the ordinary-frequency transform
//! `F(ν) = ∫R(x)e^{-2πiνx}dx`, so that `∫F = R(0)` and aliases at `k/h` are
//! exact for a process sampled with step `h`.
//!
//! Covariances are the same under both profiles:
//!
//! | family | `R(r)` |
//! |---|---|
//! | exponential | `√(π/2) exp(-θr)` |
//! | Matérn 3/2 | `(1 + √3θr) exp(-√3θr)` |
//! | Matérn 5/2 | `(1 + √5θr + 5θ²r²/3) exp(-√5θr)` |
//! | squared exponential | `√(2π) exp(-θr²/2)` |

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;

use libm::erfc;

use crate::error::{Error, Result};

/// Default relative tolerance for truncated aliased sums.
pub const DEFAULT_SUM_TOLERANCE: f64 = 1e-12;

const MAX_TERMS_PER_SIDE: usize = 1 << 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    /// Matérn ν = 1/2.
    Exponential,
    Matern32,
    Matern52,
    SquaredExponential,
}

impl Family {
    pub const ALL: [Family; 4] = [
        Family::Exponential,
        Family::Matern32,
        Family::Matern52,
        Family::SquaredExponential,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Exponential => "exponential",
            Family::Matern32 => "matern32",
            Family::Matern52 => "matern52",
            Family::SquaredExponential => "squared_exponential",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "exponential" | "exp" | "matern12" | "ornstein_uhlenbeck" => Ok(Family::Exponential),
            "matern32" | "matern_32" | "matern3/2" => Ok(Family::Matern32),
            "matern52" | "matern_52" | "matern5/2" => Ok(Family::Matern52),
            "squared_exponential" | "squaredexponential" | "se" | "rbf" | "gaussian" => Ok(Family::SquaredExponential),
            other => Err(Error::UnknownFamily(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Profile {
    PaperVerbatim,
    #[default]
    Consistent,
}

impl Profile {
    pub fn name(self) -> &'static str {
        match self {
            Profile::PaperVerbatim => "paper_verbatim",
            Profile::Consistent => "consistent",
        }
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Profile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "paper_verbatim" | "paperverbatim" | "verbatim" | "paper" => Ok(Profile::PaperVerbatim),
            "consistent" => Ok(Profile::Consistent),
            other => Err(Error::UnknownProfile(other.to_string())),
        }
    }
}

/// Analytic shape of a one-dimensional spectral density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Shape {
    /// `scale / (alpha² + ω²)^power`
    Rational { scale: f64, alpha: f64, power: i32 },
    /// `scale · exp(-ω² / (2 width²))`
    Gaussian { scale: f64, width: f64 },
}

impl Shape {
    fn eval(&self, omega: f64) -> f64 {
        match *self {
            Shape::Rational { scale, alpha, power } => {
                let d = alpha * alpha + omega * omega;
                scale / d.powi(power)
            }
            Shape::Gaussian { scale, width } => {
                let z = omega / width;
                scale * (-0.5 * z * z).exp()
            }
        }
    }

    fn mass(&self) -> f64 {
        match *self {
            Shape::Rational { scale, alpha, power } => {
                let c = match power {
                    1 => 1.0,
                    2 => 0.5,
                    3 => 0.375,
                    _ => unreachable!("unsupported rational power"),
                };
                scale * PI * c / alpha.powi(2 * power - 1)
            }
            Shape::Gaussian { scale, width } => scale * width * (2.0 * PI).sqrt(),
        }
    }

    /// `∫_x^∞ F(ω) dω` for `x ≥ 0`.
    fn tail(&self, x: f64) -> f64 {
        debug_assert!(x >= 0.0);
        match *self {
            Shape::Rational { scale, alpha, power } => scale * rational_tail(x, alpha, power),
            Shape::Gaussian { scale, width } => {
                scale * width * FRAC_PI_2.sqrt() * erfc(x / (width * std::f64::consts::SQRT_2))
            }
        }
    }

    /// `F(x) / F(w)`, finite even where both values underflow.
    fn relative(&self, x: f64, w: f64) -> f64 {
        match *self {
            Shape::Rational { alpha, power, .. } => {
                let a2 = alpha * alpha;
                ((a2 + w * w) / (a2 + x * x)).powi(power)
            }
            Shape::Gaussian { width, .. } => (-(x - w) * (x + w) / (2.0 * width * width)).exp(),
        }
    }

    /// `∫_x^∞ F / F(w)` for `x ≥ 0`.
    fn tail_relative(&self, x: f64, w: f64) -> f64 {
        match *self {
            Shape::Rational { alpha, power, .. } => {
                rational_tail(x, alpha, power) * (alpha * alpha + w * w).powi(power)
            }
            Shape::Gaussian { width, .. } => {
                let y = x / (width * std::f64::consts::SQRT_2);
                width * FRAC_PI_2.sqrt() * erfcx(y) * self.relative(x, w)
            }
        }
    }

    /// Abscissa beyond which the density is convex and decreasing.
    fn convex_from(&self) -> f64 {
        match *self {
            Shape::Rational { alpha, .. } => alpha,
            Shape::Gaussian { width, .. } => width,
        }
    }
}

/// Scaled complementary error function `e^{y²} erfc(y)` for `y ≥ 0`.
fn erfcx(y: f64) -> f64 {
    if y < 3.0 {
        return (y * y).exp() * erfc(y);
    }
    // Laplace continued fraction
    // erfcx(y) = 1/√π · 1/(y + (1/2)/(y + 1/(y + (3/2)/(y + ...)))),
    // evaluated from the back; 60 levels are exact to rounding for y ≥ 3.
    let mut tail = y;
    for n in (1..=60).rev() {
        tail = y + 0.5 * n as f64 / tail;
    }
    1.0 / (PI.sqrt() * tail)
}

/// `∫_y^∞ du / (a² + u²)^p` for `y ≥ 0`, `p ∈ {1, 2, 3}`.
fn rational_tail(y: f64, a: f64, p: i32) -> f64 {
    let r = a / y;
    if y > 0.0 && r <= 0.7 {
        // y^{1-2p} Σ_n binom(-p, n) r^{2n} / (2p + 2n - 1)
        let r2 = r * r;
        let mut coef = 1.0;
        let mut pow = 1.0;
        let mut sum = 0.0;
        for n in 0..200 {
            let term = coef * pow / f64::from(2 * p + 2 * n - 1);
            sum += term;
            if term.abs() < 1e-18 * sum.abs() {
                break;
            }
            coef *= -f64::from(p + n) / f64::from(n + 1);
            pow *= r2;
        }
        return sum * y.powi(1 - 2 * p);
    }
    // atan(a/y) = π/2 - atan(y/a), valid for y = 0 as well.
    let angle = FRAC_PI_2 - (y / a).atan();
    let d = a * a + y * y;
    match p {
        1 => angle / a,
        2 => angle / (2.0 * a.powi(3)) - y / (2.0 * a * a * d),
        3 => 3.0 * angle / (8.0 * a.powi(5)) - y / (4.0 * a * a * d * d) - 3.0 * y / (8.0 * a.powi(4) * d),
        _ => unreachable!("unsupported rational power"),
    }
}

/// A stationary covariance family with inverse length-scale `theta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CovarianceModel {
    family: Family,
    theta: f64,
    profile: Profile,
}

impl CovarianceModel {
    pub fn new(family: Family, theta: f64, profile: Profile) -> Result<Self> {
        if !(theta.is_finite() && theta > 0.0) {
            return Err(Error::NonPositiveTheta(theta));
        }
        Ok(Self { family, theta, profile })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn profile(&self) -> Profile {
        self.profile
    }

    /// Same family and profile with a different parameter.
    pub fn with_theta(&self, theta: f64) -> Result<Self> {
        Self::new(self.family, theta, self.profile)
    }

    /// `R(0)`.
    pub fn variance(&self) -> f64 {
        match self.family {
            Family::Exponential => FRAC_PI_2.sqrt(),
            Family::Matern32 | Family::Matern52 => 1.0,
            Family::SquaredExponential => (2.0 * PI).sqrt(),
        }
    }

    /// Covariance at distance `r`; even in `r`.
    pub fn covariance(&self, r: f64) -> f64 {
        let r = r.abs();
        let t = self.theta;
        match self.family {
            Family::Exponential => FRAC_PI_2.sqrt() * (-t * r).exp(),
            Family::Matern32 => {
                let s = 3f64.sqrt() * t * r;
                (1.0 + s) * (-s).exp()
            }
            Family::Matern52 => {
                let s = 5f64.sqrt() * t * r;
                (1.0 + s + s * s / 3.0) * (-s).exp()
            }
            Family::SquaredExponential => (2.0 * PI).sqrt() * (-0.5 * t * r * r).exp(),
        }
    }

    pub(crate) fn shape(&self) -> Shape {
        let t = self.theta;
        let two_pi = 2.0 * PI;
        match (self.profile, self.family) {
            (Profile::PaperVerbatim, Family::Exponential) => Shape::Rational {
                scale: t,
                alpha: t,
                power: 1,
            },
            (Profile::PaperVerbatim, Family::SquaredExponential) => Shape::Gaussian {
                scale: 1.0 / t.sqrt(),
                width: t.sqrt(),
            },
            (Profile::PaperVerbatim, Family::Matern32) => {
                let l = 3f64.sqrt() * t;
                Shape::Rational {
                    scale: 4.0 * l.powi(3) / two_pi,
                    alpha: l,
                    power: 2,
                }
            }
            (Profile::PaperVerbatim, Family::Matern52) => {
                let l = 5f64.sqrt() * t;
                Shape::Rational {
                    scale: 16.0 / 3.0 * l.powi(5) / two_pi,
                    alpha: l,
                    power: 3,
                }
            }
            // Ordinary frequency: F(ν) = S(2πν) where S is the angular-frequency
            // density with R(x) = (1/2π)∫S(ω)e^{iωx}dω.
            (Profile::Consistent, Family::Exponential) => {
                let c = 2.0 * FRAC_PI_2.sqrt() * t;
                Shape::Rational {
                    scale: c / (two_pi * two_pi),
                    alpha: t / two_pi,
                    power: 1,
                }
            }
            (Profile::Consistent, Family::Matern32) => {
                let l = 3f64.sqrt() * t;
                Shape::Rational {
                    scale: 4.0 * l.powi(3) / two_pi.powi(4),
                    alpha: l / two_pi,
                    power: 2,
                }
            }
            (Profile::Consistent, Family::Matern52) => {
                let l = 5f64.sqrt() * t;
                Shape::Rational {
                    scale: 16.0 / 3.0 * l.powi(5) / two_pi.powi(6),
                    alpha: l / two_pi,
                    power: 3,
                }
            }
            (Profile::Consistent, Family::SquaredExponential) => Shape::Gaussian {
                scale: two_pi / t.sqrt(),
                width: t.sqrt() / two_pi,
            },
        }
    }

    /// Spectral density `F(ω)`; positive and even.
    pub fn spectral_density(&self, omega: f64) -> f64 {
        self.shape().eval(omega)
    }

    /// `∫ F(ω) dω` over the real line. Equals `R(0)` under the consistent
    /// profile.
    pub fn spectral_mass(&self) -> f64 {
        self.shape().mass()
    }

    /// `∫_{|ω| > w} F(ω) dω` for `w ≥ 0`.
    pub fn spectral_tail(&self, w: f64) -> f64 {
        2.0 * self.shape().tail(w.abs())
    }
}

pub fn make_model(family: Family, theta: f64, profile: Profile) -> Result<CovarianceModel> {
    CovarianceModel::new(family, theta, profile)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SumMode {
    /// Coth closed form; exponential family only.
    ClosedForm,
    /// Direct summation with a certified tail bracket.
    Truncated { tolerance: f64 },
}

/// Aliased spectral sum split into its central and aliased parts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AliasedSum {
    /// `F(ω)` at the requested frequency.
    pub central: f64,
    /// `Σ_k F(ω + k/h) - F(ω)`.
    pub aliases: f64,
    /// Certified bound on the error of `aliases`.
    pub error_bound: f64,
    /// Number of explicitly summed terms per side.
    pub terms: usize,
}

impl AliasedSum {
    pub fn total(&self) -> f64 {
        self.central + self.aliases
    }

    /// Share of the aliased sum carried by the aliases, `1 - K̂(ω)`.
    pub fn aliasing_fraction(&self) -> f64 {
        self.aliases / self.total()
    }

    /// `K̂(ω) = F(ω) / Σ_k F(ω + k/h)`.
    pub fn transfer(&self) -> f64 {
        self.central / self.total()
    }
}

fn check_step(h: f64) -> Result<()> {
    if h.is_finite() && h > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("grid step must be positive, got {h}")))
    }
}

/// Reduce `omega` into `[-1/(2h), 1/(2h)]`.
pub fn reduce_frequency(omega: f64, h: f64) -> f64 {
    let x = omega * h;
    (x - x.round()) / h
}

/// Bracket for the one-sided tail `Σ_{k>K} f(k)` of a convex decreasing
/// sequence `f(k) = F(x0 + k/h)`: the trapezoid bound
/// `∫_{K+1}^∞ f + f(K+1)/2` from below and the midpoint bound
/// `∫_{K+1/2}^∞ f` from above.
fn tail_bracket(shape: &Shape, x0: f64, k: f64, h: f64) -> (f64, f64) {
    let at = |k: f64| x0 + k / h;
    let lo = h * shape.tail(at(k + 1.0)) + 0.5 * shape.eval(at(k + 1.0));
    let hi = h * shape.tail(at(k + 0.5));
    (lo, hi.max(lo))
}

/// [`tail_bracket`] for `f(k) / F(w)`.
fn tail_bracket_relative(shape: &Shape, x0: f64, k: f64, h: f64, w: f64) -> (f64, f64) {
    let at = |k: f64| x0 + k / h;
    let lo = h * shape.tail_relative(at(k + 1.0), w) + 0.5 * shape.relative(at(k + 1.0), w);
    let hi = h * shape.tail_relative(at(k + 0.5), w);
    (lo, hi.max(lo))
}

/// Euler–Maclaurin point inside a tail bracket, `(lo + 2 hi)/3`, and the
/// distance to the farther end of the bracket.
fn bracket_estimate((lo, hi): (f64, f64)) -> (f64, f64) {
    let est = (lo + 2.0 * hi) / 3.0;
    (est, (est - lo).max(hi - est))
}

/// Sums over `k ≠ 0` at a frequency `w` inside the principal cell, for a
/// true density `F` and a used density `G`.
///
/// The `G` sums are normalized by `G(w)`, so `used_central` is 1. Every
/// error integrand built from them is homogeneous of degree zero in `G`,
/// and the normalization keeps them finite where `G` itself underflows.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellTerms {
    /// `F(w)`
    pub true_central: f64,
    /// `G(w) / G(w) = 1`
    pub used_central: f64,
    /// `Σ_{k≠0} F(w + k/h)`
    pub true_aliases: f64,
    /// `Σ_{k≠0} G(w + k/h) / G(w)`
    pub used_aliases: f64,
    /// `Σ_{k≠0} F(w + k/h) G(w + k/h) / G(w)`
    pub cross_aliases: f64,
    /// `Σ_{k≠0} (G(w + k/h) / G(w))²`
    pub used_square_aliases: f64,
    pub terms: usize,
}

impl CellTerms {
    /// `Σ_{j≠k} F(w + j/h) G(w + k/h) / Σ_k G(w + k/h)`, the folded
    /// aliasing-ratio integrand, assembled without cancelling the dominant
    /// central terms.
    pub fn ratio_integrand(&self) -> f64 {
        let rest = (self.true_aliases * self.used_aliases - self.cross_aliases).max(0.0);
        let numerator = self.true_central * self.used_aliases + self.true_aliases * self.used_central + rest;
        numerator / self.used_total()
    }

    pub fn used_total(&self) -> f64 {
        self.used_central + self.used_aliases
    }

    /// `Σ_k F_k [(1 - p_k)² + Σ_{j≠k} p_j²]` with `p = G / Σ G`: the
    /// folded error integrand of a predictor built from `G` when the data
    /// follow `F`. The `k = 0` term is formed from the alias sums so the
    /// near-unit central weight never cancels.
    pub fn misspec_integrand(&self) -> f64 {
        let s = self.used_total();
        let s2 = s * s;
        let central = self.true_central * (self.used_aliases * self.used_aliases + self.used_square_aliases);
        let squares = s2 + self.used_central * self.used_central + self.used_square_aliases;
        let aliases = (self.true_aliases * squares - 2.0 * self.cross_aliases * s).max(0.0);
        (central + aliases) / s2
    }
}

/// Direct summation of the `k ≠ 0` terms at `w ∈ [-1/(2h), 1/(2h)]`,
/// doubling the cut-off until every certified tail bound is below
/// `tolerance` relative to its sum.
fn sum_cell(truth: &Shape, used: &Shape, w: f64, h: f64, tolerance: f64) -> Result<CellTerms> {
    let aw = w.abs();
    let inv_h = 1.0 / h;
    // Near side: k/h - |w|; far side: k/h + |w|.
    let offsets = [-aw, aw];
    let convex = truth.convex_from().max(used.convex_from());
    let mut k_max = ((convex + aw) * h + 0.5).ceil().max(2.0) as usize;

    let mut t_partial = 0.0;
    let mut u_partial = 0.0;
    let mut q_partial = 0.0;
    let mut g2_partial = 0.0;
    let mut summed = 0usize;
    loop {
        for k in (summed + 1)..=k_max {
            let kf = k as f64;
            for x0 in offsets {
                let x = kf * inv_h + x0;
                let f = truth.eval(x);
                let g = used.relative(x, aw);
                t_partial += f;
                u_partial += g;
                q_partial += f * g;
                g2_partial += g * g;
            }
        }
        summed = k_max;

        let kf = k_max as f64;
        let (mut t_tail, mut t_err) = (0.0, 0.0);
        let (mut u_tail, mut u_err) = (0.0, 0.0);
        let (mut q_tail, mut q_err) = (0.0, 0.0);
        let (mut g2_tail, mut g2_err) = (0.0, 0.0);
        for x0 in offsets {
            let (te, tb) = bracket_estimate(tail_bracket(truth, x0, kf, h));
            let bracket = tail_bracket_relative(used, x0, kf, h, aw);
            let (ue, ub) = bracket_estimate(bracket);
            t_tail += te;
            t_err += tb;
            u_tail += ue;
            u_err += ub;
            // Both densities decrease beyond the cut-off, so each product
            // tail lies in [0, (first omitted factor) · (used tail)].
            let next = x0 + (kf + 1.0) * inv_h;
            let bound = truth.eval(next) * bracket.1;
            q_tail += 0.5 * bound;
            q_err += 0.5 * bound;
            let bound = used.relative(next, aw) * bracket.1;
            g2_tail += 0.5 * bound;
            g2_err += 0.5 * bound;
        }
        let t = t_partial + t_tail;
        let u = u_partial + u_tail;
        let q = q_partial + q_tail;
        let g2 = g2_partial + g2_tail;
        let f0 = truth.eval(w);
        // The product sums enter the error integrands next to these
        // first-order terms, so they only need accuracy relative to them.
        let scale_q = f0 * u + t;
        let converged = (t_err <= tolerance * t || t_err == 0.0)
            && (u_err <= tolerance * u || u_err == 0.0)
            && (q_err <= tolerance * scale_q || q_err == 0.0)
            && (g2_err <= tolerance * u || g2_err == 0.0);
        if converged {
            return Ok(CellTerms {
                true_central: f0,
                used_central: 1.0,
                true_aliases: t,
                used_aliases: u,
                cross_aliases: q,
                used_square_aliases: g2,
                terms: summed,
            });
        }
        if k_max >= MAX_TERMS_PER_SIDE {
            return Err(Error::NoConvergence {
                tolerance,
                terms: summed,
            });
        }
        k_max = (k_max * 2).min(MAX_TERMS_PER_SIDE);
    }
}

/// Alias sums of `truth` and `used` at `w ∈ [-1/(2h), 1/(2h)]`.
pub fn cell_terms(
    truth: &CovarianceModel,
    used: &CovarianceModel,
    w: f64,
    h: f64,
    tolerance: f64,
) -> Result<CellTerms> {
    sum_cell(&truth.shape(), &used.shape(), w, h, tolerance)
}

fn check_sum_arguments(omega: f64, h: f64, tolerance: f64) -> Result<()> {
    check_step(h)?;
    if !omega.is_finite() {
        return Err(Error::InvalidArgument(format!("frequency must be finite, got {omega}")));
    }
    if tolerance.is_nan() || tolerance <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "tolerance must be positive, got {tolerance}"
        )));
    }
    Ok(())
}

/// `Σ_k F(ω + k/h)` split into `F(ω)` and the aliases, by direct summation
/// with a certified tail.
///
/// Beyond the convex region each one-sided tail lies between a trapezoid and
/// a midpoint integral bound; the estimate is the Euler–Maclaurin point
/// inside that bracket and the reported bound is the distance to its
/// farther end.
pub fn aliased_terms(model: &CovarianceModel, omega: f64, h: f64, tolerance: f64) -> Result<AliasedSum> {
    check_sum_arguments(omega, h, tolerance)?;
    let shape = model.shape();
    let w = reduce_frequency(omega, h);
    let cell = sum_cell(&shape, &shape, w, h, tolerance)?;
    let error_bound = tolerance * cell.true_aliases;
    if (omega * h).round() == 0.0 {
        return Ok(AliasedSum {
            central: cell.true_central,
            aliases: cell.true_aliases,
            error_bound,
            terms: cell.terms,
        });
    }
    // ω lies outside the principal cell: its own term is one of the aliases
    // of the reduced frequency.
    let central = shape.eval(omega);
    let total = cell.true_central + cell.true_aliases;
    Ok(AliasedSum {
        central,
        aliases: total - central,
        error_bound,
        terms: cell.terms,
    })
}

/// `(K̂(ω), A(ω))` from sums normalized by the density at the reduced
/// frequency, so both stay finite where the density underflows.
pub(crate) fn transfer_pair(model: &CovarianceModel, omega: f64, h: f64, tolerance: f64) -> Result<(f64, f64)> {
    check_sum_arguments(omega, h, tolerance)?;
    let shape = model.shape();
    let w = reduce_frequency(omega, h);
    let cell = sum_cell(&shape, &shape, w, h, tolerance)?;
    let total = cell.used_total();
    if (omega * h).round() == 0.0 {
        return Ok((1.0 / total, cell.used_aliases / total));
    }
    let central = shape.relative(omega, w.abs());
    Ok((central / total, (total - central) / total))
}

/// Closed-form `Σ_k F(ω + k/h)` for a first-power rational density
/// `scale/(α² + ω²)`: `scale·(πh/α)·coth(πhα) / (1 + sin²(πhω)/sinh²(πhα))`.
fn coth_sum(scale: f64, alpha: f64, omega: f64, h: f64) -> f64 {
    let x = PI * h * alpha;
    let s = (PI * h * omega).sin();
    let csch = 1.0 / x.sinh();
    scale * PI * h / alpha / x.tanh() / (1.0 + s * s * csch * csch)
}

/// `Σ_k F(ω + k/h)` over all integers `k`; periodic in `ω` with period `1/h`.
pub fn aliased_sum(model: &CovarianceModel, omega: f64, h: f64, mode: SumMode) -> Result<f64> {
    check_step(h)?;
    match mode {
        SumMode::ClosedForm => match (model.family(), model.shape()) {
            (Family::Exponential, Shape::Rational { scale, alpha, .. }) => {
                if !omega.is_finite() {
                    return Err(Error::InvalidArgument(format!("frequency must be finite, got {omega}")));
                }
                Ok(coth_sum(scale, alpha, reduce_frequency(omega, h), h))
            }
            _ => Err(Error::ClosedFormUnavailable),
        },
        SumMode::Truncated { tolerance } => Ok(aliased_terms(model, omega, h, tolerance)?.total()),
    }
}

/// Aliased sum on a two-dimensional grid for the tensor-product density
/// `F(ω₁)F(ω₂)`.
pub fn aliased_sum_2d(model: &CovarianceModel, omega: [f64; 2], steps: [f64; 2], mode: SumMode) -> Result<f64> {
    Ok(aliased_sum(model, omega[0], steps[0], mode)? * aliased_sum(model, omega[1], steps[1], mode)?)
}

/// `A(ω) = Σ_{k≠0} F'(ω + k/h) / Σ_k F'(ω + k/h)` for the density `F'` of
/// `used_model`. `true_model` does not enter the ratio.
pub fn aliasing_fraction(
    _true_model: &CovarianceModel,
    used_model: &CovarianceModel,
    omega: f64,
    h: f64,
) -> Result<f64> {
    Ok(transfer_pair(used_model, omega, h, DEFAULT_SUM_TOLERANCE)?.1)
}

/// A regular grid with per-axis steps. Infinite unless `extent` is set.
#[derive(Debug, Clone, PartialEq)]
pub struct GridDesign {
    steps: Vec<f64>,
    extent: Option<(f64, f64)>,
    size: Option<usize>,
}

impl GridDesign {
    /// Infinite grid `{H k : k ∈ Z^d}` with `H = diag(steps)`, `d ∈ {1, 2}`.
    pub fn infinite(steps: &[f64]) -> Result<Self> {
        if steps.is_empty() || steps.len() > 2 {
            return Err(Error::InvalidDesign(format!(
                "dimension must be 1 or 2, got {}",
                steps.len()
            )));
        }
        if let Some(bad) = steps.iter().find(|h| !(h.is_finite() && **h > 0.0)) {
            return Err(Error::InvalidDesign(format!("steps must be positive, got {bad}")));
        }
        Ok(Self {
            steps: steps.to_vec(),
            extent: None,
            size: None,
        })
    }

    /// `size` equally spaced points on `[a, b]`, endpoints included.
    pub fn finite(size: usize, interval: (f64, f64)) -> Result<Self> {
        if size < 2 {
            return Err(Error::BadSampleSize(size));
        }
        let (a, b) = interval;
        if !(a.is_finite() && b.is_finite() && b > a) {
            return Err(Error::InvalidDesign(format!("bad interval [{a}, {b}]")));
        }
        Ok(Self {
            steps: vec![(b - a) / (size - 1) as f64],
            extent: Some((a, b)),
            size: Some(size),
        })
    }

    pub fn dimension(&self) -> usize {
        self.steps.len()
    }

    pub fn steps(&self) -> &[f64] {
        &self.steps
    }

    /// Step along the first axis.
    pub fn step(&self) -> f64 {
        self.steps[0]
    }

    pub fn extent(&self) -> Option<(f64, f64)> {
        self.extent
    }

    pub fn size(&self) -> Option<usize> {
        self.size
    }

    /// Grid nodes of a finite one-dimensional design; empty when infinite.
    pub fn points(&self) -> Vec<f64> {
        match (self.extent, self.size) {
            (Some((a, b)), Some(n)) => (0..n)
                .map(|i| {
                    if i + 1 == n {
                        b
                    } else {
                        a + (b - a) * i as f64 / (n - 1) as f64
                    }
                })
                .collect(),
            _ => Vec::new(),
        }
    }
}
