//! Adaptive 10/21-point Gauss–Kronrod quadrature with a global error queue, plus a whole-line driver that grows a symmetric window until
//! a caller-supplied analytic tail bound is negligible.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub relative_tolerance: f64,
    pub absolute_tolerance: f64,
    /// Starting half-width of the window for whole-line integrals; doubled
    /// until the tail bound drops below a tenth of `absolute_tolerance`.
    pub initial_window: f64,
    /// Bisections allowed on top of the initial partition.
    pub max_subdivisions: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            relative_tolerance: 1e-9,
            absolute_tolerance: 1e-12,
            initial_window: 1.0,
            max_subdivisions: 20_000,
        }
    }
}

impl QuadratureSpec {
    pub fn with_tolerances(relative: f64, absolute: f64) -> Self {
        Self {
            relative_tolerance: relative,
            absolute_tolerance: absolute,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.relative_tolerance > 0.0 && self.absolute_tolerance > 0.0) {
            return Err(Error::InvalidArgument(
                "quadrature tolerances must be positive".to_string(),
            ));
        }
        if !(self.initial_window > 0.0 && self.initial_window.is_finite()) {
            return Err(Error::InvalidArgument("quadrature window must be positive".to_string()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

// Gauss–Kronrod 21-point abscissae and weights (QUADPACK qk21).
#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.000000000000000000000000000000000,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077600525478926,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
];
// Gauss 10-point weights for the odd-indexed Kronrod nodes.
#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
];

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn gk21<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[10];
    let mut resabs = kronrod.abs();
    let mut gauss = 0.0;
    let mut fv = [0.0; 21];
    fv[10] = fc;
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv[j] = f1;
        fv[20 - j] = f2;
        kronrod += WGK[j] * (f1 + f2);
        resabs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * kronrod;
    let mut resasc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        resasc += WGK[j] * ((fv[j] - mean).abs() + (fv[20 - j] - mean).abs());
    }
    let value = kronrod * half;
    let resabs = resabs * half.abs();
    let resasc = resasc * half.abs();
    let mut err = ((kronrod - gauss) * half).abs();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    let floor = 50.0 * f64::EPSILON * resabs;
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(floor);
    }
    (value, err)
}

/// Integrate `f` over the partition given by the sorted `breaks`.
pub fn integrate_partition<F: Fn(f64) -> f64>(f: F, breaks: &[f64], spec: &QuadratureSpec) -> Result<Integral> {
    spec.validate()?;
    if breaks.len() < 2 {
        return Err(Error::InvalidArgument("need at least two break points".to_string()));
    }
    let mut heap = BinaryHeap::with_capacity(breaks.len() + spec.max_subdivisions + 1);
    let mut evaluations = 0;
    for w in breaks.windows(2) {
        if w[1] <= w[0] {
            continue;
        }
        let (value, error) = gk21(&f, w[0], w[1]);
        evaluations += 21;
        heap.push(Segment {
            a: w[0],
            b: w[1],
            value,
            error,
        });
    }
    let mut subdivisions = 0;
    // Error of segments that can no longer be bisected at machine resolution.
    let mut frozen_error = 0.0;
    let mut frozen_value = 0.0;
    let (mut value, mut error) = totals(&heap);
    loop {
        if !value.is_finite() {
            return Err(Error::QuadratureFailure {
                error: f64::INFINITY,
                subdivisions,
            });
        }
        let target = spec
            .absolute_tolerance
            .max(spec.relative_tolerance * (value + frozen_value).abs());
        if error + frozen_error <= target || heap.is_empty() {
            // Confirm with a fresh sum so incremental drift cannot fake convergence.
            (value, error) = totals(&heap);
            let target = spec
                .absolute_tolerance
                .max(spec.relative_tolerance * (value + frozen_value).abs());
            if error + frozen_error <= target {
                return Ok(Integral {
                    value: value + frozen_value,
                    error: error + frozen_error,
                    evaluations,
                });
            }
            if heap.is_empty() {
                return Err(Error::QuadratureFailure {
                    error: error + frozen_error,
                    subdivisions,
                });
            }
        }
        if subdivisions >= spec.max_subdivisions {
            return Err(Error::QuadratureFailure {
                error: error + frozen_error,
                subdivisions,
            });
        }
        let worst = heap.pop().expect("heap checked non-empty");
        let mid = 0.5 * (worst.a + worst.b);
        value -= worst.value;
        error -= worst.error;
        if mid <= worst.a || mid >= worst.b {
            frozen_error += worst.error;
            frozen_value += worst.value;
            continue;
        }
        for (a, b) in [(worst.a, mid), (mid, worst.b)] {
            let (v, e) = gk21(&f, a, b);
            value += v;
            error += e;
            heap.push(Segment {
                a,
                b,
                value: v,
                error: e,
            });
        }
        evaluations += 42;
        subdivisions += 1;
    }
}

fn totals(heap: &BinaryHeap<Segment>) -> (f64, f64) {
    heap.iter().fold((0.0, 0.0), |(v, e), s| (v + s.value, e + s.error))
}

/// Adaptive integration of `f` over `[a, b]`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<Integral> {
    integrate_partition(f, &[a, b], spec)
}

/// `∫_{-∞}^{∞} f(ω) dω`.
///
/// `tail_bound(w)` must bound `|∫_{|ω|>w} f|`. The window `[-W, W]` is
/// doubled from `spec.initial_window` until the bound is below
/// `absolute_tolerance / 10`; the bound is added to the reported error.
/// `panel` optionally fixes the width of the initial uniform partition
/// (useful for oscillatory integrands); otherwise the partition is
/// geometric around the origin.
pub fn integrate_whole_line<F, T>(f: F, tail_bound: T, spec: &QuadratureSpec, panel: Option<f64>) -> Result<Integral>
where
    F: Fn(f64) -> f64,
    T: Fn(f64) -> f64,
{
    spec.validate()?;
    let mut w = spec.initial_window;
    let mut doublings = 0;
    while tail_bound(w) > 0.1 * spec.absolute_tolerance {
        w *= 2.0;
        doublings += 1;
        if doublings > 200 {
            return Err(Error::QuadratureFailure {
                error: tail_bound(w),
                subdivisions: 0,
            });
        }
    }
    let mut positive = vec![0.0];
    match panel {
        Some(p) if p > 0.0 && w / p <= 1e6 => {
            let n = (w / p).ceil() as usize;
            positive.extend((1..=n).map(|i| (i as f64 * p).min(w)));
        }
        _ => {
            let mut x = w;
            let mut geometric = Vec::new();
            while x > w * 1e-12 {
                geometric.push(x);
                x *= 0.5;
            }
            positive.extend(geometric.into_iter().rev());
        }
    }
    positive.dedup();
    let mut breaks: Vec<f64> = positive.iter().skip(1).rev().map(|x| -x).collect();
    breaks.extend(positive);
    let mut spec = *spec;
    spec.max_subdivisions += breaks.len();
    let mut result = integrate_partition(f, &breaks, &spec)?;
    result.error += tail_bound(w);
    Ok(result)
}
