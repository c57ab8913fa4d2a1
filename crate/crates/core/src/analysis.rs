//! Convergence bounds for Frank-Wolfe with exact line search, and checks of
//! recorded traces against them.
//!
//! Write `h_t = f(x_t) − f*`, `β` for the smoothness constant, `D` for the
//! diameter, `α_f` for the gradient lower-bound constant of the objective
//! and `α_K` for the strong-convexity constant of the set, all in one norm.
//!
//! * Any compact convex set: `h_t ≤ 8βD²/t` ([`sublinear_bound`]).
//! * Strongly convex set and objective: `h_t ≤ C/(t+2)²` with
//!   `C = max(9βD²/2, 18/M²)` and `M = √α_f · α_K / (8√2 β)`
//!   ([`accelerated_bound`]).
//! * Per step over a strongly convex set:
//!   `h_{t+1} ≤ h_t · max(1/2, 1 − α_K ‖∇f(x_t)‖_* / (8β))`
//!   ([`step_contraction_check`]).
//! * Gradient bounded below by `g` on the set: the factor above with
//!   `‖∇f‖_* ≥ g`. Optimum at distance `r` inside any convex set:
//!   factor `1 − r²α_f/(4βD²)` ([`linear_rate_factor`]).
//!
//! Values of `h` below `1e−14 · (1 + |f*|)` are treated as converged and
//! skipped by every check and fit: at that scale rounding dominates.

use crate::error::{Error, Result};
use crate::solver::IterationRecord;

const FLOOR: f64 = 1e-14;
const BOUND_RTOL: f64 = 1e-9;
const CONTRACTION_SLACK: f64 = 1e-10;

/// Which bound a report refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundKind {
    /// `8βD²/t`.
    Sublinear,
    /// `C/(t+2)²`.
    Accelerated,
    /// Geometric, gradient bounded away from zero.
    GradientBounded,
    /// Geometric, optimum in the interior.
    Interior,
    None,
}

impl BoundKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            BoundKind::Sublinear => "sublinear",
            BoundKind::Accelerated => "accelerated",
            BoundKind::GradientBounded => "gradient_bounded",
            BoundKind::Interior => "interior",
            BoundKind::None => "none",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "sublinear" => BoundKind::Sublinear,
            "accelerated" => BoundKind::Accelerated,
            "gradient_bounded" => BoundKind::GradientBounded,
            "interior" => BoundKind::Interior,
            "none" => BoundKind::None,
            _ => return None,
        })
    }
}

/// Fitted rate and bound-check summary for one trace.
#[derive(Debug, Clone, PartialEq)]
pub struct RateReport {
    /// Slope of `log h_t` against `log t`.
    pub exponent: f64,
    pub fit_window: (usize, usize),
    pub bound: BoundKind,
    pub violations: usize,
    /// Largest `h_t / bound(t)` over checked rows.
    pub max_violation_ratio: f64,
}

/// Outcome of [`check_bound`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundCheck {
    pub violations: usize,
    pub max_violation_ratio: f64,
    /// Rows actually compared (above the floor).
    pub checked: usize,
}

/// Linear-rate regime with its constant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Regime {
    /// `‖∇f(x)‖_* ≥ g` on the whole set.
    GradientBounded { g: f64 },
    /// The ball of radius `r` around the optimum lies in the set.
    Interior { r: f64 },
}

/// `8βD²/t`.
pub fn sublinear_bound(t: usize, beta: f64, diameter: f64) -> Result<f64> {
    if t < 1 {
        return Err(Error::Domain("bounds are stated for t ≥ 1".into()));
    }
    Ok(8.0 * beta * diameter * diameter / t as f64)
}

/// `max(9βD²/2, 18/M²)` with `M = √α_f · α_K / (8√2 β)`.
pub fn accelerated_constant(beta: f64, diameter: f64, alpha_f: f64, alpha_k: f64) -> Result<f64> {
    if !(alpha_f > 0.0) || !(alpha_k > 0.0) {
        return Err(Error::Domain(format!(
            "alpha_f = {alpha_f} and alpha_K = {alpha_k} must both be positive"
        )));
    }
    let m = alpha_f.sqrt() * alpha_k / (8.0 * std::f64::consts::SQRT_2 * beta);
    Ok((4.5 * beta * diameter * diameter).max(18.0 / (m * m)))
}

/// `C/(t+2)²` with `C` from [`accelerated_constant`].
pub fn accelerated_bound(
    t: usize,
    beta: f64,
    diameter: f64,
    alpha_f: f64,
    alpha_k: f64,
) -> Result<f64> {
    if t < 1 {
        return Err(Error::Domain("bounds are stated for t ≥ 1".into()));
    }
    let c = accelerated_constant(beta, diameter, alpha_f, alpha_k)?;
    let s = t as f64 + 2.0;
    Ok(c / (s * s))
}

/// Smallest `T` such that the accelerated bound is strictly below the
/// sublinear one for every `t ≥ T`.
pub fn bound_crossover(beta: f64, diameter: f64, alpha_f: f64, alpha_k: f64) -> Result<usize> {
    // C/(t+2)² < K/t  ⇔  K t² + (4K − C) t + 4K > 0, with K = 8βD².
    let c = accelerated_constant(beta, diameter, alpha_f, alpha_k)?;
    let k = 8.0 * beta * diameter * diameter;
    let (a, b, cc) = (k, 4.0 * k - c, 4.0 * k);
    let disc = b * b - 4.0 * a * cc;
    if disc < 0.0 {
        return Ok(1);
    }
    let root = (-b + disc.sqrt()) / (2.0 * a);
    let mut t = (root.floor().max(0.0) as usize).max(1);
    let below = |t: usize| -> bool {
        let s = t as f64 + 2.0;
        c / (s * s) < k / t as f64
    };
    while t > 1 && below(t - 1) {
        t -= 1;
    }
    while !below(t) {
        t += 1;
    }
    Ok(t)
}

/// Contraction factor of a linear regime.
///
/// Gradient bounded below: `max(1/2, 1 − α_K g / (8β))`. Interior optimum:
/// `1 − r²α_f / (4βD²)`. Fails unless the factor lies in `(0, 1)`.
pub fn linear_rate_factor(
    regime: Regime,
    beta: f64,
    diameter: f64,
    alpha_f: f64,
    alpha_k: f64,
) -> Result<f64> {
    let factor = match regime {
        Regime::GradientBounded { g } => (1.0 - alpha_k * g / (8.0 * beta)).max(0.5),
        Regime::Interior { r } => 1.0 - r * r * alpha_f / (4.0 * beta * diameter * diameter),
    };
    if factor > 0.0 && factor < 1.0 {
        Ok(factor)
    } else {
        Err(Error::InconsistentConstants(format!(
            "contraction factor {factor} outside (0, 1)"
        )))
    }
}

fn floor_of(record: &IterationRecord, h: f64) -> f64 {
    FLOOR * (1.0 + (record.f_value - h).abs())
}

fn h_of(record: &IterationRecord) -> Result<f64> {
    record
        .h
        .ok_or_else(|| Error::Precondition(format!("row t = {} has no h value", record.t)))
}

/// Count rows with `t ≥ 1` where `h_t > bound(t) · (1 + 1e−9)`.
pub fn check_bound(trace: &[IterationRecord], bound: impl Fn(usize) -> f64) -> Result<BoundCheck> {
    let mut out = BoundCheck {
        violations: 0,
        max_violation_ratio: 0.0,
        checked: 0,
    };
    for rec in trace {
        let h = h_of(rec)?;
        if rec.t < 1 || h < floor_of(rec, h) {
            continue;
        }
        let b = bound(rec.t);
        out.checked += 1;
        out.max_violation_ratio = out.max_violation_ratio.max(h / b);
        if h > b * (1.0 + BOUND_RTOL) {
            out.violations += 1;
        }
    }
    Ok(out)
}

/// Least-squares slope of `log h_t` against `log t` over `t_lo ≤ t ≤ t_hi`.
pub fn rate_exponent(trace: &[IterationRecord], t_lo: usize, t_hi: usize) -> Result<f64> {
    if t_lo < 1 || t_hi <= t_lo {
        return Err(Error::Domain(format!(
            "invalid fit window [{t_lo}, {t_hi}]"
        )));
    }
    let mut pts = Vec::new();
    for rec in trace.iter().filter(|r| r.t >= t_lo && r.t <= t_hi) {
        let h = h_of(rec)?;
        if h >= floor_of(rec, h) && h > 0.0 {
            pts.push(((rec.t as f64).ln(), h.ln()));
        }
    }
    if pts.len() < 2 {
        return Err(Error::DegenerateFit(format!(
            "{} usable rows in [{t_lo}, {t_hi}]",
            pts.len()
        )));
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::DegenerateFit("all rows share one t".into()));
    }
    Ok(sxy / sxx)
}

/// Count consecutive pairs with `h_{t+1} > h_t · factor(t) + 1e−10·(1 + h_t)`,
/// skipping pairs where `h_t` is already at the floor.
pub fn per_step_check(trace: &[IterationRecord], factor: impl Fn(usize) -> f64) -> Result<usize> {
    let mut violations = 0;
    for (i, pair) in trace.windows(2).enumerate() {
        let (now, next) = (h_of(&pair[0])?, h_of(&pair[1])?);
        if now < floor_of(&pair[0], now) {
            continue;
        }
        if next > now * factor(i) + CONTRACTION_SLACK * (1.0 + now) {
            violations += 1;
        }
    }
    Ok(violations)
}

/// Per-step contraction over a strongly convex set, with the gradient dual
/// norms supplied per row.
pub fn step_contraction_check(
    trace: &[IterationRecord],
    alpha_k: f64,
    beta: f64,
    grad_dual_norms: &[f64],
) -> Result<usize> {
    if grad_dual_norms.len() != trace.len() {
        return Err(Error::shape(trace.len(), grad_dual_norms.len()));
    }
    per_step_check(trace, |i| {
        (1.0 - alpha_k * grad_dual_norms[i] / (8.0 * beta)).max(0.5)
    })
}

/// Rate exponent plus a bound check, packaged as a report.
pub fn rate_report(
    trace: &[IterationRecord],
    window: (usize, usize),
    kind: BoundKind,
    bound: impl Fn(usize) -> f64,
) -> Result<RateReport> {
    let exponent = rate_exponent(trace, window.0, window.1)?;
    let check = check_bound(trace, bound)?;
    Ok(RateReport {
        exponent,
        fit_window: window,
        bound: kind,
        violations: check.violations,
        max_violation_ratio: check.max_violation_ratio,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn synthetic(
        h: impl Fn(usize) -> f64,
        ts: std::ops::RangeInclusive<usize>,
    ) -> Vec<IterationRecord> {
        ts.map(|t| IterationRecord {
            t,
            f_value: h(t),
            duality_gap: h(t),
            eta: 0.0,
            step_norm: 0.0,
            h: Some(h(t)),
            grad_dual_norm: 1.0,
        })
        .collect()
    }

    #[test]
    fn sublinear_examples() {
        assert_eq!(sublinear_bound(8, 1.0, 2.0).unwrap(), 4.0);
        assert_eq!(sublinear_bound(16, 1.0, 2.0).unwrap(), 2.0);
        assert_eq!(sublinear_bound(3, 0.0, 2.0).unwrap(), 0.0);
        assert!(sublinear_bound(0, 1.0, 1.0).is_err());
    }

    #[test]
    fn accelerated_examples() {
        // M = 1/(8√2), 18/M² = 2304 = C, bound 2304/9
        assert!((accelerated_bound(1, 1.0, 2.0, 1.0, 1.0).unwrap() - 256.0).abs() < 1e-10);
        let b2 = accelerated_bound(2, 1.0, 2.0, 1.0, 1.0).unwrap();
        let b14 = accelerated_bound(14, 1.0, 2.0, 1.0, 1.0).unwrap();
        assert!((b2 / b14 - 16.0).abs() < 1e-12);
        let mut prev = f64::INFINITY;
        for t in 1..200 {
            let b = accelerated_bound(t, 1.0, 2.0, 1.0, 1.0).unwrap();
            assert!(b < prev);
            prev = b;
        }
        assert!(accelerated_bound(1, 1.0, 2.0, 0.0, 1.0).is_err());
        assert!(accelerated_bound(1, 1.0, 2.0, 1.0, -1.0).is_err());
    }

    #[test]
    fn crossover_is_exact() {
        for (beta, d, af, ak) in [
            (1.0, 2.0, 1.0, 1.0),
            (3.0, 0.5, 0.2, 2.0),
            (1.0, 1.0, 100.0, 10.0),
        ] {
            let t = bound_crossover(beta, d, af, ak).unwrap();
            for s in t..t + 1000 {
                assert!(
                    accelerated_bound(s, beta, d, af, ak).unwrap()
                        < sublinear_bound(s, beta, d).unwrap()
                );
            }
            if t > 1 {
                assert!(
                    accelerated_bound(t - 1, beta, d, af, ak).unwrap()
                        >= sublinear_bound(t - 1, beta, d).unwrap()
                );
            }
        }
    }

    #[test]
    fn linear_factor_examples() {
        let f = linear_rate_factor(Regime::GradientBounded { g: 1.0 }, 1.0, 2.0, 1.0, 1.0).unwrap();
        assert_eq!(f, 0.875);
        let d = 2.0;
        let f = linear_rate_factor(Regime::Interior { r: d / 2.0 }, 3.0, d, 3.0, 1.0).unwrap();
        assert!((f - 0.9375).abs() < 1e-15);
        let f = linear_rate_factor(Regime::GradientBounded { g: 4.0 }, 1.0, 2.0, 1.0, 1.0).unwrap();
        assert_eq!(f, 0.5);
        assert!(linear_rate_factor(Regime::Interior { r: 10.0 }, 1.0, 1.0, 1.0, 1.0).is_err());
        assert!(
            linear_rate_factor(Regime::GradientBounded { g: 0.0 }, 1.0, 1.0, 1.0, 1.0).is_err()
        );
    }

    #[test]
    fn check_bound_examples() {
        let bound = |t: usize| 10.0 / t as f64;
        let half = synthetic(|t| 5.0 / t.max(1) as f64, 0..=50);
        let c = check_bound(&half, bound).unwrap();
        assert_eq!(c.violations, 0);
        assert!((c.max_violation_ratio - 0.5).abs() < 1e-15);

        let mut spike = half.clone();
        spike[7].h = Some(2.0 * bound(7));
        let c = check_bound(&spike, bound).unwrap();
        assert_eq!(c.violations, 1);
        assert!((c.max_violation_ratio - 2.0).abs() < 1e-15);

        let mut missing = half;
        missing[3].h = None;
        assert!(matches!(
            check_bound(&missing, bound),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn exponent_examples() {
        let tr = synthetic(|t| 100.0 / (t * t).max(1) as f64, 1..=1000);
        assert!((rate_exponent(&tr, 10, 1000).unwrap() + 2.0).abs() < 1e-9);
        let tr = synthetic(|t| 5.0 / t.max(1) as f64, 1..=1000);
        assert!((rate_exponent(&tr, 1, 1000).unwrap() + 1.0).abs() < 1e-9);
        assert!(matches!(rate_exponent(&tr, 5, 5), Err(Error::Domain(_))));
        assert!(matches!(
            rate_exponent(&tr, 2000, 3000),
            Err(Error::DegenerateFit(_))
        ));
    }

    #[test]
    fn geometric_traces_look_steeper_with_wider_windows() {
        let tr = synthetic(|t| 0.9f64.powi(t as i32), 1..=250);
        let slopes: Vec<f64> = [50, 100, 250]
            .iter()
            .map(|hi| rate_exponent(&tr, 1, *hi).unwrap())
            .collect();
        assert!(slopes[0] > slopes[1] && slopes[1] > slopes[2]);
        assert!(slopes[2] < -6.0);
    }

    #[test]
    fn contraction_examples() {
        // factor max(1/2, 1 − 1·1/8) = 0.875 with unit gradients
        let exact = synthetic(|t| 0.875f64.powi(t as i32), 0..=100);
        let norms = vec![1.0; exact.len()];
        assert_eq!(step_contraction_check(&exact, 1.0, 1.0, &norms).unwrap(), 0);

        let stalled = synthetic(|_| 1.0, 0..=10);
        let big = vec![4.0; stalled.len()];
        assert_eq!(
            step_contraction_check(&stalled, 1.0, 1.0, &big).unwrap(),
            10
        );

        assert!(step_contraction_check(&exact, 1.0, 1.0, &[1.0]).is_err());
    }

    #[test]
    fn floor_rows_are_skipped() {
        let tr = synthetic(|t| if t < 5 { 1.0 } else { 1e-16 }, 0..=10);
        let c = check_bound(&tr, |_| 1e-20).unwrap();
        assert_eq!(c.checked, 4);
    }
}
