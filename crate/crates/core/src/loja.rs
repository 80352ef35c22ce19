//! Regularity separation estimates: given a map germ G vanishing at p, how
//! fast can |G| shrink compared with the singular spectrum of its gradient
//! frame?
//!
//! The central inequality has the shape
//!
//! ```text
//! |G(x) - G(p)|^theta <= c * sigma(x)
//! ```
//!
//! near p, where sigma is either the smallest singular value of the gradient
//! frame (the strong form) or the root of the Gram trace, i.e. the Euclidean
//! norm of all gradients together (the weak form). [`loja_fit`] estimates
//! the exponent from region samples by a log-log envelope: with
//! u = -log |G| and v = -log sigma the inequality reads v <= theta u + log c,
//! so admissible exponents are lines dominating the sampled (u, v) cloud.
//!
//! The related pointwise weight
//! `rho = k det(M)^(1/k) / tr(M)` measures how far the gradients are from a
//! scaled orthonormal frame; [`rho_inf_estimate`] takes its infimum over a
//! region. Positive infimum is what makes the strong and weak forms of the
//! inequality interchangeable, which [`equivalence_report`] and the
//! Jacquemard-style checks quantify for pairs.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::map::{compose, AnalyticMap, Point};
use crate::region::RegionSpec;
use crate::spectra::{self, rho, singular_values, RhoValue};

/// Verdict thresholds for the sampled estimates.
pub mod tol {
    /// A sampled infimum above this counts as "bounded away from zero".
    pub const POSITIVITY: f64 = 1e-6;
    /// Comparability ratios above this count as unbounded.
    pub const RATIO_CAP: f64 = 1e6;
    /// Envelope feasibility slack in linear space.
    pub const RESIDUAL_SLACK: f64 = 1e-12;
    /// Deviation of the Gram matrix from a scalar matrix (relative to its
    /// trace) below which a map counts as simple on the sampled region.
    pub const SIMPLE_DEVIATION: f64 = 1e-9;
    /// Intercept box for the two-parameter envelope fit: |log c| <= 50.
    pub const INTERCEPT_BOX: f64 = 50.0;
}

/// Which singular quantity the inequality compares against.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    /// sigma = smallest singular value of the frame.
    Strong,
    /// sigma = sqrt(tr M) = norm of the full gradient tuple.
    Weak,
}

/// How the constant c is treated during the fit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CMode {
    /// c pinned at one; the exponent absorbs the constant.
    FixedOne,
    /// Exponent and constant fitted together by a two-point envelope line.
    TwoParam,
}

/// Result of an exponent fit.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LojaEstimate {
    pub theta_hat: f64,
    pub c_hat: f64,
    pub samples_used: usize,
    /// Max over retained samples of |G(x)-G(p)|^theta - c * sigma; feasible
    /// fits keep this at or below the residual slack.
    pub max_residual: f64,
    /// An exponent below one is the meaningful regime for a vanishing germ.
    pub valid: bool,
    pub variant: Variant,
}

struct LogSample {
    u: f64,
    v: f64,
}

fn sigma_of(frame_sigma_min: f64, trace: f64, variant: Variant) -> f64 {
    match variant {
        Variant::Strong => frame_sigma_min,
        Variant::Weak => trace.max(0.0).sqrt(),
    }
}

fn fixed_one_exponent(samples: &[LogSample]) -> f64 {
    let envelope = samples
        .iter()
        .map(|s| s.v / s.u)
        .fold(f64::NEG_INFINITY, f64::max);
    // Chord across the sampled radial range. The pointwise envelope with
    // c = 1 carries a constant offset of order 1/log(1/r) at finite radius;
    // the chord slope cancels that offset (exactly so for monomial-like
    // germs, whose log-log samples are collinear).
    let lo = samples
        .iter()
        .min_by(|a, b| a.u.partial_cmp(&b.u).expect("finite"))
        .expect("nonempty");
    let hi = samples
        .iter()
        .max_by(|a, b| a.u.partial_cmp(&b.u).expect("finite"))
        .expect("nonempty");
    let chord = if hi.u - lo.u > 1e-9 {
        (hi.v - lo.v) / (hi.u - lo.u)
    } else {
        f64::NEG_INFINITY
    };
    envelope.max(chord).max(0.0)
}

/// Smallest nonnegative exponent admitting a dominating line with
/// |log c| inside the box: minimize theta subject to theta*u_i + L >= v_i
/// and |L| <= box. With only two variables, every vertex of the feasible
/// region pairs a data constraint with the intercept ceiling, so the
/// minimum is reached at L = box (largest admissible constant) and the
/// slope floors at zero. Returns (theta, L) with L the smallest feasible
/// intercept at that theta.
fn two_param_fit(samples: &[LogSample]) -> (f64, f64) {
    let theta = samples
        .iter()
        .map(|s| (s.v - tol::INTERCEPT_BOX) / s.u)
        .fold(0.0_f64, f64::max);
    let intercept = samples
        .iter()
        .map(|s| s.v - theta * s.u)
        .fold(-tol::INTERCEPT_BOX, f64::max);
    (theta, intercept)
}

/// Fits the separation exponent of `map` at `p` from region samples.
///
/// Samples keep only points with 0 < |G(x) - G(p)| < 1 and positive sigma;
/// fewer than ten such points is an error. The returned exponent always
/// dominates the sampled envelope, so the reported inequality holds at every
/// retained sample up to the residual slack.
pub fn loja_fit(
    map: &AnalyticMap,
    p: &Point,
    region: &RegionSpec,
    variant: Variant,
    c_mode: CMode,
) -> Result<LojaEstimate> {
    if p.dim() != map.n() {
        return Err(Error::DimensionMismatch {
            context: "fit base point",
            expected: map.n(),
            got: p.dim(),
        });
    }
    if region.center != *p {
        return Err(Error::Precondition(
            "fit region must be centered at the base point".into(),
        ));
    }
    let base = map.eval(p.coords())?;
    let mut logs: Vec<LogSample> = Vec::new();
    let mut linear: Vec<(f64, f64)> = Vec::new(); // (value, sigma)
    for point in region.samples() {
        let value = map.eval(point.coords())?;
        let diff: f64 = value
            .iter()
            .zip(&base)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        if !(diff > 0.0 && diff < 1.0) {
            continue;
        }
        let frame = map.gradient_frame(point.coords())?;
        let spec = singular_values(&frame.a)?;
        let sigma = sigma_of(spec.sigma_min(), spec.trace, variant);
        if !(sigma > 0.0) {
            continue;
        }
        logs.push(LogSample {
            u: -diff.ln(),
            v: -sigma.ln(),
        });
        linear.push((diff, sigma));
    }
    if logs.len() < 10 {
        return Err(Error::InsufficientData {
            operation: "loja_fit",
            detail: format!("{} usable samples, need at least 10", logs.len()),
        });
    }

    let (theta_hat, c_hat) = match c_mode {
        CMode::FixedOne => (fixed_one_exponent(&logs), 1.0),
        CMode::TwoParam => {
            let (theta, log_c) = two_param_fit(&logs);
            (theta, log_c.exp())
        }
    };
    let max_residual = linear
        .iter()
        .map(|(value, sigma)| value.powf(theta_hat) - c_hat * sigma)
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(LojaEstimate {
        theta_hat,
        c_hat,
        samples_used: logs.len(),
        max_residual,
        valid: theta_hat < 1.0,
        variant,
    })
}

/// Sampled infimum of the normalized weight over a region.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WeightReport {
    pub rho_inf_hat: f64,
    /// Sample attaining the infimum.
    pub min_witness: Point,
    /// Samples where every gradient vanished (weight undefined there).
    pub excluded_count: usize,
    /// Max over samples of ||M - (tr M / k) I||_F / tr M; at rounding level
    /// for maps whose Gram matrix is a scalar matrix.
    pub simple_deviation: f64,
}

pub fn rho_inf_estimate(map: &AnalyticMap, region: &RegionSpec) -> Result<WeightReport> {
    if region.dim() != map.n() {
        return Err(Error::DimensionMismatch {
            context: "weight region",
            expected: map.n(),
            got: region.dim(),
        });
    }
    let k = map.k() as f64;
    let mut best: Option<(f64, Point)> = None;
    let mut excluded = 0usize;
    let mut deviation: f64 = 0.0;
    for point in region.samples() {
        let frame = map.gradient_frame(point.coords())?;
        let trace = frame.m.trace();
        if !(trace > spectra::tol::ZERO_FLOOR) {
            excluded += 1;
            continue;
        }
        let RhoValue { rho: value, .. } = rho(&frame);
        if best.as_ref().map_or(true, |(b, _)| value < *b) {
            best = Some((value, point.clone()));
        }
        let scaled_identity = crate::mat::Mat::identity(map.k()).scaled(trace / k);
        deviation = deviation.max(frame.m.sub(&scaled_identity).frobenius_norm() / trace);
    }
    match best {
        Some((rho_inf_hat, min_witness)) => Ok(WeightReport {
            rho_inf_hat,
            min_witness,
            excluded_count: excluded,
            simple_deviation: deviation,
        }),
        None => Err(Error::DegenerateMap(
            "every sampled gradient frame vanished".into(),
        )),
    }
}

/// The three sampled infima that witness equivalence of the strong and weak
/// inequality forms: the weight, sigma_min normalized by the trace root, and
/// sigma_min normalized by sigma_max.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EquivalenceReport {
    pub inf_rho: f64,
    pub inf_sigma_over_trace_root: f64,
    pub inf_sigma_ratio: f64,
    /// True when the three infima agree about positivity: if any one exceeds
    /// the positivity threshold, none of the others collapses to zero.
    pub consistent: bool,
    pub samples_used: usize,
}

pub fn equivalence_report(map: &AnalyticMap, region: &RegionSpec) -> Result<EquivalenceReport> {
    if region.dim() != map.n() {
        return Err(Error::DimensionMismatch {
            context: "equivalence region",
            expected: map.n(),
            got: region.dim(),
        });
    }
    let mut inf_rho = f64::INFINITY;
    let mut inf_ratio_trace = f64::INFINITY;
    let mut inf_ratio = f64::INFINITY;
    let mut used = 0usize;
    for point in region.samples() {
        let frame = map.gradient_frame(point.coords())?;
        if !(frame.m.trace() > spectra::tol::ZERO_FLOOR) {
            continue;
        }
        let spec = singular_values(&frame.a)?;
        used += 1;
        inf_rho = inf_rho.min(rho(&frame).rho);
        inf_ratio_trace = inf_ratio_trace.min(spec.sigma_min() / spec.trace.sqrt());
        inf_ratio = inf_ratio.min(spec.sigma_min() / spec.sigma_max());
    }
    if used == 0 {
        return Err(Error::DegenerateMap(
            "every sampled gradient frame vanished".into(),
        ));
    }
    let values = [inf_rho, inf_ratio_trace, inf_ratio];
    let consistent = !values.iter().any(|&a| {
        a > tol::POSITIVITY && values.iter().any(|&b| b <= 1e-12)
    });
    Ok(EquivalenceReport {
        inf_rho,
        inf_sigma_over_trace_root: inf_ratio_trace,
        inf_sigma_ratio: inf_ratio,
        consistent,
        samples_used: used,
    })
}

/// Sampled gradient-angle separation for a pair: tau_hat = 1 - max |cos eta|.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AngleSeparationReport {
    pub max_abs_cos: f64,
    pub tau_hat: f64,
    pub holds: bool,
    pub samples_used: usize,
}

/// Checks that the gradients of a pair stay uniformly non-parallel on the
/// region, the first Jacquemard condition.
pub fn jacquemard_j1(map: &AnalyticMap, region: &RegionSpec) -> Result<AngleSeparationReport> {
    require_pair(map, "angle separation")?;
    check_region(map, region, "angle separation region")?;
    let mut max_cos: Option<f64> = None;
    let mut used = 0usize;
    for point in region.samples() {
        let frame = map.gradient_frame(point.coords())?;
        let gg = frame.m.get(0, 0);
        let hh = frame.m.get(1, 1);
        if gg <= spectra::tol::ZERO_FLOOR || hh <= spectra::tol::ZERO_FLOOR {
            continue;
        }
        used += 1;
        let cos = (frame.m.get(0, 1) / (gg.sqrt() * hh.sqrt())).clamp(-1.0, 1.0);
        max_cos = Some(max_cos.map_or(cos.abs(), |m: f64| m.max(cos.abs())));
    }
    let max_abs_cos = max_cos.ok_or_else(|| Error::InsufficientData {
        operation: "jacquemard_j1",
        detail: "no sample with both gradients nonzero".into(),
    })?;
    let tau_hat = 1.0 - max_abs_cos;
    Ok(AngleSeparationReport {
        max_abs_cos,
        tau_hat,
        holds: tau_hat > tol::POSITIVITY,
        samples_used: used,
    })
}

/// Sampled range of |grad h| / |grad g| for a pair. `ratio_max` of `None`
/// means the ratio was unbounded on the samples (a vanishing denominator
/// against a nonvanishing numerator).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ComparabilityReport {
    pub ratio_min: f64,
    pub ratio_max: Option<f64>,
    pub comparable: bool,
    pub samples_used: usize,
}

pub fn comparability(map: &AnalyticMap, region: &RegionSpec) -> Result<ComparabilityReport> {
    require_pair(map, "comparability")?;
    check_region(map, region, "comparability region")?;
    let mut ratio_min = f64::INFINITY;
    let mut ratio_max: f64 = 0.0;
    let mut unbounded = false;
    let mut used = 0usize;
    for point in region.samples() {
        let frame = map.gradient_frame(point.coords())?;
        let ng = frame.m.get(0, 0).sqrt();
        let nh = frame.m.get(1, 1).sqrt();
        let g_zero = ng <= spectra::tol::ZERO_FLOOR;
        let h_zero = nh <= spectra::tol::ZERO_FLOOR;
        if g_zero && h_zero {
            continue;
        }
        used += 1;
        if g_zero {
            unbounded = true;
        } else if h_zero {
            ratio_min = 0.0;
        } else {
            let r = nh / ng;
            ratio_min = ratio_min.min(r);
            ratio_max = ratio_max.max(r);
        }
    }
    if used == 0 {
        return Err(Error::InsufficientData {
            operation: "comparability",
            detail: "no sample with a nonzero gradient".into(),
        });
    }
    if ratio_min.is_infinite() {
        ratio_min = 0.0;
    }
    let ratio_max = if unbounded { None } else { Some(ratio_max) };
    let comparable = ratio_min > tol::POSITIVITY
        && ratio_max.map_or(false, |m| m < tol::RATIO_CAP);
    Ok(ComparabilityReport {
        ratio_min,
        ratio_max,
        comparable,
        samples_used: used,
    })
}

/// Cross-check between the angle-separation verdict and the positive-weight
/// verdict, valid on pairs with comparable gradient norms. For comparable
/// pairs the two verdicts agree, and the angle factor
/// 2 |grad g| |grad h| / (|grad g|^2 + |grad h|^2) is bracketed by the
/// comparability constants: 2A/(1+B^2) <= factor <= 2B/(1+A^2).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EquivCrossCheck {
    pub applicable: bool,
    pub comparability: ComparabilityReport,
    pub angle: Option<AngleSeparationReport>,
    pub rho_inf_hat: Option<f64>,
    pub weight_positive: Option<bool>,
    pub verdicts_agree: Option<bool>,
    pub bracket_lower: Option<f64>,
    pub bracket_upper: Option<f64>,
    pub bracket_respected: Option<bool>,
}

pub fn jacequiv_crosscheck(map: &AnalyticMap, region: &RegionSpec) -> Result<EquivCrossCheck> {
    let comp = comparability(map, region)?;
    if !comp.comparable {
        return Ok(EquivCrossCheck {
            applicable: false,
            comparability: comp,
            angle: None,
            rho_inf_hat: None,
            weight_positive: None,
            verdicts_agree: None,
            bracket_lower: None,
            bracket_upper: None,
            bracket_respected: None,
        });
    }
    let angle = jacquemard_j1(map, region)?;
    let weight = rho_inf_estimate(map, region)?;
    let a = comp.ratio_min;
    let b = comp.ratio_max.expect("comparable implies bounded ratio");
    let bracket_lower = 2.0 * a / (1.0 + b * b);
    let bracket_upper = 2.0 * b / (1.0 + a * a);

    let mut bracket_respected = true;
    for point in region.samples() {
        let frame = map.gradient_frame(point.coords())?;
        let gg = frame.m.get(0, 0);
        let hh = frame.m.get(1, 1);
        if gg <= spectra::tol::ZERO_FLOOR || hh <= spectra::tol::ZERO_FLOOR {
            continue;
        }
        let factor = 2.0 * gg.sqrt() * hh.sqrt() / (gg + hh);
        if factor < bracket_lower - 1e-9 || factor > bracket_upper + 1e-9 {
            bracket_respected = false;
        }
    }

    let weight_positive = weight.rho_inf_hat > tol::POSITIVITY;
    Ok(EquivCrossCheck {
        applicable: true,
        verdicts_agree: Some(angle.holds == weight_positive),
        rho_inf_hat: Some(weight.rho_inf_hat),
        weight_positive: Some(weight_positive),
        bracket_lower: Some(bracket_lower),
        bracket_upper: Some(bracket_upper),
        bracket_respected: Some(bracket_respected),
        angle: Some(angle),
        comparability: comp,
    })
}

/// Weight behavior of a composition G after H, sampled over H's domain.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CompositionWeightReport {
    /// True when H's Gram matrix is scalar to rounding on the region.
    pub h_simple: bool,
    pub samples_checked: usize,
    /// Samples where the composed differential vanished.
    pub skipped: usize,
    /// Min over samples of weight(G o H) minus the spectral lower bound
    /// k sigma_min(B)^2 sigma_min(A)^2 / (n sigma_max(B)^2 sigma_max(A)^2).
    pub min_margin: f64,
    pub bound_violations: usize,
    /// For simple H: max |weight(G o H)(x) - weight(G)(H(x))| over samples.
    pub equality_max_dev: Option<f64>,
    pub holds: bool,
}

pub fn composition_weight_check(
    outer: &AnalyticMap,
    inner: &AnalyticMap,
    region: &RegionSpec,
) -> Result<CompositionWeightReport> {
    if region.dim() != inner.n() {
        return Err(Error::DimensionMismatch {
            context: "composition region",
            expected: inner.n(),
            got: region.dim(),
        });
    }
    let composite = compose(outer, inner)?;
    let inner_report = rho_inf_estimate(inner, region)?;
    let h_simple = inner_report.simple_deviation <= tol::SIMPLE_DEVIATION;

    let k = outer.k() as f64;
    let n = outer.n() as f64;
    let mut checked = 0usize;
    let mut skipped = 0usize;
    let mut min_margin = f64::INFINITY;
    let mut violations = 0usize;
    let mut equality_dev: f64 = 0.0;
    let mut equality_compared = false;

    for point in region.samples() {
        let composed_frame = composite.gradient_frame(point.coords())?;
        if !(composed_frame.m.trace() > spectra::tol::ZERO_FLOOR) {
            skipped += 1;
            continue;
        }
        let value = inner.eval(point.coords())?;
        let inner_frame = inner.gradient_frame(point.coords())?;
        let outer_frame = outer.gradient_frame(&value)?;
        let spec_b = singular_values(&inner_frame.a)?;
        let spec_a = singular_values(&outer_frame.a)?;
        let denom = n * spec_b.sigma_max().powi(2) * spec_a.sigma_max().powi(2);
        let bound = if denom > spectra::tol::ZERO_FLOOR {
            k * spec_b.sigma_min().powi(2) * spec_a.sigma_min().powi(2) / denom
        } else {
            0.0
        };
        let weight = rho(&composed_frame).rho;
        let margin = weight - bound;
        min_margin = min_margin.min(margin);
        if margin < -spectra::tol::INEQ_SLACK * (1.0 + bound) {
            violations += 1;
        }
        checked += 1;
        if h_simple {
            let outer_rho = rho(&outer_frame);
            if outer_rho.defined {
                equality_compared = true;
                equality_dev = equality_dev.max((weight - outer_rho.rho).abs());
            }
        }
    }
    if checked == 0 {
        return Err(Error::DegenerateMap(
            "composed differential vanished at every sample".into(),
        ));
    }
    let equality_max_dev = (h_simple && equality_compared).then_some(equality_dev);
    let holds =
        violations == 0 && equality_max_dev.map_or(true, |d| d <= spectra::tol::EQUALITY_TOL);
    Ok(CompositionWeightReport {
        h_simple,
        samples_checked: checked,
        skipped,
        min_margin,
        bound_violations: violations,
        equality_max_dev,
        holds,
    })
}

fn require_pair(map: &AnalyticMap, context: &'static str) -> Result<()> {
    if map.k() != 2 {
        return Err(Error::DimensionMismatch {
            context,
            expected: 2,
            got: map.k(),
        });
    }
    Ok(())
}

fn check_region(map: &AnalyticMap, region: &RegionSpec, context: &'static str) -> Result<()> {
    if region.dim() != map.n() {
        return Err(Error::DimensionMismatch {
            context,
            expected: map.n(),
            got: region.dim(),
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use approx::assert_relative_eq;

    fn region(n: usize, radius: f64, levels: u32, dirs: u32) -> RegionSpec {
        RegionSpec::origin(n, radius, levels, dirs, 42).unwrap()
    }

    #[test]
    fn squaring_exponent_is_one_half() {
        let f = corpus::z_power(2);
        let est = loja_fit(
            &f,
            &Point::origin(2),
            &region(2, 0.5, 24, 8),
            Variant::Strong,
            CMode::FixedOne,
        )
        .unwrap();
        assert!((est.theta_hat - 0.5).abs() < 0.02, "theta {}", est.theta_hat);
        assert!(est.valid);
        assert!(est.max_residual <= tol::RESIDUAL_SLACK);
    }

    #[test]
    fn submersion_exponent_clamps_to_zero() {
        let est = loja_fit(
            &corpus::identity2(),
            &Point::origin(2),
            &region(2, 0.5, 12, 8),
            Variant::Strong,
            CMode::FixedOne,
        )
        .unwrap();
        assert_eq!(est.theta_hat, 0.0);
        assert!(est.valid);
    }

    #[test]
    fn scalar_square_weak_variant_reproduces_one_half() {
        let f = AnalyticMap::new(
            1,
            1,
            vec![crate::expr::Expr::Pow(Box::new(crate::expr::Expr::var(0)), 2)],
            "x2",
        )
        .unwrap();
        let est = loja_fit(
            &f,
            &Point::origin(1),
            &region(1, 0.5, 20, 4),
            Variant::Weak,
            CMode::FixedOne,
        )
        .unwrap();
        assert!((est.theta_hat - 0.5).abs() < 1e-6, "theta {}", est.theta_hat);
    }

    #[test]
    fn two_param_floors_slope_when_constant_fits_the_box() {
        let f = corpus::z_power(3);
        let est = loja_fit(
            &f,
            &Point::origin(2),
            &region(2, 0.5, 24, 8),
            Variant::Strong,
            CMode::TwoParam,
        )
        .unwrap();
        // Free constant: the program floors the slope at zero and the
        // intercept lands on the deepest shell, where sigma = 3 |z|^2 with
        // |z| = 2^-24 gives c = 2^48 / 3.
        assert_eq!(est.theta_hat, 0.0);
        assert_relative_eq!(est.c_hat, 2f64.powi(48) / 3.0, max_relative = 1e-9);
        assert!(est.max_residual <= tol::RESIDUAL_SLACK);
        assert!(est.valid);
    }

    #[test]
    fn two_param_exponent_engages_past_the_intercept_box() {
        // Shells at radius ~1e-8 push -log sigma past the intercept box, so
        // the slope must rise above zero to keep the constant inside it.
        let f = AnalyticMap::new(
            1,
            1,
            vec![crate::expr::Expr::Pow(
                Box::new(crate::expr::Expr::var(0)),
                2,
            )],
            "x2",
        )
        .unwrap();
        let region = RegionSpec::origin(1, 1e-22, 6, 2, 9).unwrap();
        let est = loja_fit(
            &f,
            &Point::origin(1),
            &region,
            Variant::Weak,
            CMode::TwoParam,
        )
        .unwrap();
        assert!(est.theta_hat > 0.0, "theta {}", est.theta_hat);
        assert!(est.theta_hat < 0.5);
        assert!(est.max_residual <= tol::RESIDUAL_SLACK);
    }

    #[test]
    fn too_few_samples_is_an_error() {
        let err = loja_fit(
            &corpus::z_power(2),
            &Point::origin(2),
            &region(2, 0.5, 1, 5),
            Variant::Strong,
            CMode::FixedOne,
        )
        .unwrap_err();
        assert!(matches!(err, Error::InsufficientData { .. }));
    }

    #[test]
    fn off_center_region_rejected() {
        let r = RegionSpec::new(
            Point::new(vec![0.5, 0.0]).unwrap(),
            0.5,
            8,
            8,
            1,
        )
        .unwrap();
        assert!(matches!(
            loja_fit(
                &corpus::z_power(2),
                &Point::origin(2),
                &r,
                Variant::Strong,
                CMode::FixedOne
            ),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn weight_infimum_of_simple_map_is_one() {
        let report = rho_inf_estimate(&corpus::z_power(2), &region(2, 0.5, 12, 16)).unwrap();
        assert!((report.rho_inf_hat - 1.0).abs() <= 1e-9);
        assert!(report.simple_deviation <= tol::SIMPLE_DEVIATION);
        assert_eq!(report.excluded_count, 0);
    }

    #[test]
    fn weight_infimum_of_parallel_pair_is_zero() {
        let report = rho_inf_estimate(&corpus::parallel_pair(), &region(2, 0.5, 8, 8)).unwrap();
        assert!(report.rho_inf_hat <= 1e-12);
    }

    #[test]
    fn zero_map_is_degenerate() {
        let zero = AnalyticMap::new(
            2,
            2,
            vec![crate::expr::Expr::con(0.0), crate::expr::Expr::con(0.0)],
            "zero",
        )
        .unwrap();
        assert!(matches!(
            rho_inf_estimate(&zero, &region(2, 0.5, 4, 4)),
            Err(Error::DegenerateMap(_))
        ));
    }

    #[test]
    fn equivalence_of_simple_pair() {
        let report = equivalence_report(&corpus::z_power(2), &region(2, 0.5, 10, 12)).unwrap();
        assert_relative_eq!(report.inf_rho, 1.0, epsilon = 1e-9);
        assert_relative_eq!(
            report.inf_sigma_over_trace_root,
            std::f64::consts::FRAC_1_SQRT_2,
            epsilon = 1e-9
        );
        assert_relative_eq!(report.inf_sigma_ratio, 1.0, epsilon = 1e-9);
        assert!(report.consistent);
    }

    #[test]
    fn parallel_gradients_fail_angle_separation() {
        let report = jacquemard_j1(&corpus::parallel_pair(), &region(2, 0.5, 6, 8)).unwrap();
        assert_relative_eq!(report.max_abs_cos, 1.0, epsilon = 1e-12);
        assert!(!report.holds);
    }

    #[test]
    fn sheared_pair_angle_separation_holds() {
        let report = jacquemard_j1(&corpus::shear_z2(), &region(2, 0.5, 6, 16)).unwrap();
        assert_relative_eq!(
            report.max_abs_cos,
            std::f64::consts::FRAC_1_SQRT_2,
            epsilon = 1e-9
        );
        assert!((report.tau_hat - (1.0 - std::f64::consts::FRAC_1_SQRT_2)).abs() < 1e-9);
        assert!(report.holds);
    }

    #[test]
    fn comparability_of_fixed_linear_map() {
        let report = comparability(&corpus::linear_12_34(), &region(2, 1.0, 4, 8)).unwrap();
        let expected = 5.0 / 5.0_f64.sqrt();
        assert_relative_eq!(report.ratio_min, expected, max_relative = 1e-12);
        assert_relative_eq!(report.ratio_max.unwrap(), expected, max_relative = 1e-12);
        assert!(report.comparable);
    }

    #[test]
    fn cubic_second_component_is_not_comparable() {
        // (x, y^3): |grad h| / |grad g| = 3y^2 collapses near the origin.
        let f = AnalyticMap::new(
            2,
            2,
            vec![
                crate::expr::Expr::var(0),
                crate::expr::Expr::Pow(Box::new(crate::expr::Expr::var(1)), 3),
            ],
            "x-y3",
        )
        .unwrap();
        let report = comparability(&f, &region(2, 0.5, 16, 8)).unwrap();
        assert!(report.ratio_min < tol::POSITIVITY);
        assert!(!report.comparable);
        let cross = jacequiv_crosscheck(&f, &region(2, 0.5, 16, 8)).unwrap();
        assert!(!cross.applicable);
        assert!(cross.angle.is_none());
    }

    #[test]
    fn crosscheck_on_sheared_pair() {
        let cross = jacequiv_crosscheck(&corpus::shear_z2(), &region(2, 0.5, 8, 16)).unwrap();
        assert!(cross.applicable);
        assert_eq!(cross.verdicts_agree, Some(true));
        assert_eq!(cross.weight_positive, Some(true));
        assert!(cross.bracket_respected.unwrap());
        // ratio is the constant 1/sqrt(2), so both bracket ends coincide
        let lo = cross.bracket_lower.unwrap();
        let hi = cross.bracket_upper.unwrap();
        assert_relative_eq!(lo, hi, max_relative = 1e-9);
        assert_relative_eq!(lo, 2.0 * 2.0_f64.sqrt() / 3.0, max_relative = 1e-9);
    }

    #[test]
    fn crosscheck_on_parallel_pair_agrees_negatively() {
        let cross = jacequiv_crosscheck(&corpus::parallel_pair(), &region(2, 0.5, 6, 8)).unwrap();
        assert!(cross.applicable);
        assert_eq!(cross.weight_positive, Some(false));
        assert_eq!(cross.verdicts_agree, Some(true));
    }

    #[test]
    fn composition_after_simple_inner_matches_outer_weight() {
        let report = composition_weight_check(
            &corpus::linear_12_34(),
            &corpus::z_power(2),
            &region(2, 0.5, 10, 10),
        )
        .unwrap();
        assert!(report.h_simple);
        assert!(report.equality_max_dev.unwrap() <= 1e-8);
        assert_eq!(report.bound_violations, 0);
        assert!(report.holds);
        assert!(report.min_margin >= 0.0);
    }

    #[test]
    fn composition_bound_holds_for_nonsimple_inner() {
        let report = composition_weight_check(
            &corpus::z_power(2),
            &corpus::shear_z2(),
            &region(2, 0.5, 8, 8),
        )
        .unwrap();
        assert!(!report.h_simple);
        assert_eq!(report.bound_violations, 0);
        assert!(report.holds);
    }
}
