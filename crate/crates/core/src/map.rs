//! Polynomial maps from R^n to R^k and the constructions on them.
//!
//! An [`AnalyticMap`] is a list of k polynomial components in n variables,
//! plus a human-readable label. Maps are exchanged as JSON:
//!
//! ```text
//! {"n": 2, "k": 2, "label": "squaring",
//!  "components": [{"add": [...]}, {"mul": [...]}]}
//! ```
//!
//! Gradients come from dual-number propagation, so the gradient frame at a
//! point is exact to rounding. The frame collects the k gradient columns into
//! an n x k matrix together with its Gram matrix; all spectral analysis
//! starts from that frame.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::mat::Mat;
use crate::spectra::GradientFrame;

/// A point of R^n with finite coordinates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Point(Vec<f64>);

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite("point coordinate"));
        }
        Ok(Point(coords))
    }

    pub fn origin(n: usize) -> Self {
        Point(vec![0.0; n])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|c| c * c).sum::<f64>().sqrt()
    }
}

impl std::ops::Deref for Point {
    type Target = [f64];
    fn deref(&self) -> &[f64] {
        &self.0
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMap {
    n: usize,
    k: usize,
    label: String,
    components: Vec<Expr>,
}

/// A polynomial map G = (g_1, ..., g_k) : R^n -> R^k.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawMap", into = "RawMap")]
pub struct AnalyticMap {
    n: usize,
    k: usize,
    label: String,
    components: Vec<Expr>,
}

impl TryFrom<RawMap> for AnalyticMap {
    type Error = Error;
    fn try_from(raw: RawMap) -> Result<Self> {
        AnalyticMap::new(raw.n, raw.k, raw.components, raw.label)
    }
}

impl From<AnalyticMap> for RawMap {
    fn from(map: AnalyticMap) -> RawMap {
        RawMap {
            n: map.n,
            k: map.k,
            label: map.label,
            components: map.components,
        }
    }
}

impl AnalyticMap {
    pub fn new(
        n: usize,
        k: usize,
        components: Vec<Expr>,
        label: impl Into<String>,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("map needs n >= 1".into()));
        }
        if k == 0 || components.len() != k {
            return Err(Error::DimensionMismatch {
                context: "map components",
                expected: k.max(1),
                got: components.len(),
            });
        }
        for c in &components {
            if let Some(j) = c.max_var() {
                if j >= n {
                    return Err(Error::InvalidInput(format!(
                        "component references variable {j} but the map has {n} variables"
                    )));
                }
            }
            if !c.constants_finite() {
                return Err(Error::NonFinite("expression constant"));
            }
        }
        Ok(AnalyticMap {
            n,
            k,
            label: label.into(),
            components,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn components(&self) -> &[Expr] {
        &self.components
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(Error::from_json)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("map serialization cannot fail")
    }

    /// Evaluates all components at x.
    pub fn eval(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_dim(x)?;
        Ok(self.components.iter().map(|c| c.eval(x)).collect())
    }

    /// Euclidean norm |G(x)|.
    pub fn value_norm(&self, x: &[f64]) -> Result<f64> {
        Ok(self.eval(x)?.iter().map(|v| v * v).sum::<f64>().sqrt())
    }

    /// The gradient frame at x: the n x k matrix whose i-th column is the
    /// gradient of g_i, together with its k x k Gram matrix.
    pub fn gradient_frame(&self, x: &[f64]) -> Result<GradientFrame> {
        self.check_dim(x)?;
        let columns: Vec<Vec<f64>> = self
            .components
            .iter()
            .map(|c| c.eval_dual(x).partials)
            .collect();
        let a = Mat::from_columns(&columns)?;
        if !a.is_finite() {
            return Err(Error::NonFinite("gradient entry"));
        }
        GradientFrame::new(Point::new(x.to_vec())?, a)
    }

    fn check_dim(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch {
                context: "evaluation point",
                expected: self.n,
                got: x.len(),
            });
        }
        Ok(())
    }
}

/// The identity map on R^n.
pub fn identity_map(n: usize) -> AnalyticMap {
    let components = (0..n).map(Expr::var).collect();
    AnalyticMap::new(n, n, components, format!("identity-{n}")).expect("static construction")
}

/// Composition outer(inner(x)), built by substituting the inner components
/// into the outer expression trees.
pub fn compose(outer: &AnalyticMap, inner: &AnalyticMap) -> Result<AnalyticMap> {
    if inner.k() != outer.n() {
        return Err(Error::DimensionMismatch {
            context: "composition",
            expected: outer.n(),
            got: inner.k(),
        });
    }
    let components = outer
        .components()
        .iter()
        .map(|c| c.substitute(inner.components()))
        .collect();
    AnalyticMap::new(
        inner.n(),
        outer.k(),
        components,
        format!("{}o{}", outer.label(), inner.label()),
    )
}

/// The odd-power radial map y |-> |y|^(p-1) y on R^k, written as the
/// polynomial (y.y)^((p-1)/2) y so all components stay polynomial.
pub fn nap_map(k: usize, p: u32) -> Result<AnalyticMap> {
    if k == 0 {
        return Err(Error::InvalidInput("nap map needs k >= 1".into()));
    }
    if p == 0 || p % 2 == 0 {
        return Err(Error::InvalidInput(format!(
            "nap map exponent must be odd and positive, got {p}"
        )));
    }
    let radius_sq = Expr::Add((0..k).map(|j| Expr::Pow(Box::new(Expr::var(j)), 2)).collect());
    let half = (p - 1) / 2;
    let components = (0..k)
        .map(|j| Expr::Mul(vec![Expr::Pow(Box::new(radius_sq.clone()), half), Expr::var(j)]))
        .collect();
    AnalyticMap::new(k, k, components, format!("nap-k{k}-p{p}"))
}

/// Treats two component pairs as real and imaginary parts and multiplies
/// them as complex numbers: (g1 g2 - h1 h2, g1 h2 + h1 g2).
///
/// With `disjoint_vars` the factors act on independent variable blocks and
/// the product lives on R^(n1+n2); otherwise both factors must share the same
/// domain.
pub fn product_pair(
    f1: &AnalyticMap,
    f2: &AnalyticMap,
    disjoint_vars: bool,
) -> Result<AnalyticMap> {
    if f1.k() != 2 || f2.k() != 2 {
        return Err(Error::InvalidInput(
            "pair product needs two components on each factor".into(),
        ));
    }
    let (n, g2, h2) = if disjoint_vars {
        (
            f1.n() + f2.n(),
            f2.components()[0].shift_vars(f1.n()),
            f2.components()[1].shift_vars(f1.n()),
        )
    } else {
        if f1.n() != f2.n() {
            return Err(Error::DimensionMismatch {
                context: "shared-variable pair product",
                expected: f1.n(),
                got: f2.n(),
            });
        }
        (f1.n(), f2.components()[0].clone(), f2.components()[1].clone())
    };
    let g1 = f1.components()[0].clone();
    let h1 = f1.components()[1].clone();
    let real = Expr::Add(vec![
        Expr::Mul(vec![g1.clone(), g2.clone()]),
        Expr::Neg(Box::new(Expr::Mul(vec![h1.clone(), h2.clone()]))),
    ]);
    let imag = Expr::Add(vec![Expr::Mul(vec![g1, h2]), Expr::Mul(vec![h1, g2])]);
    AnalyticMap::new(
        n,
        2,
        vec![real, imag],
        format!("{}*{}", f1.label(), f2.label()),
    )
}

/// The linear map with the given k x n coefficient matrix: component i is
/// the inner product of row i with x.
pub fn linear_map(rows: &[Vec<f64>]) -> Result<AnalyticMap> {
    let mat = Mat::from_rows(rows)?;
    let components = (0..mat.rows())
        .map(|i| {
            Expr::Add(
                (0..mat.cols())
                    .map(|j| Expr::Mul(vec![Expr::con(mat.get(i, j)), Expr::var(j)]))
                    .collect(),
            )
        })
        .collect();
    AnalyticMap::new(mat.cols(), mat.rows(), components, "linear")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use approx::assert_relative_eq;

    #[test]
    fn squaring_map_at_one_one() {
        let f = corpus::z_power(2);
        assert_eq!(f.eval(&[1.0, 1.0]).unwrap(), vec![0.0, 2.0]);
    }

    #[test]
    fn eval_rejects_wrong_dimension() {
        let f = corpus::z_power(2);
        assert!(matches!(
            f.eval(&[1.0]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn gradient_frame_of_squaring() {
        // columns (2x, -2y) and (2y, 2x) at (1, 0): (2, 0) and (0, 2)
        let f = corpus::z_power(2);
        let frame = f.gradient_frame(&[1.0, 0.0]).unwrap();
        assert_eq!(frame.a.to_rows(), vec![vec![2.0, 0.0], vec![0.0, 2.0]]);
        assert_eq!(frame.m.to_rows(), vec![vec![4.0, 0.0], vec![0.0, 4.0]]);
    }

    #[test]
    fn linear_frame_is_constant_transpose() {
        let f = linear_map(&[vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
        for p in [[0.0, 0.0], [1.5, -2.0]] {
            let frame = f.gradient_frame(&p).unwrap();
            assert_eq!(frame.a.to_rows(), vec![vec![1.0, 3.0], vec![2.0, 4.0]]);
        }
    }

    #[test]
    fn compose_checks_dimensions() {
        let f = corpus::z_power(2); // 2 -> 2
        let g = nap_map(3, 3).unwrap(); // 3 -> 3
        assert!(compose(&g, &f).is_err());
    }

    #[test]
    fn composition_matches_pointwise_evaluation() {
        let shear = linear_map(&[vec![1.0, 1.0], vec![0.0, 1.0]]).unwrap();
        let f = corpus::z_power(2);
        let composed = compose(&shear, &f).unwrap();
        for p in [[0.3, -0.7], [1.0, 2.0]] {
            let direct = shear.eval(&f.eval(&p).unwrap()).unwrap();
            let through = composed.eval(&p).unwrap();
            assert_relative_eq!(direct[0], through[0], max_relative = 1e-14);
            assert_relative_eq!(direct[1], through[1], max_relative = 1e-14);
        }
    }

    #[test]
    fn nap_map_norm_and_small_case() {
        let m = nap_map(2, 3).unwrap();
        let v = m.eval(&[0.5, 0.0]).unwrap();
        assert_eq!(v, vec![0.125, 0.0]);
        assert!(nap_map(2, 4).is_err());
        assert!(nap_map(2, 0).is_err());
        // p = 1 evaluates as the identity
        let id = nap_map(3, 1).unwrap();
        let x = [0.2, -0.4, 0.9];
        assert_eq!(id.eval(&x).unwrap(), x.to_vec());
    }

    #[test]
    fn product_with_unit_pair_is_identity() {
        let unit = AnalyticMap::new(2, 2, vec![Expr::con(1.0), Expr::con(0.0)], "one").unwrap();
        let f = corpus::z_power(2);
        let prod = product_pair(&f, &unit, false).unwrap();
        for p in [[0.4, 0.6], [-1.0, 2.0]] {
            assert_eq!(prod.eval(&p).unwrap(), f.eval(&p).unwrap());
        }
    }

    #[test]
    fn disjoint_product_reindexes_second_factor() {
        let f = corpus::zbar_w2();
        // g = x(u^2-v^2) + 2yuv, h = 2xuv - y(u^2-v^2)
        let x = [0.5, -0.25, 2.0, 1.0];
        let (z, w) = ((0.5, -0.25), (2.0, 1.0));
        let g = z.0 * (w.0 * w.0 - w.1 * w.1) + 2.0 * z.1 * w.0 * w.1;
        let h = 2.0 * z.0 * w.0 * w.1 - z.1 * (w.0 * w.0 - w.1 * w.1);
        let v = f.eval(&x).unwrap();
        assert_relative_eq!(v[0], g, max_relative = 1e-14);
        assert_relative_eq!(v[1], h, max_relative = 1e-14);
    }

    #[test]
    fn json_round_trip_preserves_tree() {
        let f = corpus::zbar_w2();
        let text = f.to_json();
        let back = AnalyticMap::from_json(&text).unwrap();
        assert_eq!(f, back);
    }

    #[test]
    fn parse_error_reports_position() {
        let err = AnalyticMap::from_json("{\"n\": 2,\n \"k\": }").unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn unknown_fields_rejected() {
        let text = r#"{"n":1,"k":1,"label":"x","components":[{"var":0}],"extra":1}"#;
        assert!(AnalyticMap::from_json(text).is_err());
    }
}
