//! Polynomial expression trees.
//!
//! Components of analytic maps are real polynomials, represented as a small
//! recursive enum. The JSON wire format tags each node by its operation:
//!
//! ```text
//! {"const": 2.0}
//! {"var": 0}
//! {"neg": <node>}
//! {"add": [<node>, ...]}
//! {"mul": [<node>, ...]}
//! {"pow": [<node>, 3]}
//! ```
//!
//! Exponents are non-negative integers, so every tree denotes a polynomial
//! and is analytic everywhere.

use serde::{Deserialize, Serialize};

use crate::dual::DualVector;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Expr {
    Const(f64),
    Var(usize),
    Neg(Box<Expr>),
    Add(Vec<Expr>),
    Mul(Vec<Expr>),
    Pow(Box<Expr>, u32),
}

impl Expr {
    pub fn var(j: usize) -> Expr {
        Expr::Var(j)
    }

    pub fn con(c: f64) -> Expr {
        Expr::Const(c)
    }

    /// Evaluates at a point. Empty sums are zero and empty products one.
    pub fn eval(&self, x: &[f64]) -> f64 {
        match self {
            Expr::Const(c) => *c,
            Expr::Var(j) => x[*j],
            Expr::Neg(e) => -e.eval(x),
            Expr::Add(terms) => terms.iter().map(|t| t.eval(x)).sum(),
            Expr::Mul(factors) => factors.iter().map(|t| t.eval(x)).product(),
            Expr::Pow(base, m) => base.eval(x).powi(*m as i32),
        }
    }

    /// Evaluates with dual-vector propagation: the result carries the value
    /// and the full gradient with respect to the `x.len()` variables.
    pub fn eval_dual(&self, x: &[f64]) -> DualVector {
        let n = x.len();
        match self {
            Expr::Const(c) => DualVector::constant(n, *c),
            Expr::Var(j) => DualVector::variable(n, *j, x[*j]),
            Expr::Neg(e) => e.eval_dual(x).neg(),
            Expr::Add(terms) => {
                let mut acc = DualVector::constant(n, 0.0);
                for t in terms {
                    acc = acc.add(&t.eval_dual(x));
                }
                acc
            }
            Expr::Mul(factors) => {
                let mut acc = DualVector::constant(n, 1.0);
                for t in factors {
                    acc = acc.mul(&t.eval_dual(x));
                }
                acc
            }
            Expr::Pow(base, m) => base.eval_dual(x).powi(*m),
        }
    }

    /// Largest variable index referenced, if any.
    pub fn max_var(&self) -> Option<usize> {
        match self {
            Expr::Const(_) => None,
            Expr::Var(j) => Some(*j),
            Expr::Neg(e) => e.max_var(),
            Expr::Add(list) | Expr::Mul(list) => list.iter().filter_map(|e| e.max_var()).max(),
            Expr::Pow(base, _) => base.max_var(),
        }
    }

    pub fn constants_finite(&self) -> bool {
        match self {
            Expr::Const(c) => c.is_finite(),
            Expr::Var(_) => true,
            Expr::Neg(e) => e.constants_finite(),
            Expr::Add(list) | Expr::Mul(list) => list.iter().all(|e| e.constants_finite()),
            Expr::Pow(base, _) => base.constants_finite(),
        }
    }

    /// Shifts every variable index by `offset`.
    pub fn shift_vars(&self, offset: usize) -> Expr {
        match self {
            Expr::Const(c) => Expr::Const(*c),
            Expr::Var(j) => Expr::Var(j + offset),
            Expr::Neg(e) => Expr::Neg(Box::new(e.shift_vars(offset))),
            Expr::Add(list) => Expr::Add(list.iter().map(|e| e.shift_vars(offset)).collect()),
            Expr::Mul(list) => Expr::Mul(list.iter().map(|e| e.shift_vars(offset)).collect()),
            Expr::Pow(base, m) => Expr::Pow(Box::new(base.shift_vars(offset)), *m),
        }
    }

    /// Replaces variable j by `subs[j]` everywhere. Used for composition.
    pub fn substitute(&self, subs: &[Expr]) -> Expr {
        match self {
            Expr::Const(c) => Expr::Const(*c),
            Expr::Var(j) => subs[*j].clone(),
            Expr::Neg(e) => Expr::Neg(Box::new(e.substitute(subs))),
            Expr::Add(list) => Expr::Add(list.iter().map(|e| e.substitute(subs)).collect()),
            Expr::Mul(list) => Expr::Mul(list.iter().map(|e| e.substitute(subs)).collect()),
            Expr::Pow(base, m) => Expr::Pow(Box::new(base.substitute(subs)), *m),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x2_minus_y2() -> Expr {
        // x^2 - y^2
        Expr::Add(vec![
            Expr::Pow(Box::new(Expr::var(0)), 2),
            Expr::Neg(Box::new(Expr::Pow(Box::new(Expr::var(1)), 2))),
        ])
    }

    #[test]
    fn eval_matches_hand_computation() {
        let e = x2_minus_y2();
        assert_eq!(e.eval(&[1.0, 1.0]), 0.0);
        assert_eq!(e.eval(&[3.0, 2.0]), 5.0);
    }

    #[test]
    fn dual_gradient_of_difference_of_squares() {
        let e = x2_minus_y2();
        let d = e.eval_dual(&[3.0, 2.0]);
        assert_eq!(d.value, 5.0);
        assert_eq!(d.partials, vec![6.0, -4.0]);
    }

    #[test]
    fn wire_format_shapes() {
        let e = Expr::Pow(Box::new(Expr::var(1)), 3);
        assert_eq!(serde_json::to_string(&e).unwrap(), r#"{"pow":[{"var":1},3]}"#);
        let back: Expr = serde_json::from_str(r#"{"mul":[{"const":2.0},{"var":0}]}"#).unwrap();
        assert_eq!(back, Expr::Mul(vec![Expr::con(2.0), Expr::var(0)]));
    }

    #[test]
    fn negative_exponent_rejected_by_schema() {
        let bad: std::result::Result<Expr, _> = serde_json::from_str(r#"{"pow":[{"var":0},-2]}"#);
        assert!(bad.is_err());
    }

    #[test]
    fn substitution_composes_polynomials() {
        // (x^2 - y^2) with x -> u+v, y -> u-v gives 4uv
        let e = x2_minus_y2();
        let subs = vec![
            Expr::Add(vec![Expr::var(0), Expr::var(1)]),
            Expr::Add(vec![Expr::var(0), Expr::Neg(Box::new(Expr::var(1)))]),
        ];
        let composed = e.substitute(&subs);
        assert_eq!(composed.eval(&[3.0, 0.5]), 6.0);
    }
}
