//! Forward-mode automatic differentiation on dual vectors.
//!
//! A [`DualVector`] carries a value together with its partial derivatives with
//! respect to all input variables. Propagating duals through an expression
//! tree yields the exact gradient of the expression (up to floating-point
//! rounding), with no step-size tuning and no truncation error.

/// Value plus the vector of partial derivatives d/dx_j.
#[derive(Clone, Debug, PartialEq)]
pub struct DualVector {
    pub value: f64,
    pub partials: Vec<f64>,
}

impl DualVector {
    /// A constant: value c, all partials zero.
    pub fn constant(n_vars: usize, c: f64) -> Self {
        DualVector {
            value: c,
            partials: vec![0.0; n_vars],
        }
    }

    /// The j-th variable seeded with value x_j: partial j is one.
    pub fn variable(n_vars: usize, j: usize, value: f64) -> Self {
        let mut partials = vec![0.0; n_vars];
        partials[j] = 1.0;
        DualVector { value, partials }
    }

    pub fn add(&self, other: &DualVector) -> DualVector {
        DualVector {
            value: self.value + other.value,
            partials: self
                .partials
                .iter()
                .zip(&other.partials)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn mul(&self, other: &DualVector) -> DualVector {
        DualVector {
            value: self.value * other.value,
            partials: self
                .partials
                .iter()
                .zip(&other.partials)
                .map(|(a, b)| a * other.value + self.value * b)
                .collect(),
        }
    }

    pub fn neg(&self) -> DualVector {
        DualVector {
            value: -self.value,
            partials: self.partials.iter().map(|a| -a).collect(),
        }
    }

    /// Natural power u^m with d(u^m) = m u^(m-1) u'. The m = 0 case is the
    /// constant one, so its derivative vanishes identically.
    pub fn powi(&self, m: u32) -> DualVector {
        if m == 0 {
            return DualVector::constant(self.partials.len(), 1.0);
        }
        let factor = m as f64 * self.value.powi(m as i32 - 1);
        DualVector {
            value: self.value.powi(m as i32),
            partials: self.partials.iter().map(|a| factor * a).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn product_rule() {
        // d/dx (x*y) = y, d/dy (x*y) = x at (3, 5)
        let x = DualVector::variable(2, 0, 3.0);
        let y = DualVector::variable(2, 1, 5.0);
        let p = x.mul(&y);
        assert_eq!(p.value, 15.0);
        assert_eq!(p.partials, vec![5.0, 3.0]);
    }

    #[test]
    fn power_rule_at_zero_base() {
        // d/dx x^1 = 1 even at x = 0
        let x = DualVector::variable(1, 0, 0.0);
        let p = x.powi(1);
        assert_eq!(p.partials, vec![1.0]);
        // x^0 is constant one
        let q = x.powi(0);
        assert_eq!(q.value, 1.0);
        assert_eq!(q.partials, vec![0.0]);
    }

    #[test]
    fn cubic_derivative() {
        let x = DualVector::variable(1, 0, 2.0);
        let c = x.powi(3);
        assert_relative_eq!(c.value, 8.0);
        assert_relative_eq!(c.partials[0], 12.0);
    }
}
