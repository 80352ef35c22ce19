//! The bundled example maps used across tests, the book, and the CLI.
//!
//! Most of these are germs of classical plane curves viewed as real pairs:
//! complex powers z^d, the mixed product conj(z) w^2, a sheared power, and a
//! few degenerate pairs whose gradients align or collapse along an axis.

use crate::expr::Expr;
use crate::map::{
    compose, identity_map, linear_map, nap_map, product_pair, AnalyticMap,
};

fn expect(map: crate::error::Result<AnalyticMap>) -> AnalyticMap {
    map.expect("static corpus construction")
}

/// The complex power z^d on R^2, built by repeated complex multiplication.
pub fn z_power(d: u32) -> AnalyticMap {
    assert!(d >= 1, "complex power needs d >= 1");
    let z = identity_map(2).with_label("z");
    let mut acc = z.clone();
    for _ in 1..d {
        acc = expect(product_pair(&acc, &z, false));
    }
    acc.with_label(format!("z{d}"))
}

/// conj(z) * w^2 on R^4 = {(x, y, u, v)}:
/// (x(u^2-v^2) + 2yuv, 2xuv - y(u^2-v^2)).
pub fn zbar_w2() -> AnalyticMap {
    let conj = AnalyticMap::new(
        2,
        2,
        vec![Expr::var(0), Expr::Neg(Box::new(Expr::var(1)))],
        "zbar",
    )
    .expect("static corpus construction");
    let w2 = z_power(2);
    expect(product_pair(&conj, &w2, true)).with_label("zbar-w2")
}

/// An invertible shear applied after squaring: non-simple but with weight
/// bounded away from zero and one.
pub fn shear_z2() -> AnalyticMap {
    let shear = expect(linear_map(&[vec![1.0, 1.0], vec![0.0, 1.0]])).with_label("shear");
    expect(compose(&shear, &z_power(2))).with_label("shear-z2")
}

/// (x^2 + y^2, x): gradients collapse along the y = 0 axis while the value
/// stays away from zero, the standard failure of the critical-set condition.
pub fn sphere_plus_x() -> AnalyticMap {
    let g = Expr::Add(vec![
        Expr::Pow(Box::new(Expr::var(0)), 2),
        Expr::Pow(Box::new(Expr::var(1)), 2),
    ]);
    AnalyticMap::new(2, 2, vec![g, Expr::var(0)], "sphere-plus-x")
        .expect("static corpus construction")
}

/// (x, xy): the zero set is an axis and the pair degenerates along it.
pub fn x_xy() -> AnalyticMap {
    AnalyticMap::new(
        2,
        2,
        vec![Expr::var(0), Expr::Mul(vec![Expr::var(0), Expr::var(1)])],
        "x-xy",
    )
    .expect("static corpus construction")
}

/// (x + y, 2x + 2y): proportional components with everywhere-parallel
/// gradients, the canonical zero-weight pair.
pub fn parallel_pair() -> AnalyticMap {
    expect(linear_map(&[vec![1.0, 1.0], vec![2.0, 2.0]])).with_label("parallel")
}

/// The invertible linear example with rows (1, 2) and (3, 4); its weight is
/// the constant 4/30.
pub fn linear_12_34() -> AnalyticMap {
    expect(linear_map(&[vec![1.0, 2.0], vec![3.0, 4.0]])).with_label("linear-12-34")
}

/// Identity on the plane.
pub fn identity2() -> AnalyticMap {
    identity_map(2)
}

/// Every bundled map, in a fixed order.
pub fn all() -> Vec<AnalyticMap> {
    let mut maps = vec![
        identity2(),
        z_power(2),
        z_power(3),
        zbar_w2(),
        shear_z2(),
        sphere_plus_x(),
        x_xy(),
        parallel_pair(),
        linear_12_34(),
    ];
    for k in [2usize, 3] {
        for p in [3u32, 5] {
            maps.push(nap_map(k, p).expect("static corpus construction"));
        }
    }
    maps
}

/// Looks a bundled map up by label.
pub fn by_label(label: &str) -> Option<AnalyticMap> {
    all().into_iter().find(|m| m.label() == label)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn z3_matches_expanded_form() {
        let f = z_power(3);
        // (x^3 - 3xy^2, 3x^2 y - y^3) at (1, 1) is (-2, 2)
        assert_eq!(f.eval(&[1.0, 1.0]).unwrap(), vec![-2.0, 2.0]);
        let v = f.eval(&[0.4, -0.3]).unwrap();
        let (x, y) = (0.4, -0.3);
        assert_relative_eq!(v[0], x * x * x - 3.0 * x * y * y, max_relative = 1e-14);
        assert_relative_eq!(v[1], 3.0 * x * x * y - y * y * y, max_relative = 1e-14);
    }

    #[test]
    fn labels_are_unique() {
        let maps = all();
        let mut labels: Vec<&str> = maps.iter().map(|m| m.label()).collect();
        labels.sort();
        labels.dedup();
        assert_eq!(labels.len(), maps.len());
    }

    #[test]
    fn corpus_round_trips_through_json() {
        for map in all() {
            let back = AnalyticMap::from_json(&map.to_json()).unwrap();
            assert_eq!(map, back);
        }
    }

    #[test]
    fn shear_is_composition_of_shear_and_square() {
        let f = shear_z2();
        let p = [0.6, -0.2];
        let (x, y) = (p[0], p[1]);
        let (g, h) = (x * x - y * y, 2.0 * x * y);
        let v = f.eval(&p).unwrap();
        assert_relative_eq!(v[0], g + h, max_relative = 1e-14);
        assert_relative_eq!(v[1], h, max_relative = 1e-14);
    }
}
