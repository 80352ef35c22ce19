//! Numerical toolkit for gradient spectra of real analytic map germs.
//!
//! Given a map `F = (f_1, ..., f_k): R^n -> R^k` described symbolically,
//! this crate evaluates the frame of gradients at sample points, extracts
//! its singular values, and uses them to probe three intertwined questions
//! near a point of the zero set:
//!
//! * **Spectral inequalities** ([`spectra`]): bounds relating singular
//!   values, traces, and determinants of gradient frames and their
//!   compositions, each packaged as a checkable report.
//! * **Łojasiewicz exponents and weights** ([`loja`]): envelope fits of
//!   the exponent in `|F|^theta <= c * sigma` from sampled shells, the
//!   infimum of the spectral weight `rho`, and cross-checks between
//!   comparability, gradient angles, and weight positivity for pairs.
//! * **Fibration conditions** ([`milnor`]): sampled verdicts for the
//!   dependence conditions that govern when `F/|F|` or `F` itself gives a
//!   locally trivial fibration on small spheres and tubes.
//!
//! Maps are built from an expression tree ([`expr::Expr`]) and evaluated
//! with forward-mode dual numbers, so gradients are exact to rounding.
//! Everything downstream is deterministic: sampling is driven by explicit
//! seeds and results serialize to JSON for replay.
//!
//! # Quick start
//!
//! ```
//! use germscan::corpus;
//! use germscan::map::Point;
//! use germscan::spectra;
//!
//! // z^2 on R^2 = C: the gradient frame is conformal, so rho = 1.
//! let map = corpus::z_power(2);
//! let frame = map.gradient_frame(&[0.3, -0.4]).unwrap();
//! let weight = spectra::rho(&frame);
//! assert!((weight.rho - 1.0).abs() < 1e-12);
//!
//! // A dependence probe at the same point: gradients are independent.
//! let probe = germscan::milnor::probe(&map, &Point::new(vec![0.3, -0.4]).unwrap()).unwrap();
//! assert!(probe.sigma_k_norm > 0.99);
//! ```

pub mod corpus;
pub mod dual;
pub mod error;
pub mod expr;
pub mod loja;
pub mod map;
pub mod mat;
pub mod milnor;
pub mod region;
pub mod sampling;
pub mod spectra;
pub mod verify;

pub use error::{Error, Result};
pub use expr::Expr;
pub use map::{compose, identity_map, linear_map, nap_map, product_pair, AnalyticMap, Point};
pub use mat::Mat;
pub use region::RegionSpec;
pub use sampling::Sampler;
pub use spectra::{singular_values, GradientFrame, SingularSpectrum};

/// Guide chapters compiled as doc-tests so the book's examples stay in
/// sync with the library.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/maps.md")]
    mod maps {}
    #[doc = include_str!("../../../book/src/spectra.md")]
    mod spectra {}
    #[doc = include_str!("../../../book/src/lojasiewicz.md")]
    mod lojasiewicz {}
    #[doc = include_str!("../../../book/src/milnor.md")]
    mod milnor {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
