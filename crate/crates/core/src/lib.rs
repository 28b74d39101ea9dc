//! # entropart
//!
//! Hidden correlations in indivisible systems.
//!
//! A probability vector `p(1..N)` carries no subsystem structure of its own.
//! Choosing an ordered factorization `N = X1·X2·…·Xn` and the mixed-radix
//! bijection `y ↔ (x1, …, xn)` turns it into a joint distribution over `n`
//! virtual subsystems, and every entropic relation known for composite
//! systems then applies to the single variable `y`.
//!
//! | Module | Provides |
//! |--------|----------|
//! | [`index_map`] | [`Shape`], flatten/unflatten, rebasing, plane geometry, factorizations |
//! | [`prob`] | normalization of real sequences, joint views, marginals, conditionals |
//! | [`entropy`] | Shannon entropy, subadditivity, chain rule, strong subadditivity, scans |
//! | [`clebsch_gordan`] | exact SU(2) coupling coefficients and their squared tables |
//! | [`io`] | CSV/JSON ingestion and report emission helpers |
//!
//! ```
//! use entropart::{entropy, prob::Distribution, Shape};
//!
//! // The spin singlet viewed through the 2x2 partition.
//! let dist = Distribution::new(vec![0.0, 0.5, 0.5, 0.0]).unwrap();
//! let shape = Shape::new(vec![2, 2]).unwrap();
//! let joint = dist.as_joint(&shape).unwrap();
//! let info = entropy::mutual_information(&joint, &[1], &Default::default()).unwrap();
//! assert!((info - std::f64::consts::LN_2).abs() < 1e-12);
//! ```

pub mod clebsch_gordan;
pub mod entropy;
mod error;
pub mod index_map;
pub mod io;
pub mod prob;

pub use error::{Error, Result};
pub use index_map::{FlatIndex, MultiIndex, Shape};
