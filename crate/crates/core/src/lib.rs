//! Null hyperpolygons and their three models.
//!
//! A null hyperpolygon is a point of the hyperkähler quotient of `T*ℂ²ⁿ` at
//! moment level zero by `K = (SU(2) × U(1)ⁿ)/ℤ₂`. The crate works with three
//! equivalent descriptions of such points:
//!
//! * quiver data `(p, q)` modulo `K`, or stable data modulo `Kᶜ`
//!   ([`moment`], [`gauge`], [`kempf_ness`]);
//! * quasi-parabolic `SL(2,ℂ)`-Higgs bundles on the Riemann sphere with
//!   trivial underlying bundle ([`higgs`], [`charts`]);
//! * closed null polygons in Minkowski 3-space, which model the fixed locus
//!   of the involution `[p, q] ↦ [qᵗ, pᵗ]` ([`involution`], [`minkowski`]).
//!
//! Index sets are 0-based in the API and 1-based in JSON.

pub mod charts;
pub mod error;
pub mod gauge;
pub mod higgs;
pub mod involution;
pub mod io;
pub mod kempf_ness;
pub mod linalg;
pub mod minkowski;
pub mod moment;
pub mod sample;
pub mod tol;
pub mod verify;

pub use error::Error;
pub use gauge::{Flavor, GaugeElement};
pub use higgs::{HiggsData, MarkedPoints};
pub use linalg::{Complex2Covector, Complex2Vector, Mat3, Matrix2C, MinkVector};
pub use minkowski::NullPolygon;
pub use moment::HyperpolygonPoint;
pub use num_complex::Complex64;
