//! Extremal polynomials on circular arcs `A_α = {e^{iθ} : |θ| ≤ α}`.
//!
//! The crate has three layers:
//!
//! * [`conformal`]: closed-form charts between `Ĉ \ A_α`, the slit plane,
//!   the upper half-plane and a quarter sector, with Green's functions.
//! * [`slit`] and [`extremal`]: two independent routes to the finite-degree
//!   extremal problem. The first builds the extremal polynomial from
//!   harmonic measure on an auxiliary slit, the second solves a discretized
//!   linear program directly.
//! * [`asymptotics`]: the limit functions, the reproducing-kernel envelope
//!   and the norm asymptote.
//!
//! Everything numeric is generic over [`Real`]; the aliases below name the
//! `f64` instantiations used by the CLI.

pub mod asymptotics;
pub mod conformal;
pub mod error;
pub mod extremal;
pub mod linalg;
pub mod lp;
pub mod poly;
pub mod scalar;
pub mod slit;

pub use error::{Error, Result};
pub use scalar::{cis, format_complex, parse_complex, Cx, Real};

pub type ArcGeometry64 = conformal::ArcGeometry<f64>;
pub type ArcGeometry32 = conformal::ArcGeometry<f32>;
pub type ChartPoint64 = conformal::ChartPoint<f64>;
pub type ComplexPoly64 = poly::ComplexPoly<f64>;
pub type SlitSystem64 = slit::SlitSystem<f64>;
pub type ExtremalSolution64 = extremal::ExtremalSolution<f64>;
pub type LimitFunction64 = asymptotics::LimitFunction<f64>;
