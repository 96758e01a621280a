//! Numerical workbench for elliptic Demazure-Lusztig operators, their
//! analytic membership conditions, quiver Hecke algebras with jet transport,
//! and type-A parameter counts.
//!
//! The numeric core is generic over the real type (see [`scalar::Real`]);
//! the aliases below fix it to `f64`.

pub mod config;
pub mod elliptic;
pub mod error;
pub mod hecke;
pub mod klrjet;
pub mod params;
pub mod poly;
pub mod report;
pub mod rootweyl;
pub mod scalar;
pub mod sections;
pub mod suites;

pub use error::{Error, Result};

pub type Curve = elliptic::CurveParams<f64>;
pub type Point = elliptic::CurvePoint<f64>;
pub type PoleParams = elliptic::FParams<f64>;
pub type Section = sections::SectionExpr<f64>;
pub type Form = sections::LinearForm<f64>;
pub type Hecke = hecke::HeckeElement<f64>;
pub type ComplexJet = klrjet::Jet<num_complex::Complex<f64>>;
pub type RationalPoly = poly::Poly<num_rational::BigRational>;
