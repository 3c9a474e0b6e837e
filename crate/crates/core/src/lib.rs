//! Exact computer algebra over word-sized prime fields.
//!
//! The crate constructs plane models of genus-11 curves carrying several
//! degree-six pencils, embeds them canonically in P^10, and verifies the
//! numerical invariants of those families (Betti numbers, tangent-space
//! dimensions, the factorization of the deformation matrix M) by explicit
//! linear algebra and Groebner computation over GF(p).
//!
//! Module map:
//! - [`fp`], [`matrix`]: dense exact linear algebra over GF(p)
//! - [`poly`]: graded multivariate polynomials, optionally with square-zero
//!   first-order parts (dual numbers, 30 deformation parameters)
//! - [`gb`]: Groebner engine (normal forms, Buchberger, syzygies, lifting,
//!   elimination, saturation, Hilbert series)
//! - [`homalg`]: free resolutions, Betti tables, Koszul-cohomology ranks,
//!   chain maps
//! - [`plane`]: plane models with prescribed ordinary singularities
//! - [`canon`]: canonical embedding, scrolls, syzygy schemes
//! - [`deform`]: equisingular tangent spaces, normal spaces, resolution
//!   lifting, the matrix M and its linear forms
//! - [`report`]: JSON verification reports

pub mod canon;
pub mod deform;
pub mod fp;
pub mod gb;
pub mod homalg;
pub mod matrix;
pub mod plane;
pub mod poly;
pub mod report;
pub mod rng;

pub use fp::FpCtx;
pub use matrix::FpMatrix;
