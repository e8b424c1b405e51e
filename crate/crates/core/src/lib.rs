//! Exact computation of SSM-Thom polynomials of multisingularities of maps.
//!
//! The building blocks are truncated power series over an exact field
//! ([`GradedSeries`]), the local algebras and prototypes of stable germs,
//! equivariant evaluation at prototypes, the exponential structure formulas
//! relating the kernel series `S_Ψ`, `R_Ψ` to Thom polynomials, an interpolation
//! solver that determines the kernel series from vanishing conditions, and
//! the image Milnor number of quasihomogeneous germs `(C^m,0) → (C^{m+1},0)`.
//!
//! All arithmetic is exact. The core is generic over [`Scalar`], which any
//! `num_rational::Ratio` over a signed integer type implements; [`Rational`]
//! and [`Series`] are the arbitrary-precision instances used throughout.

pub mod equivariant;
pub mod error;
pub mod interpolation;
pub mod io;
pub mod linalg;
pub mod mond;
pub mod partition;
pub mod prototype;
pub mod scalar;
pub mod series;
pub mod singularity;
pub mod structure;

pub use error::{EvalError, IoError, MondError, ParseError, PrototypeError, SeriesError, SingularityError, SolveError, StructureError};
pub use partition::Partition;
pub use prototype::{build_prototype, PrototypeModel, PrototypeOptions};
pub use scalar::Scalar;
pub use series::{GradedSeries, Monomial, RenderOptions, TBound, Var};
pub use singularity::{AlgebraName, Catalog, LocalAlgebra, Monosingularity, Multisingularity};
pub use structure::{Flavor, Provenance, SeriesTable};

/// Arbitrary-precision rationals.
pub type Rational = num_rational::BigRational;

/// Series with arbitrary-precision rational coefficients.
pub type Series = GradedSeries<Rational>;

/// Tables of series with arbitrary-precision rational coefficients.
pub type Table = SeriesTable<Rational>;
