//! Exact symbolic algebra for odd symplectic supermanifolds: Grassmann
//! polynomials, the antibracket, BV Laplacians, densities, symplectomorphisms
//! and gaussian Berezin integrals.

pub mod coeff;
pub mod densities;
pub mod dressed;
pub mod cotangent;
pub mod error;
pub mod forms;
pub mod integration;
pub mod maps;
pub mod poly;
pub mod sample;
pub mod superfn;
pub mod symplectic;
pub mod table;

pub use coeff::CoeffFn;
pub use cotangent::{BaseForm, CotangentChart, VolumeForm};
pub use error::{Error, Result};
pub use poly::{rat, rat_int, Monomial, Poly, Rat};
pub use superfn::{OddMonomial, RawTerm, Substitution, SuperFunction};
pub use table::{Gen, GeneratorTable, Parity, TableBuilder};
pub use densities::{ReferenceDensity, SDensity};
pub use dressed::{DressedFunction, DressedSum};
pub use forms::{FormTable, SuperForm};
pub use integration::{IntegralValue, LagrangianGauge};
pub use maps::{ChartMap, SuperMatrix};
pub use symplectic::{DarbouxChart, SuperVectorField};
