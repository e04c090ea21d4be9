//! Fields, polynomials, truncated series, matrices and Smith normal form.

pub mod field;
pub mod matrix;
pub mod parse;
pub mod poly;
pub mod ring;
pub mod series;
pub mod snf;

pub use field::{Field, FieldElem, Fp};
pub use matrix::Matrix;
pub use parse::parse_poly;
pub use poly::{MultiPoly, Vars};
pub use ring::CommRing;
pub use series::{SeriesOrder, TruncSeries};
pub use snf::{smith_normal_form, SnfResult};
