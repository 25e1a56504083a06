//! Exact computer algebra for Fitting ideals, minor ideals and shifted
//! Fitting ideals of modules over group rings of finite abelian p-groups
//! and truncated Iwasawa algebras.
//!
//! The coefficient ring is `(Z/p^N)[G][T]`, with ideal membership and
//! equality certified at a `T`-truncation `M`. All ideal comparisons reduce
//! to Howell normal forms over `Z/p^N`, which are canonical in the presence
//! of zero divisors.

pub mod complex;
pub mod error;
pub mod group;
pub mod howell;
pub mod ideal;
pub mod matrix;
pub mod monomial;
pub mod ring;
pub mod scenario;

pub use error::{Error, Result};
