//! Exact computer algebra on the affine plane `k[u, v]` for `k = F_p` or `Q`:
//! Gröbner-based ideal membership, prime enumeration, ideal towers,
//! truncated completions, and a certified construction of a formal series
//! that is regular along every curve and at every point without being a
//! polynomial.
//!
//! Everything is generic over the coefficient [`Field`]; the aliases below
//! fix the fields the command line works with.

pub mod cli;
pub mod completions;
pub mod error;
pub mod field;
pub mod forge;
pub mod ideal;
pub mod lines;
mod linalg;
pub mod primes;
pub mod projlim;
pub mod poly;
pub mod tower;
pub mod univariate;

pub use error::{Error, ParseError, Result};
pub use field::{Field, Fp, Rational};
pub use ideal::{GroebnerBasis, Ideal, Membership};
pub use poly::{Monomial, MonomialOrder, Poly2};

pub type F2 = Fp<2>;
pub type F3 = Fp<3>;
pub type F5 = Fp<5>;
pub type F7 = Fp<7>;

pub type PolyF2 = Poly2<F2>;
pub type PolyF3 = Poly2<F3>;
pub type PolyQ = Poly2<Rational>;

pub type IdealF2 = Ideal<F2>;
pub type IdealF3 = Ideal<F3>;
pub type IdealQ = Ideal<Rational>;
