//! Exact arithmetic: cyclotomic scalars, polynomials, affine maps, root
//! solvers, parsing, and serialization.

pub mod bivar;
pub mod comp;
pub mod json;
pub mod parse;
pub mod poly;
pub mod roots;
pub mod scalar;

pub use bivar::{lagrange, resultant, BiPoly};
pub use comp::{average_by, chebyshev, monic_nth_root, solve_inner, solve_outer, x_adic};
pub use poly::{degree_cap, set_degree_cap, AffineMap, Poly};
pub use roots::{eth_roots, exact_nth_root_u64, roots_in_field, RootSearch};
pub use scalar::{divisors, euler_phi, rational_nth_root, Scalar, CONDUCTOR_CAP};
