//! Exact quadratic-irrational arithmetic, continued fractions, Dirichlet
//! approximation and empirical type profiles.

mod approx;
mod cf;
pub mod hp;
mod quad;

pub use approx::{dirichlet_approx, dist_to_nearest_int, type_profile, RationalApprox, TypeProfile, TypeSample};
pub use cf::{cf_expand, cf_expand_with_period, convergents, PartialQuotients, Period};
pub use hp::Enclosure;
pub use quad::{parse_rational, parse_real, quad_floor, QuadIrr, QuadNum, REAL_GRAMMAR};

pub(crate) use quad::{floor_surd_i128, sign_surd_i128};
