//! Graded endomorphisms and the brackets built from them.

mod endo;
mod poisson;
mod schouten;

pub use endo::{derived_bracket, Endo, ProbeMismatch, ProbePolicy};
pub use poisson::{poisson_leibniz, poisson_multivector, EtaOrders, PoissonMultivector};
pub use schouten::{schouten_pairwise, vsn_bracket, vsn_oracle_check, OracleReport};
