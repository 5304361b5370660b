//! Surface syntax, renderers and the JSON configuration format.

mod config;
mod parse;
mod render;

pub use config::{EtaOrderConfig, FiberEntryConfig, MetricConfig, Number, ProblemConfig, CONFIG_SCHEMA_ID};
pub use parse::{parse_expr, parse_form, parse_jet_coordinate, parse_multivector};
pub use render::{
    alternating_json, alternating_latex, expr_json, expr_latex, pde_json, render_alternating, render_expr, render_pde, Format,
    PDE_SCHEMA_ID,
};
