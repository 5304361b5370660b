//! Text, LaTeX and JSON renderers.
//!
//! The plain text of expressions, forms and multivectors is the parser's own
//! syntax (their `Display`). PDE systems are printed in index notation,
//! `u^1_{11} + u^1 = 0`, one equation per line.

use std::fmt::Write;
use std::str::FromStr;

use serde::Serialize;

use crate::error::Error;
use crate::exterior::{Alternating, Kind, Slot};
use crate::hamiltonian::PdeSystem;
use crate::jet::{Expr, Generator, Monomial, MultiIndex};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Text,
    Latex,
    Json,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "text" => Ok(Format::Text),
            "latex" => Ok(Format::Latex),
            "json" => Ok(Format::Json),
            other => Err(Error::Config(format!("unknown format `{other}` (expected text, latex or json)"))),
        }
    }
}

impl Format {
    pub fn as_str(self) -> &'static str {
        match self {
            Format::Text => "text",
            Format::Latex => "latex",
            Format::Json => "json",
        }
    }
}

/// Identifier written into every JSON document and the shipped schema.
pub const PDE_SCHEMA_ID: &str = "jetbracket/pde_system/v1";

#[derive(Clone, Copy, PartialEq, Eq)]
enum Style {
    Index,
    Latex,
}

fn index_digits(index: &MultiIndex) -> String {
    let idx = index.indices();
    let sep = if idx.iter().any(|&i| i >= 9) { "," } else { "" };
    idx.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(sep)
}

fn write_generator(out: &mut String, g: &Generator, style: Style) {
    let (open, close) = match style {
        Style::Index => ("", ""),
        Style::Latex => ("{", "}"),
    };
    match g {
        Generator::X(i) => write!(out, "x^{open}{}{close}", i + 1).unwrap(),
        Generator::U(a, index) => {
            write!(out, "u^{open}{}{close}", a + 1).unwrap();
            if !index.is_empty() {
                write!(out, "_{{{}}}", index_digits(index)).unwrap();
            }
        }
        Generator::Source(name, index) => match style {
            Style::Index => {
                out.push_str(name);
                if !index.is_empty() {
                    write!(out, "_{{{}}}", index_digits(index)).unwrap();
                }
            }
            Style::Latex => {
                if !index.is_empty() {
                    write!(out, "\\partial_{{{}}} ", index_digits(index)).unwrap();
                }
                let stem = name.trim_end_matches(|c: char| c.is_ascii_digit());
                let digits = &name[stem.len()..];
                if digits.is_empty() || stem.is_empty() {
                    out.push_str(name);
                } else {
                    write!(out, "{stem}^{{{digits}}}").unwrap();
                }
            }
        },
    }
}

fn write_monomial(out: &mut String, m: &Monomial, style: Style) {
    for (k, (g, e)) in m.powers().iter().enumerate() {
        if k > 0 {
            out.push_str(if style == Style::Latex { " " } else { "*" });
        }
        if *e > 1 {
            out.push('(');
            write_generator(out, g, style);
            match style {
                Style::Index => write!(out, ")^{e}").unwrap(),
                Style::Latex => write!(out, ")^{{{e}}}").unwrap(),
            }
        } else {
            write_generator(out, g, style);
        }
    }
}

fn write_scalar<S: Scalar>(out: &mut String, c: &S, style: Style) {
    match (style, c.to_ratio()) {
        (Style::Latex, Some((n, d))) if d != 1.into() => write!(out, "\\frac{{{n}}}{{{d}}}").unwrap(),
        _ => write!(out, "{c}").unwrap(),
    }
}

fn styled_expr<S: Scalar>(e: &Expr<S>, style: Style) -> String {
    if e.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, (m, c)) in e.display_terms().into_iter().enumerate() {
        let neg = c.is_negative();
        out.push_str(match (k, neg) {
            (0, true) => "-",
            (0, false) => "",
            (_, true) => " - ",
            (_, false) => " + ",
        });
        if style == Style::Latex && k == 0 && neg {
            out.push(' ');
        }
        let a = c.abs();
        if m.is_one() {
            write_scalar(&mut out, &a, style);
        } else {
            if !a.is_one() {
                write_scalar(&mut out, &a, style);
                out.push_str(if style == Style::Latex { " " } else { "*" });
            }
            write_monomial(&mut out, m, style);
        }
    }
    out
}

pub fn expr_latex<S: Scalar>(e: &Expr<S>) -> String {
    styled_expr(e, Style::Latex)
}

fn slot_latex<K: Kind>(s: &Slot) -> String {
    let inner = match s {
        Slot::Base(i) => format!("x^{{{}}}", i + 1),
        Slot::Fiber(a, index) if index.is_empty() => format!("u^{{{}}}", a + 1),
        Slot::Fiber(a, index) => format!("u^{{{}}}_{{{}}}", a + 1, index_digits(index)),
    };
    format!("{}{inner}{}", K::LATEX_OPEN, K::LATEX_CLOSE)
}

fn slot_text<K: Kind>(s: &Slot) -> String {
    match s {
        Slot::Base(i) => format!("{}{}", K::BASE, i + 1),
        Slot::Fiber(a, index) => {
            let idx: Vec<String> = index.indices().iter().map(|i| (i + 1).to_string()).collect();
            if idx.is_empty() {
                format!("{}[{}]", K::FIBER, a + 1)
            } else {
                format!("{}[{};{}]", K::FIBER, a + 1, idx.join(","))
            }
        }
    }
}

pub fn alternating_latex<S: Scalar, K: Kind>(a: &Alternating<S, K>) -> String {
    if a.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, (blade, c)) in a.terms().enumerate() {
        let single_neg = c.len() == 1 && c.terms().next().is_some_and(|(_, v)| v.is_negative());
        let shown = if single_neg { -c } else { c.clone() };
        out.push_str(match (k, single_neg) {
            (0, true) => "- ",
            (0, false) => "",
            (_, true) => " - ",
            (_, false) => " + ",
        });
        let wedge: Vec<String> = blade.slots().iter().map(slot_latex::<K>).collect();
        let wedge = wedge.join(" \\wedge ");
        let unit = shown.as_constant().is_some_and(|v| v.is_one());
        if blade.degree() == 0 {
            out.push_str(&expr_latex(&shown));
        } else if unit {
            out.push_str(&wedge);
        } else if shown.len() > 1 {
            write!(out, "\\left({}\\right) \\, {wedge}", expr_latex(&shown)).unwrap();
        } else {
            write!(out, "{} \\, {wedge}", expr_latex(&shown)).unwrap();
        }
    }
    out
}

#[derive(Serialize)]
struct JsonTerm {
    coeff: String,
    monomial: Vec<(String, u32)>,
}

fn json_terms<S: Scalar>(e: &Expr<S>) -> Vec<JsonTerm> {
    e.display_terms()
        .into_iter()
        .map(|(m, c)| JsonTerm { coeff: c.ratio_string(), monomial: m.powers().iter().map(|(g, p)| (g.to_string(), *p)).collect() })
        .collect()
}

#[derive(Serialize)]
struct JsonBladeTerm {
    blade: Vec<String>,
    coefficient: Vec<JsonTerm>,
}

#[derive(Serialize)]
struct JsonAlternating {
    kind: &'static str,
    terms: Vec<JsonBladeTerm>,
}

#[derive(Serialize)]
struct JsonEquation {
    dx_monomial: Vec<usize>,
    lhs: Vec<JsonTerm>,
    scale: String,
}

#[derive(Serialize)]
struct JsonMetadata<'a> {
    n: usize,
    m: usize,
    degree: Option<usize>,
    phi: Option<&'a str>,
    chi: Option<&'a str>,
    normalization: &'static str,
}

#[derive(Serialize)]
struct JsonSystem<'a> {
    schema: &'static str,
    equations: Vec<JsonEquation>,
    metadata: JsonMetadata<'a>,
}

pub fn expr_json<S: Scalar>(e: &Expr<S>) -> String {
    serde_json::to_string_pretty(&json_terms(e)).expect("serializable")
}

pub fn alternating_json<S: Scalar, K: Kind>(a: &Alternating<S, K>) -> String {
    let doc = JsonAlternating {
        kind: if K::BASE == "dx" { "form" } else { "multivector" },
        terms: a
            .terms()
            .map(|(b, c)| JsonBladeTerm { blade: b.slots().iter().map(slot_text::<K>).collect(), coefficient: json_terms(c) })
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("serializable")
}

pub fn pde_json<S: Scalar>(system: &PdeSystem<S>) -> String {
    let md = &system.metadata;
    let doc = JsonSystem {
        schema: PDE_SCHEMA_ID,
        equations: system
            .equations
            .iter()
            .map(|e| JsonEquation {
                dx_monomial: e.dx.iter().map(|i| i + 1).collect(),
                lhs: json_terms(&e.lhs),
                scale: e.scale.ratio_string(),
            })
            .collect(),
        metadata: JsonMetadata {
            n: md.n,
            m: md.m,
            degree: md.degree,
            phi: md.phi.as_deref(),
            chi: md.chi.as_deref(),
            normalization: "lhs has leading coefficient 1; the pulled-back coefficient is scale * lhs",
        },
    };
    serde_json::to_string_pretty(&doc).expect("serializable")
}

pub fn render_expr<S: Scalar>(e: &Expr<S>, format: Format) -> String {
    match format {
        Format::Text => e.to_string(),
        Format::Latex => expr_latex(e),
        Format::Json => expr_json(e),
    }
}

pub fn render_alternating<S: Scalar, K: Kind>(a: &Alternating<S, K>, format: Format) -> String {
    match format {
        Format::Text => a.to_string(),
        Format::Latex => alternating_latex(a),
        Format::Json => alternating_json(a),
    }
}

/// One `lhs = 0` line per equation for text and LaTeX.
pub fn render_pde<S: Scalar>(system: &PdeSystem<S>, format: Format) -> String {
    let style = match format {
        Format::Json => return pde_json(system),
        Format::Text => Style::Index,
        Format::Latex => Style::Latex,
    };
    system.equations.iter().map(|e| format!("{} = 0", styled_expr(&e.lhs, style))).collect::<Vec<_>>().join("\n")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::Form;
    use crate::hamiltonian::HamiltonianProblem;
    use crate::jet::JetContext;
    use crate::scalar::Rational;

    type E = Expr<Rational>;
    type F = Form<Rational>;

    #[test]
    fn form_text() {
        assert_eq!(render_alternating(&F::base(0), Format::Text), "dx1");
        let a = F::monomial(E::u(1, MultiIndex::unit(4, 0)).scale(&Rational::new((-1).into(), 2.into())), [Slot::Base(2), Slot::Base(3)]);
        assert_eq!(a.to_string(), "-1/2*u[2;1] dx3^dx4");
        assert_eq!(alternating_latex(&a), "- \\frac{1}{2} u^{2}_{1} \\, dx^{3} \\wedge dx^{4}");
    }

    #[test]
    fn oscillator_renders() {
        let s = HamiltonianProblem::<Rational>::oscillator().derive_field_equations().unwrap();
        assert_eq!(render_pde(&s, Format::Text), "u^1_{11} + u^1 = 0");
        assert_eq!(render_pde(&s, Format::Latex), "u^{1}_{11} + u^{1} = 0");
        let v: serde_json::Value = serde_json::from_str(&render_pde(&s, Format::Json)).unwrap();
        assert_eq!(v["equations"][0]["dx_monomial"], serde_json::json!([1]));
        assert_eq!(v["equations"][0]["lhs"][0]["coeff"], "1/1");
        assert_eq!(v["equations"][0]["lhs"][0]["monomial"], serde_json::json!([["u[1;1,1]", 1]]));
    }

    #[test]
    fn latex_details() {
        let c = JetContext::new(2, 1).unwrap().with_opaque(["j1"]).unwrap();
        let j = c.opaque("j1").unwrap().clone();
        let u = E::u(0, MultiIndex::zero(2));
        let e = (&u * &u).scale(&Rational::new(1.into(), 2.into())) - E::source(&j, MultiIndex::from_exponents([1, 1]));
        assert_eq!(expr_latex(&e), "- \\partial_{12} j^{1} + \\frac{1}{2} (u^{1})^{2}");
        assert_eq!(styled_expr(&e, Style::Index), "-j1_{12} + 1/2*(u^1)^2");
        let v = crate::exterior::Multivector::<Rational>::monomial(E::x(0), [Slot::Base(1), Slot::Fiber(0, MultiIndex::zero(2))]);
        assert_eq!(alternating_latex(&v), "x^{1} \\, \\partial_{x^{2}} \\wedge \\partial_{u^{1}}");
    }
}
