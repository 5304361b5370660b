use jetbracket::brackets::{poisson_leibniz, poisson_multivector, vsn_bracket, vsn_oracle_check, ProbePolicy};
use jetbracket::exterior::{co_insert, insert};
use jetbracket::frontend::{parse_expr, parse_form, parse_multivector, render_pde, Format, ProblemConfig};
use jetbracket::suites::{self, Suite};
use jetbracket::{float, Form, HamiltonianProblem, JetContext, Metric, MultiIndex, Multivector, Rational, Scalar};

fn ctx(n: usize, m: usize) -> JetContext {
    JetContext::new(n, m).unwrap()
}

fn form(text: &str, c: &JetContext) -> Form {
    parse_form(text, c).unwrap()
}

fn mv(text: &str, c: &JetContext) -> Multivector {
    parse_multivector(text, c).unwrap()
}

#[test]
fn insertion_and_conjugate_insertion() {
    let c = ctx(1, 1);
    assert_eq!(insert(&mv("Dx1^Du[1]", &c), &form("dx1^du[1]", &c)), form("-1", &c));
    assert_eq!(insert(&mv("Dx1", &c), &form("dx1^du[1]", &c)), form("du[1]", &c));
    assert_eq!(co_insert(&form("dx1", &c), &mv("Dx1^Du[1]", &c)).unwrap(), mv("-Du[1]", &c));
}

#[test]
fn schouten_function_rules() {
    let c = ctx(1, 1);
    let x = mv("Du[1]^Dx1", &c);
    let f = mv("u[1]^2", &c);
    let expected = co_insert(&form("2*u[1]*du[1]", &c), &x).unwrap();
    assert_eq!(vsn_bracket(&x, &f), expected);
    assert!(vsn_bracket(&mv("Dx1", &c), &mv("x1*u[1]", &c)).is_zero());
    assert!(vsn_oracle_check(&x, &mv("u[1;1]*Du[1;1]", &c), &c, &ProbePolicy::default()).matched());
}

#[test]
fn oscillator_equation() {
    let system = HamiltonianProblem::oscillator().derive_field_equations().unwrap();
    assert_eq!(render_pde(&system, Format::Text), "u^1_{11} + u^1 = 0");
    assert_eq!(system.metadata.degree, Some(1));
}

#[test]
fn oscillator_evolution_form_under_each_base_metric() {
    let c = ctx(1, 1);
    let chi = parse_expr("u[1]^3", &c).unwrap();
    let p = poisson_multivector(&[vec![Rational::from_i64(1)]], None, &c).unwrap();
    let phi = form("u[1;1]", &c);
    let theta = |g: i64| {
        let metric = Metric::diagonal(vec![Rational::from_i64(g)]).unwrap();
        HamiltonianProblem::new(c.clone(), chi.clone(), phi.clone(), p.clone(), metric).unwrap().evolution_form().unwrap()
    };
    assert_eq!(theta(-1), form("u[1;1,1]*dx1 + 3*u[1]^2*dx1", &c));
    assert_eq!(theta(1), form("u[1;1,1]*dx1 - 3*u[1]^2*dx1", &c));
}

#[test]
fn maxwell_has_four_third_order_equations() {
    let system = HamiltonianProblem::maxwell().derive_field_equations().unwrap();
    assert_eq!(system.len(), 4);
    assert!(system.equations.iter().all(|e| e.dx.len() == 3 && e.lhs.len() == 7));
    let mut dx: Vec<Vec<usize>> = system.equations.iter().map(|e| e.dx.clone()).collect();
    dx.sort();
    assert_eq!(dx, vec![vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]]);
}

#[test]
fn configs_rebuild_the_presets() {
    for (cfg, preset) in
        [(ProblemConfig::oscillator(), HamiltonianProblem::oscillator()), (ProblemConfig::maxwell(), HamiltonianProblem::maxwell())]
    {
        let reread = ProblemConfig::from_json(&cfg.to_json()).unwrap();
        let system = reread.to_problem().unwrap().derive_field_equations().unwrap();
        assert_eq!(system, preset.derive_field_equations().unwrap());
    }
}

#[test]
fn floating_point_instantiation_agrees_on_spot_values() {
    let c = ctx(1, 1);
    let p = poisson_multivector(&[vec![1.0f64]], None, &c).unwrap();
    let g = float::Metric::diagonal(vec![-1.0]).unwrap();
    let u = float::Form::scalar(jetbracket::jet::Expr::u(0, MultiIndex::zero(1)));
    let u1 = float::Form::scalar(jetbracket::jet::Expr::u(0, MultiIndex::unit(1, 0)));
    assert!(poisson_leibniz(&u, &u, &p, &g).is_zero());
    assert_eq!(poisson_leibniz(&u, &u1, &p, &g), -float::Form::base(0));
    assert!(!f64::is_exact());
}

#[test]
fn suites_pass_on_a_fresh_seed() {
    for report in suites::run(Suite::All, 0xfeed, 5) {
        assert!(report.passed(), "{report}");
    }
}
