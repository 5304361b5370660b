//! Seeded identity suites. Reports are plain text and byte-identical for a
//! given seed and case count.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::brackets::{poisson_leibniz, poisson_multivector, schouten_pairwise, vsn_bracket, vsn_oracle_check, Endo, ProbePolicy};
use crate::differentials::{d_horizontal, d_vertical};
use crate::error::{Error, Result};
use crate::exterior::{co_insert, Form, Metric, Multivector};
use crate::hamiltonian::{jet_pullback, HamiltonianProblem};
use crate::jet::{Expr, JetContext, MultiIndex};
use crate::sample::{case_seed, SampleParams, Sampler};
use crate::scalar::{Rational, Scalar};

type F = Form<Rational>;
type V = Multivector<Rational>;
type En = Endo<Rational>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Differentials,
    Brackets,
    Poisson,
    Closure,
    All,
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "differentials" => Ok(Suite::Differentials),
            "brackets" => Ok(Suite::Brackets),
            "poisson" => Ok(Suite::Poisson),
            "closure" => Ok(Suite::Closure),
            "all" => Ok(Suite::All),
            other => Err(Error::Config(format!("unknown suite `{other}`"))),
        }
    }
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Differentials => "differentials",
            Suite::Brackets => "brackets",
            Suite::Poisson => "poisson",
            Suite::Closure => "closure",
            Suite::All => "all",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub runs: usize,
    pub failures: usize,
    pub first_failure: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteReport {
    pub suite: &'static str,
    pub seed: u64,
    pub cases: usize,
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
}

impl SuiteReport {
    fn new(suite: &'static str, seed: u64, cases: usize) -> Self {
        Self { suite, seed, cases, checks: Vec::new(), notes: Vec::new() }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.failures == 0)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    fn record(&mut self, name: &'static str, case: usize, outcome: std::result::Result<(), String>) {
        let pos = match self.checks.iter().position(|c| c.name == name) {
            Some(p) => p,
            None => {
                self.checks.push(Check { name, runs: 0, failures: 0, first_failure: None });
                self.checks.len() - 1
            }
        };
        let c = &mut self.checks[pos];
        c.runs += 1;
        if let Err(msg) = outcome {
            c.failures += 1;
            if c.first_failure.is_none() {
                c.first_failure = Some(format!("case {case}: {msg}"));
            }
        }
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "suite {} seed={} cases={}", self.suite, self.seed, self.cases)?;
        for c in &self.checks {
            let status = if c.failures == 0 { "ok" } else { "FAIL" };
            writeln!(f, "  {:<40} {:>5}/{:<5} {status}", c.name, c.runs - c.failures, c.runs)?;
            if let Some(msg) = &c.first_failure {
                writeln!(f, "    first failure: {msg}")?;
            }
        }
        for n in &self.notes {
            writeln!(f, "  note: {n}")?;
        }
        writeln!(f, "result: {}", if self.passed() { "pass" } else { "fail" })
    }
}

fn equal<T: PartialEq + fmt::Display>(lhs: &T, rhs: &T) -> std::result::Result<(), String> {
    if lhs == rhs {
        Ok(())
    } else {
        Err(format!("{lhs}  ≠  {rhs}"))
    }
}

fn zero<T: fmt::Display>(value: &T, is_zero: bool) -> std::result::Result<(), String> {
    if is_zero {
        Ok(())
    } else {
        Err(format!("expected 0, got {value}"))
    }
}

fn flatten(r: Result<std::result::Result<(), String>>) -> std::result::Result<(), String> {
    r.unwrap_or_else(|e| Err(e.to_string()))
}

fn sign<S: Scalar>(k: usize) -> S {
    S::sign(k)
}

pub fn run(suite: Suite, seed: u64, cases: usize) -> Vec<SuiteReport> {
    match suite {
        Suite::Differentials => vec![differentials(seed, cases)],
        Suite::Brackets => vec![brackets(seed, cases)],
        Suite::Poisson => vec![poisson(seed, cases)],
        Suite::Closure => vec![closure(seed, cases)],
        Suite::All => vec![differentials(seed, cases), brackets(seed, cases), poisson(seed, cases), closure(seed, cases)],
    }
}

fn sampler(seed: u64, k: usize, ctx: JetContext, params: SampleParams) -> Sampler {
    Sampler::new(case_seed(seed, k), ctx, params)
}

fn small_context(seed: u64, k: usize, max_n: usize, max_m: usize) -> JetContext {
    let mut s = Sampler::new(case_seed(seed ^ 0xc0de, k), JetContext::new(1, 1).expect("valid"), SampleParams::default());
    let n = s.rng().gen_range(1..=max_n);
    let m = s.rng().gen_range(1..=max_m);
    JetContext::new(n, m).expect("valid")
}

/// `d_V² = 0`, `d_H² = 0`, `d_H d_V + d_V d_H = 0` and both Leibniz rules on
/// forms of degree ≤ 4 and jet order ≤ 3 over `n, m ≤ 3`.
pub fn differentials(seed: u64, cases: usize) -> SuiteReport {
    let mut report = SuiteReport::new("differentials", seed, cases);
    for k in 0..cases {
        let ctx = small_context(seed, k, 3, 3);
        let params = SampleParams { jet_order: 3, max_terms: 3, coeff_degree: 2, max_blades: 2 };
        let mut s = sampler(seed, k, ctx.clone(), params);
        let p = s.rng().gen_range(0..=4);
        let q = s.rng().gen_range(0..=4 - p);
        let a: F = s.form(p);
        let b: F = s.form(q);

        report.record("d_V d_V = 0", k, {
            let v = d_vertical(&d_vertical(&a));
            zero(&v, v.is_zero())
        });
        report.record(
            "d_H d_H = 0",
            k,
            flatten((|| {
                let h = d_horizontal(&d_horizontal(&a, &ctx)?, &ctx)?;
                Ok(zero(&h, h.is_zero()))
            })()),
        );
        report.record(
            "d_H d_V + d_V d_H = 0",
            k,
            flatten((|| {
                let h = d_horizontal(&d_vertical(&a), &ctx)? + d_vertical(&d_horizontal(&a, &ctx)?);
                Ok(zero(&h, h.is_zero()))
            })()),
        );
        report.record("d_V Leibniz", k, {
            let lhs = d_vertical(&a.wedge(&b));
            let rhs = d_vertical(&a).wedge(&b) + a.wedge(&d_vertical(&b)).scale(&sign(p));
            equal(&lhs, &rhs)
        });
        report.record(
            "d_H Leibniz",
            k,
            flatten((|| {
                let lhs = d_horizontal(&a.wedge(&b), &ctx)?;
                let rhs = d_horizontal(&a, &ctx)?.wedge(&b) + a.wedge(&d_horizontal(&b, &ctx)?).scale(&sign(p));
                Ok(equal(&lhs, &rhs))
            })()),
        );
        report.record(
            "bigrade shifts",
            k,
            flatten((|| {
                let shifted = |(x, y): (usize, usize), dx: usize, dy: usize| (x + dx, y + dy);
                let v: Vec<_> = a.bigrades().into_iter().map(|g| shifted(g, 0, 1)).collect();
                let h: Vec<_> = a.bigrades().into_iter().map(|g| shifted(g, 1, 0)).collect();
                let ok = d_vertical(&a).bigrades().iter().all(|g| v.contains(g))
                    && d_horizontal(&a, &ctx)?.bigrades().iter().all(|g| h.contains(g));
                Ok(if ok { Ok(()) } else { Err(format!("bigrade leak from {a}")) })
            })()),
        );
    }
    report
}

/// `[F,[G,H]]` against `[[F,G],H] + (−1)^{(|F|+f)(|G|+f)} [G,[F,H]]`.
fn jacobi(bracket: &dyn Fn(&En, &En) -> En, f: i64, a: &En, b: &En, c: &En) -> (En, En) {
    let lhs = bracket(a, &bracket(b, c));
    let s = ((a.degree() + f) * (b.degree() + f)).rem_euclid(2) as usize;
    let rhs = bracket(&bracket(a, b), c).add(&bracket(b, &bracket(a, c)).scale(sign(s))).expect("equal degrees");
    (lhs, rhs)
}

/// `[F, G∘H]` against `[F,G]∘H + (−1)^{(|F|+f)|G|} G∘[F,H]`.
fn composition_rule(bracket: &dyn Fn(&En, &En) -> En, f: i64, a: &En, b: &En, c: &En) -> (En, En) {
    let lhs = bracket(a, &b.compose(c));
    let s = ((a.degree() + f) * b.degree()).rem_euclid(2) as usize;
    let rhs = bracket(a, b).compose(c).add(&b.compose(&bracket(a, c)).scale(sign(s))).expect("equal degrees");
    (lhs, rhs)
}

fn probe_equal(policy: &ProbePolicy, ctx: &JetContext, (lhs, rhs): (En, En)) -> std::result::Result<(), String> {
    policy.compare(&lhs, &rhs, ctx).map(|_| ()).map_err(|m| m.to_string())
}

fn decomposable(factors: &[V]) -> V {
    factors.iter().fold(V::one(), |acc, v| acc.wedge(v))
}

/// Leibniz identities for the commutator and the `d_V`-derived bracket on
/// endomorphism triples; the Schouten oracle, symmetry, conjugate insertion,
/// pairwise expansion and degree law on multivector pairs.
pub fn brackets(seed: u64, cases: usize) -> SuiteReport {
    let mut report = SuiteReport::new("brackets", seed, cases);
    let policy = ProbePolicy::default();
    let commutator = |a: &En, b: &En| a.commutator(b);
    let dv = En::d_vertical();
    let derived = |a: &En, b: &En| a.commutator(&dv).commutator(b);
    let mut nonzero_brackets = 0;
    for k in 0..cases {
        let ctx = small_context(seed, k, 2, 1);
        let params = SampleParams { jet_order: 1, max_terms: 2, coeff_degree: 2, max_blades: 2 };
        let mut s = sampler(seed, k, ctx.clone(), params);
        let (a, b, c): (En, En, En) = (s.endo(1), s.endo(1), s.endo(1));
        report.record("Jacobi commutator", k, probe_equal(&policy, &ctx, jacobi(&commutator, 0, &a, &b, &c)));
        report.record("composition rule commutator", k, probe_equal(&policy, &ctx, composition_rule(&commutator, 0, &a, &b, &c)));
        report.record("Jacobi d_V-derived", k, probe_equal(&policy, &ctx, jacobi(&derived, 1, &a, &b, &c)));
        report.record("composition rule d_V-derived", k, probe_equal(&policy, &ctx, composition_rule(&derived, 1, &a, &b, &c)));

        let ctx = small_context(seed ^ 0xb7, k, 2, 2);
        let params = SampleParams { jet_order: 2, max_terms: 2, coeff_degree: 2, max_blades: 2 };
        let mut s = sampler(seed ^ 0xb7, k, ctx.clone(), params);
        let (p, q) = (s.rng().gen_range(0..=3), s.rng().gen_range(0..=3));
        let x: V = s.multivector(p);
        let y: V = s.multivector(q);
        report.record("oracle i_[[X,Y]] = [[i_X,d_V],i_Y]", k, {
            let r = vsn_oracle_check(&x, &y, &ctx, &policy);
            if r.matched() {
                Ok(())
            } else {
                Err(r.to_string())
            }
        });
        let xy = vsn_bracket(&x, &y);
        nonzero_brackets += usize::from(!xy.is_zero());
        report.record("graded symmetry", k, {
            let s = (p + q + p * q) % 2;
            equal(&xy, &vsn_bracket(&y, &x).scale(&sign(s)))
        });
        report.record("degree law", k, {
            let ok = if p + q == 0 { xy.is_zero() } else { xy.is_zero() || xy.homogeneous_degree() == Some(p + q - 1) };
            if ok {
                Ok(())
            } else {
                Err(format!("degrees {p}, {q} gave {xy}"))
            }
        });
        let f = s.expr::<Rational>();
        report.record(
            "conjugate insertion [[X,f]] = ī(d_V f)X",
            k,
            flatten((|| {
                let lhs = vsn_bracket(&x, &V::scalar(f.clone()));
                let rhs = co_insert(&d_vertical(&F::scalar(f.clone())), &x)?;
                Ok(equal(&lhs, &rhs))
            })()),
        );
        let xs: Vec<V> = (0..p).map(|_| s.vector_field()).collect();
        let ys: Vec<V> = (0..q).map(|_| s.vector_field()).collect();
        report.record("pairwise expansion", k, equal(&vsn_bracket(&decomposable(&xs), &decomposable(&ys)), &schouten_pairwise(&xs, &ys)));
    }
    report.notes.push(format!("{nonzero_brackets}/{cases} multivector pairs with [[X,Y]] ≠ 0"));
    report
}

fn random_eta(s: &mut Sampler, m: usize) -> Vec<Vec<Rational>> {
    (0..m).map(|_| (0..m).map(|_| if s.rng().gen_bool(0.6) { s.rational() } else { Rational::from_i64(0) }).collect()).collect()
}

/// `[[P, P]] = 0` for random field matrices and `η^{IJ}` entries up to order
/// 1, plus the generic bracket laws of `{·,·}_P`.
pub fn poisson(seed: u64, cases: usize) -> SuiteReport {
    let mut report = SuiteReport::new("poisson", seed, cases);
    for k in 0..cases {
        let ctx = small_context(seed, k, 3, 3);
        let params = SampleParams { jet_order: 1, max_terms: 2, coeff_degree: 2, max_blades: 2 };
        let mut s = sampler(seed, k, ctx.clone(), params);
        let eta = random_eta(&mut s, ctx.m());
        let mut orders = Vec::new();
        let entries = s.rng().gen_range(1..=3);
        for e in 0..entries {
            let i = if e == 0 { MultiIndex::unit(ctx.n(), s.rng().gen_range(0..ctx.n())) } else { s.multiindex() };
            let j = s.multiindex();
            if !orders.iter().any(|(a, b, _): &(MultiIndex, MultiIndex, Rational)| (a == &i && b == &j) || (a == &j && b == &i)) {
                orders.push((i, j, s.rational()));
            }
        }
        let p = match poisson_multivector(&eta, Some(&orders), &ctx) {
            Ok(p) => p,
            Err(e) => {
                report.record("[[P,P]] = 0", k, Err(e.to_string()));
                continue;
            }
        };
        report.record("[[P,P]] = 0", k, {
            let pp = vsn_bracket(p.multivector(), p.multivector());
            zero(&pp, pp.is_zero())
        });
        report.record("P has degree 3", k, {
            let d = p.multivector().homogeneous_degree();
            if p.multivector().is_zero() || d == Some(3) {
                Ok(())
            } else {
                Err(format!("degree {d:?}"))
            }
        });
        let g = Metric::identity(ctx.n());
        let (da, db) = (s.rng().gen_range(0..=1), s.rng().gen_range(0..=1));
        let a: F = s.form(da);
        let b: F = s.form(db);
        report.record("{c, β}_P = 0", k, {
            let c = F::scalar(Expr::constant(s.rational()));
            let v = poisson_leibniz(&c, &b, &p, &g);
            zero(&v, v.is_zero())
        });
        report.record("deg {α,β}_P = deg α + deg β + 1", k, {
            let v = poisson_leibniz(&a, &b, &p, &g);
            if v.is_zero() || v.homogeneous_degree() == Some(da + db + 1) {
                Ok(())
            } else {
                Err(format!("degrees {da}, {db} gave {v}"))
            }
        });
    }
    report
}

/// Wedge closure of the evolution equation: discover `ε(p)` with
/// `Θ(φ∧ψ) = Θ(φ)∧ψ + ε(deg φ) φ∧Θ(ψ)` after pullback, and require it to be
/// constant across cases.
pub fn closure(seed: u64, cases: usize) -> SuiteReport {
    let mut report = SuiteReport::new("closure", seed, cases);
    let mut discovered: BTreeMap<usize, i64> = BTreeMap::new();
    let mut informative = 0;
    for k in 0..cases {
        let ctx = small_context(seed, k, 3, 2);
        let params = SampleParams { jet_order: 1, max_terms: 2, coeff_degree: 2, max_blades: 2 };
        let mut s = sampler(seed, k, ctx.clone(), params);
        let outcome = (|| -> Result<std::result::Result<(), String>> {
            let m = ctx.m();
            let eta: Vec<Vec<Rational>> =
                (0..m).map(|i| (0..m).map(|j| if i == j { s.rational() } else { Rational::from_i64(0) }).collect()).collect();
            let p = poisson_multivector(&eta, None, &ctx)?;
            let diag: Vec<Rational> = (0..ctx.n()).map(|_| Rational::from_i64(if s.rng().gen_bool(0.5) { 1 } else { -1 })).collect();
            let g = Metric::diagonal(diag)?;
            let chi = s.field_function::<Rational>(3);
            // keep deg φ + deg ψ + 1 ≤ n so the pulled-back products can survive
            let dp = s.rng().gen_range(0..ctx.n());
            let dq = s.rng().gen_range(0..ctx.n() - dp);
            let phi: F = s.form(dp);
            let psi: F = s.form(dq);
            let prob = HamiltonianProblem::new(ctx.clone(), chi, phi.clone(), p, g)?;
            let theta = |form: &F| -> Result<F> { jet_pullback(&prob.with_phi(form.clone())?.evolution_form()?, &ctx) };
            let pull = |form: &F| jet_pullback(form, &ctx);
            let lhs = theta(&phi.wedge(&psi))? - theta(&phi)?.wedge(&pull(&psi)?);
            let other = pull(&phi)?.wedge(&theta(&psi)?);
            if other.is_zero() {
                return Ok(zero(&lhs, lhs.is_zero()));
            }
            informative += 1;
            let eps = if lhs == other {
                1
            } else if lhs == -other.clone() {
                -1
            } else {
                return Ok(Err(format!("no sign for deg φ = {dp}: {lhs} vs {other}")));
            };
            match discovered.get(&dp) {
                None => {
                    discovered.insert(dp, eps);
                    Ok(Ok(()))
                }
                Some(&e) if e == eps => Ok(Ok(())),
                Some(&e) => Ok(Err(format!("ε({dp}) was {e:+}, now {eps:+}"))),
            }
        })();
        report.record("closure with constant ε(deg φ)", k, flatten(outcome));
    }
    for (p, e) in &discovered {
        report.notes.push(format!("ε({p}) = {e:+}"));
    }
    report.notes.push(format!("{informative}/{cases} cases with φ∧Θ(ψ) ≠ 0 after pullback"));
    report
}
