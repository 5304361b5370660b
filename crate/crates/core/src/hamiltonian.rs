//! Hamiltonian evolution `d_H φ − {χ, φ}_P`, its pullback along the jet of a
//! generic section, and the resulting PDE systems.

use crate::brackets::{poisson_leibniz, poisson_multivector, PoissonMultivector};
use crate::differentials::d_horizontal;
use crate::error::{Error, Result};
use crate::exterior::{Blade, Form, Metric, Slot};
use crate::jet::{Expr, JetContext, MultiIndex};
use crate::scalar::Scalar;

#[derive(Clone, Debug)]
pub struct HamiltonianProblem<S: Scalar> {
    ctx: JetContext,
    chi: Expr<S>,
    phi: Form<S>,
    poisson: PoissonMultivector<S>,
    metric: Metric<S>,
}

impl<S: Scalar> HamiltonianProblem<S> {
    pub fn new(ctx: JetContext, chi: Expr<S>, phi: Form<S>, poisson: PoissonMultivector<S>, metric: Metric<S>) -> Result<Self> {
        chi.validate(&ctx)?;
        phi.validate(&ctx)?;
        poisson.multivector().validate(&ctx)?;
        metric.validate(&ctx)?;
        Ok(Self { ctx, chi, phi, poisson, metric })
    }

    pub fn ctx(&self) -> &JetContext {
        &self.ctx
    }

    pub fn chi(&self) -> &Expr<S> {
        &self.chi
    }

    pub fn phi(&self) -> &Form<S> {
        &self.phi
    }

    pub fn poisson(&self) -> &PoissonMultivector<S> {
        &self.poisson
    }

    pub fn metric(&self) -> &Metric<S> {
        &self.metric
    }

    /// The same problem with another observable.
    pub fn with_phi(&self, phi: Form<S>) -> Result<Self> {
        phi.validate(&self.ctx)?;
        Ok(Self { phi, ..self.clone() })
    }

    /// `Θ = d_H φ − {χ, φ}_P`.
    pub fn evolution_form(&self) -> Result<Form<S>> {
        Ok(d_horizontal(&self.phi, &self.ctx)? - poisson_leibniz(&Form::scalar(self.chi.clone()), &self.phi, &self.poisson, &self.metric))
    }

    pub fn derive_field_equations(&self) -> Result<PdeSystem<S>> {
        let theta = self.evolution_form()?;
        let mut system = emit_pde(&jet_pullback(&theta, &self.ctx)?)?;
        system.metadata.n = self.ctx.n();
        system.metadata.m = self.ctx.m();
        system.metadata.phi = Some(self.phi.to_string());
        system.metadata.chi = Some(self.chi.to_string());
        Ok(system)
    }

    /// `n = m = 1`, `χ = ½u²`, `φ = u_(1)`, first-order `P` with `η = 1`,
    /// time-like base metric `g = (−1)`.
    pub fn oscillator() -> Self {
        let ctx = JetContext::new(1, 1).expect("valid context");
        let u = Expr::u(0, MultiIndex::zero(1));
        let chi = (&u * &u).scale(&S::from_ratio(1.into(), 2.into()));
        let phi = Form::scalar(Expr::u(0, MultiIndex::unit(1, 0)));
        let p = poisson_multivector(&[vec![S::one()]], None, &ctx).expect("first-order P");
        let g = Metric::diagonal(vec![-S::one()]).expect("invertible");
        Self::new(ctx, chi, phi, p, g).expect("consistent preset")
    }

    /// Maxwell with sources: `n = m = 4`, `η = diag(1, 1, 1, −1)` on fields and
    /// base, identity fiber metric, `χ = η_{μν} u^μ j^ν / 3` with opaque
    /// `j1..j4`, and `φ = ½ ε^μ_{νρσ} u^ν_(μ) dx^ρ ∧ dx^σ` with `ε_{1234} = 1`.
    pub fn maxwell() -> Self {
        let ctx = JetContext::new(4, 4).expect("valid context").with_opaque(["j1", "j2", "j3", "j4"]).expect("valid names");
        let eta: Vec<S> = [1, 1, 1, -1].into_iter().map(S::from_i64).collect();
        let fields: Vec<Vec<S>> = (0..4).map(|i| (0..4).map(|j| if i == j { eta[i].clone() } else { S::zero() }).collect()).collect();
        let third = S::from_ratio(1.into(), 3.into());
        let mut chi = Expr::zero();
        for (mu, name) in ctx.opaque_names().iter().enumerate() {
            let term = &Expr::u(mu, MultiIndex::zero(4)) * &Expr::source(name, MultiIndex::zero(4));
            chi = chi + term.scale(&(eta[mu].clone() * third.clone()));
        }
        let phi = maxwell_observable(&eta);
        let p = poisson_multivector(&fields, None, &ctx).expect("first-order P");
        let g = Metric::diagonal(eta).expect("invertible");
        Self::new(ctx, chi, phi, p, g).expect("consistent preset")
    }
}

/// Sign of a permutation of distinct indices, 0 on a repeat.
fn levi_civita(indices: &[usize]) -> i64 {
    let mut sign = 1;
    for i in 0..indices.len() {
        for j in i + 1..indices.len() {
            match indices[i].cmp(&indices[j]) {
                std::cmp::Ordering::Equal => return 0,
                std::cmp::Ordering::Greater => sign = -sign,
                std::cmp::Ordering::Less => {}
            }
        }
    }
    sign
}

/// `½ η^{μμ} ε_{μνρσ} u^ν_(μ) dx^ρ ∧ dx^σ` summed over all indices; twelve terms.
fn maxwell_observable<S: Scalar>(eta: &[S]) -> Form<S> {
    let half = S::from_ratio(1.into(), 2.into());
    let mut phi = Form::zero();
    for mu in 0..4 {
        for nu in 0..4 {
            for rho in 0..4 {
                for sigma in 0..4 {
                    let e = levi_civita(&[mu, nu, rho, sigma]);
                    if e == 0 {
                        continue;
                    }
                    let c = S::from_i64(e) * eta[mu].clone() * half.clone();
                    let coefficient = Expr::u(nu, MultiIndex::unit(4, mu)).scale(&c);
                    phi = phi + Form::monomial(coefficient, [Slot::Base(rho), Slot::Base(sigma)]);
                }
            }
        }
    }
    phi
}

/// Pullback along the jet of a generic section: coefficients are kept, with
/// `u^α_I` read as `∂^{|I|} s^α / ∂x^I`, and `du^α_I ↦ Σ_i u^α_{I+i} dx^i`.
pub fn jet_pullback<S: Scalar>(alpha: &Form<S>, ctx: &JetContext) -> Result<Form<S>> {
    let mut out = Form::zero();
    for (blade, c) in alpha.terms() {
        let mut image = Form::scalar(c.clone());
        for slot in blade.slots() {
            let factor = match slot {
                Slot::Base(i) => Form::base(*i),
                Slot::Fiber(a, index) => {
                    let mut f = Form::zero();
                    for i in 0..ctx.n() {
                        f = f + Form::base(i).mul_expr(&Expr::u(*a, index.insert(i, ctx)?));
                    }
                    f
                }
            };
            image = image.wedge(&factor);
            if image.is_zero() {
                break;
            }
        }
        out = out + image;
    }
    Ok(out)
}

/// One equation `lhs = 0` attached to a `dx` wedge monomial. The stored `lhs`
/// has leading coefficient +1; the emitted coefficient was `scale · lhs`.
#[derive(Clone, Debug, PartialEq)]
pub struct Equation<S: Scalar> {
    pub dx: Vec<usize>,
    pub lhs: Expr<S>,
    pub scale: S,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct PdeMetadata {
    pub n: usize,
    pub m: usize,
    /// Form degree of the horizontal form the equations were read from.
    pub degree: Option<usize>,
    pub phi: Option<String>,
    pub chi: Option<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PdeSystem<S: Scalar> {
    pub equations: Vec<Equation<S>>,
    pub metadata: PdeMetadata,
}

impl<S: Scalar> PdeSystem<S> {
    pub fn is_empty(&self) -> bool {
        self.equations.is_empty()
    }

    pub fn len(&self) -> usize {
        self.equations.len()
    }
}

/// Leading display coefficient scaled to +1; returns `(normalized, scale)`.
pub fn normalize<S: Scalar>(e: &Expr<S>) -> (Expr<S>, S) {
    match e.leading_term() {
        None => (Expr::zero(), S::one()),
        Some((_, c)) => {
            let c = c.clone();
            (e.scale(&(S::one() / c.clone())), c)
        }
    }
}

/// Read one equation off every `dx` monomial of a horizontal form.
pub fn emit_pde<S: Scalar>(horizontal: &Form<S>) -> Result<PdeSystem<S>> {
    let mut equations = Vec::new();
    for (blade, c) in horizontal.terms() {
        if blade.bigrade().1 != 0 {
            return Err(Error::NotHorizontal(Form::term(c.clone(), blade.clone()).to_string()));
        }
        let (lhs, scale) = normalize(c);
        equations.push(Equation { dx: base_indices(blade), lhs, scale });
    }
    let metadata = PdeMetadata { degree: horizontal.homogeneous_degree().filter(|_| !horizontal.is_zero()), ..PdeMetadata::default() };
    Ok(PdeSystem { equations, metadata })
}

fn base_indices(blade: &Blade) -> Vec<usize> {
    blade
        .slots()
        .iter()
        .map(|s| match s {
            Slot::Base(i) => *i,
            Slot::Fiber(..) => unreachable!("checked horizontal"),
        })
        .collect()
}
