//! The vertical differential `d_V` and the horizontal (total) differential
//! `d_H`, both degree +1 anti-derivations on the full bigraded algebra.

use crate::error::Result;
use crate::exterior::{Form, Slot};
use crate::jet::{Generator, JetContext};
use crate::scalar::Scalar;

/// `d_V f = Σ (∂f/∂u^α_I) du^α_I` on coefficients; `d_V dx^i = d_V du^α_I = 0`.
/// Maps `Ω^{p,q}` into `Ω^{p,q+1}`.
pub fn d_vertical<S: Scalar>(alpha: &Form<S>) -> Form<S> {
    let mut out = Form::zero();
    for (blade, c) in alpha.terms() {
        for g in c.generators() {
            if let Generator::U(a, index) = &g {
                let slots = std::iter::once(Slot::Fiber(*a, index.clone())).chain(blade.slots().iter().cloned());
                out = out + Form::monomial(c.partial(&g), slots);
            }
        }
    }
    out
}

/// `d_H f = Σ_i D_i f dx^i` on coefficients, `d_H dx^i = 0` and
/// `d_H du^α_I = Σ_i dx^i ∧ du^α_{I+i}`. Maps `Ω^{p,q}` into `Ω^{p+1,q}`.
pub fn d_horizontal<S: Scalar>(alpha: &Form<S>, ctx: &JetContext) -> Result<Form<S>> {
    let mut out = Form::zero();
    for (blade, c) in alpha.terms() {
        for i in 0..ctx.n() {
            let di = c.total_derivative(i, ctx)?;
            if !di.is_zero() {
                let slots = std::iter::once(Slot::Base(i)).chain(blade.slots().iter().cloned());
                out = out + Form::monomial(di, slots);
            }
        }
        for (pos, slot) in blade.slots().iter().enumerate() {
            let Slot::Fiber(a, index) = slot else { continue };
            for i in 0..ctx.n() {
                let lifted = index.insert(i, ctx)?;
                let mut slots: Vec<Slot> = Vec::with_capacity(blade.degree() + 1);
                slots.extend(blade.slots()[..pos].iter().cloned());
                slots.push(Slot::Base(i));
                slots.push(Slot::Fiber(*a, lifted));
                slots.extend(blade.slots()[pos + 1..].iter().cloned());
                let coefficient = if pos % 2 == 1 { -c.clone() } else { c.clone() };
                out = out + Form::monomial(coefficient, slots);
            }
        }
    }
    Ok(out)
}
