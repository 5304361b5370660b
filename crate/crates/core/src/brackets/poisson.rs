//! Poisson multivectors and the Poisson–Leibniz bracket on forms.

use std::collections::BTreeMap;

use super::schouten::vsn_bracket;
use crate::error::{Error, Result};
use crate::exterior::{Form, Metric, Multivector, Slot};
use crate::jet::{Expr, JetContext, MultiIndex};
use crate::scalar::Scalar;

/// Sparse `η^{IJ}` entries.
pub type EtaOrders<S> = Vec<(MultiIndex, MultiIndex, S)>;

/// A multivector `P` together with the check `[[P, P]] = 0`, done once at
/// construction.
#[derive(Clone, Debug, PartialEq)]
pub struct PoissonMultivector<S: Scalar> {
    p: Multivector<S>,
}

impl<S: Scalar> PoissonMultivector<S> {
    pub fn attest(p: Multivector<S>) -> Result<Self> {
        if !vsn_bracket(&p, &p).is_zero() {
            return Err(Error::PoissonCheckFailed);
        }
        Ok(Self { p })
    }

    pub fn multivector(&self) -> &Multivector<S> {
        &self.p
    }

    pub fn into_inner(self) -> Multivector<S> {
        self.p
    }
}

/// `η^{IJ}` closed under symmetry; the first-order default when `None`.
fn symmetric_orders<S: Scalar>(
    eta_orders: Option<&[(MultiIndex, MultiIndex, S)]>,
    ctx: &JetContext,
) -> Result<BTreeMap<(MultiIndex, MultiIndex), S>> {
    let Some(entries) = eta_orders else {
        let z = MultiIndex::zero(ctx.n());
        return Ok(BTreeMap::from([((z.clone(), z), S::one())]));
    };
    let mut out = BTreeMap::new();
    for (i, j, v) in entries {
        ctx.check_index(i)?;
        ctx.check_index(j)?;
        for key in [(i.clone(), j.clone()), (j.clone(), i.clone())] {
            match out.get(&key) {
                Some(prev) if prev != v => return Err(Error::Config("eta_orders is not symmetric".into())),
                _ => {
                    out.insert(key, v.clone());
                }
            }
        }
    }
    out.retain(|_, v| !v.is_zero());
    Ok(out)
}

/// `P = η^{αβ} η^{IJ} ∂u^α_I ∧ ∂u^β_{J+i} ∧ ∂x^i`, summed over fields, distinct
/// exponent vectors and base directions.
pub fn poisson_multivector<S: Scalar>(
    eta_fields: &[Vec<S>],
    eta_orders: Option<&[(MultiIndex, MultiIndex, S)]>,
    ctx: &JetContext,
) -> Result<PoissonMultivector<S>> {
    let m = ctx.m();
    if eta_fields.len() != m || eta_fields.iter().any(|row| row.len() != m) {
        return Err(Error::Config(format!("eta_fields must be a {m}×{m} matrix")));
    }
    let orders = symmetric_orders(eta_orders, ctx)?;
    let mut p = Multivector::zero();
    for (a, row) in eta_fields.iter().enumerate() {
        for (b, eab) in row.iter().enumerate() {
            if eab.is_zero() {
                continue;
            }
            for ((i_index, j_index), eij) in &orders {
                for i in 0..ctx.n() {
                    let lifted = j_index.insert(i, ctx)?;
                    let c = Expr::constant(eab.clone() * eij.clone());
                    let slots = [Slot::Fiber(a, i_index.clone()), Slot::Fiber(b, lifted), Slot::Base(i)];
                    p = p + Multivector::monomial(c, slots);
                }
            }
        }
    }
    PoissonMultivector::attest(p)
}

/// `{α, β}_P = [[[[α^♯, P]], β^♯]]^♭`.
pub fn poisson_leibniz<S: Scalar>(alpha: &Form<S>, beta: &Form<S>, p: &PoissonMultivector<S>, g: &Metric<S>) -> Form<S> {
    let inner = vsn_bracket(&g.sharp(alpha), p.multivector());
    g.flat(&vsn_bracket(&inner, &g.sharp(beta)))
}
