use super::{Blade, Form, Multivector, Slot};
use crate::error::Result;
use crate::jet::Expr;
use crate::scalar::Scalar;

/// Contract a blade of vectors into a blade of covectors, innermost factor
/// last: for `a₁∧…∧a_p` this is `a₁ ⌟ (a₂ ⌟ (… (a_p ⌟ β)))`.
fn contract(vectors: &Blade, covectors: &Blade) -> Option<(bool, Blade)> {
    let mut odd = false;
    let mut rest = covectors.clone();
    for a in vectors.slots().iter().rev() {
        let pos = rest.position(a)?;
        if pos % 2 == 1 {
            odd = !odd;
        }
        rest = rest.without(pos);
    }
    Some((odd, rest))
}

/// `i_X α` for `X = X₁∧…∧X_p`: `X₁ ⌟ (… (X_p ⌟ α))`, where each `⌟` is the
/// degree −1 anti-derivation with `⟨∂_a, d_b⟩ = δ_ab`.
///
/// With this nesting `i_{X∧Y} = i_X ∘ i_Y = (−1)^{|X||Y|} i_Y ∘ i_X`.
pub fn insert<S: Scalar>(x: &Multivector<S>, alpha: &Form<S>) -> Form<S> {
    let mut out = Form::zero();
    for (vb, vc) in x.terms() {
        for (cb, cc) in alpha.terms() {
            if vb.degree() > cb.degree() {
                continue;
            }
            if let Some((odd, rest)) = contract(vb, cb) {
                let c = vc * cc;
                out.add_term(rest, if odd { -c } else { c });
            }
        }
    }
    out
}

/// Conjugate insertion `ī(ω) X` of a one-form into a multivector:
/// `Σ_i (−1)^{p−i} ω(X_i) X₁∧…X̂_i…∧X_p`, contracting from the right.
pub fn co_insert<S: Scalar>(omega: &Form<S>, x: &Multivector<S>) -> Result<Multivector<S>> {
    omega.require_degree(1, "co_insert one-form")?;
    let pairing: Vec<(&Slot, &Expr<S>)> = omega.terms().map(|(b, c)| (&b.slots()[0], c)).collect();
    let mut out = Multivector::zero();
    for (blade, c) in x.terms() {
        let p = blade.degree();
        for (pos, slot) in blade.slots().iter().enumerate() {
            if let Some((_, w)) = pairing.iter().find(|(s, _)| *s == slot) {
                let coefficient = c * *w;
                // pos is 0-based: (−1)^{p−(pos+1)}
                let coefficient = if (p - pos - 1) % 2 == 1 { -coefficient } else { coefficient };
                out.add_term(blade.without(pos), coefficient);
            }
        }
    }
    Ok(out)
}
