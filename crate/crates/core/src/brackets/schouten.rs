//! The vertical Schouten–Nijenhuis bracket.
//!
//! Signs are fixed by `i_{[[X,Y]]} = [[i_X, d_V], i_Y]`; the direct formula
//! below is checked against that route in the tests and the check suites.

use std::fmt;

use super::endo::{Endo, ProbeMismatch, ProbePolicy};
use crate::differentials::d_vertical;
use crate::exterior::{co_insert, Form, Multivector};
use crate::jet::{Expr, JetContext};
use crate::scalar::Scalar;

/// `[[X, Y]]`, of degree `|X| + |Y| − 1`.
///
/// Coordinate vector fields bracket to zero, so on basis terms `f·A`, `g·B`
/// (`|A| = p`, `|B| = q`) the biderivation rules reduce to
///
/// `[[fA, gB]] = f·ī(d_V g)A ∧ B − (−1)^{(p−1)(q−1)} g·ī(d_V f)B ∧ A`
///
/// with `ī` the right contraction. Base directions never differentiate.
pub fn vsn_bracket<S: Scalar>(x: &Multivector<S>, y: &Multivector<S>) -> Multivector<S> {
    let mut out = Multivector::zero();
    for (a, f) in x.terms() {
        let df = d_vertical(&Form::scalar(f.clone()));
        let p = a.degree();
        for (b, g) in y.terms() {
            let dg = d_vertical(&Form::scalar(g.clone()));
            let q = b.degree();
            if !dg.is_zero() && p > 0 {
                let t = co_insert(&dg, &Multivector::term(f.clone(), a.clone())).expect("d_V of a function is a one-form");
                out = out + t.wedge(&Multivector::term(Expr::one(), b.clone()));
            }
            if !df.is_zero() && q > 0 {
                let t = co_insert(&df, &Multivector::term(g.clone(), b.clone())).expect("d_V of a function is a one-form");
                let t = t.wedge(&Multivector::term(Expr::one(), a.clone()));
                out = if p % 2 == 0 && q % 2 == 0 { out + t } else { out - t };
            }
        }
    }
    out
}

/// Pairwise expansion for decomposable arguments built from vector fields:
/// `[[X₁∧…∧X_p, Y₁∧…∧Y_q]] = Σ (−1)^{i+j} [X_i, Y_j] ∧ X₁…X̂_i…X_p ∧ Y₁…Ŷ_j…Y_q`.
///
/// Each factor must be a homogeneous vector field.
pub fn schouten_pairwise<S: Scalar>(xs: &[Multivector<S>], ys: &[Multivector<S>]) -> Multivector<S> {
    let wedge_all = |items: &[Multivector<S>], skip: usize| {
        items.iter().enumerate().filter(|(k, _)| *k != skip).fold(Multivector::one(), |acc, (_, v)| acc.wedge(v))
    };
    let mut out = Multivector::zero();
    for (i, xi) in xs.iter().enumerate() {
        for (j, yj) in ys.iter().enumerate() {
            let t = vsn_bracket(xi, yj).wedge(&wedge_all(xs, i)).wedge(&wedge_all(ys, j));
            out = if (i + j) % 2 == 1 { out - t } else { out + t };
        }
    }
    out
}

/// Outcome of comparing `i_{[[X,Y]]}` with `[[i_X, d_V], i_Y]` on probes,
/// one homogeneous component pair at a time.
#[derive(Clone, Debug)]
pub struct OracleReport<S: Scalar> {
    pub pairs: usize,
    pub probes: usize,
    pub mismatch: Option<(usize, usize, ProbeMismatch<S>)>,
}

impl<S: Scalar> OracleReport<S> {
    pub fn matched(&self) -> bool {
        self.mismatch.is_none()
    }
}

impl<S: Scalar> fmt::Display for OracleReport<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.mismatch {
            None => write!(f, "match ({} component pairs, {} probe evaluations)", self.pairs, self.probes),
            Some((p, q, m)) => write!(f, "mismatch in degrees ({p}, {q}) {m}"),
        }
    }
}

pub fn vsn_oracle_check<S: Scalar>(x: &Multivector<S>, y: &Multivector<S>, ctx: &JetContext, policy: &ProbePolicy) -> OracleReport<S> {
    let mut report = OracleReport { pairs: 0, probes: 0, mismatch: None };
    for (p, xc) in x.components() {
        for (q, yc) in y.components() {
            let degree = 1 - (p + q) as i64;
            let direct = vsn_bracket(&xc, &yc);
            let lhs = if direct.is_zero() { Endo::zero(degree) } else { Endo::insertion(&direct).expect("homogeneous") };
            let ix = Endo::insertion(&xc).expect("homogeneous component");
            let iy = Endo::insertion(&yc).expect("homogeneous component");
            let rhs = ix.commutator(&Endo::d_vertical()).commutator(&iy);
            report.pairs += 1;
            match policy.compare(&lhs, &rhs, ctx) {
                Ok(n) => report.probes += n,
                Err(m) => {
                    report.mismatch = Some((p, q, m));
                    return report;
                }
            }
        }
    }
    report
}
