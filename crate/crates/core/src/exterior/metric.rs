use std::collections::BTreeMap;

use super::{Alternating, Blade, Form, Kind, Multivector, Slot};
use crate::error::{Error, Result};
use crate::jet::{JetContext, MultiIndex};
use crate::scalar::Scalar;

/// Constant block-diagonal metric on `J^k(π)`.
///
/// The base block is a full `n × n` matrix. The fiber block is the identity
/// except on the finitely many jet directions that carry explicit entries.
#[derive(Clone, Debug, PartialEq)]
pub struct Metric<S: Scalar> {
    base: Vec<Vec<S>>,
    base_inv: Vec<Vec<S>>,
    fiber_keys: Vec<(usize, MultiIndex)>,
    fiber: Vec<Vec<S>>,
    fiber_inv: Vec<Vec<S>>,
}

pub type FiberEntry<S> = ((usize, MultiIndex), (usize, MultiIndex), S);

impl<S: Scalar> Metric<S> {
    pub fn identity(n: usize) -> Self {
        let id = identity_matrix(n);
        Self { base: id.clone(), base_inv: id, fiber_keys: Vec::new(), fiber: Vec::new(), fiber_inv: Vec::new() }
    }

    /// Diagonal base block, identity fiber block.
    pub fn diagonal(diag: Vec<S>) -> Result<Self> {
        let n = diag.len();
        let mut base = identity_matrix(n);
        for (i, d) in diag.into_iter().enumerate() {
            base[i][i] = d;
        }
        Self::new(base, Vec::new(), false)
    }

    /// `fiber_entries` lists `g((α,I),(β,J))`; a missing mirror entry is
    /// filled in by symmetry. The fiber block must be positive-definite unless
    /// `allow_indefinite_fiber` is set.
    pub fn new(base: Vec<Vec<S>>, fiber_entries: Vec<FiberEntry<S>>, allow_indefinite_fiber: bool) -> Result<Self> {
        let n = base.len();
        if n == 0 || base.iter().any(|row| row.len() != n) {
            return Err(Error::Config("base metric block must be a non-empty square matrix".into()));
        }
        check_symmetric(&base, "base")?;
        let base_inv = invert(&base).ok_or_else(|| Error::Config("base metric block is singular".into()))?;

        let mut keys: Vec<(usize, MultiIndex)> = Vec::new();
        for (a, b, _) in &fiber_entries {
            for k in [a, b] {
                if !keys.contains(k) {
                    keys.push(k.clone());
                }
            }
        }
        keys.sort();
        let pos = |k: &(usize, MultiIndex)| keys.iter().position(|x| x == k).unwrap();
        let mut fiber = identity_matrix::<S>(keys.len());
        let mut seen: BTreeMap<(usize, usize), S> = BTreeMap::new();
        for (a, b, v) in &fiber_entries {
            let (i, j) = (pos(a), pos(b));
            for key in [(i, j), (j, i)] {
                if let Some(prev) = seen.get(&key) {
                    if prev != v {
                        return Err(Error::Config("fiber metric block is not symmetric".into()));
                    }
                }
            }
            seen.insert((i, j), v.clone());
            fiber[i][j] = v.clone();
            fiber[j][i] = v.clone();
        }
        let fiber_inv = invert(&fiber).ok_or_else(|| Error::Config("fiber metric block is singular".into()))?;
        if !allow_indefinite_fiber && !positive_definite(&fiber) {
            return Err(Error::Config("fiber metric block must be positive-definite".into()));
        }
        Ok(Self { base, base_inv, fiber_keys: keys, fiber, fiber_inv })
    }

    pub fn dim(&self) -> usize {
        self.base.len()
    }

    pub fn base_block(&self) -> &[Vec<S>] {
        &self.base
    }

    pub fn fiber_entries(&self) -> Vec<FiberEntry<S>> {
        let mut out = Vec::new();
        for (i, a) in self.fiber_keys.iter().enumerate() {
            for (j, b) in self.fiber_keys.iter().enumerate().skip(i) {
                let v = &self.fiber[i][j];
                let default = if i == j { S::one() } else { S::zero() };
                if *v != default {
                    out.push((a.clone(), b.clone(), v.clone()));
                }
            }
        }
        out
    }

    pub fn validate(&self, ctx: &JetContext) -> Result<()> {
        if self.dim() != ctx.n() {
            return Err(Error::Range(format!("metric base block is {0}×{0}, base dimension is {1}", self.dim(), ctx.n())));
        }
        for (alpha, index) in &self.fiber_keys {
            ctx.check_field(*alpha)?;
            ctx.check_index(index)?;
        }
        Ok(())
    }

    fn image(&self, slot: &Slot, inverse: bool) -> Vec<(Slot, S)> {
        match slot {
            Slot::Base(i) => {
                let m = if inverse { &self.base_inv } else { &self.base };
                m[*i].iter().enumerate().filter(|(_, v)| !v.is_zero()).map(|(j, v)| (Slot::Base(j), v.clone())).collect()
            }
            Slot::Fiber(alpha, index) => {
                let key = (*alpha, index.clone());
                match self.fiber_keys.iter().position(|k| *k == key) {
                    None => vec![(slot.clone(), S::one())],
                    Some(p) => {
                        let m = if inverse { &self.fiber_inv } else { &self.fiber };
                        m[p].iter()
                            .enumerate()
                            .filter(|(_, v)| !v.is_zero())
                            .map(|(q, v)| {
                                let (b, j) = self.fiber_keys[q].clone();
                                (Slot::Fiber(b, j), v.clone())
                            })
                            .collect()
                    }
                }
            }
        }
    }

    fn transport<K1: Kind, K2: Kind>(&self, x: &Alternating<S, K1>, inverse: bool) -> Alternating<S, K2> {
        let mut out = Alternating::zero();
        for (blade, c) in x.terms() {
            let mut partial: BTreeMap<Blade, S> = BTreeMap::new();
            partial.insert(Blade::empty(), S::one());
            for slot in blade.slots() {
                let image = self.image(slot, inverse);
                let mut next: BTreeMap<Blade, S> = BTreeMap::new();
                for (b, s) in &partial {
                    for (t, g) in &image {
                        let single = Blade::from_slots([t.clone()]).unwrap().1;
                        if let Some((odd, w)) = b.wedge(&single) {
                            let v = s.clone() * g.clone();
                            let v = if odd { -v } else { v };
                            let e = next.entry(w).or_insert_with(S::zero);
                            *e = e.clone() + v;
                        }
                    }
                }
                next.retain(|_, v| !v.is_zero());
                partial = next;
            }
            for (b, s) in partial {
                out.add_term(b, c.scale(&s));
            }
        }
        out
    }

    /// `X ↦ X^♭`, extended factorwise to wedge products.
    pub fn flat(&self, x: &Multivector<S>) -> Form<S> {
        self.transport(x, false)
    }

    /// `α ↦ α^♯`, the inverse of [`Metric::flat`].
    pub fn sharp(&self, alpha: &Form<S>) -> Multivector<S> {
        self.transport(alpha, true)
    }
}

fn identity_matrix<S: Scalar>(n: usize) -> Vec<Vec<S>> {
    (0..n).map(|i| (0..n).map(|j| if i == j { S::one() } else { S::zero() }).collect()).collect()
}

fn check_symmetric<S: Scalar>(m: &[Vec<S>], what: &str) -> Result<()> {
    for i in 0..m.len() {
        for j in 0..i {
            if m[i][j] != m[j][i] {
                return Err(Error::Config(format!("{what} metric block is not symmetric")));
            }
        }
    }
    Ok(())
}

/// Gauss–Jordan inverse; `None` if singular.
fn invert<S: Scalar>(m: &[Vec<S>]) -> Option<Vec<Vec<S>>> {
    let n = m.len();
    let mut a: Vec<Vec<S>> = m.to_vec();
    let mut inv = identity_matrix::<S>(n);
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let p = a[col][col].clone();
        for j in 0..n {
            a[col][j] = a[col][j].clone() / p.clone();
            inv[col][j] = inv[col][j].clone() / p.clone();
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for j in 0..n {
                    a[r][j] = a[r][j].clone() - f.clone() * a[col][j].clone();
                    inv[r][j] = inv[r][j].clone() - f.clone() * inv[col][j].clone();
                }
            }
        }
    }
    Some(inv)
}

/// Symmetric positive-definiteness: all pivots of unpivoted elimination positive.
fn positive_definite<S: Scalar>(m: &[Vec<S>]) -> bool {
    let n = m.len();
    let mut a = m.to_vec();
    for k in 0..n {
        if a[k][k] <= S::zero() {
            return false;
        }
        for r in k + 1..n {
            let f = a[r][k].clone() / a[k][k].clone();
            for j in k..n {
                a[r][j] = a[r][j].clone() - f.clone() * a[k][j].clone();
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jet::Expr;
    use crate::scalar::Rational;

    type F = Form<Rational>;
    type V = Multivector<Rational>;

    fn q(n: i64) -> Rational {
        Rational::from_i64(n)
    }

    fn minkowski() -> Metric<Rational> {
        Metric::diagonal(vec![q(1), q(1), q(1), q(-1)]).unwrap()
    }

    #[test]
    fn flat_examples() {
        assert_eq!(minkowski().flat(&V::base(3)), -F::base(3));
        let id = Metric::<Rational>::identity(1);
        let pu = V::fiber(0, MultiIndex::zero(1));
        assert_eq!(id.flat(&pu), F::fiber(0, MultiIndex::zero(1)));
        let x = V::base(0).wedge(&pu);
        assert_eq!(id.flat(&x), F::base(0).wedge(&F::fiber(0, MultiIndex::zero(1))));
    }

    #[test]
    fn sharp_examples() {
        let id = Metric::<Rational>::identity(1);
        let u = Expr::u(0, MultiIndex::zero(1));
        assert_eq!(id.sharp(&F::scalar(u.clone())), V::scalar(u));
        assert_eq!(minkowski().sharp(&F::base(3)), -V::base(3));
    }

    #[test]
    fn non_diagonal_blocks_invert() {
        let base = vec![vec![q(2), q(1)], vec![q(1), q(1)]];
        let key = (0usize, MultiIndex::zero(2));
        let key1 = (0usize, MultiIndex::unit(2, 0));
        let g = Metric::new(base, vec![(key.clone(), key.clone(), q(3)), (key, key1, q(1))], false).unwrap();
        let x = V::base(0).wedge(&V::fiber(0, MultiIndex::zero(2)));
        assert_eq!(g.sharp(&g.flat(&x)), x);
        let a = F::base(1).wedge(&F::fiber(0, MultiIndex::unit(2, 0)));
        assert_eq!(g.flat(&g.sharp(&a)), a);
    }

    #[test]
    fn rejects_bad_blocks() {
        assert!(Metric::new(vec![vec![q(1), q(2)], vec![q(0), q(1)]], vec![], false).is_err());
        assert!(Metric::new(vec![vec![q(0)]], vec![], false).is_err());
        let key = (0usize, MultiIndex::zero(1));
        assert!(Metric::new(vec![vec![q(1)]], vec![(key.clone(), key.clone(), q(-1))], false).is_err());
        assert!(Metric::new(vec![vec![q(1)]], vec![(key.clone(), key, q(-1))], true).is_ok());
    }
}
