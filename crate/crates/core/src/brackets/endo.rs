//! Graded endomorphisms of the form algebra, evaluated lazily from a build
//! tree, and their comparison on a probe family.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::differentials::d_vertical;
use crate::error::{Error, Result};
use crate::exterior::{insert, Blade, Form, Multivector, Slot};
use crate::jet::{Expr, Generator, JetContext, MultiIndex};
use crate::scalar::Scalar;

#[derive(Debug)]
enum Node<S: Scalar> {
    Zero,
    Identity,
    DVertical,
    Insert(Multivector<S>),
    Multiply(Form<S>),
    Scale(S, Endo<S>),
    Sum(Endo<S>, Endo<S>),
    Compose(Endo<S>, Endo<S>),
    Commutator(Endo<S>, Endo<S>),
}

/// Homogeneous graded endomorphism of `Ω•`.
///
/// Built from insertions `i_X` (degree `−|X|`), `d_V` (degree 1),
/// left multiplications `ω ∧ ·` (degree `|ω|`) and the identity, closed under
/// scaling, sums, composition and the graded commutator.
#[derive(Clone, Debug)]
pub struct Endo<S: Scalar> {
    degree: i64,
    node: Arc<Node<S>>,
}

impl<S: Scalar> Endo<S> {
    fn new(degree: i64, node: Node<S>) -> Self {
        Self { degree, node: Arc::new(node) }
    }

    pub fn zero(degree: i64) -> Self {
        Self::new(degree, Node::Zero)
    }

    pub fn identity() -> Self {
        Self::new(0, Node::Identity)
    }

    pub fn d_vertical() -> Self {
        Self::new(1, Node::DVertical)
    }

    /// `i_X`; `X` must be homogeneous. A degree-0 `X = f` is multiplication by `f`.
    pub fn insertion(x: &Multivector<S>) -> Result<Self> {
        let d = x.homogeneous_degree().ok_or_else(|| Error::Degree("insertion needs a homogeneous multivector".into()))?;
        Ok(Self::new(-(d as i64), Node::Insert(x.clone())))
    }

    /// `α ↦ ω ∧ α`; `ω` must be homogeneous.
    pub fn multiplication(omega: &Form<S>) -> Result<Self> {
        let d = omega.homogeneous_degree().ok_or_else(|| Error::Degree("multiplication needs a homogeneous form".into()))?;
        Ok(Self::new(d as i64, Node::Multiply(omega.clone())))
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn scale(&self, c: S) -> Self {
        Self::new(self.degree, Node::Scale(c, self.clone()))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.degree != other.degree {
            return Err(Error::Degree(format!("cannot add endomorphisms of degrees {} and {}", self.degree, other.degree)));
        }
        Ok(Self::new(self.degree, Node::Sum(self.clone(), other.clone())))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(-S::one()))
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        Self::new(self.degree + other.degree, Node::Compose(self.clone(), other.clone()))
    }

    /// `[F, G] = F∘G − (−1)^{|F||G|} G∘F`.
    pub fn commutator(&self, other: &Self) -> Self {
        Self::new(self.degree + other.degree, Node::Commutator(self.clone(), other.clone()))
    }

    pub fn apply(&self, alpha: &Form<S>) -> Form<S> {
        match &*self.node {
            Node::Zero => Form::zero(),
            Node::Identity => alpha.clone(),
            Node::DVertical => d_vertical(alpha),
            Node::Insert(x) => insert(x, alpha),
            Node::Multiply(omega) => omega.wedge(alpha),
            Node::Scale(c, f) => f.apply(alpha).scale(c),
            Node::Sum(f, g) => f.apply(alpha) + g.apply(alpha),
            Node::Compose(f, g) => f.apply(&g.apply(alpha)),
            Node::Commutator(f, g) => {
                let fg = f.apply(&g.apply(alpha));
                let gf = g.apply(&f.apply(alpha));
                if (f.degree * g.degree).rem_euclid(2) == 1 {
                    fg + gf
                } else {
                    fg - gf
                }
            }
        }
    }

    /// Slots referenced by the generators (including through coefficients).
    fn collect_support(&self, out: &mut BTreeSet<Slot>) {
        fn coefficient_slots<S: Scalar>(c: &Expr<S>, out: &mut BTreeSet<Slot>) {
            for g in c.generators() {
                match g {
                    Generator::X(i) => {
                        out.insert(Slot::Base(i));
                    }
                    Generator::U(a, index) => {
                        out.insert(Slot::Fiber(a, index));
                    }
                    Generator::Source(..) => {}
                }
            }
        }
        match &*self.node {
            Node::Zero | Node::Identity | Node::DVertical => {}
            Node::Insert(x) => {
                for (b, c) in x.terms() {
                    out.extend(b.slots().iter().cloned());
                    coefficient_slots(c, out);
                }
            }
            Node::Multiply(w) => {
                for (b, c) in w.terms() {
                    out.extend(b.slots().iter().cloned());
                    coefficient_slots(c, out);
                }
            }
            Node::Scale(_, f) => f.collect_support(out),
            Node::Sum(f, g) | Node::Compose(f, g) | Node::Commutator(f, g) => {
                f.collect_support(out);
                g.collect_support(out);
            }
        }
    }

    fn collect_insert_blades(&self, out: &mut BTreeSet<Blade>) {
        match &*self.node {
            Node::Insert(x) => out.extend(x.terms().map(|(b, _)| b.clone())),
            Node::Zero | Node::Identity | Node::DVertical | Node::Multiply(_) => {}
            Node::Scale(_, f) => f.collect_insert_blades(out),
            Node::Sum(f, g) | Node::Compose(f, g) | Node::Commutator(f, g) => {
                f.collect_insert_blades(out);
                g.collect_insert_blades(out);
            }
        }
    }
}

impl<S: Scalar> fmt::Display for Endo<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &*self.node {
            Node::Zero => f.write_str("0"),
            Node::Identity => f.write_str("id"),
            Node::DVertical => f.write_str("d_V"),
            Node::Insert(x) => write!(f, "i({x})"),
            Node::Multiply(w) => write!(f, "({w})∧"),
            Node::Scale(c, e) => write!(f, "{c}·{e}"),
            Node::Sum(a, b) => write!(f, "({a} + {b})"),
            Node::Compose(a, b) => write!(f, "{a}∘{b}"),
            Node::Commutator(a, b) => write!(f, "[{a}, {b}]"),
        }
    }
}

/// How endomorphisms are compared.
///
/// The probe family is built over the slots the operands reference (plus
/// `dx¹` and `du¹`):
/// - every wedge of at most `probe_degree` of them, stopping at a lower
///   degree once the count would exceed `max_basis`;
/// - every union of two term blades of the insertions involved, alone and
///   with one extra slot, so that insertions of any degree act nontrivially;
/// - `random_probes` seeded random sums of the above.
///
/// Each basis probe appears with coefficient 1 and with a fixed generic
/// polynomial in the referenced coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ProbePolicy {
    pub probe_degree: usize,
    pub random_probes: usize,
    pub seed: u64,
    pub max_basis: usize,
}

impl Default for ProbePolicy {
    fn default() -> Self {
        Self { probe_degree: 4, random_probes: 8, seed: 0x5eed, max_basis: 400 }
    }
}

/// First probe on which two endomorphisms disagree.
#[derive(Clone, Debug, PartialEq)]
pub struct ProbeMismatch<S: Scalar> {
    pub probe: Form<S>,
    pub left: Form<S>,
    pub right: Form<S>,
}

impl<S: Scalar> fmt::Display for ProbeMismatch<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "on probe {}: {} ≠ {}", self.probe, self.left, self.right)
    }
}

fn single(s: &Slot) -> Blade {
    Blade::from_slots([s.clone()]).expect("one slot").1
}

impl ProbePolicy {
    pub fn probes<S: Scalar>(&self, endos: &[&Endo<S>], ctx: &JetContext) -> Vec<Form<S>> {
        let mut support = BTreeSet::new();
        for e in endos {
            e.collect_support(&mut support);
        }
        support.insert(Slot::Base(0));
        support.insert(Slot::Fiber(0, MultiIndex::zero(ctx.n())));
        let slots: Vec<Slot> = support.into_iter().collect();

        let coordinate = |s: &Slot| match s {
            Slot::Base(i) => Expr::x(*i),
            Slot::Fiber(a, index) => Expr::u(*a, index.clone()),
        };
        let mut generic = Expr::one();
        let mut linear = Expr::zero();
        for (k, s) in slots.iter().enumerate() {
            let c = coordinate(s);
            generic = generic + c.scale(&S::from_i64(k as i64 + 2));
            linear = linear + c;
        }
        let generic = generic + (&linear * &linear).scale(&S::from_ratio(1.into(), 3.into()));

        let mut family: BTreeSet<Blade> = BTreeSet::new();
        family.insert(Blade::empty());
        let mut frontier = vec![(Blade::empty(), 0usize)];
        for _ in 0..self.probe_degree {
            let mut next = Vec::new();
            for (b, start) in &frontier {
                for (k, s) in slots.iter().enumerate().skip(*start) {
                    if let Some((_, w)) = b.wedge(&single(s)) {
                        next.push((w, k + 1));
                    }
                }
            }
            if family.len() + next.len() > self.max_basis {
                break;
            }
            family.extend(next.iter().map(|(b, _)| b.clone()));
            frontier = next;
        }

        let mut inserted = BTreeSet::new();
        for e in endos {
            e.collect_insert_blades(&mut inserted);
        }
        let inserted: Vec<Blade> = inserted.into_iter().collect();
        for (k, a) in inserted.iter().enumerate() {
            for b in &inserted[k..] {
                let union: BTreeSet<Slot> = a.slots().iter().chain(b.slots()).cloned().collect();
                let Some((_, union)) = Blade::from_slots(union) else { continue };
                for s in &slots {
                    if let Some((_, w)) = union.wedge(&single(s)) {
                        family.insert(w);
                    }
                }
                family.insert(union);
            }
        }
        let blades: Vec<Blade> = family.into_iter().collect();

        let mut out = Vec::with_capacity(2 * blades.len() + self.random_probes);
        for b in &blades {
            out.push(Form::term(Expr::one(), b.clone()));
            out.push(Form::term(generic.clone(), b.clone()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        for _ in 0..self.random_probes {
            let mut probe = Form::zero();
            for _ in 0..3 {
                let b = &blades[rng.gen_range(0..blades.len())];
                let mut c = Expr::constant(S::from_i64(rng.gen_range(-3..=3)));
                for _ in 0..2 {
                    let s = &slots[rng.gen_range(0..slots.len())];
                    let t = &slots[rng.gen_range(0..slots.len())];
                    let k = S::from_i64(rng.gen_range(1..=4));
                    c = c + (&coordinate(s) * &coordinate(t)).scale(&k);
                }
                probe = probe + Form::term(c, b.clone());
            }
            out.push(probe);
        }
        out
    }

    /// Compare two endomorphisms on the probe family.
    pub fn compare<S: Scalar>(&self, f: &Endo<S>, g: &Endo<S>, ctx: &JetContext) -> std::result::Result<usize, ProbeMismatch<S>> {
        let probes = self.probes(&[f, g], ctx);
        for probe in &probes {
            let (left, right) = (f.apply(probe), g.apply(probe));
            if left != right {
                return Err(ProbeMismatch { probe: probe.clone(), left, right });
            }
        }
        Ok(probes.len())
    }

    pub fn equal<S: Scalar>(&self, f: &Endo<S>, g: &Endo<S>, ctx: &JetContext) -> bool {
        self.compare(f, g, ctx).is_ok()
    }

    pub fn is_zero<S: Scalar>(&self, f: &Endo<S>, ctx: &JetContext) -> bool {
        self.equal(f, &Endo::zero(f.degree()), ctx)
    }
}

/// The derived bracket `[F, G]_δ = [[F, δ], G]`. Fails unless `[δ, δ]`
/// vanishes on the probe family.
pub fn derived_bracket<S: Scalar>(f: &Endo<S>, g: &Endo<S>, delta: &Endo<S>, ctx: &JetContext, policy: &ProbePolicy) -> Result<Endo<S>> {
    if !policy.is_zero(&delta.commutator(delta), ctx) {
        return Err(Error::DeltaNotSquareZero);
    }
    Ok(f.commutator(delta).commutator(g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    type F = Form<Rational>;
    type V = Multivector<Rational>;
    type E = Expr<Rational>;
    type En = Endo<Rational>;

    fn ctx() -> JetContext {
        JetContext::new(1, 1).unwrap()
    }

    fn u() -> E {
        E::u(0, MultiIndex::zero(1))
    }

    #[test]
    fn apply_examples() {
        let a = F::base(0).mul_expr(&u());
        assert_eq!(En::identity().apply(&a), a);
        let i = En::insertion(&V::base(0)).unwrap();
        assert_eq!(i.apply(&F::base(0)), F::one());
        let m = En::multiplication(&F::base(0)).unwrap();
        assert_eq!(m.compose(&i).apply(&F::base(0)), F::base(0));
        assert_eq!(m.compose(&i).degree(), 0);
    }

    #[test]
    fn commutator_examples() {
        let p = ProbePolicy::default();
        let c = ctx();
        let dv = En::d_vertical();
        assert!(p.is_zero(&dv.commutator(&dv), &c));
        let x = En::insertion(&V::base(0).mul_expr(&u())).unwrap();
        let y = En::insertion(&V::fiber(0, MultiIndex::unit(1, 0))).unwrap();
        assert!(p.is_zero(&x.commutator(&y), &c));
        assert!(p.is_zero(&En::identity().commutator(&dv), &c));
        assert!(p.is_zero(&En::identity().commutator(&x), &c));
        // [d_V, d_V] as an operator is 2 d_V²: not identically zero as a tree
        assert_eq!(dv.commutator(&dv).degree(), 2);
    }

    #[test]
    fn derived_bracket_examples() {
        let p = ProbePolicy::default();
        let c = ctx();
        let dv = En::d_vertical();
        let id = En::identity();
        let z = derived_bracket(&id, &id, &dv, &c, &p).unwrap();
        assert!(p.is_zero(&z, &c));

        // [[i_∂u, d_V], u·] = multiplication by ∂u(u) = 1
        let iu = En::insertion(&V::fiber(0, MultiIndex::zero(1))).unwrap();
        let mu = En::multiplication(&F::scalar(u())).unwrap();
        let b = derived_bracket(&iu, &mu, &dv, &c, &p).unwrap();
        assert_eq!(b.degree(), 0);
        assert!(p.equal(&b, &En::identity(), &c));

        let zero = En::zero(1);
        let b = derived_bracket(&iu, &mu, &zero, &c, &p).unwrap();
        assert!(p.is_zero(&b, &c));
    }

    #[test]
    fn derived_bracket_rejects_non_square_zero() {
        let p = ProbePolicy::default();
        let c = ctx();
        // δ = d_V + (u_(1) du)∧ has [δ, δ] = 2 (du_(1)∧du)∧
        let w = F::fiber(0, MultiIndex::zero(1)).mul_expr(&E::u(0, MultiIndex::unit(1, 0)));
        let delta = En::d_vertical().add(&En::multiplication(&w).unwrap()).unwrap();
        let id = En::identity();
        assert_eq!(derived_bracket(&id, &id, &delta, &c, &p).unwrap_err(), Error::DeltaNotSquareZero);
    }

    #[test]
    fn sum_requires_equal_degrees() {
        assert!(En::identity().add(&En::d_vertical()).is_err());
        assert!(En::insertion(&(V::base(0) + V::one())).is_err());
    }

    #[test]
    fn probe_family_is_deterministic() {
        let p = ProbePolicy::default();
        let c = ctx();
        let e = En::insertion(&V::base(0)).unwrap();
        assert_eq!(p.probes(&[&e], &c), p.probes(&[&e], &c));
        assert!(p.probes(&[&e], &c).len() > 8);
    }
}
