//! Bigraded exterior algebras of forms and multivector fields with
//! polynomial coefficients.
//!
//! Forms and multivectors share one representation, [`Alternating`], tagged
//! by a [`Kind`]: a canonical sum of `coefficient × blade` where a blade is a
//! strictly increasing wedge of coordinate directions ([`Slot`]s). For forms
//! a slot `Base(i)` is `dx^i`, for multivectors it is `∂/∂x^i`.

mod insertion;
mod metric;

pub use insertion::{co_insert, insert};
pub use metric::Metric;

use std::collections::BTreeMap;
use std::fmt;
use std::marker::PhantomData;
use std::ops::{Add, Neg, Sub};

use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::jet::{Expr, JetContext, MultiIndex};
use crate::scalar::Scalar;

/// A coordinate direction: base `x^i` or jet `u^α_I`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Slot {
    Base(usize),
    Fiber(usize, MultiIndex),
}

impl Slot {
    pub fn is_base(&self) -> bool {
        matches!(self, Slot::Base(_))
    }

    pub fn validate(&self, ctx: &JetContext) -> Result<()> {
        match self {
            Slot::Base(i) => ctx.check_base(*i),
            Slot::Fiber(alpha, index) => {
                ctx.check_field(*alpha)?;
                ctx.check_index(index)
            }
        }
    }

    pub(crate) fn write_with(&self, f: &mut fmt::Formatter<'_>, base: &str, fiber: &str) -> fmt::Result {
        match self {
            Slot::Base(i) => write!(f, "{base}{}", i + 1),
            Slot::Fiber(alpha, index) => {
                write!(f, "{fiber}[{}", alpha + 1)?;
                if !index.is_empty() {
                    f.write_str(";")?;
                    let idx: Vec<String> = index.indices().iter().map(|i| (i + 1).to_string()).collect();
                    f.write_str(&idx.join(","))?;
                }
                f.write_str("]")
            }
        }
    }
}

/// Strictly increasing wedge of slots.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Blade(SmallVec<[Slot; 4]>);

impl Blade {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Sort arbitrary slots into a blade; `None` on a repeated slot, otherwise
    /// the permutation sign (`true` for odd).
    pub fn from_slots<I: IntoIterator<Item = Slot>>(slots: I) -> Option<(bool, Self)> {
        let mut v: SmallVec<[Slot; 4]> = slots.into_iter().collect();
        let mut odd = false;
        // insertion sort, counting transpositions
        for i in 1..v.len() {
            let mut j = i;
            while j > 0 && v[j - 1] > v[j] {
                v.swap(j - 1, j);
                odd = !odd;
                j -= 1;
            }
        }
        if v.windows(2).any(|w| w[0] == w[1]) {
            return None;
        }
        Some((odd, Self(v)))
    }

    pub fn slots(&self) -> &[Slot] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    /// `(p, q)`: number of base and fiber slots.
    pub fn bigrade(&self) -> (usize, usize) {
        let p = self.0.iter().filter(|s| s.is_base()).count();
        (p, self.0.len() - p)
    }

    pub fn position(&self, slot: &Slot) -> Option<usize> {
        self.0.binary_search(slot).ok()
    }

    pub fn without(&self, pos: usize) -> Self {
        let mut v = self.0.clone();
        v.remove(pos);
        Self(v)
    }

    /// `self ∧ other`, with the sign of the sorting permutation.
    pub fn wedge(&self, other: &Self) -> Option<(bool, Self)> {
        if other.0.is_empty() {
            return Some((false, self.clone()));
        }
        if self.0.is_empty() {
            return Some((false, other.clone()));
        }
        let mut out = SmallVec::with_capacity(self.0.len() + other.0.len());
        let mut odd = false;
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].cmp(&other.0[j]) {
                std::cmp::Ordering::Less => {
                    out.push(self.0[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    // other[j] moves past the remaining self slots
                    if (self.0.len() - i) % 2 == 1 {
                        odd = !odd;
                    }
                    out.push(other.0[j].clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => return None,
            }
        }
        out.extend(self.0[i..].iter().cloned());
        out.extend(other.0[j..].iter().cloned());
        Some((odd, Self(out)))
    }
}

/// Notation for one of the two exterior algebras.
pub trait Kind: Clone + fmt::Debug + PartialEq + Eq + Send + Sync + 'static {
    const BASE: &'static str;
    const FIBER: &'static str;
    /// LaTeX wrapped around a coordinate, e.g. `d` + `x^{1}` + ``.
    const LATEX_OPEN: &'static str;
    const LATEX_CLOSE: &'static str;
}

/// Differential forms: slots are `dx^i`, `du^α_I`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Co;

/// Multivector fields: slots are `∂/∂x^i`, `∂/∂u^α_I`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Contra;

impl Kind for Co {
    const BASE: &'static str = "dx";
    const FIBER: &'static str = "du";
    const LATEX_OPEN: &'static str = "d";
    const LATEX_CLOSE: &'static str = "";
}

impl Kind for Contra {
    const BASE: &'static str = "Dx";
    const FIBER: &'static str = "Du";
    const LATEX_OPEN: &'static str = "\\partial_{";
    const LATEX_CLOSE: &'static str = "}";
}

/// Canonical sum of polynomial coefficients times blades.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alternating<S: Scalar, K: Kind> {
    terms: BTreeMap<Blade, Expr<S>>,
    kind: PhantomData<K>,
}

pub type Form<S> = Alternating<S, Co>;
pub type Multivector<S> = Alternating<S, Contra>;

impl<S: Scalar, K: Kind> Default for Alternating<S, K> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<S: Scalar, K: Kind> Alternating<S, K> {
    pub fn zero() -> Self {
        Self { terms: BTreeMap::new(), kind: PhantomData }
    }

    /// Degree-0 element.
    pub fn scalar(f: Expr<S>) -> Self {
        Self::term(f, Blade::empty())
    }

    pub fn one() -> Self {
        Self::scalar(Expr::one())
    }

    pub fn term(coefficient: Expr<S>, blade: Blade) -> Self {
        let mut out = Self::zero();
        out.add_term(blade, coefficient);
        out
    }

    /// `coefficient · s₁∧…∧s_k` for slots in any order.
    pub fn monomial<I: IntoIterator<Item = Slot>>(coefficient: Expr<S>, slots: I) -> Self {
        match Blade::from_slots(slots) {
            None => Self::zero(),
            Some((odd, blade)) => Self::term(if odd { -coefficient } else { coefficient }, blade),
        }
    }

    pub fn slot(slot: Slot) -> Self {
        Self::monomial(Expr::one(), [slot])
    }

    pub fn base(i: usize) -> Self {
        Self::slot(Slot::Base(i))
    }

    pub fn fiber(alpha: usize, index: MultiIndex) -> Self {
        Self::slot(Slot::Fiber(alpha, index))
    }

    pub fn from_terms<I: IntoIterator<Item = (Blade, Expr<S>)>>(terms: I) -> Self {
        let mut out = Self::zero();
        for (b, c) in terms {
            out.add_term(b, c);
        }
        out
    }

    pub(crate) fn add_term(&mut self, blade: Blade, coefficient: Expr<S>) {
        if coefficient.is_zero() {
            return;
        }
        match self.terms.entry(blade) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coefficient);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get().clone() + coefficient;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Blade, &Expr<S>)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, blade: &Blade) -> Expr<S> {
        self.terms.get(blade).cloned().unwrap_or_default()
    }

    /// Degree if every term has the same degree (`Some(0)` for zero).
    pub fn homogeneous_degree(&self) -> Option<usize> {
        let mut degrees = self.terms.keys().map(Blade::degree);
        let first = degrees.next().unwrap_or(0);
        degrees.all(|d| d == first).then_some(first)
    }

    pub fn max_degree(&self) -> usize {
        self.terms.keys().map(Blade::degree).max().unwrap_or(0)
    }

    /// Degree-`k` component.
    pub fn component(&self, k: usize) -> Self {
        Self::from_terms(self.terms.iter().filter(|(b, _)| b.degree() == k).map(|(b, c)| (b.clone(), c.clone())))
    }

    /// Homogeneous components, keyed by degree.
    pub fn components(&self) -> BTreeMap<usize, Self> {
        let mut out: BTreeMap<usize, Self> = BTreeMap::new();
        for (b, c) in &self.terms {
            out.entry(b.degree()).or_default().add_term(b.clone(), c.clone());
        }
        out
    }

    /// Bigrades `(p, q)` that occur.
    pub fn bigrades(&self) -> std::collections::BTreeSet<(usize, usize)> {
        self.terms.keys().map(Blade::bigrade).collect()
    }

    /// The degree-0 coefficient.
    pub fn scalar_part(&self) -> Expr<S> {
        self.coefficient(&Blade::empty())
    }

    pub fn mul_expr(&self, f: &Expr<S>) -> Self {
        Self::from_terms(self.terms.iter().map(|(b, c)| (b.clone(), c * f)))
    }

    pub fn scale(&self, c: &S) -> Self {
        Self::from_terms(self.terms.iter().map(|(b, e)| (b.clone(), e.scale(c))))
    }

    /// Apply a fallible map to every coefficient.
    pub fn try_map_coefficients<F>(&self, f: F) -> Result<Self>
    where
        F: Fn(&Expr<S>) -> Result<Expr<S>>,
    {
        let mut out = Self::zero();
        for (b, c) in &self.terms {
            out.add_term(b.clone(), f(c)?);
        }
        Ok(out)
    }

    pub fn map_coefficients<T: Scalar, F: Fn(&S) -> T>(&self, f: F) -> Alternating<T, K> {
        Alternating::from_terms(self.terms.iter().map(|(b, c)| (b.clone(), c.map_coefficients(&f))))
    }

    /// Graded-commutative exterior product.
    pub fn wedge(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (ba, ca) in &self.terms {
            for (bb, cb) in &other.terms {
                if let Some((odd, blade)) = ba.wedge(bb) {
                    let c = ca * cb;
                    out.add_term(blade, if odd { -c } else { c });
                }
            }
        }
        out
    }

    pub fn validate(&self, ctx: &JetContext) -> Result<()> {
        for (b, c) in &self.terms {
            b.slots().iter().try_for_each(|s| s.validate(ctx))?;
            c.validate(ctx)?;
        }
        Ok(())
    }

    /// Largest jet order among slots and coefficients.
    pub fn max_jet_order(&self) -> usize {
        self.terms
            .iter()
            .map(|(b, c)| {
                let slot_order = b
                    .slots()
                    .iter()
                    .map(|s| match s {
                        Slot::Base(_) => 0,
                        Slot::Fiber(_, index) => index.order(),
                    })
                    .max()
                    .unwrap_or(0);
                slot_order.max(c.max_jet_order())
            })
            .max()
            .unwrap_or(0)
    }

    pub(crate) fn require_degree(&self, k: usize, what: &str) -> Result<()> {
        match self.homogeneous_degree() {
            Some(d) if d == k || self.is_zero() => Ok(()),
            _ => Err(Error::Degree(format!("{what} must be homogeneous of degree {k}"))),
        }
    }
}

impl<S: Scalar, K: Kind> Add<&Alternating<S, K>> for &Alternating<S, K> {
    type Output = Alternating<S, K>;

    fn add(self, rhs: &Alternating<S, K>) -> Alternating<S, K> {
        let mut out = self.clone();
        for (b, c) in &rhs.terms {
            out.add_term(b.clone(), c.clone());
        }
        out
    }
}

impl<S: Scalar, K: Kind> Add for Alternating<S, K> {
    type Output = Alternating<S, K>;

    fn add(mut self, rhs: Alternating<S, K>) -> Alternating<S, K> {
        for (b, c) in rhs.terms {
            self.add_term(b, c);
        }
        self
    }
}

impl<S: Scalar, K: Kind> Neg for &Alternating<S, K> {
    type Output = Alternating<S, K>;

    fn neg(self) -> Alternating<S, K> {
        Alternating { terms: self.terms.iter().map(|(b, c)| (b.clone(), -c)).collect(), kind: PhantomData }
    }
}

impl<S: Scalar, K: Kind> Neg for Alternating<S, K> {
    type Output = Alternating<S, K>;

    fn neg(self) -> Alternating<S, K> {
        -&self
    }
}

impl<S: Scalar, K: Kind> Sub<&Alternating<S, K>> for &Alternating<S, K> {
    type Output = Alternating<S, K>;

    fn sub(self, rhs: &Alternating<S, K>) -> Alternating<S, K> {
        let mut out = self.clone();
        for (b, c) in &rhs.terms {
            out.add_term(b.clone(), -c);
        }
        out
    }
}

impl<S: Scalar, K: Kind> Sub for Alternating<S, K> {
    type Output = Alternating<S, K>;

    fn sub(self, rhs: Alternating<S, K>) -> Alternating<S, K> {
        &self - &rhs
    }
}

struct BladeDisplay<'a, K>(&'a Blade, PhantomData<K>);

impl<K: Kind> fmt::Display for BladeDisplay<'_, K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, s) in self.0.slots().iter().enumerate() {
            if k > 0 {
                f.write_str("^")?;
            }
            s.write_with(f, K::BASE, K::FIBER)?;
        }
        Ok(())
    }
}

/// Text form accepted back by the parser: `u[1] dx1^du[1;1] - 1/2*x1 Dx2`.
/// Multi-term coefficients are parenthesised.
impl<S: Scalar, K: Kind> fmt::Display for Alternating<S, K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (k, (blade, c)) in self.terms.iter().enumerate() {
            let single_neg = c.len() == 1 && c.terms().next().map(|(_, v)| v.is_negative()).unwrap_or(false);
            let shown = if single_neg { -c } else { c.clone() };
            match (k, single_neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let blade_text = BladeDisplay::<K>(blade, PhantomData);
            if blade.degree() == 0 {
                if shown.len() > 1 && self.len() > 1 {
                    write!(f, "({shown})")?;
                } else {
                    write!(f, "{shown}")?;
                }
            } else if shown.as_constant().map(|v| v.is_one()).unwrap_or(false) {
                write!(f, "{blade_text}")?;
            } else if shown.len() > 1 {
                write!(f, "({shown}) {blade_text}")?;
            } else {
                write!(f, "{shown} {blade_text}")?;
            }
        }
        Ok(())
    }
}
