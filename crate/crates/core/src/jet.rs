//! Jet coordinates over the trivial bundle ℝⁿ × ℝᵐ → ℝⁿ and the exact
//! polynomial algebra they generate.
//!
//! Indices are 0-based throughout the Rust API (`x^1` is `Generator::X(0)`);
//! the surface syntax and renderers are 1-based.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub const DEFAULT_ORDER_CAP: usize = 8;

/// Dimensions of the bundle plus the names of base-only source functions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JetContext {
    n: usize,
    m: usize,
    order_cap: usize,
    opaque: Vec<Arc<str>>,
}

impl JetContext {
    pub fn new(n: usize, m: usize) -> Result<Self> {
        Self::with_cap(n, m, DEFAULT_ORDER_CAP)
    }

    pub fn with_cap(n: usize, m: usize, order_cap: usize) -> Result<Self> {
        if n == 0 || m == 0 || order_cap == 0 {
            return Err(Error::Range(format!("n, m and order_cap must be positive (got n={n}, m={m}, order_cap={order_cap})")));
        }
        Ok(Self { n, m, order_cap, opaque: Vec::new() })
    }

    /// Declare base-only source functions such as `j1`, `j2`.
    pub fn with_opaque<I, T>(mut self, names: I) -> Result<Self>
    where
        I: IntoIterator<Item = T>,
        T: AsRef<str>,
    {
        for name in names {
            let name = name.as_ref();
            if !is_valid_opaque_name(name) {
                return Err(Error::Range(format!("`{name}` is not a valid source-function name")));
            }
            if self.opaque.iter().any(|o| &**o == name) {
                return Err(Error::Range(format!("source function `{name}` declared twice")));
            }
            self.opaque.push(Arc::from(name));
        }
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn order_cap(&self) -> usize {
        self.order_cap
    }

    pub fn opaque_names(&self) -> &[Arc<str>] {
        &self.opaque
    }

    pub fn opaque(&self, name: &str) -> Option<&Arc<str>> {
        self.opaque.iter().find(|o| &***o == name)
    }

    pub fn check_base(&self, i: usize) -> Result<()> {
        if i < self.n {
            Ok(())
        } else {
            Err(Error::Range(format!("base index {} not in 1..={}", i + 1, self.n)))
        }
    }

    pub fn check_field(&self, alpha: usize) -> Result<()> {
        if alpha < self.m {
            Ok(())
        } else {
            Err(Error::Range(format!("fiber index {} not in 1..={}", alpha + 1, self.m)))
        }
    }

    pub fn check_index(&self, index: &MultiIndex) -> Result<()> {
        if index.dim() != self.n {
            return Err(Error::Range(format!("multiindex has {} entries, base dimension is {}", index.dim(), self.n)));
        }
        if index.order() > self.order_cap {
            return Err(Error::OrderOverflow { order: index.order(), cap: self.order_cap });
        }
        Ok(())
    }

    pub fn check_generator(&self, g: &Generator) -> Result<()> {
        match g {
            Generator::X(i) => self.check_base(*i),
            Generator::U(alpha, index) => {
                self.check_field(*alpha)?;
                self.check_index(index)
            }
            Generator::Source(name, index) => {
                if self.opaque(name).is_none() {
                    return Err(Error::Range(format!("undeclared source function `{name}`")));
                }
                self.check_index(index)
            }
        }
    }

    /// All multiindices of exactly the given order, in canonical order.
    pub fn multiindices_of_order(&self, order: usize) -> Vec<MultiIndex> {
        let mut out = Vec::new();
        let mut exps = vec![0u16; self.n];
        fn rec(pos: usize, left: usize, exps: &mut Vec<u16>, out: &mut Vec<MultiIndex>) {
            if pos + 1 == exps.len() {
                exps[pos] = left as u16;
                out.push(MultiIndex::from_exponents(exps.iter().copied()));
                return;
            }
            for k in (0..=left).rev() {
                exps[pos] = k as u16;
                rec(pos + 1, left - k, exps, out);
            }
            exps[pos] = 0;
        }
        rec(0, order, &mut exps, &mut out);
        out.sort();
        out
    }
}

pub(crate) fn is_valid_opaque_name(name: &str) -> bool {
    let mut chars = name.chars();
    let Some(first) = chars.next() else { return false };
    if !first.is_ascii_alphabetic() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
        return false;
    }
    // Reserved prefixes of the coordinate syntax.
    let stem = name.trim_end_matches(|c: char| c.is_ascii_digit());
    !matches!(stem, "x" | "u" | "dx" | "du" | "Dx" | "Du")
}

/// Symmetric multiindex, stored as an exponent vector over the base
/// coordinates. `u_{(2,0)}` is `∂²u/∂x¹∂x¹`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiIndex {
    exps: SmallVec<[u16; 4]>,
}

impl MultiIndex {
    /// The empty multiindex (no derivatives) in base dimension `n`.
    pub fn zero(n: usize) -> Self {
        Self { exps: SmallVec::from_elem(0, n) }
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut out = Self::zero(n);
        out.exps[i] = 1;
        out
    }

    pub fn from_exponents<I: IntoIterator<Item = u16>>(exps: I) -> Self {
        Self { exps: exps.into_iter().collect() }
    }

    /// From a list of (0-based) base indices with repetition: `[0, 0]` is `(2, 0, …)`.
    pub fn from_indices(n: usize, indices: &[usize]) -> Result<Self> {
        let mut out = Self::zero(n);
        for &i in indices {
            if i >= n {
                return Err(Error::Range(format!("base index {} not in 1..={n}", i + 1)));
            }
            out.exps[i] += 1;
        }
        Ok(out)
    }

    pub fn dim(&self) -> usize {
        self.exps.len()
    }

    pub fn order(&self) -> usize {
        self.exps.iter().map(|&e| e as usize).sum()
    }

    pub fn exponents(&self) -> &[u16] {
        &self.exps
    }

    pub fn is_empty(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    /// Sorted list of (0-based) base indices with repetition.
    pub fn indices(&self) -> Vec<usize> {
        self.exps.iter().enumerate().flat_map(|(i, &e)| std::iter::repeat_n(i, e as usize)).collect()
    }

    /// `I + i`: insert the base index `i`.
    pub fn insert(&self, i: usize, ctx: &JetContext) -> Result<Self> {
        ctx.check_base(i)?;
        let out = self.insert_unchecked(i);
        if out.order() > ctx.order_cap() {
            return Err(Error::OrderOverflow { order: out.order(), cap: ctx.order_cap() });
        }
        Ok(out)
    }

    pub(crate) fn insert_unchecked(&self, i: usize) -> Self {
        let mut out = self.clone();
        out.exps[i] += 1;
        out
    }

    /// `I - i`, if `I` contains `i`.
    pub fn remove(&self, i: usize) -> Option<Self> {
        if self.exps.get(i).copied().unwrap_or(0) == 0 {
            return None;
        }
        let mut out = self.clone();
        out.exps[i] -= 1;
        Some(out)
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        // Graded, then larger exponents on earlier coordinates first:
        // (2,0) < (1,1) < (0,2).
        self.order().cmp(&other.order()).then_with(|| other.exps.cmp(&self.exps))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Polynomial generators: base coordinates, jet coordinates and formal
/// derivatives of source functions.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    X(usize),
    U(usize, MultiIndex),
    /// `∂^{|D|} j / ∂x^D` for a base-only source function `j`.
    Source(Arc<str>, MultiIndex),
}

impl Generator {
    pub fn jet_order(&self) -> usize {
        match self {
            Generator::X(_) => 0,
            Generator::U(_, index) | Generator::Source(_, index) => index.order(),
        }
    }

    pub fn is_fiber(&self) -> bool {
        matches!(self, Generator::U(..))
    }
}

fn write_index_list(f: &mut fmt::Formatter<'_>, index: &MultiIndex) -> fmt::Result {
    let idx = index.indices();
    for (k, i) in idx.iter().enumerate() {
        if k > 0 {
            f.write_str(",")?;
        }
        write!(f, "{}", i + 1)?;
    }
    Ok(())
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::X(i) => write!(f, "x{}", i + 1),
            Generator::U(alpha, index) => {
                write!(f, "u[{}", alpha + 1)?;
                if !index.is_empty() {
                    f.write_str(";")?;
                    write_index_list(f, index)?;
                }
                f.write_str("]")
            }
            Generator::Source(name, index) => {
                f.write_str(name)?;
                if !index.is_empty() {
                    f.write_str("[")?;
                    write_index_list(f, index)?;
                    f.write_str("]")?;
                }
                f.write_str("(x)")
            }
        }
    }
}

/// Product of generator powers, sorted by generator, no zero exponents.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(SmallVec<[(Generator, u32); 3]>);

impl Monomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn generator(g: Generator) -> Self {
        Self(smallvec::smallvec![(g, 1)])
    }

    pub fn from_powers<I: IntoIterator<Item = (Generator, u32)>>(powers: I) -> Self {
        let mut out = Self::one();
        for (g, e) in powers {
            out = out.mul(&Self(smallvec::smallvec![(g, e)]));
        }
        out.0.retain(|(_, e)| *e > 0);
        out
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn powers(&self) -> &[(Generator, u32)] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn jet_weight(&self) -> usize {
        self.0.iter().map(|(g, _)| g.jet_order()).max().unwrap_or(0)
    }

    pub fn exponent(&self, g: &Generator) -> u32 {
        self.0.iter().find(|(h, _)| h == g).map(|(_, e)| *e).unwrap_or(0)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = SmallVec::with_capacity(self.0.len() + other.0.len());
        let (mut a, mut b) = (self.0.iter().peekable(), other.0.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some((ga, ea)), Some((gb, eb))) => match ga.cmp(gb) {
                    Ordering::Less => {
                        out.push((ga.clone(), *ea));
                        a.next();
                    }
                    Ordering::Greater => {
                        out.push((gb.clone(), *eb));
                        b.next();
                    }
                    Ordering::Equal => {
                        out.push((ga.clone(), ea + eb));
                        a.next();
                        b.next();
                    }
                },
                (Some(x), None) => {
                    out.push((*x).clone());
                    a.next();
                }
                (None, Some(y)) => {
                    out.push((*y).clone());
                    b.next();
                }
                (None, None) => break,
            }
        }
        Self(out)
    }

    /// Divide by one power of `g`, returning the former exponent.
    fn reduce(&self, g: &Generator) -> Option<(u32, Self)> {
        let pos = self.0.iter().position(|(h, _)| h == g)?;
        let e = self.0[pos].1;
        let mut out = self.clone();
        if e == 1 {
            out.0.remove(pos);
        } else {
            out.0[pos].1 -= 1;
        }
        Some((e, out))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, (g, e)) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str("*")?;
            }
            write!(f, "{g}")?;
            if *e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

/// Exact polynomial in jet coordinates and source atoms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expr<S: Scalar> {
    terms: BTreeMap<Monomial, S>,
}

impl<S: Scalar> Default for Expr<S> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<S: Scalar> Expr<S> {
    pub fn zero() -> Self {
        Self { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::constant(S::one())
    }

    pub fn constant(c: S) -> Self {
        Self::term(c, Monomial::one())
    }

    pub fn term(c: S, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Self { terms }
    }

    pub fn generator(g: Generator) -> Self {
        Self::term(S::one(), Monomial::generator(g))
    }

    pub fn x(i: usize) -> Self {
        Self::generator(Generator::X(i))
    }

    pub fn u(alpha: usize, index: MultiIndex) -> Self {
        Self::generator(Generator::U(alpha, index))
    }

    pub fn source(name: &Arc<str>, index: MultiIndex) -> Self {
        Self::generator(Generator::Source(name.clone(), index))
    }

    /// Canonicalize an arbitrary list of terms: merge equal monomials, drop zeros.
    pub fn from_terms<I: IntoIterator<Item = (Monomial, S)>>(terms: I) -> Self {
        let mut out = Self::zero();
        for (m, c) in terms {
            out.add_term(m, c);
        }
        out
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: S) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get().clone() + c;
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

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &S)> {
        self.terms.iter()
    }

    /// The value if this is a constant (including zero).
    pub fn as_constant(&self) -> Option<S> {
        match self.terms.len() {
            0 => Some(S::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn coefficient(&self, m: &Monomial) -> S {
        self.terms.get(m).cloned().unwrap_or_else(S::zero)
    }

    /// Terms in presentation order: highest jet weight first, then higher
    /// total degree, then canonical monomial order.
    pub fn display_terms(&self) -> Vec<(&Monomial, &S)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|(a, _), (b, _)| b.jet_weight().cmp(&a.jet_weight()).then_with(|| b.degree().cmp(&a.degree())).then_with(|| a.cmp(b)));
        v
    }

    /// First term in presentation order.
    pub fn leading_term(&self) -> Option<(&Monomial, &S)> {
        self.display_terms().into_iter().next()
    }

    pub fn scale(&self, c: &S) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|(m, v)| (m.clone(), v.clone() * c.clone())).filter(|(_, v)| !v.is_zero()).collect() }
    }

    pub fn map_coefficients<T: Scalar, F: Fn(&S) -> T>(&self, f: F) -> Expr<T> {
        Expr::from_terms(self.terms.iter().map(|(m, c)| (m.clone(), f(c))))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    /// Generators that occur in this expression.
    pub fn generators(&self) -> BTreeSet<Generator> {
        self.terms.keys().flat_map(|m| m.0.iter().map(|(g, _)| g.clone())).collect()
    }

    pub fn max_jet_order(&self) -> usize {
        self.terms.keys().map(Monomial::jet_weight).max().unwrap_or(0)
    }

    /// Formal partial derivative with respect to a single generator.
    pub fn partial(&self, g: &Generator) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            if let Some((e, rest)) = m.reduce(g) {
                out.add_term(rest, c.clone() * S::from_i64(e as i64));
            }
        }
        out
    }

    /// `∂f/∂x^i`, with source atoms `(j, D) ↦ (j, D + e_i)`.
    pub fn partial_base(&self, i: usize, ctx: &JetContext) -> Result<Self> {
        ctx.check_base(i)?;
        let mut out = self.partial(&Generator::X(i));
        for g in self.generators() {
            if let Generator::Source(name, index) = &g {
                let lifted = index.insert(i, ctx)?;
                let d = self.partial(&g);
                out = out + &d * &Self::source(name, lifted);
            }
        }
        Ok(out)
    }

    /// `∂f/∂u^α_I`; jet coordinates with distinct exponent vectors are
    /// independent, sources never depend on the fiber.
    pub fn partial_fiber(&self, alpha: usize, index: &MultiIndex) -> Self {
        self.partial(&Generator::U(alpha, index.clone()))
    }

    /// `D_i f = ∂f/∂x^i + Σ (∂f/∂u^α_I) u^α_{I+i}`.
    pub fn total_derivative(&self, i: usize, ctx: &JetContext) -> Result<Self> {
        let mut out = self.partial_base(i, ctx)?;
        for g in self.generators() {
            if let Generator::U(alpha, index) = &g {
                let lifted = index.insert(i, ctx)?;
                out = out + &self.partial(&g) * &Self::u(*alpha, lifted);
            }
        }
        Ok(out)
    }

    /// Check every generator against the context.
    pub fn validate(&self, ctx: &JetContext) -> Result<()> {
        self.generators().iter().try_for_each(|g| ctx.check_generator(g))
    }
}

impl<S: Scalar> From<S> for Expr<S> {
    fn from(c: S) -> Self {
        Self::constant(c)
    }
}

impl<S: Scalar> Add<&Expr<S>> for &Expr<S> {
    type Output = Expr<S>;

    fn add(self, rhs: &Expr<S>) -> Expr<S> {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl<S: Scalar> Add<&Expr<S>> for Expr<S> {
    type Output = Expr<S>;

    fn add(mut self, rhs: &Expr<S>) -> Expr<S> {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
        self
    }
}

impl<S: Scalar> Add for Expr<S> {
    type Output = Expr<S>;

    fn add(self, rhs: Expr<S>) -> Expr<S> {
        self + &rhs
    }
}

impl<S: Scalar> Neg for &Expr<S> {
    type Output = Expr<S>;

    fn neg(self) -> Expr<S> {
        Expr { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect() }
    }
}

impl<S: Scalar> Neg for Expr<S> {
    type Output = Expr<S>;

    fn neg(self) -> Expr<S> {
        -&self
    }
}

impl<S: Scalar> Sub<&Expr<S>> for &Expr<S> {
    type Output = Expr<S>;

    fn sub(self, rhs: &Expr<S>) -> Expr<S> {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl<S: Scalar> Sub for Expr<S> {
    type Output = Expr<S>;

    fn sub(self, rhs: Expr<S>) -> Expr<S> {
        &self - &rhs
    }
}

impl<S: Scalar> Mul<&Expr<S>> for &Expr<S> {
    type Output = Expr<S>;

    fn mul(self, rhs: &Expr<S>) -> Expr<S> {
        let mut out = Expr::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca.clone() * cb.clone());
            }
        }
        out
    }
}

impl<S: Scalar> Mul for Expr<S> {
    type Output = Expr<S>;

    fn mul(self, rhs: Expr<S>) -> Expr<S> {
        &self * &rhs
    }
}

fn write_scalar_abs<S: Scalar>(f: &mut fmt::Formatter<'_>, c: &S) -> fmt::Result {
    write!(f, "{}", c.abs())
}

impl<S: Scalar> fmt::Display for Expr<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.display_terms().into_iter().enumerate() {
            let neg = c.is_negative();
            match (k, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let unit = c.abs().is_one();
            if m.is_one() {
                write_scalar_abs(f, c)?;
            } else if unit {
                write!(f, "{m}")?;
            } else {
                write_scalar_abs(f, c)?;
                write!(f, "*{m}")?;
            }
        }
        Ok(())
    }
}
