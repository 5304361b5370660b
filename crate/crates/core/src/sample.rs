//! Seeded random expressions, forms, multivectors and endomorphisms for the
//! identity suites and property tests.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::brackets::Endo;
use crate::exterior::{Alternating, Blade, Form, Kind, Multivector, Slot};
use crate::jet::{Expr, Generator, JetContext, Monomial, MultiIndex};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SampleParams {
    /// Terms per coefficient polynomial.
    pub max_terms: usize,
    /// Polynomial degree of coefficients.
    pub coeff_degree: usize,
    /// Largest jet order of coordinates and slots.
    pub jet_order: usize,
    /// Blades per homogeneous form or multivector.
    pub max_blades: usize,
}

impl Default for SampleParams {
    fn default() -> Self {
        Self { max_terms: 3, coeff_degree: 2, jet_order: 2, max_blades: 3 }
    }
}

pub struct Sampler {
    rng: ChaCha8Rng,
    ctx: JetContext,
    params: SampleParams,
}

impl Sampler {
    pub fn new(seed: u64, ctx: JetContext, params: SampleParams) -> Self {
        Self { rng: ChaCha8Rng::seed_from_u64(seed), ctx, params }
    }

    pub fn ctx(&self) -> &JetContext {
        &self.ctx
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    /// Nonzero `p/q` with `|p| ≤ 4`, `q ≤ 3`.
    pub fn rational<S: Scalar>(&mut self) -> S {
        let mut p: i64 = self.rng.gen_range(1..=4);
        if self.rng.gen_bool(0.5) {
            p = -p;
        }
        let q: i64 = self.rng.gen_range(1..=3);
        S::from_ratio(p.into(), q.into())
    }

    pub fn multiindex(&mut self) -> MultiIndex {
        let n = self.ctx.n();
        let order = self.rng.gen_range(0..=self.params.jet_order);
        let idx: Vec<usize> = (0..order).map(|_| self.rng.gen_range(0..n)).collect();
        MultiIndex::from_indices(n, &idx).expect("indices in range")
    }

    pub fn generator(&mut self) -> Generator {
        if self.rng.gen_ratio(1, 4) {
            Generator::X(self.rng.gen_range(0..self.ctx.n()))
        } else {
            Generator::U(self.rng.gen_range(0..self.ctx.m()), self.multiindex())
        }
    }

    pub fn slot(&mut self) -> Slot {
        if self.rng.gen_ratio(1, 3) {
            Slot::Base(self.rng.gen_range(0..self.ctx.n()))
        } else {
            Slot::Fiber(self.rng.gen_range(0..self.ctx.m()), self.multiindex())
        }
    }

    fn polynomial<S: Scalar>(&mut self, mut generator: impl FnMut(&mut Self) -> Generator) -> Expr<S> {
        let terms = self.rng.gen_range(1..=self.params.max_terms);
        let mut out = Expr::zero();
        for _ in 0..terms {
            let degree = self.rng.gen_range(0..=self.params.coeff_degree);
            let powers: Vec<(Generator, u32)> = (0..degree).map(|_| (generator(self), 1)).collect();
            let c = self.rational::<S>();
            out = out + Expr::term(c, Monomial::from_powers(powers));
        }
        out
    }

    /// Polynomial in base and jet coordinates.
    pub fn expr<S: Scalar>(&mut self) -> Expr<S> {
        self.polynomial(|s| s.generator())
    }

    /// Polynomial in the undifferentiated fields `u^α` only.
    pub fn field_function<S: Scalar>(&mut self, max_degree: usize) -> Expr<S> {
        let n = self.ctx.n();
        let m = self.ctx.m();
        let terms = self.rng.gen_range(1..=self.params.max_terms);
        let mut out = Expr::zero();
        for _ in 0..terms {
            let degree = self.rng.gen_range(1..=max_degree);
            let powers: Vec<(Generator, u32)> =
                (0..degree).map(|_| (Generator::U(self.rng.gen_range(0..m), MultiIndex::zero(n)), 1)).collect();
            let c = self.rational::<S>();
            out = out + Expr::term(c, Monomial::from_powers(powers));
        }
        out
    }

    pub fn blade(&mut self, degree: usize) -> Blade {
        for _ in 0..64 {
            let slots: Vec<Slot> = (0..degree).map(|_| self.slot()).collect();
            if let Some((_, b)) = Blade::from_slots(slots) {
                return b;
            }
        }
        // Small contexts: fall back to distinct base slots and low jets.
        let mut pool: Vec<Slot> = (0..self.ctx.n()).map(Slot::Base).collect();
        for a in 0..self.ctx.m() {
            for order in 0..=self.params.jet_order {
                pool.extend(self.ctx.multiindices_of_order(order).into_iter().map(|i| Slot::Fiber(a, i)));
            }
        }
        pool.shuffle(&mut self.rng);
        Blade::from_slots(pool.into_iter().take(degree)).expect("distinct slots").1
    }

    fn alternating<S: Scalar, K: Kind>(&mut self, degree: usize) -> Alternating<S, K> {
        let blades = self.rng.gen_range(1..=self.params.max_blades);
        let mut out = Alternating::zero();
        for _ in 0..blades {
            let b = self.blade(degree);
            let c = self.expr::<S>();
            out = out + Alternating::term(c, b);
        }
        out
    }

    pub fn form<S: Scalar>(&mut self, degree: usize) -> Form<S> {
        self.alternating(degree)
    }

    pub fn multivector<S: Scalar>(&mut self, degree: usize) -> Multivector<S> {
        self.alternating(degree)
    }

    /// Sum of up to two homogeneous forms of degree `≤ max_degree`.
    pub fn mixed_form<S: Scalar>(&mut self, max_degree: usize) -> Form<S> {
        let a = self.rng.gen_range(0..=max_degree);
        let b = self.rng.gen_range(0..=max_degree);
        self.form(a) + self.form(b)
    }

    /// Vector field `Σ f ∂`.
    pub fn vector_field<S: Scalar>(&mut self) -> Multivector<S> {
        self.multivector(1)
    }

    pub fn endo<S: Scalar>(&mut self, depth: usize) -> Endo<S> {
        if depth == 0 || self.rng.gen_bool(0.5) {
            return match self.rng.gen_range(0..5) {
                0 => Endo::identity(),
                1 => Endo::d_vertical(),
                2 | 3 => {
                    let d = self.rng.gen_range(0..=2);
                    Endo::insertion(&self.multivector(d)).expect("homogeneous")
                }
                _ => {
                    let d = self.rng.gen_range(0..=1);
                    Endo::multiplication(&self.form(d)).expect("homogeneous")
                }
            };
        }
        let a = self.endo(depth - 1);
        let b = self.endo(depth - 1);
        match self.rng.gen_range(0..3) {
            0 => a.compose(&b),
            1 => a.commutator(&b),
            _ => {
                let c = self.rational::<S>();
                a.scale(c)
            }
        }
    }
}

/// Seed for case `k` of a run seeded with `seed`.
pub fn case_seed(seed: u64, k: usize) -> u64 {
    seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(k as u64).rotate_left(17) ^ 0x2545_f491_4f6c_dd1d
}
