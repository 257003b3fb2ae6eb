//! Seeded random generation of ring elements, corner matrices,
//! combinations, potentials, and double elements for randomized checks.
//!
//! All randomness flows through a ChaCha8 stream seeded from a single
//! `u64`, so every check that reports a seed is exactly reproducible.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::connections::GeneratorMap;
use crate::idempotents::MatrixA;
use crate::lierinehart::{DElement, LComb, LrContext};
use crate::poly::{ratio, Rational};
use crate::ring::{monomial_basis, RingElem, RingRef};

/// A deterministic source of small test data.
pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    /// A small rational with numerator in `-3..=3` and denominator 1 or 2.
    pub fn rational(&mut self) -> Rational {
        let n = self.rng.gen_range(-3i64..=3);
        let d = self.rng.gen_range(1i64..=2);
        ratio(n, d)
    }

    /// A ring element with up to `nterms` monomials of degree at most
    /// `maxdeg` (coefficients may collide or vanish, so the result can have
    /// fewer terms).
    pub fn elem(&mut self, ring: &RingRef, maxdeg: u32, nterms: usize) -> RingElem {
        let basis = monomial_basis(ring, maxdeg);
        let mut acc = RingElem::zero(ring);
        for _ in 0..nterms {
            let m = &basis[self.rng.gen_range(0..basis.len())];
            let c = self.rational();
            let term = crate::poly::RawPoly::from_terms(
                ring.nvars(),
                vec![(m.clone(), c)],
            );
            acc = &acc + &crate::ring::elem(ring, term).expect("term in ring");
        }
        acc
    }

    /// A square matrix with random entries.
    pub fn matrix(&mut self, ring: &RingRef, n: usize, maxdeg: u32) -> MatrixA {
        let mut m = MatrixA::zeros(ring, n, n);
        for i in 0..n {
            for j in 0..n {
                *m.at_mut(i, j) = self.elem(ring, maxdeg, 2);
            }
        }
        m
    }

    /// A random corner endomorphism `phi W phi`.
    pub fn corner(&mut self, phi: &MatrixA, maxdeg: u32) -> MatrixA {
        let w = self.matrix(phi.ring(), phi.nrows(), maxdeg);
        phi.mul(&w).mul(phi)
    }

    /// Random coefficients for a combination over `ngens` generators.
    pub fn combo_coeffs(
        &mut self,
        ring: &RingRef,
        ngens: usize,
        maxdeg: u32,
    ) -> Vec<RingElem> {
        (0..ngens).map(|_| self.elem(ring, maxdeg, 2)).collect()
    }

    /// A random potential: one corner endomorphism per generator.
    pub fn potential(&mut self, phi: &MatrixA, ngens: usize, maxdeg: u32) -> GeneratorMap {
        GeneratorMap::new((0..ngens).map(|_| self.corner(phi, maxdeg)).collect())
    }

    /// A random element of the double: corner endomorphism plus combination.
    pub fn delement(&mut self, ctx: &LrContext, maxdeg: u32) -> DElement {
        DElement::new(
            self.corner(ctx.phi(), maxdeg),
            LComb::new(self.combo_coeffs(ctx.ring(), ctx.ngens(), maxdeg)),
        )
    }
}
