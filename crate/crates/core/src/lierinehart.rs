//! The Lie-Rinehart double `D = End_A(E) (+) L` attached to a connection,
//! together with its bracket, differentials, and the equivalence / torsor
//! calculus on connection pairs.
//!
//! Elements of `L` are handled at presentation level: a combination is a
//! coefficient vector over the declared tangent generators.  Brackets of
//! combinations are computed from a structure table (one fixed expansion of
//! every generator bracket over the generators), extended by the
//! Lie-Rinehart rule.  Coefficient vectors representing the same derivation
//! can differ by module relations, so "zero" for the `L`-part always means
//! "zero as a derivation", never "zero coefficients".
//!
//! Endomorphism values (`End_A(E)`) are corner matrices: `g = phi g phi`.
//! All adjoint actions are evaluated by operator composition on the
//! standard basis columns; that composition semantics is the authority, and
//! algebraic formulas are checked against it in the tests.

use crate::connections::{
    bracket_expansion, curvature_matrix, lifted_connection_apply, GeneratorMap,
};
use crate::error::Error;
use crate::idempotents::{verify_idempotent, MatrixA, ModuleVector};
use crate::ring::{RingElem, RingRef};
use crate::vectorfields::{combination, Derivation};

/// Values indexed by generator pairs `(i, j)` with `i < j`, extended
/// antisymmetrically where evaluation needs it.
#[derive(Clone, Debug, PartialEq)]
pub struct PairTable<T> {
    n: usize,
    items: Vec<T>,
}

impl<T> PairTable<T> {
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut items = Vec::with_capacity(n * (n - 1) / 2);
        for i in 0..n {
            for j in (i + 1)..n {
                items.push(f(i, j));
            }
        }
        PairTable { n, items }
    }

    pub fn new(n: usize, items: Vec<T>) -> Self {
        assert_eq!(items.len(), n * (n - 1) / 2, "pair count mismatch");
        PairTable { n, items }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn index(&self, i: usize, j: usize) -> usize {
        assert!(i < j && j < self.n, "pair index out of range");
        // Pairs are stored row by row: (0,1), (0,2), ..., (1,2), ...
        i * self.n - i * (i + 1) / 2 + (j - i - 1)
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.items[self.index(i, j)]
    }

    pub fn items(&self) -> &[T] {
        &self.items
    }

    pub fn iter_pairs(&self) -> impl Iterator<Item = (usize, usize, &T)> {
        let n = self.n;
        (0..n)
            .flat_map(move |i| ((i + 1)..n).map(move |j| (i, j)))
            .zip(self.items.iter())
            .map(|((i, j), t)| (i, j, t))
    }

    pub fn map<U>(&self, f: impl Fn(&T) -> U) -> PairTable<U> {
        PairTable { n: self.n, items: self.items.iter().map(f).collect() }
    }
}

/// A coefficient vector over the declared generators, representing the
/// tangent-module element `sum_i coeffs_i * D_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct LComb {
    pub coeffs: Vec<RingElem>,
}

impl LComb {
    pub fn new(coeffs: Vec<RingElem>) -> Self {
        LComb { coeffs }
    }

    pub fn zero(ring: &RingRef, ngens: usize) -> Self {
        LComb { coeffs: (0..ngens).map(|_| RingElem::zero(ring)).collect() }
    }

    /// The `i`-th generator as a combination.
    pub fn generator(ring: &RingRef, ngens: usize, i: usize) -> Self {
        let mut c = LComb::zero(ring, ngens);
        c.coeffs[i] = RingElem::one(ring);
        c
    }

    pub fn add(&self, other: &LComb) -> LComb {
        LComb {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &LComb) -> LComb {
        LComb {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, a: &RingElem) -> LComb {
        LComb { coeffs: self.coeffs.iter().map(|c| a * c).collect() }
    }
}

/// Shared context for double-bracket computations: the idempotent, the
/// declared generators, a fixed structure table of bracket expansions, the
/// curvature values on generator pairs, and an optional potential.
#[derive(Clone, Debug)]
pub struct LrContext {
    phi: MatrixA,
    gens: Vec<Derivation>,
    structure: PairTable<Vec<RingElem>>,
    curvature_pairs: PairTable<MatrixA>,
    potential: Option<GeneratorMap>,
    maxdeg: u32,
}

impl LrContext {
    /// Builds a context for the unshifted lifted connection.  Fails when the
    /// matrix is not idempotent or when some generator bracket has no
    /// expansion over the generators with coefficients of degree at most
    /// `maxdeg`.
    pub fn new(phi: &MatrixA, gens: &[Derivation], maxdeg: u32) -> Result<Self, Error> {
        if !verify_idempotent(phi) {
            return Err(Error::NotIdempotent);
        }
        if gens.is_empty() {
            return Err(Error::Invalid("empty generator list".into()));
        }
        let n = gens.len();
        let mut items = Vec::with_capacity(n * (n - 1) / 2);
        for i in 0..n {
            for j in (i + 1)..n {
                items.push(bracket_expansion(gens, i, j, maxdeg)?);
            }
        }
        let structure = PairTable::new(n, items);
        let curvature_pairs =
            PairTable::from_fn(n, |i, j| curvature_matrix(phi, &gens[i], &gens[j]));
        Ok(LrContext {
            phi: phi.clone(),
            gens: gens.to_vec(),
            structure,
            curvature_pairs,
            potential: None,
            maxdeg,
        })
    }

    /// Shifts the context's connection by a potential with corner values.
    /// Curvature pair values are recomputed by operator composition of the
    /// shifted connection, which is the authoritative semantics.
    pub fn with_potential(&self, p: GeneratorMap) -> Result<Self, Error> {
        if p.len() != self.gens.len() {
            return Err(Error::Dimension(format!(
                "potential has {} values for {} generators",
                p.len(),
                self.gens.len()
            )));
        }
        for v in &p.values {
            if !is_corner(&self.phi, v) {
                return Err(Error::Invalid(
                    "potential value is not a corner endomorphism (phi T phi != T)".into(),
                ));
            }
        }
        let total = match &self.potential {
            Some(q) => q.add(&p),
            None => p,
        };
        let mut ctx = self.clone();
        ctx.potential = Some(total);
        ctx.curvature_pairs = PairTable::from_fn(self.gens.len(), |i, j| {
            ctx.shifted_curvature_pair(i, j)
        });
        Ok(ctx)
    }

    fn shifted_curvature_pair(&self, i: usize, j: usize) -> MatrixA {
        let ring = self.phi.ring();
        let n = self.phi.nrows();
        let cij = self.structure.get(i, j);
        let bracket_der = self.gens[i].bracket(&self.gens[j]);
        let p = self.potential.as_ref().expect("potential present");
        let p_cij = p.eval(cij);
        let cols: Vec<ModuleVector> = (0..n)
            .map(|k| {
                let e = ModuleVector::basis(ring, n, k);
                let nyj = self.apply_gen(j, &e);
                let a = self.apply_gen(i, &nyj);
                let nxi = self.apply_gen(i, &e);
                let b = self.apply_gen(j, &nxi);
                let c = lifted_connection_apply(&self.phi, &bracket_der, &e)
                    .add(&p_cij.mul_vec(&e));
                a.sub(&b).sub(&c)
            })
            .collect();
        MatrixA::from_cols(ring, &cols)
    }

    fn apply_gen(&self, i: usize, v: &ModuleVector) -> ModuleVector {
        let base = lifted_connection_apply(&self.phi, &self.gens[i], v);
        match &self.potential {
            Some(p) => base.add(&p.values[i].mul_vec(v)),
            None => base,
        }
    }

    pub fn phi(&self) -> &MatrixA {
        &self.phi
    }

    pub fn gens(&self) -> &[Derivation] {
        &self.gens
    }

    pub fn ngens(&self) -> usize {
        self.gens.len()
    }

    pub fn ring(&self) -> &RingRef {
        self.phi.ring()
    }

    pub fn maxdeg(&self) -> u32 {
        self.maxdeg
    }

    pub fn potential(&self) -> Option<&GeneratorMap> {
        self.potential.as_ref()
    }

    pub fn structure(&self) -> &PairTable<Vec<RingElem>> {
        &self.structure
    }

    pub fn curvature_pair(&self, i: usize, j: usize) -> &MatrixA {
        self.curvature_pairs.get(i, j)
    }

    /// The honest derivation represented by a combination.
    pub fn derivation_of(&self, c: &LComb) -> Derivation {
        combination(&self.gens, &c.coeffs)
    }

    /// Anchor action of a combination on a ring element.
    pub fn anchor(&self, c: &LComb, a: &RingElem) -> RingElem {
        self.derivation_of(c).apply(a)
    }

    /// The (possibly shifted) connection applied along a combination.
    pub fn connection_apply(&self, c: &LComb, v: &ModuleVector) -> ModuleVector {
        let der = self.derivation_of(c);
        let mut out = lifted_connection_apply(&self.phi, &der, v);
        if let Some(p) = &self.potential {
            out = out.add(&p.eval(&c.coeffs).mul_vec(v));
        }
        out
    }

    /// Adjoint action `ad(x)(g) = [nabla_x, g]` by operator composition.
    pub fn ad(&self, c: &LComb, g: &MatrixA) -> MatrixA {
        let ring = self.phi.ring();
        let n = self.phi.nrows();
        let cols: Vec<ModuleVector> = (0..n)
            .map(|k| {
                let e = ModuleVector::basis(ring, n, k);
                let a = self.connection_apply(c, &g.mul_vec(&e));
                let b = g.mul_vec(&self.connection_apply(c, &e));
                a.sub(&b)
            })
            .collect();
        MatrixA::from_cols(ring, &cols)
    }

    /// Bracket of two combinations: structure part plus anchor derivatives
    /// of the coefficients.
    pub fn bracket_combo(&self, a: &LComb, b: &LComb) -> LComb {
        let x = self.derivation_of(a);
        let y = self.derivation_of(b);
        let mut coeffs: Vec<RingElem> = (0..self.ngens())
            .map(|k| &x.apply(&b.coeffs[k]) - &y.apply(&a.coeffs[k]))
            .collect();
        for (i, j, cij) in self.structure.iter_pairs() {
            let w = &(&a.coeffs[i] * &b.coeffs[j]) - &(&a.coeffs[j] * &b.coeffs[i]);
            if w.is_zero() {
                continue;
            }
            for (k, ck) in cij.iter().enumerate() {
                coeffs[k] = &coeffs[k] + &(&w * ck);
            }
        }
        LComb::new(coeffs)
    }

    /// Curvature on combinations, by A-bilinear extension of the stored
    /// generator-pair values.
    pub fn curvature(&self, a: &LComb, b: &LComb) -> MatrixA {
        let ring = self.phi.ring();
        let mut acc = MatrixA::zeros(ring, self.phi.nrows(), self.phi.ncols());
        for (i, j, rij) in self.curvature_pairs.iter_pairs() {
            let w = &(&a.coeffs[i] * &b.coeffs[j]) - &(&a.coeffs[j] * &b.coeffs[i]);
            if !w.is_zero() {
                acc = acc.add(&rij.scale(&w));
            }
        }
        acc
    }

    /// The corner spanning set `phi E_kl phi`.
    pub fn corner_spanning_set(&self) -> Vec<MatrixA> {
        corner_spanning_set(&self.phi)
    }
}

/// Whether `g` lies in the corner: `phi g phi == g`.
pub fn is_corner(phi: &MatrixA, g: &MatrixA) -> bool {
    phi.mul(g).mul(phi) == *g
}

/// The corner spanning set `phi E_kl phi` for all matrix units.
pub fn corner_spanning_set(phi: &MatrixA) -> Vec<MatrixA> {
    let ring = phi.ring();
    let n = phi.nrows();
    let mut out = Vec::with_capacity(n * n);
    for k in 0..n {
        for l in 0..n {
            let mut e = MatrixA::zeros(ring, n, n);
            *e.at_mut(k, l) = RingElem::one(ring);
            out.push(phi.mul(&e).mul(phi));
        }
    }
    out
}

/// An element of the double `End_A(E) (+) L`: an endomorphism and a
/// tangent combination.
#[derive(Clone, Debug, PartialEq)]
pub struct DElement {
    pub endo: MatrixA,
    pub vec: LComb,
}

impl DElement {
    pub fn new(endo: MatrixA, vec: LComb) -> Self {
        DElement { endo, vec }
    }

    pub fn zero(ctx: &LrContext) -> Self {
        DElement {
            endo: MatrixA::zeros(ctx.ring(), ctx.phi().nrows(), ctx.phi().ncols()),
            vec: LComb::zero(ctx.ring(), ctx.ngens()),
        }
    }

    pub fn add(&self, other: &DElement) -> DElement {
        DElement { endo: self.endo.add(&other.endo), vec: self.vec.add(&other.vec) }
    }

    pub fn sub(&self, other: &DElement) -> DElement {
        DElement { endo: self.endo.sub(&other.endo), vec: self.vec.sub(&other.vec) }
    }

    pub fn scale(&self, a: &RingElem) -> DElement {
        DElement { endo: self.endo.scale(a), vec: self.vec.scale(a) }
    }

    /// Zero in the double: the endomorphism vanishes and the combination
    /// represents the zero derivation.  Coefficients themselves may be a
    /// nonzero module relation.
    pub fn is_zero(&self, ctx: &LrContext) -> bool {
        self.endo.is_zero() && ctx.derivation_of(&self.vec).is_zero()
    }
}

/// The double bracket
/// `[(f, x), (g, y)] = ([f, g] + ad(x)(g) - ad(y)(f) + R(x, y), [x, y])`.
pub fn d_bracket(ctx: &LrContext, z1: &DElement, z2: &DElement) -> DElement {
    let x = &z1.vec;
    let y = &z2.vec;
    let endo = z1
        .endo
        .commutator(&z2.endo)
        .add(&ctx.ad(x, &z2.endo))
        .sub(&ctx.ad(y, &z1.endo))
        .add(&ctx.curvature(x, y));
    let vec = ctx.bracket_combo(x, y);
    DElement { endo, vec }
}

/// Jacobi residual `[[z1,z2],z3] + [[z2,z3],z1] + [[z3,z1],z2]`.
pub fn jacobi_residual(
    ctx: &LrContext,
    z1: &DElement,
    z2: &DElement,
    z3: &DElement,
) -> DElement {
    let a = d_bracket(ctx, &d_bracket(ctx, z1, z2), z3);
    let b = d_bracket(ctx, &d_bracket(ctx, z2, z3), z1);
    let c = d_bracket(ctx, &d_bracket(ctx, z3, z1), z2);
    a.add(&b).add(&c)
}

/// Leibniz residual `[z, a w] - a [z, w] - alpha(z)(a) w`.
pub fn leibniz_residual(
    ctx: &LrContext,
    z: &DElement,
    a: &RingElem,
    w: &DElement,
) -> DElement {
    let lhs = d_bracket(ctx, z, &w.scale(a));
    let mid = d_bracket(ctx, z, w).scale(a);
    let anchor = ctx.anchor(&z.vec, a);
    lhs.sub(&mid).sub(&w.scale(&anchor))
}

/// The curvature-style cocycle of a potential:
/// `gamma(P)(x, y) = [s(x), s(y)] - s([x, y])` for the section
/// `s(x) = (P(x), x)`.  Its `L`-part vanishes identically and its
/// endomorphism part is the potential-shifted curvature.
pub fn gamma(ctx: &LrContext, p: &GeneratorMap, i: usize, j: usize) -> DElement {
    let ring = ctx.ring();
    let zi = DElement::new(
        p.values[i].clone(),
        LComb::generator(ring, ctx.ngens(), i),
    );
    let zj = DElement::new(
        p.values[j].clone(),
        LComb::generator(ring, ctx.ngens(), j),
    );
    let br = d_bracket(ctx, &zi, &zj);
    let s_of_bracket = p.eval(&br.vec.coeffs);
    DElement::new(br.endo.sub(&s_of_bracket), LComb::zero(ring, ctx.ngens()))
}

/// The twist map `(f, x) -> (f - P(x), x)` between the doubles of a
/// connection and its potential shift.
pub fn iso_map(p: &GeneratorMap, z: &DElement) -> DElement {
    DElement::new(z.endo.sub(&p.eval(&z.vec.coeffs)), z.vec.clone())
}

/// Residual of the bracket-intertwining property of [`iso_map`]:
/// `iso([z1, z2]) - [iso(z1), iso(z2)]` where the left bracket is taken in
/// `ctx` and the right one in `ctx` shifted by `p`.
pub fn iso_bracket_residual(
    ctx: &LrContext,
    p: &GeneratorMap,
    z1: &DElement,
    z2: &DElement,
) -> Result<DElement, Error> {
    let shifted = ctx.with_potential(p.clone())?;
    let lhs = iso_map(p, &d_bracket(ctx, z1, z2));
    let rhs = d_bracket(&shifted, &iso_map(p, z1), &iso_map(p, z2));
    Ok(lhs.sub(&rhs))
}

// ---------------------------------------------------------------------------
// Differentials
// ---------------------------------------------------------------------------

/// `d0` on ring-valued cochains: `d0(a)(x) = alpha(x)(a)`.
pub fn d0_scalar(ctx: &LrContext, a: &RingElem, x: &LComb) -> RingElem {
    ctx.anchor(x, a)
}

/// `d1` on ring-valued 1-cochains (values on generators, extended
/// A-linearly): `d1(b)(x,y) = x(b(y)) - y(b(x)) - b([x,y])`.
pub fn d1_scalar(
    ctx: &LrContext,
    b: &[RingElem],
    x: &LComb,
    y: &LComb,
) -> RingElem {
    let bx = eval1_scalar(b, x);
    let by = eval1_scalar(b, y);
    let bracket = ctx.bracket_combo(x, y);
    &(&ctx.anchor(x, &by) - &ctx.anchor(y, &bx)) - &eval1_scalar(b, &bracket)
}

/// `d2` on ring-valued 2-cochains:
/// `d2(f)(x,y,z) = x f(y,z) - y f(x,z) + z f(x,y)
///                 - f([x,y],z) + f([x,z],y) - f([y,z],x)`.
pub fn d2_scalar(
    ctx: &LrContext,
    f: &PairTable<RingElem>,
    x: &LComb,
    y: &LComb,
    z: &LComb,
) -> RingElem {
    let fyz = eval2_scalar(f, y, z);
    let fxz = eval2_scalar(f, x, z);
    let fxy = eval2_scalar(f, x, y);
    let bxy = ctx.bracket_combo(x, y);
    let bxz = ctx.bracket_combo(x, z);
    let byz = ctx.bracket_combo(y, z);
    let act = &(&ctx.anchor(x, &fyz) - &ctx.anchor(y, &fxz)) + &ctx.anchor(z, &fxy);
    let subs = &(&eval2_scalar(f, &bxy, z) - &eval2_scalar(f, &bxz, y))
        + &eval2_scalar(f, &byz, x);
    &act - &subs
}

fn eval1_scalar(b: &[RingElem], x: &LComb) -> RingElem {
    let mut acc = RingElem::zero(b[0].ring());
    for (c, v) in x.coeffs.iter().zip(b) {
        acc = &acc + &(c * v);
    }
    acc
}

fn eval2_scalar(f: &PairTable<RingElem>, x: &LComb, y: &LComb) -> RingElem {
    let ring = f.items()[0].ring().clone();
    let mut acc = RingElem::zero(&ring);
    for (i, j, fij) in f.iter_pairs() {
        let w = &(&x.coeffs[i] * &y.coeffs[j]) - &(&x.coeffs[j] * &y.coeffs[i]);
        if !w.is_zero() {
            acc = &acc + &(&w * fij);
        }
    }
    acc
}

/// `d0` on endomorphism-valued cochains with the adjoint action:
/// `d0(w)(x) = ad(x)(w)`.
pub fn d0_endo(ctx: &LrContext, w: &MatrixA, x: &LComb) -> MatrixA {
    ctx.ad(x, w)
}

/// `d1` on endomorphism-valued 1-cochains:
/// `d1(b)(x,y) = ad(x)(b(y)) - ad(y)(b(x)) - b([x,y])`.
pub fn d1_endo(
    ctx: &LrContext,
    b: &GeneratorMap,
    x: &LComb,
    y: &LComb,
) -> MatrixA {
    let bx = b.eval(&x.coeffs);
    let by = b.eval(&y.coeffs);
    let bracket = ctx.bracket_combo(x, y);
    ctx.ad(x, &by)
        .sub(&ctx.ad(y, &bx))
        .sub(&b.eval(&bracket.coeffs))
}

/// `d2` on endomorphism-valued 2-cochains, same shape as [`d2_scalar`] with
/// the adjoint action.
pub fn d2_endo(
    ctx: &LrContext,
    f: &PairTable<MatrixA>,
    x: &LComb,
    y: &LComb,
    z: &LComb,
) -> MatrixA {
    let fyz = eval2_endo(ctx, f, y, z);
    let fxz = eval2_endo(ctx, f, x, z);
    let fxy = eval2_endo(ctx, f, x, y);
    let bxy = ctx.bracket_combo(x, y);
    let bxz = ctx.bracket_combo(x, z);
    let byz = ctx.bracket_combo(y, z);
    let act = ctx
        .ad(x, &fyz)
        .sub(&ctx.ad(y, &fxz))
        .add(&ctx.ad(z, &fxy));
    let subs = eval2_endo(ctx, f, &bxy, z)
        .sub(&eval2_endo(ctx, f, &bxz, y))
        .add(&eval2_endo(ctx, f, &byz, x));
    act.sub(&subs)
}

fn eval2_endo(
    ctx: &LrContext,
    f: &PairTable<MatrixA>,
    x: &LComb,
    y: &LComb,
) -> MatrixA {
    let mut acc = MatrixA::zeros(ctx.ring(), ctx.phi().nrows(), ctx.phi().ncols());
    for (i, j, fij) in f.iter_pairs() {
        let w = &(&x.coeffs[i] * &y.coeffs[j]) - &(&x.coeffs[j] * &y.coeffs[i]);
        if !w.is_zero() {
            acc = acc.add(&fij.scale(&w));
        }
    }
    acc
}

// ---------------------------------------------------------------------------
// Connection pairs, equivalence transforms, and the torsor action
// ---------------------------------------------------------------------------

/// A pair `(nabla, psi)`: a connection described as the context connection
/// shifted by an accumulated endomorphism-valued 1-cochain, together with a
/// 2-cochain of endomorphism values on generator pairs.
#[derive(Clone, Debug)]
pub struct ConnectionPair {
    ctx: LrContext,
    b_total: GeneratorMap,
    psi: PairTable<MatrixA>,
}

impl ConnectionPair {
    pub fn ctx(&self) -> &LrContext {
        &self.ctx
    }

    pub fn b_total(&self) -> &GeneratorMap {
        &self.b_total
    }

    pub fn psi(&self) -> &PairTable<MatrixA> {
        &self.psi
    }

    /// The pair's connection acting on an endomorphism along generator `i`:
    /// the context adjoint shifted by the accumulated 1-cochain.
    fn nabla_end(&self, i: usize, g: &MatrixA) -> MatrixA {
        let ring = self.ctx.ring();
        let ei = LComb::generator(ring, self.ctx.ngens(), i);
        self.ctx.ad(&ei, g).add(&self.b_total.values[i].commutator(g))
    }
}

/// The canonical pair of the context connection: zero shift and the
/// curvature values on generator pairs.
pub fn canonical_pair(ctx: &LrContext) -> ConnectionPair {
    let psi = PairTable::from_fn(ctx.ngens(), |i, j| ctx.curvature_pair(i, j).clone());
    ConnectionPair {
        b_total: GeneratorMap::zero_like(ctx.phi(), ctx.ngens()),
        psi,
        ctx: ctx.clone(),
    }
}

/// Applies the equivalence move determined by an endomorphism-valued
/// 1-cochain `b` (corner values required):
///
/// `nabla' = nabla + [b, -]`, and
/// `psi'(x,y) = psi(x,y) + d1_nabla(b)(x,y) + [b(x), b(y)]`
///
/// where `d1` is taken relative to the pair's current connection.
pub fn equivalence_transform(
    pair: &ConnectionPair,
    b: &GeneratorMap,
) -> Result<ConnectionPair, Error> {
    let ctx = &pair.ctx;
    if b.len() != ctx.ngens() {
        return Err(Error::Dimension(format!(
            "cochain has {} values for {} generators",
            b.len(),
            ctx.ngens()
        )));
    }
    for v in &b.values {
        if !is_corner(ctx.phi(), v) {
            return Err(Error::Invalid(
                "transform value is not a corner endomorphism".into(),
            ));
        }
    }
    let psi = PairTable::from_fn(ctx.ngens(), |i, j| {
        let cij = ctx.structure().get(i, j);
        let d1 = pair
            .nabla_end(i, &b.values[j])
            .sub(&pair.nabla_end(j, &b.values[i]))
            .sub(&b.eval(cij));
        pair.psi
            .get(i, j)
            .add(&d1)
            .add(&b.values[i].commutator(&b.values[j]))
    });
    Ok(ConnectionPair {
        ctx: ctx.clone(),
        b_total: pair.b_total.add(b),
        psi,
    })
}

/// The move induced by choosing a different section of the double: by
/// construction it acts on pairs exactly as [`equivalence_transform`].
pub fn section_pair(
    pair: &ConnectionPair,
    b: &GeneratorMap,
) -> Result<ConnectionPair, Error> {
    equivalence_transform(pair, b)
}

/// Acts on the pair by a central 2-cochain of ring scalars: adds
/// `rho_ij * phi` to each `psi` value and leaves the connection untouched.
pub fn torsor_act(pair: &ConnectionPair, rho: &PairTable<RingElem>) -> ConnectionPair {
    assert_eq!(rho.n(), pair.ctx.ngens(), "cochain size mismatch");
    let phi = pair.ctx.phi().clone();
    let psi = PairTable::from_fn(pair.ctx.ngens(), |i, j| {
        pair.psi.get(i, j).add(&phi.scale(rho.get(i, j)))
    });
    ConnectionPair { ctx: pair.ctx.clone(), b_total: pair.b_total.clone(), psi }
}

/// Validates that every matrix in the table is a ring multiple of the
/// idempotent (a central endomorphism) with scalar of degree at most
/// `maxdeg`, then acts by the recovered scalars.
pub fn torsor_act_matrices(
    pair: &ConnectionPair,
    mats: &PairTable<MatrixA>,
    maxdeg: u32,
) -> Result<ConnectionPair, Error> {
    use crate::ansatz::{solve_bounded, AEquation, ColOp};
    let ctx = &pair.ctx;
    let phi = ctx.phi();
    let ring = ctx.ring();
    let mut scalars = Vec::new();
    for (_, _, m) in mats.iter_pairs() {
        let eqs: Vec<AEquation> = (0..phi.nrows())
            .flat_map(|a| {
                (0..phi.ncols()).map(move |b| AEquation {
                    terms: vec![(0, ColOp::Mul(phi.at(a, b).clone()))],
                    rhs: m.at(a, b).clone(),
                })
            })
            .collect();
        match solve_bounded(ring, &[maxdeg], &eqs) {
            Some(sol) => scalars.push(sol.into_iter().next().expect("one unknown")),
            None => return Err(Error::NotCentral(maxdeg)),
        }
    }
    let rho = PairTable::new(ctx.ngens(), scalars);
    Ok(torsor_act(pair, &rho))
}

/// Compares two pairs over the same context: the connections must agree as
/// operators on the corner (their shift difference must be central), and
/// the 2-cochain values must agree exactly.
pub fn pairs_equal(p1: &ConnectionPair, p2: &ConnectionPair) -> bool {
    let ctx = &p1.ctx;
    assert_eq!(
        ctx.ngens(),
        p2.ctx.ngens(),
        "pairs over different generator lists"
    );
    assert!(
        ctx.phi() == p2.ctx.phi(),
        "pairs over different idempotents"
    );
    let span = ctx.corner_spanning_set();
    for i in 0..ctx.ngens() {
        let d = p1.b_total.values[i].sub(&p2.b_total.values[i]);
        for t in &span {
            if !d.commutator(t).is_zero() {
                return false;
            }
        }
    }
    for ((_, _, a), (_, _, b)) in p1.psi.iter_pairs().zip(p2.psi.iter_pairs()) {
        if a != b {
            return false;
        }
    }
    true
}

/// Scalar `d1` of a ring-valued 1-cochain on all generator pairs, packaged
/// as the central 2-cochain it defines.
pub fn coboundary_scalar(ctx: &LrContext, c: &[RingElem]) -> PairTable<RingElem> {
    PairTable::from_fn(ctx.ngens(), |i, j| {
        let x = LComb::generator(ctx.ring(), ctx.ngens(), i);
        let y = LComb::generator(ctx.ring(), ctx.ngens(), j);
        d1_scalar(ctx, c, &x, &y)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::connections::curvature_with_potential;
    use crate::presets::preset_sphere;
    use crate::sampling::Sampler;

    fn sphere_ctx() -> LrContext {
        let p = preset_sphere().unwrap();
        LrContext::new(&p.idempotent, &p.generators, 4).unwrap()
    }

    #[test]
    fn structure_table_for_the_sphere_is_constant() {
        // [D1,D2] = D3, [D1,D3] = -D2, [D2,D3] = D1, found at degree zero.
        let ctx = sphere_ctx();
        let show = |i: usize, j: usize| -> Vec<String> {
            ctx.structure().get(i, j).iter().map(|c| c.display()).collect()
        };
        assert_eq!(show(0, 1), vec!["0", "0", "1"]);
        assert_eq!(show(0, 2), vec!["0", "-1", "0"]);
        assert_eq!(show(1, 2), vec!["1", "0", "0"]);
    }

    #[test]
    fn jacobi_residual_vanishes_on_random_triples() {
        let ctx = sphere_ctx();
        let mut s = Sampler::new(17);
        for _ in 0..6 {
            let z1 = s.delement(&ctx, 1);
            let z2 = s.delement(&ctx, 1);
            let z3 = s.delement(&ctx, 1);
            let r = jacobi_residual(&ctx, &z1, &z2, &z3);
            assert!(r.is_zero(&ctx));
        }
    }

    #[test]
    fn jacobi_residual_vanishes_with_a_potential() {
        let ctx = sphere_ctx();
        let mut s = Sampler::new(23);
        let p = s.potential(ctx.phi(), ctx.ngens(), 1);
        let shifted = ctx.with_potential(p).unwrap();
        for _ in 0..3 {
            let z1 = s.delement(&shifted, 1);
            let z2 = s.delement(&shifted, 1);
            let z3 = s.delement(&shifted, 1);
            let r = jacobi_residual(&shifted, &z1, &z2, &z3);
            assert!(r.is_zero(&shifted));
        }
    }

    #[test]
    fn leibniz_residual_vanishes() {
        let ctx = sphere_ctx();
        let mut s = Sampler::new(5);
        for _ in 0..6 {
            let z = s.delement(&ctx, 1);
            let w = s.delement(&ctx, 1);
            let a = s.elem(ctx.ring(), 2, 3);
            let r = leibniz_residual(&ctx, &z, &a, &w);
            assert!(r.is_zero(&ctx));
        }
    }

    #[test]
    fn gamma_matches_the_shifted_curvature_formula() {
        let ctx = sphere_ctx();
        let p = preset_sphere().unwrap();
        let mut s = Sampler::new(31);
        for _ in 0..4 {
            let pot = s.potential(ctx.phi(), ctx.ngens(), 1);
            for (i, j) in [(0usize, 1usize), (0, 2), (1, 2)] {
                let g = gamma(&ctx, &pot, i, j);
                let direct = curvature_with_potential(
                    &p.idempotent,
                    &p.generators,
                    &pot,
                    i,
                    j,
                    4,
                )
                .unwrap();
                assert!(ctx.derivation_of(&g.vec).is_zero());
                assert_eq!(g.endo, direct);
            }
        }
    }

    #[test]
    fn gamma_vanishes_for_identity_idempotent_and_zero_potential() {
        let p = preset_sphere().unwrap();
        let id = MatrixA::identity(&p.ring, 3);
        let ctx = LrContext::new(&id, &p.generators, 4).unwrap();
        let zero_pot = GeneratorMap::zero_like(&id, 3);
        for (i, j) in [(0usize, 1usize), (0, 2), (1, 2)] {
            let g = gamma(&ctx, &zero_pot, i, j);
            assert!(g.is_zero(&ctx));
        }
    }

    #[test]
    fn iso_intertwines_brackets() {
        let ctx = sphere_ctx();
        let mut s = Sampler::new(47);
        for _ in 0..4 {
            let pot = s.potential(ctx.phi(), ctx.ngens(), 1);
            let z1 = s.delement(&ctx, 1);
            let z2 = s.delement(&ctx, 1);
            let r = iso_bracket_residual(&ctx, &pot, &z1, &z2).unwrap();
            assert!(r.is_zero(&ctx));
        }
    }

    #[test]
    fn iso_intertwines_brackets_over_a_shifted_base() {
        let ctx = sphere_ctx();
        let mut s = Sampler::new(53);
        let q = s.potential(ctx.phi(), ctx.ngens(), 1);
        let base = ctx.with_potential(q).unwrap();
        let pot = s.potential(ctx.phi(), ctx.ngens(), 1);
        let z1 = s.delement(&base, 1);
        let z2 = s.delement(&base, 1);
        let r = iso_bracket_residual(&base, &pot, &z1, &z2).unwrap();
        assert!(r.is_zero(&base));
    }

    #[test]
    fn scalar_differentials_compose_to_zero() {
        let ctx = sphere_ctx();
        let mut s = Sampler::new(7);
        let ring = ctx.ring().clone();
        // d1 after d0 vanishes identically.
        let a = s.elem(&ring, 2, 3);
        let d0a: Vec<RingElem> = (0..3)
            .map(|i| d0_scalar(&ctx, &a, &LComb::generator(&ring, 3, i)))
            .collect();
        for (i, j) in [(0usize, 1usize), (0, 2), (1, 2)] {
            let x = LComb::generator(&ring, 3, i);
            let y = LComb::generator(&ring, 3, j);
            assert!(d1_scalar(&ctx, &d0a, &x, &y).is_zero());
        }
        // d2 after d1 vanishes on the generator triple.
        let b: Vec<RingElem> = (0..3).map(|_| s.elem(&ring, 2, 3)).collect();
        let d1b = PairTable::from_fn(3, |i, j| {
            d1_scalar(
                &ctx,
                &b,
                &LComb::generator(&ring, 3, i),
                &LComb::generator(&ring, 3, j),
            )
        });
        let x = LComb::generator(&ring, 3, 0);
        let y = LComb::generator(&ring, 3, 1);
        let z = LComb::generator(&ring, 3, 2);
        assert!(d2_scalar(&ctx, &d1b, &x, &y, &z).is_zero());
    }

    #[test]
    fn curvature_scalars_are_a_two_cocycle() {
        // f(D1,D2) = x, f(D1,D3) = y, f(D2,D3) = z has d2(f) = 0, also on
        // random combinations, not just the generator triple.
        let ctx = sphere_ctx();
        let ring = ctx.ring().clone();
        let f = PairTable::new(
            3,
            vec![
                RingElem::var(&ring, 0),
                RingElem::var(&ring, 1),
                RingElem::var(&ring, 2),
            ],
        );
        let x = LComb::generator(&ring, 3, 0);
        let y = LComb::generator(&ring, 3, 1);
        let z = LComb::generator(&ring, 3, 2);
        assert!(d2_scalar(&ctx, &f, &x, &y, &z).is_zero());
        let mut s = Sampler::new(19);
        let u = LComb::new(s.combo_coeffs(&ring, 3, 1));
        let v = LComb::new(s.combo_coeffs(&ring, 3, 1));
        let w = LComb::new(s.combo_coeffs(&ring, 3, 1));
        assert!(d2_scalar(&ctx, &f, &u, &v, &w).is_zero());
    }

    #[test]
    fn transform_laws_hold() {
        let ctx = sphere_ctx();
        let mut s = Sampler::new(11);
        let pair = canonical_pair(&ctx);
        // Identity move.
        let zero = GeneratorMap::zero_like(ctx.phi(), 3);
        let same = equivalence_transform(&pair, &zero).unwrap();
        assert!(pairs_equal(&pair, &same));
        // Composition and inverse.
        let b1 = s.potential(ctx.phi(), 3, 1);
        let b2 = s.potential(ctx.phi(), 3, 1);
        let step = equivalence_transform(&equivalence_transform(&pair, &b1).unwrap(), &b2)
            .unwrap();
        let direct = equivalence_transform(&pair, &b1.add(&b2)).unwrap();
        assert!(pairs_equal(&step, &direct));
        let neg = GeneratorMap::new(b1.values.iter().map(MatrixA::neg).collect());
        let back =
            equivalence_transform(&equivalence_transform(&pair, &b1).unwrap(), &neg)
                .unwrap();
        assert!(pairs_equal(&back, &pair));
    }

    #[test]
    fn torsor_action_is_additive_and_unital() {
        let ctx = sphere_ctx();
        let mut s = Sampler::new(13);
        let pair = canonical_pair(&ctx);
        let ring = ctx.ring().clone();
        let zero = PairTable::from_fn(3, |_, _| RingElem::zero(&ring));
        assert!(pairs_equal(&torsor_act(&pair, &zero), &pair));
        let r1 = PairTable::from_fn(3, |_, _| s.elem(&ring, 2, 2));
        let r2 = PairTable::from_fn(3, |_, _| s.elem(&ring, 2, 2));
        let sum = PairTable::new(
            3,
            r1.items()
                .iter()
                .zip(r2.items())
                .map(|(a, b)| a + b)
                .collect(),
        );
        let seq = torsor_act(&torsor_act(&pair, &r1), &r2);
        assert!(pairs_equal(&seq, &torsor_act(&pair, &sum)));
    }

    #[test]
    fn torsor_matrices_validate_centrality() {
        let ctx = sphere_ctx();
        let pair = canonical_pair(&ctx);
        let phi = ctx.phi().clone();
        let ring = ctx.ring().clone();
        let good = PairTable::from_fn(3, |i, _| {
            phi.scale(&RingElem::var(&ring, i))
        });
        assert!(torsor_act_matrices(&pair, &good, 2).is_ok());
        let bad = PairTable::from_fn(3, |_, _| {
            let mut m = MatrixA::zeros(&ring, 3, 3);
            *m.at_mut(0, 1) = RingElem::one(&ring);
            m
        });
        assert!(matches!(
            torsor_act_matrices(&pair, &bad, 2),
            Err(Error::NotCentral(2))
        ));
    }

    #[test]
    fn coboundaries_act_like_corner_transforms() {
        // torsor_act by d1(c) equals the equivalence transform by c * phi.
        let ctx = sphere_ctx();
        let mut s = Sampler::new(29);
        let pair = canonical_pair(&ctx);
        let ring = ctx.ring().clone();
        for _ in 0..3 {
            let c: Vec<RingElem> = (0..3).map(|_| s.elem(&ring, 2, 2)).collect();
            let via_torsor = torsor_act(&pair, &coboundary_scalar(&ctx, &c));
            let b = GeneratorMap::new(
                c.iter().map(|ci| ctx.phi().scale(ci)).collect(),
            );
            let via_transform = equivalence_transform(&pair, &b).unwrap();
            assert!(pairs_equal(&via_torsor, &via_transform));
        }
    }
}
