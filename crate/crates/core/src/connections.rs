//! Connections on idempotent-presented modules and their curvature.
//!
//! Given an idempotent `phi` over the ring and a tangent derivation `x`, the
//! lifted connection acts on column vectors by `u -> phi . x(phi u)`, where
//! `x` applies entrywise.  Curvature is computed two independent ways:
//!
//!  * the closed form `phi . (x(phi) y(phi) - y(phi) x(phi))` built from
//!    entrywise derivatives of the idempotent, and
//!  * an operator oracle that assembles
//!    `nabla_x nabla_y - nabla_y nabla_x - nabla_[x,y]` column by column.
//!
//! The two routes share no code beyond ring arithmetic, so their agreement
//! is a meaningful cross-check and is enforced by the test suite rather
//! than assumed.

use crate::error::Error;
use crate::idempotents::{derive_matrix, MatrixA, ModuleVector};
use crate::ring::RingElem;
use crate::vectorfields::{expand_in_generators, Derivation};

/// Applies a derivation entrywise to a column vector.
pub fn rho_apply(d: &Derivation, v: &ModuleVector) -> ModuleVector {
    ModuleVector::new(
        v.ring(),
        v.entries().iter().map(|e| d.apply(e)).collect(),
    )
}

/// The lifted connection `nabla_x(v) = phi . x(phi v)`.
pub fn lifted_connection_apply(
    phi: &MatrixA,
    x: &Derivation,
    v: &ModuleVector,
) -> ModuleVector {
    phi.mul_vec(&rho_apply(x, &phi.mul_vec(v)))
}

/// Closed-form curvature `phi . (x(phi) y(phi) - y(phi) x(phi))`.
pub fn curvature_matrix(phi: &MatrixA, x: &Derivation, y: &Derivation) -> MatrixA {
    let dx = derive_matrix(x, phi);
    let dy = derive_matrix(y, phi);
    phi.mul(&dx.commutator(&dy))
}

/// Oracle route: builds the curvature operator
/// `nabla_x nabla_y - nabla_y nabla_x - nabla_[x,y]` by applying it to the
/// standard basis columns.
pub fn curvature_oracle(phi: &MatrixA, x: &Derivation, y: &Derivation) -> MatrixA {
    let n = phi.nrows();
    let ring = phi.ring();
    let xy = x.bracket(y);
    let cols: Vec<ModuleVector> = (0..n)
        .map(|j| {
            let e = ModuleVector::basis(ring, n, j);
            let a = lifted_connection_apply(phi, x, &lifted_connection_apply(phi, y, &e));
            let b = lifted_connection_apply(phi, y, &lifted_connection_apply(phi, x, &e));
            let c = lifted_connection_apply(phi, &xy, &e);
            a.sub(&b).sub(&c)
        })
        .collect();
    MatrixA::from_cols(ring, &cols)
}

/// A map from declared generators to endomorphism values, extended
/// A-linearly.  Used both for potentials and for connection shifts.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorMap {
    pub values: Vec<MatrixA>,
}

impl GeneratorMap {
    pub fn new(values: Vec<MatrixA>) -> Self {
        GeneratorMap { values }
    }

    pub fn zero_like(phi: &MatrixA, ngens: usize) -> Self {
        GeneratorMap {
            values: (0..ngens)
                .map(|_| MatrixA::zeros(phi.ring(), phi.nrows(), phi.ncols()))
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Value on the combination with the given coefficients.
    pub fn eval(&self, coeffs: &[RingElem]) -> MatrixA {
        assert_eq!(coeffs.len(), self.values.len(), "coefficient arity mismatch");
        let first = &self.values[0];
        let mut acc = MatrixA::zeros(first.ring(), first.nrows(), first.ncols());
        for (c, v) in coeffs.iter().zip(&self.values) {
            acc = acc.add(&v.scale(c));
        }
        acc
    }

    pub fn add(&self, other: &GeneratorMap) -> GeneratorMap {
        assert_eq!(self.len(), other.len(), "generator count mismatch");
        GeneratorMap {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }
}

/// The adjoint action of a tangent derivation on an endomorphism, relative
/// to the lifted connection: `ad(x)(g) = [nabla_x, g]` evaluated by operator
/// composition on the standard basis columns.
pub fn adjoint_action(phi: &MatrixA, x: &Derivation, g: &MatrixA) -> MatrixA {
    let n = phi.nrows();
    let ring = phi.ring();
    let cols: Vec<ModuleVector> = (0..n)
        .map(|j| {
            let e = ModuleVector::basis(ring, n, j);
            let a = lifted_connection_apply(phi, x, &g.mul_vec(&e));
            let b = g.mul_vec(&lifted_connection_apply(phi, x, &e));
            a.sub(&b)
        })
        .collect();
    MatrixA::from_cols(ring, &cols)
}

/// Adjoint action for a connection shifted by a potential:
/// `ad(x)(g) = [nabla_x + P(x), g]`.
pub fn adjoint_action_with_potential(
    phi: &MatrixA,
    px: &MatrixA,
    x: &Derivation,
    g: &MatrixA,
) -> MatrixA {
    adjoint_action(phi, x, g).add(&px.commutator(g))
}

/// Curvature of the potential-shifted connection on a declared generator
/// pair, by the algebraic formula
/// `R(x,y) + ad(x)(P(y)) - ad(y)(P(x)) - P([x,y]) + [P(x), P(y)]`.
///
/// `P([x,y])` requires expanding the bracket of the two generators over the
/// full generator list, with expansion coefficients of degree at most
/// `maxdeg`; the result is relative to that declared presentation.
pub fn curvature_with_potential(
    phi: &MatrixA,
    gens: &[Derivation],
    p: &GeneratorMap,
    i: usize,
    j: usize,
    maxdeg: u32,
) -> Result<MatrixA, Error> {
    check_potential(phi, gens, p)?;
    let x = &gens[i];
    let y = &gens[j];
    let base = curvature_matrix(phi, x, y);
    let ad_x_py = adjoint_action(phi, x, &p.values[j]);
    let ad_y_px = adjoint_action(phi, y, &p.values[i]);
    let p_bracket = p.eval(&bracket_expansion(gens, i, j, maxdeg)?);
    let pp = p.values[i].commutator(&p.values[j]);
    Ok(base
        .add(&ad_x_py)
        .sub(&ad_y_px)
        .sub(&p_bracket)
        .add(&pp))
}

/// Oracle for the potential-shifted curvature: composes the shifted
/// connection operators directly,
/// `[nabla'_x, nabla'_y] - nabla'_[x,y]` with `nabla'_x = nabla_x + P(x)`.
/// The bracket `[x,y]` still needs a declared-generator expansion to
/// evaluate `P` on it; everything else is operator composition.
pub fn curvature_with_potential_oracle(
    phi: &MatrixA,
    gens: &[Derivation],
    p: &GeneratorMap,
    i: usize,
    j: usize,
    maxdeg: u32,
) -> Result<MatrixA, Error> {
    check_potential(phi, gens, p)?;
    let n = phi.nrows();
    let ring = phi.ring();
    let x = &gens[i];
    let y = &gens[j];
    let xy = x.bracket(y);
    let p_xy = p.eval(&bracket_expansion(gens, i, j, maxdeg)?);
    let apply_shifted = |d: &Derivation, pm: &MatrixA, v: &ModuleVector| {
        lifted_connection_apply(phi, d, v).add(&pm.mul_vec(v))
    };
    let cols: Vec<ModuleVector> = (0..n)
        .map(|k| {
            let e = ModuleVector::basis(ring, n, k);
            let a = apply_shifted(x, &p.values[i], &apply_shifted(y, &p.values[j], &e));
            let b = apply_shifted(y, &p.values[j], &apply_shifted(x, &p.values[i], &e));
            let c = apply_shifted(&xy, &p_xy, &e);
            a.sub(&b).sub(&c)
        })
        .collect();
    Ok(MatrixA::from_cols(ring, &cols))
}

fn check_potential(
    phi: &MatrixA,
    gens: &[Derivation],
    p: &GeneratorMap,
) -> Result<(), Error> {
    if p.len() != gens.len() {
        return Err(Error::Dimension(format!(
            "potential has {} values but there are {} generators",
            p.len(),
            gens.len()
        )));
    }
    for v in &p.values {
        if v.nrows() != phi.nrows() || v.ncols() != phi.ncols() {
            return Err(Error::Dimension(
                "potential value shape differs from the idempotent".into(),
            ));
        }
    }
    Ok(())
}

/// One expansion of `[gens_i, gens_j]` over the declared generators.
pub fn bracket_expansion(
    gens: &[Derivation],
    i: usize,
    j: usize,
    maxdeg: u32,
) -> Result<Vec<RingElem>, Error> {
    let w = gens[i].bracket(&gens[j]);
    expand_in_generators(&w, gens, maxdeg).ok_or(Error::NoExpansion(maxdeg))
}

/// Whether the (possibly shifted) connection is flat on every declared
/// generator pair.  The verdict is relative to the declared generating set.
pub fn check_flat(
    phi: &MatrixA,
    gens: &[Derivation],
    p: Option<&GeneratorMap>,
    maxdeg: u32,
) -> Result<bool, Error> {
    for i in 0..gens.len() {
        for j in (i + 1)..gens.len() {
            let r = match p {
                Some(p) => curvature_with_potential_oracle(phi, gens, p, i, j, maxdeg)?,
                None => curvature_oracle(phi, &gens[i], &gens[j]),
            };
            if !r.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Outcome of trying to write every curvature value as `f_ij * rho` for a
/// single candidate matrix `rho`.
#[derive(Clone, Debug, PartialEq)]
pub enum CurvatureType {
    /// Scalars found, listed for pairs `(i, j)` with `i < j` in row order.
    Found(Vec<RingElem>),
    /// Certified impossible: at this entry the candidate matrix vanishes but
    /// the curvature value does not, so no scalar multiple can ever match.
    NotOfThisType { pair: (usize, usize), entry: (usize, usize) },
    /// No scalar of degree `<= bound` works, but a higher-degree one might.
    InconclusiveAtBound { bound: u32 },
}

/// Detects whether curvature values on generator pairs are ring multiples
/// of a single candidate matrix.
pub fn detect_curvature_type(
    rvals: &[MatrixA],
    rho: &MatrixA,
    maxdeg: u32,
) -> CurvatureType {
    use crate::ansatz::{solve_bounded, AEquation, ColOp};
    let ring = rho.ring().clone();
    let mut scalars = Vec::with_capacity(rvals.len());
    for (pair_idx, r) in rvals.iter().enumerate() {
        // Certified negative: rho entry zero but curvature entry nonzero.
        for a in 0..rho.nrows() {
            for b in 0..rho.ncols() {
                if rho.at(a, b).is_zero() && !r.at(a, b).is_zero() {
                    return CurvatureType::NotOfThisType {
                        pair: pair_of_index(pair_idx, rvals.len()),
                        entry: (a, b),
                    };
                }
            }
        }
        let eqs: Vec<AEquation> = (0..rho.nrows())
            .flat_map(|a| {
                (0..rho.ncols()).map(move |b| AEquation {
                    terms: vec![(0, ColOp::Mul(rho.at(a, b).clone()))],
                    rhs: r.at(a, b).clone(),
                })
            })
            .collect();
        match solve_bounded(&ring, &[maxdeg], &eqs) {
            Some(sol) => scalars.push(sol.into_iter().next().expect("one unknown")),
            None => return CurvatureType::InconclusiveAtBound { bound: maxdeg },
        }
    }
    CurvatureType::Found(scalars)
}

/// Recovers the `(i, j)` generator pair from a flat pair index, given the
/// total number of pairs.  Pairs are enumerated `i < j` in row order.
fn pair_of_index(idx: usize, total: usize) -> (usize, usize) {
    // total = n(n-1)/2; recover n.
    let mut n = 1;
    while n * (n - 1) / 2 < total {
        n += 1;
    }
    let mut k = idx;
    for i in 0..n {
        let row = n - 1 - i;
        if k < row {
            return (i, i + 1 + k);
        }
        k -= row;
    }
    (0, 0)
}
