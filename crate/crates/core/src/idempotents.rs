//! Matrices over the quotient ring and idempotent presentations of
//! projective modules.
//!
//! The central construction is the jacobian-splitting idempotent: given
//! cofactors `a_1, ..., a_n` and `h` with
//! `a_1 f_1 + ... + a_n f_n = 1 + h f` in the ambient polynomial ring
//! (`f_i` the partials of the relation), the matrix
//! `psi_ij = delta_ij - a_j f_i` is idempotent over the quotient and kills
//! the gradient column, so it presents the tangent-like summand cut out by
//! the relation.

use std::fmt;

use crate::error::Error;
use crate::poly::{RawPoly, Rational};
use crate::ring::{gradient, RingElem, RingRef};
use crate::vectorfields::Derivation;

/// Dense row-major matrix with ring-element entries.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixA {
    ring: RingRef,
    nrows: usize,
    ncols: usize,
    entries: Vec<RingElem>,
}

impl MatrixA {
    pub fn new(ring: &RingRef, nrows: usize, ncols: usize, entries: Vec<RingElem>) -> Self {
        assert_eq!(entries.len(), nrows * ncols, "entry count mismatch");
        MatrixA { ring: ring.clone(), nrows, ncols, entries }
    }

    pub fn zeros(ring: &RingRef, nrows: usize, ncols: usize) -> Self {
        let entries = (0..nrows * ncols).map(|_| RingElem::zero(ring)).collect();
        MatrixA { ring: ring.clone(), nrows, ncols, entries }
    }

    pub fn identity(ring: &RingRef, n: usize) -> Self {
        let mut m = MatrixA::zeros(ring, n, n);
        for i in 0..n {
            *m.at_mut(i, i) = RingElem::one(ring);
        }
        m
    }

    /// Parses a row-major array of polynomial strings.
    pub fn parse(ring: &RingRef, rows: &[Vec<&str>]) -> Result<Self, Error> {
        let nrows = rows.len();
        let ncols = rows.first().map(|r| r.len()).unwrap_or(0);
        let mut entries = Vec::with_capacity(nrows * ncols);
        for row in rows {
            if row.len() != ncols {
                return Err(Error::Dimension("ragged matrix rows".into()));
            }
            for src in row {
                entries.push(RingElem::parse(ring, src)?);
            }
        }
        Ok(MatrixA::new(ring, nrows, ncols, entries))
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn at(&self, i: usize, j: usize) -> &RingElem {
        &self.entries[i * self.ncols + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut RingElem {
        &mut self.entries[i * self.ncols + j]
    }

    pub fn entries(&self) -> &[RingElem] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(RingElem::is_zero)
    }

    pub fn is_square(&self) -> bool {
        self.nrows == self.ncols
    }

    pub fn add(&self, other: &MatrixA) -> MatrixA {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &MatrixA) -> MatrixA {
        self.zip(other, |a, b| a - b)
    }

    pub fn neg(&self) -> MatrixA {
        self.map(|a| -a)
    }

    fn zip(&self, other: &MatrixA, f: impl Fn(&RingElem, &RingElem) -> RingElem) -> MatrixA {
        assert_eq!((self.nrows, self.ncols), (other.nrows, other.ncols), "shape mismatch");
        MatrixA {
            ring: self.ring.clone(),
            nrows: self.nrows,
            ncols: self.ncols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| f(a, b))
                .collect(),
        }
    }

    fn map(&self, f: impl Fn(&RingElem) -> RingElem) -> MatrixA {
        MatrixA {
            ring: self.ring.clone(),
            nrows: self.nrows,
            ncols: self.ncols,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn mul(&self, other: &MatrixA) -> MatrixA {
        assert_eq!(self.ncols, other.nrows, "shape mismatch in product");
        let mut out = MatrixA::zeros(&self.ring, self.nrows, other.ncols);
        for i in 0..self.nrows {
            for j in 0..other.ncols {
                let mut acc = RingElem::zero(&self.ring);
                for k in 0..self.ncols {
                    acc = &acc + &(self.at(i, k) * other.at(k, j));
                }
                *out.at_mut(i, j) = acc;
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &ModuleVector) -> ModuleVector {
        assert_eq!(self.ncols, v.len(), "shape mismatch in matrix-vector product");
        let entries = (0..self.nrows)
            .map(|i| {
                let mut acc = RingElem::zero(&self.ring);
                for k in 0..self.ncols {
                    acc = &acc + &(self.at(i, k) * v.at(k));
                }
                acc
            })
            .collect();
        ModuleVector { ring: self.ring.clone(), entries }
    }

    pub fn transpose(&self) -> MatrixA {
        let mut out = MatrixA::zeros(&self.ring, self.ncols, self.nrows);
        for i in 0..self.nrows {
            for j in 0..self.ncols {
                *out.at_mut(j, i) = self.at(i, j).clone();
            }
        }
        out
    }

    pub fn scale(&self, a: &RingElem) -> MatrixA {
        self.map(|e| a * e)
    }

    pub fn scale_q(&self, q: &Rational) -> MatrixA {
        self.map(|e| e.scale(q))
    }

    /// `self * other - other * self`.
    pub fn commutator(&self, other: &MatrixA) -> MatrixA {
        self.mul(other).sub(&other.mul(self))
    }

    /// The column of a square matrix, as a module vector.
    pub fn col(&self, j: usize) -> ModuleVector {
        ModuleVector {
            ring: self.ring.clone(),
            entries: (0..self.nrows).map(|i| self.at(i, j).clone()).collect(),
        }
    }

    /// Builds a square matrix whose `j`-th column is `cols[j]`.
    pub fn from_cols(ring: &RingRef, cols: &[ModuleVector]) -> MatrixA {
        let nrows = cols.first().map(ModuleVector::len).unwrap_or(0);
        let mut out = MatrixA::zeros(ring, nrows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), nrows, "ragged columns");
            for i in 0..nrows {
                *out.at_mut(i, j) = c.at(i).clone();
            }
        }
        out
    }

    pub fn display_rows(&self) -> Vec<Vec<String>> {
        (0..self.nrows)
            .map(|i| (0..self.ncols).map(|j| self.at(i, j).display()).collect())
            .collect()
    }
}

impl fmt::Display for MatrixA {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.display_rows() {
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// A column vector with ring-element entries.
#[derive(Clone, Debug, PartialEq)]
pub struct ModuleVector {
    ring: RingRef,
    entries: Vec<RingElem>,
}

impl ModuleVector {
    pub fn new(ring: &RingRef, entries: Vec<RingElem>) -> Self {
        ModuleVector { ring: ring.clone(), entries }
    }

    pub fn zeros(ring: &RingRef, n: usize) -> Self {
        ModuleVector {
            ring: ring.clone(),
            entries: (0..n).map(|_| RingElem::zero(ring)).collect(),
        }
    }

    /// The standard basis column `e_i`.
    pub fn basis(ring: &RingRef, n: usize, i: usize) -> Self {
        let mut v = ModuleVector::zeros(ring, n);
        v.entries[i] = RingElem::one(ring);
        v
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn at(&self, i: usize) -> &RingElem {
        &self.entries[i]
    }

    pub fn entries(&self) -> &[RingElem] {
        &self.entries
    }

    pub fn add(&self, other: &ModuleVector) -> ModuleVector {
        assert_eq!(self.len(), other.len(), "length mismatch");
        ModuleVector {
            ring: self.ring.clone(),
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &ModuleVector) -> ModuleVector {
        assert_eq!(self.len(), other.len(), "length mismatch");
        ModuleVector {
            ring: self.ring.clone(),
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, a: &RingElem) -> ModuleVector {
        ModuleVector {
            ring: self.ring.clone(),
            entries: self.entries.iter().map(|e| a * e).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(RingElem::is_zero)
    }
}

/// Whether a square matrix is idempotent over the quotient ring.
pub fn verify_idempotent(m: &MatrixA) -> bool {
    m.is_square() && m.mul(m) == *m
}

/// Applies a derivation entrywise to a matrix.
pub fn derive_matrix(d: &Derivation, m: &MatrixA) -> MatrixA {
    let mut out = MatrixA::zeros(m.ring(), m.nrows(), m.ncols());
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            *out.at_mut(i, j) = d.apply(m.at(i, j));
        }
    }
    out
}

/// An idempotent presentation of a projective module: the ring, the
/// idempotent matrix, and the cofactor data that produced it (when it came
/// from the jacobian splitting).
#[derive(Clone, Debug)]
pub struct IdempotentPresentation {
    pub ring: RingRef,
    pub psi: MatrixA,
    pub cofactors: Vec<RingElem>,
    pub h: RingElem,
}

/// Builds the jacobian-splitting idempotent from cofactors.
///
/// The cofactor identity `sum_i a_i f_i = 1 + h f` is checked by raw
/// expansion in the ambient polynomial ring (using the normal-form
/// representatives of the inputs); the construction then guarantees that
/// the returned matrix is idempotent and annihilates the gradient column.
pub fn jacobian_splitting_idempotent(
    ring: &RingRef,
    cofactors: &[RingElem],
    h: &RingElem,
) -> Result<IdempotentPresentation, Error> {
    let n = ring.nvars();
    if cofactors.len() != n {
        return Err(Error::VarCount { expected: n, got: cofactors.len() });
    }
    let f = ring.relation();
    let mut acc = RawPoly::zero(n);
    for (a, v) in cofactors.iter().zip(0..n) {
        acc = acc.add(&a.rep().mul(&f.partial(v)));
    }
    let expected = RawPoly::one(n).add(&h.rep().mul(f));
    let residual = acc.sub(&expected);
    if !residual.is_zero() {
        return Err(Error::CofactorIdentity(format!(
            "sum a_i f_i - 1 - h f = {}",
            residual.display(ring.vars())
        )));
    }

    let grad = gradient(ring);
    let mut psi = MatrixA::identity(ring, n);
    for i in 0..n {
        for j in 0..n {
            let delta = psi.at(i, j).clone();
            *psi.at_mut(i, j) = &delta - &(&cofactors[j] * &grad[i]);
        }
    }
    Ok(IdempotentPresentation {
        ring: ring.clone(),
        psi,
        cofactors: cofactors.to_vec(),
        h: h.clone(),
    })
}

/// The reduced gradient as a module vector (the column the splitting kills).
pub fn gradient_vector(ring: &RingRef) -> ModuleVector {
    ModuleVector::new(ring, gradient(ring))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::ratio;
    use crate::presets::{preset_russell, preset_sphere};
    use crate::ring::HypersurfaceRing;

    fn sphere() -> RingRef {
        HypersurfaceRing::parse(&["x", "y", "z"], "x^2 + y^2 + z^2 - 1", "z").unwrap()
    }

    fn rho(ring: &RingRef) -> MatrixA {
        MatrixA::parse(
            ring,
            &[
                vec!["0", "z", "-y"],
                vec!["-z", "0", "x"],
                vec!["y", "-x", "0"],
            ],
        )
        .unwrap()
    }

    #[test]
    fn rho_times_transpose_is_the_projector() {
        let r = sphere();
        let p = rho(&r);
        let m = p.mul(&p.transpose());
        let expected = MatrixA::parse(
            &r,
            &[
                vec!["1 - x^2", "-x * y", "-x * z"],
                vec!["-x * y", "1 - y^2", "-y * z"],
                vec!["-x * z", "-y * z", "1 - z^2"],
            ],
        )
        .unwrap();
        assert_eq!(m, expected);
        // and equals -rho^2
        assert_eq!(m, p.mul(&p).neg());
    }

    #[test]
    fn sphere_splitting_matches_the_projector() {
        let r = sphere();
        let half = |v: usize| RingElem::var(&r, v).scale(&ratio(1, 2));
        let pres = jacobian_splitting_idempotent(
            &r,
            &[half(0), half(1), half(2)],
            &RingElem::one(&r),
        )
        .unwrap();
        let p = rho(&r);
        assert_eq!(pres.psi, p.mul(&p.transpose()));
        assert!(verify_idempotent(&pres.psi));
        assert!(pres.psi.mul_vec(&gradient_vector(&r)).is_zero());
    }

    #[test]
    fn splitting_rejects_bad_cofactors() {
        let r = sphere();
        let err = jacobian_splitting_idempotent(
            &r,
            &[RingElem::one(&r), RingElem::zero(&r), RingElem::zero(&r)],
            &RingElem::zero(&r),
        );
        assert!(err.is_err());
    }

    #[test]
    fn rho_is_not_idempotent() {
        let r = sphere();
        assert!(!verify_idempotent(&rho(&r)));
    }

    #[test]
    fn russell_cofactors_build_an_idempotent() {
        let p = preset_russell().unwrap();
        assert!(verify_idempotent(&p.idempotent));
        assert!(p
            .idempotent
            .mul_vec(&gradient_vector(&p.ring))
            .is_zero());
    }

    #[test]
    fn sphere_projector_identities() {
        // M rho = rho M = rho and rho^3 = -rho.
        let pre = preset_sphere().unwrap();
        let m = &pre.idempotent;
        let p = pre.rho.as_ref().unwrap();
        assert_eq!(m.mul(p), *p);
        assert_eq!(p.mul(m), *p);
        assert_eq!(p.mul(p).mul(p), p.neg());
    }

    #[test]
    fn derive_matrix_applies_entrywise() {
        let r = sphere();
        let ds = crate::vectorfields::sphere_tangent_generators(&r).unwrap();
        let m = MatrixA::parse(&r, &[vec!["1 - x^2", "x * y"], vec!["0", "z"]]).unwrap();
        let dm = derive_matrix(&ds[0], &m);
        // D1 = y d/dx - x d/dy: D1(1 - x^2) = -2xy, D1(xy) = y^2 - x^2,
        // D1(z) = 0.
        assert_eq!(dm.at(0, 0), &RingElem::parse(&r, "-2 * x * y").unwrap());
        assert_eq!(dm.at(0, 1), &RingElem::parse(&r, "y^2 - x^2").unwrap());
        assert!(dm.at(1, 1).is_zero());
    }

    #[test]
    fn matrix_vector_product_and_columns() {
        let r = sphere();
        let m = rho(&r);
        let e0 = ModuleVector::basis(&r, 3, 0);
        assert_eq!(m.mul_vec(&e0), m.col(0));
        let rebuilt = MatrixA::from_cols(&r, &[m.col(0), m.col(1), m.col(2)]);
        assert_eq!(rebuilt, m);
    }

    #[test]
    fn commutator_is_antisymmetric() {
        let r = sphere();
        let a = rho(&r);
        let b = MatrixA::parse(
            &r,
            &[vec!["x", "0", "1"], vec!["0", "y", "0"], vec!["z", "0", "0"]],
        )
        .unwrap();
        assert_eq!(a.commutator(&b), b.commutator(&a).neg());
        assert!(a.commutator(&a).is_zero());
    }
}
