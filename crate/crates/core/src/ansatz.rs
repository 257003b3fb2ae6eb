//! Degree-bounded linear solving inside the quotient ring.
//!
//! Many questions in this library reduce to: find ring elements
//! `u_1, ..., u_k` of bounded degree satisfying a family of A-linear
//! equations `sum_i  op_i(u_j) = rhs`.  Expanding each unknown over the
//! normal-form monomial basis turns such a system into an exact rational
//! linear system, because every operator we need (multiplication by a fixed
//! element, or reduced partial derivative) is Q-linear on representatives.
//!
//! Degree bounds are honest parameters of the answer: a `None` from
//! [`solve_bounded`] means "no solution with coefficients of the requested
//! degree", never "no solution at all".

use std::collections::BTreeMap;

use crate::linalg::{solve, QMat, SolveOutcome};
use crate::poly::{Monomial, RawPoly, Rational};
use crate::ring::{elem, monomial_basis, RingElem, RingRef};

/// A Q-linear column operator applied to an unknown ring element.
#[derive(Clone, Debug)]
pub enum ColOp {
    /// Multiply the unknown by a fixed ring element.
    Mul(RingElem),
    /// Take the reduced partial derivative of the unknown with respect to
    /// the given ambient variable.
    Grad(usize),
}

impl ColOp {
    fn apply(&self, ring: &RingRef, m: &Monomial) -> RingElem {
        let mono = elem(ring, RawPoly::from_terms(ring.nvars(), [(m.clone(), num::One::one())]))
            .expect("basis monomial arity");
        match self {
            ColOp::Mul(c) => c * &mono,
            ColOp::Grad(v) => mono.partial(*v),
        }
    }
}

/// One equation `sum over terms (unknown_index, op) of op(unknown) = rhs`.
#[derive(Clone, Debug)]
pub struct AEquation {
    pub terms: Vec<(usize, ColOp)>,
    pub rhs: RingElem,
}

/// Solves the system for unknowns with the given degree bounds.  Returns a
/// deterministic particular solution (free coordinates zero) or `None` when
/// the system has no solution at these bounds.
pub fn solve_bounded(
    ring: &RingRef,
    unknown_degs: &[u32],
    eqs: &[AEquation],
) -> Option<Vec<RingElem>> {
    let bases: Vec<Vec<Monomial>> = unknown_degs
        .iter()
        .map(|&d| monomial_basis(ring, d))
        .collect();
    let mut col_offset = Vec::with_capacity(bases.len());
    let mut total_cols = 0;
    for b in &bases {
        col_offset.push(total_cols);
        total_cols += b.len();
    }

    // Precompute the ring element contributed by every column of every
    // equation, then index rows by (equation, monomial) pairs.
    let mut columns: Vec<Vec<(usize, RingElem)>> = Vec::with_capacity(eqs.len());
    let mut row_index: BTreeMap<(usize, Monomial), usize> = BTreeMap::new();
    for (e, eq) in eqs.iter().enumerate() {
        let mut cols = Vec::new();
        for (u, op) in &eq.terms {
            for (k, m) in bases[*u].iter().enumerate() {
                let contrib = op.apply(ring, m);
                if !contrib.is_zero() {
                    cols.push((col_offset[*u] + k, contrib));
                }
            }
        }
        for (_, contrib) in &cols {
            for (m, _) in contrib.rep().terms() {
                row_index.entry((e, m.clone())).or_insert(0);
            }
        }
        for (m, _) in eq.rhs.rep().terms() {
            row_index.entry((e, m.clone())).or_insert(0);
        }
        columns.push(cols);
    }
    for (i, slot) in row_index.values_mut().enumerate() {
        *slot = i;
    }
    let nrows = row_index.len();

    let mut a = QMat::zeros(nrows, total_cols);
    let mut b = vec![Rational::from_integer(0.into()); nrows];
    for (e, cols) in columns.iter().enumerate() {
        for (col, contrib) in cols {
            for (m, c) in contrib.rep().terms() {
                let r = row_index[&(e, m.clone())];
                let cur = &a[(r, *col)] + c;
                a[(r, *col)] = cur;
            }
        }
        for (m, c) in eqs[e].rhs.rep().terms() {
            let r = row_index[&(e, m.clone())];
            b[r] = c.clone();
        }
    }

    match solve(&a, &b).expect("ansatz dimensions are consistent") {
        SolveOutcome::Solution { particular, .. } => {
            let mut out = Vec::with_capacity(bases.len());
            for (u, basis) in bases.iter().enumerate() {
                let mut p = RawPoly::zero(ring.nvars());
                for (k, m) in basis.iter().enumerate() {
                    p.add_term(m.clone(), particular[col_offset[u] + k].clone());
                }
                out.push(elem(ring, p).expect("solution arity"));
            }
            Some(out)
        }
        SolveOutcome::Inconsistent { .. } => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{HypersurfaceRing, RingElem};

    fn sphere() -> RingRef {
        HypersurfaceRing::parse(&["x", "y", "z"], "x^2 + y^2 + z^2 - 1", "z").unwrap()
    }

    #[test]
    fn recovers_a_known_multiplier() {
        // Solve u * z = x * z for u of degree <= 1: u = x works and the
        // deterministic solver should find exactly it (times possible kernel
        // freedom fixed to zero).
        let r = sphere();
        let z = RingElem::var(&r, 2);
        let xz = &RingElem::var(&r, 0) * &z;
        let sol = solve_bounded(
            &r,
            &[1],
            &[AEquation { terms: vec![(0, ColOp::Mul(z))], rhs: xz.clone() }],
        )
        .expect("solvable");
        assert_eq!(&sol[0] * &RingElem::var(&r, 2), xz);
    }

    #[test]
    fn respects_degree_bounds() {
        // x^2 * u = x^2 * y^2 needs degree 2; at bound 1 there is no
        // solution, at bound 2 there is.
        let r = sphere();
        let x2 = RingElem::parse(&r, "x^2").unwrap();
        let rhs = RingElem::parse(&r, "x^2 * y^2").unwrap();
        let eq = |rhs: RingElem| AEquation {
            terms: vec![(0, ColOp::Mul(x2.clone()))],
            rhs,
        };
        assert!(solve_bounded(&r, &[1], &[eq(rhs.clone())]).is_none());
        let sol = solve_bounded(&r, &[2], &[eq(rhs.clone())]).expect("solvable");
        assert_eq!(&x2 * &sol[0], rhs);
    }

    #[test]
    fn gradient_columns_solve_differential_equations() {
        // Find g of degree <= 2 with dg/dx = 2x and dg/dy = 0 and dg/dz = 0:
        // g = x^2 up to the kernel; the equation pins the x^2 coefficient.
        let r = sphere();
        let two_x = RingElem::parse(&r, "2 * x").unwrap();
        let zero = RingElem::zero(&r);
        let sol = solve_bounded(
            &r,
            &[2],
            &[
                AEquation { terms: vec![(0, ColOp::Grad(0))], rhs: two_x },
                AEquation { terms: vec![(0, ColOp::Grad(1))], rhs: zero.clone() },
                AEquation { terms: vec![(0, ColOp::Grad(2))], rhs: zero },
            ],
        )
        .expect("solvable");
        let g = &sol[0];
        assert_eq!(g.partial(0), RingElem::parse(&r, "2 * x").unwrap());
        assert!(g.partial(1).is_zero());
        assert!(g.partial(2).is_zero());
    }
}
