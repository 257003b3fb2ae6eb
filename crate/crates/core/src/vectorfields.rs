//! Derivations of the hypersurface ring, presented as ambient vector fields
//! `sum_i c_i d/dv_i` whose coefficients are ring elements.
//!
//! Such a field descends to the quotient exactly when it is tangent: it must
//! send the relation to zero in the quotient.  The checked constructor
//! enforces tangency eagerly; `new_unchecked` is the documented escape hatch
//! for callers that already know (brackets of tangent fields, for example).

use crate::ansatz::{solve_bounded, AEquation, ColOp};
use crate::error::Error;
use crate::poly::Rational;
use crate::ring::{gradient, RingElem, RingRef};

/// A tangent derivation of the quotient ring.
#[derive(Clone, Debug, PartialEq)]
pub struct Derivation {
    ring: RingRef,
    coeffs: Vec<RingElem>,
}

impl Derivation {
    /// Checked constructor: fails unless the field sends the relation to
    /// zero in the quotient.
    pub fn new(ring: &RingRef, coeffs: Vec<RingElem>) -> Result<Self, Error> {
        if coeffs.len() != ring.nvars() {
            return Err(Error::VarCount { expected: ring.nvars(), got: coeffs.len() });
        }
        let d = Derivation { ring: ring.clone(), coeffs };
        let image = d.apply_to_relation();
        if !image.is_zero() {
            return Err(Error::NotTangent(image.display()));
        }
        Ok(d)
    }

    /// Unchecked constructor for fields known to be tangent by construction.
    pub fn new_unchecked(ring: &RingRef, coeffs: Vec<RingElem>) -> Self {
        assert_eq!(coeffs.len(), ring.nvars(), "coefficient arity mismatch");
        Derivation { ring: ring.clone(), coeffs }
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn coeffs(&self) -> &[RingElem] {
        &self.coeffs
    }

    pub fn zero(ring: &RingRef) -> Self {
        Derivation {
            ring: ring.clone(),
            coeffs: (0..ring.nvars()).map(|_| RingElem::zero(ring)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(RingElem::is_zero)
    }

    fn apply_to_relation(&self) -> RingElem {
        let grad = gradient(&self.ring);
        let mut acc = RingElem::zero(&self.ring);
        for (c, g) in self.coeffs.iter().zip(&grad) {
            acc = &acc + &(c * g);
        }
        acc
    }

    /// Whether the field is tangent to the hypersurface.
    pub fn is_tangent(&self) -> bool {
        self.apply_to_relation().is_zero()
    }

    /// Applies the derivation to a ring element.
    pub fn apply(&self, a: &RingElem) -> RingElem {
        let mut acc = RingElem::zero(&self.ring);
        for (v, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                acc = &acc + &(c * &a.partial(v));
            }
        }
        acc
    }

    /// Lie bracket `[self, other]`, again a tangent derivation.  The
    /// coefficient of `d/dv_j` is `self(other_j) - other(self_j)`.
    pub fn bracket(&self, other: &Derivation) -> Derivation {
        let coeffs = (0..self.ring.nvars())
            .map(|j| &self.apply(&other.coeffs[j]) - &other.apply(&self.coeffs[j]))
            .collect();
        Derivation::new_unchecked(&self.ring, coeffs)
    }

    /// `a * self` for a ring element `a`.
    pub fn scale(&self, a: &RingElem) -> Derivation {
        Derivation::new_unchecked(
            &self.ring,
            self.coeffs.iter().map(|c| a * c).collect(),
        )
    }

    pub fn add(&self, other: &Derivation) -> Derivation {
        Derivation::new_unchecked(
            &self.ring,
            self.coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn sub(&self, other: &Derivation) -> Derivation {
        Derivation::new_unchecked(
            &self.ring,
            self.coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }

    pub fn scale_q(&self, q: &Rational) -> Derivation {
        Derivation::new_unchecked(
            &self.ring,
            self.coeffs.iter().map(|c| c.scale(q)).collect(),
        )
    }
}

/// The module combination `sum_i coeffs_i * gens_i`.
pub fn combination(gens: &[Derivation], coeffs: &[RingElem]) -> Derivation {
    assert_eq!(gens.len(), coeffs.len(), "combination arity mismatch");
    assert!(!gens.is_empty(), "empty generator list");
    let ring = gens[0].ring().clone();
    let mut acc = Derivation::zero(&ring);
    for (g, c) in gens.iter().zip(coeffs) {
        acc = acc.add(&g.scale(c));
    }
    acc
}

/// The three rotation fields that generate the tangent module of the unit
/// sphere: `y d/dx - x d/dy`, `z d/dx - x d/dz`, `z d/dy - y d/dz`.
pub fn sphere_tangent_generators(ring: &RingRef) -> Result<Vec<Derivation>, Error> {
    if ring.nvars() != 3 {
        return Err(Error::WrongArity { expected: 3, got: ring.nvars() });
    }
    let x = RingElem::var(ring, 0);
    let y = RingElem::var(ring, 1);
    let z = RingElem::var(ring, 2);
    let zero = RingElem::zero(ring);
    let d1 = Derivation::new(ring, vec![y.clone(), -&x, zero.clone()])?;
    let d2 = Derivation::new(ring, vec![z.clone(), zero.clone(), -&x])?;
    let d3 = Derivation::new(ring, vec![zero, z, -&y])?;
    Ok(vec![d1, d2, d3])
}

/// Expresses `w` as an A-combination of the given generators with
/// coefficients of degree at most `maxdeg`.  Returns one coefficient vector
/// (the presentation is usually not free, so expansions are not unique) or
/// `None` when no bounded expansion exists.
pub fn expand_in_generators(
    w: &Derivation,
    gens: &[Derivation],
    maxdeg: u32,
) -> Option<Vec<RingElem>> {
    assert!(!gens.is_empty(), "empty generator list");
    let ring = w.ring().clone();
    let eqs: Vec<AEquation> = (0..ring.nvars())
        .map(|slot| AEquation {
            terms: gens
                .iter()
                .enumerate()
                .map(|(u, g)| (u, ColOp::Mul(g.coeffs()[slot].clone())))
                .collect(),
            rhs: w.coeffs()[slot].clone(),
        })
        .collect();
    // Scan bounds from below so the expansion found has coefficients of
    // minimal degree; the smaller solves are cheap compared to the final
    // bound, and structure tables come out as simple as possible.
    let sol = (0..=maxdeg)
        .find_map(|d| solve_bounded(&ring, &vec![d; gens.len()], &eqs))?;
    debug_assert!(combination(gens, &sol).sub(w).is_zero());
    Some(sol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::HypersurfaceRing;

    fn sphere() -> RingRef {
        HypersurfaceRing::parse(&["x", "y", "z"], "x^2 + y^2 + z^2 - 1", "z").unwrap()
    }

    fn rot(ring: &RingRef) -> Vec<Derivation> {
        sphere_tangent_generators(ring).unwrap()
    }

    #[test]
    fn rotation_fields_are_tangent_and_normal_field_is_not() {
        let r = sphere();
        for d in rot(&r) {
            assert!(d.is_tangent());
        }
        // The Euler field x d/dx + y d/dy + z d/dz sends f to 2(x^2+y^2+z^2),
        // which is 2 on the sphere, not zero.
        let euler = Derivation::new(
            &r,
            vec![
                RingElem::var(&r, 0),
                RingElem::var(&r, 1),
                RingElem::var(&r, 2),
            ],
        );
        assert!(euler.is_err());
    }

    #[test]
    fn apply_is_a_derivation() {
        let r = sphere();
        let d1 = &rot(&r)[0];
        let a = RingElem::parse(&r, "x * z + y^2").unwrap();
        let b = RingElem::parse(&r, "z^2 - x").unwrap();
        let lhs = d1.apply(&(&a * &b));
        let rhs = &(&d1.apply(&a) * &b) + &(&a * &d1.apply(&b));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn rotation_bracket_table() {
        // [D1, D2] = D3, [D1, D3] = -D2, [D2, D3] = D1.
        let r = sphere();
        let ds = rot(&r);
        assert_eq!(ds[0].bracket(&ds[1]), ds[2]);
        assert_eq!(ds[0].bracket(&ds[2]), ds[1].scale_q(&crate::poly::rat(-1)));
        assert_eq!(ds[1].bracket(&ds[2]), ds[0]);
    }

    #[test]
    fn bracket_is_antisymmetric_and_tangent() {
        let r = sphere();
        let ds = rot(&r);
        let a = RingElem::parse(&r, "x + 2 * z").unwrap();
        let b = RingElem::parse(&r, "y^2").unwrap();
        let u = combination(&ds, &[a.clone(), b.clone(), RingElem::zero(&r)]);
        let v = combination(&ds, &[RingElem::zero(&r), a, b]);
        let uv = u.bracket(&v);
        let vu = v.bracket(&u);
        assert!(uv.add(&vu).is_zero());
        assert!(uv.is_tangent());
    }

    #[test]
    fn module_relation_z_d1_minus_y_d2_plus_x_d3_vanishes() {
        let r = sphere();
        let ds = rot(&r);
        let x = RingElem::var(&r, 0);
        let y = RingElem::var(&r, 1);
        let z = RingElem::var(&r, 2);
        let w = combination(&ds, &[z, -&y, x]);
        assert!(w.is_zero());
    }

    #[test]
    fn expansion_finds_bracket_coefficients() {
        let r = sphere();
        let ds = rot(&r);
        let w = ds[0].bracket(&ds[1]); // = D3
        let coeffs = expand_in_generators(&w, &ds, 2).expect("expandable");
        assert!(combination(&ds, &coeffs).sub(&w).is_zero());
    }

    #[test]
    fn expansion_fails_for_non_module_elements_at_low_degree() {
        // d/dx alone is not tangent, so it cannot be a combination of
        // tangent fields; the solver must report failure, not invent one.
        let r = sphere();
        let ds = rot(&r);
        let w = Derivation::new_unchecked(
            &r,
            vec![RingElem::one(&r), RingElem::zero(&r), RingElem::zero(&r)],
        );
        assert!(expand_in_generators(&w, &ds, 3).is_none());
    }
}
