//! Hypersurface coordinate rings `A = Q[v_1, ..., v_n] / (f)` where the
//! relation `f` is monic (up to a rational unit) in one designated leading
//! variable.
//!
//! Every element of `A` has a unique normal form: the representative whose
//! degree in the leading variable is strictly below `deg_lead(f)`.  Reduction
//! is plain division by `f` along the leading variable and needs no general
//! Groebner machinery.  Equality, arithmetic, and partial derivatives all
//! work on normal forms.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num::One;

use crate::error::Error;
use crate::poly::{basis_cmp, rat, Monomial, Rational, RawPoly};

/// Shared handle to a ring description.  Rings compare structurally, so two
/// independently parsed copies of the same presentation are interchangeable.
pub type RingRef = Arc<HypersurfaceRing>;

#[derive(Debug, PartialEq, Eq)]
pub struct HypersurfaceRing {
    vars: Vec<String>,
    lead: usize,
    lead_deg: u32,
    /// The relation scaled monic in the leading variable.
    relation: RawPoly,
}

impl HypersurfaceRing {
    /// Builds a ring from variable names, a relation polynomial, and the
    /// index of the leading variable.  The relation must have positive degree
    /// `d` in that variable and its `v^d`-coefficient must be a nonzero
    /// rational constant; the stored relation is rescaled to make that
    /// coefficient one.
    pub fn new(
        vars: Vec<String>,
        relation: RawPoly,
        lead: usize,
    ) -> Result<RingRef, Error> {
        if relation.nvars() != vars.len() {
            return Err(Error::VarCount { expected: vars.len(), got: relation.nvars() });
        }
        if lead >= vars.len() {
            return Err(Error::Invalid(format!(
                "leading variable index {lead} out of range"
            )));
        }
        {
            let mut seen = std::collections::BTreeSet::new();
            for v in &vars {
                if !seen.insert(v.clone()) {
                    return Err(Error::Invalid(format!("duplicate variable `{v}`")));
                }
            }
        }
        let d = relation.degree_in(lead);
        if d == 0 {
            return Err(Error::NotMonic(vars[lead].clone()));
        }
        let coeffs = relation.univariate_in(lead);
        let top = &coeffs[d as usize];
        if top.total_degree() != 0 || top.is_zero() {
            return Err(Error::NotMonic(vars[lead].clone()));
        }
        let unit = top.coeff(&Monomial::one(vars.len()));
        let monic = relation.scale(&(Rational::one() / unit));
        Ok(Arc::new(HypersurfaceRing {
            vars,
            lead,
            lead_deg: d,
            relation: monic,
        }))
    }

    /// Convenience constructor that parses the relation from text.
    pub fn parse(
        vars: &[&str],
        relation: &str,
        lead_var: &str,
    ) -> Result<RingRef, Error> {
        let names: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
        let rel = RawPoly::parse(relation, &names)?;
        let lead = names
            .iter()
            .position(|v| v == lead_var)
            .ok_or_else(|| Error::Parse(format!("unknown leading variable `{lead_var}`")))?;
        HypersurfaceRing::new(names, rel, lead)
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn lead_var(&self) -> usize {
        self.lead
    }

    pub fn lead_deg(&self) -> u32 {
        self.lead_deg
    }

    /// The monic relation polynomial.
    pub fn relation(&self) -> &RawPoly {
        &self.relation
    }

    /// Reduces a raw polynomial to its normal form: repeatedly divides out
    /// the leading-variable powers `>= lead_deg` using the monic relation.
    /// Each step cancels one offending term and only introduces terms of
    /// strictly smaller leading-variable degree, so the loop terminates.
    pub fn normalize(&self, p: &RawPoly) -> RawPoly {
        let mut cur = p.clone();
        loop {
            let offending: Vec<(Monomial, Rational)> = cur
                .terms()
                .filter(|(m, _)| m.0[self.lead] >= self.lead_deg)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect();
            if offending.is_empty() {
                return cur;
            }
            for (m, c) in offending {
                let mut shift = m.clone();
                shift.0[self.lead] -= self.lead_deg;
                cur = cur.sub(&self.relation.mul_term(&shift, &c));
            }
        }
    }
}

/// Builds a `RingElem` in the given ring from a raw polynomial.
pub fn elem(ring: &RingRef, p: RawPoly) -> Result<RingElem, Error> {
    if p.nvars() != ring.nvars() {
        return Err(Error::VarCount { expected: ring.nvars(), got: p.nvars() });
    }
    Ok(RingElem { ring: ring.clone(), rep: ring.normalize(&p) })
}

/// An element of the quotient ring, stored in normal form.
#[derive(Clone, Debug)]
pub struct RingElem {
    ring: RingRef,
    rep: RawPoly,
}

impl RingElem {
    pub fn zero(ring: &RingRef) -> Self {
        RingElem { ring: ring.clone(), rep: RawPoly::zero(ring.nvars()) }
    }

    pub fn one(ring: &RingRef) -> Self {
        RingElem { ring: ring.clone(), rep: RawPoly::one(ring.nvars()) }
    }

    pub fn constant(ring: &RingRef, c: Rational) -> Self {
        RingElem { ring: ring.clone(), rep: RawPoly::constant(ring.nvars(), c) }
    }

    pub fn int(ring: &RingRef, n: i64) -> Self {
        RingElem::constant(ring, rat(n))
    }

    pub fn var(ring: &RingRef, i: usize) -> Self {
        assert!(i < ring.nvars(), "variable index out of range");
        // A bare variable can itself need reduction when the relation is
        // linear in the leading variable; normalize to be safe.
        RingElem {
            ring: ring.clone(),
            rep: ring.normalize(&RawPoly::var(ring.nvars(), i)),
        }
    }

    pub fn parse(ring: &RingRef, src: &str) -> Result<Self, Error> {
        let raw = RawPoly::parse(src, ring.vars())?;
        elem(ring, raw)
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    /// The normal-form representative.
    pub fn rep(&self) -> &RawPoly {
        &self.rep
    }

    pub fn is_zero(&self) -> bool {
        self.rep.is_zero()
    }

    /// Total degree of the normal form.
    pub fn degree(&self) -> u32 {
        self.rep.total_degree()
    }

    /// Partial derivative of the normal-form representative, reduced again.
    /// This is the operator the tangent-field machinery composes with ring
    /// multiplication; it is well defined on classes only when assembled
    /// into a tangent derivation.
    pub fn partial(&self, v: usize) -> RingElem {
        assert!(v < self.ring.nvars(), "variable index out of range");
        RingElem {
            ring: self.ring.clone(),
            rep: self.ring.normalize(&self.rep.partial(v)),
        }
    }

    pub fn scale(&self, c: &Rational) -> RingElem {
        RingElem { ring: self.ring.clone(), rep: self.rep.scale(c) }
    }

    pub fn display(&self) -> String {
        self.rep.display(self.ring.vars())
    }

    fn assert_same_ring(&self, other: &RingElem) {
        assert!(
            Arc::ptr_eq(&self.ring, &other.ring) || self.ring == other.ring,
            "elements belong to different rings"
        );
    }
}

impl PartialEq for RingElem {
    fn eq(&self, other: &Self) -> bool {
        self.assert_same_ring(other);
        self.rep == other.rep
    }
}

impl Eq for RingElem {}

impl fmt::Display for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display())
    }
}

impl Add for &RingElem {
    type Output = RingElem;
    fn add(self, rhs: &RingElem) -> RingElem {
        self.assert_same_ring(rhs);
        RingElem { ring: self.ring.clone(), rep: self.rep.add(&rhs.rep) }
    }
}

impl Sub for &RingElem {
    type Output = RingElem;
    fn sub(self, rhs: &RingElem) -> RingElem {
        self.assert_same_ring(rhs);
        RingElem { ring: self.ring.clone(), rep: self.rep.sub(&rhs.rep) }
    }
}

impl Neg for &RingElem {
    type Output = RingElem;
    fn neg(self) -> RingElem {
        RingElem { ring: self.ring.clone(), rep: self.rep.neg() }
    }
}

impl Mul for &RingElem {
    type Output = RingElem;
    fn mul(self, rhs: &RingElem) -> RingElem {
        self.assert_same_ring(rhs);
        RingElem {
            ring: self.ring.clone(),
            rep: self.ring.normalize(&self.rep.mul(&rhs.rep)),
        }
    }
}

/// All normal-form monomials of total degree at most `maxdeg`, in canonical
/// enumeration order (degree ascending, exponent tuple descending within a
/// degree).  These are exactly the monomials with leading-variable exponent
/// below the relation degree; they span the degree-filtered piece of the
/// ring as a rational vector space.
pub fn monomial_basis(ring: &RingRef, maxdeg: u32) -> Vec<Monomial> {
    let n = ring.nvars();
    let mut out = Vec::new();
    let mut exps = vec![0u32; n];
    enumerate(ring, maxdeg, 0, &mut exps, &mut out);
    out.sort_by(basis_cmp);
    out
}

fn enumerate(
    ring: &RingRef,
    maxdeg: u32,
    pos: usize,
    exps: &mut Vec<u32>,
    out: &mut Vec<Monomial>,
) {
    if pos == exps.len() {
        out.push(Monomial(exps.clone()));
        return;
    }
    let used: u32 = exps[..pos].iter().sum();
    let mut cap = maxdeg - used;
    if pos == ring.lead_var() {
        cap = cap.min(ring.lead_deg() - 1);
    }
    for e in 0..=cap {
        exps[pos] = e;
        enumerate(ring, maxdeg, pos + 1, exps, out);
    }
    exps[pos] = 0;
}

/// The reduced classes of the relation's partial derivatives, as a column
/// of ring elements.
pub fn gradient(ring: &RingRef) -> Vec<RingElem> {
    (0..ring.nvars())
        .map(|v| {
            elem(ring, ring.relation().partial(v)).expect("gradient arity")
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::ratio;

    pub(crate) fn sphere() -> RingRef {
        HypersurfaceRing::parse(&["x", "y", "z"], "x^2 + y^2 + z^2 - 1", "z").unwrap()
    }

    fn cubic4() -> RingRef {
        HypersurfaceRing::parse(&["x", "y", "z", "t"], "x + x^2 * y + z^3 + t^2", "t")
            .unwrap()
    }

    /// Independent reduction oracle: view the polynomial as a dense
    /// univariate polynomial in the leading variable and long-divide by the
    /// relation in that dense form.
    fn reduce_dense(ring: &RingRef, p: &RawPoly) -> RawPoly {
        let v = ring.lead_var();
        let d = ring.lead_deg() as usize;
        let rel = ring.relation().univariate_in(v);
        // The leading coefficient is a rational unit by the ring invariant.
        let unit = rel[d].coeff(&Monomial::one(p.nvars()));
        let mut cur = p.univariate_in(v);
        while cur.len() > d {
            let k = cur.len() - 1;
            let top = cur.pop().unwrap();
            if top.is_zero() {
                continue;
            }
            // Subtract (top/unit) * v^(k-d) * relation; the popped leading
            // term is the j = d contribution, already cancelled.
            let factor =
                top.mul_term(&Monomial::one(p.nvars()), &(num::BigRational::one() / &unit));
            for (j, rc) in rel.iter().enumerate().take(d) {
                let idx = k - d + j;
                if idx >= cur.len() {
                    cur.resize(idx + 1, RawPoly::zero(p.nvars()));
                }
                let delta = factor.mul(rc);
                cur[idx] = cur[idx].sub(&delta);
            }
            while cur.len() > d && cur.last().map(|c| c.is_zero()).unwrap_or(false) {
                cur.pop();
            }
        }
        let mut out = RawPoly::zero(p.nvars());
        for (k, c) in cur.iter().enumerate() {
            let mut shift = Monomial::one(p.nvars());
            shift.0[v] = k as u32;
            out = out.add(&c.mul_term(&shift, &num::BigRational::one()));
        }
        out
    }

    #[test]
    fn z_squared_reduces_on_the_sphere() {
        let r = sphere();
        let p = RingElem::parse(&r, "z^2").unwrap();
        let expected = RingElem::parse(&r, "1 - x^2 - y^2").unwrap();
        assert_eq!(p, expected);
    }

    #[test]
    fn z_cubed_reduces_on_the_sphere() {
        let r = sphere();
        let p = RingElem::parse(&r, "z^3").unwrap();
        let expected = RingElem::parse(&r, "z - x^2 * z - y^2 * z").unwrap();
        assert_eq!(p, expected);
    }

    #[test]
    fn normalize_agrees_with_dense_division_oracle() {
        let r = sphere();
        let vars = r.vars().to_vec();
        for src in [
            "z^5 - 2 * z^4 * x + z^2 * y^2 - z + 7",
            "(x + y + z)^4",
            "z^6",
            "x * y * z^3 - 1/2 * z^2",
        ] {
            let raw = RawPoly::parse(src, &vars).unwrap();
            assert_eq!(r.normalize(&raw), reduce_dense(&r, &raw), "input {src}");
        }
        let r4 = cubic4();
        let vars4 = r4.vars().to_vec();
        for src in ["t^4", "t^3 * x - t^2 * y + 5", "(t + z)^3"] {
            let raw = RawPoly::parse(src, &vars4).unwrap();
            assert_eq!(r4.normalize(&raw), reduce_dense(&r4, &raw), "input {src}");
        }
    }

    #[test]
    fn normalization_can_raise_total_degree_but_stays_reduced() {
        // On the cubic ring t^2 reduces to a degree-3 representative.
        let r = cubic4();
        let t2 = RingElem::parse(&r, "t^2").unwrap();
        assert_eq!(t2, RingElem::parse(&r, "-x - x^2 * y - z^3").unwrap());
        assert!(t2.rep().degree_in(r.lead_var()) < r.lead_deg());
    }

    #[test]
    fn ring_rejects_non_monic_relations() {
        // Leading coefficient in z is the non-constant polynomial x.
        assert!(HypersurfaceRing::parse(&["x", "y", "z"], "x * z^2 + y", "z").is_err());
        // Degree zero in the chosen leading variable.
        assert!(HypersurfaceRing::parse(&["x", "y", "z"], "x^2 + y^2 - 1", "z").is_err());
        // A rational unit is fine and gets scaled away.
        let r = HypersurfaceRing::parse(&["x", "y", "z"], "3 * z^2 + x", "z").unwrap();
        assert_eq!(
            r.relation(),
            &RawPoly::parse("z^2 + 1/3 * x", &r.vars().to_vec()).unwrap()
        );
    }

    #[test]
    fn arithmetic_respects_the_quotient() {
        let r = sphere();
        let x = RingElem::var(&r, 0);
        let y = RingElem::var(&r, 1);
        let z = RingElem::var(&r, 2);
        let lhs = &(&(&x * &x) + &(&y * &y)) + &(&z * &z);
        assert_eq!(lhs, RingElem::one(&r));
        let p = &(&x + &y) * &z;
        assert_eq!(p, &(&x * &z) + &(&y * &z));
    }

    #[test]
    fn partial_reduces_the_result() {
        let r = sphere();
        // d/dz of z^3's normal form: z^3 -> z - x^2 z - y^2 z, derivative
        // 1 - x^2 - y^2 which is the class of z^2.
        let z3 = RingElem::parse(&r, "z^3").unwrap();
        assert_eq!(z3.partial(2), RingElem::parse(&r, "z^2").unwrap());
    }

    #[test]
    fn monomial_basis_matches_expected_order() {
        let r = sphere();
        let names: Vec<String> = r.vars().to_vec();
        let b = monomial_basis(&r, 2);
        let shown: Vec<String> = b
            .iter()
            .map(|m| {
                RawPoly::from_terms(3, [(m.clone(), rat(1))]).display(&names)
            })
            .collect();
        assert_eq!(
            shown,
            vec!["1", "1 * x", "1 * y", "1 * z", "1 * x^2", "1 * x * y", "1 * x * z", "1 * y^2", "1 * y * z"]
        );
    }

    #[test]
    fn monomial_basis_respects_lead_degree_cap() {
        let r = cubic4();
        let b = monomial_basis(&r, 3);
        assert!(b.iter().all(|m| m.0[3] < 2));
        // Count: monomials in x,y,z of degree <= 3 (20) plus t * (degree <= 2 in x,y,z: 10).
        assert_eq!(b.len(), 30);
    }

    #[test]
    fn equality_via_point_evaluation_on_the_sphere() {
        // Rational points from the standard rational parametrization of the
        // sphere; a correct normal form must agree with the original
        // polynomial at every one of them.
        let r = sphere();
        let raw = RawPoly::parse(
            "z^4 - x * z^3 + y^2 * z^2 - 5 * z + 2",
            &r.vars().to_vec(),
        )
        .unwrap();
        let nf = r.normalize(&raw);
        for (u, v) in [(0i64, 1i64), (1, 1), (2, 1), (1, 2), (3, 2), (-1, 3), (5, 4)] {
            let (u, v) = (rat(u), ratio(v, 1));
            let denom = &(&u * &u) + &(&v * &v) + rat(1);
            let x = ratio(2, 1) * &u / denom.clone();
            let y = ratio(2, 1) * &v / denom.clone();
            let z = (rat(1) - &u * &u - &v * &v) / denom;
            let pt = [x, y, z];
            assert_eq!(raw.eval(&pt), nf.eval(&pt));
        }
    }
}
