//! Differential forms on a three-variable hypersurface ring: the
//! presentation of one- and two-forms by component triples, the exterior
//! differentials, bounded equality and exactness checks with explicit
//! witnesses, the standard family of closed one-forms, and bounded
//! cohomology dimension counts.
//!
//! One-forms are triples `(g1, g2, g3)` for `g1 dx + g2 dy + g3 dz` modulo
//! the single relation vector `df = (f_x, f_y, f_z)`.  Two-forms are
//! triples in the basis `(dx^dy, dx^dz, dy^dz)` modulo the three relation
//! vectors `df^dx`, `df^dy`, `df^dz`.
//!
//! Every check that searches for a relation witness is bounded by a
//! multiplier degree; a failed search means "no witness at this bound",
//! never "no witness".  Positive answers always carry a witness that has
//! been re-verified by substitution.

use std::collections::BTreeMap;

use crate::ansatz::{solve_bounded, AEquation, ColOp};
use crate::error::Error;
use crate::linalg::{solve, QMat, RowSpace, SolveOutcome};
use crate::poly::{rat, Monomial, Rational, RawPoly};
use crate::ring::{elem, gradient, monomial_basis, RingElem, RingRef};

fn monomial_elem(ring: &RingRef, m: &Monomial) -> RingElem {
    elem(ring, RawPoly::from_terms(ring.nvars(), vec![(m.clone(), rat(1))]))
        .expect("monomial is a valid element")
}

/// A one-form presented by its three components.
#[derive(Clone, Debug, PartialEq)]
pub struct OneForm {
    pub comps: [RingElem; 3],
}

/// A two-form presented by its components on `(dx^dy, dx^dz, dy^dz)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TwoForm {
    pub comps: [RingElem; 3],
}

fn require_three_vars(ring: &RingRef) -> Result<(), Error> {
    if ring.nvars() != 3 {
        return Err(Error::WrongArity { expected: 3, got: ring.nvars() });
    }
    Ok(())
}

/// The relation vector of one-forms: the gradient `(f_x, f_y, f_z)`.
pub fn oneform_relation(ring: &RingRef) -> [RingElem; 3] {
    let g = gradient(ring);
    [g[0].clone(), g[1].clone(), g[2].clone()]
}

/// The three relation vectors of two-forms: `df^dx`, `df^dy`, `df^dz`
/// written on the basis `(dx^dy, dx^dz, dy^dz)`.
pub fn twoform_relations(ring: &RingRef) -> [[RingElem; 3]; 3] {
    let g = gradient(ring);
    let zero = RingElem::zero(ring);
    [
        [-&g[1], -&g[2], zero.clone()],
        [g[0].clone(), zero.clone(), -&g[2]],
        [zero, g[0].clone(), g[1].clone()],
    ]
}

/// Exterior differential of a ring element.
pub fn d0(a: &RingElem) -> OneForm {
    OneForm { comps: [a.partial(0), a.partial(1), a.partial(2)] }
}

/// Exterior differential of a one-form:
/// `d(g1 dx + g2 dy + g3 dz)` on the basis `(dx^dy, dx^dz, dy^dz)`.
pub fn d1(w: &OneForm) -> TwoForm {
    let [g1, g2, g3] = &w.comps;
    TwoForm {
        comps: [
            &g2.partial(0) - &g1.partial(1),
            &g3.partial(0) - &g1.partial(2),
            &g3.partial(1) - &g2.partial(2),
        ],
    }
}

/// Outcome of a bounded witness search: either a verified witness or an
/// honest "not found below this bound".
#[derive(Clone, Debug, PartialEq)]
pub enum BoundedVerdict<W> {
    Verified { witness: W },
    Inconclusive { bound: u32 },
}

impl<W> BoundedVerdict<W> {
    pub fn is_verified(&self) -> bool {
        matches!(self, BoundedVerdict::Verified { .. })
    }
}

/// Whether a one-form represents zero: searches for a multiplier `s` with
/// `w = s * df`, `deg s <= maxdeg`, and re-verifies the witness.
pub fn oneform_is_zero(w: &OneForm, maxdeg: u32) -> BoundedVerdict<RingElem> {
    let ring = w.comps[0].ring().clone();
    if w.comps.iter().all(|c| c.is_zero()) {
        return BoundedVerdict::Verified { witness: RingElem::zero(&ring) };
    }
    let rel = oneform_relation(&ring);
    let eqs: Vec<AEquation> = (0..3)
        .map(|k| AEquation {
            terms: vec![(0, ColOp::Mul(rel[k].clone()))],
            rhs: w.comps[k].clone(),
        })
        .collect();
    match solve_bounded(&ring, &[maxdeg], &eqs) {
        Some(sol) => {
            let s = sol.into_iter().next().expect("one unknown");
            for k in 0..3 {
                assert!((&(&s * &rel[k]) - &w.comps[k]).is_zero());
            }
            BoundedVerdict::Verified { witness: s }
        }
        None => BoundedVerdict::Inconclusive { bound: maxdeg },
    }
}

/// Whether two one-forms are equal, as a bounded witness search on their
/// difference.
pub fn oneform_equal(a: &OneForm, b: &OneForm, maxdeg: u32) -> BoundedVerdict<RingElem> {
    let diff = OneForm {
        comps: [
            &a.comps[0] - &b.comps[0],
            &a.comps[1] - &b.comps[1],
            &a.comps[2] - &b.comps[2],
        ],
    };
    oneform_is_zero(&diff, maxdeg)
}

/// Whether a two-form represents zero: searches for multipliers
/// `(s1, s2, s3)` with `w = s1 df^dx + s2 df^dy + s3 df^dz` and
/// re-verifies them.
pub fn twoform_is_zero(w: &TwoForm, maxdeg: u32) -> BoundedVerdict<Vec<RingElem>> {
    let ring = w.comps[0].ring().clone();
    if w.comps.iter().all(|c| c.is_zero()) {
        let zero = RingElem::zero(&ring);
        return BoundedVerdict::Verified { witness: vec![zero.clone(), zero.clone(), zero] };
    }
    let rels = twoform_relations(&ring);
    let eqs: Vec<AEquation> = (0..3)
        .map(|k| AEquation {
            terms: (0..3).map(|i| (i, ColOp::Mul(rels[i][k].clone()))).collect(),
            rhs: w.comps[k].clone(),
        })
        .collect();
    match solve_bounded(&ring, &[maxdeg, maxdeg, maxdeg], &eqs) {
        Some(sol) => {
            for k in 0..3 {
                let mut acc = RingElem::zero(&ring);
                for i in 0..3 {
                    acc = &acc + &(&sol[i] * &rels[i][k]);
                }
                assert!((&acc - &w.comps[k]).is_zero());
            }
            BoundedVerdict::Verified { witness: sol }
        }
        None => BoundedVerdict::Inconclusive { bound: maxdeg },
    }
}

/// Whether a one-form is closed, as a bounded witness search for `d1(w)`
/// being a relation combination.
pub fn is_closed(w: &OneForm, maxdeg: u32) -> BoundedVerdict<Vec<RingElem>> {
    twoform_is_zero(&d1(w), maxdeg)
}

/// Searches for `(g, a)` with `d0(g) + a * df = w`, where both `deg g`
/// and `deg a` are at most `maxdeg`.  A returned witness has been
/// re-verified by substitution.
pub fn exactness_witness(w: &OneForm, maxdeg: u32) -> Option<(RingElem, RingElem)> {
    let ring = w.comps[0].ring().clone();
    let rel = oneform_relation(&ring);
    let eqs: Vec<AEquation> = (0..3)
        .map(|k| AEquation {
            terms: vec![(0, ColOp::Grad(k)), (1, ColOp::Mul(rel[k].clone()))],
            rhs: w.comps[k].clone(),
        })
        .collect();
    let sol = solve_bounded(&ring, &[maxdeg, maxdeg], &eqs)?;
    let g = sol[0].clone();
    let a = sol[1].clone();
    let dg = d0(&g);
    for k in 0..3 {
        assert!((&(&dg.comps[k] + &(&a * &rel[k])) - &w.comps[k]).is_zero());
    }
    Some((g, a))
}

/// The standard family of closed one-forms:
/// `omega_n = ((x^2+y^2)^n x z, (x^2+y^2)^n y z, 0)`.
pub fn omega_n(ring: &RingRef, n: u32) -> Result<OneForm, Error> {
    require_three_vars(ring)?;
    let x = RingElem::var(ring, 0);
    let y = RingElem::var(ring, 1);
    let z = RingElem::var(ring, 2);
    let r2 = &(&x * &x) + &(&y * &y);
    let mut u = RingElem::one(ring);
    for _ in 0..n {
        u = &u * &r2;
    }
    Ok(OneForm {
        comps: [&(&u * &x) * &z, &(&u * &y) * &z, RingElem::zero(ring)],
    })
}

/// `d1(d0(m)) == 0` holds as a raw polynomial identity (mixed partials of
/// normal representatives commute).  This walks every basis monomial up to
/// `maxdeg` and checks it.
pub fn d1_after_d0_vanishes(ring: &RingRef, maxdeg: u32) -> Result<bool, Error> {
    require_three_vars(ring)?;
    for m in monomial_basis(ring, maxdeg) {
        let dd = d1(&d0(&monomial_elem(ring, &m)));
        if !dd.comps.iter().all(|c| c.is_zero()) {
            return Ok(false);
        }
    }
    Ok(true)
}

// ---------------------------------------------------------------------------
// Bounded cohomology dimensions
// ---------------------------------------------------------------------------

/// Bounded dimension counts for the de Rham complex in degree 1 or 2.
///
/// All numbers are relative to the stated truncation: forms with component
/// degree at most `maxdeg`, relation multipliers of degree at most
/// `maxdeg`, and potentials of exactness one degree higher.  They are
/// lower-level combinatorial facts about the truncation, not statements
/// about the full quotient module.
#[derive(Clone, Debug, PartialEq)]
pub struct HReport {
    pub degree: u8,
    pub maxdeg: u32,
    pub dim_closed: usize,
    pub dim_exact: usize,
    pub dim_quotient: usize,
    /// One component triple per residual class, reduced against the
    /// exact-plus-relation span.
    pub representatives: Vec<Vec<RingElem>>,
}

struct Coords {
    ring: RingRef,
    index: BTreeMap<Monomial, usize>,
    mons: Vec<Monomial>,
    width: usize,
}

impl Coords {
    fn new(ring: &RingRef, maxdeg: u32) -> Self {
        let mons = monomial_basis(ring, maxdeg);
        let index = mons
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, m)| (m, i))
            .collect();
        Coords { ring: ring.clone(), width: mons.len(), index, mons }
    }

    fn encode(&self, comps: &[RingElem]) -> Vec<Rational> {
        let mut v = vec![rat(0); 3 * self.width];
        for (c, e) in comps.iter().enumerate() {
            for (m, q) in e.rep().terms() {
                let idx = *self
                    .index
                    .get(m)
                    .expect("monomial exceeds the coordinate truncation");
                v[c * self.width + idx] = q.clone();
            }
        }
        v
    }

    fn decode(&self, v: &[Rational]) -> Vec<RingElem> {
        (0..3)
            .map(|c| {
                let terms: Vec<(Monomial, Rational)> = (0..self.width)
                    .filter(|i| v[c * self.width + i] != rat(0))
                    .map(|i| (self.mons[i].clone(), v[c * self.width + i].clone()))
                    .collect();
                elem(&self.ring, RawPoly::from_terms(3, terms)).expect("decoded element")
            })
            .collect()
    }
}

fn max_component_degree(vs: &[&[RingElem; 3]]) -> u32 {
    vs.iter()
        .flat_map(|v| v.iter())
        .map(|e| e.degree())
        .max()
        .unwrap_or(0)
}

fn scaled_triple(t: &[RingElem; 3], m: &Monomial) -> Vec<RingElem> {
    let sc = monomial_elem(t[0].ring(), m);
    t.iter().map(|c| &sc * c).collect()
}

/// Bounded dimension counts and representatives for `H^1` or `H^2` of the
/// truncated complex.
pub fn h_bounded(ring: &RingRef, degree: u8, maxdeg: u32) -> Result<HReport, Error> {
    require_three_vars(ring)?;
    match degree {
        1 => h1_bounded(ring, maxdeg),
        2 => h2_bounded(ring, maxdeg),
        _ => Err(Error::Invalid(format!(
            "cohomology degree {degree} not supported (use 1 or 2)"
        ))),
    }
}

fn h1_bounded(ring: &RingRef, maxdeg: u32) -> Result<HReport, Error> {
    let rel1 = oneform_relation(ring);
    let rel2 = twoform_relations(ring);
    let rel1max = max_component_degree(&[&rel1]);
    let rel2max = max_component_degree(&[&rel2[0], &rel2[1], &rel2[2]]);

    // Coordinates for one-forms (component degree <= maxdeg) and an
    // enlarged row space for the closedness equations.
    let v1 = Coords::new(ring, maxdeg);
    let rows = Coords::new(ring, maxdeg + rel2max);
    let form_basis = monomial_basis(ring, maxdeg);
    let mult_basis = monomial_basis(ring, maxdeg);

    // Joint system: d1(w) - sum_i s_i rel2_i = 0.
    let ncols = 3 * form_basis.len() + 3 * mult_basis.len();
    let nrows = 3 * rows.width;
    let mut a = QMat::zeros(nrows, ncols);
    let mut col = 0usize;
    for c in 0..3 {
        for m in &form_basis {
            let mut comps = [
                RingElem::zero(ring),
                RingElem::zero(ring),
                RingElem::zero(ring),
            ];
            comps[c] = monomial_elem(ring, m);
            let image = d1(&OneForm { comps });
            let coords = rows.encode(&image.comps);
            for (r, q) in coords.into_iter().enumerate() {
                a[(r, col)] = q;
            }
            col += 1;
        }
    }
    for rel in &rel2 {
        for m in &mult_basis {
            let coords = rows.encode(&scaled_triple(rel, m));
            for (r, q) in coords.into_iter().enumerate() {
                a[(r, col)] = -q;
            }
            col += 1;
        }
    }
    debug_assert_eq!(col, ncols);

    let zero_rhs = vec![rat(0); nrows];
    let kernel = match solve(&a, &zero_rhs)? {
        SolveOutcome::Solution { kernel, .. } => kernel,
        SolveOutcome::Inconsistent { .. } => unreachable!("homogeneous system"),
    };

    // Spanning vectors of the closed subspace: kernel vectors projected to
    // the form coordinates.  Exact forms and relation multiples land in
    // this subspace automatically (their differentials carry small
    // relation witnesses), so the rank arithmetic below is consistent.
    let nform = 3 * form_basis.len();
    let closed_span: Vec<Vec<Rational>> =
        kernel.iter().map(|k| k[..nform].to_vec()).collect();

    // One-form relation multiples inside the truncation.
    let mut df_multiples = Vec::new();
    if maxdeg >= rel1max {
        for m in monomial_basis(ring, maxdeg - rel1max) {
            df_multiples.push(v1.encode(&scaled_triple(&rel1, &m)));
        }
    }
    let mut df_span = RowSpace::new();
    let mut df_rank = 0usize;
    for v in &df_multiples {
        if df_span.insert(v) {
            df_rank += 1;
        }
    }

    let mut closed_plus_df = df_span.clone();
    let mut dim_closed_total = df_rank;
    for v in &closed_span {
        if closed_plus_df.insert(v) {
            dim_closed_total += 1;
        }
    }
    let dim_closed = dim_closed_total - df_rank;

    // Exact forms: differentials of ambient elements one degree up.
    let mut exact_span = df_span.clone();
    let mut exact_rank_total = df_rank;
    for m in monomial_basis(ring, maxdeg + 1) {
        if m.degree() == 0 {
            continue;
        }
        let g = monomial_elem(ring, &m);
        if exact_span.insert(&v1.encode(&d0(&g).comps)) {
            exact_rank_total += 1;
        }
    }
    let dim_exact = exact_rank_total - df_rank;

    // Representatives: closed vectors independent from exact + relations.
    let mut acc = exact_span;
    let mut representatives = Vec::new();
    for v in &closed_span {
        let reduced = acc.reduce(v);
        if acc.insert(v) {
            representatives.push(v1.decode(&reduced));
        }
    }
    let dim_quotient = dim_closed - dim_exact;
    assert_eq!(representatives.len(), dim_quotient);

    Ok(HReport {
        degree: 1,
        maxdeg,
        dim_closed,
        dim_exact,
        dim_quotient,
        representatives,
    })
}

fn h2_bounded(ring: &RingRef, maxdeg: u32) -> Result<HReport, Error> {
    let rel2 = twoform_relations(ring);
    let rel2max = max_component_degree(&[&rel2[0], &rel2[1], &rel2[2]]);
    let v2 = Coords::new(ring, maxdeg);
    let form_basis = monomial_basis(ring, maxdeg);

    // Relation multiples inside the truncation.
    let mut rel_span = RowSpace::new();
    let mut rel_rank = 0usize;
    if maxdeg >= rel2max {
        for rel in &rel2 {
            for m in monomial_basis(ring, maxdeg - rel2max) {
                if rel_span.insert(&v2.encode(&scaled_triple(rel, &m))) {
                    rel_rank += 1;
                }
            }
        }
    }

    // Every two-form is closed; classes modulo the relations.
    let dim_closed = 3 * form_basis.len() - rel_rank;

    // Exact forms: d1 of one-forms with components one degree up.
    let mut exact_span = rel_span.clone();
    let mut exact_rank_total = rel_rank;
    for c in 0..3 {
        for m in monomial_basis(ring, maxdeg + 1) {
            let mut comps = [
                RingElem::zero(ring),
                RingElem::zero(ring),
                RingElem::zero(ring),
            ];
            comps[c] = monomial_elem(ring, &m);
            let image = d1(&OneForm { comps });
            if image.comps.iter().all(|e| e.is_zero()) {
                continue;
            }
            if exact_span.insert(&v2.encode(&image.comps)) {
                exact_rank_total += 1;
            }
        }
    }
    let dim_exact = exact_rank_total - rel_rank;

    // Representatives: unit two-forms independent from exact + relations.
    let mut acc = exact_span;
    let mut representatives = Vec::new();
    for c in 0..3 {
        for m in &form_basis {
            let mut comps = [
                RingElem::zero(ring),
                RingElem::zero(ring),
                RingElem::zero(ring),
            ];
            comps[c] = monomial_elem(ring, m);
            let coords = v2.encode(&comps);
            let reduced = acc.reduce(&coords);
            if acc.insert(&coords) {
                representatives.push(v2.decode(&reduced));
            }
        }
    }
    let dim_quotient = dim_closed - dim_exact;
    assert_eq!(representatives.len(), dim_quotient);

    Ok(HReport {
        degree: 2,
        maxdeg,
        dim_closed,
        dim_exact,
        dim_quotient,
        representatives,
    })
}

/// Whether the class of a two-form stays outside the span of exact forms
/// and relation multiples at the given truncation.  `true` certifies that
/// no exactness witness with component degree within the truncation
/// exists; it says nothing about larger degrees.
pub fn twoform_class_nonzero_at_bound(
    ring: &RingRef,
    w: &TwoForm,
    maxdeg: u32,
) -> Result<bool, Error> {
    require_three_vars(ring)?;
    let rel2 = twoform_relations(ring);
    let rel2max = max_component_degree(&[&rel2[0], &rel2[1], &rel2[2]]);
    let v2 = Coords::new(ring, maxdeg);
    let mut span = RowSpace::new();
    if maxdeg >= rel2max {
        for rel in &rel2 {
            for m in monomial_basis(ring, maxdeg - rel2max) {
                span.insert(&v2.encode(&scaled_triple(rel, &m)));
            }
        }
    }
    for c in 0..3 {
        for m in monomial_basis(ring, maxdeg + 1) {
            let mut comps = [
                RingElem::zero(ring),
                RingElem::zero(ring),
                RingElem::zero(ring),
            ];
            comps[c] = monomial_elem(ring, &m);
            let image = d1(&OneForm { comps });
            if !image.comps.iter().all(|e| e.is_zero()) {
                span.insert(&v2.encode(&image.comps));
            }
        }
    }
    Ok(!span.contains(&v2.encode(&w.comps)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::HypersurfaceRing;

    fn sphere() -> RingRef {
        HypersurfaceRing::parse(&["x", "y", "z"], "x^2 + y^2 + z^2 - 1", "z").unwrap()
    }

    #[test]
    fn differentials_take_expected_values() {
        let r = sphere();
        let x = RingElem::var(&r, 0);
        let y = RingElem::var(&r, 1);
        let g = &x * &y;
        let dg = d0(&g);
        assert_eq!(dg.comps[0].display(), "1 * y");
        assert_eq!(dg.comps[1].display(), "1 * x");
        assert_eq!(dg.comps[2].display(), "0");
        // d1 of (y dx) is -dx^dy.
        let w = OneForm {
            comps: [y.clone(), RingElem::zero(&r), RingElem::zero(&r)],
        };
        let dw = d1(&w);
        assert_eq!(dw.comps[0].display(), "-1");
        assert!(dw.comps[1].is_zero());
        assert!(dw.comps[2].is_zero());
    }

    #[test]
    fn second_differential_vanishes_as_raw_polynomials() {
        let r = sphere();
        assert!(d1_after_d0_vanishes(&r, 5).unwrap());
    }

    #[test]
    fn omega_family_is_closed_with_reverifiable_witnesses() {
        let r = sphere();
        for n in 0..3u32 {
            let w = omega_n(&r, n).unwrap();
            let verdict = is_closed(&w, 2 * n + 2);
            assert!(verdict.is_verified(), "omega_{n} closedness witness");
        }
    }

    #[test]
    fn omega_zero_witness_needs_degree_zero_multipliers_only() {
        let r = sphere();
        let w = omega_n(&r, 0).unwrap();
        match is_closed(&w, 0) {
            BoundedVerdict::Verified { witness } => {
                assert_eq!(witness[0].display(), "0");
                assert_eq!(witness[1].display(), "0");
                assert_eq!(witness[2].display(), "-1/2");
            }
            BoundedVerdict::Inconclusive { .. } => panic!("expected a witness"),
        }
    }

    #[test]
    fn omega_zero_is_exact_with_a_verified_potential() {
        let r = sphere();
        let w = omega_n(&r, 0).unwrap();
        let (g, a) = exactness_witness(&w, 3).expect("witness at low degree");
        assert!(!g.is_zero());
        // Substitution is re-verified inside exactness_witness; double-check
        // the leading shape here.
        let dg = d0(&g);
        let rel = oneform_relation(&r);
        for k in 0..3 {
            assert!((&(&dg.comps[k] + &(&a * &rel[k])) - &w.comps[k]).is_zero());
        }
    }

    #[test]
    fn oneform_equality_detects_relation_shifts() {
        let r = sphere();
        let z = RingElem::var(&r, 2);
        let rel = oneform_relation(&r);
        let a = OneForm {
            comps: [RingElem::var(&r, 0), RingElem::var(&r, 1), z.clone()],
        };
        let shifted = OneForm {
            comps: [
                &a.comps[0] + &(&z * &rel[0]),
                &a.comps[1] + &(&z * &rel[1]),
                &a.comps[2] + &(&z * &rel[2]),
            ],
        };
        assert!(oneform_equal(&a, &shifted, 1).is_verified());
        let other = OneForm {
            comps: [RingElem::var(&r, 1), RingElem::zero(&r), RingElem::zero(&r)],
        };
        assert!(matches!(
            oneform_equal(&a, &other, 2),
            BoundedVerdict::Inconclusive { bound: 2 }
        ));
    }

    #[test]
    fn coordinate_differential_has_the_coordinate_as_potential() {
        let r = sphere();
        let dz = OneForm {
            comps: [RingElem::zero(&r), RingElem::zero(&r), RingElem::one(&r)],
        };
        let (g, a) = exactness_witness(&dz, 1).expect("dz is exact");
        assert_eq!(g.display(), "1 * z");
        assert!(a.is_zero());
    }

    #[test]
    fn differentials_of_random_elements_round_trip_through_the_witness_search() {
        let r = sphere();
        let mut s = crate::sampling::Sampler::new(41);
        for _ in 0..4 {
            let g = s.elem(&r, 4, 3);
            let w = d0(&g);
            // The witness need not equal g, but it must exist and re-verify.
            assert!(exactness_witness(&w, 4).is_some());
        }
    }

    #[test]
    fn oneform_equality_is_an_equivalence_compatible_with_addition() {
        let r = sphere();
        let rel = oneform_relation(&r);
        let mut s = crate::sampling::Sampler::new(43);
        let shift = |w: &OneForm, a: &RingElem| OneForm {
            comps: [
                &w.comps[0] + &(a * &rel[0]),
                &w.comps[1] + &(a * &rel[1]),
                &w.comps[2] + &(a * &rel[2]),
            ],
        };
        for _ in 0..3 {
            let w1 = OneForm { comps: [s.elem(&r, 2, 2), s.elem(&r, 2, 2), s.elem(&r, 2, 2)] };
            let w2 = OneForm { comps: [s.elem(&r, 2, 2), s.elem(&r, 2, 2), s.elem(&r, 2, 2)] };
            let a = s.elem(&r, 1, 2);
            let b = s.elem(&r, 1, 2);
            // Reflexivity, symmetry across a relation shift, additivity.
            assert!(oneform_equal(&w1, &w1, 2).is_verified());
            let w1s = shift(&w1, &a);
            assert!(oneform_equal(&w1, &w1s, 2).is_verified());
            assert!(oneform_equal(&w1s, &w1, 2).is_verified());
            let w2s = shift(&w2, &b);
            let sum = OneForm {
                comps: [
                    &w1.comps[0] + &w2.comps[0],
                    &w1.comps[1] + &w2.comps[1],
                    &w1.comps[2] + &w2.comps[2],
                ],
            };
            let sums = OneForm {
                comps: [
                    &w1s.comps[0] + &w2s.comps[0],
                    &w1s.comps[1] + &w2s.comps[1],
                    &w1s.comps[2] + &w2s.comps[2],
                ],
            };
            assert!(oneform_equal(&sum, &sums, 3).is_verified());
        }
    }

    #[test]
    fn a_oneform_with_nonvanishing_differential_reports_the_bound() {
        let r = sphere();
        let w = OneForm {
            comps: [RingElem::zero(&r), RingElem::zero(&r), RingElem::var(&r, 0)],
        };
        assert!(matches!(
            is_closed(&w, 3),
            BoundedVerdict::Inconclusive { bound: 3 }
        ));
    }

    #[test]
    fn volume_class_survives_truncation() {
        let r = sphere();
        let w = TwoForm {
            comps: [
                RingElem::var(&r, 2),
                -&RingElem::var(&r, 1),
                RingElem::var(&r, 0),
            ],
        };
        assert!(twoform_class_nonzero_at_bound(&r, &w, 2).unwrap());
        // An exact two-form does not survive.
        let exact = d1(&omega_n(&r, 0).unwrap());
        assert!(!twoform_class_nonzero_at_bound(&r, &exact, 2).unwrap());
    }

    #[test]
    fn bounded_dimension_counts_are_consistent_and_deterministic() {
        let r = sphere();
        let h1 = h_bounded(&r, 1, 2).unwrap();
        assert_eq!(h1.dim_quotient, h1.dim_closed - h1.dim_exact);
        assert_eq!(h1.representatives.len(), h1.dim_quotient);
        let again = h_bounded(&r, 1, 2).unwrap();
        assert_eq!(h1, again);

        let h2 = h_bounded(&r, 2, 2).unwrap();
        assert_eq!(h2.dim_quotient, h2.dim_closed - h2.dim_exact);
        assert_eq!(h2.representatives.len(), h2.dim_quotient);
        // The volume class is visible among the residual classes.
        assert!(h2.dim_quotient >= 1);
    }

    #[test]
    fn unsupported_requests_are_rejected() {
        let r = sphere();
        assert!(h_bounded(&r, 3, 2).is_err());
        let quad = HypersurfaceRing::parse(
            &["x", "y", "z", "t"],
            "x + x^2*y + z^3 + t^2",
            "t",
        )
        .unwrap();
        assert!(h_bounded(&quad, 1, 2).is_err());
    }
}
