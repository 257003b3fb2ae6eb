//! Built-in worked examples: the unit sphere and the Russell cubic
//! hypersurface.  Each preset bundles a ring, a generating set of tangent
//! fields, the jacobian-splitting idempotent from explicit cofactors, and
//! (for the sphere) the antisymmetric cross-product matrix whose square
//! recovers the projector.

use crate::error::Error;
use crate::idempotents::{jacobian_splitting_idempotent, MatrixA};
use crate::poly::ratio;
use crate::ring::{HypersurfaceRing, RingElem, RingRef};
use crate::vectorfields::{sphere_tangent_generators, Derivation};

/// A bundled example: everything needed to run connection and curvature
/// computations out of the box.
#[derive(Clone, Debug)]
pub struct Preset {
    pub name: &'static str,
    pub ring: RingRef,
    /// Tangent fields generating the full tangent module (relative to which
    /// all bracket expansions are taken).
    pub generators: Vec<Derivation>,
    /// The jacobian-splitting idempotent.
    pub idempotent: MatrixA,
    /// Optional antisymmetric companion matrix used by curvature-type
    /// detection; present for the sphere.
    pub rho: Option<MatrixA>,
    pub cofactors: Vec<RingElem>,
    pub h: RingElem,
}

/// The unit sphere `x^2 + y^2 + z^2 = 1` with its three rotation fields,
/// cofactors `(x/2, y/2, z/2)` (so `h = 1`), and the cross-product matrix.
pub fn preset_sphere() -> Result<Preset, Error> {
    let ring = HypersurfaceRing::parse(&["x", "y", "z"], "x^2 + y^2 + z^2 - 1", "z")?;
    let generators = sphere_tangent_generators(&ring)?;
    let cofactors: Vec<RingElem> = (0..3)
        .map(|v| RingElem::var(&ring, v).scale(&ratio(1, 2)))
        .collect();
    let h = RingElem::one(&ring);
    let pres = jacobian_splitting_idempotent(&ring, &cofactors, &h)?;
    let rho = MatrixA::parse(
        &ring,
        &[
            vec!["0", "z", "-y"],
            vec!["-z", "0", "x"],
            vec!["y", "-x", "0"],
        ],
    )?;
    Ok(Preset {
        name: "sphere",
        ring,
        generators,
        idempotent: pres.psi,
        rho: Some(rho),
        cofactors,
        h,
    })
}

/// The Russell cubic `x + x^2 y + z^3 + t^2 = 0` in four variables, monic in
/// `t`.  Cofactors `(1 - 2xy, 4y^2, 0, 0)` satisfy the identity with
/// `h = 0`: `(1 - 2xy)(1 + 2xy) + 4y^2 x^2 = 1`.  The tangent generators are
/// the six antisymmetric fields `f_v d/du - f_u d/dv`, which are tangent by
/// construction.
pub fn preset_russell() -> Result<Preset, Error> {
    let ring =
        HypersurfaceRing::parse(&["x", "y", "z", "t"], "x + x^2 * y + z^3 + t^2", "t")?;
    let cofactors = vec![
        RingElem::parse(&ring, "1 - 2 * x * y")?,
        RingElem::parse(&ring, "4 * y^2")?,
        RingElem::zero(&ring),
        RingElem::zero(&ring),
    ];
    let h = RingElem::zero(&ring);
    let pres = jacobian_splitting_idempotent(&ring, &cofactors, &h)?;

    let grad: Vec<RingElem> = crate::ring::gradient(&ring);
    let mut generators = Vec::new();
    for u in 0..4 {
        for v in (u + 1)..4 {
            let mut coeffs: Vec<RingElem> =
                (0..4).map(|_| RingElem::zero(&ring)).collect();
            coeffs[u] = grad[v].clone();
            coeffs[v] = -&grad[u];
            generators.push(Derivation::new(&ring, coeffs)?);
        }
    }

    Ok(Preset {
        name: "russel",
        ring,
        generators,
        idempotent: pres.psi,
        rho: None,
        cofactors,
        h,
    })
}
