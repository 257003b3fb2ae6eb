//! Subcommand implementations.  Each returns a [`Report`] (or a
//! [`CliError`] for input problems); rendering and exit codes live in
//! `main`.

use serde_json::json;

use rinehart_core::{
    canonical_pair, check_flat, coboundary_scalar, curvature_matrix, curvature_oracle,
    detect_curvature_type, equivalence_transform, exactness_witness, gamma, h_bounded,
    is_closed, iso_bracket_residual, jacobi_residual, leibniz_residual, omega_n,
    pairs_equal, torsor_act, BoundedVerdict, CurvatureType, Error, LrContext, OneForm,
    RingElem, Sampler,
};

use crate::checks::{matrix_json, verify_battery, CheckSet};
use crate::presentation::{core_error, inputs_digest, load_input, CliError, Presentation};
use crate::report::{CheckResult, Report};

/// Shared flag values forwarded from the command line.
#[derive(Debug, Clone, Copy)]
pub struct Flags {
    pub maxdeg: u32,
    pub seed: u64,
    pub strict: bool,
    pub timings: bool,
}

fn finish(
    command: &str,
    p: &Presentation,
    flags: Flags,
    set: CheckSet,
    started: std::time::Instant,
) -> Report {
    let mut report = Report::new(
        command,
        inputs_digest(&p.spec),
        flags.seed,
        flags.maxdeg,
        set.checks,
        set.notes,
        flags.strict,
        flags.timings,
    );
    report.witnesses = set.witnesses;
    if flags.timings {
        report.total_millis = Some(started.elapsed().as_millis());
    }
    report
}

/// `verify PRESET`: the full reproduction battery.
pub fn cmd_verify(input: &str, flags: Flags) -> Result<Report, CliError> {
    let started = std::time::Instant::now();
    let p = load_input(input)?;
    let set = verify_battery(&p, flags.maxdeg, flags.seed);
    Ok(finish("verify", &p, flags, set, started))
}

/// `curvature FILE [--pair I J]`: per-pair curvature matrices, flatness
/// verdict, and the curvature-type result when a candidate is bundled.
pub fn cmd_curvature(
    input: &str,
    pair: Option<(usize, usize)>,
    flags: Flags,
) -> Result<Report, CliError> {
    let started = std::time::Instant::now();
    let p = load_input(input)?;
    let n = p.generators.len();
    let mut set = CheckSet::default();

    if let Some((i1, j1)) = pair {
        if i1 == 0 || j1 == 0 || i1 > n || j1 > n || i1 == j1 {
            return Err(CliError::new(
                "E_PARSE",
                format!("--pair wants two distinct 1-based indices up to {n}"),
            ));
        }
        let (i, j) = (i1.min(j1) - 1, j1.max(i1) - 1);
        let m = curvature_matrix(&p.idempotent, &p.generators[i], &p.generators[j]);
        let oracle = curvature_oracle(&p.idempotent, &p.generators[i], &p.generators[j]);
        set.checks.push(if m == oracle {
            CheckResult::pass("curvature_routes_agree_on_the_requested_pair")
        } else {
            CheckResult::fail(
                "curvature_routes_agree_on_the_requested_pair",
                json!({ "formula_route": matrix_json(&m), "operator_route": matrix_json(&oracle) }),
            )
        });
        set.witnesses.insert(
            "curvature".into(),
            json!({ "pair": [i + 1, j + 1], "matrix": matrix_json(&m) }),
        );
        return Ok(finish("curvature", &p, flags, set, started));
    }

    let mut pairs = Vec::new();
    let mut rvals = Vec::new();
    let mut agree = true;
    for i in 0..n {
        for j in (i + 1)..n {
            let m = curvature_matrix(&p.idempotent, &p.generators[i], &p.generators[j]);
            let oracle = curvature_oracle(&p.idempotent, &p.generators[i], &p.generators[j]);
            agree &= m == oracle;
            pairs.push(json!({ "pair": [i + 1, j + 1], "matrix": matrix_json(&m) }));
            rvals.push(m);
        }
    }
    set.checks.push(if agree {
        CheckResult::pass("curvature_routes_agree_on_generator_pairs")
    } else {
        CheckResult::fail(
            "curvature_routes_agree_on_generator_pairs",
            json!({ "detail": "formula and operator routes disagree" }),
        )
    });
    set.witnesses.insert("curvature_pairs".into(), json!(pairs));

    let flat = rvals.iter().all(|m| m.is_zero());
    set.witnesses.insert("flat".into(), json!(flat));

    if let Some(rho) = &p.rho {
        let tyval = match detect_curvature_type(&rvals, rho, flags.maxdeg) {
            CurvatureType::Found(sc) => json!({
                "multiple_of_candidate": true,
                "scalars": sc.iter().map(RingElem::display).collect::<Vec<_>>(),
            }),
            CurvatureType::NotOfThisType { pair, entry } => json!({
                "multiple_of_candidate": false,
                "pair": [pair.0 + 1, pair.1 + 1],
                "entry": [entry.0 + 1, entry.1 + 1],
            }),
            CurvatureType::InconclusiveAtBound { bound } => json!({
                "inconclusive_at_bound": bound,
            }),
        };
        set.witnesses.insert("curvature_type".into(), tyval);
    }
    Ok(finish("curvature", &p, flags, set, started))
}

/// `flat FILE`: a single boolean verdict relative to the declared
/// generators (shifted by the bundled potential when present).
pub fn cmd_flat(input: &str, flags: Flags) -> Result<Report, CliError> {
    let started = std::time::Instant::now();
    let p = load_input(input)?;
    let mut set = CheckSet::default();
    match check_flat(
        &p.idempotent,
        &p.generators,
        p.potential.as_ref(),
        flags.maxdeg,
    ) {
        Ok(flat) => {
            set.witnesses.insert("flat".into(), json!(flat));
            set.checks.push(
                CheckResult::pass("flatness_verdict_computed")
                    .with_detail(format!("flat: {flat}")),
            );
        }
        Err(Error::NoExpansion(b)) => {
            set.checks
                .push(CheckResult::inconclusive("flatness_verdict_computed", b));
        }
        Err(e) => return Err(core_error(e)),
    }
    Ok(finish("flat", &p, flags, set, started))
}

/// Which bracket-layer battery to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LrCheck {
    Jacobi,
    Gamma,
    Transform,
    Torsor,
}

/// `lr SUBCOMMAND FILE`: seeded spot-checks of one bracket-layer law.
pub fn cmd_lr(which: LrCheck, input: &str, flags: Flags) -> Result<Report, CliError> {
    let started = std::time::Instant::now();
    let p = load_input(input)?;
    let mut set = CheckSet::default();
    let ctx = match LrContext::new(&p.idempotent, &p.generators, flags.maxdeg) {
        Ok(ctx) => ctx,
        Err(Error::NoExpansion(b)) => {
            set.checks.push(CheckResult::inconclusive(
                "bracket_expansions_exist_over_declared_generators",
                b,
            ));
            return Ok(finish("lr", &p, flags, set, started));
        }
        Err(e) => return Err(core_error(e)),
    };
    let mut s = Sampler::new(flags.seed);
    match which {
        LrCheck::Jacobi => {
            let mut bad = None;
            for _ in 0..5 {
                let z1 = s.delement(&ctx, 1);
                let z2 = s.delement(&ctx, 1);
                let z3 = s.delement(&ctx, 1);
                let r = jacobi_residual(&ctx, &z1, &z2, &z3);
                if !r.is_zero(&ctx) {
                    bad = Some(json!({ "endo_residual": matrix_json(&r.endo) }));
                    break;
                }
                let w = s.delement(&ctx, 1);
                let a = s.elem(&p.ring, 1, 2);
                let l = leibniz_residual(&ctx, &z1, &a, &w);
                if !l.is_zero(&ctx) {
                    bad = Some(json!({ "endo_residual": matrix_json(&l.endo) }));
                    break;
                }
            }
            set.checks.push(match bad {
                None => CheckResult::pass("jacobi_and_leibniz_hold_on_sampled_elements"),
                Some(ce) => {
                    CheckResult::fail("jacobi_and_leibniz_hold_on_sampled_elements", ce)
                }
            });
        }
        LrCheck::Gamma => {
            let mut bad = None;
            'outer: for _ in 0..3 {
                let pot = s.potential(&p.idempotent, ctx.ngens(), 1);
                let shifted = match ctx.with_potential(pot.clone()) {
                    Ok(sh) => sh,
                    Err(e) => {
                        bad = Some(json!({ "error": e.to_string() }));
                        break 'outer;
                    }
                };
                for i in 0..ctx.ngens() {
                    for j in (i + 1)..ctx.ngens() {
                        let g = gamma(&ctx, &pot, i, j);
                        if &g.endo != shifted.curvature_pair(i, j)
                            || !ctx.derivation_of(&g.vec).is_zero()
                        {
                            bad = Some(json!({
                                "pair": [i + 1, j + 1],
                                "gamma_endo": matrix_json(&g.endo),
                                "shifted_curvature": matrix_json(shifted.curvature_pair(i, j)),
                            }));
                            break 'outer;
                        }
                    }
                }
                // The twist map must intertwine the two brackets.
                let z1 = s.delement(&ctx, 1);
                let z2 = s.delement(&ctx, 1);
                match iso_bracket_residual(&ctx, &pot, &z1, &z2) {
                    Ok(r) if r.is_zero(&ctx) => {}
                    Ok(r) => {
                        bad = Some(json!({ "endo_residual": matrix_json(&r.endo) }));
                        break;
                    }
                    Err(e) => {
                        bad = Some(json!({ "error": e.to_string() }));
                        break;
                    }
                }
            }
            set.checks.push(match bad {
                None => CheckResult::pass(
                    "gamma_matches_shifted_curvature_and_twist_intertwines",
                ),
                Some(ce) => CheckResult::fail(
                    "gamma_matches_shifted_curvature_and_twist_intertwines",
                    ce,
                ),
            });
        }
        LrCheck::Transform => {
            let base = canonical_pair(&ctx);
            let mut bad = None;
            for _ in 0..3 {
                let b1 = rinehart_core::GeneratorMap::new(
                    (0..ctx.ngens()).map(|_| s.corner(&p.idempotent, 1)).collect(),
                );
                let b2 = rinehart_core::GeneratorMap::new(
                    (0..ctx.ngens()).map(|_| s.corner(&p.idempotent, 1)).collect(),
                );
                let two = equivalence_transform(
                    &equivalence_transform(&base, &b1).map_err(core_error)?,
                    &b2,
                )
                .map_err(core_error)?;
                let one =
                    equivalence_transform(&base, &b1.add(&b2)).map_err(core_error)?;
                if !pairs_equal(&two, &one) {
                    bad = Some(json!({ "error": "composition is not additive" }));
                    break;
                }
            }
            set.checks.push(match bad {
                None => CheckResult::pass("equivalence_transforms_compose_additively"),
                Some(ce) => {
                    CheckResult::fail("equivalence_transforms_compose_additively", ce)
                }
            });
        }
        LrCheck::Torsor => {
            let base = canonical_pair(&ctx);
            let mut bad = None;
            for _ in 0..3 {
                let c: Vec<RingElem> =
                    (0..ctx.ngens()).map(|_| s.elem(&p.ring, 1, 2)).collect();
                let via_torsor = torsor_act(&base, &coboundary_scalar(&ctx, &c));
                let cphi = rinehart_core::GeneratorMap::new(
                    c.iter().map(|ci| p.idempotent.scale(ci)).collect(),
                );
                let via_transform =
                    equivalence_transform(&base, &cphi).map_err(core_error)?;
                if !pairs_equal(&via_torsor, &via_transform) {
                    bad = Some(json!({ "cochain": c
                        .iter()
                        .map(RingElem::display)
                        .collect::<Vec<_>>() }));
                    break;
                }
            }
            set.checks.push(match bad {
                None => CheckResult::pass("scalar_coboundaries_act_as_corner_transforms"),
                Some(ce) => {
                    CheckResult::fail("scalar_coboundaries_act_as_corner_transforms", ce)
                }
            });
        }
    }
    Ok(finish("lr", &p, flags, set, started))
}

/// Which differential-form query to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DerhamCheck {
    Closed,
    Exact,
    Hdim { degree: u8 },
    Omega,
}

fn parse_form(p: &Presentation, comps: &[String]) -> Result<OneForm, CliError> {
    if comps.len() != 3 {
        return Err(CliError::new(
            "E_PARSE",
            format!("a one-form needs exactly 3 components, got {}", comps.len()),
        ));
    }
    let mut parsed = Vec::with_capacity(3);
    for c in comps {
        parsed.push(RingElem::parse(&p.ring, c).map_err(core_error)?);
    }
    Ok(OneForm {
        comps: [parsed[0].clone(), parsed[1].clone(), parsed[2].clone()],
    })
}

/// `derham SUBCOMMAND [FILE] [--n N | --form ...]`.
pub fn cmd_derham(
    which: DerhamCheck,
    input: &str,
    n: Option<u32>,
    form: Option<Vec<String>>,
    flags: Flags,
) -> Result<Report, CliError> {
    let started = std::time::Instant::now();
    let p = load_input(input)?;
    if p.ring.nvars() != 3 {
        return Err(CliError::new(
            "E_PARSE",
            "differential-form commands need a ring in exactly 3 variables",
        ));
    }
    let mut set = CheckSet::default();

    let pick_form = |set: &mut CheckSet| -> Result<OneForm, CliError> {
        match (&form, n) {
            (Some(comps), _) => parse_form(&p, comps),
            (None, idx) => {
                let idx = idx.unwrap_or(0);
                let w = omega_n(&p.ring, idx).map_err(core_error)?;
                set.witnesses.insert(
                    "form".into(),
                    json!(w.comps.iter().map(RingElem::display).collect::<Vec<_>>()),
                );
                Ok(w)
            }
        }
    };

    match which {
        DerhamCheck::Omega => {
            let idx = n.unwrap_or(0);
            let w = omega_n(&p.ring, idx).map_err(core_error)?;
            set.witnesses.insert(
                "form".into(),
                json!(w.comps.iter().map(RingElem::display).collect::<Vec<_>>()),
            );
            set.checks.push(
                CheckResult::pass("standard_oneform_emitted")
                    .with_detail(format!("member {idx}")),
            );
        }
        DerhamCheck::Closed => {
            let w = pick_form(&mut set)?;
            match is_closed(&w, flags.maxdeg) {
                BoundedVerdict::Verified { witness } => {
                    set.witnesses.insert(
                        "closedness_multipliers".into(),
                        json!(witness.iter().map(RingElem::display).collect::<Vec<_>>()),
                    );
                    set.checks.push(CheckResult::pass("oneform_is_closed"));
                }
                BoundedVerdict::Inconclusive { bound } => {
                    set.checks
                        .push(CheckResult::inconclusive("oneform_is_closed", bound));
                }
            }
        }
        DerhamCheck::Exact => {
            let w = pick_form(&mut set)?;
            match exactness_witness(&w, flags.maxdeg) {
                Some((g, a)) => {
                    set.witnesses.insert(
                        "exactness_witness".into(),
                        json!({
                            "potential": g.display(),
                            "relation_multiplier": a.display(),
                        }),
                    );
                    set.checks.push(
                        CheckResult::pass("oneform_is_exact")
                            .with_detail(format!("potential: {}", g.display())),
                    );
                }
                None => {
                    set.checks
                        .push(CheckResult::inconclusive("oneform_is_exact", flags.maxdeg));
                }
            }
        }
        DerhamCheck::Hdim { degree } => {
            let rep = h_bounded(&p.ring, degree, flags.maxdeg).map_err(core_error)?;
            set.witnesses.insert(
                "bounded_cohomology".into(),
                json!({
                    "degree": rep.degree,
                    "maxdeg": rep.maxdeg,
                    "dim_closed": rep.dim_closed,
                    "dim_exact": rep.dim_exact,
                    "dim_quotient": rep.dim_quotient,
                    "representatives": rep
                        .representatives
                        .iter()
                        .map(|r| r.iter().map(RingElem::display).collect::<Vec<_>>())
                        .collect::<Vec<_>>(),
                }),
            );
            set.notes.push(
                "dimension counts are degree-filtered approximations; they describe the \
                 stated truncation only"
                    .to_string(),
            );
            set.checks.push(
                CheckResult::pass("bounded_cohomology_computed").with_detail(format!(
                    "degree {}: {} closed / {} exact / {} residual at bound {}",
                    rep.degree,
                    rep.dim_closed,
                    rep.dim_exact,
                    rep.dim_quotient,
                    rep.maxdeg
                )),
            );
        }
    }
    Ok(finish("derham", &p, flags, set, started))
}

/// `presets`: list the bundled inputs.
pub fn cmd_presets(flags: Flags) -> Report {
    let mut set = CheckSet::default();
    for name in ["sphere", "russel"] {
        let p = load_input(name).expect("bundled preset parses");
        set.witnesses.insert(
            name.into(),
            json!({
                "variables": p.spec.ring.variables,
                "relation": p.spec.ring.relation,
                "generators": p.generators.len(),
                "has_candidate_matrix": p.rho.is_some(),
            }),
        );
    }
    set.checks.push(CheckResult::pass("bundled_presets_parse"));
    let mut report = Report::new(
        "presets",
        "sha256:-",
        flags.seed,
        flags.maxdeg,
        set.checks,
        set.notes,
        flags.strict,
        flags.timings,
    );
    report.witnesses = set.witnesses;
    report
}
