//! Presentation files: the JSON input format describing a quotient ring,
//! tangent generators, an idempotent, and optional extras, together with
//! validation into core objects.
//!
//! Polynomials are strings in the canonical text form (`c * x^e * y^f`,
//! rational coefficients as `num/den`), derivations are arrays of
//! polynomial strings (one per variable), and matrices are arrays of rows
//! of polynomial strings.

use serde::{Deserialize, Serialize};

use rinehart_core::{
    verify_idempotent, Derivation, Error, GeneratorMap, HypersurfaceRing, MatrixA,
    RingElem, RingRef,
};

/// Machine-readable command-line error: a stable code plus a message.
#[derive(Debug, Clone, thiserror::Error)]
#[error("{code}: {message}")]
pub struct CliError {
    pub code: &'static str,
    pub message: String,
}

impl CliError {
    pub fn new(code: &'static str, message: impl Into<String>) -> Self {
        CliError { code, message: message.into() }
    }
}

pub fn core_error(e: Error) -> CliError {
    let code = match &e {
        Error::NotIdempotent => "E_NOT_IDEMPOTENT",
        Error::NotTangent(_) => "E_NOT_TANGENT",
        Error::CofactorIdentity(_) => "E_COFACTOR",
        _ => "E_PARSE",
    };
    CliError::new(code, e.to_string())
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RingSpec {
    pub variables: Vec<String>,
    pub relation: String,
    pub leading_variable: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OptionsSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub maxdeg: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

/// The raw JSON shape of a presentation file.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PresentationSpec {
    pub ring: RingSpec,
    pub generators: Vec<Vec<String>>,
    pub idempotent: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub potential: Option<Vec<Vec<Vec<String>>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cofactors: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub options: Option<OptionsSpec>,
}

/// A validated presentation: every field parsed into core objects.
#[derive(Debug)]
pub struct Presentation {
    pub label: String,
    pub spec: PresentationSpec,
    pub ring: RingRef,
    pub generators: Vec<Derivation>,
    pub idempotent: MatrixA,
    pub rho: Option<MatrixA>,
    pub potential: Option<GeneratorMap>,
    pub cofactors: Option<Vec<RingElem>>,
    pub h: Option<RingElem>,
}

pub const PRESET_SPHERE: &str = include_str!("../presets/sphere.json");
pub const PRESET_RUSSEL: &str = include_str!("../presets/russel.json");

/// Resolves a command-line input argument: the bundled preset names
/// `sphere` and `russel` (alias `russell`) take precedence, anything else
/// is read as a file path.
pub fn resolve_input(arg: &str) -> Result<(String, String), CliError> {
    match arg {
        "sphere" => Ok(("sphere".into(), PRESET_SPHERE.to_string())),
        "russel" | "russell" => Ok(("russel".into(), PRESET_RUSSEL.to_string())),
        path => match std::fs::read_to_string(path) {
            Ok(text) => Ok((path.to_string(), text)),
            Err(e) => Err(CliError::new(
                "E_IO",
                format!("cannot read presentation file {path:?}: {e}"),
            )),
        },
    }
}

/// Parses and validates presentation JSON text.
pub fn parse_presentation(label: &str, text: &str) -> Result<Presentation, CliError> {
    let spec: PresentationSpec = serde_json::from_str(text).map_err(|e| {
        CliError::new("E_PARSE", format!("invalid presentation JSON: {e}"))
    })?;
    build_presentation(label, spec)
}

fn parse_matrix(ring: &RingRef, rows: &[Vec<String>], what: &str) -> Result<MatrixA, CliError> {
    let borrowed: Vec<Vec<&str>> =
        rows.iter().map(|r| r.iter().map(String::as_str).collect()).collect();
    MatrixA::parse(ring, &borrowed)
        .map_err(|e| CliError::new("E_PARSE", format!("{what}: {e}")))
}

fn build_presentation(label: &str, spec: PresentationSpec) -> Result<Presentation, CliError> {
    let var_refs: Vec<&str> = spec.ring.variables.iter().map(String::as_str).collect();
    let ring = HypersurfaceRing::parse(
        &var_refs,
        &spec.ring.relation,
        &spec.ring.leading_variable,
    )
    .map_err(core_error)?;

    if spec.generators.is_empty() {
        return Err(CliError::new("E_PARSE", "presentation declares no generators"));
    }
    let mut generators = Vec::with_capacity(spec.generators.len());
    for (k, coeffs) in spec.generators.iter().enumerate() {
        if coeffs.len() != ring.nvars() {
            return Err(CliError::new(
                "E_PARSE",
                format!(
                    "generator {} has {} coefficients for {} variables",
                    k + 1,
                    coeffs.len(),
                    ring.nvars()
                ),
            ));
        }
        let mut parsed = Vec::with_capacity(coeffs.len());
        for c in coeffs {
            parsed.push(RingElem::parse(&ring, c).map_err(core_error)?);
        }
        generators.push(Derivation::new(&ring, parsed).map_err(|e| {
            let mut err = core_error(e);
            err.message = format!("generator {}: {}", k + 1, err.message);
            err
        })?);
    }

    let idempotent = parse_matrix(&ring, &spec.idempotent, "idempotent")?;
    if !idempotent.is_square() || idempotent.nrows() != ring.nvars() {
        return Err(CliError::new(
            "E_PARSE",
            format!(
                "idempotent must be a {n} x {n} matrix",
                n = ring.nvars()
            ),
        ));
    }
    if !verify_idempotent(&idempotent) {
        return Err(CliError::new(
            "E_NOT_IDEMPOTENT",
            "the declared matrix is not idempotent (m * m != m)",
        ));
    }

    let rho = match &spec.rho {
        Some(rows) => Some(parse_matrix(&ring, rows, "rho")?),
        None => None,
    };

    let potential = match &spec.potential {
        Some(values) => {
            if values.len() != generators.len() {
                return Err(CliError::new(
                    "E_PARSE",
                    format!(
                        "potential has {} values for {} generators",
                        values.len(),
                        generators.len()
                    ),
                ));
            }
            let mut mats = Vec::with_capacity(values.len());
            for rows in values {
                mats.push(parse_matrix(&ring, rows, "potential value")?);
            }
            Some(GeneratorMap::new(mats))
        }
        None => None,
    };

    let cofactors = match &spec.cofactors {
        Some(list) => {
            if list.len() != ring.nvars() {
                return Err(CliError::new(
                    "E_PARSE",
                    format!(
                        "{} cofactors given for {} variables",
                        list.len(),
                        ring.nvars()
                    ),
                ));
            }
            let mut parsed = Vec::with_capacity(list.len());
            for c in list {
                parsed.push(RingElem::parse(&ring, c).map_err(core_error)?);
            }
            Some(parsed)
        }
        None => None,
    };
    let h = match &spec.h {
        Some(text) => Some(RingElem::parse(&ring, text).map_err(core_error)?),
        None => None,
    };
    if let (Some(cof), Some(hval)) = (&cofactors, &h) {
        // The cofactor identity is validated eagerly so that a bad pair is
        // an input error, not a late check failure.
        rinehart_core::jacobian_splitting_idempotent(&ring, cof, hval)
            .map_err(core_error)?;
    }

    Ok(Presentation {
        label: label.to_string(),
        spec,
        ring,
        generators,
        idempotent,
        rho,
        potential,
        cofactors,
        h,
    })
}

/// Loads and validates the input argument (preset name or path).
pub fn load_input(arg: &str) -> Result<Presentation, CliError> {
    let (label, text) = resolve_input(arg)?;
    parse_presentation(&label, &text)
}

/// Canonical digest of the validated input: SHA-256 over the
/// deterministically re-serialized spec.
pub fn inputs_digest(spec: &PresentationSpec) -> String {
    use sha2::{Digest, Sha256};
    let canonical = serde_json::to_string(spec).expect("spec serializes");
    let mut hasher = Sha256::new();
    hasher.update(canonical.as_bytes());
    format!("sha256:{:x}", hasher.finalize())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rinehart_core::{preset_russell, preset_sphere};

    #[test]
    fn bundled_sphere_preset_matches_the_library_preset() {
        let p = load_input("sphere").unwrap();
        let lib = preset_sphere().unwrap();
        assert_eq!(p.idempotent, lib.idempotent);
        assert_eq!(p.rho.as_ref().unwrap(), lib.rho.as_ref().unwrap());
        assert_eq!(p.generators.len(), lib.generators.len());
        for (a, b) in p.generators.iter().zip(&lib.generators) {
            assert_eq!(a.coeffs(), b.coeffs());
        }
        assert_eq!(p.cofactors.as_ref().unwrap(), &lib.cofactors);
        assert_eq!(p.h.as_ref().unwrap(), &lib.h);
    }

    #[test]
    fn bundled_russel_preset_matches_the_library_preset() {
        let p = load_input("russell").unwrap();
        let lib = preset_russell().unwrap();
        assert_eq!(p.idempotent, lib.idempotent);
        assert_eq!(p.generators.len(), lib.generators.len());
        for (a, b) in p.generators.iter().zip(&lib.generators) {
            assert_eq!(a.coeffs(), b.coeffs());
        }
    }

    #[test]
    fn rho_in_place_of_the_idempotent_is_rejected() {
        let text = PRESET_SPHERE.replace(
            "\"idempotent\"",
            "\"unused\"",
        );
        // Swap: declare rho's rows as the idempotent.
        let mut spec: serde_json::Value = serde_json::from_str(&text).unwrap();
        spec["idempotent"] = spec["rho"].clone();
        let err = parse_presentation("bad", &spec.to_string()).unwrap_err();
        assert_eq!(err.code, "E_NOT_IDEMPOTENT");
    }

    #[test]
    fn non_tangent_generators_are_rejected() {
        let mut spec: serde_json::Value = serde_json::from_str(PRESET_SPHERE).unwrap();
        spec["generators"][0] = serde_json::json!(["x", "y", "z"]);
        let err = parse_presentation("bad", &spec.to_string()).unwrap_err();
        assert_eq!(err.code, "E_NOT_TANGENT");
    }

    #[test]
    fn bad_cofactors_are_rejected() {
        let mut spec: serde_json::Value = serde_json::from_str(PRESET_SPHERE).unwrap();
        spec["cofactors"] = serde_json::json!(["x", "y", "z"]);
        let err = parse_presentation("bad", &spec.to_string()).unwrap_err();
        assert_eq!(err.code, "E_COFACTOR");
    }

    #[test]
    fn digests_are_stable_and_input_sensitive() {
        let a = load_input("sphere").unwrap();
        let b = load_input("sphere").unwrap();
        assert_eq!(inputs_digest(&a.spec), inputs_digest(&b.spec));
        let c = load_input("russel").unwrap();
        assert_ne!(inputs_digest(&a.spec), inputs_digest(&c.spec));
    }
}
