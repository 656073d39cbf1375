//! Presentation files in TOML.
//!
//! ```toml
//! modulus = 0
//! relations = ["x0 + x3 + x6"]
//!
//! [[generators]]
//! name = "x0"
//! degree = -2
//! parity = "even"
//!
//! [action]
//! order = 9
//! images = { x0 = "x1" }
//! ```
//!
//! Every declared generator needs an image when an action is present.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{Algebra, AlgebraPresentation, Coeff, CyclicAction, GcaError, Generator};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresentationFile {
    pub modulus: u64,
    pub generators: Vec<Generator>,
    #[serde(default)]
    pub relations: Vec<String>,
    pub action: Option<ActionSpec>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionSpec {
    pub order: usize,
    pub images: BTreeMap<String, String>,
}

impl PresentationFile {
    /// Validate and build the presentation and, if declared, its action.
    pub fn build<R: Coeff>(&self) -> Result<(Algebra, Option<CyclicAction<R>>), GcaError> {
        if self.modulus != 0 && !is_power_of_three(self.modulus) {
            return Err(GcaError::File(format!("modulus {} is neither 0 nor a power of 3", self.modulus)));
        }
        let rels: Vec<&str> = self.relations.iter().map(String::as_str).collect();
        let alg = AlgebraPresentation::with_text_relations(self.modulus, self.generators.clone(), &rels)?;
        let Some(spec) = &self.action else { return Ok((alg, None)) };
        for name in spec.images.keys() {
            alg.generator_index(name)?;
        }
        let mut images = Vec::with_capacity(self.generators.len());
        for g in &self.generators {
            let img = spec
                .images
                .get(&g.name)
                .ok_or_else(|| GcaError::File(format!("action has no image for {:?}", g.name)))?;
            images.push(img.as_str());
        }
        let action = CyclicAction::from_text(&alg, spec.order, &images)?;
        Ok((alg, Some(action)))
    }
}

fn is_power_of_three(mut n: u64) -> bool {
    while n > 1 && n % 3 == 0 {
        n /= 3;
    }
    n == 1
}

/// Parse a presentation document from TOML text.
pub fn parse_presentation(text: &str) -> Result<PresentationFile, GcaError> {
    toml::from_str(text).map_err(|e| GcaError::File(e.to_string()))
}

/// Read and parse a presentation document.
pub fn load_presentation(path: &Path) -> Result<PresentationFile, GcaError> {
    let text = std::fs::read_to_string(path).map_err(|e| GcaError::File(format!("{}: {e}", path.display())))?;
    parse_presentation(&text)
}

#[cfg(test)]
mod tests {
    use super::super::{sym_induced_rho, Element};
    use super::*;

    fn bundled_m() -> PresentationFile {
        let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("presentations/sym_induced_rho.toml");
        load_presentation(&path).unwrap()
    }

    #[test]
    fn bundled_file_matches_builtin() {
        let (alg, action) = bundled_m().build::<i64>().unwrap();
        let action = action.unwrap();
        let (builtin, gamma) = sym_induced_rho();
        assert_eq!(alg.free_names(), builtin.free_names());
        for t in [-2, -4] {
            assert_eq!(action.action_matrix(t).unwrap(), gamma.action_matrix(t).unwrap());
        }
        let x5 = Element::<i64>::parse(&alg, "x5").unwrap();
        assert_eq!(action.apply(&x5), Element::parse(&alg, "-x0 - x3").unwrap());
    }

    #[test]
    fn bundled_t_file_loads() {
        let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("presentations/polynomial_exterior.toml");
        let (alg, action) = load_presentation(&path).unwrap().build::<crate::F3>().unwrap();
        assert_eq!(alg.n_free(), 6);
        assert_eq!(action.unwrap().order(), 3);
    }

    #[test]
    fn missing_image_is_rejected() {
        let mut f = bundled_m();
        f.action.as_mut().unwrap().images.remove("x4");
        assert!(matches!(f.build::<i64>(), Err(GcaError::File(_))));
    }

    #[test]
    fn unknown_fields_and_moduli_are_rejected() {
        let text = "modulus = 0\ngenerators = []\ncolour = 1\n";
        assert!(parse_presentation(text).is_err());
        let f = parse_presentation("modulus = 6\ngenerators = []\n").unwrap();
        assert!(f.build::<i64>().is_err());
        let f = parse_presentation(
            "modulus = 0\nrelations = [\"a + z\"]\n[[generators]]\nname = \"a\"\ndegree = -2\nparity = \"even\"\n",
        )
        .unwrap();
        assert!(matches!(f.build::<i64>(), Err(GcaError::UnknownGenerator(_))));
    }

    #[test]
    fn round_trips_through_toml() {
        let f = bundled_m();
        let text = toml::to_string(&f).unwrap();
        assert_eq!(parse_presentation(&text).unwrap(), f);
    }
}
