use std::fs;
use std::path::Path;

use borel_stokes::{CauchyDatum, Equation, QuadratureSpec};
use serde::{Deserialize, Serialize};

use crate::Failure;

/// On-disk problem description.
///
/// ```json
/// {"p": 1, "q": 2,
///  "datum": {"poles": [{"z": [1.0, 0.0], "coeffs": [[1.0, 0.0]]}], "entire": []},
///  "quad": {"tol": 1e-10}}
/// ```
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub p: u32,
    pub q: u32,
    pub datum: CauchyDatum,
    #[serde(default)]
    pub quad: Option<QuadratureSpec>,
}

pub struct Problem {
    pub eq: Equation,
    pub datum: CauchyDatum,
    pub quad: QuadratureSpec,
}

impl ProblemFile {
    pub fn into_problem(self) -> Result<Problem, Failure> {
        let eq = Equation::new(self.p, self.q)?;
        let quad = self.quad.unwrap_or_default();
        quad.validate()?;
        Ok(Problem { eq, datum: self.datum, quad })
    }
}

pub fn load(path: &Path, tol: Option<f64>) -> Result<Problem, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?;
    let file: ProblemFile =
        serde_json::from_str(&text).map_err(|e| Failure::usage(format!("invalid problem file {}: {e}", path.display())))?;
    let mut problem = file.into_problem()?;
    if let Some(tol) = tol {
        problem.quad.tol = tol;
        problem.quad.validate()?;
    }
    Ok(problem)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_the_documented_schema() {
        let text = r#"{"p": 1, "q": 2,
            "datum": {"poles": [{"z": [1.0, 0.0], "coeffs": [[1.0, 0.0]]}], "entire": []},
            "quad": {"tol": 1e-10}}"#;
        let file: ProblemFile = serde_json::from_str(text).unwrap();
        let problem = file.into_problem().unwrap();
        assert!(problem.eq.is_heat());
        assert_eq!(problem.quad.tol, 1e-10);
        assert_eq!(problem.quad.ray_margin, QuadratureSpec::default().ray_margin);
    }

    #[test]
    fn rejects_unknown_keys_and_bad_equations() {
        let extra = r#"{"p": 1, "q": 2, "datum": {"poles": [], "entire": []}, "r": 3}"#;
        assert!(serde_json::from_str::<ProblemFile>(extra).is_err());
        let bad_quad = r#"{"p": 1, "q": 2, "datum": {"poles": [], "entire": []}, "quad": {"tolerance": 1}}"#;
        assert!(serde_json::from_str::<ProblemFile>(bad_quad).is_err());
        let same = r#"{"p": 2, "q": 2, "datum": {"poles": [], "entire": []}}"#;
        let file: ProblemFile = serde_json::from_str(same).unwrap();
        assert!(file.into_problem().is_err());
    }
}
