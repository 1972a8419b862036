//! Text and JSON serialization of ideals.
//!
//! Text form: a `shape: m1,...,mn` header, then one generator per line in
//! the monomial text format. `#` starts a comment and blank lines are
//! ignored. JSON form: `{"shape": [...], "generators": [[...], ...]}` with
//! an optional `warnings` list.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ideal::MonomialIdeal;
use crate::monomial::{BlockShape, Monomial};

pub fn parse_ideal(text: &str) -> Result<MonomialIdeal> {
    let mut shape: Option<BlockShape> = None;
    let mut gens = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        match &shape {
            None => {
                let sizes = line.strip_prefix("shape:").ok_or_else(|| {
                    Error::Parse(format!("line {}: expected 'shape: ...' header", lineno + 1))
                })?;
                shape = Some(sizes.trim().parse()?);
            }
            Some(s) => gens.push(
                Monomial::parse(s, line)
                    .map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)))?,
            ),
        }
    }
    let shape = shape.ok_or_else(|| Error::Parse("missing 'shape: ...' header".into()))?;
    MonomialIdeal::minimalize(&shape, gens)
}

pub fn format_ideal(ideal: &MonomialIdeal) -> String {
    let mut out = format!("shape: {}\n", ideal.shape());
    for g in ideal.generators() {
        out.push_str(&g.to_string());
        out.push('\n');
    }
    out
}

/// JSON mirror of an ideal.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdealDocument {
    pub shape: Vec<usize>,
    pub generators: Vec<Vec<u32>>,
    #[serde(default)]
    pub warnings: Vec<String>,
}

impl IdealDocument {
    pub fn new(ideal: &MonomialIdeal, warnings: Vec<String>) -> Self {
        Self {
            shape: ideal.shape().block_sizes().to_vec(),
            generators: ideal
                .generators()
                .iter()
                .map(|g| g.exponents().to_vec())
                .collect(),
            warnings,
        }
    }

    pub fn to_ideal(&self) -> Result<MonomialIdeal> {
        let shape = BlockShape::new(&self.shape)?;
        let gens = self
            .generators
            .iter()
            .map(|e| Monomial::from_exponents(&shape, e.clone()))
            .collect::<Result<Vec<_>>>()?;
        MonomialIdeal::minimalize(&shape, gens)
    }
}

pub fn ideal_to_json(ideal: &MonomialIdeal, warnings: Vec<String>) -> String {
    serde_json::to_string(&IdealDocument::new(ideal, warnings)).expect("ideal serializes")
}

pub fn ideal_from_json(text: &str) -> Result<MonomialIdeal> {
    let doc: IdealDocument = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    doc.to_ideal()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip() {
        let text = "# I_2 of K'_{2,2}\nshape: 2,2\n\nx[1,2]*x[2,2]\nx[1,1]*x[2,1]  # first\n";
        let ideal = parse_ideal(text).unwrap();
        assert_eq!(
            format_ideal(&ideal),
            "shape: 2,2\nx[1,1]*x[2,1]\nx[1,2]*x[2,2]\n"
        );
        assert_eq!(parse_ideal(&format_ideal(&ideal)).unwrap(), ideal);
    }

    #[test]
    fn zero_and_unit() {
        let zero = parse_ideal("shape: 3\n").unwrap();
        assert!(zero.is_zero());
        assert_eq!(format_ideal(&zero), "shape: 3\n");
        let unit = parse_ideal("shape: 3\n1\nx[1,2]\n").unwrap();
        assert!(unit.is_unit());
        assert_eq!(format_ideal(&unit), "shape: 3\n1\n");
    }

    #[test]
    fn malformed_files() {
        assert!(parse_ideal("").is_err());
        assert!(parse_ideal("x[1,1]\n").is_err());
        assert!(parse_ideal("shape: 2\nx[2,1]\n").is_err());
        assert!(parse_ideal("shape: 2,x\n").is_err());
    }

    #[test]
    fn json_round_trip() {
        let ideal = parse_ideal("shape: 2,2\nx[1,1]^2*x[2,2]\nx[1,2]\n").unwrap();
        let json = ideal_to_json(&ideal, vec!["note".into()]);
        assert_eq!(
            json,
            r#"{"shape":[2,2],"generators":[[2,0,0,1],[0,1,0,0]],"warnings":["note"]}"#
        );
        assert_eq!(ideal_from_json(&json).unwrap(), ideal);
        assert_eq!(
            ideal_from_json(r#"{"shape":[1],"generators":[[1]]}"#)
                .unwrap()
                .len(),
            1
        );
        assert!(ideal_from_json(r#"{"shape":[2],"generators":[[1]]}"#).is_err());
    }
}
