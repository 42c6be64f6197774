//! JSON input documents.
//!
//! ```json
//! {"centers":[{"id":1,"kind":"origin"},{"id":2,"kind":"free","on":1},
//!             {"id":3,"kind":"satellite","on":[1,2]}],
//!  "marked":[3]}
//! ```

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poincare::CurveMarking;
use crate::resolution::{Center, CenterKind, ResolutionModel};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum RawKind {
    Origin,
    Free { on: usize },
    Satellite { on: [usize; 2] },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct RawCenter {
    id: usize,
    #[serde(flatten)]
    kind: RawKind,
}

/// A single size for every coordinate, or one per coordinate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BoxSpec {
    Uniform(u64),
    PerCoordinate(Vec<u64>),
}

impl BoxSpec {
    pub fn resolve(&self, r: usize) -> Result<Vec<u64>> {
        match self {
            BoxSpec::Uniform(n) => Ok(vec![*n; r]),
            BoxSpec::PerCoordinate(v) if v.len() == r => Ok(v.clone()),
            BoxSpec::PerCoordinate(v) => Err(Error::ArityMismatch { expected: r, found: v.len() }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputDocument {
    centers: Vec<RawCenter>,
    pub marked: Vec<usize>,
    /// Branches per divisor for curve commands; keys are vertex ids.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub arrows: Option<BTreeMap<String, usize>>,
    #[serde(default, rename = "box", skip_serializing_if = "Option::is_none")]
    pub bound: Option<BoxSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kmax: Option<usize>,
}

impl InputDocument {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn centers(&self) -> Vec<Center> {
        self.centers
            .iter()
            .map(|c| Center {
                id: c.id,
                kind: match c.kind {
                    RawKind::Origin => CenterKind::Origin,
                    RawKind::Free { on } => CenterKind::Free(on),
                    RawKind::Satellite { on: [a, b] } => CenterKind::Satellite(a, b),
                },
            })
            .collect()
    }

    /// Builds the model and validates the marked list against it.
    pub fn model(&self) -> Result<ResolutionModel> {
        let model = ResolutionModel::new(&self.centers())?;
        model.check_marked(&self.marked)?;
        Ok(model)
    }

    /// The curve with one branch per marked divisor. An `arrows` map, when
    /// present, must agree with that (one branch at each marked vertex).
    pub fn curve_marking(&self) -> Result<CurveMarking> {
        let model = self.model()?;
        if let Some(arrows) = &self.arrows {
            let mut parsed = BTreeMap::new();
            for (k, &count) in arrows {
                let v: usize = k.parse().map_err(|_| Error::Parse(format!("arrow key {k:?} is not a vertex id")))?;
                if count > 0 {
                    parsed.insert(v, count);
                }
            }
            let expected: BTreeMap<usize, usize> = self.marked.iter().map(|&v| (v, 1)).collect();
            if parsed != expected {
                return Err(Error::InvalidMarking(format!(
                    "arrows {parsed:?} must put exactly one branch on each marked vertex {:?}",
                    self.marked
                )));
            }
        }
        CurveMarking::new(model, &self.marked)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const EXAMPLE: &str = r#"{"centers":[{"id":1,"kind":"origin"},{"id":2,"kind":"free","on":1},{"id":3,"kind":"free","on":2},{"id":4,"kind":"satellite","on":[1,2]},{"id":5,"kind":"free","on":4},{"id":6,"kind":"satellite","on":[4,5]},{"id":7,"kind":"free","on":6}],"marked":[3,7,6]}"#;

    #[test]
    fn parses_example() {
        let doc = InputDocument::parse(EXAMPLE).unwrap();
        let c = doc.centers();
        assert_eq!(c[3], Center::satellite(4, 1, 2));
        assert_eq!(c[4], Center::free(5, 4));
        let m = doc.model().unwrap();
        assert_eq!(m.projected(1, &doc.marked), vec![1, 4, 4]);
        assert!(doc.bound.is_none());
    }

    #[test]
    fn rejects_bad_documents() {
        assert!(matches!(InputDocument::parse("{"), Err(Error::Parse(_))));
        assert!(matches!(
            InputDocument::parse(r#"{"centers":[{"id":1,"kind":"weird"}],"marked":[1]}"#),
            Err(Error::Parse(_))
        ));
        let doc = InputDocument::parse(r#"{"centers":[{"id":1,"kind":"origin"}],"marked":[2]}"#).unwrap();
        assert!(matches!(doc.model(), Err(Error::VertexOutOfRange { .. })));
        let doc = InputDocument::parse(r#"{"centers":[{"id":1,"kind":"origin"}],"marked":[1,1]}"#).unwrap();
        assert!(matches!(doc.model(), Err(Error::InvalidMarking(_))));
    }

    #[test]
    fn arrows_and_box() {
        let text = EXAMPLE.replace("\"marked\":[3,7,6]", "\"marked\":[3,7,6],\"arrows\":{\"3\":1,\"7\":1,\"6\":1},\"box\":[1,2,3]");
        let doc = InputDocument::parse(&text).unwrap();
        assert_eq!(doc.curve_marking().unwrap().branches(), &[3, 7, 6]);
        assert_eq!(doc.bound.as_ref().unwrap().resolve(3).unwrap(), vec![1, 2, 3]);
        let bad = EXAMPLE.replace("\"marked\":[3,7,6]", "\"marked\":[3,7,6],\"arrows\":{\"3\":2}");
        let doc = InputDocument::parse(&bad).unwrap();
        assert!(matches!(doc.curve_marking(), Err(Error::InvalidMarking(_))));
        assert_eq!(BoxSpec::Uniform(4).resolve(2).unwrap(), vec![4, 4]);
    }
}
