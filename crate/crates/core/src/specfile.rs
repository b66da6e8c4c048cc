//! JSON sequence description files.
//!
//! ```json
//! {"kind": "explicit", "space_dim": 2, "elements": [[[1, 0], [0, 0]], [[1, 0], [1, 0]]]}
//! {"kind": "weighted_onb", "sigma": {"map": "identity"}, "weights": {"form": "poly", "a": 1, "p": 1, "b": 1}}
//! {"kind": "anchored_onb", "anchor": 1}
//! ```
//!
//! Coordinates of explicit elements are `[re, im]` pairs; a bare number is
//! read as a real coordinate.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, ValidationError};
use crate::numkernel::C64;
use crate::sequences::{FiniteSequence, HVector, IndexMap, StructuredSequence, WeightForm};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Coord {
    Real(f64),
    Complex([f64; 2]),
}

impl Coord {
    fn value(self) -> C64 {
        match self {
            Coord::Real(x) => C64::new(x, 0.0),
            Coord::Complex([re, im]) => C64::new(re, im),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SequenceSpec {
    Explicit {
        space_dim: usize,
        elements: Vec<Vec<Coord>>,
    },
    WeightedOnb {
        sigma: IndexMap,
        weights: WeightForm,
    },
    AnchoredOnb {
        anchor: usize,
    },
}

/// A validated sequence ready for analysis.
#[derive(Debug, Clone, PartialEq)]
pub enum CheckedSequence {
    Finite(FiniteSequence),
    Structured(StructuredSequence),
}

impl SequenceSpec {
    pub fn validate(&self) -> Result<CheckedSequence, ValidationError> {
        match self {
            SequenceSpec::Explicit {
                space_dim,
                elements,
            } => {
                if *space_dim == 0 {
                    return Err(ValidationError::ZeroDimension);
                }
                if elements.is_empty() {
                    return Err(ValidationError::EmptySequence);
                }
                let mut vectors = Vec::with_capacity(elements.len());
                for (i, e) in elements.iter().enumerate() {
                    if e.len() != *space_dim {
                        return Err(ValidationError::DimensionMismatch {
                            index: i + 1,
                            expected: *space_dim,
                            found: e.len(),
                        });
                    }
                    let coords: Vec<C64> = e.iter().map(|c| c.value()).collect();
                    let v = HVector::new(coords).map_err(|err| match err {
                        ValidationError::NonFiniteCoordinate { position, .. } => {
                            ValidationError::NonFiniteCoordinate {
                                index: i + 1,
                                position,
                            }
                        }
                        other => other,
                    })?;
                    vectors.push(v);
                }
                Ok(CheckedSequence::Finite(FiniteSequence::new(
                    *space_dim, vectors,
                )?))
            }
            SequenceSpec::WeightedOnb { sigma, weights } => Ok(CheckedSequence::Structured(
                StructuredSequence::weighted(sigma.clone(), weights.clone())?,
            )),
            SequenceSpec::AnchoredOnb { anchor } => Ok(CheckedSequence::Structured(
                StructuredSequence::anchored(*anchor)?,
            )),
        }
    }
}

// Flat mirrors of the tagged enums. Deserializing these streams straight
// from the text, so unknown tags and bad values keep their line and field.

#[derive(Deserialize)]
#[serde(rename_all = "snake_case")]
enum KindTag {
    Explicit,
    WeightedOnb,
    AnchoredOnb,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    kind: KindTag,
    space_dim: Option<usize>,
    elements: Option<Vec<Vec<Coord>>>,
    sigma: Option<RawSigma>,
    weights: Option<RawWeights>,
    anchor: Option<usize>,
}

#[derive(Deserialize)]
#[serde(rename_all = "snake_case")]
enum MapTag {
    Identity,
    Repeated,
    Alternating,
    Triangular,
    Prefixed,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSigma {
    map: MapTag,
    times: Option<usize>,
    anchor: Option<usize>,
    prefix: Option<Vec<usize>>,
    tail: Option<Box<RawSigma>>,
}

#[derive(Deserialize)]
#[serde(rename_all = "snake_case")]
enum FormTag {
    Constant,
    Poly,
    Exp,
    Prefixed,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawWeights {
    form: FormTag,
    c: Option<f64>,
    a: Option<f64>,
    p: Option<f64>,
    b: Option<f64>,
    r: Option<f64>,
    prefix: Option<Vec<f64>>,
    tail: Option<Box<RawWeights>>,
}

fn required<T>(value: Option<T>, field: &str) -> Result<T> {
    value.ok_or_else(|| Error::SpecFile(format!("missing field `{field}`")))
}

fn unexpected(present: bool, field: &str, owner: &str) -> Result<()> {
    if present {
        Err(Error::SpecFile(format!("field `{field}` is not allowed for {owner}")))
    } else {
        Ok(())
    }
}

impl RawSigma {
    fn convert(self, path: &str) -> Result<IndexMap> {
        let f = |name: &str| format!("{path}.{name}");
        let owner = format!("`{path}`");
        Ok(match self.map {
            MapTag::Identity | MapTag::Triangular => {
                unexpected(self.times.is_some(), &f("times"), &owner)?;
                unexpected(self.anchor.is_some(), &f("anchor"), &owner)?;
                unexpected(self.prefix.is_some(), &f("prefix"), &owner)?;
                unexpected(self.tail.is_some(), &f("tail"), &owner)?;
                if matches!(self.map, MapTag::Identity) {
                    IndexMap::Identity
                } else {
                    IndexMap::Triangular
                }
            }
            MapTag::Repeated => IndexMap::Repeated {
                times: required(self.times, &f("times"))?,
            },
            MapTag::Alternating => IndexMap::Alternating {
                anchor: required(self.anchor, &f("anchor"))?,
            },
            MapTag::Prefixed => IndexMap::Prefixed {
                prefix: required(self.prefix, &f("prefix"))?,
                tail: Box::new(required(self.tail, &f("tail"))?.convert(&f("tail"))?),
            },
        })
    }
}

impl RawWeights {
    fn convert(self, path: &str) -> Result<WeightForm> {
        let f = |name: &str| format!("{path}.{name}");
        Ok(match self.form {
            FormTag::Constant => WeightForm::Constant {
                c: required(self.c, &f("c"))?,
            },
            FormTag::Poly => WeightForm::Poly {
                a: required(self.a, &f("a"))?,
                p: required(self.p, &f("p"))?,
                b: self.b.unwrap_or(0.0),
            },
            FormTag::Exp => WeightForm::Exp {
                a: required(self.a, &f("a"))?,
                r: required(self.r, &f("r"))?,
            },
            FormTag::Prefixed => WeightForm::Prefixed {
                prefix: required(self.prefix, &f("prefix"))?,
                tail: Box::new(required(self.tail, &f("tail"))?.convert(&f("tail"))?),
            },
        })
    }
}

impl RawSpec {
    fn convert(self) -> Result<SequenceSpec> {
        Ok(match self.kind {
            KindTag::Explicit => SequenceSpec::Explicit {
                space_dim: required(self.space_dim, "space_dim")?,
                elements: required(self.elements, "elements")?,
            },
            KindTag::WeightedOnb => SequenceSpec::WeightedOnb {
                sigma: required(self.sigma, "sigma")?.convert("sigma")?,
                weights: required(self.weights, "weights")?.convert("weights")?,
            },
            KindTag::AnchoredOnb => SequenceSpec::AnchoredOnb {
                anchor: required(self.anchor, "anchor")?,
            },
        })
    }
}

/// Parses a spec from JSON text. Syntax and type errors name the line,
/// column and field path; missing fields name the field path.
pub fn parse_spec(text: &str) -> Result<SequenceSpec> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let raw: RawSpec = serde_path_to_error::deserialize(de).map_err(|err| {
        let path = err.path().to_string();
        let inner = err.into_inner();
        Error::SpecFile(format!(
            "parse error at line {} column {}, field `{}`: {}",
            inner.line(),
            inner.column(),
            path,
            inner
        ))
    })?;
    raw.convert()
}

pub fn load_spec(path: &Path) -> Result<SequenceSpec> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        Error::SpecFile(format!("cannot read {}: {e}", path.display()))
    })?;
    parse_spec(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_explicit() {
        let spec = parse_spec(
            r#"{"kind":"explicit","space_dim":2,"elements":[[[1,0],[0,0]],[1,[1,0]]]}"#,
        )
        .unwrap();
        let CheckedSequence::Finite(seq) = spec.validate().unwrap() else {
            panic!("expected finite")
        };
        assert_eq!(seq.len(), 2);
        assert_eq!(seq.elements()[1].coords()[0], C64::new(1.0, 0.0));
    }

    #[test]
    fn parses_weighted_and_anchored() {
        let spec = parse_spec(
            r#"{"kind":"weighted_onb","sigma":{"map":"identity"},"weights":{"form":"poly","a":1,"p":1,"b":1}}"#,
        )
        .unwrap();
        assert!(matches!(
            spec.validate().unwrap(),
            CheckedSequence::Structured(StructuredSequence::WeightedOnb { .. })
        ));
        let spec = parse_spec(r#"{"kind":"anchored_onb","anchor":1}"#).unwrap();
        assert_eq!(
            spec.validate().unwrap(),
            CheckedSequence::Structured(StructuredSequence::AnchoredOnb { anchor: 1 })
        );
    }

    #[test]
    fn parses_nested_prefix_families() {
        let spec = parse_spec(
            r#"{"kind":"weighted_onb",
                "sigma":{"map":"prefixed","prefix":[2,2],"tail":{"map":"alternating","anchor":1}},
                "weights":{"form":"prefixed","prefix":[3.0],"tail":{"form":"exp","a":1,"r":0.5}}}"#,
        )
        .unwrap();
        assert!(spec.validate().is_ok());
    }

    #[test]
    fn parse_error_names_line_and_field() {
        let err = parse_spec("{\"kind\":\"weighted_onb\",\n\"sigma\":{\"map\":\"identity\"},\n\"weights\":{\"form\":\"callback\"}}")
            .unwrap_err()
            .to_string();
        assert!(err.contains("line 3"), "{err}");
        assert!(err.contains("weights"), "{err}");
    }

    #[test]
    fn validation_errors() {
        let spec = parse_spec(r#"{"kind":"explicit","space_dim":2,"elements":[[1,0],[1,0,0]]}"#)
            .unwrap();
        assert_eq!(
            spec.validate(),
            Err(ValidationError::DimensionMismatch {
                index: 2,
                expected: 2,
                found: 3
            })
        );
        let spec = parse_spec(r#"{"kind":"explicit","space_dim":2,"elements":[]}"#).unwrap();
        assert_eq!(spec.validate(), Err(ValidationError::EmptySequence));
        let spec = parse_spec(r#"{"kind":"anchored_onb","anchor":0}"#).unwrap();
        assert!(matches!(
            spec.validate(),
            Err(ValidationError::InvalidBasisIndex { .. })
        ));
    }
}
