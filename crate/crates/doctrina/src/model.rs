//! Finite models as JSON:
//!
//! ```json
//! {"carriers": {"S": 2},
//!  "functions": {"a": 0, "f": [1, 0]},
//!  "relations": {"R": [[0]], "E": [[0, 1], [1, 1]]}}
//! ```
//!
//! A function table lists values row-major over its arguments, first
//! argument most significant; a constant may be given as a bare number.

use std::collections::BTreeMap;

use doctrina_core::semantics::{FiniteModel, Subset};
use doctrina_core::terms::Signature;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub carriers: BTreeMap<String, usize>,
    #[serde(default)]
    pub functions: BTreeMap<String, Table>,
    #[serde(default)]
    pub relations: BTreeMap<String, Vec<Vec<usize>>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Table {
    Value(usize),
    Cells(Vec<usize>),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("malformed model: {0}")]
pub struct ModelError(pub String);

impl ModelFile {
    pub fn parse(text: &str) -> Result<Self, ModelError> {
        serde_json::from_str(text).map_err(|e| ModelError(e.to_string()))
    }

    /// The model over `sig`; every sort and symbol must be given.
    pub fn to_model(&self, sig: &Signature) -> Result<FiniteModel, ModelError> {
        for name in self.carriers.keys() {
            if sig.sort(name).is_none() {
                return Err(ModelError(format!("unknown sort `{name}`")));
            }
        }
        for name in self.functions.keys() {
            if sig.function(name).is_none() {
                return Err(ModelError(format!("unknown function `{name}`")));
            }
        }
        for name in self.relations.keys() {
            if sig.relation(name).is_none() {
                return Err(ModelError(format!("unknown relation `{name}`")));
            }
        }
        let sizes: Vec<usize> = sig
            .sorts()
            .map(|s| {
                let name = sig.sort_name(s);
                self.carriers
                    .get(name)
                    .copied()
                    .ok_or_else(|| ModelError(format!("no carrier for sort `{name}`")))
            })
            .collect::<Result<_, _>>()?;
        let mut functions = Vec::new();
        for (_, d) in sig.functions() {
            let table = match self.functions.get(&d.name) {
                Some(Table::Value(v)) => vec![*v],
                Some(Table::Cells(c)) => c.clone(),
                None => return Err(ModelError(format!("no table for function `{}`", d.name))),
            };
            functions.push(table);
        }
        let mut relations = Vec::new();
        for (_, d) in sig.relations() {
            let dims: Vec<usize> = d.args.iter().map(|s| sizes[s.0 as usize]).collect();
            let space = doctrina_core::semantics::Space::new(dims.clone());
            let tuples = self.relations.get(&d.name).map(Vec::as_slice).unwrap_or_default();
            let mut set = Subset::empty(space.size());
            for t in tuples {
                let fits = t.len() == dims.len() && t.iter().zip(&dims).all(|(v, n)| v < n);
                if !fits {
                    return Err(ModelError(format!("tuple {t:?} does not fit relation `{}`", d.name)));
                }
                set.insert(space.index(t));
            }
            relations.push(set);
        }
        FiniteModel::new(sig, sizes, functions, relations).map_err(|e| ModelError(e.to_string()))
    }

    pub fn from_model(m: &FiniteModel, sig: &Signature) -> Self {
        let carriers = sig.sorts().map(|s| (sig.sort_name(s).to_owned(), m.size(s))).collect();
        let functions = sig
            .functions()
            .map(|(f, d)| {
                let t = m.function_table(f);
                let table = if d.args.is_empty() {
                    Table::Value(t[0])
                } else {
                    Table::Cells(t.to_vec())
                };
                (d.name.clone(), table)
            })
            .collect();
        let relations = sig
            .relations()
            .map(|(r, d)| {
                let space = m.space(&d.args);
                let tuples = m.relation_table(r).iter().map(|i| space.tuple(i)).collect();
                (d.name.clone(), tuples)
            })
            .collect();
        Self {
            carriers,
            functions,
            relations,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_theory;

    fn sig() -> Signature {
        parse_theory("sort S const a : S fn f : S -> S rel R : S rel E : S * S")
            .unwrap()
            .signature
    }

    #[test]
    fn round_trip() {
        let text = r#"{"carriers": {"S": 2}, "functions": {"a": 1, "f": [1, 0]},
                       "relations": {"R": [[0]], "E": [[0, 1], [1, 1]]}}"#;
        let file = ModelFile::parse(text).unwrap();
        let sig = sig();
        let m = file.to_model(&sig).unwrap();
        let e = sig.relation("E").unwrap();
        assert_eq!(m.relation_table(e).iter().collect::<Vec<_>>(), [1, 3]);
        assert_eq!(ModelFile::from_model(&m, &sig), file);
    }

    #[test]
    fn bad_models_are_rejected() {
        let sig = sig();
        let cases = [
            r#"{"carriers": {"S": 2}, "functions": {"a": 0}}"#,
            r#"{"carriers": {"S": 2}, "functions": {"a": 0, "f": [0, 2]}}"#,
            r#"{"carriers": {"S": 2}, "functions": {"a": 0, "f": [0, 1]}, "relations": {"R": [[2]]}}"#,
            r#"{"carriers": {"S": 2}, "functions": {"a": 0, "f": [0, 1], "g": 0}}"#,
            r#"{"carriers": {}, "functions": {"a": 0, "f": [0, 1]}}"#,
        ];
        for c in cases {
            assert!(ModelFile::parse(c).unwrap().to_model(&sig).is_err(), "{c}");
        }
        assert!(ModelFile::parse("{\"carriers\": 3}").is_err());
    }
}
