//! Input documents: matrices, ideals, configurations, jets and series matrices.

use std::path::Path;

use detlab_core::algebra::poly::vars;
use detlab_core::algebra::snf::SeriesMatrix;
use detlab_core::algebra::{Field, Matrix, TruncSeries};
use detlab_core::configurations::linalg::Rat;
use detlab_core::configurations::ConfigurationMatrix;
use detlab_core::determinantal::{parse_matrix, PolyMatrix};
use detlab_core::jets::{IdealGens, JetPoint};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{LabError, LabResult};

/// A matrix of polynomials: `{"vars": [...], "rows": [[...], ...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixDoc {
    pub vars: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl MatrixDoc {
    pub fn build(&self) -> LabResult<PolyMatrix> {
        Ok(parse_matrix(&vars(&self.vars), &self.rows)?)
    }
}

/// Generators of an ideal: `{"vars": [...], "gens": [...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IdealDoc {
    pub vars: Vec<String>,
    pub gens: Vec<String>,
}

impl IdealDoc {
    pub fn build(&self) -> LabResult<IdealGens> {
        Ok(IdealGens::parse(&vars(&self.vars), &self.gens)?)
    }
}

/// A rational written as an integer or a `"p/q"` string.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RatDoc {
    Int(i64),
    Text(String),
}

impl RatDoc {
    pub fn value(&self) -> LabResult<Rat> {
        match self {
            RatDoc::Int(i) => Ok(Rat::from_integer((*i).into())),
            RatDoc::Text(s) => s
                .trim()
                .parse::<Rat>()
                .map_err(|_| LabError::Input(format!("`{s}` is not a rational of the form p/q"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphDoc {
    pub vertices: usize,
    pub edges: Vec<(usize, usize)>,
}

/// A configuration given by the rows of `D` or by a connected graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum ConfigDoc {
    DMatrix(Vec<Vec<RatDoc>>),
    Graph(GraphDoc),
}

impl ConfigDoc {
    pub fn build(&self) -> LabResult<ConfigurationMatrix> {
        Ok(match self {
            ConfigDoc::DMatrix(rows) => ConfigurationMatrix::new(
                rows.iter()
                    .map(|r| r.iter().map(RatDoc::value).collect::<LabResult<Vec<_>>>())
                    .collect::<LabResult<Vec<_>>>()?,
            )?,
            ConfigDoc::Graph(g) => ConfigurationMatrix::from_graph(g.vertices, &g.edges)?,
        })
    }
}

/// A jet over `F_q`: one coefficient list `c_0, ..., c_N` per coordinate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JetDoc {
    pub q: u32,
    pub coords: Vec<Vec<i64>>,
}

impl JetDoc {
    pub fn build(&self) -> LabResult<JetPoint> {
        Ok(JetPoint::from_coeffs(Field::prime(u64::from(self.q))?, &self.coords)?)
    }
}

/// A matrix of truncated series over `F_q`; every entry lists `c_0, ..., c_N`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeriesMatrixDoc {
    pub q: u32,
    pub rows: Vec<Vec<Vec<i64>>>,
}

impl SeriesMatrixDoc {
    pub fn build(&self) -> LabResult<SeriesMatrix> {
        let field = Field::prime(u64::from(self.q))?;
        let rows = self
            .rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|c| Ok(TruncSeries::from_i64s(field, c)?))
                    .collect::<LabResult<Vec<_>>>()
            })
            .collect::<LabResult<Vec<_>>>()?;
        let m = Matrix::from_rows(rows)?;
        let level = m.get(0, 0).level();
        if m.entries().iter().any(|e| e.level() != level) {
            return Err(LabError::Input("every entry needs the same number of coefficients".into()));
        }
        Ok(m)
    }
}

pub fn read_doc<T: DeserializeOwned>(path: &Path) -> LabResult<T> {
    let text = std::fs::read_to_string(path).map_err(|e| LabError::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| LabError::Input(format!("{}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn configuration_documents() {
        let d: ConfigDoc = serde_json::from_str(r#"{"d_matrix": [[1, "1/2", 0], ["-3", 0, 1]]}"#).unwrap();
        let c = d.build().unwrap();
        assert_eq!(c.rows()[0][1], Rat::new(1.into(), 2.into()));
        let g: ConfigDoc = serde_json::from_str(r#"{"graph": {"vertices": 3, "edges": [[0,1],[1,2],[0,2]]}}"#).unwrap();
        assert_eq!(g.build().unwrap().ground_size(), 3);
        assert!(serde_json::from_str::<ConfigDoc>(r#"{"graph": {"vertices": 3, "edges": [], "x": 1}}"#).is_err());
        let bad: ConfigDoc = serde_json::from_str(r#"{"d_matrix": [["1/0"]]}"#).unwrap();
        assert!(bad.build().is_err());
    }

    #[test]
    fn matrices_and_series() {
        let m: MatrixDoc = serde_json::from_str(r#"{"vars": ["x1","x2"], "rows": [["x1", "x2"]]}"#).unwrap();
        assert_eq!(m.build().unwrap().cols(), 2);
        let s: SeriesMatrixDoc = serde_json::from_str(r#"{"q": 5, "rows": [[[0,1],[1,0]]]}"#).unwrap();
        assert_eq!(s.build().unwrap().get(0, 1).level(), 1);
        let ragged: SeriesMatrixDoc = serde_json::from_str(r#"{"q": 5, "rows": [[[0,1],[1]]]}"#).unwrap();
        assert!(ragged.build().is_err());
    }
}
