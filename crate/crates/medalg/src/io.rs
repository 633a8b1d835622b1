//! The JSON algebra file format.
//!
//! ```json
//! {"kind": "table", "n": 2, "median": [0, 0, 0, 1, 0, 1, 1, 1]}
//! {"kind": "coords", "factors": [2, 2], "points": [[0, 0], [0, 1], [1, 1]]}
//! {"kind": "graph", "n": 3, "edges": [[0, 1], [1, 2]]}
//! ```
//!
//! Table entry `i·n² + j·n + k` holds `med(i, j, k)`. Coordinate files must
//! be median-closed. Loading verifies everything the constructors verify.

use std::fs;
use std::path::Path;

use medalg_core::FiniteMedianAlgebra;
use serde::{Deserialize, Serialize};

use crate::HarnessError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum AlgebraFile {
    Table { n: usize, median: Vec<usize> },
    Coords { factors: Vec<u64>, points: Vec<Vec<i64>> },
    Graph { n: usize, edges: Vec<[usize; 2]> },
}

impl AlgebraFile {
    /// Coordinates when the algebra has them, otherwise the full table.
    pub fn from_algebra(a: &FiniteMedianAlgebra) -> Result<Self, HarnessError> {
        if let (Some(factors), Some(labels)) = (a.chain_factors(), a.labels()) {
            return Ok(AlgebraFile::Coords {
                factors: factors.iter().map(|&k| k as u64).collect(),
                points: labels.iter().map(|l| l.iter().map(|&c| c as i64).collect()).collect(),
            });
        }
        Ok(AlgebraFile::Table { n: a.len(), median: a.to_table()? })
    }

    pub fn build(&self) -> Result<FiniteMedianAlgebra, HarnessError> {
        match self {
            AlgebraFile::Table { n, median } => Ok(FiniteMedianAlgebra::from_median_table(*n, median)?),
            AlgebraFile::Coords { factors, points } => {
                let factors: Vec<u32> = factors
                    .iter()
                    .map(|&k| {
                        if (1..=u16::MAX as u64).contains(&k) {
                            Ok(k as u32)
                        } else {
                            Err(HarnessError::FactorRange(k))
                        }
                    })
                    .collect::<Result<_, _>>()?;
                let points: Vec<Vec<u16>> = points
                    .iter()
                    .enumerate()
                    .map(|(i, p)| {
                        p.iter()
                            .map(|&c| {
                                u16::try_from(c).map_err(|_| HarnessError::CoordinateRange { point: i, value: c })
                            })
                            .collect()
                    })
                    .collect::<Result<_, _>>()?;
                Ok(FiniteMedianAlgebra::from_coords(&factors, &points)?)
            }
            AlgebraFile::Graph { n, edges } => {
                let edges: Vec<(usize, usize)> = edges.iter().map(|e| (e[0], e[1])).collect();
                Ok(FiniteMedianAlgebra::median_graph_from_edges(*n, &edges)?)
            }
        }
    }

    /// Compact single-line JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string(self).expect("algebra files always serialize");
        s.push('\n');
        s
    }
}

pub fn parse_algebra(text: &str) -> Result<FiniteMedianAlgebra, HarnessError> {
    serde_json::from_str::<AlgebraFile>(text)?.build()
}

pub fn read_algebra(path: &Path) -> Result<FiniteMedianAlgebra, HarnessError> {
    let text = fs::read_to_string(path).map_err(|source| HarnessError::Read { path: path.into(), source })?;
    parse_algebra(&text)
}

pub fn write_file(path: &Path, contents: &str) -> Result<(), HarnessError> {
    fs::write(path, contents).map_err(|source| HarnessError::Write { path: path.into(), source })
}

#[cfg(test)]
mod tests {
    use super::*;
    use medalg_core::MedianError;

    #[test]
    fn round_trips() {
        for a in [
            FiniteMedianAlgebra::hypercube(3).unwrap(),
            FiniteMedianAlgebra::starlet(3).unwrap(),
            FiniteMedianAlgebra::chain(4).unwrap(),
        ] {
            let file = AlgebraFile::from_algebra(&a).unwrap();
            let back = parse_algebra(&file.to_json()).unwrap();
            assert_eq!(AlgebraFile::from_algebra(&back).unwrap(), file);
        }
    }

    #[test]
    fn reports_offending_pieces() {
        let err = parse_algebra(r#"{"kind":"graph","n":3,"edges":[[0,1],[1,2],[2,0]]}"#).unwrap_err();
        assert!(matches!(err, HarnessError::Median(MedianError::NotMedianGraph { triple: [0, 1, 2], .. })));
        let err = parse_algebra(r#"{"kind":"table","n":2,"median":[0,0,0,0,0,1,1,1]}"#).unwrap_err();
        assert!(matches!(err, HarnessError::Median(MedianError::AxiomViolation { axiom: "M2", .. })));
        let err = parse_algebra(r#"{"kind":"coords","factors":[2],"points":[[-1]]}"#).unwrap_err();
        assert!(matches!(err, HarnessError::CoordinateRange { point: 0, value: -1 }));
        assert!(matches!(parse_algebra(r#"{"kind":"blob"}"#), Err(HarnessError::Json(_))));
    }
}
