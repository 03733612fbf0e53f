use std::collections::{BTreeMap, BTreeSet};

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::embedding::EmbeddingTable;
use super::vocab::Vocab;
use super::INTERNAL_MARKER;
use crate::error::{Error, Result};

/// Ridge term added to the Gram matrix when it is singular.
pub const RIDGE_LAMBDA: f64 = 1e-6;

/// Relative pivot threshold below which the Gram matrix counts as singular.
const SINGULAR_RCOND: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "path", rename_all = "snake_case")]
pub enum Solver {
    NormalEquations,
    Ridge { lambda: f64 },
}

/// Square map from word-initial to word-internal embeddings.
#[derive(Debug, Clone, PartialEq)]
pub struct Projection {
    pub matrix: DMatrix<f64>,
    /// Squared Frobenius norm of `E·T − E##` on the fit pairs.
    pub residual: f64,
    pub solver: Solver,
    pub pairs: usize,
}

impl Projection {
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }
}

fn stack(rows: &[&[f64]], m: usize) -> DMatrix<f64> {
    DMatrix::from_fn(rows.len(), m, |i, j| rows[i][j])
}

/// Least-squares fit of `T` minimizing `‖E·T − E##‖²` via the normal
/// equations. A singular `EᵀE` is an error unless `allow_ridge` is set, in
/// which case `RIDGE_LAMBDA·I` is added.
pub fn fit_projection(pairs: &[(Vec<f64>, Vec<f64>)], allow_ridge: bool) -> Result<Projection> {
    let Some((first, _)) = pairs.first() else {
        return Err(Error::InvalidInput(
            "projection needs at least one pair".into(),
        ));
    };
    let m = first.len();
    for (a, b) in pairs {
        for v in [a, b] {
            if v.len() != m {
                return Err(Error::DimensionMismatch {
                    expected: m,
                    found: v.len(),
                });
            }
        }
    }
    let e = stack(
        &pairs.iter().map(|(a, _)| a.as_slice()).collect::<Vec<_>>(),
        m,
    );
    let target = stack(
        &pairs.iter().map(|(_, b)| b.as_slice()).collect::<Vec<_>>(),
        m,
    );

    let gram = e.transpose() * &e;
    let rhs = e.transpose() * &target;

    let well_posed = gram.clone().cholesky().filter(|c| {
        let d = c.l_dirty().diagonal();
        let (lo, hi) = d.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), &x| {
            (lo.min(x), hi.max(x))
        });
        hi > 0.0 && (lo / hi).powi(2) > SINGULAR_RCOND
    });

    let (matrix, solver) = match well_posed {
        Some(chol) => (chol.solve(&rhs), Solver::NormalEquations),
        None if allow_ridge => {
            let reg = gram + DMatrix::identity(m, m) * RIDGE_LAMBDA;
            let chol = reg.cholesky().ok_or(Error::RankDeficient)?;
            (
                chol.solve(&rhs),
                Solver::Ridge {
                    lambda: RIDGE_LAMBDA,
                },
            )
        }
        None => return Err(Error::RankDeficient),
    };

    let residual = (&e * &matrix - &target).norm_squared();
    Ok(Projection {
        matrix,
        residual,
        solver,
        pairs: pairs.len(),
    })
}

/// `eᵀ·T`.
pub fn project(e: &[f64], proj: &Projection) -> Result<Vec<f64>> {
    let m = proj.dim();
    if e.len() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            found: e.len(),
        });
    }
    Ok((0..m)
        .map(|j| (0..m).map(|i| e[i] * proj.matrix[(i, j)]).sum())
        .collect())
}

/// Bases present in both word-initial and `##` form, in the vocabulary and
/// in the embedding table, with their two vectors.
pub fn projection_pairs(
    vocab: &Vocab,
    table: &EmbeddingTable,
    bases: &BTreeSet<String>,
) -> Vec<(String, Vec<f64>, Vec<f64>)> {
    bases
        .iter()
        .filter_map(|b| {
            let internal = format!("{INTERNAL_MARKER}{b}");
            if !vocab.contains(b) || !vocab.contains(&internal) {
                return None;
            }
            Some((
                b.clone(),
                table.get(b)?.to_vec(),
                table.get(&internal)?.to_vec(),
            ))
        })
        .collect()
}

/// Projected `##base` embeddings for bases that lack a word-internal token.
pub fn project_missing_bases(
    vocab: &Vocab,
    table: &EmbeddingTable,
    bases: &BTreeSet<String>,
    proj: &Projection,
) -> Result<EmbeddingTable> {
    let mut out = BTreeMap::new();
    for b in bases {
        let internal = format!("{INTERNAL_MARKER}{b}");
        if vocab.contains(&internal) {
            continue;
        }
        if let Some(e) = table.get(b) {
            out.insert(internal, project(e, proj)?);
        }
    }
    EmbeddingTable::new(proj.dim(), out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn identity_when_targets_equal_inputs() {
        let pairs: Vec<_> = (0..6)
            .map(|i| {
                let v: Vec<f64> = (0..3)
                    .map(|j| ((i * 3 + j) as f64).sin() + (i == j) as u8 as f64)
                    .collect();
                (v.clone(), v)
            })
            .collect();
        let p = fit_projection(&pairs, false).unwrap();
        assert_eq!(p.solver, Solver::NormalEquations);
        for i in 0..3 {
            for j in 0..3 {
                assert_abs_diff_eq!(p.matrix[(i, j)], (i == j) as u8 as f64, epsilon = 1e-8);
            }
        }
        assert!(p.residual < 1e-16);
    }

    #[test]
    fn rank_deficient_needs_ridge() {
        let pairs = vec![
            (vec![1.0, 1.0], vec![2.0, 0.0]),
            (vec![2.0, 2.0], vec![4.0, 0.0]),
        ];
        assert!(matches!(
            fit_projection(&pairs, false),
            Err(Error::RankDeficient)
        ));
        let p = fit_projection(&pairs, true).unwrap();
        assert!(matches!(p.solver, Solver::Ridge { .. }));
        assert!(p.residual < 1e-6);
    }

    #[test]
    fn empty_and_mismatched_inputs() {
        assert!(fit_projection(&[], true).is_err());
        assert!(fit_projection(&[(vec![1.0], vec![1.0, 2.0])], true).is_err());
    }

    #[test]
    fn project_basics() {
        let p = Projection {
            matrix: DMatrix::identity(3, 3),
            residual: 0.0,
            solver: Solver::NormalEquations,
            pairs: 0,
        };
        assert_eq!(
            project(&[1.0, -2.0, 3.0], &p).unwrap(),
            vec![1.0, -2.0, 3.0]
        );
        let q = Projection {
            matrix: DMatrix::from_fn(3, 3, |i, j| (i + 2 * j) as f64),
            ..p.clone()
        };
        assert_eq!(project(&[0.0; 3], &q).unwrap(), vec![0.0; 3]);
        assert!(matches!(
            project(&[1.0], &p),
            Err(Error::DimensionMismatch { .. })
        ));
        // row vector times matrix
        assert_eq!(project(&[1.0, 0.0, 0.0], &q).unwrap(), vec![0.0, 2.0, 4.0]);
    }
}
