//! Quantum cost operators built from classical distance matrices.
//!
//! `C_E = sum_{i<j} E_ij |psi-_ij><psi-_ij|` with `|psi-_ij> = (|ij> - |ji>)/sqrt(2)`
//! lives on the antisymmetric subspace of `C^n (x) C^n`. The simplex geometry
//! `E_ij = 1 - delta_ij` gives the projector `(1 - S)/2`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, HermitianMatrix};

/// Symmetric, non-negative distance matrix with zero diagonal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawClassicalCost")]
pub struct ClassicalCost {
    n: usize,
    e: Vec<Vec<f64>>,
}

#[derive(Deserialize)]
struct RawClassicalCost {
    n: usize,
    e: Vec<Vec<f64>>,
}

impl TryFrom<RawClassicalCost> for ClassicalCost {
    type Error = Error;
    fn try_from(raw: RawClassicalCost) -> Result<Self> {
        ClassicalCost::new(raw.n, raw.e)
    }
}

impl ClassicalCost {
    pub fn new(n: usize, e: Vec<Vec<f64>>) -> Result<Self> {
        if n == 0 || e.len() != n || e.iter().any(|row| row.len() != n) {
            return Err(Error::DimensionMismatch(format!("distance matrix must be {n}x{n}")));
        }
        for i in 0..n {
            if e[i][i] != 0.0 {
                return Err(Error::InvalidArgument(format!("E[{i}][{i}] = {} is not zero", e[i][i])));
            }
            for j in 0..n {
                let x = e[i][j];
                if !x.is_finite() || x < 0.0 {
                    return Err(Error::InvalidArgument(format!("E[{i}][{j}] = {x} is not a distance")));
                }
                if x != e[j][i] {
                    return Err(Error::InvalidArgument(format!("E is not symmetric at ({i}, {j})")));
                }
            }
        }
        Ok(Self { n, e })
    }

    /// `E_ij = 1 - delta_ij`.
    pub fn simplex(n: usize) -> Self {
        let e = (0..n).map(|i| (0..n).map(|j| if i == j { 0.0 } else { 1.0 }).collect()).collect();
        Self { n, e }
    }

    /// Points `0, 1, ..., n-1` on a line: `E_ij = |i - j|`.
    pub fn line(n: usize) -> Self {
        let e = (0..n).map(|i| (0..n).map(|j| (i as f64 - j as f64).abs()).collect()).collect();
        Self { n, e }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[Vec<f64>] {
        &self.e
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.e[i][j]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CostKind {
    Projector,
    General,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CostMatrix {
    pub n: usize,
    pub mat: HermitianMatrix,
    pub kind: CostKind,
    pub seed: Option<ClassicalCost>,
}

impl CostMatrix {
    pub fn dim(&self) -> usize {
        self.mat.dim()
    }

    /// Largest eigenvalue, an upper bound on any transport value.
    pub fn scale(&self) -> Result<f64> {
        self.mat.max_eigenvalue()
    }
}

/// `S|i>|j> = |j>|i>`.
pub fn swap_operator(n: usize) -> HermitianMatrix {
    let mut s = ComplexMatrix::zeros(n * n, n * n);
    for i in 0..n {
        for j in 0..n {
            s[(j * n + i, i * n + j)] = Complex64::new(1.0, 0.0);
        }
    }
    HermitianMatrix::new(s).expect("square")
}

/// `(1 - S) / 2`, the projector onto the antisymmetric subspace.
pub fn projector_cost(n: usize) -> CostMatrix {
    let mat = HermitianMatrix::identity(n * n).sub(&swap_operator(n)).scale(0.5);
    CostMatrix { n, mat, kind: CostKind::Projector, seed: Some(ClassicalCost::simplex(n)) }
}

/// `sum_{i<j} E_ij^power |psi-_ij><psi-_ij|`, `power` in `{1, 2}`.
pub fn cost_from_classical(e: &ClassicalCost, power: u32) -> Result<CostMatrix> {
    if !(power == 1 || power == 2) {
        return Err(Error::InvalidArgument(format!("cost power must be 1 or 2, got {power}")));
    }
    let n = e.n;
    let mut m = ComplexMatrix::zeros(n * n, n * n);
    for i in 0..n {
        for j in (i + 1)..n {
            let w = 0.5 * e.e[i][j].powi(power as i32);
            let (p, q) = (i * n + j, j * n + i);
            m[(p, p)] += Complex64::new(w, 0.0);
            m[(q, q)] += Complex64::new(w, 0.0);
            m[(p, q)] -= Complex64::new(w, 0.0);
            m[(q, p)] -= Complex64::new(w, 0.0);
        }
    }
    let mat = HermitianMatrix::new(m)?;
    let is_projector = (0..n).all(|i| (0..n).all(|j| i == j || e.e[i][j] == 1.0));
    let kind = if is_projector { CostKind::Projector } else { CostKind::General };
    Ok(CostMatrix { n, mat, kind, seed: Some(e.clone()) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn swap_for_qubits() {
        let s = swap_operator(2);
        let expect = HermitianMatrix::from_real(
            4,
            &[1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0],
        )
        .unwrap();
        assert_eq!(s, expect);
    }

    #[test]
    fn qubit_projector_is_singlet() {
        let c = projector_cost(2);
        let m = c.mat.as_matrix();
        assert_eq!(m[(1, 1)].re, 0.5);
        assert_eq!(m[(2, 2)].re, 0.5);
        assert_eq!(m[(1, 2)].re, -0.5);
        assert_eq!(m[(0, 0)].re, 0.0);
        assert_eq!(m[(3, 3)].re, 0.0);
    }

    #[test]
    fn projector_trace_and_idempotence() {
        for n in 2..6 {
            let c = projector_cost(n);
            assert!((c.mat.trace() - (n * (n - 1) / 2) as f64).abs() < 1e-14);
            let sq = c.mat.matmul(&c.mat);
            assert!((&sq - c.mat.as_matrix()).max_abs() < 1e-14);
        }
    }

    #[test]
    fn simplex_geometry_gives_projector() {
        for n in 2..5 {
            let c = cost_from_classical(&ClassicalCost::simplex(n), 1).unwrap();
            assert_eq!(c.kind, CostKind::Projector);
            assert!(c.mat.sub(&projector_cost(n).mat).frobenius_norm() < 1e-15);
        }
    }

    #[test]
    fn zero_distance_gives_zero_cost() {
        let e = ClassicalCost::new(3, vec![vec![0.0; 3]; 3]).unwrap();
        assert_eq!(cost_from_classical(&e, 1).unwrap().mat, HermitianMatrix::zeros(9));
    }

    #[test]
    fn invalid_distances_rejected() {
        assert!(ClassicalCost::new(2, vec![vec![0.0, 1.0], vec![2.0, 0.0]]).is_err());
        assert!(ClassicalCost::new(2, vec![vec![1.0, 1.0], vec![1.0, 0.0]]).is_err());
        assert!(ClassicalCost::new(2, vec![vec![0.0, -1.0], vec![-1.0, 0.0]]).is_err());
        assert!(ClassicalCost::new(3, vec![vec![0.0, 1.0], vec![1.0, 0.0]]).is_err());
        assert!(cost_from_classical(&ClassicalCost::line(3), 3).is_err());
    }

    #[test]
    fn json_validates() {
        let ok: ClassicalCost = serde_json::from_str(r#"{"n": 3, "e": [[0,1,2],[1,0,1],[2,1,0]]}"#).unwrap();
        assert_eq!(ok, ClassicalCost::line(3));
        assert!(serde_json::from_str::<ClassicalCost>(r#"{"n": 2, "e": [[0,1],[3,0]]}"#).is_err());
    }
}
