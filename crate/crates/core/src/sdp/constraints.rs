//! Marginal constraints in scaled variables.
//!
//! In the joint eigenbasis of the marginals, `A = diag(a)` and `B = diag(b)`
//! (all entries positive), the coupling is written
//! `X = (A^{1/2} (x) B^{1/2}) Y (A^{1/2} (x) B^{1/2})`. The constraints become
//!
//! ```text
//! Tr_B[(1 (x) B) Y] = 1,   Tr_A[(A (x) 1) Y] = 1
//! ```
//!
//! with adjoint `(tau_A, tau_B) -> tau_A (x) B + A (x) tau_B`. A congruence
//! leaves the log-det central path unchanged, but `Y` and `tau` stay of order
//! one even when a marginal is nearly singular, where the unscaled dual
//! variables grow like the inverse of the smallest eigenvalue.
//!
//! Coordinates use the orthonormal basis of `H_k`: `E_jj`, then for each
//! `j < l` the pair `(E_jl + E_lj)/sqrt2` and `i(E_jl - E_lj)/sqrt2`. The
//! direction `(A, -B)` lies in the kernel of the adjoint, so one diagonal
//! coordinate of `tau_B` (at the largest entry of `b`) is fixed to zero.

use num_complex::Complex64;

use crate::linalg::{ComplexMatrix, ZERO};

const H: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Coordinates of a Hermitian matrix in the orthonormal basis.
pub(crate) fn herm_coords(m: &ComplexMatrix, out: &mut Vec<f64>) {
    let k = m.rows();
    for j in 0..k {
        out.push(m[(j, j)].re);
    }
    for j in 0..k {
        for l in (j + 1)..k {
            let z = m[(j, l)];
            out.push(std::f64::consts::SQRT_2 * z.re);
            out.push(std::f64::consts::SQRT_2 * z.im);
        }
    }
}

/// Inverse of [`herm_coords`]; `c` has exactly `k^2` entries.
pub(crate) fn herm_from_coords(k: usize, c: &[f64]) -> ComplexMatrix {
    debug_assert_eq!(c.len(), k * k);
    let mut m = ComplexMatrix::zeros(k, k);
    for j in 0..k {
        m[(j, j)] = Complex64::new(c[j], 0.0);
    }
    let mut p = k;
    for j in 0..k {
        for l in (j + 1)..k {
            let z = Complex64::new(c[p] * H, c[p + 1] * H);
            m[(j, l)] = z;
            m[(l, j)] = z.conj();
            p += 2;
        }
    }
    m
}

/// Sparse `(row, col, value)` entries of one basis element of `H_k`.
fn basis_element(k: usize, index: usize) -> Vec<(usize, usize, Complex64)> {
    if index < k {
        return vec![(index, index, Complex64::new(1.0, 0.0))];
    }
    let mut p = k;
    for j in 0..k {
        for l in (j + 1)..k {
            if index == p {
                return vec![(j, l, Complex64::new(H, 0.0)), (l, j, Complex64::new(H, 0.0))];
            }
            if index == p + 1 {
                return vec![(j, l, Complex64::new(0.0, H)), (l, j, Complex64::new(0.0, -H))];
            }
            p += 2;
        }
    }
    unreachable!("basis index {index} out of range for dim {k}")
}

/// The linear map `A: H_{da*db} -> R^m` and its adjoint.
pub(crate) struct MarginalConstraints {
    a: Vec<f64>,
    b: Vec<f64>,
    /// Diagonal coordinate of `tau_B` held at zero.
    drop_b: usize,
    /// Lifted sparse constraint matrices `E (x) B` and `A (x) E`.
    lifted: Vec<Vec<(usize, usize, Complex64)>>,
}

impl MarginalConstraints {
    /// `a`, `b`: strictly positive marginal spectra.
    pub fn new(a: &[f64], b: &[f64]) -> Self {
        let (da, db) = (a.len(), b.len());
        let drop_b = (0..db).fold(0, |best, j| if b[j] > b[best] { j } else { best });
        let mut lifted = Vec::with_capacity(da * da + db * db - 1);
        for idx in 0..da * da {
            let e = basis_element(da, idx);
            let mut v = Vec::with_capacity(e.len() * db);
            for &(r, c, z) in &e {
                for (t, &bt) in b.iter().enumerate() {
                    v.push((r * db + t, c * db + t, z * bt));
                }
            }
            lifted.push(v);
        }
        for idx in (0..db * db).filter(|&i| i != drop_b) {
            let e = basis_element(db, idx);
            let mut v = Vec::with_capacity(e.len() * da);
            for &(r, c, z) in &e {
                for (t, &at) in a.iter().enumerate() {
                    v.push((t * db + r, t * db + c, z * at));
                }
            }
            lifted.push(v);
        }
        Self { a: a.to_vec(), b: b.to_vec(), drop_b, lifted }
    }

    pub fn m(&self) -> usize {
        self.lifted.len()
    }

    pub fn da(&self) -> usize {
        self.a.len()
    }

    pub fn db(&self) -> usize {
        self.b.len()
    }

    pub fn dim(&self) -> usize {
        self.a.len() * self.b.len()
    }

    fn coords(&self, pa: &ComplexMatrix, pb: &ComplexMatrix) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.m() + 1);
        herm_coords(pa, &mut out);
        let mut tmp = Vec::with_capacity(self.db() * self.db());
        herm_coords(pb, &mut tmp);
        tmp.remove(self.drop_b);
        out.extend_from_slice(&tmp);
        out
    }

    /// Right-hand side: both scaled marginals equal the identity.
    pub fn rhs(&self) -> Vec<f64> {
        self.coords(&ComplexMatrix::identity(self.da()), &ComplexMatrix::identity(self.db()))
    }

    /// Coordinates of `(tau_A, tau_B)` after shifting along the kernel
    /// direction `(A, -B)` so that the dropped coordinate vanishes.
    pub fn coords_of(&self, ta: &ComplexMatrix, tb: &ComplexMatrix) -> Vec<f64> {
        let t = tb[(self.drop_b, self.drop_b)].re / self.b[self.drop_b];
        let mut ta = ta.clone();
        let mut tb = tb.clone();
        for (i, a) in self.a.iter().enumerate() {
            ta[(i, i)] += Complex64::new(t * a, 0.0);
        }
        for (k, b) in self.b.iter().enumerate() {
            tb[(k, k)] -= Complex64::new(t * b, 0.0);
        }
        self.coords(&ta, &tb)
    }

    /// `A(Y)`: coordinates of `Tr_B[(1 (x) B) Y]` and `Tr_A[(A (x) 1) Y]`.
    pub fn apply(&self, y: &ComplexMatrix) -> Vec<f64> {
        let (da, db) = (self.da(), self.db());
        let d = da * db;
        let data = y.data();
        let mut pa = ComplexMatrix::zeros(da, da);
        let mut pb = ComplexMatrix::zeros(db, db);
        for i in 0..da {
            for j in i..da {
                let mut s = ZERO;
                for k in 0..db {
                    s += data[(i * db + k) * d + j * db + k] * self.b[k];
                }
                pa[(i, j)] = s;
                pa[(j, i)] = s.conj();
            }
        }
        for k in 0..db {
            for l in k..db {
                let mut s = ZERO;
                for i in 0..da {
                    s += data[(i * db + k) * d + i * db + l] * self.a[i];
                }
                pb[(k, l)] = s;
                pb[(l, k)] = s.conj();
            }
        }
        self.coords(&pa, &pb)
    }

    /// `(tau_A, tau_B)` for the coordinate vector `y`.
    pub fn split(&self, y: &[f64]) -> (ComplexMatrix, ComplexMatrix) {
        let na = self.da() * self.da();
        let ta = herm_from_coords(self.da(), &y[..na]);
        let mut cb = y[na..].to_vec();
        cb.insert(self.drop_b, 0.0);
        let tb = herm_from_coords(self.db(), &cb);
        (ta, tb)
    }

    /// `A*(y) = tau_A (x) B + A (x) tau_B`.
    pub fn adjoint(&self, y: &[f64]) -> ComplexMatrix {
        let (ta, tb) = self.split(y);
        let (da, db) = (self.da(), self.db());
        let d = da * db;
        let mut out = ComplexMatrix::zeros(d, d);
        for i in 0..da {
            for j in 0..da {
                let z = ta[(i, j)];
                for t in 0..db {
                    out[(i * db + t, j * db + t)] += z * self.b[t];
                }
            }
        }
        for t in 0..da {
            for k in 0..db {
                for l in 0..db {
                    out[(t * db + k, t * db + l)] += tb[(k, l)] * self.a[t];
                }
            }
        }
        out
    }

    /// Schur complement `M_ij = Re Tr(A_i W A_j W)` (row-major, symmetric).
    pub fn schur(&self, w: &ComplexMatrix) -> Vec<f64> {
        let m = self.m();
        let d = self.dim();
        let wd = w.data();
        let mut out = vec![0.0; m * m];
        for i in 0..m {
            let ai = &self.lifted[i];
            for j in i..m {
                let aj = &self.lifted[j];
                let mut s = 0.0;
                for &(r, c, v) in ai {
                    for &(r2, c2, v2) in aj {
                        s += (v * v2 * wd[c * d + r2] * wd[c2 * d + r]).re;
                    }
                }
                out[i * m + j] = s;
                out[j * m + i] = s;
            }
        }
        out
    }
}

/// `sa (x) 1 + 1 (x) sb`.
pub(crate) fn kron_sum(sa: &ComplexMatrix, sb: &ComplexMatrix) -> ComplexMatrix {
    let (da, db) = (sa.rows(), sb.rows());
    let d = da * db;
    let mut out = ComplexMatrix::zeros(d, d);
    for i in 0..da {
        for j in 0..da {
            let z = sa[(i, j)];
            if z != ZERO {
                for t in 0..db {
                    out[(i * db + t, j * db + t)] += z;
                }
            }
        }
    }
    for t in 0..da {
        for k in 0..db {
            for l in 0..db {
                out[(t * db + k, t * db + l)] += sb[(k, l)];
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn herm(k: usize, seed: u64) -> ComplexMatrix {
        let mut s = seed;
        let mut next = move || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((s >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        ComplexMatrix::from_fn(k, k, |_, _| Complex64::new(next(), next())).hermitian_part()
    }

    fn spectra(da: usize, db: usize) -> (Vec<f64>, Vec<f64>) {
        let a: Vec<f64> = (0..da).map(|i| 0.2 + 0.3 * i as f64).collect();
        let b: Vec<f64> = (0..db).map(|i| 0.9 - 0.2 * i as f64).collect();
        (a, b)
    }

    #[test]
    fn coords_round_trip() {
        for k in 1..5 {
            let m = herm(k, k as u64);
            let mut c = Vec::new();
            herm_coords(&m, &mut c);
            assert!((&herm_from_coords(k, &c) - &m).frobenius_norm() < 1e-15);
        }
    }

    #[test]
    fn adjoint_pairing() {
        // <A(Y), y> = Re Tr(Y A*(y))
        for (da, db) in [(2, 2), (2, 3), (3, 2), (1, 3)] {
            let (a, b) = spectra(da, db);
            let c = MarginalConstraints::new(&a, &b);
            let x = herm(da * db, 3);
            let y: Vec<f64> = (0..c.m()).map(|i| (i as f64 * 0.37).sin()).collect();
            let lhs: f64 = c.apply(&x).iter().zip(&y).map(|(a, b)| a * b).sum();
            let rhs = x.trace_of_product(&c.adjoint(&y)).re;
            assert!((lhs - rhs).abs() < 1e-13, "{da}x{db}: {lhs} vs {rhs}");
        }
    }

    #[test]
    fn identity_is_feasible() {
        let (a, b) = spectra(3, 2);
        let sa: f64 = a.iter().sum();
        let sb: f64 = b.iter().sum();
        let a: Vec<f64> = a.iter().map(|x| x / sa).collect();
        let b: Vec<f64> = b.iter().map(|x| x / sb).collect();
        let c = MarginalConstraints::new(&a, &b);
        let r = c.apply(&ComplexMatrix::identity(6));
        for (x, y) in r.iter().zip(c.rhs()) {
            assert!((x - y).abs() < 1e-15);
        }
    }

    #[test]
    fn kernel_shift_preserves_adjoint() {
        let (a, b) = spectra(2, 3);
        let c = MarginalConstraints::new(&a, &b);
        let (ta, tb) = (herm(2, 4), herm(3, 5));
        let direct = &ta.kron(&ComplexMatrix::diag_real(&b)) + &ComplexMatrix::diag_real(&a).kron(&tb);
        assert!((&c.adjoint(&c.coords_of(&ta, &tb)) - &direct).frobenius_norm() < 1e-14);
    }

    #[test]
    fn schur_matches_definition() {
        let (a, b) = spectra(2, 3);
        let c = MarginalConstraints::new(&a, &b);
        let g = herm(6, 9);
        let w = &g.matmul(&g) + &ComplexMatrix::identity(6);
        let m = c.schur(&w);
        let n = c.m();
        for i in [0, 3, n - 1] {
            let mut ei = vec![0.0; n];
            ei[i] = 1.0;
            let ai = c.adjoint(&ei);
            for j in 0..n {
                let mut ej = vec![0.0; n];
                ej[j] = 1.0;
                let aj = c.adjoint(&ej);
                let v = ai.matmul(&w).matmul(&aj).matmul(&w).trace().re;
                assert!((m[i * n + j] - v).abs() < 1e-12);
            }
        }
    }
}
