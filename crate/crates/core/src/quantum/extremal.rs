//! Parametrized families of extremal channels for `n = 2, 3, 4`.
//!
//! Each family is `K_i = U_i D_i` with fixed permutation unitaries `U_i` and
//! diagonal `D_i` whose squares sum to the identity. The qubit family is the
//! two-Kraus form in `(u, v)` covering every extremal qubit channel up to unitary
//! pre- and post-processing.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, ZERO};
use crate::quantum::{QuantumChannel, RngStream};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExtremalQubitChannelParams {
    pub u: f64,
    pub v: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExtremalQutritChannelParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub e: f64,
    pub f: f64,
}

/// `weights[k][j]` is the squared `j`-th diagonal entry of `D_k`; every column sums to 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExtremalQuartParams {
    pub weights: [[f64; 4]; 4],
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum ExtremalParams {
    Qubit(ExtremalQubitChannelParams),
    Qutrit(ExtremalQutritChannelParams),
    Ququart(ExtremalQuartParams),
}

impl ExtremalParams {
    pub fn channel(&self) -> Result<QuantumChannel> {
        match self {
            Self::Qubit(p) => Ok(extremal_qubit_channel(*p)),
            Self::Qutrit(p) => extremal_qutrit_channel(*p),
            Self::Ququart(p) => extremal_ququart_channel(*p),
        }
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `K1 = cos(v/2)cos(u/2) 1 + sin(v/2)sin(u/2) s3`,
/// `K2 = sin(v/2)cos(u/2) s1 + i cos(v/2)sin(u/2) s2`.
pub fn extremal_qubit_channel(p: ExtremalQubitChannelParams) -> QuantumChannel {
    let (su, cu) = (0.5 * p.u).sin_cos();
    let (sv, cv) = (0.5 * p.v).sin_cos();
    let alpha = cv * cu;
    let beta = sv * su;
    let k1 = ComplexMatrix::diag_real(&[alpha + beta, alpha - beta]);
    // s1 * x + i s2 * y = [[0, x + y], [x - y, 0]]
    let x = sv * cu;
    let y = cv * su;
    let k2 = ComplexMatrix::from_vec(2, 2, vec![ZERO, c(x + y, 0.0), c(x - y, 0.0), ZERO]).expect("2x2");
    QuantumChannel::from_kraus(vec![k1, k2]).expect("the qubit family is complete for all (u, v)")
}

fn permutation(n: usize, image: impl Fn(usize) -> usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(n, n);
    for j in 0..n {
        m[(image(j), j)] = c(1.0, 0.0);
    }
    m
}

/// The three transposition unitaries: `U1` swaps basis states 2 and 3,
/// `U2` swaps 1 and 3, `U3` swaps 1 and 2 (1-based labels).
pub fn qutrit_unitaries() -> [ComplexMatrix; 3] {
    let swap = |a: usize, b: usize| {
        permutation(3, move |j| {
            if j == a {
                b
            } else if j == b {
                a
            } else {
                j
            }
        })
    };
    [swap(1, 2), swap(0, 2), swap(0, 1)]
}

/// `K_i = U_i D_i` with `D1 = diag(a, b, c)`, `D2 = diag(d, e, f)`, `D3 = sqrt(1 - D1^2 - D2^2)`.
pub fn extremal_qutrit_channel(p: ExtremalQutritChannelParams) -> Result<QuantumChannel> {
    let d1 = [p.a, p.b, p.c];
    let d2 = [p.d, p.e, p.f];
    if d1.iter().chain(&d2).any(|&x| !(x >= 0.0) || !x.is_finite()) {
        return Err(Error::InvalidArgument("qutrit parameters must be non-negative".into()));
    }
    let mut d3 = [0.0; 3];
    for j in 0..3 {
        let rest = 1.0 - d1[j] * d1[j] - d2[j] * d2[j];
        if rest < -1e-14 {
            return Err(Error::InvalidArgument(format!(
                "1 - D1^2 - D2^2 is negative ({rest:e}) at position {}",
                j + 1
            )));
        }
        d3[j] = rest.max(0.0).sqrt();
    }
    let [u1, u2, u3] = qutrit_unitaries();
    QuantumChannel::from_kraus(vec![
        u1.matmul(&ComplexMatrix::diag_real(&d1)),
        u2.matmul(&ComplexMatrix::diag_real(&d2)),
        u3.matmul(&ComplexMatrix::diag_real(&d3)),
    ])
}

/// `X^k` with `X|j> = |j + 1 mod n>`.
pub fn cyclic_shift(n: usize, k: usize) -> ComplexMatrix {
    permutation(n, move |j| (j + k) % n)
}

/// Four Kraus operators `X^k D_k`, `k = 0..3`, with cyclic shifts `X^k`.
pub fn extremal_ququart_channel(p: ExtremalQuartParams) -> Result<QuantumChannel> {
    for j in 0..4 {
        let col: f64 = (0..4).map(|k| p.weights[k][j]).sum();
        if p.weights.iter().any(|w| !(w[j] >= 0.0)) || (col - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidArgument(format!(
                "ququart weights at position {j} must be non-negative and sum to 1"
            )));
        }
    }
    let kraus = (0..4)
        .map(|k| {
            let d: Vec<f64> = p.weights[k].iter().map(|w| w.sqrt()).collect();
            cyclic_shift(4, k).matmul(&ComplexMatrix::diag_real(&d))
        })
        .collect();
    QuantumChannel::from_kraus(kraus)
}

/// Uniform draw: `(u, v)` on `[0, 2pi) x [0, pi)` for qubits; for `n = 3, 4`
/// the squared diagonal entries at each position are uniform on the simplex.
pub fn sample_extremal_params(n: usize, rng: &mut RngStream) -> Result<ExtremalParams> {
    use std::f64::consts::{PI, TAU};
    match n {
        2 => Ok(ExtremalParams::Qubit(ExtremalQubitChannelParams {
            u: rng.uniform_range(0.0, TAU),
            v: rng.uniform_range(0.0, PI),
        })),
        3 => {
            let cols: Vec<Vec<f64>> = (0..3).map(|_| rng.dirichlet_uniform(3)).collect();
            Ok(ExtremalParams::Qutrit(ExtremalQutritChannelParams {
                a: cols[0][0].sqrt(),
                b: cols[1][0].sqrt(),
                c: cols[2][0].sqrt(),
                d: cols[0][1].sqrt(),
                e: cols[1][1].sqrt(),
                f: cols[2][1].sqrt(),
            }))
        }
        4 => {
            let mut weights = [[0.0; 4]; 4];
            for j in 0..4 {
                let w = rng.dirichlet_uniform(4);
                for k in 0..4 {
                    weights[k][j] = w[k];
                }
            }
            Ok(ExtremalParams::Ququart(ExtremalQuartParams { weights }))
        }
        _ => Err(Error::InvalidArgument(format!("no extremal family for n = {n}"))),
    }
}

pub fn sample_extremal_channel(n: usize, rng: &mut RngStream) -> Result<QuantumChannel> {
    sample_extremal_params(n, rng)?.channel()
}
