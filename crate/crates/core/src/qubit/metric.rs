//! Metric derivative of `W` at `rho(r, 0)` and the witness that it is not a
//! quadratic form in the tangent vector.

use std::io::Write;

use serde::{Deserialize, Serialize};

use super::{maximize_periodic, tq_semianalytic};
use crate::error::{Error, Result};

/// Tangent vector in the `(r, theta)` chart.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TangentVector {
    pub v1: f64,
    pub v2: f64,
}

impl TangentVector {
    pub fn new(v1: f64, v2: f64) -> Self {
        Self { v1, v2 }
    }
}

/// `G(r, (1, 0)) = max{1/(1-r), 1/r} / 8`.
pub fn g11(r: f64) -> f64 {
    0.125 * (1.0 / (1.0 - r)).max(1.0 / r)
}

/// `G(r, (0, 1)) = (1 - 2 sqrt(r(1-r))) / 8`.
pub fn g22(r: f64) -> f64 {
    0.125 * (1.0 - 2.0 * (r * (1.0 - r)).sqrt())
}

fn check_interior(r: f64) -> Result<()> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "metric derivative needs r in (0, 1), got {r}: the denominator vanishes"
        )));
    }
    Ok(())
}

/// `G(r, v) = max_phi (2 v1 cos phi - (2r-1) v2 sin phi)^2 / (16 (1 + (2r-1) cos phi))`.
pub fn metric_derivative_g(r: f64, v: TangentVector) -> Result<f64> {
    check_interior(r)?;
    if !(v.v1.is_finite() && v.v2.is_finite()) {
        return Err(Error::InvalidArgument(format!("non-finite tangent vector {v:?}")));
    }
    let xi = 2.0 * r - 1.0;
    Ok(maximize_periodic(|phi| {
        let (s, c) = phi.sin_cos();
        let num = 2.0 * v.v1 * c - xi * v.v2 * s;
        let (sh, ch) = (0.5 * phi).sin_cos();
        num * num / (32.0 * (r * ch * ch + (1.0 - r) * sh * sh))
    })
    .1)
}

/// Extrapolates `T^Q(rho(r, 0), rho(r + v1 t, v2 t)) / t^2` to `t = 0` by
/// polynomial (Neville) extrapolation through all given `t`.
pub fn finite_difference_g(r: f64, v: TangentVector, t_list: &[f64]) -> Result<f64> {
    check_interior(r)?;
    if t_list.is_empty() || t_list.iter().any(|t| !(*t > 0.0)) {
        return Err(Error::InvalidArgument("step sizes must be positive".into()));
    }
    let mut q = Vec::with_capacity(t_list.len());
    for &t in t_list {
        let r2 = r + v.v1 * t;
        if !(0.0..=1.0).contains(&r2) {
            return Err(Error::OutsideBlochBall { r: r2 });
        }
        q.push(tq_semianalytic(r, r2, v.v2 * t) / (t * t));
    }
    // Neville's scheme evaluated at zero.
    let n = q.len();
    for k in 1..n {
        for i in 0..n - k {
            let (ti, tk) = (t_list[i], t_list[i + k]);
            q[i] = (tk * q[i] - ti * q[i + 1]) / (tk - ti);
        }
    }
    Ok(q[0])
}

/// One line of the nonlinearity witness.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WitnessRow {
    pub r: f64,
    pub v2: f64,
    /// `G(r, (1, v2))`.
    pub g: f64,
    /// `G(r, (1, v2)) - g11(r) - g22(r) v2^2`, affine in `v2` if `G` were a quadratic form.
    pub h: f64,
}

pub fn riemann_witness(r: f64, grid: &[f64]) -> Result<Vec<WitnessRow>> {
    check_interior(r)?;
    let (a, b) = (g11(r), g22(r));
    grid.iter()
        .map(|&v2| {
            let g = metric_derivative_g(r, TangentVector::new(1.0, v2))?;
            Ok(WitnessRow { r, v2, g, h: g - a - b * v2 * v2 })
        })
        .collect()
}

/// Largest absolute residual of the least-squares affine fit `h ~ a + b v2`.
pub fn affine_fit_residual(rows: &[WitnessRow]) -> f64 {
    let n = rows.len() as f64;
    if rows.len() < 2 {
        return 0.0;
    }
    let mx = rows.iter().map(|w| w.v2).sum::<f64>() / n;
    let my = rows.iter().map(|w| w.h).sum::<f64>() / n;
    let sxx: f64 = rows.iter().map(|w| (w.v2 - mx).powi(2)).sum();
    let sxy: f64 = rows.iter().map(|w| (w.v2 - mx) * (w.h - my)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    rows.iter().map(|w| (w.h - my - slope * (w.v2 - mx)).abs()).fold(0.0, f64::max)
}

/// CSV with columns `r, v2, G, h`.
pub fn write_witness_csv<W: Write>(rows: &[WitnessRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["r", "v2", "G", "h"]).map_err(csv_error)?;
    for row in rows {
        w.write_record([row.r, row.v2, row.g, row.h].map(|x| format!("{x:.16e}"))).map_err(csv_error)?;
    }
    w.flush()?;
    Ok(())
}

pub(crate) fn csv_error(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axis_directions_match_closed_forms() {
        for r in [0.1, 1.0 / 3.0, 0.5, 0.77] {
            let a = metric_derivative_g(r, TangentVector::new(1.0, 0.0)).unwrap();
            let b = metric_derivative_g(r, TangentVector::new(0.0, 1.0)).unwrap();
            assert!((a - g11(r)).abs() < 1e-12, "r={r}");
            assert!((b - g22(r)).abs() < 1e-12, "r={r}");
        }
    }

    #[test]
    fn boundary_radius_rejected() {
        assert!(metric_derivative_g(0.0, TangentVector::new(1.0, 0.0)).is_err());
        assert!(metric_derivative_g(1.0, TangentVector::new(0.0, 1.0)).is_err());
    }

    #[test]
    fn zero_direction() {
        assert_eq!(finite_difference_g(0.3, TangentVector::new(0.0, 0.0), &[1e-2, 5e-3]).unwrap(), 0.0);
    }

    #[test]
    fn leaving_the_ball_is_an_error() {
        let e = finite_difference_g(0.99, TangentVector::new(5.0, 0.0), &[0.01]);
        assert!(matches!(e, Err(Error::OutsideBlochBall { .. })));
    }

    #[test]
    fn csv_header() {
        let rows = riemann_witness(0.25, &[0.0, 1.0]).unwrap();
        let mut buf = Vec::new();
        write_witness_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("r,v2,G,h\n"));
        assert_eq!(text.lines().count(), 3);
    }
}
