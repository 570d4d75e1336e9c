//! Numeric confirmation of the degeneration asymptotics on the Legendre
//! elliptic family y^2 = x(x-1)(x-s).
//!
//! Periods come from the arithmetic-geometric mean: the cycle around the
//! cut [0, s] has real period 2pi / agm(1, sqrt(1-s)), the cycle around
//! [s, 1] has imaginary period of magnitude 2pi / agm(1, sqrt(s)), and the
//! squared norm of dx/y is 2 |Im(conj(w1) w2)|. Tests validate both periods
//! against direct quadrature of the cycle integrals. A linear least-squares
//! fit of -log(norm) against {log|s|^2, -log|log|s|^2|, 1} then recovers the
//! leading and log-log coefficients.
//!
//! This is the one floating-point module; every tolerance is pinned at the
//! call site.

use std::f64::consts::PI;
use std::io::{Read, Write};

use nalgebra::{DMatrix, DVector};
use num::complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum PeriodError {
    #[error("agm needs nonzero inputs with a + b != 0")]
    InvalidAgmInput,
    #[error("agm did not converge within {0} iterations")]
    NonConvergence(u32),
    #[error("parameter s = {0} is outside (0, 1/2)")]
    DomainError(f64),
    #[error("design matrix is rank-deficient: samples do not determine the three coefficients")]
    DegenerateDesign,
    #[error("need at least 4 samples, got {0}")]
    TooFewSamples(usize),
    #[error("sample s = {0} is outside (0, 1)")]
    SampleOutOfRange(f64),
    #[error("malformed csv: {0}")]
    Csv(String),
}

/// One evaluation of the family: the parameter and the squared norm of the
/// relative form dx/y on the fiber.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PeriodSample {
    pub s: f64,
    pub l2_norm: f64,
}

/// Coefficients fitted to v = alpha * log|s|^2 - beta * log|log|s|^2| + C,
/// with the least-squares residual and the condition of the design matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub alpha_hat: f64,
    pub beta_hat: f64,
    pub const_hat: f64,
    pub residual_norm: f64,
    pub condition_estimate: f64,
}

const AGM_MAX_STEPS: u32 = 60;
const AGM_REL_TOL: f64 = 1e-15;

/// Arithmetic-geometric mean, taking at each step the square-root branch
/// with |a - g| <= |a + g|. Converges quadratically; errors out for zero or
/// antipodal inputs and after 60 steps without convergence.
pub fn agm(a: Complex64, b: Complex64) -> Result<Complex64, PeriodError> {
    let zero = Complex64::new(0.0, 0.0);
    if a == zero || b == zero || a + b == zero {
        return Err(PeriodError::InvalidAgmInput);
    }
    let (mut a, mut b) = (a, b);
    for _ in 0..AGM_MAX_STEPS {
        if (a - b).norm() <= AGM_REL_TOL * a.norm().max(b.norm()) {
            return Ok((a + b) / 2.0);
        }
        let arith = (a + b) / 2.0;
        let mut geom = (a * b).sqrt();
        if (arith - geom).norm() > (arith + geom).norm() {
            geom = -geom;
        }
        a = arith;
        b = geom;
    }
    Err(PeriodError::NonConvergence(AGM_MAX_STEPS))
}

fn agm_real(a: f64, b: f64) -> Result<f64, PeriodError> {
    Ok(agm(Complex64::new(a, 0.0), Complex64::new(b, 0.0))?.re)
}

fn check_domain(s: f64) -> Result<(), PeriodError> {
    if s.is_finite() && s > 0.0 && s < 0.5 {
        Ok(())
    } else {
        Err(PeriodError::DomainError(s))
    }
}

/// The two fundamental periods of dx/y on y^2 = x(x-1)(x-s) for real
/// s in (0, 1/2): the real period around the cut [0, s] and the magnitude
/// of the purely imaginary period around [s, 1].
pub fn legendre_periods(s: f64) -> Result<(f64, f64), PeriodError> {
    check_domain(s)?;
    let real_period = 2.0 * PI / agm_real(1.0, (1.0 - s).sqrt())?;
    let imag_period = 2.0 * PI / agm_real(1.0, s.sqrt())?;
    Ok((real_period, imag_period))
}

/// Squared norm 2 |Im(conj(w1) w2)| of dx/y at parameter s.
pub fn legendre_l2(s: f64) -> Result<PeriodSample, PeriodError> {
    let (real_period, imag_period) = legendre_periods(s)?;
    Ok(PeriodSample {
        s,
        l2_norm: 2.0 * real_period * imag_period,
    })
}

/// Samples of the family on a log-spaced grid from `s_min` to `s_max`.
pub fn sample_legendre(
    s_min: f64,
    s_max: f64,
    count: usize,
) -> Result<Vec<PeriodSample>, PeriodError> {
    check_domain(s_min)?;
    check_domain(s_max)?;
    if s_min > s_max {
        return Err(PeriodError::DomainError(s_min));
    }
    let mut out = Vec::with_capacity(count);
    for i in 0..count {
        let t = if count == 1 {
            0.0
        } else {
            i as f64 / (count - 1) as f64
        };
        let s = (s_min.ln() + t * (s_max.ln() - s_min.ln())).exp();
        out.push(legendre_l2(s)?);
    }
    Ok(out)
}

/// Least squares of v against {log|s|^2, -log|log|s|^2|, 1} for samples
/// (s, v). Duplicate abscissae make the data degenerate and are reported as
/// such before any other precondition.
pub fn fit_asymptotics(samples: &[(f64, f64)]) -> Result<FitResult, PeriodError> {
    for (i, (s, _)) in samples.iter().enumerate() {
        if samples[..i].iter().any(|(t, _)| t == s) {
            return Err(PeriodError::DegenerateDesign);
        }
    }
    for &(s, _) in samples {
        if !(s.is_finite() && s > 0.0 && s < 1.0) {
            return Err(PeriodError::SampleOutOfRange(s));
        }
    }
    if samples.len() < 4 {
        return Err(PeriodError::TooFewSamples(samples.len()));
    }

    let rows = samples.len();
    let mut design = DMatrix::zeros(rows, 3);
    let mut rhs = DVector::zeros(rows);
    for (i, &(s, v)) in samples.iter().enumerate() {
        // log(s^2) as 2 log s, so that s below 1e-154 cannot underflow.
        let log_s2 = 2.0 * s.ln();
        design[(i, 0)] = log_s2;
        design[(i, 1)] = -log_s2.abs().ln();
        design[(i, 2)] = 1.0;
        rhs[i] = v;
    }

    let svd = design.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    if smin <= 1e-10 * smax {
        return Err(PeriodError::DegenerateDesign);
    }
    let solution = svd
        .solve(&rhs, 0.0)
        .expect("svd was computed with both factor sets");
    let residual = (&design * &solution - &rhs).norm();
    Ok(FitResult {
        alpha_hat: solution[0],
        beta_hat: solution[1],
        const_hat: solution[2],
        residual_norm: residual,
        condition_estimate: smax / smin,
    })
}

#[derive(Serialize, Deserialize)]
struct CsvRow {
    s: f64,
    l2_norm: f64,
    neglog: f64,
}

/// Write samples as `s,l2_norm,neglog` with a header row, where neglog is
/// -log(l2_norm).
pub fn write_csv<W: Write>(samples: &[PeriodSample], writer: W) -> Result<(), PeriodError> {
    let mut w = csv::Writer::from_writer(writer);
    for sample in samples {
        w.serialize(CsvRow {
            s: sample.s,
            l2_norm: sample.l2_norm,
            neglog: -sample.l2_norm.ln(),
        })
        .map_err(|e| PeriodError::Csv(e.to_string()))?;
    }
    w.flush().map_err(|e| PeriodError::Csv(e.to_string()))
}

/// Read `s,l2_norm,neglog` rows (header required) as (s, l2_norm, neglog).
pub fn read_csv<R: Read>(reader: R) -> Result<Vec<(f64, f64, f64)>, PeriodError> {
    let mut r = csv::Reader::from_reader(reader);
    let mut out = Vec::new();
    for row in r.deserialize() {
        let row: CsvRow = row.map_err(|e| PeriodError::Csv(e.to_string()))?;
        out.push((row.s, row.l2_norm, row.neglog));
    }
    Ok(out)
}
