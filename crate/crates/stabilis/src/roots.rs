//! Floating-point root oracle for cross-checks.
//!
//! Aberth-Ehrlich simultaneous iteration on `f64` complex numbers. The
//! oracle never decides anything on its own: exact verdicts come from the
//! Sturm machinery, and agreement is only asserted when the oracle reports
//! no root inside the configurable indeterminacy band around the real axis.

use crate::upoly::UPoly;
use num_complex::Complex64;

#[derive(Clone, Debug)]
pub struct OracleConfig {
    pub epsilon: f64,
    pub max_iterations: u32,
    /// Roots with |Im| below this band are flagged indeterminate.
    pub band: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig { epsilon: 1e-13, max_iterations: 200, band: 1e-9 }
    }
}

#[derive(Clone, Debug)]
pub struct OracleRoots {
    pub roots: Vec<Complex64>,
    pub converged: bool,
    /// Indices of roots within the indeterminacy band of the real axis.
    pub indeterminate: Vec<usize>,
}

impl OracleRoots {
    pub fn max_im(&self) -> f64 {
        self.roots.iter().map(|r| r.im).fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn is_clean(&self) -> bool {
        self.converged && self.indeterminate.is_empty()
    }
}

/// Approximate all complex roots of a nonconstant polynomial.
pub fn numeric_roots(p: &UPoly, cfg: &OracleConfig) -> OracleRoots {
    let mut coeffs: Vec<Complex64> = p
        .coeffs()
        .iter()
        .map(|c| {
            let (re, im) = c.to_f64();
            Complex64::new(re, im)
        })
        .collect();
    // Deflate exact roots at the origin.
    let mut zero_roots = 0usize;
    while coeffs.first().is_some_and(|c| c.norm() == 0.0) && coeffs.len() > 1 {
        coeffs.remove(0);
        zero_roots += 1;
    }
    let scale = coeffs.iter().map(|c| c.norm()).fold(0.0f64, f64::max);
    if scale > 0.0 {
        for c in coeffs.iter_mut() {
            *c /= scale;
        }
    }
    let degree = coeffs.len().saturating_sub(1);
    let mut roots =
        vec![Complex64::new(0.0, 0.0); zero_roots];
    if degree == 0 {
        let indeterminate = roots
            .iter()
            .enumerate()
            .filter(|(_, r)| r.im.abs() <= cfg.band)
            .map(|(i, _)| i)
            .collect();
        return OracleRoots { roots, converged: true, indeterminate };
    }

    let deriv: Vec<Complex64> = coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c * k as f64)
        .collect();

    // Initial guesses on a perturbed circle sized by a coefficient bound.
    let lead = coeffs[degree];
    let radius = 1.0
        + coeffs[..degree]
            .iter()
            .map(|c| (c / lead).norm())
            .fold(0.0f64, f64::max);
    let mut xs: Vec<Complex64> = (0..degree)
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / degree as f64 + 0.4;
            Complex64::from_polar(radius * 0.7, theta)
        })
        .collect();

    let eval = |cs: &[Complex64], x: Complex64| -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in cs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    };

    let mut converged = false;
    for _ in 0..cfg.max_iterations {
        let mut max_step = 0.0f64;
        for k in 0..degree {
            let x = xs[k];
            let pv = eval(&coeffs, x);
            let dv = eval(&deriv, x);
            let newton = if dv.norm() > 0.0 { pv / dv } else { pv };
            let mut rep = Complex64::new(0.0, 0.0);
            for (j, &xj) in xs.iter().enumerate() {
                if j != k {
                    let d = x - xj;
                    if d.norm() > 0.0 {
                        rep += 1.0 / d;
                    }
                }
            }
            let denom = 1.0 - newton * rep;
            let step = if denom.norm() > 1e-300 { newton / denom } else { newton };
            xs[k] = x - step;
            let rel = step.norm() / (1.0 + xs[k].norm());
            if rel > max_step {
                max_step = rel;
            }
        }
        if max_step < cfg.epsilon {
            converged = true;
            break;
        }
    }
    roots.extend(xs);

    // Per-root forward-error estimate: Newton correction plus the
    // evaluation-noise floor eps * sum |c_i| |x|^i over |p'(x)|. A root
    // is indeterminate when the band inflated by its own error estimate
    // straddles the real axis, so the oracle never claims a sign it
    // cannot resolve at working precision.
    let errors: Vec<f64> = roots
        .iter()
        .map(|&x| {
            let pv = eval(&coeffs, x);
            let dv = eval(&deriv, x);
            let mut mag_sum = 0.0f64;
            let mut xp = 1.0f64;
            for c in &coeffs {
                mag_sum += c.norm() * xp;
                xp *= x.norm();
            }
            let noise = f64::EPSILON * mag_sum;
            if dv.norm() > 1e-300 {
                (pv.norm() + noise) / dv.norm()
            } else if pv.norm() > noise {
                f64::INFINITY
            } else {
                0.0
            }
        })
        .collect();
    let indeterminate = roots
        .iter()
        .zip(&errors)
        .enumerate()
        .filter(|(_, (r, &err))| r.im.abs() <= cfg.band + 8.0 * err)
        .map(|(i, _)| i)
        .collect();
    OracleRoots { roots, converged, indeterminate }
}
