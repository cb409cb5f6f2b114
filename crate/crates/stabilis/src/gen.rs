//! Deterministic random generators for polynomials and operators.
//!
//! Everything is driven by an explicit RNG so that a fixed seed reproduces
//! the exact same objects; stable-by-construction generators build their
//! certificates into the construction (products of factors with known root
//! locations).

use crate::mpoly::MPoly;
use crate::multiindex::ExpVec;
use crate::operator::LinearOperatorSpec;
use crate::scalar::{Rat, Scalar};
use crate::upoly::UPoly;
use num_bigint::BigInt;
use rand::Rng;

/// Rational `p/q` with `1 <= p, q <= h`.
pub fn rand_pos_rat<R: Rng>(rng: &mut R, h: u32) -> Rat {
    let p = rng.gen_range(1..=h as i64);
    let q = rng.gen_range(1..=h as i64);
    Rat::new(BigInt::from(p), BigInt::from(q))
}

/// Rational `p/q` with `-h <= p <= h`, `1 <= q <= h`.
pub fn rand_sym_rat<R: Rng>(rng: &mut R, h: u32) -> Rat {
    let p = rng.gen_range(-(h as i64)..=h as i64);
    let q = rng.gen_range(1..=h as i64);
    Rat::new(BigInt::from(p), BigInt::from(q))
}

/// Gaussian rational with symmetric real part and strictly positive
/// imaginary part.
pub fn rand_upper_scalar<R: Rng>(rng: &mut R, h: u32) -> Scalar {
    Scalar::new(rand_sym_rat(rng, h), rand_pos_rat(rng, h))
}

/// Gaussian rational with nonpositive imaginary part.
pub fn rand_lower_scalar<R: Rng>(rng: &mut R, h: u32) -> Scalar {
    let im = -rand_pos_rat(rng, h);
    Scalar::new(rand_sym_rat(rng, h), im)
}

pub fn rand_scalar<R: Rng>(rng: &mut R, h: u32) -> Scalar {
    Scalar::new(rand_sym_rat(rng, h), rand_sym_rat(rng, h))
}

pub fn rand_real_scalar<R: Rng>(rng: &mut R, h: u32) -> Scalar {
    Scalar::from_rat(rand_sym_rat(rng, h))
}

/// Random univariate polynomial of degree exactly `deg` (nonzero leading
/// coefficient) with Gaussian rational coefficients.
pub fn rand_complex_upoly<R: Rng>(rng: &mut R, deg: usize, h: u32) -> UPoly {
    let mut coeffs: Vec<Scalar> = (0..deg).map(|_| rand_scalar(rng, h)).collect();
    let mut lead = rand_scalar(rng, h);
    while lead.is_zero() {
        lead = rand_scalar(rng, h);
    }
    coeffs.push(lead);
    UPoly::from_coeffs(coeffs)
}

/// Random real univariate polynomial of degree exactly `deg`.
pub fn rand_real_upoly<R: Rng>(rng: &mut R, deg: usize, h: u32) -> UPoly {
    let mut coeffs: Vec<Scalar> = (0..deg).map(|_| rand_real_scalar(rng, h)).collect();
    let mut lead = rand_real_scalar(rng, h);
    while lead.is_zero() {
        lead = rand_real_scalar(rng, h);
    }
    coeffs.push(lead);
    UPoly::from_coeffs(coeffs)
}

/// Stable by construction: product of `deg` factors `(t - zeta)` with
/// `Im(zeta) <= 0`, times a nonzero scalar.
pub fn stable_upoly<R: Rng>(rng: &mut R, deg: usize, h: u32) -> UPoly {
    let mut p = UPoly::constant(nonzero_scalar(rng, h));
    for _ in 0..deg {
        let zeta = if rng.gen_bool(0.4) {
            rand_real_scalar(rng, h)
        } else {
            rand_lower_scalar(rng, h)
        };
        p = p.mul(&UPoly::from_coeffs(vec![-&zeta, Scalar::one()]));
    }
    p
}

/// Stable with every root strictly below the real axis.
pub fn strictly_stable_upoly<R: Rng>(rng: &mut R, deg: usize, h: u32) -> UPoly {
    let mut p = UPoly::constant(nonzero_scalar(rng, h));
    for _ in 0..deg {
        let zeta = rand_lower_scalar(rng, h);
        p = p.mul(&UPoly::from_coeffs(vec![-&zeta, Scalar::one()]));
    }
    p
}

/// Unstable by construction: a stable product times one factor with a
/// root strictly above the real axis.
pub fn unstable_upoly<R: Rng>(rng: &mut R, deg: usize, h: u32) -> UPoly {
    assert!(deg >= 1);
    let zeta = rand_upper_scalar(rng, h);
    let bad = UPoly::from_coeffs(vec![-&zeta, Scalar::one()]);
    stable_upoly(rng, deg - 1, h).mul(&bad)
}

/// Real-rooted by construction: product of real-root factors.
pub fn real_rooted_upoly<R: Rng>(rng: &mut R, deg: usize, h: u32) -> UPoly {
    let mut p = UPoly::constant(nonzero_real_scalar(rng, h));
    for _ in 0..deg {
        let r = rand_real_scalar(rng, h);
        p = p.mul(&UPoly::from_coeffs(vec![-&r, Scalar::one()]));
    }
    p
}

fn nonzero_scalar<R: Rng>(rng: &mut R, h: u32) -> Scalar {
    loop {
        let c = rand_scalar(rng, h);
        if !c.is_zero() {
            return c;
        }
    }
}

fn nonzero_real_scalar<R: Rng>(rng: &mut R, h: u32) -> Scalar {
    loop {
        let c = rand_real_scalar(rng, h);
        if !c.is_zero() {
            return c;
        }
    }
}

/// Real stable by construction: product of linear forms
/// `c + sum a_i z_i` with `a_i >= 0` rational, not all zero, `c` real.
pub fn real_stable_linear_product<R: Rng>(
    rng: &mut R,
    nvars: usize,
    factors: usize,
    h: u32,
) -> MPoly {
    let mut p = MPoly::one(nvars);
    for _ in 0..factors {
        let mut form = MPoly::constant(nvars, rand_real_scalar(rng, h));
        let mut any = false;
        for i in 0..nvars {
            if rng.gen_bool(0.7) {
                let a = rand_pos_rat(rng, h);
                form = form
                    .add(&MPoly::var(nvars, i).scalar_mul(&Scalar::from_rat(a)))
                    .unwrap();
                any = true;
            }
        }
        if !any {
            let i = rng.gen_range(0..nvars);
            form = form
                .add(&MPoly::var(nvars, i).scalar_mul(&Scalar::from_rat(rand_pos_rat(rng, h))))
                .unwrap();
        }
        p = p.mul(&form).unwrap();
    }
    p
}

/// Stable by construction with constant term 1: product of per-variable
/// factors `(1 + xi z_i)` with `Im(xi) <= 0` and multivariate real factors
/// `(1 + sum a_i z_i)`, `a_i >= 0`.
pub fn stable_with_unit_constant<R: Rng>(
    rng: &mut R,
    nvars: usize,
    factors: usize,
    h: u32,
) -> MPoly {
    let mut p = MPoly::one(nvars);
    for _ in 0..factors {
        if rng.gen_bool(0.5) {
            // univariate factor 1 + xi z_i, Im(xi) <= 0
            let i = rng.gen_range(0..nvars);
            let xi = if rng.gen_bool(0.5) {
                Scalar::from_rat(rand_sym_rat(rng, h))
            } else {
                rand_lower_scalar(rng, h)
            };
            let f = MPoly::one(nvars)
                .add(&MPoly::var(nvars, i).scalar_mul(&xi))
                .unwrap();
            p = p.mul(&f).unwrap();
        } else {
            let mut form = MPoly::one(nvars);
            for i in 0..nvars {
                if rng.gen_bool(0.6) {
                    form = form
                        .add(
                            &MPoly::var(nvars, i)
                                .scalar_mul(&Scalar::from_rat(rand_pos_rat(rng, h))),
                        )
                        .unwrap();
                }
            }
            p = p.mul(&form).unwrap();
        }
    }
    p
}

/// Random sparse multivariate polynomial with up to `terms` monomials of
/// degree at most `maxdeg` per variable.
pub fn rand_mpoly<R: Rng>(
    rng: &mut R,
    nvars: usize,
    maxdeg: u32,
    terms: usize,
    h: u32,
) -> MPoly {
    let mut p = MPoly::zero(nvars);
    for _ in 0..terms {
        let e = ExpVec((0..nvars).map(|_| rng.gen_range(0..=maxdeg)).collect());
        p.add_term(e, rand_scalar(rng, h));
    }
    p
}

pub fn rand_real_mpoly<R: Rng>(
    rng: &mut R,
    nvars: usize,
    maxdeg: u32,
    terms: usize,
    h: u32,
) -> MPoly {
    let mut p = MPoly::zero(nvars);
    for _ in 0..terms {
        let e = ExpVec((0..nvars).map(|_| rng.gen_range(0..=maxdeg)).collect());
        p.add_term(e, rand_real_scalar(rng, h));
    }
    p
}

/// Random operator given by a table of random sparse images.
pub fn rand_operator<R: Rng>(
    rng: &mut R,
    nvars: usize,
    kappa: &ExpVec,
    maxdeg: u32,
    h: u32,
) -> LinearOperatorSpec {
    let mut entries = Vec::new();
    for alpha in ExpVec::iter_below(kappa) {
        let img = rand_mpoly(rng, nvars, maxdeg, 3, h);
        entries.push((alpha, img));
    }
    LinearOperatorSpec::from_table(nvars, kappa.clone(), entries).unwrap()
}

/// Random operator with all-real images.
pub fn rand_real_operator<R: Rng>(
    rng: &mut R,
    nvars: usize,
    kappa: &ExpVec,
    maxdeg: u32,
    h: u32,
) -> LinearOperatorSpec {
    let mut entries = Vec::new();
    for alpha in ExpVec::iter_below(kappa) {
        let img = rand_real_mpoly(rng, nvars, maxdeg, 3, h);
        entries.push((alpha, img));
    }
    LinearOperatorSpec::from_table(nvars, kappa.clone(), entries).unwrap()
}
