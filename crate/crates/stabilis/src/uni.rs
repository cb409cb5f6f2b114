//! Exact univariate stability decisions.
//!
//! A univariate polynomial is stable when it has no root in the open upper
//! half-plane. For real polynomials this is real-rootedness; the general
//! case splits `p = P + iQ` and decides proper position of the pair
//! through interlacing and the Wronskian sign (Hermite-Biehler). Negative
//! verdicts carry a certificate: either an exact root or a disk in the
//! open upper half-plane that provably contains a root.

use crate::error::{Error, Result};
use crate::roots::{numeric_roots, OracleConfig};
use crate::scalar::{Rat, Scalar};
use crate::sturm::{
    is_real_rooted, real_roots_with_multiplicity, sign_on_reals, IsolatedRoot, SignOnR,
};
use crate::upoly::UPoly;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum UniStatus {
    Stable,
    NotStable,
    ZeroPolynomial,
}

/// Certificate that a polynomial has a root in the open upper half-plane.
#[derive(Clone, Debug)]
pub enum RootRegion {
    /// An exact Gaussian-rational root with positive imaginary part.
    ExactRoot(Scalar),
    /// A disk centered at `center` of radius `r` with
    /// `r^{2 deg} = r_pow_2deg < Im(center)^{2 deg}`, where `deg` is the
    /// degree of the square-free part. Such a disk lies in the open upper
    /// half-plane and contains at least one root.
    Disk { center: Scalar, r_pow_2deg: Rat, degree: u32 },
}

impl RootRegion {
    pub fn center(&self) -> &Scalar {
        match self {
            RootRegion::ExactRoot(c) => c,
            RootRegion::Disk { center, .. } => center,
        }
    }
}

impl serde::Serialize for RootRegion {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut m = s.serialize_map(None)?;
        match self {
            RootRegion::ExactRoot(c) => {
                m.serialize_entry("kind", "exact")?;
                m.serialize_entry("root", &c.to_canonical_string())?;
            }
            RootRegion::Disk { center, r_pow_2deg, degree } => {
                m.serialize_entry("kind", "disk")?;
                m.serialize_entry("center", &center.to_canonical_string())?;
                m.serialize_entry(
                    "radius_pow_2deg",
                    &crate::scalar::rat_to_string(r_pow_2deg),
                )?;
                m.serialize_entry("degree", degree)?;
            }
        }
        m.end()
    }
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct UniVerdict {
    pub status: UniStatus,
    pub witness: Option<RootRegion>,
}

impl UniVerdict {
    pub fn is_stable(&self) -> bool {
        self.status == UniStatus::Stable
    }
}

/// Verify a root-region certificate against `p` in exact arithmetic.
pub fn verify_root_region(p: &UPoly, region: &RootRegion) -> bool {
    match region {
        RootRegion::ExactRoot(c) => c.im.is_positive() && p.evaluate(c).is_zero(),
        RootRegion::Disk { center, .. } => {
            if !center.im.is_positive() {
                return false;
            }
            let q = p.squarefree_part();
            let d = match q.degree() {
                Some(d) if d > 0 => d as u32,
                _ => return false,
            };
            let val = q.evaluate(center).norm_sqr();
            let lead = q.leading().unwrap().norm_sqr();
            let im_pow = pow_rat(&center.im, 2 * d);
            val < lead * im_pow
        }
    }
}

fn pow_rat(x: &Rat, e: u32) -> Rat {
    let mut acc = Rat::one();
    let mut base = x.clone();
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            acc *= &base;
        }
        e >>= 1;
        if e > 0 {
            base = base.clone() * &base;
        }
    }
    acc
}

/// Do the zeros of the real-rooted polynomials `f` and `g` interlace?
///
/// Roots are counted with multiplicity and the merged sequence must
/// alternate weakly in one of the two phases; the degrees may differ by at
/// most one. Common roots are allowed (equal polynomials interlace).
pub fn interlace(f: &UPoly, g: &UPoly) -> Result<bool> {
    if f.is_zero() || g.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !is_real_rooted(f)? || !is_real_rooted(g)? {
        return Err(Error::Precondition("interlace requires real-rooted inputs".into()));
    }
    let df = f.degree().unwrap();
    let dg = g.degree().unwrap();
    if df.abs_diff(dg) > 1 {
        return Ok(false);
    }
    let fr = real_roots_with_multiplicity(f)?;
    let gr = real_roots_with_multiplicity(g)?;
    // Merge the two sorted distinct-root lists into ordinal ids.
    let fa: Vec<(IsolatedRoot, u32)> = fr;
    let mut ga: Vec<(IsolatedRoot, u32)> = gr;
    let mut a_ids: Vec<usize> = Vec::new();
    let mut b_ids: Vec<usize> = Vec::new();
    let (mut i, mut j, mut id) = (0usize, 0usize, 0usize);
    while i < fa.len() || j < ga.len() {
        if i == fa.len() {
            for _ in 0..ga[j].1 {
                b_ids.push(id);
            }
            j += 1;
            id += 1;
            continue;
        }
        if j == ga.len() {
            for _ in 0..fa[i].1 {
                a_ids.push(id);
            }
            i += 1;
            id += 1;
            continue;
        }
        let ord = fa[i].0.clone().cmp_root(&mut ga[j].0);
        match ord {
            Ordering::Less => {
                for _ in 0..fa[i].1 {
                    a_ids.push(id);
                }
                i += 1;
                id += 1;
            }
            Ordering::Greater => {
                for _ in 0..ga[j].1 {
                    b_ids.push(id);
                }
                j += 1;
                id += 1;
            }
            Ordering::Equal => {
                for _ in 0..fa[i].1 {
                    a_ids.push(id);
                }
                for _ in 0..ga[j].1 {
                    b_ids.push(id);
                }
                i += 1;
                j += 1;
                id += 1;
            }
        }
    }
    let p = a_ids.len();
    let q = b_ids.len();
    if p.abs_diff(q) > 1 {
        return Ok(false);
    }
    let ok = if p > q {
        alternates(&a_ids, &b_ids)
    } else if q > p {
        alternates(&b_ids, &a_ids)
    } else {
        alternates(&a_ids, &b_ids) || alternates(&b_ids, &a_ids)
    };
    Ok(ok)
}

/// `x1 <= y1 <= x2 <= y2 <= ...` with `|x| = |y|` or `|x| = |y| + 1`.
fn alternates(x: &[usize], y: &[usize]) -> bool {
    for k in 0..y.len() {
        if x[k] > y[k] {
            return false;
        }
        if k + 1 < x.len() && y[k] > x[k + 1] {
            return false;
        }
    }
    true
}

/// Decide proper position `f << g`, i.e. stability of `g + i f`, for real
/// polynomials. Zero and proportional inputs follow the degenerate cases
/// of the pencil characterization.
pub fn proper_position_uni(f: &UPoly, g: &UPoly) -> Result<bool> {
    if !f.is_real() || !g.is_real() {
        return Err(Error::NotReal("proper position needs real inputs".into()));
    }
    match (f.is_zero(), g.is_zero()) {
        (true, true) => return Ok(false),
        (true, false) => return is_real_rooted(g),
        (false, true) => return is_real_rooted(f),
        _ => {}
    }
    if !is_real_rooted(f)? || !is_real_rooted(g)? {
        return Ok(false);
    }
    if !interlace(f, g)? {
        return Ok(false);
    }
    let w = f.derivative().mul(g).sub(&f.mul(&g.derivative()));
    Ok(matches!(sign_on_reals(&w), SignOnR::NonPositive | SignOnR::Zero))
}

/// Exact stability decision for a univariate polynomial with Gaussian
/// rational coefficients. `NotStable` verdicts always carry a certificate.
pub fn is_stable_uni(p: &UPoly) -> UniVerdict {
    if p.is_zero() {
        return UniVerdict { status: UniStatus::ZeroPolynomial, witness: None };
    }
    let (re, im) = p.re_im_parts();
    let stable = if im.is_zero() {
        is_real_rooted(&re).expect("nonzero")
    } else if re.is_zero() {
        is_real_rooted(&im).expect("nonzero")
    } else {
        proper_position_uni(&im, &re).expect("real parts")
    };
    if stable {
        return UniVerdict { status: UniStatus::Stable, witness: None };
    }
    let witness = find_upper_root_witness(p);
    debug_assert!(witness.is_some(), "unstable polynomial must yield a witness");
    UniVerdict { status: UniStatus::NotStable, witness }
}

/// Stability on the closed upper half-plane: stable and no real roots.
pub fn is_strictly_stable_uni(p: &UPoly) -> Result<bool> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !is_stable_uni(p).is_stable() {
        return Ok(false);
    }
    let (re, im) = p.re_im_parts();
    let h = if im.is_zero() {
        re
    } else if re.is_zero() {
        im
    } else {
        re.gcd(&im)
    };
    if h.is_constant() {
        return Ok(true);
    }
    let sf = h.squarefree_part();
    let chain = crate::sturm::SturmChain::new(&sf)?;
    Ok(chain.count_all() == 0)
}

/// Round to denominator `2^bits`, toward nearest.
fn round_dyadic(x: &Rat, bits: u32) -> Rat {
    let scale = BigInt::one() << bits;
    let scaled = x * Rat::from(scale.clone());
    let half = Rat::new(BigInt::one(), BigInt::from(2));
    let shifted = scaled + half;
    let floor = shifted.floor();
    Rat::new(floor.to_integer(), scale)
}

fn round_scalar_dyadic(c: &Scalar, bits: u32) -> Scalar {
    Scalar::new(round_dyadic(&c.re, bits), round_dyadic(&c.im, bits))
}

/// Search for a certified upper-half-plane root region of an unstable
/// polynomial: polish numeric roots with exact Newton steps until the
/// disk bound `r^deg = |q(c)/lc|` fits strictly under `Im(c)^deg`.
fn find_upper_root_witness(p: &UPoly) -> Option<RootRegion> {
    let q = p.squarefree_part();
    let d = q.degree()? as u32;
    if d == 0 {
        return None;
    }
    let qd = q.derivative();
    let lead_norm = q.leading().unwrap().norm_sqr();

    let mut candidates: Vec<Scalar> = Vec::new();
    let oracle = numeric_roots(&q, &OracleConfig::default());
    let mut numeric: Vec<_> = oracle.roots.iter().filter(|r| r.im > 0.0).collect();
    numeric.sort_by(|a, b| b.im.total_cmp(&a.im));
    for r in numeric {
        candidates.push(Scalar::new(
            round_dyadic(&f64_to_rat(r.re), 48),
            round_dyadic(&f64_to_rat(r.im), 48),
        ));
    }
    // Deterministic fallback grid in case the oracle found nothing usable.
    if candidates.is_empty() {
        let b = q.root_bound();
        for num in 1..=8i64 {
            for re_num in -8..=8i64 {
                candidates.push(Scalar::new(
                    &b * crate::scalar::rat(re_num, 8),
                    &b * crate::scalar::rat(num, 8),
                ));
            }
        }
    }

    for cand in candidates {
        let mut c = cand;
        for bits in [48u32, 96, 192, 384, 768] {
            for _ in 0..6 {
                if !c.im.is_positive() {
                    break;
                }
                let val = q.evaluate(&c);
                if val.is_zero() {
                    return Some(RootRegion::ExactRoot(c));
                }
                // Certificate: |q(c)|^2 < |lc|^2 * Im(c)^{2d}.
                let lhs = val.norm_sqr();
                let rhs = &lead_norm * pow_rat(&c.im, 2 * d);
                if lhs < rhs {
                    return Some(RootRegion::Disk {
                        center: c,
                        r_pow_2deg: lhs / lead_norm,
                        degree: d,
                    });
                }
                let dv = qd.evaluate(&c);
                if dv.is_zero() {
                    break;
                }
                let step = &val / &dv;
                c = round_scalar_dyadic(&(&c - &step), bits);
            }
        }
    }
    None
}

fn f64_to_rat(x: f64) -> Rat {
    if !x.is_finite() {
        return Rat::zero();
    }
    Rat::from_float(x).unwrap_or_else(Rat::zero)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn upoly_c(coeffs: &[(i64, i64)]) -> UPoly {
        UPoly::from_coeffs(coeffs.iter().map(|&(a, b)| Scalar::complex(a, b)).collect())
    }

    #[test]
    fn interlace_examples() {
        // f=t, g=t^2-1: 0 lies between -1 and 1
        let f = UPoly::from_ints(&[0, 1]);
        let g = UPoly::from_ints(&[-1, 0, 1]);
        assert!(interlace(&f, &g).unwrap());
        // f=t-3, g=t^2-1: 3 does not separate -1, 1
        let f = UPoly::from_ints(&[-3, 1]);
        assert!(!interlace(&f, &g).unwrap());
        // equal polynomials interlace (common roots allowed)
        let f = UPoly::from_ints(&[0, 1]);
        assert!(interlace(&f, &f).unwrap());
        // non-real-rooted input is a precondition error
        assert!(interlace(&UPoly::from_ints(&[1, 0, 1]), &f).is_err());
    }

    #[test]
    fn proper_position_examples() {
        // 1 << t (t + i is stable)
        let one = UPoly::one();
        let t = UPoly::from_ints(&[0, 1]);
        assert!(proper_position_uni(&one, &t).unwrap());
        // t << 1 fails (1 + it has root i)
        assert!(!proper_position_uni(&t, &one).unwrap());
        // t << t^2 - 1 (roots of t^2+it-1 have Im = -1/2)
        let g = UPoly::from_ints(&[-1, 0, 1]);
        assert!(proper_position_uni(&t, &g).unwrap());
    }

    #[test]
    fn stability_examples() {
        // t + i stable (root -i)
        let p = upoly_c(&[(0, 1), (1, 0)]);
        assert_eq!(is_stable_uni(&p).status, UniStatus::Stable);
        // t - i not stable, witness at i
        let p = upoly_c(&[(0, -1), (1, 0)]);
        let v = is_stable_uni(&p);
        assert_eq!(v.status, UniStatus::NotStable);
        let w = v.witness.unwrap();
        assert!(verify_root_region(&p, &w), "witness must verify: {:?}", w);
        // (t-i)^2 = t^2 - 2it - 1
        let p = upoly_c(&[(-1, 0), (0, -2), (1, 0)]);
        let v = is_stable_uni(&p);
        assert_eq!(v.status, UniStatus::NotStable);
        assert!(verify_root_region(&p, &v.witness.unwrap()));
        // nonzero constants are stable
        assert_eq!(is_stable_uni(&UPoly::from_ints(&[5])).status, UniStatus::Stable);
        // the zero polynomial is its own verdict
        assert_eq!(is_stable_uni(&UPoly::zero()).status, UniStatus::ZeroPolynomial);
    }

    #[test]
    fn strict_stability_examples() {
        let p = upoly_c(&[(0, 1), (1, 0)]); // t + i
        assert!(is_strictly_stable_uni(&p).unwrap());
        let p = UPoly::from_ints(&[0, 1]); // t, real root 0
        assert!(!is_strictly_stable_uni(&p).unwrap());
        let p = UPoly::from_ints(&[1, 0, 1]); // t^2+1, root i
        assert!(!is_strictly_stable_uni(&p).unwrap());
        assert!(is_strictly_stable_uni(&UPoly::zero()).is_err());
    }

    #[test]
    fn closure_properties() {
        use crate::gen;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(47);
        for _ in 0..10 {
            let p = gen::stable_upoly(&mut rng, 3, 4);
            let q = gen::stable_upoly(&mut rng, 2, 4);
            // products of stable are stable
            assert!(is_stable_uni(&p.mul(&q)).is_stable());
            // p(lambda t + alpha) stable for rational lambda > 0, real alpha
            let shifted = p.compose_linear(&Scalar::from_frac(3, 2), &Scalar::from_int(-2));
            assert!(is_stable_uni(&shifted).is_stable());
            // inversion closure: t^d p(-1/t) is stable
            let inv = crate::mpoly::MPoly::from_upoly(&p).invert_var(0).unwrap();
            assert!(is_stable_uni(&inv.to_upoly().unwrap()).is_stable());
        }
    }

    #[test]
    fn hermite_biehler_consistency() {
        // f << g iff g + if stable, on a few fixed pairs
        let pairs = [
            (UPoly::from_ints(&[1]), UPoly::from_ints(&[0, 1])),
            (UPoly::from_ints(&[0, 1]), UPoly::from_ints(&[-1, 0, 1])),
            (UPoly::from_ints(&[-3, 1]), UPoly::from_ints(&[-1, 0, 1])),
            (UPoly::from_ints(&[2, 1]), UPoly::from_ints(&[1, 1])),
        ];
        for (f, g) in pairs {
            let pp = proper_position_uni(&f, &g).unwrap();
            let gif = g.add(&f.scalar_mul(&Scalar::i()));
            let st = is_stable_uni(&gif).is_stable();
            assert_eq!(pp, st, "HB mismatch for {:?}, {:?}", f, g);
        }
    }
}
