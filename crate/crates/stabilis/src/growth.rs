//! Szasz-type coefficient and growth bounds for stable polynomials.
//!
//! The coefficient bound is verified in exact rational arithmetic (both
//! sides are rational after squaring); the growth bounds compare a
//! boundary-grid maximum against `B e^{C r^2}` in floating point with a
//! conservative tolerance, so a true theorem is never reported violated.
//! Scalar moduli that enter the constants are replaced by the rational
//! over-approximation `|re| + |im|`, which only loosens the bounds.

use crate::error::{Error, Result};
use crate::mpoly::MPoly;
use crate::multi::{check_stability, SamplingConfig};
use crate::multiindex::{factorial_rat, ExpVec};
use crate::roots::{numeric_roots, OracleConfig};
use crate::scalar::{rat_to_f64, Rat, Scalar};
use crate::uni::is_stable_uni;
use crate::upoly::UPoly;
use num_bigint::BigInt;
use num_traits::{One, Zero};

/// `sqrt(2e^2 - e)/(e - 1)` to twenty digits; the dimension factor is
/// `B = 2^{n-1}` times this.
pub const B1_DECIMAL: &str = "2.0210460182654043585";
pub const B1: f64 = 2.021046018265404;

/// Relative slack for floating-point inequality checks, applied in the
/// direction that can only weaken the claim being verified.
const REL_TOL: f64 = 1e-10;

#[derive(Clone, Debug, serde::Serialize)]
pub struct GrowthConstants {
    /// Exact rational `A^2` built from the first- and second-order
    /// coefficient bounds.
    #[serde(serialize_with = "ser_rat")]
    pub a_sq: Rat,
    /// `B = 2^{n-1} sqrt(2e^2 - e)/(e - 1)`.
    pub b: f64,
    /// `C = 6 e^2 (sum_i |a(e_i)|)^2 + 4 e^2 sum_{i,j} |a(e_i + e_j)|`.
    pub c: f64,
    pub notes: Vec<String>,
}

fn ser_rat<S: serde::Serializer>(x: &Rat, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&crate::scalar::rat_to_string(x))
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct BoundReport {
    pub pass: bool,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub note: String,
}

fn check_leq(lhs: f64, rhs: f64, note: impl Into<String>) -> BoundReport {
    let slack = rhs.abs().max(1.0) * REL_TOL;
    let pass = lhs <= rhs + slack;
    BoundReport { pass, lhs, rhs, margin: rhs - lhs, note: note.into() }
}

/// First- and second-order coefficient sums with the rational modulus
/// over-approximation: `s1 = sum_i |a(e_i)|`, `s2 = sum_{i,j} |a(e_i +
/// e_j)|` over ordered pairs.
fn order_sums(f: &MPoly) -> (Rat, Rat) {
    let n = f.nvars();
    let mut s1 = Rat::zero();
    for i in 0..n {
        s1 += f.coeff(&ExpVec::unit(n, i)).abs_bound();
    }
    let mut s2 = Rat::zero();
    for i in 0..n {
        for j in 0..n {
            let e = ExpVec::unit(n, i).add(&ExpVec::unit(n, j));
            s2 += f.coeff(&e).abs_bound();
        }
    }
    (s1, s2)
}

fn require_unit_constant(f: &MPoly) -> Result<()> {
    if !f.constant_term().is_one() {
        return Err(Error::Precondition("constant term must be 1".into()));
    }
    Ok(())
}

fn require_stable_uni(p: &UPoly) -> Result<()> {
    if !is_stable_uni(p).is_stable() {
        return Err(Error::Precondition("polynomial is not stable".into()));
    }
    Ok(())
}

/// Root-modulus bound for a stable `p` with `p(0) = 1` written as
/// `prod (1 + xi_j z)`: verifies `sum |xi_j|^2 <= 3|a_1|^2 + 2|a_2|`.
pub fn szasz_root_sum_check(p: &UPoly) -> Result<BoundReport> {
    if p.coeff(0) != Scalar::one() {
        return Err(Error::Precondition("p(0) must equal 1".into()));
    }
    require_stable_uni(p)?;
    let oracle = numeric_roots(p, &OracleConfig::default());
    let mut sum_sq = 0.0f64;
    if p.degree().unwrap_or(0) > 0 {
        for zeta in &oracle.roots {
            // xi = -1/zeta; roots are nonzero since p(0) = 1
            sum_sq += 1.0 / (zeta.norm_sqr());
        }
    }
    let a1_sq = rat_to_f64(&p.coeff(1).norm_sqr());
    let a2 = rat_to_f64(&p.coeff(2).norm_sqr()).sqrt();
    let bound = 3.0 * a1_sq + 2.0 * a2;
    Ok(check_leq(sum_sq, bound, "sum |xi|^2 <= 3|a1|^2 + 2|a2|"))
}

/// Growth of a stable `p` with `p(0) = 1` on `|z| <= r`:
/// `max |p| <= exp(r |a1| + 3 r^2 |a1|^2 + 3 r^2 |a2|)`, the maximum
/// estimated on a boundary grid (maximum principle).
pub fn szasz_growth_check(p: &UPoly, r: f64, grid: usize) -> Result<BoundReport> {
    if p.coeff(0) != Scalar::one() {
        return Err(Error::Precondition("p(0) must equal 1".into()));
    }
    require_stable_uni(p)?;
    let max = boundary_max_uni(p, r, grid.max(8));
    let a1 = rat_to_f64(&p.coeff(1).norm_sqr()).sqrt();
    let a2 = rat_to_f64(&p.coeff(2).norm_sqr()).sqrt();
    let exponent = r * a1 + 3.0 * r * r * a1 * a1 + 3.0 * r * r * a2;
    Ok(check_leq(max, exponent.exp(), format!("boundary max at r = {}", r)))
}

fn boundary_max_uni(p: &UPoly, r: f64, grid: usize) -> f64 {
    let mut max = 0.0f64;
    for k in 0..grid {
        let theta = 2.0 * std::f64::consts::PI * k as f64 / grid as f64;
        let z = num_complex::Complex64::from_polar(r, theta);
        let mut acc = num_complex::Complex64::new(0.0, 0.0);
        for c in p.coeffs().iter().rev() {
            let (re, im) = c.to_f64();
            acc = acc * z + num_complex::Complex64::new(re, im);
        }
        max = max.max(acc.norm());
    }
    max
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct CoefficientBoundReport {
    #[serde(serialize_with = "ser_rat")]
    pub a_sq: Rat,
    pub checked: usize,
    pub pass: bool,
    /// Worst `(lhs/rhs)` ratio over the support, as a float for display.
    pub worst_ratio: f64,
}

/// Exact verification of the coefficient bound `|a(beta)| <=
/// |beta|^{-|beta|/2} (beta^beta / beta!) A^{|beta|}` over the whole
/// support of a stable `f` with `f(0) = 1`. Both sides are compared as
/// exact rationals after squaring.
pub fn coefficient_bound_check(f: &MPoly, cfg: &SamplingConfig) -> Result<CoefficientBoundReport> {
    require_unit_constant(f)?;
    if check_stability(f, cfg).is_refuted() {
        return Err(Error::Precondition("polynomial is not stable".into()));
    }
    let (s1, s2) = order_sums(f);
    let a_sq = Rat::from(BigInt::from(3)) * &s1 * &s1 + Rat::from(BigInt::from(2)) * &s2;
    let mut checked = 0usize;
    let mut pass = true;
    let mut worst = 0.0f64;
    for (beta, coeff) in f.terms() {
        let total = beta.total();
        if total == 0 {
            continue;
        }
        checked += 1;
        // rhs^2 = |beta|^{-|beta|} (beta^beta / beta!)^2 (A^2)^{|beta|}
        let mut beta_pow = Rat::one();
        let mut beta_fact = Rat::one();
        for &bi in &beta.0 {
            if bi > 0 {
                beta_pow *= pow_rat(&Rat::from(BigInt::from(bi)), bi);
            }
            beta_fact *= factorial_rat(bi);
        }
        let total_pow = pow_rat(&Rat::from(BigInt::from(total)), total as u32);
        let comb = &beta_pow / &beta_fact;
        let rhs_sq = (&comb * &comb) * pow_rat(&a_sq, total as u32) / total_pow;
        let lhs_sq = coeff.norm_sqr();
        if lhs_sq > rhs_sq {
            pass = false;
        }
        let ratio = (rat_to_f64(&lhs_sq) / rat_to_f64(&rhs_sq)).sqrt();
        worst = worst.max(ratio);
    }
    Ok(CoefficientBoundReport { a_sq, checked, pass, worst_ratio: worst })
}

fn pow_rat(x: &Rat, e: u32) -> Rat {
    let mut acc = Rat::one();
    for _ in 0..e {
        acc *= x;
    }
    acc
}

fn pow_u64(x: &Rat, e: u64) -> Rat {
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

/// Constants of the polydisk growth bound `max_{|z_i| <= r} |f| <= B
/// e^{C r^2}` for a stable `f` with `f(0) = 1`.
pub fn growth_constants(f: &MPoly, cfg: &SamplingConfig) -> Result<GrowthConstants> {
    require_unit_constant(f)?;
    if check_stability(f, cfg).is_refuted() {
        return Err(Error::Precondition("polynomial is not stable".into()));
    }
    Ok(growth_constants_unchecked(f))
}

fn growth_constants_unchecked(f: &MPoly) -> GrowthConstants {
    let n = f.nvars();
    let (s1, s2) = order_sums(f);
    let a_sq = Rat::from(BigInt::from(3)) * &s1 * &s1 + Rat::from(BigInt::from(2)) * &s2;
    let e2 = std::f64::consts::E * std::f64::consts::E;
    let c = 6.0 * e2 * rat_to_f64(&(&s1 * &s1)) + 4.0 * e2 * rat_to_f64(&s2);
    let b = 2f64.powi(n as i32 - 1) * B1;
    GrowthConstants {
        a_sq,
        b,
        c,
        notes: vec![format!("B = 2^{} * {}", n as i32 - 1, B1_DECIMAL)],
    }
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct GrowthReport {
    pub constants: GrowthConstants,
    pub radius: f64,
    pub grid_per_circle: usize,
    pub max_found: f64,
    pub bound: f64,
    pub pass: bool,
}

/// Compare the boundary-torus grid maximum of `|f|` on the polydisk of
/// radius `r` against `B e^{C r^2}`.
pub fn growth_bound_check(
    f: &MPoly,
    r: f64,
    grid: Option<usize>,
    cfg: &SamplingConfig,
) -> Result<GrowthReport> {
    let constants = growth_constants(f, cfg)?;
    let n = f.nvars().max(1);
    let per_circle = grid.unwrap_or(match n {
        1 => 64,
        2 => 24,
        _ => 12,
    });
    let max_found = boundary_max_multi(f, r, per_circle);
    let bound = constants.b * (constants.c * r * r).exp();
    let slack = bound.abs().max(1.0) * REL_TOL;
    Ok(GrowthReport {
        pass: max_found <= bound + slack,
        constants,
        radius: r,
        grid_per_circle: per_circle,
        max_found,
        bound,
    })
}

fn boundary_max_multi(f: &MPoly, r: f64, per_circle: usize) -> f64 {
    let n = f.nvars();
    if n == 0 {
        return rat_to_f64(&f.constant_term().norm_sqr()).sqrt();
    }
    let mut max = 0.0f64;
    let mut idx = vec![0usize; n];
    loop {
        let point: Vec<num_complex::Complex64> = idx
            .iter()
            .map(|&k| {
                let theta = 2.0 * std::f64::consts::PI * k as f64 / per_circle as f64 + 0.05;
                num_complex::Complex64::from_polar(r, theta)
            })
            .collect();
        let mut acc = num_complex::Complex64::new(0.0, 0.0);
        for (e, c) in f.terms() {
            let (re, im) = c.to_f64();
            let mut t = num_complex::Complex64::new(re, im);
            for (i, &k) in e.0.iter().enumerate() {
                for _ in 0..k {
                    t *= point[i];
                }
            }
            acc += t;
        }
        max = max.max(acc.norm());
        // advance the torus grid counter
        let mut pos = 0;
        loop {
            if pos == n {
                return max;
            }
            idx[pos] += 1;
            if idx[pos] < per_circle {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

/// Growth constants for stable polynomials with arbitrary minimal
/// support, by the recursion over `m = n + max{|alpha| : alpha minimal}`:
/// the base case is the unit-constant bound, a univariate monomial factor
/// is absorbed through `r <= e^{r^2}`, and otherwise the polynomial is
/// split into its section at `z_j = 0` and its `z_j`-derivative with
/// `C = max(C_1, C_2 + 1)`, `B = 2 max(B_1, B_2)`.
pub fn minimal_support_growth_constants(f: &MPoly) -> Result<GrowthConstants> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut notes = Vec::new();
    let (b, c) = msgc_recurse(f, 0, &mut notes)?;
    let (s1, s2) = order_sums(f);
    let a_sq = Rat::from(BigInt::from(3)) * &s1 * &s1 + Rat::from(BigInt::from(2)) * &s2;
    Ok(GrowthConstants { a_sq, b, c, notes })
}

fn msgc_recurse(f: &MPoly, depth: usize, notes: &mut Vec<String>) -> Result<(f64, f64)> {
    if depth > 64 {
        return Err(Error::Internal("minimal-support recursion too deep".into()));
    }
    if f.is_zero() {
        return Ok((0.0, 0.0));
    }
    let n = f.nvars();
    let (minimal, _, _) = f.support_extrema()?;
    let k = minimal.iter().map(|a| a.total()).max().unwrap_or(0);
    if k == 0 {
        // f(0) != 0: normalize to unit constant term.
        let c0 = f.constant_term();
        let g = f.scalar_mul(&c0.inv());
        let gc = growth_constants_unchecked(&g);
        let scale = rat_to_f64(&c0.abs_bound()).max(f64::MIN_POSITIVE);
        notes.push(format!("base case at depth {}: |f(0)| bound {}", depth, scale));
        return Ok((scale * gc.b, gc.c));
    }
    if n == 1 {
        // factor out z^s and absorb r^s <= e^{s r^2}
        let s = f.terms().map(|(e, _)| e.0[0]).min().unwrap();
        let mut g = MPoly::zero(1);
        for (e, coeff) in f.terms() {
            g.add_term(ExpVec(vec![e.0[0] - s]), coeff.clone());
        }
        let (b, c) = msgc_recurse(&g, depth + 1, notes)?;
        notes.push(format!("factored z^{} at depth {}", s, depth));
        return Ok((b, c + s as f64));
    }
    // choose the graded-lex smallest among the largest minimal elements,
    // then its lowest positive coordinate
    let alpha = minimal
        .iter()
        .filter(|a| a.total() == k)
        .min_by(|a, b| a.cmp(b))
        .unwrap();
    let j = alpha.0.iter().position(|&e| e > 0).expect("|alpha| > 0");
    let at_zero = f.specialize(j, &Scalar::zero())?;
    let deriv = f.partial_derivative(j)?;
    let (b1, c1) = if at_zero.is_zero() {
        (0.0, 0.0)
    } else {
        msgc_recurse(&at_zero, depth + 1, notes)?
    };
    let (b2, c2) = msgc_recurse(&deriv, depth + 1, notes)?;
    notes.push(format!("split on variable {} at depth {}", j + 1, depth));
    Ok((2.0 * b1.max(b2), c1.max(c2 + 1.0)))
}

/// Exact decimal bounds for Euler's number used by the factorial
/// inequality verification.
fn e_bounds() -> (Rat, Rat) {
    let num: BigInt = "2718281828459045235360287471".parse().unwrap();
    let den: BigInt = BigInt::from(10u64).pow(27);
    let lo = Rat::new(num.clone(), den.clone());
    let hi = Rat::new(num + BigInt::one(), den);
    (lo, hi)
}

/// The factorial sandwich `e^{-n} <= n!/n^n <= (e n + 1) e^{-n}`:
/// returns the float pair and verifies the inequalities with exact
/// rational bounds on `e`.
pub fn stirling_bounds(n: u32) -> (f64, f64) {
    let en = std::f64::consts::E.powi(-(n as i32));
    (en, (std::f64::consts::E * n as f64 + 1.0) * en)
}

pub fn stirling_verify(n: u32) -> bool {
    if n == 0 {
        return true; // 1 <= 1 <= 1 by convention
    }
    let (e_lo, e_hi) = e_bounds();
    let fact = factorial_rat(n);
    let npow = pow_u64(&Rat::from(BigInt::from(n)), n as u64);
    // lower: n! e_lo^n >= n^n implies n!/n^n >= e_lo^{-n} >= e^{-n}
    let lower_ok = &fact * pow_rat(&e_lo, n) >= npow;
    // upper: n! e_hi^n <= (e_lo n + 1) n^n implies
    // n!/n^n <= (e_lo n + 1) e_hi^{-n} <= (e n + 1) e^{-n}
    let bound = (&e_lo * Rat::from(BigInt::from(n)) + Rat::one()) * &npow;
    let upper_ok = &fact * pow_rat(&e_hi, n) <= bound;
    lower_ok && upper_ok
}
