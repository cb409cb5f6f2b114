//! Sturm sequences, exact real-root counting and isolation.
//!
//! All decisions are made in rational arithmetic. Counting uses the
//! convention that sign changes are evaluated with zeros skipped, which
//! counts distinct real roots in half-open intervals `(a, b]`.

use crate::error::{Error, Result};
use crate::scalar::Rat;
use crate::upoly::UPoly;
use num_bigint::BigInt;
use std::cmp::Ordering;

/// Interval endpoint for root counting.
#[derive(Clone, Debug, PartialEq)]
pub enum Bound {
    NegInf,
    PosInf,
    At(Rat),
}

/// Sturm chain of a nonzero real polynomial.
pub struct SturmChain {
    chain: Vec<UPoly>,
}

impl SturmChain {
    pub fn new(p: &UPoly) -> Result<SturmChain> {
        if p.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        debug_assert!(p.is_real());
        let mut chain = vec![primitive_part(p), primitive_part(&p.derivative())];
        if chain[1].is_zero() {
            chain.pop();
        }
        while chain.last().is_some_and(|q| !q.is_constant()) {
            let n = chain.len();
            let (_, r) = chain[n - 2].div_rem(&chain[n - 1]);
            if r.is_zero() {
                break;
            }
            chain.push(primitive_part(&r.neg()));
        }
        Ok(SturmChain { chain })
    }

    fn sign_changes_at(&self, b: &Bound) -> usize {
        let signs: Vec<i32> = self
            .chain
            .iter()
            .map(|q| match b {
                Bound::NegInf => q.sign_at_neg_inf(),
                Bound::PosInf => q.sign_at_pos_inf(),
                Bound::At(x) => q.sign_at(x),
            })
            .filter(|&s| s != 0)
            .collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    }

    /// Number of distinct real roots in `(lo, hi]`.
    pub fn count(&self, lo: &Bound, hi: &Bound) -> usize {
        let a = self.sign_changes_at(lo);
        let b = self.sign_changes_at(hi);
        a.saturating_sub(b)
    }

    pub fn count_all(&self) -> usize {
        self.count(&Bound::NegInf, &Bound::PosInf)
    }
}

/// Exact count of distinct real roots of `p` in the half-open interval
/// `(lo, hi]`. Multiple roots are counted once.
pub fn sturm_count(p: &UPoly, lo: &Bound, hi: &Bound) -> Result<usize> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !p.is_real() {
        return Err(Error::NotReal("polynomial has complex coefficients".into()));
    }
    let q = p.squarefree_part();
    Ok(SturmChain::new(&q)?.count(lo, hi))
}

/// True when every complex root of the real polynomial `p` is real.
/// Nonzero constants are vacuously real-rooted.
pub fn is_real_rooted(p: &UPoly) -> Result<bool> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !p.is_real() {
        return Err(Error::NotReal("polynomial has complex coefficients".into()));
    }
    if p.is_constant() {
        return Ok(true);
    }
    let q = p.squarefree_part();
    let d = q.degree().unwrap();
    Ok(SturmChain::new(&q)?.count_all() == d)
}

/// Location of one distinct real root: either an exact rational or an open
/// isolating interval with rational endpoints that are not roots.
#[derive(Clone, Debug)]
pub enum RootLoc {
    Exact(Rat),
    Interval(Rat, Rat),
}

impl RootLoc {
    pub fn lo(&self) -> Rat {
        match self {
            RootLoc::Exact(x) => x.clone(),
            RootLoc::Interval(a, _) => a.clone(),
        }
    }

    pub fn hi(&self) -> Rat {
        match self {
            RootLoc::Exact(x) => x.clone(),
            RootLoc::Interval(_, b) => b.clone(),
        }
    }

    pub fn midpoint(&self) -> Rat {
        (self.lo() + self.hi()) / Rat::from_integer(2.into())
    }
}

/// An isolated real root of a square-free real polynomial, refinable on
/// demand and exactly comparable against roots of other polynomials.
///
/// Invariant: for the `Interval(a, b)` form, neither endpoint is a root of
/// `poly`, and the open interval contains exactly one root.
#[derive(Clone, Debug)]
pub struct IsolatedRoot {
    pub poly: UPoly,
    pub loc: RootLoc,
}

impl IsolatedRoot {
    /// Halve the isolating interval (or detect an exact rational root at
    /// the midpoint).
    pub fn refine(&mut self) {
        let (a, b) = match &self.loc {
            RootLoc::Exact(_) => return,
            RootLoc::Interval(a, b) => (a.clone(), b.clone()),
        };
        let m = (&a + &b) / Rat::from_integer(2.into());
        if self.poly.sign_at(&m) == 0 {
            self.loc = RootLoc::Exact(m);
            return;
        }
        let chain = SturmChain::new(&self.poly).expect("nonzero");
        if chain.count(&Bound::At(a.clone()), &Bound::At(m.clone())) == 1 {
            self.loc = RootLoc::Interval(a, m);
        } else {
            self.loc = RootLoc::Interval(m, b);
        }
    }

    pub fn width(&self) -> Rat {
        self.hi() - self.lo()
    }

    pub fn lo(&self) -> Rat {
        self.loc.lo()
    }

    pub fn hi(&self) -> Rat {
        self.loc.hi()
    }

    pub fn refine_below(&mut self, width: &Rat) {
        while !matches!(self.loc, RootLoc::Exact(_)) && &self.width() > width {
            self.refine();
        }
    }

    /// Exact comparison with another isolated root, possibly of a different
    /// polynomial. Equality across polynomials is decided through the gcd.
    pub fn cmp_root(&mut self, other: &mut IsolatedRoot) -> Ordering {
        loop {
            match (self.loc.clone(), other.loc.clone()) {
                (RootLoc::Exact(a), RootLoc::Exact(b)) => return a.cmp(&b),
                (RootLoc::Exact(x), RootLoc::Interval(a, b)) => {
                    if x <= a {
                        return Ordering::Less;
                    }
                    if x >= b {
                        return Ordering::Greater;
                    }
                    if other.poly.sign_at(&x) == 0 {
                        return Ordering::Equal;
                    }
                    other.refine();
                }
                (RootLoc::Interval(a, b), RootLoc::Exact(x)) => {
                    if x <= a {
                        return Ordering::Greater;
                    }
                    if x >= b {
                        return Ordering::Less;
                    }
                    if self.poly.sign_at(&x) == 0 {
                        return Ordering::Equal;
                    }
                    self.refine();
                }
                (RootLoc::Interval(a1, b1), RootLoc::Interval(a2, b2)) => {
                    // Endpoints are non-roots, so touching closures decide.
                    if b1 <= a2 {
                        return Ordering::Less;
                    }
                    if b2 <= a1 {
                        return Ordering::Greater;
                    }
                    let g = self.poly.gcd(&other.poly);
                    if !g.is_constant() {
                        let lo = if a1 > a2 { a1 } else { a2 };
                        let hi = if b1 < b2 { b1 } else { b2 };
                        // g divides both polynomials, so it cannot vanish at
                        // hi; (lo, hi] counts the open overlap exactly.
                        let chain = SturmChain::new(&g).expect("nonzero");
                        if chain.count(&Bound::At(lo), &Bound::At(hi)) > 0 {
                            return Ordering::Equal;
                        }
                    }
                    self.refine();
                    other.refine();
                }
            }
        }
    }
}

/// Scale a real polynomial by a positive rational so the coefficients
/// become coprime integers; root sets and all signs are unchanged, and
/// chain coefficients stay small.
fn primitive_part(p: &UPoly) -> UPoly {
    use num_integer::Integer;
    use num_traits::{One, Zero as _};
    if p.is_zero() {
        return p.clone();
    }
    let mut den_lcm = BigInt::one();
    for c in p.coeffs() {
        den_lcm = den_lcm.lcm(c.re.denom());
    }
    let mut num_gcd = BigInt::ZERO;
    for c in p.coeffs() {
        let scaled = c.re.numer() * (&den_lcm / c.re.denom());
        num_gcd = num_gcd.gcd(&scaled);
    }
    if num_gcd.is_zero() {
        return p.clone();
    }
    let factor = Rat::new(den_lcm, num_gcd);
    p.scalar_mul(&crate::scalar::Scalar::from_rat(factor))
}

/// Pick a subdivision point of `(a, b)` that is not a root of `q`.
/// Scans `deg(q) + 2` equally spaced candidates, so one must be free.
fn nonroot_split(q: &UPoly, a: &Rat, b: &Rat) -> Option<Rat> {
    let k = q.degree().unwrap_or(0) + 2;
    let w = b - a;
    for j in 1..=k {
        let frac = Rat::new(BigInt::from(j), BigInt::from(k + 1));
        let m = a + &w * frac;
        if q.sign_at(&m) != 0 {
            return Some(m);
        }
    }
    None
}

/// Isolate all distinct real roots of a nonzero real polynomial.
/// The polynomial is replaced by its square-free part internally; returned
/// roots are sorted increasingly.
pub fn isolate_real_roots(p: &UPoly) -> Result<Vec<IsolatedRoot>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let q = p.squarefree_part();
    if q.is_constant() {
        return Ok(Vec::new());
    }
    let chain = SturmChain::new(&q)?;
    let bound = q.root_bound();
    let mut out = Vec::new();
    // All real roots lie strictly inside (-bound, bound), and q does not
    // vanish at the endpoints.
    let mut stack = vec![(-bound.clone(), bound.clone())];
    while let Some((a, b)) = stack.pop() {
        let n = chain.count(&Bound::At(a.clone()), &Bound::At(b.clone()));
        if n == 0 {
            continue;
        }
        if n == 1 {
            out.push(IsolatedRoot { poly: q.clone(), loc: RootLoc::Interval(a, b) });
            continue;
        }
        match nonroot_split(&q, &a, &b) {
            Some(m) => {
                stack.push((a, m.clone()));
                stack.push((m, b));
            }
            None => {
                // All candidates were roots; record the rational root at a
                // plain midpoint and sandwich it with non-root cut points.
                // This cannot happen for k > deg candidates, so unreachable.
                unreachable!("more split candidates than roots");
            }
        }
    }
    out.sort_by(|x, y| {
        let mut x2 = x.clone();
        let mut y2 = y.clone();
        x2.cmp_root(&mut y2)
    });
    Ok(out)
}

/// Multiplicity of each distinct real root of a real polynomial, via the
/// square-free decomposition. Returns `(root, multiplicity)` sorted.
pub fn real_roots_with_multiplicity(p: &UPoly) -> Result<Vec<(IsolatedRoot, u32)>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let parts = p.squarefree_decomposition();
    let mut out: Vec<(IsolatedRoot, u32)> = Vec::new();
    for (k, part) in parts.iter().enumerate() {
        if part.is_constant() {
            continue;
        }
        for r in isolate_real_roots(part)? {
            out.push((r, (k + 1) as u32));
        }
    }
    out.sort_by(|a, b| {
        let mut x = a.0.clone();
        let mut y = b.0.clone();
        x.cmp_root(&mut y)
    });
    Ok(out)
}

/// Exact global sign classification of a real polynomial on the real line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum SignOnR {
    Zero,
    NonNegative,
    NonPositive,
    Indefinite,
}

/// Classify the sign of `w` over all of `R`. A nonzero polynomial has
/// constant sign exactly when every real root has even multiplicity;
/// the sign itself is read off one exact sample beyond every root.
pub fn sign_on_reals(w: &UPoly) -> SignOnR {
    if w.is_zero() {
        return SignOnR::Zero;
    }
    debug_assert!(w.is_real());
    let parts = w.squarefree_decomposition();
    // Product of the odd-multiplicity parts carries every sign change.
    let mut odd = UPoly::one();
    for (k, part) in parts.iter().enumerate() {
        if k % 2 == 0 {
            odd = odd.mul(part);
        }
    }
    if !odd.is_constant() {
        let chain = SturmChain::new(&odd).expect("nonzero");
        if chain.count_all() > 0 {
            return SignOnR::Indefinite;
        }
    }
    // Constant sign; sample beyond the root bound.
    let x = w.root_bound();
    match w.sign_at(&x) {
        s if s > 0 => SignOnR::NonNegative,
        s if s < 0 => SignOnR::NonPositive,
        _ => unreachable!("sample point is past every root"),
    }
}
