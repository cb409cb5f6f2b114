//! Dense univariate polynomials over Gaussian rationals.
//!
//! Coefficients are stored lowest degree first; the leading coefficient is
//! nonzero unless the polynomial is zero (empty coefficient vector).

use crate::scalar::{Rat, Scalar};
use num_traits::{Signed, Zero};
use std::fmt;

#[derive(Clone, PartialEq, Eq)]
pub struct UPoly {
    coeffs: Vec<Scalar>,
}

impl UPoly {
    pub fn zero() -> Self {
        UPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: Scalar) -> Self {
        UPoly::from_coeffs(vec![c])
    }

    pub fn one() -> Self {
        UPoly::constant(Scalar::one())
    }

    /// The monomial `t`.
    pub fn t() -> Self {
        UPoly::from_coeffs(vec![Scalar::zero(), Scalar::one()])
    }

    /// Build from coefficients, lowest degree first; trailing zeros trimmed.
    pub fn from_coeffs(mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.last().is_some_and(Scalar::is_zero) {
            coeffs.pop();
        }
        UPoly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        UPoly::from_coeffs(coeffs.iter().map(|&c| Scalar::from_int(c)).collect())
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.is_zero() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading(&self) -> Option<&Scalar> {
        self.coeffs.last()
    }

    pub fn coeff(&self, k: usize) -> Scalar {
        self.coeffs.get(k).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn add(&self, other: &UPoly) -> UPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            out.push(&self.coeff(k) + &other.coeff(k));
        }
        UPoly::from_coeffs(out)
    }

    pub fn sub(&self, other: &UPoly) -> UPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            out.push(&self.coeff(k) - &other.coeff(k));
        }
        UPoly::from_coeffs(out)
    }

    pub fn neg(&self) -> UPoly {
        UPoly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn mul(&self, other: &UPoly) -> UPoly {
        if self.is_zero() || other.is_zero() {
            return UPoly::zero();
        }
        let mut out = vec![Scalar::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += &(a * b);
            }
        }
        UPoly::from_coeffs(out)
    }

    pub fn scalar_mul(&self, c: &Scalar) -> UPoly {
        if c.is_zero() {
            return UPoly::zero();
        }
        UPoly { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    pub fn pow(&self, e: u32) -> UPoly {
        let mut acc = UPoly::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn derivative(&self) -> UPoly {
        if self.coeffs.len() <= 1 {
            return UPoly::zero();
        }
        let out = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * &Scalar::from_int(k as i64))
            .collect();
        UPoly::from_coeffs(out)
    }

    pub fn evaluate(&self, x: &Scalar) -> Scalar {
        let mut acc = Scalar::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    /// Exact quotient and remainder; the divisor must be nonzero.
    pub fn div_rem(&self, divisor: &UPoly) -> (UPoly, UPoly) {
        assert!(!divisor.is_zero(), "division by zero polynomial");
        let dd = divisor.degree().unwrap();
        let lead_inv = divisor.leading().unwrap().inv();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (UPoly::zero(), self.clone());
        }
        let qd = rem.len() - 1 - dd;
        let mut quot = vec![Scalar::zero(); qd + 1];
        for k in (0..=qd).rev() {
            let c = &rem[k + dd] * &lead_inv;
            if c.is_zero() {
                continue;
            }
            for j in 0..=dd {
                let t = &c * &divisor.coeffs[j];
                rem[k + j] = &rem[k + j] - &t;
            }
            quot[k] = c;
        }
        (UPoly::from_coeffs(quot), UPoly::from_coeffs(rem))
    }

    /// Monic gcd (leading coefficient 1), or zero if both inputs are zero.
    /// Remainders are re-normalized to monic every step to keep the
    /// coefficient sizes in check.
    pub fn gcd(&self, other: &UPoly) -> UPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        if let Some(lead) = b.leading() {
            let inv = lead.inv();
            b = b.scalar_mul(&inv);
        }
        while !b.is_zero() {
            let (_, mut r) = a.div_rem(&b);
            if let Some(lead) = r.leading() {
                let inv = lead.inv();
                r = r.scalar_mul(&inv);
            }
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            let inv = a.leading().unwrap().inv();
            a.scalar_mul(&inv)
        }
    }

    /// Product of the distinct irreducible factors (the radical).
    pub fn squarefree_part(&self) -> UPoly {
        if self.is_zero() || self.is_constant() {
            return self.clone();
        }
        let g = self.gcd(&self.derivative());
        let (q, r) = self.div_rem(&g);
        debug_assert!(r.is_zero());
        q
    }

    /// Yun's square-free decomposition: returns `a_1, a_2, ...` with
    /// `self = lc * prod a_k^k` and the `a_k` monic, square-free, coprime.
    pub fn squarefree_decomposition(&self) -> Vec<UPoly> {
        if self.is_zero() || self.is_constant() {
            return Vec::new();
        }
        let fp = self.derivative();
        let g = self.gcd(&fp);
        if g.is_constant() {
            let inv = self.leading().unwrap().inv();
            return vec![self.scalar_mul(&inv)];
        }
        let (mut c, r) = self.div_rem(&g);
        debug_assert!(r.is_zero());
        let (fp_over_g, r2) = fp.div_rem(&g);
        debug_assert!(r2.is_zero());
        let mut d = fp_over_g.sub(&c.derivative());
        let mut out = Vec::new();
        loop {
            let a = c.gcd(&d);
            let a = if a.is_zero() { UPoly::one() } else { a };
            out.push(a.clone());
            let (c2, r3) = c.div_rem(&a);
            debug_assert!(r3.is_zero());
            c = c2;
            if c.is_constant() {
                break;
            }
            let (d2, r4) = d.div_rem(&a);
            debug_assert!(r4.is_zero());
            d = d2.sub(&c.derivative());
        }
        out
    }

    pub fn is_real(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_real)
    }

    /// Split into real-coefficient parts: `p = P + i*Q`.
    pub fn re_im_parts(&self) -> (UPoly, UPoly) {
        let re = self.coeffs.iter().map(|c| Scalar::from_rat(c.re.clone())).collect();
        let im = self.coeffs.iter().map(|c| Scalar::from_rat(c.im.clone())).collect();
        (UPoly::from_coeffs(re), UPoly::from_coeffs(im))
    }

    /// Evaluate a real polynomial at a rational point.
    pub fn eval_real(&self, x: &Rat) -> Rat {
        debug_assert!(self.is_real());
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + &c.re;
        }
        acc
    }

    /// Sign of a real polynomial at a rational point: -1, 0 or 1.
    pub fn sign_at(&self, x: &Rat) -> i32 {
        let v = self.eval_real(x);
        if v.is_zero() {
            0
        } else if v.is_positive() {
            1
        } else {
            -1
        }
    }

    /// Sign at +infinity (real polynomial).
    pub fn sign_at_pos_inf(&self) -> i32 {
        match self.leading() {
            None => 0,
            Some(c) => {
                if c.re.is_positive() {
                    1
                } else if c.re.is_negative() {
                    -1
                } else {
                    0
                }
            }
        }
    }

    /// Sign at -infinity (real polynomial).
    pub fn sign_at_neg_inf(&self) -> i32 {
        let s = self.sign_at_pos_inf();
        if self.degree().is_some_and(|d| d % 2 == 1) {
            -s
        } else {
            s
        }
    }

    /// `1 + max |c_k| / |lead|` bounds the modulus of every root.
    /// For complex coefficients the rational over-approximation
    /// `|re| + |im|` is used in the numerator, and `|lead|` is bounded
    /// below through `norm_sqr`, so the result is a valid upper bound.
    pub fn root_bound(&self) -> Rat {
        let d = self.degree().unwrap_or(0);
        if d == 0 {
            return Rat::from_integer(1.into());
        }
        let lead = self.leading().unwrap();
        let lead_norm = lead.norm_sqr();
        let mut best = Rat::zero();
        for c in &self.coeffs[..d] {
            // |c| / |lead| <= abs_bound(c) / |lead|, and |lead| >=
            // norm_sqr(lead) / abs_bound(lead).
            let num = c.abs_bound() * lead.abs_bound();
            let q = num / lead_norm.clone();
            if q > best {
                best = q;
            }
        }
        best + Rat::from_integer(1.into())
    }

    /// Multiply through by the conjugate content so that real and complex
    /// parts separate: returns coefficientwise conjugate.
    pub fn conj(&self) -> UPoly {
        UPoly { coeffs: self.coeffs.iter().map(Scalar::conj).collect() }
    }

    /// Compose with a linear map: `p(a*t + b)`.
    pub fn compose_linear(&self, a: &Scalar, b: &Scalar) -> UPoly {
        let lin = UPoly::from_coeffs(vec![b.clone(), a.clone()]);
        let mut acc = UPoly::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(&lin).add(&UPoly::constant(c.clone()));
        }
        acc
    }
}

impl fmt::Debug for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| match k {
                0 => c.to_canonical_string(),
                1 => format!("{}*t", c.to_canonical_string()),
                _ => format!("{}*t^{}", c.to_canonical_string(), k),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}
