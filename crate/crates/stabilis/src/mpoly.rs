//! Sparse multivariate polynomials over Gaussian rationals.
//!
//! Terms are kept in a `BTreeMap` keyed by exponent vector in graded-lex
//! order, so iteration and serialization are deterministic. No zero
//! coefficient is ever stored.

use crate::error::{Error, Result};
use crate::multiindex::{support_extrema, ExpVec};
use crate::scalar::{Rat, Scalar};
use crate::upoly::UPoly;
use num_traits::Signed;
use std::collections::BTreeMap;
use std::fmt;

#[derive(Clone, PartialEq, Eq)]
pub struct MPoly {
    nvars: usize,
    terms: BTreeMap<ExpVec, Scalar>,
}

impl MPoly {
    pub fn zero(nvars: usize) -> Self {
        MPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Scalar) -> Self {
        let mut p = MPoly::zero(nvars);
        p.add_term(ExpVec::zeros(nvars), c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        MPoly::constant(nvars, Scalar::one())
    }

    /// The variable `z_i` (0-based index).
    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars);
        let mut p = MPoly::zero(nvars);
        p.add_term(ExpVec::unit(nvars, i), Scalar::one());
        p
    }

    pub fn monomial(nvars: usize, e: ExpVec, c: Scalar) -> Self {
        assert_eq!(e.len(), nvars);
        let mut p = MPoly::zero(nvars);
        p.add_term(e, c);
        p
    }

    pub fn from_terms(nvars: usize, terms: Vec<(ExpVec, Scalar)>) -> Self {
        let mut p = MPoly::zero(nvars);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ExpVec, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &ExpVec) -> Scalar {
        self.terms.get(e).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn constant_term(&self) -> Scalar {
        self.coeff(&ExpVec::zeros(self.nvars))
    }

    pub fn support(&self) -> Vec<ExpVec> {
        self.terms.keys().cloned().collect()
    }

    /// Accumulate a term, dropping the entry if the sum cancels.
    pub fn add_term(&mut self, e: ExpVec, c: Scalar) {
        debug_assert_eq!(e.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_nvars(&self, other: &MPoly) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::DimensionMismatch(self.nvars, other.nvars));
        }
        Ok(())
    }

    pub fn add(&self, other: &MPoly) -> Result<MPoly> {
        self.check_nvars(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &MPoly) -> Result<MPoly> {
        self.check_nvars(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c);
        }
        Ok(out)
    }

    pub fn neg(&self) -> MPoly {
        let mut out = MPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            out.terms.insert(e.clone(), -c);
        }
        out
    }

    pub fn mul(&self, other: &MPoly) -> Result<MPoly> {
        self.check_nvars(other)?;
        let mut out = MPoly::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                out.add_term(ea.add(eb), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scalar_mul(&self, c: &Scalar) -> MPoly {
        if c.is_zero() {
            return MPoly::zero(self.nvars);
        }
        let mut out = MPoly::zero(self.nvars);
        for (e, a) in &self.terms {
            out.terms.insert(e.clone(), a * c);
        }
        out
    }

    pub fn pow(&self, e: u32) -> MPoly {
        let mut acc = MPoly::one(self.nvars);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).unwrap();
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base).unwrap();
            }
        }
        acc
    }

    /// Formal partial derivative with respect to variable `j`.
    pub fn partial_derivative(&self, j: usize) -> Result<MPoly> {
        if j >= self.nvars {
            return Err(Error::BadVariableIndex(j, self.nvars));
        }
        let mut out = MPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            let k = e.0[j];
            if k > 0 {
                let mut e2 = e.clone();
                e2.0[j] -= 1;
                out.add_term(e2, c * &Scalar::from_int(k as i64));
            }
        }
        Ok(out)
    }

    pub fn evaluate(&self, point: &[Scalar]) -> Result<Scalar> {
        if point.len() != self.nvars {
            return Err(Error::DimensionMismatch(point.len(), self.nvars));
        }
        let mut acc = Scalar::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (i, &k) in e.0.iter().enumerate() {
                if k > 0 {
                    t *= &point[i].pow(k);
                }
            }
            acc += &t;
        }
        Ok(acc)
    }

    /// Substitute `z_i := polys[i]` for every variable; the replacement
    /// polynomials share an arbitrary common variable count.
    pub fn compose(&self, polys: &[MPoly]) -> Result<MPoly> {
        if polys.len() != self.nvars {
            return Err(Error::DimensionMismatch(polys.len(), self.nvars));
        }
        let m = if polys.is_empty() { 0 } else { polys[0].nvars };
        let mut acc = MPoly::zero(m);
        for (e, c) in &self.terms {
            let mut t = MPoly::constant(m, c.clone());
            for (i, &k) in e.0.iter().enumerate() {
                if k > 0 {
                    t = t.mul(&polys[i].pow(k))?;
                }
            }
            acc = acc.add(&t)?;
        }
        Ok(acc)
    }

    /// Exact restriction to the parametrized line `z = lambda * t + alpha`,
    /// as a univariate polynomial in `t`. `lambda` entries must be real and
    /// nonnegative; `alpha` entries are arbitrary scalars.
    pub fn restrict_line(&self, lambda: &[Scalar], alpha: &[Scalar]) -> Result<UPoly> {
        if lambda.len() != self.nvars || alpha.len() != self.nvars {
            return Err(Error::DimensionMismatch(lambda.len(), self.nvars));
        }
        for l in lambda {
            if !l.is_real() {
                return Err(Error::NotReal(l.to_canonical_string()));
            }
            if l.re.is_negative() {
                return Err(Error::NotPositive(l.to_canonical_string()));
            }
        }
        let mut acc = UPoly::zero();
        for (e, c) in &self.terms {
            let mut t = UPoly::constant(c.clone());
            for (i, &k) in e.0.iter().enumerate() {
                if k > 0 {
                    let lin = UPoly::from_coeffs(vec![alpha[i].clone(), lambda[i].clone()]);
                    t = t.mul(&lin.pow(k));
                }
            }
            acc = acc.add(&t);
        }
        Ok(acc)
    }

    /// Restriction `t -> f(lambda*t + alpha)` with strictly positive real
    /// `lambda`, the form used for stability testing along real lines.
    pub fn restrict_to_line(&self, lambda: &[Rat], alpha: &[Rat]) -> Result<UPoly> {
        for l in lambda {
            if !l.is_positive() {
                return Err(Error::NotPositive(l.to_string()));
            }
        }
        let ls: Vec<Scalar> = lambda.iter().cloned().map(Scalar::from_rat).collect();
        let als: Vec<Scalar> = alpha.iter().cloned().map(Scalar::from_rat).collect();
        self.restrict_line(&ls, &als)
    }

    /// `z -> z + shift` exactly.
    pub fn translate(&self, shift: &[Scalar]) -> Result<MPoly> {
        if shift.len() != self.nvars {
            return Err(Error::DimensionMismatch(shift.len(), self.nvars));
        }
        let reps: Vec<MPoly> = (0..self.nvars)
            .map(|i| {
                MPoly::var(self.nvars, i)
                    .add(&MPoly::constant(self.nvars, shift[i].clone()))
                    .unwrap()
            })
            .collect();
        self.compose(&reps)
    }

    /// Degree in variable `i`; `None` for the zero polynomial.
    pub fn deg_var(&self, i: usize) -> Option<u32> {
        if self.is_zero() {
            return None;
        }
        self.terms.keys().map(|e| e.0[i]).max()
    }

    /// Componentwise degree vector; `None` for the zero polynomial.
    pub fn deg_vector(&self) -> Option<ExpVec> {
        if self.is_zero() {
            return None;
        }
        let mut d = vec![0u32; self.nvars];
        for e in self.terms.keys() {
            for (i, &k) in e.0.iter().enumerate() {
                d[i] = d[i].max(k);
            }
        }
        Some(ExpVec(d))
    }

    pub fn total_degree(&self) -> Option<u64> {
        self.terms.keys().map(|e| e.total()).max()
    }

    /// Substitute the real value `mu` for variable `i`, dropping the
    /// variable from the polynomial.
    pub fn specialize(&self, i: usize, mu: &Scalar) -> Result<MPoly> {
        if i >= self.nvars {
            return Err(Error::BadVariableIndex(i, self.nvars));
        }
        if !mu.is_real() {
            return Err(Error::NotReal(mu.to_canonical_string()));
        }
        let mut out = MPoly::zero(self.nvars - 1);
        for (e, c) in &self.terms {
            let mut e2 = e.0.clone();
            let k = e2.remove(i);
            out.add_term(ExpVec(e2), c * &mu.pow(k));
        }
        Ok(out)
    }

    /// Scale variable `i` by a positive rational: `z_i -> lambda * z_i`.
    pub fn scale_var(&self, i: usize, lambda: &Rat) -> Result<MPoly> {
        if i >= self.nvars {
            return Err(Error::BadVariableIndex(i, self.nvars));
        }
        if !lambda.is_positive() {
            return Err(Error::NotPositive(lambda.to_string()));
        }
        let ls = Scalar::from_rat(lambda.clone());
        let mut out = MPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c * &ls.pow(e.0[i]));
        }
        Ok(out)
    }

    /// `z_i^{d_i} * f(..., -z_i^{-1}, ...)` where `d_i` is the degree in
    /// variable `i`. Rejects the zero polynomial, whose degree is undefined.
    pub fn invert_var(&self, i: usize) -> Result<MPoly> {
        if i >= self.nvars {
            return Err(Error::BadVariableIndex(i, self.nvars));
        }
        let d = self.deg_var(i).ok_or(Error::ZeroPolynomial)?;
        let mut out = MPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            let k = e.0[i];
            let mut e2 = e.clone();
            e2.0[i] = d - k;
            let sign = if k % 2 == 0 { c.clone() } else { -c };
            out.add_term(e2, sign);
        }
        Ok(out)
    }

    /// Identify variables `i` and `j`: substitute the larger-indexed one by
    /// the other and drop it, shrinking to `nvars - 1` variables.
    pub fn identify_vars(&self, i: usize, j: usize) -> Result<MPoly> {
        if i >= self.nvars || j >= self.nvars || i == j {
            return Err(Error::BadVariableIndex(i.max(j), self.nvars));
        }
        let (keep, drop) = (i.min(j), i.max(j));
        let mut out = MPoly::zero(self.nvars - 1);
        for (e, c) in &self.terms {
            let mut e2 = e.0.clone();
            let k = e2.remove(drop);
            e2[keep] += k;
            out.add_term(ExpVec(e2), c.clone());
        }
        Ok(out)
    }

    /// Minimal and maximal antichains of the support, and whether the
    /// maximal one is a singleton. Errors on the zero polynomial.
    pub fn support_extrema(&self) -> Result<(Vec<ExpVec>, Vec<ExpVec>, bool)> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        Ok(support_extrema(&self.support()))
    }

    pub fn is_real(&self) -> bool {
        self.terms.values().all(|c| c.is_real())
    }

    /// First monomial (graded-lex) whose coefficient is not real.
    pub fn first_non_real(&self) -> Option<(ExpVec, Scalar)> {
        self.terms
            .iter()
            .find(|(_, c)| !c.is_real())
            .map(|(e, c)| (e.clone(), c.clone()))
    }

    /// Split into real and imaginary coefficient parts: `f = P + i*Q`.
    pub fn re_im_parts(&self) -> (MPoly, MPoly) {
        let mut re = MPoly::zero(self.nvars);
        let mut im = MPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            re.add_term(e.clone(), Scalar::from_rat(c.re.clone()));
            im.add_term(e.clone(), Scalar::from_rat(c.im.clone()));
        }
        (re, im)
    }

    /// Coefficientwise complex conjugate.
    pub fn conj(&self) -> MPoly {
        let mut out = MPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            out.terms.insert(e.clone(), c.conj());
        }
        out
    }

    pub fn is_multi_affine(&self) -> bool {
        self.terms.keys().all(|e| e.is_multi_affine())
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.is_zero())
    }

    /// Leading (graded-lex largest) term.
    pub fn leading_term(&self) -> Option<(&ExpVec, &Scalar)> {
        self.terms.iter().next_back()
    }

    /// Indices of variables that actually occur.
    pub fn used_vars(&self) -> Vec<usize> {
        let mut used = vec![false; self.nvars];
        for e in self.terms.keys() {
            for (i, &k) in e.0.iter().enumerate() {
                if k > 0 {
                    used[i] = true;
                }
            }
        }
        used.iter()
            .enumerate()
            .filter_map(|(i, &u)| if u { Some(i) } else { None })
            .collect()
    }

    /// Re-embed into a polynomial ring with `total` variables, mapping
    /// variable `i` to `offset + i`.
    pub fn embed(&self, total: usize, offset: usize) -> MPoly {
        assert!(offset + self.nvars <= total);
        let mut out = MPoly::zero(total);
        for (e, c) in &self.terms {
            let mut v = vec![0u32; total];
            v[offset..offset + self.nvars].copy_from_slice(&e.0);
            out.terms.insert(ExpVec(v), c.clone());
        }
        out
    }

    /// Keep only variables in `keep` (order preserved); every dropped
    /// variable must have exponent zero throughout.
    pub fn project_vars(&self, keep: &[usize]) -> Result<MPoly> {
        let mut out = MPoly::zero(keep.len());
        for (e, c) in &self.terms {
            let mut v = Vec::with_capacity(keep.len());
            let mut seen = vec![false; self.nvars];
            for &i in keep {
                v.push(e.0[i]);
                seen[i] = true;
            }
            for (i, &k) in e.0.iter().enumerate() {
                if !seen[i] && k != 0 {
                    return Err(Error::BadVariableIndex(i, self.nvars));
                }
            }
            out.add_term(ExpVec(v), c.clone());
        }
        Ok(out)
    }

    pub fn to_upoly(&self) -> Result<UPoly> {
        if self.nvars != 1 {
            return Err(Error::DimensionMismatch(self.nvars, 1));
        }
        let deg = self.deg_var(0).unwrap_or(0) as usize;
        let mut coeffs = vec![Scalar::zero(); deg + 1];
        for (e, c) in &self.terms {
            coeffs[e.0[0] as usize] = c.clone();
        }
        Ok(UPoly::from_coeffs(coeffs))
    }

    pub fn from_upoly(p: &UPoly) -> MPoly {
        let mut out = MPoly::zero(1);
        for (k, c) in p.coeffs().iter().enumerate() {
            out.add_term(ExpVec(vec![k as u32]), c.clone());
        }
        out
    }
}

/// Variable naming scheme for display and parsing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarNames(pub Vec<String>);

impl VarNames {
    /// `z1..zn`.
    pub fn z(n: usize) -> Self {
        VarNames((1..=n).map(|i| format!("z{}", i)).collect())
    }

    /// `z1..zn, w1..wn` — the flat layout of operator symbols.
    pub fn zw(n: usize) -> Self {
        let mut v: Vec<String> = (1..=n).map(|i| format!("z{}", i)).collect();
        v.extend((1..=n).map(|i| format!("w{}", i)));
        VarNames(v)
    }

    /// Block names `z<i>_<j>` for polarized variables.
    pub fn blocks(prefix: &str, sizes: &[u32]) -> Self {
        let mut v = Vec::new();
        for (i, &k) in sizes.iter().enumerate() {
            for j in 1..=k {
                v.push(format!("{}{}_{}", prefix, i + 1, j));
            }
        }
        VarNames(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.0.iter().position(|v| v == name)
    }
}

impl MPoly {
    /// Canonical text form: graded-lex order, highest terms first,
    /// canonical scalar coefficients. Round-trips through the parser.
    pub fn to_canonical_string(&self, names: &VarNames) -> String {
        assert_eq!(names.len(), self.nvars);
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (idx, (e, c)) in self.terms.iter().rev().enumerate() {
            let mono: Vec<String> = e
                .0
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| {
                    if k == 1 {
                        names.0[i].clone()
                    } else {
                        format!("{}^{}", names.0[i], k)
                    }
                })
                .collect();
            let mono_s = mono.join("*");
            // Real coefficients fold their sign into the join; complex ones
            // are parenthesized by Scalar and always join with '+'.
            let (joiner, coeff) = if c.is_real() && c.re.is_negative() && idx > 0 {
                (" - ", -c)
            } else if idx > 0 {
                (" + ", c.clone())
            } else {
                ("", c.clone())
            };
            out.push_str(joiner);
            let body = if mono_s.is_empty() {
                coeff.to_canonical_string()
            } else if coeff.is_one() {
                mono_s
            } else if (-&coeff).is_one() {
                format!("-{}", mono_s)
            } else {
                format!("{}*{}", coeff.to_canonical_string(), mono_s)
            };
            out.push_str(&body);
        }
        out
    }
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_canonical_string(&VarNames::z(self.nvars)))
    }
}
