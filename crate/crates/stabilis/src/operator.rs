//! Linear operators on bounded-degree polynomial spaces, their symbols,
//! and stability-preserver certification.
//!
//! An operator is stored as its monomial-image table over all exponents
//! `alpha <= kappa`. The algebraic symbol `G_T = T[(z+w)^kappa]` lives in
//! `2n` variables (`z` block first, then `w`); the certifiers test the
//! symbol branches first and fall back to the low-rank degenerate branch,
//! reporting every piece of evidence gathered.

use crate::error::{Error, Result};
use crate::mpoly::{MPoly, VarNames};
use crate::multi::{
    check_stability, check_real_stability, proper_position_multi, verify_witness,
    MultiStatus, MultiVerdict, SamplingConfig, Witness,
};
use crate::multiindex::{
    falling_factorial, jensen_multiplier, multi_binom, ExpVec,
};
use crate::scalar::Scalar;
use num_traits::{One, Zero};
use serde::ser::SerializeMap;
use std::collections::BTreeMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum OperatorKind {
    Table,
    Diagonal,
    Differential,
    Composition,
}

/// A linear operator on the space of polynomials of degree at most
/// `kappa`, given by its images on every monomial `z^alpha`, `alpha <=
/// kappa`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearOperatorSpec {
    /// Variable count of the domain (the space indexed by `kappa`).
    nvars: usize,
    /// Variable count of the images; equals `nvars` except for polarized
    /// operators, whose domain and codomain blocks differ in size.
    image_vars: usize,
    kappa: ExpVec,
    images: BTreeMap<ExpVec, MPoly>,
    kind: OperatorKind,
}

impl LinearOperatorSpec {
    /// Build from an explicit table; missing entries map to zero.
    pub fn from_table(
        nvars: usize,
        kappa: ExpVec,
        entries: Vec<(ExpVec, MPoly)>,
    ) -> Result<Self> {
        Self::from_table_hetero(nvars, nvars, kappa, entries)
    }

    /// Table constructor for operators whose images live in a different
    /// variable space than the domain.
    pub fn from_table_hetero(
        nvars: usize,
        image_vars: usize,
        kappa: ExpVec,
        entries: Vec<(ExpVec, MPoly)>,
    ) -> Result<Self> {
        if kappa.len() != nvars {
            return Err(Error::DimensionMismatch(kappa.len(), nvars));
        }
        let mut images = BTreeMap::new();
        for alpha in ExpVec::iter_below(&kappa) {
            images.insert(alpha, MPoly::zero(image_vars));
        }
        for (alpha, img) in entries {
            if alpha.len() != nvars || !images.contains_key(&alpha) {
                return Err(Error::TableGap(format!("{:?}", alpha)));
            }
            if img.nvars() != image_vars {
                return Err(Error::DimensionMismatch(img.nvars(), image_vars));
            }
            images.insert(alpha, img);
        }
        Ok(LinearOperatorSpec { nvars, image_vars, kappa, images, kind: OperatorKind::Table })
    }

    pub fn identity(nvars: usize, kappa: ExpVec) -> Self {
        let mut images = BTreeMap::new();
        for alpha in ExpVec::iter_below(&kappa) {
            let img = MPoly::monomial(nvars, alpha.clone(), Scalar::one());
            images.insert(alpha, img);
        }
        LinearOperatorSpec { nvars, image_vars: nvars, kappa, images, kind: OperatorKind::Table }
    }

    /// Diagonal operator `z^alpha -> diag(alpha) * z^alpha`; missing
    /// entries annihilate the monomial.
    pub fn diagonal(nvars: usize, kappa: ExpVec, diag: &BTreeMap<ExpVec, Scalar>) -> Self {
        let mut images = BTreeMap::new();
        for alpha in ExpVec::iter_below(&kappa) {
            let c = diag.get(&alpha).cloned().unwrap_or_else(Scalar::zero);
            images.insert(alpha.clone(), MPoly::monomial(nvars, alpha, c));
        }
        LinearOperatorSpec { nvars, image_vars: nvars, kappa, images, kind: OperatorKind::Diagonal }
    }

    /// Finite-order differential operator `sum c z^a d^b` compiled to the
    /// monomial table: `z^alpha -> sum_b c * (alpha)_b * z^{a + alpha - b}`.
    pub fn differential(
        nvars: usize,
        kappa: ExpVec,
        terms: &[(Scalar, ExpVec, ExpVec)],
    ) -> Result<Self> {
        for (_, zexp, dexp) in terms {
            if zexp.len() != nvars || dexp.len() != nvars {
                return Err(Error::DimensionMismatch(zexp.len(), nvars));
            }
        }
        let mut images = BTreeMap::new();
        for alpha in ExpVec::iter_below(&kappa) {
            let mut img = MPoly::zero(nvars);
            for (c, zexp, dexp) in terms {
                let fall = falling_factorial(&alpha, dexp);
                if fall.is_zero() {
                    continue;
                }
                let e = zexp.add(&alpha.sub(dexp));
                img.add_term(e, c * &Scalar::from_rat(fall));
            }
            images.insert(alpha, img);
        }
        Ok(LinearOperatorSpec {
            nvars,
            image_vars: nvars,
            kappa,
            images,
            kind: OperatorKind::Differential,
        })
    }

    /// `outer . inner`: apply `inner` first. The images of `inner` must
    /// fit in the domain of `outer`.
    pub fn compose(outer: &Self, inner: &Self) -> Result<Self> {
        if outer.nvars != inner.image_vars {
            return Err(Error::DimensionMismatch(outer.nvars, inner.image_vars));
        }
        let mut images = BTreeMap::new();
        for (alpha, img) in &inner.images {
            images.insert(alpha.clone(), outer.apply(img)?);
        }
        Ok(LinearOperatorSpec {
            nvars: inner.nvars,
            image_vars: outer.image_vars,
            kappa: inner.kappa.clone(),
            images,
            kind: OperatorKind::Composition,
        })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn image_vars(&self) -> usize {
        self.image_vars
    }

    pub fn kappa(&self) -> &ExpVec {
        &self.kappa
    }

    pub fn kind(&self) -> OperatorKind {
        self.kind
    }

    pub fn image(&self, alpha: &ExpVec) -> Result<&MPoly> {
        self.images.get(alpha).ok_or_else(|| Error::TableGap(format!("{:?}", alpha)))
    }

    pub fn images(&self) -> impl Iterator<Item = (&ExpVec, &MPoly)> {
        self.images.iter()
    }

    pub fn is_real(&self) -> bool {
        self.images.values().all(MPoly::is_real)
    }

    /// Componentwise maximum degree over all images.
    pub fn codomain_degree(&self) -> ExpVec {
        let mut gamma = vec![0u32; self.image_vars];
        for img in self.images.values() {
            if let Some(d) = img.deg_vector() {
                for i in 0..self.image_vars {
                    gamma[i] = gamma[i].max(d.0[i]);
                }
            }
        }
        ExpVec(gamma)
    }

    /// Apply to a polynomial of degree at most `kappa`.
    pub fn apply(&self, f: &MPoly) -> Result<MPoly> {
        if f.nvars() != self.nvars {
            return Err(Error::DimensionMismatch(f.nvars(), self.nvars));
        }
        if let Some(d) = f.deg_vector() {
            if !d.leq(&self.kappa) {
                for i in 0..self.nvars {
                    if d.0[i] > self.kappa.0[i] {
                        return Err(Error::DegreeOverflow(d.0[i], self.kappa.0[i], i));
                    }
                }
            }
        }
        let mut out = MPoly::zero(self.image_vars);
        for (alpha, c) in f.terms() {
            let img = self.image(alpha)?;
            out = out.add(&img.scalar_mul(c))?;
        }
        Ok(out)
    }

    pub fn scalar_mul(&self, c: &Scalar) -> Self {
        let images = self
            .images
            .iter()
            .map(|(a, img)| (a.clone(), img.scalar_mul(c)))
            .collect();
        LinearOperatorSpec {
            nvars: self.nvars,
            image_vars: self.image_vars,
            kappa: self.kappa.clone(),
            images,
            kind: OperatorKind::Table,
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.nvars != other.nvars || self.kappa != other.kappa {
            return Err(Error::DimensionMismatch(self.nvars, other.nvars));
        }
        let mut images = BTreeMap::new();
        for (a, img) in &self.images {
            images.insert(a.clone(), img.add(other.image(a)?)?);
        }
        Ok(LinearOperatorSpec {
            nvars: self.nvars,
            image_vars: self.image_vars,
            kappa: self.kappa.clone(),
            images,
            kind: OperatorKind::Table,
        })
    }
}

/// Embed an image polynomial into the `z` block of the symbol space.
fn embed_z(f: &MPoly, total: usize) -> MPoly {
    f.embed(total, 0)
}

/// Monomial `w^beta` inside the symbol space; the `w` block starts at
/// `offset`.
fn w_monomial(total: usize, offset: usize, beta: &ExpVec, c: Scalar) -> MPoly {
    let mut e = vec![0u32; total];
    e[offset..offset + beta.len()].copy_from_slice(&beta.0);
    MPoly::monomial(total, ExpVec(e), c)
}

/// Algebraic symbol `G_T(z, w) = sum binom(kappa, alpha) T(z^alpha)
/// w^{kappa - alpha}`. The `z` block holds the image variables, the `w`
/// block the domain variables (`2n` in the standard equal-space case).
pub fn algebraic_symbol(t: &LinearOperatorSpec) -> MPoly {
    let off = t.image_vars();
    let total = off + t.nvars();
    let mut g = MPoly::zero(total);
    for (alpha, img) in t.images() {
        let b = multi_binom(t.kappa(), alpha);
        if b.is_zero() || img.is_zero() {
            continue;
        }
        let wmon = w_monomial(total, off, &t.kappa().sub(alpha), Scalar::from_rat(b));
        g = g.add(&embed_z(img, total).mul(&wmon).unwrap()).unwrap();
    }
    g
}

/// Alternate symbol `T[(1 - zw)^beta] = sum (-1)^{|alpha|} binom(beta,
/// alpha) T(z^alpha) w^alpha`. Requires `beta <= kappa`.
pub fn alt_symbol(t: &LinearOperatorSpec, beta: &ExpVec) -> Result<MPoly> {
    if beta.len() != t.nvars() || !beta.leq(t.kappa()) {
        return Err(Error::TableGap(format!("{:?}", beta)));
    }
    let off = t.image_vars();
    let total = off + t.nvars();
    let mut g = MPoly::zero(total);
    for alpha in ExpVec::iter_below(beta) {
        let img = t.image(&alpha)?;
        if img.is_zero() {
            continue;
        }
        let mut c = Scalar::from_rat(multi_binom(beta, &alpha));
        if alpha.total() % 2 == 1 {
            c = -&c;
        }
        let wmon = w_monomial(total, off, &alpha, c);
        g = g.add(&embed_z(img, total).mul(&wmon)?)?;
    }
    Ok(g)
}

/// Half-plane symbol truncation `sum binom(beta, alpha) T(z^alpha)
/// w^alpha` (the sign-free variant used for right-half-plane queries).
pub fn halfplane_symbol(t: &LinearOperatorSpec, beta: &ExpVec) -> Result<MPoly> {
    if beta.len() != t.nvars() || !beta.leq(t.kappa()) {
        return Err(Error::TableGap(format!("{:?}", beta)));
    }
    let off = t.image_vars();
    let total = off + t.nvars();
    let mut g = MPoly::zero(total);
    for alpha in ExpVec::iter_below(beta) {
        let img = t.image(&alpha)?;
        if img.is_zero() {
            continue;
        }
        let c = Scalar::from_rat(multi_binom(beta, &alpha));
        g = g.add(&embed_z(img, total).mul(&w_monomial(total, off, &alpha, c))?)?;
    }
    Ok(g)
}

/// Substitute `w -> -w` in a `2n`-variable symbol.
pub fn reflect_w(g: &MPoly, n: usize) -> MPoly {
    debug_assert_eq!(g.nvars(), 2 * n);
    let mut out = MPoly::zero(2 * n);
    for (e, c) in g.terms() {
        let wdeg: u64 = e.0[n..].iter().map(|&k| k as u64).sum();
        let c = if wdeg % 2 == 1 { -c } else { c.clone() };
        out.add_term(e.clone(), c);
    }
    out
}

/// Reflected algebraic symbol `G_T(z, -w)`.
pub fn reflected_symbol(t: &LinearOperatorSpec) -> MPoly {
    reflect_w(&algebraic_symbol(t), t.nvars())
}

/// Exact check of the relation `T[(1-zw)^kappa] = (-1)^{|kappa|} w^kappa
/// G_T(z, -w^{-1})` after clearing the `w` powers.
pub fn alt_symbol_identity_holds(t: &LinearOperatorSpec) -> bool {
    let n = t.nvars();
    let kappa = t.kappa();
    let g = algebraic_symbol(t);
    // Map each term c z^a w^b of G_T to (-1)^{|b| + |kappa|} c z^a
    // w^{kappa - b}.
    let mut rhs = MPoly::zero(2 * n);
    let ktot = kappa.total();
    for (e, c) in g.terms() {
        let b = ExpVec(e.0[n..].to_vec());
        if !b.leq(kappa) {
            return false;
        }
        let mut e2 = e.0[..n].to_vec();
        e2.extend(kappa.sub(&b).0.iter());
        let sign = (b.total() + ktot) % 2;
        let c2 = if sign == 1 { -c } else { c.clone() };
        rhs.add_term(ExpVec(e2), c2);
    }
    match alt_symbol(t, kappa) {
        Ok(lhs) => lhs == rhs,
        Err(_) => false,
    }
}

/// Rank of the image list over the Gaussian rationals, with a row-echelon
/// basis of the range.
pub fn range_dimension(t: &LinearOperatorSpec) -> (usize, Vec<MPoly>) {
    let mut monomials: Vec<ExpVec> = Vec::new();
    for img in t.images.values() {
        for (e, _) in img.terms() {
            if !monomials.contains(e) {
                monomials.push(e.clone());
            }
        }
    }
    monomials.sort();
    let col_of = |e: &ExpVec| monomials.binary_search(e).unwrap();
    let mut rows: Vec<Vec<Scalar>> = t
        .images
        .values()
        .filter(|img| !img.is_zero())
        .map(|img| {
            let mut row = vec![Scalar::zero(); monomials.len()];
            for (e, c) in img.terms() {
                row[col_of(e)] = c.clone();
            }
            row
        })
        .collect();
    // Gaussian elimination over the scalar field.
    let mut rank = 0usize;
    let ncols = monomials.len();
    for col in 0..ncols {
        let pivot = (rank..rows.len()).find(|&r| !rows[r][col].is_zero());
        let Some(p) = pivot else { continue };
        rows.swap(rank, p);
        let inv = rows[rank][col].inv();
        for c in col..ncols {
            rows[rank][c] = &rows[rank][c] * &inv;
        }
        for r in 0..rows.len() {
            if r != rank && !rows[r][col].is_zero() {
                let factor = rows[r][col].clone();
                for c in col..ncols {
                    let t = &rows[rank][c] * &factor;
                    rows[r][c] = &rows[r][c] - &t;
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    let basis: Vec<MPoly> = rows[..rank]
        .iter()
        .map(|row| {
            let mut p = MPoly::zero(t.image_vars);
            for (ci, c) in row.iter().enumerate() {
                p.add_term(monomials[ci].clone(), c.clone());
            }
            p
        })
        .collect();
    (rank, basis)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum CertVerdict {
    PreserverSymbolStable,
    PreserverDegenerate,
    NotPreserver,
    Inconclusive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum SymbolBranch {
    /// Branch (b): the algebraic symbol itself.
    Direct,
    /// Branch (c): the reflected symbol `G_T(z, -w)` (real case only).
    Reflected,
}

/// A stable input whose image was exactly refuted.
#[derive(Clone, Debug)]
pub struct RefuterEvidence {
    pub input: MPoly,
    pub image: MPoly,
    pub image_witness: Witness,
}

#[derive(Clone, Debug)]
pub struct CertificationReport {
    pub verdict: CertVerdict,
    pub branch: Option<SymbolBranch>,
    /// True when the verdict rests on exact decisions only.
    pub certified: bool,
    pub symbol_verdicts: Vec<(String, MultiVerdict)>,
    pub range_dimension: Option<usize>,
    pub basis: Vec<MPoly>,
    pub degenerate_note: Option<String>,
    pub refuter: Option<RefuterEvidence>,
    nvars: usize,
}

impl CertificationReport {
    pub fn is_preserver(&self) -> bool {
        matches!(
            self.verdict,
            CertVerdict::PreserverSymbolStable | CertVerdict::PreserverDegenerate
        )
    }
}

impl serde::Serialize for CertificationReport {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let zn = VarNames::z(self.nvars);
        let mut m = s.serialize_map(None)?;
        m.serialize_entry("verdict", &self.verdict)?;
        m.serialize_entry("branch", &self.branch)?;
        m.serialize_entry("certified", &self.certified)?;
        let sv: Vec<serde_json::Value> = self
            .symbol_verdicts
            .iter()
            .map(|(name, v)| {
                serde_json::json!({ "symbol": name, "verdict": v })
            })
            .collect();
        m.serialize_entry("symbol_verdicts", &sv)?;
        m.serialize_entry("range_dimension", &self.range_dimension)?;
        let basis: Vec<String> = self.basis.iter().map(|p| p.to_canonical_string(&zn)).collect();
        m.serialize_entry("basis", &basis)?;
        m.serialize_entry("degenerate_note", &self.degenerate_note)?;
        match &self.refuter {
            Some(r) => {
                m.serialize_entry(
                    "refuter",
                    &serde_json::json!({
                        "input": r.input.to_canonical_string(&zn),
                        "image": r.image.to_canonical_string(&zn),
                        "image_witness": r.image_witness,
                    }),
                )?;
            }
            None => m.serialize_entry("refuter", &Option::<String>::None)?,
        }
        m.end()
    }
}

/// Candidate upper-half-plane anchor points extracted from a symbol
/// refutation witness: the `w`-block of an exact point, or the witness
/// line evaluated at the certified root center.
fn witness_w_candidates(w: &Witness, n: usize) -> Vec<Vec<Scalar>> {
    let mut out = Vec::new();
    match w {
        Witness::Point(pt) if pt.len() == 2 * n => {
            out.push(pt[n..].to_vec());
        }
        Witness::Line { lambda, alpha, root } if lambda.len() == 2 * n => {
            let t0 = root.center().clone();
            let cand: Vec<Scalar> = (n..2 * n)
                .map(|i| &(&lambda[i] * &t0) + &alpha[i])
                .collect();
            if cand.iter().all(|c| {
                use num_traits::Signed;
                c.im.is_positive()
            }) {
                out.push(cand);
            }
        }
        _ => {}
    }
    out
}

/// Best-effort search for a stable input whose image is exactly refuted.
/// Anchored at the symbol's refutation witness, then a default sweep.
fn search_refuter(
    t: &LinearOperatorSpec,
    symbol_witness: Option<&Witness>,
    cfg: &SamplingConfig,
    real_case: bool,
) -> Option<RefuterEvidence> {
    let n = t.nvars();
    let mut candidates: Vec<Vec<Scalar>> = Vec::new();
    if let Some(w) = symbol_witness {
        candidates.extend(witness_w_candidates(w, n));
    }
    for c in [
        Scalar::i(),
        Scalar::new(crate::scalar::rat(0, 1), crate::scalar::rat(1, 2)),
        Scalar::complex(0, 2),
        Scalar::new(crate::scalar::rat(1, 2), crate::scalar::rat(1, 2)),
        Scalar::complex(-1, 1),
    ] {
        candidates.push(vec![c; n]);
    }
    for w in candidates {
        // (z + W)^kappa is stable by construction.
        let (base, _) = crate::multi::generate_stable(t.kappa(), &w, &MPoly::zero(n), None).ok()?;
        let mut inputs: Vec<MPoly> = Vec::new();
        if real_case {
            // Real and imaginary parts of a stable polynomial form a real
            // stable pencil.
            let (re, im) = base.re_im_parts();
            for f in [re.clone(), im.clone(), re.add(&im).ok()?, re.sub(&im).ok()?] {
                if !f.is_zero() {
                    inputs.push(f);
                }
            }
        } else {
            inputs.push(base.clone());
            // A couple of guaranteed-stable perturbations in case T kills
            // the pure power.
            for g in [MPoly::one(n), MPoly::monomial(n, t.kappa().clone(), Scalar::one())] {
                if let Ok((p, _)) = crate::multi::generate_stable(t.kappa(), &w, &g, None) {
                    inputs.push(p);
                }
            }
        }
        for input in inputs {
            if real_case && !check_stability(&input, cfg).passes() {
                continue;
            }
            let image = match t.apply(&input) {
                Ok(img) => img,
                Err(_) => continue,
            };
            if image.is_zero() {
                continue;
            }
            let v = check_stability(&image, cfg);
            if v.is_refuted() {
                let wit = v.witness.expect("refuted carries witness");
                if verify_witness(&image, &wit) {
                    return Some(RefuterEvidence { input, image, image_witness: wit });
                }
            }
        }
    }
    None
}

/// Certify whether `T` preserves stability on its bounded-degree domain:
/// branch (b) tests the algebraic symbol; on exact refutation the
/// degenerate branch (a) asks for rank at most one with a stable basis
/// polynomial.
pub fn certify_complex_preserver(
    t: &LinearOperatorSpec,
    cfg: &SamplingConfig,
) -> CertificationReport {
    let g = algebraic_symbol(t);
    let sv = check_stability(&g, cfg);
    let mut report = CertificationReport {
        verdict: CertVerdict::Inconclusive,
        branch: None,
        certified: false,
        symbol_verdicts: vec![("algebraic".to_string(), sv.clone())],
        range_dimension: None,
        basis: Vec::new(),
        degenerate_note: None,
        refuter: None,
        nvars: t.nvars(),
    };
    match sv.status {
        MultiStatus::ExactStable | MultiStatus::PassedSamples | MultiStatus::ZeroPolynomial => {
            // A zero symbol means the zero operator: degenerate preserver.
            if sv.status == MultiStatus::ZeroPolynomial {
                let (rank, basis) = range_dimension(t);
                report.range_dimension = Some(rank);
                report.basis = basis;
                if rank == 0 {
                    report.verdict = CertVerdict::PreserverDegenerate;
                    report.certified = true;
                    return report;
                }
            }
            report.branch = Some(SymbolBranch::Direct);
            if sv.is_exact() {
                report.verdict = CertVerdict::PreserverSymbolStable;
                report.certified = true;
            } else if cfg.strict {
                report.verdict = CertVerdict::Inconclusive;
                report.degenerate_note =
                    Some("symbol passed samples but certified output was demanded".into());
            } else {
                report.verdict = CertVerdict::PreserverSymbolStable;
            }
        }
        MultiStatus::RefutedWithWitness => {
            let (rank, basis) = range_dimension(t);
            report.range_dimension = Some(rank);
            report.basis = basis.clone();
            if rank == 0 {
                report.verdict = CertVerdict::PreserverDegenerate;
                report.certified = true;
                report.degenerate_note = Some("zero operator".into());
                return report;
            }
            if rank == 1 {
                let pv = check_stability(&basis[0], cfg);
                let stable_p = pv.passes();
                report.symbol_verdicts.push(("range_basis".to_string(), pv.clone()));
                if stable_p {
                    report.verdict = CertVerdict::PreserverDegenerate;
                    report.certified = pv.is_exact();
                    report.degenerate_note =
                        Some("rank one with stable basis polynomial".into());
                } else {
                    report.verdict = CertVerdict::NotPreserver;
                    report.certified = pv.is_exact();
                    report.refuter =
                        search_refuter(t, sv.witness.as_ref(), cfg, false);
                }
                return report;
            }
            report.verdict = CertVerdict::NotPreserver;
            report.certified = true;
            report.refuter = search_refuter(t, sv.witness.as_ref(), cfg, false);
        }
    }
    report
}

/// Certify whether a real operator preserves real stability: branch (b)
/// tests `G_T`, branch (c) tests `G_T(z, -w)`, and the degenerate branch
/// (a) asks for rank at most two with basis in proper position.
pub fn certify_real_preserver(
    t: &LinearOperatorSpec,
    cfg: &SamplingConfig,
) -> Result<CertificationReport> {
    if !t.is_real() {
        return Err(Error::NotReal("operator images must be real".into()));
    }
    let g = algebraic_symbol(t);
    let sv_b = check_real_stability(&g, cfg)?;
    let mut report = CertificationReport {
        verdict: CertVerdict::Inconclusive,
        branch: None,
        certified: false,
        symbol_verdicts: vec![("algebraic".to_string(), sv_b.clone())],
        range_dimension: None,
        basis: Vec::new(),
        degenerate_note: None,
        refuter: None,
        nvars: t.nvars(),
    };
    if sv_b.passes() {
        report.branch = Some(SymbolBranch::Direct);
        if sv_b.is_exact() {
            report.verdict = CertVerdict::PreserverSymbolStable;
            report.certified = true;
        } else if cfg.strict {
            report.degenerate_note =
                Some("symbol passed samples but certified output was demanded".into());
        } else {
            report.verdict = CertVerdict::PreserverSymbolStable;
        }
        return Ok(report);
    }
    let gr = reflect_w(&g, t.nvars());
    let sv_c = check_stability(&gr, cfg);
    report.symbol_verdicts.push(("reflected".to_string(), sv_c.clone()));
    if sv_c.passes() {
        report.branch = Some(SymbolBranch::Reflected);
        if sv_c.is_exact() {
            report.verdict = CertVerdict::PreserverSymbolStable;
            report.certified = true;
        } else if cfg.strict {
            report.degenerate_note =
                Some("symbol passed samples but certified output was demanded".into());
        } else {
            report.verdict = CertVerdict::PreserverSymbolStable;
        }
        return Ok(report);
    }
    if sv_b.status == MultiStatus::ZeroPolynomial {
        report.verdict = CertVerdict::PreserverDegenerate;
        report.certified = true;
        report.degenerate_note = Some("zero operator".into());
        report.range_dimension = Some(0);
        return Ok(report);
    }

    // Degenerate branch (a): rank <= 2 with P << Q (either order).
    let (rank, basis) = range_dimension(t);
    report.range_dimension = Some(rank);
    report.basis = basis.clone();
    if rank == 0 {
        report.verdict = CertVerdict::PreserverDegenerate;
        report.certified = true;
        report.degenerate_note = Some("zero operator".into());
        return Ok(report);
    }
    if rank == 1 {
        let pv = check_real_stability(&basis[0], cfg)?;
        report.symbol_verdicts.push(("range_basis".to_string(), pv.clone()));
        if pv.passes() {
            report.verdict = CertVerdict::PreserverDegenerate;
            report.certified = pv.is_exact();
            report.degenerate_note = Some("rank one with real stable basis".into());
        } else {
            report.verdict = CertVerdict::NotPreserver;
            report.certified = pv.is_exact();
            report.refuter = search_refuter(t, sv_b.witness.as_ref(), cfg, true);
        }
        return Ok(report);
    }
    if rank == 2 {
        let p = &basis[0];
        let q = &basis[1];
        let pq = proper_position_multi(p, q, cfg)?;
        let qp = proper_position_multi(q, p, cfg)?;
        report.symbol_verdicts.push(("proper_position_pq".to_string(), pq.clone()));
        report.symbol_verdicts.push(("proper_position_qp".to_string(), qp.clone()));
        if pq.passes() || qp.passes() {
            report.verdict = CertVerdict::PreserverDegenerate;
            report.certified = pq.is_exact() && qp.is_exact();
            report.degenerate_note =
                Some("rank two with basis pair in proper position".into());
        } else {
            report.verdict = CertVerdict::NotPreserver;
            report.certified = pq.is_refuted() && qp.is_refuted();
            report.refuter = search_refuter(t, sv_b.witness.as_ref(), cfg, true);
        }
        return Ok(report);
    }
    report.verdict = CertVerdict::NotPreserver;
    report.certified = true;
    report.refuter = search_refuter(t, sv_b.witness.as_ref(), cfg, true);
    Ok(report)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum JensenVariant {
    /// `z^alpha -> (beta)_alpha z^alpha`.
    Falling,
    /// `z^alpha -> J(alpha, beta) z^alpha = (beta)_alpha beta^{-alpha}`.
    Normalized,
}

/// The Jensen multiplier operator of parameter `beta` on degree-`kappa`
/// space.
pub fn jensen_operator(
    nvars: usize,
    beta: &ExpVec,
    kappa: &ExpVec,
    variant: JensenVariant,
) -> LinearOperatorSpec {
    let mut diag = BTreeMap::new();
    for alpha in ExpVec::iter_below(kappa) {
        let v = match variant {
            JensenVariant::Falling => falling_factorial(beta, &alpha),
            JensenVariant::Normalized => jensen_multiplier(&alpha, beta),
        };
        diag.insert(alpha, Scalar::from_rat(v));
    }
    LinearOperatorSpec::diagonal(nvars, kappa.clone(), &diag)
}

/// The truncation `sum_{alpha <= beta} (beta)_alpha (-1)^{|alpha|}
/// T(z^alpha) w^alpha / alpha!` of the transcendental symbol; it equals
/// the alternate symbol `T[(1-zw)^beta]` coefficient for coefficient.
pub fn transcendental_truncation(
    t: &LinearOperatorSpec,
    beta: &ExpVec,
) -> Result<MPoly> {
    if beta.len() != t.nvars() || !beta.leq(t.kappa()) {
        return Err(Error::TableGap(format!("{:?}", beta)));
    }
    let off = t.image_vars();
    let total = off + t.nvars();
    let mut g = MPoly::zero(total);
    for alpha in ExpVec::iter_below(beta) {
        let img = t.image(&alpha)?;
        if img.is_zero() {
            continue;
        }
        let mut fact = crate::scalar::Rat::one();
        for &a in alpha.0.iter() {
            fact *= crate::multiindex::factorial_rat(a);
        }
        let mut c = Scalar::from_rat(falling_factorial(beta, &alpha) / fact);
        if alpha.total() % 2 == 1 {
            c = -&c;
        }
        g = g.add(&embed_z(img, total).mul(&w_monomial(total, off, &alpha, c))?)?;
    }
    Ok(g)
}

/// Stability check of one transcendental-symbol truncation.
pub fn transcendental_truncation_check(
    t: &LinearOperatorSpec,
    beta: &ExpVec,
    cfg: &SamplingConfig,
) -> Result<(MPoly, MultiVerdict)> {
    let g = transcendental_truncation(t, beta)?;
    let v = check_stability(&g, cfg);
    Ok((g, v))
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct TruncationSweep {
    pub beta_max: ExpVec,
    pub checked: u32,
    pub passed: bool,
    pub first_refutation: Option<(ExpVec, MultiVerdict)>,
}

/// Run truncation checks for every `beta <= beta_max` in graded-lex order
/// and report the first refutation, if any.
pub fn certify_transcendental(
    t: &LinearOperatorSpec,
    beta_max: &ExpVec,
    cfg: &SamplingConfig,
) -> Result<TruncationSweep> {
    let mut checked = 0u32;
    for beta in ExpVec::iter_below(beta_max) {
        let (_, v) = transcendental_truncation_check(t, &beta, cfg)?;
        checked += 1;
        if v.is_refuted() {
            return Ok(TruncationSweep {
                beta_max: beta_max.clone(),
                checked,
                passed: false,
                first_refutation: Some((beta, v)),
            });
        }
    }
    Ok(TruncationSweep {
        beta_max: beta_max.clone(),
        checked,
        passed: true,
        first_refutation: None,
    })
}

// ---------------------------------------------------------------------
// JSON schema
// ---------------------------------------------------------------------

#[derive(serde::Deserialize)]
struct OperatorJson {
    nvars: usize,
    kappa: Vec<u32>,
    kind: String,
    #[serde(default)]
    images: Vec<ImageJson>,
    #[serde(default)]
    diag: Vec<DiagJson>,
    #[serde(default)]
    diff: Vec<DiffJson>,
}

#[derive(serde::Deserialize)]
struct ImageJson {
    monomial: Vec<u32>,
    poly: String,
}

#[derive(serde::Deserialize)]
struct DiagJson {
    monomial: Vec<u32>,
    value: String,
}

#[derive(serde::Deserialize)]
struct DiffJson {
    coeff: String,
    zexp: Vec<u32>,
    dexp: Vec<u32>,
}

/// Parse an operator from its JSON description. The three constructors
/// (`table`, `diagonal`, `differential`) all compile to the monomial
/// table.
pub fn parse_operator(json: &str) -> Result<LinearOperatorSpec> {
    let spec: OperatorJson =
        serde_json::from_str(json).map_err(|e| Error::Schema(e.to_string()))?;
    if spec.kappa.len() != spec.nvars {
        return Err(Error::Schema(format!(
            "kappa has {} entries for {} variables",
            spec.kappa.len(),
            spec.nvars
        )));
    }
    if spec.nvars == 0 || spec.nvars > 8 {
        return Err(Error::Schema("nvars must be between 1 and 8".into()));
    }
    if spec.kappa.iter().any(|&k| k > 16) {
        return Err(Error::Schema("kappa entries must be at most 16".into()));
    }
    let kappa = ExpVec(spec.kappa);
    let n = spec.nvars;
    match spec.kind.as_str() {
        "table" => {
            let mut entries = Vec::new();
            for img in spec.images {
                let poly = crate::parse::parse_mpoly_n(&img.poly, n)?;
                entries.push((ExpVec(img.monomial), poly));
            }
            LinearOperatorSpec::from_table(n, kappa, entries)
        }
        "diagonal" => {
            let mut diag = BTreeMap::new();
            for d in spec.diag {
                if d.monomial.len() != n {
                    return Err(Error::Schema("diagonal monomial length mismatch".into()));
                }
                diag.insert(ExpVec(d.monomial), crate::parse::parse_scalar(&d.value)?);
            }
            Ok(LinearOperatorSpec::diagonal(n, kappa, &diag))
        }
        "differential" => {
            let mut terms = Vec::new();
            for d in spec.diff {
                terms.push((
                    crate::parse::parse_scalar(&d.coeff)?,
                    ExpVec(d.zexp),
                    ExpVec(d.dexp),
                ));
            }
            LinearOperatorSpec::differential(n, kappa, &terms)
        }
        other => Err(Error::Schema(format!("unknown operator kind '{}'", other))),
    }
}

impl serde::Serialize for LinearOperatorSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let zn = VarNames::z(self.nvars);
        let mut m = s.serialize_map(None)?;
        m.serialize_entry("nvars", &self.nvars)?;
        m.serialize_entry("kappa", &self.kappa)?;
        m.serialize_entry("kind", "table")?;
        let images: Vec<serde_json::Value> = self
            .images
            .iter()
            .filter(|(_, img)| !img.is_zero())
            .map(|(a, img)| {
                serde_json::json!({
                    "monomial": a.0,
                    "poly": img.to_canonical_string(&zn),
                })
            })
            .collect();
        m.serialize_entry("images", &images)?;
        m.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_mpoly_n;
    use crate::scalar::rat;

    fn ev(v: &[u32]) -> ExpVec {
        ExpVec(v.to_vec())
    }

    /// d/dz on degree-kappa univariate space.
    fn ddz(kappa: u32) -> LinearOperatorSpec {
        LinearOperatorSpec::differential(
            1,
            ev(&[kappa]),
            &[(Scalar::one(), ev(&[0]), ev(&[1]))],
        )
        .unwrap()
    }

    #[test]
    fn apply_examples() {
        let id = LinearOperatorSpec::identity(1, ev(&[2]));
        let f = parse_mpoly_n("z1^2 + 1", 1).unwrap();
        assert_eq!(id.apply(&f).unwrap(), f);

        let d = ddz(2);
        assert_eq!(d.apply(&parse_mpoly_n("z1^2", 1).unwrap()).unwrap(), parse_mpoly_n("2*z1", 1).unwrap());

        // diagonal z^k -> k! z^k
        let mut diag = BTreeMap::new();
        diag.insert(ev(&[0]), Scalar::one());
        diag.insert(ev(&[1]), Scalar::one());
        diag.insert(ev(&[2]), Scalar::from_int(2));
        let t = LinearOperatorSpec::diagonal(1, ev(&[2]), &diag);
        assert_eq!(
            t.apply(&parse_mpoly_n("z1^2 + 1", 1).unwrap()).unwrap(),
            parse_mpoly_n("2*z1^2 + 1", 1).unwrap()
        );

        // degree overflow
        assert!(d.apply(&parse_mpoly_n("z1^3", 1).unwrap()).is_err());
    }

    #[test]
    fn symbol_examples() {
        // identity, kappa = 2: (z + w)^2
        let id = LinearOperatorSpec::identity(1, ev(&[2]));
        let g = algebraic_symbol(&id);
        let expected = crate::parse::parse_symbol_mpoly("z1^2 + 2*z1*w1 + w1^2").unwrap().0;
        assert_eq!(g, expected);

        // d/dz, kappa = 2: 2z + 2w
        let g = algebraic_symbol(&ddz(2));
        let expected = crate::parse::parse_symbol_mpoly("2*z1 + 2*w1").unwrap().0;
        assert_eq!(g, expected);

        // S = 1 + d/dt on kappa = m: (m + t + w)(t + w)^{m-1}
        for m in 1..=5u32 {
            let s = LinearOperatorSpec::differential(
                1,
                ev(&[m]),
                &[
                    (Scalar::one(), ev(&[0]), ev(&[0])),
                    (Scalar::one(), ev(&[0]), ev(&[1])),
                ],
            )
            .unwrap();
            let g = algebraic_symbol(&s);
            let zw = crate::parse::parse_symbol_mpoly("z1 + w1").unwrap().0;
            let shift = zw.add(&MPoly::constant(2, Scalar::from_int(m as i64))).unwrap();
            let expected = shift.mul(&zw.pow(m - 1)).unwrap();
            assert_eq!(g, expected, "symbol of 1 + d/dt at m = {}", m);
        }
    }

    #[test]
    fn alt_symbol_examples() {
        // identity, kappa=(1): 1 - zw
        let id = LinearOperatorSpec::identity(1, ev(&[1]));
        assert_eq!(
            alt_symbol(&id, &ev(&[1])).unwrap(),
            crate::parse::parse_symbol_mpoly("1 - z1*w1").unwrap().0
        );
        // d/dz, kappa=2, beta=2: -2w + 2zw^2
        assert_eq!(
            alt_symbol(&ddz(2), &ev(&[2])).unwrap(),
            crate::parse::parse_symbol_mpoly("2*z1*w1^2 - 2*w1").unwrap().0
        );
        // reflected symbol of f -> f(-z) on kappa=2: G = (w-z)^2,
        // G(z,-w) = (z+w)^2
        let t = LinearOperatorSpec::from_table(
            1,
            ev(&[2]),
            vec![
                (ev(&[0]), MPoly::one(1)),
                (ev(&[1]), parse_mpoly_n("-z1", 1).unwrap()),
                (ev(&[2]), parse_mpoly_n("z1^2", 1).unwrap()),
            ],
        )
        .unwrap();
        let g = algebraic_symbol(&t);
        assert_eq!(g, crate::parse::parse_symbol_mpoly("z1^2 - 2*z1*w1 + w1^2").unwrap().0);
        assert_eq!(
            reflect_w(&g, 1),
            crate::parse::parse_symbol_mpoly("z1^2 + 2*z1*w1 + w1^2").unwrap().0
        );
        // the clearing identity holds for all of these
        assert!(alt_symbol_identity_holds(&id));
        assert!(alt_symbol_identity_holds(&ddz(2)));
        assert!(alt_symbol_identity_holds(&t));
    }

    #[test]
    fn range_examples() {
        // 1 -> 1, z -> 0, z^2 -> 1: rank 1
        let t = LinearOperatorSpec::from_table(
            1,
            ev(&[2]),
            vec![
                (ev(&[0]), MPoly::one(1)),
                (ev(&[2]), MPoly::one(1)),
            ],
        )
        .unwrap();
        let (rank, basis) = range_dimension(&t);
        assert_eq!(rank, 1);
        assert_eq!(basis[0], MPoly::one(1));

        let id = LinearOperatorSpec::identity(1, ev(&[2]));
        assert_eq!(range_dimension(&id).0, 3);

        // T(f) = f(1) + f(2) z: rank 2, basis {1, z}
        let t = LinearOperatorSpec::from_table(
            1,
            ev(&[2]),
            vec![
                (ev(&[0]), parse_mpoly_n("1 + z1", 1).unwrap()),
                (ev(&[1]), parse_mpoly_n("1 + 2*z1", 1).unwrap()),
                (ev(&[2]), parse_mpoly_n("1 + 4*z1", 1).unwrap()),
            ],
        )
        .unwrap();
        let (rank, _) = range_dimension(&t);
        assert_eq!(rank, 2);
    }

    #[test]
    fn certify_positive_examples() {
        let cfg = SamplingConfig::default();
        // d/dz preserves stability via the symbol branch
        let r = certify_complex_preserver(&ddz(2), &cfg);
        assert_eq!(r.verdict, CertVerdict::PreserverSymbolStable);
        assert_eq!(r.branch, Some(SymbolBranch::Direct));
        // identity on kappa=(2)
        let id = LinearOperatorSpec::identity(1, ev(&[2]));
        let r = certify_real_preserver(&id, &cfg).unwrap();
        assert_eq!(r.verdict, CertVerdict::PreserverSymbolStable);
        assert_eq!(r.branch, Some(SymbolBranch::Direct));
        // rank-one: f -> f(0) (z + i). The symbol (z+i) w^2 happens to be
        // stable too, and symbol branches are evaluated first.
        let t = LinearOperatorSpec::from_table(
            1,
            ev(&[2]),
            vec![(ev(&[0]), parse_mpoly_n("z1 + i", 1).unwrap())],
        )
        .unwrap();
        let r = certify_complex_preserver(&t, &cfg);
        assert!(r.is_preserver());
        // rank-one with a refuted symbol: 1 -> z+i, z -> 0, z^2 -> z+i has
        // symbol (z+i)(w^2 + 1), refuted at (i, i), but P = z+i is stable.
        let t = LinearOperatorSpec::from_table(
            1,
            ev(&[2]),
            vec![
                (ev(&[0]), parse_mpoly_n("z1 + i", 1).unwrap()),
                (ev(&[2]), parse_mpoly_n("z1 + i", 1).unwrap()),
            ],
        )
        .unwrap();
        let r = certify_complex_preserver(&t, &cfg);
        assert_eq!(r.verdict, CertVerdict::PreserverDegenerate);
        assert_eq!(r.range_dimension, Some(1));
    }

    #[test]
    fn certify_negative_with_refuter() {
        let cfg = SamplingConfig::certification();
        // 1 -> 1, z -> z, z^2 -> -z^2 on kappa = (2)
        let t = LinearOperatorSpec::from_table(
            1,
            ev(&[2]),
            vec![
                (ev(&[0]), MPoly::one(1)),
                (ev(&[1]), parse_mpoly_n("z1", 1).unwrap()),
                (ev(&[2]), parse_mpoly_n("-z1^2", 1).unwrap()),
            ],
        )
        .unwrap();
        let r = certify_complex_preserver(&t, &cfg);
        assert_eq!(r.verdict, CertVerdict::NotPreserver);
        // symbol refutation is exact
        assert!(r.symbol_verdicts[0].1.is_refuted());
        let g = algebraic_symbol(&t);
        assert!(verify_witness(&g, r.symbol_verdicts[0].1.witness.as_ref().unwrap()));
        // refuter found a stable input with exactly refuted image
        let refuter = r.refuter.expect("refuter should be found");
        assert!(check_stability(&refuter.input, &cfg).passes());
        assert!(verify_witness(&refuter.image, &refuter.image_witness));

        // the documented concrete refuter: f = (z+i)^2 maps to
        // -z^2 + 2iz - 1 with a root at i(1 + sqrt 2)
        let f = parse_mpoly_n("z1^2 + 2*i*z1 - 1", 1).unwrap();
        let img = t.apply(&f).unwrap();
        assert_eq!(img, parse_mpoly_n("-z1^2 + 2*i*z1 - 1", 1).unwrap());
        let v = check_stability(&img, &cfg);
        assert!(v.is_refuted());
        assert!(verify_witness(&img, v.witness.as_ref().unwrap()));
    }

    #[test]
    fn certify_real_reflected_branch() {
        let cfg = SamplingConfig::default();
        // f(z) -> f(-z) on kappa = (2): branch (c)
        let t = LinearOperatorSpec::from_table(
            1,
            ev(&[2]),
            vec![
                (ev(&[0]), MPoly::one(1)),
                (ev(&[1]), parse_mpoly_n("-z1", 1).unwrap()),
                (ev(&[2]), parse_mpoly_n("z1^2", 1).unwrap()),
            ],
        )
        .unwrap();
        let r = certify_real_preserver(&t, &cfg).unwrap();
        assert_eq!(r.verdict, CertVerdict::PreserverSymbolStable);
        assert_eq!(r.branch, Some(SymbolBranch::Reflected));
    }

    #[test]
    fn certify_real_degenerate_branch() {
        let cfg = SamplingConfig::default();
        // T(f) = f(1) * 1 + f(2) * z: rank 2, 1 << z
        let t = LinearOperatorSpec::from_table(
            1,
            ev(&[2]),
            vec![
                (ev(&[0]), parse_mpoly_n("1 + z1", 1).unwrap()),
                (ev(&[1]), parse_mpoly_n("1 + 2*z1", 1).unwrap()),
                (ev(&[2]), parse_mpoly_n("1 + 4*z1", 1).unwrap()),
            ],
        )
        .unwrap();
        let r = certify_real_preserver(&t, &cfg).unwrap();
        assert_eq!(r.verdict, CertVerdict::PreserverDegenerate);
        assert_eq!(r.range_dimension, Some(2));
    }

    #[test]
    fn jensen_symbol_factorization() {
        // beta=(2), kappa=(2): symbol = w^2 + 4zw + 2z^2
        let t = jensen_operator(1, &ev(&[2]), &ev(&[2]), JensenVariant::Falling);
        let g = algebraic_symbol(&t);
        let expected = crate::parse::parse_symbol_mpoly("2*z1^2 + 4*z1*w1 + w1^2").unwrap().0;
        assert_eq!(g, expected);
        // the per-variable factorization: sum_j j! C(k,j) C(b,j) z^j w^{k-j}
        let mut direct = MPoly::zero(2);
        for j in 0..=2u32 {
            let c = crate::multiindex::factorial_rat(j)
                * multi_binom(&ev(&[2]), &ev(&[j]))
                * multi_binom(&ev(&[2]), &ev(&[j]));
            direct.add_term(ev(&[j, 2 - j]), Scalar::from_rat(c));
        }
        assert_eq!(g, direct);
        // beta = 0 kills everything except the constant: rank 1
        let t0 = jensen_operator(1, &ev(&[0]), &ev(&[2]), JensenVariant::Falling);
        assert_eq!(range_dimension(&t0).0, 1);
        // J(alpha, (m,...)) -> 1 as m grows, at fixed alpha
        let mut last = rat(0, 1);
        for m in [2u32, 4, 8, 16, 64] {
            let j = jensen_multiplier(&ev(&[2]), &ev(&[m]));
            assert!(j > last);
            last = j;
        }
        assert!(last < rat(1, 1));
    }

    #[test]
    fn truncation_equals_alt_symbol() {
        let t = ddz(3);
        for b in 0..=3u32 {
            let tr = transcendental_truncation(&t, &ev(&[b])).unwrap();
            let alt = alt_symbol(&t, &ev(&[b])).unwrap();
            assert_eq!(tr, alt);
        }
        // identity truncations are stable (1 - zw patterns)
        let id = LinearOperatorSpec::identity(1, ev(&[3]));
        let sweep = certify_transcendental(&id, &ev(&[3]), &SamplingConfig::default()).unwrap();
        assert!(sweep.passed);
        assert_eq!(sweep.checked, 4);
        // d/dz truncation at beta = 2 is 2w(zw - 1), stable
        let sweep = certify_transcendental(&ddz(2), &ev(&[2]), &SamplingConfig::default()).unwrap();
        assert!(sweep.passed);
        // an operator keeping only constants truncates to the constant 1
        let keep = LinearOperatorSpec::from_table(
            1,
            ev(&[3]),
            vec![(ev(&[0]), MPoly::one(1))],
        )
        .unwrap();
        let (g, v) = transcendental_truncation_check(&keep, &ev(&[3]), &SamplingConfig::default())
            .unwrap();
        assert_eq!(g, MPoly::one(2));
        assert!(v.passes());
    }

    #[test]
    fn halfplane_symbol_examples() {
        let id = LinearOperatorSpec::identity(1, ev(&[1]));
        assert_eq!(
            halfplane_symbol(&id, &ev(&[1])).unwrap(),
            crate::parse::parse_symbol_mpoly("1 + z1*w1").unwrap().0
        );
        assert_eq!(
            halfplane_symbol(&ddz(1), &ev(&[1])).unwrap(),
            crate::parse::parse_symbol_mpoly("w1").unwrap().0
        );
        // diagonal z^k -> z^k / k!, beta = 2: the binomial weights give
        // 1 + 2zw + z^2 w^2 / 2
        let mut diag = BTreeMap::new();
        diag.insert(ev(&[0]), Scalar::one());
        diag.insert(ev(&[1]), Scalar::one());
        diag.insert(ev(&[2]), Scalar::from_frac(1, 2));
        let t = LinearOperatorSpec::diagonal(1, ev(&[2]), &diag);
        assert_eq!(
            halfplane_symbol(&t, &ev(&[2])).unwrap(),
            crate::parse::parse_symbol_mpoly("1/2*z1^2*w1^2 + 2*z1*w1 + 1").unwrap().0
        );
    }

    #[test]
    fn certified_preservers_never_refuted_on_generated_inputs() {
        use rand::{Rng, SeedableRng};
        let cfg = SamplingConfig::default();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31);
        let ops = vec![
            ddz(3),
            LinearOperatorSpec::identity(1, ev(&[3])),
            jensen_operator(1, &ev(&[3]), &ev(&[3]), JensenVariant::Falling),
        ];
        for t in ops {
            let r = certify_complex_preserver(&t, &cfg);
            assert_eq!(r.verdict, CertVerdict::PreserverSymbolStable);
            for _ in 0..6 {
                let deg = (rng.gen_range(0..=3)) as usize;
                let f = crate::gen::stable_upoly(&mut rng, deg, 4);
                let fm = crate::mpoly::MPoly::from_upoly(&f);
                let image = t.apply(&fm).unwrap();
                let v = check_stability(&image, &cfg);
                assert!(v.not_refuted(), "image of a stable input was refuted: {:?}", image);
            }
        }
    }

    #[test]
    fn composition_matches_direct_table() {
        // d/dz composed with itself equals the second derivative table
        let d = ddz(2);
        let dd = LinearOperatorSpec::compose(&d, &d).unwrap();
        let direct = LinearOperatorSpec::differential(
            1,
            ev(&[2]),
            &[(Scalar::one(), ev(&[0]), ev(&[2]))],
        )
        .unwrap();
        for alpha in ExpVec::iter_below(&ev(&[2])) {
            assert_eq!(dd.image(&alpha).unwrap(), direct.image(&alpha).unwrap());
        }
        assert_eq!(dd.kind(), OperatorKind::Composition);
    }

    #[test]
    fn operator_json_roundtrip() {
        let json = r#"{
            "nvars": 1, "kappa": [2], "kind": "differential",
            "diff": [{"coeff": "1", "zexp": [0], "dexp": [1]}]
        }"#;
        let t = parse_operator(json).unwrap();
        assert_eq!(t, ddz(2));
        let as_json = serde_json::to_string(&t).unwrap();
        let t2 = parse_operator(&as_json).unwrap();
        assert_eq!(algebraic_symbol(&t), algebraic_symbol(&t2));

        let bad = r#"{"nvars": 1, "kappa": [1, 2], "kind": "table"}"#;
        assert!(parse_operator(bad).is_err());
    }

    #[test]
    fn symbol_linearity() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10 {
            let kappa = ev(&[2]);
            let t1 = crate::gen::rand_operator(&mut rng, 1, &kappa, 2, 4);
            let t2 = crate::gen::rand_operator(&mut rng, 1, &kappa, 2, 4);
            let a = Scalar::complex(2, 1);
            let b = Scalar::complex(0, -3);
            let combo = t1.scalar_mul(&a).add(&t2.scalar_mul(&b)).unwrap();
            let lhs = algebraic_symbol(&combo);
            let rhs = algebraic_symbol(&t1)
                .scalar_mul(&a)
                .add(&algebraic_symbol(&t2).scalar_mul(&b))
                .unwrap();
            assert_eq!(lhs, rhs);
        }
    }

}
