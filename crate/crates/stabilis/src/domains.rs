//! Open circular domains as Moebius preimages of the upper half-plane,
//! exact transport of stability between domain products, membership in
//! the degree-aware classes, and domain/Lee-Yang preserver certification.
//!
//! A domain is `C = phi^{-1}(H)` for a Moebius map `phi` with Gaussian
//! rational coefficients: an open disk, an open half-plane, or the
//! exterior of a closed disk. Membership and classification are decided
//! by exact rational inequalities; stability over a domain product is
//! tested by clearing denominators through the degree-`kappa` transform
//! and running the half-plane machinery, cross-checked by direct
//! evaluation at exact in-domain rational points.

use crate::error::{Error, Result};
use crate::mpoly::MPoly;
use crate::multi::{check_stability, MultiStatus, MultiVerdict, SamplingConfig};
use crate::multiindex::ExpVec;
use crate::operator::{range_dimension, LinearOperatorSpec};
use crate::scalar::{rat, rat_to_string, Rat, Scalar};
use num_traits::{Signed, Zero};

/// Moebius transformation `zeta -> (a zeta + b) / (c zeta + d)` with
/// `ad - bc != 0`. On construction the coefficients are rescaled to
/// determinant one whenever the square root of the determinant exists
/// among the Gaussian rationals; otherwise the determinant is carried
/// along explicitly (every stability statement is invariant under the
/// resulting nonzero constant factor).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MoebiusMap {
    pub a: Scalar,
    pub b: Scalar,
    pub c: Scalar,
    pub d: Scalar,
}

impl MoebiusMap {
    pub fn new(a: Scalar, b: Scalar, c: Scalar, d: Scalar) -> Result<Self> {
        let m = MoebiusMap { a, b, c, d };
        if m.det().is_zero() {
            return Err(Error::SingularMoebius);
        }
        Ok(m.normalized())
    }

    pub fn identity() -> Self {
        MoebiusMap {
            a: Scalar::one(),
            b: Scalar::zero(),
            c: Scalar::zero(),
            d: Scalar::one(),
        }
    }

    pub fn det(&self) -> Scalar {
        &(&self.a * &self.d) - &(&self.b * &self.c)
    }

    fn normalized(self) -> Self {
        let det = self.det();
        if det.is_one() {
            return self;
        }
        match det.sqrt_exact() {
            Some(s) if !s.is_zero() => {
                let inv = s.inv();
                MoebiusMap {
                    a: &self.a * &inv,
                    b: &self.b * &inv,
                    c: &self.c * &inv,
                    d: &self.d * &inv,
                }
            }
            _ => self,
        }
    }

    /// The pole `-d/c`, when the map is not affine.
    pub fn pole(&self) -> Option<Scalar> {
        if self.c.is_zero() {
            None
        } else {
            Some(-&(&self.d / &self.c))
        }
    }

    /// Evaluate; `None` at the pole.
    pub fn eval(&self, zeta: &Scalar) -> Option<Scalar> {
        let den = &(&self.c * zeta) + &self.d;
        if den.is_zero() {
            return None;
        }
        Some(&(&(&self.a * zeta) + &self.b) / &den)
    }

    /// `Im(phi(zeta)) > 0`, decided by the exact rational sign of
    /// `Im((a zeta + b) * conj(c zeta + d))`; the pole is excluded.
    pub fn maps_into_upper(&self, zeta: &Scalar) -> bool {
        let num = &(&self.a * zeta) + &self.b;
        let den = &(&self.c * zeta) + &self.d;
        (&num * &den.conj()).im.is_positive()
    }

    /// The inverse transformation (adjugate coefficients).
    pub fn inverse(&self) -> MoebiusMap {
        MoebiusMap {
            a: self.d.clone(),
            b: -&self.b,
            c: -&self.c,
            d: self.a.clone(),
        }
    }
}

/// Exact geometric classification of `phi^{-1}(H)`.
#[derive(Clone, Debug, PartialEq)]
pub enum DomainClass {
    /// `{x + iy : bx * x + cy * y + d0 > 0}`.
    OpenHalfPlane { bx: Rat, cy: Rat, d0: Rat },
    OpenDisk { center: (Rat, Rat), radius_sq: Rat },
    ExteriorOfClosedDisk { center: (Rat, Rat), radius_sq: Rat },
}

impl serde::Serialize for DomainClass {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut m = s.serialize_map(None)?;
        match self {
            DomainClass::OpenHalfPlane { bx, cy, d0 } => {
                m.serialize_entry("kind", "halfplane")?;
                m.serialize_entry(
                    "inequality",
                    &format!(
                        "{}*x + {}*y + {} > 0",
                        rat_to_string(bx),
                        rat_to_string(cy),
                        rat_to_string(d0)
                    ),
                )?;
            }
            DomainClass::OpenDisk { center, radius_sq } => {
                m.serialize_entry("kind", "disk")?;
                m.serialize_entry("center", &[rat_to_string(&center.0), rat_to_string(&center.1)])?;
                m.serialize_entry("radius_sq", &rat_to_string(radius_sq))?;
            }
            DomainClass::ExteriorOfClosedDisk { center, radius_sq } => {
                m.serialize_entry("kind", "exterior")?;
                m.serialize_entry("center", &[rat_to_string(&center.0), rat_to_string(&center.1)])?;
                m.serialize_entry("radius_sq", &rat_to_string(radius_sq))?;
            }
        }
        m.end()
    }
}

/// An open circular domain `C = phi^{-1}(H)` with its classification.
#[derive(Clone, Debug, PartialEq)]
pub struct CircularDomain {
    pub phi: MoebiusMap,
    pub class: DomainClass,
}

impl CircularDomain {
    pub fn from_moebius(phi: MoebiusMap) -> Self {
        let class = classify(&phi);
        CircularDomain { phi, class }
    }

    /// The upper half-plane itself.
    pub fn upper_half_plane() -> Self {
        CircularDomain::from_moebius(MoebiusMap::identity())
    }

    /// The open unit disk, with the orientation that turns the domain
    /// symbol into a multiple of `T[(1+zw)^kappa]`.
    pub fn unit_disk() -> Self {
        CircularDomain::from_moebius(
            MoebiusMap::new(
                Scalar::complex(0, -1),
                Scalar::from_int(-1),
                Scalar::one(),
                Scalar::i(),
            )
            .unwrap(),
        )
    }

    /// The exterior of the closed unit disk.
    pub fn unit_disk_exterior() -> Self {
        CircularDomain::unit_disk().reflect()
    }

    /// The rotated half-plane `{z : Im(u z) > 0}` for a nonzero Gaussian
    /// rational `u`.
    pub fn rotated_half_plane(u: &Scalar) -> Result<Self> {
        Ok(CircularDomain::from_moebius(MoebiusMap::new(
            u.clone(),
            Scalar::zero(),
            Scalar::zero(),
            Scalar::one(),
        )?))
    }

    pub fn convex(&self) -> bool {
        !matches!(self.class, DomainClass::ExteriorOfClosedDisk { .. })
    }

    /// Exact membership test.
    pub fn contains(&self, zeta: &Scalar) -> bool {
        self.phi.maps_into_upper(zeta)
    }

    /// The interior of the complement, realized by postcomposing `phi`
    /// with the sign flip.
    pub fn reflect(&self) -> CircularDomain {
        let phi = MoebiusMap {
            a: -&self.phi.a,
            b: -&self.phi.b,
            c: self.phi.c.clone(),
            d: self.phi.d.clone(),
        };
        CircularDomain::from_moebius(phi)
    }

    /// Deterministic exact rational points inside the domain:
    /// classification-specific picks first, then images of a fixed
    /// upper-half-plane grid under the inverse map. Every candidate is
    /// validated by the exact membership test.
    pub fn sample_points(&self, want: usize) -> Vec<Scalar> {
        let mut out: Vec<Scalar> = Vec::new();
        let push = |p: Scalar, out: &mut Vec<Scalar>| {
            if self.contains(&p) && !out.contains(&p) {
                out.push(p);
            }
        };
        match &self.class {
            DomainClass::OpenDisk { center, radius_sq } => {
                let c = Scalar::new(center.0.clone(), center.1.clone());
                let r = crate::scalar::rat_to_f64(radius_sq).sqrt();
                for &scale in &[0.5f64, 0.75, 0.25] {
                    for dir in unit_directions() {
                        let t = Rat::from_float(r * scale).unwrap_or_else(Rat::zero);
                        let p = &c + &(&dir * &Scalar::from_rat(t));
                        push(p, &mut out);
                    }
                }
                push(c, &mut out);
            }
            DomainClass::ExteriorOfClosedDisk { center, radius_sq } => {
                let c = Scalar::new(center.0.clone(), center.1.clone());
                let r = crate::scalar::rat_to_f64(radius_sq).sqrt();
                for &scale in &[1.5f64, 3.0, 1.125] {
                    for dir in unit_directions() {
                        let t = Rat::from_float((r * scale).max(0.5)).unwrap_or_else(Rat::zero);
                        let p = &c + &(&dir * &Scalar::from_rat(t));
                        push(p, &mut out);
                    }
                }
            }
            DomainClass::OpenHalfPlane { bx, cy, d0 } => {
                let norm = bx * bx + cy * cy;
                for s in [rat(1, 2), rat(1, 1), rat(2, 1), rat(5, 1), rat(1, 8)] {
                    let t = (-d0 + s) / norm.clone();
                    let p = Scalar::new(bx * &t, cy * &t);
                    push(p, &mut out);
                }
                // sideways shifts along the boundary direction
                let tangent = Scalar::new(-cy.clone(), bx.clone());
                let t = (-d0 + rat(1, 1)) / norm.clone();
                let base = Scalar::new(bx * &t, cy * &t);
                for k in [1i64, -1, 2] {
                    let p = &base + &(&tangent * &Scalar::from_int(k));
                    push(p, &mut out);
                }
            }
        }
        let chi = self.phi.inverse();
        for h in upper_grid() {
            if out.len() >= want {
                break;
            }
            if let Some(p) = chi.eval(&h) {
                push(p, &mut out);
            }
        }
        out.truncate(want.max(4));
        out
    }
}

fn unit_directions() -> Vec<Scalar> {
    vec![
        Scalar::one(),
        Scalar::from_int(-1),
        Scalar::i(),
        -Scalar::i(),
        Scalar::new(rat(3, 5), rat(4, 5)),
        Scalar::new(rat(-3, 5), rat(4, 5)),
        Scalar::new(rat(4, 5), rat(-3, 5)),
    ]
}

fn upper_grid() -> Vec<Scalar> {
    vec![
        Scalar::i(),
        Scalar::complex(0, 2),
        Scalar::new(rat(0, 1), rat(1, 2)),
        Scalar::complex(1, 1),
        Scalar::complex(-1, 1),
        Scalar::new(rat(1, 2), rat(1, 2)),
        Scalar::new(rat(-1, 2), rat(1, 4)),
        Scalar::complex(0, 3),
        Scalar::new(rat(1, 3), rat(2, 1)),
        Scalar::new(rat(-2, 1), rat(1, 3)),
    ]
}

/// Classify `phi^{-1}(H)` from the quadratic-form expansion of
/// `Im((a z + b) conj(c z + d)) > 0`.
fn classify(phi: &MoebiusMap) -> DomainClass {
    let ac = &phi.a * &phi.c.conj();
    let ad = &phi.a * &phi.d.conj();
    let bc = &phi.b * &phi.c.conj();
    let bd = &phi.b * &phi.d.conj();
    let qa = ac.im.clone();
    let qb = ad.im.clone() + bc.im.clone();
    let qc = ad.re.clone() - bc.re.clone();
    let qd = bd.im.clone();
    if qa.is_zero() {
        DomainClass::OpenHalfPlane { bx: qb, cy: qc, d0: qd }
    } else {
        let two_a = rat(2, 1) * &qa;
        let center = (-&qb / &two_a, -&qc / &two_a);
        let radius_sq =
            (&qb * &qb + &qc * &qc - rat(4, 1) * &qa * &qd) / (rat(4, 1) * &qa * &qa);
        if qa.is_negative() {
            DomainClass::OpenDisk { center, radius_sq }
        } else {
            DomainClass::ExteriorOfClosedDisk { center, radius_sq }
        }
    }
}

/// One open circular domain per variable.
#[derive(Clone, Debug, PartialEq)]
pub struct DomainProduct(pub Vec<CircularDomain>);

impl DomainProduct {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn upper_half_planes(n: usize) -> Self {
        DomainProduct(vec![CircularDomain::upper_half_plane(); n])
    }

    pub fn contains(&self, pt: &[Scalar]) -> bool {
        pt.len() == self.len() && pt.iter().zip(&self.0).all(|(p, c)| c.contains(p))
    }

    pub fn reflect(&self) -> DomainProduct {
        DomainProduct(self.0.iter().map(CircularDomain::reflect).collect())
    }

    /// The doubled product `C_1 x ... x C_n x C_1 x ... x C_n` used by
    /// the symbol criteria.
    pub fn doubled(&self) -> DomainProduct {
        let mut v = self.0.clone();
        v.extend(self.0.iter().cloned());
        DomainProduct(v)
    }

    pub fn maps(&self) -> Vec<MoebiusMap> {
        self.0.iter().map(|c| c.phi.clone()).collect()
    }

    /// Deterministic product grid of exact in-domain points, enumerated
    /// lexicographically over per-domain sample lists.
    pub fn sample_grid(&self, cap: usize) -> Vec<Vec<Scalar>> {
        let per: Vec<Vec<Scalar>> = self.0.iter().map(|c| c.sample_points(10)).collect();
        if per.iter().any(Vec::is_empty) {
            return Vec::new();
        }
        let mut out = Vec::new();
        let mut idx = vec![0usize; self.len()];
        'outer: loop {
            out.push(idx.iter().zip(&per).map(|(&k, g)| g[k].clone()).collect());
            if out.len() >= cap {
                break;
            }
            // lexicographic increment
            let mut pos = self.len();
            loop {
                if pos == 0 {
                    break 'outer;
                }
                pos -= 1;
                idx[pos] += 1;
                if idx[pos] < per[pos].len() {
                    break;
                }
                idx[pos] = 0;
            }
        }
        out
    }
}

/// The transform `Phi_kappa(f) = prod_i (c_i z_i + d_i)^{kappa_i} *
/// f(phi_1(z_1), ..., phi_n(z_n))`, computed exactly term by term as
/// `prod_i (a_i z_i + b_i)^{alpha_i} (c_i z_i + d_i)^{kappa_i - alpha_i}`.
pub fn phi_kappa_transform(f: &MPoly, maps: &[MoebiusMap], kappa: &ExpVec) -> Result<MPoly> {
    let n = f.nvars();
    if maps.len() != n || kappa.len() != n {
        return Err(Error::DimensionMismatch(maps.len(), n));
    }
    if let Some(d) = f.deg_vector() {
        for i in 0..n {
            if d.0[i] > kappa.0[i] {
                return Err(Error::DegreeOverflow(d.0[i], kappa.0[i], i));
            }
        }
    }
    let mut nums = Vec::with_capacity(n);
    let mut dens = Vec::with_capacity(n);
    for (i, m) in maps.iter().enumerate() {
        let z = MPoly::var(n, i);
        nums.push(z.scalar_mul(&m.a).add(&MPoly::constant(n, m.b.clone()))?);
        dens.push(z.scalar_mul(&m.c).add(&MPoly::constant(n, m.d.clone()))?);
    }
    let mut out = MPoly::zero(n);
    for (alpha, coeff) in f.terms() {
        let mut term = MPoly::constant(n, coeff.clone());
        for i in 0..n {
            term = term
                .mul(&nums[i].pow(alpha.0[i]))?
                .mul(&dens[i].pow(kappa.0[i] - alpha.0[i]))?;
        }
        out = out.add(&term)?;
    }
    Ok(out)
}

/// The exact constant `prod det(phi_i)^{kappa_i}` relating
/// `Phi^{-1}(Phi(f))` to `f`.
pub fn roundtrip_constant(maps: &[MoebiusMap], kappa: &ExpVec) -> Scalar {
    let mut c = Scalar::one();
    for (m, &k) in maps.iter().zip(&kappa.0) {
        c = &c * &m.det().pow(k);
    }
    c
}

/// Verdict for stability over a domain product.
#[derive(Clone, Debug, serde::Serialize)]
pub struct DomainVerdict {
    pub status: MultiStatus,
    /// Verdict of the transported polynomial on the half-plane product.
    pub transported: MultiVerdict,
    /// An exact in-domain point where the polynomial vanishes.
    pub domain_zero: Option<Vec<Scalar>>,
}

impl DomainVerdict {
    pub fn passes(&self) -> bool {
        matches!(self.status, MultiStatus::ExactStable | MultiStatus::PassedSamples)
    }

    pub fn is_refuted(&self) -> bool {
        self.status == MultiStatus::RefutedWithWitness
    }
}

/// Test `C_1 x ... x C_n`-stability of `g` (no degree conditions):
/// transport by the polynomial's own degree vector to the half-plane
/// product, sample there, and cross-check with direct evaluation at exact
/// in-domain rational points.
pub fn domain_stability(
    g: &MPoly,
    domains: &DomainProduct,
    cfg: &SamplingConfig,
) -> Result<DomainVerdict> {
    let n = g.nvars();
    if domains.len() != n {
        return Err(Error::DimensionMismatch(domains.len(), n));
    }
    if g.is_zero() {
        return Ok(DomainVerdict {
            status: MultiStatus::ZeroPolynomial,
            transported: check_stability(g, cfg),
            domain_zero: None,
        });
    }
    let deg = g.deg_vector().expect("nonzero");

    // Direct in-domain sampling first: evaluations are cheap and yield
    // the most readable witnesses.
    let mut domain_zero = None;
    let grid = domains.sample_grid((cfg.sample_count as usize).clamp(32, 128));
    for pt in grid {
        if g.evaluate(&pt)?.is_zero() {
            domain_zero = Some(pt);
            break;
        }
    }

    let chis: Vec<MoebiusMap> = domains.0.iter().map(|c| c.phi.inverse()).collect();
    let transported = phi_kappa_transform(g, &chis, &deg)?;
    let tv = check_stability(&transported, cfg);

    // Map an exact transported zero back into the domain product.
    if domain_zero.is_none() {
        if let Some(crate::multi::Witness::Point(pt)) = &tv.witness {
            let mapped: Option<Vec<Scalar>> =
                pt.iter().zip(&chis).map(|(z, chi)| chi.eval(z)).collect();
            if let Some(mapped) = mapped {
                if domains.contains(&mapped) {
                    if g.evaluate(&mapped)?.is_zero() {
                        domain_zero = Some(mapped);
                    } else {
                        return Err(Error::Internal(
                            "transported zero failed exact re-verification".into(),
                        ));
                    }
                }
            }
        }
    }

    let status = if domain_zero.is_some() {
        MultiStatus::RefutedWithWitness
    } else {
        tv.status
    };
    Ok(DomainVerdict { status, transported: tv, domain_zero })
}

/// Membership report for the degree-aware stable classes over a domain
/// product.
#[derive(Clone, Debug, serde::Serialize)]
pub struct MembershipReport {
    pub stability: DomainVerdict,
    /// Degree equals `kappa_j` in every variable whose domain is
    /// non-convex.
    pub degree_ok: bool,
    pub degree_failures: Vec<usize>,
    /// Support of the non-convex block has a unique maximal element,
    /// stable across sampled anchor choices (`None` when every domain is
    /// convex).
    pub unique_max_ok: Option<bool>,
    pub member: bool,
}

/// Decide membership in the class of `kappa`-bounded `C`-product-stable
/// polynomials with full degree in the non-convex coordinates.
pub fn n_kappa_membership(
    f: &MPoly,
    domains: &DomainProduct,
    kappa: &ExpVec,
    cfg: &SamplingConfig,
) -> Result<MembershipReport> {
    let n = f.nvars();
    if domains.len() != n || kappa.len() != n {
        return Err(Error::DimensionMismatch(domains.len(), n));
    }
    if let Some(d) = f.deg_vector() {
        for i in 0..n {
            if d.0[i] > kappa.0[i] {
                return Err(Error::DegreeOverflow(d.0[i], kappa.0[i], i));
            }
        }
    }
    let mut degree_failures = Vec::new();
    for (j, dom) in domains.0.iter().enumerate() {
        if !dom.convex() {
            let dj = f.deg_var(j).unwrap_or(0);
            if dj != kappa.0[j] {
                degree_failures.push(j);
            }
        }
    }
    let degree_ok = degree_failures.is_empty();
    let stability = domain_stability(f, domains, cfg)?;

    // Structural sanity on the non-convex block: unique maximal support
    // element, stable over sampled anchors for the convex coordinates.
    let jset: Vec<usize> = (0..n).filter(|&j| !domains.0[j].convex()).collect();
    let unique_max_ok = if jset.is_empty() || f.is_zero() {
        None
    } else {
        let keep = &jset;
        let others: Vec<usize> = (0..n).filter(|j| !keep.contains(j)).collect();
        let mut ok = true;
        let mut seen_max: Option<ExpVec> = None;
        let anchor_sets: Vec<Vec<Scalar>> = if others.is_empty() {
            vec![Vec::new()]
        } else {
            let per: Vec<Vec<Scalar>> =
                others.iter().map(|&j| domains.0[j].sample_points(3)).collect();
            if per.iter().any(Vec::is_empty) {
                vec![]
            } else {
                (0..3usize)
                    .map(|k| per.iter().map(|g| g[k % g.len()].clone()).collect())
                    .collect()
            }
        };
        for anchors in anchor_sets {
            // specialize the convex coordinates at the anchor values
            let mut g = f.clone();
            let mut removed = 0usize;
            let mut others_sorted = others.clone();
            others_sorted.sort();
            let mut anchor_iter = anchors.iter();
            for &j in &others_sorted {
                let mu = anchor_iter.next().expect("anchor per variable");
                g = specialize_complex(&g, j - removed, mu)?;
                removed += 1;
            }
            if g.is_zero() {
                ok = false;
                continue;
            }
            let (_, max, unique) = g.support_extrema()?;
            if !unique {
                ok = false;
            } else {
                match &seen_max {
                    None => seen_max = Some(max[0].clone()),
                    Some(prev) => {
                        if prev != &max[0] {
                            ok = false;
                        }
                    }
                }
            }
        }
        Some(ok)
    };

    let member = degree_ok && stability.passes() && unique_max_ok.unwrap_or(true);
    Ok(MembershipReport {
        stability,
        degree_ok,
        degree_failures,
        unique_max_ok,
        member,
    })
}

/// Variable substitution by an arbitrary Gaussian rational (membership
/// anchors may be complex, unlike the real closure transform).
fn specialize_complex(f: &MPoly, i: usize, mu: &Scalar) -> Result<MPoly> {
    let n = f.nvars();
    if i >= n {
        return Err(Error::BadVariableIndex(i, n));
    }
    let mut out = MPoly::zero(n - 1);
    for (e, c) in f.terms() {
        let mut e2 = e.0.clone();
        let k = e2.remove(i);
        out.add_term(ExpVec(e2), c * &mu.pow(k));
    }
    Ok(out)
}

/// The algebraic symbol of `T` with respect to a domain product:
/// `T[prod ((a_i z_i + b_i)(c_i w_i + d_i) + (a_i w_i + b_i)(c_i z_i +
/// d_i))^{kappa_i}]`, `T` acting on the `z` block.
pub fn domain_symbol(t: &LinearOperatorSpec, domains: &DomainProduct) -> Result<MPoly> {
    domain_symbol_signed(t, domains, false)
}

/// The minus-sign variant used by the Lee-Yang criterion.
pub fn minus_domain_symbol(t: &LinearOperatorSpec, domains: &DomainProduct) -> Result<MPoly> {
    domain_symbol_signed(t, domains, true)
}

fn domain_symbol_signed(
    t: &LinearOperatorSpec,
    domains: &DomainProduct,
    minus: bool,
) -> Result<MPoly> {
    let n = t.nvars();
    if domains.len() != n {
        return Err(Error::DimensionMismatch(domains.len(), n));
    }
    let total = 2 * n;
    let mut product = MPoly::one(total);
    for (i, dom) in domains.0.iter().enumerate() {
        let m = &dom.phi;
        let z = MPoly::var(total, i);
        let w = MPoly::var(total, n + i);
        let az_b = z.scalar_mul(&m.a).add(&MPoly::constant(total, m.b.clone()))?;
        let cw_d = w.scalar_mul(&m.c).add(&MPoly::constant(total, m.d.clone()))?;
        let aw_b = w.scalar_mul(&m.a).add(&MPoly::constant(total, m.b.clone()))?;
        let cz_d = z.scalar_mul(&m.c).add(&MPoly::constant(total, m.d.clone()))?;
        let first = az_b.mul(&cw_d)?;
        let second = aw_b.mul(&cz_d)?;
        let factor = if minus { first.sub(&second)? } else { first.add(&second)? };
        product = product.mul(&factor.pow(t.kappa().0[i]))?;
    }
    apply_on_z_block(t, &product)
}

/// Apply `T` to the `z` block of a `2n`-variable polynomial.
fn apply_on_z_block(t: &LinearOperatorSpec, p: &MPoly) -> Result<MPoly> {
    let n = t.nvars();
    let total = 2 * n;
    let mut out = MPoly::zero(total);
    for (e, c) in p.terms() {
        let ez = ExpVec(e.0[..n].to_vec());
        let img = t.image(&ez)?;
        if img.is_zero() {
            continue;
        }
        let mut wexp = vec![0u32; total];
        wexp[n..].copy_from_slice(&e.0[n..]);
        let wmon = MPoly::monomial(total, ExpVec(wexp), c.clone());
        out = out.add(&img.embed(total, 0).mul(&wmon)?)?;
    }
    Ok(out)
}

/// Certification outcome for domain and Lee-Yang preservers.
#[derive(Clone, Debug, serde::Serialize)]
pub struct DomainCertReport {
    pub verdict: crate::operator::CertVerdict,
    pub branch: Option<String>,
    pub certified: bool,
    pub symbol_checks: Vec<(String, DomainVerdict)>,
    pub range_dimension: Option<usize>,
    pub note: Option<String>,
}

impl DomainCertReport {
    pub fn is_preserver(&self) -> bool {
        matches!(
            self.verdict,
            crate::operator::CertVerdict::PreserverSymbolStable
                | crate::operator::CertVerdict::PreserverDegenerate
        )
    }
}

/// Certify whether `T` maps the degree-`kappa` stable class of the domain
/// product into the stable classes: the domain symbol is tested on the
/// doubled product, with the rank-one fallback.
pub fn certify_domain_preserver(
    t: &LinearOperatorSpec,
    domains: &DomainProduct,
    cfg: &SamplingConfig,
) -> Result<DomainCertReport> {
    use crate::operator::CertVerdict;
    let symbol = domain_symbol(t, domains)?;
    let sv = domain_stability(&symbol, &domains.doubled(), cfg)?;
    let mut checks = vec![("domain_symbol".to_string(), sv.clone())];
    if sv.passes() {
        let certified = sv.transported.is_exact();
        let verdict = if cfg.strict && !certified {
            CertVerdict::Inconclusive
        } else {
            CertVerdict::PreserverSymbolStable
        };
        return Ok(DomainCertReport {
            verdict,
            branch: Some("symbol".into()),
            certified,
            symbol_checks: checks,
            range_dimension: None,
            note: None,
        });
    }
    let (rank, basis) = range_dimension(t);
    if rank == 0 {
        return Ok(DomainCertReport {
            verdict: CertVerdict::PreserverDegenerate,
            branch: Some("degenerate".into()),
            certified: true,
            symbol_checks: checks,
            range_dimension: Some(0),
            note: Some("zero operator".into()),
        });
    }
    if rank == 1 {
        let pv = domain_stability(&basis[0], domains, cfg)?;
        let pass = pv.passes();
        checks.push(("range_basis".to_string(), pv));
        return Ok(DomainCertReport {
            verdict: if pass {
                CertVerdict::PreserverDegenerate
            } else {
                CertVerdict::NotPreserver
            },
            branch: Some("degenerate".into()),
            certified: false,
            symbol_checks: checks,
            range_dimension: Some(1),
            note: Some("rank one".into()),
        });
    }
    Ok(DomainCertReport {
        verdict: CertVerdict::NotPreserver,
        branch: None,
        certified: sv.is_refuted(),
        symbol_checks: checks,
        range_dimension: Some(rank),
        note: None,
    })
}

/// Membership in the Lee-Yang class: stable with full non-convex degrees
/// over both the domains and their reflections.
#[derive(Clone, Debug, serde::Serialize)]
pub struct LeeYangReport {
    pub in_domains: MembershipReport,
    pub in_reflections: MembershipReport,
    pub member: bool,
}

pub fn lee_yang_membership(
    f: &MPoly,
    domains: &DomainProduct,
    kappa: &ExpVec,
    cfg: &SamplingConfig,
) -> Result<LeeYangReport> {
    let a = n_kappa_membership(f, domains, kappa, cfg)?;
    let b = n_kappa_membership(f, &domains.reflect(), kappa, cfg)?;
    let member = a.member && b.member;
    Ok(LeeYangReport { in_domains: a, in_reflections: b, member })
}

/// Certify a Lee-Yang preserver through the plus/minus domain symbols,
/// each required stable on the doubled product and the doubled reflected
/// product. Stated only for non-degenerate operators (rank above two);
/// degenerate operators are reported out of scope.
pub fn certify_lee_yang_preserver(
    t: &LinearOperatorSpec,
    domains: &DomainProduct,
    cfg: &SamplingConfig,
) -> Result<DomainCertReport> {
    use crate::operator::CertVerdict;
    let (rank, _) = range_dimension(t);
    if rank <= 2 {
        return Ok(DomainCertReport {
            verdict: CertVerdict::Inconclusive,
            branch: None,
            certified: false,
            symbol_checks: Vec::new(),
            range_dimension: Some(rank),
            note: Some(
                "degenerate operator (rank <= 2): the displayed characterization \
                 does not apply"
                    .into(),
            ),
        });
    }
    let doubled = domains.doubled();
    let doubled_r = domains.reflect().doubled();
    let mut checks = Vec::new();

    let plus = domain_symbol(t, domains)?;
    let p1 = domain_stability(&plus, &doubled, cfg)?;
    let p2 = domain_stability(&plus, &doubled_r, cfg)?;
    let plus_ok = p1.passes() && p2.passes();
    let exact_plus_fail = p1.is_refuted() || p2.is_refuted();
    checks.push(("plus_symbol_domains".to_string(), p1));
    checks.push(("plus_symbol_reflected".to_string(), p2));
    if plus_ok {
        return Ok(DomainCertReport {
            verdict: CertVerdict::PreserverSymbolStable,
            branch: Some("plus".into()),
            certified: false,
            symbol_checks: checks,
            range_dimension: Some(rank),
            note: None,
        });
    }
    let minus = minus_domain_symbol(t, domains)?;
    let m1 = domain_stability(&minus, &doubled, cfg)?;
    let m2 = domain_stability(&minus, &doubled_r, cfg)?;
    let minus_ok = m1.passes() && m2.passes();
    let exact_minus_fail = m1.is_refuted() || m2.is_refuted();
    checks.push(("minus_symbol_domains".to_string(), m1));
    checks.push(("minus_symbol_reflected".to_string(), m2));
    if minus_ok {
        return Ok(DomainCertReport {
            verdict: CertVerdict::PreserverSymbolStable,
            branch: Some("minus".into()),
            certified: false,
            symbol_checks: checks,
            range_dimension: Some(rank),
            note: None,
        });
    }
    Ok(DomainCertReport {
        verdict: CertVerdict::NotPreserver,
        branch: None,
        certified: exact_plus_fail && exact_minus_fail,
        symbol_checks: checks,
        range_dimension: Some(rank),
        note: None,
    })
}

/// Sufficiency-only strict stability check: closed-half-plane (or closed
/// convex domain) sampling of the relevant symbol. A pass reports the
/// sufficient condition met (sampled); any exact failure reports no
/// conclusion, since the condition is not necessary.
#[derive(Clone, Debug, serde::Serialize)]
pub struct StrictReport {
    pub sufficient_sampled: bool,
    pub samples: u32,
    pub failure: Option<String>,
}

pub fn strict_sufficiency_check(
    t: &LinearOperatorSpec,
    domain: Option<&CircularDomain>,
    cfg: &SamplingConfig,
) -> Result<StrictReport> {
    if let Some(c) = domain {
        if !c.convex() {
            return Err(Error::Precondition(
                "closed-domain strict check needs a convex domain".into(),
            ));
        }
    }
    let n = t.nvars();
    let symbol = match domain {
        None => crate::operator::algebraic_symbol(t),
        Some(c) => {
            let domains = DomainProduct(vec![c.clone(); n]);
            domain_symbol(t, &domains)?
        }
    };
    // Transport to the half-plane side when a domain is given.
    let test_poly = match domain {
        None => symbol,
        Some(c) => {
            let chis = vec![c.phi.inverse(); 2 * n];
            let deg = match symbol.deg_vector() {
                Some(d) => d,
                None => {
                    return Ok(StrictReport {
                        sufficient_sampled: false,
                        samples: 0,
                        failure: Some("zero symbol".into()),
                    })
                }
            };
            phi_kappa_transform(&symbol, &chis, &deg)?
        }
    };
    strict_closed_halfplane_sampling(&test_poly, cfg)
}

/// Sample strict stability on the closed upper half-plane product:
/// real-line restrictions and closed-anchor sections must be strictly
/// stable univariate polynomials.
fn strict_closed_halfplane_sampling(f: &MPoly, cfg: &SamplingConfig) -> Result<StrictReport> {
    use crate::gen::{rand_sym_rat, rand_upper_scalar};
    use rand_chacha::rand_core::SeedableRng;
    if f.is_zero() {
        return Ok(StrictReport {
            sufficient_sampled: false,
            samples: 0,
            failure: Some("zero polynomial".into()),
        });
    }
    let n = f.nvars();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(cfg.seed ^ 0xA5A5_5A5A);
    let mut samples = 0u32;
    let budget = cfg.sample_count.max(16);

    let check_uni = |p: &crate::upoly::UPoly, what: &str| -> Option<String> {
        if p.is_zero() {
            return Some(format!("{}: restriction vanishes identically", what));
        }
        match crate::uni::is_strictly_stable_uni(p) {
            Ok(true) => None,
            Ok(false) => Some(format!("{}: restriction is not strictly stable", what)),
            Err(e) => Some(format!("{}: {}", what, e)),
        }
    };

    // Real lines.
    let mut k = 0u32;
    while samples < budget / 2 {
        samples += 1;
        let (lambda, alpha): (Vec<Rat>, Vec<Rat>) = if k == 0 {
            (vec![rat(1, 1); n], vec![rat(0, 1); n])
        } else {
            (
                (0..n).map(|_| crate::gen::rand_pos_rat(&mut rng, cfg.height)).collect(),
                (0..n).map(|_| rand_sym_rat(&mut rng, cfg.height)).collect(),
            )
        };
        k += 1;
        let r = f.restrict_to_line(&lambda, &alpha)?;
        if let Some(fail) = check_uni(&r, "line") {
            return Ok(StrictReport { sufficient_sampled: false, samples, failure: Some(fail) });
        }
    }
    // Sections with closed-half-plane anchors (including real anchors).
    for j in 0..n {
        for k in 0..((budget / (2 * n as u32)).max(2)) {
            samples += 1;
            let lambda: Vec<Scalar> = (0..n)
                .map(|i| if i == j { Scalar::one() } else { Scalar::zero() })
                .collect();
            let alpha: Vec<Scalar> = (0..n)
                .map(|i| {
                    if i == j {
                        Scalar::zero()
                    } else if k % 2 == 0 {
                        Scalar::from_rat(rand_sym_rat(&mut rng, cfg.height))
                    } else {
                        rand_upper_scalar(&mut rng, cfg.height)
                    }
                })
                .collect();
            let r = f.restrict_line(&lambda, &alpha)?;
            if let Some(fail) = check_uni(&r, "section") {
                return Ok(StrictReport {
                    sufficient_sampled: false,
                    samples,
                    failure: Some(fail),
                });
            }
        }
    }
    Ok(StrictReport { sufficient_sampled: true, samples, failure: None })
}

/// Parse a comma-separated domain shorthand: `H`, `D`, `Dext`,
/// `H@pi/2`-style rotations, or `H@<scalar>` with a nonzero Gaussian
/// rational rotation factor `u` meaning `{z : Im(u z) > 0}`.
pub fn parse_domains(spec: &str) -> Result<DomainProduct> {
    let mut out = Vec::new();
    for token in spec.split(',') {
        let token = token.trim();
        out.push(parse_domain_token(token)?);
    }
    Ok(DomainProduct(out))
}

fn parse_domain_token(token: &str) -> Result<CircularDomain> {
    match token {
        "H" => Ok(CircularDomain::upper_half_plane()),
        "D" => Ok(CircularDomain::unit_disk()),
        "Dext" => Ok(CircularDomain::unit_disk_exterior()),
        _ => {
            if let Some(rest) = token.strip_prefix("H@") {
                let u = match rest {
                    "0" => Scalar::one(),
                    "pi/2" => Scalar::i(),
                    "pi" => Scalar::from_int(-1),
                    "-pi/2" | "3pi/2" => -Scalar::i(),
                    other => crate::parse::parse_scalar(other)?,
                };
                if u.is_zero() {
                    return Err(Error::Schema("rotation factor must be nonzero".into()));
                }
                return CircularDomain::rotated_half_plane(&u);
            }
            Err(Error::Schema(format!(
                "unknown domain '{}'; use H, D, Dext, H@<u>, or JSON",
                token
            )))
        }
    }
}

#[derive(serde::Deserialize)]
struct DomainJson {
    kind: String,
    #[serde(default)]
    phi: Option<PhiJson>,
}

#[derive(serde::Deserialize)]
struct PhiJson {
    a: String,
    b: String,
    c: String,
    d: String,
}

/// Parse a JSON array of domain descriptions
/// `[{"kind":"halfplane|disk|exterior|moebius","phi":{...}}, ...]`.
pub fn parse_domains_json(json: &str) -> Result<DomainProduct> {
    let items: Vec<DomainJson> =
        serde_json::from_str(json).map_err(|e| Error::Schema(e.to_string()))?;
    let mut out = Vec::new();
    for item in items {
        let phi = match &item.phi {
            Some(p) => Some(MoebiusMap::new(
                crate::parse::parse_scalar(&p.a)?,
                crate::parse::parse_scalar(&p.b)?,
                crate::parse::parse_scalar(&p.c)?,
                crate::parse::parse_scalar(&p.d)?,
            )?),
            None => None,
        };
        let dom = match (item.kind.as_str(), phi) {
            ("halfplane", None) => CircularDomain::upper_half_plane(),
            ("disk", None) => CircularDomain::unit_disk(),
            ("exterior", None) => CircularDomain::unit_disk_exterior(),
            ("moebius", Some(m)) => CircularDomain::from_moebius(m),
            (kind @ ("halfplane" | "disk" | "exterior"), Some(m)) => {
                let dom = CircularDomain::from_moebius(m);
                let matches = matches!(
                    (kind, &dom.class),
                    ("halfplane", DomainClass::OpenHalfPlane { .. })
                        | ("disk", DomainClass::OpenDisk { .. })
                        | ("exterior", DomainClass::ExteriorOfClosedDisk { .. })
                );
                if !matches {
                    return Err(Error::Schema(format!(
                        "phi classifies differently from declared kind '{}'",
                        kind
                    )));
                }
                dom
            }
            ("moebius", None) => {
                return Err(Error::Schema("kind 'moebius' requires phi".into()))
            }
            (other, _) => {
                return Err(Error::Schema(format!("unknown domain kind '{}'", other)))
            }
        };
        out.push(dom);
    }
    Ok(DomainProduct(out))
}

impl serde::Serialize for CircularDomain {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut m = s.serialize_map(None)?;
        m.serialize_entry("class", &self.class)?;
        m.serialize_entry(
            "phi",
            &serde_json::json!({
                "a": self.phi.a.to_canonical_string(),
                "b": self.phi.b.to_canonical_string(),
                "c": self.phi.c.to_canonical_string(),
                "d": self.phi.d.to_canonical_string(),
            }),
        )?;
        m.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_mpoly, parse_mpoly_n};

    #[test]
    fn classification() {
        let h = CircularDomain::upper_half_plane();
        assert!(matches!(h.class, DomainClass::OpenHalfPlane { .. }));
        assert!(h.convex());

        let d = CircularDomain::unit_disk();
        match &d.class {
            DomainClass::OpenDisk { center, radius_sq } => {
                assert!(center.0.is_zero() && center.1.is_zero());
                assert_eq!(radius_sq, &rat(1, 1));
            }
            c => panic!("expected unit disk, got {:?}", c),
        }

        let e = CircularDomain::unit_disk_exterior();
        assert!(matches!(e.class, DomainClass::ExteriorOfClosedDisk { .. }));
        assert!(!e.convex());

        // right half-plane H@pi/2
        let r = CircularDomain::rotated_half_plane(&Scalar::i()).unwrap();
        assert!(r.contains(&Scalar::from_int(1)));
        assert!(!r.contains(&Scalar::from_int(-1)));
        assert!(!r.contains(&Scalar::i()));
    }

    #[test]
    fn containment_examples() {
        let h = CircularDomain::upper_half_plane();
        assert!(h.contains(&Scalar::i()));
        assert!(!h.contains(&Scalar::from_int(0)));

        let d = CircularDomain::unit_disk();
        assert!(d.contains(&Scalar::zero()));
        assert!(d.contains(&Scalar::from_frac(1, 2)));
        assert!(!d.contains(&Scalar::from_int(2)));
        assert!(!d.contains(&Scalar::from_int(1))); // boundary

        let e = CircularDomain::unit_disk_exterior();
        assert!(e.contains(&Scalar::from_int(3)));
        assert!(!e.contains(&Scalar::zero()));
        assert!(!e.contains(&Scalar::from_int(1))); // boundary circle
    }

    #[test]
    fn reflection_involution() {
        for dom in [
            CircularDomain::upper_half_plane(),
            CircularDomain::unit_disk(),
            CircularDomain::unit_disk_exterior(),
        ] {
            let rr = dom.reflect().reflect();
            assert_eq!(rr.class, dom.class);
        }
        // reflect(H) is the lower half-plane
        let lower = CircularDomain::upper_half_plane().reflect();
        assert!(lower.contains(&(-Scalar::i())));
        assert!(!lower.contains(&Scalar::i()));
        // disk <-> exterior
        assert!(matches!(
            CircularDomain::unit_disk().reflect().class,
            DomainClass::ExteriorOfClosedDisk { .. }
        ));
    }

    #[test]
    fn classification_agrees_with_membership_on_probes() {
        // classification-based inequality equals the Moebius inequality
        for dom in [
            CircularDomain::unit_disk(),
            CircularDomain::unit_disk_exterior(),
            CircularDomain::rotated_half_plane(&Scalar::complex(1, 1)).unwrap(),
        ] {
            for p in [
                Scalar::zero(),
                Scalar::from_frac(1, 2),
                Scalar::from_int(2),
                Scalar::i(),
                Scalar::complex(1, -1),
                Scalar::new(rat(3, 4), rat(-1, 3)),
            ] {
                let via_phi = dom.contains(&p);
                let via_class = match &dom.class {
                    DomainClass::OpenHalfPlane { bx, cy, d0 } => {
                        (bx * &p.re + cy * &p.im + d0).is_positive()
                    }
                    DomainClass::OpenDisk { center, radius_sq } => {
                        let dx = &p.re - &center.0;
                        let dy = &p.im - &center.1;
                        &(dx.clone() * &dx + dy.clone() * &dy) < radius_sq
                    }
                    DomainClass::ExteriorOfClosedDisk { center, radius_sq } => {
                        let dx = &p.re - &center.0;
                        let dy = &p.im - &center.1;
                        &(dx.clone() * &dx + dy.clone() * &dy) > radius_sq
                    }
                };
                assert_eq!(via_phi, via_class, "disagreement at {:?} for {:?}", p, dom.class);
            }
        }
    }

    #[test]
    fn transform_examples() {
        // phi: z -> -1/z given by (0, -1, 1, 0): Phi_kappa(f) = z^kappa
        // f(-1/z), the variable inversion
        let m = MoebiusMap::new(
            Scalar::zero(),
            Scalar::from_int(-1),
            Scalar::one(),
            Scalar::zero(),
        )
        .unwrap();
        let f = parse_mpoly("z1 + 1").unwrap().0;
        let g = phi_kappa_transform(&f, &[m], &ExpVec(vec![1])).unwrap();
        assert_eq!(g, f.invert_var(0).unwrap());

        // (a,b,c,d) = (i,i,-1,1): Phi_1(z + i) = 2i, a nonzero constant
        let m = MoebiusMap::new(Scalar::i(), Scalar::i(), Scalar::from_int(-1), Scalar::one())
            .unwrap();
        let f = parse_mpoly("z1 + i").unwrap().0;
        let g = phi_kappa_transform(&f, std::slice::from_ref(&m), &ExpVec(vec![1])).unwrap();
        // The constructor normalizes by sqrt(det) = sqrt(2i) = 1 + i, so
        // the output picks up 1/(1+i) per clearing factor relative to the
        // unnormalized map; stability content is unchanged.
        assert!(g.is_constant());
        assert!(!g.is_zero());

        // roundtrip constant: Phi_inv(Phi(f)) = det^kappa f
        let maps = vec![
            MoebiusMap::new(
                Scalar::complex(1, 2),
                Scalar::from_int(3),
                Scalar::complex(0, 1),
                Scalar::one(),
            )
            .unwrap(),
            MoebiusMap::new(
                Scalar::from_int(2),
                Scalar::complex(-1, 1),
                Scalar::from_int(1),
                Scalar::from_int(4),
            )
            .unwrap(),
        ];
        let kappa = ExpVec(vec![2, 1]);
        let f = parse_mpoly("z1^2*z2 + (1-2*i)*z1 + 3").unwrap().0;
        let forward = phi_kappa_transform(&f, &maps, &kappa).unwrap();
        let inv_maps: Vec<MoebiusMap> = maps.iter().map(MoebiusMap::inverse).collect();
        let back = phi_kappa_transform(&forward, &inv_maps, &kappa).unwrap();
        let c = roundtrip_constant(&maps, &kappa);
        assert_eq!(back, f.scalar_mul(&c));
    }

    #[test]
    fn domain_stability_examples() {
        let cfg = SamplingConfig::default();
        let disks = DomainProduct(vec![CircularDomain::unit_disk(); 2]);
        // 1 + z1 z2 is stable on D x D
        let f = parse_mpoly("1 + z1*z2").unwrap().0;
        let v = domain_stability(&f, &disks, &cfg).unwrap();
        assert!(v.passes(), "expected pass, got {:?}", v);
        // z1 + z2 vanishes at (1/2, -1/2)
        let f = parse_mpoly("z1 + z2").unwrap().0;
        let v = domain_stability(&f, &disks, &cfg).unwrap();
        assert!(v.is_refuted());
        let zero = v.domain_zero.expect("exact in-domain zero");
        assert_eq!(zero, vec![Scalar::from_frac(1, 2), Scalar::from_frac(-1, 2)]);
    }

    #[test]
    fn membership_examples() {
        let cfg = SamplingConfig::default();
        let kappa = ExpVec(vec![1, 1]);
        // f = 1 fails the degree condition on exterior domains
        let ext2 = DomainProduct(vec![CircularDomain::unit_disk_exterior(); 2]);
        let one2 = MPoly::one(2);
        let r = n_kappa_membership(&one2, &ext2, &kappa, &cfg).unwrap();
        assert!(!r.member);
        assert_eq!(r.degree_failures, vec![0, 1]);
        // 1 + z1 z2 is a member on unit disks
        let disks = DomainProduct(vec![CircularDomain::unit_disk(); 2]);
        let f = parse_mpoly("1 + z1*z2").unwrap().0;
        let r = n_kappa_membership(&f, &disks, &kappa, &cfg).unwrap();
        assert!(r.member);
        // z1 + z2 is not
        let g = parse_mpoly("z1 + z2").unwrap().0;
        let r = n_kappa_membership(&g, &disks, &kappa, &cfg).unwrap();
        assert!(!r.member);
    }

    #[test]
    fn lee_yang_examples() {
        let cfg = SamplingConfig::default();
        let kappa = ExpVec(vec![1, 1]);
        let disks = DomainProduct(vec![CircularDomain::unit_disk(); 2]);
        // 1 + z1 z2 is Lee-Yang for unit disks
        let f = parse_mpoly("1 + z1*z2").unwrap().0;
        let r = lee_yang_membership(&f, &disks, &kappa, &cfg).unwrap();
        assert!(r.member, "{:?}", r);
        // z1 + z2 is not (witness (1/2, -1/2))
        let g = parse_mpoly("z1 + z2").unwrap().0;
        let r = lee_yang_membership(&g, &disks, &kappa, &cfg).unwrap();
        assert!(!r.member);
        assert!(r.in_domains.stability.domain_zero.is_some());
        // f = 1 fails the reflected degree condition
        let r = lee_yang_membership(&MPoly::one(2), &disks, &kappa, &cfg).unwrap();
        assert!(!r.member);
        assert!(r.in_domains.member);
        assert!(!r.in_reflections.member);
        // reflection symmetry
        let f = parse_mpoly("1 + z1*z2").unwrap().0;
        let r1 = lee_yang_membership(&f, &disks, &kappa, &cfg).unwrap();
        let r2 = lee_yang_membership(&f, &disks.reflect(), &kappa, &cfg).unwrap();
        assert_eq!(r1.member, r2.member);
    }

    #[test]
    fn domain_symbol_reductions() {
        // identity maps: symbol is exactly G_T
        let t = LinearOperatorSpec::identity(1, ExpVec(vec![1]));
        let h = DomainProduct::upper_half_planes(1);
        let s = domain_symbol(&t, &h).unwrap();
        assert_eq!(s, crate::operator::algebraic_symbol(&t));

        // unit disks: symbol = (-2i)^{|kappa|} T[(1+zw)^kappa]
        let disks = DomainProduct(vec![CircularDomain::unit_disk()]);
        for kap in 1..=3u32 {
            let t = LinearOperatorSpec::identity(1, ExpVec(vec![kap]));
            let s = domain_symbol(&t, &disks).unwrap();
            let hp = crate::operator::halfplane_symbol(&t, &ExpVec(vec![kap])).unwrap();
            let c = Scalar::complex(0, -2).pow(kap);
            assert_eq!(s, hp.scalar_mul(&c), "kappa = {}", kap);
        }
        // 1 + zw is D x D stable
        let t = LinearOperatorSpec::identity(1, ExpVec(vec![1]));
        let s = domain_symbol(&t, &disks).unwrap();
        let v = domain_stability(&s, &disks.doubled(), &SamplingConfig::default()).unwrap();
        assert!(v.passes());
    }

    #[test]
    fn certify_domain_examples() {
        let cfg = SamplingConfig::default();
        let disks = DomainProduct(vec![CircularDomain::unit_disk()]);
        // identity preserves D-stability via the symbol
        let t = LinearOperatorSpec::identity(1, ExpVec(vec![2]));
        let r = certify_domain_preserver(&t, &disks, &cfg).unwrap();
        assert!(r.is_preserver());
        // f -> f(0) * 1: rank one with constant image
        let t = LinearOperatorSpec::from_table(
            1,
            ExpVec(vec![2]),
            vec![(ExpVec(vec![0]), MPoly::one(1))],
        )
        .unwrap();
        let r = certify_domain_preserver(&t, &disks, &cfg).unwrap();
        assert!(r.is_preserver());
        // the sign-flip operator is not an H-domain preserver (same
        // operator as the half-plane negative example, phi = id)
        let t = LinearOperatorSpec::from_table(
            1,
            ExpVec(vec![2]),
            vec![
                (ExpVec(vec![0]), MPoly::one(1)),
                (ExpVec(vec![1]), parse_mpoly_n("z1", 1).unwrap()),
                (ExpVec(vec![2]), parse_mpoly_n("-z1^2", 1).unwrap()),
            ],
        )
        .unwrap();
        let h = DomainProduct::upper_half_planes(1);
        let r = certify_domain_preserver(&t, &h, &cfg).unwrap();
        assert_eq!(r.verdict, crate::operator::CertVerdict::NotPreserver);
    }

    #[test]
    fn lee_yang_certify_examples() {
        let cfg = SamplingConfig::default();
        let disks = DomainProduct(vec![CircularDomain::unit_disk()]);
        // identity on kappa=(2) has rank 3: plus branch with 1+zw type
        // symbols stable on both doubled products
        let t = LinearOperatorSpec::identity(1, ExpVec(vec![2]));
        let r = certify_lee_yang_preserver(&t, &disks, &cfg).unwrap();
        assert!(r.is_preserver(), "{:?}", r.verdict);
        assert_eq!(r.branch.as_deref(), Some("plus"));
        // degenerate rank <= 2 is out of the displayed theorem
        let t = LinearOperatorSpec::from_table(
            1,
            ExpVec(vec![2]),
            vec![(ExpVec(vec![0]), MPoly::one(1))],
        )
        .unwrap();
        let r = certify_lee_yang_preserver(&t, &disks, &cfg).unwrap();
        assert_eq!(r.verdict, crate::operator::CertVerdict::Inconclusive);
        assert_eq!(r.range_dimension, Some(1));
    }

    #[test]
    fn sign_flip_certifies_and_inversion_uses_minus_branch() {
        let cfg = SamplingConfig::default();
        let disks = DomainProduct(vec![CircularDomain::unit_disk()]);
        // f(z) -> f(-z) on kappa = (3): non-degenerate (rank 4). Its plus
        // symbol is a multiple of (1 - zw)^3, stable on both doubled
        // products, so the plus branch already certifies.
        let t = LinearOperatorSpec::from_table(
            1,
            ExpVec(vec![3]),
            vec![
                (ExpVec(vec![0]), MPoly::one(1)),
                (ExpVec(vec![1]), parse_mpoly_n("-z1", 1).unwrap()),
                (ExpVec(vec![2]), parse_mpoly_n("z1^2", 1).unwrap()),
                (ExpVec(vec![3]), parse_mpoly_n("-z1^3", 1).unwrap()),
            ],
        )
        .unwrap();
        let r = certify_lee_yang_preserver(&t, &disks, &cfg).unwrap();
        assert!(r.is_preserver(), "{:?}", r.verdict);

        // The inversion f(z) -> z^3 f(-1/z) genuinely needs the minus
        // branch: its plus symbol is a multiple of (z - w)^3 (vanishes on
        // the diagonal of D x D), while the minus symbol is a multiple of
        // (1 + zw)^3.
        let t = LinearOperatorSpec::from_table(
            1,
            ExpVec(vec![3]),
            vec![
                (ExpVec(vec![0]), parse_mpoly_n("z1^3", 1).unwrap()),
                (ExpVec(vec![1]), parse_mpoly_n("-z1^2", 1).unwrap()),
                (ExpVec(vec![2]), parse_mpoly_n("z1", 1).unwrap()),
                (ExpVec(vec![3]), parse_mpoly_n("-1", 1).unwrap()),
            ],
        )
        .unwrap();
        let r = certify_lee_yang_preserver(&t, &disks, &cfg).unwrap();
        assert!(r.is_preserver(), "{:?}", r.verdict);
        assert_eq!(r.branch.as_deref(), Some("minus"));
        // and the plus branch failed with an exact certificate
        assert!(r.symbol_checks.iter().any(|(name, v)| name.starts_with("plus") && v.is_refuted()));
    }

    #[test]
    fn strict_check_examples() {
        let cfg = SamplingConfig::default();
        // translation f(z) -> f(z + i): symbol (z + w + i)^kappa is
        // strictly stable -> sufficient condition met
        let kappa = ExpVec(vec![2]);
        let mut entries = Vec::new();
        for alpha in ExpVec::iter_below(&kappa) {
            // (z + i)^alpha
            let base = parse_mpoly_n("z1 + i", 1).unwrap().pow(alpha.0[0]);
            entries.push((alpha, base));
        }
        let t = LinearOperatorSpec::from_table(1, kappa.clone(), entries).unwrap();
        let r = strict_sufficiency_check(&t, None, &cfg).unwrap();
        assert!(r.sufficient_sampled);

        // identity: (z+w)^kappa vanishes at the real point 0 -> no
        // conclusion
        let id = LinearOperatorSpec::identity(1, kappa.clone());
        let r = strict_sufficiency_check(&id, None, &cfg).unwrap();
        assert!(!r.sufficient_sampled);

        // d/dz: symbol 2(z+w), also not strictly stable
        let d = LinearOperatorSpec::differential(
            1,
            kappa,
            &[(Scalar::one(), ExpVec(vec![0]), ExpVec(vec![1]))],
        )
        .unwrap();
        let r = strict_sufficiency_check(&d, None, &cfg).unwrap();
        assert!(!r.sufficient_sampled);
    }

    #[test]
    fn moebius_normalization() {
        // det = -4 has the exact Gaussian square root 2i, so the map is
        // rescaled to determinant one
        let m = MoebiusMap::new(
            Scalar::from_int(2),
            Scalar::zero(),
            Scalar::zero(),
            Scalar::from_int(-2),
        )
        .unwrap();
        assert!(m.det().is_one());
        // det = 2 has no Gaussian square root and is carried explicitly
        let m = CircularDomain::unit_disk().phi;
        assert_eq!(m.det(), Scalar::from_int(2));
        // singular maps are rejected
        assert!(MoebiusMap::new(
            Scalar::one(),
            Scalar::one(),
            Scalar::one(),
            Scalar::one()
        )
        .is_err());
    }

    #[test]
    fn domain_parsing() {
        let p = parse_domains("D,Dext").unwrap();
        assert_eq!(p.len(), 2);
        assert!(matches!(p.0[0].class, DomainClass::OpenDisk { .. }));
        assert!(matches!(p.0[1].class, DomainClass::ExteriorOfClosedDisk { .. }));
        assert!(parse_domains("H@pi/2").is_ok());
        assert!(parse_domains("X").is_err());

        let json = r#"[
            {"kind": "disk"},
            {"kind": "moebius", "phi": {"a": "1", "b": "0", "c": "0", "d": "1"}}
        ]"#;
        let p = parse_domains_json(json).unwrap();
        assert_eq!(p.len(), 2);
        assert!(matches!(p.0[1].class, DomainClass::OpenHalfPlane { .. }));
    }
}
