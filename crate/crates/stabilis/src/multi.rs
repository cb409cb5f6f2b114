//! Multivariate stability testing.
//!
//! Refutations are exact certificates: a Gaussian-rational point in the
//! open upper half-plane product where the polynomial vanishes, or a line
//! whose exact univariate restriction is not stable. Acceptances on two or
//! more variables are sampled and labeled as such; only constants and
//! polynomials that are effectively univariate earn `ExactStable`.
//!
//! The sample plan for a given `(input, SamplingConfig)` pair is
//! deterministic: a fixed sweep of probe points and lines, exact sections
//! that pin all but one variable at Gaussian-rational anchors, and seeded
//! random restrictions along lines `lambda * t + alpha` with positive
//! rational `lambda`.

use crate::error::{Error, Result};
use crate::gen::{rand_pos_rat, rand_sym_rat, rand_upper_scalar};
use crate::mpoly::MPoly;
use crate::multiindex::ExpVec;
use crate::scalar::{rat, Rat, Scalar};
use crate::sturm::{sign_on_reals, SignOnR};
use crate::uni::{is_stable_uni, verify_root_region, RootRegion, UniStatus};
use crate::upoly::UPoly;
use num_traits::{One, Signed, Zero};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Knobs for sampled stability testing. Identical config and input always
/// produce the identical verdict.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct SamplingConfig {
    pub sample_count: u32,
    pub seed: u64,
    /// Height bound for sampled rationals `p/q` (`p, q <= height`).
    pub height: u32,
    /// Demand certified output and run redundant cross-checks.
    pub strict: bool,
}

impl Default for SamplingConfig {
    fn default() -> Self {
        SamplingConfig { sample_count: 64, seed: 0x5EED, height: 32, strict: false }
    }
}

impl SamplingConfig {
    /// Heavier preset used by the certification paths.
    pub fn certification() -> Self {
        SamplingConfig { sample_count: 256, ..Default::default() }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_samples(mut self, n: u32) -> Self {
        self.sample_count = n;
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum MultiStatus {
    ExactStable,
    PassedSamples,
    RefutedWithWitness,
    ZeroPolynomial,
}

/// Exact certificate of instability.
#[derive(Clone, Debug)]
pub enum Witness {
    /// `f` vanishes at this Gaussian-rational point; every coordinate has
    /// strictly positive imaginary part.
    Point(Vec<Scalar>),
    /// The exact restriction `t -> f(lambda * t + alpha)` is not stable.
    /// Coordinates satisfy `lambda_i > 0 && Im(alpha_i) >= 0` or
    /// `lambda_i = 0 && Im(alpha_i) > 0`, so an upper-half-plane root of
    /// the restriction lifts to a point in the open product.
    Line { lambda: Vec<Scalar>, alpha: Vec<Scalar>, root: RootRegion },
}

impl serde::Serialize for Witness {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut m = s.serialize_map(None)?;
        match self {
            Witness::Point(pt) => {
                let v: Vec<String> = pt.iter().map(Scalar::to_canonical_string).collect();
                m.serialize_entry("point", &v)?;
            }
            Witness::Line { lambda, alpha, root } => {
                let l: Vec<String> = lambda.iter().map(Scalar::to_canonical_string).collect();
                let a: Vec<String> = alpha.iter().map(Scalar::to_canonical_string).collect();
                m.serialize_entry("lambda", &l)?;
                m.serialize_entry("alpha", &a)?;
                m.serialize_entry("root", root)?;
            }
        }
        m.end()
    }
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct MultiVerdict {
    pub status: MultiStatus,
    pub witness: Option<Witness>,
    pub samples: u32,
    pub seed: u64,
}

impl MultiVerdict {
    pub fn is_refuted(&self) -> bool {
        self.status == MultiStatus::RefutedWithWitness
    }

    pub fn not_refuted(&self) -> bool {
        !self.is_refuted()
    }

    pub fn passes(&self) -> bool {
        matches!(self.status, MultiStatus::ExactStable | MultiStatus::PassedSamples)
    }

    pub fn is_exact(&self) -> bool {
        matches!(
            self.status,
            MultiStatus::ExactStable | MultiStatus::RefutedWithWitness | MultiStatus::ZeroPolynomial
        )
    }

    fn refuted(witness: Witness, samples: u32, seed: u64) -> Self {
        MultiVerdict {
            status: MultiStatus::RefutedWithWitness,
            witness: Some(witness),
            samples,
            seed,
        }
    }
}

/// Re-verify a refutation certificate in exact arithmetic.
pub fn verify_witness(f: &MPoly, w: &Witness) -> bool {
    match w {
        Witness::Point(pt) => {
            pt.len() == f.nvars()
                && pt.iter().all(|c| c.im.is_positive())
                && f.evaluate(pt).is_ok_and(|v| v.is_zero())
        }
        Witness::Line { lambda, alpha, root } => {
            if lambda.len() != f.nvars() || alpha.len() != f.nvars() {
                return false;
            }
            for (l, a) in lambda.iter().zip(alpha) {
                if !l.is_real() || l.re.is_negative() {
                    return false;
                }
                let ok = if l.re.is_positive() {
                    !a.im.is_negative()
                } else {
                    a.im.is_positive()
                };
                if !ok {
                    return false;
                }
            }
            match f.restrict_line(lambda, alpha) {
                Ok(r) => !r.is_zero() && verify_root_region(&r, root),
                Err(_) => false,
            }
        }
    }
}

/// Outcome of testing one exact restriction.
enum LineOutcome {
    Fine,
    Refuted(Witness),
}

/// Decide the univariate restriction exactly and build a witness on
/// refutation. A restriction that vanishes identically yields the exact
/// point at parameter `t = i`.
fn test_restriction(
    f: &MPoly,
    lambda: &[Scalar],
    alpha: &[Scalar],
) -> Result<LineOutcome> {
    let r = f.restrict_line(lambda, alpha)?;
    if r.is_zero() {
        let point: Vec<Scalar> = lambda
            .iter()
            .zip(alpha)
            .map(|(l, a)| &(l * &Scalar::i()) + a)
            .collect();
        return Ok(LineOutcome::Refuted(Witness::Point(point)));
    }
    let v = is_stable_uni(&r);
    if v.status == UniStatus::NotStable {
        let root = v.witness.expect("NotStable carries a witness");
        // Prefer an exact point when the root is exact.
        if let RootRegion::ExactRoot(t0) = &root {
            let point: Vec<Scalar> = lambda
                .iter()
                .zip(alpha)
                .map(|(l, a)| &(l * t0) + a)
                .collect();
            if point.iter().all(|c| c.im.is_positive()) {
                return Ok(LineOutcome::Refuted(Witness::Point(point)));
            }
        }
        return Ok(LineOutcome::Refuted(Witness::Line {
            lambda: lambda.to_vec(),
            alpha: alpha.to_vec(),
            root,
        }));
    }
    Ok(LineOutcome::Fine)
}

/// Deterministic probe points: diagonal and alternating patterns of a few
/// fixed upper-half-plane scalars.
fn probe_points(n: usize) -> Vec<Vec<Scalar>> {
    let base = [
        Scalar::i(),
        Scalar::complex(0, 2),
        Scalar::new(rat(0, 1), rat(1, 2)),
        Scalar::complex(1, 1),
        Scalar::complex(-1, 1),
        Scalar::new(rat(1, 2), rat(1, 2)),
    ];
    let mut out: Vec<Vec<Scalar>> = base.iter().map(|c| vec![c.clone(); n]).collect();
    if n >= 2 {
        let a: Vec<Scalar> = (0..n)
            .map(|k| if k % 2 == 0 { Scalar::i() } else { Scalar::complex(0, 2) })
            .collect();
        let b: Vec<Scalar> = (0..n)
            .map(|k| if k % 2 == 1 { Scalar::i() } else { Scalar::complex(0, 2) })
            .collect();
        out.push(a);
        out.push(b);
    }
    out
}

const SWEEP_L: [(i64, i64); 5] = [(1, 1), (1, 2), (2, 1), (1, 3), (3, 1)];
const SWEEP_A: [(i64, i64); 7] =
    [(0, 1), (1, 1), (-1, 1), (1, 2), (-1, 2), (2, 1), (-2, 1)];

/// Deterministic low-discrepancy line sweep; the first line is the plain
/// diagonal `z = (t, ..., t)`.
fn sweep_lines(n: usize) -> Vec<(Vec<Rat>, Vec<Rat>)> {
    let mut out = Vec::new();
    out.push((vec![rat(1, 1); n], vec![rat(0, 1); n]));
    for s in 1..8usize {
        let lambda: Vec<Rat> = (0..n)
            .map(|i| {
                let (p, q) = SWEEP_L[(s + i) % SWEEP_L.len()];
                rat(p, q)
            })
            .collect();
        let alpha: Vec<Rat> = (0..n)
            .map(|i| {
                let (p, q) = SWEEP_A[(s + 2 * i) % SWEEP_A.len()];
                rat(p, q)
            })
            .collect();
        out.push((lambda, alpha));
    }
    out
}

/// Exact stability check of a polynomial that uses at most one variable.
fn check_stability_univariate_case(f: &MPoly, var: usize, samples: u32, seed: u64) -> MultiVerdict {
    let n = f.nvars();
    let u = to_univariate(f, var);
    let v = is_stable_uni(&u);
    match v.status {
        UniStatus::Stable => MultiVerdict {
            status: MultiStatus::ExactStable,
            witness: None,
            samples,
            seed,
        },
        UniStatus::ZeroPolynomial => MultiVerdict {
            status: MultiStatus::ZeroPolynomial,
            witness: None,
            samples,
            seed,
        },
        UniStatus::NotStable => {
            let root = v.witness.expect("witness");
            let lambda: Vec<Scalar> = (0..n)
                .map(|i| if i == var { Scalar::one() } else { Scalar::zero() })
                .collect();
            let alpha: Vec<Scalar> = (0..n)
                .map(|i| if i == var { Scalar::zero() } else { Scalar::i() })
                .collect();
            let w = match &root {
                RootRegion::ExactRoot(t0) => {
                    let point: Vec<Scalar> = (0..n)
                        .map(|i| if i == var { t0.clone() } else { Scalar::i() })
                        .collect();
                    Witness::Point(point)
                }
                _ => Witness::Line { lambda, alpha, root },
            };
            MultiVerdict::refuted(w, samples, seed)
        }
    }
}

/// Collapse a polynomial that uses only variable `var` to a univariate.
fn to_univariate(f: &MPoly, var: usize) -> UPoly {
    let deg = f.deg_var(var).unwrap_or(0) as usize;
    let mut coeffs = vec![Scalar::zero(); deg + 1];
    for (e, c) in f.terms() {
        coeffs[e.0[var] as usize] = c.clone();
    }
    UPoly::from_coeffs(coeffs)
}

/// Test stability of `f` on the open upper half-plane product.
///
/// The zero polynomial and (effectively) univariate inputs are decided
/// exactly; otherwise refutation-exact sampling runs: probe points,
/// one-variable sections anchored at upper-half-plane Gaussian rationals,
/// and real line restrictions.
pub fn check_stability(f: &MPoly, cfg: &SamplingConfig) -> MultiVerdict {
    let n = f.nvars();
    let seed = cfg.seed;
    if f.is_zero() {
        return MultiVerdict {
            status: MultiStatus::ZeroPolynomial,
            witness: None,
            samples: 0,
            seed,
        };
    }
    let used = f.used_vars();
    if used.is_empty() {
        // nonzero constant
        return MultiVerdict { status: MultiStatus::ExactStable, witness: None, samples: 0, seed };
    }
    if used.len() == 1 {
        return check_stability_univariate_case(f, used[0], 1, seed);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut samples = 0u32;
    let budget = cfg.sample_count.max(16);

    // Phase 1: deterministic probe points.
    for pt in probe_points(n) {
        samples += 1;
        if f.evaluate(&pt).expect("dimension").is_zero() {
            return MultiVerdict::refuted(Witness::Point(pt), samples, seed);
        }
    }

    // Phase 2: sections. Fixing all but one variable keeps refutations
    // exact even where real lines cannot reach.
    let per_var = ((budget / 4) / n as u32).max(1);
    for j in &used {
        for k in 0..=per_var {
            let lambda: Vec<Scalar> = (0..n)
                .map(|i| if i == *j { Scalar::one() } else { Scalar::zero() })
                .collect();
            let alpha: Vec<Scalar> = (0..n)
                .map(|i| {
                    if i == *j {
                        Scalar::zero()
                    } else if k == 0 {
                        Scalar::i()
                    } else {
                        rand_upper_scalar(&mut rng, cfg.height)
                    }
                })
                .collect();
            samples += 1;
            if let LineOutcome::Refuted(w) =
                test_restriction(f, &lambda, &alpha).expect("section")
            {
                return MultiVerdict::refuted(w, samples, seed);
            }
        }
    }

    // Phase 3: deterministic line sweep, then seeded lines.
    for (lambda, alpha) in sweep_lines(n) {
        samples += 1;
        let ls: Vec<Scalar> = lambda.into_iter().map(Scalar::from_rat).collect();
        let als: Vec<Scalar> = alpha.into_iter().map(Scalar::from_rat).collect();
        if let LineOutcome::Refuted(w) = test_restriction(f, &ls, &als).expect("sweep") {
            return MultiVerdict::refuted(w, samples, seed);
        }
    }
    while samples < budget {
        samples += 1;
        let lambda: Vec<Scalar> = (0..n)
            .map(|_| Scalar::from_rat(rand_pos_rat(&mut rng, cfg.height)))
            .collect();
        let alpha: Vec<Scalar> = (0..n)
            .map(|_| Scalar::from_rat(rand_sym_rat(&mut rng, cfg.height)))
            .collect();
        if let LineOutcome::Refuted(w) = test_restriction(f, &lambda, &alpha).expect("line") {
            return MultiVerdict::refuted(w, samples, seed);
        }
    }

    MultiVerdict { status: MultiStatus::PassedSamples, witness: None, samples, seed }
}

/// Real stability: all-real coefficients first, then `check_stability`.
pub fn check_real_stability(f: &MPoly, cfg: &SamplingConfig) -> Result<MultiVerdict> {
    if let Some((mono, coeff)) = f.first_non_real() {
        return Err(Error::NonRealCoefficient(
            format!("{:?}", mono),
            coeff.to_canonical_string(),
        ));
    }
    Ok(check_stability(f, cfg))
}

/// The `j`-th Wronskian `W_j[g, f] = dg/dz_j * f - g * df/dz_j`.
pub fn wronskian_j(g: &MPoly, f: &MPoly, j: usize) -> Result<MPoly> {
    if g.nvars() != f.nvars() {
        return Err(Error::DimensionMismatch(g.nvars(), f.nvars()));
    }
    let a = g.partial_derivative(j)?.mul(f)?;
    let b = g.mul(&f.partial_derivative(j)?)?;
    a.sub(&b)
}

/// Decide proper position `f << g`, i.e. stability of `g + i f`.
///
/// In strict mode, real nonproportional pairs are cross-checked through
/// the equivalent `(n+1)`-variable criterion `g + z_{n+1} f` real stable;
/// a refutation on either route transports to the other exactly, and an
/// untransportable disagreement raises an internal-inconsistency error.
pub fn proper_position_multi(
    f: &MPoly,
    g: &MPoly,
    cfg: &SamplingConfig,
) -> Result<MultiVerdict> {
    if f.nvars() != g.nvars() {
        return Err(Error::DimensionMismatch(f.nvars(), g.nvars()));
    }
    let n = f.nvars();
    let h = g.add(&f.scalar_mul(&Scalar::i()))?;
    let direct = check_stability(&h, cfg);

    let cross_applies = cfg.strict
        && f.is_real()
        && g.is_real()
        && !f.is_zero()
        && !g.is_zero()
        && !proportional(f, g);
    if cross_applies {
        let fe = f.embed(n + 1, 0);
        let ge = g.embed(n + 1, 0);
        let pencil = ge.add(&fe.mul(&MPoly::var(n + 1, n))?)?;
        let lifted = check_stability(&pencil, cfg);
        match (&direct.status, &lifted.status) {
            (MultiStatus::RefutedWithWitness, _) => {
                // Transport: a zero of g + i f at zeta gives the zero
                // (zeta, i) of g + z_{n+1} f.
                if let Some(Witness::Point(pt)) = &direct.witness {
                    let mut q = pt.clone();
                    q.push(Scalar::i());
                    if !verify_witness(&pencil, &Witness::Point(q)) {
                        return Err(Error::Internal(
                            "proper-position witness failed to transport".into(),
                        ));
                    }
                }
            }
            (_, MultiStatus::RefutedWithWitness) => {
                return Err(Error::Internal(
                    "pencil route refuted while direct route passed samples".into(),
                ));
            }
            _ => {}
        }
    }
    Ok(direct)
}

fn proportional(f: &MPoly, g: &MPoly) -> bool {
    match (f.leading_term(), g.leading_term()) {
        (Some((ef, cf)), Some((eg, cg))) => {
            if ef != eg {
                return false;
            }
            let c = cg / cf;
            f.scalar_mul(&c) == *g
        }
        _ => false,
    }
}

/// Report of the pencil characterization of proper position: samples of
/// `alpha f + beta g` for real stability plus exact Wronskian signs.
#[derive(Clone, Debug, serde::Serialize)]
pub struct PencilReport {
    pub pencil_samples: u32,
    pub pencil_failures: u32,
    /// Exact global sign of `W_j[g, f]` on the reals, per variable, when
    /// the Wronskian restricted to sampled real lines stays one-signed;
    /// multivariate sign classification is sampled on lines.
    pub wronskian_nonneg: Vec<bool>,
    pub wronskian_nonpos: Vec<bool>,
    pub pp_f_before_g: MultiStatus,
    pub pp_g_before_f: MultiStatus,
    pub consistent: bool,
}

/// Sample the pencil `{alpha f + beta g}` for real stability and evaluate
/// the Wronskian sign claims; reports consistency with the proper-position
/// verdicts.
pub fn hko_pencil_check(f: &MPoly, g: &MPoly, cfg: &SamplingConfig) -> Result<PencilReport> {
    if !f.is_real() || !g.is_real() {
        return Err(Error::NotReal("pencil check needs real inputs".into()));
    }
    if f.nvars() != g.nvars() {
        return Err(Error::DimensionMismatch(f.nvars(), g.nvars()));
    }
    let n = f.nvars();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x9E3779B97F4A7C15);
    let mut fixed = vec![
        (rat(1, 1), rat(0, 1)),
        (rat(0, 1), rat(1, 1)),
        (rat(1, 1), rat(1, 1)),
        (rat(1, 1), rat(-1, 1)),
        (rat(2, 1), rat(1, 1)),
    ];
    let extra = (cfg.sample_count / 8).max(3);
    for _ in 0..extra {
        fixed.push((rand_sym_rat(&mut rng, cfg.height), rand_sym_rat(&mut rng, cfg.height)));
    }
    let mut failures = 0u32;
    let mut samples = 0u32;
    let light = SamplingConfig { sample_count: cfg.sample_count / 4, ..cfg.clone() };
    for (a, b) in &fixed {
        let p = f
            .scalar_mul(&Scalar::from_rat(a.clone()))
            .add(&g.scalar_mul(&Scalar::from_rat(b.clone())))?;
        samples += 1;
        if p.is_zero() {
            continue;
        }
        if check_stability(&p, &light).is_refuted() {
            failures += 1;
        }
    }

    // Wronskian signs per variable, decided exactly on sampled real lines.
    let mut nonneg = Vec::new();
    let mut nonpos = Vec::new();
    for j in 0..n {
        let w = wronskian_j(g, f, j)?;
        let (mut can_nonneg, mut can_nonpos) = (true, true);
        if w.is_zero() {
            nonneg.push(true);
            nonpos.push(true);
            continue;
        }
        for (lambda, alpha) in sweep_lines(n) {
            let r = w.restrict_to_line(&lambda, &alpha)?;
            if r.is_zero() {
                continue;
            }
            match sign_on_reals(&r) {
                SignOnR::NonNegative => can_nonpos = false,
                SignOnR::NonPositive => can_nonneg = false,
                SignOnR::Indefinite => {
                    can_nonneg = false;
                    can_nonpos = false;
                }
                SignOnR::Zero => {}
            }
        }
        nonneg.push(can_nonneg);
        nonpos.push(can_nonpos);
    }

    let pp_fg = proper_position_multi(f, g, cfg)?.status;
    let pp_gf = proper_position_multi(g, f, cfg)?.status;
    // f << g forces W_j[g, f] >= 0 everywhere; g << f forces <= 0.
    let mut consistent = true;
    if pp_fg == MultiStatus::PassedSamples || pp_fg == MultiStatus::ExactStable {
        consistent &= nonneg.iter().all(|&b| b);
    }
    if pp_gf == MultiStatus::PassedSamples || pp_gf == MultiStatus::ExactStable {
        consistent &= nonpos.iter().all(|&b| b);
    }
    if (pp_fg != MultiStatus::RefutedWithWitness || pp_gf != MultiStatus::RefutedWithWitness)
        && failures > 0
    {
        consistent = false;
    }
    Ok(PencilReport {
        pencil_samples: samples,
        pencil_failures: failures,
        wronskian_nonneg: nonneg,
        wronskian_nonpos: nonpos,
        pp_f_before_g: pp_fg,
        pp_g_before_f: pp_gf,
        consistent,
    })
}

/// Apply the degree-one contraction `P - dQ/dz_j` of a stable pencil
/// `P + w Q`: the output is identically zero or stable.
pub fn lieb_sokal(
    p: &MPoly,
    q: &MPoly,
    j: usize,
    cfg: &SamplingConfig,
) -> Result<(MPoly, MultiVerdict)> {
    if p.nvars() != q.nvars() {
        return Err(Error::DimensionMismatch(p.nvars(), q.nvars()));
    }
    let n = p.nvars();
    if j >= n {
        return Err(Error::BadVariableIndex(j, n));
    }
    if p.deg_var(j).unwrap_or(0) > 1 || q.deg_var(j).unwrap_or(0) > 1 {
        return Err(Error::LiebSokalDegree);
    }
    let pencil = p.embed(n + 1, 0).add(&q.embed(n + 1, 0).mul(&MPoly::var(n + 1, n))?)?;
    let pre = check_stability(&pencil, cfg);
    if pre.is_refuted() {
        return Err(Error::Precondition(
            "the pencil P + wQ is not stable".into(),
        ));
    }
    let out = p.sub(&q.partial_derivative(j)?)?;
    let verdict = check_stability(&out, cfg);
    Ok((out, verdict))
}

/// Build the guaranteed-stable perturbation `(z + W)^kappa + eps * f`.
///
/// `W` must lie strictly in the open upper half-plane product. When `eps`
/// is not supplied it is computed from the expansion of `f` in powers of
/// `z + W`: with `Y = Im W` and rational coefficient bounds `|c|` mapped
/// to `|re| + |im|`, the choice `eps = 1 / (2 sum |c_alpha| Y^{alpha -
/// kappa})` keeps the perturbation strictly below the base term on the
/// closed half-plane product.
pub fn generate_stable(
    kappa: &ExpVec,
    w: &[Scalar],
    f: &MPoly,
    eps: Option<Rat>,
) -> Result<(MPoly, Rat)> {
    let n = kappa.len();
    if w.len() != n || f.nvars() != n {
        return Err(Error::DimensionMismatch(w.len(), n));
    }
    for c in w {
        if !c.im.is_positive() {
            return Err(Error::NotInUpperHalfPlane(c.to_canonical_string()));
        }
    }
    if let Some(d) = f.deg_vector() {
        if !d.leq(kappa) {
            for i in 0..n {
                if d.0[i] > kappa.0[i] {
                    return Err(Error::DegreeOverflow(d.0[i], kappa.0[i], i));
                }
            }
        }
    }
    let mut base = MPoly::one(n);
    for i in 0..n {
        let lin = MPoly::var(n, i).add(&MPoly::constant(n, w[i].clone()))?;
        base = base.mul(&lin.pow(kappa.0[i]))?;
    }
    if f.is_zero() {
        return Ok((base, Rat::zero()));
    }
    let eps = match eps {
        Some(e) => e,
        None => {
            // Expand f in powers of (z + W): g(u) = f(u - W).
            let neg_w: Vec<Scalar> = w.iter().map(|c| -c).collect();
            let expansion = f.translate(&neg_w)?;
            let mut total = Rat::zero();
            for (alpha, c) in expansion.terms() {
                let mut scale = Rat::one();
                for i in 0..n {
                    let y = &w[i].im;
                    // Y^(alpha_i - kappa_i) with alpha <= kappa.
                    let e = kappa.0[i] - alpha.0[i];
                    for _ in 0..e {
                        scale /= y;
                    }
                }
                total += c.abs_bound() * scale;
            }
            Rat::one() / (rat(2, 1) * total)
        }
    };
    let result = base.add(&f.scalar_mul(&Scalar::from_rat(eps.clone())))?;
    Ok((result, eps))
}

/// Is `f` a nonzero complex multiple of a real stable polynomial?
#[derive(Clone, Debug, serde::Serialize)]
pub enum RealMultipleOutcome {
    NotRealMultiple { monomial: ExpVec, coefficient: Scalar },
    RealMultiple { scale: Scalar, stability: MultiVerdict },
}

impl RealMultipleOutcome {
    pub fn holds(&self) -> bool {
        matches!(self, RealMultipleOutcome::RealMultiple { stability, .. } if stability.passes())
    }
}

pub fn is_complex_multiple_of_real_stable(
    f: &MPoly,
    cfg: &SamplingConfig,
) -> Result<RealMultipleOutcome> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let (_, lead) = f.leading_term().map(|(e, c)| (e.clone(), c.clone())).unwrap();
    let normalized = f.scalar_mul(&lead.inv());
    if let Some((mono, coeff)) = normalized.first_non_real() {
        return Ok(RealMultipleOutcome::NotRealMultiple { monomial: mono, coefficient: coeff });
    }
    let stability = check_stability(&normalized, cfg);
    Ok(RealMultipleOutcome::RealMultiple { scale: lead, stability })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_mpoly;

    fn poly(s: &str) -> MPoly {
        parse_mpoly(s).unwrap().0
    }

    fn poly_n(s: &str, n: usize) -> MPoly {
        crate::parse::parse_mpoly_n(s, n).unwrap()
    }

    #[test]
    fn stability_examples() {
        let cfg = SamplingConfig::default();
        // z1 + z2 is stable
        let v = check_stability(&poly("z1 + z2"), &cfg);
        assert_eq!(v.status, MultiStatus::PassedSamples);
        // z1 z2 + 1 vanishes at (i, i), found by the first probe
        let f = poly("z1*z2 + 1");
        let v = check_stability(&f, &cfg);
        assert_eq!(v.status, MultiStatus::RefutedWithWitness);
        match v.witness.as_ref().unwrap() {
            Witness::Point(pt) => {
                assert_eq!(pt, &vec![Scalar::i(), Scalar::i()]);
            }
            w => panic!("expected point witness, got {:?}", w),
        }
        assert!(verify_witness(&f, v.witness.as_ref().unwrap()));
        // z1 z2 - 1 is stable
        let v = check_stability(&poly("z1*z2 - 1"), &cfg);
        assert_eq!(v.status, MultiStatus::PassedSamples);
        // zero polynomial
        let v = check_stability(&MPoly::zero(2), &cfg);
        assert_eq!(v.status, MultiStatus::ZeroPolynomial);
        // univariate reductions are exact
        let v = check_stability(&poly("z1 + i"), &cfg);
        assert_eq!(v.status, MultiStatus::ExactStable);
        let f = poly_n("z1 - i", 2);
        let v = check_stability(&f, &cfg);
        assert_eq!(v.status, MultiStatus::RefutedWithWitness);
        assert!(verify_witness(&f, v.witness.as_ref().unwrap()));
    }

    #[test]
    fn irrational_zero_locus_is_refuted_by_sections() {
        // w^2 + 2zw - z^2 vanishes only on irrational lines, yet fixing
        // z = i gives an exactly refutable univariate section.
        let f = poly("z2^2 + 2*z1*z2 - z1^2");
        let v = check_stability(&f, &SamplingConfig::default());
        assert_eq!(v.status, MultiStatus::RefutedWithWitness);
        assert!(verify_witness(&f, v.witness.as_ref().unwrap()));
    }

    #[test]
    fn determinism() {
        let f = poly("z1^2*z2 + z1*z2 + 3");
        let cfg = SamplingConfig::default();
        let a = check_stability(&f, &cfg);
        let b = check_stability(&f, &cfg);
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }

    #[test]
    fn wronskian_examples() {
        // g=z1, f=z2, j=0 -> z2
        let g = poly_n("z1", 2);
        let f = poly_n("z2", 2);
        assert_eq!(wronskian_j(&g, &f, 0).unwrap(), poly_n("z2", 2));
        // antisymmetry diagonal
        assert!(wronskian_j(&g, &g, 0).unwrap().is_zero());
        // g=1, f=z1 -> -1
        let one = MPoly::one(1);
        let z = poly("z1");
        assert_eq!(wronskian_j(&one, &z, 0).unwrap(), MPoly::constant(1, Scalar::from_int(-1)));
    }

    #[test]
    fn proper_position_examples() {
        let cfg = SamplingConfig::default();
        // 1 << z1 + z2 (z1 + z2 + i stable)
        let f = poly_n("1", 2);
        let g = poly("z1 + z2");
        assert!(proper_position_multi(&f, &g, &cfg).unwrap().passes());
        // z1 + z2 << 1 fails: 1 + i(z1+z2) vanishes at (i/2, i/2)
        let v = proper_position_multi(&g, &f, &cfg).unwrap();
        assert!(v.is_refuted());
        assert!(verify_witness(
            &f.add(&g.scalar_mul(&Scalar::i())).unwrap(),
            v.witness.as_ref().unwrap()
        ));
        // proportional pair
        let z = poly("z1");
        assert!(proper_position_multi(&z, &z, &cfg).unwrap().passes());
        // strict-mode cross-check on a real pair
        let strict = SamplingConfig { strict: true, ..cfg.clone() };
        assert!(proper_position_multi(&f, &g, &strict).unwrap().passes());
    }

    #[test]
    fn lieb_sokal_examples() {
        let cfg = SamplingConfig::default();
        // P = -1, Q = z1 (from z1 w - 1 stable): P - dQ/dz1 = -2,
        // a stable constant.
        let p = MPoly::constant(1, Scalar::from_int(-1));
        let q = poly("z1");
        let (out, v) = lieb_sokal(&p, &q, 0, &cfg).unwrap();
        assert_eq!(out, MPoly::constant(1, Scalar::from_int(-2)));
        assert!(v.passes());
        // P = b(z1 + a), Q = z1 + a from (z1 + a)(w + b)
        let a = Scalar::from_int(2);
        let b = Scalar::from_int(3);
        let base = poly("z1").add(&MPoly::constant(1, a)).unwrap();
        let p = base.scalar_mul(&b);
        let (out, v) = lieb_sokal(&p, &base, 0, &cfg).unwrap();
        // b z1 + ab - 1 = 3 z1 + 5
        assert_eq!(out, poly("3*z1 + 5"));
        assert!(v.passes());
        // degree violation
        let p2 = poly("z1^2");
        assert!(matches!(lieb_sokal(&p2, &q, 0, &cfg), Err(Error::LiebSokalDegree)));
        // P = z2, Q = 1: derivative term vanishes
        let p = poly_n("z2", 2);
        let q = MPoly::one(2);
        let (out, _) = lieb_sokal(&p, &q, 0, &cfg).unwrap();
        assert_eq!(out, poly_n("z2", 2));
    }

    #[test]
    fn generate_stable_examples() {
        // f = 0 -> (z + i)^2
        let kappa = ExpVec(vec![2]);
        let (g, eps) = generate_stable(&kappa, &[Scalar::i()], &MPoly::zero(1), None).unwrap();
        assert_eq!(g, poly("z1^2 + 2*i*z1 - 1"));
        assert!(eps.is_zero());
        // kappa=(1), W=(i), f=1 -> eps = 1/2 and z + i + 1/2 stable
        let kappa = ExpVec(vec![1]);
        let (g, eps) = generate_stable(&kappa, &[Scalar::i()], &MPoly::one(1), None).unwrap();
        assert_eq!(eps, rat(1, 2));
        assert_eq!(g, poly("z1 + (1/2+i)"));
        assert!(check_stability(&g, &SamplingConfig::default()).passes());
        // kappa=(1,1), W=(i,i), f=z1 z2
        let kappa = ExpVec(vec![1, 1]);
        let f = poly("z1*z2");
        let (g, _) =
            generate_stable(&kappa, &[Scalar::i(), Scalar::i()], &f, None).unwrap();
        assert!(check_stability(&g, &SamplingConfig::default()).passes());
        // W not in the upper half-plane
        assert!(generate_stable(&kappa, &[Scalar::i(), Scalar::one()], &f, None).is_err());
    }

    #[test]
    fn complex_multiple_examples() {
        let cfg = SamplingConfig::default();
        // (2+i)(z1+z2)
        let f = poly("z1 + z2").scalar_mul(&Scalar::complex(2, 1));
        assert!(is_complex_multiple_of_real_stable(&f, &cfg).unwrap().holds());
        // z + i is not a complex multiple of a real polynomial
        let f = poly("z1 + i");
        assert!(!is_complex_multiple_of_real_stable(&f, &cfg).unwrap().holds());
        // i (z^2 - 1)
        let f = poly("z1^2 - 1").scalar_mul(&Scalar::i());
        assert!(is_complex_multiple_of_real_stable(&f, &cfg).unwrap().holds());
    }

    #[test]
    fn hko_examples() {
        let cfg = SamplingConfig::default();
        // f=1, g=t: all pencil members real rooted, 1 << t
        let f = MPoly::one(1);
        let g = poly("z1");
        let r = hko_pencil_check(&f, &g, &cfg).unwrap();
        assert_eq!(r.pencil_failures, 0);
        assert!(r.consistent);
        // f=t, g=t^2-1: W[t,t^2-1] computed symbolically = -t^2-1 <= 0,
        // i.e. W_1[g, f] = +t^2+1 >= 0 with f << g.
        let f = poly("z1");
        let g = poly("z1^2 - 1");
        let w = wronskian_j(&g, &f, 0).unwrap();
        assert_eq!(w, poly("z1^2 + 1"));
        let r = hko_pencil_check(&f, &g, &cfg).unwrap();
        assert_eq!(r.pencil_failures, 0);
        assert!(r.wronskian_nonneg[0]);
        assert!(r.consistent);
        // f=t^2+1 (not real rooted): pencil contains an unstable member
        let f = poly("z1^2 + 1");
        let g = MPoly::one(1);
        let r = hko_pencil_check(&f, &g, &cfg).unwrap();
        assert!(r.pencil_failures > 0);
    }

    #[test]
    fn mutual_proper_position_implies_proportional() {
        // For real stable pairs, passing in both directions can only
        // happen for constant multiples.
        let cfg = SamplingConfig::default();
        let f = poly("z1 + 1");
        let g = f.scalar_mul(&Scalar::from_int(3));
        assert!(proper_position_multi(&f, &g, &cfg).unwrap().passes());
        assert!(proper_position_multi(&g, &f, &cfg).unwrap().passes());
        assert!(proportional(&f, &g));
        // a non-proportional pair fails at least one direction
        let h = poly("z1");
        let fwd = proper_position_multi(&h, &f, &cfg).unwrap();
        let bwd = proper_position_multi(&f, &h, &cfg).unwrap();
        assert!(fwd.is_refuted() || bwd.is_refuted());
        assert!(!proportional(&f, &h));
    }

    #[test]
    fn refutation_witnesses_reverify() {
        use crate::gen;
        use rand::SeedableRng;
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let cfg = SamplingConfig::default();
        let mut refuted = 0;
        for _ in 0..12 {
            let n = 2 + (refuted as usize % 2);
            // stable product times one factor with a root in the upper
            // half-plane: sum a_i z_i + c with Im(c) < 0
            let good = gen::real_stable_linear_product(&mut rng, n, 2, 4);
            let mut bad = MPoly::constant(n, gen::rand_lower_scalar(&mut rng, 4));
            for i in 0..n {
                bad = bad
                    .add(&MPoly::var(n, i).scalar_mul(&Scalar::from_rat(gen::rand_pos_rat(&mut rng, 4))))
                    .unwrap();
            }
            let f = good.mul(&bad).unwrap();
            let v = check_stability(&f, &cfg);
            assert!(v.is_refuted(), "constructed unstable input must be refuted: {:?}", f);
            assert!(verify_witness(&f, v.witness.as_ref().unwrap()));
            refuted += 1;
        }
        assert_eq!(refuted, 12);
    }

    #[test]
    fn krein_cross_checks() {
        // Two redundant characterizations of proper position, used here
        // as cross-checks of the implemented routes: the modulus
        // inequality |h(z)| >= |h(conj z)| on upper points for stable
        // h = g + i f, and proper position of every real-line
        // restriction pair.
        use crate::gen;
        use rand::SeedableRng;
        let f = poly_n("1", 2);
        let g = poly("z1 + z2");
        let h = g.add(&f.scalar_mul(&Scalar::i())).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(67);
        for _ in 0..20 {
            let z: Vec<Scalar> = (0..2).map(|_| gen::rand_upper_scalar(&mut rng, 8)).collect();
            let zbar: Vec<Scalar> = z.iter().map(Scalar::conj).collect();
            let hv = h.evaluate(&z).unwrap().norm_sqr();
            let hb = h.evaluate(&zbar).unwrap().norm_sqr();
            assert!(hv >= hb, "modulus inequality failed at {:?}", z);
        }
        for _ in 0..10 {
            let lambda = vec![gen::rand_pos_rat(&mut rng, 8), gen::rand_pos_rat(&mut rng, 8)];
            let alpha = vec![gen::rand_sym_rat(&mut rng, 8), gen::rand_sym_rat(&mut rng, 8)];
            let fr = f.restrict_to_line(&lambda, &alpha).unwrap();
            let gr = g.restrict_to_line(&lambda, &alpha).unwrap();
            assert!(crate::uni::proper_position_uni(&fr, &gr).unwrap());
        }
    }

    #[test]
    fn closure_suite_on_stable_inputs() {
        use crate::gen;
        use rand::SeedableRng;
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let cfg = SamplingConfig { sample_count: 24, ..Default::default() };
        for _ in 0..6 {
            let f = gen::real_stable_linear_product(&mut rng, 2, 2, 4);
            assert!(check_stability(&f, &cfg).passes());
            // specialize
            let s = f.specialize(0, &Scalar::from_int(1)).unwrap();
            if !s.is_zero() {
                assert!(check_stability(&s, &cfg).passes());
            }
            // scale
            let s = f.scale_var(0, &rat(3, 2)).unwrap();
            assert!(check_stability(&s, &cfg).passes());
            // invert
            let s = f.invert_var(0).unwrap();
            assert!(check_stability(&s, &cfg).passes());
            // identify
            let s = f.identify_vars(0, 1).unwrap();
            assert!(check_stability(&s, &cfg).passes());
        }
    }
}
