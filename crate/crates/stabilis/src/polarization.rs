//! Polarization to multi-affine polynomials and back.
//!
//! For a degree bound `kappa`, each variable `z_i` is split into a block
//! of `kappa_i` fresh variables `z_{i1}, ..., z_{i kappa_i}`; the
//! polarization of `z^alpha` is the block-symmetric multi-affine
//! polynomial `binom(kappa, alpha)^{-1} prod_i E_{alpha_i}(block i)`
//! built from elementary symmetric polynomials. Projection substitutes
//! `z_{ij} -> z_i` and is a left inverse of polarization.
//!
//! Blocks are flattened into one ordinary polynomial ring so every
//! stability routine applies unchanged.

use crate::error::{Error, Result};
use crate::mpoly::{MPoly, VarNames};
use crate::multi::{check_stability, verify_witness, MultiVerdict, SamplingConfig, Witness};
use crate::multiindex::{multi_binom, ExpVec};
use crate::operator::{algebraic_symbol, LinearOperatorSpec};
use crate::scalar::Scalar;
use crate::uni::RootRegion;
use crate::upoly::UPoly;
use num_traits::Zero;

/// Index map between block coordinates `(i, j)` and flat positions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolarizedVars {
    sizes: Vec<u32>,
    offsets: Vec<usize>,
    total: usize,
}

impl PolarizedVars {
    pub fn new(kappa: &ExpVec) -> Self {
        let mut offsets = Vec::with_capacity(kappa.len());
        let mut total = 0usize;
        for &k in &kappa.0 {
            offsets.push(total);
            total += k as usize;
        }
        PolarizedVars { sizes: kappa.0.clone(), offsets, total }
    }

    pub fn total(&self) -> usize {
        self.total
    }

    pub fn blocks(&self) -> usize {
        self.sizes.len()
    }

    pub fn block_size(&self, i: usize) -> u32 {
        self.sizes[i]
    }

    /// Flat position of `z_{i j}` (both zero-based; `j < kappa_i`).
    pub fn position(&self, i: usize, j: usize) -> usize {
        debug_assert!(j < self.sizes[i] as usize);
        self.offsets[i] + j
    }

    /// Block positions of variable `i`.
    pub fn block(&self, i: usize) -> std::ops::Range<usize> {
        self.offsets[i]..self.offsets[i] + self.sizes[i] as usize
    }

    /// Variable names `z1_1, z1_2, ..., zn_kn`.
    pub fn names(&self, prefix: &str) -> VarNames {
        VarNames::blocks(prefix, &self.sizes)
    }
}

/// All elementary symmetric polynomials `E_0, ..., E_m` of the variables
/// at `positions` inside a `total`-variable ring.
fn elementary_symmetric_all(total: usize, positions: &[usize]) -> Vec<MPoly> {
    let m = positions.len();
    let mut es = vec![MPoly::zero(total); m + 1];
    es[0] = MPoly::one(total);
    for (idx, &pos) in positions.iter().enumerate() {
        let x = MPoly::var(total, pos);
        // Update in place from the top down so each variable enters once.
        for k in (1..=idx + 1).rev() {
            let lifted = es[k - 1].mul(&x).unwrap();
            es[k] = es[k].add(&lifted).unwrap();
        }
    }
    es
}

/// Polarize `f` with respect to the degree bound `kappa`: the unique
/// block-symmetric multi-affine polynomial in `sum kappa_i` variables
/// that projects back to `f`.
pub fn polarize(f: &MPoly, kappa: &ExpVec) -> Result<MPoly> {
    if f.nvars() != kappa.len() {
        return Err(Error::DimensionMismatch(f.nvars(), kappa.len()));
    }
    if let Some(d) = f.deg_vector() {
        for i in 0..f.nvars() {
            if d.0[i] > kappa.0[i] {
                return Err(Error::DegreeOverflow(d.0[i], kappa.0[i], i));
            }
        }
    }
    let vars = PolarizedVars::new(kappa);
    let total = vars.total();
    // Elementary symmetric polynomials per block, computed once.
    let es_per_block: Vec<Vec<MPoly>> = (0..vars.blocks())
        .map(|i| {
            let positions: Vec<usize> = vars.block(i).collect();
            elementary_symmetric_all(total, &positions)
        })
        .collect();
    let mut out = MPoly::zero(total);
    for (alpha, c) in f.terms() {
        let scale = multi_binom(kappa, alpha);
        debug_assert!(!scale.is_zero());
        let mut term = MPoly::constant(total, c * &Scalar::from_rat(scale).inv());
        for i in 0..vars.blocks() {
            term = term.mul(&es_per_block[i][alpha.0[i] as usize])?;
        }
        out = out.add(&term)?;
    }
    Ok(out)
}

/// Project a multi-affine polynomial over polarized blocks back down:
/// substitute `z_{ij} -> z_i`.
pub fn project(f: &MPoly, kappa: &ExpVec) -> Result<MPoly> {
    let vars = PolarizedVars::new(kappa);
    if f.nvars() != vars.total() {
        return Err(Error::DimensionMismatch(f.nvars(), vars.total()));
    }
    if !f.is_multi_affine() {
        let bad = f
            .terms()
            .find(|(e, _)| !e.is_multi_affine())
            .map(|(e, _)| format!("{:?}", e))
            .unwrap_or_default();
        return Err(Error::NotMultiAffine(bad));
    }
    let n = kappa.len();
    let mut out = MPoly::zero(n);
    for (e, c) in f.terms() {
        let mut alpha = vec![0u32; n];
        for i in 0..n {
            alpha[i] = vars.block(i).map(|p| e.0[p]).sum();
        }
        out.add_term(ExpVec(alpha), c.clone());
    }
    Ok(out)
}

/// Polarization of an operator: `Pi(T) = polarize_gamma . T .
/// project_kappa`, tabulated over the square-free monomials of the flat
/// `kappa` block space. Its images are multi-affine in the flat `gamma`
/// block space.
pub fn polarize_operator(t: &LinearOperatorSpec) -> Result<LinearOperatorSpec> {
    let kappa = t.kappa().clone();
    let gamma = t.codomain_degree();
    let dom = PolarizedVars::new(&kappa);
    let img_vars = PolarizedVars::new(&gamma);
    let flat_kappa = ExpVec(vec![1; dom.total()]);
    let mut entries = Vec::new();
    for m in ExpVec::iter_below(&flat_kappa) {
        // project: z^S -> z^alpha with alpha_i = |S restricted to block i|
        let mut alpha = vec![0u32; kappa.len()];
        for i in 0..kappa.len() {
            alpha[i] = dom.block(i).map(|p| m.0[p]).sum();
        }
        let image = t.image(&ExpVec(alpha))?;
        let polarized = polarize(image, &gamma)?;
        entries.push((m, polarized));
    }
    let _ = img_vars;
    LinearOperatorSpec::from_table_hetero(
        dom.total(),
        PolarizedVars::new(&gamma).total(),
        flat_kappa,
        entries,
    )
}

/// Exact check of the identity `G_{Pi(T)} = polarize_{gamma + kappa}
/// (G_T)`: the symbol of the polarization is the polarization of the
/// symbol.
pub fn polarized_symbol_identity_check(t: &LinearOperatorSpec) -> Result<bool> {
    let kappa = t.kappa().clone();
    let gamma = t.codomain_degree();
    let pt = polarize_operator(t)?;
    let lhs = algebraic_symbol(&pt);
    let g = algebraic_symbol(t);
    let mut gamma_kappa = gamma.0.clone();
    gamma_kappa.extend(kappa.0.iter());
    let rhs = polarize(&g, &ExpVec(gamma_kappa))?;
    Ok(lhs == rhs)
}

/// Consistency report for stability transfer under polarization.
#[derive(Clone, Debug, serde::Serialize)]
pub struct GwsReport {
    pub verdict_input: MultiVerdict,
    pub verdict_polarized: MultiVerdict,
    /// Diagonal-line transport of the input witness, when refuted.
    pub transported: Option<Witness>,
    pub transported_ok: bool,
    pub consistent: bool,
}

/// Compare stability of a univariate `f` (degree at most `kappa`) with
/// stability of its polarization; refutation witnesses transport along
/// the diagonal line exactly.
pub fn gws_consistency_check(
    f: &UPoly,
    kappa: u32,
    cfg: &SamplingConfig,
) -> Result<GwsReport> {
    let fm = MPoly::from_upoly(f);
    let kv = ExpVec(vec![kappa]);
    let polarized = polarize(&fm, &kv)?;
    let verdict_input = check_stability(&fm, cfg);
    let verdict_polarized = check_stability(&polarized, cfg);

    let mut transported = None;
    let mut transported_ok = false;
    if verdict_input.is_refuted() {
        let total = kappa as usize;
        // The polarized polynomial restricted to the diagonal equals f.
        let w = match verdict_input.witness.as_ref().unwrap() {
            Witness::Point(pt) => Witness::Point(vec![pt[0].clone(); total]),
            Witness::Line { root, .. } => Witness::Line {
                lambda: vec![Scalar::one(); total],
                alpha: vec![Scalar::zero(); total],
                root: root.clone(),
            },
        };
        transported_ok = verify_witness(&polarized, &w);
        transported = Some(w);
    }

    // An exact refutation on either side must not meet a pass on the
    // other beyond sampling slack; the transported witness settles the
    // input-refuted case exactly.
    let consistent = match (verdict_input.is_refuted(), verdict_polarized.is_refuted()) {
        (true, true) => true,
        (true, false) => transported_ok,
        (false, true) => false,
        (false, false) => true,
    };
    Ok(GwsReport {
        verdict_input,
        verdict_polarized,
        transported,
        transported_ok,
        consistent,
    })
}

/// Convenience: transport a univariate root region to the diagonal line
/// witness of any polarization.
pub fn diagonal_witness(total: usize, root: RootRegion) -> Witness {
    Witness::Line {
        lambda: vec![Scalar::one(); total],
        alpha: vec![Scalar::zero(); total],
        root,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_mpoly, parse_mpoly_n};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn ev(v: &[u32]) -> ExpVec {
        ExpVec(v.to_vec())
    }

    #[test]
    fn polarize_examples() {
        // z^2 with kappa=(2) -> z11 z12
        let f = parse_mpoly("z1^2").unwrap().0;
        let p = polarize(&f, &ev(&[2])).unwrap();
        let expected = parse_mpoly("z1*z2").unwrap().0; // flat names
        assert_eq!(p, expected);
        // z with kappa=(2) -> (z11 + z12)/2
        let f = parse_mpoly("z1").unwrap().0;
        let p = polarize(&f, &ev(&[2])).unwrap();
        let expected = parse_mpoly("1/2*z1 + 1/2*z2").unwrap().0;
        assert_eq!(p, expected);
        // z1 z2 with kappa=(1,1) is just a renaming
        let f = parse_mpoly("z1*z2").unwrap().0;
        let p = polarize(&f, &ev(&[1, 1])).unwrap();
        assert_eq!(p, parse_mpoly("z1*z2").unwrap().0);
        // degree overflow
        assert!(polarize(&parse_mpoly("z1^3").unwrap().0, &ev(&[2])).is_err());
    }

    #[test]
    fn project_inverts_polarize() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..12 {
            let f = crate::gen::rand_mpoly(&mut rng, 2, 3, 4, 6);
            let kappa = ev(&[3, 3]);
            let p = polarize(&f, &kappa).unwrap();
            assert!(p.is_multi_affine());
            assert_eq!(project(&p, &kappa).unwrap(), f);
        }
        // projection rejects non-multi-affine input
        let bad = parse_mpoly_n("z1^2", 2).unwrap();
        assert!(matches!(project(&bad, &ev(&[1, 1])), Err(Error::NotMultiAffine(_))));
    }

    #[test]
    fn polarization_is_block_symmetric() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let kappa = ev(&[3, 2]);
        let vars = PolarizedVars::new(&kappa);
        for _ in 0..6 {
            let f = crate::gen::rand_mpoly(&mut rng, 2, 2, 4, 5);
            let p = match polarize(&f, &kappa) {
                Ok(p) => p,
                Err(_) => continue,
            };
            // swap z_{1,1} <-> z_{1,3} and z_{2,1} <-> z_{2,2}
            let swaps = [
                (vars.position(0, 0), vars.position(0, 2)),
                (vars.position(1, 0), vars.position(1, 1)),
            ];
            for (a, b) in swaps {
                let mut swapped = MPoly::zero(p.nvars());
                for (e, c) in p.terms() {
                    let mut e2 = e.0.clone();
                    e2.swap(a, b);
                    swapped.add_term(ExpVec(e2), c.clone());
                }
                assert_eq!(swapped, p);
            }
        }
    }

    #[test]
    fn operator_polarization_reconstructs() {
        // T = d/dz on kappa=(2): poldown reconstruction T = project .
        // Pi(T) . polarize, checked on the whole table.
        let t = LinearOperatorSpec::differential(
            1,
            ev(&[2]),
            &[(Scalar::one(), ev(&[0]), ev(&[1]))],
        )
        .unwrap();
        let gamma = t.codomain_degree();
        let pt = polarize_operator(&t).unwrap();
        for alpha in ExpVec::iter_below(t.kappa()) {
            let mono = MPoly::monomial(1, alpha.clone(), Scalar::one());
            let lifted = polarize(&mono, t.kappa()).unwrap();
            let image = pt.apply(&lifted).unwrap();
            let recovered = project(&image, &gamma).unwrap();
            assert_eq!(&recovered, t.image(&alpha).unwrap());
        }
    }

    #[test]
    fn rank_preserved_under_polarization() {
        use crate::operator::range_dimension;
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..5 {
            let t = crate::gen::rand_operator(&mut rng, 1, &ev(&[2]), 2, 4);
            let pt = polarize_operator(&t).unwrap();
            assert_eq!(range_dimension(&t).0, range_dimension(&pt).0);
        }
    }

    #[test]
    fn polarized_symbol_identity_small() {
        // identity on kappa=(1): both sides z11 + w11
        let id = LinearOperatorSpec::identity(1, ev(&[1]));
        assert!(polarized_symbol_identity_check(&id).unwrap());
        // d/dz on kappa=(2)
        let t = LinearOperatorSpec::differential(
            1,
            ev(&[2]),
            &[(Scalar::one(), ev(&[0]), ev(&[1]))],
        )
        .unwrap();
        assert!(polarized_symbol_identity_check(&t).unwrap());
        // random diagonal on n=2
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..3 {
            let mut diag = std::collections::BTreeMap::new();
            for alpha in ExpVec::iter_below(&ev(&[2, 1])) {
                diag.insert(alpha, crate::gen::rand_scalar(&mut rng, 4));
            }
            let t = LinearOperatorSpec::diagonal(2, ev(&[2, 1]), &diag);
            assert!(polarized_symbol_identity_check(&t).unwrap());
        }
    }

    #[test]
    fn gws_examples() {
        let cfg = SamplingConfig::default();
        // (z+i)^2 stable on both sides
        let f = UPoly::from_coeffs(vec![
            Scalar::from_int(-1),
            Scalar::complex(0, 2),
            Scalar::one(),
        ]);
        let r = gws_consistency_check(&f, 2, &cfg).unwrap();
        assert!(r.verdict_input.passes());
        assert!(r.verdict_polarized.passes());
        assert!(r.consistent);
        // (z-i)^2 refuted on both; the witness transports along the
        // diagonal
        let f = UPoly::from_coeffs(vec![
            Scalar::from_int(-1),
            Scalar::complex(0, -2),
            Scalar::one(),
        ]);
        let r = gws_consistency_check(&f, 2, &cfg).unwrap();
        assert!(r.verdict_input.is_refuted());
        assert!(r.transported_ok);
        assert!(r.consistent);
        // constants
        let r = gws_consistency_check(&UPoly::one(), 0, &cfg).unwrap();
        assert!(r.verdict_input.passes());
        assert!(r.consistent);
    }
}
