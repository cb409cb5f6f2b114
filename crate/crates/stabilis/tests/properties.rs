//! Randomized algebraic properties, driven by proptest.

use proptest::prelude::*;
use stabilis::mpoly::{MPoly, VarNames};
use stabilis::multiindex::ExpVec;
use stabilis::parse::{parse_mpoly_with, ParseLimits, VarMode};
use stabilis::scalar::{rat, Scalar};
use stabilis::upoly::UPoly;

fn arb_scalar() -> impl Strategy<Value = Scalar> {
    (-9i64..=9, 1i64..=5, -9i64..=9, 1i64..=5)
        .prop_map(|(a, b, c, d)| Scalar::new(rat(a, b), rat(c, d)))
}

fn arb_mpoly(nvars: usize, maxdeg: u32, maxterms: usize) -> impl Strategy<Value = MPoly> {
    prop::collection::vec(
        (prop::collection::vec(0..=maxdeg, nvars), arb_scalar()),
        0..=maxterms,
    )
    .prop_map(move |terms| {
        let mut p = MPoly::zero(nvars);
        for (e, c) in terms {
            p.add_term(ExpVec(e), c);
        }
        p
    })
}

fn arb_upoly(maxdeg: usize) -> impl Strategy<Value = UPoly> {
    prop::collection::vec(arb_scalar(), 0..=maxdeg + 1).prop_map(UPoly::from_coeffs)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn scalar_field_laws(a in arb_scalar(), b in arb_scalar(), c in arb_scalar()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        if !a.is_zero() {
            prop_assert_eq!(&a * &a.inv(), Scalar::one());
        }
    }

    #[test]
    fn ring_laws(
        f in arb_mpoly(2, 3, 4),
        g in arb_mpoly(2, 3, 4),
        h in arb_mpoly(2, 3, 4),
    ) {
        let left = f.add(&g).unwrap().add(&h).unwrap();
        let right = f.add(&g.add(&h).unwrap()).unwrap();
        prop_assert_eq!(left, right);

        let left = f.mul(&g.add(&h).unwrap()).unwrap();
        let right = f.mul(&g).unwrap().add(&f.mul(&h).unwrap()).unwrap();
        prop_assert_eq!(left, right);

        prop_assert_eq!(f.mul(&g).unwrap(), g.mul(&f).unwrap());
    }

    #[test]
    fn restriction_is_multiplicative(
        f in arb_mpoly(2, 2, 3),
        g in arb_mpoly(2, 2, 3),
        l1 in 1i64..=4, l2 in 1i64..=4,
        a1 in -3i64..=3, a2 in -3i64..=3,
    ) {
        let lambda = vec![rat(l1, 1), rat(l2, 2)];
        let alpha = vec![rat(a1, 1), rat(a2, 2)];
        let lhs = f.mul(&g).unwrap().restrict_to_line(&lambda, &alpha).unwrap();
        let rhs = f
            .restrict_to_line(&lambda, &alpha)
            .unwrap()
            .mul(&g.restrict_to_line(&lambda, &alpha).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn canonical_text_roundtrip(f in arb_mpoly(3, 4, 5)) {
        let names = VarNames::z(3);
        let text = f.to_canonical_string(&names);
        let (reparsed, _) = parse_mpoly_with(
            &text,
            VarMode::Named(names.clone()),
            &ParseLimits::default(),
        )
        .unwrap();
        prop_assert_eq!(&reparsed, &f, "text was {}", text);
        prop_assert_eq!(reparsed.to_canonical_string(&names), text);
    }

    #[test]
    fn support_extrema_are_antichains(f in arb_mpoly(3, 3, 6)) {
        if f.is_zero() {
            return Ok(());
        }
        let (min, max, _) = f.support_extrema().unwrap();
        for a in &min {
            for b in &min {
                prop_assert!(a == b || !(a.leq(b)), "minimal set is dominated");
            }
        }
        for a in &max {
            for b in &max {
                prop_assert!(a == b || !(a.leq(b)), "maximal set is dominated");
            }
        }
    }

    #[test]
    fn division_invariant(p in arb_upoly(6), d in arb_upoly(3)) {
        if d.is_zero() {
            return Ok(());
        }
        let (q, r) = p.div_rem(&d);
        prop_assert_eq!(q.mul(&d).add(&r), p);
        if !r.is_zero() {
            prop_assert!(r.degree().unwrap() < d.degree().unwrap());
        }
    }

    #[test]
    fn polarize_project_identity(f in arb_mpoly(2, 2, 4)) {
        let kappa = ExpVec(vec![2, 2]);
        let lifted = stabilis::polarization::polarize(&f, &kappa).unwrap();
        prop_assert!(lifted.is_multi_affine());
        let back = stabilis::polarization::project(&lifted, &kappa).unwrap();
        prop_assert_eq!(back, f);
    }
}
