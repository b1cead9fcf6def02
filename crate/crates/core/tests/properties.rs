use num_traits::Signed;
use divgap::arith::{gcd, prefix_product, valuation};
use divgap::explore::{scan_difference, scan_difference_with, ScanOptions};
use divgap::witness::verify_certificate;
use divgap::{classify, make_witness, Count, Instance, IntPolynomial, SetSpec, VerdictKind, WitnessCertificate, WitnessRequest};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use proptest::prelude::*;

fn setspec() -> impl Strategy<Value = SetSpec> {
    prop_oneof![
        (1u32..50).prop_map(|k| SetSpec::multiples(k).unwrap()),
        (2u32..12).prop_map(|r| SetSpec::powers(r).unwrap()),
        Just(SetSpec::Primes),
        Just(SetSpec::Factorials),
        prop::collection::btree_set(1u32..500, 1..8).prop_map(|s| SetSpec::list(s).unwrap()),
    ]
}

fn infinite_setspec() -> impl Strategy<Value = SetSpec> {
    prop_oneof![
        (1u32..8).prop_map(|k| SetSpec::multiples(k).unwrap()),
        (2u32..6).prop_map(|r| SetSpec::powers(r).unwrap()),
        Just(SetSpec::Primes),
        Just(SetSpec::Factorials),
    ]
}

fn instance(r: i64) -> impl Strategy<Value = Instance> {
    (-r..=r, -r..=r, -r..=r, -r..=r).prop_map(|(b, c, e, f)| Instance::new(b, c, e, f))
}

proptest! {
    #[test]
    fn gcd_divides_both_and_is_symmetric(a in any::<i64>(), b in any::<i64>()) {
        let (a, b) = (BigInt::from(a), BigInt::from(b));
        let g = gcd(&a, &b);
        prop_assert_eq!(&g, &gcd(&b, &a));
        prop_assert_eq!(&g, &gcd(&-&a, &b));
        if g > BigUint::from(0u32) {
            let g = BigInt::from(g);
            prop_assert!(a.is_multiple_of(&g) && b.is_multiple_of(&g));
            prop_assert_eq!(gcd(&(&a / &g), &(&b / &g)), BigUint::from(1u32));
        }
    }

    #[test]
    fn valuation_is_exact(base in 2i64..20, v in 0u32..30, unit in 1i64..1000) {
        let base_big = BigInt::from(base);
        let u = if unit % base == 0 { unit + 1 } else { unit };
        let m = num_traits::pow(base_big.clone(), v as usize) * u;
        prop_assert_eq!(valuation(&base_big, &m).unwrap(), v as u64);
        prop_assert_eq!(valuation(&base_big, &-m).unwrap(), v as u64);
    }

    #[test]
    fn divisor_count_ignores_sign(spec in setspec(), m in 1i64..1_000_000) {
        let m = BigInt::from(m);
        prop_assert_eq!(spec.divisor_count(&m), spec.divisor_count(&-m));
    }

    #[test]
    fn divisor_count_matches_enumeration(spec in setspec(), m in -100_000i64..100_000) {
        prop_assume!(m != 0);
        let m = BigInt::from(m);
        prop_assert_eq!(spec.divisor_count(&m), spec.divisor_count_by_enumeration(&m));
    }

    #[test]
    fn powers_count_is_valuation(r in 2u32..30, m in 1i64..i64::MAX) {
        let m = BigInt::from(m);
        let v = valuation(&BigInt::from(r), &m).unwrap();
        prop_assert_eq!(SetSpec::powers(r).unwrap().divisor_count(&m), Count::finite(v));
    }

    #[test]
    fn prefix_products_grow(spec in infinite_setspec(), t in 1usize..30) {
        let a = prefix_product(&spec.prefix(t).unwrap());
        let b = prefix_product(&spec.prefix(t + 1).unwrap());
        prop_assert!(b.is_multiple_of(&a));
        prop_assert!(b >= a);
    }

    #[test]
    fn setspec_roundtrips_through_json(spec in setspec()) {
        let json = serde_json::to_string(&spec).unwrap();
        prop_assert_eq!(serde_json::from_str::<SetSpec>(&json).unwrap(), spec);
    }

    #[test]
    fn classification_is_swap_symmetric(inst in instance(50)) {
        let v = classify(&inst);
        let w = classify(&inst.swapped());
        match (&v.kind, &w.kind) {
            (VerdictKind::UnboundedForAll { case: a }, VerdictKind::UnboundedForAll { case: b }) => {
                prop_assert_eq!(a.case, b.case);
            }
            (VerdictKind::NotForAll { .. }, VerdictKind::NotForAll { .. }) => {}
            _ => prop_assert!(false, "{} and its swap disagree", inst),
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn witnesses_verify_and_are_deterministic(inst in instance(12), spec in infinite_setspec(), k in 1u64..7) {
        prop_assume!(classify(&inst).is_unbounded());
        let req = WitnessRequest::new(inst, spec.clone(), k);
        let cert = make_witness(&req).unwrap();
        prop_assert!(verify_certificate(&cert, &spec).is_ok());
        prop_assert!(cert.difference.at_least(&BigUint::from(k)));
        prop_assert_eq!(&make_witness(&req).unwrap(), &cert);

        let json = serde_json::to_string(&cert).unwrap();
        let back: WitnessCertificate = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(&back, &cert);
        prop_assert!(verify_certificate(&back, &spec).is_ok());
    }

    #[test]
    fn tampered_witnesses_are_rejected(inst in instance(8), spec in infinite_setspec(), k in 1u64..5) {
        prop_assume!(classify(&inst).is_unbounded());
        let mut cert = make_witness(&WitnessRequest::new(inst, spec.clone(), k)).unwrap();
        cert.n += 1u32;
        prop_assert!(!verify_certificate(&cert, &spec).is_ok());
    }

    #[test]
    fn case_iv_identities(inst in instance(12), spec in infinite_setspec(), k in 1u64..6) {
        let verdict = classify(&inst);
        let Some(label) = verdict.case_label() else { return Ok(()) };
        prop_assume!(label.case == divgap::Case::IV);
        let cert = make_witness(&WitnessRequest::new(inst.clone(), spec, k)).unwrap();
        let aux = &cert.aux;
        let (p_t, h, d, ell, p, q) = (
            BigInt::from(aux.p_t.clone().unwrap()),
            aux.h.clone().unwrap(),
            aux.d.clone().unwrap(),
            BigInt::from(aux.ell.clone().unwrap()),
            BigInt::from(aux.p.clone().unwrap()),
            BigInt::from(aux.q.clone().unwrap()),
        );
        prop_assert_eq!(BigInt::from(cert.n.clone()), &p_t * &q - &h);
        // The small form equals ±ℓp.
        let small = if cert.lhs_count >= cert.rhs_count { &cert.rhs_value } else { &cert.lhs_value };
        prop_assert_eq!(small.abs(), &ell * &p);
        prop_assert!(p > d.abs() / &ell);
    }

    #[test]
    fn scan_agrees_with_pointwise_counts(
        f in prop::collection::vec(-6i64..=6, 1..3),
        g in prop::collection::vec(-6i64..=6, 1..3),
        spec in setspec(),
        n_max in 1u64..300,
    ) {
        let (fp, gp) = (IntPolynomial::new(f), IntPolynomial::new(g));
        let report = scan_difference(&fp, &gp, &spec, n_max).unwrap();
        let mut best: Option<(Count, u64)> = None;
        let mut zeros = Vec::new();
        for n in 1..=n_max {
            let x = BigInt::from(n);
            let (fv, gv) = (fp.eval(&x), gp.eval(&x));
            // A polynomial that is not identically zero but vanishes at n is set aside.
            if (!fp.is_zero() && fv == BigInt::from(0)) || (!gp.is_zero() && gv == BigInt::from(0)) {
                zeros.push(n);
                continue;
            }
            let diff = spec.divisor_count(&fv).abs_diff(&spec.divisor_count(&gv));
            if best.as_ref().is_none_or(|(b, _)| diff > *b) {
                best = Some((diff, n));
            }
        }
        let (max, argmax) = best.unwrap_or((Count::zero(), 1));
        prop_assert_eq!(report.max_difference, max);
        prop_assert_eq!(report.argmax, argmax);
        prop_assert_eq!(report.zero_value_ns, zeros);
    }

    #[test]
    fn scan_is_independent_of_chunking(spec in setspec(), n_max in 1u64..2000, chunk in 1u64..300, stride in 1u64..50) {
        let (f, g) = (IntPolynomial::new([1i64, 2]), IntPolynomial::new([-3i64, 3]));
        let a = scan_difference_with(&f, &g, &spec, n_max, &ScanOptions { series_stride: Some(stride), chunk }).unwrap();
        let b = scan_difference_with(&f, &g, &spec, n_max, &ScanOptions { series_stride: Some(stride), chunk: 4096 }).unwrap();
        prop_assert_eq!(a, b);
    }
}
