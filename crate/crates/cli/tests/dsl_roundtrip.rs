use divgap::SetSpec;
use divgap_cli::parse_setspec;
use num_bigint::BigUint;
use proptest::prelude::*;

fn setspec() -> impl Strategy<Value = SetSpec> {
    prop_oneof![
        any::<u64>().prop_map(|k| SetSpec::Multiples { k: BigUint::from(k.max(1)) }),
        (2u64..=u64::MAX).prop_map(|r| SetSpec::GeometricPowers { r: BigUint::from(r) }),
        Just(SetSpec::Primes),
        Just(SetSpec::Factorials),
        prop::collection::btree_set(1u64..=u64::MAX, 1..20)
            .prop_map(|s| SetSpec::ExplicitList { elems: s.into_iter().map(BigUint::from).collect() }),
    ]
}

proptest! {
    #[test]
    fn render_then_parse_is_identity(spec in setspec()) {
        prop_assert_eq!(parse_setspec(&spec.to_string()).unwrap(), spec);
    }

    #[test]
    fn parser_never_panics(text in "[a-z:,0-9-]{0,24}") {
        let _ = parse_setspec(&text);
    }

    #[test]
    fn nonincreasing_lists_are_rejected(a in 1u64..1000, b in 1u64..1000) {
        prop_assume!(a >= b);
        let err = parse_setspec(&format!("list:{a},{b}")).unwrap_err();
        prop_assert_eq!(err.position, 5 + a.to_string().len() + 1);
    }
}

#[test]
fn huge_arguments_survive() {
    let text = format!("powers:{}", "9".repeat(60));
    let spec = parse_setspec(&text).unwrap();
    assert_eq!(spec.to_string(), text);
}
