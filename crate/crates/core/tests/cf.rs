use binary_euclid::cf::{evaluate, expand, stats, BinaryCf, CfTerm};
use binary_euclid::gcd::gcd_algorithm_v;
use binary_euclid::natural::nat;
use binary_euclid::Error;
use num_integer::Integer;
use proptest::prelude::*;

#[test]
fn seven_thirteenths() {
    let cf = expand(&nat(7), &nat(13)).unwrap();
    assert_eq!(cf, BinaryCf::from_pairs(&[(1, 1), (1, 2), (1, 1)]));
    assert_eq!(cf.to_string(), "1/1 + 2/1 + 4/(1+2)");
    assert_eq!(evaluate(&cf).unwrap(), (nat(7), nat(13)));
}

#[test]
fn multi_bit_partial_quotient() {
    for (u, v) in [(3u64, 11u64), (5, 27), (1, 255), (31, 33)] {
        let cf = expand(&nat(u), &nat(v)).unwrap();
        cf.validate().unwrap();
        assert_eq!(evaluate(&cf).unwrap(), (nat(u), nat(v)), "{u}/{v} = {cf}");
    }
}

#[test]
fn unit_fraction() {
    let cf = expand(&nat(1), &nat(1)).unwrap();
    assert!(cf.terms.is_empty());
    assert_eq!(cf.to_string(), "1");
    assert_eq!(evaluate(&cf).unwrap(), (nat(1), nat(1)));
}

#[test]
fn invalid_inputs() {
    assert_eq!(expand(&nat(2), &nat(7)), Err(Error::EvenInput));
    assert_eq!(expand(&nat(9), &nat(7)), Err(Error::Order));
    assert_eq!(expand(&nat(0), &nat(7)), Err(Error::ZeroInput));
    assert_eq!(expand(&nat(3), &nat(9)), Err(Error::NotCoprime("3".into())));
}

#[test]
fn invalid_terms() {
    for pairs in [[(2u64, 3u64)], [(9, 3)], [(1, 0)]] {
        let cf = BinaryCf::from_pairs(&pairs);
        assert!(matches!(evaluate(&cf), Err(Error::InvalidTerm { .. })), "{pairs:?}");
    }
    let ok = BinaryCf { terms: vec![CfTerm::new(7u64, 3), CfTerm::new(1u64, 1)] };
    assert!(evaluate(&ok).is_ok());
}

#[test]
fn round_trip_below_200() {
    for v in (1..200u64).step_by(2) {
        for u in (1..=v).step_by(2) {
            if u.gcd(&v) != 1 {
                continue;
            }
            let cf = expand(&nat(u), &nat(v)).unwrap();
            assert_eq!(evaluate(&cf).unwrap(), (nat(u), nat(v)), "{u}/{v}");
        }
    }
}

#[test]
fn stats_match_algorithm_v_counters() {
    for v in (1..200u64).step_by(2) {
        for u in (1..=v).step_by(2) {
            if u.gcd(&v) != 1 {
                continue;
            }
            let s = stats(&expand(&nat(u), &nat(v)).unwrap());
            let (_, t) = gcd_algorithm_v(&nat(u), &nat(v)).unwrap();
            assert_eq!(s.depth, t.outer_exchanges);
            assert_eq!(s.ones_total, t.b3_count);
            assert_eq!(s.shifts_total, t.shift_total);
        }
    }
}

fn coprime_odd_pair() -> impl Strategy<Value = (u64, u64)> {
    (0..u64::MAX / 2, 0..u64::MAX / 2)
        .prop_map(|(a, b)| (2 * a + 1, 2 * b + 1))
        .prop_filter("coprime", |(a, b)| a.gcd(b) == 1)
        .prop_map(|(a, b)| (a.min(b), a.max(b)))
}

proptest! {
    #[test]
    fn round_trip_64_bit((u, v) in coprime_odd_pair()) {
        let cf = expand(&nat(u), &nat(v)).unwrap();
        prop_assert!(cf.validate().is_ok());
        prop_assert_eq!(evaluate(&cf).unwrap(), (nat(u), nat(v)));
        let s = stats(&cf);
        let (_, t) = gcd_algorithm_v(&nat(u), &nat(v)).unwrap();
        prop_assert_eq!((s.depth, s.ones_total, s.shifts_total), (t.outer_exchanges, t.b3_count, t.shift_total));
    }
}
