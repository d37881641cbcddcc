use binary_euclid::gcd::{gcd_algorithm_v, gcd_binary, gcd_binary_with, gcd_euclid, gcd_extended, TraceDetail};
use binary_euclid::natural::{floor_lg, nat};
use binary_euclid::{val2, Error, Natural};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use proptest::prelude::*;

#[test]
fn val2_examples() {
    assert_eq!(val2(&nat(1)).unwrap(), 0);
    assert_eq!(val2(&nat(12)).unwrap(), 2);
    assert_eq!(val2(&nat(1 << 30)).unwrap(), 30);
    assert!(matches!(val2(&nat(0)), Err(Error::ZeroInput)));
}

#[test]
fn algorithm_b_hand_trace() {
    // (13,7) → (3,7) → (3,1) → (1,1)
    let (g, t) = gcd_binary(&nat(13), &nat(7)).unwrap();
    assert_eq!(g, nat(1));
    assert_eq!(t.b3_count, 3);
    assert_eq!(t.shifts, vec![1, 2, 1]);
    assert_eq!(t.shift_total, 4);
    let ratios: Vec<BigRational> = t.ratio_snapshots.iter().map(|(_, x)| x.clone()).collect();
    let expect = [(7, 13), (3, 7), (1, 3), (1, 1)];
    for (x, (p, q)) in ratios.iter().zip(expect) {
        assert_eq!(*x, BigRational::new(p.into(), q.into()));
    }
}

#[test]
fn equal_inputs_take_no_steps() {
    for u in [1u64, 9, 1 << 20, 12345678901] {
        let (g, t) = gcd_binary(&nat(u), &nat(u)).unwrap();
        assert_eq!(g, nat(u));
        assert_eq!(t.b3_count, 0);
    }
}

#[test]
fn even_inputs_fold_in_the_power_of_two() {
    let (g, _) = gcd_binary(&nat(48), &nat(180)).unwrap();
    assert_eq!(g, nat(12));
    let (g, t) = gcd_binary(&nat(1 << 10), &nat(1 << 4)).unwrap();
    assert_eq!(g, nat(16));
    assert_eq!(t.b3_count, 0);
}

#[test]
fn zero_is_rejected() {
    assert!(matches!(gcd_binary(&nat(0), &nat(3)), Err(Error::ZeroInput)));
    assert!(matches!(gcd_extended(&nat(5), &nat(0)), Err(Error::ZeroInput)));
    assert!(matches!(gcd_algorithm_v(&nat(0), &nat(3)), Err(Error::ZeroInput)));
}

#[test]
fn algorithm_v_examples() {
    let (g, t) = gcd_algorithm_v(&nat(1), &nat(3)).unwrap();
    assert_eq!((g, t.outer_exchanges), (nat(1), 1));
    let (g, t) = gcd_algorithm_v(&nat(7), &nat(13)).unwrap();
    assert_eq!((g, t.outer_exchanges), (nat(1), 3));
    let (g, t) = gcd_algorithm_v(&nat(21), &nat(21)).unwrap();
    assert_eq!((g, t.outer_exchanges), (nat(21), 0));
}

#[test]
fn algorithm_v_rejects_even_and_misordered_inputs() {
    assert!(matches!(gcd_algorithm_v(&nat(4), &nat(7)), Err(Error::EvenInput)));
    assert!(matches!(gcd_algorithm_v(&nat(13), &nat(7)), Err(Error::Order)));
}

#[test]
fn extended_examples() {
    let (g, a, b) = gcd_extended(&nat(1), &nat(1)).unwrap();
    assert_eq!(g, nat(1));
    assert_eq!(a + b, BigInt::from(1));
    let (g, a, b) = gcd_extended(&nat(240), &nat(46)).unwrap();
    assert_eq!(g, nat(2));
    assert_eq!(a * 240 + b * 46, BigInt::from(2));
}

#[test]
fn all_routes_match_euclid_up_to_512() {
    for u in 1..=512u64 {
        for v in 1..=512u64 {
            let (un, vn) = (nat(u), nat(v));
            let expect = gcd_euclid(&un, &vn);
            assert_eq!(gcd_binary_with(&un, &vn, TraceDetail::Counters).unwrap().0, expect, "B({u},{v})");
            assert_eq!(gcd_extended(&un, &vn).unwrap().0, expect, "ext({u},{v})");
            if u % 2 == 1 && v % 2 == 1 && u <= v {
                assert_eq!(gcd_algorithm_v(&un, &vn).unwrap().0, expect, "V({u},{v})");
            }
        }
    }
}

#[test]
fn bezout_exhaustive_to_256() {
    for u in 1..=256u64 {
        for v in 1..=256u64 {
            let (g, a, b) = gcd_extended(&nat(u), &nat(v)).unwrap();
            assert_eq!(&a * u + &b * v, BigInt::from(g.clone()), "({u},{v})");
            let g = BigInt::from(g);
            assert!(a >= BigInt::from(0) && a < BigInt::from(v) / &g);
            assert!(b.magnitude() <= &(BigUint::from(u) / g.magnitude()));
        }
    }
}

fn odd_below(bits: u32) -> impl Strategy<Value = u64> {
    (0..(1u64 << (bits - 1))).prop_map(|h| 2 * h + 1)
}

fn big_odd() -> impl Strategy<Value = Natural> {
    proptest::collection::vec(any::<u32>(), 1..8).prop_map(|digits| BigUint::new(digits) | nat(1))
}

proptest! {
    #[test]
    fn b3_and_shift_bounds(u in odd_below(16), v in odd_below(16)) {
        let (_, t) = gcd_binary(&nat(u), &nat(v)).unwrap();
        prop_assert!(t.b3_count <= floor_lg(&nat(u + v)));
        let ceil_lg_max = 64 - (u.max(v) - 1).leading_zeros() as u64;
        prop_assert!(t.shift_total <= 2 * ceil_lg_max + 2);
    }

    #[test]
    fn binary_gcd_is_symmetric(u in 1u64.., v in 1u64..) {
        let (g1, t1) = gcd_binary(&nat(u), &nat(v)).unwrap();
        let (g2, t2) = gcd_binary(&nat(v), &nat(u)).unwrap();
        prop_assert_eq!(g1, g2);
        prop_assert_eq!(t1.b3_count, t2.b3_count);
        prop_assert_eq!(t1.shift_total, t2.shift_total);
    }

    #[test]
    fn big_inputs_match_euclid(u in big_odd(), v in big_odd(), su in 0u32..70, sv in 0u32..70) {
        let (u, v) = (u << su, v << sv);
        let expect = gcd_euclid(&u, &v);
        prop_assert_eq!(gcd_binary(&u, &v).unwrap().0, expect.clone());
        let (g, a, b) = gcd_extended(&u, &v).unwrap();
        prop_assert_eq!(&g, &expect);
        prop_assert_eq!(a * BigInt::from(u) + b * BigInt::from(v), BigInt::from(g));
    }

    #[test]
    fn algorithm_v_performs_the_same_steps(u in big_odd(), v in big_odd()) {
        let (u, v) = if u <= v { (u, v) } else { (v, u) };
        let (gb, tb) = gcd_binary(&u, &v).unwrap();
        let (gv, tv) = gcd_algorithm_v(&u, &v).unwrap();
        prop_assert_eq!(gb, gv);
        prop_assert_eq!(tb.b3_count, tv.b3_count);
        let (mut sb, mut sv) = (tb.shifts.clone(), tv.shifts.clone());
        sb.sort_unstable();
        sv.sort_unstable();
        prop_assert_eq!(sb, sv);
    }
}
