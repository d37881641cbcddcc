use binary_euclid::density::{iterate_ftilde, Grid};
use binary_euclid::mellin::{
    d1_direct, d1_direct_compensated, d1_expansion, f1_from_d1, log_spaced, mellin_table, p_max, periodic_p,
    power_coefficient, write_mellin_csv, ExpansionTerms,
};
use binary_euclid::{BigReal, Error, Real};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

const PREC: u32 = 200;

fn big(v: f64) -> BigReal {
    BigReal::with_f64(PREC, v)
}

fn tol() -> BigReal {
    BigReal::one(PREC).mul_pow2(-210)
}

#[test]
fn d1_at_one() {
    let mut exact = BigRational::zero();
    for k in 1..=160u32 {
        let p = BigInt::one() << k;
        exact += BigRational::new(BigInt::one(), p.clone() * (p + 1));
    }
    let frozen = BigReal::parse(PREC, "0.2355002196515557908086802527445015174423").unwrap();
    let digits = (exact * BigRational::from_integer(BigInt::from(10).pow(40))).to_integer();
    let oracle = BigReal::parse(PREC, &format!("0.{digits}")).unwrap();
    assert!((oracle - &frozen).abs().to_f64() < 1e-39);

    let forward = d1_direct(&big(1.0), &tol()).unwrap();
    let kahan = d1_direct_compensated(&big(1.0), &tol()).unwrap();
    assert!((forward.clone() - &frozen).abs().to_f64() < 1e-39);
    assert!((forward - &kahan).abs().to_f64() < 1e-28);
}

#[test]
fn d1_rejects_nonpositive_arguments() {
    assert!(matches!(d1_direct(&big(0.0), &tol()), Err(Error::Domain(_))));
    assert!(matches!(d1_direct(&big(1.0), &big(0.0)), Err(Error::Config(_))));
    let terms = ExpansionTerms::new(true, 4).unwrap();
    assert!(matches!(d1_expansion(&big(0.5), terms), Err(Error::Domain(_))));
    assert!(matches!(d1_expansion(&big(-0.1), terms), Err(Error::Domain(_))));
    assert!(ExpansionTerms::new(true, 0).is_err());
    assert!(p_max(100, 64).is_err());
}

#[test]
fn power_coefficients() {
    for m in 2..12u32 {
        let expect = (-1f64).powi(m as i32) / (2f64.powi(1 - m as i32) - 1.0);
        assert!((power_coefficient(m, PREC).to_f64() - expect).abs() < 1e-15);
    }
    assert_eq!(power_coefficient(2, PREC).to_f64(), -2.0);
}

#[test]
fn periodic_part_symmetries() {
    assert!(periodic_p(&big(0.0)).abs().to_f64() < 1e-60);
    assert!(periodic_p(&big(0.5)).abs().to_f64() < 1e-55);
    for t in [0.125, 0.3125, 0.765625] {
        let p = periodic_p(&big(t));
        assert!((p.clone() + &periodic_p(&big(-t))).abs().to_f64() < 1e-55);
        assert!((p.clone() - &periodic_p(&big(t + 3.0))).abs().to_f64() < 1e-50);
        let c = 2.0 * std::f64::consts::PI / std::f64::consts::LN_2;
        let s = 2.0 * std::f64::consts::PI.powi(2) / std::f64::consts::LN_2;
        let first = c * (2.0 * std::f64::consts::PI * t).sin() / s.sinh();
        assert!(((p.to_f64() - first) / first).abs() < 1e-11);
    }
}

#[test]
fn amplitude_of_the_fluctuation() {
    let m = p_max(1024, 96).unwrap();
    assert!(m.value_f64 > 7.0e-12 && m.value_f64 < 7.8e-12, "{}", m.value);
    assert!((m.value_f64 - 7.774892514782708e-12).abs() < 1e-20);
    assert!((m.t - 0.75).abs() < 1e-6 || (m.t - 0.25).abs() < 1e-6);
}

#[test]
fn expansion_with_p_matches_direct_sum() {
    let x = big(0.01);
    let direct = d1_direct(&x, &tol()).unwrap();
    let with_p = d1_expansion(&x, ExpansionTerms::new(true, 12).unwrap()).unwrap();
    assert!((direct - &with_p).abs().to_f64() < 1e-20);
}

#[test]
fn residual_without_p_is_periodic_in_lg_x() {
    let rows = mellin_table(&log_spaced(4.1, 10.1, 25), 20, PREC).unwrap();
    let mut largest = 0f64;
    for row in &rows {
        let scaled = row.discrepancy().to_f64() / row.x;
        let p = periodic_p(&big(row.x).log2()).to_f64();
        assert!((scaled - p).abs() < 1e-20, "x = {}", row.x);
        assert!((row.direct.clone() - &row.with_p).abs().to_f64() < 1e-25);
        largest = largest.max(row.discrepancy().abs().to_f64());
    }
    assert!(largest > 1e-16 && largest < 1e-12);
    let at = |x: f64| mellin_table(&[x], 20, PREC).unwrap()[0].discrepancy().to_f64() / x;
    assert!((at(0.003) - at(0.0015)).abs() < 1e-20);
}

#[test]
fn f1_agrees_with_one_step_of_the_recurrence() {
    let grid = Grid::with_f64(11.0, 10, PREC).unwrap();
    let step = iterate_ftilde(&grid, 4, 1).unwrap();
    for x in [0.05, 0.3, 0.5, 0.9] {
        let xb = big(x);
        let via_d1 = f1_from_d1(&xb, &tol()).unwrap();
        let via_grid = BigReal::one(PREC) - &step.eval_ftilde(&xb).unwrap();
        assert!((via_d1 - &via_grid).abs().to_f64() < 1e-12, "x = {x}");
    }
}

#[test]
fn csv_layout() {
    let rows = mellin_table(&[0.01, 0.001], 8, 128).unwrap();
    let mut out = Vec::new();
    write_mellin_csv(&rows, &mut out).unwrap();
    let text = String::from_utf8(out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "x,direct,expansion_with_P,expansion_without_P,discrepancy");
    assert_eq!(lines.len(), 3);
    assert_eq!(lines[1].split(',').count(), 5);
    let direct: f64 = lines[1].split(',').nth(1).unwrap().parse().unwrap();
    assert!((direct - rows[0].direct.to_f64()).abs() < 1e-15);
    assert_eq!(rows[1].x, 0.001);
}
