mod common;

use binary_euclid::density::{
    compute_constants, iterate_ftilde, read_grid_function, richardson, write_grid_function, Grid, IterationPolicy,
    LadderParams, RichardsonTable,
};
use binary_euclid::{BigReal, Error, Real};
use common::{small_ladder, K_REF, LAMBDA_REF};

const PREC: u32 = 200;

fn big(v: f64) -> BigReal {
    BigReal::with_f64(PREC, v)
}

fn parse(s: &str) -> BigReal {
    BigReal::parse(PREC, s).expect("decimal literal")
}

#[test]
fn richardson_removes_even_powers() {
    let f = |h: f64| {
        let h = big(h);
        let h2 = h.clone() * &h;
        big(1.0) + &h2 + &(h2.clone() * &h2).mul_pow2(-1) - &(h2.clone() * &h2 * &h2)
    };
    let est = [0.05, 0.1, 0.2, 0.4].iter().map(|&h| (big(h), f(h))).collect();
    let best = richardson(est, 2).unwrap();
    assert!((best - &big(1.0)).abs().to_f64() < 1e-40);
}

#[test]
fn richardson_h4_ladder() {
    let est: Vec<_> = [0.1, 0.2, 0.4]
        .iter()
        .map(|&h| {
            let h4 = big(h).powi(4);
            (big(h), big(3.0) + &h4.mul_pow2(3) - &(h4.clone() * &h4))
        })
        .collect();
    let table = RichardsonTable::new(4, est).unwrap();
    assert_eq!(table.columns.len(), 3);
    assert!((table.best().clone() - &big(3.0)).abs().to_f64() < 1e-40);
}

#[test]
fn richardson_rejects_unnested_steps() {
    let est = vec![(big(0.1), big(1.0)), (big(0.3), big(1.0))];
    assert!(matches!(RichardsonTable::new(2, est), Err(Error::NotNested(_))));
    assert!(matches!(RichardsonTable::new(2, vec![]), Err(Error::Config(_))));
}

#[test]
fn zero_steps_is_the_initial_function() {
    let grid = Grid::with_f64(11.0, 6, PREC).unwrap();
    let f = iterate_ftilde(&grid, 4, 0).unwrap();
    assert_eq!(f.iterations, 0);
    for (i, v) in f.values.iter().enumerate() {
        let x = (-grid.z_f64(i).powi(2)).exp();
        assert!((v.to_f64() - (1.0 - x)).abs() < 1e-15);
    }
}

/// `F̃₁(x) = Σ_k 2^{-k} (1/(1+2^k x) − x/(x+2^k))` summed exactly enough at 200 bits.
fn ftilde1(x: &BigReal) -> BigReal {
    let one = BigReal::one(PREC);
    let mut sum = BigReal::zero(PREC);
    for k in 1..=220 {
        let p = one.mul_pow2(k);
        let a = one.clone() / &(one.clone() + &(p.clone() * x));
        let b = x.clone() / &(x.clone() + &p);
        sum += &((a - &b) * &one.mul_pow2(-k));
    }
    sum
}

#[test]
fn one_step_matches_closed_sum() {
    let half = big(0.5);
    let exact = ftilde1(&half);
    let frozen = parse("0.2300830038559996471203129542165810571699");
    assert!((exact.clone() - &frozen).abs().to_f64() < 1e-38);

    let grid = Grid::with_f64(11.0, 10, PREC).unwrap();
    let f = iterate_ftilde(&grid, 4, 1).unwrap();
    let got = f.eval_ftilde(&half).unwrap();
    assert!((got - &exact).abs().to_f64() < 1e-12);
    for i in [1usize, 17, 200, 600] {
        let x = (-(grid.z(i).clone() * &grid.z(i))).exp();
        assert!((f.values[i].clone() - &ftilde1(&x)).abs().to_f64() < 1e-12, "node {i}");
    }
}

#[test]
fn grid_function_text_round_trip() {
    let grid = Grid::with_f64(11.0, 7, PREC).unwrap();
    let f = iterate_ftilde(&grid, 3, 2).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("f.txt");
    write_grid_function(&f, std::fs::File::create(&path).unwrap()).unwrap();
    let back = read_grid_function(std::io::BufReader::new(std::fs::File::open(&path).unwrap())).unwrap();
    assert_eq!(back, f);

    let mut text = std::fs::read_to_string(&path).unwrap();
    text = text.replace("version 1", "version 9");
    assert!(matches!(read_grid_function(text.as_bytes()), Err(Error::Parse(_))));
}

#[test]
fn ladder_params_validation() {
    let mut p = LadderParams::desk();
    assert!(p.validate().is_ok());
    p.extrapolations = 12;
    assert!(matches!(p.validate(), Err(Error::Config(_))));
    let mut p = LadderParams::desk();
    p.precision = 32;
    assert!(p.validate().is_err());
    let mut p = LadderParams::desk();
    p.level = 7;
    p.extrapolations = 4;
    p.r = 7;
    assert!(p.validate().is_err());
    assert!(Grid::with_f64(11.0, 2, PREC).is_err());
}

#[test]
fn fixed_point_is_a_distribution_function() {
    for f in small_ladder() {
        assert!(f.converged);
        assert!(f.shape_violation() < 1e-13, "level {}", f.grid.level);
        assert!(f.values[0].to_f64().abs() < 1e-30);
        assert!((f.values.last().unwrap().to_f64() - 1.0).abs() < 1e-15);
    }
}

#[test]
fn fixed_policy_reports_converged() {
    let grid = Grid::with_f64(11.0, 6, 128).unwrap();
    let f = iterate_ftilde(&grid, 3, 3).unwrap();
    assert_eq!(f.iterations, 3);
    assert!(f.converged);
    assert!(matches!(IterationPolicy::desk(), IterationPolicy::UntilChange { .. }));
}

#[test]
fn constants_from_small_ladder() {
    let report = compute_constants(small_ladder(), 4).unwrap();
    let prec = report.k.prec();
    let k_ref = BigReal::parse(prec, K_REF).unwrap();
    let lambda_ref = BigReal::parse(prec, LAMBDA_REF).unwrap();
    assert!((report.k.clone() - &k_ref).abs().to_f64() < 1e-12, "K = {}", report.k.to_digits(20));
    assert!((report.lambda.clone() - &lambda_ref).abs().to_f64() < 1e-12, "λ = {}", report.lambda.to_digits(20));
    assert!(report.difference.abs().to_f64() < 1e-12);
    assert!((report.k_from_e_inf.clone() - &k_ref).abs().to_f64() < 1e-12);
    assert!((report.b_density_route - 2.0 / k_ref.to_f64()).abs() < 1e-12);
    assert!(report.converged);
}
