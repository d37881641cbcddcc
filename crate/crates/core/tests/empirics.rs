use std::collections::BTreeMap;
use std::sync::OnceLock;

use binary_euclid::density::{iterate_ftilde, Grid};
use binary_euclid::empirics::{
    chi_square_geometric, compare_distribution, iteration_slope, ks_distance, simulate, simulate_with_steps,
    write_histogram_csv, EmpiricalStats, SampleConfig, HISTOGRAM_BINS,
};
use binary_euclid::Error;

const K: f64 = 0.7059712461019164;

fn config(e: u32, n: usize, seed: u64) -> SampleConfig {
    SampleConfig { bound_exponent: e, sample_count: n, seed }
}

fn large_run() -> &'static EmpiricalStats {
    static STATS: OnceLock<EmpiricalStats> = OnceLock::new();
    STATS.get_or_init(|| simulate(&config(128, 100_000, 1)).unwrap())
}

#[test]
fn same_seed_same_statistics() {
    let a = simulate(&config(40, 10_000, 7)).unwrap();
    let b = simulate(&config(40, 10_000, 7)).unwrap();
    assert_eq!(a.mean_b3, b.mean_b3);
    assert_eq!(a.val2_counts, b.val2_counts);
    assert_eq!(a.ratio_samples, b.ratio_samples);
    let c = simulate(&config(40, 10_000, 8)).unwrap();
    assert_ne!(a.val2_counts, c.val2_counts);
}

#[test]
fn thread_count_does_not_change_results() {
    let run = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| simulate(&config(48, 20_000, 3)).unwrap())
    };
    let one = run(1);
    let four = run(4);
    assert_eq!(one.mean_b3, four.mean_b3);
    assert_eq!(one.mean_shift_total, four.mean_shift_total);
    assert_eq!(one.val2_step_counts, four.val2_step_counts);
    assert_eq!(one.ratio_histograms, four.ratio_histograms);
}

#[test]
fn invalid_configurations() {
    assert!(matches!(simulate(&config(2, 10, 1)), Err(Error::Config(_))));
    assert!(matches!(simulate(&config(40, 0, 1)), Err(Error::Config(_))));
    assert!(matches!(iteration_slope(&[20, 20], &config(20, 100, 1)), Err(Error::Config(_))));
    assert!(matches!(iteration_slope(&[20], &config(20, 100, 1)), Err(Error::Config(_))));
}

#[test]
fn chi_square_on_exact_geometric_counts() {
    let counts: BTreeMap<u64, u64> = (1..=20).map(|k| (k, 1u64 << (20 - k))).collect();
    let t = chi_square_geometric(&counts).unwrap();
    assert!(t.statistic < 0.1, "{t:?}");
    assert!(t.p_value > 0.99);
    assert!(chi_square_geometric(&BTreeMap::new()).is_err());

    let skewed: BTreeMap<u64, u64> = [(1, 700), (2, 200), (3, 100)].into();
    assert!(chi_square_geometric(&skewed).unwrap().p_value < 1e-6);
}

#[test]
fn shift_at_a_fixed_step_is_geometric() {
    let stats = simulate_with_steps(&config(40, 100_000, 1), &[]).unwrap();
    assert_eq!(stats.val2_step, 10);
    let t = chi_square_geometric(&stats.val2_step_counts).unwrap();
    assert!(t.p_value > 0.001, "p = {}", t.p_value);
    assert!(t.observations > 99_000);
    let half = stats.val2_histogram[&1];
    assert!(half > 0.5 && half < 0.52);
}

#[test]
fn mean_steps_grow_like_k_times_e() {
    let stats = simulate_with_steps(&config(40, 100_000, 1), &[]).unwrap();
    let per_bit = stats.mean_b3 / 40.0;
    assert!((per_bit - K).abs() / K < 0.04, "{per_bit}");
    assert!(stats.mean_shift_total / stats.mean_b3 > 1.9 && stats.mean_shift_total / stats.mean_b3 < 2.1);
}

#[test]
fn slope_of_mean_steps() {
    let fit = iteration_slope(&[20, 28, 36, 44], &config(20, 40_000, 1)).unwrap();
    assert_eq!(fit.points.len(), 4);
    assert!((fit.slope - K).abs() / K < 0.02, "slope {}", fit.slope);
    assert!((fit.shift_slope - 2.0 * K).abs() / K < 0.04);
}

#[test]
fn ks_distance_of_a_perfect_sample() {
    let n = 1000;
    let xs: Vec<f64> = (0..n).map(|i| (i as f64 + 0.5) / n as f64).collect();
    assert!((ks_distance(&xs, |x| x) - 0.5 / n as f64).abs() < 1e-12);
    assert!(ks_distance(&xs, |x| x * x) > 0.2);
}

#[test]
fn ratios_follow_the_iterated_model() {
    let stats = large_run();
    let grid = Grid::with_f64(11.0, 8, 128).unwrap();
    for n in [0usize, 1, 2, 5, 8, 12] {
        let model = iterate_ftilde(&grid, 4, n).unwrap();
        let d = compare_distribution(stats, n, &model).unwrap();
        assert!(d < 0.01, "n = {n}: D = {d}");
    }
    let fixed = iterate_ftilde(&grid, 4, 0).unwrap();
    assert!(compare_distribution(stats, 12, &fixed).unwrap() > 0.05);
    assert!(compare_distribution(stats, 3, &fixed).is_err());
}

#[test]
fn histogram_csv() {
    let stats = simulate(&config(24, 2_000, 5)).unwrap();
    let mut out = Vec::new();
    write_histogram_csv(&stats, &mut out).unwrap();
    let text = String::from_utf8(out).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("kind,key,bin_low,bin_high,frequency"));
    let ratio_rows = text.lines().filter(|l| l.starts_with("ratio,")).count();
    assert_eq!(ratio_rows, 6 * HISTOGRAM_BINS);
    for bins in stats.ratio_histograms.values() {
        assert!((bins.iter().sum::<f64>() - 1.0).abs() < 1e-9);
    }
}
