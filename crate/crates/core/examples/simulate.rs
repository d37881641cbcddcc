use binary_euclid::density::{iterate_ftilde, Grid};
use binary_euclid::empirics::{chi_square_geometric, compare_distribution, simulate, SampleConfig};

fn main() {
    let cfg = SampleConfig { bound_exponent: 96, sample_count: 20_000, seed: 11 };
    let stats = simulate(&cfg).unwrap();
    println!("mean subtract-shift steps per bit: {:.4}", stats.mean_b3 / cfg.bound_exponent as f64);

    let chi = chi_square_geometric(&stats.val2_step_counts).unwrap();
    println!("shift at step {}: chi-square {:.2} on {} df, p = {:.3}", stats.val2_step, chi.statistic, chi.degrees_of_freedom, chi.p_value);

    let grid = Grid::with_f64(11.0, 8, 96).unwrap();
    for n in [0, 1, 2, 5] {
        let model = iterate_ftilde(&grid, 4, n).unwrap();
        println!("x_{n}: KS distance to the model {:.4}", compare_distribution(&stats, n, &model).unwrap());
    }
}
