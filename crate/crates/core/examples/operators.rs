use binary_euclid::density::{solve_ladder, IterationPolicy, LadderParams};
use binary_euclid::operators::{apply_b2, f1_and_g1, identity_residuals, vallee_sum, DensityGrid, GFunction};
use binary_euclid::Real;

fn main() {
    let params = LadderParams { z_max: 11.0, level: 9, extrapolations: 2, r: 4, precision: 128, policy: IterationPolicy::desk() };
    let ladder = solve_ladder(&params, None, |_| {}).unwrap();
    let ftilde = &ladder[0];

    let f = DensityGrid::from_ftilde(ftilde);
    let bf = apply_b2(&f);
    println!("|f|_1 = {:.12}, |B2 f|_1 = {:.12}", f.l1_norm(), bf.l1_norm());
    println!("sup |B2 f - f| for z <= 2: {:.2e}", bf.sup_diff(&f, 2.0));

    let res = identity_residuals(&f, &[0.125, 0.5, 0.875]);
    println!("split residual {:.2e}, commutation residual {:.2e}", res.split_max(), res.commutation_max());

    let (f1, g1) = f1_and_g1(ftilde);
    println!("f(1) = {}, 2 g(1) = {}", f1.to_digits(18), g1.mul_pow2(1).to_digits(18));

    let g = GFunction::new(ftilde);
    let sum = vallee_sum(&g, (1 << 14) - 1).unwrap();
    println!("sum over odd a < 2^14: {:.12} (tail estimate {:.3e})", sum.partial, sum.tail);
}
