//! K, λ and Kλ from a small ladder (levels 7 to 9, 128 bits). Takes a few seconds.

use binary_euclid::density::{compute_constants, solve_ladder, IterationPolicy, LadderParams};

fn main() {
    let params = LadderParams {
        z_max: 11.0,
        level: 9,
        extrapolations: 2,
        r: 4,
        precision: 128,
        policy: IterationPolicy::desk(),
    };
    let ladder = solve_ladder(&params, None, |msg| eprintln!("{msg}")).unwrap();
    let c = compute_constants(&ladder, params.r).unwrap();
    println!("K          = {}", c.k.to_digits(20));
    println!("lambda     = {}", c.lambda.to_digits(20));
    println!("K*lambda   = {}", c.k_lambda.to_digits(20));
    println!("4 ln2/pi^2 = {}", c.conjectured.to_digits(20));
    println!("ln2/E_inf  = {}", c.k_from_e_inf.to_digits(20));
    for (j, column) in c.k_table.columns.iter().enumerate() {
        let row: Vec<String> = column.iter().map(|v| v.to_digits(16)).collect();
        println!("K column {j}: {}", row.join("  "));
    }
}
