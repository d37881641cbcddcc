use binary_euclid::mellin::{log_spaced, mellin_table, p_max};

fn main() {
    println!("{:>12} {:>24} {:>14}", "x", "D1(x)", "without P");
    for row in mellin_table(&log_spaced(3.25, 9.25, 13), 16, 160).unwrap() {
        println!("{:>12.6e} {:>24} {:>14}", row.x, row.direct.to_digits(20), row.discrepancy().to_digits(4));
    }
    let m = p_max(1024, 96).unwrap();
    println!("max |P(t)| = {} at t = {:.4}", m.value, m.t);
}
