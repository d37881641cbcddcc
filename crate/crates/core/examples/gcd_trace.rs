use binary_euclid::gcd::{gcd_algorithm_v, gcd_binary, gcd_extended};
use binary_euclid::Natural;

fn main() {
    let u: Natural = "1189998819991197253".parse().unwrap();
    let v: Natural = "2305843009213693951".parse().unwrap();

    let (g, trace) = gcd_binary(&u, &v).unwrap();
    println!("gcd({u}, {v}) = {g}");
    println!("subtract-shift steps: {}, single-bit shifts: {}", trace.b3_count, trace.shift_total);
    println!("first shifts: {:?}", &trace.shifts[..trace.shifts.len().min(12)]);

    let (_, tv) = gcd_algorithm_v(&u, &v).unwrap();
    println!("Algorithm V exchanges: {}", tv.outer_exchanges);

    let (g, alpha, beta) = gcd_extended(&u, &v).unwrap();
    println!("{alpha} * u + {beta} * v = {g}");
}
