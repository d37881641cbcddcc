use binary_euclid::cf::{evaluate, expand, stats};
use binary_euclid::natural::nat;

fn main() {
    for (u, v) in [(7, 13), (3, 11), (355, 1133), (104729, 1299709)] {
        let cf = expand(&nat(u), &nat(v)).unwrap();
        let s = stats(&cf);
        let (p, q) = evaluate(&cf).unwrap();
        println!("{u}/{v} = {cf}");
        println!("    depth {}, ones {}, shifts {}, folds back to {p}/{q}", s.depth, s.ones_total, s.shifts_total);
    }
}
