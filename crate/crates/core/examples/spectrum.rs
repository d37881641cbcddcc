use binary_euclid::operators::{build_b2_matrix, spectrum};

fn main() {
    for dim in [256, 512] {
        let b = build_b2_matrix(dim).unwrap();
        let result = spectrum(&b, 3).unwrap();
        println!("dim {dim}:");
        for e in &result.eigenvalues {
            println!("    {:+.8} {:+.8}i   |.| = {:.8}   residual {:.1e}", e.re, e.im, e.modulus(), e.residual);
        }
    }
}
