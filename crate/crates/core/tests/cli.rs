mod common;

use binary_euclid::cli::{main_with_args, Iterations, OutputFormat, RunConfig};
use binary_euclid::Error;
use serde_json::Value;

fn run(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let argv = std::iter::once("binary-euclid").chain(args.iter().copied());
    let code = main_with_args(argv, &mut out);
    (code, String::from_utf8(out).unwrap())
}

fn json(args: &[&str]) -> Value {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let (code, text) = run(&full);
    assert_eq!(code, 0, "{text}");
    serde_json::from_str(&text).unwrap()
}

fn small_ladder_flags(cache: &str) -> Vec<&str> {
    vec!["--grid-level", "10", "--extrapolations", "2", "--precision-bits", "160", "--cache-dir", cache]
}

#[test]
fn gcd_text_and_trace() {
    let (code, text) = run(&["gcd", "13", "7", "--trace", "--reproducible"]);
    assert_eq!(code, 0);
    assert_eq!(text, "1\nb3_count=3 shift_total=4 shift_events=3\n");
    let v = json(&["gcd", "48", "180"]);
    assert_eq!(v["gcd"], "12");
}

#[test]
fn xgcd_and_cf() {
    let v = json(&["xgcd", "240", "46"]);
    assert_eq!(v["gcd"], "2");
    let alpha: i64 = v["alpha"].as_str().unwrap().parse().unwrap();
    let beta: i64 = v["beta"].as_str().unwrap().parse().unwrap();
    assert_eq!(alpha * 240 + beta * 46, 2);

    let (code, text) = run(&["cf", "7", "13", "--reproducible"]);
    assert_eq!(code, 0);
    assert_eq!(text, "1/1 + 2/1 + 4/(1+2)\nr=3, ones=3, shifts=4\n");
    let (_, csv) = run(&["--format", "csv", "cf", "7", "13"]);
    assert_eq!(csv, "index,a,k\n1,1,1\n2,1,2\n3,1,1\n");
}

#[test]
fn invalid_input_exits_with_two() {
    assert_eq!(run(&["gcd", "0", "7"]).0, 2);
    assert_eq!(run(&["gcd", "x", "7"]).0, 2);
    assert_eq!(run(&["cf", "4", "7"]).0, 2);
    assert_eq!(run(&["cf", "3", "9"]).0, 2);
    assert_eq!(run(&["frobnicate"]).0, 2);
    assert_eq!(run(&["--grid-level", "3", "gcd", "1", "1"]).0, 2);
    assert_eq!(run(&["--threads", "0", "gcd", "1", "1"]).0, 2);
    assert_eq!(run(&["--format", "xml", "gcd", "1", "1"]).0, 2);
    assert_eq!(run(&["--config", "/nonexistent/config.txt", "gcd", "1", "1"]).0, 2);
    assert_eq!(run(&["spectrum", "--dim", "48"]).0, 2);
    assert_eq!(run(&["vallee-sum", "--a-max", "100"]).0, 2);
    assert_eq!(run(&["mellin-check", "--lg-min", "0.5"]).0, 2);
}

#[test]
fn config_file_then_flags() {
    let mut cfg = RunConfig::default();
    cfg.apply_file_text("# desk run\nprecision_bits = 256\ngrid_level = 11 # finer\niterations = 40\nseed=9\noutput_format = csv\n")
        .unwrap();
    assert_eq!(cfg.precision_bits, 256);
    assert_eq!(cfg.grid_level, 11);
    assert_eq!(cfg.iterations, Iterations::Fixed(40));
    assert_eq!(cfg.seed, 9);
    assert_eq!(cfg.output_format, OutputFormat::Csv);
    assert!(matches!(cfg.apply_file_text("colour = blue"), Err(Error::Config(_))));
    assert!(matches!(cfg.apply_file_text("grid_level"), Err(Error::Config(_))));
    assert!(matches!(cfg.apply_file_text("iterations = 0"), Err(Error::Config(_))));

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.conf");
    std::fs::write(&path, "output_format = json\nseed = 5\n").unwrap();
    let p = path.to_str().unwrap();
    let (code, text) = run(&["--config", p, "gcd", "9", "6"]);
    assert_eq!(code, 0);
    assert!(text.starts_with('{'));
    let (_, text) = run(&["--config", p, "--format", "text", "--reproducible", "gcd", "9", "6"]);
    assert_eq!(text, "3\n");
}

#[test]
fn reproducible_runs_are_byte_identical() {
    let args = ["--reproducible", "--seed", "4", "simulate", "--samples", "3000", "--bound-exponent", "32"];
    let (c1, a) = run(&args);
    let (c2, b) = run(&args);
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(a, b);
    assert!(!a.contains("elapsed"));
    let (_, timed) = run(&args[1..]);
    assert!(timed.contains("elapsed"));
}

#[test]
fn simulate_json() {
    let v = json(&["simulate", "--samples", "20000", "--bound-exponent", "40", "--exponents", "20,28"]);
    let per_bit = v["mean_b3_per_bit"].as_f64().unwrap();
    assert!((per_bit - 0.706).abs() < 0.04);
    assert!(v["val2_chi_square"]["p_value"].as_f64().unwrap() > 0.0);
    assert_eq!(v["slope"]["points"].as_array().unwrap().len(), 2);
}

#[test]
fn density_steps_and_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("f1.txt");
    let p = path.to_str().unwrap();
    let v = json(&["--grid-level", "8", "--precision-bits", "128", "density", "--steps", "1", "--output", p]);
    assert_eq!(v["iterations"], 1);
    let half = v["ftilde"][1][1].as_str().unwrap().parse::<f64>().unwrap();
    assert!((half - 0.2300830038559996).abs() < 1e-9);
    assert!(std::fs::read_to_string(&path).unwrap().starts_with("# binary-euclid grid function"));

    let (code, csv) = run(&["--format", "csv", "--grid-level", "6", "--precision-bits", "64", "density", "--steps", "0"]);
    assert_eq!(code, 0);
    assert_eq!(csv.lines().next(), Some("z,x,ftilde"));
    assert_eq!(csv.lines().count(), 66);
}

#[test]
fn constants_and_vallee_from_cached_ladder() {
    let cache = common::cache_dir();
    let cache = cache.to_str().unwrap();
    let mut args = small_ladder_flags(cache);
    args.push("constants");
    let v = json(&args);
    let k: f64 = v["k"].as_str().unwrap().parse().unwrap();
    let lambda: f64 = v["lambda"].as_str().unwrap().parse().unwrap();
    assert!((k - 0.7059712461019164).abs() < 1e-12);
    assert!((lambda - 0.3979226811883166).abs() < 1e-12);
    assert_eq!(v["converged"], true);

    let mut args = small_ladder_flags(cache);
    args.extend(["vallee-sum", "--a-max", "4095"]);
    let v = json(&args);
    assert_eq!(v["monotone"], true);
    assert!(v["corrected_deficit"].as_f64().unwrap().abs() < 1e-10);
    assert!((v["k_from_sum"].as_f64().unwrap() - 0.7059712461019164).abs() < 1e-9);
}

#[test]
fn spectrum_json() {
    let v = json(&["spectrum", "--dim", "256"]);
    assert_eq!(v["matrix_dim"], 256);
    let ev = v["eigenvalues"].as_array().unwrap();
    assert_eq!(ev.len(), 3);
    assert!((ev[0]["re"].as_f64().unwrap() - 1.0).abs() < 5e-4);
    assert!((ev[1]["im"].as_f64().unwrap() - 0.0884).abs() < 5e-3);
    let (code, csv) = run(&["--format", "csv", "spectrum", "--dim", "128", "--count", "1"]);
    assert_eq!(code, 0);
    assert_eq!(csv.lines().count(), 2);
}

#[test]
fn mellin_check_csv() {
    let (code, text) = run(&["--format", "csv", "--precision-bits", "128", "mellin-check", "--points", "5", "--lg-min", "3", "--lg-max", "7"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 6);
    for line in &lines[1..] {
        let d: f64 = line.rsplit(',').next().unwrap().parse().unwrap();
        assert!(d.abs() < 1e-12);
    }
}
