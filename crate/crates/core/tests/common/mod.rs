#![allow(dead_code)]

use std::path::PathBuf;
use std::sync::OnceLock;

use binary_euclid::density::{solve_ladder, GridFunction, IterationPolicy, LadderParams};

pub const K_REF: &str = "0.7059712461019163915293141358528817666677";
pub const LAMBDA_REF: &str = "0.3979226811883166440767071611426549823098";

pub fn cache_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("grid-cache")
}

/// Levels 8..=10, 160 bits, r = 4: a few seconds from a cold cache.
pub fn small_params() -> LadderParams {
    LadderParams {
        z_max: 11.0,
        level: 10,
        extrapolations: 2,
        r: 4,
        precision: 160,
        policy: IterationPolicy::desk(),
    }
}

pub fn small_ladder() -> &'static [GridFunction] {
    static LADDER: OnceLock<Vec<GridFunction>> = OnceLock::new();
    LADDER.get_or_init(|| solve_ladder(&small_params(), Some(&cache_dir()), |_| {}).expect("small ladder"))
}

pub fn desk_ladder() -> &'static [GridFunction] {
    static LADDER: OnceLock<Vec<GridFunction>> = OnceLock::new();
    LADDER.get_or_init(|| solve_ladder(&LadderParams::desk(), Some(&cache_dir()), |_| {}).expect("desk ladder"))
}
