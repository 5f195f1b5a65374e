//! Samples `|1 − m(ξ₂+…+ξ₆)/(m(ξ₂)…m(ξ₆))|·N₂/N₃` in the Case-1 regime.
//!
//!     cargo run --release --example multiplier_bound

use bnls::imethod::{case1_multiplier_bound, Case1Regime, CASE1_CONSTANT};
use bnls::IMultiplier;

fn main() -> bnls::Result<()> {
    for n in [8, 16, 32] {
        let m = IMultiplier::with_cutoff(n, 1.5)?;
        let r = case1_multiplier_bound(&m, &Case1Regime::default(), 100_000, 0);
        println!("N = {n:3}: max {:.4}  mean {:.4}  (constant {CASE1_CONSTANT})", r.max_ratio, r.mean_ratio);
        println!("          worst tuple {:?}", r.worst);
    }
    Ok(())
}
