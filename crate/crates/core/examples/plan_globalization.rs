//! Globalization arithmetic: cutoff, rescaling, iteration count and growth
//! exponent for a target time.
//!
//!     cargo run --release --example plan_globalization

use bnls::globalizer::{growth_exponent, plan};

fn main() -> bnls::Result<()> {
    println!("{}", plan(1.5, 1024.0, 1.0)?);
    for s in [1.2, 1.3, 1.5, 1.8, 1.95] {
        println!("s = {s:4}: growth exponent {:.4}", growth_exponent(s)?);
    }
    match plan(1.1, 1024.0, 1.0) {
        Ok(_) => println!("unexpected: s = 1.1 accepted"),
        Err(e) => println!("s = 1.1: {e}"),
    }
    Ok(())
}
