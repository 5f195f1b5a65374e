//! Strichartz ratio `‖e^{itΔ²}φ‖_{L⁶_{t,x}}/‖φ‖_{L²}` over random data.
//!
//!     cargo run --release --example strichartz

use bnls::diagnostics::{strichartz_constant_sample, AdmissiblePair, TimeWindow};
use bnls::GridSpec;

fn main() -> bnls::Result<()> {
    let pair = AdmissiblePair::new(6.0, 6.0, 0.0)?;
    let window = TimeWindow::new(0.05, 64)?;
    for n in [32, 64] {
        let r = strichartz_constant_sample(pair, 50, 1, GridSpec::torus(n)?, window.clone())?;
        println!("{n}²: max {:.4} median {:.4} max/median {:.4}", r.max, r.median, r.max_over_median());
    }
    Ok(())
}
