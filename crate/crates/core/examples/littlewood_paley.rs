//! Littlewood–Paley pieces of a random field: the pieces sum back to the
//! field, Bernstein ratios on single shells, and the square-function ratio.
//!
//!     cargo run --release --example littlewood_paley

use bnls::diagnostics::square_function_check;
use bnls::rng::SeededRng;
use bnls::spectral::{bernstein_ratio, lp_decompose, lp_project, Dyadic, LpKind};
use bnls::{Field2D, GridSpec};

fn main() -> bnls::Result<()> {
    let grid = GridSpec::torus(128)?;
    let mut rng = SeededRng::new(3);
    let f = Field2D::from_spectrum(grid, |[a, b]| rng.complex_normal() * (-(a * a + b * b) / 200.0).exp());

    let pieces = lp_decompose(&f);
    let mut sum = Field2D::zeros(grid, bnls::Representation::Frequency);
    for p in &pieces {
        sum = sum.linear_combination(1.0.into(), p, 1.0.into())?;
    }
    println!("{} pieces, reconstruction error {:.3e}", pieces.len(), sum.relative_l2_error(&f)?);

    for n in [4, 8, 16, 32] {
        let shell = Dyadic::new(n)?;
        let band = lp_project(&f, shell, LpKind::Band);
        let ratios: Vec<f64> =
            [2.0, 4.0, f64::INFINITY].iter().map(|&p| bernstein_ratio(&band, shell, 1.0, p)).collect::<bnls::Result<_>>()?;
        println!("N = {n:2}: Bernstein ratios (p = 2, 4, inf) {ratios:.4?}");
    }
    for p in [2.0, 4.0] {
        println!("square function ratio p = {p}: {:.4}", square_function_check(&f, p)?);
    }
    Ok(())
}
