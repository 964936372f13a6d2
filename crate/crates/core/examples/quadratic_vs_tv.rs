//! Sweeps the regularization weight for the quadratic smoothness prior and
//! for total variation on the same grid data.
//!
//! ```
//! cargo run --release --example quadratic_vs_tv
//! ```

use blursr::bench::{compare_priors, log_grid, GridConfig};

fn main() -> blursr::Result<()> {
    let lambdas = log_grid(1e-5, 10.0, 7)?;
    let c = compare_priors(&GridConfig::default(), &lambdas, &lambdas)?;

    println!("{:>10}  {:>10}  {:>10}", "lambda", "quadratic", "tv");
    for (q, t) in c.quadratic.iter().zip(&c.tv) {
        println!("{:>10.0e}  {:>10.2}  {:>10.2}", q.lambda, q.psnr, t.psnr);
    }
    println!(
        "best: quadratic {:.2} dB, tv {:.2} dB",
        c.best_quadratic_psnr(),
        c.best_tv_psnr()
    );
    Ok(())
}
