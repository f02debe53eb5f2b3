//! Damped-wave kernels, the per-mode propagator and empirical kernel bounds.
//!
//! Run with `cargo run --release --example kernel_propagator`.

use mhdwave::kernels::bounds::{verify_kernel_bounds, SampleSpec};
use mhdwave::kernels::checks::verify_kernels;
use mhdwave::kernels::{frequency_region, k0_hat, k1_hat, mode_propagator};

fn main() -> mhdwave::Result<()> {
    let gamma = 1.0;
    println!("{:>8} {:>8} {:>6} {:>14} {:>14}", "|k|^2", "t", "region", "K0", "K1");
    for &k2 in &[0.01, 0.25, 1.0, 16.0] {
        for &t in &[0.5, 5.0] {
            let region = format!("{:?}", frequency_region(gamma, k2));
            println!("{k2:>8} {t:>8} {region:>6} {:>14.6e} {:>14.6e}", k0_hat(gamma, k2, t)?, k1_hat(gamma, k2, t)?);
        }
    }

    let m = mode_propagator(gamma, 4.0, 0.1);
    println!("det M(0.1) = {:.15} (exp(-t/gamma) = {:.15})", m.det(), (-0.1f64).exp());

    let report = verify_kernels(7)?;
    for r in &report.rows {
        println!("{:<12} {:<24} err {:.3e} tol {:.1e} {}", r.check, r.params, r.max_error, r.tolerance, if r.passed { "ok" } else { "FAIL" });
    }

    let mut bounds = verify_kernel_bounds(gamma, &SampleSpec::s2((1e-4, 0.18)))?;
    bounds.extend(verify_kernel_bounds(gamma, &SampleSpec::s1((0.1875, 100.0)))?);
    for r in &bounds.rows {
        let theta = r.theta.map(|v| format!(" theta={v}")).unwrap_or_default();
        println!("{}{theta}: C_emp = {:.4} over {} samples", r.bound_id, r.c_emp, r.n_samples);
    }
    Ok(())
}
