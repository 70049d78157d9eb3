use pertinv::rt::{fit_decay_exponent, lens_residual_sweep};

fn main() {
    let ks: Vec<u32> = vec![50, 100, 200, 400, 800];
    for (p, q) in [(2, 1), (3, 1), (5, 2), (5, 1)] {
        let rows = lens_residual_sweep(p, q, &ks).unwrap();
        for r in &rows {
            println!(
                "p={p} q={q} K={} z={:.6e} ztr={:.6e} res*K^1.5={:.6}",
                r.big_k,
                r.z,
                r.z_tr,
                r.residual * (r.big_k as f64).powf(1.5)
            );
        }
        let pts: Vec<(f64, f64)> = rows.iter().map(|r| (r.big_k as f64, r.residual)).collect();
        println!("exponent {:.4}", fit_decay_exponent(&pts).unwrap());
    }
}
