//! Wall time per RK4 step of the fig2 model at a given truncation.
//!
//! `cargo run --release --example step_timing -- <n_pl> <n_ph> [steps]`

use std::time::Instant;

use plexcav::model::assemble;
use plexcav::propagator::Propagator;
use plexcav::scenario::builtin;
use plexcav::Density;

fn main() {
    let args: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut cfg = builtin("fig2").expect("fig2 is a builtin");
    cfg.system.n_pl_levels = args.first().copied().unwrap_or(8);
    cfg.system.n_ph_levels = args.get(1).copied().unwrap_or(3);
    let steps = args.get(2).copied().unwrap_or(20);

    let sys = assemble::<f64>(&cfg.params(), &cfg.pulse_spec()).expect("valid truncation");
    let rho = Density::ground(sys.layout().clone());
    // start inside the pulse so the drive term is active
    let mut p = Propagator::new(&sys, &rho, 30.0).unwrap();
    let t = Instant::now();
    for _ in 0..steps {
        p.step(cfg.integrator.dt_fs).unwrap();
    }
    let ms = t.elapsed().as_secs_f64() / steps as f64 * 1e3;
    println!("dim {} {ms:.3} ms/step", sys.dim());
}
