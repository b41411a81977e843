use cqfix_core::{
    solvers::{run, Scheme, SolverConfig},
    ConvexSet64, KSchedule64, MappingSpec64, SpaceGeometry64, Vector64,
};
use std::time::Instant;

fn report(label: &str, m: &MappingSpec64, cfg: &SolverConfig64, every: usize) {
    let t0 = Instant::now();
    match run(m, cfg) {
        Ok(trace) => {
            println!(
                "{label}: iters={} term={:?} dist={:.3e} time={:.2}s",
                trace.iterations(),
                trace.termination,
                trace.final_distance(),
                t0.elapsed().as_secs_f64()
            );
            for r in &trace.records {
                if r.n % every == 0 {
                    println!("   n={:4} dist={:.3e} res={:.3e} phi_step={:.3e}", r.n, r.dist_to_target, r.residual, r.phi_step);
                }
            }
        }
        Err(e) => println!("{label}: ERROR {e}"),
    }
}

use cqfix_core::SolverConfig64;

fn main() {
    // ---- A2-style instance: p=3, d=3, generalized projection onto a box.
    let gp = SpaceGeometry64::p_norm(3.0, 3).unwrap();
    let k = ConvexSet64::hyper_box(
        Vector64::from_slice(&[-1.0, -1.0, -1.0]).unwrap(),
        Vector64::from_slice(&[1.0, 1.0, 1.0]).unwrap(),
    )
    .unwrap();
    let m = MappingSpec64::generalized_projection(k.clone(), gp.clone()).unwrap();
    let mut cfg = SolverConfig64::new(
        Scheme::HybridBanach,
        Vector64::from_slice(&[2.0, 0.5, -3.0]).unwrap(),
    );
    cfg.max_iter = 500;
    report("A2 hybrid_banach p3 box", &m, &cfg, 50);

    // ---- A7-style instance: shift-and-square map, hybrid_hilbert.
    let m = MappingSpec64::goebel_kirk(6).unwrap();
    let mut cfg = SolverConfig64::new(
        Scheme::HybridHilbert,
        Vector64::from_slice(&[0.5, 0.3, -0.2, 0.1, 0.4, -0.3]).unwrap(),
    );
    cfg.max_iter = 500;
    report("A7 hybrid_hilbert goebel d6", &m, &cfg, 25);

    // ---- mann vs nakajo_takahashi on a rotation.
    let g2 = SpaceGeometry64::euclidean(2).unwrap();
    let rot = MappingSpec64::rotation(1.0, g2.clone()).unwrap();
    let x0 = Vector64::from_slice(&[2.0, 1.0]).unwrap();
    report("mann rotation", &rot, &SolverConfig64::new(Scheme::Mann, x0.clone()), 100);
    report("nt rotation", &rot, &SolverConfig64::new(Scheme::NakajoTakahashi, x0.clone()), 100);
    report("myx rotation", &rot, &SolverConfig64::new(Scheme::Myx, x0.clone()), 100);

    // ---- CQ schemes on a contraction (euclid).
    let contraction = MappingSpec64::contraction(
        0.5,
        Vector64::from_slice(&[0.5, -0.25]).unwrap(),
        g2.clone(),
    )
    .unwrap();
    let x0c = Vector64::from_slice(&[4.0, 3.0]).unwrap();
    report("nt contraction", &contraction, &SolverConfig64::new(Scheme::NakajoTakahashi, x0c.clone()), 50);
    report("myx contraction", &contraction, &SolverConfig64::new(Scheme::Myx, x0c.clone()), 50);
    report("hh contraction", &contraction, &SolverConfig64::new(Scheme::HybridHilbert, x0c.clone()), 50);
    report("kimxu contraction", &contraction, &SolverConfig64::new(Scheme::KimXu, x0c.clone()), 50);

    // ---- hybrid_banach on an origin contraction in p = 3.
    let cp = MappingSpec64::contraction(0.5, Vector64::zeros(3), gp.clone()).unwrap();
    let x0p = Vector64::from_slice(&[2.0, -1.0, 1.5]).unwrap();
    report("hb contraction p3", &cp, &SolverConfig64::new(Scheme::HybridBanach, x0p), 50);

    // ---- synthetic-k instance (A1): hybrid_hilbert with k_n = 1 + 1/(n+1)^2.
    let box2 = ConvexSet64::hyper_box(
        Vector64::from_slice(&[-1.0, -1.0]).unwrap(),
        Vector64::from_slice(&[1.0, 1.0]).unwrap(),
    )
    .unwrap();
    let proj = MappingSpec64::metric_projection(box2, g2)
        .unwrap()
        .with_k_schedule(KSchedule64::OnePlusInvSquare);
    let mut cfg = SolverConfig64::new(Scheme::HybridHilbert, Vector64::from_slice(&[3.0, 4.0]).unwrap());
    cfg.max_iter = 300;
    report("A1 hybrid_hilbert synthetic k", &proj, &cfg, 25);
}
