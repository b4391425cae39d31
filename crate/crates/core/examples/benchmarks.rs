//! Runs the built-in benchmark functions and prints what was found.

use std::time::Instant;

use grpf::funcs::{CircularWaveguide, DemoRational, GrapheneLine, MultilayerWaveguide};
use grpf::geometry::SearchDomain;
use grpf::phase::AnalyticFunction;
use grpf::refine::{run, RefineConfig};

fn show(f: &dyn AnalyticFunction<f64>, d: SearchDomain<f64>, dr: f64, tol: f64) {
    let t = Instant::now();
    let out = run(f, &d, dr, &RefineConfig::new(tol)).expect("run");
    println!(
        "{}: {} results, {} nodes, {} evaluations, {} iterations, {:.2?}",
        f.name(),
        out.results.len(),
        out.stats.nodes,
        out.stats.evaluations,
        out.stats.iterations,
        t.elapsed()
    );
    for r in &out.results {
        println!("  {:+.15} {:+.15}i  q={:+} acc={:.1e} {}", r.location.re, r.location.im, r.q, r.accuracy, r.status.as_str());
    }
    for u in &out.unresolved {
        println!("  unresolved {:+.6} {:+.6}i diam={:.1e} {}", u.location.re, u.location.im, u.diameter, u.message);
    }
    for w in &out.warnings {
        println!("  warning: {w}");
    }
}

fn main() {
    show(&DemoRational, SearchDomain::rectangle(-2.0, 2.0, -2.0, 2.0).unwrap(), 0.3, 1e-9);
    show(&CircularWaveguide::default(), SearchDomain::disk(grpf::geometry::ComplexPoint::new(0.0, 0.0), 1.0).unwrap(), 0.15, 1e-12);
    show(&MultilayerWaveguide::default(), SearchDomain::rectangle(1.0, 2.5, -1.0, 1.0).unwrap(), 0.5, 1e-9);
    show(&GrapheneLine::default(), SearchDomain::rectangle(-100.0, 400.0, -100.0, 400.0).unwrap(), 18.0, 1e-6);
}
