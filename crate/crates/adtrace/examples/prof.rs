use adtrace::geomside::*;
use adtrace::specside::*;
use adtrace::TruncationPolicy;
use num_complex::Complex64 as C;
use std::time::Instant;
fn main() {
    let cfg = TraceConfig {
        weight: 12, level: 1,
        test: TestInput::RawS(vec![(3, C::new(24.0, 0.0))]),
        z: C::new(0.5, 0.0),
        policy: TruncationPolicy { height: 20.0, max_nu: 6, ..Default::default() },
    };
    let t0 = Instant::now();
    let g = geometric_side(&cfg).unwrap();
    println!("geom total {:?} tails {:.2e} in {:?}", g.total, g.j_ell_tail + g.j_hyp_tail, t0.elapsed());
    let f = level1_newform(12, 420).unwrap();
    let spec = spectral_side(1, 12, &SpectralMode::Resolvent { s: vec![(3, C::new(24.0,0.0))] }, cfg.z, &[f]).unwrap();
    let lhs = C::new(spectral_constant(12, 1), 0.0) * spec;
    println!("spec {:?}", lhs);
    println!("residual {:.3e}", (g.total - lhs).norm());
}
