use hexcurve::canon::*;
use hexcurve::deform::*;
use hexcurve::plane::random_model;
use std::time::Instant;

fn main() {
    let t0 = Instant::now();
    let model = random_model(5, 12347, 42, 20).unwrap();
    let curve = canonical_curve(&model).unwrap();
    println!("curve: {:.2?}", t0.elapsed());

    let t = Instant::now();
    let strand = strand_through_m(&curve).unwrap();
    println!("strand through position 5: tail {} in {:.2?}", strand.rank(5), t.elapsed());

    let t = Instant::now();
    let ks = normal_space(&curve, &strand).unwrap();
    println!("normal space: {} = {} + {} in {:.2?}",
        ks.normal_basis.cols, ks.trivial_basis.cols, ks.complement.cols, t.elapsed());

    let t = Instant::now();
    let dr = lift_resolution(&curve, &strand, &ks).unwrap();
    println!("lift: k = {}, checks {:?} in {:.2?}", dr.k, dr.checks, t.elapsed());

    let t = Instant::now();
    let scrolls: Vec<_> = (0..model.pencils.len()).map(|i| scroll(&curve, i).unwrap()).collect();
    println!("scrolls: {:.2?}", t.elapsed());

    let t = Instant::now();
    let fac = factor_m(&curve, &strand, &dr, &scrolls).unwrap();
    println!("factor_m: span {} unit {:?} in {:.2?}", fac.span_dim, fac.unit, t.elapsed());
    for (name, ok) in &fac.checks {
        println!("  [{}] {}", if *ok { "ok" } else { "FAIL" }, name);
    }

    let t = Instant::now();
    let sev = severi_tangent(&model).unwrap();
    let dr2 = differential_rank(&model, &curve, &ks, &sev).unwrap();
    println!("differential: tangent {} intersection {} rank {} pgl {} in {:.2?}",
        dr2.tangent_dim, dr2.intersection_dim, dr2.rank, dr2.pgl_span_matches, t.elapsed());
}
