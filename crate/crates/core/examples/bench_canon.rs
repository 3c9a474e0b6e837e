use hexcurve::canon::*;
use hexcurve::homalg::koszul_betti;
use hexcurve::plane::random_model;
use std::time::Instant;

fn main() {
    let t = Instant::now();
    let model = random_model(5, 12347, 42, 20).unwrap();
    println!("model: {:.2?}", t.elapsed());
    let t = Instant::now();
    let curve = canonical_curve(&model).unwrap();
    println!("canonical curve + GB + hilbert: {:.2?} ({} quadrics, gb size {})",
        t.elapsed(), curve.quadrics.len(), curve.ideal.groebner().len());
    let t = Instant::now();
    let b12 = koszul_betti(&curve.ring, &curve.quadrics, 1, 2);
    let b23 = koszul_betti(&curve.ring, &curve.quadrics, 2, 3);
    println!("beta12 = {}, beta23 = {} in {:.2?}", b12, b23, t.elapsed());
    let t = Instant::now();
    let s0 = scroll(&curve, 0).unwrap();
    println!("line scroll: {:.2?}", t.elapsed());
    let t = Instant::now();
    let s4 = scroll(&curve, 4).unwrap();
    println!("conic scroll: {:.2?}", t.elapsed());
    let t = Instant::now();
    let rep = syzygy_scheme(&curve, &[s0.clone(), s4.clone()], &[0, 1]);
    println!("syzygy scheme (2 scrolls): {} in {:.2?}", rep.table_row(), t.elapsed());
    let t = Instant::now();
    let b46 = koszul_betti(&curve.ring, &curve.quadrics, 4, 6);
    println!("beta_4,6 = {} in {:.2?}", b46, t.elapsed());
    let t = Instant::now();
    let b56 = koszul_betti(&curve.ring, &curve.quadrics, 5, 6);
    println!("beta_5,6 = {} in {:.2?}", b56, t.elapsed());
}
