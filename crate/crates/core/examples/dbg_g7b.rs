use hexcurve::fp::FpCtx;
use hexcurve::gb::{syzygies, FreeModuleMap, ModPoly};
use hexcurve::plane::{linear_system_forms, PlanePoint};
use hexcurve::poly::*;
use hexcurve::rng::Rng;
use std::time::Instant;

fn main() {
    let ctx = FpCtx::new(12347);
    let plane = PolyRing::plane(ctx);
    let mut rng = Rng::new(11);
    let p = PlanePoint::random_affine(&mut rng, &ctx);
    let basis = linear_system_forms(&plane, 6, &[(p, 3)], &[]);
    let mut f = plane.zero();
    for b in &basis { f = f.add(&plane, &b.scale(&plane, rng.fp(ctx.prime()))); }
    let adjoints = linear_system_forms(&plane, 3, &[(p, 2)], &[]);
    let canon = PolyRing::new(ctx, &["y0","y1","y2","y3","y4","y5","y6"], MonomialOrder::GrevLex, CoeffMode::Field);
    let d6 = DegreeBasis::new(&plane, 6);
    let monos2 = canon.graded_basis(2);
    let mut cols = Vec::new();
    for m in &monos2 {
        let mut idx = Vec::new();
        for (v, &e) in m.exp.iter().enumerate() { for _ in 0..e { idx.push(v); } }
        cols.push(d6.coords(&adjoints[idx[0]].multiply(&plane, &adjoints[idx[1]]).unwrap()));
    }
    let mat = hexcurve::matrix::FpMatrix::from_columns(d6.len(), cols);
    let ker = mat.kernel_basis(&ctx);
    let quadrics: Vec<GradedPoly> = (0..ker.cols).map(|c| {
        let col = ker.column(c);
        let terms: Vec<Term> = monos2.iter().enumerate().filter(|&(i,_)| col[i] != 0)
            .map(|(i,m)| Term { mono: *m, coeff: Coeff::from_base(col[i]) }).collect();
        canon.from_terms(terms)
    }).collect();
    let _ = f;
    let shifts: Vec<i32> = quadrics.iter().map(|_| 2).collect();
    let d1 = FreeModuleMap { source_shifts: shifts, target_shifts: vec![0], entries: vec![quadrics] };
    let t = Instant::now();
    let raw = syzygies(&canon, &d1);
    println!("raw syzygies: {} in {:.1?}", raw.source_rank(), t.elapsed());
    let colsm: Vec<ModPoly> = (0..raw.source_rank()).map(|j| raw.column(j)).collect();
    let mut bydeg = std::collections::BTreeMap::<i32, usize>::new();
    for c in &colsm { *bydeg.entry(c.shifted_degree(&raw.target_shifts).unwrap()).or_default() += 1; }
    println!("by degree: {:?}", bydeg);
    // how expensive is one module GB of the degree-3 part?
    let deg3: Vec<ModPoly> = colsm.iter().filter(|c| c.shifted_degree(&raw.target_shifts) == Some(3)).cloned().collect();
    let t = Instant::now();
    let res = hexcurve::gb::modfree::module_groebner_with_syzygies(&canon, &deg3);
    println!("module GB of {} degree-3 syzygies: {} elements in {:.1?}", deg3.len(), res.basis.len(), t.elapsed());
}
