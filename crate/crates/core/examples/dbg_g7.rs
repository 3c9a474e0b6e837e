use hexcurve::fp::FpCtx;
use hexcurve::gb::Ideal;
use hexcurve::homalg::*;
use hexcurve::plane::{linear_system_forms, PlanePoint};
use hexcurve::poly::*;
use hexcurve::rng::Rng;

fn main() {
    let ctx = FpCtx::new(12347);
    let plane = PolyRing::plane(ctx);
    let mut rng = Rng::new(11);
    let p = PlanePoint::random_affine(&mut rng, &ctx);
    let basis = linear_system_forms(&plane, 6, &[(p, 3)], &[]);
    let mut f = plane.zero();
    for b in &basis {
        f = f.add(&plane, &b.scale(&plane, rng.fp(ctx.prime())));
    }
    let adjoints = linear_system_forms(&plane, 3, &[(p, 2)], &[]);
    let canon = PolyRing::new(ctx, &["y0","y1","y2","y3","y4","y5","y6"], MonomialOrder::GrevLex, CoeffMode::Field);
    let d6 = DegreeBasis::new(&plane, 6);
    let monos2 = canon.graded_basis(2);
    let mut cols = Vec::new();
    for m in &monos2 {
        let mut idx = Vec::new();
        for (v, &e) in m.exp.iter().enumerate() { for _ in 0..e { idx.push(v); } }
        let prod = adjoints[idx[0]].multiply(&plane, &adjoints[idx[1]]).unwrap();
        cols.push(d6.coords(&prod));
    }
    let mat = hexcurve::matrix::FpMatrix::from_columns(d6.len(), cols);
    let ker = mat.kernel_basis(&ctx);
    println!("quadrics: {}", ker.cols);
    let quadrics: Vec<GradedPoly> = (0..ker.cols).map(|c| {
        let col = ker.column(c);
        let terms: Vec<Term> = monos2.iter().enumerate().filter(|&(i,_)| col[i] != 0)
            .map(|(i,m)| Term { mono: *m, coeff: Coeff::from_base(col[i]) }).collect();
        canon.from_terms(terms)
    }).collect();
    let _ = f;
    let ideal = Ideal::new(canon.clone(), quadrics.clone());
    let res = resolve(&ideal, 2);
    println!("minimal flag: {}, truly minimal: {}", res.minimal, res.is_minimal_complex());
    println!("composites vanish: {}", res.composites_vanish());
    for i in 0..=res.length() {
        println!("rank F_{} = {} shifts {:?}", i, res.rank(i), {
            let mut s: Vec<i32> = res.shifts(i).to_vec(); s.sort(); s.dedup(); s
        });
    }
    // exactness at F_1 in degree 3: dim ker(d1)_3 vs dim im(d2)_3
    let b23 = koszul_betti(&canon, &quadrics, 2, 3);
    println!("koszul beta23 = {b23}");
    // count degree-3 generators of res at position 2
    let t = betti_table(&res);
    println!("resolve beta(2,3) = {}, beta(2,4) = {}", t.get(2,3), t.get(2,4));
}
