//! Cross-module integration checks: scroll resolutions against the
//! Koszul-cohomology ranks, Gorenstein symmetry of the canonical Betti
//! numbers, chain-map commutation, type-I certificates, and the
//! small-genus fixture where the full syzygy route is affordable.

mod common;

use hexcurve::canon::{
    canonical_curve, eagon_northcott, matrix_minors, scroll, scroll_chain_map, syzygy_scheme,
};
use hexcurve::fp::FpCtx;
use hexcurve::gb::Ideal;
use hexcurve::homalg::{betti_table, koszul_betti, linear_strand, resolve};
use hexcurve::plane::{linear_system_forms, random_model, PlanePoint};
use hexcurve::poly::{Coeff, DegreeBasis, GradedPoly, PolyRing};
use hexcurve::rng::Rng;

fn k5_curve() -> hexcurve::canon::CanonicalCurve {
    let model = random_model(5, 12347, 42, 20).unwrap();
    canonical_curve(&model).unwrap()
}

#[test]
fn scroll_minors_reduce_to_zero() {
    let curve = k5_curve();
    for i in 0..curve.model.pencils.len() {
        let s = scroll(&curve, i).unwrap();
        assert_eq!(s.minors.len(), 15);
        for m in &s.minors {
            assert!(curve.ideal.contains(m), "minor of scroll {i} survives reduction");
        }
        let h = s.ideal.hilbert();
        assert_eq!(h.proj_dim(), 5);
        assert_eq!(h.degree, 6);
    }
}

#[test]
fn scroll_betti_matches_eagon_northcott() {
    // the minor ideal of one scroll has the Eagon-Northcott ranks
    // 15, 40, 45, 24, 5 in degrees 2..6; probe the ends and the middle by
    // Koszul cohomology
    let curve = k5_curve();
    let s = scroll(&curve, 0).unwrap();
    let ring = &curve.ring;
    assert_eq!(koszul_betti(ring, &s.minors, 1, 2), 15);
    assert_eq!(koszul_betti(ring, &s.minors, 2, 3), 40);
    assert_eq!(koszul_betti(ring, &s.minors, 3, 4), 45);
    assert_eq!(koszul_betti(ring, &s.minors, 5, 6), 5);
    // the explicit complex is exact at the probed spots and has the ranks
    let en = eagon_northcott(ring, &s.matrix);
    assert!(en.composites_vanish());
    let ranks: Vec<usize> = (0..=en.length()).map(|i| en.rank(i)).collect();
    assert_eq!(ranks, vec![1, 15, 40, 45, 24, 5]);
}

#[test]
fn gorenstein_symmetry_probes() {
    // the canonical curve resolution is symmetric under
    // (i, j) -> (9 - i, 12 - j)
    let curve = k5_curve();
    let ring = &curve.ring;
    let b12 = koszul_betti(ring, &curve.quadrics, 1, 2);
    let b8_10 = koszul_betti(ring, &curve.quadrics, 8, 10);
    assert_eq!(b12, 36);
    assert_eq!(b8_10, 36);
    let b56 = koszul_betti(ring, &curve.quadrics, 5, 6);
    let b46 = koszul_betti(ring, &curve.quadrics, 4, 6);
    assert_eq!(b56, b46);
}

#[test]
fn chain_maps_commute_into_the_strand() {
    let curve = k5_curve();
    let strand = hexcurve::deform::strand_through_m(&curve).unwrap();
    let s = scroll(&curve, 2).unwrap();
    let maps = scroll_chain_map(&curve, &strand, &s);
    assert_eq!(maps.len(), 5);
    // position-5 component: 5k x 5 constants
    assert_eq!(maps[4].rows, 25);
    assert_eq!(maps[4].cols, 5);
    // square commutation at position 2, checked through the coefficient
    // matrices: K2 * alpha_2 = rhs built from alpha_1 and the EN map
    let ctx = &curve.ring.ctx;
    let en = eagon_northcott(&curve.ring, &s.matrix);
    let n = curve.ring.nvars();
    let alpha1 = &maps[0];
    let alpha2 = &maps[1];
    let lhs = strand.kernels[0].mul(ctx, alpha2);
    let mut rhs = hexcurve::matrix::FpMatrix::zero(36 * n, en.diffs[1].source_rank());
    for j in 0..en.diffs[1].source_rank() {
        for t in 0..en.diffs[1].target_rank() {
            let e = &en.diffs[1].entries[t][j];
            for term in &e.terms {
                let v = (0..n).find(|&v| term.mono.exp[v] == 1).unwrap();
                for r in 0..36 {
                    let c = alpha1.at(r, t);
                    if c != 0 {
                        let cur = rhs.at(r * n + v, j);
                        rhs.set(r * n + v, j, ctx.mul_add(cur, c, term.coeff.base));
                    }
                }
            }
        }
    }
    assert_eq!(lhs, rhs);
}

#[test]
fn type_i_certificates() {
    let curve = k5_curve();
    for i in 0..curve.model.pencils.len() {
        let sec = hexcurve::canon::pencil_sections(&curve, i).unwrap();
        assert_eq!(sec.h0_k_minus_2l, 1, "pencil {i} is type I");
        match &sec.residual {
            hexcurve::canon::ResidualSystem::PlaneForms(forms) => assert_eq!(forms.len(), 6),
            hexcurve::canon::ResidualSystem::FiberSpans { u0, uinf } => {
                assert_eq!(u0.len(), 6);
                assert_eq!(uinf.len(), 6);
            }
        }
    }
}

#[test]
fn octic_pencils_are_type_i_too() {
    let model = random_model(10, 12347, 42, 20).unwrap();
    let curve = canonical_curve(&model).unwrap();
    for i in [0usize, 5, 9] {
        let sec = hexcurve::canon::pencil_sections(&curve, i).unwrap();
        assert_eq!(sec.h0_k_minus_2l, 1);
    }
    let s = scroll(&curve, 0).unwrap();
    let h = s.ideal.hilbert();
    assert_eq!((h.proj_dim(), h.degree), (5, 6));
}

#[test]
fn genus7_fixture_resolve_agrees_with_koszul() {
    // plane sextic with one ordinary triple point: genus C(5,2) - 3 = 7;
    // the canonical model in P^6 has degree 12 and 10 quadric generators;
    // here the full syzygy route is affordable and must agree with the
    // Koszul-cohomology ranks
    let ctx = FpCtx::new(12347);
    let plane = PolyRing::plane(ctx);
    let mut rng = Rng::new(11);
    let (form, point) = loop {
        let p = PlanePoint::random_affine(&mut rng, &ctx);
        let basis = linear_system_forms(&plane, 6, &[(p, 3)], &[]);
        assert_eq!(basis.len(), 22); // 28 - 6
        let mut f = plane.zero();
        for b in &basis {
            f = f.add(&plane, &b.scale(&plane, rng.fp(ctx.prime())));
        }
        if !f.is_zero() {
            break (f, p);
        }
    };
    // adjoints: cubics with a double point there, dimension 7 = genus
    let adjoints = linear_system_forms(&plane, 3, &[(point, 2)], &[]);
    assert_eq!(adjoints.len(), 7);
    // quadrics of the canonical model by interpolation
    let canon: PolyRing = PolyRing::new(
        ctx,
        &["y0", "y1", "y2", "y3", "y4", "y5", "y6"],
        hexcurve::poly::MonomialOrder::GrevLex,
        hexcurve::poly::CoeffMode::Field,
    );
    let d6 = DegreeBasis::new(&plane, 6);
    let monos2 = canon.graded_basis(2);
    let mut cols = Vec::new();
    for m in &monos2 {
        let mut idx = Vec::new();
        for (v, &e) in m.exp.iter().enumerate() {
            for _ in 0..e {
                idx.push(v);
            }
        }
        let prod = adjoints[idx[0]].multiply(&plane, &adjoints[idx[1]]).unwrap();
        cols.push(d6.coords(&prod));
    }
    let mat = hexcurve::matrix::FpMatrix::from_columns(d6.len(), cols);
    let ker = mat.kernel_basis(&ctx);
    assert_eq!(ker.cols, 10, "quadrics of a genus-7 canonical curve");
    let quadrics: Vec<GradedPoly> = (0..ker.cols)
        .map(|c| {
            let col = ker.column(c);
            let terms: Vec<hexcurve::poly::Term> = monos2
                .iter()
                .enumerate()
                .filter(|&(i, _)| col[i] != 0)
                .map(|(i, m)| hexcurve::poly::Term {
                    mono: *m,
                    coeff: Coeff::from_base(col[i]),
                })
                .collect();
            canon.from_terms(terms)
        })
        .collect();
    let ideal = Ideal::new(canon.clone(), quadrics.clone());
    // full syzygy route
    let res = resolve(&ideal, 2);
    let table = betti_table(&res);
    let b12 = koszul_betti(&canon, &quadrics, 1, 2);
    let b23 = koszul_betti(&canon, &quadrics, 2, 3);
    let b24 = koszul_betti(&canon, &quadrics, 2, 4);
    assert_eq!(table.get(1, 2), b12);
    assert_eq!(table.get(2, 3), b23);
    assert_eq!(table.get(2, 4), b24);
    assert_eq!(b12, 10);
}

#[test]
fn syzygy_schemes_depend_only_on_ab_for_size_two() {
    // all 36 two-element subsets of the nine pencils give (dim 2, deg 18),
    // regardless of which pencils are chosen
    let model = random_model(9, 12347, 42, 20).unwrap();
    let curve = canonical_curve(&model).unwrap();
    let scrolls: Vec<_> = (0..9).map(|i| scroll(&curve, i).unwrap()).collect();
    for s in hexcurve::homalg::combinations(9, 2) {
        let row = syzygy_scheme(&curve, &scrolls, &s);
        assert_eq!((row.proj_dim, row.degree), (2, 18), "subset {s:?}");
    }
}

#[test]
fn table_beta12_values() {
    // the quadric counts of the syzygy schemes, as tabulated: 27 for two
    // pencils, 29/35 for three, 30/35/36 for four depending on the split
    let model = random_model(9, 12347, 42, 20).unwrap();
    let curve = canonical_curve(&model).unwrap();
    let scrolls: Vec<_> = (0..9).map(|i| scroll(&curve, i).unwrap()).collect();
    let beta12 = |subset: &[usize]| syzygy_scheme(&curve, &scrolls, subset).beta12;
    assert_eq!(beta12(&[0, 1]), 27); // a=2
    assert_eq!(beta12(&[5, 6]), 27); // b=2
    assert_eq!(beta12(&[0, 1, 2]), 29); // a=3
    assert_eq!(beta12(&[5, 6, 7]), 35); // b=3
    assert_eq!(beta12(&[0, 5, 6]), 36); // a=1, b=2
    assert_eq!(beta12(&[0, 1, 5]), 35); // a=2, b=1
    assert_eq!(beta12(&[0, 1, 2, 3]), 30); // a=4
    assert_eq!(beta12(&[0, 1, 2, 3, 4]), 30); // a=5
    assert_eq!(beta12(&[0, 1, 2, 5]), 35); // a=3, b=1
    assert_eq!(beta12(&[0, 5, 6, 7, 8]), 36); // a=1, b=4
}

#[test]
fn eliminate_graph_of_conic_parametrization() {
    // the image of t -> (s^2 : s t : t^2) is the conic x z = y^2:
    // eliminating the parameters from the graph ideal recovers it
    let ctx = FpCtx::new(101);
    let r = PolyRing::new(
        ctx,
        &["s", "t", "x", "y", "z"],
        hexcurve::poly::MonomialOrder::GrevLex,
        hexcurve::poly::CoeffMode::Field,
    );
    let s2 = r.var(0).multiply(&r, &r.var(0)).unwrap();
    let st = r.var(0).multiply(&r, &r.var(1)).unwrap();
    let t2 = r.var(1).multiply(&r, &r.var(1)).unwrap();
    let gens = vec![
        r.var(2).sub(&r, &s2),
        r.var(3).sub(&r, &st),
        r.var(4).sub(&r, &t2),
    ];
    let i = Ideal::new(r.clone(), gens);
    let e = i.eliminate(&[0, 1]);
    // the elimination ideal contains x z - y^2 and nothing of lower degree
    let conic = r
        .var(2)
        .multiply(&r, &r.var(4))
        .unwrap()
        .sub(&r, &r.var(3).multiply(&r, &r.var(3)).unwrap());
    assert!(e.contains(&conic));
    assert!(e.gens.iter().all(|g| g.degree().unwrap_or(0) >= 2));
}

#[test]
fn canonical_text_form_renders() {
    let curve = k5_curve();
    let q = &curve.quadrics[0];
    let text = q.render(&curve.ring);
    assert!(text.contains("x"));
    assert!(text.contains('*'));
}
