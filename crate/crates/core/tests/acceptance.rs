//! Acceptance suite: one test per criterion, each printing a pass/fail
//! line. Every criterion runs at the default prime/seed pair and at three
//! further pairs. All equalities are exact over GF(p).

mod common;

use hexcurve::canon::{canonical_curve, scroll, syzygy_scheme};
use hexcurve::fp::FpCtx;
use hexcurve::homalg::koszul_betti;
use hexcurve::matrix::FpMatrix;
use hexcurve::plane::{random_model, verify_model};
use hexcurve::poly::PolyRing;
use hexcurve::report;
use hexcurve::rng::Rng;
use std::time::Instant;

/// Default pair first, then three more with primes across [101, 32003].
const PAIRS: [(u64, u64); 4] = [(12347, 42), (101, 9), (3011, 5), (32003, 3)];
const ALL_K: [usize; 8] = [4, 5, 6, 7, 8, 9, 10, 20];
const RETRIES: u32 = 20;

fn report_line(name: &str, pass: bool, detail: &str) {
    println!("criterion {name}: {} ({detail})", if pass { "PASS" } else { "FAIL" });
    assert!(pass, "criterion {name} failed: {detail}");
}

#[test]
fn criterion_1_kernel_correctness() {
    let t = Instant::now();
    for &(p, seed) in &PAIRS {
        let ctx = FpCtx::new(p);
        let mut rng = Rng::new(seed);
        // 100 random matrices over a spread of shape classes
        let shapes = [(6usize, 4usize), (4, 6), (12, 12), (20, 30), (1, 9), (9, 1), (17, 5)];
        for i in 0..100 {
            let (r, c) = shapes[i % shapes.len()];
            let m = FpMatrix::random(&mut rng, &ctx, r, c);
            let rank = m.rank(&ctx);
            let ker = m.kernel_basis(&ctx);
            assert_eq!(rank + ker.cols, c, "rank-nullity at p={p}");
            assert!(m.mul(&ctx, &ker).is_zero(), "kernel annihilation at p={p}");
            // independent fraction-free oracle
            assert_eq!(rank, common::bareiss_rank(&ctx, &m), "oracle rank at p={p}");
        }
    }
    let secs = t.elapsed().as_secs_f64();
    report_line("1 (kernel correctness)", secs < 10.0, &format!("{secs:.1}s < 10s"));
}

#[test]
fn criterion_2_groebner_oracle_equivalence() {
    let t = Instant::now();
    for &(p, seed) in &PAIRS {
        let ctx = FpCtx::new(p);
        let ring = PolyRing::new(
            ctx,
            &["w", "x", "y", "z"],
            hexcurve::poly::MonomialOrder::GrevLex,
            hexcurve::poly::CoeffMode::Field,
        );
        let mut rng = Rng::new(seed ^ 0xD1CE);
        for case in 0..25 {
            let ngens = 1 + rng.below(4) as usize;
            let mut gens = Vec::new();
            for _ in 0..ngens {
                let nterms = 2 + rng.below(3) as usize;
                let g = common::random_poly(&ring, &mut rng, 3, nterms);
                if !g.is_zero() {
                    gens.push(g);
                }
            }
            if gens.is_empty() {
                continue;
            }
            let fast = hexcurve::gb::reduced_groebner(&ring, &gens, None);
            let naive = common::naive_groebner(&ring, &gens);
            assert!(
                common::same_basis(&ring, &fast, &naive),
                "bases differ at p={p} case {case}"
            );
        }
    }
    let secs = t.elapsed().as_secs_f64();
    report_line("2 (groebner oracle equivalence)", secs < 60.0, &format!("{secs:.1}s < 60s"));
}

#[test]
fn criterion_3_construction() {
    for &(p, seed) in &PAIRS {
        let ring = PolyRing::plane(FpCtx::new(p));
        for &k in &ALL_K {
            let t = Instant::now();
            let model = random_model(k, p, seed, RETRIES)
                .unwrap_or_else(|e| panic!("construct k={k} p={p}: {e}"));
            let rep = verify_model(&ring, &model);
            assert!(rep.pass, "verify_model k={k} p={p}: {:?}", rep.checks);
            assert_eq!(rep.genus, 11, "genus k={k} p={p}");
            let curve = canonical_curve(&model)
                .unwrap_or_else(|e| panic!("canonical k={k} p={p}: {e}"));
            assert_eq!(curve.quadrics.len(), 36, "quadric count k={k} p={p}");
            let h = curve.ideal.hilbert();
            assert_eq!(h.proj_dim(), 1, "dim k={k} p={p}");
            assert_eq!(h.degree, 20, "degree k={k} p={p}");
            let secs = t.elapsed().as_secs_f64();
            assert!(secs < 300.0, "construction k={k} p={p} took {secs:.0}s");
        }
    }
    report_line("3 (construction)", true, "all k in {4..=10, 20} across 4 (p, seed) pairs");
}

#[test]
fn criterion_4_betti_numbers() {
    for &(p, seed) in &PAIRS {
        let mut first = true;
        for &k in &[5usize, 6, 7, 8, 9, 10, 20] {
            let t = Instant::now();
            let model = random_model(k, p, seed, RETRIES).expect("model");
            let curve = canonical_curve(&model).expect("curve");
            if first {
                let b12 = koszul_betti(&curve.ring, &curve.quadrics, 1, 2);
                let b23 = koszul_betti(&curve.ring, &curve.quadrics, 2, 3);
                assert_eq!(b12, 36, "beta_1_2 at p={p}");
                assert_eq!(b23, 160, "beta_2_3 at p={p}");
                first = false;
            }
            let b56 = koszul_betti(&curve.ring, &curve.quadrics, 5, 6);
            assert_eq!(b56, 5 * k, "beta_5_6 k={k} p={p}");
            if k <= 10 {
                let b46 = koszul_betti(&curve.ring, &curve.quadrics, 4, 6);
                assert_eq!(b46, 5 * k, "beta_4_6 k={k} p={p}");
            }
            let secs = t.elapsed().as_secs_f64();
            assert!(secs < 1800.0, "betti k={k} p={p} took {secs:.0}s");
        }
    }
    report_line(
        "4 (betti numbers)",
        true,
        "beta_1_2 = 36, beta_2_3 = 160, beta_4_6 = beta_5_6 = 5k for k in 5..=10, beta_5_6 = 100 for k = 20",
    );
}

#[test]
fn criterion_5_severi_tangents() {
    for &(p, seed) in &PAIRS {
        for k in 5..=9usize {
            let t = Instant::now();
            let model = random_model(k, p, seed, RETRIES).expect("model");
            let rep = hexcurve::deform::severi_tangent(&model).expect("severi");
            assert_eq!(rep.kernel_dim, 33 - (k - 5), "kernel dim k={k} p={p}");
            assert!(t.elapsed().as_secs_f64() < 60.0);
        }
        let model = random_model(10, p, seed, RETRIES).expect("octic");
        let rep = hexcurve::deform::severi_tangent(&model).expect("severi octic");
        assert_eq!(rep.kernel_dim, 34, "octic kernel dim p={p}");
    }
    report_line("5 (severi tangents)", true, "33 - m for m = 0..=4 and 34 for the octic");
}

#[test]
fn criterion_6_normal_space_chain() {
    let t = Instant::now();
    for &(p, seed) in &PAIRS {
        for &k in &ALL_K {
            let model = random_model(k, p, seed, RETRIES).expect("model");
            let curve = canonical_curve(&model).expect("curve");
            let rep = report::verify_normal_space(&curve);
            assert!(rep.pass, "normal space k={k} p={p}: {}", rep.computed);
        }
    }
    let secs = t.elapsed().as_secs_f64();
    report_line("6 (normal space chain)", secs < 600.0, &format!("150 = 120 + 30 everywhere, {secs:.0}s < 600s"));
}

#[test]
fn criterion_7_det_m_factorization() {
    for &(p, seed) in &PAIRS {
        let t = Instant::now();
        let model = random_model(5, p, seed, RETRIES).expect("model");
        let curve = canonical_curve(&model).expect("curve");
        let rep = report::verify_detm(&curve);
        assert!(rep.pass, "detM k=5 p={p}: {}", rep.computed);
        assert_eq!(rep.computed["span_dim"], 5);
        assert_eq!(rep.computed["pencils_used"], 5);
        let secs = t.elapsed().as_secs_f64();
        assert!(secs < 7200.0, "detM k=5 p={p} took {secs:.0}s");
    }
    // the consistency check k = beta_5_6 / 5 for every k is part of
    // criterion 4 above; the k in 6..=9 and k in {10, 20} factorizations
    // are the long-running optional gates exercised in the long suite
    report_line("7 (det M factorization)", true, "k = 5 full factorization at 4 (p, seed) pairs");
}

#[test]
fn criterion_8_differential_ranks() {
    let t = Instant::now();
    for &(p, seed) in &PAIRS {
        let model = random_model(5, p, seed, RETRIES).expect("model");
        let curve = canonical_curve(&model).expect("curve");
        let rep = report::verify_differential_rank(&curve);
        assert!(rep.pass, "differential k=5 p={p}: {}", rep.computed);
        assert_eq!(rep.computed["intersection_dim"], 8);
        assert_eq!(rep.computed["rank"], 25);

        let model = random_model(10, p, seed, RETRIES).expect("octic");
        let curve = canonical_curve(&model).expect("octic curve");
        let rep = report::verify_differential_rank(&curve);
        assert!(rep.pass, "differential octic p={p}: {}", rep.computed);
        assert_eq!(rep.computed["rank"], 26);
    }
    let secs = t.elapsed().as_secs_f64();
    report_line("8 (differential ranks)", secs < 3600.0, &format!("kernel 8 / rank 25 and rank 26, {secs:.0}s"));
}

#[test]
fn criterion_9_syzygy_scheme_tables() {
    let t = Instant::now();
    for &(p, seed) in &PAIRS {
        let model = random_model(9, p, seed, RETRIES).expect("nine-pencil model");
        let curve = canonical_curve(&model).expect("curve");
        let scrolls: Vec<_> =
            (0..9).map(|i| scroll(&curve, i).unwrap_or_else(|e| panic!("scroll {i} p={p}: {e}"))).collect();
        // pencils 0..=4 are lines/conic (type a), 5..=8 cubic residuals
        // (type b); one representative subset for every tabulated (a, b)
        let mut rep_subsets: Vec<(usize, usize, Vec<usize>)> = Vec::new();
        for a in 0..=5usize {
            for b in 0..=4usize {
                let l = a + b;
                if l < 2 || report::expected_table_row(a, b).is_none() {
                    continue;
                }
                let subset: Vec<usize> = (0..a).chain(5..5 + b).collect();
                rep_subsets.push((a, b, subset));
            }
        }
        for (a, b, subset) in &rep_subsets {
            let row = syzygy_scheme(&curve, &scrolls, subset);
            assert_eq!(row.a, *a);
            assert_eq!(row.b, *b);
            let (dim, deg, genus) = report::expected_table_row(*a, *b).unwrap();
            assert_eq!(row.proj_dim, dim, "(a,b)=({a},{b}) dim p={p}");
            assert_eq!(row.degree, deg, "(a,b)=({a},{b}) deg p={p}");
            assert_eq!(row.genus, genus, "(a,b)=({a},{b}) genus p={p}");
        }
    }
    let secs = t.elapsed().as_secs_f64();
    report_line("9 (syzygy scheme tables)", secs < 1800.0, &format!("all tabulated (a, b) classes, {secs:.0}s < 1800s"));
}

#[test]
fn criterion_10_determinism() {
    for &(p, seed) in &PAIRS {
        let m1 = random_model(5, p, seed, RETRIES).expect("model");
        let m2 = random_model(5, p, seed, RETRIES).expect("model");
        let c1 = canonical_curve(&m1).expect("curve");
        let c2 = canonical_curve(&m2).expect("curve");
        let f1 = serde_json::to_string(&hexcurve::canon::CurveFile::from_curve(&c1)).unwrap();
        let f2 = serde_json::to_string(&hexcurve::canon::CurveFile::from_curve(&c2)).unwrap();
        assert_eq!(f1, f2, "curve files differ at p={p}");
        let r1 = serde_json::to_string(&report::verify_severi_tangent(&m1)).unwrap();
        let r2 = serde_json::to_string(&report::verify_severi_tangent(&m2)).unwrap();
        // wall time varies; compare reports with the timing stripped
        let strip = |s: &str| -> String {
            let mut v: serde_json::Value = serde_json::from_str(s).unwrap();
            v.as_object_mut().unwrap().remove("wall_ms");
            v.to_string()
        };
        assert_eq!(strip(&r1), strip(&r2), "reports differ at p={p}");
    }
    report_line("10 (determinism)", true, "byte-identical curve files and reports");
}
