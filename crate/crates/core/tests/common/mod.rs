//! Independent oracles shared by the integration suites. These stay
//! deliberately naive and separate from the library's computation paths.

use hexcurve::fp::FpCtx;
use hexcurve::matrix::FpMatrix;
use hexcurve::poly::{Coeff, GradedPoly, Mono, PolyRing, Term};
use hexcurve::rng::Rng;
use std::cmp::Ordering;

/// Rank by fraction-free (Bareiss) elimination: no inverses except the
/// final exact divisions, an algorithm disjoint from the library's
/// lazy-reduction row elimination.
pub fn bareiss_rank(ctx: &FpCtx, m: &FpMatrix) -> usize {
    let p = ctx.prime();
    let (rows, cols) = (m.rows, m.cols);
    let mut a: Vec<Vec<u64>> = (0..rows).map(|i| m.row(i).to_vec()).collect();
    let mut prev = 1u64;
    let mut r = 0usize;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(sel) = (r..rows).find(|&i| a[i][c] % p != 0) else {
            continue;
        };
        a.swap(sel, r);
        let pivot = a[r][c] % p;
        let prev_inv = ctx.inv(prev);
        for i in (r + 1)..rows {
            for j in (c + 1)..cols {
                // fraction-free update: (a_ij * pivot - a_ic * a_rj) / prev
                let t1 = ctx.mul(a[i][j] % p, pivot);
                let t2 = ctx.mul(a[i][c] % p, a[r][j] % p);
                a[i][j] = ctx.mul(ctx.sub(t1, t2), prev_inv);
            }
            a[i][c] = 0;
        }
        prev = pivot;
        r += 1;
    }
    r
}

/// Naive fixed-point S-pair completion: repeatedly reduce every S-pair of
/// the current basis by long division until nothing new appears, then
/// interreduce. No pair criteria, no selection strategy.
pub fn naive_groebner(ring: &PolyRing, gens: &[GradedPoly]) -> Vec<GradedPoly> {
    let mut basis: Vec<GradedPoly> = gens
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| make_monic(ring, g))
        .collect();
    loop {
        let mut added = false;
        let n = basis.len();
        for i in 0..n {
            for j in (i + 1)..n {
                let s = s_poly(ring, &basis[i], &basis[j]);
                let r = long_division(ring, &s, &basis);
                if !r.is_zero() {
                    basis.push(make_monic(ring, &r));
                    added = true;
                }
            }
        }
        if !added {
            break;
        }
    }
    // minimalize leads, then tail-reduce to the unique reduced basis
    let mut minimal: Vec<GradedPoly> = Vec::new();
    basis.sort_by(|a, b| {
        ring.cmp_mono(&a.leading().unwrap().mono, &b.leading().unwrap().mono)
    });
    'outer: for g in &basis {
        let lg = g.leading().unwrap().mono;
        for h in &minimal {
            if h.leading().unwrap().mono.divides(&lg) {
                continue 'outer;
            }
        }
        minimal.push(g.clone());
    }
    let snapshot = minimal.clone();
    let mut reduced = Vec::with_capacity(minimal.len());
    for (i, g) in snapshot.iter().enumerate() {
        let others: Vec<GradedPoly> = snapshot
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, h)| h.clone())
            .collect();
        let mut tail = g.clone();
        // reduce the tail fully against the others
        tail = long_division_full(ring, &tail, &others);
        reduced.push(make_monic(ring, &tail));
    }
    reduced.sort_by(|a, b| {
        ring.cmp_mono(&a.leading().unwrap().mono, &b.leading().unwrap().mono)
    });
    reduced
}

fn make_monic(ring: &PolyRing, g: &GradedPoly) -> GradedPoly {
    let lc = g.leading().unwrap().coeff.base;
    g.scale(ring, ring.ctx.inv(lc))
}

fn s_poly(ring: &PolyRing, f: &GradedPoly, g: &GradedPoly) -> GradedPoly {
    let lf = f.leading().unwrap().mono;
    let lg = g.leading().unwrap().mono;
    let lcm = lf.lcm(&lg);
    let uf = lf.div_into(&lcm).unwrap();
    let ug = lg.div_into(&lcm).unwrap();
    let one = Coeff::from_base(1);
    f.mul_term(ring, &uf, &one).sub(ring, &g.mul_term(ring, &ug, &one))
}

/// Top-reduction long division: reduces the lead until irreducible, moving
/// irreducible leads to the remainder.
fn long_division(ring: &PolyRing, f: &GradedPoly, basis: &[GradedPoly]) -> GradedPoly {
    long_division_full(ring, f, basis)
}

fn long_division_full(ring: &PolyRing, f: &GradedPoly, basis: &[GradedPoly]) -> GradedPoly {
    let mut work = f.clone();
    let mut rem_terms: Vec<Term> = Vec::new();
    'outer: while let Some(lead) = work.leading().cloned() {
        for g in basis {
            let lg = g.leading().unwrap();
            if lg.mono.divides(&lead.mono) {
                let q = lg.mono.div_into(&lead.mono).unwrap();
                let c = ring.ctx.div(lead.coeff.base, lg.coeff.base);
                let sub = g.mul_term(ring, &q, &Coeff::from_base(ring.ctx.neg(c)));
                work = work.add(ring, &sub);
                continue 'outer;
            }
        }
        rem_terms.push(lead.clone());
        work.terms.remove(0);
    }
    ring.from_terms(rem_terms)
}

/// Canonical comparison of two bases as sets of polynomials.
pub fn same_basis(ring: &PolyRing, a: &[GradedPoly], b: &[GradedPoly]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let key = |g: &GradedPoly| -> Vec<(Mono, u64)> {
        g.terms.iter().map(|t| (t.mono, t.coeff.base)).collect()
    };
    let mut ka: Vec<_> = a.iter().map(key).collect();
    let mut kb: Vec<_> = b.iter().map(key).collect();
    let ord = |x: &Vec<(Mono, u64)>, y: &Vec<(Mono, u64)>| -> Ordering {
        x.len().cmp(&y.len()).then_with(|| {
            for ((ma, ca), (mb, cb)) in x.iter().zip(y.iter()) {
                let c = ma.exp.cmp(&mb.exp).then(ca.cmp(cb));
                if c != Ordering::Equal {
                    return c;
                }
            }
            Ordering::Equal
        })
    };
    ka.sort_by(&ord);
    kb.sort_by(&ord);
    ka == kb
}

/// Random polynomial whose terms have degree between 1 and `max_deg`, so
/// the generated ideals are proper and the bases nontrivial.
pub fn random_poly(
    ring: &PolyRing,
    rng: &mut Rng,
    max_deg: u32,
    terms: usize,
) -> GradedPoly {
    let n = ring.nvars();
    let mut out = Vec::with_capacity(terms);
    for _ in 0..terms {
        let mut exps = vec![0u32; n];
        let mut left = 1 + rng.below(max_deg as u64) as u32;
        for v in 0..n - 1 {
            if left == 0 {
                break;
            }
            let e = rng.below(left as u64 + 1) as u32;
            exps[v] = e;
            left -= e;
        }
        exps[n - 1] += left;
        out.push(Term {
            mono: Mono::from_exps(&exps),
            coeff: Coeff::from_base(rng.fp(ring.ctx.prime())),
        });
    }
    ring.from_terms(out)
}
