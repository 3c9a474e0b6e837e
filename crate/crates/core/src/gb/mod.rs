//! Groebner engine: normal forms, Buchberger completion, syzygies, lifting,
//! elimination, saturation and Hilbert-series data.

pub mod buchberger;
pub mod hilbert;
pub mod modfree;
pub mod reduce;

pub use buchberger::{interreduce, lead_ideal_dim, reduced_groebner};
pub use hilbert::HilbertData;
pub use modfree::{lift_through, syzygies, FreeModuleMap, ModPoly, ModTerm};
pub use reduce::{normal_form as reduce_normal_form, ReducerSet};

use crate::matrix::FpMatrix;
use crate::poly::{DegreeBasis, GradedPoly, Mono, MonomialOrder, PolyRing, Term};
use serde::{Deserialize, Serialize};
use std::cell::OnceCell;

/// A polynomial ideal with its ring and a write-once cached reduced
/// Groebner basis.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Ideal {
    pub ring: PolyRing,
    pub gens: Vec<GradedPoly>,
    #[serde(skip)]
    gb: OnceCell<Vec<GradedPoly>>,
    #[serde(skip)]
    reducers: OnceCell<ReducerSet>,
}

impl Ideal {
    pub fn new(ring: PolyRing, gens: Vec<GradedPoly>) -> Ideal {
        let sig = ring.sig();
        for g in &gens {
            assert_eq!(g.sig, sig, "generator from a different ring");
        }
        Ideal { ring, gens: gens.into_iter().filter(|g| !g.is_zero()).collect(), gb: OnceCell::new(), reducers: OnceCell::new() }
    }

    /// Reduced Groebner basis, computed on first use.
    pub fn groebner(&self) -> &[GradedPoly] {
        self.gb.get_or_init(|| reduced_groebner(&self.ring, &self.gens, None))
    }

    /// Installs a Hilbert-driven basis computation: `dims[d]` must be the
    /// exact dimension of the degree-d piece of the ideal.
    pub fn groebner_with_hilbert(&self, dims: &[usize]) -> &[GradedPoly] {
        self.gb.get_or_init(|| reduced_groebner(&self.ring, &self.gens, Some(dims)))
    }

    fn reducer_set(&self) -> &ReducerSet {
        self.reducers.get_or_init(|| ReducerSet::new(&self.ring, self.groebner().to_vec()))
    }

    /// Remainder of full reduction modulo the cached basis.
    pub fn normal_form(&self, f: &GradedPoly) -> GradedPoly {
        reduce::normal_form(&self.ring, self.reducer_set(), f)
    }

    pub fn contains(&self, f: &GradedPoly) -> bool {
        self.normal_form(f).is_zero()
    }

    pub fn lead_monomials(&self) -> Vec<Mono> {
        self.groebner().iter().map(|g| g.leading().unwrap().mono).collect()
    }

    /// Krull dimension, degree and Hilbert data from the lead-term ideal.
    /// The projective dimension is `krull_dim - 1`.
    pub fn hilbert(&self) -> HilbertData {
        HilbertData::from_leads(self.ring.nvars(), &self.lead_monomials())
    }

    /// Ideal sum (concatenated generators).
    pub fn plus(&self, other: &Ideal) -> Ideal {
        let mut gens = self.gens.clone();
        gens.extend(other.gens.iter().cloned());
        Ideal::new(self.ring.clone(), gens)
    }

    /// `I ∩ K[remaining vars]` computed with a block order; returned in the
    /// original ring with the eliminated variables unused.
    pub fn eliminate(&self, remove: &[usize]) -> Ideal {
        let n = self.ring.nvars();
        let keep: Vec<usize> = (0..n).filter(|v| !remove.contains(v)).collect();
        assert_eq!(keep.len() + remove.len(), n, "duplicate removal indices");
        if remove.is_empty() {
            return Ideal::new(self.ring.clone(), self.groebner().to_vec());
        }
        // permuted ring with the eliminated block first
        let mut names: Vec<&str> = Vec::with_capacity(n);
        for &v in remove {
            names.push(&self.ring.vars[v]);
        }
        for &v in &keep {
            names.push(&self.ring.vars[v]);
        }
        let pring = PolyRing::new(self.ring.ctx, &names, MonomialOrder::Elim(remove.len()), self.ring.mode);
        // variable map: source index -> permuted index
        let mut vmap = vec![0usize; n];
        for (i, &v) in remove.iter().enumerate() {
            vmap[v] = i;
        }
        for (i, &v) in keep.iter().enumerate() {
            vmap[v] = remove.len() + i;
        }
        let mapped: Vec<GradedPoly> = self.gens.iter().map(|g| remap_vars(&pring, g, &vmap)).collect();
        let gb = reduced_groebner(&pring, &mapped, None);
        // keep the block-free elements, map back
        let mut inv = vec![0usize; n];
        for (src, &dst) in vmap.iter().enumerate() {
            inv[dst] = src;
        }
        let kept: Vec<GradedPoly> = gb
            .into_iter()
            .filter(|g| g.terms.iter().all(|t| (0..remove.len()).all(|i| t.mono.exp[i] == 0)))
            .map(|g| remap_vars(&self.ring, &g, &inv))
            .collect();
        Ideal::new(self.ring.clone(), kept)
    }

    /// Ideal intersection via a tag variable.
    pub fn intersect(&self, other: &Ideal) -> Ideal {
        let n = self.ring.nvars();
        assert!(n + 1 <= crate::poly::MAX_VARS, "no room for the tag variable");
        let mut names: Vec<String> = vec!["tag!".to_string()];
        names.extend(self.ring.vars.iter().cloned());
        let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        let tring = PolyRing::new(self.ring.ctx, &refs, MonomialOrder::Elim(1), self.ring.mode);
        let shift: Vec<usize> = (1..=n).collect();
        let t = tring.var(0);
        let one_minus_t = tring.one().sub(&tring, &t);
        let mut gens = Vec::new();
        for f in &self.gens {
            let lifted = remap_vars(&tring, f, &shift);
            gens.push(lifted.multiply(&tring, &t).unwrap());
        }
        for g in &other.gens {
            let lifted = remap_vars(&tring, g, &shift);
            gens.push(lifted.multiply(&tring, &one_minus_t).unwrap());
        }
        let gb = reduced_groebner(&tring, &gens, None);
        let mut inv = vec![usize::MAX; n + 1];
        for (src, &dst) in shift.iter().enumerate() {
            inv[dst] = src;
        }
        let kept: Vec<GradedPoly> = gb
            .into_iter()
            .filter(|g| g.terms.iter().all(|t| t.mono.exp[0] == 0))
            .map(|g| {
                let vmap: Vec<usize> = (0..=n).map(|i| if i == 0 { 0 } else { inv[i] }).collect();
                remap_vars(&self.ring, &g, &vmap)
            })
            .collect();
        Ideal::new(self.ring.clone(), kept)
    }

    /// Ideal quotient `I : g` for a single polynomial.
    pub fn quotient_single(&self, g: &GradedPoly) -> Ideal {
        assert!(!g.is_zero());
        let meet = self.intersect(&Ideal::new(self.ring.clone(), vec![g.clone()]));
        let gens = meet
            .gens
            .iter()
            .map(|w| divide_exact(&self.ring, w, g).expect("intersection element not divisible"))
            .collect();
        Ideal::new(self.ring.clone(), gens)
    }

    /// Ideal quotient `I : J`.
    pub fn quotient(&self, other: &Ideal) -> Ideal {
        let mut acc: Option<Ideal> = None;
        for g in &other.gens {
            let q = self.quotient_single(g);
            acc = Some(match acc {
                None => q,
                Some(a) => a.intersect(&q),
            });
        }
        acc.unwrap_or_else(|| Ideal::new(self.ring.clone(), vec![self.ring.one()]))
    }

    /// Saturation `I : J^∞` by iterated stable quotient; a principal linear
    /// `J` on a homogeneous ideal takes the reverse-lex last-variable route.
    pub fn saturate(&self, other: &Ideal) -> Ideal {
        if other.gens.len() == 1
            && other.gens[0].degree() == Some(1)
            && self.gens.iter().all(|g| g.is_homogeneous())
        {
            return self.saturate_linear(&other.gens[0]);
        }
        let mut cur = Ideal::new(self.ring.clone(), self.gens.clone());
        loop {
            let next = cur.quotient(other);
            if ideal_leq(&next, &cur) {
                return cur;
            }
            cur = next;
        }
    }

    /// Saturation by a linear form: change coordinates so the form becomes
    /// the last variable, take a grevlex basis, divide out its powers.
    fn saturate_linear(&self, ell: &GradedPoly) -> Ideal {
        let ring = &self.ring;
        let n = ring.nvars();
        let ctx = &ring.ctx;
        let coefs: Vec<u64> = {
            let mut c = vec![0u64; n];
            for t in &ell.terms {
                let v = (0..n).find(|&v| t.mono.exp[v] == 1).unwrap();
                c[v] = t.coeff.base;
            }
            c
        };
        let v = (0..n).rfind(|&v| coefs[v] != 0).expect("zero linear form");
        let last = n - 1;
        // sigma swaps v and last
        let sig = |u: usize| {
            if u == v {
                last
            } else if u == last {
                v
            } else {
                u
            }
        };
        // forward images: x_u -> y_{sigma(u)} except x_v, which solves
        // ell(x) = y_last
        let grev = ring.with_order(MonomialOrder::GrevLex);
        let mut images: Vec<GradedPoly> = (0..n).map(|u| grev.var(sig(u))).collect();
        let cv_inv = ctx.inv(coefs[v]);
        let mut expr = grev.var(last);
        for u in 0..n {
            if u == v || coefs[u] == 0 {
                continue;
            }
            expr = expr.sub(&grev, &grev.var(sig(u)).scale(&grev, coefs[u]));
        }
        images[v] = expr.scale(&grev, cv_inv);
        let fwd: Vec<GradedPoly> = self
            .gens
            .iter()
            .map(|g| grev.from_terms(g.terms.clone()).substitute(&grev, &images))
            .collect();
        let gb = reduced_groebner(&grev, &fwd, None);
        // divide out the last variable, then substitute back
        let mut back_images: Vec<GradedPoly> = Vec::with_capacity(n);
        for w in 0..n {
            if w == last {
                back_images.push(grev.from_terms(ell.terms.clone()));
            } else {
                back_images.push(grev.var(sig(w)));
            }
        }
        let mut out = Vec::with_capacity(gb.len());
        for g in gb {
            let strip = strip_variable_power(&grev, &g, last);
            let mapped = strip.substitute(&grev, &back_images);
            out.push(ring.from_terms(mapped.terms));
        }
        Ideal::new(ring.clone(), interreduce(ring, out))
    }

    /// Minimal homogeneous generators (degreewise rank against multiples of
    /// the lower-degree ones).
    pub fn minimal_generators(&self) -> Vec<GradedPoly> {
        let gb = self.groebner().to_vec();
        if gb.is_empty() {
            return vec![];
        }
        assert!(gb.iter().all(|g| g.is_homogeneous()), "minimal generators need a graded ideal");
        let mut by_degree: std::collections::BTreeMap<u16, Vec<GradedPoly>> = Default::default();
        for g in gb {
            by_degree.entry(g.degree().unwrap()).or_default().push(g);
        }
        let ring = &self.ring;
        let mut minimal: Vec<GradedPoly> = Vec::new();
        for (&d, cands) in &by_degree {
            let db = DegreeBasis::new(ring, d as u32);
            // span of multiples of already-selected lower-degree generators
            let mut cols: Vec<Vec<u64>> = Vec::new();
            for g in &minimal {
                let gd = g.degree().unwrap();
                for m in ring.graded_basis((d - gd) as u32) {
                    let prod = g.mul_term(ring, &m, &crate::poly::Coeff::from_base(1));
                    cols.push(db.coords(&prod));
                }
            }
            let ncols_lower = cols.len();
            for c in cands {
                cols.push(db.coords(c));
            }
            let mat = FpMatrix::from_columns(db.len(), cols);
            let (_, pivots) = mat.rref(&ring.ctx);
            for &p in &pivots {
                if p >= ncols_lower {
                    minimal.push(cands[p - ncols_lower].clone());
                }
            }
        }
        minimal
    }
}

/// `sub ⊆ sup` via normal forms.
pub fn ideal_leq(sub: &Ideal, sup: &Ideal) -> bool {
    sub.gens.iter().all(|g| sup.contains(g))
}

/// Remaps variables: `vmap[i]` is the target slot of source variable `i`.
pub fn remap_vars(target: &PolyRing, f: &GradedPoly, vmap: &[usize]) -> GradedPoly {
    let terms = f
        .terms
        .iter()
        .map(|t| {
            let mut exp = [0u8; crate::poly::MAX_VARS];
            for (i, &e) in t.mono.exp.iter().enumerate() {
                if e > 0 {
                    exp[vmap[i]] = e;
                }
            }
            Term { mono: Mono { exp, deg: t.mono.deg }, coeff: t.coeff.clone() }
        })
        .collect();
    target.from_terms(terms)
}

/// Exact division by a single polynomial; None when not divisible.
pub fn divide_exact(ring: &PolyRing, w: &GradedPoly, g: &GradedPoly) -> Option<GradedPoly> {
    let mut rem = w.clone();
    let mut q = ring.zero();
    let glead = g.leading()?.clone();
    while let Some(lead) = rem.leading().cloned() {
        let m = glead.mono.div_into(&lead.mono)?;
        let c = ring.ctx.div(lead.coeff.base, glead.coeff.base);
        let qt = ring.monomial(m, crate::poly::Coeff::from_base(c));
        q = q.add(ring, &qt);
        rem = rem.sub(ring, &g.multiply(ring, &qt).unwrap());
    }
    Some(q)
}

/// Strips the largest power of variable `v` dividing every term.
fn strip_variable_power(ring: &PolyRing, g: &GradedPoly, v: usize) -> GradedPoly {
    let k = g.terms.iter().map(|t| t.mono.exp[v]).min().unwrap_or(0);
    if k == 0 {
        return g.clone();
    }
    let terms = g
        .terms
        .iter()
        .map(|t| {
            let mut mono = t.mono;
            mono.exp[v] -= k;
            mono.deg -= k as u16;
            Term { mono, coeff: t.coeff.clone() }
        })
        .collect();
    ring.from_terms(terms)
}

/// Exact dimensions of the graded pieces `I_d` for `d <= dmax`, by rank of
/// the span of monomial multiples of the generators. Used to drive and to
/// cross-check Groebner computations.
pub fn ideal_degree_dims(ring: &PolyRing, gens: &[GradedPoly], dmax: usize) -> Vec<usize> {
    let mut dims = vec![0usize; dmax + 1];
    for (d, dim) in dims.iter_mut().enumerate() {
        let db = DegreeBasis::new(ring, d as u32);
        let mut cols: Vec<Vec<u64>> = Vec::new();
        for g in gens {
            let Some(gd) = g.degree() else { continue };
            if gd as usize > d {
                continue;
            }
            for m in ring.graded_basis((d - gd as usize) as u32) {
                let prod = g.mul_term(ring, &m, &crate::poly::Coeff::from_base(1));
                cols.push(db.coords(&prod));
            }
        }
        if cols.is_empty() {
            continue;
        }
        let mat = FpMatrix::from_columns(db.len(), cols);
        *dim = mat.rank(&ring.ctx);
    }
    dims
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fp::FpCtx;
    use crate::poly::{Coeff, CoeffMode};

    fn plane() -> PolyRing {
        PolyRing::plane(FpCtx::new(101))
    }

    #[test]
    fn eliminate_parabola() {
        // <x - t, y - t^2>, eliminate t: expect y - x^2
        let ctx = FpCtx::new(101);
        let r = PolyRing::new(ctx, &["t", "x", "y"], MonomialOrder::GrevLex, CoeffMode::Field);
        let t = r.var(0);
        let x = r.var(1);
        let y = r.var(2);
        let i = Ideal::new(r.clone(), vec![x.sub(&r, &t), y.sub(&r, &t.multiply(&r, &t).unwrap())]);
        let e = i.eliminate(&[0]);
        assert_eq!(e.gens.len(), 1);
        let g = &e.gens[0];
        let expect = y.sub(&r, &x.multiply(&r, &x).unwrap());
        // up to sign/scalar
        let lc = g.leading().unwrap().coeff.base;
        let gmonic = g.scale(&r, ctx.inv(lc));
        let lc2 = expect.leading().unwrap().coeff.base;
        let emonic = expect.scale(&r, ctx.inv(lc2));
        assert_eq!(gmonic, emonic);
    }

    #[test]
    fn eliminate_nothing_is_groebner() {
        let r = plane();
        let f = r.var(0).multiply(&r, &r.var(0)).unwrap();
        let g = r.var(1);
        let i = Ideal::new(r.clone(), vec![f, g]);
        let e = i.eliminate(&[]);
        assert_eq!(e.gens, i.groebner());
    }

    #[test]
    fn saturate_monomial_case() {
        // (x^2, xy) : (x,y)^inf = (x)
        let r = plane();
        let x = r.var(0);
        let y = r.var(1);
        let i = Ideal::new(
            r.clone(),
            vec![x.multiply(&r, &x).unwrap(), x.multiply(&r, &y).unwrap()],
        );
        let j = Ideal::new(r.clone(), vec![x.clone(), y.clone()]);
        let s = i.saturate(&j);
        let gb = s.groebner();
        assert_eq!(gb.len(), 1);
        assert_eq!(gb[0], x);
    }

    #[test]
    fn saturate_when_contained_gives_unit() {
        let r = plane();
        let x = r.var(0);
        let i = Ideal::new(r.clone(), vec![x.clone()]);
        let j = Ideal::new(r.clone(), vec![x.clone()]);
        let s = i.saturate(&j);
        assert!(s.contains(&r.one()));
    }

    #[test]
    fn saturate_linear_form_route() {
        // (x*z, y*z) : z^inf = (x, y) via the last-variable trick
        let r = plane();
        let x = r.var(0);
        let y = r.var(1);
        let z = r.var(2);
        let i = Ideal::new(
            r.clone(),
            vec![x.multiply(&r, &z).unwrap(), y.multiply(&r, &z).unwrap()],
        );
        let j = Ideal::new(r.clone(), vec![z.clone()]);
        let s = i.saturate(&j);
        let gb = s.groebner();
        assert_eq!(gb.len(), 2);
        assert!(s.contains(&x) && s.contains(&y));
    }

    #[test]
    fn saturate_linear_with_coordinate_change() {
        // (x*(x+y+z)) : (x+y+z)^inf = (x)
        let r = plane();
        let x = r.var(0);
        let ell = r.var(0).add(&r, &r.var(1)).add(&r, &r.var(2));
        let i = Ideal::new(r.clone(), vec![x.multiply(&r, &ell).unwrap()]);
        let j = Ideal::new(r.clone(), vec![ell]);
        let s = i.saturate(&j);
        let gb = s.groebner();
        assert_eq!(gb.len(), 1);
        assert_eq!(gb[0], x);
    }

    #[test]
    fn saturate_idempotent() {
        let r = plane();
        let x = r.var(0);
        let y = r.var(1);
        let i = Ideal::new(
            r.clone(),
            vec![
                x.multiply(&r, &x).unwrap(),
                x.multiply(&r, &y).unwrap(),
                y.multiply(&r, &y).unwrap().multiply(&r, &y).unwrap(),
            ],
        );
        let j = Ideal::new(r.clone(), vec![x.clone(), y.clone()]);
        let s1 = i.saturate(&j);
        let s2 = s1.saturate(&j);
        assert_eq!(s1.groebner(), s2.groebner());
    }

    #[test]
    fn quotient_basic() {
        // (x^2, xy) : x = (x, y)
        let r = plane();
        let x = r.var(0);
        let y = r.var(1);
        let i = Ideal::new(
            r.clone(),
            vec![x.multiply(&r, &x).unwrap(), x.multiply(&r, &y).unwrap()],
        );
        let q = i.quotient_single(&x);
        assert!(q.contains(&x));
        assert!(q.contains(&y));
        assert!(!q.contains(&r.one()));
    }

    #[test]
    fn hilbert_of_twisted_cubic_ideal() {
        let ctx = FpCtx::new(101);
        let r = PolyRing::new(ctx, &["x0", "x1", "x2", "x3"], MonomialOrder::GrevLex, CoeffMode::Field);
        let m = |a: &[u32]| Mono::from_exps(a);
        let term = |e: &[u32], c: u64| Term { mono: m(e), coeff: Coeff::from_base(c) };
        let q0 = r.from_terms(vec![term(&[1, 0, 1, 0], 1), term(&[0, 2, 0, 0], 100)]);
        let q1 = r.from_terms(vec![term(&[1, 0, 0, 1], 1), term(&[0, 1, 1, 0], 100)]);
        let q2 = r.from_terms(vec![term(&[0, 1, 0, 1], 1), term(&[0, 0, 2, 0], 100)]);
        let i = Ideal::new(r, vec![q0, q1, q2]);
        let h = i.hilbert();
        assert_eq!(h.proj_dim(), 1);
        assert_eq!(h.degree, 3);
        assert_eq!(h.curve_genus(), Some(0));
    }

    #[test]
    fn minimal_generators_drop_redundant() {
        let r = plane();
        let x = r.var(0);
        let y = r.var(1);
        let x2 = x.multiply(&r, &x).unwrap();
        let xy = x.multiply(&r, &y).unwrap();
        let i = Ideal::new(r.clone(), vec![x.clone(), x2, xy]);
        let min = i.minimal_generators();
        assert_eq!(min.len(), 1);
        assert_eq!(min[0], x);
    }

    #[test]
    fn degree_dims_match_hilbert() {
        let r = plane();
        let x = r.var(0);
        let y = r.var(1);
        let gens = vec![x.multiply(&r, &x).unwrap(), x.multiply(&r, &y).unwrap()];
        let dims = ideal_degree_dims(&r, &gens, 5);
        let i = Ideal::new(r.clone(), gens);
        let h = i.hilbert();
        for d in 0..=5i64 {
            let total = crate::poly::binom(d as u64 + 2, 2) as i64;
            assert_eq!(dims[d as usize] as i64, total - h.hilbert_fn_at(d));
        }
    }
}
