//! Free modules, module Groebner bases with syzygy extraction, and lifting
//! through module maps (matrix quotient).
//!
//! Module terms carry a component index next to the monomial. The module
//! engine runs Buchberger over a free module with representation tracking:
//! every S-pair that reduces to zero hands back a syzygy of the original
//! columns. No pair criteria are applied in syzygy mode, so the collected
//! syzygies generate the full syzygy module (Schreyer).

use super::reduce::support_mask;
use crate::matrix::FpMatrix;
use crate::poly::{Coeff, DegreeBasis, GradedPoly, Mono, PolyRing, Term};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModTerm {
    pub comp: u32,
    pub mono: Mono,
    pub coeff: Coeff,
}

/// Element of a free module, terms sorted descending under term-over-
/// position (ring order first, lower component wins ties).
#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ModPoly {
    pub terms: Vec<ModTerm>,
}

fn cmp_modterm(ring: &PolyRing, a: (u32, &Mono), b: (u32, &Mono)) -> Ordering {
    ring.cmp_mono(a.1, b.1).then_with(|| b.0.cmp(&a.0))
}

impl ModPoly {
    pub fn zero() -> ModPoly {
        ModPoly { terms: Vec::new() }
    }

    pub fn unit(comp: u32) -> ModPoly {
        ModPoly { terms: vec![ModTerm { comp, mono: Mono::one(), coeff: Coeff::from_base(1) }] }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lead(&self) -> Option<&ModTerm> {
        self.terms.first()
    }

    pub fn from_terms(ring: &PolyRing, mut terms: Vec<ModTerm>) -> ModPoly {
        terms.sort_by(|a, b| cmp_modterm(ring, (b.comp, &b.mono), (a.comp, &a.mono)));
        let mut out: Vec<ModTerm> = Vec::with_capacity(terms.len());
        for t in terms {
            if let Some(last) = out.last_mut() {
                if last.comp == t.comp && last.mono == t.mono {
                    last.coeff = last.coeff.add(&ring.ctx, &t.coeff);
                    if last.coeff.is_zero() {
                        out.pop();
                    }
                    continue;
                }
            }
            if !t.coeff.is_zero() {
                out.push(t);
            }
        }
        ModPoly { terms: out }
    }

    pub fn add(&self, ring: &PolyRing, other: &ModPoly) -> ModPoly {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        ModPoly::from_terms(ring, terms)
    }

    pub fn scale(&self, ring: &PolyRing, c: u64) -> ModPoly {
        let c = ring.ctx.reduce(c);
        if c == 0 {
            return ModPoly::zero();
        }
        ModPoly {
            terms: self
                .terms
                .iter()
                .map(|t| ModTerm { comp: t.comp, mono: t.mono, coeff: t.coeff.scale(&ring.ctx, c) })
                .collect(),
        }
    }

    pub fn mul_term(&self, ring: &PolyRing, mono: &Mono, coeff: &Coeff) -> ModPoly {
        let mut terms = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            let c = t.coeff.mul(&ring.ctx, coeff);
            if !c.is_zero() {
                terms.push(ModTerm { comp: t.comp, mono: t.mono.mul(mono), coeff: c });
            }
        }
        ModPoly { terms }
    }

    pub fn sub(&self, ring: &PolyRing, other: &ModPoly) -> ModPoly {
        let neg = other.scale(ring, ring.ctx.prime() - 1);
        self.add(ring, &neg)
    }

    /// Per-component polynomial.
    pub fn component(&self, ring: &PolyRing, comp: u32) -> GradedPoly {
        let terms: Vec<Term> = self
            .terms
            .iter()
            .filter(|t| t.comp == comp)
            .map(|t| Term { mono: t.mono, coeff: t.coeff.clone() })
            .collect();
        ring.from_terms(terms)
    }

    /// Degree with shifts: max of `mono.deg + shift[comp]`; None for zero.
    pub fn shifted_degree(&self, shifts: &[i32]) -> Option<i32> {
        self.terms.iter().map(|t| t.mono.deg as i32 + shifts[t.comp as usize]).max()
    }
}

/// A graded map of free modules, stored as a matrix of polynomials with
/// degree shifts per source column and target row. Entry `(i, j)` is
/// homogeneous of degree `source_shift[j] - target_shift[i]` (or zero).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FreeModuleMap {
    pub source_shifts: Vec<i32>,
    pub target_shifts: Vec<i32>,
    /// entries[i][j] for row i (target), column j (source)
    pub entries: Vec<Vec<GradedPoly>>,
}

impl FreeModuleMap {
    pub fn zero(ring: &PolyRing, target_shifts: Vec<i32>, source_shifts: Vec<i32>) -> FreeModuleMap {
        let entries = target_shifts
            .iter()
            .map(|_| source_shifts.iter().map(|_| ring.zero()).collect())
            .collect();
        FreeModuleMap { source_shifts, target_shifts, entries }
    }

    pub fn source_rank(&self) -> usize {
        self.source_shifts.len()
    }

    pub fn target_rank(&self) -> usize {
        self.target_shifts.len()
    }

    pub fn column(&self, j: usize) -> ModPoly {
        let mut terms = Vec::new();
        for (i, row) in self.entries.iter().enumerate() {
            for t in &row[j].terms {
                terms.push(ModTerm { comp: i as u32, mono: t.mono, coeff: t.coeff.clone() });
            }
        }
        ModPoly { terms }
    }

    pub fn from_columns(
        ring: &PolyRing,
        target_shifts: Vec<i32>,
        cols: &[ModPoly],
        source_shifts: Vec<i32>,
    ) -> FreeModuleMap {
        assert_eq!(cols.len(), source_shifts.len());
        let mut map = FreeModuleMap::zero(ring, target_shifts, source_shifts);
        for (j, c) in cols.iter().enumerate() {
            for t in &c.terms {
                let entry = &mut map.entries[t.comp as usize][j];
                *entry = entry.add(ring, &ring.monomial(t.mono, t.coeff.clone()));
            }
        }
        map
    }

    /// Composition `self . other` (apply `other` first).
    pub fn compose(&self, ring: &PolyRing, other: &FreeModuleMap) -> FreeModuleMap {
        assert_eq!(self.source_rank(), other.target_rank(), "composition shape");
        let mut out = FreeModuleMap::zero(ring, self.target_shifts.clone(), other.source_shifts.clone());
        for i in 0..self.target_rank() {
            for j in 0..other.source_rank() {
                let mut acc = ring.zero();
                for k in 0..self.source_rank() {
                    let a = &self.entries[i][k];
                    let b = &other.entries[k][j];
                    if a.is_zero() || b.is_zero() {
                        continue;
                    }
                    acc = acc.add(ring, &a.multiply(ring, b).unwrap());
                }
                out.entries[i][j] = acc;
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|row| row.iter().all(|e| e.is_zero()))
    }

    /// Checks the grading invariant on every nonzero entry.
    pub fn is_graded(&self) -> bool {
        self.entries.iter().enumerate().all(|(i, row)| {
            row.iter().enumerate().all(|(j, e)| {
                e.is_zero()
                    || (e.is_homogeneous()
                        && e.degree().unwrap() as i32
                            == self.source_shifts[j] - self.target_shifts[i])
            })
        })
    }
}

struct ModReducerSet {
    basis: Vec<ModPoly>,
    reps: Vec<ModPoly>,
    leads: Vec<(u32, Mono)>,
    masks: Vec<u16>,
}

impl ModReducerSet {
    fn find(&self, comp: u32, mono: &Mono, mask: u16) -> Option<usize> {
        for i in 0..self.leads.len() {
            if self.leads[i].0 != comp {
                continue;
            }
            if self.masks[i] & !mask != 0 {
                continue;
            }
            if self.leads[i].1.divides(mono) {
                return Some(i);
            }
        }
        None
    }
}

/// Full reduction with representation tracking. Returns (normal form,
/// accumulated representation delta).
fn mod_reduce(ring: &PolyRing, rs: &ModReducerSet, f: &ModPoly) -> (ModPoly, ModPoly) {
    let mut rem = f.clone();
    let mut out_terms: Vec<ModTerm> = Vec::new();
    let mut rep_delta = ModPoly::zero();
    while let Some(lead) = rem.lead().cloned() {
        let mask = support_mask(&lead.mono);
        match rs.find(lead.comp, &lead.mono, mask) {
            Some(i) => {
                let q = rs.leads[i].1.div_into(&lead.mono).unwrap();
                let neg = lead.coeff.neg(&ring.ctx);
                rem = rem.add(ring, &rs.basis[i].mul_term(ring, &q, &neg));
                rep_delta = rep_delta.add(ring, &rs.reps[i].mul_term(ring, &q, &neg));
            }
            None => {
                // move the irreducible lead out of the way
                out_terms.push(lead.clone());
                rem.terms.remove(0);
            }
        }
    }
    (ModPoly::from_terms(ring, out_terms), rep_delta)
}

pub struct ModuleSyzygyResult {
    pub basis: Vec<ModPoly>,
    pub reps: Vec<ModPoly>,
    pub syzygies: Vec<ModPoly>,
}

/// Module Groebner basis of the given columns with syzygy extraction.
/// Every S-pair is processed (no pair pruning), so the returned syzygies
/// generate the full syzygy module of the columns.
pub fn module_groebner_with_syzygies(ring: &PolyRing, columns: &[ModPoly]) -> ModuleSyzygyResult {
    let mut rs = ModReducerSet { basis: Vec::new(), reps: Vec::new(), leads: Vec::new(), masks: Vec::new() };
    let mut syzygies: Vec<ModPoly> = Vec::new();
    let mut pairs: Vec<(usize, usize)> = Vec::new();

    let push =
        |rs: &mut ModReducerSet, pairs: &mut Vec<(usize, usize)>, g: ModPoly, rep: ModPoly| {
            let lc = g.lead().unwrap().coeff.base;
            let inv = ring.ctx.inv(lc);
            let g = g.scale(ring, inv);
            let rep = rep.scale(ring, inv);
            let t = rs.basis.len();
            let lead = g.lead().unwrap();
            let key = (lead.comp, lead.mono);
            rs.leads.push(key);
            rs.masks.push(support_mask(&key.1));
            rs.basis.push(g);
            rs.reps.push(rep);
            for i in 0..t {
                if rs.leads[i].0 == key.0 {
                    pairs.push((i, t));
                }
            }
        };

    for (j, col) in columns.iter().enumerate() {
        if col.is_zero() {
            syzygies.push(ModPoly::unit(j as u32));
            continue;
        }
        push(&mut rs, &mut pairs, col.clone(), ModPoly::unit(j as u32));
    }

    while let Some(&(a, b)) = pairs.first() {
        // deterministic order: as generated (FIFO)
        pairs.remove(0);
        let (la, lb) = (&rs.leads[a], &rs.leads[b]);
        debug_assert_eq!(la.0, lb.0);
        let lcm = la.1.lcm(&lb.1);
        let qa = la.1.div_into(&lcm).unwrap();
        let qb = lb.1.div_into(&lcm).unwrap();
        let one = Coeff::from_base(1);
        let minus = Coeff::from_base(ring.ctx.prime() - 1);
        let sp = rs.basis[a]
            .mul_term(ring, &qa, &one)
            .add(ring, &rs.basis[b].mul_term(ring, &qb, &minus));
        let sp_rep = rs.reps[a]
            .mul_term(ring, &qa, &one)
            .add(ring, &rs.reps[b].mul_term(ring, &qb, &minus));
        let (nf, delta) = mod_reduce(ring, &rs, &sp);
        let rep = sp_rep.add(ring, &delta);
        if nf.is_zero() {
            if !rep.is_zero() {
                syzygies.push(rep);
            }
        } else {
            push(&mut rs, &mut pairs, nf, rep);
        }
    }

    ModuleSyzygyResult { basis: rs.basis, reps: rs.reps, syzygies }
}

/// Generators of the syzygy module of the columns of `f`: a map whose image
/// is the kernel of `f`, with `f . syzygies(f) = 0` exactly.
pub fn syzygies(ring: &PolyRing, f: &FreeModuleMap) -> FreeModuleMap {
    let cols: Vec<ModPoly> = (0..f.source_rank()).map(|j| f.column(j)).collect();
    let res = module_groebner_with_syzygies(ring, &cols);
    let mut syz = res.syzygies;
    // deterministic output order: by shifted degree, then lead
    syz.sort_by(|x, y| {
        let dx = x.shifted_degree(&f.source_shifts).unwrap_or(i32::MIN);
        let dy = y.shifted_degree(&f.source_shifts).unwrap_or(i32::MIN);
        dx.cmp(&dy).then_with(|| {
            let lx = x.lead().unwrap();
            let ly = y.lead().unwrap();
            cmp_modterm(ring, (ly.comp, &ly.mono), (lx.comp, &lx.mono))
        })
    });
    let shifts: Vec<i32> = syz
        .iter()
        .map(|s| s.shifted_degree(&f.source_shifts).unwrap())
        .collect();
    let out = FreeModuleMap::from_columns(ring, f.source_shifts.clone(), &syz, shifts);
    debug_assert!(f.compose(ring, &out).is_zero());
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftError {
    /// First column of `b` not in the image of `g`.
    pub column: usize,
}

/// Solves `g . x = b` for graded maps by dense linear algebra degree by
/// degree. The target shifts of `g` and `b` must agree.
pub fn lift_through(
    ring: &PolyRing,
    g: &FreeModuleMap,
    b: &FreeModuleMap,
) -> Result<FreeModuleMap, LiftError> {
    assert_eq!(g.target_shifts, b.target_shifts, "lift: target mismatch");
    let mut x = FreeModuleMap::zero(ring, g.source_shifts.clone(), b.source_shifts.clone());
    // batch the columns of b by their degree and solve each batch at once
    let mut by_degree: std::collections::BTreeMap<i32, Vec<usize>> = Default::default();
    for j in 0..b.source_rank() {
        by_degree.entry(b.source_shifts[j]).or_default().push(j);
    }
    for (d, cols) in by_degree {
        let system = DegreeSystem::new(ring, g, d);
        let rhs: Vec<Vec<u64>> = cols.iter().map(|&j| system.target_coords(ring, b, j)).collect();
        let rows = rhs.first().map_or(0, |v| v.len());
        let rhsm = FpMatrix::from_columns(rows, rhs);
        match system.matrix.solve(&ring.ctx, &rhsm) {
            Ok(sols) => {
                for (idx, &j) in cols.iter().enumerate() {
                    system.write_column(ring, &sols.column(idx), &mut x, j);
                }
            }
            Err(bad) => return Err(LiftError { column: cols[bad.bad_columns[0]] }),
        }
    }
    debug_assert!({
        let prod = g.compose(ring, &x);
        (0..b.target_rank()).all(|i| (0..b.source_rank()).all(|j| {
            prod.entries[i][j] == b.entries[i][j]
        }))
    });
    Ok(x)
}

/// Dense model of the degree-`d` slice of a graded map: source coordinates
/// run over `(source column k, monomial of degree d - shift_k)`, target
/// coordinates over `(target row i, monomial of degree d - shift_i)`.
pub struct DegreeSystem {
    pub degree: i32,
    source_bases: Vec<Option<DegreeBasis>>,
    target_bases: Vec<Option<DegreeBasis>>,
    source_offsets: Vec<usize>,
    target_offsets: Vec<usize>,
    pub matrix: FpMatrix,
}

impl DegreeSystem {
    pub fn new(ring: &PolyRing, g: &FreeModuleMap, d: i32) -> DegreeSystem {
        let source_bases: Vec<Option<DegreeBasis>> = g
            .source_shifts
            .iter()
            .map(|&s| (d - s >= 0).then(|| DegreeBasis::new(ring, (d - s) as u32)))
            .collect();
        let target_bases: Vec<Option<DegreeBasis>> = g
            .target_shifts
            .iter()
            .map(|&s| (d - s >= 0).then(|| DegreeBasis::new(ring, (d - s) as u32)))
            .collect();
        let mut source_offsets = vec![0usize; source_bases.len() + 1];
        for (k, sb) in source_bases.iter().enumerate() {
            source_offsets[k + 1] = source_offsets[k] + sb.as_ref().map_or(0, |b| b.len());
        }
        let mut target_offsets = vec![0usize; target_bases.len() + 1];
        for (i, tb) in target_bases.iter().enumerate() {
            target_offsets[i + 1] = target_offsets[i] + tb.as_ref().map_or(0, |b| b.len());
        }
        let rows = *target_offsets.last().unwrap();
        let colcount = *source_offsets.last().unwrap();
        let mut matrix = FpMatrix::zero(rows, colcount);
        for (k, sb) in source_bases.iter().enumerate() {
            let Some(sb) = sb else { continue };
            for (mi, m) in sb.monos.iter().enumerate() {
                let col = source_offsets[k] + mi;
                for i in 0..g.target_rank() {
                    let e = &g.entries[i][k];
                    if e.is_zero() {
                        continue;
                    }
                    let tb = target_bases[i].as_ref().expect("graded map underflow");
                    let shifted = e.mul_term(ring, m, &Coeff::from_base(1));
                    for t in &shifted.terms {
                        let row = target_offsets[i] + tb.index_of(&t.mono).unwrap();
                        matrix.set(row, col, t.coeff.base);
                    }
                }
            }
        }
        DegreeSystem {
            degree: d,
            source_bases,
            target_bases,
            source_offsets,
            target_offsets,
            matrix,
        }
    }

    /// Coordinates of column `j` of `b` in the target basis.
    fn target_coords(&self, _ring: &PolyRing, b: &FreeModuleMap, j: usize) -> Vec<u64> {
        let rows = *self.target_offsets.last().unwrap();
        let mut v = vec![0u64; rows];
        for i in 0..b.target_rank() {
            let e = &b.entries[i][j];
            if e.is_zero() {
                continue;
            }
            let tb = self.target_bases[i].as_ref().expect("rhs outside graded range");
            for t in &e.terms {
                v[self.target_offsets[i] + tb.index_of(&t.mono).unwrap()] = t.coeff.base;
            }
        }
        v
    }

    fn write_column(&self, ring: &PolyRing, sol: &[u64], x: &mut FreeModuleMap, j: usize) {
        for (k, sb) in self.source_bases.iter().enumerate() {
            let Some(sb) = sb else { continue };
            let mut terms = Vec::new();
            for (mi, m) in sb.monos.iter().enumerate() {
                let c = sol[self.source_offsets[k] + mi];
                if c != 0 {
                    terms.push(Term { mono: *m, coeff: Coeff::from_base(c) });
                }
            }
            x.entries[k][j] = ring.from_terms(terms);
        }
    }
}

/// Minimal homogeneous generators extracted by degree-ascending greedy
/// selection: a candidate is redundant exactly when it reduces to zero
/// against a module basis of the generators already selected. The module
/// basis is recomputed per degree; candidates are small, so this stays
/// cheap even when the input is very redundant.
pub fn minimal_generators_by_reduction(
    ring: &PolyRing,
    target_shifts: &[i32],
    gens: &[ModPoly],
) -> Vec<ModPoly> {
    let mut by_degree: std::collections::BTreeMap<i32, Vec<&ModPoly>> = Default::default();
    for g in gens {
        if let Some(d) = g.shifted_degree(target_shifts) {
            by_degree.entry(d).or_default().push(g);
        }
    }
    let mut selected: Vec<ModPoly> = Vec::new();
    for (_, cands) in by_degree {
        // basis of the submodule generated so far
        let mut rs = if selected.is_empty() {
            None
        } else {
            let res = module_groebner_with_syzygies(ring, &selected);
            Some(res.basis)
        };
        for cand in cands {
            let nf = match &rs {
                None => cand.clone(),
                Some(basis) => {
                    let set = ModReducerSet {
                        leads: basis.iter().map(|b| {
                            let l = b.lead().unwrap();
                            (l.comp, l.mono)
                        }).collect(),
                        masks: basis
                            .iter()
                            .map(|b| support_mask(&b.lead().unwrap().mono))
                            .collect(),
                        reps: basis.iter().map(|_| ModPoly::zero()).collect(),
                        basis: basis.clone(),
                    };
                    mod_reduce(ring, &set, cand).0
                }
            };
            if !nf.is_zero() {
                let lc = nf.lead().unwrap().coeff.base;
                selected.push(nf.scale(ring, ring.ctx.inv(lc)));
                // refresh the reducer basis to include the new generator
                let res = module_groebner_with_syzygies(ring, &selected);
                rs = Some(res.basis);
            }
        }
    }
    selected
}

/// Minimal homogeneous generators of the submodule generated by `gens`
/// inside the free module with the given shifts.
pub fn minimal_module_generators(
    ring: &PolyRing,
    target_shifts: &[i32],
    gens: &[ModPoly],
) -> Vec<ModPoly> {
    let mut by_degree: std::collections::BTreeMap<i32, Vec<&ModPoly>> = Default::default();
    for g in gens {
        if let Some(d) = g.shifted_degree(target_shifts) {
            by_degree.entry(d).or_default().push(g);
        }
    }
    let mut minimal: Vec<ModPoly> = Vec::new();
    for (&d, cands) in &by_degree {
        // coordinates of the degree-d slice of the free module
        let bases: Vec<Option<DegreeBasis>> = target_shifts
            .iter()
            .map(|&s| (d - s >= 0).then(|| DegreeBasis::new(ring, (d - s) as u32)))
            .collect();
        let mut offsets = vec![0usize; bases.len() + 1];
        for (i, b) in bases.iter().enumerate() {
            offsets[i + 1] = offsets[i] + b.as_ref().map_or(0, |x| x.len());
        }
        let dim = *offsets.last().unwrap();
        let coords = |g: &ModPoly| -> Vec<u64> {
            let mut v = vec![0u64; dim];
            for t in &g.terms {
                let b = bases[t.comp as usize].as_ref().unwrap();
                v[offsets[t.comp as usize] + b.index_of(&t.mono).unwrap()] = t.coeff.base;
            }
            v
        };
        let mut cols: Vec<Vec<u64>> = Vec::new();
        for g in &minimal {
            let gd = g.shifted_degree(target_shifts).unwrap();
            if gd >= d {
                continue;
            }
            for m in ring.graded_basis((d - gd) as u32) {
                cols.push(coords(&g.mul_term(ring, &m, &Coeff::from_base(1))));
            }
        }
        let lower = cols.len();
        for g in cands {
            cols.push(coords(g));
        }
        let mat = FpMatrix::from_columns(dim, cols);
        let (_, pivots) = mat.rref(&ring.ctx);
        for &p in &pivots {
            if p >= lower {
                minimal.push(cands[p - lower].clone());
            }
        }
    }
    minimal
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fp::FpCtx;
    use crate::poly::{CoeffMode, MonomialOrder};

    fn ring() -> PolyRing {
        PolyRing::new(FpCtx::new(101), &["x", "y", "z"], MonomialOrder::GrevLex, CoeffMode::Field)
    }

    fn row_map(_ring: &PolyRing, polys: Vec<GradedPoly>) -> FreeModuleMap {
        let shifts = polys.iter().map(|p| p.degree().unwrap_or(0) as i32).collect();
        FreeModuleMap { source_shifts: shifts, target_shifts: vec![0], entries: vec![polys] }
    }

    #[test]
    fn koszul_syzygy_of_two_variables() {
        let r = ring();
        let f = row_map(&r, vec![r.var(0), r.var(1)]);
        let s = syzygies(&r, &f);
        assert_eq!(s.source_rank(), 1);
        assert!(f.compose(&r, &s).is_zero());
        // the syzygy is (-y, x) up to sign
        let col = s.column(0);
        assert_eq!(col.terms.len(), 2);
    }

    #[test]
    fn nonzerodivisor_has_no_syzygies() {
        let r = ring();
        let f = row_map(&r, vec![r.var(0)]);
        let s = syzygies(&r, &f);
        assert_eq!(s.source_rank(), 0);
    }

    #[test]
    fn syzygies_of_maximal_ideal() {
        let r = ring();
        let f = row_map(&r, vec![r.var(0), r.var(1), r.var(2)]);
        let s = syzygies(&r, &f);
        assert!(f.compose(&r, &s).is_zero());
        // Koszul: 3 minimal syzygies
        let cols: Vec<ModPoly> = (0..s.source_rank()).map(|j| s.column(j)).collect();
        let min = minimal_module_generators(&r, &s.target_shifts, &cols);
        assert_eq!(min.len(), 3);
    }

    #[test]
    fn lift_identity() {
        let r = ring();
        let g = row_map(&r, vec![r.var(0), r.var(1)]);
        let x = lift_through(&r, &g, &g).unwrap();
        // x is 2x2 with constant entries forming the identity
        assert_eq!(x.entries[0][0], r.one());
        assert_eq!(x.entries[1][1], r.one());
        assert!(x.entries[0][1].is_zero());
    }

    #[test]
    fn lift_zero() {
        let r = ring();
        let g = row_map(&r, vec![r.var(0), r.var(1)]);
        let b = FreeModuleMap::zero(&r, vec![0], vec![2]);
        let x = lift_through(&r, &g, &b).unwrap();
        assert!(x.is_zero());
    }

    #[test]
    fn lift_failure_names_column() {
        let r = ring();
        let g = row_map(&r, vec![r.var(0)]);
        // y is not in the image of multiplication by x
        let b = row_map(&r, vec![r.var(1)]);
        let err = lift_through(&r, &g, &b).unwrap_err();
        assert_eq!(err.column, 0);
    }
}
