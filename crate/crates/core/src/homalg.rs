//! Graded free resolutions, Betti tables, Koszul-cohomology Betti numbers,
//! chain maps between resolutions, and the degreewise linear-strand builder
//! used for canonical curves.

use crate::fp::FpCtx;
use crate::gb::{lift_through, syzygies, FreeModuleMap, Ideal};
use crate::matrix::FpMatrix;
use crate::poly::{Coeff, DegreeBasis, GradedPoly, Mono, PolyRing, Term};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// A complex of free modules `F_0 <- F_1 <- ... <- F_L`; `diffs[i]` is the
/// map `F_{i+1} -> F_i`. Consecutive composites are exactly zero.
#[derive(Clone, Debug)]
pub struct Resolution {
    pub ring: PolyRing,
    pub diffs: Vec<FreeModuleMap>,
    pub minimal: bool,
}

impl Resolution {
    pub fn length(&self) -> usize {
        self.diffs.len()
    }

    /// Degree shifts of the free module at homological position `i`.
    pub fn shifts(&self, i: usize) -> &[i32] {
        if i == 0 {
            &self.diffs[0].target_shifts
        } else {
            &self.diffs[i - 1].source_shifts
        }
    }

    pub fn rank(&self, i: usize) -> usize {
        self.shifts(i).len()
    }

    /// Exactness of composites, checked literally.
    pub fn composites_vanish(&self) -> bool {
        for i in 1..self.diffs.len() {
            if !self.diffs[i - 1].compose(&self.ring, &self.diffs[i]).is_zero() {
                return false;
            }
        }
        true
    }

    /// No nonzero constant entry in any differential.
    pub fn is_minimal_complex(&self) -> bool {
        self.diffs.iter().all(|d| {
            d.entries.iter().enumerate().all(|(i, row)| {
                row.iter()
                    .enumerate()
                    .all(|(j, e)| e.is_zero() || d.source_shifts[j] != d.target_shifts[i])
            })
        })
    }
}

/// Free resolution of `S/I` to homological degree `length` by iterated
/// syzygies, then minimalized. At every step the syzygy generating set is
/// thinned to a minimal one, so the ranks are the graded Betti numbers at
/// every position including the last.
pub fn resolve(ideal: &Ideal, length: usize) -> Resolution {
    assert!(length >= 1);
    let ring = &ideal.ring;
    let gens = ideal.minimal_generators();
    let shifts: Vec<i32> = gens.iter().map(|g| g.degree().unwrap() as i32).collect();
    let d1 = FreeModuleMap { source_shifts: shifts, target_shifts: vec![0], entries: vec![gens] };
    let mut diffs = vec![d1];
    for _ in 1..length {
        let prev = diffs.last().unwrap();
        let raw = syzygies(ring, prev);
        if raw.source_rank() == 0 {
            break;
        }
        let cols: Vec<crate::gb::ModPoly> = (0..raw.source_rank()).map(|j| raw.column(j)).collect();
        let minimal = crate::gb::modfree::minimal_generators_by_reduction(
            ring,
            &raw.target_shifts,
            &cols,
        );
        if minimal.is_empty() {
            break;
        }
        let shifts: Vec<i32> = minimal
            .iter()
            .map(|m| m.shifted_degree(&raw.target_shifts).unwrap())
            .collect();
        let next = FreeModuleMap::from_columns(ring, raw.target_shifts.clone(), &minimal, shifts);
        diffs.push(next);
    }
    let res = Resolution { ring: ring.clone(), diffs, minimal: false };
    minimalize(res)
}

/// Cancels constant pivots one at a time until the complex is minimal.
pub fn minimalize(mut res: Resolution) -> Resolution {
    let ring = res.ring.clone();
    loop {
        let Some((pos, r, c)) = find_constant_pivot(&res) else { break };
        cancel_pivot(&ring, &mut res, pos, r, c);
    }
    // drop trailing zero modules
    while res.diffs.last().map(|d| d.source_rank() == 0).unwrap_or(false) {
        res.diffs.pop();
    }
    res.minimal = true;
    debug_assert!(res.composites_vanish());
    res
}

fn find_constant_pivot(res: &Resolution) -> Option<(usize, usize, usize)> {
    for (pos, d) in res.diffs.iter().enumerate() {
        for (i, row) in d.entries.iter().enumerate() {
            for (j, e) in row.iter().enumerate() {
                if !e.is_zero() && d.source_shifts[j] == d.target_shifts[i] {
                    return Some((pos, i, j));
                }
            }
        }
    }
    None
}

fn cancel_pivot(ring: &PolyRing, res: &mut Resolution, pos: usize, r: usize, c: usize) {
    let d = &res.diffs[pos];
    let u = d.entries[r][c].leading().unwrap().coeff.base;
    let uinv = ring.ctx.inv(u);
    // rank-one update, then delete row r and column c
    let old = d.clone();
    let mut entries: Vec<Vec<GradedPoly>> = Vec::with_capacity(old.target_rank() - 1);
    let mut target_shifts = Vec::with_capacity(old.target_rank() - 1);
    for i in 0..old.target_rank() {
        if i == r {
            continue;
        }
        target_shifts.push(old.target_shifts[i]);
        let mut row = Vec::with_capacity(old.source_rank() - 1);
        for j in 0..old.source_rank() {
            if j == c {
                continue;
            }
            let correction = old.entries[r][j]
                .multiply(ring, &old.entries[i][c])
                .unwrap()
                .scale(ring, uinv);
            row.push(old.entries[i][j].sub(ring, &correction));
        }
        entries.push(row);
    }
    let mut source_shifts = old.source_shifts.clone();
    source_shifts.remove(c);
    res.diffs[pos] = FreeModuleMap { source_shifts, target_shifts, entries };
    // the next differential loses row c
    if pos + 1 < res.diffs.len() {
        let nxt = &mut res.diffs[pos + 1];
        nxt.target_shifts.remove(c);
        nxt.entries.remove(c);
    }
    // the previous differential loses column r
    if pos > 0 {
        let prv = &mut res.diffs[pos - 1];
        prv.source_shifts.remove(r);
        for row in prv.entries.iter_mut() {
            row.remove(r);
        }
    }
}

/// Betti table of a minimal resolution: `(i, j) -> number of degree-j
/// generators of F_i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct BettiTable {
    pub entries: BTreeMap<(usize, i32), usize>,
}

impl BettiTable {
    pub fn get(&self, i: usize, j: i32) -> usize {
        self.entries.get(&(i, j)).copied().unwrap_or(0)
    }

    pub fn set(&mut self, i: usize, j: i32, v: usize) {
        if v > 0 {
            self.entries.insert((i, j), v);
        }
    }

    /// Renders the table in the standard grid layout: rows are `j - i`,
    /// columns are `i`, zeros printed as dots.
    pub fn paper_grid(&self) -> String {
        if self.entries.is_empty() {
            return String::from("(empty)\n");
        }
        let max_i = self.entries.keys().map(|&(i, _)| i).max().unwrap();
        let min_row = self.entries.keys().map(|&(i, j)| j - i as i32).min().unwrap();
        let max_row = self.entries.keys().map(|&(i, j)| j - i as i32).max().unwrap();
        let mut out = String::new();
        for row in min_row..=max_row {
            let cells: Vec<String> = (0..=max_i)
                .map(|i| {
                    let v = self.get(i, row + i as i32);
                    if v == 0 {
                        ".".to_string()
                    } else {
                        v.to_string()
                    }
                })
                .collect();
            out.push_str(&cells.join(" "));
            out.push('\n');
        }
        out
    }
}

pub fn betti_table(res: &Resolution) -> BettiTable {
    assert!(res.minimal, "betti table needs a minimal resolution");
    let mut t = BettiTable::default();
    for i in 0..=res.length() {
        for &s in res.shifts(i) {
            let v = t.get(i, s) + 1;
            t.set(i, s, v);
        }
    }
    t
}

/// Graded slice of a quotient ring S/I: standard-monomial basis plus the
/// reduction of arbitrary degree-d vectors onto it.
pub struct QuotientSlice {
    pub degree: u32,
    pub basis: DegreeBasis,
    /// positions of the standard monomials inside `basis`
    pub free: Vec<usize>,
    rref: FpMatrix,
    pivots: Vec<usize>,
}

impl QuotientSlice {
    /// `gens` generate the ideal; the degree-d piece of the ideal is the
    /// span of their monomial multiples.
    pub fn new(ring: &PolyRing, gens: &[GradedPoly], d: u32) -> QuotientSlice {
        let db = DegreeBasis::new(ring, d);
        let mut cols: Vec<Vec<u64>> = Vec::new();
        for g in gens {
            let Some(gd) = g.degree() else { continue };
            if gd as u32 > d {
                continue;
            }
            for m in ring.graded_basis(d - gd as u32) {
                cols.push(db.coords(&g.mul_term(ring, &m, &Coeff::from_base(1))));
            }
        }
        let (rref, pivots) = if cols.is_empty() {
            (FpMatrix::zero(0, db.len()), Vec::new())
        } else {
            // row space of the transpose = span of the ideal slice
            let mat = FpMatrix::from_columns(db.len(), cols).transpose();
            mat.rref(&ring.ctx)
        };
        let free: Vec<usize> = (0..db.len()).filter(|i| !pivots.contains(i)).collect();
        QuotientSlice { degree: d, basis: db, free, rref, pivots }
    }

    pub fn dim(&self) -> usize {
        self.free.len()
    }

    /// Reduces dense degree-d coordinates modulo the ideal slice, returning
    /// coordinates over the standard monomials.
    pub fn reduce(&self, ctx: &FpCtx, v: &[u64]) -> Vec<u64> {
        let mut w = v.to_vec();
        for (t, &p) in self.pivots.iter().enumerate() {
            let c = w[p] % ctx.prime();
            if c == 0 {
                continue;
            }
            let m = ctx.prime() - c;
            let row = self.rref.row(t);
            for (x, &rv) in w.iter_mut().zip(row.iter()) {
                *x = (*x + m * rv) % ctx.prime();
            }
        }
        self.free.iter().map(|&i| w[i] % ctx.prime()).collect()
    }

    pub fn reduce_poly(&self, ring: &PolyRing, f: &GradedPoly) -> Vec<u64> {
        self.reduce(&ring.ctx, &self.basis.coords(f))
    }

    /// Lifts quotient coordinates back to a polynomial supported on the
    /// standard monomials.
    pub fn lift(&self, ring: &PolyRing, coords: &[u64]) -> GradedPoly {
        let terms: Vec<Term> = coords
            .iter()
            .enumerate()
            .filter(|&(_, &c)| c % ring.ctx.prime() != 0)
            .map(|(k, &c)| Term {
                mono: self.basis.monos[self.free[k]],
                coeff: Coeff::from_base(ring.ctx.reduce(c)),
            })
            .collect();
        ring.from_terms(terms)
    }

    /// Matrix of multiplication by variable `v`: `Q_d -> Q_{d+1}`.
    pub fn mult_by_var(&self, ring: &PolyRing, next: &QuotientSlice, v: usize) -> FpMatrix {
        let mut out = FpMatrix::zero(next.dim(), self.dim());
        for (k, &i) in self.free.iter().enumerate() {
            let m = self.basis.monos[i].mul(&Mono::var(v));
            let mut dense = vec![0u64; next.basis.len()];
            dense[next.basis.index_of(&m).unwrap()] = 1;
            let red = next.reduce(&ring.ctx, &dense);
            for (r, &c) in red.iter().enumerate() {
                out.set(r, k, c);
            }
        }
        out
    }
}

/// Subsets of `{0..n-1}` of size `k` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    if k == 0 {
        out.push(vec![]);
        return out;
    }
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        // advance to the next combination
        let mut i = k;
        let mut moved = false;
        while i > 0 {
            i -= 1;
            if cur[i] != i + n - k {
                cur[i] += 1;
                for j in i + 1..k {
                    cur[j] = cur[j - 1] + 1;
                }
                moved = true;
                break;
            }
        }
        if !moved {
            return out;
        }
    }
}

/// Graded Betti number computed directly as Koszul cohomology:
/// the homology of
/// `Wedge^{i+1} V (x) Q_{j-i-1} -> Wedge^i V (x) Q_{j-i} -> Wedge^{i-1} V (x) Q_{j-i+1}`
/// where `Q = S/I` and `V` the degree-one piece, by two ranks.
pub fn koszul_betti(ring: &PolyRing, gens: &[GradedPoly], i: usize, j: i32) -> usize {
    let n = ring.nvars();
    if i == 0 {
        return usize::from(j == 0);
    }
    if i > n {
        return 0;
    }
    let e_mid = j - i as i32;
    if e_mid < 0 {
        return 0;
    }
    let degs = [e_mid - 1, e_mid, e_mid + 1];
    let slices: Vec<Option<QuotientSlice>> = degs
        .iter()
        .map(|&d| (d >= 0).then(|| QuotientSlice::new(ring, gens, d as u32)))
        .collect();
    let dim_mid = slices[1].as_ref().map_or(0, |s| s.dim()) * binom_usize(n, i);
    if dim_mid == 0 {
        return 0;
    }
    let right = koszul_map(ring, i, &slices[1], &slices[2]);
    let rank_right = right.as_ref().map_or(0, |m| m.rank(&ring.ctx));
    let left = koszul_map(ring, i + 1, &slices[0], &slices[1]);
    let rank_left = left.as_ref().map_or(0, |m| m.rank(&ring.ctx));
    dim_mid - rank_right - rank_left
}

fn binom_usize(n: usize, k: usize) -> usize {
    crate::poly::binom(n as u64, k as u64) as usize
}

/// Matrix of the Koszul differential
/// `Wedge^a V (x) Q_e -> Wedge^{a-1} V (x) Q_{e+1}`; signs alternate with
/// the position of the removed index.
fn koszul_map(
    ring: &PolyRing,
    a: usize,
    from: &Option<QuotientSlice>,
    to: &Option<QuotientSlice>,
) -> Option<FpMatrix> {
    let from = from.as_ref()?;
    let to = to.as_ref()?;
    let n = ring.nvars();
    if a == 0 || a > n {
        return None;
    }
    let ctx = &ring.ctx;
    let src_sets = combinations(n, a);
    let dst_sets = combinations(n, a - 1);
    let dst_index: BTreeMap<Vec<usize>, usize> =
        dst_sets.iter().cloned().enumerate().map(|(x, s)| (s, x)).collect();
    let mults: Vec<FpMatrix> = (0..n).map(|v| from.mult_by_var(ring, to, v)).collect();
    let (df, dt) = (from.dim(), to.dim());
    let mut mat = FpMatrix::zero(dst_sets.len() * dt, src_sets.len() * df);
    for (si, set) in src_sets.iter().enumerate() {
        for (pos, &v) in set.iter().enumerate() {
            let mut rest = set.clone();
            rest.remove(pos);
            let di = dst_index[&rest];
            let sign_neg = pos % 2 == 1;
            let m = &mults[v];
            for q in 0..df {
                for rq in 0..dt {
                    let val = m.at(rq, q);
                    if val == 0 {
                        continue;
                    }
                    let val = if sign_neg { ctx.neg(val) } else { val };
                    let row = di * dt + rq;
                    let col = si * df + q;
                    let prev = mat.at(row, col);
                    mat.set(row, col, ctx.add(prev, val));
                }
            }
        }
    }
    Some(mat)
}

/// Chain map lifting `start: F_0(source) -> F_0(target)` through both
/// resolutions: returns maps `alpha_0 .. alpha_L` with
/// `d^target . alpha_i = alpha_{i-1} . d^source`.
pub fn chain_map(
    source: &Resolution,
    target: &Resolution,
    start: FreeModuleMap,
) -> Result<Vec<FreeModuleMap>, crate::gb::modfree::LiftError> {
    let ring = &source.ring;
    let len = source.length().min(target.length());
    let mut maps = vec![start];
    for i in 0..len {
        let rhs = maps[i].compose(ring, &source.diffs[i]);
        let alpha = lift_through(ring, &target.diffs[i], &rhs)?;
        maps.push(alpha);
    }
    Ok(maps)
}

/// The linear strand of the resolution of S/I for an ideal with quadric
/// generators, positions `1..=through`, built positionwise: position q+2
/// holds the kernel of the degree-(q+3) coefficient matrix of the previous
/// strand differential.
pub struct LinearStrand {
    pub ring: PolyRing,
    pub quadrics: Vec<GradedPoly>,
    /// `kernels[q]` for q >= 0: matrix of shape `(b_{q+1} * nvars) x b_{q+2}`
    /// whose columns are the position-(q+2) strand generators written as
    /// vectors of linear forms over the position-(q+1) generators, where
    /// `b_1 = quadrics.len()`.
    pub kernels: Vec<FpMatrix>,
}

impl LinearStrand {
    pub fn rank(&self, position: usize) -> usize {
        assert!(position >= 1);
        if position == 1 {
            self.quadrics.len()
        } else {
            self.kernels[position - 2].cols
        }
    }

    /// The strand differential at `position >= 2` as a polynomial matrix
    /// (entries are linear forms).
    pub fn differential(&self, position: usize) -> FreeModuleMap {
        assert!(position >= 2);
        let ring = &self.ring;
        let n = ring.nvars();
        let k = &self.kernels[position - 2];
        let rows = self.rank(position - 1);
        let cols = self.rank(position);
        let mut entries = vec![vec![ring.zero(); cols]; rows];
        for (r, row_entries) in entries.iter_mut().enumerate() {
            for (c, e) in row_entries.iter_mut().enumerate() {
                let mut terms = Vec::new();
                for v in 0..n {
                    let coef = k.at(r * n + v, c);
                    if coef != 0 {
                        terms.push(Term { mono: Mono::var(v), coeff: Coeff::from_base(coef) });
                    }
                }
                *e = ring.from_terms(terms);
            }
        }
        FreeModuleMap {
            source_shifts: vec![position as i32 + 1; cols],
            target_shifts: vec![position as i32; rows],
            entries,
        }
    }
}

/// Coefficient matrix of the map `(S_1)^{b} -> (S_2)^{rows_prev}` induced
/// by a linear-form matrix given in kernel layout (`(rows_prev * nvars) x b`).
pub fn promote_linear(ring: &PolyRing, kernel: &FpMatrix, rows_prev: usize) -> FpMatrix {
    let n = ring.nvars();
    let ctx = &ring.ctx;
    let b = kernel.cols;
    let d2 = DegreeBasis::new(ring, 2);
    let mut out = FpMatrix::zero(rows_prev * d2.len(), b * n);
    for c in 0..b {
        for w in 0..n {
            let col = c * n + w;
            for r in 0..rows_prev {
                for v in 0..n {
                    let coef = kernel.at(r * n + v, c);
                    if coef == 0 {
                        continue;
                    }
                    let m = Mono::var(v).mul(&Mono::var(w));
                    let row = r * d2.len() + d2.index_of(&m).unwrap();
                    let prev = out.at(row, col);
                    out.set(row, col, ctx.add(prev, coef));
                }
            }
        }
    }
    out
}

/// Coefficient matrix of `(S_1)^{#quadrics} -> S_3`, the first strand step.
pub fn promote_quadrics(ring: &PolyRing, quadrics: &[GradedPoly]) -> FpMatrix {
    let n = ring.nvars();
    let d3 = DegreeBasis::new(ring, 3);
    let mut out = FpMatrix::zero(d3.len(), quadrics.len() * n);
    for (q, f) in quadrics.iter().enumerate() {
        for w in 0..n {
            let col = q * n + w;
            let prod = f.mul_term(ring, &Mono::var(w), &Coeff::from_base(1));
            for t in &prod.terms {
                let row = d3.index_of(&t.mono).unwrap();
                let prev = out.at(row, col);
                out.set(row, col, ring.ctx.add(prev, t.coeff.base));
            }
        }
    }
    out
}

/// Builds the linear strand through the given homological position
/// (`through >= 2`); `through = 5` yields the data feeding the deformation
/// matrix M.
pub fn linear_strand(ring: &PolyRing, quadrics: &[GradedPoly], through: usize) -> LinearStrand {
    assert!(through >= 2);
    let mut strand =
        LinearStrand { ring: ring.clone(), quadrics: quadrics.to_vec(), kernels: Vec::new() };
    for pos in 2..=through {
        let promoted = if pos == 2 {
            promote_quadrics(ring, quadrics)
        } else {
            let prev_rows = strand.rank(pos - 2);
            promote_linear(ring, strand.kernels.last().unwrap(), prev_rows)
        };
        let ker = promoted.kernel_basis(&ring.ctx);
        strand.kernels.push(ker);
    }
    strand
}
