//! Dense exact linear algebra over GF(p).
//!
//! `FpMatrix` is the workhorse behind every rank, kernel and condition
//! system in the crate, from 3x3 toy cases up to the ~21000 x 4000
//! eliminations of the resolution-lifting pipeline. Elimination uses lazy
//! reduction: entries accumulate unreduced in `u64` while the pivot row is
//! kept reduced below `2^15`, so the inner loop is a pure multiply-add that
//! the compiler can vectorize. Pivoting always selects the first nonzero
//! entry in column order, so results are bitwise deterministic.

use crate::fp::FpCtx;
use serde::{Deserialize, Serialize};

/// Dense row-major matrix over GF(p). Entries are kept reduced in `[0, p)`
/// except transiently inside elimination kernels.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FpMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<u64>,
}

/// Failure report from [`FpMatrix::solve`]: the listed columns of the right
/// hand side are not in the column span of the left hand side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Inconsistent {
    pub bad_columns: Vec<usize>,
}

impl FpMatrix {
    pub fn zero(rows: usize, cols: usize) -> FpMatrix {
        FpMatrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> FpMatrix {
        let mut m = FpMatrix::zero(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<u64>>) -> FpMatrix {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut data = Vec::with_capacity(r * c);
        for row in &rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend_from_slice(row);
        }
        FpMatrix { rows: r, cols: c, data }
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.cols + j] = v;
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> FpMatrix {
        let mut t = FpMatrix::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.at(i, j);
            }
        }
        t
    }

    pub fn mul(&self, ctx: &FpCtx, other: &FpMatrix) -> FpMatrix {
        assert_eq!(self.cols, other.rows, "shape mismatch in mul");
        let p = ctx.prime();
        // u32 copy of the right factor so the inner loop is a widening
        // multiply-add; p < 2^15 keeps products below 2^30 and sums over
        // fewer than 2^33 terms fit in u64.
        let b32: Vec<u32> = other.data.iter().map(|&v| (v % p) as u32).collect();
        let mut out = FpMatrix::zero(self.rows, other.cols);
        let w = other.cols;
        for i in 0..self.rows {
            let dst = &mut out.data[i * w..(i + 1) * w];
            let arow = &self.data[i * self.cols..(i + 1) * self.cols];
            for (k, &araw) in arow.iter().enumerate() {
                let a = (araw % p) as u32;
                if a == 0 {
                    continue;
                }
                let src = &b32[k * w..(k + 1) * w];
                for (d, &s) in dst.iter_mut().zip(src.iter()) {
                    *d += a as u64 * s as u64;
                }
                if k % 8192 == 8191 {
                    for v in dst.iter_mut() {
                        *v %= p;
                    }
                }
            }
        }
        for v in out.data.iter_mut() {
            *v %= p;
        }
        out
    }

    /// Glues `other` to the right of `self`.
    pub fn hstack(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!(self.rows, other.rows);
        let mut m = FpMatrix::zero(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            let dst = &mut m.data[i * m.cols..i * m.cols + self.cols];
            dst.copy_from_slice(self.row(i));
            let dst = &mut m.data[i * m.cols + self.cols..(i + 1) * m.cols];
            dst.copy_from_slice(other.row(i));
        }
        m
    }

    /// Glues `other` below `self`.
    pub fn vstack(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        FpMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn column(&self, j: usize) -> Vec<u64> {
        (0..self.rows).map(|i| self.at(i, j)).collect()
    }

    pub fn from_columns(rows: usize, cols: Vec<Vec<u64>>) -> FpMatrix {
        let mut m = FpMatrix::zero(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for i in 0..rows {
                m.set(i, j, c[i]);
            }
        }
        m
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    /// Forward elimination in place. Returns the pivot columns in strictly
    /// increasing order; afterwards the matrix is in row echelon form with
    /// reduced entries and unit pivots.
    ///
    /// Blocked variant: pivots are located inside a narrow column stripe
    /// with eager scalar updates, then the accumulated eliminations are
    /// applied to the trailing columns as one rank-K update. All products
    /// are u32 x u32 widened into u64 accumulators; with p < 2^15 nothing
    /// overflows before the final reduction.
    fn echelonize(&mut self, ctx: &FpCtx) -> Vec<usize> {
        self.echelonize_limited(ctx, self.cols)
    }

    /// Forward elimination selecting pivots only among the first
    /// `limit_cols` columns (the tail is carried along, for augmented
    /// solves).
    fn echelonize_limited(&mut self, ctx: &FpCtx, limit_cols: usize) -> Vec<usize> {
        const PANEL: usize = 64;
        let p = ctx.prime();
        let (rows, cols) = (self.rows, self.cols);
        let mut pivots: Vec<usize> = Vec::new();
        let mut r = 0usize; // next pivot row
        let mut c0 = 0usize; // first unprocessed column
        // per-panel scratch
        let mut mults: Vec<u32> = Vec::new(); // (rows - r) x K multipliers, row-major
        let mut prow32: Vec<u32> = Vec::new(); // K x trailing-width reduced pivot rows
        while c0 < limit_cols && r < rows {
            let stripe_end = (c0 + PANEL).min(limit_cols);
            let stripe_w = stripe_end - c0;
            let below = rows - r;
            // --- panel phase: scalar elimination restricted to the stripe
            let mut local_pivots: Vec<usize> = Vec::new(); // pivot columns
            let mut inv_factors: Vec<u64> = Vec::new();
            mults.clear();
            mults.resize(below * PANEL, 0);
            for col in c0..stripe_end {
                let rr = r + local_pivots.len();
                if rr == rows {
                    break;
                }
                let mut sel = None;
                for i in rr..rows {
                    let v = self.data[i * cols + col] % p;
                    self.data[i * cols + col] = v;
                    if v != 0 {
                        sel = Some(i);
                        break;
                    }
                }
                let Some(i) = sel else { continue };
                if i != rr {
                    // swap whole rows so pivot rows stay contiguous
                    let (lo, hi) = (rr.min(i), rr.max(i));
                    let (a, b) = self.data.split_at_mut(hi * cols);
                    a[lo * cols..lo * cols + cols].swap_with_slice(&mut b[..cols]);
                    let (ma, mb) = mults.split_at_mut((hi - r) * PANEL);
                    ma[(lo - r) * PANEL..(lo - r + 1) * PANEL]
                        .swap_with_slice(&mut mb[..PANEL]);
                }
                let t = local_pivots.len();
                let inv = ctx.inv(self.data[rr * cols + col] % p);
                // normalize the stripe part of the pivot row
                let mut piv_stripe = [0u32; PANEL];
                for j in col..stripe_end {
                    let v = (self.data[rr * cols + j] % p) * inv % p;
                    self.data[rr * cols + j] = v;
                    piv_stripe[j - c0] = v as u32;
                }
                for i in (rr + 1)..rows {
                    let m = self.data[i * cols + col] % p;
                    if m == 0 {
                        self.data[i * cols + col] = 0;
                        continue;
                    }
                    let mult = (p - m) as u32;
                    mults[(i - r) * PANEL + t] = mult;
                    let rowi = &mut self.data[i * cols + col..i * cols + stripe_end];
                    let pv = &piv_stripe[col - c0..stripe_w];
                    for (a, &b) in rowi.iter_mut().zip(pv.iter()) {
                        *a += mult as u64 * b as u64;
                    }
                    rowi[0] = 0;
                }
                local_pivots.push(col);
                inv_factors.push(inv);
            }
            let k = local_pivots.len();
            let trail = cols - stripe_end;
            if k > 0 && trail > 0 {
                // --- triangle phase: bring the K pivot-row tails up to date
                prow32.clear();
                prow32.resize(k * trail, 0);
                for t in 0..k {
                    let rt = r + t;
                    // updates from earlier pivots in this panel
                    let mrow = &mults[t * PANEL..t * PANEL + t];
                    for t2 in 0..t {
                        let m = mrow[t2];
                        if m == 0 {
                            continue;
                        }
                        let src = &prow32[t2 * trail..(t2 + 1) * trail];
                        let dst = &mut self.data[rt * cols + stripe_end..(rt + 1) * cols];
                        for (a, &b) in dst.iter_mut().zip(src.iter()) {
                            *a += m as u64 * b as u64;
                        }
                    }
                    let inv = inv_factors[t];
                    let dst = &mut self.data[rt * cols + stripe_end..(rt + 1) * cols];
                    for (j, a) in dst.iter_mut().enumerate() {
                        let v = (*a % p) * inv % p;
                        *a = v;
                        prow32[t * trail + j] = v as u32;
                    }
                }
                // --- update phase: rank-K update of the trailing block
                const TILE: usize = 1024;
                let mut j0 = 0usize;
                while j0 < trail {
                    let tw = TILE.min(trail - j0);
                    for i in (r + k)..rows {
                        let mrow = &mults[(i - r) * PANEL..(i - r) * PANEL + k];
                        let rowi = &mut self.data[i * cols + stripe_end + j0
                            ..i * cols + stripe_end + j0 + tw];
                        // four panel rows at a time to amortize the row tile
                        let mut t = 0usize;
                        while t + 4 <= k {
                            let (m0, m1, m2, m3) =
                                (mrow[t], mrow[t + 1], mrow[t + 2], mrow[t + 3]);
                            if m0 | m1 | m2 | m3 != 0 {
                                let s0 = &prow32[t * trail + j0..t * trail + j0 + tw];
                                let s1 = &prow32[(t + 1) * trail + j0..(t + 1) * trail + j0 + tw];
                                let s2 = &prow32[(t + 2) * trail + j0..(t + 2) * trail + j0 + tw];
                                let s3 = &prow32[(t + 3) * trail + j0..(t + 3) * trail + j0 + tw];
                                for j in 0..tw {
                                    rowi[j] += m0 as u64 * s0[j] as u64
                                        + m1 as u64 * s1[j] as u64
                                        + m2 as u64 * s2[j] as u64
                                        + m3 as u64 * s3[j] as u64;
                                }
                            }
                            t += 4;
                        }
                        while t < k {
                            let m = mrow[t];
                            if m != 0 {
                                let src = &prow32[t * trail + j0..t * trail + j0 + tw];
                                for (a, &b) in rowi.iter_mut().zip(src.iter()) {
                                    *a += m as u64 * b as u64;
                                }
                            }
                            t += 1;
                        }
                    }
                    j0 += tw;
                }
            }
            pivots.extend_from_slice(&local_pivots);
            r += k;
            c0 = stripe_end;
        }
        // reduce everything that elimination left unreduced
        for v in self.data.iter_mut() {
            *v %= p;
        }
        pivots
    }

    /// Back substitution over an echelonized matrix, producing the reduced
    /// row echelon form.
    fn back_substitute(&mut self, ctx: &FpCtx, pivots: &[usize]) {
        let p = ctx.prime();
        let cols = self.cols;
        let mut piv32: Vec<u32> = vec![0; cols];
        for (r, &col) in pivots.iter().enumerate().rev() {
            for j in col..cols {
                piv32[j] = (self.data[r * cols + j] % p) as u32;
            }
            for i in 0..r {
                let m = self.data[i * cols + col] % p;
                if m == 0 {
                    self.data[i * cols + col] = 0;
                    continue;
                }
                let mult = p - m;
                let rowi = &mut self.data[i * cols..(i + 1) * cols];
                for j in col..cols {
                    rowi[j] += mult * piv32[j] as u64;
                }
                rowi[col] = 0;
            }
        }
        for v in self.data.iter_mut() {
            *v %= p;
        }
    }

    /// Reduced row echelon form together with the pivot column indices.
    pub fn rref(&self, ctx: &FpCtx) -> (FpMatrix, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.echelonize(ctx);
        m.back_substitute(ctx, &pivots);
        (m, pivots)
    }

    pub fn rank(&self, ctx: &FpCtx) -> usize {
        let mut m = self.clone();
        m.echelonize(ctx).len()
    }

    /// Basis of the right null space as matrix columns. The number of
    /// columns is `cols - rank`; `self * K = 0` exactly.
    pub fn kernel_basis(&self, ctx: &FpCtx) -> FpMatrix {
        let mut m = self.clone();
        let pivots = m.echelonize(ctx);
        let free: Vec<usize> = (0..m.cols).filter(|c| !pivots.contains(c)).collect();
        // back-substitute all free columns at once over the echelon form
        let vals = back_solve(ctx, &m, &pivots, &free, true);
        let mut k = FpMatrix::zero(self.cols, free.len());
        for (idx, &f) in free.iter().enumerate() {
            k.set(f, idx, 1);
            for (t, &c) in pivots.iter().enumerate() {
                k.set(c, idx, vals[t * free.len() + idx] as u64);
            }
        }
        k
    }

    /// Solves `self * X = b` columnwise. On failure reports which columns
    /// of `b` lie outside the column span. Free variables are set to zero.
    pub fn solve(&self, ctx: &FpCtx, b: &FpMatrix) -> Result<FpMatrix, Inconsistent> {
        assert_eq!(self.rows, b.rows, "solve: row mismatch");
        let mut aug = self.hstack(b);
        let pivots = aug.echelonize_limited(ctx, self.cols);
        let rank = pivots.len();
        let mut bad = Vec::new();
        for j in 0..b.cols {
            for i in rank..aug.rows {
                if aug.at(i, self.cols + j) != 0 {
                    bad.push(j);
                    break;
                }
            }
        }
        if !bad.is_empty() {
            return Err(Inconsistent { bad_columns: bad });
        }
        let rhs: Vec<usize> = (self.cols..aug.cols).collect();
        let vals = back_solve(ctx, &aug, &pivots, &rhs, false);
        let mut x = FpMatrix::zero(self.cols, b.cols);
        for (t, &c) in pivots.iter().enumerate() {
            for j in 0..b.cols {
                x.set(c, j, vals[t * b.cols + j] as u64);
            }
        }
        debug_assert!(
            self.rows * self.cols * b.cols > 1_000_000 || self.mul(ctx, &x) == *b
        );
        Ok(x)
    }

    /// Pivot solution of `self * X = b` that ignores inconsistent rows:
    /// `self * X` is the projection of `b` onto the column span along the
    /// elimination's row decomposition. Free variables are zero.
    pub fn solve_projected(&self, ctx: &FpCtx, b: &FpMatrix) -> FpMatrix {
        assert_eq!(self.rows, b.rows, "solve: row mismatch");
        let mut aug = self.hstack(b);
        let pivots = aug.echelonize_limited(ctx, self.cols);
        let rhs_idx: Vec<usize> = (self.cols..aug.cols).collect();
        let vals = back_solve(ctx, &aug, &pivots, &rhs_idx, false);
        let mut x = FpMatrix::zero(self.cols, b.cols);
        for (t, &c) in pivots.iter().enumerate() {
            for j in 0..b.cols {
                x.set(c, j, vals[t * b.cols + j] as u64);
            }
        }
        x
    }

    /// Basis of `colspan(self)  ∩ colspan(other)`, via the kernel of the
    /// juxtaposition `[self | -other]`.
    pub fn intersect_spans(&self, ctx: &FpCtx, other: &FpMatrix) -> FpMatrix {
        assert_eq!(self.rows, other.rows, "intersect_spans: row mismatch");
        let mut negated = other.clone();
        for v in negated.data.iter_mut() {
            *v = ctx.neg(*v % ctx.prime());
        }
        let glued = self.hstack(&negated);
        let ker = glued.kernel_basis(ctx);
        // image under `self` of the left part of each kernel vector
        let mut vecs = Vec::new();
        for j in 0..ker.cols {
            let mut v = vec![0u64; self.rows];
            for c in 0..self.cols {
                let coef = ker.at(c, j);
                if coef == 0 {
                    continue;
                }
                for i in 0..self.rows {
                    v[i] = ctx.mul_add(v[i], coef, self.at(i, c));
                }
            }
            vecs.push(v);
        }
        column_space_basis(ctx, self.rows, vecs)
    }

    /// Column space basis, dropping dependent columns.
    pub fn column_basis(&self, ctx: &FpCtx) -> FpMatrix {
        let cols = (0..self.cols).map(|j| self.column(j)).collect();
        column_space_basis(ctx, self.rows, cols)
    }

    pub fn random(rng: &mut crate::rng::Rng, ctx: &FpCtx, rows: usize, cols: usize) -> FpMatrix {
        let mut m = FpMatrix::zero(rows, cols);
        for v in m.data.iter_mut() {
            *v = rng.fp(ctx.prime());
        }
        m
    }
}

/// Batched back substitution over an echelon form with unit pivots.
///
/// For every target column `f` solves `x[pivots[t]]` from the bottom up,
/// treating non-pivot columns as zero; `negate` flips the sign of the
/// constant term (kernel mode). Returns `rank x targets.len()` values.
fn back_solve(
    ctx: &FpCtx,
    m: &FpMatrix,
    pivots: &[usize],
    targets: &[usize],
    negate: bool,
) -> Vec<u32> {
    let p = ctx.prime();
    let rank = pivots.len();
    let w = targets.len();
    let mut xs = vec![0u32; rank * w];
    let mut acc: Vec<u64> = vec![0; w];
    for t in (0..rank).rev() {
        let row = m.row(t);
        for (j, &c) in targets.iter().enumerate() {
            let v = row[c] % p;
            acc[j] = if negate { (p - v) % p } else { v };
        }
        for t2 in (t + 1)..rank {
            let u = row[pivots[t2]] % p;
            if u == 0 {
                continue;
            }
            let mult = p - u;
            let src = &xs[t2 * w..(t2 + 1) * w];
            for (a, &s) in acc.iter_mut().zip(src.iter()) {
                *a += mult * s as u64;
            }
        }
        for (j, &a) in acc.iter().enumerate() {
            xs[t * w + j] = (a % p) as u32;
        }
    }
    xs
}

/// Kernel basis read off a reduced row echelon form.
pub fn kernel_from_rref(ctx: &FpCtx, r: &FpMatrix, pivots: &[usize]) -> FpMatrix {
    let cols = r.cols;
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    let mut k = FpMatrix::zero(cols, free.len());
    for (idx, &f) in free.iter().enumerate() {
        k.set(f, idx, 1);
        for (i, &c) in pivots.iter().enumerate() {
            k.set(c, idx, ctx.neg(r.at(i, f)));
        }
    }
    k
}

/// Reduces a list of vectors to a column basis of their span (deterministic:
/// earlier vectors win ties).
pub fn column_space_basis(ctx: &FpCtx, dim: usize, vecs: Vec<Vec<u64>>) -> FpMatrix {
    if vecs.is_empty() {
        return FpMatrix::zero(dim, 0);
    }
    let m = FpMatrix::from_columns(dim, vecs.clone()).transpose();
    let (r, pivots) = m.rref(ctx);
    let _ = pivots;
    let mut basis = Vec::new();
    for i in 0..r.rows {
        if r.row(i).iter().any(|&v| v != 0) {
            basis.push(r.row(i).to_vec());
        }
    }
    FpMatrix::from_columns(dim, basis)
}
