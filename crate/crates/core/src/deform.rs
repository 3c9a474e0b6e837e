//! First-order deformation machinery: equisingular tangent spaces, normal
//! spaces of the canonical model, lifting the resolution to first order in
//! the thirty deformation parameters, extraction and factorization of the
//! 5k x 5k matrix M, and the differential-rank computations.
//!
//! The linear algebra is carried dense: a first-order object in the
//! parameters b_0..b_29 is stored as thirty base-field coordinate blocks,
//! batched into single eliminations per lifting stage.

use crate::canon::{scroll_chain_map, CanonicalCurve, ScrollData};
use crate::fp::FpCtx;
use crate::homalg::{linear_strand, LinearStrand, QuotientSlice};
use crate::matrix::FpMatrix;
use crate::plane::{PlaneModel, PlanePoint};
use crate::poly::{Coeff, DegreeBasis, GradedPoly, Mono, PolyRing, Term};
use serde::{Deserialize, Serialize};

pub const NPARAMS: usize = 30;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DeformError {
    Dimension { what: &'static str, expected: usize, got: usize },
    Inconsistent { stage: &'static str },
    NotFactorable { reason: String },
}

impl std::fmt::Display for DeformError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DeformError::Dimension { what, expected, got } => {
                write!(f, "{what}: expected {expected}, got {got}")
            }
            DeformError::Inconsistent { stage } => write!(f, "inconsistent solve at {stage}"),
            DeformError::NotFactorable { reason } => write!(f, "factorization failed: {reason}"),
        }
    }
}

impl std::error::Error for DeformError {}

// ---------------------------------------------------------------------
// Severi-type tangent spaces
// ---------------------------------------------------------------------

/// Tangent space report for the family of plane curves with prescribed
/// ordinary singular points (and marked passage points), linearized at the
/// model: unknowns are the non-normalized coefficients and the coordinates
/// of the singular points.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SeveriTangentReport {
    pub k: usize,
    pub m: usize,
    pub unknowns: usize,
    pub conditions: usize,
    pub rank: usize,
    pub kernel_dim: usize,
    pub kernel: FpMatrix,
}

/// Assembles and solves the linearized equisingularity system. The curve
/// coefficient of `x^d` is normalized away; each singular point of
/// multiplicity m contributes the vanishing of all mixed partials of order
/// below m, differentiated in the coefficients and in its own coordinates;
/// each marked passage point contributes its evaluation row in the
/// coefficients alone.
pub fn severi_tangent(model: &PlaneModel) -> Result<SeveriTangentReport, DeformError> {
    let ctx = FpCtx::new(model.prime);
    let ring = PolyRing::plane(ctx);
    let d = model.degree;
    let db = DegreeBasis::new(&ring, d);
    let xd = Mono::from_exps(&[d, 0, 0]);
    let xd_pos = db.index_of(&xd).unwrap();
    let coords = db.coords(&model.form);
    if coords[xd_pos] == 0 {
        return Err(DeformError::NotFactorable {
            reason: "model not in the normalizable affine chart".into(),
        });
    }
    let f = model.form.scale(&ring, ctx.inv(coords[xd_pos]));
    let coef_positions: Vec<usize> = (0..db.len()).filter(|&i| i != xd_pos).collect();
    let n_coef = coef_positions.len();
    let n_pts = model.specs.len();
    let unknowns = n_coef + 2 * n_pts;
    let mut rows: Vec<Vec<u64>> = Vec::new();
    for (alpha, spec) in model.specs.iter().enumerate() {
        assert!(spec.point.is_affine());
        let pt = &spec.point.coords;
        for s in 0..spec.multiplicity {
            for t in 0..=s {
                let mut row = vec![0u64; unknowns];
                for (ci, &pos) in coef_positions.iter().enumerate() {
                    let mono = ring.monomial(db.monos[pos], Coeff::from_base(1));
                    row[ci] = mono.partial_derivative(&ring, &[t, s - t, 0]).evaluate(&ring, pt).base;
                }
                row[n_coef + 2 * alpha] =
                    f.partial_derivative(&ring, &[t + 1, s - t, 0]).evaluate(&ring, pt).base;
                row[n_coef + 2 * alpha + 1] =
                    f.partial_derivative(&ring, &[t, s - t + 1, 0]).evaluate(&ring, pt).base;
                rows.push(row);
            }
        }
    }
    for r in &model.extra_points {
        assert!(r.is_affine());
        let mut row = vec![0u64; unknowns];
        for (ci, &pos) in coef_positions.iter().enumerate() {
            let mono = ring.monomial(db.monos[pos], Coeff::from_base(1));
            row[ci] = mono.evaluate(&ring, &r.coords).base;
        }
        rows.push(row);
    }
    let mat = FpMatrix::from_rows(rows);
    let conditions = mat.rows;
    let rank = mat.rank(&ctx);
    let kernel = mat.kernel_basis(&ctx);
    Ok(SeveriTangentReport {
        k: model.k,
        m: model.extra_points.len(),
        unknowns,
        conditions,
        rank,
        kernel_dim: kernel.cols,
        kernel,
    })
}

// ---------------------------------------------------------------------
// Normal space of the canonical model
// ---------------------------------------------------------------------

/// Degree-zero normal space data: the 150-dimensional space of sections,
/// its 120-dimensional subspace of coordinate-change deformations, and a
/// chosen 30-column complement T presenting H^1(T_C).
pub struct KodairaSpencerData {
    /// ambient coordinates: 36 blocks of (S/I)_2 coordinates (36 * 30)
    pub normal_basis: FpMatrix,
    pub trivial_basis: FpMatrix,
    /// complement columns (inside the normal basis), dimension 30
    pub complement: FpMatrix,
    /// T as 30 columns of 36 quadric representatives
    pub t_quadrics: Vec<Vec<GradedPoly>>,
    pub q2: QuotientSlice,
    pub q3: QuotientSlice,
}

/// Sections of the normal sheaf in degree zero: 36-tuples h of elements of
/// (S/I)_2 annihilated by all 160 linear syzygies in (S/I)_3. Expects the
/// dimension chain 150 = 120 + 30.
pub fn normal_space(
    curve: &CanonicalCurve,
    strand: &LinearStrand,
) -> Result<KodairaSpencerData, DeformError> {
    let ring = &curve.ring;
    let ctx = &ring.ctx;
    let n = ring.nvars();
    let q2 = QuotientSlice::new(ring, &curve.quadrics, 2);
    let q3 = QuotientSlice::new(ring, &curve.quadrics, 3);
    let (d2, d3) = (q2.dim(), q3.dim());
    if d2 != 30 || d3 != 50 {
        return Err(DeformError::Dimension { what: "quotient slices", expected: 30, got: d2 });
    }
    let mults: Vec<FpMatrix> = (0..n).map(|v| q2.mult_by_var(ring, &q3, v)).collect();
    let syz = &strand.kernels[0]; // (36*n) x 160
    let nsyz = syz.cols;
    let ngens = curve.quadrics.len();
    let mut cond = FpMatrix::zero(nsyz * d3, ngens * d2);
    for c in 0..nsyz {
        for i in 0..ngens {
            for v in 0..n {
                let coef = syz.at(i * n + v, c);
                if coef == 0 {
                    continue;
                }
                let m = &mults[v];
                for r in 0..d3 {
                    for s in 0..d2 {
                        let val = m.at(r, s);
                        if val == 0 {
                            continue;
                        }
                        let row = c * d3 + r;
                        let col = i * d2 + s;
                        let cur = cond.at(row, col);
                        cond.set(row, col, ctx.mul_add(cur, coef, val));
                    }
                }
            }
        }
    }
    let normal_basis = cond.kernel_basis(ctx);
    if normal_basis.cols != 150 {
        return Err(DeformError::Dimension {
            what: "h0 of the normal sheaf",
            expected: 150,
            got: normal_basis.cols,
        });
    }
    // coordinate-change sections: x_j -> x_j + eps x_v
    let mut triv_cols: Vec<Vec<u64>> = Vec::new();
    for j in 0..n {
        let partials: Vec<GradedPoly> = curve
            .quadrics
            .iter()
            .map(|f| f.partial_derivative(ring, &unit_orders(n, j)))
            .collect();
        for v in 0..n {
            let mut col = vec![0u64; ngens * d2];
            for (i, df) in partials.iter().enumerate() {
                let prod = df.mul_term(ring, &Mono::var(v), &Coeff::from_base(1));
                let red = q2.reduce_poly(ring, &prod);
                col[i * d2..(i + 1) * d2].copy_from_slice(&red);
            }
            triv_cols.push(col);
        }
    }
    let trivial_basis = crate::matrix::column_space_basis(ctx, ngens * d2, triv_cols);
    if trivial_basis.cols != 120 {
        return Err(DeformError::Dimension {
            what: "coordinate-change subspace",
            expected: 120,
            got: trivial_basis.cols,
        });
    }
    // the trivial sections satisfy the syzygy conditions
    if !cond.mul(ctx, &trivial_basis).is_zero() {
        return Err(DeformError::Inconsistent { stage: "trivial sections" });
    }
    // complement: extend the trivial basis by normal-basis columns
    let stacked = trivial_basis.hstack(&normal_basis);
    let (_, pivots) = stacked.rref(ctx);
    let comp_cols: Vec<Vec<u64>> = pivots
        .iter()
        .filter(|&&p| p >= trivial_basis.cols)
        .map(|&p| normal_basis.column(p - trivial_basis.cols))
        .collect();
    if comp_cols.len() != NPARAMS {
        return Err(DeformError::Dimension {
            what: "h1 of the tangent sheaf",
            expected: NPARAMS,
            got: comp_cols.len(),
        });
    }
    let complement = FpMatrix::from_columns(ngens * d2, comp_cols);
    let mut t_quadrics = Vec::with_capacity(NPARAMS);
    for u in 0..NPARAMS {
        let col = complement.column(u);
        let mut tu = Vec::with_capacity(ngens);
        for i in 0..ngens {
            tu.push(q2.lift(ring, &col[i * d2..(i + 1) * d2]));
        }
        t_quadrics.push(tu);
    }
    Ok(KodairaSpencerData { normal_basis, trivial_basis, complement, t_quadrics, q2, q3 })
}

fn unit_orders(n: usize, j: usize) -> Vec<u32> {
    let mut v = vec![0u32; n];
    v[j] = 1;
    v
}

// ---------------------------------------------------------------------
// Lifting the resolution to first order
// ---------------------------------------------------------------------

/// First-order data of the deformed resolution: the perturbations of the
/// strand differentials and the extracted matrix M, stored as its thirty
/// coordinate blocks (M vanishes at b = 0 by construction).
pub struct DeformedResolution {
    pub k: usize,
    /// m_parts[u] is the 5k x 5k block of the first-order part of the
    /// position-5 differential along parameter u.
    pub m_parts: Vec<FpMatrix>,
    pub checks: Vec<(String, bool)>,
}

/// Applies a strand differential (kernel layout, shape (rows*n) x cols) to
/// a block of linear-form columns, producing quadratic-form columns: the
/// entries of the product of polynomial matrices, as dense coordinates.
fn contract_stage(
    ctx: &FpCtx,
    n: usize,
    d2basis: &DegreeBasis,
    first_order: &FpMatrix, // (rows*n) x (cols*NPARAMS): linear forms per (col, param)
    rows: usize,
    kernel_next: &FpMatrix, // (cols*n) x next_cols
) -> FpMatrix {
    // output: (rows * dim S_2) x (next_cols * NPARAMS)
    let next_cols = kernel_next.cols;
    let cols = kernel_next.rows / n;
    assert_eq!(first_order.cols, cols * NPARAMS);
    assert_eq!(first_order.rows, rows * n);
    // reshape to per-parameter matrices and multiply:
    // A_u: (rows*n) x cols; B: cols x (n * next_cols) from kernel_next
    let mut b = FpMatrix::zero(cols, n * next_cols);
    for c in 0..cols {
        for w in 0..n {
            for j in 0..next_cols {
                b.set(c, w * next_cols + j, kernel_next.at(c * n + w, j));
            }
        }
    }
    let d2len = d2basis.len();
    let mut out = FpMatrix::zero(rows * d2len, next_cols * NPARAMS);
    for u in 0..NPARAMS {
        // A_u: (rows*n) x cols slice of first_order
        let mut a = FpMatrix::zero(rows * n, cols);
        for rv in 0..rows * n {
            for c in 0..cols {
                a.set(rv, c, first_order.at(rv, c * NPARAMS + u));
            }
        }
        let prod = a.mul(ctx, &b); // (rows*n) x (n*next_cols)
        // fold (v, w) into quadratic monomials
        for r in 0..rows {
            for v in 0..n {
                for w in 0..n {
                    let mono = Mono::var(v).mul(&Mono::var(w));
                    let mrow = r * d2len + d2basis.index_of(&mono).unwrap();
                    for j in 0..next_cols {
                        let val = prod.at(r * n + v, w * next_cols + j);
                        if val == 0 {
                            continue;
                        }
                        let ocol = j * NPARAMS + u;
                        let cur = out.at(mrow, ocol);
                        out.set(mrow, ocol, ctx.add(cur, val));
                    }
                }
            }
        }
    }
    out
}

/// Solves `lhs * X = rhs` in one augmented elimination; checks consistency.
fn stage_solve(
    ctx: &FpCtx,
    lhs: &FpMatrix,
    rhs: &FpMatrix,
    stage: &'static str,
) -> Result<FpMatrix, DeformError> {
    match lhs.solve(ctx, rhs) {
        Ok(x) => Ok(x),
        Err(_) => Err(DeformError::Inconsistent { stage }),
    }
}

/// Lifts the strand differentials to first order along T and extracts M.
pub fn lift_resolution(
    curve: &CanonicalCurve,
    strand: &LinearStrand,
    ks: &KodairaSpencerData,
) -> Result<DeformedResolution, DeformError> {
    let ring = &curve.ring;
    let ctx = &ring.ctx;
    let n = ring.nvars();
    let mut checks: Vec<(String, bool)> = Vec::new();
    let five_k = strand.rank(5);
    let k = five_k / 5;
    assert_eq!(five_k % 5, 0, "strand tail not a multiple of five");

    let d2basis = DegreeBasis::new(ring, 2);
    let d3basis = DegreeBasis::new(ring, 3);

    // stage 2: f . d2' = -f' . d2
    let b1 = strand.rank(1);
    let b2 = strand.rank(2);
    let k2 = &strand.kernels[0];
    let mut rhs2 = FpMatrix::zero(d3basis.len(), b2 * NPARAMS);
    // shift tables: S_2 monomial index -> S_3 index under multiplication
    let shift: Vec<Vec<usize>> = (0..n)
        .map(|v| {
            d2basis
                .monos
                .iter()
                .map(|m| d3basis.index_of(&m.mul(&Mono::var(v))).unwrap())
                .collect()
        })
        .collect();
    let t_coords: Vec<Vec<Vec<u64>>> = ks
        .t_quadrics
        .iter()
        .map(|tu| tu.iter().map(|q| d2basis.coords(q)).collect())
        .collect();
    for c in 0..b2 {
        for i in 0..b1 {
            for v in 0..n {
                let coef = k2.at(i * n + v, c);
                if coef == 0 {
                    continue;
                }
                let neg = ctx.neg(coef);
                for (u, tc) in t_coords.iter().enumerate() {
                    let col = c * NPARAMS + u;
                    for (mi, &val) in tc[i].iter().enumerate() {
                        if val == 0 {
                            continue;
                        }
                        let row = shift[v][mi];
                        let cur = rhs2.at(row, col);
                        rhs2.set(row, col, ctx.mul_add(cur, neg, val));
                    }
                }
            }
        }
    }
    let p2 = crate::homalg::promote_quadrics(ring, &strand.quadrics);
    let x2 = stage_solve(ctx, &p2, &rhs2, "position 2")?;
    checks.push(("position-2 lift consistent".into(), true));

    // stage 3: d2 . d3' = -d2' . d3
    let b3 = strand.rank(3);
    let rhs3 = {
        let c = contract_stage(ctx, n, &d2basis, &x2, b1, &strand.kernels[1]);
        negate(ctx, c)
    };
    let p3 = crate::homalg::promote_linear(ring, &strand.kernels[0], b1);
    let x3 = stage_solve(ctx, &p3, &rhs3, "position 3")?;
    checks.push(("position-3 lift consistent".into(), true));

    // stage 4: d3 . d4' = -d3' . d4
    let b4 = strand.rank(4);
    let rhs4 = {
        let c = contract_stage(ctx, n, &d2basis, &x3, b2, &strand.kernels[2]);
        negate(ctx, c)
    };
    let p4 = crate::homalg::promote_linear(ring, &strand.kernels[1], b2);
    let x4 = stage_solve(ctx, &p4, &rhs4, "position 4")?;
    assert_eq!(x4.cols, b4 * NPARAMS);
    checks.push(("position-4 lift consistent".into(), true));

    // stage 5: d4 . d5' = -d4' . d5 is obstructed; the residuals are M
    let rhs5 = {
        let c = contract_stage(ctx, n, &d2basis, &x4, b3, &strand.kernels[3]);
        negate(ctx, c)
    };
    let p5 = crate::homalg::promote_linear(ring, &strand.kernels[2], b3);
    // partial solve: pivot solution ignoring the obstructed rows
    let x5 = p5.solve_projected(ctx, &rhs5);
    // residuals rho = rhs5 - p5 * x5, computed matrix-free through the
    // strand structure
    let rho = {
        let mut prod = apply_promoted(ctx, n, &d2basis, &strand.kernels[2], b3, &x5);
        for (a, &b) in prod.data.iter_mut().zip(rhs5.data.iter()) {
            *a = ctx.sub(b, *a);
        }
        prod
    };
    // exactness certificate: every residual column is killed by the
    // previous strand differential
    let d3rho = apply_strand_matrix(ctx, n, &d2basis, &d3basis, &strand.kernels[1], b2, &rho, b3);
    checks.push(("residuals lie in the kernel of the previous differential".into(), d3rho.is_zero()));
    // the residual span is the obstruction space of dimension 5k
    let rho_cols: Vec<Vec<u64>> = (0..rho.cols).map(|j| rho.column(j)).collect();
    let basis = crate::matrix::column_space_basis(ctx, rho.rows, rho_cols);
    if basis.cols != five_k {
        return Err(DeformError::Dimension {
            what: "obstruction space",
            expected: five_k,
            got: basis.cols,
        });
    }
    checks.push((format!("obstruction space has rank 5k = {five_k}"), true));
    let coords = basis.solve(ctx, &rho).map_err(|_| DeformError::Inconsistent {
        stage: "obstruction coordinates",
    })?;
    // M parts: m_parts[u][r][j] = coords[(j, u)][r]
    let mut m_parts = vec![FpMatrix::zero(five_k, five_k); NPARAMS];
    for j in 0..five_k {
        for u in 0..NPARAMS {
            for r in 0..five_k {
                m_parts[u].set(r, j, coords.at(r, j * NPARAMS + u));
            }
        }
    }
    Ok(DeformedResolution { k, m_parts, checks })
}

fn negate(ctx: &FpCtx, mut m: FpMatrix) -> FpMatrix {
    for v in m.data.iter_mut() {
        *v = ctx.neg(*v % ctx.prime());
    }
    m
}

/// Applies the degree-promotion of a strand differential to dense columns
/// of `(S_1)^cols` coordinates, producing `(S_2)^rows` coordinates.
fn apply_promoted(
    ctx: &FpCtx,
    n: usize,
    d2basis: &DegreeBasis,
    kernel: &FpMatrix, // (rows*n) x cols
    rows: usize,
    x: &FpMatrix, // (cols*n) x width
) -> FpMatrix {
    let cols = kernel.cols;
    assert_eq!(x.rows, cols * n);
    let d2len = d2basis.len();
    let mut out = FpMatrix::zero(rows * d2len, x.cols);
    for c in 0..cols {
        for v in 0..n {
            // the (r, v) coefficients of column c
            for r in 0..rows {
                let coef = kernel.at(r * n + v, c);
                if coef == 0 {
                    continue;
                }
                for w in 0..n {
                    let mono = Mono::var(v).mul(&Mono::var(w));
                    let orow = r * d2len + d2basis.index_of(&mono).unwrap();
                    for j in 0..x.cols {
                        let xv = x.at(c * n + w, j);
                        if xv == 0 {
                            continue;
                        }
                        let cur = out.at(orow, j);
                        out.set(orow, j, ctx.mul_add(cur, coef, xv));
                    }
                }
            }
        }
    }
    out
}

/// Applies a strand differential to quadratic-coordinate columns,
/// producing cubic coordinates: certifies kernel membership of residuals.
fn apply_strand_matrix(
    ctx: &FpCtx,
    n: usize,
    d2basis: &DegreeBasis,
    d3basis: &DegreeBasis,
    kernel: &FpMatrix, // (rows*n) x mid
    rows: usize,
    x: &FpMatrix, // (mid * dim S_2) x width
    mid: usize,
) -> FpMatrix {
    let d2basis_len = x.rows / mid;
    let d2monos = &d2basis.monos;
    assert_eq!(d2monos.len(), d2basis_len);
    let mut out = FpMatrix::zero(rows * d3basis.len(), x.cols);
    for c in 0..mid {
        for v in 0..n {
            for r in 0..rows {
                let coef = kernel.at(r * n + v, c);
                if coef == 0 {
                    continue;
                }
                for (mi, m2) in d2monos.iter().enumerate() {
                    let mono = m2.mul(&Mono::var(v));
                    let orow = r * d3basis.len() + d3basis.index_of(&mono).unwrap();
                    for j in 0..x.cols {
                        let xv = x.at(c * d2basis_len + mi, j);
                        if xv == 0 {
                            continue;
                        }
                        let cur = out.at(orow, j);
                        out.set(orow, j, ctx.mul_add(cur, coef, xv));
                    }
                }
            }
        }
    }
    out
}

// ---------------------------------------------------------------------
// Factorization of M
// ---------------------------------------------------------------------

/// Outcome of the block factorization `det M = unit * l_1^5 ... l_k^5`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Factorization {
    pub k: usize,
    /// linear forms in the parameters, k rows of 30 coefficients,
    /// normalized monic in parameter order
    pub forms: Vec<Vec<u64>>,
    /// dimension of the span of the forms
    pub span_dim: usize,
    /// the constant unit in det M = unit * prod l_i^5 (None when only part
    /// of the pencils are available)
    pub unit: Option<u64>,
    pub checks: Vec<(String, bool)>,
}

/// Extracts the linear forms from M and the scroll chain maps, verifies
/// the block structure `M V_i = l_i C_i`, the kernel ranks `W_i`, and the
/// determinant identity by random evaluation.
pub fn factor_m(
    curve: &CanonicalCurve,
    strand: &LinearStrand,
    dr: &DeformedResolution,
    scrolls: &[ScrollData],
) -> Result<Factorization, DeformError> {
    let ctx = &curve.ring.ctx;
    let five_k = dr.m_parts[0].rows;
    let k_total = dr.k;
    let full = scrolls.len() == k_total;
    let mut checks: Vec<(String, bool)> = Vec::new();

    // chain maps V_i: 5k x 5 constant matrices
    let vs: Vec<FpMatrix> = scrolls
        .iter()
        .map(|s| scroll_chain_map(curve, strand, s).pop().expect("chain map through position 5"))
        .collect();
    for v in &vs {
        assert_eq!(v.rows, five_k);
        assert_eq!(v.cols, 5);
    }

    // MV_i = l_i * C_i
    let mut forms: Vec<Vec<u64>> = Vec::new();
    let mut cs: Vec<FpMatrix> = Vec::new();
    for (i, v) in vs.iter().enumerate() {
        let mv: Vec<FpMatrix> = dr.m_parts.iter().map(|mu| mu.mul(ctx, v)).collect();
        // entry (r, c) is the parameter vector (mv[u])_{u}
        let mut ell: Option<Vec<u64>> = None;
        let mut c_mat = FpMatrix::zero(five_k, 5);
        for r in 0..five_k {
            for c in 0..5 {
                let vec: Vec<u64> = (0..NPARAMS).map(|u| mv[u].at(r, c)).collect();
                if vec.iter().all(|&x| x == 0) {
                    continue;
                }
                match &ell {
                    None => {
                        // normalize monic at the first nonzero parameter
                        let lead = vec.iter().position(|&x| x != 0).unwrap();
                        let inv = ctx.inv(vec[lead]);
                        let norm: Vec<u64> = vec.iter().map(|&x| ctx.mul(x, inv)).collect();
                        c_mat.set(r, c, vec[lead]);
                        ell = Some(norm);
                    }
                    Some(l) => {
                        // vec must be a scalar multiple of l
                        let lead = l.iter().position(|&x| x != 0).unwrap();
                        let lambda = vec[lead];
                        let ok = (0..NPARAMS).all(|u| vec[u] == ctx.mul(lambda, l[u]));
                        if !ok {
                            return Err(DeformError::NotFactorable {
                                reason: format!("pencil {i}: M V_i is not rank one in the parameters"),
                            });
                        }
                        c_mat.set(r, c, lambda);
                    }
                }
            }
        }
        let Some(l) = ell else {
            return Err(DeformError::NotFactorable { reason: format!("pencil {i}: M V_i = 0") });
        };
        if c_mat.rank(ctx) != 5 {
            return Err(DeformError::NotFactorable {
                reason: format!("pencil {i}: constant factor not of rank 5"),
            });
        }
        forms.push(l);
        cs.push(c_mat);
    }
    checks.push(("every M V_i factors as l_i times a rank-5 constant matrix".into(), true));

    let form_mat = FpMatrix::from_rows(forms.clone());
    let span_dim = form_mat.rank(ctx);

    let mut unit = None;
    if full {
        // V = [V_1 | ... | V_k] and C = [C_1 | ... | C_k] invertible
        let mut v_all = vs[0].clone();
        let mut c_all = cs[0].clone();
        for i in 1..k_total {
            v_all = v_all.hstack(&vs[i]);
            c_all = c_all.hstack(&cs[i]);
        }
        let det_v = determinant(ctx, &v_all);
        let det_c = determinant(ctx, &c_all);
        checks.push(("V invertible".into(), det_v != 0));
        checks.push(("C invertible".into(), det_c != 0));
        if det_v == 0 || det_c == 0 {
            return Err(DeformError::NotFactorable { reason: "V or C degenerate".into() });
        }
        let u = ctx.div(det_c, det_v);
        unit = Some(u);
        // kernel modules W_i = left kernels of C_i, rank 5(k-1)
        let ws: Vec<FpMatrix> = cs.iter().map(|c| c.transpose().kernel_basis(ctx)).collect();
        let w_ok = ws.iter().all(|w| w.cols == 5 * (k_total - 1));
        checks.push((format!("rank W_i = 5(k-1) = {}", 5 * (k_total - 1)), w_ok));
        // W-bar_j = intersection of the others, rank 5; P = their sum
        let mut p_all: Option<FpMatrix> = None;
        let mut wbar_ok = true;
        let mut wbars: Vec<FpMatrix> = Vec::new();
        for j in 0..k_total {
            let mut acc: Option<FpMatrix> = None;
            for (i, w) in ws.iter().enumerate() {
                if i == j {
                    continue;
                }
                acc = Some(match acc {
                    None => w.clone(),
                    Some(a) => a.intersect_spans(ctx, w),
                });
            }
            let wbar = acc.unwrap();
            wbar_ok &= wbar.cols == 5;
            p_all = Some(match p_all {
                None => wbar.clone(),
                Some(p) => p.hstack(&wbar),
            });
            wbars.push(wbar);
        }
        checks.push(("rank of every W-bar_j is 5".into(), wbar_ok));
        let p_all = p_all.unwrap();
        let det_p = determinant(ctx, &p_all);
        checks.push(("P invertible".into(), det_p != 0));
        // block diagonalization: P^t M V must be block diagonal with
        // blocks l_j A_j, A_j = W-bar_j^t C_j
        let pt = p_all.transpose();
        let mut block_ok = true;
        let a_mats: Vec<FpMatrix> =
            wbars.iter().enumerate().map(|(j, w)| w.transpose().mul(ctx, &cs[j])).collect();
        let mut det_a_prod = 1u64;
        for a_j in &a_mats {
            det_a_prod = ctx.mul(det_a_prod, determinant(ctx, a_j));
        }
        for u_idx in 0..NPARAMS {
            let pmv = pt.mul(ctx, &dr.m_parts[u_idx]).mul(ctx, &v_all);
            for bj in 0..k_total {
                for bi in 0..k_total {
                    for r in 0..5 {
                        for c in 0..5 {
                            let val = pmv.at(bi * 5 + r, bj * 5 + c);
                            let expect = if bi != bj {
                                0
                            } else {
                                // l_j[u] * A_j[r][c]
                                ctx.mul(forms[bj][u_idx], a_mats[bj].at(r, c))
                            };
                            block_ok &= val == expect;
                        }
                    }
                }
            }
        }
        checks.push(("P^t M V is block diagonal with blocks l_j A_j".into(), block_ok));
        // determinant identity det(P) det(C) = prod det(A_j)
        let lhs = ctx.mul(det_p, det_c);
        checks.push(("det P * det C = prod det A_j".into(), lhs == det_a_prod));
        // random-evaluation check of det M = unit * prod l_i^5
        let mut rng = crate::rng::Rng::new(0x5eed);
        let mut eval_ok = true;
        for _ in 0..5 {
            let b: Vec<u64> = (0..NPARAMS).map(|_| rng.fp(ctx.prime())).collect();
            let mut mb = FpMatrix::zero(five_k, five_k);
            for (u_idx, part) in dr.m_parts.iter().enumerate() {
                for (d, &s) in mb.data.iter_mut().zip(part.data.iter()) {
                    *d = ctx.mul_add(*d, b[u_idx], s);
                }
            }
            let det_m = determinant(ctx, &mb);
            let mut expect = u;
            for l in &forms {
                let lv = l
                    .iter()
                    .enumerate()
                    .fold(0u64, |acc, (u_idx, &c)| ctx.mul_add(acc, c, b[u_idx]));
                expect = ctx.mul(expect, ctx.pow(lv, 5));
            }
            eval_ok &= det_m == expect;
        }
        checks.push(("det M(b) = unit * prod l_i(b)^5 at random parameters".into(), eval_ok));
        if !(block_ok && eval_ok && w_ok && wbar_ok && lhs == det_a_prod) {
            return Err(DeformError::NotFactorable { reason: "structure checks failed".into() });
        }
    }
    Ok(Factorization { k: k_total, forms, span_dim, unit, checks })
}

/// Determinant by plain Gaussian elimination (small matrices).
pub fn determinant(ctx: &FpCtx, m: &FpMatrix) -> u64 {
    assert_eq!(m.rows, m.cols);
    let n = m.rows;
    let mut a: Vec<Vec<u64>> = (0..n).map(|i| m.row(i).to_vec()).collect();
    let mut det = 1u64;
    for col in 0..n {
        let Some(sel) = (col..n).find(|&i| a[i][col] != 0) else { return 0 };
        if sel != col {
            a.swap(sel, col);
            det = ctx.neg(det);
        }
        det = ctx.mul(det, a[col][col]);
        let inv = ctx.inv(a[col][col]);
        for i in (col + 1)..n {
            if a[i][col] == 0 {
                continue;
            }
            let f = ctx.mul(a[i][col], inv);
            for j in col..n {
                let t = ctx.mul(f, a[col][j]);
                a[i][j] = ctx.sub(a[i][j], t);
            }
        }
    }
    det
}

// ---------------------------------------------------------------------
// Differential of the plane-family-to-moduli map
// ---------------------------------------------------------------------

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DifferentialRankReport {
    pub tangent_dim: usize,
    /// dimension of image(d psi) meet image(H0(T_P10 restricted)), the
    /// plane-automorphism directions
    pub intersection_dim: usize,
    /// rank of the composite to H^1(T_C)
    pub rank: usize,
    /// the eight infinitesimal plane automorphisms land inside the
    /// intersection and span it
    pub pgl_span_matches: bool,
}

/// Pushes every equisingular tangent vector through the construction over
/// dual numbers: perturbs coefficients and points to first order,
/// recomputes the adjoint basis and the canonical generators to first
/// order, and reads the image in the degree-two normal space.
pub fn differential_rank(
    model: &PlaneModel,
    curve: &CanonicalCurve,
    ks: &KodairaSpencerData,
    severi: &SeveriTangentReport,
) -> Result<DifferentialRankReport, DeformError> {
    let ctx = FpCtx::new(model.prime);
    let plane_ring = PolyRing::plane(ctx);
    let d = model.degree;
    let db = DegreeBasis::new(&plane_ring, d);
    let xd_pos = db.index_of(&Mono::from_exps(&[d, 0, 0])).unwrap();
    let base_coords = db.coords(&model.form);
    let f_monic = model.form.scale(&plane_ring, ctx.inv(base_coords[xd_pos]));
    let coef_positions: Vec<usize> = (0..db.len()).filter(|&i| i != xd_pos).collect();
    let n_coef = coef_positions.len();

    let push = DualPush::new(&plane_ring, curve)?;

    let mut images: Vec<Vec<u64>> = Vec::new();
    for t in 0..severi.kernel.cols {
        let tau = severi.kernel.column(t);
        let v = push.image_of(&plane_ring, curve, ks, &coef_positions, &db, &tau, n_coef)?;
        images.push(v);
    }
    let dim = curve.quadrics.len() * ks.q2.dim();
    let image_mat = FpMatrix::from_columns(dim, images.clone());
    // containment in the 150-dimensional normal space
    if ks.normal_basis.solve(&ctx, &image_mat).is_err() {
        return Err(DeformError::Inconsistent { stage: "image outside the normal space" });
    }
    let inter = image_mat.intersect_spans(&ctx, &ks.trivial_basis);
    let intersection_dim = inter.cols;
    // composite to H^1: coordinates over [trivial | T], keep the T block
    let basis_ext = ks.trivial_basis.hstack(&ks.complement);
    let in_coords = basis_ext
        .solve(&ctx, &image_mat)
        .map_err(|_| DeformError::Inconsistent { stage: "coordinates in trivial+T" })?;
    let mut h1_block = FpMatrix::zero(NPARAMS, image_mat.cols);
    for r in 0..NPARAMS {
        for c in 0..image_mat.cols {
            h1_block.set(r, c, in_coords.at(ks.trivial_basis.cols + r, c));
        }
    }
    let rank = h1_block.rank(&ctx);

    // the eight infinitesimal plane automorphisms, pushed through the same
    // pipeline, must land in (and span) the intersection
    let mut pgl_images: Vec<Vec<u64>> = Vec::new();
    for e in gl3_basis() {
        let tau = automorphism_tangent(&plane_ring, model, &f_monic, &db, &coef_positions, &e);
        // infinitesimal automorphisms are equisingular: they must lie in
        // the computed tangent space
        let tmat = FpMatrix::from_columns(tau.len(), vec![tau.clone()]);
        if severi.kernel.solve(&ctx, &tmat).is_err() {
            return Err(DeformError::Inconsistent { stage: "automorphism outside tangent space" });
        }
        let v = push.image_of(&plane_ring, curve, ks, &coef_positions, &db, &tau, n_coef)?;
        pgl_images.push(v);
    }
    let pgl_mat = FpMatrix::from_columns(dim, pgl_images);
    let pgl_span = pgl_mat.column_basis(&ctx);
    let contained = ks.trivial_basis.solve(&ctx, &pgl_span).is_ok();
    let pgl_span_matches = contained
        && pgl_span.cols == intersection_dim
        && pgl_span.solve(&ctx, &inter).is_ok();

    Ok(DifferentialRankReport {
        tangent_dim: severi.kernel.cols,
        intersection_dim,
        rank,
        pgl_span_matches,
    })
}

/// Precomputed base data for pushing tangent vectors through the adjoint
/// and quadric interpolations over dual numbers. Rebuilds exactly the same
/// matrices the canonical construction used, so the perturbed kernels stay
/// attached to the same base generators.
struct DualPush {
    /// adjoint condition matrix and its kernel (the adjoint coordinates)
    adj_matrix: FpMatrix,
    adj_kernel: FpMatrix,
    interp: crate::canon::QuadricInterpolation,
    adj_db: DegreeBasis,
    /// the x^d coefficient of the model form: the tangent chart is monic,
    /// so the unnormalized form moves by c0 * delta F
    c0: u64,
}

impl DualPush {
    fn new(plane_ring: &PolyRing, curve: &CanonicalCurve) -> Result<DualPush, DeformError> {
        let ctx = &plane_ring.ctx;
        let model = &curve.model;
        let deg_adj = model.degree - 3;
        let adj_db = DegreeBasis::new(plane_ring, deg_adj);
        // adjoint conditions: multiplicity m-1 at every singular point
        let specs: Vec<(PlanePoint, u32)> = model
            .specs
            .iter()
            .filter(|s| s.multiplicity >= 3)
            .map(|s| (s.point, s.multiplicity - 1))
            .collect();
        let simple: Vec<PlanePoint> = model
            .specs
            .iter()
            .filter(|s| s.multiplicity == 2)
            .map(|s| s.point)
            .collect();
        let adj_matrix = crate::plane::condition_matrix(plane_ring, deg_adj, &specs, &simple);
        let adj_kernel = adj_matrix.kernel_basis(ctx);
        if adj_kernel.cols != 11 {
            return Err(DeformError::Dimension {
                what: "adjoint system",
                expected: 11,
                got: adj_kernel.cols,
            });
        }
        let adjoints: Vec<GradedPoly> =
            (0..11).map(|j| adj_db.from_coords(plane_ring, &adj_kernel.column(j))).collect();
        assert_eq!(adjoints, curve.adjoints, "adjoint basis drifted");
        let interp =
            crate::canon::quadric_interpolation(plane_ring, &curve.ring, model, &curve.adjoints);
        assert_eq!(
            interp.quadrics(&curve.ring),
            curve.quadrics,
            "interpolation kernel drifted"
        );
        let d = model.degree;
        let db = DegreeBasis::new(plane_ring, d);
        let c0 = db.coords(&model.form)[db.index_of(&Mono::from_exps(&[d, 0, 0])).unwrap()];
        Ok(DualPush { adj_matrix, adj_kernel, interp, adj_db, c0 })
    }

    /// Image in the degree-two normal space of one tangent vector.
    #[allow(clippy::too_many_arguments)]
    fn image_of(
        &self,
        plane_ring: &PolyRing,
        curve: &CanonicalCurve,
        ks: &KodairaSpencerData,
        coef_positions: &[usize],
        db: &DegreeBasis,
        tau: &[u64],
        n_coef: usize,
    ) -> Result<Vec<u64>, DeformError> {
        let ctx = &plane_ring.ctx;
        let model = &curve.model;
        // delta F from the coefficient part
        let mut delta_coords = vec![0u64; db.len()];
        for (ci, &pos) in coef_positions.iter().enumerate() {
            delta_coords[pos] = tau[ci];
        }
        let delta_f = db.from_coords(plane_ring, &delta_coords);
        // first-order adjoint conditions from the moving points
        let deg_adj = model.degree - 3;
        let adj_prime = adjoint_condition_derivative(plane_ring, model, deg_adj, tau, n_coef);
        // K' solves A K' = -(A' K)
        let rhs = negate(ctx, adj_prime.mul(ctx, &self.adj_kernel));
        let kprime = self
            .adj_matrix
            .solve(ctx, &rhs)
            .map_err(|_| DeformError::Inconsistent { stage: "adjoint perturbation" })?;
        let adjoints: Vec<GradedPoly> = (0..11)
            .map(|j| self.adj_db.from_coords(plane_ring, &self.adj_kernel.column(j)))
            .collect();
        let adjoints_prime: Vec<GradedPoly> =
            (0..11).map(|j| self.adj_db.from_coords(plane_ring, &kprime.column(j))).collect();
        // B' columns: products and curve multiples, differentiated; the
        // tangent chart is monic, so the unnormalized curve moves by
        // c0 * delta F
        let canon = &curve.ring;
        let quad_monos = &self.interp.quad_monos;
        let prod_db = &self.interp.product_basis;
        let mut bprime_cols: Vec<Vec<u64>> = Vec::new();
        for m in quad_monos {
            let (i, j) = two_indices_of(m);
            let p1 = adjoints_prime[i].multiply(plane_ring, &adjoints[j]).unwrap();
            let p2 = adjoints[i].multiply(plane_ring, &adjoints_prime[j]).unwrap();
            bprime_cols.push(prod_db.coords(&p1.add(plane_ring, &p2)));
        }
        let delta_gamma = delta_f.scale(plane_ring, self.c0);
        for m in &self.interp.gamma_monos {
            bprime_cols
                .push(prod_db.coords(&delta_gamma.mul_term(plane_ring, m, &Coeff::from_base(1))));
        }
        let bprime = FpMatrix::from_columns(prod_db.len(), bprime_cols);
        // q' solves B q' = -(B' q) for each base kernel vector
        let rhs2 = negate(ctx, bprime.mul(ctx, &self.interp.kernel));
        let qprime = self
            .interp
            .matrix
            .solve(ctx, &rhs2)
            .map_err(|_| DeformError::Inconsistent { stage: "quadric perturbation" })?;
        // the quadric parts of q' are the normal vector components
        let mut out = vec![0u64; curve.quadrics.len() * ks.q2.dim()];
        for (qi, _) in curve.quadrics.iter().enumerate() {
            let col = qprime.column(qi);
            let terms: Vec<Term> = quad_monos
                .iter()
                .enumerate()
                .filter(|&(mi, _)| col[mi] != 0)
                .map(|(mi, m)| Term { mono: *m, coeff: Coeff::from_base(col[mi]) })
                .collect();
            let h = canon.from_terms(terms);
            let red = ks.q2.reduce_poly(canon, &h);
            out[qi * ks.q2.dim()..(qi + 1) * ks.q2.dim()].copy_from_slice(&red);
        }
        Ok(out)
    }
}

/// Derivative of the adjoint condition matrix along the moving singular
/// points of a tangent vector.
fn adjoint_condition_derivative(
    plane_ring: &PolyRing,
    model: &PlaneModel,
    deg_adj: u32,
    tau: &[u64],
    n_coef: usize,
) -> FpMatrix {
    let ctx = &plane_ring.ctx;
    let adj_db = DegreeBasis::new(plane_ring, deg_adj);
    let mut rows: Vec<Vec<u64>> = Vec::new();
    // ordering must match plane::condition_matrix: first the multiple
    // points (multiplicity m-1 >= 2), then the simple ones
    let mut ordered: Vec<(usize, u32)> = Vec::new();
    for (idx, s) in model.specs.iter().enumerate() {
        if s.multiplicity >= 3 {
            ordered.push((idx, s.multiplicity - 1));
        }
    }
    for (idx, s) in model.specs.iter().enumerate() {
        if s.multiplicity == 2 {
            ordered.push((idx, 1));
        }
    }
    for &(idx, mult) in &ordered {
        let pt = &model.specs[idx].point.coords;
        let dx = tau[n_coef + 2 * idx];
        let dy = tau[n_coef + 2 * idx + 1];
        for i in 0..mult {
            for j in 0..(mult - i) {
                let kk = mult - 1 - i - j;
                let mut row = vec![0u64; adj_db.len()];
                for (pos, mono) in adj_db.monos.iter().enumerate() {
                    let f = plane_ring.monomial(*mono, Coeff::from_base(1));
                    let base = f.partial_derivative(plane_ring, &[i, j, kk]);
                    let ddx = base.partial_derivative(plane_ring, &[1, 0, 0]).evaluate(plane_ring, pt).base;
                    let ddy = base.partial_derivative(plane_ring, &[0, 1, 0]).evaluate(plane_ring, pt).base;
                    row[pos] = ctx.add(ctx.mul(dx, ddx), ctx.mul(dy, ddy));
                }
                rows.push(row);
            }
        }
    }
    FpMatrix::from_rows(rows)
}

/// The nine matrices of gl(3) as generators of infinitesimal plane
/// automorphisms.
fn gl3_basis() -> Vec<[[u64; 3]; 3]> {
    let mut out = Vec::with_capacity(9);
    for a in 0..3 {
        for b in 0..3 {
            let mut e = [[0u64; 3]; 3];
            e[a][b] = 1;
            out.push(e);
        }
    }
    out
}

/// Equisingular tangent vector of the infinitesimal automorphism given by
/// a gl(3) matrix: the induced first-order motion of the coefficients
/// (renormalized into the monic chart) and of the singular points.
fn automorphism_tangent(
    plane_ring: &PolyRing,
    model: &PlaneModel,
    f_monic: &GradedPoly,
    db: &DegreeBasis,
    coef_positions: &[usize],
    e: &[[u64; 3]; 3],
) -> Vec<u64> {
    let ctx = &plane_ring.ctx;
    let d = model.degree;
    // the points flow by +E, so the curve moves by the inverse flow:
    // delta F = -sum_a (E x)_a dF/dx_a
    let mut delta = plane_ring.zero();
    for a in 0..3 {
        let mut lin = plane_ring.zero();
        for b in 0..3 {
            if e[a][b] != 0 {
                lin = lin.add(plane_ring, &plane_ring.var(b).scale(plane_ring, e[a][b]));
            }
        }
        if lin.is_zero() {
            continue;
        }
        let df = f_monic.partial_derivative(plane_ring, &unit_orders(3, a));
        delta = delta.sub(plane_ring, &df.multiply(plane_ring, &lin).unwrap());
    }
    // renormalize into the monic chart: subtract c * F where c is the x^d
    // coefficient of delta
    let xd_pos = db.index_of(&Mono::from_exps(&[d, 0, 0])).unwrap();
    let dc = db.coords(&delta);
    let delta = delta.sub(plane_ring, &f_monic.scale(plane_ring, dc[xd_pos]));
    let dcoords = db.coords(&delta);
    let n_coef = coef_positions.len();
    let mut tau = vec![0u64; n_coef + 2 * model.specs.len()];
    for (ci, &pos) in coef_positions.iter().enumerate() {
        tau[ci] = dcoords[pos];
    }
    // point motion: P + eps E P, affinized at z = 1
    for (idx, s) in model.specs.iter().enumerate() {
        let p = &s.point.coords;
        let ep: Vec<u64> = (0..3)
            .map(|a| {
                let mut acc = 0u64;
                for b in 0..3 {
                    acc = ctx.mul_add(acc, e[a][b], p[b]);
                }
                acc
            })
            .collect();
        // X = (EP)_x - x (EP)_z, Y = (EP)_y - y (EP)_z
        tau[n_coef + 2 * idx] = ctx.sub(ep[0], ctx.mul(p[0], ep[2]));
        tau[n_coef + 2 * idx + 1] = ctx.sub(ep[1], ctx.mul(p[1], ep[2]));
    }
    tau
}

fn two_indices_of(m: &Mono) -> (usize, usize) {
    let mut found = Vec::new();
    for (v, &e) in m.exp.iter().enumerate() {
        for _ in 0..e {
            found.push(v);
        }
    }
    assert_eq!(found.len(), 2);
    (found[0], found[1])
}

/// Builds the linear strand through position 5 and sanity-checks the
/// strand ranks (160, 315, 288, 5k).
pub fn strand_through_m(curve: &CanonicalCurve) -> Result<LinearStrand, DeformError> {
    let strand = linear_strand(&curve.ring, &curve.quadrics, 5);
    let expect = [160usize, 315, 288];
    for (i, &e) in expect.iter().enumerate() {
        let got = strand.rank(i + 2);
        if got != e {
            return Err(DeformError::Dimension { what: "strand rank", expected: e, got });
        }
    }
    let tail = strand.rank(5);
    if tail % 5 != 0 || tail == 0 {
        return Err(DeformError::Dimension { what: "strand tail", expected: 5, got: tail });
    }
    Ok(strand)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plane::random_model;

    #[test]
    fn severi_dimensions_for_m0() {
        let model = random_model(5, 12347, 42, 20).unwrap();
        let rep = severi_tangent(&model).unwrap();
        assert_eq!(rep.unknowns, 72);
        assert_eq!(rep.conditions, 39);
        assert_eq!(rep.kernel_dim, 33);
    }

    #[test]
    fn severi_dimensions_octic() {
        let model = random_model(10, 12347, 42, 20).unwrap();
        let rep = severi_tangent(&model).unwrap();
        assert_eq!(rep.unknowns, 44 + 20);
        assert_eq!(rep.kernel_dim, 34);
    }

    #[test]
    fn severi_kernel_annihilated() {
        let model = random_model(7, 12347, 42, 20).unwrap();
        let rep = severi_tangent(&model).unwrap();
        assert_eq!(rep.kernel_dim, 33 - 2);
        assert_eq!(rep.rank + rep.kernel_dim, rep.unknowns);
    }

    #[test]
    fn determinant_small() {
        let ctx = FpCtx::new(101);
        let m = FpMatrix::from_rows(vec![vec![2, 1], vec![1, 1]]);
        assert_eq!(determinant(&ctx, &m), 1);
        let s = FpMatrix::from_rows(vec![vec![0, 1], vec![1, 0]]);
        assert_eq!(determinant(&ctx, &s), 100);
    }
}
