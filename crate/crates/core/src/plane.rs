//! Plane models of genus-11 curves with prescribed ordinary singularities.
//!
//! Supported pencil counts and their models:
//! - k in 5..=9: degree 9 with 4 ordinary triple points and 5 ordinary
//!   double points, passing through k-5 of the ninth base points of the
//!   cubic pencils through eight of the singular points;
//! - k = 4: degree 9 with 3 triple points and 8 double points, one double
//!   point placed at the ninth base point of a cubic pencil;
//! - k = 10: degree 8 with 10 ordinary double points;
//! - k = 20: degree 9 with 5 triple points and 2 double points.
//!
//! "General position" is uniform random choice followed by verification of
//! every genericity predicate, with a retry bound.

use crate::fp::FpCtx;
use crate::gb::Ideal;
use crate::matrix::FpMatrix;
use crate::poly::{binom, Coeff, DegreeBasis, GradedPoly, PolyRing};
use crate::rng::Rng;
use serde::{Deserialize, Serialize};

/// Point of the projective plane, normalized so its last nonzero
/// coordinate is one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanePoint {
    pub coords: [u64; 3],
}

impl PlanePoint {
    pub fn new(ctx: &FpCtx, raw: [u64; 3]) -> PlanePoint {
        let mut c = [ctx.reduce(raw[0]), ctx.reduce(raw[1]), ctx.reduce(raw[2])];
        let last = (0..3).rfind(|&i| c[i] != 0).expect("zero vector is not a point");
        let inv = ctx.inv(c[last]);
        for v in c.iter_mut() {
            *v = ctx.mul(*v, inv);
        }
        PlanePoint { coords: c }
    }

    /// Random point in the affine chart z = 1.
    pub fn random_affine(rng: &mut Rng, ctx: &FpCtx) -> PlanePoint {
        PlanePoint { coords: [rng.fp(ctx.prime()), rng.fp(ctx.prime()), 1] }
    }

    pub fn is_affine(&self) -> bool {
        self.coords[2] == 1
    }

    /// The two-dimensional space of linear forms vanishing here.
    pub fn linear_forms(&self, ring: &PolyRing) -> Vec<GradedPoly> {
        linear_system_forms(ring, 1, &[(*self, 1)], &[])
    }

    /// Maximal ideal of the point.
    pub fn ideal(&self, ring: &PolyRing) -> Ideal {
        Ideal::new(ring.clone(), self.linear_forms(ring))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SingularitySpec {
    pub point: PlanePoint,
    /// 2 for an ordinary node, 3 for an ordinary triple point.
    pub multiplicity: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PencilKind {
    /// Lines through the i-th triple point.
    LineThroughTriple(usize),
    /// Conics through the four (or a chosen subset of the) triple points.
    ConicThroughTriples(Vec<usize>),
    /// Cubics through the eight singular points omitting the j-th double
    /// point; the residual pencil after removing the ninth base point.
    CubicResidual(usize),
    /// Lines through the i-th node of the degree-8 model.
    LineThroughNode(usize),
}

impl PencilKind {
    /// Pencils counted by `a` in the syzygy-scheme tables (lines/conics)
    /// versus `b` (cubic type).
    pub fn is_type_a(&self) -> bool {
        !matches!(self, PencilKind::CubicResidual(_))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PencilSpec {
    pub kind: PencilKind,
    /// The two independent defining forms of equal degree.
    pub forms: [GradedPoly; 2],
    /// Assigned base divisor: points with the local intersection
    /// multiplicity each member cuts on the curve there.
    pub base_points: Vec<(PlanePoint, u32)>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PlaneModel {
    pub prime: u64,
    pub seed: u64,
    pub k: usize,
    pub degree: u32,
    pub form: GradedPoly,
    pub specs: Vec<SingularitySpec>,
    /// The chosen ninth base points R_1..R_m the curve passes through
    /// (models with 5 < k <= 9).
    pub extra_points: Vec<PlanePoint>,
    pub pencils: Vec<PencilSpec>,
    pub expected_genus: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModelError {
    Degenerate(String),
    RetriesExhausted { k: usize, attempts: u32 },
    WrongDimension { what: &'static str, expected: usize, got: usize },
    UnsupportedK(usize),
}

impl std::fmt::Display for ModelError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ModelError::Degenerate(s) => write!(f, "degenerate configuration: {s}"),
            ModelError::RetriesExhausted { k, attempts } => {
                write!(f, "model k={k}: no generic configuration in {attempts} attempts")
            }
            ModelError::WrongDimension { what, expected, got } => {
                write!(f, "{what}: expected dimension {expected}, got {got}")
            }
            ModelError::UnsupportedK(k) => {
                write!(f, "unsupported k={k}; supported: 4..=10 and 20 (12 and the infinite-pencil model are not implemented)")
            }
        }
    }
}

impl std::error::Error for ModelError {}

/// Rows of linear conditions on the coefficients of a degree-d form that
/// force multiplicity >= m at the point: all order-(m-1) partials vanish,
/// which is `m (m+1) / 2` rows. Requires p > d so the Euler relations hold.
pub fn singular_conditions(ring: &PolyRing, point: &PlanePoint, m: u32, d: u32) -> FpMatrix {
    assert!(ring.ctx.prime() > d as u64, "characteristic must exceed the degree");
    assert!(m >= 1);
    let db = DegreeBasis::new(ring, d);
    let mut rows = Vec::new();
    for i in 0..m {
        for j in 0..(m - i) {
            let kk = m - 1 - i - j;
            // row of the (i, j, k)-th partial evaluated at the point
            let mut row = vec![0u64; db.len()];
            for (pos, mono) in db.monos.iter().enumerate() {
                let f = ring.monomial(*mono, Coeff::from_base(1));
                let df = f.partial_derivative(ring, &[i, j, kk]);
                row[pos] = df.evaluate(ring, &point.coords).base;
            }
            rows.push(row);
        }
    }
    FpMatrix::from_rows(rows)
}

/// Stacked condition matrix for prescribed singularities plus simple base
/// points on forms of degree `d`.
pub fn condition_matrix(
    ring: &PolyRing,
    d: u32,
    specs: &[(PlanePoint, u32)],
    simple: &[PlanePoint],
) -> FpMatrix {
    let db = DegreeBasis::new(ring, d);
    let mut mat = FpMatrix::zero(0, db.len());
    for &(p, m) in specs {
        mat = if mat.rows == 0 {
            singular_conditions(ring, &p, m, d)
        } else {
            mat.vstack(&singular_conditions(ring, &p, m, d))
        };
    }
    for p in simple {
        let row: Vec<u64> = db
            .monos
            .iter()
            .map(|mono| ring.monomial(*mono, Coeff::from_base(1)).evaluate(ring, &p.coords).base)
            .collect();
        let row = FpMatrix::from_rows(vec![row]);
        mat = if mat.rows == 0 { row } else { mat.vstack(&row) };
    }
    if mat.rows == 0 {
        FpMatrix::zero(0, db.len())
    } else {
        mat
    }
}

/// Basis of the linear system of degree-d forms with multiplicity >= m_i at
/// the prescribed points and passing through the simple points.
pub fn linear_system_forms(
    ring: &PolyRing,
    d: u32,
    specs: &[(PlanePoint, u32)],
    simple: &[PlanePoint],
) -> Vec<GradedPoly> {
    let db = DegreeBasis::new(ring, d);
    let mat = condition_matrix(ring, d, specs, simple);
    if mat.rows == 0 {
        return db.monos.iter().map(|m| ring.monomial(*m, Coeff::from_base(1))).collect();
    }
    let ker = mat.kernel_basis(&ring.ctx);
    (0..ker.cols).map(|j| db.from_coords(ring, &ker.column(j))).collect()
}

/// The unique ninth base point of the pencil of cubics through eight
/// general points, found by saturating the intersection ideal of two
/// independent members by the given points.
pub fn ninth_base_point(ring: &PolyRing, points: &[PlanePoint]) -> Result<PlanePoint, ModelError> {
    assert_eq!(points.len(), 8);
    for i in 0..8 {
        for j in (i + 1)..8 {
            if points[i] == points[j] {
                return Err(ModelError::Degenerate("repeated base point".into()));
            }
        }
    }
    let simple: Vec<PlanePoint> = points.to_vec();
    let cubics = linear_system_forms(ring, 3, &[], &simple);
    if cubics.len() != 2 {
        return Err(ModelError::WrongDimension {
            what: "cubic pencil through 8 points",
            expected: 2,
            got: cubics.len(),
        });
    }
    let base = Ideal::new(ring.clone(), cubics);
    let mut residual = base;
    for p in points {
        residual = residual.saturate(&p.ideal(ring));
    }
    let h = residual.hilbert();
    if h.krull_dim != 1 || h.degree != 1 {
        return Err(ModelError::Degenerate(format!(
            "ninth base locus not a single reduced point (dim {}, deg {})",
            h.proj_dim(),
            h.degree
        )));
    }
    // the residual point ideal contains two independent linear forms
    let lin: Vec<&GradedPoly> =
        residual.groebner().iter().filter(|g| g.degree() == Some(1)).collect();
    if lin.len() < 2 {
        return Err(ModelError::Degenerate("point ideal misses linear forms".into()));
    }
    let db = DegreeBasis::new(ring, 1);
    let rows: Vec<Vec<u64>> = lin.iter().map(|g| db.coords(g)).collect();
    let mat = FpMatrix::from_rows(rows);
    let ker = mat.kernel_basis(&ring.ctx);
    if ker.cols != 1 {
        return Err(ModelError::Degenerate("linear forms do not cut one point".into()));
    }
    let v = ker.column(0);
    Ok(PlanePoint::new(&ring.ctx, [v[0], v[1], v[2]]))
}

/// Geometric genus of a plane curve of degree d whose singularities are the
/// prescribed ordinary points.
pub fn geometric_genus(d: u32, specs: &[SingularitySpec]) -> i64 {
    let mut g = binom(d as u64 - 1, 2) as i64;
    for s in specs {
        g -= binom(s.multiplicity as u64, 2) as i64;
    }
    g
}

/// Itemized verification report.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ModelReport {
    pub checks: Vec<(String, bool)>,
    pub genus: i64,
    pub pass: bool,
}

struct TangentCone {
    binary: Vec<u64>, // coefficients of u^i v^(m-i), i = 0..=m
}

fn taylor_coefficient(ring: &PolyRing, f: &GradedPoly, p: &PlanePoint, i: u32, j: u32) -> u64 {
    let ctx = &ring.ctx;
    let df = f.partial_derivative(ring, &[i, j, 0]);
    let val = df.evaluate(ring, &p.coords).base;
    let fact = |n: u32| -> u64 {
        let mut acc = 1u64;
        for t in 2..=n as u64 {
            acc = ctx.mul(acc, t % ctx.prime());
        }
        acc
    };
    ctx.div(val, ctx.mul(fact(i), fact(j)))
}

fn tangent_cone(ring: &PolyRing, f: &GradedPoly, p: &PlanePoint, m: u32) -> TangentCone {
    assert!(p.is_affine(), "tangent cone wants an affine-chart point");
    let binary = (0..=m).map(|i| taylor_coefficient(ring, f, p, i, m - i)).collect();
    TangentCone { binary }
}

fn univariate_gcd(ctx: &FpCtx, mut a: Vec<u64>, mut b: Vec<u64>) -> Vec<u64> {
    let trim = |v: &mut Vec<u64>| {
        while v.last() == Some(&0) {
            v.pop();
        }
    };
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        // a mod b
        while a.len() >= b.len() && !a.is_empty() {
            let shift = a.len() - b.len();
            let c = ctx.div(*a.last().unwrap(), *b.last().unwrap());
            for (i, &bv) in b.iter().enumerate() {
                let t = ctx.mul(c, bv);
                a[i + shift] = ctx.sub(a[i + shift], t);
            }
            trim(&mut a);
        }
        std::mem::swap(&mut a, &mut b);
        trim(&mut b);
    }
    a
}

impl TangentCone {
    /// Ordinary means the degree-m binary form is squarefree.
    fn is_squarefree(&self, ctx: &FpCtx) -> bool {
        let coeffs = &self.binary;
        if coeffs.iter().all(|&c| c == 0) {
            return false;
        }
        // strip powers of v: binary[i] multiplies u^i v^(m-i); v-adic
        // valuation = number of leading zero coefficients from the top
        let top = coeffs.iter().rposition(|&c| c != 0).unwrap();
        let v_val = coeffs.len() - 1 - top;
        if v_val > 1 {
            return false;
        }
        // univariate part in u (degree top)
        let uni: Vec<u64> = coeffs[..=top].to_vec();
        // additionally strip u powers
        let u_val = uni.iter().position(|&c| c != 0).unwrap();
        if u_val > 1 {
            return false;
        }
        let core: Vec<u64> = uni[u_val..].to_vec();
        if core.len() <= 1 {
            return true;
        }
        let deriv: Vec<u64> = core
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| ctx.mul(c, (i as u64) % ctx.prime()))
            .collect();
        if deriv.iter().all(|&c| c == 0) {
            return false;
        }
        let g = univariate_gcd(ctx, core, deriv);
        g.len() == 1
    }
}

/// Checks every contract of a plane model: exact multiplicities, ordinary
/// tangent cones, no unassigned singularities (the partial-derivative ideal
/// saturated by the assigned points must be trivial), passage through the
/// extra points, independence of the conditions, and the genus count.
pub fn verify_model(ring: &PolyRing, model: &PlaneModel) -> ModelReport {
    let mut checks: Vec<(String, bool)> = Vec::new();
    let f = &model.form;
    checks.push((
        "form homogeneous of stated degree".into(),
        f.is_homogeneous() && f.degree() == Some(model.degree as u16),
    ));
    for (idx, s) in model.specs.iter().enumerate() {
        let m = s.multiplicity;
        // all order-(m-1) partials vanish
        let mut vanish = true;
        for i in 0..m {
            for j in 0..(m - i) {
                let kk = m - 1 - i - j;
                let v = f.partial_derivative(ring, &[i, j, kk]).evaluate(ring, &s.point.coords);
                vanish &= v.base == 0;
            }
        }
        checks.push((format!("point {idx}: multiplicity >= {m}"), vanish));
        let cone = tangent_cone(ring, f, &s.point, m);
        let ordinary = cone.is_squarefree(&ring.ctx);
        checks.push((format!("point {idx}: ordinary (squarefree tangent cone)"), ordinary));
    }
    for (l, p) in model.extra_points.iter().enumerate() {
        let v = f.evaluate(ring, &p.coords).base;
        checks.push((format!("passes through extra point {l}"), v == 0));
    }
    // unassigned singularities: saturate the ideal of partials by each
    // assigned point; the result must contain 1
    let jac = Ideal::new(
        ring.clone(),
        vec![
            f.partial_derivative(ring, &[1, 0, 0]),
            f.partial_derivative(ring, &[0, 1, 0]),
            f.partial_derivative(ring, &[0, 0, 1]),
        ],
    );
    let mut sat = jac;
    for s in &model.specs {
        sat = sat.saturate(&s.point.ideal(ring));
    }
    // empty projective support: the residual ideal is irrelevant
    checks.push(("no unassigned singular points".into(), sat.hilbert().krull_dim == 0));
    // independence of the interpolation conditions
    let spec_pairs: Vec<(PlanePoint, u32)> =
        model.specs.iter().map(|s| (s.point, s.multiplicity)).collect();
    let mat = condition_matrix(ring, model.degree, &spec_pairs, &model.extra_points);
    let expected_rank: usize = model
        .specs
        .iter()
        .map(|s| (s.multiplicity * (s.multiplicity + 1) / 2) as usize)
        .sum::<usize>()
        + model.extra_points.len();
    checks.push((
        "interpolation conditions independent".into(),
        mat.rank(&ring.ctx) == expected_rank,
    ));
    let genus = geometric_genus(model.degree, &model.specs);
    checks.push((
        format!("geometric genus = {}", model.expected_genus),
        genus == model.expected_genus,
    ));
    let pass = checks.iter().all(|(_, ok)| *ok);
    ModelReport { checks, genus, pass }
}

/// Draws a verified random model for the supported pencil counts.
/// Deterministic in `(k, p, seed)`.
pub fn random_model(k: usize, p: u64, seed: u64, retries: u32) -> Result<PlaneModel, ModelError> {
    if !matches!(k, 4..=10 | 20) {
        return Err(ModelError::UnsupportedK(k));
    }
    let ctx = FpCtx::new(p);
    assert!(p > 9, "model constructions need p > 9");
    let ring = PolyRing::plane(ctx);
    let mut rng = Rng::new(seed);
    for _attempt in 0..retries {
        match try_model(&ring, k, p, seed, &mut rng) {
            Ok(model) => {
                let report = verify_model(&ring, &model);
                if report.pass {
                    return Ok(model);
                }
            }
            Err(ModelError::UnsupportedK(kk)) => return Err(ModelError::UnsupportedK(kk)),
            Err(_) => {}
        }
    }
    Err(ModelError::RetriesExhausted { k, attempts: retries })
}

fn distinct(points: &[PlanePoint]) -> bool {
    for i in 0..points.len() {
        for j in (i + 1)..points.len() {
            if points[i] == points[j] {
                return false;
            }
        }
    }
    true
}

fn random_combination(
    ring: &PolyRing,
    rng: &mut Rng,
    basis: &[GradedPoly],
) -> GradedPoly {
    let mut f = ring.zero();
    for b in basis {
        f = f.add(ring, &b.scale(ring, rng.fp(ring.ctx.prime())));
    }
    f
}

fn try_model(
    ring: &PolyRing,
    k: usize,
    p: u64,
    seed: u64,
    rng: &mut Rng,
) -> Result<PlaneModel, ModelError> {
    match k {
        5..=9 => try_degree9(ring, k, p, seed, rng),
        4 => try_k4(ring, p, seed, rng),
        10 => try_octic(ring, p, seed, rng),
        20 => try_k20(ring, p, seed, rng),
        other => Err(ModelError::UnsupportedK(other)),
    }
}

/// Pencil of lines through a point.
fn line_pencil(ring: &PolyRing, p: &PlanePoint) -> [GradedPoly; 2] {
    let forms = p.linear_forms(ring);
    assert_eq!(forms.len(), 2);
    [forms[0].clone(), forms[1].clone()]
}

fn pencil_from_system(
    ring: &PolyRing,
    d: u32,
    simple: &[PlanePoint],
) -> Result<[GradedPoly; 2], ModelError> {
    let forms = linear_system_forms(ring, d, &[], simple);
    if forms.len() != 2 {
        return Err(ModelError::WrongDimension {
            what: "pencil system",
            expected: 2,
            got: forms.len(),
        });
    }
    Ok([forms[0].clone(), forms[1].clone()])
}

fn try_degree9(
    ring: &PolyRing,
    k: usize,
    p: u64,
    seed: u64,
    rng: &mut Rng,
) -> Result<PlaneModel, ModelError> {
    let m = k - 5;
    let ps: Vec<PlanePoint> = (0..4).map(|_| PlanePoint::random_affine(rng, &ring.ctx)).collect();
    let qs: Vec<PlanePoint> = (0..5).map(|_| PlanePoint::random_affine(rng, &ring.ctx)).collect();
    let mut all = ps.clone();
    all.extend(qs.iter().cloned());
    if !distinct(&all) {
        return Err(ModelError::Degenerate("coincident points".into()));
    }
    // ninth base points of the cubic pencils omitting Q_j, j = 0..m-1
    let mut extra = Vec::with_capacity(m);
    for j in 0..m {
        let mut eight = ps.clone();
        for (l, q) in qs.iter().enumerate() {
            if l != j {
                eight.push(*q);
            }
        }
        let r = ninth_base_point(ring, &eight)?;
        if !r.is_affine() {
            return Err(ModelError::Degenerate("ninth point at infinity".into()));
        }
        extra.push(r);
    }
    let mut with_extras = all.clone();
    with_extras.extend(extra.iter().cloned());
    if !distinct(&with_extras) {
        return Err(ModelError::Degenerate("ninth point collides".into()));
    }
    let specs: Vec<(PlanePoint, u32)> = ps
        .iter()
        .map(|&pt| (pt, 3))
        .chain(qs.iter().map(|&pt| (pt, 2)))
        .collect();
    let basis = linear_system_forms(ring, 9, &specs, &extra);
    if basis.len() != 16 - m {
        return Err(ModelError::WrongDimension {
            what: "degree-9 system",
            expected: 16 - m,
            got: basis.len(),
        });
    }
    let form = random_combination(ring, rng, &basis);
    if form.is_zero() {
        return Err(ModelError::Degenerate("zero form drawn".into()));
    }
    // pencil inventory
    let mut pencils = Vec::new();
    for (i, pt) in ps.iter().enumerate() {
        pencils.push(PencilSpec {
            kind: PencilKind::LineThroughTriple(i),
            forms: line_pencil(ring, pt),
            base_points: vec![(*pt, 3)],
        });
    }
    pencils.push(PencilSpec {
        kind: PencilKind::ConicThroughTriples(vec![0, 1, 2, 3]),
        forms: pencil_from_system(ring, 2, &ps)?,
        base_points: ps.iter().map(|&pt| (pt, 3)).collect(),
    });
    for j in 0..m {
        let mut eight = ps.clone();
        for (l, q) in qs.iter().enumerate() {
            if l != j {
                eight.push(*q);
            }
        }
        let forms = pencil_from_system(ring, 3, &eight)?;
        let mut base: Vec<(PlanePoint, u32)> = ps.iter().map(|&pt| (pt, 3)).collect();
        for (l, q) in qs.iter().enumerate() {
            if l != j {
                base.push((*q, 2));
            }
        }
        base.push((extra[j], 1));
        pencils.push(PencilSpec { kind: PencilKind::CubicResidual(j), forms, base_points: base });
    }
    Ok(PlaneModel {
        prime: p,
        seed,
        k,
        degree: 9,
        form,
        specs: specs.iter().map(|&(point, multiplicity)| SingularitySpec { point, multiplicity }).collect(),
        extra_points: extra,
        pencils,
        expected_genus: 11,
    })
}

fn try_k4(ring: &PolyRing, p: u64, seed: u64, rng: &mut Rng) -> Result<PlaneModel, ModelError> {
    let ps: Vec<PlanePoint> = (0..3).map(|_| PlanePoint::random_affine(rng, &ring.ctx)).collect();
    let qs: Vec<PlanePoint> = (0..7).map(|_| PlanePoint::random_affine(rng, &ring.ctx)).collect();
    let mut all = ps.clone();
    all.extend(qs.iter().cloned());
    if !distinct(&all) {
        return Err(ModelError::Degenerate("coincident points".into()));
    }
    // cubic pencil through the 3 triple points and the first 5 double
    // points (the last two drawn are left out)
    let mut eight = ps.clone();
    eight.extend(qs.iter().take(5).cloned());
    let r = ninth_base_point(ring, &eight)?;
    if !r.is_affine() {
        return Err(ModelError::Degenerate("ninth point at infinity".into()));
    }
    all.push(r);
    if !distinct(&all) {
        return Err(ModelError::Degenerate("ninth point collides".into()));
    }
    let mut specs: Vec<(PlanePoint, u32)> = ps.iter().map(|&pt| (pt, 3)).collect();
    specs.extend(qs.iter().map(|&pt| (pt, 2)));
    specs.push((r, 2));
    let basis = linear_system_forms(ring, 9, &specs, &[]);
    if basis.len() != 13 {
        return Err(ModelError::WrongDimension { what: "degree-9 system (k=4)", expected: 13, got: basis.len() });
    }
    let form = random_combination(ring, rng, &basis);
    if form.is_zero() {
        return Err(ModelError::Degenerate("zero form drawn".into()));
    }
    let mut pencils = Vec::new();
    for (i, pt) in ps.iter().enumerate() {
        pencils.push(PencilSpec {
            kind: PencilKind::LineThroughTriple(i),
            forms: line_pencil(ring, pt),
            base_points: vec![(*pt, 3)],
        });
    }
    let forms = pencil_from_system(ring, 3, &eight)?;
    let mut base: Vec<(PlanePoint, u32)> = ps.iter().map(|&pt| (pt, 3)).collect();
    base.extend(qs.iter().take(5).map(|&pt| (pt, 2)));
    base.push((r, 2));
    pencils.push(PencilSpec { kind: PencilKind::CubicResidual(0), forms, base_points: base });
    Ok(PlaneModel {
        prime: p,
        seed,
        k: 4,
        degree: 9,
        form,
        specs: specs.iter().map(|&(point, multiplicity)| SingularitySpec { point, multiplicity }).collect(),
        extra_points: vec![],
        pencils,
        expected_genus: 11,
    })
}

fn try_octic(ring: &PolyRing, p: u64, seed: u64, rng: &mut Rng) -> Result<PlaneModel, ModelError> {
    let ns: Vec<PlanePoint> = (0..10).map(|_| PlanePoint::random_affine(rng, &ring.ctx)).collect();
    if !distinct(&ns) {
        return Err(ModelError::Degenerate("coincident points".into()));
    }
    let specs: Vec<(PlanePoint, u32)> = ns.iter().map(|&pt| (pt, 2)).collect();
    let basis = linear_system_forms(ring, 8, &specs, &[]);
    if basis.len() != 15 {
        return Err(ModelError::WrongDimension { what: "degree-8 system", expected: 15, got: basis.len() });
    }
    let form = random_combination(ring, rng, &basis);
    if form.is_zero() {
        return Err(ModelError::Degenerate("zero form drawn".into()));
    }
    let pencils = ns
        .iter()
        .enumerate()
        .map(|(i, pt)| PencilSpec {
            kind: PencilKind::LineThroughNode(i),
            forms: line_pencil(ring, pt),
            base_points: vec![(*pt, 2)],
        })
        .collect();
    Ok(PlaneModel {
        prime: p,
        seed,
        k: 10,
        degree: 8,
        form,
        specs: specs.iter().map(|&(point, multiplicity)| SingularitySpec { point, multiplicity }).collect(),
        extra_points: vec![],
        pencils,
        expected_genus: 11,
    })
}

fn try_k20(ring: &PolyRing, p: u64, seed: u64, rng: &mut Rng) -> Result<PlaneModel, ModelError> {
    let ps: Vec<PlanePoint> = (0..5).map(|_| PlanePoint::random_affine(rng, &ring.ctx)).collect();
    let qs: Vec<PlanePoint> = (0..2).map(|_| PlanePoint::random_affine(rng, &ring.ctx)).collect();
    let mut all = ps.clone();
    all.extend(qs.iter().cloned());
    if !distinct(&all) {
        return Err(ModelError::Degenerate("coincident points".into()));
    }
    let specs: Vec<(PlanePoint, u32)> =
        ps.iter().map(|&pt| (pt, 3)).chain(qs.iter().map(|&pt| (pt, 2))).collect();
    let basis = linear_system_forms(ring, 9, &specs, &[]);
    if basis.len() != 19 {
        return Err(ModelError::WrongDimension { what: "degree-9 system (k=20)", expected: 19, got: basis.len() });
    }
    let form = random_combination(ring, rng, &basis);
    if form.is_zero() {
        return Err(ModelError::Degenerate("zero form drawn".into()));
    }
    // the plane-visible pencils: 5 line pencils and the 5 conic pencils
    // through four of the five triple points; the remaining pencils of the
    // g^3_10 model are counted through the Betti number instead
    let mut pencils = Vec::new();
    for (i, pt) in ps.iter().enumerate() {
        pencils.push(PencilSpec {
            kind: PencilKind::LineThroughTriple(i),
            forms: line_pencil(ring, pt),
            base_points: vec![(*pt, 3)],
        });
    }
    for omit in 0..5 {
        let subset: Vec<usize> = (0..5).filter(|&i| i != omit).collect();
        let pts: Vec<PlanePoint> = subset.iter().map(|&i| ps[i]).collect();
        let forms = pencil_from_system(ring, 2, &pts)?;
        pencils.push(PencilSpec {
            kind: PencilKind::ConicThroughTriples(subset),
            forms,
            base_points: pts.iter().map(|&pt| (pt, 3)).collect(),
        });
    }
    Ok(PlaneModel {
        prime: p,
        seed,
        k: 20,
        degree: 9,
        form,
        specs: specs.iter().map(|&(point, multiplicity)| SingularitySpec { point, multiplicity }).collect(),
        extra_points: vec![],
        pencils,
        expected_genus: 11,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring() -> PolyRing {
        PolyRing::plane(FpCtx::new(12347))
    }

    #[test]
    fn condition_row_counts() {
        let r = ring();
        let p = PlanePoint::new(&r.ctx, [5, 11, 1]);
        assert_eq!(singular_conditions(&r, &p, 2, 9).rows, 3);
        assert_eq!(singular_conditions(&r, &p, 3, 9).rows, 6);
        let origin = PlanePoint::new(&r.ctx, [0, 0, 1]);
        let m = singular_conditions(&r, &origin, 1, 3);
        assert_eq!(m.rows, 1);
        // the single row selects evaluation at (0:0:1): the z^3 coefficient
        let db = DegreeBasis::new(&r, 3);
        let z3 = db.index_of(&crate::poly::Mono::from_exps(&[0, 0, 3])).unwrap();
        assert_eq!(m.at(0, z3), 1);
        assert_eq!(m.row(0).iter().filter(|&&v| v != 0).count(), 1);
    }

    #[test]
    fn degree9_system_dimension() {
        let r = ring();
        let mut rng = Rng::new(7);
        let ps: Vec<PlanePoint> = (0..4).map(|_| PlanePoint::random_affine(&mut rng, &r.ctx)).collect();
        let qs: Vec<PlanePoint> = (0..5).map(|_| PlanePoint::random_affine(&mut rng, &r.ctx)).collect();
        let specs: Vec<(PlanePoint, u32)> =
            ps.iter().map(|&p| (p, 3)).chain(qs.iter().map(|&p| (p, 2))).collect();
        let mat = condition_matrix(&r, 9, &specs, &[]);
        assert_eq!(mat.rows, 39);
        assert_eq!(mat.cols, 55);
        assert_eq!(mat.rank(&r.ctx), 39);
        let forms = linear_system_forms(&r, 9, &specs, &[]);
        assert_eq!(forms.len(), 16);
    }

    #[test]
    fn adjoint_like_sextic_dimension() {
        // sextics double at the triples and through the doubles: dim 11 = g
        let r = ring();
        let mut rng = Rng::new(7);
        let ps: Vec<PlanePoint> = (0..4).map(|_| PlanePoint::random_affine(&mut rng, &r.ctx)).collect();
        let qs: Vec<PlanePoint> = (0..5).map(|_| PlanePoint::random_affine(&mut rng, &r.ctx)).collect();
        let specs: Vec<(PlanePoint, u32)> = ps.iter().map(|&p| (p, 2)).collect();
        let forms = linear_system_forms(&r, 6, &specs, &qs);
        assert_eq!(forms.len(), 11);
    }

    #[test]
    fn cubic_pencil_through_8_points() {
        let r = ring();
        let mut rng = Rng::new(11);
        let pts: Vec<PlanePoint> = (0..8).map(|_| PlanePoint::random_affine(&mut rng, &r.ctx)).collect();
        let forms = linear_system_forms(&r, 3, &[], &pts);
        assert_eq!(forms.len(), 2);
    }

    #[test]
    fn ninth_point_of_forward_constructed_pencil() {
        // take the pencil through 8 random points; its ninth base point is
        // rational, and a brute-force scan over the field locates it
        // independently. The scan is quadratic in p, so use a small field.
        let r = PolyRing::plane(FpCtx::new(499));
        let mut rng = Rng::new(3);
        loop {
            let eight: Vec<PlanePoint> =
                (0..8).map(|_| PlanePoint::random_affine(&mut rng, &r.ctx)).collect();
            if !distinct(&eight) {
                continue;
            }
            let forms = linear_system_forms(&r, 3, &[], &eight);
            if forms.len() != 2 {
                continue;
            }
            let pts = common_affine_zeros(&r, &forms[0], &forms[1]);
            if pts.len() != 9 {
                continue;
            }
            let ninth: Vec<&PlanePoint> = pts.iter().filter(|p| !eight.contains(p)).collect();
            if ninth.len() != 1 {
                continue;
            }
            let got = ninth_base_point(&r, &eight).unwrap();
            assert_eq!(got, *ninth[0]);
            // the ninth point lies on every member of the pencil
            assert_eq!(forms[0].evaluate(&r, &got.coords).base, 0);
            assert_eq!(forms[1].evaluate(&r, &got.coords).base, 0);
            break;
        }
    }

    fn common_affine_zeros(r: &PolyRing, c0: &GradedPoly, c1: &GradedPoly) -> Vec<PlanePoint> {
        // brute-force intersection over the affine chart; quadratic in p
        let p = r.ctx.prime();
        let mut out = Vec::new();
        for x in 0..p {
            for y in 0..p {
                let v0 = c0.evaluate(r, &[x, y, 1]).base;
                if v0 != 0 {
                    continue;
                }
                let v1 = c1.evaluate(r, &[x, y, 1]).base;
                if v1 == 0 {
                    out.push(PlanePoint { coords: [x, y, 1] });
                }
            }
        }
        out
    }

    #[test]
    fn ninth_point_rejects_repeated_input() {
        let r = ring();
        let mut rng = Rng::new(5);
        let mut pts: Vec<PlanePoint> =
            (0..7).map(|_| PlanePoint::random_affine(&mut rng, &r.ctx)).collect();
        pts.push(pts[0]);
        assert!(matches!(ninth_base_point(&r, &pts), Err(ModelError::Degenerate(_))));
    }

    #[test]
    fn smooth_quartic_has_genus_three() {
        let r = ring();
        // Fermat-like quartic x^4 + y^4 + z^4 is smooth for p = 12347
        let m4 = |a: u32, b: u32, c: u32| {
            r.monomial(crate::poly::Mono::from_exps(&[a, b, c]), Coeff::from_base(1))
        };
        let f = m4(4, 0, 0).add(&r, &m4(0, 4, 0)).add(&r, &m4(0, 0, 4));
        let model = PlaneModel {
            prime: 12347,
            seed: 0,
            k: 0,
            degree: 4,
            form: f,
            specs: vec![],
            extra_points: vec![],
            pencils: vec![],
            expected_genus: 3,
        };
        let rep = verify_model(&r, &model);
        assert!(rep.pass, "failed checks: {:?}", rep.checks);
        assert_eq!(rep.genus, 3);
    }

    #[test]
    fn tacnode_fails_ordinariness() {
        // z^2 y^2 - x^4 has a tacnode at (0:0:1): multiplicity 2 but the
        // tangent cone y^2 is a double line
        let r = ring();
        let m4 = |a: u32, b: u32, c: u32, s: u64| {
            r.monomial(crate::poly::Mono::from_exps(&[a, b, c]), Coeff::from_base(s))
        };
        let f = m4(0, 2, 2, 1).add(&r, &m4(4, 0, 0, 12346));
        let model = PlaneModel {
            prime: 12347,
            seed: 0,
            k: 0,
            degree: 4,
            form: f,
            specs: vec![SingularitySpec {
                point: PlanePoint::new(&r.ctx, [0, 0, 1]),
                multiplicity: 2,
            }],
            extra_points: vec![],
            pencils: vec![],
            expected_genus: 2,
        };
        let rep = verify_model(&r, &model);
        let cone_check = rep
            .checks
            .iter()
            .find(|(name, _)| name.contains("ordinary"))
            .unwrap();
        assert!(!cone_check.1, "tacnode must fail the squarefree test");
    }

    #[test]
    fn k5_model_verifies() {
        let model = random_model(5, 12347, 42, 20).unwrap();
        assert_eq!(model.pencils.len(), 5);
        assert_eq!(model.degree, 9);
        assert_eq!(geometric_genus(9, &model.specs), 11);
    }

    #[test]
    fn k6_model_passes_through_r1() {
        let r = ring();
        let model = random_model(6, 12347, 42, 20).unwrap();
        assert_eq!(model.extra_points.len(), 1);
        assert_eq!(model.pencils.len(), 6);
        let v = model.form.evaluate(&r, &model.extra_points[0].coords).base;
        assert_eq!(v, 0);
    }

    #[test]
    fn octic_model_verifies() {
        let model = random_model(10, 12347, 42, 20).unwrap();
        assert_eq!(model.degree, 8);
        assert_eq!(model.pencils.len(), 10);
        assert_eq!(geometric_genus(8, &model.specs), 11);
    }

    #[test]
    fn model_deterministic_in_seed() {
        let a = random_model(5, 12347, 42, 20).unwrap();
        let b = random_model(5, 12347, 42, 20).unwrap();
        assert_eq!(a.form, b.form);
        assert_eq!(a.specs, b.specs);
    }

    #[test]
    fn unsupported_k_is_reported() {
        assert!(matches!(random_model(12, 12347, 42, 5), Err(ModelError::UnsupportedK(12))));
        assert!(matches!(random_model(3, 12347, 42, 5), Err(ModelError::UnsupportedK(3))));
    }
}
