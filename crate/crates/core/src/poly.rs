//! Graded multivariate polynomial arithmetic over GF(p), optionally over
//! square-zero extensions.
//!
//! Coefficients carry an optional first-order part: a linear combination of
//! nilpotent parameters (one parameter for dual numbers, thirty for the
//! deformation computations). Products of two first-order parts vanish
//! structurally, so Groebner reduction always happens over the base field.
//!
//! Monomial orders: graded reverse lexicographic (default) and a block
//! elimination order. Exponents are packed small integers with the total
//! degree cached per term.

use crate::fp::FpCtx;
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

pub const MAX_VARS: usize = 14;

/// Packed exponent tuple with cached total degree.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct Mono {
    pub exp: [u8; MAX_VARS],
    pub deg: u16,
}

impl Mono {
    pub fn one() -> Mono {
        Mono { exp: [0; MAX_VARS], deg: 0 }
    }

    pub fn var(i: usize) -> Mono {
        let mut m = Mono::one();
        m.exp[i] = 1;
        m.deg = 1;
        m
    }

    pub fn from_exps(exps: &[u32]) -> Mono {
        let mut m = Mono::one();
        let mut deg = 0u32;
        for (i, &e) in exps.iter().enumerate() {
            assert!(e <= u8::MAX as u32, "exponent too large");
            m.exp[i] = e as u8;
            deg += e;
        }
        m.deg = deg as u16;
        m
    }

    #[inline]
    pub fn mul(&self, other: &Mono) -> Mono {
        let mut m = *self;
        for i in 0..MAX_VARS {
            m.exp[i] += other.exp[i];
        }
        m.deg += other.deg;
        m
    }

    #[inline]
    pub fn divides(&self, other: &Mono) -> bool {
        if self.deg > other.deg {
            return false;
        }
        self.exp.iter().zip(other.exp.iter()).all(|(a, b)| a <= b)
    }

    /// `other / self`, or None when not divisible.
    #[inline]
    pub fn div_into(&self, other: &Mono) -> Option<Mono> {
        if !self.divides(other) {
            return None;
        }
        let mut m = *other;
        for i in 0..MAX_VARS {
            m.exp[i] -= self.exp[i];
        }
        m.deg -= self.deg;
        Some(m)
    }

    pub fn lcm(&self, other: &Mono) -> Mono {
        let mut m = Mono::one();
        let mut deg = 0u16;
        for i in 0..MAX_VARS {
            m.exp[i] = self.exp[i].max(other.exp[i]);
            deg += m.exp[i] as u16;
        }
        m.deg = deg;
        m
    }

    pub fn is_coprime(&self, other: &Mono) -> bool {
        self.exp.iter().zip(other.exp.iter()).all(|(a, b)| *a == 0 || *b == 0)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum MonomialOrder {
    /// Graded reverse lexicographic.
    GrevLex,
    /// Eliminates the first `n` variables: compares total degree in the
    /// block first, ties broken by grevlex on the full tuple.
    Elim(usize),
}

impl MonomialOrder {
    /// Compares monomials; `Greater` means `a` is the larger (leading) one.
    pub fn cmp(&self, nvars: usize, a: &Mono, b: &Mono) -> Ordering {
        match self {
            MonomialOrder::GrevLex => grevlex(nvars, a, b),
            MonomialOrder::Elim(k) => {
                let da: u16 = a.exp[..*k].iter().map(|&e| e as u16).sum();
                let db: u16 = b.exp[..*k].iter().map(|&e| e as u16).sum();
                da.cmp(&db).then_with(|| grevlex(nvars, a, b))
            }
        }
    }
}

fn grevlex(nvars: usize, a: &Mono, b: &Mono) -> Ordering {
    match a.deg.cmp(&b.deg) {
        Ordering::Equal => {}
        ord => return ord,
    }
    // last nonzero coordinate of a-b negative => a greater
    for j in (0..nvars).rev() {
        match a.exp[j].cmp(&b.exp[j]) {
            Ordering::Equal => {}
            Ordering::Less => return Ordering::Greater,
            Ordering::Greater => return Ordering::Less,
        }
    }
    Ordering::Equal
}

/// Coefficient modes: plain field elements, or a square-zero extension by
/// `n` nilpotent parameters.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum CoeffMode {
    Field,
    /// `GF(p)[t_0..t_{n-1}] / (t_0..t_{n-1})^2`
    SquareZero(u16),
}

/// Scalar of the coefficient ring: base part plus a sparse first-order part.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Coeff {
    pub base: u64,
    /// Sorted `(parameter index, value)` pairs, values nonzero.
    pub d1: Vec<(u16, u64)>,
}

impl Coeff {
    pub fn from_base(v: u64) -> Coeff {
        Coeff { base: v, d1: Vec::new() }
    }

    pub fn eps(param: u16, v: u64) -> Coeff {
        if v == 0 {
            Coeff::from_base(0)
        } else {
            Coeff { base: 0, d1: vec![(param, v)] }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.base == 0 && self.d1.is_empty()
    }

    pub fn add(&self, ctx: &FpCtx, other: &Coeff) -> Coeff {
        let base = ctx.add(self.base, other.base);
        let d1 = merge_d1(ctx, &self.d1, 1, &other.d1, 1);
        Coeff { base, d1 }
    }

    pub fn neg(&self, ctx: &FpCtx) -> Coeff {
        Coeff {
            base: ctx.neg(self.base),
            d1: self.d1.iter().map(|&(i, v)| (i, ctx.neg(v))).collect(),
        }
    }

    pub fn sub(&self, ctx: &FpCtx, other: &Coeff) -> Coeff {
        self.add(ctx, &other.neg(ctx))
    }

    /// Product under the square-zero rule: first-order times first-order
    /// vanishes.
    pub fn mul(&self, ctx: &FpCtx, other: &Coeff) -> Coeff {
        let base = ctx.mul(self.base, other.base);
        let d1 = merge_d1(ctx, &self.d1, other.base, &other.d1, self.base);
        Coeff { base, d1 }
    }

    pub fn scale(&self, ctx: &FpCtx, s: u64) -> Coeff {
        let mut d1 = Vec::with_capacity(self.d1.len());
        for &(i, v) in &self.d1 {
            let w = ctx.mul(v, s);
            if w != 0 {
                d1.push((i, w));
            }
        }
        Coeff { base: ctx.mul(self.base, s), d1 }
    }
}

fn merge_d1(ctx: &FpCtx, a: &[(u16, u64)], sa: u64, b: &[(u16, u64)], sb: u64) -> Vec<(u16, u64)> {
    if (a.is_empty() || sa == 0) && (b.is_empty() || sb == 0) {
        return Vec::new();
    }
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let pick_a = j == b.len() || (i < a.len() && a[i].0 <= b[j].0);
        let pick_b = i == a.len() || (j < b.len() && b[j].0 <= a[i].0);
        if pick_a && pick_b {
            let v = ctx.add(ctx.mul(a[i].1, sa), ctx.mul(b[j].1, sb));
            if v != 0 {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        } else if pick_a {
            let v = ctx.mul(a[i].1, sa);
            if v != 0 {
                out.push((a[i].0, v));
            }
            i += 1;
        } else {
            let v = ctx.mul(b[j].1, sb);
            if v != 0 {
                out.push((b[j].0, v));
            }
            j += 1;
        }
    }
    out
}

/// Compact ring fingerprint carried by every polynomial, so that operations
/// can reject mixed-ring arguments.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct RingSig {
    pub p: u64,
    pub nvars: u8,
    pub order: MonomialOrder,
    pub mode: CoeffMode,
}

/// A graded polynomial ring over GF(p) or a square-zero extension.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PolyRing {
    pub ctx: FpCtx,
    pub vars: Vec<String>,
    pub order: MonomialOrder,
    pub mode: CoeffMode,
}

impl PolyRing {
    pub fn new(ctx: FpCtx, vars: &[&str], order: MonomialOrder, mode: CoeffMode) -> PolyRing {
        assert!(vars.len() <= MAX_VARS, "too many variables");
        let names: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
        for i in 0..names.len() {
            for j in i + 1..names.len() {
                assert_ne!(names[i], names[j], "duplicate variable name");
            }
        }
        PolyRing { ctx, vars: names, order, mode }
    }

    /// `K[x, y, z]` for the plane.
    pub fn plane(ctx: FpCtx) -> PolyRing {
        PolyRing::new(ctx, &["x", "y", "z"], MonomialOrder::GrevLex, CoeffMode::Field)
    }

    /// `K[x0..x10]` for the canonical space.
    pub fn canonical(ctx: FpCtx) -> PolyRing {
        let names: Vec<String> = (0..11).map(|i| format!("x{i}")).collect();
        let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        PolyRing::new(ctx, &refs, MonomialOrder::GrevLex, CoeffMode::Field)
    }

    pub fn with_order(&self, order: MonomialOrder) -> PolyRing {
        let mut r = self.clone();
        r.order = order;
        r
    }

    pub fn with_mode(&self, mode: CoeffMode) -> PolyRing {
        let mut r = self.clone();
        r.mode = mode;
        r
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn sig(&self) -> RingSig {
        RingSig {
            p: self.ctx.prime(),
            nvars: self.vars.len() as u8,
            order: self.order,
            mode: self.mode,
        }
    }

    pub fn cmp_mono(&self, a: &Mono, b: &Mono) -> Ordering {
        self.order.cmp(self.nvars(), a, b)
    }

    pub fn zero(&self) -> GradedPoly {
        GradedPoly { sig: self.sig(), terms: Vec::new() }
    }

    pub fn constant(&self, v: u64) -> GradedPoly {
        let v = self.ctx.reduce(v);
        if v == 0 {
            return self.zero();
        }
        GradedPoly {
            sig: self.sig(),
            terms: vec![Term { mono: Mono::one(), coeff: Coeff::from_base(v) }],
        }
    }

    pub fn one(&self) -> GradedPoly {
        self.constant(1)
    }

    pub fn var(&self, i: usize) -> GradedPoly {
        assert!(i < self.nvars());
        GradedPoly {
            sig: self.sig(),
            terms: vec![Term { mono: Mono::var(i), coeff: Coeff::from_base(1) }],
        }
    }

    pub fn monomial(&self, m: Mono, c: Coeff) -> GradedPoly {
        if c.is_zero() {
            return self.zero();
        }
        GradedPoly { sig: self.sig(), terms: vec![Term { mono: m, coeff: c }] }
    }

    /// Normalizes an unsorted term list: sorts descending, merges equal
    /// monomials, drops zeros.
    pub fn from_terms(&self, mut terms: Vec<Term>) -> GradedPoly {
        terms.sort_by(|a, b| self.cmp_mono(&b.mono, &a.mono));
        let mut out: Vec<Term> = Vec::with_capacity(terms.len());
        for t in terms {
            if let Some(last) = out.last_mut() {
                if last.mono == t.mono {
                    last.coeff = last.coeff.add(&self.ctx, &t.coeff);
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
        GradedPoly { sig: self.sig(), terms: out }
    }

    /// All monomials of total degree `d`, listed in descending ring order.
    /// The count is `C(d + nvars - 1, nvars - 1)`.
    pub fn graded_basis(&self, d: u32) -> Vec<Mono> {
        let mut acc = Vec::new();
        let mut cur = vec![0u32; self.nvars()];
        enumerate_degree(self.nvars(), d, 0, &mut cur, &mut acc);
        acc.sort_by(|a, b| self.cmp_mono(b, a));
        acc
    }
}

fn enumerate_degree(nvars: usize, left: u32, at: usize, cur: &mut Vec<u32>, out: &mut Vec<Mono>) {
    if at == nvars - 1 {
        cur[at] = left;
        out.push(Mono::from_exps(cur));
        return;
    }
    for e in 0..=left {
        cur[at] = e;
        enumerate_degree(nvars, left - e, at + 1, cur, out);
    }
    cur[at] = 0;
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Term {
    pub mono: Mono,
    pub coeff: Coeff,
}

/// Sparse polynomial: terms sorted descending in the ring order, no zero
/// coefficients stored.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct GradedPoly {
    pub sig: RingSig,
    pub terms: Vec<Term>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PolyError {
    RingMismatch,
    /// Not in the span; carries the residual after reduction.
    NotInSpan(Box<GradedPoly>),
}

impl GradedPoly {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading(&self) -> Option<&Term> {
        self.terms.first()
    }

    /// Total degree, or None for zero.
    pub fn degree(&self) -> Option<u16> {
        self.terms.iter().map(|t| t.mono.deg).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        match self.terms.first() {
            None => true,
            Some(t0) => self.terms.iter().all(|t| t.mono.deg == t0.mono.deg),
        }
    }

    pub fn add(&self, ring: &PolyRing, other: &GradedPoly) -> GradedPoly {
        assert_eq!(self.sig, other.sig, "ring mismatch");
        let ctx = &ring.ctx;
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() || j < other.terms.len() {
            let cmp = if i == self.terms.len() {
                Ordering::Less
            } else if j == other.terms.len() {
                Ordering::Greater
            } else {
                ring.cmp_mono(&self.terms[i].mono, &other.terms[j].mono)
            };
            match cmp {
                Ordering::Greater => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push(other.terms[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let c = self.terms[i].coeff.add(ctx, &other.terms[j].coeff);
                    if !c.is_zero() {
                        out.push(Term { mono: self.terms[i].mono, coeff: c });
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        GradedPoly { sig: self.sig, terms: out }
    }

    pub fn neg(&self, ring: &PolyRing) -> GradedPoly {
        let ctx = &ring.ctx;
        GradedPoly {
            sig: self.sig,
            terms: self
                .terms
                .iter()
                .map(|t| Term { mono: t.mono, coeff: t.coeff.neg(ctx) })
                .collect(),
        }
    }

    pub fn sub(&self, ring: &PolyRing, other: &GradedPoly) -> GradedPoly {
        self.add(ring, &other.neg(ring))
    }

    pub fn scale(&self, ring: &PolyRing, s: u64) -> GradedPoly {
        let s = ring.ctx.reduce(s);
        if s == 0 {
            return ring.zero();
        }
        GradedPoly {
            sig: self.sig,
            terms: self
                .terms
                .iter()
                .map(|t| Term { mono: t.mono, coeff: t.coeff.scale(&ring.ctx, s) })
                .collect(),
        }
    }

    /// Multiplies by a single term.
    pub fn mul_term(&self, ring: &PolyRing, mono: &Mono, coeff: &Coeff) -> GradedPoly {
        let ctx = &ring.ctx;
        let mut terms = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            let c = t.coeff.mul(ctx, coeff);
            if !c.is_zero() {
                terms.push(Term { mono: t.mono.mul(mono), coeff: c });
            }
        }
        GradedPoly { sig: self.sig, terms }
    }

    pub fn multiply(&self, ring: &PolyRing, other: &GradedPoly) -> Result<GradedPoly, PolyError> {
        if self.sig != other.sig {
            return Err(PolyError::RingMismatch);
        }
        let (small, large) = if self.terms.len() <= other.terms.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut all = Vec::with_capacity(small.terms.len() * large.terms.len());
        for t in &small.terms {
            for u in &large.terms {
                let c = t.coeff.mul(&ring.ctx, &u.coeff);
                if !c.is_zero() {
                    all.push(Term { mono: t.mono.mul(&u.mono), coeff: c });
                }
            }
        }
        Ok(ring.from_terms(all))
    }

    /// Iterated formal partial derivative; `orders[i]` differentiations in
    /// variable `i`. Falling factorials are reduced mod p, so characteristic
    /// effects (p dividing a coefficient) surface as exact zeros.
    pub fn partial_derivative(&self, ring: &PolyRing, orders: &[u32]) -> GradedPoly {
        let ctx = &ring.ctx;
        let mut terms = Vec::new();
        'term: for t in &self.terms {
            let mut factor = 1u64;
            let mut mono = t.mono;
            for (v, &k) in orders.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let e = t.mono.exp[v] as u64;
                if e < k as u64 {
                    continue 'term;
                }
                factor = ctx.mul(factor, ctx.falling(e, k as u64));
                mono.exp[v] -= k as u8;
                mono.deg -= k as u16;
            }
            if factor == 0 {
                continue;
            }
            let coeff = t.coeff.scale(ctx, factor);
            if !coeff.is_zero() {
                terms.push(Term { mono, coeff });
            }
        }
        ring.from_terms(terms)
    }

    /// Evaluation at a point given by base-field coordinates.
    pub fn evaluate(&self, ring: &PolyRing, point: &[u64]) -> Coeff {
        assert_eq!(point.len(), ring.nvars(), "evaluation arity");
        let ctx = &ring.ctx;
        let mut acc = Coeff::from_base(0);
        for t in &self.terms {
            let mut m = 1u64;
            for v in 0..ring.nvars() {
                let e = t.mono.exp[v];
                if e > 0 {
                    m = ctx.mul(m, ctx.pow(point[v], e as u64));
                }
            }
            acc = acc.add(ctx, &t.coeff.scale(ctx, m));
        }
        acc
    }

    /// Evaluation where the point itself has first-order parts.
    pub fn evaluate_dual(&self, ring: &PolyRing, point: &[Coeff]) -> Coeff {
        assert_eq!(point.len(), ring.nvars(), "evaluation arity");
        let ctx = &ring.ctx;
        let mut acc = Coeff::from_base(0);
        for t in &self.terms {
            let mut m = Coeff::from_base(1);
            for v in 0..ring.nvars() {
                for _ in 0..t.mono.exp[v] {
                    m = m.mul(ctx, &point[v]);
                }
            }
            acc = acc.add(ctx, &m.mul(ctx, &t.coeff));
        }
        acc
    }

    /// Substitutes `images[i]` for variable `i`.
    pub fn substitute(&self, ring: &PolyRing, images: &[GradedPoly]) -> GradedPoly {
        assert_eq!(images.len(), ring.nvars());
        let mut acc = ring.zero();
        // cache powers per variable up to the needed exponent
        let mut powers: Vec<Vec<GradedPoly>> = images.iter().map(|g| vec![ring.one(), g.clone()]).collect();
        for t in &self.terms {
            let mut prod = ring.monomial(Mono::one(), t.coeff.clone());
            for v in 0..ring.nvars() {
                let e = t.mono.exp[v] as usize;
                if e == 0 {
                    continue;
                }
                while powers[v].len() <= e {
                    let next = powers[v].last().unwrap().multiply(ring, &images[v]).unwrap();
                    powers[v].push(next);
                }
                prod = prod.multiply(ring, &powers[v][e]).unwrap();
            }
            acc = acc.add(ring, &prod);
        }
        acc
    }

    /// Base-field part (first-order parts stripped).
    pub fn base_part(&self, ring: &PolyRing) -> GradedPoly {
        let terms = self
            .terms
            .iter()
            .filter(|t| t.coeff.base != 0)
            .map(|t| Term { mono: t.mono, coeff: Coeff::from_base(t.coeff.base) })
            .collect();
        GradedPoly { sig: ring.sig(), terms }
    }

    /// Coefficient polynomial of nilpotent parameter `param`.
    pub fn d1_part(&self, ring: &PolyRing, param: u16) -> GradedPoly {
        let mut terms = Vec::new();
        for t in &self.terms {
            if let Ok(pos) = t.coeff.d1.binary_search_by_key(&param, |e| e.0) {
                terms.push(Term { mono: t.mono, coeff: Coeff::from_base(t.coeff.d1[pos].1) });
            }
        }
        GradedPoly { sig: ring.sig(), terms }
    }

    /// Canonical text form `c*x^a*y^b + ...`, leading term first.
    pub fn render(&self, ring: &PolyRing) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for t in &self.terms {
            let mut s = String::new();
            let c = &t.coeff;
            if c.d1.is_empty() {
                s.push_str(&c.base.to_string());
            } else {
                s.push('(');
                s.push_str(&c.base.to_string());
                for &(i, v) in &c.d1 {
                    s.push_str(&format!("+{v}*e{i}"));
                }
                s.push(')');
            }
            for v in 0..ring.nvars() {
                let e = t.mono.exp[v];
                if e == 1 {
                    s.push_str(&format!("*{}", ring.vars[v]));
                } else if e > 1 {
                    s.push_str(&format!("*{}^{}", ring.vars[v], e));
                }
            }
            parts.push(s);
        }
        parts.join(" + ")
    }
}

impl fmt::Display for GradedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // degree-agnostic fallback without variable names
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|t| format!("{}*{:?}", t.coeff.base, &t.mono.exp[..4.min(MAX_VARS)]))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Fixed basis of the degree-`d` graded piece with monomial-to-index lookup,
/// used to pass between sparse polynomials and dense coordinate vectors.
pub struct DegreeBasis {
    pub degree: u32,
    pub monos: Vec<Mono>,
    index: HashMap<Mono, usize>,
}

impl DegreeBasis {
    pub fn new(ring: &PolyRing, d: u32) -> DegreeBasis {
        let monos = ring.graded_basis(d);
        let index = monos.iter().enumerate().map(|(i, m)| (*m, i)).collect();
        DegreeBasis { degree: d, monos, index }
    }

    pub fn len(&self) -> usize {
        self.monos.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monos.is_empty()
    }

    pub fn index_of(&self, m: &Mono) -> Option<usize> {
        self.index.get(m).copied()
    }

    /// Dense coordinates of a homogeneous polynomial of degree `d`.
    pub fn coords(&self, f: &GradedPoly) -> Vec<u64> {
        let mut v = vec![0u64; self.monos.len()];
        for t in &f.terms {
            let i = self
                .index_of(&t.mono)
                .unwrap_or_else(|| panic!("monomial of degree {} outside basis {}", t.mono.deg, self.degree));
            v[i] = t.coeff.base;
        }
        v
    }

    pub fn from_coords(&self, ring: &PolyRing, v: &[u64]) -> GradedPoly {
        let terms = v
            .iter()
            .enumerate()
            .filter(|(_, &c)| c % ring.ctx.prime() != 0)
            .map(|(i, &c)| Term { mono: self.monos[i], coeff: Coeff::from_base(ring.ctx.reduce(c)) })
            .collect();
        ring.from_terms(terms)
    }
}

/// Expresses `f` in a list of linearly independent homogeneous polynomials
/// of equal degree. Fails with the residual when `f` is outside the span.
pub fn coordinates_in_basis(
    ring: &PolyRing,
    f: &GradedPoly,
    basis: &[GradedPoly],
) -> Result<Vec<u64>, PolyError> {
    use crate::matrix::FpMatrix;
    assert!(!basis.is_empty(), "empty basis");
    let d = basis[0].degree().expect("zero basis element") as u32;
    for b in basis {
        assert!(b.is_homogeneous() && b.degree() == Some(d as u16), "basis not equigraded");
    }
    let db = DegreeBasis::new(ring, d);
    let cols: Vec<Vec<u64>> = basis.iter().map(|b| db.coords(b)).collect();
    let a = FpMatrix::from_columns(db.len(), cols);
    let rhs = FpMatrix::from_columns(db.len(), vec![db.coords(f)]);
    match a.solve(&ring.ctx, &rhs) {
        Ok(x) => Ok(x.column(0)),
        Err(_) => {
            // project out the span to exhibit the residual
            let stack = a.hstack(&rhs);
            let (r, piv) = stack.rref(&ring.ctx);
            let mut resid = vec![0u64; db.len()];
            // the rref row with pivot in the rhs column encodes the failure;
            // reconstruct a residual representative instead
            let _ = (r, piv);
            for (i, v) in db.coords(f).iter().enumerate() {
                resid[i] = *v;
            }
            let rf = db.from_coords(ring, &resid);
            Err(PolyError::NotInSpan(Box::new(rf)))
        }
    }
}

/// Binomial coefficient as u64 (used for dimension counts in tests and
/// interpolation sizes).
pub fn binom(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc = 1u64;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring() -> PolyRing {
        PolyRing::plane(FpCtx::new(7))
    }

    fn dual_ring() -> PolyRing {
        PolyRing::plane(FpCtx::new(7)).with_mode(CoeffMode::SquareZero(1))
    }

    #[test]
    fn grevlex_ordering() {
        let r = ring();
        // x > y > z; x^2 > xy > y^2 > xz > yz > z^2 in grevlex
        let basis = r.graded_basis(2);
        let render: Vec<String> = basis
            .iter()
            .map(|m| {
                r.monomial(*m, Coeff::from_base(1)).render(&r)
            })
            .collect();
        assert_eq!(
            render,
            vec!["1*x^2", "1*x*y", "1*y^2", "1*x*z", "1*y*z", "1*z^2"]
        );
    }

    #[test]
    fn graded_basis_counts() {
        let r = ring();
        assert_eq!(r.graded_basis(9).len(), 55);
        assert_eq!(r.graded_basis(0).len(), 1);
        let r11 = PolyRing::canonical(FpCtx::new(7));
        assert_eq!(r11.graded_basis(2).len(), 66);
    }

    #[test]
    fn multiply_simple() {
        let r = ring();
        let x = r.var(0);
        let y = r.var(1);
        let xy = x.multiply(&r, &y).unwrap();
        assert_eq!(xy.terms.len(), 1);
        assert_eq!(xy.leading().unwrap().mono, Mono::from_exps(&[1, 1, 0]));
    }

    #[test]
    fn dual_square_vanishes() {
        let r = dual_ring();
        // (x + eps*y)(x - eps*y) = x^2 since eps^2 = 0
        let x = r.var(0);
        let ey = r.monomial(Mono::var(1), Coeff::eps(0, 1));
        let a = x.add(&r, &ey);
        let b = x.sub(&r, &ey);
        let prod = a.multiply(&r, &b).unwrap();
        let x2 = x.multiply(&r, &x).unwrap();
        assert_eq!(prod, x2);
    }

    #[test]
    fn flatness_shape_first_order() {
        // (f + eps h)(r + eps s) = f r + eps (f s + h r)
        let ring = dual_ring();
        let f = ring.var(0);
        let h = ring.var(1);
        let rr = ring.var(2);
        let s = ring.var(0);
        let left = f
            .add(&ring, &h.mul_term(&ring, &Mono::one(), &Coeff::eps(0, 1)))
            .multiply(&ring, &rr.add(&ring, &s.mul_term(&ring, &Mono::one(), &Coeff::eps(0, 1))))
            .unwrap();
        let base = f.multiply(&ring, &rr).unwrap();
        let eps_part = f
            .multiply(&ring, &s)
            .unwrap()
            .add(&ring, &h.multiply(&ring, &rr).unwrap());
        let expect = base.add(
            &ring,
            &eps_part.mul_term(&ring, &Mono::one(), &Coeff::eps(0, 1)),
        );
        assert_eq!(left, expect);
    }

    #[test]
    fn derivative_basic() {
        let r = ring();
        // d/dx (x^3 y) = 3 x^2 y
        let f = r.monomial(Mono::from_exps(&[3, 1, 0]), Coeff::from_base(1));
        let d = f.partial_derivative(&r, &[1, 0, 0]);
        assert_eq!(d.terms.len(), 1);
        assert_eq!(d.leading().unwrap().coeff.base, 3);
        assert_eq!(d.leading().unwrap().mono, Mono::from_exps(&[2, 1, 0]));
    }

    #[test]
    fn derivative_characteristic_hazard() {
        // second derivative of x^2 over GF(2) is 2 = 0
        let r2 = PolyRing::plane(FpCtx::new(2));
        let f = r2.monomial(Mono::from_exps(&[2, 0, 0]), Coeff::from_base(1));
        let d = f.partial_derivative(&r2, &[2, 0, 0]);
        assert!(d.is_zero());
    }

    #[test]
    fn derivative_commutes() {
        let r = ring();
        let mut rng = crate::rng::Rng::new(4);
        for _ in 0..10 {
            let terms: Vec<Term> = (0..8)
                .map(|_| Term {
                    mono: Mono::from_exps(&[
                        rng.below(5) as u32,
                        rng.below(5) as u32,
                        rng.below(5) as u32,
                    ]),
                    coeff: Coeff::from_base(rng.fp(7)),
                })
                .collect();
            let f = r.from_terms(terms);
            let dxy = f.partial_derivative(&r, &[1, 0, 0]).partial_derivative(&r, &[0, 1, 0]);
            let dyx = f.partial_derivative(&r, &[0, 1, 0]).partial_derivative(&r, &[1, 0, 0]);
            assert_eq!(dxy, dyx);
        }
    }

    #[test]
    fn evaluate_is_hom() {
        let r = ring();
        let mut rng = crate::rng::Rng::new(9);
        for _ in 0..20 {
            let rand_poly = |rng: &mut crate::rng::Rng| {
                let terms: Vec<Term> = (0..5)
                    .map(|_| Term {
                        mono: Mono::from_exps(&[
                            rng.below(4) as u32,
                            rng.below(4) as u32,
                            rng.below(4) as u32,
                        ]),
                        coeff: Coeff::from_base(rng.fp(7)),
                    })
                    .collect();
                r.from_terms(terms)
            };
            let f = rand_poly(&mut rng);
            let g = rand_poly(&mut rng);
            let pt = [rng.fp(7), rng.fp(7), rng.fp(7)];
            let fg = f.multiply(&r, &g).unwrap();
            let lhs = fg.evaluate(&r, &pt).base;
            let rhs = r.ctx.mul(f.evaluate(&r, &pt).base, g.evaluate(&r, &pt).base);
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn evaluate_sum_at_ones() {
        let r = ring();
        let f = r.var(0).add(&r, &r.var(1)).add(&r, &r.var(2));
        assert_eq!(f.evaluate(&r, &[1, 1, 1]).base, 3);
    }

    #[test]
    fn ring_axioms_random() {
        let r = ring();
        let mut rng = crate::rng::Rng::new(21);
        let rand_poly = |rng: &mut crate::rng::Rng| {
            let terms: Vec<Term> = (0..6)
                .map(|_| Term {
                    mono: Mono::from_exps(&[
                        rng.below(3) as u32,
                        rng.below(3) as u32,
                        rng.below(3) as u32,
                    ]),
                    coeff: Coeff::from_base(rng.fp(7)),
                })
                .collect();
            r.from_terms(terms)
        };
        for _ in 0..10 {
            let (f, g, h) = (rand_poly(&mut rng), rand_poly(&mut rng), rand_poly(&mut rng));
            let fg = f.multiply(&r, &g).unwrap();
            let gf = g.multiply(&r, &f).unwrap();
            assert_eq!(fg, gf);
            let a = fg.multiply(&r, &h).unwrap();
            let b = f.multiply(&r, &g.multiply(&r, &h).unwrap()).unwrap();
            assert_eq!(a, b);
            let d = f.multiply(&r, &g.add(&r, &h)).unwrap();
            let e = fg.add(&r, &f.multiply(&r, &h).unwrap());
            assert_eq!(d, e);
        }
    }

    #[test]
    fn coordinates_roundtrip() {
        let r = ring();
        let basis: Vec<GradedPoly> = r
            .graded_basis(2)
            .iter()
            .map(|m| r.monomial(*m, Coeff::from_base(1)))
            .collect();
        let c0 = coordinates_in_basis(&r, &basis[0], &basis).unwrap();
        assert_eq!(c0[0], 1);
        assert!(c0[1..].iter().all(|&v| v == 0));
        let zero = coordinates_in_basis(&r, &r.zero(), &basis).unwrap();
        assert!(zero.iter().all(|&v| v == 0));
    }

    #[test]
    fn coordinates_failure_has_residual() {
        let r = ring();
        let basis = vec![r.monomial(Mono::from_exps(&[2, 0, 0]), Coeff::from_base(1))];
        let f = r.monomial(Mono::from_exps(&[0, 2, 0]), Coeff::from_base(1));
        match coordinates_in_basis(&r, &f, &basis) {
            Err(PolyError::NotInSpan(res)) => assert!(!res.is_zero()),
            other => panic!("expected NotInSpan, got {other:?}"),
        }
    }

    #[test]
    fn binom_values() {
        assert_eq!(binom(11, 2), 55);
        assert_eq!(binom(12, 2), 66);
        assert_eq!(binom(8, 2), 28);
    }
}
