//! Hilbert series of monomial quotients via the pivot-variable recursion,
//! and the dimension/degree/Hilbert-polynomial data derived from it.

use crate::poly::Mono;

/// Integer polynomial in `t`, dense coefficients from degree 0.
pub type ZPoly = Vec<i64>;

fn zp_mul(a: &ZPoly, b: &ZPoly) -> ZPoly {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![0i64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn zp_add_shifted(a: &mut ZPoly, b: &ZPoly, shift: usize) {
    if a.len() < b.len() + shift {
        a.resize(b.len() + shift, 0);
    }
    for (j, &y) in b.iter().enumerate() {
        a[j + shift] += y;
    }
}

fn zp_eval_one(a: &ZPoly) -> i64 {
    a.iter().sum()
}

/// Divides by (1-t) in place when possible: returns quotient if the value
/// at t=1 is zero.
fn zp_div_one_minus_t(a: &ZPoly) -> Option<ZPoly> {
    if a.is_empty() || zp_eval_one(a) != 0 {
        return None;
    }
    // synthetic division: a(t) = (1-t) q(t); q_i = a_0 + a_1 + ... + a_i
    let mut q = vec![0i64; a.len().saturating_sub(1)];
    let mut acc = 0i64;
    for i in 0..q.len() {
        acc += a[i];
        q[i] = acc;
    }
    Some(q)
}

/// Removes generators divisible by another generator.
fn minimalize(mut gens: Vec<Mono>) -> Vec<Mono> {
    gens.sort_by_key(|m| m.deg);
    gens.dedup();
    let mut out: Vec<Mono> = Vec::new();
    'outer: for g in gens {
        for h in &out {
            if h.divides(&g) {
                continue 'outer;
            }
        }
        out.push(g);
    }
    out
}

/// Numerator N(t) of the Hilbert series `N(t)/(1-t)^nvars` of `S/I` for the
/// monomial ideal `I` spanned by `gens`.
pub fn hilbert_numerator(nvars: usize, gens: &[Mono]) -> ZPoly {
    let gens = minimalize(gens.to_vec());
    numerator_rec(nvars, gens)
}

fn numerator_rec(nvars: usize, gens: Vec<Mono>) -> ZPoly {
    if gens.is_empty() {
        return vec![1];
    }
    if gens.iter().any(|g| g.deg == 0) {
        return vec![0];
    }
    // pairwise coprime generators form a regular sequence
    let coprime = gens
        .iter()
        .enumerate()
        .all(|(i, g)| gens.iter().skip(i + 1).all(|h| g.is_coprime(h)));
    if coprime {
        let mut acc: ZPoly = vec![1];
        for g in &gens {
            let mut factor = vec![0i64; g.deg as usize + 1];
            factor[0] = 1;
            factor[g.deg as usize] = -1;
            acc = zp_mul(&acc, &factor);
        }
        return acc;
    }
    // pivot: the variable hitting the most generators
    let mut counts = [0usize; crate::poly::MAX_VARS];
    for g in &gens {
        for (v, &e) in g.exp.iter().enumerate() {
            if e > 0 {
                counts[v] += 1;
            }
        }
    }
    let pivot = (0..nvars).max_by_key(|&v| counts[v]).unwrap();
    // N(I) = N(I + (x)) + t * N(I : x)
    let mut with_x: Vec<Mono> = vec![Mono::var(pivot)];
    for g in &gens {
        if g.exp[pivot] == 0 {
            with_x.push(*g);
        }
    }
    let mut quo: Vec<Mono> = Vec::with_capacity(gens.len());
    for g in &gens {
        if g.exp[pivot] > 0 {
            let mut m = *g;
            m.exp[pivot] -= 1;
            m.deg -= 1;
            quo.push(m);
        } else {
            quo.push(*g);
        }
    }
    let a = numerator_rec(nvars, minimalize(with_x));
    let b = numerator_rec(nvars, minimalize(quo));
    let mut out = a;
    zp_add_shifted(&mut out, &b, 1);
    out
}

/// Dimension, degree and Hilbert data of a graded quotient `S/I`, read off
/// the lead-term ideal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HilbertData {
    /// Krull dimension of S/I (projective dimension of the scheme is one
    /// less).
    pub krull_dim: usize,
    pub degree: i64,
    /// Numerator of the Hilbert series over (1-t)^nvars.
    pub numerator: ZPoly,
    /// Numerator with all (1-t) factors cancelled.
    pub reduced_numerator: ZPoly,
    pub nvars: usize,
}

impl HilbertData {
    pub fn from_leads(nvars: usize, leads: &[Mono]) -> HilbertData {
        let mut numerator = hilbert_numerator(nvars, leads);
        while numerator.last() == Some(&0) {
            numerator.pop();
        }
        if numerator.is_empty() {
            // unit ideal: the zero ring
            return HilbertData {
                krull_dim: 0,
                degree: 0,
                numerator: vec![0],
                reduced_numerator: vec![],
                nvars,
            };
        }
        let mut reduced = numerator.clone();
        let mut cancels = 0usize;
        while let Some(q) = zp_div_one_minus_t(&reduced) {
            reduced = q;
            cancels += 1;
        }
        // Krull dimension = pole order at t = 1
        let krull_dim = nvars - cancels;
        let degree = zp_eval_one(&reduced);
        HilbertData { krull_dim, degree, numerator, reduced_numerator: reduced, nvars }
    }

    /// Projective dimension of the associated scheme (-1 for empty).
    pub fn proj_dim(&self) -> i64 {
        self.krull_dim as i64 - 1
    }

    /// Exact evaluation of the Hilbert polynomial at `d`.
    pub fn hilbert_poly_at(&self, d: i64) -> i64 {
        let t = self.krull_dim;
        if t == 0 {
            return 0;
        }
        let mut acc: i128 = 0;
        for (i, &c) in self.reduced_numerator.iter().enumerate() {
            acc += c as i128 * binom_poly(d - i as i64 + t as i64 - 1, t - 1);
        }
        acc as i64
    }

    /// Hilbert function of S/I at degree `d` (from the full numerator).
    pub fn hilbert_fn_at(&self, d: i64) -> i64 {
        if d < 0 {
            return 0;
        }
        let mut acc: i128 = 0;
        for (i, &c) in self.numerator.iter().enumerate() {
            let k = d - i as i64;
            if k < 0 {
                continue;
            }
            acc += c as i128 * binom_poly(k + self.nvars as i64 - 1, self.nvars - 1);
        }
        acc as i64
    }

    /// Genus of a one-dimensional projective scheme: 1 - HP(0).
    pub fn curve_genus(&self) -> Option<i64> {
        (self.krull_dim == 2).then(|| 1 - self.hilbert_poly_at(0))
    }
}

/// Polynomial extension of the binomial coefficient C(n, k) to negative n.
fn binom_poly(n: i64, k: usize) -> i128 {
    let mut num: i128 = 1;
    for i in 0..k {
        num *= (n - i as i64) as i128;
    }
    let mut den: i128 = 1;
    for i in 1..=k {
        den *= i as i128;
    }
    num / den
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_ideal_in_eleven_vars() {
        let h = HilbertData::from_leads(11, &[]);
        assert_eq!(h.krull_dim, 11);
        assert_eq!(h.proj_dim(), 10);
        assert_eq!(h.degree, 1);
    }

    #[test]
    fn hypersurface() {
        // x^3 in 3 variables: plane cubic curve, degree 3, dim 2
        let h = HilbertData::from_leads(3, &[Mono::from_exps(&[3, 0, 0])]);
        assert_eq!(h.krull_dim, 2);
        assert_eq!(h.degree, 3);
        // genus of a plane cubic
        assert_eq!(h.curve_genus(), Some(1));
    }

    #[test]
    fn twisted_cubic_lead_ideal() {
        // grevlex leads of the twisted cubic: x1^2, x1 x2, x2^2
        let leads = vec![
            Mono::from_exps(&[0, 2, 0, 0]),
            Mono::from_exps(&[0, 1, 1, 0]),
            Mono::from_exps(&[0, 0, 2, 0]),
        ];
        let h = HilbertData::from_leads(4, &leads);
        assert_eq!(h.krull_dim, 2);
        assert_eq!(h.degree, 3);
        assert_eq!(h.curve_genus(), Some(0));
        // hilbert function of the cubic curve: 3d+1
        assert_eq!(h.hilbert_fn_at(0), 1);
        assert_eq!(h.hilbert_fn_at(1), 4);
        assert_eq!(h.hilbert_fn_at(5), 16);
    }

    #[test]
    fn full_maximal_ideal() {
        let leads = vec![
            Mono::from_exps(&[1, 0, 0]),
            Mono::from_exps(&[0, 1, 0]),
            Mono::from_exps(&[0, 0, 1]),
        ];
        let h = HilbertData::from_leads(3, &leads);
        assert_eq!(h.krull_dim, 0);
        assert_eq!(h.degree, 1); // the point-as-cone has length 1
        assert_eq!(h.hilbert_fn_at(0), 1);
        assert_eq!(h.hilbert_fn_at(1), 0);
    }
}
