//! Polynomial reduction with geobuckets.
//!
//! A geobucket keeps the partially reduced polynomial as a stack of sorted
//! term lists of geometrically growing capacity, so a long chain of
//! tail-subtractions stays near-linear instead of quadratic. Buckets are
//! sorted ascending with the leading term last, making head operations O(1).

use crate::poly::{Coeff, GradedPoly, Mono, PolyRing, Term};
use std::cmp::Ordering;

const BUCKET_BASE: usize = 4;

pub struct Geobucket<'r> {
    ring: &'r PolyRing,
    buckets: Vec<Vec<Term>>,
}

impl<'r> Geobucket<'r> {
    /// Builds from a descending-sorted term list (polynomial convention).
    pub fn new(ring: &'r PolyRing, mut terms: Vec<Term>) -> Geobucket<'r> {
        terms.reverse();
        let mut g = Geobucket { ring, buckets: Vec::new() };
        g.add_ascending(terms);
        g
    }

    fn capacity(i: usize) -> usize {
        BUCKET_BASE.pow(i as u32 + 1)
    }

    /// Adds a descending-sorted term list.
    pub fn add_sorted(&mut self, mut terms: Vec<Term>) {
        terms.reverse();
        self.add_ascending(terms);
    }

    fn add_ascending(&mut self, terms: Vec<Term>) {
        if terms.is_empty() {
            return;
        }
        let mut level = 0;
        while Self::capacity(level) < terms.len() {
            level += 1;
        }
        let mut carry = terms;
        loop {
            if self.buckets.len() <= level {
                self.buckets.resize_with(level + 1, Vec::new);
            }
            if self.buckets[level].is_empty() {
                self.buckets[level] = carry;
                return;
            }
            let old = std::mem::take(&mut self.buckets[level]);
            carry = merge_ascending(self.ring, old, carry);
            if carry.len() <= Self::capacity(level) {
                self.buckets[level] = carry;
                return;
            }
            level += 1;
        }
    }

    /// Leading surviving term, combining bucket heads; None when zero.
    pub fn peek_lead(&mut self) -> Option<Term> {
        loop {
            let mut best: Option<(usize, Mono)> = None;
            for (i, b) in self.buckets.iter().enumerate() {
                if let Some(t) = b.last() {
                    match &best {
                        None => best = Some((i, t.mono)),
                        Some((_, m)) => {
                            if self.ring.cmp_mono(&t.mono, m) == Ordering::Greater {
                                best = Some((i, t.mono));
                            }
                        }
                    }
                }
            }
            let (i0, mono) = best?;
            let mut coeff = Coeff::from_base(0);
            for b in self.buckets.iter_mut() {
                if b.last().map(|t| t.mono == mono).unwrap_or(false) {
                    let t = b.pop().unwrap();
                    coeff = coeff.add(&self.ring.ctx, &t.coeff);
                }
            }
            if coeff.is_zero() {
                continue;
            }
            self.buckets[i0].push(Term { mono, coeff: coeff.clone() });
            return Some(Term { mono, coeff });
        }
    }

    /// Removes the current leading term (call right after `peek_lead`).
    pub fn pop_lead(&mut self, lead: &Term) {
        for b in self.buckets.iter_mut() {
            if b.last().map(|t| t.mono == lead.mono).unwrap_or(false) {
                b.pop();
                return;
            }
        }
        unreachable!("pop_lead without matching head");
    }

    pub fn into_poly(mut self) -> GradedPoly {
        let mut acc: Vec<Term> = Vec::new();
        for b in std::mem::take(&mut self.buckets) {
            acc = merge_ascending(self.ring, acc, b);
        }
        acc.reverse();
        GradedPoly { sig: self.ring.sig(), terms: acc }
    }
}

fn merge_ascending(ring: &PolyRing, a: Vec<Term>, b: Vec<Term>) -> Vec<Term> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match ring.cmp_mono(&a[i].mono, &b[j].mono) {
            Ordering::Less => {
                out.push(a[i].clone());
                i += 1;
            }
            Ordering::Greater => {
                out.push(b[j].clone());
                j += 1;
            }
            Ordering::Equal => {
                let c = a[i].coeff.add(&ring.ctx, &b[j].coeff);
                if !c.is_zero() {
                    out.push(Term { mono: a[i].mono, coeff: c });
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// A reducer set: monic polynomials with cached lead data and a support
/// mask for fast divisibility rejection.
#[derive(Clone, Debug, Default)]
pub struct ReducerSet {
    pub polys: Vec<GradedPoly>,
    pub leads: Vec<Mono>,
    pub masks: Vec<u16>,
}

pub fn support_mask(m: &Mono) -> u16 {
    let mut mask = 0u16;
    for (i, &e) in m.exp.iter().enumerate() {
        if e > 0 {
            mask |= 1 << i;
        }
    }
    mask
}

impl ReducerSet {
    pub fn new(ring: &PolyRing, polys: Vec<GradedPoly>) -> ReducerSet {
        let mut rs = ReducerSet { polys: Vec::new(), leads: Vec::new(), masks: Vec::new() };
        for p in polys {
            rs.push(ring, p);
        }
        rs
    }

    /// Inserts a nonzero polynomial, normalized monic.
    pub fn push(&mut self, ring: &PolyRing, p: GradedPoly) {
        assert!(!p.is_zero());
        let lc = p.leading().unwrap().coeff.base;
        assert!(lc != 0, "lead coefficient must be a unit");
        let monic = p.scale(ring, ring.ctx.inv(lc));
        let lead = monic.leading().unwrap().mono;
        self.leads.push(lead);
        self.masks.push(support_mask(&lead));
        self.polys.push(monic);
    }

    /// First reducer whose lead divides `m` (deterministic order).
    #[inline]
    pub fn find(&self, m: &Mono, mask: u16, skip: Option<usize>) -> Option<usize> {
        for i in 0..self.leads.len() {
            if Some(i) == skip {
                continue;
            }
            if self.masks[i] & !mask != 0 {
                continue;
            }
            if self.leads[i].divides(m) {
                return Some(i);
            }
        }
        None
    }
}

/// Remainder of `f` under full reduction by the (not necessarily reduced)
/// basis; no surviving term is divisible by any lead of the set.
pub fn normal_form(ring: &PolyRing, rs: &ReducerSet, f: &GradedPoly) -> GradedPoly {
    normal_form_skip(ring, rs, f, None)
}

/// Normal form that may exclude one reducer (used by auto-reduction).
pub fn normal_form_skip(ring: &PolyRing, rs: &ReducerSet, f: &GradedPoly, skip: Option<usize>) -> GradedPoly {
    let mut bucket = Geobucket::new(ring, f.terms.clone());
    let mut out: Vec<Term> = Vec::new();
    while let Some(lead) = bucket.peek_lead() {
        let mask = support_mask(&lead.mono);
        match rs.find(&lead.mono, mask, skip) {
            Some(i) => {
                let g = &rs.polys[i];
                let q = rs.leads[i].div_into(&lead.mono).unwrap();
                // subtract coeff * q * g; the head cancels exactly
                let scaled = g.mul_term(ring, &q, &lead.coeff.neg(&ring.ctx));
                bucket.add_sorted(scaled.terms);
            }
            None => {
                bucket.pop_lead(&lead);
                out.push(lead);
            }
        }
    }
    GradedPoly { sig: ring.sig(), terms: out }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fp::FpCtx;
    use crate::poly::{CoeffMode, MonomialOrder};

    fn ring() -> PolyRing {
        PolyRing::new(FpCtx::new(7), &["x", "y", "z"], MonomialOrder::GrevLex, CoeffMode::Field)
    }

    #[test]
    fn geobucket_roundtrip() {
        let r = ring();
        let f = r.var(0).add(&r, &r.var(1)).add(&r, &r.constant(3));
        let g = Geobucket::new(&r, f.terms.clone());
        assert_eq!(g.into_poly(), f);
    }

    #[test]
    fn normal_form_in_ideal_is_zero() {
        let r = ring();
        let x = r.var(0);
        let y = r.var(1);
        let rs = ReducerSet::new(&r, vec![x.clone(), y.clone()]);
        let f = x
            .multiply(&r, &x)
            .unwrap()
            .add(&r, &y.scale(&r, 3));
        assert!(normal_form(&r, &rs, &f).is_zero());
    }

    #[test]
    fn normal_form_of_one_vs_variables() {
        let r = ring();
        let rs = ReducerSet::new(&r, vec![r.var(0), r.var(1), r.var(2)]);
        let one = r.one();
        assert_eq!(normal_form(&r, &rs, &one), one);
    }
}
