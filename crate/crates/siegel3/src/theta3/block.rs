//! Dense Laurent polynomials in three variables on a shifted lattice.
//!
//! A block stores coefficients of u^e0 v^e1 w^e2 for e = lo + step * i,
//! 0 <= i < dim. A dimension of extent 1 has step 0.

use num_integer::Integer;

pub type Coef = i128;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Layout {
    pub lo: [i32; 3],
    pub step: [i32; 3],
    pub dim: [usize; 3],
}

impl Layout {
    pub fn len(&self) -> usize {
        self.dim[0] * self.dim[1] * self.dim[2]
    }

    pub fn hi(&self, d: usize) -> i32 {
        self.lo[d] + self.step[d] * (self.dim[d] as i32 - 1)
    }

    fn from_bounds(lo: [i32; 3], hi: [i32; 3], step: [i32; 3]) -> Layout {
        let mut l = Layout { lo, step, dim: [1; 3] };
        for d in 0..3 {
            if step[d] == 0 || hi[d] == lo[d] {
                l.step[d] = 0;
                l.dim[d] = 1;
            } else {
                l.dim[d] = ((hi[d] - lo[d]) / step[d]) as usize + 1;
            }
        }
        l
    }

    /// Smallest layout containing both.
    pub fn union(&self, o: &Layout) -> Layout {
        let mut lo = [0; 3];
        let mut hi = [0; 3];
        let mut step = [0; 3];
        for d in 0..3 {
            lo[d] = self.lo[d].min(o.lo[d]);
            hi[d] = self.hi(d).max(o.hi(d));
            step[d] = self.step[d].gcd(&o.step[d]).gcd(&(self.lo[d] - o.lo[d]).abs());
        }
        Layout::from_bounds(lo, hi, step)
    }

    /// Layout of the product of two blocks.
    pub fn product(&self, o: &Layout) -> Layout {
        let mut lo = [0; 3];
        let mut hi = [0; 3];
        let mut step = [0; 3];
        for d in 0..3 {
            lo[d] = self.lo[d] + o.lo[d];
            hi[d] = self.hi(d) + o.hi(d);
            step[d] = self.step[d].gcd(&o.step[d]);
        }
        Layout::from_bounds(lo, hi, step)
    }

    /// Position of exponent e, if it lies on the lattice.
    pub fn position(&self, e: [i32; 3]) -> Option<usize> {
        let mut idx = 0usize;
        for d in 0..3 {
            let off = e[d] - self.lo[d];
            let p = if self.dim[d] == 1 {
                if off != 0 {
                    return None;
                }
                0
            } else {
                if off < 0 || off % self.step[d] != 0 {
                    return None;
                }
                let p = (off / self.step[d]) as usize;
                if p >= self.dim[d] {
                    return None;
                }
                p
            };
            idx = idx * self.dim[d] + p;
        }
        Some(idx)
    }

    pub fn exponent(&self, mut idx: usize) -> [i32; 3] {
        let mut e = [0; 3];
        for d in (0..3).rev() {
            let p = idx % self.dim[d];
            idx /= self.dim[d];
            e[d] = self.lo[d] + self.step[d] * p as i32;
        }
        e
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub layout: Layout,
    pub data: Vec<Coef>,
}

impl Block {
    pub fn zeros(layout: Layout) -> Block {
        Block { data: vec![0; layout.len()], layout }
    }

    pub fn monomial(e: [i32; 3], c: Coef) -> Block {
        Block { layout: Layout { lo: e, step: [0; 3], dim: [1; 3] }, data: vec![c] }
    }

    /// Build from (exponent, coefficient) pairs; None if all coefficients vanish.
    pub fn from_terms(terms: &[([i32; 3], Coef)]) -> Option<Block> {
        let nz: Vec<&([i32; 3], Coef)> = terms.iter().filter(|t| t.1 != 0).collect();
        let first = nz.first()?;
        let mut lo = first.0;
        let mut hi = first.0;
        for (e, _) in &nz {
            for d in 0..3 {
                lo[d] = lo[d].min(e[d]);
                hi[d] = hi[d].max(e[d]);
            }
        }
        let mut step = [0; 3];
        for (e, _) in &nz {
            for d in 0..3 {
                step[d] = step[d].gcd(&(e[d] - lo[d]));
            }
        }
        let mut b = Block::zeros(Layout::from_bounds(lo, hi, step));
        for (e, c) in nz {
            let p = b.layout.position(*e).unwrap();
            b.data[p] += *c;
        }
        b.normalized()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&c| c == 0)
    }

    pub fn terms(&self) -> impl Iterator<Item = ([i32; 3], Coef)> + '_ {
        self.data.iter().enumerate().filter(|(_, c)| **c != 0).map(|(i, c)| (self.layout.exponent(i), *c))
    }

    pub fn coeff(&self, e: [i32; 3]) -> Coef {
        self.layout.position(e).map_or(0, |p| self.data[p])
    }

    /// Shrink to the support; None if zero.
    pub fn normalized(self) -> Option<Block> {
        let terms: Vec<([i32; 3], Coef)> = self.terms().collect();
        if terms.is_empty() {
            return None;
        }
        let mut lo = terms[0].0;
        let mut hi = terms[0].0;
        for (e, _) in &terms {
            for d in 0..3 {
                lo[d] = lo[d].min(e[d]);
                hi[d] = hi[d].max(e[d]);
            }
        }
        let mut step = [0; 3];
        for (e, _) in &terms {
            for d in 0..3 {
                step[d] = step[d].gcd(&(e[d] - lo[d]));
            }
        }
        let layout = Layout::from_bounds(lo, hi, step);
        if layout == self.layout {
            return Some(self);
        }
        let mut b = Block::zeros(layout);
        for (e, c) in terms {
            let p = b.layout.position(e).unwrap();
            b.data[p] = c;
        }
        Some(b)
    }

    /// Copy into a (containing) layout.
    pub fn relayout(&self, layout: Layout) -> Block {
        if layout == self.layout {
            return self.clone();
        }
        let mut b = Block::zeros(layout);
        for (e, c) in self.terms() {
            let p = layout.position(e).expect("layout must contain block");
            b.data[p] = c;
        }
        b
    }

    /// self += c * other, growing the layout if needed.
    pub fn add_scaled(&mut self, other: &Block, c: Coef) {
        let u = self.layout.union(&other.layout);
        if u != self.layout {
            *self = self.relayout(u);
        }
        for (e, x) in other.terms() {
            let p = self.layout.position(e).unwrap();
            self.data[p] += c * x;
        }
    }

    /// self += a * b; self's layout must contain a.layout.product(b.layout).
    pub fn add_product(&mut self, a: &Block, b: &Block) {
        let t = self.layout;
        let mut ra = [0usize; 3];
        let mut rb = [0usize; 3];
        let mut base = [0usize; 3];
        for d in 0..3 {
            if t.dim[d] > 1 {
                ra[d] = if a.layout.dim[d] > 1 { (a.layout.step[d] / t.step[d]) as usize } else { 0 };
                rb[d] = if b.layout.dim[d] > 1 { (b.layout.step[d] / t.step[d]) as usize } else { 0 };
                base[d] = ((a.layout.lo[d] + b.layout.lo[d] - t.lo[d]) / t.step[d]) as usize;
            }
        }
        let s1 = t.dim[2];
        let s0 = t.dim[1] * s1;
        let [_, bd1, bd2] = b.layout.dim;
        let [ad0, ad1, ad2] = a.layout.dim;
        for i0 in 0..ad0 {
            for i1 in 0..ad1 {
                for i2 in 0..ad2 {
                    let ca = a.data[(i0 * ad1 + i1) * ad2 + i2];
                    if ca == 0 {
                        continue;
                    }
                    for j0 in 0..b.layout.dim[0] {
                        let p0 = (base[0] + i0 * ra[0] + j0 * rb[0]) * s0;
                        for j1 in 0..bd1 {
                            let p1 = p0 + (base[1] + i1 * ra[1] + j1 * rb[1]) * s1;
                            let p2 = p1 + base[2] + i2 * ra[2];
                            let brow = &b.data[(j0 * bd1 + j1) * bd2..(j0 * bd1 + j1 + 1) * bd2];
                            if rb[2] == 1 {
                                let trow = &mut self.data[p2..p2 + bd2];
                                for (t, x) in trow.iter_mut().zip(brow) {
                                    *t += ca * x;
                                }
                            } else {
                                for (j2, x) in brow.iter().enumerate() {
                                    self.data[p2 + j2 * rb[2]] += ca * x;
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    pub fn mul(&self, other: &Block) -> Option<Block> {
        let mut t = Block::zeros(self.layout.product(&other.layout));
        t.add_product(self, other);
        t.normalized()
    }

    pub fn scale(&mut self, c: Coef) {
        for x in self.data.iter_mut() {
            *x *= c;
        }
    }

    pub fn shift(&mut self, e: [i32; 3]) {
        for d in 0..3 {
            self.layout.lo[d] += e[d];
        }
    }

    /// Exact division of every coefficient by an integer.
    pub fn div_exact(&mut self, c: Coef) -> bool {
        if self.data.iter().any(|x| x % c != 0) {
            return false;
        }
        for x in self.data.iter_mut() {
            *x /= c;
        }
        true
    }

    /// Content (gcd of coefficients).
    pub fn content(&self) -> Coef {
        self.data.iter().fold(0, |g: Coef, &x| g.gcd(&x))
    }

    /// Apply an exponent map (used for variable permutations).
    pub fn map_exponents(&self, f: impl Fn([i32; 3]) -> [i32; 3]) -> Option<Block> {
        let terms: Vec<([i32; 3], Coef)> = self.terms().map(|(e, c)| (f(e), c)).collect();
        Block::from_terms(&terms)
    }

    /// Exact Laurent division self / d. Quotient exponents must lie in the
    /// box [qlo, qhi]; returns None if the division is not exact.
    pub fn div_laurent(&self, d: &Block, qlo: [i32; 3], qhi: [i32; 3]) -> Option<Option<Block>> {
        use std::collections::BTreeMap;
        // Work on sparse maps ordered lexicographically; the lex-largest
        // term of the divisor is used as the pivot.
        let mut r: BTreeMap<[i32; 3], Coef> = self.terms().collect();
        let dterms: Vec<([i32; 3], Coef)> = d.terms().collect();
        let (dlead, dc) = *dterms.iter().max_by_key(|t| t.0)?;
        let mut q: Vec<([i32; 3], Coef)> = Vec::new();
        while let Some((&e, &c)) = r.iter().next_back() {
            let qe = [e[0] - dlead[0], e[1] - dlead[1], e[2] - dlead[2]];
            if (0..3).any(|k| qe[k] < qlo[k] || qe[k] > qhi[k]) || c % dc != 0 {
                return None;
            }
            let qc = c / dc;
            for (de, x) in &dterms {
                let k = [qe[0] + de[0], qe[1] + de[1], qe[2] + de[2]];
                let v = r.entry(k).or_insert(0);
                *v -= qc * x;
                if *v == 0 {
                    r.remove(&k);
                }
            }
            q.push((qe, qc));
        }
        Some(Block::from_terms(&q))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::BTreeMap;

    fn naive(a: &[([i32; 3], Coef)], b: &[([i32; 3], Coef)]) -> BTreeMap<[i32; 3], Coef> {
        let mut m = BTreeMap::new();
        for (ea, ca) in a {
            for (eb, cb) in b {
                *m.entry([ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]]).or_insert(0) += ca * cb;
            }
        }
        m.retain(|_, v| *v != 0);
        m
    }

    fn terms_strategy() -> impl Strategy<Value = Vec<([i32; 3], Coef)>> {
        prop::collection::vec(((-3i32..4, -2i32..3, -4i32..5), -5i128..6), 1..8)
            .prop_map(|v| v.into_iter().map(|((a, b, c), x)| ([2 * a, b, 3 * c + 1], x)).collect())
    }

    proptest! {
        #[test]
        fn product_matches_naive(a in terms_strategy(), b in terms_strategy()) {
            let (Some(ba), Some(bb)) = (Block::from_terms(&a), Block::from_terms(&b)) else {
                return Ok(());
            };
            let got: BTreeMap<[i32; 3], Coef> = ba.mul(&bb).map(|p| p.terms().collect()).unwrap_or_default();
            let ta: BTreeMap<_, _> = ba.terms().collect();
            let tb: BTreeMap<_, _> = bb.terms().collect();
            let va: Vec<_> = ta.into_iter().collect();
            let vb: Vec<_> = tb.into_iter().collect();
            prop_assert_eq!(got, naive(&va, &vb));
        }

        #[test]
        fn add_scaled_matches_naive(a in terms_strategy(), b in terms_strategy()) {
            let (Some(mut ba), Some(bb)) = (Block::from_terms(&a), Block::from_terms(&b)) else {
                return Ok(());
            };
            let mut expect: BTreeMap<[i32; 3], Coef> = ba.terms().collect();
            for (e, c) in bb.terms() {
                *expect.entry(e).or_insert(0) += 3 * c;
            }
            expect.retain(|_, v| *v != 0);
            ba.add_scaled(&bb, 3);
            let got: BTreeMap<_, _> = ba.terms().collect();
            prop_assert_eq!(got, expect);
        }

        #[test]
        fn laurent_division_roundtrip(a in terms_strategy(), b in terms_strategy()) {
            let (Some(ba), Some(bb)) = (Block::from_terms(&a), Block::from_terms(&b)) else {
                return Ok(());
            };
            let p = ba.mul(&bb).unwrap();
            let q = p.div_laurent(&bb, [-100; 3], [100; 3]).expect("exact").unwrap();
            let qt: BTreeMap<_, _> = q.terms().collect();
            let at: BTreeMap<_, _> = ba.terms().collect();
            prop_assert_eq!(qt, at);
        }
    }

    #[test]
    fn non_exact_division_detected() {
        let a = Block::from_terms(&[([0, 0, 0], 1), ([1, 0, 0], 1)]).unwrap();
        let d = Block::from_terms(&[([0, 0, 0], 1), ([0, 1, 0], 1)]).unwrap();
        assert!(a.div_laurent(&d, [-5; 3], [5; 3]).is_none());
    }
}
