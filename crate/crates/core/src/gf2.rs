//! Bit-packed linear algebra over GF(2).

use std::fmt;

use rand::Rng;

/// Fixed-length vector over GF(2), packed 64 coordinates per word.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec { len, words: vec![0; len.div_ceil(64)] }
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        let mut v = BitVec::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            v.set(i, b);
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, b: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (i % 64);
        if b {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    pub fn flip(&mut self, i: usize) {
        self.words[i / 64] ^= 1u64 << (i % 64);
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    /// Parity of the coordinatewise product.
    pub fn dot(&self, other: &BitVec) -> bool {
        self.words.iter().zip(&other.words).fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones()) & 1 == 1
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.get(i))
    }

    pub fn first_one(&self) -> Option<usize> {
        self.words.iter().enumerate().find(|(_, &w)| w != 0).map(|(k, w)| k * 64 + w.trailing_zeros() as usize)
    }

    pub fn to_bits(&self) -> Vec<bool> {
        (0..self.len).map(|i| self.get(i)).collect()
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = (0..self.len).map(|i| if self.get(i) { '1' } else { '0' }).collect();
        write!(f, "BitVec({s})")
    }
}

/// Row-reduced echelon form of a set of rows with `cols` columns.
#[derive(Clone, Debug)]
pub struct Echelon {
    cols: usize,
    /// Reduced rows; `rows[k]` has its pivot at `pivots[k]` and zeros in every other pivot column.
    rows: Vec<BitVec>,
    pivots: Vec<usize>,
}

impl Echelon {
    /// Eliminates with pivots chosen in the given column priority order.
    pub fn with_order(rows: impl IntoIterator<Item = BitVec>, cols: usize, order: &[usize]) -> Self {
        let mut pending: Vec<BitVec> = rows.into_iter().filter(|r| !r.is_zero()).collect();
        let mut ech = Echelon { cols, rows: Vec::new(), pivots: Vec::new() };
        for &c in order {
            let Some(k) = pending.iter().position(|r| r.get(c)) else { continue };
            let pivot = pending.swap_remove(k);
            for r in pending.iter_mut().chain(ech.rows.iter_mut()) {
                if r.get(c) {
                    r.xor_assign(&pivot);
                }
            }
            pending.retain(|r| !r.is_zero());
            ech.rows.push(pivot);
            ech.pivots.push(c);
        }
        debug_assert!(pending.is_empty());
        ech
    }

    pub fn new(rows: impl IntoIterator<Item = BitVec>, cols: usize) -> Self {
        let order: Vec<usize> = (0..cols).collect();
        Self::with_order(rows, cols, &order)
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn rows(&self) -> &[BitVec] {
        &self.rows
    }

    /// Reduces `v` modulo the row space.
    pub fn reduce(&self, v: &BitVec) -> BitVec {
        let mut v = v.clone();
        for (r, &c) in self.rows.iter().zip(&self.pivots) {
            if v.get(c) {
                v.xor_assign(r);
            }
        }
        v
    }

    pub fn contains(&self, v: &BitVec) -> bool {
        self.reduce(v).is_zero()
    }

    /// Basis of `{x : r·x = 0 for every row r}`.
    pub fn nullspace(&self) -> Vec<BitVec> {
        let mut is_pivot = vec![false; self.cols];
        for &c in &self.pivots {
            is_pivot[c] = true;
        }
        (0..self.cols)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut x = BitVec::zeros(self.cols);
                x.set(f, true);
                for (r, &c) in self.rows.iter().zip(&self.pivots) {
                    if r.get(f) {
                        x.set(c, true);
                    }
                }
                x
            })
            .collect()
    }

    /// Rows whose pivot lies outside `eliminated`, restricted to have zero
    /// entries on `eliminated`: the projection of the constraint space
    /// after solving for the eliminated variables. Requires an order that put
    /// every `eliminated` column first.
    pub fn residual_rows(&self, eliminated: &[bool]) -> Vec<BitVec> {
        self.rows.iter().zip(&self.pivots).filter(|(_, &c)| !eliminated[c]).map(|(r, _)| r.clone()).collect()
    }
}

/// Uniform random element of the span of `basis`.
pub fn random_combination<R: Rng + ?Sized>(basis: &[BitVec], len: usize, rng: &mut R) -> BitVec {
    let mut v = BitVec::zeros(len);
    for b in basis {
        if rng.gen::<bool>() {
            v.xor_assign(b);
        }
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn basic_bit_ops() {
        let mut v = BitVec::zeros(130);
        v.set(0, true);
        v.set(129, true);
        assert_eq!(v.count_ones(), 2);
        assert_eq!(v.first_one(), Some(0));
        v.flip(0);
        assert_eq!(v.first_one(), Some(129));
        assert_eq!(v.ones().collect::<Vec<_>>(), vec![129]);
    }

    #[test]
    fn rank_and_nullspace() {
        let rows = vec![
            BitVec::from_bits(&[true, true, false, false]),
            BitVec::from_bits(&[false, true, true, false]),
            BitVec::from_bits(&[true, false, true, false]),
        ];
        let e = Echelon::new(rows.clone(), 4);
        assert_eq!(e.rank(), 2);
        let ns = e.nullspace();
        assert_eq!(ns.len(), 2);
        for x in &ns {
            for r in &rows {
                assert!(!r.dot(x));
            }
        }
        assert!(e.contains(&BitVec::from_bits(&[true, false, true, false])));
        assert!(!e.contains(&BitVec::from_bits(&[false, false, false, true])));
    }

    #[test]
    fn random_combination_stays_in_span() {
        let rows = vec![BitVec::from_bits(&[true, true, true])];
        let e = Echelon::new(rows.clone(), 3);
        let ns = e.nullspace();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let x = random_combination(&ns, 3, &mut rng);
            assert!(!rows[0].dot(&x));
        }
    }
}
