//! Invariant factors over `Z/p^K` by layered elimination on dense `u16` matrices.
//!
//! Over the local ring `Z/p^K` a matrix is equivalent to a diagonal matrix whose
//! entries are powers of `p`. The reduction pivots on units, and once no unit is
//! left every remaining entry is divisible by `p` and the block is divided by `p`.

use serde::{Deserialize, Serialize};

/// Dense matrix with entries reduced modulo `modulus`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModMatrix {
    rows: usize,
    cols: usize,
    modulus: u16,
    data: Vec<u16>,
}

impl ModMatrix {
    pub fn zeros(rows: usize, cols: usize, modulus: u16) -> Self {
        assert!(modulus >= 2 && (modulus as u32) * (modulus as u32) < u16::MAX as u32);
        ModMatrix { rows, cols, modulus, data: vec![0; rows * cols] }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn modulus(&self) -> u16 {
        self.modulus
    }

    pub fn get(&self, i: usize, j: usize) -> u16 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        self.data[i * self.cols + j] = v.rem_euclid(self.modulus as i64) as u16;
    }

    pub fn add_to(&mut self, i: usize, j: usize, v: i64) {
        let m = self.modulus as i64;
        let cur = self.data[i * self.cols + j] as i64;
        self.data[i * self.cols + j] = (cur + v.rem_euclid(m)).rem_euclid(m) as u16;
    }

    pub fn mul(&self, other: &ModMatrix) -> ModMatrix {
        assert_eq!(self.cols, other.rows);
        assert_eq!(self.modulus, other.modulus);
        let m = self.modulus as u32;
        let mut out = ModMatrix::zeros(self.rows, other.cols, self.modulus);
        let mut acc = vec![0u32; other.cols];
        for i in 0..self.rows {
            acc.iter_mut().for_each(|x| *x = 0);
            for k in 0..self.cols {
                let a = self.get(i, k) as u32;
                if a == 0 {
                    continue;
                }
                let row = &other.data[k * other.cols..(k + 1) * other.cols];
                for (x, &b) in acc.iter_mut().zip(row) {
                    *x = (*x + a * b as u32) % m;
                }
            }
            for (j, &x) in acc.iter().enumerate() {
                out.data[i * other.cols + j] = x as u16;
            }
        }
        out
    }

    pub fn identity(n: usize, modulus: u16) -> Self {
        let mut m = Self::zeros(n, n, modulus);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn sub(&self, other: &ModMatrix) -> ModMatrix {
        assert_eq!((self.rows, self.cols, self.modulus), (other.rows, other.cols, other.modulus));
        let m = self.modulus;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| (a + m - b) % m).collect();
        ModMatrix { rows: self.rows, cols: self.cols, modulus: m, data }
    }

    pub fn add(&self, other: &ModMatrix) -> ModMatrix {
        assert_eq!((self.rows, self.cols, self.modulus), (other.rows, other.cols, other.modulus));
        let m = self.modulus;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| (a + b) % m).collect();
        ModMatrix { rows: self.rows, cols: self.cols, modulus: m, data }
    }
}

/// Invariant factors of a matrix over `Z/p^K`.
#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct LocalProfile {
    /// `counts[e]` is the number of invariant factors equal to `p^e`, for `e < K`.
    pub counts: Vec<usize>,
}

impl LocalProfile {
    /// Number of invariant factors not divisible by `p^K`.
    pub fn rank(&self) -> usize {
        self.counts.iter().sum()
    }

    /// Exponents of the nontrivial cyclic summands of the cokernel's torsion visible below `p^K`.
    pub fn torsion_exponents(&self) -> Vec<u32> {
        let mut out = Vec::new();
        for (e, &c) in self.counts.iter().enumerate().skip(1) {
            out.extend(std::iter::repeat(e as u32).take(c));
        }
        out
    }
}

/// In-place local elimination: pivots move to the leading diagonal, and columns
/// with no unit left in the active rows are parked at the right until the next level.
///
/// Rows below the pivot are reduced lazily: each row counts the updates it has
/// absorbed and is reduced only before it could overflow, before it becomes a
/// pivot row, and before the division at the end of a level. Divisibility by
/// `p` can be read off unreduced entries because `p` divides `M`.
fn eliminate<const M: u16>(a: &mut ModMatrix, p: u16, levels: usize) -> LocalProfile {
    let (rows, cols) = (a.rows, a.cols);
    let mut counts = vec![0usize; levels];
    let inverse: Vec<u16> = (0..M)
        .map(|x| (1..M).find(|&y| (x as u32 * y as u32) % M as u32 == 1).unwrap_or(0))
        .collect();
    let step = (M as u32 - 1) * (M as u32 - 1);
    let budget = ((u16::MAX as u32 - (M as u32 - 1)) / step.max(1)) as u16;
    let mut pending = vec![0u16; rows];
    let data = &mut a.data;
    let mut k = 0;
    for level in 0..levels {
        let mut end = cols;
        while k < end && k < rows {
            let found = (k..rows).find(|&r| data[r * cols + k] % p != 0);
            let Some(pr) = found else {
                end -= 1;
                for r in 0..rows {
                    data.swap(r * cols + k, r * cols + end);
                }
                continue;
            };
            if pr != k {
                for j in 0..cols {
                    data.swap(pr * cols + j, k * cols + j);
                }
                pending.swap(pr, k);
            }
            if pending[k] > 0 {
                reduce_row::<M>(&mut data[k * cols..(k + 1) * cols]);
                pending[k] = 0;
            }
            counts[level] += 1;
            let inv = inverse[data[k * cols + k] as usize] as u32;
            let (head, tail) = data.split_at_mut((k + 1) * cols);
            let pivot_row = &head[k * cols + k..(k + 1) * cols];
            for (row, count) in tail.chunks_exact_mut(cols).zip(&mut pending[k + 1..]) {
                let x = (row[k] % M) as u32;
                if x == 0 {
                    continue;
                }
                if *count >= budget {
                    reduce_row::<M>(&mut row[k..]);
                    *count = 0;
                }
                let f = ((M as u32 - (x * inv) % M as u32) % M as u32) as u16;
                row_axpy(&mut row[k..], pivot_row, f);
                *count += 1;
            }
            k += 1;
        }
        if level + 1 < levels {
            for r in k..rows {
                for x in &mut data[r * cols + k..(r + 1) * cols] {
                    *x = (*x % M) / p;
                }
                pending[r] = 0;
            }
        }
    }
    LocalProfile { counts }
}

#[inline]
fn reduce_row<const M: u16>(row: &mut [u16]) {
    for x in row {
        *x %= M;
    }
}

#[inline]
fn row_axpy(row: &mut [u16], pivot: &[u16], f: u16) {
    for (x, &y) in row.iter_mut().zip(pivot) {
        *x += f * y;
    }
}

/// Invariant factors of `a` over `Z/p^K`, where `p^K` is the matrix modulus.
///
/// Consumes the matrix as scratch space.
pub fn local_profile(mut a: ModMatrix, p: u16) -> LocalProfile {
    let m = a.modulus;
    let mut levels = 0;
    let mut q = 1u32;
    while q < m as u32 {
        q *= p as u32;
        levels += 1;
    }
    assert_eq!(q, m as u32, "modulus must be a power of p");
    match m {
        3 => eliminate::<3>(&mut a, p, levels),
        9 => eliminate::<9>(&mut a, p, levels),
        27 => eliminate::<27>(&mut a, p, levels),
        81 => eliminate::<81>(&mut a, p, levels),
        2 => eliminate::<2>(&mut a, p, levels),
        4 => eliminate::<4>(&mut a, p, levels),
        8 => eliminate::<8>(&mut a, p, levels),
        16 => eliminate::<16>(&mut a, p, levels),
        5 => eliminate::<5>(&mut a, p, levels),
        25 => eliminate::<25>(&mut a, p, levels),
        125 => eliminate::<125>(&mut a, p, levels),
        _ => panic!("unsupported local modulus {m}"),
    }
}

/// Rank over the field `Z/p`.
pub fn rank_mod_p(a: &ModMatrix) -> usize {
    let p = a.modulus;
    local_profile(a.clone(), p).rank()
}

/// Basis of the null space `{v : a v = 0}` over the field `Z/p`, where `p` is the matrix modulus.
pub fn kernel_mod_p(a: &ModMatrix) -> Vec<Vec<u16>> {
    let p = a.modulus as u32;
    let (rows, cols) = (a.rows, a.cols);
    let mut m: Vec<Vec<u32>> = (0..rows).map(|i| (0..cols).map(|j| a.get(i, j) as u32).collect()).collect();
    let inverse = |x: u32| (1..p).find(|&y| x * y % p == 1).expect("nonzero element of a prime field");
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(pr) = (r..rows).find(|&i| m[i][c] != 0) else { continue };
        m.swap(pr, r);
        let inv = inverse(m[r][c]);
        for x in &mut m[r] {
            *x = *x * inv % p;
        }
        for i in 0..rows {
            if i != r && m[i][c] != 0 {
                let f = m[i][c];
                for j in 0..cols {
                    m[i][j] = (m[i][j] + (p - f) * m[r][j]) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![0u16; cols];
        v[free] = 1;
        for (i, &pc) in pivots.iter().enumerate() {
            v[pc] = ((p - m[i][free]) % p) as u16;
        }
        basis.push(v);
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::{invariant_factors, IntMatrix};
    use crate::rings::subquotient::valuation;
    use proptest::prelude::*;

    fn to_mod(a: &IntMatrix, m: u16) -> ModMatrix {
        let mut out = ModMatrix::zeros(a.rows(), a.cols(), m);
        for i in 0..a.rows() {
            for j in 0..a.cols() {
                let v: i64 = (&a[(i, j)] % (m as i64)).try_into().unwrap();
                out.set(i, j, v);
            }
        }
        out
    }

    #[test]
    fn diagonal_powers() {
        let a = IntMatrix::diagonal(&[1, 3, 9, 27, 81, 0]);
        let prof = local_profile(to_mod(&a, 81), 3);
        assert_eq!(prof.counts, vec![1, 1, 1, 1]);
        assert_eq!(prof.torsion_exponents(), vec![1, 2, 3]);
    }

    #[test]
    fn rank_over_f3() {
        let a = IntMatrix::from_rows(&[vec![1, 1, 1], vec![1, 1, 1], vec![0, 3, 3]]);
        assert_eq!(rank_mod_p(&to_mod(&a, 3)), 1);
    }

    #[test]
    fn kernel_over_f3() {
        let a = IntMatrix::from_rows(&[vec![1, 1, 1], vec![1, 2, 0]]);
        let m = to_mod(&a, 3);
        let k = kernel_mod_p(&m);
        assert_eq!(k.len(), 1);
        for i in 0..2 {
            let s: u32 = (0..3).map(|j| m.get(i, j) as u32 * k[0][j] as u32).sum();
            assert_eq!(s % 3, 0);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn agrees_with_integer_snf(r in 1usize..6, c in 1usize..6, seed in proptest::collection::vec(-30i64..31, 36)) {
            let a = IntMatrix::from_i64(r, c, &seed[..r * c]);
            let mut expected = vec![0usize; 4];
            for d in invariant_factors(&a) {
                let v = valuation(&d, 3) as usize;
                if v < 4 {
                    expected[v] += 1;
                }
            }
            let prof = local_profile(to_mod(&a, 81), 3);
            prop_assert_eq!(prof.counts, expected);
        }

        #[test]
        fn kernel_dimension_is_corank(r in 1usize..6, c in 1usize..6, seed in proptest::collection::vec(0i64..3, 36)) {
            let a = IntMatrix::from_i64(r, c, &seed[..r * c]);
            let m = to_mod(&a, 3);
            let k = kernel_mod_p(&m);
            prop_assert_eq!(k.len() + rank_mod_p(&m), c);
            for v in &k {
                for i in 0..r {
                    let s: u32 = (0..c).map(|j| m.get(i, j) as u32 * v[j] as u32).sum();
                    prop_assert_eq!(s % 3, 0);
                }
            }
        }
    }
}
