//! Smith normal form over the integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::IntMatrix;

/// `U * A * V = D` with `U`, `V` unimodular and `D` diagonal in a divisibility chain.
#[derive(Clone, Debug)]
pub struct SnfResult {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
    pub u_inv: IntMatrix,
    pub v_inv: IntMatrix,
}

impl SnfResult {
    /// Diagonal entries, including trailing zeros, of length `min(rows, cols)`.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols())).map(|i| self.d[(i, i)].clone()).collect()
    }

    /// Number of nonzero invariant factors.
    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|x| !x.is_zero()).count()
    }

    pub fn invariant_factors(&self) -> Vec<BigInt> {
        self.diagonal().into_iter().filter(|x| !x.is_zero()).collect()
    }
}

/// Quotient rounded to the nearest integer, so the remainder is at most `|b|/2`.
fn nearest_quotient(a: &BigInt, b: &BigInt) -> BigInt {
    let (q, r) = a.div_mod_floor(b);
    let twice: BigInt = &r * 2;
    if twice.abs() > b.abs() {
        q + 1
    } else {
        q
    }
}

struct Reducer {
    a: IntMatrix,
    transforms: Option<[IntMatrix; 4]>,
}

impl Reducer {
    fn swap_rows(&mut self, x: usize, y: usize) {
        self.a.swap_rows(x, y);
        if let Some([u, ui, _, _]) = &mut self.transforms {
            u.swap_rows(x, y);
            ui.swap_cols(x, y);
        }
    }

    fn swap_cols(&mut self, x: usize, y: usize) {
        self.a.swap_cols(x, y);
        if let Some([_, _, v, vi]) = &mut self.transforms {
            v.swap_cols(x, y);
            vi.swap_rows(x, y);
        }
    }

    fn add_row(&mut self, dst: usize, src: usize, f: &BigInt) {
        self.a.add_row_multiple(dst, src, f);
        if let Some([u, ui, _, _]) = &mut self.transforms {
            u.add_row_multiple(dst, src, f);
            ui.add_col_multiple(src, dst, &-f);
        }
    }

    fn add_col(&mut self, dst: usize, src: usize, f: &BigInt) {
        self.a.add_col_multiple(dst, src, f);
        if let Some([_, _, v, vi]) = &mut self.transforms {
            v.add_col_multiple(dst, src, f);
            vi.add_row_multiple(src, dst, &-f);
        }
    }

    fn negate_row(&mut self, r: usize) {
        self.a.negate_row(r);
        if let Some([u, ui, _, _]) = &mut self.transforms {
            u.negate_row(r);
            ui.negate_col(r);
        }
    }

    fn run(&mut self) {
        let (m, n) = (self.a.rows(), self.a.cols());
        for t in 0..m.min(n) {
            loop {
                let mut best: Option<(usize, usize, BigInt)> = None;
                for i in t..m {
                    for j in t..n {
                        let x = &self.a[(i, j)];
                        if x.is_zero() {
                            continue;
                        }
                        let ax = x.abs();
                        if best.as_ref().map_or(true, |(_, _, b)| ax < *b) {
                            let unit = ax.is_one();
                            best = Some((i, j, ax));
                            if unit {
                                break;
                            }
                        }
                    }
                    if best.as_ref().is_some_and(|(_, _, b)| b.is_one()) {
                        break;
                    }
                }
                let Some((pi, pj, _)) = best else { return };
                self.swap_rows(t, pi);
                self.swap_cols(t, pj);

                let mut dirty = false;
                let pivot = self.a[(t, t)].clone();
                for i in t + 1..m {
                    if self.a[(i, t)].is_zero() {
                        continue;
                    }
                    let q = nearest_quotient(&self.a[(i, t)], &pivot);
                    self.add_row(i, t, &-q);
                    dirty |= !self.a[(i, t)].is_zero();
                }
                for j in t + 1..n {
                    if self.a[(t, j)].is_zero() {
                        continue;
                    }
                    let q = nearest_quotient(&self.a[(t, j)], &pivot);
                    self.add_col(j, t, &-q);
                    dirty |= !self.a[(t, j)].is_zero();
                }
                if dirty {
                    continue;
                }
                let offender = (t + 1..m).find(|&i| {
                    (t + 1..n).any(|j| !self.a[(i, j)].is_multiple_of(&pivot))
                });
                match offender {
                    Some(i) => self.add_row(t, i, &BigInt::one()),
                    None => break,
                }
            }
            if self.a[(t, t)].is_negative() {
                self.negate_row(t);
            }
        }
    }
}

/// Smith normal form with unimodular transforms and their inverses.
pub fn smith_normal_form(a: &IntMatrix) -> SnfResult {
    let (m, n) = (a.rows(), a.cols());
    let mut r = Reducer {
        a: a.clone(),
        transforms: Some([
            IntMatrix::identity(m),
            IntMatrix::identity(m),
            IntMatrix::identity(n),
            IntMatrix::identity(n),
        ]),
    };
    r.run();
    let [u, u_inv, v, v_inv] = r.transforms.expect("transforms are tracked");
    SnfResult { d: r.a, u, v, u_inv, v_inv }
}

/// Nonzero invariant factors only, skipping the transform bookkeeping.
pub fn invariant_factors(a: &IntMatrix) -> Vec<BigInt> {
    let mut r = Reducer { a: a.clone(), transforms: None };
    r.run();
    (0..m_min(&r.a)).map(|i| r.a[(i, i)].clone()).filter(|x| !x.is_zero()).collect()
}

fn m_min(a: &IntMatrix) -> usize {
    a.rows().min(a.cols())
}

/// Basis of the integer kernel `{x : A x = 0}`, as columns.
pub fn kernel_basis(a: &IntMatrix) -> IntMatrix {
    let snf = smith_normal_form(a);
    let r = snf.rank();
    let cols: Vec<Vec<BigInt>> = (r..a.cols()).map(|j| snf.v.column(j)).collect();
    IntMatrix::from_columns(a.cols(), &cols)
}
