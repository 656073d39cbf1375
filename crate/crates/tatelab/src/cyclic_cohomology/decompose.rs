//! Indecomposable summands of `F_3[C_3]`-modules: Jordan blocks of `g - 1` of sizes 1, 2 and 3.

use serde::{Deserialize, Serialize};

use super::CohomologyError;
use crate::rings::{rank_mod_p, ModMatrix};

/// Multiplicities of the trivial, two-dimensional and free indecomposables.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct C3DecompositionCounts {
    pub trivial: usize,
    pub two_dimensional: usize,
    pub free: usize,
}

impl C3DecompositionCounts {
    pub fn dimension(&self) -> usize {
        self.trivial + 2 * self.two_dimensional + 3 * self.free
    }

    /// `dim H^0(C_3; V)`: every indecomposable has a one-dimensional fixed space.
    pub fn invariants(&self) -> usize {
        self.trivial + self.two_dimensional + self.free
    }

    /// `dim Ĥ^p(C_3; V)` for any `p`: trivial and two-dimensional summands contribute one each.
    pub fn tate_dimension(&self) -> usize {
        self.trivial + self.two_dimensional
    }
}

impl std::ops::Add for C3DecompositionCounts {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        C3DecompositionCounts {
            trivial: self.trivial + o.trivial,
            two_dimensional: self.two_dimensional + o.two_dimensional,
            free: self.free + o.free,
        }
    }
}

/// Decompose an order-3 action over `F_3` from the ranks of `g - 1` and `(g - 1)^2`.
pub fn decompose_c3(gamma: &ModMatrix) -> Result<C3DecompositionCounts, CohomologyError> {
    assert_eq!(gamma.modulus(), 3, "decomposition is over F_3");
    let n = gamma.rows();
    let u = gamma.sub(&ModMatrix::identity(n, 3));
    let u2 = u.mul(&u);
    let u3 = u2.mul(&u);
    if (0..n).any(|i| (0..n).any(|j| u3.get(i, j) != 0)) {
        return Err(CohomologyError::NotUnipotent);
    }
    let r1 = rank_mod_p(&u);
    let r2 = rank_mod_p(&u2);
    Ok(C3DecompositionCounts { trivial: n + r2 - 2 * r1, two_dimensional: r1 - 2 * r2, free: r2 })
}
