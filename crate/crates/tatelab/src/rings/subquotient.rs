//! Finite subquotients of integer lattices.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::snf::smith_normal_form;
use super::{IntMatrix, RingError};

/// `span(ker_gens) / span(im_gens)`, restricted to its `p`-primary torsion.
///
/// Each cyclic summand `Z/p^e` is recorded by its exponent `e` and an integer
/// vector generating it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Subquotient {
    pub prime: u64,
    pub exponents: Vec<u32>,
    #[serde(skip)]
    pub representatives: Vec<Vec<BigInt>>,
    /// Rank of the torsion-free part of the quotient.
    pub free_rank: usize,
}

impl Subquotient {
    pub fn order(&self) -> BigInt {
        self.exponents.iter().fold(BigInt::one(), |acc, &e| acc * BigInt::from(self.prime).pow(e))
    }

    pub fn is_trivial(&self) -> bool {
        self.exponents.is_empty() && self.free_rank == 0
    }
}

/// Largest `e` with `p^e | x`, for nonzero `x`.
pub fn valuation(x: &BigInt, p: u64) -> u32 {
    let p = BigInt::from(p);
    let mut x = x.abs();
    let mut e = 0;
    while !x.is_zero() && x.is_multiple_of(&p) {
        x /= &p;
        e += 1;
    }
    e
}

/// Coordinates of every column of `vectors` in the lattice spanned by the columns of `gens`.
///
/// Returns the rank-`r` basis (as columns) together with an `r x k` coordinate matrix.
pub fn lattice_coordinates(
    gens: &IntMatrix,
    vectors: &IntMatrix,
) -> Result<(IntMatrix, IntMatrix), RingError> {
    assert_eq!(gens.rows(), vectors.rows(), "ambient dimension mismatch");
    let n = gens.rows();
    let snf = smith_normal_form(gens);
    let diag = snf.diagonal();
    let r = snf.rank();
    let basis_cols: Vec<Vec<BigInt>> = (0..r)
        .map(|i| snf.u_inv.column(i).into_iter().map(|x| x * &diag[i]).collect())
        .collect();
    let basis = IntMatrix::from_columns(n, &basis_cols);
    let mut coords = IntMatrix::zeros(r, vectors.cols());
    for j in 0..vectors.cols() {
        let z = snf.u.apply(&vectors.column(j));
        for (i, zi) in z.iter().enumerate() {
            if i < r {
                if !zi.is_multiple_of(&diag[i]) {
                    return Err(RingError::NotContained { column: j });
                }
                coords[(i, j)] = zi / &diag[i];
            } else if !zi.is_zero() {
                return Err(RingError::NotContained { column: j });
            }
        }
    }
    Ok((basis, coords))
}

/// The `p`-primary part of `span(ker_gens) / span(im_gens)` with generators.
pub fn subquotient_structure(
    ker_gens: &IntMatrix,
    im_gens: &IntMatrix,
    p: u64,
) -> Result<Subquotient, RingError> {
    Ok(subquotient_with_coordinates(ker_gens, im_gens, p)?.0)
}

/// Reads off the coordinates of a kernel vector in the cyclic summands of a [`Subquotient`].
#[derive(Clone, Debug)]
pub struct CoordinateMap {
    ker_u: IntMatrix,
    ker_diag: Vec<BigInt>,
    quotient_u: IntMatrix,
    /// For each reported summand: its row in `quotient_u`, the modulus `p^e`, and the inverse of the cofactor.
    summands: Vec<(usize, BigInt, BigInt)>,
}

impl CoordinateMap {
    /// Coefficients `a_i` (reduced mod `p^{e_i}`) with `x = sum a_i rep_i` in the `p`-primary quotient.
    pub fn coordinates(&self, x: &[BigInt]) -> Result<Vec<BigInt>, RingError> {
        let z = self.ker_u.apply(x);
        let r = self.ker_diag.len();
        let mut y = Vec::with_capacity(r);
        for (i, zi) in z.iter().enumerate() {
            if i < r {
                if !zi.is_multiple_of(&self.ker_diag[i]) {
                    return Err(RingError::NotContained { column: 0 });
                }
                y.push(zi / &self.ker_diag[i]);
            } else if !zi.is_zero() {
                return Err(RingError::NotContained { column: 0 });
            }
        }
        let w = self.quotient_u.apply(&y);
        Ok(self.summands.iter().map(|(row, modulus, inv)| (&w[*row] * inv).mod_floor(modulus)).collect())
    }
}

/// [`subquotient_structure`] together with the map to summand coordinates.
pub fn subquotient_with_coordinates(
    ker_gens: &IntMatrix,
    im_gens: &IntMatrix,
    p: u64,
) -> Result<(Subquotient, CoordinateMap), RingError> {
    assert_eq!(ker_gens.rows(), im_gens.rows(), "ambient dimension mismatch");
    let n = ker_gens.rows();
    let ker_snf = smith_normal_form(ker_gens);
    let ker_diag: Vec<BigInt> = ker_snf.diagonal().into_iter().take_while(|d| !d.is_zero()).collect();
    let r = ker_diag.len();
    let basis_cols: Vec<Vec<BigInt>> = (0..r)
        .map(|i| ker_snf.u_inv.column(i).into_iter().map(|x| x * &ker_diag[i]).collect())
        .collect();
    let basis = IntMatrix::from_columns(n, &basis_cols);
    let mut coords = IntMatrix::zeros(r, im_gens.cols());
    for j in 0..im_gens.cols() {
        let z = ker_snf.u.apply(&im_gens.column(j));
        for (i, zi) in z.iter().enumerate() {
            if i < r {
                if !zi.is_multiple_of(&ker_diag[i]) {
                    return Err(RingError::NotContained { column: j });
                }
                coords[(i, j)] = zi / &ker_diag[i];
            } else if !zi.is_zero() {
                return Err(RingError::NotContained { column: j });
            }
        }
    }
    let snf = smith_normal_form(&coords);
    let diag = snf.diagonal();
    let pb = BigInt::from(p);
    let mut exponents = Vec::new();
    let mut representatives = Vec::new();
    let mut summands = Vec::new();
    let mut free_rank = 0;
    for i in 0..r {
        let e = diag.get(i).cloned().unwrap_or_else(BigInt::zero);
        if e.is_zero() {
            free_rank += 1;
            continue;
        }
        let v = valuation(&e, p);
        if v == 0 {
            continue;
        }
        let modulus = pb.pow(v);
        let cofactor = &e / &modulus;
        let gen: Vec<BigInt> = snf.u_inv.column(i).into_iter().map(|x| x * &cofactor).collect();
        representatives.push(basis.apply(&gen));
        exponents.push(v);
        let inv = cofactor.extended_gcd(&modulus).x.mod_floor(&modulus);
        summands.push((i, modulus, inv));
    }
    let map = CoordinateMap { ker_u: ker_snf.u, ker_diag, quotient_u: snf.u, summands };
    Ok((Subquotient { prime: p, exponents, representatives, free_rank }, map))
}
