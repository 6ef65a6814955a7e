//! Pascal matrices and tensors mod p (generalized Sierpinski triangles),
//! their fractal weights and dimensions, self-similar blocks, and the matrix
//! algebra around them: inverse, powers and invertible submatrices.

use serde::Serialize;
use thiserror::Error;

use crate::automaton::{evolve, AutomatonError, LatticeSlice, Rule, Shape};
use crate::field::{DigitBinomials, FieldError, Prime};
use crate::matrix::FpMatrix;

/// Largest number of dense cells materialized by default (L ≤ 2^10 for
/// matrices).
pub const DEFAULT_CELL_CAP: usize = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PascalError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Automaton(#[from] AutomatonError),
    #[error("the level m must be at least 1")]
    ZeroLevel,
    #[error("dimension must be at least 2, got {0}")]
    Dimension(usize),
    #[error("{cells} cells exceed the dense storage cap of {cap}")]
    TooLarge { cells: u128, cap: usize },
    #[error("integer overflow computing {0}")]
    Overflow(&'static str),
    #[error("self-similar blocks need m ≥ 2")]
    BlockLevel,
    #[error("block index ({i}, {j}) is outside 0..{p}")]
    BlockIndex { i: usize, j: usize, p: u32 },
    #[error("index list {list:?} is malformed: {reason}")]
    IndexList { list: Vec<u32>, reason: String },
}

/// `p^m` and the dense cell count `(p^m)^rank`, checked against `cap`.
pub(crate) fn side_checked(p: Prime, m: u32, rank: u32, cap: usize) -> Result<usize, PascalError> {
    if m == 0 {
        return Err(PascalError::ZeroLevel);
    }
    let side = p
        .checked_power(m)
        .ok_or(PascalError::Overflow("p^m"))?;
    let cells = u128::from(side)
        .checked_pow(rank)
        .ok_or(PascalError::Overflow("cell count"))?;
    if cells > cap as u128 {
        return Err(PascalError::TooLarge { cells, cap });
    }
    Ok(side as usize)
}

/// The L×L matrix with entry (t, r) = C(t, r) mod p, L = p^m.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PascalMatrix {
    p: Prime,
    m: u32,
    matrix: FpMatrix,
}

impl PascalMatrix {
    pub fn new(p: Prime, m: u32) -> Result<Self, PascalError> {
        Self::with_cap(p, m, DEFAULT_CELL_CAP)
    }

    pub fn with_cap(p: Prime, m: u32, cap: usize) -> Result<Self, PascalError> {
        let side = side_checked(p, m, 2, cap)?;
        let table = DigitBinomials::new(p);
        let matrix = FpMatrix::from_fn(p, side, side, |t, r| table.binomial(t as u64, r as u64));
        Ok(PascalMatrix { p, m, matrix })
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn level(&self) -> u32 {
        self.m
    }

    pub fn side(&self) -> usize {
        self.matrix.rows()
    }

    pub fn get(&self, t: usize, r: usize) -> u32 {
        self.matrix.get(t, r)
    }

    /// Row t, i.e. the principal vector B(t).
    pub fn row(&self, t: usize) -> &[u32] {
        self.matrix.row(t)
    }

    pub fn as_matrix(&self) -> &FpMatrix {
        &self.matrix
    }

    pub fn weight(&self) -> usize {
        self.matrix.weight()
    }

    pub fn export(&self) -> MatrixExport {
        MatrixExport::new(self.p, self.m, &self.matrix)
    }
}

pub fn pascal_matrix(p: Prime, m: u32) -> Result<PascalMatrix, PascalError> {
    PascalMatrix::new(p, m)
}

/// JSON form of a matrix: `{p, m, L, rows}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MatrixExport {
    pub p: u32,
    pub m: u32,
    #[serde(rename = "L")]
    pub side: usize,
    pub rows: Vec<Vec<u32>>,
}

impl MatrixExport {
    pub fn new(p: Prime, m: u32, matrix: &FpMatrix) -> Self {
        MatrixExport {
            p: p.get(),
            m,
            side: matrix.rows(),
            rows: matrix.to_rows(),
        }
    }
}

/// The D-dimensional Pascal tensor: entry (t, r⁽¹⁾, …, r⁽ᴰ⁻¹⁾) is the
/// multinomial `t! / (r⁽¹⁾! ⋯ r⁽ᴰ⁻¹⁾! (t − Σ r)!)` mod p, zero when Σ r > t.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PascalTensor {
    p: Prime,
    m: u32,
    dim: usize,
    side: usize,
    cells: Vec<u32>,
}

/// The three-dimensional case, indexed (t, r⁽¹⁾, r⁽²⁾).
pub type PascalTensor3 = PascalTensor;

impl PascalTensor {
    pub fn new(p: Prime, m: u32, dim: usize) -> Result<Self, PascalError> {
        Self::with_cap(p, m, dim, DEFAULT_CELL_CAP)
    }

    pub fn with_cap(p: Prime, m: u32, dim: usize, cap: usize) -> Result<Self, PascalError> {
        if dim < 2 {
            return Err(PascalError::Dimension(dim));
        }
        let side = side_checked(p, m, dim as u32, cap)?;
        let table = DigitBinomials::new(p);
        let shape = Shape::cube(dim, side);
        let cells = shape
            .coords()
            .map(|c| {
                let mut rest = c[0] as u64;
                let mut acc = 1 % p.get();
                for &r in &c[1..] {
                    let r = r as u64;
                    if r > rest {
                        return 0;
                    }
                    acc = p.mul(acc, table.binomial(rest, r));
                    rest -= r;
                }
                acc
            })
            .collect();
        Ok(PascalTensor {
            p,
            m,
            dim,
            side,
            cells,
        })
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn level(&self) -> u32 {
        self.m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn cells(&self) -> &[u32] {
        &self.cells
    }

    pub fn get(&self, coords: &[usize]) -> u32 {
        self.cells[Shape::cube(self.dim, self.side).flat(coords)]
    }

    /// The time-t slice, a (D−1)-dimensional array in row-major order.
    pub fn layer(&self, t: usize) -> &[u32] {
        let n = self.side.pow(self.dim as u32 - 1);
        &self.cells[t * n..(t + 1) * n]
    }

    /// Time-t layer of a three-dimensional tensor as a matrix, row index
    /// r⁽¹⁾ and column index r⁽²⁾.
    pub fn layer_matrix(&self, t: usize) -> Option<FpMatrix> {
        (self.dim == 3).then(|| FpMatrix::from_vec(self.p, self.side, self.side, self.layer(t).to_vec()))
    }

    pub fn weight(&self) -> usize {
        self.cells.iter().filter(|&&x| x != 0).count()
    }
}

pub fn pascal_tensor3(p: Prime, m: u32) -> Result<PascalTensor3, PascalError> {
    PascalTensor::new(p, m, 3)
}

pub fn pascal_tensor(p: Prime, m: u32, dim: usize) -> Result<PascalTensor, PascalError> {
    PascalTensor::new(p, m, dim)
}

/// Exact C(n, k) in u128.
pub(crate) fn binomial_u128(n: u128, k: u128) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 1..=k {
        // acc * (n - k + i) is divisible by i at every step
        acc = acc.checked_mul(n - k + i)? / i;
    }
    Some(acc)
}

/// `p(p+1)⋯(p+D−1)/D! = C(p+D−1, D)`: the number of nonzero cells per
/// level of self-similarity.
pub fn exact_base(p: Prime, dim: usize) -> Result<u128, PascalError> {
    if dim < 2 {
        return Err(PascalError::Dimension(dim));
    }
    binomial_u128(u128::from(p.get()) + dim as u128 - 1, dim as u128)
        .ok_or(PascalError::Overflow("C(p+D-1, D)"))
}

/// Number of nonzero cells of the D-dimensional Pascal object at level m,
/// `exact_base(p, D)^m`.
pub fn fractal_weight(p: Prime, m: u32, dim: usize) -> Result<u128, PascalError> {
    exact_base(p, dim)?
        .checked_pow(m)
        .ok_or(PascalError::Overflow("fractal weight"))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FractalDims {
    pub p: u32,
    pub dim: usize,
    pub exact_base: u128,
    /// `log(exact_base) / log(p)`; display only, exact work uses the base.
    pub value: f64,
}

pub fn fractal_dimension(p: Prime, dim: usize) -> Result<FractalDims, PascalError> {
    let base = exact_base(p, dim)?;
    Ok(FractalDims {
        p: p.get(),
        dim,
        exact_base: base,
        value: (base as f64).ln() / f64::from(p.get()).ln(),
    })
}

/// Enumerates the nonzero cells of the D-dimensional Pascal object without
/// materializing it: per base-p digit, the admissible tuples are
/// `(t_d, r_d⁽¹⁾, …)` with `Σ_j r_d⁽ʲ⁾ ≤ t_d`, and a cell is nonzero exactly
/// when every digit position picks one of them.
pub fn nonzero_coordinates(p: Prime, m: u32, dim: usize) -> impl Iterator<Item = Vec<u64>> {
    let q = p.get();
    let digit_tuples: Vec<Vec<u32>> = Shape::cube(dim, q as usize)
        .coords()
        .filter(|c| c[1..].iter().sum::<usize>() <= c[0])
        .map(|c| c.into_iter().map(|x| x as u32).collect())
        .collect();
    let per_level = digit_tuples.len();
    let total = (per_level as u128).pow(m);
    (0..total).map(move |mut idx| {
        let mut coords = vec![0u64; dim];
        let mut scale = 1u64;
        for _ in 0..m {
            let tuple = &digit_tuples[(idx % per_level as u128) as usize];
            idx /= per_level as u128;
            for (c, &d) in coords.iter_mut().zip(tuple) {
                *c += u64::from(d) * scale;
            }
            scale *= u64::from(q);
        }
        coords
    })
}

/// Block (i, j) of 𝐁⁽ᵐ⁾, which equals C(i, j)·𝐁⁽ᵐ⁻¹⁾.
pub fn self_similar_block(b: &PascalMatrix, i: usize, j: usize) -> Result<FpMatrix, PascalError> {
    if b.m < 2 {
        return Err(PascalError::BlockLevel);
    }
    let q = b.p.get();
    if i >= q as usize || j >= q as usize {
        return Err(PascalError::BlockIndex { i, j, p: q });
    }
    let s = b.side() / q as usize;
    Ok(b.matrix.submatrix(i * s, j * s, s, s))
}

/// 𝐁⁻¹ from the signed form: entry (t, r) = (−1)^{t+r} C(t, r).
pub fn pascal_inverse(p: Prime, m: u32) -> Result<FpMatrix, PascalError> {
    let b = PascalMatrix::new(p, m)?;
    let n = b.side();
    Ok(FpMatrix::from_fn(p, n, n, |t, r| {
        let v = b.get(t, r);
        if (t + r) % 2 == 1 {
            p.neg(v)
        } else {
            v
        }
    }))
}

/// 𝐁⁻¹ by reflection: entry (t, r) = B(L−1−r)_{L−1−t}.
pub fn pascal_inverse_reflected(p: Prime, m: u32) -> Result<FpMatrix, PascalError> {
    let b = PascalMatrix::new(p, m)?;
    let n = b.side();
    Ok(FpMatrix::from_fn(p, n, n, |t, r| b.get(n - 1 - r, n - 1 - t)))
}

/// 𝐁^c by repeated squaring.
pub fn pascal_power(p: Prime, m: u32, c: u64) -> Result<FpMatrix, PascalError> {
    Ok(PascalMatrix::new(p, m)?.matrix.pow(c))
}

/// 𝐁^c generated by `x(t+1)_r = x(t)_{r−1} + c·x(t)_r` from the delta row.
pub fn pascal_power_by_rule(p: Prime, m: u32, c: u64) -> Result<FpMatrix, PascalError> {
    let side = side_checked(p, m, 2, DEFAULT_CELL_CAP)?;
    let cfg = evolve(
        &LatticeSlice::delta(p, vec![side]),
        side,
        &Rule::pascal_power(p, c),
    )?;
    Ok(FpMatrix::from_vec(p, side, side, cfg.cells().to_vec()))
}

/// A square submatrix of 𝐁⁽¹⁾ together with the evidence that it is
/// invertible.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubmatrixWitness {
    pub matrix: FpMatrix,
    pub invertible: bool,
    /// Determinant by elimination.
    pub determinant: u32,
    /// Determinant predicted from the Vandermonde product ∏_{i<j}(x_j − x_i).
    pub vandermonde_determinant: u32,
    pub inverse: Option<FpMatrix>,
}

impl SubmatrixWitness {
    fn build(matrix: FpMatrix, vandermonde_determinant: u32) -> Self {
        let determinant = matrix.determinant();
        let inverse = matrix.inverse();
        SubmatrixWitness {
            invertible: inverse.is_some(),
            determinant,
            vandermonde_determinant,
            inverse,
            matrix,
        }
    }

    /// Elimination and the Vandermonde prediction agree and the matrix is
    /// invertible.
    pub fn is_consistent(&self) -> bool {
        self.invertible
            && self.determinant != 0
            && self.determinant == self.vandermonde_determinant
    }
}

fn check_index_list(p: Prime, list: &[u32], a: usize) -> Result<(), PascalError> {
    let bad = |reason: String| PascalError::IndexList {
        list: list.to_vec(),
        reason,
    };
    if a >= p.get() as usize {
        return Err(bad(format!("size a = {a} must be below p = {p}")));
    }
    if list.len() != a + 1 {
        return Err(bad(format!("expected {} entries, got {}", a + 1, list.len())));
    }
    if list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(bad("entries must be strictly increasing".into()));
    }
    if list.iter().any(|&x| x >= p.get()) {
        return Err(bad(format!("entries must be below {p}")));
    }
    Ok(())
}

fn vandermonde(p: Prime, xs: &[u32]) -> u32 {
    let mut acc = 1 % p.get();
    for j in 0..xs.len() {
        for i in 0..j {
            acc = p.mul(acc, p.sub(xs[j] % p.get(), xs[i] % p.get()));
        }
    }
    acc
}

/// ∏_{j ≤ a} (j!)⁻¹ mod p, valid for a < p.
fn inverse_factorial_product(p: Prime, a: usize) -> u32 {
    let mut fact = 1 % p.get();
    let mut acc = 1 % p.get();
    for j in 1..=a as u32 {
        fact = p.mul(fact, j);
        acc = p.mul(acc, fact);
    }
    p.inv(acc).expect("factorials below p are units")
}

/// Rows `x_0 < … < x_a` of the leftmost a+1 columns of 𝐁⁽¹⁾:
/// entries C(x_i, j). Its determinant is V(x) / ∏ j!.
pub fn submatrix_row_pick(p: Prime, x_list: &[u32], a: usize) -> Result<SubmatrixWitness, PascalError> {
    check_index_list(p, x_list, a)?;
    let table = DigitBinomials::new(p);
    let matrix = FpMatrix::from_fn(p, a + 1, a + 1, |i, j| table.get(x_list[i], j as u32));
    let predicted = p.mul(vandermonde(p, x_list), inverse_factorial_product(p, a));
    Ok(SubmatrixWitness::build(matrix, predicted))
}

/// Columns `y_0 < … < y_a` of the bottom a+1 rows (p−a−1 … p−1) of 𝐁⁽¹⁾:
/// entries C(ρ, y). Reflecting through the inverse relation turns it into a
/// row pick on `x = p−1−y`, giving determinant
/// `(−1)^{Σρ+Σy} V(x) / ∏ j!`.
pub fn submatrix_col_pick(p: Prime, y_list: &[u32], a: usize) -> Result<SubmatrixWitness, PascalError> {
    check_index_list(p, y_list, a)?;
    let q = p.get();
    let table = DigitBinomials::new(p);
    let first_row = q - a as u32 - 1;
    let matrix = FpMatrix::from_fn(p, a + 1, a + 1, |i, j| table.get(first_row + i as u32, y_list[j]));
    let mut xs: Vec<u32> = y_list.iter().map(|&y| q - 1 - y).collect();
    xs.sort_unstable();
    let rho_sum: u64 = (0..=a as u64).map(|i| u64::from(first_row) + i).sum();
    let y_sum: u64 = y_list.iter().map(|&y| u64::from(y)).sum();
    let mut predicted = p.mul(vandermonde(p, &xs), inverse_factorial_product(p, a));
    if (rho_sum + y_sum) % 2 == 1 {
        predicted = p.neg(predicted);
    }
    Ok(SubmatrixWitness::build(matrix, predicted))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: u64) -> Prime {
        Prime::new(x).unwrap()
    }

    #[test]
    fn pascal_matrix_p2_m2() {
        let b = pascal_matrix(p(2), 2).unwrap();
        assert_eq!(
            b.as_matrix().to_rows(),
            vec![
                vec![1, 0, 0, 0],
                vec![1, 1, 0, 0],
                vec![1, 0, 1, 0],
                vec![1, 1, 1, 1]
            ]
        );
        assert_eq!(b.get(3, 2), 1);
    }

    #[test]
    fn structural_invariants() {
        for &(q, m) in &[(2u64, 4u32), (3, 3), (5, 2), (7, 2)] {
            let q = p(q);
            let b = pascal_matrix(q, m).unwrap();
            let n = b.side();
            for t in 0..n {
                assert_eq!(b.get(t, t), 1);
                for r in t + 1..n {
                    assert_eq!(b.get(t, r), 0);
                }
            }
            // row recurrence with periodic position index
            for t in 0..n - 1 {
                for r in 0..n {
                    let next = b.get(t + 1, (r + 1) % n);
                    assert_eq!(next, q.add(b.get(t, r), b.get(t, (r + 1) % n)));
                }
            }
        }
    }

    #[test]
    fn resource_guard() {
        assert!(matches!(
            PascalMatrix::with_cap(p(2), 5, 100),
            Err(PascalError::TooLarge { cells: 1024, cap: 100 })
        ));
        assert_eq!(pascal_matrix(p(2), 0), Err(PascalError::ZeroLevel));
        assert!(pascal_matrix(p(2), 11).is_err());
    }

    #[test]
    fn tensor3_layers() {
        let t = pascal_tensor3(p(2), 2).unwrap();
        assert_eq!(
            t.layer_matrix(3).unwrap().to_rows(),
            vec![
                vec![1, 1, 1, 1],
                vec![1, 0, 1, 0],
                vec![1, 1, 0, 0],
                vec![1, 0, 0, 0]
            ]
        );
        let origin = t.layer_matrix(0).unwrap();
        assert_eq!(origin.weight(), 1);
        assert_eq!(origin.get(0, 0), 1);
        assert_eq!(pascal_tensor3(p(2), 1).unwrap().weight(), 4);
    }

    #[test]
    fn tensor3_layer_recurrence_and_digit_criterion() {
        for &(q, m) in &[(2u64, 3u32), (3, 2), (5, 1)] {
            let q = p(q);
            let t = pascal_tensor3(q, m).unwrap();
            let n = t.side();
            for time in 0..n - 1 {
                for a in 0..n {
                    for b in 0..n {
                        let expect = q.add(
                            q.add(t.get(&[time, a, b]), t.get(&[time, (a + n - 1) % n, b])),
                            t.get(&[time, a, (b + n - 1) % n]),
                        );
                        assert_eq!(t.get(&[time + 1, a, b]), expect);
                    }
                }
            }
            let digits = |x: usize| -> Vec<usize> {
                (0..m).map(|k| x / (q.get() as usize).pow(k) % q.get() as usize).collect()
            };
            for time in 0..n {
                for a in 0..n {
                    for b in 0..n {
                        let (td, ad, bd) = (digits(time), digits(a), digits(b));
                        let criterion = (0..m as usize).all(|k| td[k] >= ad[k] && td[k] - ad[k] >= bd[k]);
                        assert_eq!(t.get(&[time, a, b]) != 0, criterion);
                    }
                }
            }
        }
    }

    #[test]
    fn fractal_weight_examples() {
        assert_eq!(fractal_weight(p(2), 3, 2).unwrap(), 27);
        assert_eq!(fractal_weight(p(3), 1, 2).unwrap(), 6);
        assert_eq!(fractal_weight(p(2), 1, 3).unwrap(), 4);
        assert_eq!(pascal_matrix(p(2), 3).unwrap().weight(), 27);
        assert_eq!(pascal_matrix(p(3), 1).unwrap().weight(), 6);
        assert!(matches!(fractal_weight(p(2), 1, 1), Err(PascalError::Dimension(1))));
        assert!(matches!(
            fractal_weight(p(97), 40, 4),
            Err(PascalError::Overflow(_))
        ));
    }

    #[test]
    fn sparse_enumeration_matches_dense() {
        for &(q, m, dim) in &[(2u64, 3u32, 2usize), (3, 2, 2), (2, 2, 3), (3, 1, 4)] {
            let q = p(q);
            let dense = pascal_tensor(q, m, dim).unwrap();
            let mut sparse: Vec<Vec<u64>> = nonzero_coordinates(q, m, dim).collect();
            sparse.sort();
            let mut from_dense: Vec<Vec<u64>> = Shape::cube(dim, dense.side())
                .coords()
                .filter(|c| dense.get(c) != 0)
                .map(|c| c.into_iter().map(|x| x as u64).collect())
                .collect();
            from_dense.sort();
            assert_eq!(sparse, from_dense);
            assert_eq!(sparse.len() as u128, fractal_weight(q, m, dim).unwrap());
        }
        // level 7 for p=2 holds 2^14 cells; count without building it
        assert_eq!(nonzero_coordinates(p(2), 12, 2).count(), 3usize.pow(12));
    }

    #[test]
    fn fractal_dimension_values() {
        let d2 = fractal_dimension(p(2), 2).unwrap();
        assert!((d2.value - 3f64.log2()).abs() < 1e-12);
        assert!((d2.value - 1.585).abs() < 1e-3);
        let d3 = fractal_dimension(p(3), 2).unwrap();
        assert!((d3.value - 1.631).abs() < 1e-3);
        let d5 = fractal_dimension(p(5), 2).unwrap();
        assert!((d5.value - 15f64.ln() / 5f64.ln()).abs() < 1e-12);
        assert_eq!(d5.exact_base, 15);
        assert_eq!(fractal_dimension(p(2), 3).unwrap().value, 2.0);
    }

    #[test]
    fn self_similar_blocks() {
        let b2 = pascal_matrix(p(2), 3).unwrap();
        let small = pascal_matrix(p(2), 2).unwrap();
        assert_eq!(&self_similar_block(&b2, 1, 0).unwrap(), small.as_matrix());
        assert_eq!(self_similar_block(&b2, 0, 1).unwrap().weight(), 0);
        let b3 = pascal_matrix(p(3), 2).unwrap();
        let small3 = pascal_matrix(p(3), 1).unwrap();
        assert_eq!(
            self_similar_block(&b3, 2, 1).unwrap(),
            small3.as_matrix().scale(2)
        );
        assert_eq!(
            self_similar_block(&small3, 0, 0),
            Err(PascalError::BlockLevel)
        );
        assert!(matches!(
            self_similar_block(&b3, 3, 0),
            Err(PascalError::BlockIndex { .. })
        ));
    }

    #[test]
    fn inverse_examples() {
        let q = p(3);
        let inv = pascal_inverse(q, 1).unwrap();
        assert_eq!(
            inv.to_rows(),
            vec![vec![1, 0, 0], vec![2, 1, 0], vec![1, 1, 1]]
        );
        assert_eq!(
            pascal_matrix(q, 1).unwrap().as_matrix().mul(&inv),
            FpMatrix::identity(q, 3)
        );
        for m in 1..=4 {
            let b = pascal_matrix(p(2), m).unwrap();
            assert_eq!(&pascal_inverse(p(2), m).unwrap(), b.as_matrix());
        }
    }

    #[test]
    fn inverse_forms_agree() {
        for &(q, m) in &[(3u64, 2u32), (5, 2), (7, 1), (11, 1)] {
            let q = p(q);
            let signed = pascal_inverse(q, m).unwrap();
            assert_eq!(signed, pascal_inverse_reflected(q, m).unwrap());
            let b = pascal_matrix(q, m).unwrap();
            assert_eq!(b.as_matrix().mul(&signed), FpMatrix::identity(q, b.side()));
            for t in 0..b.side() {
                for r in 0..b.side() {
                    if (t + r) % 2 == 0 {
                        assert_eq!(signed.get(t, r), b.get(t, r));
                    }
                }
            }
        }
    }

    #[test]
    fn power_examples() {
        for &q in &[2u64, 3, 5] {
            let q = p(q);
            for m in 1..=2 {
                let b = pascal_matrix(q, m).unwrap();
                assert_eq!(&pascal_power(q, m, 1).unwrap(), b.as_matrix());
                assert_eq!(
                    pascal_power(q, m, u64::from(q.get())).unwrap(),
                    FpMatrix::identity(q, b.side())
                );
                assert_eq!(
                    pascal_power(q, m, u64::from(q.get()) - 1).unwrap(),
                    pascal_inverse(q, m).unwrap()
                );
                for c in 0..=u64::from(q.get()) {
                    assert_eq!(
                        pascal_power(q, m, c).unwrap(),
                        pascal_power_by_rule(q, m, c).unwrap(),
                        "c = {c}"
                    );
                }
            }
        }
    }

    #[test]
    fn submatrix_reference_instances() {
        let q = p(5);
        let a = submatrix_row_pick(q, &[2, 3, 4], 2).unwrap();
        assert_eq!(
            a.matrix.to_rows(),
            vec![vec![1, 2, 1], vec![1, 3, 3], vec![1, 4, 1]]
        );
        assert!(a.is_consistent());
        let a = submatrix_col_pick(q, &[1, 2, 3], 2).unwrap();
        assert_eq!(
            a.matrix.to_rows(),
            vec![vec![2, 1, 0], vec![3, 3, 1], vec![4, 1, 4]]
        );
        assert!(a.is_consistent());
    }

    #[test]
    fn submatrix_small_cases() {
        for &q in &[2u64, 3, 7] {
            let q = p(q);
            for x in 0..q.get() {
                let w = submatrix_row_pick(q, &[x], 0).unwrap();
                assert_eq!(w.matrix.to_rows(), vec![vec![1]]);
                assert!(w.is_consistent());
                let w = submatrix_col_pick(q, &[x], 0).unwrap();
                assert_ne!(w.matrix.get(0, 0), 0);
                assert!(w.is_consistent());
            }
        }
        let q = p(7);
        assert!(submatrix_row_pick(q, &[0, 3, 5], 2).unwrap().is_consistent());
        assert!(submatrix_col_pick(q, &[0, 1, 6], 2).unwrap().is_consistent());
    }

    #[test]
    fn submatrix_rejects_malformed_lists() {
        let q = p(5);
        assert!(matches!(
            submatrix_row_pick(q, &[3, 2], 1),
            Err(PascalError::IndexList { .. })
        ));
        assert!(submatrix_row_pick(q, &[1, 1], 1).is_err());
        assert!(submatrix_row_pick(q, &[1, 2, 3], 1).is_err());
        assert!(submatrix_col_pick(q, &[1, 5], 1).is_err());
        assert!(submatrix_col_pick(q, &[0, 1, 2, 3, 4, 5], 5).is_err());
    }

    #[test]
    fn matrix_export_header() {
        let json = serde_json::to_value(pascal_matrix(p(2), 1).unwrap().export()).unwrap();
        assert_eq!(
            json,
            serde_json::json!({"p": 2, "m": 1, "L": 2, "rows": [[1, 0], [1, 1]]})
        );
    }
}
