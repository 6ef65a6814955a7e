//! Principal vectors, matrices and tensors: the bases that decompose an
//! initial slice of a fractal code, and the weight lower bounds built on them.
//!
//! Every basis here has the same recursive shape. The rank-0 basis is the
//! scalar `[1]`. An element of the rank-k basis is indexed by `(𝐫, t)`,
//! where `𝐫` indexes a rank-(k−1) element: seed slice 0 of a k-dimensional
//! lattice (leading axis 0) with that element, evolve it `t` steps under
//! `x ← x + Σ_j x(· − e_j)` on a periodic lattice, and read off the result.
//! Rank 1 gives principal vectors B(t), rank 2 principal matrices B(a, t),
//! higher ranks principal tensors B(𝐫, t).
//!
//! Element `(𝐫, t)` vanishes beyond slice `t` along axis 0, and its slice `t`
//! is exactly the lower element `𝐫`. Decomposition is therefore a
//! back-substitution from the last slice down, recursing into the lower
//! basis one slice at a time.

use serde::Serialize;
use thiserror::Error;

use crate::automaton::{evolve, AutomatonError, LatticeSlice, Rule, Shape};
use crate::field::{DigitBinomials, Prime};
use crate::matrix::FpMatrix;
use crate::pascal::{side_checked, PascalError};

/// Largest `cells²` (elements × cells per element) a basis may hold.
pub const DEFAULT_BASIS_CAP: usize = 1 << 24;

/// Number of nonzero entries.
pub fn weight(values: &[u32]) -> usize {
    values.iter().filter(|&&x| x != 0).count()
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PrincipalError {
    #[error(transparent)]
    Pascal(#[from] PascalError),
    #[error(transparent)]
    Automaton(#[from] AutomatonError),
    #[error("expected an object with {expected} cells, got {got}")]
    Length { expected: usize, got: usize },
    #[error("this operation needs a rank-{expected} basis, got rank {got}")]
    Rank { expected: String, got: usize },
    #[error("the object is zero")]
    Zero,
    #[error("index {index:?} is outside 0..{bound}")]
    IndexOutOfRange { index: Vec<usize>, bound: usize },
    #[error("hypothesis violated: nonzero coefficient at {index:?} has index sum {sum} ≥ {limit}")]
    Hypothesis {
        index: Vec<usize>,
        sum: usize,
        limit: usize,
    },
}

/// Lattice width of a basis: `L = p^m`, or `2L` for the extended bases used
/// by the codes themselves.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Width {
    Standard,
    Extended,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrincipalBasis {
    p: Prime,
    m: u32,
    side: usize,
    rank: usize,
    width: usize,
    /// Element `e` occupies `elements[e * cells .. (e + 1) * cells]`.
    elements: Vec<u32>,
    lower: Option<Box<PrincipalBasis>>,
}

/// The 2L principal vectors B(t), length 2L, with `B(t + L) = (B(t), B(t))`.
pub type PrincipalBasis2D = PrincipalBasis;

impl PrincipalBasis {
    pub fn new(p: Prime, m: u32, rank: usize, width: Width) -> Result<Self, PrincipalError> {
        Self::with_cap(p, m, rank, width, DEFAULT_BASIS_CAP)
    }

    pub fn with_cap(
        p: Prime,
        m: u32,
        rank: usize,
        width: Width,
        cap: usize,
    ) -> Result<Self, PrincipalError> {
        if rank == 0 {
            return Err(PrincipalError::Rank {
                expected: "≥ 1".into(),
                got: 0,
            });
        }
        let side = side_checked(p, m, 1, usize::MAX)?;
        let w = match width {
            Width::Standard => side,
            Width::Extended => 2 * side,
        };
        let too_large = PascalError::TooLarge {
            cells: (w as u128).saturating_pow(2 * rank as u32),
            cap,
        };
        match w.checked_pow(2 * rank as u32) {
            Some(total) if total <= cap => {}
            _ => return Err(too_large.into()),
        }
        Ok(Self::build(p, m, side, rank, w))
    }

    fn build(p: Prime, m: u32, side: usize, rank: usize, w: usize) -> Self {
        if rank == 0 {
            return PrincipalBasis {
                p,
                m,
                side,
                rank,
                width: w,
                elements: vec![1],
                lower: None,
            };
        }
        let lower = Self::build(p, m, side, rank - 1, w);
        let rule = Rule::d_dimensional(p, rank + 1);
        let cells = w.pow(rank as u32);
        let mut elements = Vec::with_capacity(cells * cells);
        for e in 0..lower.len() {
            let mut seed = vec![0u32; cells];
            seed[..lower.cells()].copy_from_slice(lower.element(e));
            let seed = LatticeSlice::new(p, vec![w; rank], seed).expect("residues from a basis");
            let cfg = evolve(&seed, w, &rule).expect("rule matches lattice");
            elements.extend_from_slice(cfg.cells());
        }
        PrincipalBasis {
            p,
            m,
            side,
            rank,
            width: w,
            elements,
            lower: Some(Box::new(lower)),
        }
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn level(&self) -> u32 {
        self.m
    }

    /// `L = p^m`, regardless of the lattice width.
    pub fn side(&self) -> usize {
        self.side
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// Cells per element, `width^rank`.
    pub fn cells(&self) -> usize {
        self.width.pow(self.rank as u32)
    }

    /// Number of elements, equal to [`cells`](Self::cells).
    pub fn len(&self) -> usize {
        self.cells()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn index_shape(&self) -> Shape {
        Shape::cube(self.rank, self.width)
    }

    pub fn element(&self, flat: usize) -> &[u32] {
        let n = self.cells();
        &self.elements[flat * n..(flat + 1) * n]
    }

    /// Element `(r_1, …, r_{k−1}, t)`.
    pub fn element_at(&self, index: &[usize]) -> Result<&[u32], PrincipalError> {
        self.check_index(index)?;
        Ok(self.element(self.index_shape().flat(index)))
    }

    /// Principal vector B(t) of a rank-1 basis.
    pub fn vector(&self, t: usize) -> Result<&[u32], PrincipalError> {
        self.require_rank(1)?;
        self.element_at(&[t])
    }

    fn check_index(&self, index: &[usize]) -> Result<(), PrincipalError> {
        if index.len() != self.rank || index.iter().any(|&i| i >= self.width) {
            return Err(PrincipalError::IndexOutOfRange {
                index: index.to_vec(),
                bound: self.width,
            });
        }
        Ok(())
    }

    fn require_rank(&self, rank: usize) -> Result<(), PrincipalError> {
        if self.rank != rank {
            return Err(PrincipalError::Rank {
                expected: rank.to_string(),
                got: self.rank,
            });
        }
        Ok(())
    }

    /// Rank over F_p of all elements stacked as rows.
    pub fn stacked_rank(&self) -> usize {
        let n = self.cells();
        FpMatrix::from_vec(self.p, n, n, self.elements.clone()).rank()
    }

    /// Flat indices whose index sum is below `width`, the support allowed
    /// by the lemma hypotheses.
    pub fn admissible(&self) -> Vec<usize> {
        let shape = self.index_shape();
        (0..self.len())
            .filter(|&e| shape.unravel(e).iter().sum::<usize>() < self.width)
            .collect()
    }

    pub fn decompose(&self, v: &[u32]) -> Result<Decomposition, PrincipalError> {
        if v.len() != self.cells() {
            return Err(PrincipalError::Length {
                expected: self.cells(),
                got: v.len(),
            });
        }
        let v: Vec<u32> = v.iter().map(|&x| x % self.p.get()).collect();
        Ok(Decomposition {
            p: self.p,
            rank: self.rank,
            width: self.width,
            coeffs: self.solve(&v),
        })
    }

    fn solve(&self, v: &[u32]) -> Vec<u32> {
        let Some(lower) = &self.lower else {
            return v.to_vec();
        };
        let p = self.p;
        let n = lower.cells();
        let w = self.width;
        let mut residual = v.to_vec();
        let mut coeffs = vec![0u32; self.len()];
        for j in (0..w).rev() {
            let slice = &residual[j * n..(j + 1) * n];
            if slice.iter().all(|&x| x == 0) {
                continue;
            }
            let lower_coeffs = lower.solve(slice);
            for (e, &c) in lower_coeffs.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                let idx = e * w + j;
                coeffs[idx] = c;
                let elem = &self.element(idx)[..(j + 1) * n];
                for (r, &x) in residual[..(j + 1) * n].iter_mut().zip(elem) {
                    *r = p.sub(*r, p.mul(c, x));
                }
            }
        }
        coeffs
    }

    /// `Σ c·element` over all coefficients.
    pub fn reconstruct(&self, coeffs: &[u32]) -> Result<Vec<u32>, PrincipalError> {
        if coeffs.len() != self.len() {
            return Err(PrincipalError::Length {
                expected: self.len(),
                got: coeffs.len(),
            });
        }
        let p = self.p;
        let mut out = vec![0u32; self.cells()];
        for (e, &c) in coeffs.iter().enumerate() {
            let c = c % p.get();
            if c == 0 {
                continue;
            }
            for (o, &x) in out.iter_mut().zip(self.element(e)) {
                *o = p.add(*o, p.mul(c, x));
            }
        }
        Ok(out)
    }
}

/// Rank-1 basis of 2L principal vectors.
pub fn principal_basis_2d(p: Prime, m: u32) -> Result<PrincipalBasis2D, PrincipalError> {
    PrincipalBasis::new(p, m, 1, Width::Extended)
}

/// Coefficients of an object in a principal basis, indexed like its
/// elements.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    #[serde(serialize_with = "serialize_prime")]
    p: Prime,
    rank: usize,
    width: usize,
    coeffs: Vec<u32>,
}

fn serialize_prime<S: serde::Serializer>(p: &Prime, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_u32(p.get())
}

impl Decomposition {
    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn coefficients(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn coefficient(&self, index: &[usize]) -> u32 {
        self.coeffs[Shape::cube(self.rank, self.width).flat(index)]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// Index tuples with nonzero coefficient, in row-major order.
    pub fn support(&self) -> Vec<Vec<usize>> {
        let shape = Shape::cube(self.rank, self.width);
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(e, _)| shape.unravel(e))
            .collect()
    }

    fn check_hypothesis(&self, limit: usize) -> Result<(), PrincipalError> {
        match self
            .support()
            .into_iter()
            .find(|idx| idx.iter().sum::<usize>() >= limit)
        {
            Some(index) => Err(PrincipalError::Hypothesis {
                sum: index.iter().sum(),
                index,
                limit,
            }),
            None => Ok(()),
        }
    }
}

pub fn decompose_2d(v: &[u32], basis: &PrincipalBasis2D) -> Result<Decomposition, PrincipalError> {
    basis.require_rank(1)?;
    basis.decompose(v)
}

pub fn decompose_matrix(v: &FpMatrix, basis: &PrincipalBasis) -> Result<Decomposition, PrincipalError> {
    basis.require_rank(2)?;
    basis.decompose(v.as_slice())
}

/// Smallest index t ≥ 0 with c(t) ≠ 0.
pub fn t_min(d: &Decomposition) -> Result<usize, PrincipalError> {
    if d.rank != 1 {
        return Err(PrincipalError::Rank {
            expected: "1".into(),
            got: d.rank,
        });
    }
    d.coeffs
        .iter()
        .position(|&c| c != 0)
        .ok_or(PrincipalError::Zero)
}

/// The nested sets `R_0 ⊇ R_1 ⊇ … ⊇ R_k`: `R_0` is the support and `R_a`
/// keeps the members of `R_{a−1}` minimizing `Σ_{j ≥ a} r_j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RSets {
    pub sets: Vec<Vec<Vec<usize>>>,
}

impl RSets {
    pub fn get(&self, a: usize) -> &[Vec<usize>] {
        &self.sets[a]
    }

    /// The single element of the innermost set.
    pub fn last(&self) -> &[usize] {
        &self.sets.last().expect("at least R_0")[0]
    }
}

pub fn r_sets(d: &Decomposition) -> Result<RSets, PrincipalError> {
    let r0 = d.support();
    if r0.is_empty() {
        return Err(PrincipalError::Zero);
    }
    let mut sets = vec![r0];
    for a in 1..=d.rank {
        let prev = sets.last().expect("nonempty");
        let tail = |idx: &Vec<usize>| idx[a - 1..].iter().sum::<usize>();
        let best = prev.iter().map(tail).min().expect("nonempty");
        let next = prev.iter().filter(|idx| tail(idx) == best).cloned().collect();
        sets.push(next);
    }
    Ok(RSets { sets })
}

/// Outcome of a weight inequality `W(v) ≥ bound`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LemmaCheck {
    pub weight: usize,
    pub bound: usize,
    pub holds: bool,
}

impl LemmaCheck {
    fn new(weight: usize, bound: usize) -> Self {
        LemmaCheck {
            weight,
            bound,
            holds: weight >= bound,
        }
    }
}

fn nonzero(v: &[u32]) -> Result<(), PrincipalError> {
    if v.iter().all(|&x| x == 0) {
        Err(PrincipalError::Zero)
    } else {
        Ok(())
    }
}

/// `W(v) ≥ W(B(t_min))` for a vector in a rank-1 basis of width L or 2L.
pub fn check_lemma2(v: &[u32], basis: &PrincipalBasis2D) -> Result<LemmaCheck, PrincipalError> {
    basis.require_rank(1)?;
    let d = basis.decompose(v)?;
    nonzero(&d.coeffs)?;
    let t = t_min(&d)?;
    Ok(LemmaCheck::new(weight(v), weight(basis.element(t))))
}

/// `W(v) ≥ W(B(𝟎, t′))` with `(…, t′)` the element of the innermost R-set,
/// for any basis of rank ≥ 2. The hypothesis requires every nonzero
/// coefficient to have index sum below the basis width.
pub fn check_lemma6(v: &[u32], basis: &PrincipalBasis) -> Result<LemmaCheck, PrincipalError> {
    if basis.rank < 2 {
        return Err(PrincipalError::Rank {
            expected: "≥ 2".into(),
            got: basis.rank,
        });
    }
    let d = basis.decompose(v)?;
    nonzero(&d.coeffs)?;
    d.check_hypothesis(basis.width)?;
    let rs = r_sets(&d)?;
    let t = *rs.last().last().expect("rank ≥ 1");
    let mut index = vec![0; basis.rank];
    index[basis.rank - 1] = t;
    let bound = weight(basis.element_at(&index)?);
    Ok(LemmaCheck::new(weight(v), bound))
}

/// The rank-2 case of [`check_lemma6`]: `W(v) ≥ W(B(0, t′))`.
pub fn check_lemma5(v: &FpMatrix, basis: &PrincipalBasis) -> Result<LemmaCheck, PrincipalError> {
    basis.require_rank(2)?;
    check_lemma6(v.as_slice(), basis)
}

/// `W(v) ≥ W(v*)` where `v*` keeps only the R₁ terms of the decomposition.
pub fn check_lemma10(v: &FpMatrix, basis: &PrincipalBasis) -> Result<LemmaCheck, PrincipalError> {
    basis.require_rank(2)?;
    let d = basis.decompose(v.as_slice())?;
    nonzero(&d.coeffs)?;
    d.check_hypothesis(basis.width)?;
    let rs = r_sets(&d)?;
    let shape = basis.index_shape();
    let mut kept = vec![0u32; basis.len()];
    for idx in rs.get(1) {
        let e = shape.flat(idx);
        kept[e] = d.coeffs[e];
    }
    let v_star = basis.reconstruct(&kept)?;
    Ok(LemmaCheck::new(weight(v.as_slice()), weight(&v_star)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Lemma11Check {
    pub a: usize,
    pub t: usize,
    /// R₁ of the decomposition of B(a, t)ᵀ.
    pub r1: Vec<Vec<usize>>,
    /// B(0, t)ᵀ = B(0, t).
    pub symmetric: bool,
    pub holds: bool,
}

/// Decomposes B(a, t)ᵀ and checks `R₁ = {(0, t)}`, together with the
/// transpose symmetry of B(0, t). Requires `a + t` below the basis width.
pub fn check_lemma11(a: usize, t: usize, basis: &PrincipalBasis) -> Result<Lemma11Check, PrincipalError> {
    basis.require_rank(2)?;
    let w = basis.width;
    if a + t >= w {
        return Err(PrincipalError::Hypothesis {
            index: vec![a, t],
            sum: a + t,
            limit: w,
        });
    }
    let as_matrix = |cells: &[u32]| FpMatrix::from_vec(basis.p, w, w, cells.to_vec());
    let b = as_matrix(basis.element_at(&[a, t])?);
    let d = basis.decompose(b.transpose().as_slice())?;
    let r1 = r_sets(&d)?.get(1).to_vec();
    let b0 = as_matrix(basis.element_at(&[0, t])?);
    let symmetric = b0.transpose() == b0;
    let holds = symmetric && r1 == [vec![0, t]];
    Ok(Lemma11Check {
        a,
        t,
        r1,
        symmetric,
        holds,
    })
}

/// Element `index` of the rank-`index.len()` basis of width `w`, computed by
/// direct evolution without materializing the basis.
fn element_by_evolution(p: Prime, w: usize, index: &[usize]) -> Result<Vec<u32>, PrincipalError> {
    let Some((&t, rest)) = index.split_last() else {
        return Ok(vec![1]);
    };
    if t >= w {
        return Err(PrincipalError::IndexOutOfRange {
            index: index.to_vec(),
            bound: w,
        });
    }
    let lower = element_by_evolution(p, w, rest)?;
    let rank = index.len();
    let mut seed = vec![0u32; w.pow(rank as u32)];
    seed[..lower.len()].copy_from_slice(&lower);
    let seed = LatticeSlice::new(p, vec![w; rank], seed)?;
    let cfg = evolve(&seed, t + 1, &Rule::d_dimensional(p, rank + 1))?;
    Ok(cfg.slice(t).to_vec())
}

fn basis_width(p: Prime, m: u32, width: Width) -> Result<usize, PrincipalError> {
    let side = side_checked(p, m, 2, crate::pascal::DEFAULT_CELL_CAP)?;
    Ok(match width {
        Width::Standard => side,
        Width::Extended => 2 * side,
    })
}

/// B(a, t): layer t of the three-dimensional evolution seeded with B(a) in
/// row 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrincipalMatrix {
    pub a: usize,
    pub t: usize,
    pub p: Prime,
    pub m: u32,
    pub width: Width,
    pub matrix: FpMatrix,
}

pub fn principal_matrix(a: usize, t: usize, p: Prime, m: u32) -> Result<PrincipalMatrix, PrincipalError> {
    principal_matrix_with_width(a, t, p, m, Width::Standard)
}

/// As [`principal_matrix`] on a 2L×2L lattice, `a, t < 2L`.
pub fn principal_matrix_extended(
    a: usize,
    t: usize,
    p: Prime,
    m: u32,
) -> Result<PrincipalMatrix, PrincipalError> {
    principal_matrix_with_width(a, t, p, m, Width::Extended)
}

fn principal_matrix_with_width(
    a: usize,
    t: usize,
    p: Prime,
    m: u32,
    width: Width,
) -> Result<PrincipalMatrix, PrincipalError> {
    let w = basis_width(p, m, width)?;
    let cells = element_by_evolution(p, w, &[a, t])?;
    Ok(PrincipalMatrix {
        a,
        t,
        p,
        m,
        width,
        matrix: FpMatrix::from_vec(p, w, w, cells),
    })
}

/// Row-form of B(a, t) on the L×L lattice: row j is `B(t)_j · B(t + a − j)`,
/// where principal vectors past L wrap as `B(τ + L) = 2B(τ)`.
pub fn principal_matrix_row_form(a: usize, t: usize, p: Prime, m: u32) -> Result<FpMatrix, PrincipalError> {
    let side = basis_width(p, m, Width::Standard)?;
    if a >= side || t >= side {
        return Err(PrincipalError::IndexOutOfRange {
            index: vec![a, t],
            bound: side,
        });
    }
    let table = DigitBinomials::new(p);
    let wrapped = |tau: usize, r: usize| -> u32 {
        let v = table.binomial((tau % side) as u64, r as u64);
        if tau >= side {
            p.mul(2 % p.get(), v)
        } else {
            v
        }
    };
    Ok(FpMatrix::from_fn(p, side, side, |j, r| {
        let lead = table.binomial(t as u64, j as u64);
        if lead == 0 {
            return 0;
        }
        p.mul(lead, wrapped(t + a - j, r))
    }))
}

/// A principal tensor B(𝐫, t) of the D-dimensional code: a (D−1)-dimensional
/// array of side L.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrincipalTensor {
    pub index: Vec<usize>,
    pub p: Prime,
    pub m: u32,
    pub shape: Shape,
    pub cells: Vec<u32>,
}

impl PrincipalTensor {
    pub fn weight(&self) -> usize {
        weight(&self.cells)
    }
}

/// B(𝐫, t) for a D-dimensional code, `𝐫` of length D−2.
pub fn principal_tensor(
    r: &[usize],
    t: usize,
    p: Prime,
    m: u32,
    dim: usize,
) -> Result<PrincipalTensor, PrincipalError> {
    if dim < 2 || r.len() + 2 != dim {
        return Err(PrincipalError::Rank {
            expected: format!("{} (index length + 1)", r.len() + 1),
            got: dim.saturating_sub(1),
        });
    }
    let w = basis_width(p, m, Width::Standard)?;
    let mut index = r.to_vec();
    index.push(t);
    if index.iter().any(|&i| i >= w) {
        return Err(PrincipalError::IndexOutOfRange { index, bound: w });
    }
    let cells = element_by_evolution(p, w, &index)?;
    Ok(PrincipalTensor {
        index,
        p,
        m,
        shape: Shape::cube(dim - 1, w),
        cells,
    })
}
