//! Linear cellular automata over F_p.
//!
//! A [`Rule`] updates every cell of a (D−1)-dimensional position lattice as a
//! fixed linear combination of cells at relative offsets:
//!
//! ```text
//! out(r) = Σ_taps coeff · in(r + offset)   (mod p)
//! ```
//!
//! so the Sierpinski rule `x(t+1)_r = x(t)_{r-1} + x(t)_r` has taps
//! `{[-1] → 1, [0] → 1}`. Stacking successive slices along a time axis gives
//! a D-dimensional [`SpinConfiguration`].

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::Prime;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AutomatonError {
    #[error("a rule needs at least one tap")]
    EmptyTaps,
    #[error("duplicate tap offset {0:?}")]
    DuplicateOffset(Vec<isize>),
    #[error("tap offset {offset:?} has {got} components, rule is {expected}-dimensional")]
    OffsetDimension {
        offset: Vec<isize>,
        expected: usize,
        got: usize,
    },
    #[error("tap coefficient {coeff} is not in 1..{p}")]
    Coefficient { coeff: u32, p: u32 },
    #[error("spatial dimension must be at least 1")]
    ZeroDimension,
    #[error("lattice extents {got:?} do not match the expected shape {expected:?}")]
    ExtentMismatch {
        expected: Vec<usize>,
        got: Vec<usize>,
    },
    #[error("lattice extents must be positive, got {0:?}")]
    EmptyExtent(Vec<usize>),
    #[error("value {value} at cell {index} is not a residue mod {p}")]
    ValueOutOfRange { index: usize, value: u32, p: u32 },
    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u32, u32),
    #[error("evolution needs at least one time step")]
    ZeroSteps,
}

/// How reads outside the position lattice are resolved.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Boundary {
    /// Indices wrap around each axis.
    #[default]
    Periodic,
    /// Reads outside the lattice see 0.
    OpenZero,
}

/// Row-major multi-index helper; the first axis is outermost.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Shape(Vec<usize>);

impl Shape {
    pub fn new(extents: Vec<usize>) -> Self {
        Shape(extents)
    }

    pub fn cube(rank: usize, side: usize) -> Self {
        Shape(vec![side; rank])
    }

    pub fn extents(&self) -> &[usize] {
        &self.0
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn len(&self) -> usize {
        self.0.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn flat(&self, coords: &[usize]) -> usize {
        debug_assert_eq!(coords.len(), self.0.len());
        coords
            .iter()
            .zip(&self.0)
            .fold(0, |acc, (&c, &e)| {
                debug_assert!(c < e);
                acc * e + c
            })
    }

    pub fn unravel(&self, mut flat: usize) -> Vec<usize> {
        let mut coords = vec![0; self.0.len()];
        for (slot, &e) in coords.iter_mut().zip(&self.0).rev() {
            *slot = flat % e;
            flat /= e;
        }
        coords
    }

    /// All coordinates in row-major order.
    pub fn coords(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        (0..self.len()).map(move |i| self.unravel(i))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Tap {
    pub offset: Vec<isize>,
    pub coeff: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rule {
    p: Prime,
    spatial_dim: usize,
    taps: Vec<Tap>,
    boundary: Boundary,
}

impl Rule {
    pub fn new(
        p: Prime,
        spatial_dim: usize,
        taps: Vec<Tap>,
        boundary: Boundary,
    ) -> Result<Self, AutomatonError> {
        if spatial_dim == 0 {
            return Err(AutomatonError::ZeroDimension);
        }
        if taps.is_empty() {
            return Err(AutomatonError::EmptyTaps);
        }
        for (i, tap) in taps.iter().enumerate() {
            if tap.offset.len() != spatial_dim {
                return Err(AutomatonError::OffsetDimension {
                    offset: tap.offset.clone(),
                    expected: spatial_dim,
                    got: tap.offset.len(),
                });
            }
            if tap.coeff == 0 || tap.coeff >= p.get() {
                return Err(AutomatonError::Coefficient {
                    coeff: tap.coeff,
                    p: p.get(),
                });
            }
            if taps[..i].iter().any(|t| t.offset == tap.offset) {
                return Err(AutomatonError::DuplicateOffset(tap.offset.clone()));
            }
        }
        Ok(Rule {
            p,
            spatial_dim,
            taps,
            boundary,
        })
    }

    /// `x(t+1)_r = x(t)_{r-1} + x(t)_r`.
    pub fn sierpinski(p: Prime) -> Self {
        Self::d_dimensional(p, 2)
    }

    /// `x(t+1)_r = x(t)_r + Σ_j x(t)_{r - e_j}` on a (D−1)-dimensional lattice.
    pub fn d_dimensional(p: Prime, dim: usize) -> Self {
        assert!(dim >= 2, "spacetime dimension must be at least 2");
        let spatial = dim - 1;
        let mut taps = vec![Tap {
            offset: vec![0; spatial],
            coeff: 1,
        }];
        for j in 0..spatial {
            let mut offset = vec![0; spatial];
            offset[j] = -1;
            taps.push(Tap { offset, coeff: 1 });
        }
        Self::new(p, spatial, taps, Boundary::Periodic).expect("valid rule")
    }

    /// `x(t+1)_r = x(t)_{r-1} + x(t)_r + x(t)_{r+1}`.
    pub fn three_tap(p: Prime) -> Self {
        let taps = [-1isize, 0, 1]
            .into_iter()
            .map(|o| Tap {
                offset: vec![o],
                coeff: 1,
            })
            .collect();
        Self::new(p, 1, taps, Boundary::Periodic).expect("valid rule")
    }

    /// `x(t+1)_r = x(t)_{r-1} + c·x(t)_r`; evolving the delta row generates
    /// the c-th power of the Pascal matrix. The self tap is dropped when
    /// `c ≡ 0`.
    pub fn pascal_power(p: Prime, c: u64) -> Self {
        let c = p.reduce(c);
        let mut taps = vec![Tap {
            offset: vec![-1],
            coeff: 1,
        }];
        if c != 0 {
            taps.push(Tap {
                offset: vec![0],
                coeff: c,
            });
        }
        Self::new(p, 1, taps, Boundary::Periodic).expect("valid rule")
    }

    pub fn with_boundary(mut self, boundary: Boundary) -> Self {
        self.boundary = boundary;
        self
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn spatial_dim(&self) -> usize {
        self.spatial_dim
    }

    pub fn taps(&self) -> &[Tap] {
        &self.taps
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    /// Applies one update to `slice`.
    pub fn step(&self, slice: &LatticeSlice) -> Result<LatticeSlice, AutomatonError> {
        self.check_slice(slice)?;
        let plan = StepPlan::new(self, slice.shape.extents());
        let mut out = vec![0; slice.values.len()];
        plan.apply(&slice.values, &mut out);
        Ok(LatticeSlice {
            p: self.p,
            shape: slice.shape.clone(),
            values: out,
        })
    }

    fn check_slice(&self, slice: &LatticeSlice) -> Result<(), AutomatonError> {
        if slice.p != self.p {
            return Err(AutomatonError::ModulusMismatch(slice.p.get(), self.p.get()));
        }
        if slice.shape.rank() != self.spatial_dim {
            return Err(AutomatonError::ExtentMismatch {
                expected: vec![0; self.spatial_dim],
                got: slice.shape.extents().to_vec(),
            });
        }
        Ok(())
    }
}

/// Precomputed gather table for one rule on one lattice.
pub(crate) struct StepPlan {
    p: Prime,
    // For every output cell, the (source, coeff) reads; absent sources are
    // open-zero reads that fell off the lattice.
    reads: Vec<Vec<(usize, u32)>>,
}

impl StepPlan {
    pub(crate) fn new(rule: &Rule, extents: &[usize]) -> Self {
        let shape = Shape::new(extents.to_vec());
        let mut reads = Vec::with_capacity(shape.len());
        let mut src = vec![0usize; extents.len()];
        for coords in shape.coords() {
            let mut cell = Vec::with_capacity(rule.taps.len());
            'taps: for tap in &rule.taps {
                for (axis, (&c, &o)) in coords.iter().zip(&tap.offset).enumerate() {
                    let e = extents[axis] as isize;
                    let s = c as isize + o;
                    src[axis] = match rule.boundary {
                        Boundary::Periodic => s.rem_euclid(e) as usize,
                        Boundary::OpenZero if (0..e).contains(&s) => s as usize,
                        Boundary::OpenZero => continue 'taps,
                    };
                }
                cell.push((shape.flat(&src), tap.coeff));
            }
            reads.push(cell);
        }
        StepPlan { p: rule.p, reads }
    }

    pub(crate) fn apply(&self, input: &[u32], out: &mut [u32]) {
        let p = u64::from(self.p.get());
        for (slot, cell) in out.iter_mut().zip(&self.reads) {
            let acc = cell
                .iter()
                .fold(0u64, |acc, &(s, c)| acc + u64::from(c) * u64::from(input[s]));
            *slot = (acc % p) as u32;
        }
    }
}

/// Values over the position lattice at one instant.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeSlice {
    p: Prime,
    shape: Shape,
    values: Vec<u32>,
}

/// The time-0 slice that seeds an evolution.
pub type InitialCondition = LatticeSlice;

impl LatticeSlice {
    pub fn new(p: Prime, extents: Vec<usize>, values: Vec<u32>) -> Result<Self, AutomatonError> {
        if extents.is_empty() || extents.contains(&0) {
            return Err(AutomatonError::EmptyExtent(extents));
        }
        let shape = Shape::new(extents);
        if values.len() != shape.len() {
            return Err(AutomatonError::ExtentMismatch {
                expected: shape.extents().to_vec(),
                got: vec![values.len()],
            });
        }
        if let Some((index, &value)) = values.iter().enumerate().find(|(_, &v)| v >= p.get()) {
            return Err(AutomatonError::ValueOutOfRange {
                index,
                value,
                p: p.get(),
            });
        }
        Ok(LatticeSlice { p, shape, values })
    }

    pub fn zeros(p: Prime, extents: Vec<usize>) -> Self {
        let n = extents.iter().product();
        LatticeSlice {
            p,
            shape: Shape::new(extents),
            values: vec![0; n],
        }
    }

    /// A single 1 at the origin.
    pub fn delta(p: Prime, extents: Vec<usize>) -> Self {
        let mut s = Self::zeros(p, extents);
        s.values[0] = 1 % p.get();
        s
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn extents(&self) -> &[usize] {
        self.shape.extents()
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    pub fn get(&self, coords: &[usize]) -> u32 {
        self.values[self.shape.flat(coords)]
    }

    pub fn set(&mut self, coords: &[usize], v: u32) {
        let i = self.shape.flat(coords);
        self.values[i] = v % self.p.get();
    }

    pub fn weight(&self) -> usize {
        crate::principal::weight(&self.values)
    }

    pub fn add(&self, other: &LatticeSlice) -> LatticeSlice {
        assert_eq!(self.shape, other.shape, "shape mismatch");
        let p = self.p;
        LatticeSlice {
            p,
            shape: self.shape.clone(),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| p.add(a, b))
                .collect(),
        }
    }
}

/// A full spacetime history: slices `x(0), …, x(T−1)` stacked along a leading
/// time axis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpinConfiguration {
    p: Prime,
    /// `[T, e_1, …, e_{D−1}]`.
    extents: Vec<usize>,
    cells: Vec<u32>,
}

impl SpinConfiguration {
    pub fn new(p: Prime, extents: Vec<usize>, cells: Vec<u32>) -> Result<Self, AutomatonError> {
        if extents.len() < 2 || extents.contains(&0) {
            return Err(AutomatonError::EmptyExtent(extents));
        }
        let n: usize = extents.iter().product();
        if cells.len() != n {
            return Err(AutomatonError::ExtentMismatch {
                expected: extents,
                got: vec![cells.len()],
            });
        }
        if let Some((index, &value)) = cells.iter().enumerate().find(|(_, &v)| v >= p.get()) {
            return Err(AutomatonError::ValueOutOfRange {
                index,
                value,
                p: p.get(),
            });
        }
        Ok(SpinConfiguration { p, extents, cells })
    }

    pub fn zeros(p: Prime, extents: Vec<usize>) -> Self {
        let n = extents.iter().product();
        SpinConfiguration {
            p,
            extents,
            cells: vec![0; n],
        }
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn extents(&self) -> &[usize] {
        &self.extents
    }

    pub fn time_extent(&self) -> usize {
        self.extents[0]
    }

    pub fn position_extents(&self) -> &[usize] {
        &self.extents[1..]
    }

    pub fn slice_len(&self) -> usize {
        self.extents[1..].iter().product()
    }

    pub fn cells(&self) -> &[u32] {
        &self.cells
    }

    pub fn slice(&self, t: usize) -> &[u32] {
        let n = self.slice_len();
        &self.cells[t * n..(t + 1) * n]
    }

    pub fn slice_at(&self, t: usize) -> LatticeSlice {
        LatticeSlice {
            p: self.p,
            shape: Shape::new(self.position_extents().to_vec()),
            values: self.slice(t).to_vec(),
        }
    }

    pub fn get(&self, coords: &[usize]) -> u32 {
        self.cells[Shape::new(self.extents.clone()).flat(coords)]
    }

    pub fn set(&mut self, coords: &[usize], v: u32) {
        let i = Shape::new(self.extents.clone()).flat(coords);
        self.cells[i] = v % self.p.get();
    }

    pub fn weight(&self) -> usize {
        crate::principal::weight(&self.cells)
    }

    /// Rows of a two-dimensional configuration (one row per time step).
    pub fn rows(&self) -> Option<Vec<Vec<u32>>> {
        (self.extents.len() == 2)
            .then(|| (0..self.time_extent()).map(|t| self.slice(t).to_vec()).collect())
    }

    pub fn add(&self, other: &SpinConfiguration) -> SpinConfiguration {
        self.zip_with(other, |p, a, b| p.add(a, b))
    }

    pub fn sub(&self, other: &SpinConfiguration) -> SpinConfiguration {
        self.zip_with(other, |p, a, b| p.sub(a, b))
    }

    pub fn scale(&self, c: u32) -> SpinConfiguration {
        let p = self.p;
        SpinConfiguration {
            p,
            extents: self.extents.clone(),
            cells: self.cells.iter().map(|&x| p.mul(x, c)).collect(),
        }
    }

    fn zip_with(
        &self,
        other: &SpinConfiguration,
        f: impl Fn(Prime, u32, u32) -> u32,
    ) -> SpinConfiguration {
        assert_eq!(self.p, other.p, "mixed moduli");
        assert_eq!(self.extents, other.extents, "shape mismatch");
        SpinConfiguration {
            p: self.p,
            extents: self.extents.clone(),
            cells: self
                .cells
                .iter()
                .zip(&other.cells)
                .map(|(&a, &b)| f(self.p, a, b))
                .collect(),
        }
    }
}

pub fn step(slice: &LatticeSlice, rule: &Rule) -> Result<LatticeSlice, AutomatonError> {
    rule.step(slice)
}

/// Runs `rule` from `x0`, producing `steps` time slices (row 0 is `x0`).
pub fn evolve(
    x0: &InitialCondition,
    steps: usize,
    rule: &Rule,
) -> Result<SpinConfiguration, AutomatonError> {
    if steps == 0 {
        return Err(AutomatonError::ZeroSteps);
    }
    rule.check_slice(x0)?;
    let plan = StepPlan::new(rule, x0.extents());
    let n = x0.values.len();
    let mut extents = Vec::with_capacity(x0.extents().len() + 1);
    extents.push(steps);
    extents.extend_from_slice(x0.extents());
    let mut cells = vec![0u32; n * steps];
    cells[..n].copy_from_slice(&x0.values);
    for t in 1..steps {
        let (done, rest) = cells.split_at_mut(t * n);
        plan.apply(&done[(t - 1) * n..], &mut rest[..n]);
    }
    Ok(SpinConfiguration {
        p: rule.p,
        extents,
        cells,
    })
}

/// True iff every consecutive pair of slices is related by `rule`.
pub fn is_rule_consistent(config: &SpinConfiguration, rule: &Rule) -> bool {
    if config.p != rule.p || config.position_extents().len() != rule.spatial_dim {
        return false;
    }
    let plan = StepPlan::new(rule, config.position_extents());
    let mut next = vec![0u32; config.slice_len()];
    (1..config.time_extent()).all(|t| {
        plan.apply(config.slice(t - 1), &mut next);
        next == config.slice(t)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn p(x: u64) -> Prime {
        Prime::new(x).unwrap()
    }

    fn slice(q: Prime, values: &[u32]) -> LatticeSlice {
        LatticeSlice::new(q, vec![values.len()], values.to_vec()).unwrap()
    }

    #[test]
    fn sierpinski_step_from_delta() {
        let q = p(2);
        let out = Rule::sierpinski(q).step(&slice(q, &[1, 0, 0, 0])).unwrap();
        assert_eq!(out.values(), &[1, 1, 0, 0]);
    }

    #[test]
    fn zero_slice_stays_zero() {
        for rule in [
            Rule::sierpinski(p(3)),
            Rule::three_tap(p(3)),
            Rule::pascal_power(p(3), 2),
        ] {
            let out = rule.step(&slice(p(3), &[0; 6])).unwrap();
            assert_eq!(out.values(), &[0; 6]);
        }
    }

    #[test]
    fn three_tap_step() {
        let q = p(2);
        let out = Rule::three_tap(q).step(&slice(q, &[0, 0, 1, 0, 0])).unwrap();
        assert_eq!(out.values(), &[0, 1, 1, 1, 0]);
    }

    #[test]
    fn periodic_wrap_and_open_zero() {
        let q = p(3);
        let s = slice(q, &[0, 0, 2]);
        let periodic = Rule::sierpinski(q).step(&s).unwrap();
        assert_eq!(periodic.values(), &[2, 0, 2]);
        let open = Rule::sierpinski(q)
            .with_boundary(Boundary::OpenZero)
            .step(&s)
            .unwrap();
        assert_eq!(open.values(), &[0, 0, 2]);
    }

    #[test]
    fn rule_validation() {
        let q = p(5);
        assert_eq!(
            Rule::new(q, 1, vec![], Boundary::Periodic),
            Err(AutomatonError::EmptyTaps)
        );
        let dup = vec![
            Tap { offset: vec![0], coeff: 1 },
            Tap { offset: vec![0], coeff: 2 },
        ];
        assert!(matches!(
            Rule::new(q, 1, dup, Boundary::Periodic),
            Err(AutomatonError::DuplicateOffset(_))
        ));
        let zero = vec![Tap { offset: vec![0], coeff: 0 }];
        assert!(matches!(
            Rule::new(q, 1, zero, Boundary::Periodic),
            Err(AutomatonError::Coefficient { .. })
        ));
        let big = vec![Tap { offset: vec![0], coeff: 5 }];
        assert!(matches!(
            Rule::new(q, 1, big, Boundary::Periodic),
            Err(AutomatonError::Coefficient { .. })
        ));
        let wrong_dim = vec![Tap { offset: vec![0, 1], coeff: 1 }];
        assert!(matches!(
            Rule::new(q, 1, wrong_dim, Boundary::Periodic),
            Err(AutomatonError::OffsetDimension { .. })
        ));
        assert_eq!(Rule::pascal_power(q, 5).taps().len(), 1);
    }

    #[test]
    fn step_rejects_wrong_rank() {
        let q = p(2);
        let s = LatticeSlice::zeros(q, vec![2, 2]);
        assert!(matches!(
            Rule::sierpinski(q).step(&s),
            Err(AutomatonError::ExtentMismatch { .. })
        ));
    }

    #[test]
    fn slice_validation() {
        let q = p(3);
        assert!(matches!(
            LatticeSlice::new(q, vec![2], vec![0, 3]),
            Err(AutomatonError::ValueOutOfRange { index: 1, .. })
        ));
        assert!(LatticeSlice::new(q, vec![3], vec![0, 1]).is_err());
        assert!(LatticeSlice::new(q, vec![0], vec![]).is_err());
    }

    #[test]
    fn evolve_reproduces_pascal_rows() {
        let q = p(2);
        let cfg = evolve(&LatticeSlice::delta(q, vec![4]), 4, &Rule::sierpinski(q)).unwrap();
        assert_eq!(
            cfg.rows().unwrap(),
            vec![
                vec![1, 0, 0, 0],
                vec![1, 1, 0, 0],
                vec![1, 0, 1, 0],
                vec![1, 1, 1, 1]
            ]
        );
        assert!(evolve(&LatticeSlice::delta(q, vec![4]), 0, &Rule::sierpinski(q)).is_err());
    }

    #[test]
    fn consistency_checks() {
        let q = p(3);
        let rule = Rule::sierpinski(q);
        let mut cfg = evolve(&slice(q, &[1, 2, 0, 0, 1, 0]), 6, &rule).unwrap();
        assert!(is_rule_consistent(&cfg, &rule));
        let v = cfg.get(&[3, 2]);
        cfg.set(&[3, 2], v + 1);
        assert!(!is_rule_consistent(&cfg, &rule));
        assert!(is_rule_consistent(&SpinConfiguration::zeros(q, vec![4, 6]), &rule));
        // a single row is trivially consistent
        assert!(is_rule_consistent(&SpinConfiguration::zeros(q, vec![1, 6]), &rule));
        // wrong rank
        assert!(!is_rule_consistent(
            &SpinConfiguration::zeros(q, vec![2, 2, 2]),
            &rule
        ));
    }

    #[test]
    fn evolution_is_linear() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for &(q, dim, side) in &[(2u64, 2usize, 8usize), (3, 2, 9), (3, 3, 6), (5, 3, 5)] {
            let q = p(q);
            let rule = Rule::d_dimensional(q, dim);
            let extents = vec![side; dim - 1];
            let n: usize = extents.iter().product();
            for _ in 0..100 {
                let u: Vec<u32> = (0..n).map(|_| rng.gen_range(0..q.get())).collect();
                let v: Vec<u32> = (0..n).map(|_| rng.gen_range(0..q.get())).collect();
                let u = LatticeSlice::new(q, extents.clone(), u).unwrap();
                let v = LatticeSlice::new(q, extents.clone(), v).unwrap();
                let lhs = evolve(&u.add(&v), side, &rule).unwrap();
                let rhs = evolve(&u, side, &rule)
                    .unwrap()
                    .add(&evolve(&v, side, &rule).unwrap());
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn boundary_equivalence_inside_causal_cone() {
        // Support below L on a width-2L lattice never reaches index 2L−1 nor
        // wraps within L steps of the {0, −e_j} rules.
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for &(q, dim, l) in &[(2u64, 2usize, 8usize), (3, 2, 9), (2, 3, 4), (3, 3, 3), (2, 4, 2)] {
            let q = p(q);
            let extents = vec![2 * l; dim - 1];
            let shape = Shape::new(extents.clone());
            for _ in 0..20 {
                let values = shape
                    .coords()
                    .map(|c| {
                        if c.iter().all(|&x| x < l) {
                            rng.gen_range(0..q.get())
                        } else {
                            0
                        }
                    })
                    .collect();
                let x0 = LatticeSlice::new(q, extents.clone(), values).unwrap();
                let periodic = Rule::d_dimensional(q, dim);
                let open = periodic.clone().with_boundary(Boundary::OpenZero);
                assert_eq!(
                    evolve(&x0, l, &periodic).unwrap(),
                    evolve(&x0, l, &open).unwrap()
                );
            }
        }
    }

    #[test]
    fn shape_round_trip() {
        let s = Shape::new(vec![3, 4, 2]);
        for i in 0..s.len() {
            assert_eq!(s.flat(&s.unravel(i)), i);
        }
        assert_eq!(s.unravel(5), vec![0, 2, 1]);
    }

    #[test]
    fn configuration_json_dump() {
        let q = p(2);
        let cfg = evolve(&LatticeSlice::delta(q, vec![2]), 2, &Rule::sierpinski(q)).unwrap();
        let json = serde_json::to_value(&cfg).unwrap();
        assert_eq!(
            json,
            serde_json::json!({"p": 2, "extents": [2, 2], "cells": [1, 0, 1, 1]})
        );
        let back: SpinConfiguration = serde_json::from_value(json).unwrap();
        assert_eq!(back, cfg);
    }
}
