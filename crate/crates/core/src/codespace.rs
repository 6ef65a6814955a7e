//! The fractal code for given (p, m, D): admissible initial slices, encoding
//! by evolution, membership, and the exact parameters.
//!
//! A codeword is a spin configuration on an `L × 2L × ⋯ × 2L` lattice
//! (time first) generated by the D-dimensional Sierpinski rule from an
//! initial slice that vanishes wherever the coordinate sum reaches L.

use serde::Serialize;
use thiserror::Error;

use crate::automaton::{
    evolve, is_rule_consistent, AutomatonError, LatticeSlice, Rule, Shape, SpinConfiguration,
};
use crate::field::Prime;
use crate::pascal::{binomial_u128, fractal_dimension, fractal_weight, PascalError};

/// Largest lattice (in cells) a code is materialized on.
pub const DEFAULT_LATTICE_CAP: u128 = 1 << 26;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodeError {
    #[error(transparent)]
    Pascal(#[from] PascalError),
    #[error(transparent)]
    Automaton(#[from] AutomatonError),
    #[error("integer overflow computing {0}")]
    Overflow(&'static str),
    #[error("a lattice of {cells} cells exceeds the cap of {cap}")]
    TooLarge { cells: u128, cap: u128 },
    #[error("a logical word needs {expected} values, got {got}")]
    WordLength { expected: usize, got: usize },
    #[error("word entry {index} = {value} is not a residue mod {p}")]
    WordValue { index: usize, value: u32, p: u32 },
    #[error("configuration extents {got:?} do not match the code lattice {expected:?}")]
    Extents {
        expected: Vec<usize>,
        got: Vec<usize>,
    },
    #[error("configurations differ in modulus or extents")]
    Mismatch,
}

/// Exact parameters of the code.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CodeParams {
    #[serde(serialize_with = "serialize_prime")]
    pub p: Prime,
    pub m: u32,
    #[serde(rename = "D")]
    pub dim: usize,
    #[serde(rename = "L")]
    pub side: u64,
    pub n: u128,
    pub k_spins: u128,
    pub k_bits: f64,
    pub d: u128,
    pub dimension: f64,
}

fn serialize_prime<S: serde::Serializer>(p: &Prime, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_u32(p.get())
}

impl CodeParams {
    /// Lattice extents `[L, 2L, …, 2L]`.
    pub fn extents(&self) -> Vec<usize> {
        let l = self.side as usize;
        let mut e = vec![2 * l; self.dim];
        e[0] = l;
        e
    }

    pub fn csv_header() -> &'static str {
        "p,m,D,L,n,k_spins,k_bits,d,dimension"
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{}",
            self.p,
            self.m,
            self.dim,
            self.side,
            self.n,
            self.k_spins,
            self.k_bits,
            self.d,
            self.dimension
        )
    }
}

/// n = L·(2L)^{D−1}, k = C(L+D−2, D−1), d = C(p+D−1, D)^m.
pub fn code_params(p: Prime, m: u32, dim: usize) -> Result<CodeParams, CodeError> {
    let dims = fractal_dimension(p, dim)?;
    let d = fractal_weight(p, m, dim)?;
    if m == 0 {
        return Err(PascalError::ZeroLevel.into());
    }
    let side = p.checked_power(m).ok_or(CodeError::Overflow("L = p^m"))?;
    let l = u128::from(side);
    let n = (2 * l)
        .checked_pow(dim as u32 - 1)
        .and_then(|x| x.checked_mul(l))
        .ok_or(CodeError::Overflow("n"))?;
    let k_spins =
        binomial_u128(l + dim as u128 - 2, dim as u128 - 1).ok_or(CodeError::Overflow("k"))?;
    Ok(CodeParams {
        p,
        m,
        dim,
        side,
        n,
        k_spins,
        k_bits: k_spins as f64 * f64::from(p.get()).log2(),
        d,
        dimension: dims.value,
    })
}

/// Values on the admissible initial positions, in row-major order of the
/// position lattice.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct LogicalWord {
    pub values: Vec<u32>,
}

impl LogicalWord {
    pub fn new(values: Vec<u32>) -> Self {
        LogicalWord { values }
    }

    pub fn zeros(k: usize) -> Self {
        LogicalWord { values: vec![0; k] }
    }

    pub fn unit(k: usize, i: usize) -> Self {
        let mut values = vec![0; k];
        values[i] = 1;
        LogicalWord { values }
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&x| x == 0)
    }
}

/// A code materialized on its lattice.
#[derive(Clone, Debug)]
pub struct FractalCode {
    params: CodeParams,
    rule: Rule,
    positions: Shape,
    admissible: Vec<usize>,
}

impl FractalCode {
    pub fn new(params: CodeParams) -> Result<Self, CodeError> {
        Self::with_cap(params, DEFAULT_LATTICE_CAP)
    }

    pub fn with_cap(params: CodeParams, cap: u128) -> Result<Self, CodeError> {
        if params.n > cap {
            return Err(CodeError::TooLarge {
                cells: params.n,
                cap,
            });
        }
        let l = params.side as usize;
        let positions = Shape::new(params.extents()[1..].to_vec());
        let admissible = positions
            .coords()
            .enumerate()
            .filter(|(_, c)| c.iter().sum::<usize>() < l)
            .map(|(i, _)| i)
            .collect::<Vec<_>>();
        debug_assert_eq!(admissible.len() as u128, params.k_spins);
        Ok(FractalCode {
            rule: Rule::d_dimensional(params.p, params.dim),
            params,
            positions,
            admissible,
        })
    }

    pub fn params(&self) -> &CodeParams {
        &self.params
    }

    pub fn rule(&self) -> &Rule {
        &self.rule
    }

    pub fn k(&self) -> usize {
        self.admissible.len()
    }

    /// Flat indices (into the position lattice) of the admissible
    /// initial positions, in word order.
    pub fn admissible_positions(&self) -> &[usize] {
        &self.admissible
    }

    pub fn admissible_coords(&self) -> Vec<Vec<usize>> {
        self.admissible
            .iter()
            .map(|&i| self.positions.unravel(i))
            .collect()
    }

    pub fn word(&self, values: Vec<u32>) -> Result<LogicalWord, CodeError> {
        let w = LogicalWord::new(values);
        self.check_word(&w)?;
        Ok(w)
    }

    fn check_word(&self, w: &LogicalWord) -> Result<(), CodeError> {
        if w.values.len() != self.k() {
            return Err(CodeError::WordLength {
                expected: self.k(),
                got: w.values.len(),
            });
        }
        let p = self.params.p.get();
        if let Some((index, &value)) = w.values.iter().enumerate().find(|(_, &v)| v >= p) {
            return Err(CodeError::WordValue { index, value, p });
        }
        Ok(())
    }

    /// The full initial slice carrying `w` on the admissible positions.
    pub fn initial_slice(&self, w: &LogicalWord) -> Result<LatticeSlice, CodeError> {
        self.check_word(w)?;
        let mut values = vec![0u32; self.positions.len()];
        for (&pos, &v) in self.admissible.iter().zip(&w.values) {
            values[pos] = v;
        }
        Ok(LatticeSlice::new(
            self.params.p,
            self.positions.extents().to_vec(),
            values,
        )?)
    }

    pub fn encode(&self, w: &LogicalWord) -> Result<SpinConfiguration, CodeError> {
        let x0 = self.initial_slice(w)?;
        Ok(evolve(&x0, self.params.side as usize, &self.rule)?)
    }

    /// Rule-consistent and zero on the initial slice outside the admissible
    /// region.
    pub fn is_codeword(&self, c: &SpinConfiguration) -> Result<bool, CodeError> {
        let expected = self.params.extents();
        if c.extents() != expected.as_slice() || c.prime() != self.params.p {
            return Err(CodeError::Extents {
                expected,
                got: c.extents().to_vec(),
            });
        }
        let l = self.params.side as usize;
        let support_ok = self
            .positions
            .coords()
            .zip(c.slice(0))
            .all(|(coords, &v)| v == 0 || coords.iter().sum::<usize>() < l);
        Ok(support_ok && is_rule_consistent(c, &self.rule))
    }
}

pub fn encode(w: &LogicalWord, params: &CodeParams) -> Result<SpinConfiguration, CodeError> {
    FractalCode::new(*params)?.encode(w)
}

pub fn is_codeword(c: &SpinConfiguration, params: &CodeParams) -> Result<bool, CodeError> {
    FractalCode::new(*params)?.is_codeword(c)
}

/// Number of cells where the two configurations differ.
pub fn hamming_distance(c1: &SpinConfiguration, c2: &SpinConfiguration) -> Result<usize, CodeError> {
    if c1.prime() != c2.prime() || c1.extents() != c2.extents() {
        return Err(CodeError::Mismatch);
    }
    Ok(c1
        .cells()
        .iter()
        .zip(c2.cells())
        .filter(|(a, b)| a != b)
        .count())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pascal::pascal_matrix;

    fn p(x: u64) -> Prime {
        Prime::new(x).unwrap()
    }

    #[test]
    fn params_examples() {
        let c = code_params(p(2), 2, 2).unwrap();
        assert_eq!((c.side, c.n, c.k_spins, c.d), (4, 32, 4, 9));
        let c = code_params(p(2), 1, 3).unwrap();
        assert_eq!((c.side, c.n, c.k_spins, c.d), (2, 32, 3, 4));
        let c = code_params(p(3), 1, 2).unwrap();
        assert_eq!((c.side, c.n, c.k_spins, c.d), (3, 18, 3, 6));
        let c = code_params(p(2), 1, 4).unwrap();
        assert_eq!((c.n, c.k_spins, c.d), (128, 4, 5));
        assert!((code_params(p(3), 1, 2).unwrap().k_bits - 3.0 * 3f64.log2()).abs() < 1e-12);
    }

    #[test]
    fn k_spins_closed_forms() {
        for &q in &[2u64, 3, 5] {
            for m in 1..=3 {
                let l = u128::from(p(q).checked_power(m).unwrap());
                assert_eq!(code_params(p(q), m, 2).unwrap().k_spins, l);
                assert_eq!(code_params(p(q), m, 3).unwrap().k_spins, l * (l + 1) / 2);
                assert_eq!(
                    code_params(p(q), m, 4).unwrap().k_spins,
                    l * (l + 1) * (l + 2) / 6
                );
            }
        }
    }

    #[test]
    fn delta_word_is_pascal_block() {
        let params = code_params(p(2), 2, 2).unwrap();
        let code = FractalCode::new(params).unwrap();
        let cfg = code.encode(&LogicalWord::unit(4, 0)).unwrap();
        let b = pascal_matrix(p(2), 2).unwrap();
        for (t, row) in cfg.rows().unwrap().iter().enumerate() {
            assert_eq!(&row[..4], b.row(t));
            assert!(row[4..].iter().all(|&x| x == 0));
        }
        let zero = code.encode(&LogicalWord::zeros(4)).unwrap();
        assert_eq!(zero.weight(), 0);
        assert_eq!(hamming_distance(&zero, &cfg).unwrap(), 9);
        assert_eq!(hamming_distance(&cfg, &cfg).unwrap(), 0);
    }

    #[test]
    fn membership() {
        let params = code_params(p(3), 1, 2).unwrap();
        let code = FractalCode::new(params).unwrap();
        let w = code.word(vec![1, 2, 0]).unwrap();
        let mut c = code.encode(&w).unwrap();
        assert!(code.is_codeword(&c).unwrap());
        c.set(&[1, 2], (c.get(&[1, 2]) + 1) % 3);
        assert!(!code.is_codeword(&c).unwrap());

        // consistent evolution from a slice with support at r = L
        let mut x0 = LatticeSlice::zeros(p(3), vec![6]);
        x0.set(&[3], 1);
        let outside = evolve(&x0, 3, code.rule()).unwrap();
        assert!(!code.is_codeword(&outside).unwrap());

        let wrong = SpinConfiguration::zeros(p(3), vec![3, 5]);
        assert!(matches!(code.is_codeword(&wrong), Err(CodeError::Extents { .. })));
    }

    #[test]
    fn word_validation() {
        let code = FractalCode::new(code_params(p(2), 1, 2).unwrap()).unwrap();
        assert!(matches!(
            code.word(vec![1]),
            Err(CodeError::WordLength { expected: 2, got: 1 })
        ));
        assert!(matches!(
            code.word(vec![1, 2]),
            Err(CodeError::WordValue { index: 1, value: 2, p: 2 })
        ));
    }

    #[test]
    fn admissible_region_d3() {
        let code = FractalCode::new(code_params(p(2), 1, 3).unwrap()).unwrap();
        assert_eq!(
            code.admissible_coords(),
            vec![vec![0, 0], vec![0, 1], vec![1, 0]]
        );
    }

    #[test]
    fn lattice_cap() {
        let params = code_params(p(2), 10, 3).unwrap();
        assert!(matches!(
            FractalCode::new(params),
            Err(CodeError::TooLarge { .. })
        ));
    }
}
