//! Brute-force distance oracles, the Singleton and local code bounds, and
//! saturation tables.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::automaton::{evolve, AutomatonError, LatticeSlice, Rule, Shape};
use crate::codespace::{code_params, CodeError, CodeParams, FractalCode, LogicalWord};
use crate::field::Prime;

/// Default ceiling on the number of logical words enumerated.
pub const DEFAULT_WORD_CAP: u128 = 1 << 24;

const CHUNK: u128 = 1 << 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Automaton(#[from] AutomatonError),
    #[error("exhaustive search needs {required} words (p^k with p = {p}, k = {k}), above the cap of {cap}")]
    CapExceeded {
        required: String,
        p: u32,
        k: usize,
        cap: u128,
    },
    #[error("the admissible set is empty, so there are no nonzero words")]
    NoWords,
    #[error("admissible position {0} lies outside the position lattice")]
    Position(usize),
    #[error("lists must be nonempty")]
    EmptyList,
}

/// Result of an exhaustive minimum-weight search.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DistanceReport {
    pub rule: String,
    pub params: Option<CodeParams>,
    pub extents: Vec<usize>,
    pub k_spins: usize,
    pub oracle_d: u64,
    pub theory_d: Option<u128>,
    pub codewords_searched: u128,
    pub minimizing_word: LogicalWord,
}

impl DistanceReport {
    /// `oracle_d = theory_d`; vacuously true without a theory value.
    pub fn agrees(&self) -> bool {
        self.theory_d
            .is_none_or(|d| u128::from(self.oracle_d) == d)
    }
}

/// Spacetime lattice for [`brute_force_distance_rule`]: time extent and
/// position extents.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Geometry {
    pub time: usize,
    pub positions: Vec<usize>,
}

impl Geometry {
    /// The fractal-code lattice: time L, positions 2L per axis.
    pub fn code(p: Prime, m: u32, dim: usize) -> Result<Self, AnalysisError> {
        let params = code_params(p, m, dim)?;
        let e = params.extents();
        Ok(Geometry {
            time: e[0],
            positions: e[1..].to_vec(),
        })
    }

    /// Flat position indices with coordinate sum below `limit`.
    pub fn simplex_positions(&self, limit: usize) -> Vec<usize> {
        Shape::new(self.positions.clone())
            .coords()
            .enumerate()
            .filter(|(_, c)| c.iter().sum::<usize>() < limit)
            .map(|(i, _)| i)
            .collect()
    }
}

fn check_cap(p: Prime, k: usize, cap: u128) -> Result<u128, AnalysisError> {
    let q = u128::from(p.get());
    match q.checked_pow(k as u32) {
        Some(total) if total <= cap => Ok(total),
        total => Err(AnalysisError::CapExceeded {
            required: total.map_or_else(|| format!("{q}^{k}"), |t| t.to_string()),
            p: p.get(),
            k,
            cap,
        }),
    }
}

/// Minimum weight of `Σ w_i·g_i` over nonzero words `w ∈ F_p^k`, with the
/// lexicographically smallest minimizer (`w_0` most significant). Words are
/// walked in that order with an odometer: raising digit i by one adds `g_i`.
fn min_weight(p: Prime, generators: &[Vec<u32>]) -> (u64, Vec<u32>) {
    let k = generators.len();
    let q = u128::from(p.get());
    let total = q.pow(k as u32);
    let n = generators[0].len();
    let chunks: Vec<u128> = (0..total.div_ceil(CHUNK)).collect();
    let (weight, index) = chunks
        .par_iter()
        .map(|&chunk| {
            let start = (chunk * CHUNK).max(1);
            let end = ((chunk + 1) * CHUNK).min(total);
            let mut digits = vec![0u32; k];
            let mut rest = start;
            for d in digits.iter_mut().rev() {
                *d = (rest % q) as u32;
                rest /= q;
            }
            let mut acc = vec![0u32; n];
            for (g, &c) in generators.iter().zip(&digits) {
                if c != 0 {
                    for (a, &x) in acc.iter_mut().zip(g) {
                        *a = p.add(*a, p.mul(c, x));
                    }
                }
            }
            let mut best = (u64::MAX, u128::MAX);
            for index in start..end {
                if index > start {
                    for j in (0..k).rev() {
                        for (a, &x) in acc.iter_mut().zip(&generators[j]) {
                            *a = p.add(*a, x);
                        }
                        digits[j] += 1;
                        if digits[j] < p.get() {
                            break;
                        }
                        digits[j] = 0;
                    }
                }
                let w = acc.iter().filter(|&&x| x != 0).count() as u64;
                if w < best.0 {
                    best = (w, index);
                }
            }
            best
        })
        .min()
        .expect("at least one nonzero word");
    let mut word = vec![0u32; k];
    let mut rest = index;
    for d in word.iter_mut().rev() {
        *d = (rest % q) as u32;
        rest /= q;
    }
    (weight, word)
}

/// Exhaustive code distance of the fractal code: the minimum weight of
/// `encode(w)` over all nonzero logical words.
pub fn brute_force_distance(params: &CodeParams, cap: u128) -> Result<DistanceReport, AnalysisError> {
    let code = FractalCode::new(*params)?;
    let k = code.k();
    if k == 0 {
        return Err(AnalysisError::NoWords);
    }
    let total = check_cap(params.p, k, cap)?;
    let generators = (0..k)
        .map(|i| Ok(code.encode(&LogicalWord::unit(k, i))?.cells().to_vec()))
        .collect::<Result<Vec<_>, AnalysisError>>()?;
    let (oracle_d, word) = min_weight(params.p, &generators);
    Ok(DistanceReport {
        rule: "sierpinski".into(),
        params: Some(*params),
        extents: params.extents(),
        k_spins: k,
        oracle_d,
        theory_d: Some(params.d),
        codewords_searched: total - 1,
        minimizing_word: LogicalWord::new(word),
    })
}

/// Exhaustive minimum weight for an arbitrary linear rule: words live on
/// the `admissible` flat positions of the initial slice, codewords are their
/// evolutions over `geometry.time` slices. Reported as data, without a
/// theory value.
pub fn brute_force_distance_rule(
    rule: &Rule,
    geometry: &Geometry,
    admissible: &[usize],
    cap: u128,
) -> Result<DistanceReport, AnalysisError> {
    if admissible.is_empty() {
        return Err(AnalysisError::NoWords);
    }
    let p = rule.prime();
    let slice_len: usize = geometry.positions.iter().product();
    if let Some(&bad) = admissible.iter().find(|&&i| i >= slice_len) {
        return Err(AnalysisError::Position(bad));
    }
    let k = admissible.len();
    let total = check_cap(p, k, cap)?;
    let generators = admissible
        .iter()
        .map(|&pos| {
            let mut x0 = LatticeSlice::zeros(p, geometry.positions.clone());
            let coords = x0.shape().unravel(pos);
            x0.set(&coords, 1);
            Ok(evolve(&x0, geometry.time, rule)?.cells().to_vec())
        })
        .collect::<Result<Vec<_>, AnalysisError>>()?;
    let (oracle_d, word) = min_weight(p, &generators);
    let mut extents = vec![geometry.time];
    extents.extend_from_slice(&geometry.positions);
    Ok(DistanceReport {
        rule: "custom".into(),
        params: None,
        extents,
        k_spins: k,
        oracle_d,
        theory_d: None,
        codewords_searched: total - 1,
        minimizing_word: LogicalWord::new(word),
    })
}

/// `n − d + 1 ≥ k`.
pub fn singleton_bound_check(n: u128, k_bits: f64, d: u128) -> bool {
    n >= d && (n - d + 1) as f64 >= k_bits
}

const BOUND_NOTE: &str = "the local bound is asymptotic with an unspecified constant; \
only ratios and their trends are meaningful at finite size";

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub n: u128,
    pub k_bits: f64,
    pub d: u128,
    #[serde(rename = "D")]
    pub dim: usize,
    pub omega: f64,
    /// ℓ = d^{1/D}.
    pub ell: f64,
    /// `k (ω+ℓ)^D / ((ℓ+ω)^D − ℓ^D)`.
    pub required_n: f64,
    pub singleton_ok: bool,
    pub local_ok: bool,
    /// `k·d^{1/D} / n`.
    pub saturation_ratio: f64,
    pub note: &'static str,
}

pub fn local_code_bound_check(n: u128, k_bits: f64, d: u128, dim: usize, omega: f64) -> BoundReport {
    let dd = dim as i32;
    let ell = (d as f64).powf(1.0 / dim as f64);
    let outer = (omega + ell).powi(dd);
    let required_n = k_bits * outer / (outer - ell.powi(dd));
    BoundReport {
        n,
        k_bits,
        d,
        dim,
        omega,
        ell,
        required_n,
        singleton_ok: singleton_bound_check(n, k_bits, d),
        local_ok: n as f64 >= required_n,
        saturation_ratio: k_bits * ell / n as f64,
        note: BOUND_NOTE,
    }
}

/// The same report for a fractal code.
pub fn code_bounds(params: &CodeParams, omega: f64) -> BoundReport {
    local_code_bound_check(params.n, params.k_bits, params.d, params.dim, omega)
}

/// Baseline: a D-dimensional repetition code of n cells, k = 1, d = n.
pub fn repetition_code_bounds(n: u128, dim: usize, omega: f64) -> BoundReport {
    local_code_bound_check(n, 1.0, n, dim, omega)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SaturationRow {
    pub p: u32,
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
    pub ratio: f64,
    pub singleton_ok: bool,
    pub local_ok: bool,
}

pub const SATURATION_CSV_HEADER: &str = "p,m,D,L,n,k_spins,k_bits,d,dimension,ratio";

/// One row per (p, m), primes outermost, in the given order.
pub fn saturation_table(
    p_list: &[Prime],
    m_list: &[u32],
    dim: usize,
    omega: f64,
) -> Result<Vec<SaturationRow>, AnalysisError> {
    if p_list.is_empty() || m_list.is_empty() {
        return Err(AnalysisError::EmptyList);
    }
    let mut rows = Vec::with_capacity(p_list.len() * m_list.len());
    for &p in p_list {
        for &m in m_list {
            let params = code_params(p, m, dim)?;
            let b = code_bounds(&params, omega);
            rows.push(SaturationRow {
                p: p.get(),
                m,
                dim,
                side: params.side,
                n: params.n,
                k_spins: params.k_spins,
                k_bits: params.k_bits,
                d: params.d,
                dimension: params.dimension,
                ratio: b.saturation_ratio,
                singleton_ok: b.singleton_ok,
                local_ok: b.local_ok,
            });
        }
    }
    Ok(rows)
}

pub fn saturation_csv(rows: &[SaturationRow]) -> String {
    let mut out = String::from(SATURATION_CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{}\n",
            r.p, r.m, r.dim, r.side, r.n, r.k_spins, r.k_bits, r.d, r.dimension, r.ratio
        ));
    }
    out
}
