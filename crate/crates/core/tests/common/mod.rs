//! Independent oracles in exact integer arithmetic.

#![allow(dead_code)]

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};

pub fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * i)
}

/// C(n, k) from factorials.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    factorial(n) / (factorial(k) * factorial(n - k))
}

pub fn binomial_mod(n: u64, k: u64, p: u32) -> u32 {
    (binomial(n, k) % p).to_u32().unwrap()
}

/// n! / (k_1! ⋯ k_j! (n − Σk)!) mod p, zero when Σk > n.
pub fn multinomial_mod(n: u64, ks: &[u64], p: u32) -> u32 {
    let s: u64 = ks.iter().sum();
    if s > n {
        return 0;
    }
    let den = ks
        .iter()
        .fold(factorial(n - s), |acc, &k| acc * factorial(k));
    ((factorial(n) / den) % p).to_u32().unwrap()
}

/// Integer determinant by Bareiss fraction-free elimination.
pub fn determinant(rows: &[Vec<i64>]) -> BigInt {
    let n = rows.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

pub fn mod_p(x: &BigInt, p: u32) -> u32 {
    let r = x % BigInt::from(p);
    let r = if r.is_negative() { r + BigInt::from(p) } else { r };
    r.to_u32().unwrap()
}

/// Cell (t, r) of the two-dimensional codeword with initial word `w`
/// on positions 0..L: x(t)_r = Σ_s w_s C(t, r − s) mod p.
pub fn codeword_2d(w: &[u32], l: usize, p: u32) -> Vec<u32> {
    let mut out = vec![0u32; l * 2 * l];
    for t in 0..l {
        for r in 0..2 * l {
            let mut acc = 0u64;
            for (s, &ws) in w.iter().enumerate() {
                if r >= s {
                    acc += u64::from(ws) * u64::from(binomial_mod(t as u64, (r - s) as u64, p));
                }
            }
            out[t * 2 * l + r] = (acc % u64::from(p)) as u32;
        }
    }
    out
}

/// Three-dimensional codeword: x(t)_{r1,r2} = Σ_s w_s multinomial(t; r1 − s1, r2 − s2).
pub fn codeword_3d(w: &[u32], positions: &[(usize, usize)], l: usize, p: u32) -> Vec<u32> {
    let side = 2 * l;
    let mut out = vec![0u32; l * side * side];
    for t in 0..l {
        for r1 in 0..side {
            for r2 in 0..side {
                let mut acc = 0u64;
                for (&(s1, s2), &ws) in positions.iter().zip(w) {
                    if ws != 0 && r1 >= s1 && r2 >= s2 {
                        let c = multinomial_mod(t as u64, &[(r1 - s1) as u64, (r2 - s2) as u64], p);
                        acc += u64::from(ws) * u64::from(c);
                    }
                }
                out[(t * side + r1) * side + r2] = (acc % u64::from(p)) as u32;
            }
        }
    }
    out
}
