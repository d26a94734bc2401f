//! Matrix rank over `F_p` as the order of a permutation group, and linear
//! solvability over `Z_m` as group membership.
//!
//! Column `j` of the codomain becomes a cycle of `m` points
//! `(j, 0) .. (j, m-1)`, numbered `j * m + w`. A vector `u ∈ Z_m^J` acts by
//! shifting layer `j` by `u_j`, so row `a` of `M` becomes the generator
//! shifting every layer by `M[a][j]` and the span is the row space.

use std::collections::HashSet;

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};
use crate::group::{GeneratorSet, StabilizerChain};
use crate::perm::Permutation;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixModP {
    rows: usize,
    cols: usize,
    entries: Vec<Vec<u64>>,
    modulus: u64,
}

impl MatrixModP {
    /// Rows must be rectangular; entries are reduced. An empty row list
    /// needs [`MatrixModP::zero`] to fix the column count.
    pub fn new(modulus: u64, entries: Vec<Vec<u64>>) -> Result<Self> {
        let cols = entries.first().map_or(0, Vec::len);
        MatrixModP::with_cols(modulus, cols, entries)
    }

    pub fn with_cols(modulus: u64, cols: usize, entries: Vec<Vec<u64>>) -> Result<Self> {
        if modulus < 2 {
            return Err(Error::MalformedMatrix(format!("modulus {modulus} is below 2")));
        }
        if let Some(r) = entries.iter().position(|r| r.len() != cols) {
            return Err(Error::MalformedMatrix(format!(
                "row {r} has {} entries, expected {cols}",
                entries[r].len()
            )));
        }
        let entries: Vec<Vec<u64>> = entries
            .into_iter()
            .map(|r| r.into_iter().map(|x| x % modulus).collect())
            .collect();
        Ok(MatrixModP {
            rows: entries.len(),
            cols,
            entries,
            modulus,
        })
    }

    pub fn zero(modulus: u64, rows: usize, cols: usize) -> Result<Self> {
        MatrixModP::with_cols(modulus, cols, vec![vec![0; cols]; rows])
    }

    pub fn identity(modulus: u64, n: usize) -> Result<Self> {
        let entries = (0..n)
            .map(|a| (0..n).map(|b| u64::from(a == b)).collect())
            .collect();
        MatrixModP::with_cols(modulus, n, entries)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn entries(&self) -> &[Vec<u64>] {
        &self.entries
    }

    pub fn get(&self, a: usize, j: usize) -> u64 {
        self.entries[a][j]
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VecModM {
    entries: Vec<u64>,
    modulus: u64,
}

impl VecModM {
    pub fn new(modulus: u64, entries: Vec<u64>) -> Result<Self> {
        if modulus < 2 {
            return Err(Error::MalformedMatrix(format!("modulus {modulus} is below 2")));
        }
        Ok(VecModM {
            entries: entries.into_iter().map(|x| x % modulus).collect(),
            modulus,
        })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }
}

/// The permutation of the layered domain shifting layer `j` by `shift[j]`.
fn shift_permutation(m: u64, shift: &[u64]) -> Permutation {
    let m32 = m as u32;
    let mut images = Vec::with_capacity(shift.len() * m as usize);
    for (j, &s) in shift.iter().enumerate() {
        let base = j as u32 * m32;
        images.extend((0..m32).map(|w| base + (w + s as u32) % m32));
    }
    Permutation::from_raw(images)
}

/// One generator per row: shifting by `v · row` for `v > 1` is a power of the
/// `v = 1` shift, so nothing else is needed.
pub fn image_group_generators(m: &MatrixModP) -> GeneratorSet {
    let gens = m
        .entries
        .iter()
        .map(|row| shift_permutation(m.modulus, row))
        .collect();
    GeneratorSet::new(m.cols * m.modulus as usize, gens)
        .expect("layered degrees agree")
        .assume_abelian()
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

/// `log_p |im(M)|`.
pub fn rank_p(m: &MatrixModP) -> Result<usize> {
    let p = m.modulus;
    if !is_prime(p) {
        return Err(Error::NonPrimeModulus(p));
    }
    let order = image_group_generators(m).order();
    let base = BigUint::from(p);
    let mut power = BigUint::one();
    let mut r = 0;
    while power < order {
        power *= &base;
        r += 1;
    }
    if power != order {
        return Err(Error::NonPowerOrder {
            order: order.to_string(),
            modulus: p,
        });
    }
    Ok(r)
}

/// Whether `x M = Y` has a solution `x ∈ Z_m^I`, i.e. `Y` lies in the row
/// span. Valid for composite moduli.
pub fn solvable_mod_m(m: &MatrixModP, y: &VecModM) -> Result<bool> {
    if y.len() != m.cols {
        return Err(Error::LengthMismatch {
            expected: m.cols,
            found: y.len(),
        });
    }
    if y.modulus != m.modulus {
        return Err(Error::MalformedMatrix(format!(
            "vector modulus {} differs from matrix modulus {}",
            y.modulus, m.modulus
        )));
    }
    let chain = StabilizerChain::build(&image_group_generators(m));
    chain.contains(&shift_permutation(m.modulus, &y.entries))
}

fn inverse_mod(a: u64, p: u64) -> u64 {
    // Fermat; p is prime and small
    let mut result = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    result
}

/// Row-echelon rank over `F_p`.
pub fn gauss_rank(m: &MatrixModP) -> Result<usize> {
    let p = m.modulus;
    if !is_prime(p) {
        return Err(Error::NonPrimeModulus(p));
    }
    let mut a = m.entries.clone();
    let mut rank = 0;
    for col in 0..m.cols {
        let Some(pivot) = (rank..a.len()).find(|&r| a[r][col] != 0) else {
            continue;
        };
        a.swap(rank, pivot);
        let inv = inverse_mod(a[rank][col], p);
        for x in a[rank].iter_mut() {
            *x = *x * inv % p;
        }
        for r in 0..a.len() {
            if r != rank && a[r][col] != 0 {
                let f = a[r][col];
                for c in 0..m.cols {
                    a[r][c] = (a[r][c] + (p - f) * a[rank][c]) % p;
                }
            }
        }
        rank += 1;
    }
    Ok(rank)
}

/// All vectors of the row span, by breadth-first closure. Fails past `cap`.
pub fn image_bruteforce(m: &MatrixModP, cap: usize) -> Result<HashSet<Vec<u64>>> {
    let md = m.modulus;
    let zero = vec![0; m.cols];
    let mut seen = HashSet::from([zero.clone()]);
    let mut queue = vec![zero];
    while let Some(v) = queue.pop() {
        for row in &m.entries {
            let w: Vec<u64> = v.iter().zip(row).map(|(x, y)| (x + y) % md).collect();
            if seen.insert(w.clone()) {
                if seen.len() > cap {
                    return Err(Error::CapExceeded { cap });
                }
                queue.push(w);
            }
        }
    }
    Ok(seen)
}
