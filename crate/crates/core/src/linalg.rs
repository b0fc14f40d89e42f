//! Exact linear algebra over `Q` via fraction-free (Bareiss) elimination.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::Rat;

/// Row echelon form over the integers, with the pivot column of each row.
#[derive(Debug, Clone)]
pub struct Echelon {
    rows: Vec<Vec<BigInt>>,
    pivots: Vec<usize>,
    ncols: usize,
}

fn integer_row(row: &[Rat]) -> Vec<BigInt> {
    let lcm = row.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    row.iter().map(|c| c.numer() * (&lcm / c.denom())).collect()
}

impl Echelon {
    pub fn new(rows: &[Vec<Rat>], ncols: usize) -> Self {
        let mut m: Vec<Vec<BigInt>> = rows
            .iter()
            .map(|r| {
                assert_eq!(r.len(), ncols, "ragged matrix");
                integer_row(r)
            })
            .filter(|r| r.iter().any(|c| !c.is_zero()))
            .collect();
        let mut pivots = Vec::new();
        let mut prev = BigInt::one();
        let mut r = 0;
        for c in 0..ncols {
            if r == m.len() {
                break;
            }
            // smallest nonzero entry as pivot keeps intermediate sizes down
            let Some(p) = (r..m.len())
                .filter(|&i| !m[i][c].is_zero())
                .min_by_key(|&i| m[i][c].magnitude().bits())
            else {
                continue;
            };
            m.swap(r, p);
            let (top, rest) = m.split_at_mut(r + 1);
            let pivot_row = &top[r];
            let pv = pivot_row[c].clone();
            for row in rest.iter_mut() {
                let f = row[c].clone();
                for j in c + 1..ncols {
                    let v = &pv * &row[j] - &f * &pivot_row[j];
                    let (q, rem) = v.div_rem(&prev);
                    debug_assert!(rem.is_zero(), "Bareiss division must be exact");
                    row[j] = q;
                }
                row[c] = BigInt::zero();
            }
            prev = pv;
            pivots.push(c);
            r += 1;
        }
        m.truncate(r);
        Echelon {
            rows: m,
            pivots,
            ncols,
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Back substitution with the free variables fixed.
    fn back_substitute(&self, x: &mut [Rat], rhs: Option<&[Rat]>) {
        for (r, &pc) in self.pivots.iter().enumerate().rev() {
            let row = &self.rows[r];
            let mut acc = rhs.map_or_else(Rat::zero, |b| b[r].clone());
            for j in pc + 1..self.ncols {
                if !row[j].is_zero() && !x[j].is_zero() {
                    acc -= Rat::from_integer(row[j].clone()) * &x[j];
                }
            }
            x[pc] = acc / Rat::from_integer(row[pc].clone());
        }
    }

    /// One basis vector per free column, with a one in that column and zeros
    /// in the other free columns.
    pub fn nullspace(&self) -> Vec<Vec<Rat>> {
        let mut is_pivot = vec![false; self.ncols];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.ncols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut x = vec![Rat::zero(); self.ncols];
                x[free] = Rat::one();
                self.back_substitute(&mut x, None);
                x
            })
            .collect()
    }
}

pub fn rank(rows: &[Vec<Rat>], ncols: usize) -> usize {
    Echelon::new(rows, ncols).rank()
}

pub fn nullspace(rows: &[Vec<Rat>], ncols: usize) -> Vec<Vec<Rat>> {
    Echelon::new(rows, ncols).nullspace()
}

/// A solution of `A x = b`, or `None` when the system is inconsistent.
pub fn solve(rows: &[Vec<Rat>], rhs: &[Rat], ncols: usize) -> Option<Vec<Rat>> {
    assert_eq!(rows.len(), rhs.len());
    let augmented: Vec<Vec<Rat>> = rows
        .iter()
        .zip(rhs)
        .map(|(r, b)| {
            let mut v = r.clone();
            v.push(b.clone());
            v
        })
        .collect();
    let ech = Echelon::new(&augmented, ncols + 1);
    if ech.pivots.last() == Some(&ncols) {
        return None;
    }
    let mut x = vec![Rat::zero(); ncols + 1];
    x[ncols] = -Rat::one();
    ech.back_substitute(&mut x, None);
    x.truncate(ncols);
    Some(x)
}

/// Scales a vector so that its first nonzero entry is one.
pub fn normalize(v: &[Rat]) -> Vec<Rat> {
    match v.iter().find(|c| !c.is_zero()) {
        Some(c) => {
            let inv = c.recip();
            v.iter().map(|a| a * &inv).collect()
        }
        None => v.to_vec(),
    }
}

pub fn is_zero_vector(v: &[Rat]) -> bool {
    v.iter().all(Zero::is_zero)
}

pub fn mat_vec(rows: &[Vec<Rat>], x: &[Rat]) -> Vec<Rat> {
    rows.iter()
        .map(|r| r.iter().zip(x).map(|(a, b)| a * b).sum())
        .collect()
}

pub fn max_abs_numerator_bits(v: &[Rat]) -> u64 {
    v.iter().map(|c| c.numer().abs().bits()).max().unwrap_or(0)
}
