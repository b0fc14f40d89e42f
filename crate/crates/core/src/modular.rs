//! Reduced Gröbner bases over `F_p` and their lift to `Q` by Chinese
//! remaindering and rational reconstruction.
//!
//! Lifted bases are only candidates; `grobner` verifies them exactly.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::chartpoly::{ChartPoly, Mono2};
use crate::grobner::MonomialOrder;
use crate::Rat;

const PRIMES: [u64; 48] = [
    4611686018427387847,
    4611686018427387817,
    4611686018427387787,
    4611686018427387761,
    4611686018427387751,
    4611686018427387737,
    4611686018427387733,
    4611686018427387709,
    4611686018427387701,
    4611686018427387631,
    4611686018427387617,
    4611686018427387587,
    4611686018427387461,
    4611686018427387421,
    4611686018427387409,
    4611686018427387329,
    4611686018427387323,
    4611686018427387301,
    4611686018427387271,
    4611686018427387241,
    4611686018427387139,
    4611686018427387131,
    4611686018427387127,
    4611686018427387113,
    4611686018427387091,
    4611686018427387073,
    4611686018427386981,
    4611686018427386923,
    4611686018427386911,
    4611686018427386903,
    4611686018427386897,
    4611686018427386887,
    4611686018427386707,
    4611686018427386663,
    4611686018427386611,
    4611686018427386551,
    4611686018427386471,
    4611686018427386389,
    4611686018427386351,
    4611686018427386329,
    4611686018427386323,
    4611686018427386309,
    4611686018427386287,
    4611686018427386231,
    4611686018427386207,
    4611686018427386203,
    4611686018427386201,
    4611686018427386081,
];

/// Terms in strictly descending order.
type PolyP = Vec<(Mono2, u64)>;

#[derive(Clone, Copy)]
struct Field {
    p: u64,
}

impl Field {
    fn mul(self, a: u64, b: u64) -> u64 {
        ((u128::from(a) * u128::from(b)) % u128::from(self.p)) as u64
    }

    fn sub(self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + (self.p - b)
        }
    }

    fn inv(self, a: u64) -> u64 {
        let (mut base, mut e, mut acc) = (a, self.p - 2, 1u64);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    fn reduce(self, c: &Rat) -> Option<u64> {
        let p = BigInt::from(self.p);
        let den = c.denom().mod_floor(&p);
        if den.is_zero() {
            return None;
        }
        let num = c.numer().mod_floor(&p);
        let to_u64 = |b: BigInt| b.to_u64_digits().1.first().copied().unwrap_or(0);
        Some(self.mul(to_u64(num), self.inv(to_u64(den))))
    }
}

fn desc(ord: MonomialOrder) -> impl Fn(&Mono2, &Mono2) -> Ordering {
    move |a, b| ord.cmp(b, a)
}

fn to_field(f: &ChartPoly, k: Field, ord: MonomialOrder) -> Option<PolyP> {
    let mut out = Vec::with_capacity(f.len());
    for (m, c) in f.terms() {
        let v = k.reduce(c)?;
        if v != 0 {
            out.push((*m, v));
        }
    }
    let cmp = desc(ord);
    out.sort_by(|a, b| cmp(&a.0, &b.0));
    Some(out)
}

/// `f − c·m·g`.
fn sub_mul(
    f: &[(Mono2, u64)],
    g: &[(Mono2, u64)],
    m: Mono2,
    c: u64,
    k: Field,
    ord: MonomialOrder,
) -> PolyP {
    let mut out = Vec::with_capacity(f.len() + g.len());
    let (mut i, mut j) = (0, 0);
    while i < f.len() || j < g.len() {
        let gm = g.get(j).map(|t| (t.0.mul(&m), k.mul(t.1, c)));
        match (f.get(i), gm) {
            (Some(&a), Some(b)) => match ord.cmp(&a.0, &b.0) {
                Ordering::Greater => {
                    out.push(a);
                    i += 1;
                }
                Ordering::Less => {
                    out.push((b.0, k.sub(0, b.1)));
                    j += 1;
                }
                Ordering::Equal => {
                    let v = k.sub(a.1, b.1);
                    if v != 0 {
                        out.push((a.0, v));
                    }
                    i += 1;
                    j += 1;
                }
            },
            (Some(&a), None) => {
                out.push(a);
                i += 1;
            }
            (None, Some(b)) => {
                out.push((b.0, k.sub(0, b.1)));
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    out
}

fn monic(f: PolyP, k: Field) -> PolyP {
    let inv = k.inv(f[0].1);
    f.into_iter().map(|(m, c)| (m, k.mul(c, inv))).collect()
}

/// Full reduction by monic divisors.
fn reduce(f: &[(Mono2, u64)], divisors: &[PolyP], k: Field, ord: MonomialOrder) -> PolyP {
    let mut cur: PolyP = f.to_vec();
    let mut rem = Vec::new();
    let mut start = 0;
    while start < cur.len() {
        let (m, c) = cur[start];
        match divisors.iter().find(|g| g[0].0.divides(&m)) {
            Some(g) => {
                cur = sub_mul(&cur[start..], g, g[0].0.quotient_of(&m), c, k, ord);
                start = 0;
            }
            None => {
                rem.push((m, c));
                start += 1;
            }
        }
    }
    rem
}

/// Reduced monic basis over `F_p`, ascending by leading monomial.
fn basis_mod_p(gens: &[PolyP], k: Field, ord: MonomialOrder) -> Vec<PolyP> {
    let mut basis: Vec<PolyP> = Vec::new();
    for g in gens {
        let r = reduce(g, &basis, k, ord);
        if !r.is_empty() {
            basis.push(monic(r, k));
        }
    }
    let mut pending: Vec<(usize, usize)> = (0..basis.len())
        .flat_map(|j| (0..j).map(move |i| (i, j)))
        .collect();
    let lcm_of = |b: &[PolyP], (i, j): (usize, usize)| b[i][0].0.lcm(&b[j][0].0);
    while !pending.is_empty() {
        let best = (0..pending.len())
            .min_by(|&a, &b| ord.cmp(&lcm_of(&basis, pending[a]), &lcm_of(&basis, pending[b])))
            .expect("nonempty");
        let (i, j) = pending.swap_remove(best);
        let (mi, mj) = (basis[i][0].0, basis[j][0].0);
        if mi.coprime(&mj) {
            continue;
        }
        let l = mi.lcm(&mj);
        let key = |a: usize, b: usize| (a.min(b), a.max(b));
        let chain = (0..basis.len()).any(|t| {
            t != i
                && t != j
                && basis[t][0].0.divides(&l)
                && !pending.contains(&key(i, t))
                && !pending.contains(&key(j, t))
        });
        if chain {
            continue;
        }
        let s = sub_mul(
            &basis[i]
                .iter()
                .map(|t| (t.0.mul(&mi.quotient_of(&l)), t.1))
                .collect::<Vec<_>>(),
            &basis[j],
            mj.quotient_of(&l),
            1,
            k,
            ord,
        );
        let r = reduce(&s, &basis, k, ord);
        if r.is_empty() {
            continue;
        }
        let n = basis.len();
        basis.push(monic(r, k));
        if basis[n][0].0 == Mono2::ONE {
            return vec![vec![(Mono2::ONE, 1)]];
        }
        pending.extend((0..n).map(|t| (t, n)));
    }
    let mut minimal: Vec<PolyP> = Vec::new();
    basis.sort_by(|a, b| ord.cmp(&a[0].0, &b[0].0));
    for g in basis {
        if minimal.iter().all(|h| !h[0].0.divides(&g[0].0)) {
            minimal.push(g);
        }
    }
    (0..minimal.len())
        .map(|t| {
            let others: Vec<PolyP> = minimal
                .iter()
                .enumerate()
                .filter(|&(u, _)| u != t)
                .map(|(_, h)| h.clone())
                .collect();
            let mut out = vec![minimal[t][0]];
            out.extend(reduce(&minimal[t][1..], &others, k, ord));
            out
        })
        .collect()
}

/// `a/b` with `|a|, |b| ≤ sqrt(m/2)` and `a ≡ b·u (mod m)`.
fn rational_reconstruction(u: &BigInt, m: &BigInt) -> Option<Rat> {
    let bound = (m >> 1usize).sqrt();
    let (mut r0, mut r1) = (m.clone(), u.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || t1.abs() > bound || !r1.gcd(&t1).is_one() {
        return None;
    }
    Some(Rat::new(r1, t1))
}

type Shape = Vec<Mono2>;

/// Pure powers of both variables, or the unit ideal.
fn finite(shape: &Shape) -> bool {
    shape.contains(&Mono2::ONE)
        || (shape.iter().any(|m| m.y == 0) && shape.iter().any(|m| m.x == 0))
}

/// Accumulated residues of the basis coefficients.
struct Lift {
    shape: Shape,
    modulus: BigInt,
    residues: Vec<BTreeMap<Mono2, BigInt>>,
}

impl Lift {
    fn start(g: &[PolyP], p: u64) -> Self {
        Lift {
            shape: g.iter().map(|h| h[0].0).collect(),
            modulus: BigInt::from(p),
            residues: g
                .iter()
                .map(|h| h.iter().map(|&(m, c)| (m, BigInt::from(c))).collect())
                .collect(),
        }
    }

    fn absorb(&mut self, g: &[PolyP], p: u64) {
        let pm = BigInt::from(p);
        // x ≡ r (mod M), x ≡ c (mod p): x = r + M·((c − r)·M⁻¹ mod p)
        let m_mod_p = self.modulus.mod_floor(&pm);
        let k = Field { p };
        let m_inv = k.inv(m_mod_p.to_u64_digits().1.first().copied().unwrap_or(0));
        for (acc, h) in self.residues.iter_mut().zip(g) {
            let fresh: BTreeMap<Mono2, u64> = h.iter().copied().collect();
            let monos: Vec<Mono2> = acc.keys().chain(fresh.keys()).copied().collect();
            for m in monos {
                let r = acc.get(&m).cloned().unwrap_or_default();
                let c = fresh.get(&m).copied().unwrap_or(0);
                let r_mod = r
                    .mod_floor(&pm)
                    .to_u64_digits()
                    .1
                    .first()
                    .copied()
                    .unwrap_or(0);
                let t = k.mul(k.sub(c, r_mod), m_inv);
                let x = r + &self.modulus * BigInt::from(t);
                if x.sign() == Sign::NoSign {
                    acc.remove(&m);
                } else {
                    acc.insert(m, x);
                }
            }
        }
        self.modulus *= pm;
    }

    fn reconstruct(&self, ord: MonomialOrder) -> Option<Vec<ChartPoly>> {
        self.residues
            .iter()
            .map(|acc| {
                let terms: Option<Vec<(Mono2, Rat)>> = acc
                    .iter()
                    .map(|(m, r)| rational_reconstruction(r, &self.modulus).map(|q| (*m, q)))
                    .collect();
                let p = ChartPoly::from_terms(terms?);
                let lead = p.leading_monomial(ord)?;
                (p.coeff(&lead).is_one()).then_some(p)
            })
            .collect()
    }
}

/// Candidate reduced bases of the ideal generated by `gens`, yielded each
/// time the reconstruction is stable across two consecutive primes. Stops at
/// the first prime whose basis is not zero-dimensional.
pub(crate) fn candidates(
    gens: &[ChartPoly],
    ord: MonomialOrder,
) -> impl Iterator<Item = Vec<ChartPoly>> + '_ {
    let mut primes = PRIMES.iter().copied();
    let mut lift: Option<Lift> = None;
    let mut last: Option<Vec<ChartPoly>> = None;
    std::iter::from_fn(move || {
        for p in primes.by_ref() {
            let k = Field { p };
            let Some(gp): Option<Vec<PolyP>> = gens.iter().map(|g| to_field(g, k, ord)).collect()
            else {
                continue;
            };
            // a generator losing its leading term is a bad reduction
            if gp
                .iter()
                .zip(gens)
                .any(|(h, g)| h.first().map(|t| t.0) != g.leading_monomial(ord))
            {
                continue;
            }
            let g = basis_mod_p(&gp, k, ord);
            let shape: Shape = g.iter().map(|h| h[0].0).collect();
            if !finite(&shape) {
                return None;
            }
            match lift.as_mut() {
                Some(l) if l.shape == shape => l.absorb(&g, p),
                // a shape change means one of the primes was bad; start over
                _ => {
                    lift = Some(Lift::start(&g, p));
                    last = None;
                    continue;
                }
            }
            let cand = lift.as_ref().expect("started").reconstruct(ord);
            if cand.is_some() && cand == last {
                return cand;
            }
            last = cand;
        }
        None
    })
}
