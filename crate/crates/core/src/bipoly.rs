//! Sparse exact polynomials in the Cox coordinates `X0, X1, Y0, Y1` of `S_δ`.
//!
//! A monomial `X0^α X1^β Y0^γ Y1^μ` has bidegree `(α + β − δμ, γ + μ)`; a
//! polynomial is bi-homogeneous when all of its monomials share one bidegree,
//! and those are exactly the global sections of `O(d1, d2)`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::chartpoly::{ChartPoly, Mono2};
use crate::error::{Error, Result};
use crate::{text, Rat};

pub const VAR_NAMES: [&str; 4] = ["X0", "X1", "Y0", "Y1"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Var {
    X0,
    X1,
    Y0,
    Y1,
}

impl Var {
    pub const ALL: [Var; 4] = [Var::X0, Var::X1, Var::Y0, Var::Y1];

    pub fn index(self) -> usize {
        self as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct BiMonomial {
    pub alpha: u32,
    pub beta: u32,
    pub gamma: u32,
    pub mu: u32,
}

impl BiMonomial {
    pub const ONE: BiMonomial = BiMonomial::new(0, 0, 0, 0);

    pub const fn new(alpha: u32, beta: u32, gamma: u32, mu: u32) -> Self {
        BiMonomial {
            alpha,
            beta,
            gamma,
            mu,
        }
    }

    pub fn var(v: Var) -> Self {
        let mut e = [0; 4];
        e[v.index()] = 1;
        Self::from_exponents(e)
    }

    pub fn from_exponents(e: [u32; 4]) -> Self {
        Self::new(e[0], e[1], e[2], e[3])
    }

    pub fn exponents(&self) -> [u32; 4] {
        [self.alpha, self.beta, self.gamma, self.mu]
    }

    pub fn exponent(&self, v: Var) -> u32 {
        self.exponents()[v.index()]
    }

    pub fn total_degree(&self) -> u32 {
        self.alpha + self.beta + self.gamma + self.mu
    }

    pub fn bidegree(&self, delta: u32) -> BiDegree {
        bidegree_of(self, delta)
    }

    pub fn mul(&self, other: &BiMonomial) -> BiMonomial {
        let (a, b) = (self.exponents(), other.exponents());
        Self::from_exponents([a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]])
    }

    pub fn divides(&self, other: &BiMonomial) -> bool {
        self.exponents()
            .iter()
            .zip(other.exponents())
            .all(|(a, b)| *a <= b)
    }
}

/// Graded lexicographic order with `X0 > X1 > Y0 > Y1`.
impl Ord for BiMonomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.exponents().cmp(&other.exponents()))
    }
}

impl PartialOrd for BiMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for BiMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e = self.exponents();
        f.write_str(&text::render_terms([(&Rat::one(), &e[..])], &VAR_NAMES))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct BiDegree {
    pub d1: i64,
    pub d2: i64,
}

impl BiDegree {
    pub const fn new(d1: i64, d2: i64) -> Self {
        BiDegree { d1, d2 }
    }
}

impl Add for BiDegree {
    type Output = BiDegree;
    fn add(self, o: BiDegree) -> BiDegree {
        BiDegree::new(self.d1 + o.d1, self.d2 + o.d2)
    }
}

impl Sub for BiDegree {
    type Output = BiDegree;
    fn sub(self, o: BiDegree) -> BiDegree {
        BiDegree::new(self.d1 - o.d1, self.d2 - o.d2)
    }
}

impl fmt::Display for BiDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.d1, self.d2)
    }
}

/// `(α + β − δμ, γ + μ)`.
pub fn bidegree_of(m: &BiMonomial, delta: u32) -> BiDegree {
    BiDegree::new(
        i64::from(m.alpha) + i64::from(m.beta) - i64::from(delta) * i64::from(m.mu),
        i64::from(m.gamma) + i64::from(m.mu),
    )
}

/// Result of a bi-homogeneity test on a polynomial that passed it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bihomogeneity {
    /// The zero polynomial lies in every graded piece.
    Any,
    Exact(BiDegree),
}

impl Bihomogeneity {
    pub fn admits(&self, d: BiDegree) -> bool {
        match self {
            Bihomogeneity::Any => true,
            Bihomogeneity::Exact(e) => *e == d,
        }
    }
}

/// All monomials of bidegree `d` on `S_δ`, ordered by increasing total
/// degree and, within one total degree, by decreasing exponent vector.
pub fn monomial_basis(delta: u32, d: BiDegree) -> Vec<BiMonomial> {
    if d.d2 < 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    for mu in 0..=d.d2 {
        let xdeg = d.d1 + i64::from(delta) * mu;
        if xdeg < 0 {
            continue;
        }
        let gamma = (d.d2 - mu) as u32;
        for alpha in 0..=xdeg {
            out.push(BiMonomial::new(
                alpha as u32,
                (xdeg - alpha) as u32,
                gamma,
                mu as u32,
            ));
        }
    }
    out.sort_by(|a, b| {
        a.total_degree()
            .cmp(&b.total_degree())
            .then_with(|| b.exponents().cmp(&a.exponents()))
    });
    out
}

/// One of the four affine charts `U_ij = {X_i ≠ 0, Y_j ≠ 0}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ChartId {
    pub i: u8,
    pub j: u8,
}

/// What a Cox coordinate becomes on the standard slice of a chart.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum SliceValue {
    One,
    X,
    Y,
}

impl ChartId {
    pub const U00: ChartId = ChartId { i: 0, j: 0 };
    pub const U10: ChartId = ChartId { i: 1, j: 0 };
    pub const U01: ChartId = ChartId { i: 0, j: 1 };
    pub const U11: ChartId = ChartId { i: 1, j: 1 };
    /// Also the stratification order used for multiplicity counts.
    pub const ALL: [ChartId; 4] = [ChartId::U00, ChartId::U10, ChartId::U01, ChartId::U11];

    pub fn new(i: u8, j: u8) -> Option<Self> {
        (i < 2 && j < 2).then_some(ChartId { i, j })
    }

    pub fn name(&self) -> String {
        format!("U{}{}", self.i, self.j)
    }

    /// `(X0, X1, Y0, Y1) ↦ (1, x, 1, y)` on `U00` and so on: the coordinates
    /// with index `i` and `j` are set to one.
    pub(crate) fn slice(&self) -> [SliceValue; 4] {
        let (xi, xo) = if self.i == 0 {
            (SliceValue::One, SliceValue::X)
        } else {
            (SliceValue::X, SliceValue::One)
        };
        let (yi, yo) = if self.j == 0 {
            (SliceValue::One, SliceValue::Y)
        } else {
            (SliceValue::Y, SliceValue::One)
        };
        [xi, xo, yi, yo]
    }

    /// Exponent vectors (over `X0, X1, Y0, Y1`) of the two chart coordinate
    /// functions, e.g. `x00 = X1/X0`, `y00 = X0^δ Y1/Y0`,
    /// `y01 = Y0/(X0^δ Y1)`.
    pub fn coordinate_exponents(&self, delta: u32) -> [[i64; 4]; 2] {
        let d = i64::from(delta);
        let x = if self.i == 0 {
            [-1, 1, 0, 0]
        } else {
            [1, -1, 0, 0]
        };
        let (a, b) = if self.i == 0 { (d, 0) } else { (0, d) };
        let y = if self.j == 0 {
            [a, b, -1, 1]
        } else {
            [-a, -b, 1, -1]
        };
        [x, y]
    }

    /// The coordinate left free on the slice for the `X` pair (`X1` on
    /// `U0j`) and for the `Y` pair (`Y1` on `Ui0`).
    pub fn free_vars(&self) -> (Var, Var) {
        let xv = if self.i == 0 { Var::X1 } else { Var::X0 };
        let yv = if self.j == 0 { Var::Y1 } else { Var::Y0 };
        (xv, yv)
    }
}

impl fmt::Display for ChartId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// Sparse polynomial in `X0, X1, Y0, Y1` over the rationals, tagged with the
/// ambient `δ`. Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BiPoly {
    delta: u32,
    terms: BTreeMap<BiMonomial, Rat>,
}

impl BiPoly {
    pub fn zero(delta: u32) -> Self {
        BiPoly {
            delta,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(delta: u32) -> Self {
        Self::constant(delta, Rat::one())
    }

    pub fn constant(delta: u32, c: Rat) -> Self {
        Self::monomial(delta, BiMonomial::ONE, c)
    }

    pub fn monomial(delta: u32, m: BiMonomial, c: Rat) -> Self {
        let mut p = Self::zero(delta);
        p.add_term(m, c);
        p
    }

    pub fn var(delta: u32, v: Var) -> Self {
        Self::monomial(delta, BiMonomial::var(v), Rat::one())
    }

    pub fn from_terms<I: IntoIterator<Item = (BiMonomial, Rat)>>(delta: u32, terms: I) -> Self {
        let mut p = Self::zero(delta);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn delta(&self) -> u32 {
        self.delta
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &BiMonomial) -> Rat {
        self.terms.get(m).cloned().unwrap_or_else(Rat::zero)
    }

    /// Terms in increasing monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&BiMonomial, &Rat)> {
        self.terms.iter()
    }

    /// Highest term in graded lex order.
    pub fn leading_term(&self) -> Option<(&BiMonomial, &Rat)> {
        self.terms.iter().next_back()
    }

    pub(crate) fn add_term(&mut self, m: BiMonomial, c: Rat) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn check_delta(&self, other: &BiPoly) -> Result<()> {
        if self.delta == other.delta {
            Ok(())
        } else {
            Err(Error::DeltaMismatch(self.delta, other.delta))
        }
    }

    pub fn checked_add(&self, other: &BiPoly) -> Result<BiPoly> {
        self.check_delta(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &BiPoly) -> Result<BiPoly> {
        self.checked_add(&-other)
    }

    pub fn checked_mul(&self, other: &BiPoly) -> Result<BiPoly> {
        self.check_delta(other)?;
        let mut out = BiPoly::zero(self.delta);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rat) -> BiPoly {
        if c.is_zero() {
            return BiPoly::zero(self.delta);
        }
        BiPoly {
            delta: self.delta,
            terms: self.terms.iter().map(|(m, k)| (*m, k * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &BiMonomial) -> BiPoly {
        BiPoly {
            delta: self.delta,
            terms: self
                .terms
                .iter()
                .map(|(n, c)| (n.mul(m), c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, n: u32) -> BiPoly {
        let mut out = BiPoly::one(self.delta);
        for _ in 0..n {
            out = &out * self;
        }
        out
    }

    pub fn partial_derivative(&self, v: Var) -> BiPoly {
        let idx = v.index();
        let mut out = BiPoly::zero(self.delta);
        for (m, c) in &self.terms {
            let mut e = m.exponents();
            if e[idx] == 0 {
                continue;
            }
            let k = e[idx];
            e[idx] -= 1;
            out.add_term(
                BiMonomial::from_exponents(e),
                c * Rat::from_integer(k.into()),
            );
        }
        out
    }

    /// `Some(Any)` for zero, `Some(Exact(d))` when every monomial has
    /// bidegree `d`, `None` otherwise.
    pub fn is_bihomogeneous(&self) -> Option<Bihomogeneity> {
        let mut it = self.terms.keys().map(|m| m.bidegree(self.delta));
        let Some(first) = it.next() else {
            return Some(Bihomogeneity::Any);
        };
        it.all(|d| d == first)
            .then_some(Bihomogeneity::Exact(first))
    }

    /// True if this polynomial is a section of `O(d)`.
    pub fn has_bidegree(&self, d: BiDegree) -> bool {
        self.is_bihomogeneous().is_some_and(|h| h.admits(d))
    }

    /// Smallest exponent of `v` over all terms (zero for the zero polynomial).
    pub fn min_exponent(&self, v: Var) -> u32 {
        self.terms.keys().map(|m| m.exponent(v)).min().unwrap_or(0)
    }

    /// Exact division by a monomial; `None` if some term is not divisible.
    pub fn div_monomial(&self, m: &BiMonomial) -> Option<BiPoly> {
        let d = m.exponents();
        let mut terms = BTreeMap::new();
        for (n, c) in &self.terms {
            let e = n.exponents();
            if (0..4).any(|k| e[k] < d[k]) {
                return None;
            }
            let q = [e[0] - d[0], e[1] - d[1], e[2] - d[2], e[3] - d[3]];
            terms.insert(BiMonomial::from_exponents(q), c.clone());
        }
        Some(BiPoly {
            delta: self.delta,
            terms,
        })
    }

    /// Substitutes the action `(λX0, λX1, μY0, λ^{-δ}μY1)`.
    pub fn torus_scale(&self, lambda: &Rat, mu: &Rat) -> Result<BiPoly> {
        if lambda.is_zero() || mu.is_zero() {
            return Err(Error::ZeroScalar);
        }
        let mut out = BiPoly::zero(self.delta);
        for (m, c) in &self.terms {
            let d = m.bidegree(self.delta);
            let factor = rat_pow(lambda, d.d1) * rat_pow(mu, d.d2);
            out.add_term(*m, c * factor);
        }
        Ok(out)
    }

    /// Evaluates at a point of `Q^4`.
    pub fn eval(&self, point: &[Rat; 4]) -> Rat {
        let mut acc = Rat::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (k, e) in m.exponents().iter().enumerate() {
                t *= rat_pow(&point[k], i64::from(*e));
            }
            acc += t;
        }
        acc
    }

    /// Plain substitution of the chart slice, no homogeneity check.
    pub(crate) fn substitute_chart(&self, chart: ChartId) -> ChartPoly {
        let slice = chart.slice();
        let mut out = ChartPoly::zero();
        for (m, c) in &self.terms {
            let mut mono = Mono2::new(0, 0);
            for (k, e) in m.exponents().iter().enumerate() {
                match slice[k] {
                    SliceValue::One => {}
                    SliceValue::X => mono.x += e,
                    SliceValue::Y => mono.y += e,
                }
            }
            out.add_term(mono, c.clone());
        }
        out
    }

    /// Restriction `H̃^{ij}` of a bi-homogeneous polynomial to chart `U_ij`.
    pub fn dehomogenize(&self, chart: ChartId) -> Result<ChartPoly> {
        if self.is_bihomogeneous().is_none() {
            return Err(Error::NotBihomogeneous);
        }
        Ok(self.substitute_chart(chart))
    }

    pub fn parse(delta: u32, src: &str) -> Result<BiPoly> {
        let terms = text::parse_terms(src, &VAR_NAMES)?;
        Ok(BiPoly::from_terms(
            delta,
            terms
                .into_iter()
                .map(|(c, e)| (BiMonomial::from_exponents([e[0], e[1], e[2], e[3]]), c)),
        ))
    }
}

pub(crate) fn rat_pow(base: &Rat, exp: i64) -> Rat {
    let mut acc = Rat::one();
    for _ in 0..exp.unsigned_abs() {
        acc *= base;
    }
    if exp < 0 {
        acc.recip()
    } else {
        acc
    }
}

/// Highest monomial first.
impl fmt::Display for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let exps: Vec<(Rat, [u32; 4])> = self
            .terms
            .iter()
            .rev()
            .map(|(m, c)| (c.clone(), m.exponents()))
            .collect();
        let s = text::render_terms(exps.iter().map(|(c, e)| (c, &e[..])), &VAR_NAMES);
        f.write_str(&s)
    }
}

impl Neg for &BiPoly {
    type Output = BiPoly;
    fn neg(self) -> BiPoly {
        BiPoly {
            delta: self.delta,
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }
}

impl Neg for BiPoly {
    type Output = BiPoly;
    fn neg(self) -> BiPoly {
        -&self
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        /// Panics when the operands carry different `δ`; use the `checked_`
        /// variant for untrusted input.
        impl $tr<&BiPoly> for &BiPoly {
            type Output = BiPoly;
            fn $method(self, rhs: &BiPoly) -> BiPoly {
                self.$checked(rhs)
                    .expect("BiPoly arithmetic across different delta")
            }
        }
        impl $tr<BiPoly> for BiPoly {
            type Output = BiPoly;
            fn $method(self, rhs: BiPoly) -> BiPoly {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&BiPoly> for BiPoly {
            type Output = BiPoly;
            fn $method(self, rhs: &BiPoly) -> BiPoly {
                (&self).$method(rhs)
            }
        }
        impl $tr<BiPoly> for &BiPoly {
            type Output = BiPoly;
            fn $method(self, rhs: BiPoly) -> BiPoly {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);
