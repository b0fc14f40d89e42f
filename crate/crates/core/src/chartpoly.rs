//! Bivariate polynomials in the affine chart coordinates `(x, y)`, plus the
//! gcd machinery used to detect divisorial singular components.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::Result;
use crate::grobner::MonomialOrder;
use crate::{text, Rat};

pub const CHART_VARS: [&str; 2] = ["x", "y"];

/// `x^x y^y`. The derived order is plain lex with `x > y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Mono2 {
    pub x: u32,
    pub y: u32,
}

impl Mono2 {
    pub const ONE: Mono2 = Mono2 { x: 0, y: 0 };

    pub const fn new(x: u32, y: u32) -> Self {
        Mono2 { x, y }
    }

    pub fn degree(&self) -> u32 {
        self.x + self.y
    }

    pub fn mul(&self, o: &Mono2) -> Mono2 {
        Mono2::new(self.x + o.x, self.y + o.y)
    }

    pub fn divides(&self, o: &Mono2) -> bool {
        self.x <= o.x && self.y <= o.y
    }

    /// `o / self`, assuming `self | o`.
    pub fn quotient_of(&self, o: &Mono2) -> Mono2 {
        Mono2::new(o.x - self.x, o.y - self.y)
    }

    pub fn lcm(&self, o: &Mono2) -> Mono2 {
        Mono2::new(self.x.max(o.x), self.y.max(o.y))
    }

    pub fn coprime(&self, o: &Mono2) -> bool {
        (self.x == 0 || o.x == 0) && (self.y == 0 || o.y == 0)
    }
}

/// Polynomial in `Q[x, y]`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ChartPoly {
    terms: BTreeMap<Mono2, Rat>,
}

impl ChartPoly {
    pub fn zero() -> Self {
        ChartPoly::default()
    }

    pub fn one() -> Self {
        Self::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        Self::monomial(Mono2::ONE, c)
    }

    pub fn monomial(m: Mono2, c: Rat) -> Self {
        let mut p = Self::zero();
        p.add_term(m, c);
        p
    }

    pub fn x() -> Self {
        Self::monomial(Mono2::new(1, 0), Rat::one())
    }

    pub fn y() -> Self {
        Self::monomial(Mono2::new(0, 1), Rat::one())
    }

    pub fn from_terms<I: IntoIterator<Item = (Mono2, Rat)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn parse(src: &str) -> Result<Self> {
        let terms = text::parse_terms(src, &CHART_VARS)?;
        Ok(Self::from_terms(
            terms.into_iter().map(|(c, e)| (Mono2::new(e[0], e[1]), c)),
        ))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| *m == Mono2::ONE)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Mono2, &Rat)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Mono2) -> Rat {
        self.terms.get(m).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Mono2::degree).max()
    }

    pub fn degree_x(&self) -> u32 {
        self.terms.keys().map(|m| m.x).max().unwrap_or(0)
    }

    pub fn degree_y(&self) -> u32 {
        self.terms.keys().map(|m| m.y).max().unwrap_or(0)
    }

    pub(crate) fn add_term(&mut self, m: Mono2, c: Rat) {
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

    pub(crate) fn remove_term(&mut self, m: &Mono2) -> Option<Rat> {
        self.terms.remove(m)
    }

    pub fn leading_term(&self, ord: MonomialOrder) -> Option<(Mono2, &Rat)> {
        match ord {
            MonomialOrder::Lex => self.terms.iter().next_back().map(|(m, c)| (*m, c)),
            MonomialOrder::GrevLex => self
                .terms
                .iter()
                .max_by(|a, b| ord.cmp(a.0, b.0))
                .map(|(m, c)| (*m, c)),
        }
    }

    pub fn leading_monomial(&self, ord: MonomialOrder) -> Option<Mono2> {
        self.leading_term(ord).map(|(m, _)| m)
    }

    pub fn scale(&self, c: &Rat) -> ChartPoly {
        if c.is_zero() {
            return ChartPoly::zero();
        }
        ChartPoly {
            terms: self.terms.iter().map(|(m, k)| (*m, k * c)).collect(),
        }
    }

    pub fn mul_term(&self, m: &Mono2, c: &Rat) -> ChartPoly {
        if c.is_zero() {
            return ChartPoly::zero();
        }
        ChartPoly {
            terms: self.terms.iter().map(|(n, k)| (n.mul(m), k * c)).collect(),
        }
    }

    /// `self -= c * m * other`, in place.
    pub(crate) fn sub_scaled(&mut self, other: &ChartPoly, m: &Mono2, c: &Rat) {
        for (n, k) in &other.terms {
            self.add_term(n.mul(m), -(k * c));
        }
    }

    /// Scales so the leading coefficient under `ord` is one.
    pub fn monic(&self, ord: MonomialOrder) -> ChartPoly {
        match self.leading_term(ord) {
            Some((_, c)) => {
                let inv = c.recip();
                self.scale(&inv)
            }
            None => ChartPoly::zero(),
        }
    }

    pub fn pow(&self, n: u32) -> ChartPoly {
        let mut out = ChartPoly::one();
        for _ in 0..n {
            out = &out * self;
        }
        out
    }

    pub fn eval(&self, x: &Rat, y: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for _ in 0..m.x {
                t *= x;
            }
            for _ in 0..m.y {
                t *= y;
            }
            acc += t;
        }
        acc
    }

    pub fn derivative_x(&self) -> ChartPoly {
        ChartPoly::from_terms(
            self.terms
                .iter()
                .filter(|(m, _)| m.x > 0)
                .map(|(m, c)| (Mono2::new(m.x - 1, m.y), c * Rat::from_integer(m.x.into()))),
        )
    }

    pub fn derivative_y(&self) -> ChartPoly {
        ChartPoly::from_terms(
            self.terms
                .iter()
                .filter(|(m, _)| m.y > 0)
                .map(|(m, c)| (Mono2::new(m.x, m.y - 1), c * Rat::from_integer(m.y.into()))),
        )
    }

    /// Coefficients of the powers of `y`, each a polynomial in `x`.
    fn to_recursive(&self) -> Vec<UPoly> {
        let mut out = vec![UPoly::zero(); self.degree_y() as usize + 1];
        for (m, c) in &self.terms {
            let u = &mut out[m.y as usize].0;
            if u.len() <= m.x as usize {
                u.resize(m.x as usize + 1, Rat::zero());
            }
            u[m.x as usize] += c;
        }
        trim_recursive(out)
    }

    fn from_recursive(r: &[UPoly]) -> ChartPoly {
        let mut p = ChartPoly::zero();
        for (j, u) in r.iter().enumerate() {
            for (i, c) in u.0.iter().enumerate() {
                p.add_term(Mono2::new(i as u32, j as u32), c.clone());
            }
        }
        p
    }
}

/// Display lists terms from the largest in graded order down.
impl fmt::Display for ChartPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms: Vec<(&Mono2, &Rat)> = self.terms.iter().collect();
        terms.sort_by(|a, b| MonomialOrder::GrevLex.cmp(b.0, a.0));
        let exps: Vec<(&Rat, [u32; 2])> = terms.iter().map(|(m, c)| (*c, [m.x, m.y])).collect();
        f.write_str(&text::render_terms(
            exps.iter().map(|(c, e)| (*c, &e[..])),
            &CHART_VARS,
        ))
    }
}

impl Neg for &ChartPoly {
    type Output = ChartPoly;
    fn neg(self) -> ChartPoly {
        ChartPoly {
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }
}

impl Add for &ChartPoly {
    type Output = ChartPoly;
    fn add(self, rhs: &ChartPoly) -> ChartPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, c.clone());
        }
        out
    }
}

impl Sub for &ChartPoly {
    type Output = ChartPoly;
    fn sub(self, rhs: &ChartPoly) -> ChartPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, -c);
        }
        out
    }
}

impl Mul for &ChartPoly {
    type Output = ChartPoly;
    fn mul(self, rhs: &ChartPoly) -> ChartPoly {
        let mut out = ChartPoly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

/// Dense univariate polynomial over `Q`, lowest degree first, no trailing
/// zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
struct UPoly(Vec<Rat>);

impl UPoly {
    fn zero() -> Self {
        UPoly(Vec::new())
    }

    fn trim(mut self) -> Self {
        while self.0.last().is_some_and(Zero::is_zero) {
            self.0.pop();
        }
        self
    }

    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    fn lc(&self) -> &Rat {
        self.0.last().expect("nonzero polynomial")
    }

    fn scale(&self, c: &Rat) -> UPoly {
        UPoly(self.0.iter().map(|a| a * c).collect()).trim()
    }

    fn monic(&self) -> UPoly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.lc().recip())
    }

    fn add(&self, o: &UPoly) -> UPoly {
        let n = self.0.len().max(o.0.len());
        let mut v = vec![Rat::zero(); n];
        for (i, c) in self.0.iter().enumerate() {
            v[i] += c;
        }
        for (i, c) in o.0.iter().enumerate() {
            v[i] += c;
        }
        UPoly(v).trim()
    }

    fn sub(&self, o: &UPoly) -> UPoly {
        self.add(&o.scale(&-Rat::one()))
    }

    fn mul(&self, o: &UPoly) -> UPoly {
        if self.is_zero() || o.is_zero() {
            return UPoly::zero();
        }
        let mut v = vec![Rat::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        UPoly(v).trim()
    }

    fn div_rem(&self, d: &UPoly) -> (UPoly, UPoly) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let mut r = self.clone();
        let mut q = vec![Rat::zero(); self.0.len().saturating_sub(d.degree()).max(1)];
        let inv = d.lc().recip();
        while !r.is_zero() && r.degree() >= d.degree() {
            let shift = r.degree() - d.degree();
            let c = r.lc() * &inv;
            for (i, b) in d.0.iter().enumerate() {
                r.0[i + shift] -= &c * b;
            }
            q[shift] += c;
            r = r.trim();
        }
        (UPoly(q).trim(), r)
    }

    fn gcd(&self, o: &UPoly) -> UPoly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }
}

fn trim_recursive(mut r: Vec<UPoly>) -> Vec<UPoly> {
    for u in r.iter_mut() {
        *u = std::mem::replace(u, UPoly::zero()).trim();
    }
    while r.last().is_some_and(UPoly::is_zero) {
        r.pop();
    }
    r
}

fn content(r: &[UPoly]) -> UPoly {
    r.iter()
        .filter(|u| !u.is_zero())
        .fold(UPoly::zero(), |g, u| g.gcd(u))
}

fn primitive_part(r: &[UPoly]) -> Vec<UPoly> {
    let c = content(r);
    if c.is_zero() {
        return Vec::new();
    }
    r.iter().map(|u| u.div_rem(&c).0).collect()
}

/// Pseudo-remainder of `a` by `b` as polynomials in `y` over `Q[x]`.
fn pseudo_rem(a: &[UPoly], b: &[UPoly]) -> Vec<UPoly> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lb = &b[db];
    while r.len() > db && !r.is_empty() {
        let shift = r.len() - 1 - db;
        let lr = r.last().expect("nonempty").clone();
        let mut next: Vec<UPoly> = r.iter().map(|u| u.mul(lb)).collect();
        for (i, bi) in b.iter().enumerate() {
            next[i + shift] = next[i + shift].sub(&bi.mul(&lr));
        }
        r = trim_recursive(next);
    }
    r
}

/// Greatest common divisor in `Q[x, y]`, made monic under grevlex.
/// Computed with a primitive pseudo-remainder sequence over `Q[x][y]`.
pub fn gcd(f: &ChartPoly, g: &ChartPoly) -> ChartPoly {
    if f.is_zero() {
        return g.monic(MonomialOrder::GrevLex);
    }
    if g.is_zero() {
        return f.monic(MonomialOrder::GrevLex);
    }
    let (rf, rg) = (f.to_recursive(), g.to_recursive());
    let c = content(&rf).gcd(&content(&rg));
    let (mut a, mut b) = (primitive_part(&rf), primitive_part(&rg));
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    while !b.is_empty() {
        let r = pseudo_rem(&a, &b);
        a = b;
        b = primitive_part(&r);
    }
    let g: Vec<UPoly> = primitive_part(&a).iter().map(|u| u.mul(&c)).collect();
    ChartPoly::from_recursive(&g).monic(MonomialOrder::GrevLex)
}

pub fn gcd_all<'a, I: IntoIterator<Item = &'a ChartPoly>>(polys: I) -> ChartPoly {
    polys
        .into_iter()
        .fold(ChartPoly::zero(), |acc, p| gcd(&acc, p))
}

/// Exact quotient `f / g`; `None` if `g` does not divide `f`.
pub fn div_exact(f: &ChartPoly, g: &ChartPoly) -> Option<ChartPoly> {
    assert!(!g.is_zero(), "division by the zero polynomial");
    let ord = MonomialOrder::GrevLex;
    let (lm, lc) = g.leading_term(ord).map(|(m, c)| (m, c.clone()))?;
    let mut rem = f.clone();
    let mut quot = ChartPoly::zero();
    while let Some((m, c)) = rem.leading_term(ord).map(|(m, c)| (m, c.clone())) {
        if !lm.divides(&m) {
            return None;
        }
        let q = lm.quotient_of(&m);
        let k = c / &lc;
        rem.sub_scaled(g, &q, &k);
        quot.add_term(q, k);
    }
    Some(quot)
}

impl MonomialOrder {
    pub fn cmp(&self, a: &Mono2, b: &Mono2) -> Ordering {
        match self {
            MonomialOrder::Lex => a.cmp(b),
            // in two variables grevlex coincides with graded lex
            MonomialOrder::GrevLex => a.degree().cmp(&b.degree()).then(a.x.cmp(&b.x)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat;

    fn p(s: &str) -> ChartPoly {
        ChartPoly::parse(s).unwrap()
    }

    #[test]
    fn parse_and_print() {
        assert_eq!(p("y^2 + x^2 - 1").to_string(), "x^2 + y^2 - 1");
        assert_eq!(p("x*y - x*y").to_string(), "0");
        assert_eq!(p("-1/3*x*y^2 + x^3").to_string(), "x^3 - 1/3*x*y^2");
    }

    #[test]
    fn leading_terms() {
        let f = p("x^2 + x*y^3 + y");
        assert_eq!(
            f.leading_monomial(MonomialOrder::GrevLex),
            Some(Mono2::new(1, 3))
        );
        assert_eq!(
            f.leading_monomial(MonomialOrder::Lex),
            Some(Mono2::new(2, 0))
        );
    }

    #[test]
    fn gcd_finds_common_factor() {
        let h = p("x*y - 2*y^2 + 1");
        let f = &h * &p("x + y^3");
        let g = &h * &p("x^2 - y + 4");
        assert_eq!(gcd(&f, &g), h.monic(MonomialOrder::GrevLex));
        assert_eq!(gcd(&p("x^2 - y"), &p("y^2 - x")), ChartPoly::one());
        assert_eq!(gcd(&p("3*x^2*y"), &p("6*x*y^3")), p("x*y"));
        assert_eq!(gcd(&ChartPoly::zero(), &p("2*x")), p("x"));
    }

    #[test]
    fn gcd_with_pure_x_content() {
        let f = p("x");
        let g = &p("x^2 - 1") * &p("y + x");
        let h = &p("x - 1") * &p("y^2 + 3");
        assert_eq!(gcd(&g, &h), p("x - 1"));
        assert_eq!(gcd(&f, &g), ChartPoly::one());
    }

    #[test]
    fn exact_division() {
        let a = p("x^2 - y^2");
        assert_eq!(div_exact(&a, &p("x - y")), Some(p("x + y")));
        assert_eq!(div_exact(&a, &p("x + 2")), None);
        assert_eq!(div_exact(&p("6*x"), &p("3")), Some(p("2*x")));
    }

    #[test]
    fn evaluation_and_derivatives() {
        let f = p("x^2*y + 3*y");
        assert_eq!(f.eval(&rat(2), &rat(5)), rat(35));
        assert_eq!(f.derivative_x(), p("2*x*y"));
        assert_eq!(f.derivative_y(), p("x^2 + 3"));
    }
}
