//! Gröbner bases in `Q[x, y]`: reduction, ideal comparison, quotient
//! dimension, colon and saturation.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::bipoly::ChartId;
use crate::chartpoly::{self, ChartPoly, Mono2};
use crate::error::{Error, Result};
use crate::linalg;
use crate::modular;
use crate::Rat;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum MonomialOrder {
    #[default]
    GrevLex,
    Lex,
}

/// An ideal of the coordinate ring of one chart. Zero generators are dropped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChartIdeal {
    pub chart: ChartId,
    generators: Vec<ChartPoly>,
}

impl ChartIdeal {
    pub fn new(chart: ChartId, generators: Vec<ChartPoly>) -> Self {
        ChartIdeal {
            chart,
            generators: generators.into_iter().filter(|g| !g.is_zero()).collect(),
        }
    }

    pub fn unit(chart: ChartId) -> Self {
        ChartIdeal::new(chart, vec![ChartPoly::one()])
    }

    pub fn generators(&self) -> &[ChartPoly] {
        &self.generators
    }

    pub fn is_zero_ideal(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn groebner(&self) -> GroebnerBasis {
        buchberger(self, MonomialOrder::GrevLex)
    }
}

impl fmt::Display for ChartIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<")?;
        for (k, g) in self.generators.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{g}")?;
        }
        write!(f, ">")
    }
}

/// Reduced, monic, sorted by ascending leading monomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroebnerBasis {
    order: MonomialOrder,
    elements: Vec<ChartPoly>,
}

impl GroebnerBasis {
    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn elements(&self) -> &[ChartPoly] {
        &self.elements
    }

    pub fn is_unit(&self) -> bool {
        self.elements.len() == 1 && self.elements[0].is_constant()
    }

    pub fn is_zero_ideal(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn leading_monomials(&self) -> Vec<Mono2> {
        self.elements
            .iter()
            .map(|g| {
                g.leading_monomial(self.order)
                    .expect("basis elements are nonzero")
            })
            .collect()
    }

    pub fn to_ideal(&self, chart: ChartId) -> ChartIdeal {
        ChartIdeal::new(chart, self.elements.clone())
    }
}

impl fmt::Display for GroebnerBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, g) in self.elements.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{g}")?;
        }
        write!(f, "}}")
    }
}

fn lead(p: &ChartPoly, ord: MonomialOrder) -> (Mono2, Rat) {
    let (m, c) = p.leading_term(ord).expect("nonzero polynomial");
    (m, c.clone())
}

/// `(q, s)` with `q = s·p` primitive in `Z[x, y]`.
fn primitive(p: &ChartPoly) -> (ChartPoly, Rat) {
    let den = p
        .terms()
        .fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
    let num = p.terms().fold(BigInt::zero(), |acc, (_, c)| {
        acc.gcd(&(c.numer() * &den / c.denom()))
    });
    if num.is_zero() {
        return (ChartPoly::zero(), Rat::one());
    }
    let s = Rat::new(den, num);
    (p.scale(&s), s)
}

fn content(p: &ChartPoly, acc: BigInt) -> BigInt {
    p.terms().fold(acc, |g, (_, c)| g.gcd(c.numer()))
}

/// Divisors with integer coefficients and their leading data.
struct Integral {
    polys: Vec<ChartPoly>,
    leads: Vec<(Mono2, BigInt)>,
}

impl Integral {
    fn new() -> Self {
        Integral {
            polys: Vec::new(),
            leads: Vec::new(),
        }
    }

    fn of(divisors: &[ChartPoly], ord: MonomialOrder) -> Self {
        let mut out = Integral::new();
        for d in divisors {
            out.push(primitive(d).0, ord);
        }
        out
    }

    /// `p` must already be primitive.
    fn push(&mut self, p: ChartPoly, ord: MonomialOrder) {
        let (m, c) = lead(&p, ord);
        self.leads.push((m, c.numer().clone()));
        self.polys.push(p);
    }

    fn len(&self) -> usize {
        self.polys.len()
    }
}

/// Fraction-free full reduction: returns `(r, s)` where `r` is primitive and
/// `r / s` is the remainder of `f` on division by `divisors`.
fn reduce_integral(f: &ChartPoly, divisors: &Integral, ord: MonomialOrder) -> (ChartPoly, Rat) {
    let (mut p, mut scale) = primitive(f);
    let mut rem = ChartPoly::zero();
    let mut steps = 0u32;
    while let Some((m, c)) = p.leading_term(ord).map(|(m, c)| (m, c.numer().clone())) {
        match divisors.leads.iter().position(|(lm, _)| lm.divides(&m)) {
            Some(k) => {
                let (lm, lc) = &divisors.leads[k];
                let g = c.gcd(lc);
                let a = Rat::from_integer(lc / &g);
                let b = Rat::from_integer(&c / &g);
                if !a.is_one() {
                    p = p.scale(&a);
                    rem = rem.scale(&a);
                    scale *= &a;
                }
                p.sub_scaled(&divisors.polys[k], &lm.quotient_of(&m), &b);
                steps += 1;
                if steps.is_multiple_of(4) {
                    let g = content(&rem, content(&p, BigInt::zero()));
                    if !g.is_zero() && !g.is_one() {
                        let inv = Rat::new(BigInt::one(), g);
                        p = p.scale(&inv);
                        rem = rem.scale(&inv);
                        scale *= &inv;
                    }
                }
            }
            None => {
                let c = p.remove_term(&m).expect("leading term present");
                rem.add_term(m, c);
            }
        }
    }
    let (r, s) = primitive(&rem);
    (r, scale * s)
}

/// S-polynomial of primitive integral `f`, `g`, kept integral.
fn s_polynomial(f: &ChartPoly, g: &ChartPoly, ord: MonomialOrder) -> ChartPoly {
    let (mf, cf) = lead(f, ord);
    let (mg, cg) = lead(g, ord);
    let l = mf.lcm(&mg);
    let h = cf.numer().gcd(cg.numer());
    let mut s = f.mul_term(&mf.quotient_of(&l), &Rat::from_integer(cg.numer() / &h));
    s.sub_scaled(g, &mg.quotient_of(&l), &Rat::from_integer(cf.numer() / &h));
    s
}

fn generators_basis(gens: &[ChartPoly], ord: MonomialOrder) -> GroebnerBasis {
    let gens: Vec<ChartPoly> = gens
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| primitive(g).0)
        .collect();
    if gens.is_empty() {
        return GroebnerBasis {
            order: ord,
            elements: Vec::new(),
        };
    }
    if let Some(gb) = certified_basis(&gens, ord) {
        return gb;
    }
    let g = chartpoly::gcd_all(&gens);
    if g.is_constant() {
        return buchberger_exact(&gens, ord);
    }
    let j: Vec<ChartPoly> = gens
        .iter()
        .map(|p| chartpoly::div_exact(p, &g).expect("gcd divides"))
        .collect();
    // leading monomials are multiplicative, so g·GB(J) is already a basis
    let inner = certified_basis(&j, ord).unwrap_or_else(|| buchberger_exact(&j, ord));
    let scaled = inner.elements.iter().map(|h| h * &g).collect();
    GroebnerBasis {
        order: ord,
        elements: interreduce(scaled, ord),
    }
}

/// Modular basis with an exact certificate; only zero-dimensional and unit
/// ideals can be certified.
fn certified_basis(gens: &[ChartPoly], ord: MonomialOrder) -> Option<GroebnerBasis> {
    const ATTEMPTS: usize = 4;
    modular::candidates(gens, ord)
        .take(ATTEMPTS)
        .find(|cand| certify(gens, cand, ord))
        .map(|elements| GroebnerBasis {
            order: ord,
            elements,
        })
}

/// Exact check that a lifted candidate is the reduced basis of `<gens>`.
///
/// The candidate has the leading monomials of a reduced basis of `gens` mod
/// some prime, and the quotient dimension can only grow under reduction mod
/// p. So if the candidate is a basis over `Q`, finite in codimension, and
/// contains `gens`, the two ideals have equal finite colength and coincide.
fn certify(gens: &[ChartPoly], cand: &[ChartPoly], ord: MonomialOrder) -> bool {
    let mut staircase: Vec<(Mono2, &ChartPoly)> = cand
        .iter()
        .filter_map(|g| g.leading_monomial(ord).map(|m| (m, g)))
        .collect();
    if staircase.len() != cand.len() {
        return false;
    }
    if staircase.len() == 1 {
        return staircase[0].0 == Mono2::ONE;
    }
    // minimal generators of a monomial ideal in two variables, sorted by
    // x-degree, have strictly decreasing y-degree
    staircase.sort_by_key(|(m, _)| m.x);
    let finite = staircase[0].0.x == 0 && staircase[staircase.len() - 1].0.y == 0;
    if !finite
        || staircase
            .windows(2)
            .any(|w| w[0].0.x == w[1].0.x || w[0].0.y <= w[1].0.y)
    {
        return false;
    }
    let basis = GroebnerBasis {
        order: ord,
        elements: cand.to_vec(),
    };
    // table remainders are congruent modulo <cand> whether or not it is a basis
    let mut table = NormalFormTable::new(&basis);
    // syzygies of the leading terms are generated by neighbouring pairs
    staircase
        .windows(2)
        .all(|w| table.of(&s_polynomial_monic(w[0].1, w[1].1, ord)).is_zero())
        && gens.iter().all(|g| table.of(g).is_zero())
}

/// Full reduction by monic divisors, in rational arithmetic.
fn reduce_monic(f: &ChartPoly, divisors: &[ChartPoly], ord: MonomialOrder) -> ChartPoly {
    let leads: Vec<Mono2> = divisors
        .iter()
        .map(|g| g.leading_monomial(ord).expect("nonzero divisor"))
        .collect();
    let mut p = f.clone();
    let mut rem = ChartPoly::zero();
    while let Some((m, c)) = p.leading_term(ord).map(|(m, c)| (m, c.clone())) {
        match leads.iter().position(|lm| lm.divides(&m)) {
            Some(k) => p.sub_scaled(&divisors[k], &leads[k].quotient_of(&m), &c),
            None => {
                p.remove_term(&m);
                rem.add_term(m, c);
            }
        }
    }
    rem
}

fn s_polynomial_monic(f: &ChartPoly, g: &ChartPoly, ord: MonomialOrder) -> ChartPoly {
    let mf = f.leading_monomial(ord).expect("nonzero");
    let mg = g.leading_monomial(ord).expect("nonzero");
    let l = mf.lcm(&mg);
    let mut s = f.mul_term(&mf.quotient_of(&l), &Rat::one());
    s.sub_scaled(g, &mg.quotient_of(&l), &Rat::one());
    s
}

fn buchberger_exact(gens: &[ChartPoly], ord: MonomialOrder) -> GroebnerBasis {
    let mut basis = Integral::new();
    for g in gens.iter().filter(|g| !g.is_zero()) {
        let (r, _) = reduce_integral(g, &basis, ord);
        if !r.is_zero() {
            basis.push(r, ord);
        }
    }
    let mut pending: BTreeSet<(usize, usize)> = BTreeSet::new();
    for j in 0..basis.len() {
        for i in 0..j {
            pending.insert((i, j));
        }
    }
    let lm = |b: &Integral, k: usize| b.leads[k].0;
    while let Some(&(i, j)) = pending.iter().min_by(|a, b| {
        let la = lm(&basis, a.0).lcm(&lm(&basis, a.1));
        let lb = lm(&basis, b.0).lcm(&lm(&basis, b.1));
        ord.cmp(&la, &lb)
    }) {
        pending.remove(&(i, j));
        let mi = lm(&basis, i);
        let mj = lm(&basis, j);
        if mi.coprime(&mj) {
            continue;
        }
        let l = mi.lcm(&mj);
        let key = |a: usize, b: usize| (a.min(b), a.max(b));
        let chain = (0..basis.len()).any(|k| {
            k != i
                && k != j
                && lm(&basis, k).divides(&l)
                && !pending.contains(&key(i, k))
                && !pending.contains(&key(j, k))
        });
        if chain {
            continue;
        }
        let s = s_polynomial(&basis.polys[i], &basis.polys[j], ord);
        let (r, _) = reduce_integral(&s, &basis, ord);
        if r.is_zero() {
            continue;
        }
        let n = basis.len();
        basis.push(r, ord);
        if basis.leads[n].0 == Mono2::ONE {
            return GroebnerBasis {
                order: ord,
                elements: vec![ChartPoly::one()],
            };
        }
        for k in 0..n {
            pending.insert((k, n));
        }
    }
    GroebnerBasis {
        order: ord,
        elements: interreduce(basis.polys, ord),
    }
}

fn interreduce(basis: Vec<ChartPoly>, ord: MonomialOrder) -> Vec<ChartPoly> {
    let mut minimal: Vec<ChartPoly> = Vec::new();
    let mut sorted = basis;
    sorted.sort_by(|a, b| {
        ord.cmp(
            &a.leading_monomial(ord).unwrap(),
            &b.leading_monomial(ord).unwrap(),
        )
    });
    for g in sorted {
        let m = g.leading_monomial(ord).unwrap();
        if minimal
            .iter()
            .all(|h| !h.leading_monomial(ord).unwrap().divides(&m))
        {
            minimal.push(g);
        }
    }
    let mut out = Vec::with_capacity(minimal.len());
    for k in 0..minimal.len() {
        let others = Integral::of(
            &minimal
                .iter()
                .enumerate()
                .filter(|&(l, _)| l != k)
                .map(|(_, h)| h.clone())
                .collect::<Vec<_>>(),
            ord,
        );
        let (m, c) = lead(&minimal[k], ord);
        let mut tail = minimal[k].clone();
        tail.remove_term(&m);
        let (r, s) = reduce_integral(&tail, &others, ord);
        let mut g = r.scale(&(s * &c).recip());
        g.add_term(m, Rat::one());
        out.push(g);
    }
    out
}

/// Reduced Gröbner basis of the ideal under `ord`.
pub fn buchberger(ideal: &ChartIdeal, ord: MonomialOrder) -> GroebnerBasis {
    generators_basis(&ideal.generators, ord)
}

/// Remainder of `f` on division by the basis; zero iff `f` lies in the ideal.
pub fn normal_form(f: &ChartPoly, gb: &GroebnerBasis) -> ChartPoly {
    reduce_monic(f, &gb.elements, gb.order)
}

/// Memoized normal forms of monomials, built up one variable at a time
/// through `NF(v·m) = NF(v·NF(m))`.
pub struct NormalFormTable<'a> {
    gb: &'a GroebnerBasis,
    leads: Vec<Mono2>,
    cache: HashMap<Mono2, ChartPoly>,
}

impl<'a> NormalFormTable<'a> {
    pub fn new(gb: &'a GroebnerBasis) -> Self {
        NormalFormTable {
            gb,
            leads: gb.leading_monomials(),
            cache: HashMap::new(),
        }
    }

    fn is_standard(&self, m: &Mono2) -> bool {
        self.leads.iter().all(|l| !l.divides(m))
    }

    pub fn monomial(&mut self, m: Mono2) -> ChartPoly {
        if let Some(r) = self.cache.get(&m) {
            return r.clone();
        }
        let r = if self.is_standard(&m) {
            ChartPoly::monomial(m, Rat::one())
        } else {
            let (step, down) = if m.x > 0 {
                (Mono2::new(1, 0), Mono2::new(m.x - 1, m.y))
            } else {
                (Mono2::new(0, 1), Mono2::new(m.x, m.y - 1))
            };
            if self.is_standard(&down) {
                // border monomial: one short reduction
                normal_form(&ChartPoly::monomial(m, Rat::one()), self.gb)
            } else {
                let lower = self.monomial(down);
                let mut acc = ChartPoly::zero();
                for (s, c) in lower.terms() {
                    acc.sub_scaled(&self.monomial(s.mul(&step)), &Mono2::ONE, &-c);
                }
                acc
            }
        };
        self.cache.insert(m, r.clone());
        r
    }

    pub fn of(&mut self, f: &ChartPoly) -> ChartPoly {
        let mut acc = ChartPoly::zero();
        for (m, c) in f.terms() {
            acc.sub_scaled(&self.monomial(*m), &Mono2::ONE, &-c);
        }
        acc
    }
}

pub fn ideal_contains(ideal: &ChartIdeal, f: &ChartPoly) -> bool {
    normal_form(f, &ideal.groebner()).is_zero()
}

pub fn basis_contains(gb: &GroebnerBasis, f: &ChartPoly) -> bool {
    normal_form(f, gb).is_zero()
}

pub fn ideal_equal(a: &ChartIdeal, b: &ChartIdeal) -> bool {
    let ga = a.groebner();
    let gb = b.groebner();
    a.generators.iter().all(|g| basis_contains(&gb, g))
        && b.generators.iter().all(|g| basis_contains(&ga, g))
}

/// True iff the leading monomials contain pure powers of both variables; the
/// unit ideal counts as zero-dimensional.
pub fn is_zero_dimensional(gb: &GroebnerBasis) -> bool {
    if gb.is_unit() {
        return true;
    }
    let lms = gb.leading_monomials();
    lms.iter().any(|m| m.y == 0) && lms.iter().any(|m| m.x == 0)
}

/// Monomials outside the leading-term ideal, in ascending order under the
/// basis order. `None` when there are infinitely many.
pub fn standard_monomials(gb: &GroebnerBasis) -> Option<Vec<Mono2>> {
    if !is_zero_dimensional(gb) {
        return None;
    }
    if gb.is_unit() {
        return Some(Vec::new());
    }
    let lms = gb.leading_monomials();
    let ax = lms.iter().filter(|m| m.y == 0).map(|m| m.x).min().unwrap();
    let by = lms.iter().filter(|m| m.x == 0).map(|m| m.y).min().unwrap();
    let mut out: Vec<Mono2> = (0..ax)
        .flat_map(|i| (0..by).map(move |j| Mono2::new(i, j)))
        .filter(|m| lms.iter().all(|l| !l.divides(m)))
        .collect();
    out.sort_by(|a, b| gb.order.cmp(a, b));
    Some(out)
}

pub fn quotient_dimension(gb: &GroebnerBasis) -> Result<usize> {
    standard_monomials(gb)
        .map(|s| s.len())
        .ok_or(Error::NotZeroDimensional)
}

/// Kernel of multiplication by `f` on `R/J` for a zero-dimensional `J`,
/// returned as polynomials in standard monomials.
fn multiplication_kernel(gb: &GroebnerBasis, f: &ChartPoly) -> Vec<ChartPoly> {
    let std = standard_monomials(gb).expect("zero-dimensional");
    let n = std.len();
    let index = |m: &Mono2| std.iter().position(|s| s == m).expect("standard monomial");
    // column b holds NF(f * b) in the standard basis
    let mut rows = vec![vec![Rat::zero(); n]; n];
    let mut table = NormalFormTable::new(gb);
    for (col, b) in std.iter().enumerate() {
        let img = table.of(&f.mul_term(b, &Rat::one()));
        for (m, c) in img.terms() {
            rows[index(m)][col] = c.clone();
        }
    }
    linalg::nullspace(&rows, n)
        .into_iter()
        .map(|v| {
            ChartPoly::from_terms(
                v.into_iter()
                    .zip(std.iter())
                    .filter(|(c, _)| !c.is_zero())
                    .map(|(c, m)| (*m, c)),
            )
        })
        .collect()
}

/// `I : f`.
///
/// Writing `I = g J` with `g` the gcd of the generators, `J` is zero-dimensional
/// or the unit ideal, and `I : f = (g/h) (J : f/h)` for `h = gcd(g, f)`.
pub fn colon(ideal: &ChartIdeal, f: &ChartPoly) -> Result<ChartIdeal> {
    if f.is_zero() {
        return Err(Error::ZeroDivisor);
    }
    if ideal.is_zero_ideal() {
        return Ok(ideal.clone());
    }
    let gb = generators_basis(&ideal.generators, MonomialOrder::GrevLex);
    let (g, jgb) = if is_zero_dimensional(&gb) {
        (ChartPoly::one(), gb)
    } else {
        let g = chartpoly::gcd_all(gb.elements());
        let j: Vec<ChartPoly> = gb
            .elements
            .iter()
            .map(|p| chartpoly::div_exact(p, &g).expect("gcd divides"))
            .collect();
        (g, generators_basis(&j, MonomialOrder::GrevLex))
    };
    debug_assert!(is_zero_dimensional(&jgb));
    let h = chartpoly::gcd(&g, f);
    let g_rest = chartpoly::div_exact(&g, &h).expect("gcd divides");
    let f_rest = chartpoly::div_exact(f, &h).expect("gcd divides");
    let mut gens: Vec<ChartPoly> = jgb.elements.clone();
    if !jgb.is_unit() {
        gens.extend(multiplication_kernel(&jgb, &f_rest));
    }
    let gens = generators_basis(&gens, MonomialOrder::GrevLex)
        .elements
        .into_iter()
        .map(|p| &p * &g_rest)
        .collect();
    Ok(ChartIdeal::new(ideal.chart, gens))
}

/// `I : f^∞`.
pub fn saturate(ideal: &ChartIdeal, f: &ChartPoly) -> Result<ChartIdeal> {
    if f.is_zero() {
        return Err(Error::ZeroDivisor);
    }
    let gb = ideal.groebner();
    if is_zero_dimensional(&gb) {
        return Ok(saturate_basis(&gb, f)?.to_ideal(ideal.chart));
    }
    let mut cur = ideal.clone();
    loop {
        let next = colon(&cur, f)?;
        // colon only grows the ideal, so containment one way suffices
        let gb = cur.groebner();
        if next.generators.iter().all(|p| basis_contains(&gb, p)) {
            return Ok(cur);
        }
        cur = next;
    }
}

/// `I : f^∞` for a zero-dimensional basis, iterating `J ↦ J + ker(f)` on
/// `R/J`. Reduced bases are unique, so the chain stops at the first repeat.
pub fn saturate_basis(gb: &GroebnerBasis, f: &ChartPoly) -> Result<GroebnerBasis> {
    if f.is_zero() {
        return Err(Error::ZeroDivisor);
    }
    let mut cur = gb.clone();
    loop {
        if quotient_dimension(&cur)? == 0 {
            return Ok(cur);
        }
        let mut gens = cur.elements.clone();
        gens.extend(multiplication_kernel(&cur, f));
        let next = generators_basis(&gens, cur.order);
        if next == cur {
            return Ok(cur);
        }
        cur = next;
    }
}
