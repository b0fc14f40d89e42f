//! Sections of `Θ ⊗ L*` with `L* = O(d1, d2)`, as vector fields and as 1-forms.
//!
//! A vector field `V0 ∂X0 + V1 ∂X1 + W0 ∂Y0 + W1 ∂Y1` is only defined modulo
//! the radial fields `R1 = (X0, X1, 0, −δY1)` and `R2 = (0, 0, Y0, Y1)`. The
//! 1-form `Ω = A0 dX0 + A1 dX1 + B0 dY0 + B1 dY1` with `Ω(R1) = Ω(R2) = 0` is
//! the canonical carrier; every section has one, while vector fields exist
//! only when `h1(L*) = 0`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::bipoly::{monomial_basis, BiDegree, BiMonomial, BiPoly, ChartId, SliceValue, Var};
use crate::chartpoly::{ChartPoly, Mono2};
use crate::error::{Error, Result};
use crate::linalg;
use crate::rng::Lcg;
use crate::{rat, Rat};

/// Bidegrees of `(V0, V1, W0, W1)`.
pub fn vf_bidegrees(delta: u32, d: BiDegree) -> [BiDegree; 4] {
    let dl = i64::from(delta);
    [
        BiDegree::new(d.d1 + 1, d.d2),
        BiDegree::new(d.d1 + 1, d.d2),
        BiDegree::new(d.d1, d.d2 + 1),
        BiDegree::new(d.d1 - dl, d.d2 + 1),
    ]
}

/// Bidegrees of `(A0, A1, B0, B1)`.
pub fn form_bidegrees(delta: u32, d: BiDegree) -> [BiDegree; 4] {
    let dl = i64::from(delta);
    [
        BiDegree::new(d.d1 - dl + 1, d.d2 + 2),
        BiDegree::new(d.d1 - dl + 1, d.d2 + 2),
        BiDegree::new(d.d1 - dl + 2, d.d2 + 1),
        BiDegree::new(d.d1 + 2, d.d2 + 1),
    ]
}

pub const VF_NAMES: [&str; 4] = ["V0", "V1", "W0", "W1"];
pub const FORM_NAMES: [&str; 4] = ["A0", "A1", "B0", "B1"];

fn check_components(
    delta: u32,
    comps: &[BiPoly; 4],
    degrees: &[BiDegree; 4],
    names: &[&str; 4],
) -> Result<()> {
    for k in 0..4 {
        let p = &comps[k];
        if p.delta() != delta {
            return Err(Error::DeltaMismatch(delta, p.delta()));
        }
        match p.is_bihomogeneous() {
            None => return Err(Error::NotBihomogeneous),
            Some(h) if !h.admits(degrees[k]) => {
                let found = p.leading_term().expect("nonzero").0.bidegree(delta);
                return Err(Error::WrongBidegree {
                    what: names[k].to_string(),
                    expected: degrees[k],
                    found,
                });
            }
            Some(_) => {}
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VectorFieldRep {
    pub delta: u32,
    pub d: BiDegree,
    /// `(V0, V1, W0, W1)`.
    pub comps: [BiPoly; 4],
}

impl VectorFieldRep {
    pub fn new(delta: u32, d: BiDegree, comps: [BiPoly; 4]) -> Result<Self> {
        check_components(delta, &comps, &vf_bidegrees(delta, d), &VF_NAMES)?;
        Ok(VectorFieldRep { delta, d, comps })
    }

    pub fn parse(delta: u32, d: BiDegree, srcs: [&str; 4]) -> Result<Self> {
        let comps = [
            BiPoly::parse(delta, srcs[0])?,
            BiPoly::parse(delta, srcs[1])?,
            BiPoly::parse(delta, srcs[2])?,
            BiPoly::parse(delta, srcs[3])?,
        ];
        VectorFieldRep::new(delta, d, comps)
    }

    pub fn validate(&self) -> Result<()> {
        check_components(
            self.delta,
            &self.comps,
            &vf_bidegrees(self.delta, self.d),
            &VF_NAMES,
        )
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(BiPoly::is_zero)
    }
}

impl fmt::Display for VectorFieldRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, name) in VF_NAMES.iter().enumerate() {
            if k > 0 {
                writeln!(f)?;
            }
            write!(f, "{name} = {}", self.comps[k])?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OneFormRep {
    pub delta: u32,
    pub d: BiDegree,
    /// `(A0, A1, B0, B1)`.
    pub coeffs: [BiPoly; 4],
}

impl OneFormRep {
    /// Checks bidegrees only; see [`validate_form`] for the Euler conditions.
    pub fn new(delta: u32, d: BiDegree, coeffs: [BiPoly; 4]) -> Result<Self> {
        check_components(delta, &coeffs, &form_bidegrees(delta, d), &FORM_NAMES)?;
        Ok(OneFormRep { delta, d, coeffs })
    }

    pub fn parse(delta: u32, d: BiDegree, srcs: [&str; 4]) -> Result<Self> {
        let coeffs = [
            BiPoly::parse(delta, srcs[0])?,
            BiPoly::parse(delta, srcs[1])?,
            BiPoly::parse(delta, srcs[2])?,
            BiPoly::parse(delta, srcs[3])?,
        ];
        OneFormRep::new(delta, d, coeffs)
    }

    pub fn zero(delta: u32, d: BiDegree) -> Self {
        OneFormRep {
            delta,
            d,
            coeffs: std::array::from_fn(|_| BiPoly::zero(delta)),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(BiPoly::is_zero)
    }

    pub fn scale(&self, c: &Rat) -> OneFormRep {
        OneFormRep {
            delta: self.delta,
            d: self.d,
            coeffs: std::array::from_fn(|k| self.coeffs[k].scale(c)),
        }
    }

    pub fn checked_add(&self, o: &OneFormRep) -> Result<OneFormRep> {
        if self.delta != o.delta {
            return Err(Error::DeltaMismatch(self.delta, o.delta));
        }
        if self.d != o.d {
            return Err(Error::WrongBidegree {
                what: "summand".into(),
                expected: self.d,
                found: o.d,
            });
        }
        Ok(OneFormRep {
            delta: self.delta,
            d: self.d,
            coeffs: std::array::from_fn(|k| &self.coeffs[k] + &o.coeffs[k]),
        })
    }

    /// `X0 A0 + X1 A1 − δ Y1 B1` and `Y0 B0 + Y1 B1`.
    pub fn euler_residuals(&self) -> (BiPoly, BiPoly) {
        let r = RadialFields::new(self.delta);
        (contract_coeffs(self, &r.r1), contract_coeffs(self, &r.r2))
    }
}

impl fmt::Display for OneFormRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, name) in FORM_NAMES.iter().enumerate() {
            if k > 0 {
                writeln!(f)?;
            }
            write!(f, "{name} = {}", self.coeffs[k])?;
        }
        Ok(())
    }
}

/// `R1 = (X0, X1, 0, −δY1)`, `R2 = (0, 0, Y0, Y1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RadialFields {
    pub r1: [BiPoly; 4],
    pub r2: [BiPoly; 4],
}

impl RadialFields {
    pub fn new(delta: u32) -> Self {
        let v = |x| BiPoly::var(delta, x);
        let z = BiPoly::zero(delta);
        RadialFields {
            r1: [
                v(Var::X0),
                v(Var::X1),
                z.clone(),
                v(Var::Y1).scale(&-rat(i64::from(delta))),
            ],
            r2: [z.clone(), z, v(Var::Y0), v(Var::Y1)],
        }
    }
}

fn contract_coeffs(form: &OneFormRep, field: &[BiPoly; 4]) -> BiPoly {
    let mut acc = BiPoly::zero(form.delta);
    for (a, v) in form.coeffs.iter().zip(field) {
        acc = acc + a * v;
    }
    acc
}

/// `Ω(X) = A0 V0 + A1 V1 + B0 W0 + B1 W1`.
pub fn contract(form: &OneFormRep, field: &VectorFieldRep) -> Result<BiPoly> {
    if form.delta != field.delta {
        return Err(Error::DeltaMismatch(form.delta, field.delta));
    }
    Ok(contract_coeffs(form, &field.comps))
}

/// The determinant `det(dX, R1, R2, X)` written out as a 1-form.
pub fn vf_to_form(x: &VectorFieldRep) -> Result<OneFormRep> {
    x.validate()?;
    let delta = x.delta;
    let v = |var| BiPoly::var(delta, var);
    let (x0, x1, y0, y1) = (v(Var::X0), v(Var::X1), v(Var::Y0), v(Var::Y1));
    let [v0, v1, w0, w1] = &x.comps;
    let dl = rat(i64::from(delta));
    let wy = &(&y0 * w1) - &(&y1 * w0);
    let vx = &(&x0 * v1) - &(&x1 * v0);
    let y0y1 = (&y0 * &y1).scale(&dl);
    let a0 = &(&x1 * &wy) + &(&y0y1 * v1);
    let a1 = -(&(&x0 * &wy) + &(&y0y1 * v0));
    let b0 = -(&y1 * &vx);
    let b1 = &y0 * &vx;
    OneFormRep::new(delta, x.d, [a0, a1, b0, b1])
}

/// Bidegrees plus both Euler conditions.
pub fn check_form(form: &OneFormRep) -> Result<()> {
    check_components(
        form.delta,
        &form.coeffs,
        &form_bidegrees(form.delta, form.d),
        &FORM_NAMES,
    )?;
    let (e1, e2) = form.euler_residuals();
    if e1.is_zero() && e2.is_zero() {
        Ok(())
    } else {
        Err(Error::EulerViolation)
    }
}

pub fn validate_form(form: &OneFormRep) -> bool {
    check_form(form).is_ok()
}

/// `X + H1 R1 + H2 R2`, which has the same 1-form as `X`.
pub fn add_radial(x: &VectorFieldRep, h1: &BiPoly, h2: &BiPoly) -> Result<VectorFieldRep> {
    for h in [h1, h2] {
        if !h.has_bidegree(x.d) {
            return Err(Error::WrongBidegree {
                what: "radial multiplier".into(),
                expected: x.d,
                found: h.leading_term().map_or(x.d, |(m, _)| m.bidegree(x.delta)),
            });
        }
    }
    let r = RadialFields::new(x.delta);
    let comps = std::array::from_fn(|k| &(&x.comps[k] + &(h1 * &r.r1[k])) + &(h2 * &r.r2[k]));
    VectorFieldRep::new(x.delta, x.d, comps)
}

/// Equality up to a nonzero rational scalar.
pub fn projective_equal(a: &OneFormRep, b: &OneFormRep) -> bool {
    if a.delta != b.delta || a.d != b.d {
        return false;
    }
    match (leading_coefficient(a), leading_coefficient(b)) {
        (None, None) => true,
        (Some(ca), Some(cb)) => a.scale(&(cb / ca)) == *b,
        _ => false,
    }
}

/// Leading coefficient of the first nonzero among `A0, A1, B0, B1`.
fn leading_coefficient(form: &OneFormRep) -> Option<Rat> {
    form.coeffs
        .iter()
        .find_map(|p| p.leading_term().map(|(_, c)| c.clone()))
}

/// Scales so that the leading coefficient of the first nonzero component is one.
pub fn normalize(form: &OneFormRep) -> OneFormRep {
    match leading_coefficient(form) {
        Some(c) => form.scale(&c.recip()),
        None => form.clone(),
    }
}

/// A 1-form on a chart, `a dx + b dy`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChartOneForm {
    pub chart: ChartId,
    pub a: ChartPoly,
    pub b: ChartPoly,
}

/// A vector field on a chart, `f ∂x + g ∂y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChartVectorField {
    pub chart: ChartId,
    pub f: ChartPoly,
    pub g: ChartPoly,
}

impl ChartOneForm {
    pub fn contract(&self, v: &ChartVectorField) -> ChartPoly {
        assert_eq!(self.chart, v.chart, "chart mismatch");
        &(&self.a * &v.f) + &(&self.b * &v.g)
    }
}

/// Pullback along the slice: `Ω_ij = Ã_{1−i} dx + B̃_{1−j} dy`.
pub fn restrict_form(form: &OneFormRep, chart: ChartId) -> ChartOneForm {
    let a = &form.coeffs[usize::from(1 - chart.i)];
    let b = &form.coeffs[2 + usize::from(1 - chart.j)];
    ChartOneForm {
        chart,
        a: a.substitute_chart(chart),
        b: b.substitute_chart(chart),
    }
}

/// Restriction to the slice of the Laurent monomial with exponents `e`.
fn slice_monomial(chart: ChartId, e: &[i64; 4]) -> Mono2 {
    let slice = chart.slice();
    let mut m = Mono2::ONE;
    for k in 0..4 {
        match slice[k] {
            SliceValue::One => {}
            SliceValue::X => m.x = u32::try_from(e[k]).expect("polynomial on the slice"),
            SliceValue::Y => m.y = u32::try_from(e[k]).expect("polynomial on the slice"),
        }
    }
    m
}

/// Pushforward of the field: for each chart coordinate `u` with exponent
/// vector `e`, the component is `Σ_v e_v Ṽ_v · (u / v)|slice`.
pub fn restrict_vf(x: &VectorFieldRep, chart: ChartId) -> ChartVectorField {
    let tilde: Vec<ChartPoly> = x.comps.iter().map(|p| p.substitute_chart(chart)).collect();
    let coords = chart.coordinate_exponents(x.delta);
    let mut out = [ChartPoly::zero(), ChartPoly::zero()];
    for (slot, e) in out.iter_mut().zip(coords.iter()) {
        for v in 0..4 {
            if e[v] == 0 {
                continue;
            }
            let mut q = *e;
            q[v] -= 1;
            let m = slice_monomial(chart, &q);
            *slot = &*slot + &tilde[v].mul_term(&m, &rat(e[v]));
        }
    }
    let [f, g] = out;
    ChartVectorField { chart, f, g }
}

/// Coordinates of the space of candidate 1-forms of a given bidegree: the
/// concatenated coefficient vectors of `A0, A1, B0, B1` over their monomial
/// bases.
#[derive(Debug, Clone)]
pub struct FormSpace {
    pub delta: u32,
    pub d: BiDegree,
    pub bases: [Vec<BiMonomial>; 4],
    offsets: [usize; 5],
}

impl FormSpace {
    pub fn new(delta: u32, d: BiDegree) -> Self {
        let degs = form_bidegrees(delta, d);
        let bases: [Vec<BiMonomial>; 4] = std::array::from_fn(|k| monomial_basis(delta, degs[k]));
        let mut offsets = [0; 5];
        for k in 0..4 {
            offsets[k + 1] = offsets[k] + bases[k].len();
        }
        FormSpace {
            delta,
            d,
            bases,
            offsets,
        }
    }

    pub fn ncols(&self) -> usize {
        self.offsets[4]
    }

    /// Columns belonging to component `k`.
    pub fn range(&self, k: usize) -> std::ops::Range<usize> {
        self.offsets[k]..self.offsets[k + 1]
    }

    pub fn to_form(&self, v: &[Rat]) -> OneFormRep {
        let coeffs = std::array::from_fn(|k| {
            BiPoly::from_terms(
                self.delta,
                self.bases[k]
                    .iter()
                    .zip(&v[self.range(k)])
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(m, c)| (*m, c.clone())),
            )
        });
        OneFormRep {
            delta: self.delta,
            d: self.d,
            coeffs,
        }
    }

    /// Coefficient vector of a form of this space's bidegree.
    pub fn to_vector(&self, form: &OneFormRep) -> Vec<Rat> {
        let mut v = vec![Rat::zero(); self.ncols()];
        for k in 0..4 {
            for (off, m) in self.bases[k].iter().enumerate() {
                v[self.offsets[k] + off] = form.coeffs[k].coeff(m);
            }
        }
        v
    }

    /// The linear conditions `Ω(R1) = 0` and `Ω(R2) = 0`, one row per
    /// monomial of the target bidegree.
    pub fn euler_rows(&self) -> Vec<Vec<Rat>> {
        let dl = i64::from(self.delta);
        let x0 = BiMonomial::var(Var::X0);
        let x1 = BiMonomial::var(Var::X1);
        let y0 = BiMonomial::var(Var::Y0);
        let y1 = BiMonomial::var(Var::Y1);
        // (component, multiplier monomial, scalar) for each identity
        let identities: [Vec<(usize, BiMonomial, i64)>; 2] = [
            vec![(0, x0, 1), (1, x1, 1), (3, y1, -dl)],
            vec![(2, y0, 1), (3, y1, 1)],
        ];
        let mut rows = Vec::new();
        for identity in &identities {
            let mut by_monomial: BTreeMap<BiMonomial, Vec<Rat>> = BTreeMap::new();
            for &(k, mult, s) in identity {
                if s == 0 {
                    continue;
                }
                for (off, m) in self.bases[k].iter().enumerate() {
                    let row = by_monomial
                        .entry(m.mul(&mult))
                        .or_insert_with(|| vec![Rat::zero(); self.ncols()]);
                    row[self.offsets[k] + off] += rat(s);
                }
            }
            rows.extend(by_monomial.into_values());
        }
        rows
    }
}

/// Basis of all 1-forms of bidegree `d` satisfying the Euler conditions.
/// Its length is `h0(Θ ⊗ O(d1, d2))`.
pub fn solve_forms(delta: u32, d: BiDegree) -> Vec<OneFormRep> {
    let space = FormSpace::new(delta, d);
    linalg::nullspace(&space.euler_rows(), space.ncols())
        .iter()
        .map(|v| space.to_form(v))
        .collect()
}

/// Pseudo-random vector field with coefficients in `[−9, 9]`, filled in the
/// order `V0, V1, W0, W1` over each monomial basis.
pub fn random_section(delta: u32, d: BiDegree, seed: u64) -> VectorFieldRep {
    let mut rng = Lcg::new(seed);
    let degs = vf_bidegrees(delta, d);
    let comps = std::array::from_fn(|k| {
        BiPoly::from_terms(
            delta,
            monomial_basis(delta, degs[k])
                .into_iter()
                .map(|m| (m, rat(rng.small_int())))
                .collect::<Vec<_>>(),
        )
    });
    VectorFieldRep { delta, d, comps }
}

/// Constant multiple of `X1 dX0 − X0 dX1`, the form of the ruling.
pub fn ruling_form(delta: u32) -> OneFormRep {
    let v = |x| BiPoly::var(delta, x);
    OneFormRep {
        delta,
        d: BiDegree::new(i64::from(delta), -2),
        coeffs: [
            v(Var::X1),
            -v(Var::X0),
            BiPoly::zero(delta),
            BiPoly::zero(delta),
        ],
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Repr {
    Vf,
    Form,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct SectionJson {
    delta: u32,
    d1: i64,
    d2: i64,
    repr: Repr,
    coeffs: BTreeMap<String, String>,
}

/// A section as read from or written to JSON.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Section {
    Vf(VectorFieldRep),
    Form(OneFormRep),
}

impl Section {
    pub fn delta(&self) -> u32 {
        match self {
            Section::Vf(x) => x.delta,
            Section::Form(w) => w.delta,
        }
    }

    pub fn bidegree(&self) -> BiDegree {
        match self {
            Section::Vf(x) => x.d,
            Section::Form(w) => w.d,
        }
    }

    /// The 1-form of the section, checked against the Euler conditions.
    pub fn to_form(&self) -> Result<OneFormRep> {
        let form = match self {
            Section::Vf(x) => vf_to_form(x)?,
            Section::Form(w) => w.clone(),
        };
        check_form(&form)?;
        Ok(form)
    }

    pub fn to_json(&self) -> String {
        let (delta, d, repr, names, comps) = match self {
            Section::Vf(x) => (x.delta, x.d, Repr::Vf, VF_NAMES, &x.comps),
            Section::Form(w) => (w.delta, w.d, Repr::Form, FORM_NAMES, &w.coeffs),
        };
        let coeffs = names
            .iter()
            .zip(comps.iter())
            .map(|(n, p)| (n.to_string(), p.to_string()))
            .collect();
        let js = SectionJson {
            delta,
            d1: d.d1,
            d2: d.d2,
            repr,
            coeffs,
        };
        serde_json::to_string_pretty(&js).expect("plain data serializes")
    }

    pub fn from_json(src: &str) -> Result<Section> {
        let js: SectionJson = serde_json::from_str(src)?;
        let d = BiDegree::new(js.d1, js.d2);
        let names = match js.repr {
            Repr::Vf => VF_NAMES,
            Repr::Form => FORM_NAMES,
        };
        if let Some(extra) = js.coeffs.keys().find(|k| !names.contains(&k.as_str())) {
            return Err(Error::Section(format!("unexpected coefficient {extra}")));
        }
        let get = |n: &str| js.coeffs.get(n).map_or("0", String::as_str);
        let srcs = [get(names[0]), get(names[1]), get(names[2]), get(names[3])];
        Ok(match js.repr {
            Repr::Vf => Section::Vf(VectorFieldRep::parse(js.delta, d, srcs)?),
            Repr::Form => Section::Form(OneFormRep::parse(js.delta, d, srcs)?),
        })
    }
}

/// Chart coordinates of a point with all Cox coordinates nonzero.
pub fn chart_coordinates(delta: u32, chart: ChartId, p: &[Rat; 4]) -> (Rat, Rat) {
    let ev = |e: &[i64; 4]| {
        let mut acc = Rat::one();
        for k in 0..4 {
            acc *= crate::bipoly::rat_pow(&p[k], e[k]);
        }
        acc
    };
    let [ex, ey] = chart.coordinate_exponents(delta);
    (ev(&ex), ev(&ey))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn running_example() -> VectorFieldRep {
        VectorFieldRep::parse(0, BiDegree::new(0, 0), ["0", "X0", "0", "Y0"]).unwrap()
    }

    fn cp(s: &str) -> ChartPoly {
        ChartPoly::parse(s).unwrap()
    }

    #[test]
    fn bidegree_table() {
        let d = BiDegree::new(1, 2);
        assert_eq!(
            vf_bidegrees(3, d),
            [
                BiDegree::new(2, 2),
                BiDegree::new(2, 2),
                BiDegree::new(1, 3),
                BiDegree::new(-2, 3)
            ]
        );
        assert_eq!(
            form_bidegrees(3, d),
            [
                BiDegree::new(-1, 4),
                BiDegree::new(-1, 4),
                BiDegree::new(0, 3),
                BiDegree::new(3, 3)
            ]
        );
    }

    #[test]
    fn running_example_form() {
        let w = vf_to_form(&running_example()).unwrap();
        let expected = OneFormRep::parse(
            0,
            BiDegree::new(0, 0),
            ["X1*Y0^2", "-X0*Y0^2", "-X0^2*Y1", "X0^2*Y0"],
        )
        .unwrap();
        assert_eq!(w, expected);
        assert!(validate_form(&w));
        assert!(contract(&w, &running_example()).unwrap().is_zero());
    }

    #[test]
    fn radial_field_has_zero_form() {
        for delta in 0..4 {
            let d = BiDegree::new(0, 0);
            let r = RadialFields::new(delta);
            let x = VectorFieldRep::new(delta, d, r.r1.clone());
            // R1 has W1 of bidegree (−δ, 1) = (d1 − δ, d2 + 1)
            let w = vf_to_form(&x.unwrap()).unwrap();
            assert!(w.is_zero());
            let w = vf_to_form(&VectorFieldRep::new(delta, d, r.r2.clone()).unwrap()).unwrap();
            assert!(w.is_zero());
        }
    }

    #[test]
    fn wrong_bidegree_is_rejected() {
        let bad = VectorFieldRep::parse(0, BiDegree::new(0, 0), ["Y0", "X0", "0", "Y0"]);
        assert!(matches!(bad, Err(Error::WrongBidegree { .. })));
        let bad = VectorFieldRep::parse(0, BiDegree::new(0, 0), ["X0 + Y0", "0", "0", "0"]);
        assert!(matches!(bad, Err(Error::NotBihomogeneous)));
    }

    #[test]
    fn ruling_form_is_valid() {
        for delta in 0..5 {
            let w = ruling_form(delta);
            assert!(validate_form(&w));
            let c = restrict_form(&w, ChartId::U00);
            assert_eq!(c.a, cp("-1"));
            assert!(c.b.is_zero());
        }
    }

    #[test]
    fn euler_violation_is_detected() {
        let w = OneFormRep::parse(0, BiDegree::new(-2, 0), ["0", "0", "Y1", "Y0"]).unwrap();
        assert!(matches!(check_form(&w), Err(Error::EulerViolation)));
        let ok = OneFormRep::parse(0, BiDegree::new(-2, 0), ["0", "0", "Y1", "-Y0"]).unwrap();
        assert!(validate_form(&ok));
    }

    #[test]
    fn chart_fields_of_running_example() {
        let x = running_example();
        let u00 = restrict_vf(&x, ChartId::U00);
        assert_eq!((u00.f, u00.g), (cp("1"), cp("1")));
        let u11 = restrict_vf(&x, ChartId::U11);
        assert_eq!((u11.f, u11.g), (cp("-x^2"), cp("-y^2")));
        let w = vf_to_form(&x).unwrap();
        let f00 = restrict_form(&w, ChartId::U00);
        assert_eq!((f00.a, f00.b), (cp("-1"), cp("1")));
        let f11 = restrict_form(&w, ChartId::U11);
        assert_eq!((f11.a, f11.b), (cp("y^2"), cp("-x^2")));
    }

    #[test]
    fn chart_field_formulas() {
        // generic symbolic components checked against the closed forms
        for delta in 0..4 {
            let x = random_section(delta, BiDegree::new(1, 1), 11 + u64::from(delta));
            let t = |c: ChartId, k: usize| x.comps[k].substitute_chart(c);
            let dl = rat(i64::from(delta));
            let (xx, yy) = (ChartPoly::x(), ChartPoly::y());
            let c = ChartId::U00;
            let f = restrict_vf(&x, c);
            assert_eq!(f.f, &t(c, 1) - &(&xx * &t(c, 0)));
            assert_eq!(
                f.g,
                &(&(&yy * &t(c, 0)).scale(&dl) - &(&yy * &t(c, 2))) + &t(c, 3)
            );
            let c = ChartId::U11;
            let f = restrict_vf(&x, c);
            assert_eq!(f.f, &t(c, 0) - &(&xx * &t(c, 1)));
            assert_eq!(f.g, &t(c, 2) - &(&yy * &(&t(c, 1).scale(&dl) + &t(c, 3))));
            let c = ChartId::U01;
            let f = restrict_vf(&x, c);
            assert_eq!(f.f, &t(c, 1) - &(&xx * &t(c, 0)));
            assert_eq!(f.g, &t(c, 2) - &(&yy * &(&t(c, 0).scale(&dl) + &t(c, 3))));
        }
    }

    #[test]
    fn chart_form_annihilates_chart_field() {
        for delta in 0..4 {
            let x = random_section(delta, BiDegree::new(0, 1), 3 + u64::from(delta));
            let w = vf_to_form(&x).unwrap();
            for c in ChartId::ALL {
                assert!(restrict_form(&w, c).contract(&restrict_vf(&x, c)).is_zero());
            }
        }
    }

    #[test]
    fn radial_multiples_do_not_change_the_form() {
        let x = running_example();
        let one = BiPoly::one(0);
        let y = add_radial(&x, &one, &BiPoly::zero(0)).unwrap();
        assert_ne!(x, y);
        assert_eq!(vf_to_form(&x).unwrap(), vf_to_form(&y).unwrap());
        assert_eq!(
            add_radial(&x, &BiPoly::zero(0), &BiPoly::zero(0)).unwrap(),
            x
        );
    }

    #[test]
    fn projective_equality() {
        let w = vf_to_form(&running_example()).unwrap();
        assert!(projective_equal(&w, &w.scale(&rat(3))));
        assert!(projective_equal(&w, &normalize(&w.scale(&rat(-5)))));
        let t: [BiPoly; 4] =
            std::array::from_fn(|k| w.coeffs[k].torus_scale(&rat(2), &rat(1)).unwrap());
        let twisted = OneFormRep::new(0, w.d, t).unwrap();
        // A and B coefficients carry different bidegrees, so the twist is not uniform
        assert!(!projective_equal(&w, &twisted));
        let other = vf_to_form(&random_section(0, w.d, 9)).unwrap();
        assert!(!projective_equal(&w, &w.checked_add(&other).unwrap()));
    }

    #[test]
    fn solve_forms_dimensions() {
        for delta in 0..5u32 {
            let tau = solve_forms(delta, BiDegree::new(i64::from(delta), -2));
            assert_eq!(tau.len(), 1);
            assert!(projective_equal(&tau[0], &ruling_form(delta)));
            let n = solve_forms(delta, BiDegree::new(-2, 0)).len();
            let expected = match delta {
                0 => 1,
                1 => 0,
                _ => delta as usize - 1,
            };
            assert_eq!(n, expected, "delta {delta}");
        }
    }

    #[test]
    fn normal_bundle_form_for_delta_zero() {
        let sols = solve_forms(0, BiDegree::new(-2, 0));
        let expected = OneFormRep::parse(0, BiDegree::new(-2, 0), ["0", "0", "Y1", "-Y0"]).unwrap();
        assert!(projective_equal(&sols[0], &expected));
    }

    #[test]
    fn random_sections_are_deterministic_and_valid() {
        let d = BiDegree::new(1, 1);
        let a = random_section(2, d, 77);
        assert_eq!(a, random_section(2, d, 77));
        assert!(a.validate().is_ok());
        assert!(validate_form(&vf_to_form(&a).unwrap()));
    }

    #[test]
    fn json_round_trip() {
        let x = running_example();
        let s = Section::Vf(x.clone());
        assert_eq!(Section::from_json(&s.to_json()).unwrap(), s);
        let f = Section::Form(vf_to_form(&x).unwrap());
        assert_eq!(Section::from_json(&f.to_json()).unwrap(), f);
        assert!(
            Section::from_json(r#"{"delta":0,"d1":0,"d2":0,"repr":"vf","coeffs":{"Q":"1"}}"#)
                .is_err()
        );
    }

    #[test]
    fn charts_agree_on_overlaps() {
        // the chart forms are pullbacks of one global form: at a point P with
        // all coordinates nonzero, (a, b) · d(x, y) is a multiple of Ω(P)
        for delta in 0..4 {
            let w = vf_to_form(&random_section(delta, BiDegree::new(1, 0), 5)).unwrap();
            let p = [rat(2), rat(-3), rat(5), Rat::new(7.into(), 2.into())];
            let omega: Vec<Rat> = w.coeffs.iter().map(|c| c.eval(&p)).collect();
            for chart in ChartId::ALL {
                let local = restrict_form(&w, chart);
                let (x, y) = chart_coordinates(delta, chart, &p);
                let (a, b) = (local.a.eval(&x, &y), local.b.eval(&x, &y));
                let [ex, ey] = chart.coordinate_exponents(delta);
                let pulled: Vec<Rat> = (0..4)
                    .map(|k| (&a * &x * rat(ex[k]) + &b * &y * rat(ey[k])) / &p[k])
                    .collect();
                let ratio = omega
                    .iter()
                    .zip(&pulled)
                    .find(|(o, _)| !o.is_zero())
                    .map(|(o, q)| q / o)
                    .unwrap();
                assert!(!ratio.is_zero());
                for k in 0..4 {
                    assert_eq!(&omega[k] * &ratio, pulled[k], "delta {delta} {chart}");
                }
            }
        }
    }
}
