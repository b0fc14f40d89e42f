//! Global endomorphisms of the tangent bundle of `S_δ`.
//!
//! In the Cox coordinates an endomorphism is a 4×4 matrix acting on
//! `(V0, V1, W0, W1)`: `a·1₂ ⊕ d·1₂` for `δ = 0`, `a·1₄` for `δ = 1`, and for
//! `δ ≥ 2` the scalar `a·1₄` plus `X1 Y1 C` and `−X0 Y1 C` in the `W0` row,
//! where `C(X0, X1)` is a form of degree `δ − 2`.

use std::fmt;

use num_traits::{One, Zero};

use crate::bipoly::{monomial_basis, BiDegree, BiMonomial, BiPoly, ChartId, Var};
use crate::chartpoly::{ChartPoly, Mono2};
use crate::error::{Error, Result};
use crate::foliation::{OneFormRep, VectorFieldRep};
use crate::Rat;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EndoRep {
    /// `δ = 0`.
    Split { a: Rat, d: Rat },
    /// `δ = 1`.
    Scalar { a: Rat },
    /// `δ ≥ 2`; `c` has bidegree `(δ − 2, 0)` or is zero.
    Shear { delta: u32, a: Rat, c: BiPoly },
}

/// `2` for `δ = 0`, otherwise `δ`.
pub fn endo_space_dim(delta: u32) -> usize {
    if delta == 0 {
        2
    } else {
        delta as usize
    }
}

fn c_degree(delta: u32) -> BiDegree {
    BiDegree::new(i64::from(delta) - 2, 0)
}

impl EndoRep {
    pub fn split(a: Rat, d: Rat) -> Self {
        EndoRep::Split { a, d }
    }

    pub fn scalar(a: Rat) -> Self {
        EndoRep::Scalar { a }
    }

    pub fn shear(delta: u32, a: Rat, c: BiPoly) -> Result<Self> {
        if delta < 2 {
            return Err(Error::InvalidEndomorphism(format!(
                "a C-block needs delta >= 2, got {delta}"
            )));
        }
        if c.delta() != delta {
            return Err(Error::DeltaMismatch(delta, c.delta()));
        }
        if !c.has_bidegree(c_degree(delta)) {
            return Err(Error::InvalidEndomorphism(format!(
                "C must be a form in X0, X1 of degree {}",
                delta - 2
            )));
        }
        Ok(EndoRep::Shear { delta, a, c })
    }

    /// Normal form for `δ` from optional `d` and `C`; each is only accepted
    /// where it exists.
    pub fn new(delta: u32, a: Rat, d: Option<Rat>, c: Option<BiPoly>) -> Result<Self> {
        match (delta, d, c) {
            (0, d, None) => Ok(EndoRep::split(a.clone(), d.unwrap_or(a))),
            (1, None, None) => Ok(EndoRep::scalar(a)),
            (_, None, c) if delta >= 2 => {
                EndoRep::shear(delta, a, c.unwrap_or_else(|| BiPoly::zero(delta)))
            }
            (_, Some(_), _) => Err(Error::InvalidEndomorphism(
                "parameter d exists only for delta = 0".into(),
            )),
            _ => Err(Error::InvalidEndomorphism(
                "parameter C exists only for delta >= 2".into(),
            )),
        }
    }

    pub fn identity(delta: u32) -> Self {
        EndoRep::new(delta, Rat::one(), None, None).expect("valid normal form")
    }

    /// `[a, d]`, `[a]`, or `[a, c_0, …, c_{δ−2}]` with
    /// `C = Σ c_k X0^{δ−2−k} X1^k`.
    pub fn from_params(delta: u32, p: &[Rat]) -> Result<Self> {
        if p.len() != endo_space_dim(delta) {
            return Err(Error::InvalidEndomorphism(format!(
                "expected {} parameters, got {}",
                endo_space_dim(delta),
                p.len()
            )));
        }
        match delta {
            0 => Ok(EndoRep::split(p[0].clone(), p[1].clone())),
            1 => Ok(EndoRep::scalar(p[0].clone())),
            _ => {
                let n = delta - 2;
                let c = BiPoly::from_terms(
                    delta,
                    (0..=n)
                        .zip(&p[1..])
                        .filter(|(_, v)| !v.is_zero())
                        .map(|(k, v)| (BiMonomial::new(n - k, k, 0, 0), v.clone()))
                        .collect::<Vec<_>>(),
                );
                EndoRep::shear(delta, p[0].clone(), c)
            }
        }
    }

    pub fn params(&self) -> Vec<Rat> {
        match self {
            EndoRep::Split { a, d } => vec![a.clone(), d.clone()],
            EndoRep::Scalar { a } => vec![a.clone()],
            EndoRep::Shear { delta, a, c } => {
                let n = delta - 2;
                let mut v = vec![a.clone()];
                v.extend((0..=n).map(|k| c.coeff(&BiMonomial::new(n - k, k, 0, 0))));
                v
            }
        }
    }

    pub fn delta(&self) -> u32 {
        match self {
            EndoRep::Split { .. } => 0,
            EndoRep::Scalar { .. } => 1,
            EndoRep::Shear { delta, .. } => *delta,
        }
    }

    pub fn a(&self) -> &Rat {
        match self {
            EndoRep::Split { a, .. } | EndoRep::Scalar { a } | EndoRep::Shear { a, .. } => a,
        }
    }

    pub fn is_invertible(&self) -> bool {
        match self {
            EndoRep::Split { a, d } => !a.is_zero() && !d.is_zero(),
            EndoRep::Scalar { a } | EndoRep::Shear { a, .. } => !a.is_zero(),
        }
    }

    /// True when `Φ` is multiplication by a constant.
    pub fn is_homothety(&self) -> bool {
        match self {
            EndoRep::Split { a, d } => a == d,
            EndoRep::Scalar { .. } => true,
            EndoRep::Shear { c, .. } => c.is_zero(),
        }
    }

    pub fn matrix(&self) -> Matrix4 {
        let delta = self.delta();
        let k = |r: &Rat| BiPoly::constant(delta, r.clone());
        let mut m = Matrix4::zero(delta);
        match self {
            EndoRep::Split { a, d } => {
                m.entries[0][0] = k(a);
                m.entries[1][1] = k(a);
                m.entries[2][2] = k(d);
                m.entries[3][3] = k(d);
            }
            EndoRep::Scalar { a } | EndoRep::Shear { a, .. } => {
                for i in 0..4 {
                    m.entries[i][i] = k(a);
                }
            }
        }
        if let EndoRep::Shear { c, .. } = self {
            let v = |x| BiPoly::var(delta, x);
            let y1c = &v(Var::Y1) * c;
            m.entries[2][0] = &v(Var::X1) * &y1c;
            m.entries[2][1] = -(&v(Var::X0) * &y1c);
        }
        m
    }
}

impl fmt::Display for EndoRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EndoRep::Split { a, d } => write!(f, "A(a={a}, d={d})"),
            EndoRep::Scalar { a } => write!(f, "A(a={a})"),
            EndoRep::Shear { a, c, .. } => write!(f, "A(a={a}, C={c})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix4 {
    pub entries: [[BiPoly; 4]; 4],
}

impl Matrix4 {
    pub fn zero(delta: u32) -> Self {
        Matrix4 {
            entries: std::array::from_fn(|_| std::array::from_fn(|_| BiPoly::zero(delta))),
        }
    }

    pub fn mul(&self, o: &Matrix4) -> Matrix4 {
        Matrix4 {
            entries: std::array::from_fn(|i| {
                std::array::from_fn(|j| {
                    (0..4).fold(BiPoly::zero(self.entries[0][0].delta()), |acc, k| {
                        acc + &self.entries[i][k] * &o.entries[k][j]
                    })
                })
            }),
        }
    }

    /// `M · v` for a column vector.
    pub fn apply(&self, v: &[BiPoly; 4]) -> [BiPoly; 4] {
        std::array::from_fn(|i| {
            (0..4).fold(BiPoly::zero(v[0].delta()), |acc, k| {
                acc + &self.entries[i][k] * &v[k]
            })
        })
    }
}

fn same_delta(phi: &EndoRep, delta: u32) -> Result<()> {
    if phi.delta() == delta {
        Ok(())
    } else {
        Err(Error::DeltaMismatch(phi.delta(), delta))
    }
}

/// `A · (V0, V1, W0, W1)ᵗ`.
pub fn apply_to_vf(phi: &EndoRep, x: &VectorFieldRep) -> Result<VectorFieldRep> {
    same_delta(phi, x.delta)?;
    VectorFieldRep::new(x.delta, x.d, phi.matrix().apply(&x.comps))
}

/// The 1-form of `Φ(X)` given the 1-form `Ω` of `X`:
/// `(d A0, d A1, a B0, a B1)` for `δ = 0`, `aΩ` for `δ = 1`, and
/// `aΩ − Y1 C B0 (X1 dX0 − X0 dX1)` for `δ ≥ 2`.
///
/// The result may be the zero form.
pub fn apply_to_form(phi: &EndoRep, form: &OneFormRep) -> Result<OneFormRep> {
    same_delta(phi, form.delta)?;
    let delta = form.delta;
    let [a0, a1, b0, b1] = &form.coeffs;
    let coeffs = match phi {
        EndoRep::Split { a, d } => [a0.scale(d), a1.scale(d), b0.scale(a), b1.scale(a)],
        EndoRep::Scalar { a } => std::array::from_fn(|k| form.coeffs[k].scale(a)),
        EndoRep::Shear { a, c, .. } => {
            let v = |x| BiPoly::var(delta, x);
            let y1cb0 = &(&v(Var::Y1) * c) * b0;
            [
                &a0.scale(a) - &(&v(Var::X1) * &y1cb0),
                &a1.scale(a) + &(&v(Var::X0) * &y1cb0),
                b0.scale(a),
                b1.scale(a),
            ]
        }
    };
    OneFormRep::new(delta, form.d, coeffs)
}

/// `Φ ∘ Ψ`.
pub fn compose(phi: &EndoRep, psi: &EndoRep) -> Result<EndoRep> {
    same_delta(phi, psi.delta())?;
    Ok(match (phi, psi) {
        (EndoRep::Split { a, d }, EndoRep::Split { a: a2, d: d2 }) => {
            EndoRep::split(a * a2, d * d2)
        }
        (EndoRep::Scalar { a }, EndoRep::Scalar { a: a2 }) => EndoRep::scalar(a * a2),
        (EndoRep::Shear { delta, a, c }, EndoRep::Shear { a: a2, c: c2, .. }) => {
            EndoRep::shear(*delta, a * a2, &c2.scale(a) + &c.scale(a2))?
        }
        _ => unreachable!("same delta implies same normal form"),
    })
}

/// `C(1, x)` on `U0j`, `C(x, 1)` on `U1j`.
fn c_on_chart(c: &BiPoly, chart: ChartId) -> ChartPoly {
    let mut out = ChartPoly::zero();
    for (m, k) in c.terms() {
        let e = if chart.i == 0 { m.beta } else { m.alpha };
        out = &out + &ChartPoly::monomial(Mono2::new(e, 0), k.clone());
    }
    out
}

/// The 2×2 matrix of `Φ` acting on `(f, g)` for a field `f ∂x + g ∂y` on
/// `chart`. For `δ ≥ 2` the lower-left entry is `c(x) y²`, `−C(x,1) y²`,
/// `−c(x)`, `C(x,1)` on `U00, U10, U01, U11`, where `c(x) = C(1, x)`.
pub fn local_matrix(phi: &EndoRep, chart: ChartId) -> [[ChartPoly; 2]; 2] {
    let k = |r: &Rat| ChartPoly::constant(r.clone());
    match phi {
        EndoRep::Split { a, d } => [[k(a), ChartPoly::zero()], [ChartPoly::zero(), k(d)]],
        EndoRep::Scalar { a } => [[k(a), ChartPoly::zero()], [ChartPoly::zero(), k(a)]],
        EndoRep::Shear { a, c, .. } => {
            let cc = c_on_chart(c, chart);
            let lower = match (chart.i, chart.j) {
                (0, 0) => &cc * &ChartPoly::monomial(Mono2::new(0, 2), Rat::one()),
                (1, 0) => -&(&cc * &ChartPoly::monomial(Mono2::new(0, 2), Rat::one())),
                (0, 1) => -&cc,
                _ => cc,
            };
            [[k(a), ChartPoly::zero()], [lower, k(a)]]
        }
    }
}

/// Exponents of the transition map: the coordinates of `to` are
/// `x^{m[0][0]} y^{m[0][1]}` and `x^{m[1][0]} y^{m[1][1]}` in the coordinates
/// of `from`.
pub fn transition_exponents(delta: u32, from: ChartId, to: ChartId) -> [[i64; 2]; 2] {
    let slice = from.slice();
    let target = to.coordinate_exponents(delta);
    std::array::from_fn(|r| {
        let mut out = [0i64; 2];
        for k in 0..4 {
            match slice[k] {
                crate::bipoly::SliceValue::One => {}
                crate::bipoly::SliceValue::X => out[0] += target[r][k],
                crate::bipoly::SliceValue::Y => out[1] += target[r][k],
            }
        }
        out
    })
}

fn laurent(x: &Rat, y: &Rat, e: [i64; 2]) -> Rat {
    crate::bipoly::rat_pow(x, e[0]) * crate::bipoly::rat_pow(y, e[1])
}

/// Jacobian of the transition map at `(x, y)` in the coordinates of `from`.
pub fn transition_jacobian(
    delta: u32,
    from: ChartId,
    to: ChartId,
    x: &Rat,
    y: &Rat,
) -> [[Rat; 2]; 2] {
    let e = transition_exponents(delta, from, to);
    std::array::from_fn(|r| {
        let u = laurent(x, y, e[r]);
        [
            &u * Rat::from_integer(e[r][0].into()) / x,
            &u * Rat::from_integer(e[r][1].into()) / y,
        ]
    })
}

/// The transition map itself.
pub fn transition_map(delta: u32, from: ChartId, to: ChartId, x: &Rat, y: &Rat) -> (Rat, Rat) {
    let e = transition_exponents(delta, from, to);
    (laurent(x, y, e[0]), laurent(x, y, e[1]))
}

/// Checks `M_to(φ(p)) · J = J · M_from(p)` at a point of the overlap.
pub fn transition_holds(phi: &EndoRep, from: ChartId, to: ChartId, x: &Rat, y: &Rat) -> bool {
    let delta = phi.delta();
    let j = transition_jacobian(delta, from, to, x, y);
    let (u, v) = transition_map(delta, from, to, x, y);
    let ev = |m: [[ChartPoly; 2]; 2], p: &Rat, q: &Rat| -> [[Rat; 2]; 2] {
        std::array::from_fn(|r| std::array::from_fn(|s| m[r][s].eval(p, q)))
    };
    let m_from = ev(local_matrix(phi, from), x, y);
    let m_to = ev(local_matrix(phi, to), &u, &v);
    let mul = |a: &[[Rat; 2]; 2], b: &[[Rat; 2]; 2]| -> [[Rat; 2]; 2] {
        std::array::from_fn(|r| std::array::from_fn(|s| &a[r][0] * &b[0][s] + &a[r][1] * &b[1][s]))
    };
    mul(&m_to, &j) == mul(&j, &m_from)
}

/// Basis of the space of `C` forms, in parameter order.
pub fn c_basis(delta: u32) -> Vec<BiMonomial> {
    if delta < 2 {
        return Vec::new();
    }
    let mut b = monomial_basis(delta, c_degree(delta));
    b.sort_by_key(|m| m.beta);
    b
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::foliation::{random_section, restrict_vf, vf_to_form};
    use crate::rat;

    fn p(delta: u32, s: &str) -> BiPoly {
        BiPoly::parse(delta, s).unwrap()
    }

    fn running_example() -> VectorFieldRep {
        VectorFieldRep::parse(0, BiDegree::new(0, 0), ["0", "X0", "0", "Y0"]).unwrap()
    }

    #[test]
    fn dimensions_match_parameter_counts() {
        assert_eq!(endo_space_dim(0), 2);
        assert_eq!(endo_space_dim(1), 1);
        assert_eq!(endo_space_dim(3), 3);
        for delta in 2..6 {
            assert_eq!(1 + c_basis(delta).len(), endo_space_dim(delta));
            let params: Vec<Rat> = (1..=endo_space_dim(delta) as i64).map(rat).collect();
            assert_eq!(
                EndoRep::from_params(delta, &params).unwrap().params(),
                params
            );
        }
    }

    #[test]
    fn invertibility() {
        assert!(!EndoRep::split(rat(1), rat(0)).is_invertible());
        assert!(EndoRep::shear(2, rat(1), p(2, "5"))
            .unwrap()
            .is_invertible());
        assert!(!EndoRep::scalar(rat(0)).is_invertible());
    }

    #[test]
    fn invalid_parameters() {
        assert!(EndoRep::shear(3, rat(1), p(3, "Y0")).is_err());
        assert!(EndoRep::new(1, rat(1), Some(rat(2)), None).is_err());
        assert!(EndoRep::new(0, rat(1), None, Some(p(0, "1"))).is_err());
        assert!(EndoRep::from_params(2, &[rat(1)]).is_err());
    }

    #[test]
    fn vector_field_action() {
        let x = running_example();
        let phi = EndoRep::split(rat(2), rat(3));
        let y = apply_to_vf(&phi, &x).unwrap();
        assert_eq!(
            y,
            VectorFieldRep::parse(0, x.d, ["0", "2*X0", "0", "3*Y0"]).unwrap()
        );
        assert_eq!(apply_to_vf(&EndoRep::identity(0), &x).unwrap(), x);

        let x = random_section(2, BiDegree::new(0, 0), 1);
        let phi = EndoRep::shear(2, rat(0), p(2, "1")).unwrap();
        let y = apply_to_vf(&phi, &x).unwrap();
        let [v0, v1, _, _] = &x.comps;
        let w0 = &(&p(2, "X1*Y1") * v0) - &(&p(2, "X0*Y1") * v1);
        assert_eq!(
            y.comps,
            [BiPoly::zero(2), BiPoly::zero(2), w0, BiPoly::zero(2)]
        );
    }

    #[test]
    fn form_action_examples() {
        let w = vf_to_form(&running_example()).unwrap();
        let phi = EndoRep::split(rat(2), rat(3));
        let expected = OneFormRep::parse(
            0,
            w.d,
            ["3*X1*Y0^2", "-3*X0*Y0^2", "-2*X0^2*Y1", "2*X0^2*Y0"],
        )
        .unwrap();
        assert_eq!(apply_to_form(&phi, &w).unwrap(), expected);

        let w = vf_to_form(&random_section(1, BiDegree::new(1, 0), 4)).unwrap();
        assert_eq!(
            apply_to_form(&EndoRep::scalar(rat(5)), &w).unwrap(),
            w.scale(&rat(5))
        );
        let w = vf_to_form(&random_section(3, BiDegree::new(0, 1), 4)).unwrap();
        let phi = EndoRep::shear(3, rat(-2), BiPoly::zero(3)).unwrap();
        assert_eq!(apply_to_form(&phi, &w).unwrap(), w.scale(&rat(-2)));
    }

    #[test]
    fn commuting_square() {
        for delta in 0..5u32 {
            for seed in 0..3 {
                let x = random_section(delta, BiDegree::new(0, 1), 100 + seed);
                let params: Vec<Rat> = (0..endo_space_dim(delta))
                    .map(|k| rat(k as i64 * 2 - 3))
                    .collect();
                let phi = EndoRep::from_params(delta, &params).unwrap();
                let lhs = apply_to_form(&phi, &vf_to_form(&x).unwrap()).unwrap();
                let rhs = vf_to_form(&apply_to_vf(&phi, &x).unwrap()).unwrap();
                assert_eq!(lhs, rhs, "delta {delta}");
            }
        }
    }

    #[test]
    fn composition_is_matrix_product() {
        for delta in 0..5u32 {
            let n = endo_space_dim(delta);
            let f = EndoRep::from_params(
                delta,
                &(0..n).map(|k| rat(k as i64 + 2)).collect::<Vec<_>>(),
            )
            .unwrap();
            let g = EndoRep::from_params(
                delta,
                &(0..n).map(|k| rat(3 - k as i64)).collect::<Vec<_>>(),
            )
            .unwrap();
            let fg = compose(&f, &g).unwrap();
            assert_eq!(fg.matrix(), f.matrix().mul(&g.matrix()));
            assert_eq!(compose(&f, &EndoRep::identity(delta)).unwrap(), f);
            if delta == 0 {
                assert_eq!(fg, compose(&g, &f).unwrap());
            }
        }
    }

    #[test]
    fn local_matrices_push_forward() {
        // Φ(X) restricted to a chart is M · (restriction of X)
        for delta in 0..5u32 {
            let n = endo_space_dim(delta);
            let phi = EndoRep::from_params(
                delta,
                &(0..n).map(|k| rat(2 * k as i64 + 1)).collect::<Vec<_>>(),
            )
            .unwrap();
            let x = random_section(delta, BiDegree::new(1, 1), 9 + u64::from(delta));
            let y = apply_to_vf(&phi, &x).unwrap();
            for c in ChartId::ALL {
                let m = local_matrix(&phi, c);
                let r = restrict_vf(&x, c);
                let s = restrict_vf(&y, c);
                assert_eq!(
                    s.f,
                    &(&m[0][0] * &r.f) + &(&m[0][1] * &r.g),
                    "delta {delta} {c}"
                );
                assert_eq!(
                    s.g,
                    &(&m[1][0] * &r.f) + &(&m[1][1] * &r.g),
                    "delta {delta} {c}"
                );
            }
        }
    }

    #[test]
    fn delta_two_local_matrices() {
        let phi = EndoRep::shear(3, rat(1), p(3, "2*X0 + 5*X1")).unwrap();
        let cp = |s: &str| ChartPoly::parse(s).unwrap();
        assert_eq!(
            local_matrix(&phi, ChartId::U00)[1][0],
            cp("5*x*y^2 + 2*y^2")
        );
        assert_eq!(local_matrix(&phi, ChartId::U01)[1][0], cp("-5*x - 2"));
        assert_eq!(local_matrix(&phi, ChartId::U11)[1][0], cp("2*x + 5"));
        assert_eq!(
            local_matrix(&phi, ChartId::U10)[1][0],
            cp("-2*x*y^2 - 5*y^2")
        );
        let phi0 = EndoRep::split(rat(2), rat(7));
        for c in ChartId::ALL {
            assert_eq!(local_matrix(&phi0, c), local_matrix(&phi0, ChartId::U00));
        }
    }

    #[test]
    fn transitions_on_all_overlaps() {
        let pts = [(rat(2), rat(3)), (Rat::new((-1).into(), 3.into()), rat(5))];
        for delta in 0..5u32 {
            let n = endo_space_dim(delta);
            let phi = EndoRep::from_params(
                delta,
                &(0..n).map(|k| rat(k as i64 - 1)).collect::<Vec<_>>(),
            )
            .unwrap();
            for from in ChartId::ALL {
                for to in ChartId::ALL {
                    for (x, y) in &pts {
                        assert!(
                            transition_holds(&phi, from, to, x, y),
                            "delta {delta} {from}->{to}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn u00_to_u11_transition_exponents() {
        for delta in 0..5u32 {
            let d = i64::from(delta);
            assert_eq!(
                transition_exponents(delta, ChartId::U00, ChartId::U11),
                [[-1, 0], [-d, -1]]
            );
            assert_eq!(
                transition_exponents(delta, ChartId::U11, ChartId::U00),
                [[-1, 0], [d, -1]]
            );
        }
    }
}
