//! Singular schemes of foliations, chart by chart.
//!
//! On `U_ij` the scheme is cut out by the two coefficients of the chart
//! 1-form. Multiplicities are counted without primary decomposition: each
//! closed point is assigned to the first chart in the order
//! `U00, U10, U01, U11` that contains it, and the points already seen are
//! removed by saturating with the chart coordinate that vanishes on them.

use serde::Serialize;

use crate::bipoly::{BiMonomial, BiPoly, ChartId, Var};
use crate::chartpoly::{self, ChartPoly};
use crate::error::{Error, Result};
use crate::foliation::{check_form, restrict_form, OneFormRep};
use crate::grobner::{self, ChartIdeal, GroebnerBasis};
use crate::BiDegree;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChartScheme {
    pub chart: ChartId,
    /// `⟨Ã_{1−i}, B̃_{1−j}⟩`.
    pub ideal: ChartIdeal,
    pub basis: GroebnerBasis,
    pub zero_dimensional: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SingularScheme {
    pub delta: u32,
    pub d: BiDegree,
    /// Indexed like [`ChartId::ALL`].
    pub charts: Vec<ChartScheme>,
}

impl SingularScheme {
    pub fn chart(&self, c: ChartId) -> &ChartScheme {
        self.charts
            .iter()
            .find(|s| s.chart == c)
            .expect("all four charts present")
    }

    pub fn is_isolated(&self) -> bool {
        self.charts.iter().all(|c| c.zero_dimensional)
    }

    pub fn is_empty(&self) -> bool {
        self.charts.iter().all(|c| c.basis.is_unit())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MultiplicityReport {
    pub u00: usize,
    /// Points on `X0 = 0`, `Y0 ≠ 0`, seen in `U10`.
    pub x0_line: usize,
    /// Points on `Y0 = 0`, `X0 ≠ 0`, seen in `U01`.
    pub y0_line: usize,
    /// The point `X0 = Y0 = 0`, seen in `U11`.
    pub corner: usize,
    pub total: usize,
}

pub fn chart_scheme(form: &OneFormRep, chart: ChartId) -> ChartScheme {
    let local = restrict_form(form, chart);
    let ideal = ChartIdeal::new(chart, vec![local.a, local.b]);
    let basis = ideal.groebner();
    let zero_dimensional = grobner::is_zero_dimensional(&basis);
    ChartScheme {
        chart,
        ideal,
        basis,
        zero_dimensional,
    }
}

pub fn singular_scheme(form: &OneFormRep) -> Result<SingularScheme> {
    if form.is_zero() {
        return Err(Error::ZeroForm);
    }
    check_form(form)?;
    Ok(SingularScheme {
        delta: form.delta,
        d: form.d,
        charts: ChartId::ALL
            .iter()
            .map(|&c| chart_scheme(form, c))
            .collect(),
    })
}

pub fn is_isolated(z: &SingularScheme) -> bool {
    z.is_isolated()
}

/// Reduced bases are unique, so equality is a comparison of bases.
pub fn scheme_equal(a: &SingularScheme, b: &SingularScheme) -> bool {
    a.delta == b.delta
        && ChartId::ALL
            .iter()
            .all(|&c| a.chart(c).basis == b.chart(c).basis)
}

/// `small ⊆ big` as schemes, i.e. `I_big ⊆ I_small` on every chart.
pub fn scheme_contains(small: &SingularScheme, big: &SingularScheme) -> bool {
    small.delta == big.delta
        && ChartId::ALL.iter().all(|&c| {
            let s = &small.chart(c).basis;
            big.chart(c)
                .basis
                .elements()
                .iter()
                .all(|g| grobner::basis_contains(s, g))
        })
}

pub fn total_multiplicity(z: &SingularScheme) -> Result<MultiplicityReport> {
    if !z.is_isolated() {
        return Err(Error::NotIsolated);
    }
    let (x, y) = (ChartPoly::x(), ChartPoly::y());
    let qdim = grobner::quotient_dimension;
    let sat = grobner::saturate_basis;
    let u00 = qdim(&z.chart(ChartId::U00).basis)?;

    let b = &z.chart(ChartId::U10).basis;
    let x0_line = qdim(b)? - qdim(&sat(b, &x)?)?;

    let b = &z.chart(ChartId::U01).basis;
    let y0_line = qdim(b)? - qdim(&sat(b, &y)?)?;

    let b = &z.chart(ChartId::U11).basis;
    let sx = sat(b, &x)?;
    let sy = sat(b, &y)?;
    let sxy = sat(&sx, &y)?;
    let corner = qdim(b)? + qdim(&sxy)? - qdim(&sx)? - qdim(&sy)?;

    Ok(MultiplicityReport {
        u00,
        x0_line,
        y0_line,
        corner,
        total: u00 + x0_line + y0_line + corner,
    })
}

/// `c2(TS ⊗ L*)` for `L* = O(d1, d2)`: the number of singular points with
/// multiplicity of a section with isolated zeros.
pub fn expected_multiplicity(delta: u32, d: BiDegree) -> i64 {
    let dl = i64::from(delta);
    let (d1, d2) = (d.d1, d.d2);
    4 + 2 * d1 + (2 + dl) * d2 + 2 * d1 * d2 + dl * d2 * d2
}

/// Inverse of dehomogenization on `U00` with the smallest possible bidegree:
/// `x^a y^b ↦ X0^{D1 − a + δb} X1^a Y0^{D2 − b} Y1^b`.
pub fn rehomogenize(delta: u32, p: &ChartPoly) -> BiPoly {
    let dl = i64::from(delta);
    let Some(d2) = p.terms().map(|(m, _)| i64::from(m.y)).max() else {
        return BiPoly::zero(delta);
    };
    let d1 = p
        .terms()
        .map(|(m, _)| i64::from(m.x) - dl * i64::from(m.y))
        .max()
        .expect("nonempty");
    BiPoly::from_terms(
        delta,
        p.terms()
            .map(|(m, c)| {
                let (a, b) = (i64::from(m.x), i64::from(m.y));
                let alpha = (d1 - a + dl * b) as u32;
                let gamma = (d2 - b) as u32;
                (BiMonomial::new(alpha, m.x, gamma, m.y), c.clone())
            })
            .collect::<Vec<_>>(),
    )
}

/// Greatest common divisor of `A0, A1, B0, B1`, monic. Constant exactly
/// when the singular set has no curve component.
pub fn common_factor(form: &OneFormRep) -> BiPoly {
    let delta = form.delta;
    let nonzero: Vec<&BiPoly> = form.coeffs.iter().filter(|c| !c.is_zero()).collect();
    if nonzero.is_empty() {
        return BiPoly::zero(delta);
    }
    let ex0 = nonzero
        .iter()
        .map(|c| c.min_exponent(Var::X0))
        .min()
        .unwrap();
    let ey0 = nonzero
        .iter()
        .map(|c| c.min_exponent(Var::Y0))
        .min()
        .unwrap();
    let local: Vec<ChartPoly> = nonzero
        .iter()
        .map(|c| c.substitute_chart(ChartId::U00))
        .collect();
    let g = chartpoly::gcd_all(&local);
    let monomial = BiPoly::monomial(delta, BiMonomial::new(ex0, 0, ey0, 0), crate::rat(1));
    &monomial * &rehomogenize(delta, &g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::foliation::{random_section, ruling_form, solve_forms, vf_to_form, VectorFieldRep};
    use crate::rat;

    fn running_form() -> OneFormRep {
        let x = VectorFieldRep::parse(0, BiDegree::new(0, 0), ["0", "X0", "0", "Y0"]).unwrap();
        vf_to_form(&x).unwrap()
    }

    fn cp(s: &str) -> ChartPoly {
        ChartPoly::parse(s).unwrap()
    }

    #[test]
    fn running_example_scheme() {
        let z = singular_scheme(&running_form()).unwrap();
        for c in [ChartId::U00, ChartId::U10, ChartId::U01] {
            assert!(z.chart(c).basis.is_unit(), "{c}");
        }
        assert_eq!(
            z.chart(ChartId::U11).basis.elements(),
            &[cp("y^2"), cp("x^2")]
        );
        assert!(z.is_isolated() && !z.is_empty());
        let m = total_multiplicity(&z).unwrap();
        assert_eq!(m.total, 4);
        assert_eq!(m.corner, 4);
        assert_eq!(expected_multiplicity(0, BiDegree::new(0, 0)), 4);
    }

    #[test]
    fn ruling_has_no_singularities() {
        for delta in 0..5 {
            let z = singular_scheme(&ruling_form(delta)).unwrap();
            assert!(z.is_empty() && z.is_isolated());
            assert_eq!(total_multiplicity(&z).unwrap().total, 0);
            let d = BiDegree::new(i64::from(delta), -2);
            assert_eq!(expected_multiplicity(delta, d), 0);
        }
    }

    #[test]
    fn zero_form_is_rejected() {
        let w = OneFormRep::zero(0, BiDegree::new(0, 0));
        assert!(matches!(singular_scheme(&w), Err(Error::ZeroForm)));
    }

    #[test]
    fn random_delta_one_section() {
        let d = BiDegree::new(1, 1);
        let w = vf_to_form(&random_section(1, d, 2024)).unwrap();
        let z = singular_scheme(&w).unwrap();
        assert!(z.is_isolated());
        assert_eq!(
            total_multiplicity(&z).unwrap().total as i64,
            expected_multiplicity(1, d)
        );
        assert_eq!(expected_multiplicity(1, d), 12);
    }

    #[test]
    fn minus_two_family_is_not_isolated() {
        for delta in 2..5u32 {
            for d2 in 0..2 {
                for w in solve_forms(delta, BiDegree::new(-2, d2)) {
                    let z = singular_scheme(&w).unwrap();
                    assert!(!z.is_isolated());
                    assert!(matches!(total_multiplicity(&z), Err(Error::NotIsolated)));
                    let g = common_factor(&w);
                    assert!(g.min_exponent(Var::Y1) >= 1, "{g}");
                }
            }
        }
    }

    #[test]
    fn common_factors() {
        let w = running_form();
        assert_eq!(common_factor(&w), BiPoly::one(0));
        let x0 = BiPoly::var(0, Var::X0);
        let scaled = OneFormRep {
            delta: 0,
            d: BiDegree::new(1, 0),
            coeffs: std::array::from_fn(|k| &w.coeffs[k] * &x0),
        };
        assert_eq!(common_factor(&scaled), x0);
        let w = vf_to_form(&random_section(2, BiDegree::new(0, 1), 8)).unwrap();
        let f = BiPoly::parse(2, "X0 + 2*X1").unwrap();
        let scaled = OneFormRep {
            delta: 2,
            d: BiDegree::new(1, 1),
            coeffs: std::array::from_fn(|k| &w.coeffs[k] * &f),
        };
        assert_eq!(
            common_factor(&scaled),
            BiPoly::parse(2, "1/2*X0 + X1").unwrap()
        );
    }

    #[test]
    fn rehomogenize_examples() {
        let p = rehomogenize(1, &cp("x^2 + y"));
        assert_eq!(p, BiPoly::parse(1, "X1^2*Y0 + X0^3*Y1").unwrap());
        assert!(p.has_bidegree(BiDegree::new(2, 1)));
    }

    #[test]
    fn chart_ideal_matches_chart_field() {
        for delta in 0..3 {
            let x = random_section(delta, BiDegree::new(0, 1), 40 + u64::from(delta));
            let w = vf_to_form(&x).unwrap();
            for c in ChartId::ALL {
                let v = crate::foliation::restrict_vf(&x, c);
                let j = ChartIdeal::new(c, vec![v.f, v.g]);
                assert!(
                    grobner::ideal_equal(&chart_scheme(&w, c).ideal, &j),
                    "delta {delta} {c}"
                );
            }
        }
    }

    #[test]
    fn scaling_preserves_the_scheme() {
        let w = vf_to_form(&random_section(1, BiDegree::new(0, 0), 3)).unwrap();
        let a = singular_scheme(&w).unwrap();
        let b = singular_scheme(&w.scale(&rat(-7))).unwrap();
        assert!(scheme_equal(&a, &b));
        assert!(scheme_contains(&a, &b) && scheme_contains(&b, &a));
    }

    #[test]
    fn multiplicity_closed_form_values() {
        assert_eq!(expected_multiplicity(1, BiDegree::new(1, 1)), 12);
        assert_eq!(expected_multiplicity(3, BiDegree::new(0, 0)), 4);
        assert_eq!(
            expected_multiplicity(2, BiDegree::new(-1, 1)),
            4 - 2 + 4 - 2 + 2
        );
    }
}
