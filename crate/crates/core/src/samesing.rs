//! Sections sharing a singular scheme.
//!
//! For `s` with isolated singular scheme `Z`, the sections `s′` of
//! `Θ ⊗ L*` whose scheme contains `Z` form a linear space: the 1-forms of the
//! right bidegree that satisfy the Euler conditions and whose chart
//! coefficients lie in the chart ideals of `Z`. On the region
//! `d2 ≥ 1, d1 ≥ 1 (δ = 0), d1 ≥ 0 (δ = 1), d1 ≥ 2 (δ ≥ 2)` this space is
//! exactly the orbit `{Φ(s)}` of the global endomorphisms of `TS_δ`.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::Serialize;

use crate::bipoly::{BiDegree, ChartId};
use crate::chartpoly::Mono2;
use crate::endomorph::{apply_to_form, endo_space_dim, EndoRep};
use crate::error::{Error, Result};
use crate::foliation::{
    projective_equal, random_section, solve_forms, vf_to_form, FormSpace, OneFormRep,
    VectorFieldRep,
};
use crate::grobner::{self, GroebnerBasis};
use crate::linebundle::DivisorClass;
use crate::rng::{derive_seed, Lcg};
use crate::singscheme::{scheme_contains, scheme_equal, singular_scheme, SingularScheme};
use crate::{linalg, rat, Rat};

/// Lower bound on `d1` for the theorem region, given `d2 ≥ 1`.
pub fn min_d1(delta: u32) -> i64 {
    match delta {
        0 => 1,
        1 => 0,
        _ => 2,
    }
}

pub fn in_theorem_region(delta: u32, d: BiDegree) -> bool {
    d.d2 >= 1 && d.d1 >= min_d1(delta)
}

fn check_region(delta: u32, d: BiDegree) -> Result<()> {
    if in_theorem_region(delta, d) {
        Ok(())
    } else {
        Err(Error::RegionViolation {
            delta,
            d1: d.d1,
            d2: d.d2,
            why: format!("need d2 >= 1 and d1 >= {}", min_d1(delta)),
        })
    }
}

#[derive(Debug, Clone)]
pub struct SameSingularSpace {
    pub base: OneFormRep,
    pub scheme: SingularScheme,
    pub basis: Vec<OneFormRep>,
}

impl SameSingularSpace {
    pub fn new(base: &OneFormRep) -> Result<Self> {
        let scheme = singular_scheme(base)?;
        let basis = sections_vanishing_on(&scheme, base.delta, base.d)?;
        Ok(SameSingularSpace {
            base: base.clone(),
            scheme,
            basis,
        })
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }
}

/// Rows forcing the chart coefficients of a form into the chart ideal.
fn containment_rows(space: &FormSpace, chart: ChartId, gb: &GroebnerBasis) -> Vec<Vec<Rat>> {
    if gb.is_unit() {
        return Vec::new();
    }
    let comps = [usize::from(1 - chart.i), 2 + usize::from(1 - chart.j)];
    let mut table = grobner::NormalFormTable::new(gb);
    // keyed by (which chart coefficient, standard monomial)
    let mut rows: BTreeMap<(usize, Mono2), Vec<Rat>> = BTreeMap::new();
    for (slot, &k) in comps.iter().enumerate() {
        for (off, m) in space.bases[k].iter().enumerate() {
            let col = space.range(k).start + off;
            let local =
                crate::bipoly::BiPoly::monomial(space.delta, *m, rat(1)).substitute_chart(chart);
            let nf = table.of(&local);
            for (s, c) in nf.terms() {
                rows.entry((slot, *s))
                    .or_insert_with(|| vec![Rat::zero(); space.ncols()])[col] += c;
            }
        }
    }
    rows.into_values().collect()
}

/// Basis of `{s′ : Z ⊆ Z(s′)}` among sections of bidegree `d`; the zero
/// section is included in the span.
pub fn sections_vanishing_on(
    z: &SingularScheme,
    delta: u32,
    d: BiDegree,
) -> Result<Vec<OneFormRep>> {
    if !z.is_isolated() {
        return Err(Error::NotIsolated);
    }
    if z.delta != delta {
        return Err(Error::DeltaMismatch(z.delta, delta));
    }
    let space = FormSpace::new(delta, d);
    let mut rows = space.euler_rows();
    for c in ChartId::ALL {
        rows.extend(containment_rows(&space, c, &z.chart(c).basis));
    }
    Ok(linalg::nullspace(&rows, space.ncols())
        .iter()
        .map(|v| space.to_form(v))
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Match {
    pub basis_index: usize,
    /// Endomorphism parameters as rationals, `None` if no `Φ` fits.
    pub params: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MainReport {
    pub delta: u32,
    pub d1: i64,
    pub d2: i64,
    pub dimension: usize,
    pub expected: usize,
    /// Rank of `Φ ↦ Φ(s)`.
    pub orbit_rank: usize,
    pub matches: Vec<Match>,
    pub warnings: Vec<String>,
    pub pass: bool,
}

/// Coefficient vectors of `Φ_k(s)` for the unit parameter vectors `e_k`.
fn orbit_columns(space: &FormSpace, form: &OneFormRep) -> Result<Vec<Vec<Rat>>> {
    let n = endo_space_dim(form.delta);
    (0..n)
        .map(|k| {
            let mut p = vec![Rat::zero(); n];
            p[k] = rat(1);
            let phi = EndoRep::from_params(form.delta, &p)?;
            Ok(space.to_vector(&apply_to_form(&phi, form)?))
        })
        .collect()
}

fn transpose(cols: &[Vec<Rat>], nrows: usize) -> Vec<Vec<Rat>> {
    (0..nrows)
        .map(|r| cols.iter().map(|c| c[r].clone()).collect())
        .collect()
}

/// Solves `Φ(s) = target` for the endomorphism parameters.
pub fn match_endomorphism(form: &OneFormRep, target: &OneFormRep) -> Result<Option<EndoRep>> {
    let space = FormSpace::new(form.delta, form.d);
    let cols = orbit_columns(&space, form)?;
    let a = transpose(&cols, space.ncols());
    match linalg::solve(&a, &space.to_vector(target), cols.len()) {
        Some(p) => Ok(Some(EndoRep::from_params(form.delta, &p)?)),
        None => Ok(None),
    }
}

/// Checks that the sections sharing the scheme of `form` are exactly its
/// endomorphism orbit.
pub fn verify_main_theorem(form: &OneFormRep) -> Result<MainReport> {
    let (delta, d) = (form.delta, form.d);
    check_region(delta, d)?;
    let same = SameSingularSpace::new(form)?;
    let space = FormSpace::new(delta, d);
    let cols = orbit_columns(&space, form)?;
    let a = transpose(&cols, space.ncols());
    let orbit_rank = linalg::rank(&a, cols.len());
    let expected = endo_space_dim(delta);
    let mut warnings = Vec::new();
    if delta >= 2 && form.coeffs[2].is_zero() {
        warnings.push("X0 V1 - X1 V0 vanishes: the orbit collapses to scalar multiples".into());
    }
    let matches: Vec<Match> = same
        .basis
        .iter()
        .enumerate()
        .map(|(i, b)| Match {
            basis_index: i,
            params: linalg::solve(&a, &space.to_vector(b), cols.len())
                .map(|p| p.iter().map(ToString::to_string).collect()),
        })
        .collect();
    let all_matched = matches.iter().all(|m| m.params.is_some());
    let target = if warnings.is_empty() {
        expected
    } else {
        orbit_rank
    };
    let pass = all_matched && same.dimension() == target && orbit_rank == target;
    Ok(MainReport {
        delta,
        d1: d.d1,
        d2: d.d2,
        dimension: same.dimension(),
        expected,
        orbit_rank,
        matches,
        warnings,
        pass,
    })
}

/// `h0(Θ ⊗ E) = 0` for `E = L ⊗ K = O(δ − d1 − 2, −d2 − 2)`.
pub fn lemma3_h0_check(delta: u32, d: BiDegree) -> bool {
    let e = BiDegree::new(i64::from(delta) - d.d1 - 2, -d.d2 - 2);
    solve_forms(delta, e).is_empty()
}

/// A seeded section in bidegree `d` with isolated singularities; for
/// `δ ≥ 2` also `X0 V1 − X1 V0 ≠ 0`. Returns the seed actually used.
pub fn sample_isolated(
    delta: u32,
    d: BiDegree,
    seed: u64,
) -> Result<(VectorFieldRep, OneFormRep, SingularScheme, u64)> {
    for k in 0..64 {
        let s = if k == 0 { seed } else { derive_seed(seed, k) };
        let x = random_section(delta, d, s);
        let w = vf_to_form(&x)?;
        if w.is_zero() || (delta >= 2 && w.coeffs[2].is_zero()) {
            continue;
        }
        let z = singular_scheme(&w)?;
        if z.is_isolated() {
            return Ok((x, w, z, s));
        }
    }
    Err(Error::NotIsolated)
}

/// Seeded endomorphism; `invertible` selects `a ≠ 0 (, d ≠ 0)`, otherwise a
/// non-invertible one that is not identically zero.
pub fn random_endomorphism(delta: u32, seed: u64, invertible: bool) -> EndoRep {
    let mut g = Lcg::new(seed);
    let n = endo_space_dim(delta);
    let mut p: Vec<Rat> = (0..n).map(|_| rat(g.small_int())).collect();
    if invertible {
        p[0] = rat(g.nonzero_small_int());
        if delta == 0 {
            p[1] = rat(g.nonzero_small_int());
        }
    } else {
        match delta {
            0 => {
                let zero = (g.next_u64() >> 40) as usize % 2;
                p[zero] = Rat::zero();
                p[1 - zero] = rat(g.nonzero_small_int());
            }
            1 => p[0] = Rat::zero(),
            _ => {
                p[0] = Rat::zero();
                p[1] = rat(g.nonzero_small_int());
            }
        }
    }
    EndoRep::from_params(delta, &p).expect("parameter count matches")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CorollaryCase {
    pub endomorphism: String,
    pub invertible: bool,
    pub image_zero: bool,
    pub scheme_equal: bool,
    pub contained: bool,
    pub image_isolated: bool,
    pub same_foliation: bool,
    pub same_foliation_expected: bool,
    pub pass: bool,
}

/// Compares the scheme of `Φ(s)` with that of `s`: equal for invertible `Φ`;
/// for singular `Φ` with `Φ(s) ≠ 0`, strictly larger with a curve component.
/// Also checks when `[Φ(s)] = [s]`.
pub fn corollary_case(
    form: &OneFormRep,
    z: &SingularScheme,
    phi: &EndoRep,
) -> Result<CorollaryCase> {
    let image = apply_to_form(phi, form)?;
    let same_expected = phi.is_homothety() || (form.delta >= 2 && form.coeffs[2].is_zero());
    let mut case = CorollaryCase {
        endomorphism: phi.to_string(),
        invertible: phi.is_invertible(),
        image_zero: image.is_zero(),
        scheme_equal: false,
        contained: false,
        image_isolated: false,
        same_foliation: !image.is_zero() && projective_equal(form, &image),
        same_foliation_expected: same_expected && !phi.a().is_zero(),
        pass: false,
    };
    if case.image_zero {
        // only non-invertible maps can kill a nonzero section
        case.pass = !case.invertible;
        return Ok(case);
    }
    let z2 = singular_scheme(&image)?;
    case.scheme_equal = scheme_equal(z, &z2);
    case.contained = scheme_contains(z, &z2);
    case.image_isolated = z2.is_isolated();
    let schemes_ok = if case.invertible {
        case.scheme_equal
    } else {
        case.contained && !case.scheme_equal && !case.image_isolated
    };
    case.pass = schemes_ok && case.same_foliation == case.same_foliation_expected;
    Ok(case)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CorollaryReport {
    pub delta: u32,
    pub d1: i64,
    pub d2: i64,
    pub seed: u64,
    pub cases: Vec<CorollaryCase>,
    pub pass: bool,
}

/// One sampled section against one invertible and one singular
/// endomorphism (the latter skipped for `δ = 1`, where it is zero).
pub fn verify_corollary(delta: u32, d: BiDegree, seed: u64) -> Result<CorollaryReport> {
    check_region(delta, d)?;
    let (_, w, z, used) = sample_isolated(delta, d, seed)?;
    let mut cases = vec![corollary_case(
        &w,
        &z,
        &random_endomorphism(delta, derive_seed(used, 101), true),
    )?];
    if delta != 1 {
        cases.push(corollary_case(
            &w,
            &z,
            &random_endomorphism(delta, derive_seed(used, 202), false),
        )?);
    }
    let pass = cases.iter().all(|c| c.pass);
    Ok(CorollaryReport {
        delta,
        d1: d.d1,
        d2: d.d2,
        seed: used,
        cases,
        pass,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RemarksReport {
    pub delta: u32,
    /// Sections of the tangent sheaf `O(−δ, 2)`.
    pub ruling_dimension: usize,
    pub ruling_is_x1dx0_minus_x0dx1: bool,
    pub ruling_scheme_empty: bool,
    /// Sections of `Θ ⊗ O(−2, 0)`.
    pub normal_dimension: usize,
    pub normal_expected: usize,
    pub normal_shape_ok: bool,
    pub h1_tangent_twist: i64,
    pub h1_normal_twist: i64,
    pub pass: bool,
}

fn normal_expected(delta: u32) -> usize {
    match delta {
        0 => 1,
        1 => 0,
        _ => delta as usize - 1,
    }
}

/// The fixed facts about the ruling and the normal-bundle twist.
pub fn verify_remarks(delta: u32) -> Result<RemarksReport> {
    let tau = solve_forms(delta, BiDegree::new(i64::from(delta), -2));
    let ruling = crate::foliation::ruling_form(delta);
    let ruling_ok = tau.len() == 1 && projective_equal(&tau[0], &ruling);
    let empty = singular_scheme(&ruling)?.is_empty();

    let normal = solve_forms(delta, BiDegree::new(-2, 0));
    let shape_ok = match delta {
        0 => {
            let expected = OneFormRep::parse(0, BiDegree::new(-2, 0), ["0", "0", "Y1", "-Y0"])?;
            normal.len() == 1 && projective_equal(&normal[0], &expected)
        }
        1 => normal.is_empty(),
        _ => normal.iter().all(|w| {
            w.coeffs
                .iter()
                .all(|c| c.min_exponent(crate::Var::Y1) >= 2 || c.is_zero())
        }),
    };
    let h1_t = DivisorClass::new(delta, i64::from(delta), -2).h1()?;
    let h1_n = DivisorClass::new(delta, -2, 0).h1()?;
    let pass = ruling_ok
        && empty
        && normal.len() == normal_expected(delta)
        && shape_ok
        && h1_t == 1
        && h1_n == 1;
    Ok(RemarksReport {
        delta,
        ruling_dimension: tau.len(),
        ruling_is_x1dx0_minus_x0dx1: ruling_ok,
        ruling_scheme_empty: empty,
        normal_dimension: normal.len(),
        normal_expected: normal_expected(delta),
        normal_shape_ok: shape_ok,
        h1_tangent_twist: h1_t,
        h1_normal_twist: h1_n,
        pass,
    })
}
