//! Divisor classes `d1 F + d2 M` on `S_δ` and the dimension counts of their
//! cohomology.
//!
//! `F` is the fibre and `M` the section with `M² = δ`; `O(d1, d2)` is the
//! line bundle of the class `d1 F + d2 M`.

use std::fmt;

use serde::Serialize;

use crate::bipoly::{monomial_basis, BiDegree};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct DivisorClass {
    pub delta: u32,
    pub d1: i64,
    pub d2: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CohomDims {
    pub h0: i64,
    pub h1: i64,
    pub h2: i64,
}

impl DivisorClass {
    pub const fn new(delta: u32, d1: i64, d2: i64) -> Self {
        DivisorClass { delta, d1, d2 }
    }

    pub fn from_bidegree(delta: u32, d: BiDegree) -> Self {
        DivisorClass::new(delta, d.d1, d.d2)
    }

    pub fn fibre(delta: u32) -> Self {
        DivisorClass::new(delta, 1, 0)
    }

    pub fn section(delta: u32) -> Self {
        DivisorClass::new(delta, 0, 1)
    }

    /// `M0 = M − δF`, the curve of self-intersection `−δ`.
    pub fn negative_section(delta: u32) -> Self {
        DivisorClass::new(delta, -i64::from(delta), 1)
    }

    pub fn bidegree(&self) -> BiDegree {
        BiDegree::new(self.d1, self.d2)
    }

    fn same_surface(&self, o: &DivisorClass) -> Result<()> {
        if self.delta == o.delta {
            Ok(())
        } else {
            Err(Error::DeltaMismatch(self.delta, o.delta))
        }
    }

    pub fn checked_add(&self, o: &DivisorClass) -> Result<DivisorClass> {
        self.same_surface(o)?;
        Ok(DivisorClass::new(
            self.delta,
            self.d1 + o.d1,
            self.d2 + o.d2,
        ))
    }

    pub fn checked_sub(&self, o: &DivisorClass) -> Result<DivisorClass> {
        self.same_surface(o)?;
        Ok(DivisorClass::new(
            self.delta,
            self.d1 - o.d1,
            self.d2 - o.d2,
        ))
    }

    pub fn neg(&self) -> DivisorClass {
        DivisorClass::new(self.delta, -self.d1, -self.d2)
    }

    pub fn is_effective(&self) -> bool {
        self.d1 + i64::from(self.delta) * self.d2 >= 0 && self.d2 >= 0
    }

    pub fn is_ample(&self) -> bool {
        self.d1 > 0 && self.d2 > 0
    }

    pub fn is_nef(&self) -> bool {
        self.d1 >= 0 && self.d2 >= 0
    }

    /// `χ = D·(D − K)/2 + 1`, in closed form.
    pub fn euler_characteristic(&self) -> i64 {
        let (d1, d2) = (self.d1, self.d2);
        (d1 + 1) * (d2 + 1) + i64::from(self.delta) * d2 * (d2 + 1) / 2
    }

    pub fn h0(&self) -> i64 {
        monomial_basis(self.delta, self.bidegree()).len() as i64
    }

    /// Serre duality: `h2(D) = h0(K − D)`.
    pub fn h2(&self) -> i64 {
        canonical(self.delta)
            .checked_sub(self)
            .expect("same surface")
            .h0()
    }

    /// Fails with [`Error::NegativeH1`] if the counts are inconsistent.
    pub fn h1(&self) -> Result<i64> {
        let h1 = self.h0() + self.h2() - self.euler_characteristic();
        if h1 < 0 {
            Err(Error::NegativeH1(h1))
        } else {
            Ok(h1)
        }
    }

    pub fn cohomology(&self) -> Result<CohomDims> {
        Ok(CohomDims {
            h0: self.h0(),
            h1: self.h1()?,
            h2: self.h2(),
        })
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "O({}, {}) on S_{}", self.d1, self.d2, self.delta)
    }
}

/// `(aF + bM)·(cF + dM) = ad + bc + δbd`.
pub fn intersect(a: &DivisorClass, b: &DivisorClass) -> Result<i64> {
    a.same_surface(b)?;
    Ok(a.d1 * b.d2 + a.d2 * b.d1 + i64::from(a.delta) * a.d2 * b.d2)
}

pub fn canonical(delta: u32) -> DivisorClass {
    DivisorClass::new(delta, i64::from(delta) - 2, -2)
}

/// Converts Chern-class coordinates `a f + b h` to a bidegree:
/// `(a − δb/2, b)`.
pub fn chern_to_bidegree(a: i64, b: i64, delta: u32) -> Result<DivisorClass> {
    let db = i64::from(delta) * b;
    if db % 2 != 0 {
        return Err(Error::NonIntegralClass { a, b, delta });
    }
    Ok(DivisorClass::new(delta, a - db / 2, b))
}
