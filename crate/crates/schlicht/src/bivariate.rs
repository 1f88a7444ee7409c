//! Bivariate polynomials truncated by total degree.
//!
//! Support plumbing for the pair-generating-function expansion: the log of a
//! two-variable power series is taken by differentiating, long-dividing, and
//! integrating back.  Coefficients are only trusted up to the stored total
//! degree; operations cap their result at the provable degree.

use crate::error::{Error, Result};
use crate::num::CoeffField;

/// Dense rectangle storage; entries with `i + j > deg` are identically zero
/// and never read.
#[derive(Clone, Debug, PartialEq)]
pub(crate) struct Bivariate<C> {
    deg: usize,
    c: Vec<Vec<C>>,
}

impl<C: CoeffField> Bivariate<C> {
    pub fn zero(deg: usize) -> Self {
        Bivariate {
            deg,
            c: vec![vec![C::zero(); deg + 1]; deg + 1],
        }
    }

    pub fn one(deg: usize) -> Self {
        let mut p = Self::zero(deg);
        p.c[0][0] = C::one();
        p
    }

    #[cfg(test)]
    pub fn deg(&self) -> usize {
        self.deg
    }

    #[cfg(test)]
    pub fn get(&self, i: usize, j: usize) -> &C {
        &self.c[i][j]
    }

    /// Coefficient lookup that errors outside the trusted degree range.
    pub fn get_checked(&self, i: usize, j: usize) -> Result<&C> {
        if i + j > self.deg {
            return Err(Error::Truncation(format!(
                "bivariate coefficient ({i},{j}) beyond trusted total degree {}",
                self.deg
            )));
        }
        Ok(&self.c[i][j])
    }

    #[cfg(test)]
    pub fn set(&mut self, i: usize, j: usize, v: C) {
        debug_assert!(i + j <= self.deg);
        self.c[i][j] = v;
    }

    pub fn add_assign_at(&mut self, i: usize, j: usize, v: &C) {
        debug_assert!(i + j <= self.deg);
        self.c[i][j] = self.c[i][j].add_ref(v);
    }

    #[cfg(test)]
    pub fn mul(&self, other: &Self) -> Self {
        let deg = self.deg.min(other.deg);
        let mut out = Self::zero(deg);
        for i1 in 0..=self.deg.min(deg) {
            for j1 in 0..=(self.deg.min(deg) - i1) {
                let a = &self.c[i1][j1];
                if a.is_zero() {
                    continue;
                }
                for i2 in 0..=(deg - i1 - j1).min(other.deg) {
                    for j2 in 0..=((deg - i1 - j1 - i2).min(other.deg.saturating_sub(i2))) {
                        let b = &other.c[i2][j2];
                        if b.is_zero() {
                            continue;
                        }
                        let prod = a.mul_ref(b);
                        out.add_assign_at(i1 + i2, j1 + j2, &prod);
                    }
                }
            }
        }
        out
    }

    /// Partial derivative in the first variable.
    pub fn dx(&self) -> Self {
        let deg = self.deg.saturating_sub(1);
        let mut out = Self::zero(deg);
        for i in 1..=self.deg {
            for j in 0..=(self.deg - i) {
                if i - 1 + j > deg {
                    continue;
                }
                out.c[i - 1][j] = self.c[i][j].mul_ref(&C::from_int(i as i64));
            }
        }
        out
    }

    /// Long division by a series with nonzero constant term, processed by
    /// ascending total degree so each coefficient is finalized before use.
    pub fn div(&self, den: &Self) -> Result<Self> {
        let d00_inv = den.c[0][0].inv().ok_or_else(|| {
            Error::Singularity("bivariate division by a series vanishing at the origin".into())
        })?;
        let deg = self.deg.min(den.deg);
        let mut q = Self::zero(deg);
        for d in 0..=deg {
            for i in 0..=d {
                let j = d - i;
                let mut acc = self.c[i][j].clone();
                for p in 0..=i {
                    for r in 0..=j {
                        if p == 0 && r == 0 {
                            continue;
                        }
                        let dv = &den.c[p][r];
                        if dv.is_zero() {
                            continue;
                        }
                        acc = acc.sub_ref(&dv.mul_ref(&q.c[i - p][j - r]));
                    }
                }
                q.c[i][j] = acc.mul_ref(&d00_inv);
            }
        }
        Ok(q)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{cint, CExact};

    fn p(deg: usize, terms: &[(usize, usize, i64)]) -> Bivariate<CExact> {
        let mut b = Bivariate::zero(deg);
        for &(i, j, v) in terms {
            b.set(i, j, cint(v, 0));
        }
        b
    }

    #[test]
    fn product_truncates_at_total_degree() {
        // (1 + XY)(1 - XY) = 1 - X^2 Y^2; at degree cap 4 the X^2Y^2 term
        // survives, at cap 3 it does not.
        let a = p(4, &[(0, 0, 1), (1, 1, 1)]);
        let b = p(4, &[(0, 0, 1), (1, 1, -1)]);
        let prod = a.mul(&b);
        assert_eq!(prod.get(0, 0), &cint(1, 0));
        assert_eq!(prod.get(1, 1), &cint(0, 0));
        assert_eq!(prod.get(2, 2), &cint(-1, 0));
        let short = p(3, &[(0, 0, 1), (1, 1, 1)]).mul(&p(3, &[(0, 0, 1), (1, 1, -1)]));
        assert_eq!(short.deg(), 3);
        assert!(short.get_checked(2, 2).is_err());
    }

    #[test]
    fn division_round_trips() {
        let num = p(6, &[(0, 0, 3), (1, 0, 2), (2, 1, -5), (1, 3, 7)]);
        let den = p(6, &[(0, 0, 1), (1, 1, -2), (0, 2, 1)]);
        let q = num.div(&den).unwrap();
        let back = q.mul(&den);
        for i in 0..=6usize {
            for j in 0..=(6 - i) {
                assert_eq!(back.get(i, j), num.get(i, j), "({i},{j})");
            }
        }
    }

    #[test]
    fn division_needs_unit_constant() {
        let num = p(3, &[(0, 0, 1)]);
        let den = p(3, &[(1, 0, 1)]);
        assert!(matches!(num.div(&den), Err(Error::Singularity(_))));
    }

    #[test]
    fn derivative_shifts_x_index() {
        let f = p(4, &[(2, 1, 3), (1, 0, 5)]);
        let d = f.dx();
        assert_eq!(d.get(1, 1), &cint(6, 0));
        assert_eq!(d.get(0, 0), &cint(5, 0));
    }
}
