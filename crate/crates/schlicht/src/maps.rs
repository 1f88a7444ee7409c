//! Normalized univalent map classes and the inversion bridge between them.
//!
//! A disk map is f(z) = z + a2 z^2 + ... univalent on |z| < 1; an exterior
//! map is F(z) = z + b0 + b1/z + ... univalent on |z| > 1.  Inverting a disk
//! map across the unit circle, F(z) = 1/f(1/z), lands in the exterior class
//! and omits 0; the two coefficient streams determine each other through the
//! product identity F(z) * f(1/z) = 1.

use crate::error::{Error, Result};
use crate::num::{Mode, Value};
use crate::series::TruncatedSeries;

/// How univalence of a stored map is justified.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    /// Closed-form family member, univalent for every admissible parameter.
    Extremal,
    /// Image of a provably univalent map under a class-preserving transform.
    Transform,
    /// Numerical evolution; univalent modulo integration error.
    LoewnerApprox,
    /// No univalence claim; plumbing and counterexample fixtures.
    Synthetic,
}

fn is_unit(v: &Value) -> bool {
    match v {
        Value::Exact(c) => {
            use crate::num::CoeffField;
            *c == <crate::num::CExact as CoeffField>::one()
        }
        Value::Approx(c) => c.re == 1.0 && c.im == 0.0,
    }
}

/// Normalized map of the unit disk: valuation 1, unit leading coefficient,
/// exact lower tail.
#[derive(Clone, Debug)]
pub struct SClassMap {
    f: TruncatedSeries,
    label: String,
    provenance: Provenance,
}

impl SClassMap {
    pub fn new(f: TruncatedSeries, label: impl Into<String>, provenance: Provenance) -> Result<Self> {
        if !f.zero_below() || f.valuation() != 1 {
            return Err(Error::Normalization(
                "disk map must vanish to first order at the origin".into(),
            ));
        }
        if !is_unit(&f.coeff(1)?) {
            return Err(Error::Normalization(
                "disk map must have derivative 1 at the origin".into(),
            ));
        }
        Ok(SClassMap { f, label: label.into(), provenance })
    }

    pub fn series(&self) -> &TruncatedSeries {
        &self.f
    }

    pub fn mode(&self) -> Mode {
        self.f.mode()
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    /// Taylor coefficient a_n, n >= 1.
    pub fn a(&self, n: u32) -> Result<Value> {
        if n < 1 {
            return Err(Error::Domain("coefficient index must be >= 1".into()));
        }
        self.f.coeff(n as i64)
    }

    /// Highest coefficient index the truncation still determines.
    pub fn order(&self) -> i64 {
        self.f.top()
    }

    /// Truncated evaluation; pair with `tail_bound` for a rigorous enclosure.
    pub fn eval_truncated(&self, z: &Value) -> Result<Value> {
        self.f.eval(z)
    }

    /// Bound on the dropped tail at |z| = r, from the class coefficient
    /// bound |a_n| <= n.  Infinite at the boundary, zero for exact tails.
    pub fn tail_bound(&self, r: f64) -> f64 {
        if self.f.zero_above() {
            return 0.0;
        }
        if !(0.0..1.0).contains(&r) {
            return f64::INFINITY;
        }
        let m = (self.order() + 1) as f64;
        r.powf(m) * (m - (m - 1.0) * r) / ((1.0 - r) * (1.0 - r))
    }
}

/// Normalized map of the disk exterior: top exponent 1, unit leading
/// coefficient, exact upper tail.  b_n is the coefficient of z^{-n}.
#[derive(Clone, Debug)]
pub struct SigmaClassMap {
    f: TruncatedSeries,
    omits_zero: bool,
    label: String,
    provenance: Provenance,
}

impl SigmaClassMap {
    pub fn new(
        f: TruncatedSeries,
        omits_zero: bool,
        label: impl Into<String>,
        provenance: Provenance,
    ) -> Result<Self> {
        if !f.zero_above() || f.top() != 1 {
            return Err(Error::Normalization(
                "exterior map must behave like z at infinity".into(),
            ));
        }
        if !is_unit(&f.coeff(1)?) {
            return Err(Error::Normalization(
                "exterior map must have unit leading coefficient".into(),
            ));
        }
        Ok(SigmaClassMap { f, omits_zero, label: label.into(), provenance })
    }

    pub fn series(&self) -> &TruncatedSeries {
        &self.f
    }

    pub fn mode(&self) -> Mode {
        self.f.mode()
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn omits_zero(&self) -> bool {
        self.omits_zero
    }

    /// Laurent coefficient b_n, n >= 0.
    pub fn b(&self, n: u32) -> Result<Value> {
        self.f.coeff(-(n as i64))
    }

    /// Highest b index the truncation still determines.
    pub fn depth(&self) -> i64 {
        -self.f.valuation()
    }

    pub fn eval_truncated(&self, z: &Value) -> Result<Value> {
        self.f.eval(z)
    }

    /// Bound on the dropped tail at |z| = r > 1, from the area-theorem
    /// consequence |b_n| <= 1.
    pub fn tail_bound(&self, r: f64) -> f64 {
        if self.f.zero_below() {
            return 0.0;
        }
        if r <= 1.0 {
            return f64::INFINITY;
        }
        let m = self.depth() as f64;
        1.0 / (r.powf(m) * (r - 1.0))
    }
}

/// Exterior map F(z) = 1/f(1/z) of a disk map.  Always omits zero.  A
/// truncation of f at order N determines b_0 through b_{N-2}.
pub fn circle_inversion(map: &SClassMap) -> Result<SigmaClassMap> {
    let reflected = map.series().reflect();
    let inv = reflected.inverse()?;
    SigmaClassMap::new(
        inv,
        true,
        format!("inv({})", map.label()),
        Provenance::Transform,
    )
}

/// Disk map f(z) = 1/F(1/z) of an exterior map that omits zero.  A
/// truncation of F at depth M determines a_2 through a_{M+2}.
pub fn disk_map_from_inversion(map: &SigmaClassMap) -> Result<SClassMap> {
    if !map.omits_zero() {
        return Err(Error::Domain(
            "inversion back to the disk needs an exterior map omitting 0".into(),
        ));
    }
    let reflected = map.series().reflect();
    let inv = reflected.inverse()?;
    SClassMap::new(
        inv,
        format!("inv({})", map.label()),
        Provenance::Transform,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{cexact, cint, rat, rat_int, CExact, Mode, Value};
    use crate::series::TruncatedSeries as TS;

    fn exact_s_map(coeffs: &[(i64, CExact)], order: i64) -> SClassMap {
        let mut terms: Vec<(i64, Value)> = vec![(1, Value::Exact(cint(1, 0)))];
        for (k, c) in coeffs {
            terms.push((*k, Value::Exact(c.clone())));
        }
        let f = TS::polynomial(Mode::Exact, &terms)
            .unwrap()
            .extend_top_to(order)
            .unwrap()
            .as_up_jet();
        SClassMap::new(f, "test", Provenance::Synthetic).unwrap()
    }

    #[test]
    fn validation_rejects_bad_normalization() {
        let no_unit = TS::polynomial(
            Mode::Exact,
            &[(1, Value::Exact(cint(2, 0)))],
        )
        .unwrap()
        .as_up_jet();
        assert!(SClassMap::new(no_unit, "x", Provenance::Synthetic).is_err());
        let shifted = TS::polynomial(
            Mode::Exact,
            &[(0, Value::Exact(cint(1, 0))), (1, Value::Exact(cint(1, 0)))],
        )
        .unwrap()
        .as_up_jet();
        assert!(SClassMap::new(shifted, "x", Provenance::Synthetic).is_err());
    }

    #[test]
    fn inversion_satisfies_product_identity() {
        // F(z) * f(1/z) = 1 holds exactly over the provable window.
        let f = exact_s_map(
            &[
                (2, cexact(rat(1, 2), rat(1, 3))),
                (3, cexact(rat(-2, 7), rat_int(1))),
                (4, cint(0, -2)),
            ],
            9,
        );
        let big_f = circle_inversion(&f).unwrap();
        let prod = big_f
            .series()
            .mul(&f.series().reflect())
            .unwrap();
        for k in prod.valuation()..=prod.top() {
            let expect = if k == 0 { cint(1, 0) } else { cint(0, 0) };
            assert_eq!(prod.coeff(k).unwrap(), Value::Exact(expect), "exponent {k}");
        }
    }

    #[test]
    fn inversion_round_trips_to_the_same_disk_map() {
        let f = exact_s_map(
            &[
                (2, cexact(rat(1, 3), rat(1, 5))),
                (5, cexact(rat_int(2), rat(-1, 2))),
            ],
            8,
        );
        let back = disk_map_from_inversion(&circle_inversion(&f).unwrap()).unwrap();
        assert_eq!(back.series().top(), 8);
        for n in 1..=8 {
            assert_eq!(back.a(n).unwrap(), f.a(n).unwrap(), "a_{n}");
        }
    }

    #[test]
    fn inversion_coefficient_expansions() {
        // The first exterior coefficients in terms of disk coefficients, and
        // back, on a generic rational map.  Frozen expansions, checked with
        // zero residual.
        let a2 = cexact(rat(1, 2), rat(1, 3));
        let a3 = cexact(rat(-1, 4), rat(2, 5));
        let a4 = cexact(rat(3, 7), rat_int(-1));
        let a5 = cexact(rat(1, 6), rat(1, 7));
        let a6 = cexact(rat(-2, 9), rat(1, 11));
        let a7 = cexact(rat(5, 13), rat(-3, 8));
        let f = exact_s_map(
            &[
                (2, a2.clone()),
                (3, a3.clone()),
                (4, a4.clone()),
                (5, a5.clone()),
                (6, a6.clone()),
                (7, a7.clone()),
            ],
            7,
        );
        let big_f = circle_inversion(&f).unwrap();
        assert_eq!(big_f.depth(), 5);
        let b: Vec<CExact> = (0..=5)
            .map(|n| match big_f.b(n).unwrap() {
                Value::Exact(c) => c,
                _ => unreachable!(),
            })
            .collect();
        use crate::num::CoeffField;
        let m = |x: &CExact, y: &CExact| x.mul_ref(y);
        let b0 = &b[0];
        let b02 = m(b0, b0);
        let b03 = m(&b02, b0);
        let b04 = m(&b03, b0);
        let b05 = m(&b04, b0);
        let b06 = m(&b05, b0);
        // a2 = -b0
        assert_eq!(a2, -b0.clone());
        // a3 = -b1 + b0^2
        assert_eq!(a3, -b[1].clone() + b02.clone());
        // a4 = -b2 + 2 b1 b0 - b0^3
        assert_eq!(
            a4,
            -b[2].clone() + m(&b[1], b0).mul_ref(&cint(2, 0)) - b03.clone()
        );
        // a5 = -b3 + 2 b2 b0 + b1^2 - 3 b1 b0^2 + b0^4
        assert_eq!(
            a5,
            -b[3].clone() + m(&b[2], b0).mul_ref(&cint(2, 0)) + m(&b[1], &b[1])
                - m(&b[1], &b02).mul_ref(&cint(3, 0))
                + b04.clone()
        );
        // a6 = -b4 + 2 b3 b0 + 2 b2 b1 - 3 b2 b0^2 - 3 b1^2 b0 + 4 b1 b0^3 - b0^5
        assert_eq!(
            a6,
            -b[4].clone() + m(&b[3], b0).mul_ref(&cint(2, 0)) + m(&b[2], &b[1]).mul_ref(&cint(2, 0))
                - m(&b[2], &b02).mul_ref(&cint(3, 0))
                - m(&m(&b[1], &b[1]), b0).mul_ref(&cint(3, 0))
                + m(&b[1], &b03).mul_ref(&cint(4, 0))
                - b05.clone()
        );
        // a7 = b0^6 - 5 b1 b0^4 - b1^3 + 4 b2 b0^3 + b2^2 + 6 b1^2 b0^2
        //      - 3 b3 b0^2 + 2 b1 b3 - 6 b1 b2 b0 + 2 b4 b0 - b5
        let b12 = m(&b[1], &b[1]);
        let rhs = b06
            - m(&b[1], &b04).mul_ref(&cint(5, 0))
            - m(&b12, &b[1])
            + m(&b[2], &b03).mul_ref(&cint(4, 0))
            + m(&b[2], &b[2])
            + m(&b12, &b02).mul_ref(&cint(6, 0))
            - m(&b[3], &b02).mul_ref(&cint(3, 0))
            + m(&b[1], &b[3]).mul_ref(&cint(2, 0))
            - m(&m(&b[1], &b[2]), b0).mul_ref(&cint(6, 0))
            + m(&b[4], b0).mul_ref(&cint(2, 0))
            - b[5].clone();
        assert_eq!(a7, rhs, "seventh coefficient expansion");
    }

    #[test]
    fn inversion_back_needs_omitted_zero() {
        let f = exact_s_map(&[(2, cint(1, 0))], 6);
        let big_f = circle_inversion(&f).unwrap();
        let no_omit = SigmaClassMap::new(
            big_f.series().clone(),
            false,
            "x",
            Provenance::Synthetic,
        )
        .unwrap();
        assert!(disk_map_from_inversion(&no_omit).is_err());
    }

    #[test]
    fn disk_tail_bound_encloses_true_value() {
        // Cusp map z/(1-z)^2 at z = 3/10: series truncation error is inside
        // the coefficient-bound tail.
        let n = 12;
        let terms: Vec<(i64, Value)> = (1..=n)
            .map(|k| (k, Value::Exact(cint(k, 0))))
            .collect();
        let f = SClassMap::new(
            TS::polynomial(Mode::Exact, &terms).unwrap().as_up_jet(),
            "cusp",
            Provenance::Extremal,
        )
        .unwrap();
        let z = Value::Exact(cexact(rat(3, 10), rat_int(0)));
        let approx = f.eval_truncated(&z).unwrap().approx().re;
        let truth = 0.3 / (0.7f64 * 0.7);
        let tail = f.tail_bound(0.3);
        assert!(tail.is_finite() && tail > 0.0);
        // This map saturates the coefficient bound, so the dropped tail
        // equals the bound up to rounding.
        let err = (truth - approx).abs();
        assert!((err - tail).abs() <= 1e-9 * tail, "err {err} vs tail {tail}");
    }

    #[test]
    fn exterior_tail_bound_behaves() {
        let f = exact_s_map(&[(2, cint(1, 0))], 10);
        let big_f = circle_inversion(&f).unwrap();
        assert!(big_f.tail_bound(1.0).is_infinite());
        let t2 = big_f.tail_bound(2.0);
        let t3 = big_f.tail_bound(3.0);
        assert!(t2 > t3 && t3 > 0.0);
        // Exact-tail exterior maps report zero tail.
        let exact_f = SigmaClassMap::new(
            TS::polynomial(
                Mode::Exact,
                &[(1, Value::Exact(cint(1, 0))), (-1, Value::Exact(cint(0, 1)))],
            )
            .unwrap(),
            false,
            "slit",
            Provenance::Extremal,
        )
        .unwrap();
        assert_eq!(exact_f.tail_bound(1.5), 0.0);
    }
}
