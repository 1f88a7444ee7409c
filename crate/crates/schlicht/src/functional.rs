//! Coefficient functionals as symbolic polynomials.
//!
//! A functional is a polynomial with rational coefficients in the Taylor
//! coefficients a_2, a_3, ... of a disk map.  Specs carry the claimed sharp
//! bound; evaluation produces a mode-tagged value; the exterior rewrite
//! substitutes each a_n by its polynomial in the inversion coefficients
//! b_0, b_1, ... generated from the product identity F(z) f(1/z) = 1.

use crate::error::{Error, Result};
use crate::maps::SClassMap;
use crate::num::{parse_rational, rat_int, Mode, Value};
use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt::Write as _;

/// Monomial: variable index -> positive power.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct Mono(BTreeMap<u32, u32>);

impl Mono {
    pub fn var(idx: u32) -> Mono {
        let mut m = BTreeMap::new();
        m.insert(idx, 1);
        Mono(m)
    }

    pub fn mul(&self, other: &Mono) -> Mono {
        let mut m = self.0.clone();
        for (&v, &p) in &other.0 {
            *m.entry(v).or_insert(0) += p;
        }
        Mono(m)
    }

    pub fn powers(&self) -> &BTreeMap<u32, u32> {
        &self.0
    }

    fn weight(&self, w: impl Fn(u32) -> i64) -> i64 {
        self.0.iter().map(|(&v, &p)| w(v) * p as i64).sum()
    }
}

/// Polynomial with rational coefficients over indexed variables.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct CoeffPoly {
    terms: BTreeMap<Mono, BigRational>,
}

impl CoeffPoly {
    pub fn zero() -> CoeffPoly {
        CoeffPoly::default()
    }

    pub fn constant(r: BigRational) -> CoeffPoly {
        let mut p = CoeffPoly::zero();
        if !r.is_zero() {
            p.terms.insert(Mono::default(), r);
        }
        p
    }

    pub fn one() -> CoeffPoly {
        CoeffPoly::constant(BigRational::one())
    }

    pub fn var(idx: u32) -> CoeffPoly {
        let mut p = CoeffPoly::zero();
        p.terms.insert(Mono::var(idx), BigRational::one());
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &BigRational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Mono) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    fn insert(&mut self, m: Mono, r: BigRational) {
        if r.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(r);
            }
            Entry::Occupied(mut e) => {
                let s = e.get() + r;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, other: &CoeffPoly) -> CoeffPoly {
        let mut out = self.clone();
        for (m, r) in &other.terms {
            out.insert(m.clone(), r.clone());
        }
        out
    }

    pub fn sub(&self, other: &CoeffPoly) -> CoeffPoly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> CoeffPoly {
        CoeffPoly {
            terms: self.terms.iter().map(|(m, r)| (m.clone(), -r.clone())).collect(),
        }
    }

    pub fn scale(&self, r: &BigRational) -> CoeffPoly {
        if r.is_zero() {
            return CoeffPoly::zero();
        }
        CoeffPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * r)).collect(),
        }
    }

    pub fn mul(&self, other: &CoeffPoly) -> CoeffPoly {
        let mut out = CoeffPoly::zero();
        for (m1, r1) in &self.terms {
            for (m2, r2) in &other.terms {
                out.insert(m1.mul(m2), r1 * r2);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> CoeffPoly {
        let mut out = CoeffPoly::one();
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// Replace each variable by a polynomial.
    pub fn substitute(&self, image: impl Fn(u32) -> CoeffPoly) -> CoeffPoly {
        let mut out = CoeffPoly::zero();
        for (m, r) in &self.terms {
            let mut term = CoeffPoly::constant(r.clone());
            for (&v, &p) in m.powers() {
                term = term.mul(&image(v).pow(p));
            }
            out = out.add(&term);
        }
        out
    }

    /// Evaluate with a per-variable getter; all values share `mode`.
    pub fn eval(&self, mode: Mode, getter: impl Fn(u32) -> Result<Value>) -> Result<Value> {
        let mut acc = Value::zero(mode);
        for (m, r) in &self.terms {
            let mut term = Value::from_big_rational(r, mode);
            for (&v, &p) in m.powers() {
                term = term.try_mul(&getter(v)?.pow_u(p as u64))?;
            }
            acc = acc.try_add(&term)?;
        }
        Ok(acc)
    }

    /// Common weight of all monomials under the variable weighting, if any.
    pub fn weight(&self, w: impl Fn(u32) -> i64) -> Option<i64> {
        let mut iter = self.terms.keys().map(|m| m.weight(&w));
        let first = iter.next()?;
        iter.all(|x| x == first).then_some(first)
    }

    /// Highest variable index appearing.
    pub fn max_var(&self) -> Option<u32> {
        self.terms
            .keys()
            .filter_map(|m| m.powers().keys().next_back().copied())
            .max()
    }

    /// All coefficients nonnegative.
    pub fn nonnegative(&self) -> bool {
        self.terms.values().all(|r| !r.is_negative())
    }

    /// Render with a variable prefix, highest variables first.
    pub fn render(&self, prefix: &str) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut ordered: Vec<(&Mono, &BigRational)> = self.terms.iter().collect();
        let key = |m: &Mono| -> Vec<(u32, u32)> {
            m.powers().iter().rev().map(|(&v, &p)| (v, p)).collect()
        };
        ordered.sort_by(|a, b| key(b.0).cmp(&key(a.0)));
        let mut parts: Vec<(String, bool)> = Vec::new();
        for (m, r) in ordered {
            let mut s = String::new();
            let abs = r.abs();
            if m.powers().is_empty() {
                write!(s, "{abs}").unwrap();
            } else {
                if !abs.is_one() {
                    write!(s, "{abs}*").unwrap();
                }
                let vars: Vec<String> = m
                    .powers()
                    .iter()
                    .rev()
                    .map(|(&v, &p)| {
                        if p == 1 {
                            format!("{prefix}{v}")
                        } else {
                            format!("{prefix}{v}^{p}")
                        }
                    })
                    .collect();
                write!(s, "{}", vars.join("*")).unwrap();
            }
            parts.push((s, r.is_negative()));
        }
        let mut out = String::new();
        for (i, (s, neg)) in parts.iter().enumerate() {
            if i == 0 {
                if *neg {
                    out.push('-');
                }
            } else {
                out.push_str(if *neg { " - " } else { " + " });
            }
            out.push_str(s);
        }
        out
    }
}

/// One serialized polynomial term: rational coefficient, variable powers.
/// Powers are keyed by the coefficient index as a decimal string, since
/// JSON object keys are strings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermSpec {
    /// Rational literal: "3", "-1/2", "0.25".
    pub coeff: String,
    /// Variable index (as a string) -> power.
    pub powers: BTreeMap<String, u32>,
}

impl TermSpec {
    pub fn new(coeff: &str, powers: &[(u32, u32)]) -> TermSpec {
        TermSpec {
            coeff: coeff.into(),
            powers: powers.iter().map(|&(v, p)| (v.to_string(), p)).collect(),
        }
    }

    pub fn to_poly(&self) -> Result<CoeffPoly> {
        let r = parse_rational(&self.coeff)?;
        let mut powers = BTreeMap::new();
        for (k, &p) in &self.powers {
            let v: u32 = k
                .parse()
                .map_err(|_| Error::Spec(format!("bad coefficient index {k:?}")))?;
            if p > 0 {
                powers.insert(v, p);
            }
        }
        let mut out = CoeffPoly::zero();
        out.insert(Mono(powers), r);
        Ok(out)
    }
}

fn terms_to_poly(terms: &[TermSpec]) -> Result<CoeffPoly> {
    let mut p = CoeffPoly::zero();
    for t in terms {
        p = p.add(&t.to_poly()?);
    }
    Ok(p)
}

/// A named functional with its claimed sharp bound.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FunctionalSpec {
    /// a_n^2 - a_{2n-1}, bounded by (n-1)^2, n >= 2.
    Zalcman { n: u32 },
    /// a_n^2 - a_{2n-1} + P(a_3, ..., a_{2n-2}) for a homogeneous P with
    /// nonnegative coefficients; bounded by (n-1)^2 + P at the cusp map.
    ZalcmanPerturbed { n: u32, perturbation: Vec<TermSpec> },
    /// a_n, bounded by n.
    Bieberbach { n: u32 },
    /// a_n^p - a_2^{p(n-1)}, bounded by 2^{p(n-1)} - n^p, n >= 4.
    PowerGap { n: u32, p: u32 },
    /// a_{n+1}^p - a_2^p a_n^p, bounded by 2^p n^p - (n+1)^p, n >= 3.
    NeighborGap { n: u32, p: u32 },
    /// Free polynomial with an explicit claimed bound.
    Custom {
        name: String,
        terms: Vec<TermSpec>,
        bound: String,
    },
}

/// Variable weight under the rotation a_n -> e^{i(n-1)t} a_n.
pub fn disk_weight(n: u32) -> i64 {
    n as i64 - 1
}

/// Variable weight under the rotation b_n -> e^{i(n+1)t} b_n.
pub fn exterior_weight(n: u32) -> i64 {
    n as i64 + 1
}

impl FunctionalSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            FunctionalSpec::Zalcman { n } => {
                if *n < 2 {
                    return Err(Error::Spec("difference functional needs n >= 2".into()));
                }
            }
            FunctionalSpec::ZalcmanPerturbed { n, perturbation } => {
                if *n < 2 {
                    return Err(Error::Spec("difference functional needs n >= 2".into()));
                }
                let p = terms_to_poly(perturbation)?;
                if !p.nonnegative() {
                    return Err(Error::Spec(
                        "perturbation must have nonnegative coefficients".into(),
                    ));
                }
                if !p.is_zero() {
                    for (m, _) in p.terms() {
                        for (&v, _) in m.powers() {
                            if v < 3 || v > 2 * n - 2 {
                                return Err(Error::Spec(format!(
                                    "perturbation variable a_{v} outside a_3..a_{}",
                                    2 * n - 2
                                )));
                            }
                        }
                    }
                    if p.weight(disk_weight) != Some(2 * *n as i64 - 2) {
                        return Err(Error::Spec(format!(
                            "perturbation must be homogeneous of weight {}",
                            2 * n - 2
                        )));
                    }
                }
            }
            FunctionalSpec::Bieberbach { n } => {
                if *n < 2 {
                    return Err(Error::Spec("coefficient bound needs n >= 2".into()));
                }
            }
            FunctionalSpec::PowerGap { n, p } => {
                if *n < 4 || *p < 1 {
                    return Err(Error::Spec("power gap needs n >= 4, p >= 1".into()));
                }
            }
            FunctionalSpec::NeighborGap { n, p } => {
                if *n < 3 || *p < 1 {
                    return Err(Error::Spec("neighbor gap needs n >= 3, p >= 1".into()));
                }
            }
            FunctionalSpec::Custom { terms, bound, name } => {
                if name.is_empty() {
                    return Err(Error::Spec("custom functional needs a name".into()));
                }
                terms_to_poly(terms)?;
                let b = parse_rational(bound)?;
                if b.is_negative() {
                    return Err(Error::Spec("claimed bound must be nonnegative".into()));
                }
            }
        }
        Ok(())
    }

    pub fn name(&self) -> String {
        match self {
            FunctionalSpec::Zalcman { n } => format!("zalcman[n={n}]"),
            FunctionalSpec::ZalcmanPerturbed { n, .. } => format!("zalcman_perturbed[n={n}]"),
            FunctionalSpec::Bieberbach { n } => format!("bieberbach[n={n}]"),
            FunctionalSpec::PowerGap { n, p } => format!("power_gap[n={n},p={p}]"),
            FunctionalSpec::NeighborGap { n, p } => format!("neighbor_gap[n={n},p={p}]"),
            FunctionalSpec::Custom { name, .. } => format!("custom[{name}]"),
        }
    }

    /// Expand into a polynomial in the disk coefficients a_2, a_3, ...
    /// (a_1 = 1 never appears).
    pub fn poly(&self) -> Result<CoeffPoly> {
        self.validate()?;
        Ok(match self {
            FunctionalSpec::Zalcman { n } => zalcman_poly(*n),
            FunctionalSpec::ZalcmanPerturbed { n, perturbation } => {
                zalcman_poly(*n).add(&terms_to_poly(perturbation)?)
            }
            FunctionalSpec::Bieberbach { n } => CoeffPoly::var(*n),
            FunctionalSpec::PowerGap { n, p } => CoeffPoly::var(*n)
                .pow(*p)
                .sub(&CoeffPoly::var(2).pow(*p * (*n - 1))),
            FunctionalSpec::NeighborGap { n, p } => CoeffPoly::var(*n + 1)
                .pow(*p)
                .sub(&CoeffPoly::var(2).pow(*p).mul(&CoeffPoly::var(*n).pow(*p))),
            FunctionalSpec::Custom { terms, .. } => terms_to_poly(terms)?,
        })
    }

    /// The claimed sharp bound, exactly.
    pub fn bound_exact(&self) -> Result<BigRational> {
        self.validate()?;
        let int = |x: i64| BigInt::from(x);
        Ok(match self {
            FunctionalSpec::Zalcman { n } => {
                BigRational::from_integer(int(*n as i64 - 1).pow(2))
            }
            FunctionalSpec::ZalcmanPerturbed { n, perturbation } => {
                // (n-1)^2 plus the perturbation at the cusp map a_j = j.
                let base = BigRational::from_integer(int(*n as i64 - 1).pow(2));
                let p = terms_to_poly(perturbation)?;
                let at_cusp = p.eval(Mode::Exact, |v| {
                    Ok(Value::from_big_rational(&rat_int(v as i64), Mode::Exact))
                })?;
                match at_cusp {
                    Value::Exact(c) => base + c.re,
                    Value::Approx(_) => unreachable!("exact eval"),
                }
            }
            FunctionalSpec::Bieberbach { n } => BigRational::from_integer(int(*n as i64)),
            FunctionalSpec::PowerGap { n, p } => {
                let two = int(2).pow(*p * (*n - 1));
                let np = int(*n as i64).pow(*p);
                BigRational::from_integer(two - np)
            }
            FunctionalSpec::NeighborGap { n, p } => {
                let a = int(2).pow(*p) * int(*n as i64).pow(*p);
                let b = int(*n as i64 + 1).pow(*p);
                BigRational::from_integer(a - b)
            }
            FunctionalSpec::Custom { bound, .. } => parse_rational(bound)?,
        })
    }

    pub fn bound_f64(&self) -> Result<f64> {
        Ok(crate::num::rat_to_f64(&self.bound_exact()?))
    }

    /// Highest coefficient index the functional reads.
    pub fn min_order(&self) -> Result<u32> {
        Ok(self.poly()?.max_var().unwrap_or(2))
    }

    /// Evaluate on a disk map.  Fails with Truncation if the map's window
    /// does not determine every coefficient the functional reads.
    pub fn eval_on(&self, map: &SClassMap) -> Result<Value> {
        let p = self.poly()?;
        p.eval(map.mode(), |v| map.a(v))
    }

    /// Rewrite in the inversion coefficients b_0, b_1, ...
    pub fn sigma_representation(&self) -> Result<CoeffPoly> {
        let p = self.poly()?;
        let top = p.max_var().unwrap_or(2);
        let table = a_in_b_table(top);
        Ok(p.substitute(|v| table[v as usize].clone()))
    }
}

fn zalcman_poly(n: u32) -> CoeffPoly {
    CoeffPoly::var(n).pow(2).sub(&CoeffPoly::var(2 * n - 1))
}

/// Polynomials expressing a_k in b_0..b_{k-2}, for k = 0..=upto (entries 0
/// and 1 are the constants 0 and 1).  Generated from the coefficient
/// recurrence of F(z) f(1/z) = 1:
/// a_{n+2} = -b_n - sum_{j=1}^{n} b_{n-j} a_{j+1}.
pub fn a_in_b_table(upto: u32) -> Vec<CoeffPoly> {
    let mut table: Vec<CoeffPoly> = vec![CoeffPoly::zero(), CoeffPoly::one()];
    for k in 2..=upto.max(1) {
        let n = k - 2;
        let mut acc = CoeffPoly::var(n).neg();
        for j in 1..=n {
            let prod = CoeffPoly::var(n - j).mul(&table[(j + 1) as usize]);
            acc = acc.sub(&prod);
        }
        table.push(acc);
    }
    table
}
