//! Scalar types: exact Gaussian rationals, double-precision complex numbers,
//! and the mode tag that keeps the two from mixing silently.

use crate::error::{Error, Result};
use num::bigint::BigInt;
use num::complex::Complex;
use num::rational::BigRational;
use num::{Integer, One, Signed, ToPrimitive, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Exact complex scalar: rational real and imaginary parts.
pub type CExact = Complex<BigRational>;
/// Approximate complex scalar.
pub type C64 = Complex<f64>;

/// Arithmetic mode carried by every series and map.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Mode {
    /// Gaussian-rational arithmetic; identities hold with zero residual.
    #[serde(rename = "exact")]
    Exact,
    /// f64 complex arithmetic for grid scans.
    #[serde(rename = "approx")]
    Approx,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Exact => write!(f, "exact"),
            Mode::Approx => write!(f, "approx"),
        }
    }
}

/// Shorthand rational constructor.
pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Rational from an integer.
pub fn rat_int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Exact complex from rational parts.
pub fn cexact(re: BigRational, im: BigRational) -> CExact {
    Complex::new(re, im)
}

/// Exact complex from small integers.
pub fn cint(re: i64, im: i64) -> CExact {
    Complex::new(rat_int(re), rat_int(im))
}

/// Rational to f64 with a bit-shift fallback for very large parts.
pub fn rat_to_f64(r: &BigRational) -> f64 {
    if let Some(v) = r.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    let nbits = r.numer().bits() as i64;
    let dbits = r.denom().bits() as i64;
    let shift = (nbits.max(dbits) - 512).max(0) as u64;
    let n = (r.numer() >> shift).to_f64().unwrap_or(f64::NAN);
    let d = (r.denom() >> shift).to_f64().unwrap_or(f64::NAN);
    n / d
}

/// Exact complex to f64 complex.
pub fn cexact_to_c64(c: &CExact) -> C64 {
    Complex::new(rat_to_f64(&c.re), rat_to_f64(&c.im))
}

/// Parse a rational from "p/q", an integer, or a finite decimal string.
/// Decimals convert exactly (digits over a power of ten), never through f64.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::Spec("empty rational literal".into()));
    }
    if let Some((n, d)) = s.split_once('/') {
        let num: BigInt = n
            .trim()
            .parse()
            .map_err(|_| Error::Spec(format!("bad numerator in {s:?}")))?;
        let den: BigInt = d
            .trim()
            .parse()
            .map_err(|_| Error::Spec(format!("bad denominator in {s:?}")))?;
        if den.is_zero() {
            return Err(Error::Spec(format!("zero denominator in {s:?}")));
        }
        return Ok(BigRational::new(num, den));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        let neg = whole.trim_start().starts_with('-');
        let w: BigInt = if whole.is_empty() || whole == "-" {
            BigInt::zero()
        } else {
            whole
                .parse()
                .map_err(|_| Error::Spec(format!("bad decimal in {s:?}")))?
        };
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::Spec(format!("bad decimal in {s:?}")));
        }
        let f: BigInt = frac
            .parse()
            .map_err(|_| Error::Spec(format!("bad decimal in {s:?}")))?;
        let scale = BigInt::from(10u32).pow(frac.len() as u32);
        let mag = BigRational::new(w.abs() * &scale + f, scale);
        return Ok(if neg { -mag } else { mag });
    }
    let n: BigInt = s
        .parse()
        .map_err(|_| Error::Spec(format!("bad rational literal {s:?}")))?;
    Ok(BigRational::from_integer(n))
}

/// Coefficient field abstraction so the series engine is written once.
///
/// Implemented by `CExact` and `C64`; everything else dispatches through
/// the mode-tagged wrappers.
pub trait CoeffField:
    Clone
    + PartialEq
    + fmt::Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn from_big_rational(r: &BigRational) -> Self;
    /// Multiplicative inverse; None for zero.
    fn inv(&self) -> Option<Self>;
    fn mul_ref(&self, other: &Self) -> Self;
    fn add_ref(&self, other: &Self) -> Self;
    fn sub_ref(&self, other: &Self) -> Self;
    fn conj(&self) -> Self;
    fn approx(&self) -> C64;
    fn from_ratio(n: i64, d: i64) -> Self {
        Self::from_big_rational(&rat(n, d))
    }
    fn from_int(n: i64) -> Self {
        Self::from_big_rational(&rat_int(n))
    }
    fn abs(&self) -> f64 {
        self.approx().norm()
    }
}

impl CoeffField for CExact {
    fn zero() -> Self {
        Complex::new(BigRational::zero(), BigRational::zero())
    }
    fn one() -> Self {
        Complex::new(BigRational::one(), BigRational::zero())
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn from_big_rational(r: &BigRational) -> Self {
        Complex::new(r.clone(), BigRational::zero())
    }
    fn inv(&self) -> Option<Self> {
        if CoeffField::is_zero(self) {
            return None;
        }
        let n = &self.re * &self.re + &self.im * &self.im;
        Some(Complex::new(&self.re / &n, -&self.im / &n))
    }
    fn mul_ref(&self, other: &Self) -> Self {
        Complex::new(
            &self.re * &other.re - &self.im * &other.im,
            &self.re * &other.im + &self.im * &other.re,
        )
    }
    fn add_ref(&self, other: &Self) -> Self {
        Complex::new(&self.re + &other.re, &self.im + &other.im)
    }
    fn sub_ref(&self, other: &Self) -> Self {
        Complex::new(&self.re - &other.re, &self.im - &other.im)
    }
    fn conj(&self) -> Self {
        Complex::new(self.re.clone(), -self.im.clone())
    }
    fn approx(&self) -> C64 {
        cexact_to_c64(self)
    }
}

impl CoeffField for C64 {
    fn zero() -> Self {
        Complex::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex::new(1.0, 0.0)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn from_big_rational(r: &BigRational) -> Self {
        Complex::new(rat_to_f64(r), 0.0)
    }
    fn inv(&self) -> Option<Self> {
        if CoeffField::is_zero(self) {
            return None;
        }
        Some(Complex::new(1.0, 0.0) / self)
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self - other
    }
    fn conj(&self) -> Self {
        Complex::new(self.re, -self.im)
    }
    fn approx(&self) -> C64 {
        *self
    }
}

/// A single mode-tagged scalar crossing the public API.
#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Exact(CExact),
    Approx(C64),
}

impl Value {
    pub fn mode(&self) -> Mode {
        match self {
            Value::Exact(_) => Mode::Exact,
            Value::Approx(_) => Mode::Approx,
        }
    }

    pub fn approx(&self) -> C64 {
        match self {
            Value::Exact(c) => cexact_to_c64(c),
            Value::Approx(c) => *c,
        }
    }

    pub fn abs(&self) -> f64 {
        self.approx().norm()
    }

    /// |value|^2 as an exact rational, when the value is exact.
    pub fn abs_sq_exact(&self) -> Option<BigRational> {
        match self {
            Value::Exact(c) => Some(&c.re * &c.re + &c.im * &c.im),
            Value::Approx(_) => None,
        }
    }

    pub fn zero(mode: Mode) -> Value {
        match mode {
            Mode::Exact => Value::Exact(CoeffField::zero()),
            Mode::Approx => Value::Approx(CoeffField::zero()),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Value::Exact(c) => CoeffField::is_zero(c),
            Value::Approx(c) => CoeffField::is_zero(c),
        }
    }

    pub fn from_big_rational(r: &BigRational, mode: Mode) -> Value {
        match mode {
            Mode::Exact => Value::Exact(CoeffField::from_big_rational(r)),
            Mode::Approx => Value::Approx(CoeffField::from_big_rational(r)),
        }
    }

    fn binop(
        &self,
        other: &Value,
        ex: impl Fn(&CExact, &CExact) -> CExact,
        ap: impl Fn(&C64, &C64) -> C64,
        op: &str,
    ) -> Result<Value> {
        match (self, other) {
            (Value::Exact(a), Value::Exact(b)) => Ok(Value::Exact(ex(a, b))),
            (Value::Approx(a), Value::Approx(b)) => Ok(Value::Approx(ap(a, b))),
            _ => Err(Error::Mode(format!(
                "{op} mixes {} and {} operands",
                self.mode(),
                other.mode()
            ))),
        }
    }

    pub fn try_add(&self, other: &Value) -> Result<Value> {
        self.binop(other, CoeffField::add_ref, CoeffField::add_ref, "add")
    }

    pub fn try_sub(&self, other: &Value) -> Result<Value> {
        self.binop(other, CoeffField::sub_ref, CoeffField::sub_ref, "sub")
    }

    pub fn try_mul(&self, other: &Value) -> Result<Value> {
        self.binop(other, CoeffField::mul_ref, CoeffField::mul_ref, "mul")
    }

    /// Nonnegative integer power by repeated multiplication.
    pub fn pow_u(&self, k: u64) -> Value {
        let mut acc = match self {
            Value::Exact(_) => Value::Exact(CoeffField::one()),
            Value::Approx(_) => Value::Approx(CoeffField::one()),
        };
        for _ in 0..k {
            acc = acc.try_mul(self).expect("same mode");
        }
        acc
    }

    pub fn conj(&self) -> Value {
        match self {
            Value::Exact(c) => Value::Exact(CoeffField::conj(c)),
            Value::Approx(c) => Value::Approx(CoeffField::conj(c)),
        }
    }

    pub fn neg(&self) -> Value {
        match self {
            Value::Exact(c) => Value::Exact(-c.clone()),
            Value::Approx(c) => Value::Approx(-c),
        }
    }

    /// Render real and imaginary parts as exact strings (exact mode only).
    pub fn exact_strings(&self) -> Option<(String, String)> {
        match self {
            Value::Exact(c) => Some((c.re.to_string(), c.im.to_string())),
            Value::Approx(_) => None,
        }
    }
}

/// An angle, kept as an exact fraction of a full turn when possible so that
/// quarter-turn unit values stay Gaussian-rational.
#[derive(Clone, Debug, PartialEq)]
pub enum Angle {
    /// Fraction of a full turn (1 turn = 2 pi radians).
    Turns(BigRational),
    /// Free radian value; never exactly representable.
    Radians(f64),
}

impl Angle {
    pub fn from_turns(t: BigRational) -> Angle {
        Angle::Turns(t)
    }

    pub fn turns_fraction(num: i64, den: i64) -> Angle {
        Angle::Turns(rat(num, den))
    }

    pub fn zero() -> Angle {
        Angle::Turns(BigRational::zero())
    }

    pub fn radians(&self) -> f64 {
        match self {
            Angle::Turns(t) => 2.0 * std::f64::consts::PI * rat_to_f64(t),
            Angle::Radians(r) => *r,
        }
    }

    /// e^{i theta} as a Gaussian rational, available exactly at quarter turns.
    pub fn exact_unit(&self) -> Option<CExact> {
        let Angle::Turns(t) = self else { return None };
        let q = t * rat_int(4);
        if !q.is_integer() {
            return None;
        }
        let k = q.to_integer().mod_floor(&BigInt::from(4));
        let k = k.to_i64().unwrap_or(0);
        Some(match k {
            0 => cint(1, 0),
            1 => cint(0, 1),
            2 => cint(-1, 0),
            _ => cint(0, -1),
        })
    }

    /// e^{i theta} in f64.
    pub fn approx_unit(&self) -> C64 {
        if let Some(u) = self.exact_unit() {
            return cexact_to_c64(&u);
        }
        let r = self.radians();
        Complex::new(r.cos(), r.sin())
    }

    /// Unit value in the requested mode; exact mode demands representability.
    pub fn unit(&self, mode: Mode) -> Result<Value> {
        match mode {
            Mode::Exact => self.exact_unit().map(Value::Exact).ok_or_else(|| {
                Error::Domain(format!("angle {self} has no exact unit value"))
            }),
            Mode::Approx => Ok(Value::Approx(self.approx_unit())),
        }
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Angle::Turns(t) => write!(f, "{t}turn"),
            Angle::Radians(r) => write!(f, "{r}rad"),
        }
    }
}

/// A complex grid parameter in polar form: rational modulus, angle phase.
#[derive(Clone, Debug, PartialEq)]
pub struct PolarParam {
    pub modulus: BigRational,
    pub phase: Angle,
}

impl PolarParam {
    pub fn new(modulus: BigRational, phase: Angle) -> Result<PolarParam> {
        if modulus.is_negative() {
            return Err(Error::Domain("negative modulus".into()));
        }
        Ok(PolarParam { modulus, phase })
    }

    pub fn real(modulus: BigRational) -> PolarParam {
        PolarParam {
            modulus,
            phase: Angle::zero(),
        }
    }

    pub fn is_exactly_representable(&self) -> bool {
        self.phase.exact_unit().is_some()
    }

    pub fn value(&self, mode: Mode) -> Result<Value> {
        let unit = self.phase.unit(mode)?;
        let m = Value::from_big_rational(&self.modulus, mode);
        m.try_mul(&unit)
    }

    pub fn abs(&self) -> f64 {
        rat_to_f64(&self.modulus)
    }

    pub fn id(&self) -> String {
        format!("{}@{}", self.modulus, self.phase)
    }
}
