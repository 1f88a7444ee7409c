//! Truncated Laurent series with provable-window bookkeeping.
//!
//! A series stores coefficients for a contiguous exponent window plus two
//! flags saying whether the exponents below and above the window are exactly
//! zero or merely unknown.  Taylor jets of normalized disk maps know nothing
//! above their truncation order; expansions at infinity know nothing below
//! theirs; polynomial literals are exact on both sides.  Every operation
//! returns the largest window that is provably correct from its inputs and
//! fails with `Truncation` when that window is empty.  Arithmetic never
//! zero-pads a guess.

use crate::error::{Error, Result};
use crate::num::{C64, CExact, CoeffField, Mode, Value};
use num::bigint::BigInt;
use num::rational::BigRational;

const INF: i128 = i128::MAX / 4;
const NEG_INF: i128 = i128::MIN / 4;

/// Mode-agnostic payload; all algorithms are written once over `CoeffField`.
#[derive(Clone, Debug, PartialEq)]
struct Raw<C> {
    lo: i64,
    c: Vec<C>,
    /// Exponents below `lo` are exactly zero (true) or unknown (false).
    zb: bool,
    /// Exponents above the window are exactly zero (true) or unknown (false).
    za: bool,
}

impl<C: CoeffField> Raw<C> {
    fn hi(&self) -> i64 {
        self.lo + self.c.len() as i64 - 1
    }

    fn zero() -> Self {
        Raw { lo: 0, c: vec![C::zero()], zb: true, za: true }
    }

    fn is_zero_poly(&self) -> bool {
        self.zb && self.za && self.c.iter().all(C::is_zero)
    }

    /// Canonical form: strip known-zero edges where the flags let us.
    fn trim(mut self) -> Self {
        while self.c.len() > 1 && self.zb && self.c.first().is_some_and(C::is_zero) {
            self.c.remove(0);
            self.lo += 1;
        }
        while self.c.len() > 1 && self.za && self.c.last().is_some_and(C::is_zero) {
            self.c.pop();
        }
        if self.c.len() == 1 && self.zb && self.za && self.c[0].is_zero() {
            self.lo = 0;
        }
        self
    }

    fn get(&self, k: i64) -> Option<&C> {
        if k < self.lo || k > self.hi() {
            None
        } else {
            Some(&self.c[(k - self.lo) as usize])
        }
    }

    /// Possibly-nonzero exponent range, with sentinels for open sides.
    fn pn(&self) -> (i128, i128) {
        (
            if self.zb { self.lo as i128 } else { NEG_INF },
            if self.za { self.hi() as i128 } else { INF },
        )
    }

    /// Determined exponent range, with sentinels for open sides.
    fn det(&self) -> (i128, i128) {
        (
            if self.zb { NEG_INF } else { self.lo as i128 },
            if self.za { INF } else { self.hi() as i128 },
        )
    }

    fn add_signed(&self, other: &Self, negate: bool) -> Result<Self> {
        let (da_lo, da_hi) = self.det();
        let (db_lo, db_hi) = other.det();
        let wl = da_lo.max(db_lo).max(self.lo.min(other.lo) as i128);
        let wh = da_hi.min(db_hi).min(self.hi().max(other.hi()) as i128);
        if wl > wh {
            return Err(Error::Truncation(
                "sum retains no provably correct terms".into(),
            ));
        }
        let (wl, wh) = (wl as i64, wh as i64);
        let mut c = Vec::with_capacity((wh - wl + 1) as usize);
        for k in wl..=wh {
            let a = self.get(k).cloned().unwrap_or_else(C::zero);
            let b = other.get(k).cloned().unwrap_or_else(C::zero);
            c.push(if negate { a.sub_ref(&b) } else { a.add_ref(&b) });
        }
        Ok(Raw { lo: wl, c, zb: self.zb && other.zb, za: self.za && other.za }.trim())
    }

    fn mul(&self, other: &Self) -> Result<Self> {
        if self.is_zero_poly() || other.is_zero_poly() {
            return Ok(Raw::zero());
        }
        let (pa_lo, pa_hi) = self.pn();
        let (pb_lo, pb_hi) = other.pn();
        let mut u = INF;
        let mut l = NEG_INF;
        if !self.za {
            u = u.min(self.hi() as i128 + pb_lo);
        }
        if !other.za {
            u = u.min(other.hi() as i128 + pa_lo);
        }
        if !self.zb {
            l = l.max(self.lo as i128 + pb_hi);
        }
        if !other.zb {
            l = l.max(other.lo as i128 + pa_hi);
        }
        let wl = l.max(pa_lo + pb_lo);
        let wh = u.min(pa_hi + pb_hi);
        if wl > wh {
            return Err(Error::Truncation(
                "product retains no provably correct terms".into(),
            ));
        }
        let (wl, wh) = (wl as i64, wh as i64);
        let mut c = vec![C::zero(); (wh - wl + 1) as usize];
        for (i, ai) in self.c.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            let base = self.lo + i as i64;
            for (j, bj) in other.c.iter().enumerate() {
                let k = base + other.lo + j as i64;
                if k < wl || k > wh || bj.is_zero() {
                    continue;
                }
                let idx = (k - wl) as usize;
                c[idx] = c[idx].add_ref(&ai.mul_ref(bj));
            }
        }
        Ok(Raw { lo: wl, c, zb: self.zb && other.zb, za: self.za && other.za }.trim())
    }

    fn neg(&self) -> Self {
        Raw {
            lo: self.lo,
            c: self.c.iter().map(|x| -x.clone()).collect(),
            zb: self.zb,
            za: self.za,
        }
    }

    fn scale(&self, s: &C) -> Self {
        Raw {
            lo: self.lo,
            c: self.c.iter().map(|x| x.mul_ref(s)).collect(),
            zb: self.zb,
            za: self.za,
        }
        .trim()
    }

    fn shift(&self, k: i64) -> Self {
        let mut r = self.clone();
        r.lo += k;
        r
    }

    fn reflect(&self) -> Self {
        let mut c = self.c.clone();
        c.reverse();
        Raw { lo: -self.hi(), c, zb: self.za, za: self.zb }
    }

    fn derivative(&self) -> Result<Self> {
        let mut c = Vec::with_capacity(self.c.len());
        for (i, x) in self.c.iter().enumerate() {
            let k = self.lo + i as i64;
            c.push(x.mul_ref(&C::from_int(k)));
        }
        Ok(Raw { lo: self.lo - 1, c, zb: self.zb, za: self.za }.trim())
    }

    fn antiderivative(&self) -> Result<Self> {
        if let Some(v) = self.get(-1) {
            if !v.is_zero() {
                return Err(Error::Singularity(
                    "antiderivative of a z^-1 term is not a Laurent series".into(),
                ));
            }
        }
        let mut c = Vec::with_capacity(self.c.len());
        for (i, x) in self.c.iter().enumerate() {
            let k = self.lo + i as i64;
            if k == -1 {
                c.push(C::zero());
            } else {
                c.push(x.mul_ref(&C::from_ratio(1, k + 1)));
            }
        }
        Ok(Raw { lo: self.lo + 1, c, zb: self.zb, za: self.za }.trim())
    }

    /// Multiplicative inverse for a series whose lower side is exact and
    /// whose leading coefficient is nonzero.  The result keeps the input's
    /// stored order; its upper tail is always unknown.
    fn inverse_up(&self) -> Result<Self> {
        let lead = self.c.first().expect("nonempty");
        let lead_inv = lead.inv().ok_or_else(|| {
            Error::Singularity("inverse of a series with zero leading coefficient".into())
        })?;
        let n = self.c.len();
        // w_j = c_{v+j} / c_v for the factorization c_v z^v (1 + w).
        let w: Vec<C> = self.c[1..].iter().map(|x| x.mul_ref(&lead_inv)).collect();
        let mut u = vec![C::zero(); n];
        u[0] = C::one();
        for k in 1..n {
            let mut acc = C::zero();
            for j in 1..=k {
                if !w[j - 1].is_zero() {
                    acc = acc.add_ref(&w[j - 1].mul_ref(&u[k - j]));
                }
            }
            u[k] = -acc;
        }
        let c = u.iter().map(|x| x.mul_ref(&lead_inv)).collect();
        Ok(Raw { lo: -self.lo, c, zb: true, za: false }.trim())
    }

    fn inverse(&self) -> Result<Self> {
        if self.zb {
            self.inverse_up()
        } else if self.za {
            Ok(self.reflect().inverse_up()?.reflect())
        } else {
            Err(Error::Truncation(
                "inverse undefined when both tails are unknown".into(),
            ))
        }
    }

    fn log(&self) -> Result<Self>
    where
        C: LnChecked,
    {
        if !self.zb || self.lo != 0 {
            return Err(Error::Normalization(
                "log needs an expansion with constant term 1".into(),
            ));
        }
        let c0 = &self.c[0];
        let log_c0 = if *c0 == C::one() {
            C::zero()
        } else {
            let a = c0.approx();
            if (a - num::complex::Complex::new(1.0, 0.0)).norm() > 1e-12 {
                return Err(Error::Normalization(
                    "log needs constant term 1 (within 1e-12 in approx mode)".into(),
                ));
            }
            match c0.clone().ln_checked() {
                Some(v) => v,
                None => {
                    return Err(Error::Normalization(
                        "log needs constant term exactly 1 in exact mode".into(),
                    ))
                }
            }
        };
        if self.c.len() == 1 {
            return Ok(Raw { lo: 0, c: vec![log_c0], zb: true, za: self.za }.trim());
        }
        let quot = self.derivative()?.mul(&self.inverse_up()?)?;
        let mut out = quot.antiderivative()?;
        // Re-attach the constant term without disturbing the window top.
        if out.lo > 0 {
            let mut c = vec![C::zero(); out.lo as usize];
            c[0] = log_c0;
            c.extend(out.c);
            out = Raw { lo: 0, c, zb: true, za: out.za };
        } else {
            out.c[(-out.lo) as usize] = out.c[(-out.lo) as usize].add_ref(&log_c0);
        }
        Ok(out.trim())
    }

    fn exp(&self) -> Result<Self> {
        if !self.zb {
            return Err(Error::Normalization(
                "exp needs an expansion with vanishing constant term".into(),
            ));
        }
        if self.is_zero_poly() {
            let mut r = Raw::zero();
            r.c[0] = C::one();
            return Ok(r);
        }
        if self.lo < 1 {
            if let Some(v) = self.get(0) {
                if !v.is_zero() {
                    return Err(Error::Normalization(
                        "exp needs an expansion with vanishing constant term".into(),
                    ));
                }
            }
            if self.lo < 0 {
                return Err(Error::Normalization(
                    "exp of a series with negative exponents is not supported".into(),
                ));
            }
        }
        let n = self.hi() as usize;
        let mut v = vec![C::zero(); n + 1];
        for (i, x) in self.c.iter().enumerate() {
            v[self.lo as usize + i] = x.clone();
        }
        let mut w = vec![C::zero(); n + 1];
        w[0] = C::one();
        for k in 1..=n {
            let mut acc = C::zero();
            for j in 1..=k {
                if !v[j].is_zero() {
                    let term = v[j].mul_ref(&w[k - j]).mul_ref(&C::from_int(j as i64));
                    acc = acc.add_ref(&term);
                }
            }
            w[k] = acc.mul_ref(&C::from_ratio(1, k as i64));
        }
        Ok(Raw { lo: 0, c: w, zb: true, za: false }.trim())
    }

    fn substitute_power(&self, m: u32) -> Result<Self> {
        if m == 0 {
            return Err(Error::Domain("substitute_power needs m >= 1".into()));
        }
        let m = m as i64;
        if m == 1 {
            return Ok(self.clone());
        }
        // Non-multiple exponents between stretched window points are known
        // zero, so the window extends to the neighbouring multiples.
        let lo = if self.zb { m * self.lo } else { m * (self.lo - 1) + 1 };
        let hi = if self.za { m * self.hi() } else { m * (self.hi() + 1) - 1 };
        let mut c = vec![C::zero(); (hi - lo + 1) as usize];
        for (i, x) in self.c.iter().enumerate() {
            let k = m * (self.lo + i as i64);
            c[(k - lo) as usize] = x.clone();
        }
        Ok(Raw { lo, c, zb: self.zb, za: self.za }.trim())
    }

    fn restrict_top(&self, top: i64) -> Result<Self> {
        if top >= self.hi() {
            return Ok(self.clone());
        }
        if top < self.lo {
            return Err(Error::Truncation("restriction retains no terms".into()));
        }
        let keep = (top - self.lo + 1) as usize;
        Ok(Raw { lo: self.lo, c: self.c[..keep].to_vec(), zb: self.zb, za: false }.trim())
    }

    fn compose(&self, g: &Self) -> Result<Self> {
        if !self.zb {
            return Err(Error::Truncation(
                "composition outer series must have an exact lower tail".into(),
            ));
        }
        if self.lo < 0 {
            return Err(Error::Domain(
                "composition outer series must have no negative exponents".into(),
            ));
        }
        if !g.zb || g.lo < 1 {
            return Err(Error::Normalization(
                "composition inner series must vanish at the origin".into(),
            ));
        }
        let mut acc = Raw {
            lo: 0,
            c: vec![self.c.last().expect("nonempty").clone()],
            zb: true,
            za: true,
        };
        for i in (0..self.c.len() - 1).rev() {
            let term = Raw {
                lo: 0,
                c: vec![self.c[i].clone()],
                zb: true,
                za: true,
            };
            acc = acc.mul(g)?.add_signed(&term, false)?;
        }
        for _ in 0..self.lo {
            acc = acc.mul(g)?;
        }
        if !self.za {
            // The outer tail starts at exponent hi+1 and contributes from
            // (hi+1) * val(g) upward.
            let cap = (self.hi() + 1) * g.lo - 1;
            acc = acc.restrict_top(cap)?;
        }
        Ok(acc.trim())
    }

    fn eval(&self, z: &C) -> Result<C> {
        let mut acc = C::zero();
        if self.lo < 0 && z.is_zero() {
            for (i, x) in self.c.iter().enumerate() {
                if self.lo + (i as i64) < 0 && !x.is_zero() {
                    return Err(Error::Singularity(
                        "evaluation at 0 with negative-exponent terms".into(),
                    ));
                }
            }
        }
        // Positive-exponent part via Horner from the top.
        let hi = self.hi();
        if hi >= 0 {
            let start = self.lo.max(0);
            for k in (start..=hi).rev() {
                acc = acc.mul_ref(z);
                if let Some(v) = self.get(k) {
                    acc = acc.add_ref(v);
                }
            }
            if start > 0 {
                let mut zp = C::one();
                for _ in 0..start {
                    zp = zp.mul_ref(z);
                }
                acc = acc.mul_ref(&zp);
            }
        }
        if self.lo < 0 {
            let zi = z.inv().ok_or_else(|| {
                Error::Singularity("evaluation at 0 with negative-exponent terms".into())
            })?;
            let top_neg = (-1).min(hi);
            let mut neg = C::zero();
            for k in self.lo..=top_neg {
                // Horner in 1/z from the deepest exponent.
                if k == self.lo {
                    neg = self.get(k).cloned().unwrap_or_else(C::zero);
                } else {
                    neg = neg.mul_ref(&zi).add_ref(&self.get(k).cloned().unwrap_or_else(C::zero));
                }
            }
            let mut zp = C::one();
            for _ in 0..(-top_neg) {
                zp = zp.mul_ref(&zi);
            }
            acc = acc.add_ref(&neg.mul_ref(&zp));
        }
        Ok(acc)
    }
}

/// Natural-log hook used by `log` for a non-unit constant term.
trait LnChecked: Sized {
    fn ln_checked(self) -> Option<Self>;
}

impl LnChecked for CExact {
    fn ln_checked(self) -> Option<Self> {
        None
    }
}

impl LnChecked for C64 {
    fn ln_checked(self) -> Option<Self> {
        Some(self.ln())
    }
}

/// A truncated Laurent series tagged with its arithmetic mode.
#[derive(Clone, Debug, PartialEq)]
pub enum TruncatedSeries {
    Exact(SeriesRepr<CExact>),
    Approx(SeriesRepr<C64>),
}

/// Public view of the raw payload; fields are read-only outside this module.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesRepr<C> {
    raw: Raw<C>,
}

use TruncatedSeries as TS;

macro_rules! unop {
    ($name:ident) => {
        pub fn $name(&self) -> Result<TS> {
            match self {
                TS::Exact(r) => r.raw.$name().map(|raw| TS::Exact(SeriesRepr { raw })),
                TS::Approx(r) => r.raw.$name().map(|raw| TS::Approx(SeriesRepr { raw })),
            }
        }
    };
}

macro_rules! unop_infallible {
    ($name:ident $(, $arg:ident : $ty:ty)*) => {
        pub fn $name(&self $(, $arg: $ty)*) -> TS {
            match self {
                TS::Exact(r) => TS::Exact(SeriesRepr { raw: r.raw.$name($($arg),*) }),
                TS::Approx(r) => TS::Approx(SeriesRepr { raw: r.raw.$name($($arg),*) }),
            }
        }
    };
}

impl TruncatedSeries {
    pub fn mode(&self) -> Mode {
        match self {
            TS::Exact(_) => Mode::Exact,
            TS::Approx(_) => Mode::Approx,
        }
    }

    /// Lowest stored exponent.
    pub fn valuation(&self) -> i64 {
        match self {
            TS::Exact(r) => r.raw.lo,
            TS::Approx(r) => r.raw.lo,
        }
    }

    /// Retained terms beyond the valuation.
    pub fn order(&self) -> usize {
        match self {
            TS::Exact(r) => r.raw.c.len() - 1,
            TS::Approx(r) => r.raw.c.len() - 1,
        }
    }

    /// Highest stored exponent.
    pub fn top(&self) -> i64 {
        self.valuation() + self.order() as i64
    }

    /// Exponents below the window are exactly zero.
    pub fn zero_below(&self) -> bool {
        match self {
            TS::Exact(r) => r.raw.zb,
            TS::Approx(r) => r.raw.zb,
        }
    }

    /// Exponents above the window are exactly zero.
    pub fn zero_above(&self) -> bool {
        match self {
            TS::Exact(r) => r.raw.za,
            TS::Approx(r) => r.raw.za,
        }
    }

    pub fn is_exact_polynomial(&self) -> bool {
        self.zero_below() && self.zero_above()
    }

    pub fn zero(mode: Mode) -> TS {
        match mode {
            Mode::Exact => TS::Exact(SeriesRepr { raw: Raw::zero() }),
            Mode::Approx => TS::Approx(SeriesRepr { raw: Raw::zero() }),
        }
    }

    pub fn one(mode: Mode) -> TS {
        TS::constant(Value::from_big_rational(&BigRational::from_integer(BigInt::from(1)), mode))
    }

    pub fn constant(v: Value) -> TS {
        TS::polynomial(v.mode(), &[(0, v.clone())]).expect("single-mode constant")
    }

    pub fn monomial(k: i64, v: Value) -> TS {
        TS::polynomial(v.mode(), &[(k, v.clone())]).expect("single-mode monomial")
    }

    /// z as an exact or approx polynomial.
    pub fn z(mode: Mode) -> TS {
        TS::monomial(1, Value::from_big_rational(&BigRational::from_integer(BigInt::from(1)), mode))
    }

    /// Dense polynomial from sparse terms; both tails exact.
    pub fn polynomial(mode: Mode, terms: &[(i64, Value)]) -> Result<TS> {
        fn build<C: CoeffField>(terms: Vec<(i64, C)>) -> Raw<C> {
            if terms.is_empty() {
                return Raw::zero();
            }
            let lo = terms.iter().map(|(k, _)| *k).min().unwrap();
            let hi = terms.iter().map(|(k, _)| *k).max().unwrap();
            let mut c = vec![C::zero(); (hi - lo + 1) as usize];
            for (k, v) in terms {
                let idx = (k - lo) as usize;
                c[idx] = c[idx].add_ref(&v);
            }
            Raw { lo, c, zb: true, za: true }.trim()
        }
        match mode {
            Mode::Exact => {
                let mut t = Vec::with_capacity(terms.len());
                for (k, v) in terms {
                    match v {
                        Value::Exact(c) => t.push((*k, c.clone())),
                        Value::Approx(_) => {
                            return Err(Error::Mode("approx coefficient in exact polynomial".into()))
                        }
                    }
                }
                Ok(TS::Exact(SeriesRepr { raw: build(t) }))
            }
            Mode::Approx => {
                let mut t = Vec::with_capacity(terms.len());
                for (k, v) in terms {
                    t.push((*k, v.approx()));
                }
                Ok(TS::Approx(SeriesRepr { raw: build(t) }))
            }
        }
    }

    /// Mark the upper tail unknown: the series becomes a Taylor-side jet.
    pub fn as_up_jet(&self) -> TS {
        let mut r = self.clone();
        match &mut r {
            TS::Exact(x) => x.raw.za = false,
            TS::Approx(x) => x.raw.za = false,
        }
        r
    }

    /// Mark the lower tail unknown: the series becomes an infinity-side jet.
    pub fn as_down_jet(&self) -> TS {
        let mut r = self.clone();
        match &mut r {
            TS::Exact(x) => x.raw.zb = false,
            TS::Approx(x) => x.raw.zb = false,
        }
        r
    }

    /// Pad the window upward with exact zeros; needs an exact upper tail.
    pub fn extend_top_to(&self, top: i64) -> Result<TS> {
        if !self.zero_above() {
            return Err(Error::Truncation(
                "cannot extend past an unknown upper tail".into(),
            ));
        }
        let mut r = self.clone();
        let need = top - self.top();
        if need > 0 {
            match &mut r {
                TS::Exact(x) => x.raw.c.extend(std::iter::repeat_with(<CExact as CoeffField>::zero).take(need as usize)),
                TS::Approx(x) => x.raw.c.extend(std::iter::repeat_with(<C64 as CoeffField>::zero).take(need as usize)),
            }
        }
        Ok(r)
    }

    /// Pad the window downward with exact zeros; needs an exact lower tail.
    pub fn extend_bottom_to(&self, bottom: i64) -> Result<TS> {
        if !self.zero_below() {
            return Err(Error::Truncation(
                "cannot extend past an unknown lower tail".into(),
            ));
        }
        let mut r = self.clone();
        let need = self.valuation() - bottom;
        if need > 0 {
            match &mut r {
                TS::Exact(x) => {
                    let mut c = vec![<CExact as CoeffField>::zero(); need as usize];
                    c.extend(x.raw.c.drain(..));
                    x.raw.c = c;
                    x.raw.lo = bottom;
                }
                TS::Approx(x) => {
                    let mut c = vec![<C64 as CoeffField>::zero(); need as usize];
                    c.extend(x.raw.c.drain(..));
                    x.raw.c = c;
                    x.raw.lo = bottom;
                }
            }
        }
        Ok(r)
    }

    /// Coefficient at exponent `k`; zero outside an exact tail, error where
    /// the truncation window gives no information.
    pub fn coeff(&self, k: i64) -> Result<Value> {
        let in_window = k >= self.valuation() && k <= self.top();
        if !in_window {
            let known_zero = (k < self.valuation() && self.zero_below())
                || (k > self.top() && self.zero_above());
            if known_zero {
                return Ok(Value::zero(self.mode()));
            }
            return Err(Error::Truncation(format!(
                "coefficient at exponent {k} lies outside the window [{}, {}]",
                self.valuation(),
                self.top()
            )));
        }
        Ok(match self {
            TS::Exact(r) => Value::Exact(r.raw.get(k).cloned().unwrap()),
            TS::Approx(r) => Value::Approx(*r.raw.get(k).unwrap()),
        })
    }

    /// Stored coefficients with exponents, in increasing exponent order.
    pub fn iter_known(&self) -> Vec<(i64, Value)> {
        let lo = self.valuation();
        match self {
            TS::Exact(r) => r
                .raw
                .c
                .iter()
                .enumerate()
                .map(|(i, c)| (lo + i as i64, Value::Exact(c.clone())))
                .collect(),
            TS::Approx(r) => r
                .raw
                .c
                .iter()
                .enumerate()
                .map(|(i, c)| (lo + i as i64, Value::Approx(*c)))
                .collect(),
        }
    }

    pub fn to_approx(&self) -> TS {
        match self {
            TS::Approx(_) => self.clone(),
            TS::Exact(r) => TS::Approx(SeriesRepr {
                raw: Raw {
                    lo: r.raw.lo,
                    c: r.raw.c.iter().map(CoeffField::approx).collect(),
                    zb: r.raw.zb,
                    za: r.raw.za,
                },
            }),
        }
    }

    fn binop(
        &self,
        other: &TS,
        f: impl FnOnce(&Raw<CExact>, &Raw<CExact>) -> Result<Raw<CExact>>,
        g: impl FnOnce(&Raw<C64>, &Raw<C64>) -> Result<Raw<C64>>,
        op: &str,
    ) -> Result<TS> {
        match (self, other) {
            (TS::Exact(a), TS::Exact(b)) => f(&a.raw, &b.raw).map(|raw| TS::Exact(SeriesRepr { raw })),
            (TS::Approx(a), TS::Approx(b)) => g(&a.raw, &b.raw).map(|raw| TS::Approx(SeriesRepr { raw })),
            _ => Err(Error::Mode(format!(
                "{op} mixes {} and {} series",
                self.mode(),
                other.mode()
            ))),
        }
    }

    pub fn add(&self, other: &TS) -> Result<TS> {
        self.binop(other, |a, b| a.add_signed(b, false), |a, b| a.add_signed(b, false), "add")
    }

    pub fn sub(&self, other: &TS) -> Result<TS> {
        self.binop(other, |a, b| a.add_signed(b, true), |a, b| a.add_signed(b, true), "sub")
    }

    pub fn mul(&self, other: &TS) -> Result<TS> {
        self.binop(other, Raw::mul, Raw::mul, "mul")
    }

    pub fn div(&self, other: &TS) -> Result<TS> {
        let inv = other.inverse()?;
        self.mul(&inv)
    }

    pub fn compose(&self, inner: &TS) -> Result<TS> {
        self.binop(inner, Raw::compose, Raw::compose, "compose")
    }

    pub fn neg(&self) -> TS {
        match self {
            TS::Exact(r) => TS::Exact(SeriesRepr { raw: r.raw.neg() }),
            TS::Approx(r) => TS::Approx(SeriesRepr { raw: r.raw.neg() }),
        }
    }

    pub fn scale(&self, s: &Value) -> Result<TS> {
        match (self, s) {
            (TS::Exact(r), Value::Exact(v)) => Ok(TS::Exact(SeriesRepr { raw: r.raw.scale(v) })),
            (TS::Approx(r), Value::Approx(v)) => Ok(TS::Approx(SeriesRepr { raw: r.raw.scale(v) })),
            _ => Err(Error::Mode(format!(
                "scale mixes {} series and {} scalar",
                self.mode(),
                s.mode()
            ))),
        }
    }

    pub fn scale_rational(&self, s: &BigRational) -> TS {
        self.scale(&Value::from_big_rational(s, self.mode()))
            .expect("same-mode scalar")
    }

    unop_infallible!(shift, k: i64);
    unop_infallible!(reflect);
    unop!(derivative);
    unop!(antiderivative);
    unop!(inverse);
    unop!(log);
    unop!(exp);

    pub fn substitute_power(&self, m: u32) -> Result<TS> {
        match self {
            TS::Exact(r) => r.raw.substitute_power(m).map(|raw| TS::Exact(SeriesRepr { raw })),
            TS::Approx(r) => r.raw.substitute_power(m).map(|raw| TS::Approx(SeriesRepr { raw })),
        }
    }

    pub fn restrict_top(&self, top: i64) -> Result<TS> {
        match self {
            TS::Exact(r) => r.raw.restrict_top(top).map(|raw| TS::Exact(SeriesRepr { raw })),
            TS::Approx(r) => r.raw.restrict_top(top).map(|raw| TS::Approx(SeriesRepr { raw })),
        }
    }

    /// Principal branch power with rational exponent, via exp(e log u).
    /// Needs constant term 1.
    pub fn pow_rational(&self, e: &BigRational) -> Result<TS> {
        let lg = self.log()?;
        let scaled = lg.scale_rational(e);
        scaled.exp()
    }

    /// Truncated evaluation over the stored window; the caller accounts for
    /// tails where the flags leave them unknown.
    pub fn eval(&self, z: &Value) -> Result<Value> {
        match (self, z) {
            (TS::Exact(r), Value::Exact(v)) => r.raw.eval(v).map(Value::Exact),
            (TS::Approx(r), Value::Approx(v)) => r.raw.eval(v).map(Value::Approx),
            _ => Err(Error::Mode(format!(
                "eval mixes {} series and {} point",
                self.mode(),
                z.mode()
            ))),
        }
    }

    /// Largest coefficient distance over the common stored window.
    pub fn max_abs_diff(&self, other: &TS) -> f64 {
        let lo = self.valuation().max(other.valuation());
        let hi = self.top().min(other.top());
        let mut m: f64 = 0.0;
        for k in lo..=hi {
            let a = self.coeff(k).map(|v| v.approx()).unwrap_or_default();
            let b = other.coeff(k).map(|v| v.approx()).unwrap_or_default();
            m = m.max((a - b).norm());
        }
        m
    }
}
