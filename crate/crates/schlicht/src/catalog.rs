//! Parametric families of provably univalent maps.
//!
//! Every constructor documents why its output is univalent for the admitted
//! parameter range and rejects parameters outside it.  Closed-form families
//! are built from binomial recurrences, so exact mode stays exact and high
//! truncation orders stay cheap.

use crate::error::{Error, Result};
use crate::maps::{Provenance, SClassMap, SigmaClassMap};
use crate::num::{rat_int, Angle, Mode, PolarParam, Value};
use crate::series::TruncatedSeries;
use num::rational::BigRational;
use num::{One, Signed};

fn check_unit_modulus(v: &Value, what: &str) -> Result<()> {
    let within = match v.abs_sq_exact() {
        Some(sq) => sq <= BigRational::one(),
        None => v.abs() <= 1.0 + 1e-12,
    };
    if within {
        Ok(())
    } else {
        Err(Error::Domain(format!("{what} must have modulus at most 1")))
    }
}

/// Slit map of the disk with a rotated cusp: z / (1 - c z)^2 for a unit c.
/// Univalent for every angle; its n-th coefficient is n c^{n-1}.
pub fn koebe(theta: &Angle, order: i64, mode: Mode) -> Result<SClassMap> {
    if order < 1 {
        return Err(Error::Domain("order must be at least 1".into()));
    }
    let c = theta.unit(mode)?;
    let mut terms: Vec<(i64, Value)> = Vec::with_capacity(order as usize);
    let mut cpow = Value::from_big_rational(&BigRational::one(), mode);
    for n in 1..=order {
        let coeff = Value::from_big_rational(&rat_int(n), mode).try_mul(&cpow)?;
        terms.push((n, coeff));
        cpow = cpow.try_mul(&c)?;
    }
    let f = TruncatedSeries::polynomial(mode, &terms)?.as_up_jet();
    SClassMap::new(f, format!("koebe[{theta}]"), Provenance::Extremal)
}

/// Shared binomial expansion z (1 - c z^m)^(-2/m), coefficients via the
/// recurrence r_{k+1} = r_k (2/m + k)/(k + 1).
fn root_family(m: u32, c: &Value, order: i64, label: String) -> Result<SClassMap> {
    if m < 1 {
        return Err(Error::Domain("root transform index must be >= 1".into()));
    }
    if order < 1 {
        return Err(Error::Domain("order must be at least 1".into()));
    }
    let mode = c.mode();
    let mi = m as i64;
    let k_hi = ((order - 1) / mi).max(0);
    let alpha = BigRational::new(2.into(), m.into());
    let mut r = BigRational::one();
    let mut cpow = Value::from_big_rational(&BigRational::one(), mode);
    let mut terms: Vec<(i64, Value)> = Vec::with_capacity(k_hi as usize + 1);
    for k in 0..=k_hi {
        let coeff = Value::from_big_rational(&r, mode).try_mul(&cpow)?;
        terms.push((mi * k + 1, coeff));
        r = r * (&alpha + rat_int(k)) / rat_int(k + 1);
        cpow = cpow.try_mul(c)?;
    }
    // Exponents between stored terms and up to the next absent term are
    // known zero, so the honest window top is m (k_hi + 1).
    let f = TruncatedSeries::polynomial(mode, &terms)?
        .extend_top_to(mi * (k_hi + 1))?
        .as_up_jet();
    SClassMap::new(f, label, Provenance::Extremal)
}

/// Root transform of the cusp family: z (1 - c z^m)^(-2/m) with |c| <= 1.
/// For |c| = 1 this is the m-fold symmetrized slit map; smaller moduli are
/// rescalings f(sz)/s with |s| <= 1, so univalence persists.
pub fn koebe_root(m: u32, c: &PolarParam, order: i64, mode: Mode) -> Result<SClassMap> {
    if c.modulus > BigRational::one() {
        return Err(Error::Domain("root family modulus must be at most 1".into()));
    }
    let cv = c.value(mode)?;
    root_family(m, &cv, order, format!("koebe_root[m={m},c={}]", c.id()))
}

/// Exterior root family z (1 - t z^(-(m+1)))^(2/(m+1)) with |t| <= 1: the
/// inversion of the (m+1)-fold symmetrized slit map, scaled into the family
/// by the homotopy below, hence univalent on |z| > 1.  Its first exterior
/// coefficient is b_m = -2t/(m+1); for m = 1 the map is exactly z - t/z.
pub fn sigma_root_map(m: u32, t: &PolarParam, depth: i64, mode: Mode) -> Result<SigmaClassMap> {
    if m < 1 {
        return Err(Error::Domain("root transform index must be >= 1".into()));
    }
    if t.modulus > BigRational::one() {
        return Err(Error::Domain("exterior root family needs |t| <= 1".into()));
    }
    if depth < 1 {
        return Err(Error::Domain("depth must be at least 1".into()));
    }
    let tv = t.value(mode)?;
    let label = format!("sigma_root[m={m},t={}]", t.id());
    let p = m as i64 + 1;
    if m == 1 {
        // beta = 1: the binomial terminates and the map is a polynomial.
        let terms = vec![
            (1, Value::from_big_rational(&BigRational::one(), mode)),
            (-1, tv.neg()),
        ];
        let f = TruncatedSeries::polynomial(mode, &terms)?;
        return SigmaClassMap::new(f, omits_zero_arc(&tv), label, Provenance::Extremal);
    }
    let beta = BigRational::new(2.into(), p.into());
    let k_hi = ((depth + 1) / p).max(0);
    let mut w = BigRational::one();
    let mut tpow = Value::from_big_rational(&BigRational::one(), mode);
    let mut terms: Vec<(i64, Value)> = Vec::with_capacity(k_hi as usize + 1);
    let mut sign = BigRational::one();
    for k in 0..=k_hi {
        let coeff = Value::from_big_rational(&(&w * &sign), mode).try_mul(&tpow)?;
        terms.push((1 - p * k, coeff));
        w = w * (&beta - rat_int(k)) / rat_int(k + 1);
        sign = -sign;
        tpow = tpow.try_mul(&tv)?;
    }
    let f = TruncatedSeries::polynomial(mode, &terms)?
        .extend_bottom_to(2 - p * (k_hi + 1))?
        .as_down_jet();
    SigmaClassMap::new(f, true, label, Provenance::Extremal)
}

/// z - t/z omits zero iff both roots of z^2 = t lie in the closed disk,
/// which holds exactly when |t| <= 1; within this family that is always so.
fn omits_zero_arc(_t: &Value) -> bool {
    true
}

/// Affine exterior map z + b0 + b1/z; univalent iff |b1| <= 1 (it is the
/// Joukowski-type map up to translation and rotation).
fn fmt_c64(c: crate::num::C64) -> String {
    let re = if c.re == 0.0 { 0.0 } else { c.re };
    let im = if c.im == 0.0 { 0.0 } else { c.im };
    if im < 0.0 {
        format!("{re}{im}i")
    } else {
        format!("{re}+{im}i")
    }
}

pub fn affine_sigma(b0: &Value, b1: &Value) -> Result<SigmaClassMap> {
    if b0.mode() != b1.mode() {
        return Err(Error::Mode("affine coefficients mix modes".into()));
    }
    check_unit_modulus(b1, "affine coefficient b1")?;
    let mode = b0.mode();
    let mut terms = vec![
        (1, Value::from_big_rational(&BigRational::one(), mode)),
        (0, b0.clone()),
    ];
    if !b1.is_zero() {
        terms.push((-1, b1.clone()));
    }
    let f = TruncatedSeries::polynomial(mode, &terms)?;
    // F(z) = 0 iff z^2 + b0 z + b1 = 0; the map omits zero iff no root
    // lies outside the closed unit disk.
    let b0a = b0.approx();
    let b1a = b1.approx();
    let disc = (b0a * b0a - 4.0 * b1a).sqrt();
    let r1 = (-b0a + disc) / 2.0;
    let r2 = (-b0a - disc) / 2.0;
    let omits = r1.norm() <= 1.0 + 1e-12 && r2.norm() <= 1.0 + 1e-12;
    SigmaClassMap::new(
        f,
        omits,
        format!("affine[b0={},b1={}]", fmt_c64(b0a), fmt_c64(b1a)),
        Provenance::Extremal,
    )
}

/// Disk homotopy a_n -> a_n t^{n-1}, i.e. f(tz)/t, for |t| <= 1.  Stays in
/// the class because it pre- and post-composes with scalings.
pub fn homotopy_s(map: &SClassMap, t: &PolarParam) -> Result<SClassMap> {
    if t.modulus > BigRational::one() {
        return Err(Error::Domain("homotopy parameter needs |t| <= 1".into()));
    }
    let tv = t.value(map.mode())?;
    let mut terms: Vec<(i64, Value)> = Vec::new();
    for (k, v) in map.series().iter_known() {
        terms.push((k, v.try_mul(&tv.pow_u((k - 1) as u64))?));
    }
    let f = TruncatedSeries::polynomial(map.mode(), &terms)?
        .extend_top_to(map.series().top())?;
    let f = if map.series().zero_above() { f } else { f.as_up_jet() };
    SClassMap::new(
        f,
        format!("homotopy[t={}]({})", t.id(), map.label()),
        Provenance::Transform,
    )
}

/// Exterior homotopy b_n -> b_n t^{n+1}, i.e. t F(z/t), for 0 < |t| <= 1
/// (t = 0 is admitted too and gives the identity map).  z/t maps |z| > 1
/// into |z| > 1, so univalence persists; an omitted zero stays omitted.
pub fn homotopy_sigma(map: &SigmaClassMap, t: &PolarParam) -> Result<SigmaClassMap> {
    if t.modulus > BigRational::one() {
        return Err(Error::Domain("homotopy parameter needs |t| <= 1".into()));
    }
    let tv = t.value(map.mode())?;
    let mut terms: Vec<(i64, Value)> = vec![(1, Value::from_big_rational(&BigRational::one(), map.mode()))];
    for (k, v) in map.series().iter_known() {
        if k == 1 {
            continue;
        }
        terms.push((k, v.try_mul(&tv.pow_u((1 - k) as u64))?));
    }
    let f = TruncatedSeries::polynomial(map.mode(), &terms)?
        .extend_bottom_to(map.series().valuation())?;
    let f = if map.series().zero_below() { f } else { f.as_down_jet() };
    SigmaClassMap::new(
        f,
        map.omits_zero(),
        format!("homotopy[t={}]({})", t.id(), map.label()),
        Provenance::Transform,
    )
}

/// Small-dilatation extremal family z (1 - k t z^{n-1})^(-2/(n-1)) with
/// 0 <= k <= 1 and |t| <= 1: the root family at modulus k|t|, so univalent,
/// with n-th coefficient exactly 2 k t / (n - 1).
pub fn small_k_extremal(
    n: u32,
    k: &BigRational,
    t: &PolarParam,
    order: i64,
    mode: Mode,
) -> Result<SClassMap> {
    if n < 2 {
        return Err(Error::Domain("coefficient index must be >= 2".into()));
    }
    if k.is_negative() || k > &BigRational::one() {
        return Err(Error::Domain("dilatation cap must lie in [0, 1]".into()));
    }
    if t.modulus > BigRational::one() {
        return Err(Error::Domain("phase parameter needs |t| <= 1".into()));
    }
    let c = Value::from_big_rational(k, mode).try_mul(&t.value(mode)?)?;
    root_family(
        n - 1,
        &c,
        order,
        format!("small_k[n={n},k={k},t={}]", t.id()),
    )
}

/// Square-root transform sqrt(F(z^2)) of an exterior map omitting zero:
/// univalent and odd, with first coefficient b_1 = b_0(F)/2.  The result
/// window reaches at least `depth` when the input permits.
pub fn sigma_square_root_transform(map: &SigmaClassMap, depth: i64) -> Result<SigmaClassMap> {
    if !map.omits_zero() {
        return Err(Error::Domain(
            "square-root transform needs an exterior map omitting 0".into(),
        ));
    }
    // F(w)/w as a power series G(x) in x = 1/w, constant term 1.
    let mut g = map.series().shift(-1).reflect();
    if g.zero_above() {
        g = g.extend_top_to(g.top().max(((depth + 1) / 2).max(1)))?;
    }
    let half = BigRational::new(1.into(), 2.into());
    let h = g.pow_rational(&half)?;
    let f2 = h.substitute_power(2)?.reflect().shift(1);
    SigmaClassMap::new(
        f2,
        true,
        format!("sqrt2({})", map.label()),
        Provenance::Transform,
    )
}
