//! Schwarzian derivatives, hyperbolic norms with certified truncation tails,
//! and quasiconformal dilatation metrics.
//!
//! The norm routines return certified lower bounds: a grid maximum of the
//! truncated evaluation minus a rigorous tail bound.  Tail bounds come from
//! Cauchy estimates against the sharp hyperbolic-norm bound 6 for univalent
//! sources, so they are only claimed for maps whose provenance guarantees
//! univalence.

use crate::error::{Error, Result};
use crate::maps::{Provenance, SClassMap, SigmaClassMap};
use crate::num::{PolarParam, Value};
use crate::series::TruncatedSeries;
use num::rational::BigRational;
use num::One;
use serde::{Deserialize, Serialize};

/// S_f = (f''/f')' - (1/2)(f''/f')^2 as a truncated series.  Works for any
/// series whose derivative is invertible in the Laurent sense.  The window
/// is whatever the stored entries determine; series with exact tails trim
/// to their minimal stored form first, so use [`schwarzian_to`] or
/// [`exterior_schwarzian_to`] to request a wider window from such inputs.
pub fn schwarzian(f: &TruncatedSeries) -> Result<TruncatedSeries> {
    let fp = f.derivative()?;
    let fpp = fp.derivative()?;
    let g = fpp.div(&fp)?;
    let g2 = g.mul(&g)?;
    let half = BigRational::new(1.into(), 2.into());
    g.derivative()?.sub(&g2.scale_rational(&half))
}

/// Schwarzian with the window pushed up to at least `top` when the input's
/// exact upper tail allows it.  The padding is converted to a jet so the
/// intermediate arithmetic cannot trim it away.
pub fn schwarzian_to(f: &TruncatedSeries, top: i64) -> Result<TruncatedSeries> {
    if !f.zero_above() {
        return schwarzian(f);
    }
    let wide = f.extend_top_to((top + 3).max(f.top()))?.as_up_jet();
    schwarzian(&wide)
}

/// Exterior mirror of [`schwarzian_to`]: pushes the window down to at least
/// exponent `-depth` when the exact lower tail allows it.
pub fn exterior_schwarzian_to(f: &TruncatedSeries, depth: i64) -> Result<TruncatedSeries> {
    if !f.zero_below() {
        return schwarzian(f);
    }
    let wide = f.extend_bottom_to((-depth - 3).min(f.valuation()))?.as_down_jet();
    schwarzian(&wide)
}

/// Expansion order the norm routines use when a map's exact tail leaves the
/// working window free to choose.
pub const NORM_WORKING_ORDER: i64 = 64;

/// 6 (a_3 - a_2^2): the Schwarzian of a disk map at the origin.
pub fn schwarzian_at_zero(map: &SClassMap) -> Result<Value> {
    let a2 = map.a(2)?;
    let a3 = map.a(3)?;
    let six = Value::from_big_rational(&BigRational::from_integer(6.into()), map.mode());
    six.try_mul(&a3.try_sub(&a2.try_mul(&a2)?)?)
}

/// Evaluation grid for hyperbolic-norm lower bounds.  Radii are the
/// fractions max_radius * i / radii (i = 1..=radii); angles are the
/// full-circle fractions j / angles.  Doubling both counts refines the grid
/// to a superset, so reported bounds are monotone under refinement.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormGrid {
    pub radii: u32,
    pub angles: u32,
    pub max_radius: f64,
}

impl Default for NormGrid {
    fn default() -> Self {
        NormGrid { radii: 32, angles: 64, max_radius: 0.9 }
    }
}

impl NormGrid {
    pub fn validate(&self) -> Result<()> {
        if self.radii == 0 || self.angles == 0 {
            return Err(Error::Spec("norm grid needs positive counts".into()));
        }
        if !(self.max_radius > 0.0 && self.max_radius < 1.0) {
            return Err(Error::Spec("norm grid max_radius must lie in (0, 1)".into()));
        }
        Ok(())
    }

    /// Both counts doubled; the old grid points all survive.
    pub fn refined(&self) -> NormGrid {
        NormGrid {
            radii: self.radii * 2,
            angles: self.angles * 2,
            max_radius: self.max_radius,
        }
    }
}

/// A certified lower bound with the grid point that attained it.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormLowerBound {
    pub value: f64,
    pub witness_radius: f64,
    pub witness_angle_turns: f64,
    /// Tail correction subtracted at the witness point.
    pub witness_tail: f64,
}

fn geom_tail_0(x: f64, k: f64) -> f64 {
    x.powf(k) / (1.0 - x)
}

fn geom_tail_1(x: f64, k: f64) -> f64 {
    x.powf(k) * (k - (k - 1.0) * x) / ((1.0 - x) * (1.0 - x))
}

fn geom_tail_2(x: f64, k: f64) -> f64 {
    let num = k * k - (2.0 * k * k - 2.0 * k - 1.0) * x + (k - 1.0) * (k - 1.0) * x * x;
    x.powf(k) * num / ((1.0 - x) * (1.0 - x) * (1.0 - x))
}

/// Tail of sum_{j > m} |c_j| r^j for the Schwarzian of a univalent disk map
/// truncated after exponent m.  Cauchy estimates at radius rho^2 = j/(j+4)
/// against |S| <= 6/(1-rho^2)^2 give |c_j| <= 6 e^2 (j+4)^2 / 16.
fn disk_tail(r: f64, m: i64) -> f64 {
    if r <= 0.0 {
        return 0.0;
    }
    let c = 6.0 * std::f64::consts::E.powi(2) / 16.0;
    let k = (m + 1) as f64;
    // (j+4)^2 = j^2 + 8j + 16
    c * (geom_tail_2(r, k) + 8.0 * geom_tail_1(r, k) + 16.0 * geom_tail_0(r, k))
}

/// Tail of sum_{j > m} |c_j| r^{-j} for the Schwarzian of a univalent
/// exterior map known down to exponent -m.  Coefficients vanish below index
/// 4; |c_4| <= 6; for j >= 5 the Cauchy radius R^2 = j/(j-4) gives
/// |c_j| <= 6 e^2 e^{8/(j-4)} (j-4)^2 / 16.
fn exterior_tail(r: f64, m: i64) -> f64 {
    let x = 1.0 / r;
    if x >= 1.0 {
        return f64::INFINITY;
    }
    let shift = ((m - 3).max(1)) as f64;
    let factor = (8.0 / shift).exp();
    let c = 6.0 * std::f64::consts::E.powi(2) / 16.0 * factor;
    let mut tail = c * x.powi(4) * geom_tail_2(x, shift);
    if m < 4 {
        tail += 6.0 * x.powi(4);
    }
    tail
}

fn require_univalence_certificate(p: Provenance, what: &str) -> Result<()> {
    match p {
        Provenance::Extremal | Provenance::Transform | Provenance::LoewnerApprox => Ok(()),
        Provenance::Synthetic => Err(Error::Uncertified(format!(
            "{what} needs a univalence guarantee; this map has none"
        ))),
    }
}

fn norm_scan(
    s: &TruncatedSeries,
    grid: &NormGrid,
    tolerance: f64,
    exterior: bool,
    tail_at: impl Fn(f64) -> f64,
) -> Result<NormLowerBound> {
    grid.validate()?;
    let sa = s.to_approx();
    let mut best = NormLowerBound {
        value: 0.0,
        witness_radius: 0.0,
        witness_angle_turns: 0.0,
        witness_tail: 0.0,
    };
    let mut min_weighted_tail = f64::INFINITY;
    for i in 1..=grid.radii {
        let r_disk = grid.max_radius * i as f64 / grid.radii as f64;
        let r = if exterior { 1.0 / r_disk } else { r_disk };
        let weight = if exterior {
            (r * r - 1.0) * (r * r - 1.0)
        } else {
            (1.0 - r * r) * (1.0 - r * r)
        };
        let tail = tail_at(r);
        min_weighted_tail = min_weighted_tail.min(weight * tail);
        for j in 0..grid.angles {
            let turns = j as f64 / grid.angles as f64;
            let phi = 2.0 * std::f64::consts::PI * turns;
            let z = Value::Approx(num::complex::Complex::from_polar(r, phi));
            let v = sa.eval(&z)?.abs();
            let lower = weight * (v - tail).max(0.0);
            if lower > best.value {
                best = NormLowerBound {
                    value: lower,
                    witness_radius: r,
                    witness_angle_turns: turns,
                    witness_tail: weight * tail,
                };
            }
        }
    }
    if min_weighted_tail > tolerance {
        return Err(Error::Tail(format!(
            "truncation too short to certify at tolerance {tolerance:e}: \
             smallest weighted tail on the grid is {min_weighted_tail:e}"
        )));
    }
    Ok(best)
}

/// Certified lower bound for sup (1-|z|^2)^2 |S_f(z)| over the disk.
pub fn disk_schwarzian_norm(
    map: &SClassMap,
    grid: &NormGrid,
    tolerance: f64,
) -> Result<NormLowerBound> {
    require_univalence_certificate(map.provenance(), "disk Schwarzian tail bound")?;
    let s = schwarzian_to(map.series(), NORM_WORKING_ORDER)?;
    let m = s.top();
    norm_scan(&s, grid, tolerance, false, |r| {
        if s.zero_above() { 0.0 } else { disk_tail(r, m) }
    })
}

/// Certified lower bound for sup (|z|^2-1)^2 |S_F(z)| over the exterior.
/// Grid radii are the reciprocals of the disk grid's.
pub fn exterior_schwarzian_norm(
    map: &SigmaClassMap,
    grid: &NormGrid,
    tolerance: f64,
) -> Result<NormLowerBound> {
    require_univalence_certificate(map.provenance(), "exterior Schwarzian tail bound")?;
    let s = exterior_schwarzian_to(map.series(), NORM_WORKING_ORDER)?;
    let m = -s.valuation();
    norm_scan(&s, grid, tolerance, true, |r| {
        if s.zero_below() { 0.0 } else { exterior_tail(r, m) }
    })
}

/// Density of the hyperbolic metric on the disk (|z| < 1) or the exterior
/// (|z| > 1), with the curvature -4 normalization.
pub fn hyperbolic_density(r: f64) -> Result<f64> {
    if (0.0..1.0).contains(&r) {
        Ok(2.0 / (1.0 - r * r))
    } else if r > 1.0 && r.is_finite() {
        Ok(2.0 / (r * r - 1.0))
    } else {
        Err(Error::Domain(format!(
            "hyperbolic density undefined at |z| = {r}"
        )))
    }
}

mod g_field {
    use serde::de::{self, Visitor};
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else {
            s.serialize_str("-inf")
        }
    }

    struct GVisitor;

    impl<'de> Visitor<'de> for GVisitor {
        type Value = f64;

        fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
            write!(f, "a float or the string \"-inf\"")
        }

        fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<f64, E> {
            Ok(v)
        }

        fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<f64, E> {
            Ok(v as f64)
        }

        fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<f64, E> {
            Ok(v as f64)
        }

        fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<f64, E> {
            if v == "-inf" {
                Ok(f64::NEG_INFINITY)
            } else {
                Err(de::Error::custom(format!("unexpected string {v:?}")))
            }
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
        d.deserialize_any(GVisitor)
    }
}

/// A dilatation with its Teichmueller-distance and log forms.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricValue {
    /// Dilatation bound k in [0, 1).
    pub k: f64,
    /// arctanh k: distance to the identity in the Teichmueller metric.
    pub tau: f64,
    /// ln k; negative infinity at k = 0, serialized as "-inf".
    #[serde(with = "g_field")]
    pub g: f64,
}

/// Package a dilatation k in [0, 1) with its derived metric forms.
pub fn metric_from_dilatation(k: f64) -> Result<MetricValue> {
    if !(0.0..1.0).contains(&k) {
        return Err(Error::Domain(format!("dilatation {k} outside [0, 1)")));
    }
    Ok(MetricValue {
        k,
        tau: k.atanh(),
        g: k.ln(),
    })
}

/// Small-parameter dilatation bound for the exterior homotopy b_n -> b_n
/// t^{n+1}.  The first surviving coefficient b_m (m >= 1) controls the decay:
/// the extension dilatation is at most |t|^{m+1}, with asymptotic size
/// ((m+1)/2) |b_m| |t|^{m+1} as t -> 0.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HomotopyDilatationBound {
    /// Index m of the first nonzero coefficient with m >= 1, if any.
    pub first_index: Option<u32>,
    /// Bound |t|^{m+1} on the dilatation (0 when no coefficient survives).
    pub cap: f64,
    /// ((m+1)/2) |b_m|: the small-t slope against |t|^{m+1}.
    pub leading_coefficient: f64,
    /// leading_coefficient * |t|^{m+1}.
    pub leading: f64,
}

pub fn homotopy_dilatation_bound(
    map: &SigmaClassMap,
    t: &PolarParam,
) -> Result<HomotopyDilatationBound> {
    if t.modulus > BigRational::one() {
        return Err(Error::Domain("homotopy parameter needs |t| <= 1".into()));
    }
    let ta = t.abs();
    let mut first: Option<(u32, f64)> = None;
    for m in 1..=map.depth().max(0) as u32 {
        let b = map.b(m)?;
        if !b.is_zero() {
            first = Some((m, b.abs()));
            break;
        }
    }
    if first.is_none() && !map.series().zero_below() {
        return Err(Error::Truncation(
            "no nonzero coefficient in the window and deeper ones are unknown".into(),
        ));
    }
    Ok(match first {
        None => HomotopyDilatationBound {
            first_index: None,
            cap: 0.0,
            leading_coefficient: 0.0,
            leading: 0.0,
        },
        Some((m, babs)) => {
            let cap = ta.powi(m as i32 + 1);
            let lc = (m as f64 + 1.0) / 2.0 * babs;
            HomotopyDilatationBound {
                first_index: Some(m),
                cap,
                leading_coefficient: lc,
                leading: lc * cap,
            }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{affine_sigma, koebe, koebe_root, sigma_root_map};
    use crate::maps::circle_inversion;
    use crate::num::{cexact, cint, rat, rat_int, Angle, Mode, Value};
    use crate::series::TruncatedSeries as TS;

    #[test]
    fn cusp_schwarzian_closed_form() {
        // S of z/(1-z)^2 is -6/(1-z^2)^2 = -6 sum (j+1) z^{2j}.
        let f = koebe(&Angle::zero(), 14, Mode::Exact).unwrap();
        let s = schwarzian(f.series()).unwrap();
        assert_eq!(s.valuation(), 0);
        for k in 0..=s.top() {
            let expect = if k % 2 == 0 { cint(-6 * (k / 2 + 1), 0) } else { cint(0, 0) };
            assert_eq!(s.coeff(k).unwrap(), Value::Exact(expect), "z^{k}");
        }
    }

    #[test]
    fn schwarzian_at_zero_is_minus_six_b1() {
        let terms = vec![
            (1, Value::Exact(cint(1, 0))),
            (2, Value::Exact(cexact(rat(1, 2), rat(1, 3)))),
            (3, Value::Exact(cexact(rat(-1, 5), rat(2, 7)))),
            (4, Value::Exact(cint(1, 1))),
        ];
        let f = crate::maps::SClassMap::new(
            TS::polynomial(Mode::Exact, &terms).unwrap().extend_top_to(8).unwrap().as_up_jet(),
            "generic",
            crate::maps::Provenance::Synthetic,
        )
        .unwrap();
        let s0 = schwarzian_at_zero(&f).unwrap();
        // Series route agrees.
        let s = schwarzian(f.series()).unwrap();
        assert_eq!(s.coeff(0).unwrap(), s0);
        // And equals -6 b_1 of the inversion.
        let b1 = circle_inversion(&f).unwrap().b(1).unwrap();
        let minus6 = Value::Exact(cint(-6, 0));
        assert_eq!(s0, minus6.try_mul(&b1).unwrap());
    }

    #[test]
    fn composition_rule_has_zero_residual() {
        // S_{f o g} = (S_f o g) (g')^2 + S_g, exactly over the window.
        let f = TS::polynomial(
            Mode::Exact,
            &[
                (1, Value::Exact(cint(1, 0))),
                (2, Value::Exact(cexact(rat(1, 2), rat_int(0)))),
                (4, Value::Exact(cint(0, 1))),
            ],
        )
        .unwrap()
        .extend_top_to(16)
        .unwrap();
        let g = TS::polynomial(
            Mode::Exact,
            &[
                (1, Value::Exact(cint(2, 0))),
                (3, Value::Exact(cexact(rat(-1, 3), rat(1, 4)))),
            ],
        )
        .unwrap()
        .extend_top_to(16)
        .unwrap();

        let lhs = schwarzian(&f.compose(&g).unwrap()).unwrap();
        let gp = g.derivative().unwrap();
        let rhs = schwarzian_to(&f, 14)
            .unwrap()
            .compose(&g)
            .unwrap()
            .mul(&gp.mul(&gp).unwrap())
            .unwrap()
            .add(&schwarzian_to(&g, 14).unwrap())
            .unwrap();
        let lo = lhs.valuation().max(rhs.valuation());
        let hi = lhs.top().min(rhs.top());
        assert!(hi - lo >= 4);
        for k in lo..=hi {
            assert_eq!(lhs.coeff(k).unwrap(), rhs.coeff(k).unwrap(), "z^{k}");
        }
    }

    #[test]
    fn exterior_schwarzian_decays_like_z_minus_four() {
        let c = crate::num::PolarParam::new(BigRational::one(), Angle::turns_fraction(1, 4))
            .unwrap();
        let f = koebe_root(2, &c, 12, Mode::Exact).unwrap();
        let big_f = circle_inversion(&f).unwrap();
        let s_ext = schwarzian(big_f.series()).unwrap();
        // No coefficients above z^{-4}.
        assert!(s_ext.top() <= -4);
        // Equals S_f(1/z) / z^4 over the common window.
        let via_disk = schwarzian(f.series()).unwrap().reflect().shift(-4);
        let lo = s_ext.valuation().max(via_disk.valuation());
        let hi = s_ext.top().min(via_disk.top());
        assert!(hi - lo >= 3);
        for k in lo..=hi {
            assert_eq!(s_ext.coeff(k).unwrap(), via_disk.coeff(k).unwrap(), "z^{k}");
        }
        // Leading decay coefficient is the Schwarzian at the origin.
        let s0 = schwarzian_at_zero(
            &crate::maps::disk_map_from_inversion(&big_f).unwrap()
        ).unwrap();
        assert_eq!(s_ext.coeff(-4).unwrap(), s0);
    }

    #[test]
    fn cusp_norm_lower_bound_is_nearly_six() {
        let f = koebe(&Angle::zero(), 64, Mode::Approx).unwrap();
        let nb = disk_schwarzian_norm(&f, &NormGrid::default(), 1e-6).unwrap();
        assert!(nb.value <= 6.0 + 1e-9, "value {}", nb.value);
        assert!(nb.value >= 6.0 - 1e-6, "value {}", nb.value);
    }

    #[test]
    fn norm_lower_bound_is_monotone_under_grid_refinement() {
        let c = crate::num::PolarParam::new(rat(3, 4), Angle::turns_fraction(1, 8)).unwrap();
        let f = koebe_root(2, &c, 48, Mode::Approx).unwrap();
        let coarse = NormGrid { radii: 8, angles: 16, max_radius: 0.85 };
        let a = disk_schwarzian_norm(&f, &coarse, 1e-6).unwrap();
        let b = disk_schwarzian_norm(&f, &coarse.refined(), 1e-6).unwrap();
        let c2 = disk_schwarzian_norm(&f, &coarse.refined().refined(), 1e-6).unwrap();
        assert!(b.value >= a.value);
        assert!(c2.value >= b.value);
        assert!(c2.value <= 6.0 + 1e-9);
    }

    #[test]
    fn short_truncations_fail_the_tail_guard() {
        let f = koebe(&Angle::zero(), 6, Mode::Approx).unwrap();
        let grid = NormGrid { radii: 1, angles: 4, max_radius: 0.97 };
        assert!(matches!(
            disk_schwarzian_norm(&f, &grid, 1e-6),
            Err(Error::Tail(_))
        ));
    }

    #[test]
    fn synthetic_maps_get_no_certificate() {
        let f = crate::maps::SClassMap::new(
            TS::z(Mode::Approx).extend_top_to(16).unwrap().as_up_jet(),
            "plain",
            crate::maps::Provenance::Synthetic,
        )
        .unwrap();
        assert!(matches!(
            disk_schwarzian_norm(&f, &NormGrid::default(), 1e-6),
            Err(Error::Uncertified(_))
        ));
    }

    #[test]
    fn exterior_norm_of_slit_exterior_map() {
        // z + 1/z has S_F = -6/(z^2-1)^2 (it conjugates to the cusp map),
        // so the weighted sup is 6.
        let big_f = affine_sigma(
            &Value::Approx(num::complex::Complex::new(0.0, 0.0)),
            &Value::Approx(num::complex::Complex::new(1.0, 0.0)),
        )
        .unwrap();
        let nb = exterior_schwarzian_norm(&big_f, &NormGrid::default(), 1e-6).unwrap();
        assert!(nb.value <= 6.0 + 1e-9, "value {}", nb.value);
        assert!(nb.value >= 6.0 - 1e-6, "value {}", nb.value);
    }

    #[test]
    fn metric_forms_are_consistent() {
        for k in [0.0, 1e-6, 0.1, 0.5, 0.9, 0.999] {
            let m = metric_from_dilatation(k).unwrap();
            if k == 0.0 {
                assert_eq!(m.g, f64::NEG_INFINITY);
                assert_eq!(m.tau, 0.0);
            } else {
                // g = ln tanh tau identically.
                assert!((m.g - m.tau.tanh().ln()).abs() < 1e-14, "k={k}");
            }
        }
        assert!(metric_from_dilatation(1.0).is_err());
        assert!(metric_from_dilatation(-0.1).is_err());
    }

    #[test]
    fn metric_serialization_handles_the_log_sentinel() {
        let m = metric_from_dilatation(0.0).unwrap();
        let json = serde_json::to_string(&m).unwrap();
        assert!(json.contains("\"-inf\""));
        let back: MetricValue = serde_json::from_str(&json).unwrap();
        assert_eq!(back, m);
        let m2 = metric_from_dilatation(0.25).unwrap();
        let back2: MetricValue = serde_json::from_str(&serde_json::to_string(&m2).unwrap()).unwrap();
        assert_eq!(back2, m2);
    }

    #[test]
    fn homotopy_bound_finds_first_coefficient() {
        let s = crate::num::PolarParam::new(rat(1, 2), Angle::zero()).unwrap();
        let big_f = sigma_root_map(3, &s, 20, Mode::Exact).unwrap();
        let t = crate::num::PolarParam::new(rat(1, 10), Angle::turns_fraction(1, 8)).unwrap();
        let hb = homotopy_dilatation_bound(&big_f, &t).unwrap();
        assert_eq!(hb.first_index, Some(3));
        assert!((hb.cap - 1e-4).abs() < 1e-18);
        // |b_3| = 2 * (1/2) / 4 = 1/4, leading coefficient 2 * 1/4 = 1/2.
        assert!((hb.leading_coefficient - 0.5).abs() < 1e-15);
        // Translation-only maps give a zero bound.
        let trans = affine_sigma(
            &Value::Exact(cint(3, 0)),
            &Value::Exact(cint(0, 0)),
        );
        // |b0| = 3 > 1 is fine for b0; only b1 is constrained.
        let trans = trans.unwrap();
        let hb0 = homotopy_dilatation_bound(&trans, &t).unwrap();
        assert_eq!(hb0.first_index, None);
        assert_eq!(hb0.cap, 0.0);
    }

    #[test]
    fn density_branches_and_rejects_the_circle() {
        assert!((hyperbolic_density(0.0).unwrap() - 2.0).abs() < 1e-15);
        assert!((hyperbolic_density(2.0).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        assert!(hyperbolic_density(1.0).is_err());
    }
}
