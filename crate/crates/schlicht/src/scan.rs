//! The verification harness: evaluate coefficient functionals over grids of
//! provably univalent maps, check every inequality against its sharp bound,
//! and assemble a deterministic report.
//!
//! Grid points that exact arithmetic cannot represent (phases off the
//! quarter-turn lattice) are recorded as skipped in exact mode.  In
//! approximate mode a negative margin is replayed exactly whenever the
//! point allows it, so reported violations are confirmed, not rounding
//! artifacts.

use crate::catalog::{koebe, koebe_root};
use crate::error::{Error, Result};
use crate::functional::{FunctionalSpec, TermSpec};
use crate::grunsky::grunsky_norm;
use crate::maps::{SClassMap, SigmaClassMap};
use crate::num::{parse_rational, Angle, Mode, PolarParam};
use crate::par::ordered_map;
use crate::report::{config_digest, PointRecord, Status, VerificationReport};
use num::rational::BigRational;
use num::One;
use serde::{Deserialize, Serialize};

/// Which maps the scan visits.  Phases are fractions of a turn with the
/// given denominators; moduli are rational strings like "9/10".
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilyGridConfig {
    pub koebe_phase_den: i64,
    pub root_orders: Vec<u32>,
    pub root_moduli: Vec<String>,
    pub root_phase_den: i64,
}

impl Default for FamilyGridConfig {
    fn default() -> Self {
        FamilyGridConfig {
            koebe_phase_den: 16,
            root_orders: vec![1, 2, 3, 4, 5, 6],
            root_moduli: ["1/10", "1/4", "1/2", "3/4", "9/10", "1"]
                .iter()
                .map(|s| s.to_string())
                .collect(),
            root_phase_den: 8,
        }
    }
}

impl FamilyGridConfig {
    pub fn validate(&self) -> Result<()> {
        if self.koebe_phase_den < 1 || self.root_phase_den < 1 {
            return Err(Error::Spec("phase denominators must be positive".into()));
        }
        for m in &self.root_orders {
            if *m < 1 {
                return Err(Error::Spec("root order 0 is not a map family".into()));
            }
        }
        for s in &self.root_moduli {
            let r = parse_rational(s)?;
            if r > BigRational::one() || r < BigRational::from_integer(0.into()) {
                return Err(Error::Spec(format!("root modulus {s} outside [0, 1]")));
            }
        }
        Ok(())
    }
}

/// Full scan configuration.  Worker counts deliberately live outside: they
/// must not influence results, so they are not part of the digest.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanConfig {
    pub mode: Mode,
    pub order: i64,
    pub tolerance: f64,
    pub functionals: Vec<FunctionalSpec>,
    pub families: FamilyGridConfig,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig {
            mode: Mode::Approx,
            order: 64,
            tolerance: 1e-9,
            functionals: default_functionals(),
            families: FamilyGridConfig::default(),
        }
    }
}

pub const MAX_ORDER: i64 = 512;

impl ScanConfig {
    pub fn validate(&self) -> Result<()> {
        if self.order < 2 || self.order > MAX_ORDER {
            return Err(Error::Spec(format!(
                "order {} outside 2..={MAX_ORDER}",
                self.order
            )));
        }
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return Err(Error::Spec("tolerance must be positive".into()));
        }
        if self.functionals.is_empty() {
            return Err(Error::Spec("no functionals to scan".into()));
        }
        for f in &self.functionals {
            f.validate()?;
        }
        self.families.validate()
    }

    pub fn from_json(s: &str) -> Result<ScanConfig> {
        let cfg: ScanConfig =
            serde_json::from_str(s).map_err(|e| Error::Spec(format!("config parse: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("config serializes");
        s.push('\n');
        s
    }
}

/// The stock functional battery: coefficient bounds plus the quadratic
/// functionals with known sharp constants.
pub fn default_functionals() -> Vec<FunctionalSpec> {
    let mut out = Vec::new();
    for n in 2..=6 {
        out.push(FunctionalSpec::Zalcman { n });
    }
    for n in 2..=8 {
        out.push(FunctionalSpec::Bieberbach { n });
    }
    out.push(FunctionalSpec::PowerGap { n: 4, p: 1 });
    out.push(FunctionalSpec::PowerGap { n: 5, p: 1 });
    out.push(FunctionalSpec::NeighborGap { n: 3, p: 1 });
    out.push(FunctionalSpec::NeighborGap { n: 4, p: 1 });
    out
}

/// One map of the grid, kept symbolic so exact replay is possible.
#[derive(Clone, Debug, PartialEq)]
enum GridPoint {
    Koebe { num: i64, den: i64 },
    Root { m: u32, modulus: BigRational, num: i64, den: i64 },
}

impl GridPoint {
    fn label(&self) -> String {
        match self {
            GridPoint::Koebe { num, den } => {
                format!("koebe[{}]", Angle::turns_fraction(*num, *den))
            }
            GridPoint::Root { m, modulus, num, den } => {
                let c = PolarParam::new(modulus.clone(), Angle::turns_fraction(*num, *den))
                    .expect("validated modulus");
                format!("koebe_root[m={m},c={}]", c.id())
            }
        }
    }

    fn representable(&self) -> bool {
        let (num, den) = match self {
            GridPoint::Koebe { num, den } => (*num, *den),
            GridPoint::Root { num, den, .. } => (*num, *den),
        };
        Angle::turns_fraction(num, den).exact_unit().is_some()
    }

    fn build(&self, order: i64, mode: Mode) -> Result<SClassMap> {
        match self {
            GridPoint::Koebe { num, den } => {
                koebe(&Angle::turns_fraction(*num, *den), order, mode)
            }
            GridPoint::Root { m, modulus, num, den } => {
                let c = PolarParam::new(modulus.clone(), Angle::turns_fraction(*num, *den))?;
                koebe_root(*m, &c, order, mode)
            }
        }
    }
}

fn grid(families: &FamilyGridConfig) -> Result<Vec<GridPoint>> {
    let mut out = Vec::new();
    for k in 0..families.koebe_phase_den {
        out.push(GridPoint::Koebe { num: k, den: families.koebe_phase_den });
    }
    for m in &families.root_orders {
        for s in &families.root_moduli {
            let modulus = parse_rational(s)?;
            for j in 0..families.root_phase_den {
                out.push(GridPoint::Root {
                    m: *m,
                    modulus: modulus.clone(),
                    num: j,
                    den: families.root_phase_den,
                });
            }
        }
    }
    Ok(out)
}

/// Exact verdict at a representable point: Some(record) when the exact
/// value could be computed and compared.
fn exact_verdict(
    point: &GridPoint,
    func: &FunctionalSpec,
    order: i64,
) -> Result<(Status, f64, f64, Option<(String, String)>)> {
    let map = point.build(order, Mode::Exact)?;
    let value = func.eval_on(&map)?;
    let value_sq = value
        .abs_sq_exact()
        .ok_or_else(|| Error::Mode("exact evaluation produced approximate value".into()))?;
    let bound = func.bound_exact()?;
    let bound_sq = &bound * &bound;
    let value_abs = value.abs();
    let margin = crate::num::rat_to_f64(&bound) - value_abs;
    let status = if value_sq == bound_sq {
        Status::Sharp
    } else if value_sq < bound_sq {
        Status::Pass
    } else {
        Status::Violation
    };
    Ok((status, value_abs, margin, value.exact_strings()))
}

fn eval_point(cfg: &ScanConfig, point: &GridPoint, func: &FunctionalSpec) -> PointRecord {
    let family = point.label();
    let functional = func.name();
    let bound = func.bound_f64().unwrap_or(f64::NAN);
    let skip = |note: String| PointRecord {
        family: family.clone(),
        functional: functional.clone(),
        status: Status::Skipped,
        value_abs: 0.0,
        bound,
        margin: 0.0,
        tail: 0.0,
        note,
        exact: None,
    };

    if cfg.mode == Mode::Exact && !point.representable() {
        return skip("phase leaves the rational-complex lattice".into());
    }

    if cfg.mode == Mode::Exact {
        return match exact_verdict(point, func, cfg.order) {
            Ok((status, value_abs, margin, exact)) => PointRecord {
                family,
                functional,
                status,
                value_abs,
                bound,
                margin,
                tail: 0.0,
                note: if status == Status::Violation {
                    "confirmed exactly".into()
                } else {
                    String::new()
                },
                exact,
            },
            Err(Error::Truncation(t)) => skip(format!("window too short: {t}")),
            Err(e) => skip(format!("evaluation failed: {e}")),
        };
    }

    let map = match point.build(cfg.order, Mode::Approx) {
        Ok(m) => m,
        Err(e) => return skip(format!("map construction failed: {e}")),
    };
    let value = match func.eval_on(&map) {
        Ok(v) => v,
        Err(Error::Truncation(t)) => return skip(format!("window too short: {t}")),
        Err(e) => return skip(format!("evaluation failed: {e}")),
    };
    let value_abs = value.abs();
    let tail = 0.0; // catalog coefficients are exact within their windows
    let margin = bound - value_abs;
    let (status, note, exact) = if margin >= -(tail + cfg.tolerance) {
        if margin.abs() < cfg.tolerance {
            (Status::Sharp, String::new(), None)
        } else {
            (Status::Pass, String::new(), None)
        }
    } else if point.representable() {
        // Negative beyond allowance: replay exactly.
        match exact_verdict(point, func, cfg.order) {
            Ok((Status::Violation, _, _, exact)) => {
                (Status::Violation, "confirmed exactly".into(), exact)
            }
            Ok((s, _, _, exact)) => (
                s,
                "approximate dip dismissed by exact replay".into(),
                exact,
            ),
            Err(e) => (
                Status::Unconfirmed,
                format!("exact replay failed: {e}"),
                None,
            ),
        }
    } else {
        (
            Status::Unconfirmed,
            "point not exactly representable".into(),
            None,
        )
    };
    PointRecord {
        family,
        functional,
        status,
        value_abs,
        bound,
        margin,
        tail,
        note,
        exact,
    }
}

/// Run the full grid.  `workers` tunes parallelism only; the report bytes
/// are identical for every value.
pub fn run_scan(cfg: &ScanConfig, workers: Option<usize>) -> Result<VerificationReport> {
    cfg.validate()?;
    let points = grid(&cfg.families)?;
    let records: Vec<PointRecord> = ordered_map(points, workers, |point| {
        cfg.functionals
            .iter()
            .map(|func| eval_point(cfg, &point, func))
            .collect::<Vec<_>>()
    })
    .into_iter()
    .flatten()
    .collect();
    Ok(VerificationReport {
        config_digest: config_digest(cfg),
        mode: cfg.mode,
        order: cfg.order,
        summary: VerificationReport::summarize(&records),
        records,
    })
}

/// Size of the perturbation a quadratic-functional bound can absorb while
/// the slit maps stay extremal: its family maximum must stay under half the
/// unperturbed constant.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SubdominanceCheck {
    pub n: u32,
    pub threshold: f64,
    pub max_abs: f64,
    pub argmax_family: String,
    pub ok: bool,
}

pub fn zalcman_subdominance_check(
    cfg: &ScanConfig,
    n: u32,
    perturbation: &[TermSpec],
) -> Result<SubdominanceCheck> {
    let spec = FunctionalSpec::ZalcmanPerturbed {
        n,
        perturbation: perturbation.to_vec(),
    };
    spec.validate()?;
    let mut poly = crate::functional::CoeffPoly::zero();
    for t in perturbation {
        poly = poly.add(&t.to_poly()?);
    }
    let mut max_abs = f64::NEG_INFINITY;
    let mut argmax = String::new();
    for point in grid(&cfg.families)? {
        let map = point.build(cfg.order, Mode::Approx)?;
        let v = poly.eval(Mode::Approx, |idx| map.a(idx))?;
        if v.abs() > max_abs {
            max_abs = v.abs();
            argmax = map.label().to_string();
        }
    }
    let threshold = ((n - 1) * (n - 1)) as f64 / 2.0;
    Ok(SubdominanceCheck {
        n,
        threshold,
        max_abs,
        argmax_family: argmax,
        ok: max_abs < threshold,
    })
}

/// Block-norm trace of a single exterior map across matrix sizes.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceCheck {
    pub label: String,
    pub sizes: Vec<usize>,
    pub norms: Vec<f64>,
    pub monotone: bool,
    pub admissible: bool,
    pub expected: Option<f64>,
    pub final_gap: Option<f64>,
}

pub fn grunsky_convergence_check(
    map: &SigmaClassMap,
    sizes: &[usize],
    expected: Option<f64>,
) -> Result<ConvergenceCheck> {
    if sizes.is_empty() {
        return Err(Error::Spec("need at least one matrix size".into()));
    }
    let mut norms = Vec::with_capacity(sizes.len());
    for s in sizes {
        norms.push(grunsky_norm(map, *s)?.value);
    }
    let monotone = norms.windows(2).all(|w| w[1] >= w[0] - 1e-9);
    let admissible = norms.iter().all(|v| *v <= 1.0 + 1e-9);
    let final_gap = expected.map(|e| (norms.last().unwrap() - e).abs());
    Ok(ConvergenceCheck {
        label: map.label().to_string(),
        sizes: sizes.to_vec(),
        norms,
        monotone,
        admissible,
        expected,
        final_gap,
    })
}
