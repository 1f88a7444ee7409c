//! Grunsky coefficient matrices of exterior maps, their operator norms, and
//! the distance bounds they certify.
//!
//! For F(z) = z + b0 + b1/z + ... the two-point expansion
//! log((F(z) - F(w)) / (z - w)) = -sum alpha_{mn} z^{-m} w^{-n} defines the
//! coefficients alpha_{mn}.  The weighted matrix sqrt(mn) alpha_{mn} has
//! operator norm at most 1 exactly when F is univalent, with the norm
//! bounding the smallest dilatation of any quasiconformal extension from
//! below.

use crate::bivariate::Bivariate;
use crate::error::{Error, Result};
use crate::maps::SigmaClassMap;
use crate::num::{C64, CoeffField, Mode, Value};
use num::complex::Complex;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The upper-left block of the Grunsky coefficient array, 1-indexed.
#[derive(Clone, Debug)]
pub struct GrunskyMatrix {
    size: usize,
    mode: Mode,
    alpha: Vec<Vec<Value>>,
}

/// alpha tables over any coefficient field, from the slice b[0] = b_1,
/// b[1] = b_2, ... of length at least 2 size - 1.
fn alpha_table<C: CoeffField>(bs: &[C], size: usize) -> Result<Vec<Vec<C>>> {
    let deg = 2 * size;
    let mut u = Bivariate::<C>::one(deg);
    for (idx, b) in bs.iter().enumerate() {
        let k = idx + 1;
        // b_k spreads over the antidiagonal i + j = k + 1 with i, j >= 1.
        for i in 1..=k {
            let j = k + 1 - i;
            if i + j <= deg {
                let neg = C::zero().sub_ref(b);
                u.add_assign_at(i, j, &neg);
            }
        }
    }
    let q = u.dx().div(&u)?;
    let mut alpha = Vec::with_capacity(size);
    for m in 1..=size {
        let mut row = Vec::with_capacity(size);
        for n in 1..=size {
            let v = q.get_checked(m - 1, n)?;
            row.push(v.mul_ref(&C::from_ratio(-1, m as i64)));
        }
        alpha.push(row);
    }
    Ok(alpha)
}

/// Build the size x size block.  Needs b_k determined for every
/// k <= 2 size - 1; maps with exact tails satisfy that at any size.
pub fn grunsky_matrix(map: &SigmaClassMap, size: usize) -> Result<GrunskyMatrix> {
    if size == 0 {
        return Err(Error::Domain("matrix size must be positive".into()));
    }
    let mut bs = Vec::with_capacity(2 * size - 1);
    for k in 1..=(2 * size - 1) as u32 {
        bs.push(map.b(k)?);
    }
    let mode = map.mode();
    let alpha = match mode {
        Mode::Exact => {
            let b: Vec<_> = bs
                .iter()
                .map(|v| match v {
                    Value::Exact(c) => c.clone(),
                    Value::Approx(_) => unreachable!("mode-tagged map"),
                })
                .collect();
            alpha_table(&b, size)?
                .into_iter()
                .map(|row| row.into_iter().map(Value::Exact).collect())
                .collect()
        }
        Mode::Approx => {
            let b: Vec<_> = bs.iter().map(|v| v.approx()).collect();
            alpha_table(&b, size)?
                .into_iter()
                .map(|row| row.into_iter().map(Value::Approx).collect())
                .collect()
        }
    };
    Ok(GrunskyMatrix { size, mode, alpha })
}

impl GrunskyMatrix {
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    /// alpha_{mn}, 1-indexed.
    pub fn alpha(&self, m: usize, n: usize) -> &Value {
        &self.alpha[m - 1][n - 1]
    }

    /// sqrt(mn) alpha_{mn} as a complex double.
    pub fn weighted(&self, m: usize, n: usize) -> C64 {
        let w = ((m * n) as f64).sqrt();
        let a = self.alpha(m, n).approx();
        Complex::new(w * a.re, w * a.im)
    }

    /// The full weighted block, row-major.
    pub fn weighted_rows(&self) -> Vec<Vec<C64>> {
        (1..=self.size)
            .map(|m| (1..=self.size).map(|n| self.weighted(m, n)).collect())
            .collect()
    }
}

/// Operator norm estimate with the iteration count that produced it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OperatorNorm {
    pub value: f64,
    pub iterations: u64,
}

const POWER_TOLERANCE: f64 = 1e-10;
const POWER_MAX_ITERATIONS: u64 = 20_000;

fn matvec(a: &[Vec<C64>], x: &[C64], conjugate: bool) -> Vec<C64> {
    a.iter()
        .map(|row| {
            let mut acc = Complex::new(0.0, 0.0);
            for (aij, xj) in row.iter().zip(x) {
                let c = if conjugate { aij.conj() } else { *aij };
                acc += c * xj;
            }
            acc
        })
        .collect()
}

fn l2(x: &[C64]) -> f64 {
    x.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

/// Largest singular value of the weighted block by power iteration on the
/// Hermitian product conj(A) A (the block is complex symmetric, so that is
/// A* A).  Deterministically seeded start; relative stabilization to 1e-10.
pub fn matrix_norm(matrix: &GrunskyMatrix) -> Result<OperatorNorm> {
    let a = matrix.weighted_rows();
    let n = matrix.size();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_cafe);
    let mut v: Vec<C64> = (0..n)
        .map(|_| Complex::new(1.0 + 0.01 * rng.gen::<f64>(), 0.01 * rng.gen::<f64>()))
        .collect();
    let scale = l2(&v);
    for c in &mut v {
        *c /= scale;
    }
    let mut previous = f64::INFINITY;
    let mut history = Vec::new();
    for it in 1..=POWER_MAX_ITERATIONS {
        let av = matvec(&a, &v, false);
        let lambda = av.iter().map(|c| c.norm_sqr()).sum::<f64>();
        if lambda == 0.0 {
            return Ok(OperatorNorm { value: 0.0, iterations: it });
        }
        if (lambda - previous).abs() <= POWER_TOLERANCE * lambda.max(1e-300) {
            return Ok(OperatorNorm { value: lambda.sqrt(), iterations: it });
        }
        history.push(lambda.sqrt());
        if history.len() > 8 {
            history.remove(0);
        }
        previous = lambda;
        let bv = matvec(&a, &av, true);
        let s = l2(&bv);
        if s == 0.0 {
            return Ok(OperatorNorm { value: lambda.sqrt(), iterations: it });
        }
        v = bv.into_iter().map(|c| c / s).collect();
    }
    Err(Error::Convergence {
        iterations: POWER_MAX_ITERATIONS as usize,
        history,
    })
}

/// Norm of the size x size weighted block of a map's Grunsky array.
pub fn grunsky_norm(map: &SigmaClassMap, size: usize) -> Result<OperatorNorm> {
    matrix_norm(&grunsky_matrix(map, size)?)
}

/// arctanh of the block norm: a certified lower bound for the hyperbolic
/// distance from the map to the conformal center.  Infinite when the norm
/// reaches 1 (maps with no quasiconformal extension at all).
pub fn caratheodory_lower_bound(map: &SigmaClassMap, size: usize) -> Result<f64> {
    let norm = grunsky_norm(map, size)?.value;
    if norm >= 1.0 {
        Ok(f64::INFINITY)
    } else {
        Ok(norm.atanh())
    }
}

/// Independent norm estimate: seeded random unit vectors scored by |A x|,
/// the best polished by the antilinear iteration x -> conj(A x) / |A x|
/// whose fixed points are the top singular vectors of a complex symmetric
/// block.
pub fn sampled_norm(matrix: &GrunskyMatrix, samples: u32, polish: u32, seed: u64) -> f64 {
    let a = matrix.weighted_rows();
    let n = matrix.size();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = 0.0f64;
    let mut best_v: Vec<C64> = vec![Complex::new(1.0, 0.0); n];
    for _ in 0..samples {
        let mut v: Vec<C64> = (0..n)
            .map(|_| {
                Complex::new(rng.gen::<f64>() * 2.0 - 1.0, rng.gen::<f64>() * 2.0 - 1.0)
            })
            .collect();
        let s = l2(&v);
        if s == 0.0 {
            continue;
        }
        for c in &mut v {
            *c /= s;
        }
        let score = l2(&matvec(&a, &v, false));
        if score > best {
            best = score;
            best_v = v;
        }
    }
    let mut v = best_v;
    for _ in 0..polish {
        let av = matvec(&a, &v, false);
        let s = l2(&av);
        if s == 0.0 {
            return 0.0;
        }
        best = best.max(s);
        v = av.into_iter().map(|c| c.conj() / s).collect();
    }
    best
}
