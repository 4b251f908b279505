//! The rank-2 engine.
//!
//! Everything here revolves around the Chebyshev-type sequence
//! `p_{-1} = -1, p_0 = 0, p_{n+1} = 2 gamma p_n - p_{n-1}` and the pair of
//! `2 x 2` matrices
//!
//! ```text
//! A = [ -1   2 gamma sqrt(q) X ]      B = [ q                      0 ]
//!     [  0   q                 ]          [ 2 gamma sqrt(q) / X   -1 ]
//! ```
//!
//! whose products have closed forms in terms of `p_n`. With `q = 1` these are
//! the actions of two simple reflections on the span of their roots, which is
//! why the sign pattern of `p_n` decides positivity of rank-2 root systems and
//! the order of `AB` decides bond orders.

use std::f64::consts::PI;

use nalgebra::Matrix2;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative tolerance for matrix identities in this module.
pub const MATRIX_TOL: f64 = 1e-8;

/// Entries beyond this magnitude mean a power has escaped any finite cycle.
const BLOWUP: f64 = 1e100;

/// `p_{-1}, p_0, ..., p_{n_max}`; index `k` of the result holds `p_{k-1}`.
pub fn p_sequence(gamma: f64, n_max: usize) -> Vec<f64> {
    let mut p = Vec::with_capacity(n_max + 2);
    p.push(-1.0);
    p.push(0.0);
    for n in 0..n_max {
        let next = 2.0 * gamma * p[n + 1] - p[n];
        p.push(next);
    }
    p
}

/// `p_n` read from a sequence produced by [`p_sequence`].
#[inline]
fn p_at(seq: &[f64], n: i64) -> f64 {
    seq[(n + 1) as usize]
}

/// Closed-form solution of the recurrence, for `n >= -1`.
pub fn p_closed_form(gamma: f64, n: i64) -> f64 {
    debug_assert!(n >= -1);
    let nf = n as f64;
    if gamma == 1.0 {
        nf
    } else if gamma == -1.0 {
        if n % 2 == 0 {
            -nf
        } else {
            nf
        }
    } else if gamma.abs() < 1.0 {
        let theta = gamma.acos();
        (nf * theta).sin() / theta.sin()
    } else {
        // p_n(gamma) = (-1)^(n+1) p_n(-gamma) extends the gamma > 1 branch
        let theta = gamma.abs().acosh();
        let value = (nf * theta).sinh() / theta.sinh();
        if gamma < 0.0 && n % 2 == 0 {
            -value
        } else {
            value
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum GammaClass {
    CosPiOverM(u32),
    AtLeastOne,
    /// Least `n >= 1` with `p_n p_{n+1} < -eps`.
    Fails(usize),
}

/// Decides whether every `p_n p_{n+1}` is nonnegative.
pub fn classify_gamma(gamma: f64, eps: f64, m_max: u32, n_max: usize) -> Result<GammaClass> {
    for m in 2..=m_max {
        if (gamma - (PI / m as f64).cos()).abs() <= eps {
            return Ok(GammaClass::CosPiOverM(m));
        }
    }
    if gamma >= 1.0 - eps {
        return Ok(GammaClass::AtLeastOne);
    }
    let p = p_sequence(gamma, n_max + 1);
    for n in 1..=n_max as i64 {
        if p_at(&p, n) * p_at(&p, n + 1) < -eps {
            return Ok(GammaClass::Fails(n as usize));
        }
    }
    Err(Error::Inconclusive(gamma))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DihedralParams {
    pub gamma: f64,
    pub q: f64,
    pub x: f64,
}

impl DihedralParams {
    pub fn new(gamma: f64, q: f64, x: f64) -> Result<Self> {
        if !(q > 0.0) || !q.is_finite() {
            return Err(Error::InvalidParams(format!("q must be positive, got {q}")));
        }
        if x == 0.0 || !x.is_finite() {
            return Err(Error::InvalidParams(
                "X must be a nonzero finite scalar".into(),
            ));
        }
        if !gamma.is_finite() {
            return Err(Error::InvalidParams("gamma must be finite".into()));
        }
        Ok(Self { gamma, q, x })
    }

    /// The reflection specialisation `q = 1, X = 1`.
    pub fn reflections(gamma: f64) -> Self {
        Self {
            gamma,
            q: 1.0,
            x: 1.0,
        }
    }
}

pub fn dihedral_matrices(params: &DihedralParams) -> (Matrix2<f64>, Matrix2<f64>) {
    let DihedralParams { gamma, q, x } = *params;
    let c = 2.0 * gamma * q.sqrt();
    let a = Matrix2::new(-1.0, c * x, 0.0, q);
    let b = Matrix2::new(q, 0.0, c / x, -1.0);
    (a, b)
}

/// The four product shapes with closed forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProductKind {
    /// `B (AB)^n`
    BAbN,
    /// `A (BA)^n`
    ABaN,
    /// `(BA)^n`
    BaN,
    /// `(AB)^n`
    AbN,
}

impl ProductKind {
    pub const ALL: [ProductKind; 4] = [
        ProductKind::BAbN,
        ProductKind::ABaN,
        ProductKind::BaN,
        ProductKind::AbN,
    ];
}

/// Literal product of the requested shape alongside its closed form.
pub fn power_product(
    params: &DihedralParams,
    kind: ProductKind,
    n: u32,
) -> (Matrix2<f64>, Matrix2<f64>) {
    let (a, b) = dihedral_matrices(params);
    let ab = a * b;
    let ba = b * a;
    let pow = |m: Matrix2<f64>| (0..n).fold(Matrix2::identity(), |acc, _| acc * m);
    let computed = match kind {
        ProductKind::BAbN => b * pow(ab),
        ProductKind::ABaN => a * pow(ba),
        ProductKind::BaN => pow(ba),
        ProductKind::AbN => pow(ab),
    };

    let DihedralParams { gamma, q, x } = *params;
    let seq = p_sequence(gamma, 2 * n as usize + 2);
    let p = |k: i64| p_at(&seq, k);
    let n = n as i64;
    let nf = n as f64;
    let qp = |e: f64| q.powf(e);
    let predicted = match kind {
        ProductKind::BAbN => Matrix2::new(
            qp(nf + 1.0) * p(2 * n + 1),
            -qp(nf + 0.5) * p(2 * n) * x,
            qp(nf + 0.5) * p(2 * n + 2) / x,
            -qp(nf) * p(2 * n + 1),
        ),
        ProductKind::ABaN => Matrix2::new(
            -qp(nf) * p(2 * n + 1),
            qp(nf + 0.5) * p(2 * n + 2) * x,
            -qp(nf + 0.5) * p(2 * n) / x,
            qp(nf + 1.0) * p(2 * n + 1),
        ),
        ProductKind::BaN => Matrix2::new(
            -qp(nf) * p(2 * n - 1),
            qp(nf + 0.5) * p(2 * n) * x,
            -qp(nf - 0.5) * p(2 * n) / x,
            qp(nf) * p(2 * n + 1),
        ),
        ProductKind::AbN => Matrix2::new(
            qp(nf) * p(2 * n + 1),
            -qp(nf - 0.5) * p(2 * n) * x,
            qp(nf + 0.5) * p(2 * n) / x,
            -qp(nf) * p(2 * n - 1),
        ),
    };
    (computed, predicted)
}

/// `|a - b| <= tol * max(1, |b|_max)` entrywise.
pub fn matrices_close(a: &Matrix2<f64>, b: &Matrix2<f64>, tol: f64) -> bool {
    let scale = b.amax().max(1.0);
    a.iter()
        .zip(b.iter())
        .all(|(u, v)| (u - v).abs() <= tol * scale)
}

/// Alternating product with `m` factors starting from `first`.
fn alternating(first: &Matrix2<f64>, second: &Matrix2<f64>, m: u32) -> Matrix2<f64> {
    (0..m).fold(Matrix2::identity(), |acc, i| {
        acc * if i % 2 == 0 { first } else { second }
    })
}

/// Braid relation `ABA... = BAB...` (`m` factors each) at `gamma = cos(k pi / m)`.
pub fn braid_check(k: u32, m: u32, q: f64, x: f64) -> Result<bool> {
    if !(0 < k && k < m) {
        return Err(Error::InvalidParams(format!(
            "need 0 < k < m, got k = {k}, m = {m}"
        )));
    }
    let gamma = (k as f64 * PI / m as f64).cos();
    braid_check_gamma(gamma, m, q, x)
}

/// Braid relation with `m` factors each side at an arbitrary `gamma`.
pub fn braid_check_gamma(gamma: f64, m: u32, q: f64, x: f64) -> Result<bool> {
    let params = DihedralParams::new(gamma, q, x)?;
    let (a, b) = dihedral_matrices(&params);
    let lhs = alternating(&a, &b, m);
    let rhs = alternating(&b, &a, m);
    Ok(matrices_close(&lhs, &rhs, MATRIX_TOL))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum DihedralOrder {
    Finite(u32),
    Infinite,
    Inconclusive,
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// `Some((k, m))` when `gamma = cos(k pi / m)` within `eps` for coprime `0 < k < m <= m_max`.
pub fn match_cos_rational(gamma: f64, eps: f64, m_max: u32) -> Option<(u32, u32)> {
    if gamma.abs() > 1.0 + eps {
        return None;
    }
    let angle = gamma.clamp(-1.0, 1.0).acos() / PI;
    (2..=m_max).find_map(|m| {
        // cos is monotone on [0, pi], so only the neighbours of the nearest k can match
        let k0 = (angle * m as f64).round() as i64;
        (k0 - 1..=k0 + 1)
            .filter(|&k| k > 0 && k < m as i64)
            .map(|k| k as u32)
            .filter(|&k| gcd(k, m) == 1)
            .find(|&k| (gamma - (k as f64 * PI / m as f64).cos()).abs() <= eps)
            .map(|k| (k, m))
    })
}

/// Order of `AB` at `q = 1, X = 1`.
///
/// The rational-angle scan decides `Finite(m)`; the literal powers up to
/// `n_max` then either confirm it or, when no angle matched, rule out a cycle.
pub fn order_of_ab(gamma: f64, eps: f64, m_max: u32, n_max: u32) -> DihedralOrder {
    let (a, b) = dihedral_matrices(&DihedralParams::reflections(gamma));
    let ab = a * b;
    let identity = Matrix2::<f64>::identity();
    let scanned = match_cos_rational(gamma, eps, m_max);
    let mut power = identity;
    let mut first_hit = None;
    let bound = scanned.map_or(n_max, |(_, m)| m.max(n_max));
    for n in 1..=bound {
        power *= ab;
        if power.amax() > BLOWUP || power.iter().any(|v| !v.is_finite()) {
            break;
        }
        if matrices_close(&power, &identity, 1e-6) {
            first_hit = Some(n);
            break;
        }
    }
    match (scanned, first_hit) {
        (Some((_, m)), Some(n)) if n == m => DihedralOrder::Finite(m),
        (None, None) => DihedralOrder::Infinite,
        _ => DihedralOrder::Inconclusive,
    }
}

/// Largest relative deviation between the recurrence and the closed form for `n <= n_max`.
pub fn recurrence_deviation(gamma: f64, n_max: usize) -> f64 {
    let seq = p_sequence(gamma, n_max);
    (-1..=n_max as i64)
        .map(|n| {
            let rec = p_at(&seq, n);
            let closed = p_closed_form(gamma, n);
            (rec - closed).abs() / rec.abs().max(1.0)
        })
        .fold(0.0, f64::max)
}
