//! Independent reference computations used by the integration tests.
//!
//! Nothing here calls into the library's numerical code: matrices, orbits and
//! closed forms are rebuilt from the pairing matrix directly.
#![allow(dead_code)]

use std::collections::HashSet;
use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector, Matrix2};

/// `p_{-1}, p_0, ..., p_{n_max}` by plain iteration.
pub fn p_values(gamma: f64, n_max: usize) -> Vec<f64> {
    let mut p = vec![-1.0, 0.0];
    for n in 0..n_max {
        let next = 2.0 * gamma * p[n + 1] - p[n];
        p.push(next);
    }
    p.truncate(n_max + 2);
    p
}

/// `p_n` read from [`p_values`], `n >= -1`.
pub fn p_at(p: &[f64], n: i64) -> f64 {
    p[(n + 1) as usize]
}

/// Closed form of `p_n`, written out case by case.
pub fn p_closed(gamma: f64, n: i64) -> f64 {
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
        // gamma < -1 reduces to |gamma| via p_n(-g) = (-1)^{n+1} p_n(g)
        let theta = gamma.abs().acosh();
        let v = (nf * theta).sinh() / theta.sinh();
        if gamma > 0.0 || n % 2 != 0 {
            v
        } else {
            -v
        }
    }
}

pub fn ab(gamma: f64, q: f64, x: f64) -> (Matrix2<f64>, Matrix2<f64>) {
    let r = q.sqrt();
    let a = Matrix2::new(-1.0, 2.0 * gamma * r * x, 0.0, q);
    let b = Matrix2::new(q, 0.0, 2.0 * gamma * r / x, -1.0);
    (a, b)
}

/// The four closed-form products, in the order `B(AB)^n, A(BA)^n, (BA)^n, (AB)^n`.
pub fn predicted_products(gamma: f64, q: f64, x: f64, n: i64) -> [Matrix2<f64>; 4] {
    let p = p_values(gamma, (2 * n + 3) as usize);
    let pp = |k: i64| p_at(&p, k);
    let qp = |e: f64| q.powf(e);
    let nf = n as f64;
    [
        Matrix2::new(
            qp(nf + 1.0) * pp(2 * n + 1),
            -qp(nf + 0.5) * pp(2 * n) * x,
            qp(nf + 0.5) * pp(2 * n + 2) / x,
            -qp(nf) * pp(2 * n + 1),
        ),
        Matrix2::new(
            -qp(nf) * pp(2 * n + 1),
            qp(nf + 0.5) * pp(2 * n + 2) * x,
            -qp(nf + 0.5) * pp(2 * n) / x,
            qp(nf + 1.0) * pp(2 * n + 1),
        ),
        Matrix2::new(
            -qp(nf) * pp(2 * n - 1),
            qp(nf + 0.5) * pp(2 * n) * x,
            -qp(nf - 0.5) * pp(2 * n) / x,
            qp(nf) * pp(2 * n + 1),
        ),
        Matrix2::new(
            qp(nf) * pp(2 * n + 1),
            -qp(nf - 0.5) * pp(2 * n) * x,
            qp(nf + 0.5) * pp(2 * n) / x,
            -qp(nf) * pp(2 * n - 1),
        ),
    ]
}

/// Literal products in the same order as [`predicted_products`].
pub fn literal_products(gamma: f64, q: f64, x: f64, n: u32) -> [Matrix2<f64>; 4] {
    let (a, b) = ab(gamma, q, x);
    let mut abn = Matrix2::identity();
    let mut ban = Matrix2::identity();
    for _ in 0..n {
        abn *= a * b;
        ban *= b * a;
    }
    [b * abn, a * ban, ban, abn]
}

/// `|a - b| <= tol * max(1, |b|_max)` entrywise.
pub fn close2(a: &Matrix2<f64>, b: &Matrix2<f64>, tol: f64) -> bool {
    let scale = b.amax().max(1.0);
    (a - b).iter().all(|d| d.abs() <= tol * scale)
}

/// Alternating product `first second first ...` with `m` factors.
pub fn alternating(first: &Matrix2<f64>, second: &Matrix2<f64>, m: u32) -> Matrix2<f64> {
    let mut out = Matrix2::identity();
    for i in 0..m {
        out *= if i % 2 == 0 { *first } else { *second };
    }
    out
}

/// First `n <= bound` with `(AB)^n = 1` at `q = X = 1`.
pub fn ab_order(gamma: f64, bound: u32) -> Option<u32> {
    let (a, b) = ab(gamma, 1.0, 1.0);
    let m = a * b;
    let mut power = Matrix2::<f64>::identity();
    for n in 1..=bound {
        power *= m;
        if !power.amax().is_finite() || power.amax() > 1e100 {
            return None;
        }
        if close2(&power, &Matrix2::identity(), 1e-6) {
            return Some(n);
        }
    }
    None
}

pub fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Tits pairing `-cos(pi / m)` of a Coxeter matrix, `0` meaning infinity.
pub fn tits_pairing(m: &[Vec<u32>]) -> DMatrix<f64> {
    let n = m.len();
    DMatrix::from_fn(n, n, |i, j| match m[i][j] {
        1 => 1.0,
        0 => -1.0,
        2 => 0.0,
        k => -(PI / k as f64).cos(),
    })
}

/// Coxeter matrices of the nine finite groups used throughout.
pub fn classical() -> Vec<(&'static str, Vec<Vec<u32>>, usize, usize)> {
    let path = |n: usize, last: u32| {
        let mut m = vec![vec![2u32; n]; n];
        for i in 0..n {
            m[i][i] = 1;
        }
        for i in 1..n {
            let b = if i == n - 1 { last } else { 3 };
            m[i - 1][i] = b;
            m[i][i - 1] = b;
        }
        m
    };
    let mut d4 = path(3, 3);
    for r in d4.iter_mut() {
        r.push(2);
    }
    d4.push(vec![2, 3, 2, 1]);
    d4[1][3] = 3;
    let mut h3 = path(3, 3);
    h3[0][1] = 5;
    h3[1][0] = 5;
    vec![
        ("A2", path(2, 3), 3, 6),
        ("A3", path(3, 3), 6, 24),
        ("A4", path(4, 3), 10, 120),
        ("B2", path(2, 4), 4, 8),
        ("B3", path(3, 4), 9, 48),
        ("B4", path(4, 4), 16, 384),
        ("D4", d4, 12, 192),
        ("H3", h3, 15, 120),
    ]
}

/// Side-1 reflection matrices `x -> x - 2 <x, beta_s> alpha_s` in simple-root coordinates.
pub fn reflections(c: &DMatrix<f64>) -> Vec<DMatrix<f64>> {
    let n = c.nrows();
    (0..n)
        .map(|s| {
            let mut m = DMatrix::identity(n, n);
            for j in 0..n {
                // column j is the image of alpha_j
                m[(s, j)] -= 2.0 * c[(j, s)];
            }
            m
        })
        .collect()
}

fn key(v: &[f64]) -> Vec<i64> {
    v.iter().map(|x| (x * 1e5).round() as i64).collect()
}

/// Size of the matrix group generated by the reflections, by closure.
pub fn group_order(c: &DMatrix<f64>, cap: usize) -> Option<usize> {
    let gens = reflections(c);
    let n = c.nrows();
    let id = DMatrix::<f64>::identity(n, n);
    let mut seen = HashSet::new();
    seen.insert(key(id.as_slice()));
    let mut frontier = vec![id];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for g in &frontier {
            for s in &gens {
                let h = g * s;
                if seen.insert(key(h.as_slice())) {
                    next.push(h);
                }
            }
        }
        if seen.len() > cap {
            return None;
        }
        frontier = next;
    }
    Some(seen.len())
}

/// Orbit of the simple roots; returns `(positive, total)` counts.
pub fn root_counts(c: &DMatrix<f64>, cap: usize) -> Option<(usize, usize)> {
    let gens = reflections(c);
    let n = c.nrows();
    let mut seen = HashSet::new();
    let mut roots = Vec::new();
    let mut frontier: Vec<DVector<f64>> = (0..n)
        .map(|s| {
            let mut e = DVector::zeros(n);
            e[s] = 1.0;
            e
        })
        .collect();
    for r in &frontier {
        seen.insert(key(r.as_slice()));
        roots.push(r.clone());
    }
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for r in &frontier {
            for s in &gens {
                let v = s * r;
                if seen.insert(key(v.as_slice())) {
                    roots.push(v.clone());
                    next.push(v);
                }
            }
        }
        if roots.len() > cap {
            return None;
        }
        frontier = next;
    }
    let positive = roots
        .iter()
        .filter(|r| r.iter().all(|&x| x > -1e-9))
        .count();
    Some((positive, roots.len()))
}
