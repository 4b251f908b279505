//! Coxeter data: pairing matrices, optional ambient embeddings, and the
//! conditions that make the generated group a Coxeter group.
//!
//! A datum is stored as an `n x n` pairing matrix `C[s][t] = <alpha_s, beta_t>`.
//! Without an embedding the simple roots are the unit coordinate vectors of
//! `V1 = V2 = R^n` and the pairing *is* the ambient form. With an embedding the
//! simple roots are rows of `alpha` / `beta` in ambient coordinates and the
//! pairing is recovered as `alpha * form * beta^T`.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cone::cone_membership;
use crate::error::{Error, Result};
use crate::linalg::{Matrix, Vector};
use crate::roots::RootPair;

/// Default tolerance for all scalar comparisons.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Largest `m` tried when recognising `cos^2(pi/m)`.
pub const M_MAX: u32 = 360;

/// An entry of a Coxeter matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Order {
    Finite(u32),
    Infinite,
}

impl Order {
    /// File encoding: `0` stands for infinity.
    pub fn from_int(v: u32) -> Self {
        if v == 0 {
            Order::Infinite
        } else {
            Order::Finite(v)
        }
    }

    pub fn to_int(self) -> u32 {
        match self {
            Order::Finite(m) => m,
            Order::Infinite => 0,
        }
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(m) => write!(f, "{m}"),
            Order::Infinite => write!(f, "inf"),
        }
    }
}

/// Square matrix of bond orders with `1` on the diagonal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoxeterMatrix {
    entries: Vec<Vec<Order>>,
}

impl CoxeterMatrix {
    /// Builds a matrix from integer rows, `0` meaning infinity. No validation
    /// beyond squareness happens here; see [`from_coxeter_matrix`].
    pub fn from_rows(rows: Vec<Vec<u32>>) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Shape("coxeter matrix must be square".into()));
        }
        Ok(Self {
            entries: rows
                .into_iter()
                .map(|r| r.into_iter().map(Order::from_int).collect())
                .collect(),
        })
    }

    pub fn from_orders(entries: Vec<Vec<Order>>) -> Result<Self> {
        let n = entries.len();
        if entries.iter().any(|r| r.len() != n) {
            return Err(Error::Shape("coxeter matrix must be square".into()));
        }
        Ok(Self { entries })
    }

    pub fn rank(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, s: usize, t: usize) -> Order {
        self.entries[s][t]
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        self.entries
            .iter()
            .map(|r| r.iter().map(|o| o.to_int()).collect())
            .collect()
    }
}

impl fmt::Display for CoxeterMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.entries {
            let cells: Vec<String> = row.iter().map(|o| o.to_string()).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// Classification of the product `<alpha_s, beta_t><alpha_t, beta_s>`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum BondLabel {
    Finite(u32),
    Infinite,
    Invalid(f64),
}

impl BondLabel {
    pub fn order(self) -> Option<Order> {
        match self {
            BondLabel::Finite(m) => Some(Order::Finite(m)),
            BondLabel::Infinite => Some(Order::Infinite),
            BondLabel::Invalid(_) => None,
        }
    }
}

/// Recognises the bond order from the two off-diagonal pairing values.
///
/// Returns the smallest `m` in `2..=m_max` with `|c_st c_ts - cos^2(pi/m)| <= eps`,
/// `Infinite` when the product is at least `1 - eps`, and `Invalid` otherwise.
pub fn bond_order(c_st: f64, c_ts: f64, eps: f64, m_max: u32) -> Result<BondLabel> {
    let product = c_st * c_ts;
    if product < -eps {
        return Err(Error::NegativeProduct(product));
    }
    for m in 2..=m_max.max(2) {
        let c = (PI / m as f64).cos();
        if (product - c * c).abs() <= eps {
            return Ok(BondLabel::Finite(m));
        }
    }
    if product >= 1.0 - eps {
        return Ok(BondLabel::Infinite);
    }
    Ok(BondLabel::Invalid(product))
}

/// Ambient coordinates of the simple roots and the form between the ambient spaces.
#[derive(Debug, Clone, PartialEq)]
pub struct Embedding {
    /// `n x d1`, row `s` is `alpha_s`.
    pub alpha: Matrix,
    /// `n x d2`, row `s` is `beta_s`.
    pub beta: Matrix,
    /// `d1 x d2`.
    pub form: Matrix,
}

#[derive(Debug, Clone)]
pub struct CoxeterDatum {
    labels: Vec<String>,
    pairing: Matrix,
    embedding: Option<Embedding>,
    tolerance: f64,
    simple1: Vec<Vector>,
    simple2: Vec<Vector>,
    form: Matrix,
    gens1: Vec<Matrix>,
    gens2: Vec<Matrix>,
}

fn default_labels(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("s{i}")).collect()
}

fn matrix_from_rows(rows: &[Vec<f64>], what: &str) -> Result<Matrix> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, |r| r.len());
    if rows.iter().any(|r| r.len() != ncols) {
        return Err(Error::Shape(format!("{what}: ragged rows")));
    }
    Ok(Matrix::from_fn(nrows, ncols, |i, j| rows[i][j]))
}

fn matrix_to_rows(m: &Matrix) -> Vec<Vec<f64>> {
    (0..m.nrows())
        .map(|i| m.row(i).iter().copied().collect())
        .collect()
}

impl CoxeterDatum {
    /// Standard-mode datum: simple roots are coordinate vectors.
    pub fn new(labels: Vec<String>, pairing: Matrix) -> Result<Self> {
        Self::build(labels, pairing, None, DEFAULT_TOLERANCE)
    }

    pub fn from_pairing_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let pairing = matrix_from_rows(rows, "pairing")?;
        Self::new(default_labels(rows.len()), pairing)
    }

    pub fn with_embedding(
        labels: Vec<String>,
        pairing: Matrix,
        embedding: Embedding,
    ) -> Result<Self> {
        Self::build(labels, pairing, Some(embedding), DEFAULT_TOLERANCE)
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Result<Self> {
        if !(tolerance > 0.0) {
            return Err(Error::Shape("tolerance must be positive".into()));
        }
        self.tolerance = tolerance;
        Ok(self)
    }

    fn build(
        labels: Vec<String>,
        pairing: Matrix,
        embedding: Option<Embedding>,
        tolerance: f64,
    ) -> Result<Self> {
        let n = pairing.nrows();
        if n == 0 || !pairing.is_square() {
            return Err(Error::Shape(
                "pairing must be a non-empty square matrix".into(),
            ));
        }
        if labels.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: labels.len(),
            });
        }
        if pairing.iter().any(|v| !v.is_finite()) {
            return Err(Error::Shape("pairing entries must be finite".into()));
        }
        let (simple1, simple2, form) = match &embedding {
            None => {
                let basis: Vec<Vector> = (0..n)
                    .map(|s| Vector::from_fn(n, |i, _| (i == s) as u8 as f64))
                    .collect();
                (basis.clone(), basis, pairing.clone())
            }
            Some(e) => {
                if e.alpha.nrows() != n || e.beta.nrows() != n {
                    return Err(Error::Shape("embedding needs one row per generator".into()));
                }
                if e.form.nrows() != e.alpha.ncols() || e.form.ncols() != e.beta.ncols() {
                    return Err(Error::Shape(
                        "ambient form shape does not match root coordinates".into(),
                    ));
                }
                let induced = &e.alpha * &e.form * e.beta.transpose();
                for s in 0..n {
                    for t in 0..n {
                        if (induced[(s, t)] - pairing[(s, t)]).abs() > tolerance {
                            return Err(Error::Shape(format!(
                                "embedding induces pairing {} at ({s}, {t}) but {} was given",
                                induced[(s, t)],
                                pairing[(s, t)]
                            )));
                        }
                    }
                }
                let s1 = (0..n).map(|s| e.alpha.row(s).transpose()).collect();
                let s2 = (0..n).map(|s| e.beta.row(s).transpose()).collect();
                (s1, s2, e.form.clone())
            }
        };
        let d1 = form.nrows();
        let d2 = form.ncols();
        let gens1 = (0..n)
            .map(|s| {
                let fb = &form * &simple2[s];
                Matrix::identity(d1, d1) - 2.0 * &simple1[s] * fb.transpose()
            })
            .collect();
        let gens2 = (0..n)
            .map(|s| {
                let fa = form.transpose() * &simple1[s];
                Matrix::identity(d2, d2) - 2.0 * &simple2[s] * fa.transpose()
            })
            .collect();
        Ok(Self {
            labels,
            pairing,
            embedding,
            tolerance,
            simple1,
            simple2,
            form,
            gens1,
            gens2,
        })
    }

    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn pairing(&self) -> &Matrix {
        &self.pairing
    }

    pub fn embedding(&self) -> Option<&Embedding> {
        self.embedding.as_ref()
    }

    pub fn is_standard(&self) -> bool {
        self.embedding.is_none()
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    /// Dimension of `V1` coordinates.
    pub fn dim1(&self) -> usize {
        self.form.nrows()
    }

    /// Dimension of `V2` coordinates.
    pub fn dim2(&self) -> usize {
        self.form.ncols()
    }

    /// Matrix of the bilinear form on the coordinate spaces.
    pub fn form(&self) -> &Matrix {
        &self.form
    }

    pub fn alpha(&self, s: usize) -> &Vector {
        &self.simple1[s]
    }

    pub fn beta(&self, s: usize) -> &Vector {
        &self.simple2[s]
    }

    pub fn simple_roots(&self, side: crate::roots::Side) -> &[Vector] {
        match side {
            crate::roots::Side::One => &self.simple1,
            crate::roots::Side::Two => &self.simple2,
        }
    }

    /// Matrix of `rho_1(s)` on `V1` coordinates.
    pub fn reflection1(&self, s: usize) -> &Matrix {
        &self.gens1[s]
    }

    /// Matrix of `rho_2(s)` on `V2` coordinates.
    pub fn reflection2(&self, s: usize) -> &Matrix {
        &self.gens2[s]
    }

    pub fn generator_index(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownGenerator(label.to_string()))
    }

    pub(crate) fn check_generator(&self, s: usize) -> Result<()> {
        if s < self.rank() {
            Ok(())
        } else {
            Err(Error::UnknownGenerator(s.to_string()))
        }
    }

    pub fn to_file(&self) -> DatumFile {
        DatumFile {
            generators: self.labels.clone(),
            pairing: matrix_to_rows(&self.pairing),
            embedding: self.embedding.as_ref().map(|e| EmbeddingFile {
                alpha: matrix_to_rows(&e.alpha),
                beta: matrix_to_rows(&e.beta),
                form: matrix_to_rows(&e.form),
            }),
            tolerance: Some(self.tolerance),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("datum serialises")
    }

    /// Parses either a datum file or a Coxeter-matrix file.
    pub fn from_json_str(text: &str) -> Result<Self> {
        let value: serde_json::Value = serde_json::from_str(text)?;
        if value.get("coxeter_matrix").is_some() {
            let file: CoxeterMatrixFile = serde_json::from_value(value)?;
            let m = CoxeterMatrix::from_rows(file.coxeter_matrix)?;
            return from_coxeter_matrix(&m);
        }
        let file: DatumFile = serde_json::from_value(value)?;
        file.into_datum()
    }
}

/// JSON datum file.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatumFile {
    pub generators: Vec<String>,
    pub pairing: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub embedding: Option<EmbeddingFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EmbeddingFile {
    pub alpha: Vec<Vec<f64>>,
    pub beta: Vec<Vec<f64>>,
    pub form: Vec<Vec<f64>>,
}

/// JSON Coxeter-matrix file; `0` encodes infinity.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoxeterMatrixFile {
    pub coxeter_matrix: Vec<Vec<u32>>,
}

impl DatumFile {
    pub fn into_datum(self) -> Result<CoxeterDatum> {
        let pairing = matrix_from_rows(&self.pairing, "pairing")?;
        let embedding = match self.embedding {
            None => None,
            Some(e) => Some(Embedding {
                alpha: matrix_from_rows(&e.alpha, "alpha")?,
                beta: matrix_from_rows(&e.beta, "beta")?,
                form: matrix_from_rows(&e.form, "form")?,
            }),
        };
        let tolerance = self.tolerance.unwrap_or(DEFAULT_TOLERANCE);
        if !(tolerance > 0.0) {
            return Err(Error::Shape("tolerance must be positive".into()));
        }
        CoxeterDatum::build(self.generators, pairing, embedding, tolerance)
    }
}

/// The Tits-style datum `C[s][t] = -cos(pi / m_st)`, with `-1` for infinite bonds.
pub fn from_coxeter_matrix(m: &CoxeterMatrix) -> Result<CoxeterDatum> {
    let n = m.rank();
    if n == 0 {
        return Err(Error::Shape("empty coxeter matrix".into()));
    }
    for s in 0..n {
        if m.get(s, s) != Order::Finite(1) {
            return Err(Error::BadDiagonal(s));
        }
        for t in 0..n {
            if m.get(s, t) != m.get(t, s) {
                return Err(Error::NonSymmetric(s, t));
            }
            if s != t {
                if let Order::Finite(v) = m.get(s, t) {
                    if v < 2 {
                        return Err(Error::EntryOutOfRange {
                            row: s,
                            col: t,
                            value: v,
                        });
                    }
                }
            }
        }
    }
    let pairing = Matrix::from_fn(n, n, |s, t| {
        if s == t {
            1.0
        } else {
            match m.get(s, t) {
                // cos(pi/2) is not exactly zero in floating point
                Order::Finite(2) => 0.0,
                Order::Finite(v) => -(PI / v as f64).cos(),
                Order::Infinite => -1.0,
            }
        }
    });
    CoxeterDatum::new(default_labels(n), pairing)
}

/// Outcome of checking one condition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    /// Holds by construction of standard mode; not decidable from the pairing alone.
    Assumed,
    Fail {
        s: usize,
        t: usize,
        value: f64,
        detail: String,
    },
}

impl Verdict {
    pub fn is_ok(&self) -> bool {
        !matches!(self, Verdict::Fail { .. })
    }

    fn fail(s: usize, t: usize, value: f64, detail: impl Into<String>) -> Self {
        Verdict::Fail {
            s,
            t,
            value,
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub d1: Verdict,
    pub d2_i: Verdict,
    pub d2_ii: Verdict,
    pub d3: Verdict,
    pub d4: Verdict,
    pub d5: Verdict,
}

impl ValidationReport {
    /// True when every condition passes or is assumed.
    pub fn passed(&self) -> bool {
        self.verdicts().iter().all(|(_, v)| v.is_ok())
    }

    pub fn verdicts(&self) -> [(&'static str, &Verdict); 6] {
        [
            ("D1", &self.d1),
            ("D2(i)", &self.d2_i),
            ("D2(ii)", &self.d2_ii),
            ("D3", &self.d3),
            ("D4", &self.d4),
            ("D5", &self.d5),
        ]
    }

    pub fn failures(&self) -> Vec<&'static str> {
        self.verdicts()
            .iter()
            .filter(|(_, v)| !v.is_ok())
            .map(|(name, _)| *name)
            .collect()
    }
}

pub fn validate(datum: &CoxeterDatum) -> ValidationReport {
    validate_with(datum, M_MAX)
}

pub fn validate_with(datum: &CoxeterDatum, m_max: u32) -> ValidationReport {
    let n = datum.rank();
    let c = datum.pairing();
    let eps = datum.tolerance();

    let d1 = (0..n)
        .find(|&s| (c[(s, s)] - 1.0).abs() > eps)
        .map_or(Verdict::Pass, |s| {
            Verdict::fail(s, s, c[(s, s)], "diagonal pairing is not 1")
        });

    let (d2_i, d2_ii) = match datum.embedding() {
        None => (Verdict::Assumed, Verdict::Assumed),
        Some(_) => check_d2(datum),
    };

    let mut d3 = Verdict::Pass;
    let mut d4 = Verdict::Pass;
    let mut d5 = Verdict::Pass;
    for s in 0..n {
        for t in 0..n {
            if s == t {
                continue;
            }
            if d3.is_ok() && c[(s, t)] > eps {
                d3 = Verdict::fail(s, t, c[(s, t)], "off-diagonal pairing is positive");
            }
            if d4.is_ok() && ((c[(s, t)].abs() <= eps) != (c[(t, s)].abs() <= eps)) {
                d4 = Verdict::fail(
                    s,
                    t,
                    c[(s, t)],
                    "zero pattern of the pairing is not symmetric",
                );
            }
            if d5.is_ok() && s < t {
                match bond_order(c[(s, t)], c[(t, s)], eps, m_max) {
                    Ok(BondLabel::Invalid(p)) => {
                        d5 = Verdict::fail(s, t, p, "product is neither cos^2(pi/m) nor >= 1")
                    }
                    Err(Error::NegativeProduct(p)) => {
                        d5 = Verdict::fail(s, t, p, "product is negative")
                    }
                    _ => {}
                }
            }
        }
    }
    ValidationReport {
        d1,
        d2_i,
        d2_ii,
        d3,
        d4,
        d5,
    }
}

fn check_d2(datum: &CoxeterDatum) -> (Verdict, Verdict) {
    use crate::roots::Side;
    let eps = datum.tolerance();
    let n = datum.rank();
    let mut d2_i = Verdict::Pass;
    let mut d2_ii = Verdict::Pass;
    for (k, side) in [Side::One, Side::Two].into_iter().enumerate() {
        let simple = datum.simple_roots(side);
        let zero = Vector::zeros(simple[0].len());
        if d2_i.is_ok() && cone_membership(simple, &zero, eps) {
            d2_i = Verdict::fail(
                k + 1,
                k + 1,
                0.0,
                format!("0 lies in the positive cone of Pi_{}", k + 1),
            );
        }
        for s in 0..n {
            if !d2_ii.is_ok() {
                break;
            }
            let others: Vec<Vector> = (0..n)
                .filter(|&t| t != s)
                .map(|t| simple[t].clone())
                .collect();
            if !others.is_empty() && cone_membership(&others, &simple[s], eps) {
                d2_ii = Verdict::fail(
                    s,
                    s,
                    (k + 1) as f64,
                    format!(
                        "simple root {s} of side {} lies in the cone of the others",
                        k + 1
                    ),
                );
            }
        }
    }
    (d2_i, d2_ii)
}

/// Bond orders of a datum that passes [`validate`].
pub fn coxeter_matrix_of(datum: &CoxeterDatum) -> Result<CoxeterMatrix> {
    let report = validate(datum);
    if !report.passed() {
        return Err(Error::InvalidDatum(report.failures().join(", ")));
    }
    let n = datum.rank();
    let c = datum.pairing();
    let mut rows = vec![vec![Order::Finite(1); n]; n];
    for s in 0..n {
        for t in 0..n {
            if s != t {
                let label = bond_order(c[(s, t)], c[(t, s)], datum.tolerance(), M_MAX)?;
                rows[s][t] = label
                    .order()
                    .ok_or_else(|| Error::InvalidDatum(format!("bond ({s}, {t})")))?;
            }
        }
    }
    CoxeterMatrix::from_orders(rows)
}

/// The datum whose simple roots are `delta1` (and their partners), expressed in
/// the parent's coordinates.
pub fn induced_datum(parent: &CoxeterDatum, delta1: &[RootPair]) -> Result<CoxeterDatum> {
    if delta1.is_empty() {
        return Err(Error::Shape("induced datum needs at least one root".into()));
    }
    let eps = parent.tolerance();
    for i in 0..delta1.len() {
        for j in (i + 1)..delta1.len() {
            if crate::roots::proportional(&delta1[i].x, &delta1[j].x, eps) {
                return Err(Error::DuplicateReflection(i, j));
            }
        }
    }
    let k = delta1.len();
    let form = parent.form().clone();
    let alpha = Matrix::from_fn(k, parent.dim1(), |i, j| delta1[i].x[j]);
    let beta = Matrix::from_fn(k, parent.dim2(), |i, j| delta1[i].y[j]);
    let pairing = &alpha * &form * beta.transpose();
    let labels = (1..=k).map(|i| format!("x{i}")).collect();
    CoxeterDatum::build(labels, pairing, Some(Embedding { alpha, beta, form }), eps)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cm(rows: Vec<Vec<u32>>) -> CoxeterMatrix {
        CoxeterMatrix::from_rows(rows).unwrap()
    }

    #[test]
    fn tits_pairings() {
        let a2 = from_coxeter_matrix(&cm(vec![vec![1, 3], vec![3, 1]])).unwrap();
        assert!((a2.pairing()[(0, 1)] + 0.5).abs() < 1e-15);
        let inf = from_coxeter_matrix(&cm(vec![vec![1, 0], vec![0, 1]])).unwrap();
        assert_eq!(inf.pairing()[(0, 1)], -1.0);
        let a1a1 = from_coxeter_matrix(&cm(vec![vec![1, 2], vec![2, 1]])).unwrap();
        assert_eq!(a1a1.pairing()[(1, 0)], 0.0);
    }

    #[test]
    fn coxeter_matrix_errors() {
        assert!(matches!(
            from_coxeter_matrix(&cm(vec![vec![1, 3], vec![4, 1]])),
            Err(Error::NonSymmetric(..))
        ));
        assert!(matches!(
            from_coxeter_matrix(&cm(vec![vec![2, 3], vec![3, 1]])),
            Err(Error::BadDiagonal(0))
        ));
        assert!(matches!(
            from_coxeter_matrix(&cm(vec![vec![1, 1], vec![1, 1]])),
            Err(Error::EntryOutOfRange { value: 1, .. })
        ));
    }

    #[test]
    fn bond_order_examples() {
        let eps = DEFAULT_TOLERANCE;
        assert_eq!(
            bond_order(-0.5, -0.5, eps, M_MAX).unwrap(),
            BondLabel::Finite(3)
        );
        assert_eq!(
            bond_order(0.0, 0.0, eps, M_MAX).unwrap(),
            BondLabel::Finite(2)
        );
        assert_eq!(
            bond_order(-1.0, -0.25, eps, M_MAX).unwrap(),
            BondLabel::Finite(3)
        );
        assert_eq!(
            bond_order(-1.0, -1.0, eps, M_MAX).unwrap(),
            BondLabel::Infinite
        );
        assert_eq!(
            bond_order(-2.0, -1.0, eps, M_MAX).unwrap(),
            BondLabel::Infinite
        );
        match bond_order(-0.6, -0.5, eps, M_MAX).unwrap() {
            BondLabel::Invalid(p) => assert!((p - 0.3).abs() < 1e-15),
            other => panic!("expected invalid, got {other:?}"),
        }
        assert!(matches!(
            bond_order(0.5, -0.5, eps, M_MAX),
            Err(Error::NegativeProduct(_))
        ));
    }

    #[test]
    fn bond_order_is_symmetric() {
        for &(a, b) in &[
            (-0.3, -0.9),
            (-1.0, -0.25),
            (-0.6, -0.5),
            (0.0, 0.0),
            (-2.0, -0.7),
        ] {
            assert_eq!(
                bond_order(a, b, DEFAULT_TOLERANCE, M_MAX).unwrap(),
                bond_order(b, a, DEFAULT_TOLERANCE, M_MAX).unwrap()
            );
        }
    }

    #[test]
    fn validation_examples() {
        let a2 = from_coxeter_matrix(&cm(vec![vec![1, 3], vec![3, 1]])).unwrap();
        let r = validate(&a2);
        assert!(r.passed());
        assert_eq!(r.d2_i, Verdict::Assumed);
        assert_eq!(r.d3, Verdict::Pass);

        let bad = CoxeterDatum::from_pairing_rows(&[vec![1.0, 0.5], vec![-0.5, 1.0]]).unwrap();
        let r = validate(&bad);
        assert!(matches!(r.d3, Verdict::Fail { s: 0, t: 1, .. }));
        // both off-diagonal entries are nonzero, so the zero pattern is consistent
        assert!(r.d4.is_ok());
        assert!(!r.d5.is_ok());
        assert!(!r.passed());

        let d5 = CoxeterDatum::from_pairing_rows(&[vec![1.0, -0.6], vec![-0.5, 1.0]]).unwrap();
        let r = validate(&d5);
        assert!(r.d3.is_ok() && r.d4.is_ok());
        match r.d5 {
            Verdict::Fail { value, .. } => assert!((value - 0.3).abs() < 1e-12),
            other => panic!("{other:?}"),
        }

        let d4 = CoxeterDatum::from_pairing_rows(&[vec![1.0, 0.0], vec![-0.5, 1.0]]).unwrap();
        let r = validate(&d4);
        assert!(matches!(r.d4, Verdict::Fail { .. }));
        assert!(r.d3.is_ok() && r.d5.is_ok());

        let d1 = CoxeterDatum::from_pairing_rows(&[vec![2.0, 0.0], vec![0.0, 1.0]]).unwrap();
        assert!(matches!(validate(&d1).d1, Verdict::Fail { s: 0, t: 0, .. }));
    }

    #[test]
    fn coxeter_matrix_recovery() {
        let a2 = from_coxeter_matrix(&cm(vec![vec![1, 3], vec![3, 1]])).unwrap();
        assert_eq!(
            coxeter_matrix_of(&a2).unwrap().to_rows(),
            vec![vec![1, 3], vec![3, 1]]
        );
        let asym = CoxeterDatum::from_pairing_rows(&[vec![1.0, -1.0], vec![-0.25, 1.0]]).unwrap();
        assert_eq!(
            coxeter_matrix_of(&asym).unwrap().to_rows(),
            vec![vec![1, 3], vec![3, 1]]
        );
        let inf = from_coxeter_matrix(&cm(vec![vec![1, 0], vec![0, 1]])).unwrap();
        assert_eq!(coxeter_matrix_of(&inf).unwrap().get(0, 1), Order::Infinite);
        let bad = CoxeterDatum::from_pairing_rows(&[vec![1.0, -0.6], vec![-0.5, 1.0]]).unwrap();
        assert!(matches!(
            coxeter_matrix_of(&bad),
            Err(Error::InvalidDatum(_))
        ));
    }

    #[test]
    fn embedding_must_match_pairing() {
        let alpha = Matrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 1.0]);
        let form = Matrix::from_row_slice(2, 2, &[1.0, -0.5, -0.5, 1.0]);
        let good = CoxeterDatum::with_embedding(
            default_labels(2),
            form.clone(),
            Embedding {
                alpha: alpha.clone(),
                beta: alpha.clone(),
                form: form.clone(),
            },
        );
        assert!(good.is_ok());
        let wrong = Matrix::from_row_slice(2, 2, &[1.0, -0.4, -0.5, 1.0]);
        let bad = CoxeterDatum::with_embedding(
            default_labels(2),
            wrong,
            Embedding {
                alpha: alpha.clone(),
                beta: alpha,
                form,
            },
        );
        assert!(matches!(bad, Err(Error::Shape(_))));
    }

    #[test]
    fn embedded_d2_detects_dependent_cone() {
        // alpha_3 = alpha_1 + alpha_2 lies in the cone of the other two
        let alpha = Matrix::from_row_slice(3, 2, &[1.0, 0.0, 0.0, 1.0, 1.0, 1.0]);
        let form = Matrix::identity(2, 2);
        let pairing = &alpha * &form * alpha.transpose();
        let d = CoxeterDatum::with_embedding(
            default_labels(3),
            pairing,
            Embedding {
                alpha: alpha.clone(),
                beta: alpha,
                form,
            },
        )
        .unwrap();
        let r = validate(&d);
        assert!(r.d2_i.is_ok());
        assert!(matches!(r.d2_ii, Verdict::Fail { s: 2, .. }));
    }

    #[test]
    fn json_round_trip_and_matrix_format() {
        let text =
            r#"{"generators": ["a", "b"], "pairing": [[1, -1], [-0.25, 1]], "tolerance": 1e-8}"#;
        let d = CoxeterDatum::from_json_str(text).unwrap();
        assert_eq!(d.labels(), &["a".to_string(), "b".to_string()]);
        assert_eq!(d.tolerance(), 1e-8);
        let again = CoxeterDatum::from_json_str(&d.to_json()).unwrap();
        assert_eq!(again.pairing(), d.pairing());

        let m = CoxeterDatum::from_json_str(r#"{"coxeter_matrix": [[1, 0], [0, 1]]}"#).unwrap();
        assert_eq!(m.pairing()[(0, 1)], -1.0);
        assert!(CoxeterDatum::from_json_str(r#"{"generators": ["a"], "pairing": [[1"#).is_err());
    }
}
