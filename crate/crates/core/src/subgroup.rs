//! Reflection subgroups: root subsystems, canonical roots and their checks.
//!
//! A subgroup is described by seed roots of the parent. Its root subsystem is
//! the closure of the seed classes under mutual reflection, its elements are
//! enumerated in the parent's own coordinates, and its canonical roots are the
//! positive roots `x` whose reflection flips no other class of the subsystem.

use rand::seq::index::sample;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::datum::{bond_order, coxeter_matrix_of, induced_datum, BondLabel, CoxeterDatum, M_MAX};
use crate::error::{Error, Result};
use crate::group::{
    conjugates_of_generators, enumerate_generated, enumerate_group, equals, matrix_order, Element,
    Enumeration, ProductOrder, Reflection, DEFAULT_GROUP_CAP, IDENTITY_TOL,
};
use crate::linalg::{close_scaled, Matrix, VecIndex, Vector};
use crate::roots::{
    generate_roots, pairing_value, reflect_by_root, reflect_pair, root_class, shorten_witness,
    sign_of, ClassSet, RootPair, Side, SignClass, SignedRootSet, DEFAULT_ROOT_CAP,
};

/// Bounds for closure and element enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SubgroupCaps {
    /// Closure rounds before the subsystem is declared truncated.
    pub max_rounds: usize,
    /// Class count beyond which the subsystem is declared truncated.
    pub max_classes: usize,
    pub max_elements: usize,
    /// Word length bound used when the closure did not terminate.
    pub max_length: usize,
}

impl Default for SubgroupCaps {
    fn default() -> Self {
        Self {
            max_rounds: 32,
            max_classes: 256,
            max_elements: DEFAULT_GROUP_CAP,
            max_length: 8,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ReflectionSubgroup {
    parent: CoxeterDatum,
    generators: Vec<Reflection>,
    phi: Vec<RootPair>,
    phi_classes: ClassSet,
    elements: Enumeration,
    delta: Vec<RootPair>,
    closed: bool,
    caps: SubgroupCaps,
}

impl ReflectionSubgroup {
    pub fn parent(&self) -> &CoxeterDatum {
        &self.parent
    }

    pub fn generators(&self) -> &[Reflection] {
        &self.generators
    }

    /// Positive representatives of the root subsystem, one per class.
    pub fn phi(&self) -> &[RootPair] {
        &self.phi
    }

    pub fn phi_classes(&self) -> &ClassSet {
        &self.phi_classes
    }

    pub fn elements(&self) -> &Enumeration {
        &self.elements
    }

    /// Canonical roots on side 1; their partners give side 2.
    pub fn delta(&self) -> &[RootPair] {
        &self.delta
    }

    /// True when both the closure and the element enumeration terminated.
    pub fn complete(&self) -> bool {
        self.closed && self.elements.complete()
    }

    pub fn order(&self) -> Option<usize> {
        self.complete().then(|| self.elements.len())
    }

    pub fn contains(&self, e: &Element) -> bool {
        self.elements.index_of(e).is_some()
    }

    pub fn caps(&self) -> SubgroupCaps {
        self.caps
    }
}

fn positive_form(parent: &CoxeterDatum, p: &RootPair) -> RootPair {
    let p = if matches!(sign_of(parent, &p.x, Side::One), Ok(SignClass::Negative)) {
        p.negated()
    } else {
        p.clone()
    };
    shorten_witness(parent, &p)
}

/// The subgroup generated by the reflections of `seeds`.
pub fn subgroup_from_reflections(
    parent: &CoxeterDatum,
    seeds: &[RootPair],
    caps: &SubgroupCaps,
) -> Result<ReflectionSubgroup> {
    let eps = parent.tolerance();
    let mut phi: Vec<RootPair> = Vec::new();
    let mut index = VecIndex::new(1e-7);
    let mut generators = Vec::new();
    for seed in seeds {
        let p = positive_form(parent, seed);
        if index.insert(root_class(&p.x, eps)?.representative()).1 {
            generators.push(Reflection::from_root(parent, &p)?);
            phi.push(p);
        }
    }

    let mut closed = false;
    let mut start = 0;
    for _ in 0..caps.max_rounds {
        let known = phi.len();
        let mut fresh = Vec::new();
        for i in 0..known {
            for j in 0..known {
                if i < start && j < start {
                    continue;
                }
                let x = reflect_by_root(parent, &phi[i], &phi[j].x)?;
                if index.insert(root_class(&x, eps)?.representative()).1 {
                    fresh.push(positive_form(
                        parent,
                        &reflect_pair(parent, &phi[i], &phi[j])?,
                    ));
                }
            }
        }
        if fresh.is_empty() {
            closed = true;
            break;
        }
        start = known;
        phi.extend(fresh);
        if phi.len() > caps.max_classes {
            break;
        }
    }
    let classes: ClassSet = phi
        .iter()
        .map(|p| root_class(&p.x, eps))
        .collect::<Result<_>>()?;

    let identity = Element::identity(parent);
    let gens: Vec<Element> = generators.iter().map(|r| r.element.clone()).collect();
    let max_length = if closed { usize::MAX } else { caps.max_length };
    let elements = enumerate_generated(identity, &gens, max_length, caps.max_elements)?;

    let mut sg = ReflectionSubgroup {
        parent: parent.clone(),
        generators,
        phi,
        phi_classes: classes,
        elements,
        delta: Vec::new(),
        closed,
        caps: *caps,
    };
    sg.delta = canonical_roots(&sg);
    Ok(sg)
}

/// Sign of `r_x z` on side 1.
fn reflected_sign(parent: &CoxeterDatum, x: &RootPair, z: &Vector) -> SignClass {
    reflect_by_root(parent, x, z)
        .ok()
        .and_then(|v| sign_of(parent, &v, Side::One).ok())
        .unwrap_or(SignClass::Mixed)
}

/// Positive roots `x` of the subsystem with `N(r_x)` meeting the subsystem in `x` alone.
pub fn canonical_roots(sg: &ReflectionSubgroup) -> Vec<RootPair> {
    let parent = &sg.parent;
    sg.phi
        .iter()
        .enumerate()
        .filter(|(i, x)| {
            sg.phi
                .iter()
                .enumerate()
                .all(|(j, z)| (reflected_sign(parent, x, &z.x) == SignClass::Negative) == (*i == j))
        })
        .map(|(_, x)| x.clone())
        .collect()
}

/// `Phi(W')` read off the parent: positive classes whose reflection lies in the subgroup.
pub fn phi_of(sg: &ReflectionSubgroup, parent_roots: &SignedRootSet) -> Result<ClassSet> {
    if !parent_roots.complete() {
        return Err(Error::IncompleteParent);
    }
    if !sg.complete() {
        return Err(Error::InfiniteCase);
    }
    let mut out = ClassSet::new();
    for i in parent_roots.positive_representatives(Side::One) {
        let r = Element::reflection(&sg.parent, &parent_roots.pairs()[i])?;
        if sg.contains(&r) {
            out.insert(
                parent_roots
                    .class(parent_roots.class_of(i, Side::One), Side::One)
                    .clone(),
            );
        }
    }
    Ok(out)
}

/// A finite parent with its whole root system, group and reflection set.
#[derive(Debug, Clone)]
pub struct FiniteParent {
    datum: CoxeterDatum,
    roots: SignedRootSet,
    group: Enumeration,
    reflections: Vec<Reflection>,
}

impl FiniteParent {
    pub fn new(datum: &CoxeterDatum) -> Result<Self> {
        let roots = generate_roots(datum, usize::MAX, DEFAULT_ROOT_CAP);
        if !roots.complete() {
            return Err(Error::InfiniteCase);
        }
        let group = enumerate_group(datum, usize::MAX, DEFAULT_GROUP_CAP)?;
        let reflections = conjugates_of_generators(datum, &group)?;
        Ok(Self {
            datum: datum.clone(),
            roots,
            group,
            reflections,
        })
    }

    pub fn datum(&self) -> &CoxeterDatum {
        &self.datum
    }

    pub fn roots(&self) -> &SignedRootSet {
        &self.roots
    }

    pub fn group(&self) -> &Enumeration {
        &self.group
    }

    /// Every reflection of the parent, found by conjugating generators.
    pub fn reflections(&self) -> &[Reflection] {
        &self.reflections
    }

    /// Positive root pair of stored index `i`, with a short witness.
    pub fn positive_root(&self, i: usize) -> RootPair {
        self.roots.pairs()[i].clone()
    }

    /// Parent length from the Cayley-graph distances.
    pub fn length(&self, e: &Element) -> Option<usize> {
        self.group.distance(e)
    }
}

/// `S(W') = { t in T : Nbar(t) meets W' in t alone }`, with `Nbar(t) = { t' : l(t t') < l(t) }`.
///
/// Lengths come from the parent's Cayley graph, so no root signs are used.
pub fn canonical_generators_bruteforce(
    sg: &ReflectionSubgroup,
    parent: &FiniteParent,
) -> Result<Vec<Reflection>> {
    if !sg.complete() {
        return Err(Error::InfiniteCase);
    }
    let inside: Vec<&Reflection> = parent
        .reflections
        .iter()
        .filter(|t| sg.contains(&t.element))
        .collect();
    let mut out = Vec::new();
    for t in &inside {
        let lt = parent.length(&t.element).ok_or(Error::IncompleteParent)?;
        let mut below = Vec::new();
        for u in &inside {
            let ltu = parent
                .length(&t.element.mul(&u.element))
                .ok_or(Error::IncompleteParent)?;
            if ltu < lt {
                below.push(*u);
            }
        }
        if below.len() == 1 && equals(&below[0].element, &t.element, IDENTITY_TOL) {
            out.push((*t).clone());
        }
    }
    Ok(out)
}

/// Whether two lists describe the same set of reflections.
pub fn same_reflections(a: &[Reflection], b: &[Reflection]) -> bool {
    let within = |xs: &[Reflection], ys: &[Reflection]| {
        xs.iter().all(|x| {
            ys.iter()
                .any(|y| equals(&x.element, &y.element, IDENTITY_TOL))
        })
    };
    a.len() == b.len() && within(a, b) && within(b, a)
}

/// Reflections of the canonical roots.
pub fn delta_reflections(sg: &ReflectionSubgroup) -> Result<Vec<Reflection>> {
    sg.delta
        .iter()
        .map(|x| Reflection::from_root(&sg.parent, x))
        .collect()
}

/// `l_{W'}(e) = |N(e) meet Phi(W')|`.
pub fn sub_length(sg: &ReflectionSubgroup, e: &Element) -> Result<usize> {
    if !sg.contains(e) {
        return Err(Error::NotInSubgroup);
    }
    Ok(sg
        .phi
        .iter()
        .filter(|z| {
            matches!(
                sign_of(&sg.parent, &e.apply(&z.x, Side::One), Side::One),
                Ok(SignClass::Negative)
            )
        })
        .count())
}

/// The Cayley graph of the subgroup on its canonical generators.
pub fn canonical_cayley(sg: &ReflectionSubgroup) -> Result<Enumeration> {
    let gens: Vec<Element> = delta_reflections(sg)?
        .into_iter()
        .map(|r| r.element)
        .collect();
    let max_length = if sg.complete() {
        usize::MAX
    } else {
        sg.caps.max_length
    };
    enumerate_generated(
        Element::identity(&sg.parent),
        &gens,
        max_length,
        sg.caps.max_elements,
    )
}

/// Checks that a candidate set of canonical roots has nonpositive mutual pairings
/// and pairwise products that give a valid bond.
pub fn validate_canonical_set(parent: &CoxeterDatum, delta1: &[RootPair]) -> bool {
    let eps = parent.tolerance();
    let pv = |a: &RootPair, b: &RootPair| pairing_value(parent, &a.x, &b.y);
    for (i, a) in delta1.iter().enumerate() {
        match pv(a, a) {
            Ok(v) if (v - 1.0).abs() <= 1e-7 => {}
            _ => return false,
        }
        for b in &delta1[i + 1..] {
            let (Ok(ab), Ok(ba)) = (pv(a, b), pv(b, a)) else {
                return false;
            };
            if ab > eps || ba > eps {
                return false;
            }
            match bond_order(ab, ba, eps, M_MAX) {
                Ok(BondLabel::Finite(_)) | Ok(BondLabel::Infinite) => {}
                _ => return false,
            }
        }
    }
    true
}

/// Compares the canonical roots of `r_x W' r_x` with `r_x` applied to those of `W'`.
pub fn conjugate_delta_check(sg: &ReflectionSubgroup, x: &RootPair) -> Result<bool> {
    let parent = &sg.parent;
    let eps = parent.tolerance();
    let simple =
        (0..parent.rank()).any(|s| close_scaled(x.x.as_slice(), parent.alpha(s).as_slice(), 1e-7));
    if !simple {
        return Err(Error::PreconditionFail("x must be a simple root".into()));
    }
    if sg.phi_classes.contains(&root_class(&x.x, eps)?) {
        return Err(Error::PreconditionFail("x lies in the subsystem".into()));
    }
    let seeds = sg
        .generators
        .iter()
        .map(|g| reflect_pair(parent, x, &g.root_pair))
        .collect::<Result<Vec<_>>>()?;
    let conj = subgroup_from_reflections(parent, &seeds, &sg.caps)?;
    let lhs = conj
        .delta
        .iter()
        .map(|d| root_class(&d.x, eps))
        .collect::<Result<ClassSet>>()?;
    let rhs = sg
        .delta
        .iter()
        .map(|d| root_class(&reflect_by_root(parent, x, &d.x)?, eps))
        .collect::<Result<ClassSet>>()?;
    Ok(lhs.same_as(&rhs))
}

/// The orbit of the canonical roots under the subgroup recovers the subsystem.
pub fn span_check(sg: &ReflectionSubgroup) -> Result<bool> {
    if !sg.complete() {
        return Err(Error::InfiniteCase);
    }
    let eps = sg.parent.tolerance();
    let mut orbit = ClassSet::new();
    for e in sg.elements.elements() {
        for d in &sg.delta {
            orbit.insert(root_class(&e.apply(&d.x, Side::One), eps)?);
        }
    }
    Ok(orbit.same_as(&sg.phi_classes))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PairRecord {
    pub i: usize,
    pub j: usize,
    /// `<x_i, phi(x_j)>`.
    pub forward: f64,
    /// `<x_j, phi(x_i)>`.
    pub backward: f64,
    pub product: f64,
    pub label: Option<BondLabel>,
    pub order: ProductOrder,
    pub flags: Vec<String>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct CanonicalReport {
    pub pairs: Vec<PairRecord>,
    /// Pairs with the same reflection, left out of the report.
    pub skipped: Vec<(usize, usize)>,
}

impl CanonicalReport {
    pub fn consistent(&self) -> bool {
        self.pairs.iter().all(|p| p.flags.is_empty())
    }
}

fn label_matches(label: Option<BondLabel>, order: ProductOrder) -> bool {
    match (label, order) {
        (Some(BondLabel::Finite(m)), ProductOrder::Finite { order: n }) => m == n,
        (Some(BondLabel::Infinite), ProductOrder::Infinite { .. }) => true,
        _ => false,
    }
}

/// Pairings, bond labels and matrix orders for every pair of canonical roots.
pub fn d34_report(sg: &ReflectionSubgroup) -> CanonicalReport {
    let parent = &sg.parent;
    let eps = parent.tolerance();
    let mut report = CanonicalReport::default();
    for i in 0..sg.delta.len() {
        for j in i + 1..sg.delta.len() {
            let (x, y) = (&sg.delta[i], &sg.delta[j]);
            if crate::roots::proportional(&x.x, &y.x, eps) {
                report.skipped.push((i, j));
                continue;
            }
            let forward = pairing_value(parent, &x.x, &y.y).unwrap_or(f64::NAN);
            let backward = pairing_value(parent, &y.x, &x.y).unwrap_or(f64::NAN);
            let label = bond_order(forward, backward, eps, M_MAX).ok();
            let rx = Element::reflection(parent, x).map(|e| e.act1().clone());
            let ry = Element::reflection(parent, y).map(|e| e.act1().clone());
            let order = match (rx, ry) {
                (Ok(a), Ok(b)) => matrix_order(&(a * b), 2 * M_MAX),
                _ => ProductOrder::Infinite { bound: 0 },
            };
            let mut flags = Vec::new();
            if !(forward <= eps && backward <= eps) {
                flags.push("positive pairing".to_string());
            }
            if !label_matches(label, order) {
                flags.push("bond label disagrees with matrix order".to_string());
            }
            report.pairs.push(PairRecord {
                i,
                j,
                forward,
                backward,
                product: forward * backward,
                label,
                order,
                flags,
            });
        }
    }
    report
}

/// Coefficients of `(... r_y r_x r_y) x` and `(... r_x r_y r_x) y`, `m` factors each,
/// in the basis `{x, y}`.
pub fn dihedral_coefficients(
    parent: &CoxeterDatum,
    x: &RootPair,
    y: &RootPair,
    m: usize,
) -> Result<[(f64, f64); 2]> {
    let [u, v] = dihedral_vectors(parent, x, y, m)?;
    Ok([coordinates(x, y, &u)?.0, coordinates(x, y, &v)?.0])
}

fn dihedral_vectors(
    parent: &CoxeterDatum,
    x: &RootPair,
    y: &RootPair,
    m: usize,
) -> Result<[Vector; 2]> {
    let mut u = x.x.clone();
    let mut v = y.x.clone();
    for k in 0..m {
        let (a, b) = if k % 2 == 0 { (y, x) } else { (x, y) };
        u = reflect_by_root(parent, a, &u)?;
        v = reflect_by_root(parent, b, &v)?;
    }
    Ok([u, v])
}

/// Least-squares coordinates in `{x, y}` and the residual.
fn coordinates(x: &RootPair, y: &RootPair, target: &Vector) -> Result<((f64, f64), f64)> {
    let basis = Matrix::from_columns(&[x.x.clone(), y.x.clone()]);
    let svd = basis.clone().svd(true, true);
    let sv = &svd.singular_values;
    if sv.min() <= 1e-9 * sv.max() {
        return Err(Error::DegenerateSpan);
    }
    let c = svd
        .solve(target, 1e-14)
        .map_err(|_| Error::DegenerateSpan)?;
    let residual = (&basis * &c - target).amax();
    Ok(((c[0], c[1]), residual))
}

/// Nonnegativity of the rank-2 coefficients for every `m` below the order of `r_x r_y`.
///
/// When the order is infinite, `m` runs up to `m_limit`.
pub fn dihedral_coeff_check(
    parent: &CoxeterDatum,
    x: &RootPair,
    y: &RootPair,
    m_limit: usize,
) -> Result<bool> {
    let rx = Element::reflection(parent, x)?;
    let ry = Element::reflection(parent, y)?;
    let upper = match matrix_order(&(rx.act1() * ry.act1()), 2 * M_MAX) {
        ProductOrder::Finite { order: n } => n as usize - 1,
        ProductOrder::Infinite { .. } => m_limit,
    };
    for m in 0..=upper {
        for w in dihedral_vectors(parent, x, y, m)? {
            let ((c, d), residual) = coordinates(x, y, &w)?;
            let tol = 1e-8 * w.amax().max(1.0);
            if residual > tol || c < -tol || d < -tol {
                return Ok(false);
            }
            if !matches!(sign_of(parent, &w, Side::One), Ok(SignClass::Positive)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `k` distinct positive roots of `roots`, one per class, chosen uniformly.
pub fn random_seeds<R: Rng + ?Sized>(
    roots: &SignedRootSet,
    k: usize,
    rng: &mut R,
) -> Vec<RootPair> {
    let reps = roots.positive_representatives(Side::One);
    let k = k.min(reps.len());
    sample(rng, reps.len(), k)
        .into_iter()
        .map(|i| roots.pairs()[reps[i]].clone())
        .collect()
}

/// JSON view of a subgroup.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SubgroupReport {
    pub generators: Vec<Vec<f64>>,
    /// Element count, or `"infinite/truncated"`.
    pub order: serde_json::Value,
    pub phi_class_count: usize,
    pub complete: bool,
    pub delta: Vec<Vec<f64>>,
    pub coxeter_matrix_of_delta: Option<Vec<Vec<u32>>>,
    pub d34: CanonicalReport,
}

impl SubgroupReport {
    pub fn new(sg: &ReflectionSubgroup) -> Self {
        let coxeter = induced_datum(&sg.parent, &sg.delta)
            .and_then(|d| coxeter_matrix_of(&d))
            .ok()
            .map(|m| m.to_rows());
        Self {
            generators: sg
                .generators
                .iter()
                .map(|g| g.root_pair.x.as_slice().to_vec())
                .collect(),
            order: match sg.order() {
                Some(n) => serde_json::Value::from(n),
                None => serde_json::Value::from("infinite/truncated"),
            },
            phi_class_count: sg.phi_classes.len(),
            complete: sg.complete(),
            delta: sg.delta.iter().map(|d| d.x.as_slice().to_vec()).collect(),
            coxeter_matrix_of_delta: coxeter,
            d34: d34_report(sg),
        }
    }
}
