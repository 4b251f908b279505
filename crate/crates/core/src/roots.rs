//! Paired root systems.
//!
//! Roots are generated jointly: every root `x` in `V1` travels together with its
//! partner `phi(x)` in `V2`, and both are produced by applying the same word to
//! a simple pair `(alpha_s, beta_s)`. Keeping the pair explicit is what makes
//! reflections in arbitrary roots computable, since `r_x` needs `phi(x)`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cone::cone_membership;
use crate::datum::CoxeterDatum;
use crate::error::{Error, Result};
use crate::linalg::{max_abs, VecIndex, Vector};

/// Default bound on the number of stored root pairs.
pub const DEFAULT_ROOT_CAP: usize = 100_000;

/// Comparison tolerance for normalised class representatives.
const CLASS_TOL: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    One,
    Two,
}

impl Side {
    pub fn index(self) -> usize {
        match self {
            Side::One => 0,
            Side::Two => 1,
        }
    }
}

/// A root together with its partner and a word that produces both.
#[derive(Debug, Clone, PartialEq)]
pub struct RootPair {
    /// Coordinates in `V1`.
    pub x: Vector,
    /// Coordinates of `phi(x)` in `V2`.
    pub y: Vector,
    pub depth: usize,
    /// Generator whose simple pair the witness is applied to.
    pub seed: usize,
    /// `x = w_1 w_2 ... w_k alpha_seed`.
    pub witness: Vec<usize>,
}

impl RootPair {
    pub fn simple(datum: &CoxeterDatum, s: usize) -> Self {
        Self {
            x: datum.alpha(s).clone(),
            y: datum.beta(s).clone(),
            depth: 0,
            seed: s,
            witness: Vec::new(),
        }
    }

    pub fn vector(&self, side: Side) -> &Vector {
        match side {
            Side::One => &self.x,
            Side::Two => &self.y,
        }
    }

    /// `-x = w r_seed alpha_seed`.
    pub fn negated(&self) -> Self {
        let mut witness = self.witness.clone();
        witness.push(self.seed);
        Self {
            x: -&self.x,
            y: -&self.y,
            depth: witness.len(),
            seed: self.seed,
            witness,
        }
    }

    /// Word of `r_x = w r_seed w^{-1}`.
    pub fn reflection_word(&self) -> Vec<usize> {
        let mut word = self.witness.clone();
        word.push(self.seed);
        word.extend(self.witness.iter().rev());
        word
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SignClass {
    Positive,
    Negative,
    Mixed,
}

/// Equivalence class of a root under nonzero scaling.
///
/// The representative is scaled so its largest entry has magnitude one and
/// its first nonzero entry is positive. Two classes compare equal when their
/// representatives agree to within `1e-7`.
#[derive(Debug, Clone)]
pub struct RootClass {
    representative: Vec<f64>,
}

impl RootClass {
    pub fn representative(&self) -> &[f64] {
        &self.representative
    }
}

impl PartialEq for RootClass {
    fn eq(&self, other: &Self) -> bool {
        self.representative.len() == other.representative.len()
            && self
                .representative
                .iter()
                .zip(&other.representative)
                .all(|(a, b)| (a - b).abs() <= CLASS_TOL)
    }
}

/// Normalised representative and the factor `v = factor * representative`.
fn normalize(v: &[f64], eps: f64) -> Result<(Vec<f64>, f64)> {
    let top = max_abs(v);
    if top <= eps {
        return Err(Error::ZeroVector);
    }
    let first = v
        .iter()
        .find(|x| x.abs() > top * 1e-9)
        .copied()
        .unwrap_or(top);
    let factor = if first < 0.0 { -top } else { top };
    Ok((v.iter().map(|x| x / factor).collect(), factor))
}

pub fn root_class(v: &Vector, eps: f64) -> Result<RootClass> {
    let (representative, _) = normalize(v.as_slice(), eps)?;
    Ok(RootClass { representative })
}

/// Nonzero scalar multiples of each other.
pub fn proportional(a: &Vector, b: &Vector, eps: f64) -> bool {
    match (root_class(a, eps), root_class(b, eps)) {
        (Ok(ca), Ok(cb)) => ca == cb,
        _ => false,
    }
}

/// A set of root classes with tolerant membership.
#[derive(Debug, Clone, Default)]
pub struct ClassSet {
    classes: Vec<RootClass>,
}

impl ClassSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn contains(&self, c: &RootClass) -> bool {
        self.classes.iter().any(|k| k == c)
    }

    /// Returns false if the class was already present.
    pub fn insert(&mut self, c: RootClass) -> bool {
        if self.contains(&c) {
            false
        } else {
            self.classes.push(c);
            true
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = &RootClass> {
        self.classes.iter()
    }

    pub fn intersection(&self, other: &ClassSet) -> ClassSet {
        self.classes
            .iter()
            .filter(|c| other.contains(c))
            .cloned()
            .collect()
    }

    pub fn symmetric_difference(&self, other: &ClassSet) -> ClassSet {
        let mut out: ClassSet = self
            .classes
            .iter()
            .filter(|c| !other.contains(c))
            .cloned()
            .collect();
        for c in other.iter().filter(|c| !self.contains(c)) {
            out.insert(c.clone());
        }
        out
    }

    /// Equality as sets.
    pub fn same_as(&self, other: &ClassSet) -> bool {
        self.len() == other.len() && self.classes.iter().all(|c| other.contains(c))
    }
}

impl FromIterator<RootClass> for ClassSet {
    fn from_iter<I: IntoIterator<Item = RootClass>>(iter: I) -> Self {
        let mut set = ClassSet::new();
        for c in iter {
            set.insert(c);
        }
        set
    }
}

fn check_dim(expected: usize, v: &Vector) -> Result<()> {
    if v.len() == expected {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            expected,
            found: v.len(),
        })
    }
}

/// `<x, y>` for `x` in `V1` and `y` in `V2`.
pub fn pairing_value(datum: &CoxeterDatum, x: &Vector, y: &Vector) -> Result<f64> {
    check_dim(datum.dim1(), x)?;
    check_dim(datum.dim2(), y)?;
    Ok(x.dot(&(datum.form() * y)))
}

/// `rho_1(s) x = x - 2 <x, beta_s> alpha_s`.
pub fn reflect1(datum: &CoxeterDatum, s: usize, x: &Vector) -> Result<Vector> {
    datum.check_generator(s)?;
    let c = pairing_value(datum, x, datum.beta(s))?;
    Ok(x - 2.0 * c * datum.alpha(s))
}

/// `rho_2(s) y = y - 2 <alpha_s, y> beta_s`.
pub fn reflect2(datum: &CoxeterDatum, s: usize, y: &Vector) -> Result<Vector> {
    datum.check_generator(s)?;
    let c = pairing_value(datum, datum.alpha(s), y)?;
    Ok(y - 2.0 * c * datum.beta(s))
}

/// `r_alpha x = x - 2 <x, phi(alpha)> alpha` on `V1`.
pub fn reflect_by_root(datum: &CoxeterDatum, r: &RootPair, x: &Vector) -> Result<Vector> {
    let c = pairing_value(datum, x, &r.y)?;
    Ok(x - 2.0 * c * &r.x)
}

/// The same reflection acting on `V2`: `y - 2 <alpha, y> phi(alpha)`.
pub fn reflect_by_root2(datum: &CoxeterDatum, r: &RootPair, y: &Vector) -> Result<Vector> {
    let c = pairing_value(datum, &r.x, y)?;
    Ok(y - 2.0 * c * &r.y)
}

/// `r_root` applied to a whole pair, with a composed witness word.
pub fn reflect_pair(datum: &CoxeterDatum, root: &RootPair, p: &RootPair) -> Result<RootPair> {
    let x = reflect_by_root(datum, root, &p.x)?;
    let y = reflect_by_root2(datum, root, &p.y)?;
    let mut witness = root.reflection_word();
    witness.extend_from_slice(&p.witness);
    Ok(RootPair {
        x,
        y,
        depth: witness.len(),
        seed: p.seed,
        witness,
    })
}

/// Applies a word (leftmost letter acts last) to the simple pair of `seed`.
pub fn apply_word(datum: &CoxeterDatum, word: &[usize], seed: usize) -> Result<(Vector, Vector)> {
    datum.check_generator(seed)?;
    let mut x = datum.alpha(seed).clone();
    let mut y = datum.beta(seed).clone();
    for &s in word.iter().rev() {
        x = reflect1(datum, s, &x)?;
        y = reflect2(datum, s, &y)?;
    }
    Ok((x, y))
}

/// Re-derives a short witness for `p` by walking down to a simple root.
///
/// Each step applies a generator `s` with `<x, beta_s> > 0`, which lowers the
/// depth of a positive root by one. Falls back to `p` unchanged if no simple
/// root is reached.
pub fn shorten_witness(datum: &CoxeterDatum, p: &RootPair) -> RootPair {
    let eps = datum.tolerance();
    let negative = matches!(sign_of(datum, &p.x, Side::One), Ok(SignClass::Negative));
    let mut x = if negative { -&p.x } else { p.x.clone() };
    let mut word = Vec::new();
    let bound = 4 * p.witness.len() + 64;
    while word.len() <= bound {
        if let Some(seed) = (0..datum.rank())
            .find(|&s| crate::linalg::close_scaled(x.as_slice(), datum.alpha(s).as_slice(), 1e-7))
        {
            let mut short = RootPair {
                x: datum.alpha(seed).clone(),
                y: datum.beta(seed).clone(),
                depth: word.len(),
                seed,
                witness: word,
            };
            if negative {
                short = short.negated();
            }
            if short.witness.len() > p.witness.len() {
                break;
            }
            // keep the caller's coordinates, only the word is replaced
            short.x = p.x.clone();
            short.y = p.y.clone();
            return short;
        }
        let Some(s) = (0..datum.rank()).find(|&s| x.dot(&(datum.form() * datum.beta(s))) > eps)
        else {
            break;
        };
        x = datum.reflection1(s) * &x;
        word.push(s);
    }
    p.clone()
}

/// Sign relative to the cone of simple roots on the given side.
pub fn sign_of(datum: &CoxeterDatum, v: &Vector, side: Side) -> Result<SignClass> {
    let eps = datum.tolerance();
    let expected = match side {
        Side::One => datum.dim1(),
        Side::Two => datum.dim2(),
    };
    check_dim(expected, v)?;
    if v.amax() <= eps {
        return Err(Error::ZeroVector);
    }
    if datum.is_standard() {
        let nonneg = v.iter().all(|&c| c >= -eps);
        let nonpos = v.iter().all(|&c| c <= eps);
        let sign = if nonneg && v.iter().any(|&c| c > eps) {
            SignClass::Positive
        } else if nonpos && v.iter().any(|&c| c < -eps) {
            SignClass::Negative
        } else {
            SignClass::Mixed
        };
        return Ok(sign);
    }
    let simple = datum.simple_roots(side);
    if cone_membership(simple, v, eps) {
        Ok(SignClass::Positive)
    } else if cone_membership(simple, &(-v), eps) {
        Ok(SignClass::Negative)
    } else {
        Ok(SignClass::Mixed)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    /// No new roots appeared: the orbit is closed.
    Closed,
    DepthLimit,
    CapExceeded,
    /// Stopped at the first mixed root.
    MixedFound,
}

#[derive(Debug, Clone, Default)]
struct ClassTable {
    index: VecIndex,
    reps: Vec<RootClass>,
}

impl ClassTable {
    fn new() -> Self {
        Self {
            index: VecIndex::new(CLASS_TOL),
            reps: Vec::new(),
        }
    }

    fn intern(&mut self, v: &Vector, eps: f64) -> usize {
        match normalize(v.as_slice(), eps) {
            Ok((rep, _)) => {
                let (id, fresh) = self.index.insert(&rep);
                if fresh {
                    self.reps.push(RootClass {
                        representative: rep,
                    });
                }
                id
            }
            Err(_) => usize::MAX,
        }
    }

    fn lookup(&self, v: &Vector, eps: f64) -> Option<usize> {
        let (rep, _) = normalize(v.as_slice(), eps).ok()?;
        self.index.find(&rep)
    }
}

/// Depth-bounded, deduplicated enumeration of root pairs with signs and classes.
#[derive(Debug, Clone)]
pub struct SignedRootSet {
    pairs: Vec<RootPair>,
    signs: [Vec<SignClass>; 2],
    class_of: [Vec<usize>; 2],
    classes: [ClassTable; 2],
    index: VecIndex,
    depth_reached: usize,
    complete: bool,
    stop: StopReason,
    eps: f64,
}

impl SignedRootSet {
    pub fn pairs(&self) -> &[RootPair] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn sign(&self, i: usize, side: Side) -> SignClass {
        self.signs[side.index()][i]
    }

    fn with_sign(&self, side: Side, sign: SignClass) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| self.sign(i, side) == sign)
            .collect()
    }

    pub fn positives(&self, side: Side) -> Vec<usize> {
        self.with_sign(side, SignClass::Positive)
    }

    pub fn negatives(&self, side: Side) -> Vec<usize> {
        self.with_sign(side, SignClass::Negative)
    }

    pub fn mixed(&self, side: Side) -> Vec<usize> {
        self.with_sign(side, SignClass::Mixed)
    }

    pub fn depth_reached(&self) -> usize {
        self.depth_reached
    }

    /// True when the orbit closed, i.e. this is the whole root system.
    pub fn complete(&self) -> bool {
        self.complete
    }

    pub fn stop_reason(&self) -> StopReason {
        self.stop
    }

    pub fn tolerance(&self) -> f64 {
        self.eps
    }

    /// Class id of pair `i` on the given side.
    pub fn class_of(&self, i: usize, side: Side) -> usize {
        self.class_of[side.index()][i]
    }

    pub fn class(&self, id: usize, side: Side) -> &RootClass {
        &self.classes[side.index()].reps[id]
    }

    pub fn class_count(&self, side: Side) -> usize {
        self.classes[side.index()].reps.len()
    }

    /// Class id of an arbitrary vector, if it is a multiple of a stored root.
    pub fn class_id(&self, v: &Vector, side: Side) -> Option<usize> {
        self.classes[side.index()].lookup(v, self.eps)
    }

    /// Index of the stored pair whose side-1 root equals `x`.
    pub fn find(&self, x: &Vector) -> Option<usize> {
        self.index.find(x.as_slice())
    }

    /// One positive pair per class, in order of first appearance.
    pub fn positive_representatives(&self, side: Side) -> Vec<usize> {
        let mut seen = vec![false; self.class_count(side)];
        let mut out = Vec::new();
        for i in self.positives(side) {
            let c = self.class_of(i, side);
            if c != usize::MAX && !seen[c] {
                seen[c] = true;
                out.push(i);
            }
        }
        out
    }

    /// Number of classes that contain a positive root.
    pub fn positive_class_count(&self, side: Side) -> usize {
        self.positive_representatives(side).len()
    }
}

fn classify_pair(datum: &CoxeterDatum, p: &RootPair) -> [SignClass; 2] {
    let s1 = sign_of(datum, &p.x, Side::One).unwrap_or(SignClass::Mixed);
    let s2 = sign_of(datum, &p.y, Side::Two).unwrap_or(SignClass::Mixed);
    [s1, s2]
}

struct Bfs<'a> {
    datum: &'a CoxeterDatum,
    set: SignedRootSet,
}

impl<'a> Bfs<'a> {
    fn new(datum: &'a CoxeterDatum) -> Self {
        let eps = datum.tolerance();
        Self {
            datum,
            set: SignedRootSet {
                pairs: Vec::new(),
                signs: [Vec::new(), Vec::new()],
                class_of: [Vec::new(), Vec::new()],
                classes: [ClassTable::new(), ClassTable::new()],
                index: VecIndex::new(eps),
                depth_reached: 0,
                complete: false,
                stop: StopReason::DepthLimit,
                eps,
            },
        }
    }

    /// Inserts new pairs in order; returns their indices.
    fn absorb(&mut self, candidates: Vec<RootPair>, cap: usize) -> (Vec<usize>, bool) {
        let mut added = Vec::new();
        let mut capped = false;
        let mut fresh = Vec::new();
        for p in candidates {
            if self.set.index.find(p.x.as_slice()).is_some() {
                continue;
            }
            if self.set.pairs.len() + fresh.len() >= cap {
                capped = true;
                break;
            }
            self.set.index.insert(p.x.as_slice());
            fresh.push(p);
        }
        let signs: Vec<[SignClass; 2]> = fresh
            .par_iter()
            .map(|p| classify_pair(self.datum, p))
            .collect();
        let eps = self.set.eps;
        for (p, sg) in fresh.into_iter().zip(signs) {
            let i = self.set.pairs.len();
            self.set.signs[0].push(sg[0]);
            self.set.signs[1].push(sg[1]);
            let c1 = self.set.classes[0].intern(&p.x, eps);
            let c2 = self.set.classes[1].intern(&p.y, eps);
            self.set.class_of[0].push(c1);
            self.set.class_of[1].push(c2);
            self.set.pairs.push(p);
            added.push(i);
        }
        (added, capped)
    }

    fn children(&self, frontier: &[usize]) -> Vec<RootPair> {
        let datum = self.datum;
        let pairs = &self.set.pairs;
        frontier
            .par_iter()
            .flat_map_iter(|&i| {
                let p = &pairs[i];
                (0..datum.rank()).map(move |s| {
                    let mut witness = Vec::with_capacity(p.witness.len() + 1);
                    witness.push(s);
                    witness.extend_from_slice(&p.witness);
                    RootPair {
                        x: datum.reflection1(s) * &p.x,
                        y: datum.reflection2(s) * &p.y,
                        depth: p.depth + 1,
                        seed: p.seed,
                        witness,
                    }
                })
            })
            .collect()
    }

    fn has_mixed(&self, added: &[usize]) -> bool {
        added.iter().any(|&i| {
            self.set.signs[0][i] == SignClass::Mixed || self.set.signs[1][i] == SignClass::Mixed
        })
    }

    fn run(mut self, max_depth: usize, cap: usize, stop_on_mixed: bool) -> SignedRootSet {
        let simple = (0..self.datum.rank())
            .map(|s| RootPair::simple(self.datum, s))
            .collect();
        let (mut frontier, capped) = self.absorb(simple, cap);
        if stop_on_mixed && self.has_mixed(&frontier) {
            return self.finish(0, false, StopReason::MixedFound);
        }
        if capped {
            return self.finish(0, false, StopReason::CapExceeded);
        }
        let mut depth = 0;
        loop {
            let candidates = self.children(&frontier);
            if depth == max_depth {
                let more = candidates
                    .iter()
                    .any(|p| self.set.index.find(p.x.as_slice()).is_none());
                return if more {
                    self.finish(depth, false, StopReason::DepthLimit)
                } else {
                    self.finish(depth, true, StopReason::Closed)
                };
            }
            let (added, capped) = self.absorb(candidates, cap);
            if added.is_empty() && !capped {
                return self.finish(depth, true, StopReason::Closed);
            }
            depth += 1;
            if stop_on_mixed && self.has_mixed(&added) {
                return self.finish(depth, false, StopReason::MixedFound);
            }
            if capped {
                return self.finish(depth, false, StopReason::CapExceeded);
            }
            frontier = added;
        }
    }

    fn finish(mut self, depth: usize, complete: bool, stop: StopReason) -> SignedRootSet {
        self.set.depth_reached = depth;
        self.set.complete = complete;
        self.set.stop = stop;
        self.set
    }
}

/// Breadth-first orbit of the simple pairs, at most `max_depth` reflections deep.
///
/// Truncation by `cap` is reported through [`SignedRootSet::stop_reason`]; the
/// partial set is still returned.
pub fn generate_roots(datum: &CoxeterDatum, max_depth: usize, cap: usize) -> SignedRootSet {
    Bfs::new(datum).run(max_depth, cap, false)
}

#[derive(Debug, Clone, PartialEq)]
pub enum Decomposition {
    Holds {
        depth_reached: usize,
        complete: bool,
    },
    Counterexample {
        pair: RootPair,
        side: Side,
    },
}

impl Decomposition {
    pub fn holds(&self) -> bool {
        matches!(self, Decomposition::Holds { .. })
    }
}

/// Searches the orbit for a root that is neither positive nor negative.
pub fn decomposition_check(datum: &CoxeterDatum, max_depth: usize, cap: usize) -> Decomposition {
    let set = Bfs::new(datum).run(max_depth, cap, true);
    for (i, pair) in set.pairs.iter().enumerate() {
        for side in [Side::One, Side::Two] {
            if set.sign(i, side) == SignClass::Mixed {
                return Decomposition::Counterexample {
                    pair: pair.clone(),
                    side,
                };
            }
        }
    }
    Decomposition::Holds {
        depth_reached: set.depth_reached,
        complete: set.complete,
    }
}
