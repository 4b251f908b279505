//! Group elements as words carrying their matrices on both spaces.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::datum::{CoxeterDatum, M_MAX};
use crate::error::{Error, Result};
use crate::linalg::{close_scaled, is_identity, Matrix, VecIndex, Vector};
use crate::roots::{
    generate_roots, root_class, shorten_witness, sign_of, ClassSet, RootClass, RootPair, Side,
    SignClass, SignedRootSet, DEFAULT_ROOT_CAP,
};

/// Tolerance for recognising the identity after long matrix products.
pub const IDENTITY_TOL: f64 = 1e-6;

/// Default bound on the number of enumerated elements.
pub const DEFAULT_GROUP_CAP: usize = 200_000;

#[derive(Debug, Clone)]
pub struct Element {
    word: Vec<usize>,
    act1: Matrix,
    act2: Matrix,
    cached_length: Option<usize>,
}

impl Element {
    pub fn identity(datum: &CoxeterDatum) -> Self {
        Self {
            word: Vec::new(),
            act1: Matrix::identity(datum.dim1(), datum.dim1()),
            act2: Matrix::identity(datum.dim2(), datum.dim2()),
            cached_length: Some(0),
        }
    }

    pub fn generator(datum: &CoxeterDatum, s: usize) -> Result<Self> {
        datum.check_generator(s)?;
        Ok(Self {
            word: vec![s],
            act1: datum.reflection1(s).clone(),
            act2: datum.reflection2(s).clone(),
            cached_length: Some(1),
        })
    }

    /// The word `s_1 s_2 ... s_k`, acting as `rho(s_1) ... rho(s_k)`.
    pub fn from_word(datum: &CoxeterDatum, word: &[usize]) -> Result<Self> {
        let mut e = Self::identity(datum);
        e.cached_length = None;
        for &s in word {
            datum.check_generator(s)?;
            e.act1 *= datum.reflection1(s);
            e.act2 *= datum.reflection2(s);
        }
        e.word = word.to_vec();
        if word.is_empty() {
            e.cached_length = Some(0);
        }
        Ok(e)
    }

    /// `r_x` built directly from the pair: `I - 2 x (F y)^T` and `I - 2 y (F^T x)^T`.
    ///
    /// The word is the conjugate of the seed by the witness.
    pub fn reflection(datum: &CoxeterDatum, pair: &RootPair) -> Result<Self> {
        datum.check_generator(pair.seed)?;
        let fy = datum.form() * &pair.y;
        let ftx = datum.form().transpose() * &pair.x;
        Ok(Self {
            word: pair.reflection_word(),
            act1: Matrix::identity(datum.dim1(), datum.dim1()) - 2.0 * &pair.x * fy.transpose(),
            act2: Matrix::identity(datum.dim2(), datum.dim2()) - 2.0 * &pair.y * ftx.transpose(),
            cached_length: None,
        })
    }

    pub fn word(&self) -> &[usize] {
        &self.word
    }

    pub fn act1(&self) -> &Matrix {
        &self.act1
    }

    pub fn act2(&self) -> &Matrix {
        &self.act2
    }

    pub fn act(&self, side: Side) -> &Matrix {
        match side {
            Side::One => &self.act1,
            Side::Two => &self.act2,
        }
    }

    pub fn cached_length(&self) -> Option<usize> {
        self.cached_length
    }

    pub fn with_length(mut self, length: usize) -> Self {
        self.cached_length = Some(length);
        self
    }

    pub fn mul(&self, other: &Element) -> Element {
        let mut word = self.word.clone();
        word.extend_from_slice(&other.word);
        Element {
            word,
            act1: &self.act1 * &other.act1,
            act2: &self.act2 * &other.act2,
            cached_length: None,
        }
    }

    /// Right multiplication by a generator.
    pub fn mul_generator(&self, datum: &CoxeterDatum, s: usize) -> Element {
        let mut word = self.word.clone();
        word.push(s);
        Element {
            word,
            act1: &self.act1 * datum.reflection1(s),
            act2: &self.act2 * datum.reflection2(s),
            cached_length: None,
        }
    }

    pub fn inverse(&self, datum: &CoxeterDatum) -> Element {
        let word: Vec<usize> = self.word.iter().rev().copied().collect();
        let mut e = Element::from_word(datum, &word).expect("word already checked");
        e.cached_length = self.cached_length;
        e
    }

    pub fn apply(&self, v: &Vector, side: Side) -> Vector {
        self.act(side) * v
    }

    /// `w (x, phi(x))`, with the witness extended by the word of `w`.
    pub fn apply_pair(&self, p: &RootPair) -> RootPair {
        let mut witness = self.word.clone();
        witness.extend_from_slice(&p.witness);
        RootPair {
            x: &self.act1 * &p.x,
            y: &self.act2 * &p.y,
            depth: witness.len(),
            seed: p.seed,
            witness,
        }
    }
}

pub fn element_from_word(datum: &CoxeterDatum, word: &[usize]) -> Result<Element> {
    Element::from_word(datum, word)
}

/// Group equality, decided on the `V1` action.
pub fn equals(e1: &Element, e2: &Element, eps: f64) -> bool {
    e1.act1.shape() == e2.act1.shape() && close_scaled(e1.act1.as_slice(), e2.act1.as_slice(), eps)
}

/// Length by greedy right descent, lowest generator index first.
pub fn length(datum: &CoxeterDatum, e: &Element) -> Result<usize> {
    Ok(reduced_word(datum, e)?.len())
}

/// A reduced word for `e`, read off from the descents.
pub fn reduced_word(datum: &CoxeterDatum, e: &Element) -> Result<Vec<usize>> {
    let mut act = e.act1.clone();
    let mut descents = Vec::new();
    let bound = 4 * e.word.len().max(1) + 64;
    'outer: while descents.len() <= bound {
        for s in 0..datum.rank() {
            let image = &act * datum.alpha(s);
            if matches!(sign_of(datum, &image, Side::One), Ok(SignClass::Negative)) {
                act *= datum.reflection1(s);
                descents.push(s);
                continue 'outer;
            }
        }
        if is_identity(&act, IDENTITY_TOL * act.amax().max(1.0)) {
            descents.reverse();
            return Ok(descents);
        }
        break;
    }
    Err(Error::NoDescent(e.word.clone()))
}

/// Classes of `roots` that are positive and sent negative by `e`.
///
/// `roots` should contain every positive root of depth below the length of `e`.
pub fn n_set_in(datum: &CoxeterDatum, roots: &SignedRootSet, e: &Element, side: Side) -> ClassSet {
    n_ids_in(datum, roots, e, side)
        .into_iter()
        .map(|c| roots.class(c, side).clone())
        .collect()
}

/// [`n_set_in`] as class ids of `roots`.
pub fn n_ids_in(
    datum: &CoxeterDatum,
    roots: &SignedRootSet,
    e: &Element,
    side: Side,
) -> Vec<usize> {
    let mut ids = Vec::new();
    for i in roots.positive_representatives(side) {
        if image_sign(datum, roots, e, i, side) == SignClass::Negative {
            ids.push(roots.class_of(i, side));
        }
    }
    ids
}

/// Sign of `e` applied to stored pair `i`; images are looked up before solving anything.
pub fn image_sign(
    datum: &CoxeterDatum,
    roots: &SignedRootSet,
    e: &Element,
    i: usize,
    side: Side,
) -> SignClass {
    let p = &roots.pairs()[i];
    let x = &e.act1 * &p.x;
    if let Some(j) = roots.find(&x) {
        return roots.sign(j, side);
    }
    let image = match side {
        Side::One => x,
        Side::Two => &e.act2 * &p.y,
    };
    sign_of(datum, &image, side).unwrap_or(SignClass::Mixed)
}

/// `N_i(e)`, enumerating roots to depth `length(e)`.
pub fn n_set(datum: &CoxeterDatum, e: &Element, side: Side) -> Result<ClassSet> {
    let ell = length(datum, e)?;
    let roots = generate_roots(datum, ell, DEFAULT_ROOT_CAP);
    let mut out = ClassSet::new();
    for i in roots.positive_representatives(side) {
        let image = e.apply(roots.pairs()[i].vector(side), side);
        if sign_of(datum, &image, side)? == SignClass::Negative {
            out.insert(roots.class(roots.class_of(i, side), side).clone());
        }
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct Reflection {
    pub element: Element,
    pub root_class: RootClass,
    pub root_pair: RootPair,
}

impl Reflection {
    /// `r_x` for a root pair, with the witness shortened first.
    pub fn from_root(datum: &CoxeterDatum, pair: &RootPair) -> Result<Self> {
        let pair = shorten_witness(datum, pair);
        Ok(Self {
            element: Element::reflection(datum, &pair)?,
            root_class: root_class(&pair.x, datum.tolerance())?,
            root_pair: pair,
        })
    }
}

/// `{ r_x : x in N_1(e) }`.
pub fn nbar(datum: &CoxeterDatum, e: &Element) -> Result<Vec<Reflection>> {
    let ell = length(datum, e)?;
    let roots = generate_roots(datum, ell, DEFAULT_ROOT_CAP);
    let mut out = Vec::new();
    for i in roots.positive_representatives(Side::One) {
        let p = &roots.pairs()[i];
        if sign_of(datum, &e.apply(&p.x, Side::One), Side::One)? == SignClass::Negative {
            out.push(Reflection::from_root(datum, p)?);
        }
    }
    Ok(out)
}

/// Elements of a Cayley-graph search, each carrying its distance from the identity.
#[derive(Debug, Clone)]
pub struct Enumeration {
    elements: Vec<Element>,
    index: VecIndex,
    complete: bool,
}

impl Enumeration {
    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// True when the search closed, so this is the whole group.
    pub fn complete(&self) -> bool {
        self.complete
    }

    pub fn index_of(&self, e: &Element) -> Option<usize> {
        self.index.find(e.act1.as_slice())
    }

    /// Distance from the identity in the Cayley graph.
    pub fn distance(&self, e: &Element) -> Option<usize> {
        self.index_of(e)
            .and_then(|i| self.elements[i].cached_length)
    }
}

/// Breadth-first Cayley-graph search over the given generating elements.
pub fn enumerate_generated(
    identity: Element,
    generators: &[Element],
    max_length: usize,
    cap: usize,
) -> Result<Enumeration> {
    let mut index = VecIndex::new(IDENTITY_TOL);
    index.insert(identity.act1.as_slice());
    let mut elements = vec![identity.with_length(0)];
    let mut frontier = vec![0usize];
    let mut depth = 0;
    loop {
        let candidates: Vec<Element> = frontier
            .par_iter()
            .flat_map_iter(|&i| generators.iter().map(move |g| (i, g)))
            .map(|(i, g)| elements[i].mul(g))
            .collect();
        if depth == max_length {
            let complete = candidates
                .iter()
                .all(|c| index.find(c.act1.as_slice()).is_some());
            return Ok(Enumeration {
                elements,
                index,
                complete,
            });
        }
        let mut next = Vec::new();
        for c in candidates {
            if index.insert(c.act1.as_slice()).1 {
                if elements.len() >= cap {
                    return Err(Error::CapExceeded(cap));
                }
                next.push(elements.len());
                elements.push(c.with_length(depth + 1));
            }
        }
        if next.is_empty() {
            return Ok(Enumeration {
                elements,
                index,
                complete: true,
            });
        }
        depth += 1;
        frontier = next;
    }
}

/// Elements of `W` up to word length `max_length`.
pub fn enumerate_group(datum: &CoxeterDatum, max_length: usize, cap: usize) -> Result<Enumeration> {
    let gens = (0..datum.rank())
        .map(|s| Element::generator(datum, s))
        .collect::<Result<Vec<_>>>()?;
    enumerate_generated(Element::identity(datum), &gens, max_length, cap)
}

/// Distinct conjugates `w s w^{-1}` over an enumeration, each with its root `w alpha_s`.
pub fn conjugates_of_generators(
    datum: &CoxeterDatum,
    group: &Enumeration,
) -> Result<Vec<Reflection>> {
    let mut seen = VecIndex::new(IDENTITY_TOL);
    let mut out = Vec::new();
    for w in group.elements() {
        let w_inv = w.inverse(datum);
        for s in 0..datum.rank() {
            let t = w.mul(&Element::generator(datum, s)?).mul(&w_inv);
            if !seen.insert(t.act1.as_slice()).1 {
                continue;
            }
            let pair = w.apply_pair(&RootPair::simple(datum, s));
            out.push(Reflection {
                root_class: root_class(&pair.x, datum.tolerance())?,
                element: t,
                root_pair: pair,
            });
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ProductOrder {
    Finite {
        order: u32,
    },
    /// No identity among the first `bound` powers.
    Infinite {
        bound: u32,
    },
}

/// Smallest `n <= bound` with `m^n = 1`, stopping early once the powers blow up.
pub fn matrix_order(m: &Matrix, bound: u32) -> ProductOrder {
    let mut power = m.clone();
    for n in 1..=bound {
        let scale = power.amax();
        if !scale.is_finite() || scale > 1e100 {
            break;
        }
        if is_identity(&power, IDENTITY_TOL * scale.max(1.0)) {
            return ProductOrder::Finite { order: n };
        }
        power *= m;
    }
    ProductOrder::Infinite { bound }
}

/// Order of `rho_1(s) rho_1(t)`, searched up to `2 * M_MAX`.
pub fn order_of_product(datum: &CoxeterDatum, s: usize, t: usize) -> Result<ProductOrder> {
    datum.check_generator(s)?;
    datum.check_generator(t)?;
    Ok(matrix_order(
        &(datum.reflection1(s) * datum.reflection1(t)),
        2 * M_MAX,
    ))
}

/// `w^{-1}` applied to every class of `set`.
pub fn act_on_classes(w_inv: &Element, set: &ClassSet, side: Side, eps: f64) -> Result<ClassSet> {
    set.iter()
        .map(|c| {
            let v = Vector::from_column_slice(c.representative());
            root_class(&w_inv.apply(&v, side), eps)
        })
        .collect()
}

/// `N(w1 w2) = w2^{-1} N(w1) (+) N(w2)` over a precomputed root system.
pub fn symmetric_difference_identity_in(
    datum: &CoxeterDatum,
    roots: &SignedRootSet,
    e1: &Element,
    e2: &Element,
    side: Side,
) -> Result<bool> {
    let lhs = n_set_in(datum, roots, &e1.mul(e2), side);
    let moved = act_on_classes(
        &e2.inverse(datum),
        &n_set_in(datum, roots, e1, side),
        side,
        datum.tolerance(),
    )?;
    let rhs = moved.symmetric_difference(&n_set_in(datum, roots, e2, side));
    Ok(lhs.same_as(&rhs))
}

/// The symmetric-difference identity on both sides; the root system must be finite.
pub fn symmetric_difference_identity_check(
    datum: &CoxeterDatum,
    e1: &Element,
    e2: &Element,
) -> Result<bool> {
    let roots = generate_roots(datum, usize::MAX, DEFAULT_ROOT_CAP);
    if !roots.complete() {
        return Err(Error::InfiniteCase);
    }
    Ok(
        symmetric_difference_identity_in(datum, &roots, e1, e2, Side::One)?
            && symmetric_difference_identity_in(datum, &roots, e1, e2, Side::Two)?,
    )
}

/// JSON view of an element.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ElementRecord {
    pub word: Vec<String>,
    pub length: usize,
    pub n_set: Vec<Vec<f64>>,
}

impl ElementRecord {
    pub fn new(datum: &CoxeterDatum, e: &Element) -> Result<Self> {
        Ok(Self {
            word: e.word.iter().map(|&s| datum.labels()[s].clone()).collect(),
            length: length(datum, e)?,
            n_set: n_set(datum, e, Side::One)?
                .iter()
                .map(|c| c.representative().to_vec())
                .collect(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::datum::from_coxeter_matrix;

    fn std(m: crate::datum::CoxeterMatrix) -> CoxeterDatum {
        from_coxeter_matrix(&m).unwrap()
    }

    fn v(xs: &[f64]) -> Vector {
        Vector::from_column_slice(xs)
    }

    #[test]
    fn words_and_matrices() {
        let d = std(catalog::a(2));
        let id = Element::from_word(&d, &[]).unwrap();
        assert!(is_identity(id.act1(), 0.0) && is_identity(id.act2(), 0.0));
        let s = Element::from_word(&d, &[0]).unwrap();
        assert_eq!(s.act1(), d.reflection1(0));
        assert!(equals(
            &Element::from_word(&d, &[0, 0]).unwrap(),
            &id,
            1e-12
        ));
        assert!(matches!(
            Element::from_word(&d, &[2]),
            Err(Error::UnknownGenerator(_))
        ));
    }

    #[test]
    fn equality() {
        let a2 = std(catalog::a(2));
        let w = |d: &CoxeterDatum, word: &[usize]| Element::from_word(d, word).unwrap();
        assert!(equals(&w(&a2, &[0, 1, 0]), &w(&a2, &[1, 0, 1]), 1e-9));
        assert!(!equals(&w(&a2, &[0, 1]), &w(&a2, &[1, 0]), 1e-9));
        let i22 = std(catalog::i2(2));
        assert!(equals(&w(&i22, &[0, 1]), &w(&i22, &[1, 0]), 1e-9));
    }

    #[test]
    fn lengths() {
        let d = std(catalog::a(2));
        let len = |word: &[usize]| length(&d, &Element::from_word(&d, word).unwrap()).unwrap();
        assert_eq!(len(&[]), 0);
        assert_eq!(len(&[0, 1, 0]), 3);
        assert_eq!(len(&[0, 1, 0, 1]), 2);
        assert_eq!(len(&[0, 0, 1, 1, 0]), 1);
    }

    #[test]
    fn n_sets() {
        let d = std(catalog::a(2));
        let e = |word: &[usize]| Element::from_word(&d, word).unwrap();
        let cls = |xs: &[f64]| root_class(&v(xs), 1e-9).unwrap();
        let n = n_set(&d, &e(&[0]), Side::One).unwrap();
        assert!(n.same_as(&[cls(&[1.0, 0.0])].into_iter().collect()));
        let n = n_set(&d, &e(&[0, 1]), Side::One).unwrap();
        assert!(n.same_as(&[cls(&[0.0, 1.0]), cls(&[1.0, 1.0])].into_iter().collect()));
        assert!(n_set(&d, &e(&[]), Side::Two).unwrap().is_empty());
    }

    #[test]
    fn nbar_of_st() {
        let d = std(catalog::a(2));
        let st = Element::from_word(&d, &[0, 1]).unwrap();
        let refl = nbar(&d, &st).unwrap();
        assert_eq!(refl.len(), 2);
        let r_t = Element::from_word(&d, &[1]).unwrap();
        let r_st = Element::from_word(&d, &[0, 1, 0]).unwrap();
        assert!(refl.iter().any(|r| equals(&r.element, &r_t, 1e-9)));
        assert!(refl.iter().any(|r| equals(&r.element, &r_st, 1e-9)));
        let s = Element::from_word(&d, &[0]).unwrap();
        let only = nbar(&d, &s).unwrap();
        assert_eq!(only.len(), 1);
        assert!(equals(&only[0].element, &s, 1e-9));
    }

    #[test]
    fn enumeration() {
        assert_eq!(
            enumerate_group(&std(catalog::a(2)), 10, DEFAULT_GROUP_CAP)
                .unwrap()
                .len(),
            6
        );
        assert_eq!(
            enumerate_group(&std(catalog::b(2)), 10, DEFAULT_GROUP_CAP)
                .unwrap()
                .len(),
            8
        );
        let inf =
            enumerate_group(&std(catalog::infinite_dihedral()), 5, DEFAULT_GROUP_CAP).unwrap();
        assert_eq!(inf.len(), 11);
        assert!(!inf.complete());
        assert!(matches!(
            enumerate_group(&std(catalog::a(3)), 10, 5),
            Err(Error::CapExceeded(5))
        ));
    }

    #[test]
    fn product_orders() {
        let a2 = std(catalog::a(2));
        assert_eq!(
            order_of_product(&a2, 0, 1).unwrap(),
            ProductOrder::Finite { order: 3 }
        );
        let asym = CoxeterDatum::from_pairing_rows(&[vec![1.0, -1.0], vec![-0.25, 1.0]]).unwrap();
        assert_eq!(
            order_of_product(&asym, 0, 1).unwrap(),
            ProductOrder::Finite { order: 3 }
        );
        let inf = std(catalog::infinite_dihedral());
        assert!(matches!(
            order_of_product(&inf, 0, 1).unwrap(),
            ProductOrder::Infinite { .. }
        ));
        assert_eq!(
            order_of_product(&a2, 1, 1).unwrap(),
            ProductOrder::Finite { order: 1 }
        );
    }

    #[test]
    fn symmetric_difference_examples() {
        let d = std(catalog::b(3));
        let e = |word: &[usize]| Element::from_word(&d, word).unwrap();
        assert!(symmetric_difference_identity_check(&d, &e(&[0, 2, 1]), &e(&[])).unwrap());
        assert!(symmetric_difference_identity_check(&d, &e(&[1]), &e(&[1])).unwrap());
        assert!(
            symmetric_difference_identity_check(&d, &e(&[0, 1, 2, 1]), &e(&[2, 1, 0])).unwrap()
        );
    }

    #[test]
    fn reflections_match_conjugates() {
        let d = std(catalog::a(3));
        let group = enumerate_group(&d, 10, DEFAULT_GROUP_CAP).unwrap();
        let t = conjugates_of_generators(&d, &group).unwrap();
        assert_eq!(t.len(), 6);
        for r in &t {
            let direct = Reflection::from_root(&d, &r.root_pair).unwrap();
            assert!(equals(&direct.element, &r.element, 1e-9));
            let replay = Element::from_word(&d, direct.element.word()).unwrap();
            assert!(equals(&replay, &r.element, 1e-9));
        }
    }

    #[test]
    fn reduced_words_replay() {
        let d = std(catalog::h(3));
        let e = Element::from_word(&d, &[0, 1, 2, 0, 1, 0, 2, 2, 1]).unwrap();
        let rw = reduced_word(&d, &e).unwrap();
        assert!(rw.len() <= 7);
        assert!(equals(&Element::from_word(&d, &rw).unwrap(), &e, 1e-9));
    }
}
