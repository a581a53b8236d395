//! Schubert calculus on the full flag variety of a root system: expansion
//! of products of Schubert classes in the Schubert basis, intersection
//! numbers, and the inversion-set partition certificate.
//!
//! Products are computed in the Schubert basis itself. Multiplication by a
//! divisor class follows the Chevalley rule; an arbitrary class is first
//! re-expressed as a rational combination of monomials in divisor classes
//! (each graded piece is spanned by such monomials, so a linear solve
//! against a precomputed monomial expansion matrix always succeeds), after
//! which any product reduces to iterated Chevalley steps. The Borel picture
//! with divided-difference operators is implemented as an independent second
//! route whose structure constants must agree with the first.

use std::collections::{BTreeMap, HashMap};

use num::bigint::BigUint;
use num::{One, Signed, Zero};
use thiserror::Error;

use crate::linalg::{self, Mat, Rat};
use crate::rootsys::{
    InversionSet, RootSysError, RootSystem, SystemId, WeylElement, DEFAULT_WEYL_CAP,
};

#[derive(Debug, Error)]
pub enum SchubertError {
    #[error(transparent)]
    Root(#[from] RootSysError),
    #[error("Weyl group of order {order} exceeds the cap of {cap} elements")]
    CapExceeded { order: num::BigUint, cap: usize },
    #[error("need at least one factor")]
    EmptyFactors,
    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

/// Exact linear combination of Schubert basis classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchubertExpr {
    sys: SystemId,
    terms: BTreeMap<WeylElement, Rat>,
}

impl SchubertExpr {
    fn new(sys: SystemId, terms: BTreeMap<WeylElement, Rat>) -> Self {
        SchubertExpr { sys, terms }
    }

    pub fn terms(&self) -> &BTreeMap<WeylElement, Rat> {
        &self.terms
    }

    pub fn coefficient(&self, w: &WeylElement) -> Rat {
        self.terms.get(w).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Common codimension of the basis classes, when homogeneous.
    pub fn degree(&self) -> Option<usize> {
        let mut it = self.terms.keys();
        let d = it.next()?.len();
        it.all(|w| w.len() == d).then_some(d)
    }

    pub fn system_id(&self) -> SystemId {
        self.sys
    }
}

impl std::fmt::Display for SchubertExpr {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (w, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if c.is_one() {
                write!(f, "[{w}]")?;
            } else {
                write!(f, "{c}*[{w}]")?;
            }
        }
        Ok(())
    }
}

/// Result of an intersection-number query. A degree mismatch forces the
/// value 0 and is flagged rather than treated as an error.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectionOutcome {
    pub value: BigUint,
    pub degree_mismatch: bool,
}

type ClassVec = BTreeMap<usize, Rat>;

/// Schubert basis of one flag variety with cached multiplication data.
/// Construction enumerates the whole Weyl group, so it is guarded by a cap
/// on the group order; cover transitions and monomial matrices fill in
/// lazily as products demand them.
pub struct SchubertRing<'a> {
    sys: &'a RootSystem,
    elements: Vec<WeylElement>,
    layer_start: Vec<usize>,
    index: HashMap<Vec<i64>, usize>,
    /// Per element: (index of w*s_alpha one step up, positive-root index).
    covers: Vec<Option<Vec<(usize, usize)>>>,
    mono_expr: HashMap<Vec<usize>, ClassVec>,
    class_expr: HashMap<usize, Vec<(Vec<usize>, Rat)>>,
}

impl<'a> SchubertRing<'a> {
    pub fn new(sys: &'a RootSystem, cap: usize) -> Result<Self, SchubertError> {
        if *sys.weyl_order() > num::BigUint::from(cap) {
            return Err(SchubertError::CapExceeded {
                order: sys.weyl_order().clone(),
                cap,
            });
        }
        let top = sys.positive_roots().len();
        let layers = sys.elements_by_length(top, Some(cap))?;
        let mut elements = Vec::new();
        let mut layer_start = Vec::with_capacity(layers.len() + 1);
        for layer in &layers {
            layer_start.push(elements.len());
            elements.extend(layer.iter().cloned());
        }
        layer_start.push(elements.len());
        let index = elements
            .iter()
            .enumerate()
            .map(|(k, w)| (w.rho_image().to_vec(), k))
            .collect();
        let covers = vec![None; elements.len()];
        Ok(SchubertRing {
            sys,
            elements,
            layer_start,
            index,
            covers,
            mono_expr: HashMap::new(),
            class_expr: HashMap::new(),
        })
    }

    pub fn system(&self) -> &RootSystem {
        self.sys
    }

    fn element_index(&self, w: &WeylElement) -> Result<usize, SchubertError> {
        if w.system_id() != self.sys.id() {
            return Err(SchubertError::Root(RootSysError::SystemMismatch));
        }
        self.index
            .get(w.rho_image())
            .copied()
            .ok_or_else(|| SchubertError::Internal(format!("element {w} missing from the basis")))
    }

    fn ensure_covers(&mut self, v_idx: usize) {
        if self.covers[v_idx].is_some() {
            return;
        }
        let v = &self.elements[v_idx];
        let v_len = v.len();
        let mut out = Vec::new();
        for (k, root) in self.sys.positive_roots().iter().enumerate() {
            // (v s_alpha)(rho) = v(rho - <rho, alpha^vee> alpha).
            let hv: i64 = root.coroot.iter().sum();
            let mut img: Vec<i64> = root
                .weight_coords
                .iter()
                .map(|&a| 1 - hv * a)
                .collect();
            for &letter in v.word().iter().rev() {
                self.sys.reflect_weight_coords(letter - 1, &mut img);
            }
            let t = *self.index.get(&img).expect("orbit point of rho is in the group");
            if self.elements[t].len() == v_len + 1 {
                out.push((t, k));
            }
        }
        self.covers[v_idx] = Some(out);
    }

    /// Chevalley rule: multiply a class vector by the divisor class of the
    /// 0-based simple node `i0`.
    fn divisor_apply(&mut self, e: &ClassVec, i0: usize) -> ClassVec {
        let mut out = ClassVec::new();
        for (&v_idx, c) in e {
            self.ensure_covers(v_idx);
            for &(t, k) in self.covers[v_idx].as_ref().expect("just filled") {
                let m = self.sys.positive_roots()[k].coroot[i0];
                if m == 0 {
                    continue;
                }
                let add = c * linalg::rat(m);
                let slot = out.entry(t).or_insert_with(Rat::zero);
                *slot += add;
            }
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    fn mono_expr(&mut self, mono: &[usize]) -> ClassVec {
        if let Some(v) = self.mono_expr.get(mono) {
            return v.clone();
        }
        let v = if mono.is_empty() {
            let mut e = ClassVec::new();
            e.insert(0, Rat::one());
            e
        } else {
            let parent = self.mono_expr(&mono[..mono.len() - 1]);
            self.divisor_apply(&parent, mono[mono.len() - 1])
        };
        self.mono_expr.insert(mono.to_vec(), v.clone());
        v
    }

    fn monomials(&self, degree: usize) -> Vec<Vec<usize>> {
        let n = self.sys.rank();
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(degree);
        fn rec(n: usize, degree: usize, lo: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == degree {
                out.push(cur.clone());
                return;
            }
            for i in lo..n {
                cur.push(i);
                rec(n, degree, i, cur, out);
                cur.pop();
            }
        }
        rec(n, degree, 0, &mut cur, &mut out);
        out
    }

    /// Expression of the basis class `u` as a combination of monomials in
    /// divisor classes, solved once per element against the monomial
    /// expansion matrix of its degree.
    fn class_in_monomials(
        &mut self,
        u_idx: usize,
    ) -> Result<Vec<(Vec<usize>, Rat)>, SchubertError> {
        if let Some(x) = self.class_expr.get(&u_idx) {
            return Ok(x.clone());
        }
        let d = self.elements[u_idx].len();
        let monos = self.monomials(d);
        let lo = self.layer_start[d];
        let hi = self.layer_start[d + 1];
        let mut a: Mat = vec![vec![Rat::zero(); monos.len()]; hi - lo];
        for (col, m) in monos.iter().enumerate() {
            for (idx, c) in self.mono_expr(m) {
                debug_assert!((lo..hi).contains(&idx));
                a[idx - lo][col] = c;
            }
        }
        let mut b = vec![Rat::zero(); hi - lo];
        b[u_idx - lo] = Rat::one();
        let x = linalg::solve_any(&a, &b).ok_or_else(|| {
            SchubertError::Internal(format!(
                "degree-{d} monomials failed to span the class of {}",
                self.elements[u_idx]
            ))
        })?;
        let combo: Vec<(Vec<usize>, Rat)> = monos
            .into_iter()
            .zip(x)
            .filter(|(_, c)| !c.is_zero())
            .collect();
        self.class_expr.insert(u_idx, combo.clone());
        Ok(combo)
    }

    fn mul_class(&mut self, e: &ClassVec, u_idx: usize) -> Result<ClassVec, SchubertError> {
        if self.elements[u_idx].len() == 0 {
            return Ok(e.clone());
        }
        let combo = self.class_in_monomials(u_idx)?;
        let mut out = ClassVec::new();
        for (mono, coeff) in combo {
            let mut part = e.clone();
            for &i0 in &mono {
                part = self.divisor_apply(&part, i0);
            }
            for (idx, c) in part {
                let slot = out.entry(idx).or_insert_with(Rat::zero);
                *slot += c * &coeff;
            }
        }
        out.retain(|_, c| !c.is_zero());
        Ok(out)
    }

    fn check_positive_integral(&self, e: &ClassVec) -> Result<(), SchubertError> {
        for (idx, c) in e {
            if !c.is_integer() || c.is_negative() {
                return Err(SchubertError::Internal(format!(
                    "coefficient {c} of [{}] is not a nonnegative integer",
                    self.elements[*idx]
                )));
            }
        }
        Ok(())
    }

    /// Expands a product of Schubert classes in the Schubert basis.
    pub fn product(&mut self, factors: &[WeylElement]) -> Result<SchubertExpr, SchubertError> {
        if factors.is_empty() {
            return Err(SchubertError::EmptyFactors);
        }
        let mut idxs = Vec::with_capacity(factors.len());
        for f in factors {
            idxs.push(self.element_index(f)?);
        }
        // Longest factor first: it rides along as the base vector while the
        // shorter ones are applied through their monomial expressions.
        idxs.sort_by_key(|&i| std::cmp::Reverse(self.elements[i].len()));
        let mut e = ClassVec::new();
        e.insert(idxs[0], Rat::one());
        for &u in &idxs[1..] {
            e = self.mul_class(&e, u)?;
            self.check_positive_integral(&e)?;
        }
        let terms = e
            .into_iter()
            .map(|(idx, c)| (self.elements[idx].clone(), c))
            .collect();
        Ok(SchubertExpr::new(self.sys.id(), terms))
    }

    /// Coefficient of the class of `w` in the product of the classes of
    /// `ws`; zero with a note when the gradings already rule it out.
    pub fn intersection_number(
        &mut self,
        ws: &[WeylElement],
        w: &WeylElement,
    ) -> Result<IntersectionOutcome, SchubertError> {
        if ws.is_empty() {
            return Err(SchubertError::EmptyFactors);
        }
        let total: usize = ws.iter().map(|x| x.len()).sum();
        if total != w.len() {
            return Ok(IntersectionOutcome { value: BigUint::zero(), degree_mismatch: true });
        }
        self.element_index(w)?;
        let prod = self.product(ws)?;
        let c = prod.coefficient(w);
        if !c.is_integer() || c.is_negative() {
            return Err(SchubertError::Internal(format!(
                "intersection number {c} is not a nonnegative integer"
            )));
        }
        let value = c.to_integer().to_biguint().expect("checked nonnegative");
        Ok(IntersectionOutcome { value, degree_mismatch: false })
    }
}

/// One-shot product expansion; builds a ring with the default cap.
pub fn schubert_product(
    sys: &RootSystem,
    factors: &[WeylElement],
) -> Result<SchubertExpr, SchubertError> {
    SchubertRing::new(sys, DEFAULT_WEYL_CAP)?.product(factors)
}

/// One-shot intersection number; builds a ring with the default cap.
pub fn intersection_number(
    sys: &RootSystem,
    ws: &[WeylElement],
    w: &WeylElement,
) -> Result<IntersectionOutcome, SchubertError> {
    SchubertRing::new(sys, DEFAULT_WEYL_CAP)?.intersection_number(ws, w)
}

/// True when the inversion sets of `ws` are pairwise disjoint and their
/// union is exactly the inversion set of `w`. A sufficient certificate that
/// the intersection number of the family is 1.
pub fn disjoint_inversion_check(
    sys: &RootSystem,
    ws: &[WeylElement],
    w: &WeylElement,
) -> Result<bool, SchubertError> {
    let mut acc: InversionSet = sys.inversion_set(&sys.identity())?;
    for wi in ws {
        let inv = sys.inversion_set(wi)?;
        if !acc.is_disjoint_from(&inv) {
            return Ok(false);
        }
        acc = acc.union(&inv);
    }
    Ok(acc == sys.inversion_set(w)?)
}

/// Polynomial in the simple-root coordinates, with exact rational
/// coefficients. Keys are exponent vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolynomialRep {
    sys: SystemId,
    n: usize,
    terms: BTreeMap<Vec<u32>, Rat>,
}

impl PolynomialRep {
    pub fn zero(sys: &RootSystem) -> Self {
        PolynomialRep { sys: sys.id(), n: sys.rank(), terms: BTreeMap::new() }
    }

    pub fn constant(sys: &RootSystem, c: Rat) -> Self {
        let mut p = Self::zero(sys);
        if !c.is_zero() {
            p.terms.insert(vec![0; p.n], c);
        }
        p
    }

    /// The simple root `alpha_i` (1-based) as a degree-one polynomial.
    pub fn simple_root(sys: &RootSystem, i: usize) -> Result<Self, RootSysError> {
        if i == 0 || i > sys.rank() {
            return Err(RootSysError::NodeOutOfRange { index: i, rank: sys.rank() });
        }
        let mut p = Self::zero(sys);
        let mut e = vec![0u32; p.n];
        e[i - 1] = 1;
        p.terms.insert(e, Rat::one());
        Ok(p)
    }

    /// A linear form with the given coefficients on the simple roots.
    pub fn linear_form(sys: &RootSystem, coeffs: &[i64]) -> Self {
        let mut p = Self::zero(sys);
        for (i, &c) in coeffs.iter().enumerate() {
            if c != 0 {
                let mut e = vec![0u32; p.n];
                e[i] = 1;
                p.terms.insert(e, linalg::rat(c));
            }
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Maximum total degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn constant_term(&self) -> Rat {
        self.terms.get(&vec![0; self.n]).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.sys, other.sys);
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            let slot = terms.entry(e.clone()).or_insert_with(Rat::zero);
            *slot += c;
        }
        terms.retain(|_, c| !c.is_zero());
        PolynomialRep { sys: self.sys, n: self.n, terms }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.sys, other.sys);
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            let slot = terms.entry(e.clone()).or_insert_with(Rat::zero);
            *slot -= c;
        }
        terms.retain(|_, c| !c.is_zero());
        PolynomialRep { sys: self.sys, n: self.n, terms }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.sys, other.sys);
        let mut terms: BTreeMap<Vec<u32>, Rat> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                let slot = terms.entry(e).or_insert_with(Rat::zero);
                *slot += ca * cb;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        PolynomialRep { sys: self.sys, n: self.n, terms }
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return PolynomialRep { sys: self.sys, n: self.n, terms: BTreeMap::new() };
        }
        PolynomialRep {
            sys: self.sys,
            n: self.n,
            terms: self.terms.iter().map(|(e, a)| (e.clone(), a * c)).collect(),
        }
    }

    /// Action of the simple reflection `s_i` (0-based `i0`) by substitution
    /// on the root coordinates.
    fn reflect(&self, sys: &RootSystem, i0: usize) -> Self {
        assert_eq!(self.sys, sys.id());
        let cartan = sys.cartan();
        let mut out = Self::zero(sys);
        for (e, c) in &self.terms {
            // v_i -> -v_i and v_j -> v_j - C[j][i0] v_i for j != i0.
            let mut term = Self::constant(sys, c.clone());
            for (j, &ej) in e.iter().enumerate() {
                if ej == 0 {
                    continue;
                }
                let base = if j == i0 {
                    let mut m = Self::zero(sys);
                    let mut ev = vec![0u32; self.n];
                    ev[i0] = 1;
                    m.terms.insert(ev, -Rat::one());
                    m
                } else {
                    let mut m = Self::zero(sys);
                    let mut ev = vec![0u32; self.n];
                    ev[j] = 1;
                    m.terms.insert(ev, Rat::one());
                    if cartan[j][i0] != 0 {
                        let mut ei = vec![0u32; self.n];
                        ei[i0] = 1;
                        m.terms.insert(ei, linalg::rat(-cartan[j][i0]));
                    }
                    m
                };
                for _ in 0..ej {
                    term = term.mul(&base);
                }
            }
            out = out.add(&term);
        }
        out
    }
}

/// The operator `f -> (f - s_i f) / alpha_i` on polynomial representatives.
pub fn divided_difference(
    sys: &RootSystem,
    i: usize,
    f: &PolynomialRep,
) -> Result<PolynomialRep, SchubertError> {
    if i == 0 || i > sys.rank() {
        return Err(SchubertError::Root(RootSysError::NodeOutOfRange {
            index: i,
            rank: sys.rank(),
        }));
    }
    let i0 = i - 1;
    let g = f.sub(&f.reflect(sys, i0));
    let mut terms = BTreeMap::new();
    for (e, c) in g.terms {
        if e[i0] == 0 {
            return Err(SchubertError::Internal(
                "difference not divisible by the simple root".into(),
            ));
        }
        let mut e2 = e;
        e2[i0] -= 1;
        terms.insert(e2, c);
    }
    Ok(PolynomialRep { sys: sys.id(), n: sys.rank(), terms })
}

/// Borel-presentation representative of the Schubert class of `w`: the top
/// representative is the positive-root product normalized by the group
/// order, and lower classes follow by divided differences.
pub fn borel_representative(
    sys: &RootSystem,
    w: &WeylElement,
) -> Result<PolynomialRep, SchubertError> {
    let mut top = PolynomialRep::constant(sys, Rat::one());
    for root in sys.positive_roots() {
        top = top.mul(&PolynomialRep::linear_form(sys, &root.root_coords));
    }
    let order = Rat::from(num::BigInt::from(sys.weyl_order().clone()));
    let mut f = top.scale(&order.recip());
    let z = sys.compose(&sys.inverse(w)?, &sys.longest_element())?;
    for &letter in z.word().iter().rev() {
        f = divided_difference(sys, letter, &f)?;
    }
    Ok(f)
}

/// Structure constant of the Schubert basis extracted in the Borel picture:
/// the coefficient of the class of `w` in the product of the classes of `u`
/// and `v`. Zero when the gradings do not match.
pub fn structure_constant(
    sys: &RootSystem,
    u: &WeylElement,
    v: &WeylElement,
    w: &WeylElement,
) -> Result<Rat, SchubertError> {
    if u.len() + v.len() != w.len() {
        return Ok(Rat::zero());
    }
    let mut p = borel_representative(sys, u)?.mul(&borel_representative(sys, v)?);
    for &letter in w.word().iter().rev() {
        p = divided_difference(sys, letter, &p)?;
    }
    if p.degree().unwrap_or(0) > 0 {
        return Err(SchubertError::Internal(
            "divided differences left a positive-degree remainder".into(),
        ));
    }
    Ok(p.constant_term())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sys(t: &str) -> RootSystem {
        RootSystem::from_type_str(t).unwrap()
    }

    fn word(s: &RootSystem, w: &str) -> WeylElement {
        s.parse_word(w).unwrap()
    }

    fn int(x: i64) -> Rat {
        linalg::rat(x)
    }

    #[test]
    fn divisor_squared_on_a5() {
        let a5 = sys("A5");
        let p = schubert_product(&a5, &[word(&a5, "s3"), word(&a5, "s3")]).unwrap();
        assert_eq!(p.coefficient(&word(&a5, "s4s3")), int(1));
        assert_eq!(p.coefficient(&word(&a5, "s2s3")), int(1));
        assert_eq!(p.terms().len(), 2);
        assert_eq!(p.degree(), Some(2));
    }

    #[test]
    fn identity_class_is_neutral() {
        let a3 = sys("A3");
        let v = word(&a3, "s2s1s3");
        let p = schubert_product(&a3, &[a3.identity(), v.clone()]).unwrap();
        assert_eq!(p.terms().len(), 1);
        assert_eq!(p.coefficient(&v), int(1));
    }

    #[test]
    fn lagrangian_grassmannian_product_on_c5() {
        let c5 = sys("C5");
        let p = schubert_product(&c5, &[word(&c5, "s5"), word(&c5, "s4s5")]).unwrap();
        assert_eq!(p.coefficient(&word(&c5, "s3s4s5")), int(2));
        assert_eq!(p.coefficient(&word(&c5, "s5s4s5")), int(1));
        assert_eq!(p.terms().len(), 2);
    }

    #[test]
    fn intersection_numbers_from_the_examples() {
        let a5 = sys("A5");
        let out = intersection_number(
            &a5,
            &[word(&a5, "s3"), word(&a5, "s3")],
            &word(&a5, "s4s3"),
        )
        .unwrap();
        assert_eq!(out.value, BigUint::from(1u8));
        assert!(!out.degree_mismatch);

        let e = a5.identity();
        let out = intersection_number(&a5, &[e.clone(), e.clone()], &e).unwrap();
        assert_eq!(out.value, BigUint::from(1u8));

        let c5 = sys("C5");
        let out = intersection_number(
            &c5,
            &[word(&c5, "s5"), word(&c5, "s4s5")],
            &word(&c5, "s5s4s5"),
        )
        .unwrap();
        assert_eq!(out.value, BigUint::from(1u8));

        // Degree mismatch reports zero with the note set.
        let out = intersection_number(&a5, &[word(&a5, "s3")], &word(&a5, "s4s3")).unwrap();
        assert_eq!(out.value, BigUint::zero());
        assert!(out.degree_mismatch);
    }

    #[test]
    fn disjoint_inversion_examples() {
        let a4 = sys("A4");
        assert!(disjoint_inversion_check(
            &a4,
            &[word(&a4, "s3s4s2"), word(&a4, "s4s2s3")],
            &word(&a4, "s2s3s4s2s3s2"),
        )
        .unwrap());
        let a2 = sys("A2");
        assert!(disjoint_inversion_check(&a2, &[a2.identity()], &a2.identity()).unwrap());
        assert!(!disjoint_inversion_check(
            &a2,
            &[word(&a2, "s1"), word(&a2, "s1")],
            &word(&a2, "s1s2"),
        )
        .unwrap());
    }

    #[test]
    fn products_commute_and_associate() {
        let b3 = sys("B3");
        let mut ring = SchubertRing::new(&b3, DEFAULT_WEYL_CAP).unwrap();
        let xs = [word(&b3, "s1s2"), word(&b3, "s3"), word(&b3, "s2")];
        let p1 = ring.product(&[xs[0].clone(), xs[1].clone(), xs[2].clone()]).unwrap();
        let p2 = ring.product(&[xs[2].clone(), xs[0].clone(), xs[1].clone()]).unwrap();
        assert_eq!(p1, p2);
        // Associativity: multiply a partial product's expansion term by term.
        let partial = ring.product(&[xs[0].clone(), xs[1].clone()]).unwrap();
        let mut acc: BTreeMap<WeylElement, Rat> = BTreeMap::new();
        for (wt, c) in partial.terms() {
            let q = ring.product(&[wt.clone(), xs[2].clone()]).unwrap();
            for (k, v) in q.terms() {
                let slot = acc.entry(k.clone()).or_insert_with(Rat::zero);
                *slot += v * c;
            }
        }
        acc.retain(|_, c| !c.is_zero());
        assert_eq!(&acc, p1.terms());
    }

    #[test]
    fn poincare_duality_on_a3() {
        let a3 = sys("A3");
        let w0 = a3.longest_element();
        let mut ring = SchubertRing::new(&a3, DEFAULT_WEYL_CAP).unwrap();
        for u in a3.all_elements(None).unwrap() {
            let dual = a3.compose(&w0, &u).unwrap();
            let out = ring.intersection_number(&[u.clone(), dual], &w0).unwrap();
            assert_eq!(out.value, BigUint::from(1u8), "u={u}");
        }
    }

    #[test]
    fn quadric_relations_on_d4_and_d5() {
        for n in [4usize, 5] {
            let dn = sys(&format!("D{n}"));
            let mut ring = SchubertRing::new(&dn, DEFAULT_WEYL_CAP).unwrap();
            let h = word(&dn, "s1");
            let chain = |top: usize| -> WeylElement {
                let mut s = String::new();
                for k in (1..=top).rev() {
                    s.push_str(&format!("s{k}"));
                }
                dn.parse_word(&s).unwrap()
            };
            // a and b take the two ways through the fork.
            let mut aw = format!("s{}", n - 1);
            let mut bw = format!("s{n}");
            for k in (1..=n - 2).rev() {
                aw.push_str(&format!("s{k}"));
                bw.push_str(&format!("s{k}"));
            }
            let a = dn.parse_word(&aw).unwrap();
            let b = dn.parse_word(&bw).unwrap();
            let hs: Vec<WeylElement> = std::iter::repeat(h.clone()).take(n - 1).collect();
            let hpow = ring.product(&hs).unwrap();
            let mut expected: BTreeMap<WeylElement, Rat> = BTreeMap::new();
            expected.insert(a.clone(), int(1));
            expected.insert(b.clone(), int(1));
            assert_eq!(hpow.terms(), &expected, "D{n}: (n-1)-fold divisor power");
            // Sanity: the lower powers stay on the single chain class.
            let hs3: Vec<WeylElement> = std::iter::repeat(h.clone()).take(n - 2).collect();
            let hlow = ring.product(&hs3).unwrap();
            assert_eq!(hlow.coefficient(&chain(n - 2)), int(1));
            assert_eq!(hlow.terms().len(), 1);
            let ha = ring.product(&[h.clone(), a]).unwrap();
            let hb = ring.product(&[h.clone(), b]).unwrap();
            assert_eq!(ha, hb, "D{n}: the two middle classes meet the divisor equally");
        }
    }

    #[test]
    fn divided_difference_basics() {
        let a2 = sys("A2");
        let a1 = PolynomialRep::simple_root(&a2, 1).unwrap();
        let d = divided_difference(&a2, 1, &a1).unwrap();
        assert_eq!(d, PolynomialRep::constant(&a2, int(2)));
        let c = PolynomialRep::constant(&a2, int(5));
        assert!(divided_difference(&a2, 1, &c).unwrap().is_zero());
        // Applying the same operator twice kills anything.
        let f = a1.mul(&a1).mul(&PolynomialRep::simple_root(&a2, 2).unwrap());
        let once = divided_difference(&a2, 1, &f).unwrap();
        let twice = divided_difference(&a2, 1, &once).unwrap();
        assert!(twice.is_zero());
    }

    #[test]
    fn top_representative_reduces_to_one() {
        let a2 = sys("A2");
        let a1 = PolynomialRep::simple_root(&a2, 1).unwrap();
        let a2root = PolynomialRep::simple_root(&a2, 2).unwrap();
        let top = a1.mul(&a2root).mul(&a1.add(&a2root)).scale(&Rat::new(1.into(), 6.into()));
        let mut f = top;
        for i in [1, 2, 1] {
            f = divided_difference(&a2, i, &f).unwrap();
        }
        assert_eq!(f, PolynomialRep::constant(&a2, int(1)));
    }

    #[test]
    fn identity_representative_is_one() {
        for t in ["A2", "B2", "A3"] {
            let s = sys(t);
            let f = borel_representative(&s, &s.identity()).unwrap();
            assert_eq!(f, PolynomialRep::constant(&s, int(1)), "{t}");
        }
    }

    #[test]
    fn borel_route_matches_basis_route_exhaustively() {
        for t in ["A2", "B2"] {
            let s = sys(t);
            let mut ring = SchubertRing::new(&s, DEFAULT_WEYL_CAP).unwrap();
            let all = s.all_elements(None).unwrap();
            for u in &all {
                for v in &all {
                    if u.len() + v.len() > s.positive_roots().len() {
                        continue;
                    }
                    let p = ring.product(&[u.clone(), v.clone()]).unwrap();
                    for w in &all {
                        if w.len() != u.len() + v.len() {
                            continue;
                        }
                        let c = structure_constant(&s, u, v, w).unwrap();
                        assert_eq!(c, p.coefficient(w), "{t}: [{u}]*[{v}] at [{w}]");
                    }
                }
            }
        }
    }

    #[test]
    fn borel_route_matches_basis_route_on_a3_samples() {
        let s = sys("A3");
        let mut ring = SchubertRing::new(&s, DEFAULT_WEYL_CAP).unwrap();
        let all = s.all_elements(None).unwrap();
        // Every pair with both factors of length at most 3.
        for u in all.iter().filter(|x| x.len() <= 3) {
            for v in all.iter().filter(|x| x.len() <= 3) {
                let p = ring.product(&[u.clone(), v.clone()]).unwrap();
                for w in all.iter().filter(|x| x.len() == u.len() + v.len()) {
                    let c = structure_constant(&s, u, v, w).unwrap();
                    assert_eq!(c, p.coefficient(w), "[{u}]*[{v}] at [{w}]");
                }
            }
        }
    }
}
