//! Weight multiplicities, dimensions, and tensor-product decompositions.
//!
//! Multiplicities of an irreducible come from the Freudenthal recursion,
//! evaluated lazily over the finite set of dominant weights under the
//! highest weight. Pairwise tensor products use the orbit-sum rule iterated
//! over the factor with the smaller weight support; products with more
//! factors fold the small factors first and finish with a signed Weyl-orbit
//! contraction against a single multiplicity table of the largest factor,
//! which avoids ever expanding the big module. A brute-force character
//! product with greedy peeling, plus a Kostant-partition alternating sum,
//! serve as independent cross-checks on small instances.

use std::collections::{BTreeMap, HashMap, HashSet};

use num::bigint::{BigInt, BigUint};
use num::{Integer, One, Signed, Zero};
use thiserror::Error;

use crate::rootsys::{RootSysError, RootSystem, SystemId, Weight};

#[derive(Debug, Error)]
pub enum RepsError {
    #[error(transparent)]
    Root(#[from] RootSysError),
    #[error("weight {0} is not dominant")]
    NotDominant(String),
    #[error("need at least one tensor factor")]
    EmptyFactors,
    #[error("character oracle workload {needed} exceeds the cap {cap}")]
    OracleCapExceeded { needed: u128, cap: u128 },
    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

/// Reasonable default workload cap for [`character_product_oracle`].
pub const DEFAULT_ORACLE_CAP: u128 = 20_000_000;

/// Formal nonnegative sum of dominant weights, e.g. a tensor-product
/// decomposition into irreducibles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Character {
    sys: SystemId,
    terms: BTreeMap<Weight, BigUint>,
}

impl Character {
    fn new(sys: SystemId, terms: BTreeMap<Weight, BigUint>) -> Self {
        Character { sys, terms }
    }

    pub fn terms(&self) -> &BTreeMap<Weight, BigUint> {
        &self.terms
    }

    pub fn multiplicity(&self, w: &Weight) -> BigUint {
        self.terms.get(w).cloned().unwrap_or_else(BigUint::zero)
    }

    pub fn constituent_count(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total dimension, counting multiplicities.
    pub fn total_dim(&self, sys: &RootSystem) -> Result<BigUint, RepsError> {
        let mut acc = BigUint::zero();
        for (w, m) in &self.terms {
            acc += weyl_dim(sys, w)? * m;
        }
        Ok(acc)
    }
}

fn ensure_dominant(w: &Weight) -> Result<(), RepsError> {
    if w.is_dominant() {
        Ok(())
    } else {
        Err(RepsError::NotDominant(w.to_string()))
    }
}

/// Reflects coordinates to the dominant chamber. Multiplicities are
/// Weyl-invariant, so tables may be queried through this.
pub(crate) fn dominantize(sys: &RootSystem, mut v: Vec<i64>) -> Vec<i64> {
    loop {
        let Some(i) = v.iter().position(|&c| c < 0) else { return v };
        sys.reflect_weight_coords(i, &mut v);
    }
}

/// Dominant representative together with the determinant of the reflecting
/// element, or `None` when the vector lies on a chamber wall.
pub(crate) fn dominantize_signed(sys: &RootSystem, mut v: Vec<i64>) -> Option<(Vec<i64>, i8)> {
    let mut sign = 1i8;
    loop {
        if v.iter().any(|&c| c == 0) {
            return None;
        }
        let Some(i) = v.iter().position(|&c| c < 0) else {
            return Some((v, sign));
        };
        sys.reflect_weight_coords(i, &mut v);
        sign = -sign;
    }
}

/// Distinct points of the Weyl orbit of `start`, in BFS order.
pub fn weyl_orbit(sys: &RootSystem, start: &[i64]) -> Vec<Vec<i64>> {
    let mut seen: HashSet<Vec<i64>> = HashSet::new();
    let mut queue: Vec<Vec<i64>> = vec![start.to_vec()];
    seen.insert(start.to_vec());
    let mut head = 0;
    while head < queue.len() {
        let v = queue[head].clone();
        head += 1;
        for i0 in 0..sys.rank() {
            let mut img = v.clone();
            sys.reflect_weight_coords(i0, &mut img);
            if seen.insert(img.clone()) {
                queue.push(img);
            }
        }
    }
    queue
}

/// Orbit of a regular vector with the sign of the unique group element
/// carrying `start` to each point. `start` must be strictly dominant.
fn signed_orbit(sys: &RootSystem, start: &[i64]) -> Vec<(Vec<i64>, i8)> {
    debug_assert!(start.iter().all(|&c| c > 0), "signed orbits need a regular seed");
    let mut seen: HashSet<Vec<i64>> = HashSet::new();
    let mut queue: Vec<(Vec<i64>, i8)> = vec![(start.to_vec(), 1)];
    seen.insert(start.to_vec());
    let mut head = 0;
    while head < queue.len() {
        let (v, sign) = queue[head].clone();
        head += 1;
        for i0 in 0..sys.rank() {
            let mut img = v.clone();
            sys.reflect_weight_coords(i0, &mut img);
            if seen.insert(img.clone()) {
                queue.push((img, -sign));
            }
        }
    }
    queue
}

/// Integer adjugate of the transposed Cartan matrix together with its
/// determinant: `adj = det * (C^T)^{-1}`, so `adj * y` gives `det` times the
/// root-basis coordinates of `y` in pure integer arithmetic.
pub(crate) fn cartan_t_adjugate(sys: &RootSystem) -> (Vec<Vec<i64>>, i64) {
    let det: i64 = sys
        .factors()
        .iter()
        .map(|&(fam, r)| match fam {
            crate::rootsys::Family::A => (r + 1) as i64,
            crate::rootsys::Family::B | crate::rootsys::Family::C => 2,
            crate::rootsys::Family::D => 4,
        })
        .product();
    let inv = sys.inverse_cartan_transpose();
    let adj: Vec<Vec<i64>> = inv
        .iter()
        .map(|row| {
            row.iter()
                .map(|e| {
                    let scaled = e * crate::linalg::rat(det);
                    assert!(scaled.is_integer(), "adjugate entries must be integers");
                    i64::try_from(&scaled.to_integer()).expect("adjugate entry fits in i64")
                })
                .collect()
        })
        .collect();
    (adj, det)
}

fn adj_apply(adj: &[Vec<i64>], v: &[i64]) -> Vec<i64> {
    adj.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
}

/// Per-coordinate bounds of the root-coordinate box under `lambda`, i.e.
/// `floor` of the root-basis coordinates of `lambda`.
fn box_bounds(sys: &RootSystem, adj: &[Vec<i64>], det: i64, lambda: &[i64]) -> Vec<i64> {
    let _ = sys;
    adj_apply(adj, lambda).into_iter().map(|y| y.div_euclid(det)).collect()
}

fn box_size(bounds: &[i64]) -> u128 {
    let mut acc: u128 = 1;
    for &b in bounds {
        acc = acc.saturating_mul((b + 1) as u128);
    }
    acc
}

/// Lazily filled table of weight multiplicities of the irreducible with a
/// given highest weight, memoized per dominant weight.
#[derive(Debug, Clone)]
pub struct WeightMultTable {
    sys: SystemId,
    lambda: Vec<i64>,
    /// Dominant weights under lambda, ascending in height of `lambda - beta`.
    entries: Vec<TableEntry>,
    index: HashMap<Vec<i64>, usize>,
}

#[derive(Debug, Clone)]
struct TableEntry {
    beta: Vec<i64>,
    /// Root-basis coordinates of `lambda - beta` (nonnegative integers).
    x: Vec<i64>,
    mult: Option<BigUint>,
}

impl WeightMultTable {
    pub fn new(sys: &RootSystem, lambda: &Weight) -> Result<Self, RepsError> {
        if lambda.system_id() != sys.id() {
            return Err(RepsError::Root(RootSysError::SystemMismatch));
        }
        ensure_dominant(lambda)?;
        let n = sys.rank();
        let lam = lambda.coords().to_vec();
        let (adj, det) = cartan_t_adjugate(sys);
        let bounds = box_bounds(sys, &adj, det, &lam);
        let cartan = sys.cartan();
        // Odometer scan of the box, keeping cells where lambda - C^T x is
        // dominant. beta is updated incrementally as the odometer turns.
        let mut raw: Vec<(Vec<i64>, Vec<i64>)> = Vec::new();
        let mut x = vec![0i64; n];
        let mut beta = lam.clone();
        'scan: loop {
            if beta.iter().all(|&c| c >= 0) {
                raw.push((beta.clone(), x.clone()));
            }
            let mut i = 0;
            loop {
                if i == n {
                    break 'scan;
                }
                if x[i] < bounds[i] {
                    x[i] += 1;
                    for (b, row) in beta.iter_mut().zip(&cartan[i]) {
                        *b -= row;
                    }
                    break;
                }
                for (b, row) in beta.iter_mut().zip(&cartan[i]) {
                    *b += x[i] * row;
                }
                x[i] = 0;
                i += 1;
            }
        }
        raw.sort_by_key(|(beta, x)| (x.iter().sum::<i64>(), beta.clone()));
        let mut entries = Vec::with_capacity(raw.len());
        let mut index = HashMap::with_capacity(raw.len());
        for (k, (beta, x)) in raw.into_iter().enumerate() {
            index.insert(beta.clone(), k);
            entries.push(TableEntry { beta, x, mult: None });
        }
        Ok(WeightMultTable { sys: sys.id(), lambda: lam, entries, index })
    }

    pub fn highest_weight(&self, sys: &RootSystem) -> Weight {
        sys.weight(&self.lambda).expect("stored highest weight is valid")
    }

    /// Number of dominant weights of the module.
    pub fn dominant_count(&self) -> usize {
        self.entries.len()
    }

    pub fn dominant_entries(&self) -> impl Iterator<Item = &[i64]> {
        self.entries.iter().map(|e| e.beta.as_slice())
    }

    pub fn multiplicity(&mut self, sys: &RootSystem, beta: &Weight) -> Result<BigUint, RepsError> {
        if beta.system_id() != self.sys || sys.id() != self.sys {
            return Err(RepsError::Root(RootSysError::SystemMismatch));
        }
        Ok(self.mult_coords(sys, beta.coords()))
    }

    /// Multiplicity of an arbitrary (not necessarily dominant) weight.
    pub(crate) fn mult_coords(&mut self, sys: &RootSystem, coords: &[i64]) -> BigUint {
        let dom = dominantize(sys, coords.to_vec());
        match self.index.get(&dom) {
            Some(&i) => {
                self.fill(sys, i);
                self.entries[i].mult.clone().expect("fill computes the entry")
            }
            None => BigUint::zero(),
        }
    }

    pub fn fill_all(&mut self, sys: &RootSystem) {
        for i in (0..self.entries.len()).rev() {
            self.fill(sys, i);
        }
    }

    fn fill(&mut self, sys: &RootSystem, start: usize) {
        if self.entries[start].mult.is_some() {
            return;
        }
        let norm2 = sys.norm2_simple().to_vec();
        let mut stack = vec![start];
        while let Some(&top) = stack.last() {
            if self.entries[top].mult.is_some() {
                stack.pop();
                continue;
            }
            let beta = self.entries[top].beta.clone();
            let x = self.entries[top].x.clone();
            if x.iter().all(|&v| v == 0) {
                self.entries[top].mult = Some(BigUint::one());
                stack.pop();
                continue;
            }
            let mut numer = BigUint::zero();
            let mut missing: Vec<usize> = Vec::new();
            for root in sys.positive_roots() {
                let mut kmax = i64::MAX;
                for (xi, ai) in x.iter().zip(&root.root_coords) {
                    if *ai > 0 {
                        kmax = kmax.min(xi / ai);
                    }
                }
                if kmax <= 0 {
                    continue;
                }
                let mut v = beta.clone();
                for _ in 1..=kmax {
                    for (vj, wj) in v.iter_mut().zip(&root.weight_coords) {
                        *vj += wj;
                    }
                    let pairing: i64 = root.coroot.iter().zip(&v).map(|(c, vj)| c * vj).sum();
                    debug_assert!(pairing > 0, "terms above a dominant weight pair positively");
                    let dom = dominantize(sys, v.clone());
                    let Some(&j) = self.index.get(&dom) else { continue };
                    match &self.entries[j].mult {
                        Some(m) => numer += m * ((root.norm2 * pairing) as u64),
                        None => missing.push(j),
                    }
                }
            }
            if !missing.is_empty() {
                stack.extend(missing);
                continue;
            }
            let denom2: i64 = (0..x.len())
                .map(|i| x[i] * norm2[i] * (self.lambda[i] + beta[i] + 2))
                .sum();
            debug_assert!(denom2 > 0);
            let numer2 = numer * 2u8;
            let (q, r) = numer2.div_rem(&BigUint::from(denom2 as u64));
            assert!(r.is_zero(), "Freudenthal division must be exact");
            self.entries[top].mult = Some(q);
            stack.pop();
        }
    }
}

/// Dimension of the irreducible module with the given highest weight.
pub fn weyl_dim(sys: &RootSystem, lambda: &Weight) -> Result<BigUint, RepsError> {
    if lambda.system_id() != sys.id() {
        return Err(RepsError::Root(RootSysError::SystemMismatch));
    }
    ensure_dominant(lambda)?;
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for root in sys.positive_roots() {
        let a: i64 = root.coroot.iter().zip(lambda.coords()).map(|(c, l)| c * (l + 1)).sum();
        let b: i64 = root.coroot.iter().sum();
        num *= a as u64;
        den *= b as u64;
    }
    let (q, r) = num.div_rem(&den);
    debug_assert!(r.is_zero(), "Weyl dimension is an integer");
    Ok(q)
}

/// All distinct weights of the irreducible with highest weight `lambda`,
/// with multiplicities.
fn expand_weights(sys: &RootSystem, lambda: &Weight) -> Result<Vec<(Vec<i64>, BigUint)>, RepsError> {
    let mut table = WeightMultTable::new(sys, lambda)?;
    table.fill_all(sys);
    let mut out = Vec::new();
    for i in 0..table.entries.len() {
        let m = table.entries[i].mult.clone().expect("table was filled");
        for p in weyl_orbit(sys, &table.entries[i].beta) {
            out.push((p, m.clone()));
        }
    }
    Ok(out)
}

/// Decomposes the tensor product of two irreducibles into irreducibles.
pub fn tensor_decompose(
    sys: &RootSystem,
    a: &Weight,
    b: &Weight,
) -> Result<Character, RepsError> {
    ensure_dominant(a)?;
    ensure_dominant(b)?;
    let (adj, det) = cartan_t_adjugate(sys);
    let size = |w: &Weight| box_size(&box_bounds(sys, &adj, det, w.coords()));
    let (anchor, expand) = if size(a) <= size(b) { (b, a) } else { (a, b) };
    let mut acc: BTreeMap<Vec<i64>, BigInt> = BTreeMap::new();
    for (p, m) in expand_weights(sys, expand)? {
        let v: Vec<i64> =
            anchor.coords().iter().zip(&p).map(|(l, pi)| l + pi + 1).collect();
        if let Some((dom, sign)) = dominantize_signed(sys, v) {
            let nu: Vec<i64> = dom.into_iter().map(|c| c - 1).collect();
            let term = BigInt::from(m);
            let slot = acc.entry(nu).or_insert_with(BigInt::zero);
            if sign > 0 {
                *slot += term;
            } else {
                *slot -= term;
            }
        }
    }
    let mut terms = BTreeMap::new();
    for (nu, c) in acc {
        if c.is_zero() {
            continue;
        }
        if c.is_negative() {
            return Err(RepsError::Internal(format!(
                "negative multiplicity {c} in tensor decomposition"
            )));
        }
        terms.insert(sys.weight(&nu)?, c.to_biguint().expect("checked nonnegative"));
    }
    Ok(Character::new(sys.id(), terms))
}

/// Multiplicity of `target` in the tensor product of two irreducibles.
pub fn tensor_multiplicity(
    sys: &RootSystem,
    a: &Weight,
    b: &Weight,
    target: &Weight,
) -> Result<BigUint, RepsError> {
    multi_tensor_multiplicity(sys, &[a.clone(), b.clone()], target)
}

/// Multiplicity of `target` in the tensor product of any number of
/// irreducibles, without expanding the largest factor.
pub fn multi_tensor_multiplicity(
    sys: &RootSystem,
    factors: &[Weight],
    target: &Weight,
) -> Result<BigUint, RepsError> {
    if factors.is_empty() {
        return Err(RepsError::EmptyFactors);
    }
    for f in factors {
        ensure_dominant(f)?;
    }
    ensure_dominant(target)?;
    if factors.len() == 1 {
        return Ok(if factors[0] == *target { BigUint::one() } else { BigUint::zero() });
    }
    let n = sys.rank();
    let (adj, det) = cartan_t_adjugate(sys);
    // The difference between the factor sum and the target must lie in the
    // root lattice, else the multiplicity vanishes.
    let mut diff = vec![0i64; n];
    for f in factors {
        for (d, c) in diff.iter_mut().zip(f.coords()) {
            *d += c;
        }
    }
    for (d, c) in diff.iter_mut().zip(target.coords()) {
        *d -= c;
    }
    if adj_apply(&adj, &diff).iter().any(|y| y % det != 0) {
        return Ok(BigUint::zero());
    }

    let mut order: Vec<usize> = (0..factors.len()).collect();
    let sizes: Vec<u128> = factors
        .iter()
        .map(|f| box_size(&box_bounds(sys, &adj, det, f.coords())))
        .collect();
    order.sort_by_key(|&i| (sizes[i], factors[i].coords().to_vec()));
    // The table never expands into orbits, so it can afford the biggest
    // factor; with exactly two factors nothing is expanded at all and the
    // table may as well sit on the smaller one.
    let (table_idx, char_order): (usize, Vec<usize>) = if factors.len() == 2 {
        (order[0], vec![order[1]])
    } else {
        (order[factors.len() - 1], order[..factors.len() - 1].to_vec())
    };

    let reachable = |nu: &[i64], remaining: &[i64]| -> bool {
        let v: Vec<i64> = (0..n)
            .map(|i| nu[i] + remaining[i] - target.coords()[i])
            .collect();
        adj_apply(&adj, &v).iter().all(|&y| y >= 0)
    };

    let mut chars: BTreeMap<Vec<i64>, BigInt> = BTreeMap::new();
    chars.insert(factors[char_order[0]].coords().to_vec(), BigInt::one());
    for (step, &j) in char_order.iter().enumerate().skip(1) {
        let mut remaining = factors[table_idx].coords().to_vec();
        for &l in &char_order[step..] {
            for (r, c) in remaining.iter_mut().zip(factors[l].coords()) {
                *r += c;
            }
        }
        chars.retain(|nu, _| reachable(nu, &remaining));
        let weights = expand_weights(sys, &factors[j])?;
        let mut next: BTreeMap<Vec<i64>, BigInt> = BTreeMap::new();
        for (nu, c) in &chars {
            for (p, m) in &weights {
                let v: Vec<i64> = (0..n).map(|i| nu[i] + p[i] + 1).collect();
                if let Some((dom, sign)) = dominantize_signed(sys, v) {
                    let out: Vec<i64> = dom.into_iter().map(|x| x - 1).collect();
                    let term = c * BigInt::from(m.clone());
                    let slot = next.entry(out).or_insert_with(BigInt::zero);
                    if sign > 0 {
                        *slot += term;
                    } else {
                        *slot -= term;
                    }
                }
            }
        }
        next.retain(|_, c| !c.is_zero());
        if next.values().any(|c| c.is_negative()) {
            return Err(RepsError::Internal(
                "negative coefficient while folding tensor factors".into(),
            ));
        }
        chars = next;
    }
    chars.retain(|nu, _| reachable(nu, factors[table_idx].coords()));

    let mut table = WeightMultTable::new(sys, &factors[table_idx])?;
    let seed: Vec<i64> = target.coords().iter().map(|c| c + 1).collect();
    let chars_vec: Vec<(Vec<i64>, BigInt)> = chars.into_iter().collect();
    let mut acc = BigInt::zero();
    for (q, sign) in signed_orbit(sys, &seed) {
        for (nu, c) in &chars_vec {
            let beta: Vec<i64> = (0..n).map(|i| q[i] - nu[i] - 1).collect();
            let m = table.mult_coords(sys, &beta);
            if m.is_zero() {
                continue;
            }
            let term = c * BigInt::from(m);
            if sign > 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
    }
    if acc.is_negative() {
        return Err(RepsError::Internal(format!(
            "alternating contraction produced a negative multiplicity {acc}"
        )));
    }
    Ok(acc.to_biguint().expect("checked nonnegative"))
}

/// Brute-force tensor decomposition: convolve the two full weight multisets
/// and repeatedly peel the highest remaining weight. Independent of the
/// orbit-sum route, so the two may be compared on small inputs. `cap` bounds
/// the total workload (pairs convolved plus weights expanded while peeling).
pub fn character_product_oracle(
    sys: &RootSystem,
    a: &Weight,
    b: &Weight,
    cap: u128,
) -> Result<Character, RepsError> {
    ensure_dominant(a)?;
    ensure_dominant(b)?;
    let wa = expand_weights(sys, a)?;
    let wb = expand_weights(sys, b)?;
    let mut workload = wa.len() as u128 * wb.len() as u128;
    if workload > cap {
        return Err(RepsError::OracleCapExceeded { needed: workload, cap });
    }
    let mut prod: HashMap<Vec<i64>, BigInt> = HashMap::new();
    for (p, mp) in &wa {
        for (q, mq) in &wb {
            let key: Vec<i64> = p.iter().zip(q).map(|(x, y)| x + y).collect();
            *prod.entry(key).or_insert_with(BigInt::zero) += BigInt::from(mp * mq);
        }
    }
    prod.retain(|_, m| !m.is_zero());
    let (adj, _) = cartan_t_adjugate(sys);
    let height_row: Vec<i64> =
        (0..sys.rank()).map(|j| adj.iter().map(|row| row[j]).sum()).collect();
    let height = |v: &[i64]| -> i64 { height_row.iter().zip(v).map(|(h, c)| h * c).sum() };
    let mut terms: BTreeMap<Weight, BigUint> = BTreeMap::new();
    while !prod.is_empty() {
        let top = prod
            .keys()
            .max_by(|x, y| (height(x), x.as_slice()).cmp(&(height(y), y.as_slice())))
            .expect("nonempty")
            .clone();
        if top.iter().any(|&c| c < 0) {
            return Err(RepsError::Internal(format!(
                "maximal weight {top:?} of a character is not dominant"
            )));
        }
        let mult = prod.get(&top).expect("key exists").clone();
        if mult.is_negative() {
            return Err(RepsError::Internal(
                "negative multiplicity while peeling a character".into(),
            ));
        }
        let hw = sys.weight(&top)?;
        let expansion = expand_weights(sys, &hw)?;
        workload += expansion.len() as u128;
        if workload > cap {
            return Err(RepsError::OracleCapExceeded { needed: workload, cap });
        }
        for (p, mp) in expansion {
            let slot = prod.entry(p).or_insert_with(BigInt::zero);
            *slot -= &mult * BigInt::from(mp);
        }
        prod.retain(|_, m| !m.is_zero());
        terms.insert(hw, mult.to_biguint().expect("checked nonnegative"));
    }
    Ok(Character::new(sys.id(), terms))
}

/// Number of ways to write the given root-basis vector as a nonnegative
/// integer combination of positive roots.
pub fn kostant_partition(sys: &RootSystem, v: &[i64]) -> BigUint {
    fn rec(
        roots: &[Vec<i64>],
        idx: usize,
        v: &[i64],
        memo: &mut HashMap<(usize, Vec<i64>), BigUint>,
    ) -> BigUint {
        if v.iter().all(|&c| c == 0) {
            return BigUint::one();
        }
        if v.iter().any(|&c| c < 0) || idx == roots.len() {
            return BigUint::zero();
        }
        let key = (idx, v.to_vec());
        if let Some(m) = memo.get(&key) {
            return m.clone();
        }
        let mut acc = BigUint::zero();
        let mut rest = v.to_vec();
        loop {
            acc += rec(roots, idx + 1, &rest, memo);
            for (r, a) in rest.iter_mut().zip(&roots[idx]) {
                *r -= a;
            }
            if rest.iter().any(|&c| c < 0) {
                break;
            }
        }
        memo.insert(key, acc.clone());
        acc
    }
    let roots: Vec<Vec<i64>> =
        sys.positive_roots().iter().map(|r| r.root_coords.clone()).collect();
    rec(&roots, 0, v, &mut HashMap::new())
}

/// Weight multiplicity through the Kostant partition alternating sum.
/// Enumerates the whole Weyl group, so keep ranks small.
pub fn kostant_weight_multiplicity(
    sys: &RootSystem,
    lambda: &Weight,
    beta: &Weight,
) -> Result<BigInt, RepsError> {
    ensure_dominant(lambda)?;
    let (adj, det) = cartan_t_adjugate(sys);
    let mut acc = BigInt::zero();
    for w in sys.all_elements(None)? {
        let shifted = sys
            .act(&w, &lambda.add(&sys.rho()))?
            .sub(&beta.add(&sys.rho()));
        let y = adj_apply(&adj, shifted.coords());
        if y.iter().any(|c| c % det != 0) {
            continue;
        }
        let rc: Vec<i64> = y.iter().map(|c| c / det).collect();
        let p = BigInt::from(kostant_partition(sys, &rc));
        if w.len() % 2 == 0 {
            acc += p;
        } else {
            acc -= p;
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sys(t: &str) -> RootSystem {
        RootSystem::from_type_str(t).unwrap()
    }

    fn w(s: &RootSystem, coords: &[i64]) -> Weight {
        s.weight(coords).unwrap()
    }

    #[test]
    fn weyl_dims_of_small_modules() {
        let a2 = sys("A2");
        assert_eq!(weyl_dim(&a2, &w(&a2, &[1, 0])).unwrap(), BigUint::from(3u8));
        assert_eq!(weyl_dim(&a2, &w(&a2, &[1, 1])).unwrap(), BigUint::from(8u8));
        assert_eq!(weyl_dim(&a2, &w(&a2, &[2, 0])).unwrap(), BigUint::from(6u8));
        let b2 = sys("B2");
        assert_eq!(weyl_dim(&b2, &w(&b2, &[0, 1])).unwrap(), BigUint::from(4u8));
        assert_eq!(weyl_dim(&b2, &w(&b2, &[1, 0])).unwrap(), BigUint::from(5u8));
        let d4 = sys("D4");
        assert_eq!(weyl_dim(&d4, &w(&d4, &[1, 0, 0, 0])).unwrap(), BigUint::from(8u8));
        let a1 = sys("A1");
        assert_eq!(weyl_dim(&a1, &w(&a1, &[7])).unwrap(), BigUint::from(8u8));
    }

    #[test]
    fn adjoint_zero_weight_space_has_rank_multiplicity() {
        let a2 = sys("A2");
        let mut t = WeightMultTable::new(&a2, &w(&a2, &[1, 1])).unwrap();
        assert_eq!(t.multiplicity(&a2, &w(&a2, &[0, 0])).unwrap(), BigUint::from(2u8));
        assert_eq!(t.multiplicity(&a2, &w(&a2, &[1, 1])).unwrap(), BigUint::one());
        // Non-dominant query reflects into the chamber: the root alpha_1.
        assert_eq!(t.multiplicity(&a2, &w(&a2, &[2, -1])).unwrap(), BigUint::one());
        assert_eq!(t.dominant_count(), 2);
    }

    #[test]
    fn freudenthal_matches_kostant_on_small_systems() {
        for t in ["A2", "B2", "C2"] {
            let s = sys(t);
            for lam in [[2i64, 1], [1, 2], [2, 2]] {
                let hw = w(&s, &lam);
                let mut table = WeightMultTable::new(&s, &hw).unwrap();
                let betas: Vec<Vec<i64>> =
                    table.dominant_entries().map(|b| b.to_vec()).collect();
                for beta in betas {
                    let bw = w(&s, &beta);
                    let f = table.multiplicity(&s, &bw).unwrap();
                    let k = kostant_weight_multiplicity(&s, &hw, &bw).unwrap();
                    assert_eq!(BigInt::from(f), k, "{t} lambda={lam:?} beta={bw}");
                }
            }
        }
    }

    #[test]
    fn table_dimensions_sum_to_weyl_dim() {
        let d4 = sys("D4");
        let hw = w(&d4, &[1, 0, 1, 0]);
        let mut table = WeightMultTable::new(&d4, &hw).unwrap();
        table.fill_all(&d4);
        let mut total = BigUint::zero();
        let betas: Vec<Vec<i64>> = table.dominant_entries().map(|b| b.to_vec()).collect();
        for beta in betas {
            let orbit = weyl_orbit(&d4, &beta).len();
            total += table.multiplicity(&d4, &w(&d4, &beta)).unwrap() * orbit;
        }
        assert_eq!(total, weyl_dim(&d4, &hw).unwrap());
    }

    #[test]
    fn su2_tensor_products() {
        let a1 = sys("A1");
        let c = tensor_decompose(&a1, &w(&a1, &[3]), &w(&a1, &[5])).unwrap();
        let expected: Vec<(i64, u8)> = vec![(2, 1), (4, 1), (6, 1), (8, 1)];
        assert_eq!(c.constituent_count(), expected.len());
        for (hw, m) in expected {
            assert_eq!(c.multiplicity(&w(&a1, &[hw])), BigUint::from(m));
        }
    }

    #[test]
    fn a2_fundamental_times_antifundamental() {
        let a2 = sys("A2");
        let c = tensor_decompose(&a2, &w(&a2, &[1, 0]), &w(&a2, &[0, 1])).unwrap();
        assert_eq!(c.multiplicity(&w(&a2, &[1, 1])), BigUint::one());
        assert_eq!(c.multiplicity(&w(&a2, &[0, 0])), BigUint::one());
        assert_eq!(c.constituent_count(), 2);
    }

    #[test]
    fn a2_adjoint_squared() {
        let a2 = sys("A2");
        let adj = w(&a2, &[1, 1]);
        let c = tensor_decompose(&a2, &adj, &adj).unwrap();
        assert_eq!(c.multiplicity(&w(&a2, &[2, 2])), BigUint::one());
        assert_eq!(c.multiplicity(&w(&a2, &[3, 0])), BigUint::one());
        assert_eq!(c.multiplicity(&w(&a2, &[0, 3])), BigUint::one());
        assert_eq!(c.multiplicity(&adj), BigUint::from(2u8));
        assert_eq!(c.multiplicity(&w(&a2, &[0, 0])), BigUint::one());
        assert_eq!(c.total_dim(&a2).unwrap(), BigUint::from(64u8));
    }

    #[test]
    fn multi_tensor_agrees_with_pairwise_decomposition() {
        let b2 = sys("B2");
        let a = w(&b2, &[1, 1]);
        let b = w(&b2, &[0, 2]);
        let c = tensor_decompose(&b2, &a, &b).unwrap();
        for (nu, m) in c.terms() {
            let direct = tensor_multiplicity(&b2, &a, &b, nu).unwrap();
            assert_eq!(&direct, m, "nu={nu}");
        }
        // And a weight that does not occur.
        assert_eq!(
            tensor_multiplicity(&b2, &a, &b, &w(&b2, &[9, 9])).unwrap(),
            BigUint::zero()
        );
    }

    #[test]
    fn three_factor_products_on_su2() {
        let a1 = sys("A1");
        let f = vec![w(&a1, &[1]), w(&a1, &[1]), w(&a1, &[2])];
        assert_eq!(
            multi_tensor_multiplicity(&a1, &f, &w(&a1, &[2])).unwrap(),
            BigUint::from(2u8)
        );
        assert_eq!(
            multi_tensor_multiplicity(&a1, &f, &w(&a1, &[4])).unwrap(),
            BigUint::one()
        );
        assert_eq!(
            multi_tensor_multiplicity(&a1, &f, &w(&a1, &[0])).unwrap(),
            BigUint::one()
        );
        assert_eq!(
            multi_tensor_multiplicity(&a1, &f, &w(&a1, &[3])).unwrap(),
            BigUint::zero()
        );
    }

    #[test]
    fn single_factor_compares_directly() {
        let a2 = sys("A2");
        let f = vec![w(&a2, &[2, 1])];
        assert_eq!(
            multi_tensor_multiplicity(&a2, &f, &w(&a2, &[2, 1])).unwrap(),
            BigUint::one()
        );
        assert_eq!(
            multi_tensor_multiplicity(&a2, &f, &w(&a2, &[1, 2])).unwrap(),
            BigUint::zero()
        );
    }

    #[test]
    fn oracle_agrees_with_orbit_sum_route() {
        for (t, a, b) in [
            ("A2", vec![1i64, 1], vec![2i64, 0]),
            ("B2", vec![1, 1], vec![1, 1]),
            ("C2", vec![2, 0], vec![0, 2]),
            ("A1xA1", vec![2, 1], vec![1, 3]),
        ] {
            let s = sys(t);
            let wa = w(&s, &a);
            let wb = w(&s, &b);
            let fast = tensor_decompose(&s, &wa, &wb).unwrap();
            let slow = character_product_oracle(&s, &wa, &wb, DEFAULT_ORACLE_CAP).unwrap();
            assert_eq!(fast, slow, "{t} {a:?} x {b:?}");
        }
    }

    #[test]
    fn oracle_refuses_oversized_requests() {
        let a2 = sys("A2");
        let big = w(&a2, &[40, 40]);
        match character_product_oracle(&a2, &big, &big, 1000) {
            Err(RepsError::OracleCapExceeded { needed, cap }) => {
                assert!(needed > cap);
            }
            other => panic!("expected a cap refusal, got {other:?}"),
        }
    }

    #[test]
    fn kostant_partition_counts_on_a2() {
        let a2 = sys("A2");
        // alpha1 + alpha2 = either the highest root or the two simples.
        assert_eq!(kostant_partition(&a2, &[1, 1]), BigUint::from(2u8));
        assert_eq!(kostant_partition(&a2, &[2, 1]), BigUint::from(2u8));
        assert_eq!(kostant_partition(&a2, &[0, 0]), BigUint::one());
        assert_eq!(kostant_partition(&a2, &[-1, 0]), BigUint::zero());
    }

    #[test]
    fn duality_pairs_against_the_longest_element() {
        // mult of the trivial in V_a x V_b is 1 exactly when b = -w0(a).
        let a2 = sys("A2");
        let w0 = a2.longest_element();
        let lam = w(&a2, &[2, 1]);
        let dual = a2.act(&w0, &lam).unwrap().neg();
        assert_eq!(dual.coords(), &[1, 2]);
        assert_eq!(
            tensor_multiplicity(&a2, &lam, &dual, &a2.zero_weight()).unwrap(),
            BigUint::one()
        );
        assert_eq!(
            tensor_multiplicity(&a2, &lam, &lam, &a2.zero_weight()).unwrap(),
            BigUint::zero()
        );
    }

    #[test]
    fn wall_crossings_are_dropped_in_signed_dominantization() {
        let a2 = sys("A2");
        assert!(dominantize_signed(&a2, vec![1, -1]).is_none());
        let (dom, sign) = dominantize_signed(&a2, vec![-1, -1]).unwrap();
        assert_eq!(dom, vec![1, 1]);
        // (-1,-1) = w0(rho) with l(w0) = 3.
        assert_eq!(sign, -1);
    }
}
