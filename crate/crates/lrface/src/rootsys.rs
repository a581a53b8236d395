//! Root systems of classical type, their weight lattices, and Weyl groups.
//!
//! Conventions, fixed once here and relied on everywhere else:
//!
//! * Weights are integer vectors in fundamental-weight coordinates, so
//!   `mu.coords()[i]` is the pairing of `mu` with the i-th simple coroot.
//! * The Cartan matrix `C` has `C[i][j] = <alpha_i, alpha_j^vee>`, and row `i`
//!   is exactly the simple root `alpha_{i+1}` written in fundamental-weight
//!   coordinates. Consequently a simple reflection acts by
//!   `s_i(mu) = mu - mu[i] * row_i(C)`, and root-basis coordinates of a
//!   weight `y` solve `C^T x = y`.
//! * Nodes are numbered 1..=rank in the usual Bourbaki order for each
//!   classical family: `B_n` has the short root at node n (`C[n-1][n] = -2`),
//!   `C_n` has the long root at node n (`C[n][n-1] = -2`), and `D_n` forks at
//!   node n-2. Products concatenate blocks in factor order.
//! * A word `s_a s_b` denotes the composition applying `s_b` first, so
//!   `act(from_word([a, b]), mu) = s_a(s_b(mu))`.
//!
//! Weyl elements are canonicalized through their action on the regular
//! weight rho: the stored reduced word is recovered from `w(rho)` alone,
//! which makes equality, length, and ordering independent of how an element
//! was first written down.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::hash::{Hash, Hasher};

use num::bigint::BigUint;
use num::{One, Signed, Zero};
use thiserror::Error;

use crate::linalg::{self, Mat, Rat};

#[derive(Debug, Error)]
pub enum RootSysError {
    #[error("unsupported root system {family}{rank}; supported ranks are A:1..=16, B:2..=16, C:2..=16, D:3..=16")]
    UnsupportedType { family: Family, rank: usize },
    #[error("cannot parse root system type `{0}`")]
    ParseType(String),
    #[error("empty factor list")]
    EmptyFactors,
    #[error("coordinate vector has length {got}, expected rank {want}")]
    WrongLength { got: usize, want: usize },
    #[error("simple root index {index} out of range 1..={rank}")]
    NodeOutOfRange { index: usize, rank: usize },
    #[error("cannot parse Weyl word `{0}`; expected letters like `s2s1` or `e`")]
    ParseWord(String),
    #[error("object belongs to a different root system")]
    SystemMismatch,
    #[error("root-basis coordinates do not lie in the weight lattice")]
    NonIntegralWeight,
    #[error("Weyl enumeration exceeded the cap of {cap} elements")]
    WeylCapExceeded { cap: usize },
}

/// Classical Dynkin families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    A,
    B,
    C,
    D,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            Family::A => 'A',
            Family::B => 'B',
            Family::C => 'C',
            Family::D => 'D',
        };
        write!(f, "{c}")
    }
}

impl Family {
    fn min_rank(self) -> usize {
        match self {
            Family::A => 1,
            Family::B | Family::C => 2,
            Family::D => 3,
        }
    }
}

const MAX_RANK: usize = 16;

/// Default bound on how many Weyl group elements an enumeration (or a
/// full-group computation such as a Schubert ring) may materialize.
pub const DEFAULT_WEYL_CAP: usize = 6000;

/// Cheap identity token so weights and Weyl elements can be checked against
/// the system that made them without holding a reference.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SystemId(u64);

fn system_id(factors: &[(Family, usize)]) -> SystemId {
    let mut h = std::collections::hash_map::DefaultHasher::new();
    factors.hash(&mut h);
    SystemId(h.finish())
}

/// A positive root, precomputed in every basis the rest of the crate needs.
#[derive(Debug, Clone)]
pub struct PosRoot {
    /// Expansion in simple roots; entries are nonnegative integers.
    pub root_coords: Vec<i64>,
    /// The same root in fundamental-weight coordinates (`C^T` applied to
    /// `root_coords`).
    pub weight_coords: Vec<i64>,
    /// Covector of the coroot: `<mu, alpha^vee>` is the dot product of this
    /// with `mu` in fundamental-weight coordinates.
    pub coroot: Vec<i64>,
    /// Squared length `(alpha, alpha)` under the normalization where long
    /// roots of A/B/D have squared length 2 (values here are 1, 2, or 4).
    pub norm2: i64,
    /// Sum of the root coordinates.
    pub height: i64,
}

/// A (product of) classical irreducible root system(s).
#[derive(Debug, Clone)]
pub struct RootSystem {
    factors: Vec<(Family, usize)>,
    rank: usize,
    cartan: Vec<Vec<i64>>,
    inv_cartan_t: Mat,
    norm2_simple: Vec<i64>,
    pos_roots: Vec<PosRoot>,
    weyl_order: BigUint,
    node_factor: Vec<usize>,
    id: SystemId,
}

impl fmt::Display for RootSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> =
            self.factors.iter().map(|(fam, r)| format!("{fam}{r}")).collect();
        write!(f, "{}", parts.join(" x "))
    }
}

fn cartan_matrix(family: Family, n: usize) -> Vec<Vec<i64>> {
    let mut c = vec![vec![0i64; n]; n];
    for i in 0..n {
        c[i][i] = 2;
    }
    let chain_len = if family == Family::D { n - 1 } else { n };
    for i in 0..chain_len.saturating_sub(1) {
        c[i][i + 1] = -1;
        c[i + 1][i] = -1;
    }
    match family {
        Family::A => {}
        Family::B => {
            // Short simple root at node n.
            c[n - 2][n - 1] = -2;
            c[n - 1][n - 2] = -1;
        }
        Family::C => {
            // Long simple root at node n.
            c[n - 2][n - 1] = -1;
            c[n - 1][n - 2] = -2;
        }
        Family::D => {
            c[n - 3][n - 1] = -1;
            c[n - 1][n - 3] = -1;
        }
    }
    c
}

fn norm2_simple(family: Family, n: usize) -> Vec<i64> {
    let mut d = vec![2i64; n];
    match family {
        Family::B => d[n - 1] = 1,
        Family::C => d[n - 1] = 4,
        _ => {}
    }
    d
}

fn weyl_order_irreducible(family: Family, n: usize) -> BigUint {
    let fact = |k: usize| -> BigUint {
        let mut f = BigUint::one();
        for i in 2..=k {
            f *= BigUint::from(i);
        }
        f
    };
    let two_pow = |k: usize| -> BigUint { BigUint::from(1u8) << k };
    match family {
        Family::A => fact(n + 1),
        Family::B | Family::C => two_pow(n) * fact(n),
        Family::D => two_pow(n - 1) * fact(n),
    }
}

impl RootSystem {
    /// Builds the product of the given irreducible factors, in order.
    pub fn build(factors: &[(Family, usize)]) -> Result<RootSystem, RootSysError> {
        if factors.is_empty() {
            return Err(RootSysError::EmptyFactors);
        }
        for &(family, rank) in factors {
            if rank < family.min_rank() || rank > MAX_RANK {
                return Err(RootSysError::UnsupportedType { family, rank });
            }
        }
        let rank: usize = factors.iter().map(|&(_, r)| r).sum();
        let mut cartan = vec![vec![0i64; rank]; rank];
        let mut norm2 = Vec::with_capacity(rank);
        let mut node_factor = Vec::with_capacity(rank);
        let mut weyl_order = BigUint::one();
        let mut offset = 0;
        for (fi, &(family, r)) in factors.iter().enumerate() {
            let block = cartan_matrix(family, r);
            for i in 0..r {
                for j in 0..r {
                    cartan[offset + i][offset + j] = block[i][j];
                }
            }
            norm2.extend(norm2_simple(family, r));
            node_factor.extend(std::iter::repeat(fi).take(r));
            weyl_order *= weyl_order_irreducible(family, r);
            offset += r;
        }
        let ct: Vec<Vec<i64>> =
            (0..rank).map(|i| (0..rank).map(|j| cartan[j][i]).collect()).collect();
        let inv_cartan_t = linalg::invert(&linalg::from_i64_rows(&ct))
            .expect("Cartan matrices of finite type are invertible");
        let pos_roots = generate_positive_roots(&cartan, &norm2);
        Ok(RootSystem {
            factors: factors.to_vec(),
            rank,
            cartan,
            inv_cartan_t,
            norm2_simple: norm2,
            pos_roots,
            weyl_order,
            node_factor,
            id: system_id(factors),
        })
    }

    /// Parses a type string such as `A5`, `C3`, or `A2 x A2` (separators `x`,
    /// `X`, or `*`).
    pub fn from_type_str(s: &str) -> Result<RootSystem, RootSysError> {
        let mut factors = Vec::new();
        for part in s.split(|c| c == 'x' || c == 'X' || c == '*') {
            let part = part.trim();
            let mut chars = part.chars();
            let fam = match chars.next() {
                Some('A' | 'a') => Family::A,
                Some('B' | 'b') => Family::B,
                Some('C' | 'c') => Family::C,
                Some('D' | 'd') => Family::D,
                _ => return Err(RootSysError::ParseType(s.to_string())),
            };
            let rank: usize = chars
                .as_str()
                .parse()
                .map_err(|_| RootSysError::ParseType(s.to_string()))?;
            factors.push((fam, rank));
        }
        if factors.is_empty() {
            return Err(RootSysError::ParseType(s.to_string()));
        }
        RootSystem::build(&factors)
    }

    pub fn id(&self) -> SystemId {
        self.id
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn factors(&self) -> &[(Family, usize)] {
        &self.factors
    }

    /// Factor index (0-based) owning the 1-based node `i`.
    pub fn factor_of_node(&self, i: usize) -> Result<usize, RootSysError> {
        Ok(self.node_factor[self.idx0(i)?])
    }

    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    /// Inverse of the transposed Cartan matrix; maps fundamental-weight
    /// coordinates to root-basis coordinates.
    pub fn inverse_cartan_transpose(&self) -> &Mat {
        &self.inv_cartan_t
    }

    pub fn positive_roots(&self) -> &[PosRoot] {
        &self.pos_roots
    }

    pub fn weyl_order(&self) -> &BigUint {
        &self.weyl_order
    }

    pub fn norm2_simple(&self) -> &[i64] {
        &self.norm2_simple
    }

    fn idx0(&self, i: usize) -> Result<usize, RootSysError> {
        if i == 0 || i > self.rank {
            Err(RootSysError::NodeOutOfRange { index: i, rank: self.rank })
        } else {
            Ok(i - 1)
        }
    }

    pub fn weight(&self, coords: &[i64]) -> Result<Weight, RootSysError> {
        if coords.len() != self.rank {
            return Err(RootSysError::WrongLength { got: coords.len(), want: self.rank });
        }
        Ok(Weight { sys: self.id, coords: coords.to_vec() })
    }

    pub fn zero_weight(&self) -> Weight {
        Weight { sys: self.id, coords: vec![0; self.rank] }
    }

    pub fn rho(&self) -> Weight {
        Weight { sys: self.id, coords: vec![1; self.rank] }
    }

    pub fn fundamental_weight(&self, i: usize) -> Result<Weight, RootSysError> {
        let i0 = self.idx0(i)?;
        let mut coords = vec![0; self.rank];
        coords[i0] = 1;
        Ok(Weight { sys: self.id, coords })
    }

    /// The simple root `alpha_i` as a weight.
    pub fn simple_root(&self, i: usize) -> Result<Weight, RootSysError> {
        let i0 = self.idx0(i)?;
        Ok(Weight { sys: self.id, coords: self.cartan[i0].clone() })
    }

    fn check_weight(&self, w: &Weight) -> Result<(), RootSysError> {
        if w.sys != self.id {
            return Err(RootSysError::SystemMismatch);
        }
        Ok(())
    }

    fn check_elem(&self, w: &WeylElement) -> Result<(), RootSysError> {
        if w.sys != self.id {
            return Err(RootSysError::SystemMismatch);
        }
        Ok(())
    }

    /// Applies `s_i` (0-based `i0`) in place to fundamental-weight coords.
    pub(crate) fn reflect_weight_coords(&self, i0: usize, coords: &mut [i64]) {
        let c = coords[i0];
        if c != 0 {
            for (x, row) in coords.iter_mut().zip(&self.cartan[i0]) {
                *x -= c * row;
            }
        }
    }

    /// Applies `s_i` (0-based `i0`) in place to root-basis coords.
    fn reflect_root_coords(&self, i0: usize, coords: &mut [i64]) {
        let pairing: i64 = (0..self.rank).map(|j| coords[j] * self.cartan[j][i0]).sum();
        coords[i0] -= pairing;
    }

    pub fn identity(&self) -> WeylElement {
        WeylElement { sys: self.id, word: Vec::new(), rho_image: vec![1; self.rank] }
    }

    pub fn simple_reflection(&self, i: usize) -> Result<WeylElement, RootSysError> {
        self.idx0(i)?;
        self.weyl_from_word(&[i])
    }

    /// Canonicalizes a word (1-based letters, leftmost applied last) into a
    /// Weyl element. The input need not be reduced.
    pub fn weyl_from_word(&self, word: &[usize]) -> Result<WeylElement, RootSysError> {
        let mut img: Vec<i64> = vec![1; self.rank];
        for &letter in word.iter().rev() {
            let i0 = self.idx0(letter)?;
            self.reflect_weight_coords(i0, &mut img);
        }
        Ok(self.element_from_rho_image(img))
    }

    /// Rebuilds the canonical reduced word from `w(rho)`.
    pub(crate) fn element_from_rho_image(&self, rho_image: Vec<i64>) -> WeylElement {
        let mut word = Vec::new();
        let mut img = rho_image.clone();
        loop {
            let Some(i0) = img.iter().position(|&c| c < 0) else { break };
            word.push(i0 + 1);
            self.reflect_weight_coords(i0, &mut img);
        }
        debug_assert!(img.iter().all(|&c| c == 1), "descent-free image must be rho");
        WeylElement { sys: self.id, word, rho_image }
    }

    /// Group composition: `act(compose(a, b), mu) = act(a, act(b, mu))`.
    pub fn compose(&self, a: &WeylElement, b: &WeylElement) -> Result<WeylElement, RootSysError> {
        self.check_elem(a)?;
        self.check_elem(b)?;
        let mut img = b.rho_image.clone();
        for &letter in a.word.iter().rev() {
            self.reflect_weight_coords(letter - 1, &mut img);
        }
        Ok(self.element_from_rho_image(img))
    }

    pub fn inverse(&self, w: &WeylElement) -> Result<WeylElement, RootSysError> {
        self.check_elem(w)?;
        let rev: Vec<usize> = w.word.iter().rev().copied().collect();
        self.weyl_from_word(&rev)
    }

    pub fn act(&self, w: &WeylElement, mu: &Weight) -> Result<Weight, RootSysError> {
        self.check_elem(w)?;
        self.check_weight(mu)?;
        let mut coords = mu.coords.clone();
        for &letter in w.word.iter().rev() {
            self.reflect_weight_coords(letter - 1, &mut coords);
        }
        Ok(Weight { sys: self.id, coords })
    }

    pub fn length(&self, w: &WeylElement) -> Result<usize, RootSysError> {
        self.check_elem(w)?;
        Ok(w.word.len())
    }

    /// The set of positive roots sent negative by `w`.
    pub fn inversion_set(&self, w: &WeylElement) -> Result<InversionSet, RootSysError> {
        self.check_elem(w)?;
        let mut member = vec![false; self.pos_roots.len()];
        for (k, root) in self.pos_roots.iter().enumerate() {
            let mut rc = root.root_coords.clone();
            for &letter in w.word.iter().rev() {
                self.reflect_root_coords(letter - 1, &mut rc);
            }
            // Images of roots are roots, so all coordinates share one sign.
            let negative = rc.iter().any(|&x| x < 0);
            debug_assert!(
                rc.iter().all(|&x| x <= 0) || rc.iter().all(|&x| x >= 0),
                "image of a root must again be a root"
            );
            member[k] = negative;
        }
        Ok(InversionSet { sys: self.id, member })
    }

    pub fn longest_element(&self) -> WeylElement {
        self.element_from_rho_image(vec![-1; self.rank])
    }

    /// Root-basis coordinates of a weight (exact rationals).
    pub fn to_root_basis(&self, mu: &Weight) -> Result<RootCoords, RootSysError> {
        self.check_weight(mu)?;
        let y: Vec<Rat> = mu.coords.iter().map(|&c| linalg::rat(c)).collect();
        Ok(RootCoords { sys: self.id, coords: linalg::mat_vec(&self.inv_cartan_t, &y) })
    }

    /// Inverse of [`to_root_basis`]: fails unless the result lands in the
    /// weight lattice.
    pub fn from_root_basis(&self, rc: &RootCoords) -> Result<Weight, RootSysError> {
        if rc.sys != self.id {
            return Err(RootSysError::SystemMismatch);
        }
        let mut coords = Vec::with_capacity(self.rank);
        for i in 0..self.rank {
            let mut acc = Rat::zero();
            for j in 0..self.rank {
                acc += &rc.coords[j] * linalg::rat(self.cartan[j][i]);
            }
            if !acc.is_integer() {
                return Err(RootSysError::NonIntegralWeight);
            }
            let n = acc.to_integer();
            let n: i64 = i64::try_from(&n).map_err(|_| RootSysError::NonIntegralWeight)?;
            coords.push(n);
        }
        Ok(Weight { sys: self.id, coords })
    }

    /// The affine action of `w` on the zero weight, in root-basis
    /// coordinates: minus the sum of the inversion set of `w`, equivalently
    /// `act(w^{-1}, rho) - rho`.
    pub fn affine_zero_action(&self, w: &WeylElement) -> Result<RootCoords, RootSysError> {
        let inv = self.inversion_set(w)?;
        let mut acc = vec![0i64; self.rank];
        for root in inv.roots(self) {
            for (a, b) in acc.iter_mut().zip(&root.root_coords) {
                *a -= b;
            }
        }
        Ok(RootCoords { sys: self.id, coords: acc.iter().map(|&x| linalg::rat(x)).collect() })
    }

    /// True when `w` is the minimal-length representative of `w W_I`, with
    /// `I` a set of 1-based node indices.
    pub fn is_minimal_coset_rep(
        &self,
        w: &WeylElement,
        i_set: &BTreeSet<usize>,
    ) -> Result<bool, RootSysError> {
        self.check_elem(w)?;
        for &i in i_set {
            let i0 = self.idx0(i)?;
            let mut rc = vec![0i64; self.rank];
            rc[i0] = 1;
            for &letter in w.word.iter().rev() {
                self.reflect_root_coords(letter - 1, &mut rc);
            }
            if rc.iter().any(|&x| x < 0) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Splits `w = wt * u` with `wt` minimal in `w W_I` and `u` in the
    /// parabolic subgroup generated by `I`; lengths add.
    pub fn min_coset_rep(
        &self,
        w: &WeylElement,
        i_set: &BTreeSet<usize>,
    ) -> Result<(WeylElement, WeylElement), RootSysError> {
        self.check_elem(w)?;
        for &i in i_set {
            self.idx0(i)?;
        }
        let mut wt = w.clone();
        let mut u_word: Vec<usize> = Vec::new();
        'outer: loop {
            for &i in i_set {
                let i0 = i - 1;
                let mut rc = vec![0i64; self.rank];
                rc[i0] = 1;
                for &letter in wt.word.iter().rev() {
                    self.reflect_root_coords(letter - 1, &mut rc);
                }
                if rc.iter().any(|&x| x < 0) {
                    // wt * s_i is shorter; peel s_i onto the parabolic part.
                    let si = self.weyl_from_word(&[i])?;
                    wt = self.compose(&wt, &si)?;
                    u_word.insert(0, i);
                    continue 'outer;
                }
            }
            break;
        }
        let u = self.weyl_from_word(&u_word)?;
        debug_assert_eq!(self.compose(&wt, &u).unwrap(), *w);
        debug_assert_eq!(wt.len() + u.len(), w.len());
        Ok((wt, u))
    }

    /// All elements of length at most `max_len`, grouped by length.
    /// `cap` bounds the total count; exceeding it is an error.
    pub fn elements_by_length(
        &self,
        max_len: usize,
        cap: Option<usize>,
    ) -> Result<Vec<Vec<WeylElement>>, RootSysError> {
        let mut layers: Vec<Vec<WeylElement>> = vec![vec![self.identity()]];
        let mut seen: HashSet<Vec<i64>> = HashSet::new();
        seen.insert(vec![1; self.rank]);
        let mut total = 1usize;
        while layers.len() <= max_len {
            let prev = layers.last().unwrap();
            if prev.is_empty() {
                break;
            }
            let mut next: Vec<WeylElement> = Vec::new();
            for w in prev {
                for i0 in 0..self.rank {
                    let mut img = w.rho_image.clone();
                    self.reflect_weight_coords(i0, &mut img);
                    if seen.insert(img.clone()) {
                        // BFS reaches each element first at its true length,
                        // so this image extends the word by one letter.
                        let mut word = Vec::with_capacity(w.word.len() + 1);
                        word.push(i0 + 1);
                        word.extend_from_slice(&w.word);
                        next.push(WeylElement { sys: self.id, word, rho_image: img });
                        total += 1;
                        if let Some(c) = cap {
                            if total > c {
                                return Err(RootSysError::WeylCapExceeded { cap: c });
                            }
                        }
                    }
                }
            }
            next.sort_by(|a, b| a.rho_image.cmp(&b.rho_image));
            layers.push(next);
        }
        while layers.last().is_some_and(|l| l.is_empty()) {
            layers.pop();
        }
        Ok(layers)
    }

    /// The whole Weyl group, ordered by length then rho-image.
    pub fn all_elements(&self, cap: Option<usize>) -> Result<Vec<WeylElement>, RootSysError> {
        let layers = self.elements_by_length(usize::MAX, cap)?;
        Ok(layers.into_iter().flatten().collect())
    }

    /// Parses a word like `s3s4s2`, `s3 s4 s2`, or `e` (identity).
    pub fn parse_word(&self, s: &str) -> Result<WeylElement, RootSysError> {
        let t = s.trim();
        if t.is_empty() || t == "e" || t == "id" {
            return self.weyl_from_word(&[]);
        }
        let mut letters = Vec::new();
        let mut chars = t.chars().peekable();
        while let Some(c) = chars.next() {
            if c.is_whitespace() || c == '.' || c == ',' {
                continue;
            }
            if c != 's' && c != 'S' {
                return Err(RootSysError::ParseWord(s.to_string()));
            }
            let mut digits = String::new();
            while let Some(d) = chars.peek() {
                if d.is_ascii_digit() {
                    digits.push(*d);
                    chars.next();
                } else {
                    break;
                }
            }
            let idx: usize =
                digits.parse().map_err(|_| RootSysError::ParseWord(s.to_string()))?;
            letters.push(idx);
        }
        if letters.is_empty() {
            return Err(RootSysError::ParseWord(s.to_string()));
        }
        self.weyl_from_word(&letters)
    }
}

fn generate_positive_roots(cartan: &[Vec<i64>], norm2_simple: &[i64]) -> Vec<PosRoot> {
    let n = cartan.len();
    let mut seen: HashSet<Vec<i64>> = HashSet::new();
    let mut queue: Vec<Vec<i64>> = Vec::new();
    for i in 0..n {
        let mut e = vec![0i64; n];
        e[i] = 1;
        seen.insert(e.clone());
        queue.push(e);
    }
    let mut head = 0;
    while head < queue.len() {
        let x = queue[head].clone();
        head += 1;
        for i0 in 0..n {
            let pairing: i64 = (0..n).map(|j| x[j] * cartan[j][i0]).sum();
            let mut y = x.clone();
            y[i0] -= pairing;
            if y.iter().all(|&c| c >= 0) && seen.insert(y.clone()) {
                queue.push(y);
            }
        }
    }
    let mut roots: Vec<Vec<i64>> = seen.into_iter().collect();
    roots.sort_by_key(|r| (r.iter().sum::<i64>(), r.clone()));
    roots
        .into_iter()
        .map(|rc| {
            let weight_coords: Vec<i64> =
                (0..n).map(|i| (0..n).map(|j| rc[j] * cartan[j][i]).sum()).collect();
            // (alpha, alpha) = sum_{i,j} a_i a_j (alpha_i, alpha_j) with
            // (alpha_i, alpha_j) = norm2_simple[j]/2 * C[i][j]; the double sum
            // below is twice that, hence the exact halving.
            let twice: i64 = (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| rc[i] * rc[j] * norm2_simple[j] * cartan[i][j])
                        .sum::<i64>()
                })
                .sum();
            assert_eq!(twice % 2, 0);
            let norm2 = twice / 2;
            let coroot: Vec<i64> = (0..n)
                .map(|i| {
                    let num = rc[i] * norm2_simple[i];
                    assert_eq!(num % norm2, 0, "coroot coordinates must be integral");
                    num / norm2
                })
                .collect();
            let height = rc.iter().sum();
            PosRoot { root_coords: rc, weight_coords, coroot, norm2, height }
        })
        .collect()
}

/// Integral weight in fundamental-weight coordinates.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Weight {
    sys: SystemId,
    coords: Vec<i64>,
}

impl Weight {
    pub fn coords(&self) -> &[i64] {
        &self.coords
    }

    pub fn system_id(&self) -> SystemId {
        self.sys
    }

    pub fn is_dominant(&self) -> bool {
        self.coords.iter().all(|&c| c >= 0)
    }

    pub fn is_strictly_dominant(&self) -> bool {
        self.coords.iter().all(|&c| c > 0)
    }

    pub fn add(&self, other: &Weight) -> Weight {
        assert_eq!(self.sys, other.sys);
        Weight {
            sys: self.sys,
            coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Weight) -> Weight {
        assert_eq!(self.sys, other.sys);
        Weight {
            sys: self.sys,
            coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn neg(&self) -> Weight {
        Weight { sys: self.sys, coords: self.coords.iter().map(|&c| -c).collect() }
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Weight written in the root basis; coordinates are exact rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootCoords {
    sys: SystemId,
    coords: Vec<Rat>,
}

impl RootCoords {
    pub fn coords(&self) -> &[Rat] {
        &self.coords
    }

    pub fn system_id(&self) -> SystemId {
        self.sys
    }

    #[cfg(test)]
    pub(crate) fn from_parts(sys: SystemId, coords: Vec<Rat>) -> RootCoords {
        RootCoords { sys, coords }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn is_nonnegative(&self) -> bool {
        self.coords.iter().all(|c| !c.is_negative())
    }

    pub fn is_integral(&self) -> bool {
        self.coords.iter().all(|c| c.is_integer())
    }

    pub fn sub(&self, other: &RootCoords) -> RootCoords {
        assert_eq!(self.sys, other.sys);
        RootCoords {
            sys: self.sys,
            coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a - b).collect(),
        }
    }
}

impl fmt::Display for RootCoords {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Weyl group element, canonicalized by its action on rho.
#[derive(Debug, Clone)]
pub struct WeylElement {
    sys: SystemId,
    word: Vec<usize>,
    rho_image: Vec<i64>,
}

impl WeylElement {
    /// Canonical reduced word, 1-based letters, leftmost applied last.
    pub fn word(&self) -> &[usize] {
        &self.word
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.word.is_empty()
    }

    pub fn system_id(&self) -> SystemId {
        self.sys
    }

    pub(crate) fn rho_image(&self) -> &[i64] {
        &self.rho_image
    }
}

impl PartialEq for WeylElement {
    fn eq(&self, other: &Self) -> bool {
        self.sys == other.sys && self.rho_image == other.rho_image
    }
}

impl Eq for WeylElement {}

impl Hash for WeylElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.sys.hash(state);
        self.rho_image.hash(state);
    }
}

impl PartialOrd for WeylElement {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for WeylElement {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.sys, self.word.len(), &self.rho_image).cmp(&(
            other.sys,
            other.word.len(),
            &other.rho_image,
        ))
    }
}

impl fmt::Display for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            return write!(f, "e");
        }
        for letter in &self.word {
            write!(f, "s{letter}")?;
        }
        Ok(())
    }
}

/// Subset of the positive roots of one system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InversionSet {
    sys: SystemId,
    member: Vec<bool>,
}

impl InversionSet {
    pub fn len(&self) -> usize {
        self.member.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        self.member.iter().all(|&b| !b)
    }

    pub fn contains_index(&self, k: usize) -> bool {
        self.member[k]
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.member.iter().enumerate().filter(|(_, &b)| b).map(|(k, _)| k)
    }

    pub fn roots<'a>(&'a self, sys: &'a RootSystem) -> impl Iterator<Item = &'a PosRoot> + 'a {
        assert_eq!(self.sys, sys.id);
        self.indices().map(move |k| &sys.pos_roots[k])
    }

    pub fn is_disjoint_from(&self, other: &InversionSet) -> bool {
        assert_eq!(self.sys, other.sys);
        self.member.iter().zip(&other.member).all(|(a, b)| !(a & b))
    }

    pub fn union(&self, other: &InversionSet) -> InversionSet {
        assert_eq!(self.sys, other.sys);
        InversionSet {
            sys: self.sys,
            member: self.member.iter().zip(&other.member).map(|(a, b)| a | b).collect(),
        }
    }

    pub fn complement(&self) -> InversionSet {
        InversionSet { sys: self.sys, member: self.member.iter().map(|b| !b).collect() }
    }

    /// Sum of the member roots, in root coordinates.
    pub fn root_sum(&self, sys: &RootSystem) -> Vec<i64> {
        let mut acc = vec![0i64; sys.rank];
        for r in self.roots(sys) {
            for (a, b) in acc.iter_mut().zip(&r.root_coords) {
                *a += b;
            }
        }
        acc
    }
}
