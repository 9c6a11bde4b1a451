//! Permutations of `{0, .., n-1}` and finite permutation groups.
//!
//! A [`Perm`] is stored as its image array. Composition follows the usual
//! right-to-left convention: `p.compose(&q)` applies `q` first, then `p`.

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::ops::Mul;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith;

/// Environment variable overriding [`DEFAULT_CLOSURE_LIMIT`].
pub const CLOSURE_LIMIT_ENV: &str = "YBE_LAB_MAX_CLOSURE";

/// Largest group order [`PermGroup::closure`] will build before giving up.
pub const DEFAULT_CLOSURE_LIMIT: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermError {
    #[error("image array is not a permutation of 0..{0}")]
    NotBijective(usize),
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("no generators given")]
    NoGenerators,
    #[error("group closure exceeded {0} elements")]
    SizeLimitExceeded(usize),
    #[error("group is not abelian")]
    NotAbelian,
}

/// A permutation of `{0, .., n-1}` given by its images.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Perm(Vec<usize>);

impl Perm {
    pub fn from_images(img: Vec<usize>) -> Result<Self, PermError> {
        let n = img.len();
        let mut seen = vec![false; n];
        for &v in &img {
            if v >= n || seen[v] {
                return Err(PermError::NotBijective(n));
            }
            seen[v] = true;
        }
        Ok(Perm(img))
    }

    pub fn identity(n: usize) -> Self {
        Perm((0..n).collect())
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.0[x]
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn into_images(self) -> Vec<usize> {
        self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &v)| i == v)
    }

    /// `self ∘ other`: apply `other` first, then `self`.
    pub fn compose(&self, other: &Perm) -> Result<Perm, PermError> {
        if self.degree() != other.degree() {
            return Err(PermError::DegreeMismatch(self.degree(), other.degree()));
        }
        Ok(Perm(other.0.iter().map(|&x| self.0[x]).collect()))
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.degree()];
        for (i, &v) in self.0.iter().enumerate() {
            inv[v] = i;
        }
        Perm(inv)
    }

    /// Disjoint cycles, each starting at its smallest point; fixed points omitted.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut x = self.0[start];
            while x != start {
                seen[x] = true;
                cycle.push(x);
                x = self.0[x];
            }
            if cycle.len() > 1 {
                out.push(cycle);
            }
        }
        out
    }

    /// Multiplicative order (lcm of the cycle lengths).
    pub fn order(&self) -> u64 {
        self.cycles()
            .iter()
            .fold(1u64, |acc, c| arith::lcm(acc, c.len() as u64))
    }

    /// `self^k` for any integer `k`; negative powers go through the inverse.
    pub fn pow(&self, k: i64) -> Perm {
        let mut base = if k < 0 { self.inverse() } else { self.clone() };
        let mut e = k.unsigned_abs() % self.order();
        let mut acc = Perm::identity(self.degree());
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }
}

/// Composition with the same convention as [`Perm::compose`].
///
/// Panics if the degrees differ; use [`Perm::compose`] for a checked version.
impl Mul for &Perm {
    type Output = Perm;

    fn mul(self, rhs: &Perm) -> Perm {
        self.compose(rhs).expect("composing permutations of different degree")
    }
}

impl TryFrom<Vec<usize>> for Perm {
    type Error = PermError;

    fn try_from(img: Vec<usize>) -> Result<Self, Self::Error> {
        Perm::from_images(img)
    }
}

impl From<Perm> for Vec<usize> {
    fn from(p: Perm) -> Self {
        p.0
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm{:?}", self.0)
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            write!(f, "(")?;
            for (k, x) in c.iter().enumerate() {
                if k > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

/// Invariant factors `(n_1 | n_2 | ... | n_t)` of a finite abelian group.
/// Factors equal to 1 are dropped, so the trivial group has no factors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct InvariantFactors(pub Vec<u64>);

impl InvariantFactors {
    pub fn factors(&self) -> &[u64] {
        &self.0
    }

    pub fn order(&self) -> u64 {
        self.0.iter().product()
    }

    pub fn is_cyclic(&self) -> bool {
        self.0.len() <= 1
    }
}

/// A finite permutation group with its full element list.
#[derive(Debug, Clone)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Perm>,
    /// Sorted by image array.
    elements: Vec<Perm>,
    orbits: Vec<Vec<usize>>,
}

/// Closure bound honoring the [`CLOSURE_LIMIT_ENV`] override.
pub fn closure_limit() -> usize {
    std::env::var(CLOSURE_LIMIT_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_CLOSURE_LIMIT)
}

impl PermGroup {
    /// Group generated by `gens`, with the default closure bound.
    pub fn closure(gens: &[Perm]) -> Result<Self, PermError> {
        Self::closure_with_limit(gens, closure_limit())
    }

    /// Breadth-first closure of `gens` under composition. In a finite group
    /// this also yields all inverses.
    pub fn closure_with_limit(gens: &[Perm], limit: usize) -> Result<Self, PermError> {
        let degree = gens.first().ok_or(PermError::NoGenerators)?.degree();
        if let Some(g) = gens.iter().find(|g| g.degree() != degree) {
            return Err(PermError::DegreeMismatch(degree, g.degree()));
        }
        let mut generators: Vec<Perm> = Vec::new();
        for g in gens {
            if !generators.contains(g) {
                generators.push(g.clone());
            }
        }

        let id = Perm::identity(degree);
        let mut seen: HashSet<Perm> = HashSet::from([id.clone()]);
        let mut queue = VecDeque::from([id]);
        while let Some(x) = queue.pop_front() {
            for g in &generators {
                let y = g * &x;
                if !seen.contains(&y) {
                    if seen.len() >= limit {
                        return Err(PermError::SizeLimitExceeded(limit));
                    }
                    seen.insert(y.clone());
                    queue.push_back(y);
                }
            }
        }
        let mut elements: Vec<Perm> = seen.into_iter().collect();
        elements.sort_unstable();
        let orbits = orbits_of(degree, &generators);
        Ok(PermGroup {
            degree,
            generators,
            elements,
            orbits,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    pub fn elements(&self) -> &[Perm] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, p: &Perm) -> bool {
        self.elements.binary_search(p).is_ok()
    }

    /// Orbits of the action, each sorted, ordered by smallest point.
    pub fn orbits(&self) -> &[Vec<usize>] {
        &self.orbits
    }

    pub fn is_transitive(&self) -> bool {
        self.orbits.len() == 1
    }

    /// Pairwise commutation of the generators, which is sufficient.
    pub fn is_abelian(&self) -> bool {
        let g = &self.generators;
        (0..g.len()).all(|i| (i + 1..g.len()).all(|j| &g[i] * &g[j] == &g[j] * &g[i]))
    }

    pub fn is_regular(&self) -> bool {
        self.is_transitive() && self.order() == self.degree
    }

    /// Whether some element has order equal to the group order.
    pub fn is_cyclic(&self) -> bool {
        let n = self.order() as u64;
        self.elements.iter().any(|p| p.order() == n)
    }

    /// Invariant factors via the Sylow decomposition: for each prime `p`
    /// the number of elements of order dividing `p^k` is `p^(sum_i min(e_i, k))`,
    /// which determines the exponents `e_i` of the `p`-part.
    pub fn invariant_factors(&self) -> Result<InvariantFactors, PermError> {
        if !self.is_abelian() {
            return Err(PermError::NotAbelian);
        }
        let orders: Vec<u64> = self.elements.iter().map(Perm::order).collect();
        // exponents[p] sorted descending
        let mut by_prime: Vec<(u64, Vec<u32>)> = Vec::new();
        for (p, e) in arith::factorize(self.order() as u64) {
            let mut log_counts = vec![0u32];
            let mut pk = 1u64;
            for _ in 0..e {
                pk *= p;
                let count = orders.iter().filter(|&&o| pk % o == 0).count() as u64;
                log_counts.push(log_base(count, p));
            }
            // at_least[k] = #{i : e_i >= k}
            let at_least: Vec<u32> = log_counts.windows(2).map(|w| w[1] - w[0]).collect();
            let parts = at_least[0] as usize;
            let exps: Vec<u32> = (0..parts)
                .map(|i| at_least.iter().filter(|&&c| c as usize > i).count() as u32)
                .collect();
            by_prime.push((p, exps));
        }
        let t = by_prime.iter().map(|(_, e)| e.len()).max().unwrap_or(0);
        // largest factor first, then reverse into divisibility order
        let mut factors: Vec<u64> = (0..t)
            .map(|slot| {
                by_prime
                    .iter()
                    .map(|(p, exps)| exps.get(slot).map_or(1, |&e| p.pow(e)))
                    .product()
            })
            .collect();
        factors.reverse();
        Ok(InvariantFactors(factors))
    }
}

fn log_base(mut x: u64, p: u64) -> u32 {
    let mut k = 0;
    while x > 1 {
        debug_assert_eq!(x % p, 0);
        x /= p;
        k += 1;
    }
    k
}

fn orbits_of(degree: usize, gens: &[Perm]) -> Vec<Vec<usize>> {
    let mut label = vec![usize::MAX; degree];
    let mut orbits = Vec::new();
    for start in 0..degree {
        if label[start] != usize::MAX {
            continue;
        }
        let id = orbits.len();
        let mut orbit = vec![start];
        label[start] = id;
        let mut k = 0;
        while k < orbit.len() {
            let x = orbit[k];
            for g in gens {
                let y = g.apply(x);
                if label[y] == usize::MAX {
                    label[y] = id;
                    orbit.push(y);
                }
            }
            k += 1;
        }
        orbit.sort_unstable();
        orbits.push(orbit);
    }
    orbits
}
