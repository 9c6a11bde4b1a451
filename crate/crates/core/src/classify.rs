//! Isomorphism testing, recovery of `C(n1, n2, r)` parameters, counting
//! formulas, and the exhaustive enumeration used as an independent oracle.

use std::ops::ControlFlow;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith;
use crate::construct::{build_c, c_params_valid, CParams};
use crate::perm::{InvariantFactors, Perm, PermGroup};
use crate::retract::{is_mpl_at_most_2, mpl};
use crate::solution::{cycle_condition_witness, verify_rows, Solution};

/// Default carrier bound for [`exhaustive_enumerate`].
pub const DEFAULT_EXHAUSTIVE_BOUND: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("permutation group is not transitive")]
    NotIndecomposable,
    #[error("permutation group is not abelian")]
    NotAbelian,
    #[error("multipermutation level exceeds 2")]
    NotMplAtMost2,
    #[error("structure violation: {0}")]
    StructureViolation(String),
    #[error("carrier size {0} exceeds the exhaustive bound {1}")]
    BoundExceeded(usize, usize),
    #[error("group computation failed: {0}")]
    Group(#[from] crate::perm::PermError),
}

/// An isomorphism `phi` with `phi σ_x = σ'_{phi(x)} phi`, or a proof of absence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IsoCertificate {
    Present(Perm),
    Absent,
}

impl IsoCertificate {
    pub fn is_present(&self) -> bool {
        matches!(self, IsoCertificate::Present(_))
    }

    pub fn map(&self) -> Option<&Perm> {
        match self {
            IsoCertificate::Present(p) => Some(p),
            IsoCertificate::Absent => None,
        }
    }
}

/// Checks `phi(σ_x(y)) = σ'_{phi(x)}(phi(y))` for all `x, y`.
pub fn is_homomorphism(phi: &Perm, from: &Solution, to: &Solution) -> bool {
    let n = from.size();
    phi.degree() == n
        && to.size() == n
        && (0..n).all(|x| {
            let target = to.sigma(phi.apply(x));
            (0..n).all(|y| phi.apply(from.sigma(x).apply(y)) == target.apply(phi.apply(y)))
        })
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Fingerprint {
    n: usize,
    row_orders: Vec<u64>,
    group_order: usize,
    abelian: bool,
    factors: Option<InvariantFactors>,
    mpl: Option<usize>,
}

fn fingerprint(s: &Solution) -> Option<Fingerprint> {
    let mut row_orders: Vec<u64> = s.rows().iter().map(Perm::order).collect();
    row_orders.sort_unstable();
    let g = PermGroup::closure(s.rows()).ok()?;
    let abelian = g.is_abelian();
    Some(Fingerprint {
        n: s.size(),
        row_orders,
        group_order: g.order(),
        abelian,
        factors: if abelian { g.invariant_factors().ok() } else { None },
        mpl: mpl(s).ok().flatten(),
    })
}

/// Backtracking search for isomorphisms `from → to`.
struct IsoSearch<'a> {
    from: &'a Solution,
    to: &'a Solution,
    from_inv: Vec<Perm>,
    to_inv: Vec<Perm>,
    from_order: Vec<u64>,
    to_order: Vec<u64>,
}

const UNSET: usize = usize::MAX;

impl<'a> IsoSearch<'a> {
    fn new(from: &'a Solution, to: &'a Solution) -> Self {
        IsoSearch {
            from,
            to,
            from_inv: from.rows().iter().map(Perm::inverse).collect(),
            to_inv: to.rows().iter().map(Perm::inverse).collect(),
            from_order: from.rows().iter().map(Perm::order).collect(),
            to_order: to.rows().iter().map(Perm::order).collect(),
        }
    }

    fn n(&self) -> usize {
        self.from.size()
    }

    /// Assigns `x ↦ t` and closes under the forced images
    /// `phi(σ_x(y)) = σ'_{phi x}(phi y)` and the same for inverses.
    fn assign(&self, phi: &mut [usize], used: &mut [bool], x: usize, t: usize) -> bool {
        let n = self.n();
        let mut mapped: Vec<usize> = (0..n).filter(|&p| phi[p] != UNSET).collect();
        let mut queue = vec![(x, t)];
        while let Some((x, t)) = queue.pop() {
            if phi[x] != UNSET {
                if phi[x] != t {
                    return false;
                }
                continue;
            }
            if used[t] || self.from_order[x] != self.to_order[t] {
                return false;
            }
            phi[x] = t;
            used[t] = true;
            mapped.push(x);
            for &y in &mapped {
                let (px, py) = (phi[x], phi[y]);
                for (a, pa, b, pb) in [(x, px, y, py), (y, py, x, px)] {
                    queue.push((self.from.sigma(a).apply(b), self.to.sigma(pa).apply(pb)));
                    queue.push((self.from_inv[a].apply(b), self.to_inv[pa].apply(pb)));
                }
            }
        }
        true
    }

    fn candidates(&self, x: usize, used: &[bool]) -> Vec<usize> {
        (0..self.n())
            .filter(|&t| !used[t] && self.to_order[t] == self.from_order[x])
            .collect()
    }

    /// Depth-first search; `visit` receives each complete isomorphism in
    /// deterministic order.
    fn search<F>(&self, phi: &mut Vec<usize>, used: &mut Vec<bool>, visit: &mut F) -> ControlFlow<()>
    where
        F: FnMut(Perm) -> ControlFlow<()>,
    {
        let n = self.n();
        let next = (0..n)
            .filter(|&x| phi[x] == UNSET)
            .map(|x| (self.candidates(x, used), x))
            .min_by_key(|(c, x)| (c.len(), *x));
        let Some((cands, x)) = next else {
            let perm = Perm::from_images(phi.clone()).expect("search keeps phi injective");
            if is_homomorphism(&perm, self.from, self.to) {
                return visit(perm);
            }
            return ControlFlow::Continue(());
        };
        for t in cands {
            let (mut phi2, mut used2) = (phi.clone(), used.clone());
            if self.assign(&mut phi2, &mut used2, x, t) {
                self.search(&mut phi2, &mut used2, visit)?;
            }
        }
        ControlFlow::Continue(())
    }

    /// Runs the search with `phi(0) = anchor`.
    fn from_anchor<F>(&self, anchor: usize, visit: &mut F) -> ControlFlow<()>
    where
        F: FnMut(Perm) -> ControlFlow<()>,
    {
        let n = self.n();
        let mut phi = vec![UNSET; n];
        let mut used = vec![false; n];
        if !self.assign(&mut phi, &mut used, 0, anchor) {
            return ControlFlow::Continue(());
        }
        self.search(&mut phi, &mut used, visit)
    }
}

/// All isomorphisms `from → to`, sorted by image array.
pub fn all_isomorphisms(from: &Solution, to: &Solution) -> Vec<Perm> {
    if from.size() != to.size() {
        return Vec::new();
    }
    let search = IsoSearch::new(from, to);
    let mut found: Vec<Perm> = (0..to.size())
        .into_par_iter()
        .flat_map_iter(|anchor| {
            let mut local = Vec::new();
            let _ = search.from_anchor(anchor, &mut |p| {
                local.push(p);
                ControlFlow::Continue(())
            });
            local
        })
        .collect();
    found.sort_unstable();
    found
}

/// First isomorphism from `s1` to `s2` in anchor order, or `Absent`.
pub fn are_isomorphic(s1: &Solution, s2: &Solution) -> IsoCertificate {
    if s1.size() != s2.size() {
        return IsoCertificate::Absent;
    }
    if s1 == s2 {
        return IsoCertificate::Present(Perm::identity(s1.size()));
    }
    match (fingerprint(s1), fingerprint(s2)) {
        (Some(f1), Some(f2)) if f1 != f2 => return IsoCertificate::Absent,
        _ => {}
    }
    let search = IsoSearch::new(s1, s2);
    let mut found = None;
    for anchor in 0..s2.size() {
        let flow = search.from_anchor(anchor, &mut |p| {
            found = Some(p);
            ControlFlow::Break(())
        });
        if flow.is_break() {
            break;
        }
    }
    match found {
        Some(p) => IsoCertificate::Present(p),
        None => IsoCertificate::Absent,
    }
}

/// Recovers `(n1, n2, r)` for an indecomposable solution of level ≤ 2 with
/// abelian permutation group, using base point `e = 0`.
pub fn recover_params(s: &Solution) -> Result<CParams, ClassifyError> {
    let n = s.size();
    if n == 1 {
        return Ok(CParams { n1: 1, n2: 1, r: 0 });
    }
    let g = PermGroup::closure(s.rows())?;
    if !g.is_transitive() {
        return Err(ClassifyError::NotIndecomposable);
    }
    if !g.is_abelian() {
        return Err(ClassifyError::NotAbelian);
    }
    if !is_mpl_at_most_2(s).unwrap_or(false) {
        return Err(ClassifyError::NotMplAtMost2);
    }
    let n2 = s.sigma(0).order();
    if let Some(x) = (1..n).find(|&x| s.sigma(x).order() != n2) {
        return Err(ClassifyError::StructureViolation(format!(
            "rows 0 and {x} have different orders"
        )));
    }
    let n = n as u64;
    if n % n2 != 0 || n2 % (n / n2) != 0 {
        return Err(ClassifyError::StructureViolation(format!(
            "row order {n2} incompatible with carrier size {n}"
        )));
    }
    let n1 = n / n2;

    let rho = s.sigma(0);
    let lhs = s.sigma(rho.apply(0)).pow(n1 as i64);
    let hits: Vec<u64> = (0..n2 / n1)
        .filter(|&r| rho.pow(((r + 1) * n1) as i64) == lhs)
        .collect();
    let [r] = hits[..] else {
        return Err(ClassifyError::StructureViolation(format!(
            "expected exactly one admissible r, found {hits:?}"
        )));
    };
    if !c_params_valid(n1, n2, r) {
        return Err(ClassifyError::StructureViolation(format!(
            "recovered ({n1}, {n2}, {r}) is not a valid parameter triple"
        )));
    }
    Ok(CParams { n1, n2, r })
}

/// Parameters together with an explicit isomorphism from `build_c(params)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassifyOutcome {
    pub params: CParams,
    pub phi: Perm,
}

/// With `ρ = σ_0` and `λ = σ_{ρ(0)} ρ^{-r-1}`, maps `(a, i) ↦ λ^a ρ^i(0)`.
pub fn explicit_iso_to_c(s: &Solution) -> Result<ClassifyOutcome, ClassifyError> {
    let params = recover_params(s)?;
    let rho = s.sigma(0);
    let lambda = s.sigma(rho.apply(0)) * &rho.pow(-(params.r as i64) - 1);
    let mut img = vec![0; s.size()];
    let mut lambda_a = Perm::identity(s.size());
    for a in 0..params.n1 {
        let mut point = lambda_a.apply(0);
        for i in 0..params.n2 {
            img[params.encode(a, i)] = point;
            point = rho.apply(point);
        }
        lambda_a = &lambda * &lambda_a;
    }
    let phi = Perm::from_images(img).map_err(|_| {
        ClassifyError::StructureViolation("λ^a ρ^i(0) is not a bijection".to_string())
    })?;
    let c = build_c(&params)
        .map_err(|e| ClassifyError::StructureViolation(format!("cannot build {params}: {e}")))?;
    if !is_homomorphism(&phi, &c, s) {
        return Err(ClassifyError::StructureViolation(format!(
            "explicit map from {params} is not a homomorphism"
        )));
    }
    Ok(ClassifyOutcome { params, phi })
}

/// Number of family members on `n` points: `Σ_{d | k} k/d` where `k` is the
/// largest integer with `k² | n`.
pub fn count_family(n: u64) -> u64 {
    let k = arith::largest_square_divisor_root(n);
    arith::divisors(k).iter().map(|d| k / d).sum()
}

/// Number of family members on `n` points with cyclic permutation group.
pub fn count_cyclic(n: u64) -> u64 {
    arith::largest_square_divisor_root(n)
}

/// All valid `(n1, n2, r)` with `n1 n2 = n`, in lexicographic order.
pub fn enumerate_family(n: u64) -> Vec<CParams> {
    let mut out = Vec::new();
    for n1 in 1..=n {
        if n % n1 != 0 {
            continue;
        }
        let n2 = n / n1;
        if n2 % n1 != 0 {
            continue;
        }
        out.extend(
            (0..n2 / n1)
                .filter(|&r| c_params_valid(n1, n2, r))
                .map(|r| CParams { n1, n2, r }),
        );
    }
    out
}

/// Which properties an exhaustively found solution must have.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct EnumFilter {
    pub indecomposable: bool,
    pub abelian: bool,
    pub mpl2: bool,
}

impl EnumFilter {
    pub const ALL: EnumFilter = EnumFilter {
        indecomposable: true,
        abelian: true,
        mpl2: true,
    };

    pub fn accepts(&self, s: &Solution) -> bool {
        if self.indecomposable || self.abelian {
            let Ok(g) = PermGroup::closure(s.rows()) else {
                return false;
            };
            if self.indecomposable && !g.is_transitive() {
                return false;
            }
            if self.abelian && !g.is_abelian() {
                return false;
            }
        }
        !self.mpl2 || matches!(mpl(s), Ok(Some(m)) if m <= 2)
    }
}

/// Exhaustive search over σ-tables on `n` points, up to isomorphism.
pub fn exhaustive_enumerate(n: usize, filter: EnumFilter) -> Result<Vec<Solution>, ClassifyError> {
    exhaustive_enumerate_bounded(n, filter, DEFAULT_EXHAUSTIVE_BOUND)
}

/// Rows are chosen in lexicographic order; a partial table is abandoned as
/// soon as the cycle condition fails on a triple whose rows are all known.
/// Branches for row 0 run in parallel and are merged before deduplication,
/// so the representative of each class is its lexicographically smallest
/// table.
pub fn exhaustive_enumerate_bounded(
    n: usize,
    filter: EnumFilter,
    bound: usize,
) -> Result<Vec<Solution>, ClassifyError> {
    if n > bound {
        return Err(ClassifyError::BoundExceeded(n, bound));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let perms = all_perms(n);
    let inverses: Vec<Perm> = perms.iter().map(Perm::inverse).collect();
    let mut tables: Vec<Vec<usize>> = (0..perms.len())
        .into_par_iter()
        .flat_map_iter(|first| {
            let mut found = Vec::new();
            let mut chosen = vec![first];
            extend_tables(&perms, &inverses, &mut chosen, &mut found);
            found
        })
        .collect();
    tables.sort_unstable();

    let mut classes: Vec<Solution> = Vec::new();
    for choice in tables {
        let rows: Vec<Perm> = choice.iter().map(|&k| perms[k].clone()).collect();
        debug_assert!(verify_rows(&rows).is_solution());
        let s = Solution::from_rows(rows).map_err(|e| {
            ClassifyError::StructureViolation(format!("search produced a non-solution: {e}"))
        })?;
        if !filter.accepts(&s) {
            continue;
        }
        if classes.iter().all(|c| !are_isomorphic(c, &s).is_present()) {
            classes.push(s);
        }
    }
    classes.sort_unstable_by_key(Solution::table);
    Ok(classes)
}

fn extend_tables(perms: &[Perm], inverses: &[Perm], chosen: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    let n = perms[0].degree();
    if !partial_cycle_condition(inverses, chosen) {
        return;
    }
    if chosen.len() == n {
        let rows: Vec<Perm> = chosen.iter().map(|&k| perms[k].clone()).collect();
        if cycle_condition_witness(&rows).is_none() && verify_rows(&rows).is_solution() {
            out.push(chosen.clone());
        }
        return;
    }
    for k in 0..perms.len() {
        chosen.push(k);
        extend_tables(perms, inverses, chosen, out);
        chosen.pop();
    }
}

/// Cycle condition restricted to triples whose needed rows are all chosen.
/// Only triples involving the most recently added row are new.
fn partial_cycle_condition(inverses: &[Perm], chosen: &[usize]) -> bool {
    let m = chosen.len();
    let n = inverses[0].degree();
    let inv = |x: usize| -> Option<&Perm> { chosen.get(x).map(|&k| &inverses[k]) };
    let last = m - 1;
    for a in 0..m {
        for b in 0..m {
            let (Some(ia), Some(ib)) = (inv(a), inv(b)) else {
                continue;
            };
            let (ab, ba) = (ia.apply(b), ib.apply(a));
            if a != last && b != last && ab != last && ba != last {
                continue;
            }
            let (Some(iab), Some(iba)) = (inv(ab), inv(ba)) else {
                continue;
            };
            if (0..n).any(|c| iab.apply(ia.apply(c)) != iba.apply(ib.apply(c))) {
                return false;
            }
        }
    }
    true
}

/// All permutations of `{0, .., n-1}` in lexicographic order.
fn all_perms(n: usize) -> Vec<Perm> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    loop {
        out.push(Perm::from_images(cur.clone()).expect("lexicographic successor is a permutation"));
        // next permutation
        let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else {
            return out;
        };
        let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).expect("pivot has a successor");
        cur.swap(i - 1, j);
        cur[i..].reverse();
    }
}
