//! Finite involutive non-degenerate set-theoretic solutions stored as
//! σ-tables, together with the checks that certify them.
//!
//! A solution on `{0, .., n-1}` is the map `r(x, y) = (σ_x(y), τ_y(x))`.
//! Only σ is stored by callers; τ is always derived as
//! `τ_y(x) = σ⁻¹_{σ_x(y)}(x)`. Every [`Solution`] value has passed
//! [`verify_table`], so downstream code never re-checks the axioms.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::perm::Perm;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolutionError {
    #[error("empty carrier")]
    Empty,
    #[error("table is not {0}x{0}")]
    Shape(usize),
    #[error("entry at row {0} is out of range")]
    OutOfRange(usize),
    #[error("row {0} is not a permutation")]
    NotBijectiveRow(usize),
    #[error("axioms fail: {0:?}")]
    AxiomViolation(VerifyReport),
    #[error("the map a -> σ⁻¹_a(a) is not a bijection")]
    NotNonDegenerate,
}

/// Outcome of both verification routes on a σ-table.
///
/// Route one derives τ and checks the braid relation and `r² = id`.
/// Route two checks the cycle condition on the inverse translations and
/// bijectivity of the T-map. `non_degenerate` covers τ rows and T.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub bijective_rows: bool,
    pub cycle_condition: bool,
    pub non_degenerate: bool,
    pub braid: bool,
    pub involutive: bool,
    pub first_failure: Option<(usize, usize, usize)>,
}

impl VerifyReport {
    pub fn is_solution(&self) -> bool {
        self.bijective_rows
            && self.cycle_condition
            && self.non_degenerate
            && self.braid
            && self.involutive
    }

    /// Verdict of the braid route alone.
    pub fn braid_route(&self) -> bool {
        self.bijective_rows && self.braid && self.involutive && self.non_degenerate
    }

    /// Verdict of the cycle-set route alone.
    pub fn cycle_route(&self) -> bool {
        self.bijective_rows && self.cycle_condition && self.non_degenerate
    }
}

/// A verified finite solution.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Solution {
    sigma: Vec<Perm>,
    tau: Vec<Perm>,
}

/// On-disk form: `{"n": .., "sigma": [[..], ..]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolutionJson {
    pub n: usize,
    pub sigma: Vec<Vec<usize>>,
}

impl Solution {
    /// Validates an `n x n` table with `sigma[x][y] = σ_x(y)`.
    pub fn from_table(n: usize, sigma: Vec<Vec<usize>>) -> Result<Self, SolutionError> {
        let rows = rows_from_table(n, sigma)?;
        Self::from_rows(rows)
    }

    /// Validates a list of rows `σ_0, .., σ_{n-1}`.
    pub fn from_rows(rows: Vec<Perm>) -> Result<Self, SolutionError> {
        let n = rows.len();
        if n == 0 {
            return Err(SolutionError::Empty);
        }
        if rows.iter().any(|r| r.degree() != n) {
            return Err(SolutionError::Shape(n));
        }
        let report = verify_rows(&rows);
        if !report.is_solution() {
            return Err(SolutionError::AxiomViolation(report));
        }
        let tau = tau_rows(&rows).into_iter().map(Perm::from_images).collect::<Result<_, _>>();
        let tau = tau.map_err(|_| SolutionError::AxiomViolation(report))?;
        Ok(Solution { sigma: rows, tau })
    }

    pub fn size(&self) -> usize {
        self.sigma.len()
    }

    pub fn sigma(&self, x: usize) -> &Perm {
        &self.sigma[x]
    }

    pub fn tau(&self, y: usize) -> &Perm {
        &self.tau[y]
    }

    pub fn rows(&self) -> &[Perm] {
        &self.sigma
    }

    /// `r(x, y) = (σ_x(y), τ_y(x))`.
    pub fn r(&self, x: usize, y: usize) -> (usize, usize) {
        (self.sigma[x].apply(y), self.tau[y].apply(x))
    }

    /// `τ` as a table with `tau[y][x] = τ_y(x)`.
    pub fn tau_table(&self) -> Vec<Vec<usize>> {
        self.tau.iter().map(|p| p.images().to_vec()).collect()
    }

    pub fn table(&self) -> Vec<Vec<usize>> {
        self.sigma.iter().map(|p| p.images().to_vec()).collect()
    }

    pub fn to_json(&self) -> SolutionJson {
        SolutionJson {
            n: self.size(),
            sigma: self.table(),
        }
    }

    /// Relabels the carrier along `g`: the result has rows
    /// `g σ_{g⁻¹(x)} g⁻¹`, and `g` is an isomorphism from `self` to it.
    pub fn relabel(&self, g: &Perm) -> Solution {
        let g_inv = g.inverse();
        let rows = (0..self.size())
            .map(|x| &(g * &self.sigma[g_inv.apply(x)]) * &g_inv)
            .collect();
        Solution::from_rows(rows).expect("relabeling preserves the axioms")
    }
}

impl std::fmt::Debug for Solution {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Solution")
            .field("n", &self.size())
            .field("sigma", &self.table())
            .finish()
    }
}

impl TryFrom<SolutionJson> for Solution {
    type Error = SolutionError;

    fn try_from(j: SolutionJson) -> Result<Self, Self::Error> {
        Solution::from_table(j.n, j.sigma)
    }
}

impl From<Solution> for SolutionJson {
    fn from(s: Solution) -> Self {
        s.to_json()
    }
}

impl Serialize for Solution {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.to_json().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Solution {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let j = SolutionJson::deserialize(deserializer)?;
        Solution::try_from(j).map_err(serde::de::Error::custom)
    }
}

fn rows_from_table(n: usize, sigma: Vec<Vec<usize>>) -> Result<Vec<Perm>, SolutionError> {
    if n == 0 {
        return Err(SolutionError::Empty);
    }
    if sigma.len() != n || sigma.iter().any(|row| row.len() != n) {
        return Err(SolutionError::Shape(n));
    }
    sigma
        .into_iter()
        .enumerate()
        .map(|(x, row)| {
            if row.iter().any(|&v| v >= n) {
                return Err(SolutionError::OutOfRange(x));
            }
            Perm::from_images(row).map_err(|_| SolutionError::NotBijectiveRow(x))
        })
        .collect()
}

/// `tau[y][x] = σ⁻¹_{σ_x(y)}(x)`.
pub fn tau_rows(rows: &[Perm]) -> Vec<Vec<usize>> {
    let n = rows.len();
    let inv: Vec<Perm> = rows.iter().map(Perm::inverse).collect();
    (0..n)
        .map(|y| (0..n).map(|x| inv[rows[x].apply(y)].apply(x)).collect())
        .collect()
}

/// τ of a verified solution, as a table.
pub fn tau_from_sigma(s: &Solution) -> Vec<Vec<usize>> {
    tau_rows(s.rows())
}

/// Cycle condition on the inverse translations
/// `σ⁻¹_{σ⁻¹_a(b)} σ⁻¹_a = σ⁻¹_{σ⁻¹_b(a)} σ⁻¹_b`, checked at every point `c`.
/// Returns the lexicographically first failing `(a, b, c)`.
pub fn cycle_condition_witness(rows: &[Perm]) -> Option<(usize, usize, usize)> {
    let n = rows.len();
    let inv: Vec<Perm> = rows.iter().map(Perm::inverse).collect();
    for a in 0..n {
        for b in 0..n {
            let ab = &inv[inv[a].apply(b)];
            let ba = &inv[inv[b].apply(a)];
            for c in 0..n {
                if ab.apply(inv[a].apply(c)) != ba.apply(inv[b].apply(c)) {
                    return Some((a, b, c));
                }
            }
        }
    }
    None
}

pub fn check_cycle_condition(s: &Solution) -> (bool, Option<(usize, usize, usize)>) {
    let w = cycle_condition_witness(s.rows());
    (w.is_none(), w)
}

/// The T-map `a ↦ σ⁻¹_a(a)`.
pub fn t_map_rows(rows: &[Perm]) -> Result<Perm, SolutionError> {
    let img = rows.iter().enumerate().map(|(a, p)| p.inverse().apply(a)).collect();
    Perm::from_images(img).map_err(|_| SolutionError::NotNonDegenerate)
}

pub fn t_map(s: &Solution) -> Result<Perm, SolutionError> {
    t_map_rows(s.rows())
}

/// First `(x, y, z)` where `r₁₂ r₂₃ r₁₂` and `r₂₃ r₁₂ r₂₃` disagree.
fn braid_witness(rows: &[Perm], tau: &[Vec<usize>]) -> Option<(usize, usize, usize)> {
    let n = rows.len();
    let r = |x: usize, y: usize| (rows[x].apply(y), tau[y][x]);
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let lhs = {
                    let (a, b) = r(x, y);
                    let (b, c) = r(b, z);
                    let (a, b) = r(a, b);
                    (a, b, c)
                };
                let rhs = {
                    let (b, c) = r(y, z);
                    let (a, b) = r(x, b);
                    let (b, c) = r(b, c);
                    (a, b, c)
                };
                if lhs != rhs {
                    return Some((x, y, z));
                }
            }
        }
    }
    None
}

fn involutive_witness(rows: &[Perm], tau: &[Vec<usize>]) -> Option<(usize, usize)> {
    let n = rows.len();
    let r = |x: usize, y: usize| (rows[x].apply(y), tau[y][x]);
    (0..n)
        .flat_map(|x| (0..n).map(move |y| (x, y)))
        .find(|&(x, y)| {
            let (u, v) = r(x, y);
            r(u, v) != (x, y)
        })
}

/// Runs both verification routes on raw rows of equal degree.
pub fn verify_rows(rows: &[Perm]) -> VerifyReport {
    let tau = tau_rows(rows);
    let tau_bijective = tau.iter().all(|row| Perm::from_images(row.clone()).is_ok());
    let t_bijective = t_map_rows(rows).is_ok();
    let braid = braid_witness(rows, &tau);
    let involutive = involutive_witness(rows, &tau);
    let cycle = cycle_condition_witness(rows);
    VerifyReport {
        bijective_rows: true,
        cycle_condition: cycle.is_none(),
        non_degenerate: tau_bijective && t_bijective,
        braid: braid.is_none(),
        involutive: involutive.is_none(),
        first_failure: braid.or(involutive.map(|(x, y)| (x, y, 0))).or(cycle),
    }
}

/// Verifies an arbitrary table. Shape and range problems, and non-bijective
/// rows, are reported with every flag false.
pub fn verify_table(n: usize, sigma: Vec<Vec<usize>>) -> VerifyReport {
    match rows_from_table(n, sigma) {
        Ok(rows) => verify_rows(&rows),
        Err(_) => VerifyReport {
            bijective_rows: false,
            cycle_condition: false,
            non_degenerate: false,
            braid: false,
            involutive: false,
            first_failure: None,
        },
    }
}

pub fn verify_solution(s: &Solution) -> VerifyReport {
    verify_rows(s.rows())
}
