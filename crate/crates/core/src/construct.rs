//! The family `C(n1, n2, r)` on `Z_{n1} x Z_{n2}`, the two isotope
//! constructions, and a witness with non-abelian permutation group.
//!
//! Points `(a, i)` are encoded as `a * n2 + i` throughout the crate.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::modulo;
use crate::perm::Perm;
use crate::retract::{self, is_2_reductive};
use crate::solution::{Solution, SolutionError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructError {
    #[error("invalid parameters ({0}, {1}, {2})")]
    InvalidParams(u64, u64, u64),
    #[error("base solution is not 2-reductive")]
    NotTwoReductive,
    #[error("solution does not have multipermutation level at most 2")]
    NotMplAtMost2,
    #[error("isotope condition fails at ({0}, {1})")]
    ConditionFailed(usize, usize),
    #[error("point {0} outside carrier of size {1}")]
    PointOutOfRange(usize, usize),
    #[error("permutation has degree {0}, carrier has size {1}")]
    DegreeMismatch(usize, usize),
    #[error("closed-form τ disagrees with the derived τ at ({0}, {1})")]
    TauMismatch(usize, usize),
    #[error(transparent)]
    Solution(#[from] SolutionError),
}

/// Parameters `(n1, n2, r)` with `n1 | n2`, `0 <= r < n2/n1` and `n2 | n1 r²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CParams {
    pub n1: u64,
    pub n2: u64,
    pub r: u64,
}

pub fn c_params_valid(n1: u64, n2: u64, r: u64) -> bool {
    n1 >= 1
        && n2 >= 1
        && n2 % n1 == 0
        && r < n2 / n1
        && (n1 as u128 * r as u128 * r as u128) % n2 as u128 == 0
}

impl CParams {
    pub fn new(n1: u64, n2: u64, r: u64) -> Result<Self, ConstructError> {
        if c_params_valid(n1, n2, r) {
            Ok(CParams { n1, n2, r })
        } else {
            Err(ConstructError::InvalidParams(n1, n2, r))
        }
    }

    pub fn size(&self) -> usize {
        (self.n1 * self.n2) as usize
    }

    pub fn encode(&self, a: u64, i: u64) -> usize {
        (a * self.n2 + i) as usize
    }

    pub fn decode(&self, x: usize) -> (u64, u64) {
        let x = x as u64;
        (x / self.n2, x % self.n2)
    }

    /// Encodes a point given by arbitrary integer coordinates.
    fn point(&self, a: i128, i: i128) -> usize {
        self.encode(modulo(a, self.n1), modulo(i, self.n2))
    }
}

impl fmt::Display for CParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "C({},{},{})", self.n1, self.n2, self.r)
    }
}

/// `δ_(a,i) = i - a r (mod n2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Delta(pub u64);

pub fn delta(p: &CParams, a: u64, i: u64) -> Delta {
    Delta(modulo(i as i128 - a as i128 * p.r as i128, p.n2))
}

/// `σ_(a,i)((b,j)) = (b - a r + i, j + i r - a r² + 1)`.
pub fn build_c(p: &CParams) -> Result<Solution, ConstructError> {
    if !c_params_valid(p.n1, p.n2, p.r) {
        return Err(ConstructError::InvalidParams(p.n1, p.n2, p.r));
    }
    let n = p.size();
    let r = p.r as i128;
    let rows: Vec<Perm> = (0..n)
        .map(|x| {
            let (a, i) = p.decode(x);
            let (a, i) = (a as i128, i as i128);
            let img = (0..n)
                .map(|y| {
                    let (b, j) = p.decode(y);
                    let (b, j) = (b as i128, j as i128);
                    p.point(b - a * r + i, j + i * r - a * r * r + 1)
                })
                .collect();
            Perm::from_images(img).expect("C-family rows are bijective")
        })
        .collect();
    let s = Solution::from_rows(rows)?;

    // closed form τ_(b,j)((a,i)) = (a + b r - (j+1), i - (j+1) r + b r² - 1)
    for y in 0..n {
        let (b, j) = p.decode(y);
        let (b, j) = (b as i128, j as i128);
        for x in 0..n {
            let (a, i) = p.decode(x);
            let (a, i) = (a as i128, i as i128);
            let expect = p.point(a + b * r - (j + 1), i - (j + 1) * r + b * r * r - 1);
            if s.tau(y).apply(x) != expect {
                return Err(ConstructError::TauMismatch(x, y));
            }
        }
    }
    Ok(s)
}

/// `σ'_x = σ_x π` for a 2-reductive `s` and a `π` with
/// `σ_{π(y)} π σ_x = σ_{π(x)} π σ_y` for all `x, y`.
pub fn pi_isotope(s: &Solution, pi: &Perm) -> Result<Solution, ConstructError> {
    let n = s.size();
    if pi.degree() != n {
        return Err(ConstructError::DegreeMismatch(pi.degree(), n));
    }
    if !is_2_reductive(s) {
        return Err(ConstructError::NotTwoReductive);
    }
    if let Some((x, y)) = pi_condition_failure(s, pi) {
        return Err(ConstructError::ConditionFailed(x, y));
    }
    let rows = s.rows().iter().map(|row| row * pi).collect();
    Ok(Solution::from_rows(rows)?)
}

/// First `(x, y)` at which the isotope compatibility condition fails.
pub fn pi_condition_failure(s: &Solution, pi: &Perm) -> Option<(usize, usize)> {
    let n = s.size();
    let lhs = |x: usize, y: usize| &(s.sigma(pi.apply(y)) * pi) * s.sigma(x);
    (0..n)
        .flat_map(|x| (0..n).map(move |y| (x, y)))
        .find(|&(x, y)| lhs(x, y) != lhs(y, x))
}

/// Rows `L_x = σ_x σ_e⁻¹` of a level ≤ 2 solution; the result is 2-reductive.
pub fn inverse_isotope(s: &Solution, e: usize) -> Result<Solution, ConstructError> {
    let n = s.size();
    if e >= n {
        return Err(ConstructError::PointOutOfRange(e, n));
    }
    if n >= 2 && !retract::is_mpl_at_most_2(s).unwrap_or(false) {
        return Err(ConstructError::NotMplAtMost2);
    }
    let inv_e = s.sigma(e).inverse();
    let rows = s.rows().iter().map(|row| row * &inv_e).collect();
    Ok(Solution::from_rows(rows)?)
}

/// The `2n`-point solution on `Z_n x {0,1}` (point `(a,i)` at `2a + i`) with
/// `σ'_(a,i) = σ_(a,i) π`, where `σ_(a,i)((b,j)) = (b + i, j)` and
/// `π((a,i)) = (-a, 1 - i)`.
pub fn build_nonabelian_example(n: u64) -> Result<Solution, ConstructError> {
    let (base, pi) = nonabelian_base(n)?;
    pi_isotope(&base, &pi)
}

/// The 2-reductive base and the permutation `π` of the non-abelian witness.
pub fn nonabelian_base(n: u64) -> Result<(Solution, Perm), ConstructError> {
    if n == 0 {
        return Err(ConstructError::InvalidParams(n, 2, 0));
    }
    let m = (2 * n) as usize;
    let pt = |a: i128, i: i128| (2 * modulo(a, n) + modulo(i, 2)) as usize;
    let rows = (0..m)
        .map(|x| {
            let i = (x % 2) as i128;
            let img = (0..m)
                .map(|y| pt((y / 2) as i128 + i, (y % 2) as i128))
                .collect();
            Perm::from_images(img).expect("translation rows are bijective")
        })
        .collect();
    let base = Solution::from_rows(rows)?;
    let pi = Perm::from_images(
        (0..m)
            .map(|x| pt(-((x / 2) as i128), 1 - (x % 2) as i128))
            .collect(),
    )
    .expect("π is an involution");
    Ok((base, pi))
}
