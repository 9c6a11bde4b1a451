//! Retraction (identifying points with equal σ-rows), multipermutation level,
//! and the level-2 and 2-reductivity tests.

use std::collections::HashMap;

use thiserror::Error;

use crate::perm::Perm;
use crate::solution::{Solution, SolutionError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RetractError {
    #[error("retraction is not well defined at ({0}, {1})")]
    InternalError(usize, usize),
    #[error("quotient failed verification: {0}")]
    Quotient(#[from] SolutionError),
    #[error("carrier has {0} element(s); at least 2 required")]
    CarrierTooSmall(usize),
}

#[derive(Debug, Clone)]
pub struct RetractionResult {
    pub quotient: Solution,
    /// Class index of each point of the original carrier.
    pub projection: Vec<usize>,
}

/// Quotient by `x ~ y ⇔ σ_x = σ_y`. Classes are numbered by first occurrence.
pub fn retract(s: &Solution) -> Result<RetractionResult, RetractError> {
    let n = s.size();
    let mut class_of_row: HashMap<&Perm, usize> = HashMap::new();
    let mut projection = Vec::with_capacity(n);
    let mut reps = Vec::new();
    for x in 0..n {
        let next = class_of_row.len();
        let c = *class_of_row.entry(s.sigma(x)).or_insert_with(|| {
            reps.push(x);
            next
        });
        projection.push(c);
    }

    let m = reps.len();
    let mut table = vec![vec![usize::MAX; m]; m];
    for x in 0..n {
        for y in 0..n {
            let (cx, cy) = (projection[x], projection[y]);
            let image = projection[s.sigma(x).apply(y)];
            let slot = &mut table[cx][cy];
            if *slot == usize::MAX {
                *slot = image;
            } else if *slot != image {
                return Err(RetractError::InternalError(x, y));
            }
        }
    }
    let quotient = Solution::from_table(m, table)?;
    Ok(RetractionResult {
        quotient,
        projection,
    })
}

/// Sizes `|X|, |Ret(X)|, |Ret²(X)|, ..` until the size stops changing.
pub fn retraction_chain(s: &Solution) -> Result<Vec<usize>, RetractError> {
    let mut sizes = vec![s.size()];
    let mut current = s.clone();
    while current.size() > 1 {
        let next = retract(&current)?.quotient;
        if next.size() == current.size() {
            break;
        }
        sizes.push(next.size());
        current = next;
    }
    Ok(sizes)
}

/// Multipermutation level: least `m` with `|Retᵐ(X)| = 1`, or `None` when
/// the retraction chain stalls above one point.
pub fn mpl(s: &Solution) -> Result<Option<usize>, RetractError> {
    let chain = retraction_chain(s)?;
    Ok((chain.last() == Some(&1)).then(|| chain.len() - 1))
}

/// `σ_{σ_x(y)} = σ_y` for all `x, y`.
pub fn is_2_reductive(s: &Solution) -> bool {
    let n = s.size();
    (0..n).all(|x| (0..n).all(|y| s.sigma(s.sigma(x).apply(y)) == s.sigma(y)))
}

/// `σ_{σ_y(x)} = σ_{σ_z(x)}` for all `x, y, z`; equivalent to level at most 2.
pub fn is_mpl_at_most_2(s: &Solution) -> Result<bool, RetractError> {
    let n = s.size();
    if n < 2 {
        return Err(RetractError::CarrierTooSmall(n));
    }
    // enough to compare every σ_y(x) against σ_0(x)
    Ok((0..n).all(|x| {
        let base = s.sigma(s.sigma(0).apply(x));
        (1..n).all(|y| s.sigma(s.sigma(y).apply(x)) == base)
    }))
}
