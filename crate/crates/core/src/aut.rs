//! Automorphism groups: brute force through the isomorphism search, and the
//! closed-form automorphisms `f_(s,t)` of `C(n1, n2, r)`.

use thiserror::Error;

use crate::arith::modulo;
use crate::classify::all_isomorphisms;
use crate::construct::{c_params_valid, delta, CParams, ConstructError};
use crate::perm::{Perm, PermError, PermGroup};
use crate::solution::Solution;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AutError {
    #[error(transparent)]
    Construct(#[from] ConstructError),
    #[error(transparent)]
    Group(#[from] PermError),
    #[error("point ({0}, {1}) is outside Z_n1 x Z_n2")]
    PointOutOfRange(u64, u64),
}

/// The automorphism group of a solution.
#[derive(Debug, Clone)]
pub struct AutGroup {
    pub group: PermGroup,
}

impl AutGroup {
    pub fn order(&self) -> usize {
        self.group.order()
    }

    pub fn elements(&self) -> &[Perm] {
        self.group.elements()
    }

    pub fn is_cyclic(&self) -> bool {
        self.group.is_cyclic()
    }
}

/// Every bijection `g` with `g σ_x = σ_{g(x)} g`, found by the
/// isomorphism search from `s` to itself.
pub fn automorphism_group(s: &Solution) -> Result<AutGroup, AutError> {
    let elements = all_isomorphisms(s, s);
    let group = PermGroup::closure(&elements)?;
    debug_assert_eq!(group.order(), elements.len());
    Ok(AutGroup { group })
}

/// `f_(s,t)((a,i)) = (s + a + δ_(a,i) δ_(s,t), t + i + r δ_(a,i) δ_(s,t))`.
pub fn aut_c_closed_form(p: &CParams, s: u64, t: u64) -> Result<Perm, AutError> {
    if !c_params_valid(p.n1, p.n2, p.r) {
        return Err(ConstructError::InvalidParams(p.n1, p.n2, p.r).into());
    }
    if s >= p.n1 || t >= p.n2 {
        return Err(AutError::PointOutOfRange(s, t));
    }
    let d_st = delta(p, s, t).0 as i128;
    let r = p.r as i128;
    let img = (0..p.size())
        .map(|x| {
            let (a, i) = p.decode(x);
            let d = delta(p, a, i).0 as i128 * d_st;
            p.encode(
                modulo(s as i128 + a as i128 + d, p.n1),
                modulo(t as i128 + i as i128 + r * d, p.n2),
            )
        })
        .collect();
    Ok(Perm::from_images(img).expect("f_(s,t) is a bijection"))
}

/// Parameters of `f_(s,t)⁻¹`, namely `(δ² - s, r δ² - t)` with `δ = δ_(s,t)`.
pub fn closed_form_inverse_params(p: &CParams, s: u64, t: u64) -> (u64, u64) {
    let d = delta(p, s, t).0 as i128;
    let d2 = d * d;
    (
        modulo(d2 - s as i128, p.n1),
        modulo(p.r as i128 * d2 - t as i128, p.n2),
    )
}

/// Automorphism group of `C(1, n, r)` is cyclic unless `n ≡ 0` and `r ≡ 2 (mod 4)`.
pub fn is_aut_cyclic_c1nr(n: u64, r: u64) -> Result<bool, AutError> {
    if !c_params_valid(1, n, r) {
        return Err(ConstructError::InvalidParams(1, n, r).into());
    }
    Ok(!(n % 4 == 0 && r % 4 == 2))
}
