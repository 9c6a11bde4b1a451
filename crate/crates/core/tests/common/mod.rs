//! Test-only oracles, written directly on raw tables so they share no code
//! path with the library checks they are compared against.
#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use ybe_lab::{CParams, Perm, Solution};

pub type Table = Vec<Vec<usize>>;

pub fn invert_row(row: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; row.len()];
    for (i, &v) in row.iter().enumerate() {
        inv[v] = i;
    }
    inv
}

/// τ by solving `σ_{σ_x(y)}(t) = x` for `t` by search.
pub fn brute_tau(sigma: &Table) -> Table {
    let n = sigma.len();
    (0..n)
        .map(|y| {
            (0..n)
                .map(|x| {
                    let u = sigma[x][y];
                    (0..n).find(|&t| sigma[u][t] == x).unwrap()
                })
                .collect()
        })
        .collect()
}

/// Braid relation and `r² = id` for `r(x,y) = (σ_x(y), τ_y(x))`.
pub fn brute_braid_and_involutive(sigma: &Table, tau: &Table) -> bool {
    let n = sigma.len();
    let r = |x: usize, y: usize| (sigma[x][y], tau[y][x]);
    let r12 = |t: [usize; 3]| {
        let (a, b) = r(t[0], t[1]);
        [a, b, t[2]]
    };
    let r23 = |t: [usize; 3]| {
        let (b, c) = r(t[1], t[2]);
        [t[0], b, c]
    };
    for x in 0..n {
        for y in 0..n {
            let (u, v) = r(x, y);
            if r(u, v) != (x, y) {
                return false;
            }
            for z in 0..n {
                let t = [x, y, z];
                if r12(r23(r12(t))) != r23(r12(r23(t))) {
                    return false;
                }
            }
        }
    }
    true
}

pub fn is_bijective(row: &[usize]) -> bool {
    let mut seen = vec![false; row.len()];
    row.iter().all(|&v| v < row.len() && !std::mem::replace(&mut seen[v], true))
}

/// Full oracle verdict on a table with bijective rows.
pub fn brute_is_solution(sigma: &Table) -> bool {
    let tau = brute_tau(sigma);
    tau.iter().all(|r| is_bijective(r)) && brute_braid_and_involutive(sigma, &tau)
}

/// All valid triples with `n1 n2 <= max`, by direct arithmetic.
pub fn family_up_to(max: u64) -> Vec<CParams> {
    let mut out = Vec::new();
    for n1 in 1..=max {
        for n2 in n1..=max / n1 {
            if n2 % n1 != 0 {
                continue;
            }
            for r in 0..n2 / n1 {
                if (n1 * r * r) % n2 == 0 {
                    out.push(CParams { n1, n2, r });
                }
            }
        }
    }
    out
}

/// Row-wise orbit-union transitivity check.
pub fn brute_transitive(s: &Solution) -> bool {
    let n = s.size();
    let mut reach = vec![false; n];
    reach[0] = true;
    let mut stack = vec![0];
    while let Some(x) = stack.pop() {
        for y in 0..n {
            let z = s.sigma(y).apply(x);
            if !reach[z] {
                reach[z] = true;
                stack.push(z);
            }
        }
    }
    reach.into_iter().all(|b| b)
}

pub fn random_perm<R: Rng>(n: usize, rng: &mut R) -> Perm {
    let mut img: Vec<usize> = (0..n).collect();
    img.shuffle(rng);
    Perm::from_images(img).unwrap()
}

/// `σ'_x = g σ_{g⁻¹(x)} g⁻¹`, computed on raw tables.
pub fn conjugate(s: &Solution, g: &Perm) -> Solution {
    let n = s.size();
    let gi = invert_row(g.images());
    let table: Table = (0..n)
        .map(|x| {
            (0..n)
                .map(|y| g.apply(s.sigma(gi[x]).apply(gi[y])))
                .collect()
        })
        .collect();
    Solution::from_table(n, table).unwrap()
}

pub fn random_bijective_table<R: Rng>(n: usize, rng: &mut R) -> Table {
    (0..n).map(|_| random_perm(n, rng).into_images()).collect()
}

/// All permutations of `0..n` as image arrays, in lexicographic order.
pub fn lex_perms(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        let n = used.len();
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        for v in 0..n {
            if !used[v] {
                used[v] = true;
                prefix.push(v);
                rec(prefix, used, out);
                prefix.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// `p^k` by repeated application.
pub fn power(p: &Perm, k: u64) -> Vec<usize> {
    (0..p.degree())
        .map(|mut x| {
            for _ in 0..k {
                x = p.apply(x);
            }
            x
        })
        .collect()
}
