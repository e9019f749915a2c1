//! Local genus data and representation densities for ternary lattices over
//! the p-adic integers at an odd prime.
//!
//! A genus of rank-3 unimodular-block decompositions with Gram determinant
//! valuation `a + b` (`0 ≤ a ≤ b`) is labelled by the Jordan valuations
//! `(0, a, b)` together with three unit characters `ε1, ε2, ε3 ∈ {±1}`: the
//! Legendre characters of the determinants of the successive Jordan
//! constituents, with canonical trivial choices whenever two valuations
//! coincide (so each isomorphism class appears exactly once).

use crate::arith::{legendre_symbol, pow_rat, rat, rat_int, Rat};
use crate::dirichlet::EulerFactor;
use num::{One, Zero};

/// A local genus of positive rank-3 lattices at an odd prime `p`.
///
/// The Gram matrix is equivalent to `diag(u1, u2 p^a, u3 p^b)` with units
/// `u_i`; `eps_i` is the Legendre character of `u_i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OddLocalGenus {
    pub p: u64,
    pub a: u32,
    pub b: u32,
    pub eps1: i32,
    pub eps2: i32,
    pub eps3: i32,
}

/// Enumerates the local genera at odd `p` whose Gram determinant has
/// valuation `nu_gram` and unit character `chi_u ∈ {±1}`.
///
/// Duplicate labels are removed by fixing `eps1 = eps2 = +1` when `a = b = 0`,
/// `eps1 = +1` when `0 = a < b`, and `eps2 = +1` when `0 < a = b`.
pub fn enumerate_odd_local_genera(p: u64, nu_gram: u32, chi_u: i32) -> Vec<OddLocalGenus> {
    assert!(p > 2 && chi_u.abs() == 1);
    let mut out = Vec::new();
    for a in 0..=nu_gram / 2 {
        let b = nu_gram - a;
        for eps1 in [1i32, -1] {
            for eps2 in [1i32, -1] {
                for eps3 in [1i32, -1] {
                    if eps1 * eps2 * eps3 != chi_u {
                        continue;
                    }
                    if a == 0 && b == 0 && !(eps1 == 1 && eps2 == 1) {
                        continue;
                    }
                    if a == 0 && b != 0 && eps1 != 1 {
                        continue;
                    }
                    if a != 0 && a == b && eps2 != 1 {
                        continue;
                    }
                    out.push(OddLocalGenus { p, a, b, eps1, eps2, eps3 });
                }
            }
        }
    }
    out
}

/// Hasse invariant of the genus, computed from the diagonal model
/// `diag(u1, u2 p^a, u3 p^b)` via Hilbert symbols at `p`.
pub fn hasse_odd(g: &OddLocalGenus) -> i32 {
    let eps_p = legendre_symbol(-1, g.p);
    let pow = |s: i32, e: u32| if e % 2 == 0 { 1 } else { s };
    pow(g.eps1, g.a + g.b) * pow(g.eps2, g.b) * pow(g.eps3, g.a) * pow(eps_p, g.a * g.b)
}

/// Normalized local representation density of the genus: the reciprocal of
/// the local mass factor, scaled by `(1 - p^{-2})` so that the unimodular
/// genus has density 1.
pub fn normalized_density_odd(g: &OddLocalGenus) -> Rat {
    let p = g.p as i64;
    // Jordan blocks as (scale, dim, character-of-(-det_block)); `None` marks
    // dimension 1 or 3 where no character enters the diagonal factor.
    let blocks: Vec<(u32, u32, Option<i32>)> = if g.a == 0 && g.b == 0 {
        vec![(0, 3, None)]
    } else if g.a == 0 {
        vec![(0, 2, Some(g.eps1 * g.eps2)), (g.b, 1, None)]
    } else if g.a == g.b {
        vec![(0, 1, None), (g.a, 2, Some(g.eps2 * g.eps3))]
    } else {
        vec![(0, 1, None), (g.a, 1, None), (g.b, 1, None)]
    };
    let ord: i32 = blocks.iter().map(|&(s, n, _)| (s * n) as i32).sum();
    let mut beta_inv = pow_rat(p, -2 * ord) * rat_int(2);
    for &(_, n, chi2) in &blocks {
        beta_inv *= match n {
            1 => rat(1, 2),
            3 => (rat_int(2) * (Rat::one() - pow_rat(p, -2))).recip(),
            2 => {
                let ch = legendre_symbol(-1, g.p) * chi2.unwrap();
                (rat_int(2) * (Rat::one() - rat(ch as i64, p))).recip()
            }
            _ => unreachable!(),
        };
    }
    let mut cross: i32 = 0;
    for i in 0..blocks.len() {
        for j in i + 1..blocks.len() {
            let (si, ni, _) = blocks[i];
            let (sj, nj, _) = blocks[j];
            cross += (sj as i32 - si as i32) * (ni * nj) as i32;
        }
    }
    assert!(cross % 2 == 0);
    beta_inv *= pow_rat(p, cross / 2);
    (Rat::one() - pow_rat(p, -2)) * beta_inv
}

/// Sum of normalized densities over the local genera at `(p, nu_gram, chi_u)`.
pub fn a_star_odd(p: u64, nu_gram: u32, chi_u: i32) -> Rat {
    enumerate_odd_local_genera(p, nu_gram, chi_u)
        .iter()
        .map(normalized_density_odd)
        .fold(Rat::zero(), |acc, d| acc + d)
}

/// Hasse-weighted sum of normalized densities over the local genera.
pub fn b_star_odd(p: u64, nu_gram: u32, chi_u: i32) -> Rat {
    enumerate_odd_local_genera(p, nu_gram, chi_u)
        .iter()
        .map(|g| normalized_density_odd(g) * rat_int(hasse_odd(g) as i64))
        .fold(Rat::zero(), |acc, d| acc + d)
}

/// Closed-form generating function of `a_star_odd` in `X = p^{-s}`:
/// `(1 - p^{-6} X^3) / ((1 - X/p)(1 - p^{-3} X^2))`.
pub fn a_star_odd_factor(p: u64) -> EulerFactor {
    let p = p as i64;
    EulerFactor {
        num: vec![rat_int(1), rat_int(0), rat_int(0), -pow_rat(p, -6)],
        den: vec![rat_int(1), rat(-1, p), -pow_rat(p, -3), pow_rat(p, -4)],
    }
}

/// Closed-form generating function of `b_star_odd` in `X = p^{-s}`:
/// `(1 + (-1/p) p^{-2} X + p^{-4} X^2) / (1 - p^{-2} X^2)`.
pub fn b_star_odd_factor(p: u64) -> EulerFactor {
    let ep = legendre_symbol(-1, p) as i64;
    let p = p as i64;
    EulerFactor {
        num: vec![rat_int(1), pow_rat(p, -2) * rat_int(ep), pow_rat(p, -4)],
        den: vec![rat_int(1), rat_int(0), -pow_rat(p, -2)],
    }
}
