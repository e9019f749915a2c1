//! Elementary number theory: quadratic residue symbols, Hilbert symbols over
//! the rationals, p-adic square classes, and small rational helpers.

use num::{BigInt, BigRational, One, Signed, Zero};

/// Exact rational scalar used throughout the crate.
pub type Rat = BigRational;

/// `n/d` as an exact rational.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// `n` as an exact rational.
pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// `p^e` as an exact rational, for any sign of `e`.
pub fn pow_rat(p: i64, e: i32) -> Rat {
    let base = Rat::from_integer(BigInt::from(p));
    if e >= 0 {
        base.pow(e)
    } else {
        base.pow(-e).recip()
    }
}

fn mod_pow(mut base: u128, mut exp: u128, modulus: u128) -> u128 {
    let mut acc: u128 = 1;
    base %= modulus;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % modulus;
        }
        base = base * base % modulus;
        exp >>= 1;
    }
    acc
}

/// Legendre symbol `(a/p)` for an odd prime `p`; returns `0` when `p | a`.
pub fn legendre_symbol(a: i64, p: u64) -> i32 {
    debug_assert!(p > 2 && p % 2 == 1);
    let pi = p as i64;
    let r = a.rem_euclid(pi) as u128;
    if r == 0 {
        return 0;
    }
    let e = mod_pow(r, (p as u128 - 1) / 2, p as u128);
    if e == 1 {
        1
    } else {
        -1
    }
}

/// Kronecker symbol `(2/u)` for odd `u`: `+1` iff `u ≡ ±1 (mod 8)`.
pub fn kronecker_2(u: i64) -> i32 {
    debug_assert!(u % 2 != 0);
    match u.rem_euclid(8) {
        1 | 7 => 1,
        3 | 5 => -1,
        _ => unreachable!(),
    }
}

/// `(u-1)/2 mod 2` for odd `u`: the quadratic character of `-1` exponent.
fn eps2(u: i64) -> u32 {
    debug_assert!(u % 2 != 0);
    if u.rem_euclid(4) == 1 {
        0
    } else {
        1
    }
}

/// `(u^2-1)/8 mod 2` for odd `u`: the quadratic character of `2` exponent.
fn omega2(u: i64) -> u32 {
    if kronecker_2(u) == 1 {
        0
    } else {
        1
    }
}

/// A place of the rational numbers: the archimedean place or a finite prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Place {
    Infinity,
    Prime(u64),
}

/// Splits a nonzero integer as `p^val * unit` with `p ∤ unit`.
fn int_val_unit(x: &BigInt, p: u64) -> (i32, BigInt) {
    debug_assert!(!x.is_zero());
    let pb = BigInt::from(p);
    let mut v = 0;
    let mut u = x.clone();
    loop {
        let (q, r) = num::Integer::div_rem(&u, &pb);
        if r.is_zero() {
            v += 1;
            u = q;
        } else {
            return (v, u);
        }
    }
}

fn bigint_mod_i64(x: &BigInt, m: i64) -> i64 {
    use num::ToPrimitive;
    let r = x % BigInt::from(m);
    let r = r.to_i64().unwrap();
    r.rem_euclid(m)
}

/// Legendre symbol of a `p`-adic unit given as a fraction of two integers
/// prime to `p`.
fn legendre_of_unit_frac(num: &BigInt, den: &BigInt, p: u64) -> i32 {
    legendre_symbol(bigint_mod_i64(num, p as i64), p)
        * legendre_symbol(bigint_mod_i64(den, p as i64), p)
}

/// Hilbert symbol `(a, b)_v ∈ {±1}` for nonzero rationals at a place `v`.
pub fn hilbert_symbol(a: &Rat, b: &Rat, place: Place) -> i32 {
    assert!(!a.is_zero() && !b.is_zero(), "hilbert_symbol needs nonzero arguments");
    match place {
        Place::Infinity => {
            if a.is_negative() && b.is_negative() {
                -1
            } else {
                1
            }
        }
        Place::Prime(p) => {
            let (an_v, an_u) = int_val_unit(a.numer(), p);
            let (ad_v, ad_u) = int_val_unit(a.denom(), p);
            let (bn_v, bn_u) = int_val_unit(b.numer(), p);
            let (bd_v, bd_u) = int_val_unit(b.denom(), p);
            let alpha = (an_v - ad_v).rem_euclid(2) as u32;
            let beta = (bn_v - bd_v).rem_euclid(2) as u32;
            if p == 2 {
                let ua = bigint_mod_i64(&an_u, 8) * bigint_mod_i64(&ad_u, 8) % 8;
                let ub = bigint_mod_i64(&bn_u, 8) * bigint_mod_i64(&bd_u, 8) % 8;
                let e = eps2(ua) * eps2(ub) + alpha * omega2(ub) + beta * omega2(ua);
                if e % 2 == 0 {
                    1
                } else {
                    -1
                }
            } else {
                let la = legendre_of_unit_frac(&an_u, &ad_u, p);
                let lb = legendre_of_unit_frac(&bn_u, &bd_u, p);
                let eps_p = ((p - 1) / 2 % 2) as u32;
                let mut s = 1;
                if alpha * beta * eps_p % 2 == 1 {
                    s = -s;
                }
                if beta == 1 {
                    s *= la;
                }
                if alpha == 1 {
                    s *= lb;
                }
                s
            }
        }
    }
}

/// The square class of a nonzero `p`-adic number, recorded as its valuation
/// together with a canonical tag for the unit part:
/// for odd `p` the tag is the Legendre symbol of the unit (`±1`),
/// for `p = 2` it is the unit reduced mod 8 (one of `1, 3, 5, 7`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PadicSquareclass {
    pub p: u64,
    pub valuation: u32,
    pub unit: i64,
}

/// The `p`-adic square class of a positive integer `n`.
pub fn squareclass_of(n: u64, p: u64) -> PadicSquareclass {
    assert!(n > 0);
    let mut v = 0u32;
    let mut m = n;
    while m % p == 0 {
        v += 1;
        m /= p;
    }
    let unit = if p == 2 {
        (m % 8) as i64
    } else {
        legendre_symbol(m as i64, p) as i64
    };
    PadicSquareclass { p, valuation: v, unit }
}

/// Prime factorization of `n ≥ 1` by trial division, as `(p, exponent)` pairs.
pub fn factor(mut n: u64) -> Vec<(u64, u32)> {
    assert!(n >= 1);
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// The odd part of a positive integer.
pub fn odd_part(mut n: u64) -> u64 {
    assert!(n > 0);
    while n % 2 == 0 {
        n /= 2;
    }
    n
}

/// Exact integer square root floor for nonnegative `n`.
pub fn isqrt(n: i64) -> i64 {
    assert!(n >= 0);
    if n == 0 {
        return 0;
    }
    let mut x = (n as f64).sqrt() as i64 + 2;
    while x * x > n {
        x -= 1;
    }
    x
}

/// Formats a rational as `num/den`, omitting `/den` when the denominator is 1.
pub fn format_rat(x: &Rat) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Rational `1`.
pub fn one() -> Rat {
    Rat::one()
}

/// Rational `0`.
pub fn zero() -> Rat {
    Rat::zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_basics() {
        assert_eq!(legendre_symbol(1, 7), 1);
        assert_eq!(legendre_symbol(2, 7), 1);
        assert_eq!(legendre_symbol(3, 7), -1);
        assert_eq!(legendre_symbol(14, 7), 0);
        assert_eq!(legendre_symbol(-1, 5), 1);
        assert_eq!(legendre_symbol(-1, 7), -1);
        // Multiplicativity on a grid.
        for p in [3u64, 5, 7, 11, 13] {
            for a in 1..20i64 {
                for b in 1..20i64 {
                    assert_eq!(
                        legendre_symbol(a * b, p),
                        legendre_symbol(a, p) * legendre_symbol(b, p)
                    );
                }
            }
        }
    }

    #[test]
    fn kronecker_2_matches_legendre_of_two() {
        for p in [3i64, 5, 7, 11, 13, 17, 19, 23] {
            assert_eq!(kronecker_2(p), legendre_symbol(2, p as u64));
        }
        assert_eq!(kronecker_2(1), 1);
        assert_eq!(kronecker_2(-1), 1);
        assert_eq!(kronecker_2(3), -1);
        assert_eq!(kronecker_2(-3), -1);
    }

    #[test]
    fn hilbert_known_values() {
        let r = |n, d| rat(n, d);
        // (-1,-1) is -1 at 2 and infinity, +1 at odd primes.
        assert_eq!(hilbert_symbol(&r(-1, 1), &r(-1, 1), Place::Infinity), -1);
        assert_eq!(hilbert_symbol(&r(-1, 1), &r(-1, 1), Place::Prime(2)), -1);
        assert_eq!(hilbert_symbol(&r(-1, 1), &r(-1, 1), Place::Prime(3)), 1);
        // (2,3)_3 = (2/3) = -1; (3,3)_3 = (-1/3) = -1.
        assert_eq!(hilbert_symbol(&r(2, 1), &r(3, 1), Place::Prime(3)), -1);
        assert_eq!(hilbert_symbol(&r(3, 1), &r(3, 1), Place::Prime(3)), -1);
        // Squares are trivial.
        assert_eq!(hilbert_symbol(&r(4, 9), &r(-7, 5), Place::Prime(2)), 1);
        // Symbol is symmetric and invariant under multiplying by squares.
        for a in [-6i64, -1, 2, 3, 5, 50] {
            for b in [-10i64, -3, 2, 7, 18] {
                for pl in [Place::Infinity, Place::Prime(2), Place::Prime(3), Place::Prime(5)] {
                    let x = rat(a, 1);
                    let y = rat(b, 1);
                    assert_eq!(hilbert_symbol(&x, &y, pl), hilbert_symbol(&y, &x, pl));
                    assert_eq!(
                        hilbert_symbol(&x, &y, pl),
                        hilbert_symbol(&(x.clone() * rat(49, 4)), &y, pl)
                    );
                }
            }
        }
    }

    #[test]
    fn hilbert_product_formula_small() {
        // Product over all places of (a,b)_v equals 1.
        for a in [-30i64, -7, -2, 3, 10, 45] {
            for b in [-15i64, -4, 2, 6, 77] {
                let x = rat(a, 1);
                let y = rat(b, 1);
                let mut prod = hilbert_symbol(&x, &y, Place::Infinity);
                let mut primes: Vec<u64> = vec![2];
                for (p, _) in factor(a.unsigned_abs()) {
                    primes.push(p);
                }
                for (p, _) in factor(b.unsigned_abs()) {
                    primes.push(p);
                }
                primes.sort_unstable();
                primes.dedup();
                for p in primes {
                    prod *= hilbert_symbol(&x, &y, Place::Prime(p));
                }
                assert_eq!(prod, 1, "product formula failed for ({a},{b})");
            }
        }
    }

    #[test]
    fn squareclass_examples() {
        assert_eq!(
            squareclass_of(12, 2),
            PadicSquareclass { p: 2, valuation: 2, unit: 3 }
        );
        assert_eq!(
            squareclass_of(12, 3),
            PadicSquareclass { p: 3, valuation: 1, unit: 1 }
        );
        assert_eq!(
            squareclass_of(10, 3),
            PadicSquareclass { p: 3, valuation: 0, unit: 1 }
        );
        assert_eq!(
            squareclass_of(5, 3),
            PadicSquareclass { p: 3, valuation: 0, unit: -1 }
        );
        assert_eq!(
            squareclass_of(40, 2),
            PadicSquareclass { p: 2, valuation: 3, unit: 5 }
        );
    }

    #[test]
    fn factor_roundtrip() {
        for n in 1..2000u64 {
            let f = factor(n);
            let mut m = 1u64;
            for (p, e) in f {
                m *= p.pow(e);
            }
            assert_eq!(m, n);
        }
    }

    #[test]
    fn isqrt_exact() {
        for n in 0..10_000i64 {
            let r = isqrt(n);
            assert!(r * r <= n && (r + 1) * (r + 1) > n);
        }
    }
}
