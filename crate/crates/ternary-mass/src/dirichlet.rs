//! Truncated Dirichlet series with exact rational coefficients, together with
//! the ring operations (convolution, inversion), shifted zeta factors, Euler
//! products, and twisted multiplicative assembly used by the mass series.

use crate::arith::{factor, format_rat, odd_part, pow_rat, Rat};
use num::{One, Zero};
use std::collections::HashMap;

/// A Dirichlet series truncated at a finite bound: coefficients are stored
/// for indices `1..=bound`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirichletSeries {
    // coeffs[n] is the coefficient of n^{-s}; coeffs[0] is unused and zero.
    coeffs: Vec<Rat>,
}

impl DirichletSeries {
    /// The zero series up to `bound`.
    pub fn zero(bound: usize) -> Self {
        assert!(bound >= 1);
        DirichletSeries { coeffs: vec![Rat::zero(); bound + 1] }
    }

    /// Series built from an explicit coefficient function on `1..=bound`.
    pub fn from_fn(bound: usize, mut f: impl FnMut(u64) -> Rat) -> Self {
        let mut s = Self::zero(bound);
        for n in 1..=bound {
            s.coeffs[n] = f(n as u64);
        }
        s
    }

    /// The truncation bound (largest index with a stored coefficient).
    pub fn bound(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of `n^{-s}`; panics if `n` is 0 or exceeds the bound.
    pub fn coeff(&self, n: usize) -> &Rat {
        assert!(n >= 1 && n <= self.bound());
        &self.coeffs[n]
    }

    /// Sets the coefficient at `n`.
    pub fn set(&mut self, n: usize, v: Rat) {
        assert!(n >= 1 && n <= self.bound());
        self.coeffs[n] = v;
    }

    /// Truncates to a smaller bound.
    pub fn truncate(&self, bound: usize) -> Self {
        assert!(bound >= 1 && bound <= self.bound());
        DirichletSeries { coeffs: self.coeffs[..=bound].to_vec() }
    }

    /// Dirichlet convolution; the result is truncated to the smaller bound.
    pub fn convolve(&self, other: &DirichletSeries) -> DirichletSeries {
        let n = self.bound().min(other.bound());
        let mut out = Self::zero(n);
        for i in 1..=n {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 1..=n / i {
                if other.coeffs[j].is_zero() {
                    continue;
                }
                let t = &self.coeffs[i] * &other.coeffs[j];
                out.coeffs[i * j] += t;
            }
        }
        out
    }

    /// Multiplicative inverse under Dirichlet convolution.
    /// Panics if the coefficient at 1 vanishes.
    pub fn invert(&self) -> DirichletSeries {
        let n = self.bound();
        assert!(
            !self.coeffs[1].is_zero(),
            "cannot invert a Dirichlet series with vanishing leading coefficient"
        );
        let lead_inv = self.coeffs[1].clone().recip();
        let mut out = Self::zero(n);
        out.coeffs[1] = lead_inv.clone();
        for m in 2..=n {
            let mut acc = Rat::zero();
            for d in 2..=m {
                if m % d == 0 && !self.coeffs[d].is_zero() {
                    acc += &self.coeffs[d] * &out.coeffs[m / d];
                }
            }
            out.coeffs[m] = -acc * &lead_inv;
        }
        out
    }

    /// Coefficientwise sum, truncated to the smaller bound.
    pub fn add(&self, other: &DirichletSeries) -> DirichletSeries {
        let n = self.bound().min(other.bound());
        let mut out = Self::zero(n);
        for i in 1..=n {
            out.coeffs[i] = &self.coeffs[i] + &other.coeffs[i];
        }
        out
    }

    /// Coefficientwise difference, truncated to the smaller bound.
    pub fn sub(&self, other: &DirichletSeries) -> DirichletSeries {
        let n = self.bound().min(other.bound());
        let mut out = Self::zero(n);
        for i in 1..=n {
            out.coeffs[i] = &self.coeffs[i] - &other.coeffs[i];
        }
        out
    }

    /// Multiplies every coefficient by a rational scalar.
    pub fn scale(&self, c: &Rat) -> DirichletSeries {
        let mut out = self.clone();
        for i in 1..=out.bound() {
            out.coeffs[i] = &out.coeffs[i] * c;
        }
        out
    }

    /// Multiplies by `2^{-s}`: the coefficient at `n` moves to `2n`.
    pub fn shift_2s(&self) -> DirichletSeries {
        let n = self.bound();
        let mut out = Self::zero(n);
        for i in 1..=n / 2 {
            out.coeffs[2 * i] = self.coeffs[i].clone();
        }
        out
    }

    /// One line per index: `n<TAB>num/den` (denominator omitted when 1).
    pub fn dump(&self) -> String {
        let mut s = String::new();
        for n in 1..=self.bound() {
            s.push_str(&format!("{}\t{}\n", n, format_rat(&self.coeffs[n])));
        }
        s
    }
}

/// `ζ(a·s + b)` truncated at `bound`: the coefficient at `n = m^a` is `m^{-b}`,
/// all other coefficients vanish. `b` may be negative.
pub fn zeta_shift(a: u32, b: i32, bound: usize) -> DirichletSeries {
    assert!(a >= 1);
    let mut s = DirichletSeries::zero(bound);
    let mut m: u64 = 1;
    loop {
        let n = m.checked_pow(a).filter(|&n| n <= bound as u64);
        match n {
            Some(n) => s.coeffs[n as usize] = pow_rat(m as i64, -b),
            None => break,
        }
        m += 1;
    }
    s
}

/// One Euler factor as a rational function of `X = p^{-s}`: a polynomial
/// numerator over a polynomial denominator with nonzero constant term.
#[derive(Debug, Clone)]
pub struct EulerFactor {
    pub num: Vec<Rat>,
    pub den: Vec<Rat>,
}

impl EulerFactor {
    /// Power-series expansion of `num/den` to `len` coefficients, by long
    /// division. Panics if the denominator's constant term vanishes.
    pub fn expand(&self, len: usize) -> Vec<Rat> {
        assert!(!self.den[0].is_zero(), "Euler factor denominator must be a unit");
        let d0 = self.den[0].clone().recip();
        let mut out = vec![Rat::zero(); len];
        for k in 0..len {
            let mut acc = if k < self.num.len() { self.num[k].clone() } else { Rat::zero() };
            for j in 1..self.den.len().min(k + 1) {
                acc -= &self.den[j] * &out[k - j];
            }
            out[k] = acc * &d0;
        }
        out
    }
}

/// Assembles a Dirichlet series from per-prime Euler factors: the coefficient
/// at `n = Π p^e` is the product of the `X^e` coefficients of each factor.
pub fn euler_product(bound: usize, factor_at: impl Fn(u64) -> EulerFactor) -> DirichletSeries {
    let mut cache: HashMap<u64, Vec<Rat>> = HashMap::new();
    DirichletSeries::from_fn(bound, |n| {
        let mut c = Rat::one();
        for (p, e) in factor(n) {
            let coeffs = cache.entry(p).or_insert_with(|| {
                let mut len = 1usize;
                let mut pk = p;
                while pk <= bound as u64 {
                    len += 1;
                    match pk.checked_mul(p) {
                        Some(v) => pk = v,
                        None => break,
                    }
                }
                factor_at(p).expand(len)
            });
            c *= &coeffs[e as usize];
        }
        c
    })
}

/// Assembles a series whose coefficient at `n` is multiplicative in a twisted
/// sense: the product over `p^e ‖ n` of `local(p, e, n)`, where each local
/// factor may also inspect the full index `n` (used for factors that depend
/// on the square class of the complementary part, e.g. a quadratic twist).
///
/// By convention the factor at `p = 2` is applied for every `n`, including
/// odd `n` (with exponent 0), so a factor supported on even indices can
/// annihilate odd coefficients.
pub fn twisted_coefficients(
    bound: usize,
    local: impl Fn(u64, u32, u64) -> Rat,
) -> DirichletSeries {
    DirichletSeries::from_fn(bound, |n| {
        let nu2 = n.trailing_zeros();
        let mut c = local(2, nu2, n);
        if c.is_zero() {
            return c;
        }
        for (p, e) in factor(odd_part(n)) {
            c *= local(p, e, n);
            if c.is_zero() {
                break;
            }
        }
        c
    })
}
