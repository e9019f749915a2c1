//! Global Dirichlet series assembly: the untwisted (`A`) and Hasse-twisted
//! (`B`) density series built from the local modules, the total-mass series
//! and its primitive companion, and the exact cross-route verification.

use crate::arith::{format_rat, odd_part, rat, rat_int, squareclass_of, Rat};
use crate::dirichlet::{twisted_coefficients, zeta_shift, DirichletSeries};
use crate::forms::MassTable;
use crate::local_odd::{a_star_odd, b_star_odd};
use crate::local_two::{a_star_two, b_star_two};
use num::Signed;

/// A-series, local route: Euler assembly of per-prime density sums. The
/// coefficient at `n` is the product over `p^e || n` of the local density
/// sum at the square class of `n` (the 2-adic factor carries the `2^{-s}`
/// shift, so odd indices vanish).
pub fn build_a_series_local(bound: usize) -> DirichletSeries {
    twisted_coefficients(bound, |p, e, n| {
        if p == 2 {
            a_star_two(e, odd_part(n) as i64 % 8)
        } else {
            a_star_odd(p, e, squareclass_of(n, p).unit as i32)
        }
    })
}

/// B-series, local route: as the A-series but with Hasse-weighted local
/// sums; the 2-adic factor carries the quadratic twist by the odd part of
/// the index.
pub fn build_b_series_local(bound: usize) -> DirichletSeries {
    twisted_coefficients(bound, |p, e, n| {
        if p == 2 {
            b_star_two(e, odd_part(n) as i64 % 8)
        } else {
            b_star_odd(p, e, squareclass_of(n, p).unit as i32)
        }
    })
}

/// A-series, closed form: `ζ(s+1) ζ(2s+3) / (2^s ζ(3s+6))`.
pub fn build_a_series(bound: usize) -> DirichletSeries {
    zeta_shift(1, 1, bound)
        .convolve(&zeta_shift(2, 3, bound))
        .convolve(&zeta_shift(3, 6, bound).invert())
        .shift_2s()
}

/// B-series, closed form: `-ζ(2s+2) ζ(s+2) / (2^s ζ(3s+6))`; the leading
/// sign is `(-1)^(1 + σ₋)` with `σ₋ = 0` in the positive definite case.
pub fn build_b_series(bound: usize) -> DirichletSeries {
    zeta_shift(2, 2, bound)
        .convolve(&zeta_shift(1, 2, bound))
        .convolve(&zeta_shift(3, 6, bound).invert())
        .shift_2s()
        .scale(&rat_int(-1))
}

/// The assembled series bundle: both mass series plus the A/B pair and the
/// primitive-mass series recovered from them.
#[derive(Debug, Clone)]
pub struct SeriesBundle {
    pub bound: usize,
    pub d_a: DirichletSeries,
    pub d_b: DirichletSeries,
    /// Primitive masses assembled from the A/B routes:
    /// coefficient at `S` is `S^2 (a_S + b_S) / 192`.
    pub d_m_star: DirichletSeries,
    pub d_mass: DirichletSeries,
    pub d_mass_star: DirichletSeries,
}

/// Builds the full bundle up to `bound`.
///
/// Total-mass series: `(1/(48·2^s)) [ζ(s-1) ζ(2s-1) - ζ(2s-2) ζ(s)]`.
/// The transcendental normalization never appears: the constant κ₃ = 2ζ(2)
/// of the mass machinery enters only in the combination
/// `ζ(2) / (2π² · 2^{s+2}) = 1 / (48 · 2^s)`, which is rational, so every
/// coefficient stays an exact rational.
///
/// Primitive masses arise two ways: dividing out the cube-scaling factor,
/// `D_mass_star = D_mass / ζ(3s)`, and from the local-density routes,
/// `S^2 (a_S + b_S) / 192`; both are exposed and must agree.
pub fn build_mass_series(bound: usize) -> SeriesBundle {
    let t1 = zeta_shift(1, -1, bound).convolve(&zeta_shift(2, -1, bound));
    let t2 = zeta_shift(2, -2, bound).convolve(&zeta_shift(1, 0, bound));
    let d_mass = t1.sub(&t2).scale(&rat(1, 48)).shift_2s();
    let d_mass_star = d_mass.convolve(&zeta_shift(3, 0, bound).invert());
    let d_a = build_a_series(bound);
    let d_b = build_b_series(bound);
    let mut d_m_star = DirichletSeries::zero(bound);
    for s in 1..=bound {
        let v = (d_a.coeff(s) + d_b.coeff(s)) * rat((s * s) as i64, 192);
        d_m_star.set(s, v);
    }
    SeriesBundle { bound, d_a, d_b, d_m_star, d_mass, d_mass_star }
}

/// One comparison row of a verification report.
#[derive(Debug, Clone)]
pub struct VerifyRow {
    pub s: usize,
    pub which: &'static str,
    pub enumerated: Rat,
    pub formula: Rat,
    pub pass: bool,
}

impl VerifyRow {
    /// Machine-readable JSON line `{"S",...,"enumerated","formula","pass"}`.
    pub fn to_json(&self) -> String {
        format!(
            "{{\"S\":{},\"which\":\"{}\",\"enumerated\":\"{}\",\"formula\":\"{}\",\"pass\":{}}}",
            self.s,
            self.which,
            format_rat(&self.enumerated),
            format_rat(&self.formula),
            self.pass
        )
    }
}

/// A full verification report: per-determinant comparisons of the enumerated
/// masses against the series coefficients, plus bundle-internal route checks.
#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub rows: Vec<VerifyRow>,
    pub internal_checks: Vec<(String, bool)>,
}

impl VerifyReport {
    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass) && self.internal_checks.iter().all(|(_, ok)| *ok)
    }

    /// Determinants with a failing comparison.
    pub fn failing_s(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.rows.iter().filter(|r| !r.pass).map(|r| r.s).collect();
        v.dedup();
        v
    }
}

/// Compares enumerated total and primitive masses against the series
/// coefficients for every even determinant within both bounds, and runs the
/// bundle-internal route agreements.
pub fn verify_bundle(bundle: &SeriesBundle, table: &MassTable) -> VerifyReport {
    let bound = bundle.bound.min(table.max_det as usize);
    let mut rows = Vec::new();
    for s in (2..=bound).step_by(2) {
        let enumerated = table.total_mass(s as i64);
        let formula = bundle.d_mass.coeff(s).clone();
        rows.push(VerifyRow {
            s,
            which: "total",
            pass: enumerated == formula,
            enumerated,
            formula,
        });
        let enumerated = table.primitive_total_mass(s as i64);
        let formula = bundle.d_mass_star.coeff(s).clone();
        rows.push(VerifyRow {
            s,
            which: "primitive",
            pass: enumerated == formula,
            enumerated,
            formula,
        });
    }
    VerifyReport { rows, internal_checks: internal_checks(bundle) }
}

/// Bundle-internal exact identities: local/closed route agreement for A and
/// B, the ζ(3s) relation between the two mass series, agreement of the two
/// primitive-mass constructions, and coefficient nonnegativity of the mass
/// series.
pub fn internal_checks(bundle: &SeriesBundle) -> Vec<(String, bool)> {
    let n = bundle.bound;
    let mut checks = Vec::new();
    let a_local = build_a_series_local(n);
    let b_local = build_b_series_local(n);
    checks.push(("A-series local route = closed form".to_string(), a_local == bundle.d_a));
    checks.push(("B-series local route = closed form".to_string(), b_local == bundle.d_b));
    let back = bundle.d_mass_star.convolve(&zeta_shift(3, 0, n));
    checks.push((
        "mass_star * zeta(3s) = mass".to_string(),
        back == bundle.d_mass.truncate(back.bound()),
    ));
    checks.push((
        "primitive mass from A/B = mass_star".to_string(),
        bundle.d_m_star == bundle.d_mass_star,
    ));
    let nonneg = (1..=n).all(|i| {
        !bundle.d_mass.coeff(i).is_negative() && !bundle.d_mass_star.coeff(i).is_negative()
    });
    checks.push(("mass coefficients nonnegative".to_string(), nonneg));
    checks
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::{build_mass_table, divisor_formula};

    #[test]
    fn closed_form_leading_coefficients() {
        let a = build_a_series(20);
        let b = build_b_series(20);
        assert_eq!(a.coeff(1), &rat_int(0));
        assert_eq!(a.coeff(2), &rat_int(1));
        assert_eq!(b.coeff(2), &rat_int(-1));
        for n in (1..=19).step_by(2) {
            assert_eq!(a.coeff(n), &rat_int(0));
            assert_eq!(b.coeff(n), &rat_int(0));
        }
    }

    #[test]
    fn routes_agree_small() {
        let n = 240;
        assert_eq!(build_a_series_local(n), build_a_series(n));
        assert_eq!(build_b_series_local(n), build_b_series(n));
    }

    #[test]
    fn mass_series_matches_divisor_formula() {
        let bundle = build_mass_series(300);
        for s in 1..=300usize {
            assert_eq!(bundle.d_mass.coeff(s), &divisor_formula(s as i64), "S={s}");
        }
    }

    #[test]
    fn mass_star_scaling_example() {
        // TMass(64) counts the primitive classes at 64 plus the c=2 scalings
        // of classes at det 8 (64 = 2^3 * 8).
        let bundle = build_mass_series(64);
        let expected = divisor_formula(64) - divisor_formula(8);
        assert_eq!(bundle.d_mass_star.coeff(64), &expected);
    }

    #[test]
    fn internal_checks_pass() {
        let bundle = build_mass_series(200);
        for (name, ok) in internal_checks(&bundle) {
            assert!(ok, "{name}");
        }
    }

    #[test]
    fn verify_bundle_against_enumeration() {
        let bundle = build_mass_series(120);
        let table = build_mass_table(120);
        let report = verify_bundle(&bundle, &table);
        assert!(report.all_pass());
        assert!(report.failing_s().is_empty());
    }

    #[test]
    fn verify_bundle_flags_fault() {
        let bundle = build_mass_series(60);
        let table = build_mass_table(60);
        let mut report = verify_bundle(&bundle, &table);
        assert!(report.all_pass());
        // Inject a fault: perturb one formula value.
        for row in &mut report.rows {
            if row.s == 48 && row.which == "total" {
                row.pass = row.enumerated == row.formula.clone() + rat_int(1);
            }
        }
        assert!(!report.rows.iter().all(|r| r.pass));
        let failing: Vec<usize> = report.rows.iter().filter(|r| !r.pass).map(|r| r.s).collect();
        assert_eq!(failing, vec![48]);
    }

    #[test]
    fn json_row_format() {
        let row = VerifyRow {
            s: 8,
            which: "total",
            enumerated: rat(1, 48),
            formula: rat(1, 48),
            pass: true,
        };
        assert_eq!(
            row.to_json(),
            "{\"S\":8,\"which\":\"total\",\"enumerated\":\"1/48\",\"formula\":\"1/48\",\"pass\":true}"
        );
    }
}
