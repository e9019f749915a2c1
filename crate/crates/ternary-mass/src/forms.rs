//! Reduced positive definite integer-valued ternary forms: enumeration up to
//! a Hessian-determinant bound, exact automorphism counting, global Hasse
//! invariants, and total/primitive mass tables.
//!
//! This module is the global oracle: its mass totals are compared, per
//! determinant, against the divisor-sum formula and the Dirichlet-series
//! route, with exact rational equality.

use crate::arith::{hilbert_symbol, isqrt, rat, Place, Rat};
use num::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// An integer-valued ternary quadratic form
/// `Q(x,y,z) = a x^2 + b y^2 + c z^2 + r yz + s xz + t xy`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct TernaryForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub r: i64,
    pub s: i64,
    pub t: i64,
}

impl TernaryForm {
    pub fn new(a: i64, b: i64, c: i64, r: i64, s: i64, t: i64) -> Self {
        TernaryForm { a, b, c, r, s, t }
    }

    /// The integer Hessian matrix `[[2a,t,s],[t,2b,r],[s,r,2c]]`.
    pub fn hessian(&self) -> [[i64; 3]; 3] {
        [
            [2 * self.a, self.t, self.s],
            [self.t, 2 * self.b, self.r],
            [self.s, self.r, 2 * self.c],
        ]
    }

    /// Determinant of the Hessian matrix (always even for valid forms).
    pub fn hessian_det(&self) -> i64 {
        let (a, b, c, r, s, t) = (self.a, self.b, self.c, self.r, self.s, self.t);
        2 * a * (4 * b * c - r * r) - t * (2 * c * t - r * s) + s * (t * r - 2 * b * s)
    }

    /// Evaluates the form at an integer vector.
    pub fn evaluate(&self, x: i64, y: i64, z: i64) -> i64 {
        self.a * x * x
            + self.b * y * y
            + self.c * z * z
            + self.r * y * z
            + self.s * x * z
            + self.t * x * y
    }

    /// Positive definiteness via the three leading principal Hessian minors.
    pub fn is_positive_definite(&self) -> bool {
        self.a > 0 && 4 * self.a * self.b - self.t * self.t > 0 && self.hessian_det() > 0
    }

    /// `gcd(a,b,c,r,s,t) = 1`.
    pub fn is_primitive(&self) -> bool {
        fn gcd(a: i64, b: i64) -> i64 {
            if b == 0 {
                a.abs()
            } else {
                gcd(b, a % b)
            }
        }
        [self.b, self.c, self.r, self.s, self.t]
            .iter()
            .fold(self.a, |acc, &x| gcd(acc, x))
            == 1
    }

    /// Applies an integer change of basis `U`: the form `x -> Q(Ux)`, whose
    /// Hessian is `U^T H U`.
    pub fn transform(&self, u: &[[i64; 3]; 3]) -> TernaryForm {
        let h = self.hessian();
        let mut hu = [[0i64; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    hu[i][j] += h[i][k] * u[k][j];
                }
            }
        }
        let mut m = [[0i64; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    m[i][j] += u[k][i] * hu[k][j];
                }
            }
        }
        TernaryForm {
            a: m[0][0] / 2,
            b: m[1][1] / 2,
            c: m[2][2] / 2,
            r: m[1][2],
            s: m[0][2],
            t: m[0][1],
        }
    }
}

/// Eisenstein–Dickson reduction conditions: the main inequalities
/// `0 < a <= b <= c`, `r,s,t` all positive or all nonpositive,
/// `a >= |t|, a >= |s|, b >= |r|`, `a + b + r + s + t >= 0`, plus the
/// classical boundary tie-breaks picking one representative per class.
pub fn is_reduced(f: &TernaryForm) -> bool {
    let (a, b, c, r, s, t) = (f.a, f.b, f.c, f.r, f.s, f.t);
    if !(0 < a && a <= b && b <= c) {
        return false;
    }
    let pos = r > 0 && s > 0 && t > 0;
    let npos = r <= 0 && s <= 0 && t <= 0;
    if !(pos || npos) {
        return false;
    }
    if !(a >= t.abs() && a >= s.abs() && b >= r.abs()) {
        return false;
    }
    if a + b + r + s + t < 0 {
        return false;
    }
    // Boundary tie-breaks.
    if a == t && s > 2 * r {
        return false;
    }
    if a == s && t > 2 * r {
        return false;
    }
    if b == r && t > 2 * s {
        return false;
    }
    if a == -t && s != 0 {
        return false;
    }
    if a == -s && t != 0 {
        return false;
    }
    if b == -r && t != 0 {
        return false;
    }
    if a + b + r + s + t == 0 && 2 * a + 2 * s + t > 0 {
        return false;
    }
    if a == b && r.abs() > s.abs() {
        return false;
    }
    if b == c && s.abs() > t.abs() {
        return false;
    }
    true
}

/// Number of integer matrices `U` with `U^T H U = H`: the automorphism group
/// order of the corresponding lattice (always even, `-I` is an isometry).
///
/// Candidate columns are the vectors representing each diagonal value; the
/// coordinate search box comes from the positive definite bound
/// `x_i^2 <= Q(v) * adj_i(H) / det H` with `adj` the adjugate diagonal.
pub fn automorphism_count(f: &TernaryForm) -> u64 {
    assert!(f.is_positive_definite());
    let h = f.hessian();
    let det = f.hessian_det();
    let adj = [
        h[1][1] * h[2][2] - h[1][2] * h[2][1],
        h[0][0] * h[2][2] - h[0][2] * h[2][0],
        h[0][0] * h[1][1] - h[0][1] * h[1][0],
    ];
    let vmax = f.a.max(f.b).max(f.c);
    let bx: Vec<i64> = adj.iter().map(|&ad| isqrt(2 * vmax * ad / det) + 1).collect();
    let mut reps_a = Vec::new();
    let mut reps_b = Vec::new();
    let mut reps_c = Vec::new();
    for x in -bx[0]..=bx[0] {
        for y in -bx[1]..=bx[1] {
            for z in -bx[2]..=bx[2] {
                let v = f.evaluate(x, y, z);
                if v == f.a {
                    reps_a.push([x, y, z]);
                }
                if v == f.b {
                    reps_b.push([x, y, z]);
                }
                if v == f.c {
                    reps_c.push([x, y, z]);
                }
            }
        }
    }
    let bil = |u: &[i64; 3], v: &[i64; 3]| -> i64 {
        let mut acc = 0;
        for i in 0..3 {
            for j in 0..3 {
                acc += u[i] * h[i][j] * v[j];
            }
        }
        acc
    };
    let mut count = 0u64;
    for v1 in &reps_a {
        for v2 in &reps_b {
            if bil(v1, v2) != f.t {
                continue;
            }
            for v3 in &reps_c {
                if bil(v1, v3) != f.s || bil(v2, v3) != f.r {
                    continue;
                }
                let d = v1[0] * (v2[1] * v3[2] - v2[2] * v3[1])
                    - v2[0] * (v1[1] * v3[2] - v1[2] * v3[1])
                    + v3[0] * (v1[1] * v2[2] - v1[2] * v2[1]);
                if d.abs() == 1 {
                    count += 1;
                }
            }
        }
    }
    count
}

/// Hasse invariant of the form at a place: diagonalize the Gram matrix over
/// the rationals via leading principal minors and take the product of
/// pairwise Hilbert symbols of the diagonal entries.
pub fn hasse_invariant_global(f: &TernaryForm, place: Place) -> i32 {
    // Gram matrix G = H/2; leading principal minors m1, m2, m3 of G give the
    // diagonalization diag(m1, m2/m1, m3/m2). Positive definiteness keeps
    // every minor nonzero.
    let g = [
        [rat(f.a, 1), rat(f.t, 2), rat(f.s, 2)],
        [rat(f.t, 2), rat(f.b, 1), rat(f.r, 2)],
        [rat(f.s, 2), rat(f.r, 2), rat(f.c, 1)],
    ];
    let m1 = g[0][0].clone();
    let m2 = &g[0][0] * &g[1][1] - &g[0][1] * &g[1][0];
    let m3 = rat(f.hessian_det(), 8);
    assert!(
        !m1.is_zero() && !m2.is_zero() && !m3.is_zero(),
        "degenerate form has no Hasse invariant"
    );
    let d1 = m1.clone();
    let d2 = &m2 / &m1;
    let d3 = &m3 / &m2;
    hilbert_symbol(&d1, &d2, place)
        * hilbert_symbol(&d1, &d3, place)
        * hilbert_symbol(&d2, &d3, place)
}

/// One persisted class record: the reduced form with its derived data.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormRecord {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub r: i64,
    pub s: i64,
    pub t: i64,
    pub det_h: i64,
    pub aut: u64,
    pub primitive: bool,
}

impl FormRecord {
    pub fn form(&self) -> TernaryForm {
        TernaryForm::new(self.a, self.b, self.c, self.r, self.s, self.t)
    }

    fn sort_key(&self) -> (i64, i64, i64, i64, i64, i64, i64) {
        (self.det_h, self.a, self.b, self.c, self.r, self.s, self.t)
    }

    fn from_form(f: TernaryForm) -> FormRecord {
        FormRecord {
            a: f.a,
            b: f.b,
            c: f.c,
            r: f.r,
            s: f.s,
            t: f.t,
            det_h: f.hessian_det(),
            aut: automorphism_count(&f),
            primitive: f.is_primitive(),
        }
    }
}

/// Enumerates every reduced positive definite form with Hessian determinant
/// at most `max_det`, exactly once each, in deterministic order (by
/// determinant, then lexicographic coefficients).
///
/// Loop bounds: `a <= b <= c` and `det H >= 4abc` for reduced forms (checked
/// with a factor-2 safety margin: widening bounds never changes the output,
/// and the mass identity detects any missed class exactly).
pub fn enumerate_reduced(max_det: i64) -> Vec<TernaryForm> {
    assert!(max_det >= 2);
    let mut pairs = Vec::new();
    let mut a = 1i64;
    while 2 * a * a * a <= max_det {
        let mut b = a;
        while 2 * a * b * b <= max_det {
            pairs.push((a, b));
            b += 1;
        }
        a += 1;
    }
    let mut out: Vec<TernaryForm> = pairs
        .par_iter()
        .flat_map_iter(|&(a, b)| {
            let mut forms = Vec::new();
            let mut c = b;
            while 2 * a * b * c <= max_det {
                for t in -a..=a {
                    for s in -a..=a {
                        for r in -b..=b {
                            let f = TernaryForm::new(a, b, c, r, s, t);
                            if !is_reduced(&f) {
                                continue;
                            }
                            let d = f.hessian_det();
                            if d > 0 && d <= max_det {
                                forms.push(f);
                            }
                        }
                    }
                }
                c += 1;
            }
            forms
        })
        .collect();
    out.sort_unstable_by_key(|f| (f.hessian_det(), f.a, f.b, f.c, f.r, f.s, f.t));
    out
}

/// Enumerates reduced forms and attaches automorphism counts and primitivity
/// flags, in the deterministic cache order.
pub fn enumerate_records(max_det: i64) -> Vec<FormRecord> {
    let forms = enumerate_reduced(max_det);
    let mut records: Vec<FormRecord> = forms.into_par_iter().map(FormRecord::from_form).collect();
    records.sort_unstable_by_key(|r| r.sort_key());
    records
}

/// Aggregated per-determinant mass data from a class list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MassTable {
    pub max_det: i64,
    total: BTreeMap<i64, Rat>,
    primitive: BTreeMap<i64, Rat>,
    class_count: BTreeMap<i64, usize>,
    primitive_class_count: BTreeMap<i64, usize>,
}

impl MassTable {
    pub fn from_records(records: &[FormRecord], max_det: i64) -> MassTable {
        let mut table = MassTable {
            max_det,
            total: BTreeMap::new(),
            primitive: BTreeMap::new(),
            class_count: BTreeMap::new(),
            primitive_class_count: BTreeMap::new(),
        };
        for rec in records {
            if rec.det_h > max_det {
                continue;
            }
            let w = rat(1, rec.aut as i64);
            *table.total.entry(rec.det_h).or_insert_with(Rat::zero) += &w;
            *table.class_count.entry(rec.det_h).or_insert(0) += 1;
            if rec.primitive {
                *table.primitive.entry(rec.det_h).or_insert_with(Rat::zero) += &w;
                *table.primitive_class_count.entry(rec.det_h).or_insert(0) += 1;
            }
        }
        table
    }

    /// Total mass at determinant `s` (0 when no class exists).
    pub fn total_mass(&self, s: i64) -> Rat {
        self.total.get(&s).cloned().unwrap_or_else(Rat::zero)
    }

    /// Primitive total mass at determinant `s`.
    pub fn primitive_total_mass(&self, s: i64) -> Rat {
        self.primitive.get(&s).cloned().unwrap_or_else(Rat::zero)
    }

    /// Number of classes at determinant `s`.
    pub fn class_count(&self, s: i64) -> usize {
        self.class_count.get(&s).copied().unwrap_or(0)
    }

    /// Number of primitive classes at determinant `s`.
    pub fn primitive_class_count(&self, s: i64) -> usize {
        self.primitive_class_count.get(&s).copied().unwrap_or(0)
    }
}

/// Builds the mass table by full enumeration up to `max_det`.
pub fn build_mass_table(max_det: i64) -> MassTable {
    assert!(max_det >= 2 && max_det % 2 == 0);
    MassTable::from_records(&enumerate_records(max_det), max_det)
}

/// The divisor-sum formula for the total mass:
/// `TMass(S) = (1/48) * Σ_{S/2 = a b^2} (ab - b^2)` for even `S`, and 0 for
/// odd `S` by convention (no form has odd Hessian determinant).
pub fn divisor_formula(s: i64) -> Rat {
    assert!(s >= 1);
    if s % 2 != 0 {
        return Rat::zero();
    }
    let m = s / 2;
    let mut total = 0i64;
    let mut b = 1i64;
    while b * b <= m {
        if m % (b * b) == 0 {
            let a = m / (b * b);
            total += a * b - b * b;
        }
        b += 1;
    }
    rat(total, 48)
}

/// Serializes records as JSON lines in cache order.
pub fn records_to_jsonl(records: &[FormRecord]) -> String {
    let mut out = String::new();
    for rec in records {
        out.push_str(&serde_json::to_string(rec).expect("record serialization"));
        out.push('\n');
    }
    out
}

/// Parses a JSONL cache; reports the first corrupt line by number.
pub fn records_from_jsonl(text: &str) -> Result<Vec<FormRecord>, String> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        match serde_json::from_str::<FormRecord>(line) {
            Ok(rec) => out.push(rec),
            Err(e) => return Err(format!("corrupt cache line {}: {}", i + 1, e)),
        }
    }
    Ok(out)
}
