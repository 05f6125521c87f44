use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::{CheckReport, QuantumCurveError, Window};
use crate::combinat::{aut_order, partitions_exact};
use crate::exact_algebra::{int, rat, Rational};
use crate::hurwitz_numbers::{HurwitzKey, HurwitzTable};

/// Truncated series `Σ c_{d,e} x^d ħ^e` with `d ≤ d_max`, `e ≤ e_max`.
/// Every operator used here only raises `d` and `e`, so truncation never
/// corrupts a retained coefficient.
#[derive(Clone, Debug, PartialEq)]
pub struct BiSeries {
    pub d_max: u32,
    pub e_max: i64,
    coeffs: BTreeMap<(u32, i64), Rational>,
}

impl BiSeries {
    pub fn new(d_max: u32, e_max: i64) -> Self {
        BiSeries { d_max, e_max, coeffs: BTreeMap::new() }
    }

    pub fn monomial(d: u32, e: i64, c: Rational, d_max: u32, e_max: i64) -> Self {
        let mut s = Self::new(d_max, e_max);
        s.add_term(d, e, c);
        s
    }

    pub fn get(&self, d: u32, e: i64) -> Rational {
        self.coeffs.get(&(d, e)).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, d: u32, e: i64, c: Rational) {
        if d > self.d_max || e > self.e_max || c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry((d, e)).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&(d, e));
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, i64), &Rational)> {
        self.coeffs.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (&(d, e), c) in &o.coeffs {
            out.add_term(d, e, c.clone());
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (&(d, e), c) in &o.coeffs {
            out.add_term(d, e, -c.clone());
        }
        out
    }

    pub fn scale(&self, q: &Rational) -> Self {
        let mut out = Self::new(self.d_max, self.e_max);
        for (&(d, e), c) in &self.coeffs {
            out.add_term(d, e, c * q);
        }
        out
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = Self::new(self.d_max.min(o.d_max), self.e_max.min(o.e_max));
        for (&(d1, e1), c1) in &self.coeffs {
            for (&(d2, e2), c2) in &o.coeffs {
                out.add_term(d1 + d2, e1 + e2, c1 * c2);
            }
        }
        out
    }

    /// First nonzero coefficient.
    fn first(&self) -> Option<((u32, i64), Rational)> {
        self.coeffs.iter().next().map(|(k, c)| (*k, c.clone()))
    }
}

/// `Z = exp(Σ ħ^{2g−2+n} F_{g,n}(x, …, x)/n!)` on a window.
#[derive(Clone, Debug, PartialEq)]
pub struct PartitionTruncation {
    pub r: u32,
    pub d_max: u32,
    pub e_max: i64,
    pub z: BiSeries,
}

impl PartitionTruncation {
    pub fn coeff(&self, d: u32, e: i64) -> Rational {
        self.z.get(d, e)
    }

    /// Lowest ħ-power in the window: each factor of `x^r` costs at most one `ħ^{−1}`.
    pub fn e_min(&self) -> i64 {
        -((self.d_max / self.r) as i64)
    }

    fn window(&self) -> Window {
        Window { d_max: Some(self.d_max), e_min: self.e_min(), e_max: self.e_max }
    }
}

fn assemble(
    r: u32,
    d_max: u32,
    e_max: i64,
    mut h: impl FnMut(u32, &[u32]) -> Result<Rational, QuantumCurveError>,
) -> Result<PartitionTruncation, QuantumCurveError> {
    assert!(r >= 1);
    let kmax = (d_max / r) as i64;
    // a coefficient of Z with ħ-order ≤ e_max uses factors of order ≤ e_max + kmax − 1
    let cap = e_max + (kmax - 1).max(0);
    let mut log_z = BiSeries::new(d_max, cap);
    for d in (r..=d_max).step_by(r as usize) {
        for n in 1..=d as usize {
            for mu in partitions_exact(d, n) {
                let weight = Rational::one() / int(aut_order(&mu) as i64);
                let mut g = 0u32;
                while 2 * g as i64 - 2 + n as i64 <= cap {
                    let v = h(g, &mu)?;
                    log_z.add_term(d, 2 * g as i64 - 2 + n as i64, v * &weight);
                    g += 1;
                }
            }
        }
    }
    let mut z = BiSeries::monomial(0, 0, Rational::one(), d_max, cap);
    let mut power = z.clone();
    for k in 1..=kmax {
        power = power.mul(&log_z).scale(&rat(1, k));
        z = z.add(&power);
    }
    let mut out = BiSeries::new(d_max, e_max);
    for (&(d, e), c) in z.terms() {
        out.add_term(d, e, c.clone());
    }
    Ok(PartitionTruncation { r, d_max, e_max, z: out })
}

/// Builds `Z` for `x`-degree `≤ d_max` and ħ-order `≤ e_max`, computing any
/// missing Hurwitz numbers by cut-and-join.
pub fn build_partition(r: u32, d_max: u32, e_max: i64, table: &HurwitzTable) -> Result<PartitionTruncation, QuantumCurveError> {
    assemble(r, d_max, e_max, |g, mu| Ok(table.h(r, g, mu)))
}

/// As [`build_partition`], using only values already in the table.
pub fn build_partition_strict(r: u32, d_max: u32, e_max: i64, table: &HurwitzTable) -> Result<PartitionTruncation, QuantumCurveError> {
    assemble(r, d_max, e_max, |g, mu| {
        let key = HurwitzKey::new(r, g, mu.to_vec());
        match key.s() {
            None => return Ok(Rational::zero()),
            Some(s) if s < 0 => return Ok(Rational::zero()),
            // no simple branch points: the base case, not a table entry
            Some(0) => return Ok(table.caj(&key)),
            _ => {}
        }
        table.get(&key).ok_or_else(|| QuantumCurveError::InsufficientTable { r, g, n: mu.len(), mu: mu.to_vec() })
    })
}

/// `P = −ħD + x^r e^{r(r−1)ħ/2} e^{rħD}` with `D = x d/dx`; `e^{rħD}` acts
/// on `x^d` as multiplication by `e^{rħd}`.
pub fn apply_p(f: &BiSeries, r: u32) -> BiSeries {
    let mut out = BiSeries::new(f.d_max, f.e_max);
    for (&(d, e), c) in f.terms() {
        out.add_term(d, e + 1, -(c * int(d as i64)));
        let alpha = rat(r as i64 * (r as i64 - 1), 2) + int(r as i64 * d as i64);
        let mut w = c.clone();
        let mut j = 0;
        while e + j <= f.e_max {
            out.add_term(d + r, e + j, w.clone());
            j += 1;
            w = w * &alpha / int(j);
        }
    }
    out
}

/// `Q = (ħ/2)D² − (1/r + ħ/2)D − ħ ∂_ħ`.
pub fn apply_q(f: &BiSeries, r: u32) -> BiSeries {
    let mut out = BiSeries::new(f.d_max, f.e_max);
    for (&(d, e), c) in f.terms() {
        let d = d as i64;
        out.add_term(d as u32, e + 1, c * rat(d * d - d, 2));
        out.add_term(d as u32, e, -(c * (rat(d, r as i64) + int(e))));
    }
    out
}

fn first_failure(check: &str, defect: &BiSeries) -> Result<(), QuantumCurveError> {
    match defect.first() {
        None => Ok(()),
        Some(((d, e), c)) => Err(QuantumCurveError::IdentityFailure {
            check: check.into(),
            witness: format!("(d, e) = ({}, {}), defect {}", d, e, crate::exact_algebra::format_rational(&c)),
        }),
    }
}

/// `P Z = 0` coefficient-wise on the window of `z`.
pub fn verify_operator_p(z: &PartitionTruncation) -> Result<CheckReport, QuantumCurveError> {
    first_failure("operator-P", &apply_p(&z.z, z.r))?;
    Ok(CheckReport::pass("operator-P", z.r, z.window()))
}

/// `Q Z = 0` coefficient-wise on the window of `z`.
pub fn verify_operator_q(z: &PartitionTruncation) -> Result<CheckReport, QuantumCurveError> {
    first_failure("operator-Q", &apply_q(&z.z, z.r))?;
    Ok(CheckReport::pass("operator-Q", z.r, z.window()))
}

/// `(PQ − QP − P)(x^d ħ^j)`, or `PQ − QP` when `subtract_p` is false.
pub fn commutator_defect(r: u32, d: u32, j: i64, d_max: u32, e_max: i64, subtract_p: bool) -> BiSeries {
    let f = BiSeries::monomial(d, j, Rational::one(), d_max, e_max);
    let pq = apply_p(&apply_q(&f, r), r);
    let qp = apply_q(&apply_p(&f, r), r);
    let out = pq.sub(&qp);
    if subtract_p {
        out.sub(&apply_p(&f, r))
    } else {
        out
    }
}

/// `[P, Q] = P` on every monomial `x^d ħ^j`, `d ≤ d_max`, `−1 ≤ j ≤ e_max`.
pub fn verify_commutator(r: u32, d_max: u32, e_max: i64) -> Result<CheckReport, QuantumCurveError> {
    for d in 0..=d_max {
        for j in -1..=e_max {
            first_failure("commutator", &commutator_defect(r, d, j, d_max, e_max, true))
                .map_err(|e| match e {
                    QuantumCurveError::IdentityFailure { check, witness } => {
                        QuantumCurveError::IdentityFailure { check, witness: format!("on x^{} ħ^{}: {}", d, j, witness) }
                    }
                    other => other,
                })?;
        }
    }
    Ok(CheckReport::pass("commutator", r, Window { d_max: Some(d_max), e_min: -1, e_max }))
}
