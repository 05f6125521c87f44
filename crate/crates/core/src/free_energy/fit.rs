use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::basis::{BasisKey, XiBasisFreeEnergy};
use super::FreeEnergyError;
use crate::exact_algebra::{factorial, format_rational, gauss_solve, int, pow_i, Rational};
use crate::hurwitz_numbers::HurwitzTable;

/// Nondecreasing vectors in `[0, r)^n` with sum divisible by `r`.
pub(crate) fn residue_classes(r: u32, n: usize) -> Vec<Vec<u32>> {
    fn rec(r: u32, n: usize, lo: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == n {
            if cur.iter().sum::<u32>() % r == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for k in lo..r {
            cur.push(k);
            rec(r, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(r, n, 0, &mut Vec::new(), &mut out);
    out
}

/// All `v ∈ N^n` with `Σ v ≤ total`.
pub(crate) fn simplex(n: usize, total: u32) -> Vec<Vec<u32>> {
    fn rec(n: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for v in 0..=left {
            cur.push(v);
            rec(n, left - v, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, total, &mut Vec::new(), &mut out);
    out
}

/// `∏ μ_i^{m_i}/m_i!`, the part of the x-coefficient independent of ℓ.
fn prefactor(mu: &[u32], m: &[u32]) -> Rational {
    mu.iter().zip(m).fold(Rational::one(), |acc, (&u, &k)| {
        acc * pow_i(&int(u as i64), k as i64) / Rational::from_integer(factorial(k as u64))
    })
}

fn monomial(mu: &[u32], ells: &[u32]) -> Rational {
    mu.iter().zip(ells).fold(Rational::one(), |acc, (&u, &l)| acc * pow_i(&int(u as i64), l as i64))
}

/// Fits `F_{g,n}` in the ξ-basis against Hurwitz numbers.
///
/// Per residue class the unknowns are ordered `ℓ⃗` with `|ℓ| ≤ L = 3g−3+n`
/// and the sample points are `m⃗ ≥ 1` with `Σ(m_i − 1) ≤ L`: after dividing
/// by `∏ μ^m/m!` this is interpolation of a degree-`L` polynomial in `μ⃗` on
/// a principal simplex lattice, which is unisolvent.
pub fn fit_free_energy(r: u32, g: u32, n: usize, table: &HurwitzTable) -> Result<XiBasisFreeEnergy, FreeEnergyError> {
    if 2 * g as i64 - 2 + n as i64 <= 0 {
        return Err(FreeEnergyError::Unstable { g, n });
    }
    let bound = 3 * g + n as u32 - 3;
    let ells = simplex(n, bound);
    let points: Vec<Vec<u32>> = simplex(n, bound).into_iter().map(|v| v.iter().map(|x| x + 1).collect()).collect();
    let mut held_out: Vec<Vec<u32>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { bound + 2 } else { 1 }).collect())
        .collect();
    held_out.push((0..n).map(|j| if j + 1 == n { bound + 2 } else { 2 }).collect());

    let mut out = XiBasisFreeEnergy::new(r, g, n);
    let mut seen: BTreeMap<BasisKey, Rational> = BTreeMap::new();
    for class in residue_classes(r, n) {
        let mus = |m: &[u32]| -> Vec<u32> { m.iter().zip(&class).map(|(&m, &k)| r * m + k).collect() };
        let mut rows = Vec::with_capacity(points.len());
        let mut rhs = Vec::with_capacity(points.len());
        for m in &points {
            let mu = mus(m);
            rows.push(ells.iter().map(|l| monomial(&mu, l)).collect::<Vec<_>>());
            rhs.push(table.h(r, g, &mu) / prefactor(&mu, m));
        }
        let sol = gauss_solve(rows, rhs).ok_or_else(|| FreeEnergyError::SingularFit(class.clone()))?;

        for m in &held_out {
            let mu = mus(m);
            let fitted: Rational = ells.iter().zip(&sol).map(|(l, c)| c * monomial(&mu, l)).sum();
            let predicted = fitted * prefactor(&mu, m);
            let actual = table.h(r, g, &mu);
            if predicted != actual {
                return Err(FreeEnergyError::FitResidualNonzero {
                    class: class.clone(),
                    point: m.clone(),
                    predicted: format_rational(&predicted),
                    actual: format_rational(&actual),
                });
            }
        }

        // Each ordered (k⃗, ℓ⃗) must agree with every other ordering of its multiset.
        for (l, c) in ells.iter().zip(sol) {
            let mut key: BasisKey = class.iter().copied().zip(l.iter().copied()).collect();
            key.sort();
            match seen.get(&key) {
                Some(prev) if *prev != c => {
                    return Err(FreeEnergyError::Asymmetric(format!("{:?}", key)));
                }
                Some(_) => {}
                None => {
                    seen.insert(key, c);
                }
            }
        }
    }
    for (key, c) in seen {
        if !c.is_zero() {
            out.set(key, c);
        }
    }
    Ok(out)
}
