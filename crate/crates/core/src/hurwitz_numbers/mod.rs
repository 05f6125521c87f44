//! Orbifold Hurwitz numbers `H_{g,n}^{(r)}(μ)`: the cut-and-join recursion
//! with a write-once memo table, a monodromy-counting oracle and a text cache.

mod cache;
mod closed_form;
mod oracle;

use std::collections::HashMap;
use std::fmt;
use std::sync::RwLock;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::combinat::partitions_exact;
use crate::exact_algebra::{format_rational, int, Rational};

pub use cache::{cache_load, cache_store, parse_cache, render_cache};
pub use closed_form::{h01_closed, h02_closed};
pub use oracle::{hurwitz_oracle, hurwitz_oracle_unsorted};

#[derive(Debug, Error)]
pub enum HurwitzError {
    #[error("enumeration space {space} exceeds budget {budget}")]
    BudgetExceeded { space: u128, budget: u128 },
    #[error("corrupt cache at line {line}: {reason}")]
    CorruptCache { line: usize, reason: String },
    #[error("table entry {key} rewritten with a different value")]
    Inconsistent { key: HurwitzKey },
    #[error("{key}: cut-and-join gives {caj}, monodromy count gives {oracle}")]
    OracleMismatch { key: HurwitzKey, caj: String, oracle: String },
    #[error("table lacks {key}")]
    Missing { key: HurwitzKey },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HurwitzKey {
    pub r: u32,
    pub g: u32,
    /// Sorted ascending.
    pub mu: Vec<u32>,
}

impl HurwitzKey {
    pub fn new(r: u32, g: u32, mut mu: Vec<u32>) -> Self {
        assert!(r >= 1, "r must be positive");
        mu.sort_unstable();
        HurwitzKey { r, g, mu }
    }

    pub fn n(&self) -> usize {
        self.mu.len()
    }

    pub fn degree(&self) -> u32 {
        self.mu.iter().sum()
    }

    /// Number of simple branch points `2g − 2 + n + d/r`; `None` when
    /// `r ∤ d` (no cover exists).
    pub fn s(&self) -> Option<i64> {
        let d = self.degree();
        (d % self.r == 0).then(|| 2 * self.g as i64 - 2 + self.n() as i64 + (d / self.r) as i64)
    }
}

impl fmt::Display for HurwitzKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mu: Vec<String> = self.mu.iter().map(|m| m.to_string()).collect();
        write!(f, "H^({})_{{g={}}}({})", self.r, self.g, mu.join(","))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    Recursion,
    Oracle,
    ClosedForm,
    Cache,
}

/// Memo table shared between threads. Entries are write-once: inserting a
/// different value for an existing key is an error.
#[derive(Debug, Default)]
pub struct HurwitzTable {
    entries: RwLock<HashMap<HurwitzKey, (Rational, Provenance)>>,
}

impl HurwitzTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, key: &HurwitzKey) -> Option<Rational> {
        self.entries.read().unwrap().get(key).map(|(v, _)| v.clone())
    }

    pub fn provenance(&self, key: &HurwitzKey) -> Option<Provenance> {
        self.entries.read().unwrap().get(key).map(|(_, p)| *p)
    }

    pub fn insert(&self, key: HurwitzKey, value: Rational, prov: Provenance) -> Result<(), HurwitzError> {
        let mut w = self.entries.write().unwrap();
        match w.get(&key) {
            Some((old, _)) if *old != value => Err(HurwitzError::Inconsistent { key }),
            Some(_) => Ok(()),
            None => {
                w.insert(key, (value, prov));
                Ok(())
            }
        }
    }

    pub fn len(&self) -> usize {
        self.entries.read().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Snapshot sorted by key.
    pub fn entries(&self) -> Vec<(HurwitzKey, Rational)> {
        let mut v: Vec<(HurwitzKey, Rational)> =
            self.entries.read().unwrap().iter().map(|(k, (q, _))| (k.clone(), q.clone())).collect();
        v.sort_by(|a, b| a.0.cmp(&b.0));
        v
    }

    /// Cut-and-join value of `key`, memoized in this table.
    pub fn caj(&self, key: &HurwitzKey) -> Rational {
        hurwitz_caj(key, self)
    }

    pub fn h(&self, r: u32, g: u32, mu: &[u32]) -> Rational {
        self.caj(&HurwitzKey::new(r, g, mu.to_vec()))
    }
}

/// `H_{g,n}^{(r)}(μ)` from the cut-and-join equation solved for its
/// left-hand side. Zero when `r ∤ |μ|`, `s < 0` or `μ` is empty; the only
/// `s = 0` value is `H_{0,1}(r) = 1/r`.
pub fn hurwitz_caj(key: &HurwitzKey, table: &HurwitzTable) -> Rational {
    let s = match key.s() {
        Some(s) if !key.mu.is_empty() && s >= 0 => s,
        _ => return Rational::zero(),
    };
    if s == 0 {
        debug_assert!(key.g == 0 && key.mu == [key.r]);
        return Rational::new(1.into(), (key.r as i64).into());
    }
    if let Some(v) = table.get(key) {
        return v;
    }
    let v = caj_rhs(key, s, table) / int(s);
    debug_assert!(v >= Rational::zero(), "negative Hurwitz number at {key}");
    table.insert(key.clone(), v.clone(), Provenance::Recursion).expect("write-once violation in cut-and-join");
    v
}

fn sub_h(r: u32, g: i64, mu: Vec<u32>, s_expect: i64, table: &HurwitzTable) -> Rational {
    if g < 0 {
        return Rational::zero();
    }
    let k = HurwitzKey::new(r, g as u32, mu);
    if let Some(s) = k.s() {
        assert_eq!(s, s_expect, "cut-and-join must lower s by exactly one");
    }
    hurwitz_caj(&k, table)
}

fn caj_rhs(key: &HurwitzKey, s: i64, table: &HurwitzTable) -> Rational {
    let r = key.r;
    let g = key.g as i64;
    let mu = &key.mu;
    let n = mu.len();
    let mut total = Rational::zero();

    // Join: ½ Σ_{i≠j} (μ_i+μ_j) H_{g,n−1}(μ_i+μ_j, rest).
    for i in 0..n {
        for j in i + 1..n {
            let mut nm: Vec<u32> = mu.iter().enumerate().filter(|&(t, _)| t != i && t != j).map(|(_, &m)| m).collect();
            nm.push(mu[i] + mu[j]);
            let h = sub_h(r, g, nm, s - 1, table);
            if !h.is_zero() {
                total += h * int((mu[i] + mu[j]) as i64);
            }
        }
    }

    // Cut: ½ Σ_i Σ_{α+β=μ_i} αβ [H_{g−1,n+1}(α,β,rest) + Σ H_{g₁}(α,μ_I) H_{g₂}(β,μ_J)].
    let half = Rational::new(1.into(), 2.into());
    for i in 0..n {
        let rest: Vec<u32> = mu.iter().enumerate().filter(|&(t, _)| t != i).map(|(_, &m)| m).collect();
        let m = rest.len();
        for alpha in 1..mu[i] {
            let beta = mu[i] - alpha;
            let ab = int((alpha * beta) as i64) * &half;
            let mut inner = Rational::zero();
            let mut nm = rest.clone();
            nm.push(alpha);
            nm.push(beta);
            inner += sub_h(r, g - 1, nm, s - 1, table);
            for mask in 0u32..(1 << m) {
                let mut mi = vec![alpha];
                let mut mj = vec![beta];
                for (t, &p) in rest.iter().enumerate() {
                    if mask >> t & 1 == 1 {
                        mi.push(p);
                    } else {
                        mj.push(p);
                    }
                }
                if mi.iter().sum::<u32>() % r != 0 {
                    continue;
                }
                for g1 in 0..=g {
                    let a = HurwitzKey::new(r, g1 as u32, mi.clone());
                    let b = HurwitzKey::new(r, (g - g1) as u32, mj.clone());
                    if let (Some(sa), Some(sb)) = (a.s(), b.s()) {
                        if sa < 0 || sb < 0 {
                            continue;
                        }
                        assert_eq!(sa + sb, s - 1, "split terms must share s − 1");
                    }
                    let ha = hurwitz_caj(&a, table);
                    if ha.is_zero() {
                        continue;
                    }
                    let hb = hurwitz_caj(&b, table);
                    inner += ha * hb;
                }
            }
            if !inner.is_zero() {
                total += ab * inner;
            }
        }
    }
    total
}

/// All `H_{g,n}^{(r)}(μ)` with `ℓ(μ) = n` and `|μ| ≤ d_max`, by degree then
/// lexicographically; zero values included.
pub fn hurwitz_table(r: u32, g: u32, n: usize, d_max: u32, table: &HurwitzTable) -> Vec<(Vec<u32>, Rational)> {
    let mut out = Vec::new();
    for d in 1..=d_max {
        for mu in partitions_exact(d, n) {
            let v = table.caj(&HurwitzKey::new(r, g, mu.clone()));
            debug_assert!(d % r == 0 || v.is_zero());
            out.push((mu, v));
        }
    }
    out
}

/// Compares the cut-and-join value with the monodromy count for every
/// `H_g^{(r)}(μ)` with `|μ| ≤ d_max`, `r | |μ|` and `0 ≤ s ≤ s_max`;
/// returns the number of keys compared.
pub fn compare_caj_oracle(r: u32, d_max: u32, s_max: i64, table: &HurwitzTable, budget: u128) -> Result<usize, HurwitzError> {
    let mut count = 0;
    for d in (r..=d_max).step_by(r as usize) {
        for mu in crate::combinat::partitions(d) {
            for g in 0.. {
                let key = HurwitzKey::new(r, g, mu.clone());
                let s = key.s().expect("r divides the degree");
                if s > s_max {
                    break;
                }
                if s < 0 {
                    continue;
                }
                let caj = table.caj(&key);
                let oracle = hurwitz_oracle(&key, budget)?;
                if caj != oracle {
                    return Err(HurwitzError::OracleMismatch { key, caj: format_rational(&caj), oracle: format_rational(&oracle) });
                }
                count += 1;
            }
        }
    }
    Ok(count)
}

/// `1/r`, the only value with no simple branch points.
pub fn base_value(r: u32) -> Rational {
    Rational::new(One::one(), (r as i64).into())
}

#[cfg(test)]
mod tests;
