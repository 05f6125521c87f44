use num_bigint::BigInt;
use num_traits::Zero;

use super::{HurwitzError, HurwitzKey};
use crate::combinat::aut_order;
use crate::exact_algebra::{factorial, Rational};

type Perm = Vec<usize>;

/// `(p ∘ q)(i) = p(q(i))`.
fn compose(p: &[usize], q: &[usize]) -> Perm {
    q.iter().map(|&i| p[i]).collect()
}

fn inverse(p: &[usize]) -> Perm {
    let mut out = vec![0; p.len()];
    for (i, &j) in p.iter().enumerate() {
        out[j] = i;
    }
    out
}

fn cycle_type(p: &[usize]) -> Vec<usize> {
    let mut seen = vec![false; p.len()];
    let mut out = Vec::new();
    for i in 0..p.len() {
        if !seen[i] {
            let mut len = 0;
            let mut j = i;
            while !seen[j] {
                seen[j] = true;
                j = p[j];
                len += 1;
            }
            out.push(len);
        }
    }
    out.sort_unstable();
    out
}

fn all_perms(d: usize) -> Vec<Perm> {
    fn go(cur: &mut Perm, used: &mut Vec<bool>, out: &mut Vec<Perm>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                go(cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; d], &mut out);
    out
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, i: usize) -> usize {
        if self.0[i] != i {
            let root = self.find(self.0[i]);
            self.0[i] = root;
        }
        self.0[i]
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        self.0[ra] = rb;
    }
}

fn transitive(d: usize, gens: &[&[usize]]) -> bool {
    let mut uf = UnionFind((0..d).collect());
    for g in gens {
        for (i, &j) in g.iter().enumerate() {
            uf.union(i, j);
        }
    }
    let root = uf.find(0);
    (0..d).all(|i| uf.find(i) == root)
}

/// `H_{g,n}^{(r)}(μ)` by counting monodromy tuples
/// `σ₀ τ₁ ⋯ τ_s σ_∞ = 1` with `σ₀` of type `(r^m)`, `τ_i` transpositions,
/// `σ_∞` of type `μ`, generating a transitive group, weighted by
/// `|Aut μ| / (s! d!)`. `σ_∞` is fixed to one representative and the count is
/// scaled by its class size.
pub fn hurwitz_oracle(key: &HurwitzKey, budget: u128) -> Result<Rational, HurwitzError> {
    oracle_in_order(key, &key.mu, budget)
}

/// Same count with `σ_∞`'s cycles laid out in the given (unsorted) order.
pub fn hurwitz_oracle_unsorted(r: u32, g: u32, mu: &[u32], budget: u128) -> Result<Rational, HurwitzError> {
    oracle_in_order(&HurwitzKey::new(r, g, mu.to_vec()), mu, budget)
}

fn oracle_in_order(key: &HurwitzKey, order: &[u32], budget: u128) -> Result<Rational, HurwitzError> {
    let s = match key.s() {
        Some(s) if !key.mu.is_empty() && s >= 0 => s as usize,
        _ => return Ok(Rational::zero()),
    };
    let d = key.degree() as usize;
    let r = key.r as usize;
    let transpositions: Vec<Perm> = (0..d)
        .flat_map(|i| (i + 1..d).map(move |j| (i, j)))
        .map(|(i, j)| {
            let mut p: Perm = (0..d).collect();
            p.swap(i, j);
            p
        })
        .collect();
    let class0 = factorial(d as u64) / (factorial((d / r) as u64) * BigInt::from(r).pow((d / r) as u32));
    let class0: u128 = class0.try_into().unwrap_or(u128::MAX);
    let space = class0.saturating_mul((transpositions.len() as u128).saturating_pow(s.saturating_sub(1) as u32));
    if space > budget || d > 9 {
        return Err(HurwitzError::BudgetExceeded { space, budget });
    }
    let perms = all_perms(d);

    // Canonical σ_∞: consecutive cycles of lengths μ.
    let mut sinf: Perm = (0..d).collect();
    let mut at = 0;
    for &m in order {
        let m = m as usize;
        for t in 0..m {
            sinf[at + t] = at + (t + 1) % m;
        }
        at += m;
    }
    let sinf_inv = inverse(&sinf);
    let want_type = vec![r; d / r];

    let mut count: u64 = 0;
    for s0 in perms.iter().filter(|p| cycle_type(p) == want_type) {
        // τ₁⋯τ_s must equal σ₀⁻¹ σ_∞⁻¹.
        let target = compose(&inverse(s0), &sinf_inv);
        let mut taus: Vec<usize> = Vec::with_capacity(s);
        count += dfs(&transpositions, s, &target, &(0..d).collect::<Perm>(), &mut taus, s0, &sinf);
    }

    let class_size = Rational::new(factorial(d as u64), BigInt::from(centralizer(&key.mu)));
    let aut = BigInt::from(aut_order(&key.mu));
    Ok(Rational::from_integer(BigInt::from(count)) * class_size * Rational::new(aut, factorial(s as u64) * factorial(d as u64)))
}

fn dfs(ts: &[Perm], s: usize, target: &Perm, prod: &Perm, chosen: &mut Vec<usize>, s0: &Perm, sinf: &Perm) -> u64 {
    let d = target.len();
    if chosen.len() + 1 == s || s == 0 {
        // The last transposition (if any) is forced.
        let last = if s == 0 {
            if prod != target {
                return 0;
            }
            None
        } else {
            let need = compose(&inverse(prod), target);
            match ts.iter().position(|t| *t == need) {
                Some(k) => Some(k),
                None => return 0,
            }
        };
        let mut gens: Vec<&[usize]> = vec![s0, sinf];
        for &k in chosen.iter().chain(last.iter()) {
            gens.push(&ts[k]);
        }
        return transitive(d, &gens) as u64;
    }
    let mut total = 0;
    for k in 0..ts.len() {
        chosen.push(k);
        total += dfs(ts, s, target, &compose(prod, &ts[k]), chosen, s0, sinf);
        chosen.pop();
    }
    total
}

/// `z_μ = ∏_q q^{m_q} m_q!`.
fn centralizer(mu: &[u32]) -> u64 {
    let mut z = aut_order(mu);
    for &m in mu {
        z *= m as u64;
    }
    z
}
