use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::xi::{xi_expr, xi_prime, xi_x_coeff};
use crate::combinat::distinct_permutations;
use crate::exact_algebra::{format_rational, int, parse_rational, AlgebraError, Rational, RationalExpr, SparsePoly};

/// Sorted multiset of `(k_i, ℓ_i)` pairs.
pub type BasisKey = Vec<(u32, u32)>;

/// `F_{g,n} = Σ C[key] Σ_{orderings} ∏ ξ_{ℓ_i}^{r,k_i}(z_i)`.
#[derive(Clone, Debug, PartialEq)]
pub struct XiBasisFreeEnergy {
    pub r: u32,
    pub g: u32,
    pub n: usize,
    coeffs: BTreeMap<BasisKey, Rational>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct XiTerm {
    pub k: Vec<u32>,
    pub l: Vec<u32>,
    pub c: String,
}

#[derive(Serialize, Deserialize)]
struct Exported {
    r: u32,
    g: u32,
    n: usize,
    basis: Vec<XiTerm>,
}

impl XiBasisFreeEnergy {
    pub fn new(r: u32, g: u32, n: usize) -> Self {
        Self { r, g, n, coeffs: BTreeMap::new() }
    }

    pub fn level_bound(&self) -> u32 {
        (3 * self.g as i64 - 3 + self.n as i64).max(0) as u32
    }

    /// Sets a coefficient; the key is sorted and its invariants asserted.
    pub fn set(&mut self, mut key: BasisKey, c: Rational) {
        key.sort();
        assert_eq!(key.len(), self.n);
        assert!(key.iter().all(|&(k, _)| k < self.r.max(1)));
        assert_eq!(key.iter().map(|&(k, _)| k).sum::<u32>() % self.r, 0);
        assert!(key.iter().map(|&(_, l)| l).sum::<u32>() <= self.level_bound());
        if c.is_zero() {
            self.coeffs.remove(&key);
        } else {
            self.coeffs.insert(key, c);
        }
    }

    pub fn coeff(&self, key: &[(u32, u32)]) -> Rational {
        let mut k = key.to_vec();
        k.sort();
        self.coeffs.get(&k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn coeffs(&self) -> &BTreeMap<BasisKey, Rational> {
        &self.coeffs
    }

    /// Coefficient of `∏ x_i^{μ_i}` in the x-expansion.
    pub fn x_coefficient(&self, mu: &[u32]) -> Rational {
        assert_eq!(mu.len(), self.n);
        let r = self.r;
        let mut total = Rational::zero();
        for (key, c) in &self.coeffs {
            for ord in distinct_permutations(key) {
                let mut p = c.clone();
                for (i, &(k, l)) in ord.iter().enumerate() {
                    if mu[i] % r != k {
                        p = Rational::zero();
                        break;
                    }
                    p *= xi_x_coeff(r, k, l as i32, mu[i] / r);
                    if p.is_zero() {
                        break;
                    }
                }
                total += p;
            }
        }
        total
    }

    /// Evaluates with argument position `i` placed at variable `vars[i]`
    /// of an `nvars`-variate expression, differentiated in that slot when
    /// `deriv[i]`.
    pub fn eval_at(&self, nvars: usize, vars: &[usize], deriv: &[bool]) -> RationalExpr {
        assert_eq!(vars.len(), self.n);
        assert_eq!(deriv.len(), self.n);
        let r = self.r;
        // Each ξ factor is N/A^e with A = r z^r − 1. Every factor at position
        // p is lifted to the exponent E_p, the largest one it can need, so
        // terms share the denominator ∏_v A_v^{Σ_{vars[p]=v} E_p}.
        let uni = |k: u32, l: u32, d: bool| if d { xi_prime(r, k, l as i32) } else { xi_expr(r, k, l as i32) };
        let atom_exp = |e: &RationalExpr| e.atoms().values().next().copied().unwrap_or(0);
        let pairs: BTreeSet<(u32, u32)> = self.coeffs.keys().flatten().copied().collect();
        let e_pos: Vec<u32> = deriv
            .iter()
            .map(|&d| pairs.iter().map(|&(k, l)| atom_exp(&uni(k, l, d))).max().unwrap_or(0))
            .collect();
        let atom = SparsePoly::monomial(1, vec![r], int(r as i64)).sub(&SparsePoly::one(1));
        let mut lifted: HashMap<(u32, u32, usize), SparsePoly> = HashMap::new();
        let mut factor = |k: u32, l: u32, p: usize| -> SparsePoly {
            lifted
                .entry((k, l, p))
                .or_insert_with(|| {
                    let f = uni(k, l, deriv[p]);
                    let e = atom_exp(&f);
                    f.numerator().mul(&atom.pow(e_pos[p] - e)).remap(nvars, &[vars[p]])
                })
                .clone()
        };
        let mut num = SparsePoly::zero(nvars);
        for (key, c) in &self.coeffs {
            let mut group = SparsePoly::zero(nvars);
            for ord in distinct_permutations(key) {
                let mut t = SparsePoly::one(nvars);
                for (p, &(k, l)) in ord.iter().enumerate() {
                    t = t.mul(&factor(k, l, p));
                }
                group = group.add(&t);
            }
            num = num.add(&group.scale(c));
        }
        let mut atoms = BTreeMap::new();
        for (p, &v) in vars.iter().enumerate() {
            *atoms.entry(atom.remap(nvars, &[v])).or_insert(0) += e_pos[p];
        }
        RationalExpr::from_factored(num, atoms)
    }

    pub fn evaluate(&self) -> RationalExpr {
        let vars: Vec<usize> = (0..self.n).collect();
        self.eval_at(self.n, &vars, &vec![false; self.n])
    }

    /// `∂_{z_1}⋯∂_{z_n} F`.
    pub fn mixed_derivative(&self) -> RationalExpr {
        let vars: Vec<usize> = (0..self.n).collect();
        self.eval_at(self.n, &vars, &vec![true; self.n])
    }

    pub fn to_json(&self) -> serde_json::Value {
        let basis = self
            .coeffs
            .iter()
            .map(|(key, c)| XiTerm {
                k: key.iter().map(|p| p.0).collect(),
                l: key.iter().map(|p| p.1).collect(),
                c: format_rational(c),
            })
            .collect();
        serde_json::to_value(Exported { r: self.r, g: self.g, n: self.n, basis }).expect("serializable")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self, AlgebraError> {
        let e: Exported = serde_json::from_value(v.clone()).map_err(|e| AlgebraError::Parse(e.to_string()))?;
        let mut f = Self::new(e.r, e.g, e.n);
        for t in e.basis {
            if t.k.len() != e.n || t.l.len() != e.n {
                return Err(AlgebraError::Parse("term length differs from n".into()));
            }
            f.set(t.k.into_iter().zip(t.l).collect(), parse_rational(&t.c)?);
        }
        Ok(f)
    }
}
