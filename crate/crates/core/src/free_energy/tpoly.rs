use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::FreeEnergyError;
use crate::exact_algebra::{gcd_numerators, int, lcm_denominators, pow_i, Rational, RationalExpr, SparsePoly};

/// Laurent polynomial in `t = 1/(1 − r z^r)`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct TPoly {
    coeffs: BTreeMap<i64, Rational>,
}

impl TPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_coeffs(coeffs: impl IntoIterator<Item = (i64, Rational)>) -> Self {
        let mut p = Self::zero();
        for (k, c) in coeffs {
            p.add_term(k, c);
        }
        p
    }

    /// Dense coefficients from `t^0` upward.
    pub fn dense(cs: &[Rational]) -> Self {
        Self::from_coeffs(cs.iter().enumerate().map(|(i, c)| (i as i64, c.clone())))
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_coeffs([(0, c)])
    }

    pub fn t() -> Self {
        Self::from_coeffs([(1, Rational::one())])
    }

    fn add_term(&mut self, k: i64, c: Rational) {
        if c.is_zero() {
            return;
        }
        let e = self.coeffs.entry(k).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.coeffs.remove(&k);
        }
    }

    pub fn coeff(&self, k: i64) -> Rational {
        self.coeffs.get(&k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&i64, &Rational)> {
        self.coeffs.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_polynomial(&self) -> bool {
        self.coeffs.keys().all(|&k| k >= 0)
    }

    pub fn degree(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (&k, c) in &o.coeffs {
            out.add_term(k, c.clone());
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&int(-1)))
    }

    pub fn scale(&self, q: &Rational) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|(&k, c)| (k, c * q)))
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = Self::zero();
        for (&a, ca) in &self.coeffs {
            for (&b, cb) in &o.coeffs {
                out.add_term(a + b, ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::constant(Rational::one()), |acc, _| acc.mul(self))
    }

    pub fn d_dt(&self) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|(&k, c)| (k - 1, c * int(k))))
    }

    /// `x d/dx = r t²(t − 1) d/dt`.
    pub fn x_d_dx(&self, r: u32) -> Self {
        let m = Self::from_coeffs([(3, int(r as i64)), (2, int(-(r as i64)))]);
        self.d_dt().mul(&m)
    }

    /// Rational content and primitive part with positive leading coefficient.
    pub fn content(&self) -> Rational {
        if self.is_zero() {
            return Rational::one();
        }
        let l = lcm_denominators(self.coeffs.values());
        let scaled: Vec<Rational> = self.coeffs.values().map(|c| c * Rational::from_integer(l.clone())).collect();
        let mut g = gcd_numerators(scaled.iter());
        if self.coeffs.values().next_back().unwrap().is_negative() {
            g = -g;
        }
        Rational::new(g, l)
    }
}

impl fmt::Display for TPoly {
    /// `(c)(primitive)` with integer primitive part, e.g. `(1/24)(4t^3-4t^2-t+1)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let c = self.content();
        let prim = self.scale(&c.recip());
        let mut body = String::new();
        for (i, (&k, q)) in prim.coeffs.iter().rev().enumerate() {
            let n: BigInt = q.to_integer();
            let mag = n.abs();
            if i == 0 {
                if n.is_negative() {
                    body.push('-');
                }
            } else {
                body.push(if n.is_negative() { '-' } else { '+' });
            }
            let unit = mag.is_one() && k != 0;
            if !unit {
                body.push_str(&mag.to_string());
            }
            match k {
                0 => {}
                1 => body.push('t'),
                _ => body.push_str(&format!("t^{}", k)),
            }
        }
        if c.is_one() {
            write!(f, "{}", body)
        } else if c.denom().is_one() {
            write!(f, "({})({})", c.numer(), body)
        } else {
            write!(f, "({}/{})({})", c.numer(), c.denom(), body)
        }
    }
}

/// Rewrites a function of `z^r` whose denominator is a power of
/// `1 − r z^r` as a Laurent polynomial in `t`, using `z^r = (t−1)/(rt)`.
pub fn to_t_laurent(f: &RationalExpr, r: u32) -> Result<TPoly, FreeEnergyError> {
    let f = f.normalize();
    assert_eq!(f.nvars(), 1, "univariate input expected");
    let crit = SparsePoly::monomial(1, vec![r], int(r as i64)).sub(&SparsePoly::one(1));
    let mut e = 0i64;
    for (a, &k) in f.atoms() {
        if *a != crit {
            return Err(FreeEnergyError::NotAFunctionOfZr(format!("denominator factor {}", a)));
        }
        e = k as i64;
    }
    // f = N(y) / (r y − 1)^e with r y − 1 = −1/t.
    let sign = if e % 2 == 0 { int(1) } else { int(-1) };
    let tm1 = TPoly::from_coeffs([(1, int(1)), (0, int(-1))]);
    let mut out = TPoly::zero();
    for (exps, c) in f.numerator().terms() {
        let p = exps[0];
        if p % r != 0 {
            return Err(FreeEnergyError::NotAFunctionOfZr(format!("monomial z^{}", p)));
        }
        let j = (p / r) as i64;
        let term = tm1.pow(j as u32).mul(&TPoly::from_coeffs([(e - j, c * pow_i(&int(r as i64), -j) * &sign)]));
        out = out.add(&term);
    }
    Ok(out)
}

/// As [`to_t_laurent`], asserting the result is a polynomial.
pub fn to_t_polynomial(f: &RationalExpr, r: u32) -> Result<TPoly, FreeEnergyError> {
    let p = to_t_laurent(f, r)?;
    if !p.is_polynomial() {
        return Err(FreeEnergyError::NotPolynomialInT(p.to_string()));
    }
    Ok(p)
}
