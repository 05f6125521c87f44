use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::rational::{format_rational, gcd_numerators, lcm_denominators, Rational};
use super::ring::Ring;
use super::AlgebraError;

/// Sparse multivariate polynomial with rational coefficients.
///
/// Terms are keyed by exponent vectors of fixed length `nvars`; the map never
/// stores a zero coefficient. Map order is lexicographic in the exponent
/// vector, so the last entry is the lex-leading term.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct SparsePoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl SparsePoly {
    pub fn zero(nvars: usize) -> Self {
        SparsePoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(nvars, e, Rational::one())
    }

    pub fn monomial(nvars: usize, exps: Vec<u32>, c: Rational) -> Self {
        assert_eq!(exps.len(), nvars, "exponent vector arity");
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(exps, c);
        }
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Vec<u32>, Rational)>) -> Self {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    /// Univariate polynomial from dense coefficients (index = power).
    pub fn univariate(coeffs: &[Rational]) -> Self {
        Self::from_terms(1, coeffs.iter().enumerate().map(|(i, c)| (vec![i as u32], c.clone())))
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Vec<u32>, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exps: &[u32]) -> Rational {
        self.terms.get(exps).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (e, c) = self.terms.iter().next().unwrap();
                e.iter().all(|&x| x == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.as_constant().is_some()
    }

    pub fn leading(&self) -> Option<(&Vec<u32>, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn add_term(&mut self, exps: Vec<u32>, c: Rational) {
        debug_assert_eq!(exps.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    fn check_arity(&self, o: &Self) {
        assert_eq!(self.nvars, o.nvars, "polynomial arity mismatch");
    }

    pub fn add(&self, o: &Self) -> Self {
        self.check_arity(o);
        let (mut big, small) = if self.len() >= o.len() { (self.clone(), o) } else { (o.clone(), self) };
        for (e, c) in &small.terms {
            big.add_term(e.clone(), c.clone());
        }
        big
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        SparsePoly { nvars: self.nvars, terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect() }
    }

    pub fn scale(&self, q: &Rational) -> Self {
        if q.is_zero() {
            return Self::zero(self.nvars);
        }
        SparsePoly { nvars: self.nvars, terms: self.terms.iter().map(|(e, c)| (e.clone(), c * q)).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.check_arity(o);
        let mut out = Self::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }

    pub fn mul_monomial(&self, exps: &[u32], c: &Rational) -> Self {
        let mut out = Self::zero(self.nvars);
        if c.is_zero() {
            return out;
        }
        for (e, k) in &self.terms {
            let ne: Vec<u32> = e.iter().zip(exps).map(|(a, b)| a + b).collect();
            out.terms.insert(ne, k * c);
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one(self.nvars);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn deriv(&self, i: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[i] > 0 {
                let mut ne = e.clone();
                ne[i] -= 1;
                out.terms.insert(ne, c * Rational::from_integer(BigInt::from(e[i])));
            }
        }
        out
    }

    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|e| e[i]).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    /// Exact quotient `self / b`; fails unless `b` divides `self`.
    pub fn divexact(&self, b: &Self) -> Result<Self, AlgebraError> {
        let (q, r) = self.divrem(b)?;
        if !r.is_zero() {
            return Err(AlgebraError::NonExactDivision);
        }
        Ok(q)
    }

    /// Lex leading-term division; the remainder is what is left when the
    /// leading term of the running dividend is no longer divisible.
    /// For exact divisibility the remainder is zero.
    pub fn divrem(&self, b: &Self) -> Result<(Self, Self), AlgebraError> {
        self.check_arity(b);
        let (lb_e, lb_c) = match b.leading() {
            Some((e, c)) => (e.clone(), c.clone()),
            None => return Err(AlgebraError::DivisionByZero),
        };
        let mut a = self.clone();
        let mut q = Self::zero(self.nvars);
        let mut rem = Self::zero(self.nvars);
        while let Some((e, c)) = a.leading().map(|(e, c)| (e.clone(), c.clone())) {
            if e.iter().zip(&lb_e).all(|(x, y)| x >= y) {
                let qe: Vec<u32> = e.iter().zip(&lb_e).map(|(x, y)| x - y).collect();
                let qc = &c / &lb_c;
                a = a.sub(&b.mul_monomial(&qe, &qc));
                q.add_term(qe, qc);
            } else {
                a.terms.remove(&e);
                rem.add_term(e, c);
            }
        }
        Ok((q, rem))
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.nvars);
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e) {
                if k > 0 {
                    t *= num_traits::pow(x.clone(), k as usize);
                }
            }
            acc += t;
        }
        acc
    }

    /// Renames variables: variable `i` of `self` becomes variable `map[i]`
    /// of a polynomial with `nvars` variables. Distinct sources may collide.
    pub fn remap(&self, nvars: usize, map: &[usize]) -> Self {
        assert_eq!(map.len(), self.nvars);
        let mut out = Self::zero(nvars);
        for (e, c) in &self.terms {
            let mut ne = vec![0u32; nvars];
            for (i, &k) in e.iter().enumerate() {
                ne[map[i]] += k;
            }
            out.add_term(ne, c.clone());
        }
        out
    }

    /// Substitutes polynomial `images[i]` (all of equal arity) for variable `i`.
    pub fn compose(&self, images: &[SparsePoly]) -> Self {
        assert_eq!(images.len(), self.nvars);
        let m = images.first().map(|p| p.nvars).unwrap_or(0);
        let mut cache: Vec<Vec<SparsePoly>> = images.iter().map(|p| vec![Self::one(m), p.clone()]).collect();
        let mut out = Self::zero(m);
        for (e, c) in &self.terms {
            let mut t = Self::constant(m, c.clone());
            for (i, &k) in e.iter().enumerate() {
                let k = k as usize;
                while cache[i].len() <= k {
                    let next = cache[i].last().unwrap().mul(&images[i]);
                    cache[i].push(next);
                }
                if k > 0 {
                    t = t.mul(&cache[i][k]);
                }
            }
            out = out.add(&t);
        }
        out
    }

    /// Splits `self = c * p` with `p` having coprime integer coefficients and a
    /// positive lex-leading coefficient. Zero maps to `(0, 0)`.
    pub fn primitive(&self) -> (Rational, SparsePoly) {
        if self.is_zero() {
            return (Rational::zero(), self.clone());
        }
        let l = lcm_denominators(self.terms.values());
        let scaled: Vec<Rational> = self.terms.values().map(|c| c * Rational::from_integer(l.clone())).collect();
        let mut g = gcd_numerators(scaled.iter());
        if self.leading().unwrap().1.is_negative() {
            g = -g;
        }
        let content = Rational::new(g.clone(), l.clone());
        let p = SparsePoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c / &content)).collect(),
        };
        (content, p)
    }
}

impl fmt::Display for SparsePoly {
    /// Lex-descending terms, `c*z0^a*z1^b`; zero prints as `0/1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0/1");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{}", format_rational(c))?;
            for (i, &k) in e.iter().enumerate() {
                match k {
                    0 => {}
                    1 => write!(f, "*z{}", i)?,
                    _ => write!(f, "*z{}^{}", i, k)?,
                }
            }
        }
        Ok(())
    }
}

impl Ring for SparsePoly {
    fn zero_like(&self) -> Self {
        Self::zero(self.nvars)
    }
    fn one_like(&self) -> Self {
        Self::one(self.nvars)
    }
    fn from_rational_like(&self, q: &Rational) -> Self {
        Self::constant(self.nvars, q.clone())
    }
    fn vanishes(&self) -> bool {
        self.terms.is_empty()
    }
    fn plus(&self, o: &Self) -> Self {
        self.add(o)
    }
    fn minus(&self, o: &Self) -> Self {
        self.sub(o)
    }
    fn times(&self, o: &Self) -> Self {
        self.mul(o)
    }
    fn negated(&self) -> Self {
        self.neg()
    }
    fn scaled(&self, q: &Rational) -> Self {
        self.scale(q)
    }
    fn try_inv(&self) -> Option<Self> {
        let c = self.as_constant()?;
        (!c.is_zero()).then(|| Self::constant(self.nvars, c.recip()))
    }
}

/// Fraction-free determinant (Bareiss). Every division is exact.
pub fn bareiss_det(mut m: Vec<Vec<SparsePoly>>) -> Result<SparsePoly, AlgebraError> {
    let n = m.len();
    if n == 0 {
        return Err(AlgebraError::Arity);
    }
    let nv = m[0][0].nvars();
    let mut sign = false;
    let mut prev = SparsePoly::one(nv);
    for k in 0..n.saturating_sub(1) {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    sign = !sign;
                }
                None => return Ok(SparsePoly::zero(nv)),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = m[k][k].mul(&m[i][j]).sub(&m[i][k].mul(&m[k][j]));
                m[i][j] = t.divexact(&prev)?;
            }
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    Ok(if sign { d.neg() } else { d })
}
