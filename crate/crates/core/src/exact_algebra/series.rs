use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::rational::{factorial, format_rational, Rational};
use super::ring::Ring;
use super::AlgebraError;

/// Truncated Laurent series in one variable over a ring `R`.
///
/// Coefficients cover exponents `start .. start + coeffs.len()`. A truncated
/// series knows every coefficient below `order`; an exact one (`order ==
/// None`) is a finite Laurent polynomial. Orders are tracked pessimistically
/// and reading at or beyond the order is an error.
#[derive(Clone, Debug)]
pub struct LaurentSeries<R: Ring> {
    start: i64,
    coeffs: Vec<R>,
    order: Option<i64>,
    zero: R,
}

impl<R: Ring> LaurentSeries<R> {
    pub fn exact(start: i64, coeffs: Vec<R>, zero: R) -> Self {
        let mut s = LaurentSeries { start, coeffs, order: None, zero };
        s.trim();
        s
    }

    /// Known coefficients from `start`, zero-padded up to `order`.
    pub fn truncated(start: i64, mut coeffs: Vec<R>, order: i64, zero: R) -> Self {
        if order <= start {
            return LaurentSeries { start: order, coeffs: vec![], order: Some(order), zero };
        }
        let len = (order - start) as usize;
        coeffs.truncate(len);
        while coeffs.len() < len {
            coeffs.push(zero.clone());
        }
        LaurentSeries { start, coeffs, order: Some(order), zero }
    }

    pub fn zero_exact(zero: R) -> Self {
        LaurentSeries { start: 0, coeffs: vec![], order: None, zero }
    }

    pub fn monomial(k: i64, c: R) -> Self {
        let zero = c.zero_like();
        Self::exact(k, vec![c], zero)
    }

    pub fn constant(c: R) -> Self {
        Self::monomial(0, c)
    }

    /// The series `v`.
    pub fn var(zero: &R) -> Self {
        Self::monomial(1, zero.one_like())
    }

    fn trim(&mut self) {
        if self.order.is_none() {
            while self.coeffs.last().map_or(false, |c| c.vanishes()) {
                self.coeffs.pop();
            }
            let lead = self.coeffs.iter().take_while(|c| c.vanishes()).count();
            if lead > 0 {
                self.coeffs.drain(..lead);
                self.start += lead as i64;
            }
        }
    }

    pub fn zero_elem(&self) -> &R {
        &self.zero
    }

    pub fn order(&self) -> Option<i64> {
        self.order
    }

    pub fn is_exact(&self) -> bool {
        self.order.is_none()
    }

    pub fn start(&self) -> i64 {
        self.start
    }

    fn end(&self) -> i64 {
        self.start + self.coeffs.len() as i64
    }

    /// Coefficient of `v^k`.
    pub fn coeff(&self, k: i64) -> Result<R, AlgebraError> {
        if let Some(n) = self.order {
            if k >= n {
                return Err(AlgebraError::Truncation { requested: k, order: n });
            }
        }
        if k < self.start || k >= self.end() {
            return Ok(self.zero.clone());
        }
        Ok(self.coeffs[(k - self.start) as usize].clone())
    }

    fn c(&self, k: i64) -> Option<&R> {
        if k < self.start || k >= self.end() {
            None
        } else {
            Some(&self.coeffs[(k - self.start) as usize])
        }
    }

    /// Known coefficients as (exponent, value) pairs, zeros included.
    pub fn known(&self) -> impl Iterator<Item = (i64, &R)> {
        self.coeffs.iter().enumerate().map(move |(i, c)| (self.start + i as i64, c))
    }

    /// Lowest exponent with a nonzero known coefficient.
    pub fn valuation(&self) -> Option<i64> {
        self.known().find(|(_, c)| !c.vanishes()).map(|(k, _)| k)
    }

    /// Lower bound for the true valuation: the first nonzero coefficient, or
    /// the order when nothing nonzero is known.
    fn val_bound(&self) -> Option<i64> {
        self.valuation().or(self.order)
    }

    pub fn is_known_zero(&self) -> bool {
        self.order.is_none() && self.valuation().is_none()
    }

    pub fn truncate(&self, n: i64) -> Self {
        let n = match self.order {
            Some(o) => o.min(n),
            None => n,
        };
        let coeffs: Vec<R> = self.known().filter(|(k, _)| *k < n).map(|(_, c)| c.clone()).collect();
        Self::truncated(self.start, coeffs, n, self.zero.clone())
    }

    pub fn add(&self, o: &Self) -> Self {
        let order = match (self.order, o.order) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        let lo = self.start.min(o.start);
        let hi = match order {
            Some(n) => n,
            None => self.end().max(o.end()),
        };
        let mut coeffs = Vec::with_capacity((hi - lo).max(0) as usize);
        for k in lo..hi {
            let v = match (self.c(k), o.c(k)) {
                (Some(a), Some(b)) => a.plus(b),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => self.zero.clone(),
            };
            coeffs.push(v);
        }
        match order {
            Some(n) => Self::truncated(lo, coeffs, n, self.zero.clone()),
            None => Self::exact(lo, coeffs, self.zero.clone()),
        }
    }

    pub fn neg(&self) -> Self {
        self.map(|c| c.negated(), self.zero.clone())
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, q: &Rational) -> Self {
        self.map(|c| c.scaled(q), self.zero.clone())
    }

    pub fn scale_by(&self, r: &R) -> Self {
        self.map(|c| c.times(r), self.zero.clone())
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S, zero: S) -> LaurentSeries<S> {
        let coeffs = self.coeffs.iter().map(f).collect();
        match self.order {
            Some(n) => LaurentSeries::truncated(self.start, coeffs, n, zero),
            None => LaurentSeries::exact(self.start, coeffs, zero),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_known_zero() || o.is_known_zero() {
            return Self::zero_exact(self.zero.clone());
        }
        let (v1, v2) = match (self.val_bound(), o.val_bound()) {
            (Some(a), Some(b)) => (a, b),
            _ => return Self::zero_exact(self.zero.clone()),
        };
        let order = match (self.order, o.order) {
            (Some(n1), Some(n2)) => Some((n1 + v2).min(n2 + v1)),
            (Some(n1), None) => Some(n1 + v2),
            (None, Some(n2)) => Some(n2 + v1),
            (None, None) => None,
        };
        let lo = v1 + v2;
        let hi = match order {
            Some(n) => n,
            None => self.end() + o.end() - 1,
        };
        let mut coeffs = Vec::with_capacity((hi - lo).max(0) as usize);
        for k in lo..hi {
            let mut acc = self.zero.clone();
            let i_lo = v1.max(k - (o.end() - 1));
            let i_hi = (self.end() - 1).min(k - v2);
            for i in i_lo..=i_hi {
                if let (Some(a), Some(b)) = (self.c(i), o.c(k - i)) {
                    if !a.vanishes() && !b.vanishes() {
                        acc = acc.plus(&a.times(b));
                    }
                }
            }
            coeffs.push(acc);
        }
        match order {
            Some(n) => Self::truncated(lo, coeffs, n, self.zero.clone()),
            None => Self::exact(lo, coeffs, self.zero.clone()),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::constant(self.zero.one_like());
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Multiplies by `v^m`.
    pub fn shift(&self, m: i64) -> Self {
        LaurentSeries {
            start: self.start + m,
            coeffs: self.coeffs.clone(),
            order: self.order.map(|n| n + m),
            zero: self.zero.clone(),
        }
    }

    pub fn inverse(&self) -> Result<Self, AlgebraError> {
        let w = self.valuation().ok_or(AlgebraError::NotInvertible)?;
        let lead = self.c(w).unwrap();
        let inv = lead.try_inv().ok_or(AlgebraError::NotInvertible)?;
        let n = match self.order {
            Some(n) => n,
            None => {
                if self.end() == w + 1 {
                    return Ok(Self::monomial(-w, inv));
                }
                return Err(AlgebraError::Valuation("inverse of an exact non-monomial needs a truncation order".into()));
            }
        };
        let p = n - w;
        let mut b: Vec<R> = Vec::with_capacity(p as usize);
        b.push(inv.clone());
        for m in 1..p {
            let mut acc = self.zero.clone();
            for k in 1..=m {
                if let Some(a) = self.c(w + k) {
                    if !a.vanishes() {
                        acc = acc.plus(&a.times(&b[(m - k) as usize]));
                    }
                }
            }
            b.push(acc.times(&inv).negated());
        }
        Ok(Self::truncated(-w, b, -w + p, self.zero.clone()))
    }

    pub fn div(&self, o: &Self) -> Result<Self, AlgebraError> {
        Ok(self.mul(&o.inverse()?))
    }

    pub fn derivative(&self) -> Self {
        let coeffs: Vec<R> =
            self.known().map(|(k, c)| c.scaled(&Rational::from_integer(BigInt::from(k)))).collect();
        let s = LaurentSeries { start: self.start, coeffs, order: self.order, zero: self.zero.clone() };
        let mut out = s.shift(-1);
        out.trim();
        out
    }

    /// `f(-v)`.
    pub fn reflect(&self) -> Self {
        let coeffs = self.known().map(|(k, c)| if k % 2 == 0 { c.clone() } else { c.negated() }).collect();
        match self.order {
            Some(n) => Self::truncated(self.start, coeffs, n, self.zero.clone()),
            None => Self::exact(self.start, coeffs, self.zero.clone()),
        }
    }

    pub fn even_part(&self) -> Self {
        self.add(&self.reflect()).scale(&Rational::new(1.into(), 2.into()))
    }

    pub fn odd_part(&self) -> Self {
        self.sub(&self.reflect()).scale(&Rational::new(1.into(), 2.into()))
    }

    /// `f ∘ g`. Requires `val(g) ≥ 1` unless `f` is an exact polynomial.
    pub fn compose(&self, g: &Self) -> Result<Self, AlgebraError> {
        if self.is_known_zero() {
            return Ok(self.clone());
        }
        let w = g.valuation();
        if self.order.is_some() && !matches!(w, Some(w) if w >= 1) {
            return Err(AlgebraError::Valuation("inner series must have positive valuation".into()));
        }
        let mut acc = Self::zero_exact(self.zero.clone());
        let lo = self.start;
        let hi = self.end();
        let ginv = if lo < 0 { Some(g.inverse()?) } else { None };
        let mut pos = Self::constant(self.zero.one_like());
        let mut neg = Self::constant(self.zero.one_like());
        for k in 0..hi.max(0) {
            if k >= lo {
                let c = self.c(k).unwrap();
                if !c.vanishes() {
                    acc = acc.add(&pos.scale_by(c));
                }
            }
            pos = pos.mul(g);
        }
        if let Some(gi) = ginv {
            for k in 1..=(-lo) {
                neg = neg.mul(&gi);
                if let Some(c) = self.c(-k) {
                    if !c.vanishes() {
                        acc = acc.add(&neg.scale_by(c));
                    }
                }
            }
        }
        if let Some(nf) = self.order {
            let w = w.unwrap();
            let cap = Self::truncated(0, vec![], w * nf, self.zero.clone());
            acc = acc.add(&cap);
        }
        Ok(acc)
    }

    /// Compositional inverse of a series `f = f₁v + …` with `f₁` invertible,
    /// via Lagrange inversion `g_n = [v^{n-1}] (v/f)^n / n`.
    pub fn reverse(&self, order: i64) -> Result<Self, AlgebraError> {
        if self.valuation() != Some(1) {
            return Err(AlgebraError::Valuation("reversion needs valuation exactly 1".into()));
        }
        let n_max = match self.order {
            Some(n) => n.min(order),
            None => order,
        };
        let f = match self.order {
            Some(_) => self.clone(),
            None => self.truncate(n_max + 1),
        };
        let h = f.shift(-1).inverse()?;
        let mut coeffs = vec![self.zero.clone()];
        let mut hp = Self::constant(self.zero.one_like());
        for n in 1..n_max {
            hp = hp.mul(&h);
            let c = hp.coeff(n - 1)?.scaled(&Rational::new(1.into(), n.into()));
            coeffs.push(c);
        }
        Ok(Self::truncated(0, coeffs, n_max, self.zero.clone()))
    }
}

impl<R: Ring> PartialEq for LaurentSeries<R> {
    /// Same truncation order and same coefficients.
    fn eq(&self, o: &Self) -> bool {
        if self.order != o.order {
            return false;
        }
        let lo = self.start.min(o.start);
        let hi = self.end().max(o.end());
        (lo..hi).all(|k| match (self.c(k), o.c(k)) {
            (Some(a), Some(b)) => a == b,
            (Some(a), None) | (None, Some(a)) => a.vanishes(),
            (None, None) => true,
        })
    }
}

impl<R: Ring> fmt::Display for LaurentSeries<R>
where
    R: fmt::Display,
{
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.known() {
            if c.vanishes() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({})*v^{}", c, k)?;
        }
        match self.order {
            Some(n) => write!(f, "{}O(v^{})", if first { "" } else { " + " }, n),
            None if first => write!(f, "0"),
            None => Ok(()),
        }
    }
}

/// Rational-coefficient series, printed as "num/den" lists.
pub fn format_series(s: &LaurentSeries<Rational>) -> String {
    let parts: Vec<String> = s.known().map(|(k, c)| format!("{}:{}", k, format_rational(c))).collect();
    match s.order() {
        Some(n) => format!("[{}] O({})", parts.join(", "), n),
        None => format!("[{}]", parts.join(", ")),
    }
}

fn rz() -> Rational {
    Rational::zero()
}

/// `exp(v)` known to order `n`.
pub fn exp_series(n: i64) -> LaurentSeries<Rational> {
    let c = (0..n.max(0)).map(|k| Rational::new(BigInt::one(), factorial(k as u64))).collect();
    LaurentSeries::truncated(0, c, n, rz())
}

/// `log(1 + v)` known to order `n`.
pub fn log1p_series(n: i64) -> LaurentSeries<Rational> {
    let c = (0..n.max(0))
        .map(|k| {
            if k == 0 {
                rz()
            } else {
                let s: i64 = if k % 2 == 1 { 1 } else { -1 };
                Rational::new(s.into(), k.into())
            }
        })
        .collect();
    LaurentSeries::truncated(0, c, n, rz())
}

/// `(1 + v)^α` known to order `n`.
pub fn binomial_series(alpha: &Rational, n: i64) -> LaurentSeries<Rational> {
    let mut c = Vec::new();
    let mut term = Rational::one();
    for k in 0..n.max(0) {
        c.push(term.clone());
        term = term * (alpha - Rational::from_integer(k.into())) / Rational::from_integer((k + 1).into());
    }
    LaurentSeries::truncated(0, c, n, rz())
}

/// `sin(v)` known to order `n`.
pub fn sin_series(n: i64) -> LaurentSeries<Rational> {
    let c = (0..n.max(0))
        .map(|k| {
            if k % 2 == 0 {
                rz()
            } else {
                let s: i64 = if (k / 2) % 2 == 0 { 1 } else { -1 };
                Rational::new(s.into(), factorial(k as u64))
            }
        })
        .collect();
    LaurentSeries::truncated(0, c, n, rz())
}

/// `f^α` for a series with constant term 1.
pub fn series_pow(f: &LaurentSeries<Rational>, alpha: &Rational, n: i64) -> Result<LaurentSeries<Rational>, AlgebraError> {
    if f.coeff(0)? != Rational::one() || f.start() < 0 && f.known().any(|(k, c)| k < 0 && !c.vanishes()) {
        return Err(AlgebraError::Valuation("power series must start with 1".into()));
    }
    let u = f.sub(&LaurentSeries::constant(Rational::one()));
    binomial_series(alpha, n).compose(&u)
}
