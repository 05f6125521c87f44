use std::fmt;

use num_traits::{One, Zero};

use super::rational::Rational;
use super::ring::Ring;
use super::AlgebraError;

/// Element `Σ_{k<r} c_k a^k` of `B[a]/(a^r − 1/r)`.
///
/// The `r` roots of `a^r = 1/r` are the critical points of the spectral
/// curve; the trace `r·c₀` is the sum over them.
#[derive(Clone, Debug, PartialEq)]
pub struct RootRingElem<B: Ring> {
    r: usize,
    c: Vec<B>,
}

impl<B: Ring> RootRingElem<B> {
    pub fn new(r: usize, c: Vec<B>) -> Self {
        assert!(r >= 1 && c.len() == r, "root ring element needs exactly r coefficients");
        RootRingElem { r, c }
    }

    pub fn scalar(r: usize, b: B) -> Self {
        let mut c = vec![b.zero_like(); r];
        c[0] = b;
        RootRingElem { r, c }
    }

    /// `b · a^k`, reduced.
    pub fn monomial(r: usize, k: usize, b: B) -> Self {
        let q = Rational::new(1.into(), (r as i64).into());
        let mut b = b;
        for _ in 0..k / r {
            b = b.scaled(&q);
        }
        let mut c = vec![b.zero_like(); r];
        c[k % r] = b;
        RootRingElem { r, c }
    }

    /// The generator `a`.
    pub fn a(r: usize, like: &B) -> Self {
        Self::monomial(r, 1, like.one_like())
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn coeffs(&self) -> &[B] {
        &self.c
    }

    pub fn trace(&self) -> B {
        self.c[0].scaled(&Rational::from_integer((self.r as i64).into()))
    }

    pub fn map<C: Ring>(&self, f: impl Fn(&B) -> C) -> RootRingElem<C> {
        RootRingElem { r: self.r, c: self.c.iter().map(f).collect() }
    }

    /// Indices `k` with `c_k ≠ 0`.
    pub fn support(&self) -> Vec<usize> {
        (0..self.r).filter(|&k| !self.c[k].vanishes()).collect()
    }

    fn mul_impl(&self, o: &Self) -> Self {
        assert_eq!(self.r, o.r, "root ring degree mismatch");
        let r = self.r;
        let z = self.c[0].zero_like();
        let mut lo = vec![z.clone(); r];
        let mut hi = vec![z; r];
        for i in 0..r {
            if self.c[i].vanishes() {
                continue;
            }
            for j in 0..r {
                if o.c[j].vanishes() {
                    continue;
                }
                let t = self.c[i].times(&o.c[j]);
                if i + j < r {
                    lo[i + j] = lo[i + j].plus(&t);
                } else {
                    hi[i + j - r] = hi[i + j - r].plus(&t);
                }
            }
        }
        let q = Rational::new(1.into(), (r as i64).into());
        for k in 0..r {
            if !hi[k].vanishes() {
                lo[k] = lo[k].plus(&hi[k].scaled(&q));
            }
        }
        RootRingElem { r, c: lo }
    }

    /// Inverse via the `r × r` multiplication matrix; the matrix determinant
    /// is the norm of the element.
    pub fn invert(&self) -> Result<Self, AlgebraError> {
        let r = self.r;
        let nonzero: Vec<usize> = self.support();
        if nonzero.is_empty() {
            return Err(AlgebraError::NotInvertible);
        }
        if nonzero == [0] {
            let inv = self.c[0].try_inv().ok_or(AlgebraError::NotInvertible)?;
            return Ok(Self::scalar(r, inv));
        }
        // Column j holds the coefficients of self·a^j.
        let z = self.c[0].zero_like();
        let mut cols = Vec::with_capacity(r);
        for j in 0..r {
            cols.push(self.mul_impl(&Self::monomial(r, j, z.one_like())).c);
        }
        let m: Vec<Vec<B>> = (0..r).map(|i| (0..r).map(|j| cols[j][i].clone()).collect()).collect();
        let mut rhs = vec![z.clone(); r];
        rhs[0] = z.one_like();
        let x = B::solve_linear(m, rhs).ok_or(AlgebraError::NotInvertible)?;
        Ok(RootRingElem { r, c: x })
    }
}

impl<B: Ring> Ring for RootRingElem<B> {
    fn zero_like(&self) -> Self {
        RootRingElem { r: self.r, c: vec![self.c[0].zero_like(); self.r] }
    }
    fn one_like(&self) -> Self {
        Self::scalar(self.r, self.c[0].one_like())
    }
    fn from_rational_like(&self, q: &Rational) -> Self {
        Self::scalar(self.r, self.c[0].from_rational_like(q))
    }
    fn vanishes(&self) -> bool {
        self.c.iter().all(|x| x.vanishes())
    }
    fn plus(&self, o: &Self) -> Self {
        RootRingElem { r: self.r, c: self.c.iter().zip(&o.c).map(|(a, b)| a.plus(b)).collect() }
    }
    fn minus(&self, o: &Self) -> Self {
        RootRingElem { r: self.r, c: self.c.iter().zip(&o.c).map(|(a, b)| a.minus(b)).collect() }
    }
    fn times(&self, o: &Self) -> Self {
        self.mul_impl(o)
    }
    fn negated(&self) -> Self {
        RootRingElem { r: self.r, c: self.c.iter().map(|a| a.negated()).collect() }
    }
    fn scaled(&self, q: &Rational) -> Self {
        RootRingElem { r: self.r, c: self.c.iter().map(|a| a.scaled(q)).collect() }
    }
    fn try_inv(&self) -> Option<Self> {
        self.invert().ok()
    }
}

impl<B: Ring + fmt::Display> fmt::Display for RootRingElem<B> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.c.iter().enumerate() {
            if c.vanishes() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({})*a^{}", c, k)?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// `Σ_k c_k a^k` with rational coefficients.
pub fn root_rational(r: usize, c: &[Rational]) -> RootRingElem<Rational> {
    let mut out = RootRingElem::scalar(r, Rational::zero());
    for (k, q) in c.iter().enumerate() {
        out = out.plus(&RootRingElem::monomial(r, k, q.clone()));
    }
    out
}

pub fn root_one(r: usize) -> RootRingElem<Rational> {
    RootRingElem::scalar(r, Rational::one())
}
