use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use super::poly::{bareiss_det, SparsePoly};
use super::rational::Rational;
use super::ring::Ring;
use super::AlgebraError;

/// Quotient `num / ∏ atom^e` of sparse polynomials.
///
/// The denominator is kept as a product of primitive, non-constant atoms with
/// positive lex-leading coefficient, so that expressions built from the same
/// factors share atoms exactly; constants live in the numerator. No gcd is
/// taken; equality is by cross-multiplication.
#[derive(Clone, Debug)]
pub struct RationalExpr {
    num: SparsePoly,
    den: BTreeMap<SparsePoly, u32>,
}

impl RationalExpr {
    pub fn from_poly(p: SparsePoly) -> Self {
        RationalExpr { num: p, den: BTreeMap::new() }
    }

    pub fn zero(nvars: usize) -> Self {
        Self::from_poly(SparsePoly::zero(nvars))
    }

    pub fn one(nvars: usize) -> Self {
        Self::from_poly(SparsePoly::one(nvars))
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        Self::from_poly(SparsePoly::constant(nvars, c))
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        Self::from_poly(SparsePoly::var(nvars, i))
    }

    /// `num / den`, factoring `den` only into its content and primitive part.
    pub fn quotient(num: SparsePoly, den: &SparsePoly) -> Result<Self, AlgebraError> {
        Self::from_poly(num).div_poly(den)
    }

    /// Builds `num / ∏ atom^e`; atoms must already be primitive with
    /// positive leading coefficient.
    pub fn from_factored(num: SparsePoly, atoms: BTreeMap<SparsePoly, u32>) -> Self {
        debug_assert!(atoms.keys().all(|a| a.primitive().1 == *a));
        RationalExpr { num, den: atoms.into_iter().filter(|&(_, e)| e > 0).collect() }
    }

    /// Same denominator atoms, new numerator.
    pub fn with_numerator(&self, num: SparsePoly) -> Self {
        assert_eq!(num.nvars(), self.nvars());
        RationalExpr { num, den: self.den.clone() }
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars()
    }

    pub fn numerator(&self) -> &SparsePoly {
        &self.num
    }

    pub fn atoms(&self) -> &BTreeMap<SparsePoly, u32> {
        &self.den
    }

    /// Expanded denominator polynomial.
    pub fn denominator(&self) -> SparsePoly {
        self.den.iter().fold(SparsePoly::one(self.nvars()), |acc, (a, &e)| acc.mul(&a.pow(e)))
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn as_constant(&self) -> Option<Rational> {
        if self.num.is_zero() {
            return Some(Rational::zero());
        }
        if self.den.is_empty() {
            self.num.as_constant()
        } else {
            None
        }
    }

    fn lift_num(num: &SparsePoly, own: &BTreeMap<SparsePoly, u32>, target: &BTreeMap<SparsePoly, u32>) -> SparsePoly {
        let mut n = num.clone();
        for (a, &e) in target {
            let have = own.get(a).copied().unwrap_or(0);
            if e > have {
                n = n.mul(&a.pow(e - have));
            }
        }
        n
    }

    fn common_den(&self, o: &Self) -> BTreeMap<SparsePoly, u32> {
        let mut d = self.den.clone();
        for (a, &e) in &o.den {
            let slot = d.entry(a.clone()).or_insert(0);
            *slot = (*slot).max(e);
        }
        d
    }

    pub fn add(&self, o: &Self) -> Self {
        if o.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return o.clone();
        }
        let d = self.common_den(o);
        let n = Self::lift_num(&self.num, &self.den, &d).add(&Self::lift_num(&o.num, &o.den, &d));
        if n.is_zero() {
            return Self::zero(self.nvars());
        }
        RationalExpr { num: n, den: d }
    }

    pub fn neg(&self) -> Self {
        RationalExpr { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, q: &Rational) -> Self {
        if q.is_zero() {
            return Self::zero(self.nvars());
        }
        RationalExpr { num: self.num.scale(q), den: self.den.clone() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let num = self.num.mul(&o.num);
        if num.is_zero() {
            return Self::zero(self.nvars());
        }
        let mut den = self.den.clone();
        for (a, &e) in &o.den {
            *den.entry(a.clone()).or_insert(0) += e;
        }
        RationalExpr { num, den }
    }

    pub fn mul_poly(&self, p: &SparsePoly) -> Self {
        if p.is_zero() {
            return Self::zero(self.nvars());
        }
        RationalExpr { num: self.num.mul(p), den: self.den.clone() }
    }

    pub fn pow(&self, n: u32) -> Self {
        RationalExpr { num: self.num.pow(n), den: self.den.iter().map(|(a, &e)| (a.clone(), e * n)).collect() }
    }

    /// Divides by a polynomial, absorbing its content into the numerator and
    /// peeling off any existing atoms it is divisible by.
    pub fn div_poly(&self, p: &SparsePoly) -> Result<Self, AlgebraError> {
        if p.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        let (c, mut prim) = p.primitive();
        let mut out = RationalExpr { num: self.num.scale(&c.recip()), den: self.den.clone() };
        if prim.is_constant() {
            return Ok(out);
        }
        let known: Vec<SparsePoly> = out.den.keys().cloned().collect();
        for a in known {
            while prim.total_degree() >= a.total_degree() {
                match prim.divexact(&a) {
                    Ok(q) => {
                        *out.den.get_mut(&a).unwrap() += 1;
                        let (cq, pq) = q.primitive();
                        out.num = out.num.scale(&cq.recip());
                        prim = pq;
                    }
                    Err(_) => break,
                }
            }
            if prim.is_constant() {
                break;
            }
        }
        if !prim.is_constant() {
            *out.den.entry(prim).or_insert(0) += 1;
        } else {
            let k = prim.as_constant().unwrap();
            out.num = out.num.scale(&k.recip());
        }
        Ok(out)
    }

    pub fn inv(&self) -> Result<Self, AlgebraError> {
        if self.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        Self::from_poly(self.denominator()).div_poly(&self.num)
    }

    pub fn div(&self, o: &Self) -> Result<Self, AlgebraError> {
        if o.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        self.mul_poly(&o.denominator()).div_poly(&o.num)
    }

    /// Cancels every atom that divides the numerator.
    pub fn normalize(&self) -> Self {
        let mut num = self.num.clone();
        let mut den = BTreeMap::new();
        for (a, &e) in &self.den {
            let mut left = e;
            while left > 0 {
                match num.divexact(a) {
                    Ok(q) => {
                        num = q;
                        left -= 1;
                    }
                    Err(_) => break,
                }
            }
            if left > 0 {
                den.insert(a.clone(), left);
            }
        }
        RationalExpr { num, den }
    }

    pub fn deriv(&self, i: usize) -> Self {
        // d(N/∏A^e) = (N'∏A - N Σ e_j A_j' ∏_{k≠j} A_k) / ∏A^{e+1}, restricted
        // to atoms that involve the variable.
        let active: Vec<(&SparsePoly, u32)> =
            self.den.iter().filter(|(a, _)| a.degree_in(i) > 0).map(|(a, &e)| (a, e)).collect();
        let nv = self.nvars();
        let prod_all = active.iter().fold(SparsePoly::one(nv), |acc, (a, _)| acc.mul(a));
        let mut n = self.num.deriv(i).mul(&prod_all);
        for (j, (aj, ej)) in active.iter().enumerate() {
            let mut t = self.num.mul(&aj.deriv(i)).scale(&Rational::from_integer((*ej).into()));
            for (k, (ak, _)) in active.iter().enumerate() {
                if k != j {
                    t = t.mul(ak);
                }
            }
            n = n.sub(&t);
        }
        if n.is_zero() {
            return Self::zero(nv);
        }
        let mut den = self.den.clone();
        for (a, _) in &active {
            *den.get_mut(*a).unwrap() += 1;
        }
        RationalExpr { num: n, den }
    }

    pub fn eval(&self, point: &[Rational]) -> Result<Rational, AlgebraError> {
        let d = self.den.iter().fold(Rational::one(), |acc, (a, &e)| acc * num_traits::pow(a.eval(point), e as usize));
        if d.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        Ok(self.num.eval(point) / d)
    }

    pub fn remap(&self, nvars: usize, map: &[usize]) -> Result<Self, AlgebraError> {
        let mut out = Self::from_poly(self.num.remap(nvars, map));
        for (a, &e) in &self.den {
            let img = a.remap(nvars, map);
            for _ in 0..e {
                out = out.div_poly(&img)?;
            }
        }
        Ok(out)
    }

    /// Substitutes polynomials for the variables.
    pub fn compose(&self, images: &[SparsePoly]) -> Result<Self, AlgebraError> {
        let mut out = Self::from_poly(self.num.compose(images));
        for (a, &e) in &self.den {
            let img = a.compose(images);
            for _ in 0..e {
                out = out.div_poly(&img)?;
            }
        }
        Ok(out)
    }

    pub fn equals(&self, o: &Self) -> bool {
        let d = self.common_den(o);
        Self::lift_num(&self.num, &self.den, &d) == Self::lift_num(&o.num, &o.den, &d)
    }

    /// Numerators of `self` and `o` over their common denominator.
    pub fn over_common(&self, o: &Self) -> (SparsePoly, SparsePoly, BTreeMap<SparsePoly, u32>) {
        let d = self.common_den(o);
        (Self::lift_num(&self.num, &self.den, &d), Self::lift_num(&o.num, &o.den, &d), d)
    }
}

impl PartialEq for RationalExpr {
    fn eq(&self, o: &Self) -> bool {
        self.equals(o)
    }
}

impl fmt::Display for RationalExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.num)?;
        if !self.den.is_empty() {
            write!(f, " / ")?;
            for (i, (a, e)) in self.den.iter().enumerate() {
                if i > 0 {
                    write!(f, "*")?;
                }
                write!(f, "({})^{}", a, e)?;
            }
        }
        Ok(())
    }
}

impl Ring for RationalExpr {
    fn zero_like(&self) -> Self {
        Self::zero(self.nvars())
    }
    fn one_like(&self) -> Self {
        Self::one(self.nvars())
    }
    fn from_rational_like(&self, q: &Rational) -> Self {
        Self::constant(self.nvars(), q.clone())
    }
    fn vanishes(&self) -> bool {
        self.num.is_zero()
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
        self.inv().ok()
    }

    /// Cramer's rule on the denominator-cleared matrix, with Bareiss
    /// determinants so that no intermediate fractions appear.
    fn solve_linear(m: Vec<Vec<Self>>, rhs: Vec<Self>) -> Option<Vec<Self>> {
        let n = rhs.len();
        if n == 0 {
            return Some(vec![]);
        }
        let mut d = BTreeMap::new();
        for e in m.iter().flatten().chain(rhs.iter()) {
            for (a, &k) in &e.den {
                let slot = d.entry(a.clone()).or_insert(0);
                *slot = (*slot).max(k);
            }
        }
        let clear = |e: &RationalExpr| RationalExpr::lift_num(&e.num, &e.den, &d);
        let pm: Vec<Vec<SparsePoly>> = m.iter().map(|row| row.iter().map(clear).collect()).collect();
        let pb: Vec<SparsePoly> = rhs.iter().map(clear).collect();
        let det = bareiss_det(pm.clone()).ok()?;
        if det.is_zero() {
            return None;
        }
        let mut out = Vec::with_capacity(n);
        for j in 0..n {
            let mut mj = pm.clone();
            for i in 0..n {
                mj[i][j] = pb[i].clone();
            }
            let dj = bareiss_det(mj).ok()?;
            out.push(RationalExpr::quotient(dj, &det).ok()?.normalize());
        }
        Some(out)
    }
}
