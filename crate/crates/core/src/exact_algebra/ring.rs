use std::fmt::Debug;

use num_traits::{One, Zero};

use super::rational::Rational;

/// Commutative ring with enough context carried by each element to build
/// constants of the same shape (arity, root-ring degree).
pub trait Ring: Clone + PartialEq + Debug + Send + Sync {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn from_rational_like(&self, q: &Rational) -> Self;
    fn vanishes(&self) -> bool;
    fn plus(&self, o: &Self) -> Self;
    fn minus(&self, o: &Self) -> Self;
    fn times(&self, o: &Self) -> Self;
    fn negated(&self) -> Self;

    fn scaled(&self, q: &Rational) -> Self {
        self.times(&self.from_rational_like(q))
    }

    /// Multiplicative inverse when one exists in the ring.
    fn try_inv(&self) -> Option<Self>;

    /// Solves `m x = rhs` for square `m`; `None` when singular.
    fn solve_linear(m: Vec<Vec<Self>>, rhs: Vec<Self>) -> Option<Vec<Self>> {
        gauss_solve(m, rhs)
    }
}

/// Plain Gaussian elimination; requires every nonzero pivot to be invertible.
pub fn gauss_solve<R: Ring>(mut m: Vec<Vec<R>>, mut rhs: Vec<R>) -> Option<Vec<R>> {
    let n = rhs.len();
    for col in 0..n {
        let piv = (col..n).find(|&i| !m[i][col].vanishes())?;
        m.swap(col, piv);
        rhs.swap(col, piv);
        let inv = m[col][col].try_inv()?;
        for j in col..n {
            m[col][j] = m[col][j].times(&inv);
        }
        rhs[col] = rhs[col].times(&inv);
        for i in 0..n {
            if i != col && !m[i][col].vanishes() {
                let f = m[i][col].clone();
                for j in col..n {
                    let t = f.times(&m[col][j]);
                    m[i][j] = m[i][j].minus(&t);
                }
                let t = f.times(&rhs[col]);
                rhs[i] = rhs[i].minus(&t);
            }
        }
    }
    Some(rhs)
}

impl Ring for Rational {
    fn zero_like(&self) -> Self {
        Rational::zero()
    }
    fn one_like(&self) -> Self {
        Rational::one()
    }
    fn from_rational_like(&self, q: &Rational) -> Self {
        q.clone()
    }
    fn vanishes(&self) -> bool {
        Zero::is_zero(self)
    }
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn minus(&self, o: &Self) -> Self {
        self - o
    }
    fn times(&self, o: &Self) -> Self {
        self * o
    }
    fn negated(&self) -> Self {
        -self
    }
    fn scaled(&self, q: &Rational) -> Self {
        self * q
    }
    fn try_inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
}
