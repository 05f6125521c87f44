use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_traits::Zero;

use crate::exact_algebra::{factorial, int, pow_i, Rational, RationalExpr, SparsePoly};

/// `ξ_ℓ^{r,k}` as a rational function of one variable `z`.
#[derive(Clone, Debug)]
pub struct XiFunction {
    pub r: u32,
    pub k: u32,
    pub level: i32,
    pub value: RationalExpr,
}

/// `1 − r z^r` in one variable.
pub fn critical_factor(r: u32) -> SparsePoly {
    SparsePoly::one(1).sub(&SparsePoly::monomial(1, vec![r], int(r as i64)))
}

type XiCache = Mutex<HashMap<(u32, u32, i32, bool), RationalExpr>>;

fn cache() -> &'static XiCache {
    static CACHE: OnceLock<XiCache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn build(r: u32, k: u32, level: i32) -> RationalExpr {
    if level == -1 {
        return if k == 0 {
            RationalExpr::from_poly(SparsePoly::monomial(1, vec![r], int(1)))
        } else {
            RationalExpr::from_poly(SparsePoly::monomial(1, vec![k], Rational::new(1.into(), (k as i64).into())))
        };
    }
    // ξ_{ℓ+1} = z/(1 − r z^r) · ξ_ℓ'
    let prev = xi_expr(r, k, level - 1);
    prev.deriv(0)
        .mul_poly(&SparsePoly::var(1, 0))
        .div_poly(&critical_factor(r))
        .expect("nonzero critical factor")
        .normalize()
}

/// Cached univariate `ξ_ℓ^{r,k}(z)`.
pub fn xi_expr(r: u32, k: u32, level: i32) -> RationalExpr {
    assert!(k < r || (r == 1 && k == 0), "k must lie in [0, r)");
    assert!(level >= -1);
    if let Some(v) = cache().lock().unwrap().get(&(r, k, level, false)) {
        return v.clone();
    }
    let v = build(r, k, level);
    cache().lock().unwrap().insert((r, k, level, false), v.clone());
    v
}

/// Cached `d/dz ξ_ℓ^{r,k}(z)`.
pub fn xi_prime(r: u32, k: u32, level: i32) -> RationalExpr {
    if let Some(v) = cache().lock().unwrap().get(&(r, k, level, true)) {
        return v.clone();
    }
    let v = xi_expr(r, k, level).deriv(0).normalize();
    cache().lock().unwrap().insert((r, k, level, true), v.clone());
    v
}

pub fn xi(r: u32, k: u32, level: i32) -> XiFunction {
    XiFunction { r, k, level, value: xi_expr(r, k, level) }
}

/// Coefficient of `x^{rm+k}` in `ξ_ℓ^{r,k}(x)`: `(rm+k)^{m+ℓ}/m!`; the
/// `k = 0` series starts at `m = 1`.
pub fn xi_x_coeff(r: u32, k: u32, level: i32, m: u32) -> Rational {
    if k == 0 && m == 0 {
        return Rational::zero();
    }
    let base = int((r * m + k) as i64);
    pow_i(&base, m as i64 + level as i64) / Rational::from_integer(factorial(m as u64))
}

/// Closed forms of `ξ_m^{r,k}` for `m ≤ 2`, `k ≤ 2`, written as
/// `z^k P(u)/(1 − u)^e` with `u = r z^r`; in the `η = r^{1/r} z` chart
/// these are the tabulated `η`-forms up to the overall factor `r^{−k/r}`.
/// Returns `(P, e)` as polynomials in `r` evaluated at the given `r`.
pub fn xi_table_row(r: u32, k: u32, m: i32) -> Option<(Vec<Rational>, u32)> {
    let r = r as i64;
    let q = |c: i64| int(c);
    let half = Rational::new(1.into(), 2.into());
    let row = match (k, m) {
        (0, -1) => (vec![q(0), Rational::new(1.into(), r.into())], 0),
        (0, 0) => (vec![q(0), q(1)], 1),
        (0, 1) => (vec![q(0), q(r)], 3),
        (0, 2) => (vec![q(0), q(r * r), q(2 * r * r)], 5),
        (1, -1) => (vec![q(1)], 0),
        (1, 0) => (vec![q(1)], 1),
        (1, 1) => (vec![q(1), q(r - 1)], 3),
        (1, 2) => (vec![q(1), q(r * r + 3 * r - 2), q(2 * r * r - 3 * r + 1)], 5),
        (2, -1) => (vec![half], 0),
        (2, 0) => (vec![q(1)], 1),
        (2, 1) => (vec![q(2), q(r - 2)], 3),
        (2, 2) => (vec![q(4), q(r * r + 6 * r - 8), q(2 * (r * r - 3 * r + 2))], 5),
        _ => return None,
    };
    Some(row)
}

/// The closed form of [`xi_table_row`] as a rational function of `z`.
pub fn xi_table_entry(r: u32, k: u32, m: i32) -> Option<RationalExpr> {
    let (p, e) = xi_table_row(r, k, m)?;
    let mut num = SparsePoly::zero(1);
    for (i, c) in p.iter().enumerate() {
        let i = i as u32;
        num = num.add(&SparsePoly::monomial(1, vec![k + r * i], c * pow_i(&int(r as i64), i as i64)));
    }
    let mut out = RationalExpr::from_poly(num);
    for _ in 0..e {
        out = out.div_poly(&critical_factor(r)).expect("nonzero critical factor");
    }
    Some(out)
}

/// Compares `ξ_m^{r,k}` with the closed forms for `−1 ≤ m ≤ 2` and every
/// `k ≤ 2` admissible at this `r`; returns the number of entries checked.
pub fn verify_xi_table(r: u32) -> Result<usize, super::FreeEnergyError> {
    let mut checked = 0;
    for k in 0..=2u32 {
        if k > 0 && k >= r {
            continue;
        }
        for m in -1..=2 {
            let expected = xi_table_entry(r, k, m).expect("tabulated");
            let got = xi_expr(r, k, m);
            if got != expected {
                return Err(super::FreeEnergyError::IdentityFailure(format!("ξ_{}^{{{},{}}} = {} differs from {}", m, r, k, got, expected)));
            }
            checked += 1;
        }
    }
    Ok(checked)
}
