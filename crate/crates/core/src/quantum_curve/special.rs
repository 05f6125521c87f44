use num_traits::{One, Zero};

use super::{CheckReport, QuantumCurveError, Window};
use crate::exact_algebra::{int, pow_i, rat, Rational, RationalExpr, SparsePoly};
use crate::free_energy::{to_t_laurent, xi_expr, FreeEnergyError, FreeEnergyStore, TPoly, XiBasisFreeEnergy};

/// `F_{g,n}(z, …, z)` as a polynomial in `t`.
#[derive(Clone, Debug, PartialEq)]
pub struct PrincipalSpecial {
    pub r: u32,
    pub g: u32,
    pub n: usize,
    pub value: TPoly,
}

fn checked(f: &XiBasisFreeEnergy, value: TPoly) -> Result<PrincipalSpecial, QuantumCurveError> {
    if !value.is_polynomial() {
        return Err(QuantumCurveError::NotPolynomialInT(value.to_string()));
    }
    let bound = 6 * f.g as i64 - 6 + 3 * f.n as i64;
    if let Some(degree) = value.degree() {
        if degree > bound {
            return Err(QuantumCurveError::DegreeBound { g: f.g, n: f.n, degree, bound });
        }
    }
    Ok(PrincipalSpecial { r: f.r, g: f.g, n: f.n, value })
}

/// Sets all variables equal and rewrites the result in `t`.
pub fn principal_specialize(f: &XiBasisFreeEnergy) -> Result<PrincipalSpecial, QuantumCurveError> {
    let expr = f.eval_at(1, &vec![0; f.n], &vec![false; f.n]);
    let value = to_t_laurent(&expr, f.r).map_err(not_polynomial)?;
    checked(f, value)
}

fn not_polynomial(e: FreeEnergyError) -> QuantumCurveError {
    match e {
        FreeEnergyError::NotAFunctionOfZr(s) | FreeEnergyError::NotPolynomialInT(s) => QuantumCurveError::NotPolynomialInT(s),
        other => other.into(),
    }
}

/// `ξ_ℓ^{r,k}(z) / z^k` as a Laurent polynomial in `t`.
fn xi_over_zk(r: u32, k: u32, l: u32) -> Result<TPoly, QuantumCurveError> {
    let x = xi_expr(r, k, l as i32);
    let zk = SparsePoly::monomial(1, vec![k], Rational::one());
    let (q, rem) = x.numerator().divrem(&zk).expect("nonzero divisor");
    assert!(rem.is_zero(), "ξ^{{r,k}} vanishes to order k at 0");
    to_t_laurent(&RationalExpr::from_factored(q, x.atoms().clone()), r).map_err(not_polynomial)
}

/// Term-by-term specialization: each product of ξ's is `z^{Σk}` times a
/// product of `t`-Laurent polynomials, with `z^r = (t − 1)/(r t)`.
pub fn principal_specialize_termwise(f: &XiBasisFreeEnergy) -> Result<PrincipalSpecial, QuantumCurveError> {
    let r = f.r;
    let mut cache = std::collections::HashMap::new();
    let mut value = TPoly::zero();
    for (key, c) in f.coeffs() {
        // the coefficient counts one ordering; the evaluation is symmetric
        let orderings = crate::combinat::distinct_permutations(key).len() as i64;
        let mut term = TPoly::constant(c * int(orderings));
        let mut ksum = 0;
        for &(k, l) in key {
            if !cache.contains_key(&(k, l)) {
                cache.insert((k, l), xi_over_zk(r, k, l)?);
            }
            term = term.mul(&cache[&(k, l)]);
            ksum += k;
        }
        assert_eq!(ksum % r, 0, "basis classes sum to a multiple of r");
        let j = ksum / r;
        let zr = TPoly::from_coeffs([(0, int(1)), (-1, int(-1))]).scale(&pow_i(&int(r as i64), -1));
        value = value.add(&term.mul(&zr.pow(j)));
    }
    checked(f, value)
}

/// `S_m = poly(t) + log_t · log t`. Only `S_1` has a logarithm.
#[derive(Clone, Debug, PartialEq)]
pub struct SmFunction {
    pub r: u32,
    pub m: u32,
    pub poly: TPoly,
    pub log_t: Rational,
}

impl SmFunction {
    /// `D S_m` with `D = x d/dx = r t²(t − 1) d/dt`; `D log t = r t(t − 1)`.
    pub fn d(&self) -> TPoly {
        let dlog = TPoly::from_coeffs([(2, int(self.r as i64)), (1, int(-(self.r as i64)))]);
        self.poly.x_d_dx(self.r).add(&dlog.scale(&self.log_t))
    }
}

fn factorial(n: usize) -> Rational {
    (1..=n as i64).fold(Rational::one(), |a, k| a * int(k))
}

/// `S_m = Σ_{2g−2+n=m−1} F_{g,n}(z, …, z)/n!`.
pub fn sm_function(store: &FreeEnergyStore, m: u32) -> Result<SmFunction, QuantumCurveError> {
    let r = store.r;
    let ri = r as i64;
    match m {
        // S_0 = z^r/r − z^{2r}/2 = (1 − t^{−2})/(2r²)
        0 => Ok(SmFunction { r, m, poly: TPoly::from_coeffs([(0, rat(1, 2 * ri * ri)), (-2, rat(-1, 2 * ri * ri))]), log_t: Rational::zero() }),
        // S_1 = −½ log(1 − r z^r) − ½ z^r
        1 => Ok(SmFunction { r, m, poly: TPoly::from_coeffs([(0, rat(-1, 2 * ri)), (-1, rat(1, 2 * ri))]), log_t: rat(1, 2) }),
        _ => {
            let mut poly = TPoly::zero();
            let mut g = 0;
            while 2 * g < m + 1 {
                let n = (m + 1 - 2 * g) as usize;
                let f = store.get(g, n)?;
                let p = principal_specialize(&f)?;
                poly = poly.add(&p.value.scale(&(Rational::one() / factorial(n))));
                g += 1;
            }
            Ok(SmFunction { r, m, poly, log_t: Rational::zero() })
        }
    }
}

/// `S_0, …, S_{m_max}`.
pub fn sm_table(store: &FreeEnergyStore, m_max: u32) -> Result<Vec<SmFunction>, QuantumCurveError> {
    (0..=m_max).map(|m| sm_function(store, m)).collect()
}

/// `(m + D/r) S_{m+1} = ½(D² S_m + Σ_{a+b=m+1} D S_a · D S_b) − ½ D S_m`
/// for every `m` with `S_{m+1}` in the table.
pub fn check_sm_ode(table: &[SmFunction]) -> Result<CheckReport, QuantumCurveError> {
    assert!(!table.is_empty());
    let r = table[0].r;
    let d: Vec<TPoly> = table.iter().map(SmFunction::d).collect();
    let half = rat(1, 2);
    for m in 0..table.len().saturating_sub(1) {
        let next = &table[m + 1];
        let lhs = next.poly.scale(&int(m as i64)).add(&d[m + 1].scale(&rat(1, r as i64)));
        let mut rhs = d[m].x_d_dx(r);
        for a in 0..=m + 1 {
            rhs = rhs.add(&d[a].mul(&d[m + 1 - a]));
        }
        let rhs = rhs.scale(&half).sub(&d[m].scale(&half));
        if lhs != rhs {
            return Err(QuantumCurveError::IdentityFailure {
                check: "sm-ode".into(),
                witness: format!("m = {}: lhs − rhs = {}", m, lhs.sub(&rhs)),
            });
        }
    }
    Ok(CheckReport::pass("sm-ode", r, Window { d_max: None, e_min: 0, e_max: table.len() as i64 - 2 }))
}

/// Checks the `S_m` equation for `m = 0, …, m_max`; this needs the free
/// energies with `2g − 2 + n ≤ m_max`.
pub fn verify_sm_ode(store: &FreeEnergyStore, m_max: u32) -> Result<CheckReport, QuantumCurveError> {
    check_sm_ode(&sm_table(store, m_max + 1)?)
}
