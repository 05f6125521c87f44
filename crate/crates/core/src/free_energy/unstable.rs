use super::xi::critical_factor;
use crate::exact_algebra::{int, rat, AlgebraError, Rational, RationalExpr, SparsePoly};

/// The unstable free energies. `F_{0,2}` contains `log((z₁−z₂)/(x₁−x₂))`,
/// so only rational derivative data is kept.
#[derive(Clone, Debug)]
pub struct UnstableF {
    pub r: u32,
    /// `F_{0,1} = z^r/r − z^{2r}/2`.
    pub f01: SparsePoly,
    /// `dF_{0,1}/dz = z^{r−1}(1 − r z^r)`.
    pub df01: SparsePoly,
    /// Rational part of `∂₁F_{0,2}`: `1/(z₁−z₂) − r z₁^{r−1}`; the omitted
    /// part is `−x'(z₁)/(x(z₁)−x(z₂))`.
    pub df02_rational: RationalExpr,
    /// `lim_{z₁,z₂→z} ∂₁∂₂F_{0,2} = −S(x)/6`, `S` the Schwarzian of `x = z e^{−z^r}`.
    pub d2f02_diagonal: RationalExpr,
}

pub fn unstable_f(r: u32) -> UnstableF {
    let z = |e: u32, c: Rational| SparsePoly::monomial(1, vec![e], c);
    let f01 = z(r, rat(1, r as i64)).sub(&z(2 * r, rat(1, 2)));
    let df01 = f01.deriv(0);
    let diff = SparsePoly::var(2, 0).sub(&SparsePoly::var(2, 1));
    let df02_rational = RationalExpr::one(2)
        .div_poly(&diff)
        .expect("nonzero")
        .sub(&RationalExpr::from_poly(SparsePoly::monomial(2, vec![r - 1, 0], int(r as i64))));
    UnstableF { r, f01, df01, df02_rational, d2f02_diagonal: schwarzian_limit(r) }
}

/// `x''/x' = −r z^{r−1} − r² z^{r−1}/(1 − r z^r)`.
fn log_derivative(r: u32) -> Result<RationalExpr, AlgebraError> {
    let ri = int(r as i64);
    let a = RationalExpr::from_poly(SparsePoly::monomial(1, vec![r - 1], -ri.clone()));
    let b = RationalExpr::from_poly(SparsePoly::monomial(1, vec![r - 1], -(ri.clone() * ri))).div_poly(&critical_factor(r))?;
    Ok(a.add(&b))
}

fn schwarzian_limit(r: u32) -> RationalExpr {
    let p = log_derivative(r).expect("nonzero critical factor");
    let s = p.deriv(0).sub(&p.mul(&p).scale(&rat(1, 2)));
    s.scale(&rat(-1, 6)).normalize()
}
