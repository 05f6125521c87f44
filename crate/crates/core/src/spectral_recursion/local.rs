use num_traits::{One, Zero};

use super::chart::LocalChart;
use super::SpectralError;
use crate::exact_algebra::{int, pow_i, Rational, RationalExpr, RootRingElem, Ring, LaurentSeries, SparsePoly};
use crate::free_energy::{critical_factor, xi_expr, xi_prime};

pub(crate) type Series = LaurentSeries<Rational>;
pub(crate) type RSeries<B> = LaurentSeries<RootRingElem<B>>;

/// A series `a^tag · s(v)` with rational coefficients.
#[derive(Clone, Debug)]
pub struct Tagged {
    pub tag: usize,
    pub series: Series,
}

/// Splits a univariate `N(z)/(r z^r − 1)^e` into its numerator and exponent.
fn split(f: &RationalExpr, r: u32) -> Result<(SparsePoly, u32), SpectralError> {
    let atom = critical_factor(r).scale(&int(-1));
    let mut e = 0;
    for (a, &k) in f.atoms() {
        if *a != atom {
            return Err(SpectralError::Unsupported(format!("denominator factor {}", a)));
        }
        e = k;
    }
    Ok((f.numerator().clone(), e))
}

/// Pulls a univariate `N(z)/(r z^r − 1)^e` back along `z = a S(v)`,
/// optionally times `dz/dv`. Every monomial must carry the same power of `a`.
pub fn pull_back(chart: &LocalChart, f: &RationalExpr, with_dz: bool) -> Result<Tagged, SpectralError> {
    let r = chart.r;
    let (num, e) = split(f, r)?;
    // r z^r − 1 = −ψ(v)
    let inv_psi = chart.psi.neg().inverse()?;
    let den = inv_psi.pow(e);
    let mut tag = None;
    let mut acc = Series::zero_exact(Rational::zero());
    for (exps, c) in num.terms() {
        let p = exps[0] + with_dz as u32;
        let t = (p % r) as usize;
        if *tag.get_or_insert(t) != t {
            return Err(SpectralError::GaloisAsymmetry(format!("mixed powers of a in {}", f)));
        }
        let scalar = c * pow_i(&Rational::new(1.into(), (r as i64).into()), (p / r) as i64);
        let mut term = chart.s.pow(exps[0]).scale(&scalar);
        if with_dz {
            term = term.mul(&chart.ds);
        }
        acc = acc.add(&term);
    }
    Ok(Tagged { tag: tag.unwrap_or(0), series: acc.mul(&den) })
}

/// `ξ'_ℓ^{r,k}(z(v)) dz/dv`.
pub fn xi_form_series(chart: &LocalChart, k: u32, l: u32) -> Result<Tagged, SpectralError> {
    pull_back(chart, &xi_prime(chart.r, k, l as i32), true)
}

/// Lifts `a^tag s(v)` to root-ring coefficients over `B`.
pub fn lift<B: Ring>(t: &Tagged, r: u32, like: &B) -> RSeries<B> {
    let zero = RootRingElem::scalar(r as usize, like.zero_like());
    t.series.map(|c| RootRingElem::monomial(r as usize, t.tag, like.from_rational_like(c)), zero)
}

/// `1/(z(v) − w)` for a point `w` away from the critical set.
pub fn inverse_shift<B: Ring>(chart: &LocalChart, w: &B) -> Result<RSeries<B>, SpectralError> {
    let z = lift(&Tagged { tag: 1, series: chart.s.clone() }, chart.r, w);
    let c = LaurentSeries::constant(RootRingElem::scalar(chart.r as usize, w.clone()));
    Ok(z.sub(&c).inverse()?)
}

/// Parity-split pieces of `ξ_ℓ^{r,k}` at the ramification points.
#[derive(Clone, Debug)]
pub struct PhiH {
    pub phi: Series,
    pub h: Series,
    pub e: Series,
}

/// `φ = (ξ(z) − ξ(z̃))/(2Y)`, `h = (ξ(z) + ξ(z̃))/(2Y)` with `Y = (z^k + z̃^k)/2`,
/// and `E = −(r/v) Y'/Y`; the `a^k` factors cancel.
pub fn phi_h_decompose(chart: &LocalChart, k: u32, level: i32) -> Result<PhiH, SpectralError> {
    let xi = pull_back(chart, &xi_expr(chart.r, k, level), false)?;
    let yq = if k == 0 {
        Series::constant(Rational::one())
    } else {
        if xi.tag != k as usize {
            return Err(SpectralError::GaloisAsymmetry(format!("ξ tag {} for k = {}", xi.tag, k)));
        }
        chart.s.pow(k).add(&chart.s_neg().pow(k)).scale(&Rational::new(1.into(), 2.into()))
    };
    let two_y = yq.scale(&int(2));
    let xr = xi.series.reflect();
    let phi = xi.series.sub(&xr).div(&two_y)?;
    let h = xi.series.add(&xr).div(&two_y)?;
    let e = yq.derivative().shift(-1).scale(&int(-(chart.r as i64))).div(&yq)?;
    Ok(PhiH { phi, h, e })
}

/// `(E − (r/v) d/dv) f`, the operator `z/(1 − r z^r) d/dz` in the Airy chart.
pub fn raise(chart: &LocalChart, e: &Series, f: &Series) -> Series {
    e.mul(f).sub(&f.derivative().shift(-1).scale(&int(chart.r as i64)))
}

/// `⌊h⌋_p / p` for `p = (1 − r z^r)^k`, `⌊h⌋_p` the remainder of `h` mod `p`.
pub fn principal_part(h: &SparsePoly, k: u32, r: u32) -> RationalExpr {
    if k == 0 {
        return RationalExpr::zero(1);
    }
    let p = critical_factor(r).pow(k);
    let (_, rem) = h.divrem(&p).expect("nonzero modulus");
    let mut out = RationalExpr::from_poly(rem);
    for _ in 0..k {
        out = out.div_poly(&critical_factor(r)).expect("nonzero");
    }
    out
}

/// Report of one residue-lemma check.
#[derive(Clone, Debug, PartialEq)]
pub struct ResidueReport {
    pub residue_sum: Rational,
    pub principal_part: Rational,
}

impl ResidueReport {
    pub fn holds(&self) -> bool {
        self.residue_sum == -self.principal_part.clone()
    }
}

/// `Σ_j Res_{ζ=p_j} m(ζ)/(ζ − η) dζ` against `−{m}(η)`.
pub fn verify_residue_lemma(chart: &LocalChart, m: &RationalExpr, eta: &Rational) -> Result<ResidueReport, SpectralError> {
    let r = chart.r;
    let like = Rational::zero();
    let pulled = pull_back_mixed(chart, m)?;
    let dz = lift(&Tagged { tag: 1, series: chart.ds.clone() }, r, &like);
    let integrand = pulled.mul(&inverse_shift(chart, eta)?).mul(&dz);
    let residue_sum = integrand.coeff(-1)?.trace();
    let (num, e) = split(m, r)?;
    // m = N/(r z^r − 1)^e = (−1)^e N/(1 − r z^r)^e
    let h = if e % 2 == 0 { num } else { num.scale(&int(-1)) };
    let pp = principal_part(&h, e, r).eval(&[eta.clone()])?;
    Ok(ResidueReport { residue_sum, principal_part: pp })
}

/// Pull-back of a univariate rational function whose monomials may carry
/// different powers of `a`.
fn pull_back_mixed(chart: &LocalChart, m: &RationalExpr) -> Result<RSeries<Rational>, SpectralError> {
    let r = chart.r;
    let (num, e) = split(m, r)?;
    let mut acc: RSeries<Rational> = LaurentSeries::zero_exact(RootRingElem::scalar(r as usize, Rational::zero()));
    for (exps, c) in num.terms() {
        let mono = RationalExpr::from_poly(SparsePoly::monomial(1, exps.clone(), c.clone()));
        let mut f = mono;
        for _ in 0..e {
            f = f.div_poly(&critical_factor(r).scale(&int(-1)))?;
        }
        acc = acc.add(&lift(&pull_back(chart, &f, false)?, r, &Rational::zero()));
    }
    Ok(acc)
}

/// A reproducible random input for the residue lemma: `m = h(z)/(1 − r z^r)^k`
/// with small integer data, and a rational `η` off the critical set.
pub fn residue_lemma_sample(r: u32, seed: u64) -> (RationalExpr, Rational) {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed ^ ((r as u64) << 32));
    let k: u32 = rng.gen_range(0..=3);
    let deg: u32 = rng.gen_range(0..r * (k + 1) + 2);
    let mut h = SparsePoly::zero(1);
    for e in 0..=deg {
        let c = Rational::new(rng.gen_range(-9i64..=9).into(), rng.gen_range(1i64..=4).into());
        h = h.add(&SparsePoly::monomial(1, vec![e], c));
    }
    let mut m = RationalExpr::from_poly(h);
    for _ in 0..k {
        m = m.div_poly(&critical_factor(r)).expect("nonzero");
    }
    let eta = loop {
        let eta = Rational::new(rng.gen_range(-6i64..=6).into(), rng.gen_range(2i64..=13).into());
        if !critical_factor(r).eval(&[eta.clone()]).is_zero() {
            break eta;
        }
    };
    (m, eta)
}

/// Runs the residue lemma on [`residue_lemma_sample`] with a chart deep
/// enough for its pole order.
pub fn residue_lemma_check(r: u32, seed: u64) -> Result<ResidueReport, SpectralError> {
    let (m, eta) = residue_lemma_sample(r, seed);
    let (_, k) = split(&m, r)?;
    verify_residue_lemma(&LocalChart::new(r, 2 * k as i64 + 8), &m, &eta)
}
