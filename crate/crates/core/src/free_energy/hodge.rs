use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::basis::XiBasisFreeEnergy;
use crate::exact_algebra::{factorial, int, log1p_series, pow_i, sin_series, LaurentSeries, Rational};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HodgeKey {
    pub r: u32,
    pub g: u32,
    pub k: Vec<u32>,
    pub l: Vec<u32>,
}

/// `⟨τ_ℓ Λ⟩^{(r),k}` values, `Λ = Σ_j (−r)^j λ_j`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct HodgeTable {
    pub entries: BTreeMap<HodgeKey, Rational>,
}

impl HodgeTable {
    pub fn get(&self, r: u32, g: u32, pairs: &[(u32, u32)]) -> Rational {
        let mut p = pairs.to_vec();
        p.sort();
        let key = HodgeKey { r, g, k: p.iter().map(|x| x.0).collect(), l: p.iter().map(|x| x.1).collect() };
        self.entries.get(&key).cloned().unwrap_or_else(Rational::zero)
    }
}

/// Divides each coefficient by `r^{1−g+|k|/r}`.
pub fn hodge_extract(f: &XiBasisFreeEnergy) -> HodgeTable {
    let mut entries = BTreeMap::new();
    for (key, c) in f.coeffs() {
        let ksum: u32 = key.iter().map(|p| p.0).sum();
        assert_eq!(ksum % f.r, 0, "|k| must be divisible by r");
        let e = 1 - f.g as i64 + (ksum / f.r) as i64;
        let v = c / pow_i(&int(f.r as i64), e);
        entries.insert(
            HodgeKey { r: f.r, g: f.g, k: key.iter().map(|p| p.0).collect(), l: key.iter().map(|p| p.1).collect() },
            v,
        );
    }
    HodgeTable { entries }
}

/// One-point values `⟨τ_{2g−2+j} λ_{g−j}⟩^{(r)}` keyed by `(g, j)`; the
/// entry `(0, 0)` holds the leading `1/(rħ)` coefficient.
pub type OnePointTable = BTreeMap<(u32, u32), Rational>;

/// `sin(cħ)/(cħ)` known to order `n`.
fn sinc(c: &Rational, n: i64) -> LaurentSeries<Rational> {
    let s = sin_series(n + 1).shift(-1).truncate(n);
    let coeffs = (0..n).map(|k| s.coeff(k).unwrap() * pow_i(c, k)).collect();
    LaurentSeries::truncated(0, coeffs, n, Rational::zero())
}

/// Reads one-point Hodge integrals off
/// `(1/2r)(rħ/2 / sin(rħ/2))^u / sin(ħ/2) = 1/(rħ) + Σ_{g,j} ⟨τ_{2g−2+j}λ_{g−j}⟩ u^j ħ^{2g−1}`.
pub fn one_point_generating(r: u32, g_max: u32) -> OnePointTable {
    assert!(g_max >= 1);
    let n = 2 * g_max as i64 + 1;
    let half_r = Rational::new((r as i64).into(), 2.into());
    // L = log(y / sin y), y = rħ/2.
    let s = sinc(&half_r, n).sub(&LaurentSeries::constant(Rational::one()));
    let l = log1p_series(n).compose(&s).expect("valuation ≥ 1").neg();
    // ħ / sin(ħ/2) = 2 / sinc(ħ/2).
    let a = sinc(&Rational::new(1.into(), 2.into()), n).inverse().expect("unit").scale(&int(2));
    let pref = Rational::new(1.into(), (2 * r as i64).into());
    let mut out = OnePointTable::new();
    let mut lj = LaurentSeries::truncated(0, vec![Rational::one()], n, Rational::zero());
    for j in 0..=g_max {
        let term = lj.mul(&a).scale(&(pref.clone() / Rational::from_integer(factorial(j as u64))));
        for g in j..=g_max {
            out.insert((g, j), term.coeff(2 * g as i64).unwrap());
        }
        lj = lj.mul(&l);
    }
    out
}

/// One-point values recovered from a Hodge table of `F_{g,1}`, using that
/// only `λ_{g−j}` pairs with `τ_{2g−2+j}` and `Λ` weights it by `(−r)^{g−j}`.
pub fn one_point_from_hodge(h: &HodgeTable, r: u32, g: u32) -> OnePointTable {
    assert!(g >= 1);
    let mut out = OnePointTable::new();
    for j in 0..=g {
        let v = h.get(r, g, &[(0, 2 * g - 2 + j)]);
        out.insert((g, j), v / pow_i(&int(-(r as i64)), (g - j) as i64));
    }
    out
}
