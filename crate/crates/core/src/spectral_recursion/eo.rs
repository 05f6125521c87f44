use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_traits::Zero;

use super::chart::LocalChart;
use super::local::{inverse_shift, lift, xi_form_series, RSeries, Series, Tagged};
use super::SpectralError;
use crate::combinat::distinct_permutations;
use crate::exact_algebra::{format_rational, Rational, RationalExpr, RootRingElem, Ring, LaurentSeries};
use crate::free_energy::{xi_prime, FreeEnergyStore, XiBasisFreeEnergy};

/// `W_{g,n} = d_1⋯d_n F_{g,n}` for a stable free energy, as the
/// coefficient of `dz_1⋯dz_n`.
#[derive(Clone, Debug)]
pub struct WForm {
    pub f: Arc<XiBasisFreeEnergy>,
}

impl WForm {
    pub fn new(f: Arc<XiBasisFreeEnergy>) -> Self {
        WForm { f }
    }

    pub fn value(&self) -> RationalExpr {
        self.f.mixed_derivative()
    }
}

/// Default Laurent window for `(g, n)`.
pub fn default_order(g: u32, n: usize) -> i64 {
    6 * g as i64 + 2 * n as i64 + 6
}

/// `K(z_1; v) = r S / (2(ψ(v) − ψ(−v)) ψ S') · (1/(z − z_1) − 1/(z̃ − z_1))`,
/// the recursion kernel divided by `dz/dv`, with `z_1` the variable `var`.
pub fn eo_kernel(chart: &LocalChart, nvars: usize, var: usize) -> Result<RSeries<RationalExpr>, SpectralError> {
    let like = RationalExpr::zero(nvars);
    let pref = lift(&Tagged { tag: 0, series: chart.kernel_prefactor()? }, chart.r, &like);
    let i = inverse_shift(chart, &RationalExpr::var(nvars, var))?;
    Ok(pref.mul(&i.sub(&i.reflect())))
}

/// `B(z, z_i) dz/dv`, or `B(z̃, z_i) dz̃/dv` when `conj`.
fn b_series(chart: &LocalChart, nvars: usize, var: usize, conj: bool) -> Result<RSeries<RationalExpr>, SpectralError> {
    let like = RationalExpr::zero(nvars);
    let i = inverse_shift(chart, &RationalExpr::var(nvars, var))?;
    let dz = lift(&Tagged { tag: 1, series: chart.ds.clone() }, chart.r, &like);
    let b = dz.mul(&i).mul(&i);
    Ok(if conj { b.reflect().neg() } else { b })
}

/// Grouping key: B factors `(variable, on conjugate side)`, spectator
/// factors `(variable, k, ℓ)`, and the power of `a` of the pure part.
type Key = (Vec<(usize, bool)>, Vec<(usize, u32, u32)>, usize);

struct Accumulator<'a> {
    chart: &'a LocalChart,
    forms: HashMap<(u32, u32), Tagged>,
    terms: BTreeMap<Key, Series>,
}

/// One side of a product: either a B factor or a stable free-energy term
/// with the z-slot at position 0.
enum Side {
    B(usize),
    Terms(Vec<(Rational, Vec<(u32, u32)>, Vec<usize>)>),
}

impl<'a> Accumulator<'a> {
    fn form(&mut self, k: u32, l: u32, conj: bool) -> Result<Tagged, SpectralError> {
        if !self.forms.contains_key(&(k, l)) {
            let t = xi_form_series(self.chart, k, l)?;
            self.forms.insert((k, l), t);
        }
        let t = self.forms[&(k, l)].clone();
        // ξ'(z̃) dz̃/dv = −a^k X(−v)
        Ok(if conj { Tagged { tag: t.tag, series: t.series.reflect().neg() } } else { t })
    }

    fn add(&mut self, bset: Vec<(usize, bool)>, mut spect: Vec<(usize, u32, u32)>, tag: usize, s: Series) -> Result<(), SpectralError> {
        let r = self.chart.r as usize;
        let (tag, s) = if tag >= r { (tag - r, s.scale(&Rational::new(1.into(), (r as i64).into()))) } else { (tag, s) };
        let kappa: usize = spect.iter().map(|x| x.1 as usize).sum();
        if (tag + kappa) % r != 0 {
            return Err(SpectralError::GaloisAsymmetry(format!("pure part on a^{} with spectator classes summing to {}", tag, kappa)));
        }
        spect.sort();
        let mut bset = bset;
        bset.sort();
        let slot = self.terms.entry((bset, spect, tag)).or_insert_with(|| Series::zero_exact(Rational::zero()));
        *slot = slot.add(&s);
        Ok(())
    }
}

/// Ordered terms of `F` with position 0 on the z-slot and the remaining
/// positions on `vars` in order.
fn ordered_terms(f: &XiBasisFreeEnergy, vars: &[usize]) -> Vec<(Rational, Vec<(u32, u32)>, Vec<usize>)> {
    let mut out = Vec::new();
    for (key, c) in f.coeffs() {
        for ord in distinct_permutations(key) {
            out.push((c.clone(), ord, vars.to_vec()));
        }
    }
    out
}

fn side(store: &FreeEnergyStore, g: u32, vars: &[usize]) -> Result<Option<Side>, SpectralError> {
    match (g, vars.len()) {
        (0, 0) => Ok(None),
        (0, 1) => Ok(Some(Side::B(vars[0]))),
        _ => {
            let f = store.get(g, vars.len() + 1)?;
            Ok(Some(Side::Terms(ordered_terms(&f, vars))))
        }
    }
}

/// Sum over the r ramification points of the residues in the recursion,
/// with `W_{0,2}` replaced by `B`. Variable 0 is `z_1`.
pub fn eo_residue(store: &FreeEnergyStore, g: u32, n: usize, chart: &LocalChart) -> Result<RationalExpr, SpectralError> {
    assert_eq!(store.r, chart.r);
    let r = chart.r;
    let mut acc = Accumulator { chart, forms: HashMap::new(), terms: BTreeMap::new() };
    let spectators: Vec<usize> = (1..n).collect();

    if g >= 1 {
        if (g, n) == (1, 1) {
            acc.add(vec![], vec![], 0, chart.b_conjugate()?)?;
        } else {
            let f = store.get(g - 1, n + 1)?;
            for (key, c) in f.coeffs() {
                for ord in distinct_permutations(key) {
                    let a = acc.form(ord[0].0, ord[0].1, false)?;
                    let b = acc.form(ord[1].0, ord[1].1, true)?;
                    let spect = spectators.iter().zip(&ord[2..]).map(|(&v, &(k, l))| (v, k, l)).collect();
                    acc.add(vec![], spect, a.tag + b.tag, a.series.mul(&b.series).scale(c))?;
                }
            }
        }
    }

    for mask in 0u32..(1 << spectators.len()) {
        let i_set: Vec<usize> = spectators.iter().enumerate().filter(|(b, _)| mask >> b & 1 == 1).map(|(_, &v)| v).collect();
        let j_set: Vec<usize> = spectators.iter().enumerate().filter(|(b, _)| mask >> b & 1 == 0).map(|(_, &v)| v).collect();
        for g1 in 0..=g {
            let (Some(left), Some(right)) = (side(store, g1, &i_set)?, side(store, g - g1, &j_set)?) else {
                continue;
            };
            let expand = |acc: &mut Accumulator, s: &Side, conj: bool| -> Result<Vec<(Vec<(usize, bool)>, Vec<(usize, u32, u32)>, Tagged)>, SpectralError> {
                Ok(match s {
                    Side::B(v) => vec![(vec![(*v, conj)], vec![], Tagged { tag: 0, series: Series::constant(Rational::from_integer(1.into())) })],
                    Side::Terms(ts) => {
                        let mut out = Vec::new();
                        for (c, ord, vars) in ts {
                            let t = acc.form(ord[0].0, ord[0].1, conj)?;
                            let spect = vars.iter().zip(&ord[1..]).map(|(&v, &(k, l))| (v, k, l)).collect();
                            out.push((vec![], spect, Tagged { tag: t.tag, series: t.series.scale(c) }));
                        }
                        out
                    }
                })
            };
            let ls = expand(&mut acc, &left, false)?;
            let rs = expand(&mut acc, &right, true)?;
            for (lb, lsp, lt) in &ls {
                for (rb, rsp, rt) in &rs {
                    let bset = lb.iter().chain(rb).copied().collect();
                    let spect = lsp.iter().chain(rsp).copied().collect();
                    acc.add(bset, spect, lt.tag + rt.tag, lt.series.mul(&rt.series))?;
                }
            }
        }
    }

    let like = RationalExpr::zero(n);
    let mut b_cache: HashMap<(usize, bool), RSeries<RationalExpr>> = HashMap::new();
    let mut spect_cache: HashMap<(usize, u32, u32), RationalExpr> = HashMap::new();
    let mut total: RSeries<RationalExpr> = LaurentSeries::zero_exact(RootRingElem::scalar(r as usize, like.clone()));
    for ((bset, spect, tag), s) in &acc.terms {
        if s.is_known_zero() {
            continue;
        }
        let mut term = lift(&Tagged { tag: *tag, series: s.clone() }, r, &like);
        for &(v, conj) in bset {
            if !b_cache.contains_key(&(v, conj)) {
                b_cache.insert((v, conj), b_series(chart, n, v, conj)?);
            }
            term = term.mul(&b_cache[&(v, conj)]);
        }
        let mut scalar = RationalExpr::one(n);
        for &(v, k, l) in spect {
            let f = spect_cache
                .entry((v, k, l))
                .or_insert_with(|| xi_prime(r, k, l as i32).remap(n, &[v]).expect("univariate remap"));
            scalar = scalar.mul(f);
        }
        total = total.add(&term.scale_by(&RootRingElem::scalar(r as usize, scalar)));
    }

    let kernel = eo_kernel(chart, n, 0)?;
    let res = coeff_of_product(&kernel, &total, -1)?;
    Ok(res.trace().normalize())
}

/// `[v^m] (a · b)` without forming the full product.
fn coeff_of_product<B: Ring>(a: &LaurentSeries<B>, b: &LaurentSeries<B>, m: i64) -> Result<B, SpectralError> {
    let mut acc = a.zero_elem().clone();
    let (Some(va), Some(vb)) = (a.valuation(), b.valuation()) else {
        return Ok(acc);
    };
    for i in va..=(m - vb) {
        let x = a.coeff(i)?;
        if x.vanishes() {
            continue;
        }
        acc = acc.plus(&x.times(&b.coeff(m - i)?));
    }
    Ok(acc)
}

/// Runs the recursion at the default window and at four more orders,
/// requires both to agree, and compares with `d_1⋯d_n F_{g,n}`.
pub fn eo_step(store: &FreeEnergyStore, g: u32, n: usize) -> Result<RationalExpr, SpectralError> {
    if 2 * g as i64 - 2 + n as i64 <= 0 {
        return Err(SpectralError::Unstable { g, n });
    }
    let order = default_order(g, n);
    let w = eo_residue(store, g, n, &LocalChart::new(store.r, order))?;
    let w4 = eo_residue(store, g, n, &LocalChart::new(store.r, order + 4))?;
    if w != w4 {
        return Err(SpectralError::TruncationTooShallow(format!("orders {} and {} disagree", order, order + 4)));
    }
    let expected = WForm::new(store.get(g, n)?).value();
    if w != expected {
        let (a, b, _) = w.over_common(&expected);
        let delta = a.sub(&b);
        let first = delta.terms().next().map(|(e, c)| format!("{:?} off by {}", e, format_rational(c))).unwrap_or_default();
        return Err(SpectralError::MismatchWithLaplace { g, n, r: store.r, detail: first });
    }
    Ok(w)
}
