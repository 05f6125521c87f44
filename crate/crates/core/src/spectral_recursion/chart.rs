use num_traits::{One, Zero};

use crate::exact_algebra::{format_rational, int, log1p_series, rat, series_pow, AlgebraError, LaurentSeries, Rational};

type Series = LaurentSeries<Rational>;

fn zero() -> Rational {
    Rational::zero()
}

/// `f(Δ) = log(1 − Δ) + Δ`, known to order `n`.
fn log_plus_identity(n: i64) -> Series {
    log1p_series(n).compose(&Series::exact(1, vec![int(-1)], zero())).unwrap().add(&Series::var(&zero()))
}

/// The deck transformation `Δ̃(Δ) = −Δ + O(Δ²)` with `f(Δ̃) = f(Δ)`,
/// solved by undetermined coefficients to order `n`.
pub fn deck_series(n: i64) -> Series {
    assert!(n >= 2);
    let target = log_plus_identity(n + 1);
    let mut c = vec![zero(), int(-1)];
    for m in 2..n {
        c.push(zero());
        let trial = Series::truncated(0, c.clone(), n, zero());
        let lhs = log_plus_identity(n + 1).compose(&trial).unwrap();
        // The Δ^{m+1} coefficient of f(Δ̃) depends on d_m through −d_1 d_m = d_m.
        let resid = lhs.coeff(m + 1).unwrap() - target.coeff(m + 1).unwrap();
        c[m as usize] = -resid;
    }
    Series::truncated(0, c, n, zero())
}

/// `v(Δ)` with `½v² = −Δ − log(1 − Δ)` and `v = Δ + O(Δ²)`, and its inverse `ψ`.
pub fn airy_coordinates(n: i64) -> (Series, Series) {
    assert!(n >= 4);
    // 2(−Δ − log(1−Δ))/Δ² = Σ 2Δ^k/(k+2)
    let q = Series::truncated(0, (0..n).map(|k| rat(2, k + 2)).collect(), n, zero());
    let v = series_pow(&q, &rat(1, 2), n).unwrap().shift(1).truncate(n);
    let psi = v.reverse(n).unwrap();
    (v, psi)
}

/// Local data at the ramification points in the Airy coordinate `v`:
/// `z(v) = a S(v)` and the conjugate point `z̃(v) = a S(−v)`, `a^r = 1/r`.
#[derive(Clone, Debug)]
pub struct LocalChart {
    pub r: u32,
    pub order: i64,
    pub deck: Series,
    pub v_of_delta: Series,
    pub psi: Series,
    /// `S(v) = (1 − ψ(v))^{1/r}`.
    pub s: Series,
    pub ds: Series,
    /// `u = v²/2`.
    pub u: Series,
}

impl LocalChart {
    pub fn new(r: u32, order: i64) -> Self {
        let (v_of_delta, psi) = airy_coordinates(order);
        let one_minus = Series::constant(Rational::one()).sub(&psi);
        let s = series_pow(&one_minus, &rat(1, r as i64), order).unwrap();
        let ds = s.derivative();
        let u = Series::exact(2, vec![rat(1, 2)], zero());
        LocalChart { r, order, deck: deck_series(order), v_of_delta, psi, s, ds, u }
    }

    pub fn psi_neg(&self) -> Series {
        self.psi.reflect()
    }

    pub fn s_neg(&self) -> Series {
        self.s.reflect()
    }

    /// Kernel prefactor `r S / (2 (ψ(v) − ψ(−v)) ψ(v) S'(v))`.
    pub fn kernel_prefactor(&self) -> Result<Series, AlgebraError> {
        let diff = self.psi.sub(&self.psi_neg()).scale(&int(2));
        let den = diff.mul(&self.psi).mul(&self.ds);
        self.s.scale(&int(self.r as i64)).div(&den)
    }

    /// `B(z, z̃) dz dz̃ / dv² = −S'(v) S'(−v) / (S(v) − S(−v))²`.
    pub fn b_conjugate(&self) -> Result<Series, AlgebraError> {
        let d = self.s.sub(&self.s_neg());
        let num = self.ds.mul(&self.ds.reflect()).neg();
        num.div(&d.mul(&d))
    }

    /// Plain-text dump: one `name: c0 c1 …` line per series, coefficients as `num/den`.
    pub fn dump(&self) -> String {
        let line = |name: &str, s: &Series| {
            let cs: Vec<String> = s.known().map(|(_, c)| format_rational(c)).collect();
            format!("{} [start {}, order {}]: {}\n", name, s.start(), s.order().map_or("exact".into(), |o| o.to_string()), cs.join(" "))
        };
        let mut out = format!("chart r={} order={}\n", self.r, self.order);
        out += &line("deck", &self.deck);
        out += &line("v", &self.v_of_delta);
        out += &line("psi", &self.psi);
        out += &line("S", &self.s);
        out
    }
}
