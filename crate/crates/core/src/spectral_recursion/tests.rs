use std::sync::Arc;

use proptest::prelude::*;

use super::*;
use crate::exact_algebra::{exp_series, int, rat, LaurentSeries, Rational, RationalExpr, RootRingElem, SparsePoly};
use crate::free_energy::{critical_factor, xi_expr, FreeEnergyStore};
use crate::hurwitz_numbers::HurwitzTable;

type Series = LaurentSeries<Rational>;

fn store(r: u32) -> FreeEnergyStore {
    FreeEnergyStore::new(r, Arc::new(HurwitzTable::new()))
}

fn coeffs(s: &Series, from: i64, to: i64) -> Vec<Rational> {
    (from..to).map(|k| s.coeff(k).unwrap()).collect()
}

fn q(cs: &[(i64, i64)]) -> Vec<Rational> {
    cs.iter().map(|&(a, b)| rat(a, b)).collect()
}

#[test]
fn deck_coefficients() {
    let d = deck_series(10);
    let expected = q(&[(-1, 1), (-2, 3), (-4, 9), (-44, 135), (-104, 405), (-40, 189), (-7648, 42525), (-2848, 18225)]);
    assert_eq!(coeffs(&d, 1, 9), expected);
    assert_eq!(d.coeff(0).unwrap(), int(0));
}

#[test]
fn deck_is_an_involution_preserving_x() {
    let n = 12;
    let d = deck_series(n);
    let dd = d.compose(&d).unwrap();
    assert_eq!(coeffs(&dd, 0, n), coeffs(&Series::var(&int(0)), 0, n));
    // r z^r e^{−r z^r} with r z^r = 1 − Δ, up to the constant e^{−1}: (1 − Δ) e^{Δ}
    let x_of = |delta: &Series| {
        let one_minus = Series::constant(int(1)).sub(delta);
        one_minus.mul(&crate::exact_algebra::exp_series(n).compose(delta).unwrap())
    };
    let id = Series::truncated(1, vec![int(1)], n, int(0));
    assert_eq!(coeffs(&x_of(&id), 0, n), coeffs(&x_of(&d), 0, n));
}

#[test]
fn airy_coordinate_series() {
    let (v, psi) = airy_coordinates(8);
    assert_eq!(coeffs(&v, 0, 5), q(&[(0, 1), (1, 1), (1, 3), (7, 36), (73, 540)]));
    assert_eq!(coeffs(&psi, 0, 5), q(&[(0, 1), (1, 1), (-1, 3), (1, 36), (1, 270)]));
    let even = psi.add(&psi.reflect());
    let odd = psi.sub(&psi.reflect());
    assert_eq!(even.odd_part().truncate(8).valuation(), None);
    assert_eq!(odd.even_part().truncate(8).valuation(), None);
    assert_eq!(coeffs(&odd, 0, 3), q(&[(0, 1), (2, 1), (0, 1)]));
}

#[test]
fn conjugate_point_is_the_deck_image() {
    let n = 10;
    let (_, psi) = airy_coordinates(n);
    let lhs = psi.reflect();
    let rhs = deck_series(n).compose(&psi).unwrap();
    assert_eq!(coeffs(&lhs, 0, n), coeffs(&rhs, 0, n));
}

#[test]
fn kernel_shape() {
    for r in 1..=3 {
        let chart = LocalChart::new(r, 10);
        // z̃^r − z^r = (ψ(v) − ψ(−v))/r has valuation 1
        let diff = chart.psi.sub(&chart.psi_neg());
        assert_eq!(diff.valuation(), Some(1));
        let k = eo_kernel(&chart, 1, 0).unwrap();
        // divided by dz/dv the kernel has a simple pole
        assert_eq!(k.valuation(), Some(-1));
    }
}

#[test]
fn phi_h_leading_terms() {
    for r in 1..=3u32 {
        let chart = LocalChart::new(r, 14);
        let p = phi_h_decompose(&chart, 0, -1).unwrap();
        assert_eq!(p.phi.valuation(), Some(1));
        assert_eq!(p.phi.coeff(1).unwrap(), rat(-1, r as i64));
        assert_eq!(p.phi.coeff(2).unwrap(), int(0));
        for k in 1..r {
            let p = phi_h_decompose(&chart, k, -1).unwrap();
            assert_eq!(p.h.coeff(0).unwrap(), rat(1, k as i64));
        }
    }
}

#[test]
fn phi_h_parity_and_pole_orders() {
    for r in 1..=3u32 {
        let chart = LocalChart::new(r, 16);
        for k in 0..r {
            for level in -1..=3 {
                let p = phi_h_decompose(&chart, k, level).unwrap();
                let window = |s: &Series| s.truncate(12);
                assert_eq!(window(&p.phi.even_part()).valuation(), None, "φ odd r={} k={} n={}", r, k, level);
                assert_eq!(window(&p.h.odd_part()).valuation(), None, "h even r={} k={} n={}", r, k, level);
                assert_eq!(window(&p.e.odd_part()).valuation(), None, "E even r={} k={}", r, k);
                assert!(p.phi.valuation().map_or(true, |v| v >= -(2 * level as i64 + 1)), "φ pole r={} k={} n={}", r, k, level);
            }
        }
    }
}

#[test]
fn phi_h_raising_recursion() {
    for r in 1..=3u32 {
        let chart = LocalChart::new(r, 18);
        for k in 0..r {
            for level in -1..=1 {
                let lo = phi_h_decompose(&chart, k, level).unwrap();
                let hi = phi_h_decompose(&chart, k, level + 1).unwrap();
                let lo_e = lo.e.clone();
                let phi = raise(&chart, &lo_e, &lo.phi);
                let h = raise(&chart, &lo_e, &lo.h);
                let top = 10;
                let from = -(2 * level as i64 + 5);
                assert_eq!(coeffs(&phi, from, top), coeffs(&hi.phi, from, top), "φ r={} k={} n={}", r, k, level);
                assert_eq!(coeffs(&h, from, top), coeffs(&hi.h, from, top), "h r={} k={} n={}", r, k, level);
            }
        }
    }
}

fn univariate(terms: &[(u32, i64, i64)]) -> SparsePoly {
    let mut p = SparsePoly::zero(1);
    for &(e, a, b) in terms {
        p = p.add(&SparsePoly::monomial(1, vec![e], rat(a, b)));
    }
    p
}

fn over_critical(h: SparsePoly, r: u32, k: u32) -> RationalExpr {
    let mut m = RationalExpr::from_poly(h);
    for _ in 0..k {
        m = m.div_poly(&critical_factor(r)).unwrap();
    }
    m
}

#[test]
fn principal_part_examples() {
    for r in 1..=3u32 {
        let one = RationalExpr::one(1).div_poly(&critical_factor(r)).unwrap();
        assert!(principal_part(&univariate(&[(0, 1, 1)]), 1, r).equals(&one));
        assert!(principal_part(&univariate(&[(r, r as i64, 1)]), 1, r).equals(&one));
        assert!(principal_part(&univariate(&[(3, 2, 1), (0, 1, 1)]), 0, r).is_zero());
    }
}

#[test]
fn residue_lemma_examples() {
    let chart = LocalChart::new(2, 12);
    let eta = rat(1, 7);
    let m = over_critical(univariate(&[(0, 1, 1)]), 2, 1);
    assert!(verify_residue_lemma(&chart, &m, &eta).unwrap().holds());
    let poly = RationalExpr::from_poly(univariate(&[(3, 2, 1), (1, -1, 1)]));
    let rep = verify_residue_lemma(&chart, &poly, &eta).unwrap();
    assert_eq!(rep.residue_sum, int(0));
    assert_eq!(rep.principal_part, int(0));
    for r in 2..=3u32 {
        let chart = LocalChart::new(r, 16);
        let m = xi_expr(r, 1, 2).mul(&xi_expr(r, 0, 0));
        let rep = verify_residue_lemma(&chart, &m, &rat(2, 9)).unwrap();
        assert!(rep.holds(), "{:?}", rep);
        assert!(rep.principal_part != int(0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 12, ..ProptestConfig::default() })]
    #[test]
    fn residue_lemma_random(
        r in 1u32..=3,
        k in 0u32..=3,
        cs in prop::collection::vec(-9i64..=9, 1..6),
        eta_num in -5i64..=5,
        eta_den in 6i64..=13,
    ) {
        let h = univariate(&cs.iter().enumerate().map(|(i, &c)| (i as u32, c, 1)).collect::<Vec<_>>());
        let m = over_critical(h, r, k);
        let chart = LocalChart::new(r, 2 * k as i64 + 8);
        let rep = verify_residue_lemma(&chart, &m, &rat(eta_num, eta_den)).unwrap();
        prop_assert!(rep.holds(), "{:?}", rep);
    }
}

#[test]
fn eo_low_cases() {
    let s = store(2);
    eo_step(&s, 0, 3).unwrap();
    eo_step(&s, 1, 1).unwrap();
    eo_step(&store(1), 1, 1).unwrap();
}

#[test]
fn eo_mismatch_is_reported() {
    let s = store(2);
    let mut f = (*s.get(0, 3).unwrap()).clone();
    let key = f.coeffs().keys().next().unwrap().clone();
    let c = f.coeff(&key);
    f.set(key, c + int(1));
    s.insert(f);
    assert!(matches!(eo_step(&s, 0, 3), Err(SpectralError::MismatchWithLaplace { .. })));
}

#[test]
fn eo_rejects_unstable() {
    assert!(matches!(eo_step(&store(2), 0, 2), Err(SpectralError::Unstable { .. })));
}

#[test]
fn eo_shallow_window_is_detected() {
    let s = store(2);
    let chart = LocalChart::new(2, 6);
    assert!(matches!(eo_residue(&s, 2, 1, &chart), Err(SpectralError::TruncationTooShallow(_))));
}

#[test]
fn eo_agrees_with_laplace_side() {
    for r in 1..=3 {
        let s = store(r);
        for (g, n) in [(0, 3), (1, 1), (0, 4), (1, 2), (2, 1)] {
            eo_step(&s, g, n).unwrap_or_else(|e| panic!("r={} (g,n)=({},{}): {}", r, g, n, e));
        }
    }
}

#[test]
fn chart_dump_lists_series() {
    let d = LocalChart::new(2, 6).dump();
    assert!(d.starts_with("chart r=2 order=6"));
    assert!(d.contains("deck [start 0, order 6]: 0/1 -1/1 -2/3 -4/9"), "{}", d);
}


#[test]
fn b_substitution_leaves_the_residue_unchanged() {
    // variables: z_1, z_2, z_3, ε = e^{−1/r}, X_2 = x(z_2), X_3 = x(z_3)
    let nv = 6;
    for r in 1..=2u32 {
        // truncation is tracked exactly, so a window too small would error out
        let order = 5;
        let chart = LocalChart::new(r, order);
        let like = RationalExpr::zero(nv);
        let scalar = |b: RationalExpr| RootRingElem::scalar(r as usize, b);
        let eps = scalar(RationalExpr::var(nv, 3));
        // x(v) = a ε S(v) e^{ψ(v)/r}
        let se = chart.s.mul(&exp_series(order).compose(&chart.psi.scale(&rat(1, r as i64))).unwrap());
        let x = lift(&Tagged { tag: 1, series: se.clone() }, r, &like).scale_by(&eps);
        let dx = lift(&Tagged { tag: 1, series: se.derivative() }, r, &like).scale_by(&eps);
        let dz = lift(&Tagged { tag: 1, series: chart.ds.clone() }, r, &like);
        let w02 = |i: usize, conj: bool| {
            let inv = inverse_shift(&chart, &RationalExpr::var(nv, i)).unwrap();
            let b = dz.mul(&inv).mul(&inv);
            let big_x = RationalExpr::var(nv, 3 + i);
            let zi = RationalExpr::var(nv, i);
            // x'(z_i) = X_i (1 − r z_i^r)/z_i
            let dxi = big_x.mul(&RationalExpr::one(nv).sub(&zi.pow(r).scale(&int(r as i64)))).div(&zi).unwrap();
            let shift = x.sub(&LaurentSeries::constant(scalar(big_x))).inverse().unwrap();
            let w = b.sub(&dx.mul(&shift).mul(&shift).scale_by(&scalar(dxi)));
            if conj {
                w.reflect().neg()
            } else {
                w
            }
        };
        let t = w02(1, false).mul(&w02(2, true)).add(&w02(2, false).mul(&w02(1, true)));
        let res = eo_kernel(&chart, nv, 0).unwrap().mul(&t).coeff(-1).unwrap().trace();
        let with_b = eo_residue(&store(r), 0, 3, &chart).unwrap().remap(nv, &[0, 1, 2]).unwrap();
        assert!(res.equals(&with_b), "r={} {} vs {}", r, res, with_b);
    }
}

#[test]
fn seeded_residue_samples() {
    for r in 1..=3 {
        for seed in 0..10 {
            assert!(residue_lemma_check(r, seed).unwrap().holds(), "r={} seed={}", r, seed);
        }
        assert_eq!(residue_lemma_sample(r, 5), residue_lemma_sample(r, 5));
    }
}
