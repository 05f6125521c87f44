use std::sync::Arc;

use proptest::prelude::*;

use super::*;
use crate::exact_algebra::{int, pow_i, rat, LaurentSeries, Rational, RationalExpr, SparsePoly};
use crate::hurwitz_numbers::{HurwitzKey, HurwitzTable, Provenance};

fn store(r: u32) -> FreeEnergyStore {
    FreeEnergyStore::new(r, Arc::new(HurwitzTable::new()))
}

fn t_poly(cs: &[i64], scale: Rational) -> TPoly {
    TPoly::dense(&cs.iter().map(|&c| int(c)).collect::<Vec<_>>()).scale(&scale)
}

fn principal(f: &XiBasisFreeEnergy) -> RationalExpr {
    f.eval_at(1, &vec![0; f.n], &vec![false; f.n])
}

#[test]
fn xi_zero_is_t_minus_one() {
    for r in 1..=5 {
        let p = to_t_polynomial(&xi(r, 0, 0).value, r).unwrap();
        assert_eq!(p, TPoly::from_coeffs([(1, int(1)), (0, int(-1))]));
    }
}

#[test]
fn xi_matches_eta_table() {
    for r in 1..=6 {
        let n = verify_xi_table(r).unwrap();
        assert_eq!(n, 4 * (1 + (r as usize - 1).min(2)));
    }
    // ξ_1^{r,1} = z(1 + (r − 1) r z^r)/(1 − r z^r)^3
    let r = 3;
    let z = SparsePoly::var(1, 0);
    let num = z.add(&SparsePoly::monomial(1, vec![4], int(6)));
    let mut expected = RationalExpr::from_poly(num);
    for _ in 0..3 {
        expected = expected.div_poly(&critical_factor(r)).unwrap();
    }
    assert_eq!(xi(r, 1, 1).value, expected);
}

#[test]
fn xi_minus_one_x_series_from_reversion() {
    // x = z e^{−z^r}; the reverse series z(x) gives z^k/k.
    for r in 1..=3u32 {
        let order = 10 * r as i64 + 4;
        let mut c = vec![Rational::from_integer(0.into()); order as usize];
        let e = crate::exact_algebra::exp_series(order);
        for j in 0..order {
            let idx = 1 + r as i64 * j;
            if idx < order {
                c[idx as usize] = e.coeff(j).unwrap() * pow_i(&int(-1), j);
            }
        }
        let x_of_z = LaurentSeries::truncated(0, c, order, int(0));
        let reversed = x_of_z.reverse(order).unwrap();
        for k in 0..r.max(2) {
            if k >= r && !(r == 1 && k == 0) {
                continue;
            }
            let pw = if k == 0 { r } else { k };
            let s = reversed.pow(pw).scale(&if k == 0 { int(1) } else { rat(1, k as i64) });
            for m in 0..10u32 {
                let d = (r * m + k) as i64;
                if d >= order {
                    break;
                }
                assert_eq!(s.coeff(d).unwrap(), xi_x_coeff(r, k, -1, m), "r={} k={} m={}", r, k, m);
            }
        }
    }
}

#[test]
fn unstable_forms() {
    for r in 1..=4 {
        let u = unstable_f(r);
        let expected = SparsePoly::monomial(1, vec![r - 1], int(1)).sub(&SparsePoly::monomial(1, vec![2 * r - 1], int(r as i64)));
        assert_eq!(u.df01, expected);
        assert_eq!(u.f01.eval(&[int(0)]), int(0));
    }
}

/// Truncated bivariate product keeping total degree `< n`.
fn trunc_mul(a: &SparsePoly, b: &SparsePoly, n: u32) -> SparsePoly {
    let mut out = SparsePoly::zero(2);
    for (ea, ca) in a.terms() {
        for (eb, cb) in b.terms() {
            if ea[0] + ea[1] + eb[0] + eb[1] < n {
                out.add_term(vec![ea[0] + eb[0], ea[1] + eb[1]], ca * cb);
            }
        }
    }
    out
}

#[test]
fn mixed_derivative_of_f02_matches_hurwitz_series() {
    // ∂x₁∂x₂F_{0,2} = z₁'z₂'/(z₁−z₂)² − 1/(x₁−x₂)², cleared of denominators:
    // (x₁−x₂)² z₁'z₂' − (z₁−z₂)² = (x₁−x₂)²(z₁−z₂)² Σ μ₁μ₂ H x^{μ−1}.
    let table = HurwitzTable::new();
    for r in 1..=3u32 {
        let deg = 8u32;
        let n = deg + 5;
        let z1 = z_of_x(r, 0, n);
        let z2 = z_of_x(r, 1, n);
        let x1 = SparsePoly::var(2, 0);
        let x2 = SparsePoly::var(2, 1);
        let dx = x1.sub(&x2);
        let dx2 = dx.mul(&dx);
        let lhs = trunc_mul(&trunc_mul(&dx2, &z1.deriv(0), n), &z2.deriv(1), n).sub(&trunc_mul(&z1.sub(&z2), &z1.sub(&z2), n));
        let mut sum = SparsePoly::zero(2);
        for a in 1..=deg {
            for b in 1..=deg - a + 1 {
                if a + b > deg + 1 {
                    continue;
                }
                let h = table.h(r, 0, &[a, b]);
                sum.add_term(vec![a - 1, b - 1], h * int((a * b) as i64));
            }
        }
        let dz = z1.sub(&z2);
        let rhs = trunc_mul(&trunc_mul(&dx2, &trunc_mul(&dz, &dz, n), n), &sum, n);
        // Both sides are known exactly below total degree deg + 4.
        for (e, c) in lhs.terms() {
            if e[0] + e[1] < deg + 4 {
                assert_eq!(*c, rhs.coeff(e), "r={} at {:?}", r, e);
            }
        }
        for (e, c) in rhs.terms() {
            if e[0] + e[1] < deg + 4 {
                assert_eq!(*c, lhs.coeff(e), "r={} at {:?}", r, e);
            }
        }
    }
}

/// `z(x) = Σ_m (rm+1)^{m−1}/m! x^{rm+1}` in variable `v`, below degree `n`.
fn z_of_x(r: u32, v: usize, n: u32) -> SparsePoly {
    let mut p = SparsePoly::zero(2);
    for m in 0..n {
        let e = r * m + 1;
        if e >= n {
            break;
        }
        let mut ex = vec![0, 0];
        ex[v] = e;
        p.add_term(ex, pow_i(&int(e as i64), m as i64 - 1) / Rational::from_integer(crate::exact_algebra::factorial(m as u64)));
    }
    p
}

#[test]
fn f11_r2_coefficients() {
    let s = store(2);
    let f = s.get(1, 1).unwrap();
    assert_eq!(f.coeff(&[(0, 0)]), rat(-1, 24));
    assert_eq!(f.coeff(&[(0, 1)]), rat(1, 12));
    assert_eq!(f.coeffs().len(), 2);
}

#[test]
fn f11_t_polynomial() {
    for r in 1..=5i64 {
        let f = store(r as u32).get(1, 1).unwrap();
        let p = to_t_polynomial(&f.evaluate(), r as u32).unwrap();
        assert_eq!(p, t_poly(&[1, -1, -r * r, r * r], rat(1, 24)), "r={}", r);
    }
    let f = store(2).get(1, 1).unwrap();
    assert_eq!(to_t_polynomial(&f.evaluate(), 2).unwrap().to_string(), "(1/24)(4t^3-4t^2-t+1)");
}

pub(crate) fn paper_f21(r: i64) -> TPoly {
    let r2 = r * r;
    let r4 = r2 * r2;
    t_poly(
        &[0, 0, 0, 14, 12 * r4 + 60 * r2 - 35, 68 * r4 - 260 * r2 + 21, 350 * r2 * (1 - 2 * r2), 10 * r2 * (167 * r2 - 15), -1575 * r4, 525 * r4],
        rat(r2, 5760),
    )
}

#[test]
fn f21_t_polynomial() {
    for r in 1..=3i64 {
        let f = store(r as u32).get(2, 1).unwrap();
        assert_eq!(to_t_polynomial(&f.evaluate(), r as u32).unwrap(), paper_f21(r), "r={}", r);
    }
}

#[test]
fn f03_principal_specialization() {
    let f = store(2).get(0, 3).unwrap();
    let p = to_t_polynomial(&principal(&f), 2).unwrap();
    // (t−1)²(4t−1)
    assert_eq!(p, t_poly(&[-1, 6, -9, 4], int(1)));
}

#[test]
fn f03_hodge_value() {
    for r in 1..=3u32 {
        let h = hodge_extract(&store(r).get(0, 3).unwrap());
        assert_eq!(h.get(r, 0, &[(0, 0), (0, 0), (0, 0)]), rat(1, r as i64));
    }
}

#[test]
fn x_coefficients_reproduce_table() {
    let s = store(2);
    let table = s.table().clone();
    for (g, n) in [(0u32, 3usize), (1, 1), (1, 2), (0, 4)] {
        let f = s.get(g, n).unwrap();
        for d in 1..=10u32 {
            for mu in crate::combinat::partitions_exact(d, n) {
                assert_eq!(f.x_coefficient(&mu), table.h(2, g, &mu), "g={} mu={:?}", g, mu);
            }
        }
    }
}

#[test]
fn residue_class_support_and_bounds() {
    for r in 1..=3u32 {
        let s = store(r);
        for (g, n) in [(0u32, 3usize), (0, 4), (1, 1), (1, 2), (2, 1)] {
            let f = s.get(g, n).unwrap();
            for key in f.coeffs().keys() {
                assert_eq!(key.iter().map(|p| p.0).sum::<u32>() % r, 0);
                assert!(key.iter().map(|p| p.1).sum::<u32>() <= 3 * g + n as u32 - 3);
            }
        }
    }
}

#[test]
fn held_out_mismatch_is_reported() {
    let table = HurwitzTable::new();
    // Held-out point for (r, g, n) = (2, 1, 1) is m = 3, i.e. μ = 6.
    let key = HurwitzKey::new(2, 1, vec![6]);
    table.insert(key, int(1), Provenance::Cache).unwrap();
    match fit_free_energy(2, 1, 1, &table) {
        Err(FreeEnergyError::FitResidualNonzero { point, .. }) => assert_eq!(point, vec![3]),
        other => panic!("expected FitResidualNonzero, got {:?}", other.map(|_| ())),
    }
}

#[test]
fn unstable_fit_rejected() {
    assert!(matches!(fit_free_energy(2, 0, 2, &HurwitzTable::new()), Err(FreeEnergyError::Unstable { .. })));
}

#[test]
fn json_round_trip() {
    let f = store(3).get(0, 4).unwrap();
    let j = f.to_json();
    assert_eq!(j["r"], 3);
    assert!(j["basis"][0]["c"].as_str().unwrap().contains('/'));
    assert_eq!(XiBasisFreeEnergy::from_json(&j).unwrap(), *f);
}

#[test]
fn diff_recursion_small_cases() {
    for r in 1..=3u32 {
        let s = store(r);
        for (g, n) in [(0u32, 3usize), (1, 1), (0, 4), (1, 2)] {
            verify_diff_recursion(&s, g, n).unwrap_or_else(|e| panic!("r={} ({},{}): {}", r, g, n, e));
        }
    }
}

#[test]
fn diff_recursion_euler_characteristic_three() {
    for r in 1..=3u32 {
        let s = store(r);
        for (g, n) in [(2u32, 1usize), (1, 3)] {
            verify_diff_recursion(&s, g, n).unwrap_or_else(|e| panic!("r={} ({},{}): {}", r, g, n, e));
        }
    }
    for r in 1..=2u32 {
        verify_diff_recursion(&store(r), 0, 5).unwrap_or_else(|e| panic!("r={} (0,5): {}", r, e));
    }
}

#[test]
fn diff_recursion_detects_perturbation() {
    let s = store(2);
    let mut f = (*s.get(1, 1).unwrap()).clone();
    let c = f.coeff(&[(0, 1)]);
    f.set(vec![(0, 1)], c + int(1));
    s.insert(f);
    assert!(matches!(verify_diff_recursion(&s, 1, 1), Err(FreeEnergyError::IdentityFailure(_))));

    let s = store(2);
    let mut f = (*s.get(0, 3).unwrap()).clone();
    let c = f.coeff(&[(0, 0), (0, 0), (0, 0)]);
    f.set(vec![(0, 0), (0, 0), (0, 0)], c + int(1));
    s.insert(f);
    assert!(verify_diff_recursion(&s, 0, 4).is_err() || verify_diff_recursion(&s, 0, 3).is_err());
}

#[test]
fn one_point_low_genus() {
    for r in 1..=4u32 {
        let t = one_point_generating(r, 2);
        assert_eq!(t[&(0, 0)], rat(1, r as i64));
        assert_eq!(t[&(1, 0)], rat(1, 24 * r as i64));
        assert_eq!(t[&(1, 1)], rat(r as i64, 24));
    }
}

#[test]
fn one_point_matches_fitted_hodge() {
    for r in 1..=3u32 {
        let s = store(r);
        let gen = one_point_generating(r, 2);
        for g in 1..=2 {
            let h = hodge_extract(&s.get(g, 1).unwrap());
            for (k, v) in one_point_from_hodge(&h, r, g) {
                assert_eq!(v, gen[&k], "r={} (g,j)={:?}", r, k);
            }
        }
    }
}

#[test]
fn t_polynomial_errors() {
    let z = RationalExpr::var(1, 0);
    assert!(matches!(to_t_polynomial(&z, 2), Err(FreeEnergyError::NotAFunctionOfZr(_))));
    let other = RationalExpr::one(1).div_poly(&SparsePoly::var(1, 0).sub(&SparsePoly::one(1))).unwrap();
    assert!(matches!(to_t_polynomial(&other, 2), Err(FreeEnergyError::NotAFunctionOfZr(_))));
    // z^r = (t − 1)/(r t) has a t^{−1} term.
    let zr = RationalExpr::from_poly(SparsePoly::monomial(1, vec![2], int(1)));
    assert!(matches!(to_t_polynomial(&zr, 2), Err(FreeEnergyError::NotPolynomialInT(_))));
    assert!(to_t_laurent(&zr, 2).is_ok());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn evaluation_is_symmetric(r in 1u32..=3, perm in Just(vec![0usize, 1, 2]).prop_shuffle()) {
        let s = store(r);
        let f = s.get(0, 3).unwrap();
        let base = f.evaluate();
        let permuted = f.eval_at(3, &perm, &[false; 3]);
        prop_assert_eq!(base, permuted);
    }

    #[test]
    fn fitted_x_coefficients_agree(r in 1u32..=3, a in 1u32..=9, b in 1u32..=9) {
        let s = store(r);
        let f = s.get(1, 2).unwrap();
        prop_assert_eq!(f.x_coefficient(&[a, b]), s.table().h(r, 1, &[a, b]));
    }
}

pub(crate) fn paper_f31(r: i64) -> TPoly {
    let p = |e: u32| r.pow(e);
    t_poly(
        &[
            0,
            0,
            0,
            0,
            0,
            -2232,
            6 * (-320 * p(6) - 840 * p(4) - 2940 * p(2) + 2387),
            12 * (-1128 * p(6) - 2646 * p(4) + 12789 * p(2) - 2635),
            7 * (15416 * p(6) + 100596 * p(4) - 69384 * p(2) + 4185),
            35 * (31016 * p(6) - 95340 * p(4) + 20580 * p(2) - 279),
            231 * p(2) * (-43156 * p(4) + 31430 * p(2) - 2205),
            35 * p(2) * (914912 * p(4) - 235116 * p(2) + 3969),
            35035 * p(4) * (-1516 * p(2) + 135),
            24255 * p(4) * (2012 * p(2) - 45),
            -23648625 * p(6),
            4729725 * p(6),
        ],
        rat(p(4), 2903040),
    )
}

#[test]
fn f31_t_polynomial() {
    for r in 1..=3i64 {
        let f = store(r as u32).get(3, 1).unwrap();
        assert_eq!(to_t_polynomial(&f.evaluate(), r as u32).unwrap(), paper_f31(r), "r={}", r);
    }
}

/// `c z₁z₂z₃ P / ∏(1 − r z_i^r)` for the printed genus-zero three-point forms.
pub(crate) fn printed_f03(r: u32) -> RationalExpr {
    let v = |i: usize| SparsePoly::var(3, i);
    let prod = v(0).mul(&v(1)).mul(&v(2));
    let p = match r {
        2 => v(0).add(&v(1)).add(&v(2)).add(&prod.scale(&int(2))).scale(&int(8)),
        3 => {
            let mut s = SparsePoly::one(3).add(&prod.scale(&int(3))).add(&prod.mul(&prod).scale(&int(9)));
            for i in 0..3 {
                for j in 0..3 {
                    if i != j {
                        s = s.add(&v(i).mul(&v(i)).mul(&v(j)).scale(&int(3)));
                    }
                }
            }
            s.scale(&int(9))
        }
        _ => unreachable!(),
    };
    let mut out = RationalExpr::from_poly(prod.mul(&p));
    for i in 0..3 {
        let mut e = vec![0; 3];
        e[i] = r;
        out = out.div_poly(&SparsePoly::one(3).sub(&SparsePoly::monomial(3, e, int(r as i64)))).unwrap();
    }
    out
}

#[test]
fn f03_is_printed_form_over_r() {
    for r in 2..=3u32 {
        let f = store(r).get(0, 3).unwrap().evaluate();
        assert_eq!(f, printed_f03(r).scale(&rat(1, r as i64)), "r={}", r);
    }
}
