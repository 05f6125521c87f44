use std::sync::Arc;
use std::time::Instant;

use orbhurwitz::exact_algebra::{int, rat, Rational, RationalExpr, SparsePoly};
use orbhurwitz::free_energy::{
    hodge_extract, one_point_from_hodge, one_point_generating, to_t_polynomial, verify_diff_recursion, verify_xi_table, FreeEnergyStore,
    TPoly,
};
use orbhurwitz::hurwitz_numbers::{compare_caj_oracle, HurwitzTable};
use orbhurwitz::quantum_curve::{build_partition, verify_commutator, verify_operator_p, verify_operator_q, verify_sm_ode, CheckReport};
use orbhurwitz::spectral_recursion::{airy_coordinates, deck_series, eo_step, phi_h_decompose, residue_lemma_check, LocalChart};

type Outcome = Result<String, String>;

const CASES: [(u32, usize); 5] = [(0, 3), (0, 4), (1, 1), (1, 2), (2, 1)];
const ORACLE_BUDGET: u128 = 200_000_000;

fn store(r: u32, table: &Arc<HurwitzTable>) -> FreeEnergyStore {
    FreeEnergyStore::new(r, table.clone())
}

fn t_poly(cs: &[i64], scale: Rational) -> TPoly {
    TPoly::dense(&cs.iter().map(|&c| int(c)).collect::<Vec<_>>()).scale(&scale)
}

fn f11(r: i64) -> TPoly {
    t_poly(&[1, -1, -r * r, r * r], rat(1, 24))
}

fn f21(r: i64) -> TPoly {
    let r2 = r * r;
    let r4 = r2 * r2;
    t_poly(
        &[0, 0, 0, 14, 12 * r4 + 60 * r2 - 35, 68 * r4 - 260 * r2 + 21, 350 * r2 * (1 - 2 * r2), 10 * r2 * (167 * r2 - 15), -1575 * r4, 525 * r4],
        rat(r2, 5760),
    )
}

fn f31(r: i64) -> TPoly {
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

/// Genus-zero three-point forms `z₁z₂z₃ P / ∏(1 − r z_i^r)` for r = 2, 3.
fn f03(r: u32) -> RationalExpr {
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

fn report(rep: Result<CheckReport, impl std::fmt::Display>, what: &str) -> Result<(), String> {
    match rep {
        Ok(c) if c.passed() => Ok(()),
        Ok(c) => Err(format!("{}: {}", what, c.to_json())),
        Err(e) => Err(format!("{}: {}", what, e)),
    }
}

fn oracle_equivalence(table: &Arc<HurwitzTable>) -> Outcome {
    let mut total = 0;
    for r in 1..=3 {
        total += compare_caj_oracle(r, 6, 4, table, ORACLE_BUDGET).map_err(|e| format!("r={}: {}", r, e))?;
    }
    Ok(format!("{} keys with r ≤ 3, |μ| ≤ 6, s ≤ 4", total))
}

fn closed_forms(table: &Arc<HurwitzTable>) -> Outcome {
    let t_of = |s: &FreeEnergyStore, g, n, r| to_t_polynomial(&s.get(g, n).map_err(|e| e.to_string())?.evaluate(), r).map_err(|e| e.to_string());
    for r in 1..=5u32 {
        let p = t_of(&store(r, table), 1, 1, r)?;
        if p != f11(r as i64) {
            return Err(format!("F(1,1) r={}: {}", r, p));
        }
    }
    for r in 1..=3u32 {
        let s = store(r, table);
        let p = t_of(&s, 2, 1, r)?;
        if p != f21(r as i64) {
            return Err(format!("F(2,1) r={}: {}", r, p));
        }
        let p = t_of(&s, 3, 1, r)?;
        if p != f31(r as i64) {
            return Err(format!("F(3,1) r={}: {}", r, p));
        }
    }
    let mut bad = Vec::new();
    for r in 2..=3u32 {
        let got = store(r, table).get(0, 3).map_err(|e| e.to_string())?.evaluate();
        let printed = f03(r);
        if got != printed {
            let ratio = if got == printed.scale(&rat(1, r as i64)) { format!("fitted = printed/{}", r) } else { "no simple relation".to_string() };
            bad.push(format!("F(0,3) r={} differs from the closed form ({})", r, ratio));
        }
    }
    if bad.is_empty() {
        Ok("F(1,1) r ≤ 5, F(2,1) and F(3,1) r ≤ 3, F(0,3) r = 2, 3".into())
    } else {
        Err(format!(
            "F(1,1), F(2,1), F(3,1) match; {}. The closed form gives H(2;0;1,1,2) = 8 and H(3;0;1,1,1) = 9, while both cut-and-join and the monodromy count give 4 and 3",
            bad.join("; ")
        ))
    }
}

fn one_point(table: &Arc<HurwitzTable>) -> Outcome {
    let mut checked = 0;
    for r in 1..=3u32 {
        let gen = one_point_generating(r, 3);
        let s = store(r, table);
        for g in 1..=3 {
            let h = hodge_extract(&*s.get(g, 1).map_err(|e| e.to_string())?);
            for (k, v) in one_point_from_hodge(&h, r, g) {
                if gen.get(&k) != Some(&v) {
                    return Err(format!("r={} (g,j)={:?}: fitted {} expected {:?}", r, k, v, gen.get(&k)));
                }
                checked += 1;
            }
        }
        if gen[&(1, 1)] != rat(r as i64, 24) || gen[&(1, 0)] != rat(1, 24 * r as i64) {
            return Err(format!("r={}: low-genus values", r));
        }
    }
    Ok(format!("{} coefficients for g ≤ 3, r ≤ 3", checked))
}

fn diff_recursion(table: &Arc<HurwitzTable>) -> Outcome {
    for r in 1..=3u32 {
        let s = store(r, table);
        for (g, n) in CASES {
            verify_diff_recursion(&s, g, n).map_err(|e| format!("r={} ({},{}): {}", r, g, n, e))?;
        }
    }
    Ok("5 cases for r ≤ 3".into())
}

fn eo(table: &Arc<HurwitzTable>) -> Outcome {
    for r in 1..=3u32 {
        let s = store(r, table);
        for (g, n) in CASES {
            eo_step(&s, g, n).map_err(|e| format!("r={} ({},{}): {}", r, g, n, e))?;
        }
    }
    Ok("5 cases for r ≤ 3, stable under N vs N+4".into())
}

fn local_toolkit() -> Outcome {
    let coeffs = |s: &orbhurwitz::exact_algebra::LaurentSeries<Rational>, from: i64, to: i64| -> Result<Vec<Rational>, String> {
        (from..to).map(|k| s.coeff(k).map_err(|e| e.to_string())).collect()
    };
    let q = |cs: &[(i64, i64)]| cs.iter().map(|&(a, b)| rat(a, b)).collect::<Vec<_>>();
    let deck = coeffs(&deck_series(10), 1, 9)?;
    if deck != q(&[(-1, 1), (-2, 3), (-4, 9), (-44, 135), (-104, 405), (-40, 189), (-7648, 42525), (-2848, 18225)]) {
        return Err(format!("deck {:?}", deck));
    }
    let (v, psi) = airy_coordinates(8);
    if coeffs(&v, 1, 5)? != q(&[(1, 1), (1, 3), (7, 36), (73, 540)]) {
        return Err("v series".into());
    }
    if coeffs(&psi, 1, 5)? != q(&[(1, 1), (-1, 3), (1, 36), (1, 270)]) {
        return Err("ψ series".into());
    }
    for r in 1..=3u32 {
        let chart = LocalChart::new(r, 16);
        for k in 0..r {
            for level in 0..=3 {
                let p = phi_h_decompose(&chart, k, level).map_err(|e| e.to_string())?;
                let w = |s: &orbhurwitz::exact_algebra::LaurentSeries<Rational>| s.truncate(12).valuation();
                if w(&p.phi.even_part()).is_some() || w(&p.h.odd_part()).is_some() || w(&p.e.odd_part()).is_some() {
                    return Err(format!("parity r={} k={} n={}", r, k, level));
                }
                if p.phi.valuation().is_some_and(|v| v < -(2 * level as i64 + 1)) {
                    return Err(format!("pole order r={} k={} n={}", r, k, level));
                }
            }
        }
    }
    Ok("deck, v, ψ series; φ/h parity and poles for n ≤ 3, k < r ≤ 3".into())
}

fn residue_lemma() -> Outcome {
    for r in 1..=3u32 {
        for seed in 0..10 {
            let rep = residue_lemma_check(r, seed).map_err(|e| format!("r={} seed={}: {}", r, seed, e))?;
            if !rep.holds() {
                return Err(format!("r={} seed={}: {:?}", r, seed, rep));
            }
        }
    }
    Ok("10 seeded samples per r ≤ 3".into())
}

fn quantum(table: &Arc<HurwitzTable>) -> Outcome {
    for r in 1..=3u32 {
        let z = build_partition(r, 4 * r, 5, table).map_err(|e| format!("r={}: {}", r, e))?;
        report(verify_operator_p(&z), &format!("P r={}", r))?;
        report(verify_operator_q(&z), &format!("Q r={}", r))?;
        report(verify_commutator(r, 4 * r, 5), &format!("[P,Q] r={}", r))?;
        report(verify_sm_ode(&store(r, table), 4), &format!("S_m r={}", r))?;
    }
    Ok("P, Q, [P,Q] on d ≤ 4r, ħ ≤ 5; S_m ODE m ≤ 4; r ≤ 3".into())
}

fn xi_table() -> Outcome {
    let mut n = 0;
    for r in 1..=5 {
        n += verify_xi_table(r).map_err(|e| format!("r={}: {}", r, e))?;
    }
    Ok(format!("{} entries for r ≤ 5", n))
}

#[test]
fn acceptance() {
    let table = Arc::new(HurwitzTable::new());
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome>)> = vec![
        ("oracle equivalence", Box::new(|| oracle_equivalence(&table))),
        ("closed forms", Box::new(|| closed_forms(&table))),
        ("one-point Hodge", Box::new(|| one_point(&table))),
        ("differential recursion", Box::new(|| diff_recursion(&table))),
        ("spectral recursion", Box::new(|| eo(&table))),
        ("local toolkit", Box::new(local_toolkit)),
        ("residue lemma", Box::new(residue_lemma)),
        ("quantum curve", Box::new(|| quantum(&table))),
        ("xi table", Box::new(xi_table)),
    ];
    println!();
    let mut failed = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = run();
        let secs = start.elapsed().as_secs_f64();
        match out {
            Ok(msg) => println!("PASS {} {} ({:.1}s): {}", i + 1, name, secs, msg),
            Err(msg) => {
                println!("FAIL {} {} ({:.1}s): {}", i + 1, name, secs, msg);
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {:?}", failed);
}
