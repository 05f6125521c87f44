use super::store::FreeEnergyStore;
use super::unstable::unstable_f;
use super::FreeEnergyError;
use crate::exact_algebra::{int, rat, RationalExpr, SparsePoly};

fn crit(nvars: usize, i: usize, r: u32) -> SparsePoly {
    let mut e = vec![0; nvars];
    e[i] = r;
    SparsePoly::one(nvars).sub(&SparsePoly::monomial(nvars, e, int(r as i64)))
}

/// `z_i² / (1 − r z_i^r)²`.
fn line_weight(nvars: usize, i: usize, r: u32) -> RationalExpr {
    let mut e = vec![0; nvars];
    e[i] = 2;
    let c = crit(nvars, i, r);
    RationalExpr::from_poly(SparsePoly::monomial(nvars, e, int(1)))
        .div_poly(&c)
        .and_then(|x| x.div_poly(&c))
        .expect("nonzero")
}

/// `∂_{z_i} F_{g,n}` with position 0 at `i` and the rest at `others`.
fn d_first(store: &FreeEnergyStore, g: u32, nvars: usize, i: usize, others: &[usize]) -> Result<RationalExpr, FreeEnergyError> {
    let f = store.get(g, others.len() + 1)?;
    let mut vars = vec![i];
    vars.extend_from_slice(others);
    let mut deriv = vec![false; vars.len()];
    deriv[0] = true;
    Ok(f.eval_at(nvars, &vars, &deriv))
}

/// `(2g−2+n + (1/r) Σ z_i ∂_i) F_{g,n}`.
fn lhs(store: &FreeEnergyStore, g: u32, n: usize) -> Result<RationalExpr, FreeEnergyError> {
    let r = store.r;
    let f = store.get(g, n)?;
    let vars: Vec<usize> = (0..n).collect();
    let mut out = f.evaluate().scale(&int(2 * g as i64 - 2 + n as i64));
    for i in 0..n {
        let mut deriv = vec![false; n];
        deriv[i] = true;
        let zi = SparsePoly::var(n, i);
        out = out.add(&f.eval_at(n, &vars, &deriv).mul_poly(&zi).scale(&rat(1, r as i64)));
    }
    Ok(out)
}

/// Right side at `(0,3)`: `2 + Σ_i [R_ij R_ik − R_ij − R_ik]` with
/// `R_ij = z_i/((1−r z_i^r)(z_i−z_j)) − r z_i^r/(1−r z_i^r)`.
fn rhs_03(r: u32) -> RationalExpr {
    let n = 3;
    let rr = |i: usize, j: usize| -> RationalExpr {
        let c = crit(n, i, r);
        let diff = SparsePoly::var(n, i).sub(&SparsePoly::var(n, j));
        let mut e = vec![0; n];
        e[i] = r;
        let a = RationalExpr::from_poly(SparsePoly::var(n, i)).div_poly(&c).and_then(|x| x.div_poly(&diff)).expect("nonzero");
        let b = RationalExpr::from_poly(SparsePoly::monomial(n, e, int(r as i64))).div_poly(&c).expect("nonzero");
        a.sub(&b)
    };
    let mut out = RationalExpr::constant(n, int(2));
    for i in 0..n {
        let o: Vec<usize> = (0..n).filter(|&t| t != i).collect();
        let (a, b) = (rr(i, o[0]), rr(i, o[1]));
        out = out.add(&a.mul(&b)).sub(&a).sub(&b);
    }
    out
}

fn rhs(store: &FreeEnergyStore, g: u32, n: usize) -> Result<RationalExpr, FreeEnergyError> {
    let r = store.r;
    if (g, n) == (0, 3) {
        return Ok(rhs_03(r));
    }
    let mut out = RationalExpr::zero(n);

    // Join-type terms from F_{g,n−1}.
    if n >= 2 && 2 * g as i64 - 2 + n as i64 - 1 > 0 {
        for i in 0..n {
            for j in i + 1..n {
                let without = |skip: usize, lead: usize| -> Vec<usize> { (0..n).filter(|&t| t != skip && t != lead).collect() };
                let a_ij = d_first(store, g, n, i, &without(j, i))?;
                let a_ji = d_first(store, g, n, j, &without(i, j))?;
                let ci = crit(n, i, r);
                let cj = crit(n, j, r);
                let d = a_ij.div_poly(&ci)?.div_poly(&ci)?.sub(&a_ji.div_poly(&cj)?.div_poly(&cj)?);
                let diff = SparsePoly::var(n, i).sub(&SparsePoly::var(n, j));
                let q = d.numerator().divexact(&diff).map_err(|_| {
                    FreeEnergyError::IdentityFailure(format!("antisymmetric term ({}, {}) not divisible by z_{}-z_{}", i, j, i, j))
                })?;
                let mut e = vec![0; n];
                e[i] = 1;
                e[j] = 1;
                let term = d.with_numerator(q.mul_monomial(&e, &int(1)));
                out = out.add(&term);
            }
        }
    }

    // Genus-reducing terms from F_{g−1,n+1} on the diagonal.
    if g >= 1 {
        for i in 0..n {
            let inner = if (g, n) == (1, 1) {
                unstable_f(r).d2f02_diagonal
            } else {
                let f = store.get(g - 1, n + 1)?;
                let mut vars = vec![i, i];
                vars.extend((0..n).filter(|&t| t != i));
                let mut deriv = vec![false; n + 1];
                deriv[0] = true;
                deriv[1] = true;
                f.eval_at(n, &vars, &deriv)
            };
            out = out.add(&inner.mul(&line_weight(n, i, r)).scale(&rat(1, 2)));
        }
    }

    // Stable splittings.
    for i in 0..n {
        let others: Vec<usize> = (0..n).filter(|&t| t != i).collect();
        let mut acc = RationalExpr::zero(n);
        for mask in 0u32..(1 << others.len()) {
            let part_i: Vec<usize> = others.iter().enumerate().filter(|(b, _)| mask >> b & 1 == 1).map(|(_, &v)| v).collect();
            let part_j: Vec<usize> = others.iter().enumerate().filter(|(b, _)| mask >> b & 1 == 0).map(|(_, &v)| v).collect();
            for g1 in 0..=g {
                let g2 = g - g1;
                let stable = |gg: u32, m: usize| 2 * gg as i64 - 2 + m as i64 + 1 > 0;
                if !stable(g1, part_i.len()) || !stable(g2, part_j.len()) {
                    continue;
                }
                let a = d_first(store, g1, n, i, &part_i)?;
                let b = d_first(store, g2, n, i, &part_j)?;
                acc = acc.add(&a.mul(&b));
            }
        }
        if !acc.is_zero() {
            out = out.add(&acc.mul(&line_weight(n, i, r)).scale(&rat(1, 2)));
        }
    }
    Ok(out)
}

/// Both sides of the differential recursion for `F_{g,n}`.
pub fn diff_recursion_sides(store: &FreeEnergyStore, g: u32, n: usize) -> Result<(RationalExpr, RationalExpr), FreeEnergyError> {
    if 2 * g as i64 - 2 + n as i64 <= 0 {
        return Err(FreeEnergyError::Unstable { g, n });
    }
    Ok((lhs(store, g, n)?, rhs(store, g, n)?))
}

/// Checks the differential recursion as a polynomial identity after
/// clearing denominators; reports the first mismatching monomial.
pub fn verify_diff_recursion(store: &FreeEnergyStore, g: u32, n: usize) -> Result<(), FreeEnergyError> {
    let (l, r) = diff_recursion_sides(store, g, n)?;
    let (nl, nr, _) = l.over_common(&r);
    let delta = nl.sub(&nr);
    if let Some((exps, _)) = delta.terms().next() {
        return Err(FreeEnergyError::IdentityFailure(format!(
            "(g, n) = ({}, {}), r = {}: monomial {:?} has lhs {} and rhs {}",
            g,
            n,
            store.r,
            exps,
            nl.coeff(exps),
            nr.coeff(exps)
        )));
    }
    Ok(())
}
