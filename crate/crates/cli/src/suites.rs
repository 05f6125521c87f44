use std::sync::Arc;

use orbhurwitz::free_energy::{verify_diff_recursion, verify_xi_table, FreeEnergyError, FreeEnergyStore};
use orbhurwitz::hurwitz_numbers::{compare_caj_oracle, HurwitzError, HurwitzTable};
use orbhurwitz::quantum_curve::{
    build_partition, verify_commutator, verify_operator_p, verify_operator_q, verify_sm_ode, CheckReport, QuantumCurveError, Window,
};
use orbhurwitz::spectral_recursion::{default_order, eo_step, residue_lemma_check, LocalChart, SpectralError};
use serde_json::{json, Value};

use crate::commands::Bounds;
use crate::{Format, Outcome, Suite, VerifyArgs};

const ORACLE_BUDGET: u128 = 200_000_000;
const DEFAULT_CASES: [(u32, usize); 5] = [(0, 3), (0, 4), (1, 1), (1, 2), (2, 1)];

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
enum Status {
    Pass,
    Fail,
    /// An internal invariant broke; the run exits with code 3.
    Breach,
}

struct Case {
    suite: &'static str,
    r: u32,
    case: String,
    status: Status,
    detail: Option<Value>,
}

impl Case {
    fn json(&self) -> Value {
        let status = match self.status {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Breach => "invariant-breach",
        };
        let mut v = json!({"suite": self.suite, "r": self.r, "case": self.case, "status": status});
        if let Some(d) = &self.detail {
            v["detail"] = d.clone();
        }
        v
    }
}

fn from_result<E: std::fmt::Display>(suite: &'static str, r: u32, case: String, res: Result<Value, (Status, E)>) -> Case {
    match res {
        Ok(detail) => Case { suite, r, case, status: Status::Pass, detail: (!detail.is_null()).then_some(detail) },
        Err((status, e)) => Case { suite, r, case, status, detail: Some(json!(e.to_string())) },
    }
}

fn fe_status(e: &FreeEnergyError) -> Status {
    match e {
        FreeEnergyError::IdentityFailure(_) => Status::Fail,
        _ => Status::Breach,
    }
}

fn caj_oracle(r: u32, a: &VerifyArgs, table: &HurwitzTable) -> Vec<Case> {
    let dmax = a.dmax.unwrap_or(6);
    let res = compare_caj_oracle(r, dmax, a.smax, table, ORACLE_BUDGET).map(|n| json!({"compared": n})).map_err(|e| {
        let st = match e {
            HurwitzError::OracleMismatch { .. } => Status::Fail,
            _ => Status::Breach,
        };
        (st, e)
    });
    vec![from_result("caj-oracle", r, format!("|mu| <= {}, s <= {}", dmax, a.smax), res)]
}

fn cases(a: &VerifyArgs) -> Vec<(u32, usize)> {
    if a.gn.is_empty() {
        DEFAULT_CASES.to_vec()
    } else {
        a.gn.clone()
    }
}

fn diff_recursion(r: u32, a: &VerifyArgs, table: &Arc<HurwitzTable>) -> Vec<Case> {
    let store = FreeEnergyStore::new(r, table.clone());
    cases(a)
        .into_iter()
        .map(|(g, n)| {
            let res = verify_diff_recursion(&store, g, n).map(|_| Value::Null).map_err(|e| (fe_status(&e), e));
            from_result("diff-recursion", r, format!("(g, n) = ({}, {})", g, n), res)
        })
        .collect()
}

fn eo(r: u32, a: &VerifyArgs, table: &Arc<HurwitzTable>) -> Vec<Case> {
    let store = FreeEnergyStore::new(r, table.clone());
    let list = cases(a);
    if a.dump {
        let order = list.iter().map(|&(g, n)| default_order(g, n)).max().unwrap_or(8);
        print!("{}", LocalChart::new(r, order).dump());
    }
    list.into_iter()
        .map(|(g, n)| {
            let res = eo_step(&store, g, n).map(|_| Value::Null).map_err(|e| {
                let st = match &e {
                    SpectralError::GaloisAsymmetry(_) | SpectralError::Unsupported(_) | SpectralError::Algebra(_) => Status::Breach,
                    SpectralError::FreeEnergy(fe) => fe_status(fe),
                    _ => Status::Fail,
                };
                (st, e)
            });
            from_result("eo", r, format!("(g, n) = ({}, {})", g, n), res)
        })
        .collect()
}

fn quantum_case(r: u32, name: &str, window: Window, res: Result<CheckReport, QuantumCurveError>) -> Case {
    match res {
        Ok(rep) => Case { suite: "quantum", r, case: name.into(), status: Status::Pass, detail: Some(rep.to_json()) },
        Err(QuantumCurveError::IdentityFailure { check, witness }) => Case {
            suite: "quantum",
            r,
            case: name.into(),
            status: Status::Fail,
            detail: Some(CheckReport::fail(&check, r, window, witness).to_json()),
        },
        Err(e) => Case { suite: "quantum", r, case: name.into(), status: Status::Breach, detail: Some(json!(e.to_string())) },
    }
}

fn quantum(r: u32, a: &VerifyArgs, table: &Arc<HurwitzTable>) -> Vec<Case> {
    let dmax = a.dmax.unwrap_or(4 * r);
    let window = Window { d_max: Some(dmax), e_min: -((dmax / r) as i64), e_max: a.hbar };
    let mut out = Vec::new();
    match build_partition(r, dmax, a.hbar, table) {
        Ok(z) => {
            out.push(quantum_case(r, "operator-P", window.clone(), verify_operator_p(&z)));
            out.push(quantum_case(r, "operator-Q", window.clone(), verify_operator_q(&z)));
        }
        Err(e) => out.push(quantum_case(r, "partition", window.clone(), Err(e))),
    }
    let cw = Window { d_max: Some(dmax), e_min: -1, e_max: a.hbar };
    out.push(quantum_case(r, "commutator", cw, verify_commutator(r, dmax, a.hbar)));
    let store = FreeEnergyStore::new(r, table.clone());
    let sw = Window { d_max: None, e_min: 0, e_max: a.m_max as i64 };
    out.push(quantum_case(r, "sm-ode", sw, verify_sm_ode(&store, a.m_max)));
    out
}

fn xi(r: u32) -> Vec<Case> {
    let res = verify_xi_table(r).map(|n| json!({"entries": n})).map_err(|e| (Status::Fail, e));
    vec![from_result("xi", r, "m <= 2, k <= 2".into(), res)]
}

fn residue_lemma(r: u32, a: &VerifyArgs) -> Vec<Case> {
    (0..a.samples)
        .map(|i| {
            let seed = a.seed.wrapping_add(i);
            let res = match residue_lemma_check(r, seed) {
                Ok(rep) if rep.holds() => Ok(Value::Null),
                Ok(rep) => Err((Status::Fail, format!("residue sum {} vs principal part {}", rep.residue_sum, rep.principal_part))),
                Err(e) => Err((Status::Breach, e.to_string())),
            };
            from_result("residue-lemma", r, format!("seed {}", seed), res)
        })
        .collect()
}

fn check_bounds(a: &VerifyArgs, bounds: &Bounds, rs: &[u32]) -> Result<(), Outcome> {
    for &r in rs {
        bounds.r(r)?;
        bounds.degree(a.dmax.unwrap_or(0))?;
        if a.m_max > 0 {
            // S_{m+1} needs the free energies with 2g − 2 + n = m
            bounds.level(1, a.m_max as usize)?;
        }
    }
    for &(g, n) in &a.gn {
        bounds.level(g, n)?;
    }
    Ok(())
}

pub fn verify(a: &VerifyArgs, format: Format, bounds: &Bounds, table: &Arc<HurwitzTable>) -> Outcome {
    let rs: Vec<u32> = a.r.map_or(vec![1, 2, 3], |r| vec![r]);
    if let Err(o) = check_bounds(a, bounds, &rs) {
        return o;
    }
    let suites: Vec<Suite> = match a.suite {
        Suite::All => vec![Suite::Xi, Suite::CajOracle, Suite::ResidueLemma, Suite::DiffRecursion, Suite::Eo, Suite::Quantum],
        s => vec![s],
    };
    let mut results = Vec::new();
    for s in suites {
        for &r in &rs {
            results.extend(match s {
                Suite::CajOracle => caj_oracle(r, a, table),
                Suite::DiffRecursion => diff_recursion(r, a, table),
                Suite::Eo => eo(r, a, table),
                Suite::Quantum => quantum(r, a, table),
                Suite::Xi => xi(r),
                Suite::ResidueLemma => residue_lemma(r, a),
                Suite::All => unreachable!(),
            });
        }
    }
    for c in &results {
        match format {
            Format::Json => println!("{}", c.json()),
            Format::Text => {
                let tag = match c.status {
                    Status::Pass => "PASS",
                    Status::Fail => "FAIL",
                    Status::Breach => "BREACH",
                };
                match (&c.status, &c.detail) {
                    (Status::Pass, _) | (_, None) => println!("{} {} r={} {}", tag, c.suite, c.r, c.case),
                    (_, Some(d)) => println!("{} {} r={} {}: {}", tag, c.suite, c.r, c.case, d),
                }
            }
        }
    }
    if results.iter().any(|c| c.status == Status::Breach) {
        Outcome::Invariant("see report".into())
    } else if results.iter().any(|c| c.status == Status::Fail) {
        Outcome::Failure
    } else {
        Outcome::Pass
    }
}
