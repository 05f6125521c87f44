use std::sync::Arc;

use orbhurwitz::exact_algebra::format_rational;
use orbhurwitz::free_energy::{hodge_extract, one_point_from_hodge, one_point_generating, FreeEnergyError, FreeEnergyStore};
use orbhurwitz::hurwitz_numbers::{cache_load, cache_store, hurwitz_table, HurwitzError, HurwitzTable};
use orbhurwitz::quantum_curve::principal_specialize;
use serde_json::json;

use crate::{suites, CacheAction, Cli, Command, Coords, FreeEnergyArgs, Format, HodgeArgs, HurwitzArgs, Outcome};

pub const R_BOUND: u32 = 3;
pub const LEVEL_BOUND: i64 = 4;
pub const DEGREE_BOUND: u32 = 12;

/// Desk-scale guard shared by every command.
pub struct Bounds {
    pub unbounded: bool,
}

impl Bounds {
    pub fn r(&self, r: u32) -> Result<(), Outcome> {
        if !self.unbounded && r > R_BOUND {
            return Err(Outcome::Usage(format!("r = {} exceeds the default bound {}; pass --unbounded", r, R_BOUND)));
        }
        Ok(())
    }

    pub fn level(&self, g: u32, n: usize) -> Result<(), Outcome> {
        let level = 2 * g as i64 - 2 + n as i64;
        if level <= 0 {
            return Err(Outcome::Usage(format!(
                "(g, n) = ({}, {}) is unstable; its closed forms are F_{{0,1}} = z^r/r − z^{{2r}}/2 and \
                 F_{{0,2}}(z, z) = −log(1 − r z^r) − z^r",
                g, n
            )));
        }
        if !self.unbounded && level > LEVEL_BOUND {
            return Err(Outcome::Usage(format!("2g − 2 + n = {} exceeds the default bound {}; pass --unbounded", level, LEVEL_BOUND)));
        }
        Ok(())
    }

    pub fn degree(&self, d: u32) -> Result<(), Outcome> {
        if !self.unbounded && d > DEGREE_BOUND {
            return Err(Outcome::Usage(format!("degree {} exceeds the default bound {}; pass --unbounded", d, DEGREE_BOUND)));
        }
        Ok(())
    }
}

pub fn free_energy_outcome(e: FreeEnergyError) -> Outcome {
    match e {
        FreeEnergyError::Unstable { g, n } => Outcome::Usage(format!("(g, n) = ({}, {}) is unstable", g, n)),
        other => Outcome::Invariant(other.to_string()),
    }
}

pub fn run(cli: &Cli) -> Outcome {
    let table = match &cli.cache {
        Some(p) if p.exists() => match cache_load(p) {
            Ok(t) => t,
            Err(e @ HurwitzError::CorruptCache { .. }) => return Outcome::Invariant(e.to_string()),
            Err(e) => return Outcome::Usage(e.to_string()),
        },
        _ => HurwitzTable::new(),
    };
    let table = Arc::new(table);
    let bounds = Bounds { unbounded: cli.unbounded };
    let outcome = match &cli.command {
        Command::Hurwitz(a) => hurwitz(a, cli.format, &bounds, &table),
        Command::FreeEnergy(a) => free_energy(a, cli.format, &bounds, &table),
        Command::Verify(a) => suites::verify(a, cli.format, &bounds, &table),
        Command::Hodge(a) => hodge(a, &bounds, &table),
        Command::Cache(a) => match &a.action {
            CacheAction::Fill { r, dmax, gmax } => cache_fill(*r, *dmax, *gmax, &bounds, &table),
            CacheAction::Stats => {
                println!("{}", table.len());
                Outcome::Pass
            }
        },
    };
    if let Some(p) = &cli.cache {
        if let Err(e) = cache_store(&table, p) {
            return Outcome::Usage(format!("cannot write cache {}: {}", p.display(), e));
        }
    }
    outcome
}

fn hurwitz(a: &HurwitzArgs, format: Format, bounds: &Bounds, table: &HurwitzTable) -> Outcome {
    if let Err(o) = bounds.r(a.r) {
        return o;
    }
    if a.table {
        let (n, dmax) = (a.n.expect("required by clap"), a.dmax.expect("required by clap"));
        if let Err(o) = bounds.degree(dmax) {
            return o;
        }
        let rows = hurwitz_table(a.r, a.g, n, dmax, table);
        match format {
            Format::Text => {
                for (mu, v) in rows {
                    let mu: Vec<String> = mu.iter().map(|m| m.to_string()).collect();
                    println!("{} {}", mu.join(","), format_rational(&v));
                }
            }
            Format::Json => {
                let rows: Vec<_> = rows.iter().map(|(mu, v)| json!({"mu": mu, "value": format_rational(v)})).collect();
                println!("{}", json!({"r": a.r, "g": a.g, "n": n, "d_max": dmax, "values": rows}));
            }
        }
        return Outcome::Pass;
    }
    if a.mu.iter().any(|&m| m == 0) {
        return Outcome::Usage("parts of μ must be positive".into());
    }
    if let Err(o) = bounds.degree(a.mu.iter().sum()) {
        return o;
    }
    let v = table.h(a.r, a.g, &a.mu);
    match format {
        Format::Text => println!("{}", format_rational(&v)),
        Format::Json => println!("{}", json!({"r": a.r, "g": a.g, "mu": a.mu, "value": format_rational(&v)})),
    }
    Outcome::Pass
}

fn free_energy(a: &FreeEnergyArgs, format: Format, bounds: &Bounds, table: &Arc<HurwitzTable>) -> Outcome {
    if let Err(o) = bounds.r(a.r).and_then(|_| bounds.level(a.g, a.n)) {
        return o;
    }
    let store = FreeEnergyStore::new(a.r, table.clone());
    let f = match store.get(a.g, a.n) {
        Ok(f) => f,
        Err(e) => return free_energy_outcome(e),
    };
    match a.coords {
        Coords::Xi => println!("{}", serde_json::to_string_pretty(&f.to_json()).expect("plain data")),
        Coords::T => {
            let p = match principal_specialize(&f) {
                Ok(p) => p,
                Err(e) => return Outcome::Invariant(e.to_string()),
            };
            match format {
                Format::Text => println!("{}", p.value),
                Format::Json => println!("{}", json!({"r": a.r, "g": a.g, "n": a.n, "t_poly": p.value.to_string()})),
            }
        }
    }
    Outcome::Pass
}

fn hodge(a: &HodgeArgs, bounds: &Bounds, table: &Arc<HurwitzTable>) -> Outcome {
    if let Err(o) = bounds.r(a.r).and_then(|_| bounds.level(a.g, a.n)) {
        return o;
    }
    if a.check_one_point && (a.n != 1 || a.g == 0) {
        return Outcome::Usage("--check-one-point needs n = 1 and g ≥ 1".into());
    }
    let store = FreeEnergyStore::new(a.r, table.clone());
    let f = match store.get(a.g, a.n) {
        Ok(f) => f,
        Err(e) => return free_energy_outcome(e),
    };
    let h = hodge_extract(&f);
    let entries: Vec<_> =
        h.entries.iter().map(|(k, v)| json!({"k": k.k, "l": k.l, "value": format_rational(v)})).collect();
    let mut out = json!({"r": a.r, "g": a.g, "n": a.n, "entries": entries});
    let mut outcome = Outcome::Pass;
    if a.n == 1 && a.g >= 1 {
        let got = one_point_from_hodge(&h, a.r, a.g);
        let one_point: Vec<_> = got
            .iter()
            .map(|((_, j), v)| json!({"tau": 2 * a.g as i64 - 2 + *j as i64, "lambda": a.g - j, "value": format_rational(v)}))
            .collect();
        out["one_point"] = json!(one_point);
    }
    if a.check_one_point {
        let got = one_point_from_hodge(&h, a.r, a.g);
        let expected = one_point_generating(a.r, a.g);
        let mut mismatch = None;
        for ((g, j), v) in &got {
            let e = expected.get(&(*g, *j)).cloned().unwrap_or_default();
            if *v != e && mismatch.is_none() {
                mismatch = Some(format!("j = {}: fitted {}, generating function {}", j, format_rational(v), format_rational(&e)));
            }
        }
        out["check"] = match &mismatch {
            None => json!({"status": "pass"}),
            Some(w) => json!({"status": "fail", "witness": w}),
        };
        if mismatch.is_some() {
            outcome = Outcome::Failure;
        }
    }
    println!("{}", serde_json::to_string_pretty(&out).expect("plain data"));
    outcome
}

fn cache_fill(r: u32, dmax: u32, gmax: u32, bounds: &Bounds, table: &HurwitzTable) -> Outcome {
    if let Err(o) = bounds.r(r).and_then(|_| bounds.degree(dmax)) {
        return o;
    }
    for g in 0..=gmax {
        for n in 1..=dmax as usize {
            hurwitz_table(r, g, n, dmax, table);
        }
    }
    println!("{}", table.len());
    Outcome::Pass
}
