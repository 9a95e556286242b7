//! Family sweeps: one certified instance per size, emitted as CSV.

use serde::Serialize;

use crate::certify::certify;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::generate::{generate, Family, GenParams};

#[derive(Clone, Debug)]
pub struct SweepConfig {
    pub family: Family,
    pub n_min: usize,
    pub n_max: usize,
    pub params: GenParams,
    pub seed: u64,
    pub retries: usize,
}

/// CSV header, in column order:
/// `family,n,size,sumset,productset,energy,selected_mass,theorem_constant,effective_exponent,injective,retries_used`
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub family: &'static str,
    pub n: usize,
    pub size: usize,
    pub sumset: usize,
    pub productset: usize,
    pub energy: u64,
    pub selected_mass: u64,
    pub theorem_constant: Option<f64>,
    pub effective_exponent: Option<f64>,
    pub injective: bool,
    pub retries_used: usize,
    #[serde(skip)]
    pub theorems_hold: bool,
}

/// Instance sizes visited by a sweep; `grid` keeps only perfect squares.
pub fn sweep_sizes(cfg: &SweepConfig) -> Vec<usize> {
    (cfg.n_min..=cfg.n_max).filter(|&n| cfg.family.accepts(n)).collect()
}

pub fn run_sweep(cfg: &SweepConfig) -> Result<Vec<SweepRow>> {
    run_sweep_with(cfg, Exec::default())
}

/// Row `i` uses seed `cfg.seed + i` for both generation and certification.
pub fn run_sweep_with(cfg: &SweepConfig, exec: Exec) -> Result<Vec<SweepRow>> {
    if cfg.n_min == 0 || cfg.n_min > cfg.n_max {
        return Err(Error::InvalidParams(format!(
            "bad size range {}..={}",
            cfg.n_min, cfg.n_max
        )));
    }
    let jobs: Vec<(usize, usize)> = sweep_sizes(cfg).into_iter().enumerate().collect();
    let rows = exec.map_slice(&jobs, |&(i, n)| {
        let seed = cfg.seed.wrapping_add(i as u64);
        let a = generate(cfg.family, n, &cfg.params, seed)?;
        let cert = certify(&a, seed, cfg.retries)?;
        Ok(SweepRow {
            family: cfg.family.name(),
            n,
            size: a.len(),
            sumset: cert.sumset_size,
            productset: cert.productset_size,
            energy: cert.energy,
            selected_mass: cert.class_mass,
            theorem_constant: cert.effective_constant,
            effective_exponent: cert.effective_exponent,
            injective: cert.globally_injective,
            retries_used: cert.injection_attempts,
            theorems_hold: cert.theorems_hold(),
        })
    });
    rows.into_iter().collect()
}

pub fn to_csv(rows: &[SweepRow]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).expect("row serializes");
    }
    if rows.is_empty() {
        w.write_record(HEADER).expect("header");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
}

pub const HEADER: [&str; 11] = [
    "family",
    "n",
    "size",
    "sumset",
    "productset",
    "energy",
    "selected_mass",
    "theorem_constant",
    "effective_exponent",
    "injective",
    "retries_used",
];
