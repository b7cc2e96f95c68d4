//! The convergence-rate experiment and partial-quotient degree statistics.
//!
//! A Haar sample `f` in `L` is expanded once into certified partial
//! quotients; the `F_h` orbit is then replayed on its symbolic state
//! `(k, [h^i A_{k+1}])`, multiplying the step matrices into the product.
//! The first column `(U, V)` of the product is checked against the closed
//! form, and `|f - U/V|` is evaluated on the series and checked against the
//! intermediate-convergent error law.

use std::fmt::Write as _;
use std::path::PathBuf;

use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};

use super::sampling::{rng_for, sample_haar, HaarDomain};
use crate::algebra::{Degree, Field, Poly};
use crate::cf::{approximation_exponent, cf_expand, CfExpansion, Stop};
use crate::error::{Error, Result};
use crate::farey_algebraic::{alg_closed_form, alg_regime, HParam};
use crate::laurent::Element;

/// Map driven by an experiment.
#[derive(Debug, Clone)]
pub enum MapKind {
    Geo,
    Alg(HParam),
    Artin,
    Bernaknat,
}

impl MapKind {
    pub fn name(&self) -> String {
        match self {
            MapKind::Geo => "geo".into(),
            MapKind::Alg(h) => format!("alg({h})"),
            MapKind::Artin => "artin".into(),
            MapKind::Bernaknat => "bernaknat".into(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub field: Field,
    pub map: MapKind,
    pub samples: usize,
    /// Orbit length for the rate experiment, `k` for degree statistics.
    pub ell: usize,
    /// Sample precision floor; `None` picks a default from `ell`.
    pub floor: Option<i64>,
    pub seed: u64,
    pub out: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn new(field: Field, map: MapKind, samples: usize, ell: usize, seed: u64) -> ExperimentConfig {
        ExperimentConfig {
            field,
            map,
            samples,
            ell,
            floor: None,
            seed,
            out: None,
        }
    }

    pub fn echo(&self, floor: i64) -> serde_json::Value {
        serde_json::json!({
            "q": self.field.q(),
            "field": format!("{:?}", self.field),
            "map": self.map.name(),
            "samples": self.samples,
            "ell": self.ell,
            "floor": floor,
            "seed": self.seed,
        })
    }
}

/// `-2q/(2q-1)` for `F_h`; `-2q/(q-1)` for the Artin map.
pub fn rate_target(q: u32, map: &MapKind) -> Option<f64> {
    let q = q as f64;
    match map {
        MapKind::Alg(_) => Some(-2.0 * q / (2.0 * q - 1.0)),
        MapKind::Artin => Some(-2.0 * q / (q - 1.0)),
        _ => None,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleRecord {
    pub sample_id: u64,
    /// `(1/ell) log_q |f - U_ell/V_ell|`; `None` when terminated or dropped.
    pub rate: Option<f64>,
    /// Exponent of `|f - U_ell/V_ell|`.
    pub exponent: Option<i64>,
    pub terminated: bool,
    pub dropped: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct RateReport {
    pub config: serde_json::Value,
    pub target: f64,
    pub mean: f64,
    pub sd: f64,
    pub used: usize,
    pub terminated: usize,
    pub dropped: usize,
    pub run_hash: String,
    #[serde(skip)]
    pub records: Vec<SampleRecord>,
}

fn mean_sd(xs: &[f64]) -> (f64, f64) {
    if xs.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = if xs.len() > 1 {
        xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    (mean, var.sqrt())
}

/// Product of the `F_h` step matrices along the first `ell` steps of the
/// orbit of `[0; A_1, A_2, ...]`, as `(first column, second column)`.
pub fn alg_product_columns(cf: &CfExpansion, h: &HParam, ell: usize) -> Result<[[Poly; 2]; 2]> {
    let field = cf.field();
    let (zero, one) = (Poly::zero(field), Poly::one(field));
    let mut col1 = [one.clone(), zero.clone()];
    let mut col2 = [zero, one];
    let mut k = 0usize;
    let mut cur = cf.a(1).clone();
    for _ in 0..ell {
        if cur.degree() >= 1 {
            // [[1, 0], [A - [hA], 1]]
            let next = h.poly_part_times(&cur)?;
            let x = &cur - &next;
            for r in 0..2 {
                col1[r] = &col1[r] + &(&x * &col2[r]);
            }
            cur = next;
        } else {
            // [[0, 1], [1, a]]
            for r in 0..2 {
                let c2 = &col1[r] + &(&cur * &col2[r]);
                col1[r] = std::mem::replace(&mut col2[r], c2);
            }
            k += 1;
            if k >= cf.len() {
                return Err(Error::DepthExceeded {
                    requested: k + 1,
                    available: cf.len(),
                });
            }
            cur = cf.a(k + 1).clone();
        }
    }
    let [u, v] = col1;
    let [p, q] = col2;
    Ok([[u, p], [v, q]])
}

/// Exponent of `q^-i / (|Q_{k+1}| |Q_k|)`, or of `1/(|Q_{k-1}| |Q_k|)` at
/// `i = 0`, where the first column is `(P_{k-1}, Q_{k-1})`.
pub fn error_law_exponent(cf: &CfExpansion, k: usize, i: usize) -> i64 {
    let k = k as i64;
    if i == 0 {
        -((cf.q(k - 1).degree() + cf.q(k).degree()) as i64)
    } else {
        -(i as i64) - (cf.q(k + 1).degree() + cf.q(k).degree()) as i64
    }
}

/// Twice the expected `deg Q` reached after `ell` steps, with room for
/// fluctuations: `deg Q` grows like `q/(2q-1)` per `F_h` step and `q/(q-1)`
/// per Artin step.
fn default_floor(cfg: &ExperimentConfig) -> i64 {
    let ell = cfg.ell.max(8) as i64;
    let q = cfg.field.q() as i64;
    match cfg.map {
        MapKind::Artin => -(4 * q / (q - 1) + 2) * ell,
        _ => -4 * ell,
    }
}

fn check_floor(cfg: &ExperimentConfig, floor: i64) -> Result<()> {
    // Every step of an orbit consumes at least one degree of precision on
    // each side of the convergent, so anything shallower is hopeless.
    let need = -(2 * cfg.ell as i64 + 1);
    if floor > need {
        return Err(Error::InsufficientPrecision {
            context: format!("floor {floor} cannot support {} steps", cfg.ell),
            required_floor: Some(need),
        });
    }
    Ok(())
}

fn rate_sample(cfg: &ExperimentConfig, floor: i64, id: u64) -> Result<SampleRecord> {
    let mut rng = rng_for(cfg.seed, id);
    let f = Element::Series(sample_haar(&cfg.field, HaarDomain::L, floor, &mut rng));
    rate_of(&f, &cfg.map, cfg.ell, id)
}

/// The rate record of one point `f` in `L`.
pub fn rate_of(f: &Element, map: &MapKind, ell: usize, id: u64) -> Result<SampleRecord> {
    let cf = cf_expand(f, usize::MAX)?;
    let terminated = SampleRecord {
        sample_id: id,
        rate: None,
        exponent: None,
        terminated: true,
        dropped: false,
    };
    let (u, v, law) = match map {
        MapKind::Alg(h) => {
            let (k, i) = alg_regime(&cf, ell)?;
            if cf.terminated() && k + 1 >= cf.len() {
                return Ok(terminated);
            }
            let [[u, _], [v, _]] = alg_product_columns(&cf, h, ell)?;
            let closed = alg_closed_form(&cf, h, ell)?;
            if closed.tpow != 0 || closed.entry(0, 0) != &u || closed.entry(1, 0) != &v {
                return Err(Error::PreconditionFailed(format!(
                    "orbit product disagrees with the closed form at ell = {ell}"
                )));
            }
            (u, v, error_law_exponent(&cf, k, i))
        }
        MapKind::Artin => {
            if cf.len() < ell + 1 {
                return match cf.stop() {
                    Stop::Terminated => Ok(terminated),
                    _ => Err(Error::DepthExceeded {
                        requested: ell + 1,
                        available: cf.len(),
                    }),
                };
            }
            let l = ell as i64;
            let law = -((cf.q(l).degree() + cf.q(l + 1).degree()) as i64);
            (cf.p(l).clone(), cf.q(l).clone(), law)
        }
        other => {
            return Err(Error::PreconditionFailed(format!(
                "the rate experiment runs on alg(h) or artin, not {}",
                other.name()
            )))
        }
    };
    let e = match approximation_exponent(f, &u, &v)? {
        Degree::Finite(e) => e,
        Degree::NegInf => return Ok(terminated),
    };
    if e != law {
        return Err(Error::PreconditionFailed(format!(
            "|f - U/V| = q^{e} breaks the error law q^{law}"
        )));
    }
    Ok(SampleRecord {
        sample_id: id,
        rate: Some(e as f64 / ell as f64),
        exponent: Some(e),
        terminated: false,
        dropped: false,
    })
}

fn is_precision(e: &Error) -> bool {
    matches!(e, Error::InsufficientPrecision { .. } | Error::DepthExceeded { .. })
}

/// Runs `cfg.samples` seeded Haar samples on `L` through the rate
/// measurement. Precision failures drop the sample and are counted; other
/// errors abort the run.
pub fn rate_experiment(cfg: &ExperimentConfig) -> Result<RateReport> {
    let target = rate_target(cfg.field.q(), &cfg.map).ok_or_else(|| {
        Error::PreconditionFailed(format!(
            "the rate experiment runs on alg(h) or artin, not {}",
            cfg.map.name()
        ))
    })?;
    let floor = cfg.floor.unwrap_or_else(|| default_floor(cfg));
    check_floor(cfg, floor)?;
    let records: Vec<SampleRecord> = (0..cfg.samples as u64)
        .into_par_iter()
        .map(|id| match rate_sample(cfg, floor, id) {
            Ok(r) => Ok(r),
            Err(e) if is_precision(&e) => Ok(SampleRecord {
                sample_id: id,
                rate: None,
                exponent: None,
                terminated: false,
                dropped: true,
            }),
            Err(e) => Err(e),
        })
        .collect::<Result<_>>()?;
    let rates: Vec<f64> = records.iter().filter_map(|r| r.rate).collect();
    let (mean, sd) = mean_sd(&rates);
    let config = cfg.echo(floor);
    let run_hash = run_hash(&config, &rate_csv(cfg, &records));
    let report = RateReport {
        config,
        target,
        mean,
        sd,
        used: rates.len(),
        terminated: records.iter().filter(|r| r.terminated).count(),
        dropped: records.iter().filter(|r| r.dropped).count(),
        run_hash,
        records,
    };
    if let Some(path) = &cfg.out {
        write_outputs(path, &rate_csv(cfg, &report.records), &report)?;
    }
    Ok(report)
}

/// Per-sample CSV with columns `sample_id,q,map,ell,rate,terminated,dropped`.
pub fn rate_csv(cfg: &ExperimentConfig, records: &[SampleRecord]) -> String {
    let mut s = String::from("sample_id,q,map,ell,rate,terminated,dropped\n");
    let map = cfg.map.name().replace(',', ";");
    for r in records {
        let rate = r.rate.map(|x| format!("{x:.12}")).unwrap_or_default();
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{}",
            r.sample_id,
            cfg.field.q(),
            map,
            cfg.ell,
            rate,
            r.terminated,
            r.dropped
        );
    }
    s
}

/// First 40 hex digits of SHA-256 over the config echo and the result table.
pub fn run_hash(config: &serde_json::Value, table: &str) -> String {
    let mut h = Sha256::new();
    h.update(config.to_string().as_bytes());
    h.update(b"\n");
    h.update(table.as_bytes());
    let hex: String = h.finalize().iter().map(|b| format!("{b:02x}")).collect();
    hex[..40].to_string()
}

/// Writes `<path>` (CSV) and `<path>.json` (summary).
pub fn write_outputs<T: Serialize>(path: &PathBuf, csv: &str, summary: &T) -> Result<()> {
    let io = |e: std::io::Error| Error::Domain(format!("cannot write {}: {e}", path.display()));
    std::fs::write(path, csv).map_err(io)?;
    let mut json = serde_json::json!({ "schema": 1 });
    json["summary"] = serde_json::to_value(summary).map_err(|e| Error::Domain(e.to_string()))?;
    let mut jpath = path.clone().into_os_string();
    jpath.push(".json");
    std::fs::write(&jpath, serde_json::to_string_pretty(&json).unwrap() + "\n").map_err(io)?;
    Ok(())
}

/// Averages at one checkpoint `k`.
#[derive(Debug, Clone, Serialize)]
pub struct DegreeCheckpoint {
    pub k: usize,
    /// Sample mean of `sum_{n<=k} deg A_n / k`.
    pub mean_cumulative: f64,
    /// Sample mean of `deg A_{k+1} / k`.
    pub mean_next: f64,
    /// Largest `deg A_{k+1} / k` over the samples.
    pub max_next: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct DegreeReport {
    pub config: serde_json::Value,
    /// `q/(q-1)`.
    pub target: f64,
    pub checkpoints: Vec<DegreeCheckpoint>,
    /// `histogram[d]` counts partial quotients of degree `d` among
    /// `A_1..A_k` over all samples (index 0 unused).
    pub histogram: Vec<u64>,
    pub used: usize,
    pub dropped: usize,
    pub run_hash: String,
}

const CHECKPOINTS: [usize; 5] = [10, 20, 50, 100, 200];

/// Degrees of `A_1, ..., A_{k+1}` for one sample, or `None` if dropped.
fn degree_sample(cfg: &ExperimentConfig, floor: i64, id: u64) -> Option<Vec<usize>> {
    let mut rng = rng_for(cfg.seed, id);
    let f = Element::Series(sample_haar(&cfg.field, HaarDomain::L, floor, &mut rng));
    let cf = cf_expand(&f, cfg.ell + 1).ok()?;
    (cf.len() == cfg.ell + 1).then(|| cf.partial_quotients().iter().map(|a| a.degree()).collect())
}

/// Birkhoff averages of `deg A_1` along the Artin orbit of Haar samples.
pub fn degree_stats(cfg: &ExperimentConfig) -> Result<DegreeReport> {
    let k = cfg.ell;
    if k == 0 {
        return Err(Error::PreconditionFailed("need k >= 1".into()));
    }
    let floor = cfg.floor.unwrap_or(-6 * k.max(8) as i64);
    let q = cfg.field.q() as f64;
    let samples: Vec<Option<Vec<usize>>> = (0..cfg.samples as u64)
        .into_par_iter()
        .map(|id| degree_sample(cfg, floor, id))
        .collect();
    let used: Vec<&Vec<usize>> = samples.iter().flatten().collect();
    let mut checkpoints = Vec::new();
    for c in CHECKPOINTS.iter().copied().filter(|&c| c < k).chain([k]) {
        let n = used.len() as f64;
        let cum: f64 = used.iter().map(|d| d[..c].iter().sum::<usize>() as f64 / c as f64).sum();
        let next: Vec<f64> = used.iter().map(|d| d[c] as f64 / c as f64).collect();
        checkpoints.push(DegreeCheckpoint {
            k: c,
            mean_cumulative: cum / n,
            mean_next: next.iter().sum::<f64>() / n,
            max_next: next.iter().cloned().fold(0.0, f64::max),
        });
    }
    let mut histogram = vec![0u64; 2];
    for d in used.iter().flat_map(|d| d[..k].iter()) {
        if *d >= histogram.len() {
            histogram.resize(d + 1, 0);
        }
        histogram[*d] += 1;
    }
    let config = cfg.echo(floor);
    let mut table = String::from("sample_id,q,k,degrees\n");
    for (id, s) in samples.iter().enumerate() {
        let degs = s
            .as_ref()
            .map(|d| d.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "))
            .unwrap_or_default();
        let _ = writeln!(table, "{id},{},{k},{degs}", cfg.field.q());
    }
    let report = DegreeReport {
        run_hash: run_hash(&config, &table),
        config,
        target: q / (q - 1.0),
        checkpoints,
        histogram,
        used: used.len(),
        dropped: samples.len() - used.len(),
    };
    if let Some(path) = &cfg.out {
        write_outputs(path, &table, &report)?;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::RationalFunction;

    #[test]
    fn rational_samples_terminate() {
        let f3 = Field::prime(3).unwrap();
        let f = Element::Exact(RationalFunction::parse(&f3, "1/(t^3+t+1)").unwrap());
        let r = rate_of(&f, &MapKind::Alg(HParam::t_inv(&f3)), 20, 0).unwrap();
        assert!(r.terminated && r.rate.is_none());
    }

    #[test]
    fn small_run_is_reproducible() {
        let f2 = Field::prime(2).unwrap();
        let cfg = ExperimentConfig::new(f2.clone(), MapKind::Alg(HParam::t_inv(&f2)), 40, 30, 5);
        let a = rate_experiment(&cfg).unwrap();
        let b = rate_experiment(&cfg).unwrap();
        assert_eq!(a.records, b.records);
        assert_eq!(a.run_hash, b.run_hash);
        assert_eq!(a.run_hash.len(), 40);
        assert_eq!(a.used + a.dropped + a.terminated, 40);
        let mut shallow = cfg.clone();
        shallow.floor = Some(-30);
        assert!(rate_experiment(&shallow).is_err());
    }

    #[test]
    fn geo_is_not_a_rate_map() {
        let f2 = Field::prime(2).unwrap();
        let cfg = ExperimentConfig::new(f2, MapKind::Geo, 10, 10, 0);
        assert!(rate_experiment(&cfg).is_err());
    }
}
