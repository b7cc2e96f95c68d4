//! Invariance of `mu_G` under the geometric map and of `mu_A` under `F_h`.
//!
//! The exact tester pulls every cylinder of a given depth back through the
//! inverse branches. Each inverse branch is the step matrix acting as a
//! Möbius map, so it carries balls to balls; the preimage is a finite
//! disjoint union of balls whose measure is summed in exact rationals.
//!
//! The one cylinder with infinitely many preimage pieces under `F_h` is
//! the ball around `0` in `L`. Preimages of a partition of `O` partition
//! `O`, so its preimage measure is the total mass minus that of all the
//! other preimages.

use std::collections::BTreeMap;

use num_rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use super::cylinder::{Ball, Component, CylinderSet};
use super::sampling::{rng_for, sample_haar, sample_level, sample_mu_a, HaarDomain};
use crate::algebra::{Fe, Field, Poly};
use crate::cf::artin_step;
use crate::error::{Error, Result};
use crate::farey_algebraic::{alg_step, mu_a, HParam};
use crate::farey_geometric::{geo_step, geo_weight, GeoState};
use crate::laurent::{Element, RationalFunction};

/// A map under test.
#[derive(Debug, Clone)]
pub enum InvariantMap {
    /// `F` on `L x Z`.
    Geo,
    /// `F_h` on `O`.
    Alg(HParam),
    /// The Artin map on `L`.
    Artin,
}

/// A measure on the map's phase space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Measure {
    /// `mu_G` on `L x Z`.
    MuG,
    /// `mu_G` with the weights of negative levels doubled, i.e. the factor
    /// `(q-1)/2` replaced by `q-1` there. Not invariant for any `q`.
    MuGPerturbed,
    /// `mu_A` on `O`.
    MuA,
    /// Normalised Haar measure on the phase space (`O`, or `L` for Artin).
    Haar,
}

fn level_weight(measure: Measure, q: u32, n: i64) -> Ratio<i128> {
    match measure {
        Measure::MuGPerturbed if n < 0 => geo_weight(q, n) * 2,
        _ => geo_weight(q, n),
    }
}

/// Measure of a ball at an optional level.
pub fn measure_of(measure: Measure, q: u32, ball: &Ball, level: Option<i64>) -> Result<Ratio<i128>> {
    let haar = ball.haar();
    match (measure, level) {
        (Measure::MuG | Measure::MuGPerturbed, Some(n)) => Ok(level_weight(measure, q, n) * haar),
        (Measure::MuA, None) => match ball.component() {
            Some(Component::L) => Ok(mu_a(q, haar, Ratio::from_integer(0))),
            Some(Component::J0) => Ok(mu_a(q, Ratio::from_integer(0), haar)),
            None => Err(Error::Domain(format!("{ball} is not inside one component"))),
        },
        (Measure::Haar, None) => Ok(haar),
        _ => Err(Error::Domain(format!("measure {measure:?} does not fit this phase space"))),
    }
}

/// A preimage piece: a ball at a level.
#[derive(Debug, Clone)]
struct Piece {
    ball: Ball,
    level: Option<i64>,
}

fn rf(p: Poly) -> RationalFunction {
    RationalFunction::from_poly(p)
}

fn c(field: &Field, x: Fe) -> RationalFunction {
    rf(Poly::constant(field, x))
}

/// Preimage of `C x {m}` under `F`.
fn geo_preimage(field: &Field, target: &Ball, m: i64) -> Result<Vec<Piece>> {
    let t = rf(Poly::t(field));
    let (zero, one) = (RationalFunction::zero(field), RationalFunction::one(field));
    let mut out = Vec::new();
    // Climbing branch from level m-1: f -> tf - a on {coeff_-1 = a}, with
    // a = 0 forced at nonnegative levels.
    let n = m - 1;
    for a in field.elements() {
        if n >= 0 && !a.is_zero() {
            continue;
        }
        let domain = Ball::new(&c(field, a).div(&t)?, -2);
        let inv = [[one.clone(), c(field, a)], [zero.clone(), t.clone()]];
        if let Some(ball) = target.mobius(&inv)?.intersect(&domain) {
            out.push(Piece { ball, level: Some(n) });
        }
    }
    // Inverting branch from level -m-1 >= 0: f -> 1/(tf) - 1/a on {coeff_-1 = a}.
    let n = -m - 1;
    if n >= 0 {
        for a in field.nonzero_elements() {
            let domain = Ball::new(&c(field, a).div(&t)?, -2);
            let ainv = c(field, field.inv(a)?);
            let inv = [[zero.clone(), one.clone()], [t.clone(), t.mul(&ainv)]];
            if let Some(ball) = target.mobius(&inv)?.intersect(&domain) {
                out.push(Piece { ball, level: Some(n) });
            }
        }
    }
    Ok(out)
}

/// All `A` of degree `deg B + 1` with `[hA] = B`.
fn solve_poly_part(h: &HParam, b: &Poly) -> Result<Vec<Poly>> {
    let field = h.field().clone();
    let m = b.degree() + 1;
    // h_i is the constant term of [h t^i].
    let hs: Vec<Fe> = (1..=m)
        .map(|i| h.poly_part_times(&Poly::monomial(&field, Fe::ONE, i)).map(|p| p.coeff(0)))
        .collect::<Result<_>>()?;
    let h1inv = field.inv(hs[0])?;
    // a[j] for j = 1..=m, solved from the top coefficient down.
    let mut a = vec![Fe::ZERO; m + 1];
    for j in (0..m).rev() {
        let mut acc = b.coeff(j);
        for i in 2..=m - j {
            acc = field.sub(acc, field.mul(hs[i - 1], a[j + i]));
        }
        a[j + 1] = field.mul(acc, h1inv);
    }
    let mut out = Vec::with_capacity(field.q() as usize);
    for a0 in field.elements() {
        a[0] = a0;
        let poly = Poly::from_coeffs(&field, a.clone());
        if h.poly_part_times(&poly)? != *b {
            return Err(Error::PreconditionFailed(format!("[hA] = {b} has no solution of degree {m}")));
        }
        out.push(poly);
    }
    Ok(out)
}

/// Preimage of `C` under `F_h` for a ball `C` in `O` not containing `0`.
fn alg_preimage(h: &HParam, target: &Ball) -> Result<Vec<Piece>> {
    let field = h.field().clone();
    let (zero, one) = (RationalFunction::zero(&field), RationalFunction::one(&field));
    let mut out = Vec::new();
    // Branches 1/([hA] + g) for deg A >= 1, grouped by B = [hA] = [1/x].
    for (b, d) in target.invert()?.poly_parts() {
        let sub = d.translate(&rf(b.clone())).invert()?;
        for a in solve_poly_part(h, &b)? {
            let domain = Ball::new(&rf(a.clone()), -1).invert()?;
            let inv = [[one.clone(), zero.clone()], [rf(&a - &b), one.clone()]];
            if let Some(ball) = sub.mobius(&inv)?.intersect(&domain) {
                out.push(Piece { ball, level: None });
            }
        }
    }
    out.extend(unit_branch_preimage(&field, target)?);
    Ok(out)
}

/// Preimage under the branch `f -> {1/f}` on `J_0`, which lands in `L`.
fn unit_branch_preimage(field: &Field, target: &Ball) -> Result<Vec<Piece>> {
    if target.component() != Some(Component::L) {
        return Ok(Vec::new());
    }
    let (zero, one) = (RationalFunction::zero(field), RationalFunction::one(field));
    let mut out = Vec::new();
    for a in field.nonzero_elements() {
        let domain = Ball::new(&c(field, a), -1).invert()?;
        let inv = [[zero.clone(), one.clone()], [one.clone(), c(field, a)]];
        if let Some(ball) = target.mobius(&inv)?.intersect(&domain) {
            out.push(Piece { ball, level: None });
        }
    }
    Ok(out)
}

fn check_disjoint(pieces: &[Piece]) -> Result<()> {
    for (i, p) in pieces.iter().enumerate() {
        for r in &pieces[i + 1..] {
            if p.level == r.level && !p.ball.is_disjoint(&r.ball) {
                return Err(Error::PreconditionFailed(format!(
                    "preimage pieces {} and {} overlap",
                    p.ball, r.ball
                )));
            }
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Serialize)]
pub struct InvarianceReport {
    /// `max_C |measure(F^-1 C) - measure(C)|`, exact.
    #[serde(serialize_with = "ser_ratio")]
    pub max_discrepancy: Ratio<i128>,
    pub targets: usize,
    pub pieces: usize,
    /// Targets whose preimage measure comes from the partition of `O`.
    pub via_complement: usize,
    pub worst: Option<String>,
}

fn ser_ratio<S: serde::Serializer>(r: &Ratio<i128>, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(r)
}

/// Default bound on the number of preimage pieces.
pub const PIECE_BUDGET: usize = 2_000_000;

/// Exact pushforward check over all cylinders of depth `depth` (levels
/// `|n| <= levels` for the geometric map).
pub fn invariance_exact(
    field: &Field,
    map: &InvariantMap,
    measure: Measure,
    depth: usize,
    levels: i64,
) -> Result<InvarianceReport> {
    let q = field.q();
    if depth > 5 {
        return Err(Error::DepthInfeasible { budget: PIECE_BUDGET });
    }
    let mut report = InvarianceReport {
        max_discrepancy: Ratio::from_integer(0),
        targets: 0,
        pieces: 0,
        via_complement: 0,
        worst: None,
    };
    let record = |name: String, got: Ratio<i128>, want: Ratio<i128>, report: &mut InvarianceReport| {
        let d = if got > want { got - want } else { want - got };
        report.targets += 1;
        if d > report.max_discrepancy || report.worst.is_none() {
            if d > report.max_discrepancy {
                report.max_discrepancy = d;
            }
            report.worst = Some(name);
        }
    };
    match map {
        InvariantMap::Geo => {
            for m in -levels..=levels {
                for cyl in CylinderSet::enumerate(q, Component::L, depth, Some(m)) {
                    let ball = cyl.ball(field);
                    let pieces = geo_preimage(field, &ball, m)?;
                    check_disjoint(&pieces)?;
                    report.pieces += pieces.len();
                    let got = pieces
                        .iter()
                        .map(|p| measure_of(measure, q, &p.ball, p.level))
                        .sum::<Result<Ratio<i128>>>()?;
                    let want = measure_of(measure, q, &ball, Some(m))?;
                    record(cyl.to_string(), got, want, &mut report);
                }
            }
        }
        InvariantMap::Alg(h) => {
            let mut targets = CylinderSet::enumerate(q, Component::L, depth, None);
            targets.extend(CylinderSet::enumerate(q, Component::J0, depth, None));
            let total = measure_of(measure, q, &Ball::new(&RationalFunction::zero(field), 0), None)
                .or_else(|_| Ok::<_, Error>(Ratio::from_integer(1)))?;
            let results: Vec<(CylinderSet, Option<Ratio<i128>>, usize)> = targets
                .par_iter()
                .map(|cyl| {
                    let ball = cyl.ball(field);
                    if ball.contains_zero() {
                        return Ok((cyl.clone(), None, 0));
                    }
                    let pieces = alg_preimage(h, &ball)?;
                    check_disjoint(&pieces)?;
                    let got = pieces
                        .iter()
                        .map(|p| measure_of(measure, q, &p.ball, None))
                        .sum::<Result<Ratio<i128>>>()?;
                    Ok((cyl.clone(), Some(got), pieces.len()))
                })
                .collect::<Result<_>>()?;
            let known: Ratio<i128> = results.iter().filter_map(|r| r.1).sum();
            for (cyl, got, n) in results {
                report.pieces += n;
                if report.pieces > PIECE_BUDGET {
                    return Err(Error::DepthInfeasible { budget: PIECE_BUDGET });
                }
                let got = match got {
                    Some(g) => g,
                    None => {
                        report.via_complement += 1;
                        total - known
                    }
                };
                let want = measure_of(measure, q, &cyl.ball(field), None)?;
                record(cyl.to_string(), got, want, &mut report);
            }
        }
        InvariantMap::Artin => {
            return Err(Error::DepthInfeasible { budget: PIECE_BUDGET });
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, Serialize)]
pub struct Chi2Report {
    pub statistic: f64,
    pub dof: usize,
    /// The 0.999 quantile of the chi-square law with `dof` degrees of freedom.
    pub critical: f64,
    pub pass: bool,
    pub samples: usize,
    pub dropped: usize,
}

/// Bin label for one image point.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
enum Bin {
    Cyl(CylinderSet),
    Above,
    Below,
}

fn sample_floor(depth: usize) -> i64 {
    -(depth as i64) - 48
}

fn image_bin(field: &Field, map: &InvariantMap, sample: Measure, depth: usize, levels: i64, seed: u64, id: u64) -> Result<Bin> {
    let mut rng = rng_for(seed, id);
    let floor = sample_floor(depth);
    let (x, level) = match map {
        InvariantMap::Geo => {
            let n = sample_level(field.q(), &mut rng);
            let f = Element::Series(sample_haar(field, HaarDomain::L, floor, &mut rng));
            let s = geo_step(&GeoState::new(f, n))?;
            (s.f, Some(s.n))
        }
        InvariantMap::Alg(h) => {
            let f = match sample {
                Measure::MuA => sample_mu_a(field, floor, &mut rng),
                _ => sample_haar(field, HaarDomain::O, floor, &mut rng),
            };
            (alg_step(&Element::Series(f), h)?, None)
        }
        InvariantMap::Artin => {
            let f = sample_haar(field, HaarDomain::L, floor, &mut rng);
            (artin_step(&Element::Series(f))?, None)
        }
    };
    if let Some(n) = level {
        if n > levels {
            return Ok(Bin::Above);
        }
        if n < -levels {
            return Ok(Bin::Below);
        }
    }
    let s = x.to_series(-(depth as i64) - 1);
    if s.floor() > -(depth as i64) - 1 {
        return Err(Error::precision("image known too coarsely to bin"));
    }
    let coeffs: Vec<Fe> = (0..=depth as i64).map(|d| s.coeff(-d)).collect::<Result<_>>()?;
    Ok(Bin::Cyl(CylinderSet::of_coeffs(level, &coeffs)))
}

fn expected_probabilities(field: &Field, map: &InvariantMap, expected: Measure, depth: usize, levels: i64) -> Result<BTreeMap<Bin, f64>> {
    let q = field.q();
    let mut out = BTreeMap::new();
    let to_f = |r: Ratio<i128>| *r.numer() as f64 / *r.denom() as f64;
    match map {
        InvariantMap::Geo => {
            for m in -levels..=levels {
                for cyl in CylinderSet::enumerate(q, Component::L, depth, Some(m)) {
                    let p = measure_of(expected, q, &cyl.ball(field), Some(m))?;
                    out.insert(Bin::Cyl(cyl), to_f(p));
                }
            }
            // P(n > L) = q^-(L+1)/2 and P(n < -L) = q^-L/2 under mu_G.
            out.insert(Bin::Above, 0.5 * (q as f64).powi(-(levels as i32) - 1));
            out.insert(Bin::Below, 0.5 * (q as f64).powi(-(levels as i32)));
        }
        InvariantMap::Alg(_) => {
            for comp in [Component::L, Component::J0] {
                for cyl in CylinderSet::enumerate(q, comp, depth, None) {
                    let p = measure_of(expected, q, &cyl.ball(field), None)?;
                    out.insert(Bin::Cyl(cyl), to_f(p));
                }
            }
        }
        InvariantMap::Artin => {
            for cyl in CylinderSet::enumerate(q, Component::L, depth, None) {
                out.insert(Bin::Cyl(cyl.clone()), to_f(cyl.haar(q)) * q as f64);
            }
        }
    }
    Ok(out)
}

/// Pushes `n` samples of `sample` forward once and compares the image
/// cylinder counts with `expected` by a chi-square test.
pub fn invariance_mc(
    field: &Field,
    map: &InvariantMap,
    sample: Measure,
    expected: Measure,
    n: usize,
    depth: usize,
    seed: u64,
) -> Result<Chi2Report> {
    if n < 1000 {
        return Err(Error::PreconditionFailed("need at least 1000 samples".into()));
    }
    let levels = 3;
    let probs = expected_probabilities(field, map, expected, depth, levels)?;
    let bins: Vec<Option<Bin>> = (0..n as u64)
        .into_par_iter()
        .map(|id| image_bin(field, map, sample, depth, levels, seed, id).ok())
        .collect();
    let mut counts: BTreeMap<Bin, usize> = probs.keys().map(|b| (b.clone(), 0)).collect();
    let mut dropped = 0;
    for b in bins {
        match b {
            Some(b) => *counts.entry(b).or_insert(0) += 1,
            None => dropped += 1,
        }
    }
    let used = (n - dropped) as f64;
    let mut statistic = 0.0;
    for (bin, count) in &counts {
        let e = probs.get(bin).copied().unwrap_or(0.0) * used;
        if e > 0.0 {
            statistic += (*count as f64 - e).powi(2) / e;
        } else if *count > 0 {
            statistic = f64::INFINITY;
        }
    }
    let dof = probs.len() - 1;
    let critical = ChiSquared::new(dof as f64)
        .map_err(|e| Error::Domain(e.to_string()))?
        .inverse_cdf(0.999);
    Ok(Chi2Report {
        statistic,
        dof,
        critical,
        pass: statistic <= critical,
        samples: n,
        dropped,
    })
}
