use std::fmt::Write as _;

use serde_json::{json, Value};

use super::args::*;
use super::CliError;
use crate::algebra::{Degree, Field, Poly};
use crate::cf::{approximation_exponent, artin_step, cf_expand, CfExpansion, Stop};
use crate::ergodic::{
    degree_stats, invariance_exact, invariance_mc, rate_experiment, ExperimentConfig, InvariantMap, MapKind, Measure,
};
use crate::farey_algebraic::{
    alg_closed_form, alg_matrix, alg_step, alg_step_by_definition, classify_good_approx, combination, find_h_s,
    intermediate_convergents, Classification, HParam,
};
use crate::farey_geometric::{geo_closed_form, geo_orbit_product};
use crate::laurent::{CfSpecInput, Element, LaurentSeries, RationalFunction};
use crate::tree::{export_tree, ford_crossings, TreeFormat};

/// Output of one command: plain text, the JSON body, and the oracle verdict.
pub struct Report {
    pub text: String,
    pub json: Value,
    pub oracle: Option<String>,
    /// Emit `text` verbatim even under `--json` (DOT/JSON tree exports).
    pub raw: bool,
}

impl Report {
    fn new(text: String, json: Value) -> Report {
        Report {
            text,
            json,
            oracle: None,
            raw: false,
        }
    }
}

type Res<T> = std::result::Result<T, CliError>;

pub fn field(args: &FieldArgs) -> Res<Field> {
    Ok(Field::from_q(args.field, args.modulus.clone())?)
}

pub fn input(args: &InputArgs) -> Res<(Field, Element)> {
    let field = field(&args.field)?;
    let f = if let Some(r) = &args.rational {
        Element::Exact(RationalFunction::parse(&field, r)?)
    } else if let Some(s) = &args.series {
        Element::Series(LaurentSeries::parse(&field, s)?)
    } else if let Some(c) = &args.cf {
        CfSpecInput::parse(&field, c, args.period.as_deref())?.value(&field, args.floor)
    } else {
        return Err(CliError::parse("one of --rational, --series, --cf is required"));
    };
    Ok((field, f))
}

fn mismatch(what: impl Into<String>) -> CliError {
    CliError::new("OracleMismatch", what.into(), None)
}

fn stop_name(stop: &Stop) -> String {
    match stop {
        Stop::Terminated => "terminated".into(),
        Stop::MaxDepth => "max-depth".into(),
        Stop::Precision { required_floor } => format!("precision (floor {required_floor} needed for more)"),
    }
}

pub fn cf(a: &CfArgs) -> Res<Report> {
    let (_, f) = input(&a.input)?;
    let cf = cf_expand(&f, a.depth)?;
    let mut text = format!("f = {f}\n");
    let mut rows = Vec::new();
    for k in 1..=cf.len() {
        let (p, q) = (cf.p(k as i64), cf.q(k as i64));
        let err = approximation_exponent(&f, p, q).map(Degree::qpow).unwrap_or_else(|_| "?".into());
        let _ = writeln!(text, "A_{k} = {}    P_{k}/Q_{k} = ({p})/({q})    |f - P/Q| = {err}", cf.a(k));
        rows.push(json!({ "k": k, "a": cf.a(k).to_string(), "p": p.to_string(), "q": q.to_string(), "error": err }));
    }
    let _ = writeln!(text, "stop: {}", stop_name(cf.stop()));
    let body = json!({
        "f": f,
        "partial_quotients": cf.partial_quotients().iter().map(|p| p.to_string()).collect::<Vec<_>>(),
        "convergents": rows,
        "stop": cf.stop(),
    });
    let mut r = Report::new(text, body);
    if a.output.oracle {
        r.oracle = Some(cf_oracle(&f, &cf)?);
    }
    Ok(r)
}

/// Partial quotients again, by iterating the Artin map on `f` itself, and
/// unimodularity of every convergent matrix.
fn cf_oracle(f: &Element, cf: &CfExpansion) -> Res<String> {
    let mut x = f.clone();
    let mut checked = 0;
    for k in 1..=cf.len() {
        let a = x.inv()?.poly_part()?;
        if &a != cf.a(k) {
            return Err(mismatch(format!("A_{k}: Euclid gives {}, the Artin map gives {a}", cf.a(k))));
        }
        if cf.determinant(k).degree() != 0 || cf.determinant(k).is_zero() {
            return Err(mismatch(format!("convergent matrix {k} is not unimodular")));
        }
        checked += 1;
        if k < cf.len() {
            x = artin_step(&x)?;
        }
    }
    Ok(format!("{checked} partial quotients agree with the Artin map"))
}

pub fn geo(a: &StepArgs) -> Res<Report> {
    let (_, f) = input(&a.input)?;
    let orbit = geo_orbit_product(&f, a.steps)?;
    let mut text = String::new();
    let mut states = Vec::new();
    for (i, s) in orbit.states.iter().enumerate() {
        let _ = write!(text, "{i}: n = {:>3}  f = {}", s.n, s.f);
        if let Some(m) = orbit.matrices.get(i) {
            let _ = write!(text, "    M = {m}");
        }
        text.push('\n');
        states.push(json!({ "step": i, "n": s.n, "f": s.f, "matrix": orbit.matrices.get(i) }));
    }
    let _ = writeln!(text, "product = {}", orbit.product);
    let mut r = Report::new(text, json!({ "states": states, "product": orbit.product }));
    if a.output.oracle {
        let cf = cf_expand(&f, usize::MAX)?;
        let closed = geo_closed_form(&cf, a.steps)?;
        if !closed.same_matrix(&orbit.product) {
            return Err(mismatch(format!("product {} differs from closed form {closed}", orbit.product)));
        }
        r.oracle = Some(format!("product matches the closed form after {} steps", a.steps));
    }
    Ok(r)
}

fn hparam(field: &Field, s: &str) -> Res<HParam> {
    Ok(HParam::parse(field, s)?)
}

pub fn alg(a: &AlgArgs) -> Res<Report> {
    let (field, f) = input(&a.input)?;
    let h = hparam(&field, &a.h)?;
    let mut text = format!("h = {h}\n");
    let mut x = f.clone();
    let mut states = Vec::new();
    let mut product = crate::matrix::ScaledMatrix::identity(&field);
    let mut checked = 0;
    for i in 0..=a.steps {
        if i == a.steps || x.is_zero() {
            let _ = writeln!(text, "{i}: f = {x}");
            states.push(json!({ "step": i, "f": x }));
            break;
        }
        let m = alg_matrix(&x, &h)?;
        let _ = writeln!(text, "{i}: f = {x}    M = {m}");
        states.push(json!({ "step": i, "f": x, "matrix": m }));
        product = product.mul(&m);
        let next = alg_step(&x, &h)?;
        if a.output.oracle {
            let def = alg_step_by_definition(&x, &h)?;
            if !def.agrees_with(&next) {
                return Err(mismatch(format!("step {i}: normal form {next}, definition {def}")));
            }
            checked += 1;
        }
        x = next;
    }
    let _ = writeln!(text, "product = {product}");
    let mut body = json!({ "h": h, "states": states, "product": product });
    if a.find_s {
        let cert = find_h_s(&f)?;
        let _ = writeln!(text, "F_J(f) = F_h^{}(f) with h = {}: {}", cert.s, cert.h, cert.image);
        body["bernaknat"] = json!({ "s": cert.s, "h": cert.h, "image": cert.image });
    }
    let mut r = Report::new(text, body);
    if a.output.oracle {
        let steps = states.len() - 1;
        let cf = cf_expand(&f, usize::MAX)?;
        let closed = alg_closed_form(&cf, &h, steps)?;
        if !closed.same_matrix(&product) {
            return Err(mismatch(format!("product {product} differs from closed form {closed}")));
        }
        r.oracle = Some(format!("{checked} steps match the definition; product matches the closed form"));
    }
    Ok(r)
}

pub fn intermediates(a: &IntermediateArgs) -> Res<Report> {
    let (field, f) = input(&a.input)?;
    let h = hparam(&field, &a.h)?;
    let list = intermediate_convergents(&f, &h, a.depth)?;
    let mut text = String::new();
    let mut rows = Vec::new();
    for ic in &list {
        let err = approximation_exponent(&f, &ic.u, &ic.v)?.qpow();
        let _ = writeln!(
            text,
            "k = {}, i = {}: B = {}    U/V = ({})/({})    |f - U/V| = {err}",
            ic.k, ic.i, ic.b, ic.u, ic.v
        );
        rows.push(json!({ "k": ic.k, "i": ic.i, "b": ic.b, "u": ic.u, "v": ic.v, "error": err }));
    }
    let mut r = Report::new(text, json!({ "h": h, "intermediates": rows }));
    if a.output.oracle {
        for ic in &list {
            match classify_good_approx(&f, &ic.u, &ic.v)? {
                Classification::Intermediate { k, b, .. } if k == ic.k && b == ic.b => {}
                other => return Err(mismatch(format!("({}, {}) classified as {other:?}", ic.k, ic.i))),
            }
        }
        r.oracle = Some(format!("{} intermediates classify back to themselves", list.len()));
    }
    Ok(r)
}

pub fn classify(a: &ClassifyArgs) -> Res<Report> {
    let (field, f) = input(&a.input)?;
    let u = Poly::parse(&field, &a.u)?;
    let v = Poly::parse(&field, &a.v)?;
    let c = classify_good_approx(&f, &u, &v)?;
    let text = match &c {
        Classification::Principal { k } => format!("principal convergent P_{0}/Q_{0}\n", k + 1),
        Classification::Intermediate { k, b, realization } => {
            let mut s = format!("intermediate (P_{0} - B P_{1})/(Q_{0} - B Q_{1}) with k = {1}, B = {b}\n", k + 1, k);
            match realization {
                Some((h, i)) => {
                    let _ = writeln!(s, "realized as B = [h^{i} A_{}] with h = {h}", k + 1);
                }
                None => s.push_str("no h found within the search budget\n"),
            }
            s
        }
    };
    let mut r = Report::new(text, serde_json::to_value(&c).expect("serializable"));
    if a.output.oracle {
        let depth = match &c {
            Classification::Principal { k } | Classification::Intermediate { k, .. } => k + 2,
        };
        let cf = cf_expand(&f, depth)?;
        let (uu, vv) = match &c {
            Classification::Principal { k } => (cf.p(*k as i64 + 1).clone(), cf.q(*k as i64 + 1).clone()),
            Classification::Intermediate { k, b, .. } => combination(&cf, *k, b),
        };
        if &uu * &v != &u * &vv {
            return Err(mismatch(format!("classification rebuilds ({uu})/({vv})")));
        }
        r.oracle = Some("classification rebuilds U/V".into());
    }
    Ok(r)
}

pub fn tree(a: &TreeArgs) -> Res<Report> {
    let (_, f) = input(&a.input)?;
    let mut r = match a.format {
        TreeFormatArg::Dot | TreeFormatArg::Json => {
            let fmt = if a.format == TreeFormatArg::Dot { TreeFormat::Dot } else { TreeFormat::Json };
            let mut r = Report::new(export_tree(&f, a.depth, fmt)?, Value::Null);
            r.raw = true;
            r
        }
        TreeFormatArg::Crossings => {
            let c = ford_crossings(&f, a.depth)?;
            let mut text = String::new();
            for (k, b) in c.balls.iter().enumerate() {
                let exit = b.exit_index.map(|e| e.to_string()).unwrap_or_else(|| "-".into());
                let _ = writeln!(text, "{k}: {}  enters at {}  exits at {exit}", b.sphere, b.entry_index);
            }
            let _ = writeln!(text, "uncovered: {:?}", c.uncovered);
            Report::new(text, serde_json::to_value(&c).expect("serializable"))
        }
    };
    if a.output.oracle {
        let c = ford_crossings(&f, a.depth)?;
        let cf = cf_expand(&f, a.depth + 1)?;
        for (k, b) in c.balls.iter().enumerate() {
            let want = 2 * cf.q(k as i64).degree();
            if b.entry_index != want {
                return Err(mismatch(format!("ball {k} entered at {}, 2 deg Q_{k} = {want}", b.entry_index)));
            }
        }
        r.oracle = Some(format!("{} Ford balls match the principal convergents", c.balls.len()));
    }
    Ok(r)
}

fn rate_map(field: &Field, map: RateMap, h: &str) -> Res<MapKind> {
    Ok(match map {
        RateMap::Alg => MapKind::Alg(hparam(field, h)?),
        RateMap::Artin => MapKind::Artin,
    })
}

pub fn rate(a: &RateArgs) -> Res<Report> {
    let field = field(&a.field)?;
    let map = rate_map(&field, a.map, &a.h)?;
    let mut cfg = ExperimentConfig::new(field.clone(), map.clone(), a.samples, a.len, a.seed);
    cfg.floor = a.floor;
    cfg.out = a.output.out.clone();
    let rep = rate_experiment(&cfg)?;
    let text = format!(
        "map {}  q = {}  ell = {}  samples = {}\nmean = {:.6}  sd = {:.6}  target = {:.6}\nused = {}  terminated = {}  dropped = {}\nrun hash {}\n",
        map.name(),
        field.q(),
        a.len,
        a.samples,
        rep.mean,
        rep.sd,
        rep.target,
        rep.used,
        rep.terminated,
        rep.dropped,
        rep.run_hash
    );
    let mut r = Report::new(text, serde_json::to_value(&rep).expect("serializable"));
    if a.output.oracle {
        r.oracle = Some(orbit_oracle(&field, &map, a.seed)?);
    }
    Ok(r)
}

/// Replays a few short orbits by iterating the map on the series itself
/// and compares with the symbolic replay used by the experiment.
fn orbit_oracle(field: &Field, map: &MapKind, seed: u64) -> Res<String> {
    use crate::ergodic::{rng_for, sample_haar, HaarDomain};
    let ell = 40;
    for id in 0..5 {
        let f = Element::Series(sample_haar(field, HaarDomain::L, -6 * ell as i64, &mut rng_for(seed, id)));
        let cf = cf_expand(&f, usize::MAX)?;
        match map {
            MapKind::Alg(h) => {
                let orbit = crate::farey_algebraic::alg_orbit_product(&f, h, ell)?;
                let cols = crate::ergodic::rate::alg_product_columns(&cf, h, ell)?;
                let p = &orbit.product;
                if p.tpow != 0 || p.entry(0, 0) != &cols[0][0] || p.entry(1, 0) != &cols[1][0] {
                    return Err(mismatch(format!("sample {id}: orbit product {p} differs from the replay")));
                }
            }
            _ => {
                cf_oracle(&f, &cf)?;
            }
        }
    }
    Ok(format!("5 orbits of length {ell} replayed on the series agree"))
}

fn measure(m: MeasureArg) -> Measure {
    match m {
        MeasureArg::MuG => Measure::MuG,
        MeasureArg::MuGPerturbed => Measure::MuGPerturbed,
        MeasureArg::MuA => Measure::MuA,
        MeasureArg::Haar => Measure::Haar,
    }
}

pub fn invariance(a: &InvarianceArgs) -> Res<Report> {
    let field = field(&a.field)?;
    let (map, default) = match a.map {
        MapArg::Geo => (InvariantMap::Geo, Measure::MuG),
        MapArg::Alg => (InvariantMap::Alg(hparam(&field, &a.h)?), Measure::MuA),
        MapArg::Artin => (InvariantMap::Artin, Measure::Haar),
    };
    let m = a.measure.map(measure).unwrap_or(default);
    let exact_text = |rep: &crate::ergodic::InvarianceReport| {
        format!(
            "max discrepancy = {}\ntargets = {}  pieces = {}  via complement = {}\nworst = {}\n",
            rep.max_discrepancy,
            rep.targets,
            rep.pieces,
            rep.via_complement,
            rep.worst.as_deref().unwrap_or("-")
        )
    };
    let mut r = match a.mc {
        None => {
            let rep = invariance_exact(&field, &map, m, a.depth, a.levels)?;
            Report::new(exact_text(&rep), serde_json::to_value(&rep).expect("serializable"))
        }
        Some(n) => {
            let sample = a.sample_measure.map(measure).unwrap_or(m);
            let rep = invariance_mc(&field, &map, sample, m, n, a.depth, a.seed)?;
            let text = format!(
                "chi2 = {:.3}  dof = {}  0.999 quantile = {:.3}  {}\nsamples = {}  dropped = {}\n",
                rep.statistic,
                rep.dof,
                rep.critical,
                if rep.pass { "pass" } else { "reject" },
                rep.samples,
                rep.dropped
            );
            Report::new(text, serde_json::to_value(&rep).expect("serializable"))
        }
    };
    if a.output.oracle {
        // The other tester, on the same question.
        r.oracle = Some(match a.mc {
            None => {
                if matches!(map, InvariantMap::Artin) {
                    return Err(CliError::new("PreconditionFailed", "no exact tester for the Artin map".into(), None));
                }
                let mc = invariance_mc(&field, &map, m, m, 20_000, a.depth.min(2), a.seed)?;
                let exact_zero = r.json["max_discrepancy"] == "0";
                if mc.pass != exact_zero {
                    return Err(mismatch(format!("exact and Monte Carlo testers disagree (chi2 {:.2})", mc.statistic)));
                }
                format!("Monte Carlo chi2 = {:.2} on {} dof agrees", mc.statistic, mc.dof)
            }
            Some(_) => {
                let exact = invariance_exact(&field, &map, m, a.depth.min(3), a.levels)?;
                format!("exact tester at depth {}: max discrepancy {}", a.depth.min(3), exact.max_discrepancy)
            }
        });
    }
    Ok(r)
}

pub fn degrees(a: &DegreeArgs) -> Res<Report> {
    let field = field(&a.field)?;
    let mut cfg = ExperimentConfig::new(field.clone(), MapKind::Artin, a.samples, a.k, a.seed);
    cfg.floor = a.floor;
    cfg.out = a.output.out.clone();
    let rep = degree_stats(&cfg)?;
    let mut text = format!("q = {}  k = {}  samples = {}  target q/(q-1) = {:.6}\n", field.q(), a.k, a.samples, rep.target);
    for c in &rep.checkpoints {
        let _ = writeln!(
            text,
            "k = {:>4}: mean sum deg A_n / k = {:.6}   mean deg A_(k+1) / k = {:.6}   max = {:.6}",
            c.k, c.mean_cumulative, c.mean_next, c.max_next
        );
    }
    let total: u64 = rep.histogram.iter().sum();
    for (d, n) in rep.histogram.iter().enumerate().skip(1).take(8) {
        let law = (field.q() as f64 - 1.0) * (field.q() as f64).powi(-(d as i32));
        let _ = writeln!(text, "deg {d}: {:.6} (law {:.6})", *n as f64 / total.max(1) as f64, law);
    }
    let _ = writeln!(text, "used = {}  dropped = {}\nrun hash {}", rep.used, rep.dropped, rep.run_hash);
    let mut r = Report::new(text, serde_json::to_value(&rep).expect("serializable"));
    if a.output.oracle {
        r.oracle = Some(orbit_oracle(&field, &MapKind::Artin, a.seed)?);
    }
    Ok(r)
}
