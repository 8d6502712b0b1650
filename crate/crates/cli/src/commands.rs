use crate::input::{load_fan, load_point};
use crate::report::{fan_hash, Format, Outcome};
use crate::{Approx, CliError, Command, HeightArg, LineKind, RegionArg, RunConfig, ScheduleArg, Target};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use toric_dioph::approx::{
    estimate_alpha_on_curve, liouville_search, search_rows, verify_accumulation, Region, Schedule, SearchConfig,
};
use toric_dioph::arith::{cox_lift, distance, salberger_height, HeightKind, Place};
use toric_dioph::collections::{accumulating_locus, beta, diagnostics_star, locus_status, primitive_collections, LocusStatus};
use toric_dioph::corpus::{self, CorpusEntry};
use toric_dioph::curves::{chart_line, enumerate_positive_relations, general_line, min_very_free_degree, splitting_type, very_free};
use toric_dioph::divisor::{d_sigma, deg_relation, support_function};
use toric_dioph::kleinschmidt::KleinschmidtFan;
use toric_dioph::positivity::{effective_cone, positivity, sigma0, wall_criterion};
use toric_dioph::{Fan, FanFile, PicBasis, Relation, TDivisor};

type Result<T> = std::result::Result<T, CliError>;

/// Success value, or the error kind and message for steps whose preconditions may fail.
fn attempt<T: Serialize>(r: toric_dioph::Result<T>) -> Value {
    match r {
        Ok(v) => json!(v),
        Err(e) => json!({"error": e.kind(), "message": e.to_string()}),
    }
}

fn done(fan: &Fan, result: Value) -> Outcome {
    Outcome {
        fan_hash: fan_hash(fan),
        result,
        passed: true,
        rows: None,
    }
}

fn load(target: &Target) -> Result<(Fan, TDivisor)> {
    let fan = load_fan(&target.fan)?;
    let d = target.divisor.resolve(&fan)?;
    Ok((fan, d))
}

fn default_chart(fan: &Fan, chart: Option<usize>) -> Result<usize> {
    match chart {
        Some(c) if c >= fan.n_cones() => Err(CliError::usage(
            "--chart",
            format!("cone {c} out of range, the fan has {} maximal cones", fan.n_cones()),
        )),
        Some(c) => Ok(c),
        None => Ok(sigma0(fan)?.unwrap_or(0)),
    }
}

pub fn dispatch(cfg: &RunConfig) -> Result<Outcome> {
    match &cfg.command {
        Command::Validate { fan } => validate(fan),
        Command::Analyze(t) => {
            let (fan, d) = load(t)?;
            let result = analysis(&fan, &d)?;
            Ok(done(&fan, result))
        }
        Command::Divisor(t) => divisor(t),
        Command::Curve { target, bound, relation } => {
            curve(target, *bound, relation.as_ref().map(|r| Relation(r.0.clone())), cfg.seed)
        }
        Command::Approx { mode } => approx(mode, cfg.format),
        Command::Kleinschmidt { s, t, a, divisor } => kleinschmidt(*s, *t, a, divisor),
        Command::Corpus { bound } => corpus_suite(*bound, cfg.seed),
    }
}

fn validate(source: &str) -> Result<Outcome> {
    let fan = load_fan(source)?;
    let ok = fan.is_smooth_complete();
    let mut result = json!({
        "fan": FanFile::from(fan.clone()),
        "report": fan.report(),
    });
    if ok {
        result["picard_rank"] = json!(fan.picard_rank());
    }
    Ok(Outcome {
        passed: ok,
        ..done(&fan, result)
    })
}

fn analysis(fan: &Fan, d: &TDivisor) -> Result<Value> {
    fan.require_smooth_complete()?;
    let pic = PicBasis::new(fan)?;
    let eff = effective_cone(fan)?;
    Ok(json!({
        "picard": {"rank": pic.rank(), "relations": pic.relations()},
        "hypotheses": {"simplicial_effective_cone": eff.simplicial, "sigma0": eff.sigma0, "agree": eff.consistent},
        "effective_cone": eff,
        "primitive_collections": primitive_collections(fan)?,
        "divisor": d,
        "class": pic.class_of(d),
        "positivity": positivity(fan, d)?,
        "beta": attempt(beta(fan, d)),
        "locus": attempt(locus_status(fan, d)),
        "diagnostics": attempt(diagnostics_star(fan, d)),
    }))
}

fn divisor(t: &Target) -> Result<Outcome> {
    let (fan, d) = load(t)?;
    fan.require_smooth_complete()?;
    let pic = PicBasis::new(&fan)?;
    let (wall_nef, wall_ample) = wall_criterion(&fan, &d)?;
    let cones: Vec<Value> = (0..fan.n_cones())
        .map(|c| {
            json!({
                "cone": c,
                "rays": fan.cone(c),
                "support": attempt(support_function(&fan, &d, c)),
                "d_sigma": attempt(d_sigma(&fan, &d, c)),
            })
        })
        .collect();
    let result = json!({
        "divisor": d,
        "class": pic.class_of(&d),
        "positivity": positivity(&fan, &d)?,
        "wall_criterion": {"nef": wall_nef, "ample": wall_ample},
        "cones": cones,
    });
    Ok(done(&fan, result))
}

fn curve(t: &Target, bound: i64, relation: Option<Relation>, seed: u64) -> Result<Outcome> {
    let (fan, d) = load(t)?;
    fan.require_smooth_complete()?;
    let relations = match relation {
        Some(r) => {
            if r.0.len() != fan.n_rays() {
                return Err(CliError::usage(
                    "--relation",
                    format!("expected {} coefficients, got {}", fan.n_rays(), r.0.len()),
                ));
            }
            vec![r]
        }
        None => enumerate_positive_relations(&fan, bound)?,
    };
    let rows: Vec<Value> = relations
        .iter()
        .map(|c| {
            json!({
                "relation": c,
                "total_degree": c.total_degree(),
                "degree": attempt(deg_relation(&fan, &d, c)),
                "very_free": attempt(very_free(&fan, c)),
                "splitting_type": attempt(splitting_type(&fan, c, seed)),
            })
        })
        .collect();
    let min = min_very_free_degree(&fan, &d, bound).map(|m| m.map(|(c, deg)| json!({"relation": c, "degree": deg})));
    let result = json!({
        "divisor": d,
        "bound": bound,
        "relations": rows,
        "min_very_free": attempt(min),
    });
    Ok(done(&fan, result))
}

fn schedules(arg: ScheduleArg) -> Vec<Schedule> {
    match arg {
        ScheduleArg::All => vec![Schedule::ZeroFromAbove, Schedule::ZeroFromBelow, Schedule::Infinity],
        ScheduleArg::ZeroFromAbove => vec![Schedule::ZeroFromAbove],
        ScheduleArg::ZeroFromBelow => vec![Schedule::ZeroFromBelow],
        ScheduleArg::Infinity => vec![Schedule::Infinity],
    }
}

fn approx(mode: &Approx, format: Format) -> Result<Outcome> {
    match mode {
        Approx::Slope {
            target,
            line,
            kind,
            chart,
            place,
            schedule,
        } => {
            let (fan, d) = load(target)?;
            let chart = default_chart(&fan, *chart)?;
            let curve = match kind {
                LineKind::General => general_line(&fan, chart, &line.0)?,
                LineKind::Chart => chart_line(&fan, chart, &line.0)?,
            };
            let estimates = schedules(*schedule)
                .into_iter()
                .map(|s| {
                    let e = estimate_alpha_on_curve(&fan, &d, &curve, chart, *place, s)?;
                    Ok(json!({
                        "schedule": s,
                        "estimate": e.estimate,
                        "window": e.window,
                        "residual": e.residual,
                        "points": e.sequence.points.len(),
                    }))
                })
                .collect::<Result<Vec<Value>>>()?;
            Ok(done(&fan, json!({"chart": chart, "estimates": estimates})))
        }
        Approx::Search {
            target,
            gamma,
            bound,
            chart,
            place,
            height,
            region,
        } => {
            let (fan, d) = load(target)?;
            let chart = default_chart(&fan, *chart)?;
            let mut sc = SearchConfig::new(chart, *gamma, *bound);
            sc.place = *place;
            sc.height = match height {
                HeightArg::Salberger => HeightKind::Salberger,
                HeightArg::Chart => HeightKind::ChartMonomial(chart),
            };
            sc.region = match region {
                RegionArg::All => Region::All,
                RegionArg::OffLocus => Region::OffLocus(accumulating_locus(&fan, &d)?),
                RegionArg::OnLocus => Region::OnLocus(accumulating_locus(&fan, &d)?),
            };
            let r = liouville_search(&fan, &d, &sc)?;
            let rows = match format {
                Format::Csv => Some(search_rows(&fan, &d, &sc)?),
                _ => None,
            };
            Ok(Outcome {
                rows,
                ..done(&fan, json!(r))
            })
        }
        Approx::Verify { target, bound, place } => {
            let (fan, d) = load(target)?;
            let r = verify_accumulation(&fan, &d, *bound, *place)?;
            Ok(Outcome {
                passed: r.pass,
                ..done(&fan, json!(r))
            })
        }
        Approx::Point { target, point, place } => {
            let (fan, d) = load(target)?;
            let p = load_point(point)?;
            let x = cox_lift(&fan, &p)?;
            let result = json!({
                "point": p.to_string(),
                "chart": p.chart,
                "cox": x.0.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
                "height": salberger_height(&fan, &d, &p)?.to_string(),
                "distance": distance(&p, *place)?.to_string(),
            });
            Ok(done(&fan, result))
        }
    }
}

fn kleinschmidt(s: usize, t: usize, a: &[i64], arg: &crate::DivisorArg) -> Result<Outcome> {
    let k = KleinschmidtFan::build(s, t, a)?;
    let fan = k.fan();
    let d = arg.resolve(fan)?;
    let result = json!({
        "parameters": {"s": s, "t": t, "a": a},
        "fan": FanFile::from(fan.clone()),
        "b": k.b(),
        "classes": {"c1": k.c1(), "c2": k.c2(), "c3": k.c3()},
        "sigma0": k.sigma0(),
        "positivity": attempt(k.positivity_rank2(&d)),
        "ess_constant": attempt(k.ess_constant(&d)),
        "analysis": analysis(fan, &d)?,
    });
    Ok(done(fan, result))
}

const CORPUS_RELATION_BOUND: i64 = 6;

/// Named consistency checks for one bundled fan; `None` where a check does not apply.
fn corpus_checks(e: &CorpusEntry, bound: u64, seed: u64) -> toric_dioph::Result<Vec<(&'static str, Option<bool>)>> {
    let fan = &e.fan;
    let mut checks = vec![("smooth_complete", Some(fan.is_smooth_complete()))];
    let eff = effective_cone(fan)?;
    checks.push(("hypotheses_agree", Some(eff.consistent)));
    let test = corpus::test_divisor(fan);
    let k = TDivisor::anticanonical(fan.n_rays());
    let mut walls = true;
    for d in [&k, &test] {
        let p = positivity(fan, d)?;
        walls &= wall_criterion(fan, d)? == (p.nef, p.ample);
    }
    checks.push(("positivity_matches_walls", Some(walls)));
    let min_degree = enumerate_positive_relations(fan, CORPUS_RELATION_BOUND)?
        .iter()
        .map(|r| deg_relation(fan, &test, r))
        .collect::<toric_dioph::Result<Vec<i64>>>()?
        .into_iter()
        .min();
    checks.push((
        "beta_is_min_degree",
        eff.sigma0.map(|_| beta(fan, &test).ok().map(|b| b.beta) == min_degree),
    ));
    checks.push(("diagnostics", diagnostics_star(fan, &test).ok().map(|r| r.all_pass())));
    let mut splitting = true;
    for c in enumerate_positive_relations(fan, 2)? {
        splitting &= very_free(fan, &c)? == (splitting_type(fan, &c, seed)?.mu_min() >= 1);
    }
    checks.push(("very_free_matches_splitting", Some(splitting)));
    let ess = e
        .kleinschmidt
        .as_ref()
        .and_then(|kf| kf.ess_constant(&k).ok())
        .map(|x| x.verified() && x.very_free);
    checks.push(("ess_constant_verified", ess));
    let accumulation = match locus_status(fan, &k)? {
        LocusStatus::Exact { .. } if fan.dim() == 2 => Some(verify_accumulation(fan, &k, bound, Place::Infinity)?.pass),
        _ => None,
    };
    checks.push(("accumulation_verified", accumulation));
    Ok(checks)
}

fn corpus_suite(bound: u64, seed: u64) -> Result<Outcome> {
    let entries = corpus::all();
    let rows = entries
        .par_iter()
        .map(|e| {
            let checks = corpus_checks(e, bound, seed)?;
            let pass = checks.iter().all(|(_, c)| *c != Some(false));
            let map: serde_json::Map<String, Value> = checks.into_iter().map(|(n, c)| (n.to_string(), json!(c))).collect();
            Ok((fan_hash(&e.fan), pass, json!({"name": e.name, "fan_hash": fan_hash(&e.fan), "pass": pass, "checks": map})))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut hasher = Sha256::new();
    for (h, _, _) in &rows {
        hasher.update(h.as_bytes());
    }
    let passed = rows.iter().all(|(_, p, _)| *p);
    let entries: Vec<Value> = rows.into_iter().map(|(_, _, v)| v).collect();
    Ok(Outcome {
        fan_hash: hex::encode(hasher.finalize()),
        result: json!({"bound": bound, "entries": entries}),
        passed,
        rows: None,
    })
}
