use std::path::Path;

use num_bigint::BigUint;
use serde_json::{json, Value};

use gmx_core::amc::Loc;
use gmx_core::benor::{
    adt_components, algebraic_degree, extract_polysystem, graphing_benor_bound, graphing_components_1d,
    interpret_act, interpret_adt, interval_family, kth_bit_tree, mate_certificate, parse_act, parse_adt, pow2_ceil,
    real_mate, steele_yao_bound, AlgComputationTree, AlgDecisionTree, PolySystem,
};
use gmx_core::entropy::{
    cell_decomposition, computational_forest, entropic_cotree, h0_estimate, state_cover_hk, Admissibility,
};
use gmx_core::fans::{
    certificate_quantities, collins_systems, lift_modulus, make_fan, parametric_profile_with, sample_points,
    separates, spacing_check, volatility, brute_force_volatility, CompactK, ParamNetwork, RhoFan, Surface,
};
use gmx_core::graphings::symbolic::{EmptinessOracle, InputSpace, SymbolicOracle};
use gmx_core::graphings::{Emptiness, GraphingRep};
use gmx_core::machines::{
    compile_pram, compile_sram, parse_pram, parse_sram, pram_agreement, sram_agreement, PramProgram, SramProgram,
    TraceAgreement,
};
use gmx_core::realalg::{fmt_rat, parse_rat, rat::to_f64, MultiPoly, Rat, UniPoly};
use gmx_core::{registry, Error, Result};

use crate::{BoundsSource, Command, Common, FanCommand, Kind, Source};

pub struct Outcome {
    pub name: &'static str,
    pub inputs: Vec<Vec<u8>>,
    pub outputs: Value,
    pub pass: bool,
    pub csv: Option<String>,
    pub dot: Option<String>,
}

impl Outcome {
    fn new(name: &'static str, inputs: Vec<Vec<u8>>, outputs: Value) -> Self {
        Outcome {
            name,
            inputs,
            outputs,
            pass: true,
            csv: None,
            dot: None,
        }
    }
}

enum Loaded {
    Sram(SramProgram),
    Pram(PramProgram),
    Adt(AlgDecisionTree),
    Act(AlgComputationTree),
    Graphing(Box<GraphingRep>),
}

impl Loaded {
    fn graphing(&self) -> Result<GraphingRep> {
        match self {
            Loaded::Sram(p) => compile_sram(p),
            Loaded::Pram(p) => compile_pram(p),
            Loaded::Adt(t) => Ok(interpret_adt(t)),
            Loaded::Act(t) => interpret_act(t),
            Loaded::Graphing(g) => Ok((**g).clone()),
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            Loaded::Sram(_) => "sram",
            Loaded::Pram(_) => "pram",
            Loaded::Adt(_) => "adt",
            Loaded::Act(_) => "act",
            Loaded::Graphing(_) => "graphing",
        }
    }

    /// Inputs read by the program: `X1..Xd` with `X0 = d` for machines,
    /// `X1..Xn` for trees and graphings.
    fn space(&self, d: usize) -> InputSpace {
        let free: Vec<Loc> = match self {
            Loaded::Adt(t) => (1..=t.vars).map(Loc::shared).collect(),
            Loaded::Act(t) => (1..=t.vars).map(Loc::shared).collect(),
            _ => (1..=d as u64).map(Loc::shared).collect(),
        };
        match self {
            Loaded::Sram(_) | Loaded::Pram(_) => {
                let mut fixed = gmx_core::amc::Memory::new();
                fixed.set(Loc::shared(0), Rat::from_integer((d as i64).into()));
                InputSpace::integers(free, fixed)
            }
            _ => InputSpace::reals(free),
        }
    }
}

fn read(path: &Path) -> Result<Vec<u8>> {
    std::fs::read(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn read_text(path: &Path) -> Result<(String, Vec<u8>)> {
    let bytes = read(path)?;
    let text = String::from_utf8(bytes.clone()).map_err(|_| Error::parse(format!("{} is not utf-8", path.display())))?;
    Ok((text, bytes))
}

fn infer_kind(path: &Path) -> Result<Kind> {
    match path.extension().and_then(|e| e.to_str()) {
        Some("sram") => Ok(Kind::Sram),
        Some("pram") => Ok(Kind::Pram),
        Some("adt") => Ok(Kind::Adt),
        Some("act") => Ok(Kind::Act),
        Some("json") => Ok(Kind::Graphing),
        _ => Err(Error::invalid(format!("cannot infer the kind of {}; pass --kind", path.display()))),
    }
}

fn load(path: &Path, kind: Option<Kind>) -> Result<(Loaded, Vec<u8>)> {
    let kind = match kind {
        Some(k) => k,
        None => infer_kind(path)?,
    };
    let (text, bytes) = read_text(path)?;
    let loaded = match kind {
        Kind::Sram => Loaded::Sram(parse_sram(&text)?),
        Kind::Pram => Loaded::Pram(parse_pram(&text)?),
        Kind::Adt => Loaded::Adt(parse_adt(&text)?),
        Kind::Act => Loaded::Act(parse_act(&text)?),
        Kind::Graphing => {
            let g: GraphingRep = serde_json::from_str(&text)?;
            g.validate()?;
            Loaded::Graphing(Box::new(g))
        }
    };
    Ok((loaded, bytes))
}

fn load_source(src: &Source) -> Result<(Loaded, Vec<u8>)> {
    load(&src.input, src.kind)
}

fn parse_list(s: &str) -> Result<Vec<Rat>> {
    s.split(',').filter(|t| !t.trim().is_empty()).map(parse_rat).collect()
}

fn parse_indices(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| t.trim().parse::<usize>().map_err(|_| Error::parse(format!("bad edge id `{t}`"))))
        .collect()
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

pub fn run(cmd: &Command, common: &Common) -> Result<Outcome> {
    match cmd {
        Command::Parse(src) => parse(src),
        Command::Compile(src) => compile(src),
        Command::Simulate { src, input } => simulate(src, input, common),
        Command::Analyze { src, k, oracle } => analyze(src, *k, oracle, common),
        Command::Bounds { src, k, n } => bounds(src, *k, *n),
        Command::Extract { src, k, path } => extract(src, *k, path.as_deref()),
        Command::Certify { src, k, inputs } => certify(src, *k, *inputs),
        Command::Fan(f) => fan(f, common),
    }
}

fn parse(src: &Source) -> Result<Outcome> {
    let (l, bytes) = load_source(src)?;
    let (normal, size) = match &l {
        Loaded::Sram(p) => (p.to_string(), json!({ "lines": p.len() })),
        Loaded::Pram(p) => (p.to_string(), json!({ "processors": p.len() })),
        Loaded::Adt(t) => (t.to_string(), json!({ "height": t.height(), "vars": t.vars })),
        Loaded::Act(t) => (t.to_string(), json!({ "depth": t.depth(), "vars": t.vars })),
        Loaded::Graphing(g) => (
            serde_json::to_string(g.as_ref())?,
            json!({ "states": g.states.len(), "edges": g.edges.len() }),
        ),
    };
    Ok(Outcome::new(
        "parse",
        vec![bytes],
        json!({ "kind": l.kind(), "size": size, "normal_form": normal }),
    ))
}

fn compile(src: &Source) -> Result<Outcome> {
    let (l, bytes) = load_source(src)?;
    let g = l.graphing()?;
    let mut o = Outcome::new(
        "compile",
        vec![bytes],
        json!({
            "kind": l.kind(),
            "states": g.states.len(),
            "edges": g.edges.len(),
            "deterministic": g.is_deterministic(),
            "treeing": g.is_treeing(),
            "graphing": to_value(&g),
        }),
    );
    o.dot = Some(g.to_dot());
    Ok(o)
}

fn simulate(src: &Source, input: &str, common: &Common) -> Result<Outcome> {
    let (l, bytes) = load_source(src)?;
    let x = parse_list(input)?;
    let g = l.graphing()?;
    let budget = common.budget;
    let start_mem = gmx_core::machines::initial_memory(&g, &x);
    let start = gmx_core::graphings::ConfigPoint::new(start_mem.clone(), g.init.unwrap_or(0));
    let run = g.run(&start, budget)?;
    let accepted = Some(run.last.state) == g.top;
    let reference: Option<TraceAgreement> = match &l {
        Loaded::Sram(p) => Some(sram_agreement(p, &g, &x, budget)),
        Loaded::Pram(p) => Some(pram_agreement(p, &g, &x, budget)),
        Loaded::Adt(t) => Some(if t.decide(&x) == accepted {
            TraceAgreement::Agree { steps: run.steps }
        } else {
            TraceAgreement::Diverge { step: run.steps }
        }),
        Loaded::Act(_) | Loaded::Graphing(_) => None,
    };
    let agree = reference.as_ref().is_none_or(TraceAgreement::holds);
    let mut o = Outcome::new(
        "simulate",
        vec![bytes, input.as_bytes().to_vec(), budget.to_string().into_bytes()],
        json!({
            "accepted": accepted,
            "halted": run.halted,
            "steps": run.steps,
            "final_state": g.states[run.last.state],
            "memory": run.last.mem.iter().map(|(l, v)| (l.to_string(), fmt_rat(v))).collect::<Vec<_>>(),
            "interpreter_agrees": reference.as_ref().map(TraceAgreement::holds),
            "agreement": reference.map(|r| to_value(&r)),
        }),
    );
    o.pass = agree;
    Ok(o)
}

fn analyze(src: &Source, k: usize, oracle: &str, common: &Common) -> Result<Outcome> {
    let (l, bytes) = load_source(src)?;
    let g = l.graphing()?;
    if !g.is_deterministic() {
        return Err(Error::Nondeterministic("analysis needs a deterministic graphing".into()));
    }
    let reg = registry::oracles(common.seed);
    let orc: &dyn EmptinessOracle = reg.get(oracle)?;
    let space = l.space(1);
    let mut rows = Vec::new();
    let mut csv = String::from("k,count,unnormalized,normalized,semantic_count\n");
    for j in 0..=k {
        let syn = state_cover_hk(&g, j, Admissibility::Syntactic);
        let sem = state_cover_hk(
            &g,
            j,
            Admissibility::Semantic {
                oracle: orc,
                space: &space,
            },
        );
        csv.push_str(&format!(
            "{j},{},{},{},{}\n",
            syn.count,
            syn.unnormalized(),
            syn.value(),
            sem.count
        ));
        rows.push(json!({
            "k": j,
            "count": syn.count.to_string(),
            "h_unnormalized": syn.unnormalized(),
            "h": syn.value(),
            "semantic_count": sem.count.to_string(),
        }));
    }
    let h0 = h0_estimate(&g, k, Admissibility::Syntactic);
    let cells = cell_decomposition(&g, k, orc, &space);
    let count = |e: Emptiness| cells.iter().filter(|c| c.emptiness == e).count();
    let mut dot = None;
    let cotree = match g.top {
        Some(top) => {
            let t = entropic_cotree(&g, k, top, orc, &space);
            let forest = computational_forest(&t);
            dot = Some(t.to_dot(&g));
            json!({
                "nodes": t.nodes.len(),
                "max_depth": t.max_depth(),
                "per_depth": (0..=t.max_depth()).map(|m| t.depth_count(m)).collect::<Vec<_>>(),
                "forest_nodes": forest.nodes.len(),
                "forest_is_tree": forest.is_tree(),
            })
        }
        None => Value::Null,
    };
    let mut o = Outcome::new(
        "analyze",
        vec![bytes, format!("k={k};oracle={oracle}").into_bytes()],
        json!({
            "kind": l.kind(),
            "k": k,
            "entropies": rows,
            "h0": { "value": h0.value, "argmin": h0.argmin, "certificate": to_value(&h0.entropies) },
            "cells": {
                "total": cells.len(),
                "nonempty": count(Emptiness::Nonempty),
                "empty": count(Emptiness::Empty),
                "unknown": count(Emptiness::Unknown),
            },
            "cotree": cotree,
        }),
    );
    o.csv = Some(csv);
    o.dot = dot;
    Ok(o)
}

fn bounds(src: &BoundsSource, k: usize, n: u32) -> Result<Outcome> {
    let (loaded, bytes) = match (&src.family, &src.input) {
        (Some(f), None) => (Loaded::Adt(family(f)?), f.as_bytes().to_vec()),
        (None, Some(p)) => load(p, src.kind)?,
        _ => return Err(Error::invalid("pass exactly one of --in and --family")),
    };
    let g = loaded.graphing()?;
    let degree = algebraic_degree(&g)?.max(1) as u32;
    let h0 = h0_estimate(&g, k.max(1), Admissibility::Syntactic);
    let pow = pow2_ceil(h0.value);
    let bound = graphing_benor_bound(&pow, k as u32, degree, n);
    let mut out = json!({
        "kind": loaded.kind(),
        "k": k,
        "n": n,
        "degree": degree,
        "h0": h0.value,
        "pow2_h0": pow.to_string(),
        "bound": bound.to_string(),
    });
    let mut pass = true;
    if n == 1 {
        let oracle = graphing_components_1d(&g, k)?;
        let ok = BigUint::from(oracle) <= bound;
        pass &= ok;
        out["oracle_components"] = json!(oracle);
        out["bound_holds"] = json!(ok);
        if let Loaded::Adt(t) = &loaded {
            let direct = adt_components(t)?;
            let sy = steele_yao_bound(t.height() as u32, t.order.max(2), 1)?;
            let sy_ok = BigUint::from(direct) <= sy;
            pass &= sy_ok;
            out["tree"] = json!({
                "height": t.height(),
                "components": direct,
                "steele_yao": sy.to_string(),
                "steele_yao_holds": sy_ok,
            });
        }
    }
    out["verdict"] = json!(if pass { "PASS" } else { "FAIL" });
    let mut o = Outcome::new("bounds", vec![bytes, format!("k={k};n={n}").into_bytes()], out);
    o.pass = pass;
    Ok(o)
}

fn family(spec: &str) -> Result<AlgDecisionTree> {
    let parts: Vec<&str> = spec.split(':').collect();
    let num = |s: &str| s.parse::<u32>().map_err(|_| Error::parse(format!("bad number `{s}` in `{spec}`")));
    match parts.as_slice() {
        ["intervals", n] => Ok(interval_family(num(n)? as usize)),
        ["kth-bit", m, k] => kth_bit_tree(num(m)?, num(k)?),
        _ => Err(Error::parse(format!("unknown family `{spec}`"))),
    }
}

fn system_json(sys: &PolySystem, path: &[usize]) -> Value {
    json!({
        "path": path,
        "constraints": sys.constraints.iter().map(|c| sys.display_constraint(c)).collect::<Vec<_>>(),
        "vars": sys.vars.len(),
        "inputs": sys.inputs,
        "steps": sys.steps,
        "max_degree": sys.max_degree(),
        "vars_within_bound": sys.vars.len() <= sys.inputs + sys.steps,
    })
}

fn extract(src: &Source, k: usize, path: Option<&str>) -> Result<Outcome> {
    let (l, bytes) = load_source(src)?;
    let g = l.graphing()?;
    let space = l.space(1);
    let start = g.init.unwrap_or(0);
    let paths: Vec<Vec<usize>> = match path {
        Some(p) => vec![parse_indices(p)?],
        None => {
            let mut done = Vec::new();
            let mut stack = vec![Vec::<usize>::new()];
            while let Some(p) = stack.pop() {
                let state = p.last().map_or(start, |&e| g.edges[e].to);
                let next: Vec<usize> = g.outgoing(state).map(|(id, _)| id).collect();
                if p.len() == k || next.is_empty() {
                    done.push(p);
                    continue;
                }
                for id in next {
                    let mut q = p.clone();
                    q.push(id);
                    if SymbolicOracle.emptiness(&g, &space, start, &q) != Emptiness::Empty {
                        stack.push(q);
                    }
                }
            }
            done.sort();
            done
        }
    };
    let mut systems = Vec::new();
    let mut pass = true;
    for p in &paths {
        let sys = extract_polysystem(&g, &space, p)?;
        pass &= sys.vars.len() <= sys.inputs + sys.steps;
        systems.push(system_json(&sys, p));
    }
    let mut o = Outcome::new(
        "extract",
        vec![bytes, format!("k={k};path={path:?}").into_bytes()],
        json!({ "kind": l.kind(), "systems": systems }),
    );
    o.pass = pass;
    Ok(o)
}

fn mate_measure(l: &Loaded, k: usize, inputs: usize) -> Result<gmx_core::benor::MateCertificate> {
    let t = l.graphing()?;
    let q = real_mate(&t)?;
    mate_certificate(&t, &q, inputs, k)
}

fn certify(src: &Source, k: usize, inputs: usize) -> Result<Outcome> {
    let (l, bytes) = load_source(src)?;
    let m = mate_measure(&l, k, inputs)?;
    let p = m.processors.max(1) as u32;
    let q = certificate_quantities(p, k.max(1) as u32, Some(m))?;
    let mut o = Outcome::new(
        "certify",
        vec![bytes, format!("k={k};inputs={inputs}").into_bytes()],
        to_value(&q),
    );
    o.pass = q.holds;
    Ok(o)
}

fn load_fan(path: &Path) -> Result<(RhoFan, Vec<u8>)> {
    let (text, bytes) = read_text(path)?;
    Ok((serde_json::from_str(&text)?, bytes))
}

fn load_surfaces(path: &Path) -> Result<(Vec<Surface>, Vec<u8>)> {
    let (text, bytes) = read_text(path)?;
    let raw: Vec<Surface> = serde_json::from_str(&text)?;
    let s = raw.into_iter().map(|s| Surface::new(s.poly)).collect::<Result<Vec<_>>>()?;
    Ok((s, bytes))
}

fn xyz(p: &MultiPoly) -> String {
    p.display_with(&|v| ["x", "y", "z"].get(v as usize).map_or(format!("v{v}"), |s| s.to_string()))
}

fn fan(cmd: &FanCommand, common: &Common) -> Result<Outcome> {
    match cmd {
        FanCommand::Profile { input, solver } => {
            let (text, bytes) = read_text(input)?;
            let net = ParamNetwork::from_json(&text)?;
            let reg = registry::maxflow_solvers();
            let profile = parametric_profile_with(&net, reg.get(solver)?, gmx_core::fans::profile::DEFAULT_DEPTH)?;
            let fan = make_fan(&profile)?;
            let mut csv = String::from("x,y\n");
            for (x, y) in &fan.points {
                csv.push_str(&format!("{},{}\n", fmt_rat(x), fmt_rat(y)));
            }
            let mut o = Outcome::new(
                "fan profile",
                vec![bytes, solver.as_bytes().to_vec()],
                json!({
                    "rho": fan.rho,
                    "beta": fan.beta,
                    "convexity": fan.convexity,
                    "breakpoints": fan.breakpoints().iter().map(|(x, y)| [fmt_rat(x), fmt_rat(y)]).collect::<Vec<_>>(),
                    "slopes": profile.slopes().iter().map(fmt_rat).collect::<Vec<_>>(),
                    "fan": to_value(&fan),
                }),
            );
            o.csv = Some(csv);
            Ok(o)
        }
        FanCommand::Separate {
            input,
            surfaces,
            mu,
            mu_xy,
        } => {
            let (fan, fb) = load_fan(input)?;
            let (s, sb) = load_surfaces(surfaces)?;
            let k = CompactK::new(parse_rat(mu)?, parse_rat(mu_xy)?)?;
            let r = separates(&s, &fan, &k, common.budget)?;
            Ok(Outcome::new(
                "fan separate",
                vec![fb, sb, format!("mu={mu};mu_xy={mu_xy}").into_bytes()],
                to_value(&r),
            ))
        }
        FanCommand::Sample { input, ds } => {
            let (fan, fb) = load_fan(input)?;
            let pts = sample_points(&fan, *ds)?;
            let report = spacing_check(&fan, *ds)?;
            let modulus = lift_modulus(&pts);
            let stated = BigUint::from(10 * *ds) << fan.beta;
            let mut csv = String::from("segment,k,x,y\n");
            for p in &pts {
                csv.push_str(&format!("{},{},{},{}\n", p.segment, p.k, fmt_rat(&p.x), fmt_rat(&p.y)));
            }
            let stated_clears = modulus.magnitude() <= &stated && (&stated % modulus.magnitude()) == BigUint::from(0u32);
            let mut o = Outcome::new(
                "fan sample",
                vec![fb, ds.to_string().into_bytes()],
                json!({
                    "points": to_value(&pts),
                    "spacing": to_value(&report),
                    "min_gap_approx": to_f64(&report.min_gap),
                    "lift_modulus": modulus.to_string(),
                    "stated_modulus": stated.to_string(),
                    "stated_modulus_clears": stated_clears,
                }),
            );
            o.pass = report.holds;
            o.csv = Some(csv);
            Ok(o)
        }
        FanCommand::Volatility {
            poly,
            domain,
            resolution,
        } => {
            let c = UniPoly::new(parse_list(poly)?);
            let d = parse_list(domain)?;
            let [lo, hi] = d.as_slice() else {
                return Err(Error::parse("--box takes `lo,hi`"));
            };
            let v = volatility(&c, lo, hi)?;
            let mut out = json!({ "poly": c.to_string(), "volatility": v });
            let mut pass = true;
            if *resolution > 0 {
                let b = brute_force_volatility(&c, lo, hi, 64, *resolution);
                out["sampled"] = json!(b);
                pass = b == v;
            }
            let mut o = Outcome::new(
                "fan volatility",
                vec![poly.as_bytes().to_vec(), domain.as_bytes().to_vec(), resolution.to_string().into_bytes()],
                out,
            );
            o.pass = pass;
            Ok(o)
        }
        FanCommand::Collins { surfaces, mu, mu_xy } => {
            let (s, sb) = load_surfaces(surfaces)?;
            let k = CompactK::new(parse_rat(mu)?, parse_rat(mu_xy)?)?;
            let systems = collins_systems(&s, &k);
            let shown: Vec<Value> = systems
                .iter()
                .map(|sys| {
                    json!({
                        "kind": sys.kind,
                        "surfaces": sys.surfaces,
                        "equations": sys.equations.iter().map(|p| format!("{} = 0", xyz(p))).collect::<Vec<_>>(),
                    })
                })
                .collect();
            Ok(Outcome::new(
                "fan collins",
                vec![sb, format!("mu={mu};mu_xy={mu_xy}").into_bytes()],
                json!({ "count": systems.len(), "systems": shown }),
            ))
        }
        FanCommand::Certify { p, k, input, inputs } => {
            let (measured, bytes) = match input {
                Some(path) => {
                    let (l, bytes) = load(path, None)?;
                    (Some(mate_measure(&l, *k as usize, *inputs)?), bytes)
                }
                None => (None, Vec::new()),
            };
            let q = certificate_quantities(*p, *k, measured)?;
            let mut o = Outcome::new(
                "fan certify",
                vec![bytes, format!("p={p};k={k};inputs={inputs}").into_bytes()],
                to_value(&q),
            );
            o.pass = q.holds;
            Ok(o)
        }
    }
}
