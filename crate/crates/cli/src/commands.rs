use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::time::Duration;

use serde_json::{json, Value};
use thiserror::Error;
use weylks_core::certificate::{builtin, compile, find_assignment, find_contradiction};
use weylks_core::oracle::grid::{
    self, check_eigenstate, epr_momentum_leakage, find_ghz_analogues, make_epr_delta, GridBinding,
    GridSpec,
};
use weylks_core::oracle::matrix::{self, build_rep, build_rep_with_dim, common_eigenstates_tol};
use weylks_core::oracle::{Bound, ClaimCheck, Tolerances};
use weylks_core::search::{search_obstruction, space_size, SearchParams, SearchStatus};
use weylks_core::{parse_monomial, Certificate, DofSystem, Generator, WeylMonomial};

use crate::args::{OracleArgs, PrintArgs, SearchArgs, Source, Target, VerifyArgs};
use crate::report::{claim_table, EigenRow, InputDigest, RunReport, WitnessReport};
use crate::trace::{class_lines, context_lines, phase_text, unknown_lines, witness_line};

#[derive(Debug, Error)]
pub enum CliError {
    /// Malformed input or flags.
    #[error("{0}")]
    Input(String),
    /// The run itself failed.
    #[error("{0}")]
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Runtime(_) => 1,
        }
    }
}

fn input(e: impl ToString) -> CliError {
    CliError::Input(e.to_string())
}

fn runtime(e: impl ToString) -> CliError {
    CliError::Runtime(e.to_string())
}

pub type CliResult<T> = Result<T, CliError>;

/// A finished run: what to print, what to record, and how to exit.
pub struct Outcome {
    pub human: String,
    pub exit: u8,
}

fn load(
    path: Option<&Path>,
    name: Option<&str>,
    report: &mut RunReport,
) -> CliResult<(Certificate, String)> {
    match (path, name) {
        (_, Some(name)) => {
            let cert = builtin(name).map_err(input)?;
            report.inputs.push(InputDigest::of(
                format!("builtin:{name}"),
                cert.to_json().as_bytes(),
            ));
            Ok((cert, format!("builtin {name}")))
        }
        (Some(p), None) => {
            let bytes =
                fs::read(p).map_err(|e| input(format!("cannot read {}: {e}", p.display())))?;
            report
                .inputs
                .push(InputDigest::of(p.display().to_string(), &bytes));
            let text = String::from_utf8(bytes)
                .map_err(|_| input(format!("{} is not UTF-8", p.display())))?;
            let cert = Certificate::from_json(&text)
                .map_err(|e| input(format!("{}: {e}", p.display())))?;
            Ok((cert, p.display().to_string()))
        }
        (None, None) => Err(input("give a certificate path or --builtin")),
    }
}

fn load_source(src: &Source, report: &mut RunReport) -> CliResult<(Certificate, String)> {
    load(src.path.as_deref(), src.builtin.as_deref(), report)
}

fn count(n: usize, noun: &str) -> String {
    if n == 1 {
        format!("1 {noun}")
    } else {
        format!("{n} {noun}s")
    }
}

fn header(cert: &Certificate, label: &str) -> String {
    format!(
        "certificate: {label} ({}, theta = {}, {}, {})\n",
        count(cert.system().n_dof(), "dof"),
        cert.system().theta_strings().join(" "),
        count(cert.monomials().len(), "monomial"),
        count(cert.contexts().len(), "context")
    )
}

fn witness_report(w: &weylks_core::ContradictionWitness) -> CliResult<WitnessReport> {
    let t =
        w.t.iter()
            .map(|x| x.to_string().parse::<i64>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| runtime("witness coefficient exceeds 64 bits"))?;
    Ok(WitnessReport {
        t,
        support: w.support(),
        accumulated_phase: w.accumulated_phase.to_string(),
    })
}

/// Decides the certificate and fills status, witness or assignment, and trace.
fn decide(cert: &Certificate, report: &mut RunReport, human: &mut String) -> CliResult<()> {
    let sys = compile(cert).map_err(input)?;
    report.trace = context_lines(cert, &sys);
    human.push_str(&format!(
        "constraints: {} over {}\n",
        count(sys.n_rows(), "row"),
        count(sys.n_unknowns(), "unknown")
    ));
    for line in &report.trace {
        human.push_str(&format!("  {line}\n"));
    }
    if let Some(w) = find_contradiction(&sys) {
        let line = witness_line(&w);
        report.trace.push(line.clone());
        report.status = "contradiction".into();
        report.witness = Some(witness_report(&w)?);
        human.push_str(&format!(
            "status: contradiction over {} contexts\n  {line}\n",
            w.support().len()
        ));
    } else {
        let a = find_assignment(&sys)
            .ok_or_else(|| runtime("no contradiction and no assignment; solver inconsistency"))?;
        report.status = "consistent".into();
        human.push_str("status: consistent\nassignment:\n");
        let mut map = indexmap::IndexMap::new();
        for (id, v) in &a.values {
            human.push_str(&format!("  [{id}] = {}\n", phase_text(v)));
            map.insert(id.clone(), v.to_string());
        }
        report.assignment = Some(map);
    }
    Ok(())
}

pub fn verify(args: &VerifyArgs, report: &mut RunReport) -> CliResult<Outcome> {
    let (cert, label) = load_source(&args.source, report)?;
    let mut human = header(&cert, &label);
    decide(&cert, report, &mut human)?;
    Ok(Outcome { human, exit: 0 })
}

pub fn print(args: &PrintArgs, report: &mut RunReport) -> CliResult<Outcome> {
    let (cert, label) = load_source(&args.source, report)?;
    let mut human = header(&cert, &label);
    human.push_str("monomials:\n");
    for (id, m) in cert.monomials() {
        if id == &m.to_string() {
            human.push_str(&format!("  {id}\n"));
        } else {
            human.push_str(&format!("  {id} = {m}\n"));
        }
    }
    let sys = compile(&cert).map_err(input)?;
    human.push_str("unknowns:\n");
    for line in unknown_lines(&sys) {
        human.push_str(&format!("  {line}\n"));
    }
    human.push_str("values:\n");
    for line in class_lines(&sys) {
        human.push_str(&format!("  {line}\n"));
    }
    decide(&cert, report, &mut human)?;
    Ok(Outcome { human, exit: 0 })
}

fn claims_outcome(report: &mut RunReport, claims: Vec<ClaimCheck>, mut human: String) -> Outcome {
    let pass = claims.iter().all(|c| c.pass);
    let worst = claims
        .iter()
        .filter(|c| c.bound == Bound::AtMost)
        .map(|c| c.residual)
        .fold(0.0f64, f64::max);
    human.push_str(&claim_table(&claims));
    human.push_str(&format!(
        "{} of {} claims pass; max residual {worst:.3e}\n",
        claims.iter().filter(|c| c.pass).count(),
        claims.len()
    ));
    report.status = if pass { "pass" } else { "fail" }.into();
    report.claims = claims;
    Outcome {
        human,
        exit: if pass { 0 } else { 1 },
    }
}

fn pairs_json(v: impl IntoIterator<Item = (f64, f64)>) -> Value {
    Value::Array(v.into_iter().map(|(re, im)| json!([re, im])).collect())
}

fn write_dump(path: &Path, value: &Value) -> CliResult<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(runtime)?;
    text.push('\n');
    fs::write(path, text).map_err(|e| runtime(format!("cannot write {}: {e}", path.display())))
}

pub fn oracle(args: &OracleArgs, tol: Tolerances, report: &mut RunReport) -> CliResult<Outcome> {
    report.tolerances = Some(tol);
    match args.target {
        Target::Matrix if args.epr || args.ghz => {
            Err(input("--epr and --ghz run on the grid oracle"))
        }
        Target::Matrix => oracle_matrix(args, tol, report),
        Target::Grid if args.epr => oracle_epr(args, tol, report),
        Target::Grid if args.ghz => oracle_ghz(args, tol, report),
        Target::Grid => oracle_grid(args, tol, report),
    }
}

fn oracle_matrix(args: &OracleArgs, tol: Tolerances, report: &mut RunReport) -> CliResult<Outcome> {
    let (cert, label) = load(args.path.as_deref(), args.builtin.as_deref(), report)?;
    let rep = match args.dim {
        Some(d) => build_rep_with_dim(cert.system(), d),
        None => build_rep(cert.system()),
    }
    .map_err(input)?;
    let mut human = header(&cert, &label);
    human.push_str(&format!(
        "matrix model: d = {} per dof, total dimension {}\n",
        rep.dim(),
        rep.total_dim()
    ));
    let claims = matrix::check_certificate(&rep, &cert, args.seed, tol).map_err(runtime)?;
    if let Some(path) = &args.dump_states {
        let mut contexts = Vec::new();
        for ci in 0..cert.contexts().len() {
            let members: Vec<WeylMonomial> = cert
                .members(ci)
                .map_err(runtime)?
                .into_iter()
                .cloned()
                .collect();
            let pairs =
                common_eigenstates_tol(&rep, &members, args.seed, tol.eigen).map_err(runtime)?;
            let states: Vec<Value> = pairs
                .iter()
                .map(|p| {
                    json!({
                        "eigenvalues": pairs_json(p.eigenvalues.iter().map(|z| (z.re, z.im))),
                        "residual": p.residual,
                        "vector": pairs_json(p.vector.iter().map(|z| (z.re, z.im))),
                    })
                })
                .collect();
            contexts.push(json!({
                "context": ci + 1,
                "members": cert.contexts()[ci].members,
                "states": states,
            }));
        }
        write_dump(path, &json!({ "contexts": contexts }))?;
    }
    Ok(claims_outcome(report, claims, human))
}

fn grid_spec(n_dof: usize, args: &OracleArgs) -> CliResult<GridSpec> {
    GridSpec::new(n_dof, args.grid_n, args.period).map_err(input)
}

fn oracle_grid(args: &OracleArgs, tol: Tolerances, report: &mut RunReport) -> CliResult<Outcome> {
    let (cert, label) = load(args.path.as_deref(), args.builtin.as_deref(), report)?;
    let spec = grid_spec(cert.system().n_dof(), args)?;
    let binding = GridBinding::standard(&spec, cert.system()).map_err(input)?;
    let mut human = header(&cert, &label);
    human.push_str(&format!(
        "grid: N = {}, L = {}, a = {:?}, b = {:?}\n",
        spec.n,
        spec.period,
        binding.a(&spec),
        binding.b(&spec)
    ));
    let claims = grid::check_certificate(&cert, &spec, &binding, args.states, args.seed, tol)
        .map_err(runtime)?;
    Ok(claims_outcome(report, claims, human))
}

/// `1`, `-1`, `i`, `-i`, or `a+bi` to three places.
fn unit_text(z: weylks_core::Complex64) -> String {
    const EPS: f64 = 1e-6;
    match (z.re, z.im) {
        (re, im) if im.abs() < EPS && (re - 1.0).abs() < EPS => "1".into(),
        (re, im) if im.abs() < EPS && (re + 1.0).abs() < EPS => "-1".into(),
        (re, im) if re.abs() < EPS && (im - 1.0).abs() < EPS => "i".into(),
        (re, im) if re.abs() < EPS && (im + 1.0).abs() < EPS => "-i".into(),
        (re, im) => format!("{re:.3}{im:+.3}i"),
    }
}

fn eigen_row(op: &str, chk: &grid::EigenCheck) -> EigenRow {
    EigenRow {
        operator: op.to_string(),
        eigenvalue: [chk.c.re, chk.c.im],
        residual: chk.residual,
        is_eigen: chk.is_eigen,
    }
}

fn oracle_epr(args: &OracleArgs, tol: Tolerances, report: &mut RunReport) -> CliResult<Outcome> {
    let system = DofSystem::standard(2).map_err(runtime)?;
    let spec = grid_spec(2, args)?;
    let binding = GridBinding::standard(&spec, &system).map_err(input)?;
    let psi = make_epr_delta(&spec, args.x0).map_err(input)?;
    report
        .inputs
        .push(InputDigest::of("epr-delta", psi.to_json().as_bytes()));
    let parse = |t: &str| parse_monomial(&system, t).map_err(runtime);
    let ops = [
        parse("U1^-1 U2 V1^-1 V2^-1")?,
        parse("U1 V2 V1 U2^-1")?,
        parse("U1 V2")?,
    ];
    let checks = ops
        .iter()
        .map(|m| check_eigenstate(&psi, m, &binding, tol.algebraic).map_err(runtime))
        .collect::<CliResult<Vec<_>>>()?;
    let mut human = format!(
        "EPR delta state: N = {}, L = {}, x0 = {}, a = {:?}, b = {:?}\n",
        spec.n,
        spec.period,
        args.x0,
        binding.a(&spec),
        binding.b(&spec)
    );
    human.push_str(&format!(
        "{:<24}  {:>22}  {:>10}  eigenstate\n",
        "operator", "c", "residual"
    ));
    for (op, chk) in ops.iter().zip(&checks) {
        human.push_str(&format!(
            "{:<24}  {:>10.6} {:>+10.6}i  {:>10.3e}  {}\n",
            op.to_string(),
            chk.c.re,
            chk.c.im,
            chk.residual,
            if chk.is_eigen { "yes" } else { "no" }
        ));
        report.eigen.push(eigen_row(&op.to_string(), chk));
    }
    let cc = checks[0].c * checks[1].c;
    let leakage = epr_momentum_leakage(&psi).map_err(runtime)?;
    let claims = vec![
        ClaimCheck::new(
            format!("{} eigenstate", ops[0]),
            checks[0].residual,
            tol.algebraic,
        ),
        ClaimCheck::new(
            format!("{} eigenstate", ops[1]),
            checks[1].residual,
            tol.algebraic,
        ),
        ClaimCheck::new("c c' = -1", (cc + 1.0).norm(), tol.algebraic),
        ClaimCheck::at_least(
            format!("{} not an eigenstate", ops[2]),
            checks[2].residual,
            0.5,
        ),
        ClaimCheck::new("momentum support on p1 + p2 = 0", leakage, tol.algebraic),
    ];
    if let Some(path) = &args.dump_states {
        let v: Value = serde_json::from_str(&psi.to_json()).map_err(runtime)?;
        write_dump(path, &v)?;
    }
    Ok(claims_outcome(report, claims, human))
}

fn oracle_ghz(args: &OracleArgs, tol: Tolerances, report: &mut RunReport) -> CliResult<Outcome> {
    let system = DofSystem::standard(3).map_err(runtime)?;
    let spec = grid_spec(3, args)?;
    let binding = GridBinding::standard(&spec, &system).map_err(input)?;
    let states = find_ghz_analogues(&spec, &binding, args.seed, tol.eigen).map_err(runtime)?;
    let mermin = builtin("mermin3").map_err(runtime)?;
    let last = mermin.contexts().len() - 1;
    let ops = mermin.contexts()[last].members.clone();
    let mut human = format!(
        "GHZ analogues: N = {}, L = {}, joint eigenstates of {}\n",
        spec.n,
        spec.period,
        ops.join(", ")
    );
    let u1 = WeylMonomial::generator(&system, Generator::U, 0, 1);
    let mut spectrum: BTreeMap<String, usize> = BTreeMap::new();
    let mut worst_product = 0.0f64;
    let mut worst_residual = 0.0f64;
    let mut min_u1 = f64::INFINITY;
    for g in &states {
        let prod: weylks_core::Complex64 = g.eigenvalues.iter().product();
        worst_product = worst_product.max((prod + 1.0).norm());
        worst_residual = worst_residual.max(g.residual);
        let u1_check = check_eigenstate(&g.state, &u1, &binding, tol.eigen).map_err(runtime)?;
        min_u1 = min_u1.min(u1_check.residual);
        let key: Vec<String> = g.eigenvalues.iter().map(|z| unit_text(*z)).collect();
        *spectrum.entry(format!("({})", key.join(", "))).or_default() += 1;
    }
    human.push_str(&format!(
        "{} joint eigenstates; eigenvalue quadruples:\n",
        states.len()
    ));
    for (k, n) in &spectrum {
        human.push_str(&format!("  {k} x {n}\n"));
    }
    report.details = Some(json!({ "operators": ops, "spectrum": spectrum }));
    let claims = vec![
        ClaimCheck::at_least("number of joint eigenstates", states.len() as f64, 0.0),
        ClaimCheck::new("eigenstate residuals", worst_residual, tol.eigen),
        ClaimCheck::new("eigenvalue products = -1", worst_product, tol.eigen),
        ClaimCheck::at_least("no state is an eigenstate of U1", min_u1, tol.eigen),
    ];
    if let Some(path) = &args.dump_states {
        let dump: Vec<Value> = states
            .iter()
            .map(|g| {
                json!({
                    "eigenvalues": pairs_json(g.eigenvalues.iter().map(|z| (z.re, z.im))),
                    "amplitudes": pairs_json(g.state.amplitudes().iter().map(|z| (z.re, z.im))),
                })
            })
            .collect();
        write_dump(path, &json!({ "grid": spec, "states": dump }))?;
    }
    Ok(claims_outcome(report, claims, human))
}

fn search_params(args: &SearchArgs) -> CliResult<SearchParams> {
    let mut p = SearchParams::new(args.dofs);
    p.max_exponent = args.max_exp;
    p.max_context_size = args.max_context_size;
    p.max_contexts = args.max_contexts;
    p.node_budget = args.nodes;
    p.u_only = args.u_only;
    p.symmetry = !args.no_symmetry;
    if let Some(t) = &args.theta {
        let s = DofSystem::from_strs(t).map_err(input)?;
        p.theta = Some(s.theta().to_vec());
    }
    if let Some(secs) = args.time_budget {
        if !(secs.is_finite() && secs > 0.0) {
            return Err(input("time budget must be a positive number of seconds"));
        }
        p.time_budget = Some(Duration::from_secs_f64(secs));
    }
    p.validate().map_err(input)?;
    Ok(p)
}

pub fn search(
    args: &SearchArgs,
    tol: Tolerances,
    report: &mut RunReport,
    announce: impl FnOnce(&str),
) -> CliResult<Outcome> {
    let params = search_params(args)?;
    let space = space_size(&params);
    let banner = format!(
        "search space: {space} monomial classes ({}, exponents in [-{e}, {e}]{})\n",
        count(params.n_dof, "dof"),
        if params.u_only { ", U only" } else { "" },
        e = params.max_exponent
    );
    announce(&banner);
    let mut human = String::new();
    let out = search_obstruction(&params).map_err(runtime)?;
    report.status = out.status.as_str().into();
    let mut details = json!({
        "space": space.to_string(),
        "nodes": out.stats.nodes,
        "states": out.stats.states,
        "level_counts": out.stats.level_counts,
        "clash_cost": out.stats.clash_cost,
        "saturated": out.stats.saturated,
        "complete": out.stats.complete,
        "experimental": out.experimental,
    });
    human.push_str(&format!(
        "explored {} nodes, {} derived values\n",
        out.stats.nodes, out.stats.states
    ));
    if out.experimental {
        human.push_str("note: ratios are not all odd integers; results are experimental\n");
    }
    match (&out.status, &out.certificate, &out.witness) {
        (SearchStatus::Found, Some(cert), Some(w)) => {
            let members: usize = cert.contexts().iter().map(|c| c.members.len()).sum();
            details["contexts"] = json!(cert.contexts().len());
            details["members"] = json!(members);
            human.push_str(&format!(
                "status: found, {} contexts, {members} members{}\n",
                cert.contexts().len(),
                if out.stats.complete {
                    ""
                } else {
                    " (minimality not established)"
                }
            ));
            report.witness = Some(witness_report(w)?);
            let sys = compile(cert).map_err(runtime)?;
            report.trace = context_lines(cert, &sys);
            report.trace.push(witness_line(w));
            for line in &report.trace {
                human.push_str(&format!("  {line}\n"));
            }
            match build_rep(cert.system()) {
                Ok(rep) => {
                    let claims = matrix::check_certificate(&rep, cert, 0, tol).map_err(runtime)?;
                    let pass = claims.iter().all(|c| c.pass);
                    human.push_str(&format!(
                        "matrix re-check: {} of {} claims pass\n",
                        claims.iter().filter(|c| c.pass).count(),
                        claims.len()
                    ));
                    report.claims = claims;
                    if !pass {
                        return Err(runtime("found certificate failed the matrix re-check"));
                    }
                }
                Err(e) => human.push_str(&format!("matrix re-check skipped: {e}\n")),
            }
            let text = cert.to_json();
            report.certificate = Some(serde_json::from_str(&text).map_err(runtime)?);
            if let Some(path) = &args.emit {
                fs::write(path, &text)
                    .map_err(|e| runtime(format!("cannot write {}: {e}", path.display())))?;
                human.push_str(&format!("certificate written to {}\n", path.display()));
            }
        }
        (SearchStatus::Absent, ..) => human.push_str(&format!(
            "status: absent (no obstruction within {} contexts{})\n",
            params.max_contexts,
            if out.stats.saturated {
                "; derivations saturated"
            } else {
                ""
            }
        )),
        _ => human.push_str("status: exhausted (budget ran out; nothing proven)\n"),
    }
    report.details = Some(details);
    Ok(Outcome { human, exit: 0 })
}
