//! Rendering of decompositions, pointwise tables, sweeps and games.
//!
//! Tables print 4 decimals. CSV and JSON print the shortest decimal form
//! that reads back to the same `f64`.
//!
//! CSV schemas:
//!
//! - `pid`: `node,icap,ipartial`
//! - pointwise: `node,<axis names>,p,dh_<source>...,dh_joint,c,dh_com`
//! - predpred sweep: `c` then `<measure>_<node>` per measure and node
//! - gaussian sweep: `index,b,joint_mi`, then `immi_<node>`, `iccs_<node>`
//!   and `iccs_se_<node>` per node
//! - game: `setter,reward_1,reward_2`

use std::fmt::Write as _;

use clap::ValueEnum;
use pidkit_core::gaussian::GaussianSweep;
use pidkit_core::lattice::order_structure_collapse;
use pidkit_core::{Antichain, JointDistribution, LocalTermTable, PidResult};
use serde_json::{json, Value};

use crate::game::StakeGameResult;
use crate::sweep::PredpredRow;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Table,
    Csv,
    Json,
}

/// A pointwise table together with the node it was evaluated for.
pub struct PointwiseTable<'a> {
    pub node: &'a Antichain,
    pub table: &'a LocalTermTable,
}

fn csv_writer() -> csv::Writer<Vec<u8>> {
    csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new())
}

fn finish(w: csv::Writer<Vec<u8>>) -> String {
    String::from_utf8(w.into_inner().expect("in-memory writer")).expect("utf-8 fields")
}

fn full(x: f64) -> String {
    format!("{x}")
}

/// Axis label: `S` for the target, `X<k>` for the k-th predictor.
pub fn axis_label(d: &JointDistribution, axis: usize) -> String {
    if Some(axis) == d.target() {
        return "S".into();
    }
    let k = d.predictor_axes().iter().position(|&a| a == axis).unwrap_or(axis);
    format!("X{}", k + 1)
}

pub fn pid_report(name: &str, result: &PidResult, pointwise: &[PointwiseTable<'_>], d: &JointDistribution, format: Format) -> String {
    match format {
        Format::Table => pid_table(name, result, pointwise, d),
        Format::Csv => {
            let mut out = pid_csv(result);
            for p in pointwise {
                out.push('\n');
                out.push_str(&pointwise_csv(p, d));
            }
            out
        }
        Format::Json => {
            let mut v = pid_json(name, result);
            if !pointwise.is_empty() {
                v["pointwise"] = Value::Array(pointwise.iter().map(|p| pointwise_json(p, d)).collect());
            }
            to_json_string(&v)
        }
    }
}

pub fn to_json_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serialisable value");
    s.push('\n');
    s
}

fn pid_table(name: &str, r: &PidResult, pointwise: &[PointwiseTable<'_>], d: &JointDistribution) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "system: {name}");
    let _ = writeln!(out, "measure: {}", r.measure);
    let names = r.node_names();
    let width = names.iter().map(|n| n.len()).max().unwrap_or(4).max(4);
    let _ = writeln!(out, "{:<width$}  {:>9}  {:>9}", "node", "I_cap", "I_partial");
    for ((n, cap), atom) in names.iter().zip(&r.icap).zip(&r.ipartial) {
        let _ = writeln!(out, "{n:<width$}  {cap:>9.4}  {atom:>9.4}");
    }
    let _ = writeln!(out, "{:<width$}  {:>9}  {:>9.4}", "sum", "", r.atom_sum());
    if let Ok(terms) = order_structure_collapse(r) {
        let _ = writeln!(out, "\norder structure");
        for t in terms {
            let tag: Vec<String> = t.tag.iter().map(|s| s.to_string()).collect();
            let _ = writeln!(out, "  {}  ({})  {:>9.4}", t.level, tag.join(","), t.value);
        }
    }
    if !r.reports.is_empty() {
        let _ = writeln!(out, "\nsolver");
        for (i, rep) in &r.reports {
            let _ = writeln!(
                out,
                "  {:<width$}  iterations {:>6}  residual {:.2e}  converged {}",
                names[*i], rep.iterations, rep.residual, rep.converged
            );
        }
    }
    for w in &r.warnings {
        let _ = writeln!(out, "warning: {w}");
    }
    for p in pointwise {
        out.push('\n');
        out.push_str(&pointwise_table(p, d));
    }
    out
}

fn pid_csv(r: &PidResult) -> String {
    let mut w = csv_writer();
    let _ = w.write_record(["node", "icap", "ipartial"]);
    for ((n, cap), atom) in r.node_names().iter().zip(&r.icap).zip(&r.ipartial) {
        let _ = w.write_record([n.clone(), full(*cap), full(*atom)]);
    }
    finish(w)
}

pub fn pid_json(name: &str, r: &PidResult) -> Value {
    let nodes: Vec<Value> = r
        .node_names()
        .iter()
        .zip(&r.icap)
        .zip(&r.ipartial)
        .map(|((n, cap), atom)| json!({ "node": n, "icap": cap, "ipartial": atom }))
        .collect();
    let solver: Vec<Value> = r
        .reports
        .iter()
        .map(|(i, rep)| {
            json!({
                "node": r.lattice.nodes()[*i].to_string(),
                "iterations": rep.iterations,
                "residual": rep.residual,
                "objective": rep.objective,
                "converged": rep.converged,
            })
        })
        .collect();
    let mut v = json!({
        "system": name,
        "measure": r.measure,
        "nodes": nodes,
        "solver": solver,
        "warnings": r.warnings,
    });
    if let Ok(terms) = order_structure_collapse(r) {
        v["order_structure"] =
            terms.iter().map(|t| json!({ "level": t.level, "tag": t.tag, "value": t.value })).collect();
    }
    v
}

fn pointwise_headers(p: &PointwiseTable<'_>, d: &JointDistribution) -> Vec<String> {
    let mut h: Vec<String> = p.table.axes.iter().map(|&a| axis_label(d, a)).collect();
    h.push("p".into());
    h.extend(p.node.sources().iter().map(|s| format!("dh_{s}")));
    h.extend(["dh_joint", "c", "dh_com"].map(String::from));
    h
}

fn pointwise_values(row: &pidkit_core::LocalTermRow) -> Vec<f64> {
    let mut v = vec![row.prob];
    v.extend(&row.source_deltas);
    v.extend([row.joint_delta, row.coinformation, row.common]);
    v
}

fn pointwise_table(p: &PointwiseTable<'_>, d: &JointDistribution) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "pointwise terms for {}", p.node);
    let headers = pointwise_headers(p, d);
    let n_axes = p.table.axes.len();
    let mut line = String::new();
    for (i, h) in headers.iter().enumerate() {
        if i < n_axes {
            let _ = write!(line, "{h:>3} ");
        } else {
            let _ = write!(line, "{h:>9} ");
        }
    }
    let _ = writeln!(out, "{}", line.trim_end());
    for row in &p.table.rows {
        let mut line = String::new();
        for v in &row.outcome {
            let _ = write!(line, "{v:>3} ");
        }
        for v in pointwise_values(row) {
            let _ = write!(line, "{v:>9.4} ");
        }
        let _ = writeln!(out, "{}", line.trim_end());
    }
    let _ = writeln!(out, "expectation {:.4}", p.table.expectation());
    out
}

fn pointwise_csv(p: &PointwiseTable<'_>, d: &JointDistribution) -> String {
    let mut w = csv_writer();
    let mut headers = vec!["node".to_string()];
    headers.extend(pointwise_headers(p, d));
    let _ = w.write_record(&headers);
    for row in &p.table.rows {
        let mut rec = vec![p.node.to_string()];
        rec.extend(row.outcome.iter().map(|v| v.to_string()));
        rec.extend(pointwise_values(row).into_iter().map(full));
        let _ = w.write_record(&rec);
    }
    finish(w)
}

fn pointwise_json(p: &PointwiseTable<'_>, d: &JointDistribution) -> Value {
    let rows: Vec<Value> = p
        .table
        .rows
        .iter()
        .map(|r| {
            json!({
                "outcome": r.outcome,
                "p": r.prob,
                "source_deltas": r.source_deltas,
                "joint_delta": r.joint_delta,
                "coinformation": r.coinformation,
                "common": r.common,
            })
        })
        .collect();
    let axes: Vec<String> = p.table.axes.iter().map(|&a| axis_label(d, a)).collect();
    json!({ "node": p.node.to_string(), "axes": axes, "rows": rows, "expectation": p.table.expectation() })
}

pub fn predpred_csv(rows: &[PredpredRow]) -> String {
    let mut w = csv_writer();
    if let Some(first) = rows.first() {
        let mut h = vec!["c".to_string()];
        for r in &first.results {
            h.extend(r.node_names().iter().map(|n| format!("{}_{n}", r.measure)));
        }
        let _ = w.write_record(&h);
    }
    for row in rows {
        let mut rec = vec![full(row.c)];
        for r in &row.results {
            rec.extend(r.ipartial.iter().copied().map(full));
        }
        let _ = w.write_record(&rec);
    }
    finish(w)
}

pub fn gaussian_csv(sweep: &GaussianSweep) -> String {
    let mut w = csv_writer();
    if let Some(first) = sweep.rows.first() {
        let names = first.immi.node_names();
        let mut h: Vec<String> = ["index", "b", "joint_mi"].map(String::from).to_vec();
        for prefix in ["immi", "iccs", "iccs_se"] {
            h.extend(names.iter().map(|n| format!("{prefix}_{n}")));
        }
        let _ = w.write_record(&h);
    }
    for row in &sweep.rows {
        let mut rec = vec![row.index.to_string(), full(row.b), full(row.immi.atom_sum())];
        rec.extend(row.immi.ipartial.iter().copied().map(full));
        rec.extend(row.iccs.ipartial.iter().copied().map(full));
        match &row.iccs.atom_standard_errors {
            Some(se) => rec.extend(se.iter().copied().map(full)),
            None => rec.extend(row.iccs.ipartial.iter().map(|_| String::new())),
        }
        let _ = w.write_record(&rec);
    }
    finish(w)
}

pub fn gaussian_json(sweep: &GaussianSweep) -> Value {
    let rows: Vec<Value> = sweep
        .rows
        .iter()
        .map(|r| {
            json!({
                "index": r.index,
                "b": r.b,
                "joint_mi": r.immi.atom_sum(),
                "nodes": r.immi.node_names(),
                "immi": r.immi.ipartial,
                "iccs": r.iccs.ipartial,
                "iccs_se": r.iccs.atom_standard_errors,
            })
        })
        .collect();
    json!({ "rows": rows, "skipped": sweep.skipped })
}

pub fn predpred_json(rows: &[PredpredRow]) -> Value {
    Value::Array(
        rows.iter()
            .map(|r| json!({ "c": r.c, "results": r.results.iter().map(|p| pid_json("predpred", p)).collect::<Vec<_>>() }))
            .collect(),
    )
}

pub fn predpred_table(rows: &[PredpredRow]) -> String {
    let mut out = String::new();
    for row in rows {
        for r in &row.results {
            let atoms: Vec<String> = r.ipartial.iter().map(|a| format!("{a:>8.4}")).collect();
            let _ = writeln!(out, "c = {:>5.2}  {:<14} {}", row.c, r.measure, atoms.join(" "));
        }
    }
    out
}

pub fn gaussian_table(sweep: &GaussianSweep) -> String {
    let mut out = String::new();
    if let Some(first) = sweep.rows.first() {
        let names = first.immi.node_names();
        let _ = writeln!(out, "{:>8}  {:<6} {}", "b", "", names.iter().map(|n| format!("{n:>9}")).collect::<String>());
    }
    for row in &sweep.rows {
        for r in [&row.immi, &row.iccs] {
            let atoms: String = r.ipartial.iter().map(|a| format!("{a:>9.4}")).collect();
            let _ = writeln!(out, "{:>8.4}  {:<6} {atoms}", row.b, r.measure);
        }
    }
    for b in &sweep.skipped {
        let _ = writeln!(out, "skipped b = {b}");
    }
    out
}

pub fn game_report(name: &str, r: &StakeGameResult, format: Format) -> String {
    match format {
        Format::Table => {
            let mut out = format!("system: {name}\n");
            for (i, s) in r.strategies.iter().enumerate() {
                let _ = writeln!(out, "agent {}: x=0 -> {}, x=1 -> {}", i + 1, s[0], s[1]);
            }
            let _ = writeln!(out, "{:>6}  {:>8}  {:>8}", "setter", "agent 1", "agent 2");
            for round in &r.rounds {
                let _ = writeln!(out, "{:>6}  {:>8.4}  {:>8.4}", round.setter, round.rewards[0], round.rewards[1]);
            }
            out
        }
        Format::Csv => {
            let mut w = csv_writer();
            let _ = w.write_record(["setter", "reward_1", "reward_2"]);
            for round in &r.rounds {
                let _ = w.write_record([round.setter.to_string(), full(round.rewards[0]), full(round.rewards[1])]);
            }
            finish(w)
        }
        Format::Json => to_json_string(&json!({ "system": name, "game": r })),
    }
}
