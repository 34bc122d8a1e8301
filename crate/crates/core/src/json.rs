//! Versioned JSON documents for the command-line outputs.

use serde_json::{json, Value};

use crate::atlas::Atlas;
use crate::error::{Error, Result};
use crate::picard::{self, DivClass, IncidenceGraph};
use crate::polyalg::{format_rational, parse_rational, Rational};
use crate::rootsys::RootSystem;
use crate::torsor::{StepRecord, TorsorPresentation};

pub const SCHEMA_VERSION: u32 = 1;

pub fn rationals(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(|q| Value::String(format_rational(q))).collect())
}

pub fn parse_rationals(v: &Value) -> Result<Vec<Rational>> {
    v.as_array()
        .ok_or_else(|| Error::ParseRational(v.to_string()))?
        .iter()
        .map(|x| x.as_str().ok_or_else(|| Error::ParseRational(x.to_string())).and_then(parse_rational))
        .collect()
}

pub fn roots(rs: &RootSystem) -> Value {
    json!({
        "schema_version": SCHEMA_VERSION,
        "system": rs.id,
        "rank": rs.rank(),
        "marked_node": rs.id.marked_root_index(),
        "cartan": rs.cartan,
        "simple_roots": rs.simple_roots,
        "positive_roots": rs.positive_roots,
        "omega": rs.omega,
        "orbit_omega": rs.weyl_orbit(&rs.omega).len(),
        "orbit_omega1": rs.weyl_orbit(&rs.fundamental_weight(0)).len(),
        "weyl_group_order": rs.weyl_group_order(),
    })
}

pub fn rep(a: &Atlas, with_grading: bool) -> Value {
    let rep = &a.rep;
    let weights: Vec<Value> = rep
        .weights
        .iter()
        .enumerate()
        .map(|(k, w)| {
            let mut o = json!({ "index": k, "weight": w });
            if with_grading {
                o["degree"] = json!(a.grading.degree[k]);
            }
            o
        })
        .collect();
    let ops = |maps: &[crate::minrep::SignedMap]| -> Value { maps.iter().map(|m| m.entries().map(|(r, c, s)| json!([r, c, s])).collect::<Vec<_>>()).collect() };
    let mut doc = json!({
        "schema_version": SCHEMA_VERSION,
        "system": rep.rs.id,
        "dim": rep.dim(),
        "highest": rep.highest(),
        "weights": weights,
        "raise": ops(&rep.raise),
        "lower": ops(&rep.lower),
    });
    if with_grading {
        doc["grading_sizes"] = json!(a.grading.sizes());
    }
    doc
}

fn class(c: &DivClass) -> Value {
    json!(c.0)
}

pub fn curves(r: usize, with_graph: bool, automorphism_order: u64) -> Value {
    let g = IncidenceGraph::new(r);
    let conics = picard::conic_classes(r);
    let mut doc = json!({
        "schema_version": SCHEMA_VERSION,
        "degree": 9 - r,
        "r": r,
        "canonical": class(&DivClass::canonical(r)),
        "exceptional": g.vertices.iter().map(class).collect::<Vec<_>>(),
        "conics": conics.iter().map(class).collect::<Vec<_>>(),
        "exceptional_count": g.len(),
        "conic_count": conics.len(),
        "automorphism_order": automorphism_order,
    });
    if with_graph {
        let mut edges = Vec::new();
        for i in 0..g.len() {
            for j in i + 1..g.len() {
                if g.labels[i][j] != 0 {
                    edges.push(json!([i, j, g.labels[i][j]]));
                }
            }
        }
        doc["edges"] = Value::Array(edges);
    }
    doc
}

pub fn cone_equations(a: &Atlas, conic_of: &dyn Fn(&crate::rootsys::Weight) -> Option<DivClass>) -> Value {
    let gens: Vec<Value> = a
        .ideal
        .generators
        .iter()
        .map(|g| json!({ "mu": g.mu, "mu_tilde": conic_of(&g.mu).map(|c| class(&c)), "poly": g.poly }))
        .collect();
    let zero: Vec<Value> = a.ideal.zero_block.iter().map(|g| json!({ "mu": g.mu, "poly": g.poly })).collect();
    json!({
        "schema_version": SCHEMA_VERSION,
        "system": a.id(),
        "variables": a.rep.weights,
        "generators": gens,
        "zero_weight_block": zero,
    })
}

fn step(s: &StepRecord) -> Value {
    json!({
        "from": s.from,
        "to": s.to,
        "x0": rationals(&s.x0),
        "y0": rationals(&s.y0),
        "t": rationals(&s.t),
        "v": s.v,
        "w": s.w.iter().map(|w| rationals(w)).collect::<Vec<_>>(),
    })
}

pub fn torsor(tp: &TorsorPresentation, seed: u64) -> Value {
    json!({
        "schema_version": SCHEMA_VERSION,
        "system": tp.system,
        "degree": tp.system.degree(),
        "seed": seed,
        "dilatations": tp.dilatations.iter().map(|z| rationals(z.coords())).collect::<Vec<_>>(),
        "equations": tp.equations,
        "equation_labels": tp.labels.iter().map(|(i, mu)| json!({ "dilatation": i, "mu": mu })).collect::<Vec<_>>(),
        "samples": tp.samples.iter().map(|s| rationals(s)).collect::<Vec<_>>(),
        "anchor": rationals(&tp.anchor),
        "provenance": {
            "seed_matrices": tp.seed_matrices,
            "steps": tp.provenance.iter().map(step).collect::<Vec<_>>(),
        },
    })
}

/// Reads back the step records of a torsor document.
pub fn parse_steps(doc: &Value) -> Result<Vec<StepRecord>> {
    let bad = |what: &str| Error::Invariant(format!("torsor document: missing {what}"));
    let steps = doc["provenance"]["steps"].as_array().ok_or_else(|| bad("provenance.steps"))?;
    steps
        .iter()
        .map(|s| {
            Ok(StepRecord {
                from: serde_json::from_value(s["from"].clone())?,
                to: serde_json::from_value(s["to"].clone())?,
                x0: parse_rationals(&s["x0"])?,
                y0: parse_rationals(&s["y0"])?,
                t: parse_rationals(&s["t"])?,
                v: serde_json::from_value(s["v"].clone())?,
                w: s["w"].as_array().ok_or_else(|| bad("w"))?.iter().map(parse_rationals).collect::<Result<_>>()?,
            })
        })
        .collect()
}
