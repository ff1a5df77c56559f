//! Text and JSON renderings of coinvariant, signature and verdict reports.
//! Output depends only on the inputs; field order is fixed.

use std::fmt::Write as _;

use kodaira_core::monodromy::{BundleContent, BundleSpec, CoinvariantsReport, RankInterval};
use kodaira_core::obstructions::{CoverFailure, CoverWitness, ObstructionOutcome, Overall, Verdict};
use serde_json::{json, Value};

pub fn content_kind(bundle: &BundleSpec) -> &'static str {
    match bundle.content() {
        BundleContent::Explicit(_) => "explicit",
        BundleContent::GeneratingSet(_) => "generating_set",
        BundleContent::Declared(_) => "declared",
    }
}

fn torsion_list(r: &CoinvariantsReport) -> Vec<String> {
    r.torsion.iter().map(|t| t.to_string()).collect()
}

fn opt(v: Option<usize>) -> String {
    v.map_or_else(|| "undefined (odd rank)".to_string(), |x| x.to_string())
}

pub fn coinvariants_text(bundle: &BundleSpec) -> String {
    let mut s = String::new();
    let (g, b) = (bundle.fiber_genus(), bundle.base_genus());
    writeln!(s, "fiber genus: {g}").unwrap();
    writeln!(s, "base genus: {b}").unwrap();
    match bundle.coinvariants() {
        Some(r) => {
            writeln!(s, "rank: {}", r.rank).unwrap();
            let torsion = torsion_list(&r);
            if torsion.is_empty() {
                writeln!(s, "torsion: none").unwrap();
            } else {
                let parts: Vec<String> = torsion.iter().map(|t| format!("Z/{t}")).collect();
                writeln!(s, "torsion: {}", parts.join(" + ")).unwrap();
            }
            writeln!(s, "s: {}", opt(r.s)).unwrap();
            writeln!(s, "q_f: {}", opt(r.q_f)).unwrap();
            writeln!(s, "b1: {}", r.b1).unwrap();
        }
        None => {
            let rank = bundle.coinvariant_rank();
            writeln!(s, "declared: monodromy unknown, values below are intervals").unwrap();
            writeln!(s, "rank: {rank} (declared)").unwrap();
            writeln!(s, "torsion: unknown (declared)").unwrap();
            let (s_range, q_range) = even_ranges(g, rank);
            writeln!(s, "s: {s_range} (declared, even ranks)").unwrap();
            writeln!(s, "q_f: {q_range} (declared, even ranks)").unwrap();
            writeln!(s, "b1: [{}, {}] (declared)", 2 * b + rank.lo, 2 * b + rank.hi).unwrap();
        }
    }
    s
}

fn even_ranges(g: usize, rank: RankInterval) -> (String, String) {
    let evens: Vec<usize> = rank.even_values().collect();
    match (evens.first(), evens.last()) {
        (Some(&lo), Some(&hi)) => (format!("[{}, {}]", g - hi / 2, g - lo / 2), format!("[{}, {}]", lo / 2, hi / 2)),
        _ => ("undefined".into(), "undefined".into()),
    }
}

pub fn coinvariants_json(bundle: &BundleSpec) -> Value {
    let (g, b) = (bundle.fiber_genus(), bundle.base_genus());
    match bundle.coinvariants() {
        Some(r) => json!({
            "declared": false,
            "fiber_genus": g,
            "base_genus": b,
            "rank": r.rank,
            "torsion": torsion_list(&r),
            "s": r.s,
            "q_f": r.q_f,
            "b1": r.b1,
        }),
        None => {
            let rank = bundle.coinvariant_rank();
            json!({
                "declared": true,
                "fiber_genus": g,
                "base_genus": b,
                "rank_lo": rank.lo,
                "rank_hi": rank.hi,
                "b1_lo": 2 * b + rank.lo,
                "b1_hi": 2 * b + rank.hi,
            })
        }
    }
}

fn failure_name(f: CoverFailure) -> &'static str {
    match f {
        CoverFailure::Parity => "parity",
        CoverFailure::Xiao => "xiao",
    }
}

fn witness_json(w: &CoverWitness) -> Value {
    json!({
        "degree": w.spec.degree(),
        "images": w.spec.images(),
        "cover_base_genus": w.cover_base_genus,
        "rank": w.rank,
        "failed": failure_name(w.failure),
    })
}

fn outcome_json(o: &ObstructionOutcome) -> Value {
    let mut v = json!({
        "check": o.kind.name(),
        "status": o.status.name(),
        "detail": o.detail,
        "reference": o.kind.reference(),
    });
    let map = v.as_object_mut().unwrap();
    if let Some(w) = &o.witness {
        map.insert("witness".into(), witness_json(w));
    }
    if let Some(w) = &o.warning {
        map.insert("warning".into(), Value::String(w.clone()));
    }
    v
}

fn overall_name(v: &Verdict) -> &'static str {
    match v.overall {
        Overall::Excluded => "excluded",
        Overall::Unobstructed if v.has_inconclusive() => "unobstructed_with_inconclusive",
        Overall::Unobstructed => "unobstructed",
    }
}

pub fn verdict_json(bundle: &BundleSpec, verdict: &Verdict) -> Value {
    json!({
        "fiber_genus": bundle.fiber_genus(),
        "base_genus": bundle.base_genus(),
        "content": content_kind(bundle),
        "outcomes": verdict.outcomes.iter().map(outcome_json).collect::<Vec<_>>(),
        "overall": overall_name(verdict),
    })
}

pub fn verdict_text(bundle: &BundleSpec, verdict: &Verdict) -> String {
    let mut s = String::new();
    writeln!(
        s,
        "bundle: {} content, fiber genus {}, base genus {}, coinvariant rank {}",
        content_kind(bundle),
        bundle.fiber_genus(),
        bundle.base_genus(),
        bundle.coinvariant_rank()
    )
    .unwrap();
    for o in &verdict.outcomes {
        writeln!(s, "{:<13} {:<14} {}  [{}]", o.status.name(), o.kind.name(), o.detail, o.kind.reference()).unwrap();
        if let Some(w) = &o.witness {
            writeln!(
                s,
                "{:<13} witness: cover {} of base genus {}, rank {}, fails {}",
                "",
                w.spec,
                w.cover_base_genus,
                w.rank,
                failure_name(w.failure)
            )
            .unwrap();
        }
        if let Some(w) = &o.warning {
            writeln!(s, "{:<13} warning: {w}", "").unwrap();
        }
    }
    let overall = match verdict.overall {
        Overall::Excluded => "excluded",
        Overall::Unobstructed if verdict.has_inconclusive() => "unobstructed (some checks inconclusive)",
        Overall::Unobstructed => "unobstructed (no implemented check excludes it)",
    };
    writeln!(s, "overall: {overall}").unwrap();
    s
}
