//! Canonical JSON reports: sorted keys, compact, newline-terminated.

use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::dsl::DependencyAtom;
use crate::team::{CheckReport, ConsistencyReport};

/// Serializes any report to its canonical byte form.
pub fn emit_report<T: Serialize>(report: &T) -> String {
    let value = serde_json::to_value(report).expect("reports serialize to JSON");
    let mut out = serde_json::to_string(&value).expect("values print");
    out.push('\n');
    out
}

/// JSON form of a single-route check. Elapsed time is only included with
/// `timings`, so the default output is byte-stable.
pub fn check_json(report: &CheckReport, timings: bool) -> Value {
    let witness = report.witness.as_ref().map(|w| {
        let values: Map<String, Value> = w
            .values
            .iter()
            .enumerate()
            .map(|(i, record)| (format!("t{i}"), json!(record)))
            .collect();
        json!({ "rows": w.rows, "values": values })
    });
    let mut stats = json!({ "rows": report.stats.rows, "groups": report.stats.groups });
    if timings {
        stats["micros"] = json!(report.stats.micros);
    }
    json!({
        "atom": report.atom.to_string(),
        "satisfied": report.satisfied,
        "witness": witness,
        "stats": stats,
    })
}

pub fn crosscheck_json(atom: &DependencyAtom, report: &ConsistencyReport) -> Value {
    let oracles = match &report.algebra_oracles {
        Some(o) => json!(o),
        None => json!("skipped"),
    };
    json!({
        "atom": atom.to_string(),
        "routes": {
            "emvd_fast": report.emvd_fast,
            "emvd_bruteforce": report.emvd_bruteforce,
            "tuple_independence": report.tuple_independence,
            "algebra_fast": report.algebra_fast,
            "algebra_oracles": oracles,
        },
        "kernel_subalgebras": report.kernel_subalgebras,
        "agreement": report.agreement,
        "satisfied": report.verdict(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_atom;
    use crate::team::{check_atom, Mode, Schema, Team};

    fn team(rows: &[&[&str]]) -> Team {
        Team::from_rows(Schema::new(["x", "y"]).unwrap(), rows.iter()).unwrap()
    }

    #[test]
    fn satisfied_fd_has_null_witness() {
        let r = check_atom(&team(&[&["0", "0"], &["1", "1"]]), &parse_atom("x -> y").unwrap(), Mode::Fast)
            .unwrap();
        assert_eq!(
            emit_report(&check_json(&r, false)),
            "{\"atom\":\"x -> y\",\"satisfied\":true,\"stats\":{\"groups\":2,\"rows\":2},\"witness\":null}\n"
        );
    }

    #[test]
    fn violated_emvd_names_both_rows() {
        let r = check_atom(
            &team(&[&["0", "0"], &["1", "1"]]),
            &parse_atom("() ->> x | y").unwrap(),
            Mode::Fast,
        )
        .unwrap();
        let v = check_json(&r, true);
        assert_eq!(v["witness"]["rows"], json!([0, 1]));
        assert_eq!(v["witness"]["values"]["t1"], json!({"x": "1", "y": "1"}));
        assert!(v["stats"].get("micros").is_some());
    }

    #[test]
    fn keys_are_sorted_at_every_level() {
        let text = emit_report(&json!({"b": {"z": 1, "a": 2}, "a": [ {"y": 0, "x": 0} ]}));
        assert_eq!(text, "{\"a\":[{\"x\":0,\"y\":0}],\"b\":{\"a\":2,\"z\":1}}\n");
    }
}
