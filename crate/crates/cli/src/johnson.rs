//! `johnson-check`: the identity sweep over `(N, k)` and the initial-state weight check.

use std::fs::File;

use pickone_johnson::{identity_rows, initialbound_check, sweep_points, IdentityRow, Relation as IdRelation};

use crate::args::JohnsonArgs;
use crate::report::{Relation, ReportRow};
use crate::trials::run_trials;

const EXPERIMENT: &str = "johnson-check";
const INITIAL: &str = "johnson-initial-weight";

fn to_report(row: &IdentityRow) -> ReportRow {
    let echo = serde_json::json!({ "N": row.n, "k": row.k });
    let (relation, tol) = match row.relation {
        IdRelation::Equal(tol) => (Relation::Within, tol),
        IdRelation::AtMost(tol) => (Relation::AtMost, tol),
        IdRelation::Report => (Relation::Report, 0.0),
    };
    ReportRow::check(EXPERIMENT, &echo, &row.identity, row.computed, relation, row.closed_form, tol)
}

#[derive(serde::Serialize)]
struct TableRecord<'a> {
    #[serde(rename = "N")]
    n: usize,
    k: usize,
    identity: &'a str,
    computed: f64,
    closed_form: f64,
    abs_err: f64,
}

pub fn run(args: &JohnsonArgs) -> anyhow::Result<Vec<ReportRow>> {
    let points = sweep_points(args.nmax);
    let results = run_trials(args.common.workers, points.len() as u64, |i| {
        let (n, k) = points[i as usize];
        Ok(identity_rows(n, k).map_err(|e| (n, k, e.to_string())))
    })?;
    let mut rows = Vec::new();
    let mut table = Vec::new();
    for result in results {
        match result {
            Ok(identities) => {
                rows.extend(identities.iter().map(to_report));
                table.extend(identities);
            }
            Err((n, k, message)) => {
                rows.push(ReportRow::error(
                    EXPERIMENT,
                    &serde_json::json!({ "N": n, "k": k }),
                    "identity_rows",
                    message,
                ));
            }
        }
    }
    if points.is_empty() {
        rows.push(ReportRow::error(
            EXPERIMENT,
            &serde_json::json!({ "nmax": args.nmax }),
            "identity_rows",
            "the sweep starts at N = 5",
        ));
    }
    if let Some(path) = &args.table {
        let mut w = csv::Writer::from_writer(File::create(path)?);
        for r in &table {
            w.serialize(TableRecord {
                n: r.n,
                k: r.k,
                identity: &r.identity,
                computed: r.computed,
                closed_form: r.closed_form,
                abs_err: r.abs_err,
            })?;
        }
        w.flush()?;
    }

    let [m, n, k, h] = args.initial[..] else {
        anyhow::bail!("--initial takes four values M,N,k,h");
    };
    let echo = serde_json::json!({ "M": m, "N": n, "k": k, "h": h, "alpha": "uniform" });
    match initialbound_check(m, n, k, h, &vec![[1.0, 1.0]; h]) {
        Ok(check) => {
            rows.push(ReportRow::check(
                INITIAL,
                &echo,
                "weight_outside_low_irreps",
                check.p_b0,
                Relation::AtMost,
                check.bound,
                0.0,
            ));
            rows.push(ReportRow::report(
                INITIAL,
                &echo,
                "collision_probability",
                check.collision_probability,
                check.bound,
            ));
        }
        Err(e) => rows.push(ReportRow::error(INITIAL, &echo, "weight_outside_low_irreps", e)),
    }
    Ok(rows)
}
