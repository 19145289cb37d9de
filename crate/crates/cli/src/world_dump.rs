//! `world-dump`: sample a world, check its tables, and serialize it.

use std::fs;

use pickone_core::world::{OracleWorld, Variant};

use crate::args::WorldDumpArgs;
use crate::checks::zero_count;
use crate::report::{Relation, ReportRow};
use crate::trials::derive_seed;

const EXPERIMENT: &str = "world-dump";

pub fn run(args: &WorldDumpArgs) -> anyhow::Result<Vec<ReportRow>> {
    let seed = args.common.seed;
    let variant = Variant::from(args.variant);
    let params = pickone_core::world::WorldParams::new(args.l_com, args.l_ch, args.l_resp)?;
    let echo = serde_json::json!({
        "l_com": args.l_com,
        "l_ch": args.l_ch,
        "l_resp": args.l_resp,
        "variant": variant,
        "queries": args.queries,
    });
    let world = OracleWorld::sample(params, variant, derive_seed(seed, "world", 0))?;
    let public = world.public();
    for i in 0..args.queries {
        public.oracle_s(derive_seed(seed, "os-query", i) % (1u64 << params.l_rand()));
    }
    let dump = world.dump();
    let restored = OracleWorld::restore(&dump)?.dump();
    let sets = &dump.sets;
    let k = params.k();
    let wrong_sizes = sets.iter().filter(|s| s.len() != k).count() as u64;
    let mut members_outside = 0u64;
    for entry in &dump.os_table {
        members_outside += u64::from(!sets[entry.y].contains(&entry.x));
    }
    let relation_holds = world.oracle_r(world.s0(), world.w0());
    let expect_relation = matches!(variant, Variant::Statistical);
    let mut rows = vec![
        ReportRow::check(
            EXPERIMENT,
            &echo,
            "restore_roundtrip",
            f64::from(u8::from(restored == dump)),
            Relation::Within,
            1.0,
            0.0,
        ),
        ReportRow::check(
            EXPERIMENT,
            &echo,
            "subsets",
            sets.len() as f64,
            Relation::Within,
            params.y_size() as f64,
            0.0,
        ),
        zero_count(EXPERIMENT, &echo, "subsets_of_wrong_size", wrong_sizes),
        zero_count(EXPERIMENT, &echo, "samples_outside_their_subset", members_outside),
        ReportRow::check(
            EXPERIMENT,
            &echo,
            "statement_has_witness",
            f64::from(u8::from(relation_holds)),
            Relation::Within,
            f64::from(u8::from(expect_relation)),
            0.0,
        ),
        ReportRow::report(EXPERIMENT, &echo, "sample_table_entries", dump.os_table.len() as f64, args.queries as f64),
    ];
    if let Some(path) = &args.dump {
        fs::write(path, serde_json::to_string_pretty(&dump)? + "\n")?;
        rows.push(
            ReportRow::report(EXPERIMENT, &echo, "dump_bytes", fs::metadata(path)?.len() as f64, 0.0)
                .with_detail(path.display()),
        );
    }
    Ok(rows)
}
