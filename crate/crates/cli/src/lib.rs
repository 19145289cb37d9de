//! Seeded experiment harness for the pick-one oracle world.
//!
//! Every subcommand turns its flags into [`ReportRow`]s. A row carries the measured value, the
//! value or bound it is checked against, the relation and tolerance, and a pass flag computed
//! from those alone. Reports are byte-identical for a fixed command line, whatever the worker count.

pub mod args;
pub mod checks;
pub mod commit;
pub mod emulation;
pub mod johnson;
pub mod protocols;
pub mod report;
pub mod search;
pub mod stat_lemmas;
pub mod trials;
pub mod world_dump;

pub use args::{Cli, Command, Common};
pub use report::{all_pass, read_report, write_report, Format, Relation, ReportHeader, ReportRow, SCHEMA};

/// Runs one subcommand. Failures inside an experiment become a single error row.
pub fn run(command: &Command) -> Vec<ReportRow> {
    let result = match command {
        Command::WorldDump(a) => world_dump::run(a),
        Command::Pickone(a) => search::run(a),
        Command::CommitAttack(a) => commit::run(a),
        Command::SigmaAttack(a) => protocols::run_sigma(a),
        Command::FsAttack(a) => protocols::run_fs(a),
        Command::FischlinAttack(a) => protocols::run_fischlin(a),
        Command::OpsiEmulation(a) => emulation::run(a),
        Command::JohnsonCheck(a) => johnson::run(a),
        Command::StatLemmas(a) => stat_lemmas::run(a),
    };
    result.unwrap_or_else(|e| vec![ReportRow::error(command.name(), &serde_json::json!({}), "run", format!("{e:#}"))])
}

/// Writes the report for `command` and returns whether every row passed.
pub fn execute(command: &Command) -> anyhow::Result<bool> {
    let common = command.common();
    let rows = run(command);
    let header = ReportHeader::new(command.name(), common.seed);
    match &common.out {
        Some(path) => {
            let mut file = std::io::BufWriter::new(std::fs::File::create(path)?);
            write_report(&mut file, common.format, &header, &rows)?;
            std::io::Write::flush(&mut file)?;
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            write_report(&mut lock, common.format, &header, &rows)?;
        }
    }
    Ok(all_pass(&rows))
}
