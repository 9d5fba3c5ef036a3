//! `hdsc` command line.
//!
//! Exit codes: 0 success, 1 domain error, 2 usage error. Reports go to the
//! output stream and diagnostics to the error stream.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::cluster::{ClusterState, ReconstructReport};
use crate::code::{repair_matrix, stacked_with, CodeParams, NodeId};
use crate::error::{Error, Result};
use crate::hadamard::{
    column_distance, hadamard_column, verify_gram, ExponentTuple, HadamardMatrix,
};
use crate::lattice::{
    alignment_ratio, alignment_table, predict_rank, repair_lattice, AlignmentRow,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Largest `k` accepted by `verify`.
pub const VERIFY_MAX_K: usize = 8;

#[derive(Debug, Parser)]
#[command(
    name = "hdsc",
    version,
    about = "Hadamard-design storage code over GF(3)"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Encode a file into a new cluster directory.
    Encode {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        outdir: PathBuf,
    },
    /// Mark a node failed.
    Fail {
        #[arg(long)]
        dir: PathBuf,
        #[arg(long)]
        node: NodeId,
    },
    /// Repair a failed node.
    Repair {
        #[arg(long)]
        dir: PathBuf,
        #[arg(long)]
        node: NodeId,
        /// Print the download transcript.
        #[arg(long)]
        report: bool,
    },
    /// Decode the stored file.
    Reconstruct {
        #[arg(long)]
        dir: PathBuf,
        /// Nodes the data collector does not connect to, e.g. `s2,s3`.
        #[arg(long, value_delimiter = ',')]
        exclude: Vec<NodeId>,
        #[arg(long)]
        output: PathBuf,
    },
    /// Check the algebraic invariants for one `k`. Runs every suite when no
    /// suite is selected.
    Verify {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        ranks: bool,
        #[arg(long)]
        lattice: bool,
        #[arg(long)]
        gram: bool,
    },
    /// Print the unwrapped lattice alignment table as CSV.
    Analyze {
        #[arg(long)]
        k: usize,
        #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
        delta: u64,
    },
}

/// One named check and its outcome.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
}

impl Check {
    fn new(name: impl Into<String>, passed: bool) -> Self {
        Check {
            name: name.into(),
            passed,
        }
    }

    pub fn line(&self) -> String {
        format!(
            "{}: {}",
            self.name,
            if self.passed { "PASS" } else { "FAIL" }
        )
    }
}

/// `rank([V_i | X_j V_i])` for every pair, against `N` / `N/2` and the
/// lattice prediction. Returns the table lines and the checks.
pub fn rank_checks(k: usize) -> Result<(Vec<String>, Vec<Check>)> {
    let params = CodeParams::new(k)?;
    let n = params.n();
    let mut table = vec!["i,j,rank,predicted,expected".to_string()];
    let mut all_ok = true;
    for i in 1..=k {
        let v = repair_matrix(&params, i)?;
        for j in 1..=k {
            let rank = stacked_with(&v, params.generator(j)?)?.rank();
            let predicted = predict_rank(i, j, k)?;
            let expected = if i == j { n } else { n / 2 };
            all_ok &= rank == predicted && rank == expected;
            table.push(format!("{i},{j},{rank},{predicted},{expected}"));
        }
    }
    Ok((
        table,
        vec![Check::new(format!("interference ranks k={k}"), all_ok)],
    ))
}

/// Wrap-around closure of `ℒ(V_i)` under `X_j` at `Δ = 2` for every `j ≠ i`,
/// plus the unwrapped ratio `(Δ+1)/Δ` at `Δ = 2`.
pub fn lattice_checks(k: usize) -> Result<Vec<Check>> {
    CodeParams::new(k)?;
    let mut checks = Vec::new();
    for i in 1..=k {
        let base = repair_lattice(i, k, 2)?;
        for j in (1..=k).filter(|&j| j != i) {
            checks.push(Check::new(
                format!("wrap-around closure i={i} j={j}"),
                base.shift(j, true)? == base,
            ));
        }
    }
    if k >= 2 {
        let ratio = alignment_ratio(k, 2)?;
        checks.push(Check::new(
            "unwrapped ratio 3/2 at delta=2",
            ratio == num_rational::Ratio::new(3, 2),
        ));
    }
    Ok(checks)
}

/// Gram identity, column set and pairwise distance of `H_N`.
pub fn gram_checks(k: usize) -> Result<Vec<Check>> {
    CodeParams::new(k)?;
    let h = HadamardMatrix::sylvester(k)?;
    let n = h.order();
    let columns = h.columns();
    let products: BTreeSet<Vec<u8>> = ExponentTuple::all(k)
        .map(|t| hadamard_column(&t).map(|c| c.values()))
        .collect::<Result<_>>()?;
    let listed: BTreeSet<Vec<u8>> = columns.iter().map(|c| c.values()).collect();
    let mut distances_ok = true;
    for a in 0..n {
        for b in a + 1..n {
            distances_ok &= column_distance(&columns[a], &columns[b])? == n / 2;
        }
    }
    Ok(vec![
        Check::new("HᵀH = N·I", verify_gram(&h)),
        Check::new(
            "columns = products of generators",
            products == listed && listed.len() == n,
        ),
        Check::new("distinct columns differ in N/2 positions", distances_ok),
    ])
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(err, "{text}")
            } else {
                write!(out, "{text}")
            };
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(true) => EXIT_OK,
        Ok(false) => EXIT_DOMAIN,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_DOMAIN
        }
    }
}

/// Runs one command. `Ok(false)` means a check failed.
pub fn execute(command: Command, out: &mut dyn Write) -> Result<bool> {
    match command {
        Command::Encode { k, input, outdir } => {
            let bytes = std::fs::read(&input)?;
            let state = ClusterState::init(k, &bytes, &outdir)?;
            let m = state.manifest();
            writeln!(
                out,
                "k={} byte_length={} stripes={}",
                m.k, m.byte_length, m.stripes
            )?;
            for c in &m.chunks {
                writeln!(out, "{} {} {}", c.node, c.filename, c.status)?;
            }
        }
        Command::Fail { dir, node } => {
            let mut state = ClusterState::open(&dir)?;
            state.fail_node(node.validate(state.params().k())?)?;
            writeln!(out, "failed {node}")?;
        }
        Command::Repair { dir, node, report } => {
            let mut state = ClusterState::open(&dir)?;
            let transcript = state.run_repair(node.validate(state.params().k())?)?;
            if report {
                for line in transcript.report_lines() {
                    writeln!(out, "{line}")?;
                }
            } else {
                writeln!(out, "repaired {node}")?;
            }
        }
        Command::Reconstruct {
            dir,
            exclude,
            output,
        } => {
            let state = ClusterState::open(&dir)?;
            let ReconstructReport {
                bytes_written,
                downloads_per_stripe,
            } = state.run_reconstruct(&exclude, &output)?;
            for d in downloads_per_stripe {
                writeln!(out, "downloaded={d}")?;
            }
            writeln!(out, "bytes={bytes_written}")?;
        }
        Command::Verify {
            k,
            ranks,
            lattice,
            gram,
        } => {
            if !(1..=VERIFY_MAX_K).contains(&k) {
                return Err(Error::UnsupportedK(k));
            }
            let all = !(ranks || lattice || gram);
            let mut checks = Vec::new();
            if all || ranks {
                let (table, c) = rank_checks(k)?;
                for line in table {
                    writeln!(out, "{line}")?;
                }
                checks.extend(c);
            }
            if all || lattice {
                checks.extend(lattice_checks(k)?);
            }
            if all || gram {
                checks.extend(gram_checks(k)?);
            }
            for c in &checks {
                writeln!(out, "{}", c.line())?;
            }
            return Ok(checks.iter().all(|c| c.passed));
        }
        Command::Analyze { k, delta } => {
            CodeParams::new(k)?;
            writeln!(out, "{}", AlignmentRow::CSV_HEADER)?;
            for row in alignment_table(k, delta)? {
                writeln!(out, "{}", row.to_csv())?;
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(
            std::iter::once("hdsc").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn analyze_rows() {
        let (code, out, _) = call(&["analyze", "--k", "3", "--delta", "2"]);
        assert_eq!(code, 0);
        assert!(out.starts_with("k,delta,i,j,union_size,ratio\n"));
        assert!(out.lines().any(|l| l == "3,2,1,2,6,1.5"));
        let (_, out, _) = call(&["analyze", "--k", "3", "--delta", "16"]);
        assert!(out.lines().any(|l| l == "3,16,1,2,272,1.0625"));
        assert_eq!(call(&["analyze", "--k", "3", "--delta", "1"]).0, 2);
    }

    #[test]
    fn verify_suites() {
        let (code, out, _) = call(&["verify", "--k", "4", "--gram"]);
        assert_eq!(code, 0);
        assert!(out.contains("HᵀH = N·I: PASS"));
        let (code, out, _) = call(&["verify", "--k", "3", "--ranks"]);
        assert_eq!(code, 0);
        assert!(out.contains("3,3,8,8,8") && out.contains("1,2,4,4,4"));
        let (code, out, _) = call(&["verify", "--k", "3", "--lattice"]);
        assert_eq!(code, 0);
        assert_eq!(
            out.lines()
                .filter(|l| l.starts_with("wrap-around closure") && l.ends_with("PASS"))
                .count(),
            6
        );
        let (code, _, err) = call(&["verify", "--k", "9"]);
        assert_eq!(code, 1);
        assert!(err.contains("unsupported k"));
    }

    #[test]
    fn usage_errors() {
        assert_eq!(call(&[]).0, 2);
        assert_eq!(call(&["encode", "--k", "3", "--outdir", "x"]).0, 2);
        assert_eq!(call(&["repair", "--dir", "x", "--node", "s0"]).0, 2);
        assert_eq!(call(&["--help"]).0, 0);
    }
}
