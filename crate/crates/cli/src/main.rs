use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use dlab_core::inverse::{self, InverseCheck, InverseState};
use dlab_core::oracle;
use dlab_core::product::{self, Interleave, SolverConfig, PairCheck, PairState};
use dlab_core::recurrence::{self, EscapeSide};
use dlab_core::{tdseq, Block, CheckReport, Error};

/// Builders and verifiers for rigid shift points and finite determinism checks.
#[derive(Parser, Debug)]
#[command(name = "dlab", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// One-sided rigid point.
    #[command(subcommand, alias = "thm1")]
    Inverse(InverseCmd),
    /// Two-sided pair with orthogonal supports.
    #[command(subcommand, alias = "thm2")]
    Pair(PairCmd),
    /// Window-level recurrence certificates on a built pair.
    #[command(subcommand)]
    Recur(RecurCmd),
    /// Exhaustive checks on finite maps.
    #[command(subcommand)]
    Oracle(OracleCmd),
}

#[derive(Subcommand, Debug)]
enum InverseCmd {
    Build {
        #[arg(long)]
        stage: usize,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = inverse::DEFAULT_MAX_LEN)]
        max_len: u64,
    },
    Verify {
        #[arg(long)]
        stage: usize,
        /// Zero-run bound; also bounds the shift check unless `--c3-kmax` is given.
        #[arg(long)]
        kmax: usize,
        #[arg(long)]
        c3_kmax: Option<usize>,
        #[arg(long)]
        jmax: Option<usize>,
        /// Hypothesis length for the uncorrected smallness falsifier.
        #[arg(long, default_value_t = 3)]
        literal_k: usize,
        #[arg(long, default_value_t = inverse::DEFAULT_MAX_LEN)]
        max_len: u64,
    },
}

#[derive(Args, Debug, Clone, Copy)]
struct PairOpts {
    #[arg(long)]
    stage: usize,
    /// Interleave before every stage.
    #[arg(long)]
    transitive: bool,
    #[arg(long, default_value_t = SolverConfig::default().max_len)]
    max_len: u64,
    #[arg(long, default_value_t = SolverConfig::default().max_attempts)]
    max_attempts: usize,
}

#[derive(Subcommand, Debug)]
enum PairCmd {
    Build {
        #[command(flatten)]
        opts: PairOpts,
        #[arg(long)]
        out_x: PathBuf,
        #[arg(long)]
        out_y: PathBuf,
    },
    Verify {
        #[command(flatten)]
        opts: PairOpts,
        #[arg(long)]
        kmax: usize,
    },
}

#[derive(Subcommand, Debug)]
enum RecurCmd {
    PairSep {
        #[command(flatten)]
        opts: PairOpts,
        /// Defaults to the full built half-width.
        #[arg(long)]
        horizon: Option<u64>,
    },
    Escape {
        #[command(flatten)]
        opts: PairOpts,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        w: u64,
        #[arg(long)]
        witness_out: Option<PathBuf>,
    },
    Omega {
        #[command(flatten)]
        opts: PairOpts,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        w: u64,
        #[arg(long)]
        witness_out: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
enum OracleCmd {
    Sweep {
        #[arg(long)]
        nmax: usize,
        #[arg(long)]
        permutations_only: bool,
        /// Largest power `N` for the power-system checks.
        #[arg(long = "Nmax", default_value_t = 4)]
        big_nmax: usize,
    },
    /// Collapses the orbit closure of a non-recurrent point.
    #[command(alias = "lemma6")]
    Collapse {
        /// Map table `v0,v1,...`.
        #[arg(long)]
        map: String,
        #[arg(long)]
        point: usize,
    },
}

/// Buffered report stream; remembers whether anything failed.
struct Out<W: Write> {
    w: W,
    failed: bool,
}

impl<W: Write> Out<W> {
    fn line(&mut self, s: impl AsRef<str>) -> io::Result<()> {
        writeln!(self.w, "{}", s.as_ref())
    }

    fn report(&mut self, r: &CheckReport) -> io::Result<()> {
        self.failed |= r.failed();
        self.line(r.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout().lock();
    let mut out = Out {
        w: BufWriter::new(stdout),
        failed: false,
    };
    let res = run(cli.cmd, &mut out);
    let flushed = out.w.flush();
    match (res, flushed) {
        (Err(e), _) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        (Ok(()), Err(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        (Ok(()), Ok(())) if out.failed => ExitCode::from(1),
        _ => ExitCode::SUCCESS,
    }
}

fn write_block(path: &Path, block: &Block) -> Result<(), Error> {
    let mut f = BufWriter::new(File::create(path)?);
    tdseq::write(block, &mut f)?;
    f.flush()?;
    Ok(())
}

fn pair_state<W: Write>(opts: PairOpts, out: &mut Out<W>) -> Result<PairState, Error> {
    if opts.stage == 0 {
        return Err(Error::Param {
            name: "stage",
            value: "0".into(),
            reason: "stages start at 1".into(),
        });
    }
    let cfg = SolverConfig {
        max_attempts: opts.max_attempts,
        max_len: opts.max_len,
    };
    let mut state = PairState::initial();
    while state.stage() < opts.stage {
        if opts.transitive {
            let lens = Interleave::for_state(&state);
            state = product::build_transitive_stage(&state, lens)?;
            out.line(format!(
                "INTERLEAVE r={} a={} b={} c={} d={} len={}",
                state.stage(),
                lens.a,
                lens.b,
                lens.c,
                lens.d,
                state.len()
            ))?;
        }
        let sol = product::solve_spacers(&state, &cfg)?;
        out.line(format!(
            "{} attempts={} len={}",
            product::spacer_line(state.stage(), &sol.choice),
            sol.attempts,
            sol.next.len()
        ))?;
        state = sol.next;
    }
    Ok(state)
}

fn run<W: Write>(cmd: Command, out: &mut Out<W>) -> Result<(), Error> {
    match cmd {
        Command::Inverse(InverseCmd::Build { stage, out: path, max_len }) => {
            let st = inverse::build_capped(stage, max_len)?;
            write_block(&path, st.prefix())?;
            out.report(&inverse_build_report(&st))?;
        }
        Command::Inverse(InverseCmd::Verify {
            stage,
            kmax,
            c3_kmax,
            jmax,
            literal_k,
            max_len,
        }) => {
            let st = inverse::build_capped(stage, max_len)?;
            out.report(&inverse_build_report(&st))?;
            let inner = stage.saturating_sub(1);
            let checks = [
                InverseCheck::ZeroRunThenOne { kmax },
                InverseCheck::ShiftRigidity {
                    kmax: c3_kmax.unwrap_or(kmax.min(inner)),
                },
                InverseCheck::SmallnessPropagation {
                    jmax: jmax.unwrap_or(kmax.min(inner)),
                },
                InverseCheck::Tails,
            ];
            for c in checks {
                out.report(&inverse::verify(&st, c)?)?;
            }
            out.report(&inverse::literal_smallness_report(st.prefix(), literal_k))?;
        }
        Command::Pair(PairCmd::Build { opts, out_x, out_y }) => {
            let st = pair_state(opts, out)?;
            write_block(&out_x, st.x())?;
            write_block(&out_y, st.y())?;
            out.report(
                &CheckReport::pass("BUILD")
                    .param("stage", st.stage())
                    .param("transitive", st.is_transitive())
                    .witness("len", st.len())
                    .witness("m", join(st.m_times()))
                    .witness("n", join(st.n_times())),
            )?;
        }
        Command::Pair(PairCmd::Verify { opts, kmax }) => {
            let st = pair_state(opts, out)?;
            let kmax = kmax.min(st.times_defined());
            let mut checks = PairCheck::required(kmax, st.is_transitive());
            if !st.is_transitive() {
                checks.extend((1..=kmax).map(PairCheck::SlidingFalsifier));
            }
            for r in product::verify_all(&st, &checks)? {
                out.report(&r)?;
            }
        }
        Command::Recur(RecurCmd::PairSep { opts, horizon }) => {
            let st = pair_state(opts, out)?;
            let h = horizon.unwrap_or(st.half_width() as u64);
            out.report(&recurrence::pair_separation_check(&st, h)?)?;
        }
        Command::Recur(RecurCmd::Escape { opts, k, w, witness_out }) => {
            let st = pair_state(opts, out)?;
            let mut dump = witness_out.map(File::create).transpose()?.map(BufWriter::new);
            for side in [EscapeSide::XatN, EscapeSide::YatM] {
                let map = recurrence::escape_witness(&st, k, w, side)?;
                out.report(&map.report(st.stage()))?;
                if let Some(f) = dump.as_mut() {
                    for l in map.witness_lines() {
                        writeln!(f, "{l} side={side}")?;
                    }
                }
            }
            if let Some(mut f) = dump {
                f.flush()?;
            }
        }
        Command::Recur(RecurCmd::Omega { opts, k, w, witness_out }) => {
            let st = pair_state(opts, out)?;
            let (r, choices) = recurrence::cross_omega_witness(&st, k, w)?;
            out.report(&r)?;
            if let Some(path) = witness_out {
                let mut f = BufWriter::new(File::create(path)?);
                for l in recurrence::omega_witness_lines(k, &choices) {
                    writeln!(f, "{l}")?;
                }
                f.flush()?;
            }
        }
        Command::Oracle(OracleCmd::Sweep {
            nmax,
            permutations_only,
            big_nmax,
        }) => {
            for n in 1..=nmax {
                for r in oracle::sweep(n, permutations_only, big_nmax)? {
                    out.report(&r)?;
                }
            }
        }
        Command::Oracle(OracleCmd::Collapse { map, point }) => {
            let sys = oracle::parse_map(&map)?;
            out.line(sys.to_string())?;
            let col = oracle::orbit_collapse(&sys, point)?;
            out.report(&col.report(&sys))?;
        }
    }
    Ok(())
}

fn inverse_build_report(st: &InverseState) -> CheckReport {
    CheckReport::pass("BUILD")
        .param("stage", st.stage())
        .witness("len", st.prefix().len())
        .witness("lengths", join(st.lengths()))
}

fn join(v: &[u64]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}
