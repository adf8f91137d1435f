//! Command-line front end: decoding thresholds, EXIT chart data, BER
//! campaigns, user sweeps and parity-check matrix export.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use scidma::analysis::{self, standard_chart, sweep_users, DeOptions, THRESHOLD_TABLE_ROWS};
use scidma::harness::{ber_csv, profile_csv, run_ber, run_interleaver_comparison, SimConfig};
use scidma::multiuser::{ChannelModel, InterleaverKind};
use scidma::protograph::CodeId;
use scidma::{Error, LiftingStyle, ParityCheck};

#[derive(Parser)]
#[command(name = "scidma", version, about = "SC-LDPC over IDMA workbench")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Density-evolution decoding thresholds (single row or the full table)
    Threshold(ThresholdArgs),
    /// EXIT curves and DE trajectories at one SNR
    Exit(ExitArgs),
    /// Monte Carlo BER campaign over an SNR grid
    Ber(BerArgs),
    /// Gap-to-capacity sweep over user counts
    SweepUsers(SweepArgs),
    /// Construct a lifted parity-check matrix and emit it as alist
    Construct(ConstructArgs),
}

/// Config file plus field overrides shared by all subcommands.
#[derive(Args)]
struct Common {
    /// TOML config file; flags below override its fields
    #[arg(long)]
    config: Option<PathBuf>,
    /// Code selector: c1 | c2
    #[arg(long, value_parser = parse_code)]
    code: Option<CodeId>,
    /// Replication factor L
    #[arg(long = "replication", visible_alias = "L")]
    replication: Option<usize>,
    /// Lifting factor Z
    #[arg(long = "lifting", visible_alias = "Z")]
    lifting: Option<usize>,
    /// Repetition factor d_r
    #[arg(long = "dr")]
    d_r: Option<usize>,
    /// Number of users N
    #[arg(long = "users")]
    n_users: Option<usize>,
    /// SNR grid in dB (repeat or comma-separate)
    #[arg(long = "gamma", value_delimiter = ',', num_args = 1..)]
    gamma_db: Option<Vec<f64>>,
    /// Channel: awgn | rayleigh
    #[arg(long, value_parser = parse_channel)]
    channel: Option<ChannelModel>,
    /// Interleaver: sub_block | full
    #[arg(long, value_parser = parse_interleaver)]
    interleaver: Option<InterleaverKind>,
    /// Window width W_d in check positions
    #[arg(long)]
    window: Option<usize>,
    /// Joint iterations per window shift
    #[arg(long)]
    iterations: Option<usize>,
    /// Master seed
    #[arg(long)]
    seed: Option<u64>,
    /// Frame cap per SNR point
    #[arg(long)]
    max_frames: Option<u64>,
    /// Early-stop bit error target per SNR point
    #[arg(long)]
    target_errors: Option<u64>,
    /// Transmit the all-zero codeword instead of random data
    #[arg(long)]
    all_zero: Option<bool>,
    /// Permit full interleaver with a sliding window
    #[arg(long)]
    allow_full_windowed: bool,
    /// Write output here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Common {
    fn config(&self) -> Result<SimConfig, Error> {
        let mut cfg = match &self.config {
            Some(p) => SimConfig::from_file(p)?,
            None => SimConfig::default(),
        };
        macro_rules! set {
            ($($field:ident),*) => {
                $(if let Some(v) = self.$field.clone() { cfg.$field = v; })*
            };
        }
        set!(
            code,
            replication,
            lifting,
            d_r,
            n_users,
            gamma_db,
            channel,
            interleaver,
            window,
            iterations
        );
        if let Some(v) = self.seed {
            cfg.master_seed = v;
        }
        if let Some(v) = self.max_frames {
            cfg.max_frames = v;
        }
        if let Some(v) = self.target_errors {
            cfg.target_errors = v;
        }
        if let Some(v) = self.all_zero {
            cfg.all_zero = v;
        }
        if self.allow_full_windowed {
            cfg.allow_full_windowed = true;
        }
        Ok(cfg)
    }

    fn emit(&self, text: &str) -> Result<(), Error> {
        match &self.out {
            Some(p) => std::fs::write(p, text).map_err(Error::from),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }
}

#[derive(Args)]
struct ThresholdArgs {
    #[command(flatten)]
    common: Common,
    /// Reproduce the whole uncoupled-versus-coupled threshold table
    #[arg(long)]
    table: bool,
    /// Replication used for the coupled DE chain
    #[arg(long, default_value_t = 100)]
    de_replication: usize,
}

#[derive(Args)]
struct ExitArgs {
    #[command(flatten)]
    common: Common,
    /// Samples per transfer curve
    #[arg(long, default_value_t = 101)]
    samples: usize,
}

#[derive(Args)]
struct BerArgs {
    #[command(flatten)]
    common: Common,
    /// Also write the per-position BER profile to this path
    #[arg(long)]
    profile: Option<PathBuf>,
    /// Run the three-arm interleaver comparison instead of a single campaign
    #[arg(long)]
    compare_interleavers: bool,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    common: Common,
    /// Repetition factors to sweep
    #[arg(long = "dr-list", value_delimiter = ',', default_value = "10")]
    d_r_list: Vec<u32>,
    /// User counts to sweep
    #[arg(long = "users-list", value_delimiter = ',', default_value = "8,16,24,32,40,48,56,64")]
    n_list: Vec<usize>,
    /// Replication used for the coupled DE chain
    #[arg(long, default_value_t = 100)]
    de_replication: usize,
}

#[derive(Args)]
struct ConstructArgs {
    #[command(flatten)]
    common: Common,
    /// Lifting style: random_permutation | circulant
    #[arg(long, value_parser = parse_style, default_value = "random_permutation")]
    style: LiftingStyle,
}

fn parse_code(s: &str) -> Result<CodeId, String> {
    match s.to_ascii_lowercase().as_str() {
        "c1" => Ok(CodeId::C1),
        "c2" => Ok(CodeId::C2),
        _ => Err(format!("unknown code {s:?}; expected c1 or c2")),
    }
}

fn parse_channel(s: &str) -> Result<ChannelModel, String> {
    match s.to_ascii_lowercase().as_str() {
        "awgn" => Ok(ChannelModel::Awgn),
        "rayleigh" => Ok(ChannelModel::Rayleigh),
        _ => Err(format!("unknown channel {s:?}; expected awgn or rayleigh")),
    }
}

fn parse_interleaver(s: &str) -> Result<InterleaverKind, String> {
    match s.to_ascii_lowercase().as_str() {
        "sub_block" | "subblock" => Ok(InterleaverKind::SubBlock),
        "full" => Ok(InterleaverKind::Full),
        _ => Err(format!("unknown interleaver {s:?}; expected sub_block or full")),
    }
}

fn parse_style(s: &str) -> Result<LiftingStyle, String> {
    match s.to_ascii_lowercase().as_str() {
        "random_permutation" | "random" => Ok(LiftingStyle::RandomPermutation),
        "circulant" => Ok(LiftingStyle::Circulant),
        _ => Err(format!(
            "unknown lifting style {s:?}; expected random_permutation or circulant"
        )),
    }
}

fn code_degrees(code: CodeId) -> (u32, u32) {
    match code {
        CodeId::C1 => (3, 6),
        CodeId::C2 => (3, 4),
    }
}

fn fmt_db(v: Option<f64>) -> String {
    match v {
        Some(t) => format!("{t:.2}"),
        None => "-".into(),
    }
}

fn cmd_threshold(args: &ThresholdArgs) -> Result<(), Error> {
    let cfg = args.common.config()?;
    let opts = DeOptions::default();
    let mut out = String::from("d_r,d_v,d_c,n_users,uncoupled_db,coupled_db\n");
    if args.table {
        for &(d_r, d_v, d_c) in &THRESHOLD_TABLE_ROWS {
            let (unc, cpl) = analysis::table_row_thresholds(
                d_r,
                d_v,
                d_c,
                cfg.n_users,
                args.de_replication,
                &opts,
            )?;
            out.push_str(&format!(
                "{d_r},{d_v},{d_c},{},{},{}\n",
                cfg.n_users,
                fmt_db(unc),
                fmt_db(cpl)
            ));
        }
    } else {
        let (d_v, d_c) = code_degrees(cfg.code);
        let (unc, cpl) = analysis::table_row_thresholds(
            cfg.d_r as u32,
            d_v,
            d_c,
            cfg.n_users,
            args.de_replication,
            &opts,
        )?;
        out.push_str(&format!(
            "{},{d_v},{d_c},{},{},{}\n",
            cfg.d_r,
            cfg.n_users,
            fmt_db(unc),
            fmt_db(cpl)
        ));
    }
    args.common.emit(&out)
}

fn cmd_exit(args: &ExitArgs) -> Result<(), Error> {
    let cfg = args.common.config()?;
    let gamma = *cfg.gamma_db.first().ok_or_else(|| {
        Error::InvalidConfig("exit needs one SNR point: pass --gamma <dB>".into())
    })?;
    let curves = standard_chart(
        cfg.code,
        cfg.replication.max(50),
        cfg.d_r as u32,
        cfg.n_users,
        gamma,
        args.samples,
    );
    let mut out = String::from("curve,i_a,i_e\n");
    for c in &curves {
        for &(x, y) in &c.points {
            out.push_str(&format!("{},{x},{y}\n", c.label));
        }
    }
    args.common.emit(&out)
}

fn cmd_ber(args: &BerArgs) -> Result<(), Error> {
    let cfg = args.common.config()?;
    if cfg.gamma_db.is_empty() {
        return Err(Error::InvalidConfig(
            "no SNR points: set gamma_db in the config or pass --gamma <dB,...>".into(),
        ));
    }
    if args.compare_interleavers {
        let results = run_interleaver_comparison(&cfg)?;
        let text: String = results.iter().map(ber_csv).collect();
        args.common.emit(&text)?;
    } else {
        let result = run_ber(&cfg)?;
        args.common.emit(&ber_csv(&result))?;
        if let Some(p) = &args.profile {
            std::fs::write(p, profile_csv(&result))?;
        }
    }
    Ok(())
}

fn cmd_sweep(args: &SweepArgs) -> Result<(), Error> {
    let opts = DeOptions::default();
    let points = sweep_users(args.de_replication, &args.d_r_list, &args.n_list, &opts)?;
    let mut out = String::from("d_r,n_users,r_sum,threshold_db,gap_db\n");
    for p in &points {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            p.d_r,
            p.n_users,
            p.r_sum,
            fmt_db(p.threshold_db),
            fmt_db(p.gap_db)
        ));
    }
    args.common.emit(&out)
}

fn cmd_construct(args: &ConstructArgs) -> Result<(), Error> {
    let cfg = args.common.config()?;
    let cp = cfg.coupled()?;
    let h = ParityCheck::lift(&cp, cfg.lifting, cfg.master_seed, args.style)?;
    args.common.emit(&h.to_alist())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.cmd {
        Cmd::Threshold(a) => cmd_threshold(a),
        Cmd::Exit(a) => cmd_exit(a),
        Cmd::Ber(a) => cmd_ber(a),
        Cmd::SweepUsers(a) => cmd_sweep(a),
        Cmd::Construct(a) => cmd_construct(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e @ (Error::InvalidConfig(_) | Error::InvalidArgument(_))) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

// A smoke test of the DE threshold used in the CLI examples lives in the
// library's analysis tests; here only argument parsing is exercised.
#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_threshold_flags() {
        let cli = Cli::parse_from(["scidma", "threshold", "--code", "c1", "--users", "8", "--dr", "4"]);
        match cli.cmd {
            Cmd::Threshold(a) => {
                let cfg = a.common.config().unwrap();
                assert_eq!(cfg.n_users, 8);
                assert_eq!(cfg.d_r, 4);
            }
            _ => panic!("wrong subcommand"),
        }
    }

    #[test]
    fn parses_gamma_list() {
        let cli = Cli::parse_from(["scidma", "ber", "--gamma", "1.5,2.0,2.5"]);
        match cli.cmd {
            Cmd::Ber(a) => {
                let cfg = a.common.config().unwrap();
                assert_eq!(cfg.gamma_db.len(), 3);
            }
            _ => panic!("wrong subcommand"),
        }
    }

    #[test]
    fn rejects_unknown_code() {
        assert!(Cli::try_parse_from(["scidma", "threshold", "--code", "c9"]).is_err());
    }
}
