//! Command-line front end: channel validation, the capacity evaluators,
//! the block-Markov rate and simulator, the feedback-scheme simulator, the
//! output-law comparison bounds, built-in example export, and the `repro`
//! claim table.
//!
//! Exit codes: 0 success; 1 validation or computation error; 2 an
//! enumeration/search/table cap was exceeded; 3 the repro table has a
//! failing row.
//!
//! Defaults may be supplied by a JSON document named by the
//! `HELPERDMC_CONFIG` environment variable; explicit flags always win,
//! built-ins apply last.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use helperdmc::blockmarkov::{
    bm_rate, bm_rate_feasible_region, simulate_block_markov, BlockMarkovSpec, LastBlockMode,
    SimConfig, SimReport,
};
use helperdmc::channels::{full_csi_capacity, validate_and_load, Channel};
use helperdmc::duality::{
    canonical_strategies, class_bound, duality_upper_bound, exact_kl_for_strategy, DualityConfig,
};
use helperdmc::examples::{
    build_example1, build_example2, build_example3, build_reference_bm_spec,
    simulate_ex2_causal_scheme, Example2Params,
};
use helperdmc::helpercap::{
    best_sbs_helper, decoder_csi_capacity, helper_to_both_capacity, mc_capacity, no_csi_capacity,
    shannon_causal_capacity, BaConfig, CapacityReport, EnumConfig, HelperMap,
};
use helperdmc::repro::{all_pass, repro_rows, rows_to_csv};
use helperdmc::{Error, Result};

// ---------------------------------------------------------------------------
// Argument surface.

#[derive(Parser)]
#[command(
    name = "helperdmc",
    version,
    about = "Capacity workbench for state-dependent channels with a rate-limited causal state observer"
)]
struct Cli {
    /// Worker threads (default: all cores). Results are thread-count
    /// invariant.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Parse and validate a channel spec document.
    Validate {
        /// Path to a channel spec JSON file.
        spec: PathBuf,
    },
    /// Compute a capacity of the channel under the chosen information
    /// pattern.
    Capacity {
        spec: PathBuf,
        #[arg(long, value_enum)]
        mode: Mode,
        /// Description alphabet size for sbs/mc modes (>= 2).
        #[arg(long)]
        t_size: Option<usize>,
        /// Mirror the result to a CSV file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Capacity with a fixed description map available to the encoder
    /// (causally) and to the decoder.
    HelpToBoth {
        spec: PathBuf,
        /// Description map, e.g. "0,1,1,0" or "0110" (state index -> symbol).
        #[arg(long)]
        helper: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Achievable-rate report for a block-Markov spec document.
    BmRate {
        bmspec: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Monte-Carlo simulation of the block-Markov scheme.
    BmSim {
        bmspec: PathBuf,
        /// Block length.
        #[arg(long)]
        n: usize,
        /// Number of blocks per trial (>= 2; the last block carries no data).
        #[arg(long, default_value_t = 3)]
        lambda: usize,
        /// Typicality slack; smaller is stricter.
        #[arg(long)]
        eps: Option<f64>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        /// Rate-point slack inside the feasible region, in (0,1).
        #[arg(long, default_value_t = 0.4)]
        margin: f64,
        /// Decoder hypothesis budget.
        #[arg(long)]
        search_cap: Option<u64>,
        /// How the final bin index reaches the decoder.
        #[arg(long, value_enum, default_value_t = LastBlock::Genie)]
        last_block: LastBlock,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the feedback scheme on the eta-bit channel family and report
    /// (errors, empirical rate).
    Ex2Sim {
        #[arg(long)]
        eta: usize,
        /// Number of channel uses.
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Output-law comparison bounds for the first-word description map on
    /// the eta-bit channel family.
    Duality {
        #[arg(long)]
        eta: usize,
        #[arg(long, default_value_t = 0.25)]
        delta: f64,
        /// Also compute each strategy's exact divergence (needs a dense
        /// output sweep; eta <= 6).
        #[arg(long)]
        exact: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Work with the built-in example constructions.
    Examples {
        #[command(subcommand)]
        action: ExamplesCmd,
    },
    /// Recompute the claim table; exit 3 if any row fails.
    Repro {
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum ExamplesCmd {
    /// Print a built-in spec document (channel JSON, or a block-Markov
    /// spec for `bm`).
    Export {
        /// Which construction: 1, 2, 3, or bm (the reference block-Markov
        /// spec over the eta-bit channel).
        #[arg(long)]
        which: String,
        /// Payload width for `2` and `bm`.
        #[arg(long)]
        eta: Option<usize>,
        /// Write to a file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Copy, Clone, ValueEnum)]
enum Mode {
    /// Neither side sees the state.
    NoCsi,
    /// Encoder observes the full state causally.
    Shannon,
    /// Best symbol-by-symbol description to the encoder.
    Sbs,
    /// Message-cognizant observer: help may depend on the message.
    Mc,
    /// Decoder observes the state.
    DecoderCsi,
    /// Both sides observe the state.
    FullCsi,
}

#[derive(Copy, Clone, ValueEnum)]
enum LastBlock {
    Genie,
    Coded,
}

// ---------------------------------------------------------------------------
// Config document.

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigDoc {
    ba_tol: Option<f64>,
    ba_max_iter: Option<u64>,
    enum_cap: Option<u64>,
    t_size: Option<usize>,
    eps: Option<f64>,
    search_cap: Option<u64>,
    threads: Option<usize>,
}

fn load_env_config() -> Result<ConfigDoc> {
    match std::env::var_os("HELPERDMC_CONFIG") {
        Some(path) => {
            let text = fs::read_to_string(&path)?;
            serde_json::from_str(&text).map_err(Error::from)
        }
        None => Ok(ConfigDoc::default()),
    }
}

impl ConfigDoc {
    fn ba(&self) -> BaConfig {
        // Tighter than the library default: the reported value is the
        // certified lower bound, and at 1e-9 an exact capacity like 2.0
        // would print as 1.999999999 at nine decimals.
        BaConfig {
            tol: self.ba_tol.unwrap_or(1e-11),
            max_iter: self.ba_max_iter.unwrap_or(BaConfig::default().max_iter),
        }
    }

    fn enums(&self) -> EnumConfig {
        let d = EnumConfig::default();
        EnumConfig {
            cap: self.enum_cap.unwrap_or(d.cap),
            dedup: d.dedup,
        }
    }
}

// ---------------------------------------------------------------------------
// Output helpers.

fn bits(v: f64) -> String {
    format!("{v:.9}")
}

fn write_out(path: &Path, content: &str) -> Result<()> {
    fs::write(path, content)?;
    Ok(())
}

fn load_channel(path: &Path) -> Result<Channel> {
    let text = fs::read_to_string(path)?;
    validate_and_load(&text)
}

fn load_bm_spec(path: &Path) -> Result<BlockMarkovSpec> {
    let text = fs::read_to_string(path)?;
    let base = path.parent().map(Path::to_path_buf);
    BlockMarkovSpec::from_json_str(&text, base.as_deref())
}

fn print_capacity_report(kind: &str, rep: &CapacityReport) {
    println!("{kind} {}", bits(rep.value_bits));
    println!("  maximizer: {}", rep.argmax_object);
    println!(
        "  certified_gap: {:e}  iterations: {}",
        rep.final_gap, rep.iterations
    );
    if !rep.components.is_empty() {
        for (label, v) in &rep.components {
            println!("  component {label}: {}", bits(*v));
        }
    }
}

// ---------------------------------------------------------------------------
// Subcommand bodies. Each returns the process exit code.

fn run_validate(spec: &Path) -> Result<i32> {
    let ch = load_channel(spec)?;
    println!(
        "ok: {} inputs, {} outputs, {} states{}",
        ch.n_x(),
        ch.n_y(),
        ch.n_s(),
        match ch.t_labels() {
            Some(t) => format!(", {} description symbols", t.len()),
            None => String::new(),
        }
    );
    Ok(0)
}

fn run_capacity(
    spec: &Path,
    mode: Mode,
    t_size_flag: Option<usize>,
    out: Option<&Path>,
    cfg: &ConfigDoc,
) -> Result<i32> {
    let ch = load_channel(spec)?;
    let ba = cfg.ba();
    let enums = cfg.enums();
    let t_size = t_size_flag
        .or(cfg.t_size)
        .or_else(|| ch.t_labels().map(<[String]>::len))
        .unwrap_or(2);
    let (name, rep) = match mode {
        Mode::NoCsi => ("no-csi", no_csi_capacity(&ch, &ba)?),
        Mode::Shannon => ("shannon", shannon_causal_capacity(&ch, &ba, &enums)?),
        Mode::Sbs => {
            let (h, rep) = best_sbs_helper(&ch, t_size, &ba, &enums)?;
            println!("best_helper {}", h.describe());
            ("sbs", rep)
        }
        Mode::Mc => ("mc", mc_capacity(&ch, t_size, &ba, &enums)?),
        Mode::DecoderCsi => ("decoder-csi", decoder_csi_capacity(&ch, &ba)?),
        Mode::FullCsi => ("full-csi", full_csi_capacity(&ch, &ba)?),
    };
    print_capacity_report(name, &rep);
    if let Some(path) = out {
        let mut csv = String::from("mode,t_size,value_bits,certified_gap,iterations\n");
        csv.push_str(&format!(
            "{name},{t_size},{},{:e},{}\n",
            bits(rep.value_bits),
            rep.final_gap,
            rep.iterations
        ));
        write_out(path, &csv)?;
    }
    Ok(0)
}

fn run_help_to_both(
    spec: &Path,
    helper: &str,
    out: Option<&Path>,
    cfg: &ConfigDoc,
) -> Result<i32> {
    let ch = load_channel(spec)?;
    let h = HelperMap::parse(helper, cfg.t_size)?;
    if h.n_s() != ch.n_s() {
        return Err(Error::Validation(format!(
            "description map covers {} states but the channel has {}",
            h.n_s(),
            ch.n_s()
        )));
    }
    let rep = helper_to_both_capacity(&ch, &h, &cfg.ba())?;
    print_capacity_report("help-to-both", &rep);
    if let Some(path) = out {
        let mut csv = String::from("helper,description,value_bits\n");
        for (label, v) in &rep.components {
            csv.push_str(&format!("{},{label},{}\n", h.describe(), bits(*v)));
        }
        csv.push_str(&format!("{},total,{}\n", h.describe(), bits(rep.value_bits)));
        write_out(path, &csv)?;
    }
    Ok(0)
}

fn run_bm_rate(bmspec: &Path, out: Option<&Path>) -> Result<i32> {
    let spec = load_bm_spec(bmspec)?;
    let rep = bm_rate(&spec)?;
    println!("bm_rate {}", bits(rep.rate_bits));
    println!("  I(U;Y|V,Z): {}", bits(rep.i_u_y_given_vz));
    println!("  I(U,Z;V,Y): {}", bits(rep.i_uz_vy));
    println!("  I(V;T|Y):   {}", bits(rep.i_v_t_given_y));
    if let Some(path) = out {
        let csv = format!(
            "rate_bits,i_u_y_given_vz,i_uz_vy,i_v_t_given_y\n{},{},{},{}\n",
            bits(rep.rate_bits),
            bits(rep.i_u_y_given_vz),
            bits(rep.i_uz_vy),
            bits(rep.i_v_t_given_y)
        );
        write_out(path, &csv)?;
    }
    Ok(0)
}

fn sim_csv(n: usize, seed: u64, eps: f64, lambda: usize, rep: &SimReport) -> String {
    let mut csv = String::from(
        "n,seed,lambda,eps,trials,data_blocks,no_bin_index,satellite_errors,\
         bin_decode_errors,last_block_errors,block_errors,message_errors,\
         block_error_rate,message_error_rate,effective_rate_bits_per_use,total_uses\n",
    );
    csv.push_str(&format!(
        "{n},{seed},{lambda},{eps},{},{},{},{},{},{},{},{},{},{},{},{}\n",
        rep.trials,
        rep.data_blocks,
        rep.no_bin_index,
        rep.satellite_errors,
        rep.bin_decode_errors,
        rep.last_block_errors,
        rep.block_errors,
        rep.message_errors,
        bits(rep.block_error_rate),
        bits(rep.message_error_rate),
        bits(rep.effective_rate_bits_per_use),
        rep.total_uses
    ));
    csv
}

#[allow(clippy::too_many_arguments)]
fn run_bm_sim(
    bmspec: &Path,
    n: usize,
    lambda: usize,
    eps_flag: Option<f64>,
    seed: u64,
    trials: u64,
    margin: f64,
    search_cap_flag: Option<u64>,
    last_block: LastBlock,
    out: Option<&Path>,
    cfg: &ConfigDoc,
) -> Result<i32> {
    let spec = load_bm_spec(bmspec)?;
    let rates = bm_rate_feasible_region(&spec, margin)?;
    let eps = eps_flag.or(cfg.eps).unwrap_or(0.1);
    let mut sim_cfg = SimConfig::new(n, lambda, eps, seed)?;
    if let Some(cap) = search_cap_flag.or(cfg.search_cap) {
        sim_cfg.search_cap = cap;
    }
    sim_cfg.last_block_mode = match last_block {
        LastBlock::Genie => LastBlockMode::Genie,
        LastBlock::Coded => LastBlockMode::Coded,
    };
    println!(
        "rates R={} Rv={} Rtilde={}",
        bits(rates.r),
        bits(rates.r_v),
        bits(rates.r_tilde)
    );
    let rep = simulate_block_markov(&spec, &rates, &sim_cfg, trials)?;
    println!(
        "trials {}  data_blocks {}  block_errors {}  message_errors {}",
        rep.trials, rep.data_blocks, rep.block_errors, rep.message_errors
    );
    println!(
        "no_bin_index {}  satellite_errors {}  bin_decode_errors {}  last_block_errors {}",
        rep.no_bin_index, rep.satellite_errors, rep.bin_decode_errors, rep.last_block_errors
    );
    println!("block_error_rate {}", bits(rep.block_error_rate));
    println!("message_error_rate {}", bits(rep.message_error_rate));
    println!(
        "effective_rate_bits_per_use {}",
        bits(rep.effective_rate_bits_per_use)
    );
    if let Some(path) = out {
        write_out(path, &sim_csv(n, seed, eps, lambda, &rep))?;
    }
    Ok(0)
}

fn run_ex2_sim(eta: usize, n: usize, seed: u64) -> Result<i32> {
    let p = Example2Params::new(eta)?;
    let (errors, rate) = simulate_ex2_causal_scheme(p, n, seed)?;
    println!("payload_symbol_errors {errors}");
    println!("empirical_rate_bits_per_use {}", bits(rate));
    Ok(0)
}

fn run_duality(eta: usize, delta: f64, exact: bool, out: Option<&Path>) -> Result<i32> {
    let cfg = DualityConfig::new(eta, delta)?;
    let mut csv = String::from("pattern,class,exact_kl,bound\n");
    let mut worst_exact: f64 = f64::NEG_INFINITY;
    for strategy in canonical_strategies(eta)? {
        let (class, bound) = class_bound(&strategy, &cfg)?;
        let exact_field = if exact {
            let v = exact_kl_for_strategy(&strategy, &cfg)?;
            worst_exact = worst_exact.max(v);
            bits(v)
        } else {
            String::new()
        };
        csv.push_str(&format!(
            "{},{class},{exact_field},{}\n",
            strategy.describe(),
            bits(bound)
        ));
    }
    let bound = duality_upper_bound(&cfg);
    println!("duality_upper_bound {}", bits(bound));
    if exact {
        println!("max_exact_divergence {}", bits(worst_exact));
    }
    if let Some(path) = out {
        write_out(path, &csv)?;
    }
    Ok(0)
}

fn run_examples_export(which: &str, eta: Option<usize>, out: Option<&Path>) -> Result<i32> {
    let text = match which {
        "1" => build_example1().0.to_json_string(),
        "2" => {
            let p = Example2Params::new(eta.unwrap_or(2))?;
            build_example2(p)?.0.to_json_string()
        }
        "3" => build_example3().0.to_json_string(),
        "bm" => {
            let p = Example2Params::new(eta.unwrap_or(1))?;
            build_reference_bm_spec(p)?.to_json_string()
        }
        other => {
            return Err(Error::Validation(format!(
                "unknown example {other:?}; expected 1, 2, 3, or bm"
            )))
        }
    };
    match out {
        Some(path) => write_out(path, &text)?,
        None => println!("{text}"),
    }
    Ok(0)
}

fn run_repro(out: Option<&Path>) -> Result<i32> {
    let rows = repro_rows()?;
    for r in &rows {
        println!(
            "{:<40} {:<6} computed {} target {} (tol {:e})",
            r.claim_id,
            r.status.label(),
            bits(r.computed_value),
            r.paper_value,
            r.tolerance
        );
    }
    if let Some(path) = out {
        write_out(path, &rows_to_csv(&rows))?;
    }
    if all_pass(&rows) {
        println!("repro: all {} rows pass", rows.len());
        Ok(0)
    } else {
        let failed = rows
            .iter()
            .filter(|r| r.status.label() != "pass")
            .count();
        eprintln!("repro: {failed} of {} rows failed", rows.len());
        Ok(3)
    }
}

// ---------------------------------------------------------------------------

fn dispatch(cli: Cli, cfg: &ConfigDoc) -> Result<i32> {
    match cli.cmd {
        Cmd::Validate { spec } => run_validate(&spec),
        Cmd::Capacity {
            spec,
            mode,
            t_size,
            out,
        } => run_capacity(&spec, mode, t_size, out.as_deref(), cfg),
        Cmd::HelpToBoth { spec, helper, out } => {
            run_help_to_both(&spec, &helper, out.as_deref(), cfg)
        }
        Cmd::BmRate { bmspec, out } => run_bm_rate(&bmspec, out.as_deref()),
        Cmd::BmSim {
            bmspec,
            n,
            lambda,
            eps,
            seed,
            trials,
            margin,
            search_cap,
            last_block,
            out,
        } => run_bm_sim(
            &bmspec,
            n,
            lambda,
            eps,
            seed,
            trials,
            margin,
            search_cap,
            last_block,
            out.as_deref(),
            cfg,
        ),
        Cmd::Ex2Sim { eta, n, seed } => run_ex2_sim(eta, n, seed),
        Cmd::Duality {
            eta,
            delta,
            exact,
            out,
        } => run_duality(eta, delta, exact, out.as_deref()),
        Cmd::Examples { action } => match action {
            ExamplesCmd::Export { which, eta, out } => {
                run_examples_export(&which, eta, out.as_deref())
            }
        },
        Cmd::Repro { out } => run_repro(out.as_deref()),
    }
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::EnumCapExceeded { .. }
        | Error::SearchCapExceeded { .. }
        | Error::TableCapExceeded { .. }
        | Error::TooLarge(_) => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    // Die quietly when a pipe closes (e.g. `helperdmc ... | head`) instead
    // of panicking on the failed write.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    let cfg = match load_env_config() {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: HELPERDMC_CONFIG: {e}");
            return ExitCode::from(1);
        }
    };
    let threads = cli.threads.or(cfg.threads);
    let result = match threads {
        Some(k) => {
            let pool = match rayon::ThreadPoolBuilder::new().num_threads(k).build() {
                Ok(pool) => pool,
                Err(e) => {
                    eprintln!("error: thread pool: {e}");
                    return ExitCode::from(1);
                }
            };
            pool.install(|| dispatch(cli, &cfg))
        }
        None => dispatch(cli, &cfg),
    };
    match result {
        Ok(code) => ExitCode::from(u8::try_from(code).unwrap_or(1)),
        Err(e) => {
            let code = exit_code_for(&e);
            eprintln!("error: {e}");
            ExitCode::from(code)
        }
    }
}
