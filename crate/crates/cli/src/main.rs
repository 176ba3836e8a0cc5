//! `lcs`: dimension tables, claim verification and cache management.
//!
//! Exit codes: 0 success or PASS, 1 FAIL, 2 usage error, 3 resource or I/O
//! failure.

use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use lcs_core::algebra::{Grading, Signature};
use lcs_core::cache::DiskCache;
use lcs_core::claims::{self, VerifyOptions};
use lcs_core::lcs::{Engine, Ideal, Quotient, QuotientDims};
use lcs_core::Error;
use serde_json::json;

const DEFAULT_CACHE_DIR: &str = ".lcs-cache";

#[derive(Parser)]
#[command(name = "lcs", version, about = "Lower central series workbench for free and symplectic algebras")]
struct Cli {
    /// Span cache directory; defaults to $LCS_CACHE_DIR.
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Cmd {
    /// Graded dimensions of a quotient of the lower central series.
    Dims {
        /// Bk, Nk, B1bar or AmodMk.
        #[arg(long)]
        quotient: String,
        #[arg(long)]
        n: usize,
        /// Work modulo the ideal generated by omega.
        #[arg(long)]
        omega: bool,
        #[arg(long, default_value_t = 6)]
        max_degree: usize,
        #[arg(long, default_value_t = 0)]
        min_degree: usize,
        /// One row per weight slice instead of per degree.
        #[arg(long)]
        per_slice: bool,
        /// Slice by degree only.
        #[arg(long)]
        no_weights: bool,
        /// Refuse slices with more words than this.
        #[arg(long)]
        max_slice_dim: Option<usize>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Run a registered claim.
    Verify {
        /// Claim id, or "all".
        claim: Option<String>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        max_degree: Option<usize>,
        /// Include the 2n = 6 cases.
        #[arg(long)]
        big: bool,
        /// List the registered claims.
        #[arg(long)]
        list: bool,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Inspect or fill the span cache.
    Cache {
        #[command(subcommand)]
        action: CacheAction,
    },
}

#[derive(Subcommand)]
enum CacheAction {
    /// List cached spans.
    Status {
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Delete every cached span.
    Clear,
    /// Compute and store the spans behind a dimension table.
    Warm {
        #[arg(long, default_value = "B2")]
        quotient: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        omega: bool,
        #[arg(long, default_value_t = 5)]
        max_degree: usize,
    },
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Input(_) | Error::Parse(_) => 2,
        Error::Resource(_) | Error::Io(_) => 3,
        _ => 1,
    }
}

fn cache_dir(cli_dir: &Option<PathBuf>) -> Option<PathBuf> {
    cli_dir.clone().or_else(|| std::env::var_os(lcs_core::cache::CACHE_DIR_ENV).map(PathBuf::from))
}

fn open_cache(dir: Option<PathBuf>) -> Result<Option<DiskCache>, Error> {
    dir.map(DiskCache::open).transpose()
}

fn engine(n: usize, weights: bool, cache: Option<DiskCache>, max_slice: Option<usize>) -> Engine {
    let mut e = if weights { Engine::symplectic(n) } else { Engine::new(Signature::free(2 * n), Grading::Degree) };
    if let Some(c) = cache {
        e = e.with_disk_cache(c);
    }
    if let Some(m) = max_slice {
        e = e.with_max_slice_dim(m);
    }
    e
}

fn render_dims(table: &QuotientDims, predicted: &[Option<u64>], per_slice: bool, format: Format) -> String {
    match format {
        Format::Json => {
            let mut v = serde_json::to_value(table).expect("plain data serializes");
            if !per_slice {
                v["predicted"] = json!(predicted);
            }
            serde_json::to_string_pretty(&v).expect("plain data serializes")
        }
        Format::Csv if per_slice => table.to_csv(),
        Format::Csv => {
            let mut s = String::from("k,degree,dim,predicted\n");
            for (r, p) in table.rows.iter().zip(predicted) {
                let p = p.map(|p| p.to_string()).unwrap_or_default();
                s.push_str(&format!("{},{},{},{p}\n", table.k, r.degree, r.dim));
            }
            s
        }
        Format::Text => {
            let ideal = table.ideal.as_deref().map(|i| format!(" modulo {i}")).unwrap_or_default();
            let mut s = format!("{}{ideal}\n", table.quotient);
            for (i, r) in table.rows.iter().enumerate() {
                match (&r.weight, predicted.get(i).copied().flatten()) {
                    (Some(w), _) => s.push_str(&format!("  d={:<3} weight={w:?} dim={}\n", r.degree, r.dim)),
                    (None, Some(p)) => s.push_str(&format!("  d={:<3} dim={:<8} predicted={p}\n", r.degree, r.dim)),
                    (None, None) => s.push_str(&format!("  d={:<3} dim={}\n", r.degree, r.dim)),
                }
            }
            s
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_dims(
    cache: Option<DiskCache>,
    quotient: &str,
    n: usize,
    omega: bool,
    lo: usize,
    hi: usize,
    per_slice: bool,
    weights: bool,
    max_slice: Option<usize>,
    format: Format,
) -> Result<u8, Error> {
    if n == 0 || lo > hi {
        return Err(Error::Input("need n >= 1 and min-degree <= max-degree".into()));
    }
    let q: Quotient = quotient.parse()?;
    let e = engine(n, weights, cache, max_slice);
    let ideal = if omega { Some(Arc::new(Ideal::omega(n)?)) } else { None };
    let table = e.dims(q, lo, hi, ideal.as_ref(), per_slice)?;
    let predicted = if per_slice {
        Vec::new()
    } else {
        (lo..=hi).map(|d| claims::prediction(q, n, omega, d)).collect::<Result<_, _>>()?
    };
    print!("{}", render_dims(&table, &predicted, per_slice, format));
    Ok(0)
}

fn cmd_verify(opts: VerifyOptions, claim: Option<String>, list: bool, format: Format) -> Result<u8, Error> {
    if list {
        for c in claims::registry() {
            println!("{:<24} {}", c.id, c.summary);
        }
        return Ok(0);
    }
    let Some(claim) = claim else {
        return Err(Error::Input("missing claim id (see --list)".into()));
    };
    let ids: Vec<&str> = if claim == "all" { claims::registry().iter().map(|c| c.id).collect() } else { vec![claim.as_str()] };
    let mut all_pass = true;
    let mut reports = Vec::new();
    for id in ids {
        let r = claims::run_claim(id, &opts)?;
        all_pass &= r.pass;
        match format {
            Format::Text => print!("{}", r.to_text()),
            Format::Csv => {
                if reports.is_empty() {
                    println!("claim,check,expected,got,pass");
                }
                for c in &r.checks {
                    println!("{},\"{}\",\"{}\",\"{}\",{}", r.claim, c.name, c.expected.to_string().replace('"', "'"), c.got.to_string().replace('"', "'"), c.pass);
                }
            }
            Format::Json => {}
        }
        reports.push(r);
    }
    if let Format::Json = format {
        if reports.len() == 1 {
            println!("{}", reports[0].to_json());
        } else {
            println!("{}", serde_json::to_string_pretty(&reports)?);
        }
    }
    Ok(if all_pass { 0 } else { 1 })
}

fn cmd_cache(dir: PathBuf, action: CacheAction) -> Result<u8, Error> {
    let cache = DiskCache::open(&dir)?;
    match action {
        CacheAction::Status { format } => {
            let entries = cache.entries()?;
            match format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&json!({"dir": dir, "entries": entries}))?),
                Format::Csv => {
                    println!("tag,slice,rank,hash");
                    for e in &entries {
                        let slice: Vec<String> = e.slice.iter().map(|x| x.to_string()).collect();
                        println!("{},{},{},{}", e.tag, slice.join(" "), e.rank, e.hash);
                    }
                }
                Format::Text => {
                    println!("{} entries in {}", entries.len(), dir.display());
                    for e in &entries {
                        println!("  {:<16} slice={:?} rank={} {}", e.tag, e.slice, e.rank, &e.hash[..12.min(e.hash.len())]);
                    }
                }
            }
        }
        CacheAction::Clear => println!("removed {} entries from {}", cache.clear()?, dir.display()),
        CacheAction::Warm { quotient, n, omega, max_degree } => {
            let q: Quotient = quotient.parse()?;
            let e = engine(n, true, Some(cache), None);
            let ideal = if omega { Some(Arc::new(Ideal::omega(n)?)) } else { None };
            e.dims(q, 0, max_degree, ideal.as_ref(), false)?;
            let st = e.cache_stats();
            let total = st.hits + st.misses;
            let pct = if total == 0 { 100.0 } else { 100.0 * st.hits as f64 / total as f64 };
            println!("warmed {q} for n={n} up to degree {max_degree}: {} hits, {} misses ({pct:.0}% hits)", st.hits, st.misses);
        }
    }
    Ok(0)
}

fn run(cli: Cli) -> Result<u8, Error> {
    let dir = cache_dir(&cli.cache_dir);
    match cli.cmd {
        Cmd::Dims { quotient, n, omega, max_degree, min_degree, per_slice, no_weights, max_slice_dim, format } => {
            cmd_dims(open_cache(dir)?, &quotient, n, omega, min_degree, max_degree, per_slice, !no_weights, max_slice_dim, format)
        }
        Cmd::Verify { claim, n, max_degree, big, list, format } => {
            let opts = VerifyOptions { n, max_degree, big, cache: open_cache(dir)? };
            cmd_verify(opts, claim, list, format)
        }
        Cmd::Cache { action } => cmd_cache(dir.unwrap_or_else(|| PathBuf::from(DEFAULT_CACHE_DIR)), action),
    }
}

fn main() -> ExitCode {
    // `lcs verify all | head` should stop quietly, not dump a backtrace
    let default_hook = std::panic::take_hook();
    std::panic::set_hook(Box::new(move |info| {
        let msg = info.payload().downcast_ref::<String>().map(String::as_str).unwrap_or("");
        if msg.contains("Broken pipe") {
            std::process::exit(0);
        }
        default_hook(info)
    }));
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
