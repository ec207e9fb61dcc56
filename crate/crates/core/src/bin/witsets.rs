use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};

use witsets::analysis::{
    gamma_plus_exhaustive, mean_stats, min_uniform_witness, min_witness, witness_profile, CodeClass, SearchMode,
};
use witsets::bounds::bounds_report;
use witsets::cache::{CacheEntry, CacheKey, CacheStatus};
use witsets::constructions::{
    cube_on_window, cw_code_search, from_family, sphere, steiner_3_4_8, steiner_5_6_12, two_part_sphere,
    DEFAULT_EFFORT,
};
use witsets::io::{load_cache, read_blocks, render_blocks, save_cache, to_json, CodeFile, CACHE_ENV};
use witsets::solver::{
    f_cw_exact, f_exact, large_window_evidence, monotonicity_audit, open_problem_probe, Limits, SolveStatus,
};
use witsets::{has_w_witness_property, reproduce, Code, CoordSet, Result, WitnessError};

const EXIT_PROPERTY_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(name = "witsets", version, about = "Witness sets in binary codes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check that every codeword has a witness of size at most W.
    Verify {
        #[arg(long)]
        code: PathBuf,
        #[arg(long)]
        w: usize,
        /// Look for one window that separates all codewords at once.
        #[arg(long)]
        uniform: bool,
    },
    /// Print a minimum witness for each codeword (or one of them).
    MinWitness {
        #[arg(long)]
        code: PathBuf,
        /// 0-based position of the word in the file.
        #[arg(long)]
        word: Option<usize>,
        #[arg(long)]
        greedy: bool,
    },
    /// Witness counts per codeword and codeword counts per window.
    Stats {
        #[arg(long)]
        code: PathBuf,
        #[arg(long)]
        w: usize,
        #[arg(long)]
        json: bool,
    },
    /// Build a code or a set family.
    Construct {
        #[command(subcommand)]
        kind: Construction,
        /// Write to FILE instead of standard output.
        #[arg(long, global = true)]
        out: Option<PathBuf>,
    },
    /// Every known lower and upper bound on f(n,w).
    Bounds {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        w: usize,
        #[command(flatten)]
        cache: CacheArg,
        #[arg(long)]
        json: bool,
    },
    /// Compute f(n,w), or f(n,w,k) with --k, exactly.
    Solve {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        w: usize,
        #[arg(long)]
        k: Option<usize>,
        #[command(flatten)]
        search: SearchArgs,
        #[command(flatten)]
        cache: CacheArg,
        /// Write the optimal code to FILE.
        #[arg(long)]
        certificate: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Run every reference check and print a pass/fail table.
    Reproduce {
        #[arg(long)]
        json: bool,
    },
    /// Compare f(2w,w) with the middle sphere and propagate it to longer lengths.
    Probe {
        #[arg(long)]
        w: usize,
        #[arg(long, default_value_t = 16)]
        max_n: usize,
        #[command(flatten)]
        search: SearchArgs,
        #[arg(long)]
        json: bool,
    },
    /// Test f(n,w) <= max(C(n,n/2), 2^w + C(n,w)) for w > n/2 and small n.
    Evidence {
        #[arg(long, default_value_t = 5)]
        max_n: usize,
        #[command(flatten)]
        search: SearchArgs,
        #[arg(long)]
        json: bool,
    },
    /// Check the exact values in a cache against the monotonicity theorems.
    Audit {
        #[command(flatten)]
        cache: CacheArg,
    },
    /// Maximise the mean number of witnessed codewords per window (n <= 4).
    GammaPlus {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        w: usize,
        /// Restrict to codes with the w-witness property.
        #[arg(long)]
        witness_codes: bool,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Subcommand)]
enum Construction {
    /// All words of weight K.
    Sphere {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
    },
    /// All words supported inside a window, e.g. --window 1,3,4.
    Cube {
        #[arg(long)]
        n: usize,
        #[arg(long, value_delimiter = ',')]
        window: Vec<usize>,
    },
    /// The family code of a block file.
    Family {
        #[arg(long)]
        blocks: PathBuf,
    },
    /// Blocks of S(3,4,8).
    Steiner348,
    /// Blocks of S(5,6,12).
    Steiner5612,
    /// Cube on the first W coordinates plus a sphere-based second part.
    Twopart {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        w: usize,
        #[arg(long)]
        t: usize,
    },
    /// Randomised search for a constant-weight code (blocks).
    CwSearch {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        w: usize,
        #[arg(long, default_value_t = DEFAULT_EFFORT)]
        effort: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args)]
struct CacheArg {
    /// Exact-value cache file.
    #[arg(long = "cache", env = CACHE_ENV)]
    path: Option<PathBuf>,
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long, value_name = "SECONDS")]
    time_limit: Option<f64>,
    #[arg(long)]
    node_limit: Option<u64>,
    /// Worker threads (0 = all cores).
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Disable isomorph rejection.
    #[arg(long)]
    no_rejection: bool,
}

impl SearchArgs {
    fn limits(&self) -> Result<Limits> {
        let time_limit = self
            .time_limit
            .map(|s| {
                Duration::try_from_secs_f64(s)
                    .map_err(|_| WitnessError::InvalidArgument(format!("bad time limit {s}")))
            })
            .transpose()?;
        Ok(Limits {
            time_limit,
            node_limit: self.node_limit,
            isomorph_rejection: !self.no_rejection,
            workers: self.workers,
            ..Limits::default()
        })
    }
}

fn read_code(path: &Path) -> Result<(CodeFile, Code)> {
    let file = CodeFile::read(path)?;
    let code = file.to_code()?;
    Ok((file, code))
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => Ok(fs::write(p, text)?),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn verify(path: &Path, w: usize, uniform: bool) -> Result<ExitCode> {
    let (_, code) = read_code(path)?;
    if uniform {
        let win = min_uniform_witness(&code, SearchMode::Exact);
        if win.size() <= w {
            println!("uniform window {} of size {} separates all {} words", win, win.size(), code.size());
            return Ok(ExitCode::SUCCESS);
        }
        println!("FAIL: smallest uniform window has size {} > {w}", win.size());
        return Ok(ExitCode::from(EXIT_PROPERTY_FAILED));
    }
    let verdict = has_w_witness_property(&code, w);
    if let Some(c) = verdict.first_failure() {
        println!("FAIL: {c} has no witness of size {w}");
        return Ok(ExitCode::from(EXIT_PROPERTY_FAILED));
    }
    println!("{}-witness property holds for {} words", w, code.size());
    for (c, win) in &verdict.choice {
        println!("{c} {win}");
    }
    Ok(ExitCode::SUCCESS)
}

fn min_witnesses(path: &Path, word: Option<usize>, greedy: bool) -> Result<()> {
    let (file, code) = read_code(path)?;
    let mode = if greedy { SearchMode::Greedy } else { SearchMode::Exact };
    let words = match word {
        Some(i) => vec![*file.words.get(i).ok_or_else(|| {
            WitnessError::InvalidArgument(format!("word index {i} out of range (code has {})", file.words.len()))
        })?],
        None => file.words.clone(),
    };
    for c in &words {
        let win = min_witness(&code, c, mode)?;
        println!("{c} {} {win}", win.size());
    }
    if word.is_none() && !greedy {
        println!("witness parameter {}", witness_profile(&code).parameter);
    }
    Ok(())
}

fn stats(path: &Path, w: usize, json: bool) -> Result<()> {
    let (_, code) = read_code(path)?;
    let s = mean_stats(&code, w)?;
    if json {
        print!("{}", to_json(&s)?);
        return Ok(());
    }
    println!("codewords               {}", s.code_size);
    println!("windows of size {w:<8} {}", s.window_total);
    println!("witness pairs           {}", s.pairs_by_word());
    println!("mean witnesses per word {}", s.mean_witness_count);
    println!("gamma                   {}", s.gamma);
    println!("identity holds          {}", s.identity_holds());
    Ok(())
}

fn construct(kind: &Construction, out: Option<&Path>) -> Result<()> {
    let code_text = |c: &Code| CodeFile::from_code(c).render();
    let text = match kind {
        Construction::Sphere { n, k } => code_text(&sphere(*n, *k)?),
        Construction::Cube { n, window } => code_text(&cube_on_window(*n, &CoordSet::from_coords(*n, window)?)?),
        Construction::Family { blocks } => code_text(&from_family(&read_blocks(blocks)?)?),
        Construction::Steiner348 => render_blocks(&steiner_3_4_8()),
        Construction::Steiner5612 => render_blocks(&steiner_5_6_12()),
        Construction::Twopart { n, w, t } => {
            let tp = two_part_sphere(*n, *w, *t)?;
            if tp.outside_stated_range {
                eprintln!("warning: t = {t} exceeds (n - w)/2; the code is still verified");
            }
            code_text(&tp.construction.code)
        }
        Construction::CwSearch {
            n,
            d,
            w,
            effort,
            seed,
        } => {
            let r = cw_code_search(*n, *d, *w, *effort, *seed)?;
            eprintln!("A({n},{d},{w}) >= {} after {} restarts", r.size, r.restarts);
            render_blocks(&r.family)
        }
    };
    emit(out, &text)
}

fn bounds(n: usize, w: usize, cache: &CacheArg, json: bool) -> Result<()> {
    let cache = match &cache.path {
        Some(p) => load_cache(p)?,
        None => Default::default(),
    };
    let r = bounds_report(n, w, &cache)?;
    if json {
        print!("{}", to_json(&r)?);
        return Ok(());
    }
    println!("f({n},{w})");
    for e in &r.lower {
        println!("  lower {:>24}  {}", e.value, e.source);
    }
    for e in &r.upper {
        println!("  upper {:>24}  {}", e.value, e.source);
    }
    println!("  best  [{}, {}]{}", r.best_lower, r.best_upper, if r.is_pinned() { " (exact)" } else { "" });
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn solve(
    n: usize,
    w: usize,
    k: Option<usize>,
    search: &SearchArgs,
    cache: &CacheArg,
    certificate: Option<&Path>,
    json: bool,
) -> Result<()> {
    let limits = search.limits()?;
    let r = match k {
        Some(k) => f_cw_exact(n, w, k, &limits)?,
        None => f_exact(n, w, &limits)?,
    };
    if let Some(p) = &cache.path {
        let key = match k {
            Some(k) => CacheKey::constant_weight(n, w, k),
            None => CacheKey::new(n, w),
        };
        let status = match r.status {
            SolveStatus::Exact => CacheStatus::Exact,
            SolveStatus::LowerBound => CacheStatus::LowerBound,
        };
        let mut c = witsets::cache::ExactValueCache::new();
        c.insert(key, CacheEntry::new(r.value.clone(), status, "witsets solve"))?;
        save_cache(p, &c)?;
    }
    if let Some(p) = certificate {
        fs::write(p, CodeFile::from_code(&r.certificate_code()?).render())?;
    }
    if json {
        print!("{}", to_json(&r)?);
        return Ok(());
    }
    let name = match k {
        Some(k) => format!("f({n},{w},{k})"),
        None => format!("f({n},{w})"),
    };
    let status = match r.status {
        SolveStatus::Exact => "exact",
        SolveStatus::LowerBound => "lower bound (limit reached)",
    };
    println!("{name} = {}  [{status}]", r.value);
    println!("nodes {}  elapsed {:.3}s  strategy {:?}", r.nodes, r.elapsed.as_secs_f64(), r.strategy);
    Ok(())
}

fn run_reproduce(json: bool) -> Result<ExitCode> {
    let outcomes = reproduce::run_all();
    if json {
        print!("{}", to_json(&outcomes)?);
    } else {
        for o in &outcomes {
            println!("{}", o.line());
        }
    }
    let passed = outcomes.iter().filter(|o| o.passed).count();
    if !json {
        println!("{passed}/{} passed", outcomes.len());
    }
    Ok(if passed == outcomes.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_PROPERTY_FAILED)
    })
}

fn probe(w: usize, max_n: usize, search: &SearchArgs, json: bool) -> Result<()> {
    let r = open_problem_probe(w, max_n, &search.limits()?)?;
    if json {
        print!("{}", to_json(&r)?);
        return Ok(());
    }
    let status = if r.result.is_exact() { "exact" } else { "lower bound" };
    println!("f({},{w}) = {} ({status}); C({},{w}) = {}", 2 * w, r.result.value, 2 * w, r.sphere);
    let verdict = match r.sphere_optimal {
        Some(true) => "the middle sphere is optimal",
        Some(false) => "the middle sphere is not optimal",
        None => "undecided",
    };
    println!("{verdict}");
    for row in &r.implied {
        println!(
            "  f({},{w}) in [{}, {}]{}",
            row.n,
            row.lower,
            row.upper,
            if row.pinned { " (pinned)" } else { "" }
        );
    }
    Ok(())
}

fn evidence(max_n: usize, search: &SearchArgs, json: bool) -> Result<()> {
    let rows = large_window_evidence(max_n, &search.limits()?)?;
    if json {
        print!("{}", to_json(&rows)?);
        return Ok(());
    }
    for r in rows {
        let verdict = match r.holds {
            Some(true) => "holds",
            Some(false) => "fails",
            None => "open",
        };
        let status = if r.status == SolveStatus::Exact { "=" } else { ">=" };
        println!("f({},{}) {status} {:<6} bound {:<6} {verdict}", r.n, r.w, r.value, r.bound);
    }
    Ok(())
}

fn audit(cache: &CacheArg) -> Result<ExitCode> {
    let path = cache
        .path
        .as_ref()
        .ok_or_else(|| WitnessError::InvalidArgument(format!("audit needs --cache or {CACHE_ENV}")))?;
    let report = monotonicity_audit(&load_cache(path)?);
    println!("{} exact entries, {} comparisons", report.entries, report.comparisons);
    for v in &report.violations {
        println!("VIOLATION: {v}");
    }
    Ok(if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_PROPERTY_FAILED)
    })
}

fn gamma_plus(n: usize, w: usize, witness_codes: bool, json: bool) -> Result<()> {
    let class = if witness_codes {
        CodeClass::WitnessCodes
    } else {
        CodeClass::AllCodes
    };
    let g = gamma_plus_exhaustive(n, w, class)?;
    if json {
        print!("{}", to_json(&g)?);
    } else {
        println!("gamma+({n},{w}) = {}  attained by {} words", g.value, g.argmax.size());
        print!("{}", CodeFile::from_code(&g.argmax).render());
    }
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Verify { code, w, uniform } => verify(&code, w, uniform),
        Command::MinWitness { code, word, greedy } => min_witnesses(&code, word, greedy).map(|_| ExitCode::SUCCESS),
        Command::Stats { code, w, json } => stats(&code, w, json).map(|_| ExitCode::SUCCESS),
        Command::Construct { kind, out } => construct(&kind, out.as_deref()).map(|_| ExitCode::SUCCESS),
        Command::Bounds { n, w, cache, json } => bounds(n, w, &cache, json).map(|_| ExitCode::SUCCESS),
        Command::Solve {
            n,
            w,
            k,
            search,
            cache,
            certificate,
            json,
        } => solve(n, w, k, &search, &cache, certificate.as_deref(), json).map(|_| ExitCode::SUCCESS),
        Command::Reproduce { json } => run_reproduce(json),
        Command::Probe {
            w,
            max_n,
            search,
            json,
        } => probe(w, max_n, &search, json).map(|_| ExitCode::SUCCESS),
        Command::Evidence { max_n, search, json } => evidence(max_n, &search, json).map(|_| ExitCode::SUCCESS),
        Command::Audit { cache } => audit(&cache),
        Command::GammaPlus {
            n,
            w,
            witness_codes,
            json,
        } => gamma_plus(n, w, witness_codes, json).map(|_| ExitCode::SUCCESS),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
