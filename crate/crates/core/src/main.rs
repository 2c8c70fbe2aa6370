//! Command-line surface: enumeration, graph construction with caching,
//! clique censuses, recovery runs, verification suites, and the packaged
//! counterexamples. Every command emits a JSON report (or text derived
//! from the same JSON value) and exits 0 on success, 2 on refusal, 3 on a
//! verification failure, 4 on a resource abort.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use grassmann_codes::cache;
use grassmann_codes::counterexamples::run_example;
use grassmann_codes::error::Error;
use grassmann_codes::field::Field;
use grassmann_codes::grassmann::{
    classify_maximal_cliques, degenerate_set_index, verify_clique_intersections,
    verify_star_proposition, verify_top_bounds, GraphKind, GrassmannGraph,
};
use grassmann_codes::n4dual::{delta_s_prime_census, StarRouteCensus};
use grassmann_codes::recovery::{
    self, families_from_census, recover_and_verify, RecoverOptions, Route, SpecialSetMode,
};
use grassmann_codes::report::{
    render_text, CensusJson, CheckLine, EnumerationJson, IndexJson, InstanceJson, LemmaFJson,
    LemmaPairJson, StarPropJson, TopBoundsJson, ARTIFACT_VERSION,
};
use grassmann_codes::subspace::{enumerate_subspaces, Ambient};
use grassmann_codes::Caps;

#[derive(Parser)]
#[command(
    name = "grassmann-codes",
    version = ARTIFACT_VERSION,
    about = "Exact Grassmann-graph and non-degenerate-code toolkit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Worker threads (0 = library default). Output is identical for any
    /// value.
    #[arg(long, default_value_t = 0)]
    threads: usize,
    /// Subspace enumeration cap.
    #[arg(long, default_value_t = 2_000_000)]
    subspace_cap: u64,
    /// Maximal-clique enumeration limit.
    #[arg(long, default_value_t = 1_000_000)]
    clique_limit: usize,
    /// Cache directory (falls back to GRASSMANN_CODES_CACHE_DIR, then
    /// ./.grassmann-codes-cache).
    #[arg(long)]
    cache_dir: Option<PathBuf>,
    /// Include wall-clock timing in reports. Opt-in because it breaks
    /// byte-identical output across runs.
    #[arg(long, default_value_t = false)]
    timing: bool,
}

impl Common {
    fn caps(&self) -> Caps {
        Caps {
            subspace_cap: self.subspace_cap,
            clique_limit: self.clique_limit,
        }
    }

    fn cache_dir(&self) -> PathBuf {
        self.cache_dir
            .clone()
            .or_else(|| std::env::var_os(cache::CACHE_DIR_ENV).map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from(".grassmann-codes-cache"))
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Gamma,
    Delta,
}

#[derive(Clone, Copy, ValueEnum)]
enum RouteArg {
    Auto,
    Stars,
    Tops,
    N4,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Auto,
    Blind,
    Assisted,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Props,
    Lemmas,
    Examples,
    Index,
}

#[derive(Subcommand)]
enum Command {
    /// List all d-dimensional subspaces of F_q^n.
    Enumerate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        d: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Build the Grassmann graph or its non-degenerate subgraph and
    /// persist it to the cache directory.
    Graph {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        q: u64,
        #[arg(long, value_enum, default_value_t = KindArg::Gamma)]
        kind: KindArg,
        #[command(flatten)]
        common: Common,
    },
    /// Classify every maximal clique of the non-degenerate graph.
    Cliques {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        q: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Recover the Grassmann graph from the non-degenerate subgraph and
    /// verify the reconstruction exactly.
    Recover {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        q: u64,
        #[arg(long, value_enum, default_value_t = RouteArg::Auto)]
        route: RouteArg,
        #[arg(long, value_enum, default_value_t = ModeArg::Auto)]
        mode: ModeArg,
        /// Run diagnostics even when q <= n-k (nothing is asserted).
        #[arg(long, default_value_t = false)]
        exploratory: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Run a verification suite (props | lemmas | examples | index).
    Verify {
        #[arg(long, value_enum)]
        suite: SuiteArg,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        q: u64,
        /// Example number for the examples suite.
        #[arg(long)]
        which: Option<u8>,
        #[arg(long, default_value_t = false)]
        sweep_completions: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Reproduce one of the packaged counterexamples.
    Counterexample {
        #[arg(long)]
        which: u8,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        q: u64,
        #[arg(long, default_value_t = false)]
        sweep_completions: bool,
        #[command(flatten)]
        common: Common,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn emit<T: Serialize>(common: &Common, report: &T, passed: bool) -> Result<ExitCode, Error> {
    let value = serde_json::to_value(report)?;
    match common.format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&value)?),
        Format::Text => print!("{}", render_text(&value)),
    }
    Ok(if passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(3)
    })
}

fn setup_threads(common: &Common) {
    if common.threads > 0 {
        // the global pool can only be configured once; later calls no-op
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(common.threads)
            .build_global();
    }
}

fn dispatch(command: Command) -> Result<ExitCode, Error> {
    match command {
        Command::Enumerate { n, q, d, common } => {
            setup_threads(&common);
            let field = Field::new(q)?;
            let bases = enumerate_subspaces(&field, n, d, common.caps().subspace_cap)?;
            let report = EnumerationJson {
                n,
                q,
                d,
                count: bases.len(),
                bases: bases.iter().map(|b| b.text()).collect(),
            };
            emit(&common, &report, true)
        }
        Command::Graph {
            n,
            k,
            q,
            kind,
            common,
        } => {
            setup_threads(&common);
            let ambient = Ambient::new(n, k, q)?;
            let kind = match kind {
                KindArg::Gamma => GraphKind::Full,
                KindArg::Delta => GraphKind::NonDegenerate,
            };
            let dir = common.cache_dir();
            let (g, cached) = match cache::load_graph(&dir, &ambient, kind)? {
                Some(g) => (g, true),
                None => (
                    GrassmannGraph::build(&ambient, kind, &common.caps())?,
                    false,
                ),
            };
            let path = cache::save_graph(&dir, &g)?;
            #[derive(Serialize)]
            struct GraphSummary {
                instance: InstanceJson,
                kind: String,
                vertices: usize,
                edges: usize,
                loaded_from_cache: bool,
                path: String,
            }
            let report = GraphSummary {
                instance: InstanceJson::new(n, k, q),
                kind: match kind {
                    GraphKind::Full => "gamma".into(),
                    GraphKind::NonDegenerate => "delta".into(),
                },
                vertices: g.graph.vertex_count(),
                edges: g.graph.edge_count(),
                loaded_from_cache: cached,
                path: path.display().to_string(),
            };
            emit(&common, &report, true)
        }
        Command::Cliques { n, k, q, common } => {
            setup_threads(&common);
            let ambient = Ambient::new(n, k, q)?;
            let delta =
                GrassmannGraph::build(&ambient, GraphKind::NonDegenerate, &common.caps())?;
            let census = classify_maximal_cliques(&delta, &common.caps())?;
            let report = CensusJson::from_census(InstanceJson::new(n, k, q), &census);
            emit(&common, &report, true)
        }
        Command::Recover {
            n,
            k,
            q,
            route,
            mode,
            exploratory,
            common,
        } => {
            setup_threads(&common);
            let ambient = Ambient::new(n, k, q)?;
            let opts = RecoverOptions {
                route: match route {
                    RouteArg::Auto => Route::Auto,
                    RouteArg::Stars => Route::Stars,
                    RouteArg::Tops => Route::Tops,
                    RouteArg::N4 => Route::N4,
                },
                mode: match mode {
                    ModeArg::Auto => SpecialSetMode::Auto,
                    ModeArg::Blind => SpecialSetMode::Blind,
                    ModeArg::Assisted => SpecialSetMode::Assisted,
                },
                exploratory,
                caps: common.caps(),
                timing: common.timing,
            };
            let verdict = recover_and_verify(&ambient, &opts)?;
            let passed = verdict.all_ok() || !verdict.asserted;
            emit(&common, &verdict, passed)
        }
        Command::Verify {
            suite,
            n,
            k,
            q,
            which,
            sweep_completions,
            common,
        } => {
            setup_threads(&common);
            let ambient = Ambient::new(n, k, q)?;
            match suite {
                SuiteArg::Props => run_props_suite(&ambient, &common),
                SuiteArg::Lemmas => run_lemmas_suite(&ambient, &common),
                SuiteArg::Examples => {
                    let which = which.ok_or_else(|| {
                        Error::InvalidInput("examples suite needs --which".into())
                    })?;
                    let report =
                        run_example(&ambient, which, sweep_completions, &common.caps())?;
                    let passed = report.all_ok();
                    emit(&common, &report, passed)
                }
                SuiteArg::Index => run_index_suite(&ambient, &common),
            }
        }
        Command::Counterexample {
            which,
            n,
            k,
            q,
            sweep_completions,
            common,
        } => {
            setup_threads(&common);
            let ambient = Ambient::new(n, k, q)?;
            let report = run_example(&ambient, which, sweep_completions, &common.caps())?;
            let passed = report.all_ok();
            emit(&common, &report, passed)
        }
    }
}

fn run_props_suite(ambient: &Ambient, common: &Common) -> Result<ExitCode, Error> {
    let caps = common.caps();
    let delta = GrassmannGraph::build(ambient, GraphKind::NonDegenerate, &caps)?;
    let stars = verify_star_proposition(&delta, &caps)?;
    let tops = verify_top_bounds(&delta, &caps)?;
    let census = classify_maximal_cliques(&delta, &caps)?;
    let intersections = verify_clique_intersections(&delta, &census)?;
    let star_route = if (ambient.n(), ambient.k()) == (4, 2) && ambient.q() >= 3 {
        Some(delta_s_prime_census(ambient, &caps)?)
    } else {
        None
    };

    #[derive(Serialize)]
    struct PropsReport {
        instance: InstanceJson,
        star_proposition: StarPropJson,
        top_bounds: TopBoundsJson,
        census_total: usize,
        census_maximal_stars: usize,
        census_non_maximal_stars: usize,
        census_tops: usize,
        labelings_agree: bool,
        same_type_intersections_ok: bool,
        #[serde(skip_serializing_if = "Option::is_none")]
        star_route_census: Option<StarRouteCensus>,
    }
    let passed = stars.ok() && tops.bounds_ok && intersections.is_empty();
    let report = PropsReport {
        instance: InstanceJson::new(ambient.n(), ambient.k(), u64::from(ambient.q())),
        star_proposition: StarPropJson::from_report(&stars),
        top_bounds: TopBoundsJson::from_report(&tops),
        census_total: census.total(),
        census_maximal_stars: census.maximal_stars,
        census_non_maximal_stars: census.non_maximal_stars,
        census_tops: census.tops,
        labelings_agree: true,
        same_type_intersections_ok: intersections.is_empty(),
        star_route_census: star_route,
    };
    emit(common, &report, passed)
}

fn run_lemmas_suite(ambient: &Ambient, common: &Common) -> Result<ExitCode, Error> {
    let caps = common.caps();
    let (n, k, q) = (ambient.n(), ambient.k(), ambient.q() as usize);
    let asserted = q > n - k;
    let delta = GrassmannGraph::build(ambient, GraphKind::NonDegenerate, &caps)?;
    let census = classify_maximal_cliques(&delta, &caps)?;
    let (star_family, top_family) = families_from_census(&census);
    let lemma_f = recovery::verify_lemma_f(ambient, &caps)?;
    let lemma_s = recovery::verify_lemma_s(&delta, &star_family)?;
    let lemma_t = recovery::verify_lemma_t(&delta, &top_family)?;

    #[derive(Serialize)]
    struct LemmasReport {
        instance: InstanceJson,
        asserted: bool,
        lemma_f: LemmaFJson,
        lemma_s: LemmaPairJson,
        lemma_t: LemmaPairJson,
    }
    let all_hold = lemma_f.holds() && lemma_s.holds() && lemma_t.holds();
    let report = LemmasReport {
        instance: InstanceJson::new(n, k, q as u64),
        asserted,
        lemma_f: LemmaFJson::from_report(&lemma_f),
        lemma_s: LemmaPairJson::from_report(&lemma_s),
        lemma_t: LemmaPairJson::from_report(&lemma_t),
    };
    emit(common, &report, all_hold || !asserted)
}

fn run_index_suite(ambient: &Ambient, common: &Common) -> Result<ExitCode, Error> {
    let caps = common.caps();
    let gamma = GrassmannGraph::build(ambient, GraphKind::Full, &caps)?;
    let index = degenerate_set_index(&gamma, &caps)?;
    let (n, k, q) = (ambient.n(), ambient.k(), ambient.q() as usize);
    let mut checks = Vec::new();
    let mut passed = true;
    // at q = n-k+1 the index of the degenerate set equals q
    if q == n - k + 1 {
        let ok = index.lambda == q;
        checks.push(CheckLine::new(
            "lambda-equals-q",
            ok,
            format!("lambda = {}", index.lambda),
        ));
        passed &= ok;
    }

    #[derive(Serialize)]
    struct IndexSuiteReport {
        instance: InstanceJson,
        index: IndexJson,
        checks: Vec<CheckLine>,
    }
    let report = IndexSuiteReport {
        instance: InstanceJson::new(n, k, q as u64),
        index: IndexJson::from_report(&index),
        checks,
    };
    emit(common, &report, passed)
}
