use std::fs;
use std::io::Read as _;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use qflag::collections::{self, Direction, WSCollection};
use qflag::dmod;
use qflag::par::Mode;
use qflag::qcluster;
use qflag::qmatrix::{verify_identity, Identity};
use qflag::seeds::{self, Seed};
use qflag::subsets::{self, nonempty_subsets};
use qflag::weyl::{self, ReducedWord};
use qflag_cli::setlit::{parse_array, parse_list, parse_set};
use qflag_cli::verify;

#[derive(Parser)]
#[command(name = "qflag", version, about = "Cluster structures on partial flag varieties, computed exactly")]
struct Cli {
    /// Human-readable output instead of compact JSON.
    #[arg(long, global = true)]
    pretty: bool,
    /// Run sweeps on one thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct Pair {
    #[arg(long)]
    n: usize,
    /// First set, e.g. `1,3` or `2..4`.
    #[arg(long)]
    i: String,
    #[arg(long)]
    j: String,
}

#[derive(Args, Clone)]
struct ExtendedSpec {
    #[arg(long)]
    n: usize,
    /// Levels `J`, an interval such as `1..4`.
    #[arg(long = "J")]
    levels: String,
    #[arg(long)]
    k: usize,
}

#[derive(Subcommand)]
enum CollectionCmd {
    /// The rectangle collection of `k`-sets.
    Rectangle {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        count: bool,
    },
    /// The extended rectangle collection for levels `J` around level `k`.
    Extended {
        #[command(flatten)]
        spec: ExtendedSpec,
        #[arg(long)]
        count: bool,
    },
    /// Reports weak separation and maximality of a collection read as JSON.
    Check {
        #[arg(long)]
        input: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Dir {
    Raise,
    Lower,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Plucker,
    Incidence,
    Quasi,
    Bar,
}

#[derive(Subcommand)]
enum Cmd {
    /// Separation report for a pair of sets.
    Sep(Pair),
    /// `dim Hom(M_I, M_J)` by formula and by linear algebra.
    Hom(Pair),
    /// Extension dimensions in both exact structures.
    Ext(Pair),
    /// The quasi-commutation exponent `c(I, J)`.
    C(Pair),
    #[command(subcommand)]
    Collection(CollectionCmd),
    /// Geometric exchange `Lac → Lbd`.
    Exchange {
        /// Collection JSON; `-` reads stdin.
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        l: String,
        #[arg(long)]
        abcd: String,
    },
    /// Raising or lowering flip `Lj ↔ Lik`.
    Flip {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        l: String,
        #[arg(long)]
        ijk: String,
        #[arg(long, value_enum)]
        dir: Dir,
    },
    /// The flip schedule from level `k` to `k − 1`, checked by running it.
    Schedule(ExtendedSpec),
    /// Shortest move sequence bringing `target` into the collection.
    Reach {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        target: String,
        #[arg(long, default_value_t = 8)]
        depth: usize,
    },
    /// The quantum seed of a collection (from `--input` or an extended rectangle).
    Seed {
        #[arg(long, conflicts_with_all = ["n", "levels", "k"])]
        input: Option<PathBuf>,
        #[arg(long, requires_all = ["levels", "k"])]
        n: Option<usize>,
        #[arg(long = "J")]
        levels: Option<String>,
        #[arg(long)]
        k: Option<usize>,
        /// Also write the quiver as DOT.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Mutates a seed along a path of vertex indices.
    Mutate {
        #[arg(long)]
        seed: PathBuf,
        /// Vertex indices, e.g. `0,2,1`.
        #[arg(long)]
        path: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Quantum cluster variables along a mutation path.
    Qmutate {
        #[arg(long)]
        seed: PathBuf,
        #[arg(long, default_value = "")]
        path: String,
    },
    /// Checks a family of identities in the quantum matrix algebra.
    Qverify {
        #[arg(value_enum)]
        family: Family,
        #[arg(long)]
        n: usize,
    },
    /// Reduced word for `w₀ w₀^K`, or analysis of a given word.
    Word {
        #[arg(long)]
        n: usize,
        #[arg(long = "K")]
        k: Option<String>,
        #[arg(long)]
        word: Option<String>,
        /// Factor off the step adding this element to `K`.
        #[arg(long)]
        factor: Option<usize>,
    },
    /// The BFZ quiver of a reduced word.
    Bfz {
        #[arg(long)]
        n: usize,
        #[arg(long = "K")]
        k: Option<String>,
        #[arg(long)]
        word: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Runs the acceptance checks.
    VerifyAll {
        /// Criteria to run, e.g. `1,7..9`.
        #[arg(long)]
        only: Option<String>,
    },
}

/// A computation that ran but did not verify.
#[derive(Debug)]
struct Failed(String);

impl std::fmt::Display for Failed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Failed {}

fn read_input(path: &PathBuf) -> Result<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &PathBuf) -> Result<T> {
    let text = read_input(path)?;
    serde_json::from_str(&text).map_err(|e| qflag::Error::Parse(e.to_string()).into())
}

fn render(v: &Value, pretty: bool) -> String {
    if !pretty {
        return v.to_string();
    }
    match v {
        Value::Object(map) => {
            let width = map.keys().map(String::len).max().unwrap_or(0);
            map.iter()
                .map(|(k, x)| format!("{k:<width$}  {}", if x.is_string() { x.as_str().unwrap().to_string() } else { x.to_string() }))
                .collect::<Vec<_>>()
                .join("\n")
        }
        _ => serde_json::to_string_pretty(v).expect("json"),
    }
}

fn extended(spec: &ExtendedSpec) -> Result<WSCollection> {
    Ok(collections::extended_rectangle(spec.n, &parse_list(&spec.levels)?, spec.k)?)
}

fn word_of(n: usize, k: &Option<String>, word: &Option<String>) -> Result<ReducedWord> {
    match (k, word) {
        (_, Some(w)) => Ok(ReducedWord::parse(n, w)?),
        (Some(k), None) => Ok(weyl::word_w0_mod_k(n, &parse_set(n, k)?)?),
        (None, None) => Ok(weyl::word_w0_mod_k(n, &qflag::KSet::empty(n))?),
    }
}

fn write_out(path: &Option<PathBuf>, text: &str) -> Result<()> {
    if let Some(p) = path {
        fs::write(p, text).with_context(|| format!("writing {}", p.display()))?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<Value> {
    let mode = if cli.sequential { Mode::Sequential } else { Mode::Parallel };
    Ok(match cli.cmd {
        Cmd::Sep(p) => {
            let (i, j) = (parse_set(p.n, &p.i)?, parse_set(p.n, &p.j)?);
            let weak = subsets::weakly_separated(&i, &j);
            json!({
                "weak": weak,
                "strong": subsets::strongly_separated(&i, &j),
                "ext_E": subsets::dim_ext_e(&i, &j)?,
                "ext_D": [subsets::dim_ext_d(&i, &j)?, subsets::dim_ext_d(&j, &i)?],
                "c": if weak { Some(subsets::c_exponent(&i, &j)?) } else { None },
                "d": subsets::d_exponent(&i, &j),
            })
        }
        Cmd::Hom(p) => {
            let (i, j) = (parse_set(p.n, &p.i)?, parse_set(p.n, &p.j)?);
            let formula = subsets::dim_hom(&i, &j)?;
            let computed = dmod::dim_hom(&dmod::build_rank_one(p.n, &i)?, &dmod::build_rank_one(p.n, &j)?)?;
            if formula != computed {
                return Err(Failed(format!("formula {formula} but modules give {computed}")).into());
            }
            json!({ "hom": formula, "formula": formula, "modules": computed })
        }
        Cmd::Ext(p) => {
            let (i, j) = (parse_set(p.n, &p.i)?, parse_set(p.n, &p.j)?);
            json!({
                "ext_E": subsets::dim_ext_e(&i, &j)?,
                "ext_D_ij": subsets::dim_ext_d(&i, &j)?,
                "ext_D_ji": subsets::dim_ext_d(&j, &i)?,
            })
        }
        Cmd::C(p) => {
            let (i, j) = (parse_set(p.n, &p.i)?, parse_set(p.n, &p.j)?);
            json!({ "c": subsets::c_exponent(&i, &j)? })
        }
        Cmd::Collection(c) => match c {
            CollectionCmd::Rectangle { n, k, count } => {
                let c = collections::rectangle(n, k)?;
                if count { json!(c.len()) } else { serde_json::to_value(&c)? }
            }
            CollectionCmd::Extended { spec, count } => {
                let c = extended(&spec)?;
                if count { json!(c.len()) } else { serde_json::to_value(&c)? }
            }
            CollectionCmd::Check { input } => {
                let c: WSCollection = read_json(&input)?;
                json!({
                    "size": c.len(),
                    "weakly_separated": c.is_pairwise_ws(),
                    "maximal": collections::is_maximal(&c),
                })
            }
        },
        Cmd::Exchange { input, l, abcd } => {
            let c: WSCollection = read_json(&input)?;
            serde_json::to_value(collections::geometric_exchange(&c, &parse_set(c.n(), &l)?, parse_array(&abcd)?)?)?
        }
        Cmd::Flip { input, l, ijk, dir } => {
            let c: WSCollection = read_json(&input)?;
            let dir = match dir {
                Dir::Raise => Direction::Raise,
                Dir::Lower => Direction::Lower,
            };
            serde_json::to_value(collections::flip(&c, &parse_set(c.n(), &l)?, parse_array(&ijk)?, dir)?)?
        }
        Cmd::Schedule(spec) => {
            let levels = parse_list(&spec.levels)?;
            let steps = collections::flip_schedule(spec.n, &levels, spec.k)?;
            let start = extended(&spec)?;
            let path = collections::run_schedule(&start, &steps)?;
            let target = collections::extended_rectangle(spec.n, &levels, spec.k - 1)?;
            if path.last() != Some(&target) {
                return Err(Failed("schedule does not end at the lower extended rectangle".into()).into());
            }
            json!({ "steps": steps, "reaches_target": true })
        }
        Cmd::Reach { input, target, depth } => {
            let c: WSCollection = read_json(&input)?;
            let t = parse_set(c.n(), &target)?;
            match collections::reach(&c, &t, depth, mode) {
                Some(moves) => json!({ "moves": moves }),
                None => return Err(Failed(format!("{t} not reached within {depth} moves")).into()),
            }
        }
        Cmd::Seed { input, n, levels, k, out } => {
            let c = match (input, n, levels, k) {
                (Some(p), ..) => read_json(&p)?,
                (None, Some(n), Some(levels), Some(k)) => extended(&ExtendedSpec { n, levels, k })?,
                _ => bail!(qflag::Error::Precondition("give --input or --n/--J/--k".into())),
            };
            let seed = seeds::seed_from_collection(&c, mode)?;
            write_out(&out, &seeds::export_dot(&seed))?;
            serde_json::to_value(&seed)?
        }
        Cmd::Mutate { seed, path, out } => {
            let mut s: Seed = read_json(&seed)?;
            for k in parse_list(&path)? {
                s = seeds::mutate(&s, k)?;
            }
            write_out(&out, &seeds::export_dot(&s))?;
            serde_json::to_value(&s)?
        }
        Cmd::Qmutate { seed, path } => {
            let s: Seed = read_json(&seed)?;
            let st = qcluster::replay(s, &parse_list(&path)?)?;
            let vars: Vec<Value> = st
                .vars
                .iter()
                .zip(&st.seed.labels)
                .map(|(v, l)| json!({ "label": l, "terms": v.to_json(), "text": v.to_string() }))
                .collect();
            json!({ "seed": st.seed, "variables": vars })
        }
        Cmd::Qverify { family, n } => {
            let ids: Vec<Identity> = match family {
                Family::Plucker | Family::Incidence => verify::plucker_instances(n)
                    .into_iter()
                    .filter(|id| matches!((family, id), (Family::Plucker, Identity::Plucker { .. }) | (Family::Incidence, Identity::Incidence { .. })))
                    .collect(),
                Family::Quasi => pairs_ws(n)?
                    .into_iter()
                    .map(|(i, j, m)| Identity::QuasiComm { i, j, m })
                    .collect(),
                Family::Bar => pairs_ws(n)?.into_iter().map(|(i, j, _)| Identity::BarProd { i, j }).collect(),
            };
            let mut failed = Vec::new();
            for id in &ids {
                if !verify_identity(id)? {
                    failed.push(format!("{id:?}"));
                }
            }
            if !failed.is_empty() {
                return Err(Failed(format!("{} of {} identities fail: {}", failed.len(), ids.len(), failed[0])).into());
            }
            json!({ "checked": ids.len(), "failed": 0 })
        }
        Cmd::Word { n, k, word, factor } => {
            if let Some(j) = factor {
                let kset = parse_set(n, k.as_deref().unwrap_or(""))?;
                let w = weyl::factor_step(n, &kset, j)?;
                json!({ "word": w.letters(), "length": w.len() })
            } else {
                let w = word_of(n, &k, &word)?;
                let reduced = w.is_reduced();
                let mut v = json!({ "word": w.letters(), "length": w.len(), "reduced": reduced });
                if reduced {
                    v["betas"] = json!(weyl::beta_roots(&w));
                    v["simple_top"] = json!(weyl::check_simple_top(&w)?);
                }
                v
            }
        }
        Cmd::Bfz { n, k, word, out } => {
            let w = word_of(n, &k, &word)?;
            let q = weyl::bfz_quiver(&w)?;
            write_out(&out, &q.to_dot())?;
            serde_json::to_value(&q)?
        }
        Cmd::VerifyAll { only } => {
            let ids = match only {
                Some(s) => parse_list(&s)?,
                None => (1..=verify::TITLES.len()).collect(),
            };
            let outcomes: Vec<verify::Outcome> = ids.iter().map(|&id| verify::run(id, mode)).collect();
            for o in &outcomes {
                eprintln!("{}", o.line());
            }
            let failed = outcomes.iter().filter(|o| !o.passed).count();
            if failed > 0 {
                println!("{}", render(&serde_json::to_value(&outcomes)?, cli.pretty));
                return Err(Failed(format!("{failed} of {} criteria failed", outcomes.len())).into());
            }
            serde_json::to_value(&outcomes)?
        }
    })
}

fn pairs_ws(n: usize) -> Result<Vec<(qflag::KSet, qflag::KSet, i64)>> {
    let sets = nonempty_subsets(n);
    let mut out = Vec::new();
    for i in &sets {
        for j in &sets {
            if subsets::weakly_separated(i, j) {
                out.push((i.clone(), j.clone(), subsets::c_exponent(i, j)?));
            }
        }
    }
    Ok(out)
}

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<Failed>().is_some() {
        return 1;
    }
    match err.downcast_ref::<qflag::Error>() {
        Some(qflag::Error::Consistency(_) | qflag::Error::InexactDivision(_)) => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let pretty = cli.pretty;
    match run(cli) {
        Ok(v) => {
            println!("{}", render(&v, pretty));
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
