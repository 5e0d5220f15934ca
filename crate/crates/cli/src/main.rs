//! Command-line front end wiring the workbench modules into reproducible
//! verification runs with machine-readable output.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or bound error.

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use fusscat_core::dendriform::{
    census_by_root, dimension_check, enumerate_all_trees, normalize, parse_expr, EvalCache,
    OpLabel,
};
use fusscat_core::dias::{
    self, check_acyclic, check_local_confluence, enumerate_dias_normal,
};
use fusscat_core::ktrees::{binomial, fuss_catalan, reading_word, tree_from_word, KaryTree};
use fusscat_core::lincomb::LinComb;
use fusscat_core::mfqsym::{self, apply_op, product, verify_axioms};
use fusscat_core::relations::check_triple_markers;
use fusscat_core::series::{
    check_dias_system, check_partial_system, dias_series, fixed_point_check,
    koszul_inversion_check, SeriesCheck, TruncSeries,
};
use fusscat_core::sylvester::{class_count, m_permutations, sylvester_class};
use fusscat_core::words::{Word, WordLinComb};

const SCHEMA: &str = "fusscat/1";
const DEFAULT_CAP: u64 = 5_000_000;

#[derive(Parser)]
#[command(name = "fusscat", version, about = "Workbench for split-shuffle algebras, tree rewriting and exact series checks")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Output::Json)]
    output: Output,
    /// Cap on enumeration sizes; FUSSCAT_ENUM_CAP overrides it.
    #[arg(long, global = true, default_value_t = DEFAULT_CAP)]
    cap: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Output {
    Json,
    Text,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Algebra {
    Dendriform,
    Dias,
}

#[derive(Subcommand)]
enum Command {
    /// Normal-form censuses against the closed-form dimensions.
    Dims {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        max_n: usize,
        #[arg(long, value_enum)]
        algebra: Algebra,
        /// Also compute the rank of the evaluations (dendriform only).
        #[arg(long)]
        rank: bool,
    },
    /// Rewrite an operator expression to its normal-form combination.
    Normalize {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        expr: String,
    },
    /// The sylvester class and canonical word of an m-permutation.
    Class {
        #[arg(long)]
        word: String,
    },
    /// Product or a single split operation applied to two basis words.
    Product {
        #[arg(long)]
        m: usize,
        /// One of: prec, mid:I, succ, full.
        #[arg(long)]
        op: String,
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
    },
    /// Axioms, rewriting soundness and class closure, exhaustively.
    Verify {
        #[arg(long)]
        m: usize,
        /// Operand size bound for the exhaustive sweeps.
        #[arg(long)]
        size: usize,
        /// Extra seeded random triples checked on marker interleavings.
        #[arg(long, default_value_t = 0)]
        random_triples: usize,
        /// Operand size bound for the random triples.
        #[arg(long, default_value_t = 3)]
        random_size: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Local confluence and bounded acyclicity of the dual rewriting.
    Confluence {
        #[arg(long)]
        m: usize,
        /// Acyclicity is checked on all trees with up to this many operators.
        #[arg(long, default_value_t = 3)]
        max_ops: usize,
        /// Write the certificate JSON to this file as well.
        #[arg(long)]
        out: Option<std::path::PathBuf>,
    },
    /// Convert between trees and their reading words.
    Bijection {
        #[arg(long)]
        m: usize,
        #[arg(long, conflicts_with = "tree")]
        word: Option<String>,
        #[arg(long)]
        tree: Option<String>,
    },
    /// Exact series checks.
    Series {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        order: usize,
        #[arg(long)]
        check: SeriesKind,
    },
    /// Exhaustive sylvester class counts against Fuss-Catalan numbers.
    Classcount {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        max_n: usize,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SeriesKind {
    Fixedpoint,
    System,
    Dias,
    Koszul,
}

/// A run outcome: payload plus whether every check passed.
struct Report {
    value: Value,
    pass: bool,
}

enum RunError {
    Usage(String),
}

impl<E: std::fmt::Display> From<E> for RunError {
    fn from(e: E) -> Self {
        RunError::Usage(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cap = std::env::var("FUSSCAT_ENUM_CAP")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(cli.cap);
    match run(&cli.command, cap) {
        Ok(report) => {
            emit(&report.value, cli.output);
            if report.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(RunError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn emit(value: &Value, output: Output) {
    match output {
        Output::Json => println!("{}", serde_json::to_string_pretty(value).expect("valid json")),
        Output::Text => print_text(value, 0),
    }
}

fn print_text(value: &Value, indent: usize) {
    let pad = "  ".repeat(indent);
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                match v {
                    Value::Object(_) | Value::Array(_) => {
                        println!("{pad}{k}:");
                        print_text(v, indent + 1);
                    }
                    _ => println!("{pad}{k}: {v}"),
                }
            }
        }
        Value::Array(items) => {
            for item in items {
                match item {
                    Value::Object(_) | Value::Array(_) => {
                        println!("{pad}-");
                        print_text(item, indent + 1);
                    }
                    _ => println!("{pad}- {item}"),
                }
            }
        }
        other => println!("{pad}{other}"),
    }
}

fn lincomb_json(c: &WordLinComb) -> Value {
    Value::Array(
        c.iter()
            .map(|(w, coeff)| json!({ "word": w.to_string(), "coeff": coeff.to_string() }))
            .collect(),
    )
}

fn series_json(kind: &str, m: usize, series: Option<&TruncSeries>, check: &SeriesCheck) -> Value {
    let coefficients = series.map(|s| {
        Value::Array(
            s.coeffs()
                .iter()
                .map(|c| Value::String(c.to_string()))
                .collect(),
        )
    });
    let mut obj = json!({
        "schema": SCHEMA,
        "command": "series",
        "check": kind,
        "m": m,
        "pass": check.pass,
    });
    if let Some(coeffs) = coefficients {
        obj["coefficients"] = coeffs;
    }
    if let Some(mismatch) = &check.first_mismatch {
        obj["first_mismatch"] = json!({
            "equation": mismatch.equation,
            "coefficient": mismatch.coefficient,
            "lhs": mismatch.lhs.to_string(),
            "rhs": mismatch.rhs.to_string(),
        });
    }
    obj
}

fn run(command: &Command, cap: u64) -> Result<Report, RunError> {
    match command {
        Command::Dims {
            m,
            max_n,
            algebra,
            rank,
        } => cmd_dims(*m, *max_n, *algebra, *rank, cap),
        Command::Normalize { m, expr } => cmd_normalize(*m, expr),
        Command::Class { word } => cmd_class(word),
        Command::Product { m, op, left, right } => cmd_product(*m, op, left, right),
        Command::Verify {
            m,
            size,
            random_triples,
            random_size,
            seed,
        } => cmd_verify(*m, *size, *random_triples, *random_size, *seed),
        Command::Confluence { m, max_ops, out } => cmd_confluence(*m, *max_ops, out.as_deref(), cap),
        Command::Bijection { m, word, tree } => cmd_bijection(*m, word.as_deref(), tree.as_deref()),
        Command::Series { m, order, check } => cmd_series(*m, *order, *check),
        Command::Classcount { m, max_n } => cmd_classcount(*m, *max_n, cap),
    }
}

fn cmd_dims(
    m: usize,
    max_n: usize,
    algebra: Algebra,
    rank: bool,
    cap: u64,
) -> Result<Report, RunError> {
    if m == 0 || max_n == 0 {
        return Err(RunError::Usage("m and max-n must be at least 1".into()));
    }
    let mut rows = Vec::new();
    let mut pass = true;
    for n in 1..=max_n {
        let row = match algebra {
            Algebra::Dendriform => {
                let report = dimension_check(m, n, rank, cap)?;
                pass &= report.ok;
                json!({
                    "n": n,
                    "census": report.census.to_string(),
                    "closed_form": report.closed_form.to_string(),
                    "rank": report.rank,
                    "match": report.ok,
                })
            }
            Algebra::Dias => {
                let census = enumerate_dias_normal(m, n - 1, cap)?.len();
                let closed = binomial(n + m - 1, n - 1);
                let ok = BigInt::from(census) == closed;
                pass &= ok;
                json!({
                    "n": n,
                    "census": census.to_string(),
                    "closed_form": closed.to_string(),
                    "match": ok,
                })
            }
        };
        rows.push(row);
    }
    Ok(Report {
        value: json!({
            "schema": SCHEMA,
            "command": "dims",
            "m": m,
            "algebra": match algebra { Algebra::Dendriform => "dendriform", Algebra::Dias => "dias" },
            "rows": rows,
            "pass": pass,
        }),
        pass,
    })
}

fn cmd_normalize(m: usize, expr: &str) -> Result<Report, RunError> {
    let tree = parse_expr(expr)?;
    let nf = normalize(m, &tree)?;
    let terms: Vec<Value> = nf
        .iter()
        .map(|(t, c)| json!({ "tree": t.to_string(), "coeff": c.to_string() }))
        .collect();
    Ok(Report {
        value: json!({
            "schema": SCHEMA,
            "command": "normalize",
            "m": m,
            "input": tree.to_string(),
            "terms": terms,
        }),
        pass: true,
    })
}

fn cmd_class(word: &str) -> Result<Report, RunError> {
    let word: Word = word.parse()?;
    let class = sylvester_class(&word)?;
    Ok(Report {
        value: json!({
            "schema": SCHEMA,
            "command": "class",
            "word": word.to_string(),
            "members": class.members.iter().map(Word::to_string).collect::<Vec<_>>(),
            "canonical": class.canonical.to_string(),
            "size": class.members.len(),
        }),
        pass: true,
    })
}

fn cmd_product(m: usize, op: &str, left: &str, right: &str) -> Result<Report, RunError> {
    let left: Word = left.parse()?;
    let right: Word = right.parse()?;
    let (a, b) = (LinComb::unit(left.clone()), LinComb::unit(right.clone()));
    let result = match op {
        "full" => product(m, &a, &b)?,
        "prec" => apply_op(m, OpLabel::Prec, &a, &b)?,
        "succ" => apply_op(m, OpLabel::Succ, &a, &b)?,
        _ => match op.strip_prefix("mid:").and_then(|i| i.parse::<usize>().ok()) {
            Some(i) => apply_op(m, OpLabel::Mid(i), &a, &b)?,
            None => {
                return Err(RunError::Usage(format!(
                    "unknown op {op:?}; expected prec, mid:I, succ or full"
                )))
            }
        },
    };
    Ok(Report {
        value: json!({
            "schema": SCHEMA,
            "command": "product",
            "m": m,
            "op": op,
            "left": left.to_string(),
            "right": right.to_string(),
            "terms": lincomb_json(&result),
        }),
        pass: true,
    })
}

fn cmd_verify(
    m: usize,
    size: usize,
    random_triples: usize,
    random_size: usize,
    seed: u64,
) -> Result<Report, RunError> {
    if m == 0 || size == 0 {
        return Err(RunError::Usage("m and size must be at least 1".into()));
    }
    let mut pass = true;
    let mut failures: Vec<Value> = Vec::new();

    // Relations, exhaustively, on words.
    let axioms = verify_axioms(m, size)?;
    pass &= axioms.passed();
    if let Some(f) = &axioms.failure {
        failures.push(json!({
            "check": "axioms",
            "relation": f.relation,
            "u": f.u.to_string(),
            "v": f.v.to_string(),
            "w": f.w.to_string(),
        }));
    }

    // Rewriting soundness: eval(T) = eval(normalize(T)).
    let mut cache = EvalCache::new(m);
    let mut soundness_trees = 0u64;
    'soundness: for k in 0..=size {
        for tree in enumerate_all_trees(m, k) {
            soundness_trees += 1;
            let direct = cache.eval(&tree)?;
            let via_nf = cache.eval_lincomb(&normalize(m, &tree)?)?;
            if *direct != via_nf {
                pass = false;
                failures.push(json!({ "check": "soundness", "tree": tree.to_string() }));
                break 'soundness;
            }
        }
    }

    // Class closure on all pairs with sizes summing to at most size + 2.
    let mut closure_pairs = 0u64;
    let sum_bound = size + 2;
    'closure: for na in 1..sum_bound {
        for nb in 1..=(sum_bound - na) {
            let classes_a = classes_of_size(m, na);
            let classes_b = classes_of_size(m, nb);
            for ca in &classes_a {
                for cb in &classes_b {
                    for op in OpLabel::all(m) {
                        closure_pairs += 1;
                        if !mfqsym::class_product_closure(m, op, ca, cb)? {
                            pass = false;
                            failures.push(json!({
                                "check": "class_closure",
                                "op": op.to_string(),
                                "left": ca.canonical.to_string(),
                                "right": cb.canonical.to_string(),
                            }));
                            break 'closure;
                        }
                    }
                }
            }
        }
    }

    // Seeded random triples on marker interleavings.
    let mut random_checked = 0usize;
    if random_triples > 0 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut pool = Vec::new();
        for n in 1..=random_size {
            pool.extend(m_permutations(m, n));
        }
        for _ in 0..random_triples {
            let v = pool.choose(&mut rng).expect("pool nonempty").clone();
            let w = pool.choose(&mut rng).expect("pool nonempty").clone();
            random_checked += 1;
            if let Err(f) = check_triple_markers(m, &v, &w) {
                pass = false;
                failures.push(json!({
                    "check": "axioms_random",
                    "relation": f.relation,
                    "v": v.to_string(),
                    "w": w.to_string(),
                    "merge": f.merge,
                }));
                break;
            }
        }
    }

    Ok(Report {
        value: json!({
            "schema": SCHEMA,
            "command": "verify",
            "m": m,
            "size": size,
            "seed": seed,
            "axiom_triples": axioms.triples_checked,
            "relations": axioms.relations_checked,
            "soundness_trees": soundness_trees,
            "closure_products": closure_pairs,
            "random_triples": random_checked,
            "failures": failures,
            "pass": pass,
        }),
        pass,
    })
}

fn classes_of_size(m: usize, n: usize) -> Vec<fusscat_core::sylvester::SylvesterClass> {
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    for w in m_permutations(m, n) {
        if seen.contains(&w) {
            continue;
        }
        let class = sylvester_class(&w).expect("m-permutations have classes");
        for member in &class.members {
            seen.insert(member.clone());
        }
        out.push(class);
    }
    out
}

fn cmd_confluence(
    m: usize,
    max_ops: usize,
    out: Option<&std::path::Path>,
    cap: u64,
) -> Result<Report, RunError> {
    let confluence = check_local_confluence(m)?;
    let acyclicity = check_acyclic(m, max_ops, cap)?;
    let pass = confluence.pass && acyclicity.acyclic;
    let entries: Vec<Value> = confluence
        .entries
        .iter()
        .map(|e| {
            json!({
                "tree": e.tree.to_string(),
                "reducts": e.reducts.iter().map(dias::DiasTree::to_text).collect::<Vec<_>>(),
                "normal_forms": e.normal_forms.iter().map(dias::DiasTree::to_text).collect::<Vec<_>>(),
                "joinable": e.joinable,
            })
        })
        .collect();
    let value = json!({
        "schema": SCHEMA,
        "command": "confluence",
        "m": m,
        "trees_checked": confluence.trees_checked,
        "joinability": entries,
        "acyclicity": {
            "max_ops": acyclicity.max_ops,
            "nodes": acyclicity.nodes,
            "edges": acyclicity.edges,
            "acyclic": acyclicity.acyclic,
        },
        "pass": pass,
    });
    if let Some(path) = out {
        std::fs::write(path, serde_json::to_string_pretty(&value).expect("valid json"))?;
    }
    Ok(Report { value, pass })
}

fn cmd_bijection(
    m: usize,
    word: Option<&str>,
    tree: Option<&str>,
) -> Result<Report, RunError> {
    let (tree, word) = match (word, tree) {
        (Some(w), None) => {
            let word: Word = w.parse()?;
            let tree = tree_from_word(&word, m)?;
            (tree, word)
        }
        (None, Some(t)) => {
            let tree = KaryTree::parse(t)?;
            let word = reading_word(&tree, m)?;
            (tree, word)
        }
        _ => {
            return Err(RunError::Usage(
                "provide exactly one of --word or --tree".into(),
            ))
        }
    };
    Ok(Report {
        value: json!({
            "schema": SCHEMA,
            "command": "bijection",
            "m": m,
            "tree": tree.to_text(),
            "word": word.to_string(),
            "size": tree.size(),
        }),
        pass: true,
    })
}

fn cmd_series(m: usize, order: usize, kind: SeriesKind) -> Result<Report, RunError> {
    if m == 0 {
        return Err(RunError::Usage("m must be at least 1".into()));
    }
    let value = match kind {
        SeriesKind::Fixedpoint => {
            let (u, check) = fixed_point_check(m, order);
            series_json("fixedpoint", m, Some(&u), &check)
        }
        SeriesKind::System => {
            let census = census_by_root(m, order);
            let check = check_partial_system(m, order, &census);
            let u = TruncSeries::from_ints(census.total.clone());
            series_json("system", m, Some(&u), &check)
        }
        SeriesKind::Dias => {
            let census = dias::dias_census_by_root(m, order);
            let check = check_dias_system(m, order, &census);
            let u = dias_series(m, order);
            series_json("dias", m, Some(&u), &check)
        }
        SeriesKind::Koszul => {
            let check = koszul_inversion_check(m, order);
            series_json("koszul", m, None, &check)
        }
    };
    let pass = value["pass"].as_bool().unwrap_or(false);
    Ok(Report { value, pass })
}

fn cmd_classcount(m: usize, max_n: usize, cap: u64) -> Result<Report, RunError> {
    let mut rows = Vec::new();
    let mut pass = true;
    for n in 1..=max_n {
        let count = class_count(m, n, cap)?;
        let expected = fuss_catalan(m, n);
        let ok = BigInt::from(count) == expected;
        pass &= ok;
        rows.push(json!({
            "n": n,
            "classes": count,
            "fuss_catalan": expected.to_string(),
            "match": ok,
        }));
    }
    Ok(Report {
        value: json!({
            "schema": SCHEMA,
            "command": "classcount",
            "m": m,
            "rows": rows,
            "pass": pass,
        }),
        pass,
    })
}
