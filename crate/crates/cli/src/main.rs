mod parse;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use spinmcg::calculus::{
    factor_orthogonal, factor_square_transvection, has_block_shape, is_delta_vector, lambda_reduce,
    lambda_reduce_to_base, orbit_witness, reduce_blocks, reduce_to_delta, LambdaReduction, LambdaVec, OrbitWitness,
    OrthWord, ReductionCert, SquareTransvectionFactor,
};
use spinmcg::rewriter::{check_rewrite, rewrite_square_conjugate, RewriteCert};
use spinmcg::schreier::{build_table, verify_table1_with, OrbitGraph};
use spinmcg::symplectic::{orthogonal_group_order, symplectic_group_order, transvection_subgroup_order};
use spinmcg::{arf, enumerate_forms, parse_word, Error, Genus, QuadForm, Z2Matrix};

#[derive(Parser)]
#[command(name = "spinmcg", version, about = "Spin mapping class group computations")]
struct Cli {
    /// Genus of the surface
    #[arg(long = "g", global = true)]
    genus: Option<usize>,
    /// Output format (json by default; dot for orbit-graph)
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
    Dot,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a word under the symplectic representation
    Eval {
        #[arg(long)]
        word: String,
        /// Reduce mod 2
        #[arg(long)]
        mod2: bool,
        /// JSON curve-class table replacing the standard one
        #[arg(long)]
        classes: Option<PathBuf>,
    },
    /// Does the word preserve the quadratic form q0?
    SpinCheck {
        #[arg(long)]
        word: String,
        #[arg(long)]
        classes: Option<PathBuf>,
    },
    /// Arf invariant of a form given by its values on x1, y1, ..., xg, yg
    Arf {
        #[arg(long)]
        form: String,
    },
    /// List quadratic forms, optionally only those with a given Arf invariant
    Forms {
        #[arg(long)]
        arf: Option<u8>,
    },
    /// Rewrite W C_i^2 W^-1 in the generators X_j, Xs_j, D_j
    Rewrite {
        #[arg(long)]
        word: Option<String>,
        #[arg(long)]
        index: Option<usize>,
        #[arg(long)]
        check: Option<PathBuf>,
    },
    /// Blockwise Euclid reduction of a primitive vector
    ReduceBlocks {
        #[arg(long, allow_hyphen_values = true)]
        vector: Option<String>,
        #[arg(long)]
        check: Option<PathBuf>,
    },
    /// Reduction of a primitive vector to coordinates in {0, 1}
    ReduceDelta {
        #[arg(long, allow_hyphen_values = true)]
        vector: Option<String>,
        #[arg(long)]
        check: Option<PathBuf>,
    },
    /// Write T_a^2 as a conjugate of a square transvection about a {0,1}-vector
    FactorSqtv {
        #[arg(long, allow_hyphen_values = true)]
        vector: Option<String>,
        #[arg(long)]
        check: Option<PathBuf>,
    },
    /// Reduce a class with q0 = 1 to a generator by box-square moves
    LambdaReduce {
        #[arg(long)]
        vector: Option<String>,
        /// Continue to x1+y1 or x1+y1+x2
        #[arg(long)]
        to_base: bool,
        #[arg(long)]
        check: Option<PathBuf>,
    },
    /// Factor an element of O(2g, Z/2) into generator transvections
    FactorOrth {
        #[arg(long)]
        matrix: Option<PathBuf>,
        #[arg(long)]
        check: Option<PathBuf>,
    },
    /// Word in the named generators moving a mod-2 class to a reference class
    Witness {
        #[arg(long)]
        vector: Option<String>,
        #[arg(long)]
        check: Option<PathBuf>,
    },
    /// Orbit of the Arf-0 forms under C1..C5 (genus 2)
    OrbitGraph,
    /// Schreier generators and their names (genus 2)
    SchreierTable,
    /// Compare the Schreier generators with the expected table (genus 2)
    VerifyTable1 {
        #[arg(long)]
        classes: Option<PathBuf>,
    },
    /// Orders of Sp(2g, Z/2), O(2g, Z/2) and its transvection subgroup
    GroupOrders,
}

#[derive(Debug)]
pub enum Failure {
    Input(String),
    Verify(String),
}

impl Failure {
    pub fn input(msg: impl Into<String>) -> Self {
        Failure::Input(msg.into())
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Overflow
            | Error::NoWitness(_)
            | Error::FactorizationStalled(_)
            | Error::Rewrite(_)
            | Error::Unsupported(_) => Failure::Verify(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

struct Output {
    text: String,
    ok: bool,
}

impl Output {
    fn ok(text: String) -> Self {
        Output { text, ok: true }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            print!("{}", out.text);
            if !out.text.ends_with('\n') {
                println!();
            }
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Verify(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

fn genus_of(cli: &Cli) -> Result<Genus, Failure> {
    Ok(Genus::new(cli.genus.unwrap_or(2))?)
}

fn need<'a, T>(v: &'a Option<T>, flag: &str) -> Result<&'a T, Failure> {
    v.as_ref().ok_or_else(|| Failure::input(format!("missing --{flag}")))
}

fn matrix_text<T: ToString>(rows: &[Vec<T>]) -> String {
    let cells: Vec<Vec<String>> = rows.iter().map(|r| r.iter().map(|c| c.to_string()).collect()).collect();
    let w = cells.iter().flatten().map(|c| c.len()).max().unwrap_or(1);
    let mut out = String::new();
    for r in cells {
        let line: Vec<String> = r.iter().map(|c| format!("{c:>w$}")).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

fn csv<T: ToString>(v: &[T]) -> String {
    v.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")
}

fn verdict(ok: bool, format: Format, what: &str) -> Output {
    let text = match format {
        Format::Json => json(&serde_json::json!({ "check": what, "pass": ok })),
        _ => format!("{} {what}", if ok { "PASS" } else { "FAIL" }),
    };
    Output { text, ok }
}

fn read_cert<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, Failure> {
    serde_json::from_value(parse::json(path)?).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

#[derive(Serialize, Deserialize)]
struct OrthCert {
    matrix: Z2Matrix,
    word: OrthWord,
}

#[derive(Serialize)]
struct GroupOrders {
    genus: usize,
    symplectic: usize,
    orthogonal: usize,
    transvection_subgroup: usize,
}

fn run(cli: &Cli) -> Result<Output, Failure> {
    let genus = genus_of(cli)?;
    let is_graph = matches!(cli.command, Command::OrbitGraph);
    let format = cli.format.unwrap_or(if is_graph { Format::Dot } else { Format::Json });
    if format == Format::Dot && !is_graph {
        return Err(Failure::input("--format dot is only available for orbit-graph"));
    }
    let genus2 = || -> Result<(), Failure> {
        if genus.get() != 2 {
            return Err(Failure::input(format!("this subcommand works in genus 2, got --g {}", genus.get())));
        }
        Ok(())
    };
    match &cli.command {
        Command::Eval { word, mod2, classes } => {
            let table = parse::classes(classes.as_deref(), genus)?;
            let w = parse_word(word, genus)?;
            if *mod2 {
                let m = table.eval_mod2(&w)?;
                Ok(Output::ok(match format {
                    Format::Json => {
                        json(&serde_json::json!({ "word": w, "genus": genus.get(), "mod2": true, "matrix": m }))
                    }
                    _ => matrix_text(&m.rows()),
                }))
            } else {
                let m = match table.eval_int::<i64>(&w) {
                    Ok(m) => m.rows().into_iter().map(|r| r.into_iter().map(|c| c.to_string()).collect()).collect(),
                    Err(Error::Overflow) => {
                        let big: spinmcg::BigMatrix = table.eval_int(&w)?;
                        big.rows().into_iter().map(|r| r.into_iter().map(|c| c.to_string()).collect()).collect()
                    }
                    Err(e) => return Err(e.into()),
                };
                let m: Vec<Vec<String>> = m;
                Ok(Output::ok(match format {
                    Format::Json => {
                        let rows: Vec<Vec<serde_json::Value>> = m
                            .iter()
                            .map(|r| {
                                r.iter()
                                    .map(|c| c.parse::<i64>().map_or_else(|_| c.clone().into(), Into::into))
                                    .collect()
                            })
                            .collect();
                        json(&serde_json::json!({ "word": w, "genus": genus.get(), "mod2": false, "matrix": rows }))
                    }
                    _ => matrix_text(&m),
                }))
            }
        }
        Command::SpinCheck { word, classes } => {
            let table = parse::classes(classes.as_deref(), genus)?;
            let w = parse_word(word, genus)?;
            let spin = table.spin_check(&w)?;
            Ok(Output::ok(match format {
                Format::Json => json(&serde_json::json!({ "word": w, "genus": genus.get(), "spin": spin })),
                _ => spin.to_string(),
            }))
        }
        Command::Arf { form } => {
            let values = parse::bits(form)?;
            let q = QuadForm::from_basis_values(genus, &values)?;
            let a = arf(&q) as u8;
            Ok(Output::ok(match format {
                Format::Json => json(&serde_json::json!({ "form": q, "arf": a })),
                _ => a.to_string(),
            }))
        }
        Command::Forms { arf: which } => {
            let mut forms = Vec::new();
            for value in [false, true] {
                if which.is_none_or(|w| (w == 1) == value) {
                    forms.extend(enumerate_forms(genus, value).into_iter().map(|q| (q, value as u8)));
                }
            }
            if let Some(w) = which {
                if *w > 1 {
                    return Err(Failure::input(format!("`{w}` is not a bit")));
                }
            }
            Ok(Output::ok(match format {
                Format::Json => {
                    json(&forms.iter().map(|(q, a)| serde_json::json!({ "form": q, "arf": a })).collect::<Vec<_>>())
                }
                _ => forms.iter().map(|(q, a)| format!("{q} arf={a}\n")).collect(),
            }))
        }
        Command::Rewrite { word, index, check } => {
            if let Some(path) = check {
                let cert: RewriteCert = read_cert(path)?;
                return Ok(verdict(check_rewrite(&cert, genus), format, "rewrite certificate"));
            }
            let w = parse_word(need(word, "word")?, genus)?;
            let cert = rewrite_square_conjugate(&w, *need(index, "index")?, genus)?;
            Ok(Output::ok(match format {
                Format::Json => json(&cert),
                _ => cert.token_string(),
            }))
        }
        Command::ReduceBlocks { vector, check } | Command::ReduceDelta { vector, check } => {
            let blocks = matches!(cli.command, Command::ReduceBlocks { .. });
            let shape_ok = |c: &ReductionCert<i64>| {
                if blocks {
                    has_block_shape(&c.output)
                } else {
                    is_delta_vector(&c.output)
                }
            };
            if let Some(path) = check {
                let cert: ReductionCert<i64> = read_cert(path)?;
                return Ok(verdict(cert.verify() && shape_ok(&cert), format, "reduction certificate"));
            }
            let a = parse::int_vector(genus, need(vector, "vector")?)?;
            let cert = if blocks { reduce_blocks(&a)? } else { reduce_to_delta(&a)? };
            Ok(Output::ok(match format {
                Format::Json => json(&cert),
                _ => reduction_text(&cert),
            }))
        }
        Command::FactorSqtv { vector, check } => {
            if let Some(path) = check {
                let f: SquareTransvectionFactor<i64> = read_cert(path)?;
                return Ok(verdict(f.verify()?, format, "square transvection factorization"));
            }
            let a = parse::int_vector(genus, need(vector, "vector")?)?;
            let f = factor_square_transvection(&a)?;
            Ok(Output::ok(match format {
                Format::Json => json(&f),
                _ => {
                    let mut s = format!("T[{}]^2 = U^-1 T[{}]^2 U\n", csv(a.coords()), csv(f.core.coords()));
                    let parts: Vec<String> = f
                        .conjugator
                        .iter()
                        .map(|c| format!("T[{}]^{}", csv(&c.operand.coords()), c.exponent))
                        .collect();
                    let _ = writeln!(s, "U = {}", if parts.is_empty() { "1".into() } else { parts.join(" ") });
                    s
                }
            }))
        }
        Command::LambdaReduce { vector, to_base, check } => {
            if let Some(path) = check {
                let r: LambdaReduction = read_cert(path)?;
                return Ok(verdict(r.verify(), format, "reduction certificate"));
            }
            let z = LambdaVec::new(parse::z2_vector(genus, need(vector, "vector")?)?)?;
            let r = if *to_base { lambda_reduce_to_base(&z)? } else { lambda_reduce(&z)? };
            Ok(Output::ok(match format {
                Format::Json => json(&r),
                _ => {
                    let mut s = csv(&r.input.vector().coords());
                    for m in &r.moves {
                        let _ = write!(s, " □ [{}]", csv(&m.operand().vector().coords()));
                    }
                    let gen = r.generator().map(|g| g.to_string()).unwrap_or_default();
                    let _ = writeln!(s, " = {} ({gen})", csv(&r.output.vector().coords()));
                    s
                }
            }))
        }
        Command::FactorOrth { matrix, check } => {
            if let Some(path) = check {
                let c: OrthCert = read_cert(path)?;
                let ok = c.word.product(c.matrix.genus()).map(|p| p == c.matrix).unwrap_or(false);
                return Ok(verdict(ok, format, "orthogonal factorization"));
            }
            let m = parse::z2_matrix(need(matrix, "matrix")?, genus)?;
            let word = factor_orthogonal(&m)?;
            Ok(Output::ok(match format {
                Format::Json => json(&OrthCert { matrix: m, word }),
                _ => word.to_string(),
            }))
        }
        Command::Witness { vector, check } => {
            if let Some(path) = check {
                let w: OrbitWitness = read_cert(path)?;
                let table = spinmcg::CurveClassTable::canonical(w.input.genus());
                return Ok(verdict(w.verify(&table)?, format, "orbit witness"));
            }
            if genus.get() < 3 {
                return Err(Failure::input("witness needs --g 3 or more"));
            }
            let v = parse::z2_vector(genus, need(vector, "vector")?)?;
            let w = orbit_witness(&spinmcg::CurveClassTable::canonical(genus), &v)?;
            Ok(Output::ok(match format {
                Format::Json => json(&w),
                _ => {
                    let names: Vec<String> = w.word.iter().map(|n| n.to_string()).collect();
                    format!(
                        "{} -> {} by {}",
                        csv(&w.input.coords()),
                        csv(&w.target.coords()),
                        if names.is_empty() { "1".into() } else { names.join(" ") }
                    )
                }
            }))
        }
        Command::OrbitGraph => {
            genus2()?;
            let g = OrbitGraph::build()?;
            Ok(Output::ok(match format {
                Format::Dot => g.to_dot(),
                Format::Json => json(&g),
                Format::Text => {
                    let mut s = String::new();
                    for e in &g.edges {
                        let _ = writeln!(s, "{} --C{}--> {}", g.vertices[e.from], e.letter, g.vertices[e.to]);
                    }
                    s
                }
            }))
        }
        Command::SchreierTable => {
            genus2()?;
            let t = build_table()?;
            Ok(Output::ok(match format {
                Format::Json => json(&t),
                _ => t.to_text(),
            }))
        }
        Command::VerifyTable1 { classes } => {
            genus2()?;
            let table = parse::classes(classes.as_deref(), genus)?;
            let r = verify_table1_with(&table)?;
            let ok = r.pass();
            Ok(Output {
                text: match format {
                    Format::Json => json(&serde_json::json!({ "pass": ok, "report": r })),
                    _ => r.to_text(),
                },
                ok,
            })
        }
        Command::GroupOrders => {
            let o = GroupOrders {
                genus: genus.get(),
                symplectic: symplectic_group_order(genus)?,
                orthogonal: orthogonal_group_order(genus)?,
                transvection_subgroup: transvection_subgroup_order(genus)?,
            };
            Ok(Output::ok(match format {
                Format::Json => json(&o),
                _ => format!(
                    "|Sp({n},Z/2)| = {}\n|O({n},Z/2)| = {}\ntransvection subgroup of O: {}\n",
                    o.symplectic,
                    o.orthogonal,
                    o.transvection_subgroup,
                    n = 2 * o.genus
                ),
            }))
        }
    }
}

fn reduction_text(c: &ReductionCert<i64>) -> String {
    let mut s = csv(c.input.coords());
    for m in &c.moves {
        let _ = write!(s, " {m}");
    }
    let _ = writeln!(s, " = {}", csv(c.output.coords()));
    s
}
