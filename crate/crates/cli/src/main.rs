use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use smallcancel::dehn::DehnSolver;
use smallcancel::motions::{build_bus_motion, carcrash_check, uniform_motion, unit_speed_buses, DiscreteMotion};
use smallcancel::presentations::{ParameterLadder, Presentation};
use smallcancel::rational;
use smallcancel::surface_maps::format::parse_map;
use smallcancel::surface_maps::{build_scheme, weight_test, SchemeKind, SurfaceMap, WeightScheme};
use smallcancel::words::wicks_commutator_test;
use smallcancel::workbench::{parse_range, scan_free_group, scan_presentation, ScanReport};
use smallcancel::{CyclicWord, Word};

#[derive(Parser)]
#[command(name = "smallcancel", version, about = "Small-cancellation and car-crash workbench")]
struct Cli {
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print λ*, the torsion-free verdict and the symmetrized size.
    CheckPresentation { file: PathBuf },
    /// Look for a Wicks form of a cyclic word.
    Wicks { word: String },
    /// Decide whether a word is a proper power.
    Power { word: String },
    /// Run Dehn's algorithm on a word.
    Dehn {
        #[arg(long)]
        presentation: PathBuf,
        word: String,
    },
    /// Check the weight-test identity on a map.
    WeightTest {
        #[arg(long)]
        map: PathBuf,
        /// `lemma1`, `lemma2`, a rational for a uniform weight, or a weight file.
        #[arg(long, default_value = "lemma1")]
        scheme: String,
    },
    /// Count complete collisions against the car-crash bound.
    Carcrash {
        #[arg(long)]
        map: PathBuf,
        /// Cars per face for a uniform motion.
        #[arg(long, default_value_t = 1)]
        cars: usize,
        /// Period T of the uniform motion.
        #[arg(long, default_value = "1")]
        period: String,
        /// Run buses reading this word around the hole instead.
        #[arg(long)]
        word: Option<String>,
        /// Number of buses on the hole.
        #[arg(long)]
        buses: Option<usize>,
    },
    /// Scan a free group for commutators that are proper powers.
    ScanFree {
        #[arg(long)]
        gens: u32,
        #[arg(long)]
        maxlen: usize,
        #[arg(long, default_value = "2..3")]
        n: String,
        #[arg(long)]
        verbose: bool,
        /// Also write the JSON report here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Scan a presentation for commutators that are proper powers.
    Scan {
        #[arg(long)]
        presentation: PathBuf,
        #[arg(long)]
        maxlen: usize,
        #[arg(long)]
        witness_len: usize,
        #[arg(long, default_value = "2..2")]
        n: String,
        #[arg(long)]
        verbose: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

type Outcome = Result<bool, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn emit<T: Serialize>(json: bool, value: &T, text: impl FnOnce() -> String) {
    if json {
        println!("{}", serde_json::to_string_pretty(value).expect("reports serialize"));
    } else {
        print!("{}", text());
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Outcome {
    let json = cli.json;
    match &cli.command {
        Command::CheckPresentation { file } => {
            let p = Presentation::parse(&read(file)?)?;
            let set = p.symmetrize();
            let lambda_star = set.max_piece_ratio()?;
            let torsion_free = set.torsion_free_surrogate();
            let dehn = lambda_star < rational::ratio(1, 6);
            #[derive(Serialize)]
            struct Out {
                lambda_star: String,
                torsion_free: bool,
                symmetrized_size: usize,
                dehn_applies: bool,
            }
            let out = Out { lambda_star: lambda_star.to_string(), torsion_free, symmetrized_size: set.len(), dehn_applies: dehn };
            emit(json, &out, || {
                format!(
                    "lambda*: {}\ntorsion-free (no relator is a proper power): {}\nsymmetrized size: {}\nDehn applies: {}\n",
                    out.lambda_star, out.torsion_free, out.symmetrized_size, out.dehn_applies
                )
            });
            Ok(torsion_free && dehn)
        }
        Command::Wicks { word } => {
            let w: CyclicWord = word.parse()?;
            let form = wicks_commutator_test(&w);
            #[derive(Serialize)]
            struct Out {
                word: String,
                commutator: bool,
                x: Option<String>,
                y: Option<String>,
                z: Option<String>,
                u: Option<String>,
                v: Option<String>,
            }
            let s = |f: &dyn Fn(&smallcancel::words::WicksForm) -> &Word| form.as_ref().map(|x| f(x).to_string());
            let out = Out {
                word: w.to_string(),
                commutator: form.is_some(),
                x: s(&|f| &f.x),
                y: s(&|f| &f.y),
                z: s(&|f| &f.z),
                u: s(&|f| &f.u),
                v: s(&|f| &f.v),
            };
            emit(json, &out, || match &form {
                Some(f) => format!("{} = [{}, {}] with x = {}, y = {}, z = {}\n", out.word, f.u, f.v, f.x, f.y, f.z),
                None => format!("{} has no Wicks form\n", out.word),
            });
            Ok(true)
        }
        Command::Power { word } => {
            let w: Word = word.parse()?;
            let power = w.is_proper_power();
            #[derive(Serialize)]
            struct Out {
                word: String,
                proper_power: bool,
                root: Option<String>,
                exponent: Option<usize>,
            }
            let out = Out {
                word: w.to_string(),
                proper_power: power.is_some(),
                root: power.as_ref().map(|(r, _)| r.to_string()),
                exponent: power.as_ref().map(|&(_, k)| k),
            };
            emit(json, &out, || match &power {
                Some((r, k)) => format!("{} = ({})^{}\n", out.word, r, k),
                None => format!("{} is not a proper power\n", out.word),
            });
            Ok(true)
        }
        Command::Dehn { presentation, word } => {
            let p = Presentation::parse(&read(presentation)?)?;
            let solver = DehnSolver::new(&p.symmetrize())?;
            let w: Word = word.parse()?;
            let red = solver.reduce(&w);
            #[derive(Serialize)]
            struct Out {
                input: String,
                output: String,
                trivial: bool,
                steps: Vec<String>,
            }
            let out = Out {
                input: w.to_string(),
                output: red.output.to_string(),
                trivial: red.output.is_empty(),
                steps: red
                    .steps
                    .iter()
                    .map(|s| format!("position {}: {} letters of {}", s.position, s.matched, s.relator))
                    .collect(),
            };
            emit(json, &out, || {
                let mut t = String::new();
                for s in &out.steps {
                    t.push_str(s);
                    t.push('\n');
                }
                t + &format!("{} -> {} ({})\n", out.input, out.output, if out.trivial { "trivial" } else { "nontrivial" })
            });
            Ok(true)
        }
        Command::WeightTest { map, scheme } => {
            let m = parse_map(&read(map)?)?;
            let weights = match scheme.as_str() {
                "lemma1" | "lemma2" => build_scheme(&m, scheme.parse::<SchemeKind>()?)?,
                other => match rational::parse(other) {
                    Some(r) => WeightScheme::uniform(&m, r),
                    None => WeightScheme::parse(&m, &read(Path::new(other))?)?,
                },
            };
            let k = weight_test(&m, &weights)?;
            emit(json, &k, || {
                let mut t = String::new();
                for (i, c) in k.vertices.iter().enumerate() {
                    t.push_str(&format!("K(v{i}) = {c}\n"));
                }
                for (i, c) in k.faces.iter().enumerate() {
                    t.push_str(&format!("K(f{i}) = {c}\n"));
                }
                t + &format!("total = {} = 2 * {}\n", k.total, k.euler_characteristic)
            });
            Ok(true)
        }
        Command::Carcrash { map, cars, period, word, buses } => {
            let m = parse_map(&read(map)?)?;
            let motion = motion_for(&m, *cars, period, word.as_deref(), *buses)?;
            let cc = carcrash_check(&m, &motion)?;
            emit(json, &cc, || {
                let mut t = String::new();
                for p in &cc.report.points {
                    let times: Vec<String> = p.times.iter().map(|x| x.to_string()).collect();
                    t.push_str(&format!("{} at t = {} ({} cars, degree {})\n", p.location, times.join(", "), p.cars_present, p.degree));
                }
                if !cc.report.degenerate.is_empty() {
                    t.push_str(&format!("{} overlaps of cars driving together\n", cc.report.degenerate.len()));
                }
                t + &format!(
                    "complete collision points: {}  bound: {}  {}\n",
                    cc.complete_count,
                    cc.bound,
                    if cc.satisfied { "satisfied" } else { "VIOLATED" }
                )
            });
            Ok(cc.satisfied)
        }
        Command::ScanFree { gens, maxlen, n, verbose, out } => {
            let range = parse_range(n).ok_or_else(|| Failure(format!("bad range {n:?}")))?;
            let report = scan_free_group(*gens, *maxlen, range, *verbose)?;
            finish(json, &report, out.as_deref())
        }
        Command::Scan { presentation, maxlen, witness_len, n, verbose, out } => {
            let p = Presentation::parse(&read(presentation)?)?;
            let range = parse_range(n).ok_or_else(|| Failure(format!("bad range {n:?}")))?;
            let report = scan_presentation(&p, *maxlen, *witness_len, range, &ParameterLadder::default(), *verbose)?;
            finish(json, &report, out.as_deref())
        }
    }
}

fn motion_for(m: &SurfaceMap, cars: usize, period: &str, word: Option<&str>, buses: Option<usize>) -> Result<DiscreteMotion, Failure> {
    Ok(match (word, buses) {
        (Some(w), n) => build_bus_motion(m, &w.parse::<CyclicWord>()?, n.unwrap_or(1))?,
        (None, Some(n)) => unit_speed_buses(m, n)?,
        (None, None) => {
            let t = rational::parse(period).ok_or_else(|| Failure(format!("bad period {period:?}")))?;
            uniform_motion(m, cars, t)?
        }
    })
}

fn finish(json: bool, report: &ScanReport, out: Option<&Path>) -> Outcome {
    if let Some(path) = out {
        let text = serde_json::to_string_pretty(report).expect("reports serialize");
        fs::write(path, text + "\n").map_err(|e| Failure(format!("{}: {e}", path.display())))?;
    }
    emit(json, report, || report.to_text());
    Ok(report.is_clean())
}
