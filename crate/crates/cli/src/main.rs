use std::fmt::Write as _;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use totmonoid::prefix_code::{enumerate_complete_codes, is_complete, PrefixCode};
use totmonoid::presentation::{
    build_r0, mutate, standard_alphabet, verify_relations, GenAlphabet, R0Options,
};
use totmonoid::rel::{arrow_with_domain, parse_element, render_arrow, render_matrix};
use totmonoid::term::normalize;
use totmonoid::tot::{compose, deferment, tot_eq};
use totmonoid::{
    phi, psi, Endo, Error, LabeledGenSet, Params, RelElement, RootSystem, Term, TotElement,
};

#[derive(Parser)]
#[command(
    name = "totmonoid",
    version,
    about = "Exact computations in Brin-Higman-Thompson monoids"
)]
struct Cli {
    /// Number of dimensions.
    #[arg(long, global = true, default_value_t = 1)]
    n: usize,
    /// Arity.
    #[arg(long, global = true, default_value_t = 2)]
    k: usize,
    /// Number of roots.
    #[arg(long, global = true, default_value_t = 1)]
    r: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Machine,
}

#[derive(Subcommand)]
enum Command {
    /// A then B, printed reduced.
    Compose {
        a: String,
        b: String,
        /// Print the canonical arrow instead of the map.
        #[arg(long)]
        arrow: bool,
        /// Draw the arrow over this complete code instead of the canonical domain.
        #[arg(long)]
        domain: Option<String>,
    },
    /// Whether two elements are the same map.
    Eq { a: String, b: String },
    /// Normal form of a term.
    NormalizeTerm { term: String },
    /// The endomorphism of a total map.
    Phi { element: String },
    /// The total map of an endomorphism `[t0; t1; ...]`.
    Psi { endo: String },
    /// Draw a labeled set, or the canonical arrow of an element.
    Render {
        input: String,
        #[arg(long)]
        domain: Option<String>,
    },
    /// The deferment of F to the root system W.
    Defer {
        f: String,
        w: String,
        #[arg(long)]
        arrow: bool,
        #[arg(long)]
        domain: Option<String>,
    },
    /// Build the relation families over an alphabet and check them.
    VerifyRelations {
        /// Alphabet file; the standard alphabet when omitted.
        alphabet: Option<String>,
        /// Replace one letter in this many randomly chosen relations.
        #[arg(long, default_value_t = 0)]
        mutate: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// List the complete prefix codes of depth at most `--depth`.
    EnumerateCodes {
        #[arg(long)]
        depth: usize,
    },
}

enum Outcome {
    Done(String),
    Failed(String),
}

fn element(src: &str, p: &Params) -> Result<TotElement, Error> {
    Ok(parse_element(src, p)?.carrier().clone())
}

fn arrow_of(
    x: &TotElement,
    domain: Option<&str>,
    p: &Params,
) -> Result<(LabeledGenSet, LabeledGenSet), Error> {
    let code = match domain {
        Some(src) => {
            let code = PrefixCode::parse(src, p)?;
            if !is_complete(&code, p) {
                return Err(Error::NotComplete(code.to_string()));
            }
            code
        }
        None => x.domain(),
    };
    arrow_with_domain(&RelElement::from_carrier(x), &code)
}

fn arrow_text(x: &TotElement, domain: Option<&str>, p: &Params) -> Result<String, Error> {
    let (l1, l2) = arrow_of(x, domain, p)?;
    match render_arrow(&l1, &l2, p) {
        Ok(s) => Ok(s),
        Err(Error::NotMatrixRepresentable(_)) => Ok(format!("{l1} -> {l2}")),
        Err(e) => Err(e),
    }
}

fn kv(out: &mut String, key: &str, value: impl std::fmt::Display) {
    writeln!(out, "{key}\t{value}").expect("writing to a string");
}

fn run(cli: &Cli) -> Result<Outcome, Box<dyn std::error::Error>> {
    let p = Params::new(cli.n, cli.k, cli.r)?;
    let machine = cli.format == Format::Machine;
    let mut out = String::new();
    match &cli.command {
        Command::Compose {
            a,
            b,
            arrow,
            domain,
        } => {
            let fg = compose(&element(a, &p)?, &element(b, &p)?)?;
            if machine {
                kv(&mut out, "element", &fg);
                kv(&mut out, "depth", fg.depth());
                if *arrow {
                    kv(&mut out, "arrow", arrow_text(&fg, domain.as_deref(), &p)?);
                }
            } else if *arrow {
                writeln!(out, "{}", arrow_text(&fg, domain.as_deref(), &p)?).unwrap();
            } else {
                writeln!(out, "{fg}").unwrap();
            }
        }
        Command::Eq { a, b } => {
            let equal = tot_eq(&element(a, &p)?, &element(b, &p)?);
            if machine {
                kv(&mut out, "equal", equal);
            } else {
                writeln!(out, "{}", if equal { "EQUAL" } else { "NOT EQUAL" }).unwrap();
            }
            if !equal {
                return Ok(Outcome::Failed(out));
            }
        }
        Command::NormalizeTerm { term } => {
            let nf = normalize(&Term::parse(term, &p)?, &p)?;
            if machine {
                kv(&mut out, "normal", &nf);
                kv(&mut out, "lambdas", nf.lambda_count());
            } else {
                writeln!(out, "{nf}").unwrap();
            }
        }
        Command::Phi { element: f } => {
            let e = phi(&element(f, &p)?);
            if machine {
                kv(&mut out, "endo", e);
            } else {
                writeln!(out, "{e}").unwrap();
            }
        }
        Command::Psi { endo } => {
            let f = psi(&Endo::parse(endo, &p)?, &p)?;
            if machine {
                kv(&mut out, "element", &f);
                kv(&mut out, "depth", f.depth());
            } else {
                writeln!(out, "{f}").unwrap();
            }
        }
        Command::Render { input, domain } => {
            let labeled =
                input.trim_start().starts_with('{') && input.contains(':') && !input.contains("->");
            if labeled {
                let l = LabeledGenSet::parse(input, &p)?;
                let m = render_matrix(&l, &p)?;
                if machine {
                    kv(&mut out, "matrix", m);
                } else {
                    writeln!(out, "{m}").unwrap();
                }
            } else {
                let x = element(input, &p)?;
                let (l1, l2) = arrow_of(&x, domain.as_deref(), &p)?;
                let (m1, m2) = (render_matrix(&l1, &p)?, render_matrix(&l2, &p)?);
                if machine {
                    kv(&mut out, "left", m1);
                    kv(&mut out, "right", m2);
                } else {
                    writeln!(out, "{m1} -> {m2}").unwrap();
                }
            }
        }
        Command::Defer {
            f,
            w,
            arrow,
            domain,
        } => {
            let fw = deferment(&element(f, &p)?, &RootSystem::parse(w, &p)?)?;
            if machine {
                kv(&mut out, "element", &fw);
                kv(&mut out, "depth", fw.depth());
                if *arrow {
                    kv(&mut out, "arrow", arrow_text(&fw, domain.as_deref(), &p)?);
                }
            } else if *arrow {
                writeln!(out, "{}", arrow_text(&fw, domain.as_deref(), &p)?).unwrap();
            } else {
                writeln!(out, "{fw}").unwrap();
            }
        }
        Command::VerifyRelations {
            alphabet,
            mutate: count,
            seed,
        } => {
            let a = match alphabet {
                Some(path) => {
                    let src = std::fs::read_to_string(path)
                        .map_err(|e| format!("cannot read {path}: {e}"))?;
                    GenAlphabet::parse(&src, &p)?
                }
                None => standard_alphabet(&p)?,
            };
            let built = build_r0(&a, &R0Options::default())?;
            let mut rels = built.relations;
            if *count > 0 {
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                let mut picked: Vec<usize> = (0..rels.len()).collect();
                picked.shuffle(&mut rng);
                for &i in picked.iter().take(*count) {
                    rels[i] = mutate(&rels[i], &a, &mut rng);
                }
            }
            let report = verify_relations(&rels, &a)?;
            let failed = report.failures().count();
            if machine {
                for c in &report.checks {
                    let verdict = if c.passed() { "PASS" } else { "FAIL" };
                    let r = &c.relation;
                    writeln!(
                        out,
                        "family\t{}\t{}\t{}\t{verdict}",
                        r.family, r.left, r.right
                    )
                    .unwrap();
                }
                for note in &built.notes {
                    kv(&mut out, "note", note);
                }
                kv(&mut out, "total", report.checks.len());
                kv(&mut out, "failed", failed);
            } else {
                out.push_str(&report.to_string());
                for note in &built.notes {
                    writeln!(out, "note: {note}").unwrap();
                }
                writeln!(out, "{} relations, {failed} failed", report.checks.len()).unwrap();
            }
            if failed > 0 {
                return Ok(Outcome::Failed(out));
            }
        }
        Command::EnumerateCodes { depth } => {
            let codes = enumerate_complete_codes(*depth, &p)?;
            for c in &codes {
                if machine {
                    kv(&mut out, "code", c);
                } else {
                    writeln!(out, "{c}").unwrap();
                }
            }
            if machine {
                kv(&mut out, "count", codes.len());
            } else {
                writeln!(out, "count {}", codes.len()).unwrap();
            }
        }
    }
    Ok(Outcome::Done(out))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Outcome::Done(out)) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Ok(Outcome::Failed(out)) => {
            print!("{out}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
