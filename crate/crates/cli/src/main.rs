use std::fmt::Write as _;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use serde_json::{json, Value};

use univoque::composition::{classify, compose, decompose};
use univoque::expansions::{alpha_digits, base_from_alpha, special_base, BaseEnclosure, SpecialBase};
use univoque::numeric::{decimal_literal_places, decimal_places_for, int, parse_rational, to_decimal, to_fraction, Round};
use univoque::plateaus::{
    bridge_table, enumerate_plateaus, plateau_json_lines, plateau_meta, staircase, uniform_grid, BaseRange,
    PlateauRecord, Staircase, STAIRCASE_HEADER,
};
use univoque::subshift::{
    build_automaton, connect_words, default_entropy_tolerance, entropy, hausdorff_dimension, transitivity_report,
    SubshiftAutomaton,
};
use univoque::{Alphabet, EpSequence, Error, FundamentalWord, Word};

#[derive(Parser, Debug)]
#[command(name = "univoque", version, about = "Unique expansions in non-integer bases: words, bases, entropy plateaus")]
struct Cli {
    /// Largest digit of the alphabet {0, …, M}.
    #[arg(long = "M", global = true, default_value_t = 1)]
    m: u16,
    /// Width of base enclosures, as a decimal, p/q or b^e.
    #[arg(long, global = true, default_value = "2^-64")]
    precision: String,
    /// Number of expansion digits used for staircase bounds.
    #[arg(long, global = true, default_value_t = 30)]
    depth: usize,
    /// Longest fundamental word enumerated.
    #[arg(long = "max-len", global = true, default_value_t = 8)]
    max_len: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Plain)]
    format: Format,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Plain,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// First digits of the quasi-greedy expansion of 1.
    Alpha {
        /// The base, as a decimal (widened by --precision) or an exact p/q.
        #[arg(long, conflicts_with = "seq", required_unless_present = "seq")]
        q: Option<String>,
        /// The expansion itself, as "pre(period)".
        #[arg(long)]
        seq: Option<String>,
        #[arg(long, default_value_t = 20)]
        n: usize,
    },
    /// a ∘ b.
    Compose { a: String, b: String },
    /// Factorization into irreducible words.
    Decompose { c: String },
    /// irreducible, n-irreducible or reducible.
    Classify { c: String },
    /// Irreducible and n-irreducible intervals as JSON lines, CSV or a table.
    Plateaus {
        /// Only intervals meeting [lo, hi], written "lo,hi".
        #[arg(long)]
        region: Option<String>,
    },
    /// Entropy and dimension bounds on a uniform grid of bases.
    Staircase {
        /// Lower end of the grid [default: 1 + M/2]
        #[arg(long)]
        from: Option<String>,
        /// Upper end of the grid [default: M+1]
        #[arg(long)]
        to: Option<String>,
        /// Number of grid intervals
        #[arg(long, default_value_t = 40)]
        steps: usize,
        /// Emit the [q_G, q_T] data next to its binary image instead.
        #[arg(long)]
        image: bool,
    },
    /// Entropy of the subshift defined by an expansion of 1.
    Entropy {
        #[arg(long)]
        seq: String,
    },
    /// Transitivity check, with an optional connecting word.
    Transitive {
        #[arg(long)]
        seq: String,
        /// Find w with u·w·v in the language.
        #[arg(long, num_args = 2, value_names = ["U", "V"])]
        connect: Option<Vec<String>>,
    },
    /// q_G, q_KL, q_T and q′_2 … q′_n.
    Bases {
        #[arg(long, default_value_t = 3)]
        n: u32,
    },
}

#[derive(Debug)]
enum Failure {
    Domain(Error),
    Usage(String),
    Io(io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

struct Ctx {
    alphabet: Alphabet,
    tol: BigRational,
    places: usize,
    depth: usize,
    max_len: usize,
    format: Format,
}

impl Ctx {
    fn interval(&self, lo: &BigRational, hi: &BigRational) -> String {
        format!("[{}, {}]", to_decimal(lo, self.places, Round::Down), to_decimal(hi, self.places, Round::Up))
    }

    fn base(&self, q: &BaseEnclosure) -> String {
        self.interval(q.lo(), q.hi())
    }

    fn word(&self, text: &str) -> Result<Word, Failure> {
        Ok(Word::parse(self.alphabet, text)?)
    }

    fn fundamental(&self, text: &str) -> Result<FundamentalWord, Failure> {
        Ok(FundamentalWord::new(self.word(text)?)?)
    }

    fn seq(&self, text: &str) -> Result<EpSequence, Failure> {
        Ok(EpSequence::parse(self.alphabet, text)?)
    }

    /// Decimal literals become enclosures of radius `tol`; `p/q` and `b^e` stay exact.
    fn base_literal(&self, text: &str) -> Result<BaseEnclosure, Failure> {
        let q = parse_rational(text)?;
        if decimal_literal_places(text).is_some() {
            Ok(BaseEnclosure::around(self.alphabet, q, self.tol.clone())?)
        } else {
            Ok(BaseEnclosure::point(self.alphabet, q)?)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Domain(e)) => {
            eprintln!("error: {e}");
            match e {
                Error::PrecisionExhausted { .. } => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let alphabet = Alphabet::new(cli.m)?;
    let tol = parse_rational(&cli.precision)?;
    if tol <= BigRational::from_integer(0.into()) || tol >= int(1) {
        return Err(Failure::Usage("--precision must lie in (0, 1)".into()));
    }
    let ctx = Ctx {
        alphabet,
        places: decimal_places_for(&tol),
        tol,
        depth: cli.depth,
        max_len: cli.max_len,
        format: cli.format,
    };
    let text = match &cli.cmd {
        Cmd::Alpha { q, seq, n } => cmd_alpha(&ctx, q.as_deref(), seq.as_deref(), *n)?,
        Cmd::Compose { a, b } => cmd_compose(&ctx, a, b)?,
        Cmd::Decompose { c } => cmd_decompose(&ctx, c)?,
        Cmd::Classify { c } => cmd_classify(&ctx, c)?,
        Cmd::Plateaus { region } => cmd_plateaus(&ctx, region.as_deref())?,
        Cmd::Staircase { from, to, steps, image } => cmd_staircase(&ctx, from.as_deref(), to.as_deref(), *steps, *image)?,
        Cmd::Entropy { seq } => cmd_entropy(&ctx, seq)?,
        Cmd::Transitive { seq, connect } => cmd_transitive(&ctx, seq, connect.as_deref())?,
        Cmd::Bases { n } => cmd_bases(&ctx, *n)?,
    };
    match &cli.out {
        Some(path) => std::fs::write(path, text)?,
        None => io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn json_line(v: &Value) -> String {
    format!("{v}\n")
}

fn cmd_alpha(ctx: &Ctx, q: Option<&str>, seq: Option<&str>, n: usize) -> Result<String, Failure> {
    let base = match (q, seq) {
        (_, Some(s)) => base_from_alpha(&ctx.seq(s)?, &ctx.tol)?,
        (Some(q), None) => ctx.base_literal(q)?,
        (None, None) => return Err(Failure::Usage("give --q or --seq".into())),
    };
    let digits = alpha_digits(&base, n)?;
    Ok(match ctx.format {
        Format::Json => json_line(&json!({ "digits": digits.to_string(), "base": base })),
        Format::Csv => format!(
            "digits,q_lo,q_hi\n{},{},{}\n",
            digits,
            to_decimal(base.lo(), ctx.places, Round::Down),
            to_decimal(base.hi(), ctx.places, Round::Up)
        ),
        Format::Plain if seq.is_some() => format!("{digits}\nq in {}\n", ctx.base(&base)),
        Format::Plain => format!("{digits}\n"),
    })
}

fn cmd_compose(ctx: &Ctx, a: &str, b: &str) -> Result<String, Failure> {
    let a = ctx.fundamental(a)?;
    let b = FundamentalWord::new(Word::parse(Alphabet::BINARY, b)?)?;
    let c = compose(&a, &b)?;
    Ok(match ctx.format {
        Format::Json => json_line(&json!(c.to_string())),
        _ => format!("{c}\n"),
    })
}

fn cmd_decompose(ctx: &Ctx, c: &str) -> Result<String, Failure> {
    let dec = decompose(&ctx.fundamental(c)?);
    Ok(match ctx.format {
        Format::Csv => {
            let factors: Vec<String> = dec.factors().map(|w| w.to_string()).collect();
            format!("{}\n", factors.join(","))
        }
        _ => json_line(&serde_json::to_value(&dec).expect("serializable")),
    })
}

fn cmd_classify(ctx: &Ctx, c: &str) -> Result<String, Failure> {
    let class = classify(&ctx.fundamental(c)?);
    Ok(match ctx.format {
        Format::Json => json_line(&json!(class.tag())),
        _ => format!("{class}\n"),
    })
}

fn parse_region(text: &str) -> Result<BaseRange, Failure> {
    let (lo, hi) = text
        .split_once(',')
        .ok_or_else(|| Failure::Usage(format!("region {text:?} must be written lo,hi")))?;
    Ok((parse_rational(lo)?, parse_rational(hi)?))
}

fn plateau_csv(ctx: &Ctx, records: &[PlateauRecord]) -> String {
    let mut out = String::from("word,class,kind,ladder_index,q_l_lo,q_l_hi,q_r_lo,q_r_hi,h_l_lo,h_l_hi,h_r_lo,h_r_hi\n");
    for r in records {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            r.word,
            r.class,
            r.kind.tag(),
            r.ladder_index.map(|n| n.to_string()).unwrap_or_default(),
            to_decimal(r.q_l.lo(), ctx.places, Round::Down),
            to_decimal(r.q_l.hi(), ctx.places, Round::Up),
            to_decimal(r.q_r.lo(), ctx.places, Round::Down),
            to_decimal(r.q_r.hi(), ctx.places, Round::Up),
            to_decimal(&r.entropy.lo, ctx.places, Round::Down),
            to_decimal(&r.entropy.hi, ctx.places, Round::Up),
            to_decimal(&r.entropy_right.lo, ctx.places, Round::Down),
            to_decimal(&r.entropy_right.hi, ctx.places, Round::Up),
        );
    }
    out
}

fn cmd_plateaus(ctx: &Ctx, region: Option<&str>) -> Result<String, Failure> {
    if ctx.max_len < 2 {
        return Err(Failure::Usage("--max-len must be at least 2".into()));
    }
    let region = region.map(parse_region).transpose()?;
    let records = enumerate_plateaus(ctx.alphabet, ctx.max_len, region.as_ref())?;
    Ok(match ctx.format {
        Format::Json => plateau_json_lines(ctx.alphabet, ctx.max_len, region.as_ref(), &records),
        Format::Csv => plateau_csv(ctx, &records),
        Format::Plain => {
            let meta = plateau_meta(ctx.alphabet, ctx.max_len, region.as_ref(), records.len());
            let mut out = format!("# {}\n", meta["meta"]["completeness"].as_str().unwrap_or_default());
            for r in &records {
                let step = r.ladder_index.map(|n| format!("I_{n}")).unwrap_or_else(|| "-".into());
                let _ = writeln!(
                    out,
                    "{} {} {} {} q_L={} q_R={} h_L={} h_R={}",
                    r.word,
                    r.class,
                    r.kind.tag(),
                    step,
                    ctx.base(&r.q_l),
                    ctx.base(&r.q_r),
                    ctx.interval(&r.entropy.lo, &r.entropy.hi),
                    ctx.interval(&r.entropy_right.lo, &r.entropy_right.hi)
                );
            }
            out
        }
    })
}

fn staircase_json(table: &Staircase) -> String {
    let rows: Vec<Value> = table
        .rows
        .iter()
        .map(|r| {
            json!({
                "q": r.q,
                "entropy": r.entropy,
                "dim": { "lo": to_fraction(&r.dimension.0), "hi": to_fraction(&r.dimension.1) },
                "status": r.status.tag(),
            })
        })
        .collect();
    json_line(&json!({ "monotone": table.monotone, "rows": rows }))
}

fn cmd_staircase(ctx: &Ctx, from: Option<&str>, to: Option<&str>, steps: usize, image: bool) -> Result<String, Failure> {
    if image {
        let reports = bridge_table(ctx.alphabet, ctx.max_len, &BigRational::new(1.into(), 1_000_000.into()))?;
        if ctx.format == Format::Json {
            return Ok(json_line(&serde_json::to_value(&reports).expect("serializable")));
        }
        let mut out = String::from("q_lo,q_hi,h_lo,h_hi,image_lo,image_hi,image_h_lo,image_h_hi,factor,agree\n");
        for r in &reports {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{}",
                to_decimal(r.q.lo(), ctx.places, Round::Down),
                to_decimal(r.q.hi(), ctx.places, Round::Up),
                to_decimal(&r.direct.lo, ctx.places, Round::Down),
                to_decimal(&r.direct.hi, ctx.places, Round::Up),
                to_decimal(r.image.lo(), ctx.places, Round::Down),
                to_decimal(r.image.hi(), ctx.places, Round::Up),
                to_decimal(&r.image_entropy.lo, ctx.places, Round::Down),
                to_decimal(&r.image_entropy.hi, ctx.places, Round::Up),
                to_fraction(&r.factor),
                r.agree,
            );
        }
        return Ok(out);
    }
    let top = int(ctx.alphabet.max_digit() as i64 + 1);
    let from = match from {
        Some(t) => parse_rational(t)?,
        None => int(1) + BigRational::new((ctx.alphabet.max_digit() as i64).into(), 2.into()),
    };
    let to = match to {
        Some(t) => parse_rational(t)?,
        None => top,
    };
    if from > to {
        return Err(Failure::Usage("--from must not exceed --to".into()));
    }
    let grid = uniform_grid(ctx.alphabet, &from, &to, steps, &ctx.tol)?;
    let plateaus = enumerate_plateaus(ctx.alphabet, ctx.max_len, Some(&(from, to)))?;
    let table = staircase(ctx.alphabet, &grid, ctx.depth, &plateaus)?;
    if !table.monotone {
        eprintln!("warning: staircase bounds are not monotone");
    }
    let places = Staircase::default_places().max(ctx.places.min(20));
    Ok(match ctx.format {
        Format::Json => staircase_json(&table),
        _ => {
            let csv = table.to_csv(places);
            debug_assert!(csv.starts_with(STAIRCASE_HEADER));
            csv
        }
    })
}

fn cmd_entropy(ctx: &Ctx, seq: &str) -> Result<String, Failure> {
    let alpha = ctx.seq(seq)?;
    let aut = SubshiftAutomaton::for_quasi_greedy(&alpha)?;
    let h = entropy(&aut, &default_entropy_tolerance());
    let q = base_from_alpha(&alpha, &ctx.tol)?;
    let (dlo, dhi) = hausdorff_dimension(&q, &h);
    Ok(match ctx.format {
        Format::Json => json_line(&json!({
            "alpha": alpha.to_string(),
            "q": q,
            "entropy": h,
            "dim": { "lo": to_fraction(&dlo), "hi": to_fraction(&dhi) },
        })),
        Format::Csv => format!(
            "alpha,h_lo,h_hi,dim_lo,dim_hi\n{},{},{},{},{}\n",
            alpha,
            to_decimal(&h.lo, ctx.places, Round::Down),
            to_decimal(&h.hi, ctx.places, Round::Up),
            to_decimal(&dlo, ctx.places, Round::Down),
            to_decimal(&dhi, ctx.places, Round::Up)
        ),
        Format::Plain => format!(
            "h in {}\ndim in {}\nq in {}\n",
            ctx.interval(&h.lo, &h.hi),
            ctx.interval(&dlo, &dhi),
            ctx.base(&q)
        ),
    })
}

fn cmd_transitive(ctx: &Ctx, seq: &str, connect: Option<&[String]>) -> Result<String, Failure> {
    let aut = build_automaton(&ctx.seq(seq)?)?;
    let report = transitivity_report(&aut);
    let witness = match connect {
        Some([u, v]) => {
            let (u, v) = (ctx.word(u)?, ctx.word(v)?);
            let w = connect_words(&aut, &u, &v)?;
            Some(w.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(if ctx.alphabet.max_digit() > 9 { "," } else { "" }))
        }
        _ => None,
    };
    Ok(match ctx.format {
        Format::Json => {
            let mut v = serde_json::to_value(&report).expect("serializable");
            if let Some(w) = &witness {
                v["connecting_word"] = json!(w);
            }
            json_line(&v)
        }
        Format::Csv => format!(
            "transitive,states,components,nontrivial_components,bottom_components\n{},{},{},{},{}\n",
            report.transitive, report.states, report.components, report.nontrivial_components, report.bottom_components
        ),
        Format::Plain => {
            let mut out = format!("transitive: {}\n", report.transitive);
            if let Some(w) = witness {
                let _ = writeln!(out, "connecting word: \"{w}\"");
            }
            out
        }
    })
}

fn cmd_bases(ctx: &Ctx, n: u32) -> Result<String, Failure> {
    let mut named: Vec<(String, BaseEnclosure)> = vec![
        ("q_G".into(), special_base(ctx.alphabet, SpecialBase::Golden, &ctx.tol)),
        ("q_KL".into(), special_base(ctx.alphabet, SpecialBase::KomornikLoreti, &ctx.tol)),
        ("q_T".into(), special_base(ctx.alphabet, SpecialBase::Transitive, &ctx.tol)),
    ];
    for k in 2..=n {
        named.push((format!("q_{k}'"), special_base(ctx.alphabet, SpecialBase::Prime(k), &ctx.tol)));
    }
    Ok(match ctx.format {
        Format::Json => {
            let rows: Vec<Value> = named.iter().map(|(name, q)| json!({ "name": name, "q": q })).collect();
            json_line(&Value::Array(rows))
        }
        Format::Csv => {
            let mut out = String::from("name,q_lo,q_hi\n");
            for (name, q) in &named {
                let _ = writeln!(
                    out,
                    "{name},{},{}",
                    to_decimal(q.lo(), ctx.places, Round::Down),
                    to_decimal(q.hi(), ctx.places, Round::Up)
                );
            }
            out
        }
        Format::Plain => {
            let width = named.iter().map(|(n, _)| n.len()).max().unwrap_or(0);
            named.iter().map(|(name, q)| format!("{name:<width$} {}\n", ctx.base(q))).collect()
        }
    })
}
