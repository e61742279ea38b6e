//! `sturm` command line: one subcommand per library operation plus a seeded
//! property runner.

use clap::{Parser, Subcommand};

use sturm_core::dynamics::{dominant_eigen, fixed_point_stream, intercept_class};
use sturm_core::morphisms::conjugates_of;
use sturm_core::representation::Membership;
use sturm_core::sqroot::{
    sqrt_fixing_morphism, square_root_stream, SquareSplitter, DEFAULT_SCAN_BOUND,
};
use sturm_core::words::{iet_code, mechanical};
use sturm_core::{
    compose, decompose, is_in_e, rep, BinaryMorphism, Boundary, Error, FiniteWord, GenWord,
    IncidenceMatrix, Mat3, QuadExt, SlopeIntercept,
};

pub mod verify;

#[derive(Debug, Parser)]
#[command(
    name = "sturm",
    version,
    about = "Sturmian morphisms and their 3x3 representation"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Binary morphism of a generator word, e.g. DGG or G'D'
    Compose { genword: String },
    /// Apply a morphism `0->w0,1->w1` to a binary word
    Apply { morphism: String, word: String },
    /// 3x3 representation matrix of a generator word
    Rep { genword: String },
    /// Factor a matrix of the monoid into generators
    Decompose {
        #[arg(long)]
        matrix: String,
    },
    /// Decide membership, naming the first violated constraint
    Membership {
        #[arg(long)]
        matrix: String,
    },
    /// Dominant eigen-parameters and a prefix of the fixed point
    FixedPoint {
        genword: String,
        #[arg(long, default_value_t = 100)]
        length: usize,
    },
    /// Prefix of a mechanical sequence
    Generate {
        #[arg(long)]
        slope: String,
        #[arg(long)]
        intercept: String,
        #[arg(long, default_value = "lower")]
        kind: String,
        #[arg(long, default_value_t = 100)]
        length: usize,
    },
    /// All Sturmian morphisms with a given 2x2 incidence matrix
    Conjugates {
        #[arg(long)]
        matrix: String,
    },
    /// Square root of the fixed point of a generator word
    Sqrt {
        #[arg(long)]
        genword: String,
        #[arg(long, default_value_t = 100)]
        length: usize,
        #[arg(long, default_value_t = DEFAULT_SCAN_BOUND)]
        bound: usize,
    },
    /// Palindromic morphism fixing the square root of a characteristic fixed point
    SqrtMorphism { genword: String },
    /// Seeded property checks
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

enum Failure {
    Parse(String),
    Domain(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        if e.is_parse() {
            Failure::Parse(e.to_string())
        } else {
            Failure::Domain(e.to_string())
        }
    }
}

fn parse<T: std::str::FromStr<Err = Error>>(s: &str) -> Result<T, Failure> {
    s.parse::<T>().map_err(|e| Failure::Parse(e.to_string()))
}

/// Runs `sturm` on `argv` (including the program name); returns the exit code
/// and everything that would be printed.
pub fn run<I, T>(argv: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            return (code, e.render().to_string());
        }
    };
    match execute(cli.cmd) {
        Ok((code, out)) => (code, out),
        Err(Failure::Parse(msg)) => (2, format!("error: {msg}\n")),
        Err(Failure::Domain(msg)) => (1, format!("error: {msg}\n")),
    }
}

fn lines(v: impl IntoIterator<Item = String>) -> String {
    v.into_iter().map(|l| l + "\n").collect()
}

fn execute(cmd: Cmd) -> Result<(i32, String), Failure> {
    let out = match cmd {
        Cmd::Compose { genword } => lines([compose(&parse::<GenWord>(&genword)?).to_string()]),
        Cmd::Apply { morphism, word } => {
            let phi: BinaryMorphism = parse(&morphism)?;
            lines([phi.apply(&parse::<FiniteWord>(&word)?).to_string()])
        }
        Cmd::Rep { genword } => lines([rep(&parse::<GenWord>(&genword)?).to_string()]),
        Cmd::Decompose { matrix } => {
            let w = decompose(&parse::<Mat3>(&matrix)?)?;
            lines([if w.is_empty() {
                "1".to_string()
            } else {
                w.to_string()
            }])
        }
        Cmd::Membership { matrix } => match is_in_e(&parse::<Mat3>(&matrix)?) {
            Membership::Member => lines(["member".to_string()]),
            Membership::Violates(c) => lines([format!("not a member: {c}")]),
        },
        Cmd::FixedPoint { genword, length } => {
            let w: GenWord = parse(&genword)?;
            let e = dominant_eigen(&w)?;
            let prefix = fixed_point_stream(&w)?.take_word(length)?;
            lines([
                e.to_string(),
                format!("class: {}", intercept_class(&w)),
                format!("prefix: {prefix}"),
            ])
        }
        Cmd::Generate {
            slope,
            intercept,
            kind,
            length,
        } => {
            let si = SlopeIntercept::new(
                parse::<QuadExt>(&slope)?,
                parse(&intercept)?,
                parse::<Boundary>(&kind)?,
            )?;
            let word = mechanical(&si, length);
            debug_assert_eq!(
                Ok(word.clone()),
                iet_code(&sturm_core::dynamics::params_of(&si), length)
            );
            lines([word.to_string()])
        }
        Cmd::Conjugates { matrix } => {
            let m: IncidenceMatrix = parse(&matrix)?;
            let family = conjugates_of(&m)?;
            lines(family.iter().map(|phi| phi.to_string()))
        }
        Cmd::Sqrt {
            genword,
            length,
            bound,
        } => {
            let w: GenWord = parse(&genword)?;
            let mut splitter = SquareSplitter::new(fixed_point_stream(&w)?, bound);
            let mut blocks = Vec::new();
            let mut covered = 0;
            while covered < length {
                let r = splitter.next_root()?;
                covered += r.len();
                blocks.push(format!("{r}^2"));
            }
            let root = square_root_stream(fixed_point_stream(&w)?, bound).take_word(length)?;
            lines([
                format!("blocks: {}", blocks.join(" ")),
                format!("root: {root}"),
            ])
        }
        Cmd::SqrtMorphism { genword } => {
            lines([sqrt_fixing_morphism(&parse(&genword)?)?.to_string()])
        }
        Cmd::Verify {
            suite,
            samples,
            seed,
        } => {
            let suites = verify::select(&suite).map_err(Failure::Parse)?;
            let report = verify::run(&suites, samples, seed);
            let code = if report.all_passed() { 0 } else { 1 };
            return Ok((code, report.to_string()));
        }
    };
    Ok((0, out))
}
