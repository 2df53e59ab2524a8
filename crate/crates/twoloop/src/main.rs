//! Command-line surface for the 2-loop calculus.
//!
//! Exit codes: 0 success, 1 domain error, 2 parse error, 3 internal
//! invariant violation (e.g. a 1/12-integrality failure in a scan).

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num_rational::BigRational;

use twoloop::covers::{self, ExponentFilterLift};
use twoloop::freealg;
use twoloop::laurent::LaurentPoly;
use twoloop::rozansky::{self, MonomialMatrix};
use twoloop::surgery::{self, ClasperData};
use twoloop::theta::{self, ThetaElement};

#[derive(Parser)]
#[command(name = "twoloop", version, about = "2-loop diagram calculus")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Canonicalize an exponent triple to its basis pair.
    Canon {
        /// Triple "m,n,k" of edge exponents.
        #[arg(long)]
        triple: String,
    },
    /// Reduce a dumbbell diagram to the theta basis.
    Dumbbell {
        /// Left loop color.
        #[arg(long)]
        p: String,
        /// Central edge color.
        #[arg(long, default_value = "1")]
        r: String,
        /// Right loop color.
        #[arg(long)]
        q: String,
        /// Common denominator.
        #[arg(long, default_value = "1")]
        delta: String,
    },
    /// Hair substitution of a theta element, printed as "p q coeff" lines.
    Hair {
        /// Theta-element file ("m n coeff" lines).
        #[arg(long)]
        input: PathBuf,
        /// Total truncation degree.
        #[arg(long, default_value_t = 12)]
        degree: u32,
        /// Optional denominator to expand through the substitution.
        #[arg(long)]
        delta: Option<String>,
    },
    /// Verify the tangle-product and Campbell-Hausdorff identities.
    BchVerify,
    /// Apply the single-clasper surgery formula.
    Surgery {
        /// Leaf pairing file: line 1 "3", three rows of numerators
        /// separated by ';', optional final line with the denominator.
        #[arg(long)]
        pairing: PathBuf,
        /// Theta-element file with the Milnor term.
        #[arg(long)]
        mu: PathBuf,
    },
    /// Evaluate the matrix pipeline on one monomial matrix.
    Phi {
        /// Matrix file: line 1 is n, then n rows separated by ';'.
        #[arg(long)]
        matrix: PathBuf,
    },
    /// Scan the whole monomial class and write a report.
    Scan {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        max_exp: i64,
        /// Report file path.
        #[arg(long)]
        out: PathBuf,
    },
    /// Branched-cover arithmetic for a normalized Alexander polynomial.
    Cover {
        /// File containing the polynomial.
        #[arg(long)]
        delta: PathBuf,
        #[arg(long)]
        r: u32,
        /// Equivariant signature pair "s1,s2" (rationals).
        #[arg(long)]
        sigma: Option<String>,
        /// Optional theta-element file for the divisibility verdict.
        #[arg(long)]
        x: Option<PathBuf>,
    },
}

enum CliError {
    Domain(String),
    Parse(String),
    Invariant(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Domain(_) => 1,
            CliError::Parse(_) => 2,
            CliError::Invariant(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Domain(m) | CliError::Parse(m) | CliError::Invariant(m) => m,
        }
    }
}

fn domain<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Domain(e.to_string())
}

fn parse_err<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Parse(e.to_string())
}

fn read_file(path: &PathBuf) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Parse(format!("{}: {}", path.display(), e)))
}

fn parse_poly(s: &str) -> Result<LaurentPoly, CliError> {
    s.trim().parse().map_err(parse_err)
}

fn parse_matrix_file(
    text: &str,
) -> Result<(Vec<Vec<LaurentPoly>>, Option<LaurentPoly>), CliError> {
    let mut lines = text
        .lines()
        .filter(|l| !l.trim().is_empty() && !l.trim_start().starts_with('#'));
    let n: usize = lines
        .next()
        .ok_or_else(|| CliError::Parse("empty matrix file".into()))?
        .trim()
        .parse()
        .map_err(|_| CliError::Parse("first line must be the size n".into()))?;
    let mut rows = Vec::with_capacity(n);
    for i in 0..n {
        let line = lines
            .next()
            .ok_or_else(|| CliError::Parse(format!("missing row {}", i + 1)))?;
        let row: Result<Vec<LaurentPoly>, CliError> = line.split(';').map(parse_poly).collect();
        let row = row?;
        if row.len() != n {
            return Err(CliError::Parse(format!(
                "row {} has {} entries, expected {}",
                i + 1,
                row.len(),
                n
            )));
        }
        rows.push(row);
    }
    let trailing: Option<LaurentPoly> = match lines.next() {
        Some(l) => Some(parse_poly(l)?),
        None => None,
    };
    Ok((rows, trailing))
}

fn print_theta(x: &ThetaElement) {
    let lines = x.to_lines();
    if lines.is_empty() {
        println!("0");
    } else {
        print!("{}", lines);
    }
}

fn lattice_verdicts(x: &ThetaElement) -> Result<String, CliError> {
    let mut out = String::new();
    for k in [1u32, 2, 12] {
        out.push_str(&format!(
            "in (1/{})-lattice: {}\n",
            k,
            x.in_lattice(k).map_err(domain)?
        ));
    }
    Ok(out)
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Canon { triple } => {
            let parts: Vec<&str> = triple.split(',').map(str::trim).collect();
            if parts.len() != 3 {
                return Err(CliError::Parse("triple must be \"m,n,k\"".into()));
            }
            let vals: Result<Vec<i64>, _> = parts.iter().map(|p| p.parse::<i64>()).collect();
            let vals = vals.map_err(parse_err)?;
            let (m, n) = theta::canonical_pair(vals[0], vals[1], vals[2]);
            println!("{} {} 1", m, n);
        }
        Command::Dumbbell { p, r, q, delta } => {
            let p = parse_poly(&p)?;
            let r = parse_poly(&r)?;
            let q = parse_poly(&q)?;
            let delta = parse_poly(&delta)?;
            let x = theta::reduce_dumbbell(&p, &r, &q, &delta).map_err(domain)?;
            print_theta(&x);
        }
        Command::Hair { input, degree, delta } => {
            let mut x = ThetaElement::parse_lines(&read_file(&input)?).map_err(parse_err)?;
            if let Some(d) = delta {
                x = x.with_denom(parse_poly(&d)?);
            }
            let h = theta::hair(&x, degree);
            for ((p, q), c) in h.iter() {
                println!("{} {} {}", p, q, c);
            }
        }
        Command::BchVerify => {
            if freealg::zt_identity_check() {
                println!("Z(T)=exp([a,b]): OK");
            } else {
                println!("Z(T)=exp([a,b]): FAILED");
                return Err(CliError::Invariant("tangle product identity failed".into()));
            }
            let ok = (1..=4).all(|p| freealg::bch_operator(p, 3) == freealg::exp_product(p, 3));
            if ok {
                println!("H(p)=BCH(p): OK for p=1..4");
            } else {
                println!("H(p)=BCH(p): FAILED");
                return Err(CliError::Invariant("BCH operator identity failed".into()));
            }
        }
        Command::Surgery { pairing, mu } => {
            let (rows, trailing) = parse_matrix_file(&read_file(&pairing)?)?;
            let delta = trailing.unwrap_or_else(LaurentPoly::one);
            let mu = ThetaElement::parse_lines(&read_file(&mu)?).map_err(parse_err)?;
            let data = ClasperData::new(rows, delta, mu).map_err(domain)?;
            let d = surgery::surgery_delta(&data).map_err(domain)?;
            print_theta(&d);
            print!("{}", lattice_verdicts(&d)?);
        }
        Command::Phi { matrix } => {
            let (rows, _) = parse_matrix_file(&read_file(&matrix)?)?;
            let w = MonomialMatrix::new(rows).map_err(domain)?;
            let v = rozansky::phi(&w).map_err(domain)?;
            print_theta(&v.value);
            println!("lambda = {}", v.casson);
            println!("casson integral: {}", v.casson_is_integer());
            println!("in (1/12)-lattice: {}", v.in_twelfth);
            println!("in (1/2)-lattice: {}", v.in_half);
        }
        Command::Scan { n, max_exp, out } => {
            if n == 0 {
                return Err(CliError::Domain("n must be positive".into()));
            }
            if max_exp < 0 {
                return Err(CliError::Domain("max-exp must be nonnegative".into()));
            }
            configure_workers();
            let report = rozansky::scan(n, max_exp).map_err(domain)?;
            fs::write(&out, report.render())
                .map_err(|e| CliError::Domain(format!("{}: {}", out.display(), e)))?;
            println!(
                "scanned {} matrices: twelfth_failures={} casson_failures={} half_failures={}",
                report.total,
                report.twelfth_failures.len(),
                report.casson_failures.len(),
                report.half_failures.len()
            );
            for h in &report.half_failures {
                println!("half-integrality candidate: {}", h);
            }
            if !report.twelfth_failures.is_empty() || !report.casson_failures.is_empty() {
                let repro = out.with_extension("failures");
                let mut text = String::new();
                for d in report
                    .twelfth_failures
                    .iter()
                    .chain(report.casson_failures.iter())
                {
                    text.push_str(d);
                    text.push('\n');
                }
                let _ = fs::write(&repro, text);
                return Err(CliError::Invariant(format!(
                    "integrality failure: reproducer written to {}",
                    repro.display()
                )));
            }
        }
        Command::Cover { delta, r, sigma, x } => {
            let d = parse_poly(&read_file(&delta)?)?;
            let c = covers::cover_quotient(&d, r).map_err(domain)?;
            println!("delta_r = {}", c.delta_r);
            println!("quotient = {}", c.quotient);
            println!("cover is ZHS: {}", c.cover_is_zhs);
            let sigma_pair = match sigma {
                Some(s) => {
                    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
                    if parts.len() != 2 {
                        return Err(CliError::Parse("sigma must be \"s1,s2\"".into()));
                    }
                    let a: BigRational = parts[0].parse().map_err(parse_err)?;
                    let b: BigRational = parts[1].parse().map_err(parse_err)?;
                    Some((a, b))
                }
                None => None,
            };
            if let Some(xfile) = x {
                let xval = ThetaElement::parse_lines(&read_file(&xfile)?).map_err(parse_err)?;
                let verdict = covers::casson_residue(&xval, &d, r, sigma_pair, &ExponentFilterLift)
                    .map_err(domain)?;
                println!("2*lift(x)(1) = {}", verdict.doubled_lift_value);
                println!("r divides it: {}", verdict.divisible);
                if let Some(eq) = verdict.sigma_equal {
                    println!("equal signatures: {}", eq);
                }
            }
        }
    }
    Ok(())
}

fn configure_workers() {
    if let Ok(v) = std::env::var("TWOLOOP_WORKERS") {
        if let Ok(n) = v.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}
