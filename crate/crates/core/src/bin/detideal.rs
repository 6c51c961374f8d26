use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use detideal::coeff::CoeffField;
use detideal::detlab::{MatrixKind, SymbolicMatrix};
use detideal::error::Error;
use detideal::groebner::{GbStats, DEFAULT_MAX_PAIRS, DEFAULT_MAX_POLY_LEN};
use detideal::ideal::Ideal;
use detideal::ring::{MonomialOrder, Polynomial};
use detideal::verify::{self, ClaimId, Config, Instance, Report, Status};

const EXIT_REFUTED: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_BUDGET: u8 = 3;

#[derive(Parser)]
#[command(name = "detideal", version, about = "Gröbner-basis checks for the ideals I1(XY)")]
struct Cli {
    /// Coefficient field: qq, gf, gf(p)
    #[arg(long, global = true, default_value = "qq")]
    field: String,
    /// Maximum number of critical pairs per Buchberger run
    #[arg(long, global = true, env = "DETIDEAL_MAX_PAIRS", default_value_t = DEFAULT_MAX_PAIRS)]
    max_pairs: u64,
    /// Maximum number of terms in an intermediate polynomial
    #[arg(long, global = true, env = "DETIDEAL_MAX_POLY_LEN", default_value_t = DEFAULT_MAX_POLY_LEN)]
    max_poly_len: usize,
    /// Wall-clock limit per command or per verified instance, in seconds (0 = none)
    #[arg(long, global = true, env = "DETIDEAL_TIMEOUT", default_value_t = 120)]
    timeout: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args, Clone)]
struct Shape {
    /// generic, symmetric or skew
    #[arg(long, default_value = "generic")]
    kind: String,
    #[arg(long)]
    n: usize,
    /// Number of rows (defaults to n)
    #[arg(long)]
    m: Option<usize>,
}

#[derive(Args, Clone)]
struct IdealArgs {
    /// Generators separated by commas or newlines; `det`, `minor[i]`, `g[i]` are allowed.
    /// Defaults to g[1..m].
    #[arg(long)]
    ideal: Option<String>,
    /// Read generators from a file instead
    #[arg(long, conflicts_with = "ideal")]
    file: Option<std::path::PathBuf>,
    /// Append det (square) or the row-deleted minors ((n+1)xn)
    #[arg(long)]
    with_det: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the matrix, the entries of XY and related polynomials
    Construct {
        #[command(flatten)]
        shape: Shape,
        #[arg(long)]
        show_g: bool,
        #[arg(long)]
        show_det: bool,
        #[arg(long)]
        show_minors: bool,
        /// Also print the completed form of an order preset
        #[arg(long)]
        order: Option<String>,
    },
    /// Reduced Gröbner basis of an ideal
    Gb {
        #[command(flatten)]
        shape: Shape,
        #[command(flatten)]
        ideal: IdealArgs,
        /// Preset (grob, regseq, regseq-generic, regseq-skew) or `order lex: ...`
        #[arg(long, default_value = "grob")]
        order: String,
    },
    /// Ideal membership
    Member {
        #[command(flatten)]
        shape: Shape,
        #[command(flatten)]
        ideal: IdealArgs,
        #[arg(long)]
        poly: String,
        /// Exit 1 when the answer differs
        #[arg(long)]
        expect: Option<bool>,
    },
    /// Intersection of two ideals
    Intersect {
        #[command(flatten)]
        shape: Shape,
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
    },
    /// Saturation I : f^inf
    Saturate {
        #[command(flatten)]
        shape: Shape,
        #[command(flatten)]
        ideal: IdealArgs,
        #[arg(long)]
        by: String,
    },
    /// Run claim checks
    Verify(VerifyArgs),
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, conflicts_with = "all", required_unless_present = "all")]
    claim: Option<String>,
    #[arg(long)]
    all: bool,
    /// Largest n in the default grid
    #[arg(long, default_value_t = 3)]
    max_n: usize,
    #[arg(long)]
    kind: Option<String>,
    /// Run a single instance of --claim at this n
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    t: Option<usize>,
    #[arg(long)]
    k: Option<u32>,
    #[arg(long)]
    i: Option<usize>,
    /// Override the expected status
    #[arg(long)]
    expect: Option<String>,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

struct Session {
    field: CoeffField,
    config: Config,
    format: Format,
}

impl Session {
    fn matrix(&self, s: &Shape) -> Result<SymbolicMatrix, Error> {
        let kind: MatrixKind = s.kind.parse()?;
        SymbolicMatrix::build(kind, s.m.unwrap_or(s.n), s.n, self.field)
    }

    fn ideal(&self, x: &SymbolicMatrix, a: &IdealArgs) -> Result<Ideal, Error> {
        let mut gens = match (&a.ideal, &a.file) {
            (Some(text), _) => x.parse_list(text)?,
            (None, Some(path)) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))?;
                x.parse_list(&text)?
            }
            (None, None) => x.ideal_generators(false)?,
        };
        if a.with_det {
            gens.extend(x.ideal_generators(true)?.into_iter().skip(x.rows()));
        }
        Ok(self.wrap(x, gens))
    }

    fn wrap(&self, x: &SymbolicMatrix, gens: Vec<Polynomial>) -> Ideal {
        Ideal::new(x.ring().clone(), gens).with_budget(self.config.budget(Instant::now()))
    }

    fn print_ideal(&self, x: &SymbolicMatrix, what: &str, ideal: &Ideal, order: &MonomialOrder) -> Result<(), Error> {
        let gb = ideal.groebner(order)?;
        let ring = x.ring();
        let basis: Vec<String> = gb.basis().iter().map(|g| ring.fmt_poly(g, Some(order))).collect();
        let stats = ideal.stats();
        match self.format {
            Format::Json => println!(
                "{}",
                json!({"object": what, "order": order.describe(ring), "basis": basis, "stats": stats})
            ),
            Format::Text => {
                println!("{}", order.describe(ring));
                for b in &basis {
                    println!("{b}");
                }
                print_stats(&stats);
            }
        }
        Ok(())
    }
}

fn print_stats(s: &GbStats) {
    println!(
        "# basis {} pairs {} reduced {} coprime-skipped {} chain-skipped {} zero {} max-len {}",
        s.basis_len, s.pairs_created, s.pairs_reduced, s.coprime_skipped, s.chain_skipped, s.zero_reductions, s.max_poly_len
    );
}

fn exit_for(e: &Error) -> u8 {
    if e.is_budget() {
        EXIT_BUDGET
    } else {
        EXIT_USAGE
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let field: CoeffField = match cli.field.parse() {
        Ok(f) => f,
        Err(e) => {
            eprintln!("error: --field: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let session = Session {
        field,
        config: Config {
            field,
            max_pairs: cli.max_pairs,
            max_poly_len: cli.max_poly_len,
            timeout: (cli.timeout > 0).then(|| Duration::from_secs(cli.timeout)),
        },
        format: cli.format,
    };
    match dispatch(&session, cli.cmd) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_for(&e))
        }
    }
}

fn dispatch(s: &Session, cmd: Cmd) -> Result<u8, Error> {
    match cmd {
        Cmd::Construct { shape, show_g, show_det, show_minors, order } => construct(s, &shape, show_g, show_det, show_minors, order),
        Cmd::Gb { shape, ideal, order } => {
            let x = s.matrix(&shape)?;
            let order = x.resolve_order(&order)?;
            let i = s.ideal(&x, &ideal)?;
            s.print_ideal(&x, "groebner-basis", &i, &order)?;
            Ok(0)
        }
        Cmd::Member { shape, ideal, poly, expect } => {
            let x = s.matrix(&shape)?;
            let i = s.ideal(&x, &ideal)?;
            let p = x.parse_poly(&poly)?;
            let member = i.member(&p)?;
            match s.format {
                Format::Json => println!("{}", json!({"member": member, "poly": x.ring().fmt_poly(&p, None)})),
                Format::Text => println!("{member}"),
            }
            Ok(match expect {
                Some(e) if e != member => EXIT_REFUTED,
                _ => 0,
            })
        }
        Cmd::Intersect { shape, left, right } => {
            let x = s.matrix(&shape)?;
            let a = s.wrap(&x, x.parse_list(&left)?);
            let b = s.wrap(&x, x.parse_list(&right)?);
            let meet = a.intersect(&b)?;
            s.print_ideal(&x, "intersection", &meet, &meet.canonical_order())?;
            Ok(0)
        }
        Cmd::Saturate { shape, ideal, by } => {
            let x = s.matrix(&shape)?;
            let i = s.ideal(&x, &ideal)?;
            let f = x.parse_poly(&by)?;
            let sat = i.saturate(&f)?;
            s.print_ideal(&x, "saturation", &sat, &sat.canonical_order())?;
            Ok(0)
        }
        Cmd::Verify(args) => run_verify(s, args),
    }
}

fn construct(s: &Session, shape: &Shape, show_g: bool, show_det: bool, show_minors: bool, order: Option<String>) -> Result<u8, Error> {
    let x = s.matrix(shape)?;
    let ring = x.ring();
    let any = show_g || show_det || show_minors || order.is_some();
    let rows: Vec<Vec<String>> = (1..=x.rows())
        .map(|i| (1..=x.cols()).map(|j| ring.fmt_poly(&x.entry(i, j), None)).collect())
        .collect();
    let g: Vec<String> = x.xy_entries().iter().map(|p| ring.fmt_poly(p, None)).collect();
    let det = if show_det { Some(ring.fmt_poly(&x.determinant()?, None)) } else { None };
    let minors: Option<Vec<String>> = if show_minors {
        Some(
            (1..=x.rows())
                .map(|i| x.row_deleted_minor(i).map(|p| ring.fmt_poly(&p, None)))
                .collect::<Result<_, _>>()?,
        )
    } else {
        None
    };
    let order = order.map(|o| x.resolve_order(&o)).transpose()?.map(|o| o.describe(ring));
    match s.format {
        Format::Json => println!(
            "{}",
            json!({
                "kind": x.kind(), "m": x.rows(), "n": x.cols(), "field": s.field.to_string(),
                "matrix": rows, "g": g, "det": det, "minors": minors, "order": order,
            })
        ),
        Format::Text => {
            if !any || !show_g {
                println!("# {} over {}", x.describe(), s.field);
                for r in &rows {
                    println!("[ {} ]", r.join(", "));
                }
            }
            if !any || show_g {
                for (i, p) in g.iter().enumerate() {
                    println!("g[{}] = {p}", i + 1);
                }
            }
            if let Some(d) = det {
                println!("det = {d}");
            }
            for (i, p) in minors.iter().flatten().enumerate() {
                println!("minor[{}] = {p}", i + 1);
            }
            if let Some(o) = order {
                println!("{o}");
            }
        }
    }
    Ok(0)
}

fn instances(args: &VerifyArgs) -> Result<Vec<Instance>, Error> {
    let kind: Option<MatrixKind> = args.kind.as_deref().map(str::parse).transpose()?;
    if args.all {
        return Ok(verify::default_grid(args.max_n)
            .into_iter()
            .filter(|i| kind.is_none_or(|k| i.kind == k))
            .collect());
    }
    let claim: ClaimId = args.claim.as_deref().expect("clap requires --claim").parse()?;
    let Some(n) = args.n else {
        let grid: Vec<Instance> = verify::grid_for(claim, args.max_n)
            .into_iter()
            .filter(|i| kind.is_none_or(|k| i.kind == k))
            .filter(|i| args.t.is_none_or(|t| i.t == Some(t)))
            .filter(|i| args.k.is_none_or(|k| i.k == Some(k)))
            .filter(|i| args.i.is_none_or(|v| i.i == Some(v)))
            .collect();
        return Ok(grid);
    };
    let mut inst = Instance::new(claim, kind.unwrap_or(MatrixKind::Generic), n);
    if let Some(m) = args.m {
        inst = inst.shape(m, n);
    }
    inst.t = args.t;
    inst.i = args.i;
    inst.k = args.k.or((claim == ClaimId::TorsionfreeNecessary).then_some(2));
    Ok(vec![inst])
}

fn run_verify(s: &Session, args: VerifyArgs) -> Result<u8, Error> {
    let expect: Option<Status> = args.expect.as_deref().map(str::parse).transpose()?;
    let list = instances(&args)?;
    if list.is_empty() {
        return Err(Error::InvalidArgument("no instances match".into()));
    }
    let mut reports: Vec<Report> = verify::run_all(&list, &s.config, args.jobs)?;
    if let Some(e) = expect {
        reports = reports.into_iter().map(|r| r.with_expected(vec![e])).collect();
    }
    let unexpected: Vec<&Report> = reports.iter().filter(|r| !r.as_expected).collect();
    match s.format {
        Format::Json => {
            for r in &reports {
                println!("{}", r.to_json());
            }
            println!("{}", json!({"summary": {"reports": reports.len(), "unexpected": unexpected.len()}}));
        }
        Format::Text => {
            if reports.len() == 1 {
                print!("{}", reports[0].render_text());
            } else {
                for r in &reports {
                    println!("{}", r.summary_line());
                }
            }
            println!("{} report(s), {} unexpected", reports.len(), unexpected.len());
        }
    }
    Ok(if unexpected.is_empty() {
        0
    } else if unexpected.iter().all(|r| r.status == Status::BudgetExceeded) {
        EXIT_BUDGET
    } else {
        EXIT_REFUTED
    })
}
