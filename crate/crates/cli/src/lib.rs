//! `mulgame` command line. [`run`] takes argv and the standard streams so
//! the whole interface can be driven in-process.

use std::fmt;
use std::io::{self, BufRead, Write};
use std::net::IpAddr;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mulgame::exact_count::{count_products, count_products_fast, uniform_limit_value, CountResult};
use mulgame::measure::{Domain, ExactSet, Interval};
use mulgame::simulator::{
    adjudicate, expected_profit, format_cents, simulate_sessions, Ledger, PayoutSchedule, Table, DEFAULT_RESOLUTION,
};
use mulgame::solver::{
    balanced_matrix_value, beta_n_gap, beta_n_gap_bound, build_game_matrix, fair_payout, fictitious_play,
    finite_group_value, game_value, v_y_set, FiniteGroup, GameMatrix, GroupSpec, DEFAULT_MAX_ITER, DEFAULT_TOL,
};
use mulgame::strategy::win_probability;
use mulgame::{IntervalUnion, Mantissa, RngStream, Strategy, StrategySpec};
use serde::Serialize;
use serde_json::json;

#[derive(Parser, Debug)]
#[command(name = "mulgame", version, about = "Leading-digit multiplication game: values, counts and simulations")]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Plain)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Plain,
    Csv,
    Json,
}

#[derive(Args, Debug, Clone)]
struct SetArgs {
    /// Winning leading digits, e.g. `1,2,3`.
    #[arg(long, value_delimiter = ',', conflicts_with = "intervals")]
    digits: Option<Vec<u8>>,
    /// Winning intervals `lo:hi,...`, e.g. `1:4,5:6`.
    #[arg(long)]
    intervals: Option<String>,
    /// Domain of `--intervals`: mantissa `[1,10)` or log `[0,1)`.
    #[arg(long, value_enum, default_value_t = DomainArg::Mantissa)]
    domain: DomainArg,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum DomainArg {
    Mantissa,
    Log,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Game value: the casino's win probability under optimal play.
    Value(SetArgs),
    /// Player return per unit stake that makes the game fair.
    FairPayout(SetArgs),
    /// Exact win counts over all pairs of n-digit numbers.
    Count {
        #[arg(short = 'n', default_value_t = 1)]
        n: u32,
        /// Enumerate every pair instead of threshold counting.
        #[arg(long)]
        naive: bool,
        #[command(flatten)]
        set: SetArgs,
    },
    /// Casino win probability when both sides pick uniformly on [1, 10).
    Limit {
        /// Also estimate by Monte Carlo with this many samples.
        #[arg(long)]
        samples: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        set: SetArgs,
    },
    /// The set of casino numbers that win against the player's `y`.
    Vy {
        #[arg(long)]
        y: f64,
        #[command(flatten)]
        set: SetArgs,
    },
    /// Distance of the n-digit Benford strategy from the game value.
    Gap {
        /// Digit count; all of 1..=5 when omitted.
        #[arg(short = 'n')]
        n: Option<u32>,
        /// Exact player number; otherwise `--samples` random numbers are tried.
        #[arg(long)]
        y: Option<String>,
        #[arg(long, default_value_t = 200)]
        samples: u32,
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        set: SetArgs,
    },
    /// Seeded playouts with payout accounting.
    Simulate {
        /// Casino strategy as JSON.
        #[arg(long, default_value = r#"{"type":"benford"}"#)]
        strategy: String,
        /// Player strategy as JSON.
        #[arg(long, default_value = r#"{"type":"uniform_mantissa"}"#)]
        player: String,
        #[arg(long, default_value_t = 100)]
        rounds: u64,
        #[arg(long, default_value_t = 1)]
        sessions: u64,
        #[arg(long, default_value = "100:140")]
        payout: String,
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        set: SetArgs,
    },
    /// Value certificate for a finite group game.
    Group {
        /// The cyclic group Z/k.
        #[arg(long, conflicts_with_all = ["dihedral", "table"])]
        cyclic: Option<usize>,
        /// The dihedral group of order 2k.
        #[arg(long, conflicts_with = "table")]
        dihedral: Option<usize>,
        /// Cayley table as JSON `{"order":k,"table":[[...]],"labels":[...]}`.
        #[arg(long)]
        table: Option<String>,
        /// Winning elements by index.
        #[arg(long, value_delimiter = ',')]
        w: Vec<usize>,
    },
    /// Solve a 0/1 payoff matrix by fictitious play.
    Matrix {
        /// Rows as JSON, e.g. `[[1,0],[0,1]]`; 1 means the row player wins.
        #[arg(long)]
        matrix: String,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[arg(long, default_value_t = DEFAULT_MAX_ITER)]
        max_iter: usize,
    },
    /// Run the HTTP server.
    Serve {
        #[arg(long)]
        addr: Option<IpAddr>,
        #[arg(long, default_value_t = 8080)]
        port: u16,
        /// Origin allowed by CORS; repeatable, `*` for any.
        #[arg(long)]
        allow_origin: Vec<String>,
        /// Directory of static files served at `/`.
        #[arg(long)]
        static_dir: Option<PathBuf>,
        /// Directory for per-session JSON-lines logs.
        #[arg(long)]
        snapshot_dir: Option<PathBuf>,
    },
    /// Play against the dealer from the terminal.
    Play {
        /// Dealer strategy as JSON.
        #[arg(long, default_value = r#"{"type":"benford"}"#)]
        strategy: String,
        #[arg(long, default_value = "100:140")]
        payout: String,
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        set: SetArgs,
    },
}

#[derive(Debug)]
pub enum CliError {
    /// Bad input; exit code 2.
    Invalid(String),
    Io(io::Error),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Invalid(m) => f.write_str(m),
            CliError::Io(e) => write!(f, "{e}"),
        }
    }
}

impl From<mulgame::Error> for CliError {
    fn from(e: mulgame::Error) -> Self {
        CliError::Invalid(e.to_string())
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Invalid(e.to_string())
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn invalid(m: impl Into<String>) -> CliError {
    CliError::Invalid(m.into())
}

impl SetArgs {
    fn build(&self) -> Result<IntervalUnion> {
        if let Some(d) = &self.digits {
            return Ok(IntervalUnion::from_digits(d)?);
        }
        let Some(spec) = &self.intervals else {
            return Ok(IntervalUnion::from_digits(&[1, 2, 3])?);
        };
        let mut parts = Vec::new();
        for piece in spec.split(',').filter(|p| !p.trim().is_empty()) {
            let (lo, hi) = piece.split_once(':').ok_or_else(|| invalid(format!("expected lo:hi, got {piece:?}")))?;
            let num = |t: &str| t.trim().parse::<f64>().map_err(|_| invalid(format!("bad endpoint {t:?}")));
            parts.push(Interval::new(num(lo)?, num(hi)?));
        }
        Ok(match self.domain {
            DomainArg::Mantissa => IntervalUnion::canonicalize(parts, Domain::Mantissa)?,
            DomainArg::Log => IntervalUnion::canonicalize(parts, Domain::Log)?.to_mantissa()?,
        })
    }
}

fn parse_strategy(s: &str) -> Result<Strategy> {
    let spec: StrategySpec = serde_json::from_str(s).map_err(|e| invalid(format!("strategy {s}: {e}")))?;
    Ok(spec.build()?)
}

fn resolve_seed(seed: Option<u64>) -> u64 {
    seed.unwrap_or_else(rand::random)
}

struct Out<'a, W: Write> {
    format: Format,
    w: &'a mut W,
}

impl<W: Write> Out<'_, W> {
    fn json<T: Serialize>(&mut self, v: &T) -> Result<()> {
        serde_json::to_writer_pretty(&mut *self.w, v)?;
        writeln!(self.w)?;
        Ok(())
    }

    fn line(&mut self, s: impl fmt::Display) -> Result<()> {
        writeln!(self.w, "{s}")?;
        Ok(())
    }

    /// Plain or CSV output of one header and rows; plain drops the header.
    fn table(&mut self, header: &str, rows: &[String]) -> Result<()> {
        if self.format == Format::Csv {
            self.line(header)?;
        }
        for r in rows {
            self.line(r)?;
        }
        Ok(())
    }
}

/// Parses `args` (program name first) and runs. Returns the exit code.
pub fn run<I, T>(args: I, input: &mut impl BufRead, out: &mut impl Write, err: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let _ = write!(if code == 0 { &mut *out as &mut dyn Write } else { err }, "{}", e.render());
            return code;
        }
    };
    match execute(cli, input, out) {
        Ok(()) => 0,
        Err(CliError::Invalid(m)) => {
            let _ = writeln!(err, "error: {m}");
            2
        }
        Err(CliError::Io(e)) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

fn execute(cli: Cli, input: &mut impl BufRead, w: &mut impl Write) -> Result<()> {
    let mut out = Out { format: cli.format, w };
    match cli.command {
        Command::Value(set) => {
            let ws = set.build()?;
            let v = game_value(&ws)?;
            match out.format {
                Format::Json => out.json(&json!({"winning_set": ws, "value": v})),
                _ => out.table("value", &[format!("{v:.10}")]),
            }
        }
        Command::FairPayout(set) => {
            let ws = set.build()?;
            let f = fair_payout(&ws)?;
            match out.format {
                Format::Json => out.json(&json!({"winning_set": ws, "fair_payout": f})),
                _ => out.table("fair_payout", &[format!("{f:.4}")]),
            }
        }
        Command::Count { n, naive, set } => {
            let ws = set.build()?;
            let c = if naive { count_products(n, &ws)? } else { count_products_fast(n, &ws)? };
            count_output(&mut out, &c)
        }
        Command::Limit { samples, seed, set } => limit(&mut out, &set.build()?, samples, seed),
        Command::Vy { y, set } => {
            let ws = set.build()?;
            let v = v_y_set(&ws, y)?;
            let beta = v.benford_measure()?;
            match out.format {
                Format::Json => out.json(&json!({"y": y, "v_y": v, "benford_measure": beta})),
                Format::Csv => {
                    let rows: Vec<String> = v.parts().iter().map(|p| format!("{},{}", p.lo, p.hi)).collect();
                    out.table("lo,hi", &rows)
                }
                Format::Plain => {
                    out.line(&v)?;
                    out.line(format!("measure: {beta:.10}"))
                }
            }
        }
        Command::Gap { n, y, samples, seed, set } => gap(&mut out, &set.build()?, n, y, samples, seed),
        Command::Simulate { strategy, player, rounds, sessions, payout, seed, set } => {
            let casino = parse_strategy(&strategy)?;
            let player = parse_strategy(&player)?;
            let payout: PayoutSchedule = payout.parse()?;
            simulate(&mut out, &set.build()?, casino, player, payout, rounds, sessions, seed)
        }
        Command::Group { cyclic, dihedral, table, w } => {
            let g = match (cyclic, dihedral, table) {
                (Some(k), _, _) => FiniteGroup::cyclic(k)?,
                (_, Some(k), _) => FiniteGroup::dihedral(k)?,
                (_, _, Some(t)) => FiniteGroup::from_spec(&serde_json::from_str::<GroupSpec>(&t)?)?,
                _ => return Err(invalid("one of --cyclic, --dihedral or --table is required")),
            };
            group(&mut out, &g, &w)
        }
        Command::Matrix { matrix, tol, max_iter } => {
            let m: GameMatrix = serde_json::from_str(&matrix)?;
            if tol.is_nan() || tol <= 0.0 {
                return Err(invalid("--tol must be positive"));
            }
            let r = fictitious_play(&m, tol, max_iter);
            let balanced = balanced_matrix_value(&m).ok();
            match out.format {
                Format::Json => out.json(&json!({"report": r, "balanced": balanced})),
                _ => out.table(
                    "value_lower,value_upper,value,iterations,converged",
                    &[format!(
                        "{:.6},{:.6},{:.6},{},{}",
                        r.value_lower,
                        r.value_upper,
                        r.value(),
                        r.iterations,
                        r.converged
                    )],
                ),
            }
        }
        Command::Serve { addr, port, allow_origin, static_dir, snapshot_dir } => {
            let opts = mulgame_server::ServerOptions { addr, port, allow_origin, static_dir, snapshot_dir };
            let rt = tokio::runtime::Runtime::new()?;
            Ok(rt.block_on(mulgame_server::serve(opts))?)
        }
        Command::Play { strategy, payout, seed, set } => {
            let dealer = parse_strategy(&strategy)?;
            let payout: PayoutSchedule = payout.parse()?;
            play(&mut out, input, &set.build()?, dealer, payout, resolve_seed(seed))
        }
    }
}

fn count_output<W: Write>(out: &mut Out<'_, W>, c: &CountResult) -> Result<()> {
    match out.format {
        Format::Json => out.json(&json!({"count": c, "ratio": c.ratio()})),
        Format::Plain => out.line(format!("{},{}", c.casino_wins, c.player_wins)),
        Format::Csv => {
            let hist: Vec<String> = c.histogram.iter().map(u64::to_string).collect();
            let header = format!("n,casino,player,ratio,{}", (1..=9).map(|d| format!("digit{d}")).collect::<Vec<_>>().join(","));
            out.table(&header, &[format!("{},{},{},{:.10},{}", c.n, c.casino_wins, c.player_wins, c.ratio(), hist.join(","))])
        }
    }
}

fn limit<W: Write>(out: &mut Out<'_, W>, ws: &IntervalUnion, samples: Option<u64>, seed: Option<u64>) -> Result<()> {
    let q = uniform_limit_value(ws)?;
    let p = q.value;
    let ratio = p / (1.0 - p);
    let mc = samples.map(|k| {
        let seed = resolve_seed(seed);
        let mut rng = RngStream::new(seed, 0);
        let hits = (0..k)
            .filter(|_| {
                let x = Strategy::UniformMantissa.sample(&mut rng);
                let y = Strategy::UniformMantissa.sample(&mut rng);
                let p = x * y;
                ws.contains(if p >= 10.0 { p / 10.0 } else { p })
            })
            .count();
        (seed, k, hits as f64 / k.max(1) as f64)
    });
    match out.format {
        Format::Json => out.json(&json!({
            "p": p,
            "ratio": ratio,
            "error_estimate": q.error_estimate,
            "monte_carlo": mc.map(|(seed, k, est)| json!({"seed": seed, "samples": k, "p": est})),
        })),
        Format::Plain => {
            out.line(format!("{p:.10},{ratio:.10}"))?;
            if let Some((seed, k, est)) = mc {
                out.line(format!("seed: {seed}"))?;
                out.line(format!("monte carlo ({k} samples): {est:.6}"))?;
            }
            Ok(())
        }
        Format::Csv => {
            let (header, row) = match mc {
                Some((seed, k, est)) => ("p,ratio,seed,samples,mc_p", format!("{p:.10},{ratio:.10},{seed},{k},{est:.6}")),
                None => ("p,ratio", format!("{p:.10},{ratio:.10}")),
            };
            out.table(header, &[row])
        }
    }
}

#[derive(Serialize)]
struct GapRow {
    n: u32,
    gap: f64,
    bound: f64,
}

fn gap<W: Write>(
    out: &mut Out<'_, W>,
    ws: &IntervalUnion,
    n: Option<u32>,
    y: Option<String>,
    samples: u32,
    seed: Option<u64>,
) -> Result<()> {
    let ns: Vec<u32> = n.map_or_else(|| (1..=5).collect(), |n| vec![n]);
    let (ys, seed) = match y {
        Some(s) => (vec![Mantissa::normalize_str(&s)?], None),
        None => {
            if samples == 0 {
                return Err(invalid("--samples must be positive"));
            }
            let seed = resolve_seed(seed);
            let mut rng = RngStream::new(seed, 0);
            let ys = (0..samples).map(|_| Strategy::UniformMantissa.draw(&mut rng, 12)).collect::<mulgame::Result<_>>()?;
            (ys, Some(seed))
        }
    };
    let mut rows = Vec::new();
    for n in ns {
        let mut sup = 0f64;
        for y in &ys {
            sup = sup.max(beta_n_gap(n, ws, y)?);
        }
        rows.push(GapRow { n, gap: sup, bound: beta_n_gap_bound(n) });
    }
    match out.format {
        Format::Json => out.json(&json!({"seed": seed, "samples": ys.len(), "rows": rows})),
        fmt => {
            if let (Some(s), Format::Plain) = (seed, fmt) {
                out.line(format!("seed: {s}"))?;
            }
            let lines: Vec<String> = rows
                .iter()
                .map(|r| match (seed, fmt) {
                    (Some(s), Format::Csv) => format!("{s},{},{:.3e},{:.1e}", r.n, r.gap, r.bound),
                    _ => format!("{},{:.3e},{:.1e}", r.n, r.gap, r.bound),
                })
                .collect();
            out.table(if seed.is_some() { "seed,n,gap,bound" } else { "n,gap,bound" }, &lines)
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn simulate<W: Write>(
    out: &mut Out<'_, W>,
    ws: &IntervalUnion,
    casino: Strategy,
    player: Strategy,
    payout: PayoutSchedule,
    rounds: u64,
    sessions: u64,
    seed: Option<u64>,
) -> Result<()> {
    if rounds == 0 || sessions == 0 {
        return Err(invalid("--rounds and --sessions must be positive"));
    }
    let seed = resolve_seed(seed);
    let expected = win_probability(&casino, &player, ws)
        .ok()
        .map(|p| rounds as f64 * expected_profit(&payout, 1.0 - p));
    let table = Table::new(casino, player, ws, payout)?;
    if sessions == 1 {
        let s = table.run_with_trajectory(rounds, seed, 0)?;
        return match out.format {
            Format::Json => out.json(&json!({"seed": seed, "payout": payout, "stats": s, "expected_profit": expected})),
            Format::Csv => {
                let rows: Vec<String> =
                    s.trajectory.iter().enumerate().map(|(k, b)| format!("{seed},{},{}", k + 1, format_cents(*b))).collect();
                out.table("seed,round,bankroll", &rows)
            }
            Format::Plain => {
                out.line(format!("seed: {seed}"))?;
                out.line(format!("rounds: {rounds}"))?;
                out.line(format!("casino_win_rate: {:.6}", s.casino_win_rate()))?;
                out.line(format!("profit: {}", format_cents(s.profit)))?;
                if let Some(e) = expected {
                    out.line(format!("expected_profit: {e:.2}"))?;
                }
                Ok(())
            }
        };
    }
    let b = simulate_sessions(&table, sessions, rounds, seed)?;
    match out.format {
        Format::Json => out.json(&json!({"seed": seed, "payout": payout, "batch": b, "expected_profit": expected})),
        Format::Csv => {
            let rows: Vec<String> =
                b.profits.iter().enumerate().map(|(k, p)| format!("{seed},{k},{}", format_cents(*p))).collect();
            out.table("seed,session,profit", &rows)
        }
        Format::Plain => {
            out.line(format!("seed: {seed}"))?;
            out.line(format!("sessions: {sessions}"))?;
            out.line(format!("rounds: {rounds}"))?;
            out.line(format!("casino_win_rate: {:.6}", b.casino_win_rate()))?;
            out.line(format!("mean_profit: {:.2}", b.mean_profit))?;
            out.line(format!("std_error: {:.2}", b.std_error))?;
            if let Some(e) = expected {
                out.line(format!("expected_profit: {e:.2}"))?;
            }
            Ok(())
        }
    }
}

fn group<W: Write>(out: &mut Out<'_, W>, g: &FiniteGroup, w: &[usize]) -> Result<()> {
    let c = finite_group_value(g, w)?;
    let m = build_game_matrix(g, w)?;
    let player_value = balanced_matrix_value(&m)?.value;
    match out.format {
        Format::Json => out.json(&json!({"certificate": c, "player_value": player_value})),
        _ => out.table(
            "order,winning,value,verified",
            &[format!("{},{},{:.10},{}", c.order, c.winning_elements, c.value, c.verified)],
        ),
    }
}

fn play<W: Write>(
    out: &mut Out<'_, W>,
    input: &mut impl BufRead,
    ws: &IntervalUnion,
    dealer: Strategy,
    payout: PayoutSchedule,
    seed: u64,
) -> Result<()> {
    let exact = ExactSet::new(ws)?;
    let mut rng = RngStream::new(seed, 0);
    let mut ledger = Ledger::new(payout);
    out.line(format!("seed: {seed}"))?;
    out.line(format!("dealer {} | casino wins on {ws} | payout {payout}", dealer.name()))?;
    out.line("enter a number (21 and 2.1 are the same play), q to quit")?;
    let mut dealer_number = dealer.draw(&mut rng, DEFAULT_RESOLUTION)?;
    let mut line = String::new();
    loop {
        write!(out.w, "round {}> ", ledger.history.len() + 1)?;
        out.w.flush()?;
        line.clear();
        if input.read_line(&mut line)? == 0 || matches!(line.trim(), "q" | "quit") {
            out.line("")?;
            break;
        }
        if line.trim().is_empty() {
            continue;
        }
        let player = match Mantissa::normalize_str(line.trim()) {
            Ok(m) => m,
            Err(e) => {
                out.line(format!("not a number: {e}"))?;
                continue;
            }
        };
        let o = adjudicate(dealer_number, player, &exact);
        let r = ledger.settle(o).clone();
        let verdict = if r.outcome.casino_won { "casino wins" } else { "you win" };
        out.line(format!(
            "dealer {} x you {} -> {} (digit {}): {verdict}, {} | bankroll {}",
            r.outcome.casino_number,
            r.outcome.player_number,
            r.outcome.product_mantissa,
            r.outcome.leading_digit,
            format_cents(r.settlement),
            format_cents(r.bankroll_after)
        ))?;
        dealer_number = dealer.draw(&mut rng, DEFAULT_RESOLUTION)?;
    }
    let s = ledger.stats();
    out.line(format!(
        "{} rounds, casino won {}, bankroll {}",
        s.rounds,
        s.casino_win_count,
        format_cents(s.profit)
    ))
}
