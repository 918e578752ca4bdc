//! The `loony` command line.
//!
//! Exit codes: 0 success, 2 usage or domain error, 3 a cross-check against
//! the exhaustive search failed.

use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand};
use loony::check::{self, Bounds};
use loony::model::parse;
use loony::oracle::MoveValuation;
use loony::report::{self, Analysis, Engine, DEFAULT_ORACLE_CAP};
use loony::session::{self, Action, Choice};
use loony::{Component, Endgame, Oracle, Player, Rule, Score};
use serde::Serialize;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_MISMATCH: i32 = 3;

/// Largest bounds `check` accepts.
pub const CHECK_CAP: Bounds = Bounds {
    max_components: 6,
    chain_max: 12,
    loop_max: 16,
};

#[derive(Debug, Parser)]
#[command(
    name = "loony",
    version,
    about = "Values and optimal moves for simple loony endgames"
)]
struct Cli {
    #[command(flatten)]
    flags: Flags,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Flags {
    /// Print machine-readable JSON
    #[arg(long, global = true)]
    json: bool,
    /// Show every case the solver went through
    #[arg(long, global = true)]
    trace: bool,
    /// Cross-check against exhaustive search (small positions only)
    #[arg(long, global = true)]
    oracle: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Value of a position, e.g. "2*3+4+6L"
    Value { position: String },
    /// Which component to open
    Move {
        position: String,
        /// Also list every optimal open and the value of each open
        #[arg(long)]
        all: bool,
    },
    /// Play the position out with both sides following the advice
    Line { position: String },
    /// Compare the solver with exhaustive search on every small position
    Check {
        #[arg(long, default_value_t = 5)]
        max_components: u32,
        #[arg(long, default_value_t = 8)]
        chain_max: u64,
        #[arg(long, default_value_t = 10)]
        loop_max: u64,
    },
    /// Run the HTTP service
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
    },
}

struct Ctx<'a> {
    flags: Flags,
    engine: &'a dyn Engine,
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

type Outcome = Result<i32, Failure>;

/// A message for stderr and the exit code that goes with it.
struct Failure(i32, String);

fn usage(msg: impl ToString) -> Failure {
    Failure(EXIT_USAGE, msg.to_string())
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure(EXIT_USAGE, e.to_string())
    }
}

/// Runs the command line given by `args` (program name first).
pub fn run<I, T>(args: I, engine: &dyn Engine, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            let code = if e.use_stderr() {
                let _ = write!(err, "{text}");
                EXIT_USAGE
            } else {
                let _ = write!(out, "{text}");
                EXIT_OK
            };
            return code;
        }
    };
    let mut ctx = Ctx {
        flags: cli.flags,
        engine,
        out,
        err,
    };
    let result = match cli.command {
        Command::Value { position } => cmd_value(&mut ctx, &position),
        Command::Move { position, all } => cmd_move(&mut ctx, &position, all),
        Command::Line { position } => cmd_line(&mut ctx, &position),
        Command::Check {
            max_components,
            chain_max,
            loop_max,
        } => cmd_check(
            &mut ctx,
            Bounds {
                max_components,
                chain_max,
                loop_max,
            },
        ),
        Command::Serve { port } => loony_service::run(port).map(|_| EXIT_OK).map_err(usage),
    };
    match result {
        Ok(code) => code,
        Err(Failure(code, msg)) => {
            let _ = writeln!(ctx.err, "error: {msg}");
            code
        }
    }
}

fn position(text: &str) -> Result<Endgame, Failure> {
    parse(text).map_err(usage)
}

fn within_oracle_cap(g: &Endgame) -> Result<(), Failure> {
    if g.total_boxes() > DEFAULT_ORACLE_CAP {
        return Err(usage(format!(
            "--oracle refused: {} boxes exceeds the cap of {DEFAULT_ORACLE_CAP}",
            g.total_boxes()
        )));
    }
    Ok(())
}

fn json(out: &mut dyn Write, v: &impl Serialize) -> std::io::Result<()> {
    writeln!(
        out,
        "{}",
        serde_json::to_string_pretty(v).expect("serializable")
    )
}

fn show_open(a: &Analysis) -> String {
    match (a.advised_open, a.rule) {
        (Some(c), Some(r)) => format!("{c}  [{r}]"),
        _ => "-".into(),
    }
}

fn cmd_value(ctx: &mut Ctx, text: &str) -> Outcome {
    let g = position(text)?;
    if ctx.flags.oracle {
        within_oracle_cap(&g)?;
    }
    let mut a = report::analyze_with(ctx.engine, &g, DEFAULT_ORACLE_CAP).map_err(usage)?;
    let mut oracle_value = None;
    if ctx.flags.oracle {
        let mut o = Oracle::new();
        oracle_value = Some(o.value(&g));
        a.oracle_agrees = Some(report::oracle_agrees(&a, &g, &mut o));
    }
    if ctx.flags.json {
        json(ctx.out, &a)?;
    } else {
        let out = &mut *ctx.out;
        writeln!(
            out,
            "position  {}",
            if a.position.is_empty() {
                "(empty)"
            } else {
                &a.position
            }
        )?;
        writeln!(out, "value     {}", a.value)?;
        writeln!(out, "cv        {}  (fcv {}, tb {})", a.cv, a.fcv, a.tb)?;
        writeln!(out, "open      {}", show_open(&a))?;
        if a.oracle_fallback {
            writeln!(out, "          odd loops: computed by exhaustive search")?;
        }
        if let Some(agrees) = a.oracle_agrees {
            writeln!(
                out,
                "oracle    {}",
                if agrees { "agrees" } else { "DISAGREES" }
            )?;
        }
        if ctx.flags.trace {
            writeln!(out, "trace")?;
            for step in &a.trace {
                writeln!(out, "  {step}")?;
            }
        }
    }
    if a.oracle_agrees == Some(false) {
        return Err(Failure(
            EXIT_MISMATCH,
            format!(
                "solver and exhaustive search disagree on {text:?}: solver value {}, open {}; search value {}",
                a.value,
                show_open(&a),
                oracle_value.expect("checked"),
            ),
        ));
    }
    Ok(EXIT_OK)
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
struct MoveRecord {
    position: String,
    advised_open: Component,
    rule: Rule,
    move_value: Score,
    #[serde(skip_serializing_if = "Option::is_none")]
    optimal_opens: Option<Vec<Component>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    move_values: Option<Vec<MoveValuation>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle_agrees: Option<bool>,
}

fn cmd_move(ctx: &mut Ctx, text: &str, all: bool) -> Outcome {
    let g = position(text)?;
    if g.is_empty() {
        return Err(usage("the empty position has no move"));
    }
    let searched = all || ctx.flags.oracle;
    if searched {
        within_oracle_cap(&g)?;
    }
    let a = report::analyze_with(ctx.engine, &g, DEFAULT_ORACLE_CAP).map_err(usage)?;
    let mut rec = MoveRecord {
        position: a.position.clone(),
        advised_open: a.advised_open.expect("non-empty"),
        rule: a.rule.expect("non-empty"),
        move_value: a.move_value.expect("non-empty"),
        optimal_opens: None,
        move_values: None,
        oracle_agrees: None,
    };
    if searched {
        let mut o = Oracle::new();
        let opt = o.optimal_opens(&g).expect("non-empty");
        rec.oracle_agrees = Some(opt.contains(&rec.advised_open));
        if all {
            rec.optimal_opens = Some(opt.into_iter().collect());
            rec.move_values = Some(o.move_values(&g).expect("non-empty"));
        }
    }
    if ctx.flags.json {
        json(ctx.out, &rec)?;
    } else {
        let out = &mut *ctx.out;
        writeln!(out, "open {}  [{}]", rec.advised_open, rec.rule)?;
        writeln!(out, "move value {}", rec.move_value)?;
        if let Some(mv) = &rec.move_values {
            let opt = rec.optimal_opens.as_deref().unwrap_or_default();
            let list: Vec<String> = opt.iter().map(|c| c.to_string()).collect();
            writeln!(out, "optimal opens {}", list.join(", "))?;
            for m in mv {
                writeln!(out, "  {:>6}  {}", m.component.to_string(), m.value)?;
            }
        }
        if let Some(agrees) = rec.oracle_agrees {
            writeln!(
                out,
                "oracle {}",
                if agrees { "agrees" } else { "DISAGREES" }
            )?;
        }
    }
    if rec.oracle_agrees == Some(false) {
        return Err(Failure(
            EXIT_MISMATCH,
            format!(
                "advised open {} is not optimal in {text:?}",
                rec.advised_open
            ),
        ));
    }
    Ok(EXIT_OK)
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
struct LineStepRecord {
    defender: Player,
    opened: Component,
    choice: Choice,
    indifferent: bool,
    score_a: u128,
    score_b: u128,
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
struct LineRecord {
    position: String,
    opener: Player,
    steps: Vec<LineStepRecord>,
    score_a: u128,
    score_b: u128,
    /// Final margin for the player who did not open first.
    margin: Score,
}

fn cmd_line(ctx: &mut Ctx, text: &str) -> Outcome {
    let g = position(text)?;
    if !g.is_simple() || ctx.flags.oracle {
        within_oracle_cap(&g)?;
    }
    let opener = Player::A;
    let mut s = session::SessionState::new(g.clone(), opener);
    let mut steps = Vec::new();
    while !s.is_terminal() {
        let defender = s.to_act;
        s = s.advised_step().map_err(usage)?;
        let opened = match s.phase {
            session::Phase::ControllerToDecide { opened } => opened,
            session::Phase::DefenderToOpen => unreachable!("an open was just played"),
        };
        let indifferent = match s.advise().map_err(usage)? {
            session::Advice::Decide { decision, .. } => decision.indifferent,
            session::Advice::Open(_) => false,
        };
        s = s.advised_step().map_err(usage)?;
        let choice = match s.history.last().map(|h| h.action) {
            Some(Action::Decide { choice }) => choice,
            _ => unreachable!("a decision was just played"),
        };
        steps.push(LineStepRecord {
            defender,
            opened,
            choice,
            indifferent,
            score_a: s.score_a,
            score_b: s.score_b,
        });
    }
    let rec = LineRecord {
        position: g.to_string(),
        opener,
        steps,
        score_a: s.score_a,
        score_b: s.score_b,
        margin: s.margin(opener.other()),
    };
    if ctx.flags.json {
        json(ctx.out, &rec)?;
    } else {
        let out = &mut *ctx.out;
        for (i, st) in rec.steps.iter().enumerate() {
            let controller = st.defender.other();
            let what = match st.choice {
                Choice::KeepControl => "keeps control",
                Choice::TakeAll => "takes all",
            };
            let tie = if st.indifferent { " (either)" } else { "" };
            let response = format!("{controller:?} {what}{tie}");
            writeln!(
                out,
                "{:>3}. {:?} opens {:<5} {response:<26} A {} - B {}",
                i + 1,
                st.defender,
                st.opened.to_string(),
                st.score_a,
                st.score_b,
            )?;
        }
        writeln!(
            out,
            "final A {} - B {}, margin {} to B",
            rec.score_a, rec.score_b, rec.margin
        )?;
    }
    if ctx.flags.oracle {
        let v = Oracle::new().value(&g);
        if v != rec.margin {
            return Err(Failure(
                EXIT_MISMATCH,
                format!(
                    "line margin {} differs from the searched value {v}",
                    rec.margin
                ),
            ));
        }
    }
    Ok(EXIT_OK)
}

fn cmd_check(ctx: &mut Ctx, b: Bounds) -> Outcome {
    if b.max_components > CHECK_CAP.max_components
        || b.chain_max > CHECK_CAP.chain_max
        || b.loop_max > CHECK_CAP.loop_max
    {
        return Err(usage(format!(
            "bounds exceed the cap (max-components {}, chain-max {}, loop-max {})",
            CHECK_CAP.max_components, CHECK_CAP.chain_max, CHECK_CAP.loop_max
        )));
    }
    let report = check::cross_check(ctx.engine, &b);
    if ctx.flags.json {
        json(ctx.out, &report)?;
    } else {
        writeln!(
            ctx.out,
            "{} positions (<= {} components, chains 3..={}, even loops 4..={}): {} agree, {} mismatch",
            report.cases,
            b.max_components,
            b.chain_max,
            b.loop_max,
            report.agreed,
            report.mismatches.len()
        )?;
        if report.all_agree() {
            writeln!(ctx.out, "all agree")?;
        }
    }
    match report.minimal_counterexample() {
        None => Ok(EXIT_OK),
        Some(m) => Err(Failure(
            EXIT_MISMATCH,
            format!(
                "minimal counterexample {:?}: {} (search value {}, solver value {}, advised {}, optimal {})",
                m.position,
                m.detail,
                m.oracle_value,
                m.engine_value.map_or("-".into(), |v| v.to_string()),
                m.advised_open.map_or("-".into(), |c| c.to_string()),
                m.optimal_opens.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(","),
            ),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use loony::report::ClosedForm;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("loony").chain(args.iter().copied());
        let code = run(argv, &ClosedForm, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn value_text() {
        let (code, out, _) = run_args(&["value", "3+4+100*4L+100*6L", "--trace"]);
        assert_eq!(code, 0);
        assert!(out.contains("value     3"));
        assert!(out.contains("v(G\\3) = 4"));
        let (code, out, _) = run_args(&["value", ""]);
        assert_eq!(code, 0);
        assert!(out.contains("value     0"));
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(run_args(&["value", "3+2"]).0, 2);
        assert_eq!(run_args(&["move", ""]).0, 2);
        assert_eq!(run_args(&["frobnicate"]).0, 2);
        assert_eq!(run_args(&["value", "100+100", "--oracle"]).0, 2);
        assert_eq!(run_args(&["check", "--max-components", "40"]).0, 2);
        assert_eq!(run_args(&["--help"]).0, 0);
    }

    #[test]
    fn move_all() {
        let (code, out, _) = run_args(&["move", "3+3*6L", "--all"]);
        assert_eq!(code, 0);
        assert!(
            out.starts_with("open 3  [open/one-3-chain+loops:3-chain]"),
            "{out}"
        );
        assert!(out.contains("optimal opens 3\n"));
    }

    #[test]
    fn line_text() {
        let (code, out, _) = run_args(&["line", "6L"]);
        assert_eq!(code, 0);
        assert!(out.contains("final A 0 - B 6, margin 6 to B"), "{out}");
    }
}
