//! Command-line front end: curve config ingestion, flag construction,
//! duality reports, self-orthogonal construction and the period/offset
//! sweeps, in human-readable or machine-readable (key=value) form.

use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};

use agflag::curve::{Curve, Place, PlaceOrdering};
use agflag::evalcode::EvalSet;
use agflag::field::Field;
use agflag::isodual::{isodual_flag, translate_flag, translation_function, IsometryStatus};
use agflag::isogroup::{
    count_bounds, enumerate_t0, translation_equivalence, PeriodTable,
};
use agflag::report::{render_ints, render_pm_vec, render_vec, Report};
use agflag::selforth::{construct_self_orthogonal, VerificationMode};
use agflag::{CurveConfig, Error};

#[derive(Parser)]
#[command(name = "agflag", version, about = "Complete flags of AG codes on Kummer curves")]
struct Cli {
    /// Curve configuration file
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output format
    #[arg(long, global = true, default_value = "human", value_parser = ["human", "machine"])]
    format: String,
    /// Seed for the randomized full-weight search tier
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads for sweeps
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    /// Window lo..hi for the H set listing
    #[arg(long, global = true, value_parser = parse_range)]
    window: Option<(i64, i64)>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct BetaArg {
    /// Divisor coefficients β_1,...,β_t at the first t ramified places
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    beta: Vec<i64>,
}

#[derive(Subcommand)]
enum Cmd {
    /// List the rational places of the curve
    Places,
    /// The jump sets H_β (windowed) and H*_β
    Hstar(BetaArg),
    /// Build the complete flag S_β
    Flag(BetaArg),
    /// Decide the isometry-dual property of S_β
    Isodual(BetaArg),
    /// Translate S_β along a function with divisor Σu_i(P∞ - Q_i)
    Translate {
        #[command(flatten)]
        beta: BetaArg,
        /// Shift amounts u_1,...,u_t
        #[arg(long, value_delimiter = ',', required = true)]
        shift: Vec<i64>,
    },
    /// Construct a self-orthogonal flag from S_β (characteristic 2)
    Selforth(BetaArg),
    /// Periods π(P∞, Q_i) with witnesses
    Period {
        /// Number of ramified places in scope
        #[arg(long, default_value_t = 1)]
        t: usize,
    },
    /// Enumerate the box group T₀
    T0 {
        #[arg(long, default_value_t = 1)]
        t: usize,
    },
    /// Enumerate dual-giving offsets γ with predicted isometry vectors
    Gamma {
        #[command(flatten)]
        beta: BetaArg,
        /// λ range lo..hi applied to every coordinate
        #[arg(long, value_parser = parse_range, default_value = "0..2", allow_hyphen_values = true)]
        lambda_box: (i64, i64),
    },
    /// Counting bounds on isometry vectors and dual flags
    Bounds {
        #[arg(long, default_value_t = 1)]
        t: usize,
    },
    /// Flag-level translation equivalence S_β vs S_{β + λ̃π/2}
    Equiv {
        #[command(flatten)]
        beta: BetaArg,
        /// λ̃_1,...,λ̃_t (multiples of q-1 with λ̃_i π_i even)
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        lambda: Vec<i64>,
    },
}

fn parse_range(s: &str) -> Result<(i64, i64), String> {
    let (lo, hi) = s
        .split_once("..")
        .ok_or_else(|| format!("expected lo..hi, got `{s}`"))?;
    Ok((
        lo.parse().map_err(|_| format!("bad integer `{lo}`"))?,
        hi.parse().map_err(|_| format!("bad integer `{hi}`"))?,
    ))
}

struct Ctx {
    field: Arc<Field>,
    curve: Arc<Curve>,
    curve_name: String,
    explicit: Option<Vec<Place>>,
    seed: u64,
    threads: usize,
    window: Option<(i64, i64)>,
    human: bool,
}

impl Ctx {
    fn eval_set(&self, scope: usize) -> agflag::Result<EvalSet> {
        let ordering = match &self.explicit {
            Some(list) => PlaceOrdering::Explicit(list.clone()),
            None => PlaceOrdering::Default,
        };
        EvalSet::new(self.curve.clone(), scope, &ordering)
    }

    fn base_report(&self, kind: &str) -> Report {
        let mut r = Report::new();
        r.push("report", kind);
        r.push("curve", &self.curve_name);
        r.push("seed", self.seed.to_string());
        r
    }

    fn render_place(&self, p: &Place) -> String {
        match self.curve.coords(p) {
            None => "inf".into(),
            Some((x, y)) => format!("({},{})", self.field.render(x), self.field.render(y)),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> agflag::Result<ExitCode> {
    let path = cli
        .config
        .as_ref()
        .ok_or_else(|| Error::Config("--config is required".into()))?;
    let cfg = CurveConfig::load(path)?;
    let (field, curve) = cfg.build()?;
    let explicit = cfg.resolve_places(&curve)?;
    let ctx = Ctx {
        field,
        curve,
        curve_name: path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "curve".into()),
        explicit,
        seed: cli.seed,
        threads: cli.threads.max(1),
        window: cli.window,
        human: cli.format == "human",
    };
    match cli.cmd {
        Cmd::Places => cmd_places(&ctx),
        Cmd::Hstar(b) => cmd_hstar(&ctx, &b.beta),
        Cmd::Flag(b) => cmd_flag(&ctx, &b.beta),
        Cmd::Isodual(b) => cmd_isodual(&ctx, &b.beta),
        Cmd::Translate { beta, shift } => cmd_translate(&ctx, &beta.beta, &shift),
        Cmd::Selforth(b) => cmd_selforth(&ctx, &b.beta),
        Cmd::Period { t } => cmd_period(&ctx, t),
        Cmd::T0 { t } => cmd_t0(&ctx, t),
        Cmd::Gamma { beta, lambda_box } => cmd_gamma(&ctx, &beta.beta, lambda_box),
        Cmd::Bounds { t } => cmd_bounds(&ctx, t),
        Cmd::Equiv { beta, lambda } => cmd_equiv(&ctx, &beta.beta, &lambda),
    }
}

fn emit(ctx: &Ctx, r: &Report) {
    if ctx.human {
        for (k, v) in r.pairs() {
            println!("{k}: {v}");
        }
    } else {
        print!("{}", r.render());
    }
}

fn cmd_places(ctx: &Ctx) -> agflag::Result<ExitCode> {
    let places = ctx.curve.places(&PlaceOrdering::Default)?;
    let mut r = ctx.base_report("places");
    r.push("genus", ctx.curve.genus().to_string());
    r.push("n_places", places.len().to_string());
    for (i, p) in places.iter().enumerate() {
        r.push(&format!("place{i}"), ctx.render_place(p));
    }
    emit(ctx, &r);
    Ok(ExitCode::SUCCESS)
}

fn cmd_hstar(ctx: &Ctx, beta: &[i64]) -> agflag::Result<ExitCode> {
    let eval = ctx.eval_set(beta.len())?;
    let hstar = agflag::evalcode::h_star(&ctx.curve, beta, &eval)?;
    let a0 = hstar[0] - 1;
    let (lo, hi) = ctx.window.unwrap_or((a0, *hstar.last().unwrap()));
    let h = agflag::rr::h_set(&ctx.curve, beta, lo, hi);
    let mut r = ctx.base_report("hstar");
    r.push("beta", render_ints(beta));
    r.push("n", eval.n().to_string());
    r.push("window", format!("{lo}..{hi}"));
    r.push("h", render_ints(&h));
    r.push("a0", a0.to_string());
    r.push("hstar", render_ints(&hstar));
    emit(ctx, &r);
    Ok(ExitCode::SUCCESS)
}

fn cmd_flag(ctx: &Ctx, beta: &[i64]) -> agflag::Result<ExitCode> {
    let eval = ctx.eval_set(beta.len())?;
    let flag = agflag::flag::build_flag(&ctx.curve, beta, &eval)?;
    let mut r = ctx.base_report("flag");
    r.push("beta", render_ints(beta));
    r.push("n", eval.n().to_string());
    r.push("a0", flag.a0.to_string());
    r.push("a_values", render_ints(&flag.a_values()));
    let witnesses: Vec<String> = flag
        .bb
        .witnesses
        .iter()
        .map(|t| ctx.curve.render_term(t))
        .collect();
    r.push("witnesses", witnesses.join(","));
    emit(ctx, &r);
    Ok(ExitCode::SUCCESS)
}

fn cmd_isodual(ctx: &Ctx, beta: &[i64]) -> agflag::Result<ExitCode> {
    let eval = ctx.eval_set(beta.len())?;
    let (flag, rep) = isodual_flag(&ctx.curve, beta, &eval, ctx.seed)?;
    let mut r = ctx.base_report("isodual");
    r.push("beta", render_ints(beta));
    r.push("n", eval.n().to_string());
    r.push("rows_used", rep.rows_used.to_string());
    r.push("nullspace_dim", rep.nullspace_dim.to_string());
    let (status, exit) = match &rep.status {
        IsometryStatus::SelfOrthogonal => ("self-orthogonal", 0u8),
        IsometryStatus::Dual(_) => ("dual", 0),
        IsometryStatus::NotDual => ("not-dual", 2),
        IsometryStatus::Inconclusive => ("inconclusive", 3),
    };
    r.push("status", status);
    if let Some(x) = rep.vector_with(&ctx.field, eval.n()) {
        r.push("x", render_vec(&ctx.field, &x));
    }
    r.push("a0", flag.a0.to_string());
    r.push("hstar", render_ints(&flag.bb.a_values));
    let a = flag.a_values();
    let n = flag.n();
    for i in 0..=n {
        r.push(&format!("pair{i}"), format!("{}:{}", a[i], a[n - i]));
    }
    emit(ctx, &r);
    Ok(ExitCode::from(exit))
}

fn cmd_translate(ctx: &Ctx, beta: &[i64], shift: &[i64]) -> agflag::Result<ExitCode> {
    if shift.len() != beta.len() {
        return Err(Error::DimensionMismatch);
    }
    let eval = ctx.eval_set(beta.len())?;
    let f_term = translation_function(&ctx.curve, shift, eval.first_place())?;
    let rep = translate_flag(&ctx.curve, beta, &f_term, &eval, ctx.seed)?;
    let mut r = ctx.base_report("translate");
    r.push("beta", render_ints(beta));
    r.push("f", ctx.curve.render_term(&f_term));
    r.push("u", rep.u.to_string());
    r.push("u_vec", render_ints(&rep.u_vec));
    r.push("beta_prime", render_ints(&rep.beta_prime));
    r.push("tau", render_vec(&ctx.field, &rep.tau));
    r.push("h_shift_ok", rep.h_shift_ok.to_string());
    r.push("h_star_shift_ok", rep.h_star_shift_ok.to_string());
    if let Some(x) = &rep.x_beta {
        r.push("x_beta", render_vec(&ctx.field, x));
    }
    if let Some(x) = &rep.x_predicted {
        r.push("x_predicted", render_vec(&ctx.field, x));
    }
    if let Some(ok) = rep.x_confirmed {
        r.push("x_confirmed", ok.to_string());
    }
    emit(ctx, &r);
    Ok(ExitCode::SUCCESS)
}

fn cmd_selforth(ctx: &Ctx, beta: &[i64]) -> agflag::Result<ExitCode> {
    let eval = ctx.eval_set(beta.len())?;
    let res = construct_self_orthogonal(&ctx.curve, beta, &eval, ctx.seed)?;
    let mut r = ctx.base_report("selforth");
    r.push("beta", render_ints(beta));
    r.push("n", eval.n().to_string());
    r.push("x", render_vec(&ctx.field, &res.x));
    r.push("y", render_vec(&ctx.field, &res.y));
    r.push("f_y", ctx.curve.render_function(&res.f_y));
    r.push("u", res.u.to_string());
    r.push("u_vec", render_ints(&res.u_vec));
    r.push("beta_prime", render_ints(&res.beta_prime));
    let mode = match res.mode {
        VerificationMode::ExactDivisor => "exact-divisor",
        VerificationMode::DirectCheck => "direct-check",
    };
    r.push("mode", mode);
    r.push("verified", res.verified.to_string());
    emit(ctx, &r);
    Ok(ExitCode::SUCCESS)
}

fn cmd_period(ctx: &Ctx, t: usize) -> agflag::Result<ExitCode> {
    let eval = ctx.eval_set(t)?;
    let pt = PeriodTable::compute(&ctx.curve, t, eval.first_place())?;
    let mut r = ctx.base_report("period");
    r.push("t", t.to_string());
    r.push("periods", render_ints(&pt.periods));
    for (i, w) in pt.witnesses.iter().enumerate() {
        r.push(&format!("witness{}", i + 1), ctx.curve.render_function(w));
    }
    emit(ctx, &r);
    Ok(ExitCode::SUCCESS)
}

fn cmd_t0(ctx: &Ctx, t: usize) -> agflag::Result<ExitCode> {
    let eval = ctx.eval_set(t)?;
    let p1 = *eval.first_place();
    let pt = PeriodTable::compute(&ctx.curve, t, &p1)?;
    let t0 = enumerate_t0(&ctx.curve, &pt, &p1)?;
    let mut r = ctx.base_report("t0");
    r.push("t", t.to_string());
    r.push("periods", render_ints(&pt.periods));
    r.push("size", t0.len().to_string());
    for (j, (theta, w)) in t0.members.iter().zip(&t0.witnesses).enumerate() {
        r.push(&format!("member{j}"), render_ints(theta));
        r.push(&format!("witness{j}"), ctx.curve.render_function(w));
    }
    emit(ctx, &r);
    Ok(ExitCode::SUCCESS)
}

fn cmd_gamma(ctx: &Ctx, beta: &[i64], lambda_box: (i64, i64)) -> agflag::Result<ExitCode> {
    let t = beta.len();
    let eval = ctx.eval_set(t)?;
    let p1 = *eval.first_place();
    let pt = PeriodTable::compute(&ctx.curve, t, &p1)?;
    let t0 = enumerate_t0(&ctx.curve, &pt, &p1)?;
    let (_, rep) = isodual_flag(&ctx.curve, beta, &eval, ctx.seed)?;
    let x_beta = rep
        .vector_with(&ctx.field, eval.n())
        .ok_or_else(|| Error::NotIsometryDual(format!("S_{beta:?} (status {:?})", rep.status)))?;
    let boxes = vec![lambda_box; t];
    let sweep = agflag::isogroup::enumerate_gamma(
        &ctx.curve, beta, &x_beta, &pt, &t0, &boxes, &eval, ctx.seed, ctx.threads,
    )?;
    let mut r = ctx.base_report("gamma");
    r.push("beta", render_ints(beta));
    r.push("lambda_box", format!("{}..{}", lambda_box.0, lambda_box.1));
    r.push("x_beta", render_vec(&ctx.field, &x_beta));
    r.push("n_reports", sweep.reports.len().to_string());
    for (i, g) in sweep.reports.iter().enumerate() {
        r.push(&format!("gamma{i}"), render_ints(&g.gamma));
        r.push(&format!("theta{i}"), render_ints(&g.theta));
        r.push(&format!("lambda{i}"), render_ints(&g.lambda));
        r.push(&format!("x{i}"), render_vec(&ctx.field, &g.x_predicted));
        r.push(&format!("confirmed{i}"), g.x_confirmed.to_string());
    }
    r.push("n_off_lattice", sweep.off_lattice.len().to_string());
    for (i, s) in sweep.off_lattice.iter().enumerate() {
        r.push(&format!("off{i}"), render_ints(&s.gamma));
        r.push(&format!("off_notdual{i}"), s.confirmed_not_dual.to_string());
    }
    let b = count_bounds(ctx.field.q(), &pt, &t0);
    r.push("t0_zero", b.t0_zero.to_string());
    r.push("iso_vector_bound", b.iso_vector_bound.to_string());
    r.push("flag_bound", b.flag_bound.to_string());
    emit(ctx, &r);
    Ok(ExitCode::SUCCESS)
}

fn cmd_bounds(ctx: &Ctx, t: usize) -> agflag::Result<ExitCode> {
    let eval = ctx.eval_set(t)?;
    let p1 = *eval.first_place();
    let pt = PeriodTable::compute(&ctx.curve, t, &p1)?;
    let t0 = enumerate_t0(&ctx.curve, &pt, &p1)?;
    let b = count_bounds(ctx.field.q(), &pt, &t0);
    let mut r = ctx.base_report("bounds");
    r.push("t", t.to_string());
    r.push("periods", render_ints(&pt.periods));
    r.push("t0_size", t0.len().to_string());
    r.push("e", b.e.to_string());
    r.push("o", b.o.to_string());
    r.push("t0_zero", b.t0_zero.to_string());
    r.push("iso_vector_bound", b.iso_vector_bound.to_string());
    r.push("flag_bound", b.flag_bound.to_string());
    emit(ctx, &r);
    Ok(ExitCode::SUCCESS)
}

fn cmd_equiv(ctx: &Ctx, beta: &[i64], lambda: &[i64]) -> agflag::Result<ExitCode> {
    if lambda.len() != beta.len() {
        return Err(Error::DimensionMismatch);
    }
    let eval = ctx.eval_set(beta.len())?;
    let p1 = *eval.first_place();
    let pt = PeriodTable::compute(&ctx.curve, beta.len(), &p1)?;
    let eq = translation_equivalence(&ctx.curve, beta, lambda, &pt, &eval)?;
    let mut r = ctx.base_report("equiv");
    r.push("beta", render_ints(beta));
    r.push("lambda_tilde", render_ints(lambda));
    r.push("beta_prime", render_ints(&eq.beta_prime));
    r.push("v", render_pm_vec(&ctx.field, &eq.v));
    r.push("identical", eq.identical.to_string());
    r.push("verified", eq.verified.to_string());
    emit(ctx, &r);
    Ok(ExitCode::SUCCESS)
}
