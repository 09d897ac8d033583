//! The `confluence-lab` command line.
//!
//! Exit status: 0 on success or a passing check, 1 when a check fails or a
//! counterexample is found, 2 on usage or input errors.

use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::cex::{find_diamond_cex, find_typed_eta_diamond_cex_with, Counterexample};
use crate::error::Error;
use crate::generate::{gen_terms, gen_typed_terms_with_types, Calculus, CorpusSpec};
use crate::parallel::{complete_dev, par_reducts};
use crate::props::{
    check_commutation, check_confluence, check_diamond, check_strip, check_strong_commutation, Budget, Outcome,
    PropertyReport,
};
use crate::reduction::{joinable, normalize, JoinResult, Normalization};
use crate::relation::{union_rel, Relation};
use crate::systemf::{
    parse_signature, parse_tterm, pretty_tterm, pretty_ty, typecheck, typed_beta_reducts, typed_complete_dev,
    typed_eta_reducts, typed_par_reducts, EtaRules, Signature, TTerm,
};
use crate::term::{parse, pretty, NamingContext, Term};

#[derive(Parser, Debug)]
#[command(name = "confluence-lab", version, about = "Reduction, confluence checks and counterexample search for λ-calculi")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Args, Debug, Clone)]
struct Opts {
    /// Relation: beta, eta, betaeta, par, typed-beta, typed-eta, typed-eta-ext,
    /// typed-par; join untyped ones with `+`. Repeat for two-relation checks.
    #[arg(long, global = true, value_delimiter = ',')]
    rel: Vec<String>,
    /// Corpus height bound.
    #[arg(long, global = true, default_value_t = 3)]
    height: usize,
    /// Depth budget for reachability searches (also fuel for normalize).
    #[arg(long, global = true, default_value_t = 8)]
    depth: usize,
    /// Node budget for each reachability search.
    #[arg(long, global = true, default_value_t = 10_000)]
    nodes: usize,
    /// Free variable names, outermost first, e.g. "x,y".
    #[arg(long, global = true, default_value = "")]
    ctx: String,
    /// Typed context, e.g. "b, c:b, p:Unit*Unit"; a bare name binds a type.
    /// Switches term input to the typed syntax.
    #[arg(long, global = true)]
    tctx: Option<String>,
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Reserved; every command is deterministic.
    #[arg(long, global = true, hide = true)]
    seed: Option<u64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse a term and print it back.
    Parse { term: String },
    /// One-step reducts.
    Reducts { term: String },
    /// Leftmost-outermost normalization, at most --depth steps.
    Normalize { term: String },
    /// Complete development.
    Develop { term: String },
    /// All parallel reducts.
    ParReducts { term: String },
    /// Search for a common reduct of two terms.
    Join { left: String, right: String },
    /// Check a rewriting property over the corpus of height ≤ --height.
    Check { property: PropertyArg },
    /// Search the corpus for a counterexample.
    Cex { property: CexArg },
    /// Infer the type of a typed term.
    Typecheck { term: String },
    /// Enumerate the corpus.
    Gen {
        /// Calculus for typed generation; defaults to system-f with --tctx.
        #[arg(long, value_enum)]
        calculus: Option<CalculusArg>,
        /// Print only the number of terms.
        #[arg(long)]
        count: bool,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum PropertyArg {
    Diamond,
    StrongComm,
    Comm,
    Confluence,
    Strip,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum CexArg {
    Diamond,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum CalculusArg {
    Untyped,
    SystemF,
    EtaExt,
    SimplyTyped,
}

impl From<CalculusArg> for Calculus {
    fn from(c: CalculusArg) -> Calculus {
        match c {
            CalculusArg::Untyped => Calculus::Untyped,
            CalculusArg::SystemF => Calculus::SystemF,
            CalculusArg::EtaExt => Calculus::EtaExt,
            CalculusArg::SimplyTyped => Calculus::SimplyTyped,
        }
    }
}

/// Runs the tool on `argv` (program name first) and returns the exit status.
pub fn run<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{0}")]
    Usage(String),
    #[error("writing output: {0}")]
    Io(#[from] std::io::Error),
}

impl From<crate::error::ParseError> for CliError {
    fn from(e: crate::error::ParseError) -> CliError {
        CliError::Core(e.into())
    }
}

impl From<crate::error::TermError> for CliError {
    fn from(e: crate::error::TermError) -> CliError {
        CliError::Core(e.into())
    }
}

impl From<crate::error::RelationError> for CliError {
    fn from(e: crate::error::RelationError) -> CliError {
        CliError::Core(e.into())
    }
}

impl From<crate::error::TypeError> for CliError {
    fn from(e: crate::error::TypeError) -> CliError {
        CliError::Core(e.into())
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// A relation picked on the command line.
enum Rel {
    Untyped(Relation),
    Typed(TypedRel),
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum TypedRel {
    Beta,
    Eta(EtaRules),
    Par,
}

impl TypedRel {
    fn name(self) -> &'static str {
        match self {
            TypedRel::Beta => "typed-beta",
            TypedRel::Eta(EtaRules::Function) => "typed-eta",
            TypedRel::Eta(EtaRules::Full) => "typed-eta-ext",
            TypedRel::Par => "typed-par",
        }
    }

    fn reducts(self, sig: &Signature, t: &TTerm) -> Result<Vec<TTerm>, CliError> {
        let ctx = sig.ctx();
        Ok(match self {
            TypedRel::Beta => typed_beta_reducts(ctx, t)?,
            TypedRel::Eta(rules) => typed_eta_reducts(ctx, t, rules)?,
            TypedRel::Par => typed_par_reducts(ctx, t)?,
        })
    }
}

fn relation(name: &str) -> Result<Rel, CliError> {
    let typed = match name {
        "typed-beta" => Some(TypedRel::Beta),
        "typed-eta" => Some(TypedRel::Eta(EtaRules::Function)),
        "typed-eta-ext" => Some(TypedRel::Eta(EtaRules::Full)),
        "typed-par" => Some(TypedRel::Par),
        _ => None,
    };
    if let Some(t) = typed {
        return Ok(Rel::Typed(t));
    }
    let mut parts = name.split('+').map(|p| {
        Relation::by_name(p.trim()).ok_or_else(|| usage(format!("unknown relation `{p}`")))
    });
    let first = parts.next().expect("split yields one part")?;
    parts.try_fold(first, |acc, r| Ok(union_rel(&acc, &r?))).map(Rel::Untyped)
}

struct Env<'a> {
    opts: &'a Opts,
    ctx: NamingContext,
    sig: Option<Signature>,
}

impl Env<'_> {
    fn rels(&self) -> Result<Vec<Rel>, CliError> {
        if self.opts.rel.is_empty() {
            let default = if self.sig.is_some() { "typed-beta" } else { "beta" };
            return Ok(vec![relation(default)?]);
        }
        self.opts.rel.iter().map(|r| relation(r)).collect()
    }

    fn rel(&self) -> Result<Rel, CliError> {
        let mut rels = self.rels()?;
        if rels.len() != 1 {
            return Err(usage("expected exactly one --rel"));
        }
        Ok(rels.remove(0))
    }

    fn untyped_rels(&self) -> Result<Vec<Relation>, CliError> {
        self.rels()?
            .into_iter()
            .map(|r| match r {
                Rel::Untyped(r) => Ok(r),
                Rel::Typed(t) => Err(usage(format!("`{}` is a typed relation; this command needs an untyped one", t.name()))),
            })
            .collect()
    }

    fn budget(&self) -> Result<Budget, CliError> {
        if self.opts.nodes == 0 {
            return Err(usage("--nodes must be positive"));
        }
        Ok(Budget::new(self.opts.depth).with_nodes(self.opts.nodes))
    }

    fn term(&self, text: &str) -> Result<Term, CliError> {
        Ok(parse(text, &self.ctx)?)
    }

    fn sig(&self) -> Result<&Signature, CliError> {
        self.sig.as_ref().ok_or_else(|| usage("this needs a typed context (--tctx)"))
    }

    fn tterm(&self, text: &str) -> Result<TTerm, CliError> {
        Ok(parse_tterm(text, self.sig()?)?)
    }

    fn show(&self, t: &Term) -> Result<String, CliError> {
        Ok(pretty(t, &self.ctx)?)
    }

    fn show_typed(&self, t: &TTerm) -> Result<String, CliError> {
        Ok(pretty_tterm(t, self.sig()?)?)
    }
}

fn emit(out: &mut dyn Write, v: &Value) -> Result<(), CliError> {
    writeln!(out, "{}", serde_json::to_string_pretty(v).expect("values serialize"))?;
    Ok(())
}

fn term_json(t: &Term) -> Value {
    serde_json::to_value(t).expect("terms serialize")
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> Result<i32, CliError> {
    let opts = &cli.opts;
    let env = Env {
        opts,
        ctx: NamingContext::from_list(&opts.ctx)?,
        sig: opts.tctx.as_deref().map(parse_signature).transpose()?,
    };
    match &cli.command {
        Command::Parse { term } => cmd_parse(&env, term, out),
        Command::Reducts { term } => cmd_reducts(&env, term, out),
        Command::Normalize { term } => cmd_normalize(&env, term, out),
        Command::Develop { term } => cmd_develop(&env, term, out),
        Command::ParReducts { term } => {
            if env.sig.is_some() {
                let t = env.tterm(term)?;
                let rs = typed_par_reducts(env.sig()?.ctx(), &t)?;
                typed_list(&env, &t, "typed-par", &rs, out)
            } else {
                let t = env.term(term)?;
                untyped_list(&env, &t, "par", &par_reducts(&t), out)
            }
        }
        Command::Join { left, right } => cmd_join(&env, left, right, out),
        Command::Check { property } => cmd_check(&env, *property, out),
        Command::Cex { property: CexArg::Diamond } => cmd_cex(&env, out),
        Command::Typecheck { term } => cmd_typecheck(&env, term, out),
        Command::Gen { calculus, count } => cmd_gen(&env, *calculus, *count, out),
    }
}

fn cmd_parse(env: &Env, text: &str, out: &mut dyn Write) -> Result<i32, CliError> {
    if env.sig.is_some() {
        let t = env.tterm(text)?;
        let shown = env.show_typed(&t)?;
        if env.opts.json {
            emit(out, &json!({ "term": t.to_json(), "pretty": shown }))?;
        } else {
            writeln!(out, "{shown}")?;
        }
    } else {
        let t = env.term(text)?;
        let shown = env.show(&t)?;
        if env.opts.json {
            emit(out, &json!({ "term": term_json(&t), "pretty": shown }))?;
        } else {
            writeln!(out, "{shown}")?;
        }
    }
    Ok(0)
}

fn untyped_list(env: &Env, t: &Term, rel: &str, rs: &[Term], out: &mut dyn Write) -> Result<i32, CliError> {
    let shown: Vec<String> = rs.iter().map(|r| env.show(r)).collect::<Result<_, _>>()?;
    if env.opts.json {
        emit(
            out,
            &json!({
                "term": term_json(t),
                "relation": rel,
                "reducts": rs.iter().map(term_json).collect::<Vec<_>>(),
                "pretty": shown,
            }),
        )?;
    } else {
        for s in shown {
            writeln!(out, "{s}")?;
        }
    }
    Ok(0)
}

fn typed_list(env: &Env, t: &TTerm, rel: &str, rs: &[TTerm], out: &mut dyn Write) -> Result<i32, CliError> {
    let shown: Vec<String> = rs.iter().map(|r| env.show_typed(r)).collect::<Result<_, _>>()?;
    if env.opts.json {
        emit(
            out,
            &json!({
                "term": t.to_json(),
                "relation": rel,
                "reducts": rs.iter().map(TTerm::to_json).collect::<Vec<_>>(),
                "pretty": shown,
            }),
        )?;
    } else {
        for s in shown {
            writeln!(out, "{s}")?;
        }
    }
    Ok(0)
}

fn cmd_reducts(env: &Env, text: &str, out: &mut dyn Write) -> Result<i32, CliError> {
    match env.rel()? {
        Rel::Untyped(r) => {
            let t = env.term(text)?;
            untyped_list(env, &t, r.name(), &r.reducts(&t), out)
        }
        Rel::Typed(r) => {
            let t = env.tterm(text)?;
            let rs = r.reducts(env.sig()?, &t)?;
            typed_list(env, &t, r.name(), &rs, out)
        }
    }
}

fn cmd_normalize(env: &Env, text: &str, out: &mut dyn Write) -> Result<i32, CliError> {
    let fuel = env.opts.depth;
    let (normal, shown, value) = match env.rel()? {
        Rel::Untyped(r) => {
            let t = env.term(text)?;
            let (normal, nf) = match normalize(&t, &r, fuel) {
                Normalization::NormalForm(n) => (true, n),
                Normalization::FuelExhausted(n) => (false, n),
            };
            (normal, env.show(&nf)?, term_json(&nf))
        }
        Rel::Typed(r) => {
            let sig = env.sig()?;
            let mut t = env.tterm(text)?;
            for _ in 0..fuel {
                match r.reducts(sig, &t)?.into_iter().next() {
                    Some(next) => t = next,
                    None => break,
                }
            }
            let normal = r.reducts(sig, &t)?.is_empty();
            (normal, env.show_typed(&t)?, t.to_json())
        }
    };
    if env.opts.json {
        emit(out, &json!({ "normal_form": normal, "term": value, "pretty": shown, "fuel": fuel }))?;
    } else if normal {
        writeln!(out, "{shown}")?;
    } else {
        writeln!(out, "{shown}  (fuel exhausted after {fuel} steps)")?;
    }
    Ok(if normal { 0 } else { 1 })
}

fn cmd_develop(env: &Env, text: &str, out: &mut dyn Write) -> Result<i32, CliError> {
    let (shown, value) = if env.sig.is_some() {
        let t = env.tterm(text)?;
        let d = typed_complete_dev(env.sig()?.ctx(), &t)?;
        (env.show_typed(&d)?, d.to_json())
    } else {
        let d = complete_dev(&env.term(text)?);
        (env.show(&d)?, term_json(&d))
    };
    if env.opts.json {
        emit(out, &json!({ "term": value, "pretty": shown }))?;
    } else {
        writeln!(out, "{shown}")?;
    }
    Ok(0)
}

fn cmd_join(env: &Env, left: &str, right: &str, out: &mut dyn Write) -> Result<i32, CliError> {
    let rels = env.untyped_rels()?;
    let [rel] = rels.as_slice() else { return Err(usage("expected exactly one --rel")) };
    let budget = env.budget()?;
    let (l, r) = (env.term(left)?, env.term(right)?);
    match joinable(&l, &r, rel, budget.depth, budget.nodes) {
        JoinResult::Joined(j) => {
            if env.opts.json {
                let mut v = serde_json::to_value(&j).expect("join serializes");
                v["joined"] = json!(true);
                v["pretty"] = json!(env.show(&j.witness)?);
                emit(out, &v)?;
            } else {
                writeln!(out, "joined at {} ({} + {} steps)", env.show(&j.witness)?, j.left.len(), j.right.len())?;
            }
            Ok(0)
        }
        JoinResult::NotFoundWithinBudget => {
            if env.opts.json {
                emit(out, &json!({ "joined": false }))?;
            } else {
                writeln!(out, "no common reduct within budget")?;
            }
            Ok(1)
        }
    }
}

fn corpus(env: &Env) -> CorpusSpec {
    CorpusSpec::untyped(env.opts.height, env.ctx.len())
}

fn cmd_check(env: &Env, property: PropertyArg, out: &mut dyn Write) -> Result<i32, CliError> {
    let rels = env.untyped_rels()?;
    let spec = corpus(env);
    let budget = env.budget()?;
    let one = |rels: &[Relation]| match rels {
        [r] => Ok(r.clone()),
        _ => Err(usage("this property takes one --rel")),
    };
    let report = match property {
        PropertyArg::Diamond => check_diamond(&one(&rels)?, &spec),
        PropertyArg::Confluence => check_confluence(&one(&rels)?, &spec, budget),
        PropertyArg::Strip => check_strip(&one(&rels)?, &spec, budget),
        PropertyArg::StrongComm | PropertyArg::Comm => {
            let (r, s) = match rels.as_slice() {
                [r] => (r, r),
                [r, s] => (r, s),
                _ => return Err(usage("this property takes one or two --rel")),
            };
            if matches!(property, PropertyArg::StrongComm) {
                check_strong_commutation(r, s, &spec, budget)
            } else {
                check_commutation(r, s, &spec, budget)
            }
        }
    };
    print_report(env, &report, out)?;
    Ok(if report.is_fail() { 1 } else { 0 })
}

fn print_report(env: &Env, report: &PropertyReport, out: &mut dyn Write) -> Result<(), CliError> {
    if env.opts.json {
        let mut v = report.to_json();
        if let Some(c) = report.counterexample() {
            v["counterexample"]["pretty"] = pretty_cex(env, c)?;
        }
        return emit(out, &v);
    }
    let rels = report.relations.join(", ");
    match &report.outcome {
        Outcome::Pass => writeln!(
            out,
            "{}({rels}): pass on {} terms of height <= {}",
            report.property.name(),
            report.instances_checked,
            report.corpus.height_bound
        )?,
        Outcome::Inconclusive(n) => writeln!(
            out,
            "{}({rels}): inconclusive, {n} instances did not close within budget",
            report.property.name()
        )?,
        Outcome::Fail(c) => {
            writeln!(out, "{}({rels}): fail", report.property.name())?;
            writeln!(out, "  peak:  {}", env.show(&c.peak)?)?;
            writeln!(out, "  left:  {}", env.show(&c.left)?)?;
            writeln!(out, "  right: {}", env.show(&c.right)?)?;
            writeln!(out, "  {}", c.reason)?;
        }
    }
    Ok(())
}

fn pretty_cex(env: &Env, c: &Counterexample) -> Result<Value, CliError> {
    Ok(json!({
        "peak": env.show(&c.peak)?,
        "left": env.show(&c.left)?,
        "right": env.show(&c.right)?,
    }))
}

fn cmd_cex(env: &Env, out: &mut dyn Write) -> Result<i32, CliError> {
    let height = env.opts.height;
    let (relation, found) = match env.rel()? {
        Rel::Untyped(rel) => {
            let found = find_diamond_cex(&rel, &corpus(env))
                .map(|c| {
                    Ok::<_, CliError>((
                        json!({ "peak": term_json(&c.peak), "left": term_json(&c.left), "right": term_json(&c.right) }),
                        pretty_cex(env, &c)?,
                        c.reason,
                    ))
                })
                .transpose()?;
            (rel.name().to_owned(), found)
        }
        Rel::Typed(TypedRel::Eta(rules)) => {
            let sig = env.sig()?;
            let spec = CorpusSpec::typed(Calculus::EtaExt, height, sig.ctx().clone());
            let found = find_typed_eta_diamond_cex_with(&spec, rules)?
                .map(|c| {
                    Ok::<_, CliError>((
                        json!({ "peak": c.peak.to_json(), "left": c.left.to_json(), "right": c.right.to_json() }),
                        json!({
                            "peak": env.show_typed(&c.peak)?,
                            "left": env.show_typed(&c.left)?,
                            "right": env.show_typed(&c.right)?,
                        }),
                        c.reason,
                    ))
                })
                .transpose()?;
            (TypedRel::Eta(rules).name().to_owned(), found)
        }
        Rel::Typed(r) => return Err(usage(format!("no counterexample search for `{}`", r.name()))),
    };
    match found {
        Some((mut v, shown, reason)) => {
            if env.opts.json {
                v["relation"] = json!(relation);
                v["height_bound"] = json!(height);
                v["reason"] = json!(reason);
                v["pretty"] = shown;
                emit(out, &v)?;
            } else {
                writeln!(out, "diamond({relation}) counterexample at height <= {height}")?;
                for key in ["peak", "left", "right"] {
                    writeln!(out, "  {key:<6} {}", shown[key].as_str().unwrap_or_default())?;
                }
            }
            Ok(1)
        }
        None => {
            if env.opts.json {
                emit(out, &json!({ "relation": relation, "height_bound": height, "result": "none-found" }))?;
            } else {
                writeln!(out, "no counterexample for diamond({relation}) at height <= {height}")?;
            }
            Ok(0)
        }
    }
}

fn cmd_typecheck(env: &Env, text: &str, out: &mut dyn Write) -> Result<i32, CliError> {
    let empty = Signature::empty();
    let sig = env.sig.as_ref().unwrap_or(&empty);
    let t = parse_tterm(text, sig)?;
    match typecheck(sig.ctx(), &t) {
        Ok(ty) => {
            let shown = pretty_ty(&ty, sig)?;
            if env.opts.json {
                emit(out, &json!({ "well_typed": true, "type": ty.to_json(), "pretty": shown }))?;
            } else {
                writeln!(out, "{shown}")?;
            }
            Ok(0)
        }
        Err(e) => {
            if env.opts.json {
                emit(out, &json!({ "well_typed": false, "error": e.to_string() }))?;
            } else {
                writeln!(out, "ill-typed: {e}")?;
            }
            Ok(1)
        }
    }
}

fn cmd_gen(env: &Env, calculus: Option<CalculusArg>, count: bool, out: &mut dyn Write) -> Result<i32, CliError> {
    let calculus = match calculus {
        Some(c) => c.into(),
        None if env.sig.is_some() => Calculus::SystemF,
        None => Calculus::Untyped,
    };
    if calculus == Calculus::Untyped {
        let terms = gen_terms(&corpus(env));
        if count {
            writeln!(out, "{}", terms.count())?;
        } else if env.opts.json {
            let all: Vec<Value> = terms.map(|t| term_json(&t)).collect();
            emit(out, &Value::Array(all))?;
        } else {
            for t in terms {
                writeln!(out, "{}", env.show(&t)?)?;
            }
        }
        return Ok(0);
    }
    let empty = Signature::empty();
    let sig = env.sig.as_ref().unwrap_or(&empty);
    let spec = CorpusSpec::typed(calculus, env.opts.height, sig.ctx().clone());
    let terms = gen_typed_terms_with_types(&spec);
    if count {
        writeln!(out, "{}", terms.len())?;
    } else if env.opts.json {
        let all: Vec<Value> = terms
            .iter()
            .map(|(t, ty)| json!({ "term": t.to_json(), "type": ty.to_json() }))
            .collect();
        emit(out, &Value::Array(all))?;
    } else {
        for (t, ty) in &terms {
            writeln!(out, "{} : {}", pretty_tterm(t, sig)?, pretty_ty(ty, sig)?)?;
        }
    }
    Ok(0)
}
