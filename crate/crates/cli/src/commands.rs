use std::collections::BTreeSet;
use std::io::Write;

use subhardy::catalog::{self, CatalogEntry, EntryCheck, FactStatus, Space};
use subhardy::options::DEFAULT_SEED;
use subhardy::{extract_generator, AnalysisOptions, Error, HypothesisReport, Tolerances};

use crate::report::{format_real, AnalysisReport, EntryOut, Settings, Stage, Verdict, VerifyReport, SCHEMA};
use crate::{input, AnalyzeArgs, CatalogAction, CliError, VerifyArgs, EXIT_OK, EXIT_VERDICT};

fn options(args: &AnalyzeArgs) -> Result<AnalysisOptions, CliError> {
    let mut opts = AnalysisOptions { n_max: args.nmax, delta: args.delta, ..AnalysisOptions::default() };
    if let Some(t) = args.tol {
        if !(t.is_finite() && t > 0.0) {
            return Err(CliError::Input(format!("--tol must be positive, got {t}")));
        }
        opts.tol = Tolerances::uniform(t);
    }
    if let Some(d) = args.delta {
        if !(d > 0.0 && d <= 1.0) {
            return Err(CliError::Input(format!("--delta must lie in (0, 1], got {d}")));
        }
    }
    if args.nmax == 0 {
        return Err(CliError::Input("--nmax must be at least 1".into()));
    }
    opts.seed = args.seed.unwrap_or(DEFAULT_SEED);
    Ok(opts)
}

fn load(args: &AnalyzeArgs) -> Result<(String, Space), CliError> {
    match (&args.space, &args.input) {
        (Some(name), _) => Ok((name.clone(), catalog::builtin(name, args.dim)?)),
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
            Ok((path.display().to_string(), input::parse(&text)?.build()?))
        }
        (None, None) => Err(CliError::Input("one of --space or --input is required".into())),
    }
}

/// Build the report for `analyze`; library errors are input errors.
pub fn build_report(args: &AnalyzeArgs) -> Result<AnalysisReport, CliError> {
    let opts = options(args)?;
    let (source, space) = load(args)?;
    let op = space.operator()?;
    let hyp = HypothesisReport::evaluate(&op, &opts)?;
    let structure = match extract_generator(&op, &hyp, &opts) {
        Ok(s) => Stage::Completed(Box::new((&s).into())),
        Err(Error::HypothesesNotVerified) => {
            Stage::Skipped { reason: "conditions (i) and (ii) do not both hold".into() }
        }
        Err(e @ (Error::WanderingDimNotOne { .. } | Error::GeneratorOutsideWindow { .. })) => {
            Stage::Failed { reason: e.to_string() }
        }
        Err(e) => return Err(e.into()),
    };
    let theorem = hyp.theorem_hypotheses_hold() && matches!(structure, Stage::Completed(_));
    let strict_checks = hyp.ine1.holds && hyp.shimorin_1.holds && hyp.shimorin_2.holds;
    let ok = theorem && (!args.strict || strict_checks);
    Ok(AnalysisReport {
        schema: SCHEMA,
        source,
        kind: space.kind().to_string(),
        ambient_dim: space.ambient_dim(),
        dim: space.dim(),
        settings: Settings {
            n_max: opts.n_max,
            tol: crate::report::Real(opts.tol.bound),
            seed: opts.seed,
            strict: args.strict,
        },
        hypotheses: (&hyp).into(),
        structure,
        verdict: Verdict {
            theorem_hypotheses: theorem,
            strict_checks,
            exit_code: if ok { EXIT_OK } else { EXIT_VERDICT },
        },
    })
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "holds"
    } else {
        "fails"
    }
}

pub fn render_text(r: &AnalysisReport) -> String {
    let h = &r.hypotheses;
    let mut s = format!("{} ({} space, window {}, dimension {})\n", r.source, r.kind, r.ambient_dim, r.dim);
    s += &format!(
        "condition (i)      {}  delta_max {}  sup {}\n",
        yes_no(h.cond_i.holds),
        format_real(h.cond_i.delta_max.0),
        format_real(h.cond_i.sup_ratio.0)
    );
    s += &format!(
        "condition (ii)     {}  max residual {} over n ≤ {}\n",
        yes_no(h.cond_ii.holds),
        format_real(h.cond_ii.max_residual.0),
        h.cond_ii.n_checked
    );
    s += &format!("power bounds       {}  delta_max {}\n", yes_no(h.ine1.holds), format_real(h.ine1.delta_max.0));
    s += &format!("shimorin (first)   {}  lhs {} rhs {}\n", yes_no(h.shimorin_1.holds), h.shimorin_1.lhs.0, h.shimorin_1.rhs.0);
    s += &format!("shimorin (second)  {}  lhs {} rhs {}\n", yes_no(h.shimorin_2.holds), h.shimorin_2.lhs.0, h.shimorin_2.rhs.0);
    match &r.structure {
        Stage::Completed(st) => {
            s += &format!(
                "structure          wandering dim {}, vanishing order {}, decomposition residual {}\n",
                st.wandering_dim,
                st.vanishing_order,
                format_real(st.decomposition_residual.0)
            );
            let b: Vec<String> = st.b.iter().take(6).map(|c| format!("{:.6}", c.0 .0)).collect();
            s += &format!("generator          b = [{}{}]\n", b.join(", "), if st.b.len() > 6 { ", ..." } else { "" });
        }
        Stage::Skipped { reason } => s += &format!("structure          skipped: {reason}\n"),
        Stage::Failed { reason } => s += &format!("structure          failed: {reason}\n"),
    }
    s += &format!("exit code          {}\n", r.verdict.exit_code);
    s
}

pub fn analyze(args: &AnalyzeArgs, out: &mut dyn Write) -> Result<u8, CliError> {
    let report = build_report(args)?;
    let body = if args.text {
        render_text(&report)
    } else {
        serde_json::to_string_pretty(&report).expect("report serializes") + "\n"
    };
    match &args.out {
        Some(path) => std::fs::write(path, body)?,
        None => out.write_all(body.as_bytes())?,
    }
    Ok(report.verdict.exit_code)
}

fn show(entry: &CatalogEntry, dim: usize, out: &mut dyn Write) -> Result<(), CliError> {
    let space = catalog::builtin(entry.name, dim)?;
    writeln!(out, "{}: {}", entry.name, entry.description)?;
    writeln!(out, "kind {}, window {}, dimension {}", space.kind(), space.ambient_dim(), space.dim())?;
    for (k, v) in &entry.params {
        writeln!(out, "  {k} = {v}")?;
    }
    if let Some(beta) = space.beta() {
        let shown: Vec<String> = beta.iter().map(|b| format_real(*b)).collect();
        writeln!(out, "beta = ({})", shown.join(", "))?;
    }
    writeln!(out, "expected facts:")?;
    for f in &entry.expected {
        writeln!(out, "  [{}] {}", f.origin, f.fact)?;
    }
    Ok(())
}

pub fn catalog(action: &CatalogAction, out: &mut dyn Write) -> Result<u8, CliError> {
    match action {
        CatalogAction::List => {
            for e in catalog::entries() {
                let origins: BTreeSet<String> = e.expected.iter().map(|f| f.origin.to_string()).collect();
                let origins: Vec<String> = origins.into_iter().collect();
                writeln!(
                    out,
                    "{:<18} {:<8} dim {:<3} {} (facts: {})",
                    e.name,
                    e.kind,
                    e.default_dim,
                    e.description,
                    origins.join(", ")
                )?;
            }
        }
        CatalogAction::Show { name, dim } => {
            let entry = catalog::entry(name)?;
            show(&entry, dim.unwrap_or(entry.default_dim), out)?;
        }
    }
    Ok(EXIT_OK)
}

/// Check entries concurrently; results come back ordered by name.
pub fn check_entries(names: &[String]) -> Result<Vec<EntryCheck>, CliError> {
    let entries = names.iter().map(|n| catalog::entry(n)).collect::<Result<Vec<_>, _>>()?;
    let opts = AnalysisOptions::default();
    let mut checks = std::thread::scope(|scope| {
        let handles: Vec<_> = entries
            .iter()
            .map(|e| scope.spawn(|| catalog::check_entry(e, e.default_dim, &opts)))
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect::<Result<Vec<_>, _>>()
    })?;
    checks.sort_by(|a, b| a.name.cmp(b.name));
    Ok(checks)
}

pub fn verify(args: &VerifyArgs, out: &mut dyn Write) -> Result<u8, CliError> {
    let names: Vec<String> = match &args.entry {
        Some(n) => vec![n.clone()],
        None => catalog::NAMES.iter().map(|s| s.to_string()).collect(),
    };
    let checks = check_entries(&names)?;
    let passed = checks.iter().all(EntryCheck::passed);
    if args.json {
        let report = VerifyReport { schema: SCHEMA, passed, entries: checks.iter().map(EntryOut::from).collect() };
        writeln!(out, "{}", serde_json::to_string_pretty(&report).expect("report serializes"))?;
    } else {
        writeln!(out, "{:<18} {:>4} {:>6} {:>8}  status", "entry", "dim", "pass", "skipped")?;
        for c in &checks {
            let count = |s| c.outcomes.iter().filter(|o| o.status == s).count();
            writeln!(
                out,
                "{:<18} {:>4} {:>6} {:>8}  {}",
                c.name,
                c.dim,
                format!("{}/{}", count(FactStatus::Pass), c.outcomes.len()),
                count(FactStatus::Skipped),
                if c.passed() { "pass" } else { "FAIL" }
            )?;
            for o in c.outcomes.iter().filter(|o| o.status == FactStatus::Fail) {
                writeln!(out, "    failed: {} (observed {})", o.fact.fact, o.observed)?;
            }
        }
    }
    Ok(if passed { EXIT_OK } else { EXIT_VERDICT })
}
