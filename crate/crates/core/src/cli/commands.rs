//! Command-line arguments and JSON report generation.

use std::io::Read;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use super::format::{parse_form, parse_manifold, parse_vector_form, ManifoldFile};
use crate::algebra::{Form, VectorForm};
use crate::builtins;
use crate::cohomology::{cohomology, ddbar_test, Model};
use crate::deformation::{deform, deformed_skt_metric, integrability_defect, polarisation_check, polarised_tangent_consistency};
use crate::error::{Error, Result};
use crate::exact::{Feasibility, Matrix, Scalar};
use crate::hodge_riemann::{hn_split, metrics_report, pairing, period_point, PairingKind};
use crate::metric::{Grading, Hodge};
use crate::polarisation::{
    l_omega, polarised_tangent_space, primitive_class_space, primitive_representative, skt_check, HolomorphicVolume,
    SktContext,
};

pub const SCHEMA: &str = "skt-polar.report/1";

#[derive(Parser, Debug, Clone)]
#[command(name = "skt-polar", version, about = "Exact cohomology and SKT polarisation computations")]
pub struct Cli {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct InputArgs {
    /// Use a builtin example (torus3, iwasawa, s3xs3-calabi-eckmann).
    #[arg(long, global = true)]
    pub builtin: Option<String>,
    /// Path to a manifold file, or `-` for stdin.
    #[arg(long, short, global = true)]
    pub file: Option<String>,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Validate the structure equations, metric and volume form.
    Validate,
    /// Cohomology dimensions and harmonic representatives.
    Cohomology {
        #[arg(long, default_value = "bc")]
        model: String,
        /// Bidegree as `p,q`.
        #[arg(long, conflicts_with_all = ["degree", "all"])]
        bidegree: Option<String>,
        #[arg(long, conflicts_with = "all")]
        degree: Option<usize>,
        #[arg(long)]
        all: bool,
    },
    /// Whether Bott-Chern, Dolbeault and Aeppli cohomology agree in every bidegree.
    DdbarTest,
    /// Whether the metric is SKT.
    Skt,
    /// Solve `∂̄ω = ∂∂̄α` and report the derived forms.
    Alpha,
    /// `L_[ω]` on a Bott-Chern class and the primitive class space.
    Primitive {
        #[arg(long)]
        class: Option<String>,
        #[arg(long)]
        bidegree: Option<String>,
    },
    /// Search for a primitive representative of a primitive class.
    PrimitiveRep {
        #[arg(long)]
        class: String,
        /// Restrict to d-closed representatives of the Dolbeault class.
        #[arg(long)]
        d_closed: bool,
    },
    /// The polarised tangent space.
    Tangent,
    /// Hodge-Riemann pairings and the ⋆-eigenspace split of H^n.
    Pairings {
        #[arg(long)]
        a: Option<String>,
        #[arg(long)]
        b: Option<String>,
    },
    /// Period point of the volume form, or of `--form`.
    Period {
        #[arg(long)]
        form: Option<String>,
    },
    /// Weil-Petersson and period metrics on the polarised tangent space.
    Metrics,
    /// Deform the bigrading along `t·θ`.
    Deform {
        #[arg(long)]
        theta: String,
        #[arg(long, allow_hyphen_values = true)]
        t: String,
    },
    /// Polarisation check and deformed SKT metric along `t·θ`.
    Polarised {
        #[arg(long)]
        theta: String,
        #[arg(long, allow_hyphen_values = true)]
        t: String,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Validate => "validate",
            Command::Cohomology { .. } => "cohomology",
            Command::DdbarTest => "ddbar-test",
            Command::Skt => "skt",
            Command::Alpha => "alpha",
            Command::Primitive { .. } => "primitive",
            Command::PrimitiveRep { .. } => "primitive-rep",
            Command::Tangent => "tangent",
            Command::Pairings { .. } => "pairings",
            Command::Period { .. } => "period",
            Command::Metrics => "metrics",
            Command::Deform { .. } => "deform",
            Command::Polarised { .. } => "polarised",
        }
    }
}

/// A finished run: the JSON report, a one-line summary and the exit code.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub report: Value,
    pub summary: String,
    pub exit_code: i32,
}

/// Reads the manifold named by the input flags.
pub fn load_input(input: &InputArgs) -> Result<(String, ManifoldFile)> {
    match (&input.builtin, &input.file) {
        (Some(_), Some(_)) => Err(Error::Usage("give either --builtin or --file, not both".into())),
        (None, None) => Err(Error::Usage("no input: use --builtin NAME or --file PATH".into())),
        (Some(name), None) => Ok((format!("builtin:{name}"), builtins::load(name)?)),
        (None, Some(path)) => {
            let text = if path == "-" {
                let mut s = String::new();
                std::io::stdin().read_to_string(&mut s).map_err(|e| Error::Usage(format!("reading stdin: {e}")))?;
                s
            } else {
                std::fs::read_to_string(path).map_err(|e| Error::Usage(format!("reading {path}: {e}")))?
            };
            Ok((path.clone(), parse_manifold(&text)?))
        }
    }
}

fn form_json(f: &Form) -> Value {
    Value::Array(f.terms().map(|(m, c)| json!([m.to_string(), c.to_string()])).collect())
}

fn vector_json(v: &VectorForm) -> Value {
    Value::Array(
        v.terms()
            .map(|(m, c)| json!([format!("{}", crate::algebra::Monomial::new(0, m.anti)), format!("Z{}", m.index + 1), c.to_string()]))
            .collect(),
    )
}

fn scalars_json(v: &[Scalar]) -> Value {
    Value::Array(v.iter().map(|c| Value::String(c.to_string())).collect())
}

fn matrix_json(m: &Matrix) -> Value {
    Value::Array((0..m.rows()).map(|r| scalars_json(&(0..m.cols()).map(|c| m.get(r, c)).collect::<Vec<_>>())).collect())
}

fn parse_pair(s: &str) -> Result<(usize, usize)> {
    let bad = || Error::Usage(format!("expected a bidegree `p,q`, got `{s}`"));
    let (a, b) = s.split_once(',').ok_or_else(bad)?;
    Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
}

fn parse_scalar(s: &str) -> Result<Scalar> {
    s.parse().map_err(|_| Error::Usage(format!("`{s}` is not a Gaussian rational")))
}

fn volume(m: &ManifoldFile) -> Result<HolomorphicVolume> {
    match &m.volume {
        Some(u) => HolomorphicVolume::new(&m.presentation, u.clone()),
        None => HolomorphicVolume::standard(&m.presentation),
    }
}

struct Run {
    results: serde_json::Map<String, Value>,
    checks: Vec<Value>,
    summary: Vec<String>,
}

impl Run {
    fn put(&mut self, k: &str, v: Value) {
        self.results.insert(k.to_string(), v);
    }

    fn check(&mut self, name: &str, passed: bool, detail: impl Into<String>) {
        self.checks.push(json!({ "check": name, "passed": passed, "detail": detail.into() }));
    }

    fn say(&mut self, s: impl Into<String>) {
        self.summary.push(s.into());
    }
}

fn group_json(h: &Hodge, model: Model, g: Grading) -> Result<Value> {
    let grp = cohomology(h, model, g)?;
    Ok(json!({
        "grading": g.to_string(),
        "dimension": grp.dimension(),
        "representatives": grp.representatives().iter().map(form_json).collect::<Vec<_>>(),
    }))
}

fn dispatch(cmd: &Command, m: &ManifoldFile, run: &mut Run) -> Result<()> {
    let p = &m.presentation;
    let n = p.n();
    let h = Hodge::new(p, &m.metric)?;
    match cmd {
        Command::Validate => {
            let rep = p.validate();
            for c in &rep.checks {
                run.check(&c.check, c.passed, c.detail.clone());
            }
            run.put("valid", json!(rep.passed()));
            run.put("structure_equations", Value::Array(p.dtable().iter().map(form_json).collect()));
            run.put("metric", matrix_json(m.metric.matrix()));
            let vol = volume(m);
            run.put("holomorphic_volume", json!(vol.is_ok()));
            run.say(format!("valid: {}, holomorphic volume: {}", rep.passed(), vol.is_ok()));
        }
        Command::Cohomology { model, bidegree, degree, all } => {
            let model: Model = model.parse()?;
            let gradings: Vec<Grading> = match (bidegree, degree) {
                (Some(b), _) => {
                    let (a, b) = parse_pair(b)?;
                    vec![Grading::Bidegree(a, b)]
                }
                (None, Some(k)) => vec![Grading::Degree(*k)],
                (None, None) => {
                    let _ = all;
                    if model == Model::DeRham {
                        (0..=2 * n).map(Grading::Degree).collect()
                    } else {
                        (0..=n).flat_map(|a| (0..=n).map(move |b| Grading::Bidegree(a, b))).collect()
                    }
                }
            };
            let groups: Vec<Value> = gradings.iter().map(|g| group_json(&h, model, *g)).collect::<Result<_>>()?;
            let dims: Vec<String> =
                groups.iter().filter(|g| g["dimension"] != 0).map(|g| format!("{}:{}", g["grading"].as_str().unwrap_or(""), g["dimension"])).collect();
            run.say(format!("{model} cohomology, nonzero: {}", dims.join(" ")));
            run.put("model", json!(model.to_string()));
            run.put("groups", Value::Array(groups));
        }
        Command::DdbarTest => {
            let rep = ddbar_test(&h)?;
            run.say(format!("ddbar property: {}", rep.holds));
            run.put("ddbar", serde_json::to_value(&rep).expect("serialisable"));
        }
        Command::Skt => {
            let r = crate::polarisation::ddbar_omega(p, &m.metric);
            run.put("skt", json!(skt_check(p, &m.metric)));
            run.put("ddbar_omega", form_json(&r));
            run.say(format!("SKT: {}", r.is_zero()));
        }
        Command::Alpha => {
            let ctx = SktContext::new(&h)?;
            match ctx.alpha_outcome() {
                Feasibility::Found(a) => {
                    run.put("feasible", json!(true));
                    run.put("alpha", form_json(a));
                    run.put("omega_tilde", form_json(&ctx.omega_tilde()?));
                    run.put("omega_hat", form_json(&ctx.omega_hat()?));
                    run.put("zeta", form_json(&ctx.zeta()?));
                    run.say(format!("α = {a}"));
                }
                Feasibility::Infeasible(cert) => {
                    run.put("feasible", json!(false));
                    run.put("certificate", scalars_json(&cert.left));
                    run.say("∂̄ω = ∂∂̄α has no invariant solution");
                }
            }
        }
        Command::Primitive { class, bidegree } => {
            let ctx = SktContext::new(&h)?;
            let gamma = class.as_deref().map(|c| parse_form(c, n)).transpose()?;
            let bideg = match (bidegree, &gamma) {
                (Some(b), _) => parse_pair(b)?,
                (None, Some(g)) => g.pure_bidegree().ok_or_else(|| Error::Bidegree(format!("{g} is not of pure type")))?,
                (None, None) => (n - 1, 1),
            };
            if let Some(g) = &gamma {
                let lv = l_omega(&ctx, bideg, g)?;
                let primitive = lv.class.iter().all(Scalar::is_zero);
                run.put("class", form_json(g));
                run.put("omega_wedge_class", form_json(&lv.wedge));
                run.put("aeppli_coordinates", scalars_json(&lv.class));
                run.put("primitive", json!(primitive));
                run.say(format!("ω∧γ = {}, primitive: {primitive}", lv.wedge));
            }
            if bideg.0 + bideg.1 == n {
                let sp = primitive_class_space(&ctx, bideg)?;
                run.put(
                    "primitive_space",
                    json!({
                        "bidegree": format!("({},{})", bideg.0, bideg.1),
                        "bc_dimension": sp.bc_dimension,
                        "dimension": sp.dimension(),
                        "image_rank": sp.image_rank,
                        "basis": sp.basis.iter().map(form_json).collect::<Vec<_>>(),
                    }),
                );
                run.say(format!("primitive classes in ({},{}): {} of {}", bideg.0, bideg.1, sp.dimension(), sp.bc_dimension));
            }
        }
        Command::PrimitiveRep { class, d_closed } => {
            let ctx = SktContext::new(&h)?;
            let g = parse_form(class, n)?;
            let bideg = g.pure_bidegree().ok_or_else(|| Error::Bidegree(format!("{g} is not of pure type")))?;
            let s = primitive_representative(&ctx, bideg, &g, *d_closed)?;
            run.put("d_closed", json!(d_closed));
            match &s.outcome {
                Feasibility::Found(v) => {
                    run.put("feasible", json!(true));
                    run.put("representative", form_json(v));
                    run.say(format!("primitive representative: {v}"));
                }
                Feasibility::Infeasible(cert) => {
                    let ok = cert.verify(&s.matrix, &s.rhs);
                    run.put("feasible", json!(false));
                    run.put("certificate", scalars_json(&cert.left));
                    run.check("infeasibility certificate", ok, "yᵀA = 0 and yᵀb ≠ 0");
                    run.say("no primitive representative (certified)");
                }
            }
        }
        Command::Tangent => {
            let ctx = SktContext::new(&h)?;
            let u = volume(m).ok();
            let ts = polarised_tangent_space(&ctx, u.as_ref())?;
            run.put("h01_dimension", json!(ts.h01_dimension));
            run.put("dimension", json!(ts.dimension()));
            run.put("aeppli_kernel_dimension", json!(ts.aeppli_kernel_dimension));
            run.put("basis", Value::Array(ts.basis.iter().map(vector_json).collect()));
            run.put("calabi_yau_matches_primitive", json!(ts.calabi_yau_matches_primitive));
            if let Some(ok) = ts.calabi_yau_matches_primitive {
                run.check("calabi-yau map onto primitive classes", ok, "");
            }
            run.say(format!("polarised tangent space: dimension {} of {}", ts.dimension(), ts.h01_dimension));
        }
        Command::Pairings { a, b } => {
            let split = hn_split(&h)?;
            run.put("h_plus", Value::Array(split.plus.iter().map(form_json).collect()));
            run.put("h_minus", Value::Array(split.minus.iter().map(form_json).collect()));
            run.say(format!("H^{n} = {} + {}", split.plus.len(), split.minus.len()));
            match (a, b) {
                (Some(a), Some(b)) => {
                    let (a, b) = (parse_form(a, n)?, parse_form(b, n)?);
                    run.put("q", json!(pairing(&h, PairingKind::Q, &a, &b)?.to_string()));
                    run.put("h", json!(pairing(&h, PairingKind::H, &a, &b)?.to_string()));
                }
                (None, None) => {}
                _ => return Err(Error::Usage("--a and --b must be given together".into())),
            }
        }
        Command::Period { form } => {
            let u = match form {
                Some(f) => parse_form(f, n)?,
                None => volume(m)?.form().clone(),
            };
            let pp = period_point(&h, &u)?;
            run.put("class", scalars_json(&pp.class));
            run.put("q", json!(pp.q.to_string()));
            run.put("h", json!(pp.h.to_string()));
            run.put("in_domain", json!(pp.in_domain));
            run.say(format!("Q = {}, H = {}, in period domain: {}", pp.q, pp.h, pp.in_domain));
        }
        Command::Metrics => {
            let ctx = SktContext::new(&h)?;
            let u = volume(m)?;
            let ts = polarised_tangent_space(&ctx, Some(&u))?;
            let r = metrics_report(&ctx, &u, &ts.basis)?;
            run.put("basis", Value::Array(r.basis.iter().map(vector_json).collect()));
            run.put("denominator", json!(r.denominator.to_string()));
            run.put("g1", matrix_json(&r.g1));
            run.put("g2", matrix_json(&r.g2));
            run.put("gamma", matrix_json(&r.gamma));
            run.put("diagnostics", serde_json::to_value(&r.diagnostics).expect("serialisable"));
            let ok = r.diagnostics.iter().all(|d| d.difference_defect.is_zero() && d.g2_defect.is_zero());
            run.check("G2 - gamma = 4|zeta|^2 / denominator", ok, "");
            run.say(format!("metrics on {} tangent classes; G2 = gamma: {}", r.basis.len(), r.g2 == r.gamma));
        }
        Command::Deform { theta, t } => {
            let th = parse_vector_form(theta, n)?;
            let t = parse_scalar(t)?;
            let defect = integrability_defect(p, &th, &t)?;
            let integrable = defect.iter().all(Form::is_zero);
            run.put("integrability_defect", Value::Array(defect.iter().map(form_json).collect()));
            run.put("integrable", json!(integrable));
            match deform(p, &th, &t) {
                Ok(ds) => {
                    run.put("structure_equations", Value::Array(ds.presentation().dtable().iter().map(form_json).collect()));
                    run.put("change_of_basis", matrix_json(ds.change_of_basis()));
                    run.say("deformed structure is integrable");
                }
                Err(e @ (Error::NotIntegrable(_) | Error::NotClosed(_))) => {
                    run.check("deformation", false, e.to_string());
                    run.say(e.to_string());
                }
                Err(e) => return Err(e),
            }
        }
        Command::Polarised { theta, t } => {
            let ctx = SktContext::new(&h)?;
            let th = parse_vector_form(theta, n)?;
            let t = parse_scalar(t)?;
            let ds = deform(p, &th, &t)?;
            let pc = polarisation_check(&ds, &ctx)?;
            run.put("polarised", json!(pc.polarised));
            run.put("class_02", scalars_json(&pc.class_02));
            run.put("class_20", scalars_json(&pc.class_20));
            let fo = polarised_tangent_consistency(&ctx, &th)?;
            run.put("first_order_coefficient", form_json(&fo.linear_coefficient));
            run.put("first_order_agrees", json!(fo.agrees));
            run.check("first-order obstruction equals [θ⌟ζ]_A", fo.agrees, "");
            match deformed_skt_metric(&ds, &ctx) {
                Ok(dm) => {
                    run.put("deformed_metric", matrix_json(dm.metric.matrix()));
                    run.put("deformed_metric_positive", json!(true));
                }
                Err(Error::NotPositive(e)) => {
                    run.put("deformed_metric_positive", json!(false));
                    run.check("deformed metric positivity", false, e);
                }
                Err(e) => return Err(e),
            }
            run.say(format!("polarised: {}", pc.polarised));
        }
    }
    Ok(())
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Parse { .. } => "parse",
        Error::Dimension(_) => "dimension",
        Error::Validation(_) => "validation",
        Error::Bidegree(_) => "bidegree",
        Error::Degree { .. } => "degree",
        Error::NotPositive(_) => "not-positive",
        Error::NotClosed(_) => "not-closed",
        Error::NotInNumerator { .. } => "not-in-numerator",
        Error::NotPrimitive(_) => "not-primitive",
        Error::DegenerateCoframe(_) => "degenerate-coframe",
        Error::NotIntegrable(_) => "not-integrable",
        Error::MissingVolume(_) => "missing-volume",
        Error::Infeasible(_) => "infeasible",
        Error::NotApplicable(_) => "not-applicable",
        Error::Unsupported(_) => "unsupported",
        Error::Usage(_) => "usage",
    }
}

/// Runs a command on an already loaded manifold.
pub fn run_on(cmd: &Command, source: &str, m: &ManifoldFile) -> Outcome {
    let mut run = Run { results: serde_json::Map::new(), checks: Vec::new(), summary: Vec::new() };
    let res = dispatch(cmd, m, &mut run);
    let mut report = json!({
        "schema": SCHEMA,
        "command": cmd.name(),
        "input": { "source": source, "name": m.name, "n": m.presentation.n() },
        "results": Value::Object(run.results),
        "checks": Value::Array(run.checks),
    });
    let exit_code = match &res {
        Ok(()) => 0,
        Err(e) => {
            report["error"] = json!({ "kind": error_kind(e), "message": e.to_string() });
            run.summary.push(format!("error: {e}"));
            1
        }
    };
    Outcome { report, summary: run.summary.join("\n"), exit_code }
}

/// Loads the input and runs the command; input errors give exit code 2 and no report.
pub fn run(cli: &Cli) -> std::result::Result<Outcome, Error> {
    let (source, m) = load_input(&cli.input)?;
    Ok(run_on(&cli.command, &source, &m))
}
