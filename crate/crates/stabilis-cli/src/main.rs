//! Command-line front end: parse inputs, dispatch checks and
//! certifications, emit deterministic JSON reports and exit codes.
//!
//! Exit codes: 0 verdict is stable/member/preserver (sampled acceptances
//! are flagged in the report), 1 refuted or not-a-preserver with witness,
//! 2 inconclusive or out of a theorem's scope, 3 input error.

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use stabilis::domains::{
    certify_domain_preserver, certify_lee_yang_preserver, domain_symbol, lee_yang_membership,
    minus_domain_symbol, parse_domains, parse_domains_json,
    phi_kappa_transform, roundtrip_constant, strict_sufficiency_check, CircularDomain,
    DomainProduct,
};
use stabilis::growth::{
    coefficient_bound_check, growth_bound_check, minimal_support_growth_constants,
    szasz_growth_check, szasz_root_sum_check,
};
use stabilis::multi::{
    check_real_stability, check_stability, proper_position_multi, MultiStatus, MultiVerdict,
    SamplingConfig,
};
use stabilis::multiindex::ExpVec;
use stabilis::operator::{
    algebraic_symbol, alt_symbol, certify_complex_preserver, certify_real_preserver,
    certify_transcendental, halfplane_symbol, parse_operator, reflected_symbol, CertVerdict,
    LinearOperatorSpec,
};
use stabilis::parse::{parse_mpoly_with, ParseLimits, VarMode};
use stabilis::polarization::{polarize, project};
use stabilis::{Error, MPoly, VarNames};

#[derive(Parser)]
#[command(name = "stabilis", version, about = "Exact stability certification for multivariate polynomials")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Sample count for the refutation-exact samplers.
    #[arg(long, global = true)]
    samples: Option<u32>,
    /// Seed for deterministic sampling (env STABILIS_SEED overrides).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Height bound for sampled rationals p/q.
    #[arg(long, global = true)]
    height: Option<u32>,
    /// Demand certified output; sampled acceptances become inconclusive.
    #[arg(long, global = true)]
    strict: bool,
    /// Output format.
    #[arg(long, global = true, default_value = "json")]
    format: String,
    /// Worker threads (accepted for compatibility; evaluation is
    /// deterministic regardless).
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Args, Clone)]
struct PolyArg {
    /// Polynomial in the text grammar, variables z1..zN.
    #[arg(long)]
    poly: String,
    /// Fix the number of variables (inferred from indices otherwise).
    #[arg(long)]
    nvars: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Test stability on the open upper half-plane product.
    CheckStability(PolyArg),
    /// Test real stability (real coefficients plus stability).
    CheckRealStability(PolyArg),
    /// Decide proper position f << g (stability of g + i f).
    ProperPosition {
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
        #[arg(long)]
        nvars: Option<usize>,
    },
    /// Print an operator symbol.
    Symbol {
        /// Path to the operator JSON description.
        #[arg(long)]
        op: String,
        /// algebraic | alt | reflected | halfplane | domain | domain-minus
        #[arg(long, default_value = "algebraic")]
        variant: String,
        /// Truncation order for alt/halfplane variants, e.g. "2,2".
        #[arg(long)]
        beta: Option<String>,
        /// Domain product for the domain variants, e.g. "D,D".
        #[arg(long)]
        domains: Option<String>,
    },
    /// Certify a stability preserver on the bounded-degree space.
    Certify {
        #[arg(long)]
        op: String,
    },
    /// Certify a real stability preserver.
    CertifyReal {
        #[arg(long)]
        op: String,
    },
    /// Certify a preserver over a product of circular domains.
    CertifyDomain {
        #[arg(long)]
        op: String,
        #[arg(long)]
        domains: String,
    },
    /// Certify a Lee-Yang preserver (non-degenerate operators).
    CertifyLy {
        #[arg(long)]
        op: String,
        #[arg(long)]
        domains: String,
    },
    /// Stability of every transcendental-symbol truncation up to beta-max.
    TruncationSweep {
        #[arg(long)]
        op: String,
        #[arg(long, value_name = "m,m")]
        beta_max: String,
    },
    /// Polarize a polynomial to its multi-affine lift.
    Polarize {
        #[command(flatten)]
        poly: PolyArg,
        #[arg(long)]
        kappa: String,
    },
    /// Project a multi-affine polynomial in block variables z<i>_<j>.
    Project {
        #[arg(long)]
        poly: String,
        #[arg(long)]
        kappa: String,
    },
    /// Apply the degree-kappa Moebius transform of a domain product.
    Transform {
        #[command(flatten)]
        poly: PolyArg,
        #[arg(long)]
        domains: String,
        #[arg(long)]
        kappa: String,
        /// Use the inverse maps (transport toward the half-plane side).
        #[arg(long)]
        inverse: bool,
    },
    /// Lee-Yang membership over a domain product.
    LyMember {
        #[command(flatten)]
        poly: PolyArg,
        #[arg(long)]
        domains: String,
        #[arg(long)]
        kappa: String,
    },
    /// Szasz root-modulus and univariate growth checks.
    Szasz {
        #[command(flatten)]
        poly: PolyArg,
        #[arg(long, default_value_t = 1.0)]
        radius: f64,
    },
    /// Coefficient and polydisk growth bounds.
    Growth {
        #[command(flatten)]
        poly: PolyArg,
        #[arg(long, default_value_t = 1.0)]
        radius: f64,
        #[arg(long)]
        grid: Option<usize>,
    },
    /// Sufficiency-only strict stability check of an operator symbol.
    StrictCheck {
        #[arg(long)]
        op: String,
        /// Optional convex closed domain (H, D, H@u).
        #[arg(long)]
        domain: Option<String>,
    },
}

fn main() {
    let cli = Cli::parse();
    let argv: Vec<String> = std::env::args().collect();
    let mut cfg = SamplingConfig::default();
    if let Some(s) = cli.samples {
        cfg.sample_count = s;
    }
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if let Ok(env_seed) = std::env::var("STABILIS_SEED") {
        if let Ok(s) = env_seed.parse() {
            cfg.seed = s;
        }
    }
    if let Some(h) = cli.height {
        cfg.height = h;
    }
    cfg.strict = cli.strict;

    let (name, outcome) = run(&cli.command, &cfg);
    let code = match outcome {
        Ok((result, code)) => {
            let report = json!({
                "command": name,
                "result": result,
                "replay": {
                    "argv": argv,
                    "seed": cfg.seed,
                    "samples": cfg.sample_count,
                    "height": cfg.height,
                    "strict": cfg.strict,
                    "version": env!("CARGO_PKG_VERSION"),
                },
            });
            let report = tag_floats(report);
            if cli.format == "text" {
                print_text(&report);
            } else {
                println!("{}", serde_json::to_string_pretty(&report).expect("serialize"));
            }
            code
        }
        Err(e) => {
            let report = json!({
                "command": name,
                "error": e.to_string(),
                "replay": {"argv": argv, "seed": cfg.seed, "version": env!("CARGO_PKG_VERSION")},
            });
            if cli.format == "text" {
                eprintln!("error: {}", e);
            } else {
                println!("{}", serde_json::to_string_pretty(&report).expect("serialize"));
            }
            3
        }
    };
    std::process::exit(code);
}

type Outcome = Result<(Value, i32), Error>;

fn run(cmd: &Command, cfg: &SamplingConfig) -> (&'static str, Outcome) {
    match cmd {
        Command::CheckStability(p) => ("check-stability", check_stability_cmd(p, cfg, false)),
        Command::CheckRealStability(p) => {
            ("check-real-stability", check_stability_cmd(p, cfg, true))
        }
        Command::ProperPosition { f, g, nvars } => {
            ("proper-position", proper_position_cmd(f, g, *nvars, cfg))
        }
        Command::Symbol { op, variant, beta, domains } => {
            ("symbol", symbol_cmd(op, variant, beta.as_deref(), domains.as_deref()))
        }
        Command::Certify { op } => ("certify", certify_cmd(op, cfg, false)),
        Command::CertifyReal { op } => ("certify-real", certify_cmd(op, cfg, true)),
        Command::CertifyDomain { op, domains } => {
            ("certify-domain", certify_domain_cmd(op, domains, cfg))
        }
        Command::CertifyLy { op, domains } => ("certify-ly", certify_ly_cmd(op, domains, cfg)),
        Command::TruncationSweep { op, beta_max } => {
            ("truncation-sweep", truncation_cmd(op, beta_max, cfg))
        }
        Command::Polarize { poly, kappa } => ("polarize", polarize_cmd(poly, kappa)),
        Command::Project { poly, kappa } => ("project", project_cmd(poly, kappa)),
        Command::Transform { poly, domains, kappa, inverse } => {
            ("transform", transform_cmd(poly, domains, kappa, *inverse))
        }
        Command::LyMember { poly, domains, kappa } => {
            ("ly-member", ly_member_cmd(poly, domains, kappa, cfg))
        }
        Command::Szasz { poly, radius } => ("szasz", szasz_cmd(poly, *radius)),
        Command::Growth { poly, radius, grid } => ("growth", growth_cmd(poly, *radius, *grid, cfg)),
        Command::StrictCheck { op, domain } => {
            ("strict-check", strict_cmd(op, domain.as_deref(), cfg))
        }
    }
}

fn parse_poly_arg(p: &PolyArg) -> Result<(MPoly, VarNames), Error> {
    parse_mpoly_with(&p.poly, VarMode::Z { nvars: p.nvars }, &ParseLimits::default())
}

fn parse_kappa(text: &str) -> Result<ExpVec, Error> {
    let mut out = Vec::new();
    for part in text.split(',') {
        let k: u32 = part
            .trim()
            .parse()
            .map_err(|_| Error::Schema(format!("bad kappa entry '{}'", part)))?;
        out.push(k);
    }
    Ok(ExpVec(out))
}

fn load_operator(path: &str) -> Result<LinearOperatorSpec, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Schema(format!("cannot read '{}': {}", path, e)))?;
    parse_operator(&text)
}

fn load_domains(spec: &str) -> Result<DomainProduct, Error> {
    let trimmed = spec.trim();
    if trimmed.starts_with('[') {
        parse_domains_json(trimmed)
    } else if let Some(path) = trimmed.strip_prefix('@') {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Schema(format!("cannot read '{}': {}", path, e)))?;
        parse_domains_json(&text)
    } else {
        parse_domains(trimmed)
    }
}

fn verdict_code(v: &MultiVerdict) -> i32 {
    match v.status {
        MultiStatus::ExactStable | MultiStatus::PassedSamples => 0,
        MultiStatus::RefutedWithWitness => 1,
        MultiStatus::ZeroPolynomial => 2,
    }
}

fn cert_code(v: &CertVerdict) -> i32 {
    match v {
        CertVerdict::PreserverSymbolStable | CertVerdict::PreserverDegenerate => 0,
        CertVerdict::NotPreserver => 1,
        CertVerdict::Inconclusive => 2,
    }
}

fn check_stability_cmd(p: &PolyArg, cfg: &SamplingConfig, real: bool) -> Outcome {
    let (f, names) = parse_poly_arg(p)?;
    let v = if real {
        match check_real_stability(&f, cfg) {
            Ok(v) => v,
            Err(Error::NonRealCoefficient(mono, coeff)) => {
                let result = json!({
                    "status": "NotRealStable",
                    "witness": {"nonreal_coefficient": {"monomial": mono, "value": coeff}},
                });
                return Ok((result, 1));
            }
            Err(e) => return Err(e),
        }
    } else {
        check_stability(&f, cfg)
    };
    let code = verdict_code(&v);
    let result = json!({
        "input": f.to_canonical_string(&names),
        "verdict": v,
        "certified": v.is_exact(),
    });
    Ok((result, code))
}

fn proper_position_cmd(
    f: &str,
    g: &str,
    nvars: Option<usize>,
    cfg: &SamplingConfig,
) -> Outcome {
    let limits = ParseLimits::default();
    // Infer a common variable count from both inputs.
    let nf = parse_mpoly_with(f, VarMode::Z { nvars }, &limits)?.1.len();
    let ng = parse_mpoly_with(g, VarMode::Z { nvars }, &limits)?.1.len();
    let n = nf.max(ng).max(nvars.unwrap_or(0)).max(1);
    let fp = parse_mpoly_with(f, VarMode::Z { nvars: Some(n) }, &limits)?.0;
    let gp = parse_mpoly_with(g, VarMode::Z { nvars: Some(n) }, &limits)?.0;
    let v = proper_position_multi(&fp, &gp, cfg)?;
    let code = verdict_code(&v);
    Ok((json!({"f": f, "g": g, "verdict": v}), code))
}

fn symbol_cmd(
    op: &str,
    variant: &str,
    beta: Option<&str>,
    domains: Option<&str>,
) -> Outcome {
    let t = load_operator(op)?;
    let n = t.nvars();
    let zw = VarNames::zw(n);
    let (name, poly): (&str, MPoly) = match variant {
        "algebraic" => ("algebraic", algebraic_symbol(&t)),
        "alt" => {
            let b = match beta {
                Some(b) => parse_kappa(b)?,
                None => t.kappa().clone(),
            };
            ("alt", alt_symbol(&t, &b)?)
        }
        "reflected" => ("reflected", reflected_symbol(&t)),
        "halfplane" => {
            let b = match beta {
                Some(b) => parse_kappa(b)?,
                None => t.kappa().clone(),
            };
            ("halfplane", halfplane_symbol(&t, &b)?)
        }
        "domain" | "domain-minus" => {
            let spec = domains
                .ok_or_else(|| Error::Schema("domain variants need --domains".into()))?;
            let d = load_domains(spec)?;
            if variant == "domain" {
                ("domain", domain_symbol(&t, &d)?)
            } else {
                ("domain-minus", minus_domain_symbol(&t, &d)?)
            }
        }
        other => return Err(Error::Schema(format!("unknown symbol variant '{}'", other))),
    };
    let result = json!({
        "variant": name,
        "symbol": poly.to_canonical_string(&zw),
        "nvars": n,
    });
    Ok((result, 0))
}

fn certify_cmd(op: &str, cfg: &SamplingConfig, real: bool) -> Outcome {
    let t = load_operator(op)?;
    let heavy = SamplingConfig { sample_count: cfg.sample_count.max(256), ..cfg.clone() };
    let report = if real {
        certify_real_preserver(&t, &heavy)?
    } else {
        certify_complex_preserver(&t, &heavy)
    };
    let code = cert_code(&report.verdict);
    Ok((serde_json::to_value(&report).expect("serialize"), code))
}

fn certify_domain_cmd(op: &str, domains: &str, cfg: &SamplingConfig) -> Outcome {
    let t = load_operator(op)?;
    let d = load_domains(domains)?;
    let heavy = SamplingConfig { sample_count: cfg.sample_count.max(256), ..cfg.clone() };
    let report = certify_domain_preserver(&t, &d, &heavy)?;
    let code = cert_code(&report.verdict);
    Ok((serde_json::to_value(&report).expect("serialize"), code))
}

fn certify_ly_cmd(op: &str, domains: &str, cfg: &SamplingConfig) -> Outcome {
    let t = load_operator(op)?;
    let d = load_domains(domains)?;
    let heavy = SamplingConfig { sample_count: cfg.sample_count.max(256), ..cfg.clone() };
    let report = certify_lee_yang_preserver(&t, &d, &heavy)?;
    let code = cert_code(&report.verdict);
    Ok((serde_json::to_value(&report).expect("serialize"), code))
}

fn truncation_cmd(op: &str, beta_max: &str, cfg: &SamplingConfig) -> Outcome {
    let t = load_operator(op)?;
    let bmax = parse_kappa(beta_max)?;
    let sweep = certify_transcendental(&t, &bmax, cfg)?;
    let code = if sweep.passed { 0 } else { 1 };
    Ok((serde_json::to_value(&sweep).expect("serialize"), code))
}

fn polarize_cmd(poly: &PolyArg, kappa: &str) -> Outcome {
    let (f, _) = parse_poly_arg(poly)?;
    let k = parse_kappa(kappa)?;
    let lifted = polarize(&f, &k)?;
    let names = VarNames::blocks("z", &k.0);
    Ok((
        json!({
            "kappa": k.0,
            "polarized": lifted.to_canonical_string(&names),
            "nvars": lifted.nvars(),
        }),
        0,
    ))
}

fn project_cmd(poly: &str, kappa: &str) -> Outcome {
    let k = parse_kappa(kappa)?;
    let names = VarNames::blocks("z", &k.0);
    let (f, _) = parse_mpoly_with(poly, VarMode::Named(names), &ParseLimits::default())?;
    let projected = project(&f, &k)?;
    let out_names = VarNames::z(projected.nvars());
    Ok((
        json!({
            "kappa": k.0,
            "projected": projected.to_canonical_string(&out_names),
        }),
        0,
    ))
}

fn transform_cmd(poly: &PolyArg, domains: &str, kappa: &str, inverse: bool) -> Outcome {
    let (f, names) = parse_poly_arg(poly)?;
    let d = load_domains(domains)?;
    let k = parse_kappa(kappa)?;
    let maps: Vec<_> = if inverse {
        d.0.iter().map(|c| c.phi.inverse()).collect()
    } else {
        d.maps()
    };
    let g = phi_kappa_transform(&f, &maps, &k)?;
    let constant = roundtrip_constant(&maps, &k);
    let out_names = if names.len() == f.nvars() { names } else { VarNames::z(f.nvars()) };
    Ok((
        json!({
            "transformed": g.to_canonical_string(&out_names),
            "roundtrip_constant": constant.to_canonical_string(),
            "inverse": inverse,
        }),
        0,
    ))
}

fn ly_member_cmd(
    poly: &PolyArg,
    domains: &str,
    kappa: &str,
    cfg: &SamplingConfig,
) -> Outcome {
    let (f, _) = parse_poly_arg(poly)?;
    let d = load_domains(domains)?;
    let k = parse_kappa(kappa)?;
    if d.len() != f.nvars() || k.len() != f.nvars() {
        // allow constants in fewer variables by re-embedding
        if f.nvars() < d.len() {
            let f2 = f.embed(d.len(), 0);
            let r = lee_yang_membership(&f2, &d, &k, cfg)?;
            let code = if r.member { 0 } else { 1 };
            return Ok((serde_json::to_value(&r).expect("serialize"), code));
        }
        return Err(Error::DimensionMismatch(d.len(), f.nvars()));
    }
    let r = lee_yang_membership(&f, &d, &k, cfg)?;
    let code = if r.member { 0 } else { 1 };
    Ok((serde_json::to_value(&r).expect("serialize"), code))
}

fn szasz_cmd(poly: &PolyArg, radius: f64) -> Outcome {
    let (f, _) = parse_poly_arg(poly)?;
    let p = f.to_upoly()?;
    let root_sum = szasz_root_sum_check(&p)?;
    let growth = szasz_growth_check(&p, radius, 64)?;
    let pass = root_sum.pass && growth.pass;
    Ok((
        json!({"root_sum": root_sum, "growth": growth}),
        if pass { 0 } else { 1 },
    ))
}

fn growth_cmd(
    poly: &PolyArg,
    radius: f64,
    grid: Option<usize>,
    cfg: &SamplingConfig,
) -> Outcome {
    let (f, _) = parse_poly_arg(poly)?;
    let coeffs = coefficient_bound_check(&f, cfg)?;
    let bound = growth_bound_check(&f, radius, grid, cfg)?;
    let minimal = minimal_support_growth_constants(&f)?;
    let pass = coeffs.pass && bound.pass;
    Ok((
        json!({
            "coefficient_bound": coeffs,
            "growth_bound": bound,
            "minimal_support_constants": minimal,
        }),
        if pass { 0 } else { 1 },
    ))
}

fn strict_cmd(op: &str, domain: Option<&str>, cfg: &SamplingConfig) -> Outcome {
    let t = load_operator(op)?;
    let dom: Option<CircularDomain> = match domain {
        None => None,
        Some(spec) => {
            let d = load_domains(spec)?;
            if d.len() != 1 {
                return Err(Error::Schema("strict-check takes a single domain".into()));
            }
            Some(d.0.into_iter().next().unwrap())
        }
    };
    let report = strict_sufficiency_check(&t, dom.as_ref(), cfg)?;
    let code = if report.sufficient_sampled { 0 } else { 2 };
    Ok((serde_json::to_value(&report).expect("serialize"), code))
}

/// Print every float with 17 significant digits and tag it as numeric;
/// exact values travel as strings.
fn tag_floats(v: Value) -> Value {
    match v {
        Value::Number(n) => {
            if n.is_f64() && !n.is_i64() && !n.is_u64() {
                let x = n.as_f64().unwrap();
                json!({"value": format!("{:.16e}", x), "kind": "numeric"})
            } else {
                Value::Number(n)
            }
        }
        Value::Array(items) => Value::Array(items.into_iter().map(tag_floats).collect()),
        Value::Object(map) => {
            Value::Object(map.into_iter().map(|(k, v)| (k, tag_floats(v))).collect())
        }
        other => other,
    }
}

fn print_text(v: &Value) {
    fn walk(prefix: &str, v: &Value) {
        match v {
            Value::Object(map) => {
                if let (Some(Value::String(val)), Some(Value::String(kind))) =
                    (map.get("value"), map.get("kind"))
                {
                    if kind == "numeric" {
                        println!("{} = {} (numeric)", prefix, val);
                        return;
                    }
                }
                for (k, val) in map {
                    let key = if prefix.is_empty() { k.clone() } else { format!("{}.{}", prefix, k) };
                    walk(&key, val);
                }
            }
            Value::Array(items) => {
                for (i, val) in items.iter().enumerate() {
                    walk(&format!("{}[{}]", prefix, i), val);
                }
            }
            other => println!("{} = {}", prefix, other),
        }
    }
    walk("", v);
}
