//! File formats and report rendering.
//!
//! A distribution file is canonical JSON:
//!
//! ```json
//! {"field_order": 8, "terms": [{"angle": "1/8", "coeff": "z(8)^3 + 2", "order": 1}]}
//! ```
//!
//! Angles are turns (`"p/q"`) or radians (`"p/q pi"`); coefficients are
//! cyclotomic expressions in `z(N)` and `i`. An instance file holds `f` and
//! optionally `g` in that form plus analysis parameters. All emitted JSON
//! has sorted keys and rationals as strings.

use std::fmt;
use std::str::FromStr;

use serde::de::{self, Deserializer};
use serde::Deserialize;
use serde_json::{json, Map, Value};

use crate::circle::{Angle, Arc, Window};
use crate::cyclotomic::CycloNumber;
use crate::distribution::Distribution;
use crate::error::{Error, Result};
use crate::fuzz::FuzzReport;
use crate::oracle::{Instance, OracleVerdict};
use crate::rational::{format_fraction, format_pi, parse_rational, Rational};
use crate::titchmarsh::{
    Certificate, Corollary2Verdict, Fact, PowerReport, ReflectionCase, ReflectionMode, ReflectionOutcome, Root,
    TitchmarshReport,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Pair,
    Reflection,
    Power,
    Lemma,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Pair => "pair",
            Mode::Reflection => "reflection",
            Mode::Power => "power",
            Mode::Lemma => "lemma",
        }
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Mode, String> {
        match s {
            "pair" => Ok(Mode::Pair),
            "reflection" => Ok(Mode::Reflection),
            "power" => Ok(Mode::Power),
            "lemma" => Ok(Mode::Lemma),
            _ => Err(format!("unknown mode {s:?}; expected pair, reflection, power or lemma")),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl<'de> Deserialize<'de> for Mode {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Mode, D::Error> {
        String::deserialize(d)?.parse().map_err(de::Error::custom)
    }
}

struct AngleField(Angle);

impl<'de> Deserialize<'de> for AngleField {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        Angle::parse(&text).map(AngleField).map_err(de::Error::custom)
    }
}

struct RationalField(Rational);

impl<'de> Deserialize<'de> for RationalField {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        parse_rational(&text).map(RationalField).map_err(de::Error::custom)
    }
}

struct CoeffField(CycloNumber);

impl<'de> Deserialize<'de> for CoeffField {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(v) => Ok(CoeffField(CycloNumber::from_int(v))),
            Raw::Text(t) => CycloNumber::parse(&t).map(CoeffField).map_err(de::Error::custom),
        }
    }
}

fn one() -> CoeffField {
    CoeffField(CycloNumber::one(1))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTerm {
    angle: AngleField,
    #[serde(default = "one")]
    coeff: CoeffField,
    #[serde(default)]
    order: u32,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDistribution {
    field_order: Option<u32>,
    terms: Vec<RawTerm>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawArc {
    inf: RationalField,
    sup: RationalField,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFile {
    field_order: Option<u32>,
    terms: Option<Vec<RawTerm>>,
    f: Option<RawDistribution>,
    g: Option<RawDistribution>,
    components: Option<Vec<RawDistribution>>,
    arc: Option<RawArc>,
    n: Option<u32>,
    p: Option<u32>,
    mode: Option<Mode>,
    lambda: Option<RationalField>,
    conjugate: Option<bool>,
}

/// Parsed contents of an instance or distribution file.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct InstanceFile {
    /// `f`, then `g`, in file order. A bare distribution file gives one.
    pub distributions: Vec<Distribution>,
    pub components: Option<Vec<Distribution>>,
    pub arc: Option<Arc>,
    pub n: Option<u32>,
    pub p: Option<u32>,
    pub mode: Option<Mode>,
    pub lambda: Option<Rational>,
    pub conjugate: Option<bool>,
}

fn build(raw: Vec<RawTerm>, field_order: Option<u32>, path: &str) -> Result<Distribution> {
    if field_order == Some(0) {
        return Err(Error::Input(format!("{path}field_order: must be positive")));
    }
    let mut f = Distribution::zero();
    for (k, t) in raw.into_iter().enumerate() {
        let c = t.coeff.0;
        if let Some(order) = field_order {
            if order % c.minimal_order() != 0 {
                return Err(Error::Input(format!(
                    "{path}terms[{k}].coeff: {} does not lie in Q(z({order}))",
                    c.to_expr()
                )));
            }
        }
        f.add_term(t.angle.0, t.order, c);
    }
    Ok(f)
}

/// Parses an instance file. Errors name the offending field and, for
/// syntax and value errors, the line and column.
pub fn parse_instance(text: &str) -> Result<InstanceFile> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let raw: RawFile = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        let field = if path == "." { String::new() } else { format!("{path}: ") };
        Error::Input(format!(
            "{field}{} (line {}, column {})",
            strip_position(&inner.to_string()),
            inner.line(),
            inner.column()
        ))
    })?;
    let mut file = InstanceFile {
        n: raw.n,
        p: raw.p,
        mode: raw.mode,
        lambda: raw.lambda.map(|l| l.0),
        conjugate: raw.conjugate,
        ..InstanceFile::default()
    };
    if let Some(terms) = raw.terms {
        if raw.f.is_some() || raw.g.is_some() {
            return Err(Error::Input("a file holds either terms or f/g, not both".into()));
        }
        file.distributions.push(build(terms, raw.field_order, "")?);
    } else if raw.field_order.is_some() {
        return Err(Error::Input("field_order without terms".into()));
    }
    if let Some(f) = raw.f {
        file.distributions.push(build(f.terms, f.field_order, "f.")?);
    }
    if let Some(g) = raw.g {
        if file.distributions.is_empty() {
            return Err(Error::Input("g given without f".into()));
        }
        file.distributions.push(build(g.terms, g.field_order, "g.")?);
    }
    if let Some(comps) = raw.components {
        let built = comps
            .into_iter()
            .enumerate()
            .map(|(j, c)| build(c.terms, c.field_order, &format!("components[{j}].")))
            .collect::<Result<Vec<_>>>()?;
        file.components = Some(built);
    }
    if let Some(arc) = raw.arc {
        file.arc = Some(Arc::from_bounds(arc.inf.0, arc.sup.0).map_err(|e| Error::Input(format!("arc: {e}")))?);
    }
    Ok(file)
}

fn strip_position(msg: &str) -> &str {
    match msg.rfind(" at line ") {
        Some(i) => &msg[..i],
        None => msg,
    }
}

/// Canonical JSON value of a distribution. Each coefficient is written in
/// its smallest cyclotomic field; `field_order` is their least common
/// multiple.
pub fn distribution_json(f: &Distribution) -> Value {
    let mut order = 1u32;
    let terms: Vec<Value> = f
        .terms()
        .map(|(x, p, c)| {
            let m = c.minimal_order();
            order = crate::rational::lcm_u32(order, m);
            let c = c.demote(m).expect("minimal order holds the value");
            json!({"angle": x.to_string(), "coeff": c.to_expr(), "order": p})
        })
        .collect();
    json!({"field_order": order, "terms": terms})
}

/// Canonical file text: pretty JSON, sorted keys, trailing newline.
pub fn to_canonical_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

pub fn write_distribution(f: &Distribution) -> String {
    to_canonical_string(&distribution_json(f))
}

/// Instance file reproducing an analyzer input.
pub fn instance_json(instance: &Instance) -> Value {
    match instance {
        Instance::Pair { f, g, n } => json!({
            "mode": "pair", "n": n, "f": distribution_json(f), "g": distribution_json(g),
        }),
        Instance::Lemma { components, arc, n } => json!({
            "mode": "lemma",
            "n": n,
            "arc": {"inf": format_fraction(arc.inf()), "sup": format_fraction(&arc.sup())},
            "components": components.iter().map(distribution_json).collect::<Vec<_>>(),
        }),
        Instance::Power { f, n, p } => json!({
            "mode": "power", "n": n, "p": p, "f": distribution_json(f),
        }),
        Instance::Reflection { f, mode } => json!({
            "mode": "reflection",
            "conjugate": *mode == ReflectionMode::Conjugate,
            "f": distribution_json(f),
        }),
    }
}

fn rational(x: &Rational) -> Value {
    Value::String(format_fraction(x))
}

fn opt_rational(x: &Option<Rational>) -> Value {
    x.as_ref().map_or(Value::Null, rational)
}

fn arc_json(a: &Arc) -> Value {
    json!({
        "inf": format_fraction(a.inf()),
        "sup": format_fraction(&a.sup()),
        "length": format_fraction(a.length()),
        "inf_pi": format_pi(a.inf()),
        "sup_pi": format_pi(&a.sup()),
    })
}

fn window_json(w: &Window) -> Value {
    json!({"lo": format_fraction(w.lo()), "hi": format_fraction(w.hi())})
}

fn root_value(r: &Root) -> CycloNumber {
    r.value.demote(r.value.minimal_order()).expect("minimal order holds the value")
}

fn root_json(r: &Option<Root>) -> Value {
    r.as_ref().map_or(Value::Null, |r| {
        json!({"exponent": r.exponent, "n": r.n, "value": root_value(r).to_expr()})
    })
}

fn fact_json(f: &Fact) -> Value {
    match f {
        Fact::Vanishes => json!("vanishes"),
        Fact::InfEquals(v) => json!({"inf_equals": format_fraction(v)}),
        Fact::SupEquals(v) => json!({"sup_equals": format_fraction(v)}),
    }
}

fn certificate_json(c: &Certificate) -> Value {
    json!({
        "role": c.role.name(),
        "side": match c.side { crate::titchmarsh::Side::F => "f", crate::titchmarsh::Side::G => "g" },
        "root": root_json(&Some(c.root.clone())),
        "window": window_json(&c.window),
        "fact": fact_json(&c.fact),
        "verified": c.verified,
    })
}

fn corollary_json(v: &Corollary2Verdict) -> Value {
    match v {
        Corollary2Verdict::Annihilated => json!({"annihilated": true, "agrees": true}),
        Corollary2Verdict::Decided {
            lambda_positive,
            symmetric,
            alpha,
            lambda_symmetric,
            convolution_vanishes,
        } => json!({
            "annihilated": false,
            "agrees": v.agrees(),
            "lambda_positive": lambda_positive,
            "symmetric": symmetric,
            "alpha": alpha,
            "lambda_symmetric": opt_rational(lambda_symmetric),
            "convolution_vanishes": convolution_vanishes,
        }),
    }
}

/// A finished analysis, ready for rendering.
#[derive(Clone, Debug)]
pub enum Analysis {
    Pair {
        report: TitchmarshReport,
        convolution: Distribution,
        corollary: Option<Corollary2Verdict>,
    },
    Reflection {
        mode: ReflectionMode,
        outcome: ReflectionOutcome,
    },
    Power(PowerReport),
    Lemma {
        n: u32,
        root: Root,
        combined: Distribution,
    },
}

fn case_name(c: ReflectionCase) -> &'static str {
    match c {
        ReflectionCase::SinglePoint => "single-point",
        ReflectionCase::AlphaPlus => "alpha=1",
        ReflectionCase::AlphaMinus => "alpha=-1",
    }
}

pub fn analysis_json(a: &Analysis, oracle: &[OracleVerdict]) -> Value {
    let mut v = match a {
        Analysis::Pair {
            report: r,
            convolution,
            corollary,
        } => json!({
            "mode": "pair",
            "n": r.n,
            "I": arc_json(&r.i),
            "J": arc_json(&r.j),
            "K": r.k.as_ref().map_or(Value::Null, arc_json),
            "annihilated": r.is_annihilated(),
            "lambda": opt_rational(&r.lambda),
            "lambda_max": opt_rational(&r.lambda_max),
            "rho": opt_rational(&r.rho),
            "alpha": root_json(&r.alpha),
            "beta": root_json(&r.beta),
            "alpha_sup": root_json(&r.alpha_sup),
            "beta_sup": root_json(&r.beta_sup),
            "certificates": r.certificates.iter().map(certificate_json).collect::<Vec<_>>(),
            "convolution": distribution_json(convolution),
            "corollary_n2": corollary.as_ref().map_or(Value::Null, corollary_json),
        }),
        Analysis::Reflection { mode, outcome } => match outcome {
            ReflectionOutcome::NotApplicable { stray } => json!({
                "mode": "reflection",
                "conjugate": *mode == ReflectionMode::Conjugate,
                "applicable": false,
                "stray": stray.to_string(),
            }),
            ReflectionOutcome::Decomposed(d) => json!({
                "mode": "reflection",
                "conjugate": *mode == ReflectionMode::Conjugate,
                "applicable": true,
                "I": arc_json(&d.i),
                "case": case_name(d.case),
                "mu": distribution_json(&d.mu),
                "nu": distribution_json(&d.nu),
            }),
        },
        Analysis::Power(r) => json!({
            "mode": "power",
            "n": r.n,
            "p": r.p,
            "I": arc_json(&r.i),
            "K": arc_json(&r.k),
        }),
        Analysis::Lemma { n, root, combined } => json!({
            "mode": "lemma",
            "n": n,
            "alpha": root_json(&Some(root.clone())),
            "combined": distribution_json(combined),
        }),
    };
    let verdicts = serde_json::to_value(oracle).expect("verdicts serialize");
    if let Value::Object(m) = &mut v {
        m.insert("oracle".into(), verdicts);
    }
    v
}

fn turns_and_pi(x: &Rational) -> String {
    format!("{} ({})", format_fraction(x), format_pi(x))
}

fn arc_text(a: &Arc) -> String {
    format!("{a} turns = [{}, {}]", format_pi(a.inf()), format_pi(&a.sup()))
}

fn root_text(r: &Option<Root>) -> String {
    r.as_ref().map_or("-".into(), |r| root_value(r).to_expr())
}

pub fn analysis_text(a: &Analysis, oracle: &[OracleVerdict]) -> String {
    let mut out = String::new();
    let mut line = |s: String| {
        out.push_str(&s);
        out.push('\n');
    };
    match a {
        Analysis::Pair {
            report: r,
            convolution,
            corollary,
        } => {
            line(format!("pair analysis, n = {}", r.n));
            line(format!("  I = {}", arc_text(&r.i)));
            line(format!("  J = {}", arc_text(&r.j)));
            line(format!("  f ∗ g = {convolution}"));
            match &r.k {
                None => line("  f ∗ g = 0: annihilated, λ and ρ undefined".into()),
                Some(k) => {
                    line(format!("  K = {}", arc_text(k)));
                    line(format!("  λ = {}", r.lambda.as_ref().map_or("-".into(), turns_and_pi)));
                    if r.lambda != r.lambda_max {
                        line(format!("  λ max = {}", r.lambda_max.as_ref().map_or("-".into(), turns_and_pi)));
                    }
                    line(format!("  ρ = {}", r.rho.as_ref().map_or("-".into(), turns_and_pi)));
                }
            }
            if r.alpha.is_some() {
                line(format!("  α = {}, β = {}", root_text(&r.alpha), root_text(&r.beta)));
            }
            if r.alpha_sup.is_some() {
                line(format!("  α' = {}, β' = {} (sup side)", root_text(&r.alpha_sup), root_text(&r.beta_sup)));
            }
            for c in &r.certificates {
                let fact = match &c.fact {
                    Fact::Vanishes => "vanishes".to_string(),
                    Fact::InfEquals(v) => format!("has inf supp {}", format_fraction(v)),
                    Fact::SupEquals(v) => format!("has sup supp {}", format_fraction(v)),
                };
                line(format!(
                    "  {} {:?}: symmetrization with {} {fact} on {} [{}]",
                    c.role.name(),
                    c.side,
                    root_value(&c.root).to_expr(),
                    c.window,
                    if c.verified { "verified" } else { "UNVERIFIED" }
                ));
            }
            if let Some(v) = corollary {
                line(format!("  n = 2 equivalence: {}", corollary_json(v)));
            }
        }
        Analysis::Reflection { mode, outcome } => {
            line(format!("reflection analysis ({mode:?} f♯)"));
            match outcome {
                ReflectionOutcome::NotApplicable { stray } => {
                    line(format!("  supp f ∗ f♯ contains {stray} = {}; not applicable", format_pi(stray.turns())))
                }
                ReflectionOutcome::Decomposed(d) => {
                    line(format!("  I = {}", arc_text(&d.i)));
                    line(format!("  case {}", case_name(d.case)));
                    line(format!("  μ = {}", d.mu));
                    line(format!("  ν = {}", d.nu));
                }
            }
        }
        Analysis::Power(r) => {
            line(format!("power analysis, n = {}, p = {}", r.n, r.p));
            line(format!("  I = {}", arc_text(&r.i)));
            line(format!("  K = {} = pI", arc_text(&r.k)));
        }
        Analysis::Lemma { n, root, combined } => {
            line(format!("lemma, n = {n}"));
            line(format!("  α = {} (γ^{})", root_value(root).to_expr(), root.exponent));
            line(format!("  Σ α^j f_j = {combined}"));
        }
    }
    for v in oracle {
        let status = if v.passed { "pass" } else { "FAIL" };
        line(format!("oracle {}: {status}", v.identity));
        if let Some(c) = &v.counterexample {
            line(format!("  {c}"));
        }
    }
    out
}

pub fn fuzz_json(r: &FuzzReport, seed: u64) -> Value {
    let suites: Vec<Value> = r
        .summaries
        .iter()
        .map(|s| {
            let tags: Map<String, Value> = s.tags.iter().map(|(t, c)| (t.to_string(), json!(c))).collect();
            json!({
                "suite": s.suite.name(),
                "label": s.label,
                "instances": s.instances,
                "failures": s.failures,
                "tags": tags,
            })
        })
        .collect();
    let failures: Vec<Value> = r
        .failures
        .iter()
        .map(|f| {
            json!({
                "suite": f.suite.name(),
                "label": f.label,
                "index": f.index,
                "kind": f.failure.kind.name(),
                "message": f.failure.message,
            })
        })
        .collect();
    json!({
        "seed": seed,
        "passed": r.passed(),
        "theorem_violations": r.theorem_violations(),
        "suites": suites,
        "failures": failures,
    })
}
