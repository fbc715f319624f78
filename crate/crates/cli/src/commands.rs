//! Execution of parsed command lines.

use std::collections::BTreeMap;
use std::io::Read;

use serde_json::{json, Value as Json};

use charp_core::cartier::{
    antiderivative, cartier, cartier_1var_oracle, gamma, log_witness, Chart,
};
use charp_core::connections::{
    curvature, is_flat, maurer_cartan, pcurvature_abelian, pcurvature_at, pcurvature_brute,
    rank1_pcurvature_oracle, Derivation, GroupTag, MatrixOneForm, PCurvature, RatMatrix,
};
use charp_core::crosscheck;
use charp_core::forms::{dlog, OneForm};
use charp_core::poly::{var_name, MultiPoly, RatFunc, Ring};
use charp_core::random::irreducible_pool;
use charp_core::torsor::{
    boundary_torsor, classify_aff1, classify_alpha_p, classify_mu_p, element_maurer_cartan,
    kummer_cocycle, ChartWitness, GroupElement, Verdict,
};

use crate::args::{ChartArgs, Command, FormArg, Group, OmegaArg, Tag};
use crate::expr::{self, ParseError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_REJECTED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("{context}: {source}")]
    Domain {
        context: String,
        source: charp_core::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Domain {
                source: charp_core::Error::Internal(_),
                ..
            } => EXIT_INTERNAL,
            _ => EXIT_INPUT,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Input(_) => "input",
            CliError::Parse(ParseError::Syntax { .. }) => "syntax",
            CliError::Parse(ParseError::Sort { .. }) => "sort",
            CliError::Parse(ParseError::UnknownVariable { .. }) => "unknown-variable",
            CliError::Parse(ParseError::Domain { .. }) => "domain",
            CliError::Domain { source, .. } => match source {
                charp_core::Error::Internal(_) => "internal",
                _ => "domain",
            },
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

/// What a command produced, before rendering.
#[derive(Debug, Default)]
pub struct Report {
    pub inputs: BTreeMap<String, String>,
    pub lines: Vec<String>,
    pub result: Json,
    pub certificates: Json,
    pub witnesses: Vec<Json>,
    pub reason: Option<String>,
    pub code: i32,
}

/// Library operations and the subcommand exposing each.
pub const COVERAGE: &[(&str, &str)] = &[
    ("poly_arith", "eval"),
    ("poly_divexact", "divexact"),
    ("partial_derivative", "partial"),
    ("p_basis_decompose", "pbasis"),
    ("p_th_root", "proot"),
    ("ratfunc_normalize", "eval"),
    ("d_function", "d"),
    ("d_oneform", "d"),
    ("wedge", "eval"),
    ("is_closed", "closed"),
    ("dlog_function", "dlog"),
    ("cartier", "cartier"),
    ("gamma", "gamma"),
    ("antiderivative", "antider"),
    ("cartier_1var_oracle", "cartier"),
    ("log_witness", "logwitness"),
    ("maurer_cartan", "mc"),
    ("curvature", "curv"),
    ("derivation_p_power", "dpow"),
    ("pcurvature_brute", "pcurv-brute"),
    ("pcurvature_at", "pcurv-at"),
    ("pcurvature_abelian", "pcurv-abelian"),
    ("rank1_pcurvature_oracle", "pcurv-oracle"),
    ("classify_mu_p", "classify"),
    ("classify_alpha_p", "classify"),
    ("classify_aff1", "classify"),
    ("boundary_torsor", "boundary"),
    ("kummer_cocycle", "cocycle"),
    ("parse_expression", "eval"),
    ("crosscheck", "crosscheck"),
];

pub struct Context<'a> {
    pub ring: Ring,
    stdin: Option<&'a mut dyn Read>,
    report: Report,
}

impl<'a> Context<'a> {
    pub fn new(ring: Ring, stdin: Option<&'a mut dyn Read>) -> Self {
        Context {
            ring,
            stdin,
            report: Report::default(),
        }
    }

    /// The main input: the flag's value, or standard input under `--stdin`.
    fn main_input(&mut self, flag: &str, value: &Option<String>) -> Result<String> {
        let text = match (value, self.stdin.take()) {
            (Some(v), _) => v.clone(),
            (None, Some(r)) => {
                let mut s = String::new();
                r.read_to_string(&mut s)
                    .map_err(|e| CliError::Input(format!("reading standard input: {e}")))?;
                s.trim().to_string()
            }
            (None, None) => return Err(CliError::Input(format!("missing --{flag}"))),
        };
        Ok(self.record(flag, &text))
    }

    fn record(&mut self, flag: &str, text: &str) -> String {
        let text = text.trim().to_string();
        match self.report.inputs.get_mut(flag) {
            Some(prev) => {
                prev.push_str(" | ");
                prev.push_str(&text);
            }
            None => {
                self.report.inputs.insert(flag.to_string(), text.clone());
            }
        }
        text
    }

    fn line(&mut self, s: impl Into<String>) {
        self.report.lines.push(s.into());
    }
}

fn domain(context: impl Into<String>) -> impl FnOnce(charp_core::Error) -> CliError {
    let context = context.into();
    move |source| CliError::Domain { context, source }
}

fn one_form(ring: Ring, text: &str) -> Result<OneForm> {
    Ok(expr::one_form(text, ring)?)
}

fn scalar(ring: Ring, text: &str) -> Result<RatFunc> {
    Ok(expr::scalar(text, ring)?)
}

fn poly(ring: Ring, text: &str) -> Result<MultiPoly> {
    let f = scalar(ring, text)?;
    if !f.is_polynomial() {
        return Err(CliError::Input(format!("'{}' is not a polynomial", text.trim())));
    }
    Ok(f.into_parts().0)
}

fn split_list(text: &str, sep: char) -> Vec<&str> {
    if text.trim().is_empty() {
        return Vec::new();
    }
    text.split(sep).map(str::trim).collect()
}

fn chart(ring: Ring, text: &str) -> Result<Chart> {
    let gens = split_list(text, ',')
        .into_iter()
        .map(|g| poly(ring, g))
        .collect::<Result<Vec<_>>>()?;
    Chart::new(ring, gens).map_err(domain(format!("chart \"{}\"", text.trim())))
}

/// Explicit `--chart`s, or the chart derived from the declared
/// irreducibles (the fixed pool when none are declared).
fn charts(ctx: &mut Context, args: &ChartArgs, w: &OneForm) -> Result<Vec<Chart>> {
    let ring = ctx.ring;
    if !args.chart.is_empty() {
        let mut out = Vec::new();
        for c in &args.chart {
            let c = ctx.record("chart", c);
            out.push(chart(ring, &c)?);
        }
        return Ok(out);
    }
    let declared = if args.declare.is_empty() {
        irreducible_pool(ring)
    } else {
        let mut out = Vec::new();
        for d in &args.declare {
            let d = ctx.record("declare", d);
            for g in split_list(&d, ',') {
                out.push(poly(ring, g)?);
            }
        }
        out
    };
    let c = Chart::derive(w, &declared).map_err(domain("default chart"))?;
    Ok(vec![c])
}

fn matrix_entries(text: &str) -> Vec<Vec<&str>> {
    split_list(text, ';').into_iter().map(|row| split_list(row, ',')).collect()
}

fn matrix_form(ring: Ring, text: &str, rank: Option<usize>) -> Result<MatrixOneForm> {
    let rows = matrix_entries(text)
        .into_iter()
        .map(|row| row.into_iter().map(|e| one_form(ring, e)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    if let Some(r) = rank {
        if rows.len() != r {
            return Err(CliError::Input(format!("--rank {r} but the matrix has {} rows", rows.len())));
        }
    }
    MatrixOneForm::from_rows(ring, rows).map_err(domain(format!("matrix \"{}\"", text.trim())))
}

fn matrix(ring: Ring, text: &str) -> Result<RatMatrix> {
    let rows = matrix_entries(text)
        .into_iter()
        .map(|row| row.into_iter().map(|e| scalar(ring, e)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    RatMatrix::from_rows(ring, rows).map_err(domain(format!("matrix \"{}\"", text.trim())))
}

fn derivation(ring: Ring, text: &str) -> Result<Derivation> {
    let coeffs = split_list(text, ',')
        .into_iter()
        .map(|e| scalar(ring, e))
        .collect::<Result<Vec<_>>>()?;
    Derivation::new(ring, coeffs).map_err(domain(format!("derivation \"{}\"", text.trim())))
}

/// `"f @ g1, g2"`; without `@` the chart is generated by the numerator and
/// denominator of `f`.
fn witness(ring: Ring, text: &str) -> Result<ChartWitness> {
    let (f_text, chart_text) = match text.split_once('@') {
        Some((f, c)) => (f, Some(c)),
        None => (text, None),
    };
    let f = scalar(ring, f_text)?;
    let c = match chart_text {
        Some(c) => chart(ring, c)?,
        None => {
            let gens: Vec<MultiPoly> = [f.num(), f.den()]
                .into_iter()
                .filter(|q| !q.is_constant())
                .cloned()
                .collect();
            Chart::new(ring, gens).map_err(domain(format!("witness \"{}\"", text.trim())))?
        }
    };
    ChartWitness::new(c, f).map_err(domain(format!("witness \"{}\"", text.trim())))
}

fn element(ring: Ring, text: &str, tag: Tag) -> Result<GroupElement> {
    let parts = split_list(text, ',');
    let want = if tag == Tag::Aff1 { 2 } else { 1 };
    if parts.len() != want {
        return Err(CliError::Input(format!(
            "element \"{}\" needs {want} component(s) for tag {}",
            text.trim(),
            tag_name(tag)
        )));
    }
    let f = scalar(ring, parts[0])?;
    Ok(match tag {
        Tag::Gm => GroupElement::Gm(f),
        Tag::Ga => GroupElement::Ga(f),
        Tag::Aff1 => GroupElement::Aff1(f, scalar(ring, parts[1])?),
        Tag::Gl => return Err(CliError::Input("gl elements are given with --matrix".into())),
    })
}

fn tag_name(tag: Tag) -> &'static str {
    match tag {
        Tag::Gm => "g_m",
        Tag::Ga => "g_a",
        Tag::Gl => "gl",
        Tag::Aff1 => "aff1",
    }
}

fn group_tag(tag: Tag, size: usize) -> GroupTag {
    match tag {
        Tag::Gm => GroupTag::Gm,
        Tag::Ga => GroupTag::Ga,
        Tag::Gl => GroupTag::Gl(size),
        Tag::Aff1 => GroupTag::Aff1,
    }
}

fn json_matrix(m: &RatMatrix) -> Json {
    Json::Array(
        m.rows()
            .map(|row| Json::Array(row.iter().map(|x| json!(x.to_string())).collect()))
            .collect(),
    )
}

fn json_matrix_form(m: &MatrixOneForm) -> Json {
    let n = m.size();
    Json::Array(
        (0..n)
            .map(|i| Json::Array((0..n).map(|j| json!(m.get(i, j).to_string())).collect()))
            .collect(),
    )
}

fn derivation_name(ring: Ring, i: usize) -> String {
    format!("d/d{}", var_name(ring.nvars(), i))
}

fn json_pcurvature(ring: Ring, psi: &PCurvature) -> Json {
    Json::Array(
        psi.components()
            .iter()
            .enumerate()
            .map(|(i, m)| json!({"derivation": derivation_name(ring, i), "psi": json_matrix(m)}))
            .collect(),
    )
}

fn pcurvature_lines(ring: Ring, psi: &PCurvature) -> Vec<String> {
    psi.components()
        .iter()
        .enumerate()
        .map(|(i, m)| format!("psi({}) = {m}", derivation_name(ring, i)))
        .collect()
}

fn chart_string(c: &Chart) -> String {
    let gens: Vec<String> = c.generators().iter().map(|g| g.to_string()).collect();
    format!("{{{}}}", gens.join(", "))
}

fn json_witness(x: &ChartWitness) -> Json {
    let gens: Vec<String> = x.chart.generators().iter().map(|g| g.to_string()).collect();
    json!({"chart": gens, "f": x.f.to_string()})
}

fn derivation_string(d: &Derivation) -> String {
    let coeffs: Vec<String> = d.coeffs().iter().map(|c| c.to_string()).collect();
    format!("[{}]", coeffs.join(", "))
}

pub fn execute(ctx: &mut Context, command: &Command) -> Result<()> {
    let ring = ctx.ring;
    match command {
        Command::Eval(FormArg { form }) => {
            let text = ctx.main_input("form", form)?;
            let v = expr::evaluate(&text, ring)?;
            ctx.line(format!("{v}"));
            ctx.report.result = json!({"sort": v.sort().to_string(), "value": v.to_string()});
        }
        Command::D(FormArg { form }) => {
            let text = ctx.main_input("form", form)?;
            let e = expr::parse(&text, ring)?;
            let v = expr::Expr::D(Box::new(e)).eval(ring)?;
            ctx.line(format!("{v}"));
            ctx.report.result = json!(v.to_string());
        }
        Command::Partial { input, var } => {
            let text = ctx.main_input("form", &input.form)?;
            let var = ctx.record("var", var);
            let f = scalar(ring, &text)?;
            let i = match expr::parse(&var, ring)? {
                expr::Expr::Var(i) => i,
                _ => return Err(CliError::Input(format!("--var '{var}' is not a variable"))),
            };
            let g = f
                .partial_derivative(i)
                .map_err(domain(format!("partial derivative of \"{text}\"")))?;
            ctx.line(format!("{g}"));
            ctx.report.result = json!(g.to_string());
        }
        Command::Divexact { input, divisor } => {
            let text = ctx.main_input("form", &input.form)?;
            let divisor = ctx.record("divisor", divisor);
            let a = poly(ring, &text)?;
            let b = poly(ring, &divisor)?;
            let q = a
                .divexact(&b)
                .map_err(domain(format!("\"{text}\" / \"{divisor}\"")))?;
            ctx.line(format!("{q}"));
            ctx.report.result = json!(q.to_string());
        }
        Command::Dlog(FormArg { form }) => {
            let text = ctx.main_input("form", form)?;
            let f = scalar(ring, &text)?;
            let w = dlog(&f).map_err(domain(format!("dlog(\"{text}\")")))?;
            ctx.line(format!("{w}"));
            ctx.report.result = json!(w.to_string());
        }
        Command::Closed(FormArg { form }) => {
            let text = ctx.main_input("form", form)?;
            let w = one_form(ring, &text)?;
            let closed = w.is_closed();
            ctx.line(format!("closed: {closed}"));
            if !closed {
                ctx.line(format!("d(w) = {}", w.exterior_derivative()));
            }
            ctx.report.result = json!({"closed": closed, "d": w.exterior_derivative().to_string()});
        }
        Command::Pbasis(FormArg { form }) => {
            let text = ctx.main_input("form", form)?;
            let f = poly(ring, &text)?;
            let mut parts = serde_json::Map::new();
            for (slot, g) in f.p_basis_decompose() {
                let slot = MultiPoly::monomial(ring, slot, 1).to_string();
                ctx.line(format!("{slot}: ({g})^{}", ring.p()));
                parts.insert(slot, json!(g.to_string()));
            }
            ctx.report.result = Json::Object(parts);
        }
        Command::Proot(FormArg { form }) => {
            let text = ctx.main_input("form", form)?;
            let f = scalar(ring, &text)?;
            let r = f
                .p_th_root()
                .map_err(domain(format!("p-th root of \"{text}\"")))?;
            ctx.line(format!("{r}"));
            ctx.report.result = json!(r.to_string());
        }
        Command::Cartier { input, oracle } => {
            let text = ctx.main_input("form", &input.form)?;
            let w = one_form(ring, &text)?;
            let c = if *oracle {
                cartier_1var_oracle(&w)
            } else {
                cartier(&w)
            }
            .map_err(domain(format!("cartier(\"{text}\")")))?;
            ctx.line(format!("{c}"));
            ctx.report.result = json!(c.to_string());
        }
        Command::Gamma(FormArg { form }) => {
            let text = ctx.main_input("form", form)?;
            let g = gamma(&one_form(ring, &text)?);
            ctx.line(format!("{g}"));
            ctx.report.result = json!(g.to_string());
        }
        Command::Antider(FormArg { form }) => {
            let text = ctx.main_input("form", form)?;
            let w = one_form(ring, &text)?;
            let f = antiderivative(&w).map_err(domain(format!("antiderivative(\"{text}\")")))?;
            ctx.line(format!("{f}"));
            ctx.report.result = json!(f.to_string());
        }
        Command::Logwitness { input, charts: chart_args } => {
            let text = ctx.main_input("form", &input.form)?;
            let w = one_form(ring, &text)?;
            let cs = charts(ctx, chart_args, &w)?;
            let mut results = Vec::new();
            for c in &cs {
                let lw = log_witness(&w, c).map_err(domain(format!(
                    "log witness of \"{text}\" on chart {}",
                    chart_string(c)
                )))?;
                let x = ChartWitness {
                    chart: c.clone(),
                    f: lw.unit.clone(),
                };
                ctx.line(format!("{} on {} (exponents {:?})", lw.unit, chart_string(c), lw.exponents));
                ctx.report.witnesses.push(json_witness(&x));
                results.push(json!({"exponents": lw.exponents, "unit": lw.unit.to_string()}));
            }
            ctx.report.result = Json::Array(results);
        }
        Command::Mc { matrix: m, element: el, tag } => {
            let omega = if el.is_some() || (m.is_none() && *tag != Tag::Gl) {
                let text = ctx.main_input("element", el)?;
                let g = element(ring, &text, *tag)?;
                element_maurer_cartan(&g).map_err(domain(format!("maurer_cartan(\"{text}\")")))?
            } else {
                let text = ctx.main_input("matrix", m)?;
                let g = matrix(ring, &text)?;
                maurer_cartan(&g, group_tag(*tag, g.size()))
                    .map_err(domain(format!("maurer_cartan(\"{text}\")")))?
            };
            ctx.record("tag", tag_name(*tag));
            ctx.line(format!("{omega}"));
            ctx.report.result = json_matrix_form(&omega);
        }
        Command::Curv(OmegaArg { omega, rank }) => {
            let text = ctx.main_input("omega", omega)?;
            let om = matrix_form(ring, &text, *rank)?;
            let k = curvature(&om);
            ctx.line(format!("{k}"));
            ctx.line(format!("flat: {}", is_flat(&om)));
            let n = k.size();
            let entries: Vec<Json> = (0..n)
                .map(|i| Json::Array((0..n).map(|j| json!(k.get(i, j).to_string())).collect()))
                .collect();
            ctx.report.result = json!({"curvature": entries, "flat": k.is_zero()});
        }
        Command::PcurvBrute(OmegaArg { omega, rank }) => {
            let text = ctx.main_input("omega", omega)?;
            let om = matrix_form(ring, &text, *rank)?;
            let psi = pcurvature_brute(&om);
            for l in pcurvature_lines(ring, &psi) {
                ctx.line(l);
            }
            ctx.report.result = json_pcurvature(ring, &psi);
        }
        Command::PcurvAt { omega, derivation: dtext } => {
            let text = ctx.main_input("omega", &omega.omega)?;
            let dtext = ctx.record("derivation", dtext);
            let om = matrix_form(ring, &text, omega.rank)?;
            let d = derivation(ring, &dtext)?;
            let m = pcurvature_at(&om, &d);
            ctx.line(format!("psi(D) = {m}"));
            let flat = is_flat(&om);
            let mut result = json!({"psi": json_matrix(&m), "flat": flat});
            if flat {
                let linear = pcurvature_brute(&om).evaluate(&d);
                ctx.line(format!("sum f_i^p psi(d_i) = {linear}"));
                result["p_linear"] = json!(linear == m);
            }
            ctx.report.result = result;
        }
        Command::PcurvAbelian { input, tag } => {
            let text = ctx.main_input("form", &input.form)?;
            ctx.record("tag", tag_name(*tag));
            let w = one_form(ring, &text)?;
            let psi = pcurvature_abelian(&w, group_tag(*tag, 1))
                .map_err(domain(format!("abelian p-curvature of \"{text}\"")))?;
            ctx.line(format!("{psi}"));
            ctx.report.result = json!(psi.to_string());
        }
        Command::PcurvOracle(FormArg { form }) => {
            let text = ctx.main_input("form", form)?;
            let w = one_form(ring, &text)?;
            let psi = rank1_pcurvature_oracle(&w)
                .map_err(domain(format!("rank-1 p-curvature of \"{text}\"")))?;
            ctx.line(format!("psi(d/dx) = {psi}"));
            ctx.report.result = json!(psi.to_string());
        }
        Command::Dpow { derivation: dtext } => {
            let text = ctx.main_input("derivation", dtext)?;
            let d = derivation(ring, &text)?;
            let dp = d.p_power();
            ctx.line(format!("D^{} = {}", ring.p(), derivation_string(&dp)));
            ctx.report.result =
                Json::Array(dp.coeffs().iter().map(|c| json!(c.to_string())).collect());
        }
        Command::Classify {
            group,
            input,
            omegap,
            charts: chart_args,
            witness: extra,
        } => {
            let text = ctx.main_input("form", &input.form)?;
            let w = one_form(ring, &text)?;
            let verdict = match group {
                Group::MuP => {
                    let cs = charts(ctx, chart_args, &w)?;
                    classify_mu_p(&w, &cs)
                }
                Group::AlphaP => classify_alpha_p(&w),
                Group::Aff1 => {
                    let Some(wp_text) = omegap else {
                        return Err(CliError::Input("classify aff1 needs --omegap".into()));
                    };
                    let wp_text = ctx.record("omegap", wp_text);
                    let wp = one_form(ring, &wp_text)?;
                    let cs = charts(ctx, chart_args, &w)?;
                    let mut ws = Vec::new();
                    for x in extra {
                        let x = ctx.record("witness", x);
                        ws.push(witness(ring, &x)?);
                    }
                    classify_aff1(&w, &wp, &cs, &ws)
                }
            }
            .map_err(domain(format!("classify \"{text}\"")))?;
            report_verdict(ctx, &verdict);
        }
        Command::Boundary { element: el, tag } => {
            let text = ctx.main_input("element", el)?;
            ctx.record("tag", tag_name(*tag));
            let g = element(ring, &text, *tag)?;
            let t = boundary_torsor(&g).map_err(domain(format!("boundary of \"{text}\"")))?;
            ctx.line(format!("kind: {}", t.kind));
            let chart = chart_string(&t.equations[0].chart);
            for e in &t.equations {
                ctx.line(format!("{e}  on {chart}"));
            }
            let forms: Vec<String> = t.forms.iter().map(|f| f.to_string()).collect();
            ctx.line(format!("forms: [{}]", forms.join(", ")));
            if let Some(x) = t.witness() {
                ctx.report.witnesses.push(json_witness(&x));
            }
            let gens: Vec<String> = t.equations[0]
                .chart
                .generators()
                .iter()
                .map(|g| g.to_string())
                .collect();
            ctx.report.result = json!({
                "kind": t.kind.to_string(),
                "chart": gens,
                "equations": t.equations.iter().map(|e| e.to_string()).collect::<Vec<_>>(),
                "forms": forms,
            });
        }
        Command::Cocycle {
            witness: ws_text,
            form,
            chart: chart_texts,
        } => {
            let mut ws = Vec::new();
            if ws_text.is_empty() {
                let text = ctx.main_input("form", form)?;
                let w = one_form(ring, &text)?;
                for c in chart_texts {
                    let c = ctx.record("chart", c);
                    let c = chart(ring, &c)?;
                    let lw = log_witness(&w, &c).map_err(domain(format!(
                        "log witness of \"{text}\" on chart {}",
                        chart_string(&c)
                    )))?;
                    ws.push(ChartWitness { chart: c, f: lw.unit });
                }
            } else {
                for x in ws_text {
                    let x = ctx.record("witness", x);
                    ws.push(witness(ring, &x)?);
                }
            }
            for x in &ws {
                ctx.report.witnesses.push(json_witness(x));
            }
            let u = kummer_cocycle(&ws).map_err(domain("kummer cocycle"))?;
            let mut result = Vec::new();
            for ((i, j), v) in &u {
                ctx.line(format!("u_{}{} = {v}", i + 1, j + 1));
                result.push(json!({"i": i + 1, "j": j + 1, "u": v.to_string()}));
            }
            ctx.report.result = Json::Array(result);
        }
        Command::Crosscheck {
            seed,
            fraction,
            battery,
        } => {
            ctx.record("seed", &seed.to_string());
            ctx.record("fraction", &fraction.to_string());
            if !(*fraction > 0.0 && *fraction <= 1.0) {
                return Err(CliError::Input("--fraction must lie in (0, 1]".into()));
            }
            let reports = match battery {
                None => crosscheck::run_all(*seed, *fraction),
                Some(k) => {
                    ctx.record("battery", &k.to_string());
                    run_battery(*seed, *fraction, *k)?
                }
            };
            let mut result = Vec::new();
            let mut ok = true;
            for r in &reports {
                ok &= r.passed();
                ctx.line(r.to_string());
                result.push(json!({
                    "id": r.id,
                    "name": r.name,
                    "passed": r.passed(),
                    "cases": r.cases,
                    "discrepancies": r.discrepancies,
                    "unresolved": r.unresolved,
                    "max_unresolved": r.max_unresolved,
                    "split": r.split.map(|(a, b)| json!([a, b])),
                    "notes": r.notes,
                }));
            }
            ctx.report.result = Json::Array(result);
            if !ok {
                ctx.report.code = EXIT_INTERNAL;
            }
        }
    }
    Ok(())
}

fn run_battery(seed: u64, fraction: f64, k: u8) -> Result<Vec<crosscheck::BatteryReport>> {
    let n = |full: usize| ((full as f64 * fraction).ceil() as usize).max(1);
    Ok(vec![match k {
        1 => crosscheck::cartier_identities(seed, n(200)),
        2 => crosscheck::oracle_agreement(seed, n(500)),
        3 => crosscheck::gm_equivalence(seed, n(300), n(100)),
        4 => crosscheck::ga_equivalence(seed, n(300), n(100)),
        5 => crosscheck::abelian_formula(seed, n(300)),
        6 => {
            return Ok(vec![
                crosscheck::aff1_soundness(seed, n(200)),
                crosscheck::aff1_agreement(seed, n(200)),
            ])
        }
        7 => crosscheck::boundary_roundtrip(seed, n(100)),
        8 => crosscheck::cocycle_laws(seed, n(50)),
        9 => crosscheck::maurer_cartan_flatness(seed, n(200)),
        _ => return Err(CliError::Input(format!("no battery {k}; choose 1 to 9"))),
    }])
}

fn report_verdict(ctx: &mut Context, v: &Verdict) {
    let ring = ctx.ring;
    let head = if v.accepted { "accepted" } else { "rejected" };
    match &v.detail {
        Some(d) => ctx.line(format!("{head} ({}): {d}", v.reason)),
        None => ctx.line(format!("{head} ({})", v.reason)),
    }
    for x in &v.witnesses {
        ctx.line(format!("witness: {} on {}", x.f, chart_string(&x.chart)));
        ctx.report.witnesses.push(json_witness(x));
    }
    if let Some(f) = &v.primitive {
        ctx.line(format!("primitive: {f}"));
    }
    if let Some(psi) = &v.certificate {
        for l in pcurvature_lines(ring, psi) {
            ctx.line(l);
        }
        ctx.report.certificates = json!({"pcurvature": json_pcurvature(ring, psi)});
    }
    ctx.report.result = json!({
        "accepted": v.accepted,
        "detail": v.detail,
        "primitive": v.primitive.as_ref().map(|f| f.to_string()),
    });
    ctx.report.reason = Some(v.reason.to_string());
    ctx.report.code = if v.accepted { EXIT_OK } else { EXIT_REJECTED };
}

impl<'a> Context<'a> {
    pub fn into_report(self) -> Report {
        self.report
    }
}

