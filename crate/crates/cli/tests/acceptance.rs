//! Acceptance suite: criteria 1-9 run the randomized batteries at full
//! size, criterion 10 checks the library against the frozen worked-example
//! fixtures (produced by `tools/verify_examples.py`). One line per
//! criterion; nonzero exit on any failure.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use charp_cli::expr::{self, Value};
use charp_core::cartier::{antiderivative, cartier, cartier_1var_oracle, log_witness, Chart};
use charp_core::connections::{
    curvature, maurer_cartan, pcurvature_abelian, pcurvature_at, pcurvature_brute,
    rank1_pcurvature_oracle, Derivation, GroupTag, MatrixOneForm, RatMatrix,
};
use charp_core::crosscheck::{self, BatteryReport};
use charp_core::forms::{differential, dlog, OneForm, TwoForm};
use charp_core::poly::{MultiPoly, RatFunc, Ring};
use charp_core::torsor::{
    boundary_torsor, classify_aff1, classify_alpha_p, classify_mu_p, kummer_cocycle, ChartWitness,
    GroupElement,
};
use serde_json::Value as Json;

const SEED: u64 = 20_240_601;
const FIXTURES: &str = include_str!("fixtures/worked_examples.jsonl");

type Battery = (u8, u64, fn() -> Vec<BatteryReport>);

fn main() -> ExitCode {
    let batteries: [Battery; 9] = [
        (1, 60, || vec![crosscheck::cartier_identities(SEED, 200)]),
        (2, 30, || vec![crosscheck::oracle_agreement(SEED, 500)]),
        (3, 60, || vec![crosscheck::gm_equivalence(SEED, 300, 100)]),
        (4, 60, || vec![crosscheck::ga_equivalence(SEED, 300, 100)]),
        (5, 90, || vec![crosscheck::abelian_formula(SEED, 300)]),
        (6, 120, || {
            vec![
                crosscheck::aff1_soundness(SEED, 200),
                crosscheck::aff1_agreement(SEED, 200),
            ]
        }),
        (7, 30, || vec![crosscheck::boundary_roundtrip(SEED, 100)]),
        (8, 10, || vec![crosscheck::cocycle_laws(SEED, 50)]),
        (9, 30, || vec![crosscheck::maurer_cartan_flatness(SEED, 200)]),
    ];

    let mut all_ok = true;
    for (id, limit, run) in batteries {
        let start = Instant::now();
        let reports = run();
        let elapsed = start.elapsed();
        let in_time = elapsed <= Duration::from_secs(limit);
        let ok = in_time && reports.iter().all(BatteryReport::passed);
        all_ok &= ok;
        let summary: Vec<String> = reports
            .iter()
            .map(|r| {
                let mut s = format!("{}: {} cases, {} discrepancies", r.name, r.cases, r.discrepancies);
                if r.max_unresolved > 0 || r.unresolved > 0 {
                    s += &format!(", {} unresolved (limit {})", r.unresolved, r.max_unresolved);
                }
                if let Some((a, b)) = r.split {
                    s += &format!(", {a} accepted / {b} rejected");
                }
                s
            })
            .collect();
        println!(
            "[{}] criterion {id}: {} ({:.2}s, limit {limit}s)",
            if ok { "PASS" } else { "FAIL" },
            summary.join("; "),
            elapsed.as_secs_f64()
        );
        for r in &reports {
            for n in &r.notes {
                println!("    {n}");
            }
        }
    }

    let start = Instant::now();
    let mut failures = Vec::new();
    let mut count = 0;
    for line in FIXTURES.lines().filter(|l| !l.trim().is_empty()) {
        count += 1;
        let case: Json = serde_json::from_str(line).expect("fixture line is JSON");
        let id = case["id"].as_str().unwrap_or("?").to_string();
        match std::panic::catch_unwind(|| check(&case)) {
            Ok(Ok(())) => {}
            Ok(Err(msg)) => failures.push(format!("{id}: {msg}")),
            Err(_) => failures.push(format!("{id}: panicked")),
        }
    }
    let ok = failures.is_empty() && count > 0;
    all_ok &= ok;
    println!(
        "[{}] criterion 10: worked examples: {count} fixtures, {} mismatches ({:.2}s)",
        if ok { "PASS" } else { "FAIL" },
        failures.len(),
        start.elapsed().as_secs_f64()
    );
    for f in &failures {
        println!("    {f}");
    }

    if all_ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

type Check = Result<(), String>;

struct Case<'a> {
    ring: Ring,
    inputs: Vec<&'a str>,
    expected: &'a Json,
}

impl Case<'_> {
    fn scalar(&self, text: &str) -> RatFunc {
        expr::scalar(text, self.ring).unwrap_or_else(|e| panic!("{text}: {e}"))
    }

    fn form(&self, text: &str) -> OneForm {
        expr::one_form(text, self.ring).unwrap_or_else(|e| panic!("{text}: {e}"))
    }

    fn poly(&self, text: &str) -> MultiPoly {
        let f = self.scalar(text);
        assert!(f.is_polynomial(), "{text} is not a polynomial");
        f.into_parts().0
    }

    fn chart(&self, text: &str) -> Chart {
        let gens = text
            .split(',')
            .map(str::trim)
            .filter(|g| !g.is_empty())
            .map(|g| self.poly(g))
            .collect();
        Chart::new(self.ring, gens).expect("valid chart")
    }

    fn matrix_form(&self, text: &str) -> MatrixOneForm {
        let rows = text
            .split(';')
            .map(|row| row.split(',').map(|e| self.form(e.trim())).collect())
            .collect();
        MatrixOneForm::from_rows(self.ring, rows).expect("square matrix")
    }

    fn matrix(&self, text: &str) -> RatMatrix {
        let rows = text
            .split(';')
            .map(|row| row.split(',').map(|e| self.scalar(e.trim())).collect())
            .collect();
        RatMatrix::from_rows(self.ring, rows).expect("square matrix")
    }

    fn expected_str(&self) -> &str {
        self.expected.as_str().expect("string expectation")
    }

    fn expected_error(&self) -> Option<&str> {
        self.expected.get("error").and_then(Json::as_str)
    }
}

fn same<T: PartialEq + std::fmt::Display>(got: &T, want: &T, what: &str) -> Check {
    if got == want {
        Ok(())
    } else {
        Err(format!("{what}: got {got}, expected {want}"))
    }
}

fn error_name(e: &charp_core::Error) -> String {
    format!("{e:?}").split(['(', ' ', '{']).next().unwrap_or_default().to_string()
}

fn result_or_error<T>(case: &Case, res: charp_core::Result<T>, on_ok: impl FnOnce(T) -> Check) -> Check {
    match (res, case.expected_error()) {
        (Ok(v), None) => on_ok(v),
        (Err(e), Some(name)) if error_name(&e) == name => Ok(()),
        (Err(e), want) => Err(format!("error {e:?}, expected {want:?}")),
        (Ok(_), Some(name)) => Err(format!("succeeded, expected error {name}")),
    }
}

fn two_form(case: &Case, text: &str) -> TwoForm {
    match expr::evaluate(text, case.ring).unwrap_or_else(|e| panic!("{text}: {e}")) {
        Value::Two(t) => t,
        Value::Scalar(s) if s.is_zero() => TwoForm::zero(case.ring),
        v => panic!("{text} is a {}", v.sort()),
    }
}

fn rows(j: &Json) -> Vec<Vec<&str>> {
    j.as_array()
        .expect("matrix")
        .iter()
        .map(|r| r.as_array().expect("row").iter().map(|e| e.as_str().expect("entry")).collect())
        .collect()
}

fn compare_matrix(case: &Case, got: &RatMatrix, want: &Json) -> Check {
    for (i, row) in rows(want).into_iter().enumerate() {
        for (j, e) in row.into_iter().enumerate() {
            same(got.get(i, j), &case.scalar(e), &format!("entry ({i}, {j})"))?;
        }
    }
    Ok(())
}

fn tag(name: &str, size: usize) -> GroupTag {
    match name {
        "g_m" => GroupTag::Gm,
        "g_a" => GroupTag::Ga,
        "aff1" => GroupTag::Aff1,
        "gl" => GroupTag::Gl(size),
        other => panic!("unknown tag {other}"),
    }
}

fn witness(case: &Case, text: &str) -> ChartWitness {
    let (f, chart) = text.split_once('@').expect("witness has a chart");
    ChartWitness::new(case.chart(chart), case.scalar(f)).expect("valid witness")
}

/// Every `prod q_j^m_j` with `0 <= m_j < p` whose dlog is `w`.
fn exhaustive_witnesses(w: &OneForm, chart: &Chart) -> Vec<RatFunc> {
    let p = chart.ring().p();
    let k = chart.generators().len();
    let mut exps = vec![0u32; k];
    let mut hits = Vec::new();
    loop {
        let f = chart.unit(&exps);
        if dlog(&f).ok().as_ref() == Some(w) {
            hits.push(f);
        }
        let mut i = 0;
        loop {
            if i == k {
                return hits;
            }
            exps[i] += 1;
            if exps[i] < p {
                break;
            }
            exps[i] = 0;
            i += 1;
        }
    }
}

fn check(case: &Json) -> Check {
    let p = case["p"].as_u64().expect("p") as u32;
    let n = case["n"].as_u64().expect("n") as usize;
    let ring = Ring::new(p, n).map_err(|e| e.to_string())?;
    let inputs: Vec<&str> = case["inputs"]
        .as_array()
        .expect("inputs")
        .iter()
        .map(|v| v.as_str().expect("input string"))
        .collect();
    let c = Case {
        ring,
        inputs,
        expected: &case["expected"],
    };
    let kind = case["kind"].as_str().expect("kind");
    let inp = |i: usize| c.inputs[i];
    match kind {
        "partial" => {
            let i = match expr::parse(inp(1), ring).map_err(|e| e.to_string())? {
                expr::Expr::Var(i) => i,
                _ => return Err("not a variable".into()),
            };
            let got = c.scalar(inp(0)).partial_derivative(i).map_err(|e| e.to_string())?;
            same(&got, &c.scalar(c.expected_str()), "partial derivative")
        }
        "pbasis" => {
            let got = c.poly(inp(0)).p_basis_decompose();
            let want = c.expected.as_object().expect("slot map");
            if got.len() != want.len() {
                return Err(format!("{} slots, expected {}", got.len(), want.len()));
            }
            for (slot, g) in want {
                let slot_poly = c.poly(slot);
                let hit = got
                    .iter()
                    .find(|(m, _)| MultiPoly::monomial(ring, **m, 1) == slot_poly)
                    .ok_or_else(|| format!("missing slot {slot}"))?;
                same(hit.1, &c.poly(g.as_str().expect("component")), &format!("slot {slot}"))?;
            }
            Ok(())
        }
        "proot" => {
            let got = c.scalar(inp(0)).p_th_root().map_err(|e| e.to_string())?;
            same(&got, &c.scalar(c.expected_str()), "p-th root")
        }
        "d" => match expr::evaluate(inp(0), ring).map_err(|e| e.to_string())? {
            Value::Scalar(f) => same(&differential(&f), &c.form(c.expected_str()), "d"),
            Value::One(w) => same(&w.exterior_derivative(), &two_form(&c, c.expected_str()), "d"),
            Value::Two(_) => Err("d of a 2-form".into()),
        },
        "closed" => {
            let want = c.expected.as_bool().expect("bool");
            same(&c.form(inp(0)).is_closed(), &want, "closed")
        }
        "dlog" => {
            let got = dlog(&c.scalar(inp(0))).map_err(|e| e.to_string())?;
            same(&got, &c.form(c.expected_str()), "dlog")
        }
        "cartier" => result_or_error(&c, cartier(&c.form(inp(0))), |w| {
            same(&w, &c.form(c.expected_str()), "cartier")
        }),
        "oracle" => result_or_error(&c, cartier_1var_oracle(&c.form(inp(0))), |w| {
            same(&w, &c.form(c.expected_str()), "one-variable oracle")
        }),
        "antider" => result_or_error(&c, antiderivative(&c.form(inp(0))), |f| {
            same(&f, &c.scalar(c.expected_str()), "antiderivative")
        }),
        "logwitness" => {
            let w = c.form(inp(0));
            let chart = c.chart(inp(1));
            result_or_error(&c, log_witness(&w, &chart), |lw| {
                let want = c.scalar(c.expected_str());
                same(&lw.unit, &want, "witness")?;
                let all = exhaustive_witnesses(&w, &chart);
                if all != vec![want] {
                    return Err(format!("exhaustive search found {} witnesses", all.len()));
                }
                Ok(())
            })
        }
        "mc" | "mccurv" => {
            let g = c.matrix(inp(1));
            let omega = maurer_cartan(&g, tag(inp(0), g.size())).map_err(|e| e.to_string())?;
            let want = rows(c.expected);
            if kind == "mc" {
                for (i, row) in want.into_iter().enumerate() {
                    for (j, e) in row.into_iter().enumerate() {
                        same(omega.get(i, j), &c.form(e), &format!("entry ({i}, {j})"))?;
                    }
                }
            } else {
                let k = curvature(&omega);
                for (i, row) in want.into_iter().enumerate() {
                    for (j, e) in row.into_iter().enumerate() {
                        same(k.get(i, j), &two_form(&c, e), &format!("entry ({i}, {j})"))?;
                    }
                }
            }
            Ok(())
        }
        "curv" => {
            let k = curvature(&c.matrix_form(inp(0)));
            for (i, row) in rows(c.expected).into_iter().enumerate() {
                for (j, e) in row.into_iter().enumerate() {
                    same(k.get(i, j), &two_form(&c, e), &format!("entry ({i}, {j})"))?;
                }
            }
            Ok(())
        }
        "dpow" => {
            let coeffs = inp(0).split(',').map(|e| c.scalar(e.trim())).collect();
            let d = Derivation::new(ring, coeffs).map_err(|e| e.to_string())?;
            let dp = d.p_power();
            for (i, e) in c.expected.as_array().expect("list").iter().enumerate() {
                same(&dp.coeffs()[i], &c.scalar(e.as_str().expect("entry")), &format!("coefficient {i}"))?;
            }
            Ok(())
        }
        "pbrute" => {
            let psi = pcurvature_brute(&c.matrix_form(inp(0)));
            let want = c.expected.as_array().expect("components");
            if want.len() != psi.components().len() {
                return Err("component count".into());
            }
            for (i, m) in want.iter().enumerate() {
                compare_matrix(&c, psi.component(i), m)?;
            }
            Ok(())
        }
        "pat" => {
            let coeffs = inp(1).split(',').map(|e| c.scalar(e.trim())).collect();
            let d = Derivation::new(ring, coeffs).map_err(|e| e.to_string())?;
            compare_matrix(&c, &pcurvature_at(&c.matrix_form(inp(0)), &d), c.expected)
        }
        "pabel" => {
            let got = pcurvature_abelian(&c.form(inp(1)), tag(inp(0), 1)).map_err(|e| e.to_string())?;
            same(&got, &c.form(c.expected_str()), "abelian p-curvature")
        }
        "rank1" => {
            let got = rank1_pcurvature_oracle(&c.form(inp(0))).map_err(|e| e.to_string())?;
            same(&got, &c.scalar(c.expected_str()), "rank-1 p-curvature")
        }
        "classify" => {
            let w = c.form(inp(1));
            let charts: Vec<Chart> = if inp(3).is_empty() { vec![] } else { vec![c.chart(inp(3))] };
            let v = match inp(0) {
                "mu_p" => classify_mu_p(&w, &charts),
                "alpha_p" => classify_alpha_p(&w),
                "aff1" => classify_aff1(&w, &c.form(inp(2)), &charts, &[]),
                other => return Err(format!("unknown group {other}")),
            }
            .map_err(|e| e.to_string())?;
            same(&v.accepted, &c.expected["accepted"].as_bool().expect("accepted"), "accepted")?;
            same(&v.reason.to_string().as_str(), &c.expected["reason"].as_str().expect("reason"), "reason")?;
            if let Some(want) = c.expected["witness"].as_str() {
                let want = c.scalar(want);
                let got = if inp(0) == "alpha_p" {
                    v.primitive.clone()
                } else {
                    v.witnesses.first().map(|x| x.f.clone())
                }
                .ok_or("no witness attached")?;
                same(&got, &want, "witness")?;
                if inp(0) != "alpha_p" {
                    let all = exhaustive_witnesses(&w, &charts[0]);
                    if !all.contains(&want) {
                        return Err("exhaustive search disagrees".into());
                    }
                }
            }
            Ok(())
        }
        "boundary" => {
            let parts: Vec<&str> = inp(1).split(',').map(str::trim).collect();
            let g = match inp(0) {
                "g_m" => GroupElement::Gm(c.scalar(parts[0])),
                "g_a" => GroupElement::Ga(c.scalar(parts[0])),
                "aff1" => GroupElement::Aff1(c.scalar(parts[0]), c.scalar(parts[1])),
                other => return Err(format!("unknown tag {other}")),
            };
            let t = boundary_torsor(&g).map_err(|e| e.to_string())?;
            same(&t.kind.to_string().as_str(), &c.expected["kind"].as_str().expect("kind"), "kind")?;
            let rhs = c.expected["rhs"].as_array().expect("rhs");
            if rhs.len() != t.equations.len() {
                return Err("equation count".into());
            }
            for (eq, want) in t.equations.iter().zip(rhs) {
                same(&eq.rhs, &c.scalar(want.as_str().expect("rhs")), "equation")?;
            }
            let forms = c.expected["forms"].as_array().expect("forms");
            if forms.len() != t.forms.len() {
                return Err("form count".into());
            }
            for (f, want) in t.forms.iter().zip(forms) {
                same(f, &c.form(want.as_str().expect("form")), "form")?;
            }
            Ok(())
        }
        "cocycle" => {
            let ws: Vec<ChartWitness> = c.inputs.iter().map(|t| witness(&c, t)).collect();
            result_or_error(&c, kummer_cocycle(&ws), |u| {
                same(&u[&(0, 1)], &c.scalar(c.expected_str()), "u_12")
            })
        }
        "parse" => {
            let v = expr::evaluate(inp(0), ring).map_err(|e| e.to_string())?;
            same(&v.sort().to_string().as_str(), &c.expected["sort"].as_str().expect("sort"), "sort")?;
            match v {
                Value::Two(t) => same(&t, &two_form(&c, c.expected["value"].as_str().expect("value")), "value"),
                other => Err(format!("unexpected value {other}")),
            }
        }
        "cli" => {
            let mut argv = vec!["charp"];
            argv.extend(c.inputs.iter().copied());
            argv.push("--json");
            let out = charp_cli::run(argv, &mut std::io::empty());
            let doc: Json = serde_json::from_str(&out.stdout).map_err(|e| e.to_string())?;
            same(&(out.code as i64), &c.expected["exit"].as_i64().expect("exit"), "exit code")?;
            if let Some(r) = c.expected.get("reason") {
                same(&doc["reason"], r, "reason")?;
            }
            if let Some(w) = c.expected.get("witness") {
                same(&doc["witnesses"][0]["f"], w, "witness")?;
            }
            if let Some(psi) = c.expected.get("psi") {
                same(&doc["result"][0]["psi"], psi, "psi")?;
            }
            Ok(())
        }
        other => Err(format!("unknown fixture kind {other}")),
    }
}
