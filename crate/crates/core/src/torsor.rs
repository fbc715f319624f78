//! Torsors under Frobenius kernels: classifiers, boundary torsors and
//! Kummer gluing data.
//!
//! A `mu_p`-torsor induces a closed form `w` with `C(w) = w`, an
//! `alpha_p`-torsor one with `C(w) = 0`, and an `aff(1)^F`-torsor a pair
//! `(w, w')` with `dw = 0 = dw' + w ^ w'`, `C(w) = w` and `C(f w') = 0` for
//! every local logarithmic witness `f` of `w`. The last condition is
//! checked on the witnesses found on the supplied charts; two witnesses on
//! a common chart differ by a p-th power unit `u^p`, and
//! `C(u^p f w') = u C(f w')`, so one witness per chart decides it there.
//! With no witness at all the classifier refuses instead of guessing.

use std::collections::BTreeMap;
use std::fmt;

use crate::cartier::{antiderivative, cartier_of_closed, solve_log_witness, Chart};
use crate::connections::{
    curvature, maurer_cartan, pcurvature_brute, GroupTag, MatrixOneForm, PCurvature, RatMatrix,
};
use crate::error::{Error, Result};
use crate::forms::{differential, dlog, OneForm};
use crate::poly::{MultiPoly, RatFunc, Ring};

/// A unit `f` on a chart, witnessing `w = df/f` there.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ChartWitness {
    pub chart: Chart,
    pub f: RatFunc,
}

impl ChartWitness {
    /// Checks that `f` is nonzero and that its numerator and denominator
    /// factor over the chart's generators.
    pub fn new(chart: Chart, f: RatFunc) -> Result<Self> {
        if f.is_zero() {
            return Err(Error::ZeroUnit);
        }
        if f.ring() != chart.ring() {
            return Err(Error::RingMismatch);
        }
        if !is_unit_on(&chart, f.num()) || !is_unit_on(&chart, f.den()) {
            return Err(Error::InvalidWitness);
        }
        Ok(ChartWitness { chart, f })
    }

    fn sort_key(&self) -> (String, String) {
        let gens: Vec<String> = self.chart.generators().iter().map(|g| g.to_string()).collect();
        (gens.join(";"), self.f.to_string())
    }
}

fn is_unit_on(chart: &Chart, poly: &MultiPoly) -> bool {
    let mut rest = poly.clone();
    for q in chart.generators() {
        while let Ok(quot) = rest.divexact(q) {
            rest = quot;
        }
    }
    rest.is_constant()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Reason {
    Ok,
    NotClosed,
    CurvatureNonzero,
    CartierConditionFailed,
    ConditionThreeFailed,
}

impl fmt::Display for Reason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Reason::Ok => "OK",
            Reason::NotClosed => "NotClosed",
            Reason::CurvatureNonzero => "CurvatureNonzero",
            Reason::CartierConditionFailed => "CartierConditionFailed",
            Reason::ConditionThreeFailed => "ConditionThreeFailed",
        };
        f.write_str(s)
    }
}

/// Outcome of a classifier. `accepted` holds exactly when `reason` is
/// [`Reason::Ok`]; an accepted verdict's certificate is identically zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub accepted: bool,
    pub reason: Reason,
    pub detail: Option<String>,
    /// Logarithmic witnesses, sorted by chart and then by unit.
    pub witnesses: Vec<ChartWitness>,
    /// `alpha_p` only: a primitive `f'` with `df' = w`.
    pub primitive: Option<RatFunc>,
    pub certificate: Option<PCurvature>,
}

impl Verdict {
    fn reject(reason: Reason, detail: impl Into<String>) -> Self {
        Verdict {
            accepted: false,
            reason,
            detail: Some(detail.into()),
            witnesses: Vec::new(),
            primitive: None,
            certificate: None,
        }
    }

    fn accept() -> Self {
        Verdict {
            accepted: true,
            reason: Reason::Ok,
            detail: None,
            witnesses: Vec::new(),
            primitive: None,
            certificate: None,
        }
    }

    fn check_certificate(self) -> Result<Self> {
        if self.accepted && self.certificate.as_ref().is_some_and(|c| !c.is_zero()) {
            return Err(Error::Internal(
                "accepted verdict carries a nonzero p-curvature".into(),
            ));
        }
        Ok(self)
    }
}

fn witnesses_on(w: &OneForm, charts: &[Chart]) -> Result<Vec<ChartWitness>> {
    let mut out = Vec::new();
    for chart in charts {
        match solve_log_witness(w, chart) {
            Ok(lw) => out.push(ChartWitness {
                chart: chart.clone(),
                f: lw.unit,
            }),
            Err(Error::NoWitnessOnChart) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

fn sort_witnesses(ws: &mut Vec<ChartWitness>) {
    ws.sort_by_cached_key(ChartWitness::sort_key);
    ws.dedup();
}

/// Decides whether `w` comes from a `mu_p`-torsor: `w` closed and
/// `C(w) = w`. Witnesses found on `charts` are attached.
pub fn classify_mu_p(w: &OneForm, charts: &[Chart]) -> Result<Verdict> {
    if !w.is_closed() {
        return Ok(Verdict::reject(Reason::NotClosed, "dw != 0"));
    }
    let certificate = Some(pcurvature_brute(&MatrixOneForm::scalar(w.clone())));
    let c = cartier_of_closed(w);
    let mut verdict = if c == *w {
        let mut v = Verdict::accept();
        v.witnesses = witnesses_on(w, charts)?;
        sort_witnesses(&mut v.witnesses);
        v
    } else {
        Verdict::reject(Reason::CartierConditionFailed, format!("C(w) = {c}"))
    };
    verdict.certificate = certificate;
    verdict.check_certificate()
}

/// Decides whether `w` comes from an `alpha_p`-torsor: `w` closed and
/// `C(w) = 0`. The primitive `f'` with `df' = w` is attached.
pub fn classify_alpha_p(w: &OneForm) -> Result<Verdict> {
    if !w.is_closed() {
        return Ok(Verdict::reject(Reason::NotClosed, "dw != 0"));
    }
    let certificate = Some(pcurvature_brute(&MatrixOneForm::ga_embedded(w.clone())));
    let c = cartier_of_closed(w);
    let mut verdict = if c.is_zero() {
        let mut v = Verdict::accept();
        v.primitive = Some(antiderivative(w)?);
        v
    } else {
        Verdict::reject(Reason::CartierConditionFailed, format!("C(w) = {c}"))
    };
    verdict.certificate = certificate;
    verdict.check_certificate()
}

/// Decides whether `(w, w')` comes from an `aff(1)^F`-torsor.
///
/// The witness set is `extra` together with the witnesses found on
/// `charts`; each extra witness must satisfy `dlog(f) = w`.
pub fn classify_aff1(
    w: &OneForm,
    wp: &OneForm,
    charts: &[Chart],
    extra: &[ChartWitness],
) -> Result<Verdict> {
    if w.ring() != wp.ring() {
        return Err(Error::RingMismatch);
    }
    if !w.is_closed() {
        return Ok(Verdict::reject(Reason::NotClosed, "dw != 0"));
    }
    let twisted = &wp.exterior_derivative() + &w.wedge(wp);
    if !twisted.is_zero() {
        return Ok(Verdict::reject(
            Reason::CurvatureNonzero,
            format!("dw' + w^w' = {twisted}"),
        ));
    }
    let omega = MatrixOneForm::aff1(w.clone(), wp.clone());
    let certificate = Some(pcurvature_brute(&omega));
    let c = cartier_of_closed(w);
    if c != *w {
        let mut v = Verdict::reject(Reason::CartierConditionFailed, format!("C(w) = {c}"));
        v.certificate = certificate;
        return Ok(v);
    }

    let mut witnesses = Vec::with_capacity(extra.len() + charts.len());
    for x in extra {
        if x.f.ring() != w.ring() {
            return Err(Error::RingMismatch);
        }
        if x.f.is_zero() || dlog(&x.f)? != *w {
            return Err(Error::InvalidWitness);
        }
        witnesses.push(x.clone());
    }
    witnesses.extend(witnesses_on(w, charts)?);
    sort_witnesses(&mut witnesses);

    let mut verdict = if witnesses.is_empty() {
        Verdict::reject(
            Reason::ConditionThreeFailed,
            "no logarithmic witness found; supply one",
        )
    } else {
        let mut failed = None;
        for x in &witnesses {
            let fwp = wp.scale(&x.f);
            if !fwp.is_closed() {
                return Err(Error::Internal(format!("f*w' is not closed for f = {}", x.f)));
            }
            let c = cartier_of_closed(&fwp);
            if !c.is_zero() {
                failed = Some(format!("C(f*w') = {c} for f = {}", x.f));
                break;
            }
        }
        match failed {
            Some(d) => Verdict::reject(Reason::ConditionThreeFailed, d),
            None => Verdict::accept(),
        }
    };
    verdict.witnesses = witnesses;
    verdict.certificate = certificate;
    verdict.check_certificate()
}

/// An element of `G^(p)` for the supported groups.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupElement {
    Gm(RatFunc),
    Ga(RatFunc),
    /// `(f, f')`, i.e. the matrix `((f, f'), (0, 1))`.
    Aff1(RatFunc, RatFunc),
}

impl GroupElement {
    pub fn tag(&self) -> GroupTag {
        match self {
            GroupElement::Gm(_) => GroupTag::Gm,
            GroupElement::Ga(_) => GroupTag::Ga,
            GroupElement::Aff1(..) => GroupTag::Aff1,
        }
    }

    pub fn ring(&self) -> Ring {
        match self {
            GroupElement::Gm(f) | GroupElement::Ga(f) | GroupElement::Aff1(f, _) => f.ring(),
        }
    }

    /// The element in the tag's matrix embedding.
    pub fn matrix(&self) -> RatMatrix {
        let ring = self.ring();
        let rows = match self {
            GroupElement::Gm(f) | GroupElement::Ga(f) => vec![vec![f.clone()]],
            GroupElement::Aff1(f, fp) => vec![
                vec![f.clone(), fp.clone()],
                vec![RatFunc::zero(ring), RatFunc::one(ring)],
            ],
        };
        RatMatrix::from_rows(ring, rows).expect("square by construction")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TorsorKind {
    MuP,
    AlphaP,
    Aff1F,
}

impl fmt::Display for TorsorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TorsorKind::MuP => "mu_p",
            TorsorKind::AlphaP => "alpha_p",
            TorsorKind::Aff1F => "aff1F",
        })
    }
}

/// `var^p = rhs` over the chart's coordinate ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorsorEquation {
    pub chart: Chart,
    pub var: &'static str,
    pub rhs: RatFunc,
}

impl fmt::Display for TorsorEquation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^{} = {}", self.var, self.chart.ring().p(), self.rhs)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorsorPresentation {
    pub kind: TorsorKind,
    pub equations: Vec<TorsorEquation>,
    /// `[dlog f]`, `[df']`, or `[f^-1 df, -f^-1 df']`.
    pub forms: Vec<OneForm>,
}

impl TorsorPresentation {
    /// The forms as a Lie-algebra valued matrix, comparable with
    /// [`maurer_cartan`].
    pub fn form_matrix(&self) -> MatrixOneForm {
        match self.kind {
            TorsorKind::MuP | TorsorKind::AlphaP => MatrixOneForm::scalar(self.forms[0].clone()),
            TorsorKind::Aff1F => MatrixOneForm::aff1(self.forms[0].clone(), self.forms[1].clone()),
        }
    }

    /// For `mu_p` and `aff(1)^F`: the unit `f` on the chart of the first
    /// equation, a logarithmic witness of the first form.
    pub fn witness(&self) -> Option<ChartWitness> {
        match self.kind {
            TorsorKind::AlphaP => None,
            _ => {
                let eq = &self.equations[0];
                Some(ChartWitness {
                    chart: eq.chart.clone(),
                    f: eq.rhs.clone(),
                })
            }
        }
    }
}

/// The chart where all of `fs` are regular and the first is a unit:
/// generated by the non-constant numerator of `fs[0]` and every
/// non-constant denominator.
fn chart_for(ring: Ring, unit: Option<&RatFunc>, regular: &[&RatFunc]) -> Result<Chart> {
    let mut gens: Vec<MultiPoly> = Vec::new();
    let mut push = |q: &MultiPoly| {
        if !q.is_constant() {
            let q = q.monic();
            if !gens.contains(&q) {
                gens.push(q);
            }
        }
    };
    if let Some(u) = unit {
        push(u.num());
    }
    for f in regular {
        push(f.den());
    }
    Chart::new(ring, gens)
}

/// The torsor `X x_{g, G^(p)} G` under the Frobenius kernel: the fibre of
/// Frobenius over `g`, presented by explicit p-th power equations.
pub fn boundary_torsor(g: &GroupElement) -> Result<TorsorPresentation> {
    let ring = g.ring();
    match g {
        GroupElement::Gm(f) => {
            if f.is_zero() {
                return Err(Error::ZeroUnit);
            }
            let chart = chart_for(ring, Some(f), &[f])?;
            Ok(TorsorPresentation {
                kind: TorsorKind::MuP,
                equations: vec![TorsorEquation { chart, var: "t", rhs: f.clone() }],
                forms: vec![dlog(f)?],
            })
        }
        GroupElement::Ga(fp) => {
            let chart = chart_for(ring, None, &[fp])?;
            Ok(TorsorPresentation {
                kind: TorsorKind::AlphaP,
                equations: vec![TorsorEquation { chart, var: "t", rhs: fp.clone() }],
                forms: vec![differential(fp)],
            })
        }
        GroupElement::Aff1(f, fp) => {
            if f.is_zero() {
                return Err(Error::ZeroUnit);
            }
            let chart = chart_for(ring, Some(f), &[f, fp])?;
            let finv = f.inv()?;
            Ok(TorsorPresentation {
                kind: TorsorKind::Aff1F,
                equations: vec![
                    TorsorEquation { chart: chart.clone(), var: "u", rhs: f.clone() },
                    TorsorEquation { chart, var: "v", rhs: fp.clone() },
                ],
                forms: vec![dlog(f)?, -differential(fp).scale(&finv)],
            })
        }
    }
}

/// `maurer_cartan` of a group element in its tag's embedding.
pub fn element_maurer_cartan(g: &GroupElement) -> Result<MatrixOneForm> {
    if let GroupElement::Gm(f) | GroupElement::Aff1(f, _) = g {
        if f.is_zero() {
            return Err(Error::ZeroUnit);
        }
    }
    maurer_cartan(&g.matrix(), g.tag())
}

/// Gluing data for local Kummer torsors: `u_ij` with `u_ij^p = f_i / f_j`
/// for every ordered pair `i != j` (0-based indices).
pub fn kummer_cocycle(witnesses: &[ChartWitness]) -> Result<BTreeMap<(usize, usize), RatFunc>> {
    let forms = witnesses
        .iter()
        .map(|x| dlog(&x.f))
        .collect::<Result<Vec<_>>>()?;
    if forms.windows(2).any(|w| w[0] != w[1]) {
        return Err(Error::InconsistentWitnesses);
    }
    let mut out = BTreeMap::new();
    for (i, a) in witnesses.iter().enumerate() {
        for (j, b) in witnesses.iter().enumerate() {
            if i != j {
                out.insert((i, j), a.f.checked_div(&b.f)?.p_th_root()?);
            }
        }
    }
    Ok(out)
}

/// `(dw, dw' + w ^ w')` vanish: condition (1), as a curvature check on the
/// `aff(1)` matrix.
pub fn aff1_flat(w: &OneForm, wp: &OneForm) -> bool {
    curvature(&MatrixOneForm::aff1(w.clone(), wp.clone())).is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Monomial;

    fn ring(p: u32) -> Ring {
        Ring::new(p, 1).unwrap()
    }

    fn poly(r: Ring, terms: &[(u32, i64)]) -> MultiPoly {
        MultiPoly::from_terms(r, terms.iter().map(|&(e, c)| (Monomial::new(&[e]), c)))
    }

    fn rf(r: Ring, terms: &[(u32, i64)]) -> RatFunc {
        RatFunc::from_poly(poly(r, terms))
    }

    fn x_chart(r: Ring) -> Chart {
        Chart::new(r, vec![MultiPoly::var(r, 0)]).unwrap()
    }

    fn dx_over_x(r: Ring) -> OneForm {
        dlog(&RatFunc::var(r, 0)).unwrap()
    }

    #[test]
    fn mu_p_examples() {
        let r = ring(3);
        let v = classify_mu_p(&dx_over_x(r), &[x_chart(r)]).unwrap();
        assert!(v.accepted);
        assert_eq!(v.witnesses[0].f, RatFunc::var(r, 0));
        assert!(v.certificate.unwrap().is_zero());

        let v = classify_mu_p(&OneForm::single(RatFunc::var(r, 0), 0), &[]).unwrap();
        assert_eq!(v.reason, Reason::CartierConditionFailed);

        let two = dx_over_x(r).scale(&RatFunc::constant(r, 2));
        let v = classify_mu_p(&two, &[x_chart(r)]).unwrap();
        assert_eq!(v.witnesses[0].f, rf(r, &[(2, 1)]));
    }

    #[test]
    fn alpha_p_examples() {
        let r = ring(3);
        let v = classify_alpha_p(&OneForm::single(RatFunc::var(r, 0), 0)).unwrap();
        assert!(v.accepted);
        assert_eq!(v.primitive, Some(rf(r, &[(2, 2)])));
        let v = classify_alpha_p(&dx_over_x(r)).unwrap();
        assert_eq!(v.reason, Reason::CartierConditionFailed);
        let r2 = Ring::new(5, 2).unwrap();
        let v = classify_alpha_p(&OneForm::single(RatFunc::var(r2, 1), 0)).unwrap();
        assert_eq!(v.reason, Reason::NotClosed);
    }

    #[test]
    fn aff1_examples() {
        let r = ring(3);
        let dx = OneForm::basis(r, 0);
        let v = classify_aff1(&dx_over_x(r), &dx, &[x_chart(r)], &[]).unwrap();
        assert!(v.accepted, "{v:?}");

        let xdx = OneForm::single(RatFunc::var(r, 0), 0);
        let v = classify_aff1(&dx_over_x(r), &xdx, &[x_chart(r)], &[]).unwrap();
        assert_eq!(v.reason, Reason::ConditionThreeFailed);

        let v = classify_aff1(&xdx, &dx, &[], &[]).unwrap();
        assert_eq!(v.reason, Reason::CartierConditionFailed);

        let zero = OneForm::zero(r);
        let v = classify_aff1(&zero, &zero, &[Chart::affine_space(r)], &[]).unwrap();
        assert!(v.accepted);

        let v = classify_aff1(&dx_over_x(r), &dx, &[], &[]).unwrap();
        assert_eq!(v.reason, Reason::ConditionThreeFailed);
        assert!(v.detail.unwrap().contains("supply one"));

        let bad = ChartWitness::new(x_chart(r), rf(r, &[(2, 1)])).unwrap();
        assert_eq!(
            classify_aff1(&dx_over_x(r), &dx, &[], &[bad]),
            Err(Error::InvalidWitness)
        );
    }

    #[test]
    fn boundary_examples() {
        let r = ring(3);
        let x = RatFunc::var(r, 0);
        let t = boundary_torsor(&GroupElement::Gm(x.clone())).unwrap();
        assert_eq!(t.equations[0].to_string(), "t^3 = x");
        assert_eq!(t.forms, vec![dx_over_x(r)]);

        let t = boundary_torsor(&GroupElement::Ga(rf(r, &[(2, 2)]))).unwrap();
        assert_eq!(t.equations[0].to_string(), "t^3 = 2*x^2");
        assert_eq!(t.forms, vec![OneForm::single(x.clone(), 0)]);

        let g = GroupElement::Aff1(x.clone(), rf(r, &[(2, 1)]));
        let t = boundary_torsor(&g).unwrap();
        assert_eq!(t.equations[1].to_string(), "v^3 = x^2");
        assert_eq!(t.forms, vec![dx_over_x(r), OneForm::basis(r, 0)]);
        assert_eq!(t.form_matrix(), element_maurer_cartan(&g).unwrap());
        let v = classify_aff1(&t.forms[0], &t.forms[1], &[], &[t.witness().unwrap()]).unwrap();
        assert!(v.accepted);

        assert_eq!(
            boundary_torsor(&GroupElement::Gm(RatFunc::zero(r))),
            Err(Error::ZeroUnit)
        );
    }

    #[test]
    fn cocycle_examples() {
        let r = ring(3);
        let chart = Chart::new(r, vec![poly(r, &[(1, 1)]), poly(r, &[(1, 1), (0, 1)])]).unwrap();
        let x = RatFunc::var(r, 0);
        let xp1 = rf(r, &[(1, 1), (0, 1)]);
        let f2 = &x * &xp1.pow(3);
        let ws = [
            ChartWitness::new(chart.clone(), x.clone()).unwrap(),
            ChartWitness::new(chart.clone(), f2).unwrap(),
        ];
        let u = kummer_cocycle(&ws).unwrap();
        assert_eq!(u[&(0, 1)], xp1.inv().unwrap());
        assert_eq!(u[&(1, 0)], xp1);

        let same = [ws[0].clone(), ws[0].clone()];
        assert!(kummer_cocycle(&same).unwrap()[&(0, 1)].is_one());

        let bad = [ws[0].clone(), ChartWitness::new(chart, xp1).unwrap()];
        assert_eq!(kummer_cocycle(&bad), Err(Error::InconsistentWitnesses));
    }

    #[test]
    fn witness_validation() {
        let r = ring(5);
        let xp1 = rf(r, &[(1, 1), (0, 1)]);
        assert_eq!(ChartWitness::new(x_chart(r), xp1), Err(Error::InvalidWitness));
        assert_eq!(
            ChartWitness::new(x_chart(r), RatFunc::zero(r)),
            Err(Error::ZeroUnit)
        );
        let inv = RatFunc::var(r, 0).inv().unwrap().scale(3);
        assert!(ChartWitness::new(x_chart(r), inv).is_ok());
    }
}
