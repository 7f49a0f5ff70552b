//! The nodal cubic fourfold: blow-up `Ỹ` of the node, exceptional quadric
//! `Q = Q³`, the divisor `D` of lines through the node, and the K3 surface
//! `S = Q ∩ D`. Replays the functor
//! `Ψ = p_* ∘ i^* ∘ T_{O(-H)}[1] ∘ L_{O(H)} ∘ L_{O(h+H)}` on `j_*S`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formalcat::{mutate_left, Context, ContextBuilder, Gen, ObjExpr};
use crate::graded::GradedDim;
use crate::mukai::{chi_k3, mukai_pairing, restricted_vector};
use crate::nodal::hom_push;
use crate::quadric::{chi_quadric, hom_quadric, QuadricSheaf};
use crate::report::{ReportBuilder, ReportItem, VerificationReport};

const N: u32 = 3;

const CITE_R1: &str = "left mutation through an exceptional line bundle with no Homs to the object is the identity";
const CITE_R2: &str = "projection formula: j_*F ⊗ O(L) = j_*(F ⊗ j^*O(L))";
const CITE_R3: &str = "flat base change i^*j_* = s_*t^* across Q ∩ D";
const CITE_R4: &str = "p restricted to Q ∩ D identifies it with the K3 surface, so p_*s_* = id";
const CITE_PIC: &str = "Q = H - h with conormal convention j^*O(-Q) = O_Q(1)";
const CITE_MEMBERSHIP: &str = "j_*S lies in the orthogonal of O, O(H), O(2H), j_*O_Q(-1), j_*O_Q(-2)";
const CITE_PSI: &str = "Ψ(j_*S) = t^*S";
const CITE_MUKAI: &str = "t^*S is spherical on the K3 surface";

/// The class `a·h + b·H` on `Ỹ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PicClass {
    pub a: i64,
    pub b: i64,
}

impl PicClass {
    pub const fn new(a: i64, b: i64) -> Self {
        Self { a, b }
    }

    pub const fn h() -> Self {
        Self::new(1, 0)
    }

    pub const fn big_h() -> Self {
        Self::new(0, 1)
    }

    /// `D = 3h - H`.
    pub const fn d() -> Self {
        Self::new(3, -1)
    }

    /// The exceptional divisor `Q = H - h`.
    pub const fn q() -> Self {
        Self::new(-1, 1)
    }

    pub fn plus(self, o: Self) -> Self {
        Self::new(self.a + o.a, self.b + o.b)
    }

    pub fn times(self, k: i64) -> Self {
        Self::new(self.a * k, self.b * k)
    }

    pub fn minus(self, o: Self) -> Self {
        self.plus(o.times(-1))
    }

    /// `j^*O(a·h + b·H) = O_Q(a)`: `h` restricts to the hyperplane class
    /// and `H` to the trivial bundle.
    pub fn restrict_to_quadric(self) -> i64 {
        self.a
    }

    pub fn line(self) -> ObjExpr {
        ObjExpr::gen(Gen::AmbientLine { h: self.a, big_h: self.b })
    }
}

impl fmt::Display for PicClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body = crate::formalcat::expr::render_pic(self.a, self.b);
        if body.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&body)
        }
    }
}

/// `j^*O(Q)` from the conormal convention alone: `O_Q(1) = j^*O(-Q)`.
pub fn conormal_degree_of_q() -> i64 {
    -1
}

/// One factor of a composed functor.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Step {
    /// `- ⊗ O(L)[shift]`.
    TwistBy { class: PicClass, shift: i64 },
    /// `L_{O(L)}`.
    MutateLeft(PicClass),
    /// `i^*` on pushforwards from `Q`, via base change.
    PushPullBaseChange,
    /// `p_*` on objects supported on `Q ∩ D`.
    ContractRetraction,
}

impl Step {
    pub fn label(&self) -> String {
        match self {
            Step::TwistBy { class, shift } => format!("T_{{O({class})}}[{shift}]"),
            Step::MutateLeft(class) => format!("L_{{O({class})}}"),
            Step::PushPullBaseChange => "i^*".to_string(),
            Step::ContractRetraction => "p_*".to_string(),
        }
    }

    pub fn rule(&self) -> &'static str {
        match self {
            Step::MutateLeft(_) => "R1",
            Step::TwistBy { .. } => "R2",
            Step::PushPullBaseChange => "R3",
            Step::ContractRetraction => "R4",
        }
    }

    fn citation(&self) -> &'static str {
        match self {
            Step::MutateLeft(_) => CITE_R1,
            Step::TwistBy { .. } => CITE_R2,
            Step::PushPullBaseChange => CITE_R3,
            Step::ContractRetraction => CITE_R4,
        }
    }
}

/// Steps in composed order: the last step is applied first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctorChain {
    pub steps: Vec<Step>,
}

impl FunctorChain {
    pub fn applied_order(&self) -> impl Iterator<Item = &Step> {
        self.steps.iter().rev()
    }
}

/// `Ψ = p_* ∘ i^* ∘ T_{O(-3h+D)}[1] ∘ L_{O(3h-D)} ∘ L_{O(4h-D)}`.
pub fn build_psi() -> FunctorChain {
    let d = PicClass::d();
    let h = PicClass::h();
    FunctorChain {
        steps: vec![
            Step::ContractRetraction,
            Step::PushPullBaseChange,
            Step::TwistBy {
                class: d.minus(h.times(3)),
                shift: 1,
            },
            Step::MutateLeft(h.times(3).minus(d)),
            Step::MutateLeft(h.times(4).minus(d)),
        ],
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub step: String,
    pub rule: String,
    pub citation: String,
    pub hom_evidence: Option<GradedDim>,
    pub result: String,
}

fn ambient_lines() -> Vec<PicClass> {
    vec![
        PicClass::new(0, 0),
        PicClass::big_h(),
        PicClass::big_h().times(2),
        PicClass::h().plus(PicClass::big_h()),
    ]
}

fn pushed_sheaves() -> Vec<QuadricSheaf> {
    (-2..=1)
        .flat_map(|k| [QuadricSheaf::o(k), QuadricSheaf::s(k)])
        .collect()
}

/// `Hom(O(L), j_*F) = Hom_Q(O_Q(a), F)`.
fn hom_line_to_push(l: PicClass, f: QuadricSheaf) -> Result<GradedDim> {
    hom_quadric(N, QuadricSheaf::o(l.restrict_to_quadric()), f)
}

/// `Hom(j_*F, O(L)) = Hom_Q(F, j^*O(L) ⊗ O(Q)[-1])`.
fn hom_push_to_line(f: QuadricSheaf, l: PicClass) -> Result<GradedDim> {
    let target = l.restrict_to_quadric() + conormal_degree_of_q();
    Ok(hom_quadric(N, f, QuadricSheaf::o(target))?.shift(-1))
}

/// Context on `Ỹ` with pushforwards from `Q` and the line bundles of the
/// two decompositions. Homs between distinct ambient line bundles are not
/// tabulated.
pub fn build_cubic_context() -> Result<Context> {
    let mut cb = ContextBuilder::new("cubic");
    let lines = ambient_lines();
    let pushed = pushed_sheaves();
    for &l in &lines {
        let g = Gen::AmbientLine { h: l.a, big_h: l.b };
        cb.generator(g.clone(), true);
        cb.hom_row(g.clone(), g.clone(), GradedDim::unit());
        for &f in &pushed {
            cb.hom_row(g.clone(), Gen::Push(f), hom_line_to_push(l, f)?);
            cb.hom_row(Gen::Push(f), g.clone(), hom_push_to_line(f, l)?);
        }
    }
    for &f in &pushed {
        cb.generator(Gen::Push(f), hom_push(N, f, f)? == GradedDim::unit());
        for &g in &pushed {
            cb.hom_row(Gen::Push(f), Gen::Push(g), hom_push(N, f, g)?);
        }
    }
    cb.build()
}

fn map_gens(f: &ObjExpr, step: &Step, rewrite: &dyn Fn(&Gen) -> Option<Gen>) -> Result<ObjExpr> {
    let mut bad = None;
    let out = f.map_leaves(&mut |g| match rewrite(g) {
        Some(img) => ObjExpr::gen(img),
        None => {
            bad.get_or_insert_with(|| g.render());
            ObjExpr::zero()
        }
    });
    match bad {
        Some(g) => Err(Error::RuleNotApplicable(format!("{} on {g}", step.label()))),
        None => Ok(out),
    }
}

fn apply_step(ctx: &Context, step: &Step, f: &ObjExpr) -> Result<(ObjExpr, Option<GradedDim>)> {
    match step {
        Step::MutateLeft(class) => {
            let e = class.line();
            let evidence = ctx.hom(&e, f)?;
            let (out, _) = mutate_left(ctx, &e, f)?;
            if out != f.normalize() {
                return Err(Error::RuleNotApplicable(format!(
                    "{} moves {} (Hom = {})",
                    step.label(),
                    f.render(),
                    evidence.render()
                )));
            }
            Ok((out, Some(evidence)))
        }
        Step::TwistBy { class, shift } => {
            let a = class.restrict_to_quadric();
            let out = map_gens(f, step, &|g| match g {
                Gen::Push(q) => Some(Gen::Push(q.twisted(a))),
                _ => None,
            })?;
            Ok((out.shift(*shift), None))
        }
        Step::PushPullBaseChange => {
            let out = map_gens(f, step, &|g| match g {
                Gen::Push(q) => Some(Gen::PushPull(*q)),
                _ => None,
            })?;
            Ok((out, None))
        }
        Step::ContractRetraction => {
            let out = map_gens(f, step, &|g| match g {
                Gen::PushPull(q) => Some(Gen::Pull(*q)),
                _ => None,
            })?;
            Ok((out, None))
        }
    }
}

/// Applies `chain` right to left, recording each rule firing.
pub fn apply_chain(ctx: &Context, chain: &FunctorChain, f: &ObjExpr) -> Result<(ObjExpr, Vec<TraceStep>)> {
    let mut cur = f.normalize();
    let mut trace = Vec::new();
    for step in chain.applied_order() {
        let (next, evidence) = apply_step(ctx, step, &cur)?;
        cur = next;
        trace.push(TraceStep {
            step: step.label(),
            rule: step.rule().to_string(),
            citation: step.citation().to_string(),
            hom_evidence: evidence,
            result: cur.render(),
        });
    }
    Ok((cur, trace))
}

/// The cubic verification report with the `Ψ` trace attached.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CubicReport {
    pub dim: u32,
    pub items: Vec<ReportItem>,
    pub all_pass: bool,
    pub trace: Vec<TraceStep>,
}

impl CubicReport {
    fn new(report: VerificationReport, trace: Vec<TraceStep>) -> Self {
        Self {
            dim: report.dim,
            items: report.items,
            all_pass: report.all_pass,
            trace,
        }
    }
}

pub fn verify_cubic() -> CubicReport {
    verify_cubic_detailed().0
}

/// The report together with every error met while building it.
pub fn verify_cubic_detailed() -> (CubicReport, Vec<Error>) {
    let mut rb = ReportBuilder::new();

    // Picard identities
    rb.check("pic.exceptional_restriction", CITE_PIC, conormal_degree_of_q(), Ok::<_, Error>(PicClass::q().restrict_to_quadric()));
    let h = PicClass::h();
    let d = PicClass::d();
    rb.check("pic.4h-D", "D = 3h - H", "h+H", Ok::<_, Error>(h.times(4).minus(d)));
    rb.check("pic.3h-D", "D = 3h - H", "H", Ok::<_, Error>(h.times(3).minus(d)));
    rb.check("pic.-3h+D", "D = 3h - H", "-H", Ok::<_, Error>(d.minus(h.times(3))));

    let ctx = match build_cubic_context() {
        Ok(c) => c,
        Err(e) => {
            rb.check("context", "cubic context", "ok", Err::<String, _>(e));
            let (r, errs) = rb.finish(4);
            return (CubicReport::new(r, Vec::new()), errs);
        }
    };

    // membership of j_*S
    let s = ObjExpr::push(QuadricSheaf::s(0));
    let zero = GradedDim::zero().render();
    for k in 0..=2 {
        let l = PicClass::big_h().times(k);
        rb.check(
            format!("membership.O({l})"),
            CITE_MEMBERSHIP,
            &zero,
            ctx.hom(&l.line(), &s).map(|g| g.render()),
        );
    }
    for k in [-1, -2] {
        rb.check(
            format!("membership.j*O({k})"),
            CITE_MEMBERSHIP,
            &zero,
            hom_push(N, QuadricSheaf::s(0), QuadricSheaf::o(k)).map(|g| g.render()),
        );
    }

    // the functor chain and its replay
    let psi = build_psi();
    rb.check("psi.steps", CITE_PSI, 5, Ok::<_, Error>(psi.steps.len()));
    rb.check(
        "psi.first_step",
        CITE_PSI,
        "L_{O(h+H)}",
        Ok::<_, Error>(psi.applied_order().next().map(Step::label).unwrap_or_default()),
    );
    let replay = apply_chain(&ctx, &psi, &s);
    let mut trace = Vec::new();
    let mut final_vector = None;
    match replay {
        Ok((out, t)) => {
            let (base, shift) = out.strip_shift();
            rb.check("psi.replay", CITE_PSI, "t*S", Ok::<_, Error>(base.render()));
            rb.check("psi.shift", "the twist step carries the shift [1]", 1, Ok::<_, Error>(shift));
            rb.check("psi.trace_length", CITE_PSI, 5, Ok::<_, Error>(t.len()));
            let r1_zero = t
                .iter()
                .filter(|s| s.rule == "R1")
                .all(|s| s.hom_evidence.as_ref().is_some_and(GradedDim::is_zero));
            rb.check("psi.mutations_trivial", CITE_R1, true, Ok::<_, Error>(r1_zero));
            if let Some(Gen::Pull(f)) = base.as_gen() {
                final_vector = Some(restricted_vector(*f));
            }
            trace = t;
        }
        Err(e) => {
            rb.check("psi.replay", CITE_PSI, "t*S", Err::<String, _>(e));
        }
    }

    // Mukai lattice
    let v = final_vector.unwrap_or_else(|| Err(Error::Undefined("Ψ replay did not end on a pullback".into())));
    rb.check(
        "mukai.vector",
        CITE_MUKAI,
        "(2, -1·H, 2)",
        v.clone().map(|v| v.to_string()),
    );
    rb.check("mukai.pairing", CITE_MUKAI, -2, v.clone().map(|v| mukai_pairing(v, v)));
    rb.check("mukai.chi", CITE_MUKAI, 2, v.map(|v| chi_k3(v, v)));
    let koszul = chi_quadric(N, QuadricSheaf::s(0), QuadricSheaf::s(0))
        .and_then(|a| Ok(a - chi_quadric(N, QuadricSheaf::s(3), QuadricSheaf::s(0))?));
    rb.check("mukai.chi_koszul", "O_S is resolved by O_Q(-3) -> O_Q", 2, koszul);

    let (r, errs) = rb.finish(4);
    (CubicReport::new(r, trace), errs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pic_identities() {
        assert_eq!(PicClass::q().restrict_to_quadric(), conormal_degree_of_q());
        assert_eq!(PicClass::big_h().restrict_to_quadric(), 0);
        assert_eq!(PicClass::new(1, 1).to_string(), "h+H");
        assert_eq!(PicClass::new(0, -1).to_string(), "-H");
    }

    #[test]
    fn psi_shape() {
        let psi = build_psi();
        assert_eq!(psi.steps.len(), 5);
        assert_eq!(psi.applied_order().next(), Some(&Step::MutateLeft(PicClass::new(1, 1))));
        assert_eq!(psi.steps[2], Step::TwistBy { class: PicClass::new(0, -1), shift: 1 });
    }

    #[test]
    fn psi_takes_spinor_to_pullback() {
        let ctx = build_cubic_context().unwrap();
        let (out, trace) = apply_chain(&ctx, &build_psi(), &ObjExpr::push(QuadricSheaf::s(0))).unwrap();
        assert_eq!(out.render(), "t*S[1]");
        let rules: Vec<_> = trace.iter().map(|t| t.rule.as_str()).collect();
        assert_eq!(rules, ["R1", "R1", "R2", "R3", "R4"]);
    }

    #[test]
    fn empty_chain_and_single_twist() {
        let ctx = build_cubic_context().unwrap();
        let x = ObjExpr::push(QuadricSheaf::s(0));
        let empty = FunctorChain { steps: vec![] };
        assert_eq!(apply_chain(&ctx, &empty, &x).unwrap().0, x);
        let twist = FunctorChain {
            steps: vec![Step::TwistBy { class: PicClass::new(0, -1), shift: 0 }],
        };
        assert_eq!(apply_chain(&ctx, &twist, &x).unwrap().0, x);
    }

    #[test]
    fn nontrivial_mutation_is_refused() {
        let ctx = build_cubic_context().unwrap();
        let err = apply_chain(&ctx, &build_psi(), &ObjExpr::push(QuadricSheaf::o(0))).unwrap_err();
        assert!(matches!(err, Error::RuleNotApplicable(_)), "{err}");
    }

    #[test]
    fn report_passes() {
        let (r, errs) = verify_cubic_detailed();
        for i in r.items.iter().filter(|i| !i.pass) {
            eprintln!("{}: expected {} got {}", i.id, i.expected, i.got);
        }
        assert!(errs.is_empty());
        assert!(r.all_pass);
        assert_eq!(r.trace.len(), 5);
    }
}
