//! Blow-up of a variety `Y` of dimension `d` at one nodal point.
//!
//! The exceptional divisor is a smooth quadric `Q` of dimension `n = d - 1`
//! with `O_Q(1) = j^*O(-Q)`. Objects are pushforwards `j_*F` of line and
//! spinor bundles; `j*F(k)` means `j_*(F(k)) = j_*F ⊗ O(-kQ)`. The Serre
//! functor acts by `j_*F ↦ j_*F(1-n)[n+1]` and the relative canonical twist
//! by `j_*F ↦ j_*F(1-n)`.

use std::ops::RangeInclusive;

use crate::error::{Error, Result};
use crate::formalcat::{
    apply_relative_twist, check_exceptional, check_semiorthogonal, check_spherical,
    mutate_right, mutate_right_through, Context, ContextBuilder, Gen, LefschetzData, ObjExpr,
    Sod, Triangle,
};
use crate::graded::les::{solve_triangle, LesFacts, Unknown};
use crate::graded::GradedDim;
use crate::quadric::{chi_quadric, hom_quadric, tautological_rank, QuadricSheaf, SheafKind};
use crate::report::{ReportBuilder, VerificationReport};

const CITE_RESTRICTION: &str = "adjunction with the restriction triangle j^*j_*F -> F -> F(1)[2]";
const CITE_TAUT: &str = "pushforward of the tautological spinor sequence";
const CITE_EXCEPTIONAL: &str = "j_* is fully faithful on the Lefschetz blocks";
const CITE_TRIVIAL_MUTATION: &str = "Hom(j^*j_*S, O_Q(k)) = 0 for 2-d <= k <= -1";
const CITE_STEP_MUTATION: &str = "pushed tautological triangle is a mutation triangle";
const CITE_SPINOR_MUTATION: &str = "Hom(j_*S', j_*S'') = C[-2]";
const CITE_PERP: &str = "pushforward of the dual Lefschetz blocks B_i(-i), i >= 1";
const CITE_KERNEL: &str = "kernel generator is R of the spinor pushforward through the perp";
const CITE_MEMBERSHIP: &str = "kernel generator lies in the left orthogonal of the perp";
const CITE_SPHERICAL: &str = "k-spherical: Hom(T,T) = C + C[-k] and S(T) = T[k]";
const CITE_SERRE_CHAIN: &str = "Serre functor of the resolution as R_perp composed with ambient Serre";
const CITE_RELATIVE: &str = "relative Serre functor twists by O((n-1)Q) then mutates through the perp";
const CITE_ORACLE: &str = "Euler characteristic of the restriction triangle";
const CITE_PAIR_SERRE: &str = "Serre duality on the blow-up with j^*ω = O_Q(1-n)";

/// Dimension data of the nodal blow-up.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NodalSetup {
    pub d: u32,
    pub n: u32,
}

impl NodalSetup {
    pub fn new(d: i64) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidDimension(d));
        }
        Ok(Self {
            d: d as u32,
            n: (d - 1) as u32,
        })
    }

    pub fn is_even(&self) -> bool {
        self.d.is_multiple_of(2)
    }

    pub fn twist_range(&self) -> RangeInclusive<i64> {
        (1 - self.n as i64)..=1
    }

    /// Spinor kinds on `Q`: `S` for `d` even, `S'`, `S''` for `d` odd.
    pub fn spinor_kinds(&self) -> Vec<SheafKind> {
        if self.is_even() {
            vec![SheafKind::Spinor]
        } else {
            vec![SheafKind::SpinorPrime, SheafKind::SpinorDoublePrime]
        }
    }

    /// Sheaves on `Q` whose pushforwards generate the context.
    pub fn roster(&self) -> Vec<QuadricSheaf> {
        let mut out = Vec::new();
        for k in self.twist_range() {
            out.push(QuadricSheaf::o(k));
            for kind in self.spinor_kinds() {
                out.push(QuadricSheaf::new(kind, k));
            }
        }
        out
    }

    pub fn in_roster(&self, f: QuadricSheaf) -> bool {
        self.twist_range().contains(&f.twist) && f.validate(self.n).is_ok()
    }

    /// `D̃^⊥` before mutation: `j_*B_i(-i)` for `i = n-1, …, 1`.
    pub fn original_perp(&self) -> Vec<ObjExpr> {
        let n = self.n as i64;
        let mut out = Vec::new();
        for i in (1..n).rev() {
            if !self.is_even() && i == 1 {
                out.push(push(QuadricSheaf::s1(-1)));
            }
            out.push(push(QuadricSheaf::o(-i)));
        }
        out
    }

    /// The kernel generator `T` as stated.
    pub fn expected_kernel(&self) -> ObjExpr {
        if self.is_even() {
            push(QuadricSheaf::s(0))
        } else {
            ObjExpr::cone(&push(QuadricSheaf::s1(0)), &push(QuadricSheaf::s2(0)).shift(2))
        }
    }

    /// Sphericity degree of the kernel generator.
    pub fn spherical_degree(&self) -> u32 {
        if self.is_even() {
            2
        } else {
            3
        }
    }

    /// Expected shift of the relative Serre functor on `T`.
    pub fn relative_shift(&self) -> i64 {
        let d = self.d as i64;
        if self.is_even() {
            2 - d
        } else {
            3 - d
        }
    }
}

fn push(f: QuadricSheaf) -> ObjExpr {
    ObjExpr::push(f)
}

/// `Hom^•(j_*F, j_*G) = Hom^•(j^*j_*F, G)` from the restriction triangle.
pub fn hom_push(n: u32, f: QuadricSheaf, g: QuadricSheaf) -> Result<GradedDim> {
    let main = hom_quadric(n, f, g)?;
    // Hom^j(F(1)[2], G) = Hom^{j-2}(F(1), G)
    let twisted = hom_quadric(n, f.twisted(1), g)?.shift(-2);
    let facts = LesFacts::with_amplitude(0, n as i64 + 1);
    solve_triangle(Unknown::Third, &twisted, &main, &GradedDim::zero(), &facts)
        .map_err(|e| Error::from_les(e, format!("j*{f}"), format!("j*{g}")))
}

/// `χ(j_*F, j_*G) = χ(F, G) - χ(F(1), G)`.
pub fn chi_push(n: u32, f: QuadricSheaf, g: QuadricSheaf) -> Result<i64> {
    Ok(chi_quadric(n, f, g)? - chi_quadric(n, f.twisted(1), g)?)
}

fn nodal_builder(setup: &NodalSetup) -> Result<ContextBuilder> {
    let n = setup.n;
    let nn = n as i64;
    let mut cb = ContextBuilder::new(format!("nodal:{}", setup.d));
    let roster = setup.roster();
    for &f in &roster {
        let exceptional = hom_push(n, f, f)? == GradedDim::unit();
        cb.generator(Gen::Push(f), exceptional);
    }
    for &f in &roster {
        for &g in &roster {
            cb.hom_row(Gen::Push(f), Gen::Push(g), hom_push(n, f, g)?);
        }
    }
    let r = tautological_rank(n) as u32;
    for k in setup.twist_range() {
        if !setup.twist_range().contains(&(k + 1)) {
            continue;
        }
        for kind in setup.spinor_kinds() {
            let o = push(QuadricSheaf::o(k)).times(r);
            cb.triangle(Triangle::new(
                push(QuadricSheaf::new(kind, k)),
                o,
                push(QuadricSheaf::new(kind.partner(), k + 1)),
                CITE_TAUT,
            ));
        }
    }
    for &f in &roster {
        let image = f.twisted(1 - nn);
        if setup.in_roster(image) {
            cb.serre_action(Gen::Push(f), push(image).shift(nn + 1));
            cb.relative_twist(Gen::Push(f), push(image));
        }
    }
    Ok(cb)
}

/// The blow-up context for `dim Y = d`, with `D̃^⊥` stored as its perp.
/// For `d` odd the perp is the mutated collection ending in `j_*S''`.
pub fn build_context(d: i64) -> Result<Context> {
    let setup = NodalSetup::new(d)?;
    let mut cb = nodal_builder(&setup)?;
    let mut perp = setup.original_perp();
    if !setup.is_even() && setup.n >= 2 {
        let ctx0 = cb.clone().build()?;
        let (mutated, _) = mutate_right(&ctx0, &push(QuadricSheaf::o(-1)), &push(QuadricSheaf::s1(-1)))?;
        let (base, _) = mutated.strip_shift();
        // (…, S'(-1), O(-1)) becomes (…, O(-1), S'')
        let pos = perp.len() - 2;
        perp.remove(pos);
        perp.push(base);
    }
    cb.perp(perp);
    cb.build()
}

/// Runs `R_{D̃^⊥}` on `j_*S` (d even) or `j_*S'[1]` (d odd).
pub fn kernel_generator_in(ctx: &Context, setup: &NodalSetup) -> Result<(ObjExpr, Context)> {
    let start = if setup.is_even() {
        push(QuadricSheaf::s(0))
    } else {
        push(QuadricSheaf::s1(0)).shift(1)
    };
    mutate_right_through(ctx, ctx.perp(), &start)
}

pub fn kernel_generator(d: i64) -> Result<ObjExpr> {
    let setup = NodalSetup::new(d)?;
    let ctx = build_context(d)?;
    Ok(kernel_generator_in(&ctx, &setup)?.0)
}

/// Relative Serre functor: relative twist, then `R_{D̃^⊥}`.
pub fn relative_serre(ctx: &Context, f: &ObjExpr) -> Result<(ObjExpr, Context)> {
    let twisted = apply_relative_twist(ctx, f)?;
    mutate_right_through(ctx, ctx.perp(), &twisted)
}

/// Quadric context on `Q^n` with twists `-n..=n`: sheaves, tautological
/// triangles, Serre action `F ↦ F(-n)[n]`, and the dual Lefschetz blocks.
pub fn build_quadric_context(n: u32) -> Result<Context> {
    if n == 0 {
        return Err(Error::InvalidQuadricDim(0));
    }
    let nn = n as i64;
    let kinds: Vec<SheafKind> = if n % 2 == 1 {
        vec![SheafKind::LineBundle, SheafKind::Spinor]
    } else {
        vec![SheafKind::LineBundle, SheafKind::SpinorPrime, SheafKind::SpinorDoublePrime]
    };
    let mut roster = Vec::new();
    for k in -nn..=nn {
        for &kind in &kinds {
            roster.push(QuadricSheaf::new(kind, k));
        }
    }
    let mut cb = ContextBuilder::new(format!("quadric:{n}"));
    for &f in &roster {
        cb.generator(Gen::Sheaf(f), true);
    }
    for &f in &roster {
        for &g in &roster {
            cb.hom_row(Gen::Sheaf(f), Gen::Sheaf(g), hom_quadric(n, f, g)?);
        }
    }
    let r = tautological_rank(n) as u32;
    for k in -nn..nn {
        for &kind in kinds.iter().filter(|k| k.is_spinor()) {
            cb.triangle(Triangle::new(
                ObjExpr::sheaf(QuadricSheaf::new(kind, k)),
                ObjExpr::sheaf(QuadricSheaf::o(k)).times(r),
                ObjExpr::sheaf(QuadricSheaf::new(kind.partner(), k + 1)),
                "tautological spinor sequence",
            ));
        }
    }
    for &f in &roster {
        let image = f.twisted(-nn);
        if image.twist >= -nn {
            cb.serre_action(Gen::Sheaf(f), ObjExpr::sheaf(image).shift(nn));
        }
    }
    cb.build()
}

/// Dual Lefschetz blocks `B_0 ⊇ B_1 ⊇ … ⊇ B_{n-1}` on `Q^n`.
pub fn quadric_lefschetz(n: u32) -> LefschetzData {
    let o = ObjExpr::sheaf(QuadricSheaf::o(0));
    let spinor = if n % 2 == 1 {
        ObjExpr::sheaf(QuadricSheaf::s(0))
    } else {
        ObjExpr::sheaf(QuadricSheaf::s1(0))
    };
    let wide_blocks = if n % 2 == 1 { 1 } else { 2 };
    let blocks = (0..n as usize)
        .map(|i| {
            if i < wide_blocks {
                vec![spinor.clone(), o.clone()]
            } else {
                vec![o.clone()]
            }
        })
        .collect();
    LefschetzData { blocks }
}

fn render_result(r: Result<(ObjExpr, Context)>) -> Result<String> {
    r.map(|(o, _)| o.render())
}

/// Full verification for `dim Y = d`; returns the report and every error met.
pub fn verify_dim_detailed(d: i64) -> (VerificationReport, Vec<Error>) {
    let mut rb = ReportBuilder::new();
    let setup = match NodalSetup::new(d) {
        Ok(s) => s,
        Err(e) => {
            rb.check("setup", "dimension at least 2", "ok", Err::<String, _>(e));
            return rb.finish(d.max(0) as u32);
        }
    };
    let ctx = match build_context(d) {
        Ok(c) => c,
        Err(e) => {
            rb.check("context", "blow-up context", "ok", Err::<String, _>(e));
            return rb.finish(setup.d);
        }
    };
    verify_in(&mut rb, &setup, &ctx);
    rb.finish(setup.d)
}

pub fn verify_dim(d: i64) -> VerificationReport {
    verify_dim_detailed(d).0
}

fn verify_in(rb: &mut ReportBuilder, setup: &NodalSetup, ctx: &Context) {
    let n = setup.n;
    let nn = n as i64;
    let d = setup.d as i64;
    let c2 = GradedDim::single(2, 1);

    // Homs between spinor pushforwards
    if setup.is_even() {
        let s = push(QuadricSheaf::s(0));
        rb.check(
            "hom.push.spinor",
            CITE_RESTRICTION,
            (GradedDim::unit() + c2.clone()).render(),
            ctx.hom(&s, &s).map(|h| h.render()),
        );
    } else {
        let (a, b) = (push(QuadricSheaf::s1(0)), push(QuadricSheaf::s2(0)));
        rb.check("hom.push.spinor", CITE_RESTRICTION, c2.render(), ctx.hom(&a, &b).map(|h| h.render()));
        rb.check(
            "hom.push.spinor.reverse",
            "computed independently with the roles of S' and S'' exchanged",
            c2.render(),
            ctx.hom(&b, &a).map(|h| h.render()),
        );
    }

    // exceptionality
    if d >= 3 {
        for k in setup.twist_range() {
            let o = push(QuadricSheaf::o(k));
            rb.check(format!("exceptional[{o}]"), CITE_EXCEPTIONAL, true, check_exceptional(ctx, &o));
        }
    }
    for kind in setup.spinor_kinds() {
        let s = push(QuadricSheaf::new(kind, 0));
        let cite = if setup.is_even() { "j_*S has a degree-2 self-extension" } else { CITE_EXCEPTIONAL };
        rb.check(format!("exceptional[{s}]"), cite, !setup.is_even(), check_exceptional(ctx, &s));
    }

    // mutation identities
    let spinor0 = if setup.is_even() {
        push(QuadricSheaf::s(0))
    } else {
        push(QuadricSheaf::s1(0))
    };
    for k in (2 - d)..=-1 {
        let e = push(QuadricSheaf::o(k));
        rb.check(
            format!("mutation.trivial[{k}]"),
            CITE_TRIVIAL_MUTATION,
            spinor0.render(),
            render_result(mutate_right(ctx, &e, &spinor0)),
        );
    }
    if d >= 3 {
        for k in setup.twist_range().filter(|&k| k < 1) {
            let e = push(QuadricSheaf::o(k));
            for kind in setup.spinor_kinds() {
                let f = push(QuadricSheaf::new(kind, k));
                let expected = push(QuadricSheaf::new(kind.partner(), k + 1)).shift(-1);
                rb.check(
                    format!("mutation.step[{f}]"),
                    CITE_STEP_MUTATION,
                    expected.render(),
                    render_result(mutate_right(ctx, &e, &f)),
                );
            }
        }
    }
    if !setup.is_even() {
        let expected = setup.expected_kernel().shift(-1);
        rb.check(
            "mutation.spinor",
            CITE_SPINOR_MUTATION,
            expected.render(),
            render_result(mutate_right(ctx, &push(QuadricSheaf::s2(0)), &push(QuadricSheaf::s1(0)))),
        );
    }

    // the perp collection
    let perp = ctx.perp().to_vec();
    let perp_str = perp.iter().map(|e| e.render()).collect::<Vec<_>>().join(", ");
    let mut expected_perp: Vec<ObjExpr> = (1..nn).rev().map(|i| push(QuadricSheaf::o(-i))).collect();
    if !setup.is_even() && n >= 2 {
        expected_perp.push(push(QuadricSheaf::s2(0)));
    }
    let expected_str = expected_perp.iter().map(|e| e.render()).collect::<Vec<_>>().join(", ");
    rb.check("perp.collection", CITE_PERP, format!("({expected_str})"), Ok::<_, Error>(format!("({perp_str})")));
    let all_exc: Result<bool> = perp.iter().try_fold(true, |acc, e| Ok(acc && check_exceptional(ctx, e)?));
    rb.check("perp.exceptional", CITE_PERP, true, all_exc);
    rb.check(
        "perp.semiorthogonal",
        CITE_PERP,
        true,
        check_semiorthogonal(ctx, &Sod::from_collection(&perp)),
    );

    // kernel generator
    let t = setup.expected_kernel();
    let kernel = kernel_generator_in(ctx, setup);
    let kernel_ctx = match &kernel {
        Ok((_, c)) => c.clone(),
        Err(_) => ctx.clone(),
    };
    rb.check("kernel.generator", CITE_KERNEL, t.render(), render_result(kernel));
    let membership: Result<String> = perp
        .iter()
        .map(|e| kernel_ctx.hom(&t, e))
        .try_fold(GradedDim::zero(), |acc, h| Ok(acc + h?))
        .map(|g| g.render());
    rb.check("kernel.membership", CITE_MEMBERSHIP, GradedDim::zero().render(), membership);

    // sphericity including the full Serre chain
    let k = setup.spherical_degree();
    let expected_hom = GradedDim::unit() + GradedDim::single(k as i64, 1);
    rb.check(
        "spherical.hom",
        CITE_SPHERICAL,
        expected_hom.render(),
        kernel_ctx.hom(&t, &t).map(|h| h.render()),
    );
    serre_chain_items(rb, setup, &kernel_ctx, &t);
    let report = check_spherical(&kernel_ctx, &perp, &t, k);
    rb.check(
        "spherical.serre",
        CITE_SERRE_CHAIN,
        t.shift(k as i64).render(),
        report.as_ref().map(|r| r.serre_image.clone()).map_err(|e| e.clone()),
    );
    rb.check(format!("spherical[{k}]"), CITE_SPHERICAL, true, report.map(|r| r.pass));

    // relative Serre functor
    let shift = setup.relative_shift();
    let rel = relative_serre(&kernel_ctx, &t);
    let rel_shift = rel.as_ref().map_err(|e| e.clone()).and_then(|(o, _)| {
        t.shift_to(o)
            .ok_or_else(|| Error::Undefined(format!("{} is not a shift of {t}", o.render())))
    });
    rb.check("relative.serre", CITE_RELATIVE, t.shift(shift).render(), render_result(rel));
    rb.check("relative.shift", CITE_RELATIVE, shift, rel_shift.clone());
    rb.check("strongly.crepant", CITE_RELATIVE, d <= 3, rel_shift.map(|s| s == 0));

    // oracles on all generator pairs
    let roster = setup.roster();
    let mut chi_ok: Result<bool> = Ok(true);
    let mut pair_serre_ok: Result<bool> = Ok(true);
    for &f in &roster {
        for &g in &roster {
            let (a, b) = (push(f), push(g));
            let check = ctx.hom(&a, &b).and_then(|h| Ok(h.euler() == chi_push(n, f, g)?));
            chi_ok = chi_ok.and_then(|ok| Ok(ok && check?));
            if let Some(sa) = ctx.serre_action(&Gen::Push(f)) {
                let check = ctx
                    .hom(&a, &b)
                    .and_then(|h| Ok(h == ctx.hom(&b, sa)?.dual()));
                pair_serre_ok = pair_serre_ok.and_then(|ok| Ok(ok && check?));
            }
        }
    }
    rb.check("oracle.chi", CITE_ORACLE, true, chi_ok);
    rb.check("oracle.pair_serre", CITE_PAIR_SERRE, true, pair_serre_ok);
}

/// Replays the Serre chain mutation by mutation and compares each stage.
fn serre_chain_items(rb: &mut ReportBuilder, setup: &NodalSetup, ctx: &Context, t: &ObjExpr) {
    let nn = setup.n as i64;
    let perp = ctx.perp().to_vec();
    let start = crate::formalcat::apply_serre_action(ctx, t);
    let expected_start = t.twist(1 - nn).shift(nn + 1);
    let ok = rb.check(
        "serre.ambient",
        CITE_SERRE_CHAIN,
        expected_start.render(),
        start.as_ref().map(|o| o.render()).map_err(|e| e.clone()),
    );
    if !ok {
        return;
    }
    let mut cur = expected_start;
    let mut cctx = ctx.clone();
    let line_steps = (nn - 1) as usize;
    for (i, e) in perp.iter().enumerate() {
        let step = i as i64 + 1;
        let expected = if i < line_steps {
            let tw = 1 - nn + step;
            let sh = nn + 1 - step;
            if setup.is_even() {
                push(QuadricSheaf::s(tw)).shift(sh)
            } else {
                let (x, y) = if step % 2 == 0 {
                    (QuadricSheaf::s1(tw), QuadricSheaf::s2(tw))
                } else {
                    (QuadricSheaf::s2(tw), QuadricSheaf::s1(tw))
                };
                ObjExpr::cone(&push(x), &push(y).shift(2)).shift(sh)
            }
        } else {
            t.shift(setup.spherical_degree() as i64)
        };
        let got = mutate_right(&cctx, e, &cur);
        let pass = rb.check(
            format!("serre.chain[{}]", e.render()),
            CITE_SERRE_CHAIN,
            expected.render(),
            got.as_ref().map(|(o, _)| o.render()).map_err(|e| e.clone()),
        );
        match got {
            Ok((o, c)) if pass => {
                cur = o;
                cctx = c;
            }
            _ => return,
        }
    }
}
