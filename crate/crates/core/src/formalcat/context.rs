//! Contexts: generators, Hom tables, triangles and orthogonality facts,
//! together with the structural Hom evaluator.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::formalcat::expr::{Gen, ObjExpr};
use crate::graded::les::{solve_triangle, LesError, LesFacts, Unknown};
use crate::graded::GradedDim;

/// An exact triangle `X -> Y -> Z -> X[1]`, exact by registration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Triangle {
    pub x: ObjExpr,
    pub y: ObjExpr,
    pub z: ObjExpr,
    pub citation: String,
}

impl Triangle {
    pub fn new(x: ObjExpr, y: ObjExpr, z: ObjExpr, citation: impl Into<String>) -> Self {
        Self {
            x: x.normalize(),
            y: y.normalize(),
            z: z.normalize(),
            citation: citation.into(),
        }
    }

    /// The triangle and its two rotations `(Y, Z, X[1])`, `(Z[-1], X, Y)`.
    pub fn rotations(&self) -> [(ObjExpr, ObjExpr, ObjExpr); 3] {
        [
            (self.x.clone(), self.y.clone(), self.z.clone()),
            (self.y.clone(), self.z.clone(), self.x.shift(1)),
            (self.z.shift(-1), self.x.clone(), self.y.clone()),
        ]
    }
}

#[derive(Debug, Clone, Default)]
struct Tables {
    generators: BTreeMap<Gen, bool>,
    hom_table: HashMap<(Gen, Gen), GradedDim>,
    triangles: Vec<Triangle>,
    zero_facts: BTreeSet<(ObjExpr, ObjExpr)>,
    serre_action: BTreeMap<Gen, ObjExpr>,
    relative_twist: BTreeMap<Gen, ObjExpr>,
    perp: Vec<ObjExpr>,
}

/// An immutable context. Operations that learn new facts (fresh mutation
/// cones) return an extended copy; the base tables are shared.
#[derive(Debug, Clone)]
pub struct Context {
    name: String,
    base: Arc<Tables>,
    learned_triangles: Vec<Triangle>,
    learned_zero: BTreeSet<(ObjExpr, ObjExpr)>,
}

fn zero_key(f: &ObjExpr, g: &ObjExpr) -> (ObjExpr, ObjExpr) {
    (f.strip_shift().0, g.strip_shift().0)
}

impl Context {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn generators(&self) -> impl Iterator<Item = (&Gen, bool)> {
        self.base.generators.iter().map(|(g, &e)| (g, e))
    }

    pub fn has_generator(&self, g: &Gen) -> bool {
        self.base.generators.contains_key(g)
    }

    pub fn is_declared_exceptional(&self, g: &Gen) -> bool {
        self.base.generators.get(g).copied().unwrap_or(false)
    }

    pub fn triangles(&self) -> impl Iterator<Item = &Triangle> {
        self.base.triangles.iter().chain(self.learned_triangles.iter())
    }

    pub fn perp(&self) -> &[ObjExpr] {
        &self.base.perp
    }

    pub fn serre_action(&self, g: &Gen) -> Option<&ObjExpr> {
        self.base.serre_action.get(g)
    }

    pub fn relative_twist(&self, g: &Gen) -> Option<&ObjExpr> {
        self.base.relative_twist.get(g)
    }

    pub fn table_entry(&self, a: &Gen, b: &Gen) -> Option<&GradedDim> {
        self.base.hom_table.get(&(a.clone(), b.clone()))
    }

    pub fn is_zero_fact(&self, f: &ObjExpr, g: &ObjExpr) -> bool {
        let key = zero_key(f, g);
        self.base.zero_facts.contains(&key) || self.learned_zero.contains(&key)
    }

    /// Extends the context with a fact learned from a mutation.
    pub(crate) fn learn(&self, triangle: Option<Triangle>, zero: Option<(ObjExpr, ObjExpr)>) -> Context {
        let mut next = self.clone();
        if let Some(t) = triangle {
            if !next.triangles().any(|u| u == &t) {
                next.learned_triangles.push(t);
            }
        }
        if let Some((f, g)) = zero {
            next.learned_zero.insert(zero_key(&f, &g));
        }
        next
    }

    /// Graded `Hom^•(F, G)`.
    pub fn hom(&self, f: &ObjExpr, g: &ObjExpr) -> Result<GradedDim> {
        let mut total = GradedDim::zero();
        let fs = f.terms();
        let gs = g.terms();
        for (a, sa, ma) in &fs {
            for (b, sb, mb) in &gs {
                let h = self.hom_leaf(a, b)?;
                total = total + h.shift(sb - sa).scale((*ma as u64) * (*mb as u64));
            }
        }
        Ok(total)
    }

    fn hom_leaf(&self, a: &ObjExpr, b: &ObjExpr) -> Result<GradedDim> {
        if self.is_zero_fact(a, b) {
            return Ok(GradedDim::zero());
        }
        match (a, b) {
            (ObjExpr::Gen(x), ObjExpr::Gen(y)) => self.gen_hom(x, y),
            (_, ObjExpr::Cone { source, target, .. }) => match self.covariant(a, source, target) {
                Err(e) if e.is_indeterminate() => {
                    if let ObjExpr::Cone { source: s2, target: t2, .. } = a {
                        if let Ok(h) = self.contravariant(s2, t2, b) {
                            return Ok(h);
                        }
                    }
                    Err(e)
                }
                other => other,
            },
            (ObjExpr::Cone { source, target, .. }, _) => self.contravariant(source, target, b),
            _ => unreachable!("normal-form leaves are generators or cones"),
        }
    }

    fn gen_hom(&self, x: &Gen, y: &Gen) -> Result<GradedDim> {
        for g in [x, y] {
            if !self.has_generator(g) {
                return Err(Error::UnknownGenerator(g.render()));
            }
        }
        self.table_entry(x, y).cloned().ok_or_else(|| Error::UnsupportedPair {
            from: x.render(),
            to: y.render(),
        })
    }

    /// `Hom(W, cone(X -> Y))` from `Hom(W, X) -> Hom(W, Y)`.
    fn covariant(&self, w: &ObjExpr, x: &ObjExpr, y: &ObjExpr) -> Result<GradedDim> {
        let hx = self.hom(w, x)?;
        let hy = self.hom(w, y)?;
        let cone = ObjExpr::cone(x, y);
        solve_triangle(Unknown::Third, &hx, &hy, &GradedDim::zero(), &LesFacts::default())
            .map_err(|e| les_err(e, w, &cone))
    }

    /// `Hom(cone(X -> Y), W)` from `Hom(Y, W) -> Hom(X, W)`.
    fn contravariant(&self, x: &ObjExpr, y: &ObjExpr, w: &ObjExpr) -> Result<GradedDim> {
        let hy = self.hom(y, w)?;
        let hx = self.hom(x, w)?;
        let cone = ObjExpr::cone(x, y);
        solve_triangle(Unknown::First, &GradedDim::zero(), &hy, &hx, &LesFacts::default())
            .map_err(|e| les_err(e, &cone, w))
    }
}

fn les_err(e: LesError, from: &ObjExpr, to: &ObjExpr) -> Error {
    Error::from_les(e, from.render(), to.render())
}

/// Single-threaded builder for a [`Context`].
#[derive(Debug, Clone, Default)]
pub struct ContextBuilder {
    name: String,
    tables: Tables,
}

impl ContextBuilder {
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            tables: Tables::default(),
        }
    }

    pub fn generator(&mut self, g: Gen, exceptional: bool) -> &mut Self {
        self.tables.generators.insert(g, exceptional);
        self
    }

    pub fn hom_row(&mut self, a: Gen, b: Gen, value: GradedDim) -> &mut Self {
        self.tables.hom_table.insert((a, b), value);
        self
    }

    pub fn triangle(&mut self, t: Triangle) -> &mut Self {
        self.tables.triangles.push(t);
        self
    }

    pub fn zero_fact(&mut self, f: &ObjExpr, g: &ObjExpr) -> &mut Self {
        self.tables.zero_facts.insert(zero_key(f, g));
        self
    }

    pub fn serre_action(&mut self, g: Gen, image: ObjExpr) -> &mut Self {
        self.tables.serre_action.insert(g, image.normalize());
        self
    }

    pub fn relative_twist(&mut self, g: Gen, image: ObjExpr) -> &mut Self {
        self.tables.relative_twist.insert(g, image.normalize());
        self
    }

    pub fn perp(&mut self, collection: Vec<ObjExpr>) -> &mut Self {
        self.tables.perp = collection.into_iter().map(|e| e.normalize()).collect();
        self
    }

    pub fn generator_list(&self) -> Vec<Gen> {
        self.tables.generators.keys().cloned().collect()
    }

    /// Finishes the context, checking that declared exceptional generators
    /// have `Hom(E, E) = C`.
    pub fn build(self) -> Result<Context> {
        for (g, &exc) in &self.tables.generators {
            if exc {
                let row = self.tables.hom_table.get(&(g.clone(), g.clone()));
                if row != Some(&GradedDim::unit()) {
                    return Err(Error::NotExceptional(g.render()));
                }
            }
        }
        Ok(Context {
            name: self.name,
            base: Arc::new(self.tables),
            learned_triangles: Vec::new(),
            learned_zero: BTreeSet::new(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy() -> Context {
        // A -> B with Hom(A, B) = C, both exceptional, Hom(B, A) = 0
        let a = Gen::Named { name: "A".into(), twist: 0 };
        let b = Gen::Named { name: "B".into(), twist: 0 };
        let mut cb = ContextBuilder::new("toy");
        cb.generator(a.clone(), true).generator(b.clone(), true);
        cb.hom_row(a.clone(), a.clone(), GradedDim::unit());
        cb.hom_row(b.clone(), b.clone(), GradedDim::unit());
        cb.hom_row(a.clone(), b.clone(), GradedDim::unit());
        cb.hom_row(b, a, GradedDim::zero());
        cb.build().unwrap()
    }

    #[test]
    fn shifts_follow_the_convention() {
        let ctx = toy();
        let a = ObjExpr::named("A");
        assert_eq!(ctx.hom(&a, &a.shift(1)).unwrap(), GradedDim::single(-1, 1));
        assert_eq!(ctx.hom(&a.shift(1), &a).unwrap(), GradedDim::single(1, 1));
        assert_eq!(ctx.hom(&a.plus(&a), &a).unwrap(), GradedDim::single(0, 2));
    }

    #[test]
    fn unknown_generator_is_reported() {
        let ctx = toy();
        let err = ctx.hom(&ObjExpr::named("Z"), &ObjExpr::named("A")).unwrap_err();
        assert_eq!(err, Error::UnknownGenerator("Z".into()));
    }

    #[test]
    fn cone_hom_needs_a_forced_map() {
        let ctx = toy();
        let c = ObjExpr::cone(&ObjExpr::named("A"), &ObjExpr::named("B"));
        // Hom(B, cone(A -> B)): Hom(B, A) = 0 forces the answer.
        assert_eq!(ctx.hom(&ObjExpr::named("B"), &c).unwrap(), GradedDim::unit());
        // Hom(A, cone(A -> B)) needs the rank of C -> C.
        assert!(ctx.hom(&ObjExpr::named("A"), &c).unwrap_err().is_indeterminate());
    }

    #[test]
    fn build_rejects_false_exceptional_claim() {
        let a = Gen::Named { name: "A".into(), twist: 0 };
        let mut cb = ContextBuilder::new("bad");
        cb.generator(a.clone(), true);
        cb.hom_row(a.clone(), a, GradedDim::from_pairs([(0, 1), (2, 1)]));
        assert!(matches!(cb.build(), Err(Error::NotExceptional(_))));
    }
}
