//! Object terms and their normal form.

use std::collections::BTreeMap;
use std::fmt;

use sha2::{Digest, Sha256};

use crate::quadric::QuadricSheaf;

/// A generating object of some context.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Gen {
    /// A sheaf on the quadric itself.
    Sheaf(QuadricSheaf),
    /// `j_*F` for the inclusion of the exceptional quadric.
    Push(QuadricSheaf),
    /// A line bundle `O(a·h + b·H)` on the blown-up cubic fourfold.
    AmbientLine { h: i64, big_h: i64 },
    /// `t^*F` on the K3 surface.
    Pull(QuadricSheaf),
    /// `s_*t^*F` on the divisor `D`.
    PushPull(QuadricSheaf),
    /// An opaque named object, twistable by an integer.
    Named { name: String, twist: i64 },
}

impl Gen {
    /// Tensor by the `k`-th power of the line bundle restricting to `O_Q(1)`.
    pub fn twisted(&self, k: i64) -> Gen {
        if k == 0 {
            return self.clone();
        }
        match self {
            Gen::Sheaf(f) => Gen::Sheaf(f.twisted(k)),
            Gen::Push(f) => Gen::Push(f.twisted(k)),
            Gen::Pull(f) => Gen::Pull(f.twisted(k)),
            Gen::PushPull(f) => Gen::PushPull(f.twisted(k)),
            // O(-kQ) with Q = H - h
            Gen::AmbientLine { h, big_h } => Gen::AmbientLine {
                h: h + k,
                big_h: big_h - k,
            },
            Gen::Named { name, twist } => Gen::Named {
                name: name.clone(),
                twist: twist + k,
            },
        }
    }

    pub fn render(&self) -> String {
        match self {
            Gen::Sheaf(f) => f.render(),
            Gen::Push(f) => format!("j*{}", f.render()),
            Gen::Pull(f) => format!("t*{}", f.render()),
            Gen::PushPull(f) => format!("s*t*{}", f.render()),
            Gen::AmbientLine { h, big_h } => {
                let body = render_pic(*h, *big_h);
                if body.is_empty() {
                    "OY".to_string()
                } else {
                    format!("OY({body})")
                }
            }
            Gen::Named { name, twist } => {
                if *twist == 0 {
                    name.clone()
                } else {
                    format!("{name}({twist})")
                }
            }
        }
    }
}

/// `a·h + b·H` as `h+H`, `-2h`, `3h-H`; empty for the zero class.
pub fn render_pic(a: i64, b: i64) -> String {
    let mut out = String::new();
    for (coef, sym) in [(a, "h"), (b, "H")] {
        if coef == 0 {
            continue;
        }
        if coef < 0 {
            out.push('-');
        } else if !out.is_empty() {
            out.push('+');
        }
        if coef.abs() != 1 {
            out.push_str(&coef.abs().to_string());
        }
        out.push_str(sym);
    }
    out
}

impl fmt::Display for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// A formal object: a term over generators built from shifts, twists,
/// finite sums and cones.
///
/// Normal form: twists are applied to generators, shifts sit directly on
/// leaves, sums are flat, sorted and merged, a cone's source has minimal
/// shift zero, and the zero object is the empty sum.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ObjExpr {
    Gen(Gen),
    Shift(Box<ObjExpr>, i64),
    Twist(Box<ObjExpr>, i64),
    Sum(Vec<(ObjExpr, u32)>),
    /// Cone of the distinguished map `source -> target`. The tag is derived
    /// from the normalized endpoints and names the triangle.
    Cone {
        source: Box<ObjExpr>,
        target: Box<ObjExpr>,
        tag: String,
    },
}

impl ObjExpr {
    pub fn zero() -> Self {
        ObjExpr::Sum(Vec::new())
    }

    pub fn gen(g: Gen) -> Self {
        ObjExpr::Gen(g)
    }

    pub fn push(f: QuadricSheaf) -> Self {
        ObjExpr::Gen(Gen::Push(f))
    }

    pub fn sheaf(f: QuadricSheaf) -> Self {
        ObjExpr::Gen(Gen::Sheaf(f))
    }

    pub fn named(name: &str) -> Self {
        ObjExpr::Gen(Gen::Named {
            name: name.to_string(),
            twist: 0,
        })
    }

    pub fn shift(&self, m: i64) -> Self {
        ObjExpr::Shift(Box::new(self.clone()), m).normalize()
    }

    pub fn twist(&self, k: i64) -> Self {
        ObjExpr::Twist(Box::new(self.clone()), k).normalize()
    }

    pub fn times(&self, mult: u32) -> Self {
        ObjExpr::Sum(vec![(self.clone(), mult)]).normalize()
    }

    pub fn plus(&self, other: &ObjExpr) -> Self {
        ObjExpr::Sum(vec![(self.clone(), 1), (other.clone(), 1)]).normalize()
    }

    pub fn sum<I: IntoIterator<Item = (ObjExpr, u32)>>(items: I) -> Self {
        ObjExpr::Sum(items.into_iter().collect()).normalize()
    }

    /// Normalized cone of `source -> target`.
    pub fn cone(source: &ObjExpr, target: &ObjExpr) -> Self {
        make_cone(&source.normalize(), &target.normalize())
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, ObjExpr::Sum(v) if v.is_empty())
    }

    pub fn normalize(&self) -> ObjExpr {
        let mut acc: BTreeMap<(ObjExpr, i64), u32> = BTreeMap::new();
        collect(self, 0, 0, 1, &mut acc);
        from_terms(acc)
    }

    /// Flattened `(leaf, shift, multiplicity)` terms of the normal form.
    pub fn terms(&self) -> Vec<(ObjExpr, i64, u32)> {
        let mut acc: BTreeMap<(ObjExpr, i64), u32> = BTreeMap::new();
        collect(self, 0, 0, 1, &mut acc);
        acc.into_iter().map(|((l, s), m)| (l, s, m)).collect()
    }

    /// Splits off the smallest shift: `self = base[s]`.
    pub fn strip_shift(&self) -> (ObjExpr, i64) {
        let terms = self.terms();
        let s = terms.iter().map(|t| t.1).min().unwrap_or(0);
        (self.shift(-s), s)
    }

    /// If `other ≅ self[s]` on the nose, returns `s`.
    pub fn shift_to(&self, other: &ObjExpr) -> Option<i64> {
        let (a, sa) = self.strip_shift();
        let (b, sb) = other.strip_shift();
        (a == b).then_some(sb - sa)
    }

    /// The generator, if the normal form is a single unshifted generator.
    pub fn as_gen(&self) -> Option<&Gen> {
        match self {
            ObjExpr::Gen(g) => Some(g),
            _ => None,
        }
    }

    /// Every generator occurring in the term.
    pub fn generators(&self) -> Vec<Gen> {
        let mut out = Vec::new();
        gather_gens(&self.normalize(), &mut out);
        out.sort();
        out.dedup();
        out
    }

    /// Applies `f` to every generator leaf, keeping shifts, sums and cones.
    pub fn map_leaves<F>(&self, f: &mut F) -> ObjExpr
    where
        F: FnMut(&Gen) -> ObjExpr,
    {
        let mut parts = Vec::new();
        for (leaf, s, m) in self.terms() {
            let image = match &leaf {
                ObjExpr::Gen(g) => f(g),
                ObjExpr::Cone { source, target, .. } => {
                    let a = source.map_leaves(f);
                    let b = target.map_leaves(f);
                    make_cone(&a, &b)
                }
                _ => unreachable!("normal-form leaves are generators or cones"),
            };
            parts.push((image.shift(s), m));
        }
        ObjExpr::sum(parts)
    }

    /// ASCII rendering that parses back to the same normal form.
    pub fn render(&self) -> String {
        render_nf(&self.normalize())
    }
}

impl fmt::Display for ObjExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl From<Gen> for ObjExpr {
    fn from(g: Gen) -> Self {
        ObjExpr::Gen(g)
    }
}

fn gather_gens(e: &ObjExpr, out: &mut Vec<Gen>) {
    match e {
        ObjExpr::Gen(g) => out.push(g.clone()),
        ObjExpr::Shift(x, _) | ObjExpr::Twist(x, _) => gather_gens(x, out),
        ObjExpr::Sum(v) => v.iter().for_each(|(x, _)| gather_gens(x, out)),
        ObjExpr::Cone { source, target, .. } => {
            gather_gens(source, out);
            gather_gens(target, out);
        }
    }
}

fn collect(e: &ObjExpr, shift: i64, twist: i64, mult: u32, acc: &mut BTreeMap<(ObjExpr, i64), u32>) {
    if mult == 0 {
        return;
    }
    match e {
        ObjExpr::Gen(g) => {
            *acc.entry((ObjExpr::Gen(g.twisted(twist)), shift)).or_insert(0) += mult;
        }
        ObjExpr::Shift(x, m) => collect(x, shift + m, twist, mult, acc),
        ObjExpr::Twist(x, k) => collect(x, shift, twist + k, mult, acc),
        ObjExpr::Sum(v) => {
            for (x, m) in v {
                collect(x, shift, twist, mult * m, acc);
            }
        }
        ObjExpr::Cone { source, target, tag } => {
            let is_leaf = twist == 0 && is_cone_nf(source, target);
            if is_leaf {
                let leaf = ObjExpr::Cone {
                    source: source.clone(),
                    target: target.clone(),
                    tag: tag.clone(),
                };
                *acc.entry((leaf, shift)).or_insert(0) += mult;
            } else {
                let a = ObjExpr::Twist(source.clone(), twist).normalize();
                let b = ObjExpr::Twist(target.clone(), twist).normalize();
                let c = make_cone(&a, &b);
                collect(&c, shift, 0, mult, acc);
            }
        }
    }
}

/// True when `cone(source -> target)` is already a normal-form leaf.
fn is_cone_nf(source: &ObjExpr, target: &ObjExpr) -> bool {
    let a = source.normalize();
    let b = target.normalize();
    if &a != source || &b != target || a.is_zero() || b.is_zero() || a == b {
        return false;
    }
    a.terms().iter().map(|t| t.1).min() == Some(0)
}

fn cone_tag(source: &ObjExpr, target: &ObjExpr) -> String {
    let mut hasher = Sha256::new();
    hasher.update(render_nf(source).as_bytes());
    hasher.update(b" -> ");
    hasher.update(render_nf(target).as_bytes());
    let digest = hasher.finalize();
    digest.iter().take(6).map(|b| format!("{b:02x}")).collect()
}

fn make_cone(a: &ObjExpr, b: &ObjExpr) -> ObjExpr {
    let a = a.normalize();
    let b = b.normalize();
    if a.is_zero() {
        return b;
    }
    if b.is_zero() {
        return a.shift(1);
    }
    if a == b {
        return ObjExpr::zero();
    }
    let s = a.terms().iter().map(|t| t.1).min().unwrap_or(0);
    let a0 = a.shift(-s);
    let b0 = b.shift(-s);
    let tag = cone_tag(&a0, &b0);
    let leaf = ObjExpr::Cone {
        source: Box::new(a0),
        target: Box::new(b0),
        tag,
    };
    if s == 0 {
        leaf
    } else {
        ObjExpr::Shift(Box::new(leaf), s)
    }
}

fn from_terms(acc: BTreeMap<(ObjExpr, i64), u32>) -> ObjExpr {
    let mut items: Vec<(ObjExpr, u32)> = acc
        .into_iter()
        .filter(|(_, m)| *m > 0)
        .map(|((leaf, s), m)| {
            let t = if s == 0 {
                leaf
            } else {
                ObjExpr::Shift(Box::new(leaf), s)
            };
            (t, m)
        })
        .collect();
    if items.len() == 1 && items[0].1 == 1 {
        items.pop().unwrap().0
    } else {
        ObjExpr::Sum(items)
    }
}

fn render_nf(e: &ObjExpr) -> String {
    match e {
        ObjExpr::Gen(g) => g.render(),
        ObjExpr::Shift(x, m) => format!("{}[{}]", render_nf(x), m),
        ObjExpr::Twist(x, k) => format!("({})({})", render_nf(x), k),
        ObjExpr::Sum(v) => {
            if v.is_empty() {
                return "0".to_string();
            }
            v.iter()
                .map(|(x, m)| {
                    if *m == 1 {
                        render_nf(x)
                    } else {
                        format!("{}^{}", render_nf(x), m)
                    }
                })
                .collect::<Vec<_>>()
                .join(" + ")
        }
        ObjExpr::Cone { source, target, .. } => {
            format!("cone({} -> {})", render_nf(source), render_nf(target))
        }
    }
}
