//! Graded dimension vectors.
//!
//! A [`GradedDim`] records the dimensions of a graded vector space
//! `V = ⊕_k V^k`. It is the value type of every Hom and cohomology
//! computation in the crate. The convention is fixed once: `C[-a]` is one
//! dimension sitting in cohomological degree `a`, and
//! `Hom^j(A[m], B) = Hom^{j-m}(A, B)`, `Hom^j(A, B[m]) = Hom^{j+m}(A, B)`.
//!
//! The [`les`] submodule solves one term of a long exact sequence from the
//! other two, degree by degree, refusing to guess map ranks.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Add;

use serde::{Deserialize, Serialize};

pub mod les;

/// Finitely supported map `degree -> multiplicity` with no zero entries.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GradedDim {
    entries: BTreeMap<i64, u64>,
}

impl GradedDim {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `C^mult[-degree]`.
    pub fn single(degree: i64, mult: u64) -> Self {
        let mut g = Self::zero();
        g.add_at(degree, mult);
        g
    }

    /// The ground field `C` in degree zero.
    pub fn unit() -> Self {
        Self::single(0, 1)
    }

    pub fn from_pairs<I: IntoIterator<Item = (i64, u64)>>(pairs: I) -> Self {
        let mut g = Self::zero();
        for (d, m) in pairs {
            g.add_at(d, m);
        }
        g
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, degree: i64) -> u64 {
        self.entries.get(&degree).copied().unwrap_or(0)
    }

    pub fn add_at(&mut self, degree: i64, mult: u64) {
        if mult > 0 {
            *self.entries.entry(degree).or_insert(0) += mult;
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, u64)> + '_ {
        self.entries.iter().map(|(&d, &m)| (d, m))
    }

    pub fn degrees(&self) -> impl Iterator<Item = i64> + '_ {
        self.entries.keys().copied()
    }

    pub fn min_degree(&self) -> Option<i64> {
        self.entries.keys().next().copied()
    }

    pub fn max_degree(&self) -> Option<i64> {
        self.entries.keys().next_back().copied()
    }

    pub fn total_dim(&self) -> u64 {
        self.entries.values().sum()
    }

    /// The bracket `[m]`: `result(k) = self(k + m)`.
    pub fn shift(&self, m: i64) -> Self {
        Self {
            entries: self.entries.iter().map(|(&d, &v)| (d - m, v)).collect(),
        }
    }

    /// Graded linear dual: `result(k) = self(-k)`.
    pub fn dual(&self) -> Self {
        Self {
            entries: self.entries.iter().map(|(&d, &v)| (-d, v)).collect(),
        }
    }

    /// Alternating sum `Σ (-1)^k dim V^k`.
    pub fn euler(&self) -> i64 {
        self.entries
            .iter()
            .map(|(&d, &v)| if d.rem_euclid(2) == 0 { v as i64 } else { -(v as i64) })
            .sum()
    }

    pub fn scale(&self, factor: u64) -> Self {
        if factor == 0 {
            return Self::zero();
        }
        Self {
            entries: self.entries.iter().map(|(&d, &v)| (d, v * factor)).collect(),
        }
    }

    /// Graded tensor product (degrees add, dimensions multiply).
    pub fn tensor(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (a, x) in self.iter() {
            for (b, y) in other.iter() {
                out.add_at(a + b, x * y);
            }
        }
        out
    }

    /// Text rendering `C^r[−a] ⊕ …` in ascending degree; `0` when empty.
    pub fn render(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        self.entries
            .iter()
            .map(|(&d, &m)| {
                let mut s = String::from("C");
                if m != 1 {
                    s.push_str(&format!("^{m}"));
                }
                if d != 0 {
                    // the bracket shows -d
                    if d > 0 {
                        s.push_str(&format!("[\u{2212}{d}]"));
                    } else {
                        s.push_str(&format!("[{}]", -d));
                    }
                }
                s
            })
            .collect::<Vec<_>>()
            .join(" \u{2295} ")
    }

    /// JSON rendering `{"degree": multiplicity, …}` in ascending degree.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("graded dims always serialize")
    }
}

impl Add for GradedDim {
    type Output = GradedDim;
    fn add(mut self, rhs: GradedDim) -> GradedDim {
        for (d, m) in rhs.iter() {
            self.add_at(d, m);
        }
        self
    }
}

impl<'a> Add<&'a GradedDim> for &'a GradedDim {
    type Output = GradedDim;
    fn add(self, rhs: &'a GradedDim) -> GradedDim {
        self.clone() + rhs.clone()
    }
}

impl std::iter::Sum for GradedDim {
    fn sum<I: Iterator<Item = GradedDim>>(iter: I) -> GradedDim {
        iter.fold(GradedDim::zero(), |a, b| a + b)
    }
}

impl fmt::Display for GradedDim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl fmt::Debug for GradedDim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GradedDim({})", self.render())
    }
}
