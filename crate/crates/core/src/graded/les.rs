//! Degreewise solver for one unknown term of a long exact sequence.
//!
//! For a distinguished triangle `X -> Y -> Z -> X[1]` probed by a
//! cohomological functor we get `… -> x^j -> y^j -> z^j -> x^{j+1} -> …`.
//! Given two of the three graded dimensions, the third is determined in a
//! degree exactly when the ranks of the two maps bounding it are forced.
//! Ranks are forced by a vanishing neighbour, by an explicit rank fact, or
//! by an amplitude bound on the unknown term. Nothing else is assumed.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use super::GradedDim;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LesError {
    #[error("long exact sequence is indeterminate in degrees {0:?}")]
    Indeterminate(Vec<i64>),
    #[error("long exact sequence constraints are inconsistent in degree {0}")]
    Inconsistent(i64),
}

/// Which term of `X -> Y -> Z -> X[1]` is unknown.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Unknown {
    First,
    Second,
    Third,
}

/// Extra information available to the solver.
#[derive(Debug, Clone, Default)]
pub struct LesFacts {
    /// Known rank of the map `P^j -> Q^j` preceding the unknown, by degree.
    pub ranks: BTreeMap<i64, u64>,
    /// The unknown term vanishes outside `[lo, hi]`.
    pub amplitude: Option<(i64, i64)>,
}

impl LesFacts {
    pub fn with_amplitude(lo: i64, hi: i64) -> Self {
        Self {
            ranks: BTreeMap::new(),
            amplitude: Some((lo, hi)),
        }
    }
}

/// Solve for `U` in `… -> p^j -> q^j -> U^j -> p^{j+1} -> q^{j+1} -> …`.
pub fn solve_next(p: &GradedDim, q: &GradedDim, facts: &LesFacts) -> Result<GradedDim, LesError> {
    let outside = |j: i64| match facts.amplitude {
        Some((lo, hi)) => j < lo || j > hi,
        None => false,
    };

    // Degrees where the map p^j -> q^j may be nonzero.
    let mut live: BTreeSet<i64> = BTreeSet::new();
    for (j, _) in p.iter() {
        if q.get(j) > 0 {
            live.insert(j);
        }
    }

    let mut ranks: BTreeMap<i64, u64> = BTreeMap::new();
    let mut open = Vec::new();
    for &j in &live {
        let cap = p.get(j).min(q.get(j));
        let mut forced: Option<u64> = facts.ranks.get(&j).copied();
        if let Some(r) = forced {
            if r > cap {
                return Err(LesError::Inconsistent(j));
            }
        }
        // U^j = 0 forces surjectivity onto q^j.
        if outside(j) {
            let need = q.get(j);
            match forced {
                Some(r) if r != need => return Err(LesError::Inconsistent(j)),
                _ => forced = Some(need),
            }
        }
        // U^{j-1} = 0 forces injectivity of p^j.
        if outside(j - 1) {
            let need = p.get(j);
            match forced {
                Some(r) if r != need => return Err(LesError::Inconsistent(j)),
                _ => forced = Some(need),
            }
        }
        match forced {
            Some(r) if r <= cap => {
                ranks.insert(j, r);
            }
            Some(_) => return Err(LesError::Inconsistent(j)),
            None => open.push(j),
        }
    }

    let rank = |j: i64| -> u64 {
        if live.contains(&j) {
            ranks.get(&j).copied().unwrap_or(0)
        } else {
            facts.ranks.get(&j).copied().unwrap_or(0).min(p.get(j).min(q.get(j)))
        }
    };

    // Unknown degrees j are those touching an open rank: j itself or j-1.
    let mut bad: BTreeSet<i64> = BTreeSet::new();
    for &j in &open {
        bad.insert(j);
        bad.insert(j - 1);
    }
    if !bad.is_empty() {
        return Err(LesError::Indeterminate(bad.into_iter().collect()));
    }

    let mut degrees: BTreeSet<i64> = q.degrees().collect();
    degrees.extend(p.degrees().map(|j| j - 1));
    let mut out = GradedDim::zero();
    for j in degrees {
        let coker = q.get(j) - rank(j);
        let ker = p.get(j + 1) - rank(j + 1);
        let u = coker + ker;
        if u > 0 && outside(j) {
            return Err(LesError::Inconsistent(j));
        }
        out.add_at(j, u);
    }
    Ok(out)
}

/// Solve the unknown term of the sequence induced by `X -> Y -> Z -> X[1]`.
/// `x`, `y`, `z` hold the known rows; the unknown slot is ignored.
pub fn solve_triangle(
    unknown: Unknown,
    x: &GradedDim,
    y: &GradedDim,
    z: &GradedDim,
    facts: &LesFacts,
) -> Result<GradedDim, LesError> {
    match unknown {
        Unknown::Third => solve_next(x, y, facts),
        Unknown::First => solve_next(&y.shift(-1), &z.shift(-1), facts),
        Unknown::Second => solve_next(&z.shift(-1), x, facts),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(a: i64) -> GradedDim {
        GradedDim::single(a, 1)
    }

    #[test]
    fn vanishing_neighbour_determines() {
        // 0 -> C -> ? : cone of 0 -> C is C
        let z = solve_next(&GradedDim::zero(), &c(0), &LesFacts::default()).unwrap();
        assert_eq!(z, c(0));
        // C -> 0 -> ? : cone of C -> 0 is C[1]
        let z = solve_next(&c(0), &GradedDim::zero(), &LesFacts::default()).unwrap();
        assert_eq!(z, c(-1));
    }

    #[test]
    fn open_rank_is_reported() {
        let err = solve_next(&c(0), &c(0), &LesFacts::default()).unwrap_err();
        assert_eq!(err, LesError::Indeterminate(vec![-1, 0]));
    }

    #[test]
    fn amplitude_forces_isomorphism() {
        let z = solve_next(&c(0), &c(0), &LesFacts::with_amplitude(0, 5)).unwrap();
        assert_eq!(z, GradedDim::zero());
    }

    #[test]
    fn rank_fact_forces_zero_map() {
        let mut facts = LesFacts::default();
        facts.ranks.insert(0, 0);
        let z = solve_next(&c(0), &c(0), &facts).unwrap();
        assert_eq!(z, c(-1) + c(0));
    }

    #[test]
    fn inconsistent_amplitude_is_detected() {
        let err = solve_next(&GradedDim::zero(), &c(7), &LesFacts::with_amplitude(0, 3)).unwrap_err();
        assert_eq!(err, LesError::Inconsistent(7));
    }

    #[test]
    fn rotations_agree() {
        // split triangle A -> A + B -> B with A = C, B = C[-2]
        let a = c(0);
        let b = c(2);
        let ab = &a + &b;
        let mut facts = LesFacts::default();
        facts.ranks.insert(0, 1);
        facts.ranks.insert(2, 0);
        assert_eq!(solve_triangle(Unknown::Third, &a, &ab, &GradedDim::zero(), &facts).unwrap(), b);
    }

    proptest! {
        // When one known row vanishes the answer is a pure shift of the other.
        #[test]
        fn solver_with_zero_row(v in proptest::collection::vec((-6i64..6, 0u64..4), 0..5)) {
            let g = GradedDim::from_pairs(v);
            let z = GradedDim::zero();
            let f = LesFacts::default();
            prop_assert_eq!(solve_triangle(Unknown::Third, &z, &g, &z, &f).unwrap(), g.clone());
            prop_assert_eq!(solve_triangle(Unknown::Third, &g, &z, &z, &f).unwrap(), g.shift(1));
            prop_assert_eq!(solve_triangle(Unknown::First, &z, &g, &z, &f).unwrap(), g.clone());
            prop_assert_eq!(solve_triangle(Unknown::First, &z, &z, &g, &f).unwrap(), g.shift(-1));
            prop_assert_eq!(solve_triangle(Unknown::Second, &g, &z, &z, &f).unwrap(), g.clone());
            prop_assert_eq!(solve_triangle(Unknown::Second, &z, &z, &g, &f).unwrap(), g.clone());
        }

        // Euler characteristic is additive whenever the solver answers.
        #[test]
        fn solver_respects_euler(
            a in proptest::collection::vec((-4i64..4, 0u64..3), 0..4),
            b in proptest::collection::vec((-4i64..4, 0u64..3), 0..4),
        ) {
            let x = GradedDim::from_pairs(a);
            let y = GradedDim::from_pairs(b);
            let mut facts = LesFacts::default();
            for j in -5..5 {
                facts.ranks.insert(j, x.get(j).min(y.get(j)) / 2);
            }
            if let Ok(z) = solve_next(&x, &y, &facts) {
                prop_assert_eq!(z.euler(), y.euler() - x.euler());
            }
        }
    }
}
