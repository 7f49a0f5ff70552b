//! Chern characters on quadrics, restriction to the degree-6 K3 surface
//! `Q³ ∩ (cubic)`, and the Mukai pairing.

use std::fmt;
use std::sync::OnceLock;

use num_rational::Ratio;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::quadric::{QuadricSheaf, SheafKind};

pub type Rational = Ratio<i128>;

/// A class `a_0 + a_1 h + … + a_n h^n` in the `h`-subring of the Chow ring
/// of `Q^n`, with `∫ h^n = 2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChowClass {
    n: u32,
    coeffs: Vec<Rational>,
}

fn factorial(k: u32) -> i128 {
    (1..=k as i128).product()
}

impl ChowClass {
    pub fn zero(n: u32) -> Self {
        Self {
            n,
            coeffs: vec![Rational::zero(); n as usize + 1],
        }
    }

    pub fn constant(n: u32, c: Rational) -> Self {
        let mut out = Self::zero(n);
        out.coeffs[0] = c;
        out
    }

    /// Truncates or pads `coeffs` to degree `n`.
    pub fn from_coeffs(n: u32, coeffs: &[Rational]) -> Self {
        let mut out = Self::zero(n);
        for (slot, c) in out.coeffs.iter_mut().zip(coeffs) {
            *slot = *c;
        }
        out
    }

    /// `e^{kh}`.
    pub fn exp_h(n: u32, k: i64) -> Self {
        let coeffs: Vec<Rational> = (0..=n)
            .map(|i| Rational::new((k as i128).pow(i), factorial(i)))
            .collect();
        Self { n, coeffs }
    }

    pub fn dim(&self) -> u32 {
        self.n
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).copied().unwrap_or_else(Rational::zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Self { n: self.n, coeffs }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-Rational::one()))
    }

    pub fn scale(&self, c: Rational) -> Self {
        Self {
            n: self.n,
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.n);
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate().take(self.coeffs.len() - i) {
                out.coeffs[i + j] += a * b;
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::constant(self.n, Rational::one()), |acc, _| acc.mul(self))
    }

    /// Multiplicative inverse; the constant term must be nonzero.
    pub fn inverse(&self) -> Result<Self> {
        let a0 = self.coeffs[0];
        if a0.is_zero() {
            return Err(Error::Undefined(format!("inverse of {self}")));
        }
        let mut out = Self::zero(self.n);
        out.coeffs[0] = a0.recip();
        for k in 1..self.coeffs.len() {
            let s: Rational = (1..=k).map(|i| self.coeffs[i] * out.coeffs[k - i]).sum();
            out.coeffs[k] = -s / a0;
        }
        Ok(out)
    }

    /// `c^∨`: degree-`i` part multiplied by `(-1)^i`.
    pub fn dual(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, a)| if i % 2 == 0 { *a } else { -a })
            .collect();
        Self { n: self.n, coeffs }
    }

    pub fn integrate(&self) -> Rational {
        self.coeffs[self.n as usize] * Rational::from_integer(2)
    }
}

impl fmt::Display for ChowClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c.is_negative() { "-" } else { "+" })?;
            }
            first = false;
            match (i, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (_, true) => {}
                (_, false) if mag.is_integer() => write!(f, "{mag}")?,
                (_, false) => write!(f, "({mag})")?,
            }
            match i {
                0 => {}
                1 => write!(f, "h")?,
                _ => write!(f, "h^{i}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// `ch(S)` on an odd quadric, solving `ch(S)·(1 + e^h) = 2^{m+1}`.
pub fn ch_spinor_odd(n: u32) -> Result<ChowClass> {
    if n.is_multiple_of(2) {
        return Err(Error::ParityMismatch { n, sheaf: "S".into() });
    }
    let m = (n - 1) / 2;
    let one_plus = ChowClass::exp_h(n, 1).add(&ChowClass::constant(n, Rational::one()));
    Ok(one_plus.inverse()?.scale(Rational::from_integer(1 << (m + 1))))
}

/// `ch(F)` for line bundles on any quadric and twisted spinors on odd ones.
pub fn ch_sheaf(n: u32, f: QuadricSheaf) -> Result<ChowClass> {
    f.validate(n)?;
    let twist = ChowClass::exp_h(n, f.twist);
    match f.kind {
        SheafKind::LineBundle => Ok(twist),
        SheafKind::Spinor => Ok(ch_spinor_odd(n)?.mul(&twist)),
        _ => Err(Error::Undefined(format!(
            "Chern character of {f} on an even quadric"
        ))),
    }
}

/// `td(Q^n) = td(P^{n+1}) / td(O(2))`.
pub fn todd(n: u32) -> ChowClass {
    const CACHED: usize = 13;
    static CACHE: [OnceLock<ChowClass>; CACHED] = [const { OnceLock::new() }; CACHED];
    match CACHE.get(n as usize) {
        Some(slot) => slot.get_or_init(|| compute_todd(n)).clone(),
        None => compute_todd(n),
    }
}

fn compute_todd(n: u32) -> ChowClass {
    // A = (1 - e^{-h})/h and B = (1 - e^{-2h})/(2h) as power series
    let series = |base: i128| {
        let coeffs: Vec<Rational> = (0..=n)
            .map(|i| Rational::new((-base).pow(i), factorial(i + 1)))
            .collect();
        ChowClass { n, coeffs }
    };
    let a = series(1);
    let b = series(2);
    a.inverse().expect("constant term is 1").pow(n + 2).mul(&b)
}

/// `χ(F, G) = ∫ ch(F)^∨ ch(G) td(Q)`.
pub fn chi_hrr(n: u32, f: QuadricSheaf, g: QuadricSheaf) -> Result<i64> {
    let integrand = ch_sheaf(n, f)?.dual().mul(&ch_sheaf(n, g)?).mul(&todd(n));
    let value = integrand.integrate();
    if !value.is_integer() {
        return Err(Error::NonIntegral(format!("χ({f}, {g}) = {value}")));
    }
    Ok(value.to_integer() as i64)
}

/// Mukai vector `(r, c·H, s)` on the degree-6 K3 surface, `H² = 6`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MukaiVector {
    pub r: i64,
    pub c: i64,
    pub s: i64,
}

impl MukaiVector {
    pub fn new(r: i64, c: i64, s: i64) -> Self {
        Self { r, c, s }
    }

    pub fn structure_sheaf() -> Self {
        Self::new(1, 0, 1)
    }

    pub fn point() -> Self {
        Self::new(0, 0, 1)
    }
}

impl fmt::Display for MukaiVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}·H, {})", self.r, self.c, self.s)
    }
}

fn integral(x: Rational, what: &str) -> Result<i64> {
    if !x.is_integer() {
        return Err(Error::NonIntegral(format!("{what} = {x}")));
    }
    x.to_integer()
        .to_i64()
        .ok_or_else(|| Error::NonIntegral(format!("{what} = {x} overflows")))
}

/// Restricts a class on `Q³` to the K3 surface: `h ↦ H`, `h² ↦ 6` points,
/// and `s = ch₂ + r`.
pub fn restrict_to_k3(c: &ChowClass) -> Result<MukaiVector> {
    if c.dim() != 3 {
        return Err(Error::Undefined(format!(
            "restriction to the K3 surface needs a class on Q^3, got Q^{}",
            c.dim()
        )));
    }
    let r = integral(c.coeff(0), "rank")?;
    let c1 = integral(c.coeff(1), "c1")?;
    let ch2 = integral(c.coeff(2) * Rational::from_integer(6), "ch2")?;
    Ok(MukaiVector::new(r, c1, ch2 + r))
}

/// `⟨v, w⟩ = 6cc' − rs' − r's`.
pub fn mukai_pairing(v: MukaiVector, w: MukaiVector) -> i64 {
    6 * v.c * w.c - v.r * w.s - w.r * v.s
}

/// `χ(v, w) = −⟨v, w⟩` on the K3 surface.
pub fn chi_k3(v: MukaiVector, w: MukaiVector) -> i64 {
    -mukai_pairing(v, w)
}

/// Mukai vector of the restriction of a sheaf on `Q³` to the K3 surface.
pub fn restricted_vector(f: QuadricSheaf) -> Result<MukaiVector> {
    restrict_to_k3(&ch_sheaf(3, f)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i128, b: i128) -> Rational {
        Rational::new(a, b)
    }

    #[test]
    fn spinor_chern_characters() {
        let ch3 = ch_spinor_odd(3).unwrap();
        let expected = ChowClass::from_coeffs(3, &[q(2, 1), q(-1, 1), q(0, 1), q(1, 12)]);
        assert_eq!(ch3, expected);
        assert_eq!(ch3.to_string(), "2 - h + (1/12)h^3");
        assert_eq!(ch_spinor_odd(1).unwrap(), ChowClass::from_coeffs(1, &[q(1, 1), q(-1, 2)]));
        let ch5 = ch_spinor_odd(5).unwrap();
        assert_eq!((ch5.coeff(0), ch5.coeff(1)), (q(4, 1), q(-2, 1)));
        assert!(ch_spinor_odd(4).is_err());
    }

    #[test]
    fn k3_vectors() {
        let s = restrict_to_k3(&ch_spinor_odd(3).unwrap()).unwrap();
        assert_eq!(s, MukaiVector::new(2, -1, 2));
        assert_eq!(s.to_string(), "(2, -1·H, 2)");
        assert_eq!(restricted_vector(QuadricSheaf::o(0)).unwrap(), MukaiVector::structure_sheaf());
        assert_eq!(restricted_vector(QuadricSheaf::o(1)).unwrap(), MukaiVector::new(1, 1, 4));
        let half = ChowClass::from_coeffs(3, &[q(1, 1), q(1, 2)]);
        assert!(matches!(restrict_to_k3(&half), Err(Error::NonIntegral(_))));
    }

    #[test]
    fn pairings() {
        let s = MukaiVector::new(2, -1, 2);
        assert_eq!(mukai_pairing(s, s), -2);
        let o = MukaiVector::structure_sheaf();
        assert_eq!(mukai_pairing(o, o), -2);
        assert_eq!(mukai_pairing(MukaiVector::point(), o), -1);
        assert_eq!(chi_k3(s, s), 2);
    }

    #[test]
    fn todd_integrates_to_one() {
        for n in 1..=12 {
            assert_eq!(todd(n).integrate(), Rational::one(), "n = {n}");
        }
    }
}
