//! Curves, ℚ-divisors, global sections and polyhedral divisors.

mod divisor;
mod g0;
mod poly;
mod ratfn;
mod sections;
mod weierstrass;

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{format_rational, parse_rational, Int, Rat};

pub use divisor::{apply_principal_shift, IsoWitness, PolyhedralDivisor, ProperReport, ProperVerdict};
pub use g0::RationalFunctionG0;
pub use poly::Poly;
pub use ratfn::{Mobius, RatFn};
pub use sections::{
    section_list, section_satisfies, sections_basis, sections_dim, DimReport, Section, SectionSpace,
};
pub use weierstrass::WeierstrassPoly;

/// The base curve.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Curve {
    AffineLine,
    ProjectiveLine,
    Abstract { genus: u32, points: Vec<String> },
}

impl Curve {
    pub fn is_projective(&self) -> bool {
        !matches!(self, Curve::AffineLine)
    }

    pub fn is_affine(&self) -> bool {
        matches!(self, Curve::AffineLine)
    }

    /// The affine or projective line.
    pub fn is_rational_line(&self) -> bool {
        matches!(self, Curve::AffineLine | Curve::ProjectiveLine)
    }

    pub fn genus(&self) -> u32 {
        match self {
            Curve::Abstract { genus, .. } => *genus,
            _ => 0,
        }
    }

    pub fn validate_point(&self, p: &CurvePoint) -> Result<()> {
        let ok = match (self, p) {
            (Curve::AffineLine, CurvePoint::Scalar(_)) => true,
            (Curve::ProjectiveLine, CurvePoint::Scalar(_) | CurvePoint::Infinity) => true,
            (Curve::Abstract { points, .. }, CurvePoint::Label(l)) => points.contains(l),
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!("point {p} does not lie on {self}")))
        }
    }
}

impl fmt::Display for Curve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Curve::AffineLine => write!(f, "affine line"),
            Curve::ProjectiveLine => write!(f, "projective line"),
            Curve::Abstract { genus, .. } => write!(f, "abstract curve of genus {genus}"),
        }
    }
}

/// A point of a curve: a rational scalar, ∞ on ℙ¹, or a named point.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CurvePoint {
    Scalar(Rat),
    Infinity,
    Label(String),
}

impl CurvePoint {
    pub fn scalar(n: i64) -> Self {
        CurvePoint::Scalar(Rat::from_integer(Int::from(n)))
    }

    /// Parses `"inf"`, a rational scalar, or otherwise a label.
    pub fn parse(s: &str) -> Self {
        let t = s.trim();
        if t == "inf" || t == "∞" {
            return CurvePoint::Infinity;
        }
        match parse_rational(t) {
            Ok(q) => CurvePoint::Scalar(q),
            Err(_) => CurvePoint::Label(t.to_string()),
        }
    }

    pub fn as_scalar(&self) -> Option<&Rat> {
        match self {
            CurvePoint::Scalar(z) => Some(z),
            _ => None,
        }
    }
}

impl fmt::Display for CurvePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CurvePoint::Scalar(z) => write!(f, "{}", format_rational(z)),
            CurvePoint::Infinity => write!(f, "inf"),
            CurvePoint::Label(l) => write!(f, "{l}"),
        }
    }
}

impl fmt::Debug for CurvePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A ℚ-divisor with finite support; zero coefficients are not stored.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QDivisor {
    curve: Curve,
    coeffs: BTreeMap<CurvePoint, Rat>,
}

impl QDivisor {
    pub fn zero(curve: Curve) -> Self {
        Self {
            curve,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn new(curve: Curve, terms: impl IntoIterator<Item = (CurvePoint, Rat)>) -> Result<Self> {
        let mut d = Self::zero(curve);
        for (p, c) in terms {
            d.curve.validate_point(&p)?;
            d.add_term(p, c);
        }
        Ok(d)
    }

    fn add_term(&mut self, p: CurvePoint, c: Rat) {
        let entry = self.coeffs.entry(p).or_insert_with(Rat::zero);
        *entry += c;
        if entry.is_zero() {
            self.coeffs.retain(|_, v| !v.is_zero());
        }
    }

    pub fn curve(&self) -> &Curve {
        &self.curve
    }

    pub fn coefficient(&self, p: &CurvePoint) -> Rat {
        self.coeffs.get(p).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&CurvePoint, &Rat)> {
        self.coeffs.iter()
    }

    pub fn support(&self) -> Vec<CurvePoint> {
        self.coeffs.keys().cloned().collect()
    }

    pub fn degree(&self) -> Rat {
        self.coeffs.values().fold(Rat::zero(), |acc, c| acc + c)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.values().all(Rat::is_integer)
    }

    pub fn is_effective(&self) -> bool {
        self.coeffs.values().all(|c| !c.is_negative())
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (p, c) in &other.coeffs {
            out.add_term(p.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        Self {
            curve: self.curve.clone(),
            coeffs: self.coeffs.iter().map(|(p, c)| (p.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, k: &Rat) -> Self {
        let mut out = Self::zero(self.curve.clone());
        for (p, c) in &self.coeffs {
            out.add_term(p.clone(), c * k);
        }
        out
    }

    /// Coefficientwise map, dropping zeros.
    fn map(&self, f: impl Fn(&Rat) -> Rat) -> Self {
        let mut out = Self::zero(self.curve.clone());
        for (p, c) in &self.coeffs {
            out.add_term(p.clone(), f(c));
        }
        out
    }

    pub fn floor(&self) -> Self {
        self.map(|c| c.floor())
    }

    pub fn ceil(&self) -> Self {
        self.map(|c| c.ceil())
    }
}

/// Integral and fractional parts: `d = floor + frac` with `frac ∈ [0,1)`.
pub fn floor_frac(d: &QDivisor) -> (QDivisor, QDivisor) {
    let floor = d.floor();
    let frac = d.map(|c| c - c.floor());
    (floor, frac)
}

impl fmt::Display for QDivisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        for (i, (p, c)) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{}*[{}]", format_rational(c), p)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn floor_and_fractional_parts() {
        let d = QDivisor::new(
            Curve::AffineLine,
            [(CurvePoint::scalar(0), rat(5, 3)), (CurvePoint::scalar(1), rat(-1, 2))],
        )
        .unwrap();
        let (fl, fr) = floor_frac(&d);
        assert_eq!(fl.coefficient(&CurvePoint::scalar(0)), rat(1, 1));
        assert_eq!(fl.coefficient(&CurvePoint::scalar(1)), rat(-1, 1));
        assert_eq!(fr.coefficient(&CurvePoint::scalar(0)), rat(2, 3));
        assert_eq!(fr.coefficient(&CurvePoint::scalar(1)), rat(1, 2));
        assert_eq!(fl.add(&fr), d);

        let quarter = QDivisor::new(Curve::AffineLine, [(CurvePoint::scalar(0), rat(-1, 4))]).unwrap();
        let (fl, fr) = floor_frac(&quarter);
        assert_eq!(fl.coefficient(&CurvePoint::scalar(0)), rat(-1, 1));
        assert_eq!(fr.coefficient(&CurvePoint::scalar(0)), rat(3, 4));

        let integral = fl.clone();
        let (a, b) = floor_frac(&integral);
        assert_eq!(a, integral);
        assert!(b.is_zero());
    }

    #[test]
    fn points_must_belong_to_the_curve() {
        assert!(QDivisor::new(Curve::AffineLine, [(CurvePoint::Infinity, rat(1, 1))]).is_err());
        let e = Curve::Abstract {
            genus: 1,
            points: vec!["P".into()],
        };
        assert!(QDivisor::new(e.clone(), [(CurvePoint::Label("P".into()), rat(1, 1))]).is_ok());
        assert!(QDivisor::new(e, [(CurvePoint::Label("Q".into()), rat(1, 1))]).is_err());
    }

    #[test]
    fn point_parsing() {
        assert_eq!(CurvePoint::parse("inf"), CurvePoint::Infinity);
        assert_eq!(CurvePoint::parse("-1/2"), CurvePoint::Scalar(rat(-1, 2)));
        assert_eq!(CurvePoint::parse("P"), CurvePoint::Label("P".into()));
    }
}
