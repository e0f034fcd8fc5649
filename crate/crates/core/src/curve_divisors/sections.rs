use std::fmt;

use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use super::{Curve, CurvePoint, QDivisor, RatFn, RationalFunctionG0, WeierstrassPoly};
use crate::error::{Error, Result};
use crate::rational::Rat;

/// The function part of a homogeneous element.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Section {
    Rational(RatFn),
    Weierstrass(WeierstrassPoly),
}

impl Section {
    pub fn one_for(curve: &Curve) -> Self {
        match curve {
            Curve::Abstract { .. } => Section::Weierstrass(WeierstrassPoly::one()),
            _ => Section::Rational(RatFn::one()),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Section::Rational(f) => f.is_zero(),
            Section::Weierstrass(f) => f.is_zero(),
        }
    }

    pub fn zero_like(&self) -> Self {
        match self {
            Section::Rational(_) => Section::Rational(RatFn::zero()),
            Section::Weierstrass(_) => Section::Weierstrass(WeierstrassPoly::zero()),
        }
    }

    pub fn scale(&self, k: &Rat) -> Self {
        match self {
            Section::Rational(f) => Section::Rational(f.scale(k)),
            Section::Weierstrass(f) => Section::Weierstrass(f.scale(k)),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        match (self, other) {
            (Section::Rational(a), Section::Rational(b)) => Ok(Section::Rational(a.add(b))),
            (Section::Weierstrass(a), Section::Weierstrass(b)) => Ok(Section::Weierstrass(a.add(b))),
            _ => Err(mixed()),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-Rat::from_integer(1.into())))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        match (self, other) {
            (Section::Rational(a), Section::Rational(b)) => Ok(Section::Rational(a.mul(b))),
            (Section::Weierstrass(a), Section::Weierstrass(b)) => Ok(Section::Weierstrass(a.mul(b))),
            _ => Err(mixed()),
        }
    }

    pub fn as_rational(&self) -> Option<&RatFn> {
        match self {
            Section::Rational(f) => Some(f),
            Section::Weierstrass(_) => None,
        }
    }
}

fn mixed() -> Error {
    Error::InvalidInput("cannot combine functions from different curves".into())
}

impl fmt::Display for Section {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Section::Rational(g) => write!(f, "{g}"),
            Section::Weierstrass(g) => write!(f, "{g}"),
        }
    }
}

/// Whether `div(f) + d ≥ 0` for an integral divisor `d`.
pub fn section_satisfies(d: &QDivisor, f: &Section) -> Result<bool> {
    if f.is_zero() {
        return Ok(true);
    }
    match (d.curve(), f) {
        (Curve::AffineLine | Curve::ProjectiveLine, Section::Rational(g)) => {
            let mut finite: Vec<Rat> = Vec::new();
            for (p, c) in d.terms() {
                let ord = g.order_at_point(p).expect("nonzero function");
                if Rat::from_integer(ord.into()) + c < Rat::zero() {
                    return Ok(false);
                }
                if let CurvePoint::Scalar(z) = p {
                    finite.push(z.clone());
                }
            }
            if !g.poles_outside(&finite).is_constant() {
                return Ok(false);
            }
            if matches!(d.curve(), Curve::ProjectiveLine)
                && d.coefficient(&CurvePoint::Infinity).is_zero()
                && g.order_at_infinity().expect("nonzero") < 0
            {
                return Ok(false);
            }
            Ok(true)
        }
        (Curve::Abstract { genus: 1, .. }, Section::Weierstrass(g)) => {
            let bound = single_point_degree(d)?;
            Ok(i64::from(g.pole_order().expect("nonzero")) <= bound)
        }
        _ => Err(Error::UnsupportedCurve(format!(
            "no function arithmetic for this section on the {}",
            d.curve()
        ))),
    }
}

/// The coefficient of a divisor supported in at most one named point.
fn single_point_degree(d: &QDivisor) -> Result<i64> {
    let support = d.support();
    if support.len() > 1 {
        return Err(Error::UnsupportedCurve(
            "genus-one sections need a divisor supported at one point".into(),
        ));
    }
    Ok(d.degree().to_integer().to_i64().expect("small coefficient"))
}

/// Global sections of an integral divisor on the line: `cofactor · p(t)` with
/// `deg p ≤ max_degree` (unbounded on the affine line).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SectionSpace {
    pub cofactor: RationalFunctionG0,
    pub max_degree: Option<i64>,
    /// `cofactor · tᵏ`, truncated at the degree bound on the affine line.
    pub basis: Vec<RationalFunctionG0>,
}

impl SectionSpace {
    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }
}

pub fn sections_basis(d: &QDivisor, degree_bound: usize) -> Result<SectionSpace> {
    if !d.is_integral() {
        return Err(Error::NonIntegral);
    }
    let orders: Vec<(Rat, i64)> = d
        .terms()
        .filter_map(|(p, c)| {
            p.as_scalar()
                .map(|z| (z.clone(), -c.to_integer().to_i64().expect("small coefficient")))
        })
        .collect();
    let cofactor = RationalFunctionG0::monic(orders);
    let max_degree = match d.curve() {
        Curve::AffineLine => None,
        Curve::ProjectiveLine => Some(d.degree().to_integer().to_i64().expect("small degree")),
        Curve::Abstract { .. } => {
            return Err(Error::UnsupportedCurve(
                "explicit bases exist only on the line".into(),
            ))
        }
    };
    let top = max_degree.map_or(degree_bound as i64, |m| m);
    let basis = (0..=top)
        .map(|k| cofactor.mul(&RationalFunctionG0::monic([(Rat::zero(), k)])))
        .collect();
    Ok(SectionSpace {
        cofactor,
        max_degree,
        basis,
    })
}

/// Sections as a list of functions of the right kind for the curve.
pub fn section_list(d: &QDivisor, degree_bound: usize) -> Result<Vec<Section>> {
    match d.curve() {
        Curve::Abstract { genus: 1, .. } => {
            let r = single_point_degree(d)?;
            Ok(WeierstrassPoly::basis_up_to(r)
                .into_iter()
                .map(Section::Weierstrass)
                .collect())
        }
        _ => Ok(sections_basis(d, degree_bound)?
            .basis
            .iter()
            .map(|g| Section::Rational(g.to_ratfn()))
            .collect()),
    }
}

/// Dimension of the space of global sections.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum DimReport {
    Finite(u64),
    Infinite,
    /// Depends on the divisor class, which is not determined by the data.
    Indeterminate { lower: u64, upper: u64 },
}

impl fmt::Display for DimReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DimReport::Finite(n) => write!(f, "{n}"),
            DimReport::Infinite => write!(f, "infinite"),
            DimReport::Indeterminate { lower, upper } => write!(f, "between {lower} and {upper}"),
        }
    }
}

pub fn sections_dim(d: &QDivisor) -> Result<DimReport> {
    if !d.is_integral() {
        return Err(Error::NonIntegral);
    }
    if d.curve().is_affine() {
        return Ok(DimReport::Infinite);
    }
    if d.is_zero() {
        return Ok(DimReport::Finite(1));
    }
    let deg = d.degree().to_integer().to_i64().expect("small degree");
    if deg < 0 {
        return Ok(DimReport::Finite(0));
    }
    let g = i64::from(d.curve().genus());
    let deg_u = deg as u64;
    Ok(if g == 0 {
        DimReport::Finite(deg_u + 1)
    } else if deg >= 2 * g - 1 {
        DimReport::Finite((deg + 1 - g) as u64)
    } else {
        // Riemann-Roch below, Clifford above
        DimReport::Indeterminate {
            lower: (deg + 1 - g).max(0) as u64,
            upper: deg_u / 2 + 1,
        }
    })
}
