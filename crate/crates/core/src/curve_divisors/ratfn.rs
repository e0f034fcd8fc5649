//! Rational functions in one variable over ℚ, and Möbius relabelings of ℙ¹.

use std::fmt;

use num_traits::{One, Signed, Zero};

use super::poly::Poly;
use super::CurvePoint;
use crate::rational::{format_rational, Rat};

/// `num / den` in lowest terms with a monic denominator.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFn {
    num: Poly,
    den: Poly,
}

impl RatFn {
    pub fn new(num: Poly, den: Poly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return Self::zero();
        }
        let g = num.gcd(&den);
        let (num, den) = if g.degree() == Some(0) {
            (num, den)
        } else {
            (num.divrem(&g).0, den.divrem(&g).0)
        };
        let lead = den.leading();
        Self {
            num: num.scale(&lead.recip()),
            den: den.monic(),
        }
    }

    pub fn zero() -> Self {
        Self {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> Self {
        Self::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        Self {
            num: Poly::constant(c),
            den: Poly::one(),
        }
    }

    pub fn poly(p: Poly) -> Self {
        Self {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn t() -> Self {
        Self::poly(Poly::t())
    }

    /// `(t - z)^k` for any integer `k`.
    pub fn linear_power(z: &Rat, k: i64) -> Self {
        let lin = Poly::linear(z);
        if k >= 0 {
            Self::poly(lin.pow(k as u32))
        } else {
            Self::new(Poly::one(), lin.pow((-k) as u32))
        }
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    pub fn is_constant(&self) -> bool {
        self.is_polynomial() && self.num.is_constant()
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(
            self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
    }

    pub fn neg(&self) -> Self {
        Self {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::new(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    pub fn scale(&self, k: &Rat) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        Self {
            num: self.num.scale(k),
            den: self.den.clone(),
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inverse(&self) -> Option<Self> {
        (!self.is_zero()).then(|| Self::new(self.den.clone(), self.num.clone()))
    }

    pub fn pow(&self, k: i64) -> Option<Self> {
        let base = if k >= 0 { self.clone() } else { self.inverse()? };
        Some((0..k.unsigned_abs()).fold(Self::one(), |acc, _| acc.mul(&base)))
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.num
                .derivative()
                .mul(&self.den)
                .sub(&self.num.mul(&self.den.derivative())),
            self.den.mul(&self.den),
        )
    }

    /// Order of vanishing at a finite point; `None` for the zero function.
    pub fn order_at(&self, z: &Rat) -> Option<i64> {
        let a = self.num.root_multiplicity(z)? as i64;
        let b = self.den.root_multiplicity(z).unwrap_or(0) as i64;
        Some(a - b)
    }

    /// Order of vanishing at infinity; `None` for the zero function.
    pub fn order_at_infinity(&self) -> Option<i64> {
        let a = self.num.degree()? as i64;
        let b = self.den.degree().unwrap_or(0) as i64;
        Some(b - a)
    }

    pub fn order_at_point(&self, p: &CurvePoint) -> Option<i64> {
        match p {
            CurvePoint::Scalar(z) => self.order_at(z),
            CurvePoint::Infinity => self.order_at_infinity(),
            CurvePoint::Label(_) => None,
        }
    }

    /// Denominator after removing every root at the given points.
    pub fn poles_outside(&self, points: &[Rat]) -> Poly {
        points
            .iter()
            .fold(self.den.clone(), |d, z| d.strip_root(z))
    }

    /// `self(φ(s))` for `φ(s) = num(s) / den(s)` with `num`, `den` of degree ≤ 1.
    pub fn compose_linear_fractional(&self, num: &Poly, den: &Poly) -> Self {
        let dp = self.num.degree().unwrap_or(0);
        let dq = self.den.degree().unwrap_or(0);
        let p = self.num.compose_homogeneous(num, den, dp);
        let q = self.den.compose_homogeneous(num, den, dq);
        if dq >= dp {
            Self::new(p.mul(&den.pow((dq - dp) as u32)), q)
        } else {
            Self::new(p, q.mul(&den.pow((dp - dq) as u32)))
        }
    }
}

impl fmt::Display for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let (num_roots, num_rest) = self.num.rational_factorization();
        let (den_roots, den_rest) = self.den.rational_factorization();
        let mut scalar = Rat::one();
        let mut factors: Vec<String> = Vec::new();
        let push_roots = |roots: &[(Rat, u32)], out: &mut Vec<String>| {
            for (z, k) in roots {
                let base = if z.is_zero() {
                    "t".to_string()
                } else if z.is_negative() {
                    format!("(t+{})", format_rational(&-z.clone()))
                } else {
                    format!("(t-{})", format_rational(z))
                };
                out.push(if *k == 1 { base } else { format!("{base}^{k}") });
            }
        };
        push_roots(&num_roots, &mut factors);
        if num_rest.is_constant() {
            scalar *= num_rest.leading();
        } else {
            let lead = num_rest.leading();
            scalar *= &lead;
            factors.push(format!("({})", num_rest.scale(&lead.recip())));
        }
        let mut den_factors: Vec<String> = Vec::new();
        push_roots(&den_roots, &mut den_factors);
        if !den_rest.is_constant() {
            den_factors.push(format!("({})", den_rest));
        }
        if scalar.is_negative() {
            write!(f, "-")?;
        }
        let mag = scalar.abs();
        let mut body = factors.join("*");
        if body.is_empty() {
            body = format_rational(&mag);
        } else if !mag.is_one() {
            body = format!("{}*{}", format_rational(&mag), body);
        }
        write!(f, "{body}")?;
        match den_factors.len() {
            0 => Ok(()),
            1 => write!(f, "/{}", den_factors[0]),
            _ => write!(f, "/({})", den_factors.join("*")),
        }
    }
}

impl fmt::Debug for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A Möbius transformation `t ↦ (a t + b) / (c t + d)` with rational entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mobius {
    a: Rat,
    b: Rat,
    c: Rat,
    d: Rat,
}

impl Mobius {
    pub fn identity() -> Self {
        Self::new(Rat::one(), Rat::zero(), Rat::zero(), Rat::one())
    }

    pub fn new(a: Rat, b: Rat, c: Rat, d: Rat) -> Self {
        assert!(!(&a * &d - &b * &c).is_zero(), "degenerate Möbius map");
        Self { a, b, c, d }
    }

    /// The translation `t ↦ t - z`.
    pub fn translation(z: &Rat) -> Self {
        Self::new(Rat::one(), -z.clone(), Rat::zero(), Rat::one())
    }

    /// A map sending `zero` to 0 and `infinity` to ∞ (the two must differ).
    pub fn sending(zero: &CurvePoint, infinity: &CurvePoint) -> Self {
        match (zero, infinity) {
            (CurvePoint::Scalar(z), CurvePoint::Infinity) => Self::translation(z),
            (CurvePoint::Scalar(z), CurvePoint::Scalar(w)) => {
                Self::new(Rat::one(), -z.clone(), Rat::one(), -w.clone())
            }
            (CurvePoint::Infinity, CurvePoint::Scalar(w)) => {
                Self::new(Rat::zero(), Rat::one(), Rat::one(), -w.clone())
            }
            _ => panic!("Möbius normalization needs two distinct points of ℙ¹"),
        }
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }

    /// Whether the map fixes ∞ (so it restricts to an affine map of 𝔸¹).
    pub fn is_affine(&self) -> bool {
        self.c.is_zero()
    }

    pub fn inverse(&self) -> Self {
        Self::new(self.d.clone(), -self.b.clone(), -self.c.clone(), self.a.clone())
    }

    pub fn apply(&self, p: &CurvePoint) -> CurvePoint {
        match p {
            CurvePoint::Scalar(z) => {
                let den = &self.c * z + &self.d;
                if den.is_zero() {
                    CurvePoint::Infinity
                } else {
                    CurvePoint::Scalar((&self.a * z + &self.b) / den)
                }
            }
            CurvePoint::Infinity => {
                if self.c.is_zero() {
                    CurvePoint::Infinity
                } else {
                    CurvePoint::Scalar(&self.a / &self.c)
                }
            }
            CurvePoint::Label(_) => p.clone(),
        }
    }

    /// `f ∘ self`.
    pub fn pull_back(&self, f: &RatFn) -> RatFn {
        if self.b.is_zero() && self.c.is_zero() && self.a == self.d {
            return f.clone();
        }
        let num = Poly::new(vec![self.b.clone(), self.a.clone()]);
        let den = Poly::new(vec![self.d.clone(), self.c.clone()]);
        f.compose_linear_fractional(&num, &den)
    }

    /// `f ∘ self⁻¹`, the function `f` expressed in the new coordinate.
    pub fn push_forward(&self, f: &RatFn) -> RatFn {
        self.inverse().pull_back(f)
    }
}
