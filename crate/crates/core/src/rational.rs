//! Exact scalars and vectors: arbitrary-precision rationals, lattice vectors
//! and linear forms.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Int = BigInt;
pub type Rat = BigRational;

pub fn int(n: i64) -> Int {
    Int::from(n)
}

pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(Int::from(num), Int::from(den))
}

pub fn rat_int(n: &Int) -> Rat {
    Rat::from_integer(n.clone())
}

/// Parses `"p"`, `"-p"` or `"p/q"`.
pub fn parse_rational(s: &str) -> Result<Rat> {
    let t = s.trim();
    let err = || Error::ParseRational(s.to_string());
    match t.split_once('/') {
        Some((p, q)) => {
            let p: Int = p.trim().parse().map_err(|_| err())?;
            let q: Int = q.trim().parse().map_err(|_| err())?;
            if q.is_zero() {
                return Err(err());
            }
            Ok(Rat::new(p, q))
        }
        None => t.parse::<Int>().map(Rat::from_integer).map_err(|_| err()),
    }
}

/// Canonical text form: `"p"` for integers, `"p/q"` otherwise.
pub fn format_rational(q: &Rat) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn floor(q: &Rat) -> Int {
    q.floor().to_integer()
}

pub fn ceil(q: &Rat) -> Int {
    q.ceil().to_integer()
}

pub fn to_i64(n: &Int) -> Option<i64> {
    n.to_i64()
}

/// Least common multiple of the denominators (1 for an empty input).
pub fn lcm_denominators<'a>(values: impl IntoIterator<Item = &'a Rat>) -> Int {
    values
        .into_iter()
        .fold(Int::one(), |acc, q| acc.lcm(q.denom()))
}

/// A vector of the lattice `M` or `N`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticeVector(Vec<Int>);

impl LatticeVector {
    pub fn new(coords: Vec<Int>) -> Self {
        Self(coords)
    }

    pub fn from_i64(coords: &[i64]) -> Self {
        Self(coords.iter().map(|&c| Int::from(c)).collect())
    }

    pub fn zero(dim: usize) -> Self {
        Self(vec![Int::zero(); dim])
    }

    pub fn unit(dim: usize, i: usize) -> Self {
        let mut v = Self::zero(dim);
        v.0[i] = Int::one();
        v
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Int] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> Self {
        Self(self.0.iter().map(|a| -a).collect())
    }

    pub fn scale(&self, k: &Int) -> Self {
        Self(self.0.iter().map(|a| a * k).collect())
    }

    pub fn dot(&self, other: &Self) -> Int {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn pair(&self, p: &RationalVector) -> Rat {
        self.0
            .iter()
            .zip(p.coords())
            .map(|(a, b)| b * a)
            .fold(Rat::zero(), |acc, x| acc + x)
    }

    /// Divides by the gcd of the coordinates.
    pub fn primitive(&self) -> Self {
        let g = self.0.iter().fold(Int::zero(), |acc, c| acc.gcd(c));
        if g.is_zero() || g.is_one() {
            return self.clone();
        }
        Self(self.0.iter().map(|c| c / &g).collect())
    }

    pub fn to_rational(&self) -> RationalVector {
        RationalVector(self.0.iter().cloned().map(Rat::from_integer).collect())
    }

    /// Largest absolute coordinate.
    pub fn norm_inf(&self) -> Int {
        self.0.iter().map(|c| c.abs()).max().unwrap_or_else(Int::zero)
    }

    pub fn to_i64_vec(&self) -> Option<Vec<i64>> {
        self.0.iter().map(ToPrimitive::to_i64).collect()
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A vector of `M_Q` or `N_Q`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalVector(Vec<Rat>);

impl RationalVector {
    pub fn new(coords: Vec<Rat>) -> Self {
        Self(coords)
    }

    pub fn zero(dim: usize) -> Self {
        Self(vec![Rat::zero(); dim])
    }

    pub fn from_ratios(coords: &[(i64, i64)]) -> Self {
        Self(coords.iter().map(|&(p, q)| rat(p, q)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Rat] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn dot(&self, other: &Self) -> Rat {
        self.0
            .iter()
            .zip(&other.0)
            .fold(Rat::zero(), |acc, (a, b)| acc + a * b)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> Self {
        Self(self.0.iter().map(|a| -a).collect())
    }

    pub fn scale(&self, k: &Rat) -> Self {
        Self(self.0.iter().map(|a| a * k).collect())
    }

    /// The vector itself when all coordinates are integers.
    pub fn to_lattice(&self) -> Option<LatticeVector> {
        if self.0.iter().all(Rat::is_integer) {
            Some(LatticeVector(self.0.iter().map(Rat::to_integer).collect()))
        } else {
            None
        }
    }

    /// The primitive lattice vector on the ray through `self` (zero stays zero).
    pub fn primitive_lattice(&self) -> LatticeVector {
        let l = lcm_denominators(&self.0);
        let scaled = self.scale(&Rat::from_integer(l));
        scaled
            .to_lattice()
            .expect("denominators cleared")
            .primitive()
    }

    pub fn denominator_lcm(&self) -> Int {
        lcm_denominators(&self.0)
    }
}

impl fmt::Display for RationalVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", format_rational(c))?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for RationalVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A linear function on `M_Q`, stored by its coefficient vector in `N_Q`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct LinearForm(RationalVector);

impl LinearForm {
    pub fn new(coeffs: RationalVector) -> Self {
        Self(coeffs)
    }

    pub fn zero(dim: usize) -> Self {
        Self(RationalVector::zero(dim))
    }

    pub fn coeffs(&self) -> &RationalVector {
        &self.0
    }

    pub fn eval(&self, m: &LatticeVector) -> Rat {
        m.pair(&self.0)
    }

    pub fn eval_rational(&self, m: &RationalVector) -> Rat {
        m.dot(&self.0)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self(self.0.add(&other.0))
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self(self.0.sub(&other.0))
    }

    pub fn scale(&self, k: &Rat) -> Self {
        Self(self.0.scale(k))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// Integral on the whole lattice.
    pub fn is_integral(&self) -> bool {
        self.0.coords().iter().all(Rat::is_integer)
    }

    /// Smallest positive integer `d` with `d * self` integral.
    pub fn denominator(&self) -> Int {
        self.0.denominator_lcm()
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.0.coords().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            let sign = if c.is_negative() {
                "-"
            } else if first {
                ""
            } else {
                "+"
            };
            if !first {
                write!(f, " ")?;
            }
            if mag.is_one() {
                write!(f, "{sign}m{}", i + 1)?;
            } else {
                write!(f, "{sign}{}*m{}", format_rational(&mag), i + 1)?;
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// A linear form scaled to integer coefficients, for fast evaluation on
/// machine-size lattice points: `value(m) = (num . m) / den`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScaledForm {
    pub num: Vec<i128>,
    pub den: i128,
}

impl ScaledForm {
    pub fn from_form(form: &LinearForm) -> Option<Self> {
        let den = form.denominator();
        let scaled = form.coeffs().scale(&Rat::from_integer(den.clone()));
        let num = scaled
            .coords()
            .iter()
            .map(|c| c.to_integer().to_i128())
            .collect::<Option<Vec<_>>>()?;
        Some(Self {
            num,
            den: den.to_i128()?,
        })
    }

    /// Numerator of the value at `m`; the value is this divided by `den`.
    pub fn numer_at(&self, m: &[i64]) -> i128 {
        self.num
            .iter()
            .zip(m)
            .map(|(a, &b)| a * b as i128)
            .sum()
    }

    /// `floor(k * value(m))` for a positive integer multiplier `k`.
    pub fn floor_scaled(&self, k: i128, m: &[i64]) -> i128 {
        (k * self.numer_at(m)).div_euclid(self.den)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_round_trip() {
        for s in ["0", "3", "-7", "1/4", "-1/4", "6/8"] {
            let q = parse_rational(s).unwrap();
            assert_eq!(parse_rational(&format_rational(&q)).unwrap(), q);
        }
        assert_eq!(format_rational(&parse_rational("6/8").unwrap()), "3/4");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn floor_and_ceil_of_negative_fractions() {
        assert_eq!(floor(&rat(-1, 4)), int(-1));
        assert_eq!(ceil(&rat(-1, 4)), int(0));
        assert_eq!(floor(&rat(5, 3)), int(1));
    }

    #[test]
    fn primitive_forms() {
        let v = LatticeVector::from_i64(&[4, -6, 0]);
        assert_eq!(v.primitive(), LatticeVector::from_i64(&[2, -3, 0]));
        let q = RationalVector::from_ratios(&[(1, 2), (-1, 3)]);
        assert_eq!(q.primitive_lattice(), LatticeVector::from_i64(&[3, -2]));
    }

    #[test]
    fn linear_form_display_and_denominator() {
        let g = LinearForm::new(RationalVector::from_ratios(&[(-1, 4), (-1, 1)]));
        assert_eq!(g.to_string(), "-1/4*m1 -m2");
        assert_eq!(g.denominator(), int(4));
        assert_eq!(g.eval(&LatticeVector::from_i64(&[-3, 1])), rat(-1, 4));
    }

    #[test]
    fn scaled_form_floors_agree_with_rationals() {
        let g = LinearForm::new(RationalVector::from_ratios(&[(-1, 4), (2, 3)]));
        let s = ScaledForm::from_form(&g).unwrap();
        for a in -5..=5 {
            for b in -5..=5 {
                let m = LatticeVector::from_i64(&[a, b]);
                let exact = floor(&(g.eval(&m) * rat(3, 1)));
                assert_eq!(Int::from(s.floor_scaled(3, &[a, b])), exact);
            }
        }
    }
}
