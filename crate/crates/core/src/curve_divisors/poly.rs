//! Univariate polynomials over ℚ.

use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::rational::{format_rational, Int, Rat};

/// Coefficients from the constant term upward, without trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly(Vec<Rat>);

impl Poly {
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self(coeffs)
    }

    pub fn zero() -> Self {
        Self(Vec::new())
    }

    pub fn one() -> Self {
        Self::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        Self::new(vec![c])
    }

    /// The variable `t`.
    pub fn t() -> Self {
        Self::new(vec![Rat::zero(), Rat::one()])
    }

    /// `t - z`.
    pub fn linear(z: &Rat) -> Self {
        Self::new(vec![-z.clone(), Rat::one()])
    }

    pub fn monomial(c: Rat, k: usize) -> Self {
        let mut v = vec![Rat::zero(); k + 1];
        v[k] = c;
        Self::new(v)
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn leading(&self) -> Rat {
        self.0.last().cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_constant(&self) -> bool {
        self.0.len() <= 1
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.0.len().max(other.0.len());
        Self::new(
            (0..n)
                .map(|i| {
                    self.0.get(i).cloned().unwrap_or_else(Rat::zero)
                        + other.0.get(i).cloned().unwrap_or_else(Rat::zero)
                })
                .collect(),
        )
    }

    pub fn neg(&self) -> Self {
        Self(self.0.iter().map(|c| -c).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &Rat) -> Self {
        Self::new(self.0.iter().map(|c| c * k).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Rat::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(), |acc, _| acc.mul(self))
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rat::from_integer(Int::from(i)))
                .collect(),
        )
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        self.0
            .iter()
            .rev()
            .fold(Rat::zero(), |acc, c| acc * x + c)
    }

    /// Quotient and remainder; panics on a zero divisor.
    pub fn divrem(&self, divisor: &Self) -> (Self, Self) {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        let dd = divisor.degree().expect("nonzero");
        let lead = divisor.leading();
        let mut rem = self.0.clone();
        let mut quot = vec![Rat::zero(); self.0.len().saturating_sub(dd)];
        while rem.len() > dd && !rem.is_empty() {
            let k = rem.len() - 1 - dd;
            let c = rem.last().expect("nonempty") / &lead;
            for (i, d) in divisor.0.iter().enumerate() {
                rem[k + i] -= &c * d;
            }
            quot[k] = c;
            rem.pop();
            while rem.last().is_some_and(Zero::is_zero) {
                rem.pop();
            }
        }
        (Self::new(quot), Self::new(rem))
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        self.scale(&self.leading().recip())
    }

    /// Monic greatest common divisor, by a primitive remainder sequence over ℤ.
    pub fn gcd(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.monic();
        }
        if other.is_zero() {
            return self.monic();
        }
        if self.degree() == Some(0) || other.degree() == Some(0) {
            return Self::one();
        }
        let (mut a, mut b) = (primitive_part(self), primitive_part(other));
        if a.len() < b.len() {
            std::mem::swap(&mut a, &mut b);
        }
        while b.len() > 1 {
            let r = pseudo_remainder(&a, &b);
            a = b;
            if r.is_empty() {
                return Self::new(a.into_iter().map(Rat::from_integer).collect()).monic();
            }
            b = primitive_int(r);
        }
        Self::one()
    }

    /// Multiplicity of `z` as a root (0 if not a root); `None` for zero.
    pub fn root_multiplicity(&self, z: &Rat) -> Option<u32> {
        if self.is_zero() {
            return None;
        }
        let lin = Self::linear(z);
        let mut p = self.clone();
        let mut k = 0;
        loop {
            let (q, r) = p.divrem(&lin);
            if !r.is_zero() {
                return Some(k);
            }
            p = q;
            k += 1;
        }
    }

    /// Divides out every factor `t - z`.
    pub fn strip_root(&self, z: &Rat) -> Self {
        let k = self.root_multiplicity(z).unwrap_or(0);
        self.divrem(&Self::linear(z).pow(k)).0
    }

    /// `p((αs+β)/(γs+δ)) · (γs+δ)^deg p`, as a polynomial in `s`.
    pub fn compose_homogeneous(&self, num: &Self, den: &Self, degree: usize) -> Self {
        // homogeneous Horner scheme
        let coeff = |k: usize| self.0.get(k).cloned().unwrap_or_else(Rat::zero);
        let mut out = Self::constant(coeff(degree));
        let mut den_power = Self::one();
        for k in (0..degree).rev() {
            den_power = den_power.mul(den);
            out = out.mul(num).add(&den_power.scale(&coeff(k)));
        }
        out
    }

    /// Rational roots with multiplicity, found by the rational root test when
    /// the coefficients are small; returns the roots and the remaining factor.
    pub fn rational_factorization(&self) -> (Vec<(Rat, u32)>, Self) {
        let mut rest = self.clone();
        let mut roots = Vec::new();
        if rest.is_zero() {
            return (roots, rest);
        }
        let k = rest.root_multiplicity(&Rat::zero()).unwrap_or(0);
        if k > 0 {
            roots.push((Rat::zero(), k));
            rest = rest.strip_root(&Rat::zero());
        }
        if rest.degree().unwrap_or(0) == 0 {
            return (roots, rest);
        }
        let l = rest.0.iter().fold(Int::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<Int> = rest.0.iter().map(|c| (c * Rat::from_integer(l.clone())).to_integer()).collect();
        let (a0, an) = (ints[0].abs(), ints.last().expect("nonzero").abs());
        let small = |x: &Int| x.to_u64().is_some_and(|v| v <= 100_000);
        if !(small(&a0) && small(&an)) {
            return (roots, rest);
        }
        let divisors = |x: u64| (1..=x).filter(move |d| x % d == 0);
        let mut candidates: Vec<Rat> = Vec::new();
        for p in divisors(a0.to_u64().expect("small")) {
            for q in divisors(an.to_u64().expect("small")) {
                let r = Rat::new(Int::from(p), Int::from(q));
                candidates.push(r.clone());
                candidates.push(-r);
            }
        }
        candidates.sort();
        candidates.dedup();
        for z in candidates {
            let k = rest.root_multiplicity(&z).unwrap_or(0);
            if k > 0 {
                roots.push((z.clone(), k));
                rest = rest.strip_root(&z);
            }
        }
        roots.sort();
        (roots, rest)
    }
}

fn fmt_term(f: &mut fmt::Formatter<'_>, c: &Rat, k: usize, first: bool, var: &str) -> fmt::Result {
    let mag = c.abs();
    if first {
        if c.is_negative() {
            write!(f, "-")?;
        }
    } else if c.is_negative() {
        write!(f, " - ")?;
    } else {
        write!(f, " + ")?;
    }
    let show_coeff = k == 0 || !mag.is_one();
    if show_coeff {
        write!(f, "{}", format_rational(&mag))?;
    }
    if k > 0 {
        if show_coeff {
            write!(f, "*")?;
        }
        write!(f, "{var}")?;
        if k > 1 {
            write!(f, "^{k}")?;
        }
    }
    Ok(())
}

impl Poly {
    /// Expanded form with highest degree first, in the named variable.
    pub fn format_in(&self, var: &str) -> String {
        struct Show<'a>(&'a Poly, &'a str);
        impl fmt::Display for Show<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                if self.0.is_zero() {
                    return write!(f, "0");
                }
                let mut first = true;
                for (k, c) in self.0 .0.iter().enumerate().rev() {
                    if c.is_zero() {
                        continue;
                    }
                    fmt_term(f, c, k, first, self.1)?;
                    first = false;
                }
                Ok(())
            }
        }
        Show(self, var).to_string()
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.format_in("t"))
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn p(c: &[i64]) -> Poly {
        Poly::new(c.iter().map(|&x| rat(x, 1)).collect())
    }

    #[test]
    fn division_and_gcd() {
        let a = p(&[0, -1, 1]); // t^2 - t
        let b = p(&[-1, 1]); // t - 1
        let (q, r) = a.divrem(&b);
        assert_eq!(q, Poly::t());
        assert!(r.is_zero());
        assert_eq!(a.gcd(&p(&[-2, 2])), b);
    }

    #[test]
    fn roots_and_derivative() {
        let a = p(&[0, 0, -1, 1]); // t^3 - t^2
        assert_eq!(a.root_multiplicity(&rat(0, 1)), Some(2));
        assert_eq!(a.root_multiplicity(&rat(1, 1)), Some(1));
        assert_eq!(a.derivative(), p(&[0, -2, 3]));
        let (roots, rest) = a.rational_factorization();
        assert_eq!(roots, vec![(rat(0, 1), 2), (rat(1, 1), 1)]);
        assert!(rest.is_constant());
    }

    #[test]
    fn display_is_readable() {
        assert_eq!(p(&[0, -1, 1]).to_string(), "t^2 - t");
        assert_eq!(p(&[1, 0, -2]).to_string(), "-2*t^2 + 1");
        assert_eq!(Poly::zero().to_string(), "0");
    }
}

/// Integer coefficients with content 1 and positive leading term.
fn primitive_part(p: &Poly) -> Vec<Int> {
    let lcm = p.0.iter().fold(Int::one(), |acc, c| acc.lcm(c.denom()));
    primitive_int(p.0.iter().map(|c| (c * Rat::from_integer(lcm.clone())).to_integer()).collect())
}

fn primitive_int(mut v: Vec<Int>) -> Vec<Int> {
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
    let content = v.iter().fold(Int::zero(), |acc, c| acc.gcd(c));
    let sign = if v.last().is_some_and(Signed::is_negative) { -Int::one() } else { Int::one() };
    let content = content * sign;
    v.iter().map(|c| c / &content).collect()
}

/// `lc(b)^k · a mod b` with integer arithmetic only.
fn pseudo_remainder(a: &[Int], b: &[Int]) -> Vec<Int> {
    let db = b.len() - 1;
    let lead = &b[db];
    let mut rem = a.to_vec();
    while rem.len() > db {
        let k = rem.len() - 1 - db;
        let top = rem.last().expect("nonempty").clone();
        for c in rem.iter_mut() {
            *c *= lead;
        }
        for (i, d) in b.iter().enumerate() {
            rem[k + i] -= &top * d;
        }
        rem.pop();
        while rem.last().is_some_and(Zero::is_zero) {
            rem.pop();
        }
    }
    rem
}
