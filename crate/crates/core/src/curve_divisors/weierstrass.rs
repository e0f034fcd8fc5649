//! Functions on a genus-one curve regular away from one point `P`, written as
//! formal combinations of `tⁱ sʲ` where `t` and `s` have poles of order 2
//! and 3 at `P`. Products are kept formal: the cubic relation is not applied.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::rational::{format_rational, Rat};

#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct WeierstrassPoly(BTreeMap<(u32, u32), Rat>);

impl WeierstrassPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(Rat::one(), 0, 0)
    }

    pub fn monomial(c: Rat, t_exp: u32, s_exp: u32) -> Self {
        let mut m = BTreeMap::new();
        if !c.is_zero() {
            m.insert((t_exp, s_exp), c);
        }
        Self(m)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &Rat)> {
        self.0.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.0.keys().all(|&k| k == (0, 0))
    }

    /// Pole order at `P`; `None` for zero.
    pub fn pole_order(&self) -> Option<u32> {
        self.0.keys().map(|(i, j)| 2 * i + 3 * j).max()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.0.clone();
        for (k, c) in &other.0 {
            let e = out.entry(*k).or_insert_with(Rat::zero);
            *e += c;
        }
        out.retain(|_, c| !c.is_zero());
        Self(out)
    }

    pub fn scale(&self, k: &Rat) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        Self(self.0.iter().map(|(e, c)| (*e, c * k)).collect())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rat::one())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for ((i, j), a) in &self.0 {
            for ((k, l), b) in &other.0 {
                out = out.add(&Self::monomial(a * b, i + k, j + l));
            }
        }
        out
    }

    /// Basis `{tⁱ sʲ : j ≤ 1, 2i + 3j ≤ r}` of the sections with a pole of
    /// order at most `r` at `P`.
    pub fn basis_up_to(r: i64) -> Vec<Self> {
        let mut out = Vec::new();
        if r < 0 {
            return out;
        }
        let r = r as u32;
        for j in 0..=1u32 {
            let mut i = 0;
            while 2 * i + 3 * j <= r {
                out.push(Self::monomial(Rat::one(), i, j));
                i += 1;
            }
        }
        out.sort_by_key(|m| m.pole_order());
        out
    }
}

impl fmt::Display for WeierstrassPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for ((i, j), c) in self.0.iter().rev() {
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
            first = false;
            let mut parts: Vec<String> = Vec::new();
            if !mag.is_one() || (*i == 0 && *j == 0) {
                parts.push(format_rational(&mag));
            }
            for (var, e) in [("t", i), ("s", j)] {
                match e {
                    0 => {}
                    1 => parts.push(var.to_string()),
                    _ => parts.push(format!("{var}^{e}")),
                }
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn riemann_roch_dimensions() {
        assert_eq!(WeierstrassPoly::basis_up_to(-1).len(), 0);
        assert_eq!(WeierstrassPoly::basis_up_to(0).len(), 1);
        for r in 1..=8 {
            assert_eq!(WeierstrassPoly::basis_up_to(r).len(), r as usize);
        }
    }

    #[test]
    fn pole_orders_add_under_products() {
        let t = WeierstrassPoly::monomial(rat(1, 1), 1, 0);
        let s = WeierstrassPoly::monomial(rat(1, 1), 0, 1);
        assert_eq!(t.mul(&s).pole_order(), Some(5));
        assert_eq!(t.add(&s).to_string(), "t + s");
        assert_eq!(t.scale(&rat(2, 1)).to_string(), "2*t");
    }
}
