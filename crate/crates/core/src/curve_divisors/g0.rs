use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use super::{Curve, CurvePoint, QDivisor, RatFn};
use crate::error::{Error, Result};
use crate::rational::Rat;

/// `scalar · Π (t − z)^{n_z}` on the affine or projective line.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RationalFunctionG0 {
    scalar: Rat,
    orders: BTreeMap<Rat, i64>,
}

impl RationalFunctionG0 {
    pub fn new(scalar: Rat, orders: impl IntoIterator<Item = (Rat, i64)>) -> Result<Self> {
        if scalar.is_zero() {
            return Err(Error::InvalidInput("scalar of a product form must be nonzero".into()));
        }
        let mut map = BTreeMap::new();
        for (z, n) in orders {
            *map.entry(z).or_insert(0) += n;
        }
        map.retain(|_, n| *n != 0);
        Ok(Self { scalar, orders: map })
    }

    pub fn one() -> Self {
        Self {
            scalar: Rat::one(),
            orders: BTreeMap::new(),
        }
    }

    /// The monic function with the given zero and pole orders.
    pub fn monic(orders: impl IntoIterator<Item = (Rat, i64)>) -> Self {
        Self::new(Rat::one(), orders).expect("unit scalar")
    }

    pub fn scalar(&self) -> &Rat {
        &self.scalar
    }

    pub fn orders(&self) -> &BTreeMap<Rat, i64> {
        &self.orders
    }

    pub fn order_at(&self, z: &Rat) -> i64 {
        self.orders.get(z).copied().unwrap_or(0)
    }

    pub fn order_at_infinity(&self) -> i64 {
        -self.orders.values().sum::<i64>()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let orders = self
            .orders
            .iter()
            .chain(&other.orders)
            .map(|(z, n)| (z.clone(), *n));
        Self::new(&self.scalar * &other.scalar, orders).expect("nonzero product")
    }

    pub fn inverse(&self) -> Self {
        Self::new(
            self.scalar.recip(),
            self.orders.iter().map(|(z, n)| (z.clone(), -n)),
        )
        .expect("nonzero scalar")
    }

    /// Principal divisor on the affine or projective line.
    pub fn divisor(&self, curve: &Curve) -> Result<QDivisor> {
        let mut terms: Vec<(CurvePoint, Rat)> = self
            .orders
            .iter()
            .map(|(z, n)| (CurvePoint::Scalar(z.clone()), Rat::from_integer((*n).into())))
            .collect();
        match curve {
            Curve::AffineLine => {}
            Curve::ProjectiveLine => terms.push((
                CurvePoint::Infinity,
                Rat::from_integer(self.order_at_infinity().into()),
            )),
            Curve::Abstract { .. } => {
                return Err(Error::UnsupportedCurve("product forms live on the line".into()))
            }
        }
        QDivisor::new(curve.clone(), terms)
    }

    pub fn to_ratfn(&self) -> RatFn {
        self.orders
            .iter()
            .fold(RatFn::constant(self.scalar.clone()), |acc, (z, n)| {
                acc.mul(&RatFn::linear_power(z, *n))
            })
    }
}

impl fmt::Display for RationalFunctionG0 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_ratfn())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn divisor_on_the_projective_line_has_degree_zero() {
        let f = RationalFunctionG0::monic([(rat(0, 1), 1), (rat(1, 1), 1)]);
        let d = f.divisor(&Curve::ProjectiveLine).unwrap();
        assert_eq!(d.degree(), rat(0, 1));
        assert_eq!(d.coefficient(&CurvePoint::Infinity), rat(-2, 1));
        assert_eq!(f.to_string(), "t*(t-1)");
        assert_eq!(f.mul(&f.inverse()), RationalFunctionG0::one());
    }
}
