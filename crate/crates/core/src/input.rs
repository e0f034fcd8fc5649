//! Text descriptions of polyhedral divisors and homogeneous elements.

use serde::{Deserialize, Serialize};

use crate::curve_divisors::{Curve, CurvePoint, PolyhedralDivisor, RatFn, Section, WeierstrassPoly};
use crate::error::{Error, Result};
use crate::graded_algebra::{GradedAlgebra, HomogeneousElement};
use crate::lattice_polyhedra::{Cone, Side, TailedPolyhedron};
use crate::rational::{format_rational, parse_rational, LatticeVector, Rat, RationalVector};

/// A rational number written as `"p/q"`; bare integers are accepted on input.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RationalText {
    Text(String),
    Integer(i64),
}

impl RationalText {
    pub fn value(&self) -> Result<Rat> {
        match self {
            RationalText::Text(s) => parse_rational(s),
            RationalText::Integer(n) => Ok(Rat::from_integer((*n).into())),
        }
    }
}

impl From<&Rat> for RationalText {
    fn from(q: &Rat) -> Self {
        RationalText::Text(format_rational(q))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum CurveSpec {
    #[default]
    AffineLine,
    ProjectiveLine,
    Abstract { genus: u32, points: Vec<String> },
}

impl From<&CurveSpec> for Curve {
    fn from(c: &CurveSpec) -> Self {
        match c {
            CurveSpec::AffineLine => Curve::AffineLine,
            CurveSpec::ProjectiveLine => Curve::ProjectiveLine,
            CurveSpec::Abstract { genus, points } => Curve::Abstract {
                genus: *genus,
                points: points.clone(),
            },
        }
    }
}

/// One coefficient `Δ_z = conv(vertices) + σ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoefficientSpec {
    pub point: String,
    pub vertices: Vec<Vec<RationalText>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SearchOptions {
    #[serde(default = "SearchOptions::default_degree_bound")]
    pub degree_bound: usize,
    #[serde(default = "SearchOptions::default_search_norm")]
    pub search_norm: i64,
}

impl SearchOptions {
    fn default_degree_bound() -> usize {
        8
    }

    fn default_search_norm() -> i64 {
        24
    }
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            degree_bound: Self::default_degree_bound(),
            search_norm: Self::default_search_norm(),
        }
    }
}

/// The input document: lattice rank, tail cone, curve and coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputSpec {
    pub rank: usize,
    #[serde(default)]
    pub sigma_rays: Vec<Vec<i64>>,
    #[serde(default)]
    pub curve: CurveSpec,
    #[serde(default)]
    pub divisor: Vec<CoefficientSpec>,
    #[serde(default)]
    pub options: SearchOptions,
}

impl InputSpec {
    fn check_len(&self, what: &str, len: usize) -> Result<()> {
        if len == self.rank {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!(
                "{what} has length {len}, expected rank {}",
                self.rank
            )))
        }
    }

    /// The tail cone `σ ⊆ N_Q`.
    pub fn sigma(&self) -> Result<Cone> {
        if self.rank == 0 {
            return Err(Error::InvalidInput("rank must be positive".into()));
        }
        let mut rays = Vec::with_capacity(self.sigma_rays.len());
        for r in &self.sigma_rays {
            self.check_len("tail cone ray", r.len())?;
            if r.iter().all(|c| *c == 0) {
                return Err(Error::InvalidInput("tail cone ray is zero".into()));
            }
            rays.push(LatticeVector::from_i64(r));
        }
        let sigma = Cone::from_generators(Side::N, self.rank, &rays, &[])?;
        if !sigma.is_pointed() {
            return Err(Error::NotPointed);
        }
        Ok(sigma)
    }

    pub fn divisor(&self) -> Result<PolyhedralDivisor> {
        let sigma = self.sigma()?;
        let curve = Curve::from(&self.curve);
        let mut coeffs = Vec::with_capacity(self.divisor.len());
        for c in &self.divisor {
            if c.vertices.is_empty() {
                return Err(Error::InvalidInput(format!("coefficient at {} has no vertices", c.point)));
            }
            let mut verts = Vec::with_capacity(c.vertices.len());
            for v in &c.vertices {
                self.check_len("vertex", v.len())?;
                let coords = v.iter().map(RationalText::value).collect::<Result<Vec<_>>>()?;
                verts.push(RationalVector::new(coords));
            }
            coeffs.push((CurvePoint::parse(&c.point), TailedPolyhedron::new(verts, sigma.clone())?));
        }
        PolyhedralDivisor::new(curve, sigma, coeffs)
    }

    pub fn algebra(&self) -> Result<GradedAlgebra> {
        Ok(GradedAlgebra::new(self.divisor()?))
    }

    /// The inverse of [`InputSpec::divisor`], up to vertex order.
    pub fn from_divisor(d: &PolyhedralDivisor, options: SearchOptions) -> Self {
        let curve = match d.curve() {
            Curve::AffineLine => CurveSpec::AffineLine,
            Curve::ProjectiveLine => CurveSpec::ProjectiveLine,
            Curve::Abstract { genus, points } => CurveSpec::Abstract {
                genus: *genus,
                points: points.clone(),
            },
        };
        let sigma_rays = d
            .sigma()
            .rays()
            .iter()
            .map(|r| r.to_i64_vec().expect("small ray"))
            .collect();
        let divisor = d
            .coefficients()
            .map(|(p, delta)| CoefficientSpec {
                point: p.to_string(),
                vertices: delta
                    .vertices()
                    .iter()
                    .map(|v| v.coords().iter().map(RationalText::from).collect())
                    .collect(),
            })
            .collect();
        Self {
            rank: d.rank(),
            sigma_rays,
            curve,
            divisor,
            options,
        }
    }
}

/// Parses `"<f> chi^(m1,...,mn)"` into a homogeneous element of `a`. The
/// function `f` is an expression in `t` (and `s` on a genus-one curve); an
/// empty `f` means 1. `χ` may be used for `chi`.
pub fn parse_element(a: &GradedAlgebra, text: &str) -> Result<HomogeneousElement> {
    let (f, m) = split_element(text)?;
    let degree = parse_degree(m, a.rank())?;
    let expr = parse_function(f)?;
    let section = match a.curve() {
        Curve::Abstract { .. } => Section::Weierstrass(expr.weierstrass()?),
        _ => Section::Rational(expr.rational()?),
    };
    a.element(degree, section)
}

fn split_element(text: &str) -> Result<(&str, &str)> {
    let t = text.trim();
    for marker in ["chi^", "χ^"] {
        if let Some(i) = t.find(marker) {
            return Ok((t[..i].trim(), t[i + marker.len()..].trim()));
        }
    }
    Err(Error::InvalidInput(format!("element {text:?} has no chi^(...) factor")))
}

fn parse_degree(s: &str, rank: usize) -> Result<LatticeVector> {
    let inner = s
        .strip_prefix('(')
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(|| Error::InvalidInput(format!("degree {s:?} must be parenthesized")))?;
    let coords = inner
        .split(',')
        .map(|c| c.trim().parse::<i64>())
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|_| Error::InvalidInput(format!("degree {s:?} is not an integer vector")))?;
    if coords.len() != rank {
        return Err(Error::DimensionMismatch {
            expected: rank,
            found: coords.len(),
        });
    }
    Ok(LatticeVector::from_i64(&coords))
}

/// Syntax tree of a function expression.
#[derive(Clone, Debug, PartialEq)]
enum Expr {
    Number(Rat),
    Var(char),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, i64),
}

impl Expr {
    fn rational(&self) -> Result<RatFn> {
        Ok(match self {
            Expr::Number(q) => RatFn::constant(q.clone()),
            Expr::Var('t') => RatFn::t(),
            Expr::Var(c) => return Err(Error::InvalidInput(format!("unknown variable {c} on a rational curve"))),
            Expr::Add(x, y) => x.rational()?.add(&y.rational()?),
            Expr::Sub(x, y) => x.rational()?.sub(&y.rational()?),
            Expr::Mul(x, y) => x.rational()?.mul(&y.rational()?),
            Expr::Div(x, y) => {
                let inv = y
                    .rational()?
                    .inverse()
                    .ok_or_else(|| Error::InvalidInput("division by zero".into()))?;
                x.rational()?.mul(&inv)
            }
            Expr::Neg(x) => x.rational()?.neg(),
            Expr::Pow(x, k) => x
                .rational()?
                .pow(*k)
                .ok_or_else(|| Error::InvalidInput("negative power of zero".into()))?,
        })
    }

    fn weierstrass(&self) -> Result<WeierstrassPoly> {
        let unsupported = || Error::InvalidInput("only polynomials in t and s are accepted on this curve".into());
        Ok(match self {
            Expr::Number(q) => WeierstrassPoly::monomial(q.clone(), 0, 0),
            Expr::Var('t') => WeierstrassPoly::monomial(Rat::from_integer(1.into()), 1, 0),
            Expr::Var('s') => WeierstrassPoly::monomial(Rat::from_integer(1.into()), 0, 1),
            Expr::Var(c) => return Err(Error::InvalidInput(format!("unknown variable {c}"))),
            Expr::Add(x, y) => x.weierstrass()?.add(&y.weierstrass()?),
            Expr::Sub(x, y) => x.weierstrass()?.sub(&y.weierstrass()?),
            Expr::Mul(x, y) => x.weierstrass()?.mul(&y.weierstrass()?),
            Expr::Div(x, y) => match y.as_ref() {
                Expr::Number(q) if !num_traits::Zero::is_zero(q) => {
                    x.weierstrass()?.scale(&(Rat::from_integer(1.into()) / q))
                }
                _ => return Err(unsupported()),
            },
            Expr::Neg(x) => x.weierstrass()?.neg(),
            Expr::Pow(x, k) => {
                let base = x.weierstrass()?;
                let k = u32::try_from(*k).map_err(|_| unsupported())?;
                (0..k).fold(WeierstrassPoly::one(), |acc, _| acc.mul(&base))
            }
        })
    }
}

fn parse_function(s: &str) -> Result<Expr> {
    if s.is_empty() {
        return Ok(Expr::Number(Rat::from_integer(1.into())));
    }
    if s == "-" {
        return Ok(Expr::Number(Rat::from_integer((-1).into())));
    }
    let mut p = Parser {
        chars: s.chars().filter(|c| !c.is_whitespace()).collect(),
        pos: 0,
        source: s,
    };
    let e = p.expr()?;
    if p.pos != p.chars.len() {
        return Err(p.error());
    }
    Ok(e)
}

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    source: &'a str,
}

impl Parser<'_> {
    fn error(&self) -> Error {
        Error::InvalidInput(format!("cannot parse function {:?} at offset {}", self.source, self.pos))
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat('/') {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.power()?));
            } else if matches!(self.peek(), Some(c) if c == '(' || c.is_ascii_alphanumeric()) {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.power()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat('-') {
            Ok(Expr::Neg(Box::new(self.unary()?)))
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let neg = self.eat('-');
        let k = self.integer()?;
        Ok(Expr::Pow(Box::new(base), if neg { -k } else { k }))
    }

    fn integer(&mut self) -> Result<i64> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        let digits: String = self.chars[start..self.pos].iter().collect();
        digits.parse().map_err(|_| self.error())
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(self.error());
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => Ok(Expr::Number(Rat::from_integer(self.integer()?.into()))),
            Some(c @ ('t' | 's')) => {
                self.pos += 1;
                Ok(Expr::Var(c))
            }
            _ => Err(self.error()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn hyperbolic_spec() -> InputSpec {
        let text = |s: &str| RationalText::Text(s.into());
        InputSpec {
            rank: 2,
            sigma_rays: vec![],
            curve: CurveSpec::AffineLine,
            divisor: vec![
                CoefficientSpec {
                    point: "0".into(),
                    vertices: vec![
                        vec![text("0"), text("0")],
                        vec![text("0"), text("1")],
                        vec![text("-1/4"), text("-1")],
                    ],
                },
                CoefficientSpec {
                    point: "1".into(),
                    vertices: vec![vec![text("0"), text("0")], vec![text("0"), text("1")]],
                },
            ],
            options: SearchOptions::default(),
        }
    }

    #[test]
    fn function_expressions() {
        let f = parse_function("t(t-1)").unwrap().rational().unwrap();
        assert_eq!(f, RatFn::t().mul(&RatFn::linear_power(&rat(1, 1), 1)));
        let g = parse_function("-1/4 t^-2").unwrap().rational().unwrap();
        assert_eq!(g, RatFn::linear_power(&rat(0, 1), -2).scale(&rat(-1, 4)));
        assert_eq!(parse_function("2t + 3").unwrap().rational().unwrap().num().coeffs().len(), 2);
        assert!(parse_function("t +").is_err());
        assert!(parse_function("x").is_err());
    }

    #[test]
    fn weierstrass_expressions() {
        let f = parse_function("t s - 2").unwrap().weierstrass().unwrap();
        let expected = WeierstrassPoly::monomial(rat(1, 1), 1, 1).sub(&WeierstrassPoly::monomial(rat(2, 1), 0, 0));
        assert_eq!(f, expected);
        assert!(parse_function("1/t").unwrap().weierstrass().is_err());
    }

    #[test]
    fn element_text() {
        let a = hyperbolic_spec().algebra().unwrap();
        let x = parse_element(&a, "-t chi^(4,0)").unwrap();
        assert_eq!(x.degree(), &LatticeVector::from_i64(&[4, 0]));
        assert_eq!(x.section().as_rational().unwrap(), &RatFn::t().neg());
        assert_eq!(parse_element(&a, "χ^(-1,0)").unwrap(), a.rational_element(&[-1, 0], RatFn::one()).unwrap());
        assert!(matches!(parse_element(&a, "chi^(4,0)"), Err(Error::MembershipViolation(_))));
        assert!(matches!(parse_element(&a, "t chi^(1)"), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn divisor_round_trip() {
        let spec = hyperbolic_spec();
        let d = spec.divisor().unwrap();
        let back = InputSpec::from_divisor(&d, spec.options);
        assert_eq!(back.divisor().unwrap(), d);
    }

    #[test]
    fn invalid_specs() {
        let mut s = hyperbolic_spec();
        s.sigma_rays = vec![vec![1, 0], vec![-1, 0]];
        assert!(matches!(s.divisor(), Err(Error::NotPointed)));
        let mut s = hyperbolic_spec();
        s.divisor[0].vertices[0].pop();
        assert!(matches!(s.divisor(), Err(Error::InvalidInput(_))));
        let mut s = hyperbolic_spec();
        s.divisor[1].point = "inf".into();
        assert!(s.divisor().is_err());
    }
}
