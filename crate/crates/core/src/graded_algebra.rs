//! The M-graded algebra `A = ⊕ A_m χ^m` with `A_m = H⁰(C, ⌊𝔇(m)⌋)`.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::curve_divisors::{
    section_list, section_satisfies, sections_basis, sections_dim, Curve, CurvePoint, DimReport,
    PolyhedralDivisor, Poly, QDivisor, RatFn, RationalFunctionG0, Section, SectionSpace,
    WeierstrassPoly,
};
use crate::error::{Error, Result};
use crate::lattice_polyhedra::{hilbert_basis, semigroup_generators, Cone, Side};
use crate::linalg;
use crate::rational::{LatticeVector, Rat, RationalVector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum AlgebraType {
    Elliptic,
    Parabolic,
    Hyperbolic,
    OtherNonElliptic,
}

impl fmt::Display for AlgebraType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            AlgebraType::Elliptic => "elliptic",
            AlgebraType::Parabolic => "parabolic",
            AlgebraType::Hyperbolic => "hyperbolic",
            AlgebraType::OtherNonElliptic => "non-elliptic",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedAlgebra {
    divisor: PolyhedralDivisor,
    weight_cone: Cone,
    kind: AlgebraType,
}

/// `f χ^m` with `f ∈ A_m`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HomogeneousElement {
    degree: LatticeVector,
    section: Section,
}

/// `φ_m` with `div(φ_m) + 𝔇(m) = 0`, possibly away from one marked point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistinguishedGenerator {
    pub degree: LatticeVector,
    pub phi: RationalFunctionG0,
}

pub fn classify_type(divisor: &PolyhedralDivisor) -> AlgebraType {
    let sigma = divisor.sigma();
    if divisor.curve().is_projective() {
        AlgebraType::Elliptic
    } else if sigma.is_full_dimensional() {
        AlgebraType::Parabolic
    } else if sigma.is_origin() {
        AlgebraType::Hyperbolic
    } else {
        AlgebraType::OtherNonElliptic
    }
}

/// Degrees generating the semigroup algebra `𝕂[σ∨ ∩ M]`.
pub fn toric_generators(sigma: &Cone) -> Result<Vec<LatticeVector>> {
    let dual = sigma.dual();
    if dual.is_pointed() {
        hilbert_basis(&dual)
    } else {
        Ok(semigroup_generators(&dual, None))
    }
}

impl GradedAlgebra {
    pub fn new(divisor: PolyhedralDivisor) -> Self {
        let weight_cone = divisor.weight_cone();
        let kind = classify_type(&divisor);
        Self {
            divisor,
            weight_cone,
            kind,
        }
    }

    pub fn divisor(&self) -> &PolyhedralDivisor {
        &self.divisor
    }

    pub fn weight_cone(&self) -> &Cone {
        &self.weight_cone
    }

    pub fn kind(&self) -> AlgebraType {
        self.kind
    }

    pub fn curve(&self) -> &Curve {
        self.divisor.curve()
    }

    pub fn rank(&self) -> usize {
        self.divisor.rank()
    }

    fn check_degree(&self, m: &LatticeVector) -> Result<()> {
        if m.dim() != self.rank() {
            return Err(Error::DimensionMismatch {
                expected: self.rank(),
                found: m.dim(),
            });
        }
        if !self.weight_cone.contains(m) {
            return Err(Error::OutsideWeightCone(m.to_string()));
        }
        Ok(())
    }

    /// `⌊𝔇(m)⌋`.
    pub fn floor_divisor(&self, m: &LatticeVector) -> Result<QDivisor> {
        Ok(self.divisor.evaluate(m)?.floor())
    }

    pub fn contains(&self, m: &LatticeVector, f: &Section) -> Result<bool> {
        if f.is_zero() {
            return Ok(m.dim() == self.rank());
        }
        if m.dim() != self.rank() || !self.weight_cone.contains(m) {
            return Ok(false);
        }
        section_satisfies(&self.floor_divisor(m)?, f)
    }

    /// The element `f χ^m`, checked for membership.
    pub fn element(&self, m: LatticeVector, f: Section) -> Result<HomogeneousElement> {
        if !self.contains(&m, &f)? {
            return Err(Error::MembershipViolation(format!("{f} χ^{m}")));
        }
        Ok(HomogeneousElement {
            degree: m,
            section: f,
        })
    }

    /// Convenience for the line: `f χ^m`.
    pub fn rational_element(&self, m: &[i64], f: RatFn) -> Result<HomogeneousElement> {
        self.element(LatticeVector::from_i64(m), Section::Rational(f))
    }

    pub fn zero_element(&self, m: LatticeVector) -> HomogeneousElement {
        HomogeneousElement {
            degree: m,
            section: Section::one_for(self.curve()).zero_like(),
        }
    }

    pub fn one(&self) -> HomogeneousElement {
        HomogeneousElement {
            degree: LatticeVector::zero(self.rank()),
            section: Section::one_for(self.curve()),
        }
    }

    /// The space `A_m` on the line, as a cofactor times polynomials.
    pub fn piece_space(&self, m: &LatticeVector, degree_bound: usize) -> Result<SectionSpace> {
        self.check_degree(m)?;
        sections_basis(&self.floor_divisor(m)?, degree_bound)
    }

    pub fn piece_dimension(&self, m: &LatticeVector) -> Result<DimReport> {
        self.check_degree(m)?;
        sections_dim(&self.floor_divisor(m)?)
    }

    /// A basis of `A_m`, truncated at `degree_bound` on the affine line.
    pub fn graded_piece(&self, m: &LatticeVector, degree_bound: usize) -> Result<Vec<HomogeneousElement>> {
        self.check_degree(m)?;
        Ok(section_list(&self.floor_divisor(m)?, degree_bound)?
            .into_iter()
            .map(|f| HomogeneousElement {
                degree: m.clone(),
                section: f,
            })
            .collect())
    }

    pub fn multiply(&self, x: &HomogeneousElement, y: &HomogeneousElement) -> Result<HomogeneousElement> {
        let out = HomogeneousElement {
            degree: x.degree.add(&y.degree),
            section: x.section.mul(&y.section)?,
        };
        if !self.contains(&out.degree, &out.section)? {
            return Err(Error::MembershipViolation(out.to_string()));
        }
        Ok(out)
    }

    pub fn add(&self, x: &HomogeneousElement, y: &HomogeneousElement) -> Result<HomogeneousElement> {
        if x.section.is_zero() {
            return Ok(y.clone());
        }
        if y.section.is_zero() {
            return Ok(x.clone());
        }
        if x.degree != y.degree {
            return Err(Error::InvalidInput(format!(
                "cannot add degrees {} and {}",
                x.degree, y.degree
            )));
        }
        Ok(HomogeneousElement {
            degree: x.degree.clone(),
            section: x.section.add(&y.section)?,
        })
    }

    /// `φ_m`, monic. With `away_from` set, the orders at that point are left free.
    pub fn distinguished_generator(
        &self,
        m: &LatticeVector,
        away_from: Option<&CurvePoint>,
    ) -> Result<DistinguishedGenerator> {
        self.check_degree(m)?;
        let d = self.divisor.evaluate(m)?;
        let curve = self.curve();
        if !curve.is_rational_line() {
            return Err(Error::UnsupportedCurve("distinguished generators need the line".into()));
        }
        let relevant: Vec<(&CurvePoint, &Rat)> = d.terms().filter(|(p, _)| Some(*p) != away_from).collect();
        if relevant.iter().any(|(_, c)| !c.is_integer()) {
            return Err(Error::NonIntegralDivisor(d.to_string()));
        }
        let coeff = |c: &Rat| c.to_integer().to_i64().expect("small coefficient");
        let mut orders: Vec<(Rat, i64)> = relevant
            .iter()
            .filter_map(|(p, c)| p.as_scalar().map(|z| (z.clone(), -coeff(c))))
            .collect();
        if *curve == Curve::ProjectiveLine {
            let at_infinity = coeff(&d.coefficient(&CurvePoint::Infinity));
            match away_from {
                Some(CurvePoint::Infinity) => {}
                Some(CurvePoint::Scalar(z1)) => {
                    // order at ∞ of φ must be −c_∞
                    let finite: i64 = orders.iter().map(|(_, n)| -n).sum();
                    orders.push((z1.clone(), at_infinity + finite));
                }
                None => {
                    if !d.degree().is_zero() {
                        return Err(Error::InvalidInput(format!("{d} is not principal")));
                    }
                }
                Some(other) => return Err(Error::InvalidInput(format!("no point {other} on the line"))),
            }
        }
        Ok(DistinguishedGenerator {
            degree: m.clone(),
            phi: RationalFunctionG0::monic(orders),
        })
    }

    /// Homogeneous generators: monomial elements from the semigroup generators
    /// of the cone of admissible exponents, then products of others pruned.
    /// `bound` caps the number of factors tried in the pruning search.
    pub fn generators_up_to(&self, bound: usize) -> Result<Vec<HomogeneousElement>> {
        match self.curve() {
            Curve::Abstract { genus: 1, .. } => self.genus_one_generators(),
            Curve::Abstract { .. } => Err(Error::UnsupportedCurve(
                "generators need the line or a genus-one curve".into(),
            )),
            _ => self.line_generators(bound, None),
        }
    }

    /// Generators whose degrees lie on the face `ρ^⊥` of the weight cone.
    pub fn generators_on_face(&self, rho: &LatticeVector, bound: usize) -> Result<Vec<HomogeneousElement>> {
        match self.curve() {
            Curve::AffineLine | Curve::ProjectiveLine => self.line_generators(bound, Some(rho)),
            _ => Ok(self
                .generators_up_to(bound)?
                .into_iter()
                .filter(|g| g.degree().dot(rho).is_zero())
                .collect()),
        }
    }

    fn sigma_rows(&self, extra: usize) -> Vec<LatticeVector> {
        self.divisor.sigma().rays().iter().map(|r| pad(r, extra)).collect()
    }

    fn line_generators(&self, bound: usize, face: Option<&LatticeVector>) -> Result<Vec<HomogeneousElement>> {
        let n = self.rank();
        let mut points: BTreeSet<Rat> = self
            .divisor
            .support()
            .iter()
            .filter_map(|p| p.as_scalar().cloned())
            .collect();
        points.insert(Rat::zero());
        let points: Vec<Rat> = points.into_iter().collect();
        let k = points.len();
        let dim = n + k;
        let mut rows = self.sigma_rows(k);
        for (i, z) in points.iter().enumerate() {
            let p = CurvePoint::Scalar(z.clone());
            let delta = self.divisor.coefficient(&p);
            for v in delta.vertices() {
                // a_z + ⟨m, v⟩ ≥ 0
                let mut row: Vec<Rat> = v.coords().to_vec();
                row.extend((0..k).map(|j| if j == i { Rat::one() } else { Rat::zero() }));
                rows.push(LatticeVector::new(linalg::primitive_int(&row)));
            }
        }
        if *self.curve() == Curve::ProjectiveLine {
            // Σ a_z ≤ h_∞(m)
            for w in self.divisor.coefficient(&CurvePoint::Infinity).vertices() {
                let mut row: Vec<Rat> = w.coords().to_vec();
                row.extend((0..k).map(|_| -Rat::one()));
                rows.push(LatticeVector::new(linalg::primitive_int(&row)));
            }
        }
        rows.retain(|r| !r.is_zero());
        let equations: Vec<LatticeVector> = face.iter().map(|rho| pad(rho, k)).collect();
        let cone = Cone::from_inequalities(Side::M, dim, &rows, &equations)?;
        let exps: Vec<Vec<i64>> = semigroup_generators(&cone, None)
            .iter()
            .map(|g| g.to_i64_vec().expect("small generator"))
            .collect();
        let kept = self.prune_products(exps, &points, bound)?;
        kept.iter()
            .map(|e| {
                let m = LatticeVector::from_i64(&e[..n]);
                let f = points
                    .iter()
                    .zip(&e[n..])
                    .fold(RatFn::one(), |acc, (z, a)| acc.mul(&RatFn::linear_power(z, *a)));
                self.element(m, Section::Rational(f))
            })
            .collect()
    }

    /// Drops exponent vectors whose function lies in the span of products of
    /// kept ones in the same degree. A first pass by increasing height keeps
    /// the search small; a second pass by decreasing weight removes what the
    /// first order missed.
    fn prune_products(&self, mut exps: Vec<Vec<i64>>, points: &[Rat], bound: usize) -> Result<Vec<Vec<i64>>> {
        let n = self.rank();
        let facets: Vec<Vec<i64>> = self
            .divisor
            .sigma()
            .rays()
            .iter()
            .map(|r| r.to_i64_vec().expect("small ray"))
            .collect();
        let height = |e: &Vec<i64>| -> i64 {
            facets
                .iter()
                .map(|f| f.iter().zip(&e[..n]).map(|(c, x)| c * x).sum::<i64>())
                .sum()
        };
        let weight = |e: &Vec<i64>| e.iter().map(|x| x.abs()).sum::<i64>();
        exps.sort_by_key(|e| (height(e), weight(e), e.clone()));
        let mut kept: Vec<Vec<i64>> = Vec::new();
        for g in exps {
            if !self.spanned_by_products(&kept, &g, points, &facets, bound)? {
                kept.push(g);
            }
        }
        kept.sort_by(|a, b| weight(b).cmp(&weight(a)).then_with(|| b.cmp(a)));
        for g in kept.clone() {
            let others: Vec<Vec<i64>> = kept.iter().filter(|e| **e != g).cloned().collect();
            if self.spanned_by_products(&others, &g, points, &facets, bound)? {
                kept = others;
            }
        }
        kept.sort();
        Ok(kept)
    }

    /// Whether the function of `g` is a combination of products of `gens`
    /// with at most `bound` factors landing in the degree of `g`.
    fn spanned_by_products(
        &self,
        gens: &[Vec<i64>],
        g: &[i64],
        points: &[Rat],
        facets: &[Vec<i64>],
        bound: usize,
    ) -> Result<bool> {
        let n = self.rank();
        let m = &g[..n];
        let mut found: BTreeSet<Vec<i64>> = BTreeSet::new();
        let search = ProductSearch {
            gens,
            target: m,
            facets,
        };
        search.collect(0, bound, &mut vec![0i64; g.len()], &mut found);
        if found.is_empty() {
            return Ok(false);
        }
        let d = self.floor_divisor(&LatticeVector::from_i64(m))?;
        let floors: Vec<i64> = points
            .iter()
            .map(|z| {
                d.coefficient(&CurvePoint::Scalar(z.clone()))
                    .to_integer()
                    .to_i64()
                    .expect("small")
            })
            .collect();
        let as_poly = |e: &[i64]| -> Poly {
            points.iter().zip(e).zip(&floors).fold(Poly::one(), |acc, ((z, a), c)| {
                let k = a + c;
                assert!(k >= 0, "exponent inside the admissible cone");
                acc.mul(&Poly::linear(z).pow(k as u32))
            })
        };
        let polys: Vec<Poly> = found.iter().map(|e| as_poly(&e[n..])).collect();
        Ok(in_span(&polys, &as_poly(&g[n..])))
    }

    fn genus_one_generators(&self) -> Result<Vec<HomogeneousElement>> {
        let n = self.rank();
        let support = self.divisor.support();
        if support.len() > 1 {
            return Err(Error::UnsupportedCurve(
                "genus-one generators need a divisor supported at one point".into(),
            ));
        }
        let dim = n + 2;
        let mut rows = self.sigma_rows(2);
        rows.push(LatticeVector::unit(dim, n));
        rows.push(LatticeVector::unit(dim, n + 1));
        let vertices: Vec<RationalVector> = match support.first() {
            Some(p) => self.divisor.coefficient(p).vertices().to_vec(),
            None => vec![RationalVector::zero(n)],
        };
        for v in &vertices {
            // 2i + 3j ≤ ⟨m, v⟩
            let mut row: Vec<Rat> = v.coords().to_vec();
            row.push(Rat::from_integer((-2).into()));
            row.push(Rat::from_integer((-3).into()));
            rows.push(LatticeVector::new(linalg::primitive_int(&row)));
        }
        let cone = Cone::from_inequalities(Side::M, dim, &rows, &[])?;
        semigroup_generators(&cone, None)
            .iter()
            .map(|g| {
                let e = g.to_i64_vec().expect("small generator");
                let f = WeierstrassPoly::monomial(Rat::one(), e[n] as u32, e[n + 1] as u32);
                self.element(LatticeVector::from_i64(&e[..n]), Section::Weierstrass(f))
            })
            .collect()
    }
}

fn pad(v: &LatticeVector, extra: usize) -> LatticeVector {
    let mut c = v.coords().to_vec();
    c.extend((0..extra).map(|_| num_bigint::BigInt::zero()));
    LatticeVector::new(c)
}

/// Multisets of generators whose degrees sum to `target`.
struct ProductSearch<'a> {
    gens: &'a [Vec<i64>],
    target: &'a [i64],
    facets: &'a [Vec<i64>],
}

impl ProductSearch<'_> {
    fn collect(&self, start: usize, remaining: usize, acc: &mut Vec<i64>, found: &mut BTreeSet<Vec<i64>>) {
        let n = self.target.len();
        if acc[..n] == *self.target {
            found.insert(acc.clone());
        }
        if remaining == 0 {
            return;
        }
        for i in start..self.gens.len() {
            for (a, g) in acc.iter_mut().zip(&self.gens[i]) {
                *a += g;
            }
            // the remaining degree must stay in the weight cone
            let feasible = self.facets.iter().all(|f| {
                f.iter()
                    .zip(self.target.iter().zip(&acc[..n]))
                    .map(|(c, (t, a))| c * (t - a))
                    .sum::<i64>()
                    >= 0
            });
            if feasible {
                self.collect(i, remaining - 1, acc, found);
            }
            for (a, g) in acc.iter_mut().zip(&self.gens[i]) {
                *a -= g;
            }
        }
    }
}

fn in_span(polys: &[Poly], target: &Poly) -> bool {
    let width = polys
        .iter()
        .chain(std::iter::once(target))
        .filter_map(|p| p.degree())
        .max()
        .map_or(0, |d| d + 1);
    let row = |p: &Poly| -> Vec<Rat> {
        (0..width)
            .map(|i| p.coeffs().get(i).cloned().unwrap_or_else(Rat::zero))
            .collect()
    };
    let mut rows: Vec<Vec<Rat>> = polys.iter().map(row).collect();
    let before = linalg::rank(&rows, width);
    rows.push(row(target));
    linalg::rank(&rows, width) == before
}

impl HomogeneousElement {
    pub fn degree(&self) -> &LatticeVector {
        &self.degree
    }

    pub fn section(&self) -> &Section {
        &self.section
    }

    pub fn is_zero(&self) -> bool {
        self.section.is_zero()
    }

    pub fn scale(&self, k: &Rat) -> Self {
        Self {
            degree: self.degree.clone(),
            section: self.section.scale(k),
        }
    }

    /// Whether `other = c · self` for a nonzero scalar `c`.
    pub fn proportional_to(&self, other: &Self) -> bool {
        if self.degree != other.degree || self.is_zero() != other.is_zero() {
            return false;
        }
        if self.is_zero() {
            return true;
        }
        match (&self.section, &other.section) {
            (Section::Rational(a), Section::Rational(b)) => {
                let q = b.mul(&a.inverse().expect("nonzero"));
                q.is_constant()
            }
            (Section::Weierstrass(a), Section::Weierstrass(b)) => {
                let (Some((_, ca)), Some((_, cb))) = (a.terms().next(), b.terms().next()) else {
                    return false;
                };
                a.scale(&(cb / ca)) == *b
            }
            _ => false,
        }
    }
}

impl fmt::Display for HomogeneousElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let s = self.section.to_string();
        if s == "1" {
            write!(f, "χ^{}", self.degree)
        } else if s == "-1" {
            write!(f, "-χ^{}", self.degree)
        } else {
            write!(f, "{s} χ^{}", self.degree)
        }
    }
}
