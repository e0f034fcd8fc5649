use std::fmt;

use itertools::Itertools;
use num_traits::{Signed, Zero};

use super::Side;
use crate::error::{Error, Result};
use crate::linalg::{self, int_dot, primitive_int, to_rat_row, IntRow, RatRow};
use crate::rational::{LatticeVector, Rat, RationalVector};

/// A rational polyhedral cone in double description.
///
/// `rays` are primitive and orthogonal to the lineality space; `facets` are
/// primitive and lie in the linear span of the cone. Lineality and equation
/// bases are in Hermite normal form, so equal cones compare equal field-wise.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Cone {
    side: Side,
    ambient: usize,
    rays: Vec<LatticeVector>,
    lineality: Vec<LatticeVector>,
    facets: Vec<LatticeVector>,
    equations: Vec<LatticeVector>,
}

/// Generators `(rays, lineality)` of `{x : ineqs·x ≥ 0, eqs·x = 0}`.
fn generators_of(ineqs: &[IntRow], eqs: &[IntRow], n: usize) -> (Vec<IntRow>, Vec<IntRow>) {
    let all: Vec<IntRow> = ineqs.iter().chain(eqs).cloned().collect();
    let all_rat: Vec<RatRow> = all.iter().map(|r| to_rat_row(r)).collect();
    let lin_rat = linalg::nullspace(&all_rat, n);
    let lin_int: Vec<IntRow> = lin_rat.iter().map(|v| primitive_int(v)).collect();
    let lin = if lin_int.is_empty() {
        Vec::new()
    } else {
        linalg::saturated_basis(&lin_int, n)
    };

    // reduced space: solutions of the equations orthogonal to the lineality
    let mut cut: Vec<RatRow> = eqs.iter().map(|r| to_rat_row(r)).collect();
    cut.extend(lin.iter().map(|r| to_rat_row(r)));
    let basis = linalg::nullspace(&cut, n);
    let k = basis.len();
    if k == 0 {
        return (Vec::new(), lin);
    }
    let rows: Vec<RatRow> = ineqs
        .iter()
        .map(|a| {
            let a = to_rat_row(a);
            basis.iter().map(|b| linalg::dot(&a, b)).collect::<RatRow>()
        })
        .filter(|r: &RatRow| r.iter().any(|x| !x.is_zero()))
        .unique()
        .collect();

    let satisfies = |x: &RatRow| rows.iter().all(|r| !linalg::dot(r, x).is_negative());
    let mut rays: Vec<IntRow> = Vec::new();
    for subset in (0..rows.len()).combinations(k - 1) {
        let sub: Vec<RatRow> = subset.iter().map(|&i| rows[i].clone()).collect();
        let ns = linalg::nullspace(&sub, k);
        if ns.len() != 1 {
            continue;
        }
        let x = &ns[0];
        let neg: RatRow = x.iter().map(|q| -q).collect();
        for cand in [x, &neg] {
            if satisfies(cand) {
                let full: RatRow = (0..n)
                    .map(|i| {
                        basis
                            .iter()
                            .zip(cand)
                            .fold(Rat::zero(), |acc, (b, c)| acc + &b[i] * c)
                    })
                    .collect();
                rays.push(primitive_int(&full));
            }
        }
    }
    rays.sort();
    rays.dedup();
    (rays, lin)
}

fn to_vectors(rows: Vec<IntRow>) -> Vec<LatticeVector> {
    rows.into_iter().map(LatticeVector::new).collect()
}

fn to_rows(vs: &[LatticeVector]) -> Vec<IntRow> {
    vs.iter().map(|v| v.coords().to_vec()).collect()
}

impl Cone {
    /// The cone `{x : ineqs·x ≥ 0, eqs·x = 0}`.
    pub fn from_inequalities(
        side: Side,
        ambient: usize,
        ineqs: &[LatticeVector],
        eqs: &[LatticeVector],
    ) -> Result<Self> {
        for v in ineqs.iter().chain(eqs) {
            check_dim(ambient, v.dim())?;
        }
        let (rays, lin) = generators_of(&to_rows(ineqs), &to_rows(eqs), ambient);
        let (facets, equations) = generators_of(&rays, &lin, ambient);
        Ok(Self {
            side,
            ambient,
            rays: to_vectors(rays),
            lineality: to_vectors(lin),
            facets: to_vectors(facets),
            equations: to_vectors(equations),
        })
    }

    /// The cone generated by `gens` and the linear span of `lineality`.
    pub fn from_generators(
        side: Side,
        ambient: usize,
        gens: &[LatticeVector],
        lineality: &[LatticeVector],
    ) -> Result<Self> {
        for v in gens.iter().chain(lineality) {
            check_dim(ambient, v.dim())?;
        }
        let (facets, equations) = generators_of(&to_rows(gens), &to_rows(lineality), ambient);
        let (rays, lin) = generators_of(&facets, &equations, ambient);
        Ok(Self {
            side,
            ambient,
            rays: to_vectors(rays),
            lineality: to_vectors(lin),
            facets: to_vectors(facets),
            equations: to_vectors(equations),
        })
    }

    /// Convenience constructor from small integer generators.
    pub fn generated_by(side: Side, gens: &[&[i64]]) -> Result<Self> {
        let ambient = gens.first().map_or(0, |g| g.len());
        let gens: Vec<LatticeVector> = gens.iter().map(|g| LatticeVector::from_i64(g)).collect();
        Self::from_generators(side, ambient, &gens, &[])
    }

    /// The cone `{0}`.
    pub fn origin(side: Side, ambient: usize) -> Self {
        Self::from_generators(side, ambient, &[], &[]).expect("no vectors to check")
    }

    /// The whole space.
    pub fn full_space(side: Side, ambient: usize) -> Self {
        Self::from_inequalities(side, ambient, &[], &[]).expect("no vectors to check")
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn rays(&self) -> &[LatticeVector] {
        &self.rays
    }

    pub fn lineality_basis(&self) -> &[LatticeVector] {
        &self.lineality
    }

    /// Inward facet normals, living in the dual lattice.
    pub fn facets(&self) -> &[LatticeVector] {
        &self.facets
    }

    /// Basis of the linear forms vanishing on the cone.
    pub fn equations(&self) -> &[LatticeVector] {
        &self.equations
    }

    pub fn dim(&self) -> usize {
        self.ambient - self.equations.len()
    }

    pub fn lineality_dim(&self) -> usize {
        self.lineality.len()
    }

    pub fn is_pointed(&self) -> bool {
        self.lineality.is_empty()
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.equations.is_empty()
    }

    pub fn is_origin(&self) -> bool {
        self.rays.is_empty() && self.lineality.is_empty()
    }

    /// Generators of the dual cone with the opposite side tag.
    pub fn dual(&self) -> Self {
        Self {
            side: self.side.opposite(),
            ambient: self.ambient,
            rays: self.facets.clone(),
            lineality: self.equations.clone(),
            facets: self.rays.clone(),
            equations: self.lineality.clone(),
        }
    }

    pub fn contains(&self, x: &LatticeVector) -> bool {
        self.facets.iter().all(|f| !int_dot(f.coords(), x.coords()).is_negative())
            && self.equations.iter().all(|e| int_dot(e.coords(), x.coords()).is_zero())
    }

    pub fn contains_rational(&self, x: &RationalVector) -> bool {
        self.facets.iter().all(|f| !f.pair(x).is_negative())
            && self.equations.iter().all(|e| e.pair(x).is_zero())
    }

    /// Membership in the relative interior.
    pub fn contains_in_relative_interior(&self, x: &RationalVector) -> bool {
        self.facets.iter().all(|f| f.pair(x).is_positive())
            && self.equations.iter().all(|e| e.pair(x).is_zero())
    }

    /// A lattice point in the relative interior (the sum of the rays).
    pub fn relative_interior_point(&self) -> LatticeVector {
        self.rays
            .iter()
            .fold(LatticeVector::zero(self.ambient), |acc, r| acc.add(r))
    }

    pub fn intersect(&self, other: &Self) -> Self {
        let ineqs: Vec<LatticeVector> = self.facets.iter().chain(&other.facets).cloned().collect();
        let eqs: Vec<LatticeVector> = self
            .equations
            .iter()
            .chain(&other.equations)
            .cloned()
            .collect();
        Self::from_inequalities(self.side, self.ambient, &ineqs, &eqs).expect("same ambient")
    }

    /// The face cut out by the supporting hyperplane `normal⊥`.
    pub fn face(&self, normal: &LatticeVector) -> Self {
        let mut eqs = self.equations.clone();
        eqs.push(normal.clone());
        Self::from_inequalities(self.side, self.ambient, &self.facets, &eqs).expect("same ambient")
    }

    /// Whether `self` is a face of `other`.
    pub fn is_face_of(&self, other: &Self) -> bool {
        if !self.rays.iter().chain(&self.lineality).all(|r| other.contains(r)) {
            return false;
        }
        let dual = other.dual();
        let normal = self.relative_interior_point_of_dual_face(&dual);
        other.face(&normal) == *self
    }

    fn relative_interior_point_of_dual_face(&self, dual: &Self) -> LatticeVector {
        let orth: Vec<LatticeVector> = dual
            .rays
            .iter()
            .filter(|g| {
                self.rays
                    .iter()
                    .chain(&self.lineality)
                    .all(|r| int_dot(g.coords(), r.coords()).is_zero())
            })
            .cloned()
            .collect();
        orth.iter().fold(LatticeVector::zero(self.ambient), |acc, r| acc.add(r))
    }
}

fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

/// The dual cone `{w : ⟨m,w⟩ ≥ 0 for all m ∈ c}`.
pub fn dual_cone(c: &Cone) -> Cone {
    c.dual()
}

/// Primitive generators of the one-dimensional faces (modulo lineality).
pub fn extremal_rays(c: &Cone) -> Vec<LatticeVector> {
    c.rays.clone()
}

/// The face of the dual cone orthogonal to an extremal ray of `c`.
pub fn dual_face(c: &Cone, ray: &LatticeVector) -> Result<Cone> {
    check_dim(c.ambient, ray.dim())?;
    let prim = ray.primitive();
    if !c.is_pointed() || !c.rays.contains(&prim) {
        return Err(Error::NotExtremalRay(ray.to_string()));
    }
    Ok(c.dual().face(&prim))
}

/// The lineality space `c ∩ (−c)`.
pub fn max_subspace(c: &Cone) -> Cone {
    Cone::from_generators(c.side, c.ambient, &[], &c.lineality).expect("same ambient")
}

impl fmt::Display for Cone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cone(")?;
        let mut first = true;
        for r in &self.rays {
            if !first {
                write!(f, ", ")?;
            }
            write!(f, "{r}")?;
            first = false;
        }
        for l in &self.lineality {
            if !first {
                write!(f, ", ")?;
            }
            write!(f, "±{l}")?;
            first = false;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for Cone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lv(c: &[i64]) -> LatticeVector {
        LatticeVector::from_i64(c)
    }

    fn quadric_sigma() -> Cone {
        Cone::generated_by(Side::N, &[&[1, 0, 0], &[0, 1, 0], &[1, 0, 1], &[0, 1, 1]]).unwrap()
    }

    #[test]
    fn quadric_dual_rays() {
        let dual = dual_cone(&quadric_sigma());
        let mut expected = vec![lv(&[1, 0, 0]), lv(&[0, 1, 0]), lv(&[0, 0, 1]), lv(&[1, 1, -1])];
        expected.sort();
        assert_eq!(dual.rays(), expected.as_slice());
        assert_eq!(dual.side(), Side::M);
    }

    #[test]
    fn dual_of_origin_is_everything() {
        let o = Cone::origin(Side::M, 2);
        let d = dual_cone(&o);
        assert_eq!(d, Cone::full_space(Side::N, 2));
        assert_eq!(d.lineality_dim(), 2);
    }

    #[test]
    fn dual_of_narrow_cone_matches_brute_force() {
        let c = Cone::generated_by(Side::N, &[&[2, 1], &[1, 2]]).unwrap();
        let d = dual_cone(&c);
        assert_eq!(d.rays(), &[lv(&[-1, 2]), lv(&[2, -1])]);
        for a in -6..=6 {
            for b in -6..=6 {
                let w = lv(&[a, b]);
                let brute = c.rays().iter().all(|r| !r.dot(&w).is_negative());
                assert_eq!(d.contains(&w), brute, "{w}");
            }
        }
    }

    #[test]
    fn double_dual_is_identity() {
        let c = Cone::generated_by(Side::N, &[&[1, 0], &[1, 1], &[1, 2]]).unwrap();
        assert_eq!(dual_cone(&dual_cone(&c)), c);
        assert_eq!(extremal_rays(&c), vec![lv(&[1, 0]), lv(&[1, 2])]);
    }

    #[test]
    fn dual_face_of_quadric() {
        let f = dual_face(&quadric_sigma(), &lv(&[1, 0, 0])).unwrap();
        assert_eq!(f.rays(), &[lv(&[0, 0, 1]), lv(&[0, 1, 0])]);
        assert!(dual_face(&quadric_sigma(), &lv(&[1, 1, 0])).is_err());
    }

    #[test]
    fn dual_face_in_rank_one() {
        let sigma = Cone::generated_by(Side::N, &[&[1]]).unwrap();
        assert!(dual_face(&sigma, &lv(&[1])).unwrap().is_origin());
    }

    #[test]
    fn lineality_of_half_plane() {
        let h = Cone::from_inequalities(Side::M, 2, &[lv(&[0, 1])], &[]).unwrap();
        let l = max_subspace(&h);
        assert_eq!(l.lineality_basis(), &[lv(&[1, 0])]);
        assert!(l.rays().is_empty());
        let full = Cone::full_space(Side::M, 2);
        assert_eq!(max_subspace(&full), full);
        let pointed = dual_cone(&quadric_sigma());
        assert!(max_subspace(&pointed).is_origin());
    }

    #[test]
    fn faces_are_recognized() {
        let c = Cone::generated_by(Side::M, &[&[1, 0], &[0, 1]]).unwrap();
        let ray = Cone::generated_by(Side::M, &[&[1, 0]]).unwrap();
        let diag = Cone::generated_by(Side::M, &[&[1, 1]]).unwrap();
        assert!(ray.is_face_of(&c));
        assert!(!diag.is_face_of(&c));
        assert!(Cone::origin(Side::M, 2).is_face_of(&c));
    }
}
