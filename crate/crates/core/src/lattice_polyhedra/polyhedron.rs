use std::fmt;

use num_traits::{One, Signed, Zero};

use super::{Cone, Quasifan, Side};
use crate::error::{Error, Result};
use crate::linalg::primitive_int;
use crate::rational::{LatticeVector, LinearForm, Rat, RationalVector};

/// A polyhedron `conv(vertices) + tail` with a pointed tail cone.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TailedPolyhedron {
    vertices: Vec<RationalVector>,
    tail: Cone,
    /// Homogenization `cone((v,1), (r,0))`, kept for membership tests.
    homogenized: Cone,
}

fn homogenize(v: &RationalVector) -> LatticeVector {
    let mut c: Vec<Rat> = v.coords().to_vec();
    c.push(Rat::one());
    LatticeVector::new(primitive_int(&c))
}

impl TailedPolyhedron {
    /// Builds the polyhedron, discarding redundant vertices.
    pub fn new(vertices: Vec<RationalVector>, tail: Cone) -> Result<Self> {
        if !tail.is_pointed() {
            return Err(Error::NotPointed);
        }
        if vertices.is_empty() {
            return Err(Error::InvalidInput("polyhedron needs at least one vertex".into()));
        }
        let n = tail.ambient_dim();
        if let Some(v) = vertices.iter().find(|v| v.dim() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: v.dim(),
            });
        }
        let mut gens: Vec<LatticeVector> = vertices.iter().map(homogenize).collect();
        gens.extend(tail.rays().iter().map(|r| {
            let mut c = r.coords().to_vec();
            c.push(Zero::zero());
            LatticeVector::new(c)
        }));
        let homogenized = Cone::from_generators(Side::N, n + 1, &gens, &[])?;
        let mut verts: Vec<RationalVector> = homogenized
            .rays()
            .iter()
            .filter(|g| g.coords()[n].is_positive())
            .map(|g| {
                let h = Rat::from_integer(g.coords()[n].clone());
                RationalVector::new(
                    g.coords()[..n]
                        .iter()
                        .map(|c| Rat::from_integer(c.clone()) / &h)
                        .collect(),
                )
            })
            .collect();
        verts.sort();
        Ok(Self {
            vertices: verts,
            tail,
            homogenized,
        })
    }

    /// `p + tail`.
    pub fn translate_of_tail(p: RationalVector, tail: Cone) -> Result<Self> {
        Self::new(vec![p], tail)
    }

    /// `self + p`.
    pub fn translate(&self, p: &RationalVector) -> Self {
        let verts = self.vertices.iter().map(|v| v.add(p)).collect();
        Self::new(verts, self.tail.clone()).expect("translation keeps the tail")
    }

    /// The neutral element `tail` itself.
    pub fn tail_only(tail: Cone) -> Self {
        let n = tail.ambient_dim();
        Self::new(vec![RationalVector::zero(n)], tail).expect("pointed tail")
    }

    pub fn vertices(&self) -> &[RationalVector] {
        &self.vertices
    }

    pub fn tail(&self) -> &Cone {
        &self.tail
    }

    pub fn ambient_dim(&self) -> usize {
        self.tail.ambient_dim()
    }

    /// Whether the polyhedron equals its tail cone.
    pub fn is_tail(&self) -> bool {
        self.vertices.len() == 1 && self.vertices[0].is_zero()
    }

    pub fn contains(&self, x: &RationalVector) -> bool {
        let mut c = x.coords().to_vec();
        c.push(Rat::one());
        self.homogenized.contains_rational(&RationalVector::new(c))
    }

    /// Whether every point lies in the relative interior of the tail cone.
    pub fn inside_relative_interior_of_tail(&self) -> bool {
        self.vertices
            .iter()
            .all(|v| self.tail.contains_in_relative_interior(v))
    }

    /// Whether the polyhedron meets the ray `ℚ≥0·ray`.
    pub fn meets_ray(&self, ray: &LatticeVector) -> bool {
        let n = self.ambient_dim();
        // constraints a·(λρ) + b ≥ 0 (or = 0) with λ ≥ 0
        let mut lo = Rat::zero();
        let mut hi: Option<Rat> = None;
        let mut fixed: Option<Rat> = None;
        let eval = |g: &LatticeVector| -> (Rat, Rat) {
            let slope: Rat = g.coords()[..n]
                .iter()
                .zip(ray.coords())
                .fold(Rat::zero(), |acc, (a, r)| acc + Rat::from_integer(a * r));
            (slope, Rat::from_integer(g.coords()[n].clone()))
        };
        for f in self.homogenized.facets() {
            let (s, b) = eval(f);
            if s.is_zero() {
                if b.is_negative() {
                    return false;
                }
            } else if s.is_positive() {
                let bound = -b / s;
                if bound > lo {
                    lo = bound;
                }
            } else {
                let bound = -b / s;
                hi = Some(match hi {
                    Some(h) if h < bound => h,
                    _ => bound,
                });
            }
        }
        for e in self.homogenized.equations() {
            let (s, b) = eval(e);
            if s.is_zero() {
                if !b.is_zero() {
                    return false;
                }
            } else {
                let val = -b / s;
                if let Some(f) = &fixed {
                    if *f != val {
                        return false;
                    }
                }
                fixed = Some(val);
            }
        }
        match fixed {
            Some(f) => f >= lo && hi.map_or(true, |h| f <= h),
            None => hi.map_or(true, |h| lo <= h),
        }
    }

    /// `min ⟨m, v⟩` over the vertices, for `m` in the dual of the tail.
    pub fn evaluate_support(&self, m: &LatticeVector) -> Result<Rat> {
        if !self.tail.dual().contains(m) {
            return Err(Error::OutsideWeightCone(m.to_string()));
        }
        Ok(self.min_pairing(&m.to_rational()))
    }

    fn min_pairing(&self, m: &RationalVector) -> Rat {
        self.vertices
            .iter()
            .map(|v| v.dot(m))
            .min()
            .expect("at least one vertex")
    }

    /// Normal cone of a vertex: the weights whose minimum is attained there.
    pub fn normal_cone(&self, vertex: &RationalVector) -> Cone {
        let n = self.ambient_dim();
        let mut ineqs: Vec<LatticeVector> = self.tail.rays().to_vec();
        for w in &self.vertices {
            if w != vertex {
                ineqs.push(LatticeVector::new(primitive_int(w.sub(vertex).coords())));
            }
        }
        Cone::from_inequalities(Side::M, n, &ineqs, &[]).expect("consistent dimensions")
    }
}

impl fmt::Display for TailedPolyhedron {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "conv{{")?;
        for (i, v) in self.vertices.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}} + {}", self.tail)
    }
}

impl fmt::Debug for TailedPolyhedron {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A piecewise linear function on a cone of weights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportFunction {
    domain: Cone,
    pieces: Vec<(Cone, LinearForm)>,
}

impl SupportFunction {
    pub fn domain(&self) -> &Cone {
        &self.domain
    }

    pub fn pieces(&self) -> &[(Cone, LinearForm)] {
        &self.pieces
    }

    pub fn evaluate(&self, m: &LatticeVector) -> Result<Rat> {
        self.evaluate_rational(&m.to_rational())
    }

    pub fn evaluate_rational(&self, m: &RationalVector) -> Result<Rat> {
        self.pieces
            .iter()
            .find(|(c, _)| c.contains_rational(m))
            .map(|(_, g)| g.eval_rational(m))
            .ok_or_else(|| Error::OutsideWeightCone(m.to_string()))
    }

    /// The linear piece on a cone, if the function is linear there.
    pub fn linear_piece_on(&self, cone: &Cone) -> Option<LinearForm> {
        let probe = cone.relative_interior_point().to_rational();
        let (_, g) = self
            .pieces
            .iter()
            .find(|(c, _)| c.contains_rational(&probe))?;
        let linear = cone
            .rays()
            .iter()
            .cloned()
            .chain(cone.lineality_basis().iter().flat_map(|r| [r.clone(), r.neg()]))
            .all(|r| self.evaluate(&r).ok() == Some(g.eval(&r)));
        linear.then(|| g.clone())
    }

    /// The normal quasifan: the maximal cones of linearity.
    pub fn quasifan(&self) -> Quasifan {
        Quasifan::new(self.domain.clone(), self.pieces.iter().map(|(c, _)| c.clone()).collect())
    }
}

/// `h(m) = min ⟨m, Δ⟩` with one linear piece per vertex.
pub fn support_function(p: &TailedPolyhedron) -> SupportFunction {
    let mut pieces: Vec<(Cone, LinearForm)> = p
        .vertices
        .iter()
        .map(|v| (p.normal_cone(v), LinearForm::new(v.clone())))
        .filter(|(c, _)| c.is_full_dimensional())
        .collect();
    pieces.sort_by(|a, b| a.0.rays().cmp(b.0.rays()));
    SupportFunction {
        domain: p.tail.dual(),
        pieces,
    }
}

/// Minkowski sum of two polyhedra with a common tail.
pub fn minkowski_sum(a: &TailedPolyhedron, b: &TailedPolyhedron) -> Result<TailedPolyhedron> {
    if a.tail != b.tail {
        return Err(Error::TailMismatch);
    }
    let verts = a
        .vertices
        .iter()
        .flat_map(|u| b.vertices.iter().map(move |v| u.add(v)))
        .collect();
    TailedPolyhedron::new(verts, a.tail.clone())
}
