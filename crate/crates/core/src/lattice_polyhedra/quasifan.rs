use itertools::Itertools;

use super::Cone;
use crate::error::{Error, Result};

/// A collection of maximal cones covering a common support cone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quasifan {
    support: Cone,
    maximal_cones: Vec<Cone>,
}

impl Quasifan {
    pub fn new(support: Cone, mut maximal_cones: Vec<Cone>) -> Self {
        maximal_cones.sort_by(|a, b| {
            (a.rays(), a.lineality_basis()).cmp(&(b.rays(), b.lineality_basis()))
        });
        maximal_cones.dedup();
        Self {
            support,
            maximal_cones,
        }
    }

    pub fn support(&self) -> &Cone {
        &self.support
    }

    pub fn maximal_cones(&self) -> &[Cone] {
        &self.maximal_cones
    }

    /// Index of the first maximal cone containing a relative interior point of `c`.
    pub fn cone_containing(&self, c: &Cone) -> Option<usize> {
        let p = c.relative_interior_point();
        self.maximal_cones.iter().position(|m| m.contains(&p))
    }
}

/// Coarsest common refinement: all full-dimensional intersections of one
/// maximal cone from each input.
pub fn common_refinement(fans: &[Quasifan]) -> Result<Quasifan> {
    let Some(first) = fans.first() else {
        return Err(Error::InvalidInput("no quasifans to refine".into()));
    };
    if fans.iter().any(|f| f.support != first.support) {
        return Err(Error::SupportMismatch);
    }
    let dim = first.support.dim();
    let mut cones: Vec<Cone> = first.maximal_cones.clone();
    for fan in &fans[1..] {
        cones = cones
            .iter()
            .cartesian_product(&fan.maximal_cones)
            .map(|(a, b)| a.intersect(b))
            .filter(|c| c.dim() == dim)
            .collect();
    }
    Ok(Quasifan::new(first.support.clone(), cones))
}
