//! Cones, tailed polyhedra, support functions, quasifans and Hilbert bases
//! over an exact lattice.

mod cone;
mod hilbert;
mod polyhedron;
mod quasifan;

use serde::{Deserialize, Serialize};

pub use cone::{dual_cone, dual_face, extremal_rays, max_subspace, Cone};
pub use hilbert::{
    hilbert_basis, in_lattice, in_monoid, integral_sublattice, semigroup_generators,
    sublattice_index,
};
pub use polyhedron::{minkowski_sum, support_function, SupportFunction, TailedPolyhedron};
pub use quasifan::{common_refinement, Quasifan};

/// Which of the two dual lattices a cone lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Side {
    M,
    N,
}

impl Side {
    pub fn opposite(self) -> Self {
        match self {
            Side::M => Side::N,
            Side::N => Side::M,
        }
    }
}
