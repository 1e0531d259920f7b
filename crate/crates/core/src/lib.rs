//! Exact norms of quadratic algebras along free finite-rank ring extensions.

pub mod algebra;
pub mod arith;
pub mod descent;
pub mod error;
pub mod hom;
pub mod json;
pub mod linalg;
pub mod norm;
pub mod poly;
pub mod quadratic;
pub mod random;
pub mod ring;

pub use algebra::{AlgebraElement, FreeRankNAlgebra};
pub use error::{Error, HomEquation, Result};
pub use hom::RingHom;
pub use linalg::Matrix;
pub use norm::{norm_hom, norm_quad, norm_tower_check, norm_tower_check_hom, Extension, Tower};
pub use quadratic::{find_isomorphism, BasedQuadratic, QuadHom};
pub use ring::{Elem, Ring, RingElement, RingKind};
pub use descent::{
    check_disc_compatibility, det_bundle, disc_form, globalize, glue_norm, line_norm, refine,
    Cover, Globalized, Layer, LineDescentDatum, QuadDescentDatum,
};
