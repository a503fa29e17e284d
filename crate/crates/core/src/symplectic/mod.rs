//! Symplectic linear algebra on first homology over `Z` and `Z/2`.

pub mod form;
pub mod genus;
pub mod group;
pub mod int;
pub mod z2;

pub use form::{arf, enumerate_forms, preserves_form, quad_eval, QuadForm};
pub use genus::{Genus, MAX_GENUS};
pub use group::{
    all_transvections, bfs_closure, form_transvections, generating_transvections, orthogonal_group,
    orthogonal_group_order, symplectic_group_order, transvection_subgroup_order, Closure,
};
pub use int::{intersection_int, square_transvection, transvection_power, Matrix, Vector};
pub use z2::{intersection_mod2, transvection_mod2, Z2Matrix, Z2Vec};
