//! Positive definite binary quadratic forms and their class groups.

mod classnum;
mod disc;
mod form;
mod group;

pub use classnum::{
    class_number, class_number_dirichlet, reduced_forms, MAX_DIRICHLET_DISC, MAX_ENUM_DISC,
};
pub use disc::Disc;
pub use form::{reduce, QuadForm};
pub use group::{
    class_order, compose, pic_localized, prime_form, FormClassGroup, TABLE_LIMIT,
};
