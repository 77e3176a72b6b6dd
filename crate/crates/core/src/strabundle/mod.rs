//! Stratified bundles as face-poset functors: validation, restriction,
//! F-maps, attachment, pull-backs, fiberwise products, total complexes and
//! the push-out check.

mod attach;
mod bundle;
pub mod catalog;
mod map;
mod pullback;
mod pushout;
mod total;

pub use attach::{attach_bundle, BundleAttachment};
pub use bundle::{restrict, validate_bundle, BundleViolation, StratBundle};
pub use map::FBundleMap;
pub use pullback::{fiberwise_product, pullback};
pub use pushout::{pushout_universality_check, BundleSquare, PushoutCheck, PushoutWitness};
pub use total::{realize_map, realize_total, TotalComplex};
