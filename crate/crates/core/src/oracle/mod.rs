//! Random instance generation and the property suites run over it.

mod generate;
mod rng;
mod suite;
mod unfold;
mod verify;

pub use generate::{gen_bundle, gen_category, gen_instance, gen_pair, stream, Instance, InstanceSpec, Stage, MAX_MORPHISMS};
pub use rng::{Rng, RngInfo, RNG_INFO};
pub use suite::{run_seed, run_suite, SeedOutcome, Suite, SuiteConfig, SuiteReport};
pub use unfold::{unfold, UnfoldedStage, Unfolding};
pub use verify::{mutate, orbit_classes, verify_bundle, verify_principal, verify_pullback, Outcome};
