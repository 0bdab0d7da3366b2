pub mod decider;
pub mod diophantine;
pub mod format;
pub mod invariant;
pub mod mrgs;
pub mod presburger;
pub mod semilinear;
pub mod vas;
