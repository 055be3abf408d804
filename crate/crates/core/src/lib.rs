//! Propositional team logic with inquisitive disjunction: a brute-force team
//! semantics, the deep-inference sequent calculus GT (and its variant GT′),
//! a decision procedure that yields cutfree derivations or countermodels,
//! proof transformations and sequent interpolation.

pub mod calculus;
pub mod interpolation;
pub mod prover;
pub mod resolutions;
pub mod semantics;
pub mod sequent;
pub mod syntax;
pub mod testgen;
pub mod transforms;

pub use calculus::{check_derivation, check_inference, Derivation, RuleApp};
pub use sequent::{parse_sequent, Multiset, ParsedSequent, PartitionSequent, Sequent};
pub use syntax::{parse_formula, Choice, Formula, OccurrencePath, Side, Var};
