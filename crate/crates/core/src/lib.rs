//! Exact-arithmetic game-theoretic analysis of two-party cryptographic
//! protocols.
//!
//! Protocols are encoded as payoff models (event atoms with additive income
//! and expense rules) plus finite one-shot strategic games over them. The
//! crate checks payoff-ordering chains, fairness implications and Nash
//! equilibrium claims over seeded samples of constraint-satisfying
//! parameters, with every comparison done in exact rational arithmetic.

pub mod analysis;
pub mod audit;
pub mod catalog;
pub mod claims;
pub mod error;
pub mod exec;
pub mod expr;
pub mod game;
pub mod gamespec;
pub mod model;
pub mod rational;
pub mod sampler;

pub use catalog::{get_protocol, list_protocols, ProtocolEntry};
pub use claims::{ChainClaim, Claim, ClaimKind, Expectation, FairnessImplication, Measure, NashClaim, Preference, Property, Separator};
pub use error::{Error, Result};
pub use exec::Exec;
pub use expr::{check_constraints, eval_expr, Constraint, ConstraintVerdict, Expr, Param, ParamRole, ParamSet, Relation};
pub use game::{
    classify, dominance, equilibria, expected_payoff, is_nash, ActionSet, BoundGame, Classification, Dominance, GameKind,
    NashVerdict, OutcomeDistribution, Profile, StrategicGame,
};
pub use model::{enumerate_outcomes, payoff, payoff_spectrum, BoundModel, EventAtom, ModelParts, Outcome, Party, PayoffModel, PayoffRule, RuleKind};
pub use rational::Rational;
pub use sampler::{sample_params, sample_params_with, SamplerBounds, SamplerConfig};
