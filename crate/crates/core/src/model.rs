//! Event atoms, additive income/expense rules and the payoff model that
//! ties them to a universe of terminal outcomes.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::{check_constraints, Constraint, ConstraintVerdict, Expr, Param, ParamSet};
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Party {
    A,
    B,
}

impl Party {
    pub const BOTH: [Party; 2] = [Party::A, Party::B];

    pub fn other(self) -> Party {
        match self {
            Party::A => Party::B,
            Party::B => Party::A,
        }
    }

    pub fn index(self) -> usize {
        match self {
            Party::A => 0,
            Party::B => 1,
        }
    }
}

impl fmt::Display for Party {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Party::A => "A",
            Party::B => "B",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EventAtom {
    pub name: String,
    pub description: String,
    pub subject: Option<Party>,
}

impl EventAtom {
    pub fn new(name: impl Into<String>, description: impl Into<String>, subject: Option<Party>) -> Self {
        EventAtom {
            name: name.into(),
            description: description.into(),
            subject,
        }
    }
}

/// A terminal outcome: the set of atoms that hold. Every other atom is false.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Outcome(BTreeSet<String>);

impl Outcome {
    pub fn empty() -> Self {
        Outcome::default()
    }

    pub fn of<S: AsRef<str>>(atoms: &[S]) -> Self {
        Outcome(atoms.iter().map(|s| s.as_ref().to_string()).collect())
    }

    pub fn contains(&self, atom: &str) -> bool {
        self.0.contains(atom)
    }

    pub fn atoms(&self) -> impl Iterator<Item = &str> {
        self.0.iter().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn union(&self, other: &Outcome) -> Outcome {
        Outcome(self.0.union(&other.0).cloned().collect())
    }
}

impl<S: Into<String>> FromIterator<S> for Outcome {
    fn from_iter<I: IntoIterator<Item = S>>(iter: I) -> Self {
        Outcome(iter.into_iter().map(Into::into).collect())
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str(a)?;
        }
        f.write_str("}")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RuleKind {
    Income,
    Expense,
}

impl RuleKind {
    pub fn as_str(self) -> &'static str {
        match self {
            RuleKind::Income => "income",
            RuleKind::Expense => "expense",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PayoffRule {
    pub party: Party,
    pub kind: RuleKind,
    pub trigger: String,
    pub amount: Expr,
}

impl PayoffRule {
    pub fn income(party: Party, amount: Expr, trigger: &str) -> Self {
        PayoffRule {
            party,
            kind: RuleKind::Income,
            trigger: trigger.to_string(),
            amount,
        }
    }

    pub fn expense(party: Party, amount: Expr, trigger: &str) -> Self {
        PayoffRule {
            party,
            kind: RuleKind::Expense,
            trigger: trigger.to_string(),
            amount,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PayoffModel {
    name: String,
    party_names: [String; 2],
    params: Vec<Param>,
    constraints: Vec<Constraint>,
    atoms: Vec<EventAtom>,
    rules: Vec<PayoffRule>,
    outcomes: Vec<Outcome>,
}

/// Unvalidated model parts; [`PayoffModel::new`] checks them.
#[derive(Clone, Debug, Default)]
pub struct ModelParts {
    pub name: String,
    pub party_names: [String; 2],
    pub params: Vec<Param>,
    pub constraints: Vec<Constraint>,
    pub atoms: Vec<EventAtom>,
    pub rules: Vec<PayoffRule>,
    pub outcomes: Vec<Outcome>,
}

impl PayoffModel {
    pub fn new(parts: ModelParts) -> Result<Self> {
        let ModelParts {
            name,
            party_names,
            params,
            constraints,
            atoms,
            rules,
            outcomes,
        } = parts;
        let invalid = |msg: String| Err(Error::InvalidModel(msg));

        if party_names[0] == party_names[1] {
            return invalid(format!("party names must differ, both are `{}`", party_names[0]));
        }
        let mut seen = BTreeSet::new();
        for p in &params {
            if !seen.insert(p.name.as_str()) {
                return invalid(format!("duplicate parameter `{}`", p.name));
            }
        }
        let mut seen_atoms = BTreeSet::new();
        for a in &atoms {
            if !seen_atoms.insert(a.name.as_str()) {
                return invalid(format!("duplicate event `{}`", a.name));
            }
        }
        let check_expr = |e: &Expr, ctx: &str| -> Result<()> {
            for p in e.params() {
                if !seen.contains(p) {
                    return Err(Error::InvalidModel(format!("{ctx} references undeclared parameter `{p}`")));
                }
            }
            Ok(())
        };
        for c in &constraints {
            check_expr(&c.lhs, &format!("constraint `{c}`"))?;
            check_expr(&c.rhs, &format!("constraint `{c}`"))?;
        }
        for r in &rules {
            if !seen_atoms.contains(r.trigger.as_str()) {
                return invalid(format!("rule triggers on undeclared event `{}`", r.trigger));
            }
            check_expr(&r.amount, &format!("{} rule on `{}`", r.kind.as_str(), r.trigger))?;
        }
        if outcomes.is_empty() {
            return invalid("feasibility list is empty".into());
        }
        let mut seen_outcomes = BTreeSet::new();
        for o in &outcomes {
            if let Some(a) = o.atoms().find(|a| !seen_atoms.contains(a)) {
                return invalid(format!("outcome {o} mentions undeclared event `{a}`"));
            }
            if !seen_outcomes.insert(o) {
                return invalid(format!("duplicate outcome {o}"));
            }
        }
        if atoms.len() > 63 {
            return invalid("at most 63 events are supported".into());
        }

        let mut model = PayoffModel {
            name,
            party_names,
            params,
            constraints,
            atoms,
            rules,
            outcomes,
        };
        let mut outcomes = std::mem::take(&mut model.outcomes);
        outcomes.sort_by_key(|o| model.outcome_key(o));
        model.outcomes = outcomes;
        Ok(model)
    }

    /// The same model with every subset of atoms feasible.
    pub fn with_exhaustive_outcomes(&self) -> PayoffModel {
        let n = self.atoms.len();
        let mut outcomes: Vec<Outcome> = (0u64..(1u64 << n))
            .map(|mask| {
                self.atoms
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask & (1 << (n - 1 - i)) != 0)
                    .map(|(_, a)| a.name.clone())
                    .collect()
            })
            .collect();
        outcomes.sort_by_key(|o| self.outcome_key(o));
        PayoffModel {
            outcomes,
            ..self.clone()
        }
    }

    /// Bit-vector key with the first declared atom most significant; sorting
    /// by it gives the canonical outcome order.
    pub fn outcome_key(&self, outcome: &Outcome) -> u64 {
        let n = self.atoms.len();
        self.atoms
            .iter()
            .enumerate()
            .filter(|(_, a)| outcome.contains(&a.name))
            .fold(0u64, |acc, (i, _)| acc | (1 << (n - 1 - i)))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn party_name(&self, party: Party) -> &str {
        &self.party_names[party.index()]
    }

    pub fn party_names(&self) -> &[String; 2] {
        &self.party_names
    }

    pub fn party_by_name(&self, name: &str) -> Option<Party> {
        Party::BOTH.into_iter().find(|p| self.party_name(*p) == name)
    }

    pub fn params(&self) -> &[Param] {
        &self.params
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn atoms(&self) -> &[EventAtom] {
        &self.atoms
    }

    pub fn rules(&self) -> &[PayoffRule] {
        &self.rules
    }

    pub fn is_feasible(&self, outcome: &Outcome) -> bool {
        self.outcomes.contains(outcome)
    }

    /// Feasible outcomes in canonical order.
    pub fn enumerate_outcomes(&self) -> &[Outcome] {
        &self.outcomes
    }

    /// Checks that `params` is complete and satisfies every constraint.
    pub fn bind<'m>(&'m self, params: &'m ParamSet) -> Result<BoundModel<'m>> {
        params.check_complete(&self.params)?;
        if let ConstraintVerdict::Violated { constraint, .. } = check_constraints(params, &self.constraints)? {
            return Err(Error::ConstraintViolated(constraint.to_string()));
        }
        Ok(BoundModel { model: self, params })
    }

    /// Symbolic payoff of `party` at `outcome`: triggered incomes minus
    /// triggered expenses, in rule order. `0` when nothing triggers.
    pub fn payoff_expr(&self, party: Party, outcome: &Outcome) -> Expr {
        let mut acc: Option<Expr> = None;
        for r in self.triggered(party, outcome) {
            acc = Some(match (acc, r.kind) {
                (None, RuleKind::Income) => r.amount.clone(),
                (None, RuleKind::Expense) => r.amount.clone().negate(),
                (Some(e), RuleKind::Income) => e + r.amount.clone(),
                (Some(e), RuleKind::Expense) => e - r.amount.clone(),
            });
        }
        acc.unwrap_or_else(|| Expr::int(0))
    }

    pub fn triggered<'a>(&'a self, party: Party, outcome: &'a Outcome) -> impl Iterator<Item = &'a PayoffRule> + 'a {
        self.rules
            .iter()
            .filter(move |r| r.party == party && outcome.contains(&r.trigger))
    }
}

/// A model paired with a parameter set that has passed validation.
#[derive(Clone, Copy, Debug)]
pub struct BoundModel<'m> {
    model: &'m PayoffModel,
    params: &'m ParamSet,
}

impl<'m> BoundModel<'m> {
    pub fn model(&self) -> &'m PayoffModel {
        self.model
    }

    pub fn params(&self) -> &'m ParamSet {
        self.params
    }

    pub fn eval(&self, e: &Expr) -> Rational {
        e.eval(self.params).expect("bound parameters cover every declared name")
    }

    fn total(&self, party: Party, kind: RuleKind, outcome: &Outcome) -> Rational {
        self.model
            .triggered(party, outcome)
            .filter(|r| r.kind == kind)
            .map(|r| self.eval(&r.amount))
            .sum()
    }

    pub fn income(&self, party: Party, outcome: &Outcome) -> Rational {
        self.total(party, RuleKind::Income, outcome)
    }

    pub fn expense(&self, party: Party, outcome: &Outcome) -> Rational {
        self.total(party, RuleKind::Expense, outcome)
    }

    /// Payoff without the feasibility check; used on outcomes already known
    /// to be feasible.
    pub fn payoff_unchecked(&self, party: Party, outcome: &Outcome) -> Rational {
        self.income(party, outcome) - self.expense(party, outcome)
    }

    pub fn payoff(&self, party: Party, outcome: &Outcome) -> Result<Rational> {
        if !self.model.is_feasible(outcome) {
            return Err(Error::InfeasibleOutcome(outcome.to_string()));
        }
        Ok(self.payoff_unchecked(party, outcome))
    }

    /// `(outcome, payoff)` for every feasible outcome, ascending by payoff
    /// with ties in canonical outcome order.
    pub fn spectrum(&self, party: Party) -> Vec<(Outcome, Rational)> {
        let mut out: Vec<_> = self
            .model
            .outcomes
            .iter()
            .map(|o| (o.clone(), self.payoff_unchecked(party, o)))
            .collect();
        out.sort_by(|a, b| a.1.cmp(&b.1));
        out
    }

    /// Every rule amount is strictly positive under these parameters.
    pub fn check_rule_amounts(&self) -> Result<()> {
        for r in &self.model.rules {
            let v = self.eval(&r.amount);
            if !v.is_positive() {
                return Err(Error::NonPositiveAmount {
                    amount: r.amount.to_string(),
                    value: v,
                });
            }
        }
        Ok(())
    }
}

pub fn payoff(model: &PayoffModel, party: Party, outcome: &Outcome, params: &ParamSet) -> Result<Rational> {
    model.bind(params)?.payoff(party, outcome)
}

pub fn payoff_spectrum(model: &PayoffModel, party: Party, params: &ParamSet) -> Result<Vec<(Outcome, Rational)>> {
    Ok(model.bind(params)?.spectrum(party))
}

pub fn enumerate_outcomes(model: &PayoffModel) -> Vec<Outcome> {
    model.enumerate_outcomes().to_vec()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::ParamRole;

    fn single_rule_model(kind: RuleKind) -> PayoffModel {
        PayoffModel::new(ModelParts {
            name: "single".into(),
            party_names: ["A".into(), "B".into()],
            params: vec![Param::new("a", ParamRole::Other)],
            constraints: vec![Constraint::gt(Expr::param("a"), Expr::int(0))],
            atoms: vec![EventAtom::new("e", "something happens", None)],
            rules: vec![PayoffRule {
                party: Party::A,
                kind,
                trigger: "e".into(),
                amount: Expr::param("a"),
            }],
            outcomes: vec![Outcome::of(&["e"]), Outcome::empty()],
        })
        .unwrap()
    }

    #[test]
    fn empty_outcome_pays_nothing() {
        let m = single_rule_model(RuleKind::Income);
        let ps = ParamSet::new().with("a", Rational::from_integer(5));
        for party in Party::BOTH {
            assert_eq!(payoff(&m, party, &Outcome::empty(), &ps).unwrap(), Rational::zero());
        }
    }

    #[test]
    fn single_rule_spectrum_is_ordered() {
        let ps = ParamSet::new().with("a", Rational::from_integer(5));
        let m = single_rule_model(RuleKind::Income);
        let values: Vec<_> = payoff_spectrum(&m, Party::A, &ps).unwrap().into_iter().map(|x| x.1).collect();
        assert_eq!(values, vec![Rational::zero(), Rational::from_integer(5)]);
        let m = single_rule_model(RuleKind::Expense);
        let values: Vec<_> = payoff_spectrum(&m, Party::A, &ps).unwrap().into_iter().map(|x| x.1).collect();
        assert_eq!(values, vec![Rational::from_integer(-5), Rational::zero()]);
    }

    #[test]
    fn canonical_order_is_bitvector_order() {
        let m = single_rule_model(RuleKind::Income);
        assert_eq!(m.enumerate_outcomes(), &[Outcome::empty(), Outcome::of(&["e"])]);
    }

    #[test]
    fn infeasible_and_invalid_params_are_errors() {
        let m = single_rule_model(RuleKind::Income);
        let ps = ParamSet::new().with("a", Rational::from_integer(5));
        let m2 = PayoffModel::new(ModelParts {
            outcomes: vec![Outcome::empty()],
            ..parts_of(&m)
        })
        .unwrap();
        assert!(matches!(
            payoff(&m2, Party::A, &Outcome::of(&["e"]), &ps),
            Err(Error::InfeasibleOutcome(_))
        ));
        let bad = ParamSet::new().with("a", Rational::from_integer(-1));
        assert!(matches!(
            payoff(&m, Party::A, &Outcome::empty(), &bad),
            Err(Error::ConstraintViolated(_))
        ));
        let extra = ps.clone().with("b", Rational::one());
        assert!(matches!(payoff(&m, Party::A, &Outcome::empty(), &extra), Err(Error::ExtraParam(_))));
        assert!(matches!(
            payoff(&m, Party::A, &Outcome::empty(), &ParamSet::new()),
            Err(Error::UnboundParam(_))
        ));
    }

    fn parts_of(m: &PayoffModel) -> ModelParts {
        ModelParts {
            name: m.name.clone(),
            party_names: m.party_names.clone(),
            params: m.params.clone(),
            constraints: m.constraints.clone(),
            atoms: m.atoms.clone(),
            rules: m.rules.clone(),
            outcomes: m.outcomes.clone(),
        }
    }

    #[test]
    fn validation_rejects_bad_models() {
        let base = parts_of(&single_rule_model(RuleKind::Income));
        let cases: Vec<ModelParts> = vec![
            ModelParts { outcomes: vec![], ..base.clone() },
            ModelParts {
                outcomes: vec![Outcome::empty(), Outcome::empty()],
                ..base.clone()
            },
            ModelParts {
                outcomes: vec![Outcome::of(&["zz"])],
                ..base.clone()
            },
            ModelParts {
                rules: vec![PayoffRule::income(Party::A, Expr::param("a"), "nope")],
                ..base.clone()
            },
            ModelParts {
                rules: vec![PayoffRule::income(Party::A, Expr::param("q"), "e")],
                ..base.clone()
            },
            ModelParts {
                params: vec![Param::new("a", ParamRole::Other), Param::new("a", ParamRole::Other)],
                ..base.clone()
            },
            ModelParts {
                party_names: ["A".into(), "A".into()],
                ..base.clone()
            },
        ];
        for parts in cases {
            assert!(matches!(PayoffModel::new(parts), Err(Error::InvalidModel(_))));
        }
    }

    #[test]
    fn exhaustive_universe_is_power_set() {
        let m = single_rule_model(RuleKind::Income);
        let m2 = PayoffModel::new(ModelParts {
            outcomes: vec![Outcome::empty()],
            ..parts_of(&m)
        })
        .unwrap();
        assert_eq!(m2.with_exhaustive_outcomes().enumerate_outcomes(), m.enumerate_outcomes());
    }
}
