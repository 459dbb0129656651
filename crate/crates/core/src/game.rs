//! Finite two-party one-shot games over a payoff model.
//!
//! Each party picks one behaviour (honest or a named deviation); the outcome
//! map sends every action pair to a distribution over feasible outcomes.
//! Chance only enters through those distributions; there are no mixed
//! strategies.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::ParamSet;
use crate::model::{BoundModel, Outcome, Party, PayoffModel};
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GameKind {
    Rational,
    Naive,
    Custom,
}

impl GameKind {
    pub fn as_str(self) -> &'static str {
        match self {
            GameKind::Rational => "rational",
            GameKind::Naive => "naive",
            GameKind::Custom => "custom",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "rational" => Some(GameKind::Rational),
            "naive" => Some(GameKind::Naive),
            "custom" => Some(GameKind::Custom),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActionSet {
    pub party: Party,
    pub actions: Vec<String>,
    pub honest: String,
}

impl ActionSet {
    pub fn new(party: Party, actions: &[&str], honest: &str) -> Result<Self> {
        let set = ActionSet {
            party,
            actions: actions.iter().map(|s| s.to_string()).collect(),
            honest: honest.to_string(),
        };
        set.validate()?;
        Ok(set)
    }

    fn validate(&self) -> Result<()> {
        if self.actions.is_empty() {
            return Err(Error::InvalidGame(format!("party {} has no actions", self.party)));
        }
        for (i, a) in self.actions.iter().enumerate() {
            if self.actions[..i].contains(a) {
                return Err(Error::InvalidGame(format!("duplicate action `{a}` for party {}", self.party)));
            }
        }
        if !self.actions.contains(&self.honest) {
            return Err(Error::InvalidGame(format!(
                "honest action `{}` is not an action of party {}",
                self.honest, self.party
            )));
        }
        Ok(())
    }

    pub fn index_of(&self, action: &str) -> Result<usize> {
        self.actions
            .iter()
            .position(|a| a == action)
            .ok_or_else(|| Error::UnknownAction {
                party: self.party.to_string(),
                action: action.to_string(),
            })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OutcomeDistribution(Vec<(Outcome, Rational)>);

impl OutcomeDistribution {
    /// Probabilities must be strictly positive, sum to exactly one, and the
    /// outcomes must be distinct.
    pub fn new(branches: Vec<(Outcome, Rational)>) -> Result<Self> {
        if branches.is_empty() {
            return Err(Error::InvalidDistribution("no branches".into()));
        }
        for (i, (o, p)) in branches.iter().enumerate() {
            if !p.is_positive() {
                return Err(Error::InvalidDistribution(format!("probability {p} of {o} is not positive")));
            }
            if branches[..i].iter().any(|(o2, _)| o2 == o) {
                return Err(Error::InvalidDistribution(format!("outcome {o} listed twice")));
            }
        }
        let total: Rational = branches.iter().map(|(_, p)| p).sum();
        if total != Rational::one() {
            return Err(Error::InvalidDistribution(format!("probabilities sum to {total}, not 1")));
        }
        Ok(OutcomeDistribution(branches))
    }

    pub fn certain(outcome: Outcome) -> Self {
        OutcomeDistribution(vec![(outcome, Rational::one())])
    }

    pub fn branches(&self) -> &[(Outcome, Rational)] {
        &self.0
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Profile {
    pub a: String,
    pub b: String,
}

impl Profile {
    pub fn new(a: &str, b: &str) -> Self {
        Profile {
            a: a.to_string(),
            b: b.to_string(),
        }
    }

    pub fn action(&self, party: Party) -> &str {
        match party {
            Party::A => &self.a,
            Party::B => &self.b,
        }
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.a, self.b)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrategicGame {
    name: String,
    kind: GameKind,
    model: Arc<PayoffModel>,
    actions: [ActionSet; 2],
    // row-major: index = a * |B actions| + b
    outcome_map: Vec<OutcomeDistribution>,
}

impl StrategicGame {
    /// Builds a game from explicit map entries. Every action pair must
    /// appear exactly once and every branch outcome must be feasible.
    pub fn new(
        name: &str,
        kind: GameKind,
        model: Arc<PayoffModel>,
        actions_a: ActionSet,
        actions_b: ActionSet,
        entries: Vec<(Profile, OutcomeDistribution)>,
    ) -> Result<Self> {
        if actions_a.party != Party::A || actions_b.party != Party::B {
            return Err(Error::InvalidGame("action sets must be given for A then B".into()));
        }
        actions_a.validate()?;
        actions_b.validate()?;
        let (na, nb) = (actions_a.actions.len(), actions_b.actions.len());
        let mut slots: Vec<Option<OutcomeDistribution>> = vec![None; na * nb];
        for (profile, dist) in entries {
            let ia = actions_a.index_of(&profile.a)?;
            let ib = actions_b.index_of(&profile.b)?;
            for (o, _) in dist.branches() {
                if !model.is_feasible(o) {
                    return Err(Error::InvalidGame(format!(
                        "map entry {profile} reaches infeasible outcome {o}"
                    )));
                }
            }
            if slots[ia * nb + ib].replace(dist).is_some() {
                return Err(Error::InvalidGame(format!("map entry {profile} given twice")));
            }
        }
        let mut outcome_map = Vec::with_capacity(na * nb);
        for (i, slot) in slots.into_iter().enumerate() {
            match slot {
                Some(d) => outcome_map.push(d),
                None => {
                    let p = Profile::new(&actions_a.actions[i / nb], &actions_b.actions[i % nb]);
                    return Err(Error::InvalidGame(format!("outcome map has no entry for {p}")));
                }
            }
        }
        Ok(StrategicGame {
            name: name.to_string(),
            kind,
            model,
            actions: [actions_a, actions_b],
            outcome_map,
        })
    }

    /// Builds a game by calling `map` on every action pair.
    pub fn from_fn(
        name: &str,
        kind: GameKind,
        model: Arc<PayoffModel>,
        actions_a: ActionSet,
        actions_b: ActionSet,
        map: impl Fn(&str, &str) -> OutcomeDistribution,
    ) -> Result<Self> {
        let entries = actions_a
            .actions
            .iter()
            .flat_map(|a| actions_b.actions.iter().map(move |b| (a, b)))
            .map(|(a, b)| (Profile::new(a, b), map(a, b)))
            .collect();
        Self::new(name, kind, model, actions_a, actions_b, entries)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> GameKind {
        self.kind
    }

    pub fn model(&self) -> &Arc<PayoffModel> {
        &self.model
    }

    pub fn actions(&self, party: Party) -> &ActionSet {
        &self.actions[party.index()]
    }

    pub fn honest_profile(&self) -> Profile {
        Profile::new(&self.actions[0].honest, &self.actions[1].honest)
    }

    /// Action profiles in canonical order (A's actions outer, B's inner).
    pub fn profiles(&self) -> impl Iterator<Item = Profile> + '_ {
        self.actions[0]
            .actions
            .iter()
            .flat_map(move |a| self.actions[1].actions.iter().map(move |b| Profile::new(a, b)))
    }

    pub fn distribution(&self, profile: &Profile) -> Result<&OutcomeDistribution> {
        let (ia, ib) = self.indices(profile)?;
        Ok(self.dist_at(ia, ib))
    }

    fn dist_at(&self, ia: usize, ib: usize) -> &OutcomeDistribution {
        &self.outcome_map[ia * self.actions[1].actions.len() + ib]
    }

    fn indices(&self, profile: &Profile) -> Result<(usize, usize)> {
        Ok((
            self.actions[0].index_of(&profile.a)?,
            self.actions[1].index_of(&profile.b)?,
        ))
    }

    /// Validates `params` against the model once for repeated evaluation.
    pub fn bind<'g>(&'g self, params: &'g ParamSet) -> Result<BoundGame<'g>> {
        Ok(BoundGame {
            game: self,
            model: self.model.bind(params)?,
        })
    }
}

/// A game together with validated parameters.
#[derive(Clone, Copy, Debug)]
pub struct BoundGame<'g> {
    game: &'g StrategicGame,
    model: BoundModel<'g>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Deviation {
    pub party: Party,
    pub action: String,
    pub before: Rational,
    pub after: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NashVerdict {
    pub holds: bool,
    pub witness: Option<Deviation>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Dominance {
    StrictlyDominates,
    WeaklyDominates,
    None,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PositiveSumWitness {
    pub outcome: Outcome,
    pub sum: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosednessViolation {
    pub outcome: Outcome,
    /// The party with positive income whose opponent pays nothing.
    pub gaining_party: Party,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub zero_sum: bool,
    pub non_positive_sum: bool,
    pub positive_sum_witness: Option<PositiveSumWitness>,
    pub closed: bool,
    pub closedness_violation: Option<ClosednessViolation>,
}

impl<'g> BoundGame<'g> {
    pub fn game(&self) -> &'g StrategicGame {
        self.game
    }

    pub fn model(&self) -> BoundModel<'g> {
        self.model
    }

    fn expected_at(&self, ia: usize, ib: usize, party: Party) -> Rational {
        self.game
            .dist_at(ia, ib)
            .branches()
            .iter()
            .map(|(o, p)| p * &self.model.payoff_unchecked(party, o))
            .sum()
    }

    pub fn expected_payoff(&self, profile: &Profile, party: Party) -> Result<Rational> {
        let (ia, ib) = self.game.indices(profile)?;
        Ok(self.expected_at(ia, ib, party))
    }

    /// Checks every unilateral deviation of both parties. The witness is
    /// the deviation with the largest gain; ties go to party A first, then
    /// to the earlier action.
    pub fn is_nash(&self, profile: &Profile) -> Result<NashVerdict> {
        let (ia, ib) = self.game.indices(profile)?;
        let mut best: Option<(Rational, Deviation)> = None;
        for party in Party::BOTH {
            let before = self.expected_at(ia, ib, party);
            for (j, action) in self.game.actions(party).actions.iter().enumerate() {
                let after = match party {
                    Party::A => self.expected_at(j, ib, party),
                    Party::B => self.expected_at(ia, j, party),
                };
                let gain = &after - &before;
                if !gain.is_positive() {
                    continue;
                }
                if best.as_ref().is_none_or(|(g, _)| gain > *g) {
                    best = Some((
                        gain,
                        Deviation {
                            party,
                            action: action.clone(),
                            before: before.clone(),
                            after,
                        },
                    ));
                }
            }
        }
        Ok(NashVerdict {
            holds: best.is_none(),
            witness: best.map(|(_, d)| d),
        })
    }

    pub fn dominance(&self, party: Party, s: &str, t: &str) -> Result<Dominance> {
        let set = self.game.actions(party);
        let (is, it) = (set.index_of(s)?, set.index_of(t)?);
        let opponent = self.game.actions(party.other()).actions.len();
        let (mut all_strict, mut all_weak, mut some_strict) = (true, true, false);
        for o in 0..opponent {
            let (vs, vt) = match party {
                Party::A => (self.expected_at(is, o, party), self.expected_at(it, o, party)),
                Party::B => (self.expected_at(o, is, party), self.expected_at(o, it, party)),
            };
            all_strict &= vs > vt;
            all_weak &= vs >= vt;
            some_strict |= vs > vt;
        }
        Ok(if all_strict {
            Dominance::StrictlyDominates
        } else if all_weak && some_strict {
            Dominance::WeaklyDominates
        } else {
            Dominance::None
        })
    }

    /// Pure Nash profiles in canonical order, found from the full payoff
    /// tables by best-response comparison.
    pub fn equilibria(&self) -> Vec<Profile> {
        let na = self.game.actions[0].actions.len();
        let nb = self.game.actions[1].actions.len();
        let table_a: Vec<Vec<Rational>> = (0..na)
            .map(|i| (0..nb).map(|j| self.expected_at(i, j, Party::A)).collect())
            .collect();
        let table_b: Vec<Vec<Rational>> = (0..na)
            .map(|i| (0..nb).map(|j| self.expected_at(i, j, Party::B)).collect())
            .collect();
        let mut out = Vec::new();
        for i in 0..na {
            for j in 0..nb {
                let a_best = (0..na).all(|k| table_a[k][j] <= table_a[i][j]);
                let b_best = (0..nb).all(|k| table_b[i][k] <= table_b[i][j]);
                if a_best && b_best {
                    out.push(Profile::new(&self.game.actions[0].actions[i], &self.game.actions[1].actions[j]));
                }
            }
        }
        out
    }
}

/// Classifies the model under `params`: payoff sums over every feasible
/// outcome and the closedness condition (a party's positive income implies
/// a positive expense for the other party).
pub fn classify_model(model: BoundModel<'_>) -> Classification {
    let mut zero_sum = true;
    let mut witness: Option<PositiveSumWitness> = None;
    let mut violation = None;
    for o in model.model().enumerate_outcomes() {
        let sum = model.payoff_unchecked(Party::A, o) + model.payoff_unchecked(Party::B, o);
        zero_sum &= sum.is_zero();
        if sum.is_positive() && witness.as_ref().is_none_or(|w| sum > w.sum) {
            witness = Some(PositiveSumWitness {
                outcome: o.clone(),
                sum,
            });
        }
        if violation.is_none() {
            for party in Party::BOTH {
                if model.income(party, o).is_positive() && !model.expense(party.other(), o).is_positive() {
                    violation = Some(ClosednessViolation {
                        outcome: o.clone(),
                        gaining_party: party,
                    });
                    break;
                }
            }
        }
    }
    Classification {
        zero_sum,
        non_positive_sum: witness.is_none(),
        positive_sum_witness: witness,
        closed: violation.is_none(),
        closedness_violation: violation,
    }
}

pub fn expected_payoff(game: &StrategicGame, profile: &Profile, party: Party, params: &ParamSet) -> Result<Rational> {
    game.bind(params)?.expected_payoff(profile, party)
}

pub fn is_nash(game: &StrategicGame, profile: &Profile, params: &ParamSet) -> Result<NashVerdict> {
    game.bind(params)?.is_nash(profile)
}

pub fn dominance(game: &StrategicGame, party: Party, s: &str, t: &str, params: &ParamSet) -> Result<Dominance> {
    game.bind(params)?.dominance(party, s, t)
}

pub fn classify(game: &StrategicGame, params: &ParamSet) -> Result<Classification> {
    Ok(classify_model(game.model().bind(params)?))
}

pub fn equilibria(game: &StrategicGame, params: &ParamSet) -> Result<Vec<Profile>> {
    Ok(game.bind(params)?.equilibria())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{Constraint, Expr, Param, ParamRole};
    use crate::model::{EventAtom, ModelParts, PayoffRule};

    fn trivial_model() -> Arc<PayoffModel> {
        Arc::new(
            PayoffModel::new(ModelParts {
                name: "t".into(),
                party_names: ["A".into(), "B".into()],
                params: vec![Param::new("a", ParamRole::Other)],
                constraints: vec![Constraint::gt(Expr::param("a"), Expr::int(0))],
                atoms: vec![EventAtom::new("e", "", None)],
                rules: vec![
                    PayoffRule::income(Party::A, Expr::param("a"), "e"),
                    PayoffRule::expense(Party::B, Expr::param("a"), "e"),
                ],
                outcomes: vec![Outcome::empty(), Outcome::of(&["e"])],
            })
            .unwrap(),
        )
    }

    fn params() -> ParamSet {
        ParamSet::new().with("a", Rational::from_integer(2))
    }

    #[test]
    fn distribution_validation() {
        let half = Rational::new(1, 2);
        assert!(OutcomeDistribution::new(vec![(Outcome::empty(), half.clone())]).is_err());
        assert!(OutcomeDistribution::new(vec![
            (Outcome::empty(), half.clone()),
            (Outcome::empty(), half.clone())
        ])
        .is_err());
        assert!(OutcomeDistribution::new(vec![
            (Outcome::empty(), Rational::from_integer(2)),
            (Outcome::of(&["e"]), Rational::from_integer(-1))
        ])
        .is_err());
        let d = OutcomeDistribution::new(vec![(Outcome::empty(), half.clone()), (Outcome::of(&["e"]), half)]).unwrap();
        let total: Rational = d.branches().iter().map(|b| &b.1).sum();
        assert_eq!(total, Rational::one());
    }

    #[test]
    fn single_action_game_is_nash() {
        let m = trivial_model();
        let g = StrategicGame::from_fn(
            "solo",
            GameKind::Custom,
            m,
            ActionSet::new(Party::A, &["x"], "x").unwrap(),
            ActionSet::new(Party::B, &["y"], "y").unwrap(),
            |_, _| OutcomeDistribution::certain(Outcome::of(&["e"])),
        )
        .unwrap();
        let v = is_nash(&g, &g.honest_profile(), &params()).unwrap();
        assert!(v.holds && v.witness.is_none());
        assert_eq!(equilibria(&g, &params()).unwrap(), vec![Profile::new("x", "y")]);
        // Deterministic outcome: expectation is the plain payoff.
        assert_eq!(
            expected_payoff(&g, &g.honest_profile(), Party::A, &params()).unwrap(),
            Rational::from_integer(2)
        );
    }

    #[test]
    fn identical_strategies_do_not_dominate() {
        let m = trivial_model();
        let g = StrategicGame::from_fn(
            "copy",
            GameKind::Custom,
            m,
            ActionSet::new(Party::A, &["x", "y"], "x").unwrap(),
            ActionSet::new(Party::B, &["p", "q"], "p").unwrap(),
            |_, b| {
                if b == "p" {
                    OutcomeDistribution::certain(Outcome::of(&["e"]))
                } else {
                    OutcomeDistribution::certain(Outcome::empty())
                }
            },
        )
        .unwrap();
        assert_eq!(dominance(&g, Party::A, "x", "y", &params()).unwrap(), Dominance::None);
        assert_eq!(dominance(&g, Party::B, "q", "p", &params()).unwrap(), Dominance::StrictlyDominates);
        assert!(matches!(
            dominance(&g, Party::A, "x", "zz", &params()),
            Err(Error::UnknownAction { .. })
        ));
    }

    #[test]
    fn map_totality_and_feasibility_are_checked() {
        let m = trivial_model();
        let a = ActionSet::new(Party::A, &["x", "y"], "x").unwrap();
        let b = ActionSet::new(Party::B, &["p"], "p").unwrap();
        let err = StrategicGame::new(
            "g",
            GameKind::Custom,
            m.clone(),
            a.clone(),
            b.clone(),
            vec![(Profile::new("x", "p"), OutcomeDistribution::certain(Outcome::empty()))],
        )
        .unwrap_err();
        assert!(err.to_string().contains("(y, p)"), "{err}");
        let err = StrategicGame::new(
            "g",
            GameKind::Custom,
            m,
            a,
            b,
            vec![
                (Profile::new("x", "p"), OutcomeDistribution::certain(Outcome::of(&["nope"]))),
                (Profile::new("y", "p"), OutcomeDistribution::certain(Outcome::empty())),
            ],
        )
        .unwrap_err();
        assert!(matches!(err, Error::InvalidGame(_)));
        assert!(ActionSet::new(Party::A, &["x"], "z").is_err());
        assert!(ActionSet::new(Party::A, &["x", "x"], "x").is_err());
    }

    #[test]
    fn rule_free_model_is_zero_sum() {
        let m = PayoffModel::new(ModelParts {
            name: "empty".into(),
            party_names: ["A".into(), "B".into()],
            atoms: vec![EventAtom::new("e", "", None)],
            outcomes: vec![Outcome::empty(), Outcome::of(&["e"])],
            ..ModelParts::default()
        })
        .unwrap();
        let ps = ParamSet::new();
        let c = classify_model(m.bind(&ps).unwrap());
        assert!(c.zero_sum && c.non_positive_sum && c.closed);
        assert!(c.positive_sum_witness.is_none());
    }
}
