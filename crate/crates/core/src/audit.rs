//! Sample-based auditing of chain, fairness and equilibrium claims.
//!
//! A claim either holds on every sampled parameter set or is refuted by an
//! exact counterexample. Sample `i` of a stream depends only on `seed + i`,
//! so a larger sample count can only add refutations, never remove them.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::catalog::ProtocolEntry;
use crate::claims::{ChainClaim, Expectation, FairnessImplication, Measure, Preference, Property, Separator};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::expr::{Expr, ParamSet};
use crate::game::{Deviation, Profile, StrategicGame};
use crate::model::{BoundModel, Outcome, Party, PayoffModel, RuleKind};
use crate::rational::Rational;
use crate::sampler::{sample_params_with, SamplerConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    HoldsOnAllSamples,
    Refuted,
}

impl From<Expectation> for Verdict {
    fn from(e: Expectation) -> Self {
        match e {
            Expectation::Holds => Verdict::HoldsOnAllSamples,
            Expectation::Refuted => Verdict::Refuted,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AuditKind {
    Chain,
    Fairness,
    Nash,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// `left separator right` is false under `params`.
    Inequality {
        params: ParamSet,
        step: usize,
        separator: Separator,
        left: Rational,
        right: Rational,
    },
    Fairness {
        params: ParamSet,
        profile: Profile,
        branch: Outcome,
        probability: Rational,
    },
    Nash {
        params: ParamSet,
        sample: usize,
        nash: bool,
        deviation: Option<Deviation>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepReport {
    pub step: usize,
    pub left: String,
    pub separator: Separator,
    pub right: String,
    pub verdict: Verdict,
    pub counterexample: Option<Witness>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectrumRelation {
    /// Chain values and the party's payoff spectrum agree as multisets.
    Equal,
    /// Every chain value occurs in the spectrum, which has extra values.
    Subset,
    Mismatch,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectrumCheck {
    pub relation: SpectrumRelation,
    /// First sample where the weakest relation was observed.
    pub sample: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairOrder {
    AlwaysLess,
    AlwaysGreater,
    AlwaysEqual,
    Varies,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairVerdict {
    pub left: usize,
    pub right: usize,
    pub order: PairOrder,
    /// For `Varies`: one sample per observed relation.
    pub less_witness: Option<ParamSet>,
    pub equal_witness: Option<ParamSet>,
    pub greater_witness: Option<ParamSet>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderSearch {
    pub values: Vec<String>,
    pub samples: usize,
    /// Upper triangle of the pairwise matrix, row-major.
    pub pairs: Vec<PairVerdict>,
    /// Set when every pair is strictly ordered on all samples.
    pub stable_order: Option<Vec<String>>,
}

impl OrderSearch {
    pub fn pair(&self, i: usize, j: usize) -> Option<PairOrder> {
        let (lo, hi, flip) = if i <= j { (i, j, false) } else { (j, i, true) };
        if lo == hi {
            return Some(PairOrder::AlwaysEqual);
        }
        let p = self.pairs.iter().find(|p| p.left == lo && p.right == hi)?;
        Some(match (p.order, flip) {
            (PairOrder::AlwaysLess, true) => PairOrder::AlwaysGreater,
            (PairOrder::AlwaysGreater, true) => PairOrder::AlwaysLess,
            (o, _) => o,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditReport {
    pub claim_id: String,
    pub kind: AuditKind,
    pub statement: String,
    pub game: Option<String>,
    pub samples: usize,
    pub verdict: Verdict,
    pub expected: Option<Verdict>,
    pub counterexample: Option<Witness>,
    /// Supporting evidence for a claim that holds, e.g. the profitable
    /// deviation behind a "not an equilibrium" claim.
    pub example: Option<Witness>,
    pub steps: Vec<StepReport>,
    pub spectrum: Option<SpectrumCheck>,
    pub order_search: Option<OrderSearch>,
    pub notes: Vec<String>,
}

impl AuditReport {
    fn new(claim_id: &str, kind: AuditKind, statement: String, samples: usize) -> Self {
        AuditReport {
            claim_id: claim_id.to_string(),
            kind,
            statement,
            game: None,
            samples,
            verdict: Verdict::HoldsOnAllSamples,
            expected: None,
            counterexample: None,
            example: None,
            steps: vec![],
            spectrum: None,
            order_search: None,
            notes: vec![],
        }
    }

    /// True when there is no expectation or the verdict meets it.
    pub fn matches_expectation(&self) -> bool {
        self.expected.is_none_or(|e| e == self.verdict)
    }
}

#[derive(Clone, Debug)]
pub struct AuditConfig {
    pub seed: u64,
    pub samples: usize,
    pub sampler: SamplerConfig,
}

impl AuditConfig {
    pub fn new(seed: u64, samples: usize) -> Self {
        AuditConfig {
            seed,
            samples,
            sampler: SamplerConfig::default(),
        }
    }

    pub fn with_exec(mut self, exec: Exec) -> Self {
        self.sampler.exec = exec;
        self
    }

    fn exec(&self) -> Exec {
        self.sampler.exec
    }

    pub fn draw(&self, model: &PayoffModel) -> Result<Vec<ParamSet>> {
        sample_params_with(model.constraints(), model.params(), self.seed, self.samples, &self.sampler)
    }
}

fn eval_all(exprs: &[Expr], params: &ParamSet) -> Result<Vec<Rational>> {
    exprs.iter().map(|e| e.eval(params)).collect()
}

fn sep_holds(sep: Separator, l: &Rational, r: &Rational) -> bool {
    match sep {
        Separator::Lt => l < r,
        Separator::Le => l <= r,
        Separator::Eq => l == r,
        Separator::Unordered => true,
    }
}

fn multiset_relation(mut chain: Vec<Rational>, mut spectrum: Vec<Rational>) -> SpectrumRelation {
    chain.sort();
    spectrum.sort();
    if chain == spectrum {
        return SpectrumRelation::Equal;
    }
    let mut it = spectrum.iter();
    for v in &chain {
        loop {
            match it.next() {
                Some(s) if s == v => break,
                Some(s) if s < v => continue,
                _ => return SpectrumRelation::Mismatch,
            }
        }
    }
    SpectrumRelation::Subset
}

fn rank(r: SpectrumRelation) -> u8 {
    match r {
        SpectrumRelation::Equal => 0,
        SpectrumRelation::Subset => 1,
        SpectrumRelation::Mismatch => 2,
    }
}

pub fn audit_chain(claim: &ChainClaim, model: &PayoffModel, cfg: &AuditConfig) -> Result<AuditReport> {
    audit_chain_on("chain", claim, model, &cfg.draw(model)?, cfg.exec())
}

/// Audits `claim` against fixed samples. Each ordered step gets its own
/// verdict; the claim's counterexample is the earliest violation by
/// (sample, step).
pub fn audit_chain_on(
    id: &str,
    claim: &ChainClaim,
    model: &PayoffModel,
    samples: &[ParamSet],
    exec: Exec,
) -> Result<AuditReport> {
    let rows: Vec<(Vec<Rational>, SpectrumRelation)> = exec
        .map(samples.len(), |i| -> Result<_> {
            let values = eval_all(&claim.entries, &samples[i])?;
            let spectrum = model
                .bind(&samples[i])?
                .spectrum(claim.party)
                .into_iter()
                .map(|(_, v)| v)
                .collect();
            let rel = multiset_relation(values.clone(), spectrum);
            Ok((values, rel))
        })
        .into_iter()
        .collect::<Result<_>>()?;

    let mut report = AuditReport::new(id, AuditKind::Chain, claim.to_string(), samples.len());
    report.expected = Some(claim.expect.into());
    let mut first: Option<(usize, usize)> = None;
    for (step, sep) in claim.separators.iter().enumerate() {
        if *sep == Separator::Unordered {
            continue;
        }
        let violation = rows
            .iter()
            .position(|(v, _)| !sep_holds(*sep, &v[step], &v[step + 1]));
        let counterexample = violation.map(|s| {
            if first.is_none_or(|(fs, fstep)| (s, step) < (fs, fstep)) {
                first = Some((s, step));
            }
            inequality_witness(&samples[s], step, *sep, &rows[s].0)
        });
        report.steps.push(StepReport {
            step,
            left: claim.entries[step].to_string(),
            separator: *sep,
            right: claim.entries[step + 1].to_string(),
            verdict: if counterexample.is_some() {
                Verdict::Refuted
            } else {
                Verdict::HoldsOnAllSamples
            },
            counterexample,
        });
    }
    if let Some((s, step)) = first {
        report.verdict = Verdict::Refuted;
        report.counterexample = Some(inequality_witness(&samples[s], step, claim.separators[step], &rows[s].0));
    }
    let worst = rows
        .iter()
        .enumerate()
        .max_by_key(|(i, (_, r))| (rank(*r), std::cmp::Reverse(*i)));
    report.spectrum = Some(match worst {
        Some((i, (_, r))) if *r != SpectrumRelation::Equal => SpectrumCheck {
            relation: *r,
            sample: Some(i),
        },
        _ => SpectrumCheck {
            relation: SpectrumRelation::Equal,
            sample: None,
        },
    });
    Ok(report)
}

fn inequality_witness(params: &ParamSet, step: usize, separator: Separator, values: &[Rational]) -> Witness {
    Witness::Inequality {
        params: params.clone(),
        step,
        separator,
        left: values[step].clone(),
        right: values[step + 1].clone(),
    }
}

pub fn corrected_chain_search(values: &[Expr], model: &PayoffModel, cfg: &AuditConfig) -> Result<OrderSearch> {
    corrected_chain_search_on(values, &cfg.draw(model)?, cfg.exec())
}

/// Pairwise order of `values` across the samples, with a total order when
/// every pair is strict everywhere.
pub fn corrected_chain_search_on(values: &[Expr], samples: &[ParamSet], exec: Exec) -> Result<OrderSearch> {
    if values.len() < 2 {
        return Err(Error::InvalidClaim("order search needs at least two values".into()));
    }
    let rows: Vec<Vec<Rational>> = exec
        .map(samples.len(), |i| eval_all(values, &samples[i]))
        .into_iter()
        .collect::<Result<_>>()?;
    let n = values.len();
    let mut pairs = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            let mut w: [Option<usize>; 3] = [None; 3];
            for (s, row) in rows.iter().enumerate() {
                let slot = match row[i].cmp(&row[j]) {
                    std::cmp::Ordering::Less => 0,
                    std::cmp::Ordering::Equal => 1,
                    std::cmp::Ordering::Greater => 2,
                };
                w[slot].get_or_insert(s);
            }
            let order = match w {
                [Some(_), None, None] => PairOrder::AlwaysLess,
                [None, None, Some(_)] => PairOrder::AlwaysGreater,
                [None, _, None] => PairOrder::AlwaysEqual,
                _ => PairOrder::Varies,
            };
            let witness = |slot: Option<usize>| match order {
                PairOrder::Varies => slot.map(|s| samples[s].clone()),
                _ => None,
            };
            pairs.push(PairVerdict {
                left: i,
                right: j,
                order,
                less_witness: witness(w[0]),
                equal_witness: witness(w[1]),
                greater_witness: witness(w[2]),
            });
        }
    }
    let strict = !rows.is_empty()
        && pairs
            .iter()
            .all(|p| matches!(p.order, PairOrder::AlwaysLess | PairOrder::AlwaysGreater));
    let stable_order = strict.then(|| {
        // With every pair strictly ordered, position = number of smaller values.
        let mut idx: Vec<usize> = (0..n).collect();
        idx.sort_by_key(|&i| {
            pairs
                .iter()
                .filter(|p| {
                    (p.right == i && p.order == PairOrder::AlwaysLess)
                        || (p.left == i && p.order == PairOrder::AlwaysGreater)
                })
                .count()
        });
        idx.into_iter().map(|i| values[i].to_string()).collect()
    });
    Ok(OrderSearch {
        values: values.iter().map(ToString::to_string).collect(),
        samples: samples.len(),
        pairs,
        stable_order,
    })
}

/// True when every additive term of `amount` matches a distinct income
/// rule of `party` triggered by `outcome`, compared by value.
fn income_includes(model: &BoundModel<'_>, party: Party, outcome: &Outcome, amount: &Expr) -> bool {
    let mut available: Vec<Rational> = model
        .model()
        .triggered(party, outcome)
        .filter(|r| r.kind == RuleKind::Income)
        .map(|r| model.eval(&r.amount))
        .collect();
    amount.additive_terms().iter().all(|t| {
        let v = model.eval(t);
        match available.iter().position(|a| *a == v) {
            Some(i) => {
                available.swap_remove(i);
                true
            }
            None => false,
        }
    })
}

fn fairness_statement(i: &FairnessImplication, model: &PayoffModel) -> String {
    format!(
        "honest {}: income of {} includes {} => income of {} includes {}",
        model.party_name(i.honest),
        model.party_name(i.antecedent.0),
        i.antecedent.1,
        model.party_name(i.consequent.0),
        i.consequent.1
    )
}

pub fn audit_fairness(game: &StrategicGame, imp: &FairnessImplication, cfg: &AuditConfig) -> Result<AuditReport> {
    audit_fairness_on("fairness", game, imp, &cfg.draw(game.model())?, cfg.exec())
}

/// Pins the honest party to its honest action and scans every opponent
/// action, outcome branch and sample. The witness is the first failure in
/// (action, branch, sample) order.
pub fn audit_fairness_on(
    id: &str,
    game: &StrategicGame,
    imp: &FairnessImplication,
    samples: &[ParamSet],
    exec: Exec,
) -> Result<AuditReport> {
    let honest_action = game.actions(imp.honest).honest.clone();
    let profiles: Vec<Profile> = game
        .actions(imp.honest.other())
        .actions
        .iter()
        .map(|o| match imp.honest {
            Party::A => Profile::new(&honest_action, o),
            Party::B => Profile::new(o, &honest_action),
        })
        .collect();
    let model = game.model();
    let per_sample: Vec<Option<(usize, usize)>> = exec
        .map(samples.len(), |s| -> Result<_> {
            let bound = model.bind(&samples[s])?;
            for (pi, profile) in profiles.iter().enumerate() {
                for (bi, (outcome, _)) in game.distribution(profile)?.branches().iter().enumerate() {
                    if income_includes(&bound, imp.antecedent.0, outcome, &imp.antecedent.1)
                        && !income_includes(&bound, imp.consequent.0, outcome, &imp.consequent.1)
                    {
                        return Ok(Some((pi, bi)));
                    }
                }
            }
            Ok(None)
        })
        .into_iter()
        .collect::<Result<_>>()?;
    let mut report = AuditReport::new(id, AuditKind::Fairness, fairness_statement(imp, model), samples.len());
    report.game = Some(game.name().to_string());
    let first = per_sample
        .iter()
        .enumerate()
        .filter_map(|(s, f)| f.map(|(p, b)| (p, b, s)))
        .min();
    if let Some((p, b, s)) = first {
        let (outcome, probability) = game.distribution(&profiles[p])?.branches()[b].clone();
        report.verdict = Verdict::Refuted;
        report.counterexample = Some(Witness::Fairness {
            params: samples[s].clone(),
            profile: profiles[p].clone(),
            branch: outcome,
            probability,
        });
    }
    Ok(report)
}

pub fn audit_equilibrium_claim(
    game: &StrategicGame,
    profile: &Profile,
    expect_nash: bool,
    cfg: &AuditConfig,
) -> Result<AuditReport> {
    audit_equilibrium_claim_on("nash", game, profile, expect_nash, &cfg.draw(game.model())?, cfg.exec())
}

/// The claim is "`profile` is (or is not) an equilibrium"; any sample with
/// the opposite outcome refutes it.
pub fn audit_equilibrium_claim_on(
    id: &str,
    game: &StrategicGame,
    profile: &Profile,
    expect_nash: bool,
    samples: &[ParamSet],
    exec: Exec,
) -> Result<AuditReport> {
    game.distribution(profile)?;
    let verdicts = exec
        .map(samples.len(), |s| game.bind(&samples[s])?.is_nash(profile))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let statement = format!(
        "{profile} is {}a Nash equilibrium of {}",
        if expect_nash { "" } else { "not " },
        game.name()
    );
    let mut report = AuditReport::new(id, AuditKind::Nash, statement, samples.len());
    report.game = Some(game.name().to_string());
    let witness = |s: usize| Witness::Nash {
        params: samples[s].clone(),
        sample: s,
        nash: verdicts[s].holds,
        deviation: verdicts[s].witness.clone(),
    };
    match verdicts.iter().position(|v| v.holds != expect_nash) {
        Some(s) => {
            report.verdict = Verdict::Refuted;
            report.counterexample = Some(witness(s));
        }
        None if !expect_nash && !samples.is_empty() => report.example = Some(witness(0)),
        None => {}
    }
    Ok(report)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RankingVerdict {
    Confirmed,
    Violated,
    /// No quantities are attached to the properties; the ranking is echoed.
    ReportOnly,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PreferenceReport {
    pub party: Party,
    pub tiers: Vec<Vec<Property>>,
    pub values: BTreeMap<Property, Rational>,
    pub verdict: RankingVerdict,
    /// First out-of-order pair (lower tier property, higher tier property).
    pub violation: Option<(Property, Property)>,
}

/// Compares each party's property ranking against the measured quantities
/// under `params`, which must satisfy the entry's constraints.
pub fn audit_preferences(entry: &ProtocolEntry, params: &ParamSet) -> Result<Vec<PreferenceReport>> {
    audit_preference_list(&entry.model, &entry.preferences, &entry.measures, params)
}

pub fn audit_preference_list(
    model: &PayoffModel,
    preferences: &[Preference],
    measures: &[Measure],
    params: &ParamSet,
) -> Result<Vec<PreferenceReport>> {
    let bound = model.bind(params)?;
    let mut out = vec![];
    for pref in preferences {
        let values: BTreeMap<Property, Rational> = measures
            .iter()
            .filter(|m| m.party == pref.party)
            .map(|m| (m.property, bound.eval(&m.amount)))
            .collect();
        let mut violation = None;
        'outer: for (ti, lower) in pref.tiers.iter().enumerate() {
            for higher in &pref.tiers[ti + 1..] {
                for lp in lower {
                    for hp in higher {
                        if let (Some(lv), Some(hv)) = (values.get(lp), values.get(hp)) {
                            if lv > hv {
                                violation = Some((*lp, *hp));
                                break 'outer;
                            }
                        }
                    }
                }
            }
        }
        let verdict = if values.is_empty() {
            RankingVerdict::ReportOnly
        } else if violation.is_some() {
            RankingVerdict::Violated
        } else {
            RankingVerdict::Confirmed
        };
        out.push(PreferenceReport {
            party: pref.party,
            tiers: pref.tiers.clone(),
            values,
            verdict,
            violation,
        });
    }
    Ok(out)
}
