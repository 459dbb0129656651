//! Whole-protocol analysis: spectra, classification, equilibria and,
//! optionally, audits of every attached claim.
//!
//! The result depends only on the entry and the options; running sequentially
//! or in parallel gives the same value.

use serde::{Deserialize, Serialize};

use crate::audit::{
    audit_chain_on, audit_equilibrium_claim_on, audit_fairness_on, audit_preferences, corrected_chain_search_on,
    AuditConfig, AuditReport, PreferenceReport, Verdict,
};
use crate::catalog::ProtocolEntry;
use crate::claims::{ClaimKind, Expectation};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::expr::ParamSet;
use crate::game::{classify_model, Classification, ClosednessViolation, Dominance, GameKind, NashVerdict, Profile, StrategicGame};
use crate::model::{Outcome, Party};
use crate::rational::Rational;
use crate::sampler::{sample_one, SamplerBounds};

#[derive(Clone, Debug)]
pub struct AnalysisOptions {
    pub seed: u64,
    pub samples: usize,
    /// Fixed instance parameters; otherwise sample 0 of the stream is used.
    pub params: Option<ParamSet>,
    /// Restrict games to one name (e.g. `rational`, `naive`, `with_abort`).
    pub variant: Option<String>,
    pub exec: Exec,
    pub bounds: SamplerBounds,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        AnalysisOptions {
            seed: 42,
            samples: 1000,
            params: None,
            variant: None,
            exec: Exec::Auto,
            bounds: SamplerBounds::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub seed: u64,
    pub samples: usize,
    pub sampler: SamplerBounds,
    pub explicit_params: bool,
    pub variant: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectrumEntry {
    pub outcome: Outcome,
    pub symbolic: String,
    pub value: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartySpectrum {
    pub party: Party,
    pub name: String,
    /// Sorted by value; ties keep canonical outcome order.
    pub entries: Vec<SpectrumEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpenSample {
    pub sample: usize,
    pub params: ParamSet,
    pub violation: ClosednessViolation,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationSummary {
    pub instance: Classification,
    pub samples: usize,
    pub zero_sum_on_all_samples: bool,
    pub non_positive_sum_on_all_samples: bool,
    pub closed_on_all_samples: bool,
    pub first_open_sample: Option<OpenSample>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DominanceEntry {
    pub party: Party,
    pub action: String,
    pub over: String,
    pub relation: Dominance,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameAnalysis {
    pub name: String,
    pub kind: GameKind,
    pub honest_profile: Profile,
    pub honest_nash: NashVerdict,
    pub equilibria: Vec<Profile>,
    /// Only pairs where some dominance holds.
    pub dominance: Vec<DominanceEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Analysis {
    pub protocol: String,
    pub parties: [String; 2],
    pub config: ConfigEcho,
    pub instance: ParamSet,
    pub outcomes: Vec<Outcome>,
    pub spectra: Vec<PartySpectrum>,
    pub classification: ClassificationSummary,
    pub games: Vec<GameAnalysis>,
    pub preferences: Vec<PreferenceReport>,
    pub audits: Vec<AuditReport>,
    /// Set by [`verify`]: every audit verdict met its expectation.
    pub all_claims_match: Option<bool>,
    pub notes: Vec<String>,
}

fn selected<'e>(entry: &'e ProtocolEntry, variant: &Option<String>) -> Result<Vec<&'e StrategicGame>> {
    let games: Vec<_> = entry
        .games
        .iter()
        .filter(|g| variant.as_deref().is_none_or(|v| v == g.name()))
        .collect();
    match variant {
        Some(v) if games.is_empty() => Err(Error::UnknownGame(format!(
            "{v} (available: {})",
            entry.games.iter().map(|g| g.name()).collect::<Vec<_>>().join(", ")
        ))),
        _ => Ok(games),
    }
}

fn analyze_game(game: &StrategicGame, params: &ParamSet) -> Result<GameAnalysis> {
    let bound = game.bind(params)?;
    let honest = game.honest_profile();
    let mut dominance = vec![];
    for party in Party::BOTH {
        let acts = &game.actions(party).actions;
        for s in acts {
            for t in acts.iter().filter(|t| *t != s) {
                let relation = bound.dominance(party, s, t)?;
                if relation != Dominance::None {
                    dominance.push(DominanceEntry {
                        party,
                        action: s.clone(),
                        over: t.clone(),
                        relation,
                    });
                }
            }
        }
    }
    Ok(GameAnalysis {
        name: game.name().to_string(),
        kind: game.kind(),
        honest_nash: bound.is_nash(&honest)?,
        honest_profile: honest,
        equilibria: bound.equilibria(),
        dominance,
    })
}

fn summarize_classification(
    entry: &ProtocolEntry,
    instance: &ParamSet,
    samples: &[ParamSet],
    exec: Exec,
) -> Result<ClassificationSummary> {
    let model = &entry.model;
    let per_sample = exec
        .map(samples.len(), |i| model.bind(&samples[i]).map(classify_model))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let first_open_sample = per_sample.iter().enumerate().find_map(|(i, c)| {
        c.closedness_violation.clone().map(|violation| OpenSample {
            sample: i,
            params: samples[i].clone(),
            violation,
        })
    });
    Ok(ClassificationSummary {
        instance: classify_model(model.bind(instance)?),
        samples: samples.len(),
        zero_sum_on_all_samples: per_sample.iter().all(|c| c.zero_sum),
        non_positive_sum_on_all_samples: per_sample.iter().all(|c| c.non_positive_sum),
        closed_on_all_samples: first_open_sample.is_none(),
        first_open_sample,
    })
}

fn instance_params(entry: &ProtocolEntry, opts: &AnalysisOptions) -> Result<ParamSet> {
    match &opts.params {
        Some(p) => {
            entry.model.bind(p)?;
            Ok(p.clone())
        }
        None => sample_one(entry.model.constraints(), entry.model.params(), opts.seed, 0, &opts.bounds),
    }
}

/// Spectra, classification, equilibria and preference checks.
pub fn analyze(entry: &ProtocolEntry, opts: &AnalysisOptions) -> Result<Analysis> {
    let cfg = audit_config(opts);
    let samples = cfg.draw(&entry.model)?;
    analyze_with_samples(entry, opts, &samples)
}

fn audit_config(opts: &AnalysisOptions) -> AuditConfig {
    let mut cfg = AuditConfig::new(opts.seed, opts.samples).with_exec(opts.exec);
    cfg.sampler.bounds = opts.bounds.clone();
    cfg
}

fn analyze_with_samples(entry: &ProtocolEntry, opts: &AnalysisOptions, samples: &[ParamSet]) -> Result<Analysis> {
    let games = selected(entry, &opts.variant)?;
    let instance = instance_params(entry, opts)?;
    let bound = entry.model.bind(&instance)?;
    let spectra = Party::BOTH
        .into_iter()
        .map(|party| PartySpectrum {
            party,
            name: entry.model.party_name(party).to_string(),
            entries: bound
                .spectrum(party)
                .into_iter()
                .map(|(outcome, value)| SpectrumEntry {
                    symbolic: entry.model.payoff_expr(party, &outcome).to_string(),
                    outcome,
                    value,
                })
                .collect(),
        })
        .collect();
    Ok(Analysis {
        protocol: entry.name.clone(),
        parties: entry.model.party_names().clone(),
        config: ConfigEcho {
            seed: opts.seed,
            samples: opts.samples,
            sampler: opts.bounds.clone(),
            explicit_params: opts.params.is_some(),
            variant: opts.variant.clone().unwrap_or_else(|| "all".into()),
        },
        outcomes: entry.model.enumerate_outcomes().to_vec(),
        spectra,
        classification: summarize_classification(entry, &instance, samples, opts.exec)?,
        games: games
            .iter()
            .map(|g| analyze_game(g, &instance))
            .collect::<Result<_>>()?,
        preferences: audit_preferences(entry, &instance)?,
        instance,
        audits: vec![],
        all_claims_match: None,
        notes: entry.notes.clone(),
    })
}

fn expected_for(kind: GameKind) -> Option<Verdict> {
    match kind {
        GameKind::Rational => Some(Verdict::HoldsOnAllSamples),
        GameKind::Naive => Some(Verdict::Refuted),
        GameKind::Custom => None,
    }
}

/// Audits of every claim of `entry` over one shared sample stream.
pub fn audit_claims(entry: &ProtocolEntry, opts: &AnalysisOptions, samples: &[ParamSet]) -> Result<Vec<AuditReport>> {
    let games = selected(entry, &opts.variant)?;
    let exec = opts.exec;
    let mut out = vec![];
    for claim in &entry.claims {
        match &claim.kind {
            ClaimKind::Chain(chain) => {
                let mut r = audit_chain_on(&claim.id, chain, &entry.model, samples, exec)?;
                if chain.expect == Expectation::Refuted {
                    r.order_search = Some(corrected_chain_search_on(&chain.entries, samples, exec)?);
                }
                out.push(r);
            }
            ClaimKind::Fairness(imp) => {
                for g in &games {
                    let mut r = audit_fairness_on(&format!("{}@{}", claim.id, g.name()), g, imp, samples, exec)?;
                    r.expected = expected_for(g.kind());
                    out.push(r);
                }
            }
            ClaimKind::Nash(n) => {
                let Some(g) = games.iter().find(|g| g.name() == n.game) else {
                    if entry.game(&n.game).is_none() {
                        return Err(Error::UnknownGame(n.game.clone()));
                    }
                    continue;
                };
                let mut r = audit_equilibrium_claim_on(&claim.id, g, &n.profile, n.expect_nash, samples, exec)?;
                r.expected = Some(Verdict::HoldsOnAllSamples);
                out.push(r);
            }
        }
    }
    Ok(out)
}

/// [`analyze`] plus audits of all claims.
pub fn verify(entry: &ProtocolEntry, opts: &AnalysisOptions) -> Result<Analysis> {
    let samples = audit_config(opts).draw(&entry.model)?;
    let mut analysis = analyze_with_samples(entry, opts, &samples)?;
    analysis.audits = audit_claims(entry, opts, &samples)?;
    analysis.all_claims_match = Some(analysis.audits.iter().all(AuditReport::matches_expectation));
    Ok(analysis)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::get_protocol;

    fn opts(samples: usize) -> AnalysisOptions {
        AnalysisOptions {
            samples,
            ..AnalysisOptions::default()
        }
    }

    #[test]
    fn explicit_params_fix_the_instance() {
        let fe = get_protocol("fair_exchange").unwrap();
        let r = |n| Rational::from_integer(n);
        let params: ParamSet = [("u_AB", r(3)), ("u_AA", r(2)), ("u_BA", r(3)), ("u_BB", r(2))]
            .into_iter()
            .map(|(k, v)| (k.to_string(), v))
            .collect();
        let a = analyze(
            &fe,
            &AnalysisOptions {
                params: Some(params.clone()),
                ..opts(5)
            },
        )
        .unwrap();
        let values: Vec<_> = a.spectra[0].entries.iter().map(|e| e.value.clone()).collect();
        assert_eq!(values, vec![r(-2), r(0), r(1), r(3)]);
        let bad = params.with("u_AA", r(5));
        let err = analyze(
            &fe,
            &AnalysisOptions {
                params: Some(bad),
                ..opts(5)
            },
        )
        .unwrap_err();
        assert!(matches!(err, Error::ConstraintViolated(_)));
    }

    #[test]
    fn variant_filter() {
        let ot = get_protocol("oblivious_transfer").unwrap();
        let a = verify(
            &ot,
            &AnalysisOptions {
                variant: Some("with_abort".into()),
                ..opts(20)
            },
        )
        .unwrap();
        assert_eq!(a.games.len(), 1);
        assert_eq!(a.all_claims_match, Some(true));
        let fe = get_protocol("fair_exchange").unwrap();
        assert!(matches!(
            analyze(
                &fe,
                &AnalysisOptions {
                    variant: Some("with_abort".into()),
                    ..opts(3)
                }
            ),
            Err(Error::UnknownGame(_))
        ));
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let e = get_protocol("coin_flipping").unwrap();
        let a = verify(&e, &opts(40)).unwrap();
        let b = verify(
            &e,
            &AnalysisOptions {
                exec: Exec::Sequential,
                ..opts(40)
            },
        )
        .unwrap();
        assert_eq!(a, b);
    }
}
