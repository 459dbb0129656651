//! Built-in protocol entries.
//!
//! Each entry packages a payoff model, a `rational` game whose outcome map
//! encodes the protocol's guarantees, a guarantee-free `naive` game used as
//! a negative control, and the claims the analysis checks. Deviations
//! against an honest opponent in a rational game lead to an outcome where
//! nobody gains anything.

use std::sync::Arc;

use crate::claims::{
    ChainClaim, Claim, Expectation, FairnessImplication, Measure, Preference, Property, Separator,
};
use crate::error::{Error, Result};
use crate::expr::{Constraint, Expr, Param, ParamRole};
use crate::game::{ActionSet, GameKind, OutcomeDistribution, StrategicGame};
use crate::model::{EventAtom, ModelParts, Outcome, Party, PayoffModel, PayoffRule};
use crate::rational::Rational;

pub const PROTOCOL_NAMES: [&str; 6] = [
    "fair_exchange",
    "s2pc",
    "coin_flipping",
    "oblivious_transfer",
    "bit_commitment",
    "zero_knowledge",
];

pub const ALIASES: [(&str, &str); 2] = [
    ("contract_signing", "fair_exchange"),
    ("certified_mail", "fair_exchange"),
];

#[derive(Clone, Debug)]
pub struct ProtocolEntry {
    pub name: String,
    pub aliases: Vec<String>,
    pub description: String,
    pub model: Arc<PayoffModel>,
    pub games: Vec<StrategicGame>,
    pub claims: Vec<Claim>,
    pub preferences: Vec<Preference>,
    pub measures: Vec<Measure>,
    pub notes: Vec<String>,
}

impl ProtocolEntry {
    pub fn game(&self, name: &str) -> Option<&StrategicGame> {
        self.games.iter().find(|g| g.name() == name)
    }

    pub fn rational_game(&self) -> Option<&StrategicGame> {
        self.games.iter().find(|g| g.kind() == GameKind::Rational)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct CatalogListing {
    pub name: String,
    pub description: String,
    pub aliases: Vec<String>,
}

pub fn list_protocols() -> Vec<CatalogListing> {
    PROTOCOL_NAMES
        .iter()
        .map(|name| CatalogListing {
            name: name.to_string(),
            description: description(name).to_string(),
            aliases: aliases_of(name),
        })
        .collect()
}

fn aliases_of(name: &str) -> Vec<String> {
    ALIASES
        .iter()
        .filter(|(_, target)| *target == name)
        .map(|(alias, _)| alias.to_string())
        .collect()
}

pub fn resolve_name(name: &str) -> Option<&'static str> {
    PROTOCOL_NAMES
        .iter()
        .copied()
        .find(|n| *n == name)
        .or_else(|| ALIASES.iter().find(|(a, _)| *a == name).map(|(_, t)| *t))
}

pub fn get_protocol(name: &str) -> Result<ProtocolEntry> {
    let canonical = resolve_name(name).ok_or_else(|| Error::UnknownProtocol {
        name: name.to_string(),
        valid: PROTOCOL_NAMES
            .iter()
            .copied()
            .chain(ALIASES.iter().map(|(a, _)| *a))
            .collect::<Vec<_>>()
            .join(", "),
    })?;
    let entry = match canonical {
        "fair_exchange" => fair_exchange(),
        "s2pc" => s2pc(),
        "coin_flipping" => coin_flipping(),
        "oblivious_transfer" => oblivious_transfer(),
        "bit_commitment" => bit_commitment(),
        "zero_knowledge" => zero_knowledge(),
        _ => unreachable!("resolve_name only yields catalog names"),
    };
    Ok(entry.expect("catalog entries are well-formed"))
}

fn description(name: &str) -> &'static str {
    match name {
        "fair_exchange" => "Exchange of two secrets: neither party gets the other's secret unless both do",
        "s2pc" => "Secure two-party computation of a common value g from two secret inputs",
        "coin_flipping" => "Joint generation of a common random sequence",
        "oblivious_transfer" => "Transfer of a secret with probability 1/2, sender unaware of the result",
        "bit_commitment" => "Commit to a value that can be neither changed nor read before opening",
        "zero_knowledge" => "Convince the verifier of knowing a secret without leaking it",
        _ => "",
    }
}

fn p(name: &str) -> Expr {
    Expr::param(name)
}

fn int(n: i64) -> Expr {
    Expr::int(n)
}

fn out(atoms: &[&str]) -> Outcome {
    Outcome::of(atoms)
}

fn certain(atoms: &[&str]) -> OutcomeDistribution {
    OutcomeDistribution::certain(out(atoms))
}

fn all_subsets(atoms: &[&str]) -> Vec<Outcome> {
    (0u32..(1 << atoms.len()))
        .map(|mask| {
            atoms
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, a)| *a)
                .collect()
        })
        .collect()
}

fn actions(party: Party, names: &[&str]) -> ActionSet {
    ActionSet::new(party, names, names[0]).expect("honest action listed first")
}

fn parties() -> [String; 2] {
    ["A".into(), "B".into()]
}

fn lt_chain(party: Party, entries: Vec<Expr>, expect: Expectation) -> ChainClaim {
    ChainClaim::uniform(party, entries, Separator::Lt, expect)
}

fn honest_nash_claims(claims: &mut Vec<Claim>, games: &[StrategicGame]) {
    for g in games {
        let expect = g.kind() == GameKind::Rational;
        claims.push(Claim::nash(
            &format!("nash-{}-honest", g.name()),
            g.name(),
            g.honest_profile(),
            expect,
        ));
    }
}

fn fair_exchange() -> Result<ProtocolEntry> {
    let model = Arc::new(PayoffModel::new(ModelParts {
        name: "fair_exchange".into(),
        party_names: parties(),
        params: vec![
            Param::new("u_AB", ParamRole::OtherSecret),
            Param::new("u_AA", ParamRole::OwnSecret),
            Param::new("u_BA", ParamRole::OtherSecret),
            Param::new("u_BB", ParamRole::OwnSecret),
        ],
        constraints: vec![
            Constraint::gt(p("u_AB"), p("u_AA")),
            Constraint::gt(p("u_AA"), int(0)),
            Constraint::gt(p("u_BA"), p("u_BB")),
            Constraint::gt(p("u_BB"), int(0)),
        ],
        atoms: vec![
            EventAtom::new("recv_A_MB", "A receives B's secret M_B", Some(Party::A)),
            EventAtom::new("recv_B_MA", "B receives A's secret M_A", Some(Party::B)),
        ],
        rules: vec![
            PayoffRule::income(Party::A, p("u_AB"), "recv_A_MB"),
            PayoffRule::expense(Party::B, p("u_BB"), "recv_A_MB"),
            PayoffRule::income(Party::B, p("u_BA"), "recv_B_MA"),
            PayoffRule::expense(Party::A, p("u_AA"), "recv_B_MA"),
        ],
        outcomes: all_subsets(&["recv_A_MB", "recv_B_MA"]),
    })?);
    let acts = || (actions(Party::A, &["follow", "withhold"]), actions(Party::B, &["follow", "withhold"]));

    let (a, b) = acts();
    let rational = StrategicGame::from_fn("rational", GameKind::Rational, model.clone(), a, b, |x, y| {
        if x == "follow" && y == "follow" {
            certain(&["recv_A_MB", "recv_B_MA"])
        } else {
            certain(&[])
        }
    })?;
    // Each sender's secret arrives whenever that sender follows.
    let (a, b) = acts();
    let naive = StrategicGame::from_fn("naive", GameKind::Naive, model.clone(), a, b, |x, y| {
        let mut atoms = vec![];
        if y == "follow" {
            atoms.push("recv_A_MB");
        }
        if x == "follow" {
            atoms.push("recv_B_MA");
        }
        certain(&atoms)
    })?;

    let chain = |party: Party, own: &str, other: &str| {
        lt_chain(
            party,
            vec![-p(own), int(0), p(other) - p(own), p(other)],
            Expectation::Holds,
        )
    };
    let games = vec![rational, naive];
    let mut claims = vec![
        Claim::chain("chain-A", chain(Party::A, "u_AA", "u_AB")),
        Claim::chain("chain-B", chain(Party::B, "u_BB", "u_BA")),
        Claim::fairness(
            "fairness-honest-A",
            FairnessImplication {
                honest: Party::A,
                antecedent: (Party::B, p("u_BA")),
                consequent: (Party::A, p("u_AB")),
            },
        ),
        Claim::fairness(
            "fairness-honest-B",
            FairnessImplication {
                honest: Party::B,
                antecedent: (Party::A, p("u_AB")),
                consequent: (Party::B, p("u_BA")),
            },
        ),
    ];
    honest_nash_claims(&mut claims, &games);
    let preferences = Party::BOTH
        .into_iter()
        .map(|party| Preference {
            party,
            tiers: vec![vec![Property::Privacy], vec![Property::Correctness]],
        })
        .collect();
    Ok(ProtocolEntry {
        name: "fair_exchange".into(),
        aliases: aliases_of("fair_exchange"),
        description: description("fair_exchange").into(),
        model,
        games,
        claims,
        preferences,
        measures: vec![],
        notes: vec![],
    })
}

fn s2pc() -> Result<ProtocolEntry> {
    let atoms = ["recv_A_MB", "recv_A_g", "recv_B_MA", "recv_B_g"];
    let mut constraints = vec![Constraint::gt(p("k"), int(1))];
    for (g, other, own) in [("u_A_g", "u_AB", "u_AA"), ("u_B_g", "u_BA", "u_BB")] {
        constraints.extend([
            Constraint::gt(p(g), int(0)),
            Constraint::lt(p(g), p(other)),
            Constraint::lt(p(other), p("k") * p(g)),
            Constraint::lt(p("k") * p(g), p(own)),
        ]);
    }
    let model = Arc::new(PayoffModel::new(ModelParts {
        name: "s2pc".into(),
        party_names: parties(),
        params: vec![
            Param::new("k", ParamRole::Amplification),
            Param::new("u_A_g", ParamRole::JointOutput),
            Param::new("u_AB", ParamRole::OtherSecret),
            Param::new("u_AA", ParamRole::OwnSecret),
            Param::new("u_B_g", ParamRole::JointOutput),
            Param::new("u_BA", ParamRole::OtherSecret),
            Param::new("u_BB", ParamRole::OwnSecret),
        ],
        constraints,
        atoms: vec![
            EventAtom::new("recv_A_MB", "A receives B's secret input M_B", Some(Party::A)),
            EventAtom::new("recv_A_g", "A receives the common output g", Some(Party::A)),
            EventAtom::new("recv_B_MA", "B receives A's secret input M_A", Some(Party::B)),
            EventAtom::new("recv_B_g", "B receives the common output g", Some(Party::B)),
        ],
        rules: vec![
            PayoffRule::income(Party::A, p("u_AB"), "recv_A_MB"),
            PayoffRule::expense(Party::B, p("u_BB"), "recv_A_MB"),
            PayoffRule::income(Party::A, p("k") * p("u_A_g"), "recv_A_g"),
            PayoffRule::expense(Party::B, p("u_B_g"), "recv_A_g"),
            PayoffRule::income(Party::B, p("u_BA"), "recv_B_MA"),
            PayoffRule::expense(Party::A, p("u_AA"), "recv_B_MA"),
            PayoffRule::income(Party::B, p("k") * p("u_B_g"), "recv_B_g"),
            PayoffRule::expense(Party::A, p("u_A_g"), "recv_B_g"),
        ],
        outcomes: all_subsets(&atoms),
    })?);
    let names = ["follow", "abort", "substitute", "grab"];
    let acts = || (actions(Party::A, &names), actions(Party::B, &names));

    let (a, b) = acts();
    let rational = StrategicGame::from_fn("rational", GameKind::Rational, model.clone(), a, b, |x, y| {
        if x == "follow" && y == "follow" {
            certain(&["recv_A_g", "recv_B_g"])
        } else {
            certain(&[])
        }
    })?;
    // A deviator walks away with g (abort, input substitution) or with g and
    // the other's input (grab); the honest side gets nothing.
    let gains = |party: Party, action: &str| -> Vec<&'static str> {
        let (g, secret) = match party {
            Party::A => ("recv_A_g", "recv_A_MB"),
            Party::B => ("recv_B_g", "recv_B_MA"),
        };
        match action {
            "abort" | "substitute" => vec![g],
            "grab" => vec![g, secret],
            _ => vec![],
        }
    };
    let (a, b) = acts();
    let naive = StrategicGame::from_fn("naive", GameKind::Naive, model.clone(), a, b, |x, y| {
        if x == "follow" && y == "follow" {
            return certain(&["recv_A_g", "recv_B_g"]);
        }
        let mut atoms = gains(Party::A, x);
        atoms.extend(gains(Party::B, y));
        certain(&atoms)
    })?;

    let sixteen = |party: Party, g: &str, other: &str, own: &str| {
        let (u, uij, uii, k) = (|| p(g), || p(other), || p(own), || p("k"));
        let km1 = || k() - int(1);
        let entries = vec![
            -u() - uii(),
            -uii(),
            uij() - uii() - u(),
            km1() * u() - uii(),
            k() * u() - uii(),
            -u(),
            uij() - uii(),
            km1() * u() + uij() - uii(),
            int(0),
            k() * u() + uij() - uii(),
            uij() - u(),
            uij(),
            km1() * u(),
            k() * u(),
            km1() * u() + uij(),
            k() * u() + uij(),
        ];
        use Separator::{Lt, Unordered as Grp};
        let seps = vec![Lt, Lt, Lt, Lt, Lt, Grp, Grp, Lt, Grp, Lt, Lt, Grp, Lt, Lt, Lt];
        ChainClaim::new(party, entries, seps, Expectation::Refuted)
    };
    let games = vec![rational, naive];
    let mut claims = vec![
        Claim::chain("sixteen-values-A", sixteen(Party::A, "u_A_g", "u_AB", "u_AA")),
        Claim::chain("sixteen-values-B", sixteen(Party::B, "u_B_g", "u_BA", "u_BB")),
    ];
    for (honest, (hg, hother), (dg, dother)) in [
        (Party::A, ("u_A_g", "u_AB"), ("u_B_g", "u_BA")),
        (Party::B, ("u_B_g", "u_BA"), ("u_A_g", "u_AB")),
    ] {
        let dev = honest.other();
        claims.push(Claim::fairness(
            &format!("fairness-output-honest-{honest}"),
            FairnessImplication {
                honest,
                antecedent: (dev, p("k") * p(dg)),
                consequent: (honest, p("k") * p(hg)),
            },
        ));
        claims.push(Claim::fairness(
            &format!("fairness-secret-output-honest-{honest}"),
            FairnessImplication {
                honest,
                antecedent: (dev, p(dother) + p("k") * p(dg)),
                consequent: (honest, p(hother) + p("k") * p(hg)),
            },
        ));
    }
    honest_nash_claims(&mut claims, &games);
    let tiers = vec![
        vec![Property::Exclusiveness],
        vec![Property::Voyeurism],
        vec![Property::Correctness],
        vec![Property::Privacy],
    ];
    let mut measures = vec![];
    for (party, g, other, own) in [(Party::A, "u_A_g", "u_AB", "u_AA"), (Party::B, "u_B_g", "u_BA", "u_BB")] {
        for (property, amount) in [
            (Property::Exclusiveness, p(g)),
            (Property::Voyeurism, p(other)),
            (Property::Correctness, p("k") * p(g)),
            (Property::Privacy, p(own)),
        ] {
            measures.push(Measure {
                party,
                property,
                amount,
            });
        }
    }
    Ok(ProtocolEntry {
        name: "s2pc".into(),
        aliases: vec![],
        description: description("s2pc").into(),
        model,
        games,
        claims,
        preferences: Party::BOTH
            .into_iter()
            .map(|party| Preference {
                party,
                tiers: tiers.clone(),
            })
            .collect(),
        measures,
        notes: vec![
            "input substitution has no payoff consequence of its own and is modelled like abort".into(),
        ],
    })
}

/// Params `k`, `u_A`, `u_B` with `k > 1` and positive utilities.
fn k_uu_params() -> (Vec<Param>, Vec<Constraint>) {
    (
        vec![
            Param::new("k", ParamRole::Amplification),
            Param::new("u_A", ParamRole::OwnSecret),
            Param::new("u_B", ParamRole::OwnSecret),
        ],
        vec![
            Constraint::gt(p("k"), int(1)),
            Constraint::gt(p("u_A"), int(0)),
            Constraint::gt(p("u_B"), int(0)),
        ],
    )
}

fn coin_flipping() -> Result<ProtocolEntry> {
    let (mut params, constraints) = k_uu_params();
    for prm in &mut params[1..] {
        prm.role = ParamRole::JointOutput;
    }
    let all = ["sel_A", "sel_B", "recv_A_M", "recv_B_M"];
    let model = Arc::new(PayoffModel::new(ModelParts {
        name: "coin_flipping".into(),
        party_names: parties(),
        params,
        constraints,
        atoms: vec![
            EventAtom::new("sel_A", "M is selected by A", Some(Party::A)),
            EventAtom::new("sel_B", "M is selected by B", Some(Party::B)),
            EventAtom::new("recv_A_M", "A receives the sequence M", Some(Party::A)),
            EventAtom::new("recv_B_M", "B receives the sequence M", Some(Party::B)),
        ],
        rules: vec![
            PayoffRule::income(Party::A, p("u_A"), "sel_A"),
            PayoffRule::expense(Party::B, p("k") * p("u_B"), "sel_A"),
            PayoffRule::income(Party::B, p("u_B"), "sel_B"),
            PayoffRule::expense(Party::A, p("k") * p("u_A"), "sel_B"),
            PayoffRule::income(Party::A, p("k") * p("u_A"), "recv_A_M"),
            PayoffRule::expense(Party::B, p("u_B"), "recv_A_M"),
            PayoffRule::income(Party::B, p("k") * p("u_B"), "recv_B_M"),
            PayoffRule::expense(Party::A, p("u_A"), "recv_B_M"),
        ],
        outcomes: vec![out(&["sel_B"]), out(&["recv_B_M"]), out(&all), out(&["sel_A"]), out(&["recv_A_M"])],
    })?);
    let names = ["follow", "bias", "grab"];
    let acts = || (actions(Party::A, &names), actions(Party::B, &names));

    // The guarantees make the sequence joint no matter who deviates.
    let (a, b) = acts();
    let rational = StrategicGame::from_fn("rational", GameKind::Rational, model.clone(), a, b, |_, _| certain(&all))?;
    let (a, b) = acts();
    let naive = StrategicGame::from_fn("naive", GameKind::Naive, model.clone(), a, b, |x, y| match (x, y) {
        ("bias", "follow") => certain(&["sel_A"]),
        ("grab", "follow") => certain(&["recv_A_M"]),
        ("follow", "bias") => certain(&["sel_B"]),
        ("follow", "grab") => certain(&["recv_B_M"]),
        _ => certain(&all),
    })?;

    let chain = |party: Party, u: &str| {
        lt_chain(
            party,
            vec![-p("k") * p(u), -p(u), int(0), p(u), p("k") * p(u)],
            Expectation::Holds,
        )
    };
    let games = vec![rational, naive];
    let mut claims = vec![
        Claim::chain("chain-A", chain(Party::A, "u_A")),
        Claim::chain("chain-B", chain(Party::B, "u_B")),
        Claim::fairness(
            "fairness-honest-A",
            FairnessImplication {
                honest: Party::A,
                antecedent: (Party::B, p("k") * p("u_B")),
                consequent: (Party::A, p("k") * p("u_A")),
            },
        ),
        Claim::fairness(
            "fairness-honest-B",
            FairnessImplication {
                honest: Party::B,
                antecedent: (Party::A, p("k") * p("u_A")),
                consequent: (Party::B, p("k") * p("u_B")),
            },
        ),
    ];
    honest_nash_claims(&mut claims, &games);
    Ok(ProtocolEntry {
        name: "coin_flipping".into(),
        aliases: vec![],
        description: description("coin_flipping").into(),
        model,
        games,
        claims,
        preferences: Party::BOTH
            .into_iter()
            .map(|party| Preference {
                party,
                tiers: vec![
                    vec![Property::Exclusiveness, Property::Privacy],
                    vec![Property::Correctness, Property::Voyeurism],
                ],
            })
            .collect(),
        measures: vec![],
        notes: vec![],
    })
}

fn oblivious_transfer() -> Result<ProtocolEntry> {
    let (params, constraints) = k_uu_params();
    let model = Arc::new(PayoffModel::new(ModelParts {
        name: "oblivious_transfer".into(),
        party_names: parties(),
        params,
        constraints,
        atoms: vec![
            EventAtom::new("recv_B_M", "B receives A's secret M", Some(Party::B)),
            EventAtom::new("A_knows", "A knows whether B received M", Some(Party::A)),
        ],
        rules: vec![
            PayoffRule::expense(Party::A, p("u_A"), "recv_B_M"),
            PayoffRule::income(Party::B, p("u_B"), "recv_B_M"),
            PayoffRule::income(Party::A, p("k") * p("u_A"), "A_knows"),
            PayoffRule::expense(Party::B, (p("k") + int(1)) * p("u_B"), "A_knows"),
        ],
        outcomes: all_subsets(&["recv_B_M", "A_knows"]),
    })?);
    let half = || Rational::new(1, 2);
    let coin = |extra: &[&str]| {
        let mut hit = vec!["recv_B_M"];
        hit.extend_from_slice(extra);
        OutcomeDistribution::new(vec![(out(&hit), half()), (out(extra), half())]).expect("two halves")
    };
    let b_actions = || actions(Party::B, &["follow", "extract"]);

    // B ends up with the secret with probability 1/2 and A learns nothing,
    // unless both sides cheat.
    let rational_map = |x: &str, y: &str| match (x, y) {
        ("probe", "extract") => certain(&["recv_B_M", "A_knows"]),
        ("abort", _) => certain(&[]),
        _ => coin(&[]),
    };
    let rational = StrategicGame::from_fn(
        "rational",
        GameKind::Rational,
        model.clone(),
        actions(Party::A, &["follow", "probe"]),
        b_actions(),
        rational_map,
    )?;
    let with_abort = StrategicGame::from_fn(
        "with_abort",
        GameKind::Custom,
        model.clone(),
        actions(Party::A, &["follow", "probe", "abort"]),
        b_actions(),
        rational_map,
    )?;
    let naive = StrategicGame::from_fn(
        "naive",
        GameKind::Naive,
        model.clone(),
        actions(Party::A, &["follow", "probe"]),
        b_actions(),
        |x, y| match (x, y) {
            ("follow", "follow") => coin(&[]),
            ("probe", "follow") => coin(&["A_knows"]),
            ("follow", _) => certain(&["recv_B_M"]),
            _ => certain(&["recv_B_M", "A_knows"]),
        },
    )?;

    let u_a = || p("u_A");
    let u_b = || p("u_B");
    let games = vec![rational, naive, with_abort];
    let mut claims = vec![
        Claim::chain(
            "chain-A-as-printed",
            lt_chain(
                Party::A,
                vec![-u_a(), (p("k") - int(1)) * u_a(), int(0), p("k") * u_a()],
                Expectation::Refuted,
            ),
        ),
        Claim::chain(
            "chain-B",
            lt_chain(
                Party::B,
                vec![(-p("k") - int(1)) * u_b(), -p("k") * u_b(), int(0), u_b()],
                Expectation::Holds,
            ),
        ),
        Claim::fairness(
            "fairness-honest-B",
            FairnessImplication {
                honest: Party::B,
                antecedent: (Party::A, p("k") * u_a()),
                consequent: (Party::B, u_b()),
            },
        ),
    ];
    honest_nash_claims(&mut claims, &games);
    Ok(ProtocolEntry {
        name: "oblivious_transfer".into(),
        aliases: vec![],
        description: description("oblivious_transfer").into(),
        model,
        games,
        claims,
        preferences: vec![
            Preference {
                party: Party::A,
                tiers: vec![vec![Property::Exclusiveness], vec![Property::Voyeurism]],
            },
            Preference {
                party: Party::B,
                tiers: vec![vec![Property::Correctness], vec![Property::Privacy]],
            },
        ],
        measures: vec![],
        notes: vec![
            "the rational game assumes A takes part; the with_abort game lets A refuse to send".into(),
        ],
    })
}

/// Shared shape of bit commitment and zero knowledge: one fraud per party,
/// each setting its own atom.
fn two_fraud_games(
    model: &Arc<PayoffModel>,
    a_fraud: (&str, &'static str),
    b_fraud: (&str, &'static str),
) -> Result<Vec<StrategicGame>> {
    let acts = || {
        (
            actions(Party::A, &["follow", a_fraud.0]),
            actions(Party::B, &["follow", b_fraud.0]),
        )
    };
    let (fa, atom_a) = a_fraud;
    let (fb, atom_b) = b_fraud;
    let (a, b) = acts();
    let rational = StrategicGame::from_fn("rational", GameKind::Rational, model.clone(), a, b, |x, y| {
        if x == fa && y == fb {
            certain(&[atom_a, atom_b])
        } else {
            certain(&[])
        }
    })?;
    let (a, b) = acts();
    let naive = StrategicGame::from_fn("naive", GameKind::Naive, model.clone(), a, b, |x, y| {
        let mut atoms = vec![];
        if x == fa {
            atoms.push(atom_a);
        }
        if y == fb {
            atoms.push(atom_b);
        }
        certain(&atoms)
    })?;
    Ok(vec![rational, naive])
}

fn values_claim(party: Party, entries: Vec<Expr>) -> ChainClaim {
    ChainClaim::uniform(party, entries, Separator::Unordered, Expectation::Holds)
}

fn bit_commitment() -> Result<ProtocolEntry> {
    let (params, constraints) = k_uu_params();
    let model = Arc::new(PayoffModel::new(ModelParts {
        name: "bit_commitment".into(),
        party_names: parties(),
        params,
        constraints,
        atoms: vec![
            EventAtom::new("recv_B_M_early", "B obtains M before the opening stage", Some(Party::B)),
            EventAtom::new("A_modifies", "A modifies the committed M", Some(Party::A)),
        ],
        rules: vec![
            PayoffRule::expense(Party::A, p("k") * p("u_A"), "recv_B_M_early"),
            PayoffRule::income(Party::B, p("u_B"), "recv_B_M_early"),
            PayoffRule::income(Party::A, p("u_A"), "A_modifies"),
            PayoffRule::expense(Party::B, p("k") * p("u_B"), "A_modifies"),
        ],
        outcomes: all_subsets(&["recv_B_M_early", "A_modifies"]),
    })?);
    let games = two_fraud_games(&model, ("modify", "A_modifies"), ("open_early", "recv_B_M_early"))?;
    let four = |party: Party, u: &str| {
        values_claim(
            party,
            vec![
                int(0),
                -p("k") * p(u),
                p(u),
                (int(1) - p("k")) * p(u),
            ],
        )
    };
    let mut claims = vec![
        Claim::chain("values-A", four(Party::A, "u_A")),
        Claim::chain("values-B", four(Party::B, "u_B")),
    ];
    honest_nash_claims(&mut claims, &games);
    Ok(ProtocolEntry {
        name: "bit_commitment".into(),
        aliases: vec![],
        description: description("bit_commitment").into(),
        model,
        games,
        claims,
        preferences: vec![
            Preference {
                party: Party::A,
                tiers: vec![vec![Property::Exclusiveness], vec![Property::Privacy]],
            },
            Preference {
                party: Party::B,
                tiers: vec![vec![Property::Voyeurism], vec![Property::Correctness]],
            },
        ],
        measures: vec![],
        notes: vec![],
    })
}

fn zero_knowledge() -> Result<ProtocolEntry> {
    let (params, constraints) = k_uu_params();
    let model = Arc::new(PayoffModel::new(ModelParts {
        name: "zero_knowledge".into(),
        party_names: parties(),
        params,
        constraints,
        atoms: vec![
            EventAtom::new("recv_B_M", "B obtains the secret", Some(Party::B)),
            EventAtom::new("A_no_knowledge", "A does not know the secret", Some(Party::A)),
        ],
        rules: vec![
            PayoffRule::expense(Party::A, p("k") * p("u_A"), "recv_B_M"),
            PayoffRule::income(Party::B, p("u_B"), "recv_B_M"),
            PayoffRule::income(Party::A, p("u_A"), "A_no_knowledge"),
            PayoffRule::expense(Party::B, p("k") * p("u_B"), "A_no_knowledge"),
        ],
        outcomes: all_subsets(&["recv_B_M", "A_no_knowledge"]),
    })?);
    let games = two_fraud_games(&model, ("fake", "A_no_knowledge"), ("extract", "recv_B_M"))?;
    let three = |party: Party, u: &str| values_claim(party, vec![int(0), p(u), -p("k") * p(u)]);
    let mut claims = vec![
        Claim::chain("values-A", three(Party::A, "u_A")),
        Claim::chain("values-B", three(Party::B, "u_B")),
    ];
    honest_nash_claims(&mut claims, &games);
    Ok(ProtocolEntry {
        name: "zero_knowledge".into(),
        aliases: vec![],
        description: description("zero_knowledge").into(),
        model,
        games,
        claims,
        preferences: vec![
            Preference {
                party: Party::A,
                tiers: vec![vec![Property::Exclusiveness], vec![Property::Privacy]],
            },
            Preference {
                party: Party::B,
                tiers: vec![vec![Property::Voyeurism], vec![Property::Correctness]],
            },
        ],
        measures: vec![],
        notes: vec![
            "outcome {A_no_knowledge, recv_B_M} needs both parties to cheat; it pays (1 - k)*u to each party, a value the value claims do not list"
                .into(),
        ],
    })
}
