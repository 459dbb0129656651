//! Catalog values checked against hand-derived tables.

use protogame::audit::{audit_fairness, corrected_chain_search, AuditConfig, PairOrder, Verdict, Witness};
use protogame::catalog::PROTOCOL_NAMES;
use protogame::game::Deviation;
use protogame::{
    classify, dominance, equilibria, expected_payoff, get_protocol, is_nash, payoff, payoff_spectrum, ClaimKind,
    Dominance, Expr, Outcome, ParamSet, Party, Profile, Rational, RuleKind,
};

fn r(n: i64) -> Rational {
    Rational::from_integer(n)
}

fn ps(pairs: &[(&str, Rational)]) -> ParamSet {
    pairs.iter().fold(ParamSet::new(), |p, (k, v)| p.with(k, v.clone()))
}

fn fe_params() -> ParamSet {
    ps(&[("u_AB", r(3)), ("u_AA", r(2)), ("u_BA", r(3)), ("u_BB", r(2))])
}

#[test]
fn payoffs_by_hand() {
    let fe = get_protocol("fair_exchange").unwrap();
    let both = Outcome::of(&["recv_A_MB", "recv_B_MA"]);
    assert_eq!(payoff(&fe.model, Party::A, &both, &fe_params()).unwrap(), r(1));
    assert_eq!(payoff(&fe.model, Party::B, &Outcome::empty(), &fe_params()).unwrap(), r(0));

    let bc = get_protocol("bit_commitment").unwrap();
    let p = ps(&[("k", r(2)), ("u_A", r(5)), ("u_B", r(1))]);
    let q = Outcome::of(&["recv_B_M_early", "A_modifies"]);
    assert_eq!(payoff(&bc.model, Party::A, &q, &p).unwrap(), r(-5));
}

#[test]
fn spectra_by_hand() {
    let fe = get_protocol("fair_exchange").unwrap();
    let values: Vec<_> = payoff_spectrum(&fe.model, Party::A, &fe_params())
        .unwrap()
        .into_iter()
        .map(|(_, v)| v)
        .collect();
    assert_eq!(values, [r(-2), r(0), r(1), r(3)]);

    let zk = get_protocol("zero_knowledge").unwrap();
    let p = ps(&[("k", r(2)), ("u_A", r(1)), ("u_B", r(1))]);
    let single: Vec<_> = payoff_spectrum(&zk.model, Party::A, &p)
        .unwrap()
        .into_iter()
        .filter(|(o, _)| o.len() < 2)
        .map(|(_, v)| v)
        .collect();
    assert_eq!(single, [r(-2), r(0), r(1)]);
}

#[test]
fn payoff_is_incomes_minus_expenses() {
    for name in PROTOCOL_NAMES {
        let entry = get_protocol(name).unwrap();
        for params in AuditConfig::new(5, 25).draw(&entry.model).unwrap() {
            for q in entry.model.enumerate_outcomes() {
                for party in [Party::A, Party::B] {
                    let mut expect = r(0);
                    for rule in entry.model.rules() {
                        if rule.party != party || !q.contains(&rule.trigger) {
                            continue;
                        }
                        let v = rule.amount.eval(&params).unwrap();
                        match rule.kind {
                            RuleKind::Income => expect += v,
                            RuleKind::Expense => expect -= v,
                        }
                    }
                    assert_eq!(payoff(&entry.model, party, q, &params).unwrap(), expect, "{name} {q}");
                }
            }
        }
    }
}

#[test]
fn oblivious_transfer_honest_expectations() {
    let ot = get_protocol("oblivious_transfer").unwrap();
    let g = ot.game("rational").unwrap();
    let p = ps(&[("k", r(2)), ("u_A", r(4)), ("u_B", r(4))]);
    let honest = g.honest_profile();
    assert_eq!(expected_payoff(g, &honest, Party::B, &p).unwrap(), r(2));
    assert_eq!(expected_payoff(g, &honest, Party::A, &p).unwrap(), r(-2));

    let abort = ot.game("with_abort").unwrap();
    let v = is_nash(abort, &abort.honest_profile(), &p).unwrap();
    assert_eq!(
        v.witness,
        Some(Deviation {
            party: Party::A,
            action: "abort".into(),
            before: r(-2),
            after: r(0),
        })
    );
}

#[test]
fn fair_exchange_games_by_hand() {
    let fe = get_protocol("fair_exchange").unwrap();
    let naive = fe.game("naive").unwrap();
    let rational = fe.game("rational").unwrap();
    // A's own secret is worth less than B's, so B gains more by withholding.
    let p = ps(&[("u_AB", r(3)), ("u_AA", r(1)), ("u_BA", r(3)), ("u_BB", r(2))]);
    let v = is_nash(naive, &naive.honest_profile(), &p).unwrap();
    assert_eq!(
        v.witness,
        Some(Deviation {
            party: Party::B,
            action: "withhold".into(),
            before: r(1),
            after: r(3),
        })
    );
    assert_eq!(dominance(naive, Party::B, "withhold", "follow", &p).unwrap(), Dominance::StrictlyDominates);
    let eq = equilibria(naive, &p).unwrap();
    assert!(eq.contains(&Profile::new("withhold", "withhold")));
    assert!(!eq.contains(&naive.honest_profile()));

    assert!(is_nash(rational, &rational.honest_profile(), &p).unwrap().holds);
    assert!(equilibria(rational, &p).unwrap().contains(&rational.honest_profile()));
    // Withholding against a withholder ties, against a follower it loses.
    assert_eq!(dominance(rational, Party::B, "withhold", "follow", &p).unwrap(), Dominance::None);
    assert_eq!(dominance(rational, Party::B, "follow", "withhold", &p).unwrap(), Dominance::WeaklyDominates);
}

#[test]
fn fair_exchange_classification() {
    let fe = get_protocol("fair_exchange").unwrap();
    let c = classify(&fe.games[0], &fe_params()).unwrap();
    assert!(c.closed);
    assert!(!c.non_positive_sum);
    let w = c.positive_sum_witness.unwrap();
    assert_eq!(w.outcome, Outcome::of(&["recv_A_MB", "recv_B_MA"]));
    assert_eq!(w.sum, r(2));
}

#[test]
fn fair_exchange_naive_fairness_witness() {
    let fe = get_protocol("fair_exchange").unwrap();
    let imp = fe
        .claims
        .iter()
        .find_map(|c| match &c.kind {
            ClaimKind::Fairness(f) if f.honest == Party::A => Some(f.clone()),
            _ => None,
        })
        .unwrap();
    let cfg = AuditConfig::new(42, 50);
    assert_eq!(audit_fairness(fe.game("rational").unwrap(), &imp, &cfg).unwrap().verdict, Verdict::HoldsOnAllSamples);
    let naive = audit_fairness(fe.game("naive").unwrap(), &imp, &cfg).unwrap();
    assert_eq!(naive.verdict, Verdict::Refuted);
    let Some(Witness::Fairness { profile, .. }) = naive.counterexample else { panic!("no witness") };
    assert_eq!(profile, Profile::new("follow", "withhold"));
}

#[test]
fn s2pc_pair_order_varies() {
    let s2pc = get_protocol("s2pc").unwrap();
    let e = |s: &str| -> Expr {
        let text = format!(
            "protocol \"p\"\nparty A\nparty B\nparam k\nparam u_A_g\nparam u_AB\nparam u_AA\nconstraint {s} < 0\n"
        );
        protogame::gamespec::parse(&text).unwrap().constraints[0].lhs.clone()
    };
    let values = [e("(k - 1)*u_A_g + u_AB - u_AA"), Expr::int(0)];
    let search = corrected_chain_search(&values, &s2pc.model, &AuditConfig::new(42, 1000)).unwrap();
    assert_eq!(search.pair(0, 1), Some(PairOrder::Varies));
    let pair = &search.pairs[0];
    for w in [&pair.less_witness, &pair.greater_witness] {
        let w = w.as_ref().expect("both signs occur");
        assert!(protogame::check_constraints(w, s2pc.model.constraints()).unwrap().is_satisfied());
    }
}

#[test]
fn s2pc_preferences_under_fixed_params() {
    let s2pc = get_protocol("s2pc").unwrap();
    let half = Rational::new(3, 2);
    let p = ps(&[
        ("k", r(2)),
        ("u_A_g", r(1)),
        ("u_AB", half.clone()),
        ("u_AA", r(3)),
        ("u_B_g", r(1)),
        ("u_BA", half),
        ("u_BB", r(3)),
    ]);
    let reports = protogame::audit::audit_preferences(&s2pc, &p).unwrap();
    assert!(reports.iter().all(|r| r.verdict == protogame::audit::RankingVerdict::Confirmed));
    let bad = p.with("u_AB", Rational::new(5, 2));
    assert!(protogame::audit::audit_preferences(&s2pc, &bad).is_err());
}
