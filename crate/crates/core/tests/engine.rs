//! Game engine checks against values worked out by hand.

use protogame::game::{Deviation, NashVerdict};
use protogame::{
    classify, dominance, equilibria, expected_payoff, gamespec, is_nash, Dominance, Outcome, ParamSet, Party,
    Profile, Rational,
};

// A gains u at `ga`; B gains 2u at `gb`. Both rules are paired with an
// expense for the other side, so the model is closed but not zero-sum.
const SPEC: &str = r#"protocol "hand"
party A
party B
param u
constraint 0 < u
event ga "A gains"
event gb "B gains"
income A u when ga
expense B u when ga
income B 2*u when gb
expense A u when gb
game g custom
  action A: x | y honest x
  action B: z | w honest z
  map (x, z) -> {} @ 1
  map (x, w) -> {gb} @ 1/2, {} @ 1/2
  map (y, z) -> {ga} @ 1
  map (y, w) -> {ga, gb} @ 1/3, {} @ 2/3
"#;

fn r(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

fn setup() -> (protogame::ProtocolEntry, ParamSet) {
    let entry = gamespec::load(SPEC).unwrap();
    (entry, ParamSet::new().with("u", r(1, 1)))
}

#[test]
fn expected_payoffs_average_over_chance() {
    let (entry, ps) = setup();
    let g = &entry.games[0];
    let table = [
        (("x", "z"), (r(0, 1), r(0, 1))),
        (("x", "w"), (r(-1, 2), r(1, 1))),
        (("y", "z"), (r(1, 1), r(-1, 1))),
        (("y", "w"), (r(0, 1), r(1, 3))),
    ];
    for ((a, b), (pa, pb)) in table {
        let p = Profile::new(a, b);
        assert_eq!(expected_payoff(g, &p, Party::A, &ps).unwrap(), pa, "{p}");
        assert_eq!(expected_payoff(g, &p, Party::B, &ps).unwrap(), pb, "{p}");
    }
}

#[test]
fn nash_uses_maximal_gain_with_ties_to_a() {
    let (entry, ps) = setup();
    let g = &entry.games[0];
    // Both parties gain exactly 1 by deviating from (x, z).
    let v = is_nash(g, &Profile::new("x", "z"), &ps).unwrap();
    assert_eq!(
        v,
        NashVerdict {
            holds: false,
            witness: Some(Deviation {
                party: Party::A,
                action: "y".into(),
                before: r(0, 1),
                after: r(1, 1),
            }),
        }
    );
    let v = is_nash(g, &Profile::new("y", "w"), &ps).unwrap();
    assert!(v.holds && v.witness.is_none());
    assert_eq!(equilibria(g, &ps).unwrap(), vec![Profile::new("y", "w")]);
}

#[test]
fn dominance_relations() {
    let (entry, ps) = setup();
    let g = &entry.games[0];
    assert_eq!(dominance(g, Party::A, "y", "x", &ps).unwrap(), Dominance::StrictlyDominates);
    assert_eq!(dominance(g, Party::A, "x", "y", &ps).unwrap(), Dominance::None);
    assert_eq!(dominance(g, Party::B, "w", "z", &ps).unwrap(), Dominance::StrictlyDominates);
    assert!(dominance(g, Party::B, "w", "nope", &ps).is_err());
}

#[test]
fn classification_facts() {
    let (entry, ps) = setup();
    let c = classify(&entry.games[0], &ps).unwrap();
    assert!(!c.zero_sum);
    assert!(!c.non_positive_sum);
    assert!(c.closed);
    let w = c.positive_sum_witness.unwrap();
    assert_eq!(w.sum, r(1, 1));
    // First outcome in canonical order that reaches the maximum.
    assert_eq!(w.outcome, Outcome::of(&["gb"]));
}

#[test]
fn unpaired_income_opens_the_model() {
    let text = SPEC.replace("expense B u when ga\n", "");
    let entry = gamespec::load(&text).unwrap();
    let ps = ParamSet::new().with("u", r(3, 2));
    let c = classify(&entry.games[0], &ps).unwrap();
    assert!(!c.closed);
    let v = c.closedness_violation.unwrap();
    assert_eq!(v.gaining_party, Party::A);
    assert_eq!(v.outcome, Outcome::of(&["ga"]));
}

#[test]
fn constraint_violations_are_errors() {
    let (entry, _) = setup();
    let bad = ParamSet::new().with("u", r(-1, 1));
    assert!(is_nash(&entry.games[0], &Profile::new("x", "z"), &bad).is_err());
    assert!(classify(&entry.games[0], &ParamSet::new()).is_err());
}
