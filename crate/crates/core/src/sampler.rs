//! Seeded sampling of parameter sets that satisfy a constraint system
//! exactly.
//!
//! Parameters are assigned one at a time. At each step the sampler picks
//! the first unassigned parameter (in declaration order) that has a
//! constraint whose other parameters are all known, reads the constraint as
//! an affine bound on that parameter, intersects the bounds and draws a
//! rational inside the resulting interval. Constraints that are not affine
//! in the chosen parameter are only checked once everything is assigned.
//! When the constructive attempts are used up, the sampler falls back to
//! plain rejection sampling inside a box, within a fixed draw budget.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::expr::{Constraint, Param, ParamSet, Relation};
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SamplerBounds {
    /// Largest denominator of the interpolation fraction in each draw.
    pub max_denominator: u32,
    /// Width used for intervals that are unbounded on one or both sides.
    pub magnitude: Rational,
    pub constructive_attempts: usize,
    /// Total draws per parameter set, constructive attempts included.
    pub draw_budget: usize,
}

impl Default for SamplerBounds {
    fn default() -> Self {
        SamplerBounds {
            max_denominator: 10_000,
            magnitude: Rational::from_integer(10),
            constructive_attempts: 1_000,
            draw_budget: 100_000,
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct SamplerConfig {
    pub bounds: SamplerBounds,
    pub exec: Exec,
}

#[derive(Clone, Debug)]
struct Bound {
    value: Rational,
    strict: bool,
}

#[derive(Clone, Debug, Default)]
struct Interval {
    lower: Option<Bound>,
    upper: Option<Bound>,
}

impl Interval {
    fn raise_lower(&mut self, value: Rational, strict: bool) {
        match &mut self.lower {
            Some(b) if b.value > value => {}
            Some(b) if b.value == value => b.strict |= strict,
            slot => *slot = Some(Bound { value, strict }),
        }
    }

    fn lower_upper(&mut self, value: Rational, strict: bool) {
        match &mut self.upper {
            Some(b) if b.value < value => {}
            Some(b) if b.value == value => b.strict |= strict,
            slot => *slot = Some(Bound { value, strict }),
        }
    }
}

/// Uniform-ish fraction strictly inside (0, 1) with a bounded denominator.
fn unit_fraction(rng: &mut ChaCha8Rng, max_den: u32) -> Rational {
    let den = rng.gen_range(2..=max_den.max(2)) as i64;
    let num = rng.gen_range(1..den);
    Rational::new(num, den)
}

fn draw_in(interval: &Interval, rng: &mut ChaCha8Rng, bounds: &SamplerBounds) -> Option<Rational> {
    let t = unit_fraction(rng, bounds.max_denominator);
    let m = &bounds.magnitude;
    match (&interval.lower, &interval.upper) {
        (Some(lo), Some(hi)) => {
            if lo.value < hi.value {
                Some(&lo.value + &((&hi.value - &lo.value) * t))
            } else if lo.value == hi.value && !lo.strict && !hi.strict {
                Some(lo.value.clone())
            } else {
                None
            }
        }
        (Some(lo), None) => Some(&lo.value + &(m * &t)),
        (None, Some(hi)) => Some(&hi.value - &(m * &t)),
        (None, None) => Some(-m + (m + m) * t),
    }
}

fn is_ready(c: &Constraint, var: &str, known: &ParamSet) -> bool {
    let ps = c.params();
    ps.contains(var) && ps.iter().all(|p| *p == var || known.get(p).is_some())
}

fn all_satisfied(constraints: &[Constraint], params: &ParamSet) -> Result<bool> {
    for c in constraints {
        if !c.is_satisfied(params)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn constructive_attempt(
    constraints: &[Constraint],
    decls: &[Param],
    rng: &mut ChaCha8Rng,
    bounds: &SamplerBounds,
) -> Result<Option<ParamSet>> {
    let mut known = ParamSet::new();
    let mut remaining: Vec<&Param> = decls.iter().collect();
    while !remaining.is_empty() {
        let pick = remaining
            .iter()
            .position(|p| constraints.iter().any(|c| is_ready(c, &p.name, &known)))
            .unwrap_or(0);
        let var = remaining.remove(pick).name.as_str();
        let mut interval = Interval::default();
        for c in constraints.iter().filter(|c| is_ready(c, var, &known)) {
            let (Some((al, bl)), Some((ar, br))) = (c.lhs.affine_in(var, &known), c.rhs.affine_in(var, &known))
            else {
                continue;
            };
            // coef * var  rel  rhs_const
            let coef = al - ar;
            let rhs_const = br - bl;
            if coef.is_zero() {
                if !c.rel.holds(&Rational::zero(), &rhs_const) {
                    return Ok(None);
                }
                continue;
            }
            let at = rhs_const.checked_div(&coef).expect("nonzero coefficient");
            let flip = coef.is_negative();
            match (c.rel, flip) {
                (Relation::Eq, _) => {
                    interval.raise_lower(at.clone(), false);
                    interval.lower_upper(at, false);
                }
                (rel, false) => interval.lower_upper(at, rel == Relation::Lt),
                (rel, true) => interval.raise_lower(at, rel == Relation::Lt),
            }
        }
        match draw_in(&interval, rng, bounds) {
            Some(v) => {
                known.insert(var, v);
            }
            None => return Ok(None),
        }
    }
    Ok(all_satisfied(constraints, &known)?.then_some(known))
}

fn rejection_attempt(
    constraints: &[Constraint],
    decls: &[Param],
    rng: &mut ChaCha8Rng,
    bounds: &SamplerBounds,
) -> Result<Option<ParamSet>> {
    let free = Interval::default();
    let params: ParamSet = decls
        .iter()
        .map(|p| (p.name.clone(), draw_in(&free, rng, bounds).expect("unbounded interval")))
        .collect();
    Ok(all_satisfied(constraints, &params)?.then_some(params))
}

/// Draws the `index`-th parameter set of the stream identified by `seed`.
/// The RNG is seeded with `seed + index`, so each sample is independent of
/// how many others are drawn and of the order they are computed in.
pub fn sample_one(
    constraints: &[Constraint],
    decls: &[Param],
    seed: u64,
    index: usize,
    bounds: &SamplerBounds,
) -> Result<ParamSet> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(index as u64));
    for draw in 0..bounds.draw_budget {
        let attempt = if draw < bounds.constructive_attempts {
            constructive_attempt(constraints, decls, &mut rng, bounds)?
        } else {
            rejection_attempt(constraints, decls, &mut rng, bounds)?
        };
        if let Some(ps) = attempt {
            return Ok(ps);
        }
    }
    Err(Error::UnsatisfiedAfterBudget {
        sample: index,
        draws: bounds.draw_budget,
    })
}

pub fn sample_params_with(
    constraints: &[Constraint],
    decls: &[Param],
    seed: u64,
    n: usize,
    config: &SamplerConfig,
) -> Result<Vec<ParamSet>> {
    config
        .exec
        .map(n, |i| sample_one(constraints, decls, seed, i, &config.bounds))
        .into_iter()
        .collect()
}

pub fn sample_params(constraints: &[Constraint], decls: &[Param], seed: u64, n: usize) -> Result<Vec<ParamSet>> {
    sample_params_with(constraints, decls, seed, n, &SamplerConfig::default())
}
