//! Shared builders for the integration suites.
#![allow(dead_code)] // each test binary uses its own subset

use std::sync::Arc;

use opposition_core::{
    rat, rint, ConditionalEvent, EventContext, Family, Interval, Rational, Region, Threshold,
};

/// The three single-event context classes: no relation, antecedent entails
/// consequent, antecedent excludes consequent.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ContextClass {
    Independent,
    Entails,
    Excludes,
}

pub const ALL_CLASSES: [ContextClass; 3] = [
    ContextClass::Independent,
    ContextClass::Entails,
    ContextClass::Excludes,
];

/// A family consisting of the single conditional event `P|S` under the
/// given context class.
pub fn single_event_family(class: ContextClass) -> Arc<Family> {
    let free = EventContext::unconstrained(vec!["P", "S"]).unwrap();
    let ctx = match class {
        ContextClass::Independent => free,
        ContextClass::Entails => {
            let c = free.parse("!S | P").unwrap();
            EventContext::new(vec!["P", "S"], vec![c]).unwrap()
        }
        ContextClass::Excludes => {
            let c = free.parse("!S | !P").unwrap();
            EventContext::new(vec!["P", "S"], vec![c]).unwrap()
        }
    };
    let ce = ConditionalEvent::new(&ctx, ctx.atom("P").unwrap(), ctx.atom("S").unwrap()).unwrap();
    Arc::new(Family::new(ctx, vec![ce]).unwrap())
}

/// The complementary pair `(E|H, !E|H)` over unconstrained atoms.
pub fn complementary_pair_family() -> Arc<Family> {
    let ctx = EventContext::unconstrained(vec!["E", "H"]).unwrap();
    let e = ctx.atom("E").unwrap();
    let h = ctx.atom("H").unwrap();
    let first = ConditionalEvent::new(&ctx, e.clone(), h.clone()).unwrap();
    let second = ConditionalEvent::new(&ctx, e.negated(), h).unwrap();
    Arc::new(Family::new(ctx, vec![first, second]).unwrap())
}

/// `n` conditional events over `2n` unconstrained atoms.
pub fn independent_family(n: usize) -> Arc<Family> {
    let mut atoms = Vec::new();
    for i in 1..=n {
        atoms.push(format!("P{i}"));
        atoms.push(format!("S{i}"));
    }
    let ctx = EventContext::unconstrained(atoms).unwrap();
    let mut events = Vec::new();
    for i in 1..=n {
        let p = ctx.atom(&format!("P{i}")).unwrap();
        let s = ctx.atom(&format!("S{i}")).unwrap();
        events.push(ConditionalEvent::new(&ctx, p, s).unwrap());
    }
    Arc::new(Family::new(ctx, events).unwrap())
}

/// The threshold sweep used throughout the verification suites.
pub fn threshold_sweep() -> Vec<Threshold> {
    [
        rat(51, 100),
        rat(3, 5),
        rat(2, 3),
        rat(3, 4),
        rat(9, 10),
        rint(1),
    ]
    .into_iter()
    .map(|x| Threshold::new(x).unwrap())
    .collect()
}

/// Interval region `[lo, hi]` with the stated endpoint flags.
pub fn interval_region(lo: Rational, lo_closed: bool, hi: Rational, hi_closed: bool) -> Region {
    Region::segment(Interval::new(lo, lo_closed, hi, hi_closed).unwrap())
}
