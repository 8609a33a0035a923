//! Property suites: the set-algebra laws over random regions, equivalence
//! and round-trip laws for formulas, the coherence/Dutch-book agreement on
//! random families, and the square/hexagon theorems on randomized inputs.

mod common;

use std::sync::Arc;

use proptest::prelude::*;

use common::*;
use opposition_core::{
    check_coherence, find_dutch_book, g_coherent, pi_equal, rat, rint, Cell, ConditionalEvent,
    EventContext, Family, Formula, LinearConstraint, PiBackend, PointAssessment, Rational, Region,
    Sentence, Truth,
};

// ---------------------------------------------------------------------------
// Strategies
// ---------------------------------------------------------------------------

fn rational_in_range() -> impl Strategy<Value = Rational> {
    // Numerators straddling the cube a little, small denominators.
    (-2i64..=6, 2i64..=5).prop_map(|(n, d)| rat(n, d))
}

fn coefficient() -> impl Strategy<Value = Rational> {
    prop_oneof![
        Just(rat(1, 1)),
        Just(rat(-1, 1)),
        Just(rat(1, 2)),
        Just(rat(-1, 2)),
        Just(rat(2, 1)),
        Just(rat(-2, 1)),
    ]
}

#[derive(Clone, Copy, Debug)]
enum Rel {
    Le,
    Lt,
    Eq,
    Ge,
    Gt,
}

fn relation() -> impl Strategy<Value = Rel> {
    prop_oneof![
        3 => Just(Rel::Le),
        3 => Just(Rel::Lt),
        3 => Just(Rel::Ge),
        3 => Just(Rel::Gt),
        1 => Just(Rel::Eq),
    ]
}

fn constraint(dim: usize) -> impl Strategy<Value = LinearConstraint> {
    let coords = prop_oneof![
        4 => prop::collection::vec(0..dim, 1),
        1 => prop::collection::vec(0..dim, 2),
    ];
    (
        coords,
        prop::collection::vec(coefficient(), 2),
        relation(),
        rational_in_range(),
    )
        .prop_map(|(coords, coefs, rel, bound)| {
            let terms: Vec<(usize, Rational)> = coords.into_iter().zip(coefs).collect();
            match rel {
                Rel::Le => LinearConstraint::le(terms, bound),
                Rel::Lt => LinearConstraint::lt(terms, bound),
                Rel::Eq => LinearConstraint::eq(terms, bound),
                Rel::Ge => LinearConstraint::ge(terms, bound),
                Rel::Gt => LinearConstraint::gt(terms, bound),
            }
        })
}

fn region(dim: usize) -> impl Strategy<Value = Region> {
    prop::collection::vec(prop::collection::vec(constraint(dim), 0..=3), 0..=3).prop_map(
        move |cells| {
            let cells = cells
                .into_iter()
                .map(|cs| Cell::new(dim, cs).unwrap())
                .collect();
            Region::from_cells(dim, cells).unwrap()
        },
    )
}

fn any_region() -> impl Strategy<Value = Region> {
    (1usize..=3).prop_flat_map(region)
}

fn formula(atoms: usize) -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        6 => (0..atoms).prop_map(Formula::Atom),
        1 => Just(Formula::True),
        1 => Just(Formula::False),
    ];
    leaf.prop_recursive(3, 16, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.and(b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.or(b)),
            inner.prop_map(|a| a.negated()),
        ]
    })
}

/// A consistent context over `k <= 3` atoms with up to two constraints, plus
/// a family of 1..=3 events with satisfiable antecedents.
fn small_family() -> impl Strategy<Value = Family> {
    (1usize..=3)
        .prop_flat_map(|k| {
            (
                Just(k),
                prop::collection::vec(formula(k), 0..=2),
                prop::collection::vec((formula(k), formula(k)), 1..=3),
            )
        })
        .prop_filter_map(
            "consistent context and possible antecedents",
            |(k, cs, evs)| {
                let atoms: Vec<String> = (0..k).map(|i| format!("X{i}")).collect();
                let ctx = EventContext::new(atoms, cs).ok()?;
                let mut events = Vec::new();
                for (e, h) in evs {
                    events.push(ConditionalEvent::new(&ctx, e, h).ok()?);
                }
                Family::new(ctx, events).ok()
            },
        )
}

fn grid_value(denom: i64) -> impl Strategy<Value = Rational> {
    (0..=denom).prop_map(move |n| rat(n, denom))
}

// ---------------------------------------------------------------------------
// LP self-verification
// ---------------------------------------------------------------------------

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn lp_optima_satisfy_their_own_problems(
        n in 1usize..=4,
        rows in prop::collection::vec(
            (prop::collection::vec(-4i64..=4, 4), 0usize..3, -6i64..=6),
            1..=5,
        ),
        objective in prop::collection::vec(-3i64..=3, 4),
        free_mask in prop::collection::vec(any::<bool>(), 4),
    ) {
        use opposition_core::lp::{maximize, LpOutcome, LpProblem, LpRelation};
        let mut lp = LpProblem::new(n);
        lp.objective = objective.iter().take(n).map(|&c| rat(c, 1)).collect();
        lp.free = free_mask.iter().take(n).copied().collect();
        // Bound every variable so the problem cannot be unbounded.
        for v in 0..n {
            let mut hi = vec![rat(0, 1); n];
            hi[v] = rat(1, 1);
            lp.constrain(hi.clone(), LpRelation::Le, rat(5, 1));
            let mut lo = vec![rat(0, 1); n];
            lo[v] = rat(-1, 1);
            lp.constrain(lo, LpRelation::Le, rat(5, 1));
        }
        let mut relations = Vec::new();
        for (coeffs, rel_idx, rhs) in &rows {
            let rel = match rel_idx {
                0 => LpRelation::Le,
                1 => LpRelation::Ge,
                _ => LpRelation::Eq,
            };
            relations.push(rel);
            lp.constrain(
                coeffs.iter().take(n).map(|&c| rat(c, 1)).collect(),
                rel,
                rat(*rhs, 1),
            );
        }
        match maximize(&lp) {
            LpOutcome::Optimal { value, point } => {
                prop_assert_eq!(point.len(), n);
                for (v, x) in point.iter().enumerate() {
                    if !lp.free[v] {
                        prop_assert!(x >= &rat(0, 1));
                    }
                }
                for c in &lp.constraints {
                    let lhs: Rational = c
                        .coeffs
                        .iter()
                        .zip(&point)
                        .map(|(a, x)| a * x)
                        .fold(rat(0, 1), |acc, t| acc + t);
                    let ok = match c.relation {
                        LpRelation::Le => lhs <= c.rhs,
                        LpRelation::Ge => lhs >= c.rhs,
                        LpRelation::Eq => lhs == c.rhs,
                    };
                    prop_assert!(ok, "constraint violated at the optimum");
                }
                let objective_at_point: Rational = lp
                    .objective
                    .iter()
                    .zip(&point)
                    .map(|(c, x)| c * x)
                    .fold(rat(0, 1), |acc, t| acc + t);
                prop_assert_eq!(value, objective_at_point);
            }
            LpOutcome::Infeasible => {}
            LpOutcome::Unbounded => {
                prop_assert!(false, "boxed problems cannot be unbounded");
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Region algebra laws
// ---------------------------------------------------------------------------

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn complement_is_an_involution(r in any_region()) {
        let back = r.complement().complement();
        prop_assert!(back.equal(&r).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn de_morgan_on_random_pairs((r1, r2) in (1usize..=2).prop_flat_map(|d| (region(d), region(d)))) {
        let lhs = r1.union(&r2).unwrap().complement();
        let rhs = r1.complement().intersect(&r2.complement()).unwrap();
        prop_assert!(lhs.equal(&rhs).unwrap());

        let lhs2 = r1.intersect(&r2).unwrap().complement();
        let rhs2 = r1.complement().union(&r2.complement()).unwrap();
        prop_assert!(lhs2.equal(&rhs2).unwrap());
    }

    #[test]
    fn meet_and_join_are_monotone((r1, r2) in (1usize..=3).prop_flat_map(|d| (region(d), region(d)))) {
        prop_assert!(r1.intersect(&r2).unwrap().subset(&r1).unwrap());
        prop_assert!(r1.subset(&r1.union(&r2).unwrap()).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn grid_oracle_agrees_on_nonemptiness(r in (1usize..=2).prop_flat_map(region)) {
        // If any lattice point of step 1/16 lies inside, the region is
        // nonempty; and every witness the LP produces must be a member.
        let dim = r.dim();
        let mut hit = false;
        let mut idx = vec![0i64; dim];
        'outer: loop {
            let p: Vec<Rational> = idx.iter().map(|&k| rat(k, 16)).collect();
            if r.contains_point(&p).unwrap() {
                hit = true;
                break;
            }
            let mut c = dim;
            while c > 0 {
                if idx[c - 1] < 16 {
                    idx[c - 1] += 1;
                    continue 'outer;
                }
                idx[c - 1] = 0;
                c -= 1;
            }
            break;
        }
        if hit {
            prop_assert!(!r.is_empty());
        }
        if let Some(w) = r.find_point() {
            prop_assert!(r.contains_point(&w).unwrap());
        } else {
            prop_assert!(r.is_empty());
        }
    }
}

// ---------------------------------------------------------------------------
// Formula laws
// ---------------------------------------------------------------------------

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn equivalence_is_an_equivalence_relation(
        (f, g, h) in (formula(4), formula(4), formula(4))
    ) {
        let ctx = EventContext::unconstrained(vec!["X0", "X1", "X2", "X3"]).unwrap();
        prop_assert!(ctx.equivalent(&f, &f));
        prop_assert_eq!(ctx.equivalent(&f, &g), ctx.equivalent(&g, &f));
        if ctx.equivalent(&f, &g) && ctx.equivalent(&g, &h) {
            prop_assert!(ctx.equivalent(&f, &h));
        }
    }

    #[test]
    fn printing_then_parsing_preserves_equivalence(f in formula(4)) {
        let ctx = EventContext::unconstrained(vec!["X0", "X1", "X2", "X3"]).unwrap();
        let printed = ctx.display(&f);
        let parsed = ctx.parse(&printed).unwrap();
        prop_assert!(ctx.equivalent(&f, &parsed), "`{}` reparsed differently", printed);
    }
}

// ---------------------------------------------------------------------------
// Coherence kernel laws
// ---------------------------------------------------------------------------

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn dutch_book_agrees_with_coherence(
        fam in small_family(),
        raw in prop::collection::vec(0i64..=8, 3)
    ) {
        let values: Vec<Rational> = raw.iter().take(fam.len()).map(|&n| rat(n, 8)).collect();
        prop_assume!(values.len() == fam.len());
        let assessment = PointAssessment::new(values).unwrap();
        let coherent = check_coherence(&fam, &assessment).unwrap();
        let book = find_dutch_book(&fam, &assessment).unwrap();
        prop_assert_eq!(coherent, book.is_none());
        if let Some(b) = book {
            prop_assert!(
                b.gains.iter().all(|(_, g)| g > &rint(0))
                    || b.gains.iter().all(|(_, g)| g < &rint(0))
            );
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn certified_family_laws_on_random_intervals(
        class in prop_oneof![
            Just(ContextClass::Independent),
            Just(ContextClass::Entails),
            Just(ContextClass::Excludes)
        ],
        lo in grid_value(8),
        hi in grid_value(8),
        lo_closed in any::<bool>(),
        hi_closed in any::<bool>(),
    ) {
        let (lo, hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
        let (lo_closed, hi_closed) =
            if lo == hi { (true, true) } else { (lo_closed, hi_closed) };
        let fam = single_event_family(class);
        let r = interval_region(lo, lo_closed, hi, hi_closed);

        // The exact and mass-LP backends agree.
        let exact = g_coherent(&fam, &r, &PiBackend::Exact).unwrap();
        let lambda = g_coherent(&fam, &r, &PiBackend::LambdaLp).unwrap();
        prop_assert_eq!(exact, lambda);

        // At least one of a region and its complement contains a coherent
        // point: the coherent set is never empty.
        let other = g_coherent(&fam, &r.complement(), &PiBackend::Exact).unwrap();
        prop_assert!(exact.is_true() || other.is_true());

        // Growing the region preserves g-coherence.
        if exact.is_true() {
            let grown = r.union(&interval_region(rat(1, 4), true, rat(1, 2), true)).unwrap();
            prop_assert!(g_coherent(&fam, &grown, &PiBackend::Exact).unwrap().is_true());
        }
    }
}

#[test]
fn complementary_pair_coherence_is_exactly_the_sum_law() {
    let fam = complementary_pair_family();
    for n in 0..=10i64 {
        for m in 0..=10i64 {
            let assessment = PointAssessment::new(vec![rat(n, 10), rat(m, 10)]).unwrap();
            let coherent = check_coherence(&fam, &assessment).unwrap();
            assert_eq!(coherent, n + m == 10, "({n}/10, {m}/10)");
        }
    }
}

#[test]
fn intersection_law_at_grid_points() {
    // A coherent point lies in both regions iff it lies in their meet.
    let fam = single_event_family(ContextClass::Independent);
    let r1 = interval_region(rat(1, 4), true, rat(3, 4), true);
    let r2 = interval_region(rat(1, 2), false, rint(1), true);
    let meet = r1.intersect(&r2).unwrap();
    for n in 0..=10i64 {
        let p = vec![rat(n, 10)];
        let assessment = PointAssessment::new(p.clone()).unwrap();
        if !check_coherence(&fam, &assessment).unwrap() {
            continue;
        }
        let both = r1.contains_point(&p).unwrap() && r2.contains_point(&p).unwrap();
        assert_eq!(meet.contains_point(&p).unwrap(), both);
    }
}

// ---------------------------------------------------------------------------
// Sentence laws
// ---------------------------------------------------------------------------

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn sentence_laws_on_random_interval_sentences(
        (a1, b1, a2, b2) in (grid_value(8), grid_value(8), grid_value(8), grid_value(8))
    ) {
        let fam = single_event_family(ContextClass::Independent);
        let mk = |lo: Rational, hi: Rational| -> Sentence {
            let (lo, hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
            Sentence::new(fam.clone(), interval_region(lo, true, hi, true)).unwrap()
        };
        let s1 = mk(a1, b1);
        let s2 = mk(a2, b2);
        let backend = PiBackend::Exact;

        // Conjunction acceptability entails both conjuncts'.
        if s1.and(&s2).unwrap().is_acceptable(&backend).unwrap().is_true() {
            prop_assert!(s1.is_acceptable(&backend).unwrap().is_true());
            prop_assert!(s2.is_acceptable(&backend).unwrap().is_true());
        }

        // A sentence or its negation is acceptable.
        prop_assert!(
            s1.is_acceptable(&backend).unwrap().is_true()
                || s1.not().is_acceptable(&backend).unwrap().is_true()
        );

        // Contradictoriness is equivalence with the negation.
        let contradictory =
            opposition_core::contradictory(&s1, &s2, &backend).unwrap();
        let equiv_to_neg =
            opposition_core::equivalent(&s2, &s1.not(), &backend).unwrap();
        prop_assert_eq!(contradictory, equiv_to_neg);

        // Disjunction is a subaltern of each disjunct; each conjunct has the
        // conjunction                as superaltern.
        let join = s1.or(&s2).unwrap();
        prop_assert!(opposition_core::subaltern(&s1, &join, &backend).unwrap().is_true());
        let meet = s1.and(&s2).unwrap();
        prop_assert!(opposition_core::subaltern(&meet, &s1, &backend).unwrap().is_true());

        // Subalternation composes.
        prop_assert!(opposition_core::subaltern(&meet, &join, &backend).unwrap().is_true());
    }
}

#[test]
fn verdicts_survive_adding_incoherent_padding() {
    // Under "S implies P" the set [0,1/4] contains no coherent point, so
    // padding any assessment with it must not change any verdict.
    let fam = single_event_family(ContextClass::Entails);
    let backend = PiBackend::Exact;
    let padding = interval_region(rint(0), true, rat(1, 4), true);
    let r1 = interval_region(rat(3, 4), true, rint(1), true);
    let r2 = interval_region(rat(1, 2), true, rint(1), true);
    let s1 = Sentence::new(fam.clone(), r1.clone()).unwrap();
    let s2 = Sentence::new(fam.clone(), r2.clone()).unwrap();
    let s1_padded = Sentence::new(fam.clone(), r1.union(&padding).unwrap()).unwrap();
    let s2_padded = Sentence::new(fam.clone(), r2.union(&padding).unwrap()).unwrap();

    assert!(opposition_core::equivalent(&s1, &s1_padded, &backend)
        .unwrap()
        .is_true());
    let before = s1.and(&s2).unwrap().is_acceptable(&backend).unwrap();
    let after = s1_padded
        .and(&s2_padded)
        .unwrap()
        .is_acceptable(&backend)
        .unwrap();
    assert_eq!(before, after);
    let before_or = s1.or(&s2).unwrap().is_acceptable(&backend).unwrap();
    let after_or = s1_padded
        .or(&s2_padded)
        .unwrap()
        .is_acceptable(&backend)
        .unwrap();
    assert_eq!(before_or, after_or);
}

// ---------------------------------------------------------------------------
// Square and hexagon theorems on randomized tripartitions
// ---------------------------------------------------------------------------

/// A random three-way interval split of `[0,1]` from one or two cut points,
/// as regions in randomized slot order.
fn random_tripartition() -> impl Strategy<Value = [Region; 3]> {
    (
        grid_value(12),
        grid_value(12),
        any::<bool>(),
        any::<bool>(),
        0usize..6,
    )
        .prop_map(|(c1, c2, first_open, second_open, perm)| {
            let (c1, c2) = if c1 <= c2 { (c1, c2) } else { (c2, c1) };
            let pieces = split_unit_interval(&c1, &c2, first_open, second_open);
            permute3(pieces, perm)
        })
}

/// `[0,c1] ]c1,c2] ]c2,1]`-style split with the boundary memberships chosen
/// by the flags; empty pieces are allowed.
fn split_unit_interval(
    c1: &Rational,
    c2: &Rational,
    first_open: bool,
    second_open: bool,
) -> [Region; 3] {
    let zero = rint(0);
    let one = rint(1);
    let piece = |lo: &Rational, lo_in: bool, hi: &Rational, hi_in: bool| -> Region {
        if lo > hi || (lo == hi && !(lo_in && hi_in)) {
            Region::empty(1)
        } else {
            interval_region(lo.clone(), lo_in, hi.clone(), hi_in)
        }
    };
    // Boundary c1 belongs left when `first_open`, else right; same for c2.
    let p1 = piece(&zero, true, c1, first_open);
    let p2 = piece(c1, !first_open, c2, second_open);
    let p3 = piece(c2, !second_open, &one, true);
    [p1, p2, p3]
}

fn permute3(parts: [Region; 3], perm: usize) -> [Region; 3] {
    let [a, b, c] = parts;
    match perm % 6 {
        0 => [a, b, c],
        1 => [a, c, b],
        2 => [b, a, c],
        3 => [b, c, a],
        4 => [c, a, b],
        _ => [c, b, a],
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn tripartition_squares_verify_and_round_trip(parts in random_tripartition()) {
        use opposition_core::{
            extract_tripartition, square_from_tripartition, verify_square,
            verify_square_minimal, Tripartition,
        };
        let [d1, d2, d3] = parts;
        let tri = match Tripartition::of_cube(d1.clone(), d2.clone(), d3.clone()) {
            Ok(t) => t,
            Err(_) => {
                // Degenerate coincident cuts can make two pieces overlap at
                // a point; those are correctly rejected.
                return Ok(());
            }
        };
        let fam = single_event_family(ContextClass::Independent);
        let square = square_from_tripartition(&tri, &fam).unwrap();
        let backend = PiBackend::Exact;
        let verdict = verify_square(square.sentences(), &backend).unwrap();
        prop_assert_eq!(verdict.overall(), Truth::True);
        prop_assert_eq!(verify_square_minimal(square.sentences(), &backend).unwrap(), Truth::True);

        // Swapping the columns preserves the square.
        let swapped = square.swapped();
        prop_assert_eq!(
            verify_square(swapped.sentences(), &backend).unwrap().overall(),
            Truth::True
        );

        let extracted = extract_tripartition(&square, &backend).unwrap();
        for (original, recovered) in [d1, d2, d3].iter().zip(extracted.parts()) {
            prop_assert_eq!(pi_equal(&fam, original, recovered, &backend).unwrap(), Truth::True);
        }
    }

    #[test]
    fn minimal_and_full_verification_agree_on_perturbed_quadruples(
        parts in random_tripartition(),
        damage in 0usize..4,
    ) {
        use opposition_core::{square_from_tripartition, verify_square, verify_square_minimal, Tripartition};
        let [d1, d2, d3] = parts;
        let tri = match Tripartition::of_cube(d1, d2, d3) {
            Ok(t) => t,
            Err(_) => return Ok(()),
        };
        let fam = single_event_family(ContextClass::Independent);
        let square = square_from_tripartition(&tri, &fam).unwrap();
        let mut quad = square.into_sentences();
        // Replace one slot with an interval that usually breaks the square.
        quad[damage] = Sentence::new(fam, interval_region(rat(1, 3), true, rat(2, 3), true)).unwrap();
        let backend = PiBackend::Exact;
        let full = verify_square(&quad, &backend).unwrap().overall();
        let minimal = verify_square_minimal(&quad, &backend).unwrap();
        prop_assert_eq!(full, minimal);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn contrary_pairs_generate_verified_hexagons(
        (a1, b1, a2, b2) in (grid_value(10), grid_value(10), grid_value(10), grid_value(10)),
        closed_flags in prop::collection::vec(any::<bool>(), 4),
    ) {
        use opposition_core::{hexagon_from_contraries, hexagon_relations, verify_hexagon};
        // Two disjoint nonempty intervals: [a1..b1] strictly below [a2..b2].
        let (lo1, hi1) = if a1 <= b1 { (a1, b1) } else { (b1, a1) };
        let (lo2, hi2) = if a2 <= b2 { (a2, b2) } else { (b2, a2) };
        prop_assume!(hi1 < lo2);
        let mut f = closed_flags;
        f.resize(4, true);
        let degenerate1 = lo1 == hi1;
        let degenerate2 = lo2 == hi2;
        let r1 = interval_region(lo1, f[0] || degenerate1, hi1, f[1] || degenerate1);
        let r2 = interval_region(lo2, f[2] || degenerate2, hi2, f[3] || degenerate2);

        let fam = single_event_family(ContextClass::Independent);
        let s1 = Sentence::new(fam.clone(), r1.clone()).unwrap();
        let s2 = Sentence::new(fam, r2.clone()).unwrap();
        let backend = PiBackend::Exact;
        let hexagon = hexagon_from_contraries(&s1, &s2, &backend).unwrap();
        let verdict = verify_hexagon(hexagon.sentences(), &backend).unwrap();
        prop_assert_eq!(verdict.overall(), Truth::True);

        // Component shapes are the negations, the join and the meet.
        let ss = hexagon.sentences();
        prop_assert!(ss[2].region().equal(&r2.complement()).unwrap());
        prop_assert!(ss[3].region().equal(&r1.complement()).unwrap());
        prop_assert!(ss[4].region().equal(&r1.union(&r2).unwrap()).unwrap());
        prop_assert!(ss[5]
            .region()
            .equal(&r1.complement().intersect(&r2.complement()).unwrap())
            .unwrap());

        // All nine relations, and the two triangles.
        for r in hexagon_relations(&hexagon, &backend).unwrap() {
            prop_assert_eq!(r.holds, Truth::True, "{} failed", r.label);
        }
        let contrary = |x: &Sentence, y: &Sentence| {
            opposition_core::contrary(x, y, &backend).unwrap()
        };
        let subcontrary = |x: &Sentence, y: &Sentence| {
            opposition_core::subcontrary(x, y, &backend).unwrap()
        };
        prop_assert!(contrary(&ss[0], &ss[1]).is_true());
        prop_assert!(contrary(&ss[0], &ss[5]).is_true());
        prop_assert!(contrary(&ss[1], &ss[5]).is_true());
        prop_assert!(subcontrary(&ss[2], &ss[3]).is_true());
        prop_assert!(subcontrary(&ss[2], &ss[4]).is_true());
        prop_assert!(subcontrary(&ss[3], &ss[4]).is_true());
    }
}

// ---------------------------------------------------------------------------
// Quantifier region structure
// ---------------------------------------------------------------------------

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn threshold_square_contradictory_regions(num in 26i64..=50) {
        use opposition_core::{basic_square, Threshold};
        let x = Threshold::new(rat(num, 50)).unwrap();
        let fam = single_event_family(ContextClass::Independent);
        let sq = basic_square(&x, &fam).unwrap();
        let [a, e, i, o] = sq.square.sentences();
        prop_assert!(o.region().equal(&a.region().complement()).unwrap());
        prop_assert!(i.region().equal(&e.region().complement()).unwrap());
    }
}

#[test]
fn dual_scale_phrasings_have_equal_coherent_parts() {
    // Over (P|S, !P|S): bounding the negated consequent from below by x is
    // the same sentence, up to t-coherence, as bounding the consequent from
    // above by 1-x.
    let ctx = EventContext::unconstrained(vec!["P", "S"]).unwrap();
    let p = ctx.atom("P").unwrap();
    let s = ctx.atom("S").unwrap();
    let plain = ConditionalEvent::new(&ctx, p.clone(), s.clone()).unwrap();
    let negated = ConditionalEvent::new(&ctx, p.negated(), s).unwrap();
    let fam = Arc::new(Family::new(ctx, vec![plain, negated]).unwrap());

    for x in threshold_sweep() {
        let co = x.co();
        let lifted_negated = product_region(
            interval_region(rint(0), true, rint(1), true),
            interval_region(x.value().clone(), true, rint(1), true),
        );
        let lifted_plain = product_region(
            interval_region(rint(0), true, co, true),
            interval_region(rint(0), true, rint(1), true),
        );
        assert_eq!(
            pi_equal(&fam, &lifted_negated, &lifted_plain, &PiBackend::Exact).unwrap(),
            Truth::True,
            "threshold {x}"
        );
    }
}

fn product_region(first: Region, second: Region) -> Region {
    use opposition_core::Relation;
    let mut cells = Vec::new();
    for c1 in first.cells() {
        for c2 in second.cells() {
            let mut constraints = Vec::new();
            for c in c1.constraints() {
                constraints.push(remap(c, 0));
            }
            for c in c2.constraints() {
                constraints.push(remap(c, 1));
            }
            cells.push(Cell::new(2, constraints).unwrap());
        }
    }
    fn remap(c: &LinearConstraint, coord: usize) -> LinearConstraint {
        let coeffs: Vec<(usize, Rational)> = c.coeffs().map(|(_, a)| (coord, a.clone())).collect();
        match c.relation() {
            Relation::Eq => LinearConstraint::eq(coeffs, c.bound().clone()),
            Relation::Le => LinearConstraint::le(coeffs, c.bound().clone()),
            Relation::Lt => LinearConstraint::lt(coeffs, c.bound().clone()),
        }
    }
    Region::from_cells(2, cells).unwrap()
}
