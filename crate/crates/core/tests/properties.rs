use loony::amalgamation;
use loony::model::{format, parse};
use loony::{Component, Endgame, Kind, Oracle};
use proptest::prelude::*;

fn component(max_chain: u64, max_loop: u64, odd_loops: bool) -> impl Strategy<Value = Component> {
    prop_oneof![
        (3..=max_chain).prop_map(|n| Component::chain(n).unwrap()),
        (4..=max_loop)
            .prop_filter("parity", move |n| odd_loops || n % 2 == 0)
            .prop_map(|n| Component::loop_of(n).unwrap()),
    ]
}

fn small_game(max_parts: usize) -> impl Strategy<Value = Endgame> {
    prop::collection::vec(component(8, 10, false), 0..=max_parts).prop_map(Endgame::from_components)
}

fn any_game() -> impl Strategy<Value = Endgame> {
    prop::collection::vec(
        // at most 2^121 boxes per part keeps six parts under the size limit
        (component(1 << 63, 1 << 63, true), 1..1u64 << 58),
        0..6,
    )
    .prop_map(|parts| {
        let mut g = Endgame::new();
        for (c, n) in parts {
            g.insert(c, n);
        }
        g
    })
}

proptest! {
    #[test]
    fn format_then_parse_is_identity(g in any_game()) {
        let text = format(&g);
        prop_assert_eq!(parse(&text).unwrap(), g.clone());
        prop_assert_eq!(format(&parse(&text).unwrap()), text);
    }

    #[test]
    fn summaries_add(a in any_game(), b in any_game()) {
        prop_assert_eq!((a.clone() + b.clone()).summary(), a.summary() + b.summary());
    }

    #[test]
    fn summary_box_count(g in any_game()) {
        prop_assert_eq!(g.summary().total_boxes(), g.total_boxes());
    }

    #[test]
    fn solver_agrees_with_oracle(g in small_game(7)) {
        let mut o = Oracle::new();
        let r = loony::solver::value_of(&g).unwrap();
        prop_assert_eq!(r.value, o.value(&g));
        prop_assert!(r.restarts <= 3);
        if !g.is_empty() {
            let m = loony::solver::best_open(&g).unwrap();
            prop_assert!(o.optimal_opens(&g).unwrap().contains(&m.open));
            prop_assert_eq!(Some(m.move_value), o.move_value(&g, m.open));
        }
    }

    #[test]
    fn move_values_match_oracle(g in small_game(6)) {
        let mut o = Oracle::new();
        for c in g.distinct() {
            prop_assert_eq!(Some(loony::solver::move_value(&g, c).unwrap()), o.move_value(&g, c));
        }
    }

    #[test]
    fn control_decision_matches_oracle(g in small_game(5), c in component(8, 10, false)) {
        let mut o = Oracle::new();
        let solver = loony::solver::control_decision(&g.summary(), c.kind()).unwrap();
        prop_assert_eq!(solver, o.decision(&g, c));
    }

    #[test]
    fn neighbouring_lengths_change_value_by_at_most_the_difference(
        g in small_game(3), m in 3u64..=8, d in 0u64..=5, loops in any::<bool>(),
    ) {
        let mut o = Oracle::new();
        let (kind, m) = if loops { (Kind::Loop, m + 1) } else { (Kind::Chain, m) };
        let n = m + d;
        let vm = o.value(&g.clone().with(Component::new(kind, m).unwrap(), 1));
        let vn = o.value(&g.clone().with(Component::new(kind, n).unwrap(), 1));
        prop_assert!((vm - vn).abs() <= (n - m) as i128);
    }

    #[test]
    fn amalgamation_preserves_value(g in prop::collection::vec(component(9, 11, true), 0..=5)) {
        let g = Endgame::from_components(g);
        let mut o = Oracle::new();
        let r = amalgamation::reduce(&g);
        prop_assert_eq!(o.value(&r.reduced), o.value(&g));
        let opt = o.optimal_opens(&g).unwrap_or_default();
        let reduced_opt = o.optimal_opens(&r.reduced).unwrap_or_default();
        for c in reduced_opt {
            prop_assert!(opt.contains(&r.to_original(c)), "{} -> {}", c, r.to_original(c));
        }
    }
}
