use qflag::collections::{self, Move};
use qflag::par::Mode;
use qflag::qcluster;
use qflag::seeds;

#[test]
fn exchange_moves_match_seed_mutation() {
    let c = collections::extended_rectangle(5, &[1, 2, 3, 4], 2).unwrap();
    let seed = seeds::seed_from_collection(&c, Mode::Sequential).unwrap();
    let mut seen = 0;
    for mv in collections::available_moves(&c) {
        let Move::Exchange { .. } = mv else { continue };
        let (out, added) = mv.sets().unwrap();
        let k = seed.index_of(&out).unwrap();
        let mutated = seeds::mutate(&seed, k).unwrap();
        let moved = collections::apply_move(&c, &mv).unwrap();
        assert!(moved.contains(&added));
        let fresh = seeds::seed_from_collection(&moved, Mode::Sequential).unwrap();
        assert!(mutated.same_data(&fresh), "{mv:?}");
        seen += 1;
    }
    assert!(seen > 0);
}

#[test]
fn reach_returns_a_valid_path() {
    let c = collections::rectangle(6, 3).unwrap();
    let target = qflag::KSet::new(6, vec![1, 3, 5]).unwrap();
    let moves = collections::reach(&c, &target, 6, Mode::Parallel).expect("reachable");
    let mut cur = c;
    for mv in &moves {
        cur = collections::apply_move(&cur, mv).unwrap();
        assert!(cur.is_pairwise_ws());
    }
    assert!(cur.contains(&target));
}

#[test]
fn mutating_there_and_back_restores_the_torus_generators() {
    let c = collections::rectangle(5, 2).unwrap();
    let seed = seeds::seed_from_collection(&c, Mode::Sequential).unwrap();
    let back = qcluster::replay(seed.clone(), &[0, 1, 0, 0, 1, 0]).unwrap();
    assert!(back.seed.same_data(&seed));
    assert_eq!(back.vars, qcluster::ClusterState::initial(seed).vars);
}

#[test]
fn sequential_and_parallel_seeds_agree() {
    let c = collections::extended_rectangle(6, &[2, 3, 4], 3).unwrap();
    let s = seeds::seed_from_collection(&c, Mode::Sequential).unwrap();
    let p = seeds::seed_from_collection(&c, Mode::Parallel).unwrap();
    assert!(s.same_data(&p));
}
