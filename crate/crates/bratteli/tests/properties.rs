mod common;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use bratteli::cas::{iet_at_depth, path_interval};
use bratteli::diagram::{heights, incidence_matrix, label_of_upper, telescope, validate_diagram, Edge};
use bratteli::ergodicity::{tunneling, tunneling_bruteforce};
use bratteli::pathspace::{all_paths, successor, Successor};
use bratteli::renorm::renorm_scales;
use bratteli::scalar::int;
use bratteli::surface::build_surface;
use bratteli::weights::{check_weight_conditions, vertex_weights};
use bratteli::{DiagramSpec, Rational, WeightedHalf};

use common::random_diagram;

fn sorted_levels(spec: &DiagramSpec) -> Vec<Vec<Edge>> {
    spec.uppers()
        .map(|u| {
            let mut es = spec.edges(u).to_vec();
            es.sort();
            es
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn random_specs_validate_with_full_matrices(seed in any::<u64>(), p in 1usize..5, n in 1usize..4) {
        let r = random_diagram(seed, p, n);
        prop_assert!(validate_diagram(&r.spec).is_ok());
        for u in r.spec.uppers() {
            let m = incidence_matrix(&r.spec, label_of_upper(u)).unwrap();
            prop_assert!(m.entries.iter().all(|row| row.iter().any(|&x| x > 0)));
            prop_assert!((0..m.cols()).all(|j| m.entries.iter().any(|row| row[j] > 0)));
        }
    }

    #[test]
    fn heights_are_matrix_products(seed in any::<u64>(), p in 1usize..6) {
        let r = random_diagram(seed, p, 1);
        let h0: Vec<Rational> = (0..r.spec.count(0)).map(|i| int(i as i64 + 2)).collect();
        let hs = heights(&r.spec, &h0, p).unwrap();
        let mut v = h0.clone();
        for k in 1..=p {
            let m = incidence_matrix(&r.spec, k as i64).unwrap();
            v = m.entries.iter().map(|row| row.iter().zip(&v).fold(int(0), |a, (&c, x)| a + int(c as i64) * x.clone())).collect();
            prop_assert_eq!(&hs[k], &v);
        }
    }

    #[test]
    fn telescoping_composes(seed in any::<u64>()) {
        let r = random_diagram(seed, 5, 3);
        let once = telescope(&r.spec, &[-3, -1, 0, 2, 3, 5]).unwrap();
        // levels of `once`: -2..=3; keep -2, 0, 1, 3 of those
        let twice = telescope(&once, &[-2, 0, 1, 3]).unwrap();
        let direct = telescope(&r.spec, &[-3, 0, 2, 5]).unwrap();
        prop_assert_eq!(twice.counts(), direct.counts());
        prop_assert_eq!(sorted_levels(&twice), sorted_levels(&direct));
    }

    #[test]
    fn constructed_weights_pass_and_conserve_mass(seed in any::<u64>(), p in 1usize..5) {
        let r = random_diagram(seed, p, 2);
        let rep = check_weight_conditions(&r.spec, &r.weights, p, None).unwrap();
        prop_assert!(rep.is_ok(), "{:?}", rep.violations);
        let vw = vertex_weights(&r.pos, &r.weights.plus).unwrap();
        prop_assert_eq!(vw[0].iter().fold(int(0), |a, b| a + b.clone()), int(1));
        for i in 1..=p {
            let mut pushed = vec![int(0); r.pos.count(i - 1)];
            for e in r.pos.edges(i) {
                pushed[e.src] = pushed[e.src].clone() + vw[i][e.dst].clone();
            }
            prop_assert_eq!(&pushed, &vw[i - 1]);
        }
    }

    #[test]
    fn vertex_weight_is_path_independent(seed in any::<u64>()) {
        let r = random_diagram(seed, 4, 1);
        let vw = vertex_weights(&r.pos, &r.weights.plus).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..100 {
            // random walk down from a random top vertex
            let mut v = rng.random_range(0..r.pos.count(4));
            let top = v;
            let mut w = int(1);
            for i in (1..=4).rev() {
                let ins = r.pos.incoming(i, v);
                let k = ins[rng.random_range(0..ins.len())];
                w = w * r.weights.plus.edges[i - 1][k].clone();
                v = r.pos.edge(i, k).src;
            }
            prop_assert_eq!(r.weights.plus.root[v].clone() * w, vw[4][top].clone());
        }
    }

    #[test]
    fn iets_preserve_measure_and_nest(seed in any::<u64>(), k in 1usize..5) {
        let r = random_diagram(seed, k, 1);
        let wh = WeightedHalf::new(r.pos.clone(), r.weights.plus.clone()).unwrap();
        let fine = iet_at_depth(&wh, k).unwrap();
        let (src, img, disjoint) = fine.measure_check();
        prop_assert_eq!(src, img);
        prop_assert!(disjoint);
        // top levels have total length of the level-k masses
        let vw = vertex_weights(&r.pos, &r.weights.plus).unwrap();
        let top = vw[k].iter().fold(int(0), |a, b| a + b.clone());
        prop_assert_eq!(fine.undefined_length(), top.clone());
        let scales = renorm_scales(&r.spec, &r.weights, k).unwrap();
        prop_assert_eq!(int(1) / scales[k].clone(), top);
        if k >= 2 {
            let coarse = iet_at_depth(&wh.truncated(k - 1), k - 1).unwrap();
            for c in &coarse.pieces {
                let inside: Vec<_> = fine.pieces.iter().filter(|f| f.lo >= c.lo && f.hi <= c.hi).collect();
                let len = inside.iter().fold(int(0), |a, f| a + f.hi.clone() - f.lo.clone());
                prop_assert_eq!(len, c.hi.clone() - c.lo.clone());
                prop_assert!(inside.iter().all(|f| f.offset == c.offset));
            }
        }
    }

    #[test]
    fn successor_and_iet_commute(seed in any::<u64>(), k in 1usize..5) {
        let r = random_diagram(seed, k, 1);
        let wh = WeightedHalf::new(r.pos.clone(), r.weights.plus.clone()).unwrap();
        let iet = iet_at_depth(&wh, k).unwrap();
        for p in all_paths(&r.pos, k, 1 << 16).unwrap() {
            let (lo, width) = path_interval(&wh, &p).unwrap();
            let piece = iet.pieces.iter().find(|pc| pc.lo == lo);
            match successor(&r.pos, &p).unwrap() {
                Successor::Next(q) => {
                    let (lo2, width2) = path_interval(&wh, &q).unwrap();
                    let pc = piece.expect("non-maximal paths have a piece");
                    prop_assert_eq!(&pc.hi, &(lo.clone() + width.clone()));
                    prop_assert_eq!(lo + pc.offset.clone(), lo2);
                    prop_assert_eq!(width, width2);
                }
                Successor::Maximal => prop_assert!(piece.is_none()),
            }
        }
    }

    #[test]
    fn tunneling_matches_path_search(seed in any::<u64>(), k in 0i64..3) {
        let r = random_diagram(seed, 5, 3);
        let (up, down) = tunneling(&r.spec, k, 16).unwrap();
        let (bu, bd) = tunneling_bruteforce(&r.spec, k, 16).unwrap();
        prop_assert_eq!(up.finite(), bu);
        prop_assert_eq!(down.finite(), bd);
    }

    #[test]
    fn random_surfaces_have_unit_area(seed in any::<u64>(), stretch in 1i64..50) {
        let r = random_diagram(seed, 3, 3);
        let s = build_surface(&r.spec, &r.weights, 3).unwrap();
        prop_assert_eq!(s.area(), int(1));
        prop_assert_eq!(s.teichmuller(&(int(stretch) / int(7))).unwrap().area(), int(1));
    }
}
