#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use bratteli::diagram::{weld, Edge, Half};
use bratteli::scalar::{int, rat};
use bratteli::{DiagramSpec, HalfWeights, Rational, WeightPair};

/// Random one-sided ordered diagram with no empty rows or columns.
pub fn random_half(rng: &mut ChaCha8Rng, c0: usize, depth: usize, width: usize) -> Half {
    let mut counts = vec![c0];
    let mut edges = Vec::new();
    for _ in 0..depth {
        let lo = *counts.last().unwrap();
        let hi = rng.random_range(1..=width);
        let mut pairs = Vec::new();
        for v in 0..hi {
            pairs.push((rng.random_range(0..lo), v));
        }
        for u in 0..lo {
            pairs.push((u, rng.random_range(0..hi)));
        }
        for _ in 0..rng.random_range(0..=lo + hi) {
            pairs.push((rng.random_range(0..lo), rng.random_range(0..hi)));
        }
        // shuffle so ranks are not tied to insertion order
        for i in (1..pairs.len()).rev() {
            let j = rng.random_range(0..=i);
            pairs.swap(i, j);
        }
        let mut r_next = vec![0; hi];
        let mut s_next = vec![0; lo];
        let level = pairs
            .into_iter()
            .map(|(u, v)| {
                r_next[v] += 1;
                s_next[u] += 1;
                Edge::new(u, v, r_next[v], s_next[u])
            })
            .collect();
        counts.push(hi);
        edges.push(level);
    }
    Half::new(counts, edges)
}

/// Weights valid by construction: pick positive masses on the top level and
/// push them down, `w(u) = sum of w(r(e))` over outgoing edges.
pub fn random_weights(rng: &mut ChaCha8Rng, half: &Half) -> HalfWeights<Rational> {
    let d = half.depth();
    let mut mass: Vec<Vec<Rational>> = vec![Vec::new(); d + 1];
    mass[d] = (0..half.count(d)).map(|_| rat(rng.random_range(1..20), rng.random_range(1..20))).collect();
    for i in (0..d).rev() {
        let mut m = vec![int(0); half.count(i)];
        for e in half.edges(i + 1) {
            m[e.src] = m[e.src].clone() + mass[i + 1][e.dst].clone();
        }
        mass[i] = m;
    }
    let total = mass[0].iter().fold(int(0), |a, b| a + b.clone());
    let edges = (1..=d)
        .map(|i| half.edges(i).iter().map(|e| mass[i][e.dst].clone() / mass[i - 1][e.src].clone()).collect())
        .collect();
    HalfWeights { root: mass[0].iter().map(|m| m.clone() / total.clone()).collect(), edges }
}

pub struct Random {
    pub spec: DiagramSpec,
    pub weights: WeightPair<Rational>,
    pub pos: Half,
    pub neg: Half,
}

/// Welded random diagram with weights normalized so the area is 1.
pub fn random_diagram(seed: u64, pos_depth: usize, neg_depth: usize) -> Random {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let c0 = rng.random_range(1..=3);
    let pos = random_half(&mut rng, c0, pos_depth, 3);
    let neg = random_half(&mut rng, c0, neg_depth, 3);
    let plus = random_weights(&mut rng, &pos);
    let mut minus = random_weights(&mut rng, &neg);
    let area = plus.root.iter().zip(&minus.root).fold(int(0), |a, (p, m)| a + p.clone() * m.clone());
    for r in &mut minus.root {
        *r = r.clone() / area.clone();
    }
    let spec = weld(&pos, &neg).unwrap();
    Random { spec, weights: WeightPair { plus, minus }, pos, neg }
}
