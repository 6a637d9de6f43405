// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

mod common;

use std::collections::BTreeSet;

use common::*;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use symmap::symmetry::{apply_to_vertices, orbit};
use symmap::*;

fn random_graph(seed: u64, n: usize, p: f64) -> CouplingGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n as u32 {
        for v in u + 1..n as u32 {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    CouplingGraph::new(n, edges).unwrap()
}

fn chip_of(family: u8, n: u32) -> Chip {
    match family % 3 {
        0 => grid(3 * n, 3 * n).unwrap(),
        1 => octagonal(n, n).unwrap(),
        _ => heavy_hex(n, n).unwrap(),
    }
}

/// True when every coordinate is at least `margin` (L-infinity) inside the
/// chip's bounding box, so the lattice ball of that radius is complete.
fn interior(chip: &Chip, vs: impl IntoIterator<Item = VertexId>, margin: i32) -> bool {
    let coords = chip.graph().coords().unwrap();
    let hi = coords.iter().fold(Coord::ORIGIN, |a, c| Coord::new(a.x.max(c.x), a.y.max(c.y)));
    vs.into_iter().all(|v| {
        let c = coords[v as usize];
        c.x >= margin && c.y >= margin && c.x <= hi.x - margin && c.y <= hi.y - margin
    })
}

fn random_group_element<R: Rng>(rng: &mut R, chip: &Chip, bound: i32) -> Translation {
    let g = chip.group().generators();
    let (i, j) = (rng.gen_range(-bound..=bound), rng.gen_range(-bound..=bound));
    Translation::new(g[0].shift.x * i + g[1].shift.x * j, g[0].shift.y * i + g[1].shift.y * j)
}

/// Random circuit whose interaction graph is a random connected pattern of
/// max degree 3.
fn random_circuit<R: Rng>(rng: &mut R, max_gates: usize) -> Circuit {
    let k = rng.gen_range(1..=6);
    let p = loop {
        let p = random_connected(rng, k, 1);
        if p.graph().max_degree() <= 3 {
            break p;
        }
    };
    let mut gates: Vec<Gate> = p.graph().edges().iter().map(|&(a, b)| Gate::new("cx", &[a, b])).collect();
    let target = rng.gen_range(gates.len().max(1)..=max_gates);
    while gates.len() < target {
        let q = rng.gen_range(0..k);
        gates.push(match rng.gen_range(0..4) {
            0 => Gate::new("measure", &[q]),
            1 if !p.graph().edges().is_empty() => {
                let &(a, b) = p.graph().edges().choose(rng).unwrap();
                Gate::new("cz", &[b, a])
            }
            _ => Gate::new(["h", "x", "rz", "sx"][rng.gen_range(0..4)], &[q]),
        });
    }
    gates.shuffle(rng);
    Circuit::new(k, gates).unwrap()
}

fn rel_close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

proptest! {
    #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::with_cases(64) })]

    #[test]
    fn eccentricity_bounds_radius(seed: u64, n in 1usize..30) {
        let g = random_graph(seed, n, 0.25);
        if g.is_connected() {
            let (r, c) = g.radius().unwrap();
            prop_assert_eq!(g.eccentricity(c).unwrap().finite(), Some(r));
            for v in g.vertices() {
                prop_assert!(g.eccentricity(v).unwrap().finite().unwrap() >= r);
            }
        } else {
            prop_assert!(g.radius().is_err());
        }
    }

    #[test]
    fn neighborhoods_grow_one_hop_at_a_time(seed: u64, n in 1usize..30, k in 0u32..5) {
        let g = random_graph(seed, n, 0.15);
        let seedset: VertexSet = g.vertices().filter(|v| v % 7 == (seed % 7) as u32).collect();
        let nk = g.neighborhood(&seedset, k).unwrap();
        let nk1 = g.neighborhood(&seedset, k + 1).unwrap();
        prop_assert!(nk.is_subset(&nk1));
        let mut step = seedset.clone();
        for _ in 0..k {
            step = g.neighborhood(&step, 1).unwrap();
        }
        prop_assert_eq!(step, nk);
    }

    #[test]
    fn distance_is_a_metric(seed: u64, n in 1usize..30) {
        let g = random_graph(seed, n, 0.2);
        let d: Vec<Vec<Distance>> = g.vertices().map(|v| g.distances_from(v).unwrap()).collect();
        let f = |x: Distance| x.finite().map_or(u64::MAX / 4, u64::from);
        for u in 0..n {
            prop_assert_eq!(d[u][u], Distance::Finite(0));
            for v in 0..n {
                prop_assert_eq!(d[u][v], d[v][u]);
                prop_assert!(u == v || d[u][v] != Distance::Finite(0));
                for w in 0..n {
                    prop_assert!(f(d[u][w]) <= f(d[u][v]) + f(d[v][w]));
                }
            }
        }
    }

    #[test]
    fn induced_on_everything_is_identity(seed: u64, n in 0usize..30) {
        let g = random_graph(seed, n, 0.2);
        let all: VertexSet = g.vertices().collect();
        prop_assert_eq!(g.induced_subgraph(&all).unwrap(), g);
    }

    #[test]
    fn translations_preserve_distance(seed: u64, family in 0u8..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let chip = chip_of(family, 6);
        let n = chip.order() as u32;
        let (u, v) = (rng.gen_range(0..n), rng.gen_range(0..n));
        let t = random_group_element(&mut rng, &chip, 2);
        let moved = apply_to_vertices(&t, &chip, &BTreeSet::from([u])).unwrap()
            .zip(apply_to_vertices(&t, &chip, &BTreeSet::from([v])).unwrap());
        if let Some((tu, tv)) = moved {
            let (tu, tv) = (tu.into_iter().next().unwrap(), tv.into_iter().next().unwrap());
            let d = chip.graph().distance(u, v).unwrap().finite().unwrap();
            let dt = chip.graph().distance(tu, tv).unwrap().finite().unwrap();
            let m = d.max(dt) as i32;
            if interior(&chip, [u, v, tu, tv], m) {
                prop_assert_eq!(d, dt);
            }
        }
    }

    #[test]
    fn neighborhoods_commute_with_translation(seed: u64, family in 0u8..3, m in 0u32..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let chip = chip_of(family, 6);
        let n = chip.order() as u32;
        let s: VertexSet = (0..rng.gen_range(1..=3)).map(|_| rng.gen_range(0..n)).collect();
        let t = random_group_element(&mut rng, &chip, 2);
        if let Some(ts) = apply_to_vertices(&t, &chip, &s).unwrap() {
            if interior(&chip, s.iter().chain(&ts).copied(), m as i32) {
                let lhs = chip.graph().neighborhood(&ts, m).unwrap();
                let rhs = apply_to_vertices(&t, &chip, &chip.graph().neighborhood(&s, m).unwrap()).unwrap();
                prop_assert_eq!(Some(lhs), rhs);
            }
        }
    }

    #[test]
    fn translation_composes(seed: u64, family in 0u8..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let chip = chip_of(family, 4);
        let n = chip.order() as u32;
        let s: VertexSet = (0..3).map(|_| rng.gen_range(0..n)).collect();
        let (t1, t2) = (random_group_element(&mut rng, &chip, 1), random_group_element(&mut rng, &chip, 1));
        let stepwise = apply_to_vertices(&t2, &chip, &s).unwrap()
            .and_then(|x| apply_to_vertices(&t1, &chip, &x).unwrap());
        if let Some(a) = stepwise {
            prop_assert_eq!(Some(a), apply_to_vertices(&t1.compose(t2), &chip, &s).unwrap());
        }
    }

    #[test]
    fn match_count_within_bound_and_valid(seed: u64, family in 0u8..3, size in 2u32..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let chip = chip_of(family, size);
        let k = rng.gen_range(0..3);
        let chip = chip.with_defects(random_defects(&mut rng, &chip, k)).unwrap();
        let m = rng.gen_range(1..=6);
        let extra = rng.gen_range(0..2);
        let p = random_connected(&mut rng, m, extra);
        let got = sbsm_match(&p, &chip);
        if let Ok(got) = got {
            let bound = match_count_bound(chip.order(), chip.graph().max_degree(), p.order());
            prop_assert!((got.len() as u128) <= bound);
            assert_valid(&p, &chip, &got);
            prop_assert_eq!(got, vf2_match_chip(&p, &chip).unwrap());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::with_cases(48) })]

    #[test]
    fn vectorized_scores_equal_loop(seed: u64, family in 0u8..3, size in 1u32..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let chip = chip_of(family, size + 1);
        let c = random_circuit(&mut rng, 50);
        let p = interaction_graph(&c).unwrap();
        let params = GaussianParams { e_min: rng.gen_range(0.0..0.01), e_max: rng.gen_range(0.01..0.2), ..Default::default() };
        let e = gaussian_error_map(&chip, &params).unwrap();
        if let Ok(m) = sbsm_match(&p, &chip) {
            let a = score_loop(&m, &c, &e).unwrap();
            let b = score_vectorized(&m, &c, &e).unwrap();
            prop_assert_eq!(a.len(), m.len());
            for (x, y) in a.iter().zip(&b) {
                prop_assert!(rel_close(*x, *y));
                prop_assert!((0.0..=1.0).contains(x));
            }
            prop_assert_eq!(&b, &score_vectorized_parallel(&m, &c, &e).unwrap());

            let zero = ErrorMap::uniform(&chip, 0.0).unwrap();
            prop_assert!(score_vectorized(&m, &c, &zero).unwrap().iter().all(|&s| s == 1.0));
        }
    }

    #[test]
    fn gate_order_does_not_matter(seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let chip = grid(6, 6).unwrap();
        let c = random_circuit(&mut rng, 40);
        let mut perm: Vec<usize> = (0..c.gates().len()).collect();
        perm.shuffle(&mut rng);
        let shuffled = c.permuted(&perm).unwrap();
        let e = gaussian_error_map(&chip, &GaussianParams::default()).unwrap();
        let m = sbsm_match(&interaction_graph(&c).unwrap(), &chip).unwrap();
        let a = score_vectorized(&m, &c, &e).unwrap();
        let b = score_vectorized(&m, &shuffled, &e).unwrap();
        for (x, y) in a.iter().zip(&b) {
            prop_assert!(rel_close(*x, *y));
        }
    }

    #[test]
    fn raising_a_rate_never_raises_a_score(seed: u64, bump in 0.0f64..0.5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let chip = heavy_hex(2, 2).unwrap();
        let c = random_circuit(&mut rng, 30);
        let e = gaussian_error_map(&chip, &GaussianParams::default()).unwrap();
        let Ok(m) = sbsm_match(&interaction_graph(&c).unwrap(), &chip) else { return Ok(()) };
        let mut e1 = e.e1_rates().clone();
        let mut e2 = e.e2_rates().clone();
        let mut em = e.em_rates().clone();
        match rng.gen_range(0..3) {
            0 => { let k = *e1.keys().nth(rng.gen_range(0..e1.len())).unwrap(); let r = e1[&k]; e1.insert(k, (r + bump).min(0.999)); }
            1 => { let k = *e2.keys().nth(rng.gen_range(0..e2.len())).unwrap(); let r = e2[&k]; e2.insert(k, (r + bump).min(0.999)); }
            _ => { let k = *em.keys().nth(rng.gen_range(0..em.len())).unwrap(); let r = em[&k]; em.insert(k, (r + bump).min(0.999)); }
        }
        let worse = ErrorMap::new(e1, e2, em).unwrap();
        let before = score_vectorized(&m, &c, &e).unwrap();
        let after = score_vectorized(&m, &c, &worse).unwrap();
        for (b, a) in before.iter().zip(&after) {
            prop_assert!(a <= b);
        }
    }

    #[test]
    fn best_mappings_follow_a_translated_error_map(seed: u64, dx in -3i32..=3, dy in -3i32..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let chip = grid(16, 16).unwrap();
        let c = random_circuit(&mut rng, 20);
        let center = (7.0 + rng.gen_range(-1..=1) as f64, 7.0 + rng.gen_range(-1..=1) as f64);
        let params = GaussianParams { sigma: Some(2.0), center: Some(center), ..Default::default() };
        let moved = GaussianParams { center: Some((center.0 + dx as f64, center.1 + dy as f64)), ..params };
        let p = interaction_graph(&c).unwrap();
        if sbsm_match(&p, &chip).unwrap().is_empty() {
            return Ok(());
        }
        let best = |p: &GaussianParams| -> BTreeSet<Mapping> {
            let r = sbcm(&c, &chip, &gaussian_error_map(&chip, p).unwrap()).unwrap();
            r.scores.iter().take_while(|s| s.score == r.best.score).map(|s| s.mapping.clone()).collect()
        };
        let t = Translation::new(dx, dy);
        let shifted: BTreeSet<Mapping> = best(&params)
            .iter()
            .map(|m| symmap::symmetry::apply_to_mapping(&t, &chip, &p, m).unwrap().unwrap())
            .collect();
        prop_assert_eq!(shifted, best(&moved));
    }

    #[test]
    fn gaussian_rates_grow_with_distance(seed: u64, family in 0u8..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let chip = chip_of(family, 4);
        let center = (rng.gen_range(0.0..8.0), rng.gen_range(0.0..8.0));
        let e = gaussian_error_map(&chip, &GaussianParams { center: Some(center), ..Default::default() }).unwrap();
        let mut by_dist: Vec<(f64, f64)> = chip
            .graph()
            .vertices()
            .map(|v| {
                let c = chip.coord(v).unwrap();
                ((c.x as f64 - center.0).hypot(c.y as f64 - center.1), e.e1(v).unwrap())
            })
            .collect();
        by_dist.sort_by(|a, b| a.0.total_cmp(&b.0));
        for w in by_dist.windows(2) {
            prop_assert!(w[0].1 <= w[1].1 || w[0].0 == w[1].0);
        }
    }
}

#[test]
fn orbits_partition_each_chip() {
    for chip in [grid(4, 3).unwrap(), octagonal(2, 3).unwrap(), heavy_hex(3, 2).unwrap()] {
        let mut seen = vec![0usize; chip.order()];
        let mut classes = BTreeSet::new();
        for v in chip.graph().vertices() {
            let o = orbit(chip.group(), &chip, v).unwrap();
            assert!(o.contains(&v));
            classes.insert(o);
        }
        for o in &classes {
            for &v in o {
                seen[v as usize] += 1;
            }
        }
        assert!(seen.iter().all(|&k| k == 1), "{}", chip.family());
        assert_eq!(classes.len(), chip.lattice().sites_per_cell().min(chip.order()));
    }
}

#[test]
fn gaussian_map_is_symmetric_about_the_center() {
    let chip = grid(9, 7).unwrap();
    let e = gaussian_error_map(&chip, &GaussianParams::default()).unwrap();
    for v in chip.graph().vertices() {
        let c = chip.coord(v).unwrap();
        let mirror = chip.live_vertex_at(Coord::new(8 - c.x, 6 - c.y)).unwrap();
        assert_eq!(e.e1(v), e.e1(mirror));
    }
}
