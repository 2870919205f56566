//! Brute-force oracles shared by the integration and acceptance targets.
//! They only use positions and plain loops.
#![allow(dead_code)]

use std::collections::BTreeSet;

use leachsim::field::{distance, Field, NodeId, Position};
use leachsim::protocols::{assign_modified, assign_nearest, elect_heads_leach_c};
use leachsim::NodeState;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const INSTANCES: usize = 1000;

fn random_field(rng: &mut ChaCha8Rng, n: usize) -> Field {
    // coarse grid of coordinates so that distance ties actually happen
    let nodes = (0..n)
        .map(|_| Position::new(rng.gen_range(0..=20) as f64 * 5.0, rng.gen_range(0..=20) as f64 * 5.0))
        .collect();
    let bs = Position::new(rng.gen_range(-50.0..150.0), rng.gen_range(-50.0..200.0));
    Field::new(nodes, bs, 100.0, 100.0).unwrap()
}

fn split(rng: &mut ChaCha8Rng, n: usize) -> (Vec<NodeId>, Vec<NodeId>) {
    let mut ids: Vec<NodeId> = (0..n).map(NodeId).collect();
    ids.shuffle(rng);
    let h = rng.gen_range(1..=n.min(6));
    let (heads, members) = ids.split_at(h);
    (members.to_vec(), heads.to_vec())
}

/// Scan all heads; keep the first strictly nearer one in ascending id order.
fn brute_nearest(field: &Field, m: NodeId, heads: &[NodeId], filter: impl Fn(NodeId) -> bool) -> Option<NodeId> {
    let mut ordered = heads.to_vec();
    ordered.sort();
    let pm = field.positions()[m.0];
    let mut best: Option<(f64, NodeId)> = None;
    for h in ordered.into_iter().filter(|&h| filter(h)) {
        let d = distance(pm, field.positions()[h.0]);
        match best {
            Some((bd, _)) if d >= bd => {}
            _ => best = Some((d, h)),
        }
    }
    best.map(|(_, h)| h)
}

/// Number of instances where `assign_nearest` disagrees with the scan.
pub fn assign_nearest_mismatches(seed: u64) -> usize {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bad = 0;
    for _ in 0..INSTANCES {
        let n = rng.gen_range(1..=20);
        let f = random_field(&mut rng, n);
        let (members, heads) = split(&mut rng, n);
        let Ok(got) = assign_nearest(&members, &heads, &f) else {
            bad += 1;
            continue;
        };
        let ok = got.len() == members.len()
            && members
                .iter()
                .all(|&m| got.get(&m).copied() == brute_nearest(&f, m, &heads, |_| true));
        bad += usize::from(!ok);
    }
    bad
}

pub fn assign_modified_mismatches(seed: u64) -> usize {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bad = 0;
    for _ in 0..INSTANCES {
        let n = rng.gen_range(1..=20);
        let f = random_field(&mut rng, n);
        let (mut members, heads) = split(&mut rng, n);
        if rng.gen_bool(0.1) {
            // no heads at all: everyone must go direct
            members.extend(&heads);
            let (membership, direct) = assign_modified(&members, &[], &f);
            bad += usize::from(!membership.is_empty() || direct.len() != members.len());
            continue;
        }
        let (membership, direct) = assign_modified(&members, &heads, &f);
        let bs = f.bs();
        let mut ok = heads.iter().all(|h| !direct.contains(h) && !membership.contains_key(h));
        for &m in &members {
            let own = distance(f.positions()[m.0], bs);
            ok &= match brute_nearest(&f, m, &heads, |h| distance(f.positions()[h.0], bs) < own) {
                Some(h) => membership.get(&m) == Some(&h) && !direct.contains(&m),
                None => direct.contains(&m) && !membership.contains_key(&m),
            };
        }
        bad += usize::from(!ok);
    }
    bad
}

fn cost(field: &Field, alive: &[NodeId], heads: &[NodeId]) -> f64 {
    alive
        .iter()
        .map(|&a| {
            heads
                .iter()
                .map(|&h| {
                    let d = distance(field.positions()[a.0], field.positions()[h.0]);
                    d * d
                })
                .fold(f64::INFINITY, f64::min)
        })
        .sum()
}

fn subsets(items: &[NodeId], k: usize) -> Vec<Vec<NodeId>> {
    if k == 0 {
        return vec![vec![]];
    }
    if items.len() < k {
        return vec![];
    }
    let mut out = Vec::new();
    for (i, &first) in items.iter().enumerate() {
        for mut rest in subsets(&items[i + 1..], k - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Instances (n <= 12, k <= 3) where the centralized election misses the
/// exhaustive optimum or picks an ineligible head.
pub fn leach_c_mismatches(seed: u64) -> usize {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bad = 0;
    let mut done = 0;
    while done < INSTANCES {
        let n = rng.gen_range(1..=12);
        let k = rng.gen_range(1..=3);
        let nodes = (0..n)
            .map(|_| Position::new(rng.gen_range(0.0..100.0), rng.gen_range(0.0..100.0)))
            .collect();
        let f = Field::new(nodes, Position::new(50.0, 125.0), 100.0, 100.0).unwrap();
        let mut states: Vec<NodeState> = (0..n).map(|i| NodeState::new(NodeId(i), 1.0)).collect();
        for s in &mut states {
            s.residual = rng.gen_range(0.1..1.0);
            if rng.gen_bool(0.1) {
                s.alive = false;
                s.residual = 0.0;
            }
        }
        let alive: Vec<NodeId> = states.iter().filter(|s| s.alive).map(|s| s.id).collect();
        if alive.is_empty() {
            continue;
        }
        done += 1;
        let avg = alive.iter().map(|a| states[a.0].residual).sum::<f64>() / alive.len() as f64;
        let eligible: Vec<NodeId> = alive.iter().copied().filter(|a| states[a.0].residual >= avg).collect();
        let kk = k.min(eligible.len());
        let best = subsets(&eligible, kk)
            .iter()
            .map(|s| cost(&f, &alive, s))
            .fold(f64::INFINITY, f64::min);

        let got: BTreeSet<NodeId> = match elect_heads_leach_c(&states, &f, k) {
            Ok(g) => g,
            Err(_) => {
                bad += 1;
                continue;
            }
        };
        let ok_set = got.len() == kk && got.iter().all(|h| eligible.contains(h));
        let got_cost = cost(&f, &alive, &got.into_iter().collect::<Vec<_>>());
        bad += usize::from(!ok_set || (got_cost - best).abs() > 1e-9 * best.max(1.0));
    }
    bad
}

/// Two heads, one near the station and one far from it, with members
/// scattered between them.
pub fn redundant_transfer_scene() -> (Field, Vec<NodeId>, Vec<NodeId>) {
    let pts = [
        (50.0, 80.0), // 0: head near the station
        (50.0, 20.0), // 1: head far from the station
        (50.0, 35.0), // 2: nearest head is 1, which lies farther out
        (62.0, 28.0), // 3: same situation
        (50.0, 70.0), // 4: joins 0 either way
        (38.0, 76.0), // 5: joins 0 either way
    ];
    let nodes = pts.iter().map(|&(x, y)| Position::new(x, y)).collect();
    let f = Field::new(nodes, Position::new(50.0, 100.0), 100.0, 100.0).unwrap();
    (f, vec![NodeId(0), NodeId(1)], (2..6).map(NodeId).collect())
}

/// Members whose first hop moves them away from the station, under plain
/// nearest-head assignment and under the modified rule.
pub fn outward_first_hops(field: &Field, heads: &[NodeId], members: &[NodeId]) -> (Vec<NodeId>, Vec<NodeId>) {
    let bs = field.bs();
    let away = |m: NodeId, h: NodeId| distance(field.position(h), bs) > distance(field.position(m), bs);
    let plain = assign_nearest(members, heads, field).unwrap();
    let (modified, _) = assign_modified(members, heads, field);
    let pick = |a: &std::collections::BTreeMap<NodeId, NodeId>| {
        a.iter().filter(|(&m, &h)| away(m, h)).map(|(&m, _)| m).collect()
    };
    (pick(&plain), pick(&modified))
}
