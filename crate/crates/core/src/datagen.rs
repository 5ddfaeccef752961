//! Seeded generators for synthetic trees and forests.
//!
//! Every node carries the label `Node` and a 1-based `node_id`; every edge is
//! `CHILD_OF`, pointing child to parent. Fanouts are drawn uniformly from the
//! configured range, restricted to values that keep the remaining node count
//! reachable, so bounds hold exactly whenever they can be.

use std::collections::BTreeMap;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::forest::{Orientation, TreeSpec};
use crate::graph::{labels, NodeId, Properties, PropertyGraph, PropertyValue, KEY_PROPERTY};

pub const NODE_LABEL: &str = "Node";
pub const EDGE_LABEL: &str = "CHILD_OF";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Shape {
    /// Breadth-first fill: every node gets a full fanout before the next level.
    Wide,
    /// One long spine; each spine node's other children are leaves.
    Deep,
    /// `n_trees` wide trees of random sizes.
    Forest,
    /// Random recursive trees; only `fanout_max` is enforced.
    Random,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GenConfig {
    pub shape: Shape,
    pub n_nodes: usize,
    pub fanout_min: usize,
    pub fanout_max: usize,
    #[serde(default = "one")]
    pub n_trees: usize,
    #[serde(default)]
    pub seed: u64,
}

fn one() -> usize {
    1
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DatagenError {
    #[error("infeasible generator config: {0}")]
    InfeasibleConfig(String),
}

impl GenConfig {
    pub fn new(shape: Shape, n_nodes: usize, fanout_min: usize, fanout_max: usize) -> GenConfig {
        GenConfig {
            shape,
            n_nodes,
            fanout_min,
            fanout_max,
            n_trees: 1,
            seed: 0,
        }
    }

    pub fn with_trees(mut self, n_trees: usize) -> GenConfig {
        self.n_trees = n_trees;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> GenConfig {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<(), DatagenError> {
        let fail = |m: &str| Err(DatagenError::InfeasibleConfig(m.to_owned()));
        if self.fanout_min == 0 || self.fanout_min > self.fanout_max {
            return fail("need 1 <= fanout_min <= fanout_max");
        }
        if self.n_trees == 0 || self.n_trees > self.n_nodes {
            return fail("need 1 <= n_trees <= n_nodes");
        }
        if self.n_trees > 1 && matches!(self.shape, Shape::Wide | Shape::Deep) {
            return fail("wide and deep shapes build a single tree");
        }
        Ok(())
    }
}

/// The five synthetic graphs of the benchmark, in report order.
pub fn presets() -> Vec<(&'static str, GenConfig)> {
    vec![
        ("WT1", GenConfig::new(Shape::Wide, 100, 4, 6).with_seed(1)),
        ("WT2", GenConfig::new(Shape::Wide, 1_000, 7, 9).with_seed(2)),
        ("WT3", GenConfig::new(Shape::Wide, 10_000, 9, 11).with_seed(3)),
        ("DT", GenConfig::new(Shape::Deep, 10_000, 1, 3).with_seed(4)),
        (
            "TF",
            GenConfig::new(Shape::Forest, 40, 1, 2).with_trees(11).with_seed(5),
        ),
    ]
}

pub fn preset(name: &str) -> Option<GenConfig> {
    presets()
        .into_iter()
        .find(|(n, _)| n.eq_ignore_ascii_case(name))
        .map(|(_, c)| c)
}

/// The spec every generated graph satisfies.
pub fn generated_spec() -> TreeSpec {
    TreeSpec::new([EDGE_LABEL], Orientation::ChildToParent)
}

pub fn generate(c: &GenConfig) -> Result<(PropertyGraph, TreeSpec), DatagenError> {
    c.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(c.seed);
    let mut b = Builder::default();
    match c.shape {
        Shape::Wide => b.wide(&mut rng, c.n_nodes, c.fanout_min, c.fanout_max),
        Shape::Deep => b.deep(&mut rng, c.n_nodes, c.fanout_min, c.fanout_max),
        Shape::Forest => {
            for size in split(&mut rng, c.n_nodes, c.n_trees) {
                b.wide(&mut rng, size, c.fanout_min, c.fanout_max);
            }
        }
        Shape::Random => {
            for size in split(&mut rng, c.n_nodes, c.n_trees) {
                b.random(&mut rng, size, c.fanout_max);
            }
        }
    }
    Ok((b.finish(), generated_spec()))
}

/// Random composition of `n` into `k` positive parts.
fn split(rng: &mut ChaCha8Rng, n: usize, k: usize) -> Vec<usize> {
    let mut cuts: Vec<usize> = sample(rng, n - 1, k - 1).into_iter().map(|i| i + 1).collect();
    cuts.sort_unstable();
    cuts.push(n);
    let mut prev = 0;
    cuts.into_iter()
        .map(|c| {
            let part = c - prev;
            prev = c;
            part
        })
        .collect()
}

/// True if `r` nodes can be split into fanouts drawn from `[lo, hi]`.
fn representable(r: usize, lo: usize, hi: usize) -> bool {
    r == 0 || r.div_ceil(hi) <= r / lo
}

/// Uniform fanout among values that keep the remainder representable; falls
/// back to taking everything that is left.
fn draw_fanout(rng: &mut ChaCha8Rng, remaining: usize, lo: usize, hi: usize) -> usize {
    let ok: Vec<usize> = (lo..=hi.min(remaining))
        .filter(|k| representable(remaining - k, lo, hi))
        .collect();
    if ok.is_empty() {
        remaining
    } else {
        ok[rng.random_range(0..ok.len())]
    }
}

/// Parent links in creation order; node `i` gets key `i + 1`.
#[derive(Default)]
struct Builder {
    parent: Vec<Option<usize>>,
}

impl Builder {
    fn node(&mut self, parent: Option<usize>) -> usize {
        self.parent.push(parent);
        self.parent.len() - 1
    }

    fn wide(&mut self, rng: &mut ChaCha8Rng, n: usize, lo: usize, hi: usize) {
        let root = self.node(None);
        let mut remaining = n - 1;
        let mut queue = std::collections::VecDeque::from([root]);
        while remaining > 0 {
            let p = queue.pop_front().expect("fanout >= 1 keeps the queue non-empty");
            let k = draw_fanout(rng, remaining, lo, hi);
            for _ in 0..k {
                queue.push_back(self.node(Some(p)));
            }
            remaining -= k;
        }
    }

    fn deep(&mut self, rng: &mut ChaCha8Rng, n: usize, lo: usize, hi: usize) {
        let mut spine = self.node(None);
        let mut remaining = n - 1;
        while remaining > 0 {
            let k = draw_fanout(rng, remaining, lo, hi);
            let first = self.node(Some(spine));
            for _ in 1..k {
                self.node(Some(spine));
            }
            spine = first;
            remaining -= k;
        }
    }

    fn random(&mut self, rng: &mut ChaCha8Rng, n: usize, hi: usize) {
        let root = self.node(None);
        let mut open = vec![root];
        let mut fanout = BTreeMap::new();
        for _ in 1..n {
            let i = rng.random_range(0..open.len());
            let p = open[i];
            let c = self.node(Some(p));
            let f = fanout.entry(p).or_insert(0usize);
            *f += 1;
            if *f == hi {
                open.swap_remove(i);
            }
            open.push(c);
        }
    }

    fn finish(self) -> PropertyGraph {
        let mut g = PropertyGraph::new();
        for i in 0..self.parent.len() {
            let mut props = Properties::new();
            props.insert(KEY_PROPERTY.into(), PropertyValue::Int(i as i64 + 1));
            g.add_node(labels([NODE_LABEL]), props).expect("fresh keys");
        }
        for (i, p) in self.parent.iter().enumerate() {
            if let Some(p) = p {
                g.add_edge(NodeId(i as u32), NodeId(*p as u32), EDGE_LABEL, Properties::new())
                    .expect("nodes exist");
            }
        }
        g
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forest::{forest_stats, verify_forest};

    fn fanouts(g: &PropertyGraph) -> Vec<usize> {
        g.node_ids()
            .map(|n| g.neighbors(n, EDGE_LABEL, crate::graph::Direction::In).unwrap().len())
            .filter(|k| *k > 0)
            .collect()
    }

    #[test]
    fn presets_table() {
        let names: Vec<_> = presets().into_iter().map(|(n, _)| n).collect();
        assert_eq!(names, ["WT1", "WT2", "WT3", "DT", "TF"]);
        assert_eq!(preset("WT3").unwrap().n_nodes, 10_000);
        assert_eq!(preset("DT").unwrap().fanout_max, 3);
        assert_eq!(preset("tf").unwrap().n_trees, 11);
    }

    #[test]
    fn wt1_fanouts_within_bounds() {
        let (g, spec) = generate(&preset("WT1").unwrap()).unwrap();
        assert_eq!(g.node_count(), 100);
        assert_eq!(g.edge_count(), 99);
        assert!(fanouts(&g).iter().all(|k| (4..=6).contains(k)), "{:?}", fanouts(&g));
        assert_eq!(verify_forest(&g, &spec).unwrap().roots().len(), 1);
    }

    #[test]
    fn tf_is_eleven_trees() {
        let (g, spec) = generate(&preset("TF").unwrap()).unwrap();
        let f = verify_forest(&g, &spec).unwrap();
        assert_eq!((g.node_count(), f.roots().len()), (40, 11));
        assert!(fanouts(&g).iter().all(|k| (1..=2).contains(k)));
    }

    #[test]
    fn single_node() {
        let (g, _) = generate(&GenConfig::new(Shape::Wide, 1, 2, 3)).unwrap();
        assert_eq!((g.node_count(), g.edge_count()), (1, 0));
    }

    #[test]
    fn depth_sanity() {
        let (g, spec) = generate(&preset("DT").unwrap()).unwrap();
        assert!(forest_stats(&verify_forest(&g, &spec).unwrap()).depth.unwrap().max > 2000);
        let (g, spec) = generate(&preset("WT3").unwrap()).unwrap();
        assert!(forest_stats(&verify_forest(&g, &spec).unwrap()).depth.unwrap().max < 10);
    }

    #[test]
    fn random_honors_fanout_max() {
        let c = GenConfig::new(Shape::Random, 500, 1, 3).with_seed(9).with_trees(4);
        let (g, spec) = generate(&c).unwrap();
        assert!(fanouts(&g).iter().all(|k| *k <= 3));
        assert_eq!(verify_forest(&g, &spec).unwrap().roots().len(), 4);
    }

    #[test]
    fn infeasible_configs() {
        for c in [
            GenConfig::new(Shape::Wide, 10, 0, 3),
            GenConfig::new(Shape::Wide, 10, 4, 3),
            GenConfig::new(Shape::Forest, 3, 1, 2).with_trees(4),
            GenConfig::new(Shape::Deep, 10, 1, 2).with_trees(2),
            GenConfig::new(Shape::Random, 0, 1, 2),
        ] {
            assert!(matches!(generate(&c), Err(DatagenError::InfeasibleConfig(_))), "{c:?}");
        }
    }

    #[test]
    fn representability() {
        assert!(representable(0, 4, 6));
        assert!(!representable(3, 4, 6));
        assert!(representable(8, 4, 6));
        assert!(!representable(7, 4, 6));
        assert!(representable(12, 4, 6));
    }
}
