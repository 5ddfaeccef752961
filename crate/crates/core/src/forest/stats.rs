use std::fmt;

use super::Forest;

/// min / max / median of a population.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Summary {
    pub min: usize,
    pub max: usize,
    /// Mean of the two middle values for even populations.
    pub median: f64,
}

impl Summary {
    pub fn of(values: &mut [usize]) -> Option<Summary> {
        if values.is_empty() {
            return None;
        }
        values.sort_unstable();
        let n = values.len();
        let median = if n % 2 == 1 {
            values[n / 2] as f64
        } else {
            (values[n / 2 - 1] + values[n / 2]) as f64 / 2.0
        };
        Some(Summary {
            min: values[0],
            max: values[n - 1],
            median,
        })
    }
}

impl fmt::Display for Summary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}/{}", self.min, self.max, self.median)
    }
}

/// Per-tree size and depth, per-internal-node fanout. Leaves do not
/// contribute to fanout.
#[derive(Clone, Debug, PartialEq)]
pub struct ForestStats {
    pub n_trees: usize,
    pub n_nodes: usize,
    pub size: Option<Summary>,
    pub depth: Option<Summary>,
    pub fanout: Option<Summary>,
}

pub fn forest_stats(f: &Forest) -> ForestStats {
    let mut sizes = Vec::with_capacity(f.roots().len());
    let mut depths = Vec::with_capacity(f.roots().len());
    let mut fanouts = Vec::new();
    for &root in f.roots() {
        let mut size = 0;
        let mut depth = 0;
        for (node, level) in f.subtree_levels(root) {
            size += 1;
            depth = depth.max(level);
            let fanout = f.children(node).len();
            if fanout > 0 {
                fanouts.push(fanout);
            }
        }
        sizes.push(size);
        depths.push(depth);
    }
    ForestStats {
        n_trees: f.roots().len(),
        n_nodes: f.len(),
        size: Summary::of(&mut sizes),
        depth: Summary::of(&mut depths),
        fanout: Summary::of(&mut fanouts),
    }
}

impl fmt::Display for ForestStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |s: &Option<Summary>| s.map(|s| s.to_string()).unwrap_or_else(|| "-".into());
        writeln!(f, "trees   {}", self.n_trees)?;
        writeln!(f, "nodes   {}", self.n_nodes)?;
        writeln!(f, "size    {}", show(&self.size))?;
        writeln!(f, "depth   {}", show(&self.depth))?;
        write!(f, "fanout  {}", show(&self.fanout))
    }
}
