//! Binary CART trees: Gini impurity, axis-aligned splits at midpoints between
//! consecutive distinct values, per-split feature subsampling.

use rand::seq::index::sample;

use crate::seed::Rng;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TreeParams {
    pub max_depth: Option<usize>,
    pub min_leaf: usize,
    /// Candidate features examined per split.
    pub features_per_split: usize,
}

#[derive(Debug, Clone, PartialEq)]
enum Node {
    Leaf(bool),
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecisionTree {
    nodes: Vec<Node>,
}

struct Split {
    feature: usize,
    threshold: f64,
    score: f64,
}

// Weighted Gini of a partition, up to a factor 2: sum over sides of pos*neg/n.
fn side_score(pos: usize, n: usize) -> f64 {
    if n == 0 {
        0.0
    } else {
        (pos * (n - pos)) as f64 / n as f64
    }
}

fn best_split_on(
    rows: &[Vec<f64>],
    labels: &[bool],
    idx: &[usize],
    feature: usize,
    min_leaf: usize,
    buf: &mut Vec<(f64, bool)>,
) -> Option<(f64, f64)> {
    buf.clear();
    buf.extend(idx.iter().map(|&i| (rows[i][feature], labels[i])));
    buf.sort_unstable_by(|a, b| a.0.total_cmp(&b.0));
    let n = buf.len();
    let total_pos = buf.iter().filter(|p| p.1).count();
    let mut left_pos = 0;
    let mut best: Option<(f64, f64)> = None;
    for i in 0..n - 1 {
        left_pos += buf[i].1 as usize;
        let n_left = i + 1;
        if buf[i].0 == buf[i + 1].0 || n_left < min_leaf || n - n_left < min_leaf {
            continue;
        }
        let score = side_score(left_pos, n_left) + side_score(total_pos - left_pos, n - n_left);
        if best.is_none_or(|(s, _)| score < s - 1e-12) {
            let (lo, hi) = (buf[i].0, buf[i + 1].0);
            let mut threshold = lo + 0.5 * (hi - lo);
            if !(threshold < hi) {
                threshold = lo;
            }
            best = Some((score, threshold));
        }
    }
    best
}

impl DecisionTree {
    /// Fits on the rows listed in `sample` (repeats allowed, as produced by a
    /// bootstrap draw).
    pub fn fit(
        rows: &[Vec<f64>],
        labels: &[bool],
        sample_rows: Vec<usize>,
        params: &TreeParams,
        rng: &mut Rng,
    ) -> DecisionTree {
        let dim = rows.first().map_or(0, Vec::len);
        let k = params.features_per_split.clamp(1, dim.max(1));
        let mut nodes = vec![Node::Leaf(false)];
        let mut stack = vec![(0usize, sample_rows, 0usize)];
        let mut buf = Vec::new();

        while let Some((id, idx, depth)) = stack.pop() {
            let n = idx.len();
            let pos = idx.iter().filter(|&&i| labels[i]).count();
            let leaf = Node::Leaf(2 * pos > n);
            if n == 0 || pos == 0 || pos == n || dim == 0 {
                nodes[id] = leaf;
                continue;
            }
            if params.max_depth.is_some_and(|d| depth >= d) || n < 2 * params.min_leaf {
                nodes[id] = leaf;
                continue;
            }

            let mut candidates: Vec<usize> = if k >= dim {
                (0..dim).collect()
            } else {
                sample(rng, dim, k).into_vec()
            };
            candidates.sort_unstable();
            let mut best = Self::search(rows, labels, &idx, &candidates, params.min_leaf, &mut buf);
            if best.is_none() && k < dim {
                // none of the drawn features separates anything; keep looking
                let rest: Vec<usize> = (0..dim).filter(|f| !candidates.contains(f)).collect();
                best = Self::search(rows, labels, &idx, &rest, params.min_leaf, &mut buf);
            }
            let Some(split) = best else {
                nodes[id] = leaf;
                continue;
            };

            let (left_idx, right_idx): (Vec<usize>, Vec<usize>) =
                idx.iter().partition(|&&i| rows[i][split.feature] <= split.threshold);
            let left = nodes.len();
            let right = left + 1;
            nodes.push(Node::Leaf(false));
            nodes.push(Node::Leaf(false));
            nodes[id] = Node::Split {
                feature: split.feature,
                threshold: split.threshold,
                left,
                right,
            };
            stack.push((right, right_idx, depth + 1));
            stack.push((left, left_idx, depth + 1));
        }
        DecisionTree { nodes }
    }

    fn search(
        rows: &[Vec<f64>],
        labels: &[bool],
        idx: &[usize],
        features: &[usize],
        min_leaf: usize,
        buf: &mut Vec<(f64, bool)>,
    ) -> Option<Split> {
        let mut best: Option<Split> = None;
        for &f in features {
            if let Some((score, threshold)) = best_split_on(rows, labels, idx, f, min_leaf, buf) {
                if best.as_ref().is_none_or(|b| score < b.score - 1e-12) {
                    best = Some(Split {
                        feature: f,
                        threshold,
                        score,
                    });
                }
            }
        }
        best
    }

    pub fn predict(&self, x: &[f64]) -> bool {
        let mut id = 0;
        loop {
            match self.nodes[id] {
                Node::Leaf(v) => return v,
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => id = if x[feature] <= threshold { left } else { right },
            }
        }
    }

    pub fn n_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn depth(&self) -> usize {
        fn walk(nodes: &[Node], id: usize) -> usize {
            match nodes[id] {
                Node::Leaf(_) => 0,
                Node::Split { left, right, .. } => 1 + walk(nodes, left).max(walk(nodes, right)),
            }
        }
        walk(&self.nodes, 0)
    }

    /// Root split, if the tree is not a single leaf.
    pub fn root_split(&self) -> Option<(usize, f64)> {
        match self.nodes[0] {
            Node::Split { feature, threshold, .. } => Some((feature, threshold)),
            Node::Leaf(_) => None,
        }
    }
}
