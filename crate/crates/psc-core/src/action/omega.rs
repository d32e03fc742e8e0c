use std::collections::BTreeMap;

use serde::Serialize;

use crate::tree::{star, Path, Slot, Vertex, WTree};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OmegaMode {
    /// The recursion restarts above every edge of length exactly 1.
    Segmented,
    /// One recursion along the whole path, `1 - prod(1 - s)`.
    Unsegmented,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeClass {
    /// Both end vertices carry only small disks.
    Regular,
    /// Edge number `position` (from 1, counted from the input end) of a
    /// path running through big disks.
    Special { position: usize },
    Unclassified,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EdgeWeight {
    pub length: f64,
    pub weight: f64,
    pub class: EdgeClass,
}

/// Weights keyed by the path of the edge's lower vertex.
pub type Weights = BTreeMap<Path, EdgeWeight>;

fn step(length: f64, below: Option<(f64, f64)>, mode: OmegaMode) -> f64 {
    match below {
        None => length,
        Some((prev_length, _)) if mode == OmegaMode::Segmented && prev_length == 1.0 => length,
        Some((_, prev_weight)) => star(length, prev_weight),
    }
}

/// Weights along one special path, lengths listed from the input end.
pub fn omega_recursion(lengths: &[f64], mode: OmegaMode) -> Vec<f64> {
    let mut out: Vec<f64> = Vec::with_capacity(lengths.len());
    for (i, &s) in lengths.iter().enumerate() {
        let below = i.checked_sub(1).map(|j| (lengths[j], out[j]));
        out.push(step(s, below, mode));
    }
    out
}

fn walk(v: &Vertex, path: &mut Path, mode: OmegaMode, out: &mut Weights) {
    let up_slot = v.label.big_disk();
    for (i, slot) in v.slots.iter().enumerate() {
        let Slot::Edge(e) = slot else { continue };
        path.push(i);
        walk(&e.child, path, mode, out);
        let u = &e.child;
        let below = u.label.big_disk().and_then(|b| match &u.slots[b] {
            Slot::Edge(pred) => {
                path.push(b);
                let w = out[path.as_slice()];
                path.pop();
                Some((pred.length, w))
            }
            Slot::Leaf(_) => None,
        });
        let class = match below {
            Some((_, w)) => EdgeClass::Special {
                position: match w.class {
                    EdgeClass::Special { position } => position + 1,
                    _ => 2,
                },
            },
            None if up_slot == Some(i) => EdgeClass::Special { position: 1 },
            None if v.label.all_small() && u.label.all_small() => EdgeClass::Regular,
            None => EdgeClass::Unclassified,
        };
        let weight = step(e.length, below.map(|(l, w)| (l, w.weight)), mode);
        out.insert(
            path.clone(),
            EdgeWeight {
                length: e.length,
                weight,
                class,
            },
        );
        path.pop();
    }
}

/// Weight and class of every internal edge. Special paths continue through
/// the slot of the big disk of each vertex on them.
pub fn omega_weights(t: &WTree, mode: OmegaMode) -> Weights {
    let mut out = Weights::new();
    if let WTree::Node(root) = t {
        walk(root, &mut Vec::new(), mode, &mut out);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recursion_examples() {
        let w = omega_recursion(&[0.3, 0.5], OmegaMode::Segmented);
        assert!((w[0] - 0.3).abs() < 1e-15 && (w[1] - 0.65).abs() < 1e-15);
        let w = omega_recursion(&[0.4, 1.0, 0.2], OmegaMode::Segmented);
        assert_eq!(w, vec![0.4, 1.0, 0.2]);
        let w = omega_recursion(&[0.4, 1.0, 0.2], OmegaMode::Unsegmented);
        assert_eq!(w, vec![0.4, 1.0, 1.0]);
        assert!(omega_recursion(&[], OmegaMode::Segmented).is_empty());
    }
}
