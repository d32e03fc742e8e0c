use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{proxy, theta, ActionError};
use crate::desc::{canonical_equal, print_descriptor, SphereDescriptor};
use crate::disks::{print_config_table, ConfigTable, Disk, DiskConfig};
use crate::gen::{random_permutation, random_tree, random_unit_based, TreeSpec};
use crate::tree::{act_sigma, compose, insert_identity, print_tree, star, Edge, Slot, Vertex, WTree};

/// The inputs and outputs of a failed case, each in its own text format.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Counterexample {
    /// Configuration table the trees refer to.
    pub configs: String,
    pub trees: BTreeMap<String, String>,
    pub descriptors: BTreeMap<String, String>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CaseResult {
    pub case: usize,
    pub property: String,
    pub passed: bool,
    pub counterexample: Option<Counterexample>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ActionReport {
    pub seed: u64,
    pub cases: usize,
    pub failures: usize,
    pub results: Vec<CaseResult>,
}

impl ActionReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

enum Item<'a> {
    Tree(&'a str, &'a WTree),
    Desc(&'a str, &'a SphereDescriptor),
}

fn dump(dim: usize, items: &[Item]) -> Counterexample {
    let mut table = ConfigTable::new(dim);
    let mut out = Counterexample::default();
    for item in items {
        match item {
            Item::Tree(name, t) => {
                out.trees.insert(name.to_string(), print_tree(t, &mut table));
            }
            Item::Desc(name, d) => {
                out.descriptors.insert(name.to_string(), print_descriptor(d));
            }
        }
    }
    out.configs = print_config_table(&table);
    out
}

type Outcome = Result<Option<Counterexample>, ActionError>;

fn compare<'a>(
    dim: usize,
    lhs: &'a SphereDescriptor,
    rhs: &'a SphereDescriptor,
    mut items: Vec<Item<'a>>,
) -> Option<Counterexample> {
    if canonical_equal(lhs, rhs) {
        return None;
    }
    items.push(Item::Desc("lhs", lhs));
    items.push(Item::Desc("rhs", rhs));
    Some(dump(dim, &items))
}

fn equivariance(rng: &mut ChaCha8Rng, spec: &TreeSpec, dim: usize) -> Outcome {
    let t = random_tree(rng, spec);
    let k = t.arity();
    let gs: Vec<SphereDescriptor> = (0..k).map(|_| random_unit_based(rng, dim)).collect();
    let sigma = random_permutation(rng, k);
    let lhs = theta(&act_sigma(&t, &sigma)?, &gs)?;
    // input i of t is renamed sigma[i - 1] + 1
    let moved: Vec<SphereDescriptor> = sigma.iter().map(|&s| gs[s].clone()).collect();
    let rhs = theta(&t, &moved)?;
    Ok(compare(spec.dim, &lhs, &rhs, vec![Item::Tree("t", &t)]))
}

fn square(rng: &mut ChaCha8Rng, spec: &TreeSpec, dim: usize) -> Outcome {
    let t = random_tree(rng, spec);
    let us: Vec<WTree> = (0..t.arity()).map(|_| random_tree(rng, spec)).collect();
    let mut blocks = Vec::with_capacity(us.len());
    for u in &us {
        let block: Vec<SphereDescriptor> = (0..u.arity()).map(|_| random_unit_based(rng, dim)).collect();
        blocks.push(block);
    }
    let all: Vec<SphereDescriptor> = blocks.concat();
    let lhs = theta(&compose(&t, &us)?, &all)?;
    let inner = us
        .iter()
        .zip(&blocks)
        .map(|(u, b)| theta(u, b))
        .collect::<Result<Vec<_>, _>>()?;
    let rhs = theta(&t, &inner)?;
    let mut trees = vec![Item::Tree("t", &t)];
    let names: Vec<String> = (1..=us.len()).map(|i| format!("u{i}")).collect();
    for (n, u) in names.iter().zip(&us) {
        trees.push(Item::Tree(n, u));
    }
    Ok(compare(spec.dim, &lhs, &rhs, trees))
}

/// Every slot of `t` as `(vertex path, slot, length)`.
fn slots(t: &WTree) -> Vec<(Vec<usize>, usize, f64)> {
    let mut out = Vec::new();
    for p in t.vertex_paths() {
        let v = t.at(&p).expect("listed path");
        for (i, s) in v.slots.iter().enumerate() {
            let len = match s {
                Slot::Leaf(_) => 1.0,
                Slot::Edge(e) => e.length,
            };
            out.push((p.clone(), i, len));
        }
    }
    out
}

fn relation_a(rng: &mut ChaCha8Rng, spec: &TreeSpec, dim: usize) -> Outcome {
    let t = random_tree(rng, spec);
    let candidates: Vec<_> = slots(&t).into_iter().filter(|s| s.2 < 1.0).collect();
    let t2 = if candidates.is_empty() {
        // an identity on an input edge: the lower edge is the input itself
        match slots(&t).first() {
            None => return Ok(None),
            Some((p, i, _)) => insert_identity(&t, p, *i, rng.gen_range(0.0..1.0), 1.0),
        }
    } else {
        let (p, i, len) = &candidates[rng.gen_range(0..candidates.len())];
        let above = rng.gen_range(0.0..=*len);
        let below = if above >= 1.0 { 0.0 } else { (len - above) / (1.0 - above) };
        debug_assert!((star(above, below) - len).abs() < 1e-12);
        insert_identity(&t, p, *i, above, below)
    }
    .expect("slot exists");
    let lhs = proxy(&t, dim)?;
    let rhs = proxy(&t2, dim)?;
    Ok(compare(spec.dim, &lhs, &rhs, vec![Item::Tree("t", &t), Item::Tree("t'", &t2)]))
}

/// Factors the label at `path` through a single disk joined by a zero edge.
fn factor(t: &WTree, path: &[usize]) -> Option<WTree> {
    let mut out = t.clone();
    let WTree::Node(root) = &mut out else {
        return None;
    };
    let mut v = &mut *root;
    for &i in path {
        let Slot::Edge(e) = &mut v.slots[i] else {
            return None;
        };
        v = &mut e.child;
    }
    let dim = v.label.dim;
    let reach = v
        .label
        .disks
        .iter()
        .map(|d| d.center.iter().map(|x| x * x).sum::<f64>().sqrt() + d.radius)
        .fold(1e-3, f64::max);
    let inner = DiskConfig::new(
        dim,
        v.label
            .disks
            .iter()
            .map(|d| Disk::new(d.center.iter().map(|x| x / reach).collect(), d.radius / reach))
            .collect(),
    );
    inner.validate().ok()?;
    let lower = Vertex::new(inner, std::mem::take(&mut v.slots));
    *v = Vertex::new(
        DiskConfig::new(dim, vec![Disk::new(vec![0.0; dim], reach)]),
        vec![Slot::Edge(Edge {
            length: 0.0,
            child: lower,
        })],
    );
    Some(out)
}

fn relation_c(rng: &mut ChaCha8Rng, spec: &TreeSpec, dim: usize) -> Outcome {
    let t = random_tree(rng, spec);
    let paths = t.vertex_paths();
    if paths.is_empty() {
        return Ok(None);
    }
    let p = &paths[rng.gen_range(0..paths.len())];
    let Some(t2) = factor(&t, p) else {
        return Ok(None);
    };
    let lhs = proxy(&t, dim)?;
    let rhs = proxy(&t2, dim)?;
    Ok(compare(spec.dim, &lhs, &rhs, vec![Item::Tree("t", &t), Item::Tree("t'", &t2)]))
}

type Check = fn(&mut ChaCha8Rng, &TreeSpec, usize) -> Outcome;

const CHECKS: [(&str, Check); 4] = [
    ("equivariance", equivariance),
    ("composition", square),
    ("relation_a", relation_a),
    ("relation_c", relation_c),
];

/// Checks equivariance, the composition square and compatibility with
/// relations (a) and (c) on `cases` random inputs per property.
pub fn verify_action(seed: u64, cases: usize) -> ActionReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut results = Vec::with_capacity(cases * CHECKS.len());
    for case in 0..cases {
        let dim = rng.gen_range(2..=3);
        let spec = TreeSpec::new(dim, 3, 3);
        for (property, check) in CHECKS {
            let (passed, counterexample) = match check(&mut rng, &spec, dim) {
                Ok(None) => (true, None),
                Ok(Some(text)) => (false, Some(text)),
                Err(e) => (
                    false,
                    Some(Counterexample {
                        error: Some(e.to_string()),
                        ..Counterexample::default()
                    }),
                ),
            };
            results.push(CaseResult {
                case,
                property: property.to_string(),
                passed,
                counterexample,
            });
        }
    }
    ActionReport {
        seed,
        cases,
        failures: results.iter().filter(|r| !r.passed).count(),
        results,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::desc::parse_descriptor;
    use crate::disks::parse_config_table;
    use crate::tree::{parse_tree, trees_close};

    #[test]
    fn counterexample_parts_reparse() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let spec = TreeSpec::new(2, 3, 3);
        let t = random_tree(&mut rng, &spec);
        let g = proxy(&t, 3).unwrap();
        let c = dump(2, &[Item::Tree("t", &t), Item::Desc("g", &g)]);
        let table = parse_config_table(&c.configs).unwrap();
        let back = parse_tree(&c.trees["t"], &table).unwrap();
        assert!(trees_close(&back, &t, 0.0));
        assert_eq!(parse_descriptor(&c.descriptors["g"]).unwrap(), g);
    }

    #[test]
    fn empty_run_is_an_empty_report() {
        let r = verify_action(1, 0);
        assert!(r.results.is_empty() && r.passed());
    }
}
