//! Seeded random inputs for the property harnesses.

use rand::seq::SliceRandom;
use rand::Rng;

use std::f64::consts::FRAC_PI_2;

use crate::desc::{Attachment, Body, Location, Node, Site, SphereDescriptor};
use crate::disks::{Disk, DiskConfig};
use crate::tree::{Edge, Slot, Vertex, WTree};

/// Radius profile of a generated configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shape {
    /// Every radius at most 1/2.
    Small,
    /// One radius in [3/4, 0.85], the rest small.
    Big,
    /// One radius strictly between 1/2 and 3/4, the rest small.
    Mid,
}

fn unit_vector<R: Rng>(rng: &mut R, dim: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..=1.0)).collect();
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-3 && n <= 1.0 {
            return v.into_iter().map(|x| x / n).collect();
        }
    }
}

fn point_in_ball<R: Rng>(rng: &mut R, dim: usize, radius: f64) -> Vec<f64> {
    let s = radius * rng.gen::<f64>().powf(1.0 / dim as f64);
    unit_vector(rng, dim).into_iter().map(|x| x * s).collect()
}

fn fits(disks: &[Disk], d: &Disk) -> bool {
    disks.iter().all(|e| {
        let dist = e
            .center
            .iter()
            .zip(&d.center)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        dist >= e.radius + d.radius
    })
}

/// A valid configuration of exactly `arity` disks, in random order.
pub fn random_config<R: Rng>(rng: &mut R, dim: usize, arity: usize, shape: Shape) -> DiskConfig {
    let mut shrink = 1.0;
    loop {
        let mut disks: Vec<Disk> = Vec::with_capacity(arity);
        let mut room = 1.0;
        if arity > 0 && shape != Shape::Small {
            let r = match shape {
                Shape::Big => rng.gen_range(0.75..=0.85),
                _ => rng.gen_range(0.55..0.7),
            };
            disks.push(Disk::new(point_in_ball(rng, dim, 1.0 - r), r));
            room = 1.0 - r;
        }
        let cap = (0.5f64).min(0.9 * room / (arity.max(1) as f64).sqrt()) * shrink;
        let mut ok = true;
        while disks.len() < arity {
            let r = rng.gen_range(0.2 * cap..=cap);
            let placed = (0..400).find_map(|_| {
                let d = Disk::new(point_in_ball(rng, dim, 1.0 - r), r);
                fits(&disks, &d).then_some(d)
            });
            match placed {
                Some(d) => disks.push(d),
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            disks.shuffle(rng);
            let c = DiskConfig::new(dim, disks);
            debug_assert!(c.validate().is_ok());
            return c;
        }
        shrink *= 0.8;
    }
}

/// Knobs for random trees.
#[derive(Debug, Clone)]
pub struct TreeSpec {
    pub dim: usize,
    pub max_depth: usize,
    pub max_arity: usize,
    /// Chance that a slot holds a child vertex rather than an input.
    pub p_child: f64,
    /// Chance that a vertex is a unary identity.
    pub p_identity: f64,
    pub p_big: f64,
    pub p_mid: f64,
    /// Chances that an internal edge has length exactly 0 or exactly 1.
    pub p_zero: f64,
    pub p_one: f64,
    pub p_trivial: f64,
}

impl TreeSpec {
    pub fn new(dim: usize, max_depth: usize, max_arity: usize) -> Self {
        TreeSpec {
            dim,
            max_depth,
            max_arity,
            p_child: 0.45,
            p_identity: 0.12,
            p_big: 0.3,
            p_mid: 0.1,
            p_zero: 0.15,
            p_one: 0.15,
            p_trivial: 0.03,
        }
    }
}

pub fn random_length<R: Rng>(rng: &mut R, spec: &TreeSpec) -> f64 {
    let u: f64 = rng.gen();
    if u < spec.p_zero {
        0.0
    } else if u < spec.p_zero + spec.p_one {
        1.0
    } else {
        rng.gen_range(0.0..1.0)
    }
}

fn random_vertex<R: Rng>(rng: &mut R, spec: &TreeSpec, depth: usize) -> Vertex {
    let label = if rng.gen_bool(spec.p_identity) {
        DiskConfig::identity(spec.dim)
    } else {
        let arity = rng.gen_range(1..=spec.max_arity.max(1));
        let u: f64 = rng.gen();
        let shape = if u < spec.p_big {
            Shape::Big
        } else if u < spec.p_big + spec.p_mid {
            Shape::Mid
        } else {
            Shape::Small
        };
        random_config(rng, spec.dim, arity, shape)
    };
    let slots = (0..label.arity())
        .map(|_| {
            if depth + 1 < spec.max_depth && rng.gen_bool(spec.p_child) {
                Slot::Edge(Edge {
                    length: random_length(rng, spec),
                    child: random_vertex(rng, spec, depth + 1),
                })
            } else {
                Slot::Leaf(0)
            }
        })
        .collect();
    Vertex::new(label, slots)
}

fn number_leaves(v: &mut Vertex, labels: &mut impl Iterator<Item = usize>) {
    for s in &mut v.slots {
        match s {
            Slot::Leaf(i) => *i = labels.next().expect("enough labels"),
            Slot::Edge(e) => number_leaves(&mut e.child, labels),
        }
    }
}

/// A valid tree with inputs labelled by a random permutation.
pub fn random_tree<R: Rng>(rng: &mut R, spec: &TreeSpec) -> WTree {
    if spec.max_depth == 0 || rng.gen_bool(spec.p_trivial) {
        return WTree::Trivial;
    }
    let mut root = random_vertex(rng, spec, 0);
    let mut labels: Vec<usize> = (1..=root.leaf_count()).collect();
    labels.shuffle(rng);
    number_leaves(&mut root, &mut labels.into_iter());
    WTree::Node(root)
}

pub fn random_permutation<R: Rng>(rng: &mut R, k: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..k).collect();
    p.shuffle(rng);
    p
}

fn random_body<R: Rng>(rng: &mut R, dim: usize) -> Body {
    if rng.gen_bool(0.5) {
        Body::Round {
            lambda: rng.gen_range(0.5..2.0),
        }
    } else {
        Body::Opaque {
            label: format!("g{}", rng.gen_range(1..100)),
            dim,
            scale: 1.0,
        }
    }
}

fn place(i: usize) -> Location {
    match i {
        0 => Location::North,
        1 => Location::South,
        k => Location::Tag(format!("t{k}")),
    }
}

/// One body carrying `caps` torpedo caps, the first of them the base.
pub fn random_capped<R: Rng>(rng: &mut R, dim: usize, caps: usize) -> SphereDescriptor {
    let sites = (0..caps)
        .map(|i| {
            let s = Site::new(
                format!("p{i}"),
                place(i),
                Attachment::FreeTorpedo {
                    delta: rng.gen_range(0.1..2.0),
                },
            );
            if i == 0 {
                s.as_base()
            } else {
                s
            }
        })
        .collect();
    SphereDescriptor::single(dim, Node::new(random_body(rng, dim), sites))
}

/// One body carrying `heads` heads of angle at least a fifth of the
/// hemisphere, the first of them the base.
pub fn random_headed<R: Rng>(rng: &mut R, dim: usize, heads: usize) -> SphereDescriptor {
    let sites = (0..heads)
        .map(|i| {
            let lambda = rng.gen_range(0.5..2.0);
            let s = Site::new(
                format!("q{i}"),
                place(i),
                Attachment::FreeHead {
                    lambda,
                    r: lambda * FRAC_PI_2 * rng.gen_range(0.2..=1.0),
                },
            );
            if i == 0 {
                s.as_base()
            } else {
                s
            }
        })
        .collect();
    SphereDescriptor::single(dim, Node::new(random_body(rng, dim), sites))
}

/// A descriptor whose base is the unit hemisphere head, with a few extra
/// torpedo caps or hemisphere heads.
pub fn random_unit_based<R: Rng>(rng: &mut R, dim: usize) -> SphereDescriptor {
    let mut sites = vec![Site::new(
        "base",
        Location::North,
        Attachment::FreeHead {
            lambda: 1.0,
            r: FRAC_PI_2,
        },
    )
    .as_base()];
    let body = random_body(rng, dim);
    for i in 0..rng.gen_range(0..3) {
        let attachment = if rng.gen_bool(0.5) {
            Attachment::FreeTorpedo {
                delta: rng.gen_range(0.1..1.0),
            }
        } else {
            Attachment::FreeHead {
                lambda: 1.0,
                r: FRAC_PI_2,
            }
        };
        sites.push(Site::new(
            format!("x{i}"),
            Location::Tag(format!("x{i}")),
            attachment,
        ));
    }
    SphereDescriptor::single(dim, Node::new(body, sites))
}
