//! The action of weighted trees on unit-based sphere descriptors.

mod omega;
mod verify;

use std::f64::consts::{FRAC_PI_2, PI};

use thiserror::Error;

use crate::desc::{
    join_head, push_cap_at, Attachment, DescError, Gluing, Location, Node, Push, Seam, Site,
    SiteRef, SphereDescriptor,
};
use crate::disks::DiskConfig;
use crate::tree::{normalize, Slot, TreeError, Vertex, WTree};

pub use omega::{omega_recursion, omega_weights, EdgeClass, EdgeWeight, OmegaMode};
pub use verify::{verify_action, ActionReport, CaseResult, Counterexample};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ActionError {
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    Desc(#[from] DescError),
    #[error("tree has {expected} inputs but {found} descriptors were given")]
    Arity { expected: usize, found: usize },
    #[error("descriptor {0} is not based at the unit hemisphere")]
    NotUnitBased(usize),
    #[error("lens family needs one parameter per disk: {expected} disks, {found} parameters")]
    Parameters { expected: usize, found: usize },
}

/// One little lens moving from its place inside the head `(lambda, r)` at
/// `t = 0` to the unit hemisphere at `t = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LensFamilyState {
    pub lambda: f64,
    pub r: f64,
    /// Radius of the little disk in the configuration.
    pub epsilon: f64,
}

impl LensFamilyState {
    pub fn new(lambda: f64, r: f64, epsilon: f64) -> Self {
        LensFamilyState { lambda, r, epsilon }
    }

    pub fn lambda_at(&self, t: f64) -> f64 {
        (1.0 - t) * self.lambda + t
    }

    pub fn r_at(&self, t: f64) -> f64 {
        (1.0 - t) * self.r * self.epsilon + t * FRAC_PI_2
    }

    /// Angular radius of the little lens.
    pub fn epsilon_at(&self, t: f64) -> f64 {
        self.r_at(t)
    }
}

fn unit_head() -> Attachment {
    Attachment::FreeHead {
        lambda: 1.0,
        r: FRAC_PI_2,
    }
}

fn unit_bulb() -> Attachment {
    Attachment::FreeBulb {
        lambda: 1.0,
        r: FRAC_PI_2,
        r_prime: FRAC_PI_2,
        delta: 1.0,
    }
}

fn disk_tag(i: usize) -> Location {
    Location::Tag(format!("disk{}", i + 1))
}

/// The head `(lambda, r)` with a bulb for every disk `i` whose parameter
/// `ts[i]` is positive. Parameter 1 gives the unit hemisphere bulb.
pub fn lens_family(
    c: &DiskConfig,
    head: (f64, f64),
    ts: &[f64],
) -> Result<SphereDescriptor, ActionError> {
    if ts.len() != c.arity() {
        return Err(ActionError::Parameters {
            expected: c.arity(),
            found: ts.len(),
        });
    }
    let (lambda, r) = head;
    let base = Site::new("base", Location::North, Attachment::FreeHead { lambda, r }).as_base();
    let mut out = SphereDescriptor::single(c.dim, Node::round(lambda, vec![base]));
    out.validate()?;
    for (i, &t) in ts.iter().enumerate() {
        if t <= 0.0 {
            continue;
        }
        let state = LensFamilyState::new(lambda, r, c.disks[i].radius);
        let kind = Push::Bulb {
            lambda: state.lambda_at(t),
            r: state.r_at(t),
        };
        let id = format!("disk{}", i + 1);
        out = push_cap_at(&out, 0, &id, disk_tag(i), kind)?.0;
    }
    Ok(out)
}

struct Render<'a> {
    weights: &'a omega::Weights,
    out: SphereDescriptor,
}

impl Render<'_> {
    fn vertex(&mut self, v: &Vertex, node: usize, head: (f64, f64), path: &mut Vec<usize>) {
        let (lambda, r) = head;
        for (i, slot) in v.slots.iter().enumerate() {
            let id = format!("disk{}", i + 1);
            match slot {
                Slot::Leaf(input) => {
                    let site = Site::new(id, disk_tag(i), unit_bulb()).with_input(*input);
                    self.out.nodes[node].sites.push(site);
                }
                Slot::Edge(e) => {
                    path.push(i);
                    let w = self.weights[path.as_slice()].weight;
                    let state = LensFamilyState::new(lambda, r, v.label.disks[i].radius);
                    let (lw, rw) = (state.lambda_at(w), state.r_at(w));
                    let outer = Site::new(id, disk_tag(i), Attachment::Glued(Seam::Lens { lambda: lw, r: rw }));
                    self.out.nodes[node].sites.push(outer);
                    let inner = Site::new(
                        "up",
                        Location::North,
                        Attachment::Glued(Seam::Lens {
                            lambda: lw,
                            r: lw * PI - rw,
                        }),
                    );
                    let child = self.out.nodes.len();
                    self.out.nodes.push(Node::round(lw, vec![inner]));
                    self.out.edges.push(Gluing {
                        a: SiteRef::new(node, self.out.nodes[node].sites.len() - 1),
                        b: SiteRef::new(child, 0),
                    });
                    self.vertex(&e.child, child, (lw, rw), path);
                    path.pop();
                }
            }
        }
    }
}

/// The descriptor a tree acts by: one round body per vertex of its normal
/// form, lenses sized by the edge weights, unit bulbs at the inputs.
pub fn proxy(t: &WTree, dim: usize) -> Result<SphereDescriptor, ActionError> {
    let t = normalize(t);
    t.validate()?;
    let base = Site::new("base", Location::North, unit_head()).as_base();
    let out = match &t {
        WTree::Trivial => {
            let input = Site::new("leaf", Location::South, unit_bulb()).with_input(1);
            SphereDescriptor::single(dim, Node::round(1.0, vec![base, input]))
        }
        WTree::Node(root) => {
            let weights = omega_weights(&t, OmegaMode::Segmented);
            let mut render = Render {
                weights: &weights,
                out: SphereDescriptor::single(dim, Node::round(1.0, vec![base])),
            };
            render.vertex(root, 0, (1.0, FRAC_PI_2), &mut Vec::new());
            render.out
        }
    };
    out.validate()?;
    Ok(out)
}

/// Plugs `gs[i - 1]` into input `i` of the proxy of `t`.
pub fn theta(t: &WTree, gs: &[SphereDescriptor]) -> Result<SphereDescriptor, ActionError> {
    if gs.len() != t.arity() {
        return Err(ActionError::Arity {
            expected: t.arity(),
            found: gs.len(),
        });
    }
    let dim = gs.first().map_or(t.dim().unwrap_or(2), |g| g.dim);
    let mut acc = proxy(t, dim)?;
    for (i, g) in gs.iter().enumerate() {
        let base = g.base().ok_or(ActionError::NotUnitBased(i + 1))?;
        match g.site(base)?.attachment {
            Attachment::FreeHead { lambda, r }
                if lambda == 1.0 && (r - FRAC_PI_2).abs() <= 1e-12 => {}
            _ => return Err(ActionError::NotUnitBased(i + 1)),
        }
        let leaf = acc
            .input_site(i + 1)
            .ok_or(DescError::Invalid(format!("proxy has no input {}", i + 1)))?;
        acc = join_head(1.0, FRAC_PI_2, &acc, leaf, g, base)?;
    }
    Ok(acc)
}
