//! Symbolic psc-metrics on spheres and disks: bodies joined along
//! cylindrical or lens seams, with torpedo caps, heads and bulbs as sites.

mod axis;
mod canon;
mod ops;
mod text;

use std::collections::BTreeSet;
use std::f64::consts::{FRAC_PI_2, PI};
use std::ops::Deref;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::tol;
use crate::warp::WarpError;

pub use axis::axis_profile;
pub use canon::canonical_equal;
pub use ops::{
    cut, fit, join_cyl, join_head, join_ij, mov, mu_head, mu_torp, push_cap, push_cap_at, recap,
    rescale_desc, rho, uncap, JoinRule, Push,
};
pub use text::{parse_descriptor, print_descriptor, SCHEMA_VERSION};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DescError {
    #[error("site {0:?} does not exist")]
    NoSuchSite(SiteRef),
    #[error("site {0:?} is not a free torpedo cap")]
    NotATorpedoSite(SiteRef),
    #[error("site {0:?} is not a free head or bulb")]
    NotAHeadSite(SiteRef),
    #[error("boundary has the wrong kind for this operation")]
    WrongBoundaryKind,
    #[error("cut radius {0} is not positive")]
    NonPositiveRho(f64),
    #[error("seam mismatch: {0}")]
    SeamMismatch(String),
    #[error("not a rotationally symmetric chain: {0}")]
    NotAxisSymmetric(String),
    #[error("not a disk descriptor: found {0} boundary sites")]
    NotADisk(usize),
    #[error("invalid descriptor: {0}")]
    Invalid(String),
    #[error(transparent)]
    Warp(#[from] WarpError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Body {
    Round {
        lambda: f64,
    },
    /// A metric known only by name. `scale` accumulates every rescaling.
    Opaque {
        label: String,
        dim: usize,
        scale: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Location {
    North,
    South,
    Tag(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Seam {
    Cyl {
        delta: f64,
    },
    /// `r` is the lens angle kept on this side of the seam.
    Lens {
        lambda: f64,
        r: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Attachment {
    FreeTorpedo {
        delta: f64,
    },
    FreeHead {
        lambda: f64,
        r: f64,
    },
    FreeBulb {
        lambda: f64,
        r: f64,
        r_prime: f64,
        delta: f64,
    },
    CylBoundary {
        delta: f64,
    },
    LensBoundary {
        lambda: f64,
        r: f64,
    },
    Glued(Seam),
}

impl Attachment {
    pub fn is_boundary(&self) -> bool {
        matches!(
            self,
            Attachment::CylBoundary { .. } | Attachment::LensBoundary { .. }
        )
    }

    /// Head radius and angle of a head or bulb.
    pub fn head(&self) -> Option<(f64, f64)> {
        match *self {
            Attachment::FreeHead { lambda, r } | Attachment::FreeBulb { lambda, r, .. } => {
                Some((lambda, r))
            }
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Site {
    pub id: String,
    pub location: Location,
    pub attachment: Attachment,
    #[serde(default)]
    pub base: bool,
    /// Input label, for descriptors built from trees.
    #[serde(default)]
    pub input: Option<usize>,
}

impl Site {
    pub fn new(id: impl Into<String>, location: Location, attachment: Attachment) -> Self {
        Site {
            id: id.into(),
            location,
            attachment,
            base: false,
            input: None,
        }
    }

    pub fn as_base(mut self) -> Self {
        self.base = true;
        self
    }

    pub fn with_input(mut self, input: usize) -> Self {
        self.input = Some(input);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Node {
    pub body: Body,
    pub sites: Vec<Site>,
}

impl Node {
    pub fn new(body: Body, sites: Vec<Site>) -> Self {
        Node { body, sites }
    }

    pub fn round(lambda: f64, sites: Vec<Site>) -> Self {
        Node::new(Body::Round { lambda }, sites)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SiteRef {
    pub node: usize,
    pub site: usize,
}

impl SiteRef {
    pub fn new(node: usize, site: usize) -> Self {
        SiteRef { node, site }
    }

    pub(crate) fn offset(self, by: usize) -> Self {
        SiteRef::new(self.node + by, self.site)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Gluing {
    pub a: SiteRef,
    pub b: SiteRef,
}

/// A psc-metric on the sphere of dimension `dim`, as a tree of bodies.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SphereDescriptor {
    pub dim: usize,
    pub nodes: Vec<Node>,
    pub edges: Vec<Gluing>,
}

/// Relative slack for `r <= lambda * pi / 2` after rescaling.
const ANGLE_SLACK: f64 = 1e-12;

fn check_positive(what: &str, x: f64) -> Result<(), DescError> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(DescError::Invalid(format!("{what} = {x} must be positive")))
    }
}

fn check_head(lambda: f64, r: f64) -> Result<(), DescError> {
    check_positive("lambda", lambda)?;
    check_positive("r", r)?;
    if r > lambda * FRAC_PI_2 * (1.0 + ANGLE_SLACK) {
        return Err(DescError::Invalid(format!(
            "head angle {r} exceeds lambda * pi / 2 for lambda = {lambda}"
        )));
    }
    Ok(())
}

fn check_lens(lambda: f64, r: f64) -> Result<(), DescError> {
    check_positive("lambda", lambda)?;
    check_positive("r", r)?;
    if r >= lambda * PI {
        return Err(DescError::Invalid(format!(
            "lens angle {r} is not below lambda * pi for lambda = {lambda}"
        )));
    }
    Ok(())
}

fn check_attachment(a: &Attachment) -> Result<(), DescError> {
    match *a {
        Attachment::FreeTorpedo { delta } | Attachment::CylBoundary { delta } => {
            check_positive("delta", delta)
        }
        Attachment::FreeHead { lambda, r } => check_head(lambda, r),
        Attachment::FreeBulb {
            lambda,
            r,
            r_prime,
            delta,
        } => {
            check_head(lambda, r)?;
            check_positive("r'", r_prime)?;
            check_positive("delta", delta)?;
            let limit = r * (1.0 + ANGLE_SLACK);
            if r_prime > limit || delta > limit {
                return Err(DescError::Invalid(format!(
                    "bulb needs r' <= r and delta <= r, got r = {r}, r' = {r_prime}, delta = {delta}"
                )));
            }
            Ok(())
        }
        Attachment::LensBoundary { lambda, r } => check_lens(lambda, r),
        Attachment::Glued(Seam::Cyl { delta }) => check_positive("delta", delta),
        Attachment::Glued(Seam::Lens { lambda, r }) => check_lens(lambda, r),
    }
}

/// Checks that two glued sites carry compatible seams.
pub(crate) fn check_seam(a: &Seam, b: &Seam) -> Result<(), DescError> {
    match (a, b) {
        (Seam::Cyl { delta: x }, Seam::Cyl { delta: y }) => {
            if tol::close(*x, *y, tol::GLUE) {
                Ok(())
            } else {
                Err(DescError::SeamMismatch(format!(
                    "cylinder radii {x} and {y}"
                )))
            }
        }
        (Seam::Lens { lambda: l1, r: r1 }, Seam::Lens { lambda: l2, r: r2 }) => {
            if !tol::close(*l1, *l2, tol::GLUE) {
                return Err(DescError::SeamMismatch(format!("lens radii {l1} and {l2}")));
            }
            if !tol::close(r1 + r2, l1 * PI, tol::GLUE) {
                return Err(DescError::SeamMismatch(format!(
                    "lens angles {r1} + {r2} do not make a sphere of radius {l1}"
                )));
            }
            Ok(())
        }
        _ => Err(DescError::SeamMismatch("cylinder glued to lens".into())),
    }
}

impl SphereDescriptor {
    pub fn new(dim: usize, nodes: Vec<Node>, edges: Vec<Gluing>) -> Self {
        SphereDescriptor { dim, nodes, edges }
    }

    /// One body with the given sites and no gluings.
    pub fn single(dim: usize, node: Node) -> Self {
        SphereDescriptor::new(dim, vec![node], Vec::new())
    }

    pub fn site(&self, at: SiteRef) -> Result<&Site, DescError> {
        self.nodes
            .get(at.node)
            .and_then(|n| n.sites.get(at.site))
            .ok_or(DescError::NoSuchSite(at))
    }

    pub(crate) fn site_mut(&mut self, at: SiteRef) -> Result<&mut Site, DescError> {
        self.nodes
            .get_mut(at.node)
            .and_then(|n| n.sites.get_mut(at.site))
            .ok_or(DescError::NoSuchSite(at))
    }

    pub fn site_refs(&self) -> impl Iterator<Item = SiteRef> + '_ {
        self.nodes
            .iter()
            .enumerate()
            .flat_map(|(i, n)| (0..n.sites.len()).map(move |j| SiteRef::new(i, j)))
    }

    /// Sites whose attachment satisfies `pred`, in node then site order.
    pub fn sites_where(&self, pred: impl Fn(&Site) -> bool) -> Vec<SiteRef> {
        self.site_refs()
            .filter(|&r| pred(self.site(r).expect("listed site")))
            .collect()
    }

    pub fn free_torpedoes(&self) -> Vec<SiteRef> {
        self.sites_where(|s| matches!(s.attachment, Attachment::FreeTorpedo { .. }))
    }

    pub fn free_heads(&self) -> Vec<SiteRef> {
        self.sites_where(|s| s.attachment.head().is_some())
    }

    pub fn boundaries(&self) -> Vec<SiteRef> {
        self.sites_where(|s| s.attachment.is_boundary())
    }

    pub fn base(&self) -> Option<SiteRef> {
        self.sites_where(|s| s.base).first().copied()
    }

    /// The site with input label `i`.
    pub fn input_site(&self, i: usize) -> Option<SiteRef> {
        self.sites_where(|s| s.input == Some(i)).first().copied()
    }

    /// Moves the base marker to `at`.
    pub fn set_base(&mut self, at: SiteRef) -> Result<(), DescError> {
        self.site(at)?;
        for n in &mut self.nodes {
            for s in &mut n.sites {
                s.base = false;
            }
        }
        self.site_mut(at)?.base = true;
        Ok(())
    }

    /// Neighbours of each node through the gluing edges.
    pub(crate) fn adjacency(&self) -> Vec<Vec<(usize, SiteRef, SiteRef)>> {
        let mut adj = vec![Vec::new(); self.nodes.len()];
        for e in &self.edges {
            adj[e.a.node].push((e.b.node, e.a, e.b));
            adj[e.b.node].push((e.a.node, e.b, e.a));
        }
        adj
    }

    pub fn validate(&self) -> Result<(), DescError> {
        if self.dim == 0 {
            return Err(DescError::Invalid("dimension must be positive".into()));
        }
        if self.nodes.is_empty() {
            return Err(DescError::Invalid("no bodies".into()));
        }
        let mut bases = 0;
        let mut inputs = BTreeSet::new();
        for (i, node) in self.nodes.iter().enumerate() {
            match &node.body {
                Body::Round { lambda } => check_positive("lambda", *lambda)?,
                Body::Opaque { dim, scale, .. } => {
                    check_positive("scale", *scale)?;
                    if *dim != self.dim {
                        return Err(DescError::Invalid(format!(
                            "opaque body {i} has dimension {dim}, expected {}",
                            self.dim
                        )));
                    }
                }
            }
            let mut ids = BTreeSet::new();
            for s in &node.sites {
                if !ids.insert(s.id.as_str()) {
                    return Err(DescError::Invalid(format!(
                        "duplicate site id `{}` on body {i}",
                        s.id
                    )));
                }
                check_attachment(&s.attachment)?;
                bases += usize::from(s.base);
                if let Some(k) = s.input {
                    if k == 0 || !inputs.insert(k) {
                        return Err(DescError::Invalid(format!(
                            "input label {k} is zero or repeated"
                        )));
                    }
                }
            }
        }
        if bases > 1 {
            return Err(DescError::Invalid(format!("{bases} base sites")));
        }
        self.validate_gluings()
    }

    fn validate_gluings(&self) -> Result<(), DescError> {
        let mut used = BTreeSet::new();
        for e in &self.edges {
            for end in [e.a, e.b] {
                let s = self.site(end)?;
                if !matches!(s.attachment, Attachment::Glued(_)) {
                    return Err(DescError::Invalid(format!(
                        "gluing ends at unglued site {end:?}"
                    )));
                }
                if !used.insert(end) {
                    return Err(DescError::Invalid(format!("site {end:?} is glued twice")));
                }
            }
            let (Attachment::Glued(x), Attachment::Glued(y)) =
                (self.site(e.a)?.attachment, self.site(e.b)?.attachment)
            else {
                unreachable!()
            };
            check_seam(&x, &y)?;
        }
        for r in self.site_refs() {
            if matches!(self.site(r)?.attachment, Attachment::Glued(_)) && !used.contains(&r) {
                return Err(DescError::Invalid(format!(
                    "glued site {r:?} has no partner"
                )));
            }
        }
        // a connected graph with one edge fewer than nodes is a tree
        if self.edges.len() + 1 != self.nodes.len() {
            return Err(DescError::Invalid(format!(
                "{} gluings for {} bodies: not a tree",
                self.edges.len(),
                self.nodes.len()
            )));
        }
        let adj = self.adjacency();
        let mut seen = vec![false; self.nodes.len()];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &(w, _, _) in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(DescError::Invalid("gluing graph is disconnected".into()));
        }
        Ok(())
    }
}

/// A descriptor with exactly one unglued boundary site.
#[derive(Debug, Clone, PartialEq)]
pub struct DiskDescriptor(SphereDescriptor);

impl DiskDescriptor {
    pub fn new(d: SphereDescriptor) -> Result<Self, DescError> {
        let n = d.boundaries().len();
        if n != 1 {
            return Err(DescError::NotADisk(n));
        }
        Ok(DiskDescriptor(d))
    }

    pub fn boundary(&self) -> SiteRef {
        self.0.boundaries()[0]
    }

    pub fn into_inner(self) -> SphereDescriptor {
        self.0
    }
}

impl Deref for DiskDescriptor {
    type Target = SphereDescriptor;

    fn deref(&self) -> &SphereDescriptor {
        &self.0
    }
}

impl TryFrom<SphereDescriptor> for DiskDescriptor {
    type Error = DescError;

    fn try_from(d: SphereDescriptor) -> Result<Self, DescError> {
        DiskDescriptor::new(d)
    }
}
