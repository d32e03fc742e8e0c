use std::f64::consts::{FRAC_PI_2, PI};

use super::{
    check_head, Attachment, Body, DescError, DiskDescriptor, Gluing, Location, Seam, Site, SiteRef,
    SphereDescriptor,
};
use crate::tol;
use crate::warp::bulb_profile;

/// Seam radius chosen by a cylindrical join from the two boundary radii.
#[derive(Debug, Clone, Copy)]
pub enum JoinRule {
    /// Keep the left radius; the left factor is not rescaled.
    PiL,
    /// Keep the right radius.
    PiR,
    Custom(fn(f64, f64) -> f64),
}

impl JoinRule {
    pub fn apply(&self, rho0: f64, rho1: f64) -> f64 {
        match self {
            JoinRule::PiL => rho0,
            JoinRule::PiR => rho1,
            JoinRule::Custom(f) => f(rho0, rho1),
        }
    }
}

/// What [`push_cap`] attaches.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Push {
    Torpedo { delta: f64 },
    Bulb { lambda: f64, r: f64 },
}

/// Radius of a cylindrical boundary.
pub fn rho(d: &DiskDescriptor) -> Result<f64, DescError> {
    match d.site(d.boundary())?.attachment {
        Attachment::CylBoundary { delta } => Ok(delta),
        _ => Err(DescError::WrongBoundaryKind),
    }
}

fn scale_attachment(a: &Attachment, k: f64) -> Attachment {
    match *a {
        Attachment::FreeTorpedo { delta } => Attachment::FreeTorpedo { delta: delta * k },
        Attachment::FreeHead { lambda, r } => Attachment::FreeHead {
            lambda: lambda * k,
            r: r * k,
        },
        Attachment::FreeBulb {
            lambda,
            r,
            r_prime,
            delta,
        } => Attachment::FreeBulb {
            lambda: lambda * k,
            r: r * k,
            r_prime: r_prime * k,
            delta: delta * k,
        },
        Attachment::CylBoundary { delta } => Attachment::CylBoundary { delta: delta * k },
        Attachment::LensBoundary { lambda, r } => Attachment::LensBoundary {
            lambda: lambda * k,
            r: r * k,
        },
        Attachment::Glued(Seam::Cyl { delta }) => Attachment::Glued(Seam::Cyl { delta: delta * k }),
        Attachment::Glued(Seam::Lens { lambda, r }) => Attachment::Glued(Seam::Lens {
            lambda: lambda * k,
            r: r * k,
        }),
    }
}

/// The descriptor of `c2 * g`: lengths scale by `sqrt(c2)`.
pub fn rescale_desc(d: &SphereDescriptor, c2: f64) -> Result<SphereDescriptor, DescError> {
    if !(c2 > 0.0) || !c2.is_finite() {
        return Err(DescError::Invalid(format!("scale {c2} is not positive")));
    }
    let mut out = d.clone();
    if c2 == 1.0 {
        return Ok(out);
    }
    let k = c2.sqrt();
    for node in &mut out.nodes {
        match &mut node.body {
            Body::Round { lambda } => *lambda *= k,
            Body::Opaque { scale, .. } => *scale *= c2,
        }
        for s in &mut node.sites {
            s.attachment = scale_attachment(&s.attachment, k);
        }
    }
    Ok(out)
}

fn rescale_disk(d: &DiskDescriptor, c2: f64) -> Result<DiskDescriptor, DescError> {
    DiskDescriptor::new(rescale_desc(d, c2)?)
}

/// Removes the torpedo cap at `p`, exposing a cylinder of the same radius.
pub fn uncap(g: &SphereDescriptor, p: SiteRef) -> Result<DiskDescriptor, DescError> {
    let Ok(Attachment::FreeTorpedo { delta }) = g.site(p).map(|s| s.attachment) else {
        return Err(DescError::NotATorpedoSite(p));
    };
    let mut out = g.clone();
    out.site_mut(p)?.attachment = Attachment::CylBoundary { delta };
    DiskDescriptor::new(out)
}

/// Puts a torpedo cap back on a cylindrical boundary.
pub fn recap(d: &DiskDescriptor) -> Result<SphereDescriptor, DescError> {
    let b = d.boundary();
    let Attachment::CylBoundary { delta } = d.site(b)?.attachment else {
        return Err(DescError::WrongBoundaryKind);
    };
    let mut out = (**d).clone();
    out.site_mut(b)?.attachment = Attachment::FreeTorpedo { delta };
    Ok(out)
}

/// Glues the boundaries of two disks. Nodes of `right` follow those of
/// `left`; glued sites drop their base and input markers, and when both
/// sides keep a base the left one wins.
fn glue(left: &DiskDescriptor, right: &DiskDescriptor) -> Result<SphereDescriptor, DescError> {
    if left.dim != right.dim {
        return Err(DescError::Invalid(format!(
            "dimensions {} and {} differ",
            left.dim, right.dim
        )));
    }
    let seam = |a: &Attachment| match *a {
        Attachment::CylBoundary { delta } => Ok(Seam::Cyl { delta }),
        Attachment::LensBoundary { lambda, r } => Ok(Seam::Lens { lambda, r }),
        _ => Err(DescError::WrongBoundaryKind),
    };
    let (a, b) = (left.boundary(), right.boundary().offset(left.nodes.len()));
    let (sa, sb) = (
        seam(&left.site(a)?.attachment)?,
        seam(&right.site(right.boundary())?.attachment)?,
    );
    if std::mem::discriminant(&sa) != std::mem::discriminant(&sb) {
        return Err(DescError::WrongBoundaryKind);
    }
    let mut out = (**left).clone();
    let offset = out.nodes.len();
    let left_has_base = left.base().is_some_and(|r| r != left.boundary());
    out.nodes.extend(right.nodes.iter().cloned());
    out.edges.extend(right.edges.iter().map(|e| Gluing {
        a: e.a.offset(offset),
        b: e.b.offset(offset),
    }));
    for (at, s) in [(a, sa), (b, sb)] {
        let site = out.site_mut(at)?;
        site.attachment = Attachment::Glued(s);
        site.base = false;
        site.input = None;
    }
    if left_has_base {
        for node in &mut out.nodes[offset..] {
            for s in &mut node.sites {
                s.base = false;
            }
        }
    }
    out.edges.push(Gluing { a, b });
    out.validate()?;
    Ok(out)
}

/// Joins two cylindrical disks after rescaling both boundaries to
/// `f(rho0, rho1)`.
pub fn join_cyl(
    f: JoinRule,
    g0: &DiskDescriptor,
    g1: &DiskDescriptor,
) -> Result<SphereDescriptor, DescError> {
    let (rho0, rho1) = (rho(g0)?, rho(g1)?);
    let seam = f.apply(rho0, rho1);
    if !(seam > 0.0) || !seam.is_finite() {
        return Err(DescError::Invalid(format!(
            "join radius {seam} is not positive"
        )));
    }
    let a = rescale_disk(g0, (seam / rho0).powi(2))?;
    let b = rescale_disk(g1, (seam / rho1).powi(2))?;
    glue(&a, &b)
}

/// Uncaps `g` at `p` and `h` at `q`, then joins the two disks.
pub fn join_ij(
    f: JoinRule,
    g: &SphereDescriptor,
    p: SiteRef,
    h: &SphereDescriptor,
    q: SiteRef,
) -> Result<SphereDescriptor, DescError> {
    join_cyl(f, &uncap(g, p)?, &uncap(h, q)?)
}

fn base_of(g: &SphereDescriptor) -> Result<SiteRef, DescError> {
    g.base()
        .ok_or_else(|| DescError::Invalid("descriptor has no base site".into()))
}

/// Grafts `g` at `caps[1]` and `h` at `caps[2]` of `g3` by their base caps.
/// The remaining cap `caps[0]` becomes the base.
pub fn mu_torp(
    g3: &SphereDescriptor,
    caps: [SiteRef; 3],
    f: JoinRule,
    g: &SphereDescriptor,
    h: &SphereDescriptor,
) -> Result<SphereDescriptor, DescError> {
    let first = join_ij(f, g, base_of(g)?, g3, caps[1])?;
    let second = join_ij(f, h, base_of(h)?, &first, caps[2].offset(g.nodes.len()))?;
    let mut out = second;
    out.set_base(caps[0].offset(g.nodes.len() + h.nodes.len()))?;
    Ok(out)
}

/// Round shortcut for [`bulb_profile`]: returns `(r', delta)`.
fn bulb_params(lambda: f64, r: f64, dim: usize) -> Result<(f64, f64), DescError> {
    if (r - lambda * FRAC_PI_2).abs() <= 1e-12 * lambda {
        return Ok((lambda * FRAC_PI_2, lambda));
    }
    let b = bulb_profile(lambda, r, dim)?;
    Ok((b.r_prime, b.delta))
}

/// Adds a torpedo cap or a bulb at a new site tagged `tag` on `node`.
pub fn push_cap(
    g: &SphereDescriptor,
    node: usize,
    tag: &str,
    kind: Push,
) -> Result<(SphereDescriptor, SiteRef), DescError> {
    push_cap_at(g, node, tag, Location::Tag(tag.into()), kind)
}

/// [`push_cap`] at an explicit location.
pub fn push_cap_at(
    g: &SphereDescriptor,
    node: usize,
    id: &str,
    location: Location,
    kind: Push,
) -> Result<(SphereDescriptor, SiteRef), DescError> {
    let attachment = match kind {
        Push::Torpedo { delta } => Attachment::FreeTorpedo { delta },
        Push::Bulb { lambda, r } => {
            check_head(lambda, r)?;
            let (r_prime, delta) = bulb_params(lambda, r, g.dim)?;
            Attachment::FreeBulb {
                lambda,
                r,
                r_prime,
                delta,
            }
        }
    };
    let mut out = g.clone();
    let sites = &mut out
        .nodes
        .get_mut(node)
        .ok_or(DescError::NoSuchSite(SiteRef::new(node, 0)))?
        .sites;
    sites.push(Site::new(id, location, attachment));
    let at = SiteRef::new(node, sites.len() - 1);
    out.validate()?;
    Ok((out, at))
}

/// Removes the geodesic ball of radius `rho` about a head, clamped so that
/// at most the head itself goes.
pub fn cut(g: &SphereDescriptor, p: SiteRef, rho: f64) -> Result<DiskDescriptor, DescError> {
    let (lambda, r) = g
        .site(p)?
        .attachment
        .head()
        .ok_or(DescError::NotAHeadSite(p))?;
    if !(rho > 0.0) {
        return Err(DescError::NonPositiveRho(rho));
    }
    let kept = lambda * PI - rho.min(lambda * PI - r);
    let mut out = g.clone();
    out.site_mut(p)?.attachment = Attachment::LensBoundary { lambda, r: kept };
    DiskDescriptor::new(out)
}

/// Replaces the head or bulb at `p` by the canonical `(lambda0, r0)` bulb,
/// rescaling the rest so the neck matches.
pub fn mov(
    g: &SphereDescriptor,
    p: SiteRef,
    lambda0: f64,
    r0: f64,
) -> Result<SphereDescriptor, DescError> {
    let current = g.site(p)?.attachment;
    let (lambda1, r1) = current.head().ok_or(DescError::NotAHeadSite(p))?;
    check_head(lambda0, r0)?;
    if tol::close(lambda0, lambda1, 1e-12) && tol::close(r0, r1, 1e-12) {
        let mut out = g.clone();
        out.site_mut(p)?.attachment = match current {
            Attachment::FreeBulb { r_prime, delta, .. } => Attachment::FreeBulb {
                lambda: lambda0,
                r: r0,
                r_prime,
                delta,
            },
            _ => Attachment::FreeHead {
                lambda: lambda0,
                r: r0,
            },
        };
        return Ok(out);
    }
    let delta1 = match current {
        Attachment::FreeBulb { delta, .. } => delta,
        _ => bulb_params(lambda1, r1, g.dim)?.1,
    };
    let (r_prime, delta0) = bulb_params(lambda0, r0, g.dim)?;
    let mut out = rescale_desc(g, (delta0 / delta1).powi(2))?;
    out.site_mut(p)?.attachment = Attachment::FreeBulb {
        lambda: lambda0,
        r: r0,
        r_prime,
        delta: delta0,
    };
    Ok(out)
}

pub fn fit(
    g: &SphereDescriptor,
    p: SiteRef,
    lambda: f64,
    r: f64,
    rho: f64,
) -> Result<DiskDescriptor, DescError> {
    cut(&mov(g, p, lambda, r)?, p, rho)
}

/// Joins `g` at head `p` to `h` at head `q` along complementary lenses of a
/// sphere of radius `lambda`, `g` keeping angle `r`.
pub fn join_head(
    lambda: f64,
    r: f64,
    g: &SphereDescriptor,
    p: SiteRef,
    h: &SphereDescriptor,
    q: SiteRef,
) -> Result<SphereDescriptor, DescError> {
    check_head(lambda, r)?;
    let (lambda_q, r_q) = h
        .site(q)?
        .attachment
        .head()
        .ok_or(DescError::NotAHeadSite(q))?;
    let a = fit(g, p, lambda, r, lambda * PI - r)?;
    let b = fit(h, q, lambda, lambda * r_q / lambda_q, r)?;
    glue(&a, &b)
}

/// Head analogue of [`mu_torp`]: each graft uses the head parameters of the
/// `g3` site it lands on.
pub fn mu_head(
    g3: &SphereDescriptor,
    heads: [SiteRef; 3],
    g: &SphereDescriptor,
    h: &SphereDescriptor,
) -> Result<SphereDescriptor, DescError> {
    let (l1, r1) = g3
        .site(heads[1])?
        .attachment
        .head()
        .ok_or(DescError::NotAHeadSite(heads[1]))?;
    let first = join_head(l1, r1, g, base_of(g)?, g3, heads[1])?;
    let p2 = heads[2].offset(g.nodes.len());
    let (l2, r2) = first
        .site(p2)?
        .attachment
        .head()
        .ok_or(DescError::NotAHeadSite(heads[2]))?;
    let mut out = join_head(l2, r2, h, base_of(h)?, &first, p2)?;
    out.set_base(heads[0].offset(g.nodes.len() + h.nodes.len()))?;
    Ok(out)
}
