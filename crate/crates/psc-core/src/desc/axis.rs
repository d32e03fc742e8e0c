use std::f64::consts::{FRAC_PI_2, PI};

use super::{Attachment, Body, DescError, Location, Seam, Site, SphereDescriptor};
use crate::tol;
use crate::warp::{bulb_profile, round_profile, torpedo_profile, Profile, WarpError};

fn asym(msg: impl Into<String>) -> DescError {
    DescError::NotAxisSymmetric(msg.into())
}

fn seam_error(e: WarpError) -> DescError {
    match e {
        WarpError::SeamMismatch { .. } => DescError::SeamMismatch(e.to_string()),
        other => DescError::Warp(other),
    }
}

/// `p` restricted to `[lo, hi]` and shifted to start at zero.
fn clip(p: &Profile, lo: f64, hi: f64) -> Result<Profile, DescError> {
    let pieces = p
        .pieces()
        .iter()
        .filter(|q| q.end > lo && q.start < hi)
        .map(|q| {
            let mut q = q.clone();
            q.start = q.start.max(lo);
            q.end = q.end.min(hi);
            q
        })
        .collect();
    Ok(Profile::from_pieces(pieces)?.shifted(-lo))
}

fn same(a: f64, b: f64) -> bool {
    tol::close(a, b, tol::GLUE)
}

/// How far the site at a pole trims the node, measured from that pole.
fn trim(lambda: f64, site: Option<&Site>) -> Result<f64, DescError> {
    let Some(site) = site else { return Ok(0.0) };
    match site.attachment {
        Attachment::FreeHead { lambda: l, .. } if same(l, lambda) => Ok(0.0),
        Attachment::FreeBulb { .. } | Attachment::FreeTorpedo { .. } => Ok(0.0),
        Attachment::Glued(Seam::Cyl { delta }) if same(delta, lambda) => Ok(lambda * FRAC_PI_2),
        Attachment::Glued(Seam::Lens { lambda: l, r }) if same(l, lambda) => Ok(lambda * PI - r),
        a => Err(asym(format!(
            "site `{}` ({a:?}) does not fit a round body of radius {lambda}",
            site.id
        ))),
    }
}

/// Profile of one round body read from its north pole, or `None` when the
/// seams leave it no width.
fn node_profile(
    lambda: f64,
    north: Option<&Site>,
    south: Option<&Site>,
    dim: usize,
) -> Result<Option<Profile>, DescError> {
    let bulb = |s: Option<&Site>| match s.map(|s| s.attachment) {
        Some(Attachment::FreeBulb { lambda: l, r, .. }) if same(l, lambda) => Ok(Some(r)),
        Some(Attachment::FreeBulb { .. }) => Err(asym("bulb radius differs from its body")),
        _ => Ok(None),
    };
    let torpedo = |s: Option<&Site>| match s.map(|s| s.attachment) {
        Some(Attachment::FreeTorpedo { delta }) if same(delta, lambda) => Ok(true),
        Some(Attachment::FreeTorpedo { .. }) => Err(asym("torpedo radius differs from its body")),
        _ => Ok(false),
    };
    let mut full = match (bulb(north)?, bulb(south)?) {
        (Some(_), Some(_)) => return Err(asym("bulbs at both poles")),
        (None, Some(r)) => bulb_profile(lambda, r, dim)?.profile,
        (Some(r), None) => bulb_profile(lambda, r, dim)?.profile.reversed(),
        (None, None) => round_profile(lambda)?,
    };
    let half = lambda * FRAC_PI_2;
    if torpedo(north)? {
        full = torpedo_profile(lambda)?
            .concat(&clip(&full, half, full.end())?)
            .map_err(seam_error)?;
    }
    if torpedo(south)? {
        full = clip(&full, 0.0, full.end() - half)?
            .concat(&torpedo_profile(lambda)?.reversed())
            .map_err(seam_error)?;
    }
    let lo = trim(lambda, north)?;
    let hi = full.end() - trim(lambda, south)?;
    if hi - lo <= 1e-12 * lambda {
        if lo - hi > tol::GLUE * lambda {
            return Err(asym("seams overlap inside one body"));
        }
        return Ok(None);
    }
    clip(&full, lo, hi).map(Some)
}

/// The warping profile of a chain of round bodies whose sites all sit at
/// the poles.
pub fn axis_profile(g: &SphereDescriptor) -> Result<Profile, DescError> {
    g.validate()?;
    let mut lambdas = Vec::with_capacity(g.nodes.len());
    for (i, node) in g.nodes.iter().enumerate() {
        let Body::Round { lambda } = node.body else {
            return Err(asym(format!("body {i} is opaque")));
        };
        let (mut north, mut south) = (0, 0);
        for s in &node.sites {
            match s.location {
                Location::North => north += 1,
                Location::South => south += 1,
                Location::Tag(_) => return Err(asym(format!("site `{}` is off the axis", s.id))),
            }
        }
        if north > 1 || south > 1 {
            return Err(asym(format!("body {i} has two sites at one pole")));
        }
        lambdas.push(lambda);
    }
    let adj = g.adjacency();
    if adj.iter().any(|a| a.len() > 2) {
        return Err(asym("gluing graph branches"));
    }
    let pole =
        |node: usize, loc: &Location| g.nodes[node].sites.iter().find(|s| s.location == *loc);
    let start = (0..g.nodes.len())
        .find(|&i| adj[i].len() <= 1)
        .expect("a tree has a leaf");
    let mut out: Option<Profile> = None;
    let mut prev: Option<usize> = None;
    let mut current = Some(start);
    while let Some(v) = current {
        let next = adj[v].iter().find(|&&(w, _, _)| Some(w) != prev).copied();
        let entry = adj[v]
            .iter()
            .find(|&&(w, _, _)| Some(w) == prev)
            .map(|&(_, own, _)| own);
        let exit = next.map(|(_, own, _)| own);
        let entry_loc = entry.map(|r| &g.site(r).expect("edge site").location);
        let exit_loc = exit.map(|r| &g.site(r).expect("edge site").location);
        if entry_loc.is_some() && entry_loc == exit_loc {
            return Err(asym(format!(
                "body {v} is entered and left at the same pole"
            )));
        }
        let from_south =
            matches!(entry_loc, Some(Location::South)) || matches!(exit_loc, Some(Location::North));
        let profile = node_profile(
            lambdas[v],
            pole(v, &Location::North),
            pole(v, &Location::South),
            g.dim,
        )?;
        if let Some(p) = profile {
            let p = if from_south { p.reversed() } else { p };
            out = Some(match out {
                None => p,
                Some(acc) => acc.concat(&p).map_err(seam_error)?,
            });
        }
        prev = Some(v);
        current = next.map(|(w, _, _)| w);
    }
    out.ok_or_else(|| asym("every body has zero width"))
}
