use std::f64::consts::PI;

use super::{Attachment, Body, Gluing, Location, Seam, SiteRef, SphereDescriptor};
use crate::tol;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Word(String),
    Num(f64),
}

fn word(s: &str) -> Tok {
    Tok::Word(s.to_string())
}

fn quantized(toks: &[Tok]) -> String {
    let mut out = String::new();
    for t in toks {
        match t {
            Tok::Word(w) => out.push_str(w),
            Tok::Num(x) => out.push_str(&format!("{:.8e}", x + 0.0)),
        }
        out.push(' ');
    }
    out
}

fn same(a: &[Tok], b: &[Tok]) -> bool {
    a.len() == b.len()
        && a.iter().zip(b).all(|(x, y)| match (x, y) {
            (Tok::Word(p), Tok::Word(q)) => p == q,
            (Tok::Num(p), Tok::Num(q)) => tol::close(*p, *q, tol::GLUE),
            _ => false,
        })
}

fn attachment_toks(a: &Attachment) -> Vec<Tok> {
    use Tok::Num;
    match *a {
        Attachment::FreeTorpedo { delta } => vec![word("torpedo"), Num(delta)],
        Attachment::FreeHead { lambda, r } => vec![word("head"), Num(lambda), Num(r)],
        Attachment::FreeBulb {
            lambda,
            r,
            r_prime,
            delta,
        } => vec![word("bulb"), Num(lambda), Num(r), Num(r_prime), Num(delta)],
        Attachment::CylBoundary { delta } => vec![word("cyl-boundary"), Num(delta)],
        Attachment::LensBoundary { lambda, r } => vec![word("lens-boundary"), Num(lambda), Num(r)],
        Attachment::Glued(Seam::Cyl { delta }) => vec![word("cyl"), Num(delta)],
        Attachment::Glued(Seam::Lens { lambda, r }) => vec![word("lens"), Num(lambda), Num(r)],
    }
}

/// Collar bodies: round, with exactly two lens seams whose kept angles add
/// up to the whole sphere, so the body has zero width.
fn is_collar(d: &SphereDescriptor, i: usize) -> bool {
    let node = &d.nodes[i];
    let Body::Round { lambda } = node.body else {
        return false;
    };
    if node.sites.len() != 2 || node.sites.iter().any(|s| s.base || s.input.is_some()) {
        return false;
    }
    let mut total = 0.0;
    for s in &node.sites {
        let Attachment::Glued(Seam::Lens { lambda: l, r }) = s.attachment else {
            return false;
        };
        if !tol::close(l, lambda, tol::GLUE) {
            return false;
        }
        total += r;
    }
    tol::close(total, lambda * PI, tol::GLUE)
}

/// A round body holding nothing but a free head and a lens seam that
/// together cover it: the body is that head. Returns `(head, seam)`.
fn head_collar(d: &SphereDescriptor, i: usize) -> Option<(usize, usize)> {
    let node = &d.nodes[i];
    let Body::Round { lambda } = node.body else {
        return None;
    };
    if node.sites.len() != 2 {
        return None;
    }
    let head = node.sites.iter().position(|s| {
        s.input.is_none()
            && matches!(s.attachment, Attachment::FreeHead { lambda: l, .. } if tol::close(l, lambda, tol::GLUE))
    })?;
    let seam = 1 - head;
    let (Attachment::FreeHead { r, .. }, Attachment::Glued(Seam::Lens { lambda: l, r: kept })) =
        (node.sites[head].attachment, node.sites[seam].attachment)
    else {
        return None;
    };
    (tol::close(l, lambda, tol::GLUE) && tol::close(r + kept, lambda * PI, tol::GLUE))
        .then_some((head, seam))
}

fn remove_node(d: &mut SphereDescriptor, i: usize) -> Vec<SiteRef> {
    let outer: Vec<SiteRef> = d
        .edges
        .iter()
        .filter_map(|e| {
            if e.a.node == i {
                Some(e.b)
            } else if e.b.node == i {
                Some(e.a)
            } else {
                None
            }
        })
        .collect();
    let shift = |r: SiteRef| SiteRef::new(if r.node > i { r.node - 1 } else { r.node }, r.site);
    d.edges.retain(|e| e.a.node != i && e.b.node != i);
    d.nodes.remove(i);
    for e in &mut d.edges {
        e.a = shift(e.a);
        e.b = shift(e.b);
    }
    outer.into_iter().map(shift).collect()
}

fn elide_collars(d: &SphereDescriptor) -> SphereDescriptor {
    let mut d = d.clone();
    loop {
        if d.nodes.len() < 2 {
            break;
        }
        if let Some(i) = (0..d.nodes.len()).find(|&i| is_collar(&d, i)) {
            let outer = remove_node(&mut d, i);
            d.edges.push(Gluing {
                a: outer[0],
                b: outer[1],
            });
        } else if let Some((i, head)) =
            (0..d.nodes.len()).find_map(|i| head_collar(&d, i).map(|(h, _)| (i, h)))
        {
            let head = d.nodes[i].sites[head].clone();
            let outer = remove_node(&mut d, i);
            let site = &mut d.nodes[outer[0].node].sites[outer[0].site];
            site.attachment = head.attachment;
            site.base = head.base;
        } else {
            break;
        }
    }
    d
}

fn encode(
    d: &SphereDescriptor,
    partner: &[Vec<Option<SiteRef>>],
    node: usize,
    from: Option<usize>,
) -> Vec<Tok> {
    let n = &d.nodes[node];
    let mut out = match &n.body {
        Body::Round { lambda } => vec![word("round"), Tok::Num(*lambda)],
        Body::Opaque { label, scale, .. } => vec![word("opaque"), word(label), Tok::Num(*scale)],
    };
    let mut sites: Vec<Vec<Tok>> = Vec::new();
    for (j, s) in n.sites.iter().enumerate() {
        if Some(j) == from {
            out.extend(attachment_toks(&s.attachment));
            continue;
        }
        let mut toks = match &s.location {
            Location::North => vec![word("north")],
            Location::South => vec![word("south")],
            Location::Tag(t) => vec![word("tag"), word(t)],
        };
        if s.base {
            toks.push(word("base"));
        }
        if let Some(i) = s.input {
            toks.push(word(&format!("input{i}")));
        }
        toks.extend(attachment_toks(&s.attachment));
        if let Some(other) = partner[node][j] {
            toks.push(word("("));
            toks.extend(encode(d, partner, other.node, Some(other.site)));
            toks.push(word(")"));
        }
        sites.push(toks);
    }
    sites.sort_by_cached_key(|t| quantized(t));
    out.push(word("["));
    for s in sites {
        out.extend(s);
        out.push(word(";"));
    }
    out.push(word("]"));
    out
}

fn canonical(d: &SphereDescriptor) -> Vec<Tok> {
    let d = elide_collars(d);
    let mut partner: Vec<Vec<Option<SiteRef>>> =
        d.nodes.iter().map(|n| vec![None; n.sites.len()]).collect();
    for e in &d.edges {
        partner[e.a.node][e.a.site] = Some(e.b);
        partner[e.b.node][e.b.site] = Some(e.a);
    }
    let roots: Vec<usize> = match d.base() {
        Some(b) => vec![b.node],
        None => (0..d.nodes.len()).collect(),
    };
    let mut head = vec![word(&format!("dim{}", d.dim))];
    let body = roots
        .into_iter()
        .map(|r| encode(&d, &partner, r, None))
        .min_by_key(|t| quantized(t))
        .unwrap_or_default();
    head.extend(body);
    head
}

/// Equality up to site ids, site order, node order and zero-width collars,
/// with numbers compared at the seam tolerance.
pub fn canonical_equal(a: &SphereDescriptor, b: &SphereDescriptor) -> bool {
    same(&canonical(a), &canonical(b))
}
