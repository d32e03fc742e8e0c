use std::f64::consts::{FRAC_PI_2, PI};

use psc_core::action::{
    lens_family, omega_recursion, omega_weights, proxy, theta, verify_action, ActionError,
    EdgeClass, LensFamilyState, OmegaMode,
};
use psc_core::desc::{
    axis_profile, canonical_equal, Attachment, Location, Node, Seam, Site, SphereDescriptor,
};
use psc_core::disks::{Disk, DiskConfig};
use psc_core::gen::{random_tree, random_unit_based, TreeSpec};
use psc_core::tree::{Edge, Slot, Vertex, WTree};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn one(r: f64) -> DiskConfig {
    DiskConfig::new(2, vec![Disk::new(vec![0.0, 0.0], r)])
}

fn pair() -> DiskConfig {
    DiskConfig::new(
        2,
        vec![
            Disk::new(vec![-0.5, 0.0], 0.4),
            Disk::new(vec![0.5, 0.0], 0.4),
        ],
    )
}

fn edge(length: f64, child: Vertex) -> Slot {
    Slot::Edge(Edge { length, child })
}

fn unit_ball(dim: usize) -> SphereDescriptor {
    SphereDescriptor::single(
        dim,
        Node::round(
            1.0,
            vec![Site::new(
                "b",
                Location::North,
                Attachment::FreeHead {
                    lambda: 1.0,
                    r: FRAC_PI_2,
                },
            )
            .as_base()],
        ),
    )
}

/// A chain of unary big vertices, edge lengths listed from the input end.
fn big_chain(lengths: &[f64]) -> WTree {
    let mut v = Vertex::new(one(0.8), vec![Slot::Leaf(1)]);
    for &s in lengths {
        v = Vertex::new(one(0.8), vec![edge(s, v)]);
    }
    WTree::Node(v)
}

fn chain_weights(t: &WTree, mode: OmegaMode) -> Vec<f64> {
    // deepest edge first
    let mut w: Vec<(usize, f64)> = omega_weights(t, mode)
        .into_iter()
        .map(|(p, e)| (p.len(), e.weight))
        .collect();
    w.sort_by_key(|x| std::cmp::Reverse(x.0));
    w.into_iter().map(|x| x.1).collect()
}

#[test]
fn special_chain_follows_the_recursion() {
    let t = big_chain(&[0.3, 0.5]);
    let w = chain_weights(&t, OmegaMode::Segmented);
    assert!((w[0] - 0.3).abs() < 1e-15);
    assert!((w[1] - 0.65).abs() < 1e-15);
    let classes: Vec<EdgeClass> = omega_weights(&t, OmegaMode::Segmented)
        .values()
        .map(|e| e.class)
        .collect();
    assert!(classes.contains(&EdgeClass::Special { position: 1 }));
    assert!(classes.contains(&EdgeClass::Special { position: 2 }));
}

#[test]
fn unit_edge_restarts_the_recursion() {
    let t = big_chain(&[0.4, 1.0, 0.2]);
    assert_eq!(chain_weights(&t, OmegaMode::Segmented), vec![0.4, 1.0, 0.2]);
    assert_eq!(chain_weights(&t, OmegaMode::Unsegmented), vec![0.4, 1.0, 1.0]);
}

#[test]
fn closed_form_matches_the_product() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..200 {
        let n = rng.gen_range(1..8);
        let s: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..1.0)).collect();
        let w = omega_recursion(&s, OmegaMode::Unsegmented);
        let mut prod = 1.0;
        for (si, wi) in s.iter().zip(&w) {
            prod *= 1.0 - si;
            assert!((wi - (1.0 - prod)).abs() < 1e-12);
        }
    }
}

#[test]
fn small_edges_are_regular_and_weight_is_length() {
    let child = Vertex::new(pair(), vec![Slot::Leaf(1), Slot::Leaf(2)]);
    let t = WTree::Node(Vertex::new(pair(), vec![edge(0.37, child), Slot::Leaf(3)]));
    let w = omega_weights(&t, OmegaMode::Segmented);
    let e = w[&vec![0]];
    assert_eq!(e.class, EdgeClass::Regular);
    assert_eq!(e.weight, 0.37);
}

#[test]
fn mixed_edges_are_unclassified() {
    let mid = DiskConfig::new(2, vec![Disk::new(vec![0.0, 0.0], 0.6)]);
    let child = Vertex::new(pair(), vec![Slot::Leaf(1), Slot::Leaf(2)]);
    let t = WTree::Node(Vertex::new(mid, vec![edge(0.2, child)]));
    let e = omega_weights(&t, OmegaMode::Segmented)[&vec![0]];
    assert_eq!(e.class, EdgeClass::Unclassified);
    assert_eq!(e.weight, 0.2);
}

#[test]
fn lens_family_endpoints() {
    let s = LensFamilyState::new(2.0, 1.5, 0.3);
    assert_eq!(s.lambda_at(0.0), 2.0);
    assert_eq!(s.lambda_at(1.0), 1.0);
    assert_eq!(s.r_at(1.0), FRAC_PI_2);
    assert!((s.epsilon_at(0.0) - 1.5 * 0.3).abs() < 1e-15);

    let c = pair();
    let bare = lens_family(&c, (1.0, FRAC_PI_2), &[0.0, 0.0]).unwrap();
    let head = SphereDescriptor::single(
        3,
        Node::round(
            1.0,
            vec![Site::new(
                "h",
                Location::North,
                Attachment::FreeHead {
                    lambda: 1.0,
                    r: FRAC_PI_2,
                },
            )
            .as_base()],
        ),
    );
    assert!(!canonical_equal(&bare, &head), "dimension differs");
    let bare3 = lens_family(&DiskConfig::new(3, vec![]), (1.0, FRAC_PI_2), &[]).unwrap();
    assert!(canonical_equal(&bare3, &head));

    let full = lens_family(&c, (1.0, FRAC_PI_2), &[1.0, 1.0]).unwrap();
    for s in &full.nodes[0].sites[1..] {
        assert_eq!(
            s.attachment,
            Attachment::FreeBulb {
                lambda: 1.0,
                r: FRAC_PI_2,
                r_prime: FRAC_PI_2,
                delta: 1.0
            }
        );
    }
    assert!(matches!(
        lens_family(&c, (1.0, 1.0), &[0.5]),
        Err(ActionError::Parameters { .. })
    ));
}

#[test]
fn lens_family_midpoint_builds_bulbs() {
    let c = DiskConfig::new(4, vec![Disk::new(vec![0.0; 4], 0.5)]);
    let g = lens_family(&c, (1.0, FRAC_PI_2), &[0.5]).unwrap();
    match g.nodes[0].sites[1].attachment {
        Attachment::FreeBulb { lambda, r, .. } => {
            assert!((lambda - 1.0).abs() < 1e-15);
            assert!((r - (0.5 * FRAC_PI_2 * 0.5 + 0.5 * FRAC_PI_2)).abs() < 1e-15);
        }
        a => panic!("expected a bulb, got {a:?}"),
    }
}

#[test]
fn trivial_tree_proxy_is_a_unit_sphere() {
    let p = proxy(&WTree::Trivial, 3).unwrap();
    assert_eq!(p.nodes.len(), 1);
    assert!(p.base().is_some());
    assert!(p.input_site(1).is_some());
    let prof = axis_profile(&p).unwrap();
    assert!((prof.end() - PI).abs() < 1e-12);
}

#[test]
fn proxy_lens_angles_follow_the_weights() {
    let child = Vertex::new(pair(), vec![Slot::Leaf(1), Slot::Leaf(2)]);
    let t = WTree::Node(Vertex::new(pair(), vec![edge(0.25, child), Slot::Leaf(3)]));
    let p = proxy(&t, 3).unwrap();
    assert_eq!(p.nodes.len(), 2);
    let expected = 0.75 * FRAC_PI_2 * 0.4 + 0.25 * FRAC_PI_2;
    let lens = p.nodes[0]
        .sites
        .iter()
        .find_map(|s| match s.attachment {
            Attachment::Glued(Seam::Lens { r, .. }) => Some(r),
            _ => None,
        })
        .unwrap();
    assert!((lens - expected).abs() < 1e-15);
    for i in 1..=3 {
        assert!(p.input_site(i).is_some());
    }
}

#[test]
fn proxy_ignores_zero_edges_and_identities() {
    let child = Vertex::new(pair(), vec![Slot::Leaf(1), Slot::Leaf(2)]);
    let t = WTree::Node(Vertex::new(pair(), vec![edge(0.25, child.clone()), Slot::Leaf(3)]));
    let id = Vertex::new(DiskConfig::identity(2), vec![edge(0.0, child)]);
    let t2 = WTree::Node(Vertex::new(pair(), vec![edge(0.25, id), Slot::Leaf(3)]));
    assert!(canonical_equal(&proxy(&t, 3).unwrap(), &proxy(&t2, 3).unwrap()));
}

#[test]
fn theta_on_trivial_tree_adds_one_round_body() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..20 {
        let g = random_unit_based(&mut rng, 3);
        let out = theta(&WTree::Trivial, std::slice::from_ref(&g)).unwrap();
        assert_eq!(out.nodes.len(), g.nodes.len() + 1);
        assert_eq!(out.edges.len(), 1);
        // the extra body is the base hemisphere itself
        assert!(canonical_equal(&out, &g));
    }
}

#[test]
fn theta_output_is_unit_based() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let spec = TreeSpec::new(3, 3, 3);
    for _ in 0..50 {
        let t = random_tree(&mut rng, &spec);
        let gs: Vec<_> = (0..t.arity()).map(|_| random_unit_based(&mut rng, 3)).collect();
        let out = theta(&t, &gs).unwrap();
        out.validate().unwrap();
        let base = out.site(out.base().unwrap()).unwrap();
        assert_eq!(
            base.attachment,
            Attachment::FreeHead {
                lambda: 1.0,
                r: FRAC_PI_2
            }
        );
    }
}

#[test]
fn theta_rejects_bad_inputs() {
    let t = WTree::Trivial;
    assert!(matches!(theta(&t, &[]), Err(ActionError::Arity { .. })));
    let mut g = unit_ball(3);
    g.nodes[0].sites[0].attachment = Attachment::FreeHead { lambda: 2.0, r: 1.0 };
    assert!(matches!(theta(&t, &[g]), Err(ActionError::NotUnitBased(1))));
}

#[test]
fn verify_action_small_run_is_clean() {
    let report = verify_action(7, 30);
    let failed: Vec<_> = report.results.iter().filter(|r| !r.passed).collect();
    assert!(failed.is_empty(), "{:#?}", failed.first());
    assert_eq!(report.results.len(), 120);
}

#[test]
fn split_edge_gives_the_same_proxy() {
    let child = Vertex::new(pair(), vec![Slot::Leaf(1), Slot::Leaf(2)]);
    let single = WTree::Node(Vertex::new(pair(), vec![edge(0.75, child.clone()), Slot::Leaf(3)]));
    let id = Vertex::new(DiskConfig::identity(2), vec![edge(0.5, child)]);
    let split = WTree::Node(Vertex::new(pair(), vec![edge(0.5, id), Slot::Leaf(3)]));
    assert!(canonical_equal(&proxy(&single, 3).unwrap(), &proxy(&split, 3).unwrap()));
}

#[test]
fn seed_42_has_no_failures() {
    let report = verify_action(42, 200);
    assert_eq!(report.failures, 0, "{:#?}", report.results.iter().find(|r| !r.passed));
}
