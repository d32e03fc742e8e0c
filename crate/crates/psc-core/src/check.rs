//! Seeded property harnesses shared by the command line front end.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::action::{omega_recursion, verify_action, OmegaMode};
use crate::desc::{
    join_ij, mu_head, mu_torp, parse_descriptor, print_descriptor, Attachment, JoinRule, SiteRef,
    SphereDescriptor,
};
use crate::disks::{
    act_sigma, gamma, parse_config_table, print_config_table, ConfigTable, DiskConfig,
};
use crate::gen::{
    random_capped, random_config, random_headed, random_permutation, random_tree, Shape, TreeSpec,
};
use crate::perm::{block_permutation, permute};
use crate::tree::{normalize, parse_tree, print_tree, star, trees_close};
use crate::warp::{torpedo_profile, verify_psc, WarpedMetric};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropertyResult {
    pub name: String,
    pub cases: usize,
    pub failures: usize,
    /// Description of the first failing case.
    pub first_failure: Option<String>,
}

impl PropertyResult {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

struct Tally {
    name: &'static str,
    cases: usize,
    failures: usize,
    first: Option<String>,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Tally {
            name,
            cases: 0,
            failures: 0,
            first: None,
        }
    }

    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            if self.first.is_none() {
                self.first = Some(what());
            }
        }
    }

    fn finish(self) -> PropertyResult {
        PropertyResult {
            name: self.name.to_string(),
            cases: self.cases,
            failures: self.failures,
            first_failure: self.first,
        }
    }
}

fn any_config(rng: &mut ChaCha8Rng, dim: usize, max_arity: usize) -> DiskConfig {
    let arity = rng.gen_range(0..=max_arity);
    let shape = match rng.gen_range(0..3) {
        0 => Shape::Small,
        1 => Shape::Mid,
        _ => Shape::Big,
    };
    random_config(rng, dim, arity, shape)
}

fn configs_close(a: &DiskConfig, b: &DiskConfig, tol: f64) -> bool {
    a.arity() == b.arity()
        && a.disks.iter().zip(&b.disks).all(|(x, y)| {
            (x.radius - y.radius).abs() <= tol
                && x.center.iter().zip(&y.center).all(|(p, q)| (p - q).abs() <= tol)
        })
}

/// Associativity, equivariance and unit laws of the little disks operad.
pub fn disks_operad(rng: &mut ChaCha8Rng, cases: usize) -> PropertyResult {
    let mut tally = Tally::new("disks_operad");
    for _ in 0..cases {
        let dim = rng.gen_range(1..=3);
        let c = any_config(rng, dim, 4);
        let ds: Vec<DiskConfig> = (0..c.arity()).map(|_| any_config(rng, dim, 3)).collect();
        let cd = gamma(&c, &ds).expect("valid inputs");
        let es: Vec<DiskConfig> = (0..cd.arity()).map(|_| any_config(rng, dim, 3)).collect();
        let left = gamma(&cd, &es).expect("valid inputs");
        let mut at = 0;
        let fs: Vec<DiskConfig> = ds
            .iter()
            .map(|d| {
                let block = &es[at..at + d.arity()];
                at += d.arity();
                gamma(d, block).expect("valid inputs")
            })
            .collect();
        let right = gamma(&c, &fs).expect("valid inputs");
        tally.record(configs_close(&left, &right, 1e-12), || {
            format!("associativity: {c:?} with {ds:?} and {es:?}")
        });

        let sigma = random_permutation(rng, c.arity());
        let sizes: Vec<usize> = ds.iter().map(DiskConfig::arity).collect();
        let lhs = gamma(&act_sigma(&c, &sigma).expect("permutation"), &permute(&ds, &sigma))
            .expect("valid inputs");
        let rhs = act_sigma(&cd, &block_permutation(&sigma, &sizes)).expect("permutation");
        tally.record(lhs == rhs, || format!("equivariance: {c:?} by {sigma:?}"));

        let one = DiskConfig::identity(dim);
        let units = gamma(&one, std::slice::from_ref(&c)).ok() == Some(c.clone())
            && gamma(&c, &vec![one; c.arity()]).ok() == Some(c.clone());
        tally.record(units, || format!("unit laws: {c:?}"));
    }
    tally.finish()
}

/// Commutativity, associativity, unit and absorption of `star` on the
/// 0.05 grid.
pub fn star_laws() -> PropertyResult {
    let mut tally = Tally::new("star_laws");
    let grid: Vec<f64> = (0..=20).map(|k| k as f64 * 0.05).collect();
    for &a in &grid {
        tally.record(star(a, 0.0) == a && star(a, 1.0) == 1.0, || format!("units at {a}"));
        for &b in &grid {
            let ab = star(a, b);
            tally.record(ab == star(b, a) && (0.0..=1.0).contains(&ab), || {
                format!("commutativity or range at ({a}, {b})")
            });
            for &c in &grid {
                let l = star(star(a, b), c);
                let r = star(a, star(b, c));
                tally.record((l - r).abs() <= 1e-12, || {
                    format!("associativity at ({a}, {b}, {c}): {l} vs {r}")
                });
            }
        }
    }
    tally.finish()
}

pub fn normalize_idempotent(rng: &mut ChaCha8Rng, cases: usize) -> PropertyResult {
    let mut tally = Tally::new("normalize_idempotent");
    for _ in 0..cases {
        let spec = TreeSpec::new(rng.gen_range(1..=3), 4, 3);
        let t = random_tree(rng, &spec);
        let n = normalize(&t);
        tally.record(trees_close(&normalize(&n), &n, 0.0), || {
            format!("{t:?}")
        });
    }
    tally.finish()
}

/// Unsegmented weights against `1 - prod(1 - s)`, and the segmented reset
/// after a unit edge.
pub fn omega_laws(rng: &mut ChaCha8Rng, cases: usize) -> PropertyResult {
    let mut tally = Tally::new("omega_laws");
    for _ in 0..cases {
        let len = rng.gen_range(1..8);
        let s: Vec<f64> = (0..len).map(|_| rng.gen_range(0.0..1.0)).collect();
        let w = omega_recursion(&s, OmegaMode::Unsegmented);
        let mut prod = 1.0;
        let ok = s.iter().zip(&w).all(|(si, wi)| {
            prod *= 1.0 - si;
            (wi - (1.0 - prod)).abs() <= 1e-12
        });
        tally.record(ok, || format!("closed form on {s:?}"));

        let cut = rng.gen_range(0..=len);
        let mut with_one = s[..cut].to_vec();
        with_one.push(1.0);
        with_one.extend_from_slice(&s[cut..]);
        let above = omega_recursion(&s[cut..], OmegaMode::Segmented);
        let w = omega_recursion(&with_one, OmegaMode::Segmented);
        tally.record(w[cut + 1..] == above[..], || {
            format!("reset after position {cut} in {s:?}")
        });
    }
    tally.finish()
}

pub fn action(seed: u64, cases: usize) -> PropertyResult {
    let report = verify_action(seed, cases);
    PropertyResult {
        name: "psc_action".into(),
        cases: report.results.len(),
        failures: report.failures,
        first_failure: report
            .results
            .iter()
            .find(|r| !r.passed)
            .map(|r| format!("case {} ({}): {:?}", r.case, r.property, r.counterexample)),
    }
}

/// Exactly one site is the base and it is still free.
fn one_free_base(d: &SphereDescriptor) -> bool {
    let bases = d.sites_where(|s| s.base);
    bases.len() == 1
        && d.site(bases[0]).is_ok_and(|s| {
            matches!(
                s.attachment,
                Attachment::FreeTorpedo { .. }
                    | Attachment::FreeHead { .. }
                    | Attachment::FreeBulb { .. }
            )
        })
}

fn free_cap_ids(d: &SphereDescriptor, skip: usize) -> Vec<(usize, String)> {
    let mut out: Vec<(usize, String)> = d
        .free_torpedoes()
        .into_iter()
        .map(|r| (r.node + skip, d.site(r).expect("listed site").id.clone()))
        .collect();
    out.sort();
    out
}

/// The three-fold products keep exactly one free base, and a single join
/// consumes exactly the two caps it joins.
pub fn products(rng: &mut ChaCha8Rng, cases: usize) -> PropertyResult {
    let mut tally = Tally::new("products");
    let caps = [SiteRef::new(0, 0), SiteRef::new(0, 1), SiteRef::new(0, 2)];
    for _ in 0..cases {
        let g3 = random_capped(rng, 3, 3);
        let n = rng.gen_range(1..4);
        let g = random_capped(rng, 3, n);
        let n = rng.gen_range(1..4);
        let h = random_capped(rng, 3, n);
        let out = mu_torp(&g3, caps, JoinRule::PiL, &g, &h);
        tally.record(out.as_ref().is_ok_and(one_free_base), || {
            format!("mu_torp: {out:?}")
        });

        let g3 = random_headed(rng, 3, 3);
        let n = rng.gen_range(1..3);
        let g = random_headed(rng, 3, n);
        let n = rng.gen_range(1..3);
        let h = random_headed(rng, 3, n);
        let out = mu_head(&g3, caps, &g, &h);
        tally.record(out.as_ref().is_ok_and(one_free_base), || {
            format!("mu_head: {out:?}")
        });

        let n = rng.gen_range(1..5);
        let g = random_capped(rng, 3, n);
        let n = rng.gen_range(1..5);
        let h = random_capped(rng, 3, n);
        let i = rng.gen_range(0..g.nodes[0].sites.len());
        let j = rng.gen_range(0..h.nodes[0].sites.len());
        let joined = join_ij(JoinRule::PiL, &g, SiteRef::new(0, i), &h, SiteRef::new(0, j));
        let mut expected: Vec<(usize, String)> = free_cap_ids(&g, 0)
            .into_iter()
            .filter(|c| c.1 != g.nodes[0].sites[i].id)
            .chain(
                free_cap_ids(&h, 1)
                    .into_iter()
                    .filter(|c| c.1 != h.nodes[0].sites[j].id),
            )
            .collect();
        expected.sort();
        let ok = joined
            .as_ref()
            .is_ok_and(|d| free_cap_ids(d, 0) == expected);
        tally.record(ok, || format!("join_ij caps {i} and {j}: {joined:?}"));
    }
    tally.finish()
}

/// Trees, configuration tables and descriptors survive print then parse.
pub fn round_trips(rng: &mut ChaCha8Rng, cases: usize) -> PropertyResult {
    let mut tally = Tally::new("round_trips");
    for _ in 0..cases {
        let dim = rng.gen_range(1..=3);
        let t = random_tree(rng, &TreeSpec::new(dim, 4, 3));
        let mut table = ConfigTable::new(dim);
        let text = print_tree(&t, &mut table);
        let table_text = print_config_table(&table);
        let back = parse_config_table(&table_text)
            .map_err(|e| e.to_string())
            .and_then(|tab| {
                let same_table = tab == table;
                parse_tree(&text, &tab)
                    .map(|u| same_table && trees_close(&u, &t, 0.0))
                    .map_err(|e| e.to_string())
            });
        tally.record(back == Ok(true), || format!("tree {text}"));

        let mut table = ConfigTable::new(dim);
        table.insert("c", any_config(rng, dim, 4));
        let text = print_config_table(&table);
        tally.record(parse_config_table(&text).ok() == Some(table), || {
            format!("config table {text}")
        });

        let n = rng.gen_range(1..4);
        let d = random_headed(rng, 3, n);
        let text = print_descriptor(&d);
        tally.record(parse_descriptor(&text).ok() == Some(d), || {
            format!("descriptor {text}")
        });
    }
    tally.finish()
}

/// Torpedo metrics for n from 3 to 7 and three scales.
pub fn torpedo_positivity(step: f64) -> PropertyResult {
    let mut tally = Tally::new("torpedo_positivity");
    for dim in 3..=7 {
        for delta in [0.1, 1.0, 10.0] {
            let report = torpedo_profile(delta)
                .and_then(|p| WarpedMetric::new(dim, p))
                .map(|m| verify_psc(&m, step));
            let ok = report.as_ref().is_ok_and(|r| r.min_r > 0.0);
            tally.record(ok, || format!("n={dim} delta={delta}: {report:?}"));
        }
    }
    tally.finish()
}

/// Every harness, seeded from `seed`, with `cases` random cases where the
/// harness is randomized.
pub fn run_all(seed: u64, cases: usize) -> Vec<PropertyResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    vec![
        disks_operad(&mut rng, cases),
        star_laws(),
        normalize_idempotent(&mut rng, cases),
        omega_laws(&mut rng, cases),
        action(seed, cases),
        products(&mut rng, cases),
        round_trips(&mut rng, cases),
        torpedo_positivity(1e-3),
    ]
}
