//! Recovery of the Grassmann graph from the non-degenerate subgraph.
//!
//! The pipeline never looks at coordinates while reconstructing: the
//! clique graphs, their pruned variants, the special sets, and the
//! recovered graph are all computed from the subgraph's adjacency and the
//! member lists of its maximal cliques. Defining subspaces ride along in a
//! separate family table and are consulted only for cross-checks and for
//! the explicit verification map at the very end.

use std::collections::BTreeSet;
use std::time::Instant;

use rayon::prelude::*;

use crate::bitset;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::grassmann::{
    classify_maximal_cliques, CliqueCensus, CliqueClass, GraphKind, GrassmannGraph,
};
use crate::report::{CheckLine, InstanceJson, VerdictCounts, VerdictReport};
use crate::subspace::{enumerate_subspaces, Ambient, SubspaceBasis};
use crate::Caps;

/// Which family of maximal cliques drives the reconstruction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Flavor {
    Stars,
    Tops,
}

impl Flavor {
    pub fn as_str(self) -> &'static str {
        match self {
            Flavor::Stars => "stars",
            Flavor::Tops => "tops",
        }
    }
}

/// The stars (or tops) of the non-degenerate graph: member vertex lists
/// in a fixed order, with the defining subspaces kept in a parallel table
/// for bookkeeping only.
#[derive(Debug, Clone)]
pub struct CliqueFamily {
    pub flavor: Flavor,
    pub members: Vec<Vec<u32>>,
    pub defining: Vec<SubspaceBasis>,
    /// For stars: whether the star is a maximal star (non-degenerate X).
    pub maximal_star: Vec<bool>,
}

/// Splits a census into the star family and the top family, both sorted
/// by member list.
pub fn families_from_census(census: &CliqueCensus) -> (CliqueFamily, CliqueFamily) {
    let mut stars = CliqueFamily {
        flavor: Flavor::Stars,
        members: Vec::new(),
        defining: Vec::new(),
        maximal_star: Vec::new(),
    };
    let mut tops = CliqueFamily {
        flavor: Flavor::Tops,
        members: Vec::new(),
        defining: Vec::new(),
        maximal_star: Vec::new(),
    };
    for e in &census.entries {
        match e.geometric {
            CliqueClass::Top => {
                tops.members.push(e.members.clone());
                tops.defining.push(e.defining.clone());
                tops.maximal_star.push(false);
            }
            class => {
                stars.members.push(e.members.clone());
                stars.defining.push(e.defining.clone());
                stars.maximal_star.push(class == CliqueClass::MaximalStar);
            }
        }
    }
    (stars, tops)
}

/// The graph whose vertices are the cliques of one family; edges follow
/// the rule "every vertex of each clique is adjacent to at least one
/// vertex of the other". Member lists are the only payload the edge
/// computation sees.
#[derive(Debug, Clone)]
pub struct CliqueGraph {
    pub flavor: Flavor,
    pub pruned: bool,
    pub members: Vec<Vec<u32>>,
    pub graph: Graph,
}

pub fn build_clique_graph(
    delta: &Graph,
    flavor: Flavor,
    members: &[Vec<u32>],
) -> Result<CliqueGraph> {
    let nv = delta.vertex_count();
    let adj_bits = delta.adjacency_bitsets();
    let memb_bits: Vec<Vec<u64>> = members
        .iter()
        .map(|m| bitset::from_indices(nv, m))
        .collect();
    let covered = |i: usize, j: usize| -> bool {
        members[i]
            .iter()
            .all(|&v| bitset::intersects(&adj_bits[v as usize], &memb_bits[j]))
    };
    let edges: Vec<(u32, u32)> = (0..members.len())
        .into_par_iter()
        .flat_map_iter(|i| {
            let mut local = Vec::new();
            for j in (i + 1)..members.len() {
                if covered(i, j) && covered(j, i) {
                    local.push((i as u32, j as u32));
                }
            }
            local
        })
        .collect();
    let keys = (0..members.len()).map(|i| format!("c{i:06}")).collect();
    let graph = Graph::new(format!("delta_{}", flavor.as_str()), keys, &edges)?;
    Ok(CliqueGraph {
        flavor,
        pruned: false,
        members: members.to_vec(),
        graph,
    })
}

/// Removes the edges between intersecting cliques.
pub fn prune(cg: &CliqueGraph) -> Result<CliqueGraph> {
    let disjoint = |a: &[u32], b: &[u32]| -> bool {
        let (mut i, mut j) = (0usize, 0usize);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => return false,
            }
        }
        true
    };
    let edges: Vec<(u32, u32)> = cg
        .graph
        .edges()
        .into_iter()
        .filter(|&(u, v)| disjoint(&cg.members[u as usize], &cg.members[v as usize]))
        .collect();
    let keys = cg.graph.keys().to_vec();
    let graph = Graph::new(format!("{}_pruned", cg.graph.name()), keys, &edges)?;
    Ok(CliqueGraph {
        flavor: cg.flavor,
        pruned: true,
        members: cg.members.clone(),
        graph,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpecialSetMode {
    Auto,
    Blind,
    Assisted,
}

impl SpecialSetMode {
    pub fn as_str(self) -> &'static str {
        match self {
            SpecialSetMode::Auto => "auto",
            SpecialSetMode::Blind => "blind",
            SpecialSetMode::Assisted => "assisted",
        }
    }
}

/// Vertex-count threshold above which auto mode switches from blind
/// enumeration to the assisted search.
pub const BLIND_VERTEX_LIMIT: usize = 2000;

#[derive(Debug, Clone)]
pub struct SpecialSets {
    /// Sorted clique-index lists, sorted lexicographically.
    pub sets: Vec<Vec<u32>>,
    pub mode_used: &'static str,
}

/// Special sets found by full enumeration: maximal cliques of the pruned
/// graph that are also maximal cliques of the unpruned graph.
pub fn special_sets_blind(
    unpruned: &CliqueGraph,
    pruned: &CliqueGraph,
    limit: usize,
) -> Result<Vec<Vec<u32>>> {
    let cliques = pruned.graph.maximal_cliques(limit)?;
    Ok(cliques
        .into_iter()
        .filter(|c| unpruned.graph.is_maximal_clique(c))
        .collect())
}

/// Special sets verified against a candidate list: every candidate must be
/// maximal in both graphs, and a local extension search from every vertex
/// of the pruned graph confirms no special set outside the list exists.
pub fn special_sets_assisted(
    unpruned: &CliqueGraph,
    pruned: &CliqueGraph,
    candidates: &[Vec<u32>],
    limit: usize,
) -> Result<Vec<Vec<u32>>> {
    let mut sets: Vec<Vec<u32>> = candidates.to_vec();
    for s in sets.iter_mut() {
        s.sort_unstable();
    }
    sets.sort_unstable();
    sets.dedup();
    for s in &sets {
        if !pruned.graph.is_maximal_clique(s) {
            return Err(Error::Violation(format!(
                "candidate special set {s:?} is not a maximal clique of the pruned graph"
            )));
        }
        if !unpruned.graph.is_maximal_clique(s) {
            return Err(Error::Violation(format!(
                "candidate special set {s:?} is not a maximal clique of the unpruned graph"
            )));
        }
    }
    let known: BTreeSet<Vec<u32>> = sets.iter().cloned().collect();
    let strays: Vec<String> = (0..pruned.graph.vertex_count() as u32)
        .into_par_iter()
        .map(|v| -> Result<Vec<String>> {
            let mut local = Vec::new();
            for c in pruned.graph.maximal_cliques_containing(v, limit)? {
                if unpruned.graph.is_maximal_clique(&c) && !known.contains(&c) {
                    local.push(format!("special set {c:?} missing from candidates"));
                }
            }
            Ok(local)
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    if let Some(first) = strays.first() {
        return Err(Error::Violation(first.clone()));
    }
    Ok(sets)
}

/// Dispatches on mode; auto picks blind below [`BLIND_VERTEX_LIMIT`]
/// vertices.
pub fn special_sets(
    unpruned: &CliqueGraph,
    pruned: &CliqueGraph,
    mode: SpecialSetMode,
    candidates: Option<&[Vec<u32>]>,
    limit: usize,
) -> Result<SpecialSets> {
    let effective = match mode {
        SpecialSetMode::Auto => {
            if pruned.graph.vertex_count() <= BLIND_VERTEX_LIMIT {
                SpecialSetMode::Blind
            } else {
                SpecialSetMode::Assisted
            }
        }
        m => m,
    };
    let sets = match effective {
        SpecialSetMode::Blind => special_sets_blind(unpruned, pruned, limit)?,
        SpecialSetMode::Assisted => {
            let Some(cand) = candidates else {
                return Err(Error::InvalidInput(
                    "assisted special-set search needs a candidate list".into(),
                ));
            };
            special_sets_assisted(unpruned, pruned, cand, limit)?
        }
        SpecialSetMode::Auto => unreachable!(),
    };
    Ok(SpecialSets {
        sets,
        mode_used: effective.as_str(),
    })
}

/// The rebuilt graph: the non-degenerate vertices first, then one vertex
/// per special set.
#[derive(Debug, Clone)]
pub struct RecoveredGraph {
    pub flavor: Flavor,
    pub graph: Graph,
    pub delta_vertices: usize,
}

/// Assembles the recovered graph from subgraph-level data only: the
/// subgraph adjacency, the clique member lists, the special sets (as
/// clique-index lists), and, for the tops flavor, the member lists of the
/// stars used by the special-set adjacency rule.
pub fn build_recovered_graph(
    delta: &Graph,
    flavor: Flavor,
    clique_members: &[Vec<u32>],
    specials: &[Vec<u32>],
    stars_members: Option<&[Vec<u32>]>,
) -> Result<RecoveredGraph> {
    let nd = delta.vertex_count();
    let mut edges: Vec<(u32, u32)> = delta.edges();

    // vertex in a clique belonging to the special set <-> edge
    let union_bits: Vec<Vec<u64>> = specials
        .iter()
        .map(|s| {
            let mut b = bitset::zeroed(nd);
            for &ci in s {
                for &v in &clique_members[ci as usize] {
                    bitset::set(&mut b, v);
                }
            }
            b
        })
        .collect();
    for (j, b) in union_bits.iter().enumerate() {
        let sv = (nd + j) as u32;
        for v in bitset::iter_ones(b) {
            edges.push((v, sv));
        }
    }

    match flavor {
        Flavor::Stars => {
            // two special sets of stars are adjacent iff they share a star
            for i in 0..specials.len() {
                for j in (i + 1)..specials.len() {
                    if !sorted_disjoint(&specials[i], &specials[j]) {
                        edges.push(((nd + i) as u32, (nd + j) as u32));
                    }
                }
            }
        }
        Flavor::Tops => {
            let Some(stars) = stars_members else {
                return Err(Error::InvalidInput(
                    "tops-flavor recovery needs the star member lists".into(),
                ));
            };
            // two special sets of tops are adjacent iff some star meets
            // every top in both sets
            let star_bits: Vec<Vec<u64>> = stars
                .iter()
                .map(|m| bitset::from_indices(nd, m))
                .collect();
            let top_bits: Vec<Vec<u64>> = clique_members
                .iter()
                .map(|m| bitset::from_indices(nd, m))
                .collect();
            let compat: Vec<Vec<u64>> = specials
                .par_iter()
                .map(|s| {
                    let mut c = bitset::zeroed(stars.len());
                    for (z, sb) in star_bits.iter().enumerate() {
                        let meets_all = s
                            .iter()
                            .all(|&t| bitset::intersects(sb, &top_bits[t as usize]));
                        if meets_all {
                            bitset::set(&mut c, z as u32);
                        }
                    }
                    c
                })
                .collect();
            for i in 0..specials.len() {
                for j in (i + 1)..specials.len() {
                    if bitset::intersects(&compat[i], &compat[j]) {
                        edges.push(((nd + i) as u32, (nd + j) as u32));
                    }
                }
            }
        }
    }

    let mut keys: Vec<String> = delta.keys().to_vec();
    keys.extend((0..specials.len()).map(|j| format!("special:{j:06}")));
    let graph = Graph::new(format!("gamma_{}", flavor.as_str()), keys, &edges)?;
    Ok(RecoveredGraph {
        flavor,
        graph,
        delta_vertices: nd,
    })
}

fn sorted_disjoint(a: &[u32], b: &[u32]) -> bool {
    let (mut i, mut j) = (0usize, 0usize);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => return false,
        }
    }
    true
}

/// The verification map: the degenerate k-subspace recovered for each
/// special set, derived from the defining subspaces of two of its member
/// cliques (sum for stars, intersection for tops).
#[derive(Debug, Clone)]
pub struct RecoveryMap {
    pub flavor: Flavor,
    pub targets: Vec<SubspaceBasis>,
}

pub fn classify_special_sets(
    ambient: &Ambient,
    flavor: Flavor,
    specials: &[Vec<u32>],
    family: &CliqueFamily,
) -> Result<RecoveryMap> {
    let field = ambient.field();
    let k = ambient.k();
    let mut targets = Vec::with_capacity(specials.len());
    for s in specials {
        if s.len() < 2 {
            return Err(Error::Violation(format!(
                "special set {s:?} has fewer than two cliques; cannot recover its subspace"
            )));
        }
        let d0 = &family.defining[s[0] as usize];
        let d1 = &family.defining[s[1] as usize];
        let x = match flavor {
            Flavor::Stars => SubspaceBasis::sum(field, d0, d1)?,
            Flavor::Tops => SubspaceBasis::intersect(field, d0, d1)?,
        };
        if x.dim() != k || !x.is_degenerate() {
            return Err(Error::Violation(format!(
                "special set {s:?} recovers {} (dim {}, degenerate: {})",
                x.text(),
                x.dim(),
                x.is_degenerate()
            )));
        }
        for &ci in s {
            let d = &family.defining[ci as usize];
            let ok = match flavor {
                Flavor::Stars => x.contains(field, d)?,
                Flavor::Tops => d.contains(field, &x)?,
            };
            if !ok {
                return Err(Error::Violation(format!(
                    "special set {s:?} is inconsistent: clique {} does not fit {}",
                    d.text(),
                    x.text()
                )));
            }
        }
        targets.push(x);
    }
    Ok(RecoveryMap { flavor, targets })
}

// ---------------------------------------------------------------------------
// Lemma verifications
// ---------------------------------------------------------------------------

/// Tally of an equivalence check over all pairs of stars or tops: (1) the
/// defining subspaces are adjacent; (2) every vertex of each clique has a
/// neighbor in the other.
#[derive(Debug, Clone)]
pub struct LemmaPairReport {
    pub lemma: String,
    pub pairs: u64,
    pub agree: u64,
    /// (1) holds, (2) fails.
    pub forward_failures: Vec<String>,
    /// (2) holds, (1) fails.
    pub backward_failures: Vec<String>,
}

impl LemmaPairReport {
    pub fn holds(&self) -> bool {
        self.forward_failures.is_empty() && self.backward_failures.is_empty()
    }
}

fn verify_lemma_pairs(
    delta: &GrassmannGraph,
    family: &CliqueFamily,
    lemma: &str,
    sum_dim_for_adjacent: usize,
) -> Result<LemmaPairReport> {
    let field = delta.ambient.field();
    let nv = delta.graph.vertex_count();
    let adj_bits = delta.graph.adjacency_bitsets();
    let memb_bits: Vec<Vec<u64>> = family
        .members
        .iter()
        .map(|m| bitset::from_indices(nv, m))
        .collect();
    let covered = |i: usize, j: usize| -> bool {
        family.members[i]
            .iter()
            .all(|&v| bitset::intersects(&adj_bits[v as usize], &memb_bits[j]))
    };
    let n_fam = family.members.len();
    let results: Vec<(u64, u64, Vec<String>, Vec<String>)> = (0..n_fam)
        .into_par_iter()
        .map(|i| {
            let mut pairs = 0u64;
            let mut agree = 0u64;
            let mut fwd = Vec::new();
            let mut back = Vec::new();
            for j in (i + 1)..n_fam {
                pairs += 1;
                let subspace_adjacent = SubspaceBasis::dim_sum(
                    field,
                    &family.defining[i],
                    &family.defining[j],
                )
                .expect("same ambient") == sum_dim_for_adjacent;
                let rule = covered(i, j) && covered(j, i);
                if subspace_adjacent == rule {
                    agree += 1;
                } else if subspace_adjacent {
                    fwd.push(format!(
                        "{} ~ {} but the clique rule fails",
                        family.defining[i].text(),
                        family.defining[j].text()
                    ));
                } else {
                    back.push(format!(
                        "clique rule links {} and {} but the subspaces are not adjacent",
                        family.defining[i].text(),
                        family.defining[j].text()
                    ));
                }
            }
            (pairs, agree, fwd, back)
        })
        .collect();
    let mut report = LemmaPairReport {
        lemma: lemma.to_string(),
        pairs: 0,
        agree: 0,
        forward_failures: Vec::new(),
        backward_failures: Vec::new(),
    };
    for (p, a, f, b) in results {
        report.pairs += p;
        report.agree += a;
        report.forward_failures.extend(f);
        report.backward_failures.extend(b);
    }
    Ok(report)
}

/// Star-adjacency equivalence over every pair of stars.
pub fn verify_lemma_s(delta: &GrassmannGraph, stars: &CliqueFamily) -> Result<LemmaPairReport> {
    // (k-1)-subspaces are adjacent iff their sum has dimension k
    verify_lemma_pairs(delta, stars, "star-adjacency", delta.ambient.k())
}

/// Top-adjacency equivalence over every pair of tops.
pub fn verify_lemma_t(delta: &GrassmannGraph, tops: &CliqueFamily) -> Result<LemmaPairReport> {
    // (k+1)-subspaces are adjacent iff their sum has dimension k+2
    verify_lemma_pairs(delta, tops, "top-adjacency", delta.ambient.k() + 2)
}

/// Existence of a non-degenerate k-subspace between X and Y for every
/// non-degenerate (k+1)-subspace Y and every (k-1)-subspace X inside it.
#[derive(Debug, Clone)]
pub struct LemmaFReport {
    pub checked: u64,
    pub failures: Vec<String>,
}

impl LemmaFReport {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn verify_lemma_f(ambient: &Ambient, caps: &Caps) -> Result<LemmaFReport> {
    let field = ambient.field();
    let (n, k) = (ambient.n(), ambient.k());
    let mut checked = 0u64;
    let mut failures = Vec::new();
    for y in enumerate_subspaces(field, n, k + 1, caps.subspace_cap)? {
        if y.is_degenerate() {
            continue;
        }
        for x in y.subspaces_of(field, k - 1)? {
            checked += 1;
            let found = SubspaceBasis::between(field, &x, &y)?
                .iter()
                .any(|a| !a.is_degenerate());
            if !found {
                failures.push(format!(
                    "no non-degenerate subspace between X={} and Y={}",
                    x.text(),
                    y.text()
                ));
            }
        }
    }
    Ok(LemmaFReport { checked, failures })
}

// ---------------------------------------------------------------------------
// The full pipeline
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Route {
    Auto,
    Stars,
    Tops,
    N4,
}

impl Route {
    pub fn as_str(self) -> &'static str {
        match self {
            Route::Auto => "auto",
            Route::Stars => "stars",
            Route::Tops => "tops",
            Route::N4 => "n4",
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct RecoverOptions {
    pub route: Route,
    pub mode: SpecialSetMode,
    pub exploratory: bool,
    pub caps: Caps,
    /// Record wall-clock time in the verdict (off by default so repeated
    /// runs emit byte-identical JSON).
    pub timing: bool,
}

impl Default for RecoverOptions {
    fn default() -> RecoverOptions {
        RecoverOptions {
            route: Route::Auto,
            mode: SpecialSetMode::Auto,
            exploratory: false,
            caps: Caps::default(),
            timing: false,
        }
    }
}

/// Runs the full recovery pipeline and verifies the result against the
/// independently built Grassmann graph, via the explicit map that fixes
/// every non-degenerate subspace and sends each special set to its
/// recovered degenerate subspace.
pub fn recover_and_verify(ambient: &Ambient, opts: &RecoverOptions) -> Result<VerdictReport> {
    let started = Instant::now();
    ambient.require_recovery_range()?;
    let (n, k, q) = (ambient.n(), ambient.k(), ambient.q() as usize);
    let hypothesis = q > n - k;
    if !hypothesis && !opts.exploratory {
        return Err(Error::Refused(format!(
            "q = {q} <= n-k = {}; the construction is only asserted for q > n-k \
             (use exploratory mode for diagnostics)",
            n - k
        )));
    }

    let flavors: Vec<Flavor> = match opts.route {
        Route::N4 => {
            if (n, k) != (4, 2) {
                return Err(Error::Refused(format!(
                    "the n4 route needs (n,k) = (4,2); got ({n},{k})"
                )));
            }
            return crate::n4dual::recover_n4(ambient, opts, started);
        }
        Route::Stars => {
            if k < 3 {
                return Err(Error::Refused(format!(
                    "the stars route needs k >= 3; got k = {k}"
                )));
            }
            vec![Flavor::Stars]
        }
        Route::Tops => {
            if k > n - 3 {
                return Err(Error::Refused(format!(
                    "the tops route needs k <= n-3; got (n,k) = ({n},{k})"
                )));
            }
            vec![Flavor::Tops]
        }
        Route::Auto => {
            if (n, k) == (4, 2) {
                return crate::n4dual::recover_n4(ambient, opts, started);
            }
            let mut fl = Vec::new();
            if k >= 3 {
                fl.push(Flavor::Stars);
            }
            if k <= n - 3 {
                fl.push(Flavor::Tops);
            }
            if fl.is_empty() {
                return Err(Error::Refused(format!(
                    "no route applies to (n,k) = ({n},{k})"
                )));
            }
            fl
        }
    };

    let gamma = GrassmannGraph::build(ambient, GraphKind::Full, &opts.caps)?;
    let delta = GrassmannGraph::build(ambient, GraphKind::NonDegenerate, &opts.caps)?;
    let mut checks = Vec::new();
    let mut violations = Vec::new();

    let spot = delta.verify_adjacency_pairwise(Some(2000))?;
    checks.push(CheckLine::new(
        "adjacency-oracle-sample",
        spot.ok(),
        format!("{} pairs", spot.pairs_checked),
    ));
    violations.extend(spot.mismatches.iter().take(3).cloned());

    let census = classify_maximal_cliques(&delta, &opts.caps)?;
    let (star_family, top_family) = families_from_census(&census);
    let degenerate: Vec<SubspaceBasis> =
        enumerate_subspaces(ambient.field(), n, k, opts.caps.subspace_cap)?
            .into_iter()
            .filter(SubspaceBasis::is_degenerate)
            .collect();

    let mut isomorphic_all = true;
    let mut specials_count = 0usize;
    let mut mode_used = "";
    let mut route_names = Vec::new();
    for flavor in &flavors {
        let family = match flavor {
            Flavor::Stars => &star_family,
            Flavor::Tops => &top_family,
        };
        route_names.push(flavor.as_str().to_string());
        let outcome = run_flavor(
            ambient,
            &gamma,
            &delta,
            *flavor,
            family,
            &star_family,
            &degenerate,
            opts,
        );
        match outcome {
            Ok(fo) => {
                checks.extend(fo.checks);
                violations.extend(fo.violations);
                isomorphic_all &= fo.isomorphic;
                specials_count = fo.special_sets;
                mode_used = fo.mode_used;
            }
            Err(e) if opts.exploratory => {
                violations.push(format!("{} route: {e}", flavor.as_str()));
                isomorphic_all = false;
            }
            Err(e) => return Err(e),
        }
    }
    if flavors.len() == 2 {
        checks.push(CheckLine::new(
            "cross-route-agreement",
            isomorphic_all,
            "stars and tops recoveries both match the Grassmann graph",
        ));
    }

    let asserted = hypothesis && !opts.exploratory;
    if asserted && !isomorphic_all {
        return Err(Error::Violation(
            "recovered graph is not isomorphic to the Grassmann graph".into(),
        ));
    }
    Ok(VerdictReport {
        instance: InstanceJson::new(n, k, q as u64),
        route: route_names.join("+"),
        mode: mode_used.to_string(),
        exploratory: opts.exploratory,
        asserted,
        counts: VerdictCounts {
            gamma_vertices: gamma.graph.vertex_count(),
            gamma_edges: gamma.graph.edge_count(),
            delta_vertices: delta.graph.vertex_count(),
            delta_edges: delta.graph.edge_count(),
            stars: star_family.members.len(),
            tops: top_family.members.len(),
            special_sets: specials_count,
            degenerate_k_subspaces: degenerate.len(),
        },
        isomorphic: Some(isomorphic_all),
        checks,
        violations,
        runtime_ms: opts.timing.then(|| started.elapsed().as_millis() as u64),
    })
}

struct FlavorOutcome {
    isomorphic: bool,
    special_sets: usize,
    mode_used: &'static str,
    checks: Vec<CheckLine>,
    violations: Vec<String>,
}

#[allow(clippy::too_many_arguments)]
fn run_flavor(
    ambient: &Ambient,
    gamma: &GrassmannGraph,
    delta: &GrassmannGraph,
    flavor: Flavor,
    family: &CliqueFamily,
    star_family: &CliqueFamily,
    degenerate: &[SubspaceBasis],
    opts: &RecoverOptions,
) -> Result<FlavorOutcome> {
    let field = ambient.field();
    let (n, k) = (ambient.n(), ambient.k());
    let mut checks = Vec::new();
    let mut violations = Vec::new();

    // Family completeness against the geometric construction.
    let expected: usize = match flavor {
        Flavor::Stars => enumerate_subspaces(field, n, k - 1, opts.caps.subspace_cap)?.len(),
        Flavor::Tops => enumerate_subspaces(field, n, k + 1, opts.caps.subspace_cap)?
            .into_iter()
            .filter(|y| !y.is_degenerate())
            .count(),
    };
    let complete = family.members.len() == expected;
    checks.push(CheckLine::new(
        format!("{}-family-complete", flavor.as_str()),
        complete,
        format!("{} cliques, expected {expected}", family.members.len()),
    ));
    if !complete {
        violations.push(format!(
            "{} family has {} cliques, expected {expected}",
            flavor.as_str(),
            family.members.len()
        ));
    }

    let cg = build_clique_graph(&delta.graph, flavor, &family.members)?;
    let cgp = prune(&cg)?;

    // Lemma-backed identification of the clique graph.
    let id_check = match flavor {
        Flavor::Stars => {
            let small = ambient.with_k(k - 1)?;
            let target = GrassmannGraph::build(&small, GraphKind::Full, &opts.caps)?;
            clique_graph_matches(&cg, family, &target, "delta_s=gamma_(k-1)")
        }
        Flavor::Tops => {
            let big = ambient.with_k(k + 1)?;
            let target = GrassmannGraph::build(&big, GraphKind::NonDegenerate, &opts.caps)?;
            clique_graph_matches(&cg, family, &target, "delta_t=delta_(k+1)")
        }
    }?;
    checks.push(id_check);

    // Candidate special sets from the degenerate subspaces (assisted mode
    // and the bijection cross-check both use them).
    let def_index: std::collections::BTreeMap<&SubspaceBasis, u32> = family
        .defining
        .iter()
        .enumerate()
        .map(|(i, d)| (d, i as u32))
        .collect();
    let mut candidates = Vec::with_capacity(degenerate.len());
    for x in degenerate {
        let related = match flavor {
            Flavor::Stars => x.subspaces_of(field, k - 1)?,
            Flavor::Tops => x
                .superspaces(field, k + 1)?
                .into_iter()
                .filter(|y| !y.is_degenerate())
                .collect(),
        };
        let mut idxs = Vec::with_capacity(related.len());
        for r in &related {
            match def_index.get(r) {
                Some(&i) => idxs.push(i),
                None => {
                    return Err(Error::Violation(format!(
                        "expected clique for {} is not in the {} family",
                        r.text(),
                        flavor.as_str()
                    )))
                }
            }
        }
        idxs.sort_unstable();
        candidates.push(idxs);
    }
    candidates.sort_unstable();

    let found = special_sets(&cg, &cgp, opts.mode, Some(&candidates), opts.caps.clique_limit)?;
    let specials = found.sets;

    // Bijection with the degenerate k-subspaces.
    let rmap = classify_special_sets(ambient, flavor, &specials, family)?;
    let mut targets_sorted: Vec<&SubspaceBasis> = rmap.targets.iter().collect();
    targets_sorted.sort_unstable();
    targets_sorted.dedup();
    let bijective =
        targets_sorted.len() == specials.len() && specials.len() == degenerate.len();
    checks.push(CheckLine::new(
        format!("{}-special-sets-bijective", flavor.as_str()),
        bijective,
        format!(
            "{} special sets, {} degenerate subspaces",
            specials.len(),
            degenerate.len()
        ),
    ));
    if !bijective {
        violations.push(format!(
            "{} flavor: {} special sets vs {} degenerate k-subspaces",
            flavor.as_str(),
            specials.len(),
            degenerate.len()
        ));
    }

    let recovered = build_recovered_graph(
        &delta.graph,
        flavor,
        &family.members,
        &specials,
        Some(&star_family.members),
    )?;

    // The explicit map: identity on the non-degenerate part, recovered
    // subspace for each special set.
    let mut f = Vec::with_capacity(recovered.graph.vertex_count());
    for b in &delta.bases {
        f.push(gamma.vertex_of(b).expect("delta vertex sits in gamma"));
    }
    for t in &rmap.targets {
        match gamma.vertex_of(t) {
            Some(v) => f.push(v),
            None => {
                return Err(Error::Violation(format!(
                    "recovered subspace {} is not a Grassmann vertex",
                    t.text()
                )))
            }
        }
    }
    let iso = recovered.graph.check_isomorphism_with_map(&gamma.graph, &f);
    checks.push(CheckLine::new(
        format!("{}-isomorphic-to-gamma", flavor.as_str()),
        iso.isomorphic,
        format!(
            "{} vertices, {} edges",
            recovered.graph.vertex_count(),
            recovered.graph.edge_count()
        ),
    ));
    if let Some(v) = iso.violation {
        violations.push(format!("{} flavor: {v:?}", flavor.as_str()));
    }

    Ok(FlavorOutcome {
        isomorphic: iso.isomorphic,
        special_sets: specials.len(),
        mode_used: found.mode_used,
        checks,
        violations,
    })
}

/// Checks that a clique graph equals a Grassmann graph under the map
/// sending each clique to its defining subspace.
pub fn clique_graph_matches(
    cg: &CliqueGraph,
    family: &CliqueFamily,
    target: &GrassmannGraph,
    name: &str,
) -> Result<CheckLine> {
    if family.defining.len() != cg.graph.vertex_count()
        || target.graph.vertex_count() != cg.graph.vertex_count()
    {
        return Ok(CheckLine::new(
            name,
            false,
            format!(
                "vertex counts differ: {} vs {}",
                cg.graph.vertex_count(),
                target.graph.vertex_count()
            ),
        ));
    }
    let mut f = Vec::with_capacity(family.defining.len());
    for d in &family.defining {
        match target.vertex_of(d) {
            Some(v) => f.push(v),
            None => {
                return Ok(CheckLine::new(
                    name,
                    false,
                    format!("defining subspace {} missing in target", d.text()),
                ))
            }
        }
    }
    let iso = cg.graph.check_isomorphism_with_map(&target.graph, &f);
    Ok(CheckLine::new(
        name,
        iso.isomorphic,
        format!("{} vertices", cg.graph.vertex_count()),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn delta(n: usize, k: usize, q: u64) -> (Ambient, GrassmannGraph) {
        let a = Ambient::new(n, k, q).unwrap();
        let d = GrassmannGraph::build(&a, GraphKind::NonDegenerate, &Caps::default()).unwrap();
        (a, d)
    }

    #[test]
    fn no_special_sets_at_n4() {
        // the clique graphs are complete at n = 4, so nothing is maximal
        // in both the pruned and unpruned graphs
        let (_a, d) = delta(4, 2, 3);
        let census = classify_maximal_cliques(&d, &Caps::default()).unwrap();
        let (stars, tops) = families_from_census(&census);
        for family in [&stars, &tops] {
            let cg = build_clique_graph(&d.graph, family.flavor, &family.members).unwrap();
            let cgp = prune(&cg).unwrap();
            let sets = special_sets_blind(&cg, &cgp, 1_000_000).unwrap();
            assert!(sets.is_empty(), "{:?} flavor found {:?}", family.flavor, sets);
        }
    }

    #[test]
    fn delta_s_and_t_complete_at_n4() {
        let (_a, d) = delta(4, 2, 3);
        let census = classify_maximal_cliques(&d, &Caps::default()).unwrap();
        let (stars, tops) = families_from_census(&census);
        let ds = build_clique_graph(&d.graph, Flavor::Stars, &stars.members).unwrap();
        let n = ds.graph.vertex_count();
        assert_eq!(ds.graph.edge_count(), n * (n - 1) / 2);
        let dt = build_clique_graph(&d.graph, Flavor::Tops, &tops.members).unwrap();
        let m = dt.graph.vertex_count();
        assert_eq!(dt.graph.edge_count(), m * (m - 1) / 2);
    }

    #[test]
    fn maximal_stars_isolated_in_pruned_star_graph() {
        let (_a, d) = delta(4, 2, 3);
        let census = classify_maximal_cliques(&d, &Caps::default()).unwrap();
        let (stars, _tops) = families_from_census(&census);
        let ds = build_clique_graph(&d.graph, Flavor::Stars, &stars.members).unwrap();
        let dsp = prune(&ds).unwrap();
        for (i, &is_max) in stars.maximal_star.iter().enumerate() {
            if is_max {
                assert_eq!(dsp.graph.degree(i as u32), 0);
            }
        }
    }

    #[test]
    fn lemma_f_holds_when_q_exceeds_n_minus_k() {
        let a = Ambient::new(4, 2, 3).unwrap();
        let report = verify_lemma_f(&a, &Caps::default()).unwrap();
        assert!(report.holds());
        assert!(report.checked > 0);
    }

    #[test]
    fn refusal_when_q_too_small() {
        let a = Ambient::new(5, 2, 3).unwrap();
        let err = recover_and_verify(&a, &RecoverOptions::default()).unwrap_err();
        assert!(matches!(err, Error::Refused(_)));
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn refusal_outside_recovery_range() {
        let a = Ambient::new(4, 1, 5).unwrap();
        let err = recover_and_verify(&a, &RecoverOptions::default()).unwrap_err();
        assert!(matches!(err, Error::Refused(_)));
    }

    #[test]
    fn route_guards() {
        let a = Ambient::new(5, 2, 4).unwrap();
        let opts = RecoverOptions {
            route: Route::Stars,
            ..Default::default()
        };
        // stars needs k >= 3
        assert!(matches!(
            recover_and_verify(&a, &opts),
            Err(Error::Refused(_))
        ));
        let b = Ambient::new(5, 3, 3).unwrap();
        let opts = RecoverOptions {
            route: Route::Tops,
            ..Default::default()
        };
        // tops needs k <= n-3
        assert!(matches!(
            recover_and_verify(&b, &opts),
            Err(Error::Refused(_))
        ));
    }
}
