//! The Grassmann graph on k-dimensional subspaces of F_q^n, its subgraph
//! of non-degenerate subspaces, and the classification of that subgraph's
//! maximal cliques into maximal stars, non-maximal stars, and tops.
//!
//! Adjacency joins two k-subspaces whose intersection has dimension k-1
//! (equivalently, whose sum has dimension k+1). The builder groups
//! vertices over shared (k-1)-subspaces, so each edge is produced exactly
//! once; an independent pairwise-rank oracle re-checks the result.

use std::collections::BTreeMap;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bitset;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::subspace::{count_points, enumerate_subspaces, Ambient, SubspaceBasis};
use crate::Caps;

/// Which vertex set the graph carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphKind {
    /// All k-subspaces: the Grassmann graph itself.
    Full,
    /// Only non-degenerate k-subspaces: the graph of [n,k]_q codes.
    NonDegenerate,
}

/// A Grassmann graph (full or non-degenerate) with its vertex table.
#[derive(Debug, Clone)]
pub struct GrassmannGraph {
    pub ambient: Ambient,
    pub kind: GraphKind,
    pub graph: Graph,
    pub bases: Vec<SubspaceBasis>,
    index: BTreeMap<SubspaceBasis, u32>,
}

impl GrassmannGraph {
    pub fn build(ambient: &Ambient, kind: GraphKind, caps: &Caps) -> Result<GrassmannGraph> {
        let field = ambient.field();
        let (n, k) = (ambient.n(), ambient.k());
        let all = enumerate_subspaces(field, n, k, caps.subspace_cap)?;
        let bases: Vec<SubspaceBasis> = match kind {
            GraphKind::Full => all,
            GraphKind::NonDegenerate => all.into_iter().filter(|s| !s.is_degenerate()).collect(),
        };
        let index: BTreeMap<SubspaceBasis, u32> = bases
            .iter()
            .enumerate()
            .map(|(i, b)| (b.clone(), i as u32))
            .collect();

        // Two vertices are adjacent iff they share a (k-1)-subspace, and
        // that subspace is their intersection, so grouping emits each edge
        // exactly once.
        let mut groups: BTreeMap<SubspaceBasis, Vec<u32>> = BTreeMap::new();
        for (i, b) in bases.iter().enumerate() {
            for x in b.subspaces_of(field, k - 1)? {
                groups.entry(x).or_default().push(i as u32);
            }
        }
        let mut edges = Vec::new();
        for members in groups.values() {
            for (a, &u) in members.iter().enumerate() {
                for &v in &members[a + 1..] {
                    edges.push((u, v));
                }
            }
        }
        let name = match kind {
            GraphKind::Full => format!("gamma({n},{k},{})", ambient.q()),
            GraphKind::NonDegenerate => format!("delta({n},{k},{})", ambient.q()),
        };
        let keys = bases.iter().map(SubspaceBasis::text).collect();
        let graph = Graph::new(name, keys, &edges)?;
        Ok(GrassmannGraph {
            ambient: ambient.clone(),
            kind,
            graph,
            bases,
            index,
        })
    }

    /// Reassembles an instance from persisted parts (cache reload).
    pub fn from_parts(
        ambient: Ambient,
        kind: GraphKind,
        graph: Graph,
        bases: Vec<SubspaceBasis>,
    ) -> GrassmannGraph {
        let index = bases
            .iter()
            .enumerate()
            .map(|(i, b)| (b.clone(), i as u32))
            .collect();
        GrassmannGraph {
            ambient,
            kind,
            graph,
            bases,
            index,
        }
    }

    pub fn vertex_of(&self, s: &SubspaceBasis) -> Option<u32> {
        self.index.get(s).copied()
    }

    /// Cross-checks group-built adjacency against the pairwise oracle
    /// (rank of the stacked bases for the sum, kernel construction for the
    /// intersection; the modular identity ties them together). `sample`
    /// limits the scan to that many seeded pseudo-random pairs; `None`
    /// checks every pair.
    pub fn verify_adjacency_pairwise(&self, sample: Option<u64>) -> Result<AdjacencyCheck> {
        let field = self.ambient.field();
        let k = self.ambient.k();
        let nv = self.graph.vertex_count() as u64;
        let mut mismatches = Vec::new();
        let check_pair = |u: u32, v: u32| -> Result<Option<String>> {
            let a = &self.bases[u as usize];
            let b = &self.bases[v as usize];
            let dim_sum = SubspaceBasis::dim_sum(field, a, b)?;
            let inter = SubspaceBasis::intersect(field, a, b)?;
            if inter.dim() + dim_sum != a.dim() + b.dim() {
                return Ok(Some(format!(
                    "modular identity broken for {} and {}",
                    a.text(),
                    b.text()
                )));
            }
            let oracle = inter.dim() == k - 1 && dim_sum == k + 1;
            if oracle != self.graph.has_edge(u, v) {
                return Ok(Some(format!(
                    "adjacency mismatch for {} and {}",
                    a.text(),
                    b.text()
                )));
            }
            Ok(None)
        };
        let pairs_checked;
        match sample {
            None => {
                let mut count = 0u64;
                for u in 0..nv as u32 {
                    for v in (u + 1)..nv as u32 {
                        if let Some(m) = check_pair(u, v)? {
                            mismatches.push(m);
                        }
                        count += 1;
                    }
                }
                pairs_checked = count;
            }
            Some(how_many) => {
                let mut rng = ChaCha8Rng::seed_from_u64(
                    0x6772_6173u64 ^ (nv << 16) ^ u64::from(self.ambient.q()),
                );
                let mut count = 0u64;
                while count < how_many {
                    let u = rng.random_range(0..nv) as u32;
                    let v = rng.random_range(0..nv) as u32;
                    if u == v {
                        continue;
                    }
                    if let Some(m) = check_pair(u, v)? {
                        mismatches.push(m);
                    }
                    count += 1;
                }
                pairs_checked = count;
            }
        }
        Ok(AdjacencyCheck {
            pairs_checked,
            full: sample.is_none(),
            mismatches,
        })
    }

    /// S^c(X) (or S(X) on the full graph): the vertices containing the
    /// (k-1)-subspace X, with maximality checked in this graph.
    pub fn star_clique(&self, x: &SubspaceBasis) -> Result<TaggedClique> {
        let k = self.ambient.k();
        if x.dim() != k - 1 {
            return Err(Error::InvalidInput(format!(
                "star requires a (k-1)-dimensional subspace; got dim {}",
                x.dim()
            )));
        }
        let field = self.ambient.field();
        let mut members = Vec::new();
        for s in x.superspaces(field, k)? {
            if let Some(v) = self.vertex_of(&s) {
                members.push(v);
            }
        }
        members.sort_unstable();
        let maximal = !members.is_empty() && self.graph.is_maximal_clique(&members);
        Ok(TaggedClique {
            kind: CliqueKind::Star,
            defining: x.clone(),
            restricted: self.kind == GraphKind::NonDegenerate,
            maximal,
            members,
        })
    }

    /// T^c(Y) (or T(Y) on the full graph): the vertices contained in the
    /// (k+1)-subspace Y.
    pub fn top_clique(&self, y: &SubspaceBasis) -> Result<TaggedClique> {
        let k = self.ambient.k();
        if y.dim() != k + 1 {
            return Err(Error::InvalidInput(format!(
                "top requires a (k+1)-dimensional subspace; got dim {}",
                y.dim()
            )));
        }
        let field = self.ambient.field();
        let mut members = Vec::new();
        for s in y.subspaces_of(field, k)? {
            if let Some(v) = self.vertex_of(&s) {
                members.push(v);
            }
        }
        members.sort_unstable();
        let maximal = !members.is_empty() && self.graph.is_maximal_clique(&members);
        Ok(TaggedClique {
            kind: CliqueKind::Top,
            defining: y.clone(),
            restricted: self.kind == GraphKind::NonDegenerate,
            maximal,
            members,
        })
    }
}

/// Outcome of the adjacency cross-check.
#[derive(Debug, Clone)]
pub struct AdjacencyCheck {
    pub pairs_checked: u64,
    pub full: bool,
    pub mismatches: Vec<String>,
}

impl AdjacencyCheck {
    pub fn ok(&self) -> bool {
        self.mismatches.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CliqueKind {
    Star,
    Top,
}

/// A star or top with its defining subspace and membership in a specific
/// Grassmann graph.
#[derive(Debug, Clone)]
pub struct TaggedClique {
    pub kind: CliqueKind,
    pub defining: SubspaceBasis,
    pub members: Vec<u32>,
    /// True when built over the non-degenerate graph (S^c/T^c rather than
    /// the full S/T).
    pub restricted: bool,
    /// Maximality in the graph the clique was built for.
    pub maximal: bool,
}

/// Classification of a maximal clique of the non-degenerate graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum CliqueClass {
    MaximalStar,
    NonMaximalStar,
    Top,
}

/// One classified maximal clique.
#[derive(Debug, Clone)]
pub struct CensusEntry {
    pub members: Vec<u32>,
    pub size: usize,
    /// Label derived from the defining subspace.
    pub geometric: CliqueClass,
    /// Label derived from cardinalities and intersections only.
    pub combinatorial: CliqueClass,
    pub defining: SubspaceBasis,
    /// For tops: l with |T^c(Y)| = [k+1]_q - l.
    pub top_deficiency: Option<usize>,
    /// For tops: the distinct sections Y n C_i removed from T(Y).
    pub removed_sections: Vec<SubspaceBasis>,
}

/// The full maximal-clique census of a non-degenerate graph. Construction
/// fails hard if the geometric and combinatorial labelings disagree
/// anywhere.
#[derive(Debug, Clone)]
pub struct CliqueCensus {
    pub entries: Vec<CensusEntry>,
    pub maximal_stars: usize,
    pub non_maximal_stars: usize,
    pub tops: usize,
}

impl CliqueCensus {
    pub fn total(&self) -> usize {
        self.entries.len()
    }

    /// Entries classified as stars (maximal or not), in census order.
    pub fn star_entries(&self) -> Vec<&CensusEntry> {
        self.entries
            .iter()
            .filter(|e| e.geometric != CliqueClass::Top)
            .collect()
    }

    pub fn top_entries(&self) -> Vec<&CensusEntry> {
        self.entries
            .iter()
            .filter(|e| e.geometric == CliqueClass::Top)
            .collect()
    }
}

/// Enumerates every maximal clique of the non-degenerate graph and labels
/// it twice: geometrically (from its defining subspace) and
/// combinatorially (size [n-k+1]_q for maximal stars; among the rest, a
/// top meets every maximal star in 0 or >= 2 vertices while a non-maximal
/// star meets some maximal star in exactly one vertex). Any disagreement
/// is a hard failure carrying a witness.
pub fn classify_maximal_cliques(delta: &GrassmannGraph, caps: &Caps) -> Result<CliqueCensus> {
    if delta.kind != GraphKind::NonDegenerate {
        return Err(Error::InvalidInput(
            "census is defined on the non-degenerate graph".into(),
        ));
    }
    let field = delta.ambient.field();
    let (n, k, q) = (delta.ambient.n(), delta.ambient.k(), delta.ambient.q());
    let cliques = delta.graph.maximal_cliques(caps.clique_limit)?;
    let nv = delta.graph.vertex_count();

    // Geometric labeling.
    let geo: Vec<(CliqueClass, SubspaceBasis)> = cliques
        .par_iter()
        .map(|c| geometric_label(delta, c))
        .collect::<Result<Vec<_>>>()?;

    // Combinatorial labeling: size rule first, then intersections with the
    // combinatorially identified maximal stars.
    let max_star_size = count_points((n - k + 1) as u32, u64::from(q)) as usize;
    let member_bits: Vec<Vec<u64>> = cliques
        .iter()
        .map(|c| bitset::from_indices(nv, c))
        .collect();
    let comb_max_star: Vec<bool> = cliques.iter().map(|c| c.len() == max_star_size).collect();
    let comb: Vec<CliqueClass> = (0..cliques.len())
        .into_par_iter()
        .map(|i| {
            if comb_max_star[i] {
                return CliqueClass::MaximalStar;
            }
            let meets_one = (0..cliques.len()).any(|j| {
                j != i
                    && comb_max_star[j]
                    && bitset::and_popcount(&member_bits[i], &member_bits[j]) == 1
            });
            if meets_one {
                CliqueClass::NonMaximalStar
            } else {
                CliqueClass::Top
            }
        })
        .collect();

    let mut entries = Vec::with_capacity(cliques.len());
    let mut counts = (0usize, 0usize, 0usize);
    for (i, members) in cliques.into_iter().enumerate() {
        let (geo_class, defining) = geo[i].clone();
        if geo_class != comb[i] {
            return Err(Error::Violation(format!(
                "clique census disagreement at {} (size {}): geometric {:?} vs combinatorial {:?}",
                defining.text(),
                members.len(),
                geo_class,
                comb[i]
            )));
        }
        let (top_deficiency, removed_sections) = if geo_class == CliqueClass::Top {
            let l = count_points((k + 1) as u32, u64::from(q)) as usize - members.len();
            let mut sections = Vec::new();
            for i in 1..=n {
                let ci = SubspaceBasis::coordinate_hyperplane(field, n, i)?;
                sections.push(SubspaceBasis::intersect(field, &defining, &ci)?);
            }
            sections.sort_unstable();
            sections.dedup();
            if sections.len() != l {
                return Err(Error::Violation(format!(
                    "top {} removes {} distinct sections but deficiency is {l}",
                    defining.text(),
                    sections.len()
                )));
            }
            (Some(l), sections)
        } else {
            (None, Vec::new())
        };
        match geo_class {
            CliqueClass::MaximalStar => counts.0 += 1,
            CliqueClass::NonMaximalStar => counts.1 += 1,
            CliqueClass::Top => counts.2 += 1,
        }
        entries.push(CensusEntry {
            size: members.len(),
            members,
            geometric: geo_class,
            combinatorial: comb[i],
            defining,
            top_deficiency,
            removed_sections,
        });
    }
    Ok(CliqueCensus {
        entries,
        maximal_stars: counts.0,
        non_maximal_stars: counts.1,
        tops: counts.2,
    })
}

/// Identifies a maximal clique from coordinates: the intersection of two
/// members is the candidate star center, their sum the candidate top
/// space; exactly one of the two reconstructions must reproduce the
/// clique.
fn geometric_label(
    delta: &GrassmannGraph,
    members: &[u32],
) -> Result<(CliqueClass, SubspaceBasis)> {
    let field = delta.ambient.field();
    if members.len() < 2 {
        return Err(Error::Violation(format!(
            "maximal clique of size {} cannot be classified geometrically",
            members.len()
        )));
    }
    let a = &delta.bases[members[0] as usize];
    let b = &delta.bases[members[1] as usize];
    let x_cand = SubspaceBasis::intersect(field, a, b)?;
    let y_cand = SubspaceBasis::sum(field, a, b)?;
    let star = delta.star_clique(&x_cand)?;
    let is_star = star.members == members;
    let top = delta.top_clique(&y_cand)?;
    let is_top = top.members == members;
    match (is_star, is_top) {
        (true, false) => {
            let class = if x_cand.is_degenerate() {
                CliqueClass::NonMaximalStar
            } else {
                CliqueClass::MaximalStar
            };
            Ok((class, x_cand))
        }
        (false, true) => Ok((CliqueClass::Top, y_cand)),
        (got_star, got_top) => Err(Error::Violation(format!(
            "maximal clique at {} classifies as star={got_star}, top={got_top}",
            a.text()
        ))),
    }
}

/// Report of the star proposition check: for q >= 3 every S^c(X) is a
/// maximal clique and never equals a T^c(Y); for q = 2 the criterion is
/// containment of X in at most n-k-1 coordinate hyperplanes.
#[derive(Debug, Clone)]
pub struct StarPropositionReport {
    pub stars_total: usize,
    pub maximal_count: usize,
    /// True when the q = 2 criterion was checked instead.
    pub remark_mode: bool,
    pub violations: Vec<String>,
}

impl StarPropositionReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn verify_star_proposition(
    delta: &GrassmannGraph,
    caps: &Caps,
) -> Result<StarPropositionReport> {
    let field = delta.ambient.field();
    let (n, k, q) = (delta.ambient.n(), delta.ambient.k(), delta.ambient.q());
    let xs = enumerate_subspaces(field, n, k - 1, caps.subspace_cap)?;
    let mut violations = Vec::new();
    let mut maximal_count = 0usize;
    let remark_mode = q == 2;
    for x in &xs {
        let star = delta.star_clique(x)?;
        if remark_mode {
            let criterion = x.degeneracy_witness().len() <= n - k - 1;
            if star.maximal {
                maximal_count += 1;
            }
            if star.maximal != criterion {
                violations.push(format!(
                    "q=2 remark fails at X={}: maximal={} but |I(X)|={}",
                    x.text(),
                    star.maximal,
                    x.degeneracy_witness().len()
                ));
            }
            continue;
        }
        if star.members.len() < 2 {
            violations.push(format!("S^c({}) has fewer than two vertices", x.text()));
            continue;
        }
        if !star.maximal {
            violations.push(format!("S^c({}) is not a maximal clique", x.text()));
            continue;
        }
        maximal_count += 1;
        // No top equals this star: with at least two members the only
        // candidate Y is the sum of the first two.
        let a = &delta.bases[star.members[0] as usize];
        let b = &delta.bases[star.members[1] as usize];
        let y_cand = SubspaceBasis::sum(field, a, b)?;
        if y_cand.dim() == k + 1 {
            let top = delta.top_clique(&y_cand)?;
            if top.members == star.members {
                violations.push(format!(
                    "S^c({}) equals T^c({})",
                    x.text(),
                    y_cand.text()
                ));
            }
        }
    }
    Ok(StarPropositionReport {
        stars_total: xs.len(),
        maximal_count,
        remark_mode,
        violations,
    })
}

/// Report of the top-size bounds and the top-maximality criterion.
#[derive(Debug, Clone)]
pub struct TopBoundsReport {
    pub nondegenerate_tops: usize,
    pub size_lo: usize,
    pub size_hi: usize,
    /// [k+1]_q - (q+1) > n.
    pub criterion_holds: bool,
    pub all_tops_maximal: bool,
    pub bounds_ok: bool,
    pub violations: Vec<String>,
}

pub fn verify_top_bounds(delta: &GrassmannGraph, caps: &Caps) -> Result<TopBoundsReport> {
    let field = delta.ambient.field();
    let (n, k, q) = (delta.ambient.n(), delta.ambient.k(), delta.ambient.q());
    let points = count_points((k + 1) as u32, u64::from(q)) as usize;
    let size_lo = points.saturating_sub(n);
    let size_hi = points - (k + 1);
    let criterion_holds = points > n + (q as usize + 1);
    let mut violations = Vec::new();
    let mut all_tops_maximal = true;
    let mut total = 0usize;
    for y in enumerate_subspaces(field, n, k + 1, caps.subspace_cap)? {
        let top = delta.top_clique(&y)?;
        if y.is_degenerate() {
            if !top.members.is_empty() {
                violations.push(format!("degenerate Y={} has non-empty T^c", y.text()));
            }
            continue;
        }
        total += 1;
        let size = top.members.len();
        if size < size_lo || size > size_hi {
            violations.push(format!(
                "|T^c({})| = {size} outside [{size_lo}, {size_hi}]",
                y.text()
            ));
        }
        if !top.maximal {
            all_tops_maximal = false;
        }
    }
    let bounds_ok = violations.is_empty();
    Ok(TopBoundsReport {
        nondegenerate_tops: total,
        size_lo,
        size_hi,
        criterion_holds,
        all_tops_maximal,
        bounds_ok,
        violations,
    })
}

/// A line of the Grassmann graph: the intersection of the star of X with
/// the top of Y for incident X ⊂ Y; it carries exactly q+1 vertices.
#[derive(Debug, Clone)]
pub struct GrassmannLine {
    pub star_subspace: SubspaceBasis,
    pub top_subspace: SubspaceBasis,
    pub members: Vec<u32>,
}

/// All lines of the full Grassmann graph.
pub fn lines_of_gamma(gamma: &GrassmannGraph, caps: &Caps) -> Result<Vec<GrassmannLine>> {
    if gamma.kind != GraphKind::Full {
        return Err(Error::InvalidInput(
            "lines are built on the full graph".into(),
        ));
    }
    let field = gamma.ambient.field();
    let (n, k, q) = (gamma.ambient.n(), gamma.ambient.k(), gamma.ambient.q());
    let mut lines = Vec::new();
    for y in enumerate_subspaces(field, n, k + 1, caps.subspace_cap)? {
        for x in y.subspaces_of(field, k - 1)? {
            let mut members: Vec<u32> = SubspaceBasis::between(field, &x, &y)?
                .iter()
                .map(|a| gamma.vertex_of(a).expect("line member is a vertex"))
                .collect();
            if members.len() != q as usize + 1 {
                return Err(Error::Violation(format!(
                    "line ({}, {}) has {} vertices, expected q+1 = {}",
                    x.text(),
                    y.text(),
                    members.len(),
                    q as usize + 1
                )));
            }
            members.sort_unstable();
            lines.push(GrassmannLine {
                star_subspace: x,
                top_subspace: y.clone(),
                members,
            });
        }
    }
    Ok(lines)
}

/// Index of the degenerate vertex set W: the largest number of W-vertices
/// on a line not contained in W, with an attaining witness line.
#[derive(Debug, Clone)]
pub struct IndexReport {
    pub lambda: usize,
    pub witness: Option<GrassmannLine>,
    pub lines_total: usize,
    pub lines_inside_w: usize,
}

pub fn degenerate_set_index(gamma: &GrassmannGraph, caps: &Caps) -> Result<IndexReport> {
    let in_w: Vec<bool> = gamma.bases.iter().map(SubspaceBasis::is_degenerate).collect();
    let lines = lines_of_gamma(gamma, caps)?;
    let mut lambda = 0usize;
    let mut witness = None;
    let mut inside = 0usize;
    for line in &lines {
        let count = line.members.iter().filter(|&&v| in_w[v as usize]).count();
        if count == line.members.len() {
            inside += 1;
            continue;
        }
        if count > lambda {
            lambda = count;
            witness = Some(line.clone());
        }
    }
    Ok(IndexReport {
        lambda,
        witness,
        lines_total: lines.len(),
        lines_inside_w: inside,
    })
}

/// Pairwise intersection discipline of the census cliques: two distinct
/// stars meet in at most one vertex, two distinct tops likewise.
pub fn verify_clique_intersections(
    delta: &GrassmannGraph,
    census: &CliqueCensus,
) -> Result<Vec<String>> {
    let nv = delta.graph.vertex_count();
    let bits: Vec<Vec<u64>> = census
        .entries
        .iter()
        .map(|e| bitset::from_indices(nv, &e.members))
        .collect();
    let violations: Vec<String> = (0..census.entries.len())
        .into_par_iter()
        .flat_map_iter(|i| {
            let mut local = Vec::new();
            for j in (i + 1)..census.entries.len() {
                let same_type = (census.entries[i].geometric == CliqueClass::Top)
                    == (census.entries[j].geometric == CliqueClass::Top);
                if !same_type {
                    continue;
                }
                let common = bitset::and_popcount(&bits[i], &bits[j]);
                if common > 1 {
                    local.push(format!(
                        "same-type cliques {} and {} share {} vertices",
                        census.entries[i].defining.text(),
                        census.entries[j].defining.text(),
                        common
                    ));
                }
            }
            local
        })
        .collect();
    Ok(violations)
}
