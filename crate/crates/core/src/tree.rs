//! Finite simplicial trees, subtree families, and lemma checkers.
//!
//! Trees are labeled graphs validated to be connected and acyclic. Subtrees
//! are vertex sets whose induced subgraph is connected, with the empty set
//! explicitly allowed so fixed-point sets can always be represented. Three
//! checkers derive verdicts from the data rather than trusting the theory:
//! [`check_helly`] looks for a vertex common to a pairwise-intersecting
//! family, [`check_subtree_cycle`] looks for a non-adjacent intersecting
//! pair in a cyclically-intersecting family, and [`check_diagonal`] looks at
//! the two diagonals of a two-by-two intersection pattern. Each has a
//! counterexample verdict that a correct instance can never produce, and
//! seeded fuzz campaigns hunt for such verdicts over planted random
//! families.

use crate::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::collections::VecDeque;
use std::fmt;
use std::sync::Arc;

/// Distance between residues `i` and `j` modulo `k`, on 1-based indices:
/// `min(|i-j|, k-|i-j|)`. Symmetric and at most `k/2`.
pub fn cyclic_distance(i: usize, j: usize, k: usize) -> Result<usize> {
    for idx in [i, j] {
        if idx == 0 || idx > k {
            return Err(Error::IndexOutOfRange { index: idx, m: k });
        }
    }
    let diff = i.abs_diff(j);
    Ok(diff.min(k - diff))
}

/// Same distance on 0-based family positions, bounds already known.
fn cyclic_distance_0(i: usize, j: usize, k: usize) -> usize {
    let diff = i.abs_diff(j);
    diff.min(k - diff)
}

/// A connected acyclic graph on vertices `0..vertex_count`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FiniteTree {
    vertex_count: usize,
    /// Normalized `u < v`, sorted.
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
}

impl FiniteTree {
    pub fn new(vertex_count: usize, edges: Vec<(usize, usize)>) -> Result<FiniteTree> {
        let bad = |msg: String| Error::InvalidTree(msg);
        if vertex_count == 0 {
            return Err(bad("a tree has at least one vertex".into()));
        }
        if edges.len() != vertex_count - 1 {
            return Err(bad(format!(
                "{} vertices need {} edges, got {}",
                vertex_count,
                vertex_count - 1,
                edges.len()
            )));
        }
        let mut normalized: Vec<(usize, usize)> = Vec::with_capacity(edges.len());
        for (u, v) in edges {
            if u == v {
                return Err(bad(format!("self loop at vertex {u}")));
            }
            if u >= vertex_count || v >= vertex_count {
                return Err(bad(format!(
                    "edge ({u},{v}) leaves the vertex range 0..{vertex_count}"
                )));
            }
            normalized.push((u.min(v), u.max(v)));
        }
        normalized.sort_unstable();
        if normalized.windows(2).any(|w| w[0] == w[1]) {
            return Err(bad("duplicate edge".into()));
        }
        let mut adj = vec![Vec::new(); vertex_count];
        for &(u, v) in &normalized {
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        let tree = FiniteTree {
            vertex_count,
            edges: normalized,
            adj,
        };
        // With exactly V-1 edges, connectivity is equivalent to acyclicity.
        let mut seen = vec![false; vertex_count];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        let mut reached = 1;
        while let Some(u) = queue.pop_front() {
            for &w in tree.neighbors(u) {
                if !seen[w] {
                    seen[w] = true;
                    reached += 1;
                    queue.push_back(w);
                }
            }
        }
        if reached != vertex_count {
            return Err(bad("not connected".into()));
        }
        Ok(tree)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn is_edge(&self, u: usize, v: usize) -> bool {
        let key = (u.min(v), u.max(v));
        self.edges.binary_search(&key).is_ok()
    }

    /// The unique path from `u` to `v`, inclusive.
    pub fn path_between(&self, u: usize, v: usize) -> Vec<usize> {
        assert!(u < self.vertex_count && v < self.vertex_count);
        let mut parent = vec![usize::MAX; self.vertex_count];
        parent[u] = u;
        let mut queue = VecDeque::from([u]);
        while let Some(w) = queue.pop_front() {
            if w == v {
                break;
            }
            for &next in self.neighbors(w) {
                if parent[next] == usize::MAX {
                    parent[next] = w;
                    queue.push_back(next);
                }
            }
        }
        let mut path = vec![v];
        let mut w = v;
        while w != u {
            w = parent[w];
            path.push(w);
        }
        path.reverse();
        path
    }

    /// Smallest connected vertex set containing all of `points`: the union
    /// of the paths from the first point to every other.
    pub fn convex_hull(&self, points: &[usize]) -> BTreeSet<usize> {
        let mut hull = BTreeSet::new();
        let Some(&base) = points.first() else {
            return hull;
        };
        hull.insert(base);
        for &p in &points[1..] {
            hull.extend(self.path_between(base, p));
        }
        hull
    }

    /// GraphViz rendering; every vertex is listed so isolated vertices of a
    /// one-vertex tree still appear.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph tree {\n");
        for v in 0..self.vertex_count {
            out.push_str(&format!("  {v};\n"));
        }
        for &(u, v) in &self.edges {
            out.push_str(&format!("  {u} -- {v};\n"));
        }
        out.push_str("}\n");
        out
    }
}

impl Serialize for FiniteTree {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut s = serializer.serialize_struct("FiniteTree", 2)?;
        s.serialize_field("vertices", &self.vertex_count)?;
        s.serialize_field("edges", &self.edges)?;
        s.end()
    }
}

impl<'de> Deserialize<'de> for FiniteTree {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            vertices: usize,
            edges: Vec<(usize, usize)>,
        }
        let raw = Raw::deserialize(deserializer)?;
        FiniteTree::new(raw.vertices, raw.edges).map_err(serde::de::Error::custom)
    }
}

/// A vertex set of a tree whose induced subgraph is connected, or the empty
/// set (standing for an empty fixed-point set).
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct Subtree {
    #[serde(skip)]
    tree: Arc<FiniteTree>,
    /// Sorted, deduplicated.
    vertices: Vec<usize>,
}

impl Subtree {
    pub fn new(
        tree: &Arc<FiniteTree>,
        vertices: impl IntoIterator<Item = usize>,
    ) -> Result<Subtree> {
        let set: BTreeSet<usize> = vertices.into_iter().collect();
        if let Some(&max) = set.iter().next_back() {
            if max >= tree.vertex_count() {
                return Err(Error::InvalidTree(format!(
                    "subtree vertex {max} leaves the vertex range 0..{}",
                    tree.vertex_count()
                )));
            }
        }
        let subtree = Subtree {
            tree: Arc::clone(tree),
            vertices: set.iter().copied().collect(),
        };
        if !subtree.is_empty() && !subtree.induced_connected(&set) {
            return Err(Error::InvalidTree(format!(
                "vertex set {:?} does not induce a connected subgraph",
                subtree.vertices
            )));
        }
        Ok(subtree)
    }

    pub fn empty(tree: &Arc<FiniteTree>) -> Subtree {
        Subtree {
            tree: Arc::clone(tree),
            vertices: Vec::new(),
        }
    }

    fn induced_connected(&self, set: &BTreeSet<usize>) -> bool {
        let start = self.vertices[0];
        let mut seen = BTreeSet::from([start]);
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            for &w in self.tree.neighbors(u) {
                if set.contains(&w) && seen.insert(w) {
                    queue.push_back(w);
                }
            }
        }
        seen.len() == set.len()
    }

    pub fn tree(&self) -> &Arc<FiniteTree> {
        &self.tree
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }

    /// Vertex-set intersection; always connected or empty because both
    /// inputs are.
    pub fn intersect(&self, other: &Subtree) -> Result<Subtree> {
        if self.tree != other.tree {
            return Err(Error::InvalidTree(
                "subtrees lie on different trees".into(),
            ));
        }
        let common: Vec<usize> = self
            .vertices
            .iter()
            .copied()
            .filter(|&v| other.contains(v))
            .collect();
        Ok(Subtree {
            tree: Arc::clone(&self.tree),
            vertices: common,
        })
    }

    fn intersects(&self, other: &Subtree) -> bool {
        let (small, large) = if self.vertices.len() <= other.vertices.len() {
            (self, other)
        } else {
            (other, self)
        };
        small.vertices.iter().any(|&v| large.contains(v))
    }
}

/// A vertex permutation of a tree that maps edges to edges.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TreeAutomorphism {
    tree: Arc<FiniteTree>,
    perm: Vec<usize>,
}

impl TreeAutomorphism {
    pub fn new(tree: &Arc<FiniteTree>, perm: Vec<usize>) -> Result<TreeAutomorphism> {
        let v = tree.vertex_count();
        let bad = |msg: String| Error::InvalidTree(msg);
        if perm.len() != v {
            return Err(bad(format!("permutation length {} on {v} vertices", perm.len())));
        }
        let mut seen = vec![false; v];
        for &img in &perm {
            if img >= v || seen[img] {
                return Err(bad("vertex map is not a permutation".into()));
            }
            seen[img] = true;
        }
        for &(a, b) in tree.edges() {
            if !tree.is_edge(perm[a], perm[b]) {
                return Err(bad(format!(
                    "edge ({a},{b}) maps to non-edge ({},{})",
                    perm[a], perm[b]
                )));
            }
        }
        Ok(TreeAutomorphism {
            tree: Arc::clone(tree),
            perm,
        })
    }

    pub fn identity(tree: &Arc<FiniteTree>) -> TreeAutomorphism {
        TreeAutomorphism {
            tree: Arc::clone(tree),
            perm: (0..tree.vertex_count()).collect(),
        }
    }

    pub fn tree(&self) -> &Arc<FiniteTree> {
        &self.tree
    }

    pub fn apply(&self, v: usize) -> usize {
        self.perm[v]
    }

    /// `(f.compose(g))(v) = f(g(v))`.
    pub fn compose(&self, other: &TreeAutomorphism) -> Result<TreeAutomorphism> {
        if self.tree != other.tree {
            return Err(Error::InvalidTree(
                "automorphisms act on different trees".into(),
            ));
        }
        let perm = other.perm.iter().map(|&v| self.perm[v]).collect();
        TreeAutomorphism::new(&self.tree, perm)
    }

    /// The fixed vertices, always connected or empty because the path
    /// between two fixed vertices is unique and hence fixed pointwise, plus
    /// the list of inverted edges (flipped endpoint pairs). A caller that
    /// needs an inversion-free action subdivides those edges first.
    pub fn fixed_subtree(&self) -> (Subtree, Vec<(usize, usize)>) {
        let fixed = (0..self.tree.vertex_count()).filter(|&v| self.perm[v] == v);
        let subtree =
            Subtree::new(&self.tree, fixed).expect("fixed vertex sets induce connected subgraphs");
        let inverted = self
            .tree
            .edges()
            .iter()
            .copied()
            .filter(|&(u, v)| self.perm[u] == v && self.perm[v] == u)
            .collect();
        (subtree, inverted)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum HellyVerdict {
    /// Every pair intersects and this vertex lies in every member.
    CommonVertex(usize),
    /// These two members (0-based) are disjoint.
    HypothesisNotMet { disjoint: (usize, usize) },
    /// Every pair intersects yet no common vertex exists. Impossible for
    /// genuine subtrees of a tree; reported rather than asserted so fuzz
    /// campaigns can count it.
    Counterexample,
}

impl fmt::Display for HellyVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HellyVerdict::CommonVertex(v) => write!(f, "common-vertex {v}"),
            HellyVerdict::HypothesisNotMet { disjoint: (i, j) } => {
                write!(f, "hypothesis-not-met disjoint=({},{})", i + 1, j + 1)
            }
            HellyVerdict::Counterexample => write!(f, "counterexample"),
        }
    }
}

/// Intersects every pair of the family; on success returns the smallest
/// vertex common to all members.
pub fn check_helly(tree: &FiniteTree, family: &[Subtree]) -> Result<HellyVerdict> {
    if family.is_empty() {
        return Err(Error::Hypothesis("empty subtree family".into()));
    }
    for (i, a) in family.iter().enumerate() {
        if a.tree().as_ref() != tree {
            return Err(Error::InvalidTree(format!(
                "family member {} lies on a different tree",
                i + 1
            )));
        }
        if a.is_empty() {
            return Err(Error::Hypothesis(format!(
                "family member {} is empty",
                i + 1
            )));
        }
    }
    for i in 0..family.len() {
        for j in i + 1..family.len() {
            if !family[i].intersects(&family[j]) {
                return Ok(HellyVerdict::HypothesisNotMet { disjoint: (i, j) });
            }
        }
    }
    let common = family[0]
        .vertices()
        .iter()
        .copied()
        .find(|&v| family[1..].iter().all(|a| a.contains(v)));
    Ok(match common {
        Some(v) => HellyVerdict::CommonVertex(v),
        None => HellyVerdict::Counterexample,
    })
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum CycleVerdict {
    /// Members `i` and `j` (0-based) are at cyclic distance two or more and
    /// share `vertex`.
    Witness { i: usize, j: usize, vertex: usize },
    /// These cyclically adjacent members (0-based) do not intersect.
    HypothesisNotMet { adjacent: (usize, usize) },
    /// All cyclically adjacent pairs intersect yet no distant pair does.
    /// Impossible for genuine subtrees; reported for fuzz counting.
    Counterexample,
}

impl fmt::Display for CycleVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CycleVerdict::Witness { i, j, vertex } => {
                write!(f, "witness pair=({},{}) vertex={vertex}", i + 1, j + 1)
            }
            CycleVerdict::HypothesisNotMet { adjacent: (i, j) } => {
                write!(f, "hypothesis-not-met adjacent=({},{})", i + 1, j + 1)
            }
            CycleVerdict::Counterexample => write!(f, "counterexample"),
        }
    }
}

/// For a family whose cyclically adjacent members all intersect, finds the
/// lexicographically first pair at cyclic distance at least two that also
/// intersects.
pub fn check_subtree_cycle(tree: &FiniteTree, family: &[Subtree]) -> Result<CycleVerdict> {
    let k = family.len();
    if k < 4 {
        return Err(Error::Hypothesis(format!(
            "cyclic families need at least 4 members, got {k}"
        )));
    }
    for (i, a) in family.iter().enumerate() {
        if a.tree().as_ref() != tree {
            return Err(Error::InvalidTree(format!(
                "family member {} lies on a different tree",
                i + 1
            )));
        }
    }
    for i in 0..k {
        let j = (i + 1) % k;
        if !family[i].intersects(&family[j]) {
            return Ok(CycleVerdict::HypothesisNotMet { adjacent: (i, j) });
        }
    }
    for i in 0..k {
        for j in i + 1..k {
            if cyclic_distance_0(i, j, k) < 2 {
                continue;
            }
            if let Some(&vertex) = family[i]
                .vertices()
                .iter()
                .find(|&&v| family[j].contains(v))
            {
                return Ok(CycleVerdict::Witness { i, j, vertex });
            }
        }
    }
    Ok(CycleVerdict::Counterexample)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum DiagonalVerdict {
    Both { a_witness: usize, b_witness: usize },
    ADiagonal { witness: usize },
    BDiagonal { witness: usize },
    /// Impossible for genuine subtrees; reported for fuzz counting.
    Neither,
}

impl fmt::Display for DiagonalVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DiagonalVerdict::Both {
                a_witness,
                b_witness,
            } => write!(f, "both a-witness={a_witness} b-witness={b_witness}"),
            DiagonalVerdict::ADiagonal { witness } => write!(f, "a-diagonal witness={witness}"),
            DiagonalVerdict::BDiagonal { witness } => write!(f, "b-diagonal witness={witness}"),
            DiagonalVerdict::Neither => write!(f, "neither"),
        }
    }
}

/// Given four subtrees with every `a_i` meeting every `b_j`, reports which
/// of the diagonals `a1 and a2`, `b1 and b2` intersect (at least one always
/// does for genuine subtrees; both are reported when both do).
pub fn check_diagonal(
    tree: &FiniteTree,
    a1: &Subtree,
    a2: &Subtree,
    b1: &Subtree,
    b2: &Subtree,
) -> Result<DiagonalVerdict> {
    for (name, s) in [("a1", a1), ("a2", a2), ("b1", b1), ("b2", b2)] {
        if s.tree().as_ref() != tree {
            return Err(Error::InvalidTree(format!(
                "{name} lies on a different tree"
            )));
        }
    }
    for (an, a) in [("a1", a1), ("a2", a2)] {
        for (bn, b) in [("b1", b1), ("b2", b2)] {
            if !a.intersects(b) {
                return Err(Error::Hypothesis(format!("{an} and {bn} do not intersect")));
            }
        }
    }
    let a_witness = a1.vertices().iter().copied().find(|&v| a2.contains(v));
    let b_witness = b1.vertices().iter().copied().find(|&v| b2.contains(v));
    Ok(match (a_witness, b_witness) {
        (Some(a), Some(b)) => DiagonalVerdict::Both {
            a_witness: a,
            b_witness: b,
        },
        (Some(a), None) => DiagonalVerdict::ADiagonal { witness: a },
        (None, Some(b)) => DiagonalVerdict::BDiagonal { witness: b },
        (None, None) => DiagonalVerdict::Neither,
    })
}

/// Uniform random labeled tree on `vertex_count` vertices, decoded from a
/// random Pruefer sequence. Deterministic for a fixed seed.
pub fn random_tree(seed: u64, vertex_count: usize) -> Result<FiniteTree> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(random_tree_with(&mut rng, vertex_count))
}

fn random_tree_with(rng: &mut ChaCha8Rng, vertex_count: usize) -> FiniteTree {
    assert!(vertex_count >= 1);
    if vertex_count == 1 {
        return FiniteTree::new(1, Vec::new()).expect("single vertex is a tree");
    }
    let prufer: Vec<usize> = (0..vertex_count - 2)
        .map(|_| rng.gen_range(0..vertex_count))
        .collect();
    let mut degree = vec![1usize; vertex_count];
    for &p in &prufer {
        degree[p] += 1;
    }
    let mut leaves: BTreeSet<usize> = (0..vertex_count).filter(|&v| degree[v] == 1).collect();
    let mut edges = Vec::with_capacity(vertex_count - 1);
    for &p in &prufer {
        let leaf = *leaves.iter().next().expect("a tree always has a leaf");
        leaves.remove(&leaf);
        edges.push((leaf, p));
        degree[leaf] -= 1;
        degree[p] -= 1;
        if degree[p] == 1 {
            leaves.insert(p);
        }
    }
    let mut rest = leaves.into_iter();
    let (u, v) = (rest.next().unwrap(), rest.next().unwrap());
    edges.push((u, v));
    FiniteTree::new(vertex_count, edges).expect("Pruefer decoding yields a tree")
}

/// Which lemma hypothesis a generated family is planted to satisfy.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum HypothesisMode {
    /// Every two members share a planted vertex.
    Pairwise,
    /// Every two cyclically adjacent members share a planted vertex.
    Cyclic,
}

/// Random subtree family satisfying the requested hypothesis by
/// construction: witness vertices are planted, each member is the convex
/// hull of its witnesses, and a few random growth rounds extend it. The
/// hypothesis is re-checked before returning.
pub fn random_subtree_family(
    seed: u64,
    tree: &Arc<FiniteTree>,
    k: usize,
    mode: HypothesisMode,
) -> Result<Vec<Subtree>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_subtree_family_with(&mut rng, tree, k, mode)
}

fn random_subtree_family_with(
    rng: &mut ChaCha8Rng,
    tree: &Arc<FiniteTree>,
    k: usize,
    mode: HypothesisMode,
) -> Result<Vec<Subtree>> {
    if k == 0 {
        return Err(Error::Hypothesis("family size must be at least 1".into()));
    }
    let v = tree.vertex_count();
    let mut witnesses: Vec<Vec<usize>> = vec![Vec::new(); k];
    // One personal vertex each keeps every member non-empty regardless of k.
    for points in &mut witnesses {
        points.push(rng.gen_range(0..v));
    }
    match mode {
        HypothesisMode::Pairwise => {
            for i in 0..k {
                for j in i + 1..k {
                    let w = rng.gen_range(0..v);
                    witnesses[i].push(w);
                    witnesses[j].push(w);
                }
            }
        }
        HypothesisMode::Cyclic => {
            for i in 0..k {
                let w = rng.gen_range(0..v);
                witnesses[i].push(w);
                witnesses[(i + 1) % k].push(w);
            }
        }
    }
    let mut family = Vec::with_capacity(k);
    for points in &witnesses {
        let mut set = tree.convex_hull(points);
        for _ in 0..rng.gen_range(0..=2u32) {
            let frontier: Vec<usize> = set
                .iter()
                .flat_map(|&u| tree.neighbors(u).iter().copied())
                .filter(|w| !set.contains(w))
                .collect();
            for w in frontier {
                if rng.gen_bool(0.4) {
                    set.insert(w);
                }
            }
        }
        family.push(Subtree::new(tree, set)?);
    }
    // Generator postcondition: the planted hypothesis actually holds.
    match mode {
        HypothesisMode::Pairwise => {
            for i in 0..k {
                for j in i + 1..k {
                    debug_assert!(family[i].intersects(&family[j]));
                }
            }
        }
        HypothesisMode::Cyclic => {
            for i in 0..k {
                debug_assert!(family[i].intersects(&family[(i + 1) % k]));
            }
        }
    }
    Ok(family)
}

/// One failed fuzz trial, serialized with enough data to replay it.
#[derive(Clone, Debug, Serialize)]
pub struct FuzzCounterexample {
    pub trial: u64,
    pub tree: FiniteTree,
    pub family: Vec<Vec<usize>>,
    pub verdict: String,
}

/// Outcome of a fuzz campaign: `failures` counts trials whose verdict was a
/// counterexample (or whose planted hypothesis failed, indicating a broken
/// generator).
#[derive(Clone, Debug, Serialize)]
pub struct FuzzReport {
    pub lemma: String,
    pub seed: u64,
    pub trials: u64,
    pub failures: u64,
    pub counterexamples: Vec<FuzzCounterexample>,
}

impl FuzzReport {
    pub fn summary_line(&self) -> String {
        format!("TRIALS {} FAILURES {}", self.trials, self.failures)
    }
}

const MAX_FUZZ_VERTICES: usize = 50;

/// Per-trial generator state: one independent, deterministic stream per
/// trial index, so trials can be split across workers without changing the
/// outcome.
fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

fn record_failure(
    report: &mut FuzzReport,
    trial: u64,
    tree: &Arc<FiniteTree>,
    family: &[Subtree],
    verdict: String,
) {
    report.failures += 1;
    report.counterexamples.push(FuzzCounterexample {
        trial,
        tree: tree.as_ref().clone(),
        family: family.iter().map(|s| s.vertices().to_vec()).collect(),
        verdict,
    });
}

/// Random pairwise-intersecting families with 2 to 8 members; fails a
/// trial unless a common vertex is found.
pub fn fuzz_helly(seed: u64, trials: u64) -> FuzzReport {
    let mut report = FuzzReport {
        lemma: "helly".into(),
        seed,
        trials,
        failures: 0,
        counterexamples: Vec::new(),
    };
    for trial in 0..trials {
        let mut rng = trial_rng(seed, trial);
        let v = rng.gen_range(1..=MAX_FUZZ_VERTICES);
        let k = rng.gen_range(2..=8);
        let tree = Arc::new(random_tree_with(&mut rng, v));
        let family =
            random_subtree_family_with(&mut rng, &tree, k, HypothesisMode::Pairwise)
                .expect("generator arguments are valid");
        let verdict = check_helly(&tree, &family).expect("planted families are valid input");
        if !matches!(verdict, HellyVerdict::CommonVertex(_)) {
            record_failure(&mut report, trial, &tree, &family, verdict.to_string());
        }
    }
    report
}

/// Random cyclically-intersecting families with 4 to 8 members; fails a
/// trial unless a distant intersecting pair is found.
pub fn fuzz_subtree_cycle(seed: u64, trials: u64) -> FuzzReport {
    fuzz_subtree_cycle_range(seed, trials, 4, 8).expect("default family size range is valid")
}

/// [`fuzz_subtree_cycle`] with an explicit family size range. The cycle
/// statement needs at least four members; sizes beyond 16 only slow the
/// campaign down.
pub fn fuzz_subtree_cycle_range(
    seed: u64,
    trials: u64,
    k_lo: usize,
    k_hi: usize,
) -> Result<FuzzReport> {
    if k_lo < 4 || k_hi < k_lo || k_hi > 16 {
        return Err(Error::Hypothesis(format!(
            "family size range {k_lo}..{k_hi} must satisfy 4 <= lo <= hi <= 16"
        )));
    }
    let mut report = FuzzReport {
        lemma: "subtree-cycle".into(),
        seed,
        trials,
        failures: 0,
        counterexamples: Vec::new(),
    };
    for trial in 0..trials {
        let mut rng = trial_rng(seed, trial);
        let v = rng.gen_range(1..=MAX_FUZZ_VERTICES);
        let k = rng.gen_range(k_lo..=k_hi);
        let tree = Arc::new(random_tree_with(&mut rng, v));
        let family = random_subtree_family_with(&mut rng, &tree, k, HypothesisMode::Cyclic)
            .expect("generator arguments are valid");
        let verdict =
            check_subtree_cycle(&tree, &family).expect("planted families are valid input");
        if !matches!(verdict, CycleVerdict::Witness { .. }) {
            record_failure(&mut report, trial, &tree, &family, verdict.to_string());
        }
    }
    Ok(report)
}

/// Random two-by-two intersection patterns; fails a trial if neither
/// diagonal intersects.
pub fn fuzz_diagonal(seed: u64, trials: u64) -> FuzzReport {
    let mut report = FuzzReport {
        lemma: "diagonal".into(),
        seed,
        trials,
        failures: 0,
        counterexamples: Vec::new(),
    };
    for trial in 0..trials {
        let mut rng = trial_rng(seed, trial);
        let v = rng.gen_range(1..=MAX_FUZZ_VERTICES);
        let tree = Arc::new(random_tree_with(&mut rng, v));
        // A cyclic family (a1, b1, a2, b2) makes the adjacent pairs exactly
        // the four (a_i, b_j) hypothesis pairs.
        let family = random_subtree_family_with(&mut rng, &tree, 4, HypothesisMode::Cyclic)
            .expect("generator arguments are valid");
        let verdict = match check_diagonal(&tree, &family[0], &family[2], &family[1], &family[3]) {
            Ok(v) => v,
            Err(e) => {
                record_failure(&mut report, trial, &tree, &family, e.to_string());
                continue;
            }
        };
        if matches!(verdict, DiagonalVerdict::Neither) {
            record_failure(&mut report, trial, &tree, &family, verdict.to_string());
        }
    }
    report
}
