//! Finite balls of two coset trees and the automorphism actions on them.
//!
//! For two factors the vertices are the cosets of the two letter subgroups
//! and two cosets are joined when they intersect, so the edges are in
//! bijection with the group. For three factors of equal order the group is
//! identified with the free product generated by the outer classes of the
//! partial conjugations; the vertices are the group elements together with
//! the cosets of the three letter subgroups, an element joined to every
//! coset containing it. Balls are grown breadth-first on canonical coset
//! representatives, making vertex identity a syntactic check. Left
//! multiplication extends to factor and permutation twists via
//! `h(gU) = h(g)h(U)`; at the ball boundary the extension is partial, and
//! wherever it is defined it is checked to map edges to edges. Stabilizer
//! enumerations back the two amalgam decompositions.

use crate::aut::outer::{outer_class_of_pc, outer_conjugation_action, OUTER_PC};
use crate::aut::{all_factor_autos, Automorphism, Tag};
use crate::report::Report;
use crate::tree::FiniteTree;
use crate::word::enumerate_reduced as reduced_words_up_to;
use crate::{arith, Error, Result, Signature, Word};
use serde::ser::SerializeStruct;
use serde::Serialize;
use std::collections::{BTreeSet, HashMap, HashSet};

/// Which subgroup a coset vertex is over.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum SubgroupId {
    /// The trivial subgroup; the coset is the element itself.
    Trivial,
    /// The cyclic subgroup generated by the letter of this factor.
    Factor(usize),
}

/// A coset `rep·U`, stored by the unique shortest element of the coset:
/// for a letter subgroup the normal form not ending in that letter, for the
/// trivial subgroup the element itself. The shortest element is unique, so
/// no lexicographic tie-break is ever needed.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct CosetVertex {
    rep: Word,
    subgroup: SubgroupId,
}

impl CosetVertex {
    pub fn new(element: Word, subgroup: SubgroupId) -> Result<CosetVertex> {
        if let SubgroupId::Factor(i) = subgroup {
            element.signature().check_index(i)?;
            if element.syllables().last().is_some_and(|s| s.factor == i) {
                let sig = element.signature().clone();
                let mut syllables = element.syllables().to_vec();
                syllables.pop();
                return Ok(CosetVertex {
                    rep: Word::from_normal_parts(sig, syllables),
                    subgroup,
                });
            }
        }
        Ok(CosetVertex {
            rep: element,
            subgroup,
        })
    }

    pub fn rep(&self) -> &Word {
        &self.rep
    }

    pub fn subgroup(&self) -> SubgroupId {
        self.subgroup
    }
}

/// Which coset tree a ball lives in.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum BallMode {
    /// Two factors; cosets of the two letter subgroups `A` and `B`.
    M2,
    /// Three equal factors; elements plus cosets of `A1`, `A2`, `A3`.
    M3Outer,
}

fn letter_name(mode: BallMode, factor: usize) -> String {
    match mode {
        BallMode::M2 => ["a", "b"][factor].to_string(),
        BallMode::M3Outer => format!("g{}", factor + 1),
    }
}

fn word_label(mode: BallMode, w: &Word) -> String {
    let mut out = String::new();
    for s in w.syllables() {
        out.push_str(&letter_name(mode, s.factor));
        if s.exp > 1 {
            out.push_str(&format!("^{}", s.exp));
        }
    }
    out
}

/// Figure-style vertex label: `A`, `aB`, `a^2bA` for two factors; `1`,
/// `g1`, `g2^2A3` for three.
pub fn vertex_label(mode: BallMode, v: &CosetVertex) -> String {
    let word = word_label(mode, &v.rep);
    match v.subgroup {
        SubgroupId::Trivial => {
            if word.is_empty() {
                "1".to_string()
            } else {
                word
            }
        }
        SubgroupId::Factor(i) => {
            let sub = match mode {
                BallMode::M2 => ["A", "B"][i].to_string(),
                BallMode::M3Outer => format!("A{}", i + 1),
            };
            format!("{word}{sub}")
        }
    }
}

/// A ball vertex: a coset, or after subdivision the midpoint of an edge
/// between two cosets. Midpoints store their endpoints in a fixed order so
/// the unordered pair has one representation.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum BallVertex {
    Coset(CosetVertex),
    Midpoint(CosetVertex, CosetVertex),
}

fn vertex_sort_key(v: &CosetVertex) -> (u8, usize, Vec<(usize, u32)>) {
    let (rank, idx) = match v.subgroup {
        SubgroupId::Trivial => (0u8, 0),
        SubgroupId::Factor(i) => (1u8, i),
    };
    let syllables = v.rep.syllables().iter().map(|s| (s.factor, s.exp)).collect();
    (rank, idx, syllables)
}

fn midpoint(a: CosetVertex, b: CosetVertex) -> BallVertex {
    if vertex_sort_key(&a) <= vertex_sort_key(&b) {
        BallVertex::Midpoint(a, b)
    } else {
        BallVertex::Midpoint(b, a)
    }
}

/// The radius-`R` ball around a base vertex of a coset tree. `depth` is the
/// edge distance from the base, in current edge units: subdividing doubles
/// all stored depths. Vertices at the construction boundary may be missing
/// neighbors that exist in the full tree.
#[derive(Clone, Debug)]
pub struct TreeBall {
    sig: Signature,
    mode: BallMode,
    radius: usize,
    subdivided: bool,
    vertices: Vec<BallVertex>,
    index: HashMap<BallVertex, usize>,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
    depth: Vec<usize>,
}

/// Ball of the coset tree over two factors of order `n`, grown from the
/// base coset `A`.
pub fn build_ball_m2(n: u32, radius: usize) -> Result<TreeBall> {
    let sig = Signature::new(vec![n, n])?;
    let base = CosetVertex::new(Word::identity(&sig), SubgroupId::Factor(0))?;
    TreeBall::build(sig, BallMode::M2, radius, base)
}

/// Ball of the element-and-coset tree over three factors of order `n`,
/// grown from the identity element vertex.
pub fn build_ball_m3_outer(n: u32, radius: usize) -> Result<TreeBall> {
    let sig = Signature::new(vec![n, n, n])?;
    let base = CosetVertex::new(Word::identity(&sig), SubgroupId::Trivial)?;
    TreeBall::build(sig, BallMode::M3Outer, radius, base)
}

impl TreeBall {
    fn build(sig: Signature, mode: BallMode, radius: usize, base: CosetVertex) -> Result<TreeBall> {
        let mut ball = TreeBall {
            sig,
            mode,
            radius,
            subdivided: false,
            vertices: Vec::new(),
            index: HashMap::new(),
            edges: Vec::new(),
            adj: Vec::new(),
            depth: Vec::new(),
        };
        let mut edge_set: BTreeSet<(usize, usize)> = BTreeSet::new();
        ball.insert(BallVertex::Coset(base), 0);
        let mut head = 0;
        while head < ball.vertices.len() {
            let d = ball.depth[head];
            if d == radius {
                head += 1;
                continue;
            }
            let BallVertex::Coset(v) = ball.vertices[head].clone() else {
                unreachable!("construction only creates coset vertices");
            };
            for n in ball.coset_neighbors(&v)? {
                let nv = BallVertex::Coset(n);
                let id = match ball.index.get(&nv) {
                    Some(&id) => id,
                    None => ball.insert(nv, d + 1),
                };
                edge_set.insert((head.min(id), head.max(id)));
            }
            head += 1;
        }
        ball.edges = edge_set.into_iter().collect();
        ball.rebuild_adjacency();
        Ok(ball)
    }

    fn insert(&mut self, v: BallVertex, depth: usize) -> usize {
        let id = self.vertices.len();
        self.index.insert(v.clone(), id);
        self.vertices.push(v);
        self.depth.push(depth);
        id
    }

    fn rebuild_adjacency(&mut self) {
        self.adj = vec![Vec::new(); self.vertices.len()];
        for &(u, v) in &self.edges {
            self.adj[u].push(v);
            self.adj[v].push(u);
        }
        for list in &mut self.adj {
            list.sort_unstable();
        }
    }

    /// All tree neighbors of a coset vertex: every element of a coset gives
    /// one edge to a coset of each other kind.
    fn coset_neighbors(&self, v: &CosetVertex) -> Result<Vec<CosetVertex>> {
        let mut out = Vec::new();
        match (self.mode, v.subgroup) {
            (BallMode::M2, SubgroupId::Factor(i)) => {
                let other = 1 - i;
                for t in 0..self.sig.order(i) {
                    let element = self.coset_element(&v.rep, i, t)?;
                    out.push(CosetVertex::new(element, SubgroupId::Factor(other))?);
                }
            }
            (BallMode::M3Outer, SubgroupId::Trivial) => {
                for i in 0..3 {
                    out.push(CosetVertex::new(v.rep.clone(), SubgroupId::Factor(i))?);
                }
            }
            (BallMode::M3Outer, SubgroupId::Factor(i)) => {
                for t in 0..self.sig.order(i) {
                    let element = self.coset_element(&v.rep, i, t)?;
                    out.push(CosetVertex::new(element, SubgroupId::Trivial)?);
                }
            }
            (BallMode::M2, SubgroupId::Trivial) => {
                return Err(Error::Unsupported(
                    "element vertices do not occur in the two-factor tree".into(),
                ))
            }
        }
        Ok(out)
    }

    fn coset_element(&self, rep: &Word, factor: usize, power: u32) -> Result<Word> {
        if power == 0 {
            Ok(rep.clone())
        } else {
            rep.multiply(&Word::generator(&self.sig, factor, power as i64)?)
        }
    }

    pub fn mode(&self) -> BallMode {
        self.mode
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    /// The construction radius, in edges of the unsubdivided tree.
    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn is_subdivided(&self) -> bool {
        self.subdivided
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn vertex(&self, id: usize) -> &BallVertex {
        &self.vertices[id]
    }

    pub fn depth(&self, id: usize) -> usize {
        self.depth[id]
    }

    /// The base vertex the ball was grown from.
    pub fn base(&self) -> usize {
        0
    }

    /// Whether the ball may be missing neighbors of this vertex. Midpoints
    /// are never boundary vertices: both endpoints of their edge are in the
    /// ball by construction.
    pub fn is_boundary(&self, id: usize) -> bool {
        if self.subdivided {
            matches!(self.vertices[id], BallVertex::Coset(_)) && self.depth[id] == 2 * self.radius
        } else {
            self.depth[id] == self.radius
        }
    }

    pub fn find(&self, v: &BallVertex) -> Option<usize> {
        self.index.get(v).copied()
    }

    pub fn find_coset(&self, v: &CosetVertex) -> Option<usize> {
        self.find(&BallVertex::Coset(v.clone()))
    }

    pub fn is_edge(&self, u: usize, v: usize) -> bool {
        self.edges.binary_search(&(u.min(v), u.max(v))).is_ok()
    }

    pub fn label(&self, id: usize) -> String {
        match &self.vertices[id] {
            BallVertex::Coset(v) => vertex_label(self.mode, v),
            BallVertex::Midpoint(u, v) => format!(
                "{{{},{}}}",
                vertex_label(self.mode, u),
                vertex_label(self.mode, v)
            ),
        }
    }

    pub fn labels(&self) -> Vec<String> {
        (0..self.vertices.len()).map(|id| self.label(id)).collect()
    }

    /// The ball as a plain tree on the vertex ids; fails only if the ball
    /// construction broke the tree property, which would falsify the edge
    /// rules.
    pub fn to_finite_tree(&self) -> Result<FiniteTree> {
        FiniteTree::new(self.vertices.len(), self.edges.clone())
    }

    /// Full-tree degree constraints on every non-boundary vertex.
    pub fn check_interior_degrees(&self) -> Result<()> {
        for id in 0..self.vertices.len() {
            if self.is_boundary(id) {
                continue;
            }
            let want = match (&self.vertices[id], self.mode) {
                (BallVertex::Midpoint(..), _) => 2,
                (BallVertex::Coset(v), BallMode::M2) => match v.subgroup {
                    SubgroupId::Factor(i) => self.sig.order(i) as usize,
                    SubgroupId::Trivial => unreachable!(),
                },
                (BallVertex::Coset(v), BallMode::M3Outer) => match v.subgroup {
                    SubgroupId::Trivial => 3,
                    SubgroupId::Factor(i) => self.sig.order(i) as usize,
                },
            };
            if self.adj[id].len() != want {
                return Err(Error::InvalidTree(format!(
                    "vertex {} has degree {}, expected {}",
                    self.label(id),
                    self.adj[id].len(),
                    want
                )));
            }
        }
        Ok(())
    }

    /// Replaces every edge by two edges through a new midpoint vertex.
    /// Original vertex ids are preserved; depths double.
    pub fn barycentric_subdivide(&self) -> Result<TreeBall> {
        if self.subdivided {
            return Err(Error::Unsupported(
                "the ball is already subdivided".into(),
            ));
        }
        let mut out = TreeBall {
            sig: self.sig.clone(),
            mode: self.mode,
            radius: self.radius,
            subdivided: true,
            vertices: self.vertices.clone(),
            index: self.index.clone(),
            edges: Vec::new(),
            adj: Vec::new(),
            depth: self.depth.iter().map(|&d| 2 * d).collect(),
        };
        let mut edge_set: BTreeSet<(usize, usize)> = BTreeSet::new();
        for &(u, v) in &self.edges {
            let (BallVertex::Coset(cu), BallVertex::Coset(cv)) =
                (&self.vertices[u], &self.vertices[v])
            else {
                unreachable!("unsubdivided balls have only coset vertices");
            };
            let mid = out.insert(
                midpoint(cu.clone(), cv.clone()),
                self.depth[u].min(self.depth[v]) * 2 + 1,
            );
            edge_set.insert((u.min(mid), u.max(mid)));
            edge_set.insert((v.min(mid), v.max(mid)));
        }
        out.edges = edge_set.into_iter().collect();
        out.rebuild_adjacency();
        Ok(out)
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph ball {\n");
        for id in 0..self.vertices.len() {
            out.push_str(&format!("  {id} [label=\"{}\"];\n", self.label(id)));
        }
        for &(u, v) in &self.edges {
            out.push_str(&format!("  {u} -- {v};\n"));
        }
        out.push_str("}\n");
        out
    }
}

impl Serialize for TreeBall {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mode = match self.mode {
            BallMode::M2 => "m2",
            BallMode::M3Outer => "m3-outer",
        };
        let mut s = serializer.serialize_struct("TreeBall", 5)?;
        s.serialize_field("mode", mode)?;
        s.serialize_field("radius", &self.radius)?;
        s.serialize_field("subdivided", &self.subdivided)?;
        s.serialize_field("vertices", &self.labels())?;
        s.serialize_field("edges", &self.edges)?;
        s.end()
    }
}

/// A generator of the extended action: left multiplication by a group
/// element, or conjugation by a factor-times-permutation automorphism.
#[derive(Clone, Debug)]
pub enum BallGenerator {
    LeftMult(Word),
    Twist(Automorphism),
}

fn twist_name(a: &Automorphism) -> String {
    match a.tag() {
        Tag::FactorAuto(exps) => {
            let parts: Vec<String> = exps.iter().map(|e| e.to_string()).collect();
            format!("factor[{}]", parts.join(","))
        }
        Tag::Permutation(sigma) => {
            let parts: Vec<String> = sigma.iter().map(|s| (s + 1).to_string()).collect();
            format!("perm[{}]", parts.join(","))
        }
        _ => match a.is_factor_times_sym() {
            Some((eps, pi)) => format!("{}*{}", twist_name(&eps), twist_name(&pi)),
            None => "twist[unsupported]".to_string(),
        },
    }
}

impl BallGenerator {
    pub fn name(&self, mode: BallMode) -> String {
        match self {
            BallGenerator::LeftMult(w) => {
                let label = word_label(mode, w);
                if label.is_empty() {
                    "mul[1]".to_string()
                } else {
                    format!("mul[{label}]")
                }
            }
            BallGenerator::Twist(a) => twist_name(a),
        }
    }

    pub fn inverse(&self) -> Result<BallGenerator> {
        match self {
            BallGenerator::LeftMult(w) => Ok(BallGenerator::LeftMult(w.invert())),
            BallGenerator::Twist(a) => {
                let inv = match a.tag() {
                    Tag::Composite => {
                        let (eps, pi) = a.is_factor_times_sym().ok_or_else(|| {
                            Error::Unsupported(
                                "only factor-times-permutation twists act on coset trees".into(),
                            )
                        })?;
                        eps.inverse()?.compose(&pi.inverse()?)?
                    }
                    _ => a.inverse()?,
                };
                Ok(BallGenerator::Twist(inv))
            }
        }
    }
}

/// Decomposes a twist as `perm ∘ factor` and extracts the factor
/// permutation it induces on the letter subgroups.
fn twist_parts(a: &Automorphism) -> Result<(Automorphism, Automorphism, Vec<usize>)> {
    let (eps, pi) = a.is_factor_times_sym().ok_or_else(|| {
        Error::Unsupported("only factor-times-permutation twists act on coset trees".into())
    })?;
    let Tag::Permutation(sigma) = pi.tag().clone() else {
        unreachable!("permutation constructor always tags permutations");
    };
    Ok((eps, pi, sigma))
}

/// Applies a twist to a group element written over the ball's alphabet. In
/// the two-factor tree elements are plain words and the twist acts as the
/// automorphism; in the three-factor tree elements are outer words and the
/// twist acts through the signed-permutation conjugation action.
fn twist_word(mode: BallMode, eps: &Automorphism, pi: &Automorphism, w: &Word) -> Result<Word> {
    match mode {
        BallMode::M2 => pi.apply(&eps.apply(w)?),
        BallMode::M3Outer => outer_conjugation_action(pi, &outer_conjugation_action(eps, w)?),
    }
}

/// Image of one coset under one generator, as an exact vertex of the full
/// tree: `h(gU) = h(g)h(U)`.
fn apply_to_coset(mode: BallMode, gen: &BallGenerator, v: &CosetVertex) -> Result<CosetVertex> {
    match gen {
        BallGenerator::LeftMult(w) => CosetVertex::new(w.multiply(&v.rep)?, v.subgroup),
        BallGenerator::Twist(a) => {
            let (eps, pi, sigma) = twist_parts(a)?;
            let rep = twist_word(mode, &eps, &pi, &v.rep)?;
            let subgroup = match (mode, v.subgroup) {
                (_, SubgroupId::Trivial) => SubgroupId::Trivial,
                (BallMode::M2, SubgroupId::Factor(i)) => SubgroupId::Factor(sigma[i]),
                (BallMode::M3Outer, SubgroupId::Factor(i)) => {
                    // The letter subgroup moves to the class of the permuted
                    // partial conjugation; the sign only inverts the
                    // generator, which spans the same subgroup.
                    let (pc_i, pc_j) = OUTER_PC[i];
                    let (letter, _sign) = outer_class_of_pc(sigma[pc_i], sigma[pc_j]);
                    SubgroupId::Factor(letter)
                }
            };
            CosetVertex::new(rep, subgroup)
        }
    }
}

fn apply_to_vertex(mode: BallMode, gen: &BallGenerator, v: &BallVertex) -> Result<BallVertex> {
    match v {
        BallVertex::Coset(c) => Ok(BallVertex::Coset(apply_to_coset(mode, gen, c)?)),
        BallVertex::Midpoint(a, b) => Ok(midpoint(
            apply_to_coset(mode, gen, a)?,
            apply_to_coset(mode, gen, b)?,
        )),
    }
}

/// The partial vertex map of one generator on one ball: `None` marks an
/// image whose canonical representative lies outside the ball.
#[derive(Clone, Debug)]
pub struct VertexMap {
    generator: String,
    images: Vec<Option<usize>>,
}

impl VertexMap {
    pub fn generator(&self) -> &str {
        &self.generator
    }

    pub fn image(&self, id: usize) -> Option<usize> {
        self.images[id]
    }

    pub fn images(&self) -> &[Option<usize>] {
        &self.images
    }

    pub fn fixed_vertices(&self) -> Vec<usize> {
        self.images
            .iter()
            .enumerate()
            .filter(|&(v, &img)| img == Some(v))
            .map(|(v, _)| v)
            .collect()
    }

    /// One `GEN <g> MAPS <v> -> <w>` line per vertex; images outside the
    /// ball print as `outside-ball`.
    pub fn lines(&self, ball: &TreeBall) -> Vec<String> {
        self.images
            .iter()
            .enumerate()
            .map(|(v, img)| {
                let target = match img {
                    Some(w) => ball.label(*w),
                    None => "outside-ball".to_string(),
                };
                format!("GEN {} MAPS {} -> {}", self.generator, ball.label(v), target)
            })
            .collect()
    }
}

/// Extends one generator over the ball. Wherever both endpoints of an edge
/// have images, the image pair must again be an edge, and the defined part
/// of the map must be injective; either failure would falsify the action
/// rules and is reported as an error.
pub fn extend_action(ball: &TreeBall, gen: &BallGenerator) -> Result<VertexMap> {
    let images: Vec<Option<usize>> = ball
        .vertices
        .iter()
        .map(|v| {
            let img = apply_to_vertex(ball.mode, gen, v)?;
            Ok(ball.find(&img))
        })
        .collect::<Result<_>>()?;
    let map = VertexMap {
        generator: gen.name(ball.mode),
        images,
    };
    let mut seen = HashSet::new();
    for (v, img) in map.images.iter().enumerate() {
        if let Some(w) = img {
            if !seen.insert(*w) {
                return Err(Error::InvalidTree(format!(
                    "generator {} is not injective at {}",
                    map.generator,
                    ball.label(v)
                )));
            }
        }
    }
    for &(u, v) in &ball.edges {
        if let (Some(a), Some(b)) = (map.images[u], map.images[v]) {
            if !ball.is_edge(a, b) {
                return Err(Error::InvalidTree(format!(
                    "generator {} maps edge ({},{}) to a non-edge",
                    map.generator,
                    ball.label(u),
                    ball.label(v)
                )));
            }
        }
    }
    Ok(map)
}

/// Left multiplications by the single letters: the action of the group
/// itself.
pub fn letter_generators(ball: &TreeBall) -> Vec<BallGenerator> {
    (0..ball.sig.factor_count())
        .map(|i| {
            BallGenerator::LeftMult(
                Word::generator(&ball.sig, i, 1).expect("ball signatures admit all letters"),
            )
        })
        .collect()
}

/// Letters, their inverses, and the factor-swapping twists; enough to carry
/// any ball edge to any other within the transitivity searches.
fn transit_generators(ball: &TreeBall) -> Result<Vec<BallGenerator>> {
    let mut gens = letter_generators(ball);
    let inverses: Vec<BallGenerator> =
        gens.iter().map(|g| g.inverse()).collect::<Result<_>>()?;
    gens.extend(inverses);
    match ball.mode {
        BallMode::M2 => {
            gens.push(BallGenerator::Twist(Automorphism::permutation(
                &ball.sig,
                &[1, 0],
            )?));
        }
        BallMode::M3Outer => {
            gens.push(BallGenerator::Twist(Automorphism::permutation(
                &ball.sig,
                &[1, 0, 2],
            )?));
            gens.push(BallGenerator::Twist(Automorphism::permutation(
                &ball.sig,
                &[0, 2, 1],
            )?));
        }
    }
    Ok(gens)
}

/// Confirms that no ball vertex is fixed by every generator. Vertices whose
/// image under some generator leaves the ball are excluded, since their
/// orbit is not visible at this radius.
pub fn verify_no_global_fixed_point(
    ball: &TreeBall,
    gens: &[BallGenerator],
) -> Result<Report> {
    if gens.is_empty() {
        return Err(Error::Hypothesis("no generators given".into()));
    }
    let maps: Vec<VertexMap> = gens
        .iter()
        .map(|g| extend_action(ball, g))
        .collect::<Result<_>>()?;
    let mut report = Report::new("fixed-point-scan");
    let mut checked = 0usize;
    let mut skipped = 0usize;
    let mut witness: Option<usize> = None;
    for v in 0..ball.vertex_count() {
        let images: Option<Vec<usize>> = maps.iter().map(|m| m.image(v)).collect();
        match images {
            None => skipped += 1,
            Some(imgs) => {
                checked += 1;
                if imgs.iter().all(|&w| w == v) && witness.is_none() {
                    witness = Some(v);
                }
            }
        }
    }
    report.record(
        "no-common-fixed-vertex",
        witness.is_none(),
        witness.map(|v| ball.label(v)).unwrap_or_default(),
    );
    report.note(format!(
        "checked {checked} vertices, {skipped} excluded at the boundary"
    ));
    Ok(report)
}

/// Breadth-first orbit search on ball edges: returns the first edge not
/// reached from `start` within `steps` generator applications, or `None`
/// when every edge is reached.
fn uncovered_edge(
    ball: &TreeBall,
    start: (usize, usize),
    gens: &[BallGenerator],
    steps: usize,
) -> Result<Option<(usize, usize)>> {
    let maps: Vec<VertexMap> = gens
        .iter()
        .map(|g| extend_action(ball, g))
        .collect::<Result<_>>()?;
    let start = (start.0.min(start.1), start.0.max(start.1));
    let mut seen: HashSet<(usize, usize)> = HashSet::from([start]);
    let mut frontier = vec![start];
    for _ in 0..steps {
        let mut next = Vec::new();
        for &(u, v) in &frontier {
            for m in &maps {
                if let (Some(a), Some(b)) = (m.image(u), m.image(v)) {
                    let e = (a.min(b), a.max(b));
                    if seen.insert(e) {
                        next.push(e);
                    }
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    Ok(ball.edges.iter().copied().find(|e| !seen.contains(e)))
}

/// One element of a semidirect product acting on the coset tree: conjugate
/// by the twist first, then multiply on the left.
fn act_pair(
    mode: BallMode,
    word: &Word,
    twist: &Automorphism,
    v: &CosetVertex,
) -> Result<CosetVertex> {
    let twisted = apply_to_coset(mode, &BallGenerator::Twist(twist.clone()), v)?;
    apply_to_coset(mode, &BallGenerator::LeftMult(word.clone()), &twisted)
}

fn all_permutation_twists(sig: &Signature) -> Vec<Automorphism> {
    crate::aut::all_admissible_permutations(sig)
}

/// Stabilizer enumeration behind the two-factor amalgam decomposition: the
/// base vertex group, the unordered-pair group, and their intersection,
/// with order formulas, fixed-point verification, bounded completeness
/// sweeps, and an edge-transitivity search on the subdivided ball.
pub fn amalgam_report_m2(n: u32) -> Result<Report> {
    let sig = Signature::new(vec![n, n])?;
    let mode = BallMode::M2;
    let phi = arith::totient(n as u64);
    let mut report = Report::new(format!("amalgam-m2-n{n}"));

    let vertex_a = CosetVertex::new(Word::identity(&sig), SubgroupId::Factor(0))?;
    let vertex_b = CosetVertex::new(Word::identity(&sig), SubgroupId::Factor(1))?;
    let factor_autos = all_factor_autos(&sig);
    let swap = Automorphism::permutation(&sig, &[1, 0])?;
    let identity_word = Word::identity(&sig);

    // Base vertex group: conjugations by the first letter subgroup times
    // the factor automorphisms.
    let mut vertex_group: Vec<(Word, Automorphism)> = Vec::new();
    for t in 0..n {
        let w = if t == 0 {
            identity_word.clone()
        } else {
            Word::generator(&sig, 0, t as i64)?
        };
        for eps in &factor_autos {
            vertex_group.push((w.clone(), eps.clone()));
        }
    }
    // Pair group: factor automorphisms extended by the letter swap.
    let mut pair_group: Vec<(Word, Automorphism)> = Vec::new();
    for eps in &factor_autos {
        pair_group.push((identity_word.clone(), eps.clone()));
        pair_group.push((identity_word.clone(), eps.compose(&swap)?));
    }
    // Edge group: the factor automorphisms alone.
    let edge_group: Vec<(Word, Automorphism)> = factor_autos
        .iter()
        .map(|eps| (identity_word.clone(), eps.clone()))
        .collect();

    let composed = |elems: &[(Word, Automorphism)]| -> Result<HashSet<Automorphism>> {
        elems
            .iter()
            .map(|(w, t)| Automorphism::inner(w)?.compose(t))
            .collect()
    };
    let vertex_set = composed(&vertex_group)?;
    let pair_set = composed(&pair_group)?;
    let edge_set = composed(&edge_group)?;

    report.record(
        "vertex-stabilizer-order",
        vertex_set.len() as u64 == n as u64 * phi * phi,
        format!("got {}, expected {}", vertex_set.len(), n as u64 * phi * phi),
    );
    report.record(
        "pair-stabilizer-order",
        pair_set.len() as u64 == 2 * phi * phi,
        format!("got {}, expected {}", pair_set.len(), 2 * phi * phi),
    );
    report.record(
        "edge-group-order",
        edge_set.len() as u64 == phi * phi,
        format!("got {}, expected {}", edge_set.len(), phi * phi),
    );

    let fixes_a = vertex_group
        .iter()
        .map(|(w, t)| Ok(act_pair(mode, w, t, &vertex_a)? == vertex_a))
        .collect::<Result<Vec<bool>>>()?;
    report.record(
        "vertex-stabilizer-fixes-A",
        fixes_a.iter().all(|&ok| ok),
        "an element moved the base vertex",
    );

    let preserves_pair = pair_group
        .iter()
        .map(|(w, t)| {
            let ia = act_pair(mode, w, t, &vertex_a)?;
            let ib = act_pair(mode, w, t, &vertex_b)?;
            Ok(midpoint(ia, ib) == midpoint(vertex_a.clone(), vertex_b.clone()))
        })
        .collect::<Result<Vec<bool>>>()?;
    report.record(
        "pair-stabilizer-preserves-pair",
        preserves_pair.iter().all(|&ok| ok),
        "an element moved the base edge",
    );

    let fixes_both = edge_group
        .iter()
        .map(|(w, t)| {
            Ok(act_pair(mode, w, t, &vertex_a)? == vertex_a
                && act_pair(mode, w, t, &vertex_b)? == vertex_b)
        })
        .collect::<Result<Vec<bool>>>()?;
    report.record(
        "edge-group-fixes-pointwise",
        fixes_both.iter().all(|&ok| ok),
        "an element moved an endpoint",
    );

    let intersection: HashSet<&Automorphism> = vertex_set.intersection(&pair_set).collect();
    report.record(
        "edge-group-is-intersection",
        intersection.len() == edge_set.len()
            && edge_set.iter().all(|a| intersection.contains(a)),
        format!(
            "intersection has {} elements, edge group {}",
            intersection.len(),
            edge_set.len()
        ),
    );

    // Completeness sweep: over all words up to three syllables and all
    // twists, the elements fixing the base vertex resp. preserving the base
    // pair are exactly the enumerated stabilizers.
    let twists: Vec<Automorphism> = factor_autos
        .iter()
        .flat_map(|eps| [eps.clone(), eps.compose(&swap).expect("same signature")])
        .collect();
    let mut vertex_fixers = 0u64;
    let mut pair_preservers = 0u64;
    let mut sweep_sound = true;
    for w in reduced_words_up_to(&sig, 3) {
        for t in &twists {
            let ia = act_pair(mode, &w, t, &vertex_a)?;
            let ib = act_pair(mode, &w, t, &vertex_b)?;
            let composed_elem = Automorphism::inner(&w)?.compose(t)?;
            if ia == vertex_a {
                vertex_fixers += 1;
                sweep_sound &= vertex_set.contains(&composed_elem);
            }
            if midpoint(ia, ib) == midpoint(vertex_a.clone(), vertex_b.clone()) {
                pair_preservers += 1;
                sweep_sound &= pair_set.contains(&composed_elem);
            }
        }
    }
    report.record(
        "vertex-stabilizer-complete",
        vertex_fixers == n as u64 * phi * phi,
        format!(
            "sweep found {vertex_fixers} fixers, expected {}",
            n as u64 * phi * phi
        ),
    );
    report.record(
        "pair-stabilizer-complete",
        pair_preservers == 2 * phi * phi,
        format!("sweep found {pair_preservers} preservers, expected {}", 2 * phi * phi),
    );
    report.record(
        "stabilizer-sweep-membership",
        sweep_sound,
        "a swept stabilizer element fell outside the enumerated group",
    );

    // Edge transitivity at ball scale on the subdivided ball. The step
    // budget covers spelling out a deepest representative letter by letter
    // plus one swap.
    let radius = 4;
    let steps = 2 * radius + 1;
    let ball = build_ball_m2(n, radius)?.barycentric_subdivide()?;
    let base_a = ball
        .find_coset(&vertex_a)
        .expect("base vertex is in its own ball");
    let base_mid = ball
        .find(&midpoint(vertex_a.clone(), vertex_b.clone()))
        .expect("base edge midpoint exists after subdivision");
    let unreached = uncovered_edge(&ball, (base_a, base_mid), &transit_generators(&ball)?, steps)?;
    report.record(
        "edge-transitive-in-ball",
        unreached.is_none(),
        unreached
            .map(|(u, v)| format!("unreached edge ({},{})", ball.label(u), ball.label(v)))
            .unwrap_or_default(),
    );
    report.note(format!(
        "orders: vertex group {}, pair group {}, edge group {}",
        vertex_set.len(),
        pair_set.len(),
        edge_set.len()
    ));
    report.note(format!(
        "transitivity search: radius {radius} ball, at most {steps} steps"
    ));
    Ok(report)
}

/// Stabilizer enumeration behind the three-factor outer amalgam: the
/// identity-element stabilizer, the stabilizer of the first letter-subgroup
/// coset, and their intersection, with the same verification pattern as the
/// two-factor report plus the fundamental-domain search.
pub fn amalgam_report_m3(n: u32) -> Result<Report> {
    let sig = Signature::new(vec![n, n, n])?;
    let mode = BallMode::M3Outer;
    let phi = arith::totient(n as u64);
    let phi3 = phi * phi * phi;
    let mut report = Report::new(format!("amalgam-m3-n{n}"));

    let base_elt = CosetVertex::new(Word::identity(&sig), SubgroupId::Trivial)?;
    let base_a1 = CosetVertex::new(Word::identity(&sig), SubgroupId::Factor(0))?;
    let factor_autos = all_factor_autos(&sig);
    let perms = all_permutation_twists(&sig);
    let identity_word = Word::identity(&sig);

    // The permutations stabilizing the first letter subgroup, computed from
    // the signed-permutation action rather than assumed.
    let stab_perms: Vec<Automorphism> = perms
        .iter()
        .filter(|pi| {
            apply_to_coset(mode, &BallGenerator::Twist((*pi).clone()), &base_a1)
                .map(|img| img == base_a1)
                .unwrap_or(false)
        })
        .cloned()
        .collect();
    let expected_stab = [
        Automorphism::identity(&sig),
        Automorphism::permutation(&sig, &[2, 1, 0])?,
    ];
    report.record(
        "perm-stabilizer-of-A1",
        stab_perms.len() == 2 && expected_stab.iter().all(|p| stab_perms.contains(p)),
        format!(
            "stabilizing permutations: {:?}",
            stab_perms.iter().map(twist_name).collect::<Vec<_>>()
        ),
    );
    report.note(
        "the transposition exchanging the first and third factors stabilizes A1; \
         the transposition of the first two factors carries A1 to A3",
    );

    let all_twists: Vec<Automorphism> = perms
        .iter()
        .flat_map(|pi| {
            factor_autos
                .iter()
                .map(|eps| pi.compose(eps).expect("same signature"))
                .collect::<Vec<_>>()
        })
        .collect();
    let stab_twists: Vec<Automorphism> = stab_perms
        .iter()
        .flat_map(|pi| {
            factor_autos
                .iter()
                .map(|eps| pi.compose(eps).expect("same signature"))
                .collect::<Vec<_>>()
        })
        .collect();

    // Elements are pairs (outer word, twist); the semidirect decomposition
    // makes distinct pairs distinct group elements.
    let mut element_stab: HashSet<(Word, Automorphism)> = HashSet::new();
    for t in &all_twists {
        element_stab.insert((identity_word.clone(), t.clone()));
    }
    let mut coset_stab: HashSet<(Word, Automorphism)> = HashSet::new();
    for t in &stab_twists {
        for p in 0..n {
            let w = if p == 0 {
                identity_word.clone()
            } else {
                Word::generator(&sig, 0, p as i64)?
            };
            coset_stab.insert((w, t.clone()));
        }
    }
    let edge_group: HashSet<(Word, Automorphism)> = stab_twists
        .iter()
        .map(|t| (identity_word.clone(), t.clone()))
        .collect();

    report.record(
        "element-stabilizer-order",
        element_stab.len() as u64 == 6 * phi3,
        format!("got {}, expected {}", element_stab.len(), 6 * phi3),
    );
    report.record(
        "coset-stabilizer-order",
        coset_stab.len() as u64 == 2 * n as u64 * phi3,
        format!("got {}, expected {}", coset_stab.len(), 2 * n as u64 * phi3),
    );
    report.record(
        "edge-group-order",
        edge_group.len() as u64 == 2 * phi3,
        format!("got {}, expected {}", edge_group.len(), 2 * phi3),
    );

    let fixes = |elems: &HashSet<(Word, Automorphism)>, target: &CosetVertex| -> Result<bool> {
        for (w, t) in elems {
            if act_pair(mode, w, t, target)? != *target {
                return Ok(false);
            }
        }
        Ok(true)
    };
    report.record(
        "element-stabilizer-fixes-base",
        fixes(&element_stab, &base_elt)?,
        "an element moved the identity vertex",
    );
    report.record(
        "coset-stabilizer-fixes-A1",
        fixes(&coset_stab, &base_a1)?,
        "an element moved the base coset",
    );
    report.record(
        "edge-group-fixes-edge",
        fixes(&edge_group, &base_elt)? && fixes(&edge_group, &base_a1)?,
        "an element moved an endpoint of the base edge",
    );

    let intersection: HashSet<&(Word, Automorphism)> =
        element_stab.intersection(&coset_stab).collect();
    report.record(
        "edge-group-is-intersection",
        intersection.len() == edge_group.len()
            && edge_group.iter().all(|e| intersection.contains(e)),
        format!(
            "intersection has {} elements, edge group {}",
            intersection.len(),
            edge_group.len()
        ),
    );

    // Completeness sweep over all outer words up to two syllables and every
    // twist.
    let mut element_fixers = 0u64;
    let mut coset_fixers = 0u64;
    let mut sweep_sound = true;
    for w in reduced_words_up_to(&sig, 2) {
        for t in &all_twists {
            let pair = (w.clone(), t.clone());
            if act_pair(mode, &w, t, &base_elt)? == base_elt {
                element_fixers += 1;
                sweep_sound &= element_stab.contains(&pair);
            }
            if act_pair(mode, &w, t, &base_a1)? == base_a1 {
                coset_fixers += 1;
                sweep_sound &= coset_stab.contains(&pair);
            }
        }
    }
    report.record(
        "element-stabilizer-complete",
        element_fixers == 6 * phi3,
        format!("sweep found {element_fixers} fixers, expected {}", 6 * phi3),
    );
    report.record(
        "coset-stabilizer-complete",
        coset_fixers == 2 * n as u64 * phi3,
        format!(
            "sweep found {coset_fixers} fixers, expected {}",
            2 * n as u64 * phi3
        ),
    );
    report.record(
        "stabilizer-sweep-membership",
        sweep_sound,
        "a swept stabilizer element fell outside the enumerated group",
    );

    // The action is type-preserving, hence inversion-free, so the
    // fundamental-domain search runs on the unsubdivided ball.
    let radius = 4;
    let steps = 2 * radius + 1;
    let ball = build_ball_m3_outer(n, radius)?;
    let gens = transit_generators(&ball)?;
    let mut type_preserving = true;
    for gen in &gens {
        let map = extend_action(&ball, gen)?;
        for (v, img) in map.images().iter().enumerate() {
            if let Some(w) = img {
                let same_kind = matches!(
                    (&ball.vertices[v], &ball.vertices[*w]),
                    (BallVertex::Coset(a), BallVertex::Coset(b))
                        if matches!(a.subgroup(), SubgroupId::Trivial)
                            == matches!(b.subgroup(), SubgroupId::Trivial)
                );
                type_preserving &= same_kind;
            }
        }
    }
    report.record(
        "action-type-preserving",
        type_preserving,
        "a generator mixed element and coset vertices",
    );

    let base_elt_id = ball
        .find_coset(&base_elt)
        .expect("base vertex is in its own ball");
    let base_a1_id = ball
        .find_coset(&base_a1)
        .expect("the base coset is adjacent to the base vertex");
    let unreached = uncovered_edge(&ball, (base_elt_id, base_a1_id), &gens, steps)?;
    report.record(
        "fundamental-domain-covers-edges",
        unreached.is_none(),
        unreached
            .map(|(u, v)| format!("unreached edge ({},{})", ball.label(u), ball.label(v)))
            .unwrap_or_default(),
    );
    report.note(format!(
        "orders: element stabilizer {}, coset stabilizer {}, edge group {}",
        element_stab.len(),
        coset_stab.len(),
        edge_group.len()
    ));
    report.note(format!(
        "fundamental-domain search: radius {radius} ball, at most {steps} steps"
    ));
    Ok(report)
}
