//! Batch verification of the standard automorphism relations.
//!
//! Three jobs, each returning a [`Report`]:
//! * [`verify_generator_relations`] sweeps every factor automorphism,
//!   admissible permutation, and partial conjugation of a signature and
//!   checks how they conjugate each other, that partial conjugations have
//!   exact order, and that the full product of partial conjugations with a
//!   common conjugating letter is an inner automorphism.
//! * [`verify_fr_presentation_m3`] checks, over `(n, n, n)`, the defining
//!   relations of the subgroup generated by partial conjugations.
//! * [`verify_phi_psi_m3`] builds the two mutually inverse homomorphisms
//!   between that subgroup and the semidirect product of the group with
//!   itself, and confirms they are inverse on generators.
//!
//! [`partial_conj_commutation_table`] tabulates which pairs of partial
//! conjugations commute and whether the syntactic criterion (same
//! conjugating letter, or fully disjoint index sets) predicts it.

use super::outer::{rho, PairElement, OUTER_PC};
use super::{
    all_admissible_permutations, all_factor_autos, all_partial_conjs, Automorphism, Tag,
};
use crate::report::Report;
use crate::word::Word;
use crate::{Error, Result, Signature};
use itertools::Itertools;
use std::fmt;

/// Space-free name for a permutation, as its 1-based image list.
fn perm_name(sigma: &[usize]) -> String {
    format!("perm[{}]", sigma.iter().map(|j| j + 1).join(","))
}

/// Space-free name for a tagged generator.
fn gen_name(f: &Automorphism) -> String {
    match f.tag() {
        Tag::FactorAuto(eps) => format!("factor:{}", eps.iter().join(",")),
        Tag::Permutation(sigma) => perm_name(sigma),
        Tag::PartialConj { i, j } => format!("pc:{},{}", i + 1, j + 1),
        Tag::Composite => "composite".into(),
    }
}

fn witness(lhs: &Automorphism, rhs: &Automorphism) -> String {
    format!("lhs: {lhs} / rhs: {rhs}")
}

/// Checks the conjugation relations among the standard generators:
/// `eps pc(i,j) eps^-1 = pc(i,j)^(eps_j)`, `pi pc(i,j) pi^-1 =
/// pc(pi(i), pi(j))`, each `pc(i,j)` has order exactly `n_j`, and the
/// product of all `pc(k,j)` over `k != j` is conjugation by `x_j`.
pub fn verify_generator_relations(sig: &Signature) -> Result<Report> {
    if sig.factor_count() < 2 {
        return Err(Error::Hypothesis(
            "generator relations need at least two free factors".into(),
        ));
    }
    let mut report = Report::new(format!("generator relations over {sig}"));
    let pcs = all_partial_conjs(sig);

    for eps in all_factor_autos(sig) {
        let eps_inv = eps.inverse()?;
        let Tag::FactorAuto(exps) = eps.tag().clone() else {
            unreachable!("factor enumeration yields factor tags");
        };
        for pc in &pcs {
            let &Tag::PartialConj { j, .. } = pc.tag() else {
                unreachable!("partial conjugation enumeration yields pc tags");
            };
            let lhs = eps.compose(pc)?.compose(&eps_inv)?;
            let rhs = pc.pow(exps[j] as u64)?;
            report.record(
                format!("eps-conj[{}][{}]", gen_name(&eps), gen_name(pc)),
                lhs == rhs,
                witness(&lhs, &rhs),
            );
        }
    }

    for pi in all_admissible_permutations(sig) {
        let pi_inv = pi.inverse()?;
        let Tag::Permutation(sigma) = pi.tag().clone() else {
            unreachable!("permutation enumeration yields permutation tags");
        };
        for pc in &pcs {
            let &Tag::PartialConj { i, j } = pc.tag() else {
                unreachable!("partial conjugation enumeration yields pc tags");
            };
            let lhs = pi.compose(pc)?.compose(&pi_inv)?;
            let rhs = Automorphism::partial_conj(sig, sigma[i], sigma[j])?;
            report.record(
                format!("perm-conj[{}][{}]", gen_name(&pi), gen_name(pc)),
                lhs == rhs,
                witness(&lhs, &rhs),
            );
        }
    }

    for pc in &pcs {
        let &Tag::PartialConj { j, .. } = pc.tag() else {
            unreachable!("partial conjugation enumeration yields pc tags");
        };
        let n = sig.order(j) as u64;
        report.record(
            format!("pc-order[{}]", gen_name(pc)),
            pc.has_order(n)?,
            format!("order is not exactly {n}"),
        );
    }

    for j in 0..sig.factor_count() {
        let mut product = Automorphism::identity(sig);
        for k in 0..sig.factor_count() {
            if k != j {
                product = product.compose(&Automorphism::partial_conj(sig, k, j)?)?;
            }
        }
        let xj = Word::generator(sig, j, 1)?;
        let inner = Automorphism::inner(&xj)?;
        report.record(
            format!("inner-product[{}]", j + 1),
            product == inner,
            witness(&product, &inner),
        );
    }

    Ok(report)
}

fn triple_sig(n: u32) -> Result<Signature> {
    Signature::new(vec![n, n, n])
}

/// Checks the defining relations of the partial conjugation subgroup over
/// `(n, n, n)`: every `pc(i,j)` has order `n`, partial conjugations with the
/// same conjugating letter commute, and `pc(i,j) pc(k,j)` commutes with
/// `pc(i,k)` for pairwise distinct indices. A negative control confirms two
/// generators that should not commute indeed do not.
pub fn verify_fr_presentation_m3(n: u32) -> Result<Report> {
    let sig = triple_sig(n)?;
    let mut report = Report::new(format!("partial conjugation relations over {sig}"));
    let pc = |i, j| Automorphism::partial_conj(&sig, i, j);

    for i in 0..3usize {
        for j in 0..3usize {
            if i != j {
                report.record(
                    format!("fr3-order[pc:{},{}]", i + 1, j + 1),
                    pc(i, j)?.has_order(n as u64)?,
                    format!("order is not exactly {n}"),
                );
            }
        }
    }

    for j in 0..3usize {
        let others: Vec<usize> = (0..3).filter(|&k| k != j).collect();
        let (i, k) = (others[0], others[1]);
        report.record(
            format!("fr3-commute[pc:{},{}|pc:{},{}]", i + 1, j + 1, k + 1, j + 1),
            pc(i, j)?.commutes_with(&pc(k, j)?)?,
            "generators with a common conjugating letter must commute",
        );
    }

    for perm in (0..3usize).permutations(3) {
        let [i, j, k] = perm[..] else { unreachable!() };
        let left = pc(i, j)?.compose(&pc(k, j)?)?;
        let right = pc(i, k)?;
        report.record(
            format!("fr3-triple[{},{},{}]", i + 1, j + 1, k + 1),
            left.commutes_with(&right)?,
            format!(
                "pc:{},{} * pc:{},{} must commute with pc:{},{}",
                i + 1,
                j + 1,
                k + 1,
                j + 1,
                i + 1,
                k + 1
            ),
        );
    }

    report.record(
        "fr3-negative-control[pc:1,2|pc:2,3]",
        !pc(0, 1)?.commutes_with(&pc(1, 2)?)?,
        "these two generators must not commute",
    );

    // The order relation uses the common factor order. Reading its exponent
    // as the constant 3 (the number of factors) collapses the generators
    // only when the factor order is 3.
    let cubes_vanish = pc(0, 1)?.pow(3)?.is_identity();
    report.record(
        "fr3-exponent-reading",
        cubes_vanish == (n == 3),
        format!("pc cube identity: {cubes_vanish}, factor order: {n}"),
    );
    report.note(
        "order relation exponent is the factor order; the constant-3 reading holds only for order 3"
            .to_string(),
    );

    Ok(report)
}

/// Generators of the presented semidirect product: three inner letters
/// `c1, c2, c3` (pairs with trivial outer part) and three outer letters
/// (pairs with trivial inner part).
fn pair_c(sig: &Signature, j: usize) -> Result<PairElement> {
    PairElement::new(Word::generator(sig, j, 1)?, Word::identity(sig))
}

fn pair_a(sig: &Signature, letter: usize) -> Result<PairElement> {
    PairElement::new(Word::identity(sig), Word::generator(sig, letter, 1)?)
}

/// The homomorphism from pairs to concrete automorphisms: an inner word
/// becomes conjugation by it, an outer word lifts through `rho`.
fn phi(p: &PairElement) -> Result<Automorphism> {
    Automorphism::inner(&p.inner)?.compose(&rho(&p.outer)?)
}

/// The image of each partial conjugation in the pair group. The three
/// representative letters map to pure outer elements; the other three are
/// products `c_j * a^-1` forced by the inner-product relations.
fn psi(sig: &Signature, i: usize, j: usize) -> Result<PairElement> {
    for (letter, &(pi, pj)) in OUTER_PC.iter().enumerate() {
        if (i, j) == (pi, pj) {
            return pair_a(sig, letter);
        }
    }
    // pc(i,j) = inner(x_j) * pc(k,j)^-1 where k is the third index and
    // pc(k,j) is a representative letter.
    let k = 3 - i - j;
    let letter = OUTER_PC
        .iter()
        .position(|&(pi, pj)| (pi, pj) == (k, j))
        .expect("the complementary pair is a representative");
    pair_c(sig, j)?.mul(&pair_a(sig, letter)?.inverse()?)
}

fn pair_witness(lhs: &PairElement, rhs: &PairElement) -> String {
    format!("lhs: {lhs} / rhs: {rhs}")
}

/// Verifies that the two generator assignments between the partial
/// conjugation subgroup and the pair group preserve all defining relations
/// and are mutually inverse, so the two groups are isomorphic.
pub fn verify_phi_psi_m3(n: u32) -> Result<Report> {
    let sig = triple_sig(n)?;
    let mut report = Report::new(format!("pair group isomorphism over {sig}"));
    let pc_indices: Vec<(usize, usize)> = (0..3usize)
        .flat_map(|i| (0..3usize).filter(move |&j| j != i).map(move |j| (i, j)))
        .collect();
    let pair_id = PairElement::identity(&sig)?;

    // psi preserves the order relations.
    for &(i, j) in &pc_indices {
        let image = psi(&sig, i, j)?;
        report.record(
            format!("phipsi-psi-order[pc:{},{}]", i + 1, j + 1),
            image.pow(n as u64)?.is_identity(),
            format!("psi image {image} does not satisfy the order relation"),
        );
    }

    // psi preserves the commutation relations.
    for j in 0..3usize {
        let others: Vec<usize> = (0..3).filter(|&k| k != j).collect();
        let (i, k) = (others[0], others[1]);
        let a = psi(&sig, i, j)?;
        let b = psi(&sig, k, j)?;
        report.record(
            format!(
                "phipsi-psi-commute[pc:{},{}|pc:{},{}]",
                i + 1,
                j + 1,
                k + 1,
                j + 1
            ),
            a.mul(&b)? == b.mul(&a)?,
            pair_witness(&a.mul(&b)?, &b.mul(&a)?),
        );
    }

    // psi preserves the triple relations.
    for perm in (0..3usize).permutations(3) {
        let [i, j, k] = perm[..] else { unreachable!() };
        let left = psi(&sig, i, j)?.mul(&psi(&sig, k, j)?)?;
        let right = psi(&sig, i, k)?;
        report.record(
            format!("phipsi-psi-triple[{},{},{}]", i + 1, j + 1, k + 1),
            left.mul(&right)? == right.mul(&left)?,
            pair_witness(&left.mul(&right)?, &right.mul(&left)?),
        );
    }

    // Pair arithmetic satisfies the conjugation action of the presentation:
    // a c_k a^-1 = c_(image of x_k), for each outer letter a.
    for (letter, &(i, j)) in OUTER_PC.iter().enumerate() {
        let a = pair_a(&sig, letter)?;
        let concrete = Automorphism::partial_conj(&sig, i, j)?;
        for k in 0..3usize {
            let lhs = a.mul(&pair_c(&sig, k)?)?.mul(&a.inverse()?)?;
            let rhs = PairElement::new(
                concrete.apply(&Word::generator(&sig, k, 1)?)?,
                Word::identity(&sig),
            )?;
            report.record(
                format!("phipsi-pair-conj[a{}][c{}]", letter + 1, k + 1),
                lhs == rhs,
                pair_witness(&lhs, &rhs),
            );
        }
    }

    // phi then psi is the identity on the six partial conjugations.
    for &(i, j) in &pc_indices {
        let back = phi(&psi(&sig, i, j)?)?;
        let expect = Automorphism::partial_conj(&sig, i, j)?;
        report.record(
            format!("phipsi-phi-psi[pc:{},{}]", i + 1, j + 1),
            back == expect,
            witness(&back, &expect),
        );
    }

    // psi then phi is the identity on the six pair generators. The image of
    // c_j under phi is conjugation by x_j, a product of two partial
    // conjugations; push that product back through psi.
    for j in 0..3usize {
        let mut back = pair_id.clone();
        for i in 0..3usize {
            if i != j {
                back = back.mul(&psi(&sig, i, j)?)?;
            }
        }
        let expect = pair_c(&sig, j)?;
        report.record(
            format!("phipsi-psi-phi[c{}]", j + 1),
            back == expect,
            pair_witness(&back, &expect),
        );
    }
    for (letter, &(i, j)) in OUTER_PC.iter().enumerate() {
        let back = psi(&sig, i, j)?;
        let expect = pair_a(&sig, letter)?;
        report.record(
            format!("phipsi-psi-phi[a{}]", letter + 1),
            back == expect,
            pair_witness(&back, &expect),
        );
    }

    // A commuting product worked out longhand in the pair group: the images
    // of pc(1,2) pc(3,2) and pc(1,3) commute.
    let chain_lhs = psi(&sig, 0, 1)?
        .mul(&psi(&sig, 2, 1)?)?
        .mul(&psi(&sig, 0, 2)?)?;
    let chain_rhs = psi(&sig, 0, 2)?
        .mul(&psi(&sig, 0, 1)?)?
        .mul(&psi(&sig, 2, 1)?)?;
    report.record(
        "phipsi-displayed-chain-pairs",
        chain_lhs == chain_rhs,
        pair_witness(&chain_lhs, &chain_rhs),
    );
    let pc = |i, j| Automorphism::partial_conj(&sig, i, j);
    let concrete_lhs = pc(0, 1)?.compose(&pc(2, 1)?)?.compose(&pc(0, 2)?)?;
    let concrete_rhs = pc(0, 2)?.compose(&pc(0, 1)?)?.compose(&pc(2, 1)?)?;
    report.record(
        "phipsi-displayed-chain-concrete",
        concrete_lhs == concrete_rhs,
        witness(&concrete_lhs, &concrete_rhs),
    );

    // The psi image of pc(2,1) is c_1 times the inverse of the third outer
    // letter; it must have order exactly n like its preimage.
    let regression = psi(&sig, 1, 0)?;
    report.record(
        "phipsi-psi-x2x1-order",
        regression.has_order(n as u64)?,
        format!("psi image {regression} does not have order {n}"),
    );

    Ok(report)
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct CommutationRow {
    /// 0-based (conjugated, conjugating) indices of the left generator.
    pub left: (usize, usize),
    pub right: (usize, usize),
    pub commutes: bool,
    /// Syntactic prediction: same conjugating letter, or disjoint indices.
    pub predicted: bool,
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct CommutationTable {
    pub signature: Signature,
    pub rows: Vec<CommutationRow>,
}

impl CommutationTable {
    /// No row where the syntactic criterion predicts commutation that fails.
    pub fn sound(&self) -> bool {
        self.rows.iter().all(|r| !r.predicted || r.commutes)
    }

    pub fn to_report(&self) -> Report {
        let mut report = Report::new(format!(
            "partial conjugation commutation over {}",
            self.signature
        ));
        let bad = self
            .rows
            .iter()
            .find(|r| r.predicted && !r.commutes)
            .map(|r| {
                format!(
                    "pc:{},{} and pc:{},{} predicted to commute but do not",
                    r.left.0 + 1,
                    r.left.1 + 1,
                    r.right.0 + 1,
                    r.right.1 + 1
                )
            })
            .unwrap_or_default();
        report.record("pc-commutation-soundness", self.sound(), bad);
        report
    }
}

impl fmt::Display for CommutationTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rows {
            writeln!(
                f,
                "PAIR pc:{},{} pc:{},{} commutes={} predicted={}",
                r.left.0 + 1,
                r.left.1 + 1,
                r.right.0 + 1,
                r.right.1 + 1,
                if r.commutes { "yes" } else { "no" },
                if r.predicted { "yes" } else { "no" }
            )?;
        }
        write!(f, "{}", self.to_report())
    }
}

/// Tests every unordered pair of distinct partial conjugations for
/// commutation and records whether the syntactic criterion predicts it:
/// `pc(i,j)` and `pc(r,s)` are predicted to commute when `j = s` or when
/// `{i,j}` and `{r,s}` are disjoint.
pub fn partial_conj_commutation_table(sig: &Signature) -> Result<CommutationTable> {
    if sig.factor_count() < 2 {
        return Err(Error::Hypothesis(
            "partial conjugations need at least two free factors".into(),
        ));
    }
    let pcs = all_partial_conjs(sig);
    let mut rows = Vec::new();
    for (idx, f) in pcs.iter().enumerate() {
        let &Tag::PartialConj { i, j } = f.tag() else {
            unreachable!("partial conjugation enumeration yields pc tags");
        };
        for g in &pcs[idx + 1..] {
            let &Tag::PartialConj { i: r, j: s } = g.tag() else {
                unreachable!("partial conjugation enumeration yields pc tags");
            };
            let disjoint = i != r && i != s && j != r && j != s;
            rows.push(CommutationRow {
                left: (i, j),
                right: (r, s),
                commutes: f.commutes_with(g)?,
                predicted: j == s || disjoint,
            });
        }
    }
    Ok(CommutationTable {
        signature: sig.clone(),
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig(orders: &[u32]) -> Signature {
        Signature::new(orders.to_vec()).unwrap()
    }

    #[test]
    fn generator_relations_hold_on_small_signatures() {
        for orders in [&[2, 2, 2][..], &[3, 3][..], &[2, 3][..], &[2, 3, 4][..]] {
            let report = verify_generator_relations(&sig(orders)).unwrap();
            assert!(report.all_pass(), "{report}");
        }
    }

    #[test]
    fn generator_relations_reject_one_factor() {
        assert!(verify_generator_relations(&sig(&[4])).is_err());
    }

    #[test]
    fn fr_presentation_holds_for_small_orders() {
        for n in 2..=5 {
            let report = verify_fr_presentation_m3(n).unwrap();
            assert!(report.all_pass(), "{report}");
        }
    }

    #[test]
    fn pair_isomorphism_holds_for_small_orders() {
        for n in 2..=4 {
            let report = verify_phi_psi_m3(n).unwrap();
            assert!(report.all_pass(), "{report}");
        }
    }

    #[test]
    fn psi_images_match_the_hand_table() {
        let s = sig(&[3, 3, 3]);
        let id = Word::identity(&s);
        let x = |i| Word::generator(&s, i, 1).unwrap();
        let g_inv = |l| Word::generator(&s, l, -1).unwrap();
        // Representative letters map to pure outer elements.
        assert_eq!(psi(&s, 0, 1).unwrap(), PairElement::new(id.clone(), x(0)).unwrap());
        assert_eq!(psi(&s, 1, 2).unwrap(), PairElement::new(id.clone(), x(1)).unwrap());
        assert_eq!(psi(&s, 2, 0).unwrap(), PairElement::new(id.clone(), x(2)).unwrap());
        // The complementary three carry an inner letter and an inverse.
        assert_eq!(
            psi(&s, 0, 2).unwrap(),
            PairElement::new(x(2), g_inv(1)).unwrap()
        );
        assert_eq!(
            psi(&s, 1, 0).unwrap(),
            PairElement::new(x(0), g_inv(2)).unwrap()
        );
        assert_eq!(
            psi(&s, 2, 1).unwrap(),
            PairElement::new(x(1), g_inv(0)).unwrap()
        );
    }

    #[test]
    fn commutation_table_is_sound_and_complete_on_triples() {
        let table = partial_conj_commutation_table(&sig(&[3, 3, 3])).unwrap();
        // 6 generators, 15 unordered pairs.
        assert_eq!(table.rows.len(), 15);
        assert!(table.sound());
        // Over three factors no indices can be disjoint, so the prediction
        // is exactly the common-conjugating-letter pairs, and it is complete.
        for row in &table.rows {
            assert_eq!(row.commutes, row.predicted, "{row:?}");
        }
        assert!(table.to_report().all_pass());
    }

    #[test]
    fn commutation_table_covers_disjoint_pairs() {
        let table = partial_conj_commutation_table(&sig(&[2, 2, 2, 2])).unwrap();
        let row = table
            .rows
            .iter()
            .find(|r| r.left == (0, 1) && r.right == (2, 3))
            .unwrap();
        assert!(row.predicted && row.commutes);
        assert!(table.sound());
    }

    #[test]
    fn report_renders_one_line_per_check() {
        let report = verify_fr_presentation_m3(2).unwrap();
        let text = report.to_string();
        let relation_lines = text.lines().filter(|l| l.starts_with("RELATION ")).count();
        assert_eq!(relation_lines, report.checks.len());
        assert!(text.ends_with(&format!("CHECKS {} FAILURES 0", report.checks.len())));
    }
}
