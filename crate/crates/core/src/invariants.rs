//! Conjugacy-class counting and the decomposition invariants built on it:
//! occurrence counts of each cyclic factor, characteristic normal closures
//! N(k) with the automorphisms they induce on quotients, and the
//! fixed-point case certificates for pairs of partial conjugations.
//!
//! Torsion elements of a free product are conjugate into a free factor, and
//! elements of distinct factors are never conjugate. The class counts c(k)
//! therefore have the closed form phi(k) times the number of factors whose
//! order k divides; a brute-force census over short words double-checks
//! this through the generic conjugacy test. Occurrence counts are
//! recovered from the census by the downward recursion
//! occ(k) = c(k)/phi(k) - sum over a >= 2 of occ(ak). The plain difference
//! c(k) - sum c(ak) is reported alongside: the two disagree whenever
//! phi(k) > 1, for example on the signature (4,2), so only the recursion is
//! trusted.

use crate::aut::{
    all_admissible_permutations, all_factor_autos, all_partial_conjs, format_tag, Automorphism,
};
use crate::report::Report;
use crate::word::{count_reduced, enumerate_reduced};
use crate::{arith, Error, Order, Result, Signature, Word};
use serde::Serialize;
use std::collections::BTreeMap;

/// Class counts `c(k)` of elements of each finite order `k >= 2`.
#[derive(Clone, PartialEq, Eq, Serialize, Debug)]
pub struct ConjugacyCensus {
    signature: Signature,
    counts: BTreeMap<u64, u64>,
}

impl ConjugacyCensus {
    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    /// `c(k)`; zero for orders with no elements.
    pub fn count(&self, k: u64) -> u64 {
        self.counts.get(&k).copied().unwrap_or(0)
    }

    /// The nonzero counts, ascending in `k`.
    pub fn counts(&self) -> &BTreeMap<u64, u64> {
        &self.counts
    }

    /// One-line rendering `c(2)=2 c(4)=2`.
    pub fn summary(&self) -> String {
        let parts: Vec<String> = self
            .counts
            .iter()
            .map(|(k, c)| format!("c({k})={c}"))
            .collect();
        parts.join(" ")
    }
}

/// Closed-form census: `c(k) = phi(k) * #{i : k divides n_i}`.
pub fn conjugacy_census(sig: &Signature) -> ConjugacyCensus {
    let mut counts = BTreeMap::new();
    let max = sig.orders().iter().max().copied().unwrap_or(1) as u64;
    for k in 2..=max {
        let hits = sig.orders().iter().filter(|&&n| n as u64 % k == 0).count() as u64;
        if hits > 0 {
            counts.insert(k, arith::totient(k) * hits);
        }
    }
    ConjugacyCensus {
        signature: sig.clone(),
        counts,
    }
}

/// Independent census oracle: enumerates every reduced word with at most
/// `max_syllables` syllables and partitions the torsion elements among them
/// by the generic conjugacy test. Torsion elements are exactly the words
/// whose cyclic core is at most one syllable; every longer core is verified
/// to have infinite order. Refuses signatures with more than 10^4 candidate
/// words.
pub fn conjugacy_census_brute(sig: &Signature, max_syllables: usize) -> Result<ConjugacyCensus> {
    let budget = 10_000;
    let candidates = count_reduced(sig, max_syllables);
    if candidates > budget {
        return Err(Error::Unsupported(format!(
            "brute-force census over {candidates} candidate words exceeds the {budget} budget"
        )));
    }
    let mut reps: Vec<(Word, u64)> = Vec::new();
    for w in enumerate_reduced(sig, max_syllables) {
        match w.order() {
            Order::Finite(k) if k >= 2 => {
                let mut seen = false;
                for (r, rk) in &reps {
                    if *rk == k && r.is_conjugate(&w)? {
                        seen = true;
                        break;
                    }
                }
                if !seen {
                    reps.push((w, k));
                }
            }
            Order::Finite(_) => {}
            Order::Infinite => {
                let (core, _) = w.cyclically_reduce();
                if core.len() < 2 {
                    return Err(Error::Hypothesis(format!(
                        "word {w} has a short cyclic core but no finite order"
                    )));
                }
            }
        }
    }
    let mut counts: BTreeMap<u64, u64> = BTreeMap::new();
    for (_, k) in &reps {
        *counts.entry(*k).or_insert(0) += 1;
    }
    Ok(ConjugacyCensus {
        signature: sig.clone(),
        counts,
    })
}

/// Token appended to occurrence listings when the two formula variants
/// disagree.
pub const FORMULA_MISMATCH_FLAG: &str = "PAPER-FORMULA-MISMATCH";

/// Occurrence count of the cyclic factor of one order, by both formulas.
#[derive(Clone, Copy, PartialEq, Eq, Serialize, Debug)]
pub struct OccurrenceCount {
    /// The factor order `k`.
    pub order: u64,
    /// Value of the downward recursion; the trusted count.
    pub corrected: u64,
    /// Value of the plain difference `c(k) - sum c(ak)`, kept signed
    /// because it can undershoot.
    pub literal: i64,
}

impl OccurrenceCount {
    pub fn formulas_disagree(&self) -> bool {
        self.literal < 0 || self.corrected != self.literal as u64
    }
}

/// How often the cyclic group of order `k` occurs in the decomposition,
/// computed from the census alone.
pub fn occurrences(sig: &Signature, k: u64) -> Result<OccurrenceCount> {
    if k < 2 {
        return Err(Error::Hypothesis(format!(
            "occurrence counts are defined for orders k >= 2, got {k}"
        )));
    }
    let census = conjugacy_census(sig);
    let max = census.counts.keys().max().copied().unwrap_or(1);
    let mut occ: BTreeMap<u64, u64> = BTreeMap::new();
    for q in (2..=max).rev() {
        let c = census.count(q);
        let mut val = if c == 0 {
            0
        } else {
            (c / arith::totient(q)) as i64
        };
        let mut a = 2;
        while a * q <= max {
            val -= occ.get(&(a * q)).copied().unwrap_or(0) as i64;
            a += 1;
        }
        debug_assert!(val >= 0, "occurrence recursion went negative at {q}");
        occ.insert(q, val as u64);
    }
    let mut literal = census.count(k) as i64;
    let mut a = 2;
    while a * k <= max {
        literal -= census.count(a * k) as i64;
        a += 1;
    }
    Ok(OccurrenceCount {
        order: k,
        corrected: occ.get(&k).copied().unwrap_or(0),
        literal,
    })
}

/// Occurrence counts for every order the census supports, ascending.
pub fn occurrence_table(sig: &Signature) -> Result<Vec<OccurrenceCount>> {
    conjugacy_census(sig)
        .counts()
        .keys()
        .map(|&k| occurrences(sig, k))
        .collect()
}

/// The factor indices of one order class (0-based).
pub fn indices_with_order(sig: &Signature, k: u32) -> Vec<usize> {
    (0..sig.factor_count())
        .filter(|&i| sig.order(i) == k)
        .collect()
}

/// Verifies that the normal closure `N(k)` of all factors of order `k` is
/// preserved by every standard generator: each image of a killed generator
/// must die in the quotient that deletes the order-`k` factors.
pub fn characteristic_report(sig: &Signature, k: u32) -> Result<Report> {
    let class = indices_with_order(sig, k);
    if class.is_empty() {
        return Err(Error::Hypothesis(format!(
            "order {k} does not occur in the signature"
        )));
    }
    let mut report = Report::new(format!("characteristic-N{k}"));
    let kinds: [(&str, Vec<Automorphism>); 3] = [
        ("factor-automorphisms", all_factor_autos(sig)),
        ("permutations", all_admissible_permutations(sig)),
        ("partial-conjugations", all_partial_conjs(sig)),
    ];
    let mut images = 0usize;
    for (name, gens) in kinds {
        let mut pass = true;
        let mut witness = String::new();
        for g in &gens {
            for &i in &class {
                let img = g.apply(&Word::generator(sig, i, 1)?)?;
                images += 1;
                if !img.delete_factors(&class).is_identity() {
                    pass = false;
                    if witness.is_empty() {
                        witness = format!(
                            "{} maps x{} to {img}, which survives the quotient",
                            format_tag(g.tag()),
                            i + 1
                        );
                    }
                }
            }
        }
        report.record(name, pass, witness);
    }
    report.note(format!("{images} generator images checked"));
    Ok(report)
}

/// The automorphism induced on the quotient that deletes the killed
/// factors. The kill set must be a union of whole order classes, which
/// makes the killed normal closure characteristic; this is re-verified via
/// [`characteristic_report`] before the quotient is formed.
pub fn induced_automorphism(f: &Automorphism, kill: &[usize]) -> Result<Automorphism> {
    let sig = f.signature();
    let mut killed = vec![false; sig.factor_count()];
    for &i in kill {
        sig.check_index(i)?;
        killed[i] = true;
    }
    let mut killed_orders: Vec<u32> = Vec::new();
    for i in 0..sig.factor_count() {
        if !killed[i] {
            continue;
        }
        let n = sig.order(i);
        if let Some(j) = (0..sig.factor_count()).find(|&j| sig.order(j) == n && !killed[j]) {
            return Err(Error::Hypothesis(format!(
                "kill set is not a union of order classes: x{} (order {n}) is killed but x{} is kept",
                i + 1,
                j + 1
            )));
        }
        if !killed_orders.contains(&n) {
            killed_orders.push(n);
        }
    }
    for &n in &killed_orders {
        let report = characteristic_report(sig, n)?;
        if !report.all_pass() {
            return Err(Error::Hypothesis(format!(
                "normal closure of the order-{n} factors is not characteristic"
            )));
        }
    }
    let keep: Vec<usize> = (0..sig.factor_count()).filter(|&i| !killed[i]).collect();
    if keep.is_empty() {
        return Err(Error::Hypothesis(
            "kill set removes every factor".into(),
        ));
    }
    let quotient = Signature::new(keep.iter().map(|&i| sig.order(i)).collect())?;
    let mut new_index = vec![usize::MAX; sig.factor_count()];
    for (new, &old) in keep.iter().enumerate() {
        new_index[old] = new;
    }
    let kill_list: Vec<usize> = (0..sig.factor_count()).filter(|&i| killed[i]).collect();
    let images: Vec<Word> = keep
        .iter()
        .map(|&i| {
            let img = f.apply(&Word::generator(sig, i, 1)?)?.delete_factors(&kill_list);
            let letters: Vec<(usize, i64)> = img
                .syllables()
                .iter()
                .map(|s| (new_index[s.factor], s.exp as i64))
                .collect();
            Word::from_letters(&quotient, &letters)
        })
        .collect::<Result<_>>()?;
    Automorphism::from_images(&quotient, images)
}

/// Verifies that killing every factor whose order is not in `keep_orders`
/// induces a map under which each standard generator of the quotient's
/// automorphism group has a standard preimage.
pub fn induced_surjectivity_report(sig: &Signature, keep_orders: &[u32]) -> Result<Report> {
    for &n in keep_orders {
        if indices_with_order(sig, n).is_empty() {
            return Err(Error::Hypothesis(format!(
                "order {n} does not occur in the signature"
            )));
        }
    }
    let keep: Vec<usize> = (0..sig.factor_count())
        .filter(|&i| keep_orders.contains(&sig.order(i)))
        .collect();
    let kill: Vec<usize> = (0..sig.factor_count())
        .filter(|&i| !keep_orders.contains(&sig.order(i)))
        .collect();
    let quotient = Signature::new(keep.iter().map(|&i| sig.order(i)).collect())?;
    let mut report = Report::new("induced-surjectivity");
    report.note(format!(
        "quotient signature ({quotient}) from ({sig})"
    ));

    let check_kind = |report: &mut Report,
                      name: &str,
                      targets: Vec<Automorphism>,
                      preimage: &dyn Fn(&Automorphism) -> Result<Automorphism>|
     -> Result<()> {
        let mut pass = true;
        let mut witness = String::new();
        let count = targets.len();
        for t in &targets {
            let candidate = preimage(t)?;
            if induced_automorphism(&candidate, &kill)? != *t {
                pass = false;
                if witness.is_empty() {
                    witness = format!("no standard preimage found for {}", format_tag(t.tag()));
                }
            }
        }
        report.record(name, pass, witness);
        report.note(format!("{count} {name} covered"));
        Ok(())
    };

    let lift_factor = |t: &Automorphism| -> Result<Automorphism> {
        let crate::aut::Tag::FactorAuto(exps) = t.tag() else {
            unreachable!("factor automorphism listings are tagged");
        };
        let mut full = vec![1i64; sig.factor_count()];
        for (new, &old) in keep.iter().enumerate() {
            full[old] = exps[new] as i64;
        }
        Automorphism::factor_auto(sig, &full)
    };
    let lift_perm = |t: &Automorphism| -> Result<Automorphism> {
        let crate::aut::Tag::Permutation(sigma) = t.tag() else {
            unreachable!("permutation listings are tagged");
        };
        let mut full: Vec<usize> = (0..sig.factor_count()).collect();
        for (new, &old) in keep.iter().enumerate() {
            full[old] = keep[sigma[new]];
        }
        Automorphism::permutation(sig, &full)
    };
    let lift_pc = |t: &Automorphism| -> Result<Automorphism> {
        let crate::aut::Tag::PartialConj { i, j } = t.tag() else {
            unreachable!("partial conjugation listings are tagged");
        };
        Automorphism::partial_conj(sig, keep[*i], keep[*j])
    };

    check_kind(
        &mut report,
        "factor-automorphisms",
        all_factor_autos(&quotient),
        &lift_factor,
    )?;
    check_kind(
        &mut report,
        "permutations",
        all_admissible_permutations(&quotient),
        &lift_perm,
    )?;
    check_kind(
        &mut report,
        "partial-conjugations",
        all_partial_conjs(&quotient),
        &lift_pc,
    )?;
    Ok(report)
}

/// One partial conjugation `x_moved -> x_op x_moved x_op^-1`, printed with
/// 1-based indices. The conjugating letter `x_op` is called the operating
/// letter.
#[derive(Clone, Copy, PartialEq, Eq, Serialize, Debug)]
pub struct Pc {
    pub moved: usize,
    pub operating: usize,
}

impl Pc {
    fn new0(moved: usize, operating: usize) -> Pc {
        Pc {
            moved: moved + 1,
            operating: operating + 1,
        }
    }

    pub fn label(&self) -> String {
        format!("pc({},{})", self.moved, self.operating)
    }

    pub fn to_automorphism(&self, sig: &Signature) -> Result<Automorphism> {
        Automorphism::partial_conj(sig, self.moved - 1, self.operating - 1)
    }
}

/// Why a pair of partial conjugations commutes outright.
#[derive(Clone, Copy, PartialEq, Eq, Serialize, Debug)]
#[serde(rename_all = "kebab-case")]
pub enum CommuteReason {
    /// Both conjugate by the same letter.
    SameOperatingLetter,
    /// The two pairs of indices do not meet.
    DisjointIndices,
}

/// One verified commutation between two corner elements of a case diagram.
#[derive(Clone, Copy, PartialEq, Eq, Serialize, Debug)]
pub struct CornerCheck {
    pub left: Pc,
    pub right: Pc,
    pub commutes: bool,
}

/// How one pair of partial conjugations is shown to share a fixed point.
/// Every numeric index is 1-based.
#[derive(Clone, PartialEq, Eq, Serialize, Debug)]
#[serde(tag = "case", rename_all = "kebab-case")]
pub enum CaseJustification {
    /// The pair commutes outright; `verified` is the composition check.
    Commuting { reason: CommuteReason, verified: bool },
    /// Same moved letter, different operating letters: a fresh index `l` of
    /// the moved letter's order builds a square of four commuting corners,
    /// and the transposition swapping the moved letter with `x_l` carries
    /// one diagonal to the other.
    Case1 {
        l: usize,
        corners: Vec<CornerCheck>,
        conjugation_verified: bool,
    },
    /// Mutual conjugations: fresh indices `k, l` of matching orders give a
    /// disjoint mirror pair, related by the double transposition.
    Case2 {
        k: usize,
        l: usize,
        corners: Vec<CornerCheck>,
        conjugation_verified: bool,
    },
    /// One operating letter is the other's moved letter: a fresh index `l`
    /// of the operating letter's order completes the square. Three corners
    /// commute; the fourth pair shares a fixed point by a nested Case 1.
    Case3 {
        l: usize,
        corners: Vec<CornerCheck>,
        nested_case1: Box<CaseJustification>,
        conjugation_verified: bool,
    },
}

impl CaseJustification {
    /// Whether every commutation and conjugation claim checked out.
    pub fn verified(&self) -> bool {
        match self {
            CaseJustification::Commuting { verified, .. } => *verified,
            CaseJustification::Case1 {
                corners,
                conjugation_verified,
                ..
            }
            | CaseJustification::Case2 {
                corners,
                conjugation_verified,
                ..
            } => corners.iter().all(|c| c.commutes) && *conjugation_verified,
            CaseJustification::Case3 {
                corners,
                nested_case1,
                conjugation_verified,
                ..
            } => {
                corners.iter().all(|c| c.commutes)
                    && nested_case1.verified()
                    && *conjugation_verified
            }
        }
    }

    /// Compact rendering for report witnesses, 1-based.
    pub fn summary(&self) -> String {
        match self {
            CaseJustification::Commuting { reason, .. } => match reason {
                CommuteReason::SameOperatingLetter => "commuting(same-operating-letter)".into(),
                CommuteReason::DisjointIndices => "commuting(disjoint-indices)".into(),
            },
            CaseJustification::Case1 { l, .. } => format!("case1 l={l}"),
            CaseJustification::Case2 { k, l, .. } => format!("case2 k={k} l={l}"),
            CaseJustification::Case3 { l, nested_case1, .. } => {
                format!("case3 l={l} nested[{}]", nested_case1.summary())
            }
        }
    }
}

/// Justification for one unordered pair of partial conjugations.
#[derive(Clone, PartialEq, Eq, Serialize, Debug)]
pub struct PairCertificate {
    pub first: Pc,
    pub second: Pc,
    pub case: CaseJustification,
}

/// Per-pair fixed-point justifications for all partial conjugations of a
/// signature in which every order occurs at least four times.
#[derive(Clone, PartialEq, Eq, Serialize, Debug)]
pub struct FaCertificate {
    pub signature: Signature,
    pub pairs: Vec<PairCertificate>,
}

impl FaCertificate {
    pub fn all_verified(&self) -> bool {
        self.pairs.iter().all(|p| p.case.verified())
    }

    /// One check per pair, named `pc(i,j)~pc(r,s)`.
    pub fn to_report(&self) -> Report {
        let mut report = Report::new(format!("fa-certificate-{}", self.signature));
        for pair in &self.pairs {
            report.record(
                format!("{}~{}", pair.first.label(), pair.second.label()),
                pair.case.verified(),
                pair.case.summary(),
            );
        }
        let mut by_case: BTreeMap<&'static str, usize> = BTreeMap::new();
        for pair in &self.pairs {
            let key = match &pair.case {
                CaseJustification::Commuting { .. } => "commuting",
                CaseJustification::Case1 { .. } => "case1",
                CaseJustification::Case2 { .. } => "case2",
                CaseJustification::Case3 { .. } => "case3",
            };
            *by_case.entry(key).or_insert(0) += 1;
        }
        let tally: Vec<String> = by_case.iter().map(|(k, v)| format!("{k}={v}")).collect();
        report.note(format!("{} pairs: {}", self.pairs.len(), tally.join(" ")));
        report
    }
}

fn commutes(sig: &Signature, a: Pc, b: Pc) -> Result<bool> {
    a.to_automorphism(sig)?.commutes_with(&b.to_automorphism(sig)?)
}

fn corner(sig: &Signature, left: Pc, right: Pc) -> Result<CornerCheck> {
    Ok(CornerCheck {
        left,
        right,
        commutes: commutes(sig, left, right)?,
    })
}

fn transposition(sig: &Signature, a: usize, b: usize) -> Result<Automorphism> {
    let mut perm: Vec<usize> = (0..sig.factor_count()).collect();
    perm.swap(a, b);
    Automorphism::permutation(sig, &perm)
}

/// Checks `pi a pi^-1 == b` for both given pairs.
fn conjugates_to(
    sig: &Signature,
    pi: &Automorphism,
    pairs: &[(Pc, Pc)],
) -> Result<bool> {
    let pi_inv = pi.inverse()?;
    for (a, b) in pairs {
        let conj = pi.compose(&a.to_automorphism(sig)?)?.compose(&pi_inv)?;
        if conj != b.to_automorphism(sig)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Smallest index outside `excluded` whose order is `n`.
fn fresh_index(sig: &Signature, n: u32, excluded: &[usize]) -> Result<usize> {
    (0..sig.factor_count())
        .find(|&l| sig.order(l) == n && !excluded.contains(&l))
        .ok_or_else(|| {
            Error::Hypothesis(format!(
                "no factor of order {n} left outside {:?}",
                excluded.iter().map(|&i| i + 1).collect::<Vec<_>>()
            ))
        })
}

/// Same moved letter `x_i`, operating letters `x_j != x_s`.
fn case1(sig: &Signature, i: usize, j: usize, s: usize) -> Result<CaseJustification> {
    let l = fresh_index(sig, sig.order(i), &[i, j, s])?;
    let (a1, a2) = (Pc::new0(i, j), Pc::new0(i, s));
    let (b1, b2) = (Pc::new0(l, j), Pc::new0(l, s));
    let corners = vec![
        corner(sig, a1, b1)?,
        corner(sig, a2, b2)?,
        corner(sig, a1, b2)?,
        corner(sig, a2, b1)?,
    ];
    let pi = transposition(sig, i, l)?;
    let conjugation_verified = conjugates_to(sig, &pi, &[(a1, b1), (a2, b2)])?;
    Ok(CaseJustification::Case1 {
        l: l + 1,
        corners,
        conjugation_verified,
    })
}

/// Mutual pair `pc(i,j)` and `pc(j,i)`.
fn case2(sig: &Signature, i: usize, j: usize) -> Result<CaseJustification> {
    let k = fresh_index(sig, sig.order(i), &[i, j])?;
    let l = fresh_index(sig, sig.order(j), &[i, j, k])?;
    let (a1, a2) = (Pc::new0(i, j), Pc::new0(j, i));
    let (b1, b2) = (Pc::new0(k, l), Pc::new0(l, k));
    let corners = vec![
        corner(sig, a1, b1)?,
        corner(sig, a2, b2)?,
        corner(sig, a1, b2)?,
        corner(sig, a2, b1)?,
    ];
    let mut perm: Vec<usize> = (0..sig.factor_count()).collect();
    perm.swap(i, k);
    perm.swap(j, l);
    let pi = Automorphism::permutation(sig, &perm)?;
    let conjugation_verified = conjugates_to(sig, &pi, &[(a1, b1), (a2, b2)])?;
    Ok(CaseJustification::Case2 {
        k: k + 1,
        l: l + 1,
        corners,
        conjugation_verified,
    })
}

/// Chained pair `pc(i,j)` and `pc(j,s)` with `i != s`. The square closes
/// with `b1 = pc(i,l)` and `b2 = pc(l,s)`; the pair `(a1, b1)` repeats
/// Case 1 one level down.
fn case3(sig: &Signature, i: usize, j: usize, s: usize) -> Result<CaseJustification> {
    let l = fresh_index(sig, sig.order(j), &[i, j, s])?;
    let (a1, a2) = (Pc::new0(i, j), Pc::new0(j, s));
    let (b1, b2) = (Pc::new0(i, l), Pc::new0(l, s));
    let corners = vec![
        corner(sig, a2, b2)?,
        corner(sig, a1, b2)?,
        corner(sig, a2, b1)?,
    ];
    let nested = case1(sig, i, j, l)?;
    let pi = transposition(sig, j, l)?;
    let conjugation_verified = conjugates_to(sig, &pi, &[(a1, b1), (a2, b2)])?;
    Ok(CaseJustification::Case3 {
        l: l + 1,
        corners,
        nested_case1: Box::new(nested),
        conjugation_verified,
    })
}

/// Classifies one unordered pair of distinct partial conjugations, 0-based
/// inputs.
fn classify(sig: &Signature, (i, j): (usize, usize), (r, s): (usize, usize)) -> Result<CaseJustification> {
    let disjoint = i != r && i != s && j != r && j != s;
    if j == s || disjoint {
        let reason = if j == s {
            CommuteReason::SameOperatingLetter
        } else {
            CommuteReason::DisjointIndices
        };
        let verified = commutes(sig, Pc::new0(i, j), Pc::new0(r, s))?;
        Ok(CaseJustification::Commuting { reason, verified })
    } else if i == r {
        case1(sig, i, j, s)
    } else if i == s && j == r {
        case2(sig, i, j)
    } else if j == r {
        case3(sig, i, j, s)
    } else if i == s {
        // Same shape with the roles of the two conjugations exchanged.
        case3(sig, r, s, j)
    } else {
        unreachable!("pair classification is exhaustive")
    }
}

/// Builds the per-pair fixed-point justifications for every unordered pair
/// of partial conjugations. Requires every order to occur at least four
/// times; the error names the first order that falls short.
pub fn fa_case_certificate(sig: &Signature) -> Result<FaCertificate> {
    let mut seen: Vec<u32> = Vec::new();
    for i in 0..sig.factor_count() {
        let n = sig.order(i);
        if seen.contains(&n) {
            continue;
        }
        seen.push(n);
        let count = indices_with_order(sig, n).len();
        if count < 4 {
            return Err(Error::Hypothesis(format!(
                "order {n} occurs {count} times, the certificate needs at least 4"
            )));
        }
    }
    let m = sig.factor_count();
    let mut pcs: Vec<(usize, usize)> = Vec::new();
    for i in 0..m {
        for j in 0..m {
            if i != j {
                pcs.push((i, j));
            }
        }
    }
    let mut pairs = Vec::new();
    for a in 0..pcs.len() {
        for b in (a + 1)..pcs.len() {
            pairs.push(PairCertificate {
                first: Pc::new0(pcs[a].0, pcs[a].1),
                second: Pc::new0(pcs[b].0, pcs[b].1),
                case: classify(sig, pcs[a], pcs[b])?,
            });
        }
    }
    Ok(FaCertificate {
        signature: sig.clone(),
        pairs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn sig(orders: &[u32]) -> Signature {
        Signature::new(orders.to_vec()).unwrap()
    }

    #[test]
    fn census_examples() {
        let c = conjugacy_census(&sig(&[2, 2, 3]));
        assert_eq!(c.count(2), 2);
        assert_eq!(c.count(3), 2);
        assert_eq!(c.summary(), "c(2)=2 c(3)=2");

        let c = conjugacy_census(&sig(&[4, 2]));
        assert_eq!(c.count(2), 2);
        assert_eq!(c.count(4), 2);
        assert_eq!(c.count(3), 0);

        let c = conjugacy_census(&sig(&[2]));
        assert_eq!(c.summary(), "c(2)=1");
    }

    #[test]
    fn closed_form_census_matches_brute_force() {
        for m in 1..=3usize {
            let mut orders = vec![2u32; m];
            loop {
                let s = sig(&orders);
                assert_eq!(
                    conjugacy_census(&s),
                    conjugacy_census_brute(&s, 3).unwrap(),
                    "census mismatch on ({s})"
                );
                // Odometer over orders 2..=4.
                let mut pos = 0;
                while pos < m && orders[pos] == 4 {
                    orders[pos] = 2;
                    pos += 1;
                }
                if pos == m {
                    break;
                }
                orders[pos] += 1;
            }
        }
    }

    #[test]
    fn brute_force_census_rejects_oversized_enumerations() {
        let err = conjugacy_census_brute(&sig(&[6, 6, 6, 6, 6]), 6).unwrap_err();
        assert!(matches!(err, Error::Unsupported(_)));
    }

    #[test]
    fn occurrence_examples() {
        let o = occurrences(&sig(&[2, 2, 3]), 2).unwrap();
        assert_eq!(o.corrected, 2);
        assert_eq!(o.literal, 2);
        assert!(!o.formulas_disagree());

        // phi(4) = 2 makes the plain difference undercount.
        let o = occurrences(&sig(&[4, 2]), 2).unwrap();
        assert_eq!(o.corrected, 1);
        assert_eq!(o.literal, 0);
        assert!(o.formulas_disagree());

        let o = occurrences(&sig(&[3, 3, 3]), 3).unwrap();
        assert_eq!(o.corrected, 3);
        assert_eq!(o.literal, 6);
        assert!(o.formulas_disagree());

        assert_eq!(occurrences(&sig(&[4, 2]), 8).unwrap().corrected, 0);
        assert!(occurrences(&sig(&[4, 2]), 1).is_err());
    }

    #[test]
    fn occurrences_recover_the_signature_on_random_input() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..200 {
            let m = rng.gen_range(1..=6);
            let orders: Vec<u32> = (0..m).map(|_| rng.gen_range(2..=12)).collect();
            let s = sig(&orders);
            for k in 2..=12u64 {
                let expected = orders.iter().filter(|&&n| n as u64 == k).count() as u64;
                let o = occurrences(&s, k).unwrap();
                assert_eq!(o.corrected, expected, "sig ({s}), k={k}");
            }
        }
    }

    #[test]
    fn occurrence_table_lists_census_orders() {
        let table = occurrence_table(&sig(&[4, 2])).unwrap();
        let orders: Vec<u64> = table.iter().map(|o| o.order).collect();
        assert_eq!(orders, vec![2, 4]);
        assert_eq!(table[0].corrected, 1);
        assert_eq!(table[1].corrected, 1);
    }

    #[test]
    fn characteristic_reports_pass_on_small_signatures() {
        for orders in [vec![2, 2, 3], vec![4, 2], vec![2, 2, 2], vec![3, 3, 4, 4]] {
            let s = sig(&orders);
            let mut seen = Vec::new();
            for &n in s.orders() {
                if seen.contains(&n) {
                    continue;
                }
                seen.push(n);
                let report = characteristic_report(&s, n).unwrap();
                assert!(report.all_pass(), "({s}), k={n}: {report}");
            }
        }
        assert!(characteristic_report(&sig(&[2, 2, 3]), 5).is_err());
    }

    #[test]
    fn quotient_membership_of_single_letters() {
        // Deleting the order-2 factors sends x3 to itself, so x3 is not in
        // the normal closure N(2).
        let s = sig(&[2, 2, 3]);
        let x3 = Word::generator(&s, 2, 1).unwrap();
        assert!(!x3.delete_factors(&[0, 1]).is_identity());
        // x3 x1 x3^-1 lies in N(2).
        let conj = Automorphism::partial_conj(&s, 0, 2)
            .unwrap()
            .apply(&Word::generator(&s, 0, 1).unwrap())
            .unwrap();
        assert!(conj.delete_factors(&[0, 1]).is_identity());
    }

    #[test]
    fn induced_automorphism_examples() {
        let s = sig(&[2, 2, 3]);
        let quotient = sig(&[2, 2]);
        let pc = Automorphism::partial_conj(&s, 0, 2).unwrap();
        assert_eq!(
            induced_automorphism(&pc, &[2]).unwrap(),
            Automorphism::identity(&quotient)
        );
        assert_eq!(
            induced_automorphism(&Automorphism::identity(&s), &[2]).unwrap(),
            Automorphism::identity(&quotient)
        );

        let s = sig(&[2, 2, 2, 3]);
        let pc = Automorphism::partial_conj(&s, 0, 1).unwrap();
        assert_eq!(
            induced_automorphism(&pc, &[3]).unwrap(),
            Automorphism::partial_conj(&sig(&[2, 2, 2]), 0, 1).unwrap()
        );
    }

    #[test]
    fn induced_automorphism_rejects_partial_classes() {
        let s = sig(&[2, 2, 3]);
        let f = Automorphism::identity(&s);
        let err = induced_automorphism(&f, &[0]).unwrap_err();
        assert!(matches!(err, Error::Hypothesis(_)));
        assert!(induced_automorphism(&f, &[0, 1, 2]).is_err());
        assert!(induced_automorphism(&f, &[7]).is_err());
    }

    #[test]
    fn induced_map_is_functorial() {
        let s = sig(&[2, 2, 3, 3]);
        let kill = [2usize, 3];
        let mut pool = all_factor_autos(&s);
        pool.extend(all_admissible_permutations(&s));
        pool.extend(all_partial_conjs(&s));
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let random_word = |rng: &mut ChaCha8Rng| {
            let mut f = Automorphism::identity(&s);
            for _ in 0..rng.gen_range(0..=5) {
                f = f.compose(&pool[rng.gen_range(0..pool.len())]).unwrap();
            }
            f
        };
        for _ in 0..200 {
            let f = random_word(&mut rng);
            let g = random_word(&mut rng);
            let lhs = induced_automorphism(&f.compose(&g).unwrap(), &kill).unwrap();
            let rhs = induced_automorphism(&f, &kill)
                .unwrap()
                .compose(&induced_automorphism(&g, &kill).unwrap())
                .unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn surjectivity_report_on_pure_quotients() {
        // Order 2 occurs twice: the quotient is the two-factor pure product.
        let report = induced_surjectivity_report(&sig(&[2, 2, 3]), &[2]).unwrap();
        assert!(report.all_pass(), "{report}");

        // Order 3 occurs three times among mixed factors.
        let report = induced_surjectivity_report(&sig(&[3, 2, 3, 3]), &[3]).unwrap();
        assert!(report.all_pass(), "{report}");

        // Two orders occurring once each: keep both.
        let report = induced_surjectivity_report(&sig(&[4, 2, 2, 5]), &[4, 5]).unwrap();
        assert!(report.all_pass(), "{report}");

        assert!(induced_surjectivity_report(&sig(&[2, 2]), &[3]).is_err());
    }

    #[test]
    fn certificate_labels_the_expected_cases() {
        let s = sig(&[2, 2, 2, 2]);
        let cert = fa_case_certificate(&s).unwrap();
        assert!(cert.all_verified());
        let find = |f: (usize, usize), g: (usize, usize)| {
            cert.pairs
                .iter()
                .find(|p| {
                    (p.first.moved, p.first.operating) == f
                        && (p.second.moved, p.second.operating) == g
                })
                .map(|p| p.case.clone())
                .unwrap()
        };
        // pc(1,2) vs pc(1,3): same moved letter.
        match find((1, 2), (1, 3)) {
            CaseJustification::Case1 { l, corners, .. } => {
                assert_eq!(l, 4);
                assert_eq!(corners.len(), 4);
            }
            other => panic!("expected case1, got {other:?}"),
        }
        // pc(1,2) vs pc(2,1): mutual.
        match find((1, 2), (2, 1)) {
            CaseJustification::Case2 { k, l, .. } => {
                assert_eq!((k, l), (3, 4));
            }
            other => panic!("expected case2, got {other:?}"),
        }
        // pc(1,2) vs pc(2,3): chained.
        match find((1, 2), (2, 3)) {
            CaseJustification::Case3 { l, nested_case1, .. } => {
                assert_eq!(l, 4);
                assert!(matches!(*nested_case1, CaseJustification::Case1 { .. }));
            }
            other => panic!("expected case3, got {other:?}"),
        }
        // pc(1,2) vs pc(3,4): disjoint.
        assert!(matches!(
            find((1, 2), (3, 4)),
            CaseJustification::Commuting {
                reason: CommuteReason::DisjointIndices,
                ..
            }
        ));
        // pc(1,3) vs pc(2,3): same operating letter.
        assert!(matches!(
            find((1, 3), (2, 3)),
            CaseJustification::Commuting {
                reason: CommuteReason::SameOperatingLetter,
                ..
            }
        ));
        // pc(1,2) vs pc(3,1): swapped chain, still case 3.
        assert!(matches!(
            find((1, 2), (3, 1)),
            CaseJustification::Case3 { .. }
        ));
    }

    #[test]
    fn certificates_verify_on_uniform_signatures() {
        for orders in [vec![2u32; 4], vec![3u32; 4], vec![2, 2, 3, 3, 2, 2, 3, 3]] {
            let s = sig(&orders);
            let cert = fa_case_certificate(&s).unwrap();
            assert!(cert.all_verified(), "({s})");
            let report = cert.to_report();
            assert!(report.all_pass());
            let expected_pairs = {
                let p = orders.len() * (orders.len() - 1);
                p * (p - 1) / 2
            };
            assert_eq!(cert.pairs.len(), expected_pairs);
        }
    }

    #[test]
    fn certificate_rejects_scarce_orders() {
        let err = fa_case_certificate(&sig(&[2, 2, 3, 3, 3, 3])).unwrap_err();
        let Error::Hypothesis(msg) = err else {
            panic!("expected a hypothesis error");
        };
        assert!(msg.contains("order 2"), "{msg}");
        assert!(msg.contains("occurs 2 times"), "{msg}");
    }

    #[test]
    fn certificate_serializes_with_case_tags() {
        let cert = fa_case_certificate(&sig(&[2, 2, 2, 2])).unwrap();
        let json = serde_json::to_string(&cert).unwrap();
        assert!(json.contains("\"case\":\"case1\""));
        assert!(json.contains("\"case\":\"commuting\""));
        assert!(json.contains("\"reason\":\"same-operating-letter\""));
        assert!(json.contains("\"orders\":[2,2,2,2]"));
    }

    #[test]
    fn mismatch_flag_token_is_stable() {
        assert_eq!(FORMULA_MISMATCH_FLAG, "PAPER-FORMULA-MISMATCH");
    }
}
