//! Words in alternating-syllable normal form and the group operations on
//! them.
//!
//! A word over signature `(n_1, ..., n_m)` is a sequence of syllables
//! `x_i^e` with `1 <= e <= n_i - 1` in which adjacent syllables come from
//! distinct factors. The empty sequence is the identity. Every group element
//! has exactly one such representative, so `==` decides the word problem.

use crate::sig::Signature;
use crate::{arith, Error, Result};
use std::collections::VecDeque;
use std::fmt;
use std::sync::OnceLock;

/// Default cap on syllable counts; guards fuzzing against runaway growth.
const DEFAULT_MAX_WORD_LEN: usize = 1_000_000;

/// The active word-length cap: `FPCYC_MAX_WORD_LEN` if set, otherwise 10^6.
/// Read once per process.
pub fn max_word_len() -> usize {
    static CAP: OnceLock<usize> = OnceLock::new();
    *CAP.get_or_init(|| {
        std::env::var("FPCYC_MAX_WORD_LEN")
            .ok()
            .and_then(|v| v.parse().ok())
            .unwrap_or(DEFAULT_MAX_WORD_LEN)
    })
}

pub(crate) fn check_len(len: usize) -> Result<()> {
    let cap = max_word_len();
    if len > cap {
        Err(Error::WordTooLong { len, cap })
    } else {
        Ok(())
    }
}

/// One maximal factor block `x_factor^exp` with `1 <= exp <= n_factor - 1`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Syllable {
    pub factor: usize,
    pub exp: u32,
}

/// A group element in normal form, together with its ambient signature.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Word {
    sig: Signature,
    syllables: Vec<Syllable>,
}

/// Element order: `n_i / gcd(e, n_i)` for conjugates of factor elements,
/// infinite as soon as the cyclic core has two or more syllables.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Order {
    Finite(u64),
    Infinite,
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(k) => write!(f, "{k}"),
            Order::Infinite => write!(f, "infinite"),
        }
    }
}

/// Appends `x_factor^exp` to `out`, merging with the last syllable when the
/// factors match and dropping trivial blocks. Keeps `out` in normal form
/// provided it was; cascading cancellation happens across successive calls.
pub(crate) fn push_reduced(sig: &Signature, out: &mut Vec<Syllable>, factor: usize, exp: i64) {
    let n = sig.order(factor) as i64;
    let mut e = exp.rem_euclid(n);
    if let Some(last) = out.last() {
        if last.factor == factor {
            e = (e + last.exp as i64) % n;
            out.pop();
        }
    }
    if e != 0 {
        out.push(Syllable {
            factor,
            exp: e as u32,
        });
    }
}

impl Word {
    /// Wraps syllables that are already known to be in normal form.
    pub(crate) fn from_normal_parts(sig: Signature, syllables: Vec<Syllable>) -> Word {
        debug_assert!(syllables.windows(2).all(|p| p[0].factor != p[1].factor));
        debug_assert!(syllables
            .iter()
            .all(|s| s.exp >= 1 && s.exp < sig.order(s.factor)));
        Word { sig, syllables }
    }

    pub fn identity(sig: &Signature) -> Word {
        Word {
            sig: sig.clone(),
            syllables: Vec::new(),
        }
    }

    /// `x_i^e` with an arbitrary integer exponent, normalized mod `n_i`.
    pub fn generator(sig: &Signature, i: usize, e: i64) -> Result<Word> {
        Word::from_letters(sig, &[(i, e)])
    }

    /// Builds the normal form of a product of arbitrary powers of generators.
    /// Exponents may be any integers; trivial blocks vanish.
    pub fn from_letters(sig: &Signature, letters: &[(usize, i64)]) -> Result<Word> {
        check_len(letters.len())?;
        let mut syllables = Vec::with_capacity(letters.len());
        for &(i, e) in letters {
            sig.check_index(i)?;
            push_reduced(sig, &mut syllables, i, e);
        }
        Ok(Word {
            sig: sig.clone(),
            syllables,
        })
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    pub fn syllables(&self) -> &[Syllable] {
        &self.syllables
    }

    /// Syllable count of the normal form.
    pub fn len(&self) -> usize {
        self.syllables.len()
    }

    pub fn is_identity(&self) -> bool {
        self.syllables.is_empty()
    }

    fn check_same_sig(&self, other: &Word) -> Result<()> {
        if self.sig == other.sig {
            Ok(())
        } else {
            Err(Error::SignatureMismatch(
                self.sig.to_string(),
                other.sig.to_string(),
            ))
        }
    }

    pub fn multiply(&self, other: &Word) -> Result<Word> {
        self.check_same_sig(other)?;
        check_len(self.len() + other.len())?;
        let mut syllables = self.syllables.clone();
        for s in &other.syllables {
            push_reduced(&self.sig, &mut syllables, s.factor, s.exp as i64);
        }
        Ok(Word {
            sig: self.sig.clone(),
            syllables,
        })
    }

    pub fn invert(&self) -> Word {
        let syllables = self
            .syllables
            .iter()
            .rev()
            .map(|s| Syllable {
                factor: s.factor,
                exp: self.sig.order(s.factor) - s.exp,
            })
            .collect();
        Word {
            sig: self.sig.clone(),
            syllables,
        }
    }

    pub fn pow(&self, k: i64) -> Result<Word> {
        let base = if k < 0 { self.invert() } else { self.clone() };
        let mut result = Word::identity(&self.sig);
        for _ in 0..k.unsigned_abs() {
            result = result.multiply(&base)?;
        }
        Ok(result)
    }

    /// Splits `self = conjugator * core * conjugator^-1` with `core`
    /// cyclically reduced: its first and last syllables come from distinct
    /// factors, or it has at most one syllable.
    pub fn cyclically_reduce(&self) -> (Word, Word) {
        let mut core: VecDeque<Syllable> = self.syllables.iter().copied().collect();
        let mut conj: Vec<Syllable> = Vec::new();
        while core.len() >= 2 && core.front().unwrap().factor == core.back().unwrap().factor {
            let s = core.pop_front().unwrap();
            let t = core.pop_back().unwrap();
            let n = self.sig.order(s.factor);
            let e = (s.exp + t.exp) % n;
            if e != 0 {
                core.push_back(Syllable {
                    factor: s.factor,
                    exp: e,
                });
            }
            // Successive stripped syllables alternate factors, so plain
            // appending keeps the conjugator in normal form.
            debug_assert!(conj.last().map_or(true, |p| p.factor != s.factor));
            conj.push(s);
        }
        (
            Word {
                sig: self.sig.clone(),
                syllables: core.into_iter().collect(),
            },
            Word {
                sig: self.sig.clone(),
                syllables: conj,
            },
        )
    }

    pub fn order(&self) -> Order {
        let (core, _) = self.cyclically_reduce();
        match core.syllables.as_slice() {
            [] => Order::Finite(1),
            [s] => {
                let n = self.sig.order(s.factor) as u64;
                Order::Finite(n / arith::gcd(s.exp as u64, n))
            }
            _ => Order::Infinite,
        }
    }

    /// Conjugacy test: single-syllable cores must be equal; longer cores must
    /// be cyclic rotations of each other; everything else is non-conjugate.
    pub fn is_conjugate(&self, other: &Word) -> Result<bool> {
        self.check_same_sig(other)?;
        let (a, _) = self.cyclically_reduce();
        let (b, _) = other.cyclically_reduce();
        Ok(match (a.len(), b.len()) {
            (0, 0) => true,
            (1, 1) => a.syllables == b.syllables,
            (la, lb) if la >= 2 && la == lb => (0..la).any(|r| {
                (0..la).all(|t| a.syllables[(r + t) % la] == b.syllables[t])
            }),
            _ => false,
        })
    }

    /// Exponent sum of factor-`i` syllables mod `n_i`; a homomorphism onto
    /// `Z/n_iZ` killing all other factors.
    pub fn project_to_factor(&self, i: usize) -> Result<u32> {
        self.sig.check_index(i)?;
        let n = self.sig.order(i) as u64;
        let sum: u64 = self
            .syllables
            .iter()
            .filter(|s| s.factor == i)
            .map(|s| s.exp as u64)
            .sum();
        Ok((sum % n) as u32)
    }

    /// Image in the quotient by the normal closure of the killed factors,
    /// written over the unchanged signature. Killed indices must be in range.
    pub fn delete_factors(&self, kill: &[usize]) -> Word {
        for &i in kill {
            assert!(i < self.sig.factor_count(), "kill index out of range");
        }
        let mut syllables = Vec::new();
        for s in &self.syllables {
            if !kill.contains(&s.factor) {
                push_reduced(&self.sig, &mut syllables, s.factor, s.exp as i64);
            }
        }
        Word {
            sig: self.sig.clone(),
            syllables,
        }
    }

    /// Parses `e` or `x<i>` / `x<i>^<e>` syllables joined by `*`, e.g.
    /// `x1^2*x3*x1^-4`. Exponents may be any integers; the result is
    /// normalized. Errors carry the byte position of the offending character.
    pub fn parse(sig: &Signature, text: &str) -> Result<Word> {
        let b = text.as_bytes();
        if b == b"e" {
            return Ok(Word::identity(sig));
        }
        let mut letters: Vec<(usize, i64)> = Vec::new();
        let mut pos = 0;
        loop {
            if b.get(pos) != Some(&b'x') {
                return Err(Error::Parse {
                    pos,
                    msg: "expected 'x'".into(),
                });
            }
            pos += 1;
            let (index, next) = parse_uint(b, pos, "factor index")?;
            if index == 0 || index > sig.factor_count() as i64 {
                return Err(Error::Parse {
                    pos,
                    msg: format!(
                        "factor index {index} out of range 1..={}",
                        sig.factor_count()
                    ),
                });
            }
            pos = next;
            let mut exp = 1i64;
            if b.get(pos) == Some(&b'^') {
                pos += 1;
                let negative = b.get(pos) == Some(&b'-');
                if negative {
                    pos += 1;
                }
                let (value, next) = parse_uint(b, pos, "exponent")?;
                exp = if negative { -value } else { value };
                pos = next;
            }
            letters.push((index as usize - 1, exp));
            if pos == b.len() {
                break;
            }
            if b[pos] != b'*' {
                return Err(Error::Parse {
                    pos,
                    msg: "expected '*' between syllables".into(),
                });
            }
            pos += 1;
        }
        check_len(letters.len())?;
        Word::from_letters(sig, &letters)
    }
}

/// All reduced words with at most `max_syllables` syllables, breadth-first
/// by syllable count, the identity first.
pub fn enumerate_reduced(sig: &Signature, max_syllables: usize) -> Vec<Word> {
    let mut out = vec![Word::identity(sig)];
    let mut layer = vec![Word::identity(sig)];
    for _ in 0..max_syllables {
        let mut next = Vec::new();
        for w in &layer {
            let last = w.syllables().last().map(|s| s.factor);
            for i in 0..sig.factor_count() {
                if Some(i) == last {
                    continue;
                }
                for e in 1..sig.order(i) {
                    let letter = Word::generator(sig, i, e as i64).expect("valid letter power");
                    next.push(w.multiply(&letter).expect("appending stays reduced"));
                }
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Number of words [`enumerate_reduced`] would yield, saturating at
/// `u64::MAX` so oversized signatures stay cheap to reject.
pub fn count_reduced(sig: &Signature, max_syllables: usize) -> u64 {
    if max_syllables == 0 {
        return 1;
    }
    let sum = |counts: &[u64]| counts.iter().fold(0u64, |acc, &c| acc.saturating_add(c));
    let m = sig.factor_count();
    let mut by_last: Vec<u64> = (0..m).map(|i| (sig.order(i) - 1) as u64).collect();
    let mut total = 1u64.saturating_add(sum(&by_last));
    for _ in 1..max_syllables {
        let layer_sum = sum(&by_last);
        by_last = (0..m)
            .map(|i| {
                layer_sum
                    .saturating_sub(by_last[i])
                    .saturating_mul((sig.order(i) - 1) as u64)
            })
            .collect();
        total = total.saturating_add(sum(&by_last));
    }
    total
}

fn parse_uint(b: &[u8], pos: usize, what: &str) -> Result<(i64, usize)> {
    let mut end = pos;
    while end < b.len() && b[end].is_ascii_digit() {
        end += 1;
    }
    if end == pos {
        return Err(Error::Parse {
            pos,
            msg: format!("expected {what}"),
        });
    }
    let digits = std::str::from_utf8(&b[pos..end]).expect("ascii digits");
    let value: i64 = digits.parse().map_err(|_| Error::Parse {
        pos,
        msg: format!("{what} too large"),
    })?;
    Ok((value, end))
}

impl fmt::Display for Word {
    /// Identity renders as `e`; exponents are always written, including `^1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.syllables.is_empty() {
            return write!(f, "e");
        }
        let parts: Vec<String> = self
            .syllables
            .iter()
            .map(|s| format!("x{}^{}", s.factor + 1, s.exp))
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

impl serde::Serialize for Word {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sig(orders: &[u32]) -> Signature {
        Signature::new(orders.to_vec()).unwrap()
    }

    fn w(s: &Signature, text: &str) -> Word {
        Word::parse(s, text).unwrap()
    }

    #[test]
    fn multiply_examples() {
        let s33 = sig(&[3, 3]);
        assert!(w(&s33, "x1").multiply(&w(&s33, "x1^2")).unwrap().is_identity());
        assert_eq!(
            w(&s33, "x1^1*x2^1").multiply(&w(&s33, "x2^2*x1^1")).unwrap(),
            w(&s33, "x1^2")
        );
        let s223 = sig(&[2, 2, 3]);
        assert!(w(&s223, "x3*x1")
            .multiply(&w(&s223, "x1*x3^2"))
            .unwrap()
            .is_identity());
    }

    #[test]
    fn multiply_rejects_signature_mismatch() {
        let a = w(&sig(&[3, 3]), "x1");
        let b = w(&sig(&[2, 3]), "x1");
        assert!(matches!(a.multiply(&b), Err(Error::SignatureMismatch(..))));
    }

    #[test]
    fn invert_examples() {
        let s33 = sig(&[3, 3]);
        assert!(Word::identity(&s33).invert().is_identity());
        assert_eq!(w(&s33, "x1^1*x2^2").invert(), w(&s33, "x2^1*x1^2"));
        let s42 = sig(&[4, 2]);
        assert_eq!(w(&s42, "x1^3*x2^1").invert(), w(&s42, "x2^1*x1^1"));
    }

    #[test]
    fn cyclic_reduction_examples() {
        let s33 = sig(&[3, 3]);
        let (core, conj) = w(&s33, "x1*x2*x1^2").cyclically_reduce();
        assert_eq!(core, w(&s33, "x2^1"));
        assert_eq!(conj, w(&s33, "x1^1"));

        let s22 = sig(&[2, 2]);
        let (core, conj) = w(&s22, "x1*x2").cyclically_reduce();
        assert_eq!(core, w(&s22, "x1^1*x2^1"));
        assert!(conj.is_identity());

        // Reduction runs to a fixed point: both the outer x2 pair and the
        // then-exposed x3 pair collapse.
        let s223 = sig(&[2, 2, 3]);
        let a = w(&s223, "x2*x3*x1*x3^2*x2");
        let (core, conj) = a.cyclically_reduce();
        assert_eq!(core, w(&s223, "x1^1"));
        assert_eq!(conj, w(&s223, "x2^1*x3^1"));
        let back = conj
            .multiply(&core)
            .unwrap()
            .multiply(&conj.invert())
            .unwrap();
        assert_eq!(back, a);
    }

    #[test]
    fn order_examples() {
        let s22 = sig(&[2, 2]);
        assert_eq!(w(&s22, "x1*x2").order(), Order::Infinite);
        let s42 = sig(&[4, 2]);
        assert_eq!(w(&s42, "x1^2").order(), Order::Finite(2));
        let s33 = sig(&[3, 3]);
        let a = w(&s33, "x2*x1*x2^2");
        assert_eq!(a.order(), Order::Finite(3));
        assert!(a.pow(3).unwrap().is_identity());
        assert!(!a.pow(1).unwrap().is_identity());
    }

    #[test]
    fn conjugacy_examples() {
        let s33 = sig(&[3, 3]);
        assert!(!w(&s33, "x1").is_conjugate(&w(&s33, "x1^2")).unwrap());
        assert!(w(&s33, "x1").is_conjugate(&w(&s33, "x2*x1*x2^2")).unwrap());
        let s222 = sig(&[2, 2, 2]);
        assert!(w(&s222, "x1*x2").is_conjugate(&w(&s222, "x2*x1")).unwrap());
        assert!(!w(&s222, "x1*x2").is_conjugate(&w(&s222, "x1*x3")).unwrap());
    }

    #[test]
    fn projection_examples() {
        let s33 = sig(&[3, 3]);
        assert_eq!(w(&s33, "x1*x2*x1").project_to_factor(0).unwrap(), 2);
        assert_eq!(w(&s33, "x1").project_to_factor(1).unwrap(), 0);
        let s42 = sig(&[4, 2]);
        assert_eq!(w(&s42, "x1^3*x2*x1^2").project_to_factor(0).unwrap(), 1);
        assert!(w(&s42, "x1").project_to_factor(5).is_err());
    }

    #[test]
    fn delete_factors_examples() {
        let s223 = sig(&[2, 2, 3]);
        assert!(w(&s223, "x3*x1*x3^2").delete_factors(&[0, 1]).is_identity());
        assert_eq!(
            w(&s223, "x1*x3*x2").delete_factors(&[2]),
            w(&s223, "x1^1*x2^1")
        );
        let a = w(&s223, "x1*x3*x2");
        assert_eq!(a.delete_factors(&[]), a);
    }

    #[test]
    fn parse_normalizes_and_reports_positions() {
        let s42 = sig(&[4, 2]);
        assert_eq!(w(&s42, "x1^2*x1^2"), Word::identity(&s42));
        assert_eq!(w(&s42, "x1^-1"), w(&s42, "x1^3"));
        assert_eq!(w(&s42, "x1^0"), Word::identity(&s42));
        assert_eq!(w(&s42, "x1"), w(&s42, "x1^1"));

        match Word::parse(&s42, "x3") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 1),
            other => panic!("expected parse error, got {other:?}"),
        }
        match Word::parse(&s42, "x1^2 x2") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("expected parse error, got {other:?}"),
        }
        match Word::parse(&s42, "x1^") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 3),
            other => panic!("expected parse error, got {other:?}"),
        }
        match Word::parse(&s42, "") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 0),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn display_always_writes_exponents() {
        let s42 = sig(&[4, 2]);
        assert_eq!(w(&s42, "x1*x2").to_string(), "x1^1*x2^1");
        assert_eq!(Word::identity(&s42).to_string(), "e");
    }

    prop_compose! {
        fn arb_sig()(orders in prop::collection::vec(2u32..=6, 1..=5)) -> Signature {
            Signature::new(orders).unwrap()
        }
    }

    prop_compose! {
        fn arb_word_over(s: Signature)(
            letters in prop::collection::vec((0usize..s.factor_count(), -8i64..=8), 0..12)
        ) -> Word {
            Word::from_letters(&s, &letters).unwrap()
        }
    }

    fn arb_words(count: usize) -> impl Strategy<Value = Vec<Word>> {
        arb_sig().prop_flat_map(move |s| prop::collection::vec(arb_word_over(s), count))
    }

    fn assert_normal_form(word: &Word) {
        for pair in word.syllables().windows(2) {
            assert_ne!(pair[0].factor, pair[1].factor);
        }
        for s in word.syllables() {
            assert!(s.exp >= 1 && s.exp < word.signature().order(s.factor));
        }
    }

    proptest! {
        #[test]
        fn group_axioms(words in arb_words(3)) {
            let [a, b, c] = &words[..] else { unreachable!() };
            let ab_c = a.multiply(b).unwrap().multiply(c).unwrap();
            let a_bc = a.multiply(&b.multiply(c).unwrap()).unwrap();
            prop_assert_eq!(&ab_c, &a_bc);
            assert_normal_form(&ab_c);
            prop_assert!(a.multiply(&a.invert()).unwrap().is_identity());
            let e = Word::identity(a.signature());
            prop_assert_eq!(&e.multiply(a).unwrap(), a);
            prop_assert_eq!(&a.multiply(&e).unwrap(), a);
        }

        #[test]
        fn cyclic_reduction_is_a_conjugation(words in arb_words(1)) {
            let a = &words[0];
            let (core, conj) = a.cyclically_reduce();
            assert_normal_form(&core);
            assert_normal_form(&conj);
            if core.len() >= 2 {
                let first = core.syllables().first().unwrap();
                let last = core.syllables().last().unwrap();
                prop_assert_ne!(first.factor, last.factor);
            }
            let back = conj.multiply(&core).unwrap().multiply(&conj.invert()).unwrap();
            prop_assert_eq!(&back, a);
        }

        #[test]
        fn finite_orders_are_exact(words in arb_words(1)) {
            let a = &words[0];
            if let Order::Finite(k) = a.order() {
                prop_assert!(a.pow(k as i64).unwrap().is_identity());
                for d in 1..k {
                    if k % d == 0 {
                        prop_assert!(!a.pow(d as i64).unwrap().is_identity());
                    }
                }
            }
        }

        #[test]
        fn projection_is_a_homomorphism(words in arb_words(2)) {
            let [a, b] = &words[..] else { unreachable!() };
            let ab = a.multiply(b).unwrap();
            for i in 0..a.signature().factor_count() {
                let n = a.signature().order(i);
                let lhs = ab.project_to_factor(i).unwrap();
                let rhs = (a.project_to_factor(i).unwrap() + b.project_to_factor(i).unwrap()) % n;
                prop_assert_eq!(lhs, rhs);
            }
        }

        #[test]
        fn deletion_is_an_idempotent_homomorphism(words in arb_words(2), raw_kill in prop::collection::vec(0usize..5, 0..3)) {
            let [a, b] = &words[..] else { unreachable!() };
            let m = a.signature().factor_count();
            let kill: Vec<usize> = raw_kill.into_iter().map(|i| i % m).collect();
            let ab = a.multiply(b).unwrap();
            let lhs = ab.delete_factors(&kill);
            let rhs = a.delete_factors(&kill).multiply(&b.delete_factors(&kill)).unwrap();
            prop_assert_eq!(&lhs, &rhs);
            prop_assert_eq!(lhs.delete_factors(&kill), lhs.clone());
            for s in lhs.syllables() {
                prop_assert!(!kill.contains(&s.factor));
            }
        }

        #[test]
        fn display_parse_round_trip(words in arb_words(1)) {
            let a = &words[0];
            let text = a.to_string();
            prop_assert_eq!(&Word::parse(a.signature(), &text).unwrap(), a);
        }

        #[test]
        fn conjugate_words_share_invariants(words in arb_words(2)) {
            let [a, b] = &words[..] else { unreachable!() };
            let conjugated = b.multiply(a).unwrap().multiply(&b.invert()).unwrap();
            prop_assert!(a.is_conjugate(&conjugated).unwrap());
            prop_assert!(conjugated.is_conjugate(a).unwrap());
        }
    }
}
