//! Outer-class algebra for three equal-order factors.
//!
//! Over a signature `(n, n, n)` the six partial conjugations fall into three
//! classes modulo inner automorphisms, represented by `g1 = [pc(1,2)]`,
//! `g2 = [pc(2,3)]`, `g3 = [pc(3,1)]` (1-based factor names). An "outer
//! word" is an ordinary [`Word`] over `(n, n, n)` whose letters stand for
//! `g1, g2, g3` rather than group generators. This module provides the
//! section `rho` sending outer words back to concrete automorphisms, the
//! conjugation action of factor and permutation automorphisms on outer
//! words, and pairs `(inner word, outer word)` multiplied with the twist
//! `(w1, u1)(w2, u2) = (w1 * rho(u1)(w2), u1 u2)`.

use super::{Automorphism, Tag};
use crate::word::Word;
use crate::{Error, Result, Signature};
use std::fmt;

/// Concrete partial conjugation `(i, j)` represented by each outer letter.
pub const OUTER_PC: [(usize, usize); 3] = [(0, 1), (1, 2), (2, 0)];

fn check_outer_signature(sig: &Signature) -> Result<()> {
    let orders = sig.orders();
    if orders.len() == 3 && orders[1] == orders[0] && orders[2] == orders[0] {
        Ok(())
    } else {
        Err(Error::Hypothesis(format!(
            "outer words need three equal-order factors, got signature {sig}"
        )))
    }
}

/// The outer class of the partial conjugation `(i, j)` (0-based, `i != j`):
/// the letter index and a sign. Classes satisfy `[pc(i,j)] = [pc(k,j)]^-1`
/// for `{i,k,j} = {0,1,2}` because their product is conjugation by `x_j+1`.
pub fn outer_class_of_pc(i: usize, j: usize) -> (usize, i64) {
    assert!(i < 3 && j < 3 && i != j, "bad partial conjugation ({i},{j})");
    if j == (i + 1) % 3 {
        (i, 1)
    } else {
        (3 - i - j, -1)
    }
}

/// Lifts an outer word to the product of the representative partial
/// conjugations, syllable by syllable.
pub fn rho(outer: &Word) -> Result<Automorphism> {
    let sig = outer.signature();
    check_outer_signature(sig)?;
    let mut f = Automorphism::identity(sig);
    for s in outer.syllables() {
        let (i, j) = OUTER_PC[s.factor];
        let pc = Automorphism::partial_conj(sig, i, j)?;
        f = f.compose(&pc.pow(s.exp as u64)?)?;
    }
    Ok(f)
}

/// Conjugation action of a factor or permutation automorphism on an outer
/// word, letter by letter. For a factor automorphism `eps` the letter for
/// `pc(i,j)` is raised to the power `eps_j`; a permutation `pi` sends it to
/// the class of `pc(pi(i), pi(j))`.
pub fn outer_conjugation_action(h: &Automorphism, w: &Word) -> Result<Word> {
    let sig = w.signature();
    check_outer_signature(sig)?;
    if h.signature() != sig {
        return Err(Error::SignatureMismatch(
            sig.to_string(),
            h.signature().to_string(),
        ));
    }
    let mut letters: Vec<(usize, i64)> = Vec::with_capacity(w.len());
    match h.tag() {
        Tag::FactorAuto(eps) => {
            for s in w.syllables() {
                let (_, j) = OUTER_PC[s.factor];
                letters.push((s.factor, s.exp as i64 * eps[j] as i64));
            }
        }
        Tag::Permutation(sigma) => {
            for s in w.syllables() {
                let (i, j) = OUTER_PC[s.factor];
                let (letter, sign) = outer_class_of_pc(sigma[i], sigma[j]);
                letters.push((letter, sign * s.exp as i64));
            }
        }
        _ => {
            return Err(Error::Unsupported(
                "outer conjugation action needs a factor or permutation automorphism".into(),
            ))
        }
    }
    Word::from_letters(sig, &letters)
}

/// An element of the semidirect product of the group with itself: an inner
/// word (conjugating element) and an outer word acting on it through `rho`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct PairElement {
    pub inner: Word,
    pub outer: Word,
}

impl PairElement {
    pub fn new(inner: Word, outer: Word) -> Result<PairElement> {
        check_outer_signature(outer.signature())?;
        if inner.signature() != outer.signature() {
            return Err(Error::SignatureMismatch(
                inner.signature().to_string(),
                outer.signature().to_string(),
            ));
        }
        Ok(PairElement { inner, outer })
    }

    pub fn identity(sig: &Signature) -> Result<PairElement> {
        PairElement::new(Word::identity(sig), Word::identity(sig))
    }

    pub fn is_identity(&self) -> bool {
        self.inner.is_identity() && self.outer.is_identity()
    }

    pub fn mul(&self, other: &PairElement) -> Result<PairElement> {
        let twisted = rho(&self.outer)?.apply(&other.inner)?;
        Ok(PairElement {
            inner: self.inner.multiply(&twisted)?,
            outer: self.outer.multiply(&other.outer)?,
        })
    }

    pub fn inverse(&self) -> Result<PairElement> {
        let outer_inv = self.outer.invert();
        Ok(PairElement {
            inner: rho(&outer_inv)?.apply(&self.inner.invert())?,
            outer: outer_inv,
        })
    }

    pub fn pow(&self, k: u64) -> Result<PairElement> {
        let mut result = PairElement::identity(self.inner.signature())?;
        for _ in 0..k {
            result = result.mul(self)?;
        }
        Ok(result)
    }

    pub fn has_order(&self, k: u64) -> Result<bool> {
        if !self.pow(k)?.is_identity() {
            return Ok(false);
        }
        for d in 1..k {
            if k % d == 0 && self.pow(d)?.is_identity() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl fmt::Display for PairElement {
    /// Outer letters print as `g1, g2, g3` to keep them apart from the inner
    /// generators.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {})",
            self.inner,
            self.outer.to_string().replace('x', "g")
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig(n: u32) -> Signature {
        Signature::new(vec![n, n, n]).unwrap()
    }

    fn w(s: &Signature, text: &str) -> Word {
        Word::parse(s, text).unwrap()
    }

    #[test]
    fn rho_lifts_single_letters_to_partial_conjugations() {
        let s = sig(3);
        for (letter, (i, j)) in OUTER_PC.iter().enumerate() {
            let word = Word::generator(&s, letter, 1).unwrap();
            let expect = Automorphism::partial_conj(&s, *i, *j).unwrap();
            assert_eq!(rho(&word).unwrap(), expect);
        }
    }

    #[test]
    fn rho_is_a_homomorphism() {
        let s = sig(3);
        let samples = [
            w(&s, "x1*x2^2"),
            w(&s, "x3^2*x1"),
            w(&s, "x2*x3*x2"),
            Word::identity(&s),
        ];
        for a in &samples {
            for b in &samples {
                let lhs = rho(&a.multiply(b).unwrap()).unwrap();
                let rhs = rho(a).unwrap().compose(&rho(b).unwrap()).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn rho_rejects_other_signatures() {
        let bad = Signature::new(vec![2, 3, 3]).unwrap();
        assert!(rho(&Word::identity(&bad)).is_err());
        let two = Signature::new(vec![3, 3]).unwrap();
        assert!(rho(&Word::identity(&two)).is_err());
    }

    #[test]
    fn class_map_matches_the_inner_product_relations() {
        // pc(i,j) * pc(k,j) is conjugation by x_j+1, so the class of pc(i,j)
        // with j = i+2 mod 3 is the inverse of a representative letter.
        let s = sig(4);
        for i in 0..3usize {
            for j in 0..3usize {
                if i == j {
                    continue;
                }
                let (letter, sign) = outer_class_of_pc(i, j);
                let rep = rho(&Word::generator(&s, letter, sign).unwrap()).unwrap();
                let pc = Automorphism::partial_conj(&s, i, j).unwrap();
                if sign == 1 {
                    assert_eq!(pc, rep);
                } else {
                    // pc(i,j) = inner(x_j) * rep, exactly, not just mod inner.
                    let xj = Word::generator(&s, j, 1).unwrap();
                    let lifted = Automorphism::inner(&xj).unwrap().compose(&rep).unwrap();
                    assert_eq!(pc, lifted);
                }
            }
        }
    }

    #[test]
    fn permutation_action_on_letters() {
        let s = sig(3);
        let swap12 = Automorphism::permutation(&s, &[1, 0, 2]).unwrap();
        // (1 2) sends g1 -> g3^-1, g2 -> g2^-1, g3 -> g1^-1.
        let images: Vec<Word> = (0..3)
            .map(|l| {
                outer_conjugation_action(&swap12, &Word::generator(&s, l, 1).unwrap()).unwrap()
            })
            .collect();
        assert_eq!(images[0], w(&s, "x3^2"));
        assert_eq!(images[1], w(&s, "x2^2"));
        assert_eq!(images[2], w(&s, "x1^2"));

        let swap13 = Automorphism::permutation(&s, &[2, 1, 0]).unwrap();
        let g1 = outer_conjugation_action(&swap13, &Word::generator(&s, 0, 1).unwrap()).unwrap();
        assert_eq!(g1, w(&s, "x1^2"));
    }

    #[test]
    fn factor_action_scales_by_the_conjugating_exponent() {
        let s = sig(3);
        let eps = Automorphism::factor_auto(&s, &[1, 1, 2]).unwrap();
        // g2 represents pc(2,3), so it scales by eps_3 = 2.
        let g2 = outer_conjugation_action(&eps, &Word::generator(&s, 1, 1).unwrap()).unwrap();
        assert_eq!(g2, w(&s, "x2^2"));
        // g1 represents pc(1,2) and eps_2 = 1 leaves it alone.
        let g1 = outer_conjugation_action(&eps, &Word::generator(&s, 0, 1).unwrap()).unwrap();
        assert_eq!(g1, w(&s, "x1^1"));
    }

    /// `b == inner(z) * a` for some word `z`. Both images of the first
    /// generator must be conjugates of a power of it, which holds for every
    /// automorphism built from partial conjugations and class lifts.
    fn equal_mod_inner(a: &Automorphism, b: &Automorphism) -> bool {
        let (core_a, conj_a) = a.image(0).cyclically_reduce();
        let (core_b, conj_b) = b.image(0).cyclically_reduce();
        assert!(core_a.len() <= 1 && core_b.len() <= 1, "not an FR-type pair");
        if core_a != core_b {
            return false;
        }
        let s = a.signature();
        let n0 = s.order(0);
        (0..n0 as i64).any(|k| {
            let z = conj_b
                .multiply(&Word::generator(s, 0, k).unwrap())
                .unwrap()
                .multiply(&conj_a.invert())
                .unwrap();
            Automorphism::inner(&z).unwrap().compose(a).unwrap() == *b
        })
    }

    #[test]
    fn action_is_conjugation_modulo_inner_automorphisms() {
        for n in [2u32, 3] {
            let s = sig(n);
            let mut hs = vec![
                Automorphism::permutation(&s, &[1, 0, 2]).unwrap(),
                Automorphism::permutation(&s, &[1, 2, 0]).unwrap(),
                Automorphism::permutation(&s, &[2, 1, 0]).unwrap(),
            ];
            if n == 3 {
                hs.push(Automorphism::factor_auto(&s, &[2, 1, 2]).unwrap());
            }
            let words = [
                w(&s, "x1"),
                w(&s, "x2"),
                w(&s, "x3"),
                w(&s, "x1*x2"),
                w(&s, "x3*x1"),
            ];
            for h in &hs {
                for u in &words {
                    let acted = rho(&outer_conjugation_action(h, u).unwrap()).unwrap();
                    let conjugated = h
                        .compose(&rho(u).unwrap())
                        .unwrap()
                        .compose(&h.inverse().unwrap())
                        .unwrap();
                    assert!(equal_mod_inner(&acted, &conjugated));
                }
            }
        }
    }

    #[test]
    fn pair_group_laws() {
        let s = sig(3);
        let elems = [
            PairElement::new(w(&s, "x1"), Word::identity(&s)).unwrap(),
            PairElement::new(Word::identity(&s), w(&s, "x2")).unwrap(),
            PairElement::new(w(&s, "x3^2*x1"), w(&s, "x1*x3")).unwrap(),
            PairElement::new(w(&s, "x2"), w(&s, "x2^2")).unwrap(),
        ];
        let id = PairElement::identity(&s).unwrap();
        for a in &elems {
            assert_eq!(a.mul(&a.inverse().unwrap()).unwrap(), id);
            assert_eq!(a.inverse().unwrap().mul(a).unwrap(), id);
            for b in &elems {
                for c in &elems {
                    let ab_c = a.mul(b).unwrap().mul(c).unwrap();
                    let a_bc = a.mul(&b.mul(c).unwrap()).unwrap();
                    assert_eq!(ab_c, a_bc);
                }
            }
        }
    }

    #[test]
    fn pair_orders_match_the_twist() {
        let s = sig(3);
        // A pure inner letter and a pure outer letter both have order n.
        let c1 = PairElement::new(w(&s, "x1"), Word::identity(&s)).unwrap();
        assert!(c1.has_order(3).unwrap());
        let a1 = PairElement::new(Word::identity(&s), w(&s, "x1")).unwrap();
        assert!(a1.has_order(3).unwrap());
    }
}
