//! Automorphisms of a free product of finite cyclic groups.
//!
//! An automorphism is stored extensionally as the list of images of the
//! generators `x_1, ..., x_m`, so equality is syntactic comparison of normal
//! forms. The standard generating set consists of factor automorphisms
//! (`x_i -> x_i^eps_i` with `gcd(eps_i, n_i) = 1`), admissible permutations
//! (`x_i -> x_sigma(i)` with `n_sigma(i) = n_i`), and partial conjugations
//! (`x_i -> x_j x_i x_j^-1`, all other generators fixed). A provenance tag
//! records which standard generator a value is; composition re-detects tags
//! syntactically and otherwise marks the result `Composite`.

pub mod outer;
pub mod verify;

use crate::sig::Signature;
use crate::word::{check_len, push_reduced, Syllable, Word};
use crate::{arith, Error, Order, Result};
use itertools::Itertools;
use std::fmt;
use std::hash::{Hash, Hasher};

/// Provenance of an automorphism value. Tags do not participate in equality;
/// they exist so generators can be named in reports and inverted cheaply.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Tag {
    /// `x_i -> x_i^eps[i]`, each exponent coprime to its factor order.
    FactorAuto(Vec<u32>),
    /// `x_i -> x_sigma[i]` for an order-preserving permutation.
    Permutation(Vec<usize>),
    /// `x_i -> x_j x_i x_j^-1`, all other generators fixed.
    PartialConj { i: usize, j: usize },
    Composite,
}

#[derive(Clone, Debug)]
pub struct Automorphism {
    sig: Signature,
    images: Vec<Word>,
    tag: Tag,
}

impl PartialEq for Automorphism {
    fn eq(&self, other: &Self) -> bool {
        self.sig == other.sig && self.images == other.images
    }
}

impl Eq for Automorphism {}

impl Hash for Automorphism {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.sig.hash(state);
        self.images.hash(state);
    }
}

impl Automorphism {
    pub fn identity(sig: &Signature) -> Automorphism {
        Automorphism::factor_auto(sig, &vec![1; sig.factor_count()])
            .expect("all-ones exponents are a factor automorphism")
    }

    /// Factor automorphism `x_i -> x_i^eps[i]`. Exponents are arbitrary
    /// integers, normalized mod `n_i`; each must be coprime to `n_i`.
    pub fn factor_auto(sig: &Signature, eps: &[i64]) -> Result<Automorphism> {
        if eps.len() != sig.factor_count() {
            return Err(Error::InvalidAutomorphism(format!(
                "expected {} exponents, got {}",
                sig.factor_count(),
                eps.len()
            )));
        }
        let mut normalized = Vec::with_capacity(eps.len());
        for (i, &e) in eps.iter().enumerate() {
            let n = sig.order(i);
            let r = e.rem_euclid(n as i64) as u32;
            if r == 0 || arith::gcd(r as u64, n as u64) != 1 {
                return Err(Error::InvalidAutomorphism(format!(
                    "exponent {e} for x{} is not a unit mod {n}",
                    i + 1
                )));
            }
            normalized.push(r);
        }
        let images = normalized
            .iter()
            .enumerate()
            .map(|(i, &e)| {
                Word::from_normal_parts(sig.clone(), vec![Syllable { factor: i, exp: e }])
            })
            .collect();
        Ok(Automorphism {
            sig: sig.clone(),
            images,
            tag: Tag::FactorAuto(normalized),
        })
    }

    /// Permutation automorphism `x_i -> x_sigma[i]` (0-based images). The
    /// permutation must be a bijection with `n_sigma[i] = n_i`.
    pub fn permutation(sig: &Signature, sigma: &[usize]) -> Result<Automorphism> {
        let m = sig.factor_count();
        if sigma.len() != m {
            return Err(Error::InvalidAutomorphism(format!(
                "expected {m} images, got {}",
                sigma.len()
            )));
        }
        let mut seen = vec![false; m];
        for (i, &j) in sigma.iter().enumerate() {
            if j >= m || seen[j] {
                return Err(Error::InvalidAutomorphism(format!(
                    "images {sigma:?} are not a permutation"
                )));
            }
            seen[j] = true;
            if sig.order(j) != sig.order(i) {
                return Err(Error::InvalidAutomorphism(format!(
                    "permutation sends x{} (order {}) to x{} (order {})",
                    i + 1,
                    sig.order(i),
                    j + 1,
                    sig.order(j)
                )));
            }
        }
        let images = sigma
            .iter()
            .map(|&j| Word::from_normal_parts(sig.clone(), vec![Syllable { factor: j, exp: 1 }]))
            .collect();
        Ok(Automorphism {
            sig: sig.clone(),
            images,
            tag: Tag::Permutation(sigma.to_vec()),
        })
    }

    /// Partial conjugation: `x_i -> x_j x_i x_j^-1`, all other generators
    /// fixed (0-based indices, `i != j`).
    pub fn partial_conj(sig: &Signature, i: usize, j: usize) -> Result<Automorphism> {
        sig.check_index(i)?;
        sig.check_index(j)?;
        if i == j {
            return Err(Error::InvalidAutomorphism(format!(
                "partial conjugation needs distinct indices, got {},{}",
                i + 1,
                j + 1
            )));
        }
        let nj = sig.order(j);
        let images = (0..sig.factor_count())
            .map(|k| {
                let syllables = if k == i {
                    vec![
                        Syllable { factor: j, exp: 1 },
                        Syllable { factor: i, exp: 1 },
                        Syllable {
                            factor: j,
                            exp: nj - 1,
                        },
                    ]
                } else {
                    vec![Syllable { factor: k, exp: 1 }]
                };
                Word::from_normal_parts(sig.clone(), syllables)
            })
            .collect();
        Ok(Automorphism {
            sig: sig.clone(),
            images,
            tag: Tag::PartialConj { i, j },
        })
    }

    /// Conjugation by a fixed word: `x -> w x w^-1`.
    pub fn inner(w: &Word) -> Result<Automorphism> {
        let sig = w.signature();
        let w_inv = w.invert();
        let images: Vec<Word> = (0..sig.factor_count())
            .map(|i| {
                let xi = Word::generator(sig, i, 1)?;
                w.multiply(&xi)?.multiply(&w_inv)
            })
            .collect::<Result<_>>()?;
        Ok(Automorphism {
            sig: sig.clone(),
            tag: detect_tag(sig, &images),
            images,
        })
    }

    /// Builds an endomorphism from explicit generator images and validates
    /// the necessary condition that `order(images[i])` divides `n_i`.
    pub fn from_images(sig: &Signature, images: Vec<Word>) -> Result<Automorphism> {
        if images.len() != sig.factor_count() {
            return Err(Error::InvalidAutomorphism(format!(
                "expected {} images, got {}",
                sig.factor_count(),
                images.len()
            )));
        }
        for (i, w) in images.iter().enumerate() {
            if w.signature() != sig {
                return Err(Error::SignatureMismatch(
                    sig.to_string(),
                    w.signature().to_string(),
                ));
            }
            match w.order() {
                Order::Finite(k) if sig.order(i) as u64 % k == 0 => {}
                _ => {
                    return Err(Error::InvalidAutomorphism(format!(
                        "image of x{} does not satisfy x{}^{} = 1",
                        i + 1,
                        i + 1,
                        sig.order(i)
                    )))
                }
            }
        }
        Ok(Automorphism {
            sig: sig.clone(),
            tag: detect_tag(sig, &images),
            images,
        })
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    pub fn image(&self, i: usize) -> &Word {
        &self.images[i]
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    pub fn tag(&self) -> &Tag {
        &self.tag
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, w)| {
            w.syllables() == [Syllable { factor: i, exp: 1 }]
        })
    }

    fn check_same_sig(&self, other: &Automorphism) -> Result<()> {
        if self.sig == other.sig {
            Ok(())
        } else {
            Err(Error::SignatureMismatch(
                self.sig.to_string(),
                other.sig.to_string(),
            ))
        }
    }

    /// Substitutes `images[i]^(+-1)` for every syllable of `w` and reduces.
    pub fn apply(&self, w: &Word) -> Result<Word> {
        if *w.signature() != self.sig {
            return Err(Error::SignatureMismatch(
                self.sig.to_string(),
                w.signature().to_string(),
            ));
        }
        let mut out: Vec<Syllable> = Vec::new();
        for s in w.syllables() {
            let image = &self.images[s.factor];
            check_len(out.len() + s.exp as usize * image.len())?;
            for _ in 0..s.exp {
                for t in image.syllables() {
                    push_reduced(&self.sig, &mut out, t.factor, t.exp as i64);
                }
            }
        }
        Ok(Word::from_normal_parts(self.sig.clone(), out))
    }

    /// `(f.compose(g))(w) = f(g(w))`.
    pub fn compose(&self, g: &Automorphism) -> Result<Automorphism> {
        self.check_same_sig(g)?;
        let images: Vec<Word> = g
            .images
            .iter()
            .map(|w| self.apply(w))
            .collect::<Result<_>>()?;
        Ok(Automorphism {
            sig: self.sig.clone(),
            tag: detect_tag(&self.sig, &images),
            images,
        })
    }

    pub fn pow(&self, k: u64) -> Result<Automorphism> {
        let mut result = Automorphism::identity(&self.sig);
        for _ in 0..k {
            result = result.compose(self)?;
        }
        Ok(result)
    }

    /// Inverse of a tagged generator. A `Composite` value has no stored
    /// expression in generators, so inversion for it is unsupported; invert
    /// the factors of the defining product individually instead.
    pub fn inverse(&self) -> Result<Automorphism> {
        match &self.tag {
            Tag::FactorAuto(eps) => {
                let inv: Vec<i64> = eps
                    .iter()
                    .enumerate()
                    .map(|(i, &e)| {
                        arith::mod_inverse(e as u64, self.sig.order(i) as u64)
                            .expect("stored exponents are units") as i64
                    })
                    .collect();
                Automorphism::factor_auto(&self.sig, &inv)
            }
            Tag::Permutation(sigma) => {
                let mut inv = vec![0; sigma.len()];
                for (i, &j) in sigma.iter().enumerate() {
                    inv[j] = i;
                }
                Automorphism::permutation(&self.sig, &inv)
            }
            Tag::PartialConj { j, .. } => self.pow(self.sig.order(*j) as u64 - 1),
            Tag::Composite => Err(Error::Unsupported(
                "inverse of an untagged automorphism".into(),
            )),
        }
    }

    /// True when `self^k = 1` and no proper divisor of `k` already gives the
    /// identity.
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

    pub fn commutes_with(&self, other: &Automorphism) -> Result<bool> {
        Ok(self.compose(other)? == other.compose(self)?)
    }

    /// Decomposes `self = perm.compose(eps)` when every image is a single
    /// syllable `x_sigma(i)^k_i` forming a genuine permutation/factor pair;
    /// `None` otherwise.
    pub fn is_factor_times_sym(&self) -> Option<(Automorphism, Automorphism)> {
        let mut sigma = Vec::with_capacity(self.images.len());
        let mut eps = Vec::with_capacity(self.images.len());
        for w in &self.images {
            match w.syllables() {
                [s] => {
                    sigma.push(s.factor);
                    eps.push(s.exp as i64);
                }
                _ => return None,
            }
        }
        let perm = Automorphism::permutation(&self.sig, &sigma).ok()?;
        let factor = Automorphism::factor_auto(&self.sig, &eps).ok()?;
        debug_assert_eq!(perm.compose(&factor).unwrap(), *self);
        Some((factor, perm))
    }
}

/// Recognizes the standard-generator shapes among image lists.
fn detect_tag(sig: &Signature, images: &[Word]) -> Tag {
    // Single-syllable images: identity, factor automorphism, or permutation.
    if images
        .iter()
        .all(|w| w.len() == 1)
    {
        let heads: Vec<Syllable> = images.iter().map(|w| w.syllables()[0]).collect();
        if heads
            .iter()
            .enumerate()
            .all(|(i, s)| s.factor == i && arith::gcd(s.exp as u64, sig.order(i) as u64) == 1)
        {
            return Tag::FactorAuto(heads.iter().map(|s| s.exp).collect());
        }
        if heads.iter().all(|s| s.exp == 1) {
            let sigma: Vec<usize> = heads.iter().map(|s| s.factor).collect();
            let mut seen = vec![false; sigma.len()];
            let admissible = sigma.iter().enumerate().all(|(i, &j)| {
                let fresh = !seen[j];
                seen[j] = true;
                fresh && sig.order(j) == sig.order(i)
            });
            if admissible {
                return Tag::Permutation(sigma);
            }
        }
        return Tag::Composite;
    }
    // Exactly one image of the shape x_j x_i x_j^-1, the rest fixed.
    let mut pc: Option<(usize, usize)> = None;
    for (i, w) in images.iter().enumerate() {
        match w.syllables() {
            [s] if s.factor == i && s.exp == 1 => {}
            [a, b, c]
                if b.factor == i
                    && b.exp == 1
                    && a.factor == c.factor
                    && a.factor != i
                    && a.exp == 1
                    && c.exp == sig.order(a.factor) - 1 =>
            {
                if pc.is_some() {
                    return Tag::Composite;
                }
                pc = Some((i, a.factor));
            }
            _ => return Tag::Composite,
        }
    }
    match pc {
        Some((i, j)) => Tag::PartialConj { i, j },
        None => Tag::Composite,
    }
}

/// All factor automorphisms of the signature, in lexicographic exponent
/// order; the identity comes first.
pub fn all_factor_autos(sig: &Signature) -> Vec<Automorphism> {
    let unit_lists: Vec<Vec<i64>> = sig
        .orders()
        .iter()
        .map(|&n| {
            (1..n as i64)
                .filter(|&e| arith::gcd(e as u64, n as u64) == 1)
                .collect()
        })
        .collect();
    unit_lists
        .into_iter()
        .multi_cartesian_product()
        .map(|eps| Automorphism::factor_auto(sig, &eps).expect("units are valid exponents"))
        .collect()
}

/// All order-preserving permutation automorphisms, in lexicographic order on
/// the image lists; the identity comes first.
pub fn all_admissible_permutations(sig: &Signature) -> Vec<Automorphism> {
    let m = sig.factor_count();
    (0..m)
        .permutations(m)
        .filter(|sigma| sigma.iter().enumerate().all(|(i, &j)| sig.order(j) == sig.order(i)))
        .map(|sigma| Automorphism::permutation(sig, &sigma).expect("filtered to admissible"))
        .collect()
}

/// All `m(m-1)` partial conjugations, ordered by conjugated index then
/// conjugating index.
pub fn all_partial_conjs(sig: &Signature) -> Vec<Automorphism> {
    let m = sig.factor_count();
    let mut out = Vec::with_capacity(m * (m - 1));
    for i in 0..m {
        for j in 0..m {
            if i != j {
                out.push(Automorphism::partial_conj(sig, i, j).expect("distinct in-range indices"));
            }
        }
    }
    out
}

/// Renders the tag in the text format accepted by [`parse`]: `factor:2,1,1`,
/// `perm:(1 2)`, `pc:1,2`, or `composite` for untagged values.
pub fn format_tag(tag: &Tag) -> String {
    match tag {
        Tag::FactorAuto(eps) => format!("factor:{}", eps.iter().join(",")),
        Tag::Permutation(sigma) => format!("perm:{}", format_cycles(sigma)),
        Tag::PartialConj { i, j } => format!("pc:{},{}", i + 1, j + 1),
        Tag::Composite => "composite".into(),
    }
}

/// Cycle notation with 1-based entries, `()` for the identity.
fn format_cycles(sigma: &[usize]) -> String {
    let mut seen = vec![false; sigma.len()];
    let mut out = String::new();
    for start in 0..sigma.len() {
        if seen[start] || sigma[start] == start {
            seen[start] = true;
            continue;
        }
        let mut cycle = vec![start];
        seen[start] = true;
        let mut next = sigma[start];
        while next != start {
            seen[next] = true;
            cycle.push(next);
            next = sigma[next];
        }
        out.push('(');
        out.push_str(&cycle.iter().map(|i| (i + 1).to_string()).join(" "));
        out.push(')');
    }
    if out.is_empty() {
        out.push_str("()");
    }
    out
}

impl fmt::Display for Automorphism {
    /// One line per generator: `x1 -> x2^1*x1^1*x2^2; x2 -> x2^1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .images
            .iter()
            .enumerate()
            .map(|(i, w)| format!("x{} -> {w}", i + 1))
            .collect();
        write!(f, "{}", parts.join("; "))
    }
}

/// Parses `factor:...`, `perm:(...)`, `pc:i,j`, or `*`-joined products of
/// those, left-to-right as function composition (the leftmost acts last).
pub fn parse(sig: &Signature, text: &str) -> Result<Automorphism> {
    let mut result: Option<Automorphism> = None;
    for token in text.split('*') {
        let f = parse_single(sig, token.trim())?;
        result = Some(match result {
            None => f,
            Some(acc) => acc.compose(&f)?,
        });
    }
    result.ok_or_else(|| Error::InvalidAutomorphism("empty automorphism text".into()))
}

fn parse_single(sig: &Signature, token: &str) -> Result<Automorphism> {
    let bad = |msg: String| Error::InvalidAutomorphism(msg);
    if let Some(rest) = token.strip_prefix("factor:") {
        let eps: Vec<i64> = rest
            .split(',')
            .map(|p| p.trim().parse::<i64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| bad(format!("bad factor exponents {rest:?}")))?;
        return Automorphism::factor_auto(sig, &eps);
    }
    if let Some(rest) = token.strip_prefix("perm:") {
        return Automorphism::permutation(sig, &parse_cycles(sig.factor_count(), rest)?);
    }
    if let Some(rest) = token.strip_prefix("pc:") {
        let parts: Vec<&str> = rest.split(',').collect();
        if parts.len() != 2 {
            return Err(bad(format!("expected pc:i,j, got {token:?}")));
        }
        let parse_index = |p: &str| -> Result<usize> {
            let v: usize = p
                .trim()
                .parse()
                .map_err(|_| bad(format!("bad index {p:?}")))?;
            if v == 0 || v > sig.factor_count() {
                return Err(Error::IndexOutOfRange {
                    index: v,
                    m: sig.factor_count(),
                });
            }
            Ok(v - 1)
        };
        return Automorphism::partial_conj(sig, parse_index(parts[0])?, parse_index(parts[1])?);
    }
    Err(bad(format!(
        "expected factor:/perm:/pc: prefix, got {token:?}"
    )))
}

/// Parses cycle notation like `(1 2)(3 4)` or `()` into an image list.
fn parse_cycles(m: usize, text: &str) -> Result<Vec<usize>> {
    let bad = |msg: String| Error::InvalidAutomorphism(msg);
    let mut sigma: Vec<usize> = (0..m).collect();
    let mut rest = text.trim();
    if rest.is_empty() {
        return Err(bad("empty permutation, write () for the identity".into()));
    }
    while !rest.is_empty() {
        let Some(stripped) = rest.strip_prefix('(') else {
            return Err(bad(format!("expected '(' in permutation at {rest:?}")));
        };
        let Some(close) = stripped.find(')') else {
            return Err(bad("unclosed '(' in permutation".into()));
        };
        let body = &stripped[..close];
        rest = &stripped[close + 1..];
        let entries: Vec<usize> = body
            .split_whitespace()
            .map(|p| -> Result<usize> {
                let v: usize = p.parse().map_err(|_| bad(format!("bad index {p:?}")))?;
                if v == 0 || v > m {
                    return Err(Error::IndexOutOfRange { index: v, m });
                }
                Ok(v - 1)
            })
            .collect::<Result<_>>()?;
        for w in 0..entries.len() {
            let from = entries[w];
            let to = entries[(w + 1) % entries.len()];
            if sigma[from] != from {
                return Err(bad(format!("index {} repeated in cycles", from + 1)));
            }
            sigma[from] = to;
        }
        // A fixed point written as (k) leaves sigma untouched, which the
        // repetition check above would misread on a later mention; accept it.
    }
    Ok(sigma)
}
