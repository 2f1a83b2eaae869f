//! Functionals on symmetric products of cyclic words, together with the BV
//! operator, the odd bracket and the action of the odd derivation.
//!
//! A functional is stored as a polynomial in graded letters: each term is a
//! monomial (a multiset of cyclic words) with a power of hbar and a rational
//! coefficient. Letters carry the parity of the shifted space. Signs are the
//! Koszul signs of rearranging letters inside the linear sequence obtained by
//! concatenating the cycles of a monomial.

mod ops;
mod serial;

pub use ops::{quadratic_term, BvContext, ResidualReport};
pub use serial::{parse_functional, write_functional};

use crate::superlinear::{koszul_sign_unchecked, Parity, Sign, Q};
use crate::{Error, Result};
use num_traits::Zero;
use std::cmp::Ordering;
use std::collections::BTreeMap;

pub type Letter = u32;

/// A cyclic word in canonical (lexicographically minimal) rotation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CyclicWord(Vec<Letter>);

impl CyclicWord {
    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn parity(&self, parities: &[Parity]) -> Parity {
        Parity::sum(self.0.iter().map(|&l| parities[l as usize]))
    }
}

impl Ord for CyclicWord {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for CyclicWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sign of moving the first `r` letters of `letters` to the back.
fn rotation_sign(letters: &[Letter], r: usize, parities: &[Parity]) -> Sign {
    let head = Parity::sum(letters[..r].iter().map(|&l| parities[l as usize]));
    let tail = Parity::sum(letters[r..].iter().map(|&l| parities[l as usize]));
    Sign(head.is_odd() && tail.is_odd())
}

/// Brings a cyclic word to its minimal rotation.
///
/// Returns `Ok(None)` when the word vanishes identically, i.e. some rotation
/// maps it to itself with a minus sign.
pub fn canonical_cyclic_form(letters: &[Letter], parities: &[Parity]) -> Result<Option<(CyclicWord, Sign)>> {
    if letters.is_empty() {
        return Err(Error::Argument("cyclic word must be nonempty".into()));
    }
    let n = letters.len();
    let mut best: Option<(Vec<Letter>, usize)> = None;
    for r in 0..n {
        let rot: Vec<Letter> = letters[r..].iter().chain(&letters[..r]).copied().collect();
        if best.as_ref().is_none_or(|(b, _)| rot < *b) {
            best = Some((rot, r));
        }
    }
    let (word, r) = best.expect("nonempty");
    // The stabilizer of the word is generated by its smallest period.
    let period = (1..=n)
        .find(|&p| n.is_multiple_of(p) && (0..n).all(|i| word[i] == word[(i + p) % n]))
        .unwrap_or(n);
    if period < n && rotation_sign(&word, period, parities) == Sign::MINUS {
        return Ok(None);
    }
    Ok(Some((CyclicWord(word), rotation_sign(letters, r, parities))))
}

/// A multiset of cyclic words in canonical order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    cycles: Vec<CyclicWord>,
}

impl Monomial {
    /// Canonicalizes a product of cycles given in linear order.
    pub fn canonical<C: AsRef<[Letter]>>(
        cycles: &[C],
        parities: &[Parity],
    ) -> Result<Option<(Monomial, Sign)>> {
        let mut sign = Sign::PLUS;
        let mut words = Vec::with_capacity(cycles.len());
        for c in cycles {
            match canonical_cyclic_form(c.as_ref(), parities)? {
                None => return Ok(None),
                Some((w, s)) => {
                    sign *= s;
                    words.push(w);
                }
            }
        }
        let block_par: Vec<Parity> = words.iter().map(|w| w.parity(parities)).collect();
        let mut order: Vec<usize> = (0..words.len()).collect();
        order.sort_by(|&a, &b| words[a].cmp(&words[b]));
        sign *= koszul_sign_unchecked(&order, &block_par);
        let sorted: Vec<CyclicWord> = order.iter().map(|&i| words[i].clone()).collect();
        for w in sorted.windows(2) {
            if w[0] == w[1] && w[0].parity(parities).is_odd() {
                return Ok(None);
            }
        }
        Ok(Some((Monomial { cycles: sorted }, sign)))
    }

    pub fn empty() -> Monomial {
        Monomial { cycles: Vec::new() }
    }

    pub fn cycles(&self) -> &[CyclicWord] {
        &self.cycles
    }

    pub fn letter_count(&self) -> usize {
        self.cycles.iter().map(CyclicWord::len).sum()
    }

    pub fn linear(&self) -> Vec<Letter> {
        self.cycles.iter().flat_map(|c| c.0.iter().copied()).collect()
    }

    pub fn parity(&self, parities: &[Parity]) -> Parity {
        Parity::sum(self.cycles.iter().map(|c| c.parity(parities)))
    }
}

/// Key of a term: the hbar power and the monomial.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TermKey {
    pub hbar: u32,
    pub monomial: Monomial,
}

/// A finite sum of hbar-graded monomials with rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Functional {
    terms: BTreeMap<TermKey, Q>,
}

impl Functional {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&TermKey, &Q)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, hbar: u32, monomial: &Monomial) -> Q {
        self.terms
            .get(&TermKey {
                hbar,
                monomial: monomial.clone(),
            })
            .cloned()
            .unwrap_or_else(Q::zero)
    }

    /// Adds a canonical term.
    pub fn add_canonical(&mut self, key: TermKey, coeff: Q) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Adds `coeff` times the product of `cycles` (in linear order).
    pub fn add_term<C: AsRef<[Letter]>>(
        &mut self,
        hbar: u32,
        cycles: &[C],
        coeff: Q,
        parities: &[Parity],
    ) -> Result<()> {
        if coeff.is_zero() {
            return Ok(());
        }
        if let Some((monomial, sign)) = Monomial::canonical(cycles, parities)? {
            self.add_canonical(TermKey { hbar, monomial }, sign.apply(coeff));
        }
        Ok(())
    }

    pub fn add_assign(&mut self, other: &Functional) {
        for (k, v) in &other.terms {
            self.add_canonical(k.clone(), v.clone());
        }
    }

    pub fn scaled(&self, s: &Q) -> Functional {
        let mut out = Functional::new();
        if s.is_zero() {
            return out;
        }
        for (k, v) in &self.terms {
            out.terms.insert(k.clone(), v * s);
        }
        out
    }

    pub fn sub(&self, other: &Functional) -> Functional {
        let mut out = self.clone();
        out.add_assign(&other.scaled(&-Q::from_integer(1.into())));
        out
    }

    /// Terms with at most `letters` letters and hbar power at most `hbar`.
    pub fn truncated(&self, letters: usize, hbar: u32) -> Functional {
        Functional {
            terms: self
                .terms
                .iter()
                .filter(|(k, _)| k.hbar <= hbar && k.monomial.letter_count() <= letters)
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect(),
        }
    }

    /// The single-cycle functional `(1/n) sum T(i1..in) (i1 ... in)` of a
    /// cyclic tensor given by its entries.
    pub fn from_cyclic_entries<'a, I>(entries: I, hbar: u32, parities: &[Parity]) -> Result<Functional>
    where
        I: IntoIterator<Item = (&'a Vec<usize>, &'a Q)>,
    {
        let mut out = Functional::new();
        for (idx, v) in entries {
            let word: Vec<Letter> = idx.iter().map(|&i| i as Letter).collect();
            let w = v / Q::from_integer((word.len() as i64).into());
            out.add_term(hbar, &[word], w, parities)?;
        }
        Ok(out)
    }

    /// Multiplies monomials (concatenation) and adds hbar powers.
    pub fn product(&self, other: &Functional, parities: &[Parity]) -> Result<Functional> {
        let mut out = Functional::new();
        for (ka, va) in &self.terms {
            for (kb, vb) in &other.terms {
                let cycles: Vec<&[Letter]> = ka
                    .monomial
                    .cycles
                    .iter()
                    .chain(&kb.monomial.cycles)
                    .map(|c| c.letters())
                    .collect();
                out.add_term(ka.hbar + kb.hbar, &cycles, va * vb, parities)?;
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::superlinear::{q, Parity::*};

    #[test]
    fn canonical_word_examples() {
        let even = [Even, Even];
        let (w, s) = canonical_cyclic_form(&[1, 0], &even).unwrap().unwrap();
        assert_eq!(w.letters(), &[0, 1]);
        assert_eq!(s, Sign::PLUS);
        let (w, s) = canonical_cyclic_form(&[0], &[Odd]).unwrap().unwrap();
        assert_eq!(w.letters(), &[0]);
        assert_eq!(s, Sign::PLUS);
        // (b, a) with both odd: moving one odd letter past another.
        let (w, s) = canonical_cyclic_form(&[1, 0], &[Odd, Odd]).unwrap().unwrap();
        assert_eq!(w.letters(), &[0, 1]);
        assert_eq!(s, Sign::MINUS);
        assert!(canonical_cyclic_form(&[], &even).is_err());
    }

    #[test]
    fn self_symmetric_odd_word_vanishes() {
        // (a a) with a odd: the rotation by one gives -1.
        assert!(canonical_cyclic_form(&[0, 0], &[Odd]).unwrap().is_none());
        // (a b a b) with a odd, b even: period 2 block is odd, rotation past odd rest.
        assert!(canonical_cyclic_form(&[0, 1, 0, 1], &[Odd, Even])
            .unwrap()
            .is_none());
        assert!(canonical_cyclic_form(&[0, 0, 0], &[Odd]).unwrap().is_some());
    }

    #[test]
    fn rotation_reproduces_canonical_pair() {
        let par = [Odd, Even, Odd];
        let word = [2, 0, 1, 0, 2];
        let (w0, s0) = canonical_cyclic_form(&word, &par).unwrap().unwrap();
        for r in 0..word.len() {
            let rot: Vec<Letter> = word[r..].iter().chain(&word[..r]).copied().collect();
            let (w, s) = canonical_cyclic_form(&rot, &par).unwrap().unwrap();
            assert_eq!(w, w0);
            // rot = rotation of word with sign rotation_sign(word, r).
            assert_eq!(s * rotation_sign(&word, r, &par), s0);
        }
    }

    #[test]
    fn monomial_sorts_cycles_with_sign() {
        let par = [Odd, Odd];
        let (m, s) = Monomial::canonical(&[vec![1], vec![0]], &par).unwrap().unwrap();
        assert_eq!(m.linear(), vec![0, 1]);
        assert_eq!(s, Sign::MINUS);
        assert!(Monomial::canonical(&[vec![0], vec![0]], &par).unwrap().is_none());
        let (m, _) = Monomial::canonical(&[vec![0, 1, 1], vec![1]], &par)
            .unwrap()
            .unwrap();
        assert_eq!(m.letter_count(), 4);
        assert_eq!(m.cycles()[0].letters(), &[1]);
    }

    #[test]
    fn functional_cancels_to_zero() {
        let par = [Even, Odd];
        let mut f = Functional::new();
        f.add_term(0, &[vec![0, 1]], q(2), &par).unwrap();
        f.add_term(0, &[vec![1, 0]], q(-2), &par).unwrap();
        assert!(f.is_zero());
    }
}

#[cfg(test)]
mod prop_tests {
    include!("tests.rs");
}
