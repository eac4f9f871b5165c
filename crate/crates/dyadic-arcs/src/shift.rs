//! The shift substitution on words: every generator maps to the ordered
//! product of its two half-scale children, inverse letters to the reversed
//! inverse pair.
//!
//! Images of reduced words are reduced, and the image alphabet
//! `{shift(letter)}` is a uniquely decodable length-2 code whose block
//! boundaries are forced at even positions. Decoding therefore needs no
//! backtracking: split the word into aligned consecutive pairs and invert
//! each pair.

use crate::error::{Error, Result};
use crate::words::{Gen, Letter, Side, Sign, Word};

/// `g ↦ left · right`; `g' ↦ right' · left'`.
pub fn shift_letter(l: Letter) -> [Letter; 2] {
    let (left, right) = l.gen().children();
    match l.sign() {
        Sign::Pos => [Letter::positive(left), Letter::positive(right)],
        Sign::Neg => [Letter::negative(right), Letter::negative(left)],
    }
}

/// Homomorphic extension of [`shift_letter`]. No reduction is performed; the
/// image of a reduced word is already reduced.
pub fn shift(w: &Word) -> Word {
    let mut letters = Vec::with_capacity(2 * w.len());
    for &l in w.letters() {
        letters.extend_from_slice(&shift_letter(l));
    }
    Word::new(letters)
}

/// `k`-fold shift. Every letter rises exactly `k` levels, so a reduced word
/// of length `m` maps to one of length `2^k · m`.
pub fn shift_iter(w: &Word, k: u32) -> Word {
    let mut out = w.clone();
    for _ in 0..k {
        out = shift(&out);
    }
    out
}

fn decode_pair(a: Letter, b: Letter) -> Option<Letter> {
    if a.sign() != b.sign() {
        return None;
    }
    match a.sign() {
        Sign::Pos => {
            let (parent, side) = a.gen().parent()?;
            if side == Side::Left && b.gen() == parent.children().1 {
                Some(Letter::positive(parent))
            } else {
                None
            }
        }
        Sign::Neg => {
            let (parent, side) = a.gen().parent()?;
            if side == Side::Right && b.gen() == parent.children().0 {
                Some(Letter::negative(parent))
            } else {
                None
            }
        }
    }
}

/// The unique `u` with `shift(u) = w`, if any. Input must be reduced.
pub fn decode(w: &Word) -> Result<Option<Word>> {
    if !w.is_reduced() {
        return Err(Error::NotReduced);
    }
    if w.len() % 2 != 0 {
        return Ok(None);
    }
    let mut letters = Vec::with_capacity(w.len() / 2);
    for pair in w.letters().chunks_exact(2) {
        match decode_pair(pair[0], pair[1]) {
            Some(l) => letters.push(l),
            None => return Ok(None),
        }
    }
    Ok(Some(Word::new(letters)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::parse_word;
    use crate::words::retract;
    use proptest::prelude::*;

    fn w(s: &str) -> Word {
        parse_word(s).unwrap()
    }

    #[test]
    fn shift_of_named_words() {
        assert_eq!(shift(&w("g1.1")), w("g2.1 g2.2"));
        assert_eq!(shift(&w("g1.1'")), w("g2.2' g2.1'"));
        assert_eq!(shift_iter(&w("g1.1"), 2), w("g3.1 g3.2 g3.3 g3.4"));
        assert_eq!(shift_iter(&w("g1.1"), 0), w("g1.1"));
        assert_eq!(shift_iter(&w("g1.1 g1.1'"), 5).reduced(), Word::empty());
    }

    #[test]
    fn decode_of_named_words() {
        assert_eq!(decode(&w("g2.1 g2.2")).unwrap(), Some(w("g1.1")));
        assert_eq!(decode(&Word::empty()).unwrap(), Some(Word::empty()));
        assert_eq!(decode(&w("g2.2 g2.1")).unwrap(), None);
        // exhaustive check over all length-1 preimages at level 1
        for sign in [Sign::Pos, Sign::Neg] {
            let one = Word::single(Letter::new(Gen::new(1, 1).unwrap(), sign));
            assert_ne!(shift(&one), w("g2.2 g2.1"));
        }
        assert!(decode(&w("g1.1 g1.1'")).is_err());
    }

    fn alphabet(max_level: u32) -> Vec<Letter> {
        let mut out = Vec::new();
        for level in 1..=max_level {
            for index in 1..=(1u64 << (level - 1)) {
                let g = Gen::new(level, index).unwrap();
                out.push(Letter::positive(g));
                out.push(Letter::negative(g));
            }
        }
        out
    }

    fn all_words(letters: &[Letter], max_len: usize) -> Vec<Word> {
        let mut out = vec![Word::empty()];
        let mut layer = vec![Word::empty()];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for word in &layer {
                for &l in letters {
                    next.push(word.concat(&Word::single(l)));
                }
            }
            out.extend(next.iter().cloned());
            layer = next;
        }
        out
    }

    #[test]
    fn shift_injectivity_and_reducedness_on_short_words() {
        let letters = alphabet(2);
        for word in all_words(&letters, 3) {
            assert_eq!(word.is_reduced(), shift(&word).is_reduced());
            if word.is_reduced() {
                assert_eq!(decode(&shift(&word)).unwrap(), Some(word.clone()));
                assert_eq!(shift(&word).len(), 2 * word.len());
                // a reduced word never equals a proper contiguous subword of itself
                let ls = word.letters();
                for i in 0..ls.len() {
                    for j in i..ls.len() {
                        if (i, j) != (0, ls.len()) {
                            assert_ne!(&ls[i..j], ls);
                        }
                    }
                }
            }
        }
    }

    fn arb_word() -> impl Strategy<Value = Word> {
        let letter = (1u32..=4, 0u64..8, any::<bool>()).prop_map(|(level, raw, neg)| {
            let index = raw % (1u64 << (level - 1)) + 1;
            let g = Gen::new(level, index).unwrap();
            if neg {
                Letter::negative(g)
            } else {
                Letter::positive(g)
            }
        });
        proptest::collection::vec(letter, 0..14).prop_map(Word::new)
    }

    proptest! {
        #[test]
        fn shift_respects_reduction_and_levels(word in arb_word()) {
            prop_assert_eq!(word.is_reduced(), shift(&word).is_reduced());
            let img = shift(&word);
            for (src, pair) in word.letters().iter().zip(img.letters().chunks(2)) {
                prop_assert_eq!(pair[0].gen().level(), src.gen().level() + 1);
                prop_assert_eq!(pair[1].gen().level(), src.gen().level() + 1);
            }
            let r = word.reduced();
            prop_assert_eq!(decode(&shift(&r)).unwrap(), Some(r.clone()));
        }

        #[test]
        fn shift_commutes_with_the_retraction_tower(word in arb_word(), n in 0u32..6) {
            prop_assert_eq!(retract(&shift(&word), n + 1), shift(&retract(&word, n)));
        }
    }
}
