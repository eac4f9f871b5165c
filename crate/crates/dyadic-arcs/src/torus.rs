//! The mapping-torus group at finite level: the ascending HNN extension of
//! the free group by the shift, `⟨F, t | t^{-1} g t = shift(g)⟩`.
//!
//! Rewriting moves `t` left (`g·t → t·shift(g)`) and `t^{-1}` right
//! (`t^{-1}·g → shift(g)·t^{-1}`), so every mixed word reaches the form
//! `t^a · u · t^{-b}`. Because the shift is injective, the minimal such form
//! (`a = 0`, or `b = 0`, or `u` not decodable) is unique; two forms are equal
//! exactly when their t-exponents agree and padding to common exponents makes
//! the middles equal, via `(a, u, b) ≡ (a+1, shift(u), b+1)`.

use std::fmt;

use crate::dyadic::{stage_window_for, window_generators, Dyadic, Window, MAX_LEVEL};
use crate::error::{Error, Result};
use crate::shift::{decode, shift_iter, shift_letter};
use crate::words::{nc_member, Letter, Word};

/// Token of a raw input word for the torus group: the time loop `t`, its
/// inverse, or a letter of the fiber.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum MixedToken {
    T,
    TInv,
    Letter(Letter),
}

/// Unnormalized input form: a sequence over `{t, t'} ∪ letters`.
#[derive(Clone, PartialEq, Eq, Default, Debug)]
pub struct MixedWord(pub Vec<MixedToken>);

impl MixedWord {
    pub fn empty() -> MixedWord {
        MixedWord(Vec::new())
    }

    pub fn tokens(&self) -> &[MixedToken] {
        &self.0
    }

    pub fn inverse(&self) -> MixedWord {
        MixedWord(
            self.0
                .iter()
                .rev()
                .map(|t| match t {
                    MixedToken::T => MixedToken::TInv,
                    MixedToken::TInv => MixedToken::T,
                    MixedToken::Letter(l) => MixedToken::Letter(l.inverse()),
                })
                .collect(),
        )
    }

    pub fn concat(&self, other: &MixedWord) -> MixedWord {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        MixedWord(v)
    }
}

impl fmt::Display for MixedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (i, t) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            match t {
                MixedToken::T => write!(f, "t")?,
                MixedToken::TInv => write!(f, "t'")?,
                MixedToken::Letter(l) => write!(f, "{l}")?,
            }
        }
        Ok(())
    }
}

/// Normal form `t^a · u · t^{-b}` with `u` reduced and the padding minimal:
/// `a = 0`, or `b = 0`, or `u` not decodable.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TorusElement {
    up: u32,
    core: Word,
    down: u32,
}

impl TorusElement {
    pub fn identity() -> TorusElement {
        TorusElement { up: 0, core: Word::empty(), down: 0 }
    }

    pub fn up(&self) -> u32 {
        self.up
    }

    pub fn core(&self) -> &Word {
        &self.core
    }

    pub fn down(&self) -> u32 {
        self.down
    }

    pub fn is_identity(&self) -> bool {
        self.up == 0 && self.down == 0 && self.core.is_empty()
    }

    pub fn t_exponent(&self) -> i64 {
        self.up as i64 - self.down as i64
    }

    pub fn to_mixed(&self) -> MixedWord {
        let mut v = Vec::new();
        v.extend(std::iter::repeat(MixedToken::T).take(self.up as usize));
        v.extend(self.core.letters().iter().map(|&l| MixedToken::Letter(l)));
        v.extend(std::iter::repeat(MixedToken::TInv).take(self.down as usize));
        MixedWord(v)
    }
}

impl fmt::Display for TorusElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_mixed())
    }
}

/// Rewrite a mixed word into its minimal normal form.
pub fn normalize(mw: &MixedWord) -> TorusElement {
    let mut up = 0u32;
    let mut core = Word::empty();
    let mut down = 0u32;
    for &tok in mw.tokens() {
        match tok {
            MixedToken::TInv => down += 1,
            MixedToken::T => {
                if down > 0 {
                    down -= 1;
                } else {
                    // t^a u t  =  t^(a+1) shift(u)
                    let mut shifted = Word::empty();
                    for &l in core.letters() {
                        for c in shift_letter(l) {
                            shifted.push_reduced(c);
                        }
                    }
                    core = shifted;
                    up += 1;
                }
            }
            MixedToken::Letter(l) => {
                // u t^-b g = u shift^b(g) t^-b
                let img = shift_iter(&Word::single(l), down);
                for &c in img.letters() {
                    core.push_reduced(c);
                }
            }
        }
    }
    while up > 0 && down > 0 {
        match decode(&core).expect("core is kept reduced") {
            Some(v) => {
                core = v;
                up -= 1;
                down -= 1;
            }
            None => break,
        }
    }
    TorusElement { up, core, down }
}

/// Equality through the padding relation: equal t-exponents, and after
/// padding both to common exponents the middles agree letterwise. Normal
/// forms are unique, so this coincides with structural equality.
pub fn equal(e1: &TorusElement, e2: &TorusElement) -> bool {
    if e1.t_exponent() != e2.t_exponent() {
        return false;
    }
    let a = e1.up.max(e2.up);
    shift_iter(&e1.core, a - e1.up) == shift_iter(&e2.core, a - e2.up)
}

/// Membership of `e` in the strip subgroup of window `w`: the t-exponent must
/// vanish, and the balanced middle must lie in the normal closure of the
/// window's generator set.
///
/// Zero t-exponent makes the minimal form already balanced. Window generator
/// sets are closed under the shift, so the verdict does not depend on which
/// balanced padding is tested; debug builds recheck two extra paddings.
pub fn window_member(e: &TorusElement, w: Window, max_level: u32) -> Result<bool> {
    if e.t_exponent() != 0 {
        return Ok(false);
    }
    if e.core.max_level() > max_level {
        return Err(Error::LevelOverflow { level: e.core.max_level(), max_level });
    }
    let verdict = nc_member(&e.core, &window_generators(w, max_level));
    debug_assert_eq!(verdict, window_member_padded(e, w, max_level, 1).unwrap());
    debug_assert_eq!(verdict, window_member_padded(e, w, max_level, 2).unwrap());
    Ok(verdict)
}

/// Same test, carried out at `pad` extra levels of balanced padding.
pub fn window_member_padded(
    e: &TorusElement,
    w: Window,
    max_level: u32,
    pad: u32,
) -> Result<bool> {
    if e.t_exponent() != 0 {
        return Ok(false);
    }
    if e.core.max_level() > max_level {
        return Err(Error::LevelOverflow { level: e.core.max_level(), max_level });
    }
    let u = shift_iter(&e.core, pad);
    Ok(nc_member(&u, &window_generators(w, max_level + pad)))
}

/// One conjugate factor of a stage certificate: `conj · letter · conj^{-1}`,
/// with the letter's arc contained in `window`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CertFactor {
    pub conj: Word,
    pub letter: Letter,
    pub window: Window,
}

/// Witness that `t^k · (∏ factors) · t^{-k}` equals the certified word in the
/// torus group while every factor is a loop inside one stage window.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Certificate {
    pub k: u32,
    pub factors: Vec<CertFactor>,
}

impl Certificate {
    /// Concatenate `conj_i · letter_i · conj_i^{-1}` in order and reduce.
    pub fn replay(&self) -> Word {
        let mut prod = Word::empty();
        for f in &self.factors {
            prod = prod.concat(&Word::single(f.letter).conjugated_by(&f.conj));
        }
        prod.reduced()
    }
}

fn all_letters_fit(word: &Word, stage: u32) -> Option<Vec<Window>> {
    word.letters()
        .iter()
        .map(|l| stage_window_for(stage, &crate::dyadic::span_of(l.gen())))
        .collect()
}

/// Certify that `w`, viewed in the torus group, lies in the stage-`n`
/// product of window subgroups: find the minimal `k` for which every letter
/// of the `k`-fold shift sits strictly inside some stage window, and emit one
/// factor per letter.
///
/// `k` always exists: spans halve under the shift, and `k = stage + 2`
/// already forces every span below the stage's margin.
pub fn undetectable_certificate(w: &Word, stage: u32) -> Result<Certificate> {
    if !w.is_reduced() {
        return Err(Error::NotReduced);
    }
    if w.is_empty() {
        return Err(Error::IdentityElement);
    }
    if stage == 0 || stage > MAX_LEVEL {
        return Err(Error::InvalidWindow { n: stage, i: 0 });
    }
    for k in 0..=stage + 2 {
        let image = shift_iter(w, k);
        if let Some(windows) = all_letters_fit(&image, stage) {
            let factors = image
                .letters()
                .iter()
                .zip(windows)
                .map(|(&letter, window)| CertFactor { conj: Word::empty(), letter, window })
                .collect();
            return Ok(Certificate { k, factors });
        }
    }
    unreachable!("a span of width 2^-(stage+2) always fits a stage window")
}

/// A window around the base point `x` whose strip subgroup misses `e`.
///
/// Scans `n = 1, 2, ...` with the designated window of `x` at each scale; the
/// scan ends by `n = max letter level`, where no arc of the balanced middle
/// fits any window.
pub fn separating_window(x: Dyadic, e: &TorusElement) -> Result<Window> {
    if e.t_exponent() != 0 {
        return Err(Error::NonzeroTExponent);
    }
    if e.is_identity() {
        return Err(Error::IdentityElement);
    }
    let max_level = e.core.max_level();
    for n in 1..=max_level {
        let w = Window::designated(x, n)?;
        if !window_member(e, w, max_level)? {
            return Ok(w);
        }
    }
    unreachable!("at the max letter level no span fits the designated window")
}
