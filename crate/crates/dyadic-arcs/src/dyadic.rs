//! Exact dyadic-rational geometry: arc spans on the base segment and the open
//! strip windows the canonical covers are built from.
//!
//! Every decision procedure in this crate compares dyadic rationals exactly.
//! Floating point appears only in plot output and cover-diameter metadata.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::words::Gen;

/// Hard cap on generator levels and window scales; keeps every intermediate
/// product within `i128`.
pub const MAX_LEVEL: u32 = 62;

/// Rational of the form `num / 2^exp`, kept canonical: `exp == 0` or `num` odd.
///
/// Canonical form makes equality structural, so dyadics can be hashed and used
/// as set keys directly.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Dyadic {
    num: i128,
    exp: u32,
}

impl Dyadic {
    pub const ZERO: Dyadic = Dyadic { num: 0, exp: 0 };
    pub const ONE: Dyadic = Dyadic { num: 1, exp: 0 };

    pub fn new(num: i128, exp: u32) -> Dyadic {
        let mut d = Dyadic { num, exp };
        d.normalize();
        d
    }

    pub fn from_int(n: i128) -> Dyadic {
        Dyadic { num: n, exp: 0 }
    }

    fn normalize(&mut self) {
        if self.num == 0 {
            self.exp = 0;
            return;
        }
        while self.exp > 0 && self.num % 2 == 0 {
            self.num /= 2;
            self.exp -= 1;
        }
    }

    pub fn num(&self) -> i128 {
        self.num
    }

    pub fn exp(&self) -> u32 {
        self.exp
    }

    pub fn is_integer(&self) -> bool {
        self.exp == 0
    }

    /// Largest integer `<= self`.
    pub fn floor(&self) -> i128 {
        self.num.div_euclid(1i128 << self.exp)
    }

    /// Multiply by `2^k` (negative `k` divides).
    pub fn mul_pow2(&self, k: i32) -> Dyadic {
        if self.num == 0 {
            return Dyadic::ZERO;
        }
        if k >= 0 {
            let k = k as u32;
            if self.exp >= k {
                Dyadic::new(self.num, self.exp - k)
            } else {
                Dyadic::new(self.num << (k - self.exp), 0)
            }
        } else {
            Dyadic::new(self.num, self.exp + (-k) as u32)
        }
    }

    pub fn abs(&self) -> Dyadic {
        Dyadic { num: self.num.abs(), exp: self.exp }
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / (self.exp as f64).exp2()
    }

    fn with_common_exp(a: Dyadic, b: Dyadic) -> (i128, i128, u32) {
        let exp = a.exp.max(b.exp);
        let an = a.num << (exp - a.exp);
        let bn = b.num << (exp - b.exp);
        (an, bn, exp)
    }
}

impl Add for Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: Dyadic) -> Dyadic {
        let (a, b, exp) = Dyadic::with_common_exp(self, rhs);
        Dyadic::new(a + b, exp)
    }
}

impl Sub for Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: Dyadic) -> Dyadic {
        let (a, b, exp) = Dyadic::with_common_exp(self, rhs);
        Dyadic::new(a - b, exp)
    }
}

impl Neg for Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic { num: -self.num, exp: self.exp }
    }
}

impl Mul for Dyadic {
    type Output = Dyadic;
    fn mul(self, rhs: Dyadic) -> Dyadic {
        Dyadic::new(self.num * rhs.num, self.exp + rhs.exp)
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Dyadic) -> Ordering {
        let (a, b, _) = Dyadic::with_common_exp(*self, *other);
        a.cmp(&b)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Dyadic) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/2^{}", self.num, self.exp)
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Closed interval `[lo, hi]` on the base segment, `lo < hi`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Span {
    lo: Dyadic,
    hi: Dyadic,
}

impl Span {
    pub fn new(lo: Dyadic, hi: Dyadic) -> Result<Span> {
        if lo < hi {
            Ok(Span { lo, hi })
        } else {
            Err(Error::InvalidSpan)
        }
    }

    pub fn lo(&self) -> Dyadic {
        self.lo
    }

    pub fn hi(&self) -> Dyadic {
        self.hi
    }

    pub fn width(&self) -> Dyadic {
        self.hi - self.lo
    }
}

/// Open base interval `((i-1)/2^n, (i+1)/2^n)` with `0 <= i <= 2^n`.
///
/// Windows at `i = 0` or `i = 2^n` stick out of `[0, 1]`; they are clipped
/// geometrically when covers are built, but containment tests always use the
/// formal open endpoints.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Window {
    n: u32,
    i: u64,
}

impl Window {
    pub fn new(n: u32, i: u64) -> Result<Window> {
        if n == 0 {
            return Err(Error::InvalidWindow { n, i });
        }
        if n > MAX_LEVEL {
            return Err(Error::LevelTooLarge { level: n, max: MAX_LEVEL });
        }
        if i > 1u64 << n {
            return Err(Error::InvalidWindow { n, i });
        }
        Ok(Window { n, i })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn i(&self) -> u64 {
        self.i
    }

    pub fn lo(&self) -> Dyadic {
        Dyadic::new(self.i as i128 - 1, self.n)
    }

    pub fn hi(&self) -> Dyadic {
        Dyadic::new(self.i as i128 + 1, self.n)
    }

    /// Strict containment: a span with a foot exactly on the window boundary
    /// is excluded, because the window is open.
    pub fn contains_span(&self, s: &Span) -> bool {
        self.lo() < s.lo() && s.hi() < self.hi()
    }

    pub fn contains_point(&self, x: Dyadic) -> bool {
        self.lo() < x && x < self.hi()
    }

    /// The designated window around a base point: nearest window center,
    /// rounding half down.
    pub fn designated(x: Dyadic, n: u32) -> Result<Window> {
        if x < Dyadic::ZERO || x > Dyadic::ONE {
            return Err(Error::OutOfUnitInterval { what: "designated point" });
        }
        let m = x.mul_pow2(n as i32);
        let fl = m.floor();
        let frac = m - Dyadic::from_int(fl);
        let half = Dyadic::new(1, 1);
        let i = if frac > half { fl + 1 } else { fl };
        Window::new(n, i as u64)
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "W{}.{}", self.n, self.i)
    }
}

/// Footprint of the arc of `g` on the base: `[(j-1)/2^(n-1), j/2^(n-1)]`.
pub fn span_of(g: Gen) -> Span {
    let lo = Dyadic::new(g.index() as i128 - 1, g.level() - 1);
    let hi = Dyadic::new(g.index() as i128, g.level() - 1);
    Span { lo, hi }
}

/// Point of the arc of `g` at parameter `t`: exact x, floating y.
pub fn point_on_arc(g: Gen, t: Dyadic) -> Result<(Dyadic, f64)> {
    if t < Dyadic::ZERO || t > Dyadic::ONE {
        return Err(Error::OutOfUnitInterval { what: "arc parameter" });
    }
    let scale = -(g.level() as i32 - 1);
    let x = (Dyadic::from_int(g.index() as i128 - 1) + t).mul_pow2(scale);
    let y2 = t - t * t;
    let y = y2.to_f64().sqrt() * (scale as f64).exp2();
    Ok((x, y))
}

/// All generators up to `max_level` whose span lies strictly inside `w`.
///
/// If a generator qualifies, so do both of its children: their spans
/// partition the parent's span.
pub fn window_generators(w: Window, max_level: u32) -> BTreeSet<Gen> {
    let mut out = BTreeSet::new();
    let n = w.n;
    for k in 1..=max_level {
        // (j-1) * 2^n > (i-1) * 2^(k-1)  and  j * 2^n < (i+1) * 2^(k-1)
        let pow_n = 1i128 << n;
        let a = (w.i as i128 - 1) << (k - 1);
        let b = (w.i as i128 + 1) << (k - 1);
        let j_lo = a.div_euclid(pow_n) + 2;
        let j_hi = (b - 1).div_euclid(pow_n);
        let lo = j_lo.max(1);
        let hi = j_hi.min(1i128 << (k - 1));
        for j in lo..=hi {
            out.insert(Gen::new(k, j as u64).expect("range-checked index"));
        }
    }
    out
}

/// Does some stage-`n` window strictly contain `s`?
pub fn stage_fits(stage: u32, s: &Span) -> bool {
    stage_window_for(stage, s).is_some()
}

/// Smallest `i` such that `W(stage, i)` strictly contains `s`.
pub fn stage_window_for(stage: u32, s: &Span) -> Option<Window> {
    // valid i are the integers in (hi*2^n - 1, lo*2^n + 1) ∩ [0, 2^n]
    let m_hi = s.hi().mul_pow2(stage as i32);
    let m_lo = s.lo().mul_pow2(stage as i32);
    let i0 = (m_hi - Dyadic::ONE).floor() + 1;
    if i0 < 0 || i0 > (1i128 << stage) {
        return None;
    }
    if Dyadic::from_int(i0 - 1) < m_lo {
        Some(Window::new(stage, i0 as u64).expect("range-checked window"))
    } else {
        None
    }
}
