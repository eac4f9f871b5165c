//! Cancellation diagrams: non-crossing partial inverse matchings on the
//! positions of a word whose unmatched residual letters all carry generators
//! from a given set `S`.
//!
//! A word admits such a diagram relative to `S` exactly when it lies in the
//! normal closure of `S`; the module keeps both routes separate — the
//! interval DP here, the deletion test in [`crate::words::nc_member`] — so
//! each can check the other.
//!
//! Blocks are single letters. Arbitrary reduced blocks can always be refined
//! to letters by subdividing and refining the matching, and at letter
//! granularity diagrams are classical chord diagrams: non-crossing is an
//! O(pairs^2) check and search is a standard O(m^3) interval DP.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::shift::shift;
use crate::words::{Gen, Word};

/// Positions are 1-based. `pairs` holds `(i, j)` with `i < j`; `pairs` and
/// `residuals` together partition `1..=m`.
///
/// Construction checks the partition; the non-crossing condition is part of
/// validity and is what [`verify`] reports on.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CancellationDiagram {
    m: usize,
    pairs: Vec<(usize, usize)>,
    residuals: Vec<usize>,
}

impl CancellationDiagram {
    pub fn new(
        m: usize,
        pairs: Vec<(usize, usize)>,
        residuals: Vec<usize>,
    ) -> Result<CancellationDiagram> {
        let mut pairs: Vec<(usize, usize)> = pairs
            .into_iter()
            .map(|(a, b)| if a <= b { (a, b) } else { (b, a) })
            .collect();
        pairs.sort_unstable();
        let mut residuals = residuals;
        residuals.sort_unstable();

        let mut covered = vec![false; m + 1];
        let mut mark = |p: usize| -> Result<()> {
            if p == 0 || p > m {
                return Err(Error::InvalidDiagram(format!(
                    "position {p} outside 1..={m}"
                )));
            }
            if covered[p] {
                return Err(Error::InvalidDiagram(format!("position {p} used twice")));
            }
            covered[p] = true;
            Ok(())
        };
        for &(a, b) in &pairs {
            if a == b {
                return Err(Error::InvalidDiagram(format!("pair ({a}, {b}) is degenerate")));
            }
            mark(a)?;
            mark(b)?;
        }
        for &r in &residuals {
            mark(r)?;
        }
        if let Some(p) = (1..=m).find(|&p| !covered[p]) {
            return Err(Error::InvalidDiagram(format!("position {p} left unassigned")));
        }
        Ok(CancellationDiagram { m, pairs, residuals })
    }

    pub fn empty() -> CancellationDiagram {
        CancellationDiagram { m: 0, pairs: Vec::new(), residuals: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.m
    }

    pub fn is_empty(&self) -> bool {
        self.m == 0
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn residuals(&self) -> &[usize] {
        &self.residuals
    }

    /// No two chords `(i, j)`, `(k, l)` with `i < k < j < l`.
    pub fn is_non_crossing(&self) -> bool {
        for (idx, &(i, j)) in self.pairs.iter().enumerate() {
            for &(k, l) in &self.pairs[idx + 1..] {
                // pairs are sorted, so i <= k
                if i < k && k < j && j < l {
                    return false;
                }
            }
        }
        true
    }
}

/// Check a diagram against a word: paired positions must hold exact inverse
/// letters, residual positions letters with generator in `S`, and the chords
/// must be non-crossing. Words need not be reduced here; searching does.
pub fn verify(w: &Word, s: &BTreeSet<Gen>, d: &CancellationDiagram) -> Result<bool> {
    if d.m != w.len() {
        return Err(Error::LengthMismatch { expected: d.m, got: w.len() });
    }
    if !d.is_non_crossing() {
        return Ok(false);
    }
    let ls = w.letters();
    for &(a, b) in &d.pairs {
        if !ls[a - 1].is_inverse_of(&ls[b - 1]) {
            return Ok(false);
        }
    }
    for &r in &d.residuals {
        if !s.contains(&ls[r - 1].gen()) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Interval DP: `ok[lo][hi]` says the slice `lo..hi` carries a valid diagram.
///
///     ok[lo][hi] = (w[lo] in S  and  ok[lo+1][hi])
///               or exists k: w[k] = w[lo]^{-1} and ok[lo+1][k] and ok[k+1][hi]
///
/// Reconstruction prefers the residual branch, then the smallest `k`
/// (leftmost-innermost), so the output is deterministic.
pub fn search(w: &Word, s: &BTreeSet<Gen>) -> Result<Option<CancellationDiagram>> {
    if !w.is_reduced() {
        return Err(Error::NotReduced);
    }
    let ls = w.letters();
    let n = ls.len();
    let mut ok = vec![vec![false; n + 1]; n + 1];
    for lo in 0..=n {
        ok[lo][lo] = true;
    }
    for len in 1..=n {
        for lo in 0..=(n - len) {
            let hi = lo + len;
            let first = ls[lo];
            let mut good = s.contains(&first.gen()) && ok[lo + 1][hi];
            if !good {
                for k in (lo + 1)..hi {
                    if ls[k].is_inverse_of(&first) && ok[lo + 1][k] && ok[k + 1][hi] {
                        good = true;
                        break;
                    }
                }
            }
            ok[lo][hi] = good;
        }
    }
    if !ok[0][n] {
        return Ok(None);
    }

    let mut pairs = Vec::new();
    let mut residuals = Vec::new();
    let mut stack = vec![(0usize, n)];
    while let Some((lo, hi)) = stack.pop() {
        if lo >= hi {
            continue;
        }
        let first = ls[lo];
        if s.contains(&first.gen()) && ok[lo + 1][hi] {
            residuals.push(lo + 1);
            stack.push((lo + 1, hi));
            continue;
        }
        let k = ((lo + 1)..hi)
            .find(|&k| ls[k].is_inverse_of(&first) && ok[lo + 1][k] && ok[k + 1][hi])
            .expect("DP table admits a decomposition");
        pairs.push((lo + 1, k + 1));
        stack.push((lo + 1, k));
        stack.push((k + 1, hi));
    }
    let d = CancellationDiagram::new(n, pairs, residuals)?;
    debug_assert!(d.is_non_crossing());
    Ok(Some(d))
}

/// `{g : both children of g lie in S}` — the set a lifted diagram is valid
/// against. For a window-derived `S` this is the same window's generator set
/// one level down, since the children's spans partition the parent's.
pub fn shift_parent_set(s: &BTreeSet<Gen>) -> BTreeSet<Gen> {
    let mut out = BTreeSet::new();
    for g in s {
        if g.index() % 2 == 0 {
            if let Some((parent, _)) = g.parent() {
                let (l, _) = parent.children();
                if s.contains(&l) {
                    out.insert(parent);
                }
            }
        }
    }
    out
}

/// Transport a diagram for `shift(w)` down to one for `w`, valid against
/// [`shift_parent_set`] of `S`.
///
/// Positions `2p-1, 2p` of the shifted word are the two children of position
/// `p`. A chord of `d` always joins children of equal-generator letters of
/// opposite sign, so chords induce a graph on the positions of `w` in which
/// every vertex has degree at most two. Components are handled separately:
///
/// * even paths and cycles: pair consecutive component members — each such
///   pair is backed by an actual chord of `d`, and chords of a non-crossing
///   diagram project to non-crossing parent pairs;
/// * odd paths (isolated vertices included): the two endpoint slots left
///   unmatched are an opposite-handed pair of children of the component's
///   generator, both residual in `d`, so the generator's children both lie
///   in `S` and every component member becomes a residual.
pub fn lift_diagram(
    d: &CancellationDiagram,
    w: &Word,
    s: &BTreeSet<Gen>,
) -> Result<CancellationDiagram> {
    let sw = shift(w);
    if !verify(&sw, s, d)? {
        return Err(Error::LiftPrecondition(
            "diagram is not a valid cancellation of the shifted word".into(),
        ));
    }
    let m = w.len();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); m + 1];
    for &(a, b) in d.pairs() {
        let p = a.div_ceil(2);
        let q = b.div_ceil(2);
        debug_assert_ne!(p, q, "sibling slots are never inverse letters");
        adj[p].push(q);
        adj[q].push(p);
    }

    let parent_set = shift_parent_set(s);
    let mut seen = vec![false; m + 1];
    let mut pairs = Vec::new();
    let mut residuals = Vec::new();

    for start in 1..=m {
        if seen[start] {
            continue;
        }
        // collect the component
        let mut comp = vec![start];
        seen[start] = true;
        let mut queue = vec![start];
        while let Some(v) = queue.pop() {
            for &u in &adj[v] {
                if !seen[u] {
                    seen[u] = true;
                    comp.push(u);
                    queue.push(u);
                }
            }
        }
        let edge_count: usize = comp.iter().map(|&v| adj[v].len()).sum::<usize>() / 2;
        let order = if edge_count == comp.len() {
            walk_cycle(&adj, comp[0])
        } else {
            let endpoint = *comp
                .iter()
                .find(|&&v| adj[v].len() <= 1)
                .expect("a non-cycle component has an endpoint");
            walk_path(&adj, endpoint)
        };
        debug_assert_eq!(order.len(), comp.len());

        if order.len() % 2 == 0 {
            for chunk in order.chunks_exact(2) {
                pairs.push((chunk[0], chunk[1]));
            }
        } else {
            for &v in &order {
                let g = w.letters()[v - 1].gen();
                if !parent_set.contains(&g) {
                    return Err(Error::LiftPrecondition(format!(
                        "residual letter {g} lacks both children in the given set"
                    )));
                }
                residuals.push(v);
            }
        }
    }

    let lifted = CancellationDiagram::new(m, pairs, residuals)?;
    match verify(w, &parent_set, &lifted)? {
        true => Ok(lifted),
        false => Err(Error::LiftPrecondition(
            "lifted diagram failed verification against the parent set".into(),
        )),
    }
}

fn walk_path(adj: &[Vec<usize>], start: usize) -> Vec<usize> {
    let mut order = vec![start];
    let mut prev = 0usize;
    let mut cur = start;
    loop {
        let next = adj[cur].iter().copied().find(|&u| u != prev);
        match next {
            Some(u) => {
                order.push(u);
                prev = cur;
                cur = u;
            }
            None => return order,
        }
    }
}

fn walk_cycle(adj: &[Vec<usize>], start: usize) -> Vec<usize> {
    let mut order = vec![start];
    let mut prev = start;
    let mut cur = adj[start][0];
    while cur != start {
        order.push(cur);
        let next = adj[cur]
            .iter()
            .copied()
            .find(|&u| u != prev)
            // a doubled edge closes a two-cycle
            .unwrap_or(prev);
        prev = cur;
        cur = next;
    }
    order
}
