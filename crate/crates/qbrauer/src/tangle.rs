//! Tangle words and their strand geometry.
//!
//! A tangle on n strands is written as a word over the letters sigma_i,
//! sigma_i^{-1} (crossings) and e_i (cup over cap), read bottom to top.
//! This module traces the strands of such a word — optionally closing the
//! last strand or all strands — and reports everything the skein-reduction
//! engine needs: the underlying Brauer matching, the number of closed
//! loops, the total self-crossing writhe, and the first crossing that
//! violates the descending condition.
//!
//! It also constructs, for every Brauer diagram, the canonical tangle word
//! whose reduction is exactly that basis element: a bottom permutation, a
//! block of e-letters housing all cups and caps, and a top permutation,
//! with crossing signs chosen so the diagram is descending with zero
//! writhe.

use crate::diagrams::BrauerDiagram;

/// One elementary slice of a tangle word. Indices are 1-based: a letter
/// with index i acts on strand positions i-1 and i (0-based).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    /// A crossing sigma_i (positive) or sigma_i^{-1} (negative).
    S { i: usize, positive: bool },
    /// The cup-over-cap generator e_i.
    E { i: usize },
}

pub type Word = Vec<Letter>;

/// Which strands are closed off when evaluating a word.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Closure {
    /// No closure: an (n,n) tangle.
    Open,
    /// Close only the last strand (conditional expectation).
    CloseLast,
    /// Close every strand (Markov trace).
    CloseAll,
}

/// One passage of a strand through a crossing.
#[derive(Clone, Copy, Debug)]
struct Passage {
    strand: usize,
    /// True if the passage runs along the bottom-left/top-right arc.
    arc_a: bool,
    /// True if the strand traverses the crossing upward.
    up: bool,
}

/// The geometric summary of a traced word.
#[derive(Clone, Debug)]
pub struct TraceResult {
    /// The induced matching on the open boundary points.
    pub matching: BrauerDiagram,
    /// Number of closed loops.
    pub loops: usize,
    /// Sum over self-crossings of sign * (+1 for passages in the same
    /// vertical direction, -1 for opposite directions).
    pub writhe: i64,
    /// Slice index of the first crossing whose earlier passage (in
    /// canonical strand order) goes under; None if descending.
    pub first_bad: Option<usize>,
}

struct Walker<'a> {
    n: usize,
    l: usize,
    word: &'a [Letter],
    closure: Closure,
    visited: Vec<bool>,
    /// passages per slice, in traversal order (at most two per crossing)
    passages: Vec<Vec<Passage>>,
}

/// A walker state: the strand occupies the wire segment at `pos` in the
/// horizontal gap `g` (gap g lies below slice g), moving up or down.
type State = (usize, usize, bool);

enum Step {
    Move(State),
    Cross { slice: usize, arc_a: bool, next: State },
    Boundary { top: bool },
}

impl<'a> Walker<'a> {
    fn closed(&self, pos: usize) -> bool {
        match self.closure {
            Closure::Open => false,
            Closure::CloseLast => pos == self.n - 1,
            Closure::CloseAll => true,
        }
    }

    fn step(&self, (g, pos, up): State) -> Step {
        if up {
            if g == self.l {
                return Step::Boundary { top: true };
            }
            match self.word[g] {
                Letter::S { i, .. } => {
                    let (a, b) = (i - 1, i);
                    if pos == a {
                        Step::Cross {
                            slice: g,
                            arc_a: true,
                            next: (g + 1, b, true),
                        }
                    } else if pos == b {
                        Step::Cross {
                            slice: g,
                            arc_a: false,
                            next: (g + 1, a, true),
                        }
                    } else {
                        Step::Move((g + 1, pos, true))
                    }
                }
                Letter::E { i } => {
                    let (a, b) = (i - 1, i);
                    if pos == a {
                        Step::Move((g, b, false)) // turn at the cap
                    } else if pos == b {
                        Step::Move((g, a, false))
                    } else {
                        Step::Move((g + 1, pos, true))
                    }
                }
            }
        } else {
            if g == 0 {
                return Step::Boundary { top: false };
            }
            match self.word[g - 1] {
                Letter::S { i, .. } => {
                    let (a, b) = (i - 1, i);
                    if pos == a {
                        // coming down at the left is the right-to-left arc
                        Step::Cross {
                            slice: g - 1,
                            arc_a: false,
                            next: (g - 1, b, false),
                        }
                    } else if pos == b {
                        Step::Cross {
                            slice: g - 1,
                            arc_a: true,
                            next: (g - 1, a, false),
                        }
                    } else {
                        Step::Move((g - 1, pos, false))
                    }
                }
                Letter::E { i } => {
                    let (a, b) = (i - 1, i);
                    if pos == a {
                        Step::Move((g, b, true)) // turn at the cup
                    } else if pos == b {
                        Step::Move((g, a, true))
                    } else {
                        Step::Move((g - 1, pos, false))
                    }
                }
            }
        }
    }

    /// Walk from `start` until an open boundary point (returned) or, for
    /// loops, until the walk returns to its starting state (None).
    fn walk(&mut self, start: State, strand: usize, is_loop: bool) -> Option<(bool, usize)> {
        let mut state = start;
        loop {
            let (g, pos, _) = state;
            self.visited[g * self.n + pos] = true;
            let next = match self.step(state) {
                Step::Move(s) => s,
                Step::Cross { slice, arc_a, next } => {
                    self.passages[slice].push(Passage {
                        strand,
                        arc_a,
                        up: state.2,
                    });
                    next
                }
                Step::Boundary { top } => {
                    if self.closed(pos) {
                        if top {
                            (0, pos, true)
                        } else {
                            (self.l, pos, false)
                        }
                    } else {
                        return Some((top, pos));
                    }
                }
            };
            state = next;
            if is_loop && state == start {
                return None;
            }
        }
    }
}

/// Trace every strand of the word under the given closure. Strands are
/// traversed in canonical order: open strands by their smallest boundary
/// point (bottoms before tops), then closed loops by their smallest wire
/// segment.
pub fn trace(n: usize, word: &[Letter], closure: Closure) -> TraceResult {
    let l = word.len();
    let mut w = Walker {
        n,
        l,
        word,
        closure,
        visited: vec![false; (l + 1) * n.max(1)],
        passages: vec![Vec::new(); l],
    };
    let n_out = match closure {
        Closure::Open => n,
        Closure::CloseLast => n - 1,
        Closure::CloseAll => 0,
    };
    // Open strands, in canonical endpoint order.
    let mut endpoint_done = vec![false; 2 * n_out];
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    let mut strand = 0usize;
    for ep in 0..2 * n_out {
        if endpoint_done[ep] {
            continue;
        }
        let (top, pos) = (ep >= n_out, ep % n_out);
        let start: State = if top { (l, pos, false) } else { (0, pos, true) };
        let (end_top, end_pos) = w
            .walk(start, strand, false)
            .expect("open strand must terminate at a boundary");
        let other = if end_top { n_out + end_pos } else { end_pos };
        endpoint_done[ep] = true;
        endpoint_done[other] = true;
        pairs.push((ep, other));
        strand += 1;
    }
    // Closed loops among the remaining wire segments.
    let mut loops = 0;
    for g in 0..=l {
        for pos in 0..n {
            if !w.visited[g * n + pos] {
                let res = w.walk((g, pos, true), strand, true);
                debug_assert!(res.is_none(), "loop walk must close up");
                strand += 1;
                loops += 1;
            }
        }
    }
    // Analyze crossings.
    let mut writhe = 0i64;
    let mut first_bad = None;
    for (slice, letter) in word.iter().enumerate() {
        let Letter::S { positive, .. } = letter else {
            continue;
        };
        let ps = &w.passages[slice];
        debug_assert_eq!(ps.len(), 2, "every crossing is traversed twice");
        let sign = if *positive { 1i64 } else { -1 };
        if ps[0].strand == ps[1].strand {
            writhe += sign * if ps[0].up == ps[1].up { 1 } else { -1 };
        }
        // The earlier passage goes over iff it runs along the over-arc,
        // which is arc A for a positive crossing and arc B for a negative.
        let first_over = ps[0].arc_a == *positive;
        if !first_over && first_bad.is_none() {
            first_bad = Some(slice);
        }
    }
    let matching = BrauerDiagram::from_pairs(n_out, &pairs)
        .expect("traced endpoints form a perfect matching");
    TraceResult {
        matching,
        loops,
        writhe,
        first_bad,
    }
}

/// Adjacent-transposition word realizing the permutation `target`: wires
/// start at bottom positions 0..n-1 and the wire from bottom p ends at
/// position target[p]. Bubble sort emits a reduced word, so any two wires
/// cross at most once.
fn permutation_letters(target: &[usize]) -> Vec<Letter> {
    let n = target.len();
    let mut cur: Vec<usize> = (0..n).collect();
    let mut letters = Vec::new();
    loop {
        let mut swapped = false;
        for j in 0..n.saturating_sub(1) {
            if target[cur[j]] > target[cur[j + 1]] {
                cur.swap(j, j + 1);
                letters.push(Letter::S {
                    i: j + 1,
                    positive: true,
                });
                swapped = true;
            }
        }
        if !swapped {
            return letters;
        }
    }
}

/// The canonical tangle word of a Brauer diagram: its reduction (see the
/// bmw module) is exactly the basis element of that diagram, with
/// coefficient 1.
pub fn canonical_word(m: &BrauerDiagram) -> Word {
    let n = m.n();
    let mut cups: Vec<(usize, usize)> = Vec::new();
    let mut caps: Vec<(usize, usize)> = Vec::new();
    let mut throughs: Vec<(usize, usize)> = Vec::new();
    for (a, b) in m.pairs() {
        if b < n {
            cups.push((a, b));
        } else if a >= n {
            caps.push((a - n, b - n));
        } else {
            throughs.push((a, b - n));
        }
    }
    let k = cups.len();
    // Middle block: e-letters at positions (0,1), (2,3), ..., (2k-2,2k-1);
    // through strands occupy positions 2k..n-1.
    let mut pi_bot = vec![0usize; n];
    for (t, &(a, a2)) in cups.iter().enumerate() {
        pi_bot[a] = 2 * t;
        pi_bot[a2] = 2 * t + 1;
    }
    for (s, &(b, _)) in throughs.iter().enumerate() {
        pi_bot[b] = 2 * k + s;
    }
    // pi_top maps middle positions to top positions.
    let mut pi_top = vec![0usize; n];
    for (t, &(c, c2)) in caps.iter().enumerate() {
        pi_top[2 * t] = c;
        pi_top[2 * t + 1] = c2;
    }
    for (s, &(_, tp)) in throughs.iter().enumerate() {
        pi_top[2 * k + s] = tp;
    }
    let mut word = permutation_letters(&pi_bot);
    for t in 0..k {
        word.push(Letter::E { i: 2 * t + 1 });
    }
    word.extend(permutation_letters(&pi_top));
    // Fix crossing signs so the canonically earlier passage goes over.
    let tr = trace(n, &word, Closure::Open);
    debug_assert_eq!(&tr.matching, m);
    let mut fixed = Vec::with_capacity(word.len());
    let walker_passages = {
        // re-trace to collect passages with final signs irrelevant
        // (the strand geometry does not depend on crossing signs)
        let mut w = Walker {
            n,
            l: word.len(),
            word: &word,
            closure: Closure::Open,
            visited: vec![false; (word.len() + 1) * n.max(1)],
            passages: vec![Vec::new(); word.len()],
        };
        let mut strand = 0usize;
        let mut done = vec![false; 2 * n];
        for ep in 0..2 * n {
            if done[ep] {
                continue;
            }
            let (top, pos) = (ep >= n, ep % n);
            let start: State = if top {
                (word.len(), pos, false)
            } else {
                (0, pos, true)
            };
            let (end_top, end_pos) = w.walk(start, strand, false).unwrap();
            done[ep] = true;
            done[if end_top { n + end_pos } else { end_pos }] = true;
            strand += 1;
        }
        w.passages
    };
    for (slice, letter) in word.iter().enumerate() {
        match letter {
            Letter::E { i } => fixed.push(Letter::E { i: *i }),
            Letter::S { i, .. } => {
                let first = &walker_passages[slice][0];
                fixed.push(Letter::S {
                    i: *i,
                    positive: first.arc_a,
                });
            }
        }
    }
    debug_assert!({
        let check = trace(n, &fixed, Closure::Open);
        check.first_bad.is_none()
            && check.writhe == 0
            && check.loops == 0
            && &check.matching == m
    });
    fixed
}
