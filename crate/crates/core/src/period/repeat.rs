//! Periodic runs in cyclic sequences.
//!
//! A cyclic sequence `x` of length `L` contains a 9-power with period `p`
//! at `start` when the window of length `9p` beginning at `start` (read
//! cyclically) is `p`-periodic. The reported run is the maximal forward
//! extension of that window, capped at `L`.

use std::collections::BTreeSet;

use crate::strings::z_array;

/// Least `(period, start)` hit of a 9-power; `run` is the forward extent
/// from `start`, at most the sequence length.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NinePower {
    pub period: usize,
    pub start: usize,
    pub run: usize,
}

pub const REPETITION_POWER: usize = 9;

/// Per-period scan: for each `p` counts consecutive matches
/// `x[j] = x[j + p]` over two turns of the cycle. `O(L²)` overall.
pub fn nine_power_scan<T: Eq>(seq: &[T]) -> Option<NinePower> {
    let len = seq.len();
    let at = |i: usize| &seq[i % len];
    for p in 2..=len / REPETITION_POWER {
        let mut matches = vec![0usize; 2 * len + 1];
        for j in (0..2 * len).rev() {
            if at(j) == at(j + p) {
                matches[j] = matches[j + 1] + 1;
            }
        }
        for (start, &m) in matches.iter().enumerate().take(len) {
            let run = (m + p).min(len);
            if run >= REPETITION_POWER * p {
                return Some(NinePower {
                    period: p,
                    start,
                    run,
                });
            }
        }
    }
    None
}

/// Same contract as [`nine_power_scan`], derived from the maximal periodic
/// segments of the doubled sequence.
pub fn nine_power_runs<T: Eq>(seq: &[T]) -> Option<NinePower> {
    let len = seq.len();
    let max_period = len / REPETITION_POWER;
    if max_period < 2 {
        return None;
    }
    let doubled: Vec<&T> = seq.iter().chain(seq).collect();
    let segments = periodic_segments(&doubled, max_period);
    for p in 2..=max_period {
        let hit = segments
            .iter()
            .filter(|s| s.period == p && s.start < len && s.end - s.start >= REPETITION_POWER * p)
            .map(|s| s.start)
            .min();
        if let Some(start) = hit {
            let seg = segments
                .iter()
                .find(|s| s.period == p && s.start == start)
                .expect("segment exists");
            return Some(NinePower {
                period: p,
                start,
                run: (seg.end - start).min(len),
            });
        }
    }
    None
}

/// A maximal `p`-periodic window `[start, end)` of length at least `2p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct PeriodicSegment {
    pub period: usize,
    pub start: usize,
    pub end: usize,
}

/// Every maximal `p`-periodic segment of length at least `2p`, for each
/// `p ≤ max_period`, sorted by `(period, start)`.
///
/// Main–Lorentz style divide and conquer: a segment not contained in
/// either half of a range crosses its midpoint `m`, and its run of matches
/// `x[j] = x[j + p]` then contains `m` or `m − p`. Both runs are found in
/// `O(1)` per period from longest-common-extension arrays, so each level
/// costs linear time.
pub fn periodic_segments<T: Eq>(seq: &[T], max_period: usize) -> Vec<PeriodicSegment> {
    let mut found = BTreeSet::new();
    crossing(seq, 0, seq.len(), max_period, &mut found);
    let len = seq.len();
    found
        .into_iter()
        .filter(|s: &PeriodicSegment| {
            let p = s.period;
            (s.start == 0 || seq[s.start - 1] != seq[s.start - 1 + p])
                && (s.end == len || seq[s.end] != seq[s.end - p])
        })
        .collect()
}

fn crossing<T: Eq>(
    seq: &[T],
    lo: usize,
    hi: usize,
    max_period: usize,
    out: &mut BTreeSet<PeriodicSegment>,
) {
    if hi - lo < 2 {
        return;
    }
    let mid = (lo + hi) / 2;
    crossing(seq, lo, mid, max_period, out);
    crossing(seq, mid, hi, max_period, out);

    // forward[x - lo] = LCP(seq[mid..hi], seq[x..hi])
    let right = hi - mid;
    let fwd_z = z_array(right + 1 + (hi - lo), |a, b| {
        match (fwd_index(a, mid, lo, right), fwd_index(b, mid, lo, right)) {
            (Some(i), Some(j)) => seq[i] == seq[j],
            _ => false,
        }
    });
    let forward = |x: usize| fwd_z[right + 1 + (x - lo)];

    // backward(y) = longest common suffix of seq[lo..mid] and seq[lo..y]
    let left = mid - lo;
    let bwd_z = z_array(left + 1 + (hi - lo), |a, b| {
        match (bwd_index(a, mid, hi, left), bwd_index(b, mid, hi, left)) {
            (Some(i), Some(j)) => seq[i] == seq[j],
            _ => false,
        }
    });
    let backward = |y: usize| bwd_z[left + 1 + (hi - y)];

    for p in 1..=max_period.min((hi - lo) / 2) {
        let mut candidates = [None, None];
        if mid + p < hi {
            let f = forward(mid + p);
            if f > 0 {
                candidates[0] = Some((mid - backward(mid + p), mid + f));
            }
        }
        if mid >= lo + p {
            let f = forward(mid - p).min(hi - mid);
            if f > 0 {
                let b = if mid - p > lo { backward(mid - p) } else { 0 };
                candidates[1] = Some((mid - p - b, mid - p + f));
            }
        }
        for (a, c) in candidates.into_iter().flatten() {
            let end = c + p;
            if c - a >= p && a < mid && end > mid {
                out.insert(PeriodicSegment {
                    period: p,
                    start: a,
                    end,
                });
            }
        }
    }
}

/// Position in `seq` of index `k` of `seq[mid..hi] # seq[lo..hi]`.
fn fwd_index(k: usize, mid: usize, lo: usize, right: usize) -> Option<usize> {
    use std::cmp::Ordering::*;
    match k.cmp(&right) {
        Less => Some(mid + k),
        Equal => None,
        Greater => Some(lo + (k - right - 1)),
    }
}

/// Position in `seq` of index `k` of `rev(seq[lo..mid]) # rev(seq[lo..hi])`.
fn bwd_index(k: usize, mid: usize, hi: usize, left: usize) -> Option<usize> {
    use std::cmp::Ordering::*;
    match k.cmp(&left) {
        Less => Some(mid - 1 - k),
        Equal => None,
        Greater => Some(hi - 1 - (k - left - 1)),
    }
}
