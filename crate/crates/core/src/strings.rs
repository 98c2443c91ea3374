//! Sequence helpers over arbitrary comparable symbols.

/// First position of `needle` in `haystack` (Knuth–Morris–Pratt).
pub fn find_substring<T: Eq>(haystack: &[T], needle: &[T]) -> Option<usize> {
    if needle.is_empty() {
        return Some(0);
    }
    let mut fail = vec![0usize; needle.len()];
    let mut k = 0;
    for i in 1..needle.len() {
        while k > 0 && needle[i] != needle[k] {
            k = fail[k - 1];
        }
        if needle[i] == needle[k] {
            k += 1;
        }
        fail[i] = k;
    }
    let mut k = 0;
    for (i, x) in haystack.iter().enumerate() {
        while k > 0 && *x != needle[k] {
            k = fail[k - 1];
        }
        if *x == needle[k] {
            k += 1;
        }
        if k == needle.len() {
            return Some(i + 1 - k);
        }
    }
    None
}

/// Start index of the lexicographically least rotation (Booth's algorithm).
/// Ties between equal rotations resolve to the smallest index.
pub fn least_rotation<T: Ord>(s: &[T]) -> usize {
    let n = s.len();
    if n == 0 {
        return 0;
    }
    let at = |i: usize| &s[i % n];
    let mut fail: Vec<isize> = vec![-1; 2 * n];
    let mut k = 0usize;
    for j in 1..2 * n {
        let mut i = fail[j - k - 1];
        while i != -1 && at(j) != at(k + i as usize + 1) {
            if at(j) < at(k + i as usize + 1) {
                k = j - i as usize - 1;
            }
            i = fail[i as usize];
        }
        if i == -1 && at(j) != at(k + i.wrapping_add(1) as usize) {
            if at(j) < at(k) {
                k = j;
            }
            fail[j - k] = -1;
        } else {
            fail[j - k] = i + 1;
        }
    }
    k % n
}

/// Z-array under a caller-supplied equality on positions: `z[i]` is the
/// length of the longest common prefix of the sequence and its suffix at
/// `i`; `z[0] = len`.
pub(crate) fn z_array(len: usize, eq: impl Fn(usize, usize) -> bool) -> Vec<usize> {
    let mut z = vec![0; len];
    if len == 0 {
        return z;
    }
    z[0] = len;
    let (mut l, mut r) = (0usize, 0usize);
    for i in 1..len {
        if i < r {
            z[i] = (r - i).min(z[i - l]);
        }
        while i + z[i] < len && eq(z[i], i + z[i]) {
            z[i] += 1;
        }
        if i + z[i] > r {
            l = i;
            r = i + z[i];
        }
    }
    z
}
