//! Sequence primitives shared by the ingest, diff and metrics stages.

/// Unit-cost Levenshtein distance between two sequences.
pub fn levenshtein<T: PartialEq>(a: &[T], b: &[T]) -> usize {
    if a.is_empty() {
        return b.len();
    }
    if b.is_empty() {
        return a.len();
    }
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    let mut cur = vec![0; b.len() + 1];
    for (i, x) in a.iter().enumerate() {
        cur[0] = i + 1;
        for (j, y) in b.iter().enumerate() {
            let subst = prev[j] + usize::from(x != y);
            cur[j + 1] = subst.min(prev[j + 1] + 1).min(cur[j] + 1);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

/// Levenshtein distance over Unicode code points.
pub fn char_levenshtein(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    levenshtein(&a, &b)
}

/// How two items may be aligned.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Match {
    No,
    /// Aligned at no cost.
    Exact,
    /// Aligned, but an alignment with fewer of these is preferred.
    Loose,
}

/// Matched index pairs `(i, j)` of a longest common subsequence of `a` and `b`,
/// strictly increasing in both coordinates.
///
/// Among all maximum-length alignments the one chosen minimises the sum, over
/// the unmatched gaps between consecutive matches, of `max(deleted, inserted)`.
/// That keeps the number of positionally fusable delete/insert pairs maximal,
/// which makes the fused replace count independent of argument order.
pub fn lcs_alignment<T: PartialEq>(a: &[T], b: &[T]) -> Vec<(usize, usize)> {
    lcs_alignment_by(a, b, |x, y| if x == y { Match::Exact } else { Match::No })
}

/// [`lcs_alignment`] with a custom match relation. Ties between maximum-length
/// alignments go first to fewer [`Match::Loose`] pairs, then to the gap rule.
pub fn lcs_alignment_by<T>(a: &[T], b: &[T], relation: impl Fn(&T, &T) -> Match) -> Vec<(usize, usize)> {
    // An exactly matching common prefix never affects the optimum. The suffix
    // is left to the table so ties resolve toward earlier matches.
    let prefix = a
        .iter()
        .zip(b)
        .take_while(|(x, y)| relation(x, y) == Match::Exact)
        .count();
    let mut pairs: Vec<(usize, usize)> = (0..prefix).map(|k| (k, k)).collect();
    pairs.extend(
        align_core(&a[prefix..], &b[prefix..], &relation)
            .into_iter()
            .map(|(i, j)| (i + prefix, j + prefix)),
    );
    pairs
}

fn align_core<T>(a: &[T], b: &[T], relation: &impl Fn(&T, &T) -> Match) -> Vec<(usize, usize)> {
    let (n, m) = (a.len(), b.len());
    if n == 0 || m == 0 {
        return Vec::new();
    }
    // score = matches * weight - loose * penalty - edits, where edits counts
    // substitutions and indels. penalty exceeds any edit count and weight
    // exceeds any penalty total, so the criteria apply in that order.
    let penalty = (n + m + 1) as i64;
    let weight = penalty * (n.min(m) as i64 + 1) + penalty;
    let gain = |i: usize, j: usize| match relation(&a[i], &b[j]) {
        Match::No => None,
        Match::Exact => Some(weight),
        Match::Loose => Some(weight - penalty),
    };
    let width = m + 1;
    let mut best = vec![0i64; (n + 1) * width];
    for i in (0..=n).rev() {
        for j in (0..=m).rev() {
            let idx = i * width + j;
            if i == n || j == m {
                best[idx] = -(((n - i) + (m - j)) as i64);
                continue;
            }
            let gap = best[(i + 1) * width + j].max(best[i * width + j + 1]) - 1;
            let diag = best[(i + 1) * width + j + 1];
            // A loose match is never worse than substituting the same items.
            best[idx] = gap.max(diag - 1).max(gain(i, j).map_or(i64::MIN, |g| diag + g));
        }
    }

    let mut pairs = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < n && j < m {
        let here = best[i * width + j];
        let diag = best[(i + 1) * width + j + 1];
        if gain(i, j).is_some_and(|g| here == diag + g) {
            pairs.push((i, j));
            i += 1;
            j += 1;
        } else if here == diag - 1 {
            i += 1;
            j += 1;
        } else if here == best[(i + 1) * width + j] - 1 {
            i += 1;
        } else {
            j += 1;
        }
    }
    pairs
}
