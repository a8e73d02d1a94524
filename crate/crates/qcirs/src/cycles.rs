//! Cycle enumeration on exponent-matrix grids and strict-equivalence
//! bookkeeping.
//!
//! A cycle of length `2k` alternates row moves and column moves through the
//! grid and closes on itself. Its *coefficient form* records, per position,
//! the signed number of visits; two cycles are strictly equivalent exactly
//! when their forms agree up to a global sign, because then one alternating
//! sum vanishes modulo `N` iff the other does, for every matrix and every
//! `N`. Girth checking therefore only needs one representative form per
//! class, and the per-footprint class counts (the tracking matrices) turn
//! into closed-form constraint totals on bigger grids.

use std::collections::{HashMap, HashSet};
use std::sync::{Arc, LazyLock, Mutex};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CycleError {
    #[error("invalid cycle path: {0}")]
    InvalidPath(&'static str),
}

/// A grid position `(row, col)`.
pub type Pos = (u16, u16);

/// One signed entry of a coefficient form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FormTerm {
    pub row: u16,
    pub col: u16,
    pub coeff: i16,
}

/// A cycle as an ordered list of `2k` positions.
///
/// Even steps stay on a row and change column, odd steps stay on a column and
/// change row, and the last step closes back to the start. Positions may
/// repeat: a cycle can retrace part of the grid.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CyclePath {
    positions: Vec<Pos>,
}

impl CyclePath {
    pub fn new(positions: Vec<Pos>) -> Result<Self, CycleError> {
        let len = positions.len();
        if len < 4 || !len.is_multiple_of(2) {
            return Err(CycleError::InvalidPath("length must be even and >= 4"));
        }
        for s in 0..len {
            let (r0, c0) = positions[s];
            let (r1, c1) = positions[(s + 1) % len];
            if s % 2 == 0 {
                if r0 != r1 || c0 == c1 {
                    return Err(CycleError::InvalidPath(
                        "even steps must stay on a row and change column",
                    ));
                }
            } else if r0 == r1 || c0 != c1 {
                return Err(CycleError::InvalidPath(
                    "odd steps must stay on a column and change row",
                ));
            }
        }
        Ok(CyclePath { positions })
    }

    pub fn positions(&self) -> &[Pos] {
        &self.positions
    }

    pub fn half_length(&self) -> usize {
        self.positions.len() / 2
    }

    /// The signed visit counts of the cycle, positive on even steps.
    pub fn coefficient_form(&self) -> CoefficientForm {
        CoefficientForm::from_terms(self.positions.iter().enumerate().map(|(s, &(r, c))| {
            let coeff = if s % 2 == 0 { 1 } else { -1 };
            (r, c, coeff)
        }))
    }

    /// The lexicographically smallest ordering among the `2k` traversals of
    /// the same closed path (`k` even rotations in both directions).
    fn canonical_ordering(&self) -> Vec<Pos> {
        let p = &self.positions;
        let len = p.len();
        // Reversal keeps the row-first step structure only when combined
        // with a one-position shift.
        let reversed: Vec<Pos> = (0..len).map(|s| p[(1 + len - s) % len]).collect();
        let mut best: Option<Vec<Pos>> = None;
        for base in [p, &reversed] {
            for t in (0..len).step_by(2) {
                let mut cand = Vec::with_capacity(len);
                cand.extend_from_slice(&base[t..]);
                cand.extend_from_slice(&base[..t]);
                if best.as_ref().is_none_or(|b| cand < *b) {
                    best = Some(cand);
                }
            }
        }
        best.expect("cycle has at least one ordering")
    }
}

/// A formal integer linear form over grid positions: the cycle sum with the
/// matrix left symbolic.
///
/// Terms are kept sorted by position with zero coefficients dropped. A form
/// built from a cycle path always sums to zero; the all-cancelled (empty)
/// form marks an inevitable cycle.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct CoefficientForm {
    terms: Vec<FormTerm>,
}

impl CoefficientForm {
    pub fn from_terms<I: IntoIterator<Item = (u16, u16, i16)>>(iter: I) -> Self {
        let mut acc: HashMap<Pos, i16> = HashMap::new();
        for (row, col, coeff) in iter {
            *acc.entry((row, col)).or_insert(0) += coeff;
        }
        let mut terms: Vec<FormTerm> = acc
            .into_iter()
            .filter(|&(_, coeff)| coeff != 0)
            .map(|((row, col), coeff)| FormTerm { row, col, coeff })
            .collect();
        terms.sort_unstable();
        CoefficientForm { terms }
    }

    pub fn terms(&self) -> &[FormTerm] {
        &self.terms
    }

    /// True when every coefficient cancelled: the cycle is inevitable.
    pub fn is_degenerate(&self) -> bool {
        self.terms.is_empty()
    }

    /// Sign-normalized representative: negated when the first term (in
    /// row-major order) carries a negative coefficient.
    pub fn canonicalized(mut self) -> Self {
        if self.terms.first().is_some_and(|t| t.coeff < 0) {
            for t in &mut self.terms {
                t.coeff = -t.coeff;
            }
        }
        self
    }

    pub fn negated(mut self) -> Self {
        for t in &mut self.terms {
            t.coeff = -t.coeff;
        }
        self
    }

    /// Pointwise sum of two forms.
    pub fn add(&self, other: &Self) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .chain(other.terms.iter())
                .map(|t| (t.row, t.col, t.coeff)),
        )
    }

    /// Rewrites each row index through `image` (a permutation of the rows).
    pub fn permute_rows(&self, image: &[usize]) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .map(|t| (image[t.row as usize] as u16, t.col, t.coeff)),
        )
    }

    /// Embeds a small-grid form onto chosen row and column subsets of a
    /// larger grid.
    pub fn placed(&self, rows: &[usize], cols: &[usize]) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|t| FormTerm {
                row: rows[t.row as usize] as u16,
                col: cols[t.col as usize] as u16,
                coeff: t.coeff,
            })
            .collect::<Vec<_>>();
        // Subset placement is monotone, so terms stay sorted and nonzero.
        debug_assert!(terms.windows(2).all(|w| w[0] < w[1]));
        CoefficientForm { terms }
    }

    /// True when the support touches every one of `i` rows and `j` columns.
    pub fn support_is_full(&self, i: usize, j: usize) -> bool {
        let mut rows = vec![false; i];
        let mut cols = vec![false; j];
        for t in &self.terms {
            rows[t.row as usize] = true;
            cols[t.col as usize] = true;
        }
        rows.into_iter().all(|x| x) && cols.into_iter().all(|x| x)
    }
}

/// All length-`len` sequences over `0..symbols` whose cyclically adjacent
/// entries differ; optionally only those using every symbol.
fn cyclic_sequences(symbols: usize, len: usize, surjective: bool) -> Vec<Vec<u16>> {
    let mut out = Vec::new();
    let mut seq: Vec<u16> = Vec::with_capacity(len);
    fn rec(
        symbols: usize,
        len: usize,
        surjective: bool,
        seq: &mut Vec<u16>,
        out: &mut Vec<Vec<u16>>,
    ) {
        if seq.len() == len {
            if seq[0] != seq[len - 1] {
                let used = seq.iter().collect::<HashSet<_>>().len();
                if !surjective || used == symbols {
                    out.push(seq.clone());
                }
            }
            return;
        }
        for s in 0..symbols as u16 {
            if seq.last() == Some(&s) {
                continue;
            }
            // Not enough slots left to reach the unused symbols.
            if surjective {
                let used: HashSet<u16> = seq.iter().copied().collect();
                let missing = symbols - used.len() - usize::from(!used.contains(&s));
                if missing > len - seq.len() - 1 {
                    continue;
                }
            }
            seq.push(s);
            rec(symbols, len, surjective, seq, out);
            seq.pop();
        }
    }
    rec(symbols, len, surjective, &mut seq, &mut out);
    out
}

/// Builds the position list of the cycle with row sequence `rows` and column
/// sequence `cols` (both of length `k`).
fn positions_from_sequences(rows: &[u16], cols: &[u16]) -> Vec<Pos> {
    let k = rows.len();
    let mut p = Vec::with_capacity(2 * k);
    for t in 0..k {
        p.push((rows[t], cols[t]));
        p.push((rows[t], cols[(t + 1) % k]));
    }
    p
}

/// All cycles of length `2k` on an `i x j` grid that touch every row and
/// every column, one canonical ordering per closed path.
pub fn enumerate_cycles(i: usize, j: usize, k: usize) -> Vec<CyclePath> {
    assert!(i >= 2 && j >= 2, "grids need at least two rows and columns");
    assert!((2..=6).contains(&k), "half length must lie in 2..=6");
    let row_seqs = cyclic_sequences(i, k, true);
    let col_seqs = cyclic_sequences(j, k, true);
    let mut seen: HashSet<Vec<Pos>> = HashSet::new();
    for rows in &row_seqs {
        for cols in &col_seqs {
            let path = CyclePath {
                positions: positions_from_sequences(rows, cols),
            };
            seen.insert(path.canonical_ordering());
        }
    }
    let mut out: Vec<CyclePath> = seen
        .into_iter()
        .map(|positions| CyclePath { positions })
        .collect();
    out.sort_unstable();
    out
}

type ClassKey = (usize, usize, usize);

static CLASS_CACHE: LazyLock<Mutex<HashMap<ClassKey, Arc<Vec<CoefficientForm>>>>> =
    LazyLock::new(|| Mutex::new(HashMap::new()));

/// One canonical coefficient form per strict-equivalence class of length-`2k`
/// cycles whose support covers the full `i x j` grid.
///
/// Degenerate (all-cancelled) forms are dropped. Classes are grouped per
/// length: a long cycle occasionally shares its form with a shorter one, and
/// both lengths keep their class. Girth checks scan lengths in ascending
/// order, so such a duplicate is redundant rather than wrong.
pub fn strict_classes(i: usize, j: usize, k: usize) -> Arc<Vec<CoefficientForm>> {
    let key = (i, j, k);
    if let Some(hit) = CLASS_CACHE.lock().unwrap().get(&key) {
        return Arc::clone(hit);
    }

    let mut forms: HashSet<CoefficientForm> = HashSet::new();
    for path in enumerate_cycles(i, j, k) {
        let form = path.coefficient_form().canonicalized();
        if form.support_is_full(i, j) {
            forms.insert(form);
        }
    }
    let mut out: Vec<CoefficientForm> = forms.into_iter().collect();
    out.sort_unstable();

    let arc = Arc::new(out);
    CLASS_CACHE
        .lock()
        .unwrap()
        .entry(key)
        .or_insert_with(|| Arc::clone(&arc));
    arc
}

/// Per-footprint class counts for cycles of length `2k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrackingMatrix {
    k: usize,
    entries: Vec<Vec<u64>>,
}

impl TrackingMatrix {
    pub fn k(&self) -> usize {
        self.k
    }

    /// Class count for footprint `i x j` (1-based, like the matrix display);
    /// zero outside `2..=k`.
    pub fn count(&self, i: usize, j: usize) -> u64 {
        if (1..=self.k).contains(&i) && (1..=self.k).contains(&j) {
            self.entries[i - 1][j - 1]
        } else {
            0
        }
    }

    pub fn rows(&self) -> &[Vec<u64>] {
        &self.entries
    }
}

impl std::fmt::Display for TrackingMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let width = self
            .entries
            .iter()
            .flatten()
            .map(|e| e.to_string().len())
            .max()
            .unwrap_or(1);
        for row in &self.entries {
            let line: Vec<String> = row.iter().map(|e| format!("{e:>width$}")).collect();
            writeln!(f, "[ {} ]", line.join(" "))?;
        }
        Ok(())
    }
}

/// The `k x k` tracking matrix of length-`2k` class counts per footprint.
pub fn tracking_matrix(k: usize) -> TrackingMatrix {
    assert!((2..=5).contains(&k), "tracking matrices cover k = 2..=5");
    let mut entries = vec![vec![0u64; k]; k];
    for i in 2..=k {
        for j in 2..=k {
            entries[i - 1][j - 1] = strict_classes(i, j, k).len() as u64;
        }
    }
    TrackingMatrix { k, entries }
}

pub fn binomial(n: u64, r: u64) -> u64 {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    let mut acc: u128 = 1;
    for t in 0..r {
        acc = acc * (n - t) as u128 / (t + 1) as u128;
    }
    acc as u64
}

/// Number of strict-equivalence classes of length-`2k` cycles on an
/// `m x n` grid: the tracking counts weighted by the binomial number of
/// footprint placements.
pub fn class_count(m: usize, n: usize, k: usize) -> u64 {
    assert!(m >= 2 && n >= 2, "grids need at least two rows and columns");
    let tracking = tracking_matrix(k);
    let mut total = 0u64;
    for i in 2..=k.min(m) {
        for j in 2..=k.min(n) {
            total +=
                tracking.count(i, j) * binomial(m as u64, i as u64) * binomial(n as u64, j as u64);
        }
    }
    total
}

/// Total number of constraints a girth-`g` matrix must satisfy: classes of
/// every length below `g`.
pub fn total_constraints(m: usize, n: usize, g: usize) -> u64 {
    assert!(
        matches!(g, 6 | 8 | 10 | 12),
        "girth target must be one of 6, 8, 10, 12"
    );
    (2..=g / 2 - 1).map(|k| class_count(m, n, k)).sum()
}

/// All class representative forms of length `2k` on the full `m x n` grid:
/// every footprint class placed at every row/column subset.
pub fn class_representatives_of_length(m: usize, n: usize, k: usize) -> Vec<CoefficientForm> {
    let mut out = Vec::new();
    for i in 2..=k.min(m) {
        for j in 2..=k.min(n) {
            let classes = strict_classes(i, j, k);
            if classes.is_empty() {
                continue;
            }
            for_each_combination(m, i, |rows| {
                for_each_combination(n, j, |cols| {
                    for form in classes.iter() {
                        out.push(form.placed(rows, cols));
                    }
                });
            });
        }
    }
    out
}

/// The full constraint set for a girth-`g` check on an `m x n` grid.
pub fn class_representatives(m: usize, n: usize, g: usize) -> Vec<CoefficientForm> {
    assert!(
        matches!(g, 6 | 8 | 10 | 12),
        "girth target must be one of 6, 8, 10, 12"
    );
    let mut out = Vec::new();
    for k in 2..=g / 2 - 1 {
        out.extend(class_representatives_of_length(m, n, k));
    }
    out
}

/// Calls `f` with every size-`r` ascending index subset of `0..n`.
pub(crate) fn for_each_combination<F: FnMut(&[usize])>(n: usize, r: usize, mut f: F) {
    if r > n {
        return;
    }
    let mut idx: Vec<usize> = (0..r).collect();
    loop {
        f(&idx);
        // Rightmost index that can still advance.
        let mut pos = r;
        while pos > 0 && idx[pos - 1] == pos - 1 + n - r {
            pos -= 1;
        }
        if pos == 0 {
            return;
        }
        idx[pos - 1] += 1;
        for t in pos..r {
            idx[t] = idx[t - 1] + 1;
        }
    }
}

/// Lower bounds on the lifting degree of a girth-10 code: the classic pair
/// count `2 C(m,2) C(n,2) + 1` and the corrected value that discounts pairs
/// of fully disjoint 4-cycles, `classic - 2 C(m-2,2) C(n-2,2)`.
pub fn lower_bound_girth10(m: usize, n: usize) -> (u64, u64) {
    assert!(m >= 2 && n >= 2, "grids need at least two rows and columns");
    let classic = 2 * binomial(m as u64, 2) * binomial(n as u64, 2) + 1;
    let corrected = classic - 2 * binomial(m as u64 - 2, 2) * binomial(n as u64 - 2, 2);
    (classic, corrected)
}
