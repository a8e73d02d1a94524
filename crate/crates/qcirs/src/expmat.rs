//! Exponent matrices, their expansion to Tanner graphs, and girth checks.
//!
//! The algebraic check walks the strict-equivalence class representatives and
//! returns the smallest cycle length whose alternating sum vanishes modulo
//! `N`. The graph check expands the matrix into its bipartite Tanner graph
//! and measures the shortest cycle by truncated BFS, independent of any cycle
//! algebra, which makes the two mutually verifying.

use std::fmt;

use thiserror::Error;

use crate::cycles::{self, CoefficientForm};
use crate::zring::Modulus;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExpmatError {
    #[error("entry ({row}, {col}) is masked")]
    MaskedPosition { row: usize, col: usize },
    #[error("matrix rows have unequal lengths")]
    RaggedRows,
    #[error("matrix needs at least one row and one column")]
    Empty,
}

/// An `m x n` grid of circulant shifts over `Z_N`; entries may be masked
/// (contributing no edges when expanded).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExponentMatrix {
    rows: usize,
    cols: usize,
    modulus: Modulus,
    entries: Vec<Option<u64>>,
}

impl ExponentMatrix {
    /// Builds a fully connected matrix; entries are reduced modulo `N`.
    pub fn from_rows(modulus: Modulus, rows: Vec<Vec<u64>>) -> Result<Self, ExpmatError> {
        Self::from_masked_rows(
            modulus,
            rows.into_iter()
                .map(|r| r.into_iter().map(Some).collect())
                .collect(),
        )
    }

    /// Builds a matrix with optional masked entries (`None`).
    pub fn from_masked_rows(
        modulus: Modulus,
        rows: Vec<Vec<Option<u64>>>,
    ) -> Result<Self, ExpmatError> {
        if rows.is_empty() || rows[0].is_empty() {
            return Err(ExpmatError::Empty);
        }
        let cols = rows[0].len();
        if rows.iter().any(|r| r.len() != cols) {
            return Err(ExpmatError::RaggedRows);
        }
        let entries = rows
            .iter()
            .flatten()
            .map(|e| e.map(|x| modulus.reduce(x)))
            .collect();
        Ok(ExponentMatrix {
            rows: rows.len(),
            cols,
            modulus,
            entries,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    /// The shift at `(row, col)`, or `None` when masked.
    pub fn entry(&self, row: usize, col: usize) -> Option<u64> {
        self.entries[row * self.cols + col]
    }

    pub fn is_fully_connected(&self) -> bool {
        self.entries.iter().all(|e| e.is_some())
    }

    /// Every unmasked entry multiplied by `c` modulo `N`.
    pub fn scaled(&self, c: u64) -> Self {
        let c = self.modulus.reduce(c);
        ExponentMatrix {
            rows: self.rows,
            cols: self.cols,
            modulus: self.modulus,
            entries: self
                .entries
                .iter()
                .map(|e| e.map(|x| self.modulus.mul(x, c)))
                .collect(),
        }
    }

    /// Reorders rows and columns; `row_image[i]` is the new index of row `i`.
    pub fn permuted(&self, row_image: &[usize], col_image: &[usize]) -> Self {
        assert_eq!(row_image.len(), self.rows);
        assert_eq!(col_image.len(), self.cols);
        let mut entries = vec![None; self.entries.len()];
        for r in 0..self.rows {
            for c in 0..self.cols {
                entries[row_image[r] * self.cols + col_image[c]] = self.entry(r, c);
            }
        }
        ExponentMatrix {
            rows: self.rows,
            cols: self.cols,
            modulus: self.modulus,
            entries,
        }
    }
}

impl fmt::Display for ExponentMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let cells: Vec<String> = (0..self.cols)
                .map(|c| match self.entry(r, c) {
                    Some(x) => x.to_string(),
                    None => "-".to_string(),
                })
                .collect();
            writeln!(f, "[ {} ]", cells.join(" "))?;
        }
        Ok(())
    }
}

/// Alternating cycle sum of `form` over the matrix, reduced modulo `N`.
pub fn theta(p: &ExponentMatrix, form: &CoefficientForm) -> Result<u64, ExpmatError> {
    let mut acc: i64 = 0;
    for t in form.terms() {
        let (row, col) = (t.row as usize, t.col as usize);
        let entry = p
            .entry(row, col)
            .ok_or(ExpmatError::MaskedPosition { row, col })?;
        acc += t.coeff as i64 * entry as i64;
    }
    Ok(p.modulus().reduce_signed(acc))
}

/// Outcome of a girth measurement truncated at `cap`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GirthResult {
    /// The shortest cycle has exactly this length.
    Girth(usize),
    /// No cycle of length below `cap` exists.
    AtLeast(usize),
}

impl GirthResult {
    /// True when the measured girth is `g` or better.
    pub fn meets(self, g: usize) -> bool {
        match self {
            GirthResult::Girth(x) => x >= g,
            GirthResult::AtLeast(cap) => cap >= g,
        }
    }
}

impl fmt::Display for GirthResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GirthResult::Girth(x) => write!(f, "{x}"),
            GirthResult::AtLeast(cap) => write!(f, ">= {cap}"),
        }
    }
}

/// Girth of the expanded code via the cycle-sum condition: the smallest `2k`
/// with a class representative summing to zero modulo `N`, or `>= cap`.
///
/// Requires a fully connected matrix; masked matrices go through the graph
/// oracle instead. `cap` is at most 12 because fully connected matrices with
/// at least two rows and three columns always close a length-12 cycle.
pub fn fossorier_girth(p: &ExponentMatrix, cap: usize) -> GirthResult {
    assert!(
        p.is_fully_connected(),
        "cycle-sum girth needs a fully connected matrix"
    );
    assert!(
        cap.is_multiple_of(2) && (4..=12).contains(&cap),
        "cap must be an even value in 4..=12"
    );
    let (m, n) = (p.rows(), p.cols());
    let modulus = p.modulus().get() as i64;
    let values: Vec<i64> = p.entries.iter().map(|e| e.unwrap() as i64).collect();

    for k in 2..=cap / 2 - 1 {
        let mut hit = false;
        for i in 2..=k.min(m) {
            for j in 2..=k.min(n) {
                if hit {
                    continue;
                }
                let classes = cycles::strict_classes(i, j, k);
                if classes.is_empty() {
                    continue;
                }
                cycles::for_each_combination(m, i, |rows| {
                    if hit {
                        return;
                    }
                    cycles::for_each_combination(n, j, |cols| {
                        if hit {
                            return;
                        }
                        for form in classes.iter() {
                            let mut acc: i64 = 0;
                            for t in form.terms() {
                                let row = rows[t.row as usize];
                                let col = cols[t.col as usize];
                                acc += t.coeff as i64 * values[row * n + col];
                            }
                            if acc.rem_euclid(modulus) == 0 {
                                hit = true;
                                return;
                            }
                        }
                    });
                });
            }
        }
        if hit {
            return GirthResult::Girth(2 * k);
        }
    }
    GirthResult::AtLeast(cap)
}

/// Bipartite adjacency between check nodes and variable nodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TannerGraph {
    check_adj: Vec<Vec<u32>>,
    var_adj: Vec<Vec<u32>>,
}

impl TannerGraph {
    /// Builds a graph from explicit `(check, variable)` edges.
    pub fn from_edges(n_checks: usize, n_vars: usize, edges: &[(u32, u32)]) -> Self {
        let mut check_adj = vec![Vec::new(); n_checks];
        let mut var_adj = vec![Vec::new(); n_vars];
        for &(c, v) in edges {
            check_adj[c as usize].push(v);
            var_adj[v as usize].push(c);
        }
        for list in check_adj.iter_mut().chain(var_adj.iter_mut()) {
            list.sort_unstable();
            list.dedup();
        }
        TannerGraph { check_adj, var_adj }
    }

    pub fn n_checks(&self) -> usize {
        self.check_adj.len()
    }

    pub fn n_vars(&self) -> usize {
        self.var_adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.check_adj.iter().map(|l| l.len()).sum()
    }

    /// Neighbors of check node `c` (variable indices).
    pub fn check_neighbors(&self, c: usize) -> &[u32] {
        &self.check_adj[c]
    }

    /// Neighbors of variable node `v` (check indices).
    pub fn var_neighbors(&self, v: usize) -> &[u32] {
        &self.var_adj[v]
    }
}

/// Expands the matrix into its Tanner graph: each unmasked shift `p` at block
/// `(i, j)` connects check `(i, r)` to variable `(j, (r + p) mod N)` for every
/// block row `r`.
pub fn expand(p: &ExponentMatrix) -> TannerGraph {
    let n_lift = p.modulus().get() as usize;
    let mut edges = Vec::with_capacity(p.rows() * p.cols() * n_lift);
    for i in 0..p.rows() {
        for j in 0..p.cols() {
            if let Some(shift) = p.entry(i, j) {
                for r in 0..n_lift {
                    let check = (i * n_lift + r) as u32;
                    let var = (j * n_lift + (r + shift as usize) % n_lift) as u32;
                    edges.push((check, var));
                }
            }
        }
    }
    TannerGraph::from_edges(p.rows() * n_lift, p.cols() * n_lift, &edges)
}

/// Shortest-cycle length of the bipartite graph by BFS from every check node
/// (every cycle passes through one), truncated at `cap`.
pub fn tanner_girth(h: &TannerGraph, cap: usize) -> GirthResult {
    assert!(
        cap.is_multiple_of(2) && cap >= 4,
        "cap must be even and at least 4"
    );
    let n_checks = h.n_checks();
    let total = n_checks + h.n_vars();

    let mut best = cap;
    let mut dist = vec![0u32; total];
    let mut seen_at = vec![u32::MAX; total];
    let mut parent = vec![usize::MAX; total];
    let mut queue: Vec<usize> = Vec::new();
    let mut nbuf: Vec<usize> = Vec::new();

    for root in 0..n_checks {
        if best == 4 {
            break;
        }
        let stamp = root as u32;
        queue.clear();
        queue.push(root);
        seen_at[root] = stamp;
        dist[root] = 0;
        parent[root] = usize::MAX;
        let mut head = 0;
        while head < queue.len() {
            let x = queue[head];
            head += 1;
            // Anything deeper cannot improve on the best cycle so far.
            if dist[x] as usize >= best / 2 {
                continue;
            }
            // Vertex ids: checks as-is, variables shifted by n_checks.
            nbuf.clear();
            if x < n_checks {
                nbuf.extend(h.check_adj[x].iter().map(|&v| v as usize + n_checks));
            } else {
                nbuf.extend(h.var_adj[x - n_checks].iter().map(|&c| c as usize));
            }
            for &y in &nbuf {
                if seen_at[y] != stamp {
                    seen_at[y] = stamp;
                    dist[y] = dist[x] + 1;
                    parent[y] = x;
                    queue.push(y);
                } else if parent[x] != y {
                    let cycle = dist[x] as usize + dist[y] as usize + 1;
                    if cycle < best {
                        best = cycle;
                    }
                }
            }
        }
    }
    if best < cap {
        GirthResult::Girth(best)
    } else {
        GirthResult::AtLeast(cap)
    }
}

/// Serializes the graph in the plain-text alist interchange format.
///
/// Layout: variable and check counts, maximum degrees, the two degree lists,
/// then per-variable and per-check neighbor lists with 1-based indices. Each
/// list entry is followed by a single space and each line by a newline;
/// zero-degree nodes get an empty line.
pub fn export_alist(h: &TannerGraph) -> String {
    let mut out = String::new();
    let max_var = h.var_adj.iter().map(|l| l.len()).max().unwrap_or(0);
    let max_check = h.check_adj.iter().map(|l| l.len()).max().unwrap_or(0);
    out.push_str(&format!("{} {}\n", h.n_vars(), h.n_checks()));
    out.push_str(&format!("{max_var} {max_check}\n"));
    for degrees in [&h.var_adj, &h.check_adj] {
        for list in degrees.iter() {
            out.push_str(&format!("{} ", list.len()));
        }
        out.push('\n');
    }
    for list in h.var_adj.iter().chain(h.check_adj.iter()) {
        for &x in list {
            out.push_str(&format!("{} ", x + 1));
        }
        out.push('\n');
    }
    out
}
