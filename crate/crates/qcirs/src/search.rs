//! Controlled greedy search for column multipliers.
//!
//! With the base column fixed by a sieve candidate, a girth-`g` matrix is a
//! set of multipliers whose every structured cycle sum is nonzero. Each
//! constraint collapses to a dot product between per-column weights and the
//! chosen multipliers, so candidate extensions are tested incrementally: only
//! constraints touching the newest column are evaluated. The recursion scores
//! each compatible extension by how many other extensions survive it, visits
//! the best-scored branches first, and prunes branches that cannot reach the
//! target column count. With per-level branch budgets equal to `N` the search
//! is exhaustive; smaller budgets trade completeness for speed.

use std::collections::{HashMap, HashSet};
use std::sync::{Arc, LazyLock, Mutex};
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::cycles::{self, total_constraints, CoefficientForm};
use crate::expmat::{expand, fossorier_girth, tanner_girth, ExponentMatrix};
use crate::irs::{build_matrix, orbit_reduce, two_column_qualifies, IrsError, IrsMatrixSpec};
use crate::zring::{
    find_type1_generators, find_type2_generators, IrsCandidate, IrsType, Modulus, ZringError,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SearchError {
    #[error("girth target must be 8, 10, or 12, got {0}")]
    BadGirth(usize),
    #[error("matrix shape needs m >= 3 and n >= 2, got {m} x {n}")]
    BadShape { m: usize, n: usize },
    #[error("effort vector must have length {n} with entries in [1, N]")]
    BadEffort { n: usize },
    #[error(transparent)]
    Ring(#[from] ZringError),
    #[error(transparent)]
    Matrix(#[from] IrsError),
}

/// Per-level branch budgets for the recursion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EffortProfile {
    /// Every level may try all of `Z_N`: the search is exhaustive.
    Exhaustive,
    /// Full width at the first free level, then budgets 2, 2, 1, 1, ...
    Narrow,
    /// Explicit per-level budgets, one entry per column.
    Custom(Vec<u64>),
}

impl EffortProfile {
    /// The concrete budget vector of length `n` for lifting degree `N`.
    pub fn resolve(&self, n: usize, n_lift: u64) -> Result<Vec<u64>, SearchError> {
        let vec = match self {
            EffortProfile::Exhaustive => vec![n_lift; n],
            EffortProfile::Narrow => (0..n)
                .map(|i| match i {
                    0 | 1 => n_lift,
                    2 | 3 => 2.min(n_lift),
                    _ => 1,
                })
                .collect(),
            EffortProfile::Custom(v) => v.clone(),
        };
        if vec.len() != n || vec.iter().any(|&g| g == 0 || g > n_lift) {
            return Err(SearchError::BadEffort { n });
        }
        Ok(vec)
    }
}

/// Everything a single search run needs.
#[derive(Debug, Clone)]
pub struct SearchConfig {
    pub m: usize,
    pub n: usize,
    pub modulus: Modulus,
    pub girth: usize,
    pub effort: EffortProfile,
    /// Wall-clock cap per candidate; exceeding it reports the candidate as
    /// budget-exhausted, never as proven infeasible.
    pub budget: Option<Duration>,
    /// The search draws no randomness; kept as an explicit marker.
    pub deterministic_seedless: bool,
}

impl SearchConfig {
    pub fn new(
        m: usize,
        n: usize,
        modulus: Modulus,
        girth: usize,
        effort: EffortProfile,
    ) -> Result<Self, SearchError> {
        if !matches!(girth, 8 | 10 | 12) {
            return Err(SearchError::BadGirth(girth));
        }
        if m < 3 || n < 2 {
            return Err(SearchError::BadShape { m, n });
        }
        effort.resolve(n, modulus.get())?;
        Ok(SearchConfig {
            m,
            n,
            modulus,
            girth,
            effort,
            budget: None,
            deterministic_seedless: true,
        })
    }

    pub fn with_budget(mut self, budget: Option<Duration>) -> Self {
        self.budget = budget;
        self
    }
}

/// A found code: the candidate parameters plus the multiplier list, sorted
/// ascending and starting `0, 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeRecord {
    pub n_lift: u64,
    pub generator: u64,
    pub irs_type: IrsType,
    pub m: usize,
    pub n: usize,
    pub girth: usize,
    pub gammas: Vec<u64>,
}

impl CodeRecord {
    pub fn candidate(&self) -> Result<IrsCandidate, SearchError> {
        let modulus = Modulus::new(self.n_lift)?;
        Ok(IrsCandidate::new(
            modulus,
            self.generator,
            self.irs_type,
            self.m,
        )?)
    }

    pub fn matrix(&self) -> Result<ExponentMatrix, SearchError> {
        let spec = IrsMatrixSpec::new(self.candidate()?, self.gammas.clone())?;
        Ok(build_matrix(&spec, self.m)?)
    }

    /// Re-checks the record with the cycle-sum girth test.
    pub fn verify(&self) -> Result<bool, SearchError> {
        Ok(fossorier_girth(&self.matrix()?, 12).meets(self.girth))
    }

    /// Re-checks the record with the graph BFS oracle.
    pub fn verify_oracle(&self) -> Result<bool, SearchError> {
        Ok(tanner_girth(&expand(&self.matrix()?), self.girth).meets(self.girth))
    }
}

/// The recursion's working set: chosen multipliers and the compatible pool.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchState {
    pub gammas: Vec<u64>,
    pub compatible: Vec<u64>,
}

type CellKey = (usize, IrsType, usize, usize);

static REDUCED_CELLS: LazyLock<Mutex<HashMap<CellKey, Arc<Vec<CoefficientForm>>>>> =
    LazyLock::new(|| Mutex::new(HashMap::new()));

/// Orbit-reduced constraint forms of length `2k` on `m` rows and `j` column
/// slots: every footprint class placed at every row subset, then reduced by
/// the rotation group.
fn reduced_cell_forms(
    m: usize,
    irs_type: IrsType,
    j: usize,
    k: usize,
) -> Arc<Vec<CoefficientForm>> {
    let key = (m, irs_type, j, k);
    if let Some(hit) = REDUCED_CELLS.lock().unwrap().get(&key) {
        return Arc::clone(hit);
    }
    let mut placed = Vec::new();
    for i in 2..=k.min(m) {
        let classes = cycles::strict_classes(i, j, k);
        if classes.is_empty() {
            continue;
        }
        let cols: Vec<usize> = (0..j).collect();
        cycles::for_each_combination(m, i, |rows| {
            for form in classes.iter() {
                placed.push(form.placed(rows, &cols));
            }
        });
    }
    let reduced = orbit_reduce(&placed, m, irs_type);
    let arc = Arc::new(reduced);
    REDUCED_CELLS
        .lock()
        .unwrap()
        .entry(key)
        .or_insert_with(|| Arc::clone(&arc));
    arc
}

/// Per-candidate constraint tables: for each column count `j`, the weight
/// vectors `w` such that a cycle sum is `sum_s w[s] * gamma[cols[s]]` over an
/// ascending column subset.
pub struct SearchContext {
    n_lift: u64,
    max_cols: usize,
    /// Index `j - 2`: flattened weight vectors of length `j`.
    by_cols: Vec<Vec<u64>>,
}

impl SearchContext {
    /// Builds the tables for checks on up to `max_cols` columns at girth `g`.
    pub fn new(candidate: &IrsCandidate, g: usize, max_cols: usize) -> Self {
        assert!(
            matches!(g, 8 | 10 | 12),
            "girth target must be 8, 10, or 12"
        );
        let modulus = candidate.modulus();
        let n_lift = modulus.get();
        let base = candidate.base_column();
        let m = candidate.rows();
        let k_max = g / 2 - 1;
        let max_cols = max_cols.min(k_max).max(2);
        let mut by_cols = Vec::new();
        for j in 2..=max_cols {
            let mut seen: HashSet<Vec<u64>> = HashSet::new();
            let mut flat = Vec::new();
            for k in j.max(2)..=k_max {
                for form in reduced_cell_forms(m, candidate.irs_type(), j, k).iter() {
                    let mut w = vec![0i64; j];
                    for t in form.terms() {
                        w[t.col as usize] += t.coeff as i64 * base[t.row as usize] as i64;
                    }
                    let w: Vec<u64> = w.iter().map(|&x| modulus.reduce_signed(x)).collect();
                    // A weight vector and its negation test the same thing.
                    let neg: Vec<u64> = w.iter().map(|&x| modulus.neg(x)).collect();
                    let canon = w.clone().min(neg);
                    if seen.insert(canon) {
                        flat.extend_from_slice(&w);
                    }
                }
            }
            by_cols.push(flat);
        }
        SearchContext {
            n_lift,
            max_cols,
            by_cols,
        }
    }

    pub fn n_lift(&self) -> u64 {
        self.n_lift
    }

    /// True when appending `beta` keeps every constraint touching the new
    /// column nonzero; callers guarantee the prefix already passes.
    pub fn extension_ok(&self, gammas: &[u64], beta: u64) -> bool {
        let c = gammas.len();
        let n_lift = self.n_lift;
        for j in 2..=self.max_cols.min(c + 1) {
            let forms = &self.by_cols[j - 2];
            if forms.is_empty() {
                continue;
            }
            let mut ok = true;
            cycles::for_each_combination(c, j - 1, |subset| {
                if !ok {
                    return;
                }
                for w in forms.chunks_exact(j) {
                    let mut acc = w[j - 1] * beta % n_lift;
                    for (s, &col) in subset.iter().enumerate() {
                        acc = (acc + w[s] * gammas[col]) % n_lift;
                    }
                    if acc == 0 {
                        ok = false;
                        return;
                    }
                }
            });
            if !ok {
                return false;
            }
        }
        true
    }

    /// Full girth predicate over the whole multiplier list.
    pub fn rho(&self, gammas: &[u64]) -> bool {
        let l = gammas.len();
        let n_lift = self.n_lift;
        for j in 2..=self.max_cols.min(l) {
            let forms = &self.by_cols[j - 2];
            if forms.is_empty() {
                continue;
            }
            let mut ok = true;
            cycles::for_each_combination(l, j, |subset| {
                if !ok {
                    return;
                }
                for w in forms.chunks_exact(j) {
                    let mut acc = 0u64;
                    for (s, &col) in subset.iter().enumerate() {
                        acc = (acc + w[s] * gammas[col]) % n_lift;
                    }
                    if acc == 0 {
                        ok = false;
                        return;
                    }
                }
            });
            if !ok {
                return false;
            }
        }
        true
    }

    /// The compatible extensions of a passing prefix, ascending.
    pub fn phi(&self, gammas: &[u64]) -> Vec<u64> {
        (0..self.n_lift)
            .filter(|b| !gammas.contains(b) && self.extension_ok(gammas, *b))
            .collect()
    }

    /// For each pool element, the number of other pool elements that remain
    /// compatible after hypothetically choosing it.
    pub fn greedy_score(&self, state: &SearchState) -> Vec<usize> {
        let mut extended = state.gammas.clone();
        extended.push(0);
        state
            .compatible
            .iter()
            .map(|&chosen| {
                *extended.last_mut().unwrap() = chosen;
                state
                    .compatible
                    .iter()
                    .filter(|&&mu| mu != chosen && self.extension_ok(&extended, mu))
                    .count()
            })
            .collect()
    }
}

/// The girth predicate for a candidate and an arbitrary multiplier list.
pub fn rho(candidate: &IrsCandidate, gammas: &[u64], g: usize) -> bool {
    SearchContext::new(candidate, g, gammas.len()).rho(gammas)
}

/// Compatible extensions of `gammas` for a candidate; requires
/// `rho(candidate, gammas, g)`.
pub fn phi(candidate: &IrsCandidate, gammas: &[u64], g: usize) -> Vec<u64> {
    SearchContext::new(candidate, g, gammas.len() + 1).phi(gammas)
}

/// Scores each compatible element of the state; see
/// [`SearchContext::greedy_score`].
pub fn greedy_score(candidate: &IrsCandidate, state: &SearchState, g: usize) -> Vec<usize> {
    SearchContext::new(candidate, g, state.gammas.len() + 2).greedy_score(state)
}

struct Recursion<'a> {
    ctx: &'a SearchContext,
    target: usize,
    effort: &'a [u64],
    deadline: Option<Instant>,
    budget_hit: bool,
}

impl Recursion<'_> {
    /// Depth-first greedy descent. Branches are tried in decreasing score
    /// order (ties by ascending value); a branch whose pool cannot reach the
    /// target length is skipped.
    fn run(&mut self, state: SearchState) -> Option<Vec<u64>> {
        if state.gammas.len() == self.target {
            return Some(state.gammas);
        }
        if let Some(deadline) = self.deadline {
            if Instant::now() > deadline {
                self.budget_hit = true;
                return None;
            }
        }
        let scores = self.ctx.greedy_score(&state);
        let mut order: Vec<usize> = (0..state.compatible.len()).collect();
        order.sort_by(|&x, &y| scores[y].cmp(&scores[x]));
        let width = self.effort[state.gammas.len() - 1].min(state.compatible.len() as u64);

        let mut removed = vec![false; state.compatible.len()];
        for &idx in order.iter().take(width as usize) {
            let beta = state.compatible[idx];
            removed[idx] = true;
            let mut gammas = state.gammas.clone();
            gammas.push(beta);
            let pool: Vec<u64> = state
                .compatible
                .iter()
                .enumerate()
                .filter(|&(i, &mu)| !removed[i] && self.ctx.extension_ok(&gammas, mu))
                .map(|(_, &mu)| mu)
                .collect();
            if gammas.len() + pool.len() >= self.target {
                if let Some(found) = self.run(SearchState {
                    gammas,
                    compatible: pool,
                }) {
                    return Some(found);
                }
                if self.budget_hit {
                    return None;
                }
            }
        }
        None
    }
}

/// Runs the branch-limited recursion from an explicit state; returns a full
/// multiplier list in choice order, or nothing.
pub fn search_recursive(
    candidate: &IrsCandidate,
    state: SearchState,
    config: &SearchConfig,
) -> Option<Vec<u64>> {
    let ctx = SearchContext::new(candidate, config.girth, config.n + 1);
    let effort = config
        .effort
        .resolve(config.n, config.modulus.get())
        .expect("validated at construction");
    let mut rec = Recursion {
        ctx: &ctx,
        target: config.n,
        effort: &effort,
        deadline: config.budget.map(|b| Instant::now() + b),
        budget_hit: false,
    };
    rec.run(state)
}

/// Outcome of a candidate sweep at one lifting degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FindReport {
    pub record: Option<CodeRecord>,
    /// Some candidate ran out of wall clock; absence of a record is then not
    /// a proof of infeasibility.
    pub budget_exhausted: bool,
    pub candidates_tried: usize,
}

/// Sweeps the sieve candidates for `N` in ascending representative order and
/// searches each qualifying one until a record is found.
pub fn find_code(config: &SearchConfig) -> FindReport {
    let candidates = match config.m {
        3 => find_type2_generators(config.modulus),
        _ => find_type1_generators(config.modulus, config.m),
    };
    let mut report = FindReport {
        record: None,
        budget_exhausted: false,
        candidates_tried: 0,
    };
    for candidate in candidates {
        report.candidates_tried += 1;
        if !two_column_qualifies(&candidate, config.m, config.girth) {
            continue;
        }
        let ctx = SearchContext::new(&candidate, config.girth, config.n + 1);
        let effort = config
            .effort
            .resolve(config.n, config.modulus.get())
            .expect("validated at construction");
        let gammas = vec![0, 1];
        let state = SearchState {
            compatible: ctx.phi(&gammas),
            gammas,
        };
        let mut rec = Recursion {
            ctx: &ctx,
            target: config.n,
            effort: &effort,
            deadline: config.budget.map(|b| Instant::now() + b),
            budget_hit: false,
        };
        if let Some(mut gammas) = rec.run(state) {
            gammas.sort_unstable();
            report.record = Some(CodeRecord {
                n_lift: config.modulus.get(),
                generator: candidate.generator(),
                irs_type: candidate.irs_type(),
                m: config.m,
                n: config.n,
                girth: config.girth,
                gammas,
            });
            return report;
        }
        report.budget_exhausted |= rec.budget_hit;
    }
    report
}

/// Outcome of an ascending scan over lifting degrees.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanReport {
    pub found: Option<CodeRecord>,
    /// Degrees whose sweep hit the wall clock before finishing.
    pub budget_exhausted_at: Vec<u64>,
}

/// Scans `N = from..=to` in order, skipping degrees the sieve rejects, and
/// returns the first found record.
pub fn scan_nmin(
    m: usize,
    n: usize,
    g: usize,
    effort: EffortProfile,
    budget: Option<Duration>,
    from: u64,
    to: u64,
) -> Result<ScanReport, SearchError> {
    let mut report = ScanReport {
        found: None,
        budget_exhausted_at: Vec::new(),
    };
    for n_lift in from.max(2)..=to {
        let Ok(modulus) = Modulus::new(n_lift) else {
            continue;
        };
        let config = SearchConfig::new(m, n, modulus, g, effort.clone())?.with_budget(budget);
        let result = find_code(&config);
        if result.budget_exhausted {
            report.budget_exhausted_at.push(n_lift);
        }
        if result.record.is_some() {
            report.found = result.record;
            return Ok(report);
        }
    }
    Ok(report)
}

/// Expected solution counts under an independent-cycle model, in logarithms:
/// the unstructured space against the structured one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpectationEstimates {
    pub log10_e0: f64,
    pub log10_e1: f64,
}

impl ExpectationEstimates {
    pub fn e0(&self) -> f64 {
        10f64.powf(self.log10_e0)
    }

    pub fn e1(&self) -> f64 {
        10f64.powf(self.log10_e1)
    }
}

/// `E0 = N^{mn} (1 - 1/N)^{#P}` and `E1 = N^{n-2} (1 - 1/N)^{#P / max(3, m-1)}`
/// with `#P` the constraint total; diagnostic only.
pub fn expectation_estimates(m: usize, n: usize, g: usize, n_lift: u64) -> ExpectationEstimates {
    let constraints = total_constraints(m, n, g) as f64;
    let log_n = (n_lift as f64).log10();
    let log_miss = (1.0 - 1.0 / n_lift as f64).log10();
    ExpectationEstimates {
        log10_e0: (m * n) as f64 * log_n + constraints * log_miss,
        log10_e1: (n as f64 - 2.0) * log_n + constraints / 3.max(m - 1) as f64 * log_miss,
    }
}
