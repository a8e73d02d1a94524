//! Structured exponent matrices seeded by the integer-ring sieve.
//!
//! A structured matrix has first column zero, second column
//! `(0, 1, a, ..., a^{m-2})`, and every further column a scalar multiple of
//! the second. The generator `a` buys an extra equivalence between cycles:
//! rotating the nonzero rows (type-I) or all three rows (type-II) multiplies
//! every cycle sum by a unit, so one representative per rotation orbit is
//! enough when checking girth. This module builds the matrices, realizes the
//! row rotations, reduces constraint sets by their orbits, and classifies
//! lifting degrees into sieve maps.

use rayon::prelude::*;
use thiserror::Error;

use crate::cycles::CoefficientForm;
use crate::expmat::{fossorier_girth, ExponentMatrix};
use crate::zring::{find_type1_generators, find_type2_generators, IrsCandidate, IrsType, Modulus};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IrsError {
    #[error("candidate serves m = {expected} rows, requested {requested}")]
    RowMismatch { expected: usize, requested: usize },
    #[error("multipliers must start 0, 1 and strictly increase below N")]
    BadMultipliers,
    #[error("rotation shift {l} out of range for m = {m}")]
    BadShift { l: usize, m: usize },
    #[error("row image {0:?} is not a permutation")]
    NotAPermutation(Vec<usize>),
}

/// A sieve candidate together with its ordered column multipliers
/// `(0, 1, gamma_2, ...)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IrsMatrixSpec {
    candidate: IrsCandidate,
    gammas: Vec<u64>,
}

impl IrsMatrixSpec {
    /// Multipliers must begin `0, 1` and strictly increase; this is the
    /// canonical emitted shape, not a search-time requirement.
    pub fn new(candidate: IrsCandidate, gammas: Vec<u64>) -> Result<Self, IrsError> {
        let n = candidate.modulus().get();
        let canonical = gammas.len() >= 2
            && gammas[0] == 0
            && gammas[1] == 1
            && gammas.windows(2).all(|w| w[0] < w[1])
            && gammas.iter().all(|&g| g < n);
        if !canonical {
            return Err(IrsError::BadMultipliers);
        }
        Ok(IrsMatrixSpec { candidate, gammas })
    }

    pub fn candidate(&self) -> &IrsCandidate {
        &self.candidate
    }

    pub fn gammas(&self) -> &[u64] {
        &self.gammas
    }
}

/// The matrix with columns `gamma_j * base` for an arbitrary multiplier list;
/// column order and duplicates are taken as given.
pub fn smc_matrix(modulus: Modulus, base_column: &[u64], gammas: &[u64]) -> ExponentMatrix {
    let rows = base_column
        .iter()
        .map(|&b| gammas.iter().map(|&g| modulus.mul(b, g)).collect())
        .collect();
    ExponentMatrix::from_rows(modulus, rows).expect("structured matrices are rectangular")
}

/// Builds the full structured matrix of `spec`: entry `(i, j)` is
/// `u(i) a^{i-1} gamma_j` with `u(0) = 0`.
pub fn build_matrix(spec: &IrsMatrixSpec, m: usize) -> Result<ExponentMatrix, IrsError> {
    if spec.candidate.rows() != m {
        return Err(IrsError::RowMismatch {
            expected: spec.candidate.rows(),
            requested: m,
        });
    }
    Ok(smc_matrix(
        spec.candidate.modulus(),
        &spec.candidate.base_column(),
        &spec.gammas,
    ))
}

/// A permutation of row indices, stored as the image vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowPermutation {
    image: Vec<usize>,
}

impl RowPermutation {
    pub fn new(image: Vec<usize>) -> Result<Self, IrsError> {
        let mut seen = vec![false; image.len()];
        for &x in &image {
            if x >= image.len() || seen[x] {
                return Err(IrsError::NotAPermutation(image));
            }
            seen[x] = true;
        }
        Ok(RowPermutation { image })
    }

    pub fn identity(m: usize) -> Self {
        RowPermutation {
            image: (0..m).collect(),
        }
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    pub fn apply(&self, row: usize) -> usize {
        self.image[row]
    }

    /// `self` after `other`: the composition `self(other(i))`.
    pub fn compose(&self, other: &Self) -> Self {
        RowPermutation {
            image: other.image.iter().map(|&i| self.image[i]).collect(),
        }
    }
}

/// The type-I row rotation: fixes row 0 and rotates rows `1..m` by `l`.
pub fn pi_type1(l: usize, m: usize) -> Result<RowPermutation, IrsError> {
    if l == 0 || l >= m {
        return Err(IrsError::BadShift { l, m });
    }
    let image = (0..m)
        .map(|i| if i == 0 { 0 } else { (i + l) % m + (i + l) / m })
        .collect();
    RowPermutation::new(image)
}

/// The type-II three-row rotations, as image vectors: the first sends rows
/// `0, 1, 2` to `2, 0, 1` and multiplies every cycle sum by `-a`; applying it
/// twice gives the second.
pub fn pi_type2(l: usize) -> Result<RowPermutation, IrsError> {
    match l {
        1 => RowPermutation::new(vec![2, 0, 1]),
        2 => RowPermutation::new(vec![1, 2, 0]),
        _ => Err(IrsError::BadShift { l, m: 3 }),
    }
}

/// The full rotation group for a structure type, identity included.
fn rotation_group(m: usize, irs_type: IrsType) -> Vec<RowPermutation> {
    match irs_type {
        IrsType::TypeI => (1..m)
            .map(|l| pi_type1(l, m).expect("shift in range"))
            .collect(),
        IrsType::TypeII => vec![
            RowPermutation::identity(3),
            pi_type2(1).expect("shift in range"),
            pi_type2(2).expect("shift in range"),
        ],
    }
}

/// One representative per orbit of the row-rotation group, composed with
/// sign canonicalization. Checking the representatives is equivalent to
/// checking the whole set on any structured matrix of the same type.
pub fn orbit_reduce(
    forms: &[CoefficientForm],
    m: usize,
    irs_type: IrsType,
) -> Vec<CoefficientForm> {
    if irs_type == IrsType::TypeII {
        assert_eq!(m, 3, "type-II structures have exactly three rows");
    }
    let group = rotation_group(m, irs_type);
    let mut reps: Vec<CoefficientForm> = forms
        .iter()
        .map(|form| {
            group
                .iter()
                .map(|pi| form.permute_rows(pi.image()).canonicalized())
                .min()
                .expect("rotation group is nonempty")
        })
        .collect();
    reps.sort_unstable();
    reps.dedup();
    reps
}

/// True when the two-column matrix `[0 | base]` of the candidate already
/// meets girth `g`; extensions can only lose girth, so this gates the search.
pub fn two_column_qualifies(candidate: &IrsCandidate, m: usize, g: usize) -> bool {
    assert_eq!(
        candidate.rows(),
        m,
        "candidate serves a different row count"
    );
    let p = smc_matrix(candidate.modulus(), &candidate.base_column(), &[0, 1]);
    fossorier_girth(&p, 12).meets(g)
}

/// Per-lifting-degree sieve outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SievePixel {
    /// No admissible generator exists in `Z_N`.
    NoSubgroup,
    /// Generators exist but no two-column matrix reaches the girth target.
    SubgroupNoGirth,
    /// At least one generator qualifies.
    Qualified,
}

fn classify(n: u64, m: usize, irs_type: IrsType, g: usize) -> SievePixel {
    let Ok(modulus) = Modulus::new(n) else {
        return SievePixel::NoSubgroup;
    };
    let candidates = match irs_type {
        IrsType::TypeI => find_type1_generators(modulus, m),
        IrsType::TypeII => find_type2_generators(modulus),
    };
    if candidates.is_empty() {
        SievePixel::NoSubgroup
    } else if candidates.iter().any(|c| two_column_qualifies(c, m, g)) {
        SievePixel::Qualified
    } else {
        SievePixel::SubgroupNoGirth
    }
}

/// Classifies every `N` in `from..=to`, in order.
pub fn sieve_map(from: u64, to: u64, m: usize, irs_type: IrsType, g: usize) -> Vec<SievePixel> {
    assert!(from >= 1 && from <= to && to <= 1_000_000);
    (from..=to)
        .into_par_iter()
        .map(|n| classify(n, m, irs_type, g))
        .collect()
}

/// A sieve configuration whose qualified fraction is being measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SieveConfig {
    pub irs_type: IrsType,
    pub m: usize,
    pub g: usize,
}

/// Qualified count as an exact fraction of the sieved range.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SieveFraction {
    pub qualified: u64,
    pub total: u64,
}

impl SieveFraction {
    pub fn percent(&self) -> f64 {
        self.qualified as f64 * 100.0 / self.total as f64
    }

    /// Percentage rounded to one decimal, as printed in reports.
    pub fn percent_one_decimal(&self) -> String {
        format!("{:.1}", self.percent())
    }
}

/// Qualified fractions for several configurations over the same range.
pub fn sieve_stats(from: u64, to: u64, configs: &[SieveConfig]) -> Vec<SieveFraction> {
    configs
        .iter()
        .map(|cfg| {
            let qualified = sieve_map(from, to, cfg.m, cfg.irs_type, cfg.g)
                .into_iter()
                .filter(|p| *p == SievePixel::Qualified)
                .count() as u64;
            SieveFraction {
                qualified,
                total: to - from + 1,
            }
        })
        .collect()
}

/// Renders a sieve map as a plain-text grayscale image (`P2`), `width` pixels
/// per row: 0 for no subgroup, 128 for subgroup without girth, 255 for
/// qualified. Trailing pixels of the last row are 0.
pub fn sieve_map_pgm(pixels: &[SievePixel], width: usize) -> String {
    let rows = pixels.len().div_ceil(width);
    let mut out = format!("P2\n{width} {rows}\n255\n");
    render_rows(pixels, width, rows, &mut out, |p| {
        match p {
            None | Some(SievePixel::NoSubgroup) => "0",
            Some(SievePixel::SubgroupNoGirth) => "128",
            Some(SievePixel::Qualified) => "255",
        }
        .to_string()
    });
    out
}

/// Renders a sieve map as a plain-text color image (`P3`): black, red, white.
pub fn sieve_map_ppm(pixels: &[SievePixel], width: usize) -> String {
    let rows = pixels.len().div_ceil(width);
    let mut out = format!("P3\n{width} {rows}\n255\n");
    render_rows(pixels, width, rows, &mut out, |p| {
        match p {
            None | Some(SievePixel::NoSubgroup) => "0 0 0",
            Some(SievePixel::SubgroupNoGirth) => "255 0 0",
            Some(SievePixel::Qualified) => "255 255 255",
        }
        .to_string()
    });
    out
}

fn render_rows(
    pixels: &[SievePixel],
    width: usize,
    rows: usize,
    out: &mut String,
    cell: impl Fn(Option<SievePixel>) -> String,
) {
    for r in 0..rows {
        let line: Vec<String> = (0..width)
            .map(|c| cell(pixels.get(r * width + c).copied()))
            .collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cycles::{class_representatives, class_representatives_of_length};
    use crate::expmat::GirthResult;

    fn modulus(n: u64) -> Modulus {
        Modulus::new(n).unwrap()
    }

    fn type2(n: u64, a: u64) -> IrsCandidate {
        IrsCandidate::new(modulus(n), a, IrsType::TypeII, 3).unwrap()
    }

    fn type1(n: u64, a: u64, m: usize) -> IrsCandidate {
        IrsCandidate::new(modulus(n), a, IrsType::TypeI, m).unwrap()
    }

    #[test]
    fn build_matrix_published_record_shape() {
        let spec = IrsMatrixSpec::new(type2(37, 27), vec![0, 1, 3, 24]).unwrap();
        let p = build_matrix(&spec, 3).unwrap();
        assert_eq!((p.rows(), p.cols()), (3, 4));
        let col1: Vec<u64> = (0..3).map(|i| p.entry(i, 1).unwrap()).collect();
        assert_eq!(col1, vec![0, 1, 27]);
        // Entry check against u(i) a^{i-1} gamma_j directly.
        assert_eq!(p.entry(2, 3), Some(27 * 24 % 37));
    }

    #[test]
    fn build_matrix_base_column_is_powers() {
        let spec = IrsMatrixSpec::new(type1(73, 8, 4), vec![0, 1]).unwrap();
        let p = build_matrix(&spec, 4).unwrap();
        let col1: Vec<u64> = (0..4).map(|i| p.entry(i, 1).unwrap()).collect();
        assert_eq!(col1, vec![0, 1, 8, 64]);
        let col0: Vec<u64> = (0..4).map(|i| p.entry(i, 0).unwrap()).collect();
        assert_eq!(col0, vec![0, 0, 0, 0]);
    }

    #[test]
    fn build_matrix_rejects_row_mismatch() {
        let spec = IrsMatrixSpec::new(type1(73, 8, 4), vec![0, 1]).unwrap();
        assert!(build_matrix(&spec, 5).is_err());
    }

    #[test]
    fn spec_multipliers_must_be_canonical() {
        assert!(IrsMatrixSpec::new(type2(37, 27), vec![0, 1, 24, 3]).is_err());
        assert!(IrsMatrixSpec::new(type2(37, 27), vec![0, 2, 3]).is_err());
        assert!(IrsMatrixSpec::new(type2(37, 27), vec![0, 1, 40]).is_err());
    }

    #[test]
    fn pi_type1_matches_closed_form() {
        assert_eq!(pi_type1(1, 4).unwrap().image(), &[0, 2, 3, 1]);
        assert_eq!(pi_type1(2, 5).unwrap().image(), &[0, 3, 4, 1, 2]);
        // Rotating by one, m - 1 times, comes back to the identity.
        let m = 5;
        let step = pi_type1(1, m).unwrap();
        let mut acc = RowPermutation::identity(m);
        for _ in 0..m - 1 {
            acc = step.compose(&acc);
        }
        assert_eq!(acc, RowPermutation::identity(m));
        assert_eq!(pi_type1(m - 1, m).unwrap(), RowPermutation::identity(m));
        assert!(pi_type1(0, 4).is_err());
        assert!(pi_type1(4, 4).is_err());
    }

    #[test]
    fn pi_type2_cycles() {
        assert_eq!(pi_type2(1).unwrap().image(), &[2, 0, 1]);
        assert_eq!(pi_type2(2).unwrap().image(), &[1, 2, 0]);
        let pi = pi_type2(1).unwrap();
        assert_eq!(pi.compose(&pi), pi_type2(2).unwrap());
        assert_eq!(pi.compose(&pi.compose(&pi)), RowPermutation::identity(3));
        assert!(pi_type2(3).is_err());
    }

    #[test]
    fn orbit_reduction_on_two_column_grid() {
        // Three squares and six length-8 classes on a 3 x 2 grid reduce to
        // one and two representatives.
        let squares = class_representatives_of_length(3, 2, 2);
        assert_eq!(squares.len(), 3);
        assert_eq!(orbit_reduce(&squares, 3, IrsType::TypeII).len(), 1);

        let eights = class_representatives_of_length(3, 2, 4);
        assert_eq!(eights.len(), 6);
        assert_eq!(orbit_reduce(&eights, 3, IrsType::TypeII).len(), 2);

        let all = class_representatives(3, 2, 12);
        assert_eq!(orbit_reduce(&all, 3, IrsType::TypeII).len(), 3);
    }

    #[test]
    fn orbit_reduction_factor_bound() {
        for (m, n, ty) in [
            (3, 3, IrsType::TypeII),
            (4, 3, IrsType::TypeI),
            (5, 2, IrsType::TypeI),
        ] {
            let forms = class_representatives(m, n, 10);
            let reduced = orbit_reduce(&forms, m, ty);
            assert!(reduced.len() <= forms.len());
            let factor = 3.max(m - 1);
            assert!(
                reduced.len() >= forms.len() / factor,
                "m={m} n={n}: {} -> {}",
                forms.len(),
                reduced.len()
            );
        }
    }

    #[test]
    fn same_subgroup_generators_share_column_values() {
        // 8 and 64 both generate {1, 8, 64} in Z_73.
        let a = type1(73, 8, 4);
        let b = type1(73, 64, 4);
        let mut col_a = a.base_column();
        let mut col_b = b.base_column();
        col_a.sort_unstable();
        col_b.sort_unstable();
        assert_eq!(col_a, col_b);
    }

    #[test]
    fn scaled_type2_matrix_is_row_swapped_conjugate() {
        for (n, a) in [(7u64, 3u64), (37, 11), (301, 80)] {
            let md = modulus(n);
            let b = crate::zring::pow_mod(a, 5, md);
            let pa = smc_matrix(md, &type2(n, a).base_column(), &[0, 1]);
            let pb = smc_matrix(md, &type2(n, b).base_column(), &[0, 1]);
            let scaled = pa.scaled(b);
            let swapped = scaled.permuted(&[0, 2, 1], &[0, 1]);
            assert_eq!(swapped, pb, "n={n} a={a}");
        }
    }

    #[test]
    fn two_column_qualification_examples() {
        assert!(two_column_qualifies(&type2(37, 27), 3, 12));
        assert!(two_column_qualifies(&type2(73, 9), 3, 12));
        assert!(!two_column_qualifies(&type1(216, 73, 4), 4, 12));
        assert!(two_column_qualifies(&type1(216, 73, 4), 4, 8));
        // 6 generates the order-3 subgroup {1, 6, 36} of Z_215.
        assert!(two_column_qualifies(&type1(215, 6, 4), 4, 12));
    }

    #[test]
    fn sieve_map_classifications() {
        let map = sieve_map(1, 80, 3, IrsType::TypeII, 12);
        assert_eq!(map[0], SievePixel::NoSubgroup); // N = 1
        assert_eq!(map[72], SievePixel::Qualified); // N = 73
        let map = sieve_map(1, 10, 4, IrsType::TypeI, 12);
        assert_eq!(map[7], SievePixel::NoSubgroup); // N = 8: group exponent 2
                                                    // N = 7 has the subgroup {1, 2, 4} but 2*1 - 0 - 2 = 0 mod 7 closes
                                                    // a length-8 cycle in the two-column matrix.
        assert_eq!(map[6], SievePixel::SubgroupNoGirth);
        let map = sieve_map(215, 216, 4, IrsType::TypeI, 12);
        assert_eq!(map[0], SievePixel::Qualified); // N = 215 via a = 6
    }

    #[test]
    fn pgm_rendering_shape() {
        let pixels = sieve_map(1, 250, 4, IrsType::TypeI, 12);
        let text = sieve_map_pgm(&pixels, 100);
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("P2"));
        assert_eq!(lines.next(), Some("100 3"));
        assert_eq!(lines.next(), Some("255"));
        let rows: Vec<&str> = lines.collect();
        assert_eq!(rows.len(), 3);
        assert!(rows.iter().all(|r| r.split_whitespace().count() == 100));
        // Padding beyond N = 250 renders black.
        assert!(rows[2].split_whitespace().skip(50).all(|p| p == "0"));
    }

    #[test]
    fn theorem_identities_on_structured_matrices() {
        use crate::expmat::theta;
        // Type-I: multiplying a cycle sum by a^l matches rotating its rows.
        let cand = type1(73, 8, 4);
        let spec = IrsMatrixSpec::new(cand, vec![0, 1, 34, 47]).unwrap();
        let p = build_matrix(&spec, 4).unwrap();
        let md = modulus(73);
        for form in class_representatives(4, 4, 10) {
            let t = theta(&p, &form).unwrap();
            for l in 1..4 {
                let pi = pi_type1(l, 4).unwrap();
                let rotated = theta(&p, &form.permute_rows(pi.image())).unwrap();
                let scaled = md.mul(crate::zring::pow_mod(8, l as u64, md), t);
                assert_eq!(scaled, rotated, "l={l}");
            }
        }
        // Type-II: one rotation negates and multiplies by a.
        let cand = type2(37, 27);
        let spec = IrsMatrixSpec::new(cand, vec![0, 1, 3, 24]).unwrap();
        let p = build_matrix(&spec, 3).unwrap();
        let md = modulus(37);
        for form in class_representatives(3, 4, 10) {
            let t = theta(&p, &form).unwrap();
            let rotated = theta(&p, &form.permute_rows(pi_type2(1).unwrap().image())).unwrap();
            assert_eq!(rotated, md.neg(md.mul(27, t)));
            let rotated2 = theta(&p, &form.permute_rows(pi_type2(2).unwrap().image())).unwrap();
            assert_eq!(rotated2, md.mul(md.mul(27, 27), t));
        }
    }

    #[test]
    fn orbit_reduced_checks_agree_with_full_checks() {
        // Girth verdicts must not change when only orbit representatives are
        // tested on structured matrices.
        let cases: Vec<(IrsCandidate, Vec<u64>)> = vec![
            (type2(37, 27), vec![0, 1, 3, 24]),
            (type2(37, 27), vec![0, 1, 2, 3]),
            (type2(73, 9), vec![0, 1, 3, 13]),
            (type1(73, 8, 4), vec![0, 1, 34, 47]),
            (type1(73, 8, 4), vec![0, 1, 2, 47]),
        ];
        for (cand, gammas) in cases {
            let p = smc_matrix(cand.modulus(), &cand.base_column(), &gammas);
            let m = cand.rows();
            let full = class_representatives(m, gammas.len(), 10);
            let reduced = orbit_reduce(&full, m, cand.irs_type());
            let zero_full = full
                .iter()
                .any(|f| crate::expmat::theta(&p, f).unwrap() == 0);
            let zero_reduced = reduced
                .iter()
                .any(|f| crate::expmat::theta(&p, f).unwrap() == 0);
            assert_eq!(zero_full, zero_reduced, "gammas {gammas:?}");
        }
    }

    #[test]
    fn qualified_two_columns_have_tanner_girth_twelve() {
        use crate::expmat::{expand, tanner_girth};
        for n in [7u64, 13, 37, 73, 91] {
            for cand in find_type2_generators(modulus(n)) {
                let p = smc_matrix(modulus(n), &cand.base_column(), &[0, 1]);
                assert_eq!(
                    tanner_girth(&expand(&p), 14),
                    GirthResult::Girth(12),
                    "n={n}"
                );
            }
        }
    }
}
