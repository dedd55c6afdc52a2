//! Affine search in d-space. Fixing d+1 affinely independent pattern points
//! pins the affine map: by Cramer's rule each unknown of `pF + t = a` is a
//! ratio of determinants, linear in the matched scene coordinates. Each
//! remaining pattern point then yields d linear equations over the scene
//! coordinates (one per axis), with coefficients depending only on the
//! pattern once the nonzero determinant is multiplied through. Stacking the
//! `l = d(k - d - 1)` equations gives a linear degeneracy test over `R^l`.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::geom::linalg;
use crate::geom::{
    distinct_points_filter, MatchReport, Pattern, PatternKind, Scene, SearchOptions,
    SearchOutcome, Transform,
};
use crate::ksum::{solve, LdtInstance, SolveMode, SolveOptions};
use crate::numeric::{Rational, RingElement};

/// One linear equation `sum_r coeffs[r] * a_{r, coord} + constant = 0`
/// pinning the image of pattern point `point` along axis `coord`.
#[derive(Debug, Clone)]
pub struct CoeffRow {
    pub point: usize,
    pub coord: usize,
    pub coeffs: Vec<Rational>,
    /// Always zero: the equations are homogeneous in the scene coordinates.
    pub constant: Rational,
}

/// The pattern-side precomputation for affine search.
#[derive(Debug, Clone)]
pub struct AffineEncoding {
    /// Indices of the d+1 affinely independent pattern points (greedy
    /// first independent prefix).
    basis: Vec<usize>,
    /// The (d+1)x(d+1) matrix of basis points with a trailing ones column.
    qmat: Vec<Vec<Rational>>,
    det_q: Rational,
    /// Adjugate of `qmat`: `adj[m][r]` is the cofactor of entry `(r, m)`.
    adj_q: Vec<Vec<Rational>>,
    coeff_rows: Vec<CoeffRow>,
    k: usize,
    d: usize,
}

impl AffineEncoding {
    pub fn basis(&self) -> &[usize] {
        &self.basis
    }

    pub fn qmat(&self) -> &[Vec<Rational>] {
        &self.qmat
    }

    pub fn det_q(&self) -> &Rational {
        &self.det_q
    }

    pub fn coeff_rows(&self) -> &[CoeffRow] {
        &self.coeff_rows
    }

    /// Number of stacked equations, `d (k - d - 1)`.
    pub fn equation_count(&self) -> usize {
        self.coeff_rows.len()
    }

    /// Solves for the affine map sending each basis pattern point to the
    /// corresponding point of `images` (indexed like the pattern).
    pub fn recover(&self, images: &[Vec<Rational>]) -> Transform {
        let d = self.d;
        let mut matrix = vec![vec![Rational::zero(); d]; d];
        let mut translation = vec![Rational::zero(); d];
        for j in 0..d {
            // unknown m of column j: sum_r adj[m][r] * rhs[r] / det
            for m in 0..=d {
                let mut acc = Rational::zero();
                for (r, &pi) in self.basis.iter().enumerate() {
                    acc += &self.adj_q[m][r] * &images[pi][j];
                }
                acc /= &self.det_q;
                if m < d {
                    matrix[m][j] = acc;
                } else {
                    translation[j] = acc;
                }
            }
        }
        Transform::Affine { matrix, translation }
    }
}

/// Builds the coefficient rows for a pattern. Fails with `RankDeficient`
/// if no d+1 pattern points are affinely independent.
pub fn affine_encoding(pattern: &Pattern) -> Result<AffineEncoding> {
    if pattern.kind() != PatternKind::Affine {
        return Err(Error::BadPattern("not an affine pattern".into()));
    }
    let d = pattern.dim();
    let k = pattern.len();

    // greedy first independent prefix of homogeneous rows (p_i, 1)
    let hom = |i: usize| -> Vec<Rational> {
        let mut row = pattern.points()[i].clone();
        row.push(Rational::from_integer(1.into()));
        row
    };
    let mut basis: Vec<usize> = Vec::with_capacity(d + 1);
    let mut rows: Vec<Vec<Rational>> = Vec::with_capacity(d + 1);
    for i in 0..k {
        if basis.len() == d + 1 {
            break;
        }
        rows.push(hom(i));
        if linalg::rank(&rows) == rows.len() {
            basis.push(i);
        } else {
            rows.pop();
        }
    }
    if basis.len() < d + 1 {
        return Err(Error::RankDeficient);
    }

    let qmat = rows;
    let (det_q, inv) = linalg::det_inverse(&qmat).expect("basis rows are independent");
    // adjugate = inverse * det
    let adj_q: Vec<Vec<Rational>> = inv
        .iter()
        .map(|row| row.iter().map(|x| x * &det_q).collect())
        .collect();

    // For extra point i: det * (p_i F_j + t_j - a_{i,j}) = 0 expands to
    // sum_r (q_i . adj_col_r) a_{basis_r, j} - det * a_{i,j} = 0. The
    // coefficients are the same for every axis j.
    let mut coeff_rows = Vec::with_capacity(d * (k - d - 1));
    for i in (0..k).filter(|i| !basis.contains(i)) {
        let qi = hom(i);
        let mut coeffs = vec![Rational::zero(); k];
        for (r, &pi) in basis.iter().enumerate() {
            let mut acc = Rational::zero();
            for (m, q) in qi.iter().enumerate() {
                acc += q * &adj_q[m][r];
            }
            coeffs[pi] = acc;
        }
        coeffs[i] = -det_q.clone();
        for j in 0..d {
            coeff_rows.push(CoeffRow {
                point: i,
                coord: j,
                coeffs: coeffs.clone(),
                constant: Rational::zero(),
            });
        }
    }

    Ok(AffineEncoding { basis, qmat, det_q, adj_q, coeff_rows, k, d })
}

/// Encodes "some k scene points form an affine image of the pattern" as an
/// LDT instance over `R^l`. Every set is a copy of the scene lifted so that
/// equation slot `s` carries the scene coordinate `coeff_rows[s].coord`.
pub fn affine_to_ldt(
    pattern: &Pattern,
    scene: &Scene,
) -> Result<(LdtInstance, AffineEncoding)> {
    let enc = affine_encoding(pattern)?;
    if scene.dim() != pattern.dim() {
        return Err(Error::BadInstance(format!(
            "scene dimension {} does not match pattern dimension {}",
            scene.dim(),
            pattern.dim()
        )));
    }
    let l = enc.equation_count();
    let k = enc.k;

    let mut beta = Vec::with_capacity(k + 1);
    beta.push(RingElement::Vector(vec![Rational::zero(); l]));
    for r in 0..k {
        beta.push(RingElement::Vector(
            enc.coeff_rows.iter().map(|row| row.coeffs[r].clone()).collect(),
        ));
    }

    let lifted: Vec<RingElement> = scene
        .points()
        .iter()
        .map(|p| {
            RingElement::Vector(enc.coeff_rows.iter().map(|row| p[row.coord].clone()).collect())
        })
        .collect();
    let sets = vec![lifted; k];
    Ok((LdtInstance::new(beta, sets)?, enc))
}

/// Searches the scene for an affine image of the pattern.
pub fn search_affine(
    pattern: &Pattern,
    scene: &Scene,
    opts: &SearchOptions,
) -> Result<SearchOutcome> {
    let mut outcome = SearchOutcome::default();
    if scene.len() < pattern.len() {
        // still validate the pattern before deciding "no"
        affine_encoding(pattern)?;
        return Ok(outcome);
    }
    let (ldt, enc) = affine_to_ldt(pattern, scene)?;
    let filter = distinct_points_filter(scene);
    let solve_opts = SolveOptions {
        strategy: opts.strategy,
        mode: opts.mode,
        seed: opts.seed,
        retry_cap: opts.retry_cap,
    };
    let decision = solve(&ldt, &solve_opts, Some(&filter))?;
    outcome.stats.absorb(&decision.stats);
    let mut dedup: BTreeMap<Vec<usize>, MatchReport> = BTreeMap::new();
    for tuple in &decision.solutions {
        let report = report_from_tuple(&enc, pattern, scene, &tuple.indices);
        dedup.entry(tuple.indices.clone()).or_insert(report);
    }
    outcome.reports = dedup.into_values().collect();
    if opts.mode == SolveMode::Decide {
        outcome.reports.truncate(1);
    }
    Ok(outcome)
}

/// Decide-mode wrapper: the first verified affine match, if any.
pub fn find_affine(
    pattern: &Pattern,
    scene: &Scene,
    opts: &SearchOptions,
) -> Result<Option<MatchReport>> {
    let opts = SearchOptions { mode: SolveMode::Decide, ..opts.clone() };
    Ok(search_affine(pattern, scene, &opts)?.reports.into_iter().next())
}

fn report_from_tuple(
    enc: &AffineEncoding,
    pattern: &Pattern,
    scene: &Scene,
    indices: &[usize],
) -> MatchReport {
    // images indexed like the pattern: pattern point i maps to indices[i]
    let images: Vec<Vec<Rational>> = indices
        .iter()
        .map(|&idx| scene.points()[idx].clone())
        .collect();
    let transform = enc.recover(&images);
    let report = MatchReport { indices: indices.to_vec(), transform };
    assert!(
        report.maps_exactly(pattern, scene),
        "verified affine witness must map the pattern exactly"
    );
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{rational_int, Rational};

    fn pts2(coords: &[[i64; 2]]) -> Vec<Vec<Rational>> {
        coords
            .iter()
            .map(|p| vec![rational_int(p[0]), rational_int(p[1])])
            .collect()
    }

    fn unit_square_cycle() -> Pattern {
        // vertex order walks around the quadrilateral
        Pattern::affine(2, pts2(&[[0, 0], [1, 0], [1, 1], [0, 1]])).unwrap()
    }

    fn unit_square_rowwise() -> Pattern {
        Pattern::affine(2, pts2(&[[0, 0], [1, 0], [0, 1], [1, 1]])).unwrap()
    }

    #[test]
    fn square_in_cycle_order_yields_parallelogram_coefficients() {
        // expected: a1 - a2 + a3 - a4 = 0 on both axes
        let (ldt, enc) = affine_to_ldt(
            &unit_square_cycle(),
            &Scene::new(2, pts2(&[[0, 0]])).unwrap(),
        )
        .unwrap();
        assert_eq!(enc.equation_count(), 2);
        let expect = |vals: &[i64]| {
            RingElement::Vector(vals.iter().map(|&v| rational_int(v)).collect())
        };
        assert_eq!(ldt.beta()[0], expect(&[0, 0]));
        assert_eq!(ldt.beta()[1], expect(&[1, 1]));
        assert_eq!(ldt.beta()[2], expect(&[-1, -1]));
        assert_eq!(ldt.beta()[3], expect(&[1, 1]));
        assert_eq!(ldt.beta()[4], expect(&[-1, -1]));
    }

    #[test]
    fn square_rowwise_forces_fourth_corner() {
        // a4 = a2 + a3 - a1, i.e. coefficients (-1, 1, 1, -1) up to sign
        let enc = affine_encoding(&unit_square_rowwise()).unwrap();
        assert_eq!(enc.basis(), &[0, 1, 2]);
        let row = &enc.coeff_rows()[0];
        let det = enc.det_q().clone();
        let scaled: Vec<Rational> = row.coeffs.iter().map(|c| c / &det).collect();
        assert_eq!(
            scaled,
            vec![rational_int(-1), rational_int(1), rational_int(1), rational_int(-1)]
        );
        assert!(row.constant.is_zero());
    }

    #[test]
    fn every_equation_vanishes_on_the_pattern_itself() {
        let p = Pattern::affine(
            2,
            pts2(&[[0, 0], [1, 0], [0, 1], [1, 1], [2, 3]]),
        )
        .unwrap();
        let enc = affine_encoding(&p).unwrap();
        assert_eq!(enc.equation_count(), 4);
        for row in enc.coeff_rows() {
            let mut acc = row.constant.clone();
            for (r, c) in row.coeffs.iter().enumerate() {
                acc += c * &p.points()[r][row.coord];
            }
            assert!(acc.is_zero(), "pattern must satisfy its own equations");
        }
    }

    #[test]
    fn basis_skips_collinear_prefixes() {
        // first three points are collinear; the basis must reach past them
        let p = Pattern::affine(
            2,
            pts2(&[[0, 0], [1, 0], [2, 0], [0, 1], [5, 7]]),
        )
        .unwrap();
        let enc = affine_encoding(&p).unwrap();
        assert_eq!(enc.basis(), &[0, 1, 3]);
    }

    #[test]
    fn planted_parallelogram_is_found_with_exact_transform() {
        let p = unit_square_rowwise();
        let scene = Scene::new(
            2,
            pts2(&[[0, 0], [2, 1], [1, 3], [3, 4], [9, 0], [-3, 5]]),
        )
        .unwrap();
        let report = find_affine(&p, &scene, &SearchOptions::default())
            .unwrap()
            .expect("parallelogram is an affine square");
        assert_eq!(report.indices, vec![0, 1, 2, 3]);
        match &report.transform {
            Transform::Affine { matrix, translation } => {
                assert_eq!(matrix[0], vec![rational_int(2), rational_int(1)]);
                assert_eq!(matrix[1], vec![rational_int(1), rational_int(3)]);
                assert_eq!(translation, &vec![rational_int(0), rational_int(0)]);
            }
            _ => panic!("expected an affine transform"),
        }
        assert!(report.maps_exactly(&p, &scene));
    }

    #[test]
    fn self_match_recovers_identity() {
        let p = Pattern::affine(2, pts2(&[[1, 2], [4, 3], [2, 8], [7, 7]])).unwrap();
        let scene = Scene::new(2, p.points().to_vec()).unwrap();
        let report = find_affine(&p, &scene, &SearchOptions::default())
            .unwrap()
            .expect("pattern matches itself");
        match &report.transform {
            Transform::Affine { matrix, translation } => {
                assert_eq!(matrix[0], vec![rational_int(1), rational_int(0)]);
                assert_eq!(matrix[1], vec![rational_int(0), rational_int(1)]);
                assert_eq!(translation, &vec![rational_int(0), rational_int(0)]);
            }
            _ => panic!("expected an affine transform"),
        }
    }

    #[test]
    fn degenerate_images_are_legal_matches() {
        // 4 distinct collinear points are an affine image of the square
        let p = unit_square_rowwise();
        let scene = Scene::new(2, pts2(&[[0, 0], [1, 1], [2, 2], [3, 3]])).unwrap();
        let report = find_affine(&p, &scene, &SearchOptions::default())
            .unwrap()
            .expect("degenerate parallelogram still matches");
        assert!(report.maps_exactly(&p, &scene));
    }

    #[test]
    fn three_dimensional_patterns_work() {
        let pts3: Vec<Vec<Rational>> = [
            [0, 0, 0],
            [1, 0, 0],
            [0, 1, 0],
            [0, 0, 1],
            [1, 1, 1],
        ]
        .iter()
        .map(|p| p.iter().map(|&x| rational_int(x)).collect())
        .collect();
        let p = Pattern::affine(3, pts3.clone()).unwrap();
        let enc = affine_encoding(&p).unwrap();
        assert_eq!(enc.equation_count(), 3);
        let scene = Scene::new(3, pts3).unwrap();
        let report = find_affine(&p, &scene, &SearchOptions::default())
            .unwrap()
            .expect("self match in 3-space");
        assert_eq!(report.indices, vec![0, 1, 2, 3, 4]);
    }
}
