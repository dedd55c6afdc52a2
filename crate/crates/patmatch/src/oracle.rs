//! Independent brute-force matchers used as ground truth in every
//! equivalence test. They re-derive the geometry from first principles
//! (anchor-pair solves, overdetermined-system consistency, distance-ratio
//! identities) and deliberately share no code with the LDT encodings in
//! [`crate::geom`], so an agreement between the two is meaningful.

use std::collections::HashMap;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::geom::{MatchReport, OrientationPolicy, Pattern, PatternKind, Scene, Transform};
use crate::ksum::{SolveMode, DEFAULT_TUPLE_BUDGET};
use crate::numeric::{ComplexRational, Rational};

fn budget() -> u64 {
    std::env::var("PATMATCH_BUDGET")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_TUPLE_BUDGET)
}

/// Exhaustive similarity matcher: for every ordered pair of scene points
/// taken as images of the first two pattern points, solve for the map and
/// look the remaining images up in the scene. Tries both orientations when
/// asked. Reports are sorted by index tuple and deduplicated.
pub fn oracle_similar(
    pattern: &Pattern,
    scene: &Scene,
    orientation: OrientationPolicy,
    mode: SolveMode,
) -> Result<Vec<MatchReport>> {
    if pattern.kind() != PatternKind::Similarity {
        return Err(Error::BadPattern("not a similarity pattern".into()));
    }
    if scene.dim() != 2 {
        return Err(Error::BadInstance("similarity oracle needs a plane scene".into()));
    }
    let n = scene.len() as u128;
    if n * n > budget() as u128 {
        return Err(Error::BudgetExceeded { needed: n * n, budget: budget() });
    }

    let k = pattern.len();
    let p: Vec<ComplexRational> = (0..k).map(|i| pattern.point_complex(i)).collect();
    let s: Vec<ComplexRational> = (0..scene.len()).map(|i| scene.point_complex(i)).collect();
    let by_coord = coordinate_index(scene.points());

    let mirrored_flags: &[bool] = match orientation {
        OrientationPolicy::DirectOnly => &[false],
        OrientationPolicy::MirroredOnly => &[true],
        OrientationPolicy::Both => &[false, true],
    };

    let mut found: Vec<MatchReport> = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    'pairs: for i1 in 0..s.len() {
        for i2 in 0..s.len() {
            if i1 == i2 || s[i1] == s[i2] {
                continue;
            }
            for &mirrored in mirrored_flags {
                let span = &p[1] - &p[0];
                let (w, base) = if mirrored {
                    ((&s[i2] - &s[i1]) / span.conj(), p[0].conj())
                } else {
                    ((&s[i2] - &s[i1]) / &span, p[0].clone())
                };
                let z = &s[i1] - &w * base;
                let apply = |q: &ComplexRational| -> ComplexRational {
                    let q = if mirrored { q.conj() } else { q.clone() };
                    &w * q + &z
                };
                // candidate scene indices per remaining pattern point
                let mut choices: Vec<&[usize]> = Vec::with_capacity(k - 2);
                let mut feasible = true;
                for q in &p[2..] {
                    let img = apply(q);
                    match by_coord.get(&[img.re.clone(), img.im.clone()][..]) {
                        Some(idxs) => choices.push(idxs),
                        None => {
                            feasible = false;
                            break;
                        }
                    }
                }
                if !feasible {
                    continue;
                }
                let transform = Transform::Similarity {
                    scale_rotation: w.clone(),
                    translation: z.clone(),
                    mirrored,
                };
                let mut emitted = false;
                expand_choices(&[i1, i2], &choices, &mut |indices| {
                    if seen.insert(indices.to_vec()) {
                        found.push(MatchReport {
                            indices: indices.to_vec(),
                            transform: transform.clone(),
                        });
                        emitted = true;
                    }
                });
                if emitted && mode == SolveMode::Decide {
                    break 'pairs;
                }
            }
        }
    }
    found.sort_by(|a, b| a.indices.cmp(&b.indices));
    if mode == SolveMode::Decide {
        found.truncate(1);
    }
    Ok(found)
}

/// Exhaustive affine matcher: for every ordered (d+1)-tuple of scene points
/// taken as images of the pattern's independent points, solve the linear
/// system for `(F, t)` by Gaussian elimination and look the remaining
/// images up in the scene.
pub fn oracle_affine(
    pattern: &Pattern,
    scene: &Scene,
    mode: SolveMode,
) -> Result<Vec<MatchReport>> {
    if pattern.kind() != PatternKind::Affine {
        return Err(Error::BadPattern("not an affine pattern".into()));
    }
    let d = pattern.dim();
    if scene.dim() != d {
        return Err(Error::BadInstance(format!(
            "scene dimension {} does not match pattern dimension {d}",
            scene.dim()
        )));
    }
    let n = scene.len() as u128;
    let needed = n.pow(d as u32 + 1);
    if needed > budget() as u128 {
        return Err(Error::BudgetExceeded { needed, budget: budget() });
    }

    let k = pattern.len();
    let basis = independent_points(pattern).ok_or(Error::RankDeficient)?;
    let rest: Vec<usize> = (0..k).filter(|i| !basis.contains(i)).collect();
    let by_coord = coordinate_index(scene.points());

    // homogeneous pattern rows of the basis
    let q: Vec<Vec<Rational>> = basis
        .iter()
        .map(|&i| {
            let mut row = pattern.points()[i].clone();
            row.push(Rational::from_integer(1.into()));
            row
        })
        .collect();

    let mut found: Vec<MatchReport> = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    let mut anchor = vec![0usize; d + 1];
    let mut done = false;
    enumerate_tuples(scene.len(), &mut anchor, &mut |anchor| {
        if done {
            return;
        }
        // anchors must be pairwise distinct as indices and as coordinates
        for (a, &ia) in anchor.iter().enumerate() {
            for &ib in &anchor[a + 1..] {
                if ia == ib || scene.points()[ia] == scene.points()[ib] {
                    return;
                }
            }
        }
        // solve Q (F_j; t_j) = rhs_j for every axis j
        let rhs: Vec<Vec<Rational>> = (0..d)
            .map(|j| anchor.iter().map(|&ia| scene.points()[ia][j].clone()).collect())
            .collect();
        let Some(solutions) = gaussian_solve_multi(&q, &rhs) else {
            return;
        };
        let mut matrix = vec![vec![Rational::zero(); d]; d];
        let mut translation = vec![Rational::zero(); d];
        for (j, col) in solutions.iter().enumerate() {
            for m in 0..d {
                matrix[m][j] = col[m].clone();
            }
            translation[j] = col[d].clone();
        }
        let transform = Transform::Affine { matrix, translation };

        let mut choices: Vec<&[usize]> = Vec::with_capacity(rest.len());
        for &i in &rest {
            let img = transform.apply(&pattern.points()[i]);
            match by_coord.get(&img[..]) {
                Some(idxs) => choices.push(idxs),
                None => return,
            }
        }
        // assemble the full tuple in pattern order
        let mut emitted = false;
        expand_choices_general(&basis, anchor, &rest, &choices, k, scene, &mut |indices| {
            if seen.insert(indices.to_vec()) {
                found.push(MatchReport { indices: indices.to_vec(), transform: transform.clone() });
                emitted = true;
            }
        });
        if emitted && mode == SolveMode::Decide {
            done = true;
        }
    });
    found.sort_by(|a, b| a.indices.cmp(&b.indices));
    if mode == SolveMode::Decide {
        found.truncate(1);
    }
    Ok(found)
}

/// First-principles similarity test on a fixed correspondence: all pairwise
/// squared distances share one ratio and all signed triangle areas scale by
/// that ratio with a consistent sign (positive for direct, negative for
/// mirrored). Complete for point sets, including collinear ones.
pub fn tuple_is_similar_copy(
    pattern: &Pattern,
    points: &[Vec<Rational>],
    mirrored: bool,
) -> bool {
    let k = pattern.len();
    if points.len() != k {
        return false;
    }
    let p: Vec<ComplexRational> = (0..k).map(|i| pattern.point_complex(i)).collect();
    let a: Vec<ComplexRational> = points
        .iter()
        .map(|q| ComplexRational::new(q[0].clone(), q[1].clone()))
        .collect();
    let d2 = |x: &ComplexRational, y: &ComplexRational| -> Rational {
        let diff = x - y;
        &diff.re * &diff.re + &diff.im * &diff.im
    };
    let cross = |o: &ComplexRational, x: &ComplexRational, y: &ComplexRational| -> Rational {
        let u = x - o;
        let v = y - o;
        &u.re * &v.im - &u.im * &v.re
    };
    let scale_p = d2(&p[0], &p[1]);
    let scale_a = d2(&a[0], &a[1]);
    if scale_a.is_zero() {
        return false;
    }
    for i in 0..k {
        for j in i + 1..k {
            if d2(&a[i], &a[j]) * &scale_p != d2(&p[i], &p[j]) * &scale_a {
                return false;
            }
        }
    }
    let sign = if mirrored { -Rational::from_integer(1.into()) } else { Rational::from_integer(1.into()) };
    for i in 0..k {
        for j in i + 1..k {
            for l in j + 1..k {
                let lhs = cross(&a[i], &a[j], &a[l]) * &scale_p;
                let rhs = cross(&p[i], &p[j], &p[l]) * &scale_a * &sign;
                if lhs != rhs {
                    return false;
                }
            }
        }
    }
    true
}

/// First-principles affine test on a fixed correspondence: the full
/// `k x (d+1)` system `p_i F_j + t_j = a_{i,j}` is consistent for every
/// axis, checked by row-reducing the augmented matrix. No basis selection,
/// no Cramer coefficients.
pub fn tuple_is_affine_image(pattern: &Pattern, points: &[Vec<Rational>]) -> bool {
    let k = pattern.len();
    let d = pattern.dim();
    if points.len() != k {
        return false;
    }
    for j in 0..d {
        // augmented rows: (p_i, 1 | a_{i,j})
        let rows: Vec<Vec<Rational>> = (0..k)
            .map(|i| {
                let mut row = pattern.points()[i].clone();
                row.push(Rational::from_integer(1.into()));
                row.push(points[i][j].clone());
                row
            })
            .collect();
        if !consistent(rows) {
            return false;
        }
    }
    true
}

/// Index of scene coordinates to the positions carrying them.
fn coordinate_index(points: &[Vec<Rational>]) -> HashMap<Vec<Rational>, Vec<usize>> {
    let mut map: HashMap<Vec<Rational>, Vec<usize>> = HashMap::new();
    for (i, p) in points.iter().enumerate() {
        map.entry(p.clone()).or_default().push(i);
    }
    map
}

/// Greedy prefix of affinely independent pattern points, by row reduction.
fn independent_points(pattern: &Pattern) -> Option<Vec<usize>> {
    let d = pattern.dim();
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    let mut chosen = Vec::new();
    for (i, p) in pattern.points().iter().enumerate() {
        if chosen.len() == d + 1 {
            break;
        }
        let mut row = p.clone();
        row.push(Rational::from_integer(1.into()));
        rows.push(row);
        if row_rank(rows.clone()) == rows.len() {
            chosen.push(i);
        } else {
            rows.pop();
        }
    }
    (chosen.len() == d + 1).then_some(chosen)
}

fn row_rank(mut m: Vec<Vec<Rational>>) -> usize {
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        for i in r + 1..m.len() {
            if m[i][c].is_zero() {
                continue;
            }
            let f = &m[i][c] / &m[r][c];
            for j in c..cols {
                let s = &f * &m[r][j];
                m[i][j] = &m[i][j] - &s;
            }
        }
        r += 1;
        if r == m.len() {
            break;
        }
    }
    r
}

/// Solves `Q x = rhs` for several right-hand sides at once; `Q` square and
/// invertible. Returns one solution vector per right-hand side.
fn gaussian_solve_multi(q: &[Vec<Rational>], rhs: &[Vec<Rational>]) -> Option<Vec<Vec<Rational>>> {
    let n = q.len();
    let m = rhs.len();
    let mut a: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            let mut row = q[i].clone();
            for r in rhs {
                row.push(r[i].clone());
            }
            row
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !a[i][c].is_zero())?;
        a.swap(c, p);
        let scale = a[c][c].clone();
        for j in 0..n + m {
            a[c][j] = &a[c][j] / &scale;
        }
        for i in 0..n {
            if i == c || a[i][c].is_zero() {
                continue;
            }
            let f = a[i][c].clone();
            for j in 0..n + m {
                let s = &f * &a[c][j];
                a[i][j] = &a[i][j] - &s;
            }
        }
    }
    Some((0..m).map(|r| (0..n).map(|i| a[i][n + r].clone()).collect()).collect())
}

/// Whether the augmented linear system given as rows `(coeffs | rhs)` has a
/// solution: rank of the coefficient block equals rank of the full block.
fn consistent(rows: Vec<Vec<Rational>>) -> bool {
    let cols = rows.first().map_or(0, Vec::len);
    let coeff_rank = row_rank(rows.iter().map(|r| r[..cols - 1].to_vec()).collect());
    let full_rank = row_rank(rows);
    coeff_rank == full_rank
}

/// All ordered index tuples below `n`, visited lexicographically.
fn enumerate_tuples(n: usize, scratch: &mut [usize], visit: &mut impl FnMut(&[usize])) {
    fn rec(n: usize, pos: usize, scratch: &mut [usize], visit: &mut impl FnMut(&[usize])) {
        if pos == scratch.len() {
            visit(scratch);
            return;
        }
        for v in 0..n {
            scratch[pos] = v;
            rec(n, pos + 1, scratch, visit);
        }
    }
    rec(n, 0, scratch, visit);
}

/// Expands per-point index choices into full tuples `(anchors ++ choices)`,
/// skipping combinations that collide with an anchor or with each other.
fn expand_choices(anchors: &[usize], choices: &[&[usize]], emit: &mut impl FnMut(&[usize])) {
    let mut tuple: Vec<usize> = anchors.to_vec();
    fn rec(
        tuple: &mut Vec<usize>,
        choices: &[&[usize]],
        pos: usize,
        emit: &mut impl FnMut(&[usize]),
    ) {
        if pos == choices.len() {
            emit(tuple);
            return;
        }
        for &cand in choices[pos] {
            if tuple.contains(&cand) {
                continue;
            }
            tuple.push(cand);
            rec(tuple, choices, pos + 1, emit);
            tuple.pop();
        }
    }
    rec(&mut tuple, choices, 0, emit);
}

/// Like `expand_choices`, but interleaves anchor positions (at `basis`) and
/// free positions (at `rest`) back into pattern order and enforces pairwise
/// distinct coordinates.
#[allow(clippy::too_many_arguments)]
fn expand_choices_general(
    basis: &[usize],
    anchor: &[usize],
    rest: &[usize],
    choices: &[&[usize]],
    k: usize,
    scene: &Scene,
    emit: &mut impl FnMut(&[usize]),
) {
    let mut assignment = vec![usize::MAX; k];
    for (r, &pi) in basis.iter().enumerate() {
        assignment[pi] = anchor[r];
    }
    fn rec(
        assignment: &mut Vec<usize>,
        rest: &[usize],
        choices: &[&[usize]],
        pos: usize,
        scene: &Scene,
        emit: &mut impl FnMut(&[usize]),
    ) {
        if pos == rest.len() {
            emit(assignment);
            return;
        }
        'cand: for &cand in choices[pos] {
            for &used in assignment.iter().filter(|&&u| u != usize::MAX) {
                if used == cand || scene.points()[used] == scene.points()[cand] {
                    continue 'cand;
                }
            }
            assignment[rest[pos]] = cand;
            rec(assignment, rest, choices, pos + 1, scene, emit);
            assignment[rest[pos]] = usize::MAX;
        }
    }
    rec(&mut assignment, rest, choices, 0, scene, emit);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rational_int;

    fn pts(coords: &[[i64; 2]]) -> Vec<Vec<Rational>> {
        coords
            .iter()
            .map(|p| vec![rational_int(p[0]), rational_int(p[1])])
            .collect()
    }

    #[test]
    fn finds_rotated_scaled_copy() {
        let p = Pattern::similarity(pts(&[[0, 0], [2, 0], [2, 2]])).unwrap();
        // image under z -> i z + 1: (1, 0), (1, 2), (-1, 2)
        let scene = Scene::new(2, pts(&[[5, 5], [1, 0], [1, 2], [-1, 2]])).unwrap();
        let reports =
            oracle_similar(&p, &scene, OrientationPolicy::Both, SolveMode::Enumerate).unwrap();
        assert!(!reports.is_empty());
        assert!(reports.iter().any(|r| r.indices == vec![1, 2, 3]));
        for r in &reports {
            assert!(r.maps_exactly(&p, &scene));
        }
    }

    #[test]
    fn generic_scene_has_no_copy() {
        let p = Pattern::similarity(pts(&[[0, 0], [2, 0], [2, 2]])).unwrap();
        let scene = Scene::new(2, pts(&[[0, 0], [1, 0], [3, 7], [10, 2]])).unwrap();
        let reports =
            oracle_similar(&p, &scene, OrientationPolicy::Both, SolveMode::Enumerate).unwrap();
        assert!(reports.is_empty());
    }

    #[test]
    fn affine_oracle_counts_lattice_squares() {
        let p = Pattern::affine(2, pts(&[[0, 0], [1, 0], [0, 1], [1, 1]])).unwrap();
        // 2x2 lattice: exactly one parallelogram subset, 8 ordered labelings
        let scene = Scene::new(2, pts(&[[1, 1], [1, 2], [2, 1], [2, 2]])).unwrap();
        let reports = oracle_affine(&p, &scene, SolveMode::Enumerate).unwrap();
        assert_eq!(reports.len(), 8);
        for r in &reports {
            assert!(r.maps_exactly(&p, &scene));
        }
    }

    #[test]
    fn affine_oracle_finds_planted_image() {
        let p = Pattern::affine(2, pts(&[[0, 0], [1, 0], [0, 1], [1, 1]])).unwrap();
        let scene = Scene::new(
            2,
            pts(&[[0, 0], [2, 1], [1, 3], [3, 4], [8, 8], [-1, 4]]),
        )
        .unwrap();
        let reports = oracle_affine(&p, &scene, SolveMode::Decide).unwrap();
        assert_eq!(reports.len(), 1);
        assert!(reports[0].maps_exactly(&p, &scene));
    }

    #[test]
    fn similar_tuple_predicate_matches_its_definition() {
        let p = Pattern::similarity(pts(&[[0, 0], [2, 0], [2, 2]])).unwrap();
        // direct copy, scaled by 2 and translated
        assert!(tuple_is_similar_copy(&p, &pts(&[[1, 1], [5, 1], [5, 5]]), false));
        assert!(!tuple_is_similar_copy(&p, &pts(&[[1, 1], [5, 1], [5, 5]]), true));
        // mirrored copy
        assert!(tuple_is_similar_copy(&p, &pts(&[[0, 0], [2, 0], [2, -2]]), true));
        // not similar at all
        assert!(!tuple_is_similar_copy(&p, &pts(&[[0, 0], [2, 0], [3, 3]]), false));
        assert!(!tuple_is_similar_copy(&p, &pts(&[[0, 0], [2, 0], [3, 3]]), true));
    }

    #[test]
    fn affine_tuple_predicate_checks_consistency() {
        let p = Pattern::affine(2, pts(&[[0, 0], [1, 0], [0, 1], [1, 1]])).unwrap();
        assert!(tuple_is_affine_image(&p, &pts(&[[0, 0], [2, 1], [1, 3], [3, 4]])));
        assert!(!tuple_is_affine_image(&p, &pts(&[[0, 0], [2, 1], [1, 3], [3, 5]])));
        // degenerate images are affine images too
        assert!(tuple_is_affine_image(&p, &pts(&[[0, 0], [1, 1], [2, 2], [3, 3]])));
    }

    #[test]
    fn oracle_decision_is_permutation_invariant() {
        let p = Pattern::similarity(pts(&[[0, 0], [2, 0], [2, 2]])).unwrap();
        let scene1 = Scene::new(2, pts(&[[9, 9], [0, 0], [4, 0], [4, 4]])).unwrap();
        let scene2 = Scene::new(2, pts(&[[4, 4], [4, 0], [0, 0], [9, 9]])).unwrap();
        let r1 = oracle_similar(&p, &scene1, OrientationPolicy::Both, SolveMode::Decide).unwrap();
        let r2 = oracle_similar(&p, &scene2, OrientationPolicy::Both, SolveMode::Decide).unwrap();
        assert_eq!(r1.is_empty(), r2.is_empty());
    }
}
