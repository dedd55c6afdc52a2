//! Geometric pattern matching: similarity search in the plane and affine
//! search in d-space, both encoded as linear degeneracy tests over the scene
//! points and solved through the exact k-SUM pipeline.

mod affine;
mod linalg;
mod similarity;

pub use affine::{affine_to_ldt, find_affine, search_affine, AffineEncoding, CoeffRow};
pub use similarity::{
    find_similar, normalize_similarity, recover_similarity, search_similar, similarity_to_ldt,
    Orientation, SimilarityEncoding,
};

use crate::error::{Error, Result};
use crate::ksum::{PipelineStats, SolveMode, Strategy};
use crate::numeric::{ComplexRational, Rational};

/// What kind of transformation a pattern is matched under.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PatternKind {
    /// Scaling + rotation + translation (optionally reflection); plane only.
    Similarity,
    /// `x -> xF + t` with arbitrary `F`; any dimension `d >= 2`.
    Affine,
}

/// The fixed k-point set being searched for. Points are pairwise distinct;
/// affine patterns additionally contain `d + 1` affinely independent points.
#[derive(Debug, Clone)]
pub struct Pattern {
    kind: PatternKind,
    d: usize,
    points: Vec<Vec<Rational>>,
}

impl Pattern {
    /// A plane pattern for similarity search: `k >= 3` pairwise distinct
    /// points with 2 coordinates each.
    pub fn similarity(points: Vec<Vec<Rational>>) -> Result<Self> {
        check_points(&points, 2)?;
        if points.len() < 3 {
            return Err(Error::BadPattern(format!(
                "similarity patterns need at least 3 points, got {}",
                points.len()
            )));
        }
        check_distinct(&points)?;
        Ok(Pattern { kind: PatternKind::Similarity, d: 2, points })
    }

    /// A d-space pattern for affine search: `k >= d + 2` pairwise distinct
    /// points, `d + 1` of them affinely independent.
    pub fn affine(d: usize, points: Vec<Vec<Rational>>) -> Result<Self> {
        if d < 2 {
            return Err(Error::BadPattern(format!("affine patterns need d >= 2, got {d}")));
        }
        check_points(&points, d)?;
        if points.len() < d + 2 {
            return Err(Error::BadPattern(format!(
                "affine patterns in dimension {d} need at least {} points, got {}",
                d + 2,
                points.len()
            )));
        }
        check_distinct(&points)?;
        let homogeneous: Vec<Vec<Rational>> = points
            .iter()
            .map(|p| {
                let mut row = p.clone();
                row.push(Rational::from_integer(1.into()));
                row
            })
            .collect();
        if linalg::rank(&homogeneous) < d + 1 {
            return Err(Error::RankDeficient);
        }
        Ok(Pattern { kind: PatternKind::Affine, d, points })
    }

    pub fn kind(&self) -> PatternKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Vec<Rational>] {
        &self.points
    }

    /// Plane point as a complex number; only valid for `d = 2`.
    pub fn point_complex(&self, i: usize) -> ComplexRational {
        point_complex(&self.points[i])
    }
}

/// The searched point set: `n` points in `d`-space. Duplicate coordinates
/// are permitted; the pairwise-distinctness filter keeps them from jointly
/// forming a match.
#[derive(Debug, Clone)]
pub struct Scene {
    d: usize,
    points: Vec<Vec<Rational>>,
}

impl Scene {
    pub fn new(d: usize, points: Vec<Vec<Rational>>) -> Result<Self> {
        if d < 1 {
            return Err(Error::BadInstance("scene dimension must be at least 1".into()));
        }
        check_points(&points, d)?;
        Ok(Scene { d, points })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Vec<Rational>] {
        &self.points
    }

    pub fn point_complex(&self, i: usize) -> ComplexRational {
        point_complex(&self.points[i])
    }

    /// Removes duplicate coordinates, keeping first occurrences. The second
    /// component maps deduplicated positions back to original indices.
    pub fn dedup(&self) -> (Scene, Vec<usize>) {
        let mut seen = std::collections::HashSet::new();
        let mut points = Vec::new();
        let mut back = Vec::new();
        for (i, p) in self.points.iter().enumerate() {
            if seen.insert(p.clone()) {
                points.push(p.clone());
                back.push(i);
            }
        }
        (Scene { d: self.d, points }, back)
    }
}

fn point_complex(p: &[Rational]) -> ComplexRational {
    ComplexRational::new(p[0].clone(), p[1].clone())
}

fn check_points(points: &[Vec<Rational>], d: usize) -> Result<()> {
    for (i, p) in points.iter().enumerate() {
        if p.len() != d {
            return Err(Error::BadPattern(format!(
                "point {i} has {} coordinates, expected {d}",
                p.len()
            )));
        }
    }
    Ok(())
}

fn check_distinct(points: &[Vec<Rational>]) -> Result<()> {
    let mut seen = std::collections::HashSet::new();
    for (i, p) in points.iter().enumerate() {
        if !seen.insert(p.clone()) {
            return Err(Error::BadPattern(format!("point {i} repeats an earlier point")));
        }
    }
    Ok(())
}

/// The recovered witnessing transformation, exact in all entries.
#[derive(Debug, Clone, PartialEq)]
pub enum Transform {
    /// `z -> wz + t`, or `z -> w conj(z) + t` when mirrored.
    Similarity {
        scale_rotation: ComplexRational,
        translation: ComplexRational,
        mirrored: bool,
    },
    /// `x -> xF + t` with `x` a row vector; `matrix[r][c]` is `F_{rc}`.
    Affine {
        matrix: Vec<Vec<Rational>>,
        translation: Vec<Rational>,
    },
}

impl Transform {
    /// Applies the transformation to one point, exactly.
    pub fn apply(&self, point: &[Rational]) -> Vec<Rational> {
        match self {
            Transform::Similarity { scale_rotation, translation, mirrored } => {
                let z = point_complex(point);
                let z = if *mirrored { z.conj() } else { z };
                let image = scale_rotation * z + translation;
                vec![image.re, image.im]
            }
            Transform::Affine { matrix, translation } => {
                let d = translation.len();
                (0..d)
                    .map(|j| {
                        let mut acc = translation[j].clone();
                        for (m, x) in point.iter().enumerate() {
                            acc += x * &matrix[m][j];
                        }
                        acc
                    })
                    .collect()
            }
        }
    }
}

/// A verified match: scene indices in pattern order plus the transformation
/// sending pattern point `i` to scene point `indices[i]` exactly.
#[derive(Debug, Clone)]
pub struct MatchReport {
    pub indices: Vec<usize>,
    pub transform: Transform,
}

impl MatchReport {
    /// Checks the report invariant: the transform reproduces every matched
    /// scene point bit for bit.
    pub fn maps_exactly(&self, pattern: &Pattern, scene: &Scene) -> bool {
        pattern.points().iter().zip(&self.indices).all(|(p, &idx)| {
            scene
                .points()
                .get(idx)
                .is_some_and(|s| &self.transform.apply(p) == s)
        })
    }
}

/// Options shared by the two geometric searches.
#[derive(Debug, Clone)]
pub struct SearchOptions {
    /// Which similarity orientations to try; ignored by affine search.
    pub orientation: OrientationPolicy,
    pub strategy: Strategy,
    pub seed: u64,
    pub mode: SolveMode,
    pub retry_cap: u32,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            orientation: OrientationPolicy::Both,
            strategy: Strategy::Auto,
            seed: 0,
            mode: SolveMode::Decide,
            retry_cap: 3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrientationPolicy {
    DirectOnly,
    MirroredOnly,
    Both,
}

impl OrientationPolicy {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "direct" => Some(OrientationPolicy::DirectOnly),
            "mirrored" => Some(OrientationPolicy::MirroredOnly),
            "both" => Some(OrientationPolicy::Both),
            _ => None,
        }
    }

    pub(crate) fn orientations(self) -> &'static [Orientation] {
        match self {
            OrientationPolicy::DirectOnly => &[Orientation::Direct],
            OrientationPolicy::MirroredOnly => &[Orientation::Mirrored],
            OrientationPolicy::Both => &[Orientation::Direct, Orientation::Mirrored],
        }
    }
}

/// Result of a geometric search: verified reports (one in decide mode, the
/// deduplicated sorted set in enumerate mode) plus solver instrumentation.
#[derive(Debug, Clone, Default)]
pub struct SearchOutcome {
    pub reports: Vec<MatchReport>,
    pub stats: SearchStats,
}

impl SearchOutcome {
    pub fn found(&self) -> bool {
        !self.reports.is_empty()
    }

    pub fn index_sets(&self) -> Vec<Vec<usize>> {
        self.reports.iter().map(|r| r.indices.clone()).collect()
    }
}

#[derive(Debug, Clone, Default)]
pub struct SearchStats {
    pub ops: u64,
    pub projections: u32,
    pub rejected_candidates: u64,
    pub fallback_used: bool,
}

impl SearchStats {
    pub(crate) fn absorb(&mut self, p: &PipelineStats) {
        self.ops += p.ops;
        self.projections += p.projections;
        self.rejected_candidates += p.rejected_candidates;
        self.fallback_used |= p.fallback_used;
    }
}

/// Filter requiring pairwise distinct scene indices and pairwise distinct
/// coordinates, so a matched tuple is the image of a k-point set even when
/// the scene contains duplicate points.
pub(crate) fn distinct_points_filter(scene: &Scene) -> impl Fn(&[usize]) -> bool + Sync + '_ {
    move |indices: &[usize]| {
        for (a, &ia) in indices.iter().enumerate() {
            for &ib in &indices[a + 1..] {
                if ia == ib || scene.points()[ia] == scene.points()[ib] {
                    return false;
                }
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rational_int;

    pub(crate) fn pts(coords: &[[i64; 2]]) -> Vec<Vec<Rational>> {
        coords
            .iter()
            .map(|p| vec![rational_int(p[0]), rational_int(p[1])])
            .collect()
    }

    #[test]
    fn similarity_pattern_validation() {
        assert!(Pattern::similarity(pts(&[[0, 0], [1, 0], [0, 1]])).is_ok());
        assert!(Pattern::similarity(pts(&[[0, 0], [1, 0]])).is_err());
        assert!(Pattern::similarity(pts(&[[0, 0], [1, 0], [0, 0]])).is_err());
    }

    #[test]
    fn affine_pattern_needs_full_rank() {
        assert!(Pattern::affine(2, pts(&[[0, 0], [1, 0], [0, 1], [1, 1]])).is_ok());
        // four collinear points have no 3 affinely independent ones
        assert!(matches!(
            Pattern::affine(2, pts(&[[0, 0], [1, 1], [2, 2], [3, 3]])),
            Err(Error::RankDeficient)
        ));
        assert!(Pattern::affine(2, pts(&[[0, 0], [1, 0], [0, 1]])).is_err());
    }

    #[test]
    fn scene_dedup_keeps_first_occurrences() {
        let scene = Scene::new(2, pts(&[[0, 0], [1, 1], [0, 0], [2, 2]])).unwrap();
        let (deduped, back) = scene.dedup();
        assert_eq!(deduped.len(), 3);
        assert_eq!(back, vec![0, 1, 3]);
    }

    #[test]
    fn distinct_filter_rejects_repeats() {
        let scene = Scene::new(2, pts(&[[0, 0], [1, 1], [0, 0]])).unwrap();
        let filter = distinct_points_filter(&scene);
        assert!(filter(&[0, 1]));
        assert!(!filter(&[0, 0]));
        // indices differ but coordinates coincide
        assert!(!filter(&[0, 2]));
    }

    #[test]
    fn transforms_apply_exactly() {
        let sim = Transform::Similarity {
            scale_rotation: crate::numeric::complex_int(0, 2),
            translation: crate::numeric::complex_int(1, 0),
            mirrored: false,
        };
        // 2i * (1 + i) + 1 = 1 - 2 + 2i = -1 + 2i
        assert_eq!(sim.apply(&[rational_int(1), rational_int(1)]), vec![
            rational_int(-1),
            rational_int(2)
        ]);

        let aff = Transform::Affine {
            matrix: vec![
                vec![rational_int(2), rational_int(1)],
                vec![rational_int(1), rational_int(3)],
            ],
            translation: vec![rational_int(0), rational_int(0)],
        };
        assert_eq!(aff.apply(&[rational_int(1), rational_int(1)]), vec![
            rational_int(3),
            rational_int(4)
        ]);
    }
}
