//! Similarity search in the plane. Points are read as complex numbers: a
//! pattern normalized so its anchor pair sits at 0 and 1 matches a scene
//! tuple `(a_1, ..., a_k)` with the same orientation iff
//! `a_i - a_1 = u_{i-2} (a_2 - a_1)` for all remaining points, which is one
//! linear equation per extra point. Stacking the k-2 equations gives a
//! linear degeneracy test over `C^{k-2}`; mirrored matches use the
//! conjugated normal form.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::geom::{
    distinct_points_filter, MatchReport, Pattern, PatternKind, Scene, SearchOptions,
    SearchOutcome, Transform,
};
use crate::ksum::{solve, LdtInstance, SolveMode, SolveOptions};
use crate::numeric::{ComplexRational, RingElement};

/// Handedness of the similarity being searched.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    Direct,
    Mirrored,
}

/// A pattern in normal form: the anchor pair maps to (0, 1) and every other
/// point becomes one complex parameter `u_e`. The normalized set
/// `{0, 1, u_1, ..., u_{k-2}}` is exactly similar to the pattern.
#[derive(Debug, Clone)]
pub struct SimilarityEncoding {
    u: Vec<ComplexRational>,
    orientation: Orientation,
    /// Pattern indices of the points mapped to 0 and 1.
    anchor: (usize, usize),
    /// Original coordinates of the anchor pair, for transform recovery.
    anchor_points: (ComplexRational, ComplexRational),
    k: usize,
}

impl SimilarityEncoding {
    pub fn u(&self) -> &[ComplexRational] {
        &self.u
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn anchor(&self) -> (usize, usize) {
        self.anchor
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Pattern indices of the non-anchor points, in equation order.
    pub fn extras(&self) -> Vec<usize> {
        (0..self.k)
            .filter(|&i| i != self.anchor.0 && i != self.anchor.1)
            .collect()
    }
}

/// Normalizes a pattern by mapping its first two distinct points to (0, 1)
/// via `z -> (z - p1) / (p2 - p1)`; the mirrored orientation conjugates the
/// resulting parameters.
pub fn normalize_similarity(
    pattern: &Pattern,
    orientation: Orientation,
) -> Result<SimilarityEncoding> {
    if pattern.kind() != PatternKind::Similarity {
        return Err(Error::BadPattern("not a similarity pattern".into()));
    }
    let k = pattern.len();
    let p1 = pattern.point_complex(0);
    let a2 = (1..k).find(|&i| pattern.point_complex(i) != p1).ok_or_else(|| {
        Error::BadPattern("all pattern points coincide".into())
    })?;
    let p2 = pattern.point_complex(a2);
    let span = &p2 - &p1;
    let mut u = Vec::with_capacity(k - 2);
    for i in 0..k {
        if i == 0 || i == a2 {
            continue;
        }
        let value = (pattern.point_complex(i) - &p1) / &span;
        u.push(match orientation {
            Orientation::Direct => value,
            Orientation::Mirrored => value.conj(),
        });
    }
    Ok(SimilarityEncoding {
        u,
        orientation,
        anchor: (0, a2),
        anchor_points: (p1, p2),
        k,
    })
}

/// Encodes "some k scene points form a similar copy of the pattern" as an
/// LDT instance over `C^{k-2}` (plain `C` for triangles). Every set is a
/// copy of the scene lifted so equation `e` occupies component `e`;
/// equation `e` reads `(u_e - 1) a_1 - u_e a_2 + a_{i_e} = 0`.
pub fn similarity_to_ldt(enc: &SimilarityEncoding, scene: &Scene) -> Result<LdtInstance> {
    if scene.dim() != 2 {
        return Err(Error::BadInstance(format!(
            "similarity search needs a plane scene, got dimension {}",
            scene.dim()
        )));
    }
    let k = enc.k;
    let m = k - 2;
    let one = crate::numeric::complex_int(1, 0);
    let zero = crate::numeric::complex_int(0, 0);

    // coefficient rows: coeff[i][e] multiplies tuple position i in equation e
    let mut coeff = vec![vec![zero.clone(); m]; k];
    for (e, &i) in enc.extras().iter().enumerate() {
        coeff[enc.anchor.0][e] = &enc.u[e] - &one;
        coeff[enc.anchor.1][e] = -&enc.u[e];
        coeff[i][e] = one.clone();
    }

    let pack = |components: Vec<ComplexRational>| -> RingElement {
        if m == 1 {
            RingElement::Complex(components.into_iter().next().expect("m = 1"))
        } else {
            RingElement::ComplexVector(components)
        }
    };

    let mut beta = Vec::with_capacity(k + 1);
    beta.push(pack(vec![zero.clone(); m]));
    for row in coeff {
        beta.push(pack(row));
    }

    let lifted: Vec<RingElement> = (0..scene.len())
        .map(|i| pack(vec![scene.point_complex(i); m]))
        .collect();
    let sets = vec![lifted; k];
    LdtInstance::new(beta, sets)
}

/// Recovers the full pattern-to-scene similarity from the images `(a, b)`
/// of the anchor pair: in the normalized frame `w' = b - a`, `z' = a`;
/// composing with the normalization gives the map on original coordinates.
pub fn recover_similarity(
    anchor_images: (&ComplexRational, &ComplexRational),
    enc: &SimilarityEncoding,
) -> Result<Transform> {
    let (a, b) = anchor_images;
    if a == b {
        return Err(Error::BadInstance(
            "anchor images coincide; no similarity can map a segment onto a point".into(),
        ));
    }
    let (q1, q2) = &enc.anchor_points;
    let span = q2 - q1;
    let (w, base) = match enc.orientation {
        Orientation::Direct => ((b - a) / &span, q1.clone()),
        Orientation::Mirrored => ((b - a) / span.conj(), q1.conj()),
    };
    let z = a - &w * base;
    Ok(Transform::Similarity {
        scale_rotation: w,
        translation: z,
        mirrored: matches!(enc.orientation, Orientation::Mirrored),
    })
}

/// Searches the scene for a similar copy of the pattern. Both orientations
/// run when requested; reports are deduplicated by index tuple and sorted.
pub fn search_similar(
    pattern: &Pattern,
    scene: &Scene,
    opts: &SearchOptions,
) -> Result<SearchOutcome> {
    if pattern.kind() != PatternKind::Similarity {
        return Err(Error::BadPattern("not a similarity pattern".into()));
    }
    let mut outcome = SearchOutcome::default();
    if scene.len() < pattern.len() {
        return Ok(outcome);
    }
    let filter = distinct_points_filter(scene);
    let mut dedup: BTreeMap<Vec<usize>, MatchReport> = BTreeMap::new();
    for &orientation in opts.orientation.orientations() {
        let enc = normalize_similarity(pattern, orientation)?;
        let ldt = similarity_to_ldt(&enc, scene)?;
        let solve_opts = SolveOptions {
            strategy: opts.strategy,
            mode: opts.mode,
            seed: opts.seed,
            retry_cap: opts.retry_cap,
        };
        let decision = solve(&ldt, &solve_opts, Some(&filter))?;
        outcome.stats.absorb(&decision.stats);
        for tuple in &decision.solutions {
            let report = report_from_tuple(&enc, pattern, scene, &tuple.indices)?;
            dedup.entry(tuple.indices.clone()).or_insert(report);
        }
        if opts.mode == SolveMode::Decide && !dedup.is_empty() {
            break;
        }
    }
    outcome.reports = dedup.into_values().collect();
    if opts.mode == SolveMode::Decide {
        outcome.reports.truncate(1);
    }
    Ok(outcome)
}

/// Decide-mode wrapper: the first verified match, if any.
pub fn find_similar(
    pattern: &Pattern,
    scene: &Scene,
    opts: &SearchOptions,
) -> Result<Option<MatchReport>> {
    let opts = SearchOptions { mode: SolveMode::Decide, ..opts.clone() };
    Ok(search_similar(pattern, scene, &opts)?.reports.into_iter().next())
}

fn report_from_tuple(
    enc: &SimilarityEncoding,
    pattern: &Pattern,
    scene: &Scene,
    indices: &[usize],
) -> Result<MatchReport> {
    let a = scene.point_complex(indices[enc.anchor.0]);
    let b = scene.point_complex(indices[enc.anchor.1]);
    let transform = recover_similarity((&a, &b), enc)?;
    let report = MatchReport { indices: indices.to_vec(), transform };
    assert!(
        report.maps_exactly(pattern, scene),
        "verified similarity witness must map the pattern exactly"
    );
    Ok(report)
}
