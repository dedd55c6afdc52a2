//! Reproducible instance generators: planted transformed copies among random
//! decoys, plain random scenes, and lattice grids. All draws are
//! deterministic in the seed. Generators only construct inputs; truth labels
//! for test corpora always come from the oracles, because decoys can
//! accidentally complete extra matches.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geom::{Pattern, Scene, Transform};
use crate::ksum::{KSumInstance, LdtInstance};
use crate::numeric::{ComplexRational, Rational, RingDescriptor, RingElement, RingTag};

/// A generated scene with the post-shuffle positions of the planted images
/// (in pattern order) and whether the planted images collapsed onto each
/// other (a zero scale or singular matrix).
#[derive(Debug, Clone)]
pub struct PlantedScene {
    pub scene: Scene,
    pub planted_indices: Vec<usize>,
    pub degenerate: bool,
}

/// Scene containing the image of `pattern` under `z -> wz + t` (conjugating
/// first when `mirrored`), padded to `n` points with random decoys and
/// shuffled deterministically.
pub fn planted_similarity(
    pattern: &Pattern,
    n: usize,
    scale_rotation: &ComplexRational,
    translation: &ComplexRational,
    mirrored: bool,
    seed: u64,
) -> Result<PlantedScene> {
    if scale_rotation.re.is_zero() && scale_rotation.im.is_zero() {
        return Err(Error::BadInstance(
            "planted similarity needs a nonzero scale-rotation".into(),
        ));
    }
    let transform = Transform::Similarity {
        scale_rotation: scale_rotation.clone(),
        translation: translation.clone(),
        mirrored,
    };
    plant(pattern, n, &transform, seed)
}

/// Scene containing the image of `pattern` under `x -> xF + t`; degenerate
/// `F` is allowed and flagged.
pub fn planted_affine(
    pattern: &Pattern,
    n: usize,
    matrix: &[Vec<Rational>],
    translation: &[Rational],
    seed: u64,
) -> Result<PlantedScene> {
    let d = pattern.dim();
    if matrix.len() != d || matrix.iter().any(|r| r.len() != d) || translation.len() != d {
        return Err(Error::BadInstance(format!("transform shape must be {d}x{d} + {d}")));
    }
    let transform = Transform::Affine {
        matrix: matrix.to_vec(),
        translation: translation.to_vec(),
    };
    plant(pattern, n, &transform, seed)
}

fn plant(pattern: &Pattern, n: usize, transform: &Transform, seed: u64) -> Result<PlantedScene> {
    let k = pattern.len();
    if n < k {
        return Err(Error::BadInstance(format!(
            "scene size {n} cannot hold the {k} planted points"
        )));
    }
    let d = pattern.dim();
    let images: Vec<Vec<Rational>> =
        pattern.points().iter().map(|p| transform.apply(p)).collect();
    let degenerate = {
        let mut seen = std::collections::HashSet::new();
        !images.iter().all(|p| seen.insert(p.clone()))
    };

    // decoys live in a box around the planted images
    let bound = images
        .iter()
        .flatten()
        .map(|x| x.abs().ceil().to_integer())
        .max()
        .unwrap_or_else(|| BigInt::from(1))
        .max(BigInt::from(1));
    let bound: i64 = (bound * BigInt::from(2)).try_into().unwrap_or(1_000_000_000);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // None marks a decoy slot, Some(i) the image of pattern point i
    let mut slots: Vec<Option<usize>> = (0..k).map(Some).collect();
    slots.resize(n, None);
    slots.shuffle(&mut rng);

    let mut points = Vec::with_capacity(n);
    let mut planted_indices = vec![0usize; k];
    for (pos, slot) in slots.iter().enumerate() {
        match slot {
            Some(i) => {
                planted_indices[*i] = pos;
                points.push(images[*i].clone());
            }
            None => points.push((0..d).map(|_| random_rational(&mut rng, bound)).collect()),
        }
    }
    Ok(PlantedScene { scene: Scene::new(d, points)?, planted_indices, degenerate })
}

/// The unit square with vertices in cycle order around the quadrilateral.
pub fn square_pattern() -> Pattern {
    let pts = [[0, 0], [1, 0], [1, 1], [0, 1]]
        .iter()
        .map(|p| vec![Rational::from_integer(p[0].into()), Rational::from_integer(p[1].into())])
        .collect();
    Pattern::affine(2, pts).expect("unit square is a valid affine pattern")
}

/// The `m^d` grid points `{1, ..., m}^d`.
pub fn lattice(d: usize, m: usize) -> Result<Scene> {
    if d < 1 || m < 2 {
        return Err(Error::BadInstance("lattice needs d >= 1 and m >= 2".into()));
    }
    let mut points = Vec::with_capacity(m.pow(d as u32));
    let mut coord = vec![1usize; d];
    loop {
        points.push(coord.iter().map(|&c| Rational::from_integer(BigInt::from(c))).collect());
        let mut pos = d;
        loop {
            if pos == 0 {
                return Scene::new(d, points);
            }
            pos -= 1;
            coord[pos] += 1;
            if coord[pos] <= m {
                break;
            }
            coord[pos] = 1;
        }
    }
}

/// `n` i.i.d. points with rational coordinates of magnitude at most
/// `coordinate_range`, deterministic per seed.
pub fn random_scene(d: usize, n: usize, coordinate_range: i64, seed: u64) -> Result<Scene> {
    if d < 1 || coordinate_range < 1 {
        return Err(Error::BadInstance("random scene needs d >= 1 and range >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points = (0..n)
        .map(|_| (0..d).map(|_| random_rational(&mut rng, coordinate_range)).collect())
        .collect();
    Scene::new(d, points)
}

/// Uniform numerator over a small random denominator; magnitude <= range.
fn random_rational(rng: &mut ChaCha8Rng, range: i64) -> Rational {
    let denom = rng.gen_range(1..=4i64);
    let numer = rng.gen_range(-range.saturating_mul(denom)..=range.saturating_mul(denom));
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

fn small_rational(rng: &mut ChaCha8Rng, nonzero: bool) -> Rational {
    loop {
        let numer = rng.gen_range(-9i64..=9);
        if nonzero && numer == 0 {
            continue;
        }
        let denom = rng.gen_range(1i64..=3);
        return Rational::new(BigInt::from(numer), BigInt::from(denom));
    }
}

/// A random pattern of `k` pairwise distinct plane points.
pub fn random_similarity_pattern(rng: &mut ChaCha8Rng, k: usize) -> Pattern {
    loop {
        let points: Vec<Vec<Rational>> = (0..k)
            .map(|_| vec![small_rational(rng, false), small_rational(rng, false)])
            .collect();
        if let Ok(p) = Pattern::similarity(points) {
            return p;
        }
    }
}

/// A random affine pattern: `k` pairwise distinct points in d-space with
/// d+1 affinely independent ones.
pub fn random_affine_pattern(rng: &mut ChaCha8Rng, d: usize, k: usize) -> Pattern {
    loop {
        let points: Vec<Vec<Rational>> = (0..k)
            .map(|_| (0..d).map(|_| small_rational(rng, false)).collect())
            .collect();
        if let Ok(p) = Pattern::affine(d, points) {
            return p;
        }
    }
}

/// A random nonzero scale-rotation and translation.
pub fn random_similarity_transform(rng: &mut ChaCha8Rng) -> (ComplexRational, ComplexRational) {
    let w = loop {
        let w = ComplexRational::new(small_rational(rng, false), small_rational(rng, false));
        if !(w.re.is_zero() && w.im.is_zero()) {
            break w;
        }
    };
    let z = ComplexRational::new(small_rational(rng, false), small_rational(rng, false));
    (w, z)
}

/// A random affine map; resamples until the matrix is invertible when
/// `invertible` is set.
pub fn random_affine_transform(
    rng: &mut ChaCha8Rng,
    d: usize,
    invertible: bool,
) -> (Vec<Vec<Rational>>, Vec<Rational>) {
    loop {
        let matrix: Vec<Vec<Rational>> = (0..d)
            .map(|_| (0..d).map(|_| small_rational(rng, false)).collect())
            .collect();
        if invertible && !matrix_invertible(&matrix) {
            continue;
        }
        let translation = (0..d).map(|_| small_rational(rng, false)).collect();
        return (matrix, translation);
    }
}

fn matrix_invertible(m: &[Vec<Rational>]) -> bool {
    // row reduction; small d only
    let n = m.len();
    let mut a = m.to_vec();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else { return false };
        a.swap(c, p);
        for i in c + 1..n {
            if a[i][c].is_zero() {
                continue;
            }
            let f = &a[i][c] / &a[c][c];
            for j in c..n {
                let s = &f * &a[c][j];
                a[i][j] = &a[i][j] - &s;
            }
        }
    }
    true
}

/// A random LDT instance over the given ring: random coefficients (the last
/// one componentwise nonzero) and random sets, with a solution planted with
/// probability one half by solving the equation for the last tuple slot.
pub fn random_ldt_instance(
    rng: &mut ChaCha8Rng,
    k: usize,
    n: usize,
    ring: RingDescriptor,
) -> LdtInstance {
    let mut beta: Vec<RingElement> = Vec::with_capacity(k + 1);
    beta.push(random_element(rng, ring, false));
    for _ in 0..k - 1 {
        beta.push(random_element(rng, ring, false));
    }
    beta.push(random_element(rng, ring, true));

    let mut sets: Vec<Vec<RingElement>> = (0..k)
        .map(|_| (0..n).map(|_| random_element(rng, ring, false)).collect())
        .collect();

    if rng.gen_bool(0.5) {
        // plant: choose a tuple and solve beta_k a = -(beta_0 + sum_{i<k})
        let slots: Vec<usize> = (0..k).map(|_| rng.gen_range(0..n)).collect();
        let mut partial = beta[0].clone();
        for i in 0..k - 1 {
            let term = beta[i + 1]
                .try_mul(&sets[i][slots[i]])
                .expect("uniform ring");
            partial = partial.try_add(&term).expect("uniform ring");
        }
        let planted = element_div(&partial.neg(), &beta[k]);
        sets[k - 1][slots[k - 1]] = planted;
    }

    LdtInstance::new(beta, sets).expect("generated instance is well-formed")
}

fn random_element(rng: &mut ChaCha8Rng, ring: RingDescriptor, nonzero: bool) -> RingElement {
    match ring.tag {
        RingTag::Scalar => RingElement::Scalar(small_rational(rng, nonzero)),
        RingTag::Complex => RingElement::Complex(random_complex(rng, nonzero)),
        RingTag::Vector => {
            RingElement::Vector((0..ring.arity).map(|_| small_rational(rng, nonzero)).collect())
        }
        RingTag::ComplexVector => RingElement::ComplexVector(
            (0..ring.arity).map(|_| random_complex(rng, nonzero)).collect(),
        ),
    }
}

fn random_complex(rng: &mut ChaCha8Rng, nonzero: bool) -> ComplexRational {
    loop {
        let c = ComplexRational::new(small_rational(rng, false), small_rational(rng, false));
        if !nonzero || !(c.re.is_zero() && c.im.is_zero()) {
            return c;
        }
    }
}

/// Componentwise exact division; the divisor's components must be nonzero.
fn element_div(num: &RingElement, den: &RingElement) -> RingElement {
    match (num, den) {
        (RingElement::Scalar(a), RingElement::Scalar(b)) => RingElement::Scalar(a / b),
        (RingElement::Complex(a), RingElement::Complex(b)) => RingElement::Complex(a / b),
        (RingElement::Vector(a), RingElement::Vector(b)) => {
            RingElement::Vector(a.iter().zip(b).map(|(x, y)| x / y).collect())
        }
        (RingElement::ComplexVector(a), RingElement::ComplexVector(b)) => {
            RingElement::ComplexVector(a.iter().zip(b).map(|(x, y)| x / y).collect())
        }
        _ => unreachable!("callers use uniform rings"),
    }
}

/// A plane-vector k-SUM instance engineered so that the projection drawn
/// from `fooled_seed` maps a non-solution tuple to zero: the first tuple is
/// orthogonal to exactly that direction. With `with_true_solution` the sets
/// also contain a genuine zero-sum tuple at the last positions.
pub fn adversarial_projection_instance(
    fooled_seed: u64,
    with_true_solution: bool,
) -> AdversarialInstance {
    let v = crate::ksum::draw_projection(2, fooled_seed);
    let v1 = &v.coords()[0];
    let v2 = &v.coords()[1];
    // tuple ((1,0), (0,1), (0,y)) with y chosen so the dot products cancel:
    // v1 + v2 + y v2 = 0, while the exact sum (1, 1 + y) stays nonzero.
    let y = -(v1 + v2) / v2;
    let one = Rational::from_integer(1.into());
    let zero = Rational::zero();
    let vec2 = |a: Rational, b: Rational| RingElement::Vector(vec![a, b]);
    let mut sets = vec![
        vec![vec2(one.clone(), zero.clone())],
        vec![vec2(zero.clone(), one.clone())],
        vec![vec2(zero.clone(), y)],
    ];
    let mut true_indices = None;
    if with_true_solution {
        sets[0].push(vec2(Rational::from_integer(2.into()), Rational::from_integer(3.into())));
        sets[1].push(vec2(Rational::from_integer(5.into()), Rational::from_integer((-1).into())));
        sets[2].push(vec2(Rational::from_integer((-7).into()), Rational::from_integer((-2).into())));
        true_indices = Some(vec![1, 1, 1]);
    }
    let inst = LdtInstance::from_ksum(&KSumInstance::new(sets).expect("well-formed"));
    AdversarialInstance { inst, fooled_seed, true_indices }
}

/// See [`adversarial_projection_instance`].
#[derive(Debug, Clone)]
pub struct AdversarialInstance {
    pub inst: LdtInstance,
    pub fooled_seed: u64,
    /// Index tuple of the planted genuine solution, when present.
    pub true_indices: Option<Vec<usize>>,
}
