//! The three instance transformations behind the randomized pipeline:
//! coefficient folding (LDT to k-SUM), complex-to-real flattening, and the
//! randomized vector-to-scalar projection. Each makes exactly one pass over
//! each input element and preserves index positions, so witnesses map back
//! to the source instance unchanged.

use num_bigint::BigInt;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::ksum::instance::{KSumInstance, LdtInstance};
use crate::numeric::{Rational, RingDescriptor, RingElement, RingTag};

/// Folds the coefficients of an LDT instance into its sets:
/// `A'_i = beta_i * A_i` for `i < k` and `A'_k = beta_k * A_k + beta_0`.
/// A tuple satisfies `f = 0` iff the image tuple at the same index positions
/// sums to zero.
pub fn ldt_to_ksum(inst: &LdtInstance) -> KSumInstance {
    let k = inst.k();
    let beta = inst.beta();
    let sets = inst
        .sets()
        .iter()
        .enumerate()
        .map(|(i, set)| {
            set.iter()
                .map(|a| {
                    let scaled = beta[i + 1]
                        .try_mul(a)
                        .expect("instance invariant: uniform ring");
                    if i + 1 == k {
                        scaled
                            .try_add(&beta[0])
                            .expect("instance invariant: uniform ring")
                    } else {
                        scaled
                    }
                })
                .collect()
        })
        .collect();
    KSumInstance::with_ring(inst.ring(), sets)
}

/// Rewrites a complex instance over `C^m` as a real instance over `R^{2m}`,
/// interleaving `(re0, im0, re1, im1, ...)`. Solution tuples correspond
/// index-for-index in both directions because complex addition is
/// componentwise on real parts.
pub fn complex_to_real(inst: &KSumInstance) -> Result<KSumInstance> {
    let ring = inst.ring();
    match ring.tag {
        RingTag::Complex | RingTag::ComplexVector => {}
        _ => {
            return Err(Error::BadInstance(format!(
                "complex_to_real expects a complex ring, got {ring}"
            )))
        }
    }
    let out_ring = RingDescriptor::vector(2 * ring.arity);
    let sets = inst
        .sets()
        .iter()
        .map(|set| {
            set.iter()
                .map(|a| RingElement::Vector(a.real_components()))
                .collect()
        })
        .collect();
    Ok(KSumInstance::with_ring(out_ring, sets))
}

/// The random direction used to collapse a vector instance to a scalar one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectionVector {
    coords: Vec<Rational>,
    seed: u64,
}

impl ProjectionVector {
    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    /// The seed the coordinates were drawn from.
    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn dot(&self, components: &[Rational]) -> Result<Rational> {
        if components.len() != self.coords.len() {
            return Err(Error::ArityMismatch {
                expected: self.coords.len(),
                found: components.len(),
            });
        }
        let mut acc = Rational::new(BigInt::from(0), BigInt::from(1));
        for (c, v) in components.iter().zip(&self.coords) {
            acc += c * v;
        }
        Ok(acc)
    }
}

/// Draws a projection direction with independent uniform integer coordinates
/// in `[1, 2^62]`, deterministically from `rng_seed`. Integer coordinates
/// keep all arithmetic exact; for any fixed nonzero sum vector `s`, the
/// probability that `v . s = 0` is at most `d / 2^62`, and the pipeline's
/// verification step removes even those rare events.
pub fn draw_projection(d: usize, rng_seed: u64) -> ProjectionVector {
    assert!(d >= 1, "projection dimension must be at least 1");
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let coords = (0..d)
        .map(|_| Rational::from_integer(BigInt::from(rng.gen_range(1..=(1u64 << 62)))))
        .collect();
    ProjectionVector { coords, seed: rng_seed }
}

/// Rescales a real instance by the least common multiple of all element
/// denominators, turning every entry into an integer. Zero-sum tuples are
/// invariant under scaling by a positive constant, and integer entries make
/// hashing and comparisons in the solvers markedly cheaper.
pub fn clear_denominators(inst: &KSumInstance) -> KSumInstance {
    use num_integer::Integer;
    use num_traits::One;

    let mut lcm = BigInt::one();
    for set in inst.sets() {
        for e in set {
            for c in e.real_components() {
                lcm = lcm.lcm(c.denom());
            }
        }
    }
    if lcm.is_one() {
        return inst.clone();
    }
    let scale = Rational::from_integer(lcm);
    let scale_one = |x: &Rational| x * &scale;
    let sets = inst
        .sets()
        .iter()
        .map(|set| {
            set.iter()
                .map(|e| match e {
                    RingElement::Scalar(x) => RingElement::Scalar(scale_one(x)),
                    RingElement::Vector(xs) => {
                        RingElement::Vector(xs.iter().map(scale_one).collect())
                    }
                    _ => unreachable!("solvers only see real instances"),
                })
                .collect()
        })
        .collect();
    KSumInstance::with_ring(inst.ring(), sets)
}

/// Projects a vector instance to a scalar one by dotting every element with
/// `v`. Every solution of the input remains a solution of the projection;
/// the converse can fail and is caught later by exact verification.
pub fn project_instance(inst: &KSumInstance, v: &ProjectionVector) -> Result<KSumInstance> {
    let ring = inst.ring();
    if ring.tag != RingTag::Vector {
        return Err(Error::BadInstance(format!(
            "project_instance expects a real vector ring, got {ring}"
        )));
    }
    if ring.arity != v.coords().len() {
        return Err(Error::ArityMismatch { expected: ring.arity, found: v.coords().len() });
    }
    let sets = inst
        .sets()
        .iter()
        .map(|set| {
            set.iter()
                .map(|a| match a {
                    RingElement::Vector(ws) => Ok(RingElement::Scalar(v.dot(ws)?)),
                    _ => unreachable!("instance invariant: uniform ring"),
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(KSumInstance::with_ring(RingDescriptor::scalar(), sets))
}
