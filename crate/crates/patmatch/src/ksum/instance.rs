use crate::error::{Error, Result};
use crate::numeric::{RingDescriptor, RingElement};

/// A linear degeneracy testing instance: decide whether some tuple
/// `(a_1, ..., a_k)` drawn from the sets satisfies
/// `beta_0 + sum_i beta_i * a_i = 0` in the instance's ring.
#[derive(Debug, Clone)]
pub struct LdtInstance {
    ring: RingDescriptor,
    /// `beta[0]` is the constant term; `beta[i]` multiplies set `i-1`.
    beta: Vec<RingElement>,
    sets: Vec<Vec<RingElement>>,
}

impl LdtInstance {
    pub fn new(beta: Vec<RingElement>, sets: Vec<Vec<RingElement>>) -> Result<Self> {
        let k = sets.len();
        if k < 3 {
            return Err(Error::BadInstance(format!("k must be at least 3, got {k}")));
        }
        if beta.len() != k + 1 {
            return Err(Error::BadInstance(format!(
                "expected {} coefficients for k={k}, got {}",
                k + 1,
                beta.len()
            )));
        }
        let ring = beta[0].descriptor();
        for b in &beta {
            check_ring(ring, b)?;
        }
        for set in &sets {
            for a in set {
                check_ring(ring, a)?;
            }
        }
        Ok(LdtInstance { ring, beta, sets })
    }

    /// Pure k-SUM viewed as an LDT: zero constant term, all-one coefficients.
    pub fn from_ksum(inst: &KSumInstance) -> Self {
        let ring = inst.ring();
        let mut beta = vec![RingElement::zero(ring)];
        beta.extend(std::iter::repeat(RingElement::one(ring)).take(inst.k()));
        LdtInstance { ring, beta, sets: inst.sets().to_vec() }
    }

    pub fn k(&self) -> usize {
        self.sets.len()
    }

    pub fn ring(&self) -> RingDescriptor {
        self.ring
    }

    pub fn beta(&self) -> &[RingElement] {
        &self.beta
    }

    pub fn sets(&self) -> &[Vec<RingElement>] {
        &self.sets
    }

    /// Evaluates `f(a_1, ..., a_k) = beta_0 + sum_i beta_i a_i` at the tuple
    /// selected by `indices`.
    pub fn eval(&self, indices: &[usize]) -> Result<RingElement> {
        if indices.len() != self.k() {
            return Err(Error::ArityMismatch { expected: self.k(), found: indices.len() });
        }
        let mut acc = self.beta[0].clone();
        for (i, &idx) in indices.iter().enumerate() {
            let a = self.sets[i].get(idx).ok_or_else(|| {
                Error::BadInstance(format!("index {idx} out of range for set {i}"))
            })?;
            acc = acc.try_add(&self.beta[i + 1].try_mul(a)?)?;
        }
        Ok(acc)
    }

    /// True iff the tuple at `indices` satisfies `f = 0` exactly.
    pub fn verify_tuple(&self, indices: &[usize]) -> Result<bool> {
        Ok(self.eval(indices)?.is_zero())
    }

    pub fn witness(&self, indices: &[usize]) -> Vec<RingElement> {
        indices
            .iter()
            .enumerate()
            .map(|(i, &idx)| self.sets[i][idx].clone())
            .collect()
    }
}

/// A k-SUM instance: decide whether one element from each set sums to zero.
#[derive(Debug, Clone)]
pub struct KSumInstance {
    ring: RingDescriptor,
    sets: Vec<Vec<RingElement>>,
}

impl KSumInstance {
    pub fn new(sets: Vec<Vec<RingElement>>) -> Result<Self> {
        let k = sets.len();
        if k < 3 {
            return Err(Error::BadInstance(format!("k must be at least 3, got {k}")));
        }
        let first = sets
            .iter()
            .flat_map(|s| s.first())
            .next()
            .ok_or_else(|| Error::BadInstance("all sets are empty".into()))?;
        let ring = first.descriptor();
        for set in &sets {
            for a in set {
                check_ring(ring, a)?;
            }
        }
        Ok(KSumInstance { ring, sets })
    }

    /// Used by reductions whose output ring is known even when sets are empty.
    pub(crate) fn with_ring(ring: RingDescriptor, sets: Vec<Vec<RingElement>>) -> Self {
        KSumInstance { ring, sets }
    }

    pub fn k(&self) -> usize {
        self.sets.len()
    }

    pub fn ring(&self) -> RingDescriptor {
        self.ring
    }

    pub fn sets(&self) -> &[Vec<RingElement>] {
        &self.sets
    }

    pub fn sum_at(&self, indices: &[usize]) -> Result<RingElement> {
        if indices.len() != self.k() {
            return Err(Error::ArityMismatch { expected: self.k(), found: indices.len() });
        }
        let mut acc = RingElement::zero(self.ring);
        for (i, &idx) in indices.iter().enumerate() {
            let a = self.sets[i].get(idx).ok_or_else(|| {
                Error::BadInstance(format!("index {idx} out of range for set {i}"))
            })?;
            acc = acc.try_add(a)?;
        }
        Ok(acc)
    }

    /// True iff the tuple at `indices` sums to zero exactly.
    pub fn verify_tuple(&self, indices: &[usize]) -> Result<bool> {
        Ok(self.sum_at(indices)?.is_zero())
    }

    pub fn witness(&self, indices: &[usize]) -> Vec<RingElement> {
        indices
            .iter()
            .enumerate()
            .map(|(i, &idx)| self.sets[i][idx].clone())
            .collect()
    }
}

/// A solution: one index per set plus the selected elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolutionTuple {
    pub indices: Vec<usize>,
    pub witness: Vec<RingElement>,
}

impl SolutionTuple {
    pub fn new(indices: Vec<usize>, witness: Vec<RingElement>) -> Self {
        SolutionTuple { indices, witness }
    }
}

fn check_ring(expected: RingDescriptor, e: &RingElement) -> Result<()> {
    let found = e.descriptor();
    if expected != found {
        return Err(Error::RingMismatch { expected, found });
    }
    Ok(())
}
