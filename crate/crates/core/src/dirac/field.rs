use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quat::Quat;

/// Smallest admissible `|ψ_f|²` relative to the mean.
pub const NONVANISHING_RATIO: f64 = 1e-6;

/// One quaternion per face, in that face's chart trivialization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpinorField(pub Vec<Quat>);

impl SpinorField {
    pub fn constant(face_count: usize, value: Quat) -> Self {
        SpinorField(vec![value; face_count])
    }

    pub fn ones(face_count: usize) -> Self {
        Self::constant(face_count, Quat::ONE)
    }

    /// Components drawn uniformly from `[-1, 1]`.
    pub fn random<R: Rng>(face_count: usize, rng: &mut R) -> Self {
        SpinorField(
            (0..face_count)
                .map(|_| {
                    Quat::new(
                        rng.gen_range(-1.0..1.0),
                        rng.gen_range(-1.0..1.0),
                        rng.gen_range(-1.0..1.0),
                        rng.gen_range(-1.0..1.0),
                    )
                })
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Right multiplication by a constant, `ψ ↦ ψλ`.
    pub fn times(&self, lambda: Quat) -> Self {
        SpinorField(self.0.iter().map(|&q| q * lambda).collect())
    }

    pub fn scaled(&self, s: f64) -> Self {
        SpinorField(self.0.iter().map(|&q| q * s).collect())
    }

    /// Fails on the first face whose `|ψ_f|²` falls below
    /// [`NONVANISHING_RATIO`] times the mean, or is not finite.
    pub fn check_nonvanishing(&self) -> Result<()> {
        if let Some(face) = self.0.iter().position(|q| !q.is_finite()) {
            return Err(Error::DegenerateSpinor { face });
        }
        let mean = self.0.iter().map(|q| q.norm2()).sum::<f64>() / self.0.len().max(1) as f64;
        match self
            .0
            .iter()
            .position(|q| !(q.norm2() >= NONVANISHING_RATIO * mean) || mean == 0.0)
        {
            Some(face) => Err(Error::DegenerateSpinor { face }),
            None => Ok(()),
        }
    }

    pub fn to_flat(&self) -> Vec<f64> {
        self.0.iter().flat_map(|q| q.to_array()).collect()
    }

    pub fn from_flat(x: &[f64]) -> Self {
        SpinorField(
            x.chunks_exact(4)
                .map(|c| Quat::new(c[0], c[1], c[2], c[3]))
                .collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn vanishing_face_is_reported() {
        let mut psi = SpinorField::ones(5);
        psi.0[3] = Quat::real(1e-4);
        assert_eq!(
            psi.check_nonvanishing(),
            Err(Error::DegenerateSpinor { face: 3 })
        );
        psi.0[3] = Quat::real(f64::NAN);
        assert_eq!(
            psi.check_nonvanishing(),
            Err(Error::DegenerateSpinor { face: 3 })
        );
        assert!(SpinorField::ones(5).check_nonvanishing().is_ok());
    }

    #[test]
    fn flat_roundtrip() {
        let psi = SpinorField::random(7, &mut ChaCha8Rng::seed_from_u64(1));
        assert_eq!(SpinorField::from_flat(&psi.to_flat()), psi);
    }
}
