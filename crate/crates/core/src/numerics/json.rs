//! Matrix JSON: `{"dim": n, "entries": [[re, im], ...]}`, row-major, `n²` entries.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::complex::{ComplexMatrix, DensityMatrix, HermitianMatrix};
use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub dim: usize,
    pub entries: Vec<[f64; 2]>,
}

impl MatrixJson {
    pub fn from_hermitian<T: Real>(m: &HermitianMatrix<T>) -> Self {
        Self {
            dim: m.dim(),
            entries: m
                .matrix()
                .as_slice()
                .iter()
                .map(|z| [z.re.to_f64_lossy(), z.im.to_f64_lossy()])
                .collect(),
        }
    }

    pub fn to_hermitian<T: Real>(&self) -> Result<HermitianMatrix<T>> {
        if self.dim == 0 {
            return Err(Error::InvalidInput("matrix dim must be positive".into()));
        }
        if self.entries.len() != self.dim * self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim * self.dim,
                found: self.entries.len(),
            });
        }
        let data = self
            .entries
            .iter()
            .map(|[re, im]| Complex::new(T::lit(*re), T::lit(*im)))
            .collect();
        HermitianMatrix::new(ComplexMatrix::from_row_major(self.dim, data)?)
    }

    pub fn to_density<T: Real>(&self) -> Result<DensityMatrix<T>> {
        DensityMatrix::new(self.to_hermitian()?)
    }
}

impl<T: Real> Serialize for HermitianMatrix<T> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixJson::from_hermitian(self).serialize(s)
    }
}

impl<'de, T: Real> Deserialize<'de> for HermitianMatrix<T> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        MatrixJson::deserialize(d)?
            .to_hermitian()
            .map_err(serde::de::Error::custom)
    }
}

impl<T: Real> Serialize for DensityMatrix<T> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.as_hermitian().serialize(s)
    }
}

impl<'de, T: Real> Deserialize<'de> for DensityMatrix<T> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        MatrixJson::deserialize(d)?
            .to_density()
            .map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_documented_layout() {
        let text = r#"{"dim": 2, "entries": [[0,0],[0,-1],[0,1],[0,0]]}"#;
        let y: HermitianMatrix<f64> = serde_json::from_str(text).unwrap();
        assert_eq!(y.get(0, 1), Complex::new(0.0, -1.0));
        assert_eq!(y.get(1, 0), Complex::new(0.0, 1.0));
    }

    #[test]
    fn rejects_wrong_length_and_asymmetry() {
        let short = MatrixJson {
            dim: 2,
            entries: vec![[1.0, 0.0]; 3],
        };
        assert!(matches!(
            short.to_hermitian::<f64>(),
            Err(Error::DimensionMismatch { .. })
        ));
        let asym = MatrixJson {
            dim: 2,
            entries: vec![[0.0, 0.0], [1.0, 0.0], [0.0, 0.0], [0.0, 0.0]],
        };
        assert!(matches!(
            asym.to_hermitian::<f64>(),
            Err(Error::NonHermitianInput { .. })
        ));
    }

    proptest! {
        #[test]
        fn json_round_trip(entries in proptest::collection::vec((-1e3f64..1e3, -1e3f64..1e3), 9)) {
            let mut m = ComplexMatrix::<f64>::zeros(3);
            for i in 0..3 {
                for j in 0..3 {
                    let (re, im) = entries[i * 3 + j];
                    if i == j {
                        m[(i, j)] = Complex::new(re, 0.0);
                    } else if i < j {
                        m[(i, j)] = Complex::new(re, im);
                        m[(j, i)] = Complex::new(re, -im);
                    }
                }
            }
            let h = HermitianMatrix::new(m).unwrap();
            let text = serde_json::to_string(&h).unwrap();
            let back: HermitianMatrix<f64> = serde_json::from_str(&text).unwrap();
            prop_assert_eq!(back, h);
        }
    }
}
