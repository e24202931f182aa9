//! JSON wire helpers: complex numbers travel as `[re, im]` float pairs.

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub fn complex_to_pair(z: &Complex64) -> [f64; 2] {
    [z.re, z.im]
}

pub fn complex_from_pair(pair: [f64; 2]) -> Complex64 {
    Complex64::new(pair[0], pair[1])
}

pub fn vector_to_pairs(v: &[Complex64]) -> Vec<[f64; 2]> {
    v.iter().map(complex_to_pair).collect()
}

pub fn vector_from_pairs(pairs: &[[f64; 2]]) -> Vec<Complex64> {
    pairs.iter().map(|&p| complex_from_pair(p)).collect()
}

/// `#[serde(with = "wire::complex_vec")]` for `Vec<Complex64>`.
pub mod complex_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Complex64], s: S) -> Result<S::Ok, S::Error> {
        vector_to_pairs(v).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Complex64>, D::Error> {
        let pairs: Vec<[f64; 2]> = Deserialize::deserialize(d)?;
        Ok(vector_from_pairs(&pairs))
    }
}

/// `#[serde(with = "wire::complex_rows")]` for `Vec<Vec<Complex64>>`.
pub mod complex_rows {
    use super::*;

    pub fn serialize<S: Serializer>(rows: &[Vec<Complex64>], s: S) -> Result<S::Ok, S::Error> {
        rows.iter()
            .map(|r| vector_to_pairs(r))
            .collect::<Vec<_>>()
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<Complex64>>, D::Error> {
        let rows: Vec<Vec<[f64; 2]>> = Deserialize::deserialize(d)?;
        Ok(rows.iter().map(|r| vector_from_pairs(r)).collect())
    }
}

/// `#[serde(with = "wire::complex_vec_opt")]` for `Option<Vec<Complex64>>`.
pub mod complex_vec_opt {
    use super::*;

    pub fn serialize<S: Serializer>(
        v: &Option<Vec<Complex64>>,
        s: S,
    ) -> Result<S::Ok, S::Error> {
        v.as_ref().map(|v| vector_to_pairs(v)).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> Result<Option<Vec<Complex64>>, D::Error> {
        let pairs: Option<Vec<[f64; 2]>> = Deserialize::deserialize(d)?;
        Ok(pairs.map(|p| vector_from_pairs(&p)))
    }
}
