//! The dihedral group acting on `C^n` in the time picture (cyclic shift `T`
//! and index reversal `D`) and in the Fourier picture (modulation `M = F T
//! F^{-1}` and `D`, which commutes with the DFT), plus orbit-matrix assembly
//! and the finite Heisenberg comparison group.
//!
//! The 2n dihedral elements are enumerated rotations first, then
//! reflections, both by increasing power; every orbit matrix and every
//! certification report uses that fixed order.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactfield::CycloElement;
use crate::polyring::{PolyMatrix, TPoly};

#[derive(Debug, Error)]
pub enum GroupError {
    #[error("vector length {got} does not match dimension {expected}")]
    LengthMismatch { expected: usize, got: usize },
}

/// Rotation (`M^power`, time picture `T^power`) or reflection
/// (`M^power D`, time picture `T^power D`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ElementKind {
    Rotation,
    Reflection,
}

/// One of the 2n dihedral elements, identified by kind and power in `[0, n)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupElement {
    pub kind: ElementKind,
    pub power: usize,
}

impl GroupElement {
    /// The canonical enumeration: rotations `0..n`, then reflections `0..n`.
    pub fn enumerate(n: usize) -> Vec<GroupElement> {
        let rotations = (0..n).map(|power| GroupElement {
            kind: ElementKind::Rotation,
            power,
        });
        let reflections = (0..n).map(|power| GroupElement {
            kind: ElementKind::Reflection,
            power,
        });
        rotations.chain(reflections).collect()
    }

    /// Element at position `index` of the canonical enumeration.
    pub fn from_index(n: usize, index: usize) -> GroupElement {
        assert!(index < 2 * n, "orbit row index {index} out of range for n={n}");
        if index < n {
            GroupElement { kind: ElementKind::Rotation, power: index }
        } else {
            GroupElement { kind: ElementKind::Reflection, power: index - n }
        }
    }

    pub fn index(&self, n: usize) -> usize {
        match self.kind {
            ElementKind::Rotation => self.power,
            ElementKind::Reflection => n + self.power,
        }
    }
}

/// `iota(k) = (n - k) mod n`, the index reversal underlying `D`.
///
/// For even `n` the midpoint `n/2` is a fixed point, which is where the
/// even-order constructions break down.
pub fn iota(n: usize, k: usize) -> usize {
    assert!(k < n, "iota index {k} out of range for n={n}");
    (n - k) % n
}

/// Permutation matrix of the cyclic shift `(T v)(j) = v((j-1) mod n)`.
pub fn shift_matrix(n: usize) -> Vec<Vec<i64>> {
    assert!(n >= 3, "dihedral construction needs n >= 3");
    let mut m = vec![vec![0i64; n]; n];
    for j in 0..n {
        m[j][(j + n - 1) % n] = 1;
    }
    m
}

/// Permutation matrix of the reversal `(D v)(j) = v((n-j) mod n)`.
pub fn reflection_matrix(n: usize) -> Vec<Vec<i64>> {
    assert!(n >= 3, "dihedral construction needs n >= 3");
    let mut m = vec![vec![0i64; n]; n];
    for j in 0..n {
        m[j][iota(n, j)] = 1;
    }
    m
}

/// Unitary DFT matrix with entries `exp(2 pi i k xi / n) / sqrt(n)` at row
/// `xi`, column `k`.
pub fn fourier_matrix(n: usize) -> DMatrix<Complex64> {
    assert!(n >= 2, "fourier matrix needs n >= 2");
    let scale = 1.0 / (n as f64).sqrt();
    DMatrix::from_fn(n, n, |row, col| {
        let angle = std::f64::consts::TAU * (row * col) as f64 / n as f64;
        Complex64::from_polar(scale, angle)
    })
}

/// Exact unnormalized DFT matrix with entries `xi^{k j}`; dropping the
/// `n^{-1/2}` scaling does not change which minors vanish.
pub fn fourier_matrix_exact(n: usize) -> Vec<Vec<CycloElement>> {
    assert!(n >= 2, "fourier matrix needs n >= 2");
    (0..n)
        .map(|row| {
            (0..n)
                .map(|col| CycloElement::root_power(n, (row * col) as i64))
                .collect()
        })
        .collect()
}

/// Diagonal of `M^k = (F T F^{-1})^k`, namely `(1, xi^k, ..., xi^{(n-1)k})`.
pub fn conjugated_rotation(n: usize, k: usize) -> Vec<CycloElement> {
    assert!(k < n, "rotation power {k} out of range for n={n}");
    (0..n)
        .map(|j| CycloElement::root_power(n, (j * k) as i64))
        .collect()
}

/// Which group and picture an orbit is built in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OrbitGroup {
    /// `<M, D>` acting by modulations; rows are `xi^{jk} z_j` and
    /// `xi^{jk} z_{iota(j)}`.
    DihedralFourier,
    /// `<T, D>` acting by shifts and reversal.
    DihedralTime,
    /// Time-frequency shifts; `n^2` rows ordered lexicographically by
    /// `(shift, modulation)`.
    Heisenberg,
}

/// Row label of an orbit matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RowLabel {
    Dihedral(GroupElement),
    Heisenberg { shift: usize, modulation: usize },
}

/// Stacked orbit of a vector: one labeled row per group element.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OrbitMatrix {
    pub n: usize,
    pub group: OrbitGroup,
    pub labels: Vec<RowLabel>,
    #[serde(with = "crate::wire::complex_rows")]
    pub rows: Vec<Vec<Complex64>>,
}

/// Numeric orbit matrix of `z` under the chosen group; 2n rows for the
/// dihedral groups, `n^2` rows for Heisenberg.
pub fn orbit_matrix_numeric(
    n: usize,
    z: &[Complex64],
    group: OrbitGroup,
) -> Result<OrbitMatrix, GroupError> {
    if z.len() != n {
        return Err(GroupError::LengthMismatch { expected: n, got: z.len() });
    }
    let phase = |e: i64| {
        let k = e.rem_euclid(n as i64) as f64;
        Complex64::from_polar(1.0, std::f64::consts::TAU * k / n as f64)
    };
    let mut labels = Vec::new();
    let mut rows = Vec::new();
    match group {
        OrbitGroup::DihedralFourier => {
            for element in GroupElement::enumerate(n) {
                let k = element.power;
                let row = (0..n)
                    .map(|j| {
                        let source = match element.kind {
                            ElementKind::Rotation => j,
                            ElementKind::Reflection => iota(n, j),
                        };
                        phase((j * k) as i64) * z[source]
                    })
                    .collect();
                labels.push(RowLabel::Dihedral(element));
                rows.push(row);
            }
        }
        OrbitGroup::DihedralTime => {
            for element in GroupElement::enumerate(n) {
                let k = element.power;
                let row = (0..n)
                    .map(|j| {
                        let shifted = (j + n - k) % n;
                        let source = match element.kind {
                            ElementKind::Rotation => shifted,
                            ElementKind::Reflection => iota(n, shifted),
                        };
                        z[source]
                    })
                    .collect();
                labels.push(RowLabel::Dihedral(element));
                rows.push(row);
            }
        }
        OrbitGroup::Heisenberg => {
            for shift in 0..n {
                for modulation in 0..n {
                    // Shift first, then modulate: row (l, k) is M^k T^l z.
                    let row = (0..n)
                        .map(|j| phase((j * modulation) as i64) * z[(j + n - shift) % n])
                        .collect();
                    labels.push(RowLabel::Heisenberg { shift, modulation });
                    rows.push(row);
                }
            }
        }
    }
    Ok(OrbitMatrix { n, group, labels, rows })
}

/// The symbolic orbit `A(c(t))` of the moment curve in the Fourier picture.
#[derive(Clone, Debug)]
pub struct SymbolicOrbit {
    pub n: usize,
    pub labels: Vec<GroupElement>,
    pub matrix: PolyMatrix,
}

/// Orbit of the moment curve `c(t) = (1, t, ..., t^{n-1})` under `<M, D>`:
/// the rotation-`k` row has entries `xi^{jk} t^j` and the reflection-`k`
/// row has entries `xi^{jk} t^{iota(j)}`.
pub fn orbit_matrix_symbolic(n: usize) -> SymbolicOrbit {
    assert!(n >= 3, "dihedral construction needs n >= 3");
    let labels = GroupElement::enumerate(n);
    let rows = labels
        .iter()
        .map(|element| {
            let k = element.power;
            (0..n)
                .map(|j| {
                    let degree = match element.kind {
                        ElementKind::Rotation => j,
                        ElementKind::Reflection => iota(n, j),
                    };
                    TPoly::monomial(CycloElement::root_power(n, (j * k) as i64), degree)
                })
                .collect()
        })
        .collect();
    SymbolicOrbit {
        n,
        labels,
        matrix: PolyMatrix::from_rows(rows),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::rational;
    use crate::polyring::cyclo_matrix_det;
    use nalgebra::DVector;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn apply(m: &[Vec<i64>], v: &[Complex64]) -> Vec<Complex64> {
        m.iter()
            .map(|row| {
                row.iter()
                    .zip(v)
                    .map(|(&c, x)| x * c as f64)
                    .sum::<Complex64>()
            })
            .collect()
    }

    fn random_vector(rng: &mut ChaCha8Rng, n: usize) -> Vec<Complex64> {
        (0..n)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect()
    }

    #[test]
    fn iota_examples() {
        assert_eq!(iota(5, 2), 3);
        assert_eq!(iota(5, 0), 0);
        assert_eq!(iota(4, 2), 2);
    }

    #[test]
    fn shift_acts_as_right_rotation() {
        let v: Vec<Complex64> = [0.0, 1.0, 2.0]
            .iter()
            .map(|&x| Complex64::new(x, 0.0))
            .collect();
        let shifted = apply(&shift_matrix(3), &v);
        assert_eq!(shifted, vec![v[2], v[0], v[1]]);
    }

    #[test]
    fn dihedral_relations_hold() {
        for n in [3usize, 4, 5, 6] {
            let t = shift_matrix(n);
            let d = reflection_matrix(n);
            let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
            let v = random_vector(&mut rng, n);
            // D^2 = I and D T D T = I, checked on a random vector.
            let dd = apply(&d, &apply(&d, &v));
            for (a, b) in dd.iter().zip(&v) {
                assert!((a - b).norm() < 1e-14);
            }
            let dtdt = apply(&d, &apply(&t, &apply(&d, &apply(&t, &v))));
            for (a, b) in dtdt.iter().zip(&v) {
                assert!((a - b).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn fourier_matrix_is_unitary() {
        for n in [2usize, 3, 5, 8] {
            let f = fourier_matrix(n);
            let gram = f.adjoint() * &f;
            let id = DMatrix::<Complex64>::identity(n, n);
            assert!((gram - id).norm() < 1e-12);
        }
    }

    #[test]
    fn exact_fourier_entries() {
        let f = fourier_matrix_exact(2);
        assert_eq!(f[0][0], CycloElement::one(2));
        assert_eq!(f[1][1], CycloElement::from_ints(2, &[-1]));
        // Entry (2,3) at n=4 is xi^6 = xi^2 = -1.
        let f4 = fourier_matrix_exact(4);
        assert_eq!(f4[2][3], CycloElement::from_ints(4, &[-1]));
        assert_eq!(f4[2][3], CycloElement::root_power(4, 6));
    }

    #[test]
    fn conjugated_rotation_diagonal() {
        let id = conjugated_rotation(6, 0);
        assert!(id.iter().all(|c| *c == CycloElement::one(6)));

        let m = conjugated_rotation(4, 1);
        assert_eq!(m[0], CycloElement::one(4));
        assert_eq!(m[1], CycloElement::root_power(4, 1));
        assert_eq!(m[2], CycloElement::from_ints(4, &[-1]));
        assert_eq!(m[3], CycloElement::root_power(4, 3));

        // M^n = I: the k-th diagonal entry to the n-th power is xi^{kn} = 1.
        for (j, entry) in conjugated_rotation(5, 3).iter().enumerate() {
            let mut acc = CycloElement::one(5);
            for _ in 0..5 {
                acc = &acc * entry;
            }
            assert_eq!(acc, CycloElement::one(5), "diagonal entry {j}");
        }
    }

    #[test]
    fn fourier_intertwines_shift_and_reversal() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for n in [3usize, 4, 5, 7] {
            let f = fourier_matrix(n);
            let z = DVector::from_vec(random_vector(&mut rng, n));
            for k in 0..n {
                // F T^k z = M^k F z.
                let mut shifted = z.clone();
                for _ in 0..k {
                    let t = shift_matrix(n);
                    shifted = DVector::from_vec(apply(&t, shifted.as_slice()));
                }
                let lhs = &f * shifted;
                let fz = &f * &z;
                let rhs = DVector::from_fn(n, |j, _| {
                    let angle = std::f64::consts::TAU * (j * k) as f64 / n as f64;
                    Complex64::from_polar(1.0, angle) * fz[j]
                });
                assert!((lhs - rhs).norm() < 1e-10, "T intertwining n={n} k={k}");
            }
            // F D z = D F z.
            let d = reflection_matrix(n);
            let lhs = &f * DVector::from_vec(apply(&d, z.as_slice()));
            let fz = &f * &z;
            let rhs = DVector::from_vec(apply(&d, fz.as_slice()));
            assert!((lhs - rhs).norm() < 1e-10, "D intertwining n={n}");
        }
    }

    #[test]
    fn chebotarev_minors_nonzero_for_small_primes() {
        // Exhaustive over all square minors for prime n; n=7 runs in the
        // acceptance suite.
        for n in [2usize, 3, 5] {
            let f = fourier_matrix_exact(n);
            let mut checked = 0usize;
            for size in 1..=n {
                let sets = all_subsets(n, size);
                for rows in &sets {
                    for cols in &sets {
                        let minor: Vec<Vec<CycloElement>> = rows
                            .iter()
                            .map(|&r| cols.iter().map(|&c| f[r][c].clone()).collect())
                            .collect();
                        assert!(
                            !cyclo_matrix_det(n, &minor).is_zero(),
                            "vanishing minor at n={n}, rows {rows:?}, cols {cols:?}"
                        );
                        checked += 1;
                    }
                }
            }
            assert!(checked > 0);
        }
    }

    fn all_subsets(pool: usize, size: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut current = Vec::new();
        fn rec(
            pool: usize,
            size: usize,
            start: usize,
            current: &mut Vec<usize>,
            out: &mut Vec<Vec<usize>>,
        ) {
            if current.len() == size {
                out.push(current.clone());
                return;
            }
            for k in start..pool {
                current.push(k);
                rec(pool, size, k + 1, current, out);
                current.pop();
            }
        }
        rec(pool, size, 0, &mut current, &mut out);
        out
    }

    #[test]
    fn orbit_rows_match_group_action() {
        let n = 3;
        let ones = vec![Complex64::new(1.0, 0.0); n];
        let orbit = orbit_matrix_numeric(n, &ones, OrbitGroup::DihedralFourier).unwrap();
        // D fixes the all-ones vector, so reflection rows duplicate rotation
        // rows.
        for k in 0..n {
            assert_eq!(orbit.rows[k], orbit.rows[n + k]);
        }

        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let z = random_vector(&mut rng, 4);
        let time = orbit_matrix_numeric(4, &z, OrbitGroup::DihedralTime).unwrap();
        // Row (rotation, 1) is the cyclic right shift of z.
        assert_eq!(time.rows[1], vec![z[3], z[0], z[1], z[2]]);
    }

    #[test]
    fn heisenberg_orbit_at_n_two() {
        let z = vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)];
        let orbit = orbit_matrix_numeric(2, &z, OrbitGroup::Heisenberg).unwrap();
        assert_eq!(orbit.rows.len(), 4);
        let expect = [[1.0, 0.0], [1.0, 0.0], [0.0, 1.0], [0.0, -1.0]];
        for (row, want) in orbit.rows.iter().zip(expect.iter()) {
            for (a, &b) in row.iter().zip(want.iter()) {
                assert!((a - Complex64::new(b, 0.0)).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn orbit_rejects_wrong_length() {
        let z = vec![Complex64::new(1.0, 0.0); 4];
        assert!(matches!(
            orbit_matrix_numeric(5, &z, OrbitGroup::DihedralTime),
            Err(GroupError::LengthMismatch { expected: 5, got: 4 })
        ));
    }

    #[test]
    fn dihedral_orbit_is_the_expected_row_set() {
        // The 2n numeric orbit rows of a random z are exactly
        // {M^k z} union {M^k D z}.
        let n = 5;
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let z = random_vector(&mut rng, n);
        let orbit = orbit_matrix_numeric(n, &z, OrbitGroup::DihedralFourier).unwrap();
        let phase = |e: usize| {
            Complex64::from_polar(1.0, std::f64::consts::TAU * (e % n) as f64 / n as f64)
        };
        let mut expected: Vec<Vec<Complex64>> = Vec::new();
        for k in 0..n {
            expected.push((0..n).map(|j| phase(j * k) * z[j]).collect());
        }
        for k in 0..n {
            expected.push((0..n).map(|j| phase(j * k) * z[iota(n, j)]).collect());
        }
        for row in &orbit.rows {
            let hit = expected
                .iter()
                .any(|e| e.iter().zip(row).all(|(a, b)| (a - b).norm() < 1e-12));
            assert!(hit, "orbit row not produced by any M^k or M^k D");
        }
        for e in &expected {
            let hit = orbit
                .rows
                .iter()
                .any(|row| e.iter().zip(row).all(|(a, b)| (a - b).norm() < 1e-12));
            assert!(hit, "expected group-action row missing from the orbit");
        }
    }

    #[test]
    fn symbolic_orbit_entries() {
        let n = 5;
        let orbit = orbit_matrix_symbolic(n);
        // Rotation-0 row: entry j is t^j.
        for j in 0..n {
            assert_eq!(
                orbit.matrix.at(0, j),
                &TPoly::monomial(CycloElement::one(n), j)
            );
        }
        // Reflection-0 row entry 1 is t^{iota(1)} = t^4.
        assert_eq!(
            orbit.matrix.at(n, 1),
            &TPoly::monomial(CycloElement::one(n), 4)
        );
        // Rotation-2 row entry 3 is xi^6 t^3 = xi t^3.
        assert_eq!(
            orbit.matrix.at(2, 3),
            &TPoly::monomial(CycloElement::root_power(n, 1), 3)
        );
    }

    #[test]
    fn orbit_matrix_serializes_with_row_labels() {
        let z = vec![Complex64::new(1.0, 0.0); 3];
        let orbit = orbit_matrix_numeric(3, &z, OrbitGroup::DihedralFourier).unwrap();
        let json = serde_json::to_value(&orbit).unwrap();
        assert_eq!(json["group"], "dihedral-fourier");
        assert_eq!(json["labels"][4]["kind"], "reflection");
        assert_eq!(json["labels"][4]["power"], 1);
        assert!(json["rows"][0][0].is_array());
        let back: OrbitMatrix = serde_json::from_value(json).unwrap();
        assert_eq!(back.labels, orbit.labels);

        let h = orbit_matrix_numeric(2, &z[..2], OrbitGroup::Heisenberg).unwrap();
        let json = serde_json::to_value(&h).unwrap();
        assert_eq!(json["labels"][3]["shift"], 1);
        assert_eq!(json["labels"][3]["modulation"], 1);
    }

    #[test]
    fn symbolic_orbit_evaluates_to_numeric_orbit() {
        let n = 4;
        let lambda = rational(2, 1);
        let orbit = orbit_matrix_symbolic(n);
        let z: Vec<Complex64> = (0..n)
            .map(|j| Complex64::new(2f64.powi(j as i32), 0.0))
            .collect();
        let numeric = orbit_matrix_numeric(n, &z, OrbitGroup::DihedralFourier).unwrap();
        for i in 0..2 * n {
            for j in 0..n {
                let exact = orbit.matrix.at(i, j).eval_rational(&lambda).to_complex();
                assert!(
                    (exact - numeric.rows[i][j]).norm() < 1e-10,
                    "entry ({i},{j}) mismatch"
                );
            }
        }
    }
}
