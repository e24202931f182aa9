//! Exact full-spark certification.
//!
//! A dihedral orbit is full spark exactly when every `n x n` submatrix of
//! the symbolic orbit matrix `A(c(t))` has a nonzero determinant in
//! `Q(xi_n)[t]`. The certifier enumerates all `C(2n, n)` row subsets,
//! computes each determinant exactly, and reports either a certificate or
//! the complete list of vanishing subsets. Evaluating at a rational point
//! `t = lambda` instead gives an exact certificate for the concrete vector
//! `c(lambda)`.
//!
//! Enumeration is lexicographic and restartable from any rank, which is
//! what makes the chunked parallel run deterministic: outcomes are merged
//! in rank order no matter how many workers computed them.

use std::collections::BTreeMap;
use std::time::Instant;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactfield::CycloElement;
use crate::exec::{run_chunked, DEFAULT_CHUNK_SIZE};
use crate::grouprep::{orbit_matrix_symbolic, ElementKind, GroupElement, SymbolicOrbit};
use crate::polyring::{cyclo_matrix_det, vandermonde_det, PolyMatrix, TPoly};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CertifierError {
    #[error("subset is not a mixed (case-b) subset")]
    NotCaseB,
}

/// `C(pool, choose)` as an exact `u64`; panics on overflow.
pub fn binomial(pool: u64, choose: u64) -> u64 {
    if choose > pool {
        return 0;
    }
    let k = choose.min(pool - choose);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (pool - i) as u128 / (i + 1) as u128;
    }
    u64::try_from(acc).expect("binomial coefficient overflows u64")
}

/// A strictly increasing row subset, drawn from `[0, pool)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SubsetIndex(Vec<usize>);

impl SubsetIndex {
    pub fn new(indices: Vec<usize>) -> Self {
        assert!(
            indices.windows(2).all(|w| w[0] < w[1]),
            "subset indices must be strictly increasing"
        );
        SubsetIndex(indices)
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Stable map key: indices joined by commas.
    pub fn key(&self) -> String {
        self.0
            .iter()
            .map(|i| i.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }
}

/// Lexicographic stream of `choose`-subsets of `[0, pool)`, restartable
/// from any rank.
pub struct SubsetIter {
    pool: usize,
    current: Option<Vec<usize>>,
}

impl Iterator for SubsetIter {
    type Item = SubsetIndex;

    fn next(&mut self) -> Option<SubsetIndex> {
        let current = self.current.take()?;
        let item = SubsetIndex(current.clone());
        self.current = next_combination(self.pool, current);
        Some(item)
    }
}

fn next_combination(pool: usize, mut c: Vec<usize>) -> Option<Vec<usize>> {
    let k = c.len();
    if k == 0 {
        return None;
    }
    let mut i = k;
    while i > 0 {
        i -= 1;
        if c[i] < pool - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return Some(c);
        }
    }
    None
}

/// All `C(pool, choose)` subsets in lexicographic order.
pub fn enumerate_subsets(pool: usize, choose: usize) -> SubsetIter {
    enumerate_subsets_from(pool, choose, 0)
}

/// The lexicographic stream starting at `rank` (0-based), so disjoint
/// chunks of ranks partition the enumeration exactly.
pub fn enumerate_subsets_from(pool: usize, choose: usize, rank: u64) -> SubsetIter {
    assert!(choose <= pool, "cannot choose {choose} from {pool}");
    let total = binomial(pool as u64, choose as u64);
    if rank >= total {
        return SubsetIter { pool, current: None };
    }
    // Standard unranking: walk candidates left to right, skipping the
    // block of combinations each rejected candidate would lead.
    let mut remaining = rank;
    let mut indices = Vec::with_capacity(choose);
    let mut candidate = 0usize;
    for slot in 0..choose {
        loop {
            let with_candidate =
                binomial((pool - candidate - 1) as u64, (choose - slot - 1) as u64);
            if remaining < with_candidate {
                indices.push(candidate);
                candidate += 1;
                break;
            }
            remaining -= with_candidate;
            candidate += 1;
        }
    }
    SubsetIter { pool, current: Some(indices) }
}

// ---------------------------------------------------------------------------
// Subset classification and the closed-form quantities
// ---------------------------------------------------------------------------

/// Shape of a mixed subset: `m` rotation powers `ls` and `s = n - m`
/// reflection powers `js`, each list strictly increasing.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseBShape {
    pub m: usize,
    pub s: usize,
    pub ls: Vec<usize>,
    pub js: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SubsetClass {
    AllRotations,
    AllReflections,
    CaseB(CaseBShape),
}

/// Split a row subset of the `2n`-row orbit into rotation and reflection
/// powers.
pub fn classify_subset(sub: &SubsetIndex, n: usize) -> SubsetClass {
    let mut ls = Vec::new();
    let mut js = Vec::new();
    for &idx in sub.indices() {
        assert!(idx < 2 * n, "row index {idx} out of range for n={n}");
        match GroupElement::from_index(n, idx).kind {
            ElementKind::Rotation => ls.push(idx),
            ElementKind::Reflection => js.push(idx - n),
        }
    }
    if js.is_empty() {
        SubsetClass::AllRotations
    } else if ls.is_empty() {
        SubsetClass::AllReflections
    } else {
        let (m, s) = (ls.len(), js.len());
        SubsetClass::CaseB(CaseBShape { m, s, ls, js })
    }
}

/// `kappa(n, m) = sum_{k=1}^{m-1} k + sum_{k=1}^{n-m} k`, the degree of the
/// distinguished monomial in a mixed subset determinant.
pub fn kappa(n: usize, m: usize) -> u64 {
    assert!((1..=n).contains(&m), "kappa requires 1 <= m <= n");
    let first: u64 = (1..m as u64).sum();
    let second: u64 = (1..=(n - m) as u64).sum();
    first + second
}

/// The block constant `C`: the reflection phase prefix `xi^{m * sum js}`
/// times the two root-of-unity difference products. Never zero, since
/// `xi^a - xi^b != 0` for distinct exponents modulo `n`.
pub fn block_constant_c(n: usize, shape: &CaseBShape) -> CycloElement {
    assert_eq!(shape.m + shape.s, n, "shape must satisfy m + s = n");
    let phase_exp: i64 = shape.js.iter().map(|&j| (shape.m * j) as i64).sum();
    let mut c = CycloElement::root_power(n, phase_exp);
    for k in 0..shape.s {
        for l in k + 1..shape.s {
            let diff = &CycloElement::root_power(n, shape.js[l] as i64)
                - &CycloElement::root_power(n, shape.js[k] as i64);
            c = &c * &diff;
        }
    }
    for k in 0..shape.m {
        for j in k + 1..shape.m {
            let diff = &CycloElement::root_power(n, shape.ls[j] as i64)
                - &CycloElement::root_power(n, shape.ls[k] as i64);
            c = &c * &diff;
        }
    }
    c
}

/// Which of the two unmixed subsets a closed-form determinant refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CaseAKind {
    Rotations,
    Reflections,
}

/// Closed form for an unmixed subset determinant:
/// `prod_{0 <= j < k <= n-1} (xi^k - xi^j) * t^{n(n-1)/2}`.
///
/// The two unmixed subsets share this value: factoring the per-column
/// powers of `t` leaves the same root-of-unity power matrix either way.
pub fn case_a_det(n: usize, which: CaseAKind) -> TPoly {
    assert!(n >= 3, "dihedral construction needs n >= 3");
    let _ = which;
    let nodes: Vec<CycloElement> = (0..n)
        .map(|k| CycloElement::root_power(n, k as i64))
        .collect();
    let constant = vandermonde_det(&nodes);
    TPoly::monomial(constant, n * (n - 1) / 2)
}

// ---------------------------------------------------------------------------
// Subset determinants
// ---------------------------------------------------------------------------

/// Exact determinant of the `n` selected rows of a symbolic orbit.
///
/// Each column's common power of `t` is factored out first — entries are
/// monomials, so this is plain multilinearity — which keeps intermediate
/// degrees in the elimination small.
pub fn subset_determinant(orbit: &SymbolicOrbit, sub: &SubsetIndex) -> TPoly {
    let n = orbit.n;
    assert_eq!(sub.len(), n, "row subset must have cardinality n");
    let mut rows: Vec<Vec<TPoly>> = sub
        .indices()
        .iter()
        .map(|&i| orbit.matrix.row(i).to_vec())
        .collect();
    let mut factored: usize = 0;
    for j in 0..n {
        let mut min_degree = None;
        for row in &rows {
            match row[j].min_structural_degree() {
                Some(d) => {
                    min_degree = Some(min_degree.map_or(d, |m: usize| m.min(d)));
                }
                None => {
                    min_degree = None;
                    break;
                }
            }
        }
        let Some(shift) = min_degree else {
            // A structurally zero column forces a zero determinant.
            return TPoly::zero(orbit.matrix.field_order());
        };
        if shift > 0 {
            factored += shift;
            for row in &mut rows {
                row[j] = row[j].shift_down(shift);
            }
        }
    }
    let det = PolyMatrix::from_rows(rows).determinant().shift_up(factored);
    #[cfg(debug_assertions)]
    {
        match classify_subset(sub, n) {
            SubsetClass::AllRotations => debug_assert_eq!(det, case_a_det(n, CaseAKind::Rotations)),
            SubsetClass::AllReflections => {
                debug_assert_eq!(det, case_a_det(n, CaseAKind::Reflections))
            }
            SubsetClass::CaseB(_) => {}
        }
    }
    det
}

/// Determinant of the orbit rows named by `sub` for the moment curve; see
/// [`subset_determinant`] for reuse of a shared orbit.
pub fn subset_det_symbolic(n: usize, sub: &SubsetIndex) -> TPoly {
    subset_determinant(&orbit_matrix_symbolic(n), sub)
}

/// Check that the coefficient of `t^{kappa(n, m)}` in a mixed subset
/// determinant is exactly `+-C` for that subset's block constant. This is
/// the mechanism that forces mixed determinants to be nonzero for odd `n`.
pub fn kappa_coefficient_check(n: usize, sub: &SubsetIndex) -> Result<bool, CertifierError> {
    let SubsetClass::CaseB(shape) = classify_subset(sub, n) else {
        return Err(CertifierError::NotCaseB);
    };
    let det = subset_det_symbolic(n, sub);
    let target = kappa(n, shape.m) as usize;
    let coefficient = det.coeff(target);
    let c = block_constant_c(n, &shape);
    Ok(coefficient == c || coefficient == -&c)
}

// ---------------------------------------------------------------------------
// Certification
// ---------------------------------------------------------------------------

/// A subset whose determinant vanished, with its row labels.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub indices: Vec<usize>,
    pub labels: Vec<GroupElement>,
}

/// Outcome of a certification run over all `C(2n, n)` row subsets.
///
/// `certified` holds exactly when `witnesses` is empty. `degrees` maps each
/// nonzero subset (comma-joined indices) to its determinant degree and is
/// present only for symbolic runs. `elapsed_ms` and `workers` are timing
/// metadata, excluded from content comparisons.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CertificateReport {
    pub n: usize,
    pub group: String,
    pub total: u64,
    pub certified: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<String>,
    pub witnesses: Vec<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degrees: Option<BTreeMap<String, u64>>,
    pub elapsed_ms: u64,
    pub workers: usize,
}

impl CertificateReport {
    /// Field-by-field equality excluding the timing metadata.
    pub fn content_eq(&self, other: &CertificateReport) -> bool {
        self.n == other.n
            && self.group == other.group
            && self.total == other.total
            && self.certified == other.certified
            && self.lambda == other.lambda
            && self.witnesses == other.witnesses
            && self.degrees == other.degrees
    }
}

fn format_lambda(lambda: &BigRational) -> String {
    format!("{}/{}", lambda.numer(), lambda.denom())
}

fn assemble_report(
    n: usize,
    lambda: Option<String>,
    outcomes: Vec<(SubsetIndex, Option<u64>)>,
    record_degrees: bool,
    workers: usize,
    started: Instant,
) -> CertificateReport {
    let total = outcomes.len() as u64;
    let mut witnesses = Vec::new();
    let mut degrees = record_degrees.then(BTreeMap::new);
    for (sub, degree) in outcomes {
        match degree {
            Some(d) => {
                if let Some(map) = degrees.as_mut() {
                    map.insert(sub.key(), d);
                }
            }
            None => witnesses.push(Witness {
                labels: sub
                    .indices()
                    .iter()
                    .map(|&i| GroupElement::from_index(n, i))
                    .collect(),
                indices: sub.0,
            }),
        }
    }
    CertificateReport {
        n,
        group: "dihedral".to_string(),
        total,
        certified: witnesses.is_empty(),
        lambda,
        witnesses,
        degrees,
        elapsed_ms: started.elapsed().as_millis() as u64,
        workers,
    }
}

/// Certify the full-spark property of the symbolic dihedral orbit: compute
/// the exact determinant of every `n x n` row submatrix of `A(c(t))`.
///
/// Refutation (a nonempty witness list) is a valid outcome, not an error;
/// the report content is identical for every worker count.
pub fn certify_full_spark_symbolic(n: usize, workers: usize) -> CertificateReport {
    assert!(n >= 3, "certification needs n >= 3");
    let started = Instant::now();
    let orbit = orbit_matrix_symbolic(n);
    let total = binomial(2 * n as u64, n as u64);
    let outcomes = run_chunked(total, DEFAULT_CHUNK_SIZE, workers, |start, end| {
        let mut iter = enumerate_subsets_from(2 * n, n, start);
        let mut out = Vec::with_capacity((end - start) as usize);
        for _ in start..end {
            let sub = iter.next().expect("enumeration covers every chunk");
            let degree = subset_determinant(&orbit, &sub).degree().map(|d| d as u64);
            out.push((sub, degree));
        }
        out
    });
    assemble_report(n, None, outcomes, true, workers, started)
}

/// Exact certification of the concrete vector `c(lambda)`: every subset
/// determinant is evaluated at the rational point and zero-tested in
/// `Q(xi_n)`. A fully nonzero report proves that this specific orbit is
/// full spark.
pub fn certify_at_lambda(n: usize, lambda: &BigRational, workers: usize) -> CertificateReport {
    assert!(n >= 3, "certification needs n >= 3");
    let started = Instant::now();
    let orbit = orbit_matrix_symbolic(n);
    let evaluated: Vec<Vec<CycloElement>> = (0..2 * n)
        .map(|i| {
            (0..n)
                .map(|j| orbit.matrix.at(i, j).eval_rational(lambda))
                .collect()
        })
        .collect();
    let total = binomial(2 * n as u64, n as u64);
    let outcomes = run_chunked(total, DEFAULT_CHUNK_SIZE, workers, |start, end| {
        let mut iter = enumerate_subsets_from(2 * n, n, start);
        let mut out = Vec::with_capacity((end - start) as usize);
        for _ in start..end {
            let sub = iter.next().expect("enumeration covers every chunk");
            let rows: Vec<Vec<CycloElement>> = sub
                .indices()
                .iter()
                .map(|&i| evaluated[i].clone())
                .collect();
            let value = cyclo_matrix_det(n, &rows);
            // Degrees are undefined for evaluated determinants; reuse the
            // slot as a nonzero marker.
            let marker = (!value.is_zero()).then_some(0);
            out.push((sub, marker));
        }
        out
    });
    assemble_report(n, Some(format_lambda(lambda)), outcomes, false, workers, started)
}

// ---------------------------------------------------------------------------
// Lemma suite
// ---------------------------------------------------------------------------

/// Status of one lemma-level check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
}

/// One lemma-level check with a short human-readable summary.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LemmaCheck {
    pub name: String,
    pub status: CheckStatus,
    pub details: String,
}

/// Report of the per-order lemma checks backing the main theorem.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LemmaSuiteReport {
    pub n: usize,
    pub checks: Vec<LemmaCheck>,
    pub all_pass: bool,
    pub elapsed_ms: u64,
    pub workers: usize,
}

/// Run the lemma-level property checks at order `n`:
///
/// * every mixed subset determinant carries coefficient `+-C` at degree
///   `kappa(n, m)` (fails for even `n`, as it should);
/// * unmixed subset determinants equal the closed form
///   `(Vandermonde constant) * t^{n(n-1)/2}`;
/// * every subset determinant has degree at most `n(n-1)`;
/// * for prime `n`, every minor of the unnormalized DFT matrix is nonzero;
/// * the explicit power-matrix determinant matches the Vandermonde product
///   formula on the root nodes.
pub fn run_lemma_suite(n: usize, workers: usize) -> LemmaSuiteReport {
    assert!(n >= 3, "lemma suite needs n >= 3");
    let started = Instant::now();
    let orbit = orbit_matrix_symbolic(n);
    let total = binomial(2 * n as u64, n as u64);

    struct SubsetFacts {
        key: String,
        kappa_ok: Option<bool>,
        degree_ok: bool,
    }

    let facts = run_chunked(total, DEFAULT_CHUNK_SIZE, workers, |start, end| {
        let mut iter = enumerate_subsets_from(2 * n, n, start);
        let mut out = Vec::with_capacity((end - start) as usize);
        for _ in start..end {
            let sub = iter.next().expect("enumeration covers every chunk");
            let det = subset_determinant(&orbit, &sub);
            let degree_ok = det.degree().is_none_or(|d| d <= n * (n - 1));
            let kappa_ok = match classify_subset(&sub, n) {
                SubsetClass::CaseB(shape) => {
                    let coefficient = det.coeff(kappa(n, shape.m) as usize);
                    let c = block_constant_c(n, &shape);
                    Some(coefficient == c || coefficient == -&c)
                }
                _ => None,
            };
            out.push(SubsetFacts { key: sub.key(), kappa_ok, degree_ok });
        }
        out
    });

    let mut checks = Vec::new();

    let mixed_total = facts.iter().filter(|f| f.kappa_ok.is_some()).count();
    let kappa_failures: Vec<&str> = facts
        .iter()
        .filter(|f| f.kappa_ok == Some(false))
        .map(|f| f.key.as_str())
        .collect();
    checks.push(LemmaCheck {
        name: "kappa-coefficient".to_string(),
        status: if kappa_failures.is_empty() {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        },
        details: if kappa_failures.is_empty() {
            format!("{mixed_total} mixed subsets carry +-C at t^kappa")
        } else {
            format!(
                "{} of {mixed_total} mixed subsets miss +-C at t^kappa (first: {})",
                kappa_failures.len(),
                kappa_failures[0]
            )
        },
    });

    let degree_failures = facts.iter().filter(|f| !f.degree_ok).count();
    checks.push(LemmaCheck {
        name: "degree-bound".to_string(),
        status: if degree_failures == 0 {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        },
        details: format!(
            "{} of {} subset determinants exceed degree n(n-1) = {}",
            degree_failures,
            facts.len(),
            n * (n - 1)
        ),
    });

    let rotations = SubsetIndex::new((0..n).collect());
    let reflections = SubsetIndex::new((n..2 * n).collect());
    let case_a_ok = subset_determinant(&orbit, &rotations) == case_a_det(n, CaseAKind::Rotations)
        && subset_determinant(&orbit, &reflections) == case_a_det(n, CaseAKind::Reflections);
    checks.push(LemmaCheck {
        name: "case-a-closed-form".to_string(),
        status: if case_a_ok { CheckStatus::Pass } else { CheckStatus::Fail },
        details: "unmixed determinants vs (Vandermonde constant) * t^{n(n-1)/2}".to_string(),
    });

    if is_prime(n) {
        let (minors, nonzero) = fourier_minor_census(n, workers);
        checks.push(LemmaCheck {
            name: "chebotarev-minors".to_string(),
            status: if minors == nonzero { CheckStatus::Pass } else { CheckStatus::Fail },
            details: format!("{nonzero} of {minors} DFT minors nonzero"),
        });
    } else {
        checks.push(LemmaCheck {
            name: "chebotarev-minors".to_string(),
            status: CheckStatus::Skipped,
            details: format!("n = {n} is not prime"),
        });
    }

    let nodes: Vec<CycloElement> = (0..n)
        .map(|k| CycloElement::root_power(n, k as i64))
        .collect();
    let power_rows: Vec<Vec<CycloElement>> = nodes
        .iter()
        .map(|a| {
            let mut power = CycloElement::one(n);
            (0..n)
                .map(|_| {
                    let entry = power.clone();
                    power = &power * a;
                    entry
                })
                .collect()
        })
        .collect();
    let vandermonde_ok = cyclo_matrix_det(n, &power_rows) == vandermonde_det(&nodes);
    checks.push(LemmaCheck {
        name: "vandermonde".to_string(),
        status: if vandermonde_ok { CheckStatus::Pass } else { CheckStatus::Fail },
        details: "power-matrix determinant vs difference product on the root nodes".to_string(),
    });

    let all_pass = checks.iter().all(|c| c.status != CheckStatus::Fail);
    LemmaSuiteReport {
        n,
        checks,
        all_pass,
        elapsed_ms: started.elapsed().as_millis() as u64,
        workers,
    }
}

fn is_prime(n: usize) -> bool {
    if n < 2 {
        return false;
    }
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            return false;
        }
        p += 1;
    }
    true
}

/// Count `(total, nonzero)` over every square minor of the unnormalized
/// DFT matrix, including the trivial empty minor (determinant 1 by
/// convention), so the total is `C(2n, n)`.
pub fn fourier_minor_census(n: usize, workers: usize) -> (u64, u64) {
    let f = crate::grouprep::fourier_matrix_exact(n);
    let mut total = 1u64; // the empty minor
    let mut nonzero = 1u64;
    for size in 1..=n {
        let count = binomial(n as u64, size as u64);
        let row_sets: Vec<SubsetIndex> = enumerate_subsets(n, size).collect();
        let pairs = count * count;
        let results = run_chunked(pairs, DEFAULT_CHUNK_SIZE, workers, |start, end| {
            let mut out = Vec::with_capacity((end - start) as usize);
            for rank in start..end {
                let rows = &row_sets[(rank / count) as usize];
                let cols = &row_sets[(rank % count) as usize];
                let minor: Vec<Vec<CycloElement>> = rows
                    .indices()
                    .iter()
                    .map(|&r| {
                        cols.indices()
                            .iter()
                            .map(|&c| f[r][c].clone())
                            .collect()
                    })
                    .collect();
                out.push(!cyclo_matrix_det(n, &minor).is_zero());
            }
            out
        });
        total += pairs;
        nonzero += results.into_iter().filter(|&ok| ok).count() as u64;
    }
    (total, nonzero)
}
