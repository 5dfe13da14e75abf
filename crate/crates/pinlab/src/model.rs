//! Model parameters and built-in model constructors.
//!
//! A PIN model is specified by `(alphabet, rho, P, phi)`: the state alphabet
//! size, the interaction probability, the row-stochastic mutation matrix, and
//! the interaction tensor mapping a neighbor state `l` to a row-stochastic
//! matrix `phi(l)`. [`PinParams::new`] validates the quadruple once; the
//! result is immutable and safe to share across simulation workers.

use rand::{Rng, RngExt};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

/// Dense row-major matrix, sized `k x k` for alphabet size `k`.
pub type Matrix = Vec<Vec<f64>>;

/// Row sums may deviate from 1 by at most this much before validation fails.
pub const ROW_SUM_TOLERANCE: f64 = 1e-9;

/// Tolerance enforced on stored (normalized) rows and probability vectors.
pub const STORED_SUM_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("alphabet size must be at least 2, got {0}")]
    AlphabetTooSmall(usize),
    #[error("rho must lie in [0, 1], got {0}")]
    RhoOutOfRange(f64),
    #[error("{what} must be a {k}x{k} matrix")]
    BadShape { what: String, k: usize },
    #[error("{what} row {row} has negative entry {value} at column {col}")]
    NegativeEntry {
        what: String,
        row: usize,
        col: usize,
        value: f64,
    },
    #[error("{what} row {row} sums to {sum}, more than {tol} away from 1")]
    RowSum {
        what: String,
        row: usize,
        sum: f64,
        tol: f64,
    },
    #[error("built-in constraint violated: {0}")]
    Constraint(String),
    #[error("probability vector invalid: {0}")]
    BadProbabilityVector(String),
    #[error("model spec invalid: {0}")]
    BadSpec(String),
}

fn validate_matrix(what: &str, m: &Matrix, k: usize) -> Result<(), ModelError> {
    if m.len() != k || m.iter().any(|row| row.len() != k) {
        return Err(ModelError::BadShape {
            what: what.to_string(),
            k,
        });
    }
    for (i, row) in m.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            if !(v >= 0.0) {
                return Err(ModelError::NegativeEntry {
                    what: what.to_string(),
                    row: i,
                    col: j,
                    value: v,
                });
            }
        }
        let sum: f64 = row.iter().sum();
        if (sum - 1.0).abs() > ROW_SUM_TOLERANCE {
            return Err(ModelError::RowSum {
                what: what.to_string(),
                row: i,
                sum,
                tol: ROW_SUM_TOLERANCE,
            });
        }
    }
    Ok(())
}

fn normalize_rows(m: &mut Matrix) {
    for row in m.iter_mut() {
        let sum: f64 = row.iter().sum();
        for v in row.iter_mut() {
            *v /= sum;
        }
    }
}

fn cumulative_rows(m: &Matrix) -> Vec<Vec<f64>> {
    m.iter()
        .map(|row| {
            let mut acc = 0.0;
            let mut out: Vec<f64> = row
                .iter()
                .map(|&v| {
                    acc += v;
                    acc
                })
                .collect();
            // Guard the last bin against rounding so inverse-CDF sampling
            // always terminates inside the row.
            if let Some(last) = out.last_mut() {
                *last = 1.0;
            }
            out
        })
        .collect()
}

/// Validated parameters of a PIN model.
#[derive(Debug, Clone, PartialEq)]
pub struct PinParams {
    alphabet: usize,
    rho: f64,
    p: Matrix,
    phi: Vec<Matrix>,
    p_cdf: Vec<Vec<f64>>,
    phi_cdf: Vec<Vec<Vec<f64>>>,
}

impl PinParams {
    /// Validates and normalizes `(alphabet, rho, P, phi)`.
    ///
    /// Rows whose sums deviate from 1 by at most [`ROW_SUM_TOLERANCE`] are
    /// renormalized; larger deviations, negative entries, and `rho` outside
    /// `[0, 1]` are rejected.
    pub fn new(alphabet: usize, rho: f64, p: Matrix, phi: Vec<Matrix>) -> Result<Self, ModelError> {
        if alphabet < 2 {
            return Err(ModelError::AlphabetTooSmall(alphabet));
        }
        if !(0.0..=1.0).contains(&rho) {
            return Err(ModelError::RhoOutOfRange(rho));
        }
        validate_matrix("P", &p, alphabet)?;
        if phi.len() != alphabet {
            return Err(ModelError::BadSpec(format!(
                "phi must provide one matrix per state, got {} for alphabet {}",
                phi.len(),
                alphabet
            )));
        }
        for (l, m) in phi.iter().enumerate() {
            validate_matrix(&format!("phi({l})"), m, alphabet)?;
        }
        let mut p = p;
        let mut phi = phi;
        normalize_rows(&mut p);
        for m in phi.iter_mut() {
            normalize_rows(m);
        }
        let p_cdf = cumulative_rows(&p);
        let phi_cdf = phi.iter().map(cumulative_rows).collect();
        Ok(Self {
            alphabet,
            rho,
            p,
            phi,
            p_cdf,
            phi_cdf,
        })
    }

    /// SIS epidemic model on the binary alphabet `{0: susceptible, 1: infected}`.
    ///
    /// `b` is the contagion probability, `c` the recovery probability, and
    /// `alpha` the spontaneous infection probability; `rho` fixes the split
    /// between interaction and mutation ticks. Requires `b <= rho` and
    /// `c + alpha <= 1 - rho` so that the kernels are row-stochastic.
    pub fn sis(b: f64, c: f64, alpha: f64, rho: f64) -> Result<Self, ModelError> {
        if b < 0.0 || c < 0.0 || alpha < 0.0 {
            return Err(ModelError::Constraint(format!(
                "rates must be nonnegative, got b={b}, c={c}, alpha={alpha}"
            )));
        }
        if !(0.0..=1.0).contains(&rho) {
            return Err(ModelError::RhoOutOfRange(rho));
        }
        if b > 0.0 && rho == 0.0 {
            return Err(ModelError::Constraint(format!(
                "b = {b} > 0 requires rho > 0"
            )));
        }
        if b > rho {
            return Err(ModelError::Constraint(format!("need b <= rho: {b} > {rho}")));
        }
        if c + alpha > 1.0 - rho + 1e-15 {
            return Err(ModelError::Constraint(format!(
                "need c + alpha <= 1 - rho: {} > {}",
                c + alpha,
                1.0 - rho
            )));
        }
        let contagion = if rho > 0.0 { b / rho } else { 0.0 };
        let (p01, p10) = if rho < 1.0 {
            (alpha / (1.0 - rho), c / (1.0 - rho))
        } else {
            (0.0, 0.0)
        };
        let p = vec![vec![1.0 - p01, p01], vec![p10, 1.0 - p10]];
        let phi = vec![
            identity(2),
            vec![vec![1.0 - contagion, contagion], vec![0.0, 1.0]],
        ];
        Self::new(2, rho, p, phi)
    }

    /// SIRS epidemic model on `{0: susceptible, 1: infected, 2: recovered}`.
    ///
    /// `b` is the contagion probability and `c`, `d`, `alpha` the spontaneous
    /// recovery, return-to-susceptibility, and infection probabilities. The
    /// constructor only enforces row-stochasticity; the endemic regime
    /// `b > c > 0`, `d > 0` is checked by the certificate builder.
    pub fn sirs(b: f64, c: f64, d: f64, alpha: f64, rho: f64) -> Result<Self, ModelError> {
        if b < 0.0 || c < 0.0 || d < 0.0 || alpha < 0.0 {
            return Err(ModelError::Constraint(format!(
                "rates must be nonnegative, got b={b}, c={c}, d={d}, alpha={alpha}"
            )));
        }
        if !(0.0..=1.0).contains(&rho) {
            return Err(ModelError::RhoOutOfRange(rho));
        }
        if b > 0.0 && rho == 0.0 {
            return Err(ModelError::Constraint(format!(
                "b = {b} > 0 requires rho > 0"
            )));
        }
        if b > rho {
            return Err(ModelError::Constraint(format!("need b <= rho: {b} > {rho}")));
        }
        let mutation = 1.0 - rho;
        for (name, v) in [("alpha", alpha), ("c", c), ("d", d)] {
            if v > mutation + 1e-15 {
                return Err(ModelError::Constraint(format!(
                    "need {name} <= 1 - rho: {v} > {mutation}"
                )));
            }
        }
        let contagion = if rho > 0.0 { b / rho } else { 0.0 };
        let (p01, p12, p20) = if rho < 1.0 {
            (alpha / mutation, c / mutation, d / mutation)
        } else {
            (0.0, 0.0, 0.0)
        };
        let p = vec![
            vec![1.0 - p01, p01, 0.0],
            vec![0.0, 1.0 - p12, p12],
            vec![p20, 0.0, 1.0 - p20],
        ];
        let mut phi1 = identity(3);
        phi1[0][0] = 1.0 - contagion;
        phi1[0][1] = contagion;
        let phi = vec![identity(3), phi1, identity(3)];
        Self::new(3, rho, p, phi)
    }

    /// Noisy voter model: interactions copy the neighbor's opinion, mutations
    /// flip it.
    ///
    /// `rho = 1` is accepted but degenerate (the limit drift vanishes
    /// identically and no binary certificate exists).
    pub fn voter(rho: f64) -> Result<Self, ModelError> {
        let p = vec![vec![0.0, 1.0], vec![1.0, 0.0]];
        let phi = vec![
            vec![vec![1.0, 0.0], vec![1.0, 0.0]],
            vec![vec![0.0, 1.0], vec![0.0, 1.0]],
        ];
        Self::new(2, rho, p, phi)
    }

    /// Anti-voter model: pure interaction (`rho = 1`), agents adopt the
    /// opinion opposite to the neighbor they meet.
    pub fn anti_voter() -> Result<Self, ModelError> {
        let p = identity(2);
        let phi = vec![
            vec![vec![0.0, 1.0], vec![0.0, 1.0]],
            vec![vec![1.0, 0.0], vec![1.0, 0.0]],
        ];
        Self::new(2, 1.0, p, phi)
    }

    /// Forgetful model: the interaction outcome depends only on the
    /// neighbor's state, `phi_ij(l) = R[l][j]`.
    pub fn forgetful(rho: f64, p: Matrix, r: Matrix) -> Result<Self, ModelError> {
        let k = p.len();
        if k < 2 {
            return Err(ModelError::AlphabetTooSmall(k));
        }
        validate_matrix("R", &r, k)?;
        let phi = (0..k)
            .map(|l| (0..k).map(|_| r[l].clone()).collect())
            .collect();
        Self::new(k, rho, p, phi)
    }

    pub fn alphabet(&self) -> usize {
        self.alphabet
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    /// Mutation transition matrix `P`.
    pub fn mutation(&self) -> &Matrix {
        &self.p
    }

    /// Interaction transition matrix `phi(l)` for neighbor state `l`.
    pub fn interaction(&self, l: usize) -> &Matrix {
        &self.phi[l]
    }

    pub(crate) fn mutation_cdf(&self, state: usize) -> &[f64] {
        &self.p_cdf[state]
    }

    pub(crate) fn interaction_cdf(&self, neighbor: usize, state: usize) -> &[f64] {
        &self.phi_cdf[neighbor][state]
    }

    /// Returns `R` when the interaction tensor has forgetful structure
    /// (`phi_ij(l)` independent of `i`), within `tol` per entry.
    pub fn forgetful_r(&self, tol: f64) -> Option<Matrix> {
        let k = self.alphabet;
        for phi_l in &self.phi {
            for i in 1..k {
                for j in 0..k {
                    if (phi_l[i][j] - phi_l[0][j]).abs() > tol {
                        return None;
                    }
                }
            }
        }
        Some(self.phi.iter().map(|phi_l| phi_l[0].clone()).collect())
    }

    /// Effective one-agent chain `S = (1 - rho) P + rho R` of a forgetful
    /// model, or `None` when the tensor is not forgetful.
    pub fn forgetful_s(&self, tol: f64) -> Option<Matrix> {
        let r = self.forgetful_r(tol)?;
        let k = self.alphabet;
        Some(
            (0..k)
                .map(|i| {
                    (0..k)
                        .map(|j| (1.0 - self.rho) * self.p[i][j] + self.rho * r[i][j])
                        .collect()
                })
                .collect(),
        )
    }
}

/// Best-response interaction matrix for a symmetric two-player game.
///
/// `payoff[i][j]` is the payoff of playing `i` against an opponent playing
/// `j`; row `l` of the result spreads probability uniformly over the actions
/// maximizing the payoff against `l`.
pub fn best_response_matrix(payoff: &Matrix) -> Result<Matrix, ModelError> {
    let k = payoff.len();
    if k < 2 || payoff.iter().any(|row| row.len() != k) {
        return Err(ModelError::BadShape {
            what: "payoff".to_string(),
            k,
        });
    }
    let mut r = vec![vec![0.0; k]; k];
    for l in 0..k {
        let best = (0..k).map(|a| payoff[a][l]).fold(f64::NEG_INFINITY, f64::max);
        let winners: Vec<usize> = (0..k).filter(|&a| payoff[a][l] == best).collect();
        for &a in &winners {
            r[l][a] = 1.0 / winners.len() as f64;
        }
    }
    Ok(r)
}

fn identity(k: usize) -> Matrix {
    (0..k)
        .map(|i| (0..k).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect()
}

/// Empirical frequency vector of states over the population.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TypeVector(pub Vec<f64>);

impl TypeVector {
    /// Checks simplex membership: nonnegative entries summing to 1 within
    /// [`STORED_SUM_TOLERANCE`].
    pub fn new(theta: Vec<f64>) -> Result<Self, ModelError> {
        if theta.iter().any(|&v| v < 0.0) {
            return Err(ModelError::BadProbabilityVector(format!(
                "negative entry in {theta:?}"
            )));
        }
        let sum: f64 = theta.iter().sum();
        if (sum - 1.0).abs() > STORED_SUM_TOLERANCE {
            return Err(ModelError::BadProbabilityVector(format!(
                "entries sum to {sum}"
            )));
        }
        Ok(Self(theta))
    }

    /// Type vector of a population with the given per-state counts.
    pub fn from_counts(counts: &[u64]) -> Self {
        let n: u64 = counts.iter().sum();
        Self(counts.iter().map(|&c| c as f64 / n as f64).collect())
    }

    /// Uniform (Dirichlet(1, ..., 1)) sample from the simplex interior.
    pub fn random<R: Rng + ?Sized>(k: usize, rng: &mut R) -> Self {
        let raw: Vec<f64> = (0..k)
            .map(|_| -(1.0 - rng.random::<f64>()).ln())
            .collect();
        let sum: f64 = raw.iter().sum();
        Self(raw.into_iter().map(|v| v / sum).collect())
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl std::ops::Index<usize> for TypeVector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

/// Empirical frequency matrix of state pairs across directed links.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryMatrix {
    k: usize,
    xi: Vec<f64>,
}

impl BoundaryMatrix {
    /// Checks that the `k x k` entries are nonnegative and sum to 1 within
    /// [`STORED_SUM_TOLERANCE`].
    pub fn new(k: usize, xi: Vec<f64>) -> Result<Self, ModelError> {
        if xi.len() != k * k {
            return Err(ModelError::BadProbabilityVector(format!(
                "expected {} entries, got {}",
                k * k,
                xi.len()
            )));
        }
        if xi.iter().any(|&v| v < 0.0) {
            return Err(ModelError::BadProbabilityVector(
                "negative boundary entry".to_string(),
            ));
        }
        let sum: f64 = xi.iter().sum();
        if (sum - 1.0).abs() > STORED_SUM_TOLERANCE {
            return Err(ModelError::BadProbabilityVector(format!(
                "boundary entries sum to {sum}"
            )));
        }
        Ok(Self { k, xi })
    }

    /// Product boundary `theta theta^T`.
    pub fn product(theta: &TypeVector) -> Self {
        let k = theta.len();
        let mut xi = vec![0.0; k * k];
        for i in 0..k {
            for j in 0..k {
                xi[i * k + j] = theta[i] * theta[j];
            }
        }
        Self { k, xi }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.xi[i * self.k + j]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.xi
    }

    /// Maximum absolute entrywise difference.
    pub fn linf_distance(&self, other: &Self) -> f64 {
        self.xi
            .iter()
            .zip(&other.xi)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Entrywise 1-norm distance.
    pub fn l1_distance(&self, other: &Self) -> f64 {
        self.xi
            .iter()
            .zip(&other.xi)
            .map(|(a, b)| (a - b).abs())
            .sum()
    }
}

/// Serializable model description, either a generic `(alphabet, rho, P, phi)`
/// quadruple or one of the built-in shorthands.
///
/// JSON forms: `{"alphabet": k, "rho": r, "P": [[..]], "phi": {"0": [[..]], ..}}`,
/// `{"sis": {"b":.., "c":.., "alpha":.., "rho":..}}`, `{"sirs": {..}}`,
/// `{"voter": {"rho":..}}`, `{"antivoter": {}}`,
/// `{"forgetful": {"rho":.., "P": [[..]], "R": [[..]]}}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ModelSpec {
    Sis {
        sis: SisSpec,
    },
    Sirs {
        sirs: SirsSpec,
    },
    Voter {
        voter: VoterSpec,
    },
    Antivoter {
        antivoter: EmptySpec,
    },
    Forgetful {
        forgetful: ForgetfulSpec,
    },
    Generic {
        alphabet: usize,
        rho: f64,
        #[serde(rename = "P")]
        p: Matrix,
        phi: BTreeMap<String, Matrix>,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SisSpec {
    pub b: f64,
    pub c: f64,
    pub alpha: f64,
    pub rho: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SirsSpec {
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub alpha: f64,
    pub rho: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VoterSpec {
    pub rho: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EmptySpec {}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ForgetfulSpec {
    pub rho: f64,
    #[serde(rename = "P")]
    pub p: Matrix,
    #[serde(rename = "R")]
    pub r: Matrix,
}

impl ModelSpec {
    pub fn build(&self) -> Result<PinParams, ModelError> {
        match self {
            ModelSpec::Sis { sis } => PinParams::sis(sis.b, sis.c, sis.alpha, sis.rho),
            ModelSpec::Sirs { sirs } => {
                PinParams::sirs(sirs.b, sirs.c, sirs.d, sirs.alpha, sirs.rho)
            }
            ModelSpec::Voter { voter } => PinParams::voter(voter.rho),
            ModelSpec::Antivoter { .. } => PinParams::anti_voter(),
            ModelSpec::Forgetful { forgetful } => {
                PinParams::forgetful(forgetful.rho, forgetful.p.clone(), forgetful.r.clone())
            }
            ModelSpec::Generic {
                alphabet,
                rho,
                p,
                phi,
            } => {
                let mut tensor = Vec::with_capacity(*alphabet);
                for l in 0..*alphabet {
                    let m = phi.get(&l.to_string()).ok_or_else(|| {
                        ModelSpec::missing_phi(l)
                    })?;
                    tensor.push(m.clone());
                }
                PinParams::new(*alphabet, *rho, p.clone(), tensor)
            }
        }
    }

    fn missing_phi(l: usize) -> ModelError {
        ModelError::BadSpec(format!("phi is missing the matrix for state {l}"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn accepts_identity_mutation() {
        let phi = vec![identity(2); 2];
        let params = PinParams::new(2, 0.5, identity(2), phi).unwrap();
        assert_eq!(params.alphabet(), 2);
    }

    #[test]
    fn rejects_bad_row_sum() {
        let p = vec![vec![0.5, 0.4], vec![0.2, 0.8]];
        let phi = vec![identity(2); 2];
        let err = PinParams::new(2, 0.5, p, phi).unwrap_err();
        assert!(matches!(err, ModelError::RowSum { .. }));
    }

    #[test]
    fn rejects_negative_interaction_entry() {
        let mut phi = vec![identity(2); 2];
        phi[1][0][0] = 1.01;
        phi[1][0][1] = -0.01;
        let err = PinParams::new(2, 0.5, identity(2), phi).unwrap_err();
        assert!(matches!(err, ModelError::NegativeEntry { .. }));
    }

    #[test]
    fn rejects_rho_out_of_range() {
        let phi = vec![identity(2); 2];
        assert!(PinParams::new(2, 1.5, identity(2), phi).is_err());
    }

    #[test]
    fn normalizes_rows_within_tolerance() {
        let p = vec![vec![0.5, 0.5 + 5e-10], vec![0.2, 0.8]];
        let params = PinParams::new(2, 0.0, p, vec![identity(2); 2]).unwrap();
        let sum: f64 = params.mutation()[0].iter().sum();
        assert!((sum - 1.0).abs() <= STORED_SUM_TOLERANCE);
    }

    #[test]
    fn sis_example_rates() {
        let params = PinParams::sis(0.6, 0.3, 0.01, 0.6).unwrap();
        assert_abs_diff_eq!(params.interaction(1)[0][1], 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(params.mutation()[1][0], 0.75, epsilon = 1e-15);
        assert_abs_diff_eq!(params.mutation()[0][1], 0.025, epsilon = 1e-15);
    }

    #[test]
    fn sis_round_trip_exact() {
        let (b, c, alpha, rho) = (0.35, 0.2, 0.05, 0.5);
        let params = PinParams::sis(b, c, alpha, rho).unwrap();
        assert_eq!(rho * params.interaction(1)[0][1], b);
        assert_eq!((1.0 - rho) * params.mutation()[1][0], c);
        assert_eq!((1.0 - rho) * params.mutation()[0][1], alpha);
    }

    #[test]
    fn sis_alpha_zero_has_no_spontaneous_infection() {
        let params = PinParams::sis(0.6, 0.3, 0.0, 0.6).unwrap();
        assert_eq!(params.mutation()[0][1], 0.0);
    }

    #[test]
    fn sis_rejects_infeasible_rates() {
        assert!(PinParams::sis(0.7, 0.3, 0.01, 0.6).is_err());
        assert!(PinParams::sis(0.6, 0.5, 0.0, 0.6).is_err());
        assert!(PinParams::sis(-0.1, 0.3, 0.0, 0.6).is_err());
    }

    #[test]
    fn sirs_round_trip_exact() {
        let (b, c, d, alpha, rho) = (0.6, 0.2, 0.1, 0.01, 0.6);
        let params = PinParams::sirs(b, c, d, alpha, rho).unwrap();
        assert_eq!(rho * params.interaction(1)[0][1], b);
        assert_eq!((1.0 - rho) * params.mutation()[1][2], c);
        assert_eq!((1.0 - rho) * params.mutation()[2][0], d);
        assert_eq!((1.0 - rho) * params.mutation()[0][1], alpha);
    }

    #[test]
    fn voter_and_anti_voter_tensors() {
        let voter = PinParams::voter(0.5).unwrap();
        assert_eq!(voter.interaction(1)[0][1], 1.0);
        assert_eq!(voter.interaction(0)[1][0], 1.0);
        assert_eq!(voter.mutation()[0][1], 1.0);

        let anti = PinParams::anti_voter().unwrap();
        assert_eq!(anti.rho(), 1.0);
        assert_eq!(anti.interaction(0)[0][1], 1.0);
        assert_eq!(anti.interaction(1)[1][0], 1.0);
    }

    #[test]
    fn forgetful_structure_detected() {
        let p = vec![vec![0.9, 0.1], vec![0.2, 0.8]];
        let r = vec![vec![0.9, 0.1], vec![0.2, 0.8]];
        let params = PinParams::forgetful(0.3, p.clone(), r.clone()).unwrap();
        let recovered = params.forgetful_r(1e-12).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert_abs_diff_eq!(recovered[i][j], r[i][j], epsilon = 1e-15);
            }
        }
        // P = R makes S independent of rho.
        let s = params.forgetful_s(1e-12).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert_abs_diff_eq!(s[i][j], p[i][j], epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn sis_is_not_forgetful() {
        let params = PinParams::sis(0.6, 0.3, 0.01, 0.6).unwrap();
        assert!(params.forgetful_r(1e-12).is_none());
    }

    #[test]
    fn best_response_uniform_over_ties() {
        // Against action 0 both actions pay 1; against action 1 only action 0 pays.
        let payoff = vec![vec![1.0, 2.0], vec![1.0, 0.0]];
        let r = best_response_matrix(&payoff).unwrap();
        assert_eq!(r[0], vec![0.5, 0.5]);
        assert_eq!(r[1], vec![1.0, 0.0]);
    }

    #[test]
    fn type_vector_checks_simplex() {
        assert!(TypeVector::new(vec![0.5, 0.5]).is_ok());
        assert!(TypeVector::new(vec![0.5, 0.6]).is_err());
        assert!(TypeVector::new(vec![-0.1, 1.1]).is_err());
        let t = TypeVector::from_counts(&[3, 1]);
        assert_eq!(t.as_slice(), &[0.75, 0.25]);
    }

    #[test]
    fn boundary_product_sums_to_one() {
        let theta = TypeVector::new(vec![0.25, 0.75]).unwrap();
        let xi = BoundaryMatrix::product(&theta);
        let sum: f64 = xi.as_slice().iter().sum();
        assert_abs_diff_eq!(sum, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn model_spec_shorthands_parse() {
        let sis: ModelSpec =
            serde_json::from_str(r#"{"sis": {"b":0.6,"c":0.3,"alpha":0.01,"rho":0.6}}"#).unwrap();
        assert_eq!(sis.build().unwrap().alphabet(), 2);

        let voter: ModelSpec = serde_json::from_str(r#"{"voter": {"rho":0.5}}"#).unwrap();
        assert_eq!(voter.build().unwrap().rho(), 0.5);

        let anti: ModelSpec = serde_json::from_str(r#"{"antivoter": {}}"#).unwrap();
        assert_eq!(anti.build().unwrap().rho(), 1.0);

        let generic: ModelSpec = serde_json::from_str(
            r#"{"alphabet": 2, "rho": 0.0,
                "P": [[0.9,0.1],[0.2,0.8]],
                "phi": {"0": [[1,0],[0,1]], "1": [[1,0],[0,1]]}}"#,
        )
        .unwrap();
        assert_eq!(generic.build().unwrap().alphabet(), 2);

        let missing: ModelSpec = serde_json::from_str(
            r#"{"alphabet": 2, "rho": 0.0,
                "P": [[1,0],[0,1]], "phi": {"0": [[1,0],[0,1]]}}"#,
        )
        .unwrap();
        assert!(missing.build().is_err());
    }

    #[test]
    fn builtins_validate() {
        for params in [
            PinParams::sis(0.6, 0.3, 0.01, 0.6).unwrap(),
            PinParams::sirs(0.6, 0.2, 0.1, 0.01, 0.6).unwrap(),
            PinParams::voter(0.5).unwrap(),
            PinParams::anti_voter().unwrap(),
        ] {
            for row in params.mutation() {
                let sum: f64 = row.iter().sum();
                assert!((sum - 1.0).abs() <= STORED_SUM_TOLERANCE);
            }
            for l in 0..params.alphabet() {
                for row in params.interaction(l) {
                    let sum: f64 = row.iter().sum();
                    assert!((sum - 1.0).abs() <= STORED_SUM_TOLERANCE);
                }
            }
        }
    }
}
