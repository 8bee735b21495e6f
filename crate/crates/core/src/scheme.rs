//! The k-out-of-n gruppen scheme: parameters, the public point layout,
//! dealer-based dealing and reconstruction by any `k` participants.
//!
//! Participant `i` (1-based) owns the secret `r(x[i][0])` and holds the share
//! `r(x[i][1]), ..., r(x[i][n-k])` of a polynomial `r` with degree below
//! `k(n-k+1)`. Any `k` participants together know `r` at exactly
//! `k(n-k+1)` points and can interpolate it.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rand::RngCore;
use thiserror::Error;

use crate::field::{FieldElement, FieldError, FieldSpec};
use crate::poly::{self, Poly, PolyError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchemeError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("threshold must satisfy 2 <= k <= n - 1, got n = {n}, k = {k}")]
    InvalidThreshold { n: usize, k: usize },
    #[error(
        "field {spec} is too small for n = {n}, k = {k}: it needs more than n(n-k+1) = {bound} elements"
    )]
    FieldTooSmall {
        spec: FieldSpec,
        n: usize,
        k: usize,
        bound: usize,
    },
    #[error("participant {0} does not exist")]
    UnknownParticipant(usize),
    #[error("participant {0} appears more than once")]
    DuplicateParticipant(usize),
    #[error("expected {expected} secrets, got {got}")]
    SecretCount { expected: usize, got: usize },
    #[error("participant {participant} holds {got} share elements, expected {expected}")]
    ShareLength {
        participant: usize,
        expected: usize,
        got: usize,
    },
    #[error("participant {0} has no secret in its bundle")]
    MissingSecret(usize),
    #[error("need {needed} participants to reconstruct, got {got}")]
    InsufficientQuorum { needed: usize, got: usize },
    #[error("bundles disagree with the interpolated polynomial")]
    Inconsistent,
    #[error("parameters or layout differ between inputs")]
    ParamsMismatch,
    #[error("unknown layout id {0:?}")]
    UnknownLayout(String),
}

/// Scheme parameters: `n` participants, threshold `k`, field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Params {
    n: usize,
    k: usize,
    spec: FieldSpec,
}

impl Params {
    pub fn new(n: usize, k: usize, spec: FieldSpec) -> Result<Self, SchemeError> {
        if k < 2 || k + 1 > n {
            return Err(SchemeError::InvalidThreshold { n, k });
        }
        let bound = n * (n - k + 1);
        if !spec.order_exceeds(bound as u128) {
            return Err(SchemeError::FieldTooSmall { spec, n, k, bound });
        }
        Ok(Params { n, k, spec })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    /// Points per participant: one secret plus `n - k` share points.
    pub fn slots(&self) -> usize {
        self.n - self.k + 1
    }

    /// Share length in field elements, `n - k`.
    pub fn share_len(&self) -> usize {
        self.n - self.k
    }

    /// `D = k(n-k+1)`: the dealing polynomial has degree `< D`.
    pub fn degree_bound(&self) -> usize {
        self.k * self.slots()
    }

    pub fn point_count(&self) -> usize {
        self.n * self.slots()
    }

    pub fn participants(&self) -> impl Iterator<Item = usize> {
        1..=self.n
    }

    pub fn check_participant(&self, i: usize) -> Result<(), SchemeError> {
        if (1..=self.n).contains(&i) {
            Ok(())
        } else {
            Err(SchemeError::UnknownParticipant(i))
        }
    }
}

/// How the `n(n-k+1)` public evaluation points are assigned.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum LayoutId {
    /// `x[i][j] = (i-1)(n-k+1) + j`.
    #[default]
    ParticipantMajor,
    /// Secrets at `0..n`, then each participant's share points in turn:
    /// `x[i][0] = i-1`, `x[i][j] = n + (i-1)(n-k) + (j-1)`.
    SecretsFirst,
}

impl fmt::Display for LayoutId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LayoutId::ParticipantMajor => "participant-major",
            LayoutId::SecretsFirst => "secrets-first",
        })
    }
}

impl FromStr for LayoutId {
    type Err = SchemeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "participant-major" => Ok(LayoutId::ParticipantMajor),
            "secrets-first" => Ok(LayoutId::SecretsFirst),
            other => Err(SchemeError::UnknownLayout(other.to_string())),
        }
    }
}

/// The public points `x[i][j]`, a pure function of the parameters and layout id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointLayout {
    params: Params,
    id: LayoutId,
    // participant-major storage regardless of id
    points: Vec<FieldElement>,
}

impl PointLayout {
    pub fn new(params: Params, id: LayoutId) -> Self {
        let (n, slots, share_len) = (params.n, params.slots(), params.share_len());
        let mut points = Vec::with_capacity(params.point_count());
        for i in 1..=n {
            for j in 0..slots {
                let index = match id {
                    LayoutId::ParticipantMajor => (i - 1) * slots + j,
                    LayoutId::SecretsFirst if j == 0 => i - 1,
                    LayoutId::SecretsFirst => n + (i - 1) * share_len + (j - 1),
                };
                points.push(
                    params
                        .spec
                        .element(index as u128)
                        .expect("field order exceeds n(n-k+1)"),
                );
            }
        }
        PointLayout { params, id, points }
    }

    pub fn default_for(params: Params) -> Self {
        Self::new(params, LayoutId::default())
    }

    pub fn params(&self) -> Params {
        self.params
    }

    pub fn id(&self) -> LayoutId {
        self.id
    }

    pub fn spec(&self) -> FieldSpec {
        self.params.spec
    }

    /// `x[i][j]` for participant `i` in `1..=n` and slot `j` in `0..=n-k`.
    ///
    /// # Panics
    /// When `i` or `j` is out of range.
    pub fn point(&self, i: usize, j: usize) -> FieldElement {
        self.participant_points(i)[j]
    }

    pub fn secret_point(&self, i: usize) -> FieldElement {
        self.point(i, 0)
    }

    /// All `n-k+1` points of participant `i`, secret point first.
    pub fn participant_points(&self, i: usize) -> &[FieldElement] {
        assert!((1..=self.params.n).contains(&i), "participant {i} out of range");
        let slots = self.params.slots();
        &self.points[(i - 1) * slots..i * slots]
    }

    pub fn all_points(&self) -> &[FieldElement] {
        &self.points
    }
}

/// What participant `i` keeps: the secret (absent if withheld or lost) and
/// exactly `n - k` share elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParticipantBundle {
    pub participant: usize,
    pub secret: Option<FieldElement>,
    pub share: Vec<FieldElement>,
}

impl ParticipantBundle {
    /// Secret followed by shares, i.e. the values at the participant's points.
    pub fn values(&self) -> Result<Vec<FieldElement>, SchemeError> {
        let secret = self
            .secret
            .ok_or(SchemeError::MissingSecret(self.participant))?;
        let mut out = Vec::with_capacity(self.share.len() + 1);
        out.push(secret);
        out.extend_from_slice(&self.share);
        Ok(out)
    }

    /// Checks participant range, share length and field membership.
    pub fn validate(&self, layout: &PointLayout) -> Result<(), SchemeError> {
        let params = layout.params();
        params.check_participant(self.participant)?;
        if self.share.len() != params.share_len() {
            return Err(SchemeError::ShareLength {
                participant: self.participant,
                expected: params.share_len(),
                got: self.share.len(),
            });
        }
        for v in self.secret.iter().chain(&self.share) {
            if v.spec() != params.spec() {
                return Err(FieldError::Mismatch {
                    left: params.spec(),
                    right: v.spec(),
                }
                .into());
            }
        }
        Ok(())
    }
}

/// Output of a dealer: one bundle per participant, plus the dealing
/// polynomial when the dealer is local.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dealing {
    pub layout: PointLayout,
    pub bundles: Vec<ParticipantBundle>,
    /// Dealer-side only; never written to participant files.
    pub polynomial: Option<Poly>,
}

impl Dealing {
    pub fn params(&self) -> Params {
        self.layout.params()
    }

    /// Evaluate `poly` at every layout point.
    pub fn from_polynomial(layout: &PointLayout, poly: Poly) -> Self {
        let bundles = layout
            .params()
            .participants()
            .map(|i| {
                let values: Vec<FieldElement> = layout
                    .participant_points(i)
                    .iter()
                    .map(|&x| poly.eval(x).expect("layout and polynomial share a field"))
                    .collect();
                ParticipantBundle {
                    participant: i,
                    secret: Some(values[0]),
                    share: values[1..].to_vec(),
                }
            })
            .collect();
        Dealing {
            layout: layout.clone(),
            bundles,
            polynomial: Some(poly),
        }
    }

    pub fn bundle(&self, i: usize) -> &ParticipantBundle {
        &self.bundles[i - 1]
    }

    /// Secrets in participant order; `None` entries for withheld secrets.
    pub fn secrets(&self) -> Vec<Option<FieldElement>> {
        self.bundles.iter().map(|b| b.secret).collect()
    }

    /// Copy with the dealer polynomial dropped.
    pub fn without_polynomial(&self) -> Self {
        Dealing {
            polynomial: None,
            ..self.clone()
        }
    }
}

/// Deal a uniformly random polynomial; the secrets are its values at the
/// secret points.
pub fn deal_random<R: RngCore + ?Sized>(layout: &PointLayout, rng: &mut R) -> Dealing {
    let params = layout.params();
    let poly = Poly::random(params.spec(), params.degree_bound(), rng);
    Dealing::from_polynomial(layout, poly)
}

/// Deal prescribed secrets: `r` is uniform among the polynomials with
/// `r(x[i][0]) = secrets[i-1]`.
pub fn deal_with_secrets<R: RngCore + ?Sized>(
    layout: &PointLayout,
    secrets: &[FieldElement],
    rng: &mut R,
) -> Result<Dealing, SchemeError> {
    let params = layout.params();
    if secrets.len() != params.n() {
        return Err(SchemeError::SecretCount {
            expected: params.n(),
            got: secrets.len(),
        });
    }
    let constraints: Vec<(FieldElement, FieldElement)> = params
        .participants()
        .zip(secrets)
        .map(|(i, &s)| (layout.secret_point(i), s))
        .collect();
    let poly = poly::random_constrained(params.spec(), params.degree_bound(), &constraints, rng)?;
    Ok(Dealing::from_polynomial(layout, poly))
}

/// Result of pooling `k` bundles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reconstruction {
    pub polynomial: Poly,
    pub secrets: Vec<FieldElement>,
}

/// Interpolate `r` from the bundles of at least `k` distinct participants and
/// evaluate every secret. Extra bundles beyond the first `k` must agree with
/// the interpolated polynomial.
///
/// No authenticity is claimed: bundles from different dealings produce some
/// polynomial without error.
pub fn reconstruct_all(
    layout: &PointLayout,
    bundles: &[ParticipantBundle],
) -> Result<Reconstruction, SchemeError> {
    let params = layout.params();
    let mut seen = BTreeSet::new();
    for b in bundles {
        b.validate(layout)?;
        if !seen.insert(b.participant) {
            return Err(SchemeError::DuplicateParticipant(b.participant));
        }
    }
    if bundles.len() < params.k() {
        return Err(SchemeError::InsufficientQuorum {
            needed: params.k(),
            got: bundles.len(),
        });
    }
    let (quorum, extra) = bundles.split_at(params.k());
    let mut points = Vec::with_capacity(params.degree_bound());
    for b in quorum {
        let values = b.values()?;
        points.extend(
            layout
                .participant_points(b.participant)
                .iter()
                .copied()
                .zip(values),
        );
    }
    let polynomial = poly::interpolate(&points)?;
    for b in extra {
        for (&x, v) in layout.participant_points(b.participant).iter().zip(b.values()?) {
            if polynomial.eval(x)? != v {
                return Err(SchemeError::Inconsistent);
            }
        }
    }
    let secrets = params
        .participants()
        .map(|i| polynomial.eval(layout.secret_point(i)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Reconstruction {
        polynomial,
        secrets,
    })
}

/// Secrets given as `s`-bit strings; needs a binary field of degree `s`.
pub fn secrets_from_bits(params: Params, bits: &[Vec<bool>]) -> Result<Vec<FieldElement>, SchemeError> {
    bits.iter()
        .map(|b| params.spec().from_bits(b).map_err(SchemeError::from))
        .collect()
}
