//! Dealerless setup.
//!
//! Participant `i` acts as dealer for the secret vector that is zero
//! everywhere except `s_i` at its own position, and sends `h_{i,j}` (the
//! share vector of that sub-dealing for `j`) to every `j`, itself included.
//! Each participant's final share is the sum of what it received; the sum of
//! the sub-polynomials is a dealing of `(s_1, ..., s_n)`.

use rand::RngCore;
use thiserror::Error;

use crate::field::FieldElement;
use crate::poly::Poly;
use crate::scheme::{deal_with_secrets, Dealing, ParticipantBundle, PointLayout, SchemeError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SetupError {
    #[error(transparent)]
    Scheme(#[from] SchemeError),
    #[error("setup incomplete: no contribution from participant {0}")]
    Incomplete(usize),
    #[error("participant {0} contributed twice")]
    Duplicate(usize),
    #[error("contribution from {from} has {got} share vectors, expected {expected}")]
    Malformed { from: usize, expected: usize, got: usize },
    #[error("dealings have different parameters or layouts")]
    Mismatch,
}

/// Everything participant `from` produces in the setup round.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetupContribution {
    pub from: usize,
    /// `shares_out[j - 1]` is `h_{from, j}`, of length `n - k`.
    pub shares_out: Vec<Vec<FieldElement>>,
    pub own_secret_kept: FieldElement,
    /// The sub-dealing polynomial; kept for test oracles only.
    pub polynomial: Option<Poly>,
}

impl SetupContribution {
    pub fn share_for(&self, recipient: usize) -> &[FieldElement] {
        &self.shares_out[recipient - 1]
    }
}

/// Participant `i` deals its own sub-scheme.
pub fn setup_deal_own<R: RngCore + ?Sized>(
    layout: &PointLayout,
    i: usize,
    secret: FieldElement,
    rng: &mut R,
) -> Result<SetupContribution, SetupError> {
    let params = layout.params();
    params.check_participant(i)?;
    let secrets: Vec<FieldElement> = params
        .participants()
        .map(|m| if m == i { secret } else { params.spec().zero() })
        .collect();
    let dealing = deal_with_secrets(layout, &secrets, rng)?;
    Ok(SetupContribution {
        from: i,
        shares_out: dealing.bundles.into_iter().map(|b| b.share).collect(),
        own_secret_kept: secret,
        polynomial: dealing.polynomial,
    })
}

/// Participant `j`'s final bundle: its own secret and the sum of the share
/// vectors it received, one from every participant.
pub fn aggregate_for(
    layout: &PointLayout,
    j: usize,
    own_secret: FieldElement,
    received: &[(usize, Vec<FieldElement>)],
) -> Result<ParticipantBundle, SetupError> {
    let params = layout.params();
    params.check_participant(j)?;
    let mut seen = vec![false; params.n()];
    let mut share = vec![params.spec().zero(); params.share_len()];
    for (from, values) in received {
        params.check_participant(*from)?;
        if std::mem::replace(&mut seen[from - 1], true) {
            return Err(SetupError::Duplicate(*from));
        }
        if values.len() != share.len() {
            return Err(SchemeError::ShareLength {
                participant: j,
                expected: share.len(),
                got: values.len(),
            }
            .into());
        }
        for (acc, &v) in share.iter_mut().zip(values) {
            *acc += v;
        }
    }
    if let Some(missing) = seen.iter().position(|&s| !s) {
        return Err(SetupError::Incomplete(missing + 1));
    }
    let bundle = ParticipantBundle {
        participant: j,
        secret: Some(own_secret),
        share,
    };
    bundle.validate(layout)?;
    Ok(bundle)
}

/// Central fold over all `n` contributions. The polynomial is the sum of the
/// sub-polynomials when every contribution carries one.
pub fn setup_aggregate(layout: &PointLayout, contributions: &[SetupContribution]) -> Result<Dealing, SetupError> {
    let params = layout.params();
    let mut by_sender: Vec<Option<&SetupContribution>> = vec![None; params.n()];
    for c in contributions {
        params.check_participant(c.from)?;
        if c.shares_out.len() != params.n() {
            return Err(SetupError::Malformed {
                from: c.from,
                expected: params.n(),
                got: c.shares_out.len(),
            });
        }
        if by_sender[c.from - 1].replace(c).is_some() {
            return Err(SetupError::Duplicate(c.from));
        }
    }
    let ordered = by_sender
        .iter()
        .enumerate()
        .map(|(m, c)| c.ok_or(SetupError::Incomplete(m + 1)))
        .collect::<Result<Vec<_>, _>>()?;
    let bundles = params
        .participants()
        .map(|j| {
            let received: Vec<(usize, Vec<FieldElement>)> =
                ordered.iter().map(|c| (c.from, c.share_for(j).to_vec())).collect();
            aggregate_for(layout, j, ordered[j - 1].own_secret_kept, &received)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let polynomial = ordered
        .iter()
        .map(|c| c.polynomial.clone())
        .collect::<Option<Vec<_>>>()
        .map(|polys| {
            polys
                .into_iter()
                .reduce(|a, b| a.checked_add(&b).expect("sub-dealings share a field"))
                .expect("n >= 3 contributions")
        });
    Ok(Dealing {
        layout: layout.clone(),
        bundles,
        polynomial,
    })
}

/// Componentwise sum of two dealings over the same layout.
pub fn homomorphic_add(d1: &Dealing, d2: &Dealing) -> Result<Dealing, SetupError> {
    if d1.layout != d2.layout || d1.bundles.len() != d2.bundles.len() {
        return Err(SetupError::Mismatch);
    }
    let bundles = d1
        .bundles
        .iter()
        .zip(&d2.bundles)
        .map(|(a, b)| {
            if a.participant != b.participant || a.share.len() != b.share.len() {
                return Err(SetupError::Mismatch);
            }
            Ok(ParticipantBundle {
                participant: a.participant,
                secret: a.secret.zip(b.secret).map(|(x, y)| x + y),
                share: a.share.iter().zip(&b.share).map(|(&x, &y)| x + y).collect(),
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let polynomial = match (&d1.polynomial, &d2.polynomial) {
        (Some(a), Some(b)) => Some(a.checked_add(b).map_err(|_| SetupError::Mismatch)?),
        _ => None,
    };
    Ok(Dealing {
        layout: d1.layout.clone(),
        bundles,
        polynomial,
    })
}
