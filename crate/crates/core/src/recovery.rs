//! Private recovery of one participant's secret (or full state) by a quorum
//! of `k` others.
//!
//! Three modes:
//!
//! * **naive**: member `i` sends `t_i = sum_j lambda_ij r(x_ij)`; the
//!   requester adds them up. Each `t_i` is a fresh linear combination of the
//!   quorum's data, so the requester learns more than its secret.
//! * **masked**: members first exchange pairwise random masks `r_ij`, then
//!   send `t_i + sum_j (r_ij - r_ji)`. The masks cancel in the sum and hide
//!   every individual term.
//! * **full-state**: masked recovery run for every point of the requester,
//!   returning the secret and the whole share vector.
//!
//! [`RecoveryGate`] is the bookkeeping policy for naive recoveries: a
//! requester is excluded from later sessions, and a naive recovery is refused
//! if it would let some coalition of at most `k - 1` participants pin down a
//! secret that is not its own.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use rand::RngCore;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::FieldElement;
use crate::linalg::Echelon;
use crate::poly::{self, vandermonde_row, LagrangeRow, PolyError};
use crate::scheme::{Dealing, LayoutId, ParticipantBundle, PointLayout, SchemeError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RecoveryError {
    #[error(transparent)]
    Scheme(#[from] SchemeError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("quorum must have exactly {expected} members, got {got}")]
    QuorumSize { expected: usize, got: usize },
    #[error("requester {0} cannot be part of its own quorum")]
    RequesterInQuorum(usize),
    #[error("participant {0} is not in the quorum")]
    NotInQuorum(usize),
    #[error("operation needs {expected} mode, session is {got}")]
    ModeMismatch {
        expected: RecoveryMode,
        got: RecoveryMode,
    },
    #[error("member {member} lacks mask {from}->{to} for slot {slot}")]
    MasksMissing {
        member: usize,
        from: usize,
        to: usize,
        slot: usize,
    },
    #[error("protocol incomplete: {0}")]
    Incomplete(String),
    #[error("expected {expected} per-member generators, got {got}")]
    RngCount { expected: usize, got: usize },
    #[error("not the three-party fixture: {0}")]
    WrongFixture(String),
    #[error("recovery refused: {0}")]
    Refused(GateRefusal),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RecoveryMode {
    Naive,
    Masked,
    FullState,
}

impl RecoveryMode {
    pub fn is_masked(self) -> bool {
        self != RecoveryMode::Naive
    }
}

impl fmt::Display for RecoveryMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RecoveryMode::Naive => "naive",
            RecoveryMode::Masked => "masked",
            RecoveryMode::FullState => "full-state",
        })
    }
}

impl FromStr for RecoveryMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "naive" => Ok(RecoveryMode::Naive),
            "masked" => Ok(RecoveryMode::Masked),
            "full-state" | "full_state" => Ok(RecoveryMode::FullState),
            other => Err(format!("unknown recovery mode {other:?}")),
        }
    }
}

/// Who recovers, from whom, and how. Precomputes the public Lagrange weights.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecoverySession {
    layout: PointLayout,
    requester: usize,
    quorum: Vec<usize>,
    mode: RecoveryMode,
    // One row per recovered slot of the requester; nodes ordered by quorum
    // member, then slot.
    rows: Vec<LagrangeRow>,
}

impl RecoverySession {
    pub fn new(
        layout: &PointLayout,
        requester: usize,
        quorum: &[usize],
        mode: RecoveryMode,
    ) -> Result<Self, RecoveryError> {
        let params = layout.params();
        params.check_participant(requester)?;
        let mut members = BTreeSet::new();
        for &i in quorum {
            params.check_participant(i)?;
            if i == requester {
                return Err(RecoveryError::RequesterInQuorum(i));
            }
            if !members.insert(i) {
                return Err(SchemeError::DuplicateParticipant(i).into());
            }
        }
        if members.len() != params.k() {
            return Err(RecoveryError::QuorumSize {
                expected: params.k(),
                got: members.len(),
            });
        }
        let quorum: Vec<usize> = members.into_iter().collect();
        let nodes: Vec<FieldElement> = quorum
            .iter()
            .flat_map(|&i| layout.participant_points(i).iter().copied())
            .collect();
        let targets = match mode {
            RecoveryMode::FullState => params.slots(),
            _ => 1,
        };
        let rows = (0..targets)
            .map(|slot| poly::lagrange_coefficients(&nodes, layout.point(requester, slot)))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(RecoverySession {
            layout: layout.clone(),
            requester,
            quorum,
            mode,
            rows,
        })
    }

    pub fn layout(&self) -> &PointLayout {
        &self.layout
    }

    pub fn requester(&self) -> usize {
        self.requester
    }

    /// Quorum members in increasing order.
    pub fn quorum(&self) -> &[usize] {
        &self.quorum
    }

    pub fn mode(&self) -> RecoveryMode {
        self.mode
    }

    /// Number of requester points being recovered: 1, or `n-k+1` in full-state mode.
    pub fn target_slots(&self) -> usize {
        self.rows.len()
    }

    fn position(&self, member: usize) -> Result<usize, RecoveryError> {
        self.quorum
            .iter()
            .position(|&m| m == member)
            .ok_or(RecoveryError::NotInQuorum(member))
    }

    /// `lambda_{member, j}` for `j = 0..=n-k`, targeting requester slot `slot`.
    pub fn lambdas(&self, member: usize, slot: usize) -> Result<&[FieldElement], RecoveryError> {
        let width = self.layout.params().slots();
        let m = self.position(member)?;
        Ok(&self.rows[slot].lambdas[m * width..(m + 1) * width])
    }

    /// The contribution `t_{member}` for `slot` as a functional on the
    /// coefficient vector of the dealing polynomial.
    pub fn contribution_functional(
        &self,
        member: usize,
        slot: usize,
    ) -> Result<Vec<FieldElement>, RecoveryError> {
        let spec = self.layout.spec();
        let width = self.layout.params().degree_bound();
        let mut row = vec![spec.zero(); width];
        for (&lambda, &x) in self
            .lambdas(member, slot)?
            .iter()
            .zip(self.layout.participant_points(member))
        {
            for (r, v) in row.iter_mut().zip(vandermonde_row(x, width)) {
                *r += lambda * v;
            }
        }
        Ok(row)
    }

    fn expect_mode(&self, allowed: &[RecoveryMode]) -> Result<(), RecoveryError> {
        if allowed.contains(&self.mode) {
            Ok(())
        } else {
            Err(RecoveryError::ModeMismatch {
                expected: allowed[0],
                got: self.mode,
            })
        }
    }

    /// Unmasked partial sum of member `bundle.participant` for `slot`.
    fn partial_sum(&self, bundle: &ParticipantBundle, slot: usize) -> Result<FieldElement, RecoveryError> {
        bundle.validate(&self.layout)?;
        let lambdas = self.lambdas(bundle.participant, slot)?;
        let values = bundle.values()?;
        Ok(lambdas
            .iter()
            .zip(&values)
            .fold(self.layout.spec().zero(), |acc, (&l, &v)| acc + l * v))
    }
}

/// One value sent from a quorum member to the requester.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Contribution {
    pub from: usize,
    pub to: usize,
    /// Requester slot this value targets; always 0 outside full-state mode.
    pub slot: usize,
    pub value: FieldElement,
}

/// Unmasked contribution `t_i = sum_j lambda_ij r(x_ij)`.
pub fn naive_contribution(
    session: &RecoverySession,
    bundle: &ParticipantBundle,
) -> Result<Contribution, RecoveryError> {
    session.expect_mode(&[RecoveryMode::Naive])?;
    Ok(Contribution {
        from: bundle.participant,
        to: session.requester,
        slot: 0,
        value: session.partial_sum(bundle, 0)?,
    })
}

/// Mask `r_{from,to}` for one slot, generated by `from` and sent to `to`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MaskMessage {
    pub from: usize,
    pub to: usize,
    pub slot: usize,
    pub value: FieldElement,
}

/// Masks generated by `member`: one per quorum member (itself included) per
/// target slot, ordered by slot then recipient.
pub fn generate_masks<R: RngCore + ?Sized>(
    session: &RecoverySession,
    member: usize,
    rng: &mut R,
) -> Result<Vec<MaskMessage>, RecoveryError> {
    session.expect_mode(&[RecoveryMode::Masked, RecoveryMode::FullState])?;
    session.position(member)?;
    let spec = session.layout.spec();
    let mut out = Vec::with_capacity(session.quorum.len() * session.target_slots());
    for slot in 0..session.target_slots() {
        for &to in &session.quorum {
            out.push(MaskMessage {
                from: member,
                to,
                slot,
                value: spec.random(rng),
            });
        }
    }
    Ok(out)
}

/// What one member knows after round 1: the row it generated and the column
/// it received.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MemberMasks {
    member: usize,
    values: BTreeMap<(usize, usize, usize), FieldElement>,
}

impl MemberMasks {
    pub fn new(member: usize) -> Self {
        MemberMasks {
            member,
            values: BTreeMap::new(),
        }
    }

    /// Record a mask the member generated or received; other masks are ignored.
    pub fn record(&mut self, msg: &MaskMessage) {
        if msg.from == self.member || msg.to == self.member {
            self.values.insert((msg.slot, msg.from, msg.to), msg.value);
        }
    }

    pub fn get(&self, slot: usize, from: usize, to: usize) -> Option<FieldElement> {
        self.values.get(&(slot, from, to)).copied()
    }

    fn adjustment(&self, session: &RecoverySession, slot: usize) -> Result<FieldElement, RecoveryError> {
        let me = self.member;
        let missing = |from, to| RecoveryError::MasksMissing {
            member: me,
            from,
            to,
            slot,
        };
        let mut acc = session.layout.spec().zero();
        for &j in &session.quorum {
            let sent = self.get(slot, me, j).ok_or_else(|| missing(me, j))?;
            let received = self.get(slot, j, me).ok_or_else(|| missing(j, me))?;
            acc += sent - received;
        }
        Ok(acc)
    }
}

/// All masks of a session, keyed by `(slot, from, to)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaskMatrix {
    members: Vec<usize>,
    slots: usize,
    values: BTreeMap<(usize, usize, usize), FieldElement>,
}

impl MaskMatrix {
    /// Assemble from round-1 messages; every ordered pair of members must be
    /// present for every slot.
    pub fn from_messages(session: &RecoverySession, messages: &[MaskMessage]) -> Result<Self, RecoveryError> {
        let values: BTreeMap<_, _> = messages
            .iter()
            .map(|m| ((m.slot, m.from, m.to), m.value))
            .collect();
        for slot in 0..session.target_slots() {
            for &from in &session.quorum {
                for &to in &session.quorum {
                    if !values.contains_key(&(slot, from, to)) {
                        return Err(RecoveryError::Incomplete(format!(
                            "mask {from}->{to} for slot {slot} never sent"
                        )));
                    }
                }
            }
        }
        Ok(MaskMatrix {
            members: session.quorum.clone(),
            slots: session.target_slots(),
            values,
        })
    }

    /// Number of logical mask messages, `k^2` per slot (self-masks included).
    pub fn message_count(&self) -> usize {
        self.values.len()
    }

    pub fn get(&self, slot: usize, from: usize, to: usize) -> Option<FieldElement> {
        self.values.get(&(slot, from, to)).copied()
    }

    /// The row and column known to `member`.
    pub fn member_view(&self, member: usize) -> MemberMasks {
        let mut masks = MemberMasks::new(member);
        for (&(slot, from, to), &value) in &self.values {
            masks.record(&MaskMessage { from, to, slot, value });
        }
        masks
    }

    /// `sum_{i,j} (r_ij - r_ji)` for a slot; zero for every matrix.
    pub fn cancellation_sum(&self, slot: usize) -> FieldElement {
        let first = self.values.values().next().expect("non-empty matrix");
        let mut acc = first.spec().zero();
        for &i in &self.members {
            for &j in &self.members {
                acc += self.values[&(slot, i, j)] - self.values[&(slot, j, i)];
            }
        }
        acc
    }

    pub fn slots(&self) -> usize {
        self.slots
    }
}

/// Round 1 for the whole quorum: `rngs[m]` drives member `quorum()[m]`.
pub fn masked_round1<R: RngCore>(
    session: &RecoverySession,
    rngs: &mut [R],
) -> Result<MaskMatrix, RecoveryError> {
    if rngs.len() != session.quorum.len() {
        return Err(RecoveryError::RngCount {
            expected: session.quorum.len(),
            got: rngs.len(),
        });
    }
    let mut messages = Vec::new();
    for (&member, rng) in session.quorum.iter().zip(rngs.iter_mut()) {
        messages.extend(generate_masks(session, member, rng)?);
    }
    MaskMatrix::from_messages(session, &messages)
}

/// Masked contribution `t_i + sum_j (r_ij - r_ji)`.
pub fn masked_contribution(
    session: &RecoverySession,
    bundle: &ParticipantBundle,
    masks: &MemberMasks,
) -> Result<Contribution, RecoveryError> {
    session.expect_mode(&[RecoveryMode::Masked])?;
    if masks.member != bundle.participant {
        return Err(RecoveryError::Incomplete(format!(
            "masks of member {} used for member {}",
            masks.member, bundle.participant
        )));
    }
    Ok(Contribution {
        from: bundle.participant,
        to: session.requester,
        slot: 0,
        value: session.partial_sum(bundle, 0)? + masks.adjustment(session, 0)?,
    })
}

/// Masked contributions for every requester slot (`n-k+1` values).
pub fn full_state_contribution(
    session: &RecoverySession,
    bundle: &ParticipantBundle,
    masks: &MemberMasks,
) -> Result<Vec<Contribution>, RecoveryError> {
    session.expect_mode(&[RecoveryMode::FullState])?;
    if masks.member != bundle.participant {
        return Err(RecoveryError::Incomplete(format!(
            "masks of member {} used for member {}",
            masks.member, bundle.participant
        )));
    }
    (0..session.target_slots())
        .map(|slot| {
            Ok(Contribution {
                from: bundle.participant,
                to: session.requester,
                slot,
                value: session.partial_sum(bundle, slot)? + masks.adjustment(session, slot)?,
            })
        })
        .collect()
}

/// What the requester ends up with.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Recovered {
    pub participant: usize,
    pub secret: FieldElement,
    /// The full share vector in full-state mode, empty otherwise.
    pub share: Vec<FieldElement>,
}

impl Recovered {
    /// Merge into the requester's bundle: the secret is replaced; in
    /// full-state mode the shares are too.
    pub fn into_bundle(self, previous: Option<ParticipantBundle>) -> ParticipantBundle {
        let share = if self.share.is_empty() {
            previous.map(|b| b.share).unwrap_or_default()
        } else {
            self.share
        };
        ParticipantBundle {
            participant: self.participant,
            secret: Some(self.secret),
            share,
        }
    }
}

/// Requester side: add up one contribution per member per slot.
pub fn combine(session: &RecoverySession, contributions: &[Contribution]) -> Result<Recovered, RecoveryError> {
    let spec = session.layout.spec();
    let mut sums = vec![spec.zero(); session.target_slots()];
    let mut seen = BTreeSet::new();
    for c in contributions {
        session.position(c.from)?;
        if c.to != session.requester || c.slot >= sums.len() {
            return Err(RecoveryError::Incomplete(format!(
                "unexpected contribution {}->{} slot {}",
                c.from, c.to, c.slot
            )));
        }
        if !seen.insert((c.slot, c.from)) {
            return Err(RecoveryError::Incomplete(format!(
                "duplicate contribution from {} for slot {}",
                c.from, c.slot
            )));
        }
        sums[c.slot] += c.value;
    }
    let expected = session.target_slots() * session.quorum.len();
    if seen.len() != expected {
        return Err(RecoveryError::Incomplete(format!(
            "received {} of {expected} contributions",
            seen.len()
        )));
    }
    Ok(Recovered {
        participant: session.requester,
        secret: sums[0],
        share: if session.mode == RecoveryMode::FullState {
            sums[1..].to_vec()
        } else {
            Vec::new()
        },
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GateRefusal {
    /// The participant requested a naive recovery earlier.
    Excluded { participant: usize },
    /// After the recovery, `coalition` would determine the secret of `target`.
    WouldLeak { coalition: Vec<usize>, target: usize },
    /// After the recovery, `coalition` would be left with codimension
    /// `codim`, below `floor`.
    BelowFloor {
        coalition: Vec<usize>,
        codim: usize,
        floor: usize,
    },
}

impl fmt::Display for GateRefusal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GateRefusal::Excluded { participant } => write!(
                f,
                "participant {participant} ran a naive recovery before and is excluded from further recoveries"
            ),
            GateRefusal::WouldLeak { coalition, target } => write!(
                f,
                "coalition {coalition:?} would learn the secret of participant {target}"
            ),
            GateRefusal::BelowFloor { coalition, codim, floor } => write!(
                f,
                "coalition {coalition:?} would drop to codimension {codim}, below {floor}"
            ),
        }
    }
}

/// When a naive recovery counts as too revealing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GatePolicy {
    /// Refuse when some coalition of at most `k - 1` participants would hold
    /// an outsider's secret point in its knowledge span.
    #[default]
    SecretSpan,
    /// Refuse when some coalition of exactly `k - 1` participants would fall
    /// below codimension `n - k + 1`, the value every such coalition starts
    /// with. Any naive recovery with `k >= 2` hands the requester `k - 1`
    /// extra functionals, so this policy refuses all of them.
    CodimensionFloor,
}

impl fmt::Display for GatePolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GatePolicy::SecretSpan => "secret-span",
            GatePolicy::CodimensionFloor => "codimension-floor",
        })
    }
}

impl FromStr for GatePolicy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "secret-span" => Ok(GatePolicy::SecretSpan),
            "codimension-floor" => Ok(GatePolicy::CodimensionFloor),
            other => Err(format!("unknown gate policy {other:?}")),
        }
    }
}

/// Codimension bookkeeping for naive recoveries.
///
/// Tracks the contribution functionals every naive requester has received.
/// A naive requester is excluded from every later session. Before a naive
/// session the gate evaluates the coalitions that include a naive requester
/// against its [`GatePolicy`].
#[derive(Debug, Clone)]
pub struct RecoveryGate {
    layout: PointLayout,
    policy: GatePolicy,
    excluded: BTreeSet<usize>,
    received: BTreeMap<usize, Vec<Vec<FieldElement>>>,
}

impl RecoveryGate {
    pub fn new(layout: &PointLayout) -> Self {
        Self::with_policy(layout, GatePolicy::default())
    }

    pub fn with_policy(layout: &PointLayout, policy: GatePolicy) -> Self {
        RecoveryGate {
            layout: layout.clone(),
            policy,
            excluded: BTreeSet::new(),
            received: BTreeMap::new(),
        }
    }

    pub fn policy(&self) -> GatePolicy {
        self.policy
    }

    pub fn excluded(&self) -> &BTreeSet<usize> {
        &self.excluded
    }

    pub fn check(&self, session: &RecoverySession) -> Result<(), RecoveryError> {
        let involved = std::iter::once(&session.requester).chain(&session.quorum);
        for &p in involved {
            if self.excluded.contains(&p) {
                return Err(RecoveryError::Refused(GateRefusal::Excluded { participant: p }));
            }
        }
        if session.mode != RecoveryMode::Naive {
            return Ok(());
        }
        let mut received = self.received.clone();
        received
            .entry(session.requester)
            .or_default()
            .extend(session_functionals(session)?);
        match self.first_violation(&received) {
            Some(refusal) => Err(RecoveryError::Refused(refusal)),
            None => Ok(()),
        }
    }

    /// Record a completed session.
    pub fn record(&mut self, session: &RecoverySession) -> Result<(), RecoveryError> {
        if session.mode == RecoveryMode::Naive {
            self.received
                .entry(session.requester)
                .or_default()
                .extend(session_functionals(session)?);
            self.excluded.insert(session.requester);
        }
        Ok(())
    }

    fn first_violation(&self, received: &BTreeMap<usize, Vec<Vec<FieldElement>>>) -> Option<GateRefusal> {
        let params = self.layout.params();
        let (n, k, width) = (params.n(), params.k(), params.degree_bound());
        let spec = params.spec();
        for mask in 1u64..(1 << n) {
            let coalition: Vec<usize> = (1..=n).filter(|i| mask >> (i - 1) & 1 == 1).collect();
            let size_ok = match self.policy {
                GatePolicy::SecretSpan => coalition.len() < k,
                GatePolicy::CodimensionFloor => coalition.len() == k - 1,
            };
            if !size_ok || !coalition.iter().any(|i| received.contains_key(i)) {
                continue;
            }
            let mut span = Echelon::new(spec, width);
            for &i in &coalition {
                for &x in self.layout.participant_points(i) {
                    span.insert(&vandermonde_row(x, width));
                }
                for row in received.get(&i).into_iter().flatten() {
                    span.insert(row);
                }
            }
            match self.policy {
                GatePolicy::SecretSpan => {
                    for target in (1..=n).filter(|t| !coalition.contains(t)) {
                        if span.contains(&vandermonde_row(self.layout.secret_point(target), width)) {
                            return Some(GateRefusal::WouldLeak { coalition, target });
                        }
                    }
                }
                GatePolicy::CodimensionFloor => {
                    let floor = params.slots();
                    let codim = width - span.rank();
                    if codim < floor {
                        return Some(GateRefusal::BelowFloor { coalition, codim, floor });
                    }
                }
            }
        }
        None
    }
}

fn session_functionals(session: &RecoverySession) -> Result<Vec<Vec<FieldElement>>, RecoveryError> {
    session
        .quorum
        .iter()
        .map(|&i| session.contribution_functional(i, 0))
        .collect()
}

/// Alice's side of the naive-recovery leak on the three-party secrets-first
/// instance (secrets at 0, 1, 2; shares at 3, 4, 5; `k = 2`).
///
/// From her share `r(3)` and the two naive contributions she computes
/// `(2/3)(r(3) - (2/5) t_b - (1/4) t_c)`, which equals `r(2) - r(1)`.
pub fn leak_extract(
    layout: &PointLayout,
    share: FieldElement,
    t_b: FieldElement,
    t_c: FieldElement,
) -> Result<FieldElement, RecoveryError> {
    let params = layout.params();
    if params.n() != 3 || params.k() != 2 || layout.id() != LayoutId::SecretsFirst {
        return Err(RecoveryError::WrongFixture(format!(
            "needs n=3, k=2, secrets-first; got n={}, k={}, {}",
            params.n(),
            params.k(),
            layout.id()
        )));
    }
    let f = layout.spec();
    let ratio = |a, b| {
        f.ratio(a, b)
            .map_err(|_| RecoveryError::WrongFixture(format!("{a}/{b} is undefined in {f}")))
    };
    Ok(ratio(2, 3)? * (share - ratio(2, 5)? * t_b - ratio(1, 4)? * t_c))
}

/// A naive recovery by participant 1 on the three-party fixture, together
/// with what she extracts from it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeakDemo {
    pub secrets: Vec<FieldElement>,
    /// Alice's share `r(3)`.
    pub share: FieldElement,
    pub t_b: FieldElement,
    pub t_c: FieldElement,
    pub recovered: FieldElement,
    pub extracted: FieldElement,
    /// `-r(1) + r(2)` from the dealer record.
    pub expected: FieldElement,
}

impl LeakDemo {
    pub fn holds(&self) -> bool {
        self.extracted == self.expected && self.recovered == self.secrets[0]
    }
}

pub fn demo_leak(dealing: &Dealing) -> Result<LeakDemo, RecoveryError> {
    let layout = &dealing.layout;
    let session = RecoverySession::new(layout, 1, &[2, 3], RecoveryMode::Naive)?;
    let t_b = naive_contribution(&session, dealing.bundle(2))?;
    let t_c = naive_contribution(&session, dealing.bundle(3))?;
    let recovered = combine(&session, &[t_b, t_c])?.secret;
    let secrets = dealing
        .secrets()
        .into_iter()
        .enumerate()
        .map(|(i, s)| s.ok_or(SchemeError::MissingSecret(i + 1)))
        .collect::<Result<Vec<_>, _>>()?;
    let share = dealing.bundle(1).share[0];
    Ok(LeakDemo {
        extracted: leak_extract(layout, share, t_b.value, t_c.value)?,
        expected: secrets[2] - secrets[1],
        secrets,
        share,
        t_b: t_b.value,
        t_c: t_c.value,
        recovered,
    })
}
