//! In-memory multiparty simulation.
//!
//! Parties only see their own state and their inbox; everything else flows
//! through [`Envelope`]s on a bus that delivers whole rounds at a time, in a
//! configurable order. Every delivered message is appended to a
//! [`Transcript`], which has a line-oriented text form:
//!
//! ```text
//! gruppen-transcript v1
//! n 3
//! k 2
//! field p=13
//! layout secrets-first
//! order sender-major
//! session 0 setup seeds 1,2,3
//! session 1 recovery requester 1 quorum 2,3 mode naive seed 7
//! msg 0 SETUP_SHARE 1 2 4
//! msg 1 CONTRIB 2 1 0 a
//! ```
//!
//! `MASK`, `CONTRIB` and `CONTRIB_FS` lines carry `from to slot value`;
//! `SETUP_SHARE` lines carry `from to` followed by the `n-k` share values.
//! Values are fixed-width hex.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::analysis::{View, ViewItem};
use crate::field::{FieldElement, FieldSpec};
use crate::recovery::{
    combine, full_state_contribution, generate_masks, GatePolicy, masked_contribution, naive_contribution, Contribution,
    MaskMessage, MemberMasks, Recovered, RecoveryError, RecoveryGate, RecoveryMode, RecoverySession,
};
use crate::scheme::{LayoutId, ParticipantBundle, Params, PointLayout, SchemeError};
use crate::setup::{aggregate_for, setup_deal_own, SetupError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Scheme(#[from] SchemeError),
    #[error(transparent)]
    Recovery(#[from] RecoveryError),
    #[error(transparent)]
    Setup(#[from] SetupError),
    #[error("expected {expected} {what}, got {got}")]
    Count {
        what: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("participant {0} has no bundle")]
    NoBundle(usize),
    #[error("protocol error: {0}")]
    Protocol(String),
    #[error("transcript line {line}: {message}")]
    Parse { line: usize, message: String },
}

fn parse_err(line: usize, message: impl Into<String>) -> HarnessError {
    HarnessError::Parse {
        line,
        message: message.into(),
    }
}

/// Per-party seeds from one master seed: the first 8 bytes (little endian)
/// of `SHA-256(master as 8 LE bytes || party index as 8 LE bytes)`.
pub fn derive_party_seeds(master: u64, n: usize) -> Vec<u64> {
    (1..=n as u64)
        .map(|i| {
            let mut hasher = Sha256::new();
            hasher.update(master.to_le_bytes());
            hasher.update(i.to_le_bytes());
            let digest = hasher.finalize();
            u64::from_le_bytes(digest[..8].try_into().expect("8 bytes"))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Payload {
    Mask { slot: usize, value: FieldElement },
    Contrib { value: FieldElement },
    ContribFs { slot: usize, value: FieldElement },
    SetupShare { values: Vec<FieldElement> },
}

impl Payload {
    pub fn tag(&self) -> &'static str {
        match self {
            Payload::Mask { .. } => "MASK",
            Payload::Contrib { .. } => "CONTRIB",
            Payload::ContribFs { .. } => "CONTRIB_FS",
            Payload::SetupShare { .. } => "SETUP_SHARE",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Envelope {
    pub session: usize,
    pub from: usize,
    pub to: usize,
    pub payload: Payload,
}

impl fmt::Display for Envelope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "msg {} {} {} {}", self.session, self.payload.tag(), self.from, self.to)?;
        match &self.payload {
            Payload::Mask { slot, value } | Payload::ContribFs { slot, value } => {
                write!(f, " {slot} {}", value.to_hex())
            }
            Payload::Contrib { value } => write!(f, " 0 {}", value.to_hex()),
            Payload::SetupShare { values } => values.iter().try_for_each(|v| write!(f, " {}", v.to_hex())),
        }
    }
}

/// Within-round delivery order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DeliveryOrder {
    /// By `(from, to)`.
    #[default]
    SenderMajor,
    /// By `(to, from)`.
    ReceiverMajor,
    /// Seeded shuffle of each round.
    Shuffled(u64),
}

impl fmt::Display for DeliveryOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DeliveryOrder::SenderMajor => f.write_str("sender-major"),
            DeliveryOrder::ReceiverMajor => f.write_str("receiver-major"),
            DeliveryOrder::Shuffled(seed) => write!(f, "shuffled:{seed}"),
        }
    }
}

impl FromStr for DeliveryOrder {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "sender-major" => Ok(DeliveryOrder::SenderMajor),
            "receiver-major" => Ok(DeliveryOrder::ReceiverMajor),
            _ => s
                .strip_prefix("shuffled:")
                .and_then(|seed| seed.parse().ok())
                .map(DeliveryOrder::Shuffled)
                .ok_or_else(|| format!("unknown delivery order {s:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SessionKind {
    Setup { seeds: Vec<u64> },
    Recovery {
        requester: usize,
        quorum: Vec<usize>,
        mode: RecoveryMode,
        seed: u64,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SessionDescriptor {
    pub id: usize,
    pub kind: SessionKind,
}

fn join<T: ToString>(items: &[T]) -> String {
    items.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

impl fmt::Display for SessionDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            SessionKind::Setup { seeds } => write!(f, "session {} setup seeds {}", self.id, join(seeds)),
            SessionKind::Recovery {
                requester,
                quorum,
                mode,
                seed,
            } => write!(
                f,
                "session {} recovery requester {requester} quorum {} mode {mode} seed {seed}",
                self.id,
                join(quorum)
            ),
        }
    }
}

/// Header plus every delivered message in delivery order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transcript {
    pub params: Params,
    pub layout: LayoutId,
    pub order: DeliveryOrder,
    pub sessions: Vec<SessionDescriptor>,
    pub messages: Vec<Envelope>,
}

const MAGIC: &str = "gruppen-transcript v1";

impl Transcript {
    pub fn new(layout: &PointLayout, order: DeliveryOrder) -> Self {
        Transcript {
            params: layout.params(),
            layout: layout.id(),
            order,
            sessions: Vec::new(),
            messages: Vec::new(),
        }
    }

    pub fn point_layout(&self) -> PointLayout {
        PointLayout::new(self.params, self.layout)
    }

    pub fn session(&self, id: usize) -> Option<&SessionDescriptor> {
        self.sessions.iter().find(|s| s.id == id)
    }

    pub fn next_session_id(&self) -> usize {
        self.sessions.iter().map(|s| s.id + 1).max().unwrap_or(0)
    }

    /// Messages of one session, in delivery order.
    pub fn session_messages(&self, id: usize) -> impl Iterator<Item = &Envelope> {
        self.messages.iter().filter(move |m| m.session == id)
    }

    /// Messages a party sent or received (self-deliveries included).
    pub fn party_view(&self, party: usize) -> impl Iterator<Item = &Envelope> {
        self.messages.iter().filter(move |m| m.from == party || m.to == party)
    }

    /// The recovery session objects, by id.
    pub fn recovery_sessions(&self) -> Result<BTreeMap<usize, RecoverySession>, HarnessError> {
        let layout = self.point_layout();
        let mut out = BTreeMap::new();
        for s in &self.sessions {
            if let SessionKind::Recovery {
                requester,
                quorum,
                mode,
                ..
            } = &s.kind
            {
                out.insert(s.id, RecoverySession::new(&layout, *requester, quorum, *mode)?);
            }
        }
        Ok(out)
    }

    /// A gate that has seen every recovery session of the transcript.
    pub fn gate(&self) -> Result<RecoveryGate, HarnessError> {
        self.gate_with_policy(GatePolicy::default())
    }

    pub fn gate_with_policy(&self, policy: GatePolicy) -> Result<RecoveryGate, HarnessError> {
        let mut gate = RecoveryGate::with_policy(&self.point_layout(), policy);
        for session in self.recovery_sessions()?.values() {
            gate.record(session)?;
        }
        Ok(gate)
    }

    pub fn parse(text: &str) -> Result<Self, HarnessError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        match lines.next() {
            Some((_, MAGIC)) => {}
            Some((no, _)) => return Err(parse_err(no, format!("expected {MAGIC:?}"))),
            None => return Err(parse_err(0, "empty transcript")),
        }
        let mut header: BTreeMap<&str, (usize, &str)> = BTreeMap::new();
        let mut sessions = Vec::new();
        let mut message_lines = Vec::new();
        for (no, line) in lines {
            let (key, rest) = line.split_once(' ').unwrap_or((line, ""));
            match key {
                "session" => sessions.push(parse_session(no, rest)?),
                "msg" => message_lines.push((no, rest)),
                "n" | "k" | "field" | "layout" | "order" => {
                    if header.insert(key, (no, rest.trim())).is_some() {
                        return Err(parse_err(no, format!("duplicate {key}")));
                    }
                }
                other => return Err(parse_err(no, format!("unknown line type {other:?}"))),
            }
        }
        let get = |key: &str| header.get(key).copied().ok_or_else(|| parse_err(0, format!("missing {key}")));
        let number = |key: &str| -> Result<usize, HarnessError> {
            let (no, v) = get(key)?;
            v.parse().map_err(|_| parse_err(no, format!("bad {key} {v:?}")))
        };
        let (field_no, field) = get("field")?;
        let spec: FieldSpec = field.parse().map_err(|e| parse_err(field_no, format!("{e}")))?;
        let params = Params::new(number("n")?, number("k")?, spec)?;
        let (layout_no, layout) = get("layout")?;
        let layout: LayoutId = layout.parse().map_err(|e| parse_err(layout_no, format!("{e}")))?;
        let order = match header.get("order") {
            Some(&(no, v)) => v.parse().map_err(|e: String| parse_err(no, e))?,
            None => DeliveryOrder::default(),
        };
        let mut ids = BTreeSet::new();
        for s in &sessions {
            if !ids.insert(s.id) {
                return Err(parse_err(0, format!("session {} declared twice", s.id)));
            }
        }
        let messages = message_lines
            .into_iter()
            .map(|(no, rest)| parse_message(no, rest, spec, &ids))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Transcript {
            params,
            layout,
            order,
            sessions,
            messages,
        })
    }
}

impl fmt::Display for Transcript {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{MAGIC}")?;
        writeln!(f, "n {}", self.params.n())?;
        writeln!(f, "k {}", self.params.k())?;
        writeln!(f, "field {}", self.params.spec())?;
        writeln!(f, "layout {}", self.layout)?;
        writeln!(f, "order {}", self.order)?;
        for s in &self.sessions {
            writeln!(f, "{s}")?;
        }
        for m in &self.messages {
            writeln!(f, "{m}")?;
        }
        Ok(())
    }
}

fn parse_list<T: FromStr>(no: usize, text: &str) -> Result<Vec<T>, HarnessError> {
    text.split(',')
        .map(|x| x.trim().parse().map_err(|_| parse_err(no, format!("bad list entry {x:?}"))))
        .collect()
}

fn parse_session(no: usize, rest: &str) -> Result<SessionDescriptor, HarnessError> {
    let words: Vec<&str> = rest.split_whitespace().collect();
    let id = words
        .first()
        .and_then(|w| w.parse().ok())
        .ok_or_else(|| parse_err(no, "missing session id"))?;
    let field = |name: &str| -> Result<&str, HarnessError> {
        words
            .iter()
            .position(|w| *w == name)
            .and_then(|i| words.get(i + 1).copied())
            .ok_or_else(|| parse_err(no, format!("session lacks {name}")))
    };
    let number = |name: &str| -> Result<u64, HarnessError> {
        let v = field(name)?;
        v.parse().map_err(|_| parse_err(no, format!("bad {name} {v:?}")))
    };
    let kind = match words.get(1) {
        Some(&"setup") => SessionKind::Setup {
            seeds: parse_list(no, field("seeds")?)?,
        },
        Some(&"recovery") => SessionKind::Recovery {
            requester: number("requester")? as usize,
            quorum: parse_list(no, field("quorum")?)?,
            mode: field("mode")?.parse().map_err(|e: String| parse_err(no, e))?,
            seed: number("seed")?,
        },
        _ => return Err(parse_err(no, "session kind must be setup or recovery")),
    };
    Ok(SessionDescriptor { id, kind })
}

fn parse_message(no: usize, rest: &str, spec: FieldSpec, sessions: &BTreeSet<usize>) -> Result<Envelope, HarnessError> {
    let words: Vec<&str> = rest.split_whitespace().collect();
    if words.len() < 4 {
        return Err(parse_err(no, "message needs session, type, from, to"));
    }
    let int = |i: usize| -> Result<usize, HarnessError> {
        words
            .get(i)
            .and_then(|w| w.parse().ok())
            .ok_or_else(|| parse_err(no, format!("bad field {}", i + 1)))
    };
    let value = |w: &str| spec.parse_hex(w).map_err(|e| parse_err(no, e.to_string()));
    let session = int(0)?;
    if !sessions.contains(&session) {
        return Err(parse_err(no, format!("message for undeclared session {session}")));
    }
    let (from, to) = (int(2)?, int(3)?);
    let slot_value = || -> Result<(usize, FieldElement), HarnessError> {
        if words.len() != 6 {
            return Err(parse_err(no, "expected slot and value"));
        }
        Ok((int(4)?, value(words[5])?))
    };
    let payload = match words[1] {
        "MASK" => {
            let (slot, value) = slot_value()?;
            Payload::Mask { slot, value }
        }
        "CONTRIB" => {
            let (slot, value) = slot_value()?;
            if slot != 0 {
                return Err(parse_err(no, "CONTRIB slot must be 0"));
            }
            Payload::Contrib { value }
        }
        "CONTRIB_FS" => {
            let (slot, value) = slot_value()?;
            Payload::ContribFs { slot, value }
        }
        "SETUP_SHARE" => Payload::SetupShare {
            values: words[4..].iter().map(|w| value(w)).collect::<Result<_, _>>()?,
        },
        other => return Err(parse_err(no, format!("unknown message type {other:?}"))),
    };
    Ok(Envelope {
        session,
        from,
        to,
        payload,
    })
}

/// Per-session protocol state held by a party.
#[derive(Debug, Clone)]
enum PartyState {
    Setup {
        own_secret: FieldElement,
    },
    Member {
        session: RecoverySession,
        masks: MemberMasks,
    },
    Requester {
        session: RecoverySession,
        received: Vec<Contribution>,
    },
}

/// One simulated participant.
#[derive(Debug, Clone)]
pub struct Party {
    index: usize,
    layout: PointLayout,
    bundle: Option<ParticipantBundle>,
    inbox: VecDeque<Envelope>,
    rng: ChaCha20Rng,
    state: BTreeMap<usize, PartyState>,
}

impl Party {
    fn new(index: usize, layout: &PointLayout, bundle: Option<ParticipantBundle>, seed: u64) -> Self {
        Party {
            index,
            layout: layout.clone(),
            bundle,
            inbox: VecDeque::new(),
            rng: ChaCha20Rng::seed_from_u64(seed),
            state: BTreeMap::new(),
        }
    }

    pub fn index(&self) -> usize {
        self.index
    }

    fn reseed(&mut self, seed: u64) {
        self.rng = ChaCha20Rng::seed_from_u64(seed);
    }

    fn bundle(&self) -> Result<&ParticipantBundle, HarnessError> {
        self.bundle.as_ref().ok_or(HarnessError::NoBundle(self.index))
    }

    fn setup_send(&mut self, id: usize, secret: FieldElement) -> Result<Vec<Envelope>, HarnessError> {
        let c = setup_deal_own(&self.layout, self.index, secret, &mut self.rng)?;
        self.state.insert(id, PartyState::Setup { own_secret: secret });
        Ok(c.shares_out
            .into_iter()
            .enumerate()
            .map(|(m, values)| Envelope {
                session: id,
                from: self.index,
                to: m + 1,
                payload: Payload::SetupShare { values },
            })
            .collect())
    }

    fn setup_finish(&mut self, id: usize) -> Result<(), HarnessError> {
        let Some(PartyState::Setup { own_secret }) = self.state.remove(&id) else {
            return Err(HarnessError::Protocol(format!("party {} not in setup {id}", self.index)));
        };
        let mut received = Vec::new();
        for env in self.take_inbox(id) {
            match env.payload {
                Payload::SetupShare { values } => received.push((env.from, values)),
                other => return Err(HarnessError::Protocol(format!("unexpected {} in setup", other.tag()))),
            }
        }
        self.bundle = Some(aggregate_for(&self.layout, self.index, own_secret, &received)?);
        Ok(())
    }

    fn take_inbox(&mut self, id: usize) -> Vec<Envelope> {
        let (mine, rest): (VecDeque<_>, VecDeque<_>) = self.inbox.drain(..).partition(|e| e.session == id);
        self.inbox = rest;
        mine.into()
    }

    fn recovery_join(&mut self, id: usize, session: &RecoverySession) -> Result<Vec<Envelope>, HarnessError> {
        if session.requester() == self.index {
            self.state.insert(
                id,
                PartyState::Requester {
                    session: session.clone(),
                    received: Vec::new(),
                },
            );
            return Ok(Vec::new());
        }
        let mut masks = MemberMasks::new(self.index);
        let mut out = Vec::new();
        if session.mode().is_masked() {
            for m in generate_masks(session, self.index, &mut self.rng)? {
                masks.record(&m);
                // Self-masks cancel locally and are never sent.
                if m.to != self.index {
                    out.push(Envelope {
                        session: id,
                        from: m.from,
                        to: m.to,
                        payload: Payload::Mask {
                            slot: m.slot,
                            value: m.value,
                        },
                    });
                }
            }
        }
        self.state.insert(
            id,
            PartyState::Member {
                session: session.clone(),
                masks,
            },
        );
        Ok(out)
    }

    fn recovery_contribute(&mut self, id: usize) -> Result<Vec<Envelope>, HarnessError> {
        let inbox = self.take_inbox(id);
        let Some(PartyState::Member { session, mut masks }) = self.state.remove(&id) else {
            return Err(HarnessError::Protocol(format!("party {} not a member of {id}", self.index)));
        };
        for env in inbox {
            match env.payload {
                Payload::Mask { slot, value } => masks.record(&MaskMessage {
                    from: env.from,
                    to: env.to,
                    slot,
                    value,
                }),
                other => return Err(HarnessError::Protocol(format!("unexpected {} in round 1", other.tag()))),
            }
        }
        let bundle = self.bundle()?;
        let contributions = match session.mode() {
            RecoveryMode::Naive => vec![naive_contribution(&session, bundle)?],
            RecoveryMode::Masked => vec![masked_contribution(&session, bundle, &masks)?],
            RecoveryMode::FullState => full_state_contribution(&session, bundle, &masks)?,
        };
        Ok(contributions
            .into_iter()
            .map(|c| Envelope {
                session: id,
                from: c.from,
                to: c.to,
                payload: match session.mode() {
                    RecoveryMode::FullState => Payload::ContribFs {
                        slot: c.slot,
                        value: c.value,
                    },
                    _ => Payload::Contrib { value: c.value },
                },
            })
            .collect())
    }

    fn recovery_finish(&mut self, id: usize) -> Result<Recovered, HarnessError> {
        let inbox = self.take_inbox(id);
        let Some(PartyState::Requester { session, mut received }) = self.state.remove(&id) else {
            return Err(HarnessError::Protocol(format!("party {} is not requesting in {id}", self.index)));
        };
        for env in inbox {
            let (slot, value) = match env.payload {
                Payload::Contrib { value } => (0, value),
                Payload::ContribFs { slot, value } => (slot, value),
                other => return Err(HarnessError::Protocol(format!("unexpected {} in round 2", other.tag()))),
            };
            received.push(Contribution {
                from: env.from,
                to: env.to,
                slot,
                value,
            });
        }
        let recovered = combine(&session, &received)?;
        self.bundle = Some(recovered.clone().into_bundle(self.bundle.take()));
        Ok(recovered)
    }
}

/// Parties plus the bus, the transcript and the recovery gate.
#[derive(Debug, Clone)]
pub struct Simulation {
    layout: PointLayout,
    parties: Vec<Party>,
    transcript: Transcript,
    gate: RecoveryGate,
}

impl Simulation {
    fn empty(layout: &PointLayout, order: DeliveryOrder) -> Self {
        Simulation {
            layout: layout.clone(),
            parties: layout
                .params()
                .participants()
                .map(|i| Party::new(i, layout, None, 0))
                .collect(),
            transcript: Transcript::new(layout, order),
            gate: RecoveryGate::new(layout),
        }
    }

    /// Parties holding existing bundles, e.g. from a dealer. Bundles may be
    /// missing for parties that only act as requesters.
    pub fn from_bundles(
        layout: &PointLayout,
        bundles: Vec<ParticipantBundle>,
        order: DeliveryOrder,
    ) -> Result<Self, HarnessError> {
        let mut sim = Simulation::empty(layout, order);
        for b in bundles {
            b.validate(layout)?;
            let slot = &mut sim.parties[b.participant - 1].bundle;
            if slot.replace(b.clone()).is_some() {
                return Err(SchemeError::DuplicateParticipant(b.participant).into());
            }
        }
        Ok(sim)
    }

    /// Continue from an earlier transcript: its sessions feed the gate and
    /// new messages are appended to it.
    pub fn resume(transcript: Transcript, bundles: Vec<ParticipantBundle>) -> Result<Self, HarnessError> {
        let layout = transcript.point_layout();
        let mut sim = Simulation::from_bundles(&layout, bundles, transcript.order)?;
        sim.gate = transcript.gate()?;
        sim.transcript = transcript;
        Ok(sim)
    }

    /// Dealerless setup: party `i` deals its own secret with a generator
    /// seeded by `seeds[i-1]`.
    pub fn run_setup(
        layout: &PointLayout,
        secrets: &[FieldElement],
        seeds: &[u64],
        order: DeliveryOrder,
    ) -> Result<Self, HarnessError> {
        let n = layout.params().n();
        for (what, got) in [("secrets", secrets.len()), ("seeds", seeds.len())] {
            if got != n {
                return Err(HarnessError::Count { what, expected: n, got });
            }
        }
        let mut sim = Simulation::empty(layout, order);
        let id = sim.transcript.next_session_id();
        sim.transcript.sessions.push(SessionDescriptor {
            id,
            kind: SessionKind::Setup { seeds: seeds.to_vec() },
        });
        let mut round = Vec::new();
        for (party, (&secret, &seed)) in sim.parties.iter_mut().zip(secrets.iter().zip(seeds)) {
            party.reseed(seed);
            round.extend(party.setup_send(id, secret)?);
        }
        sim.deliver(round);
        for party in &mut sim.parties {
            party.setup_finish(id)?;
        }
        Ok(sim)
    }

    /// One recovery session; party rngs are reseeded from `seed` by
    /// [`derive_party_seeds`]. Refused sessions leave no trace.
    pub fn run_recovery(
        &mut self,
        requester: usize,
        quorum: &[usize],
        mode: RecoveryMode,
        seed: u64,
    ) -> Result<Recovered, HarnessError> {
        let session = RecoverySession::new(&self.layout, requester, quorum, mode)?;
        self.gate.check(&session)?;
        for &m in session.quorum() {
            self.parties[m - 1].bundle()?;
        }
        let id = self.transcript.next_session_id();
        self.transcript.sessions.push(SessionDescriptor {
            id,
            kind: SessionKind::Recovery {
                requester,
                quorum: session.quorum().to_vec(),
                mode,
                seed,
            },
        });
        let seeds = derive_party_seeds(seed, self.layout.params().n());
        let involved: Vec<usize> = std::iter::once(requester).chain(session.quorum().iter().copied()).collect();

        let mut round1 = Vec::new();
        for &i in &involved {
            let party = &mut self.parties[i - 1];
            party.reseed(seeds[i - 1]);
            round1.extend(party.recovery_join(id, &session)?);
        }
        self.deliver(round1);

        let mut round2 = Vec::new();
        for &m in session.quorum() {
            round2.extend(self.parties[m - 1].recovery_contribute(id)?);
        }
        self.deliver(round2);

        let recovered = self.parties[requester - 1].recovery_finish(id)?;
        self.gate.record(&session)?;
        Ok(recovered)
    }

    fn deliver(&mut self, mut round: Vec<Envelope>) {
        match self.transcript.order {
            DeliveryOrder::SenderMajor => round.sort_by_key(|e| (e.from, e.to)),
            DeliveryOrder::ReceiverMajor => round.sort_by_key(|e| (e.to, e.from)),
            DeliveryOrder::Shuffled(seed) => {
                let salt = self.transcript.messages.len() as u64;
                round.shuffle(&mut ChaCha20Rng::seed_from_u64(seed ^ salt.rotate_left(32)));
            }
        }
        for env in round {
            self.parties[env.to - 1].inbox.push_back(env.clone());
            self.transcript.messages.push(env);
        }
    }

    pub fn layout(&self) -> &PointLayout {
        &self.layout
    }

    pub fn transcript(&self) -> &Transcript {
        &self.transcript
    }

    pub fn gate(&self) -> &RecoveryGate {
        &self.gate
    }

    /// Rebuild the gate under `policy` from the sessions run so far.
    pub fn set_gate_policy(&mut self, policy: GatePolicy) -> Result<(), HarnessError> {
        self.gate = self.transcript.gate_with_policy(policy)?;
        Ok(())
    }

    /// Final party states, as each party would export them.
    pub fn bundles(&self) -> Vec<Option<ParticipantBundle>> {
        self.parties.iter().map(|p| p.bundle.clone()).collect()
    }

    /// Simulate data loss before a recovery: the secret, or everything.
    pub fn forget(&mut self, participant: usize, everything: bool) -> Result<(), HarnessError> {
        self.layout.params().check_participant(participant)?;
        let party = &mut self.parties[participant - 1];
        if everything {
            party.bundle = None;
        } else if let Some(b) = party.bundle.as_mut() {
            b.secret = None;
        }
        Ok(())
    }
}

/// Knowledge of `coalition` after the transcript, plus `granted` secrets.
///
/// Members start with their own points, except what a member lost before
/// its first session: a member whose first session is one where it
/// requests starts without its secret (without anything in full-state
/// mode). Setup messages concern the sub-dealings, not the final
/// polynomial, and are not part of the view; use
/// [`setup_coalition_check`](crate::analysis::setup_coalition_check) for
/// those.
pub fn adversary_view(transcript: &Transcript, coalition: &[usize], granted: &[usize]) -> Result<View, HarnessError> {
    let layout = transcript.point_layout();
    let params = layout.params();
    let sessions = transcript.recovery_sessions()?;
    let mut view = View::new(&layout);
    for (&id, s) in &sessions {
        view.add_session(id, s.clone());
    }
    let members: BTreeSet<usize> = coalition.iter().copied().collect();
    for &i in &members {
        params.check_participant(i)?;
        let first = sessions
            .values()
            .find(|s| s.requester() == i || s.quorum().contains(&i));
        match first {
            Some(s) if s.requester() == i && s.mode() == RecoveryMode::FullState => {}
            Some(s) if s.requester() == i => {
                view.push_shares(i);
            }
            _ => {
                view.push_participant(i);
            }
        }
    }
    for (&id, s) in &sessions {
        if s.mode().is_masked() {
            for &m in s.quorum().iter().filter(|m| members.contains(m)) {
                for slot in 0..s.target_slots() {
                    view.push(ViewItem::Mask {
                        session: id,
                        from: m,
                        to: m,
                        slot,
                    });
                }
            }
        }
    }
    for env in &transcript.messages {
        if !(members.contains(&env.from) || members.contains(&env.to)) {
            continue;
        }
        let item = match env.payload {
            Payload::Mask { slot, .. } => ViewItem::Mask {
                session: env.session,
                from: env.from,
                to: env.to,
                slot,
            },
            Payload::Contrib { .. } => ViewItem::Contribution {
                session: env.session,
                from: env.from,
                slot: 0,
            },
            Payload::ContribFs { slot, .. } => ViewItem::Contribution {
                session: env.session,
                from: env.from,
                slot,
            },
            Payload::SetupShare { .. } => continue,
        };
        view.push(item);
    }
    for &g in granted {
        params.check_participant(g)?;
        view.push_secret(g);
    }
    Ok(view)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::{secret_row, KnowledgeMatrix};
    use crate::scheme::{deal_random, reconstruct_all};
    use crate::setup::setup_aggregate;

    fn fixture(p: u64) -> PointLayout {
        let params = Params::new(3, 2, FieldSpec::prime(p).unwrap()).unwrap();
        PointLayout::new(params, LayoutId::SecretsFirst)
    }

    fn secrets(layout: &PointLayout, values: &[i64]) -> Vec<FieldElement> {
        values.iter().map(|&v| layout.spec().from_integer(v)).collect()
    }

    #[test]
    fn party_seed_derivation_is_stable() {
        let a = derive_party_seeds(42, 4);
        assert_eq!(a, derive_party_seeds(42, 4));
        assert_eq!(a[..3], derive_party_seeds(42, 3)[..]);
        assert_ne!(a, derive_party_seeds(43, 4));
        let distinct: BTreeSet<_> = a.iter().collect();
        assert_eq!(distinct.len(), 4);
    }

    #[test]
    fn setup_reconstructs_and_matches_central_fold() {
        let layout = fixture(13);
        let s = secrets(&layout, &[5, 11, 2]);
        let seeds = [1, 2, 3];
        let sim = Simulation::run_setup(&layout, &s, &seeds, DeliveryOrder::default()).unwrap();
        assert_eq!(sim.transcript().messages.len(), 9);
        let bundles: Vec<ParticipantBundle> = sim.bundles().into_iter().map(Option::unwrap).collect();
        for pair in [[1, 2], [1, 3], [2, 3]] {
            let picked: Vec<_> = pair.iter().map(|&i| bundles[i - 1].clone()).collect();
            assert_eq!(reconstruct_all(&layout, &picked).unwrap().secrets, s);
        }
        let central: Vec<_> = (1..=3)
            .map(|i| setup_deal_own(&layout, i, s[i - 1], &mut ChaCha20Rng::seed_from_u64(seeds[i - 1])).unwrap())
            .collect();
        assert_eq!(setup_aggregate(&layout, &central).unwrap().without_polynomial().bundles, bundles);
    }

    #[test]
    fn setup_is_order_independent() {
        let layout = fixture(13);
        let s = secrets(&layout, &[1, 2, 3]);
        let a = Simulation::run_setup(&layout, &s, &[7, 8, 9], DeliveryOrder::SenderMajor).unwrap();
        let b = Simulation::run_setup(&layout, &s, &[7, 8, 9], DeliveryOrder::Shuffled(5)).unwrap();
        let c = Simulation::run_setup(&layout, &s, &[7, 8, 9], DeliveryOrder::ReceiverMajor).unwrap();
        assert_eq!(a.bundles(), b.bundles());
        assert_eq!(a.bundles(), c.bundles());
        assert_ne!(a.transcript().messages, c.transcript().messages);
        assert!(Simulation::run_setup(&layout, &s[..2], &[1, 2, 3], DeliveryOrder::default()).is_err());
    }

    #[test]
    fn masked_recovery_runs() {
        let mut rng = ChaCha20Rng::seed_from_u64(1);
        for n in 3..=5 {
            for k in 2..n {
                let bound = (n * (n - k + 1)) as u64;
                let p = (bound + 1..).find(|&p| FieldSpec::prime(p).is_ok()).unwrap();
                let layout = PointLayout::default_for(Params::new(n, k, FieldSpec::prime(p).unwrap()).unwrap());
                for run in 0..20u64 {
                    let dealing = deal_random(&layout, &mut rng);
                    let mut sim =
                        Simulation::from_bundles(&layout, dealing.bundles.clone(), DeliveryOrder::default()).unwrap();
                    let requester = 1 + (run as usize % n);
                    sim.forget(requester, false).unwrap();
                    let quorum: Vec<usize> = (1..=n).filter(|&i| i != requester).take(k).collect();
                    let got = sim.run_recovery(requester, &quorum, RecoveryMode::Masked, run).unwrap();
                    assert_eq!(Some(got.secret), dealing.bundle(requester).secret);
                    // k(k-1) masks on the wire, k contributions.
                    assert_eq!(sim.transcript().messages.len(), k * (k - 1) + k);
                    assert_eq!(sim.bundles()[requester - 1].as_ref(), Some(dealing.bundle(requester)));
                }
            }
        }
    }

    #[test]
    fn full_state_restores_lost_bundle() {
        let layout = PointLayout::default_for(Params::new(5, 3, FieldSpec::prime(17).unwrap()).unwrap());
        let dealing = deal_random(&layout, &mut ChaCha20Rng::seed_from_u64(2));
        let mut sim = Simulation::from_bundles(&layout, dealing.bundles.clone(), DeliveryOrder::default()).unwrap();
        sim.forget(4, true).unwrap();
        let got = sim.run_recovery(4, &[1, 2, 5], RecoveryMode::FullState, 9).unwrap();
        assert_eq!(got.share.len(), 2);
        assert_eq!(sim.bundles()[3].as_ref(), Some(dealing.bundle(4)));
        let fs = sim
            .transcript()
            .messages
            .iter()
            .filter(|m| m.payload.tag() == "CONTRIB_FS")
            .count();
        assert_eq!(fs, 3 * 3);
    }

    #[test]
    fn transcript_round_trip_and_determinism() {
        let layout = fixture(13);
        let run = || {
            let mut sim = Simulation::run_setup(
                &layout,
                &secrets(&layout, &[4, 5, 6]),
                &[11, 12, 13],
                DeliveryOrder::Shuffled(3),
            )
            .unwrap();
            sim.run_recovery(1, &[2, 3], RecoveryMode::Masked, 5).unwrap();
            sim.run_recovery(2, &[1, 3], RecoveryMode::FullState, 6).unwrap();
            sim
        };
        let (a, b) = (run(), run());
        let text = a.transcript().to_string();
        assert_eq!(text, b.transcript().to_string());
        assert_eq!(a.bundles(), b.bundles());
        let parsed = Transcript::parse(&text).unwrap();
        assert_eq!(&parsed, a.transcript());
        assert_eq!(parsed.to_string(), text);
    }

    #[test]
    fn transcript_parse_errors() {
        let layout = fixture(13);
        let good = Simulation::run_setup(&layout, &secrets(&layout, &[1, 2, 3]), &[1, 2, 3], DeliveryOrder::default())
            .unwrap()
            .transcript()
            .to_string();
        assert!(Transcript::parse("").is_err());
        assert!(Transcript::parse(&good.replace("gruppen-transcript v1", "nope")).is_err());
        assert!(Transcript::parse(&good.replace("SETUP_SHARE", "BOGUS")).is_err());
        assert!(Transcript::parse(&good.replace("msg 0", "msg 7")).is_err());
        assert!(Transcript::parse(&good.replace("field p=13", "field p=5")).is_err());
        let err = Transcript::parse(&good.replace("k 2", "k two")).unwrap_err();
        assert!(matches!(err, HarnessError::Parse { .. }));
    }

    #[test]
    fn naive_fixture_view_has_codim_one() {
        let layout = fixture(13);
        let dealing = deal_random(&layout, &mut ChaCha20Rng::seed_from_u64(3));
        let mut sim = Simulation::from_bundles(&layout, dealing.bundles.clone(), DeliveryOrder::default()).unwrap();
        sim.forget(1, false).unwrap();
        sim.run_recovery(1, &[2, 3], RecoveryMode::Naive, 1).unwrap();
        let t = sim.transcript();

        let alice = KnowledgeMatrix::from_view(&adversary_view(t, &[1], &[]).unwrap()).unwrap();
        assert_eq!(alice.codim(), 1);
        let bob = KnowledgeMatrix::from_view(&adversary_view(t, &[2], &[]).unwrap()).unwrap();
        assert_eq!(bob.codim(), 2);
        assert!(!bob.contains(&secret_row(&layout, 3)));
        let quorum = KnowledgeMatrix::from_view(&adversary_view(t, &[2, 3], &[]).unwrap()).unwrap();
        assert_eq!(quorum.codim(), 0);
        assert!(adversary_view(t, &[], &[]).unwrap().is_empty());

        // A second naive recovery by Alice is refused by the gate.
        assert!(matches!(
            sim.run_recovery(1, &[2, 3], RecoveryMode::Naive, 2),
            Err(HarnessError::Recovery(RecoveryError::Refused(_)))
        ));
        assert_eq!(sim.transcript().sessions.len(), 1);
    }

    #[test]
    fn resumed_simulation_keeps_gate_state() {
        let layout = fixture(13);
        let dealing = deal_random(&layout, &mut ChaCha20Rng::seed_from_u64(4));
        let mut sim = Simulation::from_bundles(&layout, dealing.bundles.clone(), DeliveryOrder::default()).unwrap();
        sim.run_recovery(1, &[2, 3], RecoveryMode::Naive, 1).unwrap();
        let text = sim.transcript().to_string();
        let mut again = Simulation::resume(Transcript::parse(&text).unwrap(), dealing.bundles.clone()).unwrap();
        assert!(again.run_recovery(1, &[2, 3], RecoveryMode::Naive, 1).is_err());
        again.run_recovery(2, &[1, 3], RecoveryMode::Masked, 2).unwrap_err();
        again.run_recovery(3, &[1, 2], RecoveryMode::Masked, 2).unwrap_err();
        assert_eq!(again.transcript().next_session_id(), 1);
    }

    #[test]
    fn masked_repetition_changes_no_coalition() {
        let layout = PointLayout::default_for(Params::new(4, 2, FieldSpec::prime(13).unwrap()).unwrap());
        let dealing = deal_random(&layout, &mut ChaCha20Rng::seed_from_u64(5));
        let mut sim = Simulation::from_bundles(&layout, dealing.bundles.clone(), DeliveryOrder::default()).unwrap();
        let codims = |t: &Transcript| -> Vec<usize> {
            (1..=4)
                .map(|i| KnowledgeMatrix::from_view(&adversary_view(t, &[i], &[]).unwrap()).unwrap().codim())
                .collect()
        };
        sim.run_recovery(1, &[2, 3], RecoveryMode::Masked, 0).unwrap();
        let first = codims(sim.transcript());
        for seed in 1..5 {
            sim.run_recovery(1, &[3, 4], RecoveryMode::Masked, seed).unwrap();
            assert_eq!(codims(sim.transcript()), first);
        }
        assert_eq!(first, vec![3; 4]);
    }
}
