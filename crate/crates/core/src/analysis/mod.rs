//! Exact security bookkeeping.
//!
//! A uniformly random dealing polynomial is a uniform vector in `F^D`,
//! `D = k(n-k+1)`, and every value a participant sees is a fixed linear
//! functional of it. A coalition's knowledge is the span of its functionals;
//! its codimension is what remains secret. Masked contributions also depend
//! on mask variables, so the space is extended with one column per mask and
//! knowledge about the polynomial is the part of the span with zero mask
//! component.

mod entropy;

pub use entropy::{
    brute_entropy, setup_coalition_check, verify_perfectness, AxiomCheck, EntropyOracle, EntropyReport,
    ShareBoundCheck, ModelVariable, PerfectnessCheck, PerfectnessReport, SchemeModel, SetupRankCheck,
    ENUMERATION_LIMIT, TOLERANCE,
};

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::field::{FieldElement, FieldSpec};
use crate::linalg::{left_kernel, Echelon};
use crate::poly::vandermonde_row;
use crate::recovery::{RecoveryError, RecoverySession};
use crate::scheme::PointLayout;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error(transparent)]
    Recovery(#[from] RecoveryError),
    #[error("view refers to unknown session {0}")]
    UnknownSession(usize),
    #[error("view item {0} cannot be expressed as a linear functional")]
    NotLinearizable(String),
    #[error("session {0} uses a different layout than the view")]
    LayoutMismatch(usize),
    #[error("exhaustive enumeration of {size} would exceed the limit of {limit}")]
    TooLarge { size: String, limit: u128 },
    #[error("coalition member {0} does not exist")]
    UnknownParticipant(usize),
}

/// One value known to an observer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ViewItem {
    /// `r(x_{participant, slot})`; slot 0 is the secret.
    Point { participant: usize, slot: usize },
    /// The value `from` sent in `session` for requester slot `slot`. Masked
    /// when the session is.
    Contribution { session: usize, from: usize, slot: usize },
    /// The mask `r_{from,to}` of `session` for `slot`.
    Mask {
        session: usize,
        from: usize,
        to: usize,
        slot: usize,
    },
}

impl fmt::Display for ViewItem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            ViewItem::Point { participant, slot: 0 } => write!(f, "secret({participant})"),
            ViewItem::Point { participant, slot } => write!(f, "share({participant},{slot})"),
            ViewItem::Contribution { session, from, slot } => {
                write!(f, "contribution(session {session}, from {from}, slot {slot})")
            }
            ViewItem::Mask {
                session,
                from,
                to,
                slot,
            } => write!(f, "mask(session {session}, {from}->{to}, slot {slot})"),
        }
    }
}

/// Everything an observer saw, with the sessions needed to interpret it.
#[derive(Debug, Clone)]
pub struct View {
    layout: PointLayout,
    sessions: BTreeMap<usize, RecoverySession>,
    items: Vec<ViewItem>,
}

impl View {
    pub fn new(layout: &PointLayout) -> Self {
        View {
            layout: layout.clone(),
            sessions: BTreeMap::new(),
            items: Vec::new(),
        }
    }

    pub fn layout(&self) -> &PointLayout {
        &self.layout
    }

    pub fn add_session(&mut self, id: usize, session: RecoverySession) -> &mut Self {
        self.sessions.insert(id, session);
        self
    }

    pub fn sessions(&self) -> &BTreeMap<usize, RecoverySession> {
        &self.sessions
    }

    pub fn push(&mut self, item: ViewItem) -> &mut Self {
        self.items.push(item);
        self
    }

    /// Secret and shares of participant `i`.
    pub fn push_participant(&mut self, i: usize) -> &mut Self {
        for slot in 0..self.layout.params().slots() {
            self.items.push(ViewItem::Point { participant: i, slot });
        }
        self
    }

    pub fn push_shares(&mut self, i: usize) -> &mut Self {
        for slot in 1..self.layout.params().slots() {
            self.items.push(ViewItem::Point { participant: i, slot });
        }
        self
    }

    pub fn push_secret(&mut self, i: usize) -> &mut Self {
        self.push(ViewItem::Point { participant: i, slot: 0 })
    }

    pub fn items(&self) -> &[ViewItem] {
        &self.items
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }
}

/// Known values as rows over `F^D x F^masks`.
#[derive(Debug, Clone)]
pub struct KnowledgeMatrix {
    spec: FieldSpec,
    dim: usize,
    mask_columns: usize,
    labels: Vec<String>,
    rows: Vec<Vec<FieldElement>>,
}

impl KnowledgeMatrix {
    /// Empty matrix over the coefficient space of `layout`, no mask columns.
    pub fn new(layout: &PointLayout) -> Self {
        KnowledgeMatrix {
            spec: layout.spec(),
            dim: layout.params().degree_bound(),
            mask_columns: 0,
            labels: Vec::new(),
            rows: Vec::new(),
        }
    }

    pub fn from_view(view: &View) -> Result<Self, AnalysisError> {
        let layout = &view.layout;
        let params = layout.params();
        let dim = params.degree_bound();
        let spec = layout.spec();

        // Mask columns: every ordered member pair of every masked session.
        let mut offsets = BTreeMap::new();
        let mut mask_columns = 0;
        for (&id, session) in &view.sessions {
            if session.layout() != layout {
                return Err(AnalysisError::LayoutMismatch(id));
            }
            if session.mode().is_masked() {
                offsets.insert(id, mask_columns);
                mask_columns += session.target_slots() * session.quorum().len().pow(2);
            }
        }
        let mask_index = |id: usize, session: &RecoverySession, slot: usize, from: usize, to: usize| {
            let q = session.quorum();
            let k = q.len();
            let f = q.iter().position(|&m| m == from)?;
            let t = q.iter().position(|&m| m == to)?;
            Some(dim + offsets[&id] + slot * k * k + f * k + t)
        };

        let width = dim + mask_columns;
        let mut km = KnowledgeMatrix {
            spec,
            dim,
            mask_columns,
            labels: Vec::new(),
            rows: Vec::new(),
        };
        for item in &view.items {
            let bad = || AnalysisError::NotLinearizable(item.to_string());
            let mut row = vec![spec.zero(); width];
            match *item {
                ViewItem::Point { participant, slot } => {
                    if participant == 0 || participant > params.n() || slot >= params.slots() {
                        return Err(bad());
                    }
                    row[..dim].copy_from_slice(&vandermonde_row(layout.point(participant, slot), dim));
                }
                ViewItem::Contribution { session: id, from, slot } => {
                    let session = view.sessions.get(&id).ok_or(AnalysisError::UnknownSession(id))?;
                    if slot >= session.target_slots() {
                        return Err(bad());
                    }
                    let functional = session.contribution_functional(from, slot).map_err(|_| bad())?;
                    row[..dim].copy_from_slice(&functional);
                    if session.mode().is_masked() {
                        for &j in session.quorum() {
                            let out = mask_index(id, session, slot, from, j).ok_or_else(bad)?;
                            let back = mask_index(id, session, slot, j, from).ok_or_else(bad)?;
                            row[out] += spec.one();
                            row[back] -= spec.one();
                        }
                    }
                }
                ViewItem::Mask {
                    session: id,
                    from,
                    to,
                    slot,
                } => {
                    let session = view.sessions.get(&id).ok_or(AnalysisError::UnknownSession(id))?;
                    if !session.mode().is_masked() || slot >= session.target_slots() {
                        return Err(bad());
                    }
                    row[mask_index(id, session, slot, from, to).ok_or_else(bad)?] = spec.one();
                }
            }
            km.labels.push(item.to_string());
            km.rows.push(row);
        }
        Ok(km)
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    /// `D`, the dimension of the coefficient space.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn mask_columns(&self) -> usize {
        self.mask_columns
    }

    pub fn width(&self) -> usize {
        self.dim + self.mask_columns
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Rows over the extended space.
    pub fn rows(&self) -> &[Vec<FieldElement>] {
        &self.rows
    }

    /// Append a functional on the coefficient space.
    pub fn push(&mut self, label: impl Into<String>, functional: &[FieldElement]) {
        assert_eq!(functional.len(), self.dim, "functional width mismatch");
        let mut row = functional.to_vec();
        row.resize(self.width(), self.spec.zero());
        self.labels.push(label.into());
        self.rows.push(row);
    }

    fn echelon(&self) -> Echelon {
        Echelon::from_rows(self.spec, self.width(), &self.rows)
    }

    /// Rank over the extended space, masks included.
    pub fn total_rank(&self) -> usize {
        self.echelon().rank()
    }

    /// Dimension of what is known about the polynomial itself.
    pub fn rank(&self) -> usize {
        let masks: Vec<Vec<FieldElement>> = self.rows.iter().map(|r| r[self.dim..].to_vec()).collect();
        self.total_rank() - Echelon::from_rows(self.spec, self.mask_columns, &masks).rank()
    }

    pub fn codim(&self) -> usize {
        self.dim - self.rank()
    }

    fn extend(&self, functional: &[FieldElement]) -> Vec<FieldElement> {
        assert_eq!(functional.len(), self.dim, "functional width mismatch");
        let mut row = functional.to_vec();
        row.resize(self.width(), self.spec.zero());
        row
    }

    /// Whether the value of `functional` is determined by the known values.
    pub fn contains(&self, functional: &[FieldElement]) -> bool {
        self.echelon().contains(&self.extend(functional))
    }

    /// Basis of the combinations `c` with `sum c_m targets[m]` determined by
    /// the known values.
    pub fn leaked_combinations(&self, targets: &[Vec<FieldElement>]) -> Vec<Vec<FieldElement>> {
        let echelon = self.echelon();
        let residues: Vec<Vec<FieldElement>> = targets.iter().map(|t| echelon.reduce(&self.extend(t))).collect();
        left_kernel(self.spec, self.width(), &residues)
    }

    /// One nontrivial leaked combination, scaled so its last nonzero
    /// coefficient is 1; `None` when only the trivial one is known.
    pub fn leaked_combination(&self, targets: &[Vec<FieldElement>]) -> Option<Vec<FieldElement>> {
        let mut c = self.leaked_combinations(targets).into_iter().next()?;
        let last = *c.iter().rev().find(|x| !x.is_zero())?;
        let scale = last.inv().expect("nonzero");
        for x in c.iter_mut() {
            *x *= scale;
        }
        Some(c)
    }
}

/// The Vandermonde row of participant `i`'s secret point.
pub fn secret_row(layout: &PointLayout, i: usize) -> Vec<FieldElement> {
    vandermonde_row(layout.secret_point(i), layout.params().degree_bound())
}

/// Rank and codimension of a coalition's view, for reports.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RankReport {
    pub rows: usize,
    pub rank: usize,
    pub total_rank: usize,
    pub codim: usize,
    pub dim: usize,
    /// Participants whose secrets the view determines.
    pub determined_secrets: Vec<usize>,
    /// A nontrivial combination of the non-determined secrets the view
    /// determines, as `(participant, coefficient hex)` pairs.
    pub leaked_combination: Option<Vec<(usize, String)>>,
}

pub fn rank_report(view: &View) -> Result<RankReport, AnalysisError> {
    let km = KnowledgeMatrix::from_view(view)?;
    let layout = view.layout();
    let n = layout.params().n();
    let (determined, hidden): (Vec<usize>, Vec<usize>) =
        (1..=n).partition(|&i| km.contains(&secret_row(layout, i)));
    let targets: Vec<_> = hidden.iter().map(|&i| secret_row(layout, i)).collect();
    let leaked_combination = km.leaked_combination(&targets).map(|c| {
        hidden
            .iter()
            .zip(c)
            .filter(|(_, x)| !x.is_zero())
            .map(|(&i, x)| (i, x.to_hex()))
            .collect()
    });
    Ok(RankReport {
        rows: km.rows().len(),
        rank: km.rank(),
        total_rank: km.total_rank(),
        codim: km.codim(),
        dim: km.dim(),
        determined_secrets: determined,
        leaked_combination,
    })
}
