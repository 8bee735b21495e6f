//! Exhaustive Shannon-entropy oracle for tiny instances.
//!
//! The dealing is a uniform vector in `F^dim`; each random variable is a
//! list of linear functionals of it. The oracle walks all `|F|^dim` vectors,
//! tabulates the joint values of the queried functionals and returns the
//! exact entropy in bits. Nothing here uses rank arguments, so it can be
//! checked against the knowledge-matrix side.

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::Serialize;

use super::AnalysisError;
use crate::field::{FieldElement, FieldKind, FieldSpec};
use crate::linalg::Echelon;
use crate::poly::vandermonde_row;
use crate::scheme::PointLayout;

/// Largest polynomial space the oracle will enumerate.
pub const ENUMERATION_LIMIT: u128 = 10_000_000;

const DENSE_LIMIT: u128 = 1 << 24;

/// Tolerance used by all entropy comparisons, in bits.
pub const TOLERANCE: f64 = 1e-9;

fn space_size(spec: FieldSpec, dim: usize) -> Result<u128, AnalysisError> {
    let describe = || match spec.order() {
        Some(o) => format!("{o}^{dim} vectors"),
        None => format!("(2^128)^{dim} vectors"),
    };
    let order = spec
        .order()
        .filter(|&o| o <= 1 << 16)
        .ok_or_else(|| AnalysisError::TooLarge {
            size: describe(),
            limit: ENUMERATION_LIMIT,
        })?;
    let mut total: u128 = 1;
    for _ in 0..dim {
        total = total.saturating_mul(order);
        if total > ENUMERATION_LIMIT {
            return Err(AnalysisError::TooLarge {
                size: describe(),
                limit: ENUMERATION_LIMIT,
            });
        }
    }
    Ok(total)
}

/// Joint entropy, in bits, of the functionals `rows` of a uniform vector in
/// `F^dim`.
pub fn brute_entropy(spec: FieldSpec, dim: usize, rows: &[Vec<FieldElement>]) -> Result<f64, AnalysisError> {
    let total = space_size(spec, dim)?;
    let mut seen = HashSet::new();
    let rows: Vec<&Vec<FieldElement>> = rows
        .iter()
        .inspect(|r| assert_eq!(r.len(), dim, "functional width mismatch"))
        .filter(|r| !r.iter().all(FieldElement::is_zero))
        .filter(|r| seen.insert(r.iter().map(|x| x.value()).collect::<Vec<_>>()))
        .collect();
    if rows.is_empty() {
        return Ok(0.0);
    }
    let order = spec.order().expect("checked by space_size");
    let o = order as usize;
    let q = rows.len();

    // delta[(d * o + a) * q + m]: change of functional m when digit d steps
    // from element a to element a + 1 (wrapping to 0).
    let elems: Vec<FieldElement> = (0..order).map(|a| spec.element(a).expect("in range")).collect();
    let mut delta = vec![0u16; dim * o * q];
    for d in 0..dim {
        for a in 0..o {
            let diff = elems[(a + 1) % o] - elems[a];
            for (m, row) in rows.iter().enumerate() {
                delta[(d * o + a) * q + m] = (row[d] * diff).value() as u16;
            }
        }
    }
    let walk = Walk {
        dim,
        order: o,
        q,
        delta: &delta,
        binary: spec.kind() == FieldKind::Binary,
    };

    let key_space = (0..q).try_fold(1u128, |acc, _| acc.checked_mul(order));
    let mut histogram: HashMap<u64, u64> = HashMap::new();
    match key_space {
        Some(space) if space <= DENSE_LIMIT => {
            let mut counts = vec![0u32; space as usize];
            walk.run(|vals| {
                let key = vals.iter().rev().fold(0usize, |acc, &v| acc * o + v as usize);
                counts[key] += 1;
            });
            for &c in counts.iter().filter(|&&c| c > 0) {
                *histogram.entry(c as u64).or_insert(0) += 1;
            }
        }
        Some(_) => {
            let mut counts: HashMap<u128, u64> = HashMap::new();
            walk.run(|vals| {
                let key = vals.iter().rev().fold(0u128, |acc, &v| acc * order + v as u128);
                *counts.entry(key).or_insert(0) += 1;
            });
            for c in counts.into_values() {
                *histogram.entry(c).or_insert(0) += 1;
            }
        }
        None => {
            let mut counts: HashMap<Vec<u16>, u64> = HashMap::new();
            walk.run(|vals| *counts.entry(vals.to_vec()).or_insert(0) += 1);
            for c in counts.into_values() {
                *histogram.entry(c).or_insert(0) += 1;
            }
        }
    }
    Ok(entropy_from_histogram(total, &histogram))
}

/// `H = log2 N - (1/N) sum_c c log2 c` over the outcome counts `c`, given
/// as `count -> number of outcomes with that count`.
fn entropy_from_histogram(total: u128, histogram: &HashMap<u64, u64>) -> f64 {
    let n = total as f64;
    let weighted: f64 = histogram
        .iter()
        .map(|(&c, &times)| times as f64 * c as f64 * (c as f64).log2())
        .sum();
    n.log2() - weighted / n
}

struct Walk<'a> {
    dim: usize,
    order: usize,
    q: usize,
    delta: &'a [u16],
    binary: bool,
}

impl Walk<'_> {
    /// Visit the functional values at every vector of `F^dim`, odometer
    /// order, updating them incrementally.
    fn run(&self, mut visit: impl FnMut(&[u16])) {
        let (o, q) = (self.order, self.q);
        let p = o as u32;
        let mut vals = vec![0u16; q];
        let mut digits = vec![0usize; self.dim];
        loop {
            visit(&vals);
            let mut d = 0;
            loop {
                if d == self.dim {
                    return;
                }
                let a = digits[d];
                let step = &self.delta[(d * o + a) * q..(d * o + a + 1) * q];
                if self.binary {
                    for (v, &s) in vals.iter_mut().zip(step) {
                        *v ^= s;
                    }
                } else {
                    for (v, &s) in vals.iter_mut().zip(step) {
                        let t = *v as u32 + s as u32;
                        *v = if t >= p { t - p } else { t } as u16;
                    }
                }
                if a + 1 < o {
                    digits[d] = a + 1;
                    break;
                }
                digits[d] = 0;
                d += 1;
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ModelVariable {
    pub label: String,
    #[serde(skip)]
    pub rows: Vec<Vec<FieldElement>>,
}

/// Secrets and shares of a linear scheme as functionals of uniform
/// randomness. Variables `0..n` are the secrets, `n..2n` the shares.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchemeModel {
    name: String,
    spec: FieldSpec,
    dim: usize,
    n: usize,
    k: usize,
    variables: Vec<ModelVariable>,
}

impl SchemeModel {
    /// The real scheme: secret `i` is `r(x_{i,0})`, share `i` the values at
    /// `x_{i,1}, ..., x_{i,n-k}`.
    pub fn gruppen(layout: &PointLayout) -> Self {
        let params = layout.params();
        let dim = params.degree_bound();
        let point = |i, j| vandermonde_row(layout.point(i, j), dim);
        let mut variables: Vec<ModelVariable> = params
            .participants()
            .map(|i| ModelVariable {
                label: format!("s{i}"),
                rows: vec![point(i, 0)],
            })
            .collect();
        variables.extend(params.participants().map(|i| ModelVariable {
            label: format!("share{i}"),
            rows: (1..params.slots()).map(|j| point(i, j)).collect(),
        }));
        SchemeModel {
            name: format!("gruppen n={} k={} {}", params.n(), params.k(), layout.id()),
            spec: params.spec(),
            dim,
            n: params.n(),
            k: params.k(),
            variables,
        }
    }

    /// Three independent uniform secrets `a, b, c`; the shares are the sums
    /// of the other two secrets (`c+b`, `a+c`, `b+a`). Every pair can
    /// recover every secret, but each share alone already links the other
    /// two secrets.
    pub fn xor_sabotage(spec: FieldSpec) -> Self {
        let unit = |m: usize| -> Vec<FieldElement> {
            (0..3).map(|d| if d == m { spec.one() } else { spec.zero() }).collect()
        };
        let sum = |a: usize, b: usize| -> Vec<FieldElement> {
            unit(a).iter().zip(unit(b)).map(|(&x, y)| x + y).collect()
        };
        let mut variables: Vec<ModelVariable> = (0..3)
            .map(|m| ModelVariable {
                label: format!("s{}", m + 1),
                rows: vec![unit(m)],
            })
            .collect();
        variables.extend((0..3).map(|m| ModelVariable {
            label: format!("share{}", m + 1),
            rows: vec![sum((m + 1) % 3, (m + 2) % 3)],
        }));
        SchemeModel {
            name: "xor-sabotage n=3 k=2".into(),
            spec,
            dim: 3,
            n: 3,
            k: 2,
            variables,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn variables(&self) -> &[ModelVariable] {
        &self.variables
    }

    pub fn secret(&self, i: usize) -> usize {
        i - 1
    }

    pub fn share(&self, i: usize) -> usize {
        self.n + i - 1
    }

    /// Secret and share of participant `i`.
    pub fn participant(&self, i: usize) -> [usize; 2] {
        [self.secret(i), self.share(i)]
    }

    /// `log2 |F|`, the size of one secret in bits.
    pub fn unit_bits(&self) -> f64 {
        match self.spec.order() {
            Some(o) => (o as f64).log2(),
            None => 128.0,
        }
    }

    /// Number of vectors the oracle enumerates, or the refusal.
    pub fn space_size(&self) -> Result<u128, AnalysisError> {
        space_size(self.spec, self.dim)
    }

    fn rows_of(&self, vars: &[usize]) -> Vec<Vec<FieldElement>> {
        vars.iter().flat_map(|&v| self.variables[v].rows.iter().cloned()).collect()
    }
}

/// Caching front end over [`brute_entropy`] for one model.
#[derive(Debug, Clone)]
pub struct EntropyOracle<'m> {
    model: &'m SchemeModel,
    cache: BTreeMap<Vec<usize>, f64>,
}

fn normalize(vars: &[usize]) -> Vec<usize> {
    let mut key = vars.to_vec();
    key.sort_unstable();
    key.dedup();
    key
}

impl<'m> EntropyOracle<'m> {
    pub fn new(model: &'m SchemeModel) -> Result<Self, AnalysisError> {
        model.space_size()?;
        Ok(EntropyOracle {
            model,
            cache: BTreeMap::new(),
        })
    }

    pub fn model(&self) -> &SchemeModel {
        self.model
    }

    /// `f(vars)`: joint entropy of the listed variables.
    pub fn entropy(&mut self, vars: &[usize]) -> Result<f64, AnalysisError> {
        let key = normalize(vars);
        if let Some(&h) = self.cache.get(&key) {
            return Ok(h);
        }
        let h = brute_entropy(self.model.spec, self.model.dim, &self.model.rows_of(&key))?;
        self.cache.insert(key, h);
        Ok(h)
    }

    /// `H(target | given) = f(target given) - f(given)`.
    pub fn conditional(&mut self, target: &[usize], given: &[usize]) -> Result<f64, AnalysisError> {
        let joint: Vec<usize> = target.iter().chain(given).copied().collect();
        Ok(self.entropy(&joint)? - self.entropy(given)?)
    }

    /// Query every subset of the model's variables.
    pub fn fill_lattice(&mut self) -> Result<(), AnalysisError> {
        let m = self.model.variables.len();
        for mask in 0u32..1 << m {
            let vars: Vec<usize> = (0..m).filter(|v| mask >> v & 1 == 1).collect();
            self.entropy(&vars)?;
        }
        Ok(())
    }

    /// Share-size bound checks for every coalition `G` of `k - 1` participants and
    /// every outsider `a`; `b` ranges over the remaining outsiders.
    pub fn share_bound_checks(&mut self) -> Result<Vec<ShareBoundCheck>, AnalysisError> {
        let (n, k) = (self.model.n, self.model.k);
        let mut out = Vec::new();
        for mask in 0u32..1 << n {
            if mask.count_ones() as usize != k - 1 {
                continue;
            }
            let coalition: Vec<usize> = (1..=n).filter(|i| mask >> (i - 1) & 1 == 1).collect();
            let g: Vec<usize> = coalition.iter().flat_map(|&i| self.model.participant(i)).collect();
            for a in (1..=n).filter(|i| !coalition.contains(i)) {
                let others: Vec<usize> = (1..=n).filter(|i| *i != a && !coalition.contains(i)).collect();
                let sa = self.model.secret(a);
                let j = self.model.share(a);
                let mut a_bbar: Vec<usize> = others.iter().map(|&b| self.model.secret(b)).collect();
                a_bbar.push(sa);
                let lhs = self.entropy(&[sa])? + self.entropy(&[j])?;
                let rhs = self.entropy(&a_bbar)?;
                let with = |extra: &[usize]| -> Vec<usize> { a_bbar.iter().chain(extra).copied().collect() };
                let ajg: Vec<usize> = [sa, j].iter().chain(&g).copied().collect();
                let determines = (self.entropy(&ajg)? - self.entropy(&with(&[&[j][..], &g].concat()))?).abs() <= TOLERANCE;
                let independent =
                    (self.entropy(&with(&g))? - rhs - self.entropy(&g)?).abs() <= TOLERANCE;
                out.push(ShareBoundCheck {
                    coalition: coalition.clone(),
                    a,
                    others,
                    lhs,
                    rhs,
                    holds: lhs + TOLERANCE >= rhs,
                    determines,
                    independent,
                });
            }
        }
        Ok(out)
    }

    pub fn report(&self) -> EntropyReport {
        EntropyReport {
            model: self.model.name.clone(),
            field: self.model.spec.to_string(),
            unit_bits: self.model.unit_bits(),
            entries: self
                .cache
                .iter()
                .map(|(vars, &bits)| EntropyEntry {
                    variables: vars.iter().map(|&v| self.model.variables[v].label.clone()).collect(),
                    indices: vars.clone(),
                    bits,
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntropyEntry {
    pub variables: Vec<String>,
    pub indices: Vec<usize>,
    pub bits: f64,
}

/// The entropy function `f` on every queried set.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntropyReport {
    pub model: String,
    pub field: String,
    pub unit_bits: f64,
    pub entries: Vec<EntropyEntry>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct AxiomCheck {
    pub positivity: bool,
    pub monotonicity: bool,
    pub additivity: bool,
    /// Pairs `X, Y` of queried sets compared for monotonicity and
    /// additivity (the latter needs `XY` to be queried too).
    pub pairs_checked: usize,
}

impl AxiomCheck {
    pub fn holds(&self) -> bool {
        self.positivity && self.monotonicity && self.additivity
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShareBoundCheck {
    pub coalition: Vec<usize>,
    pub a: usize,
    pub others: Vec<usize>,
    /// `f(a) + f(j)`.
    pub lhs: f64,
    /// `f(a b)`.
    pub rhs: f64,
    pub holds: bool,
    /// `f(a j G) = f(a b j G)`: the coalition with `a`'s data determines the
    /// remaining secrets.
    pub determines: bool,
    /// `f(a b G) = f(a b) + f(G)`: the coalition learns nothing about the
    /// outsiders' secrets.
    pub independent: bool,
}

impl EntropyReport {
    pub fn value(&self, vars: &[usize]) -> Option<f64> {
        let key = normalize(vars);
        self.entries.iter().find(|e| e.indices == key).map(|e| e.bits)
    }

    pub fn check_axioms(&self) -> AxiomCheck {
        let lookup: HashMap<&[usize], f64> = self.entries.iter().map(|e| (e.indices.as_slice(), e.bits)).collect();
        let mut check = AxiomCheck {
            positivity: self.entries.iter().all(|e| e.bits >= -TOLERANCE),
            monotonicity: true,
            additivity: true,
            pairs_checked: 0,
        };
        for x in &self.entries {
            for y in &self.entries {
                check.pairs_checked += 1;
                if x.indices.iter().all(|v| y.indices.contains(v)) && x.bits > y.bits + TOLERANCE {
                    check.monotonicity = false;
                }
                let union = normalize(&[x.indices.as_slice(), y.indices.as_slice()].concat());
                if let Some(&xy) = lookup.get(union.as_slice()) {
                    if x.bits + y.bits + TOLERANCE < xy {
                        check.additivity = false;
                    }
                }
            }
        }
        check
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PerfectnessCheck {
    pub coalition: Vec<usize>,
    pub target: usize,
    /// `H(s_target | coalition data, all other secrets)`.
    pub bits: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PerfectnessReport {
    pub model: String,
    pub field: String,
    pub expected_bits: f64,
    pub tolerance: f64,
    pub checks: Vec<PerfectnessCheck>,
    pub pass: bool,
}

/// For every coalition `B` of at most `k - 1` participants and every
/// `i` outside it: `H(s_i | data of B, s_j for all j != i) = log2 |F|`.
pub fn verify_perfectness(model: &SchemeModel) -> Result<PerfectnessReport, AnalysisError> {
    let mut oracle = EntropyOracle::new(model)?;
    let (n, k) = (model.n, model.k);
    let expected = model.unit_bits();
    let mut checks = Vec::new();
    for mask in 0u32..1 << n {
        if mask.count_ones() as usize >= k {
            continue;
        }
        let coalition: Vec<usize> = (1..=n).filter(|i| mask >> (i - 1) & 1 == 1).collect();
        for target in (1..=n).filter(|i| !coalition.contains(i)) {
            let mut given: Vec<usize> = coalition.iter().flat_map(|&i| model.participant(i)).collect();
            given.extend((1..=n).filter(|&j| j != target).map(|j| model.secret(j)));
            let bits = oracle.conditional(&[model.secret(target)], &given)?;
            checks.push(PerfectnessCheck {
                coalition: coalition.clone(),
                target,
                bits,
                pass: (bits - expected).abs() <= TOLERANCE,
            });
        }
    }
    Ok(PerfectnessReport {
        model: model.name.clone(),
        field: model.spec.to_string(),
        expected_bits: expected,
        tolerance: TOLERANCE,
        pass: checks.iter().all(|c| c.pass),
        checks,
    })
}

/// What a coalition learns from one honest participant's setup messages.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SetupRankCheck {
    pub coalition: Vec<usize>,
    pub honest: usize,
    /// Rank of the received functionals on the honest participant's
    /// constrained space (modulo the secret-point constraints).
    pub rank: usize,
    /// `|coalition| (n-k)`, the number of values received.
    pub expected: usize,
    /// The honest secret is not determined by the received values and the
    /// zero constraints at every other secret point.
    pub secret_hidden: bool,
}

impl SetupRankCheck {
    pub fn pass(&self) -> bool {
        self.rank == self.expected && self.secret_hidden
    }
}

/// Rank test for dealerless setup: the coalition receives `h_{honest, m}`
/// for each member `m`, evaluations of a polynomial known to vanish at every
/// other secret point.
pub fn setup_coalition_check(
    layout: &PointLayout,
    coalition: &[usize],
    honest: usize,
) -> Result<SetupRankCheck, AnalysisError> {
    let params = layout.params();
    for &i in coalition.iter().chain([&honest]) {
        if i == 0 || i > params.n() {
            return Err(AnalysisError::UnknownParticipant(i));
        }
    }
    let dim = params.degree_bound();
    let spec = params.spec();
    let secrets: Vec<Vec<FieldElement>> = params
        .participants()
        .map(|i| vandermonde_row(layout.secret_point(i), dim))
        .collect();
    let received: Vec<Vec<FieldElement>> = coalition
        .iter()
        .flat_map(|&m| (1..params.slots()).map(move |j| vandermonde_row(layout.point(m, j), dim)))
        .collect();

    let mut all = Echelon::from_rows(spec, dim, &secrets);
    let base = all.rank();
    for row in &received {
        all.insert(row);
    }
    let mut known = Echelon::from_rows(
        spec,
        dim,
        secrets
            .iter()
            .enumerate()
            .filter(|(m, _)| m + 1 != honest)
            .map(|(_, r)| r),
    );
    for row in &received {
        known.insert(row);
    }
    Ok(SetupRankCheck {
        coalition: coalition.to_vec(),
        honest,
        rank: all.rank() - base,
        expected: coalition.len() * params.share_len(),
        secret_hidden: !known.contains(&secrets[honest - 1]),
    })
}
