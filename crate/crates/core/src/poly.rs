//! Polynomials over a [`FieldSpec`]: evaluation, Lagrange coefficients,
//! interpolation and uniform sampling subject to point constraints.

use rand::RngCore;
use thiserror::Error;

use crate::field::{FieldElement, FieldError, FieldSpec};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("interpolation nodes are not pairwise distinct ({0} repeats)")]
    DuplicateNode(FieldElement),
    #[error("{constraints} constraints exceed the degree bound {bound}")]
    TooManyConstraints { constraints: usize, bound: usize },
    #[error("field {spec} has fewer than {needed} elements")]
    InsufficientField { spec: FieldSpec, needed: usize },
    #[error("expected {expected} free values, got {got}")]
    FreeValueCount { expected: usize, got: usize },
    #[error("no interpolation points given")]
    Empty,
}

/// A polynomial of degree `< degree_bound`, stored as `degree_bound`
/// coefficients (index = power; trailing zeros allowed).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    spec: FieldSpec,
    coeffs: Vec<FieldElement>,
}

impl Poly {
    pub fn new(spec: FieldSpec, coeffs: Vec<FieldElement>) -> Result<Self, PolyError> {
        for c in &coeffs {
            if c.spec() != spec {
                return Err(FieldError::Mismatch {
                    left: spec,
                    right: c.spec(),
                }
                .into());
            }
        }
        Ok(Poly { spec, coeffs })
    }

    pub fn zero(spec: FieldSpec, degree_bound: usize) -> Self {
        Poly {
            spec,
            coeffs: vec![spec.zero(); degree_bound],
        }
    }

    /// Uniformly random polynomial of degree `< degree_bound`.
    pub fn random<R: RngCore + ?Sized>(spec: FieldSpec, degree_bound: usize, rng: &mut R) -> Self {
        Poly {
            spec,
            coeffs: (0..degree_bound).map(|_| spec.random(rng)).collect(),
        }
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    pub fn degree_bound(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    /// Horner evaluation.
    pub fn eval(&self, x: FieldElement) -> Result<FieldElement, PolyError> {
        if x.spec() != self.spec {
            return Err(FieldError::Mismatch {
                left: self.spec,
                right: x.spec(),
            }
            .into());
        }
        Ok(self
            .coeffs
            .iter()
            .rev()
            .fold(self.spec.zero(), |acc, &c| acc * x + c))
    }

    /// Coefficient-wise sum. Both operands must share field and degree bound.
    pub fn checked_add(&self, other: &Poly) -> Result<Poly, PolyError> {
        if self.spec != other.spec {
            return Err(FieldError::Mismatch {
                left: self.spec,
                right: other.spec,
            }
            .into());
        }
        let len = self.coeffs.len().max(other.coeffs.len());
        let at = |p: &Poly, i: usize| p.coeffs.get(i).copied().unwrap_or(p.spec.zero());
        Ok(Poly {
            spec: self.spec,
            coeffs: (0..len).map(|i| at(self, i) + at(other, i)).collect(),
        })
    }
}

/// `(1, x, x^2, ..., x^(width-1))`: the functional "value at `x`" on
/// coefficient vectors.
pub fn vandermonde_row(x: FieldElement, width: usize) -> Vec<FieldElement> {
    let mut row = Vec::with_capacity(width);
    let mut power = x.spec().one();
    for _ in 0..width {
        row.push(power);
        power *= x;
    }
    row
}

/// Lagrange weights expressing `q(target)` through `q(nodes[m])` for every
/// polynomial `q` of degree `< nodes.len()`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LagrangeRow {
    pub nodes: Vec<FieldElement>,
    pub target: FieldElement,
    pub lambdas: Vec<FieldElement>,
}

impl LagrangeRow {
    /// `sum_m lambdas[m] * values[m]`.
    pub fn apply(&self, values: &[FieldElement]) -> FieldElement {
        assert_eq!(values.len(), self.lambdas.len());
        self.lambdas
            .iter()
            .zip(values)
            .fold(self.target.spec().zero(), |acc, (&l, &v)| acc + l * v)
    }
}

fn check_nodes(nodes: &[FieldElement]) -> Result<FieldSpec, PolyError> {
    let spec = nodes.first().ok_or(PolyError::Empty)?.spec();
    for (m, a) in nodes.iter().enumerate() {
        if a.spec() != spec {
            return Err(FieldError::Mismatch {
                left: spec,
                right: a.spec(),
            }
            .into());
        }
        if nodes[..m].contains(a) {
            return Err(PolyError::DuplicateNode(*a));
        }
    }
    Ok(spec)
}

/// `lambdas[m] = prod_{m' != m} (target - nodes[m']) / (nodes[m] - nodes[m'])`.
pub fn lagrange_coefficients(
    nodes: &[FieldElement],
    target: FieldElement,
) -> Result<LagrangeRow, PolyError> {
    let spec = check_nodes(nodes)?;
    if target.spec() != spec {
        return Err(FieldError::Mismatch {
            left: spec,
            right: target.spec(),
        }
        .into());
    }
    let lambdas = nodes
        .iter()
        .enumerate()
        .map(|(m, &xm)| {
            let (num, den) = nodes
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != m)
                .fold((spec.one(), spec.one()), |(num, den), (_, &xj)| {
                    (num * (target - xj), den * (xm - xj))
                });
            Ok(num * den.inv()?)
        })
        .collect::<Result<Vec<_>, FieldError>>()?;
    Ok(LagrangeRow {
        nodes: nodes.to_vec(),
        target,
        lambdas,
    })
}

/// The unique polynomial of degree `< points.len()` through `points`.
pub fn interpolate(points: &[(FieldElement, FieldElement)]) -> Result<Poly, PolyError> {
    let xs: Vec<FieldElement> = points.iter().map(|p| p.0).collect();
    let spec = check_nodes(&xs)?;
    let n = points.len();

    // master(x) = prod (x - x_m), coefficients low to high, degree n.
    let mut master = vec![spec.one()];
    for &xm in &xs {
        let mut next = vec![spec.zero(); master.len() + 1];
        for (i, &c) in master.iter().enumerate() {
            next[i + 1] += c;
            next[i] -= c * xm;
        }
        master = next;
    }

    let mut coeffs = vec![spec.zero(); n];
    for (m, &(xm, ym)) in points.iter().enumerate() {
        if ym.spec() != spec {
            return Err(FieldError::Mismatch {
                left: spec,
                right: ym.spec(),
            }
            .into());
        }
        // basis(x) = master(x) / (x - x_m) by synthetic division.
        let mut basis = vec![spec.zero(); n];
        let mut carry = spec.zero();
        for i in (0..n).rev() {
            carry = master[i + 1] + carry * xm;
            basis[i] = carry;
        }
        let denom = xs
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != m)
            .fold(spec.one(), |acc, (_, &xj)| acc * (xm - xj));
        let scale = ym * denom.inv()?;
        for (c, b) in coeffs.iter_mut().zip(&basis) {
            *c += scale * *b;
        }
    }
    Ok(Poly { spec, coeffs })
}

/// The `degree_bound - constraints.len()` auxiliary nodes used by
/// constrained sampling: the lowest canonical representatives not taken by a
/// constraint.
pub fn free_nodes(
    spec: FieldSpec,
    degree_bound: usize,
    constraints: &[(FieldElement, FieldElement)],
) -> Result<Vec<FieldElement>, PolyError> {
    if constraints.len() > degree_bound {
        return Err(PolyError::TooManyConstraints {
            constraints: constraints.len(),
            bound: degree_bound,
        });
    }
    if !spec.order_exceeds(degree_bound as u128 - 1) {
        return Err(PolyError::InsufficientField {
            spec,
            needed: degree_bound,
        });
    }
    let wanted = degree_bound - constraints.len();
    let mut nodes = Vec::with_capacity(wanted);
    let mut candidate = 0u128;
    while nodes.len() < wanted {
        let x = spec.element(candidate)?;
        if !constraints.iter().any(|c| c.0 == x) {
            nodes.push(x);
        }
        candidate += 1;
    }
    Ok(nodes)
}

/// The polynomial of degree `< degree_bound` meeting `constraints` and taking
/// `free_values[m]` at the m-th free node. For fixed constraints this is a
/// bijection from free-value vectors onto the admissible polynomials.
pub fn constrained_from_free_values(
    spec: FieldSpec,
    degree_bound: usize,
    constraints: &[(FieldElement, FieldElement)],
    free_values: &[FieldElement],
) -> Result<Poly, PolyError> {
    let nodes = free_nodes(spec, degree_bound, constraints)?;
    if nodes.len() != free_values.len() {
        return Err(PolyError::FreeValueCount {
            expected: nodes.len(),
            got: free_values.len(),
        });
    }
    if degree_bound == 0 {
        return Ok(Poly::zero(spec, 0));
    }
    let mut points = constraints.to_vec();
    points.extend(nodes.into_iter().zip(free_values.iter().copied()));
    interpolate(&points)
}

/// Uniform sample from the polynomials of degree `< degree_bound` that meet
/// every constraint.
pub fn random_constrained<R: RngCore + ?Sized>(
    spec: FieldSpec,
    degree_bound: usize,
    constraints: &[(FieldElement, FieldElement)],
    rng: &mut R,
) -> Result<Poly, PolyError> {
    let free = degree_bound.saturating_sub(constraints.len());
    let values: Vec<FieldElement> = (0..free).map(|_| spec.random(rng)).collect();
    constrained_from_free_values(spec, degree_bound, constraints, &values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;
    use std::collections::HashSet;

    fn gf(p: u64) -> FieldSpec {
        FieldSpec::prime(p).unwrap()
    }

    fn ints(spec: FieldSpec, v: &[i64]) -> Vec<FieldElement> {
        v.iter().map(|&x| spec.from_integer(x)).collect()
    }

    /// Direct sum of c_i x^i, independent of Horner.
    fn power_sum(p: &Poly, x: FieldElement) -> FieldElement {
        p.coeffs()
            .iter()
            .enumerate()
            .fold(x.spec().zero(), |acc, (i, &c)| acc + c * x.pow(i as u128))
    }

    #[test]
    fn eval_examples() {
        let f = gf(7);
        let r = Poly::new(f, ints(f, &[2, 0, 1])).unwrap();
        assert_eq!(r.eval(f.from_integer(3)).unwrap(), f.from_integer(4));
        assert_eq!(r.eval(f.zero()).unwrap(), f.from_integer(2));
        assert_eq!(Poly::zero(f, 5).eval(f.from_integer(6)).unwrap(), f.zero());
        let g = gf(13);
        assert!(r.eval(g.one()).is_err());
    }

    #[test]
    fn horner_matches_power_sum() {
        let mut rng = ChaCha20Rng::seed_from_u64(5);
        for spec in [gf(13), FieldSpec::binary(8).unwrap()] {
            for _ in 0..200 {
                let r = Poly::random(spec, 7, &mut rng);
                let x = spec.random(&mut rng);
                assert_eq!(r.eval(x).unwrap(), power_sum(&r, x));
            }
        }
    }

    #[test]
    fn lagrange_worked_fixture() {
        // Nodes 1,4,2,5: target 0 gives (10/3, 5/3, -10/3, -2/3) and target 3
        // gives (-1/6, 2/3, 2/3, -1/6).
        for p in [13, 31, 7] {
            let f = gf(p);
            let nodes = ints(f, &[1, 4, 2, 5]);
            let at0 = lagrange_coefficients(&nodes, f.zero()).unwrap();
            let want0: Vec<_> = [(10, 3), (5, 3), (-10, 3), (-2, 3)]
                .iter()
                .map(|&(a, b)| f.ratio(a, b).unwrap())
                .collect();
            assert_eq!(at0.lambdas, want0);
            let at3 = lagrange_coefficients(&nodes, f.from_integer(3)).unwrap();
            let want3: Vec<_> = [(-1, 6), (2, 3), (2, 3), (-1, 6)]
                .iter()
                .map(|&(a, b)| f.ratio(a, b).unwrap())
                .collect();
            assert_eq!(at3.lambdas, want3);
        }
    }

    #[test]
    fn lagrange_at_node_is_indicator() {
        let f = gf(31);
        let nodes = ints(f, &[3, 9, 1, 20]);
        for (m, &x) in nodes.iter().enumerate() {
            let row = lagrange_coefficients(&nodes, x).unwrap();
            for (j, l) in row.lambdas.iter().enumerate() {
                assert_eq!(*l, if j == m { f.one() } else { f.zero() });
            }
        }
    }

    #[test]
    fn duplicate_nodes_rejected() {
        let f = gf(13);
        let nodes = ints(f, &[1, 2, 1]);
        assert!(matches!(
            lagrange_coefficients(&nodes, f.zero()),
            Err(PolyError::DuplicateNode(_))
        ));
        let pts: Vec<_> = nodes.iter().map(|&x| (x, x)).collect();
        assert!(matches!(interpolate(&pts), Err(PolyError::DuplicateNode(_))));
        assert_eq!(interpolate(&[]), Err(PolyError::Empty));
    }

    #[test]
    fn interpolation_round_trips() {
        let f = gf(13);
        let a = f.from_integer(9);
        let constant = interpolate(&[(f.zero(), a)]).unwrap();
        assert_eq!(constant.coeffs(), &[a]);

        let mut rng = ChaCha20Rng::seed_from_u64(8);
        for _ in 0..100 {
            let r = Poly::random(f, 4, &mut rng);
            let nodes = ints(f, &[2, 7, 11, 12]);
            let pts: Vec<_> = nodes.iter().map(|&x| (x, r.eval(x).unwrap())).collect();
            assert_eq!(interpolate(&pts).unwrap(), r);
        }
    }

    #[test]
    fn every_four_of_six_values_give_the_same_polynomial() {
        let f = gf(7);
        let mut rng = ChaCha20Rng::seed_from_u64(1);
        let r = Poly::random(f, 4, &mut rng);
        let values: Vec<_> = (0..6)
            .map(|x| (f.from_integer(x), r.eval(f.from_integer(x)).unwrap()))
            .collect();
        for mask in 0u32..64 {
            if mask.count_ones() != 4 {
                continue;
            }
            let subset: Vec<_> = (0..6).filter(|i| mask >> i & 1 == 1).map(|i| values[i]).collect();
            assert_eq!(interpolate(&subset).unwrap(), r);
        }
    }

    #[test]
    fn lagrange_interpolate_duality() {
        let mut rng = ChaCha20Rng::seed_from_u64(21);
        for spec in [gf(13), FieldSpec::binary(8).unwrap()] {
            for _ in 0..50 {
                let nodes: Vec<FieldElement> = {
                    let mut seen = Vec::new();
                    while seen.len() < 5 {
                        let x = spec.random(&mut rng);
                        if !seen.contains(&x) {
                            seen.push(x);
                        }
                    }
                    seen
                };
                let ys: Vec<_> = nodes.iter().map(|_| spec.random(&mut rng)).collect();
                let pts: Vec<_> = nodes.iter().copied().zip(ys.iter().copied()).collect();
                let poly = interpolate(&pts).unwrap();
                let target = spec.random(&mut rng);
                let row = lagrange_coefficients(&nodes, target).unwrap();
                assert_eq!(poly.eval(target).unwrap(), row.apply(&ys));
            }
        }
    }

    #[test]
    fn constrained_sampling() {
        let f = gf(13);
        let mut rng = ChaCha20Rng::seed_from_u64(2);
        let constraints = vec![
            (f.from_integer(0), f.from_integer(5)),
            (f.from_integer(4), f.from_integer(1)),
            (f.from_integer(7), f.from_integer(0)),
        ];
        for _ in 0..1000 {
            let r = random_constrained(f, 6, &constraints, &mut rng).unwrap();
            assert_eq!(r.degree_bound(), 6);
            for &(x, y) in &constraints {
                assert_eq!(r.eval(x).unwrap(), y);
            }
        }
        let full = random_constrained(f, 3, &constraints, &mut rng).unwrap();
        assert_eq!(full, interpolate(&constraints).unwrap());
        assert!(matches!(
            random_constrained(f, 2, &constraints, &mut rng),
            Err(PolyError::TooManyConstraints { .. })
        ));
        assert!(matches!(
            random_constrained(gf(3), 4, &[], &mut rng),
            Err(PolyError::InsufficientField { .. })
        ));
        let nodes = free_nodes(f, 6, &constraints).unwrap();
        assert_eq!(nodes, ints(f, &[1, 2, 3]));
    }

    #[test]
    fn constrained_enumeration_hits_each_polynomial_once() {
        // GF(5), bound 4, r(0) = 0: 125 free-value vectors map onto the 125
        // polynomials with zero constant term.
        let f = gf(5);
        let constraints = [(f.zero(), f.zero())];
        let mut seen = HashSet::new();
        for a in f.elements() {
            for b in f.elements() {
                for c in f.elements() {
                    let r = constrained_from_free_values(f, 4, &constraints, &[a, b, c]).unwrap();
                    assert!(r.coeffs()[0].is_zero());
                    assert!(seen.insert(r.coeffs().to_vec()));
                }
            }
        }
        assert_eq!(seen.len(), 125);
    }

    #[test]
    fn constrained_marginal_is_uniform() {
        // Value at a point outside the constraints, over all free-value choices.
        let f = gf(5);
        let constraints = [(f.zero(), f.from_integer(3)), (f.one(), f.from_integer(4))];
        let probe = f.from_integer(4);
        let mut counts = [0usize; 5];
        for a in f.elements() {
            for b in f.elements() {
                let r = constrained_from_free_values(f, 4, &constraints, &[a, b]).unwrap();
                counts[r.eval(probe).unwrap().value() as usize] += 1;
            }
        }
        assert_eq!(counts, [5; 5]);
    }

    #[test]
    fn uniqueness_across_node_subsets() {
        let f = gf(31);
        let mut rng = ChaCha20Rng::seed_from_u64(77);
        let r = Poly::random(f, 5, &mut rng);
        let sample = |xs: &[i64]| -> Poly {
            let pts: Vec<_> = xs
                .iter()
                .map(|&x| (f.from_integer(x), r.eval(f.from_integer(x)).unwrap()))
                .collect();
            interpolate(&pts).unwrap()
        };
        assert_eq!(sample(&[1, 2, 3, 4, 5]), sample(&[10, 20, 25, 29, 30]));
    }

    proptest! {
        #[test]
        fn interpolate_passes_through_points(seed in any::<u64>(), len in 1usize..10) {
            let f = gf(101);
            let mut rng = ChaCha20Rng::seed_from_u64(seed);
            let pts: Vec<_> = (0..len as i64)
                .map(|i| (f.from_integer(3 * i + 1), f.random(&mut rng)))
                .collect();
            let poly = interpolate(&pts).unwrap();
            for (x, y) in pts {
                prop_assert_eq!(poly.eval(x).unwrap(), y);
            }
        }
    }
}
