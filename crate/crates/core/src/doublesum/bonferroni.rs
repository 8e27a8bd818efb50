use serde::Serialize;

use crate::error::{ensure, Error, Result};
use crate::scalar::Probability;

/// Strict upper triangle of an `n × n` matrix, stored row by row.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct UpperTriangular<P> {
    n: usize,
    data: Vec<P>,
}

impl<P: Probability> UpperTriangular<P> {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![P::zero(); n * n.saturating_sub(1) / 2],
        }
    }

    /// Row `i` must hold the `n − 1 − i` entries `(i, i+1), …, (i, n−1)`.
    pub fn from_rows(rows: Vec<Vec<P>>) -> Result<Self> {
        let n = rows.len() + usize::from(!rows.is_empty());
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n - 1 - i {
                return Err(Error::domain(
                    "pairs",
                    format!("row {i} has {} entries, expected {}", row.len(), n - 1 - i),
                ));
            }
        }
        Ok(Self {
            n,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    fn offset(&self, i: usize, j: usize) -> usize {
        assert!(
            i < j && j < self.n,
            "({i}, {j}) is outside the strict upper triangle of size {}",
            self.n
        );
        i * (2 * self.n - i - 1) / 2 + (j - i - 1)
    }

    pub fn get(&self, i: usize, j: usize) -> P {
        self.data[self.offset(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, value: P) {
        let k = self.offset(i, j);
        self.data[k] = value;
    }

    pub fn values(&self) -> &[P] {
        &self.data
    }

    pub fn sum(&self) -> P {
        self.data.iter().fold(P::zero(), |acc, &x| acc + x)
    }
}

fn check_probability<P: Probability>(name: &'static str, x: P) -> Result<()> {
    ensure(x >= P::zero() && x <= P::one(), name, || {
        format!("{x:?} is not a probability")
    })
}

/// `Σ P(A_i) − Σ_{i<j} P(A_i ∩ A_j)`, a lower bound for `P(∪ A_i)`.
///
/// The value may be negative and is returned as is.
pub fn bonferroni_lower<P: Probability>(singles: &[P], pairs: &UpperTriangular<P>) -> Result<P> {
    let shape_ok = pairs.dim() == singles.len() || (singles.len() <= 1 && pairs.dim() <= 1);
    ensure(shape_ok, "pairs", || {
        format!(
            "{} events but a {}×{} pair matrix",
            singles.len(),
            pairs.dim(),
            pairs.dim()
        )
    })?;
    for &s in singles {
        check_probability("singles", s)?;
    }
    for &q in pairs.values() {
        check_probability("pairs", q)?;
    }
    let total = singles.iter().fold(P::zero(), |acc, &x| acc + x);
    Ok(total - pairs.sum())
}

/// Probability space on atoms `0..masses.len()`.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteSpace<P> {
    masses: Vec<P>,
}

impl<P: Probability> FiniteSpace<P> {
    /// Masses must be non-negative; they are not renormalised.
    pub fn new(masses: Vec<P>) -> Result<Self> {
        ensure(masses.iter().all(|&m| m >= P::zero()), "masses", || {
            "masses must be non-negative".into()
        })?;
        Ok(Self { masses })
    }

    pub fn uniform(atoms: usize) -> Result<Self> {
        ensure(atoms > 0, "atoms", || {
            "at least one atom is required".into()
        })?;
        let n = (0..atoms).fold(P::zero(), |acc, _| acc + P::one());
        Self::new(vec![P::one() / n; atoms])
    }

    pub fn atoms(&self) -> usize {
        self.masses.len()
    }

    pub fn masses(&self) -> &[P] {
        &self.masses
    }

    pub fn total(&self) -> P {
        self.masses.iter().fold(P::zero(), |acc, &x| acc + x)
    }

    fn measure(&self, member: impl Fn(usize) -> bool) -> P {
        self.masses
            .iter()
            .enumerate()
            .filter(|(k, _)| member(*k))
            .fold(P::zero(), |acc, (_, &m)| acc + m)
    }
}

/// Exact union, single and pairwise probabilities by enumeration.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct UnionReport<P> {
    pub exact_union: P,
    pub singles: Vec<P>,
    pub pairs: UpperTriangular<P>,
}

impl<P: Probability> UnionReport<P> {
    pub fn sum_singles(&self) -> P {
        self.singles.iter().fold(P::zero(), |acc, &x| acc + x)
    }

    pub fn bonferroni_lower(&self) -> P {
        self.sum_singles() - self.pairs.sum()
    }
}

/// Enumerates the atoms of `space` against `events`, each given as a set of atom indices.
pub fn brute_force_union<P: Probability>(
    space: &FiniteSpace<P>,
    events: &[Vec<usize>],
) -> Result<UnionReport<P>> {
    let atoms = space.atoms();
    let mut member = vec![vec![false; atoms]; events.len()];
    for (e, event) in events.iter().enumerate() {
        for &k in event {
            ensure(k < atoms, "events", || {
                format!("event {e} names atom {k} of a {atoms}-atom space")
            })?;
            member[e][k] = true;
        }
    }
    let singles = member.iter().map(|m| space.measure(|k| m[k])).collect();
    let mut pairs = UpperTriangular::zeros(events.len());
    for i in 0..events.len() {
        for j in i + 1..events.len() {
            pairs.set(i, j, space.measure(|k| member[i][k] && member[j][k]));
        }
    }
    let exact_union = space.measure(|k| member.iter().any(|m| m[k]));
    Ok(UnionReport {
        exact_union,
        singles,
        pairs,
    })
}
