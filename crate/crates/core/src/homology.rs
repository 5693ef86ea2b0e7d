//! Homology of cochain complexes over ℚ, ℤ/p (Gaussian elimination) and ℤ
//! (Smith normal form).

use std::fmt;

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{invalid, Error, Result};
use crate::matrix::Matrix;
use crate::ring::{Coeff, RingSpec};
use crate::smith::{invariant_factors, IntMatrix};

/// Free modules `C^k` in consecutive degrees with differentials
/// `diffs[k]: C^k -> C^(k+1)` stored as `dim(k+1) x dim(k)` matrices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CochainComplex {
    pub ring: RingSpec,
    pub first_degree: isize,
    pub dims: Vec<usize>,
    pub diffs: Vec<Matrix>,
}

impl CochainComplex {
    pub fn new(ring: RingSpec, first_degree: isize, dims: Vec<usize>, diffs: Vec<Matrix>) -> Result<Self> {
        if diffs.len() + 1 != dims.len().max(1) {
            return Err(Error::Internal(format!("{} modules but {} differentials", dims.len(), diffs.len())));
        }
        for (k, d) in diffs.iter().enumerate() {
            if d.cols() != dims[k] || d.rows() != dims[k + 1] {
                return Err(Error::Internal(format!("differential {k} has the wrong shape")));
            }
        }
        Ok(CochainComplex { ring, first_degree, dims, diffs })
    }

    pub fn degrees(&self) -> impl Iterator<Item = isize> + '_ {
        (0..self.dims.len()).map(|k| self.first_degree + k as isize)
    }

    fn slot(&self, degree: isize) -> Option<usize> {
        let k = degree - self.first_degree;
        (k >= 0 && (k as usize) < self.dims.len()).then_some(k as usize)
    }

    pub fn dim(&self, degree: isize) -> usize {
        self.slot(degree).map_or(0, |k| self.dims[k])
    }

    /// Differential leaving `degree`, if both ends are nonzero slots.
    pub fn diff_from(&self, degree: isize) -> Option<&Matrix> {
        self.slot(degree).and_then(|k| self.diffs.get(k))
    }

    /// Checks d∘d = 0 everywhere.
    pub fn check_d_squared(&self) -> Result<()> {
        for k in 1..self.diffs.len() {
            if !self.diffs[k].mul(self.ring, &self.diffs[k - 1]).is_zero() {
                return Err(Error::Internal(format!("d∘d != 0 from degree {}", self.first_degree + k as isize - 1)));
            }
        }
        Ok(())
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.degrees().map(|i| sign(i) * self.dim(i) as i64).sum()
    }
}

fn sign(i: isize) -> i64 {
    if i.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeHomology {
    pub degree: isize,
    pub free: usize,
    /// Invariant factors greater than 1, as a divisibility chain (ℤ only).
    pub torsion: Vec<BigInt>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologySummary {
    pub ring: RingSpec,
    pub degrees: Vec<DegreeHomology>,
}

impl HomologySummary {
    pub fn total_free(&self) -> usize {
        self.degrees.iter().map(|d| d.free).sum()
    }

    pub fn has_torsion(&self) -> bool {
        self.degrees.iter().any(|d| !d.torsion.is_empty())
    }

    pub fn is_zero(&self) -> bool {
        self.total_free() == 0 && !self.has_torsion()
    }

    pub fn free_at(&self, degree: isize) -> usize {
        self.degrees.iter().find(|d| d.degree == degree).map_or(0, |d| d.free)
    }

    /// Degrees with nonzero free part.
    pub fn support(&self) -> Vec<isize> {
        self.degrees.iter().filter(|d| d.free > 0).map(|d| d.degree).collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.degrees.iter().map(|d| sign(d.degree) * d.free as i64).sum()
    }
}

impl fmt::Display for HomologySummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.degrees {
            let t: Vec<String> = d.torsion.iter().map(|x| x.to_string()).collect();
            writeln!(f, "{}: free={} torsion=[{}]", d.degree, d.free, t.join(","))?;
        }
        write!(f, "total: free={}", self.total_free())
    }
}

struct DiffData {
    rank: usize,
    torsion: Vec<BigInt>,
}

fn analyse(ring: RingSpec, m: &Matrix) -> Result<DiffData> {
    if ring.is_field() {
        return Ok(DiffData { rank: m.rank(ring), torsion: Vec::new() });
    }
    let factors = invariant_factors(&IntMatrix::from_matrix(m)?)?;
    Ok(DiffData { rank: factors.len(), torsion: factors.into_iter().filter(|x| !x.is_one()).collect() })
}

pub fn homology(c: &CochainComplex) -> Result<HomologySummary> {
    let data = c.diffs.iter().map(|m| analyse(c.ring, m)).collect::<Result<Vec<_>>>()?;
    let mut degrees = Vec::with_capacity(c.dims.len());
    for (k, &dim) in c.dims.iter().enumerate() {
        let out_rank = data.get(k).map_or(0, |d| d.rank);
        let (in_rank, torsion) = match k.checked_sub(1).and_then(|j| data.get(j)) {
            Some(d) => (d.rank, d.torsion.clone()),
            None => (0, Vec::new()),
        };
        let free = dim
            .checked_sub(out_rank + in_rank)
            .ok_or_else(|| Error::Internal(format!("ranks exceed dimension at slot {k}; is d∘d = 0?")))?;
        degrees.push(DegreeHomology { degree: c.first_degree + k as isize, free, torsion });
    }
    Ok(HomologySummary { ring: c.ring, degrees })
}

/// A homogeneous element of the complex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chain {
    pub degree: isize,
    pub coeffs: Vec<Coeff>,
}

impl Chain {
    pub fn basis(ring: RingSpec, degree: isize, dim: usize, index: usize) -> Self {
        let mut coeffs = vec![ring.zero(); dim];
        coeffs[index] = ring.one();
        Chain { degree, coeffs }
    }
}

fn check_chain(c: &CochainComplex, chain: &Chain) -> Result<()> {
    if chain.coeffs.len() != c.dim(chain.degree) {
        return Err(invalid!(
            "chain of length {} does not live in degree {} (dimension {})",
            chain.coeffs.len(),
            chain.degree,
            c.dim(chain.degree)
        ));
    }
    Ok(())
}

pub fn is_cycle(c: &CochainComplex, chain: &Chain) -> Result<bool> {
    check_chain(c, chain)?;
    Ok(match c.diff_from(chain.degree) {
        Some(d) => d.apply(c.ring, &chain.coeffs).iter().all(Coeff::is_zero),
        None => true,
    })
}

/// Do the classes of `chains` (all of one degree) span a free direct
/// summand of rank `chains.len()` in homology? Over a field this is linear
/// independence modulo boundaries; over ℤ the torsion of the quotient must
/// also be unchanged.
pub fn independent_in_homology(c: &CochainComplex, chains: &[Chain]) -> Result<bool> {
    let Some(first) = chains.first() else { return Ok(true) };
    let degree = first.degree;
    if chains.iter().any(|ch| ch.degree != degree) {
        return Err(invalid!("chains of mixed degrees"));
    }
    for ch in chains {
        check_chain(c, ch)?;
        if !is_cycle(c, ch)? {
            return Ok(false);
        }
    }
    let dim = c.dim(degree);
    let boundaries = match c.diff_from(degree - 1) {
        Some(d) => d.clone(),
        None => Matrix::zeros(dim, 0),
    };
    let columns: Vec<Vec<Coeff>> = chains.iter().map(|ch| ch.coeffs.clone()).collect();
    let stacked = boundaries.with_columns(&columns);
    let before = analyse(c.ring, &boundaries)?;
    let after = analyse(c.ring, &stacked)?;
    Ok(after.rank == before.rank + chains.len() && after.torsion == before.torsion)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(ring: RingSpec, rows: &[&[i64]]) -> Matrix {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| ring.from_i64(x)).collect()).collect())
    }

    #[test]
    fn zero_differential_gives_chain_ranks() {
        let q = RingSpec::Rationals;
        let c = CochainComplex::new(q, -1, vec![2, 3], vec![Matrix::zeros(3, 2)]).unwrap();
        let h = homology(&c).unwrap();
        assert_eq!(h.free_at(-1), 2);
        assert_eq!(h.free_at(0), 3);
    }

    #[test]
    fn multiplication_by_two() {
        // Z --2--> Z
        let z = RingSpec::Integers;
        let c = CochainComplex::new(z, 0, vec![1, 1], vec![m(z, &[&[2]])]).unwrap();
        let h = homology(&c).unwrap();
        assert_eq!(h.total_free(), 0);
        assert_eq!(h.degrees[1].torsion, vec![BigInt::from(2)]);
        assert_eq!(h.to_string(), "0: free=0 torsion=[]\n1: free=0 torsion=[2]\ntotal: free=0");

        let f2 = RingSpec::PrimeField(2);
        let c2 = CochainComplex::new(f2, 0, vec![1, 1], vec![m(f2, &[&[0]])]).unwrap();
        assert_eq!(homology(&c2).unwrap().total_free(), 2);
        let f3 = RingSpec::PrimeField(3);
        let c3 = CochainComplex::new(f3, 0, vec![1, 1], vec![m(f3, &[&[2]])]).unwrap();
        assert_eq!(homology(&c3).unwrap().total_free(), 0);
    }

    #[test]
    fn cycles_and_independence() {
        let q = RingSpec::Rationals;
        // C^0 = Q --(1,1)^T--> C^1 = Q^2
        let c = CochainComplex::new(q, 0, vec![1, 2], vec![m(q, &[&[1], &[1]])]).unwrap();
        let e = |i: usize| Chain::basis(q, 1, 2, i);
        assert!(is_cycle(&c, &e(0)).unwrap());
        assert!(independent_in_homology(&c, &[e(0)]).unwrap());
        assert!(!independent_in_homology(&c, &[e(0), e(1)]).unwrap());
        let boundary = Chain { degree: 1, coeffs: vec![q.one(), q.one()] };
        assert!(is_cycle(&c, &boundary).unwrap());
        assert!(!independent_in_homology(&c, &[boundary]).unwrap());
        let zero = Chain { degree: 1, coeffs: vec![q.zero(), q.zero()] };
        assert!(is_cycle(&c, &zero).unwrap());
        assert!(!independent_in_homology(&c, &[zero]).unwrap());
        assert!(!is_cycle(&c, &Chain::basis(q, 0, 1, 0)).unwrap());
        assert!(independent_in_homology(&c, &[e(0), Chain::basis(q, 0, 1, 0)]).is_err());
        assert!(is_cycle(&c, &Chain { degree: 1, coeffs: vec![q.one()] }).is_err());
    }

    #[test]
    fn integral_independence_sees_torsion() {
        // C^0 = Z --2--> C^1 = Z: the cycle 1 in C^1 has order 2, not free
        let z = RingSpec::Integers;
        let c = CochainComplex::new(z, 0, vec![1, 1], vec![m(z, &[&[2]])]).unwrap();
        assert!(!independent_in_homology(&c, &[Chain::basis(z, 1, 1, 0)]).unwrap());
        // C^0 = 0, C^1 = Z^2 with nothing: 2·e0 is free but not a summand
        let c = CochainComplex::new(z, 1, vec![2], vec![]).unwrap();
        let twice = Chain { degree: 1, coeffs: vec![z.from_i64(2), z.zero()] };
        assert!(!independent_in_homology(&c, &[twice]).unwrap());
        assert!(independent_in_homology(&c, &[Chain::basis(z, 1, 2, 0)]).unwrap());
    }
}
