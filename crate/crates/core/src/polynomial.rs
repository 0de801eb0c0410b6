//! Sparse homogeneous polynomials on finite truncations of `c0`, and the
//! decomposition of a degree-`n` polynomial into its length components.
//!
//! Terms are kept in a `BTreeMap` keyed by [`MultiIndex`], so iteration runs
//! in square order and projection onto the first `s` basis monomials is a
//! prefix of the map.
//!
//! Coefficients are generic: [`ExactComplex`] (complex rationals) is used to
//! check structural identities exactly, [`Complex64`] for norm estimation.

use std::collections::BTreeMap;
use std::fmt::Debug;
use std::ops::Neg;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{Num, ToPrimitive};

use crate::error::{Error, Result};
use crate::multiindex::{self, MultiIndex};

pub use num_complex::Complex64;

/// Complex numbers with arbitrary-precision rational parts.
pub type ExactComplex = Complex<BigRational>;

/// Scalar field the polynomial containers can be built over.
pub trait Coefficient: Clone + Debug + PartialEq + Num + Neg<Output = Self> {}

impl<T: Clone + Debug + PartialEq + Num + Neg<Output = T>> Coefficient for T {}

/// Exact complex rational `(re_num / den) + i (im_num / den)`.
pub fn exact(re_num: i64, im_num: i64, den: i64) -> ExactComplex {
    let den = BigInt::from(den);
    Complex::new(
        BigRational::new(BigInt::from(re_num), den.clone()),
        BigRational::new(BigInt::from(im_num), den),
    )
}

/// A homogeneous polynomial `Σ a_m z^m` with `|m| = degree` for every term.
#[derive(Debug, Clone, PartialEq)]
pub struct HomogeneousPolynomial<C> {
    degree: u32,
    terms: BTreeMap<MultiIndex, C>,
}

/// Float-coefficient polynomial used by the norm estimators.
pub type Poly64 = HomogeneousPolynomial<Complex64>;
/// Exact-coefficient polynomial used by the structural checks.
pub type ExactPoly = HomogeneousPolynomial<ExactComplex>;

impl<C: Coefficient> HomogeneousPolynomial<C> {
    /// The zero polynomial of a given degree.
    pub fn zero(degree: u32) -> Self {
        Self {
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(index: MultiIndex, coefficient: C) -> Self {
        let mut p = Self::zero(index.modulus());
        p.accumulate(index, coefficient);
        p
    }

    /// Builds a polynomial, summing repeated indices and dropping zeros.
    pub fn from_terms<I>(degree: u32, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (MultiIndex, C)>,
    {
        let mut p = Self::zero(degree);
        for (index, coefficient) in terms {
            if index.modulus() != degree {
                return Err(Error::DegreeMismatch {
                    expected: degree,
                    found: index.modulus(),
                });
            }
            p.accumulate(index, coefficient);
        }
        Ok(p)
    }

    fn accumulate(&mut self, index: MultiIndex, coefficient: C) {
        let sum = match self.terms.remove(&index) {
            Some(existing) => existing + coefficient,
            None => coefficient,
        };
        if !sum.is_zero() {
            self.terms.insert(index, sum);
        }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// Terms in ascending square order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&MultiIndex, &C)> + '_ {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, index: &MultiIndex) -> C {
        self.terms.get(index).cloned().unwrap_or_else(C::zero)
    }

    /// Largest length among the terms, 0 for constants and the zero polynomial.
    pub fn max_length(&self) -> usize {
        self.terms.keys().map(MultiIndex::length).max().unwrap_or(0)
    }

    fn check_degree(&self, other: &Self) -> Result<()> {
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch {
                expected: self.degree,
                found: other.degree,
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_degree(other)?;
        let mut out = self.clone();
        for (index, c) in &other.terms {
            out.accumulate(index.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_degree(other)?;
        let mut out = self.clone();
        for (index, c) in &other.terms {
            out.accumulate(index.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, factor: &C) -> Self {
        let mut out = Self::zero(self.degree);
        for (index, c) in &self.terms {
            out.accumulate(index.clone(), c.clone() * factor.clone());
        }
        out
    }

    /// `Σ a_m z^m` at a point given by its first `z.len()` coordinates; the
    /// remaining coordinates are zero.
    pub fn evaluate(&self, z: &[C]) -> C {
        let mut total = C::zero();
        'terms: for (index, c) in &self.terms {
            let mut value = c.clone();
            for &(position, exponent) in index.entries() {
                let Some(coordinate) = z.get(position - 1) else {
                    continue 'terms;
                };
                for _ in 0..exponent {
                    value = value * coordinate.clone();
                }
            }
            total = total + value;
        }
        total
    }

    /// `P(Σ_{j<=k} z_j e_j)` as a polynomial: the terms of length `<= k`.
    pub fn restrict(&self, k: usize) -> Self {
        Self {
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.length() <= k)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Groups the terms by length; nonempty components only.
    pub fn length_split(&self) -> BTreeMap<usize, Self> {
        let mut out: BTreeMap<usize, Self> = BTreeMap::new();
        for (index, c) in &self.terms {
            out.entry(index.length())
                .or_insert_with(|| Self::zero(self.degree))
                .terms
                .insert(index.clone(), c.clone());
        }
        out
    }

    /// Components `[Q_1, ..., Q_K]` from the telescoping identity
    /// `Q_{k+1} = P|_{k+1} - P|_k`, where `P|_k` zeroes coordinates beyond `k`.
    pub fn telescope_split(&self, cut: usize) -> Result<Vec<Self>> {
        let longest = self.max_length();
        if cut == 0 || cut < longest {
            return Err(Error::LengthExceedsCut { length: longest, cut });
        }
        let mut out = Vec::with_capacity(cut);
        let mut previous = self.restrict(0);
        for k in 1..=cut {
            let current = self.restrict(k);
            let q = if k == 1 {
                current.clone()
            } else {
                current.try_sub(&previous)?
            };
            out.push(q);
            previous = current;
        }
        Ok(out)
    }

    /// Factors `Q = R · z_k` for a component whose indices all have length
    /// `k`, returning `R`.
    pub fn reduce_by_last_variable(&self, k: usize) -> Result<Self> {
        if self.degree == 0 {
            return Err(Error::DegreeMismatch { expected: 1, found: 0 });
        }
        let mut out = Self::zero(self.degree - 1);
        for (index, c) in &self.terms {
            if index.length() != k {
                return Err(Error::MixedLength {
                    expected: k,
                    found: index.length(),
                });
            }
            out.terms.insert(index.underline()?, c.clone());
        }
        Ok(out)
    }

    /// `R · z_k` for a polynomial whose terms all have length `<= k`.
    pub fn multiply_by_coordinate(&self, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidParams("coordinates are 1-based".into()));
        }
        let mut out = Self::zero(self.degree + 1);
        for (index, c) in &self.terms {
            if index.length() > k {
                return Err(Error::LengthExceedsCut {
                    length: index.length(),
                    cut: k,
                });
            }
            out.terms.insert(index.raise(k), c.clone());
        }
        Ok(out)
    }

    /// Keeps the terms whose square-order rank is at most `s`.
    pub fn project(&self, s: u64) -> Result<Self> {
        let mut out = Self::zero(self.degree);
        for (index, c) in &self.terms {
            if multiindex::rank(index)? > s {
                break;
            }
            out.terms.insert(index.clone(), c.clone());
        }
        Ok(out)
    }

    /// The coefficient functional for the `r`-th basis monomial.
    pub fn coefficient_at_rank(&self, r: u64) -> Result<C> {
        Ok(self.coefficient(&multiindex::unrank(self.degree, r)?))
    }

    /// Converts coefficients with `f`.
    pub fn map_coefficients<D: Coefficient>(&self, f: impl Fn(&C) -> D) -> HomogeneousPolynomial<D> {
        let mut out = HomogeneousPolynomial::zero(self.degree);
        for (index, c) in &self.terms {
            out.accumulate(index.clone(), f(c));
        }
        out
    }
}

impl ExactPoly {
    pub fn to_complex64(&self) -> Poly64 {
        self.map_coefficients(|c| Complex64::new(c.re.to_f64().unwrap_or(f64::NAN), c.im.to_f64().unwrap_or(f64::NAN)))
    }
}

/// Sum of several homogeneous polynomials of one degree.
pub fn sum_all<'a, C: Coefficient + 'a>(
    degree: u32,
    parts: impl IntoIterator<Item = &'a HomogeneousPolynomial<C>>,
) -> Result<HomogeneousPolynomial<C>> {
    parts
        .into_iter()
        .try_fold(HomogeneousPolynomial::zero(degree), |acc, p| acc.try_add(p))
}

/// Finite Taylor expansion `P_0 + P_1 + ... + P_N`, part `i` of degree `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct TaylorSeries<C> {
    parts: Vec<HomogeneousPolynomial<C>>,
}

pub type Series64 = TaylorSeries<Complex64>;

impl<C: Coefficient> TaylorSeries<C> {
    pub fn new(parts: Vec<HomogeneousPolynomial<C>>) -> Result<Self> {
        for (i, part) in parts.iter().enumerate() {
            if part.degree() as usize != i {
                return Err(Error::DegreeMismatch {
                    expected: i as u32,
                    found: part.degree(),
                });
            }
        }
        Ok(Self { parts })
    }

    pub fn parts(&self) -> &[HomogeneousPolynomial<C>] {
        &self.parts
    }

    /// `N`, the highest stored degree (`None` for an empty series).
    pub fn max_degree(&self) -> Option<u32> {
        self.parts.len().checked_sub(1).map(|n| n as u32)
    }

    pub fn max_length(&self) -> usize {
        self.parts.iter().map(|p| p.max_length()).max().unwrap_or(0)
    }

    pub fn evaluate(&self, z: &[C]) -> C {
        self.parts.iter().fold(C::zero(), |acc, p| acc + p.evaluate(z))
    }

    /// The series with only the degree-`n` part kept.
    pub fn degree_part(&self, n: usize) -> Self {
        let parts = self
            .parts
            .iter()
            .enumerate()
            .map(|(i, p)| {
                if i == n {
                    p.clone()
                } else {
                    HomogeneousPolynomial::zero(i as u32)
                }
            })
            .collect();
        Self { parts }
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        let len = self.parts.len().max(other.parts.len());
        let zero = |i: usize| HomogeneousPolynomial::zero(i as u32);
        let parts = (0..len)
            .map(|i| {
                let a = self.parts.get(i).cloned().unwrap_or_else(|| zero(i));
                let b = other.parts.get(i).cloned().unwrap_or_else(|| zero(i));
                a.try_sub(&b)
            })
            .collect::<Result<_>>()?;
        Ok(Self { parts })
    }

    pub fn scale(&self, factor: &C) -> Self {
        Self {
            parts: self.parts.iter().map(|p| p.scale(factor)).collect(),
        }
    }
}

impl<C: Coefficient> Default for TaylorSeries<C> {
    fn default() -> Self {
        Self { parts: Vec::new() }
    }
}

/// Constant polynomial `c` (degree 0).
pub fn constant<C: Coefficient>(c: C) -> HomogeneousPolynomial<C> {
    HomogeneousPolynomial::monomial(MultiIndex::empty(), c)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn idx(exps: &[u32]) -> MultiIndex {
        MultiIndex::from_exponents(exps)
    }

    #[test]
    fn evaluate_examples() {
        let p = Poly64::monomial(idx(&[1, 1]), c(1.0, 0.0));
        assert_eq!(p.evaluate(&[c(2.0, 0.0), c(3.0, 0.0)]), c(6.0, 0.0));

        let q = Poly64::from_terms(2, [(idx(&[2]), c(1.0, 0.0)), (idx(&[0, 2]), c(-1.0, 0.0))]).unwrap();
        assert_eq!(q.evaluate(&[c(1.0, 0.0), c(0.0, 1.0)]), c(2.0, 0.0));
        assert_eq!(q.evaluate(&[c(0.0, 0.0), c(0.0, 0.0)]), c(0.0, 0.0));
        // coordinates beyond the vector are zero
        assert_eq!(q.evaluate(&[c(3.0, 0.0)]), c(9.0, 0.0));
        assert_eq!(constant(c(4.0, 0.0)).evaluate(&[]), c(4.0, 0.0));
    }

    #[test]
    fn rejects_wrong_modulus() {
        assert!(matches!(
            Poly64::from_terms(2, [(idx(&[1]), c(1.0, 0.0))]),
            Err(Error::DegreeMismatch { .. })
        ));
    }

    #[test]
    fn zeros_are_not_stored() {
        let p = Poly64::from_terms(1, [(idx(&[1]), c(1.0, 0.0)), (idx(&[1]), c(-1.0, 0.0))]).unwrap();
        assert!(p.is_zero());
        assert_eq!(p.degree(), 1);
    }

    #[test]
    fn length_split_groups_by_length() {
        let p = ExactPoly::from_terms(2, [(idx(&[2]), exact(1, 0, 1)), (idx(&[1, 0, 1]), exact(2, 0, 1))]).unwrap();
        let split = p.length_split();
        assert_eq!(split.len(), 2);
        assert_eq!(split[&1], ExactPoly::monomial(idx(&[2]), exact(1, 0, 1)));
        assert_eq!(split[&3], ExactPoly::monomial(idx(&[1, 0, 1]), exact(2, 0, 1)));
    }

    #[test]
    fn telescope_examples() {
        let p = ExactPoly::from_terms(2, [(idx(&[1, 1]), exact(1, 0, 1)), (idx(&[0, 2]), exact(1, 0, 1))]).unwrap();
        let parts = p.telescope_split(2).unwrap();
        assert!(parts[0].is_zero());
        assert_eq!(parts[1], p);

        let cube = ExactPoly::monomial(idx(&[3]), exact(1, 0, 1));
        assert_eq!(cube.telescope_split(1).unwrap(), vec![cube.clone()]);
        assert!(p.telescope_split(1).is_err());
    }

    #[test]
    fn reduce_examples() {
        let q = Poly64::monomial(idx(&[1, 0, 1]), c(1.0, 0.0));
        assert_eq!(
            q.reduce_by_last_variable(3).unwrap(),
            Poly64::monomial(idx(&[1]), c(1.0, 0.0))
        );

        let q = Poly64::from_terms(3, [(idx(&[0, 1, 2]), c(2.0, 0.0)), (idx(&[0, 0, 3]), c(1.0, 0.0))]).unwrap();
        let r = Poly64::from_terms(2, [(idx(&[0, 1, 1]), c(2.0, 0.0)), (idx(&[0, 0, 2]), c(1.0, 0.0))]).unwrap();
        assert_eq!(q.reduce_by_last_variable(3).unwrap(), r);
        assert_eq!(r.multiply_by_coordinate(3).unwrap(), q);

        let mixed = Poly64::from_terms(2, [(idx(&[2]), c(1.0, 0.0)), (idx(&[1, 1]), c(1.0, 0.0))]).unwrap();
        assert!(matches!(
            mixed.reduce_by_last_variable(2),
            Err(Error::MixedLength { .. })
        ));
    }

    #[test]
    fn multiply_examples() {
        let r = Poly64::monomial(idx(&[1]), c(1.0, 0.0));
        assert_eq!(
            r.multiply_by_coordinate(3).unwrap(),
            Poly64::monomial(idx(&[1, 0, 1]), c(1.0, 0.0))
        );
        let one = constant(c(1.0, 0.0));
        assert_eq!(
            one.multiply_by_coordinate(2).unwrap(),
            Poly64::monomial(idx(&[0, 1]), c(1.0, 0.0))
        );
        let sq = Poly64::monomial(idx(&[0, 2]), c(1.0, 0.0));
        assert_eq!(
            sq.multiply_by_coordinate(2).unwrap(),
            Poly64::monomial(idx(&[0, 3]), c(1.0, 0.0))
        );
        assert!(sq.multiply_by_coordinate(1).is_err());
    }

    #[test]
    fn project_examples() {
        let p = Poly64::from_terms(2, [(idx(&[2]), c(1.0, 0.0)), (idx(&[0, 2]), c(5.0, 0.0))]).unwrap();
        assert_eq!(p.project(2).unwrap(), Poly64::monomial(idx(&[2]), c(1.0, 0.0)));
        assert_eq!(p.project(3).unwrap(), p);
        assert_eq!(p.project(100).unwrap(), p);
        assert!(p.project(0).unwrap().is_zero());
        assert_eq!(p.coefficient_at_rank(3).unwrap(), c(5.0, 0.0));
        assert_eq!(p.coefficient_at_rank(2).unwrap(), c(0.0, 0.0));
    }

    #[test]
    fn series_checks_degrees() {
        let ok = TaylorSeries::new(vec![constant(c(1.0, 0.0)), Poly64::monomial(idx(&[1]), c(1.0, 0.0))]);
        assert!(ok.is_ok());
        let bad = TaylorSeries::new(vec![Poly64::monomial(idx(&[1]), c(1.0, 0.0))]);
        assert!(bad.is_err());
        let f = ok.unwrap();
        assert_eq!(f.evaluate(&[c(2.0, 0.0)]), c(3.0, 0.0));
        assert_eq!(f.max_degree(), Some(1));
    }
}
