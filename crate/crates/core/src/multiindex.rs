//! Finitely supported multi-indices, the square order, and rank/unrank
//! enumeration of the degree-`n` monomials.
//!
//! A [`MultiIndex`] `m` stands for the monomial `z^m = z_1^{m_1} z_2^{m_2} ...`
//! with all but finitely many exponents zero. Positions are 1-based.
//!
//! The square order compares indices of equal modulus: shorter length comes
//! first, and among indices of the same length the exponents are compared
//! from the highest position downwards. Within the degree-`n` class the
//! indices of length `<= k` therefore form a prefix, and the map
//! `m -> underline(m)` is an order isomorphism from the length-`k` block of
//! degree `n` onto the length-`<= k` prefix of degree `n - 1`. Both the rank
//! arithmetic and [`enumerate`] are built on that recursion.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest degree accepted by [`rank`] and [`unrank`].
pub const MAX_RANK_DEGREE: u32 = 16;
/// Largest length accepted by [`rank`] and [`unrank`].
pub const MAX_RANK_LENGTH: usize = 64;

/// Exponent sequence with finite support, stored as `(position, exponent)`
/// pairs with strictly increasing positions and nonzero exponents.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<(usize, u32)>", into = "Vec<(usize, u32)>")]
pub struct MultiIndex {
    entries: Vec<(usize, u32)>,
}

impl MultiIndex {
    /// Builds an index from sparse pairs, validating the storage invariants.
    pub fn new(entries: Vec<(usize, u32)>) -> Result<Self> {
        let mut previous = 0;
        for &(position, exponent) in &entries {
            if position == 0 {
                return Err(Error::InvalidIndex("positions are 1-based".into()));
            }
            if position <= previous {
                return Err(Error::InvalidIndex(format!(
                    "positions must be strictly increasing, got {position} after {previous}"
                )));
            }
            if exponent == 0 {
                return Err(Error::InvalidIndex(format!(
                    "zero exponent stored at position {position}"
                )));
            }
            previous = position;
        }
        Ok(Self { entries })
    }

    /// The constant monomial.
    pub fn empty() -> Self {
        Self::default()
    }

    /// The coordinate monomial `z_position`.
    pub fn variable(position: usize) -> Self {
        assert!(position >= 1, "positions are 1-based");
        Self {
            entries: vec![(position, 1)],
        }
    }

    /// Builds an index from a dense exponent list; entry `i` is the exponent
    /// of `z_{i+1}`.
    pub fn from_exponents(exponents: &[u32]) -> Self {
        let entries = exponents
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| (i + 1, e))
            .collect();
        Self { entries }
    }

    pub fn entries(&self) -> &[(usize, u32)] {
        &self.entries
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `|m|`, the sum of the exponents.
    pub fn modulus(&self) -> u32 {
        self.entries.iter().map(|&(_, e)| e).sum()
    }

    /// `l(m)`, the largest position with a nonzero exponent (0 when empty).
    pub fn length(&self) -> usize {
        self.entries.last().map_or(0, |&(p, _)| p)
    }

    /// Exponent at a 1-based position.
    pub fn exponent(&self, position: usize) -> u32 {
        self.entries
            .binary_search_by_key(&position, |&(p, _)| p)
            .map_or(0, |i| self.entries[i].1)
    }

    /// Dense exponents for positions `1..=len`.
    pub fn to_exponents(&self, len: usize) -> Vec<u32> {
        let mut dense = vec![0; len];
        for &(p, e) in &self.entries {
            if p <= len {
                dense[p - 1] = e;
            }
        }
        dense
    }

    /// The index `m̲` with `z^m = z^{m̲} z_{l(m)}`.
    pub fn underline(&self) -> Result<Self> {
        let mut entries = self.entries.clone();
        match entries.last_mut() {
            None => return Err(Error::EmptyIndex),
            Some(last) if last.1 == 1 => {
                entries.pop();
            }
            Some(last) => last.1 -= 1,
        }
        Ok(Self { entries })
    }

    /// The index of `z^m · z_position`.
    pub fn raise(&self, position: usize) -> Self {
        assert!(position >= 1, "positions are 1-based");
        let mut entries = self.entries.clone();
        match entries.binary_search_by_key(&position, |&(p, _)| p) {
            Ok(i) => entries[i].1 += 1,
            Err(i) => entries.insert(i, (position, 1)),
        }
        Self { entries }
    }
}

impl TryFrom<Vec<(usize, u32)>> for MultiIndex {
    type Error = Error;

    fn try_from(entries: Vec<(usize, u32)>) -> Result<Self> {
        Self::new(entries)
    }
}

impl From<MultiIndex> for Vec<(usize, u32)> {
    fn from(m: MultiIndex) -> Self {
        m.entries
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            return write!(f, "1");
        }
        for (i, &(p, e)) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            if e == 1 {
                write!(f, "z{p}")?;
            } else {
                write!(f, "z{p}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Total order used for storage: modulus first, then the square order.
impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.modulus()
            .cmp(&other.modulus())
            .then_with(|| square_cmp(self, other))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn check_moduli(a: &MultiIndex, b: &MultiIndex) -> Result<()> {
    let (left, right) = (a.modulus(), b.modulus());
    if left != right {
        return Err(Error::ModulusMismatch { left, right });
    }
    Ok(())
}

// Length first, then exponents from the top position down.
fn square_cmp(a: &MultiIndex, b: &MultiIndex) -> Ordering {
    match a.length().cmp(&b.length()) {
        Ordering::Equal => {}
        other => return other,
    }
    let mut lhs = a.entries.iter().rev();
    let mut rhs = b.entries.iter().rev();
    loop {
        match (lhs.next(), rhs.next()) {
            (None, None) => return Ordering::Equal,
            (Some(_), None) => return Ordering::Greater,
            (None, Some(_)) => return Ordering::Less,
            (Some(&(pa, ea)), Some(&(pb, eb))) => {
                if pa != pb {
                    // the index with the higher occupied position is larger there
                    return pa.cmp(&pb);
                }
                if ea != eb {
                    return ea.cmp(&eb);
                }
            }
        }
    }
}

/// Square order, direct form: compare lengths, then the highest position
/// where the exponents differ.
pub fn compare_direct(a: &MultiIndex, b: &MultiIndex) -> Result<Ordering> {
    check_moduli(a, b)?;
    Ok(square_cmp(a, b))
}

/// Square order, recursive form: compare lengths, and on a tie compare the
/// underlined indices.
pub fn compare_recursive(a: &MultiIndex, b: &MultiIndex) -> Result<Ordering> {
    check_moduli(a, b)?;
    let (mut a, mut b) = (a.clone(), b.clone());
    loop {
        match a.length().cmp(&b.length()) {
            Ordering::Equal if a.is_empty() => return Ok(Ordering::Equal),
            Ordering::Equal => {
                a = a.underline()?;
                b = b.underline()?;
            }
            other => return Ok(other),
        }
    }
}

/// Exact binomial coefficient, `None` on `u64` overflow.
pub fn binomial(n: u64, k: u64) -> Option<u64> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) is exact at every step
        acc = acc.checked_mul((n - i) as u128)? / (i as u128 + 1);
    }
    u64::try_from(acc).ok()
}

/// Number of degree-`degree` indices with length at most `length`.
pub fn count_up_to_length(degree: u32, length: usize) -> Option<u64> {
    match (degree, length) {
        (0, _) => Some(1),
        (_, 0) => Some(0),
        _ => binomial(degree as u64 + length as u64 - 1, length as u64 - 1),
    }
}

/// Number of degree-`degree` indices with length exactly `length`.
pub fn count_with_length(degree: u32, length: usize) -> Option<u64> {
    match (degree, length) {
        (0, 0) => Some(1),
        (0, _) | (_, 0) => Some(0),
        _ => binomial(degree as u64 + length as u64 - 2, length as u64 - 1),
    }
}

fn check_caps(degree: u32, length: usize) -> Result<()> {
    if degree > MAX_RANK_DEGREE || length > MAX_RANK_LENGTH {
        return Err(Error::RankOverflow { degree, length });
    }
    Ok(())
}

/// 1-based position of `m` in the square order of all indices of its
/// modulus. The constant index has rank 1 in degree 0.
pub fn rank(m: &MultiIndex) -> Result<u64> {
    let degree = m.modulus();
    check_caps(degree, m.length())?;
    let overflow = || Error::RankOverflow {
        degree,
        length: m.length(),
    };
    let mut r: u64 = 1;
    let mut current = m.clone();
    while !current.is_empty() {
        let before = count_up_to_length(current.modulus(), current.length() - 1).ok_or_else(overflow)?;
        r = r.checked_add(before).ok_or_else(overflow)?;
        current = current.underline()?;
    }
    Ok(r)
}

/// [`rank`] with an explicit degree, rejecting indices of another modulus.
pub fn rank_in_degree(degree: u32, m: &MultiIndex) -> Result<u64> {
    if m.modulus() != degree {
        return Err(Error::ModulusMismatch {
            left: m.modulus(),
            right: degree,
        });
    }
    rank(m)
}

/// Inverse of [`rank`]: the `r`-th degree-`degree` index in square order.
pub fn unrank(degree: u32, r: u64) -> Result<MultiIndex> {
    if r == 0 {
        return Err(Error::InvalidRank(r));
    }
    check_caps(degree, 0)?;
    let mut positions = Vec::with_capacity(degree as usize);
    let mut remaining = r;
    for n in (1..=degree).rev() {
        // smallest k with count_up_to_length(n, k) >= remaining
        let mut k = 1;
        loop {
            let count = count_up_to_length(n, k).ok_or(Error::RankOverflow { degree, length: k })?;
            if count >= remaining {
                break;
            }
            k += 1;
            if k > MAX_RANK_LENGTH {
                return Err(Error::RankOverflow { degree, length: k });
            }
        }
        remaining -= count_up_to_length(n, k - 1).expect("smaller than a computed count");
        positions.push(k);
    }
    if remaining != 1 {
        return Err(Error::InvalidRank(r));
    }
    Ok(positions.into_iter().fold(MultiIndex::empty(), |m, p| m.raise(p)))
}

/// All degree-`degree` indices of length at most `max_length`, in
/// ascending square order.
pub fn enumerate(degree: u32, max_length: usize) -> Vec<MultiIndex> {
    if degree == 0 {
        return vec![MultiIndex::empty()];
    }
    let mut out = Vec::new();
    for k in 1..=max_length {
        // the length-k block is the degree-(n-1), length <= k prefix raised at k
        out.extend(enumerate(degree - 1, k).into_iter().map(|m| m.raise(k)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mi(pairs: &[(usize, u32)]) -> MultiIndex {
        MultiIndex::new(pairs.to_vec()).unwrap()
    }

    #[test]
    fn modulus_and_length() {
        assert_eq!(MultiIndex::empty().modulus(), 0);
        assert_eq!(MultiIndex::empty().length(), 0);
        assert_eq!(mi(&[(1, 2), (3, 1)]).modulus(), 3);
        assert_eq!(mi(&[(1, 2), (3, 1)]).length(), 3);
        assert_eq!(mi(&[(2, 5)]).modulus(), 5);
        assert_eq!(mi(&[(7, 1)]).length(), 7);
    }

    #[test]
    fn rejects_bad_storage() {
        assert!(MultiIndex::new(vec![(0, 1)]).is_err());
        assert!(MultiIndex::new(vec![(2, 1), (1, 1)]).is_err());
        assert!(MultiIndex::new(vec![(1, 1), (1, 2)]).is_err());
        assert!(MultiIndex::new(vec![(3, 0)]).is_err());
    }

    #[test]
    fn underline_examples() {
        assert_eq!(mi(&[(1, 2)]).underline().unwrap(), mi(&[(1, 1)]));
        assert_eq!(mi(&[(1, 1), (3, 1)]).underline().unwrap(), mi(&[(1, 1)]));
        assert_eq!(mi(&[(2, 1), (3, 2)]).underline().unwrap(), mi(&[(2, 1), (3, 1)]));
        assert!(matches!(MultiIndex::empty().underline(), Err(Error::EmptyIndex)));
    }

    #[test]
    fn direct_comparison_examples() {
        let a = MultiIndex::from_exponents(&[1, 1]);
        let b = MultiIndex::from_exponents(&[0, 2]);
        assert_eq!(compare_direct(&a, &b).unwrap(), Ordering::Less);
        let a = MultiIndex::from_exponents(&[2, 1]);
        let b = MultiIndex::from_exponents(&[1, 2]);
        assert_eq!(compare_direct(&a, &b).unwrap(), Ordering::Less);
        assert_eq!(compare_direct(&a, &a).unwrap(), Ordering::Equal);
        assert!(matches!(
            compare_direct(&a, &MultiIndex::variable(1)),
            Err(Error::ModulusMismatch { left: 3, right: 1 })
        ));
    }

    #[test]
    fn recursive_comparison_examples() {
        let a = MultiIndex::from_exponents(&[1, 0, 1]);
        let b = MultiIndex::from_exponents(&[0, 1, 1]);
        let c = MultiIndex::from_exponents(&[0, 0, 2]);
        assert_eq!(compare_recursive(&a, &b).unwrap(), Ordering::Less);
        assert_eq!(compare_recursive(&b, &c).unwrap(), Ordering::Less);
        for i in 1..6 {
            for j in 1..6 {
                let got = compare_recursive(&MultiIndex::variable(i), &MultiIndex::variable(j));
                assert_eq!(got.unwrap(), i.cmp(&j));
            }
        }
    }

    #[test]
    fn enumerate_degree_two_three_variables() {
        let got: Vec<String> = enumerate(2, 3).iter().map(|m| m.to_string()).collect();
        assert_eq!(got, ["z1^2", "z1*z2", "z2^2", "z1*z3", "z2*z3", "z3^2"]);
        let linear = enumerate(1, 4);
        assert_eq!(linear, (1..=4).map(MultiIndex::variable).collect::<Vec<_>>());
        assert_eq!(enumerate(0, 3), vec![MultiIndex::empty()]);
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&mi(&[(1, 2)])).unwrap(), 1);
        assert_eq!(rank(&mi(&[(1, 1), (2, 1)])).unwrap(), 2);
        assert_eq!(rank(&mi(&[(2, 2)])).unwrap(), 3);
        assert_eq!(unrank(2, 4).unwrap(), mi(&[(1, 1), (3, 1)]));
        assert_eq!(count_with_length(2, 2), Some(2));
        assert_eq!(rank(&MultiIndex::empty()).unwrap(), 1);
        assert_eq!(unrank(0, 1).unwrap(), MultiIndex::empty());
        assert!(unrank(0, 2).is_err());
        assert!(matches!(unrank(3, 0), Err(Error::InvalidRank(0))));
    }

    #[test]
    fn rank_in_degree_rejects_mismatch() {
        assert!(matches!(
            rank_in_degree(3, &mi(&[(1, 2)])),
            Err(Error::ModulusMismatch { .. })
        ));
    }

    #[test]
    fn overflow_is_reported() {
        assert!(matches!(
            rank(&MultiIndex::variable(65)),
            Err(Error::RankOverflow { .. })
        ));
        assert!(matches!(rank(&mi(&[(1, 17)])), Err(Error::RankOverflow { .. })));
        assert!(matches!(unrank(17, 1), Err(Error::RankOverflow { .. })));
        // the last rank inside the cap still round-trips
        let top = count_up_to_length(16, 64).unwrap();
        let m = unrank(16, top).unwrap();
        assert_eq!(m, mi(&[(64, 16)]));
        assert_eq!(rank(&m).unwrap(), top);
        assert!(unrank(16, top + 1).is_err());
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), Some(10));
        assert_eq!(binomial(2, 5), Some(0));
        assert_eq!(binomial(79, 16), Some(21_566_576_904_406_820));
        assert_eq!(binomial(200, 100), None);
    }

    #[test]
    fn json_form() {
        let m: MultiIndex = serde_json::from_str("[[1,2],[3,1]]").unwrap();
        assert_eq!(m, mi(&[(1, 2), (3, 1)]));
        assert_eq!(serde_json::to_string(&m).unwrap(), "[[1,2],[3,1]]");
        assert!(serde_json::from_str::<MultiIndex>("[[3,1],[1,2]]").is_err());
    }
}
