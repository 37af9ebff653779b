//! Element-pair (EP) codes.
//!
//! Each user owns a pair of distinct field elements `(e0, e1)` standing for
//! bit 0 and bit 1. The orthogonal set assigns `(0, α^{j-1})` to user `j`, so
//! the field sum of all users' elements at one position is just the bit-block
//! laid out on the unit coordinates.

use std::collections::HashSet;

use thiserror::Error;

use crate::gf2m::{BinaryExtension, FieldError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EpError {
    #[error("element pair must consist of two distinct elements")]
    DegeneratePair,
    #[error("{users} users requested but the field supports at most {m}")]
    TooManyUsers { users: usize, m: usize },
    #[error("at least one user is required")]
    NoUsers,
    #[error("user index {j} out of range 1..={m}")]
    UserOutOfRange { j: usize, m: usize },
    #[error("bit value {0} is not 0 or 1")]
    NotABit(u8),
    #[error("exhaustive USPM check limited to {max} users, got {got}")]
    TooLargeForExhaustiveCheck { got: usize, max: usize },
    #[error(transparent)]
    Field(#[from] FieldError),
}

pub type Result<T> = std::result::Result<T, EpError>;

/// Largest user count accepted by [`check_uspm`].
pub const MAX_USPM_USERS: usize = 20;

/// Images of bit 0 and bit 1 for one user.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElementPair<E> {
    e0: E,
    e1: E,
}

impl<E: PartialEq> ElementPair<E> {
    pub fn new(e0: E, e1: E) -> Result<Self> {
        if e0 == e1 {
            return Err(EpError::DegeneratePair);
        }
        Ok(ElementPair { e0, e1 })
    }

    pub fn zero_image(&self) -> &E {
        &self.e0
    }

    pub fn one_image(&self) -> &E {
        &self.e1
    }
}

/// Ordered list of element pairs; pair `j - 1` belongs to user `j`.
#[derive(Debug, Clone)]
pub struct EpSet<F: BinaryExtension> {
    field: F,
    pairs: Vec<ElementPair<F::Elem>>,
}

impl<F: BinaryExtension> EpSet<F> {
    /// Arbitrary pairs; used to probe [`check_uspm`] with non-UD sets.
    pub fn from_pairs(field: F, pairs: Vec<ElementPair<F::Elem>>) -> Self {
        EpSet { field, pairs }
    }

    /// The orthogonal set with pair `j = (0, α^{j-1})` for `1 ≤ j ≤ users`.
    pub fn orthogonal(field: F, users: usize) -> Result<Self> {
        let m = field.degree();
        if users == 0 {
            return Err(EpError::NoUsers);
        }
        if users > m {
            return Err(EpError::TooManyUsers { users, m });
        }
        let pairs = (0..users)
            .map(|i| ElementPair::new(field.zero(), field.unit(i)?))
            .collect::<Result<Vec<_>>>()?;
        Ok(EpSet { field, pairs })
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn users(&self) -> usize {
        self.pairs.len()
    }

    pub fn pairs(&self) -> &[ElementPair<F::Elem>] {
        &self.pairs
    }

    /// Pair of user `j` (1-based).
    pub fn pair(&self, j: usize) -> Result<&ElementPair<F::Elem>> {
        j.checked_sub(1)
            .and_then(|i| self.pairs.get(i))
            .ok_or(EpError::UserOutOfRange {
                j,
                m: self.pairs.len(),
            })
    }

    /// Maps a J-bit block `b[k]` to the element block `u[k]`.
    pub fn encode_block(&self, bits: &[u8]) -> Result<Vec<F::Elem>> {
        bits.iter()
            .zip(&self.pairs)
            .map(|(&b, pair)| f_b2q(b, pair))
            .collect()
    }
}

/// Binary to finite-field switching function: `0 ↦ e0`, `1 ↦ e1`.
pub fn f_b2q<E: Clone>(bit: u8, pair: &ElementPair<E>) -> Result<E> {
    match bit {
        0 => Ok(pair.e0.clone()),
        1 => Ok(pair.e1.clone()),
        b => Err(EpError::NotABit(b)),
    }
}

/// Maps a user's bit sequence to its element sequence.
pub fn encode_user_sequence<E: Clone>(bits: &[u8], pair: &ElementPair<E>) -> Result<Vec<E>> {
    bits.iter().map(|&b| f_b2q(b, pair)).collect()
}

/// Finite-field sum pattern of one element block.
pub fn ffsp<F: BinaryExtension>(field: &F, block: &[F::Elem]) -> F::Elem {
    block
        .iter()
        .fold(field.zero(), |acc, u| field.add(&acc, u))
}

/// Inverse transform for the orthogonal set: user `j` reads coordinate `j - 1`.
pub fn f_q2b<F: BinaryExtension>(field: &F, w: &F::Elem, j: usize) -> Result<u8> {
    let m = field.degree();
    if j == 0 || j > m {
        return Err(EpError::UserOutOfRange { j, m });
    }
    Ok(field.component(w, j - 1))
}

/// Exhaustively checks that `(u_1, …, u_J) ↦ ⊕ u_j` is injective on
/// `C_1 × … × C_J` for the first `users` pairs.
pub fn check_uspm<F: BinaryExtension>(eps: &EpSet<F>, users: usize) -> Result<bool> {
    if users > MAX_USPM_USERS {
        return Err(EpError::TooLargeForExhaustiveCheck {
            got: users,
            max: MAX_USPM_USERS,
        });
    }
    if users == 0 {
        return Err(EpError::NoUsers);
    }
    if users > eps.users() {
        return Err(EpError::TooManyUsers {
            users,
            m: eps.users(),
        });
    }
    let field = eps.field();
    let pairs = &eps.pairs[..users];
    let mut seen = HashSet::with_capacity(1 << users);
    for pattern in 0u32..(1 << users) {
        let sum = pairs.iter().enumerate().fold(field.zero(), |acc, (j, p)| {
            let e = if (pattern >> j) & 1 == 1 { &p.e1 } else { &p.e0 };
            field.add(&acc, e)
        });
        if !seen.insert(sum) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2m::{FieldElement, FieldSpec, WideField};

    fn gf(m: u32) -> FieldSpec {
        FieldSpec::new(m, None).unwrap()
    }

    #[test]
    fn orthogonal_set_m3() {
        let f = gf(3);
        let eps = EpSet::orthogonal(f.clone(), 3).unwrap();
        let tuples: Vec<_> = eps
            .pairs()
            .iter()
            .map(|p| (f.to_tuple(*p.zero_image()), f.to_tuple(*p.one_image())))
            .collect();
        assert_eq!(
            tuples,
            vec![
                (vec![0, 0, 0], vec![1, 0, 0]),
                (vec![0, 0, 0], vec![0, 1, 0]),
                (vec![0, 0, 0], vec![0, 0, 1]),
            ]
        );
        assert_eq!(
            EpSet::orthogonal(f, 4).unwrap_err(),
            EpError::TooManyUsers { users: 4, m: 3 }
        );
        let single = EpSet::orthogonal(gf(2), 1).unwrap();
        assert_eq!(single.users(), 1);
        assert_eq!(*single.pair(1).unwrap().one_image(), FieldElement::ONE);
    }

    #[test]
    fn switching_function() {
        let f = gf(3);
        let a2 = f.power_of_alpha(2).unwrap();
        let pair = ElementPair::new(FieldElement::ZERO, a2).unwrap();
        assert_eq!(f_b2q(1, &pair).unwrap(), a2);
        assert_eq!(f_b2q(0, &pair).unwrap(), FieldElement::ZERO);
        assert!(f_b2q(2, &pair).is_err());
        let general = ElementPair::new(f.power_of_alpha(4).unwrap(), a2).unwrap();
        assert_eq!(f_b2q(0, &general).unwrap(), f.power_of_alpha(4).unwrap());
        assert_eq!(
            ElementPair::new(a2, a2).unwrap_err(),
            EpError::DegeneratePair
        );
    }

    #[test]
    fn user_sequence_is_one_hot_at_user_position() {
        let f = gf(3);
        let eps = EpSet::orthogonal(f.clone(), 3).unwrap();
        let seq = encode_user_sequence(&[1, 0, 1], eps.pair(2).unwrap()).unwrap();
        let tuples: Vec<_> = seq.iter().map(|e| f.to_tuple(*e)).collect();
        assert_eq!(tuples, vec![vec![0, 1, 0], vec![0, 0, 0], vec![0, 1, 0]]);
        let zeros = encode_user_sequence(&[0, 0], eps.pair(1).unwrap()).unwrap();
        assert!(zeros.iter().all(|e| e.is_zero()));
        let one = encode_user_sequence(&[1], eps.pair(1).unwrap()).unwrap();
        assert_eq!(one, vec![FieldElement::ONE]);
    }

    #[test]
    fn ffsp_and_inverse() {
        let f = gf(3);
        let eps = EpSet::orthogonal(f.clone(), 3).unwrap();
        let w = ffsp(&f, &eps.encode_block(&[1, 0, 1]).unwrap());
        assert_eq!(f.to_tuple(w), vec![1, 0, 1]);
        assert_eq!(f_q2b(&f, &w, 1).unwrap(), 1);
        assert_eq!(f_q2b(&f, &w, 2).unwrap(), 0);
        assert_eq!(f_q2b(&f, &FieldElement::ZERO, 3).unwrap(), 0);
        assert!(f_q2b(&f, &w, 0).is_err());
        assert!(f_q2b(&f, &w, 4).is_err());
        assert_eq!(ffsp(&f, &[FieldElement::ZERO; 3]), FieldElement::ZERO);
        assert_eq!(
            ffsp(&f, &[FieldElement::ONE, FieldElement::ONE]),
            FieldElement::ZERO
        );
    }

    #[test]
    fn uspm_detects_collisions() {
        let f = gf(3);
        for j in 1..=3 {
            let eps = EpSet::orthogonal(f.clone(), 3).unwrap();
            assert!(check_uspm(&eps, j).unwrap());
        }
        let dup = EpSet::from_pairs(
            f.clone(),
            vec![
                ElementPair::new(FieldElement::ZERO, FieldElement::ONE).unwrap(),
                ElementPair::new(FieldElement::ZERO, FieldElement::ONE).unwrap(),
            ],
        );
        assert!(!check_uspm(&dup, 2).unwrap());
        assert!(check_uspm(&dup, 1).unwrap());
        let big = EpSet::orthogonal(WideField::new(21).unwrap(), 21).unwrap();
        assert!(matches!(
            check_uspm(&big, 21),
            Err(EpError::TooLargeForExhaustiveCheck { .. })
        ));
    }

    #[test]
    fn uspm_roundtrip_exhaustive() {
        for m in 2..=10u32 {
            let f = gf(m);
            for users in 1..=m as usize {
                let eps = EpSet::orthogonal(f.clone(), users).unwrap();
                for pattern in 0u32..(1 << users) {
                    let bits: Vec<u8> = (0..users).map(|j| ((pattern >> j) & 1) as u8).collect();
                    let w = ffsp(&f, &eps.encode_block(&bits).unwrap());
                    let back: Vec<u8> = (1..=users).map(|j| f_q2b(&f, &w, j).unwrap()).collect();
                    assert_eq!(back, bits);
                }
            }
        }
    }

    #[test]
    fn orthogonal_supports_are_disjoint() {
        let w = WideField::new(70).unwrap();
        let eps = EpSet::orthogonal(w, 70).unwrap();
        let mut seen = HashSet::new();
        for p in eps.pairs() {
            assert!(p.zero_image().is_zero());
            for i in p.one_image().support() {
                assert!(seen.insert(i));
            }
        }
        assert_eq!(seen.len(), 70);
    }

    proptest::proptest! {
        #[test]
        fn ffsp_is_linear(m in 2u32..=12, a in proptest::collection::vec(0u32..4096, 1..8),
                          b in proptest::collection::vec(0u32..4096, 1..8)) {
            let f = gf(m);
            let mask = (1u32 << m) - 1;
            let len = a.len().min(b.len());
            let ua: Vec<_> = a[..len].iter().map(|&x| FieldElement::from_repr(x & mask)).collect();
            let ub: Vec<_> = b[..len].iter().map(|&x| FieldElement::from_repr(x & mask)).collect();
            let uab: Vec<_> = ua.iter().zip(&ub).map(|(x, y)| f.add(*x, *y)).collect();
            proptest::prop_assert_eq!(f.add(ffsp(&f, &ua), ffsp(&f, &ub)), ffsp(&f, &uab));
        }
    }
}
