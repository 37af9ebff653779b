//! Arithmetic over the binary extension field GF(2^m).
//!
//! Elements are stored as the integer bitmask of their m-tuple over GF(2):
//! bit `i` is the coefficient of `α^i`. Addition is a single XOR, and the
//! exponent form is recovered through a log table.
//!
//! Two representations are provided. [`FieldSpec`] builds full exp/log
//! tables and supports general multiplication for `2 ≤ m ≤ 16`.
//! [`WideField`] is table-free and works for any `m ≥ 2`; it only exposes the
//! unit elements `α^0 … α^{m-1}` and addition, which is all the orthogonal
//! element-pair machinery ever needs.

use std::fmt;

use thiserror::Error;

/// Largest extension degree for which full tables are built.
pub const MAX_TABLE_DEGREE: u32 = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("extension degree {0} is outside the supported range")]
    DegreeOutOfRange(u32),
    #[error("polynomial {poly:#x} does not have degree {m}")]
    WrongDegree { poly: u32, m: u32 },
    #[error("polynomial {0:#x} is not primitive")]
    NotPrimitive(u32),
    #[error("exponent {exp} out of range (order {order})")]
    ExponentOutOfRange { exp: usize, order: usize },
    #[error("element {0:#x} is not in the field")]
    InvalidElement(u32),
    #[error("zero has no multiplicative inverse or logarithm")]
    ZeroElement,
    #[error("tuple has length {got}, expected {expected}")]
    TupleLength { got: usize, expected: usize },
    #[error("tuple entry {0} is not a bit")]
    NotABit(u8),
}

pub type Result<T> = std::result::Result<T, FieldError>;

/// Default primitive polynomials, indexed by `m - 2`.
const PRIMITIVE_POLYS: [u32; 15] = [
    0x7,     // x^2 + x + 1
    0xB,     // x^3 + x + 1
    0x13,    // x^4 + x + 1
    0x25,    // x^5 + x^2 + 1
    0x43,    // x^6 + x + 1
    0x89,    // x^7 + x^3 + 1
    0x11D,   // x^8 + x^4 + x^3 + x^2 + 1
    0x211,   // x^9 + x^4 + 1
    0x409,   // x^10 + x^3 + 1
    0x805,   // x^11 + x^2 + 1
    0x1053,  // x^12 + x^6 + x^4 + x + 1
    0x201B,  // x^13 + x^4 + x^3 + x + 1
    0x4443,  // x^14 + x^10 + x^6 + x + 1
    0x8003,  // x^15 + x + 1
    0x1100B, // x^16 + x^12 + x^3 + x + 1
];

/// Returns the built-in primitive polynomial for degree `m`.
pub fn default_primitive_poly(m: u32) -> Option<u32> {
    (2..=MAX_TABLE_DEGREE)
        .contains(&m)
        .then(|| PRIMITIVE_POLYS[(m - 2) as usize])
}

/// An element of GF(2^m) in m-tuple (bitmask) form.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement(u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    /// Wraps a raw bitmask without checking it against any field.
    pub const fn from_repr(repr: u32) -> Self {
        FieldElement(repr)
    }

    pub const fn repr(self) -> u32 {
        self.0
    }

    pub const fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// Coefficient of `α^i` in the m-tuple.
    pub fn component(self, i: usize) -> u8 {
        if i >= 32 {
            0
        } else {
            ((self.0 >> i) & 1) as u8
        }
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldElement({:#b})", self.0)
    }
}

/// GF(2^m) with full exponent/logarithm tables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldSpec {
    m: u32,
    poly: u32,
    // exp[i] = α^i for 0 ≤ i < 2^m - 1
    exp: Vec<u32>,
    // log[e] = i with α^i = e; log[0] is unused
    log: Vec<u32>,
}

impl FieldSpec {
    /// Builds GF(2^m) from `poly`, or from the built-in table when `poly` is `None`.
    ///
    /// Primitivity is checked by walking the powers of `α` and requiring that
    /// they cycle back to 1 only after all `2^m - 1` nonzero elements.
    pub fn new(m: u32, poly: Option<u32>) -> Result<Self> {
        if !(2..=MAX_TABLE_DEGREE).contains(&m) {
            return Err(FieldError::DegreeOutOfRange(m));
        }
        let poly = poly.unwrap_or_else(|| PRIMITIVE_POLYS[(m - 2) as usize]);
        if poly >> m != 1 {
            return Err(FieldError::WrongDegree { poly, m });
        }
        let q = 1usize << m;
        let order = q - 1;
        let mut exp = Vec::with_capacity(order);
        let mut log = vec![u32::MAX; q];
        let mut x: u32 = 1;
        for i in 0..order {
            if log[x as usize] != u32::MAX {
                return Err(FieldError::NotPrimitive(poly));
            }
            log[x as usize] = i as u32;
            exp.push(x);
            x <<= 1;
            if x & (1 << m) != 0 {
                x ^= poly;
            }
        }
        if x != 1 {
            return Err(FieldError::NotPrimitive(poly));
        }
        Ok(FieldSpec { m, poly, exp, log })
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    pub fn primitive_poly(&self) -> u32 {
        self.poly
    }

    /// Number of elements `q = 2^m`.
    pub fn size(&self) -> usize {
        1 << self.m
    }

    /// Multiplicative order `2^m - 1`.
    pub fn order(&self) -> usize {
        self.exp.len()
    }

    /// Iterates over all `q` elements, zero first.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.size() as u32).map(FieldElement)
    }

    pub fn element(&self, repr: u32) -> Result<FieldElement> {
        if (repr as usize) < self.size() {
            Ok(FieldElement(repr))
        } else {
            Err(FieldError::InvalidElement(repr))
        }
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(a.0 ^ b.0)
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.is_zero() || b.is_zero() {
            return FieldElement::ZERO;
        }
        let s = self.log[a.0 as usize] as usize + self.log[b.0 as usize] as usize;
        FieldElement(self.exp[s % self.order()])
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.is_zero() {
            return Err(FieldError::ZeroElement);
        }
        let l = self.log[a.0 as usize] as usize;
        Ok(FieldElement(self.exp[(self.order() - l) % self.order()]))
    }

    pub fn pow(&self, a: FieldElement, e: u64) -> FieldElement {
        if e == 0 {
            return FieldElement::ONE;
        }
        if a.is_zero() {
            return FieldElement::ZERO;
        }
        let l = self.log[a.0 as usize] as u64;
        FieldElement(self.exp[((l * (e % self.order() as u64)) % self.order() as u64) as usize])
    }

    /// `α^i` for `0 ≤ i < 2^m - 1`.
    pub fn power_of_alpha(&self, i: usize) -> Result<FieldElement> {
        self.exp
            .get(i)
            .map(|&x| FieldElement(x))
            .ok_or(FieldError::ExponentOutOfRange {
                exp: i,
                order: self.order(),
            })
    }

    /// Exponent `i` such that `a = α^i`.
    pub fn log(&self, a: FieldElement) -> Result<usize> {
        if a.is_zero() {
            return Err(FieldError::ZeroElement);
        }
        if a.0 as usize >= self.size() {
            return Err(FieldError::InvalidElement(a.0));
        }
        Ok(self.log[a.0 as usize] as usize)
    }

    /// The m-tuple `(a_0, …, a_{m-1})` of `a`.
    pub fn to_tuple(&self, a: FieldElement) -> Vec<u8> {
        (0..self.m as usize).map(|i| a.component(i)).collect()
    }

    pub fn from_tuple(&self, tuple: &[u8]) -> Result<FieldElement> {
        if tuple.len() != self.m as usize {
            return Err(FieldError::TupleLength {
                got: tuple.len(),
                expected: self.m as usize,
            });
        }
        let mut repr = 0u32;
        for (i, &b) in tuple.iter().enumerate() {
            match b {
                0 => {}
                1 => repr |= 1 << i,
                other => return Err(FieldError::NotABit(other)),
            }
        }
        Ok(FieldElement(repr))
    }
}

/// A GF(2^m) element for arbitrary `m`, stored as a packed m-tuple.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WideElement {
    words: Vec<u64>,
}

impl WideElement {
    pub fn component(&self, i: usize) -> u8 {
        self.words
            .get(i / 64)
            .map_or(0, |w| ((w >> (i % 64)) & 1) as u8)
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Positions of the nonzero coefficients.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            (0..64).filter(move |b| (w >> b) & 1 == 1).map(move |b| wi * 64 + b)
        })
    }
}

impl fmt::Debug for WideElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "WideElement{:?}", self.support().collect::<Vec<_>>())
    }
}

/// Table-free view of GF(2^m) restricted to the span of the unit elements
/// under addition. No general multiplication is available.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WideField {
    m: usize,
}

impl WideField {
    pub fn new(m: usize) -> Result<Self> {
        if m < 2 {
            return Err(FieldError::DegreeOutOfRange(m as u32));
        }
        Ok(WideField { m })
    }

    pub fn degree(&self) -> usize {
        self.m
    }

    fn words(&self) -> usize {
        self.m.div_ceil(64)
    }

    pub fn zero(&self) -> WideElement {
        WideElement {
            words: vec![0; self.words()],
        }
    }

    /// The unit element `α^i`, `0 ≤ i < m`.
    pub fn unit(&self, i: usize) -> Result<WideElement> {
        if i >= self.m {
            return Err(FieldError::ExponentOutOfRange { exp: i, order: self.m });
        }
        let mut e = self.zero();
        e.words[i / 64] |= 1 << (i % 64);
        Ok(e)
    }

    pub fn add(&self, a: &WideElement, b: &WideElement) -> WideElement {
        WideElement {
            words: a.words.iter().zip(&b.words).map(|(x, y)| x ^ y).collect(),
        }
    }

    pub fn to_tuple(&self, a: &WideElement) -> Vec<u8> {
        (0..self.m).map(|i| a.component(i)).collect()
    }

    pub fn from_tuple(&self, tuple: &[u8]) -> Result<WideElement> {
        if tuple.len() != self.m {
            return Err(FieldError::TupleLength {
                got: tuple.len(),
                expected: self.m,
            });
        }
        let mut e = self.zero();
        for (i, &b) in tuple.iter().enumerate() {
            match b {
                0 => {}
                1 => e.words[i / 64] |= 1 << (i % 64),
                other => return Err(FieldError::NotABit(other)),
            }
        }
        Ok(e)
    }
}

/// The operations element-pair codes need from a binary extension field.
pub trait BinaryExtension {
    type Elem: Clone + Eq + std::hash::Hash + fmt::Debug;

    fn degree(&self) -> usize;
    fn zero(&self) -> Self::Elem;
    /// `α^i` for `0 ≤ i < m`.
    fn unit(&self, i: usize) -> Result<Self::Elem>;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn component(&self, a: &Self::Elem, i: usize) -> u8;
    fn to_tuple(&self, a: &Self::Elem) -> Vec<u8> {
        (0..self.degree()).map(|i| self.component(a, i)).collect()
    }
    fn from_tuple(&self, tuple: &[u8]) -> Result<Self::Elem>;
}

impl BinaryExtension for FieldSpec {
    type Elem = FieldElement;

    fn degree(&self) -> usize {
        self.m as usize
    }
    fn zero(&self) -> FieldElement {
        FieldElement::ZERO
    }
    fn unit(&self, i: usize) -> Result<FieldElement> {
        if i >= self.m as usize {
            return Err(FieldError::ExponentOutOfRange {
                exp: i,
                order: self.m as usize,
            });
        }
        self.power_of_alpha(i)
    }
    fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        FieldSpec::add(self, *a, *b)
    }
    fn component(&self, a: &FieldElement, i: usize) -> u8 {
        a.component(i)
    }
    fn from_tuple(&self, tuple: &[u8]) -> Result<FieldElement> {
        FieldSpec::from_tuple(self, tuple)
    }
}

impl BinaryExtension for WideField {
    type Elem = WideElement;

    fn degree(&self) -> usize {
        self.m
    }
    fn zero(&self) -> WideElement {
        WideField::zero(self)
    }
    fn unit(&self, i: usize) -> Result<WideElement> {
        WideField::unit(self, i)
    }
    fn add(&self, a: &WideElement, b: &WideElement) -> WideElement {
        WideField::add(self, a, b)
    }
    fn component(&self, a: &WideElement, i: usize) -> u8 {
        a.component(i)
    }
    fn from_tuple(&self, tuple: &[u8]) -> Result<WideElement> {
        WideField::from_tuple(self, tuple)
    }
}
