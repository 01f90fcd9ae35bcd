//! Signed Pauli strings stored as packed X/Z bit rows.
//!
//! Qubit 0 is the leftmost character of the text form. A letter is encoded
//! by its `(x, z)` bits: `I = (0,0)`, `X = (1,0)`, `Y = (1,1)`, `Z = (0,1)`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

const WORD: usize = 64;

fn words_for(n: usize) -> usize {
    n.div_ceil(WORD)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    I,
    X,
    Y,
    Z,
}

impl Letter {
    pub fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Letter::I,
            (true, false) => Letter::X,
            (true, true) => Letter::Y,
            (false, true) => Letter::Z,
        }
    }

    pub fn bits(self) -> (bool, bool) {
        match self {
            Letter::I => (false, false),
            Letter::X => (true, false),
            Letter::Y => (true, true),
            Letter::Z => (false, true),
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Letter::I => 'I',
            Letter::X => 'X',
            Letter::Y => 'Y',
            Letter::Z => 'Z',
        }
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c {
            'I' => Some(Letter::I),
            'X' => Some(Letter::X),
            'Y' => Some(Letter::Y),
            'Z' => Some(Letter::Z),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Sign {
    #[default]
    Plus,
    Minus,
}

impl Sign {
    pub fn from_negative(negative: bool) -> Self {
        if negative {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    pub fn is_negative(self) -> bool {
        self == Sign::Minus
    }

    pub fn as_f64(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl std::ops::Mul for Sign {
    type Output = Sign;

    fn mul(self, rhs: Sign) -> Sign {
        Sign::from_negative(self.is_negative() != rhs.is_negative())
    }
}

/// Hermitian Pauli string with a ±1 sign.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliString {
    n: usize,
    x: Vec<u64>,
    z: Vec<u64>,
    sign: Sign,
}

impl PauliString {
    /// The identity on `n` qubits.
    pub fn identity(n: usize) -> Self {
        let w = words_for(n);
        PauliString {
            n,
            x: vec![0; w],
            z: vec![0; w],
            sign: Sign::Plus,
        }
    }

    /// Single-letter Pauli acting on `qubit`.
    pub fn single(n: usize, qubit: usize, letter: Letter) -> Self {
        let mut p = Self::identity(n);
        p.set(qubit, letter);
        p
    }

    pub fn from_letters(letters: &[Letter], sign: Sign) -> Self {
        let mut p = Self::identity(letters.len());
        for (q, &l) in letters.iter().enumerate() {
            p.set(q, l);
        }
        p.sign = sign;
        p
    }

    /// Parses `[+|-]<IXYZ...>`. The Unicode minus sign is accepted too.
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        let (sign, word, offset) = match text.chars().next() {
            Some('+') => (Sign::Plus, &text[1..], 1),
            Some('-') => (Sign::Minus, &text[1..], 1),
            Some('−') => (Sign::Minus, &text['−'.len_utf8()..], 1),
            _ => (Sign::Plus, text, 0),
        };
        let mut letters = Vec::with_capacity(word.len());
        for (i, c) in word.chars().enumerate() {
            match Letter::from_char(c) {
                Some(l) => letters.push(l),
                None => {
                    return Err(Error::InvalidLetter {
                        letter: c,
                        position: i + offset,
                    })
                }
            }
        }
        if letters.is_empty() {
            return Err(Error::EmptyPauli);
        }
        Ok(Self::from_letters(&letters, sign))
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    pub fn set_sign(&mut self, sign: Sign) {
        self.sign = sign;
    }

    pub fn with_sign(mut self, sign: Sign) -> Self {
        self.sign = sign;
        self
    }

    /// Same letters with a `+` sign.
    pub fn unsigned(&self) -> Self {
        self.clone().with_sign(Sign::Plus)
    }

    pub fn x_bit(&self, q: usize) -> bool {
        self.x[q / WORD] >> (q % WORD) & 1 == 1
    }

    pub fn z_bit(&self, q: usize) -> bool {
        self.z[q / WORD] >> (q % WORD) & 1 == 1
    }

    pub fn letter(&self, q: usize) -> Letter {
        Letter::from_bits(self.x_bit(q), self.z_bit(q))
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        (0..self.n).map(|q| self.letter(q))
    }

    pub fn set(&mut self, q: usize, letter: Letter) {
        assert!(q < self.n, "qubit {q} out of range for {} qubits", self.n);
        let (x, z) = letter.bits();
        let (w, b) = (q / WORD, q % WORD);
        self.x[w] = (self.x[w] & !(1 << b)) | ((x as u64) << b);
        self.z[w] = (self.z[w] & !(1 << b)) | ((z as u64) << b);
    }

    /// Number of non-identity letters.
    pub fn weight(&self) -> usize {
        self.x
            .iter()
            .zip(&self.z)
            .map(|(x, z)| (x | z).count_ones() as usize)
            .sum()
    }

    pub fn is_identity(&self) -> bool {
        self.weight() == 0
    }

    /// Qubits carrying a non-identity letter, ascending.
    pub fn support(&self) -> Vec<usize> {
        (0..self.n)
            .filter(|&q| self.x_bit(q) || self.z_bit(q))
            .collect()
    }

    /// True when every letter is I or Z.
    pub fn is_diagonal(&self) -> bool {
        self.x.iter().all(|&w| w == 0)
    }

    fn check_len(&self, other: &PauliString) -> Result<()> {
        if self.n != other.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        Ok(())
    }

    /// Symplectic commutation test; signs are ignored.
    pub fn commutes(&self, other: &PauliString) -> Result<bool> {
        self.check_len(other)?;
        Ok(self.commutes_unchecked(other))
    }

    pub(crate) fn commutes_unchecked(&self, other: &PauliString) -> bool {
        let mut parity = 0u32;
        for i in 0..self.x.len() {
            parity ^= ((self.x[i] & other.z[i]) ^ (self.z[i] & other.x[i])).count_ones();
        }
        parity.is_multiple_of(2)
    }

    /// Overwrites the letters with `self * other` and returns the phase
    /// exponent `k` (mod 4) such that `self * other = i^k * result` as
    /// letter strings. Signs are not touched.
    pub(crate) fn mul_letters_assign(&mut self, other: &PauliString) -> u8 {
        let mut plus = 0u32;
        let mut minus = 0u32;
        for i in 0..self.x.len() {
            let (x1, z1, x2, z2) = (self.x[i], self.z[i], other.x[i], other.z[i]);
            // YZ = iX, XY = iZ, ZX = iY
            let p = (x1 & z1 & !x2 & z2) | (x1 & !z1 & x2 & z2) | (!x1 & z1 & x2 & !z2);
            // YX = -iZ, XZ = -iY, ZY = -iX
            let m = (x1 & z1 & x2 & !z2) | (x1 & !z1 & !x2 & z2) | (!x1 & z1 & x2 & z2);
            plus += p.count_ones();
            minus += m.count_ones();
            self.x[i] = x1 ^ x2;
            self.z[i] = z1 ^ z2;
        }
        ((plus + 3 * minus) % 4) as u8
    }

    pub(crate) fn count_y(&self) -> u32 {
        self.x
            .iter()
            .zip(&self.z)
            .map(|(x, z)| (x & z).count_ones())
            .sum()
    }

    /// Operator product `p * q = i^k * result`, with `result` carrying a `+`
    /// sign and both input signs folded into `k`.
    pub fn multiply(p: &PauliString, q: &PauliString) -> Result<(PauliString, u8)> {
        p.check_len(q)?;
        let mut out = p.unsigned();
        let mut k = out.mul_letters_assign(q);
        if p.sign.is_negative() {
            k += 2;
        }
        if q.sign.is_negative() {
            k += 2;
        }
        Ok((out, k % 4))
    }

    pub(crate) fn xor_x(&mut self, q: usize, bit: bool) {
        self.x[q / WORD] ^= (bit as u64) << (q % WORD);
    }

    pub(crate) fn xor_z(&mut self, q: usize, bit: bool) {
        self.z[q / WORD] ^= (bit as u64) << (q % WORD);
    }

    pub(crate) fn swap_xz(&mut self, q: usize) {
        let (x, z) = (self.x_bit(q), self.z_bit(q));
        if x != z {
            self.xor_x(q, true);
            self.xor_z(q, true);
        }
    }

    pub(crate) fn negate(&mut self) {
        self.sign = self.sign.flip();
    }

    /// Letters only, no sign.
    pub fn word(&self) -> String {
        self.letters().map(Letter::as_char).collect()
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.sign.is_negative() {
            f.write_str("-")?;
        }
        f.write_str(&self.word())
    }
}

impl fmt::Debug for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PauliString({self})")
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PauliString::parse(s)
    }
}

impl Serialize for PauliString {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PauliString {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        PauliString::parse(&text).map_err(serde::de::Error::custom)
    }
}

/// One factor `exp(i * coeff * pauli)` of a product formula.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PauliTerm {
    pub pauli: PauliString,
    pub coeff: f64,
}

impl PauliTerm {
    pub fn new(pauli: PauliString, coeff: f64) -> Result<Self> {
        if !coeff.is_finite() {
            return Err(Error::NonFiniteAngle(coeff));
        }
        Ok(PauliTerm { pauli, coeff })
    }

    pub fn parse(text: &str, coeff: f64) -> Result<Self> {
        Self::new(PauliString::parse(text)?, coeff)
    }

    pub fn num_qubits(&self) -> usize {
        self.pauli.num_qubits()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    #[test]
    fn parse_letter_convention() {
        let xiz = p("XIZ");
        assert_eq!(xiz.num_qubits(), 3);
        assert!(xiz.x_bit(0) && !xiz.x_bit(1) && !xiz.x_bit(2));
        assert!(!xiz.z_bit(0) && !xiz.z_bit(1) && xiz.z_bit(2));
        assert_eq!(xiz.sign(), Sign::Plus);

        let zz = p("−ZZ");
        assert_eq!(zz.num_qubits(), 2);
        assert_eq!(zz.sign(), Sign::Minus);
        assert!(zz.z_bit(0) && zz.z_bit(1));
        assert_eq!(p("-ZZ"), zz);
        assert_eq!(p("+ZZ"), p("ZZ"));
    }

    #[test]
    fn parse_rejections() {
        assert!(matches!(
            PauliString::parse("XQ"),
            Err(Error::InvalidLetter {
                letter: 'Q',
                position: 1
            })
        ));
        assert!(matches!(PauliString::parse(""), Err(Error::EmptyPauli)));
        assert!(matches!(PauliString::parse("-"), Err(Error::EmptyPauli)));
        assert!(PauliString::parse("x").is_err());
    }

    #[test]
    fn weights() {
        assert_eq!(p("ZZZIXYX").weight(), 6);
        assert_eq!(p("IIII").weight(), 0);
        assert_eq!(p("IIIIXYX").weight(), 3);
        assert_eq!(p("IIIIXYX").support(), vec![4, 5, 6]);
    }

    #[test]
    fn commutation_examples() {
        assert!(!p("X").commutes(&p("Z")).unwrap());
        assert!(p("ZZZZ").commutes(&p("YYXX")).unwrap());
        assert!(!p("XII").commutes(&p("ZZI")).unwrap());
        assert!(p("-XX").commutes(&p("ZZ")).unwrap());
        assert!(matches!(
            p("X").commutes(&p("XX")),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn multiply_examples() {
        assert_eq!(
            PauliString::multiply(&p("X"), &p("X")).unwrap(),
            (p("I"), 0)
        );
        assert_eq!(
            PauliString::multiply(&p("X"), &p("Z")).unwrap(),
            (p("Y"), 3)
        );
        assert_eq!(
            PauliString::multiply(&p("XX"), &p("ZZ")).unwrap(),
            (p("YY"), 2)
        );
        assert_eq!(
            PauliString::multiply(&p("-X"), &p("Z")).unwrap(),
            (p("Y"), 1)
        );
        assert_eq!(
            PauliString::multiply(&p("-YZ"), &p("-YZ")).unwrap(),
            (p("II"), 0)
        );
    }

    #[test]
    fn wide_strings_cross_word_boundary() {
        let mut text = "I".repeat(130);
        text.replace_range(63..66, "XYZ");
        let s = p(&text);
        assert_eq!(s.weight(), 3);
        assert_eq!(s.letter(64), Letter::Y);
        assert_eq!(s.to_string(), text);
    }
}
