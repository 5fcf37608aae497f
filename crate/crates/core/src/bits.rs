use std::fmt;

use serde::{Serialize, Serializer};

/// An ordered string of classical bits.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct BitString(Vec<bool>);

impl BitString {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn zeros(len: usize) -> Self {
        Self(vec![false; len])
    }

    /// From 0/1 values; any nonzero byte counts as 1.
    pub fn from_bits(bits: &[u8]) -> Self {
        Self(bits.iter().map(|&b| b != 0).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> bool {
        self.0[i]
    }

    pub fn set(&mut self, i: usize, value: bool) {
        self.0[i] = value;
    }

    pub fn flip(&mut self, i: usize) {
        self.0[i] = !self.0[i];
    }

    pub fn push(&mut self, bit: bool) {
        self.0.push(bit);
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[bool] {
        &self.0
    }

    /// `self ‖ other`.
    pub fn concat(&self, other: &BitString) -> BitString {
        Self(self.0.iter().chain(&other.0).copied().collect())
    }

    /// XOR of the bits at `positions`.
    pub fn parity<I: IntoIterator<Item = usize>>(&self, positions: I) -> bool {
        positions.into_iter().fold(false, |acc, i| acc ^ self.0[i])
    }

    /// Number of positions where `self` and `other` differ.
    pub fn hamming(&self, other: &BitString) -> usize {
        self.0.iter().zip(&other.0).filter(|(a, b)| a != b).count()
    }

    /// Lowercase hex, most significant bit first; a trailing partial byte is
    /// zero-padded on the right.
    pub fn to_hex(&self) -> String {
        self.0
            .chunks(8)
            .map(|chunk| {
                let byte = chunk
                    .iter()
                    .enumerate()
                    .fold(0u8, |acc, (i, &b)| acc | ((b as u8) << (7 - i)));
                format!("{byte:02x}")
            })
            .collect()
    }
}

impl FromIterator<bool> for BitString {
    fn from_iter<T: IntoIterator<Item = bool>>(iter: T) -> Self {
        Self(iter.into_iter().collect())
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl Serialize for BitString {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hex_is_msb_first() {
        let b = BitString::from_bits(&[1, 0, 1, 0, 0, 0, 0, 1, 1]);
        assert_eq!(b.to_hex(), "a180");
        assert_eq!(BitString::new().to_hex(), "");
        assert_eq!(b.to_string(), "101000011");
    }

    #[test]
    fn parity_and_distance() {
        let a = BitString::from_bits(&[1, 1, 0, 1]);
        assert!(a.parity(0..4));
        assert!(!a.parity([0, 1]));
        let mut b = a.clone();
        b.flip(2);
        assert_eq!(a.hamming(&b), 1);
        assert_eq!(a.concat(&b).len(), 8);
    }
}
