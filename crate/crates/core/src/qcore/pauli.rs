use std::fmt;

use serde::{Deserialize, Serialize};

use super::matrix::{ComplexMatrix, C64, ONE, ZERO};

/// The Pauli `X^i Z^j`, phase dropped. Index `k = 2i + j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct PauliLabel {
    pub i: u8,
    pub j: u8,
}

impl PauliLabel {
    pub const I: Self = Self { i: 0, j: 0 };
    pub const Z: Self = Self { i: 0, j: 1 };
    pub const X: Self = Self { i: 1, j: 0 };
    /// `XZ` (= −iY).
    pub const XZ: Self = Self { i: 1, j: 1 };
    pub const ALL: [Self; 4] = [Self::I, Self::Z, Self::X, Self::XZ];

    pub fn new(i: u8, j: u8) -> Self {
        assert!(i < 2 && j < 2, "Pauli bits must be 0 or 1");
        Self { i, j }
    }

    pub fn from_index(k: usize) -> Self {
        assert!(k < 4);
        Self { i: (k >> 1) as u8, j: (k & 1) as u8 }
    }

    pub fn index(self) -> usize {
        2 * self.i as usize + self.j as usize
    }

    pub fn is_identity(self) -> bool {
        self.i == 0 && self.j == 0
    }

    /// Product up to phase.
    pub fn mul(self, other: Self) -> Self {
        Self { i: self.i ^ other.i, j: self.j ^ other.j }
    }

    /// `X^i Z^j`
    pub fn matrix(self) -> ComplexMatrix {
        let x = ComplexMatrix::from_vec(vec![ZERO, ONE, ONE, ZERO]);
        let z = ComplexMatrix::from_vec(vec![ONE, ZERO, ZERO, -ONE]);
        let mut m = ComplexMatrix::identity(2);
        if self.i == 1 {
            m = m.matmul(&x);
        }
        if self.j == 1 {
            m = m.matmul(&z);
        }
        m
    }

    pub fn name(self) -> &'static str {
        match self.index() {
            0 => "I",
            1 => "Z",
            2 => "X",
            _ => "XZ",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "I" | "00" => Some(Self::I),
            "Z" | "01" => Some(Self::Z),
            "X" | "10" => Some(Self::X),
            "XZ" | "Y" | "11" => Some(Self::XZ),
            _ => None,
        }
    }
}

impl fmt::Display for PauliLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl Serialize for PauliLabel {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for PauliLabel {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Self::parse(&s).ok_or_else(|| serde::de::Error::custom(format!("unknown Pauli label {s:?}")))
    }
}

/// Pauli `Y` with its usual phase, for correlators.
pub fn pauli_y() -> ComplexMatrix {
    ComplexMatrix::from_vec(vec![ZERO, C64::new(0.0, -1.0), C64::new(0.0, 1.0), ZERO])
}

pub fn pauli_x() -> ComplexMatrix {
    PauliLabel::X.matrix()
}

pub fn pauli_z() -> ComplexMatrix {
    PauliLabel::Z.matrix()
}
