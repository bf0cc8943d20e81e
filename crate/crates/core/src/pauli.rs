//! N-qubit Pauli words stored as a pair of bitmasks.
//!
//! Qubit `l` carries `X` when bit `l` of `x` is set, `Z` when bit `l` of `z`
//! is set, and `Y` when both are set. Matrix-wise a word is
//! `i^{|x & z|} X^x Z^z`, which makes every word Hermitian with `P^2 = I`.
//!
//! Words are enumerated by a base-4 little-endian index: digit `l` of `j`
//! selects the letter on qubit `l` with `0 -> I, 1 -> X, 2 -> Y, 3 -> Z`.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};

/// Largest register that can be enumerated with a `u64` Pauli index.
pub const MAX_INDEXED_QUBITS: usize = 31;

/// Position of a Pauli word in the base-4 enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PauliIndex(pub u64);

impl fmt::Display for PauliIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Number of Pauli words on `n_qubits` qubits, `4^n`.
pub fn word_count(n_qubits: usize) -> u64 {
    assert!(n_qubits <= MAX_INDEXED_QUBITS, "too many qubits to index");
    1u64 << (2 * n_qubits)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Letter {
    I,
    X,
    Y,
    Z,
}

impl Letter {
    fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Letter::I,
            (true, false) => Letter::X,
            (true, true) => Letter::Y,
            (false, true) => Letter::Z,
        }
    }

    fn bits(self) -> (bool, bool) {
        match self {
            Letter::I => (false, false),
            Letter::X => (true, false),
            Letter::Y => (true, true),
            Letter::Z => (false, true),
        }
    }

    fn digit(self) -> u64 {
        match self {
            Letter::I => 0,
            Letter::X => 1,
            Letter::Y => 2,
            Letter::Z => 3,
        }
    }

    fn from_digit(d: u64) -> Self {
        match d & 3 {
            0 => Letter::I,
            1 => Letter::X,
            2 => Letter::Y,
            _ => Letter::Z,
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
}

/// Tensor product of single-qubit Paulis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PauliWord {
    n_qubits: usize,
    x_mask: u64,
    z_mask: u64,
}

impl PauliWord {
    pub fn identity(n_qubits: usize) -> Self {
        Self::new(n_qubits, 0, 0).expect("identity is always valid")
    }

    pub fn new(n_qubits: usize, x_mask: u64, z_mask: u64) -> Result<Self> {
        if n_qubits == 0 || n_qubits > 63 {
            return Err(Error::QubitCount {
                n_qubits,
                reason: "pauli words need between 1 and 63 qubits",
            });
        }
        let used = (1u64 << n_qubits) - 1;
        if (x_mask | z_mask) & !used != 0 {
            return Err(Error::Config(format!(
                "pauli masks {x_mask:#b}/{z_mask:#b} exceed {n_qubits} qubits"
            )));
        }
        Ok(Self {
            n_qubits,
            x_mask,
            z_mask,
        })
    }

    /// A word with a single non-identity letter.
    pub fn single(n_qubits: usize, qubit: usize, letter: Letter) -> Result<Self> {
        if qubit >= n_qubits {
            return Err(Error::QubitOutOfRange { qubit, n_qubits });
        }
        let (x, z) = letter.bits();
        Self::new(n_qubits, (x as u64) << qubit, (z as u64) << qubit)
    }

    /// Decodes a base-4 index into a word.
    pub fn from_index(index: PauliIndex, n_qubits: usize) -> Result<Self> {
        if n_qubits == 0 || n_qubits > MAX_INDEXED_QUBITS {
            return Err(Error::QubitCount {
                n_qubits,
                reason: "indexed pauli words need between 1 and 31 qubits",
            });
        }
        if index.0 >= word_count(n_qubits) {
            return Err(Error::IndexOutOfRange {
                index: index.0,
                n_qubits,
            });
        }
        let mut x_mask = 0;
        let mut z_mask = 0;
        for qubit in 0..n_qubits {
            let (x, z) = Letter::from_digit(index.0 >> (2 * qubit)).bits();
            x_mask |= (x as u64) << qubit;
            z_mask |= (z as u64) << qubit;
        }
        Ok(Self {
            n_qubits,
            x_mask,
            z_mask,
        })
    }

    pub fn index(&self) -> PauliIndex {
        let j = (0..self.n_qubits).fold(0u64, |acc, q| acc | (self.letter(q).digit() << (2 * q)));
        PauliIndex(j)
    }

    #[inline]
    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    #[inline]
    pub fn x_mask(&self) -> u64 {
        self.x_mask
    }

    #[inline]
    pub fn z_mask(&self) -> u64 {
        self.z_mask
    }

    /// Number of `Y` factors; the word equals `i^{y_count} X^x Z^z`.
    #[inline]
    pub fn y_count(&self) -> u32 {
        (self.x_mask & self.z_mask).count_ones()
    }

    pub fn weight(&self) -> u32 {
        (self.x_mask | self.z_mask).count_ones()
    }

    pub fn is_identity(&self) -> bool {
        self.x_mask == 0 && self.z_mask == 0
    }

    pub fn letter(&self, qubit: usize) -> Letter {
        Letter::from_bits(
            (self.x_mask >> qubit) & 1 == 1,
            (self.z_mask >> qubit) & 1 == 1,
        )
    }

    fn check_same_size(&self, other: &Self) -> Result<()> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::QubitMismatch {
                left: self.n_qubits,
                right: other.n_qubits,
            });
        }
        Ok(())
    }

    /// True iff the words commute, i.e. the symplectic form of the masks is even.
    pub fn commutes(&self, other: &Self) -> Result<bool> {
        self.check_same_size(other)?;
        let anti = (self.x_mask & other.z_mask) ^ (self.z_mask & other.x_mask);
        Ok(anti.count_ones().is_multiple_of(2))
    }

    /// Product `self * other = i^phase * word`, with `phase` in `0..4`.
    pub fn multiply(&self, other: &Self) -> Result<(u8, PauliWord)> {
        self.check_same_size(other)?;
        let x = self.x_mask ^ other.x_mask;
        let z = self.z_mask ^ other.z_mask;
        let swaps = (self.z_mask & other.x_mask).count_ones();
        let phase = self.y_count() as i64 + other.y_count() as i64 + 2 * swaps as i64
            - (x & z).count_ones() as i64;
        let word = PauliWord {
            n_qubits: self.n_qubits,
            x_mask: x,
            z_mask: z,
        };
        Ok((phase.rem_euclid(4) as u8, word))
    }
}

impl fmt::Display for PauliWord {
    /// Letters qubit-0-first, e.g. `ZX` is `Z` on qubit 0 and `X` on qubit 1.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for q in 0..self.n_qubits {
            write!(f, "{}", self.letter(q).as_char())?;
        }
        Ok(())
    }
}

impl FromStr for PauliWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let n_qubits = s.chars().count();
        let mut x_mask = 0;
        let mut z_mask = 0;
        for (q, c) in s.chars().enumerate() {
            let letter = match c.to_ascii_uppercase() {
                'I' => Letter::I,
                'X' => Letter::X,
                'Y' => Letter::Y,
                'Z' => Letter::Z,
                other => return Err(Error::Config(format!("invalid pauli letter {other:?}"))),
            };
            let (x, z) = letter.bits();
            x_mask |= (x as u64) << q;
            z_mask |= (z as u64) << q;
        }
        PauliWord::new(n_qubits, x_mask, z_mask)
    }
}

/// Draws `d` distinct non-identity word indices uniformly without replacement,
/// returned in ascending order.
pub fn sample_subspace<R: Rng + ?Sized>(
    rng: &mut R,
    n_qubits: usize,
    d: usize,
) -> Result<Vec<PauliIndex>> {
    if n_qubits == 0 || n_qubits > MAX_INDEXED_QUBITS {
        return Err(Error::QubitCount {
            n_qubits,
            reason: "indexed pauli words need between 1 and 31 qubits",
        });
    }
    let available = word_count(n_qubits) - 1;
    if d == 0 || d as u64 > available {
        return Err(Error::SubspaceDimension { d, max: available });
    }
    let mut picked: Vec<PauliIndex> = rand::seq::index::sample(rng, available as usize, d)
        .into_iter()
        .map(|i| PauliIndex(i as u64 + 1))
        .collect();
    picked.sort_unstable();
    Ok(picked)
}

/// All non-identity indices `1..4^n`, the deterministic full subspace.
pub fn full_subspace(n_qubits: usize) -> Vec<PauliIndex> {
    (1..word_count(n_qubits)).map(PauliIndex).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn w(s: &str) -> PauliWord {
        s.parse().unwrap()
    }

    #[test]
    fn index_examples() {
        assert_eq!(PauliWord::from_index(PauliIndex(0), 2).unwrap(), w("II"));
        let seven = PauliWord::from_index(PauliIndex(7), 2).unwrap();
        assert_eq!(seven.letter(0), Letter::Z);
        assert_eq!(seven.letter(1), Letter::X);
        assert_eq!(seven.to_string(), "ZX");
        assert_eq!(PauliWord::from_index(PauliIndex(15), 2).unwrap(), w("ZZ"));
        assert!(matches!(
            PauliWord::from_index(PauliIndex(16), 2),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn index_roundtrip_all_three_qubit_words() {
        for j in 0..word_count(3) {
            let word = PauliWord::from_index(PauliIndex(j), 3).unwrap();
            assert_eq!(word.index(), PauliIndex(j));
            assert_eq!(word.to_string().parse::<PauliWord>().unwrap(), word);
        }
    }

    #[test]
    fn commutation_examples() {
        assert!(!w("X").commutes(&w("Z")).unwrap());
        assert!(w("XX").commutes(&w("ZZ")).unwrap());
        for j in 0..16 {
            let p = PauliWord::from_index(PauliIndex(j), 2).unwrap();
            assert!(p.commutes(&w("II")).unwrap());
        }
        assert!(matches!(
            w("X").commutes(&w("XX")),
            Err(Error::QubitMismatch { .. })
        ));
    }

    #[test]
    fn single_qubit_products() {
        // XY = iZ, YX = -iZ, ZX = iY
        assert_eq!(w("X").multiply(&w("Y")).unwrap(), (1, w("Z")));
        assert_eq!(w("Y").multiply(&w("X")).unwrap(), (3, w("Z")));
        assert_eq!(w("Z").multiply(&w("X")).unwrap(), (1, w("Y")));
        assert_eq!(w("Y").multiply(&w("Y")).unwrap(), (0, w("I")));
    }

    #[test]
    fn sampling_contract() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let all = sample_subspace(&mut rng, 2, 15).unwrap();
        assert_eq!(all, full_subspace(2));

        let a = sample_subspace(&mut ChaCha8Rng::seed_from_u64(11), 2, 1).unwrap();
        let b = sample_subspace(&mut ChaCha8Rng::seed_from_u64(11), 2, 1).unwrap();
        assert_eq!(a, b);
        assert!((1..=15).contains(&a[0].0));

        assert!(matches!(
            sample_subspace(&mut rng, 4, 256),
            Err(Error::SubspaceDimension { d: 256, max: 255 })
        ));
        assert!(sample_subspace(&mut rng, 4, 0).is_err());
    }

    #[test]
    fn samples_are_sorted_distinct_non_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..50 {
            let s = sample_subspace(&mut rng, 3, 20).unwrap();
            assert_eq!(s.len(), 20);
            assert!(s.windows(2).all(|p| p[0] < p[1]));
            assert!(s.iter().all(|j| j.0 >= 1 && j.0 < 64));
        }
    }
}
