//! Nucleotide sequences and their compatibility with structures.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use thiserror::Error;

use crate::structure::Structure;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum SequenceError {
    #[error("illegal nucleotide {ch:?} at position {pos}")]
    IllegalNucleotide { pos: usize, ch: char },
    #[error("sequence length {seq} does not match structure length {structure}")]
    LengthMismatch { seq: usize, structure: usize },
    #[error("sequence is not compatible with the structure")]
    IncompatibleSequence,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Base {
    A,
    C,
    G,
    U,
}

impl Base {
    pub const ALL: [Base; 4] = [Base::A, Base::C, Base::G, Base::U];

    pub fn from_char(ch: char) -> Option<Base> {
        match ch.to_ascii_uppercase() {
            'A' => Some(Base::A),
            'C' => Some(Base::C),
            'G' => Some(Base::G),
            'U' => Some(Base::U),
            _ => None,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Base::A => 'A',
            Base::C => 'C',
            Base::G => 'G',
            Base::U => 'U',
        }
    }

    #[inline]
    pub fn index(self) -> usize {
        self as usize
    }
}

/// A Watson-Crick or wobble pair, in 5'→3' orientation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BasePair {
    AU,
    UA,
    GC,
    CG,
    GU,
    UG,
}

impl BasePair {
    pub const ALL: [BasePair; 6] = [
        BasePair::AU,
        BasePair::UA,
        BasePair::GC,
        BasePair::CG,
        BasePair::GU,
        BasePair::UG,
    ];

    pub fn new(left: Base, right: Base) -> Option<BasePair> {
        use Base::*;
        match (left, right) {
            (A, U) => Some(BasePair::AU),
            (U, A) => Some(BasePair::UA),
            (G, C) => Some(BasePair::GC),
            (C, G) => Some(BasePair::CG),
            (G, U) => Some(BasePair::GU),
            (U, G) => Some(BasePair::UG),
            _ => None,
        }
    }

    pub fn bases(self) -> (Base, Base) {
        use Base::*;
        match self {
            BasePair::AU => (A, U),
            BasePair::UA => (U, A),
            BasePair::GC => (G, C),
            BasePair::CG => (C, G),
            BasePair::GU => (G, U),
            BasePair::UG => (U, G),
        }
    }

    #[inline]
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            BasePair::AU => "AU",
            BasePair::UA => "UA",
            BasePair::GC => "GC",
            BasePair::CG => "CG",
            BasePair::GU => "GU",
            BasePair::UG => "UG",
        }
    }
}

/// Whether `x` and `y` can form a bond (AU, UA, GC, CG, GU, UG).
#[inline]
pub fn can_pair(x: Base, y: Base) -> bool {
    BasePair::new(x, y).is_some()
}

/// A sequence over {A, C, G, U}; positions are 1-based in the accessors.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sequence(Vec<Base>);

impl Sequence {
    pub fn new(bases: Vec<Base>) -> Self {
        Sequence(bases)
    }

    pub fn uniform(base: Base, n: usize) -> Self {
        Sequence(vec![base; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    #[inline]
    pub fn base(&self, pos: usize) -> Base {
        self.0[pos - 1]
    }

    #[inline]
    pub fn set(&mut self, pos: usize, b: Base) {
        self.0[pos - 1] = b;
    }

    pub fn bases(&self) -> &[Base] {
        &self.0
    }

    /// The pair formed by positions `i < j`, if any.
    #[inline]
    pub fn pair_at(&self, i: usize, j: usize) -> Option<BasePair> {
        BasePair::new(self.base(i), self.base(j))
    }

    /// `s|[l, r]`.
    pub fn slice(&self, l: usize, r: usize) -> Sequence {
        Sequence(self.0[l - 1..r].to_vec())
    }

    /// Overwrites `[l, l + sub.len() - 1]` with `sub`.
    pub fn splice(&mut self, l: usize, sub: &Sequence) {
        self.0[l - 1..l - 1 + sub.len()].copy_from_slice(&sub.0);
    }

    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Sequence {
        Sequence((0..n).map(|_| Base::ALL[rng.gen_range(0..4)]).collect())
    }
}

impl fmt::Display for Sequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.0 {
            write!(f, "{}", b.as_char())?;
        }
        Ok(())
    }
}

impl FromStr for Sequence {
    type Err = SequenceError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.trim()
            .chars()
            .enumerate()
            .map(|(k, ch)| {
                Base::from_char(ch).ok_or(SequenceError::IllegalNucleotide { pos: k + 1, ch })
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Sequence)
    }
}

fn check_len(s: &Sequence, t: &Structure) -> Result<(), SequenceError> {
    if s.len() != t.len() {
        return Err(SequenceError::LengthMismatch {
            seq: s.len(),
            structure: t.len(),
        });
    }
    Ok(())
}

/// True iff every arc of `t` carries an allowed base pair in `s`.
pub fn is_compatible(s: &Sequence, t: &Structure) -> Result<bool, SequenceError> {
    check_len(s, t)?;
    Ok(compatible_unchecked(s, t))
}

pub(crate) fn compatible_unchecked(s: &Sequence, t: &Structure) -> bool {
    t.arcs().iter().all(|a| s.pair_at(a.i, a.j).is_some())
}

/// Hamming distance in `Q4^{n_u} × Q6^{n_p}`: differing unpaired positions
/// plus arcs whose base pair differs.
pub fn compatible_distance(
    s: &Sequence,
    other: &Sequence,
    t: &Structure,
) -> Result<usize, SequenceError> {
    check_len(s, t)?;
    check_len(other, t)?;
    if !compatible_unchecked(s, t) || !compatible_unchecked(other, t) {
        return Err(SequenceError::IncompatibleSequence);
    }
    let unpaired = t
        .unpaired_positions()
        .filter(|&w| s.base(w) != other.base(w))
        .count();
    let paired = t
        .arcs()
        .iter()
        .filter(|a| s.pair_at(a.i, a.j) != other.pair_at(a.i, a.j))
        .count();
    Ok(unpaired + paired)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(s: &str) -> Sequence {
        s.parse().unwrap()
    }

    #[test]
    fn pair_table_is_symmetric_over_six_pairs() {
        let mut count = 0;
        for x in Base::ALL {
            for y in Base::ALL {
                assert_eq!(can_pair(x, y), can_pair(y, x));
                count += can_pair(x, y) as usize;
            }
        }
        assert_eq!(count, 6);
        // a base pairs with at most two partners
        for x in Base::ALL {
            assert!(Base::ALL.iter().filter(|&&y| can_pair(x, y)).count() <= 2);
        }
    }

    #[test]
    fn compatibility() {
        let t = Structure::from_arcs(12, [(1, 12)]).unwrap();
        assert!(is_compatible(&seq("GAAAAAAAAAAC"), &t).unwrap());
        assert!(!is_compatible(&seq("AAAAAAAAAAAG"), &t).unwrap());
        assert!(is_compatible(&seq("AAAA"), &Structure::unpaired(4)).unwrap());
        assert!(matches!(
            is_compatible(&seq("AAA"), &Structure::unpaired(4)),
            Err(SequenceError::LengthMismatch { .. })
        ));
    }

    #[test]
    fn pair_swap_is_one_move() {
        let t = Structure::from_arcs(6, [(1, 6)]).unwrap();
        let a = seq("GAAAAC");
        let b = seq("CAAAAG");
        assert_eq!(compatible_distance(&a, &a, &t).unwrap(), 0);
        assert_eq!(compatible_distance(&a, &b, &t).unwrap(), 1);
        let c = seq("GAACAU");
        assert_eq!(compatible_distance(&a, &c, &t).unwrap(), 2);
        assert_eq!(
            compatible_distance(&a, &seq("AAAAAA"), &t),
            Err(SequenceError::IncompatibleSequence)
        );
    }

    #[test]
    fn parse_and_display() {
        let s = seq("acgu");
        assert_eq!(s.to_string(), "ACGU");
        assert!("ACGT".parse::<Sequence>().is_err());
        assert!(matches!(
            "ACGX".parse::<Sequence>(),
            Err(SequenceError::IllegalNucleotide { pos: 4, ch: 'X' })
        ));
    }
}
