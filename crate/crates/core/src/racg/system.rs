use std::collections::HashMap;
use std::fmt;

use crate::complexes::Complex;
use crate::error::{Error, Result};

/// A set of generators as a bitmask; systems are limited to 64 generators.
pub type GenSet = u64;

pub(crate) fn bit(s: u8) -> GenSet {
    1u64 << s
}

/// Iterates the members of a generator set in increasing order.
pub fn members(set: GenSet) -> impl Iterator<Item = u8> {
    (0..64u8).filter(move |&s| set >> s & 1 == 1)
}

/// A right-angled Coxeter system: generators are involutions, and two of
/// them commute exactly when they span an edge of the defining complex.
#[derive(Clone, Debug)]
pub struct CoxeterSystem {
    names: Vec<String>,
    commute: Vec<GenSet>,
    spherical: Vec<GenSet>,
    spherical_pos: HashMap<GenSet, usize>,
}

/// A group element stored as its normal form: the lexicographically least
/// reduced word.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Element {
    word: Vec<u8>,
}

impl Element {
    pub fn identity() -> Self {
        Element { word: Vec::new() }
    }

    pub fn word(&self) -> &[u8] {
        &self.word
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.word.is_empty()
    }

    pub(crate) fn from_normal_word(word: Vec<u8>) -> Self {
        Element { word }
    }
}

/// Side for descent sets.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

impl CoxeterSystem {
    /// The system with generators the vertices of `l`; spherical subsets are
    /// the faces of `l` (which for flag `l` are the commuting cliques).
    pub fn from_complex(l: &Complex) -> Result<Self> {
        let n = l.vertex_count();
        if n > 64 {
            return Err(Error::Precondition(format!(
                "{n} generators exceed the limit of 64"
            )));
        }
        let mut commute = vec![0u64; n];
        let mut spherical = vec![0u64];
        if n > 0 {
            for e in l.faces(1) {
                commute[e[0]] |= 1 << e[1];
                commute[e[1]] |= 1 << e[0];
            }
            for k in 0..=l.dim() as usize {
                for f in l.faces(k) {
                    spherical.push(f.iter().fold(0u64, |m, &v| m | 1 << v));
                }
            }
        }
        Ok(Self::assemble(l.names().to_vec(), commute, spherical))
    }

    /// The system of a graph: commuting pairs are its edges and spherical
    /// sets its cliques.
    pub fn from_graph(names: Vec<String>, edges: &[(usize, usize)]) -> Result<Self> {
        let n = names.len();
        if n > 64 {
            return Err(Error::Precondition(format!(
                "{n} generators exceed the limit of 64"
            )));
        }
        let mut commute = vec![0u64; n];
        for &(a, b) in edges {
            if a == b || a >= n || b >= n {
                return Err(Error::Precondition(format!(
                    "bad commuting pair ({a}, {b})"
                )));
            }
            commute[a] |= 1 << b;
            commute[b] |= 1 << a;
        }
        let mut spherical = vec![0u64];
        let mut frontier = vec![0u64];
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for &set in &frontier {
                let start = if set == 0 {
                    0
                } else {
                    64 - set.leading_zeros() as usize
                };
                for s in start..n {
                    if commute[s] & set == set {
                        next.push(set | 1 << s);
                    }
                }
            }
            spherical.extend(next.iter().copied());
            frontier = next;
        }
        Ok(Self::assemble(names, commute, spherical))
    }

    fn assemble(names: Vec<String>, commute: Vec<GenSet>, mut spherical: Vec<GenSet>) -> Self {
        spherical.sort_by_key(|&m| (m.count_ones(), m.reverse_bits()));
        spherical.dedup();
        let spherical_pos = spherical.iter().enumerate().map(|(i, &m)| (m, i)).collect();
        CoxeterSystem {
            names,
            commute,
            spherical,
            spherical_pos,
        }
    }

    pub fn rank(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn generator(&self, name: &str) -> Result<u8> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|i| i as u8)
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))
    }

    pub fn commutes(&self, s: u8, t: u8) -> bool {
        self.commute[s as usize] >> t & 1 == 1
    }

    fn blocks(&self, s: u8) -> GenSet {
        !self.commute[s as usize]
    }

    /// All spherical subsets, including `∅`, ordered by size.
    pub fn spherical_sets(&self) -> &[GenSet] {
        &self.spherical
    }

    pub fn spherical_index(&self, t: GenSet) -> Option<usize> {
        self.spherical_pos.get(&t).copied()
    }

    pub fn is_spherical(&self, t: GenSet) -> bool {
        self.spherical_pos.contains_key(&t)
    }

    /// Largest size of a spherical set (`dim L + 1`).
    pub fn max_spherical(&self) -> usize {
        self.spherical.last().map_or(0, |m| m.count_ones() as usize)
    }

    pub fn genset(&self, names: &[&str]) -> Result<GenSet> {
        names
            .iter()
            .try_fold(0u64, |m, n| Ok(m | bit(self.generator(n)?)))
    }

    pub fn format_set(&self, t: GenSet) -> String {
        let parts: Vec<&str> = members(t)
            .map(|s| self.names[s as usize].as_str())
            .collect();
        format!("{{{}}}", parts.join(","))
    }

    /// Normal form of an arbitrary generator sequence.
    pub fn normal_form(&self, seq: &[usize]) -> Result<Element> {
        let mut word = Vec::with_capacity(seq.len());
        for &s in seq {
            if s >= self.rank() {
                return Err(Error::UnknownGenerator(s.to_string()));
            }
            self.push(&mut word, s as u8);
        }
        Ok(Element { word })
    }

    /// Normal form of a word given by generator names.
    pub fn element(&self, names: &[&str]) -> Result<Element> {
        let seq = names
            .iter()
            .map(|n| self.generator(n).map(usize::from))
            .collect::<Result<Vec<_>>>()?;
        self.normal_form(&seq)
    }

    /// Parses a word: single-character names may be run together (`"abc"`),
    /// longer names are separated by spaces, commas or dots. `"e"` and `""`
    /// denote the identity unless `e` is a generator.
    pub fn parse(&self, text: &str) -> Result<Element> {
        let text = text.trim();
        if text.is_empty() || (text == "e" && self.generator("e").is_err()) {
            return Ok(Element::identity());
        }
        let tokens: Vec<&str> = if text.contains([' ', ',', '.']) {
            text.split([' ', ',', '.'])
                .filter(|t| !t.is_empty())
                .collect()
        } else if self.names.iter().all(|n| n.chars().count() == 1) {
            text.char_indices()
                .map(|(i, c)| &text[i..i + c.len_utf8()])
                .collect()
        } else {
            vec![text]
        };
        self.element(&tokens)
    }

    pub fn format(&self, x: &Element) -> String {
        if x.word.is_empty() {
            return "e".into();
        }
        let sep = if self.names.iter().all(|n| n.chars().count() == 1) {
            ""
        } else {
            " "
        };
        x.word
            .iter()
            .map(|&s| self.names[s as usize].as_str())
            .collect::<Vec<_>>()
            .join(sep)
    }

    /// Right-multiplies a normal-form word by `s` in place, keeping it in
    /// normal form. Returns `true` if the length went up.
    pub(crate) fn push(&self, word: &mut Vec<u8>, s: u8) -> bool {
        let mut j = 0;
        for i in (0..word.len()).rev() {
            let x = word[i];
            if x == s {
                word.remove(i);
                let nf = self.greedy(word);
                *word = nf;
                return false;
            }
            if !self.commutes(x, s) {
                j = i + 1;
                break;
            }
        }
        let p = (j..word.len()).find(|&i| word[i] > s).unwrap_or(word.len());
        word.insert(p, s);
        true
    }

    /// Lexicographically least rearrangement of a reduced word under
    /// commutations: repeatedly emit the smallest letter that commutes with
    /// everything before it.
    pub(crate) fn greedy(&self, word: &[u8]) -> Vec<u8> {
        let mut rest = word.to_vec();
        let mut out = Vec::with_capacity(rest.len());
        while !rest.is_empty() {
            let mut blocked: GenSet = 0;
            let mut best: Option<(u8, usize)> = None;
            for (i, &x) in rest.iter().enumerate() {
                if blocked & bit(x) == 0 && best.is_none_or(|(b, _)| x < b) {
                    best = Some((x, i));
                }
                blocked |= self.blocks(x);
            }
            let (x, i) = best.expect("first letter is always available");
            out.push(x);
            rest.remove(i);
        }
        out
    }

    pub fn multiply(&self, x: &Element, y: &Element) -> Element {
        let mut word = x.word.clone();
        for &s in &y.word {
            self.push(&mut word, s);
        }
        Element { word }
    }

    pub fn mul_gen(&self, x: &Element, s: u8) -> Element {
        let mut word = x.word.clone();
        self.push(&mut word, s);
        Element { word }
    }

    pub fn inverse(&self, x: &Element) -> Element {
        let rev: Vec<usize> = x.word.iter().rev().map(|&s| s as usize).collect();
        self.normal_form(&rev).expect("letters of a valid element")
    }

    pub fn length(&self, x: &Element) -> usize {
        x.word.len()
    }

    /// Generators `s` with `ℓ(xs) < ℓ(x)` (right) or `ℓ(sx) < ℓ(x)` (left).
    pub fn descents(&self, x: &Element, side: Side) -> GenSet {
        descents_of(self, &x.word, side)
    }

    /// The unique shortest element of the coset `x·W_T`.
    pub fn shortest_coset_rep(&self, x: &Element, t: GenSet) -> Result<Element> {
        if !self.is_spherical(t) {
            return Err(Error::NotSpherical);
        }
        let mut word = x.word.clone();
        loop {
            let d = descents_of(self, &word, Side::Right) & t;
            if d == 0 {
                return Ok(Element { word });
            }
            self.push(&mut word, d.trailing_zeros() as u8);
        }
    }

    /// A different reduced word for the same element obtained by one
    /// commutation of adjacent letters, if any pair commutes.
    pub fn commuting_rewrite(&self, x: &Element, which: usize) -> Option<Vec<u8>> {
        let swaps: Vec<usize> = (0..x.word.len().saturating_sub(1))
            .filter(|&i| self.commutes(x.word[i], x.word[i + 1]))
            .collect();
        if swaps.is_empty() {
            return None;
        }
        let i = swaps[which % swaps.len()];
        let mut w = x.word.clone();
        w.swap(i, i + 1);
        Some(w)
    }
}

pub(crate) fn descents_of(sys: &CoxeterSystem, word: &[u8], side: Side) -> GenSet {
    let mut blocked: GenSet = 0;
    let mut out: GenSet = 0;
    let mut visit = |x: u8| {
        if blocked & bit(x) == 0 {
            out |= bit(x);
        }
        blocked |= sys.blocks(x);
    };
    match side {
        Side::Right => word.iter().rev().for_each(|&x| visit(x)),
        Side::Left => word.iter().for_each(|&x| visit(x)),
    }
    out
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            return write!(f, "e");
        }
        let parts: Vec<String> = self.word.iter().map(|s| s.to_string()).collect();
        write!(f, "{}", parts.join("."))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn names(s: &str) -> Vec<String> {
        s.chars().map(|c| c.to_string()).collect()
    }

    fn commuting_pair() -> CoxeterSystem {
        CoxeterSystem::from_graph(names("ab"), &[(0, 1)]).unwrap()
    }

    fn dihedral() -> CoxeterSystem {
        CoxeterSystem::from_graph(names("ab"), &[]).unwrap()
    }

    #[test]
    fn normal_form_examples() {
        let c = commuting_pair();
        assert_eq!(c.format(&c.parse("ba").unwrap()), "ab");
        assert!(c.parse("aa").unwrap().is_identity());
        let d = dihedral();
        let x = d.parse("aba").unwrap();
        assert_eq!(d.format(&x), "aba");
        assert_eq!(d.length(&x), 3);
        assert!(matches!(
            d.normal_form(&[0, 5]),
            Err(Error::UnknownGenerator(_))
        ));
    }

    #[test]
    fn lex_least_needs_non_adjacent_moves() {
        // a<b<c; b commutes with a and c, a and c do not commute. "cab" has
        // no out-of-order commuting adjacent pair, yet "bca" is smaller.
        let s = CoxeterSystem::from_graph(names("abc"), &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(s.format(&s.parse("cab").unwrap()), "bca");
        assert_eq!(s.format(&s.parse("bca").unwrap()), "bca");
    }

    #[test]
    fn multiply_and_descents() {
        let c = commuting_pair();
        let a = c.parse("a").unwrap();
        assert!(c.multiply(&a, &a).is_identity());
        let ab = c.parse("ab").unwrap();
        assert_eq!(c.descents(&ab, Side::Right), 0b11);
        let d = dihedral();
        let ab = d.parse("ab").unwrap();
        assert_eq!(d.descents(&ab, Side::Right), 0b10);
        assert_eq!(d.descents(&ab, Side::Left), 0b01);
    }

    #[test]
    fn coset_representatives() {
        let d = dihedral();
        let ab = d.parse("ab").unwrap();
        assert_eq!(d.format(&d.shortest_coset_rep(&ab, 0b10).unwrap()), "a");
        assert!(d
            .shortest_coset_rep(&Element::identity(), 0b01)
            .unwrap()
            .is_identity());
        assert!(matches!(
            d.shortest_coset_rep(&ab, 0b11),
            Err(Error::NotSpherical)
        ));
    }

    #[test]
    fn spherical_sets_of_hexagon() {
        let edges: Vec<(usize, usize)> = (0..6).map(|i| (i, (i + 1) % 6)).collect();
        let h = CoxeterSystem::from_graph(names("abcdef"), &edges).unwrap();
        assert_eq!(h.spherical_sets().len(), 13);
        assert_eq!(h.max_spherical(), 2);
    }

    #[test]
    fn from_complex_uses_faces() {
        // the empty triangle: pairwise commuting but {a,b,c} is not spherical
        let l = crate::complexes::boundary_simplex(2).unwrap();
        let s = CoxeterSystem::from_complex(&l).unwrap();
        assert_eq!(s.spherical_sets().len(), 7);
        assert!(!s.is_spherical(0b111));
    }
}
