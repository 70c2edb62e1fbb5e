use std::ops::Range;

use rayon::prelude::*;
use serde::Serialize;

use super::system::{CoxeterSystem, Element, GenSet, Side};
use crate::error::{Error, Result};

const NONE: u32 = u32::MAX;

/// Default cap on the number of elements a ball may hold.
pub const DEFAULT_MAX_ELEMENTS: usize = 4_000_000;

/// All elements of word length at most `R`, stored as a trie of normal
/// forms. Every prefix of a normal form is a normal form, so each element
/// is one trie node and is referenced by its index; indices are grouped by
/// length and ordered lexicographically within a shell.
#[derive(Clone, Debug)]
pub struct Ball {
    sys: CoxeterSystem,
    radius: usize,
    parent: Vec<u32>,
    letter: Vec<u8>,
    shell_start: Vec<usize>,
    children: Vec<u32>,
}

impl Ball {
    pub fn new(sys: &CoxeterSystem, radius: usize) -> Result<Self> {
        Self::with_budget(sys, radius, DEFAULT_MAX_ELEMENTS)
    }

    /// Builds the ball shell by shell; fails with the last complete shell if
    /// the element count would exceed `max_elements`.
    pub fn with_budget(sys: &CoxeterSystem, radius: usize, max_elements: usize) -> Result<Self> {
        let n = sys.rank();
        let mut ball = Ball {
            sys: sys.clone(),
            radius,
            parent: vec![NONE],
            letter: vec![0],
            shell_start: vec![0, 1],
            children: Vec::new(),
        };
        if radius > u8::MAX as usize {
            return Err(Error::Precondition(format!("radius {radius} too large")));
        }
        for r in 0..radius {
            let shell = ball.shell(r);
            let ext: Vec<Vec<u8>> = shell
                .clone()
                .into_par_iter()
                .map(|i| {
                    let word = ball.word(i);
                    (0..n as u8)
                        .filter(|&s| extends_normal_form(sys, &word, s))
                        .collect()
                })
                .collect();
            let added: usize = ext.iter().map(Vec::len).sum();
            if ball.parent.len() + added > max_elements {
                return Err(Error::Budget {
                    what: "ball elements".into(),
                    reached: r,
                });
            }
            ball.children.resize(ball.parent.len() * n, NONE);
            for (i, letters) in shell.zip(ext) {
                for s in letters {
                    ball.children[i * n + s as usize] = ball.parent.len() as u32;
                    ball.parent.push(i as u32);
                    ball.letter.push(s);
                }
            }
            ball.shell_start.push(ball.parent.len());
        }
        ball.children.resize(ball.parent.len() * n, NONE);
        Ok(ball)
    }

    pub fn system(&self) -> &CoxeterSystem {
        &self.sys
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Index range of the elements of length exactly `r`.
    pub fn shell(&self, r: usize) -> Range<usize> {
        self.shell_start[r]..self.shell_start[r + 1]
    }

    pub fn shell_sizes(&self) -> Vec<usize> {
        self.shell_start.windows(2).map(|w| w[1] - w[0]).collect()
    }

    pub fn length(&self, i: usize) -> usize {
        self.shell_start.partition_point(|&s| s <= i) - 1
    }

    pub fn word(&self, i: usize) -> Vec<u8> {
        let mut out = Vec::new();
        let mut j = i;
        while self.parent[j] != NONE {
            out.push(self.letter[j]);
            j = self.parent[j] as usize;
        }
        out.reverse();
        out
    }

    pub fn element(&self, i: usize) -> Element {
        Element::from_normal_word(self.word(i))
    }

    pub fn index_of_word(&self, word: &[u8]) -> Option<usize> {
        let n = self.sys.rank();
        let mut j = 0usize;
        for &s in word {
            let c = *self.children.get(j * n + s as usize)?;
            if c == NONE {
                return None;
            }
            j = c as usize;
        }
        Some(j)
    }

    pub fn index_of(&self, x: &Element) -> Option<usize> {
        self.index_of_word(x.word())
    }

    /// Index of `x_i · s`, if it lies in the ball.
    pub fn mul_gen(&self, i: usize, s: u8) -> Option<usize> {
        let mut word = self.word(i);
        self.sys.push(&mut word, s);
        self.index_of_word(&word)
    }

    pub fn descents(&self, i: usize, side: Side) -> GenSet {
        super::system::descents_of(&self.sys, &self.word(i), side)
    }

    /// Shells as formatted words, for export.
    pub fn shells(&self) -> BallShells {
        BallShells {
            generators: self.sys.names().to_vec(),
            radius: self.radius,
            sizes: self.shell_sizes(),
            shells: (0..=self.radius)
                .map(|r| {
                    self.shell(r)
                        .map(|i| self.sys.format(&self.element(i)))
                        .collect()
                })
                .collect(),
        }
    }
}

/// `word·s` is again a normal form ending in `s`: `s` is not a descent and
/// every letter it would commute past is smaller.
fn extends_normal_form(sys: &CoxeterSystem, word: &[u8], s: u8) -> bool {
    for &x in word.iter().rev() {
        if x == s {
            return false;
        }
        if !sys.commutes(x, s) {
            return true;
        }
        if x > s {
            return false;
        }
    }
    true
}

/// Serializable view of a ball.
#[derive(Clone, Debug, Serialize)]
pub struct BallShells {
    pub generators: Vec<String>,
    pub radius: usize,
    pub sizes: Vec<usize>,
    pub shells: Vec<Vec<String>>,
}
