use std::fmt;

use super::FpError;

/// A generator or its inverse, identified by position in an alphabet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

impl Letter {
    pub const fn new(generator: usize, inverse: bool) -> Self {
        Self { generator, inverse }
    }

    pub const fn pos(generator: usize) -> Self {
        Self::new(generator, false)
    }

    pub const fn neg(generator: usize) -> Self {
        Self::new(generator, true)
    }

    #[must_use]
    pub const fn inv(self) -> Self {
        Self::new(self.generator, !self.inverse)
    }

    /// Exponent sign, `+1` or `-1`.
    pub const fn sign(self) -> i64 {
        if self.inverse {
            -1
        } else {
            1
        }
    }
}

/// A freely reduced word in the free group on an alphabet.
///
/// Every constructor reduces, so two words are equal as free-group elements
/// exactly when they are equal as values.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(Vec<Letter>);

/// Freely reduces a letter sequence.
pub fn free_reduce<I: IntoIterator<Item = Letter>>(letters: I) -> Word {
    let mut out: Vec<Letter> = Vec::new();
    for l in letters {
        match out.last() {
            Some(&last) if last == l.inv() => {
                out.pop();
            }
            _ => out.push(l),
        }
    }
    Word(out)
}

impl Word {
    pub fn identity() -> Self {
        Self(Vec::new())
    }

    pub fn new<I: IntoIterator<Item = Letter>>(letters: I) -> Self {
        free_reduce(letters)
    }

    pub fn generator(g: usize) -> Self {
        Self(vec![Letter::pos(g)])
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    #[must_use]
    pub fn inverse(&self) -> Self {
        Self(self.0.iter().rev().map(|l| l.inv()).collect())
    }

    #[must_use]
    pub fn mul(&self, other: &Word) -> Self {
        free_reduce(self.0.iter().chain(other.0.iter()).copied())
    }

    #[must_use]
    pub fn pow(&self, n: i64) -> Self {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut out = Word::identity();
        for _ in 0..n.unsigned_abs() {
            out = out.mul(&base);
        }
        out
    }

    /// `g · self · g⁻¹`
    #[must_use]
    pub fn conjugate_by(&self, g: &Word) -> Self {
        g.mul(self).mul(&g.inverse())
    }

    /// Strips matching first/last letters that cancel cyclically.
    #[must_use]
    pub fn cyclically_reduced(&self) -> Self {
        let s = &self.0;
        let (mut lo, mut hi) = (0usize, s.len());
        while hi - lo >= 2 && s[lo] == s[hi - 1].inv() {
            lo += 1;
            hi -= 1;
        }
        Self(s[lo..hi].to_vec())
    }

    /// Largest generator index used, if any.
    pub fn max_generator(&self) -> Option<usize> {
        self.0.iter().map(|l| l.generator).max()
    }

    /// Exponent sum per generator.
    pub fn exponent_sums(&self, generators: usize) -> Vec<i64> {
        let mut sums = vec![0; generators];
        for l in &self.0 {
            sums[l.generator] += l.sign();
        }
        sums
    }

    /// Number of letters (of either sign) on generator `g`.
    pub fn occurrences(&self, g: usize) -> usize {
        self.0.iter().filter(|l| l.generator == g).count()
    }

    /// Applies the homomorphism sending generator `g` to `images(g)`.
    pub fn substitute_with<F>(&self, mut images: F) -> Result<Word, FpError>
    where
        F: FnMut(usize) -> Option<Word>,
    {
        let mut out = Vec::with_capacity(self.len());
        for l in &self.0 {
            let img = images(l.generator).ok_or(FpError::MissingImage(l.generator))?;
            if l.inverse {
                out.extend(img.inverse().0);
            } else {
                out.extend(img.0);
            }
        }
        Ok(free_reduce(out))
    }

    /// Applies the homomorphism given by a table of images indexed by generator.
    pub fn substitute(&self, images: &[Word]) -> Result<Word, FpError> {
        self.substitute_with(|g| images.get(g).cloned())
    }

    /// Renders with single-letter-friendly names, e.g. `x*y^-1*z`.
    pub fn display<'a>(&'a self, names: &'a [String]) -> WordDisplay<'a> {
        WordDisplay { word: self, names }
    }
}

impl FromIterator<Letter> for Word {
    fn from_iter<I: IntoIterator<Item = Letter>>(iter: I) -> Self {
        free_reduce(iter)
    }
}

pub struct WordDisplay<'a> {
    word: &'a Word,
    names: &'a [String],
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            return f.write_str("1");
        }
        for (i, l) in self.word.letters().iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            match self.names.get(l.generator) {
                Some(n) => f.write_str(n)?,
                None => write!(f, "g{}", l.generator)?,
            }
            if l.inverse {
                f.write_str("^-1")?;
            }
        }
        Ok(())
    }
}
