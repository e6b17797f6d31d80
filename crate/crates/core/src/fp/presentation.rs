use std::fmt;

use super::word::{Letter, Word};
use super::FpError;

/// A finite presentation `⟨ generators | relators ⟩`.
///
/// Relators are stored freely and cyclically reduced, in the form they were
/// given. Generators with a relator `g·g` are recorded as involutions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    names: Vec<String>,
    relators: Vec<Word>,
    involutions: Vec<bool>,
}

impl Presentation {
    pub fn new<S: Into<String>>(names: Vec<S>, relators: Vec<Word>) -> Result<Self, FpError> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        for (i, n) in names.iter().enumerate() {
            if !is_generator_name(n) {
                return Err(FpError::BadGeneratorName(n.clone()));
            }
            if names[..i].contains(n) {
                return Err(FpError::DuplicateGenerator(n.clone()));
            }
        }
        let relators: Vec<Word> = relators
            .into_iter()
            .map(|r| r.cyclically_reduced())
            .collect();
        for r in &relators {
            if let Some(g) = r.max_generator() {
                if g >= names.len() {
                    return Err(FpError::UnknownGeneratorIndex(g));
                }
            }
        }
        let mut involutions = vec![false; names.len()];
        for r in &relators {
            if let [a, b] = r.letters() {
                if a == b {
                    involutions[a.generator] = true;
                }
            }
        }
        Ok(Self {
            names,
            relators,
            involutions,
        })
    }

    /// Parses a presentation from generator names and relator strings.
    pub fn parse(names: &[&str], relators: &[&str]) -> Result<Self, FpError> {
        let names: Vec<String> = names.iter().map(|s| s.to_string()).collect();
        let words = relators
            .iter()
            .map(|r| parse_word(&names, r))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(names, words)
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn generator_count(&self) -> usize {
        self.names.len()
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn is_involution(&self, g: usize) -> bool {
        self.involutions[g]
    }

    pub fn involutions(&self) -> &[bool] {
        &self.involutions
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn parse_word(&self, text: &str) -> Result<Word, FpError> {
        parse_word(&self.names, text)
    }

    /// Checks that every letter of `w` names a generator of this presentation.
    pub fn check_word(&self, w: &Word) -> Result<(), FpError> {
        match w.max_generator() {
            Some(g) if g >= self.names.len() => Err(FpError::UnknownGeneratorIndex(g)),
            _ => Ok(()),
        }
    }

    /// Rewrites involution letters `g⁻¹` as `g` and cancels `g·g`.
    ///
    /// The result represents the same group element as `w`.
    pub fn normalize(&self, w: &Word) -> Word {
        let mut out: Vec<Letter> = Vec::with_capacity(w.len());
        for &l in w.letters() {
            let l = if self.involutions[l.generator] {
                Letter::pos(l.generator)
            } else {
                l
            };
            match out.last() {
                Some(&last) if last == l.inv() || (last == l && self.involutions[l.generator]) => {
                    out.pop();
                }
                _ => out.push(l),
            }
        }
        Word::new(out)
    }

    /// Returns a copy with extra relators appended.
    pub fn with_relators(&self, extra: impl IntoIterator<Item = Word>) -> Result<Self, FpError> {
        let mut rels = self.relators.clone();
        rels.extend(extra);
        Self::new(self.names.clone(), rels)
    }

    pub fn display_word<'a>(&'a self, w: &'a Word) -> impl fmt::Display + 'a {
        w.display(&self.names)
    }

    /// Serializes in the catalog data-file syntax.
    pub fn to_data_file(&self, name: &str) -> String {
        let mut out = format!("presentation {name} : {}\n", self.names.join(" "));
        for r in &self.relators {
            out.push_str("rel =");
            for l in r.letters() {
                out.push(' ');
                out.push_str(&self.names[l.generator]);
                if l.inverse {
                    out.push_str("^-1");
                }
            }
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "< {} | ", self.names.join(", "))?;
        for (i, r) in self.relators.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{}", r.display(&self.names))?;
        }
        f.write_str(" >")
    }
}

pub(crate) fn is_generator_name(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'' || c == '.')
}

/// Parses a word over `names`.
///
/// Tokens are separated by whitespace or `*`; each is a generator name with
/// an optional exponent suffix `^n`, `^-n` or `^{n}`. The empty string and
/// `1` both denote the identity.
pub fn parse_word(names: &[String], text: &str) -> Result<Word, FpError> {
    parse_word_with(text, |name| {
        names.iter().position(|n| n == name).map(Word::generator)
    })
}

/// Like [`parse_word`], but each name is resolved by `resolve`, which may
/// expand to an arbitrary word. Parenthesized groups `( ... )^n` are allowed.
pub(crate) fn parse_word_with<F>(text: &str, mut resolve: F) -> Result<Word, FpError>
where
    F: FnMut(&str) -> Option<Word>,
{
    let chars: Vec<char> = text.chars().collect();
    let mut pos = 0;
    let w = parse_seq(&chars, &mut pos, &mut resolve)?;
    if pos < chars.len() {
        return Err(FpError::BadToken(chars[pos..].iter().collect()));
    }
    Ok(w)
}

fn parse_seq<F>(chars: &[char], pos: &mut usize, resolve: &mut F) -> Result<Word, FpError>
where
    F: FnMut(&str) -> Option<Word>,
{
    let mut letters: Vec<Letter> = Vec::new();
    loop {
        while *pos < chars.len() && (chars[*pos].is_whitespace() || chars[*pos] == '*') {
            *pos += 1;
        }
        if *pos >= chars.len() || chars[*pos] == ')' {
            break;
        }
        let start = *pos;
        let base = if chars[*pos] == '(' {
            *pos += 1;
            let inner = parse_seq(chars, pos, resolve)?;
            if chars.get(*pos) != Some(&')') {
                return Err(FpError::BadToken(chars[start..].iter().collect()));
            }
            *pos += 1;
            inner
        } else {
            while *pos < chars.len() && is_name_char(chars[*pos]) {
                *pos += 1;
            }
            if *pos == start {
                return Err(FpError::BadToken(chars[start..].iter().collect()));
            }
            let name: String = chars[start..*pos].iter().collect();
            if name == "1" {
                Word::identity()
            } else {
                resolve(&name).ok_or(FpError::UnknownGenerator(name))?
            }
        };
        let exp = if chars.get(*pos) == Some(&'^') {
            *pos += 1;
            let braced = chars.get(*pos) == Some(&'{');
            if braced {
                *pos += 1;
            }
            let n_start = *pos;
            if chars.get(*pos) == Some(&'-') {
                *pos += 1;
            }
            while *pos < chars.len() && chars[*pos].is_ascii_digit() {
                *pos += 1;
            }
            let digits: String = chars[n_start..*pos].iter().collect();
            if braced {
                if chars.get(*pos) != Some(&'}') {
                    return Err(FpError::BadToken(chars[start..*pos].iter().collect()));
                }
                *pos += 1;
            }
            digits
                .parse::<i64>()
                .map_err(|_| FpError::BadToken(chars[start..*pos].iter().collect()))?
        } else {
            1
        };
        letters.extend_from_slice(base.pow(exp).letters());
    }
    Ok(Word::new(letters))
}

fn is_name_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\'' || c == '.'
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g53333() -> Presentation {
        Presentation::parse(&["x", "y", "z"], &["x^5", "y^2", "z^2", "(x y^-1)^3"]).unwrap()
    }

    #[test]
    fn involutions_detected() {
        let p = g53333();
        assert_eq!(p.involutions(), &[false, true, true]);
    }

    #[test]
    fn parse_accepts_display_and_data_syntax() {
        let p = g53333();
        let a = p.parse_word("x*y^{-1}*z*y^{-1}").unwrap();
        let b = p.parse_word("x y^-1 z y^-1").unwrap();
        assert_eq!(a, b);
        assert_eq!(p.parse_word("x^2").unwrap().len(), 2);
        assert!(p.parse_word("").unwrap().is_empty());
        assert!(matches!(
            p.parse_word("x w"),
            Err(FpError::UnknownGenerator(ref n)) if n == "w"
        ));
        assert!(matches!(p.parse_word("x^q"), Err(FpError::BadToken(_))));
        assert_eq!(
            p.parse_word("(z*x^{-1})^3").unwrap(),
            p.parse_word("z x^-1 z x^-1 z x^-1").unwrap()
        );
        assert!(p.parse_word("(x y").is_err());
    }

    #[test]
    fn normalize_folds_involution_inverses() {
        let p = g53333();
        let w = p.parse_word("x y^-1 y z^-1 x").unwrap();
        assert_eq!(p.normalize(&w), p.parse_word("x z x").unwrap());
        // y^-1 y^-1 collapses once normalized: y y = 1
        let w = p.parse_word("x y^-1 y^-1 x").unwrap();
        assert_eq!(p.normalize(&w), p.parse_word("x^2").unwrap());
    }

    #[test]
    fn relators_are_cyclically_reduced() {
        let p = Presentation::parse(&["a", "b"], &["b a b^-1"]).unwrap();
        assert_eq!(p.relators()[0].len(), 1);
    }

    #[test]
    fn rejects_unknown_generator_index() {
        let err = Presentation::new(vec!["a"], vec![Word::generator(3)]).unwrap_err();
        assert!(matches!(err, FpError::UnknownGeneratorIndex(3)));
    }

    #[test]
    fn data_file_dump() {
        let p = Presentation::parse(&["a"], &["a^3"]).unwrap();
        assert_eq!(p.to_data_file("c3"), "presentation c3 : a\nrel = a a a\n");
    }
}
