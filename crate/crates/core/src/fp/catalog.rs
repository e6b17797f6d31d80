use std::collections::BTreeMap;
use std::sync::OnceLock;

use super::presentation::{is_generator_name, parse_word_with};
use super::{FpError, Presentation, Word};

const CATALOG_DATA: &str = include_str!("../../data/catalog.txt");

/// An item returned by [`Catalog::lookup`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CatalogItem {
    Presentation(Presentation),
    Word {
        host: String,
        word: Word,
    },
    Set {
        host: String,
        members: Vec<(String, Word)>,
    },
}

#[derive(Debug, Clone)]
struct NamedWord {
    host: String,
    word: Word,
}

#[derive(Debug, Clone)]
struct NamedSet {
    host: String,
    members: Vec<String>,
}

/// Named presentations, words and generating sets.
#[derive(Debug, Clone, Default)]
pub struct Catalog {
    presentations: BTreeMap<String, Presentation>,
    words: BTreeMap<String, NamedWord>,
    sets: BTreeMap<String, NamedSet>,
}

/// The compiled-in catalog, parsed once.
pub fn catalog() -> &'static Catalog {
    static CATALOG: OnceLock<Catalog> = OnceLock::new();
    CATALOG.get_or_init(|| Catalog::parse(CATALOG_DATA).expect("built-in catalog parses"))
}

impl Catalog {
    /// The raw text of the built-in data file.
    pub fn builtin_source() -> &'static str {
        CATALOG_DATA
    }

    pub fn parse(text: &str) -> Result<Self, FpError> {
        let mut cat = Catalog::default();
        // (name, generators, relator lines)
        let mut open_pres: Option<(String, Vec<String>, Vec<(usize, String)>)> = None;
        let mut word_host: Option<String> = None;

        let syntax = |line: usize, message: &str| FpError::Syntax {
            line,
            message: message.to_string(),
        };

        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix("presentation ") {
                if let Some(p) = open_pres.take() {
                    cat.finish_presentation(p)?;
                }
                word_host = None;
                let (name, gens) = rest
                    .split_once(':')
                    .ok_or_else(|| syntax(line_no, "expected `presentation NAME : GENS`"))?;
                let gens: Vec<String> = gens.split_whitespace().map(str::to_string).collect();
                open_pres = Some((name.trim().to_string(), gens, Vec::new()));
            } else if let Some(host) = line.strip_prefix("words ") {
                if let Some(p) = open_pres.take() {
                    cat.finish_presentation(p)?;
                }
                let host = host.trim().to_string();
                if !cat.presentations.contains_key(&host) {
                    return Err(syntax(line_no, "words block names an unknown presentation"));
                }
                word_host = Some(host);
            } else if let Some(rest) = line.strip_prefix("set ") {
                let host = word_host
                    .clone()
                    .ok_or_else(|| syntax(line_no, "set outside a words block"))?;
                let (name, members) = rest
                    .split_once('=')
                    .ok_or_else(|| syntax(line_no, "expected `set NAME = WORDS`"))?;
                let members: Vec<String> = members.split_whitespace().map(str::to_string).collect();
                for m in &members {
                    match cat.words.get(m) {
                        Some(nw) if nw.host == host => {}
                        _ => return Err(syntax(line_no, &format!("unknown word `{m}` in set"))),
                    }
                }
                cat.insert_key_check(name.trim(), line_no)?;
                cat.sets
                    .insert(name.trim().to_string(), NamedSet { host, members });
            } else {
                let (lhs, rhs) = line
                    .split_once('=')
                    .ok_or_else(|| syntax(line_no, "expected `NAME = TOKENS`"))?;
                let lhs = lhs.trim();
                if lhs == "rel" {
                    match open_pres.as_mut() {
                        Some((_, _, rels)) => rels.push((line_no, rhs.to_string())),
                        None => {
                            return Err(syntax(line_no, "relator outside a presentation block"))
                        }
                    }
                    continue;
                }
                let host = word_host
                    .clone()
                    .ok_or_else(|| syntax(line_no, "word outside a words block"))?;
                if !is_generator_name(lhs) {
                    return Err(syntax(line_no, "invalid word name"));
                }
                let pres = &cat.presentations[&host];
                let word = parse_word_with(rhs, |tok| {
                    if let Some(g) = pres.generator_index(tok) {
                        return Some(Word::generator(g));
                    }
                    cat.words
                        .get(tok)
                        .filter(|nw| nw.host == host)
                        .map(|nw| nw.word.clone())
                })
                .map_err(|e| syntax(line_no, &e.to_string()))?;
                cat.insert_key_check(lhs, line_no)?;
                cat.words.insert(lhs.to_string(), NamedWord { host, word });
            }
        }
        if let Some(p) = open_pres.take() {
            cat.finish_presentation(p)?;
        }
        Ok(cat)
    }

    fn insert_key_check(&self, key: &str, line: usize) -> Result<(), FpError> {
        if self.presentations.contains_key(key)
            || self.words.contains_key(key)
            || self.sets.contains_key(key)
        {
            return Err(FpError::Syntax {
                line,
                message: format!("duplicate key `{key}`"),
            });
        }
        Ok(())
    }

    fn finish_presentation(
        &mut self,
        (name, gens, rels): (String, Vec<String>, Vec<(usize, String)>),
    ) -> Result<(), FpError> {
        let mut words = Vec::with_capacity(rels.len());
        for (line, text) in rels {
            let w = super::parse_word(&gens, &text).map_err(|e| FpError::Syntax {
                line,
                message: e.to_string(),
            })?;
            words.push(w);
        }
        self.insert_key_check(&name, 0)?;
        let p = Presentation::new(gens, words)?;
        self.presentations.insert(name, p);
        Ok(())
    }

    /// All keys, sorted.
    pub fn keys(&self) -> Vec<&str> {
        let mut keys: Vec<&str> = self
            .presentations
            .keys()
            .chain(self.words.keys())
            .chain(self.sets.keys())
            .map(String::as_str)
            .collect();
        keys.sort_unstable();
        keys
    }

    fn unknown(&self, key: &str) -> FpError {
        FpError::UnknownKey {
            key: key.to_string(),
            valid: self.keys().join(", "),
        }
    }

    pub fn lookup(&self, key: &str) -> Result<CatalogItem, FpError> {
        if let Some(p) = self.presentations.get(key) {
            return Ok(CatalogItem::Presentation(p.clone()));
        }
        if let Some(nw) = self.words.get(key) {
            return Ok(CatalogItem::Word {
                host: nw.host.clone(),
                word: nw.word.clone(),
            });
        }
        if let Some(set) = self.sets.get(key) {
            return Ok(CatalogItem::Set {
                host: set.host.clone(),
                members: set
                    .members
                    .iter()
                    .map(|m| (m.clone(), self.words[m].word.clone()))
                    .collect(),
            });
        }
        Err(self.unknown(key))
    }

    pub fn presentation(&self, key: &str) -> Result<&Presentation, FpError> {
        match self.presentations.get(key) {
            Some(p) => Ok(p),
            None if self.words.contains_key(key) || self.sets.contains_key(key) => {
                Err(FpError::WrongKind(key.to_string()))
            }
            None => Err(self.unknown(key)),
        }
    }

    pub fn word(&self, key: &str) -> Result<&Word, FpError> {
        match self.words.get(key) {
            Some(nw) => Ok(&nw.word),
            None if self.presentations.contains_key(key) || self.sets.contains_key(key) => {
                Err(FpError::WrongKind(key.to_string()))
            }
            None => Err(self.unknown(key)),
        }
    }

    /// The words of a named set, in order.
    pub fn set(&self, key: &str) -> Result<Vec<Word>, FpError> {
        match self.sets.get(key) {
            Some(s) => Ok(s
                .members
                .iter()
                .map(|m| self.words[m].word.clone())
                .collect()),
            None if self.presentations.contains_key(key) || self.words.contains_key(key) => {
                Err(FpError::WrongKind(key.to_string()))
            }
            None => Err(self.unknown(key)),
        }
    }

    /// Name of the presentation a word or set is written over.
    pub fn host_of(&self, key: &str) -> Option<&str> {
        self.words
            .get(key)
            .map(|w| w.host.as_str())
            .or_else(|| self.sets.get(key).map(|s| s.host.as_str()))
    }
}
