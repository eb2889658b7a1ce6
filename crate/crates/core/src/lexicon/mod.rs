//! Identifier splitting and inflection-insensitive normalization.
//!
//! Identifiers are split on underscores, lower-to-upper transitions,
//! letter/digit transitions and at the end of acronym runs
//! (`HTMLParser` becomes `HTML`, `Parser`). Words are then case-folded and,
//! in [`Mode::Lemma`], lemmatized with an exception table followed by suffix
//! rules.

mod lemma;

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

pub use lemma::{apply_suffix_rules, pluralize, ExceptionTable, TableError, BUNDLED_TABLE};

/// Whether words are compared by folded surface or by lemma.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Raw,
    Lemma,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Raw => "raw",
            Mode::Lemma => "lemma",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl core::str::FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "raw" => Ok(Mode::Raw),
            "lemma" => Ok(Mode::Lemma),
            other => Err(alloc::format!(
                "unknown mode `{other}` (expected raw or lemma)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Casing {
    Lower,
    Capitalized,
    AllCaps,
    Mixed,
}

impl Casing {
    /// Casing pattern of a word. Words without uppercase letters (including
    /// digit runs) are `Lower`; a lone uppercase letter is `Capitalized`.
    pub fn of(surface: &str) -> Casing {
        let mut chars = surface.chars();
        let Some(first) = chars.next() else {
            return Casing::Lower;
        };
        let rest_upper = chars.clone().filter(|c| c.is_uppercase()).count();
        let rest_lower = chars.filter(|c| c.is_lowercase()).count();
        match (first.is_uppercase(), rest_upper, rest_lower) {
            (false, 0, _) => Casing::Lower,
            (true, 0, _) => Casing::Capitalized,
            (true, _, 0) => Casing::AllCaps,
            _ => Casing::Mixed,
        }
    }

    /// Re-cases a lowercase word. `Mixed` leaves it lowercase.
    pub fn apply(self, folded: &str) -> String {
        match self {
            Casing::Lower | Casing::Mixed => folded.to_lowercase(),
            Casing::AllCaps => folded.to_uppercase(),
            Casing::Capitalized => {
                let mut chars = folded.chars();
                match chars.next() {
                    Some(c) => c
                        .to_uppercase()
                        .chain(chars.flat_map(char::to_lowercase))
                        .collect(),
                    None => String::new(),
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Word {
    pub surface: String,
    pub folded: String,
    pub lemma: String,
    pub casing: Casing,
}

impl Word {
    /// A word whose lemma is its folded form.
    pub fn raw(surface: &str) -> Word {
        let folded = surface.to_lowercase();
        Word {
            surface: surface.to_string(),
            lemma: folded.clone(),
            folded,
            casing: Casing::of(surface),
        }
    }

    pub fn is_numeric(&self) -> bool {
        self.surface.chars().all(|c| c.is_ascii_digit())
    }
}

/// An identifier split into words.
///
/// `separators` has one entry more than `words`: the underscore run before
/// each word, then the run after the last one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WordSequence {
    pub words: Vec<Word>,
    pub origin: String,
    pub mode: Mode,
    separators: Vec<String>,
}

impl WordSequence {
    pub(crate) fn from_parts(words: Vec<Word>, separators: Vec<String>, mode: Mode) -> Self {
        debug_assert_eq!(separators.len(), words.len() + 1);
        let mut origin = String::new();
        for (sep, word) in separators.iter().zip(&words) {
            origin.push_str(sep);
            origin.push_str(&word.surface);
        }
        origin.push_str(separators.last().map(String::as_str).unwrap_or(""));
        WordSequence {
            words,
            origin,
            mode,
            separators,
        }
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn lemmas(&self) -> Vec<&str> {
        self.words.iter().map(|w| w.lemma.as_str()).collect()
    }

    pub fn folded(&self) -> Vec<&str> {
        self.words.iter().map(|w| w.folded.as_str()).collect()
    }

    pub fn separators(&self) -> &[String] {
        &self.separators
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LexiconError {
    InvalidIdentifier(String),
}

impl fmt::Display for LexiconError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LexiconError::InvalidIdentifier(name) => write!(f, "invalid identifier `{name}`"),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Class {
    Upper,
    Lower,
    Digit,
}

fn classify(c: char) -> Class {
    if c.is_ascii_digit() {
        Class::Digit
    } else if c.is_uppercase() {
        Class::Upper
    } else {
        Class::Lower
    }
}

/// Splits an identifier into raw words (lemma = folded form).
pub fn split_identifier(name: &str) -> Result<WordSequence, LexiconError> {
    if !name.chars().all(|c| c == '_' || c.is_alphanumeric()) {
        return Err(LexiconError::InvalidIdentifier(name.to_string()));
    }
    let mut words = Vec::new();
    let mut separators = Vec::new();
    let mut sep = String::new();
    let mut current = String::new();
    let chars: Vec<char> = name.chars().collect();

    for (i, &c) in chars.iter().enumerate() {
        if c == '_' {
            if !current.is_empty() {
                words.push(Word::raw(&current));
                current.clear();
            }
            sep.push(c);
            continue;
        }
        if !current.is_empty() {
            let prev = classify(chars[i - 1]);
            let cur = classify(c);
            let next = chars
                .get(i + 1)
                .copied()
                .filter(|&n| n != '_')
                .map(classify);
            let boundary = match (prev, cur) {
                (Class::Lower, Class::Upper) => true,
                (Class::Digit, Class::Upper | Class::Lower) => true,
                (Class::Upper | Class::Lower, Class::Digit) => true,
                (Class::Upper, Class::Upper) => next == Some(Class::Lower),
                _ => false,
            };
            if boundary {
                words.push(Word::raw(&current));
                current.clear();
            }
        }
        if current.is_empty() {
            separators.push(core::mem::take(&mut sep));
        }
        current.push(c);
    }
    if !current.is_empty() {
        words.push(Word::raw(&current));
    }
    separators.push(sep);

    if words.is_empty() {
        return Err(LexiconError::InvalidIdentifier(name.to_string()));
    }
    Ok(WordSequence::from_parts(words, separators, Mode::Raw))
}

/// Splitter plus lemmatizer configuration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lexicon {
    exceptions: ExceptionTable,
}

impl Default for Lexicon {
    fn default() -> Self {
        Lexicon::bundled()
    }
}

impl Lexicon {
    /// Lexicon with the bundled exception table.
    pub fn bundled() -> Lexicon {
        Lexicon {
            exceptions: ExceptionTable::parse(BUNDLED_TABLE).expect("bundled table is well formed"),
        }
    }

    pub fn with_table(exceptions: ExceptionTable) -> Lexicon {
        Lexicon { exceptions }
    }

    /// Bundled table with `overrides` layered on top.
    pub fn with_overrides(overrides: &str) -> Result<Lexicon, TableError> {
        let mut lexicon = Lexicon::bundled();
        lexicon.exceptions.extend_from(overrides)?;
        Ok(lexicon)
    }

    pub fn exceptions(&self) -> &ExceptionTable {
        &self.exceptions
    }

    /// Lemma of a lowercase word. Numeric words are returned unchanged.
    ///
    /// Suffix rules are repeated until the word stops changing, so a stem
    /// that still looks inflected is reduced further and the result is
    /// always its own lemma. Every rule shortens the word, which bounds the
    /// loop. An exception table entry ends the reduction.
    pub fn lemmatize_word(&self, folded: &str) -> String {
        if folded.chars().any(|c| c.is_ascii_digit()) {
            return folded.to_string();
        }
        let mut word = folded.to_string();
        loop {
            if let Some(lemma) = self.exceptions.get(&word) {
                return lemma.to_string();
            }
            let next = apply_suffix_rules(&word);
            if next == word {
                return word;
            }
            word = next;
        }
    }

    pub fn normalize(&self, name: &str, mode: Mode) -> Result<WordSequence, LexiconError> {
        let mut seq = split_identifier(name)?;
        if mode == Mode::Lemma {
            for word in &mut seq.words {
                word.lemma = self.lemmatize_word(&word.folded);
            }
        }
        seq.mode = mode;
        Ok(seq)
    }

    /// Replaces each word's lemma according to `mode`.
    pub fn relemmatize(&self, words: &mut [Word], mode: Mode) {
        for word in words {
            word.lemma = match mode {
                Mode::Raw => word.folded.clone(),
                Mode::Lemma => self.lemmatize_word(&word.folded),
            };
        }
    }
}
