//! Rule-based lemmatizer: exception table first, then ordered suffix rules.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use core::fmt;

/// Bundled irregular forms.
pub const BUNDLED_TABLE: &str = include_str!("../../data/lemma_exceptions.txt");

/// A malformed line in an exception table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableError {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for TableError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

/// Exception table mapping inflected forms to lemmas.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ExceptionTable {
    entries: BTreeMap<String, String>,
}

impl ExceptionTable {
    pub fn parse(text: &str) -> Result<Self, TableError> {
        let mut table = ExceptionTable::default();
        table.extend_from(text)?;
        Ok(table)
    }

    /// Adds the entries of `text`, replacing existing entries for the same
    /// inflected form.
    pub fn extend_from(&mut self, text: &str) -> Result<(), TableError> {
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut fields = line.split_whitespace();
            let (Some(inflected), Some(lemma), None) =
                (fields.next(), fields.next(), fields.next())
            else {
                return Err(TableError {
                    line: idx + 1,
                    message: "expected `<inflected> <lemma>`".to_string(),
                });
            };
            let lowercase = |w: &str| w.chars().all(|c| !c.is_uppercase());
            if !lowercase(inflected) || !lowercase(lemma) {
                return Err(TableError {
                    line: idx + 1,
                    message: "entries must be lowercase".to_string(),
                });
            }
            self.entries
                .insert(inflected.to_string(), lemma.to_string());
        }
        Ok(())
    }

    pub fn get(&self, word: &str) -> Option<&str> {
        self.entries.get(word).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }
}

fn is_vowel(c: u8) -> bool {
    matches!(c, b'a' | b'e' | b'i' | b'o' | b'u')
}

fn has_vowel(s: &str) -> bool {
    s.bytes().any(|c| is_vowel(c) || c == b'y')
}

/// Stem endings that take back a silent `e` once `-ed`/`-ing` is removed.
/// `C` matches any consonant, `V` any vowel; other characters are literal.
/// A leading `^` requires the pattern to cover the whole stem.
const SILENT_E: &[&str] = &[
    "Cat", "creat", "iz", "yz", "Cur", "uir", "Cir", "v", "c", "bl", "dl", "tl", "pl", "gl", "kl",
    "fl", "zl", "chang", "arrang", "exchang", "challeng", "rg", "dg", "Cag", "^us", "reus", "caus",
    "paus", "abus", "refus", "confus", "^fus", "accus", "excus", "misus", "diffus", "rs", "ps",
    "ns", "ls", "ys", "eas", "Cas", "os", "is", "Cut", "rout", "clud", "Cod", "Cid", "uid", "Cin",
    "Cak", "Cok", "Cik", "Cum", "Cam", "Cim", "Com", "Cot", "plet", "delet", "compet", "writ",
    "invit", "excit", "ignit", "recit", "typ", "scop", "shap", "escap", "wip", "scrib", "prob",
    "ignor", "restor", "explor", "stor", "scor", "ador", "deplor", "Car", "scal", "rul", "schedul",
    "Cil", "Cun", "clon", "zon", "phon", "postpon", "Cad", "u",
];

fn matches_pattern(stem: &[u8], pattern: &str) -> bool {
    let (anchored, pat) = match pattern.strip_prefix('^') {
        Some(rest) => (true, rest.as_bytes()),
        None => (false, pattern.as_bytes()),
    };
    if stem.len() < pat.len() || (anchored && stem.len() != pat.len()) {
        return false;
    }
    let tail = &stem[stem.len() - pat.len()..];
    tail.iter().zip(pat).all(|(&c, &p)| match p {
        b'C' => c.is_ascii_lowercase() && !is_vowel(c),
        b'V' => is_vowel(c),
        _ => c == p,
    })
}

/// Undoubles a final consonant or restores a silent `e` on a stem left by
/// `-ed`/`-ing` removal.
fn restore_stem(stem: &str) -> String {
    let b = stem.as_bytes();
    let n = b.len();
    if n >= 4 {
        let (x, y) = (b[n - 2], b[n - 1]);
        if x == y && !is_vowel(y) && !matches!(y, b'l' | b's' | b'z' | b'f') {
            return stem[..n - 1].to_string();
        }
    }
    if SILENT_E.iter().any(|p| matches_pattern(b, p)) {
        let mut s = stem.to_string();
        s.push('e');
        return s;
    }
    stem.to_string()
}

/// Applies the suffix rules to a lowercase word that missed the exception
/// table. Returns the input unchanged when no rule applies.
pub fn apply_suffix_rules(word: &str) -> String {
    if word.is_empty() || !word.bytes().all(|c| c.is_ascii_lowercase()) {
        return word.to_string();
    }
    let n = word.len();
    let strip = |k: usize| &word[..n - k];

    if word.ends_with("ies") && n > 4 {
        let mut s = strip(3).to_string();
        s.push('y');
        return s;
    }
    if word.ends_with("sses") {
        return strip(2).to_string();
    }
    if (word.ends_with("xes")
        || word.ends_with("ches")
        || word.ends_with("shes")
        || word.ends_with("zzes"))
        && n > 4
    {
        return strip(2).to_string();
    }
    if word.ends_with('s')
        && n > 3
        && !word.ends_with("ss")
        && !word.ends_with("us")
        && !word.ends_with("is")
    {
        return strip(1).to_string();
    }
    if word.ends_with("ied") && n > 4 {
        let mut s = strip(3).to_string();
        s.push('y');
        return s;
    }
    if word.ends_with("ed") {
        let stem = strip(2);
        if has_vowel(stem) && !stem.ends_with('e') {
            return restore_stem(stem);
        }
        return word.to_string();
    }
    if word.ends_with("ing") {
        let stem = strip(3);
        if has_vowel(stem) {
            return restore_stem(stem);
        }
    }
    word.to_string()
}

/// Inverse of the plural suffix rules: the regular plural of `lemma`.
pub fn pluralize(lemma: &str) -> String {
    let b = lemma.as_bytes();
    let n = b.len();
    let mut out = String::from(lemma);
    if n >= 2 && b[n - 1] == b'y' && !is_vowel(b[n - 2]) {
        out.pop();
        out.push_str("ies");
    } else if lemma.ends_with('s')
        || lemma.ends_with('x')
        || lemma.ends_with("ch")
        || lemma.ends_with("sh")
        || lemma.ends_with('z')
    {
        out.push_str("es");
    } else {
        out.push('s');
    }
    out
}
