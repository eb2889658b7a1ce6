//! Re-applying a chunk to another identifier.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use super::{ChunkKind, InsertContext, OperationalChunk};
use crate::lexicon::{pluralize, Casing, Mode, Word, WordSequence};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ChunkError {
    /// Applying the chunk would leave no words.
    DegenerateResult,
}

impl fmt::Display for ChunkError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChunkError::DegenerateResult => {
                f.write_str("chunk application leaves an empty identifier")
            }
        }
    }
}

/// How words of the target are cased and joined.
struct Style {
    first: Casing,
    inner: Casing,
    joint: String,
}

impl Style {
    fn of(target: &WordSequence) -> Style {
        let first = target.words.first().map_or(Casing::Lower, |w| w.casing);
        let seps = target.separators();
        let (inner, joint) = match target.words.get(1) {
            Some(second) => {
                let inner = match second.casing {
                    Casing::Mixed => Casing::Capitalized,
                    c => c,
                };
                (inner, seps[1].clone())
            }
            None if first == Casing::AllCaps => (Casing::AllCaps, String::from("_")),
            None => (Casing::Capitalized, String::new()),
        };
        Style {
            first,
            inner,
            joint,
        }
    }

    fn casing_at(&self, position: usize) -> Casing {
        if position == 0 {
            self.first
        } else {
            self.inner
        }
    }
}

fn make_word(lemma: &str, plural: bool, casing: Casing, mode: Mode) -> Word {
    let folded = if plural {
        pluralize(lemma)
    } else {
        String::from(lemma)
    };
    let surface = casing.apply(&folded);
    let lemma = match mode {
        Mode::Raw => folded.clone(),
        Mode::Lemma => String::from(lemma),
    };
    let casing = Casing::of(&surface);
    Word {
        surface,
        folded,
        lemma,
        casing,
    }
}

fn recase(word: &mut Word, casing: Casing) {
    word.surface = casing.apply(&word.folded);
    word.casing = Casing::of(&word.surface);
}

fn occurrences(haystack: &[&str], needle: &[String]) -> Vec<usize> {
    if needle.is_empty() || needle.len() > haystack.len() {
        return Vec::new();
    }
    (0..=haystack.len() - needle.len())
        .filter(|&p| {
            haystack[p..p + needle.len()]
                .iter()
                .zip(needle)
                .all(|(a, b)| *a == b)
        })
        .collect()
}

/// Applies `chunk` to every matching place in `target`, one result per place.
///
/// Replace and Delete act on each contiguous occurrence of the deleted
/// lemmas. Insert needs the word next to the original insertion point to
/// occur in the target and inserts beside it. Other and Inflect never
/// produce results.
pub fn apply_chunk(
    chunk: &OperationalChunk,
    target: &WordSequence,
) -> Result<Vec<WordSequence>, ChunkError> {
    let lemmas = target.lemmas();
    let style = Style::of(target);
    let mut results = Vec::new();
    match chunk.kind {
        ChunkKind::Replace => {
            for p in occurrences(&lemmas, &chunk.deleted) {
                results.push(replace_at(chunk, target, &style, p));
            }
        }
        ChunkKind::Delete => {
            for p in occurrences(&lemmas, &chunk.deleted) {
                results.push(delete_at(target, &style, p, chunk.deleted.len())?);
            }
        }
        ChunkKind::Insert => {
            let Some(context) = &chunk.context else {
                return Ok(results);
            };
            let (word, after) = match context {
                InsertContext::After(w) => (w, true),
                InsertContext::Before(w) => (w, false),
            };
            for (p, _) in lemmas
                .iter()
                .enumerate()
                .filter(|(_, l)| **l == word.as_str())
            {
                results.push(insert_at(
                    chunk,
                    target,
                    &style,
                    if after { p + 1 } else { p },
                ));
            }
        }
        ChunkKind::Other | ChunkKind::Inflect => {}
    }
    Ok(results)
}

fn replace_at(
    chunk: &OperationalChunk,
    target: &WordSequence,
    style: &Style,
    p: usize,
) -> WordSequence {
    let k = chunk.deleted.len();
    let seps = target.separators();
    let last_replaced = &target.words[p + k - 1];
    let plural = last_replaced.folded.ends_with('s') && !last_replaced.lemma.ends_with('s');

    let mut words: Vec<Word> = target.words[..p].to_vec();
    let mut new_seps: Vec<String> = seps[..=p].to_vec();
    for (q, lemma) in chunk.added.iter().enumerate() {
        let casing = if p + q == 0 {
            style.first
        } else if q == 0 {
            match target.words[p].casing {
                Casing::Mixed => style.inner,
                c => c,
            }
        } else {
            style.inner
        };
        let is_last = q + 1 == chunk.added.len();
        words.push(make_word(lemma, plural && is_last, casing, target.mode));
        if q > 0 {
            new_seps.push(style.joint.clone());
        }
    }
    words.extend_from_slice(&target.words[p + k..]);
    new_seps.extend_from_slice(&seps[p + k..]);
    WordSequence::from_parts(words, new_seps, target.mode)
}

fn delete_at(
    target: &WordSequence,
    style: &Style,
    p: usize,
    k: usize,
) -> Result<WordSequence, ChunkError> {
    let n = target.len();
    if k >= n {
        return Err(ChunkError::DegenerateResult);
    }
    let seps = target.separators();
    let mut words: Vec<Word> = target.words.clone();
    words.drain(p..p + k);
    let mut new_seps: Vec<String> = seps.to_vec();
    if p + k == n {
        new_seps.drain(p..p + k);
    } else {
        new_seps.drain(p + 1..p + k + 1);
    }
    if p == 0 {
        recase(&mut words[0], style.first);
    }
    Ok(WordSequence::from_parts(words, new_seps, target.mode))
}

fn insert_at(
    chunk: &OperationalChunk,
    target: &WordSequence,
    style: &Style,
    q: usize,
) -> WordSequence {
    let seps = target.separators();
    let mut words: Vec<Word> = target.words[..q].to_vec();
    let mut new_seps: Vec<String> = seps[..q].to_vec();
    for (i, lemma) in chunk.added.iter().enumerate() {
        words.push(make_word(lemma, false, style.casing_at(q + i), target.mode));
    }
    if q == 0 {
        new_seps.push(seps[0].clone());
        new_seps.extend(core::iter::repeat_n(style.joint.clone(), chunk.added.len()));
        new_seps.extend_from_slice(&seps[1..]);
        let mut displaced = target.words[0].clone();
        recase(&mut displaced, style.inner);
        words.push(displaced);
        words.extend_from_slice(&target.words[1..]);
    } else {
        new_seps.extend(core::iter::repeat_n(style.joint.clone(), chunk.added.len()));
        new_seps.extend_from_slice(&seps[q..]);
        words.extend_from_slice(&target.words[q..]);
    }
    WordSequence::from_parts(words, new_seps, target.mode)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chunks::diff_chunks;
    use crate::lexicon::Lexicon;
    use alloc::vec;

    fn seq(name: &str) -> WordSequence {
        Lexicon::bundled().normalize(name, Mode::Lemma).unwrap()
    }

    fn chunk_of(old: &str, new: &str) -> OperationalChunk {
        let c = diff_chunks(&seq(old), &seq(new));
        assert_eq!(c.len(), 1, "{old} -> {new}");
        c.into_iter().next().unwrap()
    }

    fn apply(chunk: &OperationalChunk, target: &str) -> Vec<String> {
        apply_chunk(chunk, &seq(target))
            .unwrap()
            .into_iter()
            .map(|s| s.origin)
            .collect()
    }

    #[test]
    fn replace_keeps_casing_and_plural() {
        let c = chunk_of("MetricType", "MetricAttribute");
        assert_eq!(apply(&c, "metricType"), ["metricAttribute"]);
        assert_eq!(
            apply(&c, "getDisabledMetricTypes"),
            ["getDisabledMetricAttributes"]
        );
        assert_eq!(apply(&c, "GMetricType"), ["GMetricAttribute"]);
        assert_eq!(apply(&c, "METRIC_TYPES"), ["METRIC_ATTRIBUTES"]);
        assert_eq!(apply(&c, "type_name"), ["attribute_name"]);
        assert_eq!(apply(&c, "TypeHolder"), ["AttributeHolder"]);
        assert!(apply(&c, "metricKind").is_empty());
    }

    #[test]
    fn replace_every_occurrence_separately() {
        let c = chunk_of("typeA", "kindA");
        assert_eq!(apply(&c, "typeOfType"), ["kindOfType", "typeOfKind"]);
    }

    #[test]
    fn multiword_replacement() {
        let c = chunk_of("addItem", "appendNewItem");
        assert_eq!(c.key().as_str(), "R|add|append+new");
        assert_eq!(apply(&c, "addItems"), ["appendNewItems"]);
        assert_eq!(apply(&c, "ADD_ITEM"), ["APPEND_NEW_ITEM"]);
    }

    #[test]
    fn delete_in_each_position() {
        let c = chunk_of("skipConstantResult", "skipResult");
        assert_eq!(apply(&c, "constantValue"), ["value"]);
        assert_eq!(apply(&c, "ConstantValue"), ["Value"]);
        assert_eq!(apply(&c, "valueConstant"), ["value"]);
        assert_eq!(apply(&c, "max_constant_value"), ["max_value"]);
        assert_eq!(apply(&c, "_constant_value"), ["_value"]);
        assert!(apply(&c, "value").is_empty());
        assert_eq!(
            apply_chunk(&c, &seq("constant")),
            Err(ChunkError::DegenerateResult)
        );
    }

    #[test]
    fn insert_needs_context() {
        let c = chunk_of("dataProviderId", "dataProviderInstanceId");
        assert_eq!(apply(&c, "providerName"), ["providerInstanceName"]);
        assert_eq!(apply(&c, "getProvider"), ["getProviderInstance"]);
        assert!(apply(&c, "dataId").is_empty());

        let front = chunk_of("value", "newValue");
        assert_eq!(apply(&front, "valueHolder"), ["newValueHolder"]);
        assert_eq!(apply(&front, "VALUE"), ["NEW_VALUE"]);
        assert_eq!(apply(&front, "ValueHolder"), ["NewValueHolder"]);
    }

    #[test]
    fn other_and_inflect_do_nothing() {
        let c = chunk_of("node", "nodes");
        assert_eq!(c.kind, ChunkKind::Inflect);
        assert!(apply(&c, "nodeList").is_empty());
        let o = OperationalChunk {
            kind: ChunkKind::Other,
            deleted: vec!["time".into()],
            added: vec![],
            anchor: 0,
            context: None,
        };
        assert!(apply(&o, "TIMES").is_empty());
    }

    #[test]
    fn results_reproduce_the_chunk() {
        let c = chunk_of("MetricType", "MetricAttribute");
        for target in ["metricType", "getDisabledMetricTypes", "TYPE_ID"] {
            for result in apply_chunk(&c, &seq(target)).unwrap() {
                let back = diff_chunks(&seq(target), &seq(&result.origin));
                assert!(
                    back.iter().any(|b| b.key() == c.key()),
                    "{target} -> {}",
                    result.origin
                );
            }
        }
    }
}
