//! Generators shared by the property tests.
#![allow(dead_code)]

use corename_core::facts::SourceFile;
use proptest::prelude::*;
use proptest::sample::select;

pub const TYPES: &[&str] = &["Item", "Node", "Query", "Entry", "MetricType"];
pub const FIELDS: &[&str] = &["item", "node", "count", "items", "metricType"];
pub const METHODS: &[&str] = &[
    "getItem",
    "addItem",
    "removeItem",
    "findNode",
    "getMetricTypes",
];
pub const LOCALS: &[&str] = &["value", "result", "node", "entry", "query"];

/// Lowercase words with the suffixes the lemmatizer handles.
pub fn inflected_word() -> impl Strategy<Value = String> {
    (
        "[a-z]{1,7}",
        select(
            &[
                "", "s", "es", "ies", "ed", "ing", "ss", "us", "ses", "ches", "ied", "ying",
            ][..],
        ),
    )
        .prop_map(|(stem, suffix)| format!("{stem}{suffix}"))
}

pub fn word() -> impl Strategy<Value = String> {
    prop_oneof![
        select(
            &[
                "get", "item", "items", "query", "queries", "node", "nodes", "type", "types",
                "box", "boxes"
            ][..]
        )
        .prop_map(String::from),
        inflected_word(),
        "[0-9]{1,3}",
    ]
}

/// Identifiers in camelCase, PascalCase, UPPER_SNAKE or snake_case.
pub fn identifier() -> impl Strategy<Value = String> {
    (prop::collection::vec(word(), 1..5), 0..4u8).prop_map(|(words, style)| {
        let head = if words[0].starts_with(|c: char| c.is_ascii_digit()) {
            "x"
        } else {
            ""
        };
        let body = match style {
            0 => words
                .iter()
                .enumerate()
                .map(|(i, w)| if i == 0 { w.clone() } else { capitalize(w) })
                .collect(),
            1 => words.iter().map(|w| capitalize(w)).collect(),
            2 => words
                .iter()
                .map(|w| w.to_uppercase())
                .collect::<Vec<_>>()
                .join("_"),
            _ => words.join("_"),
        };
        format!("{head}{body}")
    })
}

pub fn capitalize(w: &str) -> String {
    let mut c = w.chars();
    c.next()
        .map(|f| f.to_uppercase().chain(c).collect())
        .unwrap_or_default()
}

fn statement() -> impl Strategy<Value = String> {
    (0..5u8, select(FIELDS), select(METHODS), select(LOCALS)).prop_map(
        |(form, field, method, local)| match form {
            0 => format!("{field} = {local};"),
            1 => format!("{method}({local});"),
            2 => format!("{local} = {field};"),
            3 => format!("this.{field} = {method}();"),
            _ => format!("{local} = {method}({field});"),
        },
    )
}

fn method() -> impl Strategy<Value = String> {
    (
        select(METHODS),
        select(TYPES),
        (select(TYPES), select(LOCALS)),
        (select(TYPES), select(LOCALS)),
        prop::collection::vec(statement(), 0..4),
    )
        .prop_map(|(name, ret, (ptype, param), (ltype, local), body)| {
            let param = format!("{param}Arg");
            format!(
                "  {ret} {name}({ptype} {param}) {{\n    {ltype} {local} = {param};\n    {}\n    return {local};\n  }}\n",
                body.join("\n    ")
            )
        })
}

/// One Java class with fields, methods and simple data flow.
pub fn java_class() -> impl Strategy<Value = String> {
    (
        select(TYPES),
        prop::option::of(select(TYPES)),
        prop::collection::vec((select(TYPES), select(FIELDS)), 0..3),
        prop::collection::vec(method(), 0..3),
    )
        .prop_map(|(name, parent, fields, methods)| {
            let extends = parent.map(|p| format!(" extends {p}")).unwrap_or_default();
            let fields: String = fields
                .iter()
                .map(|(t, f)| format!("  {t} {f};\n"))
                .collect();
            format!("class {name}{extends} {{\n{fields}{}}}\n", methods.concat())
        })
}

pub fn java_files(max: usize) -> impl Strategy<Value = Vec<SourceFile>> {
    prop::collection::vec(java_class(), 1..=max).prop_map(|classes| {
        classes
            .into_iter()
            .enumerate()
            .map(|(i, text)| SourceFile {
                path: format!("F{i}.java"),
                text,
            })
            .collect()
    })
}

/// Every declared and referenced name the generators use.
pub fn all_names() -> Vec<String> {
    TYPES
        .iter()
        .chain(FIELDS)
        .chain(METHODS)
        .chain(LOCALS)
        .map(|s| s.to_string())
        .chain(LOCALS.iter().map(|l| format!("{l}Arg")))
        .collect()
}
