//! Fact extraction for a Java subset.
//!
//! Declarations (types, fields, methods, parameters, locals) are parsed
//! structurally. Method bodies go through a small expression parser that
//! records invocations, field accesses, assignments and call arguments.
//! Lambdas, anonymous class bodies, local classes and array initializers
//! are skipped without recording anything inside them.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use super::lexer::{tokenize, Tok, Token};
use super::{
    Argument, AssignRow, CallRow, CodeFacts, Entity, EntityId, EntityKind, NameRow, TypeRow,
    ValueForm,
};

/// A file left out of the facts because it is outside the supported subset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkippedFile {
    pub path: String,
    pub line: u32,
    pub message: String,
}

impl fmt::Display for SkippedFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.path, self.line, self.message)
    }
}

const MODIFIERS: &[&str] = &[
    "public",
    "private",
    "protected",
    "static",
    "final",
    "abstract",
    "native",
    "synchronized",
    "transient",
    "volatile",
    "strictfp",
    "default",
    "sealed",
];

const PRIMITIVES: &[&str] = &[
    "boolean", "byte", "char", "short", "int", "long", "float", "double", "void",
];

const RESERVED: &[&str] = &[
    "abstract",
    "assert",
    "boolean",
    "break",
    "byte",
    "case",
    "catch",
    "char",
    "class",
    "const",
    "continue",
    "default",
    "do",
    "double",
    "else",
    "enum",
    "extends",
    "final",
    "finally",
    "float",
    "for",
    "goto",
    "if",
    "implements",
    "import",
    "instanceof",
    "int",
    "interface",
    "long",
    "native",
    "new",
    "package",
    "private",
    "protected",
    "public",
    "return",
    "short",
    "static",
    "strictfp",
    "super",
    "switch",
    "synchronized",
    "this",
    "throw",
    "throws",
    "transient",
    "try",
    "void",
    "volatile",
    "while",
    "true",
    "false",
    "null",
];

const ASSIGN_OPS: &[&str] = &[
    "=", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<=", ">>>=",
];

const BINARY_OPS: &[&str] = &[
    "||", "&&", "|", "^", "&", "==", "!=", "<", ">", "<=", ">=", "<<", "+", "-", "*", "/", "%",
];

type PResult<T> = Result<T, (u32, &'static str)>;

/// Outermost type name plus the outermost names of its type arguments.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
struct TypeRef {
    outer: String,
    args: Vec<String>,
}

impl TypeRef {
    fn names(&self) -> impl Iterator<Item = &String> {
        core::iter::once(&self.outer).chain(self.args.iter())
    }
}

/// What an expression amounts to, as far as the relation tables care.
#[derive(Debug, Clone, PartialEq, Eq)]
enum Operand {
    Name(String),
    Field(String),
    Call(String),
    This,
    Other,
}

struct Scope {
    method: Option<EntityId>,
    method_name: String,
    class: EntityId,
    params: BTreeSet<String>,
    locals: BTreeSet<String>,
}

struct Parser<'a> {
    toks: Vec<Token>,
    pos: usize,
    path: &'a str,
    facts: CodeFacts,
    scope: Option<Scope>,
    mute: u32,
    attributes: BTreeMap<EntityId, BTreeSet<String>>,
    pending_access: Vec<(EntityId, EntityId, String)>,
}

/// Extracts facts from one file. Entity ids start at zero.
pub fn extract_file(path: &str, text: &str) -> Result<CodeFacts, SkippedFile> {
    let skipped = |line: u32, message: &str| SkippedFile {
        path: path.to_string(),
        line,
        message: message.to_string(),
    };
    let toks = tokenize(text).map_err(|e| skipped(e.line, e.message))?;
    let mut parser = Parser {
        toks,
        pos: 0,
        path,
        facts: CodeFacts::default(),
        scope: None,
        mute: 0,
        attributes: BTreeMap::new(),
        pending_access: Vec::new(),
    };
    parser
        .compilation_unit()
        .map_err(|(line, msg)| skipped(line, msg))?;
    Ok(parser.finish())
}

impl<'a> Parser<'a> {
    // ---- token helpers ----

    fn tok(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.pos + k).map(|t| &t.tok)
    }

    fn line(&self) -> u32 {
        self.toks
            .get(self.pos)
            .or_else(|| self.toks.last())
            .map_or(1, |t| t.line)
    }

    fn eof(&self) -> bool {
        self.pos >= self.toks.len()
    }

    fn is_punct_at(&self, k: usize, p: &str) -> bool {
        matches!(self.tok(k), Some(Tok::Punct(q)) if *q == p)
    }

    fn is_punct(&self, p: &str) -> bool {
        self.is_punct_at(0, p)
    }

    fn ident_at(&self, k: usize) -> Option<&str> {
        match self.tok(k) {
            Some(Tok::Ident(s)) => Some(s.as_str()),
            _ => None,
        }
    }

    fn is_ident(&self, word: &str) -> bool {
        self.ident_at(0) == Some(word)
    }

    fn bump(&mut self) {
        if !self.eof() {
            self.pos += 1;
        }
    }

    fn eat(&mut self, p: &str) -> bool {
        if self.is_punct(p) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, p: &str, message: &'static str) -> PResult<()> {
        if self.eat(p) {
            Ok(())
        } else {
            Err((self.line(), message))
        }
    }

    fn name(&mut self) -> PResult<(String, u32)> {
        match self.ident_at(0) {
            Some(s) if !RESERVED.contains(&s) => {
                let out = (s.to_string(), self.line());
                self.pos += 1;
                Ok(out)
            }
            _ => Err((self.line(), "expected a name")),
        }
    }

    /// Skips from an opening token to just past its matching close.
    fn skip_balanced(&mut self, open: &str, close: &str) -> PResult<()> {
        let start = self.line();
        let mut depth = 0usize;
        loop {
            if self.eof() {
                return Err((start, "unbalanced brackets"));
            }
            if self.is_punct(open) {
                depth += 1;
            } else if self.is_punct(close) {
                depth -= 1;
                if depth == 0 {
                    self.pos += 1;
                    return Ok(());
                }
            }
            self.pos += 1;
        }
    }

    // ---- recording ----

    fn entity(
        &mut self,
        kind: EntityKind,
        name: String,
        container: Option<EntityId>,
        line: u32,
    ) -> EntityId {
        let id = self.facts.entities.len() as EntityId;
        if let Some(c) = container {
            self.facts.contains.push((c, id));
        }
        self.facts.entities.push(Entity {
            id,
            kind,
            name,
            container,
            file: self.path.to_string(),
            line,
        });
        id
    }

    fn typed(&mut self, entity: EntityId, ty: &TypeRef, returns: bool) {
        if ty.outer == "void" || ty.outer == "var" {
            return;
        }
        let table = if returns {
            &mut self.facts.returns
        } else {
            &mut self.facts.typed
        };
        for name in ty.names() {
            let row = TypeRow {
                entity,
                type_name: name.clone(),
            };
            if !table.contains(&row) {
                table.push(row);
            }
        }
    }

    fn declare_local(&mut self, name: String, line: u32, ty: Option<&TypeRef>) {
        if self.mute > 0 {
            return;
        }
        let Some(scope) = self.scope.as_mut() else {
            return;
        };
        scope.locals.insert(name.clone());
        let container = scope.method.unwrap_or(scope.class);
        let id = self.entity(EntityKind::Variable, name, Some(container), line);
        if let Some(ty) = ty {
            self.typed(id, ty, false);
        }
    }

    fn is_local(&self, name: &str) -> bool {
        self.scope.as_ref().is_some_and(|s| s.locals.contains(name))
    }

    fn is_param(&self, name: &str) -> bool {
        self.scope.as_ref().is_some_and(|s| s.params.contains(name))
    }

    fn usage(&mut self, name: &str, explicit_this: bool) {
        if self.mute > 0 {
            return;
        }
        let Some(scope) = &self.scope else { return };
        let Some(method) = scope.method else { return };
        if !explicit_this && (scope.locals.contains(name) || scope.params.contains(name)) {
            return;
        }
        self.pending_access
            .push((method, scope.class, name.to_string()));
    }

    fn invocation(&mut self, callee: &str, args: Vec<Option<Argument>>, invokes: bool) {
        if self.mute > 0 {
            return;
        }
        if invokes {
            if let Some(scope) = &self.scope {
                if let Some(method) = scope.method {
                    if scope.method_name != callee {
                        let row = NameRow {
                            entity: method,
                            name: callee.to_string(),
                        };
                        if !self.facts.invokes.contains(&row) {
                            self.facts.invokes.push(row);
                        }
                    }
                }
            }
        }
        self.facts.calls.push(CallRow {
            callee: callee.to_string(),
            args,
        });
    }

    fn assignment(&mut self, lhs: &str, rhs: &Operand) {
        if self.mute > 0 {
            return;
        }
        let (rhs, form) = match rhs {
            Operand::Name(n) if self.is_local(n) => (n, ValueForm::Variable),
            Operand::Name(n) if self.is_param(n) => (n, ValueForm::Parameter),
            Operand::Name(n) | Operand::Field(n) => (n, ValueForm::Attribute),
            Operand::Call(n) => (n, ValueForm::Invocation),
            Operand::This | Operand::Other => return,
        };
        let row = AssignRow {
            lhs: lhs.to_string(),
            rhs: rhs.clone(),
            form,
        };
        if !self.facts.assigns.contains(&row) {
            self.facts.assigns.push(row);
        }
    }

    fn argument(&self, op: Operand) -> Option<Argument> {
        match op {
            Operand::Name(n) if self.is_local(&n) || self.is_param(&n) => Some(Argument {
                name: n,
                form: ValueForm::Variable,
            }),
            Operand::Name(n) | Operand::Field(n) => Some(Argument {
                name: n,
                form: ValueForm::Attribute,
            }),
            Operand::Call(n) => Some(Argument {
                name: n,
                form: ValueForm::Invocation,
            }),
            Operand::This | Operand::Other => None,
        }
    }

    fn finish(mut self) -> CodeFacts {
        let mut accesses: Vec<NameRow> = Vec::new();
        for (method, class, name) in core::mem::take(&mut self.pending_access) {
            if self
                .attributes
                .get(&class)
                .is_some_and(|a| a.contains(&name))
            {
                let row = NameRow {
                    entity: method,
                    name,
                };
                if !accesses.contains(&row) {
                    accesses.push(row);
                }
            }
        }
        self.facts.accesses = accesses;
        self.facts
    }

    // ---- declarations ----

    fn compilation_unit(&mut self) -> PResult<()> {
        while !self.eof() {
            if self.eat(";") {
                continue;
            }
            if self.is_ident("package") || self.is_ident("import") {
                while !self.eof() && !self.eat(";") {
                    self.bump();
                }
                continue;
            }
            self.modifiers()?;
            self.type_declaration(None)?;
        }
        Ok(())
    }

    fn annotation(&mut self) -> PResult<()> {
        self.expect("@", "expected annotation")?;
        self.name()?;
        while self.is_punct(".") && self.ident_at(1).is_some() {
            self.pos += 2;
        }
        if self.is_punct("(") {
            self.skip_balanced("(", ")")?;
        }
        Ok(())
    }

    fn modifiers(&mut self) -> PResult<()> {
        loop {
            if self.is_punct("@") && self.ident_at(1) != Some("interface") {
                self.annotation()?;
            } else if self.ident_at(0).is_some_and(|s| MODIFIERS.contains(&s)) {
                self.bump();
            } else if self.is_ident("non")
                && self.is_punct_at(1, "-")
                && self.ident_at(2) == Some("sealed")
            {
                self.pos += 3;
            } else {
                return Ok(());
            }
        }
    }

    fn at_type_declaration(&self) -> bool {
        match self.ident_at(0) {
            Some("class" | "interface" | "enum") => true,
            Some("record") => {
                self.ident_at(1).is_some() && matches!(self.tok(2), Some(Tok::Punct("(" | "<")))
            }
            _ => self.is_punct("@") && self.ident_at(1) == Some("interface"),
        }
    }

    fn type_declaration(&mut self, container: Option<EntityId>) -> PResult<()> {
        match self.ident_at(0) {
            Some("class") => self.class_like(EntityKind::Class, container),
            Some("interface") => self.class_like(EntityKind::Interface, container),
            Some("enum") => self.enum_declaration(container),
            Some("record") => self.record_declaration(container),
            _ if self.is_punct("@") => {
                // Annotation type: nothing in it is relevant.
                self.pos += 2;
                self.name()?;
                if !self.is_punct("{") {
                    return Err((self.line(), "expected annotation type body"));
                }
                self.skip_balanced("{", "}")
            }
            _ => Err((self.line(), "expected a type declaration")),
        }
    }

    fn type_list(&mut self) -> PResult<Vec<TypeRef>> {
        let mut out = alloc::vec![self.type_ref()?];
        while self.eat(",") {
            out.push(self.type_ref()?);
        }
        Ok(out)
    }

    fn supertypes(&mut self, id: EntityId) -> PResult<()> {
        loop {
            if self.is_ident("extends") {
                self.bump();
                for ty in self.type_list()? {
                    self.facts.extends.push(NameRow {
                        entity: id,
                        name: ty.outer,
                    });
                }
            } else if self.is_ident("implements") {
                self.bump();
                for ty in self.type_list()? {
                    self.facts.implements.push(NameRow {
                        entity: id,
                        name: ty.outer,
                    });
                }
            } else if self.is_ident("permits") {
                self.bump();
                self.type_list()?;
            } else {
                return Ok(());
            }
        }
    }

    fn class_like(&mut self, kind: EntityKind, container: Option<EntityId>) -> PResult<()> {
        self.bump();
        let (name, line) = self.name()?;
        let id = self.entity(kind, name.clone(), container, line);
        if self.is_punct("<") {
            self.skip_balanced("<", ">")?;
        }
        self.supertypes(id)?;
        self.expect("{", "expected class body")?;
        self.members(id, &name)
    }

    fn enum_declaration(&mut self, container: Option<EntityId>) -> PResult<()> {
        self.bump();
        let (name, line) = self.name()?;
        let id = self.entity(EntityKind::Class, name.clone(), container, line);
        self.supertypes(id)?;
        self.expect("{", "expected enum body")?;
        self.attributes.entry(id).or_default();
        loop {
            self.modifiers()?;
            if self.eat(";") {
                break;
            }
            if self.eat("}") {
                return Ok(());
            }
            let (constant, line) = self.name()?;
            self.attributes
                .entry(id)
                .or_default()
                .insert(constant.clone());
            self.entity(EntityKind::Attribute, constant, Some(id), line);
            if self.is_punct("(") {
                self.with_scope(Scope::field(id), |p| {
                    let args = p.arguments()?;
                    p.invocation(&name, args, false);
                    Ok(())
                })?;
            }
            if self.is_punct("{") {
                self.skip_balanced("{", "}")?;
            }
            if !self.eat(",") && !self.is_punct(";") && !self.is_punct("}") {
                return Err((self.line(), "expected `,` or `;` after enum constant"));
            }
        }
        self.members(id, &name)
    }

    fn record_declaration(&mut self, container: Option<EntityId>) -> PResult<()> {
        self.bump();
        let (name, line) = self.name()?;
        let id = self.entity(EntityKind::Class, name.clone(), container, line);
        if self.is_punct("<") {
            self.skip_balanced("<", ">")?;
        }
        self.expect("(", "expected record components")?;
        while !self.eat(")") {
            self.modifiers()?;
            let ty = self.type_ref()?;
            self.eat("...");
            let (component, line) = self.name()?;
            self.attributes
                .entry(id)
                .or_default()
                .insert(component.clone());
            let attr = self.entity(EntityKind::Attribute, component, Some(id), line);
            self.typed(attr, &ty, false);
            if !self.eat(",") && !self.is_punct(")") {
                return Err((self.line(), "expected `,` or `)` in record header"));
            }
        }
        self.supertypes(id)?;
        self.expect("{", "expected record body")?;
        self.members(id, &name)
    }

    /// Class body members up to and including the closing brace.
    fn members(&mut self, class: EntityId, class_name: &str) -> PResult<()> {
        self.attributes.entry(class).or_default();
        loop {
            if self.eof() {
                return Err((self.line(), "unterminated class body"));
            }
            if self.eat("}") {
                return Ok(());
            }
            if self.eat(";") {
                continue;
            }
            if self.is_punct("{") || (self.is_ident("static") && self.is_punct_at(1, "{")) {
                if self.is_ident("static") {
                    self.bump();
                }
                self.with_scope(Scope::field(class), |p| p.block())?;
                continue;
            }
            self.modifiers()?;
            if self.at_type_declaration() {
                self.type_declaration(Some(class))?;
                continue;
            }
            if self.is_punct("<") {
                self.skip_balanced("<", ">")?;
            }
            if self.is_ident(class_name) && (self.is_punct_at(1, "(") || self.is_punct_at(1, "{")) {
                let (name, line) = self.name()?;
                self.method(class, name, line, None)?;
                continue;
            }
            let ty = self.type_ref()?;
            let (name, line) = self.name()?;
            if self.is_punct("(") {
                self.method(class, name, line, Some(ty))?;
            } else {
                self.fields(class, ty, name, line)?;
            }
        }
    }

    fn fields(
        &mut self,
        class: EntityId,
        ty: TypeRef,
        first: String,
        first_line: u32,
    ) -> PResult<()> {
        let (mut name, mut line) = (first, first_line);
        loop {
            while self.is_punct("[") && self.is_punct_at(1, "]") {
                self.pos += 2;
            }
            self.attributes
                .entry(class)
                .or_default()
                .insert(name.clone());
            let id = self.entity(EntityKind::Attribute, name.clone(), Some(class), line);
            self.typed(id, &ty, false);
            if self.eat("=") {
                self.with_scope(Scope::field(class), |p| p.initializer(&name))?;
            }
            if self.eat(";") {
                return Ok(());
            }
            self.expect(",", "expected `;` after field")?;
            (name, line) = self.name()?;
        }
    }

    fn method(
        &mut self,
        class: EntityId,
        name: String,
        line: u32,
        ret: Option<TypeRef>,
    ) -> PResult<()> {
        let id = self.entity(EntityKind::Method, name.clone(), Some(class), line);
        if let Some(ret) = &ret {
            self.typed(id, ret, true);
        }
        let mut params = BTreeSet::new();
        if self.eat("(") {
            while !self.eat(")") {
                self.modifiers()?;
                let ty = self.type_ref()?;
                self.eat("...");
                if self.is_ident("this") {
                    // Receiver parameter.
                    self.bump();
                } else {
                    let (param, line) = self.name()?;
                    while self.is_punct("[") && self.is_punct_at(1, "]") {
                        self.pos += 2;
                    }
                    params.insert(param.clone());
                    let pid = self.entity(EntityKind::Parameter, param, Some(id), line);
                    self.typed(pid, &ty, false);
                }
                if !self.eat(",") && !self.is_punct(")") {
                    return Err((self.line(), "expected `,` or `)` in parameter list"));
                }
            }
        }
        while self.is_punct("[") && self.is_punct_at(1, "]") {
            self.pos += 2;
        }
        if self.is_ident("throws") {
            self.bump();
            self.type_list()?;
        }
        if self.is_ident("default") {
            // Annotation element default value.
            while !self.eof() && !self.is_punct(";") {
                self.bump();
            }
        }
        if self.eat(";") {
            return Ok(());
        }
        let scope = Scope {
            method: Some(id),
            method_name: name,
            class,
            params,
            locals: BTreeSet::new(),
        };
        self.with_scope(scope, |p| p.block())
    }

    fn with_scope<T>(
        &mut self,
        scope: Scope,
        f: impl FnOnce(&mut Self) -> PResult<T>,
    ) -> PResult<T> {
        let saved = self.scope.replace(scope);
        let out = f(self);
        self.scope = saved;
        out
    }

    // ---- types ----

    fn type_ref(&mut self) -> PResult<TypeRef> {
        while self.is_punct("@") {
            self.annotation()?;
        }
        let (mut outer, _) = match self.ident_at(0) {
            Some(s) if PRIMITIVES.contains(&s) || s == "var" || !RESERVED.contains(&s) => {
                let s = s.to_string();
                self.bump();
                (s, ())
            }
            _ => return Err((self.line(), "expected a type")),
        };
        let mut args = Vec::new();
        loop {
            if self.is_punct("<") {
                args = self.type_arguments()?;
            }
            if self.is_punct(".") && self.ident_at(1).is_some_and(|s| !RESERVED.contains(&s)) {
                self.bump();
                outer = self.ident_at(0).unwrap_or_default().to_string();
                self.bump();
                continue;
            }
            break;
        }
        while self.is_punct("[") && self.is_punct_at(1, "]") {
            self.pos += 2;
        }
        Ok(TypeRef { outer, args })
    }

    fn type_arguments(&mut self) -> PResult<Vec<String>> {
        self.expect("<", "expected `<`")?;
        let mut args = Vec::new();
        while !self.eat(">") {
            if self.eof() {
                return Err((self.line(), "unterminated type arguments"));
            }
            while self.is_punct("@") {
                self.annotation()?;
            }
            if self.eat("?") {
                if self.is_ident("extends") || self.is_ident("super") {
                    self.bump();
                    args.push(self.type_ref()?.outer);
                }
            } else {
                args.push(self.type_ref()?.outer);
            }
            while self.eat("&") {
                self.type_ref()?;
            }
            if !self.eat(",") && !self.is_punct(">") {
                return Err((self.line(), "expected `,` or `>` in type arguments"));
            }
        }
        Ok(args)
    }

    /// Speculatively parses a type; restores the position and returns the
    /// position after the type on success.
    fn peek_type(&mut self) -> Option<usize> {
        let start = self.pos;
        let ok = self.type_ref().is_ok();
        let end = self.pos;
        self.pos = start;
        ok.then_some(end)
    }

    // ---- statements ----

    fn block(&mut self) -> PResult<()> {
        self.expect("{", "expected `{`")?;
        loop {
            if self.eof() {
                return Err((self.line(), "unterminated block"));
            }
            if self.eat("}") {
                return Ok(());
            }
            let start = self.pos;
            self.statement()?;
            if self.pos == start {
                self.bump();
            }
        }
    }

    fn paren_expression(&mut self) -> PResult<()> {
        if self.eat("(") {
            self.expression()?;
            self.expect(")", "expected `)`")?;
        }
        Ok(())
    }

    fn statement(&mut self) -> PResult<()> {
        if self.is_punct("{") {
            return self.block();
        }
        if self.eat(";") {
            return Ok(());
        }
        if self.ident_at(0).is_some() && self.is_punct_at(1, ":") {
            self.pos += 2;
            return Ok(());
        }
        match self.ident_at(0) {
            Some("if" | "while" | "switch" | "synchronized") => {
                self.bump();
                return self.paren_expression();
            }
            Some("do" | "else" | "finally") => {
                self.bump();
                return Ok(());
            }
            Some("for") => {
                self.bump();
                return self.for_header();
            }
            Some("try") => {
                self.bump();
                if self.eat("(") {
                    while !self.eat(")") {
                        if self.eof() {
                            return Err((self.line(), "unterminated resource list"));
                        }
                        let start = self.pos;
                        if self.at_local_declaration() {
                            self.local_declaration()?;
                        } else {
                            self.expression()?;
                        }
                        self.eat(";");
                        if self.pos == start {
                            self.bump();
                        }
                    }
                }
                return Ok(());
            }
            Some("catch") => {
                self.bump();
                self.expect("(", "expected `(` after catch")?;
                self.modifiers()?;
                let ty = self.type_ref()?;
                while self.eat("|") {
                    self.type_ref()?;
                }
                let (name, line) = self.name()?;
                self.declare_local(name, line, Some(&ty));
                return self.expect(")", "expected `)` after catch parameter");
            }
            Some("return" | "throw") => {
                self.bump();
                if !self.is_punct(";") {
                    self.expression()?;
                }
                self.eat(";");
                return Ok(());
            }
            Some("yield") if !matches!(self.tok(1), Some(Tok::Punct("=" | "." | "("))) => {
                self.bump();
                self.expression()?;
                self.eat(";");
                return Ok(());
            }
            Some("break" | "continue") => {
                while !self.eof() && !self.eat(";") {
                    self.bump();
                }
                return Ok(());
            }
            Some("case") => {
                self.bump();
                while !self.eof() && !self.eat(":") && !self.eat("->") {
                    let start = self.pos;
                    self.expression()?;
                    if self.pos == start {
                        self.bump();
                    }
                }
                return Ok(());
            }
            Some("default") if self.is_punct_at(1, ":") || self.is_punct_at(1, "->") => {
                self.pos += 2;
                return Ok(());
            }
            Some("assert") => {
                self.bump();
                self.expression()?;
                if self.eat(":") {
                    self.expression()?;
                }
                self.eat(";");
                return Ok(());
            }
            _ => {}
        }
        if self.at_local_class() {
            while !self.eof() && !self.is_punct("{") {
                self.bump();
            }
            return self.skip_balanced("{", "}");
        }
        if self.at_local_declaration() {
            self.local_declaration()?;
            self.eat(";");
            return Ok(());
        }
        self.expression()?;
        self.eat(";");
        Ok(())
    }

    fn at_local_class(&self) -> bool {
        let mut k = 0;
        while self
            .ident_at(k)
            .is_some_and(|s| matches!(s, "final" | "abstract" | "static"))
        {
            k += 1;
        }
        match self.ident_at(k) {
            Some("class" | "interface" | "enum") => self.ident_at(k + 1).is_some(),
            Some("record") => self.ident_at(k + 1).is_some() && self.is_punct_at(k + 2, "("),
            _ => false,
        }
    }

    fn for_header(&mut self) -> PResult<()> {
        self.expect("(", "expected `(` after for")?;
        if self.at_local_declaration() {
            self.local_declaration()?;
        }
        while !self.eat(")") {
            if self.eof() {
                return Err((self.line(), "unterminated for header"));
            }
            if self.eat(";") || self.eat(":") || self.eat(",") {
                continue;
            }
            let start = self.pos;
            self.expression()?;
            if self.pos == start {
                self.bump();
            }
        }
        Ok(())
    }

    fn at_local_declaration(&mut self) -> bool {
        let start = self.pos;
        let found = (|| {
            while self.is_ident("final") || (self.is_punct("@") && self.ident_at(1).is_some()) {
                if self.is_ident("final") {
                    self.bump();
                } else if self.annotation().is_err() {
                    return false;
                }
            }
            let Some(end) = self.peek_type() else {
                return false;
            };
            self.pos = end;
            let named = self.ident_at(0).is_some_and(|s| !RESERVED.contains(&s));
            named
                && matches!(
                    self.tok(1),
                    Some(Tok::Punct("=" | ";" | "," | ":" | "[" | ")"))
                )
        })();
        self.pos = start;
        found
    }

    fn local_declaration(&mut self) -> PResult<()> {
        self.modifiers()?;
        let ty = self.type_ref()?;
        loop {
            let (name, line) = self.name()?;
            while self.is_punct("[") && self.is_punct_at(1, "]") {
                self.pos += 2;
            }
            let declared_type = (ty.outer != "var").then_some(&ty);
            if self.eat("=") {
                self.initializer(&name)?;
            }
            self.declare_local(name, line, declared_type);
            if !self.eat(",") {
                return Ok(());
            }
        }
    }

    /// Right-hand side of a declaration with initializer.
    fn initializer(&mut self, lhs: &str) -> PResult<()> {
        if self.is_punct("{") {
            return self.skip_balanced("{", "}");
        }
        let rhs = self.expression()?;
        self.assignment(lhs, &rhs);
        Ok(())
    }

    // ---- expressions ----

    fn expression(&mut self) -> PResult<Operand> {
        if self.at_lambda() {
            self.lambda()?;
            return Ok(Operand::Other);
        }
        let lhs = self.ternary()?;
        if matches!(self.tok(0), Some(Tok::Punct(p)) if ASSIGN_OPS.contains(p)) {
            self.bump();
            let rhs = self.expression()?;
            if let Operand::Name(n) | Operand::Field(n) = &lhs {
                let n = n.clone();
                self.assignment(&n, &rhs);
            }
            return Ok(Operand::Other);
        }
        Ok(lhs)
    }

    fn at_lambda(&self) -> bool {
        if self.ident_at(0).is_some() && self.is_punct_at(1, "->") {
            return true;
        }
        if !self.is_punct("(") {
            return false;
        }
        let mut depth = 0usize;
        for (k, t) in self.toks[self.pos..].iter().enumerate() {
            match t.tok {
                Tok::Punct("(") => depth += 1,
                Tok::Punct(")") => {
                    depth -= 1;
                    if depth == 0 {
                        return self.is_punct_at(k + 1, "->");
                    }
                }
                Tok::Punct(";" | "{" | "}") => return false,
                _ => {}
            }
        }
        false
    }

    fn lambda(&mut self) -> PResult<()> {
        if self.is_punct("(") {
            self.skip_balanced("(", ")")?;
        } else {
            self.bump();
        }
        self.expect("->", "expected `->`")?;
        self.mute += 1;
        let out = if self.is_punct("{") {
            self.block()
        } else {
            self.expression().map(|_| ())
        };
        self.mute -= 1;
        out
    }

    fn ternary(&mut self) -> PResult<Operand> {
        let cond = self.binary()?;
        if self.eat("?") {
            self.expression()?;
            self.expect(":", "expected `:` in conditional")?;
            self.expression()?;
            return Ok(Operand::Other);
        }
        Ok(cond)
    }

    fn binary(&mut self) -> PResult<Operand> {
        let first = self.unary()?;
        let mut combined = false;
        loop {
            if self.is_ident("instanceof") {
                self.bump();
                self.modifiers()?;
                let ty = self.type_ref()?;
                if let Some(name) = self
                    .ident_at(0)
                    .filter(|s| !RESERVED.contains(s))
                    .map(ToString::to_string)
                {
                    let line = self.line();
                    self.bump();
                    self.declare_local(name, line, Some(&ty));
                }
                combined = true;
                continue;
            }
            if matches!(self.tok(0), Some(Tok::Punct(p)) if BINARY_OPS.contains(p)) {
                self.bump();
                self.unary()?;
                combined = true;
                continue;
            }
            break;
        }
        Ok(if combined { Operand::Other } else { first })
    }

    fn unary(&mut self) -> PResult<Operand> {
        if matches!(
            self.tok(0),
            Some(Tok::Punct("+" | "-" | "!" | "~" | "++" | "--"))
        ) {
            self.bump();
            self.unary()?;
            return Ok(Operand::Other);
        }
        if self.is_punct("(") {
            if let Some(after) = self.cast_end() {
                self.pos = after;
                return self.unary();
            }
            if self.at_lambda() {
                self.lambda()?;
                return Ok(Operand::Other);
            }
            self.bump();
            let inner = self.expression()?;
            self.expect(")", "expected `)`")?;
            return self.postfix(inner);
        }
        let primary = self.primary()?;
        self.postfix(primary)
    }

    /// Position just past `(Type)` when the parenthesis is a cast.
    fn cast_end(&mut self) -> Option<usize> {
        let start = self.pos;
        self.pos += 1;
        let primitive = self.ident_at(0).is_some_and(|s| PRIMITIVES.contains(&s));
        let result = (|| {
            let end = self.peek_type()?;
            self.pos = end;
            while self.eat("&") {
                self.pos = self.peek_type()?;
            }
            if !self.eat(")") {
                return None;
            }
            let operand_start = match self.tok(0) {
                Some(Tok::Ident(s)) => s != "instanceof",
                Some(Tok::Literal) => true,
                Some(Tok::Punct(p)) => {
                    matches!(*p, "(" | "!" | "~") || (primitive && matches!(*p, "+" | "-"))
                }
                None => false,
            };
            operand_start.then_some(self.pos)
        })();
        self.pos = start;
        result
    }

    fn primary(&mut self) -> PResult<Operand> {
        match self.tok(0).cloned() {
            Some(Tok::Literal) => {
                self.bump();
                Ok(Operand::Other)
            }
            Some(Tok::Ident(word)) => match word.as_str() {
                "this" | "super" => {
                    self.bump();
                    if self.is_punct("(") {
                        let args = self.arguments()?;
                        self.invocation(&word, args, false);
                        return Ok(Operand::Other);
                    }
                    Ok(Operand::This)
                }
                "new" => self.creation(),
                "switch" => {
                    self.bump();
                    self.paren_expression()?;
                    if self.is_punct("{") {
                        self.mute += 1;
                        let out = self.skip_balanced("{", "}");
                        self.mute -= 1;
                        out?;
                    }
                    Ok(Operand::Other)
                }
                "true" | "false" | "null" => {
                    self.bump();
                    Ok(Operand::Other)
                }
                w if PRIMITIVES.contains(&w) => {
                    self.bump();
                    Ok(Operand::Other)
                }
                w if RESERVED.contains(&w) => Ok(Operand::Other),
                _ => {
                    self.bump();
                    if self.is_punct("(") {
                        let args = self.arguments()?;
                        self.invocation(&word, args, true);
                        return Ok(Operand::Call(word));
                    }
                    self.usage(&word, false);
                    Ok(Operand::Name(word))
                }
            },
            _ => Ok(Operand::Other),
        }
    }

    fn postfix(&mut self, mut current: Operand) -> PResult<Operand> {
        loop {
            if self.eat(".") {
                if self.is_punct("<") {
                    self.skip_balanced("<", ">")?;
                }
                match self.ident_at(0).map(ToString::to_string) {
                    Some(w) if w == "new" => {
                        self.creation()?;
                        current = Operand::Other;
                    }
                    Some(w) if w == "class" => {
                        self.bump();
                        current = Operand::Other;
                    }
                    Some(w) if w == "this" => {
                        self.bump();
                        current = Operand::This;
                    }
                    Some(w) => {
                        self.bump();
                        if self.is_punct("(") {
                            let args = self.arguments()?;
                            self.invocation(&w, args, true);
                            current = Operand::Call(w);
                        } else {
                            if current == Operand::This {
                                self.usage(&w, true);
                            }
                            current = Operand::Field(w);
                        }
                    }
                    None => return Ok(Operand::Other),
                }
            } else if self.eat("[") {
                if !self.is_punct("]") {
                    self.expression()?;
                }
                self.expect("]", "expected `]`")?;
                current = Operand::Other;
            } else if self.is_punct("++") || self.is_punct("--") || self.eat("::") {
                // Postfix operator, or the name after a method reference.
                self.bump();
                current = Operand::Other;
            } else {
                return Ok(current);
            }
        }
    }

    fn arguments(&mut self) -> PResult<Vec<Option<Argument>>> {
        self.expect("(", "expected `(`")?;
        let mut args = Vec::new();
        if self.eat(")") {
            return Ok(args);
        }
        loop {
            let start = self.pos;
            let op = self.expression()?;
            if self.pos == start {
                return Err((self.line(), "expected an argument"));
            }
            args.push(self.argument(op));
            if self.eat(")") {
                return Ok(args);
            }
            self.expect(",", "expected `,` or `)` in arguments")?;
        }
    }

    fn creation(&mut self) -> PResult<Operand> {
        self.bump();
        let ty = self.type_ref_allowing_diamond()?;
        if self.is_punct("[") {
            while self.eat("[") {
                if !self.is_punct("]") {
                    self.expression()?;
                }
                self.expect("]", "expected `]`")?;
            }
            if self.is_punct("{") {
                self.skip_balanced("{", "}")?;
            }
            return Ok(Operand::Other);
        }
        let args = self.arguments()?;
        self.invocation(&ty.outer, args, false);
        if self.is_punct("{") {
            self.mute += 1;
            let out = self.skip_balanced("{", "}");
            self.mute -= 1;
            out?;
        }
        Ok(Operand::Other)
    }

    fn type_ref_allowing_diamond(&mut self) -> PResult<TypeRef> {
        while self.is_punct("@") {
            self.annotation()?;
        }
        let Some(first) = self.ident_at(0).map(ToString::to_string) else {
            return Err((self.line(), "expected a type after `new`"));
        };
        self.bump();
        let mut ty = TypeRef {
            outer: first,
            args: Vec::new(),
        };
        loop {
            if self.is_punct("<") && self.is_punct_at(1, ">") {
                self.pos += 2;
            } else if self.is_punct("<") {
                ty.args = self.type_arguments()?;
            }
            if self.is_punct(".") && self.ident_at(1).is_some() {
                self.bump();
                ty.outer = self.ident_at(0).unwrap_or_default().to_string();
                self.bump();
                continue;
            }
            return Ok(ty);
        }
    }
}

impl Scope {
    fn field(class: EntityId) -> Scope {
        Scope {
            method: None,
            method_name: String::new(),
            class,
            params: BTreeSet::new(),
            locals: BTreeSet::new(),
        }
    }
}
