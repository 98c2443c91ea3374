//! Line-oriented group and product description files.
//!
//! ```text
//! # group file
//! kind table
//! elements e a b
//! row e: e a b
//! row a: a b e
//! row b: b e a
//! ```
//!
//! ```text
//! # product file
//! n 665
//! mode strict
//! group v dihedral 2
//! factor g1 cyclic 1995 gen x
//! factor g2 product v Z3
//! factor g3 file quaternion.grp
//! ```
//!
//! Group kinds: `cyclic <r> [gen <name>]`, `dihedral <r>`, `sym <k>`,
//! `quaternion`, `product <a> <b>` and `table` (followed by one `elements`
//! line and one `row x: …` line per element). The leading `kind` keyword is
//! optional after `factor`/`group`. Product operands name an earlier
//! `group` or `factor`, or a shorthand `Z<r>`, `D<r>`, `S<k>`, `Q8`, `V4`.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::word::{exponent_in_range, FactorFamily, Mode, MIN_STRICT_EXPONENT};

#[derive(Debug, Clone)]
pub struct ProductSpec {
    pub n: u64,
    pub mode: Mode,
    pub factors: Vec<(String, FiniteGroup)>,
}

impl ProductSpec {
    pub fn family(&self) -> Result<Arc<FactorFamily>> {
        FactorFamily::new(self.factors.clone(), self.n, self.mode)
    }
}

#[derive(Clone, Copy)]
struct Token<'a> {
    column: usize,
    text: &'a str,
}

fn tokenize(line: &str) -> Vec<Token<'_>> {
    let content = line.split('#').next().unwrap_or("");
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in content.char_indices() {
        match (ch.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                out.push(Token {
                    column: content[..s].chars().count() + 1,
                    text: &content[s..i],
                });
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push(Token {
            column: content[..s].chars().count() + 1,
            text: &content[s..],
        });
    }
    out
}

struct PendingTable {
    owner: String,
    line: usize,
    column: usize,
    elements: Option<Vec<String>>,
    rows: Vec<Option<Vec<usize>>>,
}

impl PendingTable {
    fn finish(self) -> Result<FiniteGroup> {
        let names = self.elements.ok_or_else(|| {
            Error::parse(self.line, self.column, "table without an `elements` line")
        })?;
        let mut table = Vec::with_capacity(names.len());
        for (name, row) in names.iter().zip(self.rows) {
            table.push(row.ok_or_else(|| {
                Error::parse(
                    self.line,
                    self.column,
                    format!("table has no row for `{name}`"),
                )
            })?);
        }
        FiniteGroup::from_table(&self.owner, names, table)
    }
}

struct Parser<'a> {
    base_dir: Option<&'a Path>,
    named: Vec<(String, FiniteGroup)>,
    pending: Option<PendingTable>,
}

/// Result of parsing a kind clause: a finished group or an open table.
enum Kind {
    Group(FiniteGroup),
    Table,
}

impl<'a> Parser<'a> {
    fn new(base_dir: Option<&'a Path>) -> Self {
        Parser {
            base_dir,
            named: Vec::new(),
            pending: None,
        }
    }

    fn lookup(&self, line: usize, tok: Token<'_>) -> Result<FiniteGroup> {
        if let Some((_, g)) = self.named.iter().rev().find(|(n, _)| n == tok.text) {
            return Ok(g.clone());
        }
        let shorthand = |prefix: &str| {
            tok.text
                .strip_prefix(prefix)
                .and_then(|r| r.parse::<usize>().ok())
        };
        let built = if tok.text == "Q8" {
            Some(FiniteGroup::quaternion())
        } else if tok.text == "V4" {
            Some(FiniteGroup::dihedral(2).map(|g| g.with_name("V4")))
        } else if let Some(r) = shorthand("Z") {
            Some(FiniteGroup::cyclic(r))
        } else if let Some(r) = shorthand("D") {
            Some(FiniteGroup::dihedral(r))
        } else {
            shorthand("S").map(FiniteGroup::symmetric)
        };
        match built {
            Some(g) => g.map_err(|e| Error::parse(line, tok.column, e.to_string())),
            None => Err(Error::parse(
                line,
                tok.column,
                format!("unknown group `{}`", tok.text),
            )),
        }
    }

    fn number(line: usize, tok: Token<'_>, what: &str) -> Result<usize> {
        tok.text.parse().map_err(|_| {
            Error::parse(
                line,
                tok.column,
                format!("expected {what}, found `{}`", tok.text),
            )
        })
    }

    /// Parses `[kind] <kind> args…`; `at` is the column of the whole clause
    /// for error reporting when it is empty.
    fn kind(&self, line: usize, at: usize, tokens: &[Token<'_>]) -> Result<Kind> {
        let tokens = match tokens.first() {
            Some(t) if t.text == "kind" => &tokens[1..],
            _ => tokens,
        };
        let Some(&head) = tokens.first() else {
            return Err(Error::parse(line, at, "missing group kind"));
        };
        let args = &tokens[1..];
        let arity = |n: usize| -> Result<()> {
            match args.get(n) {
                None if args.len() == n => Ok(()),
                None => Err(Error::parse(
                    line,
                    head.column,
                    format!("`{}` needs {n} argument(s)", head.text),
                )),
                Some(t) => Err(Error::parse(
                    line,
                    t.column,
                    format!("unexpected `{}`", t.text),
                )),
            }
        };
        let wrap =
            |r: Result<FiniteGroup>| r.map_err(|e| Error::parse(line, head.column, e.to_string()));
        let group = match head.text {
            "cyclic" => {
                let r = match args.first() {
                    Some(&t) => Self::number(line, t, "an order")?,
                    None => return Err(Error::parse(line, head.column, "`cyclic` needs an order")),
                };
                match args.get(1) {
                    None => wrap(FiniteGroup::cyclic(r))?,
                    Some(t) if t.text == "gen" => {
                        arity(3)?;
                        wrap(FiniteGroup::cyclic_named(r, args[2].text))?
                    }
                    Some(t) => {
                        return Err(Error::parse(
                            line,
                            t.column,
                            format!("unexpected `{}`", t.text),
                        ))
                    }
                }
            }
            "dihedral" => {
                let r = args
                    .first()
                    .map(|&t| Self::number(line, t, "an order"))
                    .transpose()?;
                arity(1)?;
                wrap(FiniteGroup::dihedral(r.unwrap_or(0)))?
            }
            "sym" => {
                let k = args
                    .first()
                    .map(|&t| Self::number(line, t, "a degree"))
                    .transpose()?;
                arity(1)?;
                wrap(FiniteGroup::symmetric(k.unwrap_or(0)))?
            }
            "quaternion" => {
                arity(0)?;
                wrap(FiniteGroup::quaternion())?
            }
            "product" => {
                arity(2)?;
                let a = self.lookup(line, args[0])?;
                let b = self.lookup(line, args[1])?;
                wrap(FiniteGroup::direct_product(&a, &b))?
            }
            "table" => {
                arity(0)?;
                return Ok(Kind::Table);
            }
            "file" => {
                arity(1)?;
                let path = match self.base_dir {
                    Some(dir) => dir.join(args[0].text),
                    None => PathBuf::from(args[0].text),
                };
                load_group(&path)?
            }
            other => {
                return Err(Error::parse(
                    line,
                    head.column,
                    format!("unknown group kind `{other}`"),
                ))
            }
        };
        Ok(Kind::Group(group))
    }

    /// Handles `elements` and `row` lines; false if the line is neither.
    fn table_line(&mut self, line: usize, tokens: &[Token<'_>]) -> Result<bool> {
        let head = tokens[0];
        if head.text != "elements" && head.text != "row" {
            return Ok(false);
        }
        let Some(table) = self.pending.as_mut() else {
            return Err(Error::parse(
                line,
                head.column,
                format!("`{}` outside a table", head.text),
            ));
        };
        if head.text == "elements" {
            if table.elements.is_some() {
                return Err(Error::parse(line, head.column, "duplicate `elements` line"));
            }
            let names: Vec<String> = tokens[1..].iter().map(|t| t.text.to_string()).collect();
            if names.is_empty() {
                return Err(Error::parse(line, head.column, "empty `elements` line"));
            }
            for (i, t) in tokens[1..].iter().enumerate() {
                if names[..i].contains(&names[i]) {
                    return Err(Error::parse(
                        line,
                        t.column,
                        format!("duplicate element `{}`", t.text),
                    ));
                }
            }
            table.rows = vec![None; names.len()];
            table.elements = Some(names);
            return Ok(true);
        }
        let Some(names) = table.elements.as_ref() else {
            return Err(Error::parse(line, head.column, "`row` before `elements`"));
        };
        let Some(label) = tokens.get(1) else {
            return Err(Error::parse(line, head.column, "`row` needs a label"));
        };
        let Some(label_name) = label.text.strip_suffix(':') else {
            return Err(Error::parse(
                line,
                label.column,
                "row label must end with `:`",
            ));
        };
        let index_of = |t: &Token<'_>, name: &str| {
            names
                .iter()
                .position(|n| n == name)
                .ok_or_else(|| Error::parse(line, t.column, format!("unknown element `{name}`")))
        };
        let row_index = index_of(label, label_name)?;
        if table.rows[row_index].is_some() {
            return Err(Error::parse(
                line,
                label.column,
                format!("duplicate row `{label_name}`"),
            ));
        }
        let entries = &tokens[2..];
        if entries.len() != names.len() {
            let column = entries.get(names.len()).map_or(head.column, |t| t.column);
            return Err(Error::parse(
                line,
                column,
                format!(
                    "row has {} entries, expected {}",
                    entries.len(),
                    names.len()
                ),
            ));
        }
        let row = entries
            .iter()
            .map(|t| index_of(t, t.text))
            .collect::<Result<Vec<_>>>()?;
        table.rows[row_index] = Some(row);
        Ok(true)
    }

    fn close_table(&mut self) -> Result<Option<(String, FiniteGroup)>> {
        match self.pending.take() {
            Some(t) => {
                let owner = t.owner.clone();
                let g = t.finish()?;
                Ok(Some((owner, g)))
            }
            None => Ok(None),
        }
    }

    fn open(&mut self, owner: &str, line: usize, column: usize) {
        self.pending = Some(PendingTable {
            owner: owner.to_string(),
            line,
            column,
            elements: None,
            rows: Vec::new(),
        });
    }
}

/// Parses a group description; `name` labels the result.
pub fn parse_group(text: &str, name: &str, base_dir: Option<&Path>) -> Result<FiniteGroup> {
    let mut parser = Parser::new(base_dir);
    let mut group: Option<FiniteGroup> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let tokens = tokenize(raw);
        if tokens.is_empty() || parser.table_line(line, &tokens)? {
            continue;
        }
        let head = tokens[0];
        if head.text != "kind" {
            return Err(Error::parse(
                line,
                head.column,
                format!("unexpected `{}`", head.text),
            ));
        }
        if group.is_some() || parser.pending.is_some() {
            return Err(Error::parse(
                line,
                head.column,
                "group file declares more than one kind",
            ));
        }
        match parser.kind(line, head.column, &tokens)? {
            Kind::Group(g) => group = Some(g),
            Kind::Table => parser.open(name, line, head.column),
        }
    }
    if let Some((_, g)) = parser.close_table()? {
        group = Some(g);
    }
    let group = group.ok_or_else(|| Error::parse(1, 1, "no `kind` line"))?;
    Ok(group.with_name(name))
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn load_group(path: &Path) -> Result<FiniteGroup> {
    let text = read(path)?;
    let name = path.file_stem().and_then(|s| s.to_str()).unwrap_or("G");
    parse_group(&text, name, path.parent())
}

/// Parses a product description. `mode_override` replaces the file's `mode`
/// line (used by `--lenient`).
pub fn parse_product(
    text: &str,
    base_dir: Option<&Path>,
    mode_override: Option<Mode>,
) -> Result<ProductSpec> {
    let mut parser = Parser::new(base_dir);
    let mut n: Option<(u64, usize, usize)> = None;
    let mut mode: Option<Mode> = None;
    let mut factors: Vec<(String, FiniteGroup)> = Vec::new();
    let finish_table =
        |parser: &mut Parser<'_>, factors: &mut Vec<(String, FiniteGroup)>| -> Result<()> {
            if let Some((owner, g)) = parser.close_table()? {
                if let Some(slot) = factors.iter_mut().find(|(name, _)| *name == owner) {
                    slot.1 = g.clone();
                }
                parser.named.push((owner, g));
            }
            Ok(())
        };
    // factors whose table is still open hold a placeholder until closed
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let tokens = tokenize(raw);
        if tokens.is_empty() || parser.table_line(line, &tokens)? {
            continue;
        }
        finish_table(&mut parser, &mut factors)?;
        let head = tokens[0];
        match head.text {
            "n" => {
                if n.is_some() {
                    return Err(Error::parse(line, head.column, "duplicate `n` line"));
                }
                let Some(&t) = tokens.get(1) else {
                    return Err(Error::parse(line, head.column, "`n` needs a value"));
                };
                let value: u64 = t.text.parse().map_err(|_| {
                    Error::parse(
                        line,
                        t.column,
                        format!("expected a positive integer, found `{}`", t.text),
                    )
                })?;
                if value == 0 {
                    return Err(Error::parse(line, t.column, "n must be at least 1"));
                }
                if let Some(extra) = tokens.get(2) {
                    return Err(Error::parse(
                        line,
                        extra.column,
                        format!("unexpected `{}`", extra.text),
                    ));
                }
                n = Some((value, line, t.column));
            }
            "mode" => {
                let m = match tokens.get(1).map(|t| t.text) {
                    Some("strict") => Mode::Strict,
                    Some("lenient") => Mode::Lenient,
                    Some(other) => {
                        return Err(Error::parse(
                            line,
                            tokens[1].column,
                            format!("unknown mode `{other}`"),
                        ))
                    }
                    None => {
                        return Err(Error::parse(
                            line,
                            head.column,
                            "`mode` needs strict or lenient",
                        ))
                    }
                };
                if let Some(extra) = tokens.get(2) {
                    return Err(Error::parse(
                        line,
                        extra.column,
                        format!("unexpected `{}`", extra.text),
                    ));
                }
                mode = Some(m);
            }
            "factor" | "group" => {
                let Some(&name) = tokens.get(1) else {
                    return Err(Error::parse(
                        line,
                        head.column,
                        format!("`{}` needs a name", head.text),
                    ));
                };
                if parser.named.iter().any(|(n, _)| n == name.text)
                    || factors.iter().any(|(n, _)| n == name.text)
                {
                    return Err(Error::parse(
                        line,
                        name.column,
                        format!("duplicate name `{}`", name.text),
                    ));
                }
                let kind =
                    parser.kind(line, name.column + name.text.chars().count(), &tokens[2..])?;
                let group = match kind {
                    Kind::Group(g) => {
                        let g = g.with_name(name.text);
                        parser.named.push((name.text.to_string(), g.clone()));
                        g
                    }
                    Kind::Table => {
                        parser.open(name.text, line, tokens[2].column);
                        FiniteGroup::trivial()
                    }
                };
                if head.text == "factor" {
                    factors.push((name.text.to_string(), group));
                }
            }
            other => {
                return Err(Error::parse(
                    line,
                    head.column,
                    format!("unknown directive `{other}`"),
                ))
            }
        }
    }
    finish_table(&mut parser, &mut factors)?;
    let last_line = text.lines().count().max(1);
    let (n, n_line, n_column) = n.ok_or_else(|| Error::parse(last_line, 1, "missing `n` line"))?;
    if factors.len() < 2 {
        return Err(Error::parse(
            last_line,
            1,
            format!("need at least 2 factors, found {}", factors.len()),
        ));
    }
    let mode = mode_override.or(mode).unwrap_or(Mode::Strict);
    if mode == Mode::Strict && !exponent_in_range(n) {
        return Err(Error::StrictViolation(format!(
            "line {n_line}, column {n_column}: n = {n}; strict mode requires odd n ≥ {MIN_STRICT_EXPONENT}"
        )));
    }
    let spec = ProductSpec { n, mode, factors };
    spec.family()?;
    Ok(spec)
}

pub fn load_product(path: &Path, mode_override: Option<Mode>) -> Result<ProductSpec> {
    let text = read(path)?;
    parse_product(&text, path.parent(), mode_override)
}
