//! A small CIF reader: the first data block, split into category tables.
//!
//! Handles bare, single- and double-quoted values, semicolon text fields,
//! comments and `loop_` tables. Unquoted `.` and `?` read as missing.

use std::collections::HashMap;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Data(String),
    Loop,
    Tag(String),
    Value(Option<String>),
    Other,
}

/// One category: item names and rows of values, with the source line of
/// each row's first value.
#[derive(Debug, Clone, Default)]
pub struct Table {
    items: Vec<String>,
    rows: Vec<Vec<Option<String>>>,
    lines: Vec<usize>,
}

impl Table {
    pub fn column(&self, item: &str) -> Option<usize> {
        self.items.iter().position(|i| i.eq_ignore_ascii_case(item))
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn get(&self, row: usize, column: usize) -> Option<&str> {
        self.rows[row][column].as_deref()
    }

    pub fn line(&self, row: usize) -> usize {
        self.lines[row]
    }
}

/// The first data block of a CIF file.
#[derive(Debug, Clone, Default)]
pub struct Block {
    pub name: String,
    tables: HashMap<String, Table>,
}

impl Block {
    /// Table for `category`, given without the leading underscore.
    pub fn table(&self, category: &str) -> Option<&Table> {
        self.tables.get(&category.to_ascii_lowercase())
    }

    /// First value of a single-valued item such as `entry.id`.
    pub fn item(&self, category: &str, item: &str) -> Option<&str> {
        let table = self.table(category)?;
        let column = table.column(item)?;
        (!table.is_empty()).then(|| table.get(0, column)).flatten()
    }
}

fn split_tag(tag: &str, line: usize) -> Result<(String, String)> {
    let body = tag.trim_start_matches('_').to_ascii_lowercase();
    match body.split_once('.') {
        Some((cat, item)) if !cat.is_empty() && !item.is_empty() => Ok((cat.to_string(), item.to_string())),
        _ => Err(Error::Parse { line, message: format!("tag `{tag}` has no category") }),
    }
}

fn tokenize(text: &str) -> Result<Vec<(Token, usize)>> {
    let mut tokens = Vec::new();
    let mut field: Option<(String, usize)> = None;
    for (index, line) in text.lines().enumerate() {
        let lineno = index + 1;
        if let Some((buf, start)) = field.as_mut() {
            if line.starts_with(';') {
                let value = std::mem::take(buf);
                tokens.push((Token::Value(Some(value)), *start));
                field = None;
            } else {
                if !buf.is_empty() {
                    buf.push('\n');
                }
                buf.push_str(line);
            }
            continue;
        }
        if let Some(rest) = line.strip_prefix(';') {
            field = Some((rest.to_string(), lineno));
            continue;
        }
        let bytes = line.as_bytes();
        let mut i = 0;
        while i < bytes.len() {
            let b = bytes[i];
            if b.is_ascii_whitespace() {
                i += 1;
                continue;
            }
            if b == b'#' {
                break;
            }
            if b == b'\'' || b == b'"' {
                let start = i + 1;
                let mut j = start;
                loop {
                    if j >= bytes.len() {
                        return Err(Error::Parse { line: lineno, message: "unterminated quoted value".into() });
                    }
                    if bytes[j] == b && (j + 1 == bytes.len() || bytes[j + 1].is_ascii_whitespace()) {
                        break;
                    }
                    j += 1;
                }
                tokens.push((Token::Value(Some(line[start..j].to_string())), lineno));
                i = j + 1;
                continue;
            }
            let start = i;
            while i < bytes.len() && !bytes[i].is_ascii_whitespace() {
                i += 1;
            }
            let word = &line[start..i];
            let lower = word.to_ascii_lowercase();
            let token = if word.starts_with('_') {
                Token::Tag(word.to_string())
            } else if lower == "loop_" {
                Token::Loop
            } else if lower.starts_with("data_") {
                Token::Data(word[5..].to_string())
            } else if lower.starts_with("save_") || lower == "stop_" || lower == "global_" {
                Token::Other
            } else if word == "." || word == "?" {
                Token::Value(None)
            } else {
                Token::Value(Some(word.to_string()))
            };
            tokens.push((token, lineno));
        }
    }
    if let Some((_, start)) = field {
        return Err(Error::Parse { line: start, message: "unterminated text field".into() });
    }
    Ok(tokens)
}

/// Parses the first data block of `text`.
pub fn parse_block(text: &str) -> Result<Block> {
    let tokens = tokenize(text)?;
    let mut block = Block::default();
    let mut seen_data = false;
    let mut pos = 0;
    while pos < tokens.len() {
        let (token, line) = &tokens[pos];
        match token {
            Token::Data(name) => {
                if seen_data {
                    break;
                }
                seen_data = true;
                block.name = name.clone();
                pos += 1;
            }
            Token::Tag(tag) => {
                let (cat, item) = split_tag(tag, *line)?;
                let value = match tokens.get(pos + 1) {
                    Some((Token::Value(v), _)) => v.clone(),
                    _ => return Err(Error::Parse { line: *line, message: format!("tag `{tag}` has no value") }),
                };
                let table = block.tables.entry(cat).or_default();
                if table.rows.is_empty() {
                    table.rows.push(Vec::new());
                    table.lines.push(*line);
                }
                table.items.push(item);
                table.rows[0].push(value);
                pos += 2;
            }
            Token::Loop => {
                pos += 1;
                let mut category: Option<String> = None;
                let mut items = Vec::new();
                while let Some((Token::Tag(tag), tline)) = tokens.get(pos) {
                    let (cat, item) = split_tag(tag, *tline)?;
                    match &category {
                        None => category = Some(cat),
                        Some(c) if *c != cat => {
                            return Err(Error::Parse {
                                line: *tline,
                                message: format!("loop mixes categories `{c}` and `{cat}`"),
                            })
                        }
                        _ => {}
                    }
                    items.push(item);
                    pos += 1;
                }
                let category = category.ok_or(Error::Parse { line: *line, message: "loop_ without tags".into() })?;
                let mut table = Table { items, rows: Vec::new(), lines: Vec::new() };
                let width = table.items.len();
                let mut row = Vec::with_capacity(width);
                let mut row_line = 0;
                while let Some((Token::Value(v), vline)) = tokens.get(pos) {
                    if row.is_empty() {
                        row_line = *vline;
                    }
                    row.push(v.clone());
                    if row.len() == width {
                        table.rows.push(std::mem::replace(&mut row, Vec::with_capacity(width)));
                        table.lines.push(row_line);
                    }
                    pos += 1;
                }
                if !row.is_empty() {
                    return Err(Error::Parse {
                        line: row_line,
                        message: format!("loop `{category}` row has {} of {width} values", row.len()),
                    });
                }
                block.tables.insert(category, table);
            }
            Token::Value(_) => {
                return Err(Error::Parse { line: *line, message: "value without a tag".into() });
            }
            Token::Other => pos += 1,
        }
    }
    Ok(block)
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "data_1ABC
# comment
_entry.id   1ABC
_struct.title
;Multi-line
title
;
loop_
_atom_site.id
_atom_site.label_atom_id
_atom_site.label_comp_id
1 N    'ALA'
2 \"C1'\" ?
3 CA . # trailing
data_SECOND
_entry.id OTHER
";

    #[test]
    fn reads_items_loops_and_fields() {
        let block = parse_block(SAMPLE).unwrap();
        assert_eq!(block.name, "1ABC");
        assert_eq!(block.item("entry", "id"), Some("1ABC"));
        assert_eq!(block.item("struct", "title"), Some("Multi-line\ntitle"));
        let atoms = block.table("atom_site").unwrap();
        assert_eq!(atoms.len(), 3);
        let comp = atoms.column("label_comp_id").unwrap();
        let name = atoms.column("LABEL_ATOM_ID").unwrap();
        assert_eq!(atoms.get(0, comp), Some("ALA"));
        assert_eq!(atoms.get(1, name), Some("C1'"));
        assert_eq!(atoms.get(1, comp), None);
        assert_eq!(atoms.get(2, comp), None);
        assert_eq!(atoms.line(2), 14);
    }

    #[test]
    fn quote_inside_bare_word_is_literal() {
        let block = parse_block("data_x\n_a.b O5'\n_a.c 'it's'\n").unwrap();
        assert_eq!(block.item("a", "b"), Some("O5'"));
        assert_eq!(block.item("a", "c"), Some("it's"));
    }

    #[test]
    fn malformed_input() {
        let short = "data_x\nloop_\n_a.x\n_a.y\n1 2 3\n";
        assert!(matches!(parse_block(short), Err(Error::Parse { line: 5, .. })));
        assert!(matches!(parse_block("data_x\n_a.b 'open\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_block("data_x\n_a.b\n;never closed\n"), Err(Error::Parse { line: 3, .. })));
        assert!(matches!(parse_block("data_x\n_nocategory 1\n"), Err(Error::Parse { line: 2, .. })));
    }
}
