//! ISCAS `.bench` parser.
//!
//! Accepted dialect, matching the public ISCAS-85 and 74X-series files:
//!
//! - `INPUT(x)` / `OUTPUT(x)` declarations (keywords case-insensitive);
//! - `name = FUNC(arg, arg, ...)` assignments with case-insensitive
//!   function names `AND, NAND, OR, NOR, XOR, XNOR, NOT, BUF` (`BUFF` is a
//!   synonym for `BUF`);
//! - `#` starts a comment running to end of line; blank lines are ignored;
//! - net names may contain any characters except whitespace, `( ) , = #`;
//! - multi-input gates may list more than two fanins ([`super::binarize`]
//!   normalizes them later);
//! - a single-fanin AND/OR/XOR is normalized to BUF, and a single-fanin
//!   NAND/NOR/XNOR to NOT, each with a warning;
//! - `DFF` is rejected by default; with [`ParseOptions::cut_dffs`] the
//!   flip-flop is cut: its output becomes a pseudo primary input and its
//!   data fanin a pseudo primary output (appended after the declared ones).
//!
//! Parsing is total: malformed input produces diagnostics, never a panic.
//! An `OUTPUT` declaration marks a net for observation; output nets may
//! still fan out internally.

use super::{Circuit, CircuitBuilder, Diagnostic, GateKind};

/// Options controlling dialect relaxations.
#[derive(Debug, Clone)]
pub struct ParseOptions {
    /// Circuit name to record (typically the file stem).
    pub name: String,
    /// Cut DFFs into pseudo-PI/PO pairs instead of rejecting them.
    pub cut_dffs: bool,
}

impl Default for ParseOptions {
    fn default() -> Self {
        ParseOptions {
            name: "top".to_string(),
            cut_dffs: false,
        }
    }
}

/// Outcome of a parse: the circuit when no error was found, plus every
/// diagnostic (errors and warnings) in source order.
#[derive(Debug)]
pub struct ParseResult {
    pub circuit: Option<Circuit>,
    pub diagnostics: Vec<Diagnostic>,
}

impl ParseResult {
    pub fn has_errors(&self) -> bool {
        self.diagnostics.iter().any(Diagnostic::is_error)
    }

    /// The circuit, or every diagnostic when any error occurred.
    pub fn into_result(self) -> Result<Circuit, Vec<Diagnostic>> {
        match self.circuit {
            Some(c) => Ok(c),
            None => Err(self.diagnostics),
        }
    }
}

pub fn parse_bench(text: &str) -> ParseResult {
    parse_bench_with(text, &ParseOptions::default())
}

pub fn parse_bench_with(text: &str, opts: &ParseOptions) -> ParseResult {
    Parser::new(opts).run(text)
}

struct Parser<'o> {
    opts: &'o ParseOptions,
    builder: CircuitBuilder,
    diagnostics: Vec<Diagnostic>,
    /// (net, line, column) of DFF data fanins, appended as pseudo-POs.
    cut_outputs: Vec<(String, u32, u32)>,
}

impl<'o> Parser<'o> {
    fn new(opts: &'o ParseOptions) -> Self {
        Parser {
            opts,
            builder: CircuitBuilder::new(opts.name.clone()),
            diagnostics: Vec::new(),
            cut_outputs: Vec::new(),
        }
    }

    fn run(mut self, text: &str) -> ParseResult {
        for (idx, raw_line) in text.lines().enumerate() {
            let line_no = (idx + 1) as u32;
            let content = match raw_line.find('#') {
                Some(pos) => &raw_line[..pos],
                None => raw_line,
            };
            if content.trim().is_empty() {
                continue;
            }
            self.line(content, line_no);
        }
        for (net, line, column) in std::mem::take(&mut self.cut_outputs) {
            self.builder.output_at(net, line, column);
        }
        let mut diagnostics = std::mem::take(&mut self.diagnostics);
        if diagnostics.iter().any(Diagnostic::is_error) {
            return ParseResult {
                circuit: None,
                diagnostics,
            };
        }
        match self.builder.finish() {
            Ok(circuit) => ParseResult {
                circuit: Some(circuit),
                diagnostics,
            },
            Err(errs) => {
                diagnostics.extend(errs);
                ParseResult {
                    circuit: None,
                    diagnostics,
                }
            }
        }
    }

    fn error(&mut self, msg: impl Into<String>, line: u32, column: u32) {
        self.diagnostics.push(Diagnostic::error(msg, line, column));
    }

    fn warning(&mut self, msg: impl Into<String>, line: u32, column: u32) {
        self.diagnostics.push(Diagnostic::warning(msg, line, column));
    }

    fn line(&mut self, content: &str, line_no: u32) {
        match split_assignment(content) {
            Some((lhs, rhs)) => self.assignment(content, lhs, rhs, line_no),
            None => self.declaration(content, line_no),
        }
    }

    /// `INPUT(x)` or `OUTPUT(x)`.
    fn declaration(&mut self, content: &str, line_no: u32) {
        let Some((keyword, inner, inner_col)) = call_form(content) else {
            self.error(
                "expected `INPUT(net)`, `OUTPUT(net)`, or `net = FUNC(args)`",
                line_no,
                col_of(content, content.len() - content.trim_start().len()),
            );
            return;
        };
        let kw_upper = keyword.text.to_ascii_uppercase();
        let Some(name) = self.net_name(inner, line_no, inner_col) else {
            return;
        };
        match kw_upper.as_str() {
            "INPUT" => {
                self.builder.input_at(name.text, line_no, name.column);
            }
            "OUTPUT" => {
                self.builder.output_at(name.text, line_no, name.column);
            }
            other => {
                self.error(
                    format!("unknown declaration `{other}` (expected INPUT or OUTPUT)"),
                    line_no,
                    keyword.column,
                );
            }
        }
    }

    /// `lhs = FUNC(arg, ...)`.
    fn assignment(&mut self, content: &str, lhs: &str, rhs: &str, line_no: u32) {
        let lhs_trim = lhs.trim();
        let lhs_col = col_of(content, offset_in(content, lhs) + (lhs.len() - lhs.trim_start().len()));
        let Some(lhs_name) = self.net_name(lhs_trim, line_no, lhs_col) else {
            return;
        };
        let rhs_offset = offset_in(content, rhs);
        let Some((func, inner, inner_col)) = call_form_at(rhs, rhs_offset, content) else {
            self.error(
                "expected `FUNC(arg, ...)` on the right-hand side",
                line_no,
                col_of(content, rhs_offset),
            );
            return;
        };
        let mut args = Vec::new();
        let mut bad_arg = false;
        if !inner.trim().is_empty() {
            let mut cursor = inner_col;
            for piece in inner.split(',') {
                let trimmed = piece.trim();
                let col = cursor + (piece.len() - piece.trim_start().len()) as u32;
                match self.net_name(trimmed, line_no, col) {
                    Some(tok) => args.push((tok.text, line_no, tok.column)),
                    None => bad_arg = true,
                }
                cursor += piece.len() as u32 + 1;
            }
        }
        if bad_arg {
            return;
        }
        let func_upper = func.text.to_ascii_uppercase();
        if func_upper == "DFF" {
            self.dff(lhs_name.text, args, line_no, func.column);
            return;
        }
        let Some(kind) = GateKind::from_name(&func_upper) else {
            self.error(
                format!("unsupported gate function `{}`", func.text),
                line_no,
                func.column,
            );
            return;
        };
        if args.is_empty() {
            self.error(
                format!("{} needs at least one argument", kind),
                line_no,
                func.column,
            );
            return;
        }
        let kind = if !kind.is_unary() && args.len() == 1 {
            let normalized = if kind.is_complemented() {
                GateKind::Not
            } else {
                GateKind::Buf
            };
            self.warning(
                format!(
                    "single-fanin {} normalized to {}",
                    kind, normalized
                ),
                line_no,
                func.column,
            );
            normalized
        } else {
            kind
        };
        if kind.is_unary() && args.len() != 1 {
            self.error(
                format!("{} takes exactly 1 input, got {}", kind, args.len()),
                line_no,
                func.column,
            );
            return;
        }
        self.builder
            .gate_at(kind, args, lhs_name.text, line_no, lhs_name.column);
    }

    fn dff(&mut self, q: String, args: Vec<(String, u32, u32)>, line_no: u32, func_col: u32) {
        if !self.opts.cut_dffs {
            self.error(
                "DFF is not supported in combinational mode (enable register cutting to model it as a pseudo input/output pair)",
                line_no,
                func_col,
            );
            return;
        }
        if args.len() != 1 {
            self.error(
                format!("DFF takes exactly 1 input, got {}", args.len()),
                line_no,
                func_col,
            );
            return;
        }
        let (d, d_line, d_col) = args.into_iter().next().unwrap();
        self.warning(
            format!("DFF cut: `{q}` becomes a pseudo input, `{d}` a pseudo output"),
            line_no,
            func_col,
        );
        self.builder.input_at(q, line_no, func_col);
        self.cut_outputs.push((d, d_line, d_col));
    }

    fn net_name(&mut self, text: &str, line_no: u32, column: u32) -> Option<Token> {
        if text.is_empty() {
            self.error("empty net name", line_no, column);
            return None;
        }
        if let Some(bad) = text.chars().find(|c| !is_name_char(*c)) {
            self.error(
                format!("invalid character `{bad}` in net name `{text}`"),
                line_no,
                column,
            );
            return None;
        }
        Some(Token {
            text: text.to_string(),
            column,
        })
    }
}

struct Token {
    text: String,
    column: u32,
}

fn is_name_char(c: char) -> bool {
    !c.is_whitespace() && !matches!(c, '(' | ')' | ',' | '=' | '#')
}

/// Splits `lhs = rhs` at the first `=`; returns `None` for declaration lines.
fn split_assignment(content: &str) -> Option<(&str, &str)> {
    let pos = content.find('=')?;
    Some((&content[..pos], &content[pos + 1..]))
}

/// Byte offset of a subslice within its parent line.
fn offset_in(parent: &str, sub: &str) -> usize {
    sub.as_ptr() as usize - parent.as_ptr() as usize
}

/// 1-based character column of a byte offset.
fn col_of(line: &str, byte_offset: usize) -> u32 {
    line[..byte_offset.min(line.len())].chars().count() as u32 + 1
}

struct Call<'a> {
    text: &'a str,
    column: u32,
}

/// Parses `IDENT ( inner )` with optional surrounding whitespace. Returns
/// the identifier token, the text between parentheses, and the 1-based
/// column where that inner text begins.
fn call_form(content: &str) -> Option<(Call<'_>, &str, u32)> {
    call_form_at(content, 0, content)
}

fn call_form_at<'a>(piece: &'a str, piece_offset: usize, full_line: &str) -> Option<(Call<'a>, &'a str, u32)> {
    let open = piece.find('(')?;
    let close = piece.rfind(')')?;
    if close < open {
        return None;
    }
    if !piece[close + 1..].trim().is_empty() {
        return None;
    }
    let ident = piece[..open].trim();
    if ident.is_empty() || !ident.chars().all(is_name_char) {
        return None;
    }
    let ident_start = piece_offset + (piece[..open].len() - piece[..open].trim_start().len());
    let inner = &piece[open + 1..close];
    Some((
        Call {
            text: ident,
            column: col_of(full_line, ident_start),
        },
        inner,
        col_of(full_line, piece_offset + open + 1),
    ))
}
