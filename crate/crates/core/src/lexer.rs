//! Best-effort Python 3 tokenizer and the normalized, line-oriented program form.
//!
//! The tokenizer never fails. Comments, blank lines and intra-line whitespace
//! are dropped; block structure survives as `Newline`/`Indent`/`Dedent` control
//! tokens; identifiers keep their spelling. Malformed input (unterminated
//! strings, bad dedents, stray characters) yields diagnostics and the scan goes on.

use std::fmt;

use serde::{Deserialize, Serialize};

const TAB_WIDTH: usize = 8;

const KEYWORDS: &[&str] = &[
    "False", "None", "True", "and", "as", "assert", "async", "await", "break", "class", "continue", "def", "del",
    "elif", "else", "except", "finally", "for", "from", "global", "if", "import", "in", "is", "lambda", "nonlocal",
    "not", "or", "pass", "raise", "return", "try", "while", "with", "yield",
];

const OPERATORS: &[&str] = &[
    "**=", "//=", ">>=", "<<=", "...", "**", "//", "<<", ">>", "<=", ">=", "==", "!=", "->", ":=", "+=", "-=", "*=",
    "/=", "%=", "&=", "|=", "^=", "@=", "+", "-", "*", "/", "%", "@", "&", "|", "^", "~", "<", ">", "(", ")", "[", "]",
    "{", "}", ",", ":", ".", ";", "=",
];

const STRING_PREFIXES: &[&str] = &["r", "u", "b", "f", "br", "rb", "fr", "rf"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum TokenKind {
    Name,
    Number,
    String,
    Operator,
    Keyword,
    Newline,
    Indent,
    Dedent,
}

impl TokenKind {
    /// Control tokens carry no text.
    pub fn is_control(self) -> bool {
        matches!(self, TokenKind::Newline | TokenKind::Indent | TokenKind::Dedent)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Token {
    pub kind: TokenKind,
    pub text: String,
    /// 1-based physical line where the token starts.
    pub source_line: usize,
}

impl Token {
    fn control(kind: TokenKind, source_line: usize) -> Self {
        Token {
            kind,
            text: String::new(),
            source_line,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DiagnosticKind {
    UnterminatedString,
    InconsistentDedent,
    UnbalancedBracket,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub line: usize,
    pub kind: DiagnosticKind,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

/// Tokens plus whatever the scanner had to paper over.
#[derive(Debug, Clone, Default)]
pub struct Lexed {
    pub tokens: Vec<Token>,
    pub diagnostics: Vec<Diagnostic>,
}

struct Scanner<'a> {
    chars: &'a [char],
    pos: usize,
    line: usize,
    depth: usize,
    indents: Vec<usize>,
    line_has_tokens: bool,
    out: Lexed,
}

/// Tokenizes Python 3 source text.
pub fn tokenize(source: &str) -> Lexed {
    let chars: Vec<char> = source.chars().collect();
    let mut sc = Scanner {
        chars: &chars,
        pos: 0,
        line: 1,
        depth: 0,
        indents: vec![0],
        line_has_tokens: false,
        out: Lexed::default(),
    };
    sc.run();
    sc.out
}

impl Scanner<'_> {
    fn peek(&self, off: usize) -> Option<char> {
        self.chars.get(self.pos + off).copied()
    }

    fn push(&mut self, kind: TokenKind, text: String, line: usize) {
        self.out.tokens.push(Token {
            kind,
            text,
            source_line: line,
        });
        self.line_has_tokens = true;
    }

    fn diag(&mut self, line: usize, kind: DiagnosticKind, message: impl Into<String>) {
        self.out.diagnostics.push(Diagnostic {
            line,
            kind,
            message: message.into(),
        });
    }

    /// Consumes a line break at the cursor, if any. Returns true on success.
    fn eat_newline(&mut self) -> bool {
        match self.peek(0) {
            Some('\n') => self.pos += 1,
            Some('\r') => {
                self.pos += 1;
                if self.peek(0) == Some('\n') {
                    self.pos += 1;
                }
            }
            _ => return false,
        }
        self.line += 1;
        true
    }

    fn run(&mut self) {
        let mut at_line_start = true;
        while self.pos < self.chars.len() {
            if at_line_start && self.depth == 0 {
                if self.begin_line() {
                    at_line_start = false;
                }
                continue;
            }
            let c = self.chars[self.pos];
            match c {
                '\n' | '\r' => {
                    if self.depth == 0 && self.line_has_tokens {
                        self.out.tokens.push(Token::control(TokenKind::Newline, self.line));
                        self.line_has_tokens = false;
                    }
                    self.eat_newline();
                    at_line_start = self.depth == 0;
                }
                '#' => self.skip_comment(),
                '\\' if matches!(self.peek(1), Some('\n' | '\r')) => {
                    self.pos += 1;
                    self.eat_newline();
                }
                '\'' | '"' => self.scan_string(self.pos),
                c if c.is_ascii_digit() => self.scan_number(),
                '.' if self.peek(1).is_some_and(|d| d.is_ascii_digit()) => self.scan_number(),
                c if c == '_' || c.is_alphabetic() => self.scan_name(),
                c if c.is_whitespace() => self.pos += 1,
                _ => self.scan_operator(),
            }
        }
        if self.depth > 0 {
            self.diag(
                self.line,
                DiagnosticKind::UnbalancedBracket,
                "unclosed bracket at end of input",
            );
        }
        if self.line_has_tokens {
            self.out.tokens.push(Token::control(TokenKind::Newline, self.line));
            self.line_has_tokens = false;
        }
        for _ in 1..self.indents.len() {
            self.out.tokens.push(Token::control(TokenKind::Dedent, self.line));
        }
        self.indents.truncate(1);
    }

    /// Measures indentation at the start of a physical line. Blank and
    /// comment-only lines are consumed whole and return false.
    fn begin_line(&mut self) -> bool {
        let mut col = 0;
        while let Some(c) = self.peek(0) {
            match c {
                ' ' => col += 1,
                '\t' => col = (col / TAB_WIDTH + 1) * TAB_WIDTH,
                '\x0c' => col = 0,
                _ => break,
            }
            self.pos += 1;
        }
        match self.peek(0) {
            None => return false,
            Some('\n' | '\r') => {
                self.eat_newline();
                return false;
            }
            Some('#') => {
                self.skip_comment();
                self.eat_newline();
                return false;
            }
            Some('\\') if matches!(self.peek(1), Some('\n' | '\r')) => {
                // A bare continuation line behaves like a blank one here.
                self.pos += 1;
                self.eat_newline();
                return false;
            }
            _ => {}
        }
        self.apply_indent(col);
        true
    }

    fn apply_indent(&mut self, col: usize) {
        let top = *self.indents.last().expect("indent stack never empty");
        if col > top {
            self.indents.push(col);
            self.out.tokens.push(Token::control(TokenKind::Indent, self.line));
            return;
        }
        while col < *self.indents.last().unwrap() {
            let top = self.indents[self.indents.len() - 1];
            let below = self.indents[self.indents.len() - 2];
            if col > below {
                self.diag(
                    self.line,
                    DiagnosticKind::InconsistentDedent,
                    format!("dedent to column {col} matches no open block"),
                );
                // Snap to the nearer open level; ties go outward.
                if top - col < col - below {
                    break;
                }
            }
            self.indents.pop();
            self.out.tokens.push(Token::control(TokenKind::Dedent, self.line));
            if col > below {
                break;
            }
        }
    }

    fn skip_comment(&mut self) {
        while let Some(c) = self.peek(0) {
            if c == '\n' || c == '\r' {
                break;
            }
            self.pos += 1;
        }
    }

    fn scan_name(&mut self) {
        let start = self.pos;
        while let Some(c) = self.peek(0) {
            if c == '_' || c.is_alphanumeric() {
                self.pos += 1;
            } else {
                break;
            }
        }
        let text: String = self.chars[start..self.pos].iter().collect();
        if matches!(self.peek(0), Some('\'' | '"')) && STRING_PREFIXES.contains(&text.to_ascii_lowercase().as_str()) {
            self.scan_string(start);
            return;
        }
        let kind = if KEYWORDS.contains(&text.as_str()) {
            TokenKind::Keyword
        } else {
            TokenKind::Name
        };
        self.push(kind, text, self.line);
    }

    /// Scans a string literal whose prefix (possibly empty) starts at `start`
    /// and whose opening quote is at the cursor.
    fn scan_string(&mut self, start: usize) {
        let first_line = self.line;
        let quote = self.chars[self.pos];
        let triple = self.peek(1) == Some(quote) && self.peek(2) == Some(quote);
        self.pos += if triple { 3 } else { 1 };
        let mut terminated = false;
        while let Some(c) = self.peek(0) {
            if c == '\\' {
                self.pos += 1;
                if matches!(self.peek(0), Some('\n' | '\r')) {
                    self.eat_newline();
                } else if self.peek(0).is_some() {
                    self.pos += 1;
                }
                continue;
            }
            if c == quote {
                if !triple {
                    self.pos += 1;
                    terminated = true;
                    break;
                }
                if self.peek(1) == Some(quote) && self.peek(2) == Some(quote) {
                    self.pos += 3;
                    terminated = true;
                    break;
                }
                self.pos += 1;
                continue;
            }
            if c == '\n' || c == '\r' {
                if !triple {
                    break;
                }
                self.eat_newline();
                continue;
            }
            self.pos += 1;
        }
        if !terminated {
            self.diag(
                first_line,
                DiagnosticKind::UnterminatedString,
                "unterminated string literal",
            );
            if !triple {
                // The rest of the line is lost; do not let open brackets swallow the next one.
                self.depth = 0;
            }
        }
        let text: String = self.chars[start..self.pos].iter().collect();
        self.push(TokenKind::String, text, first_line);
    }

    fn scan_number(&mut self) {
        let start = self.pos;
        let digits = |sc: &mut Self, radix: u32| {
            while let Some(c) = sc.peek(0) {
                if c == '_' || c.is_digit(radix) {
                    sc.pos += 1;
                } else {
                    break;
                }
            }
        };
        if self.peek(0) == Some('0') && matches!(self.peek(1), Some('x' | 'X' | 'o' | 'O' | 'b' | 'B')) {
            let radix = match self.peek(1) {
                Some('x' | 'X') => 16,
                Some('o' | 'O') => 8,
                _ => 2,
            };
            self.pos += 2;
            digits(self, radix);
        } else {
            digits(self, 10);
            if self.peek(0) == Some('.') {
                self.pos += 1;
                digits(self, 10);
            }
            if matches!(self.peek(0), Some('e' | 'E')) {
                let sign = usize::from(matches!(self.peek(1), Some('+' | '-')));
                if self.peek(1 + sign).is_some_and(|d| d.is_ascii_digit()) {
                    self.pos += 1 + sign;
                    digits(self, 10);
                }
            }
            if matches!(self.peek(0), Some('j' | 'J')) {
                self.pos += 1;
            }
        }
        let text: String = self.chars[start..self.pos].iter().collect();
        self.push(TokenKind::Number, text, self.line);
    }

    fn scan_operator(&mut self) {
        let rest = &self.chars[self.pos..];
        let op = OPERATORS.iter().find(|op| {
            let n = op.chars().count();
            rest.len() >= n && op.chars().zip(rest).all(|(a, b)| a == *b)
        });
        let text = match op {
            Some(op) => op.to_string(),
            None => self.chars[self.pos].to_string(),
        };
        self.pos += text.chars().count();
        match text.as_str() {
            "(" | "[" | "{" => self.depth += 1,
            ")" | "]" | "}" => {
                if self.depth == 0 {
                    self.diag(
                        self.line,
                        DiagnosticKind::UnbalancedBracket,
                        format!("unmatched `{text}`"),
                    );
                } else {
                    self.depth -= 1;
                }
            }
            _ => {}
        }
        self.push(TokenKind::Operator, text, self.line);
    }
}

/// One logical line of a normalized program.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LogicalLine {
    pub indent_depth: usize,
    pub tokens: Vec<Token>,
}

impl LogicalLine {
    /// Visible token texts joined by single spaces.
    pub fn render(&self) -> String {
        render_line(self)
    }

    pub fn texts(&self) -> Vec<&str> {
        self.tokens.iter().map(|t| t.text.as_str()).collect()
    }
}

/// Comment-, blank- and whitespace-free view of a program, one entry per logical line.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalizedProgram {
    pub lines: Vec<LogicalLine>,
}

impl NormalizedProgram {
    /// Tokenizes and normalizes in one go.
    pub fn from_source(source: &str) -> (Self, Vec<Diagnostic>) {
        let lexed = tokenize(source);
        (normalize(&lexed.tokens), lexed.diagnostics)
    }

    /// Visible tokens of all lines, in order.
    pub fn flat_texts(&self) -> Vec<&str> {
        self.lines
            .iter()
            .flat_map(|l| l.tokens.iter().map(|t| t.text.as_str()))
            .collect()
    }

    pub fn token_count(&self) -> usize {
        self.lines.iter().map(|l| l.tokens.len()).sum()
    }

    /// Debug dump: `depth<TAB>rendered line` per logical line.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for line in &self.lines {
            out.push_str(&format!("{}\t{}\n", line.indent_depth, line.render()));
        }
        out
    }
}

/// Groups tokens into logical lines and folds indentation into depths.
pub fn normalize(tokens: &[Token]) -> NormalizedProgram {
    let mut lines = Vec::new();
    let mut depth = 0usize;
    let mut current: Vec<Token> = Vec::new();
    let mut current_depth = 0;
    for tok in tokens {
        match tok.kind {
            TokenKind::Indent => depth += 1,
            TokenKind::Dedent => depth = depth.saturating_sub(1),
            TokenKind::Newline => {
                if !current.is_empty() {
                    lines.push(LogicalLine {
                        indent_depth: current_depth,
                        tokens: std::mem::take(&mut current),
                    });
                }
            }
            _ => {
                if current.is_empty() {
                    current_depth = depth;
                }
                current.push(tok.clone());
            }
        }
    }
    if !current.is_empty() {
        lines.push(LogicalLine {
            indent_depth: current_depth,
            tokens: current,
        });
    }
    NormalizedProgram { lines }
}

/// Joins the visible token texts of a line with one space.
pub fn render_line(line: &LogicalLine) -> String {
    line.texts().join(" ")
}
