//! Line-oriented tokenizer shared by the `.bst`, `.pos` and `.map` formats.
//!
//! Every format is a sequence of directives, one per line. A `#` starts a
//! comment that runs to the end of the line. Tokens are separated by ASCII
//! or Unicode whitespace and must consist of printable characters.

use std::collections::HashMap;

use crate::error::{Error, Result};

/// One non-empty line: its 1-based number, the directive keyword and the remaining tokens.
pub(crate) struct Directive<'a> {
    pub line: usize,
    pub keyword: &'a str,
    pub args: Vec<&'a str>,
}

pub(crate) fn directives(text: &str) -> Result<Vec<Directive<'_>>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        let mut tokens = content.split_whitespace();
        let Some(keyword) = tokens.next() else { continue };
        let args: Vec<&str> = tokens.collect();
        for tok in std::iter::once(keyword).chain(args.iter().copied()) {
            if tok.chars().any(|c| c.is_control()) {
                return Err(Error::at_line(
                    line,
                    Error::Syntax(format!("token {tok:?} contains a control character")),
                ));
            }
        }
        out.push(Directive { line, keyword, args });
    }
    Ok(out)
}

/// Declaration-ordered node names with reverse lookup.
#[derive(Debug, Clone, Default)]
pub(crate) struct NodeTable {
    pub names: Vec<String>,
    pub index: HashMap<String, usize>,
}

impl NodeTable {
    pub fn declare(&mut self, name: &str) -> Result<usize> {
        if self.index.contains_key(name) {
            return Err(Error::DuplicateNode(name.to_string()));
        }
        let id = self.names.len();
        self.names.push(name.to_string());
        self.index.insert(name.to_string(), id);
        Ok(id)
    }

    pub fn lookup(&self, name: &str) -> Result<usize> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownNode(name.to_string()))
    }

    pub fn from_names<I, S>(names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut table = NodeTable::default();
        for n in names {
            let n = n.as_ref();
            if n.is_empty() || n.chars().any(|c| c.is_whitespace() || c.is_control() || c == '#') {
                return Err(Error::InvalidArgument(format!("{n:?} is not a valid node name")));
            }
            table.declare(n)?;
        }
        Ok(table)
    }
}

/// Parses the optional header directive (`structure <name>` or `otree <name>`).
pub(crate) fn header_name(d: &Directive<'_>, current: &mut Option<String>) -> Result<()> {
    if current.is_some() {
        return Err(Error::at_line(
            d.line,
            Error::Syntax(format!("`{}` appears more than once", d.keyword)),
        ));
    }
    match d.args.as_slice() {
        [name] => {
            *current = Some((*name).to_string());
            Ok(())
        }
        _ => Err(Error::at_line(
            d.line,
            Error::Syntax(format!("`{}` takes exactly one name", d.keyword)),
        )),
    }
}
