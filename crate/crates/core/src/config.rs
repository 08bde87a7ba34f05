//! Line-oriented `key = value` configuration files.
//!
//! The grammar is deliberately small so files stay diffable and
//! hand-editable:
//!
//! ```text
//! # comment (also after values)
//! [section-name]
//! key = value
//! ```
//!
//! Section and key names use lowercase words joined by `-`. Values run to
//! the end of line (minus an optional trailing comment) and are trimmed.
//! Section order is meaningful: the pipeline runs stages in file order.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("config line {line}: {reason}")]
    Syntax { line: u64, reason: String },
    #[error("config line {line}: duplicate section [{name}]")]
    DuplicateSection { line: u64, name: String },
    #[error("config line {line}: key {key:?} outside any section")]
    KeyOutsideSection { line: u64, key: String },
}

/// One `[name]` block and its key/value entries, with source line numbers
/// for error reporting.
#[derive(Debug, Clone, PartialEq)]
pub struct Section {
    pub name: String,
    pub line: u64,
    pub entries: Vec<Entry>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Entry {
    pub key: String,
    pub value: String,
    pub line: u64,
}

impl Section {
    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.iter().find(|e| e.key == key).map(|e| e.value.as_str())
    }
}

/// A parsed configuration file: sections in source order.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ConfigFile {
    pub sections: Vec<Section>,
}

impl ConfigFile {
    pub fn section(&self, name: &str) -> Option<&Section> {
        self.sections.iter().find(|s| s.name == name)
    }
}

impl fmt::Display for ConfigFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, section) in self.sections.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            writeln!(f, "[{}]", section.name)?;
            for entry in &section.entries {
                writeln!(f, "{} = {}", entry.key, entry.value)?;
            }
        }
        Ok(())
    }
}

fn valid_name(name: &str) -> bool {
    !name.is_empty()
        && name
            .chars()
            .all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '-' || c == '_')
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(pos) => &line[..pos],
        None => line,
    }
}

/// Parses configuration text. Duplicate sections, duplicate keys within a
/// section, and keys before the first section header are errors.
pub fn parse_config(text: &str) -> Result<ConfigFile, ConfigError> {
    let mut file = ConfigFile::default();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i as u64 + 1;
        let line = strip_comment(raw).trim();
        if line.is_empty() {
            continue;
        }
        if let Some(inner) = line.strip_prefix('[') {
            let name = inner.strip_suffix(']').ok_or_else(|| ConfigError::Syntax {
                line: line_no,
                reason: "section header is missing the closing ]".to_string(),
            })?;
            let name = name.trim();
            if !valid_name(name) {
                return Err(ConfigError::Syntax {
                    line: line_no,
                    reason: format!("bad section name {name:?}"),
                });
            }
            if file.section(name).is_some() {
                return Err(ConfigError::DuplicateSection { line: line_no, name: name.to_string() });
            }
            file.sections.push(Section { name: name.to_string(), line: line_no, entries: Vec::new() });
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(ConfigError::Syntax {
                line: line_no,
                reason: format!("expected key = value, got {line:?}"),
            });
        };
        let key = key.trim();
        let value = value.trim();
        if !valid_name(key) {
            return Err(ConfigError::Syntax { line: line_no, reason: format!("bad key {key:?}") });
        }
        let Some(section) = file.sections.last_mut() else {
            return Err(ConfigError::KeyOutsideSection { line: line_no, key: key.to_string() });
        };
        if section.get(key).is_some() {
            return Err(ConfigError::Syntax {
                line: line_no,
                reason: format!("duplicate key {key:?} in section [{}]", section.name),
            });
        }
        section.entries.push(Entry { key: key.to_string(), value: value.to_string(), line: line_no });
    }
    Ok(file)
}
