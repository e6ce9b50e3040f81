//! Flat `key = value` configuration with `[section]` headers.
//!
//! Keys before the first header belong to the unnamed root section. `#` starts
//! a comment line; inline comments are not supported so values may contain `#`.

use std::cell::RefCell;
use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("line {line}: expected `key = value` or `[section]`, got `{text}`")]
    Syntax { line: usize, text: String },
    #[error("line {line}: duplicate key `{key}` in [{section}]")]
    DuplicateKey {
        line: usize,
        section: String,
        key: String,
    },
    #[error("line {line}: duplicate section [{section}]")]
    DuplicateSection { line: usize, section: String },
    #[error("missing section [{0}]")]
    MissingSection(String),
    #[error("[{section}] unknown section")]
    UnknownSection { section: String },
    #[error("[{section}] missing key `{key}`")]
    MissingKey { section: String, key: String },
    #[error("[{section}] unknown key `{key}`")]
    UnknownKey { section: String, key: String },
    #[error("[{section}] {key} = {value}: {reason}")]
    InvalidValue {
        section: String,
        key: String,
        value: String,
        reason: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Section {
    pub name: String,
    pub entries: Vec<(String, String)>,
}

impl Section {
    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn set(&mut self, key: &str, value: impl Into<String>) {
        let value = value.into();
        match self.entries.iter_mut().find(|(k, _)| k == key) {
            Some(e) => e.1 = value,
            None => self.entries.push((key.to_string(), value)),
        }
    }
}

/// Parsed file; the root section (name `""`) is always first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Config {
    sections: Vec<Section>,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            sections: vec![Section::default()],
        }
    }
}

fn valid_ident(s: &str) -> bool {
    !s.is_empty()
        && s.chars()
            .all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.'))
}

impl Config {
    pub fn parse(text: &str) -> Result<Config, ConfigError> {
        let mut cfg = Config::default();
        let mut current = 0;
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let t = raw.trim();
            if t.is_empty() || t.starts_with('#') {
                continue;
            }
            if let Some(rest) = t.strip_prefix('[') {
                let name = rest
                    .strip_suffix(']')
                    .map(str::trim)
                    .filter(|n| valid_ident(n))
                    .ok_or_else(|| ConfigError::Syntax {
                        line,
                        text: t.to_string(),
                    })?;
                if cfg.section(name).is_some() {
                    return Err(ConfigError::DuplicateSection {
                        line,
                        section: name.to_string(),
                    });
                }
                cfg.sections.push(Section {
                    name: name.to_string(),
                    entries: Vec::new(),
                });
                current = cfg.sections.len() - 1;
                continue;
            }
            let (k, v) = t
                .split_once('=')
                .map(|(k, v)| (k.trim(), v.trim()))
                .filter(|(k, _)| valid_ident(k))
                .ok_or_else(|| ConfigError::Syntax {
                    line,
                    text: t.to_string(),
                })?;
            let sec = &mut cfg.sections[current];
            if sec.get(k).is_some() {
                return Err(ConfigError::DuplicateKey {
                    line,
                    section: sec.name.clone(),
                    key: k.to_string(),
                });
            }
            sec.entries.push((k.to_string(), v.to_string()));
        }
        Ok(cfg)
    }

    /// Canonical text: root entries, then each section in file order.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        for (i, sec) in self.sections.iter().enumerate() {
            if !sec.name.is_empty() {
                if i > 0 && !out.is_empty() {
                    out.push('\n');
                }
                let _ = writeln!(out, "[{}]", sec.name);
            }
            for (k, v) in &sec.entries {
                let _ = writeln!(out, "{k} = {v}");
            }
        }
        out
    }

    pub fn sections(&self) -> &[Section] {
        &self.sections
    }

    pub fn section(&self, name: &str) -> Option<&Section> {
        self.sections.iter().find(|s| s.name == name)
    }

    pub fn section_mut(&mut self, name: &str) -> &mut Section {
        if let Some(i) = self.sections.iter().position(|s| s.name == name) {
            return &mut self.sections[i];
        }
        self.sections.push(Section {
            name: name.to_string(),
            entries: Vec::new(),
        });
        self.sections.last_mut().expect("just pushed")
    }

    /// Typed reader over one section; a missing section reads as empty.
    pub fn reader(&self, name: &str) -> Reader<'_> {
        static EMPTY: Section = Section {
            name: String::new(),
            entries: Vec::new(),
        };
        Reader {
            name: name.to_string(),
            section: self.section(name).unwrap_or(&EMPTY),
            used: RefCell::new(BTreeSet::new()),
        }
    }
}

/// Typed access that remembers which keys were consumed, so leftovers can be
/// reported as unknown.
pub struct Reader<'a> {
    name: String,
    section: &'a Section,
    used: RefCell<BTreeSet<String>>,
}

impl Reader<'_> {
    fn raw(&self, key: &str) -> Option<&str> {
        self.used.borrow_mut().insert(key.to_string());
        self.section.get(key)
    }

    pub fn invalid(&self, key: &str, value: &str, reason: impl Into<String>) -> ConfigError {
        ConfigError::InvalidValue {
            section: self.name.clone(),
            key: key.to_string(),
            value: value.to_string(),
            reason: reason.into(),
        }
    }

    pub fn opt<T: FromStr>(&self, key: &str) -> Result<Option<T>, ConfigError>
    where
        T::Err: std::fmt::Display,
    {
        match self.raw(key) {
            None => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|e: T::Err| self.invalid(key, v, e.to_string())),
        }
    }

    pub fn get_or<T: FromStr>(&self, key: &str, default: T) -> Result<T, ConfigError>
    where
        T::Err: std::fmt::Display,
    {
        Ok(self.opt(key)?.unwrap_or(default))
    }

    pub fn require<T: FromStr>(&self, key: &str) -> Result<T, ConfigError>
    where
        T::Err: std::fmt::Display,
    {
        self.opt(key)?.ok_or_else(|| ConfigError::MissingKey {
            section: self.name.clone(),
            key: key.to_string(),
        })
    }

    /// Comma-separated list.
    pub fn list<T: FromStr>(&self, key: &str) -> Result<Option<Vec<T>>, ConfigError>
    where
        T::Err: std::fmt::Display,
    {
        let Some(v) = self.raw(key) else {
            return Ok(None);
        };
        v.split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| {
                s.parse()
                    .map_err(|e: T::Err| self.invalid(key, v, e.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Some)
    }

    pub fn list_or<T: FromStr>(&self, key: &str, default: Vec<T>) -> Result<Vec<T>, ConfigError>
    where
        T::Err: std::fmt::Display,
    {
        Ok(self.list(key)?.unwrap_or(default))
    }

    /// Errors on the first key that was never read.
    pub fn finish(self) -> Result<(), ConfigError> {
        let used = self.used.borrow();
        match self.section.entries.iter().find(|(k, _)| !used.contains(k)) {
            Some((k, _)) => Err(ConfigError::UnknownKey {
                section: self.name.clone(),
                key: k.clone(),
            }),
            None => Ok(()),
        }
    }
}
