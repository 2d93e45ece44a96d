//! Plain-text config files: `[section]` headers, `key = value` lines,
//! `#` comments. Keys may repeat within a section (used for explicit
//! generator lists). See `docs/config-format.md` for the schema.

use crate::error::{Error, Result};

#[derive(Debug)]
pub struct Config {
    path: String,
    sections: Vec<Section>,
}

#[derive(Debug)]
pub struct Section {
    pub name: String,
    pub line: usize,
    path: String,
    entries: Vec<Entry>,
}

#[derive(Debug)]
struct Entry {
    key: String,
    value: String,
    line: usize,
}

impl Config {
    pub fn parse(text: &str, path: &str) -> Result<Config> {
        let mut sections: Vec<Section> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = match raw.find('#') {
                Some(pos) => &raw[..pos],
                None => raw,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            if let Some(name) = line.strip_prefix('[') {
                let name = name.strip_suffix(']').ok_or_else(|| Error::Parse {
                    path: path.into(),
                    line: line_no,
                    message: "unterminated section header".into(),
                })?;
                sections.push(Section {
                    name: name.trim().to_string(),
                    line: line_no,
                    path: path.into(),
                    entries: Vec::new(),
                });
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| Error::Parse {
                path: path.into(),
                line: line_no,
                message: "expected `key = value` or `[section]`".into(),
            })?;
            let section = sections.last_mut().ok_or_else(|| Error::Parse {
                path: path.into(),
                line: line_no,
                message: "key/value pair before any [section]".into(),
            })?;
            section.entries.push(Entry {
                key: key.trim().to_string(),
                value: value.trim().to_string(),
                line: line_no,
            });
        }
        Ok(Config {
            path: path.into(),
            sections,
        })
    }

    pub fn section(&self, name: &str) -> Option<&Section> {
        self.sections.iter().find(|s| s.name == name)
    }

    pub fn require_section(&self, name: &str) -> Result<&Section> {
        self.section(name).ok_or_else(|| Error::Parse {
            path: self.path.clone(),
            line: 0,
            message: format!("missing required section [{name}]"),
        })
    }

    pub fn has_section(&self, name: &str) -> bool {
        self.section(name).is_some()
    }
}

impl Section {
    fn err(&self, line: usize, message: String) -> Error {
        Error::Parse {
            path: self.path.clone(),
            line,
            message,
        }
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries
            .iter()
            .find(|e| e.key == key)
            .map(|e| e.value.as_str())
    }

    pub fn require(&self, key: &str) -> Result<&str> {
        self.get(key).ok_or_else(|| {
            self.err(
                self.line,
                format!("section [{}] lacks required key `{key}`", self.name),
            )
        })
    }

    /// All values for a repeated key, with their line numbers.
    pub fn values<'a>(&'a self, key: &'a str) -> impl Iterator<Item = (&'a str, usize)> + 'a {
        self.entries
            .iter()
            .filter(move |e| e.key == key)
            .map(|e| (e.value.as_str(), e.line))
    }

    pub fn f64(&self, key: &str) -> Result<f64> {
        let entry = self
            .entries
            .iter()
            .find(|e| e.key == key)
            .ok_or_else(|| self.err(self.line, format!("missing key `{key}`")))?;
        entry.value.parse().map_err(|_| {
            self.err(
                entry.line,
                format!("key `{key}`: `{}` is not a number", entry.value),
            )
        })
    }

    pub fn f64_or(&self, key: &str, default: f64) -> Result<f64> {
        if self.get(key).is_none() {
            return Ok(default);
        }
        self.f64(key)
    }

    pub fn u64_or(&self, key: &str, default: u64) -> Result<u64> {
        match self.entries.iter().find(|e| e.key == key) {
            None => Ok(default),
            Some(entry) => entry.value.parse().map_err(|_| {
                self.err(
                    entry.line,
                    format!("key `{key}`: `{}` is not an integer", entry.value),
                )
            }),
        }
    }

    pub fn usize(&self, key: &str) -> Result<usize> {
        let entry = self
            .entries
            .iter()
            .find(|e| e.key == key)
            .ok_or_else(|| self.err(self.line, format!("missing key `{key}`")))?;
        entry.value.parse().map_err(|_| {
            self.err(
                entry.line,
                format!("key `{key}`: `{}` is not an integer", entry.value),
            )
        })
    }

    /// Comma-separated floats.
    pub fn f64_list(&self, key: &str) -> Result<Vec<f64>> {
        let entry = self
            .entries
            .iter()
            .find(|e| e.key == key)
            .ok_or_else(|| self.err(self.line, format!("missing key `{key}`")))?;
        entry
            .value
            .split(',')
            .map(|v| {
                v.trim().parse::<f64>().map_err(|_| {
                    self.err(
                        entry.line,
                        format!("key `{key}`: `{}` is not a number", v.trim()),
                    )
                })
            })
            .collect()
    }

    /// Comma-separated positive integers.
    pub fn usize_list(&self, key: &str) -> Result<Vec<usize>> {
        let entry = self
            .entries
            .iter()
            .find(|e| e.key == key)
            .ok_or_else(|| self.err(self.line, format!("missing key `{key}`")))?;
        entry
            .value
            .split(',')
            .map(|v| {
                v.trim().parse::<usize>().map_err(|_| {
                    self.err(
                        entry.line,
                        format!("key `{key}`: `{}` is not an integer", v.trim()),
                    )
                })
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_sections_keys_and_comments() {
        let text = "\n# top comment\n[alpha]\nx = 1.5   # trailing\nname = hello\n[beta]\nx = 2\nitem = a\nitem = b\n";
        let cfg = Config::parse(text, "test.cfg").unwrap();
        let alpha = cfg.section("alpha").unwrap();
        assert_eq!(alpha.f64("x").unwrap(), 1.5);
        assert_eq!(alpha.get("name"), Some("hello"));
        let beta = cfg.section("beta").unwrap();
        let items: Vec<&str> = beta.values("item").map(|(v, _)| v).collect();
        assert_eq!(items, ["a", "b"]);
        assert!(cfg.section("gamma").is_none());
    }

    #[test]
    fn errors_carry_line_numbers() {
        let err = Config::parse("x = 1\n", "c.cfg").unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 1),
            other => panic!("unexpected {other:?}"),
        }
        let cfg = Config::parse("[a]\nx = oops\n", "c.cfg").unwrap();
        match cfg.section("a").unwrap().f64("x").unwrap_err() {
            Error::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn lists_parse() {
        let cfg = Config::parse("[g]\ncounts = 4, 8,16\nvals = 0.5,1.5\n", "c.cfg").unwrap();
        let g = cfg.section("g").unwrap();
        assert_eq!(g.usize_list("counts").unwrap(), vec![4, 8, 16]);
        assert_eq!(g.f64_list("vals").unwrap(), vec![0.5, 1.5]);
    }
}
