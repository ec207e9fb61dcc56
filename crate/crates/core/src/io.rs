//! Text formats for codes and set families, JSON output, and cache
//! persistence.
//!
//! A code file starts with a header line `n <length>` followed by one
//! codeword per line, coordinate 1 leftmost. A block file has the same
//! header followed by one block per line as ascending 1-based coordinates
//! separated by spaces. In both, lines starting with `#` and blank lines
//! are skipped.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::cache::ExactValueCache;
use crate::code::{Code, Codeword, CoordSet, MAX_LEN};
use crate::constructions::SetFamily;
use crate::error::{Result, WitnessError};

/// Environment variable naming the default cache file.
pub const CACHE_ENV: &str = "WITSETS_CACHE";

fn parse_err(line: usize, msg: impl Into<String>) -> WitnessError {
    WitnessError::Parse { line, msg: msg.into() }
}

/// Content lines with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| WitnessError::Io(format!("{}: {e}", path.display())))
}

fn parse_header(line: usize, s: &str) -> Result<usize> {
    let mut parts = s.split_whitespace();
    match (parts.next(), parts.next(), parts.next()) {
        (Some("n"), Some(v), None) => {
            let n: usize = v
                .parse()
                .map_err(|_| parse_err(line, format!("bad length {v:?}")))?;
            if !(1..=MAX_LEN).contains(&n) {
                return Err(parse_err(line, format!("length {n} outside 1..={MAX_LEN}")));
            }
            Ok(n)
        }
        _ => Err(parse_err(line, "expected header \"n <length>\"")),
    }
}

/// A code as written in a file, keeping the file's word order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodeFile {
    pub n: usize,
    pub words: Vec<Codeword>,
}

impl CodeFile {
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = content_lines(text);
        let (hl, header) = lines.next().ok_or_else(|| parse_err(1, "missing header"))?;
        let n = parse_header(hl, header)?;
        let mut seen = HashSet::new();
        let mut words = Vec::new();
        for (line, s) in lines {
            if s.len() != n {
                return Err(parse_err(line, format!("expected {n} characters, found {}", s.len())));
            }
            let c: Codeword = s.parse().map_err(|e: WitnessError| parse_err(line, e.to_string()))?;
            if !seen.insert(c.bits()) {
                return Err(parse_err(line, format!("duplicate codeword {s}")));
            }
            words.push(c);
        }
        Ok(CodeFile { n, words })
    }

    pub fn from_code(code: &Code) -> Self {
        CodeFile {
            n: code.len(),
            words: code.words().to_vec(),
        }
    }

    pub fn to_code(&self) -> Result<Code> {
        Code::new(self.n, self.words.iter().copied())
    }

    pub fn render(&self) -> String {
        let mut out = format!("n {}\n", self.n);
        for c in &self.words {
            let _ = writeln!(out, "{c}");
        }
        out
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::parse(&read_text(path)?)
    }
}

pub fn parse_blocks(text: &str) -> Result<SetFamily> {
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or_else(|| parse_err(1, "missing header"))?;
    let n = parse_header(hl, header)?;
    let mut blocks = Vec::new();
    let mut seen = HashSet::new();
    for (line, s) in lines {
        let coords: Vec<usize> = s
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| parse_err(line, format!("bad coordinate {t:?}"))))
            .collect::<Result<_>>()?;
        if coords.windows(2).any(|p| p[0] >= p[1]) {
            return Err(parse_err(line, "coordinates must be strictly ascending"));
        }
        let block = CoordSet::from_coords(n, &coords).map_err(|e| parse_err(line, e.to_string()))?;
        if !seen.insert(block.mask()) {
            return Err(parse_err(line, format!("duplicate block {block}")));
        }
        blocks.push(block);
    }
    SetFamily::new(n, blocks)
}

pub fn render_blocks(family: &SetFamily) -> String {
    let mut out = format!("n {}\n", family.n());
    for b in family.blocks() {
        let coords: Vec<String> = b.coords().iter().map(usize::to_string).collect();
        let _ = writeln!(out, "{}", coords.join(" "));
    }
    out
}

pub fn read_blocks(path: &Path) -> Result<SetFamily> {
    parse_blocks(&read_text(path)?)
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

/// Writes through a temporary file in the same directory and renames it
/// over the target.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let name = path
        .file_name()
        .ok_or_else(|| WitnessError::Io(format!("{} is not a file path", path.display())))?
        .to_string_lossy();
    let tmp = dir.join(format!(".{name}.{}.tmp", std::process::id()));
    fs::write(&tmp, contents)?;
    fs::rename(&tmp, path).inspect_err(|_| {
        let _ = fs::remove_file(&tmp);
    })?;
    Ok(())
}

/// Reads a cache file; a missing file is an empty cache.
pub fn load_cache(path: &Path) -> Result<ExactValueCache> {
    match fs::read_to_string(path) {
        Ok(s) => Ok(serde_json::from_str(&s)?),
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(ExactValueCache::new()),
        Err(e) => Err(e.into()),
    }
}

/// Merges `cache` into whatever the file holds and writes the result back.
pub fn save_cache(path: &Path, cache: &ExactValueCache) -> Result<ExactValueCache> {
    let mut merged = load_cache(path)?;
    merged.merge(cache)?;
    write_atomic(path, &to_json(&merged)?)?;
    Ok(merged)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cache::CacheKey;
    use crate::constructions::{sphere, steiner_3_4_8};
    use num_bigint::BigUint;

    #[test]
    fn code_round_trip() {
        let code = sphere(5, 2).unwrap();
        let text = CodeFile::from_code(&code).render();
        let back = CodeFile::parse(&text).unwrap();
        assert_eq!(back.to_code().unwrap(), code);
        assert_eq!(back.render(), text);
        assert!(text.starts_with("n 5\n00011\n"));
    }

    #[test]
    fn code_file_keeps_order_and_skips_comments() {
        let f = CodeFile::parse("# comment\nn 3\n\n110\n# more\n001\n").unwrap();
        assert_eq!(f.words.len(), 2);
        assert_eq!(f.words[0].to_string(), "110");
        assert_eq!(CodeFile::parse("n 2\n").unwrap().words.len(), 0);
    }

    #[test]
    fn code_file_errors() {
        let line = |t: &str| match CodeFile::parse(t) {
            Err(WitnessError::Parse { line, .. }) => line,
            other => panic!("{other:?}"),
        };
        assert_eq!(line("n 3\n101\n10\n"), 3);
        assert_eq!(line("n 3\n101\n101\n"), 3);
        assert_eq!(line("n 3\n1a1\n"), 2);
        assert_eq!(line("3\n"), 1);
        assert_eq!(line("n 65\n"), 1);
        assert_eq!(line(""), 1);
    }

    #[test]
    fn block_round_trip() {
        let fam = steiner_3_4_8();
        let text = render_blocks(&fam);
        let back = parse_blocks(&text).unwrap();
        assert_eq!(back, fam);
        assert_eq!(render_blocks(&back), text);
    }

    #[test]
    fn block_errors() {
        assert!(parse_blocks("n 4\n2 1\n").is_err());
        assert!(parse_blocks("n 4\n1 5\n").is_err());
        assert!(parse_blocks("n 4\n1 2\n1 2\n").is_err());
        assert!(parse_blocks("n 4\n1 x\n").is_err());
    }

    #[test]
    fn cache_persistence_merges() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cache.json");
        assert!(load_cache(&path).unwrap().is_empty());
        let mut a = ExactValueCache::new();
        a.insert_exact(CacheKey::new(2, 1), BigUint::from(2u32), "test").unwrap();
        save_cache(&path, &a).unwrap();
        let mut b = ExactValueCache::new();
        b.insert_exact(CacheKey::new(4, 2), BigUint::from(8u32), "test").unwrap();
        let merged = save_cache(&path, &b).unwrap();
        assert_eq!(merged.len(), 2);
        assert_eq!(load_cache(&path).unwrap(), merged);
        let leftovers: Vec<_> = fs::read_dir(dir.path()).unwrap().collect();
        assert_eq!(leftovers.len(), 1);
    }
}
