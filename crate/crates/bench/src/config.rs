//! `key = value` configuration files.
//!
//! One setting per line, `#` starts a comment, values may be wrapped in double
//! quotes. Keys are the long flag names without dashes (`seeds`, `grid`,
//! `rho-grid`, ...). Flags given on the command line override the file.

use anyhow::{anyhow, bail, Context, Result};
use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ConfigFile {
    values: BTreeMap<String, String>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self> {
        let mut values = BTreeMap::new();
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| anyhow!("config line {}: expected `key = value`", no + 1))?;
            let key = k.trim().replace('_', "-");
            let v = v.trim();
            let v = v.strip_prefix('"').and_then(|s| s.strip_suffix('"')).unwrap_or(v);
            if key.is_empty() {
                bail!("config line {}: empty key", no + 1);
            }
            if values.insert(key.clone(), v.to_owned()).is_some() {
                bail!("config line {}: `{key}` set twice", no + 1);
            }
        }
        Ok(Self { values })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("in {}", path.display()))
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    /// The command-line value if present, else the parsed file value.
    pub fn pick<T>(&self, cli: Option<T>, key: &str) -> Result<Option<T>>
    where
        T: FromStr,
        T::Err: std::fmt::Display,
    {
        if cli.is_some() {
            return Ok(cli);
        }
        self.get(key)
            .map(|s| s.parse::<T>().map_err(|e| anyhow!("config key `{key}`: {e}")))
            .transpose()
    }

    /// Like [`ConfigFile::pick`] for a comma-separated list.
    pub fn pick_list<T>(&self, cli: Option<String>, key: &str) -> Result<Option<Vec<T>>>
    where
        T: FromStr,
        T::Err: std::fmt::Display,
    {
        let Some(text) = cli.or_else(|| self.get(key).map(str::to_owned)) else {
            return Ok(None);
        };
        parse_list(&text).map(Some).with_context(|| format!("`{key}`"))
    }

    pub fn flag(&self, cli: bool, key: &str) -> Result<bool> {
        if cli {
            return Ok(true);
        }
        match self.get(key) {
            None => Ok(false),
            Some("true" | "yes" | "1") => Ok(true),
            Some("false" | "no" | "0") => Ok(false),
            Some(other) => bail!("config key `{key}`: `{other}` is not a boolean"),
        }
    }
}

pub fn parse_list<T>(text: &str) -> Result<Vec<T>>
where
    T: FromStr,
    T::Err: std::fmt::Display,
{
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<T>().map_err(|e| anyhow!("`{s}`: {e}")))
        .collect()
}

/// Grid size written `WxH`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct GridSize {
    pub width: usize,
    pub height: usize,
}

impl FromStr for GridSize {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (w, h) = s.split_once(['x', 'X']).ok_or_else(|| format!("grid `{s}` is not of the form WxH"))?;
        let parse = |t: &str| t.trim().parse::<usize>().map_err(|_| format!("grid `{s}` is not of the form WxH"));
        let (width, height) = (parse(w)?, parse(h)?);
        if width * height < 2 {
            return Err(format!("grid `{s}` has fewer than two vertices"));
        }
        Ok(Self { width, height })
    }
}

impl std::fmt::Display for GridSize {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}x{}", self.width, self.height)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_values_and_overrides() {
        let f = ConfigFile::parse("# sweep\nseeds = 20\ngrid = \"5x5, 6x6\"\nrho_grid = 0.1,0.2 # comment\n").unwrap();
        assert_eq!(f.pick::<u64>(None, "seeds").unwrap(), Some(20));
        assert_eq!(f.pick(Some(3u64), "seeds").unwrap(), Some(3));
        let grids: Vec<GridSize> = f.pick_list(None, "grid").unwrap().unwrap();
        assert_eq!(grids.len(), 2);
        assert_eq!(grids[1].to_string(), "6x6");
        assert_eq!(f.pick_list::<f64>(None, "rho-grid").unwrap(), Some(vec![0.1, 0.2]));
        assert_eq!(f.pick::<u64>(None, "missing").unwrap(), None);
    }

    #[test]
    fn malformed_files() {
        assert!(ConfigFile::parse("seeds 20").is_err());
        assert!(ConfigFile::parse("a = 1\na = 2").is_err());
        let f = ConfigFile::parse("seeds = many").unwrap();
        assert!(f.pick::<u64>(None, "seeds").is_err());
        assert!("5by5".parse::<GridSize>().is_err());
    }
}
