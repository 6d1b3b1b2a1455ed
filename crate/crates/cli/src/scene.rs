//! Scene file format: flat sections of `key = value` lines.
//!
//! ```text
//! # derivation notes are comments
//! [scene]
//! manifold = "disk2"
//! field = "(1, 0)"
//!
//! [options]
//! epsilon = 0.05
//! tol = 1e-8
//! grid_h = 0.02
//! seed = 0
//!
//! [hints]
//! zero = "1, 0"
//! ```
//!
//! Strings are double-quoted, numbers are plain literals, `zero` hint keys
//! may repeat. Unknown keys are errors so typos fail loudly.

use std::fmt;
use std::str::FromStr;
use vfindex::{ManifoldName, Params, VecN};

#[derive(Debug)]
pub struct SceneError {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for SceneError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "scene parse error at line {}: {}", self.line, self.message)
    }
}

impl std::error::Error for SceneError {}

#[derive(Debug, Clone)]
pub struct Scene {
    pub manifold: ManifoldName,
    pub field_src: String,
    /// Optional default theorem/index selector.
    pub mode: Option<String>,
    pub params: Params,
}

fn err(line: usize, message: impl Into<String>) -> SceneError {
    SceneError {
        line,
        message: message.into(),
    }
}

fn unquote(line: usize, raw: &str) -> Result<String, SceneError> {
    let raw = raw.trim();
    if raw.len() >= 2 && raw.starts_with('"') && raw.ends_with('"') {
        Ok(raw[1..raw.len() - 1].to_string())
    } else {
        Err(err(line, format!("expected a quoted string, found `{raw}`")))
    }
}

fn number(line: usize, raw: &str) -> Result<f64, SceneError> {
    raw.trim()
        .parse::<f64>()
        .map_err(|_| err(line, format!("expected a number, found `{raw}`")))
}

fn parse_point(line: usize, raw: &str) -> Result<VecN, SceneError> {
    let coords: Result<Vec<f64>, _> = raw.split(',').map(|c| number(line, c)).collect();
    let coords = coords?;
    if !(1..=3).contains(&coords.len()) {
        return Err(err(line, "points have 1 to 3 coordinates"));
    }
    Ok(VecN::from_slice(&coords))
}

pub fn parse_scene(text: &str) -> Result<Scene, SceneError> {
    let mut section = String::new();
    let mut manifold: Option<(usize, String)> = None;
    let mut field: Option<String> = None;
    let mut mode: Option<String> = None;
    let mut params = Params::default();

    for (idx, raw_line) in text.lines().enumerate() {
        let line = idx + 1;
        let content = match raw_line.find('#') {
            Some(pos) => &raw_line[..pos],
            None => raw_line,
        };
        let content = content.trim();
        if content.is_empty() {
            continue;
        }
        if content.starts_with('[') {
            if !content.ends_with(']') {
                return Err(err(line, "unterminated section header"));
            }
            section = content[1..content.len() - 1].trim().to_string();
            match section.as_str() {
                "scene" | "options" | "hints" => continue,
                other => return Err(err(line, format!("unknown section `[{other}]`"))),
            }
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| err(line, "expected `key = value`"))?;
        let key = key.trim();
        match (section.as_str(), key) {
            ("scene", "manifold") => manifold = Some((line, unquote(line, value)?)),
            ("scene", "field") => field = Some(unquote(line, value)?),
            ("scene", "mode") => mode = Some(unquote(line, value)?),
            ("options", "epsilon") => {
                let v = number(line, value)?;
                if !(v > 0.0 && v <= 0.1) {
                    return Err(err(line, "epsilon must lie in (0, 0.1]"));
                }
                params.epsilon = v;
            }
            ("options", "tol") => {
                let v = number(line, value)?;
                if !(1e-12..=1e-4).contains(&v) {
                    return Err(err(line, "tol must lie in [1e-12, 1e-4]"));
                }
                params.zero_tol = v;
            }
            ("options", "grid_h") => {
                let v = number(line, value)?;
                if !(v > 0.0 && v <= 0.2) {
                    return Err(err(line, "grid_h must lie in (0, 0.2]"));
                }
                params.grid_h = v;
            }
            ("options", "margin_min") => {
                let v = number(line, value)?;
                if !(v > 0.0 && v <= 0.1) {
                    return Err(err(line, "margin_min must lie in (0, 0.1]"));
                }
                params.margin_min = v;
            }
            ("options", "seed") => {
                params.seed = number(line, value)? as u64;
            }
            ("hints", "zero") => {
                let text = unquote(line, value)?;
                params.zero_hints.push(parse_point(line, &text)?);
            }
            ("", k) => return Err(err(line, format!("key `{k}` outside any section"))),
            (s, k) => return Err(err(line, format!("unknown key `{k}` in section `[{s}]`"))),
        }
    }

    let (mline, mname) = manifold.ok_or_else(|| err(0, "missing `manifold` in [scene]"))?;
    let manifold = ManifoldName::from_str(&mname)
        .map_err(|_| err(mline, format!("unknown manifold `{mname}`")))?;
    let field_src = field.ok_or_else(|| err(0, "missing `field` in [scene]"))?;
    Ok(Scene {
        manifold,
        field_src,
        mode,
        params,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_full_scene() {
        let text = r#"
# fixture
[scene]
manifold = "disk2"
field = "(1, 0)"
mode = "1"

[options]
epsilon = 0.04
tol = 1e-9
seed = 7

[hints]
zero = "1, 0"
zero = "-1, 0"
"#;
        let s = parse_scene(text).unwrap();
        assert_eq!(s.manifold, ManifoldName::Disk2);
        assert_eq!(s.field_src, "(1, 0)");
        assert_eq!(s.mode.as_deref(), Some("1"));
        assert_eq!(s.params.epsilon, 0.04);
        assert_eq!(s.params.seed, 7);
        assert_eq!(s.params.zero_hints.len(), 2);
    }

    #[test]
    fn reports_line_numbers() {
        let text = "[scene]\nmanifold = \"disk2\"\nfield = (1, 0)\n";
        let e = parse_scene(text).unwrap_err();
        assert_eq!(e.line, 3);
        let text = "[scene]\nmanifold = \"noplace\"\nfield = \"(1, 0)\"\n";
        let e = parse_scene(text).unwrap_err();
        assert_eq!(e.line, 2);
    }

    #[test]
    fn rejects_out_of_range_options() {
        let text = "[scene]\nmanifold = \"disk2\"\nfield = \"(1, 0)\"\n[options]\nepsilon = 0.5\n";
        let e = parse_scene(text).unwrap_err();
        assert_eq!(e.line, 5);
    }

    #[test]
    fn missing_manifold_is_an_error() {
        let e = parse_scene("[scene]\nfield = \"(1, 0)\"\n").unwrap_err();
        assert!(e.message.contains("manifold"));
    }
}
