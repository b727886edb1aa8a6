//! Scenario files.
//!
//! ```text
//! # comment
//! [domain]
//! mode = radial          # or cartesian
//! dim = 5
//! radius = 1
//! nodes = 2001           # radial; cartesian takes h
//!
//! [potential]
//! kind = well            # zero, constant, well, hardy, sampled
//! depth = -4
//! radius = 0.5
//!
//! [solver]
//! init = bubble          # or ground
//! eps = 0.1
//! cutoff = 0.5
//! tol = 1e-6
//! ```

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use cql_core::bubbles::BubbleSpec;
use cql_core::grid::{load_grid, Domain, PotentialKind, PotentialSpec};
use cql_core::minimize::{Init, MinimizeOptions};

use crate::error::CliError;

const SECTIONS: [&str; 3] = ["domain", "potential", "solver"];

type Section = BTreeMap<String, (usize, String)>;

#[derive(Debug, Default)]
struct Raw {
    sections: BTreeMap<String, Section>,
}

fn parse_raw(text: &str) -> Result<Raw, CliError> {
    let mut raw = Raw::default();
    let mut current: Option<String> = None;
    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('[') {
            let name = rest
                .strip_suffix(']')
                .ok_or_else(|| CliError::config(lineno, "unterminated section header"))?
                .trim();
            if !SECTIONS.contains(&name) {
                return Err(CliError::config(lineno, format!("unknown section [{name}]")));
            }
            if raw.sections.contains_key(name) {
                return Err(CliError::config(lineno, format!("duplicate section [{name}]")));
            }
            raw.sections.insert(name.to_string(), Section::new());
            current = Some(name.to_string());
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| CliError::config(lineno, "expected `key = value`"))?;
        let section = current
            .as_ref()
            .ok_or_else(|| CliError::config(lineno, "key outside of a section"))?;
        let key = key.trim().to_string();
        let entry = raw.sections.get_mut(section).unwrap();
        if entry.contains_key(&key) {
            return Err(CliError::config(lineno, format!("duplicate key `{key}`")));
        }
        entry.insert(key, (lineno, value.trim().to_string()));
    }
    Ok(raw)
}

/// Typed, consumed view of one section; leftover keys are errors.
struct Reader<'a> {
    name: &'a str,
    keys: Section,
}

impl<'a> Reader<'a> {
    fn new(raw: &mut Raw, name: &'a str) -> Self {
        Self {
            name,
            keys: raw.sections.remove(name).unwrap_or_default(),
        }
    }

    fn take_str(&mut self, key: &str) -> Option<(usize, String)> {
        self.keys.remove(key)
    }

    fn opt<T: std::str::FromStr>(&mut self, key: &str) -> Result<Option<T>, CliError> {
        match self.take_str(key) {
            None => Ok(None),
            Some((line, v)) => v
                .parse()
                .map(Some)
                .map_err(|_| CliError::config(line, format!("invalid value `{v}` for {key}"))),
        }
    }

    fn req<T: std::str::FromStr>(&mut self, key: &str) -> Result<T, CliError> {
        self.opt(key)?
            .ok_or_else(|| CliError::config(0, format!("[{}] is missing `{key}`", self.name)))
    }

    fn finish(self) -> Result<(), CliError> {
        match self.keys.into_iter().next() {
            Some((k, (line, _))) => Err(CliError::config(line, format!("unknown key `{k}` in [{}]", self.name))),
            None => Ok(()),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Scenario {
    pub name: String,
    pub domain: Arc<Domain>,
    pub potential: PotentialSpec,
    pub init: Init,
    pub options: MinimizeOptions,
}

impl Scenario {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Input {
            path: path.to_path_buf(),
            source,
        })?;
        let name = path
            .file_stem()
            .and_then(|s| s.to_str())
            .unwrap_or("scenario")
            .to_string();
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Self::parse(&name, &text, &base)
    }

    /// Relative file references resolve against `base`.
    pub fn parse(name: &str, text: &str, base: &Path) -> Result<Self, CliError> {
        let mut raw = parse_raw(text)?;
        if !raw.sections.contains_key("domain") {
            return Err(CliError::config(0, "missing [domain] section"));
        }

        let mut d = Reader::new(&mut raw, "domain");
        let n: usize = d.req("dim")?;
        if !(3..=12).contains(&n) {
            return Err(CliError::config(0, format!("dim must lie in 3..=12, got {n}")));
        }
        let radius: f64 = d.opt("radius")?.unwrap_or(1.0);
        let mode = d.take_str("mode").map(|(_, v)| v).unwrap_or_else(|| "radial".into());
        let domain = match mode.as_str() {
            "radial" => Domain::radial_ball(n, radius, d.req("nodes")?)?,
            "cartesian" => Domain::cartesian_ball(n, radius, d.req("h")?)?,
            other => return Err(CliError::config(0, format!("unknown domain mode `{other}`"))),
        };
        d.finish()?;

        let mut p = Reader::new(&mut raw, "potential");
        let kind = p.take_str("kind").map(|(_, v)| v).unwrap_or_else(|| "zero".into());
        let mut potential = match kind.as_str() {
            "zero" => PotentialSpec::zero(n),
            "constant" => PotentialSpec::constant(p.req("lambda")?, n),
            "well" => PotentialSpec::well(p.req("radius")?, p.req("depth")?, n),
            "hardy" => PotentialSpec::hardy(p.req("coupling")?, n),
            "sampled" => {
                let (line, file) = p
                    .take_str("file")
                    .ok_or_else(|| CliError::config(0, "[potential] is missing `file`"))?;
                let path = resolve(base, &file);
                if !path.exists() {
                    return Err(CliError::config(line, format!("file `{}` does not exist", path.display())));
                }
                let g = load_grid(&path)?;
                if g.values().len() != domain.len() || g.domain().dim() != n {
                    return Err(CliError::config(line, "sampled potential does not match the domain"));
                }
                let mut spec = PotentialSpec::zero(n);
                spec.kind = PotentialKind::Sampled(g.into_values());
                spec
            }
            other => return Err(CliError::config(0, format!("unknown potential kind `{other}`"))),
        };
        if let Some(cap) = p.opt::<f64>("cap")? {
            potential = potential.with_cap(cap);
        }
        if let Some(floor) = p.opt::<f64>("floor")? {
            potential = potential.with_floor(floor);
        }
        p.finish()?;
        if n == 4 {
            match potential.cap {
                Some(c) if c > 0.0 => return Err(CliError::config(0, "four-dimensional scenarios need cap = 0")),
                _ => potential = potential.with_cap(0.0),
            }
        }
        potential.validate()?;

        let mut s = Reader::new(&mut raw, "solver");
        let mut options = MinimizeOptions::default();
        if let Some(v) = s.opt("max_iter")? {
            options.max_iter = v;
        }
        if let Some(v) = s.opt("tol")? {
            options.tol = v;
        }
        if let Some(v) = s.opt("seed")? {
            options.seed = Some(v);
        }
        if let Some(v) = s.opt("perturbation")? {
            options.perturbation = v;
        }
        if let Some(v) = s.opt("stop_on_concentration")? {
            options.stop_on_concentration = v;
        }
        let init = match s.take_str("init").map(|(_, v)| v).as_deref() {
            None | Some("ground") => Init::Ground,
            Some("bubble") => {
                let mut spec = BubbleSpec::new(n, s.req("eps")?)?;
                if let Some(mu) = s.opt::<f64>("cutoff")? {
                    spec = spec.with_cutoff(mu)?;
                }
                Init::Bubble(spec)
            }
            Some(other) => return Err(CliError::config(0, format!("unknown init `{other}`"))),
        };
        s.finish()?;

        Ok(Scenario {
            name: name.to_string(),
            domain,
            potential,
            init,
            options,
        })
    }
}

fn resolve(base: &Path, file: &str) -> PathBuf {
    let p = PathBuf::from(file);
    if p.is_absolute() {
        p
    } else {
        base.join(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<Scenario, CliError> {
        Scenario::parse("t", text, Path::new("."))
    }

    #[test]
    fn full_scenario() {
        let s = parse(
            "# well\n[domain]\nmode = radial\ndim = 5\nnodes = 101\n\n[potential]\nkind = well # inline\ndepth = -4\nradius = 0.5\n[solver]\ninit = bubble\neps = 0.1\ncutoff = 0.5\nseed = 3\n",
        )
        .unwrap();
        assert_eq!(s.domain.dim(), 5);
        assert_eq!(s.domain.len(), 101);
        assert!(matches!(s.potential.kind, PotentialKind::Well { depth, .. } if depth == -4.0));
        assert!(matches!(s.init, Init::Bubble(_)));
        assert_eq!(s.options.seed, Some(3));
    }

    #[test]
    fn four_dimensions_force_cap() {
        let s = parse("[domain]\ndim = 4\nnodes = 50\n[potential]\nkind = constant\nlambda = -1\n").unwrap();
        assert_eq!(s.potential.cap, Some(0.0));
        let e = parse("[domain]\ndim = 4\nnodes = 50\n[potential]\nkind = constant\nlambda = -1\ncap = 2\n").unwrap_err();
        assert!(e.to_string().contains("cap = 0"));
    }

    #[test]
    fn errors_carry_lines() {
        let e = parse("[domain]\ndim = 5\nnodes = ten\n").unwrap_err();
        assert!(matches!(e, CliError::Config { line: 3, .. }), "{e}");
        let e = parse("[domain]\ndim = 5\nnodes = 10\nwat = 1\n").unwrap_err();
        assert!(matches!(e, CliError::Config { line: 4, .. }), "{e}");
        assert!(parse("dim = 5\n").is_err());
        assert!(parse("[mesh]\n").is_err());
        assert!(parse("[potential]\nkind = zero\n").is_err());
        assert!(parse("[domain]\ndim = 5\nnodes = 10\n[domain]\n").is_err());
    }

    #[test]
    fn missing_sampled_file() {
        let e = parse("[domain]\ndim = 5\nnodes = 10\n[potential]\nkind = sampled\nfile = nope.grid\n").unwrap_err();
        assert!(e.to_string().contains("does not exist"));
    }
}
