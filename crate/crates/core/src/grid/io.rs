//! Text grid files.
//!
//! ```text
//! # cql-grid v1
//! mode=cartesian dim=3 shape=4x4x4 h=0.25 origin=-0.375,-0.375,-0.375
//! mask=inline
//! 0 1 1 0 ...
//! <one value per line, row-major, last index fastest>
//! ```
//!
//! Radial files use `mode=radial dim=<n> shape=<nodes> R=<radius>`. Numbers are
//! written as shortest round-trip decimals.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use super::{CartesianGrid, Domain, Geometry, GridFunction, RadialMesh};
use crate::{Error, Result};

const MAGIC: &str = "# cql-grid v1";

pub fn write_grid<W: Write>(mut w: W, f: &GridFunction) -> Result<()> {
    writeln!(w, "{MAGIC}")?;
    match f.domain().geometry() {
        Geometry::Cartesian(g) => {
            let shape: Vec<String> = g.shape.iter().map(|k| k.to_string()).collect();
            let origin: Vec<String> = g.origin.iter().map(|o| o.to_string()).collect();
            writeln!(
                w,
                "mode=cartesian dim={} shape={} h={} origin={}",
                g.dim,
                shape.join("x"),
                g.h,
                origin.join(",")
            )?;
            if g.mask.iter().any(|&m| !m) {
                writeln!(w, "mask=inline")?;
                let row: Vec<&str> = g.mask.iter().map(|&m| if m { "1" } else { "0" }).collect();
                writeln!(w, "{}", row.join(" "))?;
            }
        }
        Geometry::Radial(m) => {
            writeln!(w, "mode=radial dim={} shape={} R={}", m.dim, m.nodes, m.radius)?;
        }
    }
    for v in f.values() {
        writeln!(w, "{v}")?;
    }
    Ok(())
}

pub fn store_grid(path: impl AsRef<Path>, f: &GridFunction) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_grid(&mut w, f)?;
    w.flush()?;
    Ok(())
}

pub fn load_grid(path: impl AsRef<Path>) -> Result<GridFunction> {
    read_grid(BufReader::new(File::open(path)?))
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

pub fn read_grid<R: BufRead>(r: R) -> Result<GridFunction> {
    let mut lines = r.lines().enumerate().map(|(i, l)| (i + 1, l));
    let mut next = |what: &str| -> Result<(usize, String)> {
        match lines.next() {
            Some((n, l)) => Ok((n, l?)),
            None => Err(parse_err(0, format!("unexpected end of file, expected {what}"))),
        }
    };

    let (n, magic) = next("header")?;
    if magic.trim() != MAGIC {
        return Err(parse_err(n, format!("expected `{MAGIC}`")));
    }
    let (hn, header) = next("geometry line")?;
    let mut mode = None;
    let mut dim = None;
    let mut shape = None;
    let mut h = None;
    let mut origin = None;
    let mut radius = None;
    for tok in header.split_whitespace() {
        let (k, v) = tok
            .split_once('=')
            .ok_or_else(|| parse_err(hn, format!("malformed token `{tok}`")))?;
        let num = |s: &str| -> Result<f64> {
            s.parse::<f64>()
                .map_err(|_| parse_err(hn, format!("bad number `{s}` for `{k}`")))
        };
        match k {
            "mode" => mode = Some(v.to_string()),
            "dim" => {
                dim = Some(
                    v.parse::<usize>()
                        .map_err(|_| parse_err(hn, format!("bad dim `{v}`")))?,
                )
            }
            "shape" => {
                let parts: std::result::Result<Vec<usize>, _> =
                    v.split('x').map(|s| s.parse::<usize>()).collect();
                shape = Some(parts.map_err(|_| parse_err(hn, format!("bad shape `{v}`")))?);
            }
            "h" => h = Some(num(v)?),
            "R" => radius = Some(num(v)?),
            "origin" => {
                let parts: Result<Vec<f64>> = v.split(',').map(num).collect();
                origin = Some(parts?);
            }
            _ => return Err(parse_err(hn, format!("unknown key `{k}`"))),
        }
    }
    let dim = dim.ok_or_else(|| parse_err(hn, "missing dim"))?;
    let shape = shape.ok_or_else(|| parse_err(hn, "missing shape"))?;

    let domain = match mode.as_deref() {
        Some("radial") => {
            if shape.len() != 1 {
                return Err(Error::structural(format!(
                    "radial shape must have one entry, got {}",
                    shape.len()
                )));
            }
            let radius = radius.ok_or_else(|| parse_err(hn, "radial grid needs R"))?;
            let mesh = RadialMesh::new(dim, radius, shape[0])?;
            if let Some(h) = h {
                if (h - mesh.h()).abs() > 1e-12 * mesh.h() {
                    return Err(Error::structural(format!(
                        "h={h} inconsistent with R/(nodes−1) = {}",
                        mesh.h()
                    )));
                }
            }
            Domain::new(Geometry::Radial(mesh))
        }
        Some("cartesian") => {
            if shape.len() != dim {
                return Err(Error::structural(format!(
                    "dim={dim} but shape has {} axes",
                    shape.len()
                )));
            }
            let h = h.ok_or_else(|| parse_err(hn, "cartesian grid needs h"))?;
            let origin = origin.unwrap_or_else(|| vec![0.0; dim]);
            let len: usize = shape.iter().product();
            let grid = CartesianGrid::new(shape, h, origin, None)?;
            Domain::new(Geometry::Cartesian(CartesianGrid {
                mask: vec![true; len],
                ..grid
            }))
        }
        Some(other) => return Err(parse_err(hn, format!("unknown mode `{other}`"))),
        None => return Err(parse_err(hn, "missing mode")),
    };

    let mut values = Vec::with_capacity(domain.len());
    let mut mask: Option<Vec<bool>> = None;
    let mut expect_mask_row = false;
    for (n, line) in lines {
        let line = line?;
        let t = line.trim();
        if t.is_empty() {
            continue;
        }
        if expect_mask_row {
            let mut m = Vec::with_capacity(domain.len());
            for tok in t.split_whitespace() {
                for c in tok.chars() {
                    match c {
                        '0' => m.push(false),
                        '1' => m.push(true),
                        _ => return Err(parse_err(n, format!("mask entry `{c}` is not 0/1"))),
                    }
                }
            }
            if m.len() != domain.len() {
                return Err(Error::structural(format!(
                    "mask has {} entries, grid has {} cells",
                    m.len(),
                    domain.len()
                )));
            }
            mask = Some(m);
            expect_mask_row = false;
            continue;
        }
        if t == "mask=inline" && values.is_empty() && mask.is_none() {
            if domain.is_radial() {
                return Err(parse_err(n, "radial grids carry no mask"));
            }
            expect_mask_row = true;
            continue;
        }
        let v = t
            .parse::<f64>()
            .map_err(|_| parse_err(n, format!("bad value `{t}`")))?;
        values.push(v);
    }
    if expect_mask_row {
        return Err(parse_err(0, "mask=inline without a mask row"));
    }
    if values.len() != domain.len() {
        return Err(Error::structural(format!(
            "payload has {} values, header shape needs {}",
            values.len(),
            domain.len()
        )));
    }
    let domain = match (mask, domain.geometry()) {
        (Some(mask), Geometry::Cartesian(g)) => {
            if values.iter().zip(&mask).any(|(v, &m)| !m && *v != 0.0) {
                return Err(Error::structural("non-zero value outside the mask"));
            }
            Domain::new(Geometry::Cartesian(CartesianGrid {
                mask,
                ..g.clone()
            }))
        }
        _ => domain,
    };
    GridFunction::new(domain, values)
}
