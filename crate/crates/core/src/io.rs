//! OFF meshes, point CSV files and atomic writes.
//!
//! OFF output lists vertices in mesh order and triangles as stored, so a
//! round trip reproduces the mesh exactly (coordinates are written with
//! shortest round-trip formatting).

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::mesh::TriSurface;
use crate::simplicial::Point;

/// Writes `bytes` to a temporary file next to `path` and renames it into
/// place, so readers never see a partial file.
pub fn atomic_write(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    std::fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error.to_string()))?;
    Ok(())
}

pub fn mesh_to_off(m: &TriSurface) -> String {
    let mut out = format!("OFF\n{} {} 0\n", m.vertex_count(), m.face_count());
    for p in m.coords() {
        writeln!(out, "{:?} {:?} {:?}", p[0], p[1], p[2]).expect("writing to a string");
    }
    for t in m.triangles() {
        writeln!(out, "3 {} {} {}", t[0], t[1], t[2]).expect("writing to a string");
    }
    out
}

/// Parses an OFF file holding a closed triangle mesh. `#` comments and
/// blank lines are ignored.
pub fn mesh_from_off(text: &str) -> Result<TriSurface> {
    let mut tokens = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or(""))
        .flat_map(str::split_whitespace);
    let bad = |what: &str| Error::Parse(format!("OFF: {what}"));
    if tokens.next() != Some("OFF") {
        return Err(bad("missing OFF header"));
    }
    let mut count = |what: &str| -> Result<usize> {
        tokens
            .next()
            .ok_or_else(|| bad(&format!("missing {what}")))?
            .parse::<usize>()
            .map_err(|_| bad(&format!("invalid {what}")))
    };
    let (nv, nf, _ne) = (count("vertex count")?, count("face count")?, count("edge count")?);
    let mut real = || -> Result<f64> {
        tokens
            .next()
            .ok_or_else(|| bad("truncated vertex list"))?
            .parse::<f64>()
            .map_err(|_| bad("invalid coordinate"))
    };
    let mut coords = Vec::with_capacity(nv);
    for _ in 0..nv {
        coords.push([real()?, real()?, real()?]);
    }
    let mut index = || -> Result<usize> {
        tokens
            .next()
            .ok_or_else(|| bad("truncated face list"))?
            .parse::<usize>()
            .map_err(|_| bad("invalid face entry"))
    };
    let mut triangles = Vec::with_capacity(nf);
    for f in 0..nf {
        if index()? != 3 {
            return Err(bad(&format!("face {f} is not a triangle")));
        }
        triangles.push([index()?, index()?, index()?]);
    }
    TriSurface::new(coords, triangles)
}

pub fn read_off(path: &Path) -> Result<TriSurface> {
    mesh_from_off(&read_to_string(path)?)
}

fn read_to_string(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// Parses `x,y` or `x,y,z` rows. A header row is accepted when its first
/// field is not a number; every row must have the same arity.
pub fn points_from_csv(text: &str) -> Result<Vec<Point>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let mut points: Vec<Point> = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::Parse(format!("points CSV: {e}")))?;
        if i == 0 && record.get(0).is_some_and(|f| f.parse::<f64>().is_err()) {
            continue;
        }
        let p = record
            .iter()
            .map(|f| f.parse::<f64>().map_err(|_| Error::Parse(format!("points CSV row {}: invalid number {f:?}", i + 1))))
            .collect::<Result<Point>>()?;
        if !(2..=3).contains(&p.len()) {
            return Err(Error::Parse(format!("points CSV row {}: expected 2 or 3 columns", i + 1)));
        }
        if points.first().is_some_and(|q| q.len() != p.len()) {
            return Err(Error::Parse(format!("points CSV row {}: inconsistent column count", i + 1)));
        }
        points.push(p);
    }
    Ok(points)
}

pub fn points_to_csv(points: &[Point]) -> String {
    let mut out = String::new();
    if let Some(first) = points.first() {
        out.push_str(["x", "y", "z"][..first.len().min(3)].join(",").as_str());
        out.push('\n');
    }
    for p in points {
        let row: Vec<String> = p.iter().map(|x| format!("{x:?}")).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

pub fn read_points_csv(path: &Path) -> Result<Vec<Point>> {
    points_from_csv(&read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::shapes;

    #[test]
    fn off_round_trip_is_exact() {
        let m = shapes::icosahedron();
        let back = mesh_from_off(&mesh_to_off(&m)).unwrap();
        assert_eq!(back, m);
        assert_eq!(back.triangles(), m.triangles());
    }

    #[test]
    fn off_errors() {
        assert!(matches!(mesh_from_off("PLY\n"), Err(Error::Parse(_))));
        assert!(matches!(mesh_from_off("OFF\n4 4 0\n0 0 0\n"), Err(Error::Parse(_))));
        let quad = "OFF\n4 1 0\n0 0 0\n1 0 0\n1 1 0\n0 1 0\n4 0 1 2 3\n";
        assert!(matches!(mesh_from_off(quad), Err(Error::Parse(_))));
    }

    #[test]
    fn points_csv_round_trip() {
        let pts = vec![vec![0.1, -2.0, 3.5], vec![1e-17, 4.0, 0.0]];
        assert_eq!(points_from_csv(&points_to_csv(&pts)).unwrap(), pts);
        assert_eq!(points_from_csv("0,1\n2,3\n").unwrap(), vec![vec![0.0, 1.0], vec![2.0, 3.0]]);
        assert!(points_from_csv("1,2\n3,4,5\n").is_err());
        assert!(points_from_csv("x\n1\n").is_err());
    }

    #[test]
    fn atomic_write_replaces_contents() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("nested/out.txt");
        atomic_write(&path, b"first").unwrap();
        atomic_write(&path, b"second").unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap(), "second");
        assert_eq!(std::fs::read_dir(path.parent().unwrap()).unwrap().count(), 1);
    }
}
