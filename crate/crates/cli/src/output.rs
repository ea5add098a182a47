//! Output files: `constraints.csv`, legacy ASCII VTK snapshots and 1D cuts.

use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use glmclean::{ConstraintReport, FieldSnapshot, Observer};

const AXIS_NAMES: [&str; 3] = ["x", "y", "z"];

/// Writes every requested field of `s` as one FIELD array of a
/// STRUCTURED_POINTS dataset. Lapse and conformal factor are written as
/// `alpha` and `phi`, not their logarithms.
pub fn write_vtk(path: &Path, s: &FieldSnapshot<f64>, fields: &[usize]) -> io::Result<()> {
    let g = s.grid();
    let h = g.spacings();
    let origin: [f64; 3] = std::array::from_fn(|d| g.coord(d, 0));
    let np = s.n_points();
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "# vtk DataFile Version 3.0")?;
    writeln!(w, "glmclean t={:e}", s.time())?;
    writeln!(w, "ASCII")?;
    writeln!(w, "DATASET STRUCTURED_POINTS")?;
    writeln!(w, "DIMENSIONS {} {} {}", g.n[0], g.n[1], g.n[2])?;
    writeln!(w, "ORIGIN {:e} {:e} {:e}", origin[0], origin[1], origin[2])?;
    writeln!(w, "SPACING {:e} {:e} {:e}", h[0], h[1], h[2])?;
    writeln!(w, "POINT_DATA {np}")?;
    writeln!(w, "FIELD fields {}", fields.len())?;
    let d = s.descriptor();
    for &c in fields {
        writeln!(w, "{} 1 {np} double", d.io_name(c))?;
        for p in 0..np {
            let sep = if p % 6 == 5 || p + 1 == np { '\n' } else { ' ' };
            write!(w, "{:e}{sep}", s.io_value(c, p))?;
        }
    }
    w.flush()
}

/// Shape summary read back from a legacy VTK file.
#[derive(Debug, PartialEq)]
pub struct VtkInfo {
    pub dimensions: [usize; 3],
    pub origin: [f64; 3],
    pub spacing: [f64; 3],
    pub fields: Vec<(String, Vec<f64>)>,
}

fn bad(msg: impl Into<String>) -> io::Error {
    io::Error::new(io::ErrorKind::InvalidData, msg.into())
}

fn triple<T: std::str::FromStr>(line: &str, key: &str) -> io::Result<[T; 3]> {
    let mut it = line.split_whitespace();
    if it.next() != Some(key) {
        return Err(bad(format!("expected {key}, found `{line}`")));
    }
    let v: Vec<T> = it
        .map(|x| x.parse().map_err(|_| bad(format!("bad {key} line"))))
        .collect::<Result<_, _>>()?;
    if v.len() != 3 {
        return Err(bad(format!("bad {key} line")));
    }
    let mut v = v.into_iter();
    Ok([v.next().unwrap(), v.next().unwrap(), v.next().unwrap()])
}

/// Parses a file written by [`write_vtk`] and checks that the header and the
/// array sizes agree.
pub fn read_vtk(path: &Path) -> io::Result<VtkInfo> {
    let text = std::fs::read_to_string(path)?;
    let mut lines = text.lines();
    let mut next = || lines.next().ok_or_else(|| bad("unexpected end of file"));
    if !next()?.starts_with("# vtk DataFile Version") {
        return Err(bad("missing VTK signature"));
    }
    next()?;
    if next()? != "ASCII" || next()? != "DATASET STRUCTURED_POINTS" {
        return Err(bad("not an ASCII STRUCTURED_POINTS file"));
    }
    let dimensions: [usize; 3] = triple(next()?, "DIMENSIONS")?;
    let origin = triple(next()?, "ORIGIN")?;
    let spacing = triple(next()?, "SPACING")?;
    let np: usize = next()?
        .strip_prefix("POINT_DATA ")
        .and_then(|v| v.trim().parse().ok())
        .ok_or_else(|| bad("bad POINT_DATA line"))?;
    if np != dimensions.iter().product::<usize>() {
        return Err(bad("POINT_DATA does not match DIMENSIONS"));
    }
    let nf: usize = next()?
        .strip_prefix("FIELD fields ")
        .and_then(|v| v.trim().parse().ok())
        .ok_or_else(|| bad("bad FIELD line"))?;
    let mut fields = Vec::with_capacity(nf);
    for _ in 0..nf {
        let head: Vec<&str> = next()?.split_whitespace().collect();
        if head.len() != 4 || head[1] != "1" || head[2].parse::<usize>().ok() != Some(np) {
            return Err(bad("bad array header"));
        }
        let mut vals = Vec::with_capacity(np);
        while vals.len() < np {
            for v in next()?.split_whitespace() {
                vals.push(v.parse::<f64>().map_err(|_| bad("bad value"))?);
            }
        }
        if vals.len() != np {
            return Err(bad(format!("array {} has the wrong length", head[0])));
        }
        fields.push((head[0].to_string(), vals));
    }
    Ok(VtkInfo {
        dimensions,
        origin,
        spacing,
        fields,
    })
}

/// Node index on each axis closest to the domain centre (the upper one of the
/// two central nodes on even axes).
pub fn center_index(n: [usize; 3]) -> [usize; 3] {
    n.map(|v| v / 2)
}

/// Rows `t, coordinate, fields...` of the line along `axis` through the centre.
pub fn cut_rows(s: &FieldSnapshot<f64>, axis: usize, fields: &[usize]) -> Vec<String> {
    let g = s.grid();
    let mut idx = center_index(g.n);
    (0..g.n[axis])
        .map(|i| {
            idx[axis] = i;
            let p = g.index(idx[0], idx[1], idx[2]);
            let mut row = format!("{:e},{:e}", s.time(), g.coord(axis, i));
            for &c in fields {
                row.push_str(&format!(",{:e}", s.io_value(c, p)));
            }
            row
        })
        .collect()
}

/// Observer that streams reports, snapshots and cuts into a run directory.
pub struct RunWriter {
    dir: PathBuf,
    csv: BufWriter<File>,
    header_written: bool,
    snapshot_fields: Vec<usize>,
    cut_fields: Vec<usize>,
    cuts: Vec<(usize, BufWriter<File>)>,
    snapshots: usize,
    last_cut_time: Option<f64>,
    error: Option<io::Error>,
}

impl RunWriter {
    pub fn create(
        dir: &Path,
        snapshot_fields: Vec<usize>,
        cut_axes: &[usize],
        cut_fields: Vec<usize>,
        names: &[String],
    ) -> io::Result<Self> {
        let csv = BufWriter::new(File::create(dir.join("constraints.csv"))?);
        let mut cuts = Vec::new();
        for &a in cut_axes {
            let mut w = BufWriter::new(File::create(
                dir.join(format!("cuts_{}.csv", AXIS_NAMES[a])),
            )?);
            let mut header = format!("t,{}", AXIS_NAMES[a]);
            for &c in &cut_fields {
                header.push(',');
                header.push_str(&names[c]);
            }
            writeln!(w, "{header}")?;
            cuts.push((a, w));
        }
        Ok(Self {
            dir: dir.to_path_buf(),
            csv,
            header_written: false,
            snapshot_fields,
            cut_fields,
            cuts,
            snapshots: 0,
            last_cut_time: None,
            error: None,
        })
    }

    fn keep(&mut self, r: io::Result<()>) {
        if let Err(e) = r {
            self.error.get_or_insert(e);
        }
    }

    fn write_report(&mut self, report: &ConstraintReport) -> io::Result<()> {
        if !self.header_written {
            writeln!(self.csv, "{}", report.csv_header())?;
            self.header_written = true;
        }
        writeln!(self.csv, "{}", report.csv_row())?;
        self.csv.flush()
    }

    fn write_cuts(&mut self, s: &FieldSnapshot<f64>) -> io::Result<()> {
        if self.last_cut_time == Some(s.time()) {
            return Ok(());
        }
        self.last_cut_time = Some(s.time());
        for (axis, w) in &mut self.cuts {
            for row in cut_rows(s, *axis, &self.cut_fields) {
                writeln!(w, "{row}")?;
            }
            w.flush()?;
        }
        Ok(())
    }

    fn write_snapshot(&mut self, s: &FieldSnapshot<f64>) -> io::Result<()> {
        let path = self.dir.join(format!("snapshot_{:04}.vtk", self.snapshots));
        self.snapshots += 1;
        write_vtk(&path, s, &self.snapshot_fields)?;
        self.write_cuts(s)
    }

    /// Writes the cuts of the final state and reports the first I/O error.
    pub fn finish(mut self, last: &FieldSnapshot<f64>) -> io::Result<usize> {
        let r = self.write_cuts(last);
        self.keep(r);
        let r = self.csv.flush();
        self.keep(r);
        match self.error {
            Some(e) => Err(e),
            None => Ok(self.snapshots),
        }
    }
}

impl Observer<f64> for RunWriter {
    fn report(&mut self, report: &ConstraintReport) {
        let r = self.write_report(report);
        self.keep(r);
    }

    fn snapshot(&mut self, state: &FieldSnapshot<f64>) {
        let r = self.write_snapshot(state);
        self.keep(r);
    }
}

/// Header and rows of a numeric CSV file such as `constraints.csv`.
#[derive(Clone, Debug, PartialEq)]
pub struct CsvTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

pub fn read_csv(path: &Path) -> io::Result<CsvTable> {
    let r = BufReader::new(File::open(path)?);
    let mut lines = r.lines();
    let header: Vec<String> = lines
        .next()
        .ok_or_else(|| bad(format!("{} is empty", path.display())))??
        .split(',')
        .map(String::from)
        .collect();
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let row: Vec<f64> = line
            .split(',')
            .map(|v| {
                v.parse()
                    .map_err(|_| bad(format!("{}: bad number on row {}", path.display(), i + 2)))
            })
            .collect::<Result<_, _>>()?;
        if row.len() != header.len() {
            return Err(bad(format!(
                "{}: row {} has {} columns",
                path.display(),
                i + 2,
                row.len()
            )));
        }
        rows.push(row);
    }
    Ok(CsvTable { header, rows })
}
